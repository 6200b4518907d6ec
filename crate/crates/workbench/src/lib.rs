//! Document format, seeded corpus, verification suites and reports for
//! graded groupoid algebras.

pub mod corpus;
pub mod document;
pub mod random;
pub mod report;
pub mod suites;

pub use document::{parse, parse_lenient, DocumentError, WorkbenchDocument};
pub use report::{ReportEntry, Status, VerificationReport};
pub use suites::{verify, Suite};
