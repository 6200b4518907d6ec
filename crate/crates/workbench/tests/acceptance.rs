//! Acceptance gate: one line per criterion, tolerances pinned here.
//!
//! Run with `cargo test -p groupoid-workbench --test acceptance -- --nocapture`
//! to see the lines.

use std::time::{Duration, Instant};

use groupoid_cstar::bundle::{check_grading_axioms, check_topological_grading, GradedSubspaceFamily};
use groupoid_cstar::group::FiniteGroup;
use groupoid_cstar::groupoid::group_groupoid;
use groupoid_cstar::linalg::max_entry;
use groupoid_cstar::module::{
    check_sandwich_identity, expectation_p, kernel_check, module_inner_product, module_norm, InducedSpace,
};
use groupoid_cstar::rep::{cstar_norm, decompose_rep_u, min_eigenvalue, translate_rep_v};
use groupoid_cstar::{Complex64, ConvolutionAlgebra, GroupoidFunction, HaarSystem};
use groupoid_workbench::corpus::builtin_corpus;
use groupoid_workbench::document::{self, WorkbenchDocument};
use groupoid_workbench::random::Sampler;
use groupoid_workbench::suites::{verify, Suite};

const SEED: u64 = 20_240_601;
const SPECTRAL: f64 = 1e-9;
const ALGEBRAIC: f64 = 1e-12;
const DEFINITE_MODULE: f64 = 1e-9;
const DEFINITE_NORM: f64 = 1e-6;
const RANDOM_PER_INSTANCE: usize = 100;
const UNITARY_SAMPLES: usize = 20;
const IDENTITY_SAMPLES: usize = 20;
const KERNEL_SAMPLES: usize = 20;
const RATIO_SAMPLES: usize = 200;
const GRADING_PAIR_SAMPLES: usize = 10;
const RUNTIME_BUDGET: Duration = Duration::from_secs(60);

struct Criterion {
    label: &'static str,
    passed: usize,
    total: usize,
    worst: f64,
    failure: Option<String>,
}

impl Criterion {
    fn new(label: &'static str) -> Self {
        Self {
            label,
            passed: 0,
            total: 0,
            worst: 0.0,
            failure: None,
        }
    }

    fn check(&mut self, ok: bool, value: f64, at: impl FnOnce() -> String) {
        self.total += 1;
        self.worst = self.worst.max(value);
        if ok {
            self.passed += 1;
        } else if self.failure.is_none() {
            self.failure = Some(at());
        }
    }

    fn ok(&self) -> bool {
        self.total > 0 && self.passed == self.total
    }

    fn line(&self) -> String {
        let mut s = format!(
            "{} {}: {}/{} (worst {:.3e})",
            if self.ok() { "PASS" } else { "FAIL" },
            self.label,
            self.passed,
            self.total,
            self.worst
        );
        if let Some(f) = &self.failure {
            s.push_str(&format!(" first failure: {f}"));
        }
        s
    }
}

fn corpus() -> Vec<WorkbenchDocument> {
    builtin_corpus(SEED)
        .iter()
        .map(|raw| document::build(raw).expect("corpus documents are valid"))
        .collect()
}

fn samples(doc: &WorkbenchDocument, key: &str, fiber: bool, count: usize) -> Vec<GroupoidFunction> {
    let len = if fiber {
        doc.graded.fiber_algebra().dim()
    } else {
        doc.graded.algebra().dim()
    };
    Sampler::new(SEED, &["acceptance", &doc.name, key]).functions(len, count)
}

fn rel(a: &GroupoidFunction, b: &GroupoidFunction) -> f64 {
    a.max_distance(b) / (1.0 + a.max_abs().max(b.max_abs()))
}

fn isometric_inclusion(docs: &[WorkbenchDocument]) -> Criterion {
    let mut c = Criterion::new("1 isometric inclusion |‖i(f)‖ - ‖f‖| <= 1e-9 (1 + ‖f‖)");
    for doc in docs {
        let g = &doc.graded;
        for (k, f) in samples(doc, "inclusion", true, RANDOM_PER_INSTANCE).iter().enumerate() {
            let nf = cstar_norm(&g.fiber_algebra(), f).unwrap();
            let ni = cstar_norm(&g.algebra(), &g.include(f).unwrap()).unwrap();
            let gap = (nf - ni).abs() / (1.0 + nf);
            c.check(gap <= SPECTRAL, gap, || format!("{} sample {k}", doc.name));
        }
    }
    c
}

fn sandwich_and_contraction(docs: &[WorkbenchDocument]) -> (Criterion, Criterion) {
    let mut sandwich = Criterion::new("2 norm sandwich ‖Q(a)‖ <= ‖a‖_X <= ‖L_a‖ <= ‖a‖_I, slack 1e-9");
    let mut contraction = Criterion::new("3 contraction ‖Q(a)‖ <= ‖a‖, slack 1e-9");
    for doc in docs {
        let g = &doc.graded;
        let space = InducedSpace::new(g).unwrap();
        for (k, a) in samples(doc, "sandwich", false, RANDOM_PER_INSTANCE).iter().enumerate() {
            let restricted = cstar_norm(&g.fiber_algebra(), &g.restrict(a).unwrap()).unwrap();
            let module = module_norm(g, a).unwrap();
            let left = space.l_operator_norm(g, a).unwrap();
            let i_norm = g.algebra().i_norm(a).unwrap();
            let full = cstar_norm(&g.algebra(), a).unwrap();
            let excess = [restricted - module, module - left, left - i_norm]
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max);
            let ok = restricted <= module + SPECTRAL * (1.0 + module)
                && module <= left + SPECTRAL * (1.0 + left)
                && left <= i_norm + SPECTRAL * (1.0 + i_norm);
            sandwich.check(ok, excess, || {
                format!("{} sample {k}: {restricted} {module} {left} {i_norm}", doc.name)
            });
            contraction.check(
                restricted <= full + SPECTRAL * (1.0 + full),
                restricted - full,
                || format!("{} sample {k}: {restricted} > {full}", doc.name),
            );
        }
    }
    (sandwich, contraction)
}

fn cstar_identity(docs: &[WorkbenchDocument]) -> Criterion {
    let mut c = Criterion::new("4 C*-identity and submultiplicative I-norm, 1e-9 relative");
    for doc in docs {
        let alg = doc.graded.algebra();
        let a_s = samples(doc, "cstar-a", false, RANDOM_PER_INSTANCE);
        let b_s = samples(doc, "cstar-b", false, RANDOM_PER_INSTANCE);
        for (k, (a, b)) in a_s.iter().zip(&b_s).enumerate() {
            let na = cstar_norm(&alg, a).unwrap();
            let square = alg.convolve(&alg.involute(a).unwrap(), a).unwrap();
            let ns = cstar_norm(&alg, &square).unwrap();
            let gap = (ns - na * na).abs() / (na * na).max(ns);
            c.check(gap <= SPECTRAL, gap, || format!("{} sample {k}: ‖a*a‖ {ns} vs ‖a‖² {}", doc.name, na * na));
            let ab = alg.convolve(a, b).unwrap();
            let (iab, ia, ib) = (alg.i_norm(&ab).unwrap(), alg.i_norm(a).unwrap(), alg.i_norm(b).unwrap());
            let excess = (iab - ia * ib) / (ia * ib);
            c.check(excess <= SPECTRAL, excess.max(0.0), || format!("{} sample {k}: I-norm {iab} > {ia}·{ib}", doc.name));
        }
    }
    c
}

fn decomposition_unitaries(docs: &[WorkbenchDocument]) -> Criterion {
    let mut c = Criterion::new("5 block and translation identities entrywise 1e-12, every unit and fibre");
    let mut weighted = false;
    for doc in docs {
        let g = &doc.graded;
        weighted |= !g.haar().is_counting();
        let groupoid = g.groupoid();
        for (k, a_e) in samples(doc, "unitaries", true, UNITARY_SAMPLES).iter().enumerate() {
            for u in 0..groupoid.unit_count() {
                let d = decompose_rep_u(g, a_e, u).unwrap();
                let scale = 1.0 + max_entry(&d.permuted);
                c.check(d.deviation <= ALGEBRAIC * scale, d.deviation / scale, || {
                    format!("{} sample {k} unit {}: block deviation {}", doc.name, groupoid.unit_id(u), d.deviation)
                });
                for (el, _) in g.fibers() {
                    if g.fiber_at(el, u).is_empty() {
                        continue;
                    }
                    let t = translate_rep_v(g, a_e, u, el).unwrap();
                    let scale = 1.0 + max_entry(&t.target.matrix).max(max_entry(&t.conjugated));
                    let ok = t.deviation <= ALGEBRAIC * scale && t.unitarity_defect <= ALGEBRAIC;
                    c.check(ok, (t.deviation / scale).max(t.unitarity_defect), || {
                        format!(
                            "{} sample {k} unit {} degree {el}: deviation {} unitarity {}",
                            doc.name,
                            groupoid.unit_id(u),
                            t.deviation,
                            t.unitarity_defect
                        )
                    });
                }
            }
        }
    }
    c.check(weighted, 0.0, || "no instance with non-counting Haar weights".into());
    c
}

fn sandwich_identity(docs: &[WorkbenchDocument]) -> Criterion {
    let mut c = Criterion::new("6 i(<b, a b>) = b* P(a) b for fibre basis b, 1e-12");
    for doc in docs {
        let alg = doc.graded.algebra();
        for (k, a) in samples(doc, "identity", false, IDENTITY_SAMPLES).iter().enumerate() {
            for x in 0..alg.dim() {
                let out = check_sandwich_identity(&doc.graded, a, &alg.delta(x)).unwrap();
                let d = rel(&out.lhs, &out.rhs);
                c.check(d <= ALGEBRAIC, d, || {
                    format!("{} sample {k} b = δ_{}", doc.name, doc.graded.groupoid().arrow_id(x))
                });
            }
        }
    }
    c
}

fn kernel(docs: &[WorkbenchDocument]) -> Criterion {
    let mut c = Criterion::new("7 L_a = 0 iff P(a* a) = 0 iff a = 0, random a and zero");
    for doc in docs {
        let g = &doc.graded;
        let space = InducedSpace::new(g).unwrap();
        let mut inputs = samples(doc, "kernel", false, KERNEL_SAMPLES);
        inputs.push(g.algebra().zero());
        let report = kernel_check(g, &space, &inputs).unwrap();
        for (k, e) in report.entries.iter().enumerate() {
            c.check(e.consistent, 0.0, || format!("{} input {k}: {e:?}", doc.name));
        }
        let zero = report.entries.last().unwrap();
        c.check(zero.l_norm == 0.0 && zero.expectation_norm == 0.0 && zero.norm == 0.0, 0.0, || {
            format!("{} zero element: {zero:?}", doc.name)
        });
    }
    c
}

fn grading(docs: &[WorkbenchDocument]) -> Criterion {
    let mut c = Criterion::new("8 grading axioms exact, P id on A_e and 0 elsewhere, sup ‖P(a)‖/‖a‖ <= 1 + 1e-9");
    for doc in docs {
        let g = &doc.graded;
        let family = GradedSubspaceFamily::new(g);
        let pairs = samples(doc, "grading", false, GRADING_PAIR_SAMPLES);
        let axioms = check_grading_axioms(&family, &pairs).unwrap();
        c.check(axioms.holds(), 0.0, || format!("{}: {axioms:?}", doc.name));
        let ratio = samples(doc, "ratio", false, RATIO_SAMPLES);
        let top = check_topological_grading(&family, &ratio).unwrap();
        let ok = top.fixes_unit
            && top.identity_witnesses.is_empty()
            && top.vanishing_witnesses.is_empty()
            && top.sup_ratio <= 1.0 + SPECTRAL;
        c.check(ok, top.sup_ratio, || format!("{}: {top:?}", doc.name));
        // P on each basis element directly
        let alg = g.algebra();
        for (el, fiber) in g.fibers() {
            for &x in fiber {
                let p = expectation_p(g, &alg.delta(x)).unwrap();
                let expected = if el == g.identity_element() { alg.delta(x) } else { alg.zero() };
                c.check(p == expected, 0.0, || format!("{}: P(δ_{})", doc.name, g.groupoid().arrow_id(x)));
            }
        }
    }
    c
}

fn positivity(docs: &[WorkbenchDocument]) -> Criterion {
    let mut c = Criterion::new("9 <a, a> >= -1e-9 (1 + ‖<a, a>‖); module norm <= 1e-9 forces ‖a‖ <= 1e-6");
    for doc in docs {
        let g = &doc.graded;
        let fa = g.fiber_algebra();
        let alg = g.algebra();
        let random = samples(doc, "positivity", false, RANDOM_PER_INSTANCE);
        for (k, a) in random.iter().enumerate() {
            let aa = module_inner_product(g, a, a).unwrap();
            let top = cstar_norm(&fa, &aa).unwrap();
            let lo = min_eigenvalue(&fa, &aa).unwrap();
            c.check(lo >= -SPECTRAL * (1.0 + top), (-lo).max(0.0), || format!("{} sample {k}: {lo}", doc.name));
        }
        let mut probes = vec![alg.zero(), random[0].scale(Complex64::new(1e-12, 0.0))];
        probes.extend(random.iter().cloned());
        for (k, a) in probes.iter().enumerate() {
            let m = module_norm(g, a).unwrap();
            let n = cstar_norm(&alg, a).unwrap();
            let ok = m > DEFINITE_MODULE || n <= DEFINITE_NORM;
            c.check(ok, if m <= DEFINITE_MODULE { n } else { 0.0 }, || {
                format!("{} probe {k}: module norm {m}, norm {n}", doc.name)
            });
        }
    }
    c
}

fn closed_forms(docs: &[WorkbenchDocument]) -> Criterion {
    let mut c = Criterion::new("10 δ_x δ_y = rho(s(x)) δ_xy, ‖δ_x‖ = sqrt(rho(s(x)) rho(r(x))), Z/2 norms max|α ± β|, 1e-12");
    for doc in docs {
        let g = doc.graded.groupoid();
        let alg = doc.graded.algebra();
        let rho = doc.graded.haar().rho();
        for x in 0..g.arrow_count() {
            for y in 0..g.arrow_count() {
                let prod = alg.convolve(&alg.delta(x), &alg.delta(y)).unwrap();
                let expected = match g.compose(x, y) {
                    Some(xy) => alg.delta(xy).scale(Complex64::new(rho[g.source(x)], 0.0)),
                    None => alg.zero(),
                };
                let d = rel(&prod, &expected);
                c.check(d <= ALGEBRAIC, d, || format!("{}: δ_{} δ_{}", doc.name, g.arrow_id(x), g.arrow_id(y)));
            }
            let expected = (rho[g.source(x)] * rho[g.range(x)]).sqrt();
            let got = cstar_norm(&alg, &alg.delta(x)).unwrap();
            let d = (got - expected).abs() / (1.0 + expected);
            c.check(d <= ALGEBRAIC, d, || format!("{}: ‖δ_{}‖ = {got}, expected {expected}", doc.name, g.arrow_id(x)));
        }
    }
    let z2 = group_groupoid(&FiniteGroup::cyclic(2)).unwrap();
    let haar = HaarSystem::counting(&z2);
    let alg = ConvolutionAlgebra::new(&z2, &haar).unwrap();
    let mut sampler = Sampler::new(SEED, &["acceptance", "z2"]);
    for k in 0..RANDOM_PER_INSTANCE {
        let (alpha, beta) = (sampler.coefficient(), sampler.coefficient());
        let got = cstar_norm(&alg, &GroupoidFunction::new(vec![alpha, beta])).unwrap();
        let expected = (alpha + beta).norm().max((alpha - beta).norm());
        let d = (got - expected).abs() / (1.0 + expected);
        c.check(d <= ALGEBRAIC, d, || format!("Z/2 sample {k}: {got} vs {expected}"));
    }
    c
}

fn runtime(docs: &[WorkbenchDocument]) -> (Criterion, Duration) {
    let mut c = Criterion::new("verify --suite all on the corpus, count 100, within 60 s, all passing");
    let start = Instant::now();
    let report = verify(docs, Suite::All, SEED, RANDOM_PER_INSTANCE);
    let elapsed = start.elapsed();
    c.check(report.all_passed() && report.summary.samples > 0, 0.0, || {
        format!("{} failed entries", report.summary.failed)
    });
    c.check(elapsed <= RUNTIME_BUDGET, elapsed.as_secs_f64(), || format!("took {elapsed:?}"));
    (c, elapsed)
}

#[test]
fn acceptance() {
    let docs = corpus();
    assert!(docs.len() >= 12, "corpus has {} documents", docs.len());
    let (sandwich, contraction) = sandwich_and_contraction(&docs);
    let (run, elapsed) = runtime(&docs);
    let criteria = [
        isometric_inclusion(&docs),
        sandwich,
        contraction,
        cstar_identity(&docs),
        decomposition_unitaries(&docs),
        sandwich_identity(&docs),
        kernel(&docs),
        grading(&docs),
        positivity(&docs),
        closed_forms(&docs),
        run,
    ];
    println!("acceptance over {} corpus documents, seed {SEED}", docs.len());
    for c in &criteria {
        println!("{}", c.line());
    }
    println!("verify --suite all took {:.2} s", elapsed.as_secs_f64());
    let failed: Vec<&str> = criteria.iter().filter(|c| !c.ok()).map(|c| c.label).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
