use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use groupoid_cstar::module::{InducedSpace, NormSandwich};
use groupoid_cstar::rep::cstar_norm;
use groupoid_cstar::SPECTRAL_TOL;
use groupoid_workbench::corpus::builtin_corpus;
use groupoid_workbench::document::{self, WorkbenchDocument};
use groupoid_workbench::suites::{verify, Suite};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "workbench", version, about = "Norms and structure checks for graded groupoid algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a document.
    Validate { file: PathBuf },
    /// Print the norms of one function and check the norm sandwich.
    Norms {
        file: PathBuf,
        /// A function defined in the document, or `unit` / `zero`.
        #[arg(long = "fn")]
        function: String,
    },
    /// Run property suites on a document or on the built-in corpus.
    Verify {
        #[arg(required_unless_present = "corpus", conflicts_with = "corpus")]
        file: Option<PathBuf>,
        #[arg(long)]
        corpus: bool,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Also write the machine-readable report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write the built-in corpus as one JSON document per instance.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

struct InputError(String);

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load(path: &Path, lenient: bool) -> Result<WorkbenchDocument, InputError> {
    let text = read(path)?;
    let parsed = if lenient { document::parse_lenient(&text) } else { document::parse(&text) };
    parsed.map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn validate(file: &Path) -> Result<u8, InputError> {
    let doc = load(file, false)?;
    let graded = &doc.graded;
    let g = graded.groupoid();
    println!("{}: valid", doc.name);
    println!("units       {}", g.unit_count());
    println!("arrows      {}", g.arrow_count());
    println!("haar        {}", if graded.haar().is_counting() { "counting" } else { "weighted" });
    println!("group       {}", graded.group().describe());
    let sizes: Vec<String> = graded.fibers().map(|(el, f)| format!("{el}:{}", f.len())).collect();
    println!("fibres      {}", sizes.join(" "));
    println!("identity    {} arrows", graded.identity_fiber().groupoid.arrow_count());
    println!("functions   {}", doc.functions.keys().cloned().collect::<Vec<_>>().join(" "));
    Ok(0)
}

fn norms(file: &Path, name: &str) -> Result<u8, InputError> {
    let doc = load(file, false)?;
    let a = doc
        .function(name)
        .ok_or_else(|| InputError(format!("unknown function {name:?} in {}", doc.name)))?;
    let graded = &doc.graded;
    let fail = |e: groupoid_cstar::Error| InputError(e.to_string());
    let space = InducedSpace::new(graded).map_err(fail)?;
    let s = NormSandwich::compute(graded, &space, &a).map_err(fail)?;
    let full = cstar_norm(&graded.algebra(), &a).map_err(fail)?;
    println!("{} on {}", name, doc.name);
    println!("i_norm           {}", s.i_norm);
    println!("cstar_norm       {full}");
    println!("module_norm      {}", s.module);
    println!("l_operator_norm  {}", s.left);
    println!("restricted_norm  {}", s.restricted);
    let holds = s.holds(SPECTRAL_TOL);
    println!(
        "sandwich         {} (||Q(a)|| <= ||a||_X <= ||L_a|| <= ||a||_I, slack {SPECTRAL_TOL:e})",
        if holds { "holds" } else { "FAILS" }
    );
    Ok(if holds { 0 } else { EXIT_FAIL })
}

fn run_verify(
    file: Option<&Path>,
    corpus: bool,
    suite: Suite,
    seed: u64,
    count: usize,
    json: Option<&Path>,
) -> Result<u8, InputError> {
    let docs = if corpus {
        builtin_corpus(seed)
            .iter()
            .map(|raw| document::build(raw).map_err(|e| InputError(format!("{}: {e}", raw.name))))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        vec![load(file.expect("clap requires a file without --corpus"), true)?]
    };
    let report = verify(&docs, suite, seed, count);
    print!("{}", report.render_text());
    if let Some(path) = json {
        fs::write(path, report.to_json() + "\n").map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    }
    Ok(if report.all_passed() { 0 } else { EXIT_FAIL })
}

fn write_corpus(seed: u64, out: &Path) -> Result<u8, InputError> {
    fs::create_dir_all(out).map_err(|e| InputError(format!("{}: {e}", out.display())))?;
    for raw in builtin_corpus(seed) {
        let path = out.join(format!("{}.json", raw.name));
        let text = serde_json::to_string_pretty(&raw).expect("documents serialise") + "\n";
        fs::write(&path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        println!("{}", path.display());
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Norms { file, function } => norms(file, function),
        Command::Verify {
            file,
            corpus,
            suite,
            seed,
            count,
            json,
        } => run_verify(file.as_deref(), *corpus, *suite, *seed, *count, json.as_deref()),
        Command::Corpus { seed, out } => write_corpus(*seed, out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
