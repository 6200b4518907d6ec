//! Property suites run by `workbench verify`.

use std::cell::OnceCell;
use std::fmt;

use groupoid_cstar::bundle::{
    bundle_rep_check, check_grading_axioms, check_topological_grading, BundleRepresentation,
    GradedSubspaceFamily,
};
use groupoid_cstar::module::{
    check_sandwich_identity, expectation_p, kernel_check, module_action, module_action_via_convolution,
    module_inner_product, module_norm, InducedSpace, NormSandwich,
};
use groupoid_cstar::rep::{
    cstar_norm, decompose_rep_u, min_eigenvalue, norm_chain, positivity_check, translate_rep_v,
};
use groupoid_cstar::{Complex64, GroupoidFunction, ALGEBRAIC_TOL, SPECTRAL_TOL};
use serde_json::{json, Map, Value};

use crate::document::WorkbenchDocument;
use crate::random::Sampler;
use crate::report::{ReportEntry, Status, Tolerances, VerificationReport};

/// Threshold below which a module norm counts as zero.
pub const MODULE_ZERO: f64 = 1e-9;
/// Bound on `‖a‖` that a numerically null module norm must force.
pub const DEFINITE_BOUND: f64 = 1e-6;
/// Sample pairs used by the quadratic bundle checks.
pub const PAIR_SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    Haar,
    Algebra,
    Norms,
    Inclusion,
    Module,
    Expectation,
    Bundle,
    All,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Haar,
        Suite::Algebra,
        Suite::Norms,
        Suite::Inclusion,
        Suite::Module,
        Suite::Expectation,
        Suite::Bundle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Haar => "haar",
            Suite::Algebra => "algebra",
            Suite::Norms => "norms",
            Suite::Inclusion => "inclusion",
            Suite::Module => "module",
            Suite::Expectation => "expectation",
            Suite::Bundle => "bundle",
            Suite::All => "all",
        }
    }

    /// The concrete suites this selector stands for.
    pub fn expand(self) -> Vec<Suite> {
        if self == Suite::All {
            Suite::ALL.to_vec()
        } else {
            vec![self]
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

type Witness = Map<String, Value>;

fn relative(a: &GroupoidFunction, b: &GroupoidFunction) -> f64 {
    a.max_distance(b) / (1.0 + a.max_abs().max(b.max_abs()))
}

/// `lo ≤ hi` up to `tol · (1 + |hi|)`.
fn below(lo: f64, hi: f64, tol: f64) -> bool {
    lo <= hi + tol * (1.0 + hi.abs())
}

/// Pass counter with the worst observed value and, on failure, where.
struct Tally {
    passed: usize,
    total: usize,
    worst: f64,
    first_failure: Option<Value>,
}

impl Tally {
    fn new() -> Self {
        Self {
            passed: 0,
            total: 0,
            worst: 0.0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, value: f64, at: impl FnOnce() -> Value) {
        self.total += 1;
        if value.is_nan() {
            self.worst = f64::NAN;
        } else if !self.worst.is_nan() {
            self.worst = self.worst.max(value);
        }
        if ok {
            self.passed += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some(at());
        }
    }

    fn witness(&self, worst_name: &str) -> Witness {
        let mut w = Witness::new();
        w.insert(worst_name.into(), number(self.worst));
        if let Some(at) = &self.first_failure {
            w.insert("first_failure".into(), at.clone());
        }
        w
    }
}

fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or_else(|| Value::String(format!("{x}")), Value::Number)
}

struct Runner<'a> {
    doc: &'a WorkbenchDocument,
    seed: u64,
    count: usize,
    suite: Suite,
    space: OnceCell<InducedSpace>,
    entries: Vec<ReportEntry>,
}

type CheckResult = groupoid_cstar::Result<()>;

impl<'a> Runner<'a> {
    fn samples(&self, check: &str, len: usize, count: usize) -> Vec<GroupoidFunction> {
        Sampler::new(self.seed, &[self.suite.name(), &self.doc.name, check]).functions(len, count)
    }

    fn full(&self, check: &str) -> Vec<GroupoidFunction> {
        self.samples(check, self.doc.graded.algebra().dim(), self.count)
    }

    fn fiber(&self, check: &str) -> Vec<GroupoidFunction> {
        self.samples(check, self.doc.graded.fiber_algebra().dim(), self.count)
    }

    fn space(&self) -> groupoid_cstar::Result<&InducedSpace> {
        if self.space.get().is_none() {
            let _ = self.space.set(InducedSpace::new(&self.doc.graded)?);
        }
        Ok(self.space.get().expect("just initialised"))
    }

    #[allow(clippy::too_many_arguments)]
    fn push(&mut self, check: &str, anchor: &str, status: Status, passed: usize, total: usize, tolerance: f64, witness: Witness) {
        self.entries.push(ReportEntry {
            suite: self.suite.name().into(),
            instance: self.doc.name.clone(),
            check: check.into(),
            anchor: anchor.into(),
            status,
            passed,
            total,
            tolerance,
            tolerances: Tolerances::default(),
            seed: self.seed,
            witness,
        });
    }

    fn push_tally(&mut self, check: &str, anchor: &str, tally: &Tally, tolerance: f64, worst_name: &str) {
        let status = if tally.passed == tally.total { Status::Pass } else { Status::Fail };
        self.push(check, anchor, status, tally.passed, tally.total, tolerance, tally.witness(worst_name));
    }

    /// Turns an unexpected library error into a failing entry.
    fn guard(&mut self, check: &str, anchor: &str, result: CheckResult) {
        if let Err(e) = result {
            let mut w = Witness::new();
            w.insert("error".into(), Value::String(e.to_string()));
            self.push(check, anchor, Status::Fail, 0, 1, 0.0, w);
        }
    }

    fn arrow(&self, x: usize) -> Value {
        Value::String(self.doc.graded.groupoid().arrow_id(x).into())
    }

    // haar

    fn haar(&mut self) {
        let g = self.doc.graded.groupoid();
        let mut w = Witness::new();
        w.insert("counting".into(), Value::Bool(self.doc.graded.haar().is_counting()));
        w.insert("declared_table".into(), Value::Bool(self.doc.declared_weights.is_some()));
        let pairs: usize = (0..g.arrow_count()).map(|x| g.with_range(g.range(x)).len()).sum();
        match self.doc.haar_violation() {
            None => self.push("left_invariance", "Haar weights are left invariant", Status::Pass, pairs, pairs, ALGEBRAIC_TOL, w),
            Some(v) => {
                w.insert("axiom".into(), Value::String(v.axiom.name().into()));
                w.insert("arrows".into(), json!(v.witness));
                self.push("left_invariance", "Haar weights are left invariant", Status::Fail, 0, pairs, ALGEBRAIC_TOL, w);
            }
        }
    }

    // algebra

    fn algebra(&mut self) -> CheckResult {
        let alg = self.doc.graded.algebra();
        let a = self.full("a");
        let b = self.full("b");
        let c = self.full("c");
        let e = alg.unit();

        let mut assoc = Tally::new();
        let mut star = Tally::new();
        let mut unit = Tally::new();
        let mut i_sub = Tally::new();
        let mut cstar_id = Tally::new();
        let mut dominated = Tally::new();
        let mut squares = Tally::new();
        for k in 0..self.count {
            let (a, b, c) = (&a[k], &b[k], &c[k]);
            let ab = alg.convolve(a, b)?;
            let d = relative(&alg.convolve(&ab, c)?, &alg.convolve(a, &alg.convolve(b, c)?)?);
            assoc.record(d <= ALGEBRAIC_TOL, d, || json!({ "sample": k }));
            let d = relative(&alg.involute(&ab)?, &alg.convolve(&alg.involute(b)?, &alg.involute(a)?)?);
            star.record(d <= ALGEBRAIC_TOL, d, || json!({ "sample": k }));
            let d = relative(&alg.convolve(&e, a)?, a).max(relative(&alg.convolve(a, &e)?, a));
            unit.record(d <= ALGEBRAIC_TOL, d, || json!({ "sample": k }));

            let (ia, ib, iab) = (alg.i_norm(a)?, alg.i_norm(b)?, alg.i_norm(&ab)?);
            i_sub.record(below(iab, ia * ib, SPECTRAL_TOL), iab / (ia * ib), || json!({ "sample": k }));
            let na = cstar_norm(&alg, a)?;
            let square = alg.convolve(&alg.involute(a)?, a)?;
            let ns = cstar_norm(&alg, &square)?;
            let gap = (ns - na * na).abs() / (1.0 + na * na);
            cstar_id.record(gap <= SPECTRAL_TOL, gap, || json!({ "sample": k, "norm": na, "square_norm": ns }));
            dominated.record(below(na, ia, SPECTRAL_TOL), na / ia, || json!({ "sample": k }));
            let lo = min_eigenvalue(&alg, &square)?;
            squares.record(lo >= -SPECTRAL_TOL * (1.0 + ns), -lo, || json!({ "sample": k, "min_eigenvalue": lo }));
        }
        self.push_tally("associativity", "convolution is associative", &assoc, ALGEBRAIC_TOL, "max_relative_deviation");
        self.push_tally("involution_reverses_products", "(ab)* = b* a*", &star, ALGEBRAIC_TOL, "max_relative_deviation");
        self.push_tally("unit", "e = sum of rho(u)^-1 delta_u is a two-sided unit", &unit, ALGEBRAIC_TOL, "max_relative_deviation");
        self.push_tally("i_norm_submultiplicative", "the I-norm is submultiplicative", &i_sub, SPECTRAL_TOL, "max_ratio");
        self.push_tally("cstar_identity", "||a* a|| = ||a||^2", &cstar_id, SPECTRAL_TOL, "max_relative_gap");
        self.push_tally("cstar_below_i_norm", "the C*-norm is dominated by the I-norm", &dominated, SPECTRAL_TOL, "max_ratio");
        self.push_tally("squares_positive", "a* a is positive", &squares, SPECTRAL_TOL, "max_negative_eigenvalue");
        Ok(())
    }

    // norms

    fn norms(&mut self) -> CheckResult {
        let graded = &self.doc.graded;
        let alg = graded.algebra();
        let fa = graded.fiber_algebra();
        let samples = self.full("a");
        let space = self.space()?.clone();

        let psd = space.gram_min_eigenvalue() >= -SPECTRAL_TOL * (1.0 + space.gram_max_eigenvalue());
        let mut w = Witness::new();
        w.insert("min_eigenvalue".into(), number(space.gram_min_eigenvalue()));
        w.insert("max_eigenvalue".into(), number(space.gram_max_eigenvalue()));
        w.insert("rank".into(), json!(space.rank()));
        self.push(
            "gram_positive",
            "the module inner product is positive on the interior tensor product",
            if psd { Status::Pass } else { Status::Fail },
            usize::from(psd),
            1,
            SPECTRAL_TOL,
            w,
        );

        let mut sandwich = Tally::new();
        let mut contraction = Tally::new();
        let mut left_gap: f64 = 0.0;
        let mut coincide = 0;
        for (k, a) in samples.iter().enumerate() {
            let s = NormSandwich::compute(graded, &space, a)?;
            let slack = [s.restricted - s.module, s.module - s.left, s.left - s.i_norm]
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max);
            sandwich.record(s.holds(SPECTRAL_TOL), slack, || {
                json!({ "sample": k, "restricted": s.restricted, "module": s.module, "left": s.left, "i_norm": s.i_norm })
            });
            let full = cstar_norm(&alg, a)?;
            let restricted = cstar_norm(&fa, &graded.restrict(a)?)?;
            contraction.record(below(restricted, full, SPECTRAL_TOL), restricted - full, || {
                json!({ "sample": k, "restricted": restricted, "full": full })
            });
            let gap = (s.left - full).abs();
            left_gap = left_gap.max(gap);
            if gap <= SPECTRAL_TOL * (1.0 + full) {
                coincide += 1;
            }
        }
        self.push_tally(
            "sandwich",
            "||Q(a)|| <= ||a||_X <= ||L_a|| <= ||a||_I",
            &sandwich,
            SPECTRAL_TOL,
            "max_excess",
        );
        self.push_tally(
            "restriction_contracts",
            "restriction to G_e is a contraction C*(G) -> C*(G_e)",
            &contraction,
            SPECTRAL_TOL,
            "max_excess",
        );
        let mut w = Witness::new();
        w.insert("max_abs_gap".into(), number(left_gap));
        w.insert("coinciding".into(), json!(coincide));
        self.push(
            "left_norm_vs_cstar_norm",
            "comparison of ||L_a|| on the module with ||a|| in C*(G)",
            Status::Recorded,
            coincide,
            samples.len(),
            SPECTRAL_TOL,
            w,
        );
        let mut w = Witness::new();
        w.insert(
            "note".into(),
            Value::String("finite dimensional: full and reduced C*-norms coincide".into()),
        );
        self.push("full_equals_reduced", "full and reduced C*-norms agree", Status::Recorded, 0, 0, 0.0, w);
        Ok(())
    }

    // inclusion

    fn inclusion(&mut self) -> CheckResult {
        let graded = &self.doc.graded;
        let g = graded.groupoid();
        let alg = graded.algebra();
        let fa = graded.fiber_algebra();
        let samples = self.fiber("f");
        let translation_samples = self.fiber("a_e");

        let mut iso = Tally::new();
        for (k, f) in samples.iter().enumerate() {
            let nf = cstar_norm(&fa, f)?;
            let ni = cstar_norm(&alg, &graded.include(f)?)?;
            let gap = (nf - ni).abs();
            iso.record(gap <= SPECTRAL_TOL * (1.0 + nf), gap / (1.0 + nf), || {
                json!({ "sample": k, "norm_in_g_e": nf, "norm_in_g": ni })
            });
        }

        let mut blocks = Tally::new();
        let mut translations = Tally::new();
        let mut chain_gap: f64 = 0.0;
        for (k, a_e) in translation_samples.iter().enumerate() {
            for u in 0..g.unit_count() {
                let d = decompose_rep_u(graded, a_e, u)?;
                blocks.record(d.holds, d.deviation, || json!({ "sample": k, "unit": g.unit_id(u) }));
                for (el, _) in graded.fibers() {
                    if graded.fiber_at(el, u).is_empty() {
                        continue;
                    }
                    let t = translate_rep_v(graded, a_e, u, el)?;
                    translations.record(t.holds, t.deviation.max(t.unitarity_defect), || {
                        json!({ "sample": k, "unit": g.unit_id(u), "degree": el.to_string(), "connector": g.arrow_id(t.connector) })
                    });
                }
            }
            let chain = norm_chain(graded, a_e)?;
            chain_gap = chain_gap
                .max((chain.ambient - chain.identity_fiber).abs())
                .max((chain.blocks - chain.identity_fiber).abs());
        }
        self.push_tally(
            "isometry",
            "inclusion C*(G_e) -> C*(G) is isometric",
            &iso,
            SPECTRAL_TOL,
            "max_relative_gap",
        );
        self.push_tally(
            "block_decomposition",
            "U pi_u(i(a)) U* is the direct sum over fibres of pi_u^gamma(a)",
            &blocks,
            ALGEBRAIC_TOL,
            "max_deviation",
        );
        self.push_tally(
            "translation",
            "V pi_u^gamma(a) V* = pi_v^e(a) with V unitary",
            &translations,
            ALGEBRAIC_TOL,
            "max_deviation",
        );
        let mut w = Witness::new();
        w.insert("max_abs_gap".into(), number(chain_gap));
        self.push(
            "norm_chain",
            "norms of a_e in C*(G_e), in the fibre blocks and in C*(G)",
            Status::Recorded,
            translation_samples.len(),
            translation_samples.len(),
            SPECTRAL_TOL,
            w,
        );
        Ok(())
    }

    // module

    fn module(&mut self) -> CheckResult {
        let graded = &self.doc.graded;
        let alg = graded.algebra();
        let fa = graded.fiber_algebra();
        let a = self.full("a");
        let b = self.full("b");
        let d = self.full("d");
        let g_e = self.fiber("g");

        let mut action = Tally::new();
        let mut linear = Tally::new();
        let mut hermitian = Tally::new();
        let mut positive = Tally::new();
        let mut schwarz = Tally::new();
        let mut adjoint = Tally::new();
        let mut definite = Tally::new();
        for k in 0..self.count {
            let (a, b, d, g) = (&a[k], &b[k], &d[k], &g_e[k]);
            let dev = relative(&module_action(graded, a, g)?, &module_action_via_convolution(graded, a, g)?);
            action.record(dev <= ALGEBRAIC_TOL, dev, || json!({ "sample": k }));

            let ab = module_inner_product(graded, a, b)?;
            let lhs = module_inner_product(graded, a, &module_action(graded, b, g)?)?;
            let dev = relative(&lhs, &fa.convolve(&ab, g)?);
            linear.record(dev <= ALGEBRAIC_TOL, dev, || json!({ "sample": k }));
            let dev = relative(&fa.involute(&ab)?, &module_inner_product(graded, b, a)?);
            hermitian.record(dev <= ALGEBRAIC_TOL, dev, || json!({ "sample": k }));

            let aa = module_inner_product(graded, a, a)?;
            let top = cstar_norm(&fa, &aa)?;
            let lo = min_eigenvalue(&fa, &aa)?;
            positive.record(lo >= -SPECTRAL_TOL * (1.0 + top), -lo, || json!({ "sample": k, "min_eigenvalue": lo }));

            let (na, nb) = (module_norm(graded, a)?, module_norm(graded, b)?);
            let nab = cstar_norm(&fa, &ab)?;
            schwarz.record(below(nab, na * nb, SPECTRAL_TOL), nab - na * nb, || json!({ "sample": k }));

            let lhs = module_inner_product(graded, &alg.convolve(a, b)?, d)?;
            let rhs = module_inner_product(graded, b, &alg.convolve(&alg.involute(a)?, d)?)?;
            let dev = relative(&lhs, &rhs);
            adjoint.record(dev <= ALGEBRAIC_TOL, dev, || json!({ "sample": k }));
        }
        let mut definite_inputs = a.clone();
        definite_inputs.push(alg.zero());
        for (k, x) in definite_inputs.iter().enumerate() {
            let m = module_norm(graded, x)?;
            let n = cstar_norm(&alg, x)?;
            let ok = m > MODULE_ZERO || n <= DEFINITE_BOUND;
            definite.record(ok, if m <= MODULE_ZERO { n } else { 0.0 }, || json!({ "sample": k, "module_norm": m, "norm": n }));
        }
        self.push_tally("action_is_convolution", "a . g = a * i(g)", &action, ALGEBRAIC_TOL, "max_relative_deviation");
        self.push_tally("inner_product_linear", "<a, b . g> = <a, b> g", &linear, ALGEBRAIC_TOL, "max_relative_deviation");
        self.push_tally("inner_product_hermitian", "<a, b>* = <b, a>", &hermitian, ALGEBRAIC_TOL, "max_relative_deviation");
        self.push_tally("positivity", "<a, a> >= 0 in C*(G_e)", &positive, SPECTRAL_TOL, "max_negative_eigenvalue");
        self.push_tally(
            "definiteness",
            "<a, a> = 0 only for a = 0",
            &definite,
            MODULE_ZERO,
            "max_norm_with_null_module_norm",
        );
        self.push_tally("cauchy_schwarz", "||<a, b>|| <= ||a||_X ||b||_X", &schwarz, SPECTRAL_TOL, "max_excess");
        self.push_tally(
            "left_multiplication_adjointable",
            "<a b, d> = <b, a* d>",
            &adjoint,
            ALGEBRAIC_TOL,
            "max_relative_deviation",
        );
        Ok(())
    }

    // expectation

    fn expectation(&mut self) -> CheckResult {
        let graded = &self.doc.graded;
        let g = graded.groupoid();
        let alg = graded.algebra();
        let a = self.full("a");
        let left = self.fiber("f");
        let right = self.fiber("h");
        let scale = Sampler::new(self.seed, &[self.suite.name(), &self.doc.name, "b"]).coefficient();

        let mut identity = Tally::new();
        for (k, a) in a.iter().enumerate() {
            for x in 0..g.arrow_count() {
                let b = alg.delta(x).scale(scale);
                let out = check_sandwich_identity(graded, a, &b)?;
                identity.record(out.holds, relative(&out.lhs, &out.rhs), || json!({ "sample": k, "b": self.arrow(x) }));
            }
        }

        let mut kernel_inputs = a.clone();
        kernel_inputs.push(alg.zero());
        let space = self.space()?.clone();
        let report = kernel_check(graded, &space, &kernel_inputs)?;
        let mut kernel = Tally::new();
        for (k, e) in report.entries.iter().enumerate() {
            kernel.record(e.consistent, e.l_norm.min(e.norm), || {
                json!({ "sample": k, "l_norm": e.l_norm, "expectation_norm": e.expectation_norm, "norm": e.norm })
            });
        }

        let mut idempotent = Tally::new();
        let mut bimodule = Tally::new();
        let mut positive = Tally::new();
        let mut contractive = Tally::new();
        for (k, x) in a.iter().enumerate() {
            let p = expectation_p(graded, x)?;
            let dev = relative(&expectation_p(graded, &p)?, &p);
            idempotent.record(dev <= ALGEBRAIC_TOL, dev, || json!({ "sample": k }));
            let f = graded.include(&left[k])?;
            let h = graded.include(&right[k])?;
            let fxh = alg.convolve(&alg.convolve(&f, x)?, &h)?;
            let dev = relative(&expectation_p(graded, &fxh)?, &alg.convolve(&alg.convolve(&f, &p)?, &h)?);
            bimodule.record(dev <= ALGEBRAIC_TOL, dev, || json!({ "sample": k }));
            let square = alg.convolve(&alg.involute(x)?, x)?;
            let ps = expectation_p(graded, &square)?;
            let ok = positivity_check(&alg, &ps)?;
            positive.record(ok, -min_eigenvalue(&alg, &ps)?, || json!({ "sample": k }));
            let (np, nx) = (cstar_norm(&alg, &p)?, cstar_norm(&alg, x)?);
            contractive.record(below(np, nx, SPECTRAL_TOL), np - nx, || json!({ "sample": k }));
        }
        self.push_tally(
            "sandwich_identity",
            "i(<b, a b>) = b* P(a) b for b in one fibre",
            &identity,
            ALGEBRAIC_TOL,
            "max_relative_deviation",
        );
        self.push_tally(
            "kernel",
            "L_a = 0 iff P(a* a) = 0 iff a = 0",
            &kernel,
            SPECTRAL_TOL,
            "max_min_of_norms",
        );
        self.push_tally("idempotent", "P o P = P", &idempotent, ALGEBRAIC_TOL, "max_relative_deviation");
        self.push_tally("bimodule", "P(f a h) = f P(a) h for f, h on G_e", &bimodule, ALGEBRAIC_TOL, "max_relative_deviation");
        self.push_tally("positive", "P(a* a) >= 0", &positive, SPECTRAL_TOL, "max_negative_eigenvalue");
        self.push_tally("contractive", "||P(a)|| <= ||a||", &contractive, SPECTRAL_TOL, "max_excess");
        Ok(())
    }

    // bundle

    fn bundle(&mut self) -> CheckResult {
        let graded = &self.doc.graded;
        let family = GradedSubspaceFamily::new(graded);
        let n = graded.algebra().dim();
        let pairs = self.samples("pairs", n, self.count.min(PAIR_SAMPLES));
        let ratio_samples = self.samples("ratio", n, 2 * self.count);

        let axioms = check_grading_axioms(&family, &pairs)?;
        let mut w = Witness::new();
        w.insert("product_witnesses".into(), json!(axioms.product_witnesses));
        w.insert("adjoint_witnesses".into(), json!(axioms.adjoint_witnesses));
        w.insert("sample_witnesses".into(), json!(axioms.sample_witnesses));
        let total = n * n + n + pairs.len() * pairs.len();
        let failed = axioms.product_witnesses.len() + axioms.adjoint_witnesses.len() + axioms.sample_witnesses.len();
        self.push(
            "products_and_adjoints",
            "A_beta A_gamma in A_(beta gamma) and A_gamma* = A_(gamma^-1)",
            if axioms.multiplicative() { Status::Pass } else { Status::Fail },
            total - failed,
            total,
            0.0,
            w,
        );
        let mut w = Witness::new();
        w.insert("dimension_sum".into(), json!(axioms.dimension_sum));
        w.insert("arrows".into(), json!(axioms.arrow_count));
        w.insert("overlaps".into(), json!(axioms.overlap_witnesses));
        let spans = axioms.spanning() && axioms.independent();
        self.push(
            "spanning_and_independent",
            "the A_gamma span C_c(G) and have disjoint supports",
            if spans { Status::Pass } else { Status::Fail },
            usize::from(spans),
            1,
            0.0,
            w,
        );

        let top = check_topological_grading(&family, &ratio_samples)?;
        let mut w = Witness::new();
        w.insert("fixes_unit".into(), Value::Bool(top.fixes_unit));
        w.insert("identity_witnesses".into(), json!(top.identity_witnesses));
        w.insert("vanishing_witnesses".into(), json!(top.vanishing_witnesses));
        w.insert("sup_ratio".into(), number(top.sup_ratio));
        w.insert("samples".into(), json!(ratio_samples.len()));
        self.push(
            "topological_grading",
            "P(e) = e, P = id on A_e, P = 0 on A_gamma for gamma != e, ||P|| <= 1",
            if top.holds() { Status::Pass } else { Status::Fail },
            usize::from(top.holds()),
            1,
            SPECTRAL_TOL,
            w,
        );

        let rep = BundleRepresentation::regular(graded)?;
        self.bundle_rep("regular_representation", &family, &rep, &pairs)?;
        if graded.groupoid().unit_count() == 1 {
            let trivial = vec![Complex64::new(1.0, 0.0); n];
            let rep = BundleRepresentation::character(graded, &trivial)?;
            self.bundle_rep("trivial_character", &family, &rep, &pairs)?;
        }
        let mut w = Witness::new();
        w.insert(
            "note".into(),
            Value::String("finite dimensional: the reduced and full completions of each A_gamma coincide".into()),
        );
        self.push("completions_coincide", "one grading family serves both completions", Status::Recorded, 0, 0, 0.0, w);
        Ok(())
    }

    fn bundle_rep(
        &mut self,
        check: &str,
        family: &GradedSubspaceFamily<'_>,
        rep: &BundleRepresentation,
        samples: &[GroupoidFunction],
    ) -> CheckResult {
        let r = bundle_rep_check(family, rep, samples)?;
        let mut w = Witness::new();
        if let Some((x, y)) = &r.product_witness {
            w.insert("product_witness".into(), json!([x, y]));
        }
        if let Some(x) = &r.adjoint_witness {
            w.insert("adjoint_witness".into(), json!(x));
        }
        w.insert("sample_defect".into(), number(r.sample_defect));
        w.insert("bound_ratio".into(), number(r.bound_ratio));
        w.insert("dimension".into(), json!(rep.dim()));
        self.push(
            check,
            "pi = sum of pi_gamma is a *-representation with ||pi_gamma(a)|| <= ||a||_I",
            if r.holds() { Status::Pass } else { Status::Fail },
            usize::from(r.holds()),
            1,
            ALGEBRAIC_TOL,
            w,
        );
        Ok(())
    }

    fn run(&mut self) {
        match self.suite {
            Suite::Haar => self.haar(),
            _ if self.doc.haar_violation().is_some() => {
                let mut w = Witness::new();
                w.insert("reason".into(), Value::String("Haar weights are not left invariant".into()));
                self.push("all", "prerequisite: a Haar system", Status::Skipped, 0, 0, 0.0, w);
            }
            Suite::Algebra => {
                let r = self.algebra();
                self.guard("algebra", "algebra suite", r);
            }
            Suite::Norms => {
                let r = self.norms();
                self.guard("norms", "norms suite", r);
            }
            Suite::Inclusion => {
                let r = self.inclusion();
                self.guard("inclusion", "inclusion suite", r);
            }
            Suite::Module => {
                let r = self.module();
                self.guard("module", "module suite", r);
            }
            Suite::Expectation => {
                let r = self.expectation();
                self.guard("expectation", "expectation suite", r);
            }
            Suite::Bundle => {
                let r = self.bundle();
                self.guard("bundle", "bundle suite", r);
            }
            Suite::All => unreachable!("expanded before running"),
        }
    }
}

/// Entries for one document and one suite selector.
pub fn run_suite(doc: &WorkbenchDocument, suite: Suite, seed: u64, count: usize) -> Vec<ReportEntry> {
    let mut out = Vec::new();
    for s in suite.expand() {
        let mut runner = Runner {
            doc,
            seed,
            count,
            suite: s,
            space: OnceCell::new(),
            entries: Vec::new(),
        };
        runner.run();
        out.append(&mut runner.entries);
    }
    out
}

/// Runs `suite` over every document and assembles the sorted report.
pub fn verify(docs: &[WorkbenchDocument], suite: Suite, seed: u64, count: usize) -> VerificationReport {
    let entries = std::thread::scope(|scope| {
        let handles: Vec<_> = docs
            .iter()
            .map(|doc| scope.spawn(move || run_suite(doc, suite, seed, count)))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("suite threads do not panic"))
            .collect()
    });
    VerificationReport::new(
        seed,
        count,
        suite.expand().iter().map(|s| s.name().to_string()).collect(),
        docs.iter().map(|d| d.name.clone()).collect(),
        entries,
    )
}
