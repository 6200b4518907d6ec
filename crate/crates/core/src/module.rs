//! `C_c(G)` as a right inner-product module over `C_c(G_e)`.
//!
//! The action is right convolution by functions on `G_e` and the inner
//! product is `⟨a, b⟩ = Σ_γ a_γ* b_γ`, which lands in `C_c(G_e)`. At finite
//! scale the module needs no completion, so `X` is the coefficient space
//! itself.
//!
//! The norm of the left-multiplication operator `L_a` is computed on the
//! interior tensor product `X ⊗ H` with `H = ⊕_v L²((G_e)v)`, the regular
//! representation of `C_c(G_e)`. The Gram matrix of the spanning vectors
//! `δ_x ⊗ e_j` is eigendecomposed, its null directions dropped, and `L_a ⊗ 1`
//! compressed onto the surviving orthonormal frame.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::GroupoidFunction;
use crate::error::{Error, Result};
use crate::grading::GradedGroupoid;
use crate::group::GroupElement;
use crate::linalg::{self, CMatrix};
use crate::rep::{cstar_norm, regular_rep_matrix};
use crate::{ALGEBRAIC_TOL, NULL_SPACE_CUTOFF, SPECTRAL_TOL};

/// `(a·g)(x) = Σ_{n ∈ G_e, r(n) = s(x)} a(xn) g(n⁻¹) w(n)`.
pub fn module_action(
    graded: &GradedGroupoid,
    a: &GroupoidFunction,
    g_e: &GroupoidFunction,
) -> Result<GroupoidFunction> {
    let alg = graded.algebra();
    alg.check(a)?;
    graded.fiber_algebra().check(g_e)?;
    let g = graded.groupoid();
    let sub = graded.identity_fiber();
    let w = sub.haar.weights();
    let mut out = alg.zero();
    for x in 0..g.arrow_count() {
        let mut acc = Complex64::new(0.0, 0.0);
        for &n in sub.groupoid.with_range(g.source(x)) {
            let xn = g
                .compose(x, sub.embedding[n])
                .expect("r(n) = s(x) makes xn composable");
            acc += a.get(xn) * g_e.get(sub.groupoid.inverse(n)) * w[n];
        }
        out.coeffs_mut()[x] = acc;
    }
    Ok(out)
}

/// The same action as `a * i(g)` in `C_c(G)`.
pub fn module_action_via_convolution(
    graded: &GradedGroupoid,
    a: &GroupoidFunction,
    g_e: &GroupoidFunction,
) -> Result<GroupoidFunction> {
    graded.algebra().convolve(a, &graded.include(g_e)?)
}

/// `⟨a, b⟩ = Σ_γ (a_γ* b_γ)|_{G_e}`.
pub fn module_inner_product(
    graded: &GradedGroupoid,
    a: &GroupoidFunction,
    b: &GroupoidFunction,
) -> Result<GroupoidFunction> {
    let alg = graded.algebra();
    alg.check(a)?;
    alg.check(b)?;
    let mut acc = graded.fiber_algebra().zero();
    for element in graded.degrees() {
        let a_part = graded.component(a, element)?;
        let b_part = graded.component(b, element)?;
        if a_part.is_zero() || b_part.is_zero() {
            continue;
        }
        let term = alg.convolve(&alg.involute(&a_part)?, &b_part)?;
        acc = &acc + &graded.restrict(&term)?;
    }
    Ok(acc)
}

/// `‖⟨a, a⟩‖^{1/2}` in `C*(G_e)`.
pub fn module_norm(graded: &GradedGroupoid, a: &GroupoidFunction) -> Result<f64> {
    let ip = module_inner_product(graded, a, a)?;
    Ok(libm::sqrt(cstar_norm(&graded.fiber_algebra(), &ip)?))
}

/// `P = i ∘ Q`: restrict to `G_e`, then extend by zero.
pub fn expectation_p(graded: &GradedGroupoid, a: &GroupoidFunction) -> Result<GroupoidFunction> {
    graded.include(&graded.restrict(a)?)
}

#[derive(Debug, Clone, PartialEq)]
struct InducedBlock {
    rep_dim: usize,
    /// `Λ^{1/2} Q*`: spanning coordinates to orthonormal frame coordinates.
    coords: CMatrix,
    /// `Q Λ^{-1/2}`: frame coordinates back to spanning coordinates.
    lift: CMatrix,
    gram_min: f64,
    gram_max: f64,
}

/// The Hilbert space `X ⊗_{C_c(G_e)} (⊕_v L²((G_e)v))`, one block per `v`.
///
/// Depends only on the graded groupoid, so build it once and reuse it for
/// every operator.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedSpace {
    arrows: usize,
    blocks: Vec<InducedBlock>,
}

impl InducedSpace {
    pub fn new(graded: &GradedGroupoid) -> Result<Self> {
        let alg = graded.algebra();
        let fiber_alg = graded.fiber_algebra();
        let n = alg.dim();
        let mut inner = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                inner.push(module_inner_product(graded, &alg.delta(x), &alg.delta(y))?);
            }
        }
        let mut blocks = Vec::new();
        for v in 0..graded.groupoid().unit_count() {
            let m = graded.identity_fiber().groupoid.with_source(v).len();
            let dim = n * m;
            let mut gram = CMatrix::zeros(dim, dim);
            for x in 0..n {
                for y in 0..n {
                    let ip = &inner[x * n + y];
                    if ip.is_zero() {
                        continue;
                    }
                    let rep = regular_rep_matrix(&fiber_alg, ip, v)?;
                    gram.view_mut((x * m, y * m), (m, m)).copy_from(&rep.matrix);
                }
            }
            let (values, vectors) = linalg::hermitian_eigen(&gram);
            let top = values.iter().copied().fold(0.0, f64::max);
            let gram_min = values.iter().copied().fold(f64::INFINITY, f64::min);
            let keep: Vec<usize> = (0..values.len())
                .filter(|&k| top > 0.0 && values[k] > NULL_SPACE_CUTOFF * top)
                .collect();
            let mut coords = CMatrix::zeros(keep.len(), dim);
            let mut lift = CMatrix::zeros(dim, keep.len());
            for (col, &k) in keep.iter().enumerate() {
                let root = libm::sqrt(values[k]);
                for r in 0..dim {
                    let q = vectors[(r, k)];
                    coords[(col, r)] = q.conj() * root;
                    lift[(r, col)] = q / root;
                }
            }
            blocks.push(InducedBlock {
                rep_dim: m,
                coords,
                lift,
                gram_min: if dim == 0 { 0.0 } else { gram_min },
                gram_max: top,
            });
        }
        Ok(Self { arrows: n, blocks })
    }

    /// Smallest Gram eigenvalue over all blocks.
    pub fn gram_min_eigenvalue(&self) -> f64 {
        self.blocks.iter().map(|b| b.gram_min).fold(0.0, f64::min)
    }

    /// Largest Gram eigenvalue over all blocks.
    pub fn gram_max_eigenvalue(&self) -> f64 {
        self.blocks.iter().map(|b| b.gram_max).fold(0.0, f64::max)
    }

    /// Dimension of the quotient by the Gram null space.
    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.coords.nrows()).sum()
    }

    /// `‖L_a‖` with `L_a(b) = a * b`.
    pub fn l_operator_norm(&self, graded: &GradedGroupoid, a: &GroupoidFunction) -> Result<f64> {
        let alg = graded.algebra();
        alg.check(a)?;
        if alg.dim() != self.arrows {
            return Err(Error::DimensionMismatch {
                expected: self.arrows,
                found: alg.dim(),
            });
        }
        let n = self.arrows;
        // left[x, y] = (a * δ_y)(x)
        let mut left = CMatrix::zeros(n, n);
        for y in 0..n {
            let col = alg.convolve(a, &alg.delta(y))?;
            for x in 0..n {
                left[(x, y)] = col.get(x);
            }
        }
        let mut best: f64 = 0.0;
        for block in &self.blocks {
            if block.coords.nrows() == 0 {
                continue;
            }
            let m = block.rep_dim;
            let k = block.lift.ncols();
            // (A ⊗ 1) · lift without forming the Kronecker product
            let mut moved = CMatrix::zeros(n * m, k);
            for x in 0..n {
                for y in 0..n {
                    let entry = left[(x, y)];
                    if entry == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for i in 0..m {
                        for col in 0..k {
                            moved[(x * m + i, col)] += entry * block.lift[(y * m + i, col)];
                        }
                    }
                }
            }
            let compressed = &block.coords * moved;
            best = best.max(linalg::operator_norm(&compressed));
        }
        Ok(best)
    }
}

/// Builds the induced space and returns `‖L_a‖`.
pub fn l_operator_norm(graded: &GradedGroupoid, a: &GroupoidFunction) -> Result<f64> {
    InducedSpace::new(graded)?.l_operator_norm(graded, a)
}

/// Both sides of `i(⟨b, a*b⟩) = b* P(a) b` for `b` supported in one fibre.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichIdentity {
    pub degree: Option<GroupElement>,
    pub lhs: GroupoidFunction,
    pub rhs: GroupoidFunction,
    pub deviation: f64,
    pub holds: bool,
}

pub fn check_sandwich_identity(
    graded: &GradedGroupoid,
    a: &GroupoidFunction,
    b: &GroupoidFunction,
) -> Result<SandwichIdentity> {
    let alg = graded.algebra();
    alg.check(a)?;
    let degree = graded.homogeneous_degree(b)?;
    let lhs = graded.include(&module_inner_product(graded, b, &alg.convolve(a, b)?)?)?;
    let rhs = alg.convolve(&alg.convolve(&alg.involute(b)?, &expectation_p(graded, a)?)?, b)?;
    let deviation = lhs.max_distance(&rhs);
    let holds = lhs.approx_eq(&rhs, ALGEBRAIC_TOL);
    Ok(SandwichIdentity {
        degree,
        lhs,
        rhs,
        deviation,
        holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEntry {
    pub l_norm: f64,
    /// `‖P(a*a)‖`.
    pub expectation_norm: f64,
    pub norm: f64,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelReport {
    pub tolerance: f64,
    pub entries: Vec<KernelEntry>,
}

impl KernelReport {
    pub fn all_consistent(&self) -> bool {
        self.entries.iter().all(|e| e.consistent)
    }
}

/// For each sample: `L_a = 0 ⟺ P(a*a) = 0`, and either one forces `a = 0`.
///
/// `‖P(a*a)‖` is quadratic in `a`, so it is compared against the squared
/// tolerance.
pub fn kernel_check(
    graded: &GradedGroupoid,
    space: &InducedSpace,
    samples: &[GroupoidFunction],
) -> Result<KernelReport> {
    let alg = graded.algebra();
    let tol = SPECTRAL_TOL;
    let mut entries = Vec::with_capacity(samples.len());
    for a in samples {
        let l_norm = space.l_operator_norm(graded, a)?;
        let square = alg.convolve(&alg.involute(a)?, a)?;
        let expectation_norm = cstar_norm(&alg, &expectation_p(graded, &square)?)?;
        let norm = cstar_norm(&alg, a)?;
        let l_zero = l_norm <= tol;
        let p_zero = expectation_norm <= tol * tol;
        let consistent = l_zero == p_zero && (!l_zero || norm <= tol);
        entries.push(KernelEntry {
            l_norm,
            expectation_norm,
            norm,
            consistent,
        });
    }
    Ok(KernelReport {
        tolerance: tol,
        entries,
    })
}

/// Ratios and slacks of `‖Q(a)‖ ≤ ‖a‖_X ≤ ‖L_a‖ ≤ ‖a‖_I` for one element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSandwich {
    pub restricted: f64,
    pub module: f64,
    pub left: f64,
    pub i_norm: f64,
}

impl NormSandwich {
    pub fn compute(graded: &GradedGroupoid, space: &InducedSpace, a: &GroupoidFunction) -> Result<Self> {
        Ok(Self {
            restricted: cstar_norm(&graded.fiber_algebra(), &graded.restrict(a)?)?,
            module: module_norm(graded, a)?,
            left: space.l_operator_norm(graded, a)?,
            i_norm: graded.algebra().i_norm(a)?,
        })
    }

    /// Each inequality within `slack · (1 + larger side)`.
    pub fn holds(&self, slack: f64) -> bool {
        let le = |lo: f64, hi: f64| lo <= hi + slack * (1.0 + hi);
        le(self.restricted, self.module) && le(self.module, self.left) && le(self.left, self.i_norm)
    }
}

/// Gram of the induced space is positive semidefinite up to rounding.
pub fn induced_gram_is_psd(space: &InducedSpace) -> bool {
    space.gram_min_eigenvalue() >= -SPECTRAL_TOL * (1.0 + space.gram_max_eigenvalue())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::Cocycle;
    use crate::group::DiscreteGroup;
    use crate::groupoid::pair_groupoid;
    use crate::haar::HaarSystem;

    fn graded_p2(rho: [f64; 2]) -> GradedGroupoid {
        let g = pair_groupoid(2).unwrap();
        let h = HaarSystem::from_weights(&g, rho.to_vec()).unwrap();
        let labels = g
            .arrows()
            .iter()
            .map(|a| GroupElement::from(a.dst as i64 - a.src as i64))
            .collect();
        GradedGroupoid::new(g, h, Cocycle::new(DiscreteGroup::FreeAbelian { rank: 1 }, labels)).unwrap()
    }

    fn idx(gg: &GradedGroupoid, id: &str) -> usize {
        gg.groupoid().arrow_index(id).unwrap()
    }

    #[test]
    fn inner_product_of_off_diagonal_delta() {
        let gg = graded_p2([1.0, 1.0]);
        let alg = gg.algebra();
        let d = alg.delta(idx(&gg, "(1,2)"));
        let ip = module_inner_product(&gg, &d, &d).unwrap();
        let sub = &gg.identity_fiber().groupoid;
        let mut expected = gg.fiber_algebra().zero();
        expected.coeffs_mut()[sub.arrow_index("(2,2)").unwrap()] = Complex64::new(1.0, 0.0);
        assert_eq!(ip, expected);
        assert!((module_norm(&gg, &d).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn action_matches_convolution() {
        let gg = graded_p2([1.0, 3.0]);
        let alg = gg.algebra();
        let a = GroupoidFunction::from_real(&[1.0, -2.0, 0.5, 4.0]);
        let g_e = GroupoidFunction::from_real(&[0.25, -1.5]);
        let direct = module_action(&gg, &a, &g_e).unwrap();
        let via = module_action_via_convolution(&gg, &a, &g_e).unwrap();
        assert!(direct.approx_eq(&via, 1e-12));
        let d = module_action(&gg, &alg.delta(idx(&gg, "(1,2)")), &gg.fiber_algebra().delta(1)).unwrap();
        assert!(d.max_abs() > 0.0);
    }

    #[test]
    fn expectation_keeps_diagonal() {
        let gg = graded_p2([1.0, 1.0]);
        let ones = GroupoidFunction::from_real(&[1.0; 4]);
        let p = expectation_p(&gg, &ones).unwrap();
        let alg = gg.algebra();
        let expected = &alg.delta(idx(&gg, "(1,1)")) + &alg.delta(idx(&gg, "(2,2)"));
        assert_eq!(p, expected);
    }

    #[test]
    fn l_norm_of_unit_is_one() {
        let gg = graded_p2([2.0, 0.5]);
        let space = InducedSpace::new(&gg).unwrap();
        assert!(induced_gram_is_psd(&space));
        let e = gg.algebra().unit();
        assert!((space.l_operator_norm(&gg, &e).unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(space.l_operator_norm(&gg, &gg.algebra().zero()).unwrap(), 0.0);
    }

    #[test]
    fn sandwich_identity_rejects_mixed_support() {
        let gg = graded_p2([1.0, 1.0]);
        let alg = gg.algebra();
        let b = &alg.delta(idx(&gg, "(1,2)")) + &alg.delta(idx(&gg, "(2,1)"));
        assert!(matches!(
            check_sandwich_identity(&gg, &alg.unit(), &b),
            Err(Error::NotFiberSupported { .. })
        ));
        let ok = check_sandwich_identity(&gg, &b, &alg.delta(idx(&gg, "(2,1)"))).unwrap();
        assert!(ok.holds);
        assert_eq!(ok.degree, Some(GroupElement::from(1)));
    }

    #[test]
    fn kernel_check_on_zero_and_unit() {
        let gg = graded_p2([1.0, 1.0]);
        let space = InducedSpace::new(&gg).unwrap();
        let alg = gg.algebra();
        let report = kernel_check(&gg, &space, &[alg.zero(), alg.unit()]).unwrap();
        assert!(report.all_consistent());
        assert_eq!(report.entries[0].l_norm, 0.0);
    }
}
