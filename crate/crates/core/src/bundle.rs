//! The grading subspaces `A_γ = {f : supp f ⊂ G_γ}` of `C_c(G)` and checks of
//! the bundle structure they carry.
//!
//! At finite scale the reduced and full completions of each `A_γ` agree, so a
//! single family stands for both.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::GroupoidFunction;
use crate::error::{Error, Result};
use crate::grading::GradedGroupoid;
use crate::group::GroupElement;
use crate::linalg::{self, CMatrix};
use crate::module::expectation_p;
use crate::rep::{cstar_norm, regular_rep_matrix};
use crate::{ALGEBRAIC_TOL, SPECTRAL_TOL};

/// `A_γ` for every `γ` in the image of the cocycle, each with the delta basis
/// on `G_γ`.
#[derive(Debug, Clone, Copy)]
pub struct GradedSubspaceFamily<'a> {
    graded: &'a GradedGroupoid,
}

impl<'a> GradedSubspaceFamily<'a> {
    pub fn new(graded: &'a GradedGroupoid) -> Self {
        Self { graded }
    }

    pub fn graded(&self) -> &'a GradedGroupoid {
        self.graded
    }

    /// Basis arrows of `A_γ`; empty outside the image of the cocycle.
    pub fn basis(&self, element: &GroupElement) -> &'a [usize] {
        self.graded.fiber(element)
    }

    pub fn dim(&self, element: &GroupElement) -> usize {
        self.basis(element).len()
    }

    pub fn degrees(&self) -> impl Iterator<Item = &'a GroupElement> {
        self.graded.degrees()
    }

    /// `Σ_γ dim A_γ`.
    pub fn total_dim(&self) -> usize {
        self.graded.fibers().map(|(_, f)| f.len()).sum()
    }

    /// Whether `supp f ⊂ G_γ`.
    pub fn contains(&self, element: &GroupElement, f: &GroupoidFunction) -> bool {
        f.support().all(|x| self.graded.degree(x) == element)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingReport {
    /// Basis pairs `(x, y)` with `δ_x * δ_y ∉ A_{c(x)c(y)}`.
    pub product_witnesses: Vec<(String, String)>,
    /// Basis arrows `x` with `δ_x* ∉ A_{c(x)⁻¹}`.
    pub adjoint_witnesses: Vec<String>,
    /// Sample pairs `(i, j)` whose homogeneous products or adjoints leave
    /// their expected fibre.
    pub sample_witnesses: Vec<(usize, usize)>,
    pub dimension_sum: usize,
    pub arrow_count: usize,
    /// Arrows lying in more than one subspace, or in none.
    pub overlap_witnesses: Vec<String>,
}

impl GradingReport {
    pub fn multiplicative(&self) -> bool {
        self.product_witnesses.is_empty()
            && self.adjoint_witnesses.is_empty()
            && self.sample_witnesses.is_empty()
    }

    pub fn spanning(&self) -> bool {
        self.dimension_sum == self.arrow_count
    }

    pub fn independent(&self) -> bool {
        self.overlap_witnesses.is_empty()
    }

    pub fn holds(&self) -> bool {
        self.multiplicative() && self.spanning() && self.independent()
    }
}

/// `A_β A_γ ⊂ A_{βγ}`, `A_γ* = A_{γ⁻¹}`, spanning and independence.
///
/// Products and adjoints are checked on every basis pair and on the
/// homogeneous components of every pair of `samples`.
pub fn check_grading_axioms(
    family: &GradedSubspaceFamily<'_>,
    samples: &[GroupoidFunction],
) -> Result<GradingReport> {
    let graded = family.graded();
    let g = graded.groupoid();
    let group = graded.group();
    let alg = graded.algebra();
    let n = g.arrow_count();

    let mut product_witnesses = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let target = group.multiply(graded.degree(x), graded.degree(y))?;
            let prod = alg.convolve(&alg.delta(x), &alg.delta(y))?;
            if !family.contains(&target, &prod) {
                product_witnesses.push((g.arrow_id(x).into(), g.arrow_id(y).into()));
            }
        }
    }
    let mut adjoint_witnesses = Vec::new();
    for x in 0..n {
        let target = group.inverse(graded.degree(x))?;
        if !family.contains(&target, &alg.involute(&alg.delta(x))?) {
            adjoint_witnesses.push(g.arrow_id(x).into());
        }
    }

    let mut components = Vec::with_capacity(samples.len());
    for a in samples {
        let mut parts = Vec::new();
        for el in family.degrees() {
            parts.push((el, graded.component(a, el)?));
        }
        components.push(parts);
    }
    let mut sample_witnesses = Vec::new();
    for (i, left) in components.iter().enumerate() {
        'pairs: for (j, right) in components.iter().enumerate() {
            for (beta, a_beta) in left {
                if i == j && !family.contains(&group.inverse(beta)?, &alg.involute(a_beta)?) {
                    sample_witnesses.push((i, j));
                    continue 'pairs;
                }
                for (gamma, b_gamma) in right {
                    let target = group.multiply(beta, gamma)?;
                    if !family.contains(&target, &alg.convolve(a_beta, b_gamma)?) {
                        sample_witnesses.push((i, j));
                        continue 'pairs;
                    }
                }
            }
        }
    }

    let mut membership = alloc::vec![0usize; n];
    for (_, fiber) in graded.fibers() {
        for &x in fiber {
            membership[x] += 1;
        }
    }
    let overlap_witnesses = (0..n)
        .filter(|&x| membership[x] != 1)
        .map(|x| g.arrow_id(x).into())
        .collect();

    Ok(GradingReport {
        product_witnesses,
        adjoint_witnesses,
        sample_witnesses,
        dimension_sum: family.total_dim(),
        arrow_count: n,
        overlap_witnesses,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopologicalGradingReport {
    pub fixes_unit: bool,
    /// Basis arrows of `A_e` not fixed by `P`.
    pub identity_witnesses: Vec<String>,
    /// Basis arrows outside `A_e` not sent to zero.
    pub vanishing_witnesses: Vec<String>,
    /// `sup ‖P(a)‖ / ‖a‖` over the nonzero samples.
    pub sup_ratio: f64,
    pub ratio_tolerance: f64,
}

impl TopologicalGradingReport {
    pub fn contractive(&self) -> bool {
        self.sup_ratio <= 1.0 + self.ratio_tolerance
    }

    pub fn holds(&self) -> bool {
        self.fixes_unit
            && self.identity_witnesses.is_empty()
            && self.vanishing_witnesses.is_empty()
            && self.contractive()
    }
}

/// `P(e) = e`, `P = id` on `A_e`, `P = 0` on `A_γ` for `γ ≠ e`, and
/// `‖P(a)‖ ≤ ‖a‖` on the samples.
pub fn check_topological_grading(
    family: &GradedSubspaceFamily<'_>,
    samples: &[GroupoidFunction],
) -> Result<TopologicalGradingReport> {
    let graded = family.graded();
    let g = graded.groupoid();
    let alg = graded.algebra();
    let unit = alg.unit();
    let fixes_unit = expectation_p(graded, &unit)?.approx_eq(&unit, ALGEBRAIC_TOL);

    let e = graded.identity_element();
    let mut identity_witnesses = Vec::new();
    let mut vanishing_witnesses = Vec::new();
    for (el, fiber) in graded.fibers() {
        for &x in fiber {
            let d = alg.delta(x);
            let p = expectation_p(graded, &d)?;
            if el == e {
                if p != d {
                    identity_witnesses.push(g.arrow_id(x).into());
                }
            } else if !p.is_zero() {
                vanishing_witnesses.push(g.arrow_id(x).into());
            }
        }
    }

    let mut sup_ratio: f64 = 0.0;
    for a in samples {
        let norm = cstar_norm(&alg, a)?;
        if norm > 0.0 {
            sup_ratio = sup_ratio.max(cstar_norm(&alg, &expectation_p(graded, a)?)? / norm);
        }
    }
    Ok(TopologicalGradingReport {
        fixes_unit,
        identity_witnesses,
        vanishing_witnesses,
        sup_ratio,
        ratio_tolerance: SPECTRAL_TOL,
    })
}

/// A linear map `δ_x ↦ images[x]` into `d × d` matrices. Restricting it to
/// each `A_γ` gives the family of maps `π_γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleRepresentation {
    dim: usize,
    images: Vec<CMatrix>,
}

impl BundleRepresentation {
    pub fn new(dim: usize, images: Vec<CMatrix>) -> Result<Self> {
        if let Some(bad) = images.iter().find(|m| m.shape() != (dim, dim)) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: if bad.nrows() != dim { bad.nrows() } else { bad.ncols() },
            });
        }
        Ok(Self { dim, images })
    }

    /// `δ_x ↦ ⊕_u π_u(δ_x)`.
    pub fn regular(graded: &GradedGroupoid) -> Result<Self> {
        let alg = graded.algebra();
        let g = graded.groupoid();
        let blocks: Vec<usize> = (0..g.unit_count()).map(|u| g.with_source(u).len()).collect();
        let dim = blocks.iter().sum();
        let mut images = Vec::with_capacity(g.arrow_count());
        for x in 0..g.arrow_count() {
            let mut m = CMatrix::zeros(dim, dim);
            let mut offset = 0;
            for (u, &size) in blocks.iter().enumerate() {
                let rep = regular_rep_matrix(&alg, &alg.delta(x), u)?;
                m.view_mut((offset, offset), (size, size)).copy_from(&rep.matrix);
                offset += size;
            }
            images.push(m);
        }
        Ok(Self { dim, images })
    }

    /// One-dimensional `δ_x ↦ rho · χ(x)` on a groupoid with one unit.
    pub fn character(graded: &GradedGroupoid, chi: &[Complex64]) -> Result<Self> {
        let g = graded.groupoid();
        if g.unit_count() != 1 {
            return Err(Error::LengthMismatch {
                what: "units of a character domain",
                expected: 1,
                found: g.unit_count(),
            });
        }
        if chi.len() != g.arrow_count() {
            return Err(Error::LengthMismatch {
                what: "character values",
                expected: g.arrow_count(),
                found: chi.len(),
            });
        }
        let rho = graded.haar().unit_weight(0);
        let images = chi
            .iter()
            .map(|&c| CMatrix::from_element(1, 1, c * rho))
            .collect();
        Ok(Self { dim: 1, images })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    pub fn images_mut(&mut self) -> &mut [CMatrix] {
        &mut self.images
    }

    /// `π(a) = Σ_γ π_γ(a_γ) = Σ_x a(x) images[x]`.
    pub fn apply(&self, a: &GroupoidFunction) -> Result<CMatrix> {
        if a.len() != self.images.len() {
            return Err(Error::DimensionMismatch {
                expected: self.images.len(),
                found: a.len(),
            });
        }
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for x in a.support() {
            out += &self.images[x] * a.get(x);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BundleRepReport {
    /// First basis pair `(x, y)` with `π(δ_x)π(δ_y) ≠ π(δ_x * δ_y)`.
    pub product_witness: Option<(String, String)>,
    /// First basis arrow with `π(δ_x)* ≠ π(δ_x*)`.
    pub adjoint_witness: Option<String>,
    /// Largest relative defect of `π(ab) = π(a)π(b)` and `π(a*) = π(a)*`
    /// over the sample pairs.
    pub sample_defect: f64,
    /// Largest `‖π_γ(a_γ)‖ / ‖a_γ‖_I` over nonzero sample components.
    pub bound_ratio: f64,
    pub algebraic_tolerance: f64,
    pub spectral_tolerance: f64,
}

impl BundleRepReport {
    pub fn is_representation(&self) -> bool {
        self.product_witness.is_none()
            && self.adjoint_witness.is_none()
            && self.sample_defect <= self.algebraic_tolerance
    }

    pub fn bounded(&self) -> bool {
        self.bound_ratio <= 1.0 + self.spectral_tolerance
    }

    pub fn holds(&self) -> bool {
        self.is_representation() && self.bounded()
    }
}

fn relative_defect(lhs: &CMatrix, rhs: &CMatrix) -> f64 {
    linalg::max_entry_distance(lhs, rhs) / (1.0 + linalg::max_entry(lhs).max(linalg::max_entry(rhs)))
}

/// Checks that `rep` is a `*`-representation of the bundle on basis
/// elements and sample pairs, and that every `π_γ` is bounded by the
/// I-norm on the fibre components of the samples.
pub fn bundle_rep_check(
    family: &GradedSubspaceFamily<'_>,
    rep: &BundleRepresentation,
    samples: &[GroupoidFunction],
) -> Result<BundleRepReport> {
    let graded = family.graded();
    let g = graded.groupoid();
    let alg = graded.algebra();
    let n = g.arrow_count();
    if rep.images.len() != n {
        return Err(Error::LengthMismatch {
            what: "representation images",
            expected: n,
            found: rep.images.len(),
        });
    }

    let mut product_witness = None;
    'basis: for x in 0..n {
        for y in 0..n {
            let lhs = &rep.images[x] * &rep.images[y];
            let rhs = rep.apply(&alg.convolve(&alg.delta(x), &alg.delta(y))?)?;
            if relative_defect(&lhs, &rhs) > ALGEBRAIC_TOL {
                product_witness = Some((g.arrow_id(x).into(), g.arrow_id(y).into()));
                break 'basis;
            }
        }
    }
    let adjoint_witness = (0..n)
        .find(|&x| {
            let rhs = &rep.images[g.inverse(x)];
            relative_defect(&rep.images[x].adjoint(), rhs) > ALGEBRAIC_TOL
        })
        .map(|x| g.arrow_id(x).into());

    let mut images = Vec::with_capacity(samples.len());
    for a in samples {
        images.push(rep.apply(a)?);
    }
    let mut sample_defect: f64 = 0.0;
    for (a, pa) in samples.iter().zip(&images) {
        sample_defect = sample_defect.max(relative_defect(&pa.adjoint(), &rep.apply(&alg.involute(a)?)?));
        for (b, pb) in samples.iter().zip(&images) {
            let lhs = pa * pb;
            let rhs = rep.apply(&alg.convolve(a, b)?)?;
            sample_defect = sample_defect.max(relative_defect(&lhs, &rhs));
        }
    }

    let mut bound_ratio: f64 = 0.0;
    for a in samples {
        for el in family.degrees() {
            let part = graded.component(a, el)?;
            let i_norm = alg.i_norm(&part)?;
            if i_norm > 0.0 {
                bound_ratio = bound_ratio.max(linalg::operator_norm(&rep.apply(&part)?) / i_norm);
            }
        }
    }

    Ok(BundleRepReport {
        product_witness,
        adjoint_witness,
        sample_defect,
        bound_ratio,
        algebraic_tolerance: ALGEBRAIC_TOL,
        spectral_tolerance: SPECTRAL_TOL,
    })
}
