//! Regular representations and the C*-norm.
//!
//! `π_u` is left convolution on `L²(Gu, λ_u)`, where `Gu = {x : s(x) = u}` and
//! `λ_u` is `λ^u` pushed forward by inversion, so `λ_u({x}) = rho(r(x))`.
//! Matrices are written in the orthonormal basis `e_x = δ_x / √λ_u(x)`.
//!
//! A finite groupoid algebra is finite dimensional and `⊕_u π_u` is faithful,
//! so its C*-norm is unique: full and reduced norms coincide and
//! [`cstar_norm`] computes both.

use alloc::string::ToString;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::{ConvolutionAlgebra, GroupoidFunction};
use crate::error::{Error, Result};
use crate::grading::GradedGroupoid;
use crate::group::GroupElement;
use crate::linalg::{self, CMatrix};
use crate::ALGEBRAIC_TOL;

/// Basis data of `L²(S, λ_u)` for a set `S ⊆ Gu`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedL2Basis {
    unit: usize,
    arrows: Vec<usize>,
    weights: Vec<f64>,
}

impl WeightedL2Basis {
    /// The whole of `Gu`.
    pub fn new(alg: &ConvolutionAlgebra<'_>, u: usize) -> Result<Self> {
        if u >= alg.groupoid().unit_count() {
            return Err(Error::UnknownUnit(u));
        }
        Ok(Self::from_arrows(alg, u, alg.groupoid().with_source(u).to_vec()))
    }

    /// A subset of `Gu`, e.g. the fibre part `(G_γ)u`.
    pub fn from_arrows(alg: &ConvolutionAlgebra<'_>, u: usize, arrows: Vec<usize>) -> Self {
        let g = alg.groupoid();
        let weights = arrows
            .iter()
            .map(|&x| alg.haar().unit_weight(g.range(x)))
            .collect();
        Self {
            unit: u,
            arrows,
            weights,
        }
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    /// `λ_u({x})` for each basis arrow.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `1/√λ_u(x)`, the factor turning `δ_x` into a unit vector.
    pub fn scale(&self, i: usize) -> f64 {
        1.0 / libm::sqrt(self.weights[i])
    }

    pub fn dim(&self) -> usize {
        self.arrows.len()
    }

    pub fn position(&self, x: usize) -> Option<usize> {
        self.arrows.iter().position(|&y| y == x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepMatrix {
    pub basis: WeightedL2Basis,
    pub matrix: CMatrix,
}

impl RepMatrix {
    pub fn norm(&self) -> f64 {
        linalg::operator_norm(&self.matrix)
    }
}

/// Matrix of `h ↦ a * h` on `L²(Gu, λ_u)`.
///
/// `a * δ_x = Σ_{x' ∈ Gu} a(x'x⁻¹) w(x'x⁻¹) δ_{x'}`, so in the orthonormal
/// basis `M[x', x] = a(x'x⁻¹) w(x'x⁻¹) √(λ_u(x') / λ_u(x))`, which equals
/// `a(x'x⁻¹) √(rho(r(x)) rho(r(x')))`.
pub fn regular_rep_matrix(
    alg: &ConvolutionAlgebra<'_>,
    a: &GroupoidFunction,
    u: usize,
) -> Result<RepMatrix> {
    alg.check(a)?;
    let basis = WeightedL2Basis::new(alg, u)?;
    let g = alg.groupoid();
    let w = alg.haar().weights();
    let n = basis.dim();
    let matrix = CMatrix::from_fn(n, n, |i, j| {
        let (xp, x) = (basis.arrows[i], basis.arrows[j]);
        let y = g
            .compose(xp, g.inverse(x))
            .expect("arrows with a common source compose with an inverse");
        a.get(y) * w[y] * libm::sqrt(basis.weights[i] / basis.weights[j])
    });
    Ok(RepMatrix { basis, matrix })
}

/// `max_u ‖π_u(a)‖`.
pub fn cstar_norm(alg: &ConvolutionAlgebra<'_>, a: &GroupoidFunction) -> Result<f64> {
    let mut best: f64 = 0.0;
    for u in 0..alg.groupoid().unit_count() {
        best = best.max(regular_rep_matrix(alg, a, u)?.norm());
    }
    Ok(best)
}

fn require_self_adjoint(alg: &ConvolutionAlgebra<'_>, a: &GroupoidFunction) -> Result<()> {
    let defect = alg.self_adjoint_defect(a)?;
    if defect > ALGEBRAIC_TOL * (1.0 + a.max_abs()) {
        return Err(Error::NotSelfAdjoint { defect });
    }
    Ok(())
}

/// Eigenvalues of `⊕_u π_u(a)` for self-adjoint `a`, ascending.
pub fn spectrum(alg: &ConvolutionAlgebra<'_>, a: &GroupoidFunction) -> Result<Vec<f64>> {
    require_self_adjoint(alg, a)?;
    let mut values = Vec::with_capacity(a.len());
    for u in 0..alg.groupoid().unit_count() {
        values.extend(linalg::hermitian_eigenvalues(&regular_rep_matrix(alg, a, u)?.matrix));
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Smallest eigenvalue over all blocks `π_u(a)`; `a` must be self-adjoint.
pub fn min_eigenvalue(alg: &ConvolutionAlgebra<'_>, a: &GroupoidFunction) -> Result<f64> {
    Ok(spectrum(alg, a)?.first().copied().unwrap_or(0.0))
}

/// `a ≥ 0` iff `a` is self-adjoint and every block has
/// `λ_min ≥ -1e-9 · (1 + ‖a‖)`.
pub fn positivity_check(alg: &ConvolutionAlgebra<'_>, a: &GroupoidFunction) -> Result<bool> {
    match require_self_adjoint(alg, a) {
        Err(Error::NotSelfAdjoint { .. }) => return Ok(false),
        other => other?,
    }
    let floor = -crate::SPECTRAL_TOL * (1.0 + cstar_norm(alg, a)?);
    Ok(min_eigenvalue(alg, a)? >= floor)
}

/// `π_u^γ(a)` on `L²((G_γ)u, λ_u)` for `a ∈ C_c(G_e)`, computed by applying
/// `(π_u^γ(a)h)(x) = Σ_{y ∈ G_e, r(y) = r(x)} a(y) h(y⁻¹x) w(y)` to each basis
/// vector.
pub fn fiber_block(
    graded: &GradedGroupoid,
    a_e: &GroupoidFunction,
    u: usize,
    element: &GroupElement,
) -> Result<RepMatrix> {
    graded.fiber_algebra().check(a_e)?;
    let alg = graded.algebra();
    let g = graded.groupoid();
    let w = graded.haar().weights();
    let basis = WeightedL2Basis::from_arrows(&alg, u, graded.fiber_at(element, u));
    let n = basis.dim();
    let mut matrix = CMatrix::zeros(n, n);
    let sub = graded.identity_fiber();
    for (j, &x0) in basis.arrows.iter().enumerate() {
        for (k, &y) in sub.embedding.iter().enumerate() {
            let Some(xp) = g.compose(y, x0) else { continue };
            let i = basis
                .position(xp)
                .expect("G_e translates of a fibre stay in the fibre");
            matrix[(i, j)] +=
                a_e.get(k) * w[y] * libm::sqrt(basis.weights[i] / basis.weights[j]);
        }
    }
    Ok(RepMatrix { basis, matrix })
}

/// The fibre decomposition of `π_u(i(a_e))`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberDecomposition {
    pub unit: usize,
    /// Nonempty blocks `π_u^γ(a_e)` in group-element order.
    pub blocks: Vec<(GroupElement, RepMatrix)>,
    /// `Uπ_u(i(a_e))U*`, i.e. `π_u(i(a_e))` with its basis sorted by fibre.
    pub permuted: CMatrix,
    /// Largest entrywise gap between `permuted` and `⊕_γ π_u^γ(a_e)`.
    pub deviation: f64,
    pub holds: bool,
}

/// Splits `L²(Gu)` into the fibre pieces `L²((G_γ)u)` and compares the
/// permuted `π_u(i(a_e))` with the block diagonal of the `π_u^γ(a_e)`.
pub fn decompose_rep_u(
    graded: &GradedGroupoid,
    a_e: &GroupoidFunction,
    u: usize,
) -> Result<FiberDecomposition> {
    let alg = graded.algebra();
    let full = regular_rep_matrix(&alg, &graded.include(a_e)?, u)?;
    let mut blocks = Vec::new();
    for element in graded.degrees() {
        if graded.fiber_at(element, u).is_empty() {
            continue;
        }
        blocks.push((element.clone(), fiber_block(graded, a_e, u, element)?));
    }
    let order: Vec<usize> = blocks
        .iter()
        .flat_map(|(_, b)| b.basis.arrows().iter().copied())
        .map(|x| full.basis.position(x).expect("fibre pieces partition Gu"))
        .collect();
    let n = order.len();
    let permuted = CMatrix::from_fn(n, n, |i, j| full.matrix[(order[i], order[j])]);
    let mut diagonal = CMatrix::zeros(n, n);
    let mut offset = 0;
    for (_, b) in &blocks {
        let d = b.basis.dim();
        diagonal.view_mut((offset, offset), (d, d)).copy_from(&b.matrix);
        offset += d;
    }
    let deviation = linalg::max_entry_distance(&permuted, &diagonal);
    let scale = 1.0 + linalg::max_entry(&permuted).max(linalg::max_entry(&diagonal));
    Ok(FiberDecomposition {
        unit: u,
        blocks,
        permuted,
        deviation,
        holds: deviation <= ALGEBRAIC_TOL * scale,
    })
}

/// The unitary `V_γ: L²((G_γ)u) -> L²((G_e)v)`, `v = r(z)`, induced by
/// `x ↦ xz`, and the conjugation identity `V π_u^γ(a) V* = π_v^e(a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Translation {
    pub unit: usize,
    pub element: GroupElement,
    /// The connecting arrow `z ∈ (G_γ)u`.
    pub connector: usize,
    pub target_unit: usize,
    pub v: CMatrix,
    /// `V π_u^γ(a) V*`.
    pub conjugated: CMatrix,
    /// `π_v^e(a)`.
    pub target: RepMatrix,
    pub deviation: f64,
    /// Largest entry of `VV* - I` and `V*V - I`.
    pub unitarity_defect: f64,
    pub holds: bool,
}

/// [`translate_rep_v_via`] with the deterministic connector: the unit arrow
/// for `γ = e`, otherwise the first arrow of `(G_γ)u` in declared order.
pub fn translate_rep_v(
    graded: &GradedGroupoid,
    a_e: &GroupoidFunction,
    u: usize,
    element: &GroupElement,
) -> Result<Translation> {
    let g = graded.groupoid();
    if u >= g.unit_count() {
        return Err(Error::UnknownUnit(u));
    }
    let z = if element == graded.identity_element() {
        g.unit_arrow(u)
    } else {
        *graded
            .fiber_at(element, u)
            .first()
            .ok_or_else(|| Error::EmptyFiber {
                unit: graded.unit_label(u),
                element: element.to_string(),
            })?
    };
    translate_rep_v_via(graded, a_e, u, element, z)
}

/// As [`translate_rep_v`] with a caller-chosen connector `z ∈ (G_γ)u`.
pub fn translate_rep_v_via(
    graded: &GradedGroupoid,
    a_e: &GroupoidFunction,
    u: usize,
    element: &GroupElement,
    z: usize,
) -> Result<Translation> {
    let g = graded.groupoid();
    if u >= g.unit_count() {
        return Err(Error::UnknownUnit(u));
    }
    if z >= g.arrow_count() || g.source(z) != u || graded.degree(z) != element {
        return Err(Error::BadConnector(
            g.arrows().get(z).map_or("<out of range>".into(), |a| a.id.clone()),
        ));
    }
    let v_unit = g.range(z);
    let block = fiber_block(graded, a_e, u, element)?;
    let sub = graded.identity_fiber();
    let target = regular_rep_matrix(&graded.fiber_algebra(), a_e, v_unit)?;

    let rows = target.basis.dim();
    let cols = block.basis.dim();
    let mut v = CMatrix::zeros(rows, cols);
    for (i, &x_sub) in target.basis.arrows().iter().enumerate() {
        let x = sub.embedding[x_sub];
        let xz = g.compose(x, z).expect("s(x) = r(z) for x in (G_e)r(z)");
        let j = block
            .basis
            .position(xz)
            .expect("x ↦ xz maps (G_e)r(z) into (G_γ)u");
        // (Vh)(x) = h(xz). In orthonormal coordinates e_xz ↦ √(λ_v(x)/λ_u(xz)) e_x;
        // λ_u(xz) = rho(r(x)) = λ_v(x), so no rescaling is needed for V to be unitary.
        let (lu, lv) = (block.basis.weights()[j], target.basis.weights()[i]);
        v[(i, j)] = Complex64::new(libm::sqrt(lv / lu), 0.0);
    }
    let conjugated = &v * &block.matrix * v.adjoint();
    let deviation = linalg::max_entry_distance(&conjugated, &target.matrix);
    let unitarity_defect = linalg::max_entry_distance(&(&v * v.adjoint()), &CMatrix::identity(rows, rows))
        .max(linalg::max_entry_distance(&(v.adjoint() * &v), &CMatrix::identity(cols, cols)));
    let scale = 1.0 + linalg::max_entry(&conjugated).max(linalg::max_entry(&target.matrix));
    Ok(Translation {
        unit: u,
        element: element.clone(),
        connector: z,
        target_unit: v_unit,
        holds: deviation <= ALGEBRAIC_TOL * scale && unitarity_defect <= ALGEBRAIC_TOL,
        v,
        conjugated,
        target,
        deviation,
        unitarity_defect,
    })
}

/// The three quantities in the norm computation for `i(a_e)`:
/// `max_v ‖π_v(i(a_e))‖`, `max_{v,γ} ‖π_v^γ(a_e)‖` and `max_v ‖π_v^e(a_e)‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormChain {
    pub ambient: f64,
    pub blocks: f64,
    pub identity_fiber: f64,
}

pub fn norm_chain(graded: &GradedGroupoid, a_e: &GroupoidFunction) -> Result<NormChain> {
    let ambient = cstar_norm(&graded.algebra(), &graded.include(a_e)?)?;
    let mut blocks: f64 = 0.0;
    for u in 0..graded.groupoid().unit_count() {
        for element in graded.degrees() {
            if !graded.fiber_at(element, u).is_empty() {
                blocks = blocks.max(fiber_block(graded, a_e, u, element)?.norm());
            }
        }
    }
    let identity_fiber = cstar_norm(&graded.fiber_algebra(), a_e)?;
    Ok(NormChain {
        ambient,
        blocks,
        identity_fiber,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::Cocycle;
    use crate::group::DiscreteGroup;
    use crate::groupoid::pair_groupoid;
    use crate::haar::HaarSystem;
    use alloc::vec;

    fn graded_p2(rho: [f64; 2]) -> GradedGroupoid {
        let g = pair_groupoid(2).unwrap();
        let h = HaarSystem::from_weights(&g, rho.to_vec()).unwrap();
        // c(i, j) = i - j
        let labels = g
            .arrows()
            .iter()
            .map(|a| GroupElement::from(a.dst as i64 - a.src as i64))
            .collect();
        GradedGroupoid::new(g, h, Cocycle::new(DiscreteGroup::FreeAbelian { rank: 1 }, labels)).unwrap()
    }

    #[test]
    fn weighted_off_diagonal_entry() {
        let gg = graded_p2([1.0, 4.0]);
        let alg = gg.algebra();
        let x = gg.groupoid().arrow_index("(1,2)").unwrap();
        let rep = regular_rep_matrix(&alg, &alg.delta(x), 0).unwrap();
        let from = rep.basis.position(gg.groupoid().arrow_index("(2,1)").unwrap()).unwrap();
        let to = rep.basis.position(gg.groupoid().arrow_index("(1,1)").unwrap()).unwrap();
        assert!((rep.matrix[(to, from)] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!((cstar_norm(&alg, &alg.delta(x)).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_needs_self_adjoint() {
        let gg = graded_p2([1.0, 1.0]);
        let alg = gg.algebra();
        let x = gg.groupoid().arrow_index("(1,2)").unwrap();
        assert!(matches!(spectrum(&alg, &alg.delta(x)), Err(Error::NotSelfAdjoint { .. })));
        assert!(!positivity_check(&alg, &alg.delta(x)).unwrap());
    }

    #[test]
    fn diagonal_difference_is_not_positive() {
        let gg = graded_p2([1.0, 1.0]);
        let alg = gg.algebra();
        let g = gg.groupoid();
        let a = &alg.delta(g.arrow_index("(1,1)").unwrap()) - &alg.delta(g.arrow_index("(2,2)").unwrap());
        assert!((min_eigenvalue(&alg, &a).unwrap() + 1.0).abs() < 1e-12);
        assert!(!positivity_check(&alg, &a).unwrap());
    }

    #[test]
    fn empty_fibre_translation_is_an_error() {
        let gg = graded_p2([1.0, 1.0]);
        let a_e = gg.fiber_algebra().unit();
        let err = translate_rep_v(&gg, &a_e, 0, &GroupElement::from(5)).unwrap_err();
        assert!(matches!(err, Error::EmptyFiber { .. }));
    }

    #[test]
    fn block_example() {
        let gg = graded_p2([1.0, 1.0]);
        let sub = &gg.identity_fiber().groupoid;
        let mut a_e = gg.fiber_algebra().zero();
        a_e.coeffs_mut()[sub.arrow_index("(1,1)").unwrap()] = Complex64::new(3.0, 0.0);
        a_e.coeffs_mut()[sub.arrow_index("(2,2)").unwrap()] = Complex64::new(-5.0, 1.0);
        let d = decompose_rep_u(&gg, &a_e, 0).unwrap();
        assert!(d.holds);
        let blocks: alloc::vec::Vec<_> = d.blocks.iter().map(|(el, m)| (el.clone(), m.matrix[(0, 0)])).collect();
        assert_eq!(
            blocks,
            vec![
                (GroupElement::from(0), Complex64::new(3.0, 0.0)),
                (GroupElement::from(1), Complex64::new(-5.0, 1.0)),
            ]
        );
        let t = translate_rep_v(&gg, &a_e, 0, &GroupElement::from(1)).unwrap();
        assert!(t.holds);
        assert_eq!(t.target_unit, 1);
        assert_eq!(t.target.matrix[(0, 0)], Complex64::new(-5.0, 1.0));
    }
}
