//! Haar systems on finite groupoids.
//!
//! Left invariance forces the weight of an arrow to depend only on its
//! source, so a Haar system is a positive weight `rho(u)` per unit and the
//! measure `λ^u` gives the arrow `y` (with `r(y) = u`) weight `rho(s(y))`.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Axiom, AxiomViolation, Error, Result};
use crate::groupoid::FiniteGroupoid;

#[derive(Debug, Clone, PartialEq)]
pub struct HaarSystem {
    rho: Vec<f64>,
    weights: Vec<f64>,
}

impl HaarSystem {
    pub fn from_weights(g: &FiniteGroupoid, rho: Vec<f64>) -> Result<Self> {
        if rho.len() != g.unit_count() {
            return Err(Error::LengthMismatch {
                what: "unit weights",
                expected: g.unit_count(),
                found: rho.len(),
            });
        }
        if let Some(u) = rho.iter().position(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(Error::NonPositiveWeight {
                unit: g.unit_id(u).to_string(),
                value: rho[u],
            });
        }
        let weights = (0..g.arrow_count()).map(|x| rho[g.source(x)]).collect();
        Ok(Self { rho, weights })
    }

    /// Counting measures (`rho ≡ 1`).
    pub fn counting(g: &FiniteGroupoid) -> Self {
        Self::from_weights(g, alloc::vec![1.0; g.unit_count()]).expect("unit weights are positive")
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn unit_weight(&self, u: usize) -> f64 {
        self.rho[u]
    }

    /// Arrow weights `w(y) = rho(s(y))`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, x: usize) -> f64 {
        self.weights[x]
    }

    pub fn is_counting(&self) -> bool {
        self.rho.iter().all(|&r| r == 1.0)
    }
}

/// Finds `(x, z)` breaking left invariance of the arrow weights `w`.
///
/// Invariance against every indicator `f = δ_z` reads
/// `Σ_{r(y)=s(x)} δ_z(xy) w(y) = Σ_{r(y)=r(x)} δ_z(y) w(y)`: for `r(z) = r(x)`
/// the left side is `w(x⁻¹z)` and the right side `w(z)`, otherwise both
/// vanish.
pub fn left_invariance_violation(g: &FiniteGroupoid, w: &[f64]) -> Option<AxiomViolation> {
    if w.len() != g.arrow_count() {
        return Some(AxiomViolation::new(Axiom::LeftInvariance, ["<length>"]));
    }
    for x in 0..g.arrow_count() {
        let xinv = g.inverse(x);
        for &z in g.with_range(g.range(x)) {
            let lhs = g.compose(xinv, z).map_or(0.0, |y| w[y]);
            let rhs = w[z];
            if (lhs - rhs).abs() > crate::ALGEBRAIC_TOL * lhs.abs().max(rhs.abs()) {
                return Some(AxiomViolation::new(
                    Axiom::LeftInvariance,
                    [g.arrow_id(x), g.arrow_id(z)],
                ));
            }
        }
    }
    None
}

pub fn validate_left_invariance(g: &FiniteGroupoid, w: &[f64]) -> bool {
    left_invariance_violation(g, w).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::groupoid::{group_groupoid, pair_groupoid};

    #[test]
    fn weights_follow_source() {
        let g = pair_groupoid(2).unwrap();
        let h = HaarSystem::from_weights(&g, alloc::vec![1.0, 4.0]).unwrap();
        assert_eq!(h.weight(g.arrow_index("(1,2)").unwrap()), 4.0);
        assert_eq!(h.weight(g.arrow_index("(2,1)").unwrap()), 1.0);
        assert!(validate_left_invariance(&g, h.weights()));
    }

    #[test]
    fn zero_weight_rejected() {
        let g = pair_groupoid(2).unwrap();
        let err = HaarSystem::from_weights(&g, alloc::vec![0.0, 1.0]).unwrap_err();
        assert_eq!(
            err,
            Error::NonPositiveWeight {
                unit: "1".into(),
                value: 0.0
            }
        );
    }

    #[test]
    fn perturbed_weight_breaks_invariance() {
        let g = pair_groupoid(2).unwrap();
        let mut w = HaarSystem::from_weights(&g, alloc::vec![1.0, 4.0])
            .unwrap()
            .weights()
            .to_vec();
        w[g.arrow_index("(1,2)").unwrap()] = 4.5;
        let v = left_invariance_violation(&g, &w).unwrap();
        assert_eq!(v.axiom, Axiom::LeftInvariance);
        assert!(!validate_left_invariance(&g, &w));
    }

    #[test]
    fn group_weights_invariant_iff_constant() {
        // brute force over weight patterns in {1, 2}^n on Z/n, n ≤ 6
        for n in 1..=6 {
            let g = group_groupoid(&FiniteGroup::cyclic(n)).unwrap();
            for mask in 0u32..(1 << n) {
                let w: Vec<f64> = (0..n).map(|i| 1.0 + ((mask >> i) & 1) as f64).collect();
                let constant = w.iter().all(|&v| v == w[0]);
                assert_eq!(validate_left_invariance(&g, &w), constant, "n={n} mask={mask}");
            }
        }
    }
}
