//! Dense complex matrix helpers.
//!
//! Operator norms come from a full Hermitian eigendecomposition of `M†M`
//! rather than an iterative method, so repeated runs give identical bits.

use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let h = (m + m.adjoint()).scale(0.5);
    let mut values: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Full eigendecomposition of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(h);
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Largest singular value, `sqrt(λ_max(M†M))`.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    let top = hermitian_eigenvalues(&gram).last().copied().unwrap_or(0.0);
    libm::sqrt(top.max(0.0))
}

/// Largest entrywise modulus of `a - b`; infinite on shape mismatch.
pub fn max_entry_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_entry(a: &CMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_of_diagonal() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(alloc::vec![
            Complex64::new(0.0, -3.0),
            Complex64::new(2.0, 0.0),
        ]));
        assert!((operator_norm(&m) - 3.0).abs() < 1e-14);
        assert_eq!(hermitian_eigenvalues(&m), alloc::vec![0.0, 2.0]);
    }

    #[test]
    fn empty_matrix_has_zero_norm() {
        assert_eq!(operator_norm(&CMatrix::zeros(0, 0)), 0.0);
    }
}
