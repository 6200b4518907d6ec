//! The convolution `*`-algebra `C_c(G)` and its graded pieces.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grading::GradedGroupoid;
use crate::group::GroupElement;
use crate::groupoid::FiniteGroupoid;
use crate::haar::HaarSystem;

/// A complex function on the arrows, stored densely in declared arrow order.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupoidFunction {
    coeffs: Vec<Complex64>,
}

impl GroupoidFunction {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn delta(len: usize, x: usize) -> Self {
        let mut f = Self::zeros(len);
        f.coeffs[x] = Complex64::new(1.0, 0.0);
        f
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn get(&self, x: usize) -> Complex64 {
        self.coeffs[x]
    }

    /// Arrows with a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(|(x, _)| x)
    }

    pub fn is_zero(&self) -> bool {
        self.support().next().is_none()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficientwise distance; infinite for different lengths.
    pub fn max_distance(&self, other: &Self) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Coefficientwise agreement within `tol · (1 + max |coefficient|)`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_distance(other) <= tol * (1.0 + self.max_abs().max(other.max_abs()))
    }
}

impl Add for &GroupoidFunction {
    type Output = GroupoidFunction;
    fn add(self, rhs: Self) -> GroupoidFunction {
        assert_eq!(self.len(), rhs.len(), "adding functions on different groupoids");
        GroupoidFunction::new(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &GroupoidFunction {
    type Output = GroupoidFunction;
    fn sub(self, rhs: Self) -> GroupoidFunction {
        assert_eq!(self.len(), rhs.len(), "subtracting functions on different groupoids");
        GroupoidFunction::new(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &GroupoidFunction {
    type Output = GroupoidFunction;
    fn neg(self) -> GroupoidFunction {
        GroupoidFunction::new(self.coeffs.iter().map(|a| -a).collect())
    }
}

impl Mul<&GroupoidFunction> for Complex64 {
    type Output = GroupoidFunction;
    fn mul(self, rhs: &GroupoidFunction) -> GroupoidFunction {
        rhs.scale(self)
    }
}

/// `C_c(G)` for a groupoid with a Haar system.
#[derive(Debug, Clone, Copy)]
pub struct ConvolutionAlgebra<'a> {
    groupoid: &'a FiniteGroupoid,
    haar: &'a HaarSystem,
}

impl<'a> ConvolutionAlgebra<'a> {
    pub fn new(groupoid: &'a FiniteGroupoid, haar: &'a HaarSystem) -> Result<Self> {
        if haar.weights().len() != groupoid.arrow_count() {
            return Err(Error::LengthMismatch {
                what: "Haar weights",
                expected: groupoid.arrow_count(),
                found: haar.weights().len(),
            });
        }
        Ok(Self { groupoid, haar })
    }

    pub fn groupoid(&self) -> &'a FiniteGroupoid {
        self.groupoid
    }

    pub fn haar(&self) -> &'a HaarSystem {
        self.haar
    }

    pub fn dim(&self) -> usize {
        self.groupoid.arrow_count()
    }

    pub fn check(&self, a: &GroupoidFunction) -> Result<()> {
        if a.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: a.len(),
            });
        }
        Ok(())
    }

    pub fn zero(&self) -> GroupoidFunction {
        GroupoidFunction::zeros(self.dim())
    }

    pub fn delta(&self, x: usize) -> GroupoidFunction {
        GroupoidFunction::delta(self.dim(), x)
    }

    /// The unit `e = Σ_u rho(u)⁻¹ δ_u`.
    pub fn unit(&self) -> GroupoidFunction {
        let mut e = self.zero();
        for u in 0..self.groupoid.unit_count() {
            e.coeffs_mut()[self.groupoid.unit_arrow(u)] =
                Complex64::new(1.0 / self.haar.unit_weight(u), 0.0);
        }
        e
    }

    /// `(a*b)(x) = Σ_{r(y)=r(x)} a(y) b(y⁻¹x) w(y)`.
    ///
    /// Summed over composable pairs `(y, t)` with `yt = x`, which is the same
    /// sum indexed by `t = y⁻¹x`.
    pub fn convolve(&self, a: &GroupoidFunction, b: &GroupoidFunction) -> Result<GroupoidFunction> {
        self.check(a)?;
        self.check(b)?;
        let mut out = self.zero();
        let (ac, bc) = (a.coeffs(), b.coeffs());
        let w = self.haar.weights();
        let oc = out.coeffs_mut();
        for &(y, t, x) in self.groupoid.composable() {
            oc[x] += ac[y] * bc[t] * w[y];
        }
        Ok(out)
    }

    /// `a*(x) = conj(a(x⁻¹))`.
    pub fn involute(&self, a: &GroupoidFunction) -> Result<GroupoidFunction> {
        self.check(a)?;
        Ok(GroupoidFunction::new(
            (0..self.dim())
                .map(|x| a.get(self.groupoid.inverse(x)).conj())
                .collect(),
        ))
    }

    /// `max( sup_u Σ_{r(x)=u} |a(x)| w(x), sup_u Σ_{r(x)=u} |a(x⁻¹)| w(x) )`.
    pub fn i_norm(&self, a: &GroupoidFunction) -> Result<f64> {
        self.check(a)?;
        let w = self.haar.weights();
        let mut best: f64 = 0.0;
        for u in 0..self.groupoid.unit_count() {
            let fibre = self.groupoid.with_range(u);
            let direct: f64 = fibre.iter().map(|&x| a.get(x).norm() * w[x]).sum();
            let inverted: f64 = fibre
                .iter()
                .map(|&x| a.get(self.groupoid.inverse(x)).norm() * w[x])
                .sum();
            best = best.max(direct).max(inverted);
        }
        Ok(best)
    }

    /// Largest coefficient of `a - a*`.
    pub fn self_adjoint_defect(&self, a: &GroupoidFunction) -> Result<f64> {
        Ok(a.max_distance(&self.involute(a)?))
    }
}

impl GradedGroupoid {
    pub fn algebra(&self) -> ConvolutionAlgebra<'_> {
        ConvolutionAlgebra {
            groupoid: self.groupoid(),
            haar: self.haar(),
        }
    }

    /// `C_c(G_e)` with the restricted Haar system.
    pub fn fiber_algebra(&self) -> ConvolutionAlgebra<'_> {
        let sub = self.identity_fiber();
        ConvolutionAlgebra {
            groupoid: &sub.groupoid,
            haar: &sub.haar,
        }
    }

    /// Extension by zero `i: C_c(G_e) -> C_c(G)`.
    pub fn include(&self, f: &GroupoidFunction) -> Result<GroupoidFunction> {
        self.fiber_algebra().check(f)?;
        let mut out = self.algebra().zero();
        for (k, &x) in self.identity_fiber().embedding.iter().enumerate() {
            out.coeffs_mut()[x] = f.get(k);
        }
        Ok(out)
    }

    /// Restriction `Q(a) = a|_{G_e}`.
    pub fn restrict(&self, a: &GroupoidFunction) -> Result<GroupoidFunction> {
        self.algebra().check(a)?;
        Ok(GroupoidFunction::new(
            self.identity_fiber()
                .embedding
                .iter()
                .map(|&x| a.get(x))
                .collect(),
        ))
    }

    /// The homogeneous component `a_γ = a|_{G_γ}`, kept as a function on `G`.
    pub fn component(&self, a: &GroupoidFunction, element: &GroupElement) -> Result<GroupoidFunction> {
        self.algebra().check(a)?;
        let mut out = self.algebra().zero();
        for &x in self.fiber(element) {
            out.coeffs_mut()[x] = a.get(x);
        }
        Ok(out)
    }

    /// The fibre containing the support of `a`; `None` for `a = 0`.
    ///
    /// Fails with the offending arrows when the support meets two fibres.
    pub fn homogeneous_degree(&self, a: &GroupoidFunction) -> Result<Option<GroupElement>> {
        self.algebra().check(a)?;
        let mut support = a.support();
        let Some(first) = support.next() else {
            return Ok(None);
        };
        let degree = self.degree(first);
        if let Some(other) = support.find(|&x| self.degree(x) != degree) {
            return Err(Error::NotFiberSupported {
                arrows: vec![
                    self.groupoid().arrow_id(first).into(),
                    self.groupoid().arrow_id(other).into(),
                ],
            });
        }
        Ok(Some(degree.clone()))
    }
}
