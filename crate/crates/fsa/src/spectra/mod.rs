//! Spectral machinery: characteristic polynomial, eigenvalues, generalized
//! eigenspaces, Jordan chains and first-visible indices.

pub mod chains;
pub mod poly;

pub use chains::{first_visible_index, jordan_chains, JordanChain, OperatorTag, VisibilityIndex};
pub use poly::{char_poly, Polynomial};

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::ratlin::{nullspace, Rat, RationalMatrix, Subspace};
use crate::SpectraError;

/// An eigenvalue with algebraic multiplicity. Rational eigenvalues are
/// exact; the rest are numeric complex approximations.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenvalue {
    pub value: EigenvalueValue,
    pub alg_mult: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum EigenvalueValue {
    Exact(Rat),
    Numeric(Complex64),
}

impl Eigenvalue {
    pub fn exact(value: Rat, alg_mult: usize) -> Self {
        Eigenvalue {
            value: EigenvalueValue::Exact(value),
            alg_mult,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.value, EigenvalueValue::Exact(_))
    }

    pub fn exact_value(&self) -> Option<&Rat> {
        match &self.value {
            EigenvalueValue::Exact(r) => Some(r),
            EigenvalueValue::Numeric(_) => None,
        }
    }

    /// Re(λ) ≥ 0 classification; the Numeric path widens the boundary to
    /// Re(λ) ≥ -stab_tol.
    pub fn is_unstable(&self, stab_tol: f64) -> bool {
        match &self.value {
            EigenvalueValue::Exact(r) => !r.is_negative(),
            EigenvalueValue::Numeric(z) => z.re >= -stab_tol,
        }
    }

    pub fn approx(&self) -> Complex64 {
        match &self.value {
            EigenvalueValue::Exact(r) => Complex64::new(crate::numeric::rat_to_f64(r), 0.0),
            EigenvalueValue::Numeric(z) => *z,
        }
    }
}

/// All eigenvalues of a square rational matrix. Multiplicities always sum
/// to n; rational eigenvalues come out exact.
pub fn eigenvalues(a: &RationalMatrix) -> Vec<Eigenvalue> {
    let p = char_poly(a);
    poly::roots(&p)
        .into_iter()
        .map(|r| Eigenvalue {
            value: match r.root {
                poly::Root::Exact(x) => EigenvalueValue::Exact(x),
                poly::Root::Numeric(z) => EigenvalueValue::Numeric(z),
            },
            alg_mult: r.multiplicity,
        })
        .collect()
}

/// ker((λI - A)^n) for an exact eigenvalue λ; dimension equals the
/// algebraic multiplicity.
pub fn generalized_eigenspace(
    a: &RationalMatrix,
    lambda: &Eigenvalue,
) -> Result<Subspace, SpectraError> {
    let val = lambda
        .exact_value()
        .ok_or(SpectraError::NumericEigenvalueUnsupportedExact)?;
    let n = a.rows();
    let shifted = shifted_matrix(a, val);
    let space = nullspace(&shifted.pow(n));
    if space.dim() == 0 && n > 0 {
        return Err(SpectraError::NotAnEigenvalue);
    }
    Ok(space)
}

/// λI - A, exact.
pub fn shifted_matrix(a: &RationalMatrix, lambda: &Rat) -> RationalMatrix {
    let n = a.rows();
    RationalMatrix::from_fn(n, n, |i, j| {
        if i == j {
            lambda - &a[(i, j)]
        } else {
            -a[(i, j)].clone()
        }
    })
}

/// Direct sum of the generalized eigenspaces over eigenvalues with
/// Re(λ) ≥ 0 (Re(λ) ≥ -stab_tol on the numeric residual).
///
/// Complex-pair contributions stay exact whenever the residual spectral
/// factor splits along the stability boundary or its unstable quadratic
/// factors have recoverable rational coefficients; otherwise the split is
/// reported as unsupported.
pub fn unstable_eigenspace(
    a: &RationalMatrix,
    stab_tol: f64,
) -> Result<Subspace, SpectraError> {
    let n = a.rows();
    let p = char_poly(a);
    let (exact, residual) = poly::split_rational_roots(&p);

    let mut acc = Subspace::zero(n);
    for (lambda, mult) in &exact {
        if !lambda.is_negative() {
            let ev = Eigenvalue::exact(lambda.clone(), *mult);
            acc = acc.sum(&generalized_eigenspace(a, &ev)?)?;
        }
    }

    if residual.degree() > 0 {
        let numeric = poly::numeric_roots(&residual);
        let unstable: Vec<_> = numeric
            .iter()
            .filter(|r| match &r.root {
                poly::Root::Numeric(z) => z.re >= -stab_tol,
                poly::Root::Exact(_) => unreachable!("residual has no rational roots"),
            })
            .collect();
        if unstable.is_empty() {
            return Ok(acc);
        }
        if unstable.len() == numeric.len() {
            // Whole residual factor is unstable; its kernel is exact.
            let g_a = residual.eval_matrix(a);
            acc = acc.sum(&nullspace(&g_a.pow(n)))?;
            return Ok(acc);
        }
        // Mixed residual: try to peel off rational quadratic factors for
        // the unstable conjugate pairs.
        let mut rem = residual.clone();
        for r in &unstable {
            let poly::Root::Numeric(z) = &r.root else { unreachable!() };
            if z.im <= 0.0 {
                continue; // conjugate handled with its partner (or real root, below)
            }
            let q = rationalize_quadratic(*z).ok_or(SpectraError::UnstableSplitUnsupported)?;
            let mut extracted = Polynomial::new(vec![Rat::from_integer(1.into())]);
            for _ in 0..r.multiplicity {
                rem = divide_exact(&rem, &q).ok_or(SpectraError::UnstableSplitUnsupported)?;
                extracted = mul_poly(&extracted, &q);
            }
            let g_a = extracted.eval_matrix(a);
            acc = acc.sum(&nullspace(&g_a.pow(n)))?;
        }
        if unstable.iter().any(|r| match &r.root {
            poly::Root::Numeric(z) => z.im.abs() < 1e-9,
            _ => false,
        }) {
            // A real irrational unstable root cannot be isolated exactly.
            return Err(SpectraError::UnstableSplitUnsupported);
        }
    }
    Ok(acc)
}

/// Recover the rational quadratic s² - 2·Re(z)·s + |z|² when its
/// coefficients are (close to) small rationals.
fn rationalize_quadratic(z: Complex64) -> Option<Polynomial> {
    let b = rationalize(-2.0 * z.re)?;
    let c = rationalize(z.norm_sqr())?;
    Some(Polynomial::new(vec![
        c,
        b,
        Rat::from_integer(1.into()),
    ]))
}

/// Continued-fraction rational reconstruction with a denominator cap.
fn rationalize(x: f64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (1i128, 0i128, x.floor() as i128, 1i128);
    let mut frac = x - x.floor();
    for _ in 0..40 {
        let approx = p1 as f64 / q1 as f64;
        if (approx - x).abs() < 1e-9 * x.abs().max(1.0) {
            let r = Rat::new(p1.into(), q1.into());
            return Some(r);
        }
        if frac.abs() < 1e-12 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        let (p2, q2) = (a as i128 * p1 + p0, a as i128 * q1 + q0);
        if q2 > 1_000_000_000 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    let approx = p1 as f64 / q1 as f64;
    ((approx - x).abs() < 1e-9 * x.abs().max(1.0)).then(|| Rat::new(p1.into(), q1.into()))
}

fn mul_poly(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut out = vec![Rat::zero(); a.degree() + b.degree() + 1];
    for (i, ca) in a.coeffs().iter().enumerate() {
        for (j, cb) in b.coeffs().iter().enumerate() {
            out[i + j] = &out[i + j] + &(ca * cb);
        }
    }
    Polynomial::new(out)
}

/// Exact polynomial division; `None` when the remainder is nonzero.
fn divide_exact(num: &Polynomial, den: &Polynomial) -> Option<Polynomial> {
    if den.degree() > num.degree() {
        return None;
    }
    let mut rem: Vec<Rat> = num.coeffs().to_vec();
    let dn = den.degree();
    let lead = den.leading().clone();
    let qlen = num.degree() - dn + 1;
    let mut quot = vec![Rat::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = &rem[k + dn] / &lead;
        quot[k] = c.clone();
        for (i, dc) in den.coeffs().iter().enumerate() {
            rem[k + i] = &rem[k + i] - &(&c * dc);
        }
    }
    rem.iter().all(|c| c.is_zero()).then(|| Polynomial::new(quot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::rat;

    fn example1_a() -> RationalMatrix {
        RationalMatrix::from_i64(&[
            &[4, 0, -2, 7],
            &[1, 2, 0, 2],
            &[-1, 0, 4, -5],
            &[-1, 1, 1, -1],
        ])
    }

    #[test]
    fn example1_spectrum() {
        let eigs = eigenvalues(&example1_a());
        assert_eq!(eigs.len(), 2);
        assert_eq!(eigs[0], Eigenvalue::exact(rat(2), 3));
        assert_eq!(eigs[1], Eigenvalue::exact(rat(3), 1));
    }

    #[test]
    fn rotation_engages_numeric_path() {
        let a = RationalMatrix::from_i64(&[&[0, 1], &[-1, 0]]);
        let eigs = eigenvalues(&a);
        assert_eq!(eigs.len(), 2);
        assert!(eigs.iter().all(|e| !e.is_exact()));
        assert!(eigs.iter().all(|e| e.is_unstable(0.0)));
    }

    #[test]
    fn generalized_eigenspace_dims() {
        let at = example1_a().transpose();
        let e2 = Eigenvalue::exact(rat(2), 3);
        assert_eq!(generalized_eigenspace(&at, &e2).unwrap().dim(), 3);
        let e3 = Eigenvalue::exact(rat(3), 1);
        assert_eq!(generalized_eigenspace(&at, &e3).unwrap().dim(), 1);
        let not_eig = Eigenvalue::exact(rat(7), 1);
        assert!(generalized_eigenspace(&at, &not_eig).is_err());
    }

    #[test]
    fn unstable_eigenspace_extremes() {
        let hurwitz = RationalMatrix::from_i64(&[&[-1, 1], &[0, -2]]);
        assert!(unstable_eigenspace(&hurwitz, 0.0).unwrap().is_zero());

        let id = RationalMatrix::identity(3);
        assert_eq!(unstable_eigenspace(&id, 0.0).unwrap().dim(), 3);
    }

    #[test]
    fn unstable_eigenspace_complex_pair() {
        // Block diag(rotation, -1): rotation modes are marginally unstable.
        let a = RationalMatrix::from_i64(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, -1]]);
        let x_plus = unstable_eigenspace(&a, 0.0).unwrap();
        assert_eq!(x_plus.dim(), 2);
    }
}
