//! Exact univariate polynomials over the rationals, plus root extraction.
//!
//! Rational roots are found exactly (rational-root search on the primitive
//! integer polynomial followed by exact deflation); whatever factor remains
//! is handed to a numeric Aberth–Ehrlich style solver and its roots are
//! reported as numeric complex approximations.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ratlin::{Rat, RationalMatrix};

/// Polynomial with ascending rational coefficients (`coeffs[i]` multiplies s^i).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    coeffs: Vec<Rat>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rat::zero());
        }
        Polynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| crate::ratlin::rat(c)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Rat]) -> Self {
        let mut p = Polynomial::new(vec![Rat::one()]);
        for r in roots {
            p = p.mul_linear(r);
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Rat {
        self.coeffs.last().unwrap()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Complex64::new(rat_to_f64(c), 0.0);
        }
        acc
    }

    /// Multiply by the linear factor (s - root).
    pub fn mul_linear(&self, root: &Rat) -> Self {
        let mut out = vec![Rat::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + 1] = &out[i + 1] + c;
            out[i] = &out[i] - &(c * root);
        }
        Polynomial::new(out)
    }

    /// Evaluates the polynomial at a square matrix argument.
    pub fn eval_matrix(&self, a: &RationalMatrix) -> RationalMatrix {
        assert!(a.is_square());
        let n = a.rows();
        let mut acc = RationalMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(a);
            for i in 0..n {
                acc[(i, i)] = &acc[(i, i)] + c;
            }
        }
        acc
    }

    /// Exact division by (s - root); `None` when the remainder is nonzero.
    pub fn deflate(&self, root: &Rat) -> Option<Self> {
        if self.degree() == 0 {
            return None;
        }
        let n = self.coeffs.len();
        let mut quot = vec![Rat::zero(); n - 1];
        let mut carry = self.coeffs[n - 1].clone();
        for i in (0..n - 1).rev() {
            quot[i] = carry.clone();
            carry = &self.coeffs[i] + &(&carry * root);
        }
        if carry.is_zero() {
            Some(Polynomial::new(quot))
        } else {
            None
        }
    }
}

fn rat_to_f64(r: &Rat) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Monic degree-n characteristic polynomial det(sI - A) by the
/// Faddeev–LeVerrier recurrence, exact.
pub fn char_poly(a: &RationalMatrix) -> Polynomial {
    assert!(a.is_square());
    let n = a.rows();
    if n == 0 {
        return Polynomial::new(vec![Rat::one()]);
    }
    // p(s) = s^n + c_1 s^{n-1} + ... + c_n
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut m = a.clone();
    let mut c_prev;
    for k in 1..=n {
        if k > 1 {
            m = a.mul(&m);
        }
        c_prev = -(m.trace() / Rat::from_integer(BigInt::from(k)));
        coeffs[n - k] = c_prev.clone();
        if k < n {
            let mut shifted = m.clone();
            for i in 0..n {
                shifted[(i, i)] = &shifted[(i, i)] + &c_prev;
            }
            m = shifted;
        }
    }
    Polynomial::new(coeffs)
}

/// A root of a rational polynomial: exact rational or numeric complex.
#[derive(Clone, Debug, PartialEq)]
pub enum Root {
    Exact(Rat),
    Numeric(Complex64),
}

/// A root with its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct RootWithMultiplicity {
    pub root: Root,
    pub multiplicity: usize,
}

/// Splits off all rational roots with exact multiplicities; returns them
/// plus the residual factor (degree 0 when the spectrum is fully rational).
pub fn split_rational_roots(p: &Polynomial) -> (Vec<(Rat, usize)>, Polynomial) {
    let mut out = Vec::new();
    let mut rem = p.clone();

    // Zero roots first, then rational-root candidates on the primitive
    // integer polynomial. Candidates from the original polynomial cover
    // all rational roots of every factor.
    let mut zero_mult = 0usize;
    while rem.degree() > 0 && rem.coeffs()[0].is_zero() {
        rem = rem.deflate(&Rat::zero()).unwrap();
        zero_mult += 1;
    }
    if zero_mult > 0 {
        out.push((Rat::zero(), zero_mult));
    }

    if rem.degree() > 0 {
        for cand in rational_root_candidates(&rem) {
            if rem.degree() == 0 {
                break;
            }
            let mut mult = 0usize;
            while let Some(q) = rem.deflate(&cand) {
                rem = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((cand, mult));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    (out, rem)
}

/// All roots of `p`, rational ones exact with exact multiplicities, the
/// residual factor's roots numeric (clustered to recover multiplicities).
pub fn roots(p: &Polynomial) -> Vec<RootWithMultiplicity> {
    let (exact, rem) = split_rational_roots(p);
    let mut out: Vec<RootWithMultiplicity> = exact
        .into_iter()
        .map(|(root, multiplicity)| RootWithMultiplicity {
            root: Root::Exact(root),
            multiplicity,
        })
        .collect();

    if rem.degree() > 0 {
        out.extend(numeric_roots(&rem));
    }

    // Deterministic order: exact roots ascending, then numeric by (re, im).
    out.sort_by(|a, b| root_order_key(&a.root).partial_cmp(&root_order_key(&b.root)).unwrap());
    out
}

fn root_order_key(r: &Root) -> (f64, f64, f64) {
    match r {
        Root::Exact(x) => (0.0, rat_to_f64(x), 0.0),
        Root::Numeric(z) => (1.0, z.re, z.im),
    }
}

/// Candidate rational roots p/q with p | a0 and q | a_lead of the primitive
/// integer polynomial, by the rational root theorem.
fn rational_root_candidates(p: &Polynomial) -> Vec<Rat> {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let a0 = ints.first().cloned().unwrap_or_else(BigInt::zero);
    let alead = ints.last().cloned().unwrap_or_else(BigInt::one);
    if a0.is_zero() {
        return Vec::new();
    }
    let mut cands = Vec::new();
    for num in divisors(&a0.abs()) {
        for den in divisors(&alead.abs()) {
            let c = Rat::new(num.clone(), den.clone());
            if !cands.contains(&c) {
                cands.push(c.clone());
            }
            let neg = -c;
            if !cands.contains(&neg) {
                cands.push(neg);
            }
        }
    }
    cands.sort();
    cands
}

/// Positive divisors by trial division. Desk-scale inputs only.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.clone();
    let mut d = BigInt::from(2u32);
    while &(&d * &d) <= &m {
        let mut e = 0u32;
        while (&m % &d).is_zero() {
            m = &m / &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += 1u32;
    }
    if m > BigInt::one() {
        primes.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk = &pk * &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    divs
}

/// Durand–Kerner iteration on the residual factor, with conjugate-aware
/// clustering to recover multiplicities.
pub(crate) fn numeric_roots(p: &Polynomial) -> Vec<RootWithMultiplicity> {
    let deg = p.degree();
    let lead = rat_to_f64(p.leading());
    let monic: Vec<f64> = p.coeffs().iter().map(|c| rat_to_f64(c) / lead).collect();

    let eval = |x: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };

    // Standard non-real starting points on a spiral.
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::new(0.4, 0.9).powu(k as u32 + 1))
        .collect();
    for _ in 0..200 {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 {
            break;
        }
    }

    // Cluster near-equal roots; multiplicity = cluster size.
    let tol = 1e-6;
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for zi in z {
        if let Some(c) = clusters.iter_mut().find(|(c, _)| (*c - zi).norm() < tol) {
            let n = c.1 as f64;
            c.0 = (c.0 * n + zi) / (n + 1.0);
            c.1 += 1;
        } else {
            clusters.push((zi, 1));
        }
    }
    clusters
        .into_iter()
        .map(|(mut c, mult)| {
            if c.im.abs() < 1e-9 {
                c.im = 0.0;
            }
            RootWithMultiplicity {
                root: Root::Numeric(c),
                multiplicity: mult,
            }
        })
        .collect()
}
