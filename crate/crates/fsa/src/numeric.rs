//! Numeric complex fallback for irrational spectra.
//!
//! Desk-scale only: rank decisions use singular-value thresholding with
//! tol = eps_rel · max(rows, cols) · σ_max, and Jordan chains come from the
//! same kernel-filtration construction as the exact path, run in complex
//! floating point.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::ratlin::{Rat, RationalMatrix};

/// Default relative tolerance for numeric rank decisions.
pub const DEFAULT_EPS_REL: f64 = 1e-9;

pub type CMatrix = DMatrix<Complex64>;

pub(crate) fn rat_to_f64(r: &Rat) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn to_cmatrix(m: &RationalMatrix) -> CMatrix {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        Complex64::new(rat_to_f64(&m[(i, j)]), 0.0)
    })
}

/// Rank by SVD thresholding.
pub fn rank(m: &CMatrix, eps_rel: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    if smax == 0.0 {
        return 0;
    }
    let tol = eps_rel * m.nrows().max(m.ncols()) as f64 * smax;
    sv.iter().filter(|&&s| s > tol).count()
}

/// Orthonormal kernel basis (columns) by SVD.
pub fn nullspace(m: &CMatrix, eps_rel: f64) -> CMatrix {
    let cols = m.ncols();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return DMatrix::identity(cols, cols);
    }
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("SVD with V requested");
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    let tol = eps_rel * m.nrows().max(cols) as f64 * smax;
    let r = sv.iter().filter(|&&s| s > tol).count();
    // v_t is V^H (ncols(v_t) = cols); null directions are the rows past r,
    // plus any columns V^H does not cover when rows < cols.
    let mut basis = DMatrix::zeros(cols, 0);
    for i in r..v_t.nrows() {
        let row = v_t.row(i);
        let col = DMatrix::from_fn(cols, 1, |k, _| row[k].conj());
        basis = hstack(&basis, &col);
    }
    if v_t.nrows() < cols {
        // Thin SVD: complete with an orthonormal basis of the orthogonal
        // complement of V's columns via Gram-Schmidt over standard vectors.
        let mut current = DMatrix::zeros(cols, 0);
        for i in 0..v_t.nrows() {
            let row = v_t.row(i);
            let col = DMatrix::from_fn(cols, 1, |k, _| row[k].conj());
            current = hstack(&current, &col);
        }
        current = hstack(&current, &basis);
        for k in 0..cols {
            if current.ncols() == cols {
                break;
            }
            let mut e: DMatrix<Complex64> = DMatrix::zeros(cols, 1);
            e[(k, 0)] = Complex64::new(1.0, 0.0);
            for j in 0..current.ncols() {
                let proj: Complex64 = (0..cols).map(|i| current[(i, j)].conj() * e[(i, 0)]).sum();
                for i in 0..cols {
                    e[(i, 0)] -= proj * current[(i, j)];
                }
            }
            let norm: f64 = e.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-9 {
                for i in 0..cols {
                    e[(i, 0)] /= Complex64::new(norm, 0.0);
                }
                current = hstack(&current, &e);
                basis = hstack(&basis, &e);
            }
        }
    }
    basis
}

pub fn hstack(a: &CMatrix, b: &CMatrix) -> CMatrix {
    if a.ncols() == 0 && a.nrows() == 0 {
        return b.clone();
    }
    if b.ncols() == 0 && b.nrows() == 0 {
        return a.clone();
    }
    assert_eq!(a.nrows(), b.nrows());
    DMatrix::from_fn(a.nrows(), a.ncols() + b.ncols(), |i, j| {
        if j < a.ncols() {
            a[(i, j)]
        } else {
            b[(i, j - a.ncols())]
        }
    })
}

pub fn vstack(a: &CMatrix, b: &CMatrix) -> CMatrix {
    if a.nrows() == 0 && a.ncols() == 0 {
        return b.clone();
    }
    if b.nrows() == 0 && b.ncols() == 0 {
        return a.clone();
    }
    assert_eq!(a.ncols(), b.ncols());
    DMatrix::from_fn(a.nrows() + b.nrows(), a.ncols(), |i, j| {
        if i < a.nrows() {
            a[(i, j)]
        } else {
            b[(i - a.nrows(), j)]
        }
    })
}

/// λI - M in complex arithmetic.
pub fn shifted(m: &CMatrix, lambda: Complex64) -> CMatrix {
    let n = m.nrows();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            lambda - m[(i, j)]
        } else {
            -m[(i, j)]
        }
    })
}

/// Numeric Jordan chains for (m, λ): kernel-filtration construction with
/// tolerance ranks. Returns one n×q matrix of chain vectors per chain.
pub fn jordan_chains(
    m: &CMatrix,
    lambda: Complex64,
    alg_mult: usize,
    eps_rel: f64,
) -> Vec<CMatrix> {
    let n = m.nrows();
    let shift = shifted(m, lambda);

    let mut kernels: Vec<CMatrix> = vec![DMatrix::zeros(n, 0)];
    let mut power: CMatrix = DMatrix::identity(n, n);
    loop {
        power = &power * &shift;
        let k = nullspace(&power, eps_rel);
        if k.ncols() == kernels.last().unwrap().ncols() || kernels.len() > n {
            break;
        }
        let stop = k.ncols() >= alg_mult;
        kernels.push(k);
        if stop {
            break;
        }
    }
    let s = kernels.len() - 1;
    if s == 0 {
        return Vec::new();
    }
    let dims: Vec<usize> = kernels.iter().map(|k| k.ncols()).collect();
    let chains_ge = |k: usize| if k > s { 0 } else { dims[k] - dims[k - 1] };

    let mut tops: Vec<(CMatrix, usize)> = Vec::new();
    for k in (1..=s).rev() {
        let wanted = chains_ge(k).saturating_sub(chains_ge(k + 1));
        if wanted == 0 {
            continue;
        }
        let mut occupied = kernels[k - 1].clone();
        for (top, len) in &tops {
            let mut v = top.clone();
            for _ in 0..(len - k) {
                v = &shift * &v;
            }
            occupied = hstack(&occupied, &v);
        }
        let mut occupied_rank = rank(&occupied, eps_rel);
        let candidates = &kernels[k];
        let mut picked = 0usize;
        for c in 0..candidates.ncols() {
            if picked == wanted {
                break;
            }
            let cand = candidates.column(c).into_owned();
            let cand = DMatrix::from_fn(n, 1, |i, _| cand[i]);
            let trial = hstack(&occupied, &cand);
            if rank(&trial, eps_rel) > occupied_rank {
                occupied = trial;
                occupied_rank += 1;
                tops.push((cand, k));
                picked += 1;
            }
        }
    }

    tops.into_iter()
        .map(|(top, len)| {
            let mut vectors = DMatrix::zeros(n, 0);
            for i in 1..=len {
                let mut v = top.clone();
                for _ in 0..(len - i) {
                    v = &shift * &v;
                }
                vectors = hstack(&vectors, &v);
            }
            vectors
        })
        .collect()
}

/// First index j (1-based) with ‖probe·v_j‖ above tolerance; q+1 when the
/// probe annihilates the chain. Also returns the witness image for j ≤ q.
pub fn first_visible_index(
    chain: &CMatrix,
    probe: &CMatrix,
    eps_rel: f64,
) -> (usize, Option<CMatrix>) {
    let probe_norm = probe.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for i in 0..chain.ncols() {
        let v = chain.column(i).into_owned();
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let image = probe * &v;
        let inorm = image.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if inorm > eps_rel.sqrt() * probe_norm.max(1.0) * vn.max(1.0) {
            let img = DMatrix::from_fn(probe.nrows(), 1, |r, _| image[r]);
            return (i + 1, Some(img));
        }
    }
    (chain.ncols() + 1, None)
}
