//! Jordan-chain bases for exact rational eigenvalues.
//!
//! Chains are built from the kernel filtration K₁ ⊂ K₂ ⊂ … of N = λI − M:
//! chain tops at length k are chosen as a basis of K_k modulo
//! K_{k−1} + (level-k vectors of longer chains), earliest canonical basis
//! column first, then propagated down by applying N.

use super::{shifted_matrix, Eigenvalue};
use crate::ratlin::{nullspace, RationalMatrix, Subspace};
use crate::SpectraError;

/// Which operator the chain belongs to; deciders use chains of Aᵀ on the
/// controllability side and chains of A on the observability side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorTag {
    OfA,
    OfATranspose,
}

/// Ordered generalized-eigenvector sequence v₁..v_q with
/// (λI−M)v₁ = 0 and (λI−M)v_{i+1} = v_i.
#[derive(Clone, Debug)]
pub struct JordanChain {
    pub eigenvalue: Eigenvalue,
    /// n×q matrix; column i-1 is v_i.
    pub vectors: RationalMatrix,
    pub operator_tag: OperatorTag,
}

impl JordanChain {
    pub fn len(&self) -> usize {
        self.vectors.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// v_i, 1-based.
    pub fn vector(&self, i: usize) -> RationalMatrix {
        self.vectors.column(i - 1)
    }

    /// Columns v_1..v_k as a matrix (empty when k = 0).
    pub fn prefix(&self, k: usize) -> RationalMatrix {
        self.vectors.columns(0, k)
    }
}

/// A complete Jordan basis for the generalized eigenspace of (M, λ).
///
/// Chain lengths match the kernel filtration (number of chains of length
/// ≥ k equals dim ker N^k − dim ker N^{k−1}); the total vector count is
/// the algebraic multiplicity.
pub fn jordan_chains(
    m: &RationalMatrix,
    lambda: &Eigenvalue,
    tag: OperatorTag,
) -> Result<Vec<JordanChain>, SpectraError> {
    let val = lambda
        .exact_value()
        .ok_or(SpectraError::NumericEigenvalueUnsupportedExact)?;
    let n = m.rows();
    let shifted = shifted_matrix(m, val);

    // Kernel filtration until the dimension stabilizes.
    let mut kernels: Vec<Subspace> = vec![Subspace::zero(n)];
    let mut power = RationalMatrix::identity(n);
    loop {
        power = power.mul(&shifted);
        let k = nullspace(&power);
        if k.dim() == kernels.last().unwrap().dim() {
            break;
        }
        kernels.push(k);
        if kernels.len() > n + 1 {
            break;
        }
    }
    let s = kernels.len() - 1;
    if s == 0 {
        return Err(SpectraError::NotAnEigenvalue);
    }
    let dims: Vec<usize> = kernels.iter().map(|k| k.dim()).collect();
    let chains_ge = |k: usize| -> usize {
        if k > s {
            0
        } else {
            dims[k] - dims[k - 1]
        }
    };

    // Select chain tops level by level, longest chains first.
    let mut tops: Vec<(RationalMatrix, usize)> = Vec::new(); // (top vector, length)
    for k in (1..=s).rev() {
        let wanted = chains_ge(k) - chains_ge(k + 1);
        if wanted == 0 {
            continue;
        }
        // Occupied directions at level k: K_{k-1} plus the level-k vectors
        // of already-selected longer chains.
        let mut occupied = kernels[k - 1].basis().clone();
        for (top, len) in &tops {
            debug_assert!(*len > k);
            occupied = occupied.hstack(&shifted.pow(len - k).mul(top));
        }
        let mut occupied_rank = occupied.rank();
        let candidates = kernels[k].basis();
        let mut picked = 0usize;
        for c in 0..candidates.cols() {
            if picked == wanted {
                break;
            }
            let cand = candidates.column(c);
            let trial = occupied.hstack(&cand);
            if trial.rank() > occupied_rank {
                occupied = trial;
                occupied_rank += 1;
                tops.push((cand, k));
                picked += 1;
            }
        }
        debug_assert_eq!(picked, wanted, "filtration guarantees enough tops");
    }

    // Propagate each top down: v_i = N^{len-i} · top.
    let mut chains: Vec<JordanChain> = tops
        .into_iter()
        .map(|(top, len)| {
            let mut vectors = RationalMatrix::zeros(n, 0);
            for i in 1..=len {
                vectors = vectors.hstack(&shifted.pow(len - i).mul(&top));
            }
            JordanChain {
                eigenvalue: lambda.clone(),
                vectors,
                operator_tag: tag,
            }
        })
        .collect();
    chains.sort_by(|a, b| b.len().cmp(&a.len()));
    Ok(chains)
}

/// The first index at which a chain becomes visible to `m`.
#[derive(Clone, Debug)]
pub struct VisibilityIndex {
    /// j = min({i : M·v_i ≠ 0} ∪ {q+1}), 1-based.
    pub j: usize,
    /// M·v_j when j ≤ q.
    pub witness: Option<RationalMatrix>,
}

/// j = min({i : M·v_i ≠ 0} ∪ {q+1}); j = q+1 means the whole chain is
/// annihilated by `m`.
pub fn first_visible_index(chain: &JordanChain, m: &RationalMatrix) -> VisibilityIndex {
    for i in 1..=chain.len() {
        let image = m.mul(&chain.vector(i));
        if !image.is_zero() {
            return VisibilityIndex {
                j: i,
                witness: Some(image),
            };
        }
    }
    VisibilityIndex {
        j: chain.len() + 1,
        witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::rat;
    use crate::spectra::eigenvalues;

    fn check_chain_relations(m: &RationalMatrix, chain: &JordanChain) {
        let val = chain.eigenvalue.exact_value().unwrap();
        let shifted = shifted_matrix(m, val);
        assert!(shifted.mul(&chain.vector(1)).is_zero());
        for i in 1..chain.len() {
            assert_eq!(shifted.mul(&chain.vector(i + 1)), chain.vector(i));
        }
        assert_eq!(chain.vectors.rank(), chain.len());
    }

    #[test]
    fn single_jordan_block() {
        // J_3(2): one chain e1, e2, e3.
        let m = RationalMatrix::from_i64(&[&[2, 1, 0], &[0, 2, 1], &[0, 0, 2]]);
        let lam = Eigenvalue::exact(rat(2), 3);
        let chains = jordan_chains(&m, &lam, OperatorTag::OfA).unwrap();
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].len(), 3);
        check_chain_relations(&m, &chains[0]);
    }

    #[test]
    fn example1_chain_filtration() {
        let a = RationalMatrix::from_i64(&[
            &[4, 0, -2, 7],
            &[1, 2, 0, 2],
            &[-1, 0, 4, -5],
            &[-1, 1, 1, -1],
        ]);
        let at = a.transpose();
        let lam = Eigenvalue::exact(rat(2), 3);
        let chains = jordan_chains(&at, &lam, OperatorTag::OfATranspose).unwrap();
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].len(), 3);
        check_chain_relations(&at, &chains[0]);

        // The produced chain spans the same filtration as the published
        // v1=(1,-1,1,0), v2=(0,-1,-1,1), v3=(0,1,0,1).
        let published = RationalMatrix::from_i64(&[&[1, 0, 0], &[-1, -1, 1], &[1, -1, 0], &[0, 1, 1]]);
        for k in 1..=3 {
            let ours = Subspace::from_columns(&chains[0].prefix(k));
            let theirs = Subspace::from_columns(&published.columns(0, k));
            assert_eq!(ours, theirs, "filtration level {k}");
        }
    }

    #[test]
    fn mixed_chain_lengths() {
        // diag(J_2(1), J_1(1)): lengths {2, 1}.
        let m = RationalMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        let lam = Eigenvalue::exact(rat(1), 3);
        let chains = jordan_chains(&m, &lam, OperatorTag::OfA).unwrap();
        let mut lens: Vec<usize> = chains.iter().map(|c| c.len()).collect();
        lens.sort();
        assert_eq!(lens, vec![1, 2]);
        for c in &chains {
            check_chain_relations(&m, c);
        }
        // All chain vectors together are independent.
        let all = chains
            .iter()
            .fold(RationalMatrix::zeros(3, 0), |acc, c| acc.hstack(&c.vectors));
        assert_eq!(all.rank(), 3);
    }

    #[test]
    fn visibility_index_cases() {
        let m = RationalMatrix::from_i64(&[&[2, 1, 0], &[0, 2, 1], &[0, 0, 2]]);
        let lam = Eigenvalue::exact(rat(2), 3);
        let chain = &jordan_chains(&m, &lam, OperatorTag::OfA).unwrap()[0];

        // Row (0,0,1) annihilates e1, e2 but sees e3: j = 3.
        let probe = RationalMatrix::row_from_i64(&[0, 0, 1]);
        let vis = first_visible_index(chain, &probe);
        assert_eq!(vis.j, 3);
        assert!(vis.witness.is_some());

        // Zero probe annihilates the whole chain: j = q+1.
        let zero = RationalMatrix::zeros(1, 3);
        assert_eq!(first_visible_index(chain, &zero).j, 4);
    }

    #[test]
    fn chains_cover_generalized_eigenspace() {
        let a = RationalMatrix::from_i64(&[&[3, 1, 0, 0], &[0, 3, 0, 0], &[0, 0, 3, 0], &[0, 0, 0, 5]]);
        for ev in eigenvalues(&a) {
            let chains = jordan_chains(&a, &ev, OperatorTag::OfA).unwrap();
            let total: usize = chains.iter().map(|c| c.len()).sum();
            assert_eq!(total, ev.alg_mult);
        }
    }

    use crate::ratlin::Subspace;
}
