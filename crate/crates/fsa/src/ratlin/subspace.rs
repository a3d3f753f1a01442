//! Column-space subspaces in a canonical reduced-column-echelon form.
//!
//! The canonical form makes subspace equality a plain `==` on the basis
//! matrices: leading-one pivots, pivot rows chosen top-down, reduced across
//! columns. It is obtained as the RREF of the transpose, transposed back.

use super::matrix::RationalMatrix;
use crate::RatlinError;

/// A subspace of Q^n represented by a canonical full-column-rank basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RationalMatrix,
}

impl Subspace {
    /// The zero subspace of Q^n.
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: RationalMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: RationalMatrix::identity(ambient_dim),
        }
    }

    /// Span of the columns of `m`, canonicalized.
    pub fn from_columns(m: &RationalMatrix) -> Self {
        let (rref_t, pivots) = m.transpose().rref();
        let basis = RationalMatrix::from_fn(m.rows(), pivots.len(), |i, j| {
            rref_t[(j, i)].clone()
        });
        Subspace {
            ambient_dim: m.rows(),
            basis,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), RatlinError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(RatlinError::ShapeMismatch {
                what: format!(
                    "ambient dimensions differ: {} vs {}",
                    self.ambient_dim, other.ambient_dim
                ),
            });
        }
        Ok(())
    }

    /// True iff `inner` is contained in `self`, via the rank identity
    /// rank([outer | inner]) = rank(outer).
    pub fn contains(&self, inner: &Subspace) -> Result<bool, RatlinError> {
        self.check_ambient(inner)?;
        let stacked = self.basis.hstack(&inner.basis);
        Ok(stacked.rank() == self.basis.rank())
    }

    /// True iff the single column vector `v` lies in the subspace.
    pub fn contains_vector(&self, v: &RationalMatrix) -> Result<bool, RatlinError> {
        if v.rows() != self.ambient_dim || v.cols() != 1 {
            return Err(RatlinError::ShapeMismatch {
                what: "contains_vector expects an ambient-dim column".into(),
            });
        }
        Ok(self.basis.hstack(v).rank() == self.dim())
    }

    /// Intersection via the nullspace of the stacked bases `[B1 | -B2]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, RatlinError> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        let stacked = self.basis.hstack(&other.basis.scale(&super::matrix::rat(-1)));
        let null = stacked.nullspace_basis();
        // The first block of coefficients expresses the intersection in B1.
        let coeffs = null.row_slice(0, self.dim());
        Ok(Subspace::from_columns(&self.basis.mul(&coeffs)))
    }

    /// Sum of subspaces.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace, RatlinError> {
        self.check_ambient(other)?;
        Ok(Subspace::from_columns(&self.basis.hstack(&other.basis)))
    }
}

/// Canonical basis of the kernel of `m`.
pub fn nullspace(m: &RationalMatrix) -> Subspace {
    Subspace::from_columns(&m.nullspace_basis())
}

/// Canonical basis of the image of `m`.
pub fn column_space(m: &RationalMatrix) -> Subspace {
    Subspace::from_columns(m)
}

/// Image of `[V, MV, ..., M^{n-1}V]`: the smallest M-invariant subspace
/// containing Im(V).
pub fn krylov_closure(m: &RationalMatrix, v: &RationalMatrix) -> Result<Subspace, RatlinError> {
    let k = RationalMatrix::controllability_matrix(m, v)?;
    Ok(column_space(&k))
}
