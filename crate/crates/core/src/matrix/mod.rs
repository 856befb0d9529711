//! Sparse vectors, stored compressed matrices, and the lazy [`MatrixOracle`]
//! abstraction shared by every matrix in the crate.

mod sparse;
mod stored;
pub mod triplet;
mod views;

use std::sync::Arc;

pub use sparse::{add, axpy, dot, linear_combination, sub, SparseVector};
pub use stored::StoredCsMatrix;
pub use views::{antitranspose_view, submatrix_view, AntiTransposeView, SubmatrixView};

use crate::coeff::Field;
use crate::error::{Result, UmatchError};

/// Read-only matrix with rows and columns produced on demand, entries in
/// ascending index order.
///
/// Implementors must keep `row(i)[j] == column(j)[i]` for every `(i, j)`.
pub trait MatrixOracle {
    fn field(&self) -> Field;
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn row(&self, i: usize) -> SparseVector;
    fn column(&self, j: usize) -> SparseVector;

    /// Leading (minimum column index) entry of row `i`. Implementations that
    /// can find it without building the whole row should override this.
    fn leading_entry(&self, i: usize) -> Option<(usize, u32)> {
        self.row(i).first()
    }

    fn entry(&self, i: usize, j: usize) -> u32 {
        self.row(i).get(j)
    }
}

macro_rules! forward_oracle {
    ($($ty:ty),*) => {$(
        impl<T: MatrixOracle + ?Sized> MatrixOracle for $ty {
            fn field(&self) -> Field { (**self).field() }
            fn nrows(&self) -> usize { (**self).nrows() }
            fn ncols(&self) -> usize { (**self).ncols() }
            fn row(&self, i: usize) -> SparseVector { (**self).row(i) }
            fn column(&self, j: usize) -> SparseVector { (**self).column(j) }
            fn leading_entry(&self, i: usize) -> Option<(usize, u32)> { (**self).leading_entry(i) }
            fn entry(&self, i: usize, j: usize) -> u32 { (**self).entry(i, j) }
        }
    )*};
}

forward_oracle!(&T, Box<T>, Arc<T>);

/// `D · v` for a column vector `v`.
pub fn matvec<D: MatrixOracle + ?Sized>(d: &D, v: &SparseVector) -> Result<SparseVector> {
    v.check_len(d.ncols())?;
    let field = d.field();
    let cols: Vec<(u32, SparseVector)> = v.iter().map(|(j, c)| (c, d.column(j))).collect();
    Ok(linear_combination(
        field,
        cols.iter().map(|(c, col)| (*c, col)),
    ))
}

/// `v · D` for a row vector `v`.
pub fn vecmat<D: MatrixOracle + ?Sized>(v: &SparseVector, d: &D) -> Result<SparseVector> {
    v.check_len(d.nrows())?;
    let field = d.field();
    let rows: Vec<(u32, SparseVector)> = v.iter().map(|(i, c)| (c, d.row(i))).collect();
    Ok(linear_combination(
        field,
        rows.iter().map(|(c, row)| (*c, row)),
    ))
}

/// Dense row-major copy; small matrices only.
pub fn to_dense<D: MatrixOracle + ?Sized>(d: &D) -> Vec<Vec<u32>> {
    (0..d.nrows())
        .map(|i| d.row(i).to_dense(d.ncols()))
        .collect()
}

/// Total number of stored nonzeros, counted row by row.
pub fn count_nnz<D: MatrixOracle + ?Sized>(d: &D) -> usize {
    (0..d.nrows()).map(|i| d.row(i).nnz()).sum()
}

pub(crate) fn check_index(index: usize, len: usize) -> Result<()> {
    if index >= len {
        Err(UmatchError::IndexOutOfRange { index, len })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matvec_identity_and_example() {
        let f7 = Field::new(7).unwrap();
        let id = StoredCsMatrix::identity(f7, 4);
        let v = SparseVector::from_dense(&[0, 3, 0, 5]);
        assert_eq!(matvec(&id, &v).unwrap(), v);
        assert_eq!(vecmat(&v, &id).unwrap(), v);

        // [[3,-6],[3,-6]] · (1,0) = (3,3)
        let d = StoredCsMatrix::from_dense_i64(f7, &[vec![3, -6], vec![3, -6]]);
        let x = SparseVector::unit(0);
        assert_eq!(matvec(&d, &x).unwrap().to_dense(2), vec![3, 3]);
    }

    #[test]
    fn matvec_dimension_mismatch() {
        let id = StoredCsMatrix::identity(Field::GF2, 2);
        let v = SparseVector::unit(5);
        assert!(matches!(
            matvec(&id, &v),
            Err(UmatchError::DimensionMismatch { .. })
        ));
    }
}
