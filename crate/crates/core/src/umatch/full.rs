use crate::coeff::Field;
use crate::matrix::{axpy, MatrixOracle, SparseVector, StoredCsMatrix};

use super::MatchingArray;

/// Uncompressed proper U-match: `Rinv · D = M · Cinv`.
#[derive(Clone, Debug)]
pub struct FullUmatch<D> {
    d: D,
    matching: MatchingArray,
    rinv: StoredCsMatrix,
    cinv: StoredCsMatrix,
}

impl<D: MatrixOracle> FullUmatch<D> {
    /// Assemble from parts without checking the defining identity.
    pub fn from_parts(
        d: D,
        matching: MatchingArray,
        rinv: StoredCsMatrix,
        cinv: StoredCsMatrix,
    ) -> Self {
        FullUmatch {
            d,
            matching,
            rinv: rinv.with_column_access(),
            cinv: cinv.with_column_access(),
        }
    }

    pub fn d(&self) -> &D {
        &self.d
    }

    pub fn matching(&self) -> &MatchingArray {
        &self.matching
    }

    pub fn rinv(&self) -> &StoredCsMatrix {
        &self.rinv
    }

    pub fn cinv(&self) -> &StoredCsMatrix {
        &self.cinv
    }

    pub fn r(&self) -> StoredCsMatrix {
        invert_upper_unitriangular(&self.rinv)
    }

    pub fn c(&self) -> StoredCsMatrix {
        invert_upper_unitriangular(&self.cinv)
    }
}

/// Row-reduce `D` bottom to top, eliminating each leading entry against the
/// matched pivot row below it.
pub fn decompose_full<D: MatrixOracle>(d: D) -> FullUmatch<D> {
    let field = d.field();
    let (m, n) = (d.nrows(), d.ncols());
    // reduced rows and Rinv rows of pivot rows, keyed by the pivot column
    let mut pivot_of_col: Vec<Option<(SparseVector, SparseVector)>> = vec![None; n];
    let mut rinv_rows = vec![SparseVector::new(); m];
    let mut cinv_rows: Vec<SparseVector> = (0..n).map(SparseVector::unit).collect();
    let mut pairs = Vec::new();

    for i in (0..m).rev() {
        let mut w = d.row(i);
        let mut r = SparseVector::unit(i);
        while let Some((k, wk)) = w.first() {
            match &pivot_of_col[k] {
                Some((red, rrow)) => {
                    let lambda = field.neg(field.div(wk, red.first().unwrap().1));
                    w = axpy(field, lambda, red, &w);
                    r = axpy(field, lambda, rrow, &r);
                }
                None => {
                    pairs.push((i, k, wk));
                    cinv_rows[k] = w.scale(field, field.inv(wk).expect("nonzero"));
                    pivot_of_col[k] = Some((w.clone(), r.clone()));
                    break;
                }
            }
        }
        rinv_rows[i] = r;
    }

    let matching = MatchingArray::from_pairs(m, n, pairs).expect("one pivot per row and column");
    FullUmatch {
        rinv: StoredCsMatrix::from_rows(field, m, rinv_rows)
            .expect("square")
            .with_column_access(),
        cinv: StoredCsMatrix::from_rows(field, n, cinv_rows)
            .expect("square")
            .with_column_access(),
        matching,
        d,
    }
}

/// Inverse of an upper-unitriangular stored matrix, computed row by row from
/// the bottom.
pub fn invert_upper_unitriangular(t: &StoredCsMatrix) -> StoredCsMatrix {
    let field: Field = t.field();
    let n = t.nrows();
    let mut rows = vec![SparseVector::new(); n];
    for i in (0..n).rev() {
        let mut x = SparseVector::unit(i);
        for (j, c) in t.row(i).iter() {
            if j != i {
                x = axpy(field, field.neg(c), &rows[j], &x);
            }
        }
        rows[i] = x;
    }
    StoredCsMatrix::from_rows(field, n, rows)
        .expect("square")
        .with_column_access()
}
