use crate::coeff::Field;
use crate::error::Result;

use super::{check_index, MatrixOracle, SparseVector};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Compressed {
    ptr: Vec<usize>,
    idx: Vec<usize>,
    val: Vec<u32>,
}

impl Compressed {
    fn from_lanes(lanes: impl IntoIterator<Item = SparseVector>) -> Self {
        let mut ptr = vec![0];
        let (mut idx, mut val) = (Vec::new(), Vec::new());
        for lane in lanes {
            for (i, c) in lane.iter() {
                idx.push(i);
                val.push(c);
            }
            ptr.push(idx.len());
        }
        Compressed { ptr, idx, val }
    }

    fn lane(&self, k: usize) -> SparseVector {
        let (a, b) = (self.ptr[k], self.ptr[k + 1]);
        self.idx[a..b]
            .iter()
            .copied()
            .zip(self.val[a..b].iter().copied())
            .collect()
    }

    fn lane_len(&self, k: usize) -> usize {
        self.ptr[k + 1] - self.ptr[k]
    }

    /// Lanes of the transposed layout.
    fn transpose(&self, other_len: usize) -> Compressed {
        let mut counts = vec![0usize; other_len + 1];
        for &i in &self.idx {
            counts[i + 1] += 1;
        }
        for k in 0..other_len {
            counts[k + 1] += counts[k];
        }
        let ptr = counts.clone();
        let mut next = counts;
        let mut idx = vec![0; self.idx.len()];
        let mut val = vec![0; self.idx.len()];
        for lane in 0..self.ptr.len() - 1 {
            for p in self.ptr[lane]..self.ptr[lane + 1] {
                let slot = &mut next[self.idx[p]];
                idx[*slot] = lane;
                val[*slot] = self.val[p];
                *slot += 1;
            }
        }
        Compressed { ptr, idx, val }
    }
}

/// Row-major compressed sparse matrix, with an optional column-major twin
/// for fast column access.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoredCsMatrix {
    field: Field,
    nrows: usize,
    ncols: usize,
    rows: Compressed,
    cols: Option<Compressed>,
}

impl StoredCsMatrix {
    /// Build from rows; each row must already satisfy the sparse-vector
    /// invariants and stay within `ncols`.
    pub fn from_rows(field: Field, ncols: usize, rows: Vec<SparseVector>) -> Result<Self> {
        for r in &rows {
            r.check_len(ncols)?;
        }
        Ok(StoredCsMatrix {
            field,
            nrows: rows.len(),
            ncols,
            rows: Compressed::from_lanes(rows),
            cols: None,
        })
    }

    pub fn from_columns(field: Field, nrows: usize, cols: Vec<SparseVector>) -> Result<Self> {
        for c in &cols {
            c.check_len(nrows)?;
        }
        let ncols = cols.len();
        let col_major = Compressed::from_lanes(cols);
        Ok(StoredCsMatrix {
            field,
            nrows,
            ncols,
            rows: col_major.transpose(nrows),
            cols: Some(col_major),
        })
    }

    /// Build from `(row, col, value)` triplets (0-based). Duplicates are summed.
    pub fn from_triplets(
        field: Field,
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, i64)],
    ) -> Result<Self> {
        let mut per_row: Vec<Vec<(usize, u32)>> = vec![Vec::new(); nrows];
        for &(i, j, v) in triplets {
            check_index(i, nrows)?;
            check_index(j, ncols)?;
            per_row[i].push((j, field.from_i64(v)));
        }
        let rows = per_row
            .into_iter()
            .map(|r| SparseVector::from_entries(field, r))
            .collect();
        Self::from_rows(field, ncols, rows)
    }

    pub fn from_dense(field: Field, dense: &[Vec<u32>]) -> Self {
        let ncols = dense.first().map_or(0, |r| r.len());
        let rows = dense
            .iter()
            .map(|r| {
                SparseVector::from_dense(
                    &r.iter().map(|&c| c % field.modulus()).collect::<Vec<_>>(),
                )
            })
            .collect();
        Self::from_rows(field, ncols, rows).expect("dense rows have uniform length")
    }

    pub fn from_dense_i64(field: Field, dense: &[Vec<i64>]) -> Self {
        let d: Vec<Vec<u32>> = dense
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_dense(field, &d)
    }

    /// Materialize any oracle row by row.
    pub fn from_oracle<D: MatrixOracle + ?Sized>(d: &D) -> Self {
        let rows = (0..d.nrows()).map(|i| d.row(i)).collect();
        Self::from_rows(d.field(), d.ncols(), rows).expect("oracle rows in range")
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Self::from_rows(field, n, (0..n).map(SparseVector::unit).collect())
            .expect("identity")
            .with_column_access()
    }

    pub fn zeros(field: Field, nrows: usize, ncols: usize) -> Self {
        Self::from_rows(field, ncols, vec![SparseVector::new(); nrows]).expect("zeros")
    }

    /// Add the column-major twin so `column` is a slice lookup.
    pub fn with_column_access(mut self) -> Self {
        if self.cols.is_none() {
            self.cols = Some(self.rows.transpose(self.ncols));
        }
        self
    }

    pub fn has_column_access(&self) -> bool {
        self.cols.is_some()
    }

    pub fn nnz(&self) -> usize {
        self.rows.idx.len()
    }

    /// Number of off-diagonal nonzeros, i.e. `nnz(A - I)` for a unitriangular `A`.
    pub fn nnz_off_diagonal(&self) -> usize {
        (0..self.nrows)
            .map(|i| self.row(i).iter().filter(|&(j, _)| j != i).count())
            .sum()
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        self.rows.lane_len(i)
    }

    pub fn transpose(&self) -> StoredCsMatrix {
        StoredCsMatrix {
            field: self.field,
            nrows: self.ncols,
            ncols: self.nrows,
            rows: self.rows.transpose(self.ncols),
            cols: Some(self.rows.clone()),
        }
    }

    /// Approximate bytes retained by the compressed arrays.
    pub fn heap_bytes(&self) -> usize {
        let lanes = |c: &Compressed| {
            c.ptr.len() * std::mem::size_of::<usize>()
                + c.idx.len() * std::mem::size_of::<usize>()
                + c.val.len() * std::mem::size_of::<u32>()
        };
        lanes(&self.rows) + self.cols.as_ref().map_or(0, lanes)
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        self.nrows == self.ncols && (0..self.nrows).all(|i| self.row(i).first() == Some((i, 1)))
    }
}

impl MatrixOracle for StoredCsMatrix {
    fn field(&self) -> Field {
        self.field
    }

    fn nrows(&self) -> usize {
        self.nrows
    }

    fn ncols(&self) -> usize {
        self.ncols
    }

    fn row(&self, i: usize) -> SparseVector {
        self.rows.lane(i)
    }

    fn column(&self, j: usize) -> SparseVector {
        match &self.cols {
            Some(c) => c.lane(j),
            None => (0..self.nrows)
                .filter_map(|i| {
                    let v = self.row(i).get(j);
                    (v != 0).then_some((i, v))
                })
                .collect(),
        }
    }

    fn leading_entry(&self, i: usize) -> Option<(usize, u32)> {
        let p = self.rows.ptr[i];
        (p < self.rows.ptr[i + 1]).then(|| (self.rows.idx[p], self.rows.val[p]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_matrix(nrows: usize, ncols: usize, vals: &[u32]) -> StoredCsMatrix {
        let f = Field::new(7).unwrap();
        let dense: Vec<Vec<u32>> = (0..nrows)
            .map(|i| {
                (0..ncols)
                    .map(|j| vals[(i * ncols + j) % vals.len()])
                    .collect()
            })
            .collect();
        StoredCsMatrix::from_dense(f, &dense)
    }

    proptest! {
        #[test]
        fn row_column_consistency(
            nrows in 1usize..7,
            ncols in 1usize..7,
            vals in proptest::collection::vec(prop_oneof![Just(0u32), 1u32..7], 1..49),
            twin in any::<bool>(),
        ) {
            let mut m = random_matrix(nrows, ncols, &vals);
            if twin {
                m = m.with_column_access();
            }
            for i in 0..nrows {
                for j in 0..ncols {
                    prop_assert_eq!(m.row(i).get(j), m.column(j).get(i));
                }
            }
            for j in 0..ncols {
                let c = m.column(j);
                prop_assert!(c.entries().windows(2).all(|w| w[0].0 < w[1].0));
                prop_assert!(c.iter().all(|(_, v)| v != 0));
            }
            prop_assert_eq!(m.transpose().transpose().rows, m.rows.clone());
        }
    }

    #[test]
    fn triplets_sum_duplicates() {
        let f = Field::new(7).unwrap();
        let m =
            StoredCsMatrix::from_triplets(f, 2, 3, &[(0, 1, 3), (0, 1, 4), (1, 2, -1)]).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.entry(1, 2), 6);
        assert!(StoredCsMatrix::from_triplets(f, 2, 3, &[(2, 0, 1)]).is_err());
    }
}
