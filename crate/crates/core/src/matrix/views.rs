use crate::coeff::Field;
use crate::error::{Result, UmatchError};

use super::{check_index, MatrixOracle, SparseVector};

/// Anti-transpose of an oracle: transpose, then reverse row and column order.
///
/// Entry `(i, j)` of the view is entry `(m-1-j, n-1-i)` of the wrapped
/// `m x n` matrix. Nothing is copied.
#[derive(Clone, Debug)]
pub struct AntiTransposeView<D> {
    inner: D,
}

pub fn antitranspose_view<D: MatrixOracle>(d: D) -> AntiTransposeView<D> {
    AntiTransposeView { inner: d }
}

impl<D> AntiTransposeView<D> {
    pub fn inner(&self) -> &D {
        &self.inner
    }

    pub fn into_inner(self) -> D {
        self.inner
    }
}

fn reverse_indices(v: SparseVector, len: usize) -> SparseVector {
    v.into_entries()
        .into_iter()
        .rev()
        .map(|(i, c)| (len - 1 - i, c))
        .collect()
}

impl<D: MatrixOracle> MatrixOracle for AntiTransposeView<D> {
    fn field(&self) -> Field {
        self.inner.field()
    }

    fn nrows(&self) -> usize {
        self.inner.ncols()
    }

    fn ncols(&self) -> usize {
        self.inner.nrows()
    }

    fn row(&self, i: usize) -> SparseVector {
        let (m, n) = (self.inner.nrows(), self.inner.ncols());
        reverse_indices(self.inner.column(n - 1 - i), m)
    }

    fn column(&self, j: usize) -> SparseVector {
        let (m, n) = (self.inner.nrows(), self.inner.ncols());
        reverse_indices(self.inner.row(m - 1 - j), n)
    }

    fn entry(&self, i: usize, j: usize) -> u32 {
        let (m, n) = (self.inner.nrows(), self.inner.ncols());
        self.inner.entry(m - 1 - j, n - 1 - i)
    }
}

/// Lazy submatrix `D[rows, cols]`: entry `(i, j)` is `D[rows[i], cols[j]]`.
#[derive(Clone, Debug)]
pub struct SubmatrixView<D> {
    inner: D,
    rows: Vec<usize>,
    cols: Vec<usize>,
    row_lookup: Vec<Option<usize>>,
    col_lookup: Vec<Option<usize>>,
}

fn lookup(seq: &[usize], len: usize) -> Result<Vec<Option<usize>>> {
    let mut table = vec![None; len];
    for (pos, &k) in seq.iter().enumerate() {
        check_index(k, len)?;
        if table[k].replace(pos).is_some() {
            return Err(UmatchError::DuplicateIndex(k));
        }
    }
    Ok(table)
}

pub fn submatrix_view<D: MatrixOracle>(
    d: D,
    rows: Vec<usize>,
    cols: Vec<usize>,
) -> Result<SubmatrixView<D>> {
    let row_lookup = lookup(&rows, d.nrows())?;
    let col_lookup = lookup(&cols, d.ncols())?;
    Ok(SubmatrixView {
        inner: d,
        rows,
        cols,
        row_lookup,
        col_lookup,
    })
}

impl<D> SubmatrixView<D> {
    pub fn inner(&self) -> &D {
        &self.inner
    }

    pub fn row_indices(&self) -> &[usize] {
        &self.rows
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.cols
    }
}

impl<D: MatrixOracle> MatrixOracle for SubmatrixView<D> {
    fn field(&self) -> Field {
        self.inner.field()
    }

    fn nrows(&self) -> usize {
        self.rows.len()
    }

    fn ncols(&self) -> usize {
        self.cols.len()
    }

    fn row(&self, i: usize) -> SparseVector {
        self.inner
            .row(self.rows[i])
            .filter_map(|j| self.col_lookup[j])
    }

    fn column(&self, j: usize) -> SparseVector {
        self.inner
            .column(self.cols[j])
            .filter_map(|i| self.row_lookup[i])
    }

    fn entry(&self, i: usize, j: usize) -> u32 {
        self.inner.entry(self.rows[i], self.cols[j])
    }
}
