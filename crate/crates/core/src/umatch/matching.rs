use serde::Serialize;

use crate::coeff::Field;
use crate::error::{Result, UmatchError};
use crate::matrix::{check_index, StoredCsMatrix};

/// Generalized matching matrix: at most one nonzero per row and per column.
///
/// Besides the pairs it caches the sorted index sequences `rho` (matched rows),
/// `kappa` (matched columns), their complements, and `kappa_star` (matched rows
/// listed in the order of their matched columns).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingArray {
    nrows: usize,
    ncols: usize,
    #[serde(skip)]
    col_of_row: Vec<Option<usize>>,
    #[serde(skip)]
    row_of_col: Vec<Option<usize>>,
    #[serde(skip)]
    coeff_of_row: Vec<u32>,
    rho: Vec<usize>,
    kappa: Vec<usize>,
    #[serde(skip)]
    rho_bar: Vec<usize>,
    #[serde(skip)]
    kappa_bar: Vec<usize>,
    #[serde(skip)]
    kappa_star: Vec<usize>,
    #[serde(skip)]
    rho_pos: Vec<Option<usize>>,
    #[serde(skip)]
    kappa_pos: Vec<Option<usize>>,
}

impl MatchingArray {
    pub fn empty(nrows: usize, ncols: usize) -> Self {
        Self::from_pairs(nrows, ncols, Vec::new()).expect("empty matching")
    }

    /// Build from `(row, col, coeff)` triples. Rejects repeated rows or columns
    /// and zero coefficients.
    pub fn from_pairs(nrows: usize, ncols: usize, pairs: Vec<(usize, usize, u32)>) -> Result<Self> {
        let mut col_of_row = vec![None; nrows];
        let mut row_of_col = vec![None; ncols];
        let mut coeff_of_row = vec![0; nrows];
        for (r, c, v) in pairs {
            check_index(r, nrows)?;
            check_index(c, ncols)?;
            if v == 0 {
                return Err(UmatchError::Usage(format!(
                    "zero coefficient at ({r}, {c})"
                )));
            }
            if col_of_row[r].replace(c).is_some() {
                return Err(UmatchError::DuplicateIndex(r));
            }
            if row_of_col[c].replace(r).is_some() {
                return Err(UmatchError::DuplicateIndex(c));
            }
            coeff_of_row[r] = v;
        }
        let rho: Vec<usize> = (0..nrows).filter(|&r| col_of_row[r].is_some()).collect();
        let kappa: Vec<usize> = (0..ncols).filter(|&c| row_of_col[c].is_some()).collect();
        let rho_bar = (0..nrows).filter(|&r| col_of_row[r].is_none()).collect();
        let kappa_bar = (0..ncols).filter(|&c| row_of_col[c].is_none()).collect();
        let kappa_star = kappa.iter().map(|&c| row_of_col[c].unwrap()).collect();
        let mut rho_pos = vec![None; nrows];
        for (a, &r) in rho.iter().enumerate() {
            rho_pos[r] = Some(a);
        }
        let mut kappa_pos = vec![None; ncols];
        for (t, &c) in kappa.iter().enumerate() {
            kappa_pos[c] = Some(t);
        }
        Ok(MatchingArray {
            nrows,
            ncols,
            col_of_row,
            row_of_col,
            coeff_of_row,
            rho,
            kappa,
            rho_bar,
            kappa_bar,
            kappa_star,
            rho_pos,
            kappa_pos,
        })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Number of matched pairs.
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn col_of_row(&self, r: usize) -> Option<usize> {
        self.col_of_row[r]
    }

    pub fn row_of_col(&self, c: usize) -> Option<usize> {
        self.row_of_col[c]
    }

    /// `M[r, col(r)]`, or 0 for an unmatched row.
    pub fn coeff_of_row(&self, r: usize) -> u32 {
        self.coeff_of_row[r]
    }

    pub fn coeff_of_col(&self, c: usize) -> u32 {
        self.row_of_col[c].map_or(0, |r| self.coeff_of_row[r])
    }

    pub fn entry(&self, r: usize, c: usize) -> u32 {
        if self.col_of_row[r] == Some(c) {
            self.coeff_of_row[r]
        } else {
            0
        }
    }

    pub fn rho(&self) -> &[usize] {
        &self.rho
    }

    pub fn kappa(&self) -> &[usize] {
        &self.kappa
    }

    pub fn rho_bar(&self) -> &[usize] {
        &self.rho_bar
    }

    pub fn kappa_bar(&self) -> &[usize] {
        &self.kappa_bar
    }

    pub fn kappa_star(&self) -> &[usize] {
        &self.kappa_star
    }

    /// Position of row `r` within `rho`.
    pub fn rho_pos(&self, r: usize) -> Option<usize> {
        self.rho_pos[r]
    }

    /// Position of column `c` within `kappa`.
    pub fn kappa_pos(&self, c: usize) -> Option<usize> {
        self.kappa_pos[c]
    }

    /// Pairs `(row, col, coeff)` in ascending row order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.rho
            .iter()
            .map(|&r| (r, self.col_of_row[r].unwrap(), self.coeff_of_row[r]))
    }

    /// Support `(row, col)` sorted by row.
    pub fn support(&self) -> Vec<(usize, usize)> {
        self.pairs().map(|(r, c, _)| (r, c)).collect()
    }

    /// Matching of the anti-transposed matrix: `(r, c) -> (n-1-c, m-1-r)`.
    pub fn antitranspose(&self) -> MatchingArray {
        let (m, n) = (self.nrows, self.ncols);
        let pairs = self
            .pairs()
            .map(|(r, c, v)| (n - 1 - c, m - 1 - r, v))
            .collect();
        MatchingArray::from_pairs(n, m, pairs).expect("anti-transpose of a matching")
    }

    pub fn to_matrix(&self, field: Field) -> StoredCsMatrix {
        let t: Vec<(usize, usize, i64)> = self.pairs().map(|(r, c, v)| (r, c, v as i64)).collect();
        StoredCsMatrix::from_triplets(field, self.nrows, self.ncols, &t).expect("in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_sequences() {
        let m = MatchingArray::from_pairs(4, 5, vec![(3, 0, 2), (1, 2, 1), (0, 4, 6)]).unwrap();
        assert_eq!(m.rho(), &[0, 1, 3]);
        assert_eq!(m.kappa(), &[0, 2, 4]);
        assert_eq!(m.rho_bar(), &[2]);
        assert_eq!(m.kappa_bar(), &[1, 3]);
        assert_eq!(m.kappa_star(), &[3, 1, 0]);
        assert_eq!(m.coeff_of_col(0), 2);
        assert_eq!(m.antitranspose().support(), vec![(0, 3), (2, 2), (4, 0)]);
    }

    #[test]
    fn rejects_double_matches() {
        assert!(MatchingArray::from_pairs(2, 2, vec![(0, 0, 1), (0, 1, 1)]).is_err());
        assert!(MatchingArray::from_pairs(2, 2, vec![(0, 0, 1), (1, 0, 1)]).is_err());
        assert!(MatchingArray::from_pairs(2, 2, vec![(0, 0, 0)]).is_err());
    }
}
