use crate::coeff::Field;
use crate::dense::{self, Dense};
use crate::matrix::MatrixOracle;

/// Support of the matching array from lower-left rank counts:
/// `(i, j)` is matched iff the rank of `D[i.., ..=j]` gains exactly one over
/// its three neighbours. Dense and small-scale only.
pub fn matching_rank_oracle(field: Field, d: &Dense) -> Vec<(usize, usize)> {
    let m = d.len();
    let n = dense::ncols(d);
    // r[i][j] = rank of D[i.., ..j]
    let mut r = vec![vec![0usize; n + 1]; m + 1];
    for i in 0..m {
        let rows: Vec<usize> = (i..m).collect();
        for j in 1..=n {
            let cols: Vec<usize> = (0..j).collect();
            r[i][j] = dense::rank_of(field, d, &rows, &cols);
        }
    }
    let mut out = Vec::new();
    for i in 0..m {
        for j in 0..n {
            let v = (r[i][j + 1] + r[i + 1][j]) - (r[i + 1][j + 1] + r[i][j]);
            if v == 1 {
                out.push((i, j));
            }
        }
    }
    out
}

/// Pairs `(i, j)` where `D[i, j]` leads row `i` and is the lowest entry of column `j`.
pub fn pareto_pairs<D: MatrixOracle + ?Sized>(d: &D) -> Vec<(usize, usize)> {
    (0..d.nrows())
        .filter_map(|i| {
            let (j, _) = d.leading_entry(i)?;
            (d.column(j).max_index() == Some(i)).then_some((i, j))
        })
        .collect()
}
