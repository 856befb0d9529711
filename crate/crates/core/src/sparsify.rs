//! Sparser replacements for pivot columns of the domain basis `C`.
//!
//! Any vector `v` with `v[j] = 1`, `v` zero past `j`, and `D v` zero below
//! the row matched to `j` may stand in for column `j` of `C`: the result is
//! still the domain factor of a U-match with the same matching.

use std::collections::BTreeMap;

use crate::error::{Result, UmatchError};
use crate::lazy::{Axis, Factor, RetrievalTarget};
use crate::matrix::{matvec, MatrixOracle, SparseVector};
use crate::umatch::CompressedUmatch;

fn pivot_row<D: MatrixOracle>(u: &CompressedUmatch<D>, j: usize) -> Result<usize> {
    crate::matrix::check_index(j, u.d().ncols())?;
    u.matching()
        .row_of_col(j)
        .ok_or_else(|| UmatchError::Usage(format!("column {j} is not a pivot column")))
}

/// Whether `v` may replace pivot column `j` of `C`.
pub fn column_is_valid<D: MatrixOracle>(
    u: &CompressedUmatch<D>,
    j: usize,
    v: &SparseVector,
) -> Result<bool> {
    let i = pivot_row(u, j)?;
    if v.last() != Some((j, 1)) {
        return Ok(false);
    }
    Ok(matvec(u.d(), v)?.max_index().is_none_or(|r| r <= i))
}

/// Back-substitution for pivot column `j` of `C`, stopped at the first
/// partial solution that already passes [`column_is_valid`].
pub fn early_stop_solve<D: MatrixOracle>(
    u: &CompressedUmatch<D>,
    j: usize,
) -> Result<SparseVector> {
    early_stop_with_steps(u, j).map(|(v, _)| v)
}

/// As [`early_stop_solve`], also returning the number of substitution steps.
pub fn early_stop_with_steps<D: MatrixOracle>(
    u: &CompressedUmatch<D>,
    j: usize,
) -> Result<(SparseVector, usize)> {
    let i = pivot_row(u, j)?;
    let field = u.field();
    let mm = u.matching();
    let a = u.lazy_a();
    let kappa = mm.kappa();
    let tp = mm.kappa_pos(j).unwrap();

    // residual of `A x = m e`, keyed by κ position (A's rows permuted)
    let mut res: BTreeMap<usize, u32> = BTreeMap::from([(tp, mm.coeff_of_col(j))]);
    let mut x: Vec<(usize, u32)> = Vec::new();
    // running `D x` and the number of its entries below row `i`
    let mut dx: BTreeMap<usize, u32> = BTreeMap::new();
    let mut below = 0usize;
    let mut steps = 0;
    while let Some((s, rs)) = res.pop_last() {
        steps += 1;
        let col = a.column(s);
        let pi_s = mm.rho_pos(mm.row_of_col(kappa[s]).unwrap()).unwrap();
        let xs = field.div(rs, col.get(pi_s));
        x.push((kappa[s], xs));
        for (r, c) in col.iter() {
            if r == pi_s {
                continue;
            }
            let s2 = mm.kappa_pos(mm.col_of_row(mm.rho()[r]).unwrap()).unwrap();
            let e = res.entry(s2).or_insert(0);
            *e = field.sub(*e, field.mul(xs, c));
            if *e == 0 {
                res.remove(&s2);
            }
        }
        for (r, c) in u.d().column(kappa[s]).iter() {
            let e = dx.entry(r).or_insert(0);
            let was = *e != 0;
            *e = field.add(*e, field.mul(xs, c));
            let now = *e != 0;
            if r > i && was != now {
                if now {
                    below += 1;
                } else {
                    below -= 1;
                }
            }
        }
        if below == 0 {
            break;
        }
    }
    x.reverse();
    Ok((SparseVector::from_sorted_unchecked(x), steps))
}

/// Drop coefficients of `v` at pivot columns `κ_l ≠ j` whose column of `D`
/// vanishes below the row matched to `j`.
pub fn delete_coefficients<D: MatrixOracle>(
    u: &CompressedUmatch<D>,
    j: usize,
    v: &SparseVector,
) -> Result<SparseVector> {
    let i = pivot_row(u, j)?;
    let mm = u.matching();
    let out = v.filter(|c| {
        c == j || mm.kappa_pos(c).is_none() || u.d().column(c).max_index().is_some_and(|r| r > i)
    });
    if column_is_valid(u, j, &out)? {
        Ok(out)
    } else {
        Ok(v.clone())
    }
}

/// Exact pivot column `j` of `C`.
pub fn exact_column<D: MatrixOracle>(u: &CompressedUmatch<D>, j: usize) -> Result<SparseVector> {
    pivot_row(u, j)?;
    u.retrieve(RetrievalTarget::new(Factor::C, Axis::Column, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Field;
    use crate::complexes::{datasets, CliqueComplex, FilteredComplex};
    use crate::matrix::StoredCsMatrix;
    use crate::umatch::{decompose_compressed, DecomposeOptions, MatchingArray};
    use proptest::prelude::*;

    #[test]
    fn lowest_entry_pivot_is_free() {
        let f = Field::new(5).unwrap();
        let d = StoredCsMatrix::from_dense_i64(f, &[vec![1, 2], vec![0, 3]]);
        let u = decompose_compressed(&d, &DecomposeOptions::default());
        let (v, steps) = early_stop_with_steps(&u, 1).unwrap();
        assert_eq!(v, SparseVector::unit(1));
        assert_eq!(steps, 1);
        let one = StoredCsMatrix::from_dense_i64(f, &[vec![4]]);
        let u = decompose_compressed(&one, &DecomposeOptions::default());
        assert_eq!(early_stop_solve(&u, 0).unwrap(), SparseVector::unit(0));
        assert!(early_stop_solve(&u, 1).is_err());
    }

    #[test]
    fn deletion_example() {
        let d = StoredCsMatrix::from_dense(
            Field::GF2,
            &[
                vec![1, 1, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
            ],
        );
        let u = decompose_compressed(&d, &DecomposeOptions::default());
        let exact = exact_column(&u, 1).unwrap();
        assert_eq!(exact.to_dense(4), vec![1, 1, 0, 0]);
        let thin = delete_coefficients(&u, 1, &exact).unwrap();
        assert_eq!(thin, SparseVector::unit(1));
        assert!(column_is_valid(&u, 1, &thin).unwrap());
        // nothing to delete
        let e0 = exact_column(&u, 0).unwrap();
        assert_eq!(delete_coefficients(&u, 0, &e0).unwrap(), e0);
    }

    /// Re-derive the matching of `D Ĉ` when the pivot columns of `C` are
    /// replaced: `D Ĉ` must have the same lowest-entry pattern.
    fn replaced_matching<D: MatrixOracle>(
        u: &CompressedUmatch<D>,
        cols: &[(usize, SparseVector)],
    ) -> MatchingArray {
        let d = u.d();
        let mut pairs = Vec::new();
        for (j, v) in cols {
            let y = matvec(d, v).unwrap();
            let (r, c) = y.last().unwrap();
            pairs.push((r, *j, c));
        }
        MatchingArray::from_pairs(d.nrows(), d.ncols(), pairs).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn sparsified_columns_stay_valid(seed in 0u64..1000) {
            let dist = datasets::er(9, seed);
            let c = CliqueComplex::from_dissimilarity(Field::new(3).unwrap(), &dist, 2, f64::INFINITY).unwrap();
            let d = c.boundary(2).unwrap();
            let u = decompose_compressed(d, &DecomposeOptions::default());
            let mut early = Vec::new();
            for &j in u.matching().kappa() {
                let exact = exact_column(&u, j).unwrap();
                let v = early_stop_solve(&u, j).unwrap();
                prop_assert!(column_is_valid(&u, j, &exact).unwrap());
                prop_assert!(column_is_valid(&u, j, &v).unwrap());
                prop_assert!(v.nnz() <= exact.nnz());
                let w = delete_coefficients(&u, j, &exact).unwrap();
                prop_assert!(column_is_valid(&u, j, &w).unwrap());
                prop_assert!(w.nnz() <= exact.nnz());
                early.push((j, v));
            }
            let derived = replaced_matching(&u, &early);
            prop_assert_eq!(derived.support(), u.matching().support());
        }
    }
}
