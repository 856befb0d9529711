//! Small dense matrices over GF(p), row-major `Vec<Vec<u32>>`.
//!
//! These are reference implementations for oracles and checks, not for
//! production-size data.

use crate::coeff::Field;

pub type Dense = Vec<Vec<u32>>;

pub fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
        .collect()
}

pub fn zeros(m: usize, n: usize) -> Dense {
    vec![vec![0; n]; m]
}

pub fn ncols(a: &Dense) -> usize {
    a.first().map_or(0, |r| r.len())
}

pub fn transpose(a: &Dense, n: usize) -> Dense {
    (0..n).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

/// `a · b`, where `b` has `n` columns (needed when `a` has no columns).
pub fn mul(f: Field, a: &Dense, b: &Dense, n: usize) -> Dense {
    a.iter()
        .map(|row| {
            let mut out = vec![0u32; n];
            for (k, &x) in row.iter().enumerate() {
                if x != 0 {
                    for (o, &y) in out.iter_mut().zip(&b[k]) {
                        *o = f.add(*o, f.mul(x, y));
                    }
                }
            }
            out
        })
        .collect()
}

pub fn mat_vec(f: Field, a: &Dense, x: &[u32]) -> Vec<u32> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(0, |acc, (&p, &q)| f.add(acc, f.mul(p, q)))
        })
        .collect()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(f: Field, a: &mut Dense) -> Vec<usize> {
    let n = ncols(a);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        let inv = f.inv(a[r][c]).expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let s = a[i][c];
                let (src, dst) = if i < r {
                    let (lo, hi) = a.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = a.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (d, &s2) in dst.iter_mut().zip(src.iter()) {
                    *d = f.sub(*d, f.mul(s, s2));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    pivots
}

pub fn rank(f: Field, a: &Dense) -> usize {
    rref(f, &mut a.clone()).len()
}

/// Rank of the submatrix with the given rows and columns.
pub fn rank_of(f: Field, a: &Dense, rows: &[usize], cols: &[usize]) -> usize {
    if rows.is_empty() || cols.is_empty() {
        return 0;
    }
    let sub: Dense = rows
        .iter()
        .map(|&i| cols.iter().map(|&j| a[i][j]).collect())
        .collect();
    rank(f, &sub)
}

/// Inverse of a square matrix, or `None` if singular.
pub fn inverse(f: Field, a: &Dense) -> Option<Dense> {
    let n = a.len();
    let mut aug: Dense = a
        .iter()
        .zip(identity(n))
        .map(|(r, e)| r.iter().copied().chain(e).collect())
        .collect();
    let piv = rref(f, &mut aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of the column space of `a` (as column vectors).
pub fn column_space(f: Field, a: &Dense, n: usize) -> Vec<Vec<u32>> {
    let mut t = transpose(a, n);
    let piv = rref(f, &mut t);
    t.truncate(piv.len());
    t
}

/// Basis of the right kernel `{x : a x = 0}`.
pub fn kernel(f: Field, a: &Dense, n: usize) -> Vec<Vec<u32>> {
    let mut r = a.clone();
    let piv = rref(f, &mut r);
    let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u32; n];
            v[fc] = 1;
            for (row, &pc) in piv.iter().enumerate() {
                v[pc] = f.neg(r[row][fc]);
            }
            v
        })
        .collect()
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(f: Field, basis: &[Vec<u32>], v: &[u32]) -> bool {
    let mut with: Dense = basis.to_vec();
    let base = rank(f, &with);
    with.push(v.to_vec());
    rank(f, &with) == base
}

pub fn is_upper_unitriangular(a: &Dense) -> bool {
    a.iter()
        .enumerate()
        .all(|(i, r)| r.len() == a.len() && r[i] == 1 && r[..i].iter().all(|&x| x == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let f = Field::new(7).unwrap();
        let a = vec![vec![1, 2, 0], vec![0, 1, 3], vec![0, 0, 1]];
        let ai = inverse(f, &a).unwrap();
        assert_eq!(mul(f, &a, &ai, 3), identity(3));
        assert!(inverse(f, &vec![vec![1, 2], vec![2, 4]]).is_none());
    }

    #[test]
    fn rank_and_kernel() {
        let f = Field::new(7).unwrap();
        let a = vec![vec![3, 1], vec![3, 1]];
        assert_eq!(rank(f, &a), 1);
        let k = kernel(f, &a, 2);
        assert_eq!(k.len(), 1);
        assert_eq!(mat_vec(f, &a, &k[0]), vec![0, 0]);
        assert_eq!(rank_of(f, &a, &[1], &[0]), 1);
        assert_eq!(rank_of(f, &a, &[], &[0]), 0);
    }
}
