//! Dense reference computations for small complexes: Betti numbers of
//! filtration prefixes and boundary membership by plain Gaussian
//! elimination. Independent of the U-match machinery, for verification.

use crate::coeff::Field;
use crate::complexes::FilteredComplex;
use crate::dense::{self, Dense};
use crate::matrix::to_dense;

use super::Chain;

pub struct DenseReference {
    field: Field,
    /// `boundaries[n - 1]` is `∂_n`
    boundaries: Vec<Dense>,
    /// `prefix_rank[n - 1][k]` is the rank of the first `k` columns of `∂_n`
    prefix_rank: Vec<Vec<usize>>,
    births: Vec<Vec<f64>>,
}

/// Ranks of all column prefixes, by inserting columns one at a time into an
/// echelon basis keyed by leading row.
fn column_prefix_ranks(f: Field, a: &Dense, ncols: usize) -> Vec<usize> {
    let nrows = a.len();
    let mut basis: Vec<Option<Vec<u32>>> = vec![None; nrows];
    let mut out = Vec::with_capacity(ncols + 1);
    let mut rank = 0;
    out.push(0);
    for j in 0..ncols {
        let mut v: Vec<u32> = a.iter().map(|r| r[j]).collect();
        while let Some(lead) = v.iter().position(|&x| x != 0) {
            match &basis[lead] {
                Some(b) => {
                    let c = f.div(v[lead], b[lead]);
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = f.sub(*x, f.mul(c, *y));
                    }
                }
                None => {
                    basis[lead] = Some(v);
                    rank += 1;
                    break;
                }
            }
        }
        out.push(rank);
    }
    out
}

impl DenseReference {
    /// Materialize `∂_1, …, ∂_top` of `c`.
    pub fn new(c: &dyn FilteredComplex, top: usize) -> Self {
        let field = c.field();
        let top = top.min(c.top_dim());
        let boundaries: Vec<Dense> = (1..=top)
            .map(|n| {
                let d = to_dense(&c.boundary(n).expect("dimension in range"));
                if d.is_empty() {
                    Vec::new()
                } else {
                    d
                }
            })
            .collect();
        let prefix_rank = boundaries
            .iter()
            .enumerate()
            .map(|(k, d)| column_prefix_ranks(field, d, c.num_cells(k + 1)))
            .collect();
        let births = (0..=top)
            .map(|d| (0..c.num_cells(d)).map(|p| c.birth(d, p)).collect())
            .collect();
        DenseReference {
            field,
            boundaries,
            prefix_rank,
            births,
        }
    }

    fn top(&self) -> usize {
        self.boundaries.len()
    }

    /// Number of `dim`-cells with birth at most `t`.
    pub fn count_upto(&self, dim: usize, t: f64) -> usize {
        self.births
            .get(dim)
            .map_or(0, |b| b.partition_point(|&x| x <= t))
    }

    /// `dim H_n` of the subcomplex made of the first `counts[d]` cells of
    /// each dimension `d`.
    pub fn betti_of_prefix(&self, n: usize, counts: &[usize]) -> usize {
        let cells = counts.get(n).copied().unwrap_or(0);
        let rank_n = if n == 0 {
            0
        } else {
            self.prefix_rank[n - 1][cells]
        };
        let rank_up = if n < self.top() {
            self.prefix_rank[n][counts.get(n + 1).copied().unwrap_or(0)]
        } else {
            0
        };
        cells - rank_n - rank_up
    }

    /// `dim H_n` of the sublevel set at value `t`.
    pub fn betti(&self, n: usize, t: f64) -> usize {
        let counts: Vec<usize> = (0..=self.top()).map(|d| self.count_upto(d, t)).collect();
        self.betti_of_prefix(n, &counts)
    }

    /// Distinct birth values, ascending.
    pub fn values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.births.iter().flatten().copied().collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    pub fn is_cycle(&self, x: &Chain) -> bool {
        if x.dim == 0 {
            return true;
        }
        let dense = x.vector.to_dense(self.births[x.dim].len());
        dense::mat_vec(self.field, &self.boundaries[x.dim - 1], &dense)
            .iter()
            .all(|&v| v == 0)
    }

    /// Whether `x` is the boundary of a chain on the first `k` cells of
    /// dimension `x.dim + 1`.
    pub fn bounded_by_prefix(&self, x: &Chain, k: usize) -> bool {
        let len = self.births[x.dim].len();
        let v = x.vector.to_dense(len);
        if x.dim >= self.top() {
            return v.iter().all(|&c| c == 0);
        }
        let d = &self.boundaries[x.dim];
        let cols: Vec<Vec<u32>> = (0..k).map(|j| d.iter().map(|r| r[j]).collect()).collect();
        dense::in_span(self.field, &cols, &v)
    }

    /// Whether `x` bounds in the sublevel set at value `t`.
    pub fn bounded_at(&self, x: &Chain, t: f64) -> bool {
        self.bounded_by_prefix(x, self.count_upto(x.dim + 1, t))
    }

    pub fn boundary(&self, n: usize) -> &Dense {
        &self.boundaries[n - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::CliqueComplex;

    #[test]
    fn prefix_ranks_match_dense_rank() {
        let f = Field::new(3).unwrap();
        let a: Dense = vec![vec![1, 2, 0, 1], vec![0, 0, 1, 1], vec![2, 1, 0, 2]];
        let pr = column_prefix_ranks(f, &a, 4);
        for k in 0..=4 {
            let cols: Vec<usize> = (0..k).collect();
            assert_eq!(pr[k], dense::rank_of(f, &a, &[0, 1, 2], &cols));
        }
    }

    #[test]
    fn triangle_betti() {
        let dist = vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ];
        let c = CliqueComplex::from_dissimilarity(Field::GF2, &dist, 2, f64::INFINITY).unwrap();
        let r = DenseReference::new(&c, 2);
        assert_eq!(r.betti(0, 0.0), 3);
        assert_eq!(r.betti(0, 1.0), 1);
        assert_eq!(r.betti(1, 1.0), 0);
        assert_eq!(r.betti_of_prefix(1, &[3, 3, 0]), 1);
    }
}
