//! Filtered cell complexes exposed as per-dimension boundary oracles.
//!
//! Cells of each dimension are listed in filtration order: ascending birth
//! value, ties broken by a canonical combinatorial key. Row and column
//! indices of every boundary oracle are positions in these lists.

mod clique;
mod cubical;
pub mod datasets;
pub mod io;

use std::sync::Arc;

use serde::Serialize;

use crate::coeff::Field;
use crate::error::Result;
use crate::matrix::MatrixOracle;

pub use clique::{CliqueBoundary, CliqueComplex, Metric};
pub use cubical::{CubicalBoundary, CubicalComplex};

pub type DynOracle = Arc<dyn MatrixOracle + Send + Sync>;

/// Identifier of a cell independent of its filtration position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum CellId {
    /// sorted vertex tuple
    Simplex(Vec<u32>),
    /// minimal corner plus a bitmask of the axes the cube extends along
    Cube { anchor: Vec<usize>, extent: u8 },
}

/// A filtered complex with cells of dimensions `0..=top_dim()`.
pub trait FilteredComplex: Send + Sync {
    fn field(&self) -> Field;

    /// Highest cell dimension present.
    fn top_dim(&self) -> usize;

    /// Highest homology dimension this complex determines. Clique complexes
    /// truncated at `top_dim` determine homology below it; cubical
    /// complexes are complete and determine it up to `top_dim`.
    fn max_homology_dim(&self) -> usize;

    fn num_cells(&self, dim: usize) -> usize;

    fn birth(&self, dim: usize, pos: usize) -> f64;

    fn cell_id(&self, dim: usize, pos: usize) -> CellId;

    /// `∂_n`, rows indexed by `(n-1)`-cells and columns by `n`-cells.
    fn boundary(&self, n: usize) -> Result<DynOracle>;

    /// Whether the boundary rows report leading entries cheaply enough to
    /// short-circuit pivots.
    fn cheap_leading_entries(&self) -> bool;
}

pub(crate) fn check_boundary_dim(n: usize, top: usize) -> Result<()> {
    if n == 0 || n > top {
        return Err(crate::error::UmatchError::Usage(format!(
            "boundary dimension {n} outside 1..={top}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense;
    use crate::matrix::to_dense;
    use proptest::prelude::*;

    /// `∂_{n-1} ∂_n = 0` and row/column agreement for every boundary.
    fn check_complex(c: &dyn FilteredComplex) {
        let f = c.field();
        for n in 1..=c.top_dim() {
            let d = c.boundary(n).unwrap();
            assert_eq!(d.nrows(), c.num_cells(n - 1));
            assert_eq!(d.ncols(), c.num_cells(n));
            let dd = to_dense(&d);
            for j in 0..d.ncols() {
                let col = d.column(j);
                assert!(col.entries().windows(2).all(|w| w[0].0 < w[1].0));
                let expect: Vec<u32> = dd.iter().map(|r| r[j]).collect();
                assert_eq!(col.to_dense(d.nrows()), expect);
                for (i, _) in col.iter() {
                    assert!(c.birth(n - 1, i) <= c.birth(n, j));
                }
            }
            for i in 0..d.nrows() {
                assert_eq!(d.leading_entry(i), d.row(i).first());
            }
            if n >= 2 {
                let d0 = to_dense(&c.boundary(n - 1).unwrap());
                let prod = dense::mul(f, &d0, &dd, d.ncols());
                assert!(prod.iter().flatten().all(|&x| x == 0));
            }
        }
        for dim in 0..=c.top_dim() {
            for p in 1..c.num_cells(dim) {
                assert!(c.birth(dim, p - 1) <= c.birth(dim, p));
            }
        }
    }

    #[test]
    fn triangle_complex() {
        let dist = vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ];
        let c = CliqueComplex::from_dissimilarity(Field::GF2, &dist, 2, f64::INFINITY).unwrap();
        assert_eq!((c.num_cells(0), c.num_cells(1), c.num_cells(2)), (3, 3, 1));
        let ids: Vec<CellId> = (0..3).map(|p| c.cell_id(1, p)).collect();
        assert_eq!(
            ids,
            vec![
                CellId::Simplex(vec![0, 1]),
                CellId::Simplex(vec![0, 2]),
                CellId::Simplex(vec![1, 2])
            ]
        );
        let d1 = c.boundary(1).unwrap();
        for j in 0..3 {
            assert_eq!(d1.column(j).nnz(), 2);
        }
        let d2 = c.boundary(2).unwrap();
        assert_eq!(d2.column(0).to_dense(3), vec![1, 1, 1]);
        assert!(c.boundary(3).is_err());
        assert!(c.boundary(0).is_err());
        check_complex(&c);
        let c7 = CliqueComplex::from_dissimilarity(Field::new(7).unwrap(), &dist, 2, f64::INFINITY)
            .unwrap();
        check_complex(&c7);
    }

    #[test]
    fn circle_edge_births() {
        let pts = datasets::circle(20);
        let c = CliqueComplex::from_points(Field::GF2, &pts, Metric::Euclidean, 2, 2.0).unwrap();
        let chord = 2.0 * (std::f64::consts::PI / 20.0).sin();
        assert!((c.birth(1, 0) - chord).abs() < 1e-12);
        assert_eq!(c.num_cells(0), 20);
    }

    #[test]
    fn complete_complex_counts() {
        let pts = datasets::uniform(8, 3, 5);
        let c = CliqueComplex::from_points(Field::GF2, &pts, Metric::Euclidean, 3, f64::INFINITY)
            .unwrap();
        assert_eq!(
            (0..=3).map(|d| c.num_cells(d)).collect::<Vec<_>>(),
            vec![8, 28, 56, 70]
        );
        check_complex(&c);
    }

    #[test]
    fn cubical_examples() {
        let img = CubicalComplex::new(Field::GF2, vec![2, 2], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(img.num_cells(2), 4);
        let top: Vec<f64> = (0..4).map(|p| img.birth(2, p)).collect();
        assert_eq!(top, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!((img.num_cells(0), img.num_cells(1)), (9, 12));
        check_complex(&img);
        let single = CubicalComplex::new(Field::GF2, vec![1, 1], vec![5.0]).unwrap();
        assert!((0..4).all(|p| single.birth(0, p) == 5.0));
        let vol = CubicalComplex::new(
            Field::new(3).unwrap(),
            vec![2, 2, 2],
            (0..8).map(|v| v as f64).collect(),
        )
        .unwrap();
        assert_eq!(vol.num_cells(3), 8);
        check_complex(&vol);
    }

    #[test]
    fn leading_shortcut() {
        let dist = vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ];
        let c = CliqueComplex::from_dissimilarity(Field::GF2, &dist, 2, f64::INFINITY).unwrap();
        // last edge (1,2) against the triangle
        assert_eq!(c.leading_entry_shortcut(2, 2), Some((0, 1)));
        assert_eq!(c.leading_entry_shortcut(2, 0), None);
        let iso = vec![vec![0.0, 5.0], vec![5.0, 0.0]];
        let c = CliqueComplex::from_dissimilarity(Field::GF2, &iso, 1, 1.0).unwrap();
        assert_eq!(c.leading_entry_shortcut(1, 0), None);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn random_complexes(seed in any::<u64>(), p in prop_oneof![Just(2u64), Just(5u64)]) {
            let f = Field::new(p).unwrap();
            let pts = datasets::uniform(9, 2, seed);
            let c = CliqueComplex::from_points(f, &pts, Metric::Torus, 3, 0.6).unwrap();
            check_complex(&c);
            for n in 1..=c.top_dim() {
                let d = c.boundary(n).unwrap();
                let pareto = crate::umatch::pareto_pairs(&d);
                for i in 0..d.nrows() {
                    if let Some((j, _)) = c.leading_entry_shortcut(n, i) {
                        prop_assert!(pareto.contains(&(i, j)));
                    }
                }
            }
            let img = datasets::grf2d(5, seed);
            let cub = CubicalComplex::new(f, vec![5, 5], img).unwrap();
            check_complex(&cub);
        }
    }
}
