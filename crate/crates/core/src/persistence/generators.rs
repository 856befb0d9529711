use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::complexes::CellId;
use crate::error::{Result, UmatchError};
use crate::lazy::{Axis, Factor, RetrievalTarget};
use crate::matrix::{matvec, SparseVector};
use crate::sparsify::early_stop_solve;

use super::{Bar, Chain, PersistenceEngine};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorStrategy {
    #[default]
    Exact,
    EarlyStop,
}

/// Subspaces of `C_n` built from filtration prefixes, cycles and
/// boundaries. `p` counts cells of the global order: `F_p` is spanned by the
/// first `p` cells, so `F_0 = 0`; use `usize::MAX` for the whole complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SaecularSpace {
    /// `F_p C_n`
    Chains {
        dim: usize,
        p: usize,
    },
    /// `F_p Z_n`
    Cycles {
        dim: usize,
        p: usize,
    },
    /// `F_p B_n = B_n ∩ F_p C_n`
    Boundaries {
        dim: usize,
        p: usize,
    },
    /// `∂(F_p C_{n+1})`
    BoundaryOf {
        dim: usize,
        p: usize,
    },
    Meet(Box<SaecularSpace>, Box<SaecularSpace>),
    Join(Box<SaecularSpace>, Box<SaecularSpace>),
}

impl SaecularSpace {
    pub fn meet(self, other: SaecularSpace) -> SaecularSpace {
        SaecularSpace::Meet(Box::new(self), Box::new(other))
    }

    pub fn join(self, other: SaecularSpace) -> SaecularSpace {
        SaecularSpace::Join(Box::new(self), Box::new(other))
    }
}

/// Jordan basis columns of one dimension spanning a subspace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JordanSelection {
    pub dim: usize,
    /// cell positions whose Jordan columns form the basis
    pub cells: Vec<usize>,
}

impl JordanSelection {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainEntry {
    pub cell: CellId,
    pub coeff: u32,
}

/// A bar with its cycle representative, ready for serialization.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratorRecord {
    pub dim: usize,
    pub birth: f64,
    pub death: Option<f64>,
    pub birth_cell: CellId,
    pub death_cell: Option<CellId>,
    pub chain: Vec<ChainEntry>,
}

impl PersistenceEngine {
    fn fetch(&self, n: usize, which: Factor, axis: Axis, index: usize) -> Result<SparseVector> {
        self.decomposition(n)?
            .retrieve(RetrievalTarget::new(which, axis, index))
    }

    /// A cycle representing `bar`, normalized so its lowest-index
    /// coefficient is 1. Finite bars `(i, j)` get column `i` of `R` for
    /// `∂_{n+1}`; infinite bars at `k` get column `k` of `C` for `∂_n`.
    pub fn cycle_representative(&self, bar: &Bar, strategy: GeneratorStrategy) -> Result<Chain> {
        self.check_bar(bar)?;
        let n = bar.dim;
        let f = self.complex.field();
        let v = match bar.death_cell {
            Some(j) => match strategy {
                GeneratorStrategy::Exact => {
                    self.fetch(n + 1, Factor::R, Axis::Column, bar.birth_cell)?
                }
                GeneratorStrategy::EarlyStop => {
                    let u = self.decomposition(n + 1)?;
                    matvec(u.d(), &early_stop_solve(u, j)?)?
                }
            },
            None if n == 0 => SparseVector::unit(bar.birth_cell),
            None => self.fetch(n, Factor::C, Axis::Column, bar.birth_cell)?,
        };
        Ok(Chain::new(n, v.normalize_leading(f)))
    }

    /// A relative cocycle for `bar`. Finite bars `(i, j)` get row `j` of
    /// `C⁻¹` for `∂_{n+1}`, an `(n+1)`-cochain; infinite bars at `k` get row
    /// `k` of `R⁻¹` for `∂_{n+1}`, an `n`-cochain.
    pub fn cocycle_representative(&self, bar: &Bar) -> Result<Chain> {
        self.check_bar(bar)?;
        let n = bar.dim;
        match bar.death_cell {
            Some(j) => Ok(Chain::new(
                n + 1,
                self.fetch(n + 1, Factor::Cinv, Axis::Row, j)?,
            )),
            None if n < self.decomposed_dim() => Ok(Chain::new(
                n,
                self.fetch(n + 1, Factor::Rinv, Axis::Row, bar.birth_cell)?,
            )),
            None => Ok(Chain::new(n, SparseVector::unit(bar.birth_cell))),
        }
    }

    /// Column `g` of a filtered Jordan basis of the total boundary matrix,
    /// `g` a global index. Cells matched as rows of `∂_{n+1}` get the
    /// matching column of `R`; every other cell gets its column of `C` for
    /// `∂_n` (a unit vector in dimension 0).
    pub fn jordan_column(&self, g: usize) -> Result<Chain> {
        crate::matrix::check_index(g, self.num_cells())?;
        let (n, p) = self.global[g];
        let row_matched = self
            .decomps
            .get(n)
            .is_some_and(|u| u.matching().col_of_row(p).is_some());
        let v = if row_matched {
            self.fetch(n + 1, Factor::R, Axis::Column, p)?
        } else if n >= 1 {
            self.fetch(n, Factor::C, Axis::Column, p)?
        } else {
            SparseVector::unit(p)
        };
        Ok(Chain::new(n, v))
    }

    fn prefix(&self, dim: usize, p: usize) -> impl Fn(usize) -> bool + '_ {
        move |pos| self.global_of[dim][pos] < p
    }

    /// Jordan columns spanning a saecular subspace, read off the matchings.
    pub fn saecular_select(&self, space: &SaecularSpace) -> Result<JordanSelection> {
        let need = |dim: usize| -> Result<()> {
            if dim >= self.global_of.len() {
                return Err(UmatchError::Usage(format!(
                    "no cells of dimension {dim} in the engine"
                )));
            }
            Ok(())
        };
        let boundary_pairs = |dim: usize| -> Result<Vec<(usize, usize)>> {
            match self.decomps.get(dim) {
                Some(u) => Ok(u.matching().pairs().map(|(i, j, _)| (i, j)).collect()),
                None if dim + 1 > self.complex.top_dim() => Ok(Vec::new()),
                None => Err(UmatchError::Usage(format!(
                    "boundary dimension {} was not decomposed",
                    dim + 1
                ))),
            }
        };
        let (dim, cells): (usize, BTreeSet<usize>) = match space {
            SaecularSpace::Chains { dim, p } => {
                need(*dim)?;
                let inside = self.prefix(*dim, *p);
                (
                    *dim,
                    (0..self.complex.num_cells(*dim))
                        .filter(|&q| inside(q))
                        .collect(),
                )
            }
            SaecularSpace::Cycles { dim, p } => {
                need(*dim)?;
                let inside = self.prefix(*dim, *p);
                let cols = (*dim >= 1).then(|| self.decomps[*dim - 1].matching());
                (
                    *dim,
                    (0..self.complex.num_cells(*dim))
                        .filter(|&q| inside(q) && !cols.is_some_and(|m| m.row_of_col(q).is_some()))
                        .collect(),
                )
            }
            SaecularSpace::Boundaries { dim, p } => {
                need(*dim)?;
                let inside = self.prefix(*dim, *p);
                (
                    *dim,
                    boundary_pairs(*dim)?
                        .into_iter()
                        .map(|e| e.0)
                        .filter(|&i| inside(i))
                        .collect(),
                )
            }
            SaecularSpace::BoundaryOf { dim, p } => {
                need(*dim)?;
                let pairs = boundary_pairs(*dim)?;
                let inside = |j: usize| self.global_of[*dim + 1][j] < *p;
                (
                    *dim,
                    pairs
                        .into_iter()
                        .filter(|e| inside(e.1))
                        .map(|e| e.0)
                        .collect(),
                )
            }
            SaecularSpace::Meet(a, b) | SaecularSpace::Join(a, b) => {
                let x = self.saecular_select(a)?;
                let y = self.saecular_select(b)?;
                if x.dim != y.dim {
                    return Err(UmatchError::Usage(format!(
                        "cannot combine subspaces of dimensions {} and {}",
                        x.dim, y.dim
                    )));
                }
                let dim = x.dim;
                let (x, y): (BTreeSet<usize>, BTreeSet<usize>) =
                    (x.cells.into_iter().collect(), y.cells.into_iter().collect());
                let cells = if matches!(space, SaecularSpace::Meet(..)) {
                    x.intersection(&y).copied().collect()
                } else {
                    x.union(&y).copied().collect()
                };
                (dim, cells)
            }
        };
        Ok(JordanSelection {
            dim,
            cells: cells.into_iter().collect(),
        })
    }

    /// The chains of a selection.
    pub fn selection_vectors(&self, sel: &JordanSelection) -> Result<Vec<Chain>> {
        sel.cells
            .iter()
            .map(|&p| self.jordan_column(self.global_of[sel.dim][p]))
            .collect()
    }

    /// Serializable bar plus representative.
    pub fn generator_record(
        &self,
        bar: &Bar,
        strategy: GeneratorStrategy,
    ) -> Result<GeneratorRecord> {
        let chain = self.cycle_representative(bar, strategy)?;
        Ok(GeneratorRecord {
            dim: bar.dim,
            birth: bar.birth,
            death: bar.death,
            birth_cell: self.cell_id(bar.dim, bar.birth_cell),
            death_cell: bar.death_cell.map(|j| self.cell_id(bar.dim + 1, j)),
            chain: self.chain_entries(&chain),
        })
    }

    pub fn chain_entries(&self, chain: &Chain) -> Vec<ChainEntry> {
        chain
            .vector
            .iter()
            .map(|(p, c)| ChainEntry {
                cell: self.cell_id(chain.dim, p),
                coeff: c,
            })
            .collect()
    }
}
