//! Persistent homology from per-dimension compressed U-matches of the
//! boundary operators of a filtered complex.

mod generators;
mod problems;
pub mod reference;

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::Serialize;

use crate::complexes::{CellId, DynOracle, FilteredComplex};
use crate::error::{Result, UmatchError};
use crate::matrix::SparseVector;
use crate::umatch::{
    clearing_filter, decompose_compressed, CompressedUmatch, DecomposeOptions, OpCounters,
};

pub use generators::{GeneratorRecord, GeneratorStrategy, JordanSelection, SaecularSpace};
pub use problems::{Bounding, Lifespan};

static NEXT_ENGINE: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Debug)]
pub struct EngineOptions {
    /// Highest homology dimension to compute; capped by the complex.
    pub max_homology_dim: Option<usize>,
    pub clearing: bool,
    /// Only honored for complexes with cheap leading entries.
    pub pareto: bool,
    pub keep_empty_bars: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            max_homology_dim: None,
            clearing: true,
            pareto: true,
            keep_empty_bars: false,
        }
    }
}

/// A chain or cochain supported on cells of one dimension, indexed by
/// filtration position within that dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub dim: usize,
    pub vector: SparseVector,
}

impl Chain {
    pub fn new(dim: usize, vector: SparseVector) -> Self {
        Chain { dim, vector }
    }

    pub fn zero(dim: usize) -> Self {
        Chain::new(dim, SparseVector::new())
    }

    pub fn is_zero(&self) -> bool {
        self.vector.is_zero()
    }
}

/// A persistence interval. Indices are positions in the global filtration
/// order; `birth_cell`/`death_cell` are positions within their dimension.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bar {
    pub dim: usize,
    pub birth: f64,
    pub death: Option<f64>,
    pub birth_index: usize,
    pub death_index: Option<usize>,
    pub birth_cell: usize,
    pub death_cell: Option<usize>,
    #[serde(skip)]
    engine: u64,
}

impl Bar {
    pub fn is_finite(&self) -> bool {
        self.death.is_some()
    }

    /// Whether the bar is alive at filtration value `t` (half-open).
    pub fn contains(&self, t: f64) -> bool {
        self.birth <= t && self.death.is_none_or(|d| t < d)
    }

    pub fn is_empty(&self) -> bool {
        self.death == Some(self.birth)
    }
}

/// Bars grouped by homology dimension.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Barcode {
    pub dims: Vec<Vec<Bar>>,
}

impl Barcode {
    pub fn bars(&self, dim: usize) -> &[Bar] {
        self.dims.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Bar> {
        self.dims.iter().flatten()
    }

    /// Number of bars of dimension `dim` alive at `t`.
    pub fn betti(&self, dim: usize, t: f64) -> usize {
        self.bars(dim).iter().filter(|b| b.contains(t)).count()
    }
}

pub struct PersistenceEngine {
    id: u64,
    complex: Arc<dyn FilteredComplex>,
    options: EngineOptions,
    hom_dim: usize,
    /// `decomps[n - 1]` factors `∂_n`
    decomps: Vec<CompressedUmatch<DynOracle>>,
    global: Vec<(usize, usize)>,
    global_of: Vec<Vec<usize>>,
}

impl std::fmt::Debug for PersistenceEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PersistenceEngine")
            .field("id", &self.id)
            .field("hom_dim", &self.hom_dim)
            .field("cells", &self.global.len())
            .finish()
    }
}

impl PersistenceEngine {
    /// Decompose `∂_1, ∂_2, …` in increasing dimension, clearing each from
    /// the matching of the one before.
    pub fn new(complex: Arc<dyn FilteredComplex>, options: EngineOptions) -> Result<Self> {
        let hom_dim = options
            .max_homology_dim
            .map_or(complex.max_homology_dim(), |h| {
                h.min(complex.max_homology_dim())
            });
        let dtop = (hom_dim + 1).min(complex.top_dim());
        let pareto = options.pareto && complex.cheap_leading_entries();
        let mut decomps: Vec<CompressedUmatch<DynOracle>> = Vec::with_capacity(dtop);
        for n in 1..=dtop {
            let d = complex.boundary(n)?;
            let clearing = match decomps.last() {
                Some(prev) if options.clearing => Some(clearing_filter(prev.matching())),
                _ => None,
            };
            let opts = DecomposeOptions {
                pareto,
                clearing,
                count_ops: true,
            };
            decomps.push(decompose_compressed(d, &opts));
        }

        let mut global: Vec<(usize, usize)> = (0..=dtop)
            .flat_map(|dim| (0..complex.num_cells(dim)).map(move |p| (dim, p)))
            .collect();
        global.sort_by(|a, b| {
            complex
                .birth(a.0, a.1)
                .total_cmp(&complex.birth(b.0, b.1))
                .then(a.cmp(b))
        });
        let mut global_of: Vec<Vec<usize>> =
            (0..=dtop).map(|d| vec![0; complex.num_cells(d)]).collect();
        for (g, &(dim, p)) in global.iter().enumerate() {
            global_of[dim][p] = g;
        }
        Ok(PersistenceEngine {
            id: NEXT_ENGINE.fetch_add(1, Ordering::Relaxed),
            complex,
            options,
            hom_dim,
            decomps,
            global,
            global_of,
        })
    }

    pub fn complex(&self) -> &dyn FilteredComplex {
        self.complex.as_ref()
    }

    pub fn options(&self) -> &EngineOptions {
        &self.options
    }

    /// Highest homology dimension reported.
    pub fn max_homology_dim(&self) -> usize {
        self.hom_dim
    }

    /// Highest boundary dimension decomposed.
    pub fn decomposed_dim(&self) -> usize {
        self.decomps.len()
    }

    /// Compressed U-match of `∂_n`.
    pub fn decomposition(&self, n: usize) -> Result<&CompressedUmatch<DynOracle>> {
        if n == 0 || n > self.decomps.len() {
            return Err(UmatchError::Usage(format!(
                "boundary dimension {n} was not decomposed (available 1..={})",
                self.decomps.len()
            )));
        }
        Ok(&self.decomps[n - 1])
    }

    pub fn counters(&self) -> Vec<OpCounters> {
        self.decomps.iter().map(|u| u.counters().clone()).collect()
    }

    /// Number of cells in the global order.
    pub fn num_cells(&self) -> usize {
        self.global.len()
    }

    pub fn global_index(&self, dim: usize, pos: usize) -> usize {
        self.global_of[dim][pos]
    }

    pub fn cell_at(&self, g: usize) -> (usize, usize) {
        self.global[g]
    }

    pub fn birth_value(&self, dim: usize, pos: usize) -> f64 {
        self.complex.birth(dim, pos)
    }

    pub fn cell_id(&self, dim: usize, pos: usize) -> CellId {
        self.complex.cell_id(dim, pos)
    }

    /// Matched pairs of all decomposed boundaries in global indices: the
    /// support of the matching of the total boundary matrix.
    pub fn total_matching(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .decomps
            .iter()
            .enumerate()
            .flat_map(|(k, u)| {
                let n = k + 1;
                u.matching()
                    .pairs()
                    .map(move |(i, j, _)| (self.global_of[n - 1][i], self.global_of[n][j]))
            })
            .collect();
        out.sort_unstable();
        out
    }

    fn bar(&self, dim: usize, i: usize, j: Option<usize>) -> Bar {
        Bar {
            dim,
            birth: self.complex.birth(dim, i),
            death: j.map(|j| self.complex.birth(dim + 1, j)),
            birth_index: self.global_of[dim][i],
            death_index: j.map(|j| self.global_of[dim + 1][j]),
            birth_cell: i,
            death_cell: j,
            engine: self.id,
        }
    }

    /// Persistence intervals in dimensions `0..=max_homology_dim`.
    pub fn barcode(&self) -> Barcode {
        let dims = (0..=self.hom_dim)
            .map(|n| {
                let mut bars = Vec::new();
                let cols = (n >= 1).then(|| self.decomps[n - 1].matching());
                let rows = self.decomps.get(n).map(|u| u.matching());
                for k in 0..self.complex.num_cells(n) {
                    if cols.is_some_and(|m| m.row_of_col(k).is_some()) {
                        continue;
                    }
                    match rows.and_then(|m| m.col_of_row(k)) {
                        Some(j) => bars.push(self.bar(n, k, Some(j))),
                        None => bars.push(self.bar(n, k, None)),
                    }
                }
                if !self.options.keep_empty_bars {
                    bars.retain(|b| !b.is_empty());
                }
                bars.sort_by_key(|b| b.birth_index);
                bars
            })
            .collect();
        Barcode { dims }
    }

    fn check_bar(&self, bar: &Bar) -> Result<()> {
        if bar.engine != self.id {
            return Err(UmatchError::Usage(
                "bar was produced by a different engine".into(),
            ));
        }
        Ok(())
    }

    /// Global index and value of the latest cell in the support of `x`.
    pub fn chain_birth(&self, x: &Chain) -> Option<(usize, f64)> {
        x.vector
            .max_index()
            .map(|p| (self.global_of[x.dim][p], self.complex.birth(x.dim, p)))
    }

    fn check_chain(&self, x: &Chain) -> Result<()> {
        if x.dim >= self.global_of.len() {
            return Err(UmatchError::Usage(format!(
                "no cells of dimension {} in the engine",
                x.dim
            )));
        }
        x.vector.check_len(self.complex.num_cells(x.dim))
    }

    /// Whether `∂x = 0`.
    pub fn is_cycle(&self, x: &Chain) -> Result<bool> {
        self.check_chain(x)?;
        if x.dim == 0 {
            return Ok(true);
        }
        Ok(crate::matrix::matvec(self.decomposition(x.dim)?.d(), &x.vector)?.is_zero())
    }
}
