use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use serde::Serialize;

use crate::coeff::Field;
use crate::error::{Result, UmatchError};
use crate::matrix::{MatrixOracle, SparseVector, StoredCsMatrix};

use super::MatchingArray;

/// Operation counts gathered during a compressed decomposition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OpCounters {
    pub rows_visited: u64,
    pub rows_cleared: u64,
    pub pareto_shortcuts: u64,
    pub row_additions: u64,
    pub entries_merged: u64,
}

/// Rows known in advance to carry no pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClearingFilter {
    skip: Vec<bool>,
}

impl ClearingFilter {
    pub fn fires(&self, row: usize) -> bool {
        self.skip.get(row).copied().unwrap_or(false)
    }

    pub fn count(&self) -> usize {
        self.skip.iter().filter(|&&s| s).count()
    }
}

/// Skip set for `∂_{n+1}` built from the matching of `∂_n`: a cell matched as a
/// column of `∂_n` is never a pivot row of `∂_{n+1}`.
pub fn clearing_filter(prior: &MatchingArray) -> ClearingFilter {
    ClearingFilter {
        skip: (0..prior.ncols())
            .map(|c| prior.row_of_col(c).is_some())
            .collect(),
    }
}

#[derive(Clone, Debug)]
pub struct DecomposeOptions {
    pub pareto: bool,
    pub clearing: Option<ClearingFilter>,
    pub count_ops: bool,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            pareto: true,
            clearing: None,
            count_ops: false,
        }
    }
}

/// Compressed proper U-match: `D`, the matching array, and
/// `Rbar = (R_ρρ)⁻¹` indexed by positions in `ρ`.
#[derive(Clone, Debug)]
pub struct CompressedUmatch<D> {
    d: D,
    matching: MatchingArray,
    rbar: StoredCsMatrix,
    counters: OpCounters,
}

impl<D: MatrixOracle> CompressedUmatch<D> {
    /// Reassemble from stored parts; checks shapes and unitriangularity.
    pub fn from_parts(d: D, matching: MatchingArray, rbar: StoredCsMatrix) -> Result<Self> {
        if matching.nrows() != d.nrows() || matching.ncols() != d.ncols() {
            return Err(UmatchError::DimensionMismatch {
                expected: d.nrows(),
                found: matching.nrows(),
            });
        }
        if rbar.nrows() != matching.len() || !rbar.is_upper_unitriangular() {
            return Err(UmatchError::Usage(
                "pivot block inverse must be upper unitriangular of size k".into(),
            ));
        }
        Ok(CompressedUmatch {
            d,
            matching,
            rbar: rbar.with_column_access(),
            counters: OpCounters::default(),
        })
    }

    pub fn d(&self) -> &D {
        &self.d
    }

    pub fn field(&self) -> Field {
        self.d.field()
    }

    pub fn matching(&self) -> &MatchingArray {
        &self.matching
    }

    /// `(R_ρρ)⁻¹`, rows and columns indexed by positions in `ρ`.
    pub fn rbar(&self) -> &StoredCsMatrix {
        &self.rbar
    }

    pub fn counters(&self) -> &OpCounters {
        &self.counters
    }

    pub fn into_parts(self) -> (D, MatchingArray, StoredCsMatrix) {
        (self.d, self.matching, self.rbar)
    }
}

struct Term {
    coef: u32,
    row: SparseVector,
    pos: usize,
}

/// Lazily merged sum of scaled rows of `D`.
#[derive(Default)]
struct WorkingRow {
    terms: Vec<Term>,
    heap: BinaryHeap<Reverse<(usize, usize)>>,
}

impl WorkingRow {
    fn push(&mut self, coef: u32, row: SparseVector, from_col: usize) {
        let pos = row.entries().partition_point(|e| e.0 < from_col);
        if coef == 0 || pos == row.nnz() {
            return;
        }
        self.heap
            .push(Reverse((row.entries()[pos].0, self.terms.len())));
        self.terms.push(Term { coef, row, pos });
    }

    /// Pop entries until a column with nonzero total is found.
    fn pop_leading(&mut self, field: Field, merged: &mut u64) -> Option<(usize, u32)> {
        loop {
            let Reverse((col, _)) = *self.heap.peek()?;
            let mut sum = 0;
            while let Some(&Reverse((c, t))) = self.heap.peek() {
                if c != col {
                    break;
                }
                self.heap.pop();
                *merged += 1;
                let term = &mut self.terms[t];
                sum = field.add(sum, field.mul(term.coef, term.row.entries()[term.pos].1));
                term.pos += 1;
                if term.pos < term.row.nnz() {
                    self.heap.push(Reverse((term.row.entries()[term.pos].0, t)));
                }
            }
            if sum != 0 {
                return Some((col, sum));
            }
        }
    }
}

/// Bottom-to-top row reduction storing only the pivot block of `R⁻¹`.
///
/// Working rows are never stored: each is a heap-merged combination of
/// rows of `D` with coefficients drawn from previously recorded rows of `Rbar`.
pub fn decompose_compressed<D: MatrixOracle>(d: D, opts: &DecomposeOptions) -> CompressedUmatch<D> {
    let field = d.field();
    let (m, n) = (d.nrows(), d.ncols());
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut pivot_coeff = vec![0u32; m];
    let mut rbar_rows: Vec<Option<SparseVector>> = vec![None; m];
    let mut pairs = Vec::new();
    let mut ops = OpCounters::default();

    for i in (0..m).rev() {
        ops.rows_visited += 1;
        if opts.clearing.as_ref().is_some_and(|f| f.fires(i)) {
            ops.rows_cleared += 1;
            continue;
        }
        if opts.pareto {
            match d.leading_entry(i) {
                None => continue,
                Some((k, v)) if owner[k].is_none() => {
                    ops.pareto_shortcuts += 1;
                    owner[k] = Some(i);
                    pivot_coeff[i] = v;
                    pairs.push((i, k, v));
                    rbar_rows[i] = Some(SparseVector::unit(i));
                    continue;
                }
                _ => {}
            }
        }

        let mut work = WorkingRow::default();
        work.push(1, d.row(i), 0);
        let mut vec: BTreeMap<usize, u32> = BTreeMap::new();
        while let Some((k, val)) = work.pop_leading(field, &mut ops.entries_merged) {
            let Some(j) = owner[k] else {
                owner[k] = Some(i);
                pivot_coeff[i] = val;
                pairs.push((i, k, val));
                let mut row = vec![(i, 1)];
                row.extend(vec.into_iter().rev().filter(|e| e.1 != 0));
                row.sort_unstable_by_key(|e| e.0);
                rbar_rows[i] = Some(SparseVector::from_sorted_unchecked(row));
                break;
            };
            ops.row_additions += 1;
            let neg_lambda = field.neg(field.div(val, pivot_coeff[j]));
            for (l, r) in rbar_rows[j].as_ref().expect("pivot row recorded").iter() {
                let c = field.mul(neg_lambda, r);
                let e = vec.entry(l).or_insert(0);
                *e = field.add(*e, c);
                work.push(c, d.row(l), k + 1);
            }
        }
    }

    let matching = MatchingArray::from_pairs(m, n, pairs).expect("one pivot per row and column");
    let k = matching.len();
    let rows = matching
        .rho()
        .iter()
        .map(|&r| {
            rbar_rows[r]
                .as_ref()
                .unwrap()
                .filter_map(|l| matching.rho_pos(l))
        })
        .collect();
    let rbar = StoredCsMatrix::from_rows(field, k, rows)
        .expect("pivot block")
        .with_column_access();
    CompressedUmatch {
        d,
        matching,
        rbar,
        counters: if opts.count_ops {
            ops
        } else {
            OpCounters::default()
        },
    }
}
