//! Lazy reconstruction of rows and columns of `R`, `R⁻¹`, `C`, `C⁻¹` from a
//! compressed U-match, with at most one triangular solve per request.

use std::cell::Cell;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coeff::Field;
use crate::error::{Result, UmatchError};
use crate::matrix::{check_index, linear_combination, MatrixOracle, SparseVector};
use crate::umatch::CompressedUmatch;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    R,
    Rinv,
    C,
    Cinv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    Row,
    Column,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RetrievalTarget {
    pub which: Factor,
    pub axis: Axis,
    pub index: usize,
}

impl RetrievalTarget {
    pub fn new(which: Factor, axis: Axis, index: usize) -> Self {
        RetrievalTarget { which, axis, index }
    }
}

/// `Right` solves `T x = b`; `Left` solves `y T = b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn singular(at: usize) -> UmatchError {
    UmatchError::Internal(format!("zero pivot in triangular solve at position {at}"))
}

/// Solve against a square `T` whose rows, reordered so that row `perm[s]`
/// comes `s`-th, form an upper-triangular matrix. `perm = None` means `T`
/// is already upper triangular.
pub fn triangular_solve<T: MatrixOracle + ?Sized>(
    t: &T,
    perm: Option<&[usize]>,
    b: &SparseVector,
    side: Side,
) -> Result<SparseVector> {
    let field = t.field();
    let k = t.nrows();
    if t.ncols() != k {
        return Err(UmatchError::DimensionMismatch {
            expected: k,
            found: t.ncols(),
        });
    }
    b.check_len(k)?;
    let p = |s: usize| perm.map_or(s, |p| p[s]);
    let inv_perm: Option<Vec<usize>> = perm.map(|p| {
        let mut inv = vec![0; k];
        for (s, &r) in p.iter().enumerate() {
            inv[r] = s;
        }
        inv
    });
    let ip = |r: usize| inv_perm.as_ref().map_or(r, |v| v[r]);

    match side {
        Side::Right => {
            // back-substitution over columns, residual keyed by permuted row
            let mut res: BTreeMap<usize, u32> = b.iter().map(|(r, c)| (ip(r), c)).collect();
            let mut x = Vec::new();
            while let Some((s, rs)) = res.pop_last() {
                let col = t.column(s);
                let diag = col.get(p(s));
                if diag == 0 {
                    return Err(singular(s));
                }
                let xs = field.div(rs, diag);
                x.push((s, xs));
                for (r, c) in col.iter() {
                    let s2 = ip(r);
                    if s2 == s {
                        continue;
                    }
                    if s2 > s {
                        return Err(singular(s2));
                    }
                    let e = res.entry(s2).or_insert(0);
                    *e = field.sub(*e, field.mul(xs, c));
                    if *e == 0 {
                        res.remove(&s2);
                    }
                }
            }
            x.reverse();
            Ok(SparseVector::from_sorted_unchecked(x))
        }
        Side::Left => {
            let mut res: BTreeMap<usize, u32> = b.iter().collect();
            let mut y = Vec::new();
            while let Some((s, rs)) = res.pop_first() {
                let row = t.row(p(s));
                let diag = row.get(s);
                if diag == 0 {
                    return Err(singular(s));
                }
                let zs = field.div(rs, diag);
                y.push((p(s), zs));
                for (c, v) in row.iter() {
                    if c == s {
                        continue;
                    }
                    if c < s {
                        return Err(singular(c));
                    }
                    let e = res.entry(c).or_insert(0);
                    *e = field.sub(*e, field.mul(zs, v));
                    if *e == 0 {
                        res.remove(&c);
                    }
                }
            }
            Ok(SparseVector::from_entries(field, y))
        }
    }
}

/// `A = (R_ρρ)⁻¹ · D_ρκ`, rows by position in `ρ`, columns by position in `κ`.
/// Never materialized: each row or column is one stored vector of `Rbar`
/// composed with rows or columns of `D`.
pub struct LazyA<'u, D> {
    u: &'u CompressedUmatch<D>,
}

impl<'u, D: MatrixOracle> LazyA<'u, D> {
    pub fn new(u: &'u CompressedUmatch<D>) -> Self {
        LazyA { u }
    }

    /// `pi[t]`: position in `ρ` of the row matched to `κ_t`. Reordering the
    /// rows of `A` by `pi` makes it upper triangular with diagonal `M`.
    pub fn row_order(&self) -> Vec<usize> {
        let mm = self.u.matching();
        mm.kappa_star()
            .iter()
            .map(|&r| mm.rho_pos(r).unwrap())
            .collect()
    }
}

impl<D: MatrixOracle> MatrixOracle for LazyA<'_, D> {
    fn field(&self) -> Field {
        self.u.field()
    }

    fn nrows(&self) -> usize {
        self.u.matching().len()
    }

    fn ncols(&self) -> usize {
        self.u.matching().len()
    }

    fn row(&self, a: usize) -> SparseVector {
        let mm = self.u.matching();
        let rows: Vec<(u32, SparseVector)> = self
            .u
            .rbar()
            .row(a)
            .iter()
            .map(|(l, c)| {
                (
                    c,
                    self.u.d().row(mm.rho()[l]).filter_map(|j| mm.kappa_pos(j)),
                )
            })
            .collect();
        linear_combination(self.field(), rows.iter().map(|(c, v)| (*c, v)))
    }

    fn column(&self, t: usize) -> SparseVector {
        let mm = self.u.matching();
        let v = self
            .u
            .d()
            .column(mm.kappa()[t])
            .filter_map(|i| mm.rho_pos(i));
        rbar_times(self.u, &v)
    }
}

/// `Rbar · v` for `v` indexed by positions in `ρ`.
fn rbar_times<D: MatrixOracle>(u: &CompressedUmatch<D>, v: &SparseVector) -> SparseVector {
    let cols: Vec<(u32, SparseVector)> = v.iter().map(|(l, c)| (c, u.rbar().column(l))).collect();
    linear_combination(u.field(), cols.iter().map(|(c, col)| (*c, col)))
}

/// `v · Rbar` for `v` indexed by positions in `ρ`.
fn times_rbar<D: MatrixOracle>(u: &CompressedUmatch<D>, v: &SparseVector) -> SparseVector {
    let rows: Vec<(u32, SparseVector)> = v.iter().map(|(l, c)| (c, u.rbar().row(l))).collect();
    linear_combination(u.field(), rows.iter().map(|(c, row)| (*c, row)))
}

/// `Σ_a v_a · row_{ρ_a}(D)` for `v` indexed by positions in `ρ`.
fn combine_d_rows<D: MatrixOracle>(u: &CompressedUmatch<D>, v: &SparseVector) -> SparseVector {
    let rho = u.matching().rho();
    let rows: Vec<(u32, SparseVector)> = v.iter().map(|(a, c)| (c, u.d().row(rho[a]))).collect();
    linear_combination(u.field(), rows.iter().map(|(c, row)| (*c, row)))
}

/// `Σ_t x_t · col_{κ_t}(D)` for `x` indexed by positions in `κ`.
fn combine_d_cols<D: MatrixOracle>(u: &CompressedUmatch<D>, x: &SparseVector) -> SparseVector {
    let kappa = u.matching().kappa();
    let cols: Vec<(u32, SparseVector)> =
        x.iter().map(|(t, c)| (c, u.d().column(kappa[t]))).collect();
    linear_combination(u.field(), cols.iter().map(|(c, col)| (*c, col)))
}

fn add_unit(field: Field, v: SparseVector, i: usize) -> SparseVector {
    crate::matrix::add(field, &v, &SparseVector::unit(i))
}

impl<D: MatrixOracle> CompressedUmatch<D> {
    pub fn lazy_a(&self) -> LazyA<'_, D> {
        LazyA::new(self)
    }

    /// Solve `A x = b` (`b` over `ρ` positions, `x` over `κ` positions).
    pub fn solve_a(&self, b: &SparseVector) -> Result<SparseVector> {
        let a = self.lazy_a();
        triangular_solve(&a, Some(&a.row_order()), b, Side::Right)
    }

    /// Solve `y A = c` (`c` over `κ` positions, `y` over `ρ` positions).
    pub fn solve_a_left(&self, c: &SparseVector) -> Result<SparseVector> {
        let a = self.lazy_a();
        triangular_solve(&a, Some(&a.row_order()), c, Side::Left)
    }

    fn lift_rho(&self, v: &SparseVector) -> SparseVector {
        let rho = self.matching().rho();
        v.iter().map(|(a, c)| (rho[a], c)).collect()
    }

    fn lift_kappa(&self, v: &SparseVector) -> SparseVector {
        let kappa = self.matching().kappa();
        v.iter().map(|(t, c)| (kappa[t], c)).collect()
    }

    /// Row or column of a factor of the proper decomposition.
    pub fn retrieve(&self, t: RetrievalTarget) -> Result<SparseVector> {
        self.retrieve_audited(t).map(|(v, _)| v)
    }

    /// As [`retrieve`](Self::retrieve), also returning the number of
    /// triangular solves performed.
    pub fn retrieve_audited(&self, t: RetrievalTarget) -> Result<(SparseVector, usize)> {
        let solves = Cell::new(0usize);
        let solve_right = |b: &SparseVector| {
            solves.set(solves.get() + 1);
            self.solve_a(b)
        };
        let solve_left = |c: &SparseVector| {
            solves.set(solves.get() + 1);
            self.solve_a_left(c)
        };
        let field = self.field();
        let mm = self.matching();
        let (m, n) = (self.d().nrows(), self.d().ncols());
        let i = t.index;
        let len = match (t.which, t.axis) {
            (Factor::R | Factor::Rinv, _) => m,
            (Factor::C | Factor::Cinv, _) => n,
        };
        check_index(i, len)?;
        let neg_one = field.neg(1);

        let v = match (t.which, t.axis) {
            (Factor::Rinv, Axis::Row) => match mm.rho_pos(i) {
                Some(a) => self.lift_rho(&self.rbar().row(a)),
                None => {
                    let d = self.d().row(i).filter_map(|j| mm.kappa_pos(j)).neg(field);
                    let w = solve_left(&d)?;
                    add_unit(field, self.lift_rho(&times_rbar(self, &w)), i)
                }
            },
            (Factor::R, Axis::Row) => match mm.rho_pos(i) {
                Some(a) => {
                    solves.set(solves.get() + 1);
                    let x =
                        triangular_solve(self.rbar(), None, &SparseVector::unit(a), Side::Left)?;
                    self.lift_rho(&x)
                }
                None => {
                    let d = self.d().row(i).filter_map(|j| mm.kappa_pos(j));
                    let x = solve_left(&d)?;
                    add_unit(field, self.lift_rho(&x), i)
                }
            },
            (Factor::Cinv, Axis::Row) => match mm.kappa_pos(i) {
                Some(_) => {
                    let r = mm.row_of_col(i).unwrap();
                    let a = mm.rho_pos(r).unwrap();
                    let inv_m = field.inv(mm.coeff_of_row(r))?;
                    combine_d_rows(self, &self.rbar().row(a)).scale(field, inv_m)
                }
                None => SparseVector::unit(i),
            },
            (Factor::C, Axis::Row) => match mm.kappa_pos(i) {
                Some(t) => {
                    let z = solve_left(&SparseVector::unit(t))?;
                    // κ part: z · M_ρκ
                    let zm: SparseVector = SparseVector::from_entries(
                        field,
                        z.iter()
                            .map(|(a, c)| {
                                let r = mm.rho()[a];
                                (mm.col_of_row(r).unwrap(), field.mul(c, mm.coeff_of_row(r)))
                            })
                            .collect(),
                    );
                    let tail = combine_d_rows(self, &times_rbar(self, &z))
                        .filter(|j| mm.kappa_pos(j).is_none())
                        .neg(field);
                    crate::matrix::add(field, &zm, &tail)
                }
                None => SparseVector::unit(i),
            },
            (Factor::Rinv, Axis::Column) => match mm.rho_pos(i) {
                Some(a) => {
                    let col = self.rbar().column(a);
                    let x = solve_right(&col)?;
                    let lower = combine_d_cols(self, &x)
                        .filter(|r| mm.rho_pos(r).is_none())
                        .neg(field);
                    crate::matrix::add(field, &lower, &self.lift_rho(&col))
                }
                None => SparseVector::unit(i),
            },
            (Factor::R, Axis::Column) => match mm.rho_pos(i) {
                Some(a) => {
                    let x = solve_right(&SparseVector::unit(a))?;
                    combine_d_cols(self, &x)
                }
                None => SparseVector::unit(i),
            },
            (Factor::Cinv, Axis::Column) => {
                let v = self.d().column(i).filter_map(|r| mm.rho_pos(r));
                let w = rbar_times(self, &v);
                let kap: SparseVector = SparseVector::from_entries(
                    field,
                    w.iter()
                        .map(|(a, c)| {
                            let r = mm.rho()[a];
                            (mm.col_of_row(r).unwrap(), field.div(c, mm.coeff_of_row(r)))
                        })
                        .collect(),
                );
                if mm.kappa_pos(i).is_none() {
                    add_unit(field, kap, i)
                } else {
                    kap
                }
            }
            (Factor::C, Axis::Column) => match mm.kappa_pos(i) {
                Some(_) => {
                    let r = mm.row_of_col(i).unwrap();
                    let b = SparseVector::from_sorted_unchecked(vec![(
                        mm.rho_pos(r).unwrap(),
                        mm.coeff_of_row(r),
                    )]);
                    self.lift_kappa(&solve_right(&b)?)
                }
                None => {
                    let v = self.d().column(i).filter_map(|r| mm.rho_pos(r));
                    let b = rbar_times(self, &v).scale(field, neg_one);
                    add_unit(field, self.lift_kappa(&solve_right(&b)?), i)
                }
            },
        };
        Ok((v, solves.get()))
    }

    /// Number of triangular solves `retrieve` performs for `t`.
    pub fn solve_count_audit(&self, t: RetrievalTarget) -> Result<usize> {
        self.retrieve_audited(t).map(|(_, s)| s)
    }
}

pub fn retrieve<D: MatrixOracle>(
    u: &CompressedUmatch<D>,
    t: RetrievalTarget,
) -> Result<SparseVector> {
    u.retrieve(t)
}

pub fn solve_count_audit<D: MatrixOracle>(
    u: &CompressedUmatch<D>,
    t: RetrievalTarget,
) -> Result<usize> {
    u.solve_count_audit(t)
}
