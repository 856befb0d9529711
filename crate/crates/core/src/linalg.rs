//! System solving, kernel coordinates, subspace bases, and conversions to
//! LU, echelon, and `R = DV` forms, all read off a U-match.

use serde::Serialize;

use crate::coeff::Field;
use crate::error::{Result, UmatchError};
use crate::lazy::{Axis, Factor, RetrievalTarget, Side};
use crate::matrix::{matvec, sub, vecmat, MatrixOracle, SparseVector, StoredCsMatrix};
use crate::umatch::{invert_upper_unitriangular, CompressedUmatch, FullUmatch, MatchingArray};

/// Outcome of a linear solve. An inconsistent system is a normal result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Solve {
    Solution(SparseVector),
    NoSolution,
}

impl Solve {
    pub fn solution(self) -> Option<SparseVector> {
        match self {
            Solve::Solution(x) => Some(x),
            Solve::NoSolution => None,
        }
    }
}

/// Solve `D x = b`. The returned `x` has the smallest possible maximum
/// support index among all solutions.
pub fn solve_dx_b<D: MatrixOracle>(u: &CompressedUmatch<D>, b: &SparseVector) -> Result<Solve> {
    let d = u.d();
    b.check_len(d.nrows())?;
    let mm = u.matching();
    let b_rho = b.filter_map(|r| mm.rho_pos(r));
    let rb = crate::matrix::matvec(u.rbar(), &b_rho)?;
    let x_kappa = u.solve_a(&rb)?;
    let kappa = mm.kappa();
    let x: SparseVector = x_kappa.iter().map(|(t, c)| (kappa[t], c)).collect();
    if &matvec(d, &x)? == b {
        Ok(Solve::Solution(x))
    } else {
        Ok(Solve::NoSolution)
    }
}

/// Solve `y D = c`. The returned `y` has the largest possible minimum
/// support index among all solutions.
pub fn solve_yd_c<D: MatrixOracle>(u: &CompressedUmatch<D>, c: &SparseVector) -> Result<Solve> {
    let d = u.d();
    c.check_len(d.ncols())?;
    let mm = u.matching();
    let c_kappa = c.filter_map(|j| mm.kappa_pos(j));
    let w = u.solve_a_left(&c_kappa)?;
    let y_rho = vecmat(&w, u.rbar())?;
    let rho = mm.rho();
    let y: SparseVector = y_rho.iter().map(|(a, v)| (rho[a], v)).collect();
    if &vecmat(&y, d)? == c {
        Ok(Solve::Solution(y))
    } else {
        Ok(Solve::NoSolution)
    }
}

/// Coordinates of a kernel vector in the kernel basis read off the U-match:
/// `C⁻¹ b` for `D b = 0` (`Side::Right`), or `b R` for `b D = 0`
/// (`Side::Left`). Both amount to clearing the matched coordinates.
pub fn kernel_coords<D: MatrixOracle>(
    u: &CompressedUmatch<D>,
    b: &SparseVector,
    side: Side,
) -> Result<SparseVector> {
    let mm = u.matching();
    match side {
        Side::Right => {
            if !matvec(u.d(), b)?.is_zero() {
                return Err(UmatchError::Usage(
                    "vector is not in the kernel of D".into(),
                ));
            }
            Ok(b.filter(|j| mm.kappa_pos(j).is_none()))
        }
        Side::Left => {
            if !vecmat(b, u.d())?.is_zero() {
                return Err(UmatchError::Usage(
                    "vector is not in the left kernel of D".into(),
                ));
            }
            Ok(b.filter(|i| mm.rho_pos(i).is_none()))
        }
    }
}

/// Which factor a basis draws its columns from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BasisFactor {
    /// columns of `C`, spanning subspaces of the domain
    C,
    /// columns of `R`, spanning subspaces of the codomain
    R,
}

/// Subspaces with bases made of columns of `C` or `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subspace {
    /// `F_q`: span of the first `q` domain basis vectors
    DomainPrefix(usize),
    /// `G_q`: span of the first `q` codomain basis vectors
    CodomainPrefix(usize),
    /// `D•G_p = {x : D x ∈ G_p}`; `p = 0` gives the kernel
    Pullback(usize),
    /// `D∘F_p = D(F_p)`; `p = n` gives the image
    Pushforward(usize),
    Meet(Box<Subspace>, Box<Subspace>),
    Join(Box<Subspace>, Box<Subspace>),
}

impl Subspace {
    pub fn meet(self, other: Subspace) -> Subspace {
        Subspace::Meet(Box::new(self), Box::new(other))
    }

    pub fn join(self, other: Subspace) -> Subspace {
        Subspace::Join(Box::new(self), Box::new(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubspaceBasis {
    pub factor: BasisFactor,
    /// sorted column indices of the factor
    pub generators: Vec<usize>,
    pub ambient: usize,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// The basis vectors, retrieved lazily from the decomposition.
    pub fn vectors<D: MatrixOracle>(&self, u: &CompressedUmatch<D>) -> Result<Vec<SparseVector>> {
        let which = match self.factor {
            BasisFactor::C => Factor::C,
            BasisFactor::R => Factor::R,
        };
        self.generators
            .iter()
            .map(|&g| u.retrieve(RetrievalTarget::new(which, Axis::Column, g)))
            .collect()
    }
}

fn combine(
    a: SubspaceBasis,
    b: SubspaceBasis,
    keep: impl Fn(bool, bool) -> bool,
) -> Result<SubspaceBasis> {
    if a.factor != b.factor {
        return Err(UmatchError::Usage(
            "cannot combine domain and codomain subspaces".into(),
        ));
    }
    let n = a.ambient;
    let mut in_a = vec![false; n];
    let mut in_b = vec![false; n];
    a.generators.iter().for_each(|&g| in_a[g] = true);
    b.generators.iter().for_each(|&g| in_b[g] = true);
    Ok(SubspaceBasis {
        factor: a.factor,
        generators: (0..n).filter(|&g| keep(in_a[g], in_b[g])).collect(),
        ambient: n,
    })
}

/// Basis for a subspace built from prefixes, pullbacks, pushforwards,
/// meets and joins. Every basis is a subset of the columns of one factor.
pub fn subspace_basis(mm: &MatchingArray, space: &Subspace) -> Result<SubspaceBasis> {
    let (m, n) = (mm.nrows(), mm.ncols());
    Ok(match space {
        Subspace::DomainPrefix(q) => SubspaceBasis {
            factor: BasisFactor::C,
            generators: (0..(*q).min(n)).collect(),
            ambient: n,
        },
        Subspace::CodomainPrefix(q) => SubspaceBasis {
            factor: BasisFactor::R,
            generators: (0..(*q).min(m)).collect(),
            ambient: m,
        },
        Subspace::Pullback(p) => SubspaceBasis {
            factor: BasisFactor::C,
            generators: (0..n)
                .filter(|&c| mm.row_of_col(c).is_none_or(|r| r < *p))
                .collect(),
            ambient: n,
        },
        Subspace::Pushforward(p) => SubspaceBasis {
            factor: BasisFactor::R,
            generators: mm
                .rho()
                .iter()
                .copied()
                .filter(|&r| mm.col_of_row(r).unwrap() < *p)
                .collect(),
            ambient: m,
        },
        Subspace::Meet(a, b) => combine(subspace_basis(mm, a)?, subspace_basis(mm, b)?, |x, y| {
            x && y
        })?,
        Subspace::Join(a, b) => combine(subspace_basis(mm, a)?, subspace_basis(mm, b)?, |x, y| {
            x || y
        })?,
    })
}

/// Factors with `L · P = N · U`, all `k × k`.
#[derive(Clone, Debug)]
pub struct LuFactors {
    /// lower unitriangular
    pub l: StoredCsMatrix,
    /// generalized permutation
    pub p: StoredCsMatrix,
    pub n: StoredCsMatrix,
    /// upper unitriangular
    pub u: StoredCsMatrix,
}

impl LuFactors {
    pub fn check(&self) -> bool {
        let lp = multiply(&self.l, &self.p);
        let nu = multiply(&self.n, &self.u);
        lp == nu
    }
}

/// Sparse product of two stored matrices, materialized.
pub fn multiply<A: MatrixOracle + ?Sized, B: MatrixOracle + ?Sized>(
    a: &A,
    b: &B,
) -> StoredCsMatrix {
    let rows = (0..a.nrows())
        .map(|i| vecmat(&a.row(i), b).expect("compatible shapes"))
        .collect();
    StoredCsMatrix::from_rows(a.field(), b.ncols(), rows).expect("product")
}

fn reverse_rows(m: &StoredCsMatrix) -> StoredCsMatrix {
    let k = m.nrows();
    let rows = (0..k).map(|i| m.row(k - 1 - i)).collect();
    StoredCsMatrix::from_rows(m.field(), m.ncols(), rows).expect("same shape")
}

fn reverse_cols(m: &StoredCsMatrix) -> StoredCsMatrix {
    let k = m.ncols();
    let rows = (0..m.nrows())
        .map(|i| m.row(i).reindex(|j| k - 1 - j))
        .collect();
    StoredCsMatrix::from_rows(m.field(), k, rows).expect("same shape")
}

/// LU factorization of the pivot block: `L = Q R_ρρ Q`, `P = Q M_ρκ`,
/// `N = Q D_ρκ`, `U = C_κκ`, with `Q` the exchange matrix.
pub fn to_lu<D: MatrixOracle>(u: &CompressedUmatch<D>) -> Result<LuFactors> {
    let field = u.field();
    let mm = u.matching();
    let k = mm.len();
    let r_rr = invert_upper_unitriangular(u.rbar());
    let m_rk: Vec<(usize, usize, i64)> = mm
        .pairs()
        .map(|(r, c, v)| (mm.rho_pos(r).unwrap(), mm.kappa_pos(c).unwrap(), v as i64))
        .collect();
    let m_rk = StoredCsMatrix::from_triplets(field, k, k, &m_rk)?;
    let d_rk = StoredCsMatrix::from_oracle(&crate::matrix::submatrix_view(
        u.d(),
        mm.rho().to_vec(),
        mm.kappa().to_vec(),
    )?);
    let mut u_rows = Vec::with_capacity(k);
    for &c in mm.kappa() {
        let row = u.retrieve(RetrievalTarget::new(Factor::C, Axis::Row, c))?;
        u_rows.push(row.filter_map(|j| mm.kappa_pos(j)));
    }
    Ok(LuFactors {
        l: reverse_cols(&reverse_rows(&r_rr)),
        p: reverse_rows(&m_rk),
        n: reverse_rows(&d_rk),
        u: StoredCsMatrix::from_rows(field, k, u_rows)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Row,
    Column,
}

/// Echelon form obtained by row operations (`E · R⁻¹ · D`) or column
/// operations (`D · C · E`). Each matched pair `(ρ_a, κ_t)` becomes an entry
/// `m_t` that is the only nonzero in its column (row form) or row (column form).
pub fn to_echelon<D: MatrixOracle>(
    u: &CompressedUmatch<D>,
    orientation: Orientation,
) -> Result<StoredCsMatrix> {
    let field = u.field();
    let mm = u.matching();
    let (m, n) = (u.d().nrows(), u.d().ncols());
    match orientation {
        Orientation::Row => {
            let mut rows = vec![SparseVector::new(); m];
            for (r, c, v) in mm.pairs() {
                let crow = u.retrieve(RetrievalTarget::new(Factor::C, Axis::Row, c))?;
                let tail = crow.filter(|j| mm.kappa_pos(j).is_none());
                rows[r] = sub(field, &SparseVector::unit(c), &tail).scale(field, v);
            }
            StoredCsMatrix::from_rows(field, n, rows)
        }
        Orientation::Column => {
            let mut cols = vec![SparseVector::new(); n];
            for (r, c, v) in mm.pairs() {
                let rcol = u.retrieve(RetrievalTarget::new(Factor::Rinv, Axis::Column, r))?;
                let tail = rcol.filter(|i| mm.rho_pos(i).is_none());
                cols[c] = sub(field, &SparseVector::unit(r), &tail).scale(field, v);
            }
            StoredCsMatrix::from_columns(field, m, cols)
        }
    }
}

/// A right-reduction `R_red = D · V`: `V` upper unitriangular and the nonzero
/// columns of `R_red` have distinct lowest nonzero rows.
#[derive(Clone, Debug)]
pub struct RdvDecomposition {
    pub r_reduced: StoredCsMatrix,
    pub v: StoredCsMatrix,
    /// lowest nonzero row of each column of `R_red`
    pub low: Vec<Option<usize>>,
}

impl RdvDecomposition {
    pub fn new(r_reduced: StoredCsMatrix, v: StoredCsMatrix) -> Result<Self> {
        let r_reduced = r_reduced.with_column_access();
        let low: Vec<Option<usize>> = (0..r_reduced.ncols())
            .map(|c| r_reduced.column(c).max_index())
            .collect();
        let mut seen = vec![false; r_reduced.nrows()];
        for &l in low.iter().flatten() {
            if std::mem::replace(&mut seen[l], true) {
                return Err(UmatchError::Usage(format!(
                    "two columns share low index {l}"
                )));
            }
        }
        Ok(RdvDecomposition { r_reduced, v, low })
    }
}

/// `R · M = D · C` is itself a right-reduction with `V = C`.
pub fn umatch_to_rdv<D: MatrixOracle>(u: &FullUmatch<D>) -> RdvDecomposition {
    let field = u.d().field();
    let mm = u.matching();
    let r = u.r();
    let cols = (0..mm.ncols())
        .map(|c| match mm.row_of_col(c) {
            Some(row) => r.column(row).scale(field, mm.coeff_of_col(c)),
            None => SparseVector::new(),
        })
        .collect();
    let r_red = StoredCsMatrix::from_columns(field, mm.nrows(), cols).expect("shape");
    RdvDecomposition::new(r_red, u.c()).expect("matched columns have distinct lows")
}

/// Turn a right-reduction of `d` into a U-match with `C = V`.
pub fn rdv_to_umatch<D: MatrixOracle>(d: D, rdv: &RdvDecomposition) -> Result<FullUmatch<D>> {
    let field: Field = d.field();
    let (m, n) = (d.nrows(), d.ncols());
    if rdv.v.nrows() != n || !rdv.v.is_upper_unitriangular() {
        return Err(UmatchError::Usage("V must be upper unitriangular".into()));
    }
    if rdv.r_reduced.nrows() != m || rdv.r_reduced.ncols() != n {
        return Err(UmatchError::DimensionMismatch {
            expected: m,
            found: rdv.r_reduced.nrows(),
        });
    }
    let mut pairs = Vec::new();
    let mut r_cols: Vec<SparseVector> = (0..m).map(SparseVector::unit).collect();
    for (c, low) in rdv.low.iter().enumerate() {
        if let Some(r) = *low {
            let col = rdv.r_reduced.column(c);
            let v = col.last().unwrap().1;
            pairs.push((r, c, v));
            r_cols[r] = col.scale(field, field.inv(v)?);
        }
    }
    let matching = MatchingArray::from_pairs(m, n, pairs)?;
    let r = StoredCsMatrix::from_columns(field, m, r_cols)?;
    if !r.is_upper_unitriangular() {
        return Err(UmatchError::Internal(
            "reduced columns do not give a triangular R".into(),
        ));
    }
    let rinv = invert_upper_unitriangular(&r);
    let cinv = invert_upper_unitriangular(&rdv.v);
    Ok(FullUmatch::from_parts(d, matching, rinv, cinv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense;
    use crate::matrix::to_dense;
    use crate::umatch::{decompose_compressed, decompose_full, DecomposeOptions};
    use proptest::prelude::*;

    fn f7() -> Field {
        Field::new(7).unwrap()
    }

    fn example_one() -> StoredCsMatrix {
        StoredCsMatrix::from_dense_i64(f7(), &[vec![3, -6], vec![3, -6]]).with_column_access()
    }

    /// Left-to-right column reduction `R = D V`.
    fn standard_algorithm(d: &StoredCsMatrix) -> RdvDecomposition {
        let f = d.field();
        let n = d.ncols();
        let mut cols: Vec<SparseVector> = (0..n).map(|c| d.column(c)).collect();
        let mut v: Vec<SparseVector> = (0..n).map(SparseVector::unit).collect();
        let mut owner: Vec<Option<usize>> = vec![None; d.nrows()];
        for c in 0..n {
            while let Some((low, val)) = cols[c].last() {
                match owner[low] {
                    Some(c2) => {
                        let lam = f.neg(f.div(val, cols[c2].last().unwrap().1));
                        cols[c] = crate::matrix::axpy(f, lam, &cols[c2].clone(), &cols[c]);
                        v[c] = crate::matrix::axpy(f, lam, &v[c2].clone(), &v[c]);
                    }
                    None => {
                        owner[low] = Some(c);
                        break;
                    }
                }
            }
        }
        RdvDecomposition::new(
            StoredCsMatrix::from_columns(f, d.nrows(), cols).unwrap(),
            StoredCsMatrix::from_columns(f, n, v).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn solve_examples() {
        let d = example_one();
        let u = decompose_compressed(&d, &DecomposeOptions::default());
        let b = SparseVector::from_dense(&[3, 3]);
        assert_eq!(
            solve_dx_b(&u, &b).unwrap(),
            Solve::Solution(SparseVector::unit(0))
        );
        assert_eq!(
            solve_dx_b(&u, &SparseVector::new()).unwrap(),
            Solve::Solution(SparseVector::new())
        );
        assert_eq!(
            solve_dx_b(&u, &SparseVector::unit(0)).unwrap(),
            Solve::NoSolution
        );
        let c = SparseVector::from_dense(&[3, 1]);
        let y = solve_yd_c(&u, &c).unwrap().solution().unwrap();
        assert_eq!(vecmat(&y, &d).unwrap(), c);
        assert_eq!(
            solve_yd_c(&u, &SparseVector::new()).unwrap(),
            Solve::Solution(SparseVector::new())
        );
    }

    #[test]
    fn kernel_coords_example() {
        let d = example_one();
        let u = decompose_compressed(&d, &DecomposeOptions::default());
        let b = SparseVector::from_dense(&[2, 1]);
        assert_eq!(
            kernel_coords(&u, &b, Side::Right).unwrap(),
            SparseVector::unit(1)
        );
        assert_eq!(
            kernel_coords(&u, &SparseVector::new(), Side::Right).unwrap(),
            SparseVector::new()
        );
        assert!(matches!(
            kernel_coords(&u, &SparseVector::unit(0), Side::Right),
            Err(UmatchError::Usage(_))
        ));
    }

    #[test]
    fn subspace_examples() {
        let d = example_one();
        let u = decompose_compressed(&d, &DecomposeOptions::default());
        let ker = subspace_basis(u.matching(), &Subspace::Pullback(0)).unwrap();
        assert_eq!(ker.generators, vec![1]);
        assert_eq!(ker.vectors(&u).unwrap()[0].to_dense(2), vec![2, 1]);
        let im = subspace_basis(u.matching(), &Subspace::Pushforward(2)).unwrap();
        assert_eq!(im.generators, vec![1]);
        assert_eq!(im.vectors(&u).unwrap()[0].to_dense(2), vec![1, 1]);
        let mixed = Subspace::Pullback(0).meet(Subspace::CodomainPrefix(1));
        assert!(subspace_basis(u.matching(), &mixed).is_err());
        let f0 = subspace_basis(u.matching(), &Subspace::DomainPrefix(0)).unwrap();
        assert_eq!(f0.dim(), 0);
    }

    #[test]
    fn lu_examples() {
        let u = decompose_compressed(example_one(), &DecomposeOptions::default());
        let lu = to_lu(&u).unwrap();
        assert_eq!(to_dense(&lu.l), vec![vec![1]]);
        assert_eq!(to_dense(&lu.p), vec![vec![3]]);
        assert_eq!(to_dense(&lu.n), vec![vec![3]]);
        assert_eq!(to_dense(&lu.u), vec![vec![1]]);
        assert!(lu.check());
        let id = StoredCsMatrix::identity(f7(), 3);
        let lu = to_lu(&decompose_compressed(&id, &DecomposeOptions::default())).unwrap();
        assert_eq!(to_dense(&lu.l), dense::identity(3));
        assert_eq!(to_dense(&lu.u), dense::identity(3));
        let exchange = vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]];
        assert_eq!(to_dense(&lu.p), exchange);
        assert_eq!(to_dense(&lu.n), exchange);
    }

    #[test]
    fn echelon_examples() {
        let u = decompose_compressed(example_one(), &DecomposeOptions::default());
        let e = to_echelon(&u, Orientation::Row).unwrap();
        assert_eq!(to_dense(&e), vec![vec![0, 0], vec![3, 1]]);
        let e = to_echelon(&u, Orientation::Column).unwrap();
        assert_eq!(to_dense(&e), vec![vec![3, 0], vec![3, 0]]);
        let id = StoredCsMatrix::identity(f7(), 3);
        let e = to_echelon(
            &decompose_compressed(&id, &DecomposeOptions::default()),
            Orientation::Row,
        )
        .unwrap();
        assert_eq!(to_dense(&e), dense::identity(3));
    }

    #[test]
    fn rdv_examples() {
        let d = example_one();
        let rdv = umatch_to_rdv(&decompose_full(&d));
        assert_eq!(to_dense(&rdv.r_reduced), vec![vec![3, 0], vec![3, 0]]);
        assert_eq!(rdv.low, vec![Some(1), None]);
        let diag = StoredCsMatrix::from_dense(f7(), &[vec![2, 0], vec![0, 5]]);
        let rdv = umatch_to_rdv(&decompose_full(&diag));
        assert_eq!(to_dense(&rdv.r_reduced), to_dense(&diag));
        assert_eq!(to_dense(&rdv.v), dense::identity(2));
        let bad = RdvDecomposition::new(
            diag.clone(),
            StoredCsMatrix::from_dense(f7(), &[vec![2, 0], vec![0, 1]]),
        )
        .unwrap();
        assert!(matches!(
            rdv_to_umatch(&diag, &bad),
            Err(UmatchError::Usage(_))
        ));
    }

    fn arb_matrix(p: u64) -> impl Strategy<Value = StoredCsMatrix> {
        (1usize..8, 1usize..9).prop_flat_map(move |(m, n)| {
            proptest::collection::vec(prop_oneof![3 => Just(0u32), 2 => 1u32..7], m * n).prop_map(
                move |vals| {
                    let f = Field::new(p).unwrap();
                    let dense: Vec<Vec<u32>> = (0..m)
                        .map(|i| {
                            vals[i * n..(i + 1) * n]
                                .iter()
                                .map(|&c| c % f.modulus())
                                .collect()
                        })
                        .collect();
                    StoredCsMatrix::from_dense(f, &dense).with_column_access()
                },
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dual_kernels_and_lattice(d in arb_matrix(7)) {
            let f = d.field();
            let (m, n) = (d.nrows(), d.ncols());
            let full = decompose_full(&d);
            let u = decompose_compressed(&d, &DecomposeOptions::default());
            let dd = to_dense(&d);
            let c = to_dense(&full.c());
            let cinv = to_dense(full.cinv());
            let r = to_dense(&full.r());
            for kv in dense::kernel(f, &dd, n) {
                let b = SparseVector::from_dense(&kv);
                let got = kernel_coords(&u, &b, Side::Right).unwrap();
                prop_assert_eq!(got.to_dense(n), dense::mat_vec(f, &cinv, &kv));
            }
            for kv in dense::kernel(f, &dense::transpose(&dd, n), m) {
                let b = SparseVector::from_dense(&kv);
                let got = kernel_coords(&u, &b, Side::Left).unwrap();
                prop_assert_eq!(got.to_dense(m), dense::mat_vec(f, &dense::transpose(&r, m), &kv));
            }
            // pullbacks/pushforwards against dense constructions
            for p in 0..=m.max(n) {
                let pb = subspace_basis(u.matching(), &Subspace::Pullback(p)).unwrap();
                let vecs: Vec<Vec<u32>> = pb.generators.iter().map(|&g| c.iter().map(|row| row[g]).collect()).collect();
                for v in &vecs {
                    let dv = dense::mat_vec(f, &dd, v);
                    prop_assert!(dv.iter().skip(p).all(|&x| x == 0));
                }
                // dimension of {x : D x ∈ G_p} = n - rank(D restricted to rows >= p)
                let rows: Vec<usize> = (p.min(m)..m).collect();
                let cols: Vec<usize> = (0..n).collect();
                prop_assert_eq!(pb.dim(), n - dense::rank_of(f, &dd, &rows, &cols));
                prop_assert_eq!(dense::rank(f, &vecs), vecs.len());

                let pf = subspace_basis(u.matching(), &Subspace::Pushforward(p)).unwrap();
                let cols: Vec<usize> = (0..p.min(n)).collect();
                let all_rows: Vec<usize> = (0..m).collect();
                prop_assert_eq!(pf.dim(), dense::rank_of(f, &dd, &all_rows, &cols));
                let image: Vec<Vec<u32>> = cols.iter().map(|&j| dd.iter().map(|row| row[j]).collect()).collect();
                for v in pf.vectors(&u).unwrap() {
                    prop_assert!(dense::in_span(f, &image, &v.to_dense(m)));
                }
                for q in 0..=n {
                    let meet = subspace_basis(u.matching(), &Subspace::DomainPrefix(q).meet(Subspace::Pullback(p))).unwrap();
                    let lhs: Vec<usize> = (0..q.min(n)).collect();
                    let rows: Vec<usize> = (p.min(m)..m).collect();
                    // dim(F_q ∩ D•G_p) = q - rank(D[rows >= p, cols < q])
                    prop_assert_eq!(meet.dim(), lhs.len() - dense::rank_of(f, &dd, &rows, &lhs));
                }
            }
        }

        #[test]
        fn bridges(d in arb_matrix(7)) {
            let u = decompose_compressed(&d, &DecomposeOptions::default());
            let lu = to_lu(&u).unwrap();
            prop_assert!(lu.check());
            prop_assert!(dense::is_upper_unitriangular(&to_dense(&lu.u)));
            let l = to_dense(&lu.l);
            let k = l.len();
            prop_assert!(dense::is_upper_unitriangular(&dense::transpose(&l, k)));
            for i in 0..k {
                prop_assert_eq!(lu.p.row(i).nnz(), 1);
                prop_assert_eq!(lu.p.column(i).nnz(), 1);
            }
            for o in [Orientation::Row, Orientation::Column] {
                let e = to_echelon(&u, o).unwrap();
                let (e, lowest) = match o {
                    Orientation::Row => (to_dense(&e), false),
                    Orientation::Column => (dense::transpose(&to_dense(&e), d.ncols()), true),
                };
                prop_assert!(reduced_form(&e, lowest));
                prop_assert_eq!(dense::rank(d.field(), &e), u.matching().len());
            }
            // row space (resp. column space) is preserved
            let e = to_dense(&to_echelon(&u, Orientation::Row).unwrap());
            let dd = to_dense(&d);
            for row in &e {
                prop_assert!(dense::in_span(d.field(), &dd, row));
            }

            let rdv = standard_algorithm(&d);
            let back = rdv_to_umatch(&d, &rdv).unwrap();
            let full = decompose_full(&d);
            prop_assert_eq!(back.matching(), full.matching());
            let f = d.field();
            let n = d.ncols();
            let rm = dense::mul(f, &to_dense(&back.r()), &to_dense(&back.matching().to_matrix(f)), n);
            prop_assert_eq!(rm, dense::mul(f, &to_dense(&d), &to_dense(&back.c()), n));
            let again = umatch_to_rdv(&back);
            prop_assert_eq!(to_dense(&again.v), to_dense(&rdv.v));
            prop_assert_eq!(to_dense(&again.r_reduced), to_dense(&rdv.r_reduced));
        }

        #[test]
        fn solver_extremality_gf2(d in arb_matrix(2), seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let f = d.field();
            let (m, n) = (d.nrows(), d.ncols());
            let dd = to_dense(&d);
            let u = decompose_compressed(&d, &DecomposeOptions::default());
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let x0: Vec<u32> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let b = dense::mat_vec(f, &dd, &x0);
            let x = solve_dx_b(&u, &SparseVector::from_dense(&b)).unwrap().solution().unwrap();
            prop_assert_eq!(dense::mat_vec(f, &dd, &x.to_dense(n)), b.clone());
            let best = (0u32..1 << n)
                .map(|mask| (0..n).map(|j| (mask >> j) & 1).collect::<Vec<u32>>())
                .filter(|v| dense::mat_vec(f, &dd, v) == b)
                .map(|v| v.iter().rposition(|&c| c != 0))
                .min()
                .unwrap();
            prop_assert_eq!(x.max_index(), best);

            let y0: Vec<u32> = (0..m).map(|_| rng.gen_range(0..2)).collect();
            let dt = dense::transpose(&dd, n);
            let c = dense::mat_vec(f, &dt, &y0);
            let y = solve_yd_c(&u, &SparseVector::from_dense(&c)).unwrap().solution().unwrap();
            prop_assert_eq!(dense::mat_vec(f, &dt, &y.to_dense(m)), c.clone());
            let best = (0u32..1 << m)
                .map(|mask| (0..m).map(|j| (mask >> j) & 1).collect::<Vec<u32>>())
                .filter(|v| dense::mat_vec(f, &dt, v) == c)
                .map(|v| v.iter().position(|&c| c != 0).unwrap_or(usize::MAX))
                .max()
                .unwrap();
            prop_assert_eq!(y.min_index().unwrap_or(usize::MAX), best);
        }
    }

    /// Nonzero rows have leading (or lowest) entries in distinct columns, and
    /// each such column has no other nonzero.
    fn reduced_form(e: &dense::Dense, lowest: bool) -> bool {
        let mut used = std::collections::HashSet::new();
        for row in e {
            let pivot = if lowest {
                row.iter().rposition(|&x| x != 0)
            } else {
                row.iter().position(|&x| x != 0)
            };
            if let Some(lead) = pivot {
                if !used.insert(lead) || e.iter().filter(|r| r[lead] != 0).count() != 1 {
                    return false;
                }
            }
        }
        true
    }
}
