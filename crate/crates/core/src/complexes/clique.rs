use std::collections::HashMap;
use std::sync::Arc;

use crate::coeff::Field;
use crate::error::{Result, UmatchError};
use crate::matrix::{MatrixOracle, SparseVector};

use super::{check_boundary_dim, CellId, DynOracle, FilteredComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
    /// quotient metric of the flat unit torus: `min_z ‖x − (y + z)‖`, `z ∈ {−1,0,1}^d`
    Torus,
}

impl Metric {
    pub fn distance(self, x: &[f64], y: &[f64]) -> f64 {
        x.iter()
            .zip(y)
            .map(|(a, b)| {
                let d = (a - b).abs();
                let d = match self {
                    Metric::Euclidean => d,
                    Metric::Torus => d.min((d - 1.0).abs()).min(d + 1.0),
                };
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Debug)]
struct Layer {
    /// vertex tuples, `dim + 1` entries each, concatenated
    verts: Vec<u32>,
    births: Vec<f64>,
    index: HashMap<u64, u32>,
}

impl Layer {
    fn simplex(&self, dim: usize, pos: usize) -> &[u32] {
        &self.verts[pos * (dim + 1)..(pos + 1) * (dim + 1)]
    }
}

#[derive(Debug)]
struct CliqueData {
    field: Field,
    dist: Vec<f64>,
    n: usize,
    binom: Vec<Vec<u64>>,
    layers: Vec<Layer>,
}

impl CliqueData {
    fn d(&self, u: u32, v: u32) -> f64 {
        self.dist[u as usize * self.n + v as usize]
    }

    fn rank(&self, verts: &[u32]) -> u64 {
        verts
            .iter()
            .enumerate()
            .map(|(k, &v)| self.binom[v as usize][k + 1])
            .sum()
    }

    fn lookup(&self, dim: usize, verts: &[u32]) -> Option<usize> {
        self.layers
            .get(dim)?
            .index
            .get(&self.rank(verts))
            .map(|&p| p as usize)
    }

    fn sign(&self, k: usize) -> u32 {
        if k.is_multiple_of(2) {
            1
        } else {
            self.field.neg(1)
        }
    }

    /// `(coface position, coefficient)` for every coface of `(dim)`-simplex `pos`.
    fn cofaces(&self, dim: usize, pos: usize) -> impl Iterator<Item = (usize, u32)> + '_ {
        let s = self.layers[dim].simplex(dim, pos);
        let mut buf = Vec::with_capacity(dim + 2);
        (0..self.n as u32).filter_map(move |v| {
            if s.contains(&v) {
                return None;
            }
            let k = s.partition_point(|&u| u < v);
            buf.clear();
            buf.extend_from_slice(&s[..k]);
            buf.push(v);
            buf.extend_from_slice(&s[k..]);
            let p = self.lookup(dim + 1, &buf)?;
            Some((p, self.sign(k)))
        })
    }

    fn faces(&self, dim: usize, pos: usize) -> Vec<(usize, u32)> {
        let s = self.layers[dim].simplex(dim, pos);
        let mut buf = Vec::with_capacity(dim);
        (0..=dim)
            .map(|k| {
                buf.clear();
                buf.extend(s.iter().enumerate().filter(|e| e.0 != k).map(|e| *e.1));
                let p = self.lookup(dim - 1, &buf).expect("faces precede cofaces");
                (p, self.sign(k))
            })
            .collect()
    }
}

/// Vietoris–Rips complex of a dissimilarity matrix, truncated at `max_dim`
/// and at a filtration threshold.
#[derive(Clone, Debug)]
pub struct CliqueComplex {
    data: Arc<CliqueData>,
}

impl CliqueComplex {
    pub fn from_points(
        field: Field,
        points: &[Vec<f64>],
        metric: Metric,
        max_dim: usize,
        threshold: f64,
    ) -> Result<Self> {
        let dist: Vec<Vec<f64>> = points
            .iter()
            .map(|x| points.iter().map(|y| metric.distance(x, y)).collect())
            .collect();
        Self::from_dissimilarity(field, &dist, max_dim, threshold)
    }

    pub fn from_dissimilarity(
        field: Field,
        dist: &[Vec<f64>],
        max_dim: usize,
        threshold: f64,
    ) -> Result<Self> {
        let n = dist.len();
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(UmatchError::Usage(format!(
                    "dissimilarity row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(UmatchError::Usage(format!(
                        "non-finite dissimilarity at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
                if v != dist[j][i] {
                    return Err(UmatchError::Usage(format!(
                        "dissimilarity is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let flat: Vec<f64> = dist.iter().flatten().copied().collect();
        let binom = binomials(n, max_dim + 2);
        let mut data = CliqueData {
            field,
            dist: flat,
            n,
            binom,
            layers: Vec::new(),
        };

        let mut cells: Vec<(f64, Vec<u32>)> = (0..n as u32)
            .map(|v| (data.d(v, v), vec![v]))
            .filter(|c| c.0 <= threshold)
            .collect();
        for dim in 0..=max_dim {
            cells.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
            let layer = Layer {
                verts: cells.iter().flat_map(|c| c.1.iter().copied()).collect(),
                births: cells.iter().map(|c| c.0).collect(),
                index: cells
                    .iter()
                    .enumerate()
                    .map(|(p, c)| (data.rank(&c.1), p as u32))
                    .collect(),
            };
            let next: Vec<(f64, Vec<u32>)> = if dim < max_dim {
                cells
                    .iter()
                    .flat_map(|(b, s)| {
                        let last = *s.last().unwrap();
                        let data = &data;
                        (last + 1..n as u32).filter_map(move |v| {
                            let birth = s
                                .iter()
                                .map(|&u| data.d(u, v))
                                .fold(b.max(data.d(v, v)), f64::max);
                            (birth <= threshold).then(|| {
                                let mut t = s.clone();
                                t.push(v);
                                (birth, t)
                            })
                        })
                    })
                    .collect()
            } else {
                Vec::new()
            };
            data.layers.push(layer);
            cells = next;
        }
        Ok(CliqueComplex {
            data: Arc::new(data),
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.data.n
    }

    pub fn simplex(&self, dim: usize, pos: usize) -> &[u32] {
        self.data.layers[dim].simplex(dim, pos)
    }

    pub fn position(&self, verts: &[u32]) -> Option<usize> {
        if verts.is_empty() {
            return None;
        }
        self.data.lookup(verts.len() - 1, verts)
    }

    /// For row `i` of `∂_n`: the minimal coface `j`, provided `i` is the last
    /// face of `j`. Then `(i, j)` is a pivot no lower row can disturb.
    pub fn leading_entry_shortcut(&self, n: usize, i: usize) -> Option<(usize, u32)> {
        let data = &self.data;
        if n == 0 || n > self.top_dim() {
            return None;
        }
        let (j, c) = data.cofaces(n - 1, i).min_by_key(|e| e.0)?;
        let last_face = data.faces(n, j).into_iter().map(|e| e.0).max();
        (last_face == Some(i)).then_some((j, c))
    }
}

fn binomials(n: usize, k: usize) -> Vec<Vec<u64>> {
    let mut b = vec![vec![0u64; k + 1]; n + 1];
    for v in 0..=n {
        b[v][0] = 1;
        for j in 1..=k.min(v) {
            b[v][j] = b[v - 1][j - 1] + if j < v { b[v - 1][j] } else { 0 };
        }
    }
    b
}

impl FilteredComplex for CliqueComplex {
    fn field(&self) -> Field {
        self.data.field
    }

    fn top_dim(&self) -> usize {
        self.data.layers.len() - 1
    }

    fn max_homology_dim(&self) -> usize {
        self.top_dim().saturating_sub(1)
    }

    fn num_cells(&self, dim: usize) -> usize {
        self.data.layers.get(dim).map_or(0, |l| l.births.len())
    }

    fn birth(&self, dim: usize, pos: usize) -> f64 {
        self.data.layers[dim].births[pos]
    }

    fn cell_id(&self, dim: usize, pos: usize) -> CellId {
        CellId::Simplex(self.simplex(dim, pos).to_vec())
    }

    fn boundary(&self, n: usize) -> Result<DynOracle> {
        check_boundary_dim(n, self.top_dim())?;
        Ok(Arc::new(CliqueBoundary {
            data: self.data.clone(),
            n,
        }))
    }

    fn cheap_leading_entries(&self) -> bool {
        true
    }
}

/// `∂_n` of a clique complex: rows from a coface iterator, columns from a
/// face iterator.
#[derive(Clone, Debug)]
pub struct CliqueBoundary {
    data: Arc<CliqueData>,
    n: usize,
}

impl MatrixOracle for CliqueBoundary {
    fn field(&self) -> Field {
        self.data.field
    }

    fn nrows(&self) -> usize {
        self.data.layers[self.n - 1].births.len()
    }

    fn ncols(&self) -> usize {
        self.data.layers[self.n].births.len()
    }

    fn row(&self, i: usize) -> SparseVector {
        let mut e: Vec<(usize, u32)> = self.data.cofaces(self.n - 1, i).collect();
        e.sort_unstable_by_key(|x| x.0);
        SparseVector::from_sorted_unchecked(e)
    }

    fn column(&self, j: usize) -> SparseVector {
        let mut e = self.data.faces(self.n, j);
        e.sort_unstable_by_key(|x| x.0);
        SparseVector::from_sorted_unchecked(e)
    }

    fn leading_entry(&self, i: usize) -> Option<(usize, u32)> {
        self.data.cofaces(self.n - 1, i).min_by_key(|e| e.0)
    }
}
