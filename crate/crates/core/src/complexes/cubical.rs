use std::sync::Arc;

use crate::coeff::Field;
use crate::error::{Result, UmatchError};
use crate::matrix::{MatrixOracle, SparseVector};

use super::{check_boundary_dim, CellId, DynOracle, FilteredComplex};

/// Cubical complex of a 2D or 3D image under the T-construction: every pixel
/// is a top cell and every lower cell enters with the earliest pixel whose
/// closure contains it.
///
/// Cells are addressed internally by doubled coordinates: along each axis
/// even values are vertex positions and odd values are open intervals.
#[derive(Clone, Debug)]
pub struct CubicalComplex {
    data: Arc<CubicalData>,
}

#[derive(Debug)]
struct CubicalData {
    field: Field,
    /// extents of the doubled grid, `2 d_a + 1`
    grid: Vec<usize>,
    /// per dimension, doubled-grid linear indices in filtration order
    cells: Vec<Vec<usize>>,
    births: Vec<Vec<f64>>,
    pos: Vec<u32>,
}

impl CubicalData {
    fn coords(&self, mut lin: usize) -> Vec<usize> {
        let mut c = vec![0; self.grid.len()];
        for a in (0..self.grid.len()).rev() {
            c[a] = lin % self.grid[a];
            lin /= self.grid[a];
        }
        c
    }

    fn stride(&self, a: usize) -> usize {
        self.grid[a + 1..].iter().product()
    }

    fn sign(&self, negative: bool) -> u32 {
        if negative {
            self.field.neg(1)
        } else {
            1
        }
    }

    fn faces(&self, dim: usize, p: usize) -> Vec<(usize, u32)> {
        let lin = self.cells[dim][p];
        let c = self.coords(lin);
        let mut out = Vec::with_capacity(2 * dim);
        let mut odd_before = 0;
        for (a, &x) in c.iter().enumerate() {
            if x % 2 == 1 {
                let s = self.stride(a);
                let flip = odd_before % 2 == 1;
                out.push((self.pos[lin - s] as usize, self.sign(!flip)));
                out.push((self.pos[lin + s] as usize, self.sign(flip)));
                odd_before += 1;
            }
        }
        out.sort_unstable_by_key(|e| e.0);
        out
    }

    fn cofaces(&self, dim: usize, p: usize) -> Vec<(usize, u32)> {
        let lin = self.cells[dim][p];
        let c = self.coords(lin);
        let mut out = Vec::new();
        let mut odd_before = 0;
        for (a, &x) in c.iter().enumerate() {
            if x % 2 == 0 {
                let s = self.stride(a);
                let flip = odd_before % 2 == 1;
                // this cell is the upper face of the coface below it
                if x > 0 {
                    out.push((self.pos[lin - s] as usize, self.sign(flip)));
                }
                if x + 1 < self.grid[a] {
                    out.push((self.pos[lin + s] as usize, self.sign(!flip)));
                }
            } else {
                odd_before += 1;
            }
        }
        out.sort_unstable_by_key(|e| e.0);
        out
    }
}

impl CubicalComplex {
    /// `values` are listed in row-major order (last axis fastest).
    pub fn new(field: Field, dims: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if !(1..=3).contains(&dims.len()) || dims.contains(&0) {
            return Err(UmatchError::Usage(format!(
                "unsupported image shape {dims:?}"
            )));
        }
        let npix: usize = dims.iter().product();
        if values.len() != npix {
            return Err(UmatchError::DimensionMismatch {
                expected: npix,
                found: values.len(),
            });
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(UmatchError::Usage(format!(
                "non-finite pixel value at index {}",
                k + 1
            )));
        }
        let k = dims.len();
        let grid: Vec<usize> = dims.iter().map(|d| 2 * d + 1).collect();
        let total: usize = grid.iter().product();
        let vgrid: Vec<usize> = dims.iter().map(|d| d + 1).collect();

        let mut keyed: Vec<Vec<(f64, usize, u8, usize)>> = vec![Vec::new(); k + 1];
        let mut c = vec![0usize; k];
        for lin in 0..total {
            let mut rem = lin;
            for a in (0..k).rev() {
                c[a] = rem % grid[a];
                rem /= grid[a];
            }
            let mut birth = f64::INFINITY;
            let mut pix = vec![0usize; k];
            let choices = c.iter().map(|&x| if x % 2 == 1 { 1 } else { 2 });
            let n_choices: usize = choices.clone().product();
            for mut sel in 0..n_choices {
                let mut ok = true;
                for a in 0..k {
                    if c[a] % 2 == 1 {
                        pix[a] = (c[a] - 1) / 2;
                    } else {
                        let lo = sel % 2 == 0;
                        sel /= 2;
                        if lo {
                            if c[a] == 0 {
                                ok = false;
                            } else {
                                pix[a] = c[a] / 2 - 1;
                            }
                        } else if c[a] / 2 >= dims[a] {
                            ok = false;
                        } else {
                            pix[a] = c[a] / 2;
                        }
                    }
                }
                if ok {
                    let idx = pix.iter().zip(&dims).fold(0, |acc, (p, d)| acc * d + p);
                    birth = birth.min(values[idx]);
                }
            }
            let extent = c
                .iter()
                .enumerate()
                .filter(|e| e.1 % 2 == 1)
                .fold(0u8, |m, (a, _)| m | (1 << a));
            let anchor = c.iter().zip(&vgrid).fold(0, |acc, (x, v)| acc * v + x / 2);
            let dim = extent.count_ones() as usize;
            keyed[dim].push((birth, anchor, extent, lin));
        }

        let mut pos = vec![0u32; total];
        let mut cells = Vec::with_capacity(k + 1);
        let mut births = Vec::with_capacity(k + 1);
        for mut layer in keyed {
            layer.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
            for (p, e) in layer.iter().enumerate() {
                pos[e.3] = p as u32;
            }
            births.push(layer.iter().map(|e| e.0).collect());
            cells.push(layer.into_iter().map(|e| e.3).collect());
        }
        Ok(CubicalComplex {
            data: Arc::new(CubicalData {
                field,
                grid,
                cells,
                births,
                pos,
            }),
        })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.data.grid.iter().map(|g| g / 2).collect()
    }
}

impl FilteredComplex for CubicalComplex {
    fn field(&self) -> Field {
        self.data.field
    }

    fn top_dim(&self) -> usize {
        self.data.grid.len()
    }

    fn max_homology_dim(&self) -> usize {
        self.top_dim()
    }

    fn num_cells(&self, dim: usize) -> usize {
        self.data.cells.get(dim).map_or(0, Vec::len)
    }

    fn birth(&self, dim: usize, pos: usize) -> f64 {
        self.data.births[dim][pos]
    }

    fn cell_id(&self, dim: usize, pos: usize) -> CellId {
        let c = self.data.coords(self.data.cells[dim][pos]);
        CellId::Cube {
            anchor: c.iter().map(|x| x / 2).collect(),
            extent: c
                .iter()
                .enumerate()
                .filter(|e| e.1 % 2 == 1)
                .fold(0u8, |m, (a, _)| m | (1 << a)),
        }
    }

    fn boundary(&self, n: usize) -> Result<DynOracle> {
        check_boundary_dim(n, self.top_dim())?;
        Ok(Arc::new(CubicalBoundary {
            data: self.data.clone(),
            n,
        }))
    }

    fn cheap_leading_entries(&self) -> bool {
        false
    }
}

/// `∂_n` of a cubical complex.
#[derive(Clone, Debug)]
pub struct CubicalBoundary {
    data: Arc<CubicalData>,
    n: usize,
}

impl MatrixOracle for CubicalBoundary {
    fn field(&self) -> Field {
        self.data.field
    }

    fn nrows(&self) -> usize {
        self.data.cells[self.n - 1].len()
    }

    fn ncols(&self) -> usize {
        self.data.cells[self.n].len()
    }

    fn row(&self, i: usize) -> SparseVector {
        SparseVector::from_sorted_unchecked(self.data.cofaces(self.n - 1, i))
    }

    fn column(&self, j: usize) -> SparseVector {
        SparseVector::from_sorted_unchecked(self.data.faces(self.n, j))
    }
}
