//! WebAssembly bindings for the browser demo. Every export returns a JSON
//! string; failures come back as `{"error": "..."}`.

use std::sync::Arc;

use serde::Serialize;
use serde_json::json;
use umatch::complexes::{CellId, CliqueComplex, CubicalComplex, FilteredComplex, Metric};
use umatch::persistence::{Bar, EngineOptions, GeneratorStrategy, PersistenceEngine};
use umatch::Field;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct BarOut {
    dim: usize,
    birth: f64,
    death: Option<f64>,
}

fn bar_out(b: &Bar) -> BarOut {
    BarOut {
        dim: b.dim,
        birth: b.birth,
        death: b.death,
    }
}

fn respond(r: Result<serde_json::Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn points(coords: &[f64]) -> Result<Vec<Vec<f64>>, String> {
    if !coords.len().is_multiple_of(2) {
        return Err("coordinates must come in x, y pairs".into());
    }
    Ok(coords.chunks(2).map(|c| c.to_vec()).collect())
}

fn field(p: u32) -> Result<Field, String> {
    Field::new(p as u64).map_err(|e| e.to_string())
}

fn rips_engine(coords: &[f64], modulus: u32, threshold: f64) -> Result<PersistenceEngine, String> {
    let pts = points(coords)?;
    let threshold = if threshold > 0.0 {
        threshold
    } else {
        f64::INFINITY
    };
    let c = CliqueComplex::from_points(field(modulus)?, &pts, Metric::Euclidean, 2, threshold)
        .map_err(|e| e.to_string())?;
    PersistenceEngine::new(Arc::new(c), EngineOptions::default()).map_err(|e| e.to_string())
}

/// H0 and H1 barcode of a planar point cloud given as `[x0, y0, x1, y1, ...]`.
/// A non-positive `threshold` means no edge-length cutoff.
#[wasm_bindgen]
pub fn points_barcode(coords: Vec<f64>, modulus: u32, threshold: f64) -> String {
    respond(rips_engine(&coords, modulus, threshold).map(|e| {
        let bars: Vec<BarOut> = e.barcode().iter().map(bar_out).collect();
        json!({ "bars": bars })
    }))
}

/// Edges of a cycle representing the `k`-th H1 bar, as vertex index pairs
/// with coefficients.
#[wasm_bindgen]
pub fn loop_representative(coords: Vec<f64>, modulus: u32, threshold: f64, k: usize) -> String {
    respond((|| {
        let e = rips_engine(&coords, modulus, threshold)?;
        let bc = e.barcode();
        let bar = bc
            .bars(1)
            .get(k)
            .ok_or_else(|| format!("there is no H1 bar {k}"))?;
        let z = e
            .cycle_representative(bar, GeneratorStrategy::Exact)
            .map_err(|err| err.to_string())?;
        let edges: Vec<(u32, u32, u32)> = e
            .chain_entries(&z)
            .into_iter()
            .filter_map(|c| match c.cell {
                CellId::Simplex(v) if v.len() == 2 => Some((v[0], v[1], c.coeff)),
                _ => None,
            })
            .collect();
        Ok(json!({ "bar": bar_out(bar), "edges": edges }))
    })())
}

/// Sublevel-set barcode of a `width × height` grayscale image, row-major.
#[wasm_bindgen]
pub fn image_barcode(width: usize, height: usize, values: Vec<f64>, modulus: u32) -> String {
    respond((|| {
        let c = CubicalComplex::new(field(modulus)?, vec![height, width], values)
            .map_err(|e| e.to_string())?;
        let top = c.top_dim();
        let e = PersistenceEngine::new(Arc::new(c), EngineOptions::default())
            .map_err(|e| e.to_string())?;
        let bars: Vec<BarOut> = e
            .barcode()
            .iter()
            .filter(|b| b.dim < top)
            .map(bar_out)
            .collect();
        Ok(json!({ "bars": bars }))
    })())
}
