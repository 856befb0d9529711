use std::sync::Arc;
use std::time::Instant;

use anyhow::{ensure, Result};
use clap::ValueEnum;
use serde::Serialize;
use umatch::complexes::{
    datasets, CliqueComplex, CubicalComplex, DynOracle, FilteredComplex, Metric,
};
use umatch::matrix::{antitranspose_view, count_nnz, submatrix_view};
use umatch::persistence::{EngineOptions, PersistenceEngine};
use umatch::umatch::{decompose_compressed, decompose_full, DecomposeOptions, MatchingArray};
use umatch::{Field, MatrixOracle};

use crate::alloc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Dataset {
    Er,
    Uniform,
    Torus,
    Grf2d,
    Grf3d,
    Circle,
}

pub struct BenchArgs {
    pub dataset: Dataset,
    pub n: usize,
    pub dim: usize,
    pub side: usize,
    pub seed: u64,
    pub field: Field,
    pub boundary_dim: usize,
    pub pareto: bool,
    pub parallel: bool,
    pub verify: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRecord {
    pub dataset: String,
    pub variant: &'static str,
    pub nrows: usize,
    pub ncols: usize,
    pub nnz_d: usize,
    pub nnz_m: usize,
    pub nnz_rinv_offdiag: usize,
    pub nnz_rbar_offdiag: usize,
    pub time_ms: f64,
    pub peak_heap_bytes: usize,
    pub heap_source: &'static str,
    pub rows_visited: u64,
    pub rows_cleared: u64,
    pub pareto_shortcuts: u64,
    pub row_additions: u64,
    pub entries_merged: u64,
    pub h0_bars: usize,
    pub h1_bars: usize,
}

fn build(args: &BenchArgs) -> Result<(String, Arc<dyn FilteredComplex>)> {
    let f = args.field;
    let top = args.boundary_dim.max(2);
    let inf = f64::INFINITY;
    Ok(match args.dataset {
        Dataset::Er => (
            format!("er-n{}-s{}", args.n, args.seed),
            Arc::new(CliqueComplex::from_dissimilarity(
                f,
                &datasets::er(args.n, args.seed),
                top,
                inf,
            )?),
        ),
        Dataset::Uniform => (
            format!("uniform-n{}-d{}-s{}", args.n, args.dim, args.seed),
            Arc::new(CliqueComplex::from_points(
                f,
                &datasets::uniform(args.n, args.dim, args.seed),
                Metric::Euclidean,
                top,
                inf,
            )?),
        ),
        Dataset::Torus => (
            format!("torus-n{}-s{}", args.n, args.seed),
            Arc::new(CliqueComplex::from_points(
                f,
                &datasets::torus(args.n, args.seed),
                Metric::Torus,
                top,
                inf,
            )?),
        ),
        Dataset::Circle => (
            format!("circle-n{}", args.n),
            Arc::new(CliqueComplex::from_points(
                f,
                &datasets::circle(args.n),
                Metric::Euclidean,
                top,
                inf,
            )?),
        ),
        Dataset::Grf2d => (
            format!("grf2d-side{}-s{}", args.side, args.seed),
            Arc::new(CubicalComplex::new(
                f,
                vec![args.side; 2],
                datasets::grf2d(args.side, args.seed),
            )?),
        ),
        Dataset::Grf3d => (
            format!("grf3d-side{}-s{}", args.side, args.seed),
            Arc::new(CubicalComplex::new(
                f,
                vec![args.side; 3],
                datasets::grf3d(args.side, args.seed),
            )?),
        ),
    })
}

const VARIANTS: [&str; 4] = ["D", "D_perp", "D_rho_kappa", "D_rho_kappa_perp"];

struct Measured {
    nrows: usize,
    ncols: usize,
    nnz_d: usize,
    matching: MatchingArray,
    rbar_offdiag: usize,
    counters: umatch::umatch::OpCounters,
    time_ms: f64,
    peak: usize,
}

fn measure<D: MatrixOracle>(
    make: impl FnOnce() -> Result<D>,
    opts: &DecomposeOptions,
    shared: bool,
) -> Result<Measured> {
    let base = if shared { 0 } else { alloc::reset_peak() };
    let start = Instant::now();
    let d = make()?;
    let u = decompose_compressed(d, opts);
    let time_ms = start.elapsed().as_secs_f64() * 1e3;
    let peak = if shared { 0 } else { alloc::peak_since(base) };
    let counters = u.counters().clone();
    let (d, matching, rbar) = u.into_parts();
    Ok(Measured {
        nrows: d.nrows(),
        ncols: d.ncols(),
        nnz_d: count_nnz(&d),
        matching,
        rbar_offdiag: rbar.nnz_off_diagonal(),
        counters,
        time_ms,
        peak,
    })
}

fn full_rinv_offdiag<D: MatrixOracle>(d: D) -> usize {
    decompose_full(d).rinv().nnz_off_diagonal()
}

fn run_variant(
    v: &str,
    d: &DynOracle,
    mu: &MatchingArray,
    opts: &DecomposeOptions,
    shared: bool,
) -> Result<(Measured, usize)> {
    let (rho, kappa) = (mu.rho().to_vec(), mu.kappa().to_vec());
    Ok(match v {
        "D" => (
            measure(|| Ok(d.clone()), opts, shared)?,
            full_rinv_offdiag(d.clone()),
        ),
        "D_perp" => (
            measure(|| Ok(antitranspose_view(d.clone())), opts, shared)?,
            full_rinv_offdiag(antitranspose_view(d.clone())),
        ),
        "D_rho_kappa" => (
            measure(
                || Ok(submatrix_view(d.clone(), rho.clone(), kappa.clone())?),
                opts,
                shared,
            )?,
            full_rinv_offdiag(submatrix_view(d.clone(), rho.clone(), kappa.clone())?),
        ),
        _ => (
            measure(
                || {
                    Ok(antitranspose_view(submatrix_view(
                        d.clone(),
                        rho.clone(),
                        kappa.clone(),
                    )?))
                },
                opts,
                shared,
            )?,
            full_rinv_offdiag(antitranspose_view(submatrix_view(
                d.clone(),
                rho.clone(),
                kappa.clone(),
            )?)),
        ),
    })
}

pub fn run(args: &BenchArgs) -> Result<Vec<BenchRecord>> {
    let (name, complex) = build(args)?;
    let engine = PersistenceEngine::new(
        complex.clone(),
        EngineOptions {
            max_homology_dim: Some(1),
            ..Default::default()
        },
    )?;
    let barcode = engine.barcode();
    let (h0, h1) = (barcode.bars(0).len(), barcode.bars(1).len());

    let d = complex.boundary(args.boundary_dim)?;
    let opts = DecomposeOptions {
        pareto: args.pareto && complex.cheap_leading_entries(),
        clearing: None,
        count_ops: true,
    };
    // the pivot-block variants need the matching up front
    let mu = decompose_compressed(d.clone(), &opts).into_parts().1;

    let results: Vec<(Measured, usize)> = if args.parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = VARIANTS
                .iter()
                .map(|v| {
                    let (d, mu, opts) = (&d, &mu, &opts);
                    s.spawn(move || run_variant(v, d, mu, opts, true))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("bench thread panicked"))
                .collect::<Result<Vec<_>>>()
        })?
    } else {
        VARIANTS
            .iter()
            .map(|v| run_variant(v, &d, &mu, &opts, false))
            .collect::<Result<Vec<_>>>()?
    };

    if args.verify {
        let k = mu.len();
        for ((m, _), v) in results.iter().zip(VARIANTS) {
            ensure!(
                m.matching.len() == k,
                "variant {v}: {} pivots, expected {k}",
                m.matching.len()
            );
        }
        ensure!(
            results[1].0.matching.antitranspose().support() == mu.support(),
            "anti-transposed matching differs from the matching of D"
        );
        ensure!(
            results[0].0.matching.support() == mu.support(),
            "matching of D is not reproducible"
        );
    }

    Ok(results
        .into_iter()
        .zip(VARIANTS)
        .map(|((m, rinv), v)| BenchRecord {
            dataset: name.clone(),
            variant: v,
            nrows: m.nrows,
            ncols: m.ncols,
            nnz_d: m.nnz_d,
            nnz_m: m.matching.len(),
            nnz_rinv_offdiag: rinv,
            nnz_rbar_offdiag: m.rbar_offdiag,
            time_ms: m.time_ms,
            peak_heap_bytes: m.peak,
            heap_source: if args.parallel {
                "unavailable-parallel"
            } else {
                "allocator"
            },
            rows_visited: m.counters.rows_visited,
            rows_cleared: m.counters.rows_cleared,
            pareto_shortcuts: m.counters.pareto_shortcuts,
            row_additions: m.counters.row_additions,
            entries_merged: m.counters.entries_merged,
            h0_bars: h0,
            h1_bars: h1,
        })
        .collect())
}

pub fn to_csv(records: &[BenchRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
