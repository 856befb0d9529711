mod alloc;
mod bench;
mod input;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use umatch::complexes::{CellId, FilteredComplex, Metric};
use umatch::lazy::{Axis, Factor, RetrievalTarget};
use umatch::matrix::triplet::{parse_triplets, write_triplets};
use umatch::matrix::{matvec, MatrixOracle};
use umatch::persistence::{
    Bar, Bounding, Chain, EngineOptions, GeneratorRecord, GeneratorStrategy, PersistenceEngine,
};
use umatch::umatch::{
    decompose_compressed, decompose_full, CompressedUmatch, DecomposeOptions, MatchingArray,
};
use umatch::{Field, SparseVector, StoredCsMatrix};

use input::ComplexArgs;

#[global_allocator]
static GLOBAL: alloc::Counting = alloc::Counting;

#[derive(Parser)]
#[command(
    name = "umatch",
    version,
    about = "U-match factorization and persistent homology"
)]
struct Cli {
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Re-check every result against its defining identity before exiting.
    #[arg(long, global = true)]
    verify: bool,
    /// Run independent pieces of work on separate threads.
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Factor a triplet-format matrix and print its matching and pivot block inverse.
    Decompose { file: String },
    /// Persistence barcode of a point cloud, distance matrix or image.
    Barcode {
        input: String,
        #[command(flatten)]
        cx: ComplexFlags,
    },
    /// Bars with cycle representatives.
    Generators {
        input: String,
        /// Only this homology dimension.
        dim: Option<usize>,
        #[command(flatten)]
        cx: ComplexFlags,
        #[arg(long, value_enum, default_value = "exact")]
        generators_strategy: Strategy,
    },
    /// Answer a single linear-algebra or homology question.
    Query {
        #[command(subcommand)]
        q: Query,
    },
    /// Benchmark the four standard matrix variants of the second boundary matrix.
    Bench {
        #[arg(value_enum)]
        dataset: bench::Dataset,
        #[arg(long, default_value_t = 25)]
        n: usize,
        /// Ambient dimension for `uniform`.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Grid side for `grf2d` and `grf3d`.
        #[arg(long, default_value_t = 8)]
        side: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        field: u64,
        #[arg(long)]
        no_pareto: bool,
    },
}

#[derive(Subcommand)]
enum Query {
    /// Earliest chain bounding a cycle.
    BoundingChain {
        input: String,
        chain: String,
        #[command(flatten)]
        cx: ComplexFlags,
    },
    /// First value at which two cycles become homologous.
    TimeOfHomology {
        input: String,
        x: String,
        f: String,
        #[command(flatten)]
        cx: ComplexFlags,
    },
    /// Birth and death of a cycle.
    Lifespan {
        input: String,
        chain: String,
        #[command(flatten)]
        cx: ComplexFlags,
    },
    /// A row or column of R, R^-1, C or C^-1. INPUT is a triplet matrix or
    /// a complex, in which case DIM selects the boundary matrix.
    Retrieve {
        input: String,
        #[arg(value_enum)]
        factor: FactorArg,
        #[arg(value_enum)]
        axis: AxisArg,
        index: usize,
        dim: Option<usize>,
        #[command(flatten)]
        cx: ComplexFlags,
    },
}

#[derive(Args, Clone)]
struct ComplexFlags {
    /// Prime coefficient field.
    #[arg(long, default_value_t = 2)]
    field: u64,
    /// Highest homology dimension.
    #[arg(long, default_value_t = 1)]
    max_dim: usize,
    /// Drop edges longer than this.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, value_enum, default_value = "euclidean")]
    metric: MetricArg,
    #[arg(long)]
    keep_empty_bars: bool,
    #[arg(long)]
    no_clearing: bool,
    #[arg(long)]
    no_pareto: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Euclidean,
    Torus,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Exact,
    EarlyStop,
}

#[derive(Clone, Copy, ValueEnum)]
enum FactorArg {
    R,
    Rinv,
    C,
    Cinv,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    Row,
    Column,
}

fn field(p: u64) -> Result<Field> {
    Field::new(p).map_err(|e| anyhow!("--field: {e}"))
}

impl ComplexFlags {
    fn engine(&self, input: &str) -> Result<PersistenceEngine> {
        let args = ComplexArgs {
            field: field(self.field)?,
            max_homology_dim: self.max_dim,
            threshold: self.threshold.unwrap_or(f64::INFINITY),
            metric: match self.metric {
                MetricArg::Euclidean => Metric::Euclidean,
                MetricArg::Torus => Metric::Torus,
            },
        };
        let complex = input::load_complex(input, &args)?;
        let opts = EngineOptions {
            max_homology_dim: Some(self.max_dim),
            clearing: !self.no_clearing,
            pareto: !self.no_pareto,
            keep_empty_bars: self.keep_empty_bars,
        };
        Ok(PersistenceEngine::new(complex, opts)?)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(out: &Option<PathBuf>, v: &impl Serialize) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    emit(out, &s)
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    let Cli {
        output,
        verify,
        parallel,
        cmd,
    } = cli;
    match cmd {
        Cmd::Decompose { file } => decompose(&file, &output, verify),
        Cmd::Barcode { input, cx } => barcode(&input, &cx, &output, verify),
        Cmd::Generators {
            input,
            dim,
            cx,
            generators_strategy,
        } => generators(
            &input,
            dim,
            &cx,
            generators_strategy,
            &output,
            verify,
            parallel,
        ),
        Cmd::Query { q } => query(q, &output, verify),
        Cmd::Bench {
            dataset,
            n,
            dim,
            side,
            seed,
            field: p,
            no_pareto,
        } => {
            let args = bench::BenchArgs {
                dataset,
                n,
                dim,
                side,
                seed,
                field: field(p)?,
                boundary_dim: 2,
                pareto: !no_pareto,
                parallel,
                verify,
            };
            let records = bench::run(&args)?;
            emit(&output, &bench::to_csv(&records)?)
        }
    }
}

// ---- decompose ----

fn matching_triplets(m: &MatchingArray, modulus: u32) -> String {
    let mut s = format!("{} {} {}\n", m.nrows(), m.ncols(), modulus);
    for (r, c, v) in m.pairs() {
        s.push_str(&format!("{} {} {}\n", r + 1, c + 1, v));
    }
    s
}

/// Check `R·M = D·C` one column at a time through lazy retrieval.
fn check_identity<D: MatrixOracle>(u: &CompressedUmatch<D>) -> Result<()> {
    let f = u.field();
    let m = u.matching();
    for j in 0..m.ncols() {
        let lhs = match m.row_of_col(j) {
            Some(r) => u
                .retrieve(RetrievalTarget::new(Factor::R, Axis::Column, r))?
                .scale(f, m.coeff_of_col(j)),
            None => SparseVector::new(),
        };
        let cj = u.retrieve(RetrievalTarget::new(Factor::C, Axis::Column, j))?;
        let rhs = matvec(u.d(), &cj)?;
        ensure!(lhs == rhs, "R·M and D·C differ in column {}", j + 1);
    }
    Ok(())
}

fn decompose(file: &str, out: &Option<PathBuf>, verify: bool) -> Result<()> {
    let d = input::load_matrix(file)?;
    let f = d.field();
    let opts = DecomposeOptions {
        count_ops: true,
        ..Default::default()
    };
    let u = decompose_compressed(d.clone(), &opts);
    let m = u.matching();
    let mtext = matching_triplets(m, f.modulus());
    let rtext = write_triplets(u.rbar());

    if verify {
        let reloaded_m = parse_triplets(&mtext)?;
        let pairs = (0..reloaded_m.nrows())
            .flat_map(|i| {
                reloaded_m
                    .row(i)
                    .iter()
                    .map(move |(j, v)| (i, j, v))
                    .collect::<Vec<_>>()
            })
            .collect();
        let mm = MatchingArray::from_pairs(reloaded_m.nrows(), reloaded_m.ncols(), pairs)?;
        let rbar = parse_triplets(&rtext)?;
        let v = CompressedUmatch::from_parts(d.clone(), mm, rbar)?;
        check_identity(&v)?;
        eprintln!("verify: R·M = D·C holds in all {} columns", d.ncols());
    }

    let pairs: Vec<[u64; 3]> = m
        .pairs()
        .map(|(r, c, v)| [r as u64 + 1, c as u64 + 1, v as u64])
        .collect();
    let doc = json!({
        "rows": d.nrows(),
        "cols": d.ncols(),
        "field": f.modulus(),
        "k": m.len(),
        "nnz_d": d.nnz(),
        "nnz_rbar_offdiag": u.rbar().nnz_off_diagonal(),
        "pairs": pairs,
        "counters": u.counters(),
        "matching_triplets": mtext,
        "rbar_triplets": rtext,
    });
    if let Some(p) = out {
        let side = |ext: &str| {
            let mut s = p.clone().into_os_string();
            s.push(ext);
            PathBuf::from(s)
        };
        write_file(&side(".matching.txt"), &mtext)?;
        write_file(&side(".rbar.txt"), &rtext)?;
    }
    emit_json(out, &doc)
}

fn write_file(p: &Path, text: &str) -> Result<()> {
    std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))
}

// ---- barcode and generators ----

#[derive(Serialize)]
struct BarJson {
    dim: usize,
    birth: f64,
    death: Option<f64>,
    birth_cell: CellId,
    death_cell: Option<CellId>,
}

fn bar_json(e: &PersistenceEngine, b: &Bar) -> BarJson {
    BarJson {
        dim: b.dim,
        birth: b.birth,
        death: b.death,
        birth_cell: e.cell_id(b.dim, b.birth_cell),
        death_cell: b.death_cell.map(|c| e.cell_id(b.dim + 1, c)),
    }
}

fn verify_bar(e: &PersistenceEngine, b: &Bar, strategy: GeneratorStrategy) -> Result<()> {
    if b.is_empty() {
        return Ok(());
    }
    let z = e.cycle_representative(b, strategy)?;
    ensure!(
        e.is_cycle(&z)?,
        "representative of a {}-bar is not a cycle",
        b.dim
    );
    let life = e.lifespan(&z)?;
    ensure!(
        life.birth == b.birth && life.death == b.death,
        "representative of bar [{}, {:?}) lives on [{}, {:?})",
        b.birth,
        b.death,
        life.birth,
        life.death
    );
    Ok(())
}

fn barcode(input: &str, cx: &ComplexFlags, out: &Option<PathBuf>, verify: bool) -> Result<()> {
    let e = cx.engine(input)?;
    let bc = e.barcode();
    if verify {
        for b in bc.iter() {
            verify_bar(&e, b, GeneratorStrategy::Exact)?;
        }
        eprintln!(
            "verify: {} representatives match their bars",
            bc.iter().count()
        );
    }
    let bars: Vec<BarJson> = bc.iter().map(|b| bar_json(&e, b)).collect();
    let betti: Vec<usize> = (0..=e.max_homology_dim())
        .map(|d| bc.bars(d).iter().filter(|b| !b.is_finite()).count())
        .collect();
    emit_json(
        out,
        &json!({
            "field": e.complex().field().modulus(),
            "max_dim": e.max_homology_dim(),
            "cells": e.num_cells(),
            "essential_betti": betti,
            "bars": bars,
        }),
    )
}

fn records_for_dim(
    e: &PersistenceEngine,
    dim: usize,
    strategy: GeneratorStrategy,
    verify: bool,
) -> Result<Vec<GeneratorRecord>> {
    let bc = e.barcode();
    bc.bars(dim)
        .iter()
        .map(|b| {
            if verify {
                verify_bar(e, b, strategy)?;
            }
            Ok(e.generator_record(b, strategy)?)
        })
        .collect()
}

fn generators(
    input: &str,
    dim: Option<usize>,
    cx: &ComplexFlags,
    strategy: Strategy,
    out: &Option<PathBuf>,
    verify: bool,
    parallel: bool,
) -> Result<()> {
    let e = cx.engine(input)?;
    let strategy = match strategy {
        Strategy::Exact => GeneratorStrategy::Exact,
        Strategy::EarlyStop => GeneratorStrategy::EarlyStop,
    };
    let dims: Vec<usize> = match dim {
        Some(d) if d > e.max_homology_dim() => {
            bail!(
                "dimension {d} exceeds the computed range 0..={}",
                e.max_homology_dim()
            )
        }
        Some(d) => vec![d],
        None => (0..=e.max_homology_dim()).collect(),
    };
    let per_dim: Vec<Vec<GeneratorRecord>> = if parallel {
        std::thread::scope(|s| {
            let hs: Vec<_> = dims
                .iter()
                .map(|&d| {
                    let e = &e;
                    s.spawn(move || records_for_dim(e, d, strategy, verify))
                })
                .collect();
            hs.into_iter()
                .map(|h| h.join().map_err(|_| anyhow!("worker thread panicked"))?)
                .collect::<Result<Vec<_>>>()
        })?
    } else {
        dims.iter()
            .map(|&d| records_for_dim(&e, d, strategy, verify))
            .collect::<Result<Vec<_>>>()?
    };
    let records: Vec<GeneratorRecord> = per_dim.into_iter().flatten().collect();
    if verify {
        eprintln!(
            "verify: {} generators are cycles with the right lifespan",
            records.len()
        );
    }
    emit_json(out, &json!({ "generators": records }))
}

// ---- queries ----

/// `bar:DIM:K` (cycle representative of the K-th bar of that dimension),
/// `zero:DIM`, or `DIM:POS=COEF,POS=COEF,...`.
fn parse_chain(e: &PersistenceEngine, s: &str) -> Result<Chain> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("bar:") {
        let (d, k) = rest
            .split_once(':')
            .ok_or_else(|| anyhow!("expected bar:DIM:K"))?;
        let (d, k): (usize, usize) = (d.parse()?, k.parse()?);
        let bc = e.barcode();
        let bar = bc
            .bars(d)
            .get(k)
            .ok_or_else(|| anyhow!("there is no bar {k} in dimension {d}"))?;
        return Ok(e.cycle_representative(bar, GeneratorStrategy::Exact)?);
    }
    if let Some(d) = s.strip_prefix("zero:") {
        return Ok(Chain::zero(d.parse()?));
    }
    let (d, body) = s
        .split_once(':')
        .ok_or_else(|| anyhow!("chain {s:?}: expected DIM:POS=COEF,..."))?;
    let dim: usize = d
        .parse()
        .with_context(|| format!("chain dimension {d:?}"))?;
    let f = e.complex().field();
    let mut entries = Vec::new();
    for term in body.split(',').filter(|t| !t.trim().is_empty()) {
        let (p, c) = term
            .split_once('=')
            .ok_or_else(|| anyhow!("chain term {term:?}: expected POS=COEF"))?;
        let p: usize = p.trim().parse()?;
        let c: i64 = c.trim().parse()?;
        entries.push((p, f.from_i64(c)));
    }
    Ok(Chain::new(dim, SparseVector::from_entries(f, entries)))
}

fn chain_json(e: &PersistenceEngine, c: &Chain) -> Value {
    json!({
        "dim": c.dim,
        "positions": c.vector.entries(),
        "cells": e.chain_entries(c),
    })
}

fn query(q: Query, out: &Option<PathBuf>, verify: bool) -> Result<()> {
    match q {
        Query::BoundingChain { input, chain, cx } => {
            let e = cx.engine(&input)?;
            let x = parse_chain(&e, &chain)?;
            let b = e.bounding_chain(&x)?;
            let doc = match &b {
                Bounding::Bounds {
                    index,
                    value,
                    witness,
                } => {
                    if verify {
                        let dx = if witness.is_zero() {
                            SparseVector::new()
                        } else {
                            matvec(e.decomposition(witness.dim)?.d(), &witness.vector)?
                        };
                        ensure!(dx == x.vector, "witness boundary differs from the cycle");
                        eprintln!("verify: boundary of the witness equals the cycle");
                    }
                    json!({
                        "bounds": true,
                        "index": index,
                        "value": if value.is_finite() { json!(value) } else { Value::Null },
                        "witness": chain_json(&e, witness),
                    })
                }
                Bounding::NeverBounds => json!({ "bounds": false }),
            };
            emit_json(out, &doc)
        }
        Query::TimeOfHomology { input, x, f, cx } => {
            let e = cx.engine(&input)?;
            let (x, f) = (parse_chain(&e, &x)?, parse_chain(&e, &f)?);
            let t = e.time_of_homology(&x, &f)?;
            emit_json(out, &json!({ "homologous_from": t }))
        }
        Query::Lifespan { input, chain, cx } => {
            let e = cx.engine(&input)?;
            let x = parse_chain(&e, &chain)?;
            let l = e.lifespan(&x)?;
            emit_json(out, &json!({ "birth": l.birth, "death": l.death }))
        }
        Query::Retrieve {
            input,
            factor,
            axis,
            index,
            dim,
            cx,
        } => {
            let factor = match factor {
                FactorArg::R => Factor::R,
                FactorArg::Rinv => Factor::Rinv,
                FactorArg::C => Factor::C,
                FactorArg::Cinv => Factor::Cinv,
            };
            let axis = match axis {
                AxisArg::Row => Axis::Row,
                AxisArg::Column => Axis::Column,
            };
            let d: Arc<dyn MatrixOracle + Send + Sync> = match input::try_matrix(&input)? {
                Some(m) => Arc::new(m),
                None => {
                    let n = dim.ok_or_else(|| {
                        anyhow!("a complex needs DIM to select a boundary matrix")
                    })?;
                    let args = ComplexArgs {
                        field: field(cx.field)?,
                        max_homology_dim: cx.max_dim.max(n),
                        threshold: cx.threshold.unwrap_or(f64::INFINITY),
                        metric: match cx.metric {
                            MetricArg::Euclidean => Metric::Euclidean,
                            MetricArg::Torus => Metric::Torus,
                        },
                    };
                    let c: Arc<dyn FilteredComplex> = input::load_complex(&input, &args)?;
                    c.boundary(n)?
                }
            };
            let u = decompose_compressed(d.clone(), &DecomposeOptions::default());
            let (v, solves) = u.retrieve_audited(RetrievalTarget::new(factor, axis, index))?;
            if verify {
                let full = decompose_full(d);
                let m: StoredCsMatrix = match factor {
                    Factor::R => full.r(),
                    Factor::Rinv => full.rinv().clone(),
                    Factor::C => full.c(),
                    Factor::Cinv => full.cinv().clone(),
                };
                let expect = match axis {
                    Axis::Row => m.row(index),
                    Axis::Column => m.column(index),
                };
                ensure!(
                    expect == v,
                    "lazy retrieval disagrees with the full decomposition"
                );
                eprintln!("verify: lazy retrieval matches the full decomposition");
            }
            emit_json(
                out,
                &json!({ "entries": v.entries(), "triangular_solves": solves }),
            )
        }
    }
}
