use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use umatch::complexes::{io, CliqueComplex, CubicalComplex, FilteredComplex, Metric};
use umatch::matrix::triplet::parse_triplets;
use umatch::{Field, StoredCsMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Points,
    Distances,
    Image,
}

/// Split `points:FILE`, `dist:FILE`, `image:FILE`; a bare path is detected
/// from its contents.
fn split_spec(spec: &str) -> (Option<Kind>, &str) {
    for (prefix, kind) in [
        ("points:", Kind::Points),
        ("dist:", Kind::Distances),
        ("image:", Kind::Image),
    ] {
        if let Some(rest) = spec.strip_prefix(prefix) {
            return (Some(kind), rest);
        }
    }
    (None, spec)
}

pub fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(Path::new(path)).with_context(|| format!("cannot read {path}"))
}

fn detect(text: &str) -> Kind {
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    if first.starts_with("dims") {
        return Kind::Image;
    }
    match io::parse_point_cloud(text) {
        Ok(rows) if looks_like_distances(&rows) => Kind::Distances,
        Ok(_) => Kind::Points,
        Err(_) => Kind::Distances,
    }
}

fn looks_like_distances(rows: &[Vec<f64>]) -> bool {
    let n = rows.len();
    n > 1
        && rows.iter().all(|r| r.len() == n)
        && (0..n).all(|i| rows[i][i] == 0.0 && (0..n).all(|j| rows[i][j] == rows[j][i]))
}

pub struct ComplexArgs {
    pub field: Field,
    pub max_homology_dim: usize,
    pub threshold: f64,
    pub metric: Metric,
}

pub fn load_complex(spec: &str, args: &ComplexArgs) -> Result<Arc<dyn FilteredComplex>> {
    let (kind, path) = split_spec(spec);
    let text = read(path)?;
    let kind = kind.unwrap_or_else(|| detect(&text));
    let simplex_dim = args.max_homology_dim + 1;
    Ok(match kind {
        Kind::Points => {
            let pts = io::parse_point_cloud(&text).with_context(|| format!("in {path}"))?;
            Arc::new(CliqueComplex::from_points(
                args.field,
                &pts,
                args.metric,
                simplex_dim,
                args.threshold,
            )?)
        }
        Kind::Distances => {
            let d = io::parse_distance_matrix(&text).with_context(|| format!("in {path}"))?;
            Arc::new(CliqueComplex::from_dissimilarity(
                args.field,
                &d,
                simplex_dim,
                args.threshold,
            )?)
        }
        Kind::Image => {
            let (dims, values) = io::parse_image(&text).with_context(|| format!("in {path}"))?;
            Arc::new(CubicalComplex::new(args.field, dims, values)?)
        }
    })
}

/// A triplet matrix, or `None` if the file is not in triplet format.
pub fn try_matrix(path: &str) -> Result<Option<StoredCsMatrix>> {
    let text = read(path)?;
    let header = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty());
    let is_triplet = header.is_some_and(|h| {
        let t: Vec<&str> = h.split_whitespace().collect();
        t.len() == 3 && t.iter().all(|x| x.parse::<u64>().is_ok())
    });
    if !is_triplet {
        return Ok(None);
    }
    Ok(Some(
        parse_triplets(&text).with_context(|| format!("in {path}"))?,
    ))
}

pub fn load_matrix(path: &str) -> Result<StoredCsMatrix> {
    match try_matrix(path)? {
        Some(m) => Ok(m),
        None => bail!("{path}: expected a triplet matrix with header `rows cols modulus`"),
    }
}
