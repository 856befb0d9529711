//! Text input formats for point clouds, dissimilarity matrices and images.

use crate::error::{Result, UmatchError};

fn csv_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| UmatchError::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let row = rec
            .iter()
            .filter(|f| !f.is_empty())
            .map(|f| {
                f.parse::<f64>().map_err(|_| UmatchError::Parse {
                    line,
                    msg: format!("not a number: {f:?}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if !row.is_empty() {
            rows.push(row);
        }
    }
    Ok(rows)
}

/// One point per line, coordinates separated by commas.
pub fn parse_point_cloud(text: &str) -> Result<Vec<Vec<f64>>> {
    let rows = csv_rows(text)?;
    if let Some(r) = rows.iter().position(|r| r.len() != rows[0].len()) {
        return Err(UmatchError::Parse {
            line: r + 1,
            msg: format!(
                "point has {} coordinates, expected {}",
                rows[r].len(),
                rows[0].len()
            ),
        });
    }
    Ok(rows)
}

/// A full symmetric matrix, or its lower triangle including the diagonal.
pub fn parse_distance_matrix(text: &str) -> Result<Vec<Vec<f64>>> {
    let rows = csv_rows(text)?;
    let m = rows.len();
    if rows.iter().all(|r| r.len() == m) {
        return Ok(rows);
    }
    if !rows.iter().enumerate().all(|(i, r)| r.len() == i + 1) {
        return Err(UmatchError::Parse {
            line: 0,
            msg: "distance matrix is neither square nor lower-triangular".into(),
        });
    }
    let n = m;
    let mut d = vec![vec![0.0; n]; n];
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    Ok(d)
}

/// Image with header `dims d1 d2 [d3]` followed by row-major values
/// separated by whitespace or commas.
pub fn parse_image(text: &str) -> Result<(Vec<usize>, Vec<f64>)> {
    let mut dims: Option<Vec<usize>> = None;
    let mut values = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| UmatchError::Parse { line: k + 1, msg };
        let mut toks = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty());
        if dims.is_none() {
            if toks.next() != Some("dims") {
                return Err(err("expected header `dims d1 d2 [d3]`".into()));
            }
            let d = toks
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| err(format!("bad dimension {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if !(2..=3).contains(&d.len()) {
                return Err(err(format!(
                    "expected 2 or 3 dimensions, found {}",
                    d.len()
                )));
            }
            dims = Some(d);
            continue;
        }
        for t in toks {
            values.push(
                t.parse::<f64>()
                    .map_err(|_| err(format!("not a number: {t:?}")))?,
            );
        }
    }
    let dims = dims.ok_or(UmatchError::Parse {
        line: 0,
        msg: "missing `dims` header".into(),
    })?;
    let expected: usize = dims.iter().product();
    if values.len() != expected {
        return Err(UmatchError::Parse {
            line: 0,
            msg: format!("expected {expected} pixel values, found {}", values.len()),
        });
    }
    Ok((dims, values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points() {
        let p = parse_point_cloud("# header\n0,0\n1, 0.5\n").unwrap();
        assert_eq!(p, vec![vec![0.0, 0.0], vec![1.0, 0.5]]);
        assert!(parse_point_cloud("0,0\n1\n").is_err());
        assert!(parse_point_cloud("0,x\n").is_err());
    }

    #[test]
    fn distances() {
        let full = parse_distance_matrix("0,1,2\n1,0,3\n2,3,0\n").unwrap();
        let lower = parse_distance_matrix("0\n1,0\n2,3,0\n").unwrap();
        assert_eq!(full, lower);
        assert!(parse_distance_matrix("0,1\n1\n2,3,4,5\n").is_err());
    }

    #[test]
    fn image() {
        let (d, v) = parse_image("dims 2 2\n1 2\n3 4\n").unwrap();
        assert_eq!(d, vec![2, 2]);
        assert_eq!(v, vec![1.0, 2.0, 3.0, 4.0]);
        assert!(parse_image("dims 2 2\n1 2 3\n").is_err());
        assert!(parse_image("1 2\n").is_err());
    }
}
