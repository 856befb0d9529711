//! Plain-text triplet format: a header `rows cols modulus` followed by
//! 1-based `i j v` lines. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use crate::coeff::Field;
use crate::error::{Result, UmatchError};

use super::{MatrixOracle, StoredCsMatrix};

fn parse_err(line: usize, msg: impl Into<String>) -> UmatchError {
    UmatchError::Parse {
        line,
        msg: msg.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(n, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((n + 1, l))
    })
}

fn fields<const K: usize>(line: usize, s: &str) -> Result<[i64; K]> {
    let toks: Vec<&str> = s.split_whitespace().collect();
    if toks.len() != K {
        return Err(parse_err(
            line,
            format!("expected {K} fields, found {}", toks.len()),
        ));
    }
    let mut out = [0i64; K];
    for (o, t) in out.iter_mut().zip(toks) {
        *o = t
            .parse()
            .map_err(|_| parse_err(line, format!("not an integer: {t:?}")))?;
    }
    Ok(out)
}

/// Parse a triplet file into a stored matrix over the field named in its header.
pub fn parse_triplets(text: &str) -> Result<StoredCsMatrix> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let [rows, cols, modulus] = fields::<3>(hline, header)?;
    if rows < 0 || cols < 0 {
        return Err(parse_err(hline, "negative dimension"));
    }
    let field = Field::new(modulus.max(0) as u64).map_err(|e| parse_err(hline, e.to_string()))?;
    let (rows, cols) = (rows as usize, cols as usize);
    let mut triplets = Vec::new();
    for (n, l) in lines {
        let [i, j, v] = fields::<3>(n, l)?;
        if i < 1 || i as usize > rows || j < 1 || j as usize > cols {
            return Err(parse_err(
                n,
                format!("entry ({i}, {j}) outside {rows}x{cols}"),
            ));
        }
        triplets.push((i as usize - 1, j as usize - 1, v));
    }
    StoredCsMatrix::from_triplets(field, rows, cols, &triplets)
}

/// Serialize any oracle in triplet format, rows ascending.
pub fn write_triplets<D: MatrixOracle + ?Sized>(d: &D) -> String {
    let mut out = format!("{} {} {}\n", d.nrows(), d.ncols(), d.field().modulus());
    for i in 0..d.nrows() {
        for (j, c) in d.row(i).iter() {
            let _ = writeln!(out, "{} {} {}", i + 1, j + 1, c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::to_dense;

    #[test]
    fn parse_example_and_round_trip() {
        let text = "2 2 7\n1 1 3\n1 2 -6\n# comment\n2 1 3\n2 2 -6\n";
        let d = parse_triplets(text).unwrap();
        assert_eq!(to_dense(&d), vec![vec![3, 1], vec![3, 1]]);
        let again = parse_triplets(&write_triplets(&d)).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn empty_matrix() {
        let d = parse_triplets("0 0 2\n").unwrap();
        assert_eq!((d.nrows(), d.ncols()), (0, 0));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            parse_triplets("2 2 7\n1 1 3\n\n3 1 1\n").unwrap_err(),
            parse_err(4, "entry (3, 1) outside 2x2")
        );
        assert!(matches!(
            parse_triplets("2 2 8\n"),
            Err(UmatchError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_triplets("2 2 7\n1 x 1\n"),
            Err(UmatchError::Parse { line: 2, .. })
        ));
        assert!(parse_triplets("").is_err());
    }
}
