use serde::{Deserialize, Serialize};

use crate::coeff::Field;
use crate::error::{Result, UmatchError};

/// Sparse vector over a prime field: `(index, coefficient)` pairs with
/// strictly increasing indices and no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseVector {
    entries: Vec<(usize, u32)>,
}

impl SparseVector {
    pub fn new() -> Self {
        SparseVector {
            entries: Vec::new(),
        }
    }

    pub fn unit(index: usize) -> Self {
        SparseVector {
            entries: vec![(index, 1)],
        }
    }

    /// Wrap entries already known to satisfy the ordering/zero-free invariant.
    pub fn from_sorted_unchecked(entries: Vec<(usize, u32)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|e| e.1 != 0));
        SparseVector { entries }
    }

    /// Build from unordered entries, summing duplicates and dropping zeros.
    pub fn from_entries(field: Field, mut entries: Vec<(usize, u32)>) -> Self {
        entries.sort_unstable_by_key(|e| e.0);
        let mut out: Vec<(usize, u32)> = Vec::with_capacity(entries.len());
        for (i, c) in entries {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 = field.add(last.1, c),
                _ => out.push((i, c)),
            }
        }
        out.retain(|e| e.1 != 0);
        SparseVector { entries: out }
    }

    /// Build from a dense slice of representatives.
    pub fn from_dense(dense: &[u32]) -> Self {
        SparseVector {
            entries: dense
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i, c))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<u32> {
        let mut v = vec![0; len];
        for &(i, c) in &self.entries {
            v[i] = c;
        }
        v
    }

    #[inline]
    pub fn entries(&self) -> &[(usize, u32)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, u32)> {
        self.entries
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (usize, u32)> + '_ {
        self.entries.iter().copied()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> u32 {
        match self.entries.binary_search_by_key(&index, |e| e.0) {
            Ok(p) => self.entries[p].1,
            Err(_) => 0,
        }
    }

    pub fn first(&self) -> Option<(usize, u32)> {
        self.entries.first().copied()
    }

    pub fn last(&self) -> Option<(usize, u32)> {
        self.entries.last().copied()
    }

    pub fn min_index(&self) -> Option<usize> {
        self.entries.first().map(|e| e.0)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    pub fn scale(&self, field: Field, alpha: u32) -> SparseVector {
        if alpha == 0 {
            return SparseVector::new();
        }
        SparseVector {
            entries: self
                .entries
                .iter()
                .map(|&(i, c)| (i, field.mul(alpha, c)))
                .collect(),
        }
    }

    pub fn neg(&self, field: Field) -> SparseVector {
        self.scale(field, field.neg(1))
    }

    /// Relabel indices through `map`, which must be injective. Output is re-sorted.
    pub fn reindex(&self, map: impl Fn(usize) -> usize) -> SparseVector {
        let mut entries: Vec<(usize, u32)> =
            self.entries.iter().map(|&(i, c)| (map(i), c)).collect();
        entries.sort_unstable_by_key(|e| e.0);
        SparseVector { entries }
    }

    /// Keep only the entries whose index satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(usize) -> bool) -> SparseVector {
        SparseVector {
            entries: self.entries.iter().copied().filter(|e| keep(e.0)).collect(),
        }
    }

    /// Restrict to entries with index in `keep`, relabelled through `map`.
    pub fn filter_map(&self, map: impl Fn(usize) -> Option<usize>) -> SparseVector {
        let mut entries: Vec<(usize, u32)> = self
            .entries
            .iter()
            .filter_map(|&(i, c)| map(i).map(|j| (j, c)))
            .collect();
        entries.sort_unstable_by_key(|e| e.0);
        SparseVector { entries }
    }

    /// Multiply so that the lowest-index coefficient becomes 1.
    pub fn normalize_leading(&self, field: Field) -> SparseVector {
        match self.first() {
            Some((_, c)) if c != 1 => self.scale(field, field.inv(c).expect("nonzero")),
            _ => self.clone(),
        }
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        match self.max_index() {
            Some(i) if i >= len => Err(UmatchError::DimensionMismatch {
                expected: len,
                found: i + 1,
            }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<(usize, u32)> for SparseVector {
    /// Collects entries that are already sorted and zero-free.
    fn from_iter<T: IntoIterator<Item = (usize, u32)>>(iter: T) -> Self {
        SparseVector::from_sorted_unchecked(iter.into_iter().collect())
    }
}

/// `alpha * x + y`.
pub fn axpy(field: Field, alpha: u32, x: &SparseVector, y: &SparseVector) -> SparseVector {
    if alpha == 0 {
        return y.clone();
    }
    let (a, b) = (x.entries(), y.entries());
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push((a[i].0, field.mul(alpha, a[i].1)));
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            let c = field.add(field.mul(alpha, a[i].1), b[j].1);
            if c != 0 {
                out.push((a[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    SparseVector::from_sorted_unchecked(out)
}

pub fn add(field: Field, x: &SparseVector, y: &SparseVector) -> SparseVector {
    axpy(field, 1, x, y)
}

pub fn sub(field: Field, x: &SparseVector, y: &SparseVector) -> SparseVector {
    axpy(field, field.neg(1), y, x)
}

pub fn dot(field: Field, x: &SparseVector, y: &SparseVector) -> u32 {
    let (a, b) = (x.entries(), y.entries());
    let (mut i, mut j, mut acc) = (0, 0, 0u32);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc = field.add(acc, field.mul(a[i].1, b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Sum of scaled sparse vectors, `sum_k coef_k * v_k`.
pub fn linear_combination<'a>(
    field: Field,
    terms: impl IntoIterator<Item = (u32, &'a SparseVector)>,
) -> SparseVector {
    let mut buf = Vec::new();
    for (coef, v) in terms {
        if coef == 0 {
            continue;
        }
        buf.extend(v.iter().map(|(i, c)| (i, field.mul(coef, c))));
    }
    SparseVector::from_entries(field, buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axpy_cancels_over_gf2() {
        let f = Field::GF2;
        let x = SparseVector::from_dense(&[0, 1, 1, 0]);
        let y = SparseVector::from_dense(&[0, 0, 1, 1]);
        // 1·(e1+e2) + (e2+e3) = e1+e3 (1-based labels)
        assert_eq!(axpy(f, 1, &x, &y), SparseVector::from_dense(&[0, 1, 0, 1]));
    }

    #[test]
    fn from_entries_merges_and_drops_zeros() {
        let f = Field::new(7).unwrap();
        let v = SparseVector::from_entries(f, vec![(3, 2), (1, 4), (3, 5), (0, 0)]);
        assert_eq!(v.entries(), &[(1, 4)]);
    }

    #[test]
    fn dot_and_scale() {
        let f = Field::new(7).unwrap();
        let x = SparseVector::from_dense(&[1, 2, 0, 3]);
        let y = SparseVector::from_dense(&[4, 0, 5, 6]);
        assert_eq!(dot(f, &x, &y), (4 + 18) % 7);
        assert_eq!(x.scale(f, 3).to_dense(4), vec![3, 6, 0, 2]);
        assert!(x.scale(f, 0).is_zero());
        assert_eq!(x.normalize_leading(f).first(), Some((0, 1)));
    }
}
