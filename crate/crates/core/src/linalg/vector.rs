use serde::{Deserialize, Serialize};

use crate::prime::Prime;

/// A sparse vector over `F_p`: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseVector {
    entries: Vec<(u32, u32)>,
}

impl SparseVector {
    pub fn zero() -> Self {
        SparseVector {
            entries: Vec::new(),
        }
    }

    pub fn unit(index: u32) -> Self {
        SparseVector {
            entries: vec![(index, 1)],
        }
    }

    /// Builds a vector from arbitrary `(index, value)` pairs: values are reduced
    /// mod `p`, repeated indices are summed and zeros dropped.
    pub fn from_entries(p: Prime, mut raw: Vec<(u32, i64)>) -> Self {
        raw.sort_unstable_by_key(|&(i, _)| i);
        let mut entries: Vec<(u32, u32)> = Vec::with_capacity(raw.len());
        for (i, v) in raw {
            let v = p.reduce(v);
            match entries.last_mut() {
                Some(last) if last.0 == i => last.1 = p.add(last.1, v),
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|&(_, v)| v != 0);
        SparseVector { entries }
    }

    /// Builds a vector from entries that already satisfy the invariants.
    pub fn from_sorted(entries: Vec<(u32, u32)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|&(_, v)| v != 0));
        SparseVector { entries }
    }

    pub fn from_dense(p: Prime, dense: &[u32]) -> Self {
        SparseVector {
            entries: dense
                .iter()
                .enumerate()
                .filter_map(|(i, &v)| {
                    let v = v % p.value();
                    (v != 0).then_some((i as u32, v))
                })
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<u32> {
        let mut out = vec![0; len];
        for &(i, v) in &self.entries {
            out[i as usize] = v;
        }
        out
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(u32, u32)> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.entries.iter().copied()
    }

    #[inline]
    pub fn leading(&self) -> Option<(u32, u32)> {
        self.entries.first().copied()
    }

    pub fn max_index(&self) -> Option<u32> {
        self.entries.last().map(|e| e.0)
    }

    pub fn get(&self, index: u32) -> u32 {
        match self.entries.binary_search_by_key(&index, |e| e.0) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0,
        }
    }

    pub fn scale(&mut self, c: u32, p: Prime) {
        let c = c % p.value();
        if c == 0 {
            self.entries.clear();
            return;
        }
        for e in &mut self.entries {
            e.1 = p.mul(e.1, c);
        }
    }

    pub fn scaled(&self, c: u32, p: Prime) -> Self {
        let mut out = self.clone();
        out.scale(c, p);
        out
    }

    /// Scales so that the leading coefficient is 1.
    pub fn normalize(&mut self, p: Prime) {
        if let Some((_, lead)) = self.leading() {
            if lead != 1 {
                self.scale(p.inv(lead), p);
            }
        }
    }

    pub fn normalized(&self, p: Prime) -> Self {
        let mut out = self.clone();
        out.normalize(p);
        out
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &SparseVector, c: u32, p: Prime) {
        let c = c % p.value();
        if c == 0 || other.is_zero() {
            return;
        }
        let a = &self.entries;
        let b = &other.entries;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let (ai, av) = a[i];
            let (bi, bv) = b[j];
            if ai < bi {
                out.push((ai, av));
                i += 1;
            } else if bi < ai {
                out.push((bi, p.mul(bv, c)));
                j += 1;
            } else {
                let v = p.add(av, p.mul(bv, c));
                if v != 0 {
                    out.push((ai, v));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|&(bi, bv)| (bi, p.mul(bv, c))));
        self.entries = out;
    }

    pub fn add(&mut self, other: &SparseVector, p: Prime) {
        self.add_scaled(other, 1, p);
    }

    pub fn sub(&mut self, other: &SparseVector, p: Prime) {
        self.add_scaled(other, p.value() - 1, p);
    }

    /// Re-index through `map`, which must be strictly increasing on the support.
    pub fn remap(&self, map: impl Fn(u32) -> u32) -> Self {
        SparseVector {
            entries: self.entries.iter().map(|&(i, v)| (map(i), v)).collect(),
        }
    }
}

/// Row-major sparse matrix over `F_p` with explicit dimensions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    pub ncols: usize,
    pub rows: Vec<SparseVector>,
}

impl SparseMatrix {
    pub fn new(ncols: usize, rows: Vec<SparseVector>) -> Self {
        debug_assert!(rows
            .iter()
            .all(|r| r.max_index().is_none_or(|m| (m as usize) < ncols)));
        SparseMatrix { ncols, rows }
    }

    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            ncols,
            rows: vec![SparseVector::zero(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            ncols: n,
            rows: (0..n as u32).map(SparseVector::unit).collect(),
        }
    }

    pub fn from_dense(p: Prime, dense: &[Vec<u32>]) -> Self {
        let ncols = dense.first().map_or(0, |r| r.len());
        SparseMatrix {
            ncols,
            rows: dense.iter().map(|r| SparseVector::from_dense(p, r)).collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Builds the matrix whose columns are the given vectors (each of length `nrows`).
    pub fn from_columns(nrows: usize, columns: &[SparseVector]) -> Self {
        let mut rows: Vec<Vec<(u32, u32)>> = vec![Vec::new(); nrows];
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter() {
                rows[i as usize].push((j as u32, v));
            }
        }
        SparseMatrix {
            ncols: columns.len(),
            rows: rows.into_iter().map(SparseVector::from_sorted).collect(),
        }
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix::from_columns(self.ncols, &self.rows)
    }

    /// `M v` where `v` has length `ncols`.
    pub fn apply(&self, v: &SparseVector, p: Prime) -> SparseVector {
        let raw: Vec<(u32, i64)> = self
            .rows
            .iter()
            .enumerate()
            .filter_map(|(i, row)| {
                let mut acc = 0u32;
                // both sorted: merge
                let (a, b) = (row.entries(), v.entries());
                let (mut x, mut y) = (0, 0);
                while x < a.len() && y < b.len() {
                    match a[x].0.cmp(&b[y].0) {
                        std::cmp::Ordering::Less => x += 1,
                        std::cmp::Ordering::Greater => y += 1,
                        std::cmp::Ordering::Equal => {
                            acc = p.add(acc, p.mul(a[x].1, b[y].1));
                            x += 1;
                            y += 1;
                        }
                    }
                }
                (acc != 0).then_some((i as u32, acc as i64))
            })
            .collect();
        SparseVector::from_entries(p, raw)
    }

    pub fn to_dense(&self) -> Vec<Vec<u32>> {
        self.rows.iter().map(|r| r.to_dense(self.ncols)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn from_entries_normalizes() {
        let v = SparseVector::from_entries(p3(), vec![(4, 2), (1, 5), (4, 1), (0, 3)]);
        assert_eq!(v.entries(), &[(1, 2)]);
    }

    #[test]
    fn add_scaled_cancels() {
        let p = p3();
        let mut a = SparseVector::from_entries(p, vec![(0, 1), (2, 1)]);
        let b = SparseVector::from_entries(p, vec![(0, 1), (1, 1)]);
        a.add_scaled(&b, 2, p);
        assert_eq!(a.entries(), &[(1, 2), (2, 1)]);
        a.normalize(p);
        assert_eq!(a.entries(), &[(1, 1), (2, 2)]);
    }

    #[test]
    fn transpose_and_apply() {
        let p = p3();
        let m = SparseMatrix::from_dense(p, &[vec![1, 2, 0], vec![0, 1, 1]]);
        let t = m.transpose();
        assert_eq!(t.to_dense(), vec![vec![1, 0], vec![2, 1], vec![0, 1]]);
        let v = SparseVector::from_dense(p, &[1, 1, 1]);
        assert_eq!(m.apply(&v, p).to_dense(2), vec![0, 2]);
    }
}
