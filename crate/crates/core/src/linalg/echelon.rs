//! Deterministic Gaussian elimination over `F_p`.
//!
//! Pivoting always takes the first nonzero entry in column order. Nothing is
//! randomized, so class names derived from basis positions are stable.

use super::vector::{SparseMatrix, SparseVector};
use crate::error::{CoreError, Result};
use crate::prime::Prime;

/// Extra data carried along with each echelon row and combined with the same
/// coefficients as the row itself.
pub trait Payload: Clone {
    fn zero_like(&self) -> Self;
    /// `self += c * other` where `c` is a residue mod `p`.
    fn add_scaled(&mut self, other: &Self, c: u32, p: Prime);
}

impl Payload for () {
    fn zero_like(&self) -> Self {}
    fn add_scaled(&mut self, _: &Self, _: u32, _: Prime) {}
}

impl Payload for SparseVector {
    fn zero_like(&self) -> Self {
        SparseVector::zero()
    }
    fn add_scaled(&mut self, other: &Self, c: u32, p: Prime) {
        SparseVector::add_scaled(self, other, c, p)
    }
}

/// Incrementally built row-echelon form. Every stored row has leading
/// coefficient 1 and a distinct leading column.
#[derive(Clone, Debug)]
pub struct Echelon<T: Payload = ()> {
    p: Prime,
    pivot_row: Vec<u32>,
    rows: Vec<(SparseVector, T)>,
}

const NO_PIVOT: u32 = u32::MAX;

impl<T: Payload> Echelon<T> {
    pub fn new(p: Prime, ncols: usize) -> Self {
        Echelon {
            p,
            pivot_row: vec![NO_PIVOT; ncols],
            rows: Vec::new(),
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.pivot_row.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &(SparseVector, T)> {
        self.rows.iter()
    }

    pub fn has_pivot(&self, col: u32) -> bool {
        self.pivot_row[col as usize] != NO_PIVOT
    }

    fn grow(&mut self, v: &SparseVector) {
        if let Some(m) = v.max_index() {
            if m as usize >= self.pivot_row.len() {
                self.pivot_row.resize(m as usize + 1, NO_PIVOT);
            }
        }
    }

    /// Subtracts rows until the leading column of `v` carries no pivot (or `v`
    /// vanishes). `tag` receives the same operations.
    pub fn reduce_leading(&self, v: &mut SparseVector, tag: &mut T) {
        let p = self.p;
        while let Some((col, val)) = v.leading() {
            let r = match self.pivot_row.get(col as usize) {
                Some(&r) if r != NO_PIVOT => r as usize,
                _ => return,
            };
            let c = p.neg(val);
            v.add_scaled(&self.rows[r].0, c, p);
            tag.add_scaled(&self.rows[r].1, c, p);
        }
    }

    /// Eliminates every entry of `v` lying in a pivot column.
    pub fn reduce_fully(&self, v: &mut SparseVector, tag: &mut T) {
        let p = self.p;
        let mut cursor = 0usize;
        loop {
            let hit = v.entries()[cursor.min(v.len())..]
                .iter()
                .position(|&(col, _)| {
                    self.pivot_row
                        .get(col as usize)
                        .is_some_and(|&r| r != NO_PIVOT)
                })
                .map(|off| cursor + off);
            let Some(pos) = hit else { return };
            let (col, val) = v.entries()[pos];
            let r = self.pivot_row[col as usize] as usize;
            let c = p.neg(val);
            v.add_scaled(&self.rows[r].0, c, p);
            tag.add_scaled(&self.rows[r].1, c, p);
            // entries before `pos` are untouched by the subtraction
            cursor = pos;
        }
    }

    /// Reduces `v` and stores it if independent. Returns whether the rank grew;
    /// on `false` the reduced `tag` records the dependency.
    pub fn insert(&mut self, mut v: SparseVector, mut tag: T) -> std::result::Result<(), T> {
        self.grow(&v);
        self.reduce_leading(&mut v, &mut tag);
        match v.leading() {
            None => Err(tag),
            Some((col, lead)) => {
                if lead != 1 {
                    let inv = self.p.inv(lead);
                    v.scale(inv, self.p);
                    let zero = tag.zero_like();
                    let mut scaled = zero;
                    scaled.add_scaled(&tag, inv, self.p);
                    tag = scaled;
                }
                self.pivot_row[col as usize] = self.rows.len() as u32;
                self.rows.push((v, tag));
                Ok(())
            }
        }
    }

    pub fn contains(&self, v: &SparseVector) -> bool
    where
        T: Default,
    {
        let mut v = v.clone();
        let mut tag = T::default();
        self.reduce_leading(&mut v, &mut tag);
        v.is_zero()
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        let mut piv: Vec<usize> = self.rows.iter().map(|r| r.0.leading().unwrap().0 as usize).collect();
        piv.sort_unstable();
        piv
    }
}

impl Echelon<()> {
    pub fn insert_plain(&mut self, v: SparseVector) -> bool {
        self.insert(v, ()).is_ok()
    }
}

/// Result of [`rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub reduced: SparseMatrix,
}

/// Reduced row-echelon form. `reduced` has `rank` nonzero rows sorted by pivot.
pub fn rref(p: Prime, m: &SparseMatrix) -> Rref {
    let mut ech: Echelon<()> = Echelon::new(p, m.ncols);
    for row in &m.rows {
        ech.insert_plain(row.clone());
    }
    let mut rows: Vec<SparseVector> = ech.rows.into_iter().map(|(v, _)| v).collect();
    rows.sort_by_key(|r| r.leading().unwrap().0);
    let pivots: Vec<usize> = rows.iter().map(|r| r.leading().unwrap().0 as usize).collect();
    // back substitution from the bottom: rows below are already reduced
    let mut pivot_of = vec![usize::MAX; m.ncols];
    for (i, &c) in pivots.iter().enumerate() {
        pivot_of[c] = i;
    }
    for i in (0..rows.len()).rev() {
        let mut row = std::mem::take(&mut rows[i]);
        let mut cursor = 1usize;
        loop {
            let hit = row.entries()[cursor.min(row.len())..]
                .iter()
                .position(|&(col, _)| pivot_of[col as usize] != usize::MAX)
                .map(|off| cursor + off);
            let Some(pos) = hit else { break };
            let (col, val) = row.entries()[pos];
            let j = pivot_of[col as usize];
            row.add_scaled(&rows[j], p.neg(val), p);
            cursor = pos;
        }
        rows[i] = row;
    }
    Rref {
        rank: rows.len(),
        pivots,
        reduced: SparseMatrix::new(m.ncols, rows),
    }
}

/// Rank of the span of `vectors`.
pub fn rank_of(p: Prime, ncols: usize, vectors: impl IntoIterator<Item = SparseVector>) -> usize {
    let mut ech: Echelon<()> = Echelon::new(p, ncols);
    for v in vectors {
        ech.insert_plain(v);
    }
    ech.rank()
}

/// Basis of `{ v : m v = 0 }`, one vector per pivot-free column in increasing
/// column order, each normalized to leading coefficient 1.
pub fn kernel_basis(p: Prime, m: &SparseMatrix) -> Vec<SparseVector> {
    let r = rref(p, m);
    let mut is_pivot = vec![false; m.ncols];
    for &c in &r.pivots {
        is_pivot[c] = true;
    }
    // column f of the reduced matrix, read off row by row
    let mut free_entries: Vec<Vec<(u32, u32)>> = vec![Vec::new(); m.ncols];
    for (row, &pc) in r.reduced.rows.iter().zip(&r.pivots) {
        for (col, val) in row.iter() {
            if !is_pivot[col as usize] {
                free_entries[col as usize].push((pc as u32, p.neg(val)));
            }
        }
    }
    (0..m.ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut raw: Vec<(u32, i64)> = free_entries[f].iter().map(|&(i, v)| (i, v as i64)).collect();
            raw.push((f as u32, 1));
            let mut v = SparseVector::from_entries(p, raw);
            v.normalize(p);
            v
        })
        .collect()
}

/// Kernel of the map sending basis vector `j` to `columns[j]`, computed by
/// column reduction with combination tracking. Returns the kernel (normalized,
/// ordered by free column) and the rank of the map.
pub fn kernel_of_columns(p: Prime, target_dim: usize, columns: &[SparseVector]) -> (Vec<SparseVector>, usize) {
    let mut ech: Echelon<SparseVector> = Echelon::new(p, target_dim);
    let mut kernel = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        if let Err(mut combo) = ech.insert(col.clone(), SparseVector::unit(j as u32)) {
            combo.normalize(p);
            kernel.push(combo);
        }
    }
    (kernel, ech.rank())
}

/// Finds `x` with `sum_j x_j columns[j] = rhs`, if one exists.
pub fn solve(p: Prime, target_dim: usize, columns: &[SparseVector], rhs: &SparseVector) -> Option<SparseVector> {
    let mut ech: Echelon<SparseVector> = Echelon::new(p, target_dim);
    for (j, col) in columns.iter().enumerate() {
        let _ = ech.insert(col.clone(), SparseVector::unit(j as u32));
    }
    solve_with(&ech, rhs)
}

/// Like [`solve`] with a prebuilt echelon whose tags are source combinations.
pub fn solve_with(ech: &Echelon<SparseVector>, rhs: &SparseVector) -> Option<SparseVector> {
    let mut v = rhs.clone();
    let mut tag = SparseVector::zero();
    ech.reduce_leading(&mut v, &mut tag);
    if !v.is_zero() {
        return None;
    }
    // v_0 - sum c_i row_i = 0 was accumulated as tag = -sum c_i tag_i
    tag.scale(ech.prime().value() - 1, ech.prime());
    Some(tag)
}

/// Vectors among `cycles` projecting to a basis of `span(cycles)/span(boundaries)`.
///
/// Greedy: each cycle is kept when it is independent of the boundaries and of
/// the cycles kept before it. Returned vectors have leading coefficient 1.
pub fn subquotient_basis(p: Prime, ncols: usize, cycles: &[SparseVector], boundaries: &[SparseVector]) -> Result<Vec<SparseVector>> {
    let mut cycle_span: Echelon<()> = Echelon::new(p, ncols);
    for c in cycles {
        cycle_span.insert_plain(c.clone());
    }
    for (i, b) in boundaries.iter().enumerate() {
        if !cycle_span.contains(b) {
            return Err(CoreError::InconsistentComplex(format!(
                "boundary #{i} is not in the span of the cycles"
            )));
        }
    }
    let mut ech: Echelon<()> = Echelon::new(p, ncols);
    for b in boundaries {
        ech.insert_plain(b.clone());
    }
    let mut out = Vec::new();
    for c in cycles {
        if ech.insert_plain(c.clone()) {
            out.push(c.normalized(p));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn dense(p: Prime, rows: &[&[u32]]) -> SparseMatrix {
        SparseMatrix::from_dense(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn rref_identity() {
        let r = rref(p3(), &SparseMatrix::identity(2));
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_zero() {
        let r = rref(p3(), &SparseMatrix::zero(3, 4));
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_dependent_rows() {
        let r = rref(p3(), &dense(p3(), &[&[1, 2], &[2, 4]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.reduced.to_dense(), vec![vec![1, 2]]);
    }

    #[test]
    fn rref_back_substitutes() {
        let p = Prime::new(5).unwrap();
        let r = rref(p, &dense(p, &[&[1, 1, 1], &[0, 1, 2]]));
        assert_eq!(r.reduced.to_dense(), vec![vec![1, 0, 4], vec![0, 1, 2]]);
    }

    #[test]
    fn kernel_examples() {
        let p = p3();
        assert!(kernel_basis(p, &SparseMatrix::identity(3)).is_empty());
        let k = kernel_basis(p, &SparseMatrix::zero(2, 2));
        assert_eq!(k, vec![SparseVector::unit(0), SparseVector::unit(1)]);
        let k = kernel_basis(p, &dense(p, &[&[1, 1]]));
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].to_dense(2), vec![1, 2]);
    }

    #[test]
    fn subquotient_examples() {
        let p = p3();
        let e1 = SparseVector::unit(0);
        let e2 = SparseVector::unit(1);
        let q = subquotient_basis(p, 2, &[e1.clone(), e2.clone()], std::slice::from_ref(&e1)).unwrap();
        assert_eq!(q, vec![e2.clone()]);
        let q = subquotient_basis(p, 2, &[e1.clone(), e2.clone()], &[e1.clone(), e2.clone()]).unwrap();
        assert!(q.is_empty());
        let mut s = e1.clone();
        s.add(&e2, p);
        let q = subquotient_basis(p, 2, &[s, e2.clone()], &[]).unwrap();
        assert_eq!(q.len(), 2);
    }

    #[test]
    fn subquotient_rejects_stray_boundary() {
        let p = p3();
        let err = subquotient_basis(p, 2, &[SparseVector::unit(0)], &[SparseVector::unit(1)]);
        assert!(matches!(err, Err(CoreError::InconsistentComplex(_))));
    }

    #[test]
    fn solve_finds_combination() {
        let p = p3();
        let cols = vec![
            SparseVector::from_dense(p, &[1, 1, 0]),
            SparseVector::from_dense(p, &[0, 1, 1]),
        ];
        let rhs = SparseVector::from_dense(p, &[1, 0, 2]);
        let x = solve(p, 3, &cols, &rhs).unwrap();
        assert_eq!(x.to_dense(2), vec![1, 2]);
        assert!(solve(p, 3, &cols, &SparseVector::unit(0)).is_none());
    }
}
