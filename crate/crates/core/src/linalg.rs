//! Sparse exact linear algebra: vectors, echelon bases and relation spaces.

use alloc::vec;
use alloc::vec::Vec;

use crate::ring::{FieldKind, FieldScalar};

/// A sparse vector with strictly increasing indices and no stored zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SparseVec {
    entries: Vec<(u32, FieldScalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    /// Builds from entries that are already sorted by index; zeros are dropped.
    pub fn from_sorted(entries: Vec<(u32, FieldScalar)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        SparseVec {
            entries: entries.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Builds from unsorted entries, summing repeated indices.
    pub fn from_unsorted(mut entries: Vec<(u32, FieldScalar)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(u32, FieldScalar)> = Vec::with_capacity(entries.len());
        for (i, c) in entries {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc = acc.add(&c),
                _ => out.push((i, c)),
            }
        }
        SparseVec::from_sorted(out)
    }

    pub fn unit(i: u32, field: FieldKind) -> Self {
        SparseVec {
            entries: vec![(i, field.one())],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(u32, FieldScalar)] {
        &self.entries
    }

    pub fn leading(&self) -> Option<u32> {
        self.entries.first().map(|e| e.0)
    }

    pub fn get(&self, i: u32) -> Option<&FieldScalar> {
        self.entries
            .binary_search_by_key(&i, |e| e.0)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn scale(&self, c: &FieldScalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v.mul(c))).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v.neg())).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &FieldScalar, other: &SparseVec) -> SparseVec {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() || b < other.entries.len() {
            let ia = self.entries.get(a).map(|e| e.0);
            let ib = other.entries.get(b).map(|e| e.0);
            match (ia, ib) {
                (Some(i), Some(j)) if i == j => {
                    let v = self.entries[a].1.add(&other.entries[b].1.mul(c));
                    if !v.is_zero() {
                        out.push((i, v));
                    }
                    a += 1;
                    b += 1;
                }
                (Some(i), Some(j)) if i < j => {
                    out.push(self.entries[a].clone());
                    a += 1;
                }
                (Some(_), None) => {
                    out.push(self.entries[a].clone());
                    a += 1;
                }
                (_, Some(j)) => {
                    out.push((j, other.entries[b].1.mul(c)));
                    b += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec, field: FieldKind) -> SparseVec {
        self.add_scaled(&field.one(), other)
    }

    /// Keeps the entries with index `< bound`.
    pub fn truncate(&self, bound: u32) -> SparseVec {
        let k = self.entries.partition_point(|e| e.0 < bound);
        SparseVec {
            entries: self.entries[..k].to_vec(),
        }
    }

    /// Entries with index in `[lo, hi)`, re-indexed to start at zero.
    pub fn slice(&self, lo: u32, hi: u32) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter(|e| e.0 >= lo && e.0 < hi)
                .map(|(i, c)| (i - lo, c.clone()))
                .collect(),
        }
    }

    pub fn shift(&self, offset: u32) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, c)| (i + offset, c.clone())).collect(),
        }
    }

    /// Appends `other` shifted by `offset`; every index of `self` must be below it.
    pub fn concat(&self, offset: u32, other: &SparseVec) -> SparseVec {
        debug_assert!(self.entries.last().is_none_or(|e| e.0 < offset));
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().map(|(i, c)| (i + offset, c.clone())));
        SparseVec { entries }
    }

    pub fn max_index(&self) -> Option<u32> {
        self.entries.last().map(|e| e.0)
    }
}

/// A basis of a subspace of `k^dim` in echelon form: every row starts with a
/// distinct pivot whose coefficient is one, and every row vanishes at the
/// pivot columns of the rows inserted before it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    dim: usize,
    field: FieldKind,
    rows: Vec<SparseVec>,
    pivot_row: Vec<u32>,
}

const NO_ROW: u32 = u32::MAX;

impl Echelon {
    pub fn new(dim: usize, field: FieldKind) -> Self {
        Echelon {
            dim,
            field,
            rows: Vec::new(),
            pivot_row: vec![NO_ROW; dim],
        }
    }

    /// The span of the given vectors.
    pub fn from_vectors<I: IntoIterator<Item = SparseVec>>(dim: usize, field: FieldKind, vs: I) -> Self {
        let mut e = Echelon::new(dim, field);
        for v in vs {
            e.insert(&v);
        }
        e
    }

    /// The span of the unit vectors `e_from, ..., e_{dim-1}`.
    pub fn coordinate_tail(dim: usize, from: usize, field: FieldKind) -> Self {
        let mut e = Echelon::new(dim, field);
        for i in from..dim {
            e.pivot_row[i] = e.rows.len() as u32;
            e.rows.push(SparseVec::unit(i as u32, field));
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.pivot_row[col as usize] != NO_ROW
    }

    pub fn pivot_row(&self, col: u32) -> Option<&SparseVec> {
        match self.pivot_row[col as usize] {
            NO_ROW => None,
            r => Some(&self.rows[r as usize]),
        }
    }

    /// The remainder of `v` after eliminating every pivot column. The result
    /// depends only on the spanned subspace, not on the chosen basis.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let lo = match v.leading() {
            Some(lo) => lo as usize,
            None => return SparseVec::new(),
        };
        if self.rows.is_empty() {
            return v.clone();
        }
        let zero = self.field.zero();
        let mut acc: Vec<FieldScalar> = vec![zero; self.dim - lo];
        for (i, c) in v.entries() {
            acc[*i as usize - lo] = c.clone();
        }
        let mut out = Vec::new();
        for k in 0..acc.len() {
            if acc[k].is_zero() {
                continue;
            }
            let col = k + lo;
            match self.pivot_row[col] {
                NO_ROW => out.push((col as u32, core::mem::replace(&mut acc[k], self.field.zero()))),
                r => {
                    let c = core::mem::replace(&mut acc[k], self.field.zero());
                    for (j, x) in self.rows[r as usize].entries().iter().skip(1) {
                        let slot = &mut acc[*j as usize - lo];
                        *slot = slot.sub_mul(&c, x);
                    }
                }
            }
        }
        SparseVec { entries: out }
    }

    /// Coefficients of `v` in the stored rows (indexed by insertion order), or
    /// `None` when `v` is outside the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        let lo = match v.leading() {
            Some(lo) => lo as usize,
            None => return Some(SparseVec::new()),
        };
        let mut acc: Vec<FieldScalar> = vec![self.field.zero(); self.dim - lo];
        for (i, c) in v.entries() {
            acc[*i as usize - lo] = c.clone();
        }
        let mut coeffs = Vec::new();
        for k in 0..acc.len() {
            if acc[k].is_zero() {
                continue;
            }
            match self.pivot_row[k + lo] {
                NO_ROW => return None,
                r => {
                    let c = core::mem::replace(&mut acc[k], self.field.zero());
                    for (j, x) in self.rows[r as usize].entries().iter().skip(1) {
                        let slot = &mut acc[*j as usize - lo];
                        *slot = slot.sub_mul(&c, x);
                    }
                    coeffs.push((r, c));
                }
            }
        }
        Some(SparseVec::from_unsorted(coeffs))
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        match r.leading() {
            None => false,
            Some(p) => {
                let inv = r.entries[0].1.inv().expect("nonzero pivot");
                let row = if inv.is_one() { r } else { r.scale(&inv) };
                self.pivot_row[p as usize] = self.rows.len() as u32;
                self.rows.push(row);
                true
            }
        }
    }

    pub fn pivots(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().map(|r| r.leading().expect("nonzero row"))
    }

    /// Columns that are not pivots, ascending.
    pub fn non_pivots(&self) -> Vec<u32> {
        (0..self.dim as u32).filter(|c| !self.is_pivot(*c)).collect()
    }

    /// Restricts to the first `bound` coordinates. Rows whose pivot lies at or
    /// beyond the bound vanish; the rest stay independent.
    pub fn truncate(&self, bound: usize) -> Echelon {
        let mut e = Echelon::new(bound, self.field);
        for row in &self.rows {
            let p = row.leading().expect("nonzero row") as usize;
            if p < bound {
                e.pivot_row[p] = e.rows.len() as u32;
                e.rows.push(row.truncate(bound as u32));
            }
        }
        e
    }
}

/// Basis of `{ sum l_i * right_i : sum l_i * left_i = 0 }`.
///
/// With `right_i` the identity this is a kernel; with `(u, u)` and `(v, 0)`
/// pairs it is an intersection.
pub fn relation_space<I>(left_dim: usize, right_dim: usize, field: FieldKind, pairs: I) -> Vec<SparseVec>
where
    I: IntoIterator<Item = (SparseVec, SparseVec)>,
{
    let mut e = Echelon::new(left_dim + right_dim, field);
    for (l, r) in pairs {
        e.insert(&l.concat(left_dim as u32, &r));
    }
    e.rows()
        .iter()
        .filter(|row| row.leading().expect("nonzero row") as usize >= left_dim)
        .map(|row| row.slice(left_dim as u32, (left_dim + right_dim) as u32))
        .collect()
}

/// A linear map given by the images of the source basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: Vec<SparseVec>,
}

impl Matrix {
    pub fn zero(rows: usize, ncols: usize) -> Self {
        Matrix {
            rows,
            cols: vec![SparseVec::new(); ncols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn rank(&self, field: FieldKind) -> usize {
        Echelon::from_vectors(self.rows, field, self.cols.iter().cloned()).rank()
    }

    pub fn apply(&self, v: &SparseVec, field: FieldKind) -> SparseVec {
        let mut acc = SparseVec::new();
        for (k, c) in v.entries() {
            acc = acc.add_scaled(c, &self.cols[*k as usize]);
        }
        let _ = field;
        acc
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &Matrix, field: FieldKind) -> Matrix {
        assert_eq!(rhs.rows, self.ncols(), "dimension mismatch");
        Matrix {
            rows: self.rows,
            cols: rhs.cols.iter().map(|c| self.apply(c, field)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> FieldScalar {
        FieldKind::Rationals.from_i64(n)
    }

    fn v(e: &[(u32, i64)]) -> SparseVec {
        SparseVec::from_unsorted(e.iter().map(|(i, c)| (*i, q(*c))).collect())
    }

    #[test]
    fn echelon_rank_and_membership() {
        let k = FieldKind::Rationals;
        let mut e = Echelon::new(4, k);
        assert!(e.insert(&v(&[(0, 1), (1, 2)])));
        assert!(e.insert(&v(&[(0, 2), (1, 4), (3, 1)])));
        assert!(!e.insert(&v(&[(0, 3), (1, 6), (3, 5)])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&v(&[(3, 7)])));
        assert!(!e.contains(&v(&[(1, 1)])));
        assert_eq!(e.non_pivots(), vec![1, 2]);
        let r = e.reduce(&v(&[(0, 1), (2, 5)]));
        assert_eq!(r, v(&[(1, -2), (2, 5)]));
    }

    #[test]
    fn truncation_keeps_low_pivots() {
        let k = FieldKind::Rationals;
        let e = Echelon::from_vectors(4, k, [v(&[(0, 1), (3, 1)]), v(&[(2, 1), (3, 1)]), v(&[(3, 1)])]);
        let t = e.truncate(2);
        assert_eq!(t.rank(), 1);
        assert_eq!(t.rows()[0], v(&[(0, 1)]));
    }

    #[test]
    fn intersection_via_relations() {
        let k = FieldKind::Rationals;
        // span(e0, e1) ∩ span(e1 + e2, e0 - e1)
        let u = [v(&[(0, 1)]), v(&[(1, 1)])];
        let w = [v(&[(1, 1), (2, 1)]), v(&[(0, 1), (1, -1)])];
        let pairs = u
            .iter()
            .map(|x| (x.clone(), x.clone()))
            .chain(w.iter().map(|x| (x.clone(), SparseVec::new())));
        let basis = relation_space(3, 3, k, pairs);
        assert_eq!(basis.len(), 1);
        let e = Echelon::from_vectors(3, k, basis);
        assert!(e.contains(&v(&[(0, 1), (1, -1)])));
    }

    #[test]
    fn compose_and_rank() {
        let k = FieldKind::Rationals;
        let a = Matrix { rows: 2, cols: vec![v(&[(0, 1)]), v(&[(0, 1)])] };
        let b = Matrix { rows: 2, cols: vec![v(&[(0, 1), (1, -1)])] };
        assert!(a.compose(&b, k).is_zero());
        assert_eq!(a.rank(k), 1);
    }
}
