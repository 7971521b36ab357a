use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{relation_space, Echelon, SparseVec};
use crate::ring::FieldKind;

/// A subspace of `M/m^N M`, stored as an echelon basis over the standard
/// monomial coordinates of that truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    level: u32,
    ech: Echelon,
}

impl Subspace {
    pub fn zero(level: u32, ambient: usize, field: FieldKind) -> Self {
        Subspace {
            level,
            ech: Echelon::new(ambient, field),
        }
    }

    /// The unit vectors with index in `[from, ambient)`.
    pub fn tail(level: u32, ambient: usize, from: usize, field: FieldKind) -> Self {
        Subspace {
            level,
            ech: Echelon::coordinate_tail(ambient, from.min(ambient), field),
        }
    }

    pub fn full(level: u32, ambient: usize, field: FieldKind) -> Self {
        Subspace::tail(level, ambient, 0, field)
    }

    pub fn from_vectors<I: IntoIterator<Item = SparseVec>>(level: u32, ambient: usize, field: FieldKind, vs: I) -> Self {
        Subspace {
            level,
            ech: Echelon::from_vectors(ambient, field, vs),
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn ambient_dim(&self) -> usize {
        self.ech.dim()
    }

    pub fn field(&self) -> FieldKind {
        self.ech.field()
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    pub fn basis(&self) -> &[SparseVec] {
        self.ech.rows()
    }

    pub fn echelon(&self) -> &Echelon {
        &self.ech
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.ech.contains(v)
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.ech.reduce(v)
    }

    pub fn insert(&mut self, v: &SparseVec) -> bool {
        self.ech.insert(v)
    }

    fn check_same(&self, other: &Subspace) {
        assert_eq!(self.level, other.level, "subspaces at different truncation levels");
        assert_eq!(self.ambient_dim(), other.ambient_dim());
    }

    /// Index of the first basis vector of `self` outside `other`.
    pub fn first_outside(&self, other: &Subspace) -> Option<usize> {
        self.check_same(other);
        self.basis().iter().position(|v| !other.contains(v))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.first_outside(other).is_none()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        self.check_same(other);
        let (big, small) = if self.dim() >= other.dim() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        for v in small.basis() {
            out.ech.insert(v);
        }
        out
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        self.check_same(other);
        let n = self.ambient_dim();
        let pairs = self
            .basis()
            .iter()
            .map(|u| (u.clone(), u.clone()))
            .chain(other.basis().iter().map(|v| (v.clone(), SparseVec::new())));
        let basis = relation_space(n, n, self.field(), pairs);
        Subspace::from_vectors(self.level, n, self.field(), basis)
    }

    /// Image in the lower truncation whose standard coordinates are the first
    /// `prefix` ones.
    pub fn project(&self, level: u32, prefix: usize) -> Subspace {
        assert!(level <= self.level);
        Subspace {
            level,
            ech: self.ech.truncate(prefix),
        }
    }

    pub fn equals(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }

    /// Smallest `s` below the level such that every standard coordinate of
    /// degree `s` is a pivot. Then `m^s M` lies in this subspace plus
    /// `m^{s+1} M`, and Nakayama's lemma upgrades that to `m^s M` lying in the
    /// submodule itself.
    pub fn nakayama_degree(&self, std_prefix: impl Fn(u32) -> usize) -> Option<u32> {
        (0..self.level).find(|&s| (std_prefix(s)..std_prefix(s + 1)).all(|c| self.ech.is_pivot(c as u32)))
    }
}

/// `dim big - dim small`, after checking `small ⊆ big`.
pub fn quotient_dim(big: &Subspace, small: &Subspace) -> Result<usize> {
    if let Some(index) = small.first_outside(big) {
        return Err(Error::Containment { index });
    }
    Ok(big.dim() - small.dim())
}

/// Coordinates on `V/S` for a subspace `S` of the ambient space `V`: the
/// classes of the non-pivot unit vectors form a basis.
#[derive(Clone, Debug)]
pub struct QuotientCoords {
    sub: Subspace,
    position: Vec<u32>,
    basis: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl QuotientCoords {
    pub fn new(sub: Subspace) -> Self {
        let basis = sub.ech.non_pivots();
        let mut position = vec![NONE; sub.ambient_dim()];
        for (k, c) in basis.iter().enumerate() {
            position[*c as usize] = k as u32;
        }
        QuotientCoords { sub, position, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    /// Ambient coordinate index of the `k`-th quotient basis vector.
    pub fn representative(&self, k: usize) -> u32 {
        self.basis[k]
    }

    /// Coordinates of the class of `v`.
    pub fn coords(&self, v: &SparseVec) -> SparseVec {
        let r = self.sub.reduce(v);
        SparseVec::from_sorted(
            r.entries()
                .iter()
                .map(|(c, x)| {
                    let p = self.position[*c as usize];
                    debug_assert!(p != NONE);
                    (p, x.clone())
                })
                .collect(),
        )
    }
}
