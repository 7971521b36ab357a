//! Naive cross-checks that share no code with the truncation engine:
//! monomial combinatorics, dense elimination over explicit monomial lists,
//! and the Hilbert-series test for regular sequences.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::ring::{FieldKind, FieldScalar, Monomial, Poly};

/// `ℓ(A/I)`, possibly infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Colength {
    Finite(u64),
    Infinite,
}

/// A monomial ideal given by its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    nvars: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Keeps only the minimal generators.
    pub fn new(nvars: usize, gens: Vec<Monomial>) -> Self {
        let mut sorted = gens;
        sorted.sort();
        sorted.dedup();
        let mut min: Vec<Monomial> = Vec::new();
        for g in sorted {
            if !min.iter().any(|h| h.divides(&g)) {
                min.retain(|h| !g.divides(h));
                min.push(g);
            }
        }
        MonomialIdeal { nvars, gens: min }
    }

    /// From polynomials that must each be a single term.
    pub fn from_polys(nvars: usize, ps: &[Poly]) -> Option<Self> {
        let mut gens = Vec::with_capacity(ps.len());
        for p in ps {
            if p.num_terms() != 1 {
                return None;
            }
            gens.push(p.terms().next().expect("one term").0.clone());
        }
        Some(MonomialIdeal::new(nvars, gens))
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        MonomialIdeal::new(self.nvars, g)
    }

    pub fn product(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut g = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                g.push(a.mul(b));
            }
        }
        MonomialIdeal::new(self.nvars, g)
    }

    pub fn power(&self, k: u32) -> MonomialIdeal {
        let mut out = MonomialIdeal::new(self.nvars, vec![Monomial::one(self.nvars)]);
        for _ in 0..k {
            out = out.product(self);
        }
        out
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut g = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                g.push(a.lcm(b));
            }
        }
        MonomialIdeal::new(self.nvars, g)
    }

    /// `I : m` for a monomial `m`.
    pub fn colon(&self, m: &Monomial) -> MonomialIdeal {
        let gens = self
            .gens
            .iter()
            .map(|g| {
                Monomial::new(
                    g.exps()
                        .iter()
                        .zip(m.exps())
                        .map(|(a, b)| a.saturating_sub(*b))
                        .collect(),
                )
            })
            .collect();
        MonomialIdeal::new(self.nvars, gens)
    }

    /// The maximal ideal raised to `k`.
    pub fn maximal_power(nvars: usize, k: u32) -> MonomialIdeal {
        MonomialIdeal::new(nvars, monomials_of_degree(nvars, k))
    }

    /// Number of monomials of degree `< level` outside the ideal, i.e.
    /// `ℓ(A/(I + m^level))`.
    pub fn count_below(&self, level: u32) -> u64 {
        (0..level)
            .flat_map(|d| monomials_of_degree(self.nvars, d))
            .filter(|m| !self.contains(m))
            .count() as u64
    }
}

/// `ℓ(A/I)` by counting standard monomials; infinite when some variable has
/// no pure power in `I`. Gives up (returns `None`) past `n_cap` monomials.
pub fn monomial_colength(i: &MonomialIdeal, n_cap: u64) -> Option<Colength> {
    let n = i.nvars;
    let mut bounds = vec![0u32; n];
    for (v, b) in bounds.iter_mut().enumerate() {
        let pure = i
            .gens
            .iter()
            .filter(|g| g.exps().iter().enumerate().all(|(w, e)| w == v || *e == 0))
            .map(|g| g.exps()[v])
            .min();
        match pure {
            Some(p) => *b = p,
            None => return Some(Colength::Infinite),
        }
    }
    let total: u64 = bounds.iter().map(|b| *b as u64).product();
    if total > n_cap {
        return None;
    }
    let mut count = 0u64;
    let mut e = vec![0u32; n];
    loop {
        if !i.contains(&Monomial::new(e.clone())) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == n {
                return Some(Colength::Finite(count));
            }
            e[k] += 1;
            if e[k] < bounds[k] {
                break;
            }
            e[k] = 0;
            k += 1;
        }
    }
}

/// All monomials of a given degree in `nvars` variables.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut e = vec![0u32; nvars];
    fn rec(i: usize, left: u32, e: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == e.len() {
            e[i] = left;
            out.push(Monomial::new(e.clone()));
            return;
        }
        for k in 0..=left {
            e[i] = k;
            rec(i + 1, left - k, e, out);
        }
        e[i] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(0, d, &mut e, &mut out);
    out
}

/// Row space of dense vectors, reduced by plain Gaussian elimination.
struct DenseSpan {
    field: FieldKind,
    rows: Vec<(usize, Vec<FieldScalar>)>,
}

impl DenseSpan {
    fn new(field: FieldKind) -> Self {
        DenseSpan { field, rows: Vec::new() }
    }

    fn reduce(&self, v: &mut [FieldScalar]) {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x = x.sub_mul(&c, r);
                }
            }
        }
    }

    fn insert(&mut self, mut v: Vec<FieldScalar>) -> bool {
        self.reduce(&mut v);
        match v.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let inv = v[p].inv().expect("nonzero");
                for x in v.iter_mut() {
                    *x = x.mul(&inv);
                }
                // keep earlier rows reduced at the new pivot
                for (_, row) in self.rows.iter_mut() {
                    if !row[p].is_zero() {
                        let c = row[p].clone();
                        for (x, r) in row.iter_mut().zip(&v) {
                            *x = x.sub_mul(&c, r);
                        }
                    }
                }
                self.rows.push((p, v));
                true
            }
        }
    }

    fn contains(&self, v: &[FieldScalar]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn zero_vec(&self, n: usize) -> Vec<FieldScalar> {
        vec![self.field.zero(); n]
    }
}

/// Explicit list of monomials with a position map.
struct MonomialBasis {
    index: BTreeMap<Vec<u32>, usize>,
    monos: Vec<Monomial>,
}

impl MonomialBasis {
    fn below(nvars: usize, level: u32) -> Self {
        MonomialBasis::from_monos((0..level).flat_map(|d| monomials_of_degree(nvars, d)).collect())
    }

    fn of_degree(nvars: usize, d: u32) -> Self {
        MonomialBasis::from_monos(monomials_of_degree(nvars, d))
    }

    fn from_monos(monos: Vec<Monomial>) -> Self {
        let index = monos.iter().enumerate().map(|(i, m)| (m.exps().to_vec(), i)).collect();
        MonomialBasis { index, monos }
    }

    fn len(&self) -> usize {
        self.monos.len()
    }

    /// Dense coordinates of `p`, dropping monomials outside the basis.
    fn dense(&self, p: &Poly, field: FieldKind) -> Vec<FieldScalar> {
        let mut v = vec![field.zero(); self.len()];
        for (m, c) in p.terms() {
            if let Some(i) = self.index.get(m.exps()) {
                v[*i] = c.clone();
            }
        }
        v
    }
}

/// Whether `p ∈ (gens) + m^level` in `k[x]`, by spanning every monomial
/// multiple of every generator below the level.
pub fn brute_membership(p: &Poly, gens: &[Poly], level: u32) -> bool {
    let nvars = p.nvars();
    let field = p.field();
    let basis = MonomialBasis::below(nvars, level);
    let mut span = DenseSpan::new(field);
    for g in gens {
        for m in &basis.monos {
            let prod = g.mul_monomial(m);
            span.insert(basis.dense(&prod, field));
        }
    }
    span.contains(&basis.dense(p, field))
}

/// `dim k[x]/((gens) + m^level)` by dense elimination.
pub fn brute_colength_below(nvars: usize, field: FieldKind, gens: &[Poly], level: u32) -> u64 {
    let basis = MonomialBasis::below(nvars, level);
    let mut span = DenseSpan::new(field);
    for g in gens {
        for m in &basis.monos {
            span.insert(basis.dense(&g.mul_monomial(m), field));
        }
    }
    (basis.len() - span.rank()) as u64
}

/// All products of `k` generators.
pub fn ideal_power_gens(gens: &[Poly], k: u32) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::new();
    if gens.is_empty() {
        return out;
    }
    out.push(Poly::one(gens[0].nvars(), gens[0].field()));
    for _ in 0..k {
        let mut next: Vec<Poly> = Vec::new();
        for p in &out {
            for g in gens {
                let x = p.mul(g);
                if !next.contains(&x) {
                    next.push(x);
                }
            }
        }
        out = next;
    }
    out
}

/// Dimension of `(forms)_n` inside the polynomial ring `k[X]` graded by
/// degree, for homogeneous `forms`.
pub fn homogeneous_ideal_piece_dim(nvars: usize, field: FieldKind, forms: &[Poly], n: u32) -> usize {
    let basis = MonomialBasis::of_degree(nvars, n);
    let mut span = DenseSpan::new(field);
    for f in forms {
        let df = f.degree().unwrap_or(0);
        if df > n {
            continue;
        }
        for m in monomials_of_degree(nvars, n - df) {
            span.insert(basis.dense(&f.mul_monomial(&m), field));
        }
    }
    span.rank()
}

/// `dim [(forms) : g / (forms)]_n` in `k[X]`, for homogeneous inputs.
pub fn homogeneous_colon_dim(nvars: usize, field: FieldKind, forms: &[Poly], g: &Poly, n: u32) -> usize {
    let dg = g.degree().unwrap_or(0);
    let top = MonomialBasis::of_degree(nvars, n + dg);
    let mut span = DenseSpan::new(field);
    for f in forms {
        let df = f.degree().unwrap_or(0);
        if df > n + dg {
            continue;
        }
        for m in monomials_of_degree(nvars, n + dg - df) {
            span.insert(top.dense(&f.mul_monomial(&m), field));
        }
    }
    // kernel of h ↦ g h modulo (forms), on the monomials of degree n
    let src = monomials_of_degree(nvars, n);
    let ns = src.len();
    let mut rel = DenseSpan::new(field);
    for (i, m) in src.iter().enumerate() {
        let mut img = top.dense(&g.mul_monomial(m), field);
        span.reduce(&mut img);
        let mut row = rel.zero_vec(top.len() + ns);
        row[..top.len()].clone_from_slice(&img);
        row[top.len() + i] = field.one();
        rel.insert(row);
    }
    let colon = rel.rows.iter().filter(|(p, _)| *p >= top.len()).count();
    colon - homogeneous_ideal_piece_dim(nvars, field, forms, n)
}

/// Hilbert-series test for a regular sequence of homogeneous elements of
/// degrees `betas` on a graded module: regular iff the quotient's dims equal
/// the coefficients of `Π (1 - z^β) · H_G(z)`. Both inputs list dims from
/// degree 0; only the common window is compared.
pub fn regseq_hilbert_series(betas: &[u32], module_dims: &[u64], quotient_dims: &[u64]) -> bool {
    let len = module_dims.len().min(quotient_dims.len());
    let mut series: Vec<i128> = module_dims[..len].iter().map(|x| *x as i128).collect();
    for b in betas {
        let b = *b as usize;
        for k in (b..len).rev() {
            series[k] -= series[k - b];
        }
    }
    series.iter().zip(quotient_dims).all(|(s, q)| *s == *q as i128)
}

/// First degree where the test of [`regseq_hilbert_series`] fails.
pub fn regseq_first_mismatch(betas: &[u32], module_dims: &[u64], quotient_dims: &[u64]) -> Option<usize> {
    let len = module_dims.len().min(quotient_dims.len());
    (1..=len).find(|&l| !regseq_hilbert_series(betas, &module_dims[..l], &quotient_dims[..l])).map(|l| l - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PolyRing;
    use alloc::string::String;

    fn ring() -> PolyRing {
        PolyRing::new(vec![String::from("x"), String::from("y")], FieldKind::Rationals).unwrap()
    }

    fn mi(r: &PolyRing, s: &[&str]) -> MonomialIdeal {
        let ps: Vec<Poly> = s.iter().map(|x| r.parse(x).unwrap()).collect();
        MonomialIdeal::from_polys(2, &ps).unwrap()
    }

    #[test]
    fn colengths() {
        let r = ring();
        assert_eq!(monomial_colength(&mi(&r, &["y^2", "x^3"]), 1000), Some(Colength::Finite(6)));
        assert_eq!(monomial_colength(&mi(&r, &["x", "y"]), 1000), Some(Colength::Finite(1)));
        assert_eq!(monomial_colength(&mi(&r, &["x"]), 1000), Some(Colength::Infinite));
        assert_eq!(mi(&r, &["x^2", "x*y", "x^3"]).gens().len(), 2);
    }

    #[test]
    fn membership() {
        let r = ring();
        let q = [r.parse("x^2").unwrap(), r.parse("y").unwrap()];
        assert!(brute_membership(&r.parse("x^4").unwrap(), &ideal_power_gens(&q, 2), 8));
        assert!(!brute_membership(&r.parse("x^3").unwrap(), &ideal_power_gens(&q, 3), 8));
        assert!(brute_membership(&r.zero(), &[], 4));
    }

    #[test]
    fn homogeneous_colons() {
        let r = ring();
        let y2 = r.parse("y^2").unwrap();
        // [Y^2 B : Y^2 / Y^2 B]_n = B_n / (Y^2)_n
        assert_eq!(homogeneous_colon_dim(2, FieldKind::Rationals, core::slice::from_ref(&y2), &y2, 5), 2);
        let x = r.parse("x").unwrap();
        assert_eq!(homogeneous_colon_dim(2, FieldKind::Rationals, &[y2], &x, 5), 0);
    }

    #[test]
    fn series_test() {
        let free: Vec<u64> = (0..10).map(|n| n + 1).collect();
        let mut q = vec![0u64; 10];
        q[0] = 1;
        assert!(regseq_hilbert_series(&[1, 1], &free, &q));
        // k[X,Y]/(Y^2) has dims 1,2,2,2,...
        let quot: Vec<u64> = (0..10).map(|n| if n == 0 { 1 } else { 2 }).collect();
        assert!(!regseq_hilbert_series(&[2, 2], &free, &quot));
        assert_eq!(regseq_first_mismatch(&[2, 2], &free, &quot), Some(2));
    }
}
