use alloc::format;
use alloc::vec::Vec;

use super::ctx::{LocalRingCtx, ModulePresentation, TruncationPolicy};
use super::subspace::Subspace;
use super::truncated::{PreparedPoly, TruncatedModule};
use crate::error::{Error, Result};
use crate::linalg::{relation_space, SparseVec};
use crate::ring::{FieldKind, Poly, PolyRing, Valuation};

/// An ideal of `A` given by generators. The maximal ideal is flagged so that
/// its powers can be written down directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    gens: Vec<Poly>,
    maximal: bool,
}

impl Ideal {
    pub fn maximal(ring: &PolyRing) -> Self {
        Ideal {
            gens: (0..ring.nvars()).map(|i| ring.var(i)).collect(),
            maximal: true,
        }
    }

    pub fn new(gens: Vec<Poly>) -> Self {
        Ideal {
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            maximal: false,
        }
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_maximal(&self) -> bool {
        self.maximal
    }

    /// Smallest order of a generator; every element of `q^k` has order at
    /// least `k` times this.
    pub fn min_ord(&self) -> Valuation {
        self.gens.iter().map(|g| g.ord()).min().unwrap_or(Valuation::Infinite)
    }

    pub fn max_degree(&self) -> u32 {
        self.gens.iter().filter_map(|g| g.degree()).max().unwrap_or(1)
    }
}

struct PowerCache {
    ideal: Ideal,
    prepared: Vec<PreparedPoly>,
    powers: Vec<Subspace>,
    nakayama: Vec<Option<u32>>,
}

/// Linear algebra in the truncations `M/m^k M` of a fixed cyclic module,
/// backed by one [`TruncatedModule`] at the current working level.
///
/// All subspaces handed out live at a caller-chosen level `k` at or below the
/// working level. Images of submodules commute with truncation, so a power
/// `q^j M` computed once at the working level serves every lower `k` by
/// projection.
pub struct Engine {
    ctx: LocalRingCtx,
    module: ModulePresentation,
    tm: TruncatedModule,
    powers: Vec<PowerCache>,
}

impl Engine {
    pub fn new(ctx: LocalRingCtx, module: ModulePresentation) -> Self {
        let p = ctx.policy;
        let level = (p.n_start + (p.agree_window - 1) * p.n_step).min(p.n_max);
        let tm = TruncatedModule::new(ctx.d(), ctx.ring.field(), &module.relations, level);
        Engine {
            ctx,
            module,
            tm,
            powers: Vec::new(),
        }
    }

    /// An engine for another cyclic module over the same ring.
    pub fn sibling(&self, module: ModulePresentation) -> Engine {
        Engine::new(self.ctx.clone(), module)
    }

    pub fn ctx(&self) -> &LocalRingCtx {
        &self.ctx
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.ctx.policy
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ctx.ring
    }

    pub fn field(&self) -> FieldKind {
        self.ctx.ring.field()
    }

    pub fn module(&self) -> &ModulePresentation {
        &self.module
    }

    pub fn level(&self) -> u32 {
        self.tm.level()
    }

    pub fn truncated(&self) -> &TruncatedModule {
        &self.tm
    }

    /// Grows the working level to at least `k`.
    pub fn ensure_level(&mut self, k: u32) -> Result<()> {
        if k <= self.level() {
            return Ok(());
        }
        let n_max = self.ctx.policy.n_max;
        if k > n_max {
            return Err(Error::NotStabilized {
                what: format!("truncation level {} requested", k),
                n_max,
            });
        }
        let target = k.max(self.level() + self.level() / 2).min(n_max);
        self.tm = TruncatedModule::new(self.ctx.d(), self.field(), &self.module.relations, target);
        self.powers.clear();
        Ok(())
    }

    /// `dim M/m^k M`.
    pub fn prefix(&self, k: u32) -> usize {
        self.tm.std_prefix(k)
    }

    pub fn full(&mut self, k: u32) -> Result<Subspace> {
        self.ensure_level(k)?;
        Ok(Subspace::full(k, self.prefix(k), self.field()))
    }

    pub fn zero(&mut self, k: u32) -> Result<Subspace> {
        self.ensure_level(k)?;
        Ok(Subspace::zero(k, self.prefix(k), self.field()))
    }

    /// `m^j M` at level `k`: the standard monomials of degree `>= j`.
    pub fn maximal_power(&mut self, j: i64, k: u32) -> Result<Subspace> {
        self.ensure_level(k)?;
        let from = if j <= 0 { 0 } else { self.prefix((j as u32).min(k)) };
        Ok(Subspace::tail(k, self.prefix(k), from, self.field()))
    }

    pub fn prepare(&self, p: &Poly) -> PreparedPoly {
        PreparedPoly::new(p)
    }

    pub fn mul(&self, p: &PreparedPoly, v: &SparseVec, k: u32) -> SparseVec {
        self.tm.mul(p, v, k)
    }

    pub fn reduce_poly(&mut self, p: &Poly, k: u32) -> Result<SparseVec> {
        self.ensure_level(k)?;
        Ok(self.tm.reduce_poly(p, k))
    }

    pub fn to_poly(&self, v: &SparseVec) -> Poly {
        self.tm.to_poly(v)
    }

    /// The image of the ideal `(gens)` in `M/m^k M`.
    pub fn ideal_image(&mut self, gens: &[Poly], k: u32) -> Result<Subspace> {
        self.ensure_level(k)?;
        let n = self.prefix(k);
        let field = self.field();
        if gens.iter().any(|g| g.ord() == Valuation::Finite(0)) {
            return Ok(Subspace::full(k, n, field));
        }
        let mut s = Subspace::zero(k, n, field);
        for g in gens {
            let ord = match g.ord().finite() {
                Some(o) => o,
                None => continue,
            };
            let pg = PreparedPoly::new(g);
            for i in 0..self.prefix(k.saturating_sub(ord)) {
                let v = self.tm.mul(&pg, &SparseVec::unit(i as u32, field), k);
                s.insert(&v);
            }
        }
        Ok(s)
    }

    /// `a * S` for a submodule image `S`.
    pub fn image_under(&self, a: &PreparedPoly, s: &Subspace) -> Subspace {
        let k = s.level();
        let vs: Vec<SparseVec> = s.basis().iter().map(|v| self.tm.mul(a, v, k)).collect();
        Subspace::from_vectors(k, s.ambient_dim(), self.field(), vs)
    }

    /// `{u : a u ∈ S}`.
    pub fn colon(&self, s: &Subspace, a: &PreparedPoly) -> Subspace {
        let k = s.level();
        let n = s.ambient_dim();
        let field = self.field();
        if a.is_zero() {
            return Subspace::full(k, n, field);
        }
        let pairs = (0..n).map(|i| {
            let e = SparseVec::unit(i as u32, field);
            (s.reduce(&self.tm.mul(a, &e, k)), e)
        });
        let basis = relation_space(n, n, field, pairs);
        Subspace::from_vectors(k, n, field, basis)
    }

    fn cache_index(&mut self, ideal: &Ideal) -> usize {
        if let Some(i) = self.powers.iter().position(|c| c.ideal == *ideal) {
            return i;
        }
        let l = self.level();
        let full = Subspace::full(l, self.prefix(l), self.field());
        self.powers.push(PowerCache {
            ideal: ideal.clone(),
            prepared: ideal.gens.iter().map(PreparedPoly::new).collect(),
            powers: alloc::vec![full],
            nakayama: alloc::vec![Some(0)],
        });
        self.powers.len() - 1
    }

    fn extend_powers(&mut self, ci: usize, j: usize) {
        let l = self.level();
        while self.powers[ci].powers.len() <= j {
            let prev = self.powers[ci].powers.last().expect("q^0 present");
            let mut next = Subspace::zero(l, prev.ambient_dim(), self.field());
            for g in &self.powers[ci].prepared {
                for v in prev.basis() {
                    next.insert(&self.tm.mul(g, v, l));
                }
            }
            let tm = &self.tm;
            let nak = next.nakayama_degree(|s| tm.std_prefix(s));
            self.powers[ci].powers.push(next);
            self.powers[ci].nakayama.push(nak);
        }
    }

    /// `q^j M` at level `k`; the whole space for `j <= 0`.
    pub fn power(&mut self, ideal: &Ideal, j: i64, k: u32) -> Result<Subspace> {
        if ideal.maximal || j <= 0 {
            return self.maximal_power(if j <= 0 { 0 } else { j }, k);
        }
        self.ensure_level(k)?;
        let ci = self.cache_index(ideal);
        self.extend_powers(ci, j as usize);
        let prefix = self.prefix(k);
        Ok(self.powers[ci].powers[j as usize].project(k, prefix))
    }

    /// The least `s` with `m^s M ⊆ q^j M`, certified by Nakayama's lemma at
    /// some truncation level. Fails when no level up to `n_max` certifies it,
    /// which is what happens when `q` is not an ideal of definition for `M`.
    pub fn saturation(&mut self, ideal: &Ideal, j: i64) -> Result<u32> {
        if j <= 0 {
            return Ok(0);
        }
        if ideal.maximal {
            return Ok(j as u32);
        }
        loop {
            let ci = self.cache_index(ideal);
            self.extend_powers(ci, j as usize);
            if let Some(s) = self.powers[ci].nakayama[j as usize] {
                return Ok(s);
            }
            let n_max = self.ctx.policy.n_max;
            if self.level() >= n_max {
                return Err(Error::NotStabilized {
                    what: format!("containment of a power of m in q^{}M", j),
                    n_max,
                });
            }
            let next = (self.level() + self.level() / 2).max(self.level() + 1);
            self.ensure_level(next.min(n_max))?;
        }
    }

    /// Exponent bound below which `q^j` can still contain a given element of
    /// order `ord`.
    pub fn power_bound(&self, ideal: &Ideal, ord: u32) -> Option<u32> {
        ideal.min_ord().finite().filter(|m| *m > 0).map(|m| ord / m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::String;
    use alloc::vec;

    fn ctx() -> LocalRingCtx {
        let ring = PolyRing::new(vec![String::from("x"), String::from("y")], FieldKind::Rationals).unwrap();
        LocalRingCtx::new(ring, TruncationPolicy::new(4, 1, 40, 3).unwrap()).unwrap()
    }

    #[test]
    fn maximal_ideal_image() {
        let c = ctx();
        let gens = vec![c.ring.parse("x").unwrap(), c.ring.parse("y").unwrap()];
        let mut e = Engine::new(c, ModulePresentation::free());
        let s = e.ideal_image(&gens, 3).unwrap();
        assert_eq!(s.dim(), 5);
        assert!(e.ideal_image(&[], 3).unwrap().dim() == 0);
    }

    #[test]
    fn power_of_non_maximal_ideal() {
        let c = ctx();
        let q = Ideal::new(vec![c.ring.parse("x^2").unwrap(), c.ring.parse("y").unwrap()]);
        let mut e = Engine::new(c, ModulePresentation::free());
        // q^2 = (x^4, x^2 y, y^2) misses 1, x, y, x^2, xy, x^3 below degree 6
        let s = e.power(&q, 2, 6).unwrap();
        assert_eq!(e.prefix(6) - s.dim(), 6);
        assert_eq!(e.saturation(&q, 2).unwrap(), 4);
        assert_eq!(e.power(&q, -3, 6).unwrap().dim(), 21);
    }

    #[test]
    fn colon_examples() {
        let c = ctx();
        let r = c.ring.clone();
        let mut e = Engine::new(c, ModulePresentation::free());
        let s = e.ideal_image(&[r.parse("y^2").unwrap(), r.parse("x^3").unwrap()], 10).unwrap();
        let y = e.prepare(&r.parse("y").unwrap());
        let col = e.colon(&s, &y);
        let expect = e.ideal_image(&[r.parse("y").unwrap(), r.parse("x^3").unwrap()], 10).unwrap();
        assert!(col.equals(&expect));
        let one = e.prepare(&r.one());
        assert!(e.colon(&s, &one).equals(&s));
        let zero = e.prepare(&r.zero());
        assert_eq!(e.colon(&s, &zero).dim(), e.prefix(10));
    }
}
