//! The `q`-adic filtration of a module: powers, initial forms, Hilbert-Samuel
//! functions and the graded pieces of the form module `G_M(q)`.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::artinian::{quotient_dim, stabilize, Certified, Engine, Ideal, Subspace};
use crate::error::{Error, Result};
use crate::ring::{Poly, Valuation};

/// An ideal `q` checked to satisfy `m^s M ⊆ qM` for some `s`, so that every
/// `M/q^n M` has finite length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealOfDefinition {
    ideal: Ideal,
    validated: bool,
}

impl IdealOfDefinition {
    /// Checks the ideal against the engine's module.
    pub fn validate(engine: &mut Engine, ideal: Ideal) -> Result<Self> {
        if ideal.gens().iter().any(|g| g.ord() == Valuation::Finite(0)) {
            return Err(Error::InvalidInput("the ideal contains a unit".into()));
        }
        match engine.saturation(&ideal, 1) {
            Ok(_) => Ok(IdealOfDefinition { ideal, validated: true }),
            Err(Error::NotStabilized { .. }) => Err(Error::NotIdealOfDefinition),
            Err(e) => Err(e),
        }
    }

    /// Wraps without checking; every power computation then fails until the
    /// ideal is validated.
    pub fn unvalidated(ideal: Ideal) -> Self {
        IdealOfDefinition { ideal, validated: false }
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn is_maximal(&self) -> bool {
        self.ideal.is_maximal()
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    fn check(&self) -> Result<()> {
        if self.validated {
            Ok(())
        } else {
            Err(Error::InvalidInput("ideal of definition has not been validated".into()))
        }
    }
}

/// Values of `n ↦ length`, each with its truncation certificate.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LengthTable {
    pub entries: Vec<(i64, Certified<u64>)>,
}

impl LengthTable {
    pub fn value(&self, n: i64) -> Option<u64> {
        self.entries.iter().find(|(m, _)| *m == n).map(|(_, c)| c.value)
    }

    pub fn values(&self) -> Vec<(i64, u64)> {
        self.entries.iter().map(|(n, c)| (*n, c.value)).collect()
    }

    pub fn push(&mut self, n: i64, c: Certified<u64>) {
        self.entries.push((n, c));
    }
}

/// The value reached by the last `window` entries, with the first `n` from
/// which the sequence stays at it.
pub fn stable_tail(values: &[(i64, u64)], window: usize) -> Option<(u64, i64)> {
    let (&(_, last), _) = values.split_last()?;
    let run = values.iter().rev().take_while(|(_, v)| *v == last).count();
    if run < window {
        return None;
    }
    Some((last, values[values.len() - run].0))
}

/// Computes a length that is exact once the truncation level reaches
/// `needed`, recomputing it over one agreement window.
pub fn exact_length<F>(engine: &mut Engine, needed: u32, what: &str, mut f: F) -> Result<Certified<u64>>
where
    F: FnMut(&mut Engine, u32) -> Result<u64>,
{
    let policy = *engine.policy();
    let start = needed.max(policy.n_start);
    engine.ensure_level(start + (policy.agree_window - 1) * policy.n_step)?;
    stabilize(&policy, start, |k| f(engine, k).map(Some))?.certified(what)
}

/// `q^n M` inside `M/m^k M`; the whole space for `n <= 0`.
pub fn q_power_in_m(engine: &mut Engine, q: &IdealOfDefinition, n: i64, k: u32) -> Result<Subspace> {
    q.check()?;
    engine.power(q.ideal(), n, k)
}

/// `ℓ(M/q^n M)`.
pub fn length_mod_power(engine: &mut Engine, q: &IdealOfDefinition, n: i64) -> Result<Certified<u64>> {
    q.check()?;
    let s = engine.saturation(q.ideal(), n)?;
    exact_length(engine, s, "length of M/q^nM", |e, k| {
        let p = e.power(q.ideal(), n, k)?;
        Ok((e.prefix(k) - p.dim()) as u64)
    })
}

/// `dim [G_M(q)]_n = dim q^n M / q^{n+1} M`.
pub fn form_module_piece(engine: &mut Engine, q: &IdealOfDefinition, n: i64) -> Result<Certified<u64>> {
    q.check()?;
    if n < 0 {
        return exact_length(engine, 0, "form module piece", |_, _| Ok(0));
    }
    let s = engine.saturation(q.ideal(), n + 1)?;
    exact_length(engine, s, "form module piece", |e, k| {
        let hi = e.power(q.ideal(), n, k)?;
        let lo = e.power(q.ideal(), n + 1, k)?;
        Ok(quotient_dim(&hi, &lo)? as u64)
    })
}

/// Initial degree of an element of `A` with respect to `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialFormData {
    pub element: Poly,
    pub c: u32,
    /// Levels at which `element ∉ q^{c+1}` was rechecked; empty for the
    /// maximal ideal, where the degree is the order and needs no truncation.
    pub certified_levels: Vec<u32>,
    /// The initial form as a homogeneous polynomial, when `q` is maximal.
    pub form: Option<Poly>,
}

/// Whether `a ∈ q^j` in `A`, decided at a level where `q^j ⊇ m^k`.
pub fn in_power(engine_a: &mut Engine, q: &Ideal, a: &Poly, j: i64) -> Result<Certified<bool>> {
    let s = engine_a.saturation(q, j)?;
    let policy = *engine_a.policy();
    let start = s.max(policy.n_start);
    engine_a.ensure_level(start + (policy.agree_window - 1) * policy.n_step)?;
    stabilize(&policy, start, |k| {
        let p = engine_a.power(q, j, k)?;
        let v = engine_a.reduce_poly(a, k)?;
        Ok(Some(p.contains(&v)))
    })?
    .certified("ideal membership")
}

/// The largest `c` with `a ∈ q^c`, computed in `A` (the engine must be over
/// the free module).
pub fn initial_degree(engine_a: &mut Engine, q: &Ideal, a: &Poly) -> Result<InitialFormData> {
    let ord = a.ord().finite().ok_or(Error::ZeroPolynomial)?;
    if q.is_maximal() {
        return Ok(InitialFormData {
            element: a.clone(),
            c: ord,
            certified_levels: Vec::new(),
            form: Some(a.lowest_form()?),
        });
    }
    let bound = engine_a.power_bound(q, ord).unwrap_or(0);
    let mut c = 0u32;
    loop {
        if c > bound {
            return Err(Error::InAllPowers { bound });
        }
        let m = in_power(engine_a, q, a, c as i64 + 1)?;
        if !m.value {
            return Ok(InitialFormData {
                element: a.clone(),
                c,
                certified_levels: m.levels,
                form: None,
            });
        }
        c += 1;
    }
}

/// Elements `a_1..a_d` with their initial degrees and the derived constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceSpec {
    pub elems: Vec<Poly>,
    pub degrees: Vec<u32>,
    pub c_prod: u64,
    pub c_bar: u32,
    pub c_bar_i: Vec<u32>,
    pub forms: Vec<InitialFormData>,
}

impl SequenceSpec {
    pub fn new(engine_a: &mut Engine, q: &Ideal, elems: Vec<Poly>) -> Result<Self> {
        let mut forms = Vec::with_capacity(elems.len());
        for a in &elems {
            forms.push(initial_degree(engine_a, q, a)?);
        }
        Ok(SequenceSpec::from_forms(forms))
    }

    pub fn from_forms(forms: Vec<InitialFormData>) -> Self {
        let degrees: Vec<u32> = forms.iter().map(|f| f.c).collect();
        let c_bar: u32 = degrees.iter().sum();
        SequenceSpec {
            elems: forms.iter().map(|f| f.element.clone()).collect(),
            c_prod: degrees.iter().map(|c| *c as u64).product(),
            c_bar,
            c_bar_i: degrees.iter().map(|c| c_bar - c).collect(),
            degrees,
            forms,
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// `c_{j_1} + ... + c_{j_i}` for an index set.
    pub fn degree_sum(&self, subset: &[usize]) -> u32 {
        subset.iter().map(|j| self.degrees[*j]).sum()
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// The subsequence at the given positions.
    pub fn select(&self, idx: &[usize]) -> SequenceSpec {
        SequenceSpec::from_forms(idx.iter().map(|i| self.forms[*i].clone()).collect())
    }
}

/// Hilbert-Samuel data fitted from a certified length table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSamuelData {
    pub table: LengthTable,
    /// Degree of the polynomial, i.e. `dim M`; `None` for the zero module.
    pub dim: Option<u32>,
    /// `e_0..e_d` in `ℓ(M/q^n M) = Σ e_i C(n+d-i-1, d-i)`.
    pub e: Vec<i64>,
    /// Range of `n` on which the polynomial reproduces the table.
    pub poly_window: (i64, i64),
}

impl HilbertSamuelData {
    pub fn e0(&self) -> i64 {
        self.e.first().copied().unwrap_or(0)
    }
}

fn binom_poly(n: i64, j: u32) -> BigInt {
    // C(n + j - 1, j) as a polynomial in n
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for t in 0..j as i64 {
        num *= BigInt::from(n + t);
        den *= BigInt::from(t + 1);
    }
    num / den
}

fn differences(v: &[BigInt]) -> Vec<BigInt> {
    v.windows(2).map(|w| &w[1] - &w[0]).collect()
}

/// Result of fitting `n ↦ f(n)` by a polynomial on a tail of the data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFit {
    pub degree: u32,
    /// Coefficients in the basis `C(n+d-i-1, d-i)`, `i = 0..=d`.
    pub e: Vec<i64>,
    pub window: (i64, i64),
}

/// Finds the least `d` whose `d`-th differences are constant on a tail of at
/// least `window` values, then reads off the coefficients in the binomial
/// basis. The leading one is cross-checked against `d!` times the leading
/// coefficient of the interpolating polynomial.
pub fn fit_polynomial(values: &[(i64, u64)], window: usize) -> Option<PolyFit> {
    if values.is_empty() {
        return None;
    }
    debug_assert!(values.windows(2).all(|w| w[1].0 == w[0].0 + 1));
    let n0 = values[0].0;
    let f: Vec<BigInt> = values.iter().map(|(_, v)| BigInt::from(*v)).collect();
    let mut diff = f.clone();
    for d in 0..values.len() {
        if diff.len() < window {
            return None;
        }
        let last = diff.last().expect("nonempty").clone();
        let run = diff.iter().rev().take_while(|x| **x == last).count();
        if run >= window {
            let start = diff.len() - run;
            let lo = n0 + start as i64;
            let hi = values.last().expect("nonempty").0;
            let e = binomial_coefficients(&f[start..], lo, d as u32)?;
            if d > 0 {
                let pts: Vec<(i64, BigInt)> = (0..=d).map(|k| (lo + k as i64, f[start + k].clone())).collect();
                let lead = lagrange_leading(&pts) * BigRational::from_integer(factorial(d as u32));
                if lead != BigRational::from_integer(BigInt::from(e[0])) {
                    return None;
                }
            }
            return Some(PolyFit {
                degree: d as u32,
                e,
                window: (lo, hi),
            });
        }
        diff = differences(&diff);
    }
    None
}

fn factorial(n: u32) -> BigInt {
    (1..=n as i64).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Leading coefficient of the polynomial through the given points.
fn lagrange_leading(pts: &[(i64, BigInt)]) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, (xi, yi)) in pts.iter().enumerate() {
        let mut den = BigInt::one();
        for (j, (xj, _)) in pts.iter().enumerate() {
            if i != j {
                den *= BigInt::from(xi - xj);
            }
        }
        acc += BigRational::new(yi.clone(), den);
    }
    acc
}

/// `e_0..e_d` for values `f(lo), f(lo+1), ...` that follow a degree-`d`
/// polynomial.
fn binomial_coefficients(f: &[BigInt], lo: i64, d: u32) -> Option<Vec<i64>> {
    let mut rest: Vec<BigInt> = f.to_vec();
    let mut e = Vec::with_capacity(d as usize + 1);
    for i in 0..=d {
        let j = d - i;
        let mut diff = rest.clone();
        for _ in 0..j {
            diff = differences(&diff);
        }
        let ei = diff.first()?.clone();
        for (k, r) in rest.iter_mut().enumerate() {
            *r -= &ei * binom_poly(lo + k as i64, j);
        }
        e.push(i64::try_from(ei).ok()?);
    }
    if rest.iter().any(|r| !r.is_zero()) {
        return None;
    }
    Some(e)
}

/// Computes `ℓ(M/q^n M)` for `n` in `lo..=hi` and fits the Hilbert-Samuel
/// polynomial, extending the range by one window at a time (up to `hi_cap`)
/// until the fit holds on an agreement window.
pub fn hilbert_samuel(engine: &mut Engine, q: &IdealOfDefinition, lo: i64, hi: i64, hi_cap: i64) -> Result<HilbertSamuelData> {
    q.check()?;
    let window = engine.policy().agree_window as usize;
    let mut table = LengthTable::default();
    let mut n = lo;
    let mut hi = hi;
    loop {
        while n <= hi {
            let c = length_mod_power(engine, q, n)?;
            table.push(n, c);
            n += 1;
        }
        if let Some(fit) = fit_polynomial(&table.values(), window) {
            let zero = fit.degree == 0 && fit.e[0] == 0;
            return Ok(HilbertSamuelData {
                table,
                dim: if zero { None } else { Some(fit.degree) },
                e: fit.e,
                poly_window: fit.window,
            });
        }
        if hi >= hi_cap {
            return Err(Error::NotStabilized {
                what: format!("Hilbert-Samuel polynomial on n in {}..={}", lo, hi),
                n_max: engine.policy().n_max,
            });
        }
        hi = (hi + window as i64).min(hi_cap);
    }
}

/// Default range of `n` for Hilbert-Samuel fits of a module of Krull
/// dimension at most `d`.
pub fn default_hs_range(d: usize) -> (i64, i64) {
    (1, 2 * d as i64 + 6)
}

/// `(b) M + q^k M` at level `lev`.
pub fn ideal_plus_power(engine: &mut Engine, b: &[Poly], q: &IdealOfDefinition, k: i64, lev: u32) -> Result<Subspace> {
    let p = q_power_in_m(engine, q, k, lev)?;
    if b.is_empty() {
        return Ok(p);
    }
    let ib = engine.ideal_image(b, lev)?;
    Ok(ib.sum(&p))
}

/// `dim [b*G_M(q) :_{G_M(q)} a* / b*G_M(q)]_n`, realized as
/// `(∩_i ((b) + q^{n+c_i+1})M :_M a_i) ∩ ((b) + q^n)M` modulo `((b) + q^{n+1})M`.
pub fn graded_colon_dim(
    engine: &mut Engine,
    b: &[Poly],
    a: &SequenceSpec,
    q: &IdealOfDefinition,
    n: i64,
) -> Result<Certified<u64>> {
    q.check()?;
    let top = n + a.max_degree() as i64 + 1;
    let s = engine.saturation(q.ideal(), top.max(n + 1))?;
    let prepared: Vec<_> = a.elems.iter().map(|x| engine.prepare(x)).collect();
    exact_length(engine, s, "graded colon", |e, k| {
        let mut x = ideal_plus_power(e, b, q, n, k)?;
        for (ai, ci) in prepared.iter().zip(&a.degrees) {
            let target = ideal_plus_power(e, b, q, n + *ci as i64 + 1, k)?;
            let col = e.colon(&target, ai);
            x = x.intersect(&col);
        }
        let y = ideal_plus_power(e, b, q, n + 1, k)?;
        Ok(quotient_dim(&x, &y)? as u64)
    })
}

/// `dim [G_M(q) / a* G_M(q)]_n = dim q^n M / (q^{n+1} M + Σ a_i q^{n-c_i} M)`.
pub fn form_quotient_piece(engine: &mut Engine, a: &SequenceSpec, q: &IdealOfDefinition, n: i64) -> Result<Certified<u64>> {
    q.check()?;
    if n < 0 {
        return exact_length(engine, 0, "form quotient piece", |_, _| Ok(0));
    }
    let s = engine.saturation(q.ideal(), n + 1)?;
    let prepared: Vec<_> = a.elems.iter().map(|x| engine.prepare(x)).collect();
    exact_length(engine, s, "form quotient piece", |e, k| {
        let hi = e.power(q.ideal(), n, k)?;
        let mut lo = e.power(q.ideal(), n + 1, k)?;
        for (ai, ci) in prepared.iter().zip(&a.degrees) {
            let src = e.power(q.ideal(), n - *ci as i64, k)?;
            let img = e.image_under(ai, &src);
            // only the part landing in q^n M belongs to degree n
            lo = lo.sum(&img.intersect(&hi));
        }
        Ok(quotient_dim(&hi, &lo)? as u64)
    })
}

/// Degree of the polynomial eventually followed by `values`; `None` when the
/// values are eventually zero (degree `-∞`).
pub fn eventual_degree(values: &[(i64, u64)], window: usize) -> Option<Option<u32>> {
    let fit = fit_polynomial(values, window)?;
    if fit.degree == 0 && fit.e[0] == 0 {
        Some(None)
    } else {
        Some(Some(fit.degree))
    }
}

/// Certified window lengths over a range of `n`.
pub fn tabulate<F>(lo: i64, hi: i64, mut f: F) -> Result<LengthTable>
where
    F: FnMut(i64) -> Result<Certified<u64>>,
{
    let mut t = LengthTable::default();
    for n in lo..=hi {
        t.push(n, f(n)?);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artinian::{LocalRingCtx, ModulePresentation, TruncationPolicy};
    use crate::ring::{FieldKind, PolyRing};
    use alloc::string::String;
    use alloc::vec;

    fn ring() -> PolyRing {
        PolyRing::new(vec![String::from("x"), String::from("y")], FieldKind::Rationals).unwrap()
    }

    fn engine(rel: &[&str]) -> Engine {
        let r = ring();
        let ctx = LocalRingCtx::new(r.clone(), TruncationPolicy::default_for(3)).unwrap();
        let rels = rel.iter().map(|s| r.parse(s).unwrap()).collect();
        Engine::new(ctx, ModulePresentation::new(rels))
    }

    #[test]
    fn fit_examples() {
        let v: Vec<(i64, u64)> = (1..12).map(|n| (n, (n * (n + 1) / 2) as u64)).collect();
        let f = fit_polynomial(&v, 3).unwrap();
        assert_eq!(f.degree, 2);
        assert_eq!(f.e[0], 1);
        let v: Vec<(i64, u64)> = (1..12).map(|n| (n, if n == 1 { 0 } else { (2 * n - 1) as u64 })).collect();
        let f = fit_polynomial(&v, 3).unwrap();
        assert_eq!((f.degree, f.e[0], f.window.0), (1, 2, 2));
        assert!(fit_polynomial(&[(1, 1), (2, 5)], 3).is_none());
    }

    #[test]
    fn hilbert_samuel_examples() {
        let mut e = engine(&[]);
        let q = IdealOfDefinition::validate(&mut e, Ideal::maximal(&ring())).unwrap();
        let hs = hilbert_samuel(&mut e, &q, 1, 10, 20).unwrap();
        assert_eq!((hs.dim, hs.e0()), (Some(2), 1));

        let mut e = engine(&["y^2 - x^3"]);
        let hs = hilbert_samuel(&mut e, &q, 1, 10, 20).unwrap();
        assert_eq!((hs.dim, hs.e0()), (Some(1), 2));
        for n in 2..=10 {
            assert_eq!(hs.table.value(n), Some(2 * n as u64 - 1));
        }

        let mut e = engine(&["y^2", "x^3"]);
        let hs = hilbert_samuel(&mut e, &q, 1, 10, 20).unwrap();
        assert_eq!((hs.dim, hs.e0()), (Some(0), 6));

        let mut e = engine(&["1 + x"]);
        let hs = hilbert_samuel(&mut e, &q, 1, 10, 20).unwrap();
        assert_eq!(hs.dim, None);
    }

    #[test]
    fn initial_degrees() {
        let r = ring();
        let mut e = engine(&[]);
        let q = Ideal::new(vec![r.parse("x^2").unwrap(), r.parse("y").unwrap()]);
        assert_eq!(initial_degree(&mut e, &q, &r.parse("x^4").unwrap()).unwrap().c, 2);
        assert_eq!(initial_degree(&mut e, &q, &r.parse("x^3 + y^2").unwrap()).unwrap().c, 1);
        let m = Ideal::maximal(&r);
        assert_eq!(initial_degree(&mut e, &m, &r.parse("y^2 - x^3").unwrap()).unwrap().c, 2);
        assert_eq!(initial_degree(&mut e, &m, &r.one()).unwrap().c, 0);
        assert_eq!(initial_degree(&mut e, &m, &r.zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn unvalidated_ideal_is_rejected() {
        let r = ring();
        let mut e = engine(&[]);
        let q = IdealOfDefinition::unvalidated(Ideal::maximal(&r));
        assert!(q_power_in_m(&mut e, &q, 2, 5).is_err());
        assert_eq!(
            IdealOfDefinition::validate(&mut e, Ideal::new(vec![r.parse("x").unwrap()])),
            Err(Error::NotIdealOfDefinition)
        );
    }

    #[test]
    fn form_pieces_of_cusp() {
        let r = ring();
        let mut e = engine(&["y^2 - x^3"]);
        let q = IdealOfDefinition::validate(&mut e, Ideal::maximal(&r)).unwrap();
        let dims: Vec<u64> = (0..6).map(|n| form_module_piece(&mut e, &q, n).unwrap().value).collect();
        assert_eq!(dims, vec![1, 2, 2, 2, 2, 2]);
    }
}
