//! The Koszul complex of `a_1..a_d` on `M`, its filtered subcomplex
//! `K(a,q,M;n)` with terms `q^{n-c_J} M`, and the quotient `L(a,q,M;n)` with
//! terms `M/q^{n-c_J} M`, as explicit matrices over truncations.
//!
//! Boundaries follow the Koszul sign rule: `e_J ↦ Σ_k (-1)^{k+1} a_{j_k} e_{J∖j_k}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::artinian::{stabilize, Certified, Engine, QuotientCoords, Stabilized};
use crate::error::{Error, Result};
use crate::filtration::{IdealOfDefinition, SequenceSpec};
use crate::linalg::{relation_space, Echelon, Matrix, SparseVec};
use crate::ring::{FieldKind, FieldScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComplexKind {
    Koszul,
    KSub,
    LQuot,
}

impl core::fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            ComplexKind::Koszul => "koszul",
            ComplexKind::KSub => "K",
            ComplexKind::LQuot => "L",
        })
    }
}

/// All `i`-element subsets of `0..d`, lexicographically.
pub fn subsets(d: usize, i: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(i);
    fn rec(start: usize, d: usize, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == i {
            out.push(cur.clone());
            return;
        }
        for j in start..d {
            cur.push(j);
            rec(j + 1, d, i, cur, out);
            cur.pop();
        }
    }
    rec(0, d, i, &mut cur, &mut out);
    out
}

fn subset_position(list: &[Vec<usize>], s: &[usize]) -> usize {
    list.binary_search_by(|x| x.as_slice().cmp(s)).expect("subset present")
}

/// `(sign, j, J∖j)` for each face of `J`.
fn faces(j: &[usize]) -> Vec<(bool, usize, Vec<usize>)> {
    (0..j.len())
        .map(|p| {
            let mut rest = j.to_vec();
            let x = rest.remove(p);
            (p % 2 == 0, x, rest)
        })
        .collect()
}

/// One summand `e_J` of a term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub subset: Vec<usize>,
    /// `n - c_J`, the power of `q` involved.
    pub exponent: i64,
    pub dim: usize,
}

/// A finite complex of vector spaces with exact boundary matrices in the
/// bases of its terms. `boundaries[i - 1]` is `∂_i : C_i → C_{i-1}`.
#[derive(Clone, Debug)]
pub struct ComplexInstance {
    pub kind: ComplexKind,
    pub n: i64,
    pub trunc_level: u32,
    pub field: FieldKind,
    pub terms: Vec<Vec<Summand>>,
    pub boundaries: Vec<Matrix>,
}

impl ComplexInstance {
    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term_dim(&self, i: usize) -> usize {
        self.terms[i].iter().map(|s| s.dim).sum()
    }

    /// Whether every composite `∂_{i-1} ∘ ∂_i` is the zero matrix.
    pub fn boundaries_compose_to_zero(&self) -> bool {
        self.boundaries
            .windows(2)
            .all(|w| w[0].compose(&w[1], self.field).is_zero())
    }

    fn ranks(&self) -> Vec<usize> {
        self.boundaries.iter().map(|b| b.rank(self.field)).collect()
    }

    /// `dim C_i - rank ∂_i - rank ∂_{i+1}` for each `i`.
    pub fn homology_dims(&self) -> Vec<u64> {
        let r = self.ranks();
        (0..=self.length())
            .map(|i| {
                let out = if i > 0 { r[i - 1] } else { 0 };
                let inc = if i < self.length() { r[i] } else { 0 };
                (self.term_dim(i) - out - inc) as u64
            })
            .collect()
    }

    /// `Σ (-1)^i dim C_i`.
    pub fn euler_of_terms(&self) -> i64 {
        (0..=self.length())
            .map(|i| if i % 2 == 0 { self.term_dim(i) as i64 } else { -(self.term_dim(i) as i64) })
            .sum()
    }
}

fn alternating(v: &[u64]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(i, x)| if i % 2 == 0 { *x as i64 } else { -(*x as i64) })
        .sum()
}

fn signed(field: FieldKind, plus: bool) -> FieldScalar {
    if plus {
        field.one()
    } else {
        field.one().neg()
    }
}

/// `L(a,q,M;n)` over `M/m^k M`. Exact once `m^k M ⊆ q^n M`.
pub fn build_l(engine: &mut Engine, a: &SequenceSpec, q: &IdealOfDefinition, n: i64, k: u32) -> Result<ComplexInstance> {
    let d = a.len();
    let field = engine.field();
    engine.ensure_level(k)?;
    let prepared: Vec<_> = a.elems.iter().map(|x| engine.prepare(x)).collect();
    let subs: Vec<Vec<Vec<usize>>> = (0..=d).map(|i| subsets(d, i)).collect();
    let mut coords: Vec<Vec<QuotientCoords>> = Vec::with_capacity(d + 1);
    let mut terms = Vec::with_capacity(d + 1);
    for list in &subs {
        let mut cs = Vec::with_capacity(list.len());
        let mut ts = Vec::with_capacity(list.len());
        for j in list {
            let e = n - a.degree_sum(j) as i64;
            let p = crate::filtration::q_power_in_m(engine, q, e, k)?;
            let qc = QuotientCoords::new(p);
            ts.push(Summand {
                subset: j.clone(),
                exponent: e,
                dim: qc.dim(),
            });
            cs.push(qc);
        }
        coords.push(cs);
        terms.push(ts);
    }
    let offsets: Vec<Vec<usize>> = terms
        .iter()
        .map(|ts| {
            let mut acc = 0;
            ts.iter()
                .map(|s| {
                    let o = acc;
                    acc += s.dim;
                    o
                })
                .collect()
        })
        .collect();
    let mut boundaries = Vec::with_capacity(d);
    for i in 1..=d {
        let rows: usize = terms[i - 1].iter().map(|s| s.dim).sum();
        let mut cols = Vec::new();
        for (si, j) in subs[i].iter().enumerate() {
            let qc = &coords[i][si];
            for r in 0..qc.dim() {
                let e = SparseVec::unit(qc.representative(r), field);
                let mut col = SparseVec::new();
                for (plus, x, rest) in faces(j) {
                    let ti = subset_position(&subs[i - 1], &rest);
                    let img = engine.mul(&prepared[x], &e, k);
                    let c = coords[i - 1][ti].coords(&img).shift(offsets[i - 1][ti] as u32);
                    col = col.add_scaled(&signed(field, plus), &c);
                }
                cols.push(col);
            }
        }
        boundaries.push(Matrix { rows, cols });
    }
    Ok(ComplexInstance {
        kind: ComplexKind::LQuot,
        n,
        trunc_level: k,
        field,
        terms,
        boundaries,
    })
}

/// The subcomplex `K(a,q,M;n)` over `M/m^W M`, together with its embedding
/// into the Koszul complex. Coordinates of a term `⊕_J M/m^W M` are
/// interleaved (`s * blocks + b` for standard monomial `s` in block `b`), so
/// that dropping monomials of degree `>= N` is a prefix truncation.
#[derive(Clone, Debug)]
pub struct KComplex {
    pub instance: ComplexInstance,
    /// Per term, the embedded basis vectors in interleaved coordinates.
    embedded: Vec<Vec<SparseVec>>,
    blocks: Vec<usize>,
}

fn interleave(v: &SparseVec, blocks: usize, b: usize) -> SparseVec {
    SparseVec::from_sorted(
        v.entries()
            .iter()
            .map(|(s, c)| ((*s as usize * blocks + b) as u32, c.clone()))
            .collect(),
    )
}

fn combine(coeffs: &SparseVec, vs: &[SparseVec]) -> SparseVec {
    let mut acc = SparseVec::new();
    for (r, c) in coeffs.entries() {
        acc = acc.add_scaled(c, &vs[*r as usize]);
    }
    acc
}

/// Builds `K(a,q,M;n)` at level `w`; with `koszul` set every term is the
/// whole module, giving the Koszul complex of `a` on `M`.
pub fn build_k_truncated(
    engine: &mut Engine,
    a: &SequenceSpec,
    q: &IdealOfDefinition,
    n: i64,
    w: u32,
    koszul: bool,
) -> Result<KComplex> {
    let d = a.len();
    let field = engine.field();
    engine.ensure_level(w)?;
    let ambient = engine.prefix(w);
    let prepared: Vec<_> = a.elems.iter().map(|x| engine.prepare(x)).collect();
    let subs: Vec<Vec<Vec<usize>>> = (0..=d).map(|i| subsets(d, i)).collect();
    let blocks: Vec<usize> = subs.iter().map(|l| l.len()).collect();
    let mut bases: Vec<Vec<Echelon>> = Vec::with_capacity(d + 1);
    let mut terms = Vec::with_capacity(d + 1);
    let mut embedded = Vec::with_capacity(d + 1);
    let mut offsets = Vec::with_capacity(d + 1);
    for (i, list) in subs.iter().enumerate() {
        let mut bs = Vec::with_capacity(list.len());
        let mut ts = Vec::with_capacity(list.len());
        let mut emb = Vec::new();
        let mut offs = Vec::with_capacity(list.len());
        for (b, j) in list.iter().enumerate() {
            let e = if koszul { 0 } else { n - a.degree_sum(j) as i64 };
            let p = crate::filtration::q_power_in_m(engine, q, e, w)?;
            offs.push(emb.len());
            for v in p.basis() {
                emb.push(interleave(v, blocks[i], b));
            }
            ts.push(Summand {
                subset: j.clone(),
                exponent: e,
                dim: p.dim(),
            });
            bs.push(p.echelon().clone());
        }
        bases.push(bs);
        terms.push(ts);
        embedded.push(emb);
        offsets.push(offs);
    }
    let mut boundaries = Vec::with_capacity(d);
    for i in 1..=d {
        let rows = embedded[i - 1].len();
        let mut cols = Vec::with_capacity(embedded[i].len());
        for (si, j) in subs[i].iter().enumerate() {
            for v in bases[i][si].rows() {
                let mut col = SparseVec::new();
                for (plus, x, rest) in faces(j) {
                    let ti = subset_position(&subs[i - 1], &rest);
                    let img = engine.mul(&prepared[x], v, w);
                    let c = bases[i - 1][ti].coordinates(&img).ok_or_else(|| {
                        Error::InvalidInput(format!("boundary leaves the filtered term at n = {}", n))
                    })?;
                    col = col.add_scaled(&signed(field, plus), &c.shift(offsets[i - 1][ti] as u32));
                }
                cols.push(col);
            }
        }
        boundaries.push(Matrix { rows, cols });
    }
    let _ = ambient;
    Ok(KComplex {
        instance: ComplexInstance {
            kind: if koszul { ComplexKind::Koszul } else { ComplexKind::KSub },
            n,
            trunc_level: w,
            field,
            terms,
            boundaries,
        },
        embedded,
        blocks,
    })
}

impl KComplex {
    /// Homology lengths measured in the truncation at level `n_level <= W`:
    /// cycles and boundaries of the level-`W` complex are projected to
    /// `⊕ M/m^{n_level} M` and compared there.
    pub fn measure(&self, engine: &Engine, n_level: u32) -> Vec<u64> {
        let cx = &self.instance;
        let field = cx.field;
        let prefix = engine.prefix(n_level);
        let w_prefix = engine.prefix(cx.trunc_level);
        let d = cx.length();
        let mut out = Vec::with_capacity(d + 1);
        for i in 0..=d {
            let dim_w = w_prefix * self.blocks[i];
            let bound = prefix * self.blocks[i];
            let src = cx.term_dim(i);
            let cycles: Vec<SparseVec> = if i == 0 {
                (0..src).map(|r| SparseVec::unit(r as u32, field)).collect()
            } else {
                let b = &cx.boundaries[i - 1];
                let pairs = (0..src).map(|r| (b.cols[r].clone(), SparseVec::unit(r as u32, field)));
                relation_space(b.rows, src, field, pairs)
            };
            let z = Echelon::from_vectors(dim_w, field, cycles.iter().map(|c| combine(c, &self.embedded[i])));
            let bd = if i < d {
                let b = &cx.boundaries[i];
                Echelon::from_vectors(dim_w, field, b.cols.iter().map(|c| combine(c, &self.embedded[i])))
            } else {
                Echelon::new(dim_w, field)
            };
            out.push((z.truncate(bound).rank() - bd.truncate(bound).rank()) as u64);
        }
        out
    }
}

/// Working level used to measure K-homology at level `n_level`.
pub fn working_level(n_level: u32, a: &SequenceSpec, n_max: u32) -> u32 {
    (n_level + n_level / 2 + 2 * a.max_degree() + 2).min(n_max)
}

/// Certified `ℓ(L_i(a,q,M;n))` for `i = 0..=d`.
pub fn l_homology(engine: &mut Engine, a: &SequenceSpec, q: &IdealOfDefinition, n: i64) -> Result<Certified<Vec<u64>>> {
    let s = engine.saturation(q.ideal(), n)?;
    let policy = *engine.policy();
    let start = s.max(policy.n_start);
    engine.ensure_level(start + (policy.agree_window - 1) * policy.n_step)?;
    stabilize(&policy, start, |k| {
        let cx = build_l(engine, a, q, n, k)?;
        debug_assert!(cx.boundaries_compose_to_zero());
        Ok(Some(cx.homology_dims()))
    })?
    .certified("homology of L")
}

/// `ℓ(H_i)` of `K(a,q,M;n)` (or of the Koszul complex), each index
/// stabilized separately over measure levels `N` with working level
/// `N + margin(N)`. Indices with infinite-length homology come back as
/// `NotStabilized`.
pub fn k_homology(
    engine: &mut Engine,
    a: &SequenceSpec,
    q: &IdealOfDefinition,
    n: i64,
    koszul: bool,
) -> Result<Vec<Stabilized<u64>>> {
    let policy = *engine.policy();
    let d = a.len();
    let sat = if koszul { 0 } else { engine.saturation(q.ideal(), n)? };
    let start = sat.max(policy.n_start);
    let mut history: Vec<(u32, Option<Vec<u64>>)> = Vec::new();
    let mut level = start;
    while level <= policy.n_max {
        let w = working_level(level, a, policy.n_max);
        let v = if w < level + a.max_degree() || engine.ensure_level(w).is_err() {
            None
        } else {
            let kc = build_k_truncated(engine, a, q, n, w, koszul)?;
            Some(kc.measure(engine, level))
        };
        let stop = v.is_none();
        history.push((level, v));
        if stop {
            break;
        }
        let done = (0..=d).all(|i| tail_run(&history, i).len() >= policy.agree_window as usize);
        if done {
            break;
        }
        level += policy.n_step;
    }
    Ok((0..=d)
        .map(|i| {
            let run = tail_run(&history, i);
            if run.len() >= policy.agree_window as usize {
                let levels: Vec<u32> = run[run.len() - policy.agree_window as usize..].to_vec();
                let last = levels[levels.len() - 1];
                let value = history.iter().find(|(l, _)| *l == last).and_then(|(_, v)| v.as_ref()).expect("value")[i];
                Stabilized::Stable(Certified { value, levels })
            } else {
                Stabilized::NotStabilized {
                    history: history.iter().map(|(l, v)| (*l, v.as_ref().map(|x| x[i]))).collect(),
                    n_max: policy.n_max,
                }
            }
        })
        .collect())
}

/// Levels of the first run of at least a window of agreeing values for
/// index `i`, or the trailing run if none completed yet.
fn tail_run(history: &[(u32, Option<Vec<u64>>)], i: usize) -> Vec<u32> {
    let mut run: Vec<u32> = Vec::new();
    let mut best: Vec<u32> = Vec::new();
    let mut cur: Option<u64> = None;
    for (l, v) in history {
        match v.as_ref().map(|x| x[i]) {
            Some(x) if Some(x) == cur => run.push(*l),
            Some(x) => {
                cur = Some(x);
                run = vec![*l];
            }
            None => {
                cur = None;
                run.clear();
            }
        }
        if run.len() > best.len() {
            best = run.clone();
        }
    }
    best
}

/// Checks `0 → K(n) → Koszul → L(n) → 0` termwise at level `k`: dimensions
/// add up and every basis vector of `q^e M` maps to zero in `M/q^e M`.
pub fn check_short_exact(engine: &mut Engine, a: &SequenceSpec, q: &IdealOfDefinition, n: i64, k: u32) -> Result<bool> {
    let d = a.len();
    let total = engine.prefix(k);
    for i in 0..=d {
        for j in subsets(d, i) {
            let e = n - a.degree_sum(&j) as i64;
            let p = crate::filtration::q_power_in_m(engine, q, e, k)?;
            let qc = QuotientCoords::new(p.clone());
            if p.dim() + qc.dim() != total {
                return Ok(false);
            }
            if p.basis().iter().any(|v| !qc.coords(v).is_zero()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Σ (-1)^i ℓ(L_i(n))`, computed from homology and from term dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerL {
    pub n: i64,
    pub from_homology: i64,
    pub from_terms: i64,
    pub homology: Certified<Vec<u64>>,
}

pub fn euler_l(engine: &mut Engine, a: &SequenceSpec, q: &IdealOfDefinition, n: i64) -> Result<EulerL> {
    let h = l_homology(engine, a, q, n)?;
    let k = h.levels[0];
    let cx = build_l(engine, a, q, n, k)?;
    Ok(EulerL {
        n,
        from_homology: alternating(&h.value),
        from_terms: cx.euler_of_terms(),
        homology: h,
    })
}

/// `χ(K(a,q,M;n))`, directly from stabilized K-homology when every index
/// stabilizes, and through `e_0(a;M) - Σ(-1)^i ℓ(L_i(n))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiK {
    pub n: i64,
    pub direct: Option<i64>,
    pub via_identity: i64,
    pub k_homology: Vec<Stabilized<u64>>,
}

pub fn chi_k(engine: &mut Engine, a: &SequenceSpec, q: &IdealOfDefinition, n: i64, e0_a: i64) -> Result<ChiK> {
    let hk = k_homology(engine, a, q, n, false)?;
    let direct = hk
        .iter()
        .map(|s| match s {
            Stabilized::Stable(c) => Some(c.value),
            _ => None,
        })
        .collect::<Option<Vec<u64>>>()
        .map(|v| alternating(&v));
    let el = euler_l(engine, a, q, n)?;
    Ok(ChiK {
        n,
        direct,
        via_identity: e0_a - el.from_homology,
        k_homology: hk,
    })
}

/// Homology lengths keyed by `(n, i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub kind: ComplexKind,
    pub entries: BTreeMap<(i64, usize), Stabilized<u64>>,
}

impl HomologyTable {
    pub fn new(kind: ComplexKind) -> Self {
        HomologyTable {
            kind,
            entries: BTreeMap::new(),
        }
    }

    pub fn get(&self, n: i64, i: usize) -> Option<u64> {
        match self.entries.get(&(n, i)) {
            Some(Stabilized::Stable(c)) => Some(c.value),
            _ => None,
        }
    }

    /// Values of index `i` over `n`, for the certified entries.
    pub fn column(&self, i: usize) -> Vec<(i64, u64)> {
        self.entries
            .iter()
            .filter(|((_, j), _)| *j == i)
            .filter_map(|((n, _), s)| match s {
                Stabilized::Stable(c) => Some((*n, c.value)),
                _ => None,
            })
            .collect()
    }
}

/// `ℓ(L_i(n))` for `n` in `lo..=hi`.
pub fn l_table(engine: &mut Engine, a: &SequenceSpec, q: &IdealOfDefinition, lo: i64, hi: i64) -> Result<HomologyTable> {
    let mut t = HomologyTable::new(ComplexKind::LQuot);
    for n in lo..=hi {
        let h = l_homology(engine, a, q, n)?;
        for (i, v) in h.value.iter().enumerate() {
            t.entries.insert(
                (n, i),
                Stabilized::Stable(Certified {
                    value: *v,
                    levels: h.levels.clone(),
                }),
            );
        }
    }
    Ok(t)
}

/// `ℓ(H_i(K(n)))` for `n` in `lo..=hi`.
pub fn k_table(engine: &mut Engine, a: &SequenceSpec, q: &IdealOfDefinition, lo: i64, hi: i64) -> Result<HomologyTable> {
    let mut t = HomologyTable::new(ComplexKind::KSub);
    for n in lo..=hi {
        for (i, s) in k_homology(engine, a, q, n, false)?.into_iter().enumerate() {
            t.entries.insert((n, i), s);
        }
    }
    Ok(t)
}

/// Basis of `q^e M / q^{e+1} M` inside `M/m^k M`: the rows of `q^{e+1} M`
/// followed by representatives of the quotient.
struct FormPiece {
    ech: Echelon,
    low_rank: usize,
    reps: Vec<SparseVec>,
}

impl FormPiece {
    fn new(engine: &mut Engine, q: &IdealOfDefinition, e: i64, k: u32) -> Result<Self> {
        if e < 0 {
            let z = engine.zero(k)?;
            return Ok(FormPiece {
                ech: z.echelon().clone(),
                low_rank: 0,
                reps: Vec::new(),
            });
        }
        let hi = crate::filtration::q_power_in_m(engine, q, e, k)?;
        let lo = crate::filtration::q_power_in_m(engine, q, e + 1, k)?;
        let mut ech = lo.echelon().clone();
        let low_rank = ech.rank();
        let mut reps = Vec::new();
        for v in hi.basis() {
            if ech.insert(v) {
                reps.push(v.clone());
            }
        }
        Ok(FormPiece { ech, low_rank, reps })
    }

    fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of `v ∈ q^e M`.
    fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        let c = self.ech.coordinates(v)?;
        let low = self.low_rank as u32;
        Some(SparseVec::from_sorted(
            c.entries()
                .iter()
                .filter(|(r, _)| *r >= low)
                .map(|(r, x)| (*r - low, x.clone()))
                .collect(),
        ))
    }
}

/// Degree-`m` strand of the Koszul complex of the initial forms `a*` on
/// `G_M(q)`: terms `⊕_J [G_M(q)]_{m - c_J}`. Exact once `m^k M ⊆ q^{m+1} M`.
pub fn build_graded_koszul(engine: &mut Engine, a: &SequenceSpec, q: &IdealOfDefinition, m: i64, k: u32) -> Result<ComplexInstance> {
    let d = a.len();
    let field = engine.field();
    engine.ensure_level(k)?;
    let prepared: Vec<_> = a.elems.iter().map(|x| engine.prepare(x)).collect();
    let subs: Vec<Vec<Vec<usize>>> = (0..=d).map(|i| subsets(d, i)).collect();
    let mut pieces: Vec<Vec<FormPiece>> = Vec::with_capacity(d + 1);
    let mut terms = Vec::with_capacity(d + 1);
    for list in &subs {
        let mut ps = Vec::with_capacity(list.len());
        let mut ts = Vec::with_capacity(list.len());
        for j in list {
            let e = m - a.degree_sum(j) as i64;
            let p = FormPiece::new(engine, q, e, k)?;
            ts.push(Summand {
                subset: j.clone(),
                exponent: e,
                dim: p.dim(),
            });
            ps.push(p);
        }
        pieces.push(ps);
        terms.push(ts);
    }
    let mut boundaries = Vec::with_capacity(d);
    for i in 1..=d {
        let mut offs = Vec::with_capacity(terms[i - 1].len());
        let mut acc = 0usize;
        for t in &terms[i - 1] {
            offs.push(acc);
            acc += t.dim;
        }
        let mut cols = Vec::new();
        for (si, j) in subs[i].iter().enumerate() {
            for v in &pieces[i][si].reps {
                let mut col = SparseVec::new();
                for (plus, x, rest) in faces(j) {
                    let ti = subset_position(&subs[i - 1], &rest);
                    let img = engine.mul(&prepared[x], v, k);
                    let c = pieces[i - 1][ti].coords(&img).ok_or_else(|| {
                        Error::InvalidInput(format!("initial form leaves its degree at m = {}", m))
                    })?;
                    col = col.add_scaled(&signed(field, plus), &c.shift(offs[ti] as u32));
                }
                cols.push(col);
            }
        }
        boundaries.push(Matrix { rows: acc, cols });
    }
    Ok(ComplexInstance {
        kind: ComplexKind::Koszul,
        n: m,
        trunc_level: k,
        field,
        terms,
        boundaries,
    })
}

/// Certified `dim H_i(a*; G_M(q))_m` for `i = 0..=d`.
pub fn graded_koszul_homology(engine: &mut Engine, a: &SequenceSpec, q: &IdealOfDefinition, m: i64) -> Result<Certified<Vec<u64>>> {
    let s = engine.saturation(q.ideal(), m + 1)?;
    let policy = *engine.policy();
    let start = s.max(policy.n_start);
    engine.ensure_level(start + (policy.agree_window - 1) * policy.n_step)?;
    stabilize(&policy, start, |k| {
        let cx = build_graded_koszul(engine, a, q, m, k)?;
        if !cx.boundaries_compose_to_zero() {
            return Err(Error::InvalidInput("graded Koszul boundaries do not compose to zero".into()));
        }
        Ok(Some(cx.homology_dims()))
    })?
    .certified("graded Koszul homology")
}

/// Default range of `n`: `1..=c̄ + 2d + 8`.
pub fn default_n_range(a: &SequenceSpec) -> (i64, i64) {
    (1, a.c_bar as i64 + 2 * a.len() as i64 + 8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artinian::{Ideal, LocalRingCtx, ModulePresentation, TruncationPolicy};
    use crate::ring::PolyRing;
    use alloc::string::String;

    fn ring() -> PolyRing {
        PolyRing::new(vec![String::from("x"), String::from("y")], FieldKind::Rationals).unwrap()
    }

    fn setup(rel: &[&str], a: &[&str]) -> (Engine, IdealOfDefinition, SequenceSpec) {
        let r = ring();
        let ctx = LocalRingCtx::new(r.clone(), TruncationPolicy::default_for(3)).unwrap();
        let mut free = Engine::new(ctx.clone(), ModulePresentation::free());
        let m = Ideal::maximal(&r);
        let seq = SequenceSpec::new(&mut free, &m, a.iter().map(|s| r.parse(s).unwrap()).collect()).unwrap();
        let rels = rel.iter().map(|s| r.parse(s).unwrap()).collect();
        let mut e = Engine::new(ctx, ModulePresentation::new(rels));
        let q = IdealOfDefinition::validate(&mut e, m).unwrap();
        (e, q, seq)
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn l_terms_for_coordinates() {
        let (mut e, q, a) = setup(&[], &["x", "y"]);
        let cx = build_l(&mut e, &a, &q, 3, 6).unwrap();
        let dims: Vec<usize> = (0..=2).map(|i| cx.term_dim(i)).collect();
        assert_eq!(dims, vec![6, 6, 1]);
        assert!(cx.boundaries_compose_to_zero());
        assert_eq!(cx.homology_dims(), vec![1, 0, 0]);
        let z = build_l(&mut e, &a, &q, 0, 6).unwrap();
        assert_eq!(z.homology_dims(), vec![0, 0, 0]);
    }

    #[test]
    fn cusp_pair_l1_is_two() {
        let (mut e, q, a) = setup(&[], &["y^2 - x^3", "y^2 + x^3"]);
        for n in 6..9 {
            let h = l_homology(&mut e, &a, &q, n).unwrap();
            assert_eq!(h.value[1], 2, "n = {}", n);
            assert_eq!(h.value[0], 6);
            let el = euler_l(&mut e, &a, &q, n).unwrap();
            assert_eq!(el.from_homology, el.from_terms);
            assert_eq!(el.from_homology, 4);
        }
    }

    #[test]
    fn zerodivisor_initial_form_gives_l1() {
        let (mut e, q, a) = setup(&["x^2"], &["x + y^3"]);
        let t = l_table(&mut e, &a, &q, 1, 8).unwrap();
        assert!(t.column(1).iter().any(|(_, v)| *v > 0));
    }

    #[test]
    fn k_homology_of_regular_pair() {
        let (mut e, q, a) = setup(&[], &["x", "y"]);
        for n in 1..4 {
            let h = k_homology(&mut e, &a, &q, n, false).unwrap();
            let v: Vec<u64> = h.into_iter().map(|s| s.certified("h").unwrap().value).collect();
            assert_eq!(v, vec![0, 0, 0], "n = {}", n);
        }
        let kos = k_homology(&mut e, &a, &q, 0, true).unwrap();
        let v: Vec<u64> = kos.into_iter().map(|s| s.certified("h").unwrap().value).collect();
        assert_eq!(v, vec![1, 0, 0]);
    }

    #[test]
    fn chi_of_cusp_pair() {
        let (mut e, q, a) = setup(&[], &["y^2 - x^3", "y^2 + x^3"]);
        let c = chi_k(&mut e, &a, &q, 7, 6).unwrap();
        assert_eq!(c.via_identity, 2);
        assert_eq!(c.direct, Some(2));
        assert!(check_short_exact(&mut e, &a, &q, 7, 9).unwrap());
    }

    #[test]
    fn graded_koszul_of_forms() {
        // X, Y regular on k[X,Y]: only H_0 in degree 0
        let (mut e, q, a) = setup(&[], &["x + y^2", "y"]);
        for m in 0..5 {
            let h = graded_koszul_homology(&mut e, &a, &q, m).unwrap().value;
            assert_eq!(h, if m == 0 { vec![1, 0, 0] } else { vec![0, 0, 0] });
        }
        // Y^2, Y^2: H_1 appears in degree 2
        let (mut e, q, a) = setup(&[], &["y^2 - x^3", "y^2 + x^3"]);
        let h = graded_koszul_homology(&mut e, &a, &q, 2).unwrap().value;
        assert_eq!(h[2], 0);
        assert_eq!(h[1], 1);
    }
}
