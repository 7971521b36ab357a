use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::euler::e0_of_sequence;
use super::lift::{lift_to_sequence, LiftResult};
use super::regularity::regularity_evidence;
use super::{require_stable, stable_series, ClaimId, NRange, Verdict, Workspace};
use crate::artinian::{quotient_dim, Certified, Engine};
use crate::complexes::{l_homology, subsets};
use crate::error::{Error, Result};
use crate::filtration::{
    exact_length, form_quotient_piece, graded_colon_dim, ideal_plus_power, IdealOfDefinition, SequenceSpec,
};
use crate::oracle::{homogeneous_colon_dim, homogeneous_ideal_piece_dim, monomials_of_degree};
use crate::ring::Poly;

type L1Series = (Vec<(i64, u64)>, (u64, i64), Vec<u32>);

/// `ℓ(L_1(a,q,M;n))` over a range, with its stable value and levels.
fn l1_series(ws: &mut Workspace, a: &SequenceSpec, range: NRange) -> Result<L1Series> {
    let mut levels = Vec::new();
    let window = ws.window();
    let (table, stable) = stable_series(range, window, |n| {
        let h = l_homology(&mut ws.module, a, &ws.q, n)?;
        levels = h.levels.clone();
        Ok(h.value.get(1).copied().unwrap_or(0))
    })?;
    let n_max = ws.module.policy().n_max;
    Ok((table, require_stable(stable, "length of L1", n_max)?, levels))
}

/// `X_n = ∩_i ((b) + q^{n+β-c̄_i}) M :_M a_i` together with `(b) + q^{n+β-c̄}`
/// and `(b) + q^{n+β-c̄-1}`, at level `k`.
fn formula_spaces(
    engine: &mut Engine,
    q: &IdealOfDefinition,
    a: &SequenceSpec,
    b: &[Poly],
    beta: u32,
    n: i64,
    k: u32,
) -> Result<(crate::artinian::Subspace, crate::artinian::Subspace, crate::artinian::Subspace)> {
    let base = n + beta as i64 - a.c_bar as i64;
    let mut x = engine.full(k)?;
    for (ai, ci) in a.elems.iter().zip(&a.degrees) {
        let target = ideal_plus_power(engine, b, q, base + *ci as i64, k)?;
        let pa = engine.prepare(ai);
        x = x.intersect(&engine.colon(&target, &pa));
    }
    let y = ideal_plus_power(engine, b, q, base, k)?;
    let z = ideal_plus_power(engine, b, q, base - 1, k)?;
    Ok((x, y, z))
}

fn formula_level(engine: &mut Engine, q: &IdealOfDefinition, a: &SequenceSpec, beta: u32, n: i64) -> Result<u32> {
    let top = n + beta as i64 - a.c_bar as i64 + a.max_degree() as i64;
    engine.saturation(q.ideal(), top.max(1))
}

/// `ℓ(X_n / ((b) + q^{n+β-c̄}) M)`.
pub fn formula_rhs(ws: &mut Workspace, a: &SequenceSpec, b: &[Poly], beta: u32, n: i64) -> Result<Certified<u64>> {
    let q = ws.q.clone();
    let s = formula_level(&mut ws.module, &q, a, beta, n)?;
    exact_length(&mut ws.module, s, "formula subquotient", |e, k| {
        let (x, y, _) = formula_spaces(e, &q, a, b, beta, n, k)?;
        Ok(quotient_dim(&x, &y)? as u64)
    })
}

/// `ℓ(X_n / (X_n ∩ ((b) + q^{n+β-c̄-1}) M))`.
fn residual_piece(ws: &mut Workspace, a: &SequenceSpec, b: &[Poly], beta: u32, n: i64) -> Result<Certified<u64>> {
    let q = ws.q.clone();
    let s = formula_level(&mut ws.module, &q, a, beta, n)?;
    exact_length(&mut ws.module, s, "residual piece", |e, k| {
        let (x, _, z) = formula_spaces(e, &q, a, b, beta, n, k)?;
        Ok(quotient_dim(&x, &x.intersect(&z))? as u64)
    })
}

/// Lifts the given elements (or searches for suitable ones) so that their
/// initial forms are a `G_M(q)`-regular sequence of length `t` inside
/// `a* G_A(q)`.
pub fn regular_lift(ws: &mut Workspace, a: &SequenceSpec, given: Option<&[Poly]>, t: usize, range: NRange) -> Result<Vec<LiftResult>> {
    if t == 0 {
        return Ok(Vec::new());
    }
    let mut candidates: Vec<Vec<Poly>> = Vec::new();
    match given {
        Some(b) => candidates.push(b.to_vec()),
        None => {
            for s in subsets(a.len(), t) {
                candidates.push(s.iter().map(|j| a.elems[*j].clone()).collect());
            }
            // small fixed combinations of equal-degree elements
            if t == 1 {
                for i in 0..a.len() {
                    for j in i + 1..a.len() {
                        if a.degrees[i] == a.degrees[j] {
                            for lambda in [1i64, 2, -1, 3] {
                                let c = a.elems[j].scale(&a.elems[j].field().from_i64(lambda));
                                candidates.push(vec![a.elems[i].add(&c)]);
                            }
                        }
                    }
                }
            }
        }
    }
    for b in candidates {
        let lifts = match lift_to_sequence(ws, &b, a) {
            Ok(l) => l,
            Err(Error::Unsolvable(_)) if given.is_none() => continue,
            Err(e) => return Err(e),
        };
        if lifts.iter().any(|l| !l.verified()) {
            return Err(Error::HypothesisFailed("lift failed its postconditions".into()));
        }
        let elems: Vec<Poly> = lifts.iter().map(|l| l.b_prime.clone()).collect();
        let betas: Vec<u32> = lifts.iter().map(|l| l.beta).collect();
        let seq = ws.sequence_with_degrees(&elems, &betas);
        let ev = regularity_evidence(ws, &seq, range)?;
        if ev.oracle_regular && ev.l1_zero {
            return Ok(lifts);
        }
        if given.is_some() {
            return Err(Error::HypothesisFailed("the given initial forms are not a regular sequence".into()));
        }
    }
    Err(Error::HypothesisFailed(format!(
        "no regular sequence of length {} found among the initial forms",
        t
    )))
}

fn describe(ws: &Workspace, lifts: &[LiftResult]) -> String {
    let names = ws.ring().vars().to_vec();
    let parts: Vec<String> = lifts.iter().map(|l| l.b_prime.to_string_with(&names)).collect();
    format!("({})", parts.join(", "))
}

/// `L_i(n) = 0` for `i > d - t` and `ℓ(L_{d-t}(n))` equals the colon
/// subquotient, for each `n` in the range.
pub fn check_vanishing_formula(ws: &mut Workspace, a: &SequenceSpec, b: &[Poly], range: NRange) -> Result<Verdict> {
    let t = b.len();
    let d = a.len();
    if t > d {
        return Err(Error::InvalidInput("more lifted elements than parameters".into()));
    }
    let lifts = regular_lift(ws, a, Some(b), t, range)?;
    let bp: Vec<Poly> = lifts.iter().map(|l| l.b_prime.clone()).collect();
    let beta: u32 = lifts.iter().map(|l| l.beta).sum();
    let mut v = Verdict::new(ClaimId::VanishingFormula)
        .window(range.lo, range.hi)
        .int("d", d as i64)
        .int("t", t as i64)
        .int("beta", beta as i64)
        .text("b_prime", describe(ws, &lifts));
    let mut lhs_table = Vec::new();
    let mut rhs_table = Vec::new();
    for n in range.lo..=range.hi {
        let h = l_homology(&mut ws.module, a, &ws.q, n)?;
        for (i, x) in h.value.iter().enumerate().skip(d - t + 1) {
            v = v.require(*x == 0, &format!("L_{} vanishes", i), Some(n), *x as i64, 0);
        }
        let lhs = h.value[d - t];
        let rhs = formula_rhs(ws, a, &bp, beta, n)?;
        if n == range.hi {
            v = v.cert("L homology", &h.levels).cert("subquotient", &rhs.levels);
        }
        lhs_table.push((n, lhs));
        rhs_table.push((n, rhs.value));
        v = v.require(lhs == rhs.value, "L_{d-t} against subquotient", Some(n), lhs as i64, rhs.value as i64);
    }
    Ok(v.table("l_top", &lhs_table).table("subquotient", &rhs_table))
}

/// The pieces of `ℓ(L_1)` when `a* G_A(q)` contains a regular sequence of
/// length `d - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L1Decomposition {
    /// Stable `ℓ([b* G_M : a* / b* G_M]_{n+β-c̄-1})`.
    pub x_frak: u64,
    /// Stable residual piece.
    pub ell: u64,
    /// Stable `ℓ(L_1)`.
    pub total: u64,
    pub beta: u32,
    pub b_prime: Vec<Poly>,
    pub rows: Vec<(i64, u64, u64, u64)>,
    pub window: (i64, i64),
}

pub fn decompose_l1(ws: &mut Workspace, a: &SequenceSpec, b: Option<&[Poly]>, range: NRange) -> Result<(L1Decomposition, Verdict)> {
    let d = a.len();
    if d == 0 {
        return Err(Error::InvalidInput("empty sequence".into()));
    }
    let lifts = regular_lift(ws, a, b, d - 1, range)?;
    let bp: Vec<Poly> = lifts.iter().map(|l| l.b_prime.clone()).collect();
    let beta: u32 = lifts.iter().map(|l| l.beta).sum();
    let window = ws.window();
    let mut rows = Vec::new();
    let mut v = Verdict::new(ClaimId::L1Decomposition).text("b_prime", describe(ws, &lifts));
    let mut hi = range.hi;
    let mut n = range.lo;
    loop {
        while n <= hi {
            let total = l_homology(&mut ws.module, a, &ws.q, n)?;
            let x = graded_colon_dim(&mut ws.module, &bp, a, &ws.q, n + beta as i64 - a.c_bar as i64 - 1)?;
            let ell = residual_piece(ws, a, &bp, beta, n)?;
            if n == range.hi {
                v = v.cert("graded colon", &x.levels).cert("residual", &ell.levels);
            }
            let t = total.value.get(1).copied().unwrap_or(0);
            v = v.require(t == x.value + ell.value, "L1 against graded colon plus residual", Some(n), t as i64, (x.value + ell.value) as i64);
            rows.push((n, t, x.value, ell.value));
            n += 1;
        }
        let tail_ok = |sel: fn(&(i64, u64, u64, u64)) -> u64| {
            let vals: Vec<(i64, u64)> = rows.iter().map(|r| (r.0, sel(r))).collect();
            crate::filtration::stable_tail(&vals, window)
        };
        let (sx, sl, st) = (tail_ok(|r| r.2), tail_ok(|r| r.3), tail_ok(|r| r.1));
        if let (Some(x), Some(l), Some(t)) = (sx, sl, st) {
            let dec = L1Decomposition {
                x_frak: x.0,
                ell: l.0,
                total: t.0,
                beta,
                b_prime: bp,
                rows: rows.clone(),
                window: (range.lo, hi),
            };
            v = v
                .window(range.lo, hi)
                .int("x_frak", x.0 as i64)
                .int("ell", l.0 as i64)
                .int("l1", t.0 as i64)
                .int("beta", beta as i64)
                .table("x_frak_by_n", &rows.iter().map(|r| (r.0, r.2)).collect::<Vec<_>>())
                .table("ell_by_n", &rows.iter().map(|r| (r.0, r.3)).collect::<Vec<_>>());
            return Ok((dec, v));
        }
        if hi >= range.cap {
            return Err(Error::NotStabilized {
                what: "pieces of L1".into(),
                n_max: ws.module.policy().n_max,
            });
        }
        hi = (hi + window as i64).min(range.cap);
    }
}

/// `ℓ(M/aM) = c·e_0(q;M) + ℓ(L_1)` with the stable length of `L_1`.
pub fn check_multiplicity_identity(ws: &mut Workspace, a: &SequenceSpec, b: Option<&[Poly]>, range: NRange) -> Result<Verdict> {
    let colen = ws.require_sop(a)?;
    let d = a.len();
    let lifts = regular_lift(ws, a, b, d.saturating_sub(1), range)?;
    let (_, e0) = ws.dim_and_e0()?;
    let (table, (l1, from), levels) = l1_series(ws, a, range)?;
    let c = a.c_prod as i64;
    let rhs = c * e0 + l1 as i64;
    let v = Verdict::new(ClaimId::MultiplicityIdentity)
        .window(range.lo, table.last().map(|x| x.0).unwrap_or(range.hi))
        .int("length_m_mod_a", colen.value as i64)
        .int("c", c)
        .int("e0_q", e0)
        .int("l1", l1 as i64)
        .int("stable_from", from)
        .text("b_prime", describe(ws, &lifts))
        .table("l1_by_n", &table)
        .cert("length of M/aM", &colen.levels)
        .cert("L1", &levels);
    Ok(v.require(colen.value as i64 == rhs, "length of M/aM against c*e0 + l1", None, colen.value as i64, rhs))
}

/// `ℓ(M/aM) ≥ c·e_0(q;M) + 𝔵`.
pub fn check_improved_bound(ws: &mut Workspace, a: &SequenceSpec, b: Option<&[Poly]>, range: NRange) -> Result<Verdict> {
    let colen = ws.require_sop(a)?;
    let (dec, _) = decompose_l1(ws, a, b, range)?;
    let (_, e0) = ws.dim_and_e0()?;
    let bound = a.c_prod as i64 * e0 + dec.x_frak as i64;
    let slack = colen.value as i64 - bound;
    let v = Verdict::new(ClaimId::ImprovedBound)
        .window(dec.window.0, dec.window.1)
        .int("length_m_mod_a", colen.value as i64)
        .int("c", a.c_prod as i64)
        .int("e0_q", e0)
        .int("x_frak", dec.x_frak as i64)
        .int("slack", slack)
        .cert("length of M/aM", &colen.levels);
    Ok(v.require(slack >= 0, "length of M/aM against c*e0 + x_frak", None, colen.value as i64, bound))
}

/// Whether `[G_M(q)/a* G_M(q)]_n` vanishes on the tail of the range, i.e.
/// `a*` is a homogeneous system of parameters of the form module.
fn initial_forms_are_sop(ws: &mut Workspace, a: &SequenceSpec, range: NRange) -> Result<bool> {
    let window = ws.window() as i64;
    for n in (range.hi - window + 1).max(0)..=range.hi {
        if form_quotient_piece(&mut ws.module, a, &ws.q, n)?.value != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `ℓ(M/aM) - e_0(a;M) ≤ ℓ(L_1)`, with equality when `a*` is a system of
/// parameters of `G_M(q)`.
pub fn check_upper_bound(ws: &mut Workspace, a: &SequenceSpec, b: Option<&[Poly]>, range: NRange) -> Result<Verdict> {
    let colen = ws.require_sop(a)?;
    let d = a.len();
    regular_lift(ws, a, b, d.saturating_sub(1), range)?;
    let e0a = e0_of_sequence(ws, a)?;
    let (_, (l1, _), levels) = l1_series(ws, a, range)?;
    let lhs = colen.value as i64 - e0a.value;
    let sop = initial_forms_are_sop(ws, a, range)?;
    let mut v = Verdict::new(ClaimId::UpperBound)
        .window(range.lo, range.hi)
        .int("length_m_mod_a", colen.value as i64)
        .int("e0_a", e0a.value)
        .int("l1", l1 as i64)
        .flag("initial_forms_sop", sop)
        .flag("equality", lhs == l1 as i64)
        .cert("L1", &levels)
        .cert("e0(a;M)", &e0a.levels);
    v = v.require(lhs <= l1 as i64, "length minus e0(a) against l1", None, lhs, l1 as i64);
    if sop {
        v = v.require(lhs == l1 as i64, "equality for a parameter system of initial forms", None, lhs, l1 as i64);
    }
    Ok(v)
}

/// Local intersection data of two plane curve germs `f = 0`, `g = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutReport {
    pub f: Poly,
    pub g: Poly,
    pub c: u32,
    pub d_deg: u32,
    /// `ℓ(A/(f,g))`.
    pub e0: u64,
    /// Stable `dim [f* B :_B g* / f* B]_n`.
    pub t: u64,
    /// The same count done in the polynomial ring of initial forms.
    pub t_oracle: u64,
    pub slack: i64,
    pub transversal: bool,
    pub t_table: Vec<(i64, u64)>,
    pub levels: Vec<u32>,
}

/// `e_0(f,g;A) ≥ c·d + t` for `A` the local ring of the plane at the origin.
pub fn bezout_plane(ws: &mut Workspace, f: &Poly, g: &Poly, range: NRange) -> Result<(BezoutReport, Verdict)> {
    if ws.ring().nvars() != 2 || !ws.module.module().relations.is_empty() || !ws.q.is_maximal() {
        return Err(Error::InvalidInput("plane intersection needs two variables, M = A and q = m".into()));
    }
    let colen = ws.colength(&[f.clone(), g.clone()])?;
    let fs = ws.sequence(vec![f.clone()])?;
    let gs = ws.sequence(vec![g.clone()])?;
    let (c, d_deg) = (fs.degrees[0], gs.degrees[0]);
    let ff = fs.forms[0].form.clone().expect("maximal ideal gives forms");
    let gf = gs.forms[0].form.clone().expect("maximal ideal gives forms");
    let window = ws.window();
    let field = ws.ring().field();
    let mut levels = Vec::new();
    let (t_table, t) = stable_series(range, window, |m| {
        let x = graded_colon_dim(&mut ws.module, core::slice::from_ref(f), &gs, &ws.q, m)?;
        levels = x.levels.clone();
        Ok(x.value)
    })?;
    let n_max = ws.module.policy().n_max;
    let (t, _) = require_stable(t, "tangent count", n_max)?;
    let oracle: Vec<(i64, u64)> = t_table
        .iter()
        .map(|(m, _)| (*m, homogeneous_colon_dim(2, field, core::slice::from_ref(&ff), &gf, (*m).max(0) as u32) as u64))
        .collect();
    let t_oracle = oracle.last().map(|x| x.1).unwrap_or(0);
    // coprime forms of degrees c, d fill every degree from c + d - 1 on; forms with a common factor never do
    let top = c + d_deg - 1;
    let transversal = homogeneous_ideal_piece_dim(2, field, &[ff.clone(), gf.clone()], top) == monomials_of_degree(2, top).len();
    let slack = colen.value as i64 - (c * d_deg) as i64 - t as i64;
    let report = BezoutReport {
        f: f.clone(),
        g: g.clone(),
        c,
        d_deg,
        e0: colen.value,
        t,
        t_oracle,
        slack,
        transversal,
        t_table: t_table.clone(),
        levels: levels.clone(),
    };
    let mut v = Verdict::new(ClaimId::PlaneBezout)
        .window(range.lo, t_table.last().map_or(range.hi, |x| x.0))
        .int("e0", colen.value as i64)
        .int("c", c as i64)
        .int("d", d_deg as i64)
        .int("t", t as i64)
        .int("slack", slack)
        .flag("transversal", transversal)
        .table("t_by_n", &t_table)
        .cert("length of A/(f,g)", &colen.levels)
        .cert("graded colon", &levels);
    for ((m, x), (_, y)) in t_table.iter().zip(&oracle) {
        v = v.require(x == y, "graded colon against polynomial-ring count", Some(*m), *x as i64, *y as i64);
    }
    v = v.require(slack >= 0, "e0 against c*d + t", None, colen.value as i64, (c * d_deg) as i64 + t as i64);
    if transversal {
        v = v.require(t == 0 && slack == 0, "transversal curves meet with multiplicity c*d", None, colen.value as i64, (c * d_deg) as i64);
    }
    Ok((report, v))
}
