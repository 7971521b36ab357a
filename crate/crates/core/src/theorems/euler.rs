use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::regularity::regularity_evidence;
use super::{merge_levels, project, require_stable, stable_series, two_level_length, ClaimId, NRange, Verdict, Workspace};
use crate::artinian::{quotient_dim, Certified, Engine, Ideal, Stabilized};
use crate::complexes::{chi_k, k_homology, l_homology};
use crate::error::{Error, Result};
use crate::filtration::{
    eventual_degree, exact_length, fit_polynomial, form_quotient_piece, hilbert_samuel, IdealOfDefinition, PolyFit,
    SequenceSpec,
};

/// `e_0(a;M)` as the Euler characteristic of the Koszul complex `K(a;M)`.
pub fn e0_of_sequence(ws: &mut Workspace, a: &SequenceSpec) -> Result<Certified<i64>> {
    if a.is_empty() {
        let c = ws.colength(&[])?;
        return Ok(c.map(|v| v as i64));
    }
    let h = k_homology(&mut ws.module, a, &ws.q, 0, true)?;
    let mut value = 0i64;
    let mut levels = Vec::new();
    for (i, s) in h.iter().enumerate() {
        match s {
            Stabilized::Stable(c) => {
                value += if i % 2 == 0 { c.value as i64 } else { -(c.value as i64) };
                levels = merge_levels([levels.as_slice(), c.levels.as_slice()]);
            }
            Stabilized::NotStabilized { .. } => {
                return Err(Error::NotSystemOfParameters(format!("Koszul homology H_{} has infinite length", i)))
            }
        }
    }
    Ok(Certified { value, levels })
}

/// `e_0(a;M)` read off the Hilbert-Samuel polynomial of the ideal `(a)`, or
/// `None` when the fit does not settle within the truncation budget.
pub fn e0_by_hilbert_samuel(ws: &mut Workspace, a: &SequenceSpec) -> Result<Option<i64>> {
    let (dim, _) = ws.dim_and_e0()?;
    let qa = match IdealOfDefinition::validate(&mut ws.module, Ideal::new(a.elems.clone())) {
        Ok(q) => q,
        Err(Error::NotIdealOfDefinition) => return Err(Error::NotSystemOfParameters("(a) is not m-primary on M".into())),
        Err(e) => return Err(e),
    };
    let d = a.len() as i64;
    match hilbert_samuel(&mut ws.module, &qa, 1, d + 4, d + 8) {
        Ok(hs) if hs.dim == dim => Ok(Some(hs.e0())),
        Ok(_) => Ok(None),
        Err(Error::NotStabilized { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

type FittedSeries = (Vec<(i64, u64)>, Option<PolyFit>);

/// Tabulates `f` until a polynomial fits on an agreement window.
fn fitted_series<F>(range: NRange, window: usize, mut f: F) -> Result<FittedSeries>
where
    F: FnMut(i64) -> Result<u64>,
{
    let mut values = Vec::new();
    let mut n = range.lo;
    let mut hi = range.hi;
    loop {
        while n <= hi {
            values.push((n, f(n)?));
            n += 1;
        }
        if let Some(fit) = fit_polynomial(&values, window) {
            return Ok((values, Some(fit)));
        }
        if hi >= range.cap {
            return Ok((values, None));
        }
        hi = (hi + window as i64).min(range.cap);
    }
}

fn require_fit(fit: Option<PolyFit>, what: &str, engine: &Engine) -> Result<PolyFit> {
    fit.ok_or_else(|| Error::NotStabilized {
        what: what.into(),
        n_max: engine.policy().n_max,
    })
}

/// Degree of a fitted polynomial, `None` for the zero polynomial.
fn fit_degree(fit: &PolyFit) -> Option<u32> {
    if fit.degree == 0 && fit.e[0] == 0 {
        None
    } else {
        Some(fit.degree)
    }
}

/// `deg ≤ bound` with the zero polynomial of degree `-∞`.
fn degree_at_most(deg: Option<u32>, bound: i64) -> bool {
    deg.is_none_or(|x| (x as i64) <= bound)
}

/// `ℓ(q^n M / Σ_i a_i q^{n-c_i} M)`.
fn h0_term(ws: &mut Workspace, a: &SequenceSpec, n: i64) -> Result<Certified<u64>> {
    let q = ws.q.ideal().clone();
    let e = &mut ws.module;
    let sa = e.saturation(&Ideal::new(a.elems.clone()), 1)?;
    let cmin = a.degrees.iter().copied().min().unwrap_or(0) as i64;
    let sq = e.saturation(&q, n - cmin)?;
    let prepared: Vec<_> = a.elems.iter().map(|x| e.prepare(x)).collect();
    exact_length(e, sa + sq.max(1), "H0 term", |e, k| {
        let top = e.power(&q, n, k)?;
        let mut low = e.zero(k)?;
        for (pa, c) in prepared.iter().zip(&a.degrees) {
            let src = e.power(&q, n - *c as i64, k)?;
            low = low.sum(&e.image_under(pa, &src));
        }
        Ok(quotient_dim(&top, &low)? as u64)
    })
}

/// `ℓ(((Σ_{i<d} a_i q^{n+c_d-c_i} M) :_M a_d ∩ q^n M) / Σ_{i<d} a_i q^{n-c_i} M)`.
fn h1_term(ws: &mut Workspace, a: &SequenceSpec, n: i64) -> Result<Certified<u64>> {
    let q = ws.q.ideal().clone();
    let d = a.len();
    let e = &mut ws.module;
    let start = e.saturation(&q, n)?.max(e.policy().n_start);
    let prepared: Vec<_> = a.elems.iter().map(|x| e.prepare(x)).collect();
    let cd = a.degrees[d - 1] as i64;
    two_level_length(e, start, a.max_degree(), "H1 term", |e, nl, w| {
        let mut s = e.zero(w)?;
        for (pa, c) in prepared.iter().zip(&a.degrees).take(d - 1) {
            let src = e.power(&q, n + cd - *c as i64, w)?;
            s = s.sum(&e.image_under(pa, &src));
        }
        let top = project(e, &e.colon(&s, &prepared[d - 1]), nl).intersect(&e.power(&q, n, nl)?);
        let mut low = e.zero(nl)?;
        for (pa, c) in prepared.iter().zip(&a.degrees).take(d - 1) {
            let src = e.power(&q, n - *c as i64, nl)?;
            low = low.sum(&e.image_under(pa, &src));
        }
        Ok(quotient_dim(&top, &low)? as u64)
    })
}

/// `e_0(a;M) = c·e_0(q;M) + ℓ(H0 term) - ℓ(H1 term)` for `n ≫ 0`, when the
/// initial forms of all but the last element form a regular sequence.
pub fn check_euler_identity(ws: &mut Workspace, a: &SequenceSpec, range: NRange) -> Result<Verdict> {
    let d = a.len();
    ws.require_sop(a)?;
    let head: Vec<usize> = (0..d - 1).collect();
    let a_head = a.select(&head);
    if !a_head.is_empty() {
        let ev = regularity_evidence(ws, &a_head, range)?;
        if !(ev.oracle_regular && ev.l1_zero) {
            return Err(Error::HypothesisFailed(
                "the initial forms of all but the last element are not a regular sequence".into(),
            ));
        }
    }
    let koszul = e0_of_sequence(ws, a)?;
    let by_hs = e0_by_hilbert_samuel(ws, a)?;
    let e0a = by_hs.unwrap_or(koszul.value);
    let (_, e0q) = ws.dim_and_e0()?;
    let c = a.c_prod as i64;
    let window = ws.window();
    let mut h0s = Vec::new();
    let mut h1s = Vec::new();
    let mut levels = Vec::new();
    let (rhs_table, stable) = stable_series(range, window, |n| {
        let h0 = h0_term(ws, a, n)?;
        let h1 = h1_term(ws, a, n)?;
        levels = merge_levels([h0.levels.as_slice(), h1.levels.as_slice()]);
        h0s.push((n, h0.value));
        h1s.push((n, h1.value));
        Ok((c * e0q + h0.value as i64 - h1.value as i64).max(0) as u64)
    })?;
    let (rhs, from) = require_stable(stable, "Euler identity terms", ws.module.policy().n_max)?;
    let hi = rhs_table.last().map(|x| x.0).unwrap_or(range.hi);
    // reconciliation with the homology of K(a,q,M;n) at the last n
    let hk = k_homology(&mut ws.module, a, &ws.q, hi, false)?;
    let stable_at = |i: usize| match hk.get(i) {
        Some(Stabilized::Stable(c)) => Some(c.value as i64),
        _ => None,
    };
    let h0_last = h0s.last().map(|x| x.1 as i64);
    let h1_last = h1s.last().map(|x| x.1 as i64);
    let mut v = Verdict::new(ClaimId::EulerIdentity)
        .window(range.lo, hi)
        .int("e0_a", e0a)
        .int("e0_a_koszul", koszul.value)
        .int("c", c)
        .int("e0_q", e0q)
        .int("rhs", rhs as i64)
        .int("stable_from", from)
        .table("h0_term", &h0s)
        .table("h1_term", &h1s)
        .flag("k_h0_matches", stable_at(0) == h0_last)
        .flag("k_h1_matches", stable_at(1) == h1_last)
        .cert("terms", &levels)
        .cert("Koszul homology", &koszul.levels);
    if let Some(h) = by_hs {
        v = v.require(h == koszul.value, "e0(a) by Hilbert-Samuel against Koszul", None, h, koszul.value);
    }
    Ok(v.require(e0a == rhs as i64, "e0(a) against c*e0(q) + H0 term - H1 term", Some(from), e0a, rhs as i64))
}

/// `χ(K(a,q,M;n)) → e_0(a;M) - c·e_0(q;M)`, `χ ≤ ℓ(L_1)`, with equality
/// exactly when `M` is Cohen-Macaulay.
pub fn check_chi_bounds(ws: &mut Workspace, a: &SequenceSpec, range: NRange) -> Result<Verdict> {
    let d = a.len();
    let colen = ws.require_sop(a)?;
    let head: Vec<usize> = (0..d.saturating_sub(1)).collect();
    let a_head = a.select(&head);
    // the comparison with L1 needs the initial forms of all but the last element regular
    let bound_applies = a_head.is_empty() || {
        let ev = regularity_evidence(ws, &a_head, range)?;
        ev.oracle_regular && ev.l1_zero
    };
    let e0a = e0_of_sequence(ws, a)?;
    let (_, e0q) = ws.dim_and_e0()?;
    let c = a.c_prod as i64;
    let window = ws.window();
    let mut v = Verdict::new(ClaimId::ChiBound);
    let mut rows = Vec::new();
    let (chi_table, stable) = stable_series(range, window, |n| {
        let ck = chi_k(&mut ws.module, a, &ws.q, n, e0a.value)?;
        let l = l_homology(&mut ws.module, a, &ws.q, n)?;
        let euler: i64 = l.value.iter().enumerate().map(|(i, x)| if i % 2 == 0 { *x as i64 } else { -(*x as i64) }).sum();
        rows.push((n, ck.direct, euler, l.value.get(1).copied().unwrap_or(0)));
        // offset keeps negative values representable in the table
        Ok((ck.via_identity + (1 << 32)) as u64)
    })?;
    let (chi_off, from) = require_stable(stable, "Euler characteristic of K", ws.module.policy().n_max)?;
    let chi = chi_off as i64 - (1 << 32);
    for (n, direct, euler, _) in &rows {
        if let Some(x) = direct {
            let via = e0a.value - euler;
            v = v.require(*x == via, "direct Euler characteristic against identity", Some(*n), *x, via);
        }
    }
    let tail: Vec<(i64, u64)> = rows.iter().map(|r| (r.0, r.3)).collect();
    let (l1, _) = require_stable(crate::filtration::stable_tail(&tail, window), "length of L1", ws.module.policy().n_max)?;
    let euler_tail = rows.last().map(|r| r.2).unwrap_or(0);
    let cm = colen.value as i64 == e0a.value;
    let hi = chi_table.last().map(|x| x.0).unwrap_or(range.hi);
    v = v
        .window(range.lo, hi)
        .int("chi", chi)
        .int("stable_from", from)
        .int("euler_l", euler_tail)
        .int("e0_a", e0a.value)
        .int("c", c)
        .int("e0_q", e0q)
        .int("l1", l1 as i64)
        .int("length_m_mod_a", colen.value as i64)
        .flag("cohen_macaulay", cm)
        .flag("equality", chi == l1 as i64)
        .flag("direct_available", rows.iter().all(|r| r.1.is_some()))
        .table("l1_by_n", &tail)
        .cert("length of M/aM", &colen.levels)
        .cert("Koszul homology", &e0a.levels);
    v = v
        .require(euler_tail == c * e0q, "Euler characteristic of L against c*e0(q)", Some(hi), euler_tail, c * e0q)
        .require(chi == e0a.value - c * e0q, "chi against e0(a) - c*e0(q)", Some(from), chi, e0a.value - c * e0q)
        .flag("bound_applies", bound_applies);
    if bound_applies {
        v = v
            .require(chi <= l1 as i64, "chi against length of L1", None, chi, l1 as i64)
            .require((chi == l1 as i64) == cm, "equality against Cohen-Macaulayness", None, chi, l1 as i64);
    }
    Ok(v)
}

/// `0 :_M a`, approximated at level `w` and projected to `n`.
fn annihilator(e: &mut Engine, pa: &crate::artinian::PreparedPoly, nl: u32, w: u32) -> Result<crate::artinian::Subspace> {
    let z = e.zero(w)?;
    Ok(project(e, &e.colon(&z, pa), nl))
}

/// Certified `ℓ(Z/(Z ∩ q^n M))` for `Z = 0 :_M a`.
fn annihilator_samuel(ws: &mut Workspace, a: &crate::ring::Poly, c: u32, n: i64) -> Result<Certified<u64>> {
    let q = ws.q.ideal().clone();
    let e = &mut ws.module;
    let start = e.saturation(&q, n)?.max(e.policy().n_start);
    let pa = e.prepare(a);
    two_level_length(e, start, c, "Samuel function of 0:a", |e, nl, w| {
        let z = annihilator(e, &pa, nl, w)?;
        let qn = e.power(&q, n, nl)?;
        Ok((z.sum(&qn).dim() - qn.dim()) as u64)
    })
}

/// Certified `ℓ((q^n M : a) / (q^{n-c} M + 0 :_M a))`.
fn colon_excess(ws: &mut Workspace, a: &crate::ring::Poly, c: u32, n: i64) -> Result<Certified<u64>> {
    let q = ws.q.ideal().clone();
    let e = &mut ws.module;
    let start = e.saturation(&q, n)?.max(e.policy().n_start);
    let pa = e.prepare(a);
    two_level_length(e, start, c, "colon excess", |e, nl, w| {
        let z = annihilator(e, &pa, nl, w)?;
        let qn = e.power(&q, n, nl)?;
        let col = e.colon(&qn, &pa);
        let low = e.power(&q, n - c as i64, nl)?.sum(&z);
        Ok(quotient_dim(&col, &low)? as u64)
    })
}

/// `e_0(a';Z)` for `Z = 0 :_M a_1` and `a'` of length at most one.
fn e0_on_annihilator(ws: &mut Workspace, a1: &crate::ring::Poly, rest: &[crate::ring::Poly], c: u32) -> Result<Option<i64>> {
    let e = &mut ws.module;
    let start = e.policy().n_start;
    let p1 = e.prepare(a1);
    match rest {
        [] => {
            let l = two_level_length(e, start, c, "length of 0:a", |e, nl, w| Ok(annihilator(e, &p1, nl, w)?.dim() as u64))?;
            Ok(Some(l.value as i64))
        }
        [a2] => {
            let p2 = e.prepare(a2);
            let quo = two_level_length(e, start, c, "length of Z/a2 Z", |e, nl, w| {
                let zero = e.zero(w)?;
                let zw = e.colon(&zero, &p1);
                let z = project(e, &zw, nl);
                let az = project(e, &e.image_under(&p2, &zw), nl);
                Ok(quotient_dim(&z, &az)? as u64)
            })?;
            let ann = two_level_length(e, start, c, "length of 0:_Z a2", |e, nl, w| {
                let zero = e.zero(w)?;
                let both = e.colon(&zero, &p1).intersect(&e.colon(&zero, &p2));
                Ok(project(e, &both, nl).dim() as u64)
            })?;
            Ok(Some(quo.value as i64 - ann.value as i64))
        }
        _ => Ok(None),
    }
}

/// The multiplicity inequality for a single element and, when `a` is a
/// system of parameters, the comparison of Euler characteristics of `a` on
/// `M` and of the remaining elements on `M/a_1M` (and `0 :_M a_1`).
pub fn check_euler_monotonicity(ws: &mut Workspace, a: &SequenceSpec, range: NRange) -> Result<Vec<Verdict>> {
    if a.is_empty() {
        return Err(Error::InvalidInput("empty sequence".into()));
    }
    let (dim, e0q) = ws.dim_and_e0()?;
    let d = dim.ok_or_else(|| Error::InvalidInput("M is zero".into()))? as i64;
    let a1 = a.elems[0].clone();
    let c1 = a.degrees[0];
    let mut wn = ws.quotient(core::slice::from_ref(&a1))?;
    let (dim_n, e0n) = wn.dim_and_e0()?;
    let dn = dim_n.map_or(-1, |x| x as i64);
    if dn != d - 1 {
        return Err(Error::HypothesisFailed(format!("dim M/aM = {} but dim M = {}", dn, d)));
    }
    let window = ws.window();
    let mut zlevels = Vec::new();
    let (z_table, z_fit) = fitted_series(range, window, |n| {
        let x = annihilator_samuel(ws, &a1, c1, n)?;
        zlevels = x.levels.clone();
        Ok(x.value)
    })?;
    let z_fit = require_fit(z_fit, "Samuel function of 0:a", &ws.module)?;
    let dim_z = fit_degree(&z_fit);
    let e0z = if dim_z.is_some() { z_fit.e[0] } else { 0 };
    let mut tlevels = Vec::new();
    let (t_table, t_fit) = fitted_series(range, window, |n| {
        let x = colon_excess(ws, &a1, c1, n)?;
        tlevels = x.levels.clone();
        Ok(x.value)
    })?;
    let t_fit = require_fit(t_fit, "colon excess", &ws.module)?;
    let deg_t = fit_degree(&t_fit);
    let criterion = degree_at_most(deg_t, d - 2);
    let branch2 = dim_z.is_some_and(|x| x as i64 == d - 1);
    let lhs = c1 as i64 * e0q + if branch2 { e0z } else { 0 };
    let equality = lhs == e0n;
    let mut ineq = Verdict::new(ClaimId::MultiplicityInequality)
        .window(range.lo, t_table.last().map(|x| x.0).unwrap_or(range.hi))
        .int("d", d)
        .int("c", c1 as i64)
        .int("e0_q", e0q)
        .int("e0_quotient", e0n)
        .int("dim_annihilator", dim_z.map_or(-1, |x| x as i64))
        .int("e0_annihilator", e0z)
        .int("branch", if branch2 { 2 } else { 1 })
        .int("colon_excess_degree", deg_t.map_or(-1, |x| x as i64))
        .flag("equality", equality)
        .flag("degree_criterion", criterion)
        .table("annihilator_samuel", &z_table)
        .table("colon_excess", &t_table)
        .cert("annihilator", &zlevels)
        .cert("colon excess", &tlevels);
    ineq = ineq
        .require(lhs <= e0n, "c*e0(q;M) (+ e0(q;0:a)) against e0(q;M/aM)", None, lhs, e0n)
        .require(equality == criterion, "equality against degree criterion", None, lhs, e0n);
    let mut out = vec![ineq];
    if a.len() as i64 != d {
        return Ok(out);
    }
    // comparison of Euler characteristics
    let e0a = e0_of_sequence(ws, a)?;
    let rest_idx: Vec<usize> = (1..a.len()).collect();
    let rest = a.select(&rest_idx);
    let c_rest = rest.c_prod as i64;
    let chi_m = e0a.value - a.c_prod as i64 * e0q;
    let e0_rest_n = if rest.is_empty() { e0n } else { e0_of_sequence(&mut wn, &rest)?.value };
    let chi_n = e0_rest_n - c_rest * e0n;
    let mut mono = Verdict::new(ClaimId::EulerMonotonicity)
        .int("chi_m", chi_m)
        .int("chi_quotient", chi_n)
        .int("branch", if branch2 { 2 } else { 1 })
        .flag("degree_criterion", criterion)
        .cert("Koszul homology", &e0a.levels);
    if branch2 {
        match e0_on_annihilator(ws, &a1, &rest.elems, c1)? {
            Some(e0_rest_z) => {
                let chi_z = e0_rest_z - c_rest * e0z;
                let lhs = chi_m + chi_z;
                mono = mono
                    .int("chi_annihilator", chi_z)
                    .flag("applies", true)
                    .flag("equality", lhs == chi_n)
                    .require(lhs >= chi_n, "chi(M) + chi(0:a) against chi(M/aM)", None, lhs, chi_n)
                    .require((lhs == chi_n) == criterion, "equality against degree criterion", None, lhs, chi_n);
            }
            None => mono = mono.flag("applies", false),
        }
    } else {
        mono = mono
            .flag("applies", true)
            .flag("equality", chi_m == chi_n)
            .require(chi_m >= chi_n, "chi(M) against chi(M/aM)", None, chi_m, chi_n)
            .require((chi_m == chi_n) == criterion, "equality against degree criterion", None, chi_m, chi_n);
    }
    out.push(mono);
    Ok(out)
}

/// Compares `deg ℓ((q^n M : a) / (q^{n-c} M + (q^{n+1} M : a))) ≤ dim M - 2`
/// with `a*` being a parameter on `G_M(q)`.
pub fn check_kernel_degree(ws: &mut Workspace, a: &crate::ring::Poly, range: NRange) -> Result<Verdict> {
    let seq = ws.sequence(vec![a.clone()])?;
    let c = seq.degrees[0];
    let (dim, _) = ws.dim_and_e0()?;
    let d = dim.ok_or_else(|| Error::InvalidInput("M is zero".into()))? as i64;
    let (dim_n, _) = ws.quotient(core::slice::from_ref(a))?.dim_and_e0()?;
    let dn = dim_n.map_or(-1, |x| x as i64);
    if dn != d - 1 {
        return Err(Error::HypothesisFailed(format!("dim M/aM = {} but dim M = {}", dn, d)));
    }
    let q = ws.q.clone();
    let window = ws.window();
    let mut levels = Vec::new();
    let (r_table, r_fit) = fitted_series(range, window, |n| {
        let e = &mut ws.module;
        let s = e.saturation(q.ideal(), n + 1)?;
        let pa = e.prepare(a);
        let x = exact_length(e, s, "kernel piece", |e, k| {
            let qn = e.power(q.ideal(), n, k)?;
            let qn1 = e.power(q.ideal(), n + 1, k)?;
            let col = e.colon(&qn, &pa);
            let next = e.colon(&qn1, &pa);
            let low = e.power(q.ideal(), n - c as i64, k)?.sum(&next);
            Ok(quotient_dim(&col, &low)? as u64)
        })?;
        levels = x.levels.clone();
        Ok(x.value)
    })?;
    let r_fit = require_fit(r_fit, "kernel pieces", &ws.module)?;
    let deg_r = fit_degree(&r_fit);
    let (g_table, g_fit) = fitted_series(range, window, |n| Ok(form_quotient_piece(&mut ws.module, &seq, &q, n)?.value))?;
    let g_deg = eventual_degree(&g_table, window)
        .or_else(|| g_fit.as_ref().map(fit_degree))
        .ok_or_else(|| Error::NotStabilized {
            what: "form quotient pieces".into(),
            n_max: ws.module.policy().n_max,
        })?;
    let parameter = degree_at_most(g_deg, d - 2);
    let small = degree_at_most(deg_r, d - 2);
    let v = Verdict::new(ClaimId::KernelDegree)
        .window(range.lo, r_table.last().map(|x| x.0).unwrap_or(range.hi))
        .int("d", d)
        .int("c", c as i64)
        .int("kernel_degree", deg_r.map_or(-1, |x| x as i64))
        .int("quotient_degree", g_deg.map_or(-1, |x| x as i64))
        .flag("initial_form_parameter", parameter)
        .flag("kernel_degree_small", small)
        .table("kernel", &r_table)
        .table("form_quotient", &g_table)
        .cert("kernel pieces", &levels);
    Ok(v.require(small == parameter, "kernel degree criterion against parameter test", None, small as i64, parameter as i64))
}
