use alloc::vec::Vec;

use super::{ClaimId, NRange, Verdict, Workspace};
use crate::artinian::Stabilized;
use crate::complexes::{graded_koszul_homology, k_homology, l_homology};
use crate::error::Result;
use crate::filtration::{form_module_piece, form_quotient_piece, SequenceSpec};
use crate::oracle::{homogeneous_ideal_piece_dim, monomials_of_degree, regseq_first_mismatch};

/// The three equivalent conditions for `a*` to be a `G_M(q)`-regular
/// sequence, evaluated on one window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityEvidence {
    /// Hilbert-series test on the form module.
    pub oracle_regular: bool,
    pub series_mismatch: Option<usize>,
    /// `ℓ(L_1(n)) = 0` on the window.
    pub l1_zero: bool,
    /// `ℓ(L_i(n)) = 0` for every `i > 0` on the window.
    pub all_l_zero: bool,
    pub first_l1_nonzero: Option<(i64, u64)>,
    pub first_li_nonzero: Option<(i64, usize, u64)>,
    pub module_dims: Vec<u64>,
    pub quotient_dims: Vec<u64>,
    /// Disagreement between the form-module quotient dims and the
    /// polynomial-ring count (only computed for `M = A`, `q = m`).
    pub homogeneous_mismatch: Option<usize>,
    pub l1_table: Vec<(i64, u64)>,
    pub levels: Vec<u32>,
    pub window: (i64, i64),
}

impl RegularityEvidence {
    pub fn agree(&self) -> bool {
        self.oracle_regular == self.l1_zero && self.l1_zero == self.all_l_zero && self.homogeneous_mismatch.is_none()
    }
}

fn evidence(ws: &mut Workspace, a: &SequenceSpec, lo: i64, hi: i64) -> Result<RegularityEvidence> {
    let mut module_dims = Vec::new();
    let mut quotient_dims = Vec::new();
    let mut levels = Vec::new();
    // L_1(n) sees the form module in degrees below n
    for e in 0..hi {
        let g = form_module_piece(&mut ws.module, &ws.q, e)?;
        let qd = form_quotient_piece(&mut ws.module, a, &ws.q, e)?;
        if e == hi - 1 {
            levels = qd.levels.clone();
        }
        module_dims.push(g.value);
        quotient_dims.push(qd.value);
    }
    let betas = a.degrees.clone();
    let series_mismatch = regseq_first_mismatch(&betas, &module_dims, &quotient_dims);
    let mut homogeneous_mismatch = None;
    if ws.q.is_maximal() && ws.module.module().relations.is_empty() && a.forms.iter().all(|f| f.form.is_some()) {
        let forms: Vec<_> = a.forms.iter().map(|f| f.form.clone().expect("form")).collect();
        let nv = ws.ring().nvars();
        let field = ws.ring().field();
        for (e, qd) in quotient_dims.iter().enumerate() {
            let total = monomials_of_degree(nv, e as u32).len();
            let inside = homogeneous_ideal_piece_dim(nv, field, &forms, e as u32);
            if (total - inside) as u64 != *qd {
                homogeneous_mismatch = Some(e);
                break;
            }
        }
    }
    let mut first_l1_nonzero = None;
    let mut first_li_nonzero = None;
    let mut l1_table = Vec::new();
    for n in lo..=hi {
        let h = l_homology(&mut ws.module, a, &ws.q, n)?;
        let l1 = h.value.get(1).copied().unwrap_or(0);
        l1_table.push((n, l1));
        if l1 > 0 && first_l1_nonzero.is_none() {
            first_l1_nonzero = Some((n, l1));
        }
        if first_li_nonzero.is_none() {
            if let Some((i, v)) = h.value.iter().enumerate().skip(1).find(|(_, v)| **v > 0) {
                first_li_nonzero = Some((n, i, *v));
            }
        }
    }
    Ok(RegularityEvidence {
        oracle_regular: series_mismatch.is_none(),
        series_mismatch,
        l1_zero: first_l1_nonzero.is_none(),
        all_l_zero: first_li_nonzero.is_none(),
        first_l1_nonzero,
        first_li_nonzero,
        module_dims,
        quotient_dims,
        homogeneous_mismatch,
        l1_table,
        levels,
        window: (lo, hi),
    })
}

/// Evaluates the three conditions on the range, extending it once to the
/// cap when they disagree.
pub fn regularity_evidence(ws: &mut Workspace, a: &SequenceSpec, range: NRange) -> Result<RegularityEvidence> {
    let ev = evidence(ws, a, range.lo, range.hi)?;
    if ev.agree() || range.cap <= range.hi {
        return Ok(ev);
    }
    evidence(ws, a, range.lo, range.cap)
}

/// Whether the Hilbert-series test, `L_1 ≡ 0` and `L_i ≡ 0 (i > 0)` agree.
pub fn check_regseq_form(ws: &mut Workspace, a: &SequenceSpec, range: NRange) -> Result<Verdict> {
    let ev = regularity_evidence(ws, a, range)?;
    let mut v = Verdict::new(ClaimId::FormRegularity)
        .window(ev.window.0, ev.window.1)
        .flag("regular", ev.oracle_regular)
        .flag("l1_vanishes", ev.l1_zero)
        .flag("all_l_vanish", ev.all_l_zero)
        .table("l1", &ev.l1_table)
        .cert("form module pieces", &ev.levels);
    if let Some(m) = ev.series_mismatch {
        v = v.int("series_mismatch_degree", m as i64);
    }
    if let Some((n, l)) = ev.first_l1_nonzero {
        v = v.int("witness_n", n).int("witness_l1", l as i64);
    }
    if let Some(e) = ev.homogeneous_mismatch {
        v = v.fail("quotient dims against polynomial count", Some(e as i64), ev.quotient_dims[e] as i64, -1);
    }
    if ev.oracle_regular != ev.l1_zero {
        let (n, l) = ev.first_l1_nonzero.unwrap_or((ev.window.1, 0));
        v = v.fail("series test against L1 vanishing", Some(n), ev.oracle_regular as i64, l as i64);
    }
    if ev.l1_zero != ev.all_l_zero {
        let (n, i, l) = ev.first_li_nonzero.unwrap_or((ev.window.1, 0, 0));
        v = v.int("witness_index", i as i64).fail("L1 vanishing against all L_i vanishing", Some(n), 0, l as i64);
    }
    Ok(v)
}

/// Form regularity implies `H_i(K(a,q,M;n)) = 0` for `i > 0`.
pub fn check_rees_regseq(ws: &mut Workspace, a: &SequenceSpec, range: NRange) -> Result<Verdict> {
    let ev = regularity_evidence(ws, a, range)?;
    let mut v = Verdict::new(ClaimId::ReesRegularity)
        .window(range.lo, range.hi)
        .flag("form_regular", ev.oracle_regular);
    if !ev.oracle_regular {
        return Ok(v.flag("applies", false));
    }
    v = v.flag("applies", true);
    let mut table = Vec::new();
    for n in range.lo..=range.hi {
        let h = k_homology(&mut ws.module, a, &ws.q, n, false)?;
        let mut total = 0i64;
        for (i, s) in h.iter().enumerate().skip(1) {
            match s {
                Stabilized::Stable(c) => {
                    if n == range.hi && i == 1 {
                        v = v.cert("K homology", &c.levels);
                    }
                    total += c.value as i64;
                    v = v.require(c.value == 0, "H_i of K", Some(n), c.value as i64, 0);
                }
                Stabilized::NotStabilized { .. } => {
                    v = v.fail("H_i of K not stabilized", Some(n), -1, 0);
                }
            }
        }
        table.push((n, total as u64));
    }
    Ok(v.table("higher_k_homology", &table))
}

/// `H_i(a*; G_M(q))_m = 0` for `i > d - t` and `m` in the window.
pub fn check_graded_koszul_vanishing(ws: &mut Workspace, a: &SequenceSpec, t: usize, lo: i64, hi: i64) -> Result<Verdict> {
    let d = a.len();
    let mut v = Verdict::new(ClaimId::GradedKoszulVanishing)
        .window(lo, hi)
        .int("d", d as i64)
        .int("t", t as i64);
    let mut table = Vec::new();
    for m in lo..=hi {
        let h = graded_koszul_homology(&mut ws.module, a, &ws.q, m)?;
        if m == hi {
            v = v.cert("graded Koszul homology", &h.levels);
        }
        let high: u64 = h.value.iter().skip(d - t + 1).sum();
        table.push((m, h.value.get(d - t).copied().unwrap_or(0)));
        v = v.require(high == 0, "graded Koszul homology above d - t", Some(m), high as i64, 0);
    }
    Ok(v.table("h_top", &table))
}
