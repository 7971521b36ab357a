use alloc::format;
use alloc::vec::Vec;

use super::{ClaimId, Verdict, Workspace};
use crate::error::{Error, Result};
use crate::filtration::{initial_degree, q_power_in_m, IdealOfDefinition, SequenceSpec};
use crate::linalg::Echelon;
use crate::oracle::{brute_membership, ideal_power_gens};
use crate::ring::Poly;

/// `b' = Σ a_j r_j` with `r_j ∈ q^{β - c_j}` and `b - b' ∈ q^{β+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftResult {
    pub b: Poly,
    pub beta: u32,
    pub b_prime: Poly,
    pub r: Vec<Poly>,
    pub level: u32,
    /// `b - b' ∈ q^{β+1}`, checked by dense elimination.
    pub difference_in_power: bool,
    /// `r_j ∈ q^{β - c_j}` for every `j`.
    pub coefficients_in_powers: bool,
    /// `b' ∈ q^β ∖ q^{β+1}`.
    pub initial_degree_kept: bool,
}

impl LiftResult {
    pub fn verified(&self) -> bool {
        self.difference_in_power && self.coefficients_in_powers && self.initial_degree_kept
    }
}

fn in_power_brute(p: &Poly, q: &IdealOfDefinition, k: i64, level: u32) -> bool {
    let gens = ideal_power_gens(q.ideal().gens(), k.max(0) as u32);
    brute_membership(p, &gens, level)
}

/// Lifts each `b_k` to an element of `(a)` with the same initial form,
/// provided `b_k* ∈ a* G_A(q)`. Works in `A`.
pub fn lift_to_sequence(ws: &mut Workspace, bs: &[Poly], a: &SequenceSpec) -> Result<Vec<LiftResult>> {
    let mut out = Vec::with_capacity(bs.len());
    for (idx, b) in bs.iter().enumerate() {
        let beta = initial_degree(&mut ws.free, ws.q.ideal(), b)?.c;
        out.push(lift_one(ws, b, beta, a).map_err(|e| match e {
            Error::Unsolvable(msg) => Error::Unsolvable(format!("element {}: {}", idx + 1, msg)),
            other => other,
        })?);
    }
    Ok(out)
}

fn lift_one(ws: &mut Workspace, b: &Poly, beta: u32, a: &SequenceSpec) -> Result<LiftResult> {
    let engine = &mut ws.free;
    let q = ws.q.clone();
    let top = beta as i64 + 1;
    let s = engine.saturation(q.ideal(), top)?;
    let level = s.max(engine.policy().n_start).max(b.degree().unwrap_or(0) + 1);
    engine.ensure_level(level)?;
    let p = engine.prefix(level);
    let d = a.len();
    let field = engine.field();
    // rows [a_j v | v in block j] and [u | 0] for u in q^{β+1}
    let mut ech = Echelon::new(p * (d + 1), field);
    for (j, aj) in a.elems.iter().enumerate() {
        let pa = engine.prepare(aj);
        let src = q_power_in_m(engine, &q, beta as i64 - a.degrees[j] as i64, level)?;
        for v in src.basis() {
            let left = engine.mul(&pa, v, level);
            ech.insert(&left.concat(p as u32, &v.shift((j * p) as u32)));
        }
    }
    for u in q_power_in_m(engine, &q, top, level)?.basis() {
        ech.insert(u);
    }
    let bv = engine.reduce_poly(b, level)?;
    let rem = ech.reduce(&bv);
    if rem.leading().is_some_and(|i| (i as usize) < p) {
        return Err(Error::Unsolvable(format!(
            "initial form of degree {} is not in the ideal of initial forms",
            beta
        )));
    }
    let r: Vec<Poly> = (0..d)
        .map(|j| {
            let block = rem.slice((p + j * p) as u32, (p + (j + 1) * p) as u32).neg();
            engine.to_poly(&block)
        })
        .collect();
    let mut b_prime = Poly::zero(b.nvars(), b.field());
    for (aj, rj) in a.elems.iter().zip(&r) {
        b_prime = b_prime.add(&aj.mul(rj));
    }
    // postconditions through a separate code path; the level is past the
    // point where m^level ⊆ q^{β+1}, so membership modulo m^level is exact
    let difference_in_power = in_power_brute(&b.sub(&b_prime), &q, top, level);
    let coefficients_in_powers = r
        .iter()
        .zip(&a.degrees)
        .all(|(rj, cj)| in_power_brute(rj, &q, beta as i64 - *cj as i64, level));
    let initial_degree_kept =
        in_power_brute(&b_prime, &q, beta as i64, level) && !in_power_brute(&b_prime, &q, top, level);
    Ok(LiftResult {
        b: b.clone(),
        beta,
        b_prime,
        r,
        level,
        difference_in_power,
        coefficients_in_powers,
        initial_degree_kept,
    })
}

/// Runs the lift and reports its machine-checked conclusions. An
/// unsolvable system is a valid outcome, reported in the witness.
pub fn check_lift(ws: &mut Workspace, bs: &[Poly], a: &SequenceSpec) -> Result<Verdict> {
    let mut v = Verdict::new(ClaimId::ConstructiveLift);
    match lift_to_sequence(ws, bs, a) {
        Ok(lifts) => {
            v = v.flag("solvable", true);
            for (k, l) in lifts.iter().enumerate() {
                let names = ws.ring().vars().to_vec();
                v = v
                    .text(&format!("b_prime_{}", k + 1), l.b_prime.to_string_with(&names))
                    .int(&format!("beta_{}", k + 1), l.beta as i64)
                    .cert(&format!("lift {}", k + 1), &[l.level]);
                v = v
                    .require(l.difference_in_power, "b - b' in q^(beta+1)", None, 0, 1)
                    .require(l.coefficients_in_powers, "r_j in q^(beta-c_j)", None, 0, 1)
                    .require(l.initial_degree_kept, "initial degree of b'", None, 0, 1);
            }
            Ok(v)
        }
        Err(Error::Unsolvable(msg)) => Ok(v.flag("solvable", false).text("reason", msg)),
        Err(e) => Err(e),
    }
}
