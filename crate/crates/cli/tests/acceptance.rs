//! Acceptance suite: one line per criterion, non-zero exit when any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use hsmult_core::artinian::{Ideal, LocalRingCtx, ModulePresentation, TruncationPolicy};
use hsmult_core::filtration::{form_module_piece, length_mod_power};
use hsmult_core::oracle::{
    brute_colength_below, homogeneous_colon_dim, homogeneous_ideal_piece_dim, monomial_colength, Colength,
    MonomialIdeal,
};
use hsmult_core::ring::{FieldKind, Monomial, Poly, PolyRing};
use hsmult_core::theorems::*;
use hsmult_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ring(nvars: usize) -> PolyRing {
    let names = ["x", "y", "z"][..nvars].iter().map(|s| s.to_string()).collect();
    PolyRing::new(names, FieldKind::Rationals).unwrap()
}

struct Case {
    nvars: usize,
    rels: &'static [&'static str],
    q: Option<&'static [&'static str]>,
    a: &'static [&'static str],
}

impl Case {
    const fn plane(a: &'static [&'static str]) -> Self {
        Case {
            nvars: 2,
            rels: &[],
            q: None,
            a,
        }
    }

    fn label(&self) -> String {
        let q = self.q.map(|g| format!(" q=({})", g.join(","))).unwrap_or_default();
        let m = if self.rels.is_empty() { String::new() } else { format!(" M=A/({})", self.rels.join(",")) };
        format!("a=({}){}{}", self.a.join(","), q, m)
    }
}

fn workspace(c: &Case, extra_n_max: u32) -> (Workspace, PolyRing, Vec<Poly>) {
    let r = ring(c.nvars);
    let parse = |s: &[&str]| s.iter().map(|x| r.parse(x).unwrap()).collect::<Vec<Poly>>();
    let rels = parse(c.rels);
    let a = parse(c.a);
    let q = c.q.map(|g| Ideal::new(parse(g)));
    let deg = rels.iter().chain(&a).filter_map(|p| p.degree()).max().unwrap_or(1);
    let base = TruncationPolicy::default_for(deg);
    let policy = base.with_n_max(base.n_max + extra_n_max).unwrap();
    let ctx = LocalRingCtx::new(r.clone(), policy).unwrap();
    let ws = Workspace::new(ctx, ModulePresentation::new(rels), q).unwrap();
    (ws, r, a)
}

const BEZOUT: [(&str, &str, u64, u64, u64); 4] = [
    ("x", "y", 1, 1, 0),
    ("y - x^2", "y", 2, 1, 1),
    ("y^2 - x^3", "y^2 + x^3", 6, 4, 2),
    ("y^2 - x^3", "y", 3, 2, 1),
];

/// `(e0, c*d, t)` from the dense-elimination and polynomial-ring oracles.
fn bezout_oracle(f: &Poly, g: &Poly) -> Result<(u64, u64, u64), String> {
    let field = f.field();
    // l(A/(I + m^L)) is constant from the first L where it stops growing
    let gens = [f.clone(), g.clone()];
    let mut prev = brute_colength_below(2, field, &gens, 1);
    let mut level = 2;
    let e0 = loop {
        let cur = brute_colength_below(2, field, &gens, level);
        if cur == prev {
            break cur;
        }
        ensure(level < 40, || "colength oracle did not settle".into())?;
        prev = cur;
        level += 1;
    };
    let (ff, gf) = (f.lowest_form().unwrap(), g.lowest_form().unwrap());
    let (c, d) = (ff.degree().unwrap(), gf.degree().unwrap());
    let t = homogeneous_colon_dim(2, field, &[ff], &gf, 12) as u64;
    Ok((e0, (c * d) as u64, t))
}

fn random_poly(rng: &mut ChaCha8Rng, r: &PolyRing, ord: u32, top: u32) -> Poly {
    loop {
        let mut p = r.zero();
        for deg in ord..=top {
            for i in 0..=deg {
                if deg > ord && rng.gen_bool(0.6) {
                    continue;
                }
                let c: i64 = rng.gen_range(-3..=3);
                if c == 0 {
                    continue;
                }
                let m = Poly::monomial(Monomial::new(vec![i, deg - i]), FieldKind::Rationals.from_i64(c));
                p = p.add(&m);
            }
        }
        if p.ord().finite() == Some(ord) {
            return p;
        }
    }
}

fn criterion_bezout() -> Outcome {
    let r = ring(2);
    for (f, g, e0, cd, t) in BEZOUT {
        let (fp, gp) = (r.parse(f).unwrap(), r.parse(g).unwrap());
        let oracle = bezout_oracle(&fp, &gp)?;
        ensure(oracle == (e0, cd, t), || format!("oracle disagrees with corpus on ({}, {}): {:?}", f, g, oracle))?;
        let (mut ws, _, _) = workspace(&Case::plane(&[]), 0);
        let (rep, v) = bezout_plane(&mut ws, &fp, &gp, NRange::new(0, 8)).map_err(|e| e.to_string())?;
        let got = (rep.e0, (rep.c * rep.d_deg) as u64, rep.t);
        ensure(v.holds && got == oracle && rep.slack == 0, || format!("({}, {}): {:?} slack {}", f, g, got, rep.slack))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_edb2);
    let mut valid = 0;
    let mut rejected = 0;
    let mut min_slack = i64::MAX;
    while valid < 25 {
        ensure(rejected < 200, || "too many random pairs without finite intersection".into())?;
        let (of, og) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let f = random_poly(&mut rng, &r, of, of + 2);
        let g = random_poly(&mut rng, &r, og, og + 2);
        let (mut ws, _, _) = workspace(&Case::plane(&[]), 0);
        match bezout_plane(&mut ws, &f, &g, NRange::new(0, 8)) {
            Ok((rep, v)) => {
                let (e0, cd, t) = bezout_oracle(&f, &g)?;
                ensure(v.holds && rep.slack >= 0, || format!("({}, {}): {:?}", r.print(&f), r.print(&g), v.counterexample))?;
                ensure(rep.e0 == e0 && (rep.c * rep.d_deg) as u64 == cd && rep.t == t, || {
                    format!("({}, {}) disagrees with oracle", r.print(&f), r.print(&g))
                })?;
                min_slack = min_slack.min(rep.slack);
                valid += 1;
            }
            Err(Error::NotSystemOfParameters(_)) => rejected += 1,
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(format!("corpus exact, 25 random pairs with slack >= 0 (min {}), {} rejected", min_slack, rejected))
}

fn criterion_regularity() -> Outcome {
    let regular = [
        Case::plane(&["x", "y"]),
        Case::plane(&["x^2", "y^3"]),
        Case { nvars: 2, rels: &["y^2 - x^3"], q: None, a: &["x"] },
        Case { nvars: 2, rels: &["x*y"], q: None, a: &["x + y"] },
        Case { nvars: 2, rels: &[], q: Some(&["x^2", "y"]), a: &["x^2", "y"] },
        Case { nvars: 3, rels: &[], q: None, a: &["x", "y + z^2"] },
    ];
    let irregular = [
        Case::plane(&["y^2 - x^3", "y^2 + x^3"]),
        Case { nvars: 2, rels: &["x^2"], q: None, a: &["x + y^3"] },
        Case::plane(&["x + y^2", "x + y^3"]),
        Case { nvars: 2, rels: &["y^2 - x^3"], q: None, a: &["y"] },
        Case::plane(&["x^2", "x*y"]),
    ];
    for (cases, expect) in [(&regular[..], true), (&irregular[..], false)] {
        for c in cases {
            let (mut ws, _, a) = workspace(c, 0);
            let seq = ws.sequence(a).unwrap();
            let v = check_regseq_form(&mut ws, &seq, NRange::new(1, 7)).map_err(|e| e.to_string())?;
            ensure(v.holds, || format!("{}: conditions disagree {:?}", c.label(), v.counterexample))?;
            ensure(v.get_bool("regular") == Some(expect), || format!("{}: expected regular = {}", c.label(), expect))?;
        }
    }
    Ok(format!("{} regular and {} non-regular inputs agree", regular.len(), irregular.len()))
}

fn multiplicity_corpus() -> Vec<Case> {
    let mut v: Vec<Case> = vec![
        Case::plane(&["x", "y"]),
        Case::plane(&["y - x^2", "y"]),
        Case::plane(&["y^2 - x^3", "y^2 + x^3"]),
        Case::plane(&["y^2 - x^3", "y"]),
    ];
    v.extend([
        Case { nvars: 2, rels: &[], q: Some(&["x^2", "y"]), a: &["x^2", "y"] },
        Case { nvars: 2, rels: &[], q: Some(&["x^2", "y"]), a: &["x^3", "y^2"] },
        Case { nvars: 2, rels: &[], q: Some(&["x", "y^2"]), a: &["x + y^2", "y^3"] },
        Case { nvars: 2, rels: &[], q: Some(&["x^2", "x*y", "y^2"]), a: &["x^2", "y^2"] },
        Case { nvars: 2, rels: &[], q: Some(&["x^3", "y"]), a: &["x^3 - y^2", "y + x^2"] },
        Case { nvars: 2, rels: &["y^2 - x^3"], q: None, a: &["x"] },
        Case { nvars: 2, rels: &["x*y"], q: None, a: &["x + y"] },
        Case { nvars: 2, rels: &["x^2*y", "x^3"], q: None, a: &["y"] },
    ]);
    v
}

fn criterion_multiplicity() -> Outcome {
    let (mut q_other, mut nontrivial) = (0, 0);
    for c in multiplicity_corpus() {
        let (mut ws, r, a) = workspace(&c, 0);
        let seq = ws.sequence(a.clone()).unwrap();
        let v = check_multiplicity_identity(&mut ws, &seq, None, NRange::new(1, 7)).map_err(|e| format!("{}: {}", c.label(), e))?;
        ensure(v.holds, || format!("{}: {:?}", c.label(), v.counterexample))?;
        let rels: Vec<Poly> = c.rels.iter().map(|s| r.parse(s).unwrap()).collect();
        let gens: Vec<Poly> = rels.into_iter().chain(a).collect();
        let oracle = brute_colength_below(c.nvars, FieldKind::Rationals, &gens, 14);
        ensure(v.get_int("length_m_mod_a") == Some(oracle as i64), || format!("{}: colength oracle {}", c.label(), oracle))?;
        q_other += c.q.is_some() as usize;
        nontrivial += !c.rels.is_empty() as usize;
    }
    ensure(q_other >= 5 && nontrivial >= 2, || "corpus too small".into())?;
    Ok(format!("identity exact on {} inputs ({} with q != m, {} with M = A/J)", multiplicity_corpus().len(), q_other, nontrivial))
}

fn criterion_vanishing() -> Outcome {
    let d2: [(Case, &[&str]); 6] = [
        (Case::plane(&["y^2 - x^3", "y^2 + x^3"]), &["y^2 - x^3"]),
        (Case::plane(&["x^2", "y^3"]), &["x^2"]),
        (Case::plane(&["x + y^2", "y"]), &["x + y^2"]),
        (Case::plane(&["x^2", "y^2"]), &["x^2 + y^2"]),
        (Case::plane(&["y^2 - x^3", "y"]), &["y"]),
        (Case { nvars: 2, rels: &[], q: Some(&["x^2", "y"]), a: &["x^2", "y"] }, &["y"]),
    ];
    let d3: [(Case, &[&str]); 2] = [
        (Case { nvars: 3, rels: &[], q: None, a: &["x", "y", "z"] }, &["x", "y"]),
        (Case { nvars: 3, rels: &[], q: None, a: &["x^2", "y^2", "z"] }, &["x^2", "z"]),
    ];
    let mut checked = 0;
    for (c, b) in d2.iter().chain(d3.iter()) {
        let (mut ws, r, a) = workspace(c, 0);
        let seq = ws.sequence(a).unwrap();
        let b: Vec<Poly> = b.iter().map(|s| r.parse(s).unwrap()).collect();
        let hi = if c.nvars == 3 { 4 } else { 7 };
        let v = check_vanishing_formula(&mut ws, &seq, &b, NRange::new(1, hi)).map_err(|e| format!("{}: {}", c.label(), e))?;
        ensure(v.holds, || format!("{}: {:?}", c.label(), v.counterexample))?;
        checked += hi as usize;
    }
    Ok(format!("{} inputs with d = 2, t = 1 and {} with d = 3, t = 2; {} values of n compared", d2.len(), d3.len(), checked))
}

fn criterion_euler() -> Outcome {
    let mut n = 0;
    for c in multiplicity_corpus() {
        let (mut ws, _, a) = workspace(&c, 0);
        let seq = ws.sequence(a).unwrap();
        let v = check_chi_bounds(&mut ws, &seq, NRange::new(1, 7)).map_err(|e| format!("{}: {}", c.label(), e))?;
        ensure(v.holds, || format!("{}: {:?}", c.label(), v.counterexample))?;
        n += 1;
    }
    let (mut ws, _, a) = workspace(&Case::plane(&["y^2 - x^3", "y^2 + x^3"]), 0);
    let seq = ws.sequence(a).unwrap();
    let v = check_chi_bounds(&mut ws, &seq, NRange::new(1, 7)).map_err(|e| e.to_string())?;
    ensure(
        v.get_int("chi") == Some(2) && v.get_bool("equality") == Some(true) && v.get_bool("cohen_macaulay") == Some(true),
        || format!("cusp pair: {:?}", v.witness),
    )?;
    let (mut ws, _, a) = workspace(&Case { nvars: 2, rels: &["x^2*y", "x^3"], q: None, a: &["y"] }, 0);
    let seq = ws.sequence(a).unwrap();
    let v = check_chi_bounds(&mut ws, &seq, NRange::new(1, 7)).map_err(|e| e.to_string())?;
    let (chi, l1) = (v.get_int("chi").unwrap_or(0), v.get_int("l1").unwrap_or(0));
    ensure(v.holds && chi < l1 && v.get_bool("cohen_macaulay") == Some(false), || format!("non-CM: {:?}", v.witness))?;
    Ok(format!("limits match on {} inputs; cusp pair chi = 2 with equality; non-CM chi = {} < {}", n, chi, l1))
}

fn criterion_lift() -> Outcome {
    let r = ring(2);
    let seqs: [&[&str]; 3] = [&["x^2", "y^3"], &["x + y^2", "y^2"], &["x^2 - y^3", "x*y"]];
    let mut rng = ChaCha8Rng::seed_from_u64(0x11f7);
    let (mut solvable, mut unsolvable) = (0, 0);
    let mut tries = 0;
    while solvable < 10 || unsolvable < 5 {
        tries += 1;
        ensure(tries < 400, || format!("only {} solvable / {} unsolvable instances", solvable, unsolvable))?;
        let a_src = seqs[rng.gen_range(0..seqs.len())];
        let (mut ws, _, a) = workspace(&Case::plane(a_src), 0);
        let seq = ws.sequence(a.clone()).unwrap();
        let b = if rng.gen_bool(0.6) {
            let mut b = random_poly(&mut rng, &r, 5, 6);
            for aj in &a {
                let o = rng.gen_range(0..=2);
                let rj = random_poly(&mut rng, &r, o, 3);
                b = b.add(&aj.mul(&rj));
            }
            b
        } else {
            let o = rng.gen_range(1..=3);
            random_poly(&mut rng, &r, o, o + 2)
        };
        if b.is_zero() {
            continue;
        }
        let forms: Vec<Poly> = a.iter().map(|p| p.lowest_form().unwrap()).collect();
        let bf = b.lowest_form().unwrap();
        let beta = bf.degree().unwrap();
        let mut with_b = forms.clone();
        with_b.push(bf);
        let in_forms = homogeneous_ideal_piece_dim(2, FieldKind::Rationals, &with_b, beta)
            == homogeneous_ideal_piece_dim(2, FieldKind::Rationals, &forms, beta);
        match lift_to_sequence(&mut ws, std::slice::from_ref(&b), &seq) {
            Ok(l) => {
                ensure(in_forms, || format!("false lift for {}", r.print(&b)))?;
                ensure(l[0].verified(), || format!("postconditions fail for {}", r.print(&b)))?;
                solvable += 1;
            }
            Err(Error::Unsolvable(_)) => {
                ensure(!in_forms, || format!("solvable instance {} reported unsolvable", r.print(&b)))?;
                unsolvable += 1;
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(format!("{} solvable lifts verified, {} unsolvable instances reported", solvable, unsolvable))
}

/// Verdicts of the corpus checks at the given extra truncation budget.
fn soundness_run(extra: u32) -> Result<Vec<Verdict>, String> {
    let mut out = Vec::new();
    let r = ring(2);
    for (f, g, ..) in BEZOUT {
        let (mut ws, _, _) = workspace(&Case::plane(&[]), extra);
        let (_, v) = bezout_plane(&mut ws, &r.parse(f).unwrap(), &r.parse(g).unwrap(), NRange::new(0, 8)).map_err(|e| e.to_string())?;
        out.push(v);
    }
    for c in multiplicity_corpus() {
        let (mut ws, _, a) = workspace(&c, extra);
        let seq = ws.sequence(a).unwrap();
        out.push(check_multiplicity_identity(&mut ws, &seq, None, NRange::new(1, 7)).map_err(|e| e.to_string())?);
        out.push(check_chi_bounds(&mut ws, &seq, NRange::new(1, 7)).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

fn criterion_truncation() -> Outcome {
    let base = soundness_run(0)?;
    let mut certs = 0;
    for v in &base {
        for c in &v.certificates {
            ensure(c.levels.len() >= 3, || format!("{}: certificate `{}` has levels {:?}", v.claim, c.what, c.levels))?;
            certs += 1;
        }
    }
    let wider = soundness_run(8)?;
    for (a, b) in base.iter().zip(&wider) {
        ensure(a.holds == b.holds && a.witness == b.witness, || format!("{} changed with a larger truncation budget", a.claim))?;
    }
    Ok(format!("{} verdicts, {} certificates of >= 3 levels, unchanged with N_max + 8", base.len(), certs))
}

fn criterion_oracle() -> Outcome {
    let ideals: [(usize, &[&[u32]]); 5] = [
        (2, &[]),
        (2, &[&[2, 1], &[3, 0]]),
        (2, &[&[1, 1]]),
        (2, &[&[0, 3], &[2, 2]]),
        (3, &[&[1, 1, 0], &[0, 0, 2]]),
    ];
    let qs: [(usize, &[&[u32]]); 5] = [
        (2, &[&[1, 0], &[0, 1]]),
        (2, &[&[2, 0], &[0, 1]]),
        (2, &[&[2, 0], &[1, 1], &[0, 2]]),
        (3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
        (3, &[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
    ];
    let mut assertions = 0;
    for (nv, j) in ideals {
        let r = ring(nv);
        let jm = MonomialIdeal::new(nv, j.iter().map(|e| Monomial::new(e.to_vec())).collect());
        let rels: Vec<Poly> = jm.gens().iter().map(|m| Poly::monomial(m.clone(), FieldKind::Rationals.one())).collect();
        for (qv, qg) in qs.iter().filter(|(qv, _)| *qv == nv) {
            let qm = MonomialIdeal::new(*qv, qg.iter().map(|e| Monomial::new(e.to_vec())).collect());
            let qp: Vec<Poly> = qm.gens().iter().map(|m| Poly::monomial(m.clone(), FieldKind::Rationals.one())).collect();
            let ctx = LocalRingCtx::new(r.clone(), TruncationPolicy::default_for(4)).unwrap();
            let q = if qm.gens().iter().all(|m| m.degree() == 1) { None } else { Some(Ideal::new(qp)) };
            let mut ws = Workspace::new(ctx, ModulePresentation::new(rels.clone()), q).unwrap();
            let colen = |n: u32| match monomial_colength(&jm.sum(&qm.power(n)), 1 << 20) {
                Some(Colength::Finite(x)) => x,
                other => panic!("oracle colength {:?}", other),
            };
            for n in 1..=4u32 {
                let len = length_mod_power(&mut ws.module, &ws.q, n as i64).map_err(|e| e.to_string())?;
                ensure(len.value == colen(n), || format!("length of M/q^{}M: {} vs {}", n, len.value, colen(n)))?;
                let piece = form_module_piece(&mut ws.module, &ws.q, n as i64).map_err(|e| e.to_string())?;
                let expect = colen(n + 1) - colen(n);
                ensure(piece.value == expect, || format!("form piece {}: {} vs {}", n, piece.value, expect))?;
                assertions += 2;
            }
            for m in qm.gens() {
                let p = Poly::monomial(m.clone(), FieldKind::Rationals.one());
                let pure: Vec<Poly> = (0..nv).map(|i| r.var(i).pow(3)).collect();
                let mut gens = pure.clone();
                gens.push(p);
                let got = ws.colength(&gens).map_err(|e| e.to_string())?.value;
                let mi = MonomialIdeal::new(nv, gens.iter().map(|g| g.terms().next().unwrap().0.clone()).collect());
                let expect = match monomial_colength(&jm.sum(&mi), 1 << 20) {
                    Some(Colength::Finite(x)) => x,
                    other => return Err(format!("oracle colength {:?}", other)),
                };
                ensure(got == expect, || format!("colength {} vs {}", got, expect))?;
                assertions += 1;
            }
        }
    }
    ensure(assertions >= 100, || format!("only {} assertions", assertions))?;
    Ok(format!("{} assertions against the monomial oracle", assertions))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("plane intersection bound", criterion_bezout),
        ("form regularity equivalence", criterion_regularity),
        ("multiplicity identity", criterion_multiplicity),
        ("vanishing formula", criterion_vanishing),
        ("Euler characteristic", criterion_euler),
        ("constructive lift", criterion_lift),
        ("truncation soundness", criterion_truncation),
        ("oracle equivalence", criterion_oracle),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let r = r.and_then(|s| if secs < 60.0 { Ok(s) } else { Err(format!("took {:.1}s", secs)) });
        match r {
            Ok(detail) => println!("criterion {} {}: PASS ({}; {:.1}s)", i + 1, name, detail, secs),
            Err(why) => {
                failed += 1;
                println!("criterion {} {}: FAIL ({}; {:.1}s)", i + 1, name, why, secs);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
