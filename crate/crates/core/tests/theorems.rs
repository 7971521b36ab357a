use hsmult_core::artinian::{Ideal, LocalRingCtx, ModulePresentation, TruncationPolicy};
use hsmult_core::ring::{FieldKind, Poly, PolyRing};
use hsmult_core::theorems::*;
use hsmult_core::Error;

fn ring(vars: &[&str]) -> PolyRing {
    PolyRing::new(vars.iter().map(|s| s.to_string()).collect(), FieldKind::Rationals).unwrap()
}

fn ws_q(vars: &[&str], rels: &[&str], q: Option<&[&str]>, deg: u32) -> (Workspace, PolyRing) {
    let r = ring(vars);
    let ctx = LocalRingCtx::new(r.clone(), TruncationPolicy::default_for(deg)).unwrap();
    let module = ModulePresentation::new(rels.iter().map(|s| r.parse(s).unwrap()).collect());
    let q = q.map(|g| Ideal::new(g.iter().map(|s| r.parse(s).unwrap()).collect()));
    (Workspace::new(ctx, module, q).unwrap(), r)
}

fn ws(rels: &[&str], deg: u32) -> (Workspace, PolyRing) {
    ws_q(&["x", "y"], rels, None, deg)
}

fn polys(r: &PolyRing, s: &[&str]) -> Vec<Poly> {
    s.iter().map(|x| r.parse(x).unwrap()).collect()
}

#[test]
fn bezout_corpus() {
    let cases = [
        ("x", "y", 1, 1, 0),
        ("y - x^2", "y", 2, 1, 1),
        ("y^2 - x^3", "y^2 + x^3", 6, 4, 2),
        ("y^2 - x^3", "y", 3, 2, 1),
    ];
    for (f, g, e0, cd, t) in cases {
        let (mut w, r) = ws(&[], 3);
        let (rep, v) = bezout_plane(&mut w, &r.parse(f).unwrap(), &r.parse(g).unwrap(), NRange::new(0, 8)).unwrap();
        assert!(v.holds, "{} {} {:?}", f, g, v.counterexample);
        assert_eq!((rep.e0, (rep.c * rep.d_deg) as u64, rep.t, rep.slack), (e0, cd, t, 0), "{} {}", f, g);
        assert_eq!(rep.t, rep.t_oracle);
    }
}

#[test]
fn bezout_common_component_is_rejected() {
    let (mut w, r) = ws(&[], 3);
    let e = bezout_plane(&mut w, &r.parse("x*y").unwrap(), &r.parse("x^2").unwrap(), NRange::new(0, 6));
    assert!(matches!(e, Err(Error::NotSystemOfParameters(_))));
}

#[test]
fn form_regularity_agrees() {
    for (rels, a, regular) in [
        (vec![], vec!["x", "y"], true),
        (vec![], vec!["y^2 - x^3", "y^2 + x^3"], false),
        (vec!["x^2"], vec!["x + y^3"], false),
        (vec!["y^2 - x^3"], vec!["x"], true),
        (vec!["x*y"], vec!["x + y"], true),
    ] {
        let (mut w, r) = ws(&rels, 3);
        let seq = w.sequence(polys(&r, &a)).unwrap();
        let v = check_regseq_form(&mut w, &seq, NRange::new(1, 6)).unwrap();
        assert!(v.holds, "{:?} {:?}", a, v.counterexample);
        assert_eq!(v.get_bool("regular"), Some(regular), "{:?}", a);
    }
}

#[test]
fn cusp_pair_multiplicity_identity_and_decomposition() {
    let (mut w, r) = ws(&[], 3);
    let seq = w.sequence(polys(&r, &["y^2 - x^3", "y^2 + x^3"])).unwrap();
    let v = check_multiplicity_identity(&mut w, &seq, None, NRange::new(1, 6)).unwrap();
    assert!(v.holds, "{:?}", v.counterexample);
    assert_eq!(v.get_int("l1"), Some(2));
    let (dec, v) = decompose_l1(&mut w, &seq, None, NRange::new(1, 6)).unwrap();
    assert!(v.holds, "{:?}", v.counterexample);
    assert_eq!((dec.total, dec.x_frak, dec.ell), (2, 2, 0));
    let v = check_improved_bound(&mut w, &seq, None, NRange::new(1, 6)).unwrap();
    assert!(v.holds);
    assert_eq!(v.get_int("slack"), Some(0));
    let v = check_upper_bound(&mut w, &seq, None, NRange::new(1, 6)).unwrap();
    assert!(v.holds, "{:?}", v.counterexample);
}

#[test]
fn vanishing_formula_one_element() {
    let (mut w, r) = ws(&[], 3);
    let seq = w.sequence(polys(&r, &["y^2 - x^3", "y^2 + x^3"])).unwrap();
    let b = polys(&r, &["y^2 - x^3"]);
    let v = check_vanishing_formula(&mut w, &seq, &b, NRange::new(1, 6)).unwrap();
    assert!(v.holds, "{:?}", v.counterexample);
}

#[test]
fn lift_examples() {
    let (mut w, r) = ws(&[], 3);
    let seq = w.sequence(polys(&r, &["x^2", "y^3"])).unwrap();
    let v = check_lift(&mut w, &polys(&r, &["x^2 + x*y^3"]), &seq).unwrap();
    assert!(v.holds && v.get_bool("solvable") == Some(true), "{:?}", v);
    let v = check_lift(&mut w, &polys(&r, &["x*y"]), &seq).unwrap();
    assert_eq!(v.get_bool("solvable"), Some(false));
    assert!(v.holds);
}

#[test]
fn chi_bounds_cm_and_not_cm() {
    let (mut w, r) = ws(&[], 3);
    let seq = w.sequence(polys(&r, &["y^2 - x^3", "y^2 + x^3"])).unwrap();
    let v = check_chi_bounds(&mut w, &seq, NRange::new(1, 6)).unwrap();
    assert!(v.holds, "{:?}", v.counterexample);
    assert_eq!(v.get_int("chi"), Some(2));
    assert_eq!(v.get_bool("equality"), Some(true));

    let (mut w, r) = ws(&["x^2*y", "x^3"], 3);
    let seq = w.sequence(polys(&r, &["y"])).unwrap();
    let v = check_chi_bounds(&mut w, &seq, NRange::new(1, 6)).unwrap();
    assert!(v.holds, "{:?}", v.counterexample);
    assert_eq!(v.get_bool("cohen_macaulay"), Some(false));
    assert_eq!((v.get_int("chi"), v.get_int("l1")), (Some(0), Some(1)));
}

#[test]
fn euler_identity_examples() {
    for a in [vec!["x", "y"], vec!["x^2", "y^3"], vec!["y^2 - x^3", "y^2 + x^3"]] {
        let (mut w, r) = ws(&[], 3);
        let seq = w.sequence(polys(&r, &a)).unwrap();
        let v = check_euler_identity(&mut w, &seq, NRange::new(1, 6)).unwrap();
        assert!(v.holds, "{:?} {:?}", a, v);
    }
}

#[test]
fn multiplicity_inequality_examples() {
    let (mut w, r) = ws(&[], 3);
    let seq = w.sequence(polys(&r, &["y^2 - x^3"])).unwrap();
    let vs = check_euler_monotonicity(&mut w, &seq, NRange::new(1, 6)).unwrap();
    assert!(vs[0].holds && vs[0].get_bool("equality") == Some(true), "{:?}", vs[0]);

    let (mut w, r) = ws(&["x*y"], 3);
    let seq = w.sequence(polys(&r, &["x - y"])).unwrap();
    let vs = check_euler_monotonicity(&mut w, &seq, NRange::new(1, 6)).unwrap();
    assert!(vs.iter().all(|v| v.holds), "{:?}", vs);

    let (mut w, r) = ws(&["x^2*y", "x^3"], 3);
    let seq = w.sequence(polys(&r, &["y"])).unwrap();
    let vs = check_euler_monotonicity(&mut w, &seq, NRange::new(1, 6)).unwrap();
    assert!(vs.iter().all(|v| v.holds), "{:?}", vs);
    assert_eq!(vs[0].get_int("branch"), Some(2));
}

#[test]
fn kernel_degree_examples() {
    for (rels, a, param) in [
        (vec![], "y^2 - x^3", true),
        (vec!["x*y"], "x + y", true),
        (vec!["y^2 - x^3"], "y", false),
    ] {
        let (mut w, r) = ws(&rels, 3);
        let v = check_kernel_degree(&mut w, &r.parse(a).unwrap(), NRange::new(1, 6)).unwrap();
        assert!(v.holds, "{} {:?}", a, v);
        assert_eq!(v.get_bool("initial_form_parameter"), Some(param), "{}", a);
    }
    let (mut w, r) = ws(&["x^2"], 3);
    let e = check_kernel_degree(&mut w, &r.parse("x").unwrap(), NRange::new(1, 6));
    assert!(matches!(e, Err(Error::HypothesisFailed(_))));
}

#[test]
fn non_maximal_ideal_of_definition() {
    let (mut w, r) = ws_q(&["x", "y"], &[], Some(&["x^2", "y"]), 3);
    let seq = w.sequence(polys(&r, &["x^2", "y"])).unwrap();
    let v = check_multiplicity_identity(&mut w, &seq, None, NRange::new(1, 6)).unwrap();
    assert!(v.holds, "{:?}", v.counterexample);
    assert_eq!(v.get_int("l1"), Some(0));
}
