use hsmult_core::artinian::{Ideal, LocalRingCtx, ModulePresentation, Stabilized, TruncationPolicy};
use hsmult_core::complexes::{k_table, l_table, HomologyTable};
use hsmult_core::filtration::{initial_degree, SequenceSpec};
use hsmult_core::ring::{FieldKind, Poly, PolyRing};
use hsmult_core::theorems::{
    bezout_plane, check_chi_bounds, check_euler_monotonicity, check_graded_koszul_vanishing, check_improved_bound,
    check_euler_identity, check_lift, check_multiplicity_identity, check_regseq_form, check_rees_regseq, check_kernel_degree,
    check_upper_bound, check_vanishing_formula, decompose_l1, regular_lift, NRange, Value, Verdict, Workspace,
};
use hsmult_core::Error;

use crate::error::CliError;
use crate::job::JobFile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Command {
    Hs,
    Initform,
    Regseq,
    Homology,
    Formula,
    Multiplicity,
    Decompose,
    Bezout,
    Chi,
    Euler,
    VerifyAll,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::Hs,
        Command::Initform,
        Command::Regseq,
        Command::Homology,
        Command::Formula,
        Command::Multiplicity,
        Command::Decompose,
        Command::Bezout,
        Command::Chi,
        Command::Euler,
        Command::VerifyAll,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Hs => "hs",
            Command::Initform => "initform",
            Command::Regseq => "regseq",
            Command::Homology => "homology",
            Command::Formula => "formula",
            Command::Multiplicity => "multiplicity",
            Command::Decompose => "decompose",
            Command::Bezout => "bezout",
            Command::Chi => "chi",
            Command::Euler => "euler",
            Command::VerifyAll => "verify-all",
        }
    }

    pub fn from_name(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// Command-line settings that take precedence over the job file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub n_hi: Option<i64>,
    pub field: Option<FieldKind>,
    pub trunc_max: Option<u32>,
}

/// A table destined for a CSV file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn series(name: String) -> Self {
        Table {
            name,
            header: vec!["n", "i", "length", "N_window"],
            rows: Vec::new(),
        }
    }
}

/// Everything a run produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub command: Command,
    /// Echo of the input, one `key: value` line each.
    pub input: Vec<(String, String)>,
    /// Computed quantities that are not part of a verdict.
    pub values: Vec<(String, Value)>,
    pub verdicts: Vec<Verdict>,
    /// Checks whose hypotheses did not hold on this input.
    pub skipped: Vec<(String, String)>,
    pub tables: Vec<Table>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.verdicts.iter().all(|v| v.holds) {
            0
        } else {
            2
        }
    }
}

pub fn format_levels(levels: &[u32]) -> String {
    match (levels.first(), levels.last()) {
        (Some(a), Some(b)) => format!("{}..{}", a, b),
        _ => String::new(),
    }
}

struct Input {
    ring: PolyRing,
    ws: Workspace,
    a: Vec<Poly>,
    b: Option<Vec<Poly>>,
    f: Option<Poly>,
    g: Option<Poly>,
    range: NRange,
}

fn parse_all(ring: &PolyRing, src: &[String]) -> Result<Vec<Poly>, CliError> {
    src.iter()
        .map(|s| {
            ring.parse(s).map_err(|e| CliError::Input {
                what: format!("polynomial `{}`", s),
                source: e,
            })
        })
        .collect()
}

fn build(job: &JobFile, ov: &Overrides) -> Result<Input, CliError> {
    let field = ov.field.unwrap_or(job.field);
    let ring = PolyRing::new(job.vars.clone(), field).map_err(|e| CliError::Input {
        what: "ring".into(),
        source: e,
    })?;
    let rels = parse_all(&ring, &job.relations)?;
    let q = job.q.as_ref().map(|g| parse_all(&ring, g)).transpose()?;
    let a = parse_all(&ring, &job.a)?;
    let b = job.b.as_ref().map(|g| parse_all(&ring, g)).transpose()?;
    let one = |s: &Option<String>| s.as_ref().map(|x| parse_all(&ring, std::slice::from_ref(x)).map(|mut v| v.remove(0))).transpose();
    let f = one(&job.f)?;
    let g = one(&job.g)?;
    let max_deg = rels
        .iter()
        .chain(a.iter())
        .chain(b.iter().flatten())
        .chain(q.iter().flatten())
        .chain(f.iter())
        .chain(g.iter())
        .filter_map(|p| p.degree())
        .max()
        .unwrap_or(1);
    let base = TruncationPolicy::default_for(max_deg);
    let o = &job.options;
    let policy = TruncationPolicy::new(
        o.trunc_start.unwrap_or(base.n_start),
        o.trunc_step.unwrap_or(base.n_step),
        ov.trunc_max.or(o.trunc_max).unwrap_or(base.n_max),
        o.agree_window.unwrap_or(base.agree_window),
    )?;
    let ctx = LocalRingCtx::new(ring.clone(), policy)?;
    let ws = Workspace::new(ctx, ModulePresentation::new(rels), q.map(Ideal::new)).map_err(|e| CliError::Input {
        what: "ideal of definition".into(),
        source: e,
    })?;
    let lo = o.n_lo.unwrap_or(1);
    let hi = ov.n_hi.or(o.n_hi).unwrap_or(lo + 7);
    if hi < lo {
        return Err(CliError::Usage(format!("empty range of n: {}..{}", lo, hi)));
    }
    Ok(Input {
        ring,
        ws,
        a,
        b,
        f,
        g,
        range: NRange::new(lo, hi),
    })
}

fn describe_input(job: &JobFile, inp: &Input) -> Vec<(String, String)> {
    let field = match inp.ring.field() {
        FieldKind::Rationals => "Q".to_string(),
        FieldKind::Prime(p) => format!("Fp:{}", p),
    };
    let show = |ps: &[Poly]| ps.iter().map(|p| inp.ring.print(p)).collect::<Vec<_>>().join(", ");
    let module = inp.ws.module.module();
    let mut v = vec![
        ("ring".to_string(), format!("{}[{}]", field, job.vars.join(", "))),
        (
            "module".to_string(),
            if module.relations.is_empty() { "A".into() } else { format!("A/({})", show(&module.relations)) },
        ),
        (
            "q".to_string(),
            if inp.ws.q.is_maximal() { "maximal".into() } else { show(inp.ws.q.ideal().gens()) },
        ),
    ];
    if !inp.a.is_empty() {
        v.push(("a".into(), show(&inp.a)));
    }
    if let Some(b) = &inp.b {
        v.push(("b".into(), show(b)));
    }
    for (k, p) in [("f", &inp.f), ("g", &inp.g)] {
        if let Some(p) = p {
            v.push((k.into(), inp.ring.print(p)));
        }
    }
    v.push(("n_range".into(), format!("{}..{}", inp.range.lo, inp.range.hi)));
    let pol = inp.ws.module.policy();
    v.push((
        "truncation".into(),
        format!("start {} step {} max {} window {}", pol.n_start, pol.n_step, pol.n_max, pol.agree_window),
    ));
    v
}

fn skippable(e: &Error) -> bool {
    matches!(e, Error::HypothesisFailed(_) | Error::NotSystemOfParameters(_) | Error::InvalidInput(_))
}

struct Run {
    inp: Input,
    out: Outcome,
}

impl Run {
    /// Records the verdicts of a check, or notes it as skipped when its
    /// hypotheses fail. Other errors abort the run.
    fn attempt(&mut self, name: &str, r: Result<Vec<Verdict>, Error>) -> Result<(), CliError> {
        match r {
            Ok(vs) => {
                for v in vs {
                    self.push_tables(&v);
                    self.out.verdicts.push(v);
                }
                Ok(())
            }
            Err(e) if skippable(&e) => {
                self.out.skipped.push((name.to_string(), e.to_string()));
                Ok(())
            }
            Err(e) => Err(CliError::Core(e)),
        }
    }

    fn push_tables(&mut self, v: &Verdict) {
        let window = v.certificates.last().map(|c| format_levels(&c.levels)).unwrap_or_default();
        for (key, val) in &v.witness {
            if let Value::Table(rows) = val {
                let mut t = Table::series(format!("{}_{}", v.claim.name(), key));
                let i = if key.starts_with("l1") { 1 } else { 0 };
                for (n, x) in rows {
                    t.rows.push(vec![n.to_string(), i.to_string(), x.to_string(), window.clone()]);
                }
                self.out.tables.push(t);
            }
        }
    }

    fn sequence(&mut self) -> Result<SequenceSpec, CliError> {
        if self.inp.a.is_empty() {
            return Err(CliError::Usage(format!("`{}` needs a sequence `a` in [sequence]", self.out.command.name())));
        }
        self.inp.ws.sequence(self.inp.a.clone()).map_err(|e| CliError::Input {
            what: "sequence a".into(),
            source: e,
        })
    }

    fn homology_table(&mut self, name: &str, t: &HomologyTable) {
        let mut out = Table::series(name.to_string());
        for ((n, i), s) in &t.entries {
            let (len, win) = match s {
                Stabilized::Stable(c) => (c.value.to_string(), format_levels(&c.levels)),
                Stabilized::NotStabilized { .. } => ("unstable".to_string(), String::new()),
            };
            out.rows.push(vec![n.to_string(), i.to_string(), len, win]);
        }
        self.out.tables.push(out);
    }

    fn hs(&mut self) -> Result<(), CliError> {
        let hs = self.inp.ws.hilbert_samuel()?.clone();
        self.out.values.push(("dim".into(), Value::Int(hs.dim.map_or(-1, |d| d as i64))));
        self.out.values.push(("e0".into(), Value::Int(hs.e0())));
        for (i, e) in hs.e.iter().enumerate().skip(1) {
            self.out.values.push((format!("e{}", i), Value::Int(*e)));
        }
        self.out
            .values
            .push(("poly_window".into(), Value::Text(format!("{}..{}", hs.poly_window.0, hs.poly_window.1))));
        let mut t = Table {
            name: "hs".into(),
            header: vec!["n", "length"],
            rows: Vec::new(),
        };
        for (n, c) in &hs.table.entries {
            t.rows.push(vec![n.to_string(), c.value.to_string()]);
        }
        self.out.tables.push(t);
        Ok(())
    }

    fn initform(&mut self) -> Result<(), CliError> {
        let mut elems: Vec<(String, Poly)> = Vec::new();
        for (i, p) in self.inp.a.iter().enumerate() {
            elems.push((format!("a{}", i + 1), p.clone()));
        }
        for (i, p) in self.inp.b.iter().flatten().enumerate() {
            elems.push((format!("b{}", i + 1), p.clone()));
        }
        for (k, p) in [("f", &self.inp.f), ("g", &self.inp.g)] {
            if let Some(p) = p {
                elems.push((k.into(), p.clone()));
            }
        }
        if elems.is_empty() {
            return Err(CliError::Usage("`initform` needs polynomials in [sequence]".into()));
        }
        let q = self.inp.ws.q.ideal().clone();
        for (name, p) in elems {
            let data = initial_degree(&mut self.inp.ws.free, &q, &p).map_err(|e| CliError::Input {
                what: format!("initial degree of {}", name),
                source: e,
            })?;
            self.out.values.push((format!("{}_degree", name), Value::Int(data.c as i64)));
            if let Some(form) = &data.form {
                self.out.values.push((format!("{}_form", name), Value::Text(self.inp.ring.print(form))));
            }
            if !data.certified_levels.is_empty() {
                self.out
                    .values
                    .push((format!("{}_levels", name), Value::Text(format_levels(&data.certified_levels))));
            }
        }
        Ok(())
    }

    fn regseq(&mut self) -> Result<(), CliError> {
        let seq = self.sequence()?;
        let range = self.inp.range;
        let r = check_regseq_form(&mut self.inp.ws, &seq, range).map(|v| vec![v]);
        self.attempt("regseq", r)?;
        let r = check_rees_regseq(&mut self.inp.ws, &seq, range).map(|v| vec![v]);
        self.attempt("rees", r)
    }

    fn homology(&mut self) -> Result<(), CliError> {
        let seq = self.sequence()?;
        let NRange { lo, hi, .. } = self.inp.range;
        let q = self.inp.ws.q.clone();
        let l = l_table(&mut self.inp.ws.module, &seq, &q, lo, hi)?;
        let k = k_table(&mut self.inp.ws.module, &seq, &q, lo, hi)?;
        self.homology_table("l_homology", &l);
        self.homology_table("k_homology", &k);
        let d = seq.len();
        let euler: Vec<(i64, i64)> = (lo..=hi)
            .map(|n| {
                let e = (0..=d).map(|i| l.get(n, i).unwrap_or(0) as i64 * if i % 2 == 0 { 1 } else { -1 }).sum();
                (n, e)
            })
            .collect();
        self.out.values.push(("euler_l".into(), Value::Table(euler)));
        Ok(())
    }

    fn formula(&mut self) -> Result<(), CliError> {
        let seq = self.sequence()?;
        let range = self.inp.range;
        let b = match self.inp.b.clone() {
            Some(b) => b,
            None => {
                // no candidates given: search for one regular lifted element
                let found = regular_lift(&mut self.inp.ws, &seq, None, 1, range)?;
                let b: Vec<Poly> = found.into_iter().map(|l| l.b_prime).collect();
                let shown: Vec<String> = b.iter().map(|p| self.inp.ring.print(p)).collect();
                self.out.values.push(("b_searched".into(), Value::Text(shown.join(", "))));
                b
            }
        };
        let r = check_lift(&mut self.inp.ws, &b, &seq).map(|v| vec![v]);
        self.attempt("lift", r)?;
        let r = check_vanishing_formula(&mut self.inp.ws, &seq, &b, range).map(|v| vec![v]);
        self.attempt("vanishing formula", r)?;
        let r = check_graded_koszul_vanishing(&mut self.inp.ws, &seq, b.len(), 0, range.hi).map(|v| vec![v]);
        self.attempt("graded koszul", r)
    }

    fn multiplicity(&mut self) -> Result<(), CliError> {
        let seq = self.sequence()?;
        let (b, range) = (self.inp.b.clone(), self.inp.range);
        let r = check_multiplicity_identity(&mut self.inp.ws, &seq, b.as_deref(), range).map(|v| vec![v]);
        self.attempt("multiplicity identity", r)?;
        let r = check_upper_bound(&mut self.inp.ws, &seq, b.as_deref(), range).map(|v| vec![v]);
        self.attempt("upper bound", r)
    }

    fn decompose(&mut self) -> Result<(), CliError> {
        let seq = self.sequence()?;
        let (b, range) = (self.inp.b.clone(), self.inp.range);
        let r = decompose_l1(&mut self.inp.ws, &seq, b.as_deref(), range).map(|(_, v)| vec![v]);
        self.attempt("decomposition", r)?;
        let r = check_improved_bound(&mut self.inp.ws, &seq, b.as_deref(), range).map(|v| vec![v]);
        self.attempt("improved bound", r)
    }

    fn bezout(&mut self) -> Result<(), CliError> {
        let (f, g) = match (&self.inp.f, &self.inp.g, self.inp.a.as_slice()) {
            (Some(f), Some(g), _) => (f.clone(), g.clone()),
            (_, _, [f, g]) => (f.clone(), g.clone()),
            _ => return Err(CliError::Usage("`bezout` needs `f` and `g` (or a pair `a`) in [sequence]".into())),
        };
        let range = NRange::new(self.inp.range.lo.min(0), self.inp.range.hi);
        let r = bezout_plane(&mut self.inp.ws, &f, &g, range).map(|(_, v)| vec![v]);
        self.attempt("bezout", r)
    }

    fn chi(&mut self) -> Result<(), CliError> {
        let seq = self.sequence()?;
        let range = self.inp.range;
        let r = check_chi_bounds(&mut self.inp.ws, &seq, range).map(|v| vec![v]);
        self.attempt("chi bounds", r)?;
        let r = check_euler_identity(&mut self.inp.ws, &seq, range).map(|v| vec![v]);
        self.attempt("euler identity", r)
    }

    fn euler(&mut self) -> Result<(), CliError> {
        let seq = self.sequence()?;
        let range = self.inp.range;
        let r = check_euler_monotonicity(&mut self.inp.ws, &seq, range);
        self.attempt("multiplicity inequality", r)?;
        let a1 = seq.elems[0].clone();
        let r = check_kernel_degree(&mut self.inp.ws, &a1, range).map(|v| vec![v]);
        self.attempt("kernel degree", r)
    }

    fn verify_all(&mut self) -> Result<(), CliError> {
        self.hs()?;
        let plane = self.inp.ring.nvars() == 2
            && self.inp.ws.module.module().relations.is_empty()
            && self.inp.ws.q.is_maximal()
            && (self.inp.a.len() == 2 || (self.inp.f.is_some() && self.inp.g.is_some()));
        if plane {
            self.bezout()?;
        }
        if self.inp.a.is_empty() {
            return Ok(());
        }
        self.regseq()?;
        self.formula()?;
        self.multiplicity()?;
        self.decompose()?;
        self.chi()?;
        self.euler()
    }
}

/// Runs one command on a parsed job.
pub fn run(job: &JobFile, command: Command, ov: &Overrides) -> Result<Outcome, CliError> {
    if let Some(name) = &job.command {
        match Command::from_name(name) {
            Some(c) if c == command => {}
            Some(c) => {
                return Err(CliError::Usage(format!(
                    "job file names command `{}` but `{}` was requested",
                    c.name(),
                    command.name()
                )))
            }
            None => return Err(CliError::Usage(format!("unknown command `{}` in job file", name))),
        }
    }
    let inp = build(job, ov)?;
    let input = describe_input(job, &inp);
    let mut run = Run {
        inp,
        out: Outcome {
            command,
            input,
            values: Vec::new(),
            verdicts: Vec::new(),
            skipped: Vec::new(),
            tables: Vec::new(),
        },
    };
    match command {
        Command::Hs => run.hs()?,
        Command::Initform => run.initform()?,
        Command::Regseq => run.regseq()?,
        Command::Homology => run.homology()?,
        Command::Formula => run.formula()?,
        Command::Multiplicity => run.multiplicity()?,
        Command::Decompose => run.decompose()?,
        Command::Bezout => run.bezout()?,
        Command::Chi => run.chi()?,
        Command::Euler => run.euler()?,
        Command::VerifyAll => run.verify_all()?,
    }
    let checks = !matches!(command, Command::Hs | Command::Initform | Command::Homology);
    if checks && run.out.verdicts.is_empty() {
        if let Some((name, reason)) = run.out.skipped.first() {
            return Err(CliError::Usage(format!("{}: {}", name, reason)));
        }
    }
    Ok(run.out)
}
