//! Checkers that test the regular-sequence criteria, length formulas and
//! Bézout-type bounds on concrete inputs and report each as a [`Verdict`].
//!
//! Statements "for all n" are verified on a finite window of `n`; statements
//! "for n ≫ 0" use the stable tail of a computed table.

mod euler;
mod formula;
mod lift;
mod regularity;

pub use euler::{check_chi_bounds, check_euler_monotonicity, check_euler_identity, check_kernel_degree, e0_of_sequence};
pub use formula::{
    bezout_plane, check_improved_bound, check_multiplicity_identity, check_upper_bound, check_vanishing_formula,
    decompose_l1, regular_lift, BezoutReport, L1Decomposition,
};
pub use lift::{check_lift, lift_to_sequence, LiftResult};
pub use regularity::{check_graded_koszul_vanishing, check_rees_regseq, check_regseq_form, RegularityEvidence};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::artinian::{stabilize, Certified, Engine, Ideal, LocalRingCtx, ModulePresentation, Subspace};
use crate::error::{Error, Result};
use crate::filtration::{hilbert_samuel, HilbertSamuelData, IdealOfDefinition, InitialFormData, SequenceSpec};
use crate::ring::{Poly, PolyRing};

/// The statements that can be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClaimId {
    FormRegularity,
    ReesRegularity,
    ConstructiveLift,
    VanishingFormula,
    GradedKoszulVanishing,
    MultiplicityIdentity,
    L1Decomposition,
    ImprovedBound,
    UpperBound,
    PlaneBezout,
    EulerIdentity,
    ChiBound,
    MultiplicityInequality,
    EulerMonotonicity,
    KernelDegree,
}

impl ClaimId {
    pub fn name(&self) -> &'static str {
        match self {
            ClaimId::FormRegularity => "form_regularity",
            ClaimId::ReesRegularity => "rees_regularity",
            ClaimId::ConstructiveLift => "constructive_lift",
            ClaimId::VanishingFormula => "vanishing_formula",
            ClaimId::GradedKoszulVanishing => "graded_koszul_vanishing",
            ClaimId::MultiplicityIdentity => "multiplicity_identity",
            ClaimId::L1Decomposition => "l1_decomposition",
            ClaimId::ImprovedBound => "improved_bound",
            ClaimId::UpperBound => "upper_bound",
            ClaimId::PlaneBezout => "plane_bezout",
            ClaimId::EulerIdentity => "euler_identity",
            ClaimId::ChiBound => "chi_bound",
            ClaimId::MultiplicityInequality => "multiplicity_inequality",
            ClaimId::EulerMonotonicity => "euler_monotonicity",
            ClaimId::KernelDegree => "kernel_degree",
        }
    }
}

impl core::fmt::Display for ClaimId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// A witness entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Text(String),
    /// `(n, value)` pairs.
    Table(Vec<(i64, i64)>),
}

impl core::fmt::Display for Value {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Value::Int(x) => write!(f, "{}", x),
            Value::Bool(b) => write!(f, "{}", b),
            Value::Text(s) => f.write_str(s),
            Value::Table(t) => {
                f.write_str("[")?;
                for (i, (n, v)) in t.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{}:{}", n, v)?;
                }
                f.write_str("]")
            }
        }
    }
}

/// A concrete failure: two integers that should have compared as claimed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub what: String,
    pub n: Option<i64>,
    pub lhs: i64,
    pub rhs: i64,
}

/// Truncation levels at which a reported quantity was certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub what: String,
    pub levels: Vec<u32>,
}

/// Outcome of checking one statement on one input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub claim: ClaimId,
    pub holds: bool,
    /// Range of `n` the check covered.
    pub window: Option<(i64, i64)>,
    pub witness: Vec<(String, Value)>,
    pub counterexample: Option<Counterexample>,
    pub certificates: Vec<Certificate>,
}

impl Verdict {
    pub fn new(claim: ClaimId) -> Self {
        Verdict {
            claim,
            holds: true,
            window: None,
            witness: Vec::new(),
            counterexample: None,
            certificates: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, v: Value) -> Self {
        self.witness.push((key.into(), v));
        self
    }

    pub fn int(self, key: &str, v: i64) -> Self {
        self.with(key, Value::Int(v))
    }

    pub fn flag(self, key: &str, v: bool) -> Self {
        self.with(key, Value::Bool(v))
    }

    pub fn table(self, key: &str, t: &[(i64, u64)]) -> Self {
        self.with(key, Value::Table(t.iter().map(|(n, v)| (*n, *v as i64)).collect()))
    }

    pub fn text(self, key: &str, s: impl Into<String>) -> Self {
        self.with(key, Value::Text(s.into()))
    }

    pub fn window(mut self, lo: i64, hi: i64) -> Self {
        self.window = Some((lo, hi));
        self
    }

    pub fn cert(mut self, what: &str, levels: &[u32]) -> Self {
        self.certificates.push(Certificate {
            what: what.into(),
            levels: levels.to_vec(),
        });
        self
    }

    /// Records the first failed comparison; later ones are ignored.
    pub fn fail(mut self, what: &str, n: Option<i64>, lhs: i64, rhs: i64) -> Self {
        if self.counterexample.is_none() {
            self.counterexample = Some(Counterexample {
                what: what.into(),
                n,
                lhs,
                rhs,
            });
        }
        self.holds = false;
        self
    }

    /// Fails with the given comparison unless `ok`.
    pub fn require(self, ok: bool, what: &str, n: Option<i64>, lhs: i64, rhs: i64) -> Self {
        if ok {
            self
        } else {
            self.fail(what, n, lhs, rhs)
        }
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.witness.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn get_int(&self, key: &str) -> Option<i64> {
        match self.get(key) {
            Some(Value::Int(x)) => Some(*x),
            _ => None,
        }
    }

    pub fn get_bool(&self, key: &str) -> Option<bool> {
        match self.get(key) {
            Some(Value::Bool(x)) => Some(*x),
            _ => None,
        }
    }
}

/// Range of `n` to tabulate, with the cap used when a table has to be
/// extended before its tail settles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NRange {
    pub lo: i64,
    pub hi: i64,
    pub cap: i64,
}

impl NRange {
    pub fn new(lo: i64, hi: i64) -> Self {
        NRange { lo, hi, cap: hi + 12 }
    }

    pub fn with_cap(self, cap: i64) -> Self {
        NRange { cap, ..self }
    }
}

/// Engines for `A` and `M` with a validated ideal of definition.
pub struct Workspace {
    pub free: Engine,
    pub module: Engine,
    pub q: IdealOfDefinition,
    hs: Option<HilbertSamuelData>,
}

impl Workspace {
    /// `q = None` means the maximal ideal. The ideal must be `m`-primary in
    /// `A`, since initial degrees are taken there.
    pub fn new(ctx: LocalRingCtx, module: ModulePresentation, q: Option<Ideal>) -> Result<Self> {
        let mut free = Engine::new(ctx.clone(), ModulePresentation::free());
        let ideal = q.unwrap_or_else(|| Ideal::maximal(&ctx.ring));
        IdealOfDefinition::validate(&mut free, ideal.clone())?;
        let mut m = Engine::new(ctx, module);
        let q = IdealOfDefinition::validate(&mut m, ideal)?;
        Ok(Workspace {
            free,
            module: m,
            q,
            hs: None,
        })
    }

    pub fn ring(&self) -> &PolyRing {
        self.module.ring()
    }

    pub fn ctx(&self) -> &LocalRingCtx {
        self.module.ctx()
    }

    pub fn window(&self) -> usize {
        self.module.policy().agree_window as usize
    }

    /// The workspace of `M/(extra)M` with the same `q`.
    pub fn quotient(&self, extra: &[Poly]) -> Result<Workspace> {
        let module = self.module.module().quotient_by(extra);
        Workspace::new(self.ctx().clone(), module, Some(self.q.ideal().clone()))
    }

    pub fn sequence(&mut self, elems: Vec<Poly>) -> Result<SequenceSpec> {
        SequenceSpec::new(&mut self.free, self.q.ideal(), elems)
    }

    /// A sequence with prescribed degrees, e.g. lifted elements.
    pub fn sequence_with_degrees(&self, elems: &[Poly], degrees: &[u32]) -> SequenceSpec {
        SequenceSpec::from_forms(
            elems
                .iter()
                .zip(degrees)
                .map(|(e, c)| InitialFormData {
                    element: e.clone(),
                    c: *c,
                    certified_levels: Vec::new(),
                    form: None,
                })
                .collect(),
        )
    }

    /// Hilbert-Samuel data of `M` with respect to `q`, computed once.
    pub fn hilbert_samuel(&mut self) -> Result<&HilbertSamuelData> {
        if self.hs.is_none() {
            let d = self.ring().nvars();
            let (lo, hi) = crate::filtration::default_hs_range(d);
            let hs = hilbert_samuel(&mut self.module, &self.q, lo, hi, hi + 24)?;
            self.hs = Some(hs);
        }
        Ok(self.hs.as_ref().expect("computed"))
    }

    /// `(dim M, e_0(q;M))`.
    pub fn dim_and_e0(&mut self) -> Result<(Option<u32>, i64)> {
        let hs = self.hilbert_samuel()?;
        Ok((hs.dim, hs.e0()))
    }

    /// `ℓ(M/(gens)M)`, failing when it is not finite.
    pub fn colength(&mut self, gens: &[Poly]) -> Result<Certified<u64>> {
        colength(&mut self.module, gens)
    }

    /// Checks that `a` is a system of parameters of `M`.
    pub fn require_sop(&mut self, a: &SequenceSpec) -> Result<Certified<u64>> {
        let (dim, _) = self.dim_and_e0()?;
        let d = dim.ok_or_else(|| Error::NotSystemOfParameters("M is zero".into()))?;
        if a.len() != d as usize {
            return Err(Error::NotSystemOfParameters(format!(
                "{} elements given but dim M = {}",
                a.len(),
                d
            )));
        }
        self.colength(&a.elems)
    }
}

/// `ℓ(M/(gens)M)` in the engine's module.
pub fn colength(engine: &mut Engine, gens: &[Poly]) -> Result<Certified<u64>> {
    let ideal = Ideal::new(gens.to_vec());
    let s = match engine.saturation(&ideal, 1) {
        Ok(s) => s,
        Err(Error::NotStabilized { .. }) => {
            return Err(Error::NotSystemOfParameters("M/(a)M does not have finite length".into()))
        }
        Err(e) => return Err(e),
    };
    crate::filtration::exact_length(engine, s, "colength", |e, k| {
        let im = e.ideal_image(gens, k)?;
        Ok((e.prefix(k) - im.dim()) as u64)
    })
}

/// A length that is only exact when computed at a working level above the
/// measuring level: `f(engine, N, W)` is evaluated with `W = N + margin`,
/// and the value must agree over an agreement window of `N`.
pub fn two_level_length<F>(engine: &mut Engine, start: u32, slack: u32, what: &str, mut f: F) -> Result<Certified<u64>>
where
    F: FnMut(&mut Engine, u32, u32) -> Result<u64>,
{
    let policy = *engine.policy();
    stabilize(&policy, start, |n| {
        let w = (n + n / 2 + 2 * slack + 2).min(policy.n_max);
        if w < n + slack + 1 || engine.ensure_level(w).is_err() {
            return Ok(None);
        }
        f(engine, n, w).map(Some)
    })?
    .certified(what)
}

/// Projection of a subspace at level `w` to level `n`.
pub fn project(engine: &Engine, s: &Subspace, n: u32) -> Subspace {
    s.project(n, engine.prefix(n))
}

/// A tabulated series with its stable value and the first `n` of its run.
pub type Series = (Vec<(i64, u64)>, Option<(u64, i64)>);

/// Evaluates `f` on `lo..=hi` and keeps extending by one agreement window
/// (up to `cap`) until the last window of values agree. Returns the table
/// and the stable value with the first `n` of its run.
pub fn stable_series<F>(range: NRange, window: usize, mut f: F) -> Result<Series>
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
        if let Some(s) = crate::filtration::stable_tail(&values, window) {
            return Ok((values, Some(s)));
        }
        if hi >= range.cap {
            return Ok((values, None));
        }
        hi = (hi + window as i64).min(range.cap);
    }
}

/// The stable value of a table, or an error naming the quantity.
pub fn require_stable(s: Option<(u64, i64)>, what: &str, n_max: u32) -> Result<(u64, i64)> {
    s.ok_or_else(|| Error::NotStabilized {
        what: what.into(),
        n_max,
    })
}

/// Collects certificate levels, deduplicated and sorted.
pub fn merge_levels<'a, I: IntoIterator<Item = &'a [u32]>>(it: I) -> Vec<u32> {
    let mut v: Vec<u32> = it.into_iter().flat_map(|s| s.iter().copied()).collect();
    v.sort_unstable();
    v.dedup();
    v
}
