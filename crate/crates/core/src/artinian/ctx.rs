use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ring::{Poly, PolyRing, Valuation};

/// Which truncation levels `N` are tried, and how many consecutive levels
/// must agree before a value counts as certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationPolicy {
    pub n_start: u32,
    pub n_step: u32,
    pub n_max: u32,
    pub agree_window: u32,
}

impl TruncationPolicy {
    pub fn new(n_start: u32, n_step: u32, n_max: u32, agree_window: u32) -> Result<Self> {
        let p = TruncationPolicy {
            n_start,
            n_step,
            n_max,
            agree_window,
        };
        p.validate()?;
        Ok(p)
    }

    /// Starts four levels above the largest degree of the inputs, steps by
    /// one, needs three agreeing levels and stops at 64.
    pub fn default_for(max_input_degree: u32) -> Self {
        TruncationPolicy {
            n_start: max_input_degree + 4,
            n_step: 1,
            n_max: 64.max(max_input_degree + 4 + 3),
            agree_window: 3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_start < 2 {
            return Err(Error::InvalidPolicy("n_start must be at least 2".into()));
        }
        if self.agree_window < 3 {
            return Err(Error::InvalidPolicy("agree_window must be at least 3".into()));
        }
        if self.n_step < 1 {
            return Err(Error::InvalidPolicy("n_step must be at least 1".into()));
        }
        if self.n_max < self.n_start + self.agree_window * self.n_step {
            return Err(Error::InvalidPolicy(format!(
                "n_max {} is below n_start + agree_window * n_step = {}",
                self.n_max,
                self.n_start + self.agree_window * self.n_step
            )));
        }
        Ok(())
    }

    /// The levels of one agreement window starting at `start`.
    pub fn window(&self, start: u32) -> impl Iterator<Item = u32> + '_ {
        (0..self.agree_window).map(move |k| start + k * self.n_step)
    }

    pub fn with_n_max(self, n_max: u32) -> Result<Self> {
        TruncationPolicy { n_max, ..self }.validate_into()
    }

    fn validate_into(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }
}

/// The ambient local ring `k[x_1..x_d]` localized at the origin, together
/// with the truncation policy used to realize it through `A/m^N`.
///
/// Every quotient `k[x]/(J + m^N)` is supported at the origin only, so it is
/// already local and equals the corresponding quotient of the localization.
/// That is what lets all lengths be computed as plain vector-space dimensions
/// of affine truncations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRingCtx {
    pub ring: PolyRing,
    pub policy: TruncationPolicy,
}

impl LocalRingCtx {
    pub fn new(ring: PolyRing, policy: TruncationPolicy) -> Result<Self> {
        policy.validate()?;
        Ok(LocalRingCtx { ring, policy })
    }

    pub fn d(&self) -> usize {
        self.ring.nvars()
    }
}

/// A cyclic module `M = A/J`, given by generators of `J`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModulePresentation {
    pub relations: Vec<Poly>,
}

impl ModulePresentation {
    pub fn free() -> Self {
        ModulePresentation { relations: Vec::new() }
    }

    pub fn new(relations: Vec<Poly>) -> Self {
        ModulePresentation {
            relations: relations.into_iter().filter(|p| !p.is_zero()).collect(),
        }
    }

    /// Whether some relation is a unit, making `M` the zero module.
    pub fn is_zero_module(&self) -> bool {
        self.relations.iter().any(|p| p.ord() == Valuation::Finite(0))
    }

    pub fn max_degree(&self) -> u32 {
        self.relations.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    /// `M / aM`, again cyclic.
    pub fn quotient_by(&self, extra: &[Poly]) -> ModulePresentation {
        let mut rel = self.relations.clone();
        rel.extend(extra.iter().cloned());
        ModulePresentation::new(rel)
    }
}
