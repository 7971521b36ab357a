use alloc::vec::Vec;

use super::ctx::TruncationPolicy;
use crate::error::{Error, Result};

/// A value together with the truncation levels at which it was recomputed
/// and found identical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certified<T> {
    pub value: T,
    pub levels: Vec<u32>,
}

impl<T> Certified<T> {
    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Certified<U> {
        Certified {
            value: f(self.value),
            levels: self.levels,
        }
    }
}

/// Outcome of recomputing one quantity at increasing truncation levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stabilized<T> {
    Stable(Certified<T>),
    /// No window of agreeing levels up to `n_max`. `history` lists every level
    /// tried with its value; `None` marks a level that could not certify.
    NotStabilized { history: Vec<(u32, Option<T>)>, n_max: u32 },
}

impl<T> Stabilized<T> {
    pub fn is_stable(&self) -> bool {
        matches!(self, Stabilized::Stable(_))
    }

    pub fn certified(self, what: &str) -> Result<Certified<T>> {
        match self {
            Stabilized::Stable(c) => Ok(c),
            Stabilized::NotStabilized { n_max, .. } => Err(Error::NotStabilized {
                what: what.into(),
                n_max,
            }),
        }
    }
}

/// Evaluates `f` at `start, start + step, ...` (never below the policy's
/// `n_start`) until `agree_window` consecutive levels return the same
/// certified value. `f` returns `None` for a level where the value cannot be
/// trusted; that breaks any run in progress.
pub fn stabilize<T, F>(policy: &TruncationPolicy, start: u32, mut f: F) -> Result<Stabilized<T>>
where
    T: PartialEq + Clone,
    F: FnMut(u32) -> Result<Option<T>>,
{
    let mut history = Vec::new();
    let mut run: Vec<u32> = Vec::new();
    let mut current: Option<T> = None;
    let mut n = start.max(policy.n_start);
    while n <= policy.n_max {
        let v = f(n)?;
        history.push((n, v.clone()));
        match v {
            Some(x) => {
                if current.as_ref() == Some(&x) {
                    run.push(n);
                } else {
                    current = Some(x);
                    run.clear();
                    run.push(n);
                }
                if run.len() as u32 >= policy.agree_window {
                    return Ok(Stabilized::Stable(Certified {
                        value: current.expect("run has a value"),
                        levels: run,
                    }));
                }
            }
            None => {
                current = None;
                run.clear();
            }
        }
        n += policy.n_step;
    }
    Ok(Stabilized::NotStabilized {
        history,
        n_max: policy.n_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn policy() -> TruncationPolicy {
        TruncationPolicy::new(4, 1, 20, 3).unwrap()
    }

    #[test]
    fn constant_is_certified_immediately() {
        let s = stabilize(&policy(), 0, |_| Ok(Some(7))).unwrap();
        assert_eq!(s, Stabilized::Stable(Certified { value: 7, levels: alloc::vec![4, 5, 6] }));
    }

    #[test]
    fn increasing_never_stabilizes() {
        let s = stabilize(&policy(), 0, |n| Ok(Some(n))).unwrap();
        assert!(!s.is_stable());
    }

    #[test]
    fn uncertified_levels_break_runs() {
        let s = stabilize(&policy(), 0, |n| Ok(if n == 6 { None } else { Some(1) })).unwrap();
        match s {
            Stabilized::Stable(c) => assert_eq!(c.levels, alloc::vec![7, 8, 9]),
            _ => panic!("expected stable"),
        }
    }
}
