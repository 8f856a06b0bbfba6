//! Exact searches: base size, c-point stabilizer scans, distinguishing
//! number and regular-tuple counts.

mod base;
mod dist;
mod regular;
mod scan;

use std::time::{Duration, Instant};

pub use base::{base_lower_bound, base_size_exact, greedy_base, BaseOutcome, BaseWitness};
pub use dist::{distinguishing_number, is_distinguishing, preserving_subgroup, DistOutcome, DEFAULT_DIST_CAP};
pub use regular::{count_regular_tuples, RegularCount};
pub use scan::{stabilizer_scan, Predicate, ScanReport, ScanWitness, Verdict};

use crate::error::{Error, Result};

/// Environment variable holding the default per-check budget in milliseconds.
pub const BUDGET_ENV: &str = "PERMRES_BUDGET_MS";

/// Wall-clock budget shared by a search and its parallel branches.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { deadline: None }
    }

    pub fn millis(ms: u64) -> Self {
        Budget {
            deadline: Some(Instant::now() + Duration::from_millis(ms)),
        }
    }

    /// From `PERMRES_BUDGET_MS`, unlimited when unset or unparsable.
    pub fn from_env() -> Self {
        match std::env::var(BUDGET_ENV).ok().and_then(|s| s.trim().parse().ok()) {
            Some(ms) => Budget::millis(ms),
            None => Budget::unlimited(),
        }
    }

    pub fn check(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::Resource("time budget exhausted".into())),
            _ => Ok(()),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}

/// Orbit representatives (least points) of the nontrivial orbits, ascending.
pub(crate) fn moved_orbit_reps(g: &crate::GeneratedGroup) -> Vec<(usize, usize)> {
    g.orbits()
        .into_iter()
        .filter(|o| o.len() > 1)
        .map(|o| (o[0], o.len()))
        .collect()
}
