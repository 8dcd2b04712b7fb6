//! Verdict bookkeeping for the acceptance target.

use std::fmt;
use std::time::{Duration, Instant};

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl Verdict {
    /// Runs `check` and records whether it held within `budget`.
    pub fn run(
        id: u32,
        name: &'static str,
        budget_secs: u64,
        check: impl FnOnce() -> (bool, String),
    ) -> Verdict {
        let start = Instant::now();
        let (held, detail) = check();
        let elapsed = start.elapsed();
        let budget = Duration::from_secs(budget_secs);
        Verdict {
            id,
            name,
            pass: held && elapsed <= budget,
            detail,
            elapsed,
            budget,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:>2} {}: {} [{:.1} s of {} s]",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        )
    }
}
