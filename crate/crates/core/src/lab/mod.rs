//! Scenarios, the tariff/transfer comparison between government types, and
//! batch tools built on it: seeded scenario generation and parameter sweeps.

mod sampling;
mod sweep;

use serde::{Deserialize, Serialize};

use crate::actors::{Lobby, PrCoalition};
use crate::bargaining::{check_pr, solve_smd, solve_unitary, BargainOutcome};
pub use crate::bargaining::{strictly_greater, STRICT_TOLERANCE};
use crate::error::{Checks, Error, Result, Violation};

pub use sampling::{random_scenarios, Interval, SampledScenarios, SamplingBounds, DEFAULT_BUDGET};
pub use sweep::{sweep, Param, SweepAxis, SweepPoint, SweepRecord, SweepSpec, SweepTable};

/// One fully parameterized game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub t_m: f64,
    pub t_f: f64,
    pub coalition: Option<PrCoalition>,
    /// Where the scenario came from, e.g. `seed42#7` or a file name.
    pub tag: String,
}

impl Scenario {
    pub fn new(t_m: f64, t_f: f64, coalition: Option<PrCoalition>, tag: impl Into<String>) -> Result<Self> {
        let mut checks = Checks::default();
        checks.finite("t_m", t_m).finite("t_f", t_f);
        if checks.is_clean() {
            match &coalition {
                Some(c) => check_pr(c, t_m, t_f, &mut checks),
                None => {
                    checks.require(!(t_m <= 0.0), || Violation::MedianNotPositive { t_m }).require(
                        t_f >= 0.0 && t_f < t_m,
                        || Violation::LobbyOrdering { t_f, ideal_name: "t_m", ideal: t_m },
                    );
                }
            }
        }
        checks.finish()?;
        Ok(Scenario { t_m, t_f, coalition, tag: tag.into() })
    }

    pub fn solve_smd(&self) -> BargainOutcome {
        solve_smd(self.t_m, self.t_f).expect("validated scenario")
    }

    pub fn solve_pr(&self) -> Option<BargainOutcome> {
        self.coalition.as_ref().map(|c| solve_unitary(c, c.ideal(), &Lobby { t_f: self.t_f }))
    }

    /// Solves both regimes (PR only with a coalition) and compares them.
    pub fn evaluate(&self) -> Evaluation {
        let smd = self.solve_smd();
        let pr = self.solve_pr();
        let report = pr.as_ref().map(|pr| TheoremReport::compare(&smd, pr));
        Evaluation { scenario: self.clone(), smd, pr, report }
    }
}

/// Majoritarian against proportional equilibrium for one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub t_star_smd: f64,
    pub t_star_pr: f64,
    pub m_star_smd: f64,
    pub m_star_pr: f64,
    pub tariff_gap: f64,
    pub transfer_gap: f64,
    /// Both gaps strictly positive.
    pub holds: bool,
}

impl TheoremReport {
    pub fn compare(smd: &BargainOutcome, pr: &BargainOutcome) -> Self {
        TheoremReport {
            t_star_smd: smd.t_star,
            t_star_pr: pr.t_star,
            m_star_smd: smd.m_star,
            m_star_pr: pr.m_star,
            tariff_gap: pr.t_star - smd.t_star,
            transfer_gap: pr.m_star - smd.m_star,
            holds: strictly_greater(pr.t_star, smd.t_star) && strictly_greater(pr.m_star, smd.m_star),
        }
    }
}

/// Checks that the coalition government ends up with the higher tariff and
/// the larger transfer.
pub fn verify_theorem(s: &Scenario) -> Result<TheoremReport> {
    s.evaluate().report.ok_or(Error::MissingCoalition)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub scenario: Scenario,
    pub smd: BargainOutcome,
    pub pr: Option<BargainOutcome>,
    pub report: Option<TheoremReport>,
}
