//! Nash bargaining between a government and the foreign lobby.
//!
//! The government and the lobby bargain over a tariff `t` and a transfer `M`.
//! If they fail to agree the government sets its own ideal tariff and
//! receives nothing. With equal bargaining power the agreed tariff sits
//! halfway between the two ideals and the transfer splits the gains from
//! trade evenly:
//!
//! ```text
//! t*    = (ideal + t_f) / 2
//! M_max = (ideal - t_f)^2 - (t* - t_f)^2      lobby indifferent to no deal
//! M_min = (ideal - t*)^2                      government indifferent to no deal
//! M*    = (M_min + M_max) / 2  =  (ideal - t_f)^2 / 2
//! ```
//!
//! A majoritarian government's ideal is the median voter's peak `t_m`; a
//! coalition bargains as one agent at its cabinet-weighted ideal.
//!
//! [`oracle`] finds the same point numerically from the payoff functions
//! alone, and [`pareto`] checks efficiency and the tangency condition.

pub mod oracle;
pub mod pareto;

use serde::{Deserialize, Serialize};

use crate::actors::{Lobby, Payoff, PrCoalition, SmdGovernment};
use crate::error::{Checks, Result, Violation};

pub use oracle::{nash_oracle, NashProblem, OracleGrid, OracleSolution};
pub use pareto::{pareto_check, tangency_gap};

/// Relative slack for strict model inequalities between derived quantities.
pub const STRICT_TOLERANCE: f64 = 1e-12;

/// `a > b` by more than float noise.
pub fn strictly_greater(a: f64, b: f64) -> bool {
    a - b > STRICT_TOLERANCE * a.abs().max(b.abs())
}

/// Payoffs when bargaining breaks down.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisagreementPoint {
    pub gov_payoff: f64,
    pub lobby_payoff: f64,
}

impl DisagreementPoint {
    /// Status quo: the government implements `gov_ideal` with no transfer.
    pub fn status_quo<G: Payoff>(gov: &G, gov_ideal: f64, lobby: &Lobby) -> Self {
        DisagreementPoint { gov_payoff: gov.payoff(gov_ideal, 0.0), lobby_payoff: lobby.payoff(gov_ideal, 0.0) }
    }
}

/// Equilibrium of one bargaining game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BargainOutcome {
    pub gov_ideal: f64,
    pub t_f: f64,
    pub t_star: f64,
    pub m_min: f64,
    pub m_max: f64,
    pub m_star: f64,
    pub gov_surplus: f64,
    pub lobby_surplus: f64,
    pub disagreement: DisagreementPoint,
}

impl BargainOutcome {
    /// Both parties do at least as well as with no deal.
    pub fn is_individually_rational(&self) -> bool {
        self.gov_surplus >= 0.0 && self.lobby_surplus >= 0.0
    }
}

fn check_lobby_below(t_f: f64, ideal_name: &'static str, ideal: f64, checks: &mut Checks) {
    checks
        .finite("t_f", t_f)
        .finite(ideal_name, ideal)
        .require(t_f >= 0.0 && t_f < ideal, || Violation::LobbyOrdering { t_f, ideal_name, ideal });
}

/// Disagreement payoffs `(0, -(gov_ideal - t_f)^2)`.
pub fn disagreement(gov_ideal: f64, t_f: f64) -> Result<DisagreementPoint> {
    let mut checks = Checks::default();
    check_lobby_below(t_f, "gov_ideal", gov_ideal, &mut checks);
    checks.finish()?;
    let gov = SmdGovernment { t_m: gov_ideal };
    Ok(DisagreementPoint::status_quo(&gov, gov_ideal, &Lobby { t_f }))
}

/// Closed-form solution for a government with quadratic loss around
/// `gov_ideal` and a payoff linear in the full transfer.
///
/// Callers validate `0 <= t_f < gov_ideal`.
pub fn solve_unitary<G: Payoff>(gov: &G, gov_ideal: f64, lobby: &Lobby) -> BargainOutcome {
    let t_f = lobby.t_f;
    let t_star = (gov_ideal + t_f) / 2.0;
    let m_max = (gov_ideal - t_f).powi(2) - (t_star - t_f).powi(2);
    let m_min = (gov_ideal - t_star).powi(2);
    let m_star = (m_max + m_min) / 2.0;
    let disagreement = DisagreementPoint::status_quo(gov, gov_ideal, lobby);
    BargainOutcome {
        gov_ideal,
        t_f,
        t_star,
        m_min,
        m_max,
        m_star,
        gov_surplus: gov.payoff(t_star, m_star) - disagreement.gov_payoff,
        lobby_surplus: lobby.payoff(t_star, m_star) - disagreement.lobby_payoff,
        disagreement,
    }
}

/// Equilibrium under a single-party (majoritarian) government.
pub fn solve_smd(t_m: f64, t_f: f64) -> Result<BargainOutcome> {
    let mut checks = Checks::default();
    checks.require(!(t_m <= 0.0), || Violation::MedianNotPositive { t_m });
    check_lobby_below(t_f, "t_m", t_m, &mut checks);
    checks.finish()?;
    Ok(solve_unitary(&SmdGovernment { t_m }, t_m, &Lobby { t_f }))
}

/// Equilibrium under a two-party coalition government.
///
/// Every violated constraint is reported, not just the first.
pub fn solve_pr(coalition: &PrCoalition, t_m: f64, t_f: f64) -> Result<BargainOutcome> {
    let mut checks = Checks::default();
    check_pr(coalition, t_m, t_f, &mut checks);
    checks.finish()?;
    Ok(solve_unitary(coalition, coalition.ideal(), &Lobby { t_f }))
}

pub(crate) fn check_pr(c: &PrCoalition, t_m: f64, t_f: f64, checks: &mut Checks) {
    checks.require(!(t_m <= 0.0), || Violation::MedianNotPositive { t_m });
    check_lobby_below(t_f, "t_m", t_m, checks);
    let (t_l, t_s) = (c.t_l, c.t_s);
    checks.require(t_l > t_m && t_m > t_s && t_s > 0.0, || Violation::PartyMedians { t_l, t_m, t_s });
    let ideal = c.ideal();
    checks.require(strictly_greater(ideal, t_m), || Violation::IdealNotAboveMedian { ideal, t_m });
}
