//! Efficiency checks for a bargaining outcome.

use crate::actors::{Lobby, Payoff, SmdGovernment};

use super::{BargainOutcome, OracleGrid};

/// Slack below which a payoff improvement does not count.
pub const DOMINANCE_TOLERANCE: f64 = 1e-9;

/// True iff no point of the `grid.points`-squared grid over the feasible box
/// gives both parties a payoff more than [`DOMINANCE_TOLERANCE`] above the
/// outcome's.
///
/// Each tariff column is searched rather than enumerated: the government's
/// payoff rises with the transfer and the lobby's falls, so the cheapest
/// transfer that improves the government is the lobby's best shot at also
/// improving. That transfer is located by bisection on the grid index.
pub fn pareto_check(outcome: &BargainOutcome, gov_ideal: f64, t_f: f64, grid: &OracleGrid) -> bool {
    let gov = SmdGovernment { t_m: gov_ideal };
    let lobby = Lobby { t_f };
    is_undominated(&gov, &lobby, outcome.t_star, outcome.m_star, gov_ideal, grid.points.max(2))
}

pub(crate) fn is_undominated<G: Payoff>(gov: &G, lobby: &Lobby, t: f64, m: f64, gov_ideal: f64, n: usize) -> bool {
    let g_bar = gov.payoff(t, m) + DOMINANCE_TOLERANCE;
    let f_bar = lobby.payoff(t, m) + DOMINANCE_TOLERANCE;
    let t_f = lobby.t_f;
    let cap = (gov_ideal - t_f).powi(2);
    let at = |lo: f64, hi: f64, k: usize| lo + (hi - lo) * k as f64 / (n - 1) as f64;

    (0..n).all(|i| {
        let t = at(t_f, gov_ideal, i);
        let m_of = |j: usize| at(0.0, cap, j);
        // first index whose transfer improves the government
        let j = partition_point(n, |j| gov.payoff(t, m_of(j)) <= g_bar);
        j == n || lobby.payoff(t, m_of(j)) <= f_bar
    })
}

/// First `k` in `0..n` with `!pred(k)`, for `pred` true on a prefix.
fn partition_point(n: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Difference between the two parties' marginal rates of substitution of
/// transfer for tariff at `(t, m)`, by central finite differences of step `h`.
pub fn tangency_gap<G: Payoff>(gov: &G, lobby: &Lobby, t: f64, m: f64, h: f64) -> f64 {
    let mrs = |u: &dyn Fn(f64, f64) -> f64| {
        let du_dt = (u(t + h, m) - u(t - h, m)) / (2.0 * h);
        let du_dm = (u(t, m + h) - u(t, m - h)) / (2.0 * h);
        du_dt / du_dm
    };
    let g = mrs(&|t, m| gov.payoff(t, m));
    let f = mrs(&|t, m| lobby.payoff(t, m));
    (g - f).abs()
}
