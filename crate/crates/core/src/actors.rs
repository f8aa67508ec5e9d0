//! Payoffs of the players: a single-party government, the two members of a
//! coalition government, and the foreign lobby.
//!
//! Every payoff is quadratic in the tariff and linear in the transfer. The
//! [`Payoff`] impls skip domain checks and are what the solvers call; the
//! free functions validate their arguments first.

use serde::{Deserialize, Serialize};

use crate::error::{Checks, Result, Violation};
use crate::scalar::Scalar;

/// Utility over (tariff, transfer) pairs.
pub trait Payoff {
    fn payoff<S: Scalar>(&self, tariff: S, transfer: S) -> S;
}

/// Single-party government whose ideal is the median voter's peak.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmdGovernment {
    pub t_m: f64,
}

impl SmdGovernment {
    pub fn new(t_m: f64) -> Result<Self> {
        let mut checks = Checks::default();
        checks.finite("t_m", t_m).require(!(t_m <= 0.0), || Violation::MedianNotPositive { t_m });
        checks.finish()?;
        Ok(SmdGovernment { t_m })
    }
}

impl Payoff for SmdGovernment {
    fn payoff<S: Scalar>(&self, tariff: S, transfer: S) -> S {
        -(S::from(self.t_m) - tariff).square() + transfer
    }
}

/// Two-party coalition: the large party holds cabinet share `alpha`.
///
/// As a bargaining agent the coalition acts as one government with quadratic
/// loss around [`PrCoalition::ideal`] and the whole transfer; the member-level
/// payoffs are available separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrCoalition {
    pub t_l: f64,
    pub t_s: f64,
    pub alpha: f64,
}

impl PrCoalition {
    pub fn new(t_l: f64, t_s: f64, alpha: f64) -> Result<Self> {
        let mut checks = Checks::default();
        checks.finite("t_l", t_l).finite("t_s", t_s).finite("alpha", alpha);
        if checks.is_clean() {
            checks
                .require(t_l > t_s && t_s > 0.0, || Violation::PeakOrdering { t_l, t_s })
                .require(alpha > 0.0 && alpha < 1.0, || Violation::WeightOutOfRange { alpha });
        }
        checks.finish()?;
        Ok(PrCoalition { t_l, t_s, alpha })
    }

    /// Cabinet-weighted ideal tariff `alpha*t_L + (1-alpha)*t_S`.
    pub fn ideal(&self) -> f64 {
        // same value, one rounding fewer than the weighted sum
        self.t_s + self.alpha * (self.t_l - self.t_s)
    }

    /// The weighted ideal, checked to lie strictly above the median `t_m`
    /// (beyond [`STRICT_TOLERANCE`](crate::bargaining::STRICT_TOLERANCE)).
    pub fn ideal_above(&self, t_m: f64) -> Result<f64> {
        let ideal = self.ideal();
        if crate::bargaining::strictly_greater(ideal, t_m) {
            Ok(ideal)
        } else {
            Err(Violation::IdealNotAboveMedian { ideal, t_m }.into())
        }
    }

    pub fn large_payoff<S: Scalar>(&self, tariff: S, transfer: S) -> S {
        -(S::from(self.t_l) - tariff).square() + S::from(self.alpha) * transfer
    }

    pub fn small_payoff<S: Scalar>(&self, tariff: S, transfer: S) -> S {
        -(S::from(self.t_s) - tariff).square() + S::from(1.0 - self.alpha) * transfer
    }
}

impl Payoff for PrCoalition {
    fn payoff<S: Scalar>(&self, tariff: S, transfer: S) -> S {
        -(S::from(self.ideal()) - tariff).square() + transfer
    }
}

/// Foreign lobby preferring tariffs no higher than `t_f` (`t_f >= 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lobby {
    pub t_f: f64,
}

impl Lobby {
    pub fn new(t_f: f64) -> Result<Self> {
        let mut checks = Checks::default();
        checks.finite("t_f", t_f).nonneg("t_f", t_f);
        checks.finish()?;
        Ok(Lobby { t_f })
    }
}

impl Payoff for Lobby {
    fn payoff<S: Scalar>(&self, tariff: S, transfer: S) -> S {
        let t_f = S::from(self.t_f);
        // the kink itself belongs to the flat branch
        if tariff > t_f {
            -(tariff - t_f).square() - transfer
        } else {
            -transfer
        }
    }
}

fn check_point(t: f64, m: f64) -> Result<()> {
    let mut checks = Checks::default();
    checks.finite("t", t).finite("M", m).nonneg("t", t).nonneg("M", m);
    checks.finish()
}

/// `-(t_m - t)^2 + M`
pub fn gov_utility_smd(t: f64, m: f64, t_m: f64) -> Result<f64> {
    check_point(t, m)?;
    let mut checks = Checks::default();
    checks.finite("t_m", t_m).nonneg("t_m", t_m);
    checks.finish()?;
    Ok(SmdGovernment { t_m }.payoff(t, m))
}

/// `-(t_L - t)^2 + alpha*M`
pub fn member_utility_large(t: f64, m: f64, coalition: &PrCoalition) -> Result<f64> {
    check_point(t, m)?;
    Ok(coalition.large_payoff(t, m))
}

/// `-(t_S - t)^2 + (1 - alpha)*M`
pub fn member_utility_small(t: f64, m: f64, coalition: &PrCoalition) -> Result<f64> {
    check_point(t, m)?;
    Ok(coalition.small_payoff(t, m))
}

pub fn coalition_ideal(coalition: &PrCoalition) -> f64 {
    coalition.ideal()
}

/// `-(t - t_f)^2 - M` above `t_f`, `-M` otherwise.
pub fn lobby_utility(t: f64, m: f64, t_f: f64) -> Result<f64> {
    check_point(t, m)?;
    let mut checks = Checks::default();
    checks.finite("t_f", t_f).nonneg("t_f", t_f);
    checks.finish()?;
    Ok(Lobby { t_f }.payoff(t, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn coalition(t_l: f64, t_s: f64, alpha: f64) -> PrCoalition {
        PrCoalition::new(t_l, t_s, alpha).unwrap()
    }

    #[test]
    fn smd_examples() {
        assert_eq!(gov_utility_smd(2.0, 0.0, 2.0).unwrap(), 0.0);
        assert_eq!(gov_utility_smd(1.0, 2.0, 2.0).unwrap(), 1.0);
        assert_eq!(gov_utility_smd(0.0, 0.0, 3.0).unwrap(), -9.0);
        assert!(gov_utility_smd(1.0, -1.0, 2.0).is_err());
        assert!(gov_utility_smd(-1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn member_examples() {
        let c = coalition(3.0, 1.0, 0.6);
        assert_eq!(member_utility_large(3.0, 0.0, &c).unwrap(), 0.0);
        assert_eq!(member_utility_large(2.0, 10.0, &c).unwrap(), 5.0);
        assert_eq!(member_utility_large(3.0, 10.0, &c).unwrap(), 6.0);
        assert_eq!(member_utility_small(1.0, 0.0, &c).unwrap(), 0.0);
        assert!((member_utility_small(2.0, 10.0, &c).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn coalition_ideal_examples() {
        assert_eq!(coalition(3.0, 1.0, 0.6).ideal(), 2.2);
        assert_eq!(coalition(5.0, 1.0, 0.5).ideal(), 3.0);
        // equal peaks would give ideal 2 but break t_L > t_S
        assert_eq!(
            PrCoalition::new(2.0, 2.0, 0.5).unwrap_err().violations(),
            &[Violation::PeakOrdering { t_l: 2.0, t_s: 2.0 }]
        );
        assert!(PrCoalition::new(3.0, 1.0, 1.0).is_err());
        assert!(PrCoalition::new(3.0, 1.0, 0.0).is_err());
        assert!(coalition(3.0, 1.0, 0.1).ideal_above(2.0).is_err());
        assert!(coalition(3.0, 1.0, 0.6).ideal_above(2.0).is_ok());
    }

    #[test]
    fn lobby_examples() {
        assert_eq!(lobby_utility(0.5, 1.0, 1.0).unwrap(), -1.0);
        assert_eq!(lobby_utility(1.0, 0.0, 1.0).unwrap(), 0.0);
        assert_eq!(lobby_utility(2.0, 1.0, 1.0).unwrap(), -2.0);
    }

    #[test]
    fn smd_concave_with_peak_at_median() {
        let g = SmdGovernment::new(2.5).unwrap();
        let h = 1e-4;
        for i in 0..50 {
            let t = 0.1 * i as f64;
            let second = (g.payoff(t + h, 1.0) - 2.0 * g.payoff(t, 1.0) + g.payoff(t - h, 1.0)) / (h * h);
            assert!((second + 2.0).abs() < 1e-4);
            let slope = (g.payoff(t + h, 1.0) - g.payoff(t - h, 1.0)) / (2.0 * h);
            assert_eq!(slope > 0.0, t < 2.5, "t = {t}");
        }
    }

    proptest! {
        #[test]
        fn member_payoffs_split_transfer(t in 0.0..10.0f64, m in 0.0..50.0f64, t_s in 0.1..5.0f64,
                                         gap in 0.1..5.0f64, alpha in 0.01..0.99f64) {
            let c = coalition(t_s + gap, t_s, alpha);
            let total = c.large_payoff(t, m) + c.small_payoff(t, m);
            let expected = -(c.t_l - t).powi(2) - (c.t_s - t).powi(2) + m;
            prop_assert!((total - expected).abs() <= 1e-9 * (1.0 + expected.abs()));
        }

        #[test]
        fn lobby_flat_below_and_falling_above(t_f in 0.1..5.0f64, a in 0.0..10.0f64, b in 0.0..10.0f64, m in 0.0..10.0f64) {
            let l = Lobby::new(t_f).unwrap();
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if hi <= t_f {
                prop_assert_eq!(l.payoff(lo, m), l.payoff(hi, m));
            }
            if lo >= t_f {
                prop_assert!(l.payoff(hi, m) <= l.payoff(lo, m));
            }
        }

        #[test]
        fn transfer_slopes(t in 0.0..10.0f64, m in 0.0..50.0f64, t_f in 0.1..3.0f64) {
            let c = coalition(6.0, 1.0, 0.7);
            let g = SmdGovernment::new(4.0).unwrap();
            let l = Lobby::new(t_f).unwrap();
            let tol = 1e-9;
            prop_assert!((g.payoff(t, m + 1.0) - g.payoff(t, m) - 1.0).abs() < tol);
            prop_assert!((l.payoff(t, m + 1.0) - l.payoff(t, m) + 1.0).abs() < tol);
            prop_assert!((c.large_payoff(t, m + 1.0) - c.large_payoff(t, m) - 0.7).abs() < tol);
            prop_assert!((c.small_payoff(t, m + 1.0) - c.small_payoff(t, m) - 0.3).abs() < tol);
        }
    }
}
