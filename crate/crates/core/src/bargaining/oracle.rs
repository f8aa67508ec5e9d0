//! Numerical Nash bargaining solution.
//!
//! The oracle never uses the closed forms. It maximizes the Nash product
//! `(G - G_d) * (F - F_d)` over the feasible box
//! `t in [t_f, ideal]`, `M in [0, (ideal - t_f)^2]` restricted to points where
//! both parties weakly gain, calling only the payoff functions.
//!
//! Search runs in two stages. A coarse grid scan locates the best cell, then
//! golden-section searches refine it: along `M` for a fixed tariff, nested in
//! a search along `t` over the best value found on each `M` line. Refinement
//! evaluates payoffs in double-double precision because the product is too
//! flat at its peak for `f64` comparisons to pin the transfer down to `1e-6`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actors::{Lobby, Payoff, SmdGovernment};
use crate::error::{Checks, Error, Result, Violation};
use crate::scalar::{DoubleDouble, Scalar};

/// Minimum coarse grid points per axis.
pub const MIN_GRID_POINTS: usize = 100;

/// Resolution of the coarse scan and target accuracy of the refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleGrid {
    /// Points per axis of the coarse scan.
    pub points: usize,
    /// Absolute accuracy the refined `(t, M)` must reach.
    pub tolerance: f64,
}

impl Default for OracleGrid {
    fn default() -> Self {
        OracleGrid { points: 2001, tolerance: 1e-6 }
    }
}

impl OracleGrid {
    pub fn with_points(points: usize) -> Self {
        OracleGrid { points, ..Default::default() }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.points < MIN_GRID_POINTS {
            return Err(Error::GridTooCoarse { min: MIN_GRID_POINTS, got: self.points });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleSolution {
    pub t: f64,
    pub m: f64,
    pub nash_product: f64,
    /// Best point of the coarse scan, before refinement.
    pub coarse: (f64, f64),
}

/// One bargaining game described purely by payoff functions.
#[derive(Debug, Clone, Copy)]
pub struct NashProblem<'a, G> {
    gov: &'a G,
    lobby: &'a Lobby,
    gov_ideal: f64,
}

impl<'a, G: Payoff + Sync> NashProblem<'a, G> {
    pub fn new(gov: &'a G, gov_ideal: f64, lobby: &'a Lobby) -> Result<Self> {
        let mut checks = Checks::default();
        let t_f = lobby.t_f;
        checks.finite("gov_ideal", gov_ideal).require(t_f >= 0.0 && t_f < gov_ideal, || Violation::LobbyOrdering {
            t_f,
            ideal_name: "gov_ideal",
            ideal: gov_ideal,
        });
        checks.finish()?;
        Ok(NashProblem { gov, lobby, gov_ideal })
    }

    fn tariff_range(&self) -> (f64, f64) {
        (self.lobby.t_f, self.gov_ideal)
    }

    fn transfer_cap(&self) -> f64 {
        (self.gov_ideal - self.lobby.t_f).powi(2)
    }

    /// Gains over disagreement, or `None` outside the individually rational set.
    fn gains<S: Scalar>(&self, t: S, m: S) -> Option<(S, S)> {
        let ideal = S::from(self.gov_ideal);
        let g = self.gov.payoff(t, m) - self.gov.payoff(ideal, S::zero());
        let f = self.lobby.payoff(t, m) - self.lobby.payoff(ideal, S::zero());
        (g >= S::zero() && f >= S::zero()).then_some((g, f))
    }

    /// Nash product at `(t, m)`, `None` if infeasible.
    pub fn nash_product<S: Scalar>(&self, t: S, m: S) -> Option<S> {
        self.gains(t, m).map(|(g, f)| g * f)
    }

    /// Best coarse grid point as `(value, i, j)`; ties go to the lowest index.
    fn scan(&self, n: usize) -> Option<(f64, usize, usize)> {
        let (t_lo, t_hi) = self.tariff_range();
        let cap = self.transfer_cap();
        let step = |lo: f64, hi: f64, k: usize| lo + (hi - lo) * k as f64 / (n - 1) as f64;
        let better = |a: Option<(f64, usize, usize)>, b: Option<(f64, usize, usize)>| match (a, b) {
            (Some(x), Some(y)) => Some(if y.0 > x.0 || (y.0 == x.0 && (y.1, y.2) < (x.1, x.2)) { y } else { x }),
            (x, None) => x,
            (None, y) => y,
        };
        (0..n)
            .into_par_iter()
            .map(|i| {
                let t = step(t_lo, t_hi, i);
                (0..n).fold(None, |best, j| {
                    let cell = self.nash_product(t, step(0.0, cap, j)).map(|v| (v, i, j));
                    better(best, cell)
                })
            })
            .reduce(|| None, better)
    }

    /// Feasible transfers at tariff `t`, using that payoffs are linear in `M`.
    fn transfer_interval(&self, t: DoubleDouble) -> Option<(f64, f64)> {
        let ideal = DoubleDouble::from(self.gov_ideal);
        let zero = DoubleDouble::zero();
        let one = DoubleDouble::from(1.0);
        let g0 = self.gov.payoff(t, zero);
        let g_slope = (self.gov.payoff(t, one) - g0).to_f64();
        let f0 = self.lobby.payoff(t, zero);
        let f_slope = (self.lobby.payoff(t, one) - f0).to_f64();
        let g_need = (self.gov.payoff(ideal, zero) - g0).to_f64();
        let f_room = (f0 - self.lobby.payoff(ideal, zero)).to_f64();
        let lo = (g_need / g_slope).max(0.0);
        let hi = (f_room / -f_slope).min(self.transfer_cap());
        (lo <= hi).then_some((lo, hi))
    }

    /// Largest Nash product at tariff `t` and the transfer achieving it.
    fn best_transfer(&self, t: f64, tol: f64) -> Option<(DoubleDouble, f64)> {
        let td = DoubleDouble::from(t);
        let (lo, hi) = self.transfer_interval(td)?;
        let (m, v) = golden_max(lo, hi, tol, |m| self.nash_product(td, DoubleDouble::from(m)));
        Some((v?, m))
    }

    /// Maximizes the Nash product.
    pub fn solve(&self, grid: &OracleGrid) -> Result<OracleSolution> {
        grid.validate()?;
        let n = grid.points;
        let (t_lo, t_hi) = self.tariff_range();
        let cap = self.transfer_cap();
        let (_, i, j) = self.scan(n).ok_or(Error::EmptyFeasibleSet)?;
        let h_t = (t_hi - t_lo) / (n - 1) as f64;
        let coarse = (t_lo + h_t * i as f64, cap * j as f64 / (n - 1) as f64);

        // A tariff error dt moves the best transfer by about (ideal - t_f)*dt.
        let m_tol = grid.tolerance * 1e-3;
        let t_tol = m_tol / (1.0 + (t_hi - t_lo));
        let lo = (coarse.0 - h_t).max(t_lo);
        let hi = (coarse.0 + h_t).min(t_hi);
        let (t, best) = golden_max(lo, hi, t_tol, |t| self.best_transfer(t, m_tol));
        let (value, m) = best.ok_or(Error::EmptyFeasibleSet)?;
        Ok(OracleSolution { t, m, nash_product: value.to_f64(), coarse })
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
///
/// `None` values rank below everything. Returns the best evaluated point.
pub(crate) fn golden_max<V, F>(mut lo: f64, mut hi: f64, tol: f64, mut f: F) -> (f64, Option<V>)
where
    V: PartialOrd + Copy,
    F: FnMut(f64) -> Option<V>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let gt = |a: &Option<V>, b: &Option<V>| match (a, b) {
        (Some(x), Some(y)) => x > y,
        (Some(_), None) => true,
        _ => false,
    };

    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    // the golden ratio shrinks the bracket by ~0.618 a step; the cap only
    // guards against a tolerance below the f64 spacing of the bracket
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if gt(&f2, &f1) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    [(x1, f1), (x2, f2), (mid, fm)]
        .into_iter()
        .fold((mid, None), |best, cand| if gt(&cand.1, &best.1) { cand } else { best })
}

/// Nash bargaining point for a government with quadratic loss around
/// `gov_ideal` facing a lobby with ideal `t_f`.
pub fn nash_oracle(gov_ideal: f64, t_f: f64, grid: &OracleGrid) -> Result<OracleSolution> {
    let lobby = Lobby::new(t_f)?;
    let gov = SmdGovernment { t_m: gov_ideal };
    NashProblem::new(&gov, gov_ideal, &lobby)?.solve(grid)
}
