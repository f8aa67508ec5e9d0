//! Voters with single-peaked preferences over a one-dimensional tariff space.
//!
//! Each voter is described only by the location of their peak. Ordinal
//! comparisons go through [`prefers`]; majority votes between two tariffs go
//! to whichever is strictly closer to a voter's peak, and a voter who is
//! equidistant abstains.

use std::cmp::Ordering;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Checks, Error, Result, Violation};

/// Nonempty list of voters' ideal tariff rates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VoterPopulation {
    peaks: Vec<f64>,
}

impl VoterPopulation {
    pub fn new(peaks: Vec<f64>) -> Result<Self> {
        if peaks.is_empty() {
            return Err(Error::EmptyPopulation);
        }
        let mut checks = Checks::default();
        for &p in &peaks {
            checks.finite("peak", p).nonneg("peak", p);
        }
        checks.finish()?;
        Ok(VoterPopulation { peaks })
    }

    pub fn peaks(&self) -> &[f64] {
        &self.peaks
    }

    pub fn len(&self) -> usize {
        self.peaks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Median peak; see [`median_peak`].
    pub fn median(&self) -> f64 {
        median_of(&self.peaks).expect("population is nonempty")
    }

    /// Quadratic-loss cardinal utility of voter `i` for tariff `t`.
    pub fn voter_utility(&self, i: usize, t: f64) -> f64 {
        let d = self.peaks[i] - t;
        -d * d
    }
}

impl<'de> Deserialize<'de> for VoterPopulation {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let peaks = Vec::<f64>::deserialize(de)?;
        VoterPopulation::new(peaks).map_err(serde::de::Error::custom)
    }
}

/// Returns true when `y` is strictly preferred to `x` by a voter whose peak
/// is `peak`: either `x < y <= peak` or `x > y >= peak`.
pub fn prefers(peak: f64, x: f64, y: f64) -> Result<bool> {
    let mut checks = Checks::default();
    checks.finite("peak", peak).finite("x", x).finite("y", y).nonneg("peak", peak).nonneg("x", x).nonneg("y", y);
    checks.finish()?;
    Ok((x < y && y <= peak) || (x > y && y >= peak))
}

/// Median of the population's peaks. An even count yields the midpoint of the
/// two middle order statistics.
pub fn median_peak(pop: &VoterPopulation) -> f64 {
    pop.median()
}

pub(crate) fn median_of(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    Some(if n % 2 == 1 {
        sorted[n / 2]
    } else {
        // a + (b - a) / 2 stays exact for equal neighbours and avoids overflow
        let (a, b) = (sorted[n / 2 - 1], sorted[n / 2]);
        a + (b - a) / 2.0
    })
}

/// Number of voters who strictly prefer `a` to `b` and vice versa.
pub fn pairwise_tally(pop: &VoterPopulation, a: f64, b: f64) -> (usize, usize) {
    pop.peaks.iter().fold((0, 0), |(for_a, for_b), &p| match (p - a).abs().partial_cmp(&(p - b).abs()) {
        Some(Ordering::Less) => (for_a + 1, for_b),
        Some(Ordering::Greater) => (for_a, for_b + 1),
        _ => (for_a, for_b),
    })
}

/// The candidate that beats every other (distinct) candidate by a strict
/// simple majority, if one exists.
pub fn condorcet_winner(pop: &VoterPopulation, candidates: &[f64]) -> Result<Option<f64>> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let mut checks = Checks::default();
    for &c in candidates {
        checks.finite("candidate", c).nonneg("candidate", c);
    }
    checks.finish()?;

    let beats_all = |c: f64| {
        candidates.iter().filter(|&&d| d != c).all(|&d| {
            let (for_c, for_d) = pairwise_tally(pop, c, d);
            for_c > for_d
        })
    };
    Ok(candidates.iter().copied().find(|&c| beats_all(c)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Large,
    Small,
}

impl FromStr for Party {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "large" | "l" => Ok(Party::Large),
            "small" | "s" => Ok(Party::Small),
            other => Err(format!("unknown party label `{other}` (expected large or small)")),
        }
    }
}

/// Voters split between the large and the small coalition party.
#[derive(Debug, Clone, PartialEq)]
pub struct PartyPartition {
    pub large_peaks: Vec<f64>,
    pub small_peaks: Vec<f64>,
    /// Median of the large party's supporters.
    pub t_l: f64,
    /// Median of the whole population.
    pub t_m: f64,
    /// Median of the small party's supporters.
    pub t_s: f64,
}

/// Splits `pop` by the per-voter `labels` and checks `t_L > t_m > t_S > 0`.
pub fn partition_parties(pop: &VoterPopulation, labels: &[Party]) -> Result<PartyPartition> {
    if labels.len() != pop.len() {
        return Err(Error::LabelCount { voters: pop.len(), labels: labels.len() });
    }
    let (large, small): (Vec<_>, Vec<_>) = pop.peaks.iter().zip(labels).partition(|(_, &l)| l == Party::Large);
    let large_peaks: Vec<f64> = large.into_iter().map(|(&p, _)| p).collect();
    let small_peaks: Vec<f64> = small.into_iter().map(|(&p, _)| p).collect();

    let t_l = median_of(&large_peaks).ok_or(Error::EmptyParty("large"))?;
    let t_s = median_of(&small_peaks).ok_or(Error::EmptyParty("small"))?;
    let t_m = pop.median();
    if !(t_l > t_m && t_m > t_s && t_s > 0.0) {
        return Err(Violation::PartyMedians { t_l, t_m, t_s }.into());
    }
    Ok(PartyPartition { large_peaks, small_peaks, t_l, t_m, t_s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pop(p: &[f64]) -> VoterPopulation {
        VoterPopulation::new(p.to_vec()).unwrap()
    }

    #[test]
    fn prefers_examples() {
        assert!(prefers(2.0, 0.5, 1.0).unwrap());
        assert!(prefers(2.0, 3.0, 2.5).unwrap());
        assert!(!prefers(2.0, 1.0, 1.0).unwrap());
        assert!(!prefers(2.0, 1.0, 3.0).unwrap());
        assert!(prefers(-1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn median_examples() {
        assert_eq!(pop(&[1.0, 2.0, 3.0]).median(), 2.0);
        assert_eq!(pop(&[4.0, 1.0, 3.0, 2.0]).median(), 2.5);
        assert_eq!(pop(&[5.0]).median(), 5.0);
        assert!(matches!(VoterPopulation::new(vec![]), Err(Error::EmptyPopulation)));
        assert!(VoterPopulation::new(vec![1.0, -0.5]).is_err());
    }

    #[test]
    fn condorcet_examples() {
        let p = pop(&[1.0, 2.0, 3.0]);
        assert_eq!(condorcet_winner(&p, &[1.0, 2.0, 3.0]).unwrap(), Some(2.0));
        assert_eq!(condorcet_winner(&p, &[2.0]).unwrap(), Some(2.0));
        let tied = pop(&[0.0, 0.0, 10.0, 10.0]);
        assert_eq!(pairwise_tally(&tied, 0.0, 10.0), (2, 2));
        assert_eq!(condorcet_winner(&tied, &[0.0, 10.0]).unwrap(), None);
        assert!(matches!(condorcet_winner(&p, &[]), Err(Error::EmptyCandidates)));
    }

    #[test]
    fn equidistant_voter_abstains() {
        let p = pop(&[1.0, 2.0, 5.0]);
        // voter at 2 is equidistant from 1 and 3
        assert_eq!(pairwise_tally(&p, 1.0, 3.0), (1, 1));
    }

    #[test]
    fn partition_examples() {
        use Party::*;
        let p = pop(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        let part = partition_parties(&p, &[Small, Small, Large, Large, Large]).unwrap();
        assert_eq!((part.t_l, part.t_m, part.t_s), (4.0, 3.0, 1.5));

        let p = pop(&[1.0, 2.0, 3.0]);
        let part = partition_parties(&p, &[Small, Small, Large]).unwrap();
        assert_eq!((part.t_l, part.t_m, part.t_s), (3.0, 2.0, 1.5));

        let err = partition_parties(&p, &[Large, Small, Small]).unwrap_err();
        assert_eq!(err.violations(), &[Violation::PartyMedians { t_l: 1.0, t_m: 2.0, t_s: 2.5 }]);

        assert!(matches!(partition_parties(&p, &[Large]), Err(Error::LabelCount { .. })));
        assert!(matches!(partition_parties(&p, &[Large, Large, Large]), Err(Error::EmptyParty("small"))));
    }

    #[test]
    fn voter_utility_is_quadratic_loss() {
        let p = pop(&[2.0]);
        assert_eq!(p.voter_utility(0, 2.0), 0.0);
        assert_eq!(p.voter_utility(0, 5.0), -9.0);
    }

    proptest! {
        #[test]
        fn prefers_is_asymmetric(p in 0.0..10.0f64, x in 0.0..10.0f64, y in 0.0..10.0f64) {
            prop_assert!(!(prefers(p, x, y).unwrap() && prefers(p, y, x).unwrap()));
        }

        #[test]
        fn median_translates(peaks in prop::collection::vec(0u32..1000, 1..40), shift in 0u32..500) {
            // integer-valued peaks keep the shift exact
            let base: Vec<f64> = peaks.iter().map(|&p| p as f64).collect();
            let moved: Vec<f64> = base.iter().map(|p| p + shift as f64).collect();
            prop_assert_eq!(pop(&moved).median(), pop(&base).median() + shift as f64);
        }

        #[test]
        fn median_wins_odd_populations(peaks in prop::collection::vec(0u32..=50, 1..30)) {
            let mut peaks = peaks;
            if peaks.len() % 2 == 0 {
                peaks.pop();
            }
            prop_assume!(!peaks.is_empty());
            let p = pop(&peaks.iter().map(|&v| v as f64).collect::<Vec<_>>());
            let grid: Vec<f64> = (0..=50).map(f64::from).collect();
            prop_assert_eq!(condorcet_winner(&p, &grid).unwrap(), Some(p.median()));
        }
    }
}
