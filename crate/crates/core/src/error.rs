use std::fmt;

/// A single violated model constraint.
///
/// `Display` names the inequality that failed along with the offending
/// values, so it can be shown to a user unchanged.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// A tariff, peak or transfer that must be nonnegative was not.
    Negative { name: &'static str, value: f64 },
    /// A parameter was NaN or infinite.
    NonFinite { name: &'static str },
    /// `0 < t_f < t_m` (or `< ideal` for a coalition) failed. `t_f = 0` is
    /// accepted as the boundary case.
    LobbyOrdering { t_f: f64, ideal_name: &'static str, ideal: f64 },
    /// `t_m > 0` failed.
    MedianNotPositive { t_m: f64 },
    /// `0 < alpha < 1` failed.
    WeightOutOfRange { alpha: f64 },
    /// `t_L > t_S > 0` failed.
    PeakOrdering { t_l: f64, t_s: f64 },
    /// `t_L > t_m > t_S` failed.
    PartyMedians { t_l: f64, t_m: f64, t_s: f64 },
    /// `alpha*t_L + (1-alpha)*t_S > t_m` failed.
    IdealNotAboveMedian { ideal: f64, t_m: f64 },
}

impl Violation {
    /// Short machine-friendly tag used when sweep rows are skipped.
    pub fn tag(&self) -> &'static str {
        match self {
            Violation::Negative { .. } => "negative",
            Violation::NonFinite { .. } => "non-finite",
            Violation::LobbyOrdering { .. } => "t_f>=t_m",
            Violation::MedianNotPositive { .. } => "t_m<=0",
            Violation::WeightOutOfRange { .. } => "alpha-out-of-range",
            Violation::PeakOrdering { .. } => "t_l<=t_s",
            Violation::PartyMedians { .. } => "party-medians",
            Violation::IdealNotAboveMedian { .. } => "ideal<=t_m",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Negative { name, value } => write!(f, "{name} >= 0 violated ({name} = {value})"),
            Violation::NonFinite { name } => write!(f, "{name} must be finite"),
            Violation::LobbyOrdering { t_f, ideal_name, ideal } => {
                write!(f, "0 < t_f < {ideal_name} violated (t_f = {t_f}, {ideal_name} = {ideal})")
            }
            Violation::MedianNotPositive { t_m } => write!(f, "t_m > 0 violated (t_m = {t_m})"),
            Violation::WeightOutOfRange { alpha } => {
                write!(f, "0 < alpha < 1 violated (alpha = {alpha})")
            }
            Violation::PeakOrdering { t_l, t_s } => {
                write!(f, "t_L > t_S > 0 violated (t_L = {t_l}, t_S = {t_s})")
            }
            Violation::PartyMedians { t_l, t_m, t_s } => {
                write!(f, "t_L > t_m > t_S > 0 violated (t_L = {t_l}, t_m = {t_m}, t_S = {t_s})")
            }
            Violation::IdealNotAboveMedian { ideal, t_m } => {
                write!(f, "alpha*t_L + (1-alpha)*t_S > t_m violated (ideal = {ideal}, t_m = {t_m})")
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}", join(.0))]
    Constraints(Vec<Violation>),
    #[error("voter population is empty")]
    EmptyPopulation,
    #[error("candidate list is empty")]
    EmptyCandidates,
    #[error("{labels} party labels given for {voters} voters")]
    LabelCount { voters: usize, labels: usize },
    #[error("party `{0}` has no voters")]
    EmptyParty(&'static str),
    #[error("scenario has no coalition; theorem check needs a PR government")]
    MissingCoalition,
    #[error("grid needs at least {min} points per axis, got {got}")]
    GridTooCoarse { min: usize, got: usize },
    #[error("internal error: feasible bargaining set is empty")]
    EmptyFeasibleSet,
    #[error("rejection budget exhausted: {accepted} of {wanted} scenarios after {draws} draws")]
    BudgetExhausted { wanted: usize, accepted: usize, draws: u64 },
    #[error("bad sampling bounds: {0}")]
    Bounds(String),
    #[error("bad sweep spec: {0}")]
    Sweep(String),
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::Constraints(vec![v])
    }
}

impl Error {
    /// The violated constraints, if this is a constraint error.
    pub fn violations(&self) -> &[Violation] {
        match self {
            Error::Constraints(v) => v,
            _ => &[],
        }
    }
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Collects violations so all of them can be reported at once.
#[derive(Debug, Default)]
pub(crate) struct Checks(Vec<Violation>);

impl Checks {
    pub fn require(&mut self, ok: bool, v: impl FnOnce() -> Violation) -> &mut Self {
        if !ok {
            self.0.push(v());
        }
        self
    }

    pub fn finite(&mut self, name: &'static str, x: f64) -> &mut Self {
        self.require(x.is_finite(), || Violation::NonFinite { name })
    }

    pub fn nonneg(&mut self, name: &'static str, x: f64) -> &mut Self {
        self.require(!(x < 0.0), || Violation::Negative { name, value: x })
    }

    pub fn is_clean(&self) -> bool {
        self.0.is_empty()
    }

    pub fn finish(self) -> Result<()> {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(Error::Constraints(self.0))
        }
    }
}
