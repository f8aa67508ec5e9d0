//! Flat result records and their CSV / JSON Lines encodings.
//!
//! CSV cells carry 12 significant digits so reruns diff cleanly; JSON carries
//! every bit of each `f64`.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::bargaining::{BargainOutcome, OracleSolution};
use crate::lab::{Evaluation, SweepRecord, TheoremReport};

/// Significant digits written to CSV.
pub const CSV_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One output row: scenario inputs, the equilibria that were computed, the
/// regime comparison and optional oracle cross-checks. Absent values are
/// empty CSV cells / JSON `null`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRecord {
    pub id: String,
    pub status: String,
    pub t_m: Option<f64>,
    pub t_f: Option<f64>,
    pub t_l: Option<f64>,
    pub t_s: Option<f64>,
    pub alpha: Option<f64>,
    pub smd_t_star: Option<f64>,
    pub smd_m_min: Option<f64>,
    pub smd_m_max: Option<f64>,
    pub smd_m_star: Option<f64>,
    pub smd_gov_surplus: Option<f64>,
    pub smd_lobby_surplus: Option<f64>,
    pub pr_ideal: Option<f64>,
    pub pr_t_star: Option<f64>,
    pub pr_m_min: Option<f64>,
    pub pr_m_max: Option<f64>,
    pub pr_m_star: Option<f64>,
    pub pr_gov_surplus: Option<f64>,
    pub pr_lobby_surplus: Option<f64>,
    /// Large party's payoff at the PR equilibrium.
    pub pr_large_payoff: Option<f64>,
    pub pr_small_payoff: Option<f64>,
    pub tariff_gap: Option<f64>,
    pub transfer_gap: Option<f64>,
    pub holds: Option<bool>,
    pub smd_oracle_t: Option<f64>,
    pub smd_oracle_m: Option<f64>,
    pub pr_oracle_t: Option<f64>,
    pub pr_oracle_m: Option<f64>,
    /// Largest absolute oracle/closed-form difference in the row.
    pub oracle_max_delta: Option<f64>,
}

type Getter = fn(&ResultRecord) -> Option<f64>;
type Setter = fn(&mut ResultRecord, Option<f64>);

macro_rules! columns {
    ($name:ident: $($field:ident),* $(,)?) => {
        const $name: &[(&str, Getter, Setter)] = &[
            $((stringify!($field), |r| r.$field, |r, v| r.$field = v)),*
        ];
    };
}

columns!(NUMERIC:
    t_m, t_f, t_l, t_s, alpha,
    smd_t_star, smd_m_min, smd_m_max, smd_m_star, smd_gov_surplus, smd_lobby_surplus,
    pr_ideal, pr_t_star, pr_m_min, pr_m_max, pr_m_star, pr_gov_surplus, pr_lobby_surplus,
    pr_large_payoff, pr_small_payoff,
    tariff_gap, transfer_gap,
);

columns!(ORACLE: smd_oracle_t, smd_oracle_m, pr_oracle_t, pr_oracle_m, oracle_max_delta);

/// Column names in output order.
pub fn header() -> Vec<&'static str> {
    let mut cols = vec!["id", "status"];
    cols.extend(NUMERIC.iter().map(|c| c.0));
    cols.push("holds");
    cols.extend(ORACLE.iter().map(|c| c.0));
    cols
}

/// `x` rounded to [`CSV_DIGITS`] significant digits, printed in the shortest
/// form that reads back to the rounded value.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{:.*e}", CSV_DIGITS - 1, x).parse().expect("valid float");
    // avoid "-0"
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{rounded}")
}

#[derive(Debug, thiserror::Error)]
pub enum RecordError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("header mismatch: expected `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error("record {row}, column `{column}`: cannot parse `{value}`")]
    Cell { row: usize, column: &'static str, value: String },
}

impl ResultRecord {
    fn with_outcome(&mut self, smd: Option<&BargainOutcome>, pr: Option<&BargainOutcome>) {
        if let Some(o) = smd {
            self.smd_t_star = Some(o.t_star);
            self.smd_m_min = Some(o.m_min);
            self.smd_m_max = Some(o.m_max);
            self.smd_m_star = Some(o.m_star);
            self.smd_gov_surplus = Some(o.gov_surplus);
            self.smd_lobby_surplus = Some(o.lobby_surplus);
        }
        if let Some(o) = pr {
            self.pr_ideal = Some(o.gov_ideal);
            self.pr_t_star = Some(o.t_star);
            self.pr_m_min = Some(o.m_min);
            self.pr_m_max = Some(o.m_max);
            self.pr_m_star = Some(o.m_star);
            self.pr_gov_surplus = Some(o.gov_surplus);
            self.pr_lobby_surplus = Some(o.lobby_surplus);
        }
    }

    fn with_report(&mut self, r: &TheoremReport) {
        self.tariff_gap = Some(r.tariff_gap);
        self.transfer_gap = Some(r.transfer_gap);
        self.holds = Some(r.holds);
    }

    /// Record for an evaluated scenario. `smd`/`pr` select which regimes to
    /// report; the comparison is filled only when both are.
    pub fn from_evaluation(ev: &Evaluation, smd: bool, pr: bool) -> Self {
        let s = &ev.scenario;
        let mut rec = ResultRecord {
            id: s.tag.clone(),
            status: "ok".into(),
            t_m: Some(s.t_m),
            t_f: Some(s.t_f),
            ..Default::default()
        };
        if let Some(c) = &s.coalition {
            rec.t_l = Some(c.t_l);
            rec.t_s = Some(c.t_s);
            rec.alpha = Some(c.alpha);
        }
        let pr_outcome = ev.pr.as_ref().filter(|_| pr);
        rec.with_outcome(smd.then_some(&ev.smd), pr_outcome);
        if let (Some(c), Some(o)) = (&s.coalition, pr_outcome) {
            rec.pr_large_payoff = Some(c.large_payoff(o.t_star, o.m_star));
            rec.pr_small_payoff = Some(c.small_payoff(o.t_star, o.m_star));
        }
        if let (true, Some(r)) = (smd && pr, &ev.report) {
            rec.with_report(r);
        }
        rec
    }

    pub fn from_sweep(r: &SweepRecord) -> Self {
        match &r.result {
            Ok(ev) => ResultRecord::from_evaluation(ev, true, true),
            Err(_) => {
                use crate::lab::Param;
                ResultRecord {
                    id: format!("sweep#{}", r.index),
                    status: r.skip_reason().unwrap_or_default(),
                    t_m: r.point.get(Param::TM),
                    t_f: r.point.get(Param::TF),
                    t_l: r.point.get(Param::TL),
                    t_s: r.point.get(Param::TS),
                    alpha: r.point.get(Param::Alpha),
                    ..Default::default()
                }
            }
        }
    }

    /// Adds oracle solutions and returns the largest deviation from the
    /// closed forms already in the record.
    pub fn attach_oracle(&mut self, smd: Option<&OracleSolution>, pr: Option<&OracleSolution>) -> f64 {
        let mut worst: f64 = 0.0;
        let mut delta = |a: Option<f64>, b: f64| {
            if let Some(a) = a {
                worst = worst.max((a - b).abs());
            }
        };
        if let Some(o) = smd {
            self.smd_oracle_t = Some(o.t);
            self.smd_oracle_m = Some(o.m);
            delta(self.smd_t_star, o.t);
            delta(self.smd_m_star, o.m);
        }
        if let Some(o) = pr {
            self.pr_oracle_t = Some(o.t);
            self.pr_oracle_m = Some(o.m);
            delta(self.pr_t_star, o.t);
            delta(self.pr_m_star, o.m);
        }
        self.oracle_max_delta = Some(worst);
        worst
    }

    fn to_row(&self) -> Vec<String> {
        let num = |v: Option<f64>| v.map(format_sig).unwrap_or_default();
        let mut row = vec![self.id.clone(), self.status.clone()];
        row.extend(NUMERIC.iter().map(|c| num((c.1)(self))));
        row.push(self.holds.map(|b| b.to_string()).unwrap_or_default());
        row.extend(ORACLE.iter().map(|c| num((c.1)(self))));
        row
    }

    fn from_row(row: &csv::StringRecord, index: usize) -> Result<Self, RecordError> {
        let cell = |k: usize| row.get(k).unwrap_or("");
        let mut rec = ResultRecord { id: cell(0).to_string(), status: cell(1).to_string(), ..Default::default() };
        let parse = |k: usize, column: &'static str| -> Result<Option<f64>, RecordError> {
            let v = cell(k);
            if v.is_empty() {
                return Ok(None);
            }
            v.parse().map(Some).map_err(|_| RecordError::Cell { row: index, column, value: v.into() })
        };
        let mut k = 2;
        for (name, _, set) in NUMERIC {
            set(&mut rec, parse(k, name)?);
            k += 1;
        }
        rec.holds = match cell(k) {
            "" => None,
            "true" => Some(true),
            "false" => Some(false),
            other => return Err(RecordError::Cell { row: index, column: "holds", value: other.into() }),
        };
        k += 1;
        for (name, _, set) in ORACLE {
            set(&mut rec, parse(k, name)?);
            k += 1;
        }
        Ok(rec)
    }
}

pub fn write_records<W: Write>(out: W, records: &[ResultRecord], format: Format) -> Result<(), RecordError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(header())?;
            for r in records {
                w.write_record(r.to_row())?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            for r in records {
                serde_json::to_writer(&mut out, r).map_err(|e| RecordError::Json { line: 0, source: e })?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

pub fn read_records<R: BufRead>(input: R, format: Format) -> Result<Vec<ResultRecord>, RecordError> {
    match format {
        Format::Csv => {
            let mut rdr = csv::Reader::from_reader(input);
            let found: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
            let expected = header();
            if found != expected {
                return Err(RecordError::Header { expected: expected.join(","), found: found.join(",") });
            }
            rdr.records().enumerate().map(|(i, row)| ResultRecord::from_row(&row?, i + 1)).collect()
        }
        Format::Json => input
            .lines()
            .enumerate()
            .filter(|(_, l)| !matches!(l, Ok(s) if s.trim().is_empty()))
            .map(|(i, line)| serde_json::from_str(&line?).map_err(|e| RecordError::Json { line: i + 1, source: e }))
            .collect(),
    }
}
