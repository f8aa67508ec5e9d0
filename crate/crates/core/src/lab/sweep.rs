use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Evaluation, Scenario};
use crate::actors::PrCoalition;
use crate::error::{Error, Result, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    TM,
    TF,
    TL,
    TS,
    Alpha,
}

impl Param {
    pub const ALL: [Param; 5] = [Param::TM, Param::TF, Param::TL, Param::TS, Param::Alpha];

    pub fn name(self) -> &'static str {
        match self {
            Param::TM => "t_m",
            Param::TF => "t_f",
            Param::TL => "t_l",
            Param::TS => "t_s",
            Param::Alpha => "alpha",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Param::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Sweep(format!("unknown parameter `{s}`")))
    }
}

/// Inclusive range `start, start + step, ...` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub param: Param,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepAxis {
    /// Parses `name=start:stop:step`.
    pub fn parse(s: &str) -> Result<Self> {
        let (name, range) =
            s.split_once('=').ok_or_else(|| Error::Sweep(format!("expected name=start:stop:step, got `{s}`")))?;
        let parts: Vec<&str> = range.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(Error::Sweep(format!("expected start:stop:step, got `{range}`")));
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| Error::Sweep(format!("`{v}` is not a number")));
        Ok(SweepAxis { param: name.trim().parse()?, start: num(start)?, stop: num(stop)?, step: num(step)? })
    }

    fn validate(&self) -> Result<()> {
        let SweepAxis { param, start, stop, step } = *self;
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::Sweep(format!("{param}: range must be finite")));
        }
        if !(stop > start) {
            return Err(Error::Sweep(format!("{param}: empty range {start}:{stop}")));
        }
        if !(step > 0.0) {
            return Err(Error::Sweep(format!("{param}: step must be positive, got {step}")));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        // the small slack keeps `stop` when (stop - start)/step lands just
        // under an integer in floating point
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| self.start + k as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axes: Vec<SweepAxis>,
    pub fixed: Vec<(Param, f64)>,
}

impl SweepSpec {
    pub fn new(axes: Vec<SweepAxis>) -> Self {
        SweepSpec { axes, fixed: Vec::new() }
    }

    pub fn fix(mut self, param: Param, value: f64) -> Self {
        self.fixed.push((param, value));
        self
    }

    fn validate(&self) -> Result<()> {
        if self.axes.is_empty() {
            return Err(Error::Sweep("no parameter to sweep".into()));
        }
        let mut seen = [false; 5];
        let names = self.axes.iter().map(|a| a.param).chain(self.fixed.iter().map(|f| f.0));
        for p in names {
            if std::mem::replace(&mut seen[p.index()], true) {
                return Err(Error::Sweep(format!("{p} given more than once")));
            }
        }
        for axis in &self.axes {
            axis.validate()?;
        }
        if let Some((p, v)) = self.fixed.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Sweep(format!("{p} = {v} is not finite")));
        }
        for p in [Param::TM, Param::TF] {
            if !seen[p.index()] {
                return Err(Error::Sweep(format!("{p} is neither swept nor fixed")));
            }
        }
        let coalition = [Param::TL, Param::TS, Param::Alpha].map(|p| seen[p.index()]);
        if coalition.iter().any(|&b| b) && !coalition.iter().all(|&b| b) {
            return Err(Error::Sweep("t_l, t_s and alpha must be given together".into()));
        }
        Ok(())
    }
}

/// Parameter values at one grid point, indexed like [`Param::ALL`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub values: [Option<f64>; 5],
}

impl SweepPoint {
    pub fn get(&self, p: Param) -> Option<f64> {
        self.values[p.index()]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub index: usize,
    pub point: SweepPoint,
    /// The evaluated scenario, or every constraint the point violates.
    pub result: std::result::Result<Evaluation, Vec<Violation>>,
}

impl SweepRecord {
    /// `skipped: <tags>` for invalid points.
    pub fn skip_reason(&self) -> Option<String> {
        self.result.as_ref().err().map(|vs| {
            let tags: Vec<_> = vs.iter().map(Violation::tag).collect();
            format!("skipped: {}", tags.join(","))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub spec: SweepSpec,
    pub records: Vec<SweepRecord>,
}

fn evaluate_point(index: usize, point: SweepPoint) -> SweepRecord {
    let v = |p: Param| point.get(p);
    let t_m = v(Param::TM).expect("validated");
    let t_f = v(Param::TF).expect("validated");
    let coalition = match (v(Param::TL), v(Param::TS), v(Param::Alpha)) {
        (Some(l), Some(s), Some(a)) => match PrCoalition::new(l, s, a) {
            Ok(c) => Some(c),
            Err(e) => {
                return SweepRecord { index, point, result: Err(e.violations().to_vec()) };
            }
        },
        _ => None,
    };
    let result = Scenario::new(t_m, t_f, coalition, format!("sweep#{index}"))
        .map(|s| s.evaluate())
        .map_err(|e| e.violations().to_vec());
    SweepRecord { index, point, result }
}

/// Evaluates every point of the Cartesian product of the axes, the first
/// axis varying slowest. Records come back in grid order.
pub fn sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let mut points = vec![SweepPoint { values: [None; 5] }];
    for &(p, v) in &spec.fixed {
        points[0].values[p.index()] = Some(v);
    }
    for axis in &spec.axes {
        let values = axis.values();
        points = points
            .iter()
            .flat_map(|base| {
                values.iter().map(move |&x| {
                    let mut next = *base;
                    next.values[axis.param.index()] = Some(x);
                    next
                })
            })
            .collect();
    }
    let records = points.into_par_iter().enumerate().map(|(i, p)| evaluate_point(i, p)).collect();
    Ok(SweepTable { spec: spec.clone(), records })
}
