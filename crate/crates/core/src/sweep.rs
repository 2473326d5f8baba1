//! `(dB, δη)` fidelity grids comparing closed forms with the numeric
//! pipelines, and their CSV/JSON export.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cluster::{
    cz_fidelity_closed_form, cz_fidelity_numeric, two_qumode_fidelity_closed_form,
    two_qumode_fidelity_numeric,
};
use crate::error::{Error, Result};

/// Largest `|F_closed − F_numeric|` accepted by [`GridReport::passes`].
pub const AGREEMENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    TwoQumode,
    Cz,
}

impl Protocol {
    pub fn name(&self) -> &'static str {
        match self {
            Protocol::TwoQumode => "two_qumode",
            Protocol::Cz => "cz",
        }
    }

    pub fn closed_form(&self, db: f64, delta_eta: f64) -> Result<f64> {
        match self {
            Protocol::TwoQumode => two_qumode_fidelity_closed_form(db, delta_eta),
            Protocol::Cz => cz_fidelity_closed_form(db, delta_eta),
        }
    }

    pub fn numeric(&self, db: f64, delta_eta: f64) -> Result<f64> {
        match self {
            Protocol::TwoQumode => two_qumode_fidelity_numeric(db, delta_eta),
            Protocol::Cz => cz_fidelity_numeric(db, delta_eta),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Linear,
    Log,
}

/// `steps` points from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub scale: Scale,
}

impl Axis {
    pub fn new(min: f64, max: f64, steps: usize, scale: Scale) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::Config("axis bounds must be finite".into()));
        }
        if steps == 0 {
            return Err(Error::Config("steps must be at least 1".into()));
        }
        if min > max {
            return Err(Error::Config(format!("axis range is reversed: {min} > {max}")));
        }
        if scale == Scale::Log && min <= 0.0 {
            return Err(Error::Config(format!("log axis needs a positive minimum, got {min}")));
        }
        if steps == 1 && min != max {
            return Err(Error::Config("a single step needs min = max".into()));
        }
        Ok(Self { min, max, steps, scale })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                let x = k as f64 / last;
                let v = match self.scale {
                    Scale::Linear => self.min + (self.max - self.min) * x,
                    Scale::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * x).exp(),
                };
                if k + 1 == self.steps {
                    self.max
                } else {
                    v
                }
            })
            .collect()
    }
}

/// A fidelity grid over squeezing (dB) and transfer loss `δη`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub protocol: Protocol,
    pub db: Axis,
    pub delta_eta: Axis,
}

impl SweepConfig {
    pub fn new(protocol: Protocol, db: Axis, delta_eta: Axis) -> Result<Self> {
        if db.min < 0.0 {
            return Err(Error::Config(format!("squeezing must be non-negative, got {} dB", db.min)));
        }
        if delta_eta.min < 0.0 || delta_eta.max > 1.0 {
            return Err(Error::Config("delta_eta must lie in [0, 1]".into()));
        }
        Ok(Self { protocol, db, delta_eta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub db: f64,
    pub delta_eta: f64,
    pub f_closed: f64,
    pub f_numeric: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub config: SweepConfig,
    pub rows: Vec<GridRow>,
}

impl GridReport {
    pub fn max_abs_diff(&self) -> f64 {
        self.rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max)
    }

    pub fn passes(&self) -> bool {
        self.rows.iter().all(|r| r.abs_diff <= AGREEMENT_TOL)
    }
}

fn evaluate_point(protocol: Protocol, db: f64, delta_eta: f64) -> Result<GridRow> {
    let f_closed = protocol.closed_form(db, delta_eta)?;
    let f_numeric = protocol.numeric(db, delta_eta)?;
    Ok(GridRow {
        db,
        delta_eta,
        f_closed,
        f_numeric,
        abs_diff: (f_closed - f_numeric).abs(),
    })
}

/// Evaluates the grid, dB-major. `jobs = 0` uses the global rayon pool;
/// rows come back in grid order regardless of scheduling.
pub fn evaluate(config: &SweepConfig, jobs: usize) -> Result<GridReport> {
    let points: Vec<(f64, f64)> = config
        .db
        .points()
        .into_iter()
        .flat_map(|db| config.delta_eta.points().into_iter().map(move |e| (db, e)))
        .collect();
    let run = || -> Result<Vec<GridRow>> {
        points
            .par_iter()
            .map(|&(db, e)| evaluate_point(config.protocol, db, e))
            .collect()
    };
    let rows = if jobs == 0 {
        run()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(run)?
    };
    Ok(GridReport { config: *config, rows })
}

fn header_lines(config: &SweepConfig) -> Vec<String> {
    let axis = |a: &Axis| {
        format!(
            "{} to {} in {} {} steps",
            a.min,
            a.max,
            a.steps,
            match a.scale {
                Scale::Linear => "linear",
                Scale::Log => "log",
            }
        )
    };
    vec![
        format!("protocol: {}", config.protocol.name()),
        format!("dB: {}", axis(&config.db)),
        format!("delta_eta: {}", axis(&config.delta_eta)),
        "fidelity: squared Uhlmann fidelity against the lossless protocol at equal squeezing".into(),
        "conventions: quadratures (q1,p1,q2,p2,...), vacuum variance 1/2, r = dB*ln(10)/20".into(),
        format!("agreement tolerance: {AGREEMENT_TOL:e}"),
    ]
}

/// CSV with `#`-prefixed header lines recording parameters and conventions.
pub fn write_csv<W: Write>(report: &GridReport, mut out: W) -> Result<()> {
    for line in header_lines(&report.config) {
        writeln!(out, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["db", "delta_eta", "f_closed", "f_numeric", "abs_diff"])?;
    for r in &report.rows {
        w.write_record([
            r.db.to_string(),
            r.delta_eta.to_string(),
            r.f_closed.to_string(),
            r.f_numeric.to_string(),
            r.abs_diff.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// JSON document with a `header` array and the report.
pub fn write_json<W: Write>(report: &GridReport, out: W) -> Result<()> {
    #[derive(Serialize)]
    struct Doc<'a> {
        header: Vec<String>,
        #[serde(flatten)]
        report: &'a GridReport,
    }
    serde_json::to_writer_pretty(
        out,
        &Doc {
            header: header_lines(&report.config),
            report,
        },
    )?;
    Ok(())
}
