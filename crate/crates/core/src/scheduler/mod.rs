//! Lowering of a `d × 2n` cluster lattice to a program for a linear chain of
//! `7d − 3` Raman memories, with resource and timing checks.
//!
//! Memory ids are allocated per stage: `[0, d)` create two-qumode clusters,
//! `d + 3f + role` form the temporal-link triple of channel `f`, and
//! `4d + 3f + role` form the frequency-link triple between channels `f` and
//! `f + 1`. The role is 0 for the first beam splitter, 1 for the squeezer and
//! 2 for the last beam splitter. Id `7d − 3` is the measurement-routing
//! memory, which is not part of the generation chain.
//!
//! `time_bin` of an entry is the clock bin (of width `dt`) at which the
//! memory acts; `(freq_index, target_bin)` is the addressed plaquette.

mod compile;
mod execute;
mod io;
mod validate;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

pub use compile::{compile, compile_with_margin, tag_measurement, DEFAULT_COHERENCE_MARGIN};
pub use execute::execute;
pub use io::{from_json, from_jsonl, read_json, read_jsonl, to_json, to_jsonl, write_json, write_jsonl};
pub use validate::{validate, ValidationReport};

/// Kind of memory operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OpKind {
    /// Squeezes a vacuum field plaquette against the empty memory and keeps
    /// the partner qumode.
    TmsCreate,
    /// Full-swap storage of a field qumode.
    BsReadin,
    /// Full-swap release of the stored qumode into a plaquette.
    BsReadout,
    /// Partial beam splitter between the stored qumode and a field qumode.
    BsMix,
    /// Two-mode squeezer between the stored qumode and a field qumode.
    TmsMix,
    /// Full swap that releases the stored qumode and stores the target.
    BsPassthroughHold,
    /// Routes the target plaquette through a `π` phase before measurement.
    PiPhaseMeasureTag,
}

impl OpKind {
    pub fn name(&self) -> &'static str {
        match self {
            OpKind::TmsCreate => "TMS_CREATE",
            OpKind::BsReadin => "BS_READIN",
            OpKind::BsReadout => "BS_READOUT",
            OpKind::BsMix => "BS_MIX",
            OpKind::TmsMix => "TMS_MIX",
            OpKind::BsPassthroughHold => "BS_PASSTHROUGH_HOLD",
            OpKind::PiPhaseMeasureTag => "PI_PHASE_MEASURE_TAG",
        }
    }
}

/// A time-frequency tile; `dt · dw ≥ 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plaquette {
    pub freq_index: usize,
    pub time_bin: usize,
    pub dt: f64,
    pub dw: f64,
}

impl Plaquette {
    pub fn new(freq_index: usize, time_bin: usize, dt: f64, dw: f64) -> Result<Self> {
        ensure_finite("dt", dt)?;
        ensure_finite("dw", dw)?;
        if !(dt > 0.0 && dw > 0.0) || dt * dw < 0.5 {
            return Err(Error::Constraint(format!(
                "plaquette violates δt·δω ≥ 1/2: {dt:e} · {dw:e} = {:e}",
                dt * dw
            )));
        }
        Ok(Self {
            freq_index,
            time_bin,
            dt,
            dw,
        })
    }
}

/// One memory operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub memory_id: usize,
    pub time_bin: usize,
    pub op: OpKind,
    pub freq_index: usize,
    pub target_bin: usize,
    /// Mixing angle `φ` or squeezing `r`, depending on `op`.
    pub param: f64,
    /// Control-field phase.
    pub phase: f64,
}

/// Memory coherence time and accessible bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArchitectureConstraints {
    /// Seconds.
    pub t_mem: f64,
    /// Rad/s.
    pub delta_full: f64,
}

impl ArchitectureConstraints {
    pub fn new(t_mem: f64, delta_full: f64) -> Result<Self> {
        for (name, v) in [("t_mem", t_mem), ("delta_full", delta_full)] {
            ensure_finite(name, v)?;
            if v <= 0.0 {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    min: f64::MIN_POSITIVE,
                    max: f64::MAX,
                });
            }
        }
        Ok(Self { t_mem, delta_full })
    }

    /// `⌊δ_full · δt⌋`, the number of addressable frequency channels.
    pub fn max_channels(&self, dt: f64) -> usize {
        (self.delta_full * dt).floor().max(0.0) as usize
    }
}

/// A compiled memory-chain program.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub d: usize,
    pub n: usize,
    pub dt: f64,
    pub constraints: ArchitectureConstraints,
    pub entries: Vec<ScheduleEntry>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl Schedule {
    /// Number of time bins per frequency channel.
    pub fn n_time(&self) -> usize {
        2 * self.n
    }

    /// Id of the measurement-routing memory.
    pub fn measurement_memory(&self) -> usize {
        7 * self.d - 3
    }

    pub fn plaquette(&self, entry: &ScheduleEntry) -> Result<Plaquette> {
        Plaquette::new(
            entry.freq_index,
            entry.target_bin,
            self.dt,
            self.constraints.delta_full / self.d as f64,
        )
    }

    /// Distinct memory ids of the generation chain.
    pub fn chain_memories(&self) -> std::collections::BTreeSet<usize> {
        self.entries
            .iter()
            .map(|e| e.memory_id)
            .filter(|&m| m != self.measurement_memory())
            .collect()
    }

    /// Last clock bin used, plus one.
    pub fn span(&self) -> usize {
        self.entries.iter().map(|e| e.time_bin + 1).max().unwrap_or(0)
    }
}

/// Memories needed for `d` frequency channels: `d + 3d + 3(d − 1) = 7d − 3`.
pub fn memory_count(d: usize) -> Result<usize> {
    let (a, b, c) = stage_memory_counts(d)?;
    Ok(a + b + c)
}

/// Memories per stage: cluster creation, temporal links, frequency links.
pub fn stage_memory_counts(d: usize) -> Result<(usize, usize, usize)> {
    if d == 0 {
        return Err(Error::Config("d must be at least 1".into()));
    }
    Ok((d, 3 * d, 3 * (d - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(memory_count(1).unwrap(), 4);
        assert_eq!(memory_count(2).unwrap(), 11);
        for d in 1..=64 {
            let (a, b, c) = stage_memory_counts(d).unwrap();
            assert_eq!(a + b + c, 7 * d - 3);
        }
        assert!(memory_count(0).is_err());
    }

    #[test]
    fn plaquette_uncertainty() {
        assert!(Plaquette::new(0, 0, 1.0, 0.5).is_ok());
        assert!(Plaquette::new(0, 0, 1.0, 0.4).is_err());
    }

    #[test]
    fn op_names_match_serde() {
        for op in [
            OpKind::TmsCreate,
            OpKind::BsReadin,
            OpKind::BsReadout,
            OpKind::BsMix,
            OpKind::TmsMix,
            OpKind::BsPassthroughHold,
            OpKind::PiPhaseMeasureTag,
        ] {
            assert_eq!(serde_json::to_string(&op).unwrap(), format!("\"{}\"", op.name()));
        }
    }

    #[test]
    fn constraints_positive() {
        assert!(ArchitectureConstraints::new(0.0, 1.0).is_err());
        assert!(ArchitectureConstraints::new(1.0, f64::NAN).is_err());
        assert_eq!(ArchitectureConstraints::new(1.0, 10.0).unwrap().max_channels(0.55), 5);
    }
}
