use std::collections::{BTreeMap, HashMap};

use super::{memory_count, OpKind, Schedule, ScheduleEntry};

/// Outcome of [`validate`]; `diagnostics` is empty iff `valid`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

/// Entries in replay order: by clock, then by position in the schedule.
pub(crate) fn replay_order(schedule: &Schedule) -> Vec<ScheduleEntry> {
    let mut entries = schedule.entries.clone();
    entries.sort_by_key(|e| e.time_bin);
    entries
}

/// Checks single occupancy per memory, hold times against `t_mem`,
/// plaquette collisions between memories, the grid bounds and the size of
/// the memory chain.
pub fn validate(schedule: &Schedule) -> ValidationReport {
    let mut diag = Vec::new();
    let Ok(expected) = memory_count(schedule.d) else {
        return ValidationReport {
            valid: false,
            diagnostics: vec!["d must be at least 1".into()],
        };
    };
    let measurement = schedule.measurement_memory();
    let n_time = schedule.n_time();

    // Stored plaquette (or the creating plaquette) and capture clock.
    let mut occupancy: BTreeMap<usize, Option<(usize, usize, usize)>> = BTreeMap::new();
    let mut touched: HashMap<(usize, usize, usize), usize> = HashMap::new();

    for e in replay_order(schedule) {
        if e.freq_index >= schedule.d || e.target_bin >= n_time {
            diag.push(format!(
                "memory {} at bin {}: target ({}, {}) outside the {}×{} lattice",
                e.memory_id, e.time_bin, e.freq_index, e.target_bin, schedule.d, n_time
            ));
            continue;
        }
        if e.memory_id > measurement {
            diag.push(format!("memory id {} outside the chain of {expected}", e.memory_id));
            continue;
        }
        if (e.memory_id == measurement) != (e.op == OpKind::PiPhaseMeasureTag) {
            diag.push(format!(
                "memory {} at bin {}: {} is reserved for measurement routing (id {measurement})",
                e.memory_id,
                e.time_bin,
                e.op.name()
            ));
        }
        if !e.param.is_finite() || !e.phase.is_finite() {
            diag.push(format!("memory {} at bin {}: non-finite control parameter", e.memory_id, e.time_bin));
        }

        let key = (e.time_bin, e.freq_index, e.target_bin);
        match touched.get(&key) {
            Some(&other) if other != e.memory_id => diag.push(format!(
                "plaquette collision at bin {}: ({}, {}) addressed by memories {other} and {}",
                e.time_bin, e.freq_index, e.target_bin, e.memory_id
            )),
            _ => {
                touched.insert(key, e.memory_id);
            }
        }

        let slot = occupancy.entry(e.memory_id).or_insert(None);
        let target = (e.freq_index, e.target_bin);
        let release = |slot: &mut Option<(usize, usize, usize)>, diag: &mut Vec<String>| {
            if let Some((_, _, since)) = slot.take() {
                let hold = (e.time_bin - since) as f64 * schedule.dt;
                if hold > schedule.constraints.t_mem {
                    diag.push(format!(
                        "memory {} holds a qumode for {hold:e} s > t_mem = {:e} s",
                        e.memory_id, schedule.constraints.t_mem
                    ));
                }
            }
        };
        match e.op {
            OpKind::TmsCreate | OpKind::BsReadin => {
                if slot.is_some() {
                    diag.push(format!(
                        "occupancy: memory {} at bin {} already holds a qumode ({})",
                        e.memory_id,
                        e.time_bin,
                        e.op.name()
                    ));
                }
                *slot = Some((target.0, target.1, e.time_bin));
            }
            OpKind::BsReadout => {
                if slot.is_none() {
                    diag.push(format!("occupancy: memory {} at bin {} reads out while empty", e.memory_id, e.time_bin));
                }
                release(slot, &mut diag);
            }
            OpKind::BsPassthroughHold => {
                if slot.is_none() {
                    diag.push(format!("occupancy: memory {} at bin {} swaps while empty", e.memory_id, e.time_bin));
                }
                release(slot, &mut diag);
                *slot = Some((target.0, target.1, e.time_bin));
            }
            OpKind::BsMix | OpKind::TmsMix => match *slot {
                None => diag.push(format!(
                    "occupancy: memory {} at bin {} interacts while empty ({})",
                    e.memory_id,
                    e.time_bin,
                    e.op.name()
                )),
                Some((f, t, _)) if (f, t) == target => diag.push(format!(
                    "memory {} at bin {} interacts its stored qumode with itself",
                    e.memory_id, e.time_bin
                )),
                _ => {}
            },
            OpKind::PiPhaseMeasureTag => {
                if slot.is_some() {
                    diag.push(format!("memory {} must be empty for measurement routing", e.memory_id));
                }
            }
        }
    }

    for (id, slot) in &occupancy {
        if slot.is_some() {
            diag.push(format!("occupancy: memory {id} still holds a qumode at the end"));
        }
    }
    let chain = schedule.chain_memories().len();
    if chain != expected {
        diag.push(format!("memory count: {chain} distinct chain memories, expected 7d − 3 = {expected}"));
    }

    ValidationReport {
        valid: diag.is_empty(),
        diagnostics: diag,
    }
}
