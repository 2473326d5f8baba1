use std::collections::{BTreeMap, VecDeque};

use crate::cluster::protocols::{apply_cz, check_lattice, generate_pair, pi_phase_route, ProtocolResult};
use crate::cluster::NodeLabel;
use crate::error::{Error, Result};

use super::validate::replay_order;
use super::{validate, OpKind, Schedule};

/// Replays a schedule through the cluster protocols.
///
/// A stage-a creation followed by its read-out generates a two-qumode
/// cluster. In a link triple, the first memory's `BS_MIX` opens a CZ between
/// its stored qumode and the target, and the last memory's release completes
/// it; the CZ is applied at completion. Measurement tags apply the `π`
/// phase routing.
pub fn execute(schedule: &Schedule, r: f64, delta_eta: f64) -> Result<ProtocolResult> {
    let report = validate(schedule);
    if !report.valid {
        return Err(Error::Schedule(report.diagnostics.join("; ")));
    }
    let (d, n) = (schedule.d, schedule.n);
    check_lattice(d, n)?;
    let measurement = schedule.measurement_memory();

    let mut res = ProtocolResult::vacuum_lattice(d, n)?;
    let mut stored: BTreeMap<usize, NodeLabel> = BTreeMap::new();
    let mut open: BTreeMap<usize, VecDeque<(NodeLabel, NodeLabel)>> = BTreeMap::new();

    for e in replay_order(schedule) {
        let target = NodeLabel::new(e.freq_index, e.target_bin);
        let triple = (e.memory_id >= d && e.memory_id < measurement).then(|| ((e.memory_id - d) / 3, (e.memory_id - d) % 3));
        match e.op {
            OpKind::TmsCreate | OpKind::BsReadin => {
                stored.insert(e.memory_id, target);
            }
            OpKind::BsMix => {
                if let Some((t, 0)) = triple {
                    let held = stored[&e.memory_id];
                    open.entry(t).or_default().push_back((held, target));
                }
            }
            OpKind::TmsMix => {}
            OpKind::BsReadout | OpKind::BsPassthroughHold => {
                let held = stored.remove(&e.memory_id).expect("validated occupancy");
                if e.memory_id < d {
                    res = generate_pair(&res, held, target, r, delta_eta)?;
                } else if let Some((t, 2)) = triple {
                    let (p, q) = open
                        .get_mut(&t)
                        .and_then(|queue| queue.pop_front())
                        .ok_or_else(|| Error::Schedule(format!("memory {} completes a CZ that was never opened", e.memory_id)))?;
                    res = apply_cz(&res, q, p, delta_eta)?;
                }
                if e.op == OpKind::BsPassthroughHold {
                    stored.insert(e.memory_id, target);
                }
            }
            OpKind::PiPhaseMeasureTag => {
                let mode = res.mode(target)?;
                res.state = pi_phase_route(&res.state, mode)?;
            }
        }
    }
    if let Some((t, q)) = open.iter().find(|(_, q)| !q.is_empty()) {
        return Err(Error::Schedule(format!("triple {t} leaves {} CZ link(s) incomplete", q.len())));
    }
    Ok(res)
}
