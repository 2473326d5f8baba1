use std::f64::consts::{FRAC_PI_2, PI};

use crate::bloch_messiah::cz_sequence;
use crate::cluster::protocols::{frequency_links, temporal_links};
use crate::cluster::NodeLabel;
use crate::error::{ensure_finite, Error, Result};
use crate::raman::MemoryOp;

use super::{validate, ArchitectureConstraints, OpKind, Schedule, ScheduleEntry};

/// Default factor in `δt ≤ t_mem / margin`.
pub const DEFAULT_COHERENCE_MARGIN: f64 = 10.0;

/// Clock of the first temporal link of a channel.
const STAGE_B_START: usize = 4;
/// Clock of the first frequency link at `t = 0, f = 0`.
const STAGE_C_START: usize = 10;
/// Clock offset between consecutive frequency-link triples.
const STAGE_C_STRIDE: usize = 6;

/// [`compile_with_margin`] with the default coherence margin.
pub fn compile(d: usize, n: usize, constraints: ArchitectureConstraints, dt: f64) -> Result<Schedule> {
    compile_with_margin(d, n, constraints, dt, DEFAULT_COHERENCE_MARGIN)
}

/// Compiles the `d × 2n` lattice into a memory-chain schedule.
///
/// Fails if `d > ⌊δ_full·δt⌋` or `δt > t_mem / margin`; warns when `d`
/// exceeds half the channel bound.
pub fn compile_with_margin(
    d: usize,
    n: usize,
    constraints: ArchitectureConstraints,
    dt: f64,
    margin: f64,
) -> Result<Schedule> {
    if d == 0 || n < 2 {
        return Err(Error::Config(format!("schedule needs d ≥ 1 and n ≥ 2, got d={d}, n={n}")));
    }
    ensure_finite("dt", dt)?;
    ensure_finite("margin", margin)?;
    if dt <= 0.0 || margin <= 0.0 {
        return Err(Error::Config("dt and margin must be positive".into()));
    }
    let constraints = ArchitectureConstraints::new(constraints.t_mem, constraints.delta_full)?;
    let bound = constraints.max_channels(dt);
    if d > bound {
        return Err(Error::Constraint(format!(
            "time-bandwidth bound violated: d = {d} > ⌊δ_full·δt⌋ = ⌊{:e} · {:e}⌋ = {bound}",
            constraints.delta_full, dt
        )));
    }
    if dt > constraints.t_mem / margin {
        return Err(Error::Constraint(format!(
            "coherence bound violated: δt = {dt:e} s > t_mem/{margin} = {:e} s",
            constraints.t_mem / margin
        )));
    }
    let mut warnings = Vec::new();
    if 2 * d > bound {
        warnings.push(format!(
            "d = {d} is above half the time-bandwidth bound ⌊δ_full·δt⌋ = {bound}; four-wave mixing noise may be significant"
        ));
    }

    let mut b = Builder::default();
    for f in 0..d {
        for k in 0..n {
            b.push(f, 2 * k, OpKind::TmsCreate, f, 2 * k, 0.0, 0.0);
            b.push(f, 2 * k + 1, OpKind::BsReadout, f, 2 * k + 1, FRAC_PI_2, 0.0);
        }
    }
    let params = CzParams::new();
    for (q, p) in temporal_links(d, n) {
        // q = (f, 2k + 1)
        b.cz_triple(d + 3 * q.freq, STAGE_B_START + q.time - 1, p, q, &params);
    }
    for (q, p) in frequency_links(d, n) {
        let f = q.freq;
        let clock = q.time + STAGE_C_START + STAGE_C_STRIDE * f;
        b.cz_triple(4 * d + 3 * f, clock, p, q, &params);
    }

    let schedule = Schedule {
        d,
        n,
        dt,
        constraints,
        entries: b.finish(),
        warnings,
    };
    let report = validate(&schedule);
    if !report.valid {
        return Err(Error::Schedule(report.diagnostics.join("; ")));
    }
    Ok(schedule)
}

struct CzParams {
    phi: f64,
    theta1: f64,
    r: f64,
    psi: f64,
    theta2: f64,
}

impl CzParams {
    fn new() -> Self {
        let ops = cz_sequence().program.ops;
        let (MemoryOp::Bs { op: bs1, .. }, MemoryOp::Tms { op: tms, .. }, MemoryOp::Bs { op: bs2, .. }) =
            (ops[0], ops[1], ops[2])
        else {
            unreachable!("CZ program is BS, TMS, BS")
        };
        Self {
            phi: bs1.phi,
            theta1: bs1.theta,
            r: tms.r,
            psi: tms.psi,
            theta2: bs2.theta,
        }
    }
}

#[derive(Default)]
struct Builder {
    entries: Vec<ScheduleEntry>,
}

impl Builder {
    #[allow(clippy::too_many_arguments)]
    fn push(&mut self, memory_id: usize, time_bin: usize, op: OpKind, freq_index: usize, target_bin: usize, param: f64, phase: f64) {
        // A release and a capture by one memory in the same bin form a
        // single pass-through swap.
        if op == OpKind::BsReadin {
            if let Some(prev) = self
                .entries
                .iter_mut()
                .rev()
                .find(|e| e.memory_id == memory_id && e.time_bin == time_bin)
            {
                if prev.op == OpKind::BsReadout {
                    prev.op = OpKind::BsPassthroughHold;
                    prev.freq_index = freq_index;
                    prev.target_bin = target_bin;
                    return;
                }
            }
        }
        self.entries.push(ScheduleEntry {
            memory_id,
            time_bin,
            op,
            freq_index,
            target_bin,
            param,
            phase,
        });
    }

    /// CZ between `q` (squeezing role) and `p` on memories `base..base+3`,
    /// starting at clock `c`.
    fn cz_triple(&mut self, base: usize, c: usize, p: NodeLabel, q: NodeLabel, cz: &CzParams) {
        let (m1, m2, m3) = (base, base + 1, base + 2);
        self.push(m1, c, OpKind::BsReadin, p.freq, p.time, FRAC_PI_2, 0.0);
        self.push(m1, c + 1, OpKind::BsMix, q.freq, q.time, cz.phi, cz.theta1);
        self.push(m1, c + 1, OpKind::BsReadout, p.freq, p.time, FRAC_PI_2, 0.0);
        self.push(m2, c + 2, OpKind::BsReadin, q.freq, q.time, FRAC_PI_2, 0.0);
        self.push(m2, c + 3, OpKind::TmsMix, p.freq, p.time, cz.r, cz.psi);
        self.push(m2, c + 3, OpKind::BsReadout, q.freq, q.time, FRAC_PI_2, 0.0);
        self.push(m3, c + 4, OpKind::BsReadin, p.freq, p.time, FRAC_PI_2, 0.0);
        self.push(m3, c + 5, OpKind::BsMix, q.freq, q.time, cz.phi, cz.theta2);
        self.push(m3, c + 5, OpKind::BsReadout, p.freq, p.time, FRAC_PI_2, 0.0);
    }

    fn finish(mut self) -> Vec<ScheduleEntry> {
        self.entries.sort_by_key(|e| (e.time_bin, e.memory_id));
        self.entries
    }
}

/// Appends a measurement-routing tag for plaquette `node` at `clock`
/// (default: one bin after the last entry).
pub fn tag_measurement(schedule: &Schedule, node: NodeLabel, clock: Option<usize>) -> Result<Schedule> {
    if node.freq >= schedule.d || node.time >= schedule.n_time() {
        return Err(Error::UnknownNode(node.to_string()));
    }
    let mut out = schedule.clone();
    out.entries.push(ScheduleEntry {
        memory_id: schedule.measurement_memory(),
        time_bin: clock.unwrap_or_else(|| schedule.span()),
        op: OpKind::PiPhaseMeasureTag,
        freq_index: node.freq,
        target_bin: node.time,
        param: PI,
        phase: 0.0,
    });
    out.entries.sort_by_key(|e| e.time_bin);
    let report = validate(&out);
    if !report.valid {
        return Err(Error::Schedule(report.diagnostics.join("; ")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generous() -> ArchitectureConstraints {
        ArchitectureConstraints::new(1e-3, 1e9).unwrap()
    }

    #[test]
    fn minimal_schedule() {
        let s = compile(1, 2, generous(), 1e-6).unwrap();
        let kinds: Vec<(usize, usize, OpKind)> = s.entries.iter().map(|e| (e.memory_id, e.time_bin, e.op)).collect();
        use OpKind::*;
        assert_eq!(
            kinds,
            vec![
                (0, 0, TmsCreate),
                (0, 1, BsReadout),
                (0, 2, TmsCreate),
                (0, 3, BsReadout),
                (1, 4, BsReadin),
                (1, 5, BsMix),
                (1, 5, BsReadout),
                (2, 6, BsReadin),
                (2, 7, TmsMix),
                (2, 7, BsReadout),
                (3, 8, BsReadin),
                (3, 9, BsMix),
                (3, 9, BsReadout),
            ]
        );
        assert_eq!(s.chain_memories().len(), 4);
        assert!(s.warnings.is_empty());
    }

    #[test]
    fn frequency_links_use_passthrough() {
        let s = compile(2, 2, generous(), 1e-6).unwrap();
        assert!(s.entries.iter().any(|e| e.op == OpKind::BsPassthroughHold));
        assert_eq!(s.chain_memories().len(), 11);
    }

    #[test]
    fn time_bandwidth_error_names_bound() {
        let c = ArchitectureConstraints::new(1.0, 5.0).unwrap();
        let err = compile(10, 2, c, 1.0).unwrap_err().to_string();
        assert!(err.contains("time-bandwidth"), "{err}");
    }

    #[test]
    fn coherence_error() {
        let c = ArchitectureConstraints::new(1e-6, 1e9).unwrap();
        let err = compile(1, 2, c, 1e-6).unwrap_err().to_string();
        assert!(err.contains("coherence"), "{err}");
        assert!(compile_with_margin(1, 2, c, 1e-6, 1.0).is_ok());
    }

    #[test]
    fn warning_band() {
        let c = ArchitectureConstraints::new(100.0, 4.0).unwrap();
        let s = compile(3, 2, c, 1.0).unwrap();
        assert_eq!(s.warnings.len(), 1);
    }

    #[test]
    fn span_linear_in_n() {
        let span = |d, n| compile(d, n, generous(), 1e-6).unwrap().span();
        for d in [1, 3] {
            let step = span(d, 5) - span(d, 4);
            assert_eq!(span(d, 6) - span(d, 5), step);
            assert_eq!(step, 2);
        }
    }

    #[test]
    fn tagging() {
        let s = compile(2, 2, generous(), 1e-6).unwrap();
        let t = tag_measurement(&s, NodeLabel::new(1, 3), None).unwrap();
        assert_eq!(t.entries.len(), s.entries.len() + 1);
        assert_eq!(t.chain_memories(), s.chain_memories());
        assert!(tag_measurement(&s, NodeLabel::new(2, 0), None).is_err());
    }
}
