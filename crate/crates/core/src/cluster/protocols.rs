use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use crate::bloch_messiah::cz_sequence;
use crate::error::{ensure_finite, ensure_in_range, Error, Result};
use crate::gaussian::{GaussianState, ModeIndex};
use crate::raman::{MemoryOp, RamanBS, RamanTMS};
use crate::symplectic::SymplecticOp;

use super::graph::{ClusterGraph, NodeLabel};

/// Largest number of modes simulated with a dense covariance matrix.
pub const MAX_MODES: usize = 256;

/// Cluster-frame angle of the first qumode of every two-qumode cluster.
pub const PAIR_FRAME: f64 = FRAC_PI_2;

/// A simulated cluster: its state, graph and the node → mode map.
///
/// `frames[m]` is the rotation taking the physical quadratures of mode `m`
/// to the cluster frame in which nullifiers are `p_i − Σ_j A_ij q_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolResult {
    pub state: GaussianState,
    pub graph: ClusterGraph,
    pub mode_map: BTreeMap<NodeLabel, ModeIndex>,
    pub frames: Vec<f64>,
}

/// Transfer efficiencies of the six memory read-ins and read-outs of a CZ.
///
/// For `apply_cz(i, j)` the transfers are, in time order: `j` into the first
/// memory, `j` out of it, `i` into the squeezing memory, `i` out of it, `j`
/// into the last memory and `i` out of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CzLoss {
    Uniform(f64),
    PerTransfer([f64; 6]),
}

impl CzLoss {
    pub fn transfers(&self) -> Result<[f64; 6]> {
        let t = match *self {
            CzLoss::Uniform(x) => [x; 6],
            CzLoss::PerTransfer(t) => t,
        };
        for x in t {
            ensure_in_range("delta_eta", x, 0.0, 1.0)?;
        }
        Ok(t)
    }
}

impl From<f64> for CzLoss {
    fn from(delta_eta: f64) -> Self {
        CzLoss::Uniform(delta_eta)
    }
}

impl ProtocolResult {
    /// Wraps `state` with one node per mode, in order, and no edges.
    pub fn from_state(state: GaussianState, labels: Vec<NodeLabel>) -> Result<Self> {
        if labels.len() != state.n_modes() {
            return Err(Error::DimensionMismatch {
                expected: state.n_modes(),
                found: labels.len(),
            });
        }
        let graph = ClusterGraph::new(labels.clone())?;
        let mode_map = labels.into_iter().enumerate().map(|(k, l)| (l, ModeIndex(k))).collect();
        let frames = vec![0.0; state.n_modes()];
        Ok(Self {
            state,
            graph,
            mode_map,
            frames,
        })
    }

    /// Vacuum on a `d × 2n` plaquette lattice; mode of `(f, t)` is `f·2n + t`.
    pub fn vacuum_lattice(d: usize, n: usize) -> Result<Self> {
        check_lattice(d, n)?;
        let labels = (0..d)
            .flat_map(|f| (0..2 * n).map(move |t| NodeLabel::new(f, t)))
            .collect();
        Self::from_state(GaussianState::vacuum(2 * d * n)?, labels)
    }

    pub fn mode(&self, node: NodeLabel) -> Result<ModeIndex> {
        self.mode_map
            .get(&node)
            .copied()
            .ok_or_else(|| Error::UnknownNode(node.to_string()))
    }
}

pub(crate) fn check_lattice(d: usize, n: usize) -> Result<()> {
    if d == 0 || n < 2 {
        return Err(Error::Config(format!("lattice needs d ≥ 1 and n ≥ 2, got d={d}, n={n}")));
    }
    if 2 * d * n > MAX_MODES {
        return Err(Error::SizeGuard(format!(
            "2·d·n = {} modes exceeds the dense limit of {MAX_MODES}",
            2 * d * n
        )));
    }
    Ok(())
}

fn tms_symplectic(r: f64) -> SymplecticOp {
    RamanTMS { r, psi: 0.0 }
        .bogoliubov()
        .to_symplectic()
        .expect("two-mode squeezer is symplectic")
}

/// Creates a two-qumode cluster on `(first, second)`: a squeezer between the
/// field plaquette `first` and a vacuum memory, then a read-out of the memory
/// into plaquette `second` with efficiency `1 − δη`.
///
/// Both plaquettes must still be in vacuum.
pub fn generate_pair(
    result: &ProtocolResult,
    first: NodeLabel,
    second: NodeLabel,
    r: f64,
    delta_eta: f64,
) -> Result<ProtocolResult> {
    ensure_finite("r", r)?;
    ensure_in_range("r", r, 0.0, f64::MAX)?;
    ensure_in_range("delta_eta", delta_eta, 0.0, 1.0)?;
    let (a, b) = (result.mode(first)?, result.mode(second)?);
    // The read-out into a vacuum plaquette is a full swap, so it acts on the
    // stored qumode exactly like a lossy channel on the target plaquette.
    let state = result
        .state
        .apply(&tms_symplectic(r), &[a, b])?
        .lossy_coupling(b, delta_eta)?;
    let mut out = result.clone();
    out.state = state;
    out.frames[a.0] = PAIR_FRAME;
    out.frames[b.0] = 0.0;
    out.graph.add_edge(first, second, 1.0)?;
    Ok(out)
}

/// Two-qumode cluster of squeezing `r` read out with efficiency `1 − δη`.
pub fn two_qumode_cluster(r: f64, delta_eta: f64) -> Result<ProtocolResult> {
    let (a, b) = (NodeLabel::new(0, 0), NodeLabel::new(0, 1));
    let empty = ProtocolResult::from_state(GaussianState::vacuum(2)?, vec![a, b])?;
    generate_pair(&empty, a, b, r, delta_eta)
}

/// Applies a CZ between nodes `i` and `j` through three memories (BS, TMS,
/// BS) with uniform transfer loss `δη`. See [`apply_cz_with_loss`].
pub fn apply_cz(result: &ProtocolResult, i: NodeLabel, j: NodeLabel, delta_eta: f64) -> Result<ProtocolResult> {
    apply_cz_with_loss(result, i, j, &CzLoss::Uniform(delta_eta))
}

/// Applies a CZ in the cluster frame. The modes are rotated into the cluster
/// frame, sent through the memory program of [`cz_sequence`] with each
/// memory transfer replaced by a lossy channel, and rotated back.
pub fn apply_cz_with_loss(
    result: &ProtocolResult,
    i: NodeLabel,
    j: NodeLabel,
    loss: &CzLoss,
) -> Result<ProtocolResult> {
    let (mi, mj) = (result.mode(i)?, result.mode(j)?);
    if mi == mj {
        return Err(Error::RepeatedMode(mi.0));
    }
    let t = loss.transfers()?;
    let seq = cz_sequence();
    let ops: Vec<SymplecticOp> = seq
        .program
        .ops
        .iter()
        .map(|op| match op {
            MemoryOp::Bs { op, .. } => op.bogoliubov().to_symplectic(),
            MemoryOp::Tms { op, .. } => op.bogoliubov().to_symplectic(),
        })
        .collect::<Result<_>>()?;
    let pair = [mi, mj];

    let mut s = result
        .state
        .rotate(mi, result.frames[mi.0])?
        .rotate(mj, result.frames[mj.0])?;
    s = s.lossy_coupling(mj, t[0])?;
    s = s.apply(&ops[0], &pair)?;
    s = s.lossy_coupling(mj, t[1])?.lossy_coupling(mi, t[2])?;
    s = s.apply(&ops[1], &pair)?;
    s = s.lossy_coupling(mi, t[3])?.lossy_coupling(mj, t[4])?;
    s = s.apply(&ops[2], &pair)?;
    s = s.lossy_coupling(mi, t[5])?;
    let phases = &seq.program.terminal_phases;
    s = s
        .rotate(mi, phases[0] - result.frames[mi.0])?
        .rotate(mj, phases[1] - result.frames[mj.0])?;

    let mut out = result.clone();
    out.state = s;
    out.graph.add_edge(i, j, 1.0)?;
    Ok(out)
}

/// Stage-b temporal links of a `d × 2n` lattice: `(f, 2k+1)–(f, 2k+2)`.
pub fn temporal_links(d: usize, n: usize) -> Vec<(NodeLabel, NodeLabel)> {
    (0..d)
        .flat_map(|f| (0..n.saturating_sub(1)).map(move |k| (NodeLabel::new(f, 2 * k + 1), NodeLabel::new(f, 2 * k + 2))))
        .collect()
}

/// Stage-c frequency links `(f, t)–(f+1, t)`, time-major.
pub fn frequency_links(d: usize, n: usize) -> Vec<(NodeLabel, NodeLabel)> {
    (0..2 * n)
        .flat_map(|t| (0..d.saturating_sub(1)).map(move |f| (NodeLabel::new(f, t), NodeLabel::new(f + 1, t))))
        .collect()
}

/// Assembles the `d × 2n` lattice: `n` two-qumode clusters per frequency,
/// temporal CZ links joining neighbouring clusters, then frequency CZ links.
pub fn build_2d_cluster(d: usize, n: usize, r: f64, delta_eta: f64) -> Result<ProtocolResult> {
    let mut res = ProtocolResult::vacuum_lattice(d, n)?;
    for f in 0..d {
        for k in 0..n {
            res = generate_pair(&res, NodeLabel::new(f, 2 * k), NodeLabel::new(f, 2 * k + 1), r, delta_eta)?;
        }
    }
    for (a, b) in temporal_links(d, n).into_iter().chain(frequency_links(d, n)) {
        res = apply_cz(&res, a, b, delta_eta)?;
    }
    Ok(res)
}

/// Variance of `p_i − Σ_j A_ij q_j` (cluster frame) for every graph node,
/// in graph node order.
pub fn nullifier_variances(result: &ProtocolResult) -> Vec<f64> {
    let nodes = result.graph.nodes();
    let adj = result.graph.adjacency();
    let dim = 2 * result.state.n_modes();
    let cov = result.state.cov();
    let mut out = Vec::with_capacity(nodes.len());
    for (a, node) in nodes.iter().enumerate() {
        let mut c = nalgebra::DVector::<f64>::zeros(dim);
        // Cluster-frame q = cos θ q − sin θ p, p = sin θ q + cos θ p.
        let mut add = |label: &NodeLabel, wq: f64, wp: f64| {
            let m = result.mode_map[label].0;
            let (s, co) = result.frames[m].sin_cos();
            c[2 * m] += wq * co + wp * s;
            c[2 * m + 1] += -wq * s + wp * co;
        };
        add(node, 0.0, 1.0);
        for (b, other) in nodes.iter().enumerate() {
            let w = adj[(a, b)];
            if w != 0.0 {
                add(other, -w, 0.0);
            }
        }
        out.push((c.transpose() * cov * &c)[(0, 0)]);
    }
    out
}

/// Routes `mode` to the other output port of the measurement
/// interferometer: a beam splitter with `φ = π` against a vacuum memory,
/// which imprints `a → −a` and leaves the memory in vacuum.
pub fn pi_phase_route(state: &GaussianState, mode: ModeIndex) -> Result<GaussianState> {
    let memory = ModeIndex(state.n_modes());
    let s = RamanBS { phi: std::f64::consts::PI, theta: 0.0 }.bogoliubov().to_symplectic()?;
    state
        .tensor(&GaussianState::vacuum(1)?)
        .apply(&s, &[mode, memory])?
        .trace_out(&[memory])
}

/// Teleports a single-mode `input` through a two-node cluster whose second
/// node is a p-squeezed vacuum of squeezing `r`: CZ, homodyne of `p` on the
/// input node with result `outcome`, then the `−outcome` correction on `q`.
/// Ideally the output is the input rotated by `π/2`.
pub fn teleport(input: &GaussianState, r: f64, outcome: f64) -> Result<GaussianState> {
    if input.n_modes() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: input.n_modes(),
        });
    }
    let (a, b) = (NodeLabel::new(0, 0), NodeLabel::new(0, 1));
    let joint = input.tensor(&GaussianState::squeezed_vacuum(r)?);
    let linked = apply_cz(&ProtocolResult::from_state(joint, vec![a, b])?, a, b, 0.0)?;
    linked
        .state
        .homodyne(ModeIndex(0), FRAC_PI_2, outcome)?
        .displace(ModeIndex(0), -outcome, 0.0)
}
