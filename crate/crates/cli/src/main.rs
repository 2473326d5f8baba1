//! `tfcluster`: fidelity sweeps, CZ verification, lattice builds and memory
//! schedules from the command line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid input
//! (bad flags, violated constraints, unwritable output).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use tfcluster::bloch_messiah::{cz_bogoliubov, cz_sequence, reduce, REDUCTION_TOL};
use tfcluster::cluster::{build_2d_cluster, nullifier_variances};
use tfcluster::raman::{chain_bogoliubov, ChainOp, RamanBS, RamanTMS};
use tfcluster::scheduler::{self, compile_with_margin, ArchitectureConstraints, DEFAULT_COHERENCE_MARGIN};
use tfcluster::sweep::{self, Axis, Protocol, Scale, SweepConfig};
use tfcluster::{db_to_r, fidelity, memory_count};

const CONVENTIONS: &str = "quadratures (q1,p1,q2,p2,...), vacuum variance 1/2, r = dB*ln(10)/20";

/// Residual below which the synthesised CZ counts as exact.
const CZ_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(name = "tfcluster", version, about = "Time-frequency cluster states with Raman quantum memories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form vs numeric fidelity over a (dB, delta_eta) grid.
    FidelityGrid(GridArgs),
    /// Check the BS-TMS-BS memory sequence against the ideal CZ gate.
    CzVerify(VerifyArgs),
    /// Build a d x 2n lattice and report nullifiers, fidelity and memory count.
    BuildCluster(ClusterArgs),
    /// Compile a lattice into a memory-chain schedule (JSON Lines and JSON).
    Schedule(ScheduleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolArg {
    TwoQumode,
    Cz,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Linear,
    Log,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GridFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, value_enum, default_value = "two-qumode")]
    protocol: ProtocolArg,
    #[arg(long, default_value_t = 0.0)]
    db_min: f64,
    #[arg(long, default_value_t = 20.0)]
    db_max: f64,
    #[arg(long, default_value_t = 21)]
    db_steps: usize,
    #[arg(long, default_value_t = 1e-6)]
    eta_min: f64,
    #[arg(long, default_value_t = 1e-1)]
    eta_max: f64,
    #[arg(long, default_value_t = 21)]
    eta_steps: usize,
    #[arg(long, value_enum, default_value = "log")]
    eta_scale: ScaleArg,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: GridFormat,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Random Bogoliubov pairs for the Bloch-Messiah round trip.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
}

#[derive(Args)]
struct ClusterArgs {
    /// Frequency channels.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Two-qumode clusters per channel; the lattice has 2n time bins.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Squeezing of every two-mode squeezer, in dB.
    #[arg(long, default_value_t = 10.0)]
    db: f64,
    /// Loss per memory transfer.
    #[arg(long = "eta", default_value_t = 0.0)]
    delta_eta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
}

#[derive(Args)]
struct ScheduleArgs {
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Plaquette duration in seconds.
    #[arg(long, default_value_t = 1e-6)]
    dt: f64,
    /// Memory coherence time in seconds.
    #[arg(long, default_value_t = 1e-3)]
    tmem: f64,
    /// Accessible memory bandwidth in rad/s.
    #[arg(long, default_value_t = 1e9)]
    delta_full: f64,
    /// Required ratio t_mem / dt.
    #[arg(long, default_value_t = DEFAULT_COHERENCE_MARGIN)]
    margin: f64,
    /// Output stem: writes <out>.jsonl and <out>.json.
    #[arg(long, default_value = "schedule")]
    out: PathBuf,
}

/// Why a command stopped.
enum Failure {
    Verification(String),
    Input(String),
}

impl From<tfcluster::Error> for Failure {
    fn from(e: tfcluster::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::FidelityGrid(a) => fidelity_grid(a),
        Command::CzVerify(a) => cz_verify(a),
        Command::BuildCluster(a) => build_cluster(a),
        Command::Schedule(a) => schedule(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn fidelity_grid(a: GridArgs) -> Result<(), Failure> {
    let protocol = match a.protocol {
        ProtocolArg::TwoQumode => Protocol::TwoQumode,
        ProtocolArg::Cz => Protocol::Cz,
    };
    let scale = match a.eta_scale {
        ScaleArg::Linear => Scale::Linear,
        ScaleArg::Log => Scale::Log,
    };
    let config = SweepConfig::new(
        protocol,
        Axis::new(a.db_min, a.db_max, a.db_steps, Scale::Linear)?,
        Axis::new(a.eta_min, a.eta_max, a.eta_steps, scale)?,
    )?;
    let report = sweep::evaluate(&config, a.jobs)?;
    let mut out = output(a.out.as_deref())?;
    match a.format {
        GridFormat::Csv => sweep::write_csv(&report, &mut out)?,
        GridFormat::Json => {
            sweep::write_json(&report, &mut out)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    let worst = report.max_abs_diff();
    eprintln!("{} points, max |F_closed - F_numeric| = {worst:e}", report.rows.len());
    if !report.passes() {
        return Err(Failure::Verification(format!(
            "max |dF| = {worst:e} exceeds {:e}",
            sweep::AGREEMENT_TOL
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyReport {
    conventions: &'static str,
    residual: f64,
    coupling_sin2_phi_prime: f64,
    tms_db: f64,
    bloch_messiah_a_d: Vec<f64>,
    bloch_messiah_b_d: Vec<f64>,
    seed: u64,
    samples: usize,
    worst_round_trip: f64,
}

fn random_pair(rng: &mut ChaCha8Rng) -> Result<tfcluster::BogoliubovPair, Failure> {
    use std::f64::consts::PI;
    let n = rng.random_range(2..=4);
    let mut chain = Vec::new();
    for _ in 0..rng.random_range(1..=8) {
        let i = rng.random_range(0..n);
        let j = (i + rng.random_range(1..n)) % n;
        chain.push(match rng.random_range(0..3) {
            0 => ChainOp::Phase {
                mode: i,
                theta: rng.random_range(-PI..PI),
            },
            1 => ChainOp::Bs {
                modes: (i, j),
                op: RamanBS::new(rng.random_range(-PI..PI), rng.random_range(-PI..PI))?,
            },
            _ => ChainOp::Tms {
                modes: (i, j),
                op: RamanTMS::new(rng.random_range(0.0..1.0), rng.random_range(-PI..PI))?,
            },
        });
    }
    Ok(chain_bogoliubov(n, &chain)?)
}

fn cz_verify(a: VerifyArgs) -> Result<(), Failure> {
    let seq = cz_sequence();
    let factors = reduce(&cz_bogoliubov())?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..a.samples {
        let pair = random_pair(&mut rng)?;
        worst = worst.max(reduce(&pair)?.reconstruct().distance(&pair));
    }
    let report = VerifyReport {
        conventions: CONVENTIONS,
        residual: seq.residual(),
        coupling_sin2_phi_prime: seq.coupling_efficiency(),
        tms_db: seq.squeezing_db(),
        bloch_messiah_a_d: factors.a_d.iter().copied().collect(),
        bloch_messiah_b_d: factors.b_d.iter().copied().collect(),
        seed: a.seed,
        samples: a.samples,
        worst_round_trip: worst,
    };
    let mut out = output(a.out.as_deref())?;
    match a.format {
        ReportFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
        ReportFormat::Text => {
            writeln!(out, "# {CONVENTIONS}")?;
            writeln!(out, "composed vs ideal CZ residual: {:e}", report.residual)?;
            writeln!(out, "BS coupling sin^2(phi'): {:.6}", report.coupling_sin2_phi_prime)?;
            writeln!(out, "TMS squeezing: {:.4} dB", report.tms_db)?;
            writeln!(out, "Bloch-Messiah A_D: {:?}", report.bloch_messiah_a_d)?;
            writeln!(out, "Bloch-Messiah B_D: {:?}", report.bloch_messiah_b_d)?;
            writeln!(
                out,
                "round trip over {} random pairs (seed {}): worst residual {:e}",
                a.samples, a.seed, worst
            )?;
        }
    }
    out.flush()?;
    if report.residual >= CZ_TOL {
        return Err(Failure::Verification(format!("CZ residual {:e} ≥ {CZ_TOL:e}", report.residual)));
    }
    if worst >= REDUCTION_TOL {
        return Err(Failure::Verification(format!("Bloch-Messiah round trip residual {worst:e}")));
    }
    Ok(())
}

#[derive(Serialize)]
struct ClusterReport {
    conventions: &'static str,
    d: usize,
    n: usize,
    db: f64,
    delta_eta: f64,
    modes: usize,
    nullifier_variances: Vec<f64>,
    max_nullifier_variance: f64,
    fidelity_to_lossless: f64,
    memory_count: usize,
    min_symplectic_eigenvalue: f64,
}

fn build_cluster(a: ClusterArgs) -> Result<(), Failure> {
    let r = db_to_r(a.db)?;
    let lossy = build_2d_cluster(a.d, a.n, r, a.delta_eta)?;
    let ideal = build_2d_cluster(a.d, a.n, r, 0.0)?;
    let f = fidelity(&lossy.state, &ideal.state)?;
    // Count memories from the compiled chain rather than the formula.
    let constraints = ArchitectureConstraints::new(1.0, 1e12)?;
    let sched = scheduler::compile(a.d, a.n, constraints, 1e-6)?;
    let nullifiers = nullifier_variances(&lossy);
    let report = ClusterReport {
        conventions: CONVENTIONS,
        d: a.d,
        n: a.n,
        db: a.db,
        delta_eta: a.delta_eta,
        modes: lossy.state.n_modes(),
        max_nullifier_variance: nullifiers.iter().copied().fold(0.0, f64::max),
        nullifier_variances: nullifiers,
        fidelity_to_lossless: f,
        memory_count: sched.chain_memories().len(),
        min_symplectic_eigenvalue: lossy.state.min_symplectic_eigenvalue(),
    };
    let mut out = output(a.out.as_deref())?;
    match a.format {
        ReportFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
        ReportFormat::Text => {
            writeln!(out, "# {CONVENTIONS}")?;
            writeln!(
                out,
                "lattice: d = {}, n = {} ({} modes), {} dB, delta_eta = {}",
                a.d, a.n, report.modes, a.db, a.delta_eta
            )?;
            for (node, v) in lossy.graph.nodes().iter().zip(&report.nullifier_variances) {
                writeln!(out, "nullifier {node}: {v:e}")?;
            }
            writeln!(out, "fidelity to lossless lattice: {:.12}", report.fidelity_to_lossless)?;
            writeln!(out, "memory count: {}", report.memory_count)?;
        }
    }
    out.flush()?;
    let expected = memory_count(a.d)?;
    if report.memory_count != expected {
        return Err(Failure::Verification(format!(
            "memory count {} differs from 7d - 3 = {expected}",
            report.memory_count
        )));
    }
    if report.min_symplectic_eigenvalue < 0.5 - 1e-9 {
        return Err(Failure::Verification("lattice state is unphysical".into()));
    }
    Ok(())
}

fn schedule(a: ScheduleArgs) -> Result<(), Failure> {
    let constraints = ArchitectureConstraints::new(a.tmem, a.delta_full)?;
    let s = compile_with_margin(a.d, a.n, constraints, a.dt, a.margin)?;
    for w in &s.warnings {
        eprintln!("warning: {w}");
    }
    let jsonl = a.out.with_extension("jsonl");
    let json = a.out.with_extension("json");
    scheduler::write_jsonl(&jsonl, &s.entries)?;
    scheduler::write_json(&json, &s)?;
    if scheduler::read_jsonl(&jsonl)? != s.entries || scheduler::read_json(&json)? != s {
        return Err(Failure::Verification("schedule files do not round-trip".into()));
    }
    println!(
        "{} entries, {} memories, span {} bins; wrote {} and {}",
        s.entries.len(),
        s.chain_memories().len(),
        s.span(),
        jsonl.display(),
        json.display()
    );
    Ok(())
}
