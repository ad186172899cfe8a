//! Batch front-end: every protocol quantity as a machine-readable table.
//!
//! JSON is the canonical format; CSV is a flat projection of the same fields.
//! Exit codes: 0 success, 2 usage or validation error, 3 runtime error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use particle_games::classical;
use particle_games::games::{is_prime, AnswerVector, GameInstance};
use particle_games::protocol::{self, NoiseKind, NoiseModel};

#[derive(Parser)]
#[command(
    name = "particle-games",
    version,
    about = "One particle spread over N sites: quantum game runs, classical bounds, noise sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the table to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for the sampling mode; reported back in the output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Two-party protocol: truth table plus classical and quantum values.
    Bipartite,
    /// N-party protocol: quantum value and classical routing bounds.
    Nparty {
        /// Player count; must be prime.
        #[arg(long)]
        n: usize,
        /// Also estimate the quantum value from this many sampled shots.
        #[arg(long)]
        shots: Option<u64>,
    },
    /// Hop-count geometry for a list of site counts.
    Geometry {
        /// Comma-separated site counts, each at least 2.
        #[arg(long = "n-list", value_delimiter = ',', num_args = 1..)]
        n_list: Vec<usize>,
    },
    /// Noisy-protocol success across a lambda grid.
    Noise {
        /// Player count; must be prime.
        #[arg(long)]
        n: usize,
        /// Noise model.
        #[arg(long, value_enum)]
        kind: Kind,
        /// Comma-separated mixing weights in [0, 1]; default is a 21-point
        /// grid from 0 to 1.
        #[arg(long = "lambda-grid", value_delimiter = ',', num_args = 1..)]
        lambda_grid: Option<Vec<f64>>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    White,
    Loss,
}

enum Failure {
    Validation(String),
    Runtime(String),
}

type AppResult<T> = Result<T, Failure>;

impl From<particle_games::Error> for Failure {
    fn from(e: particle_games::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> AppResult<()> {
    let rendered = match &cli.command {
        Command::Bipartite => render(cli.format, &bipartite_report()?)?,
        Command::Nparty { n, shots } => render(cli.format, &nparty_report(*n, *shots, cli.seed)?)?,
        Command::Geometry { n_list } => render(cli.format, &geometry_report(n_list)?)?,
        Command::Noise {
            n,
            kind,
            lambda_grid,
        } => render(cli.format, &noise_report(*n, *kind, lambda_grid.as_deref())?)?,
    };
    emit(cli.out.as_deref(), &rendered)
}

fn emit(out: Option<&std::path::Path>, rendered: &str) -> AppResult<()> {
    match out {
        None => {
            print!("{rendered}");
            Ok(())
        }
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| Failure::Runtime(format!("writing {}: {e}", path.display()))),
    }
}

fn require_prime(n: usize) -> AppResult<()> {
    if !is_prime(n) {
        return Err(Failure::Validation(format!(
            "the player count must be a prime of at least 2, got {n}"
        )));
    }
    Ok(())
}

/// A report that renders to canonical JSON and to a flat CSV projection.
trait Report: Serialize {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> Result<(), csv::Error>;
}

fn render<R: Report>(format: Format, report: &R) -> AppResult<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)
                .map_err(|e| Failure::Runtime(format!("encoding json: {e}")))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            report
                .write_csv(&mut w)
                .map_err(|e| Failure::Runtime(format!("encoding csv: {e}")))?;
            let bytes = w
                .into_inner()
                .map_err(|e| Failure::Runtime(format!("encoding csv: {e}")))?;
            String::from_utf8(bytes).map_err(|e| Failure::Runtime(format!("encoding csv: {e}")))
        }
    }
}

#[derive(Serialize)]
struct BipartiteReport {
    command: &'static str,
    classical_gyni: f64,
    classical_lgyni: f64,
    quantum_gyni: f64,
    truth_table: Vec<TruthRow>,
}

#[derive(Serialize, Clone, Copy)]
struct TruthRow {
    x: u8,
    y: u8,
    a: u8,
    b: u8,
}

#[derive(Serialize)]
struct BipartiteCsvRow {
    x: u8,
    y: u8,
    a: u8,
    b: u8,
    classical_gyni: f64,
    classical_lgyni: f64,
    quantum_gyni: f64,
}

impl Report for BipartiteReport {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> Result<(), csv::Error> {
        for row in &self.truth_table {
            w.serialize(BipartiteCsvRow {
                x: row.x,
                y: row.y,
                a: row.a,
                b: row.b,
                classical_gyni: self.classical_gyni,
                classical_lgyni: self.classical_lgyni,
                quantum_gyni: self.quantum_gyni,
            })?;
        }
        Ok(())
    }
}

fn to_f64(r: particle_games::Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn bipartite_report() -> AppResult<BipartiteReport> {
    let truth_table = [(0u8, 0u8), (0, 1), (1, 0), (1, 1)]
        .into_iter()
        .map(|(x, y)| {
            let (a, b) = protocol::run_bipartite(x, y);
            TruthRow { x, y, a, b }
        })
        .collect();
    Ok(BipartiteReport {
        command: "bipartite",
        classical_gyni: to_f64(classical::enumerate_bipartite_max(
            classical::BipartiteGame::Gyni,
        )),
        classical_lgyni: to_f64(classical::enumerate_bipartite_max(
            classical::BipartiteGame::Lgyni,
        )),
        quantum_gyni: protocol::ideal_bipartite_behavior::<f64>().gyni_success(),
        truth_table,
    })
}

#[derive(Serialize)]
struct NPartyReport {
    command: &'static str,
    n: usize,
    k_max: usize,
    quantum: f64,
    classical_center: f64,
    classical_edges: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    sampling: Option<Sampling>,
}

#[derive(Serialize, Clone, Copy)]
struct Sampling {
    seed: u64,
    shots: u64,
    wins: u64,
    estimate: f64,
}

#[derive(Serialize)]
struct NPartyCsvRow {
    n: usize,
    k_max: usize,
    quantum: f64,
    classical_center: f64,
    classical_edges: f64,
    shots: Option<u64>,
    sampling_seed: Option<u64>,
    sampling_wins: Option<u64>,
    sampling_estimate: Option<f64>,
}

impl Report for NPartyReport {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> Result<(), csv::Error> {
        w.serialize(NPartyCsvRow {
            n: self.n,
            k_max: self.k_max,
            quantum: self.quantum,
            classical_center: self.classical_center,
            classical_edges: self.classical_edges,
            shots: self.sampling.map(|s| s.shots),
            sampling_seed: self.sampling.map(|s| s.seed),
            sampling_wins: self.sampling.map(|s| s.wins),
            sampling_estimate: self.sampling.map(|s| s.estimate),
        })
    }
}

fn nparty_report(n: usize, shots: Option<u64>, seed: u64) -> AppResult<NPartyReport> {
    require_prime(n)?;
    if shots == Some(0) {
        return Err(Failure::Validation("shots must be positive".into()));
    }
    let sampling = match shots {
        None => None,
        Some(shots) => Some(sample_quantum_value(n, shots, seed)?),
    };
    Ok(NPartyReport {
        command: "nparty",
        n,
        k_max: classical::k_max(n)?,
        quantum: protocol::ideal_sweep::<f64>(n)?.success_probability(),
        classical_center: to_f64(classical::center_routing_bound(n)?),
        classical_edges: to_f64(classical::edge_routing_bound(n)?),
        sampling,
    })
}

/// Monte Carlo demonstration: draw instances, sample the arrival site from
/// the exact outcome distribution, score the induced answers.
fn sample_quantum_value(n: usize, shots: u64, seed: u64) -> AppResult<Sampling> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcome_tables = Vec::with_capacity(n * n);
    for slope in 0..n {
        for offset in 0..n {
            let run = protocol::run_nparty::<f64>(&GameInstance::new(n, slope, offset)?)?;
            outcome_tables.push(run.outcome().probabilities().to_vec());
        }
    }
    let mut wins = 0u64;
    for _ in 0..shots {
        let instance = GameInstance::draw(n, &mut rng)?;
        let probs = &outcome_tables[instance.slope() * n + instance.offset()];
        let mut u: f64 = rng.gen();
        let mut drawn = probs.len() - 1;
        for (i, p) in probs.iter().enumerate() {
            if u < *p {
                drawn = i;
                break;
            }
            u -= *p;
        }
        let answers = AnswerVector::new((0..n).map(|k| drawn == k + 1).collect());
        if instance.score(&answers)? {
            wins += 1;
        }
    }
    Ok(Sampling {
        seed,
        shots,
        wins,
        estimate: wins as f64 / shots as f64,
    })
}

#[derive(Serialize)]
struct GeometryOut {
    command: &'static str,
    asymptote: f64,
    rows: Vec<GeometryRow>,
}

#[derive(Serialize, Clone, Copy)]
struct GeometryRow {
    n: usize,
    k_max: usize,
    classical_success: f64,
    asymptote_gap: f64,
}

impl Report for GeometryOut {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> Result<(), csv::Error> {
        for row in &self.rows {
            w.serialize(row)?;
        }
        Ok(())
    }
}

fn geometry_report(n_list: &[usize]) -> AppResult<GeometryOut> {
    if n_list.is_empty() {
        return Err(Failure::Validation("n-list must not be empty".into()));
    }
    if let Some(bad) = n_list.iter().find(|&&n| n < 2) {
        return Err(Failure::Validation(format!(
            "every site count must be at least 2, got {bad}"
        )));
    }
    let rows = n_list
        .iter()
        .map(|&n| {
            let report = classical::geometry_report(n)?;
            Ok(GeometryRow {
                n: report.n_players,
                k_max: report.k_max,
                classical_success: to_f64(report.classical_success),
                asymptote_gap: report.asymptote_gap,
            })
        })
        .collect::<AppResult<Vec<_>>>()?;
    Ok(GeometryOut {
        command: "geometry",
        asymptote: 1.0 / std::f64::consts::PI,
        rows,
    })
}

#[derive(Serialize)]
struct NoiseReport {
    command: &'static str,
    n: usize,
    kind: &'static str,
    p_noise: f64,
    lambda_c: f64,
    clamped: bool,
    rows: Vec<NoiseRow>,
}

#[derive(Serialize, Clone, Copy)]
struct NoiseRow {
    lambda: f64,
    p_s: f64,
    above_critical: bool,
}

#[derive(Serialize)]
struct NoiseCsvRow {
    lambda: f64,
    p_s: f64,
    above_critical: bool,
    n: usize,
    kind: &'static str,
    p_noise: f64,
    lambda_c: f64,
    clamped: bool,
}

impl Report for NoiseReport {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> Result<(), csv::Error> {
        for row in &self.rows {
            w.serialize(NoiseCsvRow {
                lambda: row.lambda,
                p_s: row.p_s,
                above_critical: row.above_critical,
                n: self.n,
                kind: self.kind,
                p_noise: self.p_noise,
                lambda_c: self.lambda_c,
                clamped: self.clamped,
            })?;
        }
        Ok(())
    }
}

fn noise_report(n: usize, kind: Kind, lambda_grid: Option<&[f64]>) -> AppResult<NoiseReport> {
    require_prime(n)?;
    let grid: Vec<f64> = match lambda_grid {
        Some(grid) => grid.to_vec(),
        None => (0..21).map(|i| i as f64 / 20.0).collect(),
    };
    if let Some(bad) = grid.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        return Err(Failure::Validation(format!(
            "every lambda must lie in [0, 1], got {bad}"
        )));
    }
    let (kind_name, noise_kind) = match kind {
        Kind::White => ("white", NoiseKind::White),
        Kind::Loss => ("loss", NoiseKind::Loss),
    };
    let probe = NoiseModel::new(noise_kind.clone(), 0.0).map_err(Failure::from)?;
    let p_noise = probe.win_rate(n)?;
    let threshold = protocol::noise_threshold(n, p_noise)?;
    let rows = grid
        .iter()
        .map(|&lambda| {
            let noise = NoiseModel::new(noise_kind.clone(), lambda)?;
            let p_s = protocol::noisy_sweep::<f64>(n, &noise)?.success_probability();
            Ok(NoiseRow {
                lambda,
                p_s,
                above_critical: lambda > threshold.lambda_c,
            })
        })
        .collect::<AppResult<Vec<_>>>()?;
    Ok(NoiseReport {
        command: "noise",
        n,
        kind: kind_name,
        p_noise,
        lambda_c: threshold.lambda_c,
        clamped: threshold.clamped,
        rows,
    })
}
