use clap::{Args, Parser, Subcommand, ValueEnum};
use hybridlight::catgen::{condition_smsv, decompose_into_sdlps, scan_beta};
use hybridlight::entangle::{generate_hybrid, ExperimentConfig, LedgerDepth, Source, SweepPlan};
use hybridlight::states::{build_sdlps, build_superposition, photon_statistics};
use hybridlight::wigner::wigner_grid;
use hybridlight::{
    BeamSplitterParams, Cutoff, DelocalizedPhoton, Error, FockVector, Parity, ParitySign, SdlpsSpec, SmsvSpec,
    SuperpositionSpec,
};
use hybridlight_cli::format::{amplitude_pairs, amplitudes_csv, sig6, sweep_csv, wigner_csv};
use hybridlight_cli::parallel::{parallel_sweep, threads_from_env};
use hybridlight_cli::table2::cutoff_label;
use hybridlight_cli::{table2_report, validate_report, RunReport};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hybridlight", version, about = "Heralded hybrid entanglement from displaced-Fock superpositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a source state and its photon statistics
    State(StateCmd),
    /// Run one heralded experiment
    Hybrid(HybridCmd),
    /// Grid sweep of negativity and success probability
    Sweep(SweepCmd),
    /// Reproduce the table of maximum-negativity points
    Table2(ReportCmd),
    /// Wigner function on a square grid
    Wigner(WignerCmd),
    /// Fano factor against beta
    Fano(FanoCmd),
    /// Condition squeezed vacuum on a photon count and decompose the result
    Catgen(CatgenCmd),
    /// Run the invariant suites
    Validate(ValidateCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum Sign {
    Plus,
    Minus,
}

impl From<Sign> for ParitySign {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Plus => ParitySign::Plus,
            Sign::Minus => ParitySign::Minus,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Depth {
    Quick,
    Full,
}

fn parse_cutoff(s: &str) -> Result<Cutoff, String> {
    if s == "auto" {
        return Ok(Cutoff::Auto);
    }
    s.parse::<usize>()
        .map(Cutoff::Fixed)
        .map_err(|_| format!("expected `auto` or a photon number, got {s:?}"))
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => Ok((
            a.trim().parse().map_err(|_| format!("bad number {a:?}"))?,
            b.trim().parse().map_err(|_| format!("bad number {b:?}"))?,
        )),
        _ => Err(format!("expected `lo,hi`, got {s:?}")),
    }
}

#[derive(Args, Clone)]
struct SourceArgs {
    /// Photon number l of the displaced state
    #[arg(long, default_value_t = 0)]
    l: usize,
    #[arg(long, value_enum, default_value_t = Sign::Plus)]
    parity: Sign,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Superposition weights b0,b1,...; overrides --l
    #[arg(long, value_delimiter = ',')]
    b: Option<Vec<f64>>,
    /// Replace each superposition term by its few-photon truncation
    #[arg(long)]
    truncated: bool,
    #[arg(long, default_value = "auto", value_parser = parse_cutoff)]
    cutoff: Cutoff,
}

impl SourceArgs {
    fn source(&self, beta: f64) -> hybridlight::Result<Source<f64>> {
        let sign = self.parity.into();
        Ok(match &self.b {
            Some(b) => {
                let spec = SuperpositionSpec::new(sign, beta, b.clone())?;
                if self.truncated {
                    Source::Truncated(spec)
                } else {
                    Source::Superposition(spec)
                }
            }
            None if self.truncated => {
                let mut b = vec![0.0; self.l + 1];
                b[self.l] = 1.0;
                Source::Truncated(SuperpositionSpec::new(sign, beta, b)?)
            }
            None => Source::Sdlps(SdlpsSpec::new(self.l, sign, beta)?),
        })
    }

    /// The state itself, largest amplitude real and positive.
    fn state(&self, beta: f64) -> hybridlight::Result<FockVector<f64>> {
        match self.source(beta)? {
            Source::Sdlps(s) => build_sdlps(&s, self.cutoff),
            Source::Superposition(s) => Ok(build_superposition(&s, self.cutoff, false)?.state),
            Source::Truncated(s) => Ok(build_superposition(&s, self.cutoff, true)?.state),
        }
    }

    fn echo(&self) -> serde_json::Value {
        json!({
            "l": self.l,
            "parity": match self.parity { Sign::Plus => "plus", Sign::Minus => "minus" },
            "beta": self.beta,
            "b": self.b,
            "truncated": self.truncated,
            "cutoff": cutoff_label(self.cutoff),
        })
    }
}

#[derive(Args, Clone)]
struct PhotonArgs {
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
    a0: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
    a1: f64,
}

impl PhotonArgs {
    fn photon(&self) -> hybridlight::Result<DelocalizedPhoton<f64>> {
        DelocalizedPhoton::from_real(self.a0, self.a1)
    }
}

#[derive(Args, Clone)]
struct OutArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct StateCmd {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct HybridCmd {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    photon: PhotonArgs,
    #[arg(long, default_value_t = 0.5)]
    t: f64,
    /// Heralded photon number
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SweepCmd {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    photon: PhotonArgs,
    /// Heralded photon numbers
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    n: Vec<usize>,
    /// Points per axis
    #[arg(long, default_value_t = 30)]
    grid: usize,
    #[arg(long, value_parser = parse_pair, default_value = "0.1,3")]
    beta_range: (f64, f64),
    #[arg(long, value_parser = parse_pair, default_value = "0.05,0.95")]
    t_range: (f64, f64),
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ReportCmd {
    #[arg(long, default_value = "auto", value_parser = parse_cutoff)]
    cutoff: Cutoff,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct WignerCmd {
    #[command(flatten)]
    source: SourceArgs,
    /// Points per axis
    #[arg(long, default_value_t = 201)]
    grid: usize,
    /// Half-width of the square in quadrature units
    #[arg(long, default_value_t = 5.0)]
    extent: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct FanoCmd {
    #[command(flatten)]
    source: SourceArgs,
    /// Points along beta; ignored when --beta is given explicitly
    #[arg(long, default_value_t = 30)]
    grid: usize,
    #[arg(long, value_parser = parse_pair, default_value = "0.1,3")]
    beta_range: (f64, f64),
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct CatgenCmd {
    /// Squeezing parameter of the input vacuum
    #[arg(long, default_value_t = 0.3)]
    squeeze: f64,
    #[arg(long, default_value_t = 0.7)]
    t: f64,
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Number of displaced-state terms minus one
    #[arg(long, default_value_t = 2)]
    l: usize,
    /// Fixed beta; scanned over --beta-range when absent
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, value_parser = parse_pair, default_value = "0.2,1.5")]
    beta_range: (f64, f64),
    #[arg(long, default_value = "auto", value_parser = parse_cutoff)]
    cutoff: Cutoff,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ValidateCmd {
    #[arg(long, value_enum, default_value_t = Depth::Quick)]
    depth: Depth,
    #[command(flatten)]
    out: OutArgs,
}

enum Failure {
    Usage(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("cannot write output: {e}"))
    }
}

fn emit(out: &OutArgs, text: &str) -> Result<(), Failure> {
    match &out.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn to_json(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

fn run_state(cmd: StateCmd) -> Result<(), Failure> {
    let v = cmd.source.state(cmd.source.beta)?;
    if cmd.out.format == Some(Format::Csv) {
        return emit(&cmd.out, &amplitudes_csv(&v));
    }
    let stats = photon_statistics(&v).ok();
    emit(
        &cmd.out,
        &to_json(&json!({
            "config": cmd.source.echo(),
            "amps": amplitude_pairs(&v),
            "mean": stats.map(|s| s.mean),
            "variance": stats.map(|s| s.variance),
            "fano": stats.map(|s| s.fano),
        })),
    )
}

fn run_hybrid(cmd: HybridCmd) -> Result<(), Failure> {
    let config = ExperimentConfig::new(cmd.source.source(cmd.source.beta)?, cmd.photon.photon()?, cmd.t, cmd.n)?;
    let r = generate_hybrid(&config, cmd.source.cutoff)?;
    let body = json!({
        "config": { "source": cmd.source.echo(), "a0": cmd.photon.a0, "a1": cmd.photon.a1, "t": cmd.t, "n": cmd.n },
        "probability": r.probability,
        "negativity": r.negativity,
        "b_param": r.b_param,
        "psi_amps": amplitude_pairs(&r.psi_branch),
        "phi_amps": amplitude_pairs(&r.phi_branch),
        "parities": { "psi": parity_name(r.parities.psi), "phi": parity_name(r.parities.phi) },
    });
    emit(&cmd.out, &to_json(&body))
}

fn run_sweep(cmd: SweepCmd) -> Result<(), Failure> {
    let source = cmd.source.source(cmd.beta_range.0)?;
    let plan = SweepPlan::new(cmd.n.clone(), cmd.beta_range, cmd.t_range, cmd.grid)?;
    let records = parallel_sweep(&source, &cmd.photon.photon()?, &plan, cmd.source.cutoff, threads_from_env()?)?;
    if cmd.out.format == Some(Format::Json) {
        return emit(&cmd.out, &to_json(&records));
    }
    emit(&cmd.out, &sweep_csv(&records))
}

fn finish_report(report: &RunReport, out: &OutArgs) -> Result<(), Failure> {
    if out.format == Some(Format::Json) {
        emit(out, &to_json(report))?;
    } else {
        emit(out, &report.render())?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn run_wigner(cmd: WignerCmd) -> Result<(), Failure> {
    if cmd.grid < 2 || !(cmd.extent > 0.0) {
        return Err(Failure::Usage("--grid must be at least 2 and --extent positive".into()));
    }
    let v = cmd.source.state(cmd.source.beta)?;
    let step = 2.0 * cmd.extent / (cmd.grid - 1) as f64;
    let range = (-cmd.extent, cmd.extent);
    let grid = wigner_grid(&v, range, range, step)?;
    if grid.coarse_warning {
        eprintln!("warning: grid too coarse or too small for the normalization check (integral {:.6})", grid.integral());
    }
    if cmd.out.format == Some(Format::Json) {
        return emit(&cmd.out, &to_json(&grid));
    }
    emit(&cmd.out, &wigner_csv(&grid))
}

fn run_fano(cmd: FanoCmd) -> Result<(), Failure> {
    let explicit = std::env::args().any(|a| a == "--beta" || a.starts_with("--beta="));
    let betas: Vec<f64> = if explicit {
        vec![cmd.source.beta]
    } else if cmd.grid < 2 {
        vec![cmd.beta_range.0]
    } else {
        let (lo, hi) = cmd.beta_range;
        (0..cmd.grid).map(|i| lo + (hi - lo) * i as f64 / (cmd.grid - 1) as f64).collect()
    };
    let mut rows = Vec::with_capacity(betas.len());
    for beta in betas {
        let stats = photon_statistics(&cmd.source.state(beta)?)?;
        rows.push((beta, stats));
    }
    if cmd.out.format == Some(Format::Json) {
        let body: Vec<_> = rows.iter().map(|(b, s)| json!({ "beta": b, "mean": s.mean, "variance": s.variance, "fano": s.fano })).collect();
        return emit(&cmd.out, &to_json(&body));
    }
    let mut text = String::from("beta,mean,variance,fano\n");
    for (b, s) in rows {
        text.push_str(&format!("{},{},{},{}\n", sig6(b), sig6(s.mean), sig6(s.variance), sig6(s.fano)));
    }
    emit(&cmd.out, &text)
}

fn run_catgen(cmd: CatgenCmd) -> Result<(), Failure> {
    let cat = condition_smsv(&SmsvSpec::new(cmd.squeeze)?, BeamSplitterParams::new(cmd.t)?, cmd.n, cmd.cutoff)?;
    let sign = ParitySign::from_parity(cat.parity);
    let d = match cmd.beta {
        Some(beta) => decompose_into_sdlps(&cat.state, cmd.l, sign, beta)?,
        None => scan_beta(&cat.state, cmd.l, sign, cmd.beta_range, 27)?,
    };
    let body = json!({
        "outcome": cmd.n,
        "probability": cat.probability,
        "fidelity": d.fidelity,
        "b": d.b,
        "beta": d.beta_used,
        "condition_number": d.condition_number,
    });
    emit(&cmd.out, &to_json(&body))
}

fn run() -> Result<(), Failure> {
    match Cli::parse().command {
        Command::State(c) => run_state(c),
        Command::Hybrid(c) => run_hybrid(c),
        Command::Sweep(c) => run_sweep(c),
        Command::Table2(c) => {
            let report = table2_report(c.cutoff)?;
            finish_report(&report, &c.out)
        }
        Command::Wigner(c) => run_wigner(c),
        Command::Fano(c) => run_fano(c),
        Command::Catgen(c) => run_catgen(c),
        Command::Validate(c) => {
            let depth = match c.depth {
                Depth::Quick => LedgerDepth::Quick,
                Depth::Full => LedgerDepth::Full,
            };
            finish_report(&validate_report(depth)?, &c.out)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
