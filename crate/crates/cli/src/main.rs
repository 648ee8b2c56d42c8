use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use modfio_core::experiments::{
    chirp_unboundedness_experiment, chirped_bump_experiment, compact_support_experiment, gaussian_dilation_experiment,
    operator_scaling_experiment, schrodinger_scaling_experiment, ExperimentReport,
};
use modfio_core::exponents::{region_scan, RegionSpec};
use modfio_core::fio::{gabor_matrix_direct, gabor_matrix_via_stft};
use modfio_core::grid::{read_signal_csv, write_signal_csv};
use modfio_core::verify::{run_criterion, CRITERIA};
use modfio_core::{
    amalgam_norm, apply_fio, make_grid, modulation_norm, stft, ChirpedGaussian, CheckerId, Error, ExperimentConfig,
    IndexTuple, PhaseSpec, Recip, Signal, SymbolDescriptor, SymbolGrid, VerifyReport, WeightSpec, Window,
};

/// Time-frequency numerics for Fourier integral operators on modulation spaces.
#[derive(Parser)]
#[command(name = "modfio", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Short-time Fourier transform with the Gaussian window.
    Stft {
        #[command(flatten)]
        signal: SignalArgs,
        /// Write `|V_g f|` instead of the complex values.
        #[arg(long)]
        magnitude: bool,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Modulation (or amalgam) norm of a signal.
    Norm {
        #[command(flatten)]
        signal: SignalArgs,
        #[command(flatten)]
        exps: NormArgs,
        /// Wiener amalgam norm `W(FL^p, L^q)` instead of `M^{p,q}`.
        #[arg(long)]
        amalgam: bool,
    },
    /// Fourier integral operators.
    Fio {
        #[command(subcommand)]
        command: FioCommand,
    },
    /// Compare both sides of the Gabor-matrix identity at one pair of phase-space points.
    GaborCheck {
        #[arg(long, value_enum, default_value_t = Phase::Kn)]
        phase: Phase,
        #[arg(long, default_value = "standard-gaussian")]
        symbol: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        x: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        omega: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        x_out: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        omega_out: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Exact index conditions.
    Exponents {
        #[command(subcommand)]
        command: ExponentsCommand,
    },
    /// Run a scaling experiment and export CSV, JSON, and gnuplot data.
    Experiment {
        #[arg(value_enum)]
        name: ExperimentName,
        /// JSON experiment configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        r1: Option<Recip>,
        #[arg(long)]
        r2: Option<Recip>,
        #[arg(long)]
        t1: Option<Recip>,
        #[arg(long)]
        t2: Option<Recip>,
        #[arg(long)]
        q: Option<Recip>,
        /// Output directory; defaults to the config's, then the working directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run acceptance criteria 1 to 9 and write a JSON report.
    Verify {
        #[arg(long, default_value = "verify-report.json")]
        out: PathBuf,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Subcommand)]
enum FioCommand {
    /// Apply `T_σ` to a signal and write the output as CSV.
    Apply {
        #[arg(long, value_enum, default_value_t = Phase::Kn)]
        phase: Phase,
        /// `one`, `standard-gaussian`, `gaussian-pair:<λ>`, or a symbol CSV file.
        #[arg(long, default_value = "one")]
        symbol: String,
        #[command(flatten)]
        signal: SignalArgs,
        #[arg(long, short)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ExponentsCommand {
    /// Evaluate one checker on an index tuple.
    Check {
        #[arg(long, default_value = "pseudo")]
        checker: CheckerId,
        #[arg(long)]
        p: Recip,
        #[arg(long)]
        q: Recip,
        #[arg(long)]
        r1: Recip,
        #[arg(long)]
        r2: Recip,
        #[arg(long)]
        t1: Recip,
        #[arg(long)]
        t2: Recip,
        #[arg(long, default_value_t = 0.0)]
        s1: f64,
        #[arg(long, default_value_t = 0.0)]
        s2: f64,
        #[arg(long, default_value_t = 1)]
        d: u32,
    },
    /// Scan a two-dimensional slice of the exponent lattice.
    Region {
        #[arg(long, default_value = "pseudo")]
        checker: CheckerId,
        /// Preset slice of the first or second figure.
        #[arg(long, conflicts_with = "spec")]
        figure: Option<u8>,
        /// JSON region specification.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        k: i64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = 2048)]
    n: usize,
    #[arg(long, default_value_t = 64.0)]
    extent: f64,
}

#[derive(Args)]
struct SignalArgs {
    /// Signal CSV with columns `x,re,im`.
    #[arg(long, conflicts_with = "gaussian", required_unless_present = "gaussian")]
    input: Option<PathBuf>,
    /// Use the dilated Gaussian `e^{-πλ²x²}` sampled on `--n`, `--extent`.
    #[arg(long, value_name = "LAMBDA")]
    gaussian: Option<f64>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct NormArgs {
    #[arg(long)]
    p: Recip,
    #[arg(long)]
    q: Recip,
    #[arg(long, default_value_t = 0.0)]
    s1: f64,
    #[arg(long, default_value_t = 0.0)]
    s2: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Phase {
    Kn,
    Chirp,
    Schrodinger,
}

impl Phase {
    fn spec(self) -> PhaseSpec {
        match self {
            Phase::Kn => PhaseSpec::kohn_nirenberg(),
            Phase::Chirp => PhaseSpec::quadratic_chirp(),
            Phase::Schrodinger => PhaseSpec::schrodinger_free(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentName {
    GaussianDilation,
    OperatorScaling,
    SchrodingerScaling,
    ChirpUnboundedness,
    ChirpedBump,
    CompactSupport,
}

/// Failure modes: bad input exits with 2, failed checks with 1.
enum Failure {
    Usage(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Stft { signal, magnitude, out } => {
            let f = load_signal(&signal)?;
            let v = stft(&f, &Window::gaussian(*f.grid())?)?;
            let w = BufWriter::new(File::create(&out)?);
            if magnitude {
                v.write_magnitude_csv(w)?;
            } else {
                v.write_csv(w)?;
            }
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::Norm { signal, exps, amalgam } => {
            let f = load_signal(&signal)?;
            let g = Window::gaussian(*f.grid())?;
            let r = if amalgam {
                amalgam_norm(&f, exps.p, exps.q, &g)?
            } else {
                modulation_norm(&f, exps.p, exps.q, &WeightSpec::new(exps.s1, exps.s2)?, &g)?
            };
            println!("{}", serde_json::to_string(&r).map_err(Error::from)?);
            Ok(())
        }
        Command::Fio {
            command: FioCommand::Apply { phase, symbol, signal, out },
        } => {
            let f = load_signal(&signal)?;
            let sigma = load_symbol(&symbol, &f)?;
            let res = apply_fio(&phase.spec(), &sigma, &f)?;
            if let Some(a) = res.aliasing {
                eprintln!("warning: output reaches the band edge (relative level {:.2e})", a.edge_ratio);
            }
            write_signal_csv(&res.signal, BufWriter::new(File::create(&out)?))?;
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::GaborCheck {
            phase,
            symbol,
            x,
            omega,
            x_out,
            omega_out,
            grid,
            tol,
        } => {
            let grid = make_grid(grid.n, grid.extent)?;
            let g = Window::gaussian(grid)?;
            let sigma = load_symbol(&symbol, &Signal::zeros(grid))?;
            let spec = phase.spec();
            let d = gabor_matrix_direct(&spec, &sigma, &g, (x, omega), (x_out, omega_out))?.norm();
            let s = gabor_matrix_via_stft(&spec, &sigma, &g, (x, omega), (x_out, omega_out))?;
            let rel = (d - s).abs() / d.max(f64::MIN_POSITIVE);
            println!("direct: {d:.15e}\nvia-stft: {s:.15e}\nrelative deviation: {rel:.3e}");
            if rel <= tol {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
        Command::Exponents { command } => exponents(command),
        Command::Experiment {
            name,
            config,
            r1,
            r2,
            t1,
            t2,
            q,
            out,
        } => {
            let cfg = match &config {
                Some(path) => ExperimentConfig::load(path)?,
                None => ExperimentConfig::default(),
            };
            let dir = out
                .or_else(|| cfg.output.dir.clone())
                .unwrap_or_else(|| PathBuf::from("."));
            let two = Recip::HALF;
            let report = match name {
                ExperimentName::GaussianDilation => {
                    gaussian_dilation_experiment(r1.unwrap_or(two), r2.unwrap_or(two), &cfg)?.report()
                }
                ExperimentName::OperatorScaling => operator_scaling_experiment(&cfg)?.report(),
                ExperimentName::SchrodingerScaling => {
                    schrodinger_scaling_experiment(t1.unwrap_or(two), t2.unwrap_or(two), &cfg)?.report()
                }
                ExperimentName::ChirpUnboundedness => {
                    chirp_unboundedness_experiment(r1.unwrap_or(two), r2.unwrap_or(two), &cfg)?.report()
                }
                ExperimentName::ChirpedBump => {
                    chirped_bump_experiment(q.unwrap_or(two), t1.unwrap_or(two), &cfg)?.report()
                }
                ExperimentName::CompactSupport => compact_support_report(&cfg)?,
            };
            let stem = format!(
                "{}{}",
                cfg.output.prefix.as_deref().unwrap_or(""),
                report.experiment
            );
            let paths = report.export(&dir, &stem)?;
            print_report(&report);
            for p in paths {
                println!("wrote {}", p.display());
            }
            if report.pass() {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
        Command::Verify { out, only } => verify(&out, &only),
    }
}

fn exponents(command: ExponentsCommand) -> Outcome {
    match command {
        ExponentsCommand::Check {
            checker,
            p,
            q,
            r1,
            r2,
            t1,
            t2,
            s1,
            s2,
            d,
        } => {
            let t = IndexTuple::new(p, q, r1, r2, t1, t2).weighted(s1, s2, d);
            println!("admissible: {}", checker.check(&t));
            Ok(())
        }
        ExponentsCommand::Region {
            checker,
            figure,
            spec,
            k,
            out,
        } => {
            let spec = match (figure, spec) {
                (_, Some(path)) => {
                    let text = std::fs::read_to_string(&path)?;
                    serde_json::from_str::<RegionSpec>(&text).map_err(Error::from)?
                }
                (Some(1), None) => RegionSpec::figure1(checker, k),
                (Some(2), None) => RegionSpec::figure2(checker, k),
                (Some(f), None) => return Err(Failure::Usage(format!("no preset for figure {f}; use 1 or 2"))),
                (None, None) => return Err(Failure::Usage("give --figure or --spec".into())),
            };
            let scan = region_scan(&spec)?;
            if let Some(path) = out {
                scan.write_csv(BufWriter::new(File::create(&path)?))?;
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&scan.summary()).map_err(Error::from)?
            );
            Ok(())
        }
    }
}

fn verify(out: &Path, only: &[u8]) -> Outcome {
    let ids: Vec<u8> = if only.is_empty() { CRITERIA.to_vec() } else { only.to_vec() };
    if let Some(bad) = ids.iter().find(|i| !CRITERIA.contains(i)) {
        return Err(Failure::Usage(format!("no acceptance criterion {bad}")));
    }
    let start = std::time::Instant::now();
    let mut criteria = Vec::new();
    for id in ids {
        let c = run_criterion(id);
        println!(
            "criterion {}: {} ({}) {:.1} s: {}",
            c.id,
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.seconds,
            c.summary
        );
        criteria.push(c);
    }
    let report = VerifyReport {
        pass: criteria.iter().all(|c| c.pass),
        seconds: start.elapsed().as_secs_f64(),
        criteria,
    };
    let mut w = BufWriter::new(File::create(out)?);
    serde_json::to_writer_pretty(&mut w, &report).map_err(Error::from)?;
    w.flush()?;
    println!(
        "{} in {:.1} s; report written to {}",
        if report.pass { "all criteria passed" } else { "some criteria failed" },
        report.seconds,
        out.display()
    );
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn compact_support_report(cfg: &ExperimentConfig) -> Result<ExperimentReport, Failure> {
    let reports = compact_support_experiment(cfg)?;
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| !r.spread.is_some_and(|s| s <= 4.0))
        .map(|r| format!("{:?} q={}: spread {:?} exceeds 4", r.direction, r.q, r.spread))
        .collect();
    if !bad.is_empty() {
        for b in &bad {
            eprintln!("{b}");
        }
    }
    Ok(ExperimentReport {
        experiment: "compact-support".into(),
        checks: vec![],
        warnings: bad,
        series: vec![],
        details: serde_json::to_value(&reports).map_err(Error::from)?,
    })
}

fn print_report(r: &ExperimentReport) {
    for c in &r.checks {
        println!(
            "{}: predicted {:+.4}, fitted {:+.4}, tolerance {} -> {}",
            c.experiment,
            c.predicted_slope,
            c.fitted_slope,
            c.tolerance,
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
}

fn load_signal(a: &SignalArgs) -> Result<Signal, Failure> {
    match (&a.input, a.gaussian) {
        (Some(path), _) => Ok(read_signal_csv(File::open(path)?)?),
        (None, Some(lambda)) => {
            let grid = make_grid(a.grid.n, a.grid.extent)?;
            Ok(ChirpedGaussian::dilated(lambda, 1)?.sample(grid)?)
        }
        (None, None) => Err(Failure::Usage("give --input or --gaussian".into())),
    }
}

fn load_symbol(spec: &str, f: &Signal) -> Result<SymbolGrid, Failure> {
    let grid = *f.grid();
    let desc = match spec {
        "one" => SymbolDescriptor::constant(Complex64::new(1.0, 0.0)),
        "standard-gaussian" => SymbolDescriptor::standard_gaussian(),
        s if s.starts_with("gaussian-pair:") => {
            let lambda: f64 = s["gaussian-pair:".len()..]
                .parse()
                .map_err(|_| Failure::Usage(format!("bad λ in symbol `{s}`")))?;
            SymbolDescriptor::gaussian_pair(lambda)
        }
        path => return Ok(SymbolGrid::read_csv(File::open(path)?)?),
    };
    Ok(SymbolGrid::closed_form(grid, desc))
}
