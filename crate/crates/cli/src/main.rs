//! `sunqps`: generators, coherent states, kernels, distributions, recovery,
//! identity checks and Werner scans from the command line.
//!
//! Exit status: 0 on success, 1 on invalid input, 2 when a numerical-quality
//! check fails (identity residual above tolerance, ill-conditioned kernel).

mod config;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use sunqps::algebra::build_generators;
use sunqps::distributions::{recover_with_builder, DensityMatrix, DistributionEvaluator};
use sunqps::io::{
    read_density, read_samples, write_density, write_json, write_samples, write_scan,
    GeneratorsDoc, KernelDoc, SampleRow, StateDoc,
};
use sunqps::kernels::{convert_kernel_m1, KernelBuilder, DEFAULT_CONDITION_CAP};
use sunqps::quadrature::default_resolution;
use sunqps::werner::{negativity_scan, threshold_bisect, PhiCase, WernerParams};
use sunqps::{coherent_state, Error, PhasePoint, QuadratureGrid, SOrder};

#[derive(Debug, Parser)]
#[command(name = "sunqps", version, about = "SU(N) Wigner, Q and P functions over generalized coherent states")]
#[command(args_override_self = true)]
struct Cli {
    /// Worker threads for quadrature and scans (default: all cores)
    #[arg(long, global = true, env = "SUNQPS_THREADS")]
    threads: Option<usize>,

    /// JSON object of flag values applied before the command-line flags
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Export the generators Λ(k) of the (N, M) representation as JSON
    Generators {
        #[command(flatten)]
        rep: Rep,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coherent-state amplitudes at a phase-space point
    Coherent {
        #[command(flatten)]
        rep: Rep,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kernel matrix F^s at a phase-space point
    Kernel {
        #[command(flatten)]
        rep: Rep,
        #[arg(long, allow_hyphen_values = true)]
        s: SOrder,
        #[command(flatten)]
        point: PointArgs,
        /// Build F at this ordering and convert it to `--s`
        #[arg(long, allow_hyphen_values = true, value_name = "S")]
        convert_from: Option<SOrder>,
        /// Condition-number cap for M = 2 conversions
        #[arg(long, default_value_t = DEFAULT_CONDITION_CAP)]
        condition_cap: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate f^s = Tr[ρ F^s] at a point, or over a quadrature grid as CSV
    Distribution {
        #[command(flatten)]
        rep: Rep,
        #[arg(long, allow_hyphen_values = true)]
        s: SOrder,
        /// Density matrix JSON
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required_unless_present = "grid")]
        theta: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required_unless_present = "grid")]
        phi: Option<Vec<f64>>,
        /// Sample every point of the quadrature grid (samples CSV, readable by `recover`)
        #[arg(long, conflicts_with_all = ["theta", "phi"])]
        grid: bool,
        #[command(flatten)]
        res: GridArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct ρ from f^s samples with the dual kernel F^{-s}
    Recover {
        #[command(flatten)]
        rep: Rep,
        #[arg(long, allow_hyphen_values = true)]
        s: SOrder,
        #[arg(long, value_enum)]
        samples_from: SampleSource,
        /// Density matrix JSON sampled exactly (with `--samples-from exact`)
        #[arg(long, required_if_eq("samples_from", "exact"))]
        state: Option<PathBuf>,
        /// Samples CSV written by `distribution --grid` (with `--samples-from file`)
        #[arg(long, required_if_eq("samples_from", "file"))]
        samples: Option<PathBuf>,
        #[command(flatten)]
        res: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the integral identities by quadrature and print a JSON report
    Verify {
        #[command(flatten)]
        rep: Rep,
        #[command(flatten)]
        res: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lattice scan of the Werner-state section over θ₁, θ₂, θ₃ as CSV
    WernerScan {
        #[arg(long, allow_hyphen_values = true)]
        s: SOrder,
        #[arg(long)]
        gamma: f64,
        #[arg(long, value_enum, default_value_t = PhiCaseArg::Aligned)]
        phi_case: PhiCaseArg,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smallest γ at which the Werner section turns negative
    WernerThreshold {
        #[arg(long, allow_hyphen_values = true)]
        s: SOrder,
        #[arg(long, value_enum, default_value_t = PhiCaseArg::Aligned)]
        phi_case: PhiCaseArg,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
struct Rep {
    /// SU(N)
    #[arg(long)]
    n: usize,
    /// Symmetric rank M
    #[arg(long, default_value_t = 1)]
    m: usize,
}

#[derive(Debug, Args)]
struct PointArgs {
    /// Comma-separated θ₁..θ_{N-1}, each in [0, π/2]
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    theta: Vec<f64>,
    /// Comma-separated φ₁..φ_{N-1}, each in [0, 2π]
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    phi: Vec<f64>,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Gauss–Legendre points per θ (default 2M+N+2)
    #[arg(long)]
    grid_theta: Option<usize>,
    /// Equispaced points per φ (default 4M+4)
    #[arg(long)]
    grid_phi: Option<usize>,
}

impl GridArgs {
    fn build(&self, n: usize, m: usize) -> sunqps::Result<QuadratureGrid> {
        let (t, p) = default_resolution(n, m);
        QuadratureGrid::new(n, self.grid_theta.unwrap_or(t), self.grid_phi.unwrap_or(p))
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SampleSource {
    Exact,
    File,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PhiCaseArg {
    Aligned,
    Anti,
}

impl From<PhiCaseArg> for PhiCase {
    fn from(a: PhiCaseArg) -> Self {
        match a {
            PhiCaseArg::Aligned => PhiCase::Aligned,
            PhiCaseArg::Anti => PhiCase::Anti,
        }
    }
}

enum Failure {
    Input(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Conditioning { .. } => Failure::Numerical(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_density(path: &Path) -> Result<DensityMatrix, Failure> {
    read_density(open(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn point(theta: Vec<f64>, phi: Vec<f64>, n: usize) -> Result<PhasePoint, Failure> {
    if theta.len() != n - 1 || phi.len() != n - 1 {
        return Err(Failure::Input(format!(
            "N = {n} needs {} theta and {} phi values, got {} and {}",
            n - 1,
            n - 1,
            theta.len(),
            phi.len()
        )));
    }
    Ok(PhasePoint::new(theta, phi)?)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Generators { rep, out } => {
            let gens = build_generators(rep.n, rep.m)?;
            write_json(output(out.as_deref())?, &GeneratorsDoc::new(&gens))?;
        }
        Command::Coherent { rep, point: p, out } => {
            let pt = point(p.theta, p.phi, rep.n)?;
            let cs = coherent_state(rep.n, rep.m, &pt)?;
            write_json(output(out.as_deref())?, &StateDoc::new(&cs))?;
        }
        Command::Kernel {
            rep,
            s,
            point: p,
            convert_from,
            condition_cap,
            out,
        } => {
            let pt = point(p.theta, p.phi, rep.n)?;
            let builder = KernelBuilder::new(rep.n, rep.m)?;
            let kernel = match convert_from {
                None => builder.kernel(s, &pt)?,
                Some(from) => {
                    let src = builder.kernel(from, &pt)?;
                    if rep.m == 1 {
                        convert_kernel_m1(&src, s)?
                    } else {
                        builder.convert(&src, s, condition_cap)?
                    }
                }
            };
            write_json(output(out.as_deref())?, &KernelDoc::new(&kernel))?;
        }
        Command::Distribution {
            rep,
            s,
            state,
            theta,
            phi,
            grid,
            res,
            format,
            out,
        } => {
            let rho = load_density(&state)?;
            let eval = DistributionEvaluator::new(rho, rep.n, rep.m)?;
            let w = output(out.as_deref())?;
            if grid {
                let g = res.build(rep.n, rep.m)?;
                let rows = sample_grid(&eval, s, &g)?;
                write_samples(w, rep.n, &rows)?;
            } else {
                let pt = point(theta.unwrap_or_default(), phi.unwrap_or_default(), rep.n)?;
                let sample = eval.eval(s, &pt)?;
                match format {
                    Format::Json => write_json(
                        w,
                        &serde_json::json!({
                            "n": rep.n,
                            "m": rep.m,
                            "s": s.value(),
                            "theta": pt.thetas(),
                            "phi": pt.phis(),
                            "value": sample.value,
                        }),
                    )?,
                    Format::Csv => {
                        let row = SampleRow {
                            index: 0,
                            point: pt,
                            s,
                            value: sample.value,
                        };
                        write_samples(w, rep.n, &[row])?
                    }
                }
            }
        }
        Command::Recover {
            rep,
            s,
            samples_from,
            state,
            samples,
            res,
            out,
        } => {
            let g = res.build(rep.n, rep.m)?;
            let builder = KernelBuilder::new(rep.n, rep.m)?;
            let (recovery, reference) = match samples_from {
                SampleSource::Exact => {
                    let path = state.expect("required by clap");
                    let rho = load_density(&path)?;
                    let eval = DistributionEvaluator::with_builder(rho.clone(), builder.clone())?;
                    let r = recover_with_builder(|_, pt| Ok(eval.eval(s, pt)?.value), &builder, s, &g)?;
                    (r, Some(rho))
                }
                SampleSource::File => {
                    let path = samples.expect("required by clap");
                    let values = read_samples(open(&path)?, &g, s)
                        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    let r = recover_with_builder(|i, _| Ok(values[i]), &builder, s, &g)?;
                    (r, None)
                }
            };
            eprintln!("trace error: {:.3e}", recovery.trace_error);
            eprintln!("min eigenvalue: {:.6e}", recovery.min_eigenvalue);
            if let Some(rho) = &reference {
                eprintln!("frobenius error: {:.3e}", recovery.frobenius_error(rho));
            }
            if recovery.positivity_warning {
                eprintln!("warning: recovered matrix has a negative eigenvalue below -1e-8");
            }
            write_density(output(out.as_deref())?, &recovery.matrix)?;
        }
        Command::Verify { rep, res, out } => {
            let g = res.build(rep.n, rep.m)?;
            let report = sunqps::verify::run(rep.n, rep.m, &g)?;
            write_json(output(out.as_deref())?, &report)?;
            if !report.passed {
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name.as_str())
                    .collect();
                return Err(Failure::Numerical(format!(
                    "identity checks failed: {}",
                    failed.join(", ")
                )));
            }
        }
        Command::WernerScan {
            s,
            gamma,
            phi_case,
            resolution,
            out,
        } => {
            let scan = negativity_scan(WernerParams::new(gamma)?, s, phi_case.into(), resolution)?;
            write_scan(output(out.as_deref())?, &scan)?;
            eprintln!(
                "{} of {} cells negative, min value {:.6e}",
                scan.negative_count(),
                scan.cells.len(),
                scan.min_value
            );
        }
        Command::WernerThreshold { s, phi_case, tol } => {
            match threshold_bisect(s, phi_case.into(), tol)? {
                Some(g) => println!("{g}"),
                None => println!("no threshold"),
            }
        }
    }
    Ok(())
}

fn sample_grid(eval: &DistributionEvaluator, s: SOrder, g: &QuadratureGrid) -> Result<Vec<SampleRow>, Failure> {
    use rayon::prelude::*;
    let rows = (0..g.len())
        .into_par_iter()
        .map(|i| {
            let (pt, _) = g.point(i);
            let value = eval.eval(s, &pt)?.value;
            Ok(SampleRow {
                index: i,
                point: pt,
                s,
                value,
            })
        })
        .collect::<sunqps::Result<Vec<_>>>()?;
    Ok(rows)
}

fn main() -> ExitCode {
    let args = match config::expand(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
