//! Command-line frontend: every library subsystem exposed as a subcommand
//! with reproducible, machine-readable output.
//!
//! Exit codes: 0 on success, 1 on usage/input errors, 2 when a mathematical
//! hypothesis of the requested method is violated by the data (and when the
//! built-in verification suite fails). The `FRACCALC_THREADS` environment
//! variable caps internal parallelism; a fixed `--seed` makes output bytes
//! reproducible.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fraccalc::admissibility::{self, CertOptions};
use fraccalc::algebra::{self, AnalyticFn, NormOptions};
use fraccalc::approxid::{ApproxIdFamily, FamilyKind};
use fraccalc::cesaro::{self, CoeffSeq};
use fraccalc::error::Error;
use fraccalc::fracdiff::{self, TailModel};
use fraccalc::funcalc::{self, RateVariant, SeriesSumReport, SolveOptions};
use fraccalc::operators::{self, LinOp, WeightedVector};

#[derive(Parser)]
#[command(
    name = "fraccalc",
    version,
    about = "Fractional discrete calculus, weighted series algebras, and the \
             series functional calculus for Cesàro-bounded operators",
    after_help = "Outputs are data-only (CSV or JSON) and byte-reproducible \
                  for a fixed seed. Plotting is left to external tools."
)]
struct Cli {
    /// Relative tolerance for adaptive summations.
    #[arg(long, global = true, default_value_t = 1e-7)]
    rel_tol: f64,
    /// Summation horizon for series solvers.
    #[arg(long, global = true, default_value_t = 16384)]
    n_max: usize,
    /// Seed for random probes; fixes the output bytes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format where both are supported.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the primary output to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct ModelArgs {
    /// Operator model.
    #[arg(long, value_enum)]
    model: Model,
    /// Weight exponent of the shift's sequence space (0 < beta < 1).
    #[arg(long, default_value_t = 0.6)]
    beta: f64,
    /// Truncation length for the shift model.
    #[arg(long, default_value_t = 4096)]
    len: usize,
    /// Grid resolution for the integration model.
    #[arg(long, default_value_t = 2000)]
    grid_n: usize,
    /// CSV file with a dense square matrix (one row per line).
    #[arg(long)]
    matrix: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Model {
    /// Backward shift on the weighted square-summable sequence space.
    Shift,
    /// Complement of the integration operator on [0,1].
    Volterra,
    /// Dense matrix loaded from CSV.
    Matrix,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum DiffKind {
    /// Weyl sum of order alpha (fractional summation).
    WeylSum,
    /// Weyl difference of order alpha.
    WeylDiff,
    /// Forward fractional difference of order alpha.
    DAlpha,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Route {
    /// Cesàro-sum series of order alpha.
    Cesaro,
    /// Plain Taylor series in powers of the operator.
    Taylor,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// Partial sums of the fractional-difference representation.
    Fractional,
    /// Plain Taylor partial sums.
    Taylor,
    /// Taylor partial sums of the logarithm kernel.
    LogKernel,
}

#[derive(Subcommand)]
enum Cmd {
    /// Binomial-series coefficients k^a(0..=n) of (1-z)^-a.
    Cesaro {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        n: usize,
    },
    /// Fractional differences and sums of a coefficient file.
    Fracdiff {
        #[arg(long, value_enum)]
        kind: DiffKind,
        #[arg(long)]
        alpha: f64,
        /// Input CSV with `index,value` rows.
        #[arg(long)]
        input: PathBuf,
        /// Tail model: exponent of the assumed power continuation.
        #[arg(long)]
        tail_exponent: Option<f64>,
        /// Tail model: coefficient of the assumed power continuation.
        #[arg(long, default_value_t = 1.0)]
        tail_coefficient: f64,
    },
    /// Weighted-algebra norm report of an analytic function.
    Norm {
        #[arg(long)]
        alpha: f64,
        /// Function: `kpower:<s>`, `log`, `one`, or a coefficient CSV path.
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 4096)]
        window: usize,
    },
    /// Admissibility certificate of an analytic function.
    Admissible {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 128)]
        n_check: usize,
    },
    /// Approximate-identity family: member norms and unit distances.
    Approxid {
        #[arg(long)]
        function: String,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        alpha: f64,
        /// Member indices, comma separated.
        #[arg(long, default_value = "8,32,128")]
        members: String,
    },
    /// Boundedness-constant estimate for an operator model.
    OperatorProbe {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 8)]
        probes: usize,
    },
    /// Cesàro-mean norm trajectory of an input vector.
    Ergodic {
        #[command(flatten)]
        model: ModelArgs,
        /// Mean order.
        #[arg(long)]
        order: f64,
        /// Input vector CSV (`index,value`); zero-extended to the model.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "16,64,256,1024")]
        n_list: String,
    },
    /// Solve (I-T)^s u = x by the series characterization.
    Poisson {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Route::Cesaro)]
        route: Route,
    },
    /// Apply log(I-T) by its series representation.
    Log {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Route::Cesaro)]
        route: Route,
    },
    /// Apply the smoothed one-sided Hilbert transform (equals -log(I-T)).
    Hilbert {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        input: PathBuf,
    },
    /// Weighted decay trajectories for range-constructed inputs.
    Rates {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Route::Cesaro)]
        variant: Route,
        #[arg(long, default_value = "64,128,256,512,1024,2048")]
        n_list: String,
    },
    /// Run the built-in verification suite and print a pass/fail table.
    Selftest,
}

fn main() -> ExitCode {
    // cap the worker pool before any parallel region spins up
    if let Ok(threads) = std::env::var("FRACCALC_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap's default exit code for usage errors is 2; this tool
            // reserves 2 for hypothesis violations
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_hypothesis_class() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn dispatch(cli: &Cli) -> fraccalc::Result<()> {
    match &cli.cmd {
        Cmd::Cesaro { alpha, n } => {
            let seq = cesaro::cesaro_numbers(*alpha, *n);
            emit_seq(cli, &seq)
        }
        Cmd::Fracdiff {
            kind,
            alpha,
            input,
            tail_exponent,
            tail_coefficient,
        } => {
            let seq = read_coeff_csv(input)?;
            let tail = match tail_exponent {
                Some(p) => TailModel::power(*p, *tail_coefficient),
                None => TailModel::ZeroTail,
            };
            let out = match kind {
                DiffKind::WeylSum => fracdiff::weyl_sum(&seq, *alpha, &tail)?,
                DiffKind::WeylDiff => fracdiff::weyl_diff(&seq, *alpha, &tail)?,
                DiffKind::DAlpha => fracdiff::d_alpha(&seq, *alpha, &tail)?,
            };
            emit_seq(cli, &out.seq)
        }
        Cmd::Norm {
            alpha,
            function,
            window,
        } => {
            let f = parse_function(function, 8 * window)?;
            let opts = NormOptions {
                n_out: *window,
                rel_tol: cli.rel_tol,
            };
            let rep = algebra::alpha_norm(&f, *alpha, &f.coeff_tail_model(), &opts)?;
            emit_json(cli, &serde_json::to_value(&rep).unwrap())
        }
        Cmd::Admissible {
            alpha,
            function,
            n_check,
        } => {
            let f = parse_function(function, 16 * n_check + 4096)?;
            let cert = admissibility::check_admissible(
                &f,
                *alpha,
                *n_check,
                &f.coeff_tail_model(),
                &CertOptions::default(),
            )?;
            let mut val = serde_json::to_value(&cert).unwrap();
            val["positive"] = serde_json::Value::Bool(cert.positive());
            emit_json(cli, &val)
        }
        Cmd::Approxid {
            function,
            kind,
            alpha,
            members,
        } => {
            let ns = parse_index_list(members)?;
            let n_top = ns.iter().copied().max().unwrap_or(8);
            let f = parse_function(function, 16 * n_top + 8192)?;
            let fam_kind = match kind {
                Kind::Fractional => FamilyKind::FractionalGn,
                Kind::Taylor => FamilyKind::TaylorG0n,
                Kind::LogKernel => FamilyKind::LogGLn,
            };
            let family = ApproxIdFamily::new(f, *alpha, fam_kind, 32 * n_top + 8192)?;
            let mut rows = String::from("n,norm,unit_distance\n");
            for &n in &ns {
                let norm = family.member_norm(n, *alpha)?.norm_value;
                let dist = family.unit_distance(n, *alpha)?;
                rows.push_str(&format!("{n},{norm},{dist}\n"));
            }
            emit_text(cli, &rows)
        }
        Cmd::OperatorProbe {
            model,
            alpha,
            probes,
        } => {
            let op = build_model(model)?;
            let est = operators::estimate_k_alpha(
                &op,
                *alpha,
                cli.n_max.min(op.vector_len().saturating_sub(1)),
                *probes,
                cli.seed,
            )?;
            emit_json(cli, &serde_json::to_value(&est).unwrap())
        }
        Cmd::Ergodic {
            model,
            order,
            input,
            n_list,
        } => {
            let op = build_model(model)?;
            let x = read_vector(input, &op)?;
            let ns = parse_index_list(n_list)?;
            let traj = operators::mean_ergodic_probe(&op, *order, &x, &ns)?;
            let mut rows = String::from("n,mean_norm\n");
            for (n, v) in ns.iter().zip(&traj) {
                rows.push_str(&format!("{n},{v}\n"));
            }
            emit_text(cli, &rows)
        }
        Cmd::Poisson {
            model,
            alpha,
            s,
            input,
            route,
        } => {
            let op = build_model(model)?;
            let x = read_vector(input, &op)?;
            let opts = solve_opts(cli);
            let rep = match route {
                Route::Cesaro => funcalc::poisson_solve_cesaro(&op, *alpha, *s, &x, &opts)?,
                Route::Taylor => funcalc::poisson_solve_taylor(&op, *s, &x, *alpha, &opts)?,
            };
            emit_series_report(cli, &rep)
        }
        Cmd::Log {
            model,
            alpha,
            input,
            route,
        } => {
            let op = build_model(model)?;
            let x = read_vector(input, &op)?;
            let opts = solve_opts(cli);
            let rep = match route {
                Route::Cesaro => funcalc::log_operator(&op, *alpha, &x, &opts)?,
                Route::Taylor => funcalc::log_operator_taylor(&op, &x, *alpha, &opts)?,
            };
            emit_series_report(cli, &rep)
        }
        Cmd::Hilbert {
            model,
            alpha,
            input,
        } => {
            let op = build_model(model)?;
            let x = read_vector(input, &op)?;
            let rep = funcalc::hilbert_transform_alpha(&op, *alpha, &x, &solve_opts(cli))?;
            emit_series_report(cli, &rep)
        }
        Cmd::Rates {
            model,
            alpha,
            s,
            input,
            variant,
            n_list,
        } => {
            let op = build_model(model)?;
            let x = read_vector(input, &op)?;
            let ns = parse_index_list(n_list)?;
            let var = match variant {
                Route::Cesaro => RateVariant::CesaroMean,
                Route::Taylor => RateVariant::PowerMean,
            };
            let rep = funcalc::rate_check(&op, *alpha, *s, &x, &ns, var)?;
            let mut rows = String::from("n,weighted_mean_norm\n");
            for (n, v) in &rep.trajectory {
                rows.push_str(&format!("{n},{v}\n"));
            }
            emit_text(cli, &rows)
        }
        Cmd::Selftest => {
            let outcomes = fraccalc::selftest::run_all();
            let mut all_ok = true;
            println!(
                "{:<6} {:<4} {:<28} {:>9}  detail",
                "status", "crit", "check", "ms"
            );
            for o in &outcomes {
                all_ok &= o.passed;
                println!(
                    "{:<6} {:<4} {:<28} {:>9}  {}",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.criterion,
                    o.id,
                    o.millis,
                    o.detail
                );
            }
            if !all_ok {
                return Err(Error::Hypothesis(
                    "verification suite reported failures".into(),
                ));
            }
            Ok(())
        }
    }
}

fn solve_opts(cli: &Cli) -> SolveOptions {
    SolveOptions {
        n_max: cli.n_max,
        rel_tol: cli.rel_tol,
        ..SolveOptions::default()
    }
}

fn parse_index_list(text: &str) -> fraccalc::Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("bad index {t:?}")))
        })
        .collect()
}

/// Function specifications: `kpower:<s>`, `log`, `one`, or a CSV path.
fn parse_function(spec: &str, len: usize) -> fraccalc::Result<AnalyticFn> {
    if let Some(s) = spec.strip_prefix("kpower:") {
        let s: f64 = s
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad exponent in {spec:?}")))?;
        return Ok(AnalyticFn::k_power(s, len));
    }
    match spec {
        "log" => Ok(AnalyticFn::log_over_z(len)),
        "one" => Ok(AnalyticFn::one(len)),
        path => {
            let seq = read_coeff_csv(&PathBuf::from(path))?;
            Ok(AnalyticFn::from_coeffs(seq))
        }
    }
}

fn read_coeff_csv(path: &PathBuf) -> fraccalc::Result<CoeffSeq> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    CoeffSeq::from_csv(path.display().to_string(), &text)
}

fn read_vector(path: &PathBuf, op: &LinOp) -> fraccalc::Result<WeightedVector> {
    let seq = read_coeff_csv(path)?;
    let mut vals = vec![0.0; op.vector_len()];
    if seq.len() > vals.len() {
        return Err(Error::InvalidInput(format!(
            "input has {} entries but the model carries {}",
            seq.len(),
            vals.len()
        )));
    }
    vals[..seq.len()].copy_from_slice(seq.values());
    Ok(WeightedVector::from_slice(&vals, op.space()))
}

fn build_model(args: &ModelArgs) -> fraccalc::Result<LinOp> {
    match args.model {
        Model::Shift => LinOp::shift(args.beta, args.len),
        Model::Volterra => LinOp::volterra(args.grid_n),
        Model::Matrix => {
            let path = args.matrix.as_ref().ok_or_else(|| {
                Error::InvalidInput("--matrix <csv> is required for the dense model".into())
            })?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("cannot read matrix: {e}")))?;
            let mut rows: Vec<Vec<f64>> = Vec::new();
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let row: Vec<f64> = line
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::InvalidInput(format!("bad entry {t:?}")))
                    })
                    .collect::<fraccalc::Result<_>>()?;
                rows.push(row);
            }
            LinOp::dense_from_rows(&rows)
        }
    }
}

fn emit_seq(cli: &Cli, seq: &CoeffSeq) -> fraccalc::Result<()> {
    match cli.format {
        Format::Csv => emit_text(cli, &seq.to_csv()),
        Format::Json => emit_json(cli, &serde_json::to_value(seq).unwrap()),
    }
}

fn emit_text(cli: &Cli, text: &str) -> fraccalc::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidInput(format!("cannot write output: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(cli: &Cli, value: &serde_json::Value) -> fraccalc::Result<()> {
    let text = format!("{}\n", serde_json::to_string_pretty(value).unwrap());
    emit_text(cli, &text)
}

/// Reports reference the solution file rather than inlining the vector:
/// with `--out` the values land there as CSV and the report goes to stdout.
fn emit_series_report(cli: &Cli, rep: &SeriesSumReport) -> fraccalc::Result<()> {
    let mut csv = String::from("index,value\n");
    for (i, v) in rep.value.entries.iter().enumerate() {
        csv.push_str(&format!("{i},{v}\n"));
    }
    let value_ref = match &cli.out {
        Some(path) => {
            std::fs::write(path, &csv)
                .map_err(|e| Error::InvalidInput(format!("cannot write solution: {e}")))?;
            serde_json::Value::String(path.display().to_string())
        }
        None => serde_json::Value::Null,
    };
    let report = serde_json::json!({
        "verdict": format!("{:?}", rep.verdict).to_lowercase(),
        "terms": rep.terms_used,
        "tail": rep.tail_norm_estimate,
        "smoothed": rep.cesaro_smoothing_used,
        "warning": rep.warning,
        "value_ref": value_ref,
    });
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    if cli.out.is_none() {
        print!("{csv}");
    }
    Ok(())
}
