use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use residue_cli::doc::{registry_plan, LambdaGrid, Pipeline, Plan, ScenarioDocument, SchemaError, REGISTRY};
use residue_cli::report::{Format, RunReport, Stamp};
use residue_cli::run::{self, Failure};
use residue_cli::{EXIT_CHECK_FAILED, EXIT_EXEC, EXIT_OK, EXIT_SCHEMA, OUT_ENV};

/// Residue currents on monomial charts: exact decompositions, Mellin
/// continuation and regularized limits.
#[derive(Parser)]
#[command(name = "residue", version)]
struct Cli {
    /// Quadrature tolerance for document pipelines.
    #[arg(long, global = true, allow_negative_numbers = true, value_parser = positive_f64)]
    tol: Option<f64>,
    /// Node budget per quadrature call for document pipelines.
    #[arg(long, global = true, value_parser = positive_u64)]
    budget: Option<u64>,
    /// Recorded in the report stamp. No shipped pipeline draws random numbers.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long, global = true, env = OUT_ENV, default_value = "residue-out")]
    out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Both)]
    format: Format,
    /// Add per-check runtimes to the TOML report and to stderr.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Registry scenarios.
    List,
    /// Correct a form so that dσ∧α' = 0 and verify the result exactly.
    Decompose {
        /// e.g. "z2 dz2" or "1*z^(0,1) dz{2}"
        #[arg(long)]
        form: String,
        /// A monic monomial, e.g. "z1 z3^2".
        #[arg(long)]
        sigma: String,
        /// 1-based coordinate indices, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        tau: Vec<usize>,
        /// Ambient dimension; inferred from the inputs when absent.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Mellin-transform values on a λ-grid from a document.
    Mellin { doc: PathBuf },
    /// Regularized integrals along ε-paths from a document.
    Regularize { doc: PathBuf },
    /// A registry scenario by name, or any scenario document.
    #[command(visible_alias = "run")]
    Scenario {
        target: String,
        /// section3 only: default, coarse, or points "a,b,c;d,e,f".
        #[arg(long)]
        lambda_grid: Option<String>,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("must be positive and finite, got {v}")),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_u64(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn load(path: &Path) -> Result<ScenarioDocument, SchemaError> {
    let text = std::fs::read_to_string(path).map_err(|e| SchemaError::new("document", format!("{}: {e}", path.display())))?;
    ScenarioDocument::from_toml(&text)
}

fn plan_for(cli: &Cli) -> Result<Option<Plan>, SchemaError> {
    let from_doc = |path: &Path, want: Option<Pipeline>| -> Result<Plan, SchemaError> {
        let doc = load(path)?;
        if let Some(w) = want {
            if doc.pipeline != w {
                return Err(SchemaError::new("pipeline", format!("expected `{}`, found `{}`", w.name(), doc.pipeline.name())));
            }
        }
        doc.validate()
    };
    let plan = match &cli.command {
        Command::List | Command::Decompose { .. } => return Ok(None),
        Command::Mellin { doc } => from_doc(doc, Some(Pipeline::Mellin))?,
        Command::Regularize { doc } => from_doc(doc, Some(Pipeline::Regularize))?,
        Command::Scenario { target, lambda_grid } => {
            let path = Path::new(target);
            if path.extension().is_some_and(|e| e == "toml") || path.is_file() {
                if lambda_grid.is_some() {
                    return Err(SchemaError::new("--lambda-grid", "set `scenario.lambda_grid` in the document instead"));
                }
                from_doc(path, None)?
            } else {
                let grid = lambda_grid.as_deref().map(|g| LambdaGrid::parse(g, "--lambda-grid")).transpose()?;
                registry_plan(target, grid, "scenario", "--lambda-grid")?
            }
        }
    };
    let mut plan = plan;
    plan.override_quadrature(cli.tol, cli.budget);
    Ok(Some(plan))
}

fn finish(cli: &Cli, rep: &RunReport) -> ExitCode {
    print!("{}", rep.summary());
    if cli.timings {
        for c in &rep.checks {
            eprintln!("{:>10.3}s  {}", c.seconds, c.name);
        }
    }
    match rep.export(&cli.out, cli.format, cli.timings) {
        Ok(files) => {
            for f in files {
                eprintln!("wrote {}", f.display());
            }
        }
        Err(e) => {
            eprintln!("error: writing to {}: {e}", cli.out.display());
            return ExitCode::from(EXIT_EXEC as u8);
        }
    }
    ExitCode::from(if rep.passed() { EXIT_OK } else { EXIT_CHECK_FAILED } as u8)
}

fn fail(f: Failure) -> ExitCode {
    match f {
        Failure::Schema(e) => {
            eprintln!("error: invalid input at {e}");
            ExitCode::from(EXIT_SCHEMA as u8)
        }
        Failure::Exec(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_EXEC as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stamp = Stamp::new(cli.seed, cli.tol, cli.budget);
    if let Command::List = cli.command {
        for (name, what) in REGISTRY {
            println!("{name:<12} {what}");
        }
        return ExitCode::from(EXIT_OK as u8);
    }
    if let Command::Decompose { form, sigma, tau, dim } = &cli.command {
        return match run::decompose(form, sigma, tau, *dim, stamp) {
            Ok(rep) => finish(&cli, &rep),
            Err(f) => fail(f),
        };
    }
    let plan = match plan_for(&cli) {
        Ok(Some(p)) => p,
        Ok(None) => unreachable!("list and decompose return above"),
        Err(e) => return fail(e.into()),
    };
    match run::run(&plan, stamp) {
        Ok(rep) => finish(&cli, &rep),
        Err(e) => fail(e.into()),
    }
}
