mod commands;
mod plot;
mod report;
mod spec;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gjl_core::Error;
use serde_json::json;

use commands::{Config, Outcome};

#[derive(Parser)]
#[command(name = "gjl", version, about = "Central-fiber jets of torus geodesics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the JSON report here instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Write `<PREFIX>.dat` and a gnuplot script `<PREFIX>.gp`
    #[arg(long, value_name = "PREFIX")]
    plot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the second-jet boundary value problem
    SecondJet {
        #[arg(long, allow_hyphen_values = true)]
        a0: f64,
        #[arg(long, allow_hyphen_values = true)]
        b0: f64,
        #[arg(long, allow_hyphen_values = true)]
        a1: f64,
        #[arg(long, allow_hyphen_values = true)]
        b1: f64,
        #[arg(long, env = "GJL_DEFAULT_NODES", default_value_t = 64)]
        nodes: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Propagate jets order by order from a potential-spec file
    Propagate {
        /// Potential-spec JSON file
        spec: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_order: usize,
        #[arg(long, env = "GJL_DEFAULT_NODES", default_value_t = 64)]
        nodes: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the obstruction demo for h_n and its perturbation
    Counterexample {
        #[arg(long)]
        n: usize,
        #[arg(long, env = "GJL_DEFAULT_NODES", default_value_t = 64)]
        nodes: usize,
        /// Also report the C^B norm estimate of the pair
        #[arg(long)]
        norm_b: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Solve the regularized geodesic PDE and compare its second jets
    PdeCheck {
        /// Potential-spec JSON file (phi0 must be zero)
        spec: PathBuf,
        #[arg(long, default_value_t = 33)]
        nt: usize,
        #[arg(long, default_value_t = 48)]
        nx: usize,
        #[arg(long, default_value_t = 48)]
        ny: usize,
        /// Regularization schedule, strictly decreasing
        #[arg(long, value_delimiter = ',', default_values_t = vec![1e-1, 1e-2, 1e-3])]
        delta: Vec<f64>,
        #[arg(long, env = "GJL_DEFAULT_NODES", default_value_t = 64)]
        nodes: usize,
        /// Dump the final grid solution as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Recompute a report from the configuration embedded in it
    Rerun {
        report: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

enum Failure {
    Input(String),
    Core(Error),
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Core(e) => match e {
                Error::InvalidArgument(_) | Error::NotConnectable { .. } => 2,
                Error::Domain(_) | Error::InvalidState(_) => 3,
                Error::Numeric(_) => 4,
                Error::Internal(_) | Error::GridMismatch { .. } => 1,
            },
            Failure::Io(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(m) | Failure::Io(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn read_spec(path: &Path) -> Result<spec::ProblemSpec, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(spec::parse(&text)?)
}

fn config_of(command: Command) -> Result<(Config, OutputArgs, Option<PathBuf>), Failure> {
    Ok(match command {
        Command::SecondJet {
            a0,
            b0,
            a1,
            b1,
            nodes,
            out,
        } => (
            Config::SecondJet {
                a0,
                b0,
                a1,
                b1,
                nodes,
            },
            out,
            None,
        ),
        Command::Propagate {
            spec,
            max_order,
            nodes,
            out,
        } => (
            Config::Propagate {
                problem: read_spec(&spec)?,
                max_order,
                nodes,
            },
            out,
            None,
        ),
        Command::Counterexample {
            n,
            nodes,
            norm_b,
            out,
        } => (Config::Counterexample { n, nodes, norm_b }, out, None),
        Command::PdeCheck {
            spec,
            nt,
            nx,
            ny,
            delta,
            nodes,
            csv,
            out,
        } => (
            Config::PdeCheck {
                problem: read_spec(&spec)?,
                nt,
                nx,
                ny,
                delta,
                reference_nodes: nodes,
            },
            out,
            csv,
        ),
        Command::Rerun { report, out } => {
            let text = fs::read_to_string(&report)
                .map_err(|e| Failure::Input(format!("cannot read {}: {e}", report.display())))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| Failure::Input(format!("{}: {e}", report.display())))?;
            let config = value
                .get("config")
                .cloned()
                .ok_or_else(|| Failure::Input("report has no `config` field".into()))?;
            let config: Config = serde_json::from_value(config)
                .map_err(|e| Failure::Input(format!("report config: {e}")))?;
            (config, out, None)
        }
    })
}

fn execute(command: Command) -> Result<(), Failure> {
    let (config, out, csv) = config_of(command)?;
    let Outcome {
        result,
        plot,
        grid,
        error,
    } = commands::run(&config)?;
    let report = json!({
        "config": config,
        "tolerances": commands::tolerances(),
        "result": result,
    });
    let text = report::to_json(&report).map_err(|e| Failure::Io(e.to_string()))?;
    report::emit(&text, out.output.as_deref())
        .map_err(|e| Failure::Io(format!("writing report: {e}")))?;
    if let (Some(prefix), Some(p)) = (&out.plot, &plot) {
        let series = plot::Series {
            title: &p.title,
            t: &p.t,
            a: &p.a,
            b: &p.b,
            sigma2: p.sigma2.clone(),
        };
        plot::write(prefix, &series).map_err(|e| Failure::Io(format!("writing plot: {e}")))?;
    }
    if let (Some(path), Some(sol)) = (csv, grid) {
        let file = fs::File::create(&path)
            .map_err(|e| Failure::Io(format!("cannot create {}: {e}", path.display())))?;
        sol.write_csv(std::io::BufWriter::new(file))?;
    }
    match error {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("gjl: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
