use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hypersum::quantity::{self, QUANTITIES};
use hypersum::registry::param_names;
use hypersum::report::{emit_report, worst_status, IdentityId, ReportFormat, Status};
use hypersum::sweep::{axis_values, run_checks, Grid, SweepOptions};
use indexmap::IndexMap;

/// Exact and numeric verification of hypergeometric summation identities.
#[derive(Debug, Parser)]
#[command(name = "hypersum", version, arg_required_else_help = true)]
struct Cli {
    /// List every identity and quantity, then exit.
    #[arg(long)]
    list: bool,

    /// Report format.
    #[arg(long, global = true, default_value = "text")]
    format: ReportFormat,

    /// Worker threads for multi-point runs (0 = one per core).
    #[arg(long, global = true, env = "HYPERSUM_JOBS", default_value_t = 0)]
    jobs: usize,

    /// Record wall-clock time per check (otherwise elapsed_micros is 0).
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check an identity over the given values or ranges (`lo..hi`, `v1|v2`).
    Verify {
        identity: IdentityId,
        #[command(flatten)]
        values: Values,
        /// Checks N = 1..=N_MAX (eq6).
        #[arg(long, value_name = "N_MAX")]
        n_max: Option<String>,
        /// Tolerance for numeric identities.
        #[arg(long)]
        tol: Option<String>,
    },
    /// Evaluate one quantity at a point.
    Eval {
        quantity: String,
        #[command(flatten)]
        values: Values,
        /// Real argument (gamma).
        #[arg(long)]
        x: Option<String>,
    },
    /// Check an identity over a grid such as `m=0..25,n=0..25`.
    Sweep {
        identity: IdentityId,
        #[arg(long)]
        grid: Grid,
        /// Values held fixed across the grid.
        #[command(flatten)]
        values: Values,
        /// Tolerance for numeric identities.
        #[arg(long)]
        tol: Option<String>,
    },
}

#[derive(Debug, Args)]
struct Values {
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    #[arg(long = "N", value_name = "N")]
    big_n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    j: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    i: Option<String>,
    #[arg(long)]
    size: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    #[arg(long)]
    h: Option<String>,
}

impl Values {
    fn named(&self) -> Vec<(&'static str, &String)> {
        [
            ("m", &self.m),
            ("n", &self.n),
            ("N", &self.big_n),
            ("k", &self.k),
            ("j", &self.j),
            ("i", &self.i),
            ("size", &self.size),
            ("a", &self.a),
            ("b", &self.b),
            ("c", &self.c),
            ("t", &self.t),
            ("h", &self.h),
        ]
        .into_iter()
        .filter_map(|(name, v)| v.as_ref().map(|v| (name, v)))
        .collect()
    }
}

/// Failure that maps to exit status 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("hypersum: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, UsageError> {
    if cli.list {
        print_list();
        return Ok(ExitCode::SUCCESS);
    }
    let opts = SweepOptions {
        jobs: cli.jobs,
        timings: cli.timings,
    };
    let (identity, grid, fixed) = match &cli.command {
        None => return Err(UsageError("a subcommand or --list is required".into())),
        Some(Command::Eval { quantity, values, x }) => {
            let mut params: IndexMap<String, String> =
                values.named().into_iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
            if let Some(x) = x {
                params.insert("x".into(), x.clone());
            }
            let value = quantity::evaluate(quantity, &params)?;
            println!("{value}");
            return Ok(ExitCode::SUCCESS);
        }
        Some(Command::Verify {
            identity,
            values,
            n_max,
            tol,
        }) => {
            let mut grid = Grid::default();
            for (name, spec) in values.named() {
                grid.push(name, axis_values(spec)?)?;
            }
            if let Some(n_max) = n_max {
                let top: i64 = n_max
                    .trim()
                    .parse()
                    .map_err(|_| UsageError(format!("--n-max expects an integer, got '{n_max}'")))?;
                if top < 1 {
                    return Err(UsageError("--n-max must be at least 1".into()));
                }
                grid.push("N", axis_values(&format!("1..{top}"))?)?;
            }
            check_tol(*identity, tol.is_some())?;
            check_axes(*identity, &grid)?;
            (*identity, grid, tol_map(tol))
        }
        Some(Command::Sweep {
            identity,
            grid,
            values,
            tol,
        }) => {
            check_tol(*identity, tol.is_some())?;
            let mut fixed = tol_map(tol);
            for (name, v) in values.named() {
                fixed.insert(name.to_string(), v.clone());
            }
            (*identity, grid.clone(), fixed)
        }
    };
    let checks = grid.checks(identity, &fixed)?;
    let reports = run_checks(&checks, opts);
    let out = emit_report(&reports, cli.format);
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(out.as_bytes())?;
    if !out.ends_with('\n') {
        stdout.write_all(b"\n")?;
    }
    Ok(match worst_status(&reports) {
        Status::Pass => ExitCode::SUCCESS,
        Status::Fail => ExitCode::from(1),
        Status::Error => ExitCode::from(2),
    })
}

fn check_tol(identity: IdentityId, has_tol: bool) -> Result<(), UsageError> {
    if has_tol && !identity.is_numeric() {
        return Err(UsageError(format!(
            "{identity} is an exact identity; --tol is only accepted by eq1, eq2, gamma_xform and qlimit"
        )));
    }
    Ok(())
}

fn check_axes(identity: IdentityId, grid: &Grid) -> Result<(), UsageError> {
    let (required, _) = param_names(identity);
    let missing: Vec<String> = required
        .iter()
        .filter(|name| !grid.axes.iter().any(|a| a.name == **name))
        .map(|name| if *name == "N" { "--N or --n-max".to_string() } else { format!("--{name}") })
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(UsageError(format!("{identity} requires {}", missing.join(", "))))
    }
}

fn tol_map(tol: &Option<String>) -> IndexMap<String, String> {
    tol.iter().map(|t| ("tol".to_string(), t.clone())).collect()
}

fn print_list() {
    println!("identities:");
    for id in IdentityId::ALL {
        let (label, text) = id.description();
        let (required, optional) = param_names(id);
        let mut params = required.join(",");
        for opt in optional {
            params.push_str(&format!(",[{opt}]"));
        }
        println!("  {:<16}{:<10}{:<16}{text}", id.as_str(), label, params);
    }
    println!("quantities:");
    for (name, params, text) in QUANTITIES {
        println!("  {:<16}{:<26}{text}", name, params.join(","));
    }
}
