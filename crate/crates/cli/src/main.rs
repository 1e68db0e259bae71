use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use geocalc_cli::registry::{listing, FIELDS, PATCHES};
use geocalc_cli::scenario::DerivativeName;
use geocalc_cli::{parse_scenario, run_scenario, write_outcome, Check, RunOptions, Scenario};

#[derive(Parser, Debug)]
#[command(name = "geocalc", version, about = "Run geometric-calculus integration checks")]
struct Cli {
    /// Print the patch registry and exit.
    #[arg(long)]
    list_patches: bool,

    /// Print the field registry and exit.
    #[arg(long)]
    list_fields: bool,

    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug)]
struct Common {
    /// Gauss points per axis, overriding the scenario.
    #[arg(long, global = true)]
    quad_q: Option<usize>,

    /// Subdivisions per axis, overriding the scenario.
    #[arg(long, global = true)]
    quad_m: Option<usize>,

    /// Worker threads for quadrature (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// CSV file for `run` and `identities`, directory for `suite`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Write zero wall-clock times so reruns are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one scenario file.
    Run { scenario: PathBuf },
    /// Run every `*.toml` scenario in a directory, in name order.
    Suite { dir: PathBuf },
    /// Check the vector-derivative identities at random points.
    Identities {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = Derivatives::Fd)]
        derivatives: Derivatives,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Derivatives {
    Fd,
    Analytic,
}

fn options(c: &Common) -> RunOptions {
    RunOptions {
        quad_q: c.quad_q,
        quad_m: c.quad_m,
        seed: c.seed,
        no_timing: c.no_timing,
    }
}

fn default_csv(s: &Scenario) -> PathBuf {
    PathBuf::from(s.output.clone().unwrap_or_else(|| format!("{}.csv", s.name)))
}

/// Runs one scenario; `Ok(passed)` or an error message.
fn execute(s: &Scenario, opts: &RunOptions, csv: &Path) -> Result<bool, String> {
    let outcome = run_scenario(s, opts).map_err(|e| e.to_string())?;
    write_outcome(&outcome, csv).map_err(|e| e.to_string())?;
    print!("{}", outcome.summary);
    println!("  wrote {}", csv.display());
    Ok(outcome.passed)
}

fn load(path: &Path) -> Result<Scenario, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_scenario(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_patches || cli.list_fields {
        if cli.list_patches {
            print!("{}", listing(PATCHES));
        }
        if cli.list_fields {
            print!("{}", listing(FIELDS));
        }
        return ExitCode::SUCCESS;
    }
    if let Some(t) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let opts = options(&cli.common);
    let result = match cli.command {
        None => {
            eprintln!("error: no command given; see --help");
            return ExitCode::from(2);
        }
        Some(Command::Run { scenario }) => load(&scenario).and_then(|s| {
            let csv = cli.common.out.clone().unwrap_or_else(|| default_csv(&s));
            execute(&s, &opts, &csv)
        }),
        Some(Command::Identities { dim, trials, derivatives }) => {
            let s = Scenario {
                name: format!("identities_n{dim}"),
                check: Check::Identities,
                dim: Some(dim),
                trials: Some(trials),
                derivatives: Some(match derivatives {
                    Derivatives::Fd => DerivativeName::Fd,
                    Derivatives::Analytic => DerivativeName::Analytic,
                }),
                tolerance: None,
                output: None,
                seed: None,
                points: vec![],
                quadrature: Default::default(),
                patch: None,
                curves: vec![],
                f: None,
                g: None,
                sample: None,
            };
            let csv = cli.common.out.clone().unwrap_or_else(|| default_csv(&s));
            execute(&s, &opts, &csv)
        }
        Some(Command::Suite { dir }) => run_suite(&dir, cli.common.out.as_deref(), &opts),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run_suite(dir: &Path, out: Option<&Path>, opts: &RunOptions) -> Result<bool, String> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(format!("no scenario files in {}", dir.display()));
    }
    let out = out.unwrap_or(Path::new("out"));
    let mut failed = Vec::new();
    for f in &files {
        let res = load(f).and_then(|s| {
            let name = default_csv(&s);
            let csv = out.join(name.file_name().unwrap_or(name.as_os_str()));
            execute(&s, opts, &csv)
        });
        match res {
            Ok(true) => {}
            Ok(false) => failed.push(f.display().to_string()),
            Err(msg) => {
                eprintln!("error: {msg}");
                failed.push(f.display().to_string());
            }
        }
    }
    println!("{} of {} scenarios passed", files.len() - failed.len(), files.len());
    for f in &failed {
        println!("  failed: {f}");
    }
    Ok(failed.is_empty())
}
