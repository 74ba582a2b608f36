//! `gridcover` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 solver budget exhausted.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gridcover::{
    audit_weighting, check_rows, construct_biregular, construct_square_threehalves, construct_standard, construct_wide,
    delta_genericity, enumerate_lines, experiment_by_id, experiment_suite, export_results, generic_grid, named_grid,
    phi, rectangular_grid, reference_bounds, restricted_lines, run_experiment, solve_ilp, standard_grid, verify_cover,
    verify_weighting, weight_delta_generic, weight_generic, weight_restricted, weight_square_claim, weight_standard,
    Cover, CoverInstance, Error, ExportFormat, Grid, GridKind, IlpBudget, IlpStatus, Rational, Weighting,
    ALL_RESTRICTED_SLOPES,
};

const BUDGET_ENV: &str = "GRIDCOVER_BUDGET_SECS";

#[derive(Parser)]
#[command(name = "gridcover", version, about = "Exact minimum k-covers of planar grids by origin-avoiding lines")]
struct Cli {
    /// Add a decimal approximation next to exact rational output.
    #[arg(long, global = true)]
    float: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
#[group(multiple = false)]
struct GridArgs {
    /// Standard grid {0,...,n-1}^2.
    #[arg(long, value_name = "N")]
    standard: Option<usize>,
    /// Rectangular grid {0,...,n-1} x {0,...,m-1}.
    #[arg(long, num_args = 2, value_names = ["N", "M"])]
    rect: Option<Vec<usize>>,
    /// Exponential grid {0,1,2,4,...,2^(n-2)}^2.
    #[arg(long = "exp", value_name = "N")]
    exponential: Option<usize>,
    /// Quadratic grid {0,1,4,...,(n-1)^2}^2.
    #[arg(long = "quad", value_name = "N")]
    quadratic: Option<usize>,
    /// Seeded generic n x m grid (use with --seed).
    #[arg(long, num_args = 2, value_names = ["N", "M"])]
    generic: Option<Vec<usize>>,
    /// Grid JSON file: {"s1": [...], "s2": [...]}.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
}

#[derive(Args, Clone, Debug)]
struct GridOpts {
    #[command(flatten)]
    grid: GridArgs,
    /// Seed for --generic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GridOpts {
    fn build(&self) -> anyhow::Result<Grid> {
        let g = &self.grid;
        let grid = if let Some(n) = g.standard {
            standard_grid(n)?
        } else if let Some(d) = &g.rect {
            rectangular_grid(d[0], d[1])?
        } else if let Some(n) = g.exponential {
            named_grid(GridKind::Exponential, n)?
        } else if let Some(n) = g.quadratic {
            named_grid(GridKind::Quadratic, n)?
        } else if let Some(d) = &g.generic {
            generic_grid(d[0], d[1], self.seed)?
        } else if let Some(path) = &g.file {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Grid::from_json(&text)?
        } else {
            bail!("no grid given; use --standard, --rect, --exp, --quad, --generic or --file");
        };
        Ok(grid)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Full,
    Restricted,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Construction {
    Wide,
    Biregular,
    Threehalves,
    Standard,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Certificate {
    Generic,
    SquareClaim,
    Delta,
    Standard,
    Restricted,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Count and list the admissible lines of a grid.
    Lines {
        #[command(flatten)]
        grid: GridOpts,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Exact optimum of the fractional covering program.
    Phi {
        #[command(flatten)]
        grid: GridOpts,
        #[arg(long, value_enum, default_value = "full")]
        family: Family,
    },
    /// Minimum k-cover size by branch-and-bound.
    Cov {
        #[command(flatten)]
        grid: GridOpts,
        #[arg(short, long)]
        k: u64,
        #[arg(long, value_enum, default_value = "full")]
        family: Family,
        /// Seed the incumbent with a construction.
        #[arg(long, value_enum)]
        warm_start: Option<Construction>,
        /// Time budget in seconds (default 60, or $GRIDCOVER_BUDGET_SECS).
        #[arg(long, value_name = "SECS")]
        budget: Option<u64>,
        /// Node budget.
        #[arg(long, default_value_t = 1_000_000)]
        max_nodes: u64,
        /// Write the optimal cover to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build and verify an explicit k-cover.
    Construct {
        #[arg(value_enum)]
        kind: Construction,
        #[command(flatten)]
        grid: GridOpts,
        #[arg(short, long)]
        k: u64,
        /// Diagonal offset for the standard construction.
        #[arg(short, long)]
        t: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a dual weighting and check it against its line family.
    Certify {
        #[arg(value_enum)]
        kind: Certificate,
        /// Grid size for `standard` and `restricted`.
        n: Option<u64>,
        #[command(flatten)]
        grid: GridOpts,
        /// Parameter t for `square-claim` and `restricted`.
        #[arg(short, long)]
        t: Option<u64>,
        /// Declared genericity for `delta` (default: the grid's exact value).
        #[arg(long)]
        delta: Option<u64>,
        /// Also check the weighting against the full family, grouped by slope.
        #[arg(long)]
        audit_full: bool,
        /// Write the weighting as JSON.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Largest number of interior points on a line through two boundary points.
    Delta {
        #[command(flatten)]
        grid: GridOpts,
    },
    /// Elementary and Ball–Serra bounds on cov_k.
    Bounds {
        #[command(flatten)]
        grid: GridOpts,
        #[arg(short, long)]
        k: u64,
    },
    /// Run canned experiments and export their result tables.
    Experiment {
        /// E1..E6 or `all`.
        id: String,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "both")]
        format: Format,
        /// Per-instance time budget in seconds.
        #[arg(long, value_name = "SECS")]
        budget: Option<u64>,
    },
}

/// Failure categories that map to exit codes.
enum Outcome {
    Ok,
    VerificationFailed,
    BudgetExceeded,
}

fn exact(q: &Rational, float: bool) -> String {
    if float {
        format!("{q} (~{:.6}, approximate)", q.to_f64())
    } else {
        q.to_string()
    }
}

fn budget_secs(flag: Option<u64>) -> anyhow::Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().with_context(|| format!("{BUDGET_ENV}={v:?} is not a number of seconds")),
        Err(_) => Ok(IlpBudget::default().max_time.as_secs()),
    }
}

fn instance(g: Grid, family: Family, k: u64) -> anyhow::Result<CoverInstance> {
    Ok(match family {
        Family::Full => CoverInstance::full(g, k)?,
        Family::Restricted => CoverInstance::restricted(g, k)?,
    })
}

fn build_construction(kind: Construction, g: &Grid, k: u64, t: Option<u64>) -> anyhow::Result<Cover> {
    Ok(match kind {
        Construction::Wide => construct_wide(g, k)?,
        Construction::Biregular => construct_biregular(g, k)?,
        Construction::Threehalves => construct_square_threehalves(g, k)?,
        Construction::Standard => {
            if !g.is_standard() {
                return Err(Error::NotStandardGrid.into());
            }
            construct_standard(g.n() as u64, k, t)?
        }
    })
}

fn write_file(path: &PathBuf, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let float = cli.float;
    match cli.command {
        Command::Lines { grid, count } => {
            let g = grid.build()?;
            let fam = enumerate_lines(&g);
            println!("{}", fam.len());
            if !count {
                for (line, pts) in fam.iter() {
                    println!("{line} points={}", pts.len());
                }
            }
        }
        Command::Phi { grid, family } => {
            let inst = instance(grid.build()?, family, 1)?;
            println!("{}", exact(&phi(&inst)?, float));
        }
        Command::Cov { grid, k, family, warm_start, budget, max_nodes, output } => {
            let g = grid.build()?;
            let inst = instance(g.clone(), family, k)?;
            let warm = warm_start.map(|kind| build_construction(kind, &g, k, None)).transpose()?;
            let budget = IlpBudget { max_nodes, max_time: Duration::from_secs(budget_secs(budget)?) };
            let r = solve_ilp(&inst, warm.as_ref(), &budget)?;
            println!("{}", r.optimum);
            if let Some(path) = output {
                write_file(&path, &r.cover.to_text(&g))?;
            }
            if r.status == IlpStatus::Timeout {
                eprintln!(
                    "budget exhausted after {} nodes: best cover {}, proven lower bound {}",
                    r.nodes_explored, r.optimum, r.lower_bound
                );
                return Ok(Outcome::BudgetExceeded);
            }
        }
        Command::Construct { kind, grid, k, t, output } => {
            let g = grid.build()?;
            let c = build_construction(kind, &g, k, t)?;
            let report = verify_cover(&g, &c);
            println!("size={} valid={} min_coverage={}", c.size(), report.valid, report.min_coverage);
            if let Some(path) = output {
                write_file(&path, &c.to_text(&g))?;
            }
            if !report.valid {
                return Ok(Outcome::VerificationFailed);
            }
        }
        Command::Certify { kind, n, grid, t, delta, audit_full, output } => {
            let standard_n = || -> anyhow::Result<u64> {
                match (n, grid.grid.standard) {
                    (Some(n), _) => Ok(n),
                    (None, Some(n)) => Ok(n as u64),
                    _ => bail!("this certificate needs a grid size, e.g. `certify {kind:?} 5`"),
                }
            };
            let plain_grid = || -> anyhow::Result<Grid> { grid.build() };
            let (g, w, summary, fam) = match kind {
                Certificate::Generic => {
                    let g = plain_grid()?;
                    let w = weight_generic(&g)?;
                    let fam = enumerate_lines(&g);
                    (g, w, String::new(), fam)
                }
                Certificate::SquareClaim => {
                    let g = plain_grid()?;
                    let sc = weight_square_claim(&g, t)?;
                    let fam = enumerate_lines(&g);
                    let s = format!("t={} alpha={} beta={} ", sc.t, sc.alpha, sc.beta);
                    (g, sc.weighting, s, fam)
                }
                Certificate::Delta => {
                    let g = plain_grid()?;
                    let d = delta.unwrap_or(delta_genericity(&g) as u64);
                    let w = weight_delta_generic(&g, d)?;
                    let fam = enumerate_lines(&g);
                    (g, w, format!("delta={d} "), fam)
                }
                Certificate::Standard => {
                    let s = weight_standard(standard_n()?)?;
                    let fam = enumerate_lines(&s.grid);
                    (s.grid, s.weighting, format!("t={} ", s.t), fam)
                }
                Certificate::Restricted => {
                    let r = weight_restricted(standard_n()?, t)?;
                    let fam = restricted_lines(&r.grid, &ALL_RESTRICTED_SLOPES)?;
                    (r.grid, r.weighting, format!("t={} z={} ", r.t, r.z), fam)
                }
            };
            let report = verify_weighting(&g, &fam, &w);
            println!("{summary}total={} feasible={}", exact(w.total(), float), report.feasible);
            if audit_full {
                print_audit(&g, &w);
            }
            if let Some(path) = output {
                write_file(&path, &w.to_json(&g))?;
            }
            if !report.feasible {
                for (line, weight) in &report.violations {
                    eprintln!("violated: {line} weight={weight}");
                }
                return Ok(Outcome::VerificationFailed);
            }
        }
        Command::Delta { grid } => {
            println!("{}", delta_genericity(&grid.build()?));
        }
        Command::Bounds { grid, k } => {
            let b = reference_bounds(&grid.build()?, k);
            println!("trivial_lower={}", b.trivial_lower);
            println!("trivial_upper={}", b.trivial_upper);
            println!("ball_serra={}", b.ball_serra);
        }
        Command::Experiment { id, output, jobs, format, budget } => {
            let specs = if id.eq_ignore_ascii_case("all") {
                experiment_suite()
            } else {
                vec![experiment_by_id(&id).with_context(|| format!("unknown experiment {id:?}; use E1..E6 or all"))?]
            };
            fs::create_dir_all(&output).with_context(|| format!("creating {}", output.display()))?;
            let secs = budget_secs(budget)?;
            let mut failed = false;
            for spec in specs {
                let spec = spec.with_budget_secs(secs);
                let rows = run_experiment(&spec, jobs)?;
                let stem = output.join(&spec.id);
                if matches!(format, Format::Csv | Format::Both) {
                    export_results(&rows, ExportFormat::Csv, &stem.with_extension("csv"))?;
                }
                if matches!(format, Format::Json | Format::Both) {
                    export_results(&rows, ExportFormat::Json, &stem.with_extension("json"))?;
                }
                let failures = check_rows(&rows);
                let timeouts = rows.iter().filter(|r| r.ilp_status == "timeout").count();
                println!(
                    "{} rows={} timeouts={} checks={}",
                    spec.id,
                    rows.len(),
                    timeouts,
                    if failures.is_empty() { "pass" } else { "FAIL" }
                );
                for f in &failures {
                    eprintln!("  {f}");
                }
                failed |= !failures.is_empty();
            }
            if failed {
                return Ok(Outcome::VerificationFailed);
            }
        }
    }
    Ok(Outcome::Ok)
}

fn print_audit(g: &Grid, w: &Weighting) {
    let audit = audit_weighting(g, w);
    println!(
        "full_family_violations={} max_line_weight={}",
        audit.report.violations.len(),
        audit.report.max_line_weight
    );
    for (slope, lines) in &audit.by_slope {
        let shown: Vec<String> = lines.iter().take(5).map(|(l, _)| l.to_string()).collect();
        println!("slope {slope}: {} lines, e.g. {}", lines.len(), shown.join(" "));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(1),
        Ok(Outcome::BudgetExceeded) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::BudgetExceeded(_)) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
