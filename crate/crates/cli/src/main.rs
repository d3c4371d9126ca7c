//! `ces-pareto`: run CES Pareto-set reductions from a config file.
//!
//! Exit status: 0 on success, 1 when the scenario fails validation or a
//! check does not hold, 2 on usage errors. Results go to stdout and the
//! output directory; diagnostics go to stderr.

mod config;
mod export;

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use ces_pareto::pareto::oracle_pareto;
use ces_pareto::scenario::OutputFormat;
use ces_pareto::{build_criteria, CriteriaKind, ScenarioConfig, Tier};
use ces_pareto_service::compute::{self, ComputeError, EvaluateRequest};
use ces_pareto_service::{ServiceConfig, DEFAULT_MAX_IN_FLIGHT, DEFAULT_PORT};
use clap::{Parser, Subcommand};

use config::Overrides;

#[derive(Debug, Parser)]
#[command(
    name = "ces-pareto",
    version,
    about = "Pareto-set reduction workbench for the CES production problem"
)]
struct Cli {
    /// Scenario config (JSON); the bundled sample scenario when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override `sweep.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override `grid.nK` and `grid.nL`.
    #[arg(long = "grid-n", global = true, value_name = "N")]
    grid_n: Option<usize>,
    /// Override `output.dir`.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Override `output.format`.
    #[arg(long, global = true, value_name = "csv|jsonl")]
    format: Option<OutputFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every invariant of the scenario and print a report.
    Validate {
        /// Write the effective config (file plus overrides) in canonical form.
        #[arg(long, value_name = "PATH")]
        emit_normalized: Option<PathBuf>,
    },
    /// Print the original and all recombined criteria at one bundle.
    Evaluate {
        #[arg(long)]
        k: f64,
        #[arg(long)]
        l: f64,
    },
    /// Ray sweep and grid oracle for the recombined criteria g, with the inclusion chain.
    ReduceCrisp,
    /// Membership map from the two confidence-weighted quanta.
    ReduceFuzzy,
    /// Non-dominated grid nodes for one criteria kind.
    Oracle {
        #[arg(long, value_name = "F3|G4|FBAR4|FHAT3")]
        kind: CriteriaKind,
    },
    /// Printed ray formulas versus the rederived one and the grid oracle.
    CompareFormulas,
    /// Start the HTTP service.
    Serve {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        /// Concurrent reduce requests before answering 429.
        #[arg(long, default_value_t = DEFAULT_MAX_IN_FLIGHT)]
        max_in_flight: usize,
    },
}

/// A failed scenario or check (exit 1), as opposed to an I/O or internal error.
#[derive(Debug)]
struct Rejected;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if e.downcast_ref::<Rejected>().is_none() {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(1)
        }
    }
}

impl std::fmt::Display for Rejected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("rejected")
    }
}

impl std::error::Error for Rejected {}

fn rejected(error: &ComputeError) -> anyhow::Error {
    match error {
        ComputeError::Invalid(violations) => {
            for v in violations {
                eprintln!("invalid {}: {}", v.field, v.message);
            }
        }
        ComputeError::Inconsistent(names) => {
            for name in names {
                eprintln!("inconsistent preferences: {name} does not hold");
            }
        }
        ComputeError::Internal(message) => return anyhow::anyhow!("{message}"),
    }
    Rejected.into()
}

fn run(cli: Cli) -> Result<()> {
    let overrides = Overrides {
        seed: cli.seed,
        grid_n: cli.grid_n,
        out: cli.out,
        format: cli.format,
    };
    let mut config = config::load(cli.config.as_deref())?;
    overrides.apply(&mut config);
    let out = PathBuf::from(&config.output.dir);
    let format = config.output.format;

    match cli.command {
        Command::Validate { emit_normalized } => validate(&config, emit_normalized.as_deref()),
        Command::Evaluate { k, l } => evaluate(&config, k, l),
        Command::ReduceCrisp => reduce_crisp(&config, &out, format),
        Command::ReduceFuzzy => reduce_fuzzy(&config, &out, format),
        Command::Oracle { kind } => oracle(&config, kind, &out, format),
        Command::CompareFormulas => compare_formulas(&config, &out),
        Command::Serve {
            port,
            max_in_flight,
        } => serve(port, max_in_flight),
    }
}

fn join<T: std::fmt::Display>(values: &[T]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn validate(config: &ScenarioConfig, emit: Option<&Path>) -> Result<()> {
    let spec = config.spec();
    let violations = spec.build().err().unwrap_or_default();
    let mut ok = violations.is_empty();
    for section in ["ces", "prices", "quantum1", "quantum2", "grid", "sweep"] {
        let messages: Vec<&str> = violations
            .iter()
            .filter(|v| v.field == section)
            .map(|v| v.message.as_str())
            .collect();
        if messages.is_empty() {
            println!("{section}: ok");
        } else {
            println!("{section}: violated: {}", messages.join("; "));
        }
    }
    if let Ok(scenario) = spec.build() {
        let pair = &scenario.pair;
        println!("consistency: {}", pair.consistency().as_str());
        let broken = pair.consistency_violations();
        if !broken.is_empty() {
            ok = false;
            println!("consistency violated: {}", broken.join(", "));
        }
        let compromise = pair.compromise_violations();
        if compromise.is_empty() {
            println!("natural compromise: holds");
        } else {
            ok = false;
            println!("natural compromise: violated: {}", compromise.join(", "));
        }
        let (nk, nl) = scenario.grid.shape();
        println!(
            "grid: {nk} x {nl} {} nodes ({} total)",
            scenario.grid.scale().as_str(),
            scenario.grid.len()
        );
        println!(
            "sweep: {} samples, seed {}",
            scenario.sweep.samples, scenario.sweep.seed
        );
    }
    if !ok {
        return Err(Rejected.into());
    }
    if let Some(path) = emit {
        std::fs::write(path, config::normalized(config))
            .with_context(|| format!("cannot write {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn evaluate(config: &ScenarioConfig, k: f64, l: f64) -> Result<()> {
    let request = EvaluateRequest::from_spec(&config.spec(), k, l);
    let r = compute::evaluate(&request).map_err(|e| rejected(&e))?;
    println!("K = {}, L = {}", r.capital, r.labor);
    println!("Q = {}", r.output);
    println!("(Q_K, Q_L) = ({})", join(&r.marginal_products));
    println!("f = ({})", join(&r.f));
    for (kind, criteria) in &r.criteria {
        println!(
            "{kind} ({}) = ({})",
            criteria.labels.join(", "),
            join(&criteria.values)
        );
    }
    Ok(())
}

fn reduce_crisp(config: &ScenarioConfig, out: &Path, format: OutputFormat) -> Result<()> {
    let spec = config.spec();
    let crisp = compute::reduce_crisp(&spec).map_err(|e| rejected(&e))?;
    let scenario = compute::consistent_scenario(&spec).map_err(|e| rejected(&e))?;
    let g = build_criteria(CriteriaKind::G4, &scenario.pair, &scenario.problem)?;
    let sizes: Vec<String> = crisp
        .oracle_sizes
        .iter()
        .map(|(kind, n)| format!("{kind}={n}"))
        .collect();
    println!("grid nodes: {}", crisp.grid_nodes);
    println!("oracle sizes: {}", sizes.join(" "));
    println!("oracle(G4) within oracle(FBAR4): {}", crisp.g_in_fbar);
    println!("oracle(FBAR4) within oracle(F3): {}", crisp.fbar_in_f);
    println!("oracle(F3) is the grid: {}", crisp.f_is_grid);
    let check = crisp.ray_check;
    println!(
        "derived G4 rays on non-dominated nodes: {}/{} ({} outside window)",
        check.nondominated,
        check.rays - check.outside_window,
        check.outside_window
    );
    let rays = export::write_rays(out, format, &crisp.ray_families)?;
    let oracle = export::write_oracle(out, format, &crisp.oracle, &g)?;
    println!("wrote {}", rays.display());
    println!("wrote {}", oracle.display());
    if !(crisp.g_in_fbar && crisp.fbar_in_f && crisp.f_is_grid) {
        eprintln!("inclusion chain does not hold");
        return Err(Rejected.into());
    }
    Ok(())
}

fn reduce_fuzzy(config: &ScenarioConfig, out: &Path, format: OutputFormat) -> Result<()> {
    let reduction = compute::reduce(&config.spec()).map_err(|e| rejected(&e))?;
    println!("branch: {}", reduction.branch.as_str());
    println!("second stage: {}", reduction.branch.second_stage().as_str());
    for tier in [Tier::Core, Tier::Mid, Tier::Outer] {
        let count = match tier {
            Tier::Core => reduction.tier_counts.core,
            Tier::Mid => reduction.tier_counts.mid,
            Tier::Outer => reduction.tier_counts.outer,
        };
        println!(
            "{}: {count} nodes, membership {}",
            tier.as_str(),
            reduction.tier_values[&tier]
        );
    }
    let v = reduction.inclusions;
    println!("CORE is oracle(G4): {}", v.core_is_g);
    println!("oracle(G4) within second stage: {}", v.g_in_second);
    println!("second stage within oracle(F3): {}", v.second_in_f);
    let membership = export::write_membership(out, format, &reduction)?;
    let rays = export::write_rays(out, format, &reduction.ray_families)?;
    let nesting = export::write_json(out, "nesting.json", &reduction.nesting)?;
    for path in [membership, rays, nesting] {
        println!("wrote {}", path.display());
    }
    if !reduction.nesting.holds() {
        for failure in &reduction.nesting.failures {
            eprintln!("nesting check failed: {failure}");
        }
        return Err(Rejected.into());
    }
    Ok(())
}

fn oracle(
    config: &ScenarioConfig,
    kind: CriteriaKind,
    out: &Path,
    format: OutputFormat,
) -> Result<()> {
    let spec = config.spec();
    let scenario = if kind == CriteriaKind::G4 {
        compute::consistent_scenario(&spec)
    } else {
        spec.build().map_err(ComputeError::Invalid)
    }
    .map_err(|e| rejected(&e))?;
    let criteria = build_criteria(kind, &scenario.pair, &scenario.problem)?;
    let set = oracle_pareto(kind, &scenario.pair, &scenario.problem, &scenario.grid)?;
    println!(
        "{kind}: {} of {} nodes non-dominated",
        set.len(),
        scenario.grid.len()
    );
    let path = export::write_oracle(out, format, &set, &criteria)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn compare_formulas(config: &ScenarioConfig, out: &Path) -> Result<()> {
    let report = compute::compare(&config.spec()).map_err(|e| rejected(&e))?;
    println!("agreement: {}%", report.agreement_pct);
    println!(
        "max derived gradient residual: {}",
        report.max_grad_residual
    );
    println!(
        "printed-formula domain failures: {}",
        report.domain_failures
    );
    println!(
        "derived rays on non-dominated nodes: {}%",
        report.nondominated_pct
    );
    let path = export::write_json(out, "discrepancy.json", &report)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn serve(port: u16, max_in_flight: usize) -> Result<()> {
    let addr = SocketAddr::from(([0, 0, 0, 0], port));
    let runtime = tokio::runtime::Runtime::new().context("cannot start async runtime")?;
    eprintln!("listening on http://{addr}");
    runtime
        .block_on(ces_pareto_service::serve(
            addr,
            ServiceConfig { max_in_flight },
        ))
        .with_context(|| format!("cannot serve on {addr}"))
}
