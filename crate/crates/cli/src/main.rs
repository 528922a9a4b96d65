//! `bdom`: formulas, exact solving, certificate checks, lattice audits and sweeps
//! for (t,r) broadcast domination.
//!
//! Machine output goes to stdout (or `--out`), human notes to stderr. Exit codes:
//! 0 ok, 1 failed check, 2 bad input, 3 solver budget exhausted.

mod lattice_cmd;
mod report;
mod sweep;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bdom_core::formulas::{
    construct_cycle_towers, construct_path_towers, cycle_case, gamma_cycle_power, gamma_path_power,
};
use bdom_core::signal::{check_broadcast, Verdict};
use bdom_core::solver::verify_witness;
use bdom_core::{solve, FormulaInput, GraphSpec, SignalParams, SolveOutcome, TowerSet};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use report::{CliError, CliResult, Report, EXIT_BUDGET, EXIT_FAIL};
use sweep::{Span, SweepArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Path,
    Cycle,
}

impl Family {
    pub fn keyword(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Cycle => "cycle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepFamily {
    Path,
    Cycle,
    Both,
}

#[derive(Debug, Parser)]
#[command(name = "bdom", version, about = "(t,r) broadcast domination toolkit")]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the payload to this file, plus a run manifest beside it.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Search-node budget for the exact solver.
    #[arg(long, global = true, value_name = "NODES", default_value_t = 50_000_000)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Instance {
    family: Family,
    #[arg(short)]
    n: u64,
    #[arg(short, default_value_t = 1)]
    k: u64,
    #[arg(short)]
    t: u64,
    #[arg(short)]
    r: u64,
}

impl Instance {
    fn input(&self) -> CliResult<FormulaInput> {
        Ok(FormulaInput::new(self.n, self.k, self.t, self.r)?)
    }

    fn inputs(&self) -> Vec<String> {
        vec![
            format!("family={}", self.family.keyword()),
            format!("n={}", self.n),
            format!("k={}", self.k),
            format!("t={}", self.t),
            format!("r={}", self.r),
        ]
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form minimum tower count for a path or cycle power.
    Formula(Instance),
    /// Exact minimum tower set by branch and bound.
    Solve {
        /// Graph, e.g. `path:n=10,k=2`, `cycle:n=12`, `grid:4x6`, `torus:5x5`.
        spec: GraphSpec,
        #[arg(short)]
        t: u64,
        #[arg(short)]
        r: u64,
    },
    /// Check a tower-set file (or a `solve --json` result) for broadcasting.
    Verify {
        file: PathBuf,
        #[arg(short)]
        t: u64,
        #[arg(short)]
        r: u64,
    },
    /// Explicit tower placement of closed-form size, as a tower-set file.
    Construct(Instance),
    /// Periodic configurations of the integer grid.
    Lattice {
        #[command(subcommand)]
        command: lattice_cmd::LatticeCommand,
    },
    /// Compare formula, solver and construction over a parameter grid (CSV).
    Sweep {
        #[arg(long, value_enum, default_value = "both")]
        family: SweepFamily,
        #[arg(short, default_value = "1..18")]
        n: Span,
        #[arg(short, default_value = "1..3")]
        k: Span,
        #[arg(short, default_value = "1..4")]
        t: Span,
        #[arg(short, default_value = "1..4")]
        r: Span,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Formula(_) => "formula",
            Command::Solve { .. } => "solve",
            Command::Verify { .. } => "verify",
            Command::Construct(_) => "construct",
            Command::Lattice { .. } => "lattice",
            Command::Sweep { .. } => "sweep",
        }
    }
}

fn formula(inst: &Instance) -> CliResult<Report> {
    let input = inst.input()?;
    let (gamma, case) = match inst.family {
        Family::Path => (gamma_path_power(&input), None),
        Family::Cycle => (gamma_cycle_power(&input), Some(cycle_case(&input))),
    };
    let body = json!({
        "family": inst.family.keyword(),
        "n": input.n, "k": input.k, "t": input.t, "r": input.r,
        "gamma": gamma,
        "case": case,
    });
    Report::new(inst.inputs(), gamma.to_string(), body)
}

fn solve_cmd(spec: &GraphSpec, t: u64, r: u64, budget: u64) -> CliResult<Report> {
    let params = SignalParams::new(t, r)?;
    let inputs = vec![format!("spec={spec}"), format!("t={t}"), format!("r={r}"), format!("budget={budget}")];
    let outcome = solve(spec, params, budget)?;
    match &outcome {
        SolveOutcome::Solved(res) => {
            if !verify_witness(res, spec, params) {
                return Err(CliError { code: EXIT_FAIL, message: "solver witness failed its replay".into() });
            }
            eprintln!(
                "gamma {} on {spec} at {params}: towers {:?}, {} nodes",
                res.gamma,
                res.witness.vertices(),
                res.nodes_explored
            );
            Report::new(inputs, res.gamma.to_string(), &outcome)
        }
        SolveOutcome::BudgetExhausted { nodes_explored, refuted_below } => {
            eprintln!("budget exhausted after {nodes_explored} nodes; no set below {refuted_below} towers exists");
            Ok(Report::new(inputs, String::new(), &outcome)?.with_code(EXIT_BUDGET))
        }
    }
}

fn read_towers(path: &PathBuf) -> CliResult<TowerSet> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::bad_input(format!("cannot read {}: {e}", path.display())))?;
    let mut value: serde_json::Value = serde_json::from_str(&text)?;
    if let Some(witness) = value.get_mut("witness") {
        value = witness.take();
    }
    Ok(serde_json::from_value(value)?)
}

fn verify(path: &PathBuf, t: u64, r: u64) -> CliResult<Report> {
    let towers = read_towers(path)?;
    let params = SignalParams::new(t, r)?;
    let inputs = vec![format!("towers={}", towers.to_json()?), format!("t={t}"), format!("r={r}")];
    match check_broadcast(&towers, params) {
        Verdict::Broadcasting => {
            eprintln!("{} tower(s) on {} are {params}-broadcasting", towers.len(), towers.spec());
            Report::new(inputs, "OK", json!({ "status": "broadcasting" }))
        }
        Verdict::Deficient(d) => {
            let text = format!("FAIL vertex {} signal {} shortfall {}", d.vertex, d.raw_signal, d.shortfall);
            let body = json!({ "status": "deficient", "vertex": d.vertex, "raw_signal": d.raw_signal, "shortfall": d.shortfall });
            Ok(Report::new(inputs, text, body)?.with_code(EXIT_FAIL))
        }
    }
}

fn construct(inst: &Instance) -> CliResult<Report> {
    let input = inst.input()?;
    let towers = match inst.family {
        Family::Path => {
            let c = construct_path_towers(&input)?;
            if c.tail_repaired {
                eprintln!("tail rule adjusted: extra tower at {}", input.n - 1);
            }
            c.towers
        }
        Family::Cycle => construct_cycle_towers(&input)?,
    };
    let code = match check_broadcast(&towers, input.params()) {
        Verdict::Broadcasting => 0,
        Verdict::Deficient(d) => {
            eprintln!("construction leaves vertex {} short by {}", d.vertex, d.shortfall);
            EXIT_FAIL
        }
    };
    eprintln!("{} tower(s): {:?}", towers.len(), towers.vertices());
    Ok(Report::new(inst.inputs(), towers.to_json()?, &towers)?.with_code(code))
}

fn run(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Formula(inst) => formula(inst),
        Command::Solve { spec, t, r } => solve_cmd(spec, *t, *r, cli.budget),
        Command::Verify { file, t, r } => verify(file, *t, *r),
        Command::Construct(inst) => construct(inst),
        Command::Lattice { command } => lattice_cmd::run(command),
        Command::Sweep { family, n, k, t, r } => {
            let families: &[Family] = match family {
                SweepFamily::Path => &[Family::Path],
                SweepFamily::Cycle => &[Family::Cycle],
                SweepFamily::Both => &[Family::Path, Family::Cycle],
            };
            sweep::report(&SweepArgs { families, n, k, t, r, budget: cli.budget })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let started = Instant::now();
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(report::EXIT_BAD_INPUT);
        }
    }
    let outcome = run(&cli).and_then(|rep| {
        report::emit(&rep, cli.command.name(), cli.json, cli.out.as_deref(), started)
            .map_err(|e| CliError::bad_input(format!("cannot write output: {e}")))?;
        Ok(rep.code)
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
