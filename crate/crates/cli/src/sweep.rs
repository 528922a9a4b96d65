use std::ops::RangeInclusive;
use std::str::FromStr;

use bdom_core::formulas::{construct_cycle_towers, construct_path_towers, gamma_cycle_power, gamma_path_power};
use bdom_core::signal::is_broadcasting;
use bdom_core::{solve, FormulaInput, SolveOutcome};
use rayon::prelude::*;
use serde::Serialize;

use crate::report::{CliError, CliResult, Report, EXIT_BUDGET, EXIT_FAIL};
use crate::Family;

/// Inclusive integer range written `a..b` (or a single `a`). `a > b` is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span(pub RangeInclusive<u64>);

impl FromStr for Span {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let num = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("bad bound {x:?}: {e}"));
        match s.split_once("..") {
            Some((a, b)) => Ok(Span(num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?)),
            None => {
                let a = num(s)?;
                Ok(Span(a..=a))
            }
        }
    }
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}..{}", self.0.start(), self.0.end())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub family: &'static str,
    pub n: u64,
    pub k: u64,
    pub t: u64,
    pub r: u64,
    pub formula_gamma: u64,
    /// Empty when the node budget ran out.
    pub solver_gamma: Option<u64>,
    /// Empty when the construction failed its audit.
    pub construction_size: Option<u64>,
    pub agree: bool,
}

pub struct SweepArgs<'a> {
    pub families: &'a [Family],
    pub n: &'a Span,
    pub k: &'a Span,
    pub t: &'a Span,
    pub r: &'a Span,
    pub budget: u64,
}

fn instances(args: &SweepArgs) -> CliResult<Vec<(Family, FormulaInput)>> {
    let mut out = Vec::new();
    for &family in args.families {
        for k in args.k.0.clone() {
            for t in args.t.0.clone() {
                for r in args.r.0.clone().filter(|&r| r <= t) {
                    for n in args.n.0.clone() {
                        out.push((family, FormulaInput::new(n, k, t, r)?));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn evaluate(family: Family, input: &FormulaInput, budget: u64) -> CliResult<Row> {
    let params = input.params();
    let (spec, formula, construction) = match family {
        Family::Path => {
            let c = construct_path_towers(input).ok().map(|c| c.towers);
            (input.path_spec(), gamma_path_power(input), c)
        }
        Family::Cycle => (input.cycle_spec(), gamma_cycle_power(input), construct_cycle_towers(input).ok()),
    };
    let construction_size = construction.filter(|c| is_broadcasting(c, params)).map(|c| c.len() as u64);
    let solver_gamma = match solve(&spec, params, budget)? {
        SolveOutcome::Solved(res) => Some(res.gamma as u64),
        SolveOutcome::BudgetExhausted { .. } => None,
    };
    Ok(Row {
        family: family.keyword(),
        n: input.n,
        k: input.k,
        t: input.t,
        r: input.r,
        formula_gamma: formula,
        solver_gamma,
        construction_size,
        agree: solver_gamma == Some(formula) && construction_size == Some(formula),
    })
}

/// Rows in input order (family, k, t, r, n), whatever order the workers finish in.
pub fn run(args: &SweepArgs) -> CliResult<Vec<Row>> {
    let work = instances(args)?;
    work.par_iter().map(|(family, input)| evaluate(*family, input, args.budget)).collect()
}

pub fn to_csv(rows: &[Row]) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(["family", "n", "k", "t", "r", "formula_gamma", "solver_gamma", "construction_size", "agree"])
        .map_err(|e| CliError::bad_input(e.to_string()))?;
    for row in rows {
        w.serialize(row).map_err(|e| CliError::bad_input(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::bad_input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn report(args: &SweepArgs) -> CliResult<Report> {
    let rows = run(args)?;
    let disagreements: Vec<&Row> = rows.iter().filter(|r| !r.agree).collect();
    let exhausted = rows.iter().filter(|r| r.solver_gamma.is_none()).count();
    eprintln!("{} rows, {} disagreeing, {} over budget", rows.len(), disagreements.len(), exhausted);
    for r in &disagreements {
        let show = |x: Option<u64>| x.map_or("-".to_string(), |v| v.to_string());
        eprintln!(
            "  {} n={} k={} t={} r={}: formula {} solver {} construction {}",
            r.family,
            r.n,
            r.k,
            r.t,
            r.r,
            r.formula_gamma,
            show(r.solver_gamma),
            show(r.construction_size)
        );
    }
    let code = if disagreements.iter().any(|r| r.solver_gamma.is_some()) {
        EXIT_FAIL
    } else if exhausted > 0 {
        EXIT_BUDGET
    } else {
        0
    };
    let families: Vec<&str> = args.families.iter().map(|f| f.keyword()).collect();
    let inputs = vec![
        format!("family={}", families.join(",")),
        format!("n={}", args.n),
        format!("k={}", args.k),
        format!("t={}", args.t),
        format!("r={}", args.r),
        format!("budget={}", args.budget),
    ];
    Ok(Report::new(inputs, to_csv(&rows)?, &rows)?.with_code(code))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans() {
        assert_eq!("1..18".parse::<Span>().unwrap(), Span(1..=18));
        assert_eq!("1..=3".parse::<Span>().unwrap(), Span(1..=3));
        assert_eq!("4".parse::<Span>().unwrap(), Span(4..=4));
        assert!("5..2".parse::<Span>().unwrap().0.is_empty());
        assert!("a..2".parse::<Span>().is_err());
    }

    #[test]
    fn empty_sweep_is_header_only() {
        let s = |x: &str| x.parse::<Span>().unwrap();
        let (n, k, t, r) = (s("5..4"), s("1"), s("3"), s("2"));
        let args = SweepArgs { families: &[Family::Path], n: &n, k: &k, t: &t, r: &r, budget: 1000 };
        let rep = report(&args).unwrap();
        assert_eq!(rep.text, "family,n,k,t,r,formula_gamma,solver_gamma,construction_size,agree\n");
        assert_eq!(rep.code, 0);
    }
}
