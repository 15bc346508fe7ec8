use std::fmt;
use std::time::{Duration, Instant};

use pacsolve::bounds::LbKind;
use pacsolve::exec::Exec;
use pacsolve::fpt::{solve_minpac, FptConfig, FptError, PhaseTimes};
use pacsolve::graph::{feedback_edge_number, Instance, Solution, UndirectedView};
use pacsolve::kernel::{kernelize_fes, lift_solution_fes, solve_cycle, KernelError};
use pacsolve::oracle::{oracle_solve, OracleError};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Algo {
    Fpt,
    Oracle,
    Auto,
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Fpt => "fpt",
            Algo::Oracle => "oracle",
            Algo::Auto => "auto",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub algo: Algo,
    pub lb: LbKind,
    pub cap_c: usize,
    pub cap_combinations: u64,
    pub exec: Exec,
}

pub struct Report {
    pub solution: Solution,
    pub g: usize,
    /// obligatory SCCs of the instance the FPT solver ran on
    pub c: Option<usize>,
    /// how auto mode resolved
    pub route: &'static str,
    pub kernel_n: Option<usize>,
    pub phases: PhaseTimes,
    pub total: Duration,
}

impl From<FptError> for Failure {
    fn from(e: FptError) -> Self {
        match e {
            FptError::CapExceeded { .. } | FptError::TableTooLarge { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::CapExceeded { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<KernelError> for Failure {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::InvalidCover(_) => Failure::Format(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

fn fpt(instance: &Instance, s: &Settings) -> Result<(Solution, usize, PhaseTimes), Failure> {
    let config = FptConfig { max_components: s.cap_c, exec: s.exec, ..FptConfig::default() };
    let out = solve_minpac(instance, &s.lb.compute(instance), &config)?;
    Ok((out.solution, out.components, out.times))
}

pub fn run(instance: &Instance, s: &Settings) -> Result<Report, Failure> {
    let start = Instant::now();
    if !instance.is_strongly_connected() {
        return Err(Failure::Invalid("instance is not strongly connected".into()));
    }
    let g = feedback_edge_number(instance);
    let mut report = Report {
        solution: Solution { arcs: Vec::new(), cost: 0 },
        g,
        c: None,
        route: "fpt",
        kernel_n: None,
        phases: PhaseTimes::default(),
        total: Duration::ZERO,
    };
    match s.algo {
        Algo::Fpt => {
            let (sol, c, phases) = fpt(instance, s)?;
            (report.solution, report.c, report.phases) = (sol, Some(c), phases);
        }
        Algo::Oracle => {
            report.solution = oracle_solve(instance, s.cap_combinations, s.exec)?;
            report.route = "oracle";
        }
        Algo::Auto if g == 0 => {
            // a tree: every arc is forced
            let all: Vec<usize> = (0..instance.m()).collect();
            report.solution = Solution::from_arc_ids(instance, &all).map_err(|e| Failure::Invalid(e.to_string()))?;
            report.route = "tree";
        }
        Algo::Auto if UndirectedView::new(instance).is_cycle() => {
            report.solution = solve_cycle(instance)?;
            report.route = "cycle";
        }
        Algo::Auto if g <= 30 => {
            let (kernel, journal) = kernelize_fes(instance)?;
            report.kernel_n = Some(kernel.n());
            let ksol = if journal.is_cycle() {
                report.route = "kernel+cycle";
                solve_cycle(&kernel)?
            } else {
                report.route = "kernel+fpt";
                let (sol, c, phases) = fpt(&kernel, s)?;
                (report.c, report.phases) = (Some(c), phases);
                sol
            };
            report.solution = lift_solution_fes(instance, &journal, &ksol)?;
        }
        Algo::Auto => {
            let (sol, c, phases) = fpt(instance, s)?;
            (report.solution, report.c, report.phases) = (sol, Some(c), phases);
        }
    }
    report.total = start.elapsed();
    Ok(report)
}
