use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use pacsolve::bounds::LbKind;
use pacsolve::exec::Exec;
use pacsolve::generators::{gen_grid, gen_random_fes, gen_random_sc, gen_setcover, GenError};
use pacsolve::graph::{feedback_edge_number, verify_solution, Instance};
use pacsolve::io::{self, IoError};
use pacsolve::kernel::{kernelize_fes, kernelize_vc, lift_solution, VcConfig};
use pacsolve::oracle::DEFAULT_CAP;

mod solve;

use solve::{Algo, Settings};

/// Failure classes, mapped to exit codes 1, 2 and 3.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Format(String),
    Cap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Format(_) => 2,
            Failure::Cap(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Format(m) | Failure::Cap(m) => m,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Format(e.to_string())
    }
}

impl From<GenError> for Failure {
    fn from(e: GenError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

macro_rules! outln {
    ($out:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        let _ = writeln!($out, $($arg)*);
    }};
}

/// Stdout may be a closed pipe (`| head`); that is not an error worth a panic.
fn emit(text: &str) {
    use std::io::Write as _;
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush());
}

fn with_path(path: &Path, e: IoError) -> Failure {
    Failure::Format(format!("{}: {e}", path.display()))
}

#[derive(Parser)]
#[command(name = "pacsolve", version, about = "Exact solvers and kernels for min-power asymmetric connectivity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance to optimality.
    Solve(SolveArgs),
    /// Shrink an instance and write the kernel plus its journal.
    Kernel(KernelArgs),
    /// Map a kernel solution back to the original instance.
    Lift(LiftArgs),
    /// Check a solution against an instance.
    Verify { instance: PathBuf, solution: PathBuf },
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run a suite of (instance, algorithm) pairs and print a TSV table.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    algo: Algo,
    #[arg(long, default_value_t = LbKind::Both)]
    lb: LbKind,
    #[arg(long, value_name = "PATH")]
    emit_solution: Option<PathBuf>,
    /// Largest number of obligatory SCCs the FPT solver accepts.
    #[arg(long, default_value_t = 20)]
    cap_c: usize,
    /// Largest number of threshold combinations the oracle enumerates.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap_combinations: u64,
    /// Disable data parallelism.
    #[arg(long)]
    sequential: bool,
    instance: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rules {
    Fes,
    Vc,
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long, value_enum, default_value_t = Rules::Fes)]
    rules: Rules,
    /// Vertex cover file (one 1-based id per line) for `--rules vc`.
    #[arg(long)]
    cover: Option<PathBuf>,
    /// With `--rules vc`, keep inputs already within (q+1)^(2x)+x vertices.
    #[arg(long)]
    size_guard: bool,
    #[arg(short, long, value_name = "OUT")]
    output: PathBuf,
    #[arg(long)]
    journal: PathBuf,
    instance: PathBuf,
}

#[derive(Args)]
struct LiftArgs {
    #[arg(long)]
    journal: PathBuf,
    #[arg(long)]
    solution: PathBuf,
    #[arg(short, long, value_name = "OUT")]
    output: Option<PathBuf>,
    instance: PathBuf,
}

#[derive(Args)]
struct Out {
    #[arg(short, long, value_name = "OUT")]
    output: Option<PathBuf>,
    /// Defaults to $PACSOLVE_SEED, else 1.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Set Cover reduction from a `p sc` file.
    Setcover {
        input: PathBuf,
        #[arg(short, long, value_name = "OUT")]
        output: Option<PathBuf>,
    },
    /// Bidirectional grid with seeded heavy column cuts.
    Grid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value_t = 0)]
        heavy: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Tree of antiparallel pairs plus `g` extra arcs.
    Fes {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        g: usize,
        #[arg(long, default_value_t = 9)]
        max_weight: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Hamiltonian cycle plus random arcs.
    Sc {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 3)]
        max_weight: u64,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Args)]
struct BenchArgs {
    /// Lines of `<instance> <algo>`; paths are relative to the suite file.
    #[arg(long)]
    suite: PathBuf,
    #[arg(long)]
    sequential: bool,
}

fn seed(explicit: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = explicit {
        return Ok(s);
    }
    match std::env::var("PACSOLVE_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Format(format!("PACSOLVE_SEED `{v}` is not a u64"))),
        Err(_) => Ok(1),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display()))),
        None => {
            emit(text);
            Ok(())
        }
    }
}

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    io::read_instance(path).map_err(|e| with_path(path, e))
}

fn exec(sequential: bool) -> Exec {
    if sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn cmd_solve(a: SolveArgs) -> Result<(), Failure> {
    let instance = read_instance(&a.instance)?;
    let settings = Settings {
        algo: a.algo,
        lb: a.lb,
        cap_c: a.cap_c,
        cap_combinations: a.cap_combinations,
        exec: exec(a.sequential),
    };
    let r = solve::run(&instance, &settings)?;
    let mut out = String::new();
    outln!(out, "opt {}", r.solution.cost);
    outln!(out, "n {}", instance.n());
    outln!(out, "m {}", instance.m());
    outln!(out, "g {}", r.g);
    match r.c {
        Some(c) => outln!(out, "c {c}"),
        None => outln!(out, "c -"),
    }
    outln!(out, "route {}", r.route);
    if let Some(k) = r.kernel_n {
        outln!(out, "kernel_n {k}");
    }
    outln!(out, "time_reduce_ms {:.3}", r.phases.reduce.as_secs_f64() * 1e3);
    outln!(out, "time_connectors_ms {:.3}", r.phases.connectors.as_secs_f64() * 1e3);
    outln!(out, "time_search_ms {:.3}", r.phases.search.as_secs_f64() * 1e3);
    outln!(out, "time_total_ms {:.3}", r.total.as_secs_f64() * 1e3);
    if let Some(p) = a.emit_solution {
        write_out(Some(&p), &io::write_solution(&r.solution))?;
    }
    emit(&out);
    Ok(())
}

fn cmd_kernel(a: KernelArgs) -> Result<(), Failure> {
    let instance = read_instance(&a.instance)?;
    let mut out = String::new();
    let (kernel, journal) = match a.rules {
        Rules::Fes => {
            let g = feedback_edge_number(&instance);
            let (k, j) = kernelize_fes(&instance)?;
            outln!(out, "g {g}");
            if j.is_cycle() {
                outln!(out, "cycle yes");
            }
            (k, j)
        }
        Rules::Vc => {
            let cover = match &a.cover {
                Some(p) => Some(io::read_cover(p, instance.n()).map_err(|e| with_path(p, e))?),
                None => None,
            };
            let (k, j, partition) = kernelize_vc(&instance, cover.as_deref(), VcConfig { size_guard: a.size_guard })?;
            outln!(out, "x {}", partition.x());
            outln!(out, "q {}", partition.q());
            outln!(out, "bound {}", partition.size_bound());
            (k, j)
        }
    };
    outln!(out, "n {} -> {}", instance.n(), kernel.n());
    outln!(out, "m {} -> {}", instance.m(), kernel.m());
    outln!(out, "d {}", journal.offset);
    write_out(Some(&a.output), &io::write_instance(&kernel))?;
    write_out(Some(&a.journal), &io::write_journal(&journal))?;
    emit(&out);
    Ok(())
}

fn cmd_lift(a: LiftArgs) -> Result<(), Failure> {
    let instance = read_instance(&a.instance)?;
    let journal = io::read_journal(&a.journal).map_err(|e| with_path(&a.journal, e))?;
    let ksol = io::read_solution(&a.solution, None).map_err(|e| with_path(&a.solution, e))?;
    let lifted = lift_solution(&instance, &journal, &ksol)?;
    eprintln!("lifted cost {} (kernel {} + d {})", lifted.cost, ksol.cost, journal.offset);
    write_out(a.output.as_deref(), &io::write_solution(&lifted))
}

fn cmd_verify(instance: &Path, solution: &Path) -> Result<(), Failure> {
    let g = read_instance(instance)?;
    let s = io::read_solution(solution, None).map_err(|e| with_path(solution, e))?;
    let verdict = verify_solution(&g, &s);
    if verdict.is_ok() {
        emit(&format!("ok cost {}\n", s.cost));
        Ok(())
    } else {
        let msgs: Vec<String> = verdict.violations.iter().map(|v| v.to_string()).collect();
        Err(Failure::Invalid(msgs.join("\n")))
    }
}

fn cmd_gen(cmd: GenCommand) -> Result<(), Failure> {
    let (instance, output, header) = match cmd {
        GenCommand::Setcover { input, output } => {
            let sc = io::read_setcover(&input).map_err(|e| with_path(&input, e))?;
            let (g, k) = gen_setcover(sc.universe, &sc.sets, sc.ell)?;
            (g, output, format!("c budget {k}\n"))
        }
        GenCommand::Grid { rows, cols, heavy, out } => {
            let s = seed(out.seed)?;
            (gen_grid(rows, cols, heavy, s)?, out.output, format!("c grid {rows}x{cols} heavy {heavy} seed {s}\n"))
        }
        GenCommand::Fes { n, g, max_weight, out } => {
            let s = seed(out.seed)?;
            (gen_random_fes(n, g, max_weight, s)?, out.output, format!("c fes n {n} g {g} seed {s}\n"))
        }
        GenCommand::Sc { n, p, max_weight, out } => {
            let s = seed(out.seed)?;
            (gen_random_sc(n, p, max_weight, s)?, out.output, format!("c sc n {n} p {p} seed {s}\n"))
        }
    };
    write_out(output.as_deref(), &(header + &io::write_instance(&instance)))
}

struct Row {
    name: String,
    algo: Algo,
    result: Result<(solve::Report, usize, usize), Failure>,
}

fn cmd_bench(a: BenchArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&a.suite).map_err(|e| Failure::Format(format!("{}: {e}", a.suite.display())))?;
    let base = a.suite.parent().unwrap_or(Path::new("."));
    let mut jobs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.is_empty() || t[0].starts_with('#') {
            continue;
        }
        if t.len() != 2 {
            return Err(Failure::Format(format!(
                "{}: line {}: expected `<instance> <algo>`",
                a.suite.display(),
                i + 1
            )));
        }
        let algo = Algo::from_str(t[1], true).map_err(|_| {
            Failure::Format(format!("{}: line {}: unknown algorithm `{}`", a.suite.display(), i + 1, t[1]))
        })?;
        jobs.push((t[0].to_string(), algo));
    }

    let run = |(name, algo): &(String, Algo)| {
        let settings = Settings {
            algo: *algo,
            lb: LbKind::Both,
            cap_c: 20,
            cap_combinations: DEFAULT_CAP,
            exec: Exec::Sequential,
        };
        let result = read_instance(&base.join(name)).and_then(|g| {
            let r = solve::run(&g, &settings)?;
            Ok((r, g.n(), g.m()))
        });
        Row { name: name.clone(), algo: *algo, result }
    };
    let started = Instant::now();
    #[cfg(feature = "parallel")]
    let rows: Vec<Row> = if a.sequential { jobs.iter().map(run).collect() } else { jobs.par_iter().map(run).collect() };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Row> = jobs.iter().map(run).collect();

    let mut out = String::new();
    outln!(out, "instance\talgo\tcost\tn\tm\tc\tg\tms");
    let mut worst: Option<Failure> = None;
    for row in rows {
        match row.result {
            Ok((r, n, m)) => outln!(
                out,
                "{}\t{}\t{}\t{n}\t{m}\t{}\t{}\t{:.3}",
                row.name,
                row.algo,
                r.solution.cost,
                r.c.map_or_else(|| "-".to_string(), |c| c.to_string()),
                r.g,
                r.total.as_secs_f64() * 1e3
            ),
            Err(f) => {
                outln!(out, "{}\t{}\terror\t-\t-\t-\t-\t-", row.name, row.algo);
                eprintln!("{}: {}", row.name, f.message());
                if worst.as_ref().is_none_or(|w| f.code() > w.code()) {
                    worst = Some(f);
                }
            }
        }
    }
    emit(&out);
    eprintln!("suite finished in {:.3} s", started.elapsed().as_secs_f64());
    match worst {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Kernel(a) => cmd_kernel(a),
        Command::Lift(a) => cmd_lift(a),
        Command::Verify { instance, solution } => cmd_verify(&instance, &solution),
        Command::Gen(g) => cmd_gen(g),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
