mod bench;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use pspkit::conflict::{
    build_conflict_graph, conflict_dimacs, solve_bruteforce_with_budget, DEFAULT_BRUTEFORCE_BUDGET,
};
use pspkit::error::PspError;
use pspkit::forest::{solve_forest, SubgraphRef};
use pspkit::fvs::{core_edge_requirement, solve_fvs_delta_with_budget, DEFAULT_CORE_EDGE_BUDGET};
use pspkit::instance::{
    parse_psp, parse_solution, serialize_psp, serialize_solution, solution_violations,
    verify_solution, PspInstance, Solution,
};
use pspkit::reductions::{
    gen_random, parse_mcc, reduce_mcc_pw, reduce_mcc_vc, pw_witness, RandomInstanceParams,
};
use pspkit::treewidth::{
    decomposition_violations, parse_tree_decomposition, serialize_tree_decomposition, solve_tw_with,
    DEFAULT_WIDTH_BUDGET,
};

use report::RunReport;

// exit codes: 0 ok, 1 invalid artifact, 2 parse error, 3 budget exceeded,
// 4 algorithm inapplicable, 5 bench disagreement, 6 verification failure
const EXIT_INVALID: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_INAPPLICABLE: u8 = 4;
const EXIT_MISMATCH: u8 = 5;
const EXIT_VERIFY: u8 = 6;

#[derive(Parser)]
#[command(name = "pspkit", about = "Solvers and instance tooling for path set packing", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and report the optimum and YES/NO decision
    Solve(SolveArgs),
    /// Generate instances: reductions from multicolored clique or random
    Generate(GenerateArgs),
    /// Check a solution or tree decomposition against an instance
    Verify(VerifyArgs),
    /// Run solvers over a corpus and emit a CSV, cross-checking sizes
    Bench(bench::BenchArgs),
    /// Write the conflict graph of an instance in DIMACS-like text
    ExportConflict(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Auto,
    Bruteforce,
    Tree,
    FvsDelta,
    TwConflict,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Auto => "auto",
            Algo::Bruteforce => "bruteforce",
            Algo::Tree => "tree",
            Algo::FvsDelta => "fvs-delta",
            Algo::TwConflict => "tw-conflict",
        }
    }
}

#[derive(clap::Args)]
struct SolveArgs {
    /// Instance file (psp format)
    #[arg(long, short = 'i')]
    input: PathBuf,
    /// Solver to use
    #[arg(long, value_enum, default_value = "auto")]
    algo: Algo,
    /// Override the instance's decision threshold
    #[arg(long)]
    k: Option<usize>,
    /// Tree decomposition file for tw-conflict (otherwise min-fill)
    #[arg(long)]
    decomposition: Option<PathBuf>,
    /// Cap on |E_X| per component for fvs-delta
    #[arg(long, default_value_t = DEFAULT_CORE_EDGE_BUDGET)]
    budget_core_edges: usize,
    /// Cap on |P| for the bruteforce oracle
    #[arg(long, default_value_t = DEFAULT_BRUTEFORCE_BUDGET)]
    budget_paths: usize,
    /// Cap on the lifted decomposition width for tw-conflict
    #[arg(long, default_value_t = DEFAULT_WIDTH_BUDGET)]
    budget_width: usize,
    /// Write the packing found to this solution file
    #[arg(long)]
    solution_out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Instance file (psp format)
    #[arg(long, short = 'i')]
    instance: PathBuf,
    /// Solution file to check
    #[arg(long, conflicts_with = "decomposition")]
    solution: Option<PathBuf>,
    /// Tree decomposition file to check
    #[arg(long)]
    decomposition: Option<PathBuf>,
}

#[derive(clap::Args)]
struct GenerateArgs {
    #[command(subcommand)]
    kind: GenerateKind,
}

#[derive(Subcommand)]
enum GenerateKind {
    /// Reduction aimed at small vertex cover and path length
    MccVc {
        /// Multicolored clique input (mcc format)
        #[arg(long)]
        mcc: PathBuf,
        #[arg(long, short = 'o')]
        out: PathBuf,
    },
    /// Reduction aimed at small pathwidth, degree and solution size
    MccPw {
        /// Multicolored clique input (mcc format)
        #[arg(long)]
        mcc: PathBuf,
        #[arg(long, short = 'o')]
        out: PathBuf,
        /// Also write the path decomposition witness
        #[arg(long)]
        emit_witness: Option<PathBuf>,
    },
    /// Random spanning tree plus chords, with random simple paths
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        extra_edges: usize,
        #[arg(long)]
        paths: usize,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short = 'o')]
        out: PathBuf,
    },
}

#[derive(clap::Args)]
struct ExportArgs {
    /// Instance file (psp format)
    #[arg(long, short = 'i')]
    input: PathBuf,
    #[arg(long, short = 'o')]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => bench::cmd_bench(args),
        Command::ExportConflict(args) => cmd_export_conflict(args),
    };
    ExitCode::from(code)
}

fn read_file(path: &PathBuf) -> Result<String, u8> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_PARSE
    })
}

fn load_instance(path: &PathBuf) -> Result<PspInstance, u8> {
    let text = read_file(path)?;
    parse_psp(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_PARSE
    })
}

fn exit_code_for(err: &PspError) -> u8 {
    match err {
        PspError::Parse { .. } => EXIT_PARSE,
        PspError::Budget { .. } => EXIT_BUDGET,
        PspError::NotAForest => EXIT_INAPPLICABLE,
        PspError::Invalid { .. } => EXIT_INAPPLICABLE,
    }
}

/// Runs the selected solver; reports (algorithm actually used, solution,
/// extra parameter readouts).
pub fn run_solver(
    instance: &PspInstance,
    algo: Algo,
    decomposition: Option<&pspkit::treewidth::TreeDecomposition>,
    budget_core_edges: usize,
    budget_paths: usize,
    budget_width: usize,
) -> Result<(&'static str, Solution, Option<usize>, Option<usize>), PspError> {
    match algo {
        Algo::Tree => {
            let full = SubgraphRef::full(instance.graph());
            let solution = solve_forest(&full, instance.paths())?;
            Ok(("tree", solution, None, None))
        }
        Algo::Bruteforce => {
            let solution = solve_bruteforce_with_budget(instance, budget_paths)?;
            Ok(("bruteforce", solution, None, None))
        }
        Algo::FvsDelta => {
            let core = core_edge_requirement(instance)?;
            let solution = solve_fvs_delta_with_budget(instance, budget_core_edges)?;
            Ok(("fvs-delta", solution, Some(core), None))
        }
        Algo::TwConflict => {
            let dec = match decomposition {
                Some(d) => d.clone(),
                None => pspkit::treewidth::heuristic_tree_decomposition(instance.graph()),
            };
            let lifted = pspkit::treewidth::lift_to_conflict(&dec, instance);
            let width = lifted.width();
            let solution = solve_tw_with(instance, Some(&dec), budget_width)?;
            Ok(("tw-conflict", solution, None, Some(width)))
        }
        Algo::Auto => {
            // forest first, then small core, then bounded width, then
            // exponential search as a last resort
            if instance.graph().is_forest() {
                return run_solver(
                    instance,
                    Algo::Tree,
                    decomposition,
                    budget_core_edges,
                    budget_paths,
                    budget_width,
                );
            }
            if core_edge_requirement(instance)? <= budget_core_edges {
                return run_solver(
                    instance,
                    Algo::FvsDelta,
                    decomposition,
                    budget_core_edges,
                    budget_paths,
                    budget_width,
                );
            }
            let dec = match decomposition {
                Some(d) => d.clone(),
                None => pspkit::treewidth::heuristic_tree_decomposition(instance.graph()),
            };
            let lifted = pspkit::treewidth::lift_to_conflict(&dec, instance);
            if lifted.width() <= budget_width {
                return run_solver(
                    instance,
                    Algo::TwConflict,
                    Some(&dec),
                    budget_core_edges,
                    budget_paths,
                    budget_width,
                );
            }
            if instance.path_count() <= budget_paths {
                return run_solver(
                    instance,
                    Algo::Bruteforce,
                    decomposition,
                    budget_core_edges,
                    budget_paths,
                    budget_width,
                );
            }
            Err(PspError::Budget {
                what: "every solver's budget",
                limit: budget_paths,
                actual: instance.path_count(),
            })
        }
    }
}

fn cmd_solve(args: SolveArgs) -> u8 {
    let instance = match load_instance(&args.input) {
        Ok(i) => i,
        Err(code) => return code,
    };
    let instance = match args.k {
        Some(k) => instance.with_k(k),
        None => instance,
    };

    let decomposition = match &args.decomposition {
        Some(path) => {
            let text = match read_file(path) {
                Ok(t) => t,
                Err(code) => return code,
            };
            match parse_tree_decomposition(&text) {
                Ok(d) => {
                    let reasons = decomposition_violations(instance.graph(), &d);
                    if !reasons.is_empty() {
                        for r in &reasons {
                            eprintln!("error: supplied decomposition: {r}");
                        }
                        return EXIT_INAPPLICABLE;
                    }
                    Some(d)
                }
                Err(e) => {
                    eprintln!("error: {}: {e}", path.display());
                    return EXIT_PARSE;
                }
            }
        }
        None => None,
    };

    let start = Instant::now();
    let outcome = run_solver(
        &instance,
        args.algo,
        decomposition.as_ref(),
        args.budget_core_edges,
        args.budget_paths,
        args.budget_width,
    );
    let wall_ms = start.elapsed().as_millis();

    let (algo_used, solution, core_edges, width) = match outcome {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };

    // every reported optimum is re-verified before printing
    let verdict = verify_solution(&instance, &solution);
    if !verdict.valid {
        eprintln!("error: solver returned an invalid packing; this is a bug");
        for reason in solution_violations(&instance, &solution) {
            eprintln!("  {reason}");
        }
        return EXIT_VERIFY;
    }

    let solution_path = args.solution_out.as_ref().map(|p| p.display().to_string());
    if let Some(out) = &args.solution_out {
        if let Err(e) = fs::write(out, serialize_solution(&solution)) {
            eprintln!("error: cannot write {}: {e}", out.display());
            return EXIT_PARSE;
        }
    }

    let report = RunReport {
        algorithm: algo_used,
        instance_name: args.input.display().to_string(),
        digest: report::instance_digest(&serialize_psp(&instance)),
        optimum: verdict.size,
        k: instance.k(),
        decision_yes: verdict.meets_k,
        wall_ms,
        lambda: instance.graph().feedback_edge_number(),
        delta: instance.graph().max_degree(),
        max_path_len: instance.max_path_len(),
        core_edges,
        width,
        solution_path,
    };
    print!("{report}");
    0
}

fn cmd_generate(args: GenerateArgs) -> u8 {
    match args.kind {
        GenerateKind::MccVc { mcc, out } => {
            let text = match read_file(&mcc) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let parsed = match parse_mcc(&text) {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("error: {}: {e}", mcc.display());
                    return EXIT_PARSE;
                }
            };
            let output = match reduce_mcc_vc(&parsed) {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_PARSE;
                }
            };
            if let Err(e) = fs::write(&out, serialize_psp(&output.instance)) {
                eprintln!("error: cannot write {}: {e}", out.display());
                return EXIT_PARSE;
            }
            println!("target: {}", output.target);
            println!("written: {}", out.display());
            0
        }
        GenerateKind::MccPw { mcc, out, emit_witness } => {
            let text = match read_file(&mcc) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let parsed = match parse_mcc(&text) {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("error: {}: {e}", mcc.display());
                    return EXIT_PARSE;
                }
            };
            let output = match reduce_mcc_pw(&parsed) {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_PARSE;
                }
            };
            if let Err(e) = fs::write(&out, serialize_psp(&output.instance)) {
                eprintln!("error: cannot write {}: {e}", out.display());
                return EXIT_PARSE;
            }
            if let Some(witness_path) = emit_witness {
                let witness = pw_witness(&parsed).expect("parameters already checked");
                let text = serialize_tree_decomposition(
                    &witness,
                    output.instance.graph().vertex_count(),
                );
                if let Err(e) = fs::write(&witness_path, text) {
                    eprintln!("error: cannot write {}: {e}", witness_path.display());
                    return EXIT_PARSE;
                }
                println!("witness: {}", witness_path.display());
            }
            println!("target: {}", output.target);
            println!("written: {}", out.display());
            0
        }
        GenerateKind::Random { n, extra_edges, paths, max_len, seed, out } => {
            if n < 2 || paths == 0 || max_len == 0 {
                eprintln!("error: need n >= 2, paths >= 1 and max-len >= 1");
                return EXIT_PARSE;
            }
            let instance = gen_random(&RandomInstanceParams {
                n,
                extra_edges,
                path_count: paths,
                max_len,
                seed,
            });
            if let Err(e) = fs::write(&out, serialize_psp(&instance)) {
                eprintln!("error: cannot write {}: {e}", out.display());
                return EXIT_PARSE;
            }
            println!("written: {}", out.display());
            0
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> u8 {
    let instance = match load_instance(&args.instance) {
        Ok(i) => i,
        Err(code) => return code,
    };
    match (&args.solution, &args.decomposition) {
        (Some(solution_path), None) => {
            let text = match read_file(solution_path) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let solution = match parse_solution(&text) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {}: {e}", solution_path.display());
                    return EXIT_PARSE;
                }
            };
            let reasons = solution_violations(&instance, &solution);
            if !reasons.is_empty() {
                for r in &reasons {
                    println!("invalid: {r}");
                }
                return EXIT_INVALID;
            }
            let verdict = verify_solution(&instance, &solution);
            if !verdict.meets_k {
                println!(
                    "invalid: size {} is below the threshold k = {}",
                    verdict.size,
                    instance.k()
                );
                return EXIT_INVALID;
            }
            println!("valid: {} pairwise edge-disjoint paths (k = {})", verdict.size, instance.k());
            0
        }
        (None, Some(dec_path)) => {
            let text = match read_file(dec_path) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let dec = match parse_tree_decomposition(&text) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("error: {}: {e}", dec_path.display());
                    return EXIT_PARSE;
                }
            };
            let reasons = decomposition_violations(instance.graph(), &dec);
            if !reasons.is_empty() {
                for r in &reasons {
                    println!("invalid: {r}");
                }
                return EXIT_INVALID;
            }
            println!("valid: width {} over {} bags", dec.width(), dec.bag_count());
            0
        }
        _ => {
            eprintln!("error: pass exactly one of --solution or --decomposition");
            EXIT_PARSE
        }
    }
}

fn cmd_export_conflict(args: ExportArgs) -> u8 {
    let instance = match load_instance(&args.input) {
        Ok(i) => i,
        Err(code) => return code,
    };
    let cg = build_conflict_graph(&instance);
    if let Err(e) = fs::write(&args.out, conflict_dimacs(&cg)) {
        eprintln!("error: cannot write {}: {e}", args.out.display());
        return EXIT_PARSE;
    }
    println!("written: {}", args.out.display());
    0
}
