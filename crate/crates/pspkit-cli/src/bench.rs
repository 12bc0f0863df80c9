use std::fs;
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use pspkit::instance::PspInstance;

use crate::{exit_code_for, run_solver, Algo, EXIT_MISMATCH, EXIT_PARSE};

#[derive(clap::Args)]
pub struct BenchArgs {
    /// Directory of .psp instance files
    #[arg(long)]
    corpus: PathBuf,
    /// Comma-separated solvers to run
    #[arg(long, value_delimiter = ',', default_value = "auto")]
    algos: Vec<Algo>,
    /// Timing repetitions per (instance, solver) pair
    #[arg(long, default_value_t = 1)]
    repetitions: usize,
    /// CSV output path (stdout when omitted)
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub instance: String,
    pub algo: &'static str,
    pub size: usize,
    pub wall_ms: u128,
    pub lambda: usize,
    pub delta: usize,
    pub max_path_len: usize,
}

pub fn render_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("instance,algo,size,wall_ms,lambda,delta,r\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.instance, row.algo, row.size, row.wall_ms, row.lambda, row.delta, row.max_path_len
        ));
    }
    out
}

/// All solvers must report the same optimum per instance. Returns the first
/// disagreement as (instance, algo_a, size_a, algo_b, size_b).
pub fn cross_check(rows: &[BenchRow]) -> Option<(String, &'static str, usize, &'static str, usize)> {
    let mut by_instance: Vec<(&str, &BenchRow)> = rows.iter().map(|r| (r.instance.as_str(), r)).collect();
    by_instance.sort_by_key(|(name, _)| *name);
    for window in by_instance.windows(2) {
        let [(na, a), (nb, b)] = window else { continue };
        if na == nb && a.size != b.size {
            return Some((a.instance.clone(), a.algo, a.size, b.algo, b.size));
        }
    }
    None
}

fn worker_count(job_count: usize) -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    let cap = std::env::var("PSPKIT_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(available);
    cap.min(job_count).max(1)
}

pub fn cmd_bench(args: BenchArgs) -> u8 {
    let mut files: Vec<PathBuf> = match fs::read_dir(&args.corpus) {
        Ok(entries) => entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "psp"))
            .collect(),
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.corpus.display());
            return EXIT_PARSE;
        }
    };
    files.sort();

    let mut instances: Vec<(String, PspInstance)> = Vec::new();
    for path in &files {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return EXIT_PARSE;
            }
        };
        match pspkit::instance::parse_psp(&text) {
            Ok(instance) => {
                let name = path
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                instances.push((name, instance));
            }
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_PARSE;
            }
        }
    }

    let repetitions = args.repetitions.max(1);
    let jobs: Vec<(usize, Algo)> = instances
        .iter()
        .enumerate()
        .flat_map(|(i, _)| args.algos.iter().map(move |&a| (i, a)))
        .collect();

    // workers pull jobs; results land at their job index so output order is
    // deterministic no matter the interleaving
    let results: Mutex<Vec<Option<Result<BenchRow, (u8, String)>>>> =
        Mutex::new(vec![None; jobs.len()]);
    let next_job = Mutex::new(0usize);
    let workers = worker_count(jobs.len());

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let job_index = {
                    let mut guard = next_job.lock().unwrap();
                    if *guard >= jobs.len() {
                        return;
                    }
                    let i = *guard;
                    *guard += 1;
                    i
                };
                let (instance_index, algo) = jobs[job_index];
                let (name, instance) = &instances[instance_index];
                let mut best_ms = u128::MAX;
                let mut outcome = None;
                for _ in 0..repetitions {
                    let start = Instant::now();
                    let run = run_solver(
                        instance,
                        algo,
                        None,
                        pspkit::fvs::DEFAULT_CORE_EDGE_BUDGET,
                        pspkit::conflict::DEFAULT_BRUTEFORCE_BUDGET,
                        pspkit::treewidth::DEFAULT_WIDTH_BUDGET,
                    );
                    best_ms = best_ms.min(start.elapsed().as_millis());
                    outcome = Some(run);
                }
                let row = match outcome.expect("at least one repetition") {
                    Ok((algo_used, solution, _, _)) => Ok(BenchRow {
                        instance: name.clone(),
                        algo: algo_used,
                        size: solution.len(),
                        wall_ms: best_ms,
                        lambda: instance.graph().feedback_edge_number(),
                        delta: instance.graph().max_degree(),
                        max_path_len: instance.max_path_len(),
                    }),
                    Err(e) => Err((exit_code_for(&e), format!("{name} ({}): {e}", algo.name()))),
                };
                results.lock().unwrap()[job_index] = Some(row);
            });
        }
    });

    let mut rows = Vec::with_capacity(jobs.len());
    for result in results.into_inner().unwrap() {
        match result.expect("every job ran") {
            Ok(row) => rows.push(row),
            Err((code, message)) => {
                eprintln!("error: {message}");
                return code;
            }
        }
    }

    if let Some((instance, algo_a, size_a, algo_b, size_b)) = cross_check(&rows) {
        eprintln!(
            "error: solvers disagree on {instance}: {algo_a} found {size_a}, {algo_b} found {size_b}"
        );
        return EXIT_MISMATCH;
    }

    let csv = render_csv(&rows);
    match &args.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &csv) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_PARSE;
            }
            println!("written: {} ({} rows)", path.display(), rows.len());
        }
        None => print!("{csv}"),
    }
    0
}
