//! Acceptance suite: equivalence batteries against the exact oracle, the
//! empirical iff checks for both clique reductions, and the structural
//! bounds the decompositions and generators must respect. Every criterion
//! prints one PASS line (run with `--nocapture` to see them).

use std::time::Instant;

use pspkit::conflict::{build_conflict_graph, solve_bruteforce_with_budget};
use pspkit::forest::{solve_forest, SubgraphRef};
use pspkit::fvs::{
    augment_clique, decompose_structure, solve_fvs_delta_with_budget, FvsContext,
};
use pspkit::graph::Graph;
use pspkit::instance::{verify_solution, PspInstance};
use pspkit::reductions::{
    gen_random, pw_witness, reduce_mcc_pw, reduce_mcc_vc, solve_mcc_bruteforce, MccInstance,
    RandomInstanceParams,
};
use pspkit::treewidth::{
    heuristic_tree_decomposition, lift_to_conflict, lifted_bag_bound, solve_tw,
    validate_decomposition,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded forest battery: n <= 12 vertices, <= 18 paths.
fn forest_battery(count: usize) -> Vec<PspInstance> {
    (0..count)
        .map(|i| {
            gen_random(&RandomInstanceParams {
                n: 4 + i % 9,               // 4..=12
                extra_edges: 0,
                path_count: 3 + (i * 7) % 16, // 3..=18
                max_len: 1 + i % 6,
                seed: 0xF00D + i as u64,
            })
        })
        .collect()
}

/// Seeded battery for the core-structure solver: spanning tree plus at most
/// 2 chords, maximum degree 4, n <= 12, |P| <= 12. Seeds advance until the
/// degree cap holds, deterministically.
fn fvs_battery(count: usize) -> Vec<PspInstance> {
    let mut out = Vec::with_capacity(count);
    let mut seed = 0xBEEF_u64;
    for i in 0..count {
        loop {
            seed += 1;
            let inst = gen_random(&RandomInstanceParams {
                n: 5 + i % 8,               // 5..=12
                extra_edges: i % 3,          // 0..=2
                path_count: 4 + i % 9,       // 4..=12
                max_len: 1 + i % 5,
                seed,
            });
            if inst.graph().max_degree() <= 4 {
                out.push(inst);
                break;
            }
        }
    }
    out
}

/// Seeded battery for the treewidth route: n <= 10, path length <= 4,
/// |P| <= 12.
fn tw_battery(count: usize) -> Vec<PspInstance> {
    (0..count)
        .map(|i| {
            gen_random(&RandomInstanceParams {
                n: 4 + i % 7,               // 4..=10
                extra_edges: i % 4,          // 0..=3
                path_count: 4 + i % 9,       // 4..=12
                max_len: 1 + i % 4,          // 1..=4
                seed: 0xCAFE + i as u64,
            })
        })
        .collect()
}

fn oracle_size(instance: &PspInstance) -> usize {
    solve_bruteforce_with_budget(instance, 30)
        .expect("battery instances fit the oracle budget")
        .len()
}

#[test]
fn criterion_1_tree_solver_oracle_equivalence() {
    let start = Instant::now();
    let battery = forest_battery(500);
    for (i, instance) in battery.iter().enumerate() {
        let full = SubgraphRef::full(instance.graph());
        let forest = solve_forest(&full, instance.paths()).expect("battery graphs are forests");
        assert!(verify_solution(instance, &forest).valid, "instance {i}");
        let exact = oracle_size(instance);
        assert_eq!(forest.len(), exact, "instance {i} diverged from the oracle");
    }
    println!(
        "criterion 1 (tree solver vs oracle, 500 forests): PASS in {:.1}s (target < 60s)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_2_fvs_fpt_oracle_equivalence() {
    let start = Instant::now();
    let battery = fvs_battery(200);
    for (i, instance) in battery.iter().enumerate() {
        let solution = solve_fvs_delta_with_budget(instance, 32)
            .expect("battery instances fit the granted core budget");
        assert!(verify_solution(instance, &solution).valid, "instance {i}");
        let exact = oracle_size(instance);
        assert_eq!(solution.len(), exact, "instance {i} diverged from the oracle");
    }
    println!(
        "criterion 2 (feedback-edge solver vs oracle, 200 instances): PASS in {:.1}s (target < 600s)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_3_tw_conflict_oracle_equivalence() {
    let start = Instant::now();
    let battery = tw_battery(200);
    for (i, instance) in battery.iter().enumerate() {
        let solution = solve_tw(instance).expect("battery widths fit the default budget");
        assert!(verify_solution(instance, &solution).valid, "instance {i}");
        let exact = oracle_size(instance);
        assert_eq!(solution.len(), exact, "instance {i} diverged from the oracle");
    }
    println!(
        "criterion 3 (treewidth route vs oracle, 200 instances): PASS in {:.1}s (target < 300s)",
        start.elapsed().as_secs_f64()
    );
}

/// MCC has a clique iff the reduced instance packs at least the target.
fn check_iff_battery<F>(
    k: usize,
    n: usize,
    edge_subsets: impl Iterator<Item = Vec<(usize, usize)>>,
    target: usize,
    reduce: F,
) -> (usize, usize)
where
    F: Fn(&MccInstance) -> pspkit::reductions::ReductionOutput,
{
    let mut yes = 0;
    let mut no = 0;
    for edges in edge_subsets {
        let mcc = MccInstance::new(k, n, edges).expect("cross pairs are valid");
        let clique = solve_mcc_bruteforce(&mcc).expect("tuple space is tiny").is_some();
        let reduced = reduce(&mcc);
        assert_eq!(reduced.target, target);
        let optimum = oracle_size(&reduced.instance);
        assert_eq!(
            optimum >= target,
            clique,
            "iff broken for k={k} n={n} edges={:?}: clique={clique}, optimum={optimum}, target={target}",
            mcc.edges().collect::<Vec<_>>()
        );
        if clique {
            yes += 1;
        } else {
            no += 1;
        }
    }
    (yes, no)
}

fn all_subsets(pairs: &[(usize, usize)]) -> impl Iterator<Item = Vec<(usize, usize)>> + '_ {
    (0u32..(1 << pairs.len())).map(move |mask| {
        pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect()
    })
}

fn sampled_subsets(
    pairs: Vec<(usize, usize)>,
    count: usize,
    seed: u64,
) -> impl Iterator<Item = Vec<(usize, usize)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let masks: Vec<u64> = (0..count).map(|_| rng.gen_range(0..1u64 << pairs.len())).collect();
    masks.into_iter().map(move |mask| {
        pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect()
    })
}

#[test]
fn criterion_4_vc_reduction_iff() {
    let start = Instant::now();
    let pairs22 = MccInstance::all_cross_pairs(2, 2);
    assert_eq!(pairs22.len(), 4);
    let (yes22, no22) = check_iff_battery(2, 2, all_subsets(&pairs22), 3, |m| {
        reduce_mcc_vc(m).expect("parameters in range")
    });
    assert_eq!(yes22 + no22, 16);
    assert!(yes22 > 0 && no22 > 0, "battery must exercise both directions");

    let pairs32 = MccInstance::all_cross_pairs(3, 2);
    assert_eq!(pairs32.len(), 12);
    let (yes32, no32) = check_iff_battery(3, 2, sampled_subsets(pairs32, 300, 0x51DE), 6, |m| {
        reduce_mcc_vc(m).expect("parameters in range")
    });
    assert_eq!(yes32 + no32, 300);
    assert!(yes32 > 0 && no32 > 0, "battery must exercise both directions");

    println!(
        "criterion 4 (vertex-cover reduction iff, 16 + 300 cases, {} yes): PASS in {:.1}s (target < 900s)",
        yes22 + yes32,
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_5_pw_reduction_iff() {
    let start = Instant::now();
    let pairs22 = MccInstance::all_cross_pairs(2, 2);
    let (yes22, no22) = check_iff_battery(2, 2, all_subsets(&pairs22), 3, |m| {
        reduce_mcc_pw(m).expect("parameters in range")
    });
    assert_eq!(yes22 + no22, 16);
    assert!(yes22 > 0 && no22 > 0);

    let pairs32 = MccInstance::all_cross_pairs(3, 2);
    let (yes32, no32) = check_iff_battery(3, 2, sampled_subsets(pairs32, 300, 0x51DE), 6, |m| {
        reduce_mcc_pw(m).expect("parameters in range")
    });
    assert_eq!(yes32 + no32, 300);
    assert!(yes32 > 0 && no32 > 0);

    println!(
        "criterion 5 (pathwidth reduction iff, 16 + 300 cases, {} yes): PASS in {:.1}s (target < 900s)",
        yes22 + yes32,
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_6_lifted_decomposition_bound() {
    let start = Instant::now();
    let battery = tw_battery(200);
    let mut bags_checked = 0usize;
    for (i, instance) in battery.iter().enumerate() {
        let dec = heuristic_tree_decomposition(instance.graph());
        assert!(validate_decomposition(instance.graph(), &dec), "instance {i}");
        let lifted = lift_to_conflict(&dec, instance);

        let conflict = build_conflict_graph(instance);
        let conflict_host = Graph::new(conflict.vertex_count(), conflict.edges())
            .expect("conflict graph is simple");
        assert!(
            validate_decomposition(&conflict_host, &lifted),
            "instance {i}: lift is not a valid decomposition of the conflict graph"
        );

        let bound = lifted_bag_bound(
            dec.width(),
            instance.graph().max_degree(),
            instance.max_path_len(),
        );
        for (b, bag) in lifted.bags.iter().enumerate() {
            assert!(
                (bag.len() as u128) <= bound,
                "instance {i} bag {b}: {} paths exceeds bound {bound}",
                bag.len()
            );
            bags_checked += 1;
        }
    }
    println!(
        "criterion 6 (lifted bag bound + validity, {bags_checked} bags over 200 instances): PASS in {:.1}s",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_7_structure_bounds() {
    let start = Instant::now();
    let battery = fvs_battery(200);
    let mut checked = 0usize;
    for (i, instance) in battery.iter().enumerate() {
        // battery graphs are connected (spanning tree construction), so the
        // per-component decomposition is the whole-graph one
        let (augmented, _) = augment_clique(instance.graph());
        let decomp = decompose_structure(&augmented).expect("augmented graphs decompose");
        let lambda = decomp.lambda_core;
        let x = decomp.x_vertices.len();
        assert!(
            x <= 2 * lambda - 2,
            "instance {i}: |X| = {x} exceeds 2*lambda' - 2 = {}",
            2 * lambda - 2
        );
        assert!(
            decomp.d_components.len() <= lambda + x - 1,
            "instance {i}: {} chain components exceed lambda' + |X| - 1 = {}",
            decomp.d_components.len(),
            lambda + x - 1
        );
        checked += 1;
    }
    println!(
        "criterion 7 (peeling bounds on {checked} decompositions): PASS in {:.1}s",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_8_reduction_structure() {
    let start = Instant::now();
    for k in 2..=3usize {
        for n in 2..=3usize {
            let pairs = MccInstance::all_cross_pairs(k, n);
            // full cross set and a sparser deterministic subset
            let sparse: Vec<(usize, usize)> = pairs.iter().copied().step_by(2).collect();
            for edges in [pairs.clone(), sparse] {
                let mcc = MccInstance::new(k, n, edges.clone()).unwrap();

                let vc = reduce_mcc_vc(&mcc).unwrap();
                assert_eq!(vc.instance.path_count(), edges.len() + k * n * (n - 1));
                assert!(pspkit::instance::validate_psp(&vc.instance).is_empty());
                let hubs: std::collections::BTreeSet<usize> = vc
                    .vertex_map
                    .iter()
                    .filter(|(name, _)| name.starts_with("c_"))
                    .map(|(_, &v)| v)
                    .collect();
                assert_eq!(hubs.len(), k * k);
                for e in vc.instance.graph().edges() {
                    assert!(hubs.contains(&e.u()) || hubs.contains(&e.v()));
                }
                for (name, &idx) in &vc.path_map {
                    if name.starts_with("long") {
                        assert_eq!(vc.instance.paths()[idx].vertices().len(), 2 * k + 1);
                    }
                }

                let pw = reduce_mcc_pw(&mcc).unwrap();
                assert_eq!(pw.instance.path_count(), n * k + edges.len());
                assert!(pspkit::instance::validate_psp(&pw.instance).is_empty());
                let inter_edges: std::collections::BTreeSet<pspkit::graph::Edge> = (0..k)
                    .flat_map(|gi| ((gi + 1)..k).map(move |gj| (gi, gj)))
                    .map(|(gi, gj)| {
                        pspkit::graph::Edge::new(
                            pw.vertex_map[&format!("c_{}_{}", gi + 1, gj + 1)],
                            pw.vertex_map[&format!("c_{}_{}", gj + 1, gi + 1)],
                        )
                    })
                    .collect();
                for (name, &idx) in &pw.path_map {
                    if name.starts_with("short") {
                        let hits = pw.instance.paths()[idx]
                            .edges()
                            .iter()
                            .filter(|e| inter_edges.contains(e))
                            .count();
                        assert_eq!(hits, 1, "{name} must use exactly one inter-gadget edge");
                    }
                }

                let witness = pw_witness(&mcc).unwrap();
                assert!(validate_decomposition(pw.instance.graph(), &witness));
                let max_bag = witness.bags.iter().map(|b| b.len()).max().unwrap();
                assert!(
                    max_bag <= k * k + 2 * k + 4,
                    "k={k} n={n}: bag of {max_bag} exceeds {}",
                    k * k + 2 * k + 4
                );
                assert_eq!(witness.bag_count(), k * (2 * k * (n + 1) - 1));
            }
        }
    }
    println!(
        "criterion 8 (generator structural formulas, k,n in 2..=3): PASS in {:.1}s (target < 30s)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_9_compatibility_subset_law() {
    let start = Instant::now();
    let mut compatible_checked = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let battery = fvs_battery(60);

    'outer: for instance in &battery {
        let (augmented, _) = augment_clique(instance.graph());
        let local = PspInstance::new(augmented, instance.paths().to_vec(), instance.k())
            .expect("augmentation preserves paths");
        let decomp = decompose_structure(local.graph()).expect("augmented graphs decompose");
        let context = FvsContext::new(&local, &decomp);

        for guess in context.realizable_guesses() {
            if guess.block_count() == 0 {
                continue;
            }
            // paths typed by some block of this guess
            let pool: Vec<usize> = (0..local.path_count())
                .filter(|&p| guess.block_matching(&context.path_types()[p]).is_some())
                .collect();
            if pool.is_empty() {
                continue;
            }
            for _ in 0..6 {
                let size = rng.gen_range(1..=pool.len().min(4));
                let mut sample: Vec<usize> = Vec::new();
                for _ in 0..size {
                    sample.push(pool[rng.gen_range(0..pool.len())]);
                }
                let set: std::collections::BTreeSet<usize> = sample.into_iter().collect();
                if !context.is_compatible(&set, &guess) {
                    continue;
                }
                compatible_checked += 1;
                // every subset must stay compatible
                let members: Vec<usize> = set.iter().copied().collect();
                for mask in 0u32..(1 << members.len()) {
                    let subset: std::collections::BTreeSet<usize> = members
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &p)| p)
                        .collect();
                    assert!(
                        context.is_compatible(&subset, &guess),
                        "subset {subset:?} of compatible {set:?} is incompatible"
                    );
                }
                if compatible_checked >= 1000 {
                    break 'outer;
                }
            }
        }
    }
    assert!(
        compatible_checked >= 1000,
        "battery produced only {compatible_checked} compatible sets"
    );
    println!(
        "criterion 9 (subset law on {compatible_checked} compatible sets): PASS in {:.1}s",
        start.elapsed().as_secs_f64()
    );
}
