//! Prints one PASS/FAIL line per acceptance criterion and exits nonzero if
//! any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use automset::interval::{
    canonical_code, describe, interval_automorphism_group, maximal_cliques, PQTree,
};
use automset::marked::{autom_marked_int, classify_clean, MarkedInstance};
use automset::oracle::{
    brute_autom_marked, brute_autom_set, brute_graph_autom, gen_interval_graph,
    gen_interval_instance, gen_relabeling, gen_set_family, max_antichain, nth_permutation,
    FamilyShape, OracleBudget,
};
use automset::setfamily::{autom_set, venn_good, ColoredSetFamily, Entry, SimpleFamily};
use automset::Permutation;
use common::{four_sets, interval_example, vertices, word};

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, n: usize, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failed += 1;
        }
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("criterion {n} [{verdict}] {name}: {detail}");
    }
}

struct SetRuns {
    mismatches: Vec<u64>,
    index_violations: usize,
    height_violations: usize,
    max_height: usize,
    elapsed: Duration,
}

fn set_family_runs() -> SetRuns {
    let budget = OracleBudget::default();
    let shape = FamilyShape::default();
    let start = Instant::now();
    let mut runs = SetRuns {
        mismatches: Vec::new(),
        index_violations: 0,
        height_violations: 0,
        max_height: 0,
        elapsed: Duration::ZERO,
    };
    for seed in 0..500 {
        let family = gen_set_family(seed, &shape);
        let fast = autom_set(&family).expect("pipeline succeeds");
        let slow = brute_autom_set(&family, &budget).expect("within budget");
        let same = fast.group.order() == slow.order
            && fast.group.is_subgroup_of(&slow.group).unwrap()
            && slow.group.is_subgroup_of(&fast.group).unwrap();
        if !same {
            runs.mismatches.push(seed);
        }
        runs.index_violations += usize::from(!fast.trace.indices_within_bound());
        runs.height_violations += usize::from(!fast.trace.height_within_bound());
        runs.max_height = runs.max_height.max(fast.trace.height());
    }
    runs.elapsed = start.elapsed();
    runs
}

struct MarkedRuns {
    mismatches: Vec<u64>,
    antichain_violations: Vec<u64>,
}

fn marked_runs() -> MarkedRuns {
    let budget = OracleBudget::default();
    let mut runs = MarkedRuns {
        mismatches: Vec::new(),
        antichain_violations: Vec::new(),
    };
    for seed in 0..200u64 {
        let n = 1 + (seed % 8) as usize;
        let sets = 1 + (seed / 8 % 6) as usize;
        let colors = 1 + (seed % 3) as usize;
        let inst = gen_interval_instance(seed, n, sets, colors);
        let fast = autom_marked_int(&inst).expect("pipeline succeeds");
        let slow = brute_autom_marked(&inst, &budget).expect("within budget");
        let same =
            fast.group.order() == slow.order && fast.group.same_elements(&slow.group).unwrap();
        if !same {
            runs.mismatches.push(seed);
        }
        let reduced = fast.reduced.expect("nonempty marking");
        let a = max_antichain(&inst.sets.distinct_sets()).unwrap();
        let mut with_nodes = inst.sets.distinct_sets();
        with_nodes.extend(reduced.node_sets.iter().map(|(_, s)| s.clone()));
        let ac = max_antichain(&with_nodes).unwrap();
        if ac != a || reduced.antichain_with_nodes != a {
            runs.antichain_violations.push(seed);
        }
    }
    runs
}

fn four_set_golden(r: &mut Report) {
    let f = four_sets();
    let all = [0, 1, 2, 3];
    let swap_outer = venn_good(&f, &all, &Permutation::transposition(4, 0, 3)).unwrap();
    let swap_inner = venn_good(&f, &all, &Permutation::transposition(4, 1, 2)).unwrap();
    let width = max_antichain(&f.sets).unwrap();
    r.line(
        3,
        "four-set cell sizes",
        swap_outer && !swap_inner && width == 4,
        format!("(A D) good: {swap_outer}, (B C) good: {swap_inner}, antichain {width}"),
    );
}

fn interval_golden(r: &mut Report) {
    let g = interval_example();
    let cliques: BTreeSet<String> = maximal_cliques(&g)
        .unwrap()
        .iter()
        .map(|c| word(c))
        .collect();
    let want: BTreeSet<String> = [
        "abc", "abd", "abe", "bfgh", "bfhi", "bfij", "fkn", "fln", "fmn", "fop", "fpq", "fqr",
        "fstu", "fsuv", "fsvw",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let tree = PQTree::build(&g).unwrap();
    let shape = describe(&g, &tree, tree.root());
    let want_shape = "Q[bf](P[](P[n](fkn,fln,fmn),Q[pq](fop,fpq,fqr),Q[suv](fstu,fsuv,fsvw)),\
Q[hi](bfgh,bfhi,bfij),P[a](abc,abd,abe))";
    let entries = ["bfg", "fop", "suv"]
        .iter()
        .map(|w| Entry::new(vertices(w), 0, 1))
        .collect();
    let inst = MarkedInstance::new(g.clone(), entries).unwrap();
    let cls = classify_clean(&tree, &inst);
    let clean: BTreeSet<String> = cls
        .clean_roots(&tree)
        .iter()
        .map(|&x| describe(&g, &tree, x))
        .collect();
    let want_clean: BTreeSet<String> = [
        "P[a](abc,abd,abe)",
        "bfhi",
        "bfij",
        "P[n](fkn,fln,fmn)",
        "fpq",
        "fqr",
        "fstu",
        "fsuv",
        "fsvw",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    r.line(
        4,
        "interval example goldens",
        cliques == want && shape == want_shape && clean == want_clean && cls.kept.len() == 7,
        format!(
            "{} cliques, shape {}, {} clean subtrees, {} kept nodes",
            cliques.len(),
            if shape == want_shape {
                "matches"
            } else {
                "differs"
            },
            clean.len(),
            cls.kept.len()
        ),
    );
}

fn random_simple_family(rng: &mut ChaCha8Rng) -> SimpleFamily {
    let n = rng.random_range(1..=6);
    let count = rng.random_range(1..=6);
    let mut sets: Vec<Vec<usize>> = (0..count)
        .map(|_| {
            let mut s: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
            if s.is_empty() {
                s.push(rng.random_range(0..n));
            }
            s
        })
        .collect();
    sets.sort();
    sets.dedup();
    let m = sets.len();
    SimpleFamily {
        ground_size: n,
        sets,
        refined_color: vec![0; m],
        color_vectors: vec![vec![(0, 1)]],
    }
}

fn realizable(f: &SimpleFamily, rho: &Permutation) -> bool {
    let n = f.ground_size;
    let total: u64 = (1..=n as u64).product();
    (0..total).any(|i| {
        let sigma = nth_permutation(n, i);
        f.sets.iter().enumerate().all(|(k, s)| {
            let mut img: Vec<usize> = s.iter().map(|&x| sigma[x]).collect();
            img.sort_unstable();
            img == f.sets[rho.apply(k)]
        })
    })
}

fn venn_equivalence(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut violations, mut good, mut bad) = (0, 0, 0);
    for _ in 0..1000 {
        let f = random_simple_family(&mut rng);
        let m = f.sets.len();
        // permutations within cardinality classes make both outcomes common
        let mut images: Vec<usize> = (0..m).collect();
        let mut by_size: Vec<Vec<usize>> = Vec::new();
        for k in 0..m {
            match by_size
                .iter_mut()
                .find(|c| f.sets[c[0]].len() == f.sets[k].len())
            {
                Some(c) => c.push(k),
                None => by_size.push(vec![k]),
            }
        }
        for class in &by_size {
            let mut shuffled = class.clone();
            shuffled.shuffle(&mut rng);
            for (&from, &to) in class.iter().zip(&shuffled) {
                images[from] = to;
            }
        }
        let rho = Permutation::from_usize_images(&images).unwrap();
        let all: Vec<usize> = (0..m).collect();
        let claimed = venn_good(&f, &all, &rho).unwrap();
        let truth = realizable(&f, &rho);
        if claimed != truth {
            violations += 1;
        }
        if truth {
            good += 1;
        } else {
            bad += 1;
        }
    }
    r.line(
        5,
        "Venn-good iff realizable",
        violations == 0,
        format!("1000 pairs ({good} realizable, {bad} not), {violations} violations"),
    );
}

fn canonical_invariance(r: &mut Report) {
    let budget = OracleBudget::default();
    let (mut code_mismatches, mut order_mismatches, mut compared) = (0, 0, 0);
    for seed in 0..200u64 {
        let n = 1 + (seed % 10) as usize;
        let g = gen_interval_graph(seed, n);
        let h = g.relabel(&gen_relabeling(seed ^ 0xabcdef, n));
        let tg = PQTree::build(&g).unwrap();
        let th = PQTree::build(&h).unwrap();
        if canonical_code(&tg, tg.root()) != canonical_code(&th, th.root()) {
            code_mismatches += 1;
        }
        if n <= 7 {
            compared += 1;
            let fast = interval_automorphism_group(&g).unwrap();
            let slow = brute_graph_autom(&g, &budget).unwrap();
            if fast.order() != slow.order || !fast.same_elements(&slow.group).unwrap() {
                order_mismatches += 1;
            }
        }
    }
    r.line(
        8,
        "canonical invariance",
        code_mismatches == 0 && order_mismatches == 0,
        format!(
            "200 relabeled graphs, {code_mismatches} code mismatches; {compared} groups vs brute force, {order_mismatches} mismatches"
        ),
    );
}

/// Prefixes and suffixes of a line of `n` points, relabeled at random:
/// two chains, so the largest antichain has size 2.
fn prefix_suffix_family(n: usize, seed: u64) -> ColoredSetFamily {
    let relabel = gen_relabeling(seed, n);
    let mut entries = Vec::new();
    for i in 1..n {
        let mut prefix: Vec<usize> = (0..i).map(|x| relabel.apply(x)).collect();
        let mut suffix: Vec<usize> = (i..n).map(|x| relabel.apply(x)).collect();
        prefix.sort_unstable();
        suffix.sort_unstable();
        entries.push(Entry::new(prefix, 0, 1));
        entries.push(Entry::new(suffix, 0, 1));
    }
    ColoredSetFamily::new(n, entries).unwrap()
}

fn median_runtime(n: usize) -> (Duration, bool) {
    let mut times: Vec<Duration> = Vec::new();
    let mut ok = true;
    for seed in 0..5 {
        let f = prefix_suffix_family(n, seed);
        let start = Instant::now();
        let res = autom_set(&f).expect("pipeline succeeds");
        times.push(start.elapsed());
        ok &= f.max_antichain() == 2 && res.group.order() == 2u32.into();
    }
    times.sort();
    (times[times.len() / 2], ok)
}

fn fpt_smoke(r: &mut Report) {
    let floor = Duration::from_millis(2);
    let sizes = [20, 40, 80];
    let runs: Vec<(Duration, bool)> = sizes.iter().map(|&n| median_runtime(n)).collect();
    let ratios: Vec<f64> = runs
        .windows(2)
        .map(|w| w[1].0.max(floor).as_secs_f64() / w[0].0.max(floor).as_secs_f64())
        .collect();
    let correct = runs.iter().all(|&(_, ok)| ok);
    let pass = correct && ratios.iter().all(|&x| x <= 10.0);
    let times: Vec<String> = sizes
        .iter()
        .zip(&runs)
        .map(|(n, (t, _))| format!("n={n} {:.1}ms", t.as_secs_f64() * 1e3))
        .collect();
    r.line(
        9,
        "runtime growth at antichain 2",
        pass,
        format!(
            "{}; ratios per doubling {:.2?}; groups correct: {correct}",
            times.join(", "),
            ratios
        ),
    );
}

fn main() {
    let mut r = Report { failed: 0 };

    let sets = set_family_runs();
    r.line(
        1,
        "set family oracle equivalence",
        sets.mismatches.is_empty() && sets.elapsed < Duration::from_secs(300),
        format!(
            "500 families, {} mismatches {:?}, {:.1}s",
            sets.mismatches.len(),
            sets.mismatches,
            sets.elapsed.as_secs_f64()
        ),
    );

    let marked = marked_runs();
    r.line(
        2,
        "marked interval oracle equivalence",
        marked.mismatches.is_empty(),
        format!(
            "200 instances, {} mismatches {:?}",
            marked.mismatches.len(),
            marked.mismatches
        ),
    );

    four_set_golden(&mut r);
    interval_golden(&mut r);
    venn_equivalence(&mut r);

    r.line(
        6,
        "tower bounds",
        sets.index_violations == 0 && sets.height_violations == 0,
        format!(
            "{} index violations, {} height violations, tallest tower {}",
            sets.index_violations, sets.height_violations, sets.max_height
        ),
    );
    r.line(
        7,
        "antichain preserved by node sets",
        marked.antichain_violations.is_empty(),
        format!(
            "200 instances, {} violations {:?}",
            marked.antichain_violations.len(),
            marked.antichain_violations
        ),
    );

    canonical_invariance(&mut r);
    fpt_smoke(&mut r);

    if r.failed > 0 {
        println!("{} criteria failed", r.failed);
        std::process::exit(1);
    }
    println!("all criteria passed");
}
