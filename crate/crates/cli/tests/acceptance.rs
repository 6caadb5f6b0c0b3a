//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.
//!
//! Exact criteria compare the estimators against independent oracles on
//! randomized instances. Statistical criteria run seeded experiments whose
//! parameters and gates are fixed below; seeds are not tuned.
//!
//! Run alone with `cargo test --release -p clustertree-cli --test acceptance`.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use clustertree::io::{labels_to_csv, tree_to_json};
use clustertree::synthetic::{trial_seed, two_bump, Uniform01};
use clustertree::validation::{
    check_separation_connectedness, hartigan_consistency_curve, knn_disconnection_experiment,
    pruning_experiment, single_linkage_oracle, size_experiment, ExperimentReport, ExplicitGraphs,
    KSchedule,
};
use clustertree::{
    build_tree, edge_activation, prune, unit_ball_volume, ClusterTree, EdgeRule, MergeEvent,
    PointSet, PruneOptions, Rule, ScaleParams, Subpartition, TreeMeta,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

struct Gen(Uniform01);

impl Gen {
    fn new(seed: u64) -> Self {
        Gen(Uniform01::new(seed))
    }

    fn f(&mut self) -> f64 {
        self.0.next()
    }

    /// Uniform on `lo..=hi`.
    fn int(&mut self, lo: usize, hi: usize) -> usize {
        lo + ((self.f() * (hi - lo + 1) as f64) as usize).min(hi - lo)
    }

    fn pick<T: Copy>(&mut self, xs: &[T]) -> T {
        xs[self.int(0, xs.len() - 1)]
    }

    fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        (lo.ln() + self.f() * (hi.ln() - lo.ln())).exp()
    }

    /// Continuous, tied (integer grid) or clumped coordinates.
    fn points(&mut self, n: usize, d: usize) -> PointSet {
        let style = self.int(0, 3);
        let centers: Vec<f64> = (0..3 * d).map(|_| self.f() * 10.0).collect();
        let coords = (0..n * d)
            .map(|i| match style {
                0 | 1 => self.f(),
                2 => self.int(0, 4) as f64,
                _ => {
                    let c = self.int(0, 2);
                    centers[c * d + i % d] + 0.3 * self.f()
                }
            })
            .collect();
        PointSet::from_flat(d, coords).unwrap()
    }
}

const ALPHAS: [f64; 3] = [1.0, std::f64::consts::SQRT_2, 2.0];

fn refines(fine: &Subpartition, coarse: &Subpartition, n: usize) -> bool {
    let mut label = vec![usize::MAX; n];
    for (c, part) in coarse.iter().enumerate() {
        for &i in part {
            label[i] = c;
        }
    }
    fine.iter().all(|part| {
        let l = label[part[0]];
        l != usize::MAX && part.iter().all(|&i| label[i] == l)
    })
}

fn vertices(parts: &Subpartition) -> BTreeSet<usize> {
    parts.iter().flatten().copied().collect()
}

fn nested_or_disjoint(a: &Subpartition, b: &Subpartition) -> bool {
    a.iter().all(|x| {
        let x: BTreeSet<usize> = x.iter().copied().collect();
        b.iter().all(|y| {
            let y: BTreeSet<usize> = y.iter().copied().collect();
            x.is_disjoint(&y) || x.is_subset(&y) || y.is_subset(&x)
        })
    })
}

/// Every radius at which the graphs can change, with neighbors.
fn candidate_radii(
    ps: &PointSet,
    rule: &EdgeRule,
    tree: &ClusterTree,
    oracle: &ExplicitGraphs,
) -> Vec<f64> {
    let rk = oracle.radii();
    let mut rs = vec![0.0, f64::INFINITY];
    rs.extend(rk);
    rs.extend(tree.event_radii());
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            let d = ps.dist(i, j);
            if let Ok(a) = edge_activation(rule, d, rk[i], rk[j]) {
                if a.is_finite() {
                    rs.push(a);
                }
            }
        }
    }
    let mut all: Vec<f64> = rs
        .iter()
        .flat_map(|&r| [r, r.next_down().max(0.0), r.next_up()])
        .collect();
    all.sort_by(f64::total_cmp);
    all.dedup();
    all
}

fn criterion_1() -> Outcome {
    let mut g = Gen::new(1001);
    let (mut checked, mut bad) = (0usize, Vec::new());
    for inst in 0..500 {
        let n = g.int(2, 60);
        let d = g.int(1, 3);
        let k = g.int(2, 10).min(n);
        let rule = EdgeRule::new(Rule::ALL[inst % 3], g.pick(&ALPHAS)).unwrap();
        let ps = g.points(n, d);
        let tree = build_tree(&ps, k, &rule).unwrap();
        let oracle = ExplicitGraphs::new(&ps, k, &rule).unwrap();
        for r in candidate_radii(&ps, &rule, &tree, &oracle) {
            checked += 1;
            if tree.components_at(r).unwrap() != oracle.components_at(r).unwrap() {
                bad.push((inst, r));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "500 instances, {checked} radii, {} mismatches {:?}",
            bad.len(),
            &bad[..bad.len().min(3)]
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut g = Gen::new(1002);
    let mut bad = Vec::new();
    for inst in 0..100 {
        let n = g.int(2, 100);
        let ps = g.points(n, 2);
        let tree = build_tree(&ps, 2, &EdgeRule::rsl(1.0).unwrap()).unwrap();
        let oracle = single_linkage_oracle(&ps).unwrap();
        if tree.events() != oracle.events() || tree.meta() != oracle.meta() {
            bad.push(inst);
        }
    }
    outcome(
        bad.is_empty(),
        format!("100 sets, {} mismatched instances {bad:?}", bad.len()),
    )
}

fn criterion_3() -> Outcome {
    let mut g = Gen::new(1003);
    let (mut checks, mut violations) = (0usize, Vec::new());
    while checks < 1000 {
        let n = g.int(2, 40);
        let d = g.int(1, 3);
        let k = g.int(1, 8).min(n);
        let alpha = g.pick(&ALPHAS);
        let ps = g.points(n, d);
        let graphs: Vec<ExplicitGraphs> = Rule::ALL
            .iter()
            .map(|&r| ExplicitGraphs::new(&ps, k, &EdgeRule::new(r, alpha).unwrap()).unwrap())
            .collect();
        let trees: Vec<ClusterTree> = Rule::ALL
            .iter()
            .map(|&r| build_tree(&ps, k, &EdgeRule::new(r, alpha).unwrap()).unwrap())
            .collect();
        let mut levels: Vec<f64> = trees.iter().flat_map(|t| t.event_radii()).collect();
        levels.push(0.0);
        for _ in 0..5 {
            let (mut r, mut r2) = (g.pick(&levels), g.pick(&levels));
            if g.f() < 0.3 {
                r = r.next_down().max(0.0);
            }
            if r > r2 {
                std::mem::swap(&mut r, &mut r2);
            }
            checks += 1;
            let mut fail =
                |what: &str| violations.push(format!("{what} at n={n} k={k} r={r} r'={r2}"));
            let at: Vec<_> = graphs.iter().map(|gr| gr.graph_at(r).unwrap()).collect();
            let at2: Vec<_> = graphs.iter().map(|gr| gr.graph_at(r2).unwrap()).collect();
            for (rule, (e, e2)) in at.iter().zip(&at2).enumerate() {
                if !e.vertices.iter().all(|v| e2.vertices.contains(v)) {
                    fail("V_r not in V_r'");
                }
                let later: BTreeSet<_> = e2.edges.iter().collect();
                if !e.edges.iter().all(|x| later.contains(x)) {
                    fail(&format!("E_r not in E_r' ({})", Rule::ALL[rule]));
                }
            }
            // Rules share vertices; k-NN edges are RSL edges, mutual ones k-NN edges.
            let rsl: BTreeSet<_> = at[0].edges.iter().collect();
            let knn: BTreeSet<_> = at[1].edges.iter().collect();
            if at[0].vertices != at[1].vertices || at[1].vertices != at[2].vertices {
                fail("vertex sets differ across rules");
            }
            if !knn.is_subset(&rsl) {
                fail("k-NN edge missing from RSL");
            }
            if !at[2].edges.iter().all(|x| knn.contains(x)) {
                fail("mutual k-NN edge missing from k-NN");
            }
            for t in &trees {
                let (c, c2) = (t.components_at(r).unwrap(), t.components_at(r2).unwrap());
                if !refines(&c, &c2, n) || !nested_or_disjoint(&c, &c2) {
                    fail(&format!("cluster containment ({})", t.meta().rule));
                }
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!(
            "{checks} checks, {} violations {:?}",
            violations.len(),
            &violations[..violations.len().min(3)]
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut g = Gen::new(1004);
    let (mut worst, mut floor_violations) = (0.0f64, 0usize);
    for _ in 0..10_000 {
        let n = g.log_uniform(2.0, 1e7) as usize;
        let k = g.int(1, n.min(5000));
        let d = g.int(1, 6);
        let alpha = 1.0 + g.f();
        let delta = 0.001 + 0.998 * g.f();
        let lambda = g.log_uniform(1e-4, 1e4);
        let lambda_max = lambda * g.log_uniform(1.0, 1e3);

        let exact = ScaleParams::new(n, k, d, alpha, delta, 0.0, 0.0).unwrap();
        let back = exact
            .lambda_tilde(exact.r_of_lambda(lambda).unwrap())
            .unwrap();
        worst = worst.max((back / lambda - 1.0).abs());

        let c_delta = 3.0 * g.f();
        let eps_tilde = g.log_uniform(1e-6, 1e3);
        let p = ScaleParams::new(n, k, d, alpha, delta, c_delta, eps_tilde).unwrap();
        if p.r_of_lambda(lambda).unwrap() < p.r_floor(lambda_max).unwrap() {
            floor_violations += 1;
        }
    }
    outcome(
        worst <= 1e-12 && floor_violations == 0,
        format!(
            "10000 draws, worst inversion error {worst:.2e}, {floor_violations} r(lambda) < r_o"
        ),
    )
}

/// Trials in which every listed outcome of `rule` held.
fn joint_fraction(report: &ExperimentReport, rule: Rule, keys: &[&str]) -> f64 {
    let evaluated: Vec<_> = report.diagnostics.iter().filter(|t| !t.skipped).collect();
    let hits = evaluated
        .iter()
        .filter(|t| keys.iter().all(|k| t.outcomes[&format!("{rule}.{k}")]))
        .count();
    hits as f64 / evaluated.len().max(1) as f64
}

fn criterion_5() -> Outcome {
    let density = two_bump(1.0, 4.0).unwrap();
    let level = 4.0;
    let cert = density.separation_certificate(level).unwrap();
    let sigma = cert.sigma_sup / 2.0;
    let eps = 0.5;
    let base = ScaleParams::with_c_o(1000, 1, 1, std::f64::consts::SQRT_2, 0.1, 0.25, 0.0).unwrap();
    let (k, n) = size_experiment(&base, 4.0, cert.cluster_level, sigma, eps, 1.0, 4.0).unwrap();
    let p = base.with_n_k(n, k).unwrap();
    let bound = p.sample_size_bound(sigma, cert.cluster_level, eps).unwrap();
    let k_knn = p.k_min_knn(4.0, cert.cluster_level, 1.0).unwrap();
    let report =
        check_separation_connectedness(&density, n, &p, level, &Rule::ALL, 100, 1005).unwrap();
    let fr: Vec<(Rule, f64)> = Rule::ALL
        .iter()
        .map(|&r| (r, joint_fraction(&report, r, &["separated", "connected"])))
        .collect();
    let pass = report.evaluated() == 100
        && k as f64 >= k_knn
        && n as f64 >= 4.0 * bound
        && fr.iter().all(|&(_, f)| f >= 0.9);
    outcome(
        pass,
        format!(
            "k={k} (k_min_knn {k_knn:.1}), n={n} (4 x {bound:.0}); separated and connected: {}",
            fr.iter()
                .map(|(r, f)| format!("{r} {f:.2}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    )
}

fn criterion_6() -> Outcome {
    let report = knn_disconnection_experiment(1.0, 64.0, 1, 2.0, 10_000, 200, 1006).unwrap();
    let f = report.fraction();
    outcome(
        f >= 0.4 && report.evaluated() == 200,
        format!(
            "A cut off from B and C in {}/200 trials ({f:.2})",
            report.successes
        ),
    )
}

fn fragmented_tree() -> (ClusterTree, ScaleParams) {
    let mut events: Vec<MergeEvent> = [0, 1, 4, 5, 6, 7]
        .iter()
        .map(|&i| MergeEvent::birth(0.05, i))
        .collect();
    events.extend([
        MergeEvent::merge(0.05, 0, 1),
        MergeEvent::merge(0.05, 4, 5),
        MergeEvent::merge(0.05, 4, 6),
        MergeEvent::merge(0.05, 4, 7),
        MergeEvent::birth(0.06, 2),
        MergeEvent::birth(0.06, 3),
        MergeEvent::merge(0.06, 2, 3),
        MergeEvent::merge(0.075, 0, 2),
        MergeEvent::merge(0.2, 0, 4),
    ]);
    let meta = TreeMeta {
        d: 1,
        k: 2,
        alpha: 1.0,
        rule: Rule::Rsl,
    };
    let tree = ClusterTree::new(8, meta, events).unwrap();
    (tree, ScaleParams::new(8, 2, 1, 1.0, 0.1, 0.0, 0.5).unwrap())
}

fn fixture_repaired() -> bool {
    let (tree, params) = fragmented_tree();
    let split = tree.components_at(0.06).unwrap() == vec![vec![0, 1], vec![2, 3], vec![4, 5, 6, 7]];
    let a = prune(&tree, &params, PruneOptions::default()).unwrap();
    let b = prune(&tree, &params, PruneOptions::default()).unwrap();
    // lookup(r) = r / (1 - 4r): reaches 0.075 at r = 0.06 and 0.2 at r = 1/9.
    split
        && a.components_at(0.06).unwrap() == vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]]
        && a.components_at(0.11).unwrap().len() == 2
        && a.components_at(0.112).unwrap().len() == 1
        && tree_to_json(a.tree()).unwrap() == tree_to_json(b.tree()).unwrap()
}

fn criterion_7() -> Outcome {
    let density = two_bump(1.0, 16.0).unwrap();
    let (level, eps, n) = (16.0, 0.45, 10_000);
    let p = ScaleParams::new(n, 400, 1, std::f64::consts::SQRT_2, 0.1, 1.48, 0.5).unwrap();
    let rules = [Rule::Rsl, Rule::Mknn];
    let report = pruning_experiment(
        &density,
        n,
        &p,
        level,
        eps,
        PruneOptions::default(),
        &rules,
        100,
        1007,
    )
    .unwrap();
    let lambda = report.settings["lambda"];
    let sup_s = report.settings["separator_sup"];
    let margin_ok = sup_s < (1.0 - 2.0 * eps) * lambda - p.eps_tilde;
    let k_ok = p.k as f64 >= 4.0 * p.c_delta.powi(2) * (n as f64).ln() / (eps * eps);

    let evaluated: Vec<_> = report.diagnostics.iter().filter(|t| !t.skipped).collect();
    let mut parts = Vec::new();
    let mut pass = margin_ok && k_ok && report.evaluated() == 100;
    for rule in rules {
        let sep = joint_fraction(&report, rule, &["separated"]);
        let conn = joint_fraction(&report, rule, &["connected"]);
        let fragmented: Vec<_> = evaluated
            .iter()
            .filter(|t| t.values[&format!("{rule}.unpruned_false_clusters")] > 0.0)
            .collect();
        let clean = fragmented
            .iter()
            .filter(|t| t.outcomes[&format!("{rule}.clean")])
            .count();
        let clean_fr = clean as f64 / fragmented.len().max(1) as f64;
        pass &= sep >= 0.9 && conn >= 0.9 && !fragmented.is_empty() && clean_fr >= 0.9;
        parts.push(format!(
            "{rule}: separated {sep:.2}, connected {conn:.2}, clean {clean}/{} fragmented",
            fragmented.len()
        ));
    }
    let fixture = fixture_repaired();
    pass &= fixture;
    outcome(
        pass,
        format!(
            "{}; sup_S {sup_s} < {:.3}; fixture repaired: {fixture}",
            parts.join("; "),
            (1.0 - 2.0 * eps) * lambda - p.eps_tilde
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut g = Gen::new(1008);
    let mut violations = Vec::new();
    let mut probes = 0usize;
    for pair in 0..500 {
        let n = g.int(2, 50);
        let d = g.int(1, 3);
        let k = g.int(1, 8).min(n);
        let rule = EdgeRule::new(g.pick(&Rule::ALL), g.pick(&ALPHAS)).unwrap();
        let ps = g.points(n, d);
        let tree = build_tree(&ps, k, &rule).unwrap();
        let radii = tree.birth_radii();
        let mut sorted: Vec<f64> = radii.iter().flatten().copied().collect();
        sorted.sort_by(f64::total_cmp);
        let typical = sorted[sorted.len() / 2].max(1e-3);
        let scale = k as f64 / (n as f64 * unit_ball_volume(d).unwrap() * typical.powi(d as i32));
        let c_delta = if g.f() < 0.3 { 0.0 } else { 1.5 * g.f() };
        let e1 = 2.0 * scale * g.f();
        let e2 = e1 + 2.0 * scale * g.f();
        let options = PruneOptions {
            prune_low_levels: g.f() < 0.25,
        };
        let p1 = ScaleParams::new(n, k, d, rule.alpha, 0.1, c_delta, e1).unwrap();
        let p2 = p1.with_eps_tilde(e2).unwrap();
        let t1 = prune(&tree, &p1, options).unwrap();
        let t2 = prune(&tree, &p2, options).unwrap();

        let mut levels: Vec<f64> = tree.event_radii();
        levels.extend(t1.tree().event_radii());
        levels.extend(t2.tree().event_radii());
        levels.extend([0.0, f64::INFINITY]);
        let mut levels: Vec<f64> = levels
            .iter()
            .flat_map(|&r| [r, r.next_down().max(0.0), r.next_up()])
            .collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        let mut prev: Option<Subpartition> = None;
        for &r in &levels {
            probes += 1;
            let b = tree.components_at(r).unwrap();
            let c1 = t1.components_at(r).unwrap();
            let c2 = t2.components_at(r).unwrap();
            let mut fail = |what: &str| violations.push(format!("{what}: pair {pair} r={r}"));
            if vertices(&b) != vertices(&c1) || !refines(&b, &c1, n) {
                fail("not a coarsening");
            }
            if vertices(&c1) != vertices(&c2) || !refines(&c1, &c2, n) {
                fail("not monotone in eps_tilde");
            }
            if c1 != t1.direct_components_at(r).unwrap() {
                fail("filtration disagrees with the lookup rule");
            }
            if let Some(p) = &prev {
                if !refines(p, &c1, n) || !nested_or_disjoint(p, &c1) {
                    fail("hierarchy broken");
                }
            }
            prev = Some(c1);
        }
    }
    outcome(
        violations.is_empty(),
        format!(
            "500 pairs, {probes} levels, {} violations {:?}",
            violations.len(),
            &violations[..violations.len().min(3)]
        ),
    )
}

fn criterion_9() -> Outcome {
    let density = two_bump(1.0, 4.0).unwrap();
    let p = ScaleParams::with_c_o(3200, 1, 1, std::f64::consts::SQRT_2, 0.1, 0.25, 0.0).unwrap();
    let report = hartigan_consistency_curve(
        &density,
        &p,
        4.0,
        Rule::Rsl,
        KSchedule::LogN { per_log_n: 5.0 },
        &[200, 800, 3200],
        100,
        1009,
    )
    .unwrap();
    let last = report.curve.last().unwrap();
    outcome(
        last.fraction() >= 0.95 && last.trials - last.skipped == 100,
        report
            .curve
            .iter()
            .map(|c| format!("n={} k={}: {:.2}", c.n, c.k, c.fraction()))
            .collect::<Vec<_>>()
            .join(", "),
    )
}

fn cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_clustertree"))
        .args(args)
        .env_remove("CLUSTERTREE_CONFIG")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn criterion_10() -> Outcome {
    // Library: sample, build, serialize, cut, prune, twice over.
    let run = |seed: u64| {
        let ps = two_bump(1.0, 4.0)
            .unwrap()
            .sample(2000, trial_seed(seed, 3))
            .unwrap();
        let rule = EdgeRule::mutual_knn(std::f64::consts::SQRT_2).unwrap();
        let tree = build_tree(&ps, 30, &rule).unwrap();
        let p = ScaleParams::new(2000, 30, 1, rule.alpha, 0.1, 1.0, 0.2).unwrap();
        let pruned = prune(&tree, &p, PruneOptions::default()).unwrap();
        let r = p.r_of_lambda(4.0).unwrap();
        (
            tree_to_json(&tree).unwrap(),
            labels_to_csv(&tree.labels_at(r).unwrap()),
            tree_to_json(pruned.tree()).unwrap(),
        )
    };
    let lib_same = run(10) == run(10) && run(10) != run(11);

    // Binary: the same pipeline through files.
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    std::fs::write(
        path("d.json"),
        r#"{"kind": "two_bump", "lambda": 1, "Lambda": 4}"#,
    )
    .unwrap();
    let pipeline = |tag: &str| {
        let pts = path(&format!("p{tag}.csv"));
        let tree = path(&format!("t{tag}.json"));
        let d = path("d.json");
        cli(&["synth", &d, "--n", "1500", "--seed", "10", "--out", &pts]);
        cli(&[
            "tree", &pts, "--k", "25", "--alpha", "1.5", "--rule", "knn", "--seed", "10", "--out",
            &tree,
        ]);
        let labels = cli(&["cut", &tree, "--cut-lambda", "4", "--c0", "0.25"]);
        let pruned = cli(&["prune", &tree, "--eps-tilde", "0.3", "--c0", "0.25"]);
        let bytes = |p: &str| std::fs::read(Path::new(p)).unwrap();
        (bytes(&pts), bytes(&tree), labels, pruned)
    };
    let (a, b) = (pipeline("a"), pipeline("b"));
    let cli_same = a == b;
    outcome(
        lib_same && cli_same,
        format!("library runs identical: {lib_same}; CLI tree JSON, labels and pruned JSON identical: {cli_same}"),
    )
}

fn main() {
    // Criteria with a runtime budget carry it here.
    let criteria: [(u32, fn() -> Outcome, Option<u64>); 10] = [
        (1, criterion_1, Some(60)),
        (2, criterion_2, Some(30)),
        (3, criterion_3, None),
        (4, criterion_4, None),
        (5, criterion_5, Some(300)),
        (6, criterion_6, Some(120)),
        (7, criterion_7, None),
        (8, criterion_8, None),
        (9, criterion_9, Some(600)),
        (10, criterion_10, None),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .and_then(|v| v.parse().ok());
    let mut failed = Vec::new();
    for (id, check, budget) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let out = check();
        let took = start.elapsed();
        let in_time = budget.is_none_or(|b| took <= Duration::from_secs(b));
        let pass = out.pass && in_time;
        let budget = budget.map_or(String::new(), |b| format!(" / {b} s"));
        println!(
            "{} criterion {id}: {} [{:.1} s{budget}]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64()
        );
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
