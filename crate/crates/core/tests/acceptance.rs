//! Acceptance criteria, one test each. Every test writes a single verdict
//! line to stderr (bypassing the harness capture) and fails unless the
//! verdict is PASS.
//!
//! Criteria on the published dataset read it from `WEDGEKIT_DATA`; without
//! it they report BLOCKED and fail.

mod common;

use std::io::Write;
use std::path::Path;
use std::sync::OnceLock;
use std::time::Instant;

use rand::Rng;
use wedgekit::assignment::{solve, CostMatrix};
use wedgekit::dataset::{
    compute_stats, synthesize, synthesize_shaped, ClassShape, Dataset, Perturbation, SynthConfig, SIGN_NAMES,
};
use wedgekit::eval::{
    bench, cross_validate, cross_validate_net, default_references, linear_fit_r2, rank_and_roc, BenchConfig,
    BenchSubject,
};
use wedgekit::ged::{self, distance_matrix, distance_matrix_between, edit_path, CostModel, ExactOptions, Method};
use wedgekit::graph::{expected_edge_count, expected_vertex_count};
use wedgekit::nn::bspline::bspline_basis;
use wedgekit::nn::net::softmax;
use wedgekit::nn::{train, NetConfig, TrainConfig};
use wedgekit::rng::{stream_rng, Stream};

use common::{brute_force_assignment, close, gradient_check, partial_injections, rigid};

enum Check {
    Pass(String),
    Fail(String),
    Blocked(String),
}

fn check(ok: bool, detail: String) -> Check {
    if ok {
        Check::Pass(detail)
    } else {
        Check::Fail(detail)
    }
}

fn verdict(n: u32, title: &str, checks: Vec<Check>) {
    let word = if checks.iter().any(|c| matches!(c, Check::Fail(_))) {
        "FAIL"
    } else if checks.iter().any(|c| matches!(c, Check::Blocked(_))) {
        "BLOCKED"
    } else {
        "PASS"
    };
    let details: Vec<String> = checks
        .iter()
        .map(|c| match c {
            Check::Pass(s) => format!("ok: {s}"),
            Check::Fail(s) => format!("FAILED: {s}"),
            Check::Blocked(s) => format!("blocked: {s}"),
        })
        .collect();
    let line = format!("criterion {n:>2} {title}: {word} | {}", details.join("; "));
    let _ = writeln!(std::io::stderr().lock(), "{line}");
    assert_eq!(word, "PASS", "{line}");
}

fn published() -> Result<&'static Dataset, String> {
    static DATA: OnceLock<Result<Dataset, String>> = OnceLock::new();
    DATA.get_or_init(|| match std::env::var_os("WEDGEKIT_DATA") {
        None => Err("WEDGEKIT_DATA is not set and the published dataset is not bundled".into()),
        Some(p) => Dataset::load(Path::new(&p)).map_err(|e| format!("cannot load {}: {e}", p.to_string_lossy())),
    })
    .as_ref()
    .map_err(Clone::clone)
}

/// Published per-class figures: name, #G, |V|, |E|, h_max, w_max.
const TABLE: [(&str, usize, usize, usize, f64, f64); 30] = [
    ("ba", 9, 36, 180, 7.5, 12.7),
    ("bi", 9, 24, 102, 7.4, 11.7),
    ("bu", 9, 16, 60, 10.0, 13.4),
    ("da", 9, 8, 26, 5.3, 7.3),
    ("di", 9, 16, 60, 7.5, 14.7),
    ("du", 9, 8, 26, 7.7, 8.7),
    ("ha", 9, 20, 80, 7.3, 13.9),
    ("hi", 9, 16, 60, 7.9, 10.0),
    ("hu", 9, 16, 60, 7.5, 9.4),
    ("ka", 9, 20, 80, 9.1, 11.1),
    ("ki", 9, 16, 60, 9.1, 5.8),
    ("ku", 9, 28, 126, 7.4, 13.7),
    ("la", 9, 24, 102, 7.7, 11.4),
    ("li", 9, 28, 126, 6.7, 10.6),
    ("lu", 9, 16, 60, 7.5, 15.0),
    ("na", 9, 16, 60, 8.5, 14.4),
    ("ni", 9, 24, 102, 9.9, 7.6),
    ("nu", 9, 16, 60, 10.2, 8.6),
    ("ra", 9, 20, 80, 7.7, 9.6),
    ("ri", 9, 20, 80, 8.9, 11.5),
    ("ru", 9, 20, 80, 8.2, 10.2),
    ("sa", 9, 20, 80, 10.0, 10.4),
    ("si", 9, 24, 102, 9.2, 11.2),
    ("su", 9, 20, 80, 8.2, 11.7),
    ("ta", 9, 16, 60, 8.3, 8.4),
    ("ti", 9, 28, 126, 12.6, 15.2),
    ("tu", 9, 28, 126, 10.5, 12.4),
    ("za", 8, 24, 102, 9.1, 9.2),
    ("zi", 8, 28, 126, 8.9, 13.2),
    ("zu", 8, 36, 180, 10.3, 21.0),
];

/// Synthetic stand-in with the published class sizes and wedge counts.
fn table_shaped(seed: u64) -> Dataset {
    let shapes: Vec<ClassShape> =
        TABLE.iter().map(|&(name, count, v, ..)| ClassShape { name: name.into(), wedges: v / 4, count }).collect();
    synthesize_shaped(&shapes, &Perturbation::default(), seed)
}

fn small_sets() -> Vec<Dataset> {
    (0..3)
        .map(|seed| {
            synthesize(&SynthConfig { classes: 4, per_class: 4, wedge_range: (1, 4), seed, ..SynthConfig::default() })
        })
        .collect()
}

#[test]
fn criterion_01_dataset_fidelity() {
    let title = "dataset fidelity";
    let path = match std::env::var_os("WEDGEKIT_DATA") {
        Some(p) => p,
        None => return verdict(1, title, vec![Check::Blocked(published().unwrap_err())]),
    };
    let t = Instant::now();
    let d = match Dataset::load(Path::new(&path)) {
        Ok(d) => d,
        Err(e) => return verdict(1, title, vec![Check::Fail(format!("load failed: {e}"))]),
    };
    let secs = t.elapsed().as_secs_f64();
    let s = compute_stats(&d).unwrap();
    let mut checks = vec![
        check(
            (s.total_graphs, d.class_names.len(), s.total_vertices, s.total_edges) == (267, 30, 5680, 23922),
            format!(
                "{} graphs, {} classes, {} vertices, {} edges (want 267, 30, 5680, 23922)",
                s.total_graphs,
                d.class_names.len(),
                s.total_vertices,
                s.total_edges
            ),
        ),
        check(secs < 5.0, format!("loaded in {secs:.2} s (< 5 s)")),
    ];
    let mut bad_cells = Vec::new();
    for &(name, g, v, e, h, w) in &TABLE {
        match s.class(name) {
            None => bad_cells.push(format!("{name} missing")),
            Some(c) => {
                if (c.graphs, c.vertices, c.edges) != (g, v, e) {
                    bad_cells.push(format!("{name} #G/|V|/|E| {}/{}/{} vs {g}/{v}/{e}", c.graphs, c.vertices, c.edges));
                }
                if (c.h_max - h).abs() > 0.1 + 1e-9 || (c.w_max - w).abs() > 0.1 + 1e-9 {
                    bad_cells.push(format!("{name} h/w {:.2}/{:.2} vs {h}/{w}", c.h_max, c.w_max));
                }
            }
        }
    }
    checks.push(check(
        bad_cells.is_empty(),
        if bad_cells.is_empty() { "all 30 class rows match".into() } else { bad_cells.join(", ") },
    ));
    verdict(1, title, checks);
}

#[test]
fn criterion_02_structural_law() {
    let title = "structural law";
    let d = match published() {
        Ok(d) => d,
        Err(e) => return verdict(2, title, vec![Check::Blocked(e)]),
    };
    let violations: Vec<&str> = d
        .graphs
        .iter()
        .filter(|g| {
            let w = g.wedge_count();
            !g.is_valid()
                || g.vertices().len() != expected_vertex_count(w)
                || g.vertices().len() != 4 * w
                || g.edges().len() != expected_edge_count(w)
                || g.edges().len() != 12 * w + w * w.saturating_sub(1)
        })
        .map(|g| g.id.as_str())
        .collect();
    verdict(
        2,
        title,
        vec![check(
            violations.is_empty() && d.len() == 267,
            format!("{} graphs, {} violations {:?}", d.len(), violations.len(), violations),
        )],
    );
}

#[test]
fn criterion_03_assignment_oracle() {
    let mut rng = stream_rng(3, Stream::Synth, 0);
    let mut mismatches = Vec::new();
    let (mut total, mut with_inf, mut infeasible) = (0, 0, 0);
    for k in 2..=7 {
        for i in 0..1000 {
            let rows: Vec<Vec<f64>> = (0..k)
                .map(|_| {
                    (0..k)
                        .map(|_| if rng.gen_bool(0.12) { f64::INFINITY } else { f64::from(rng.gen_range(0u32..50)) })
                        .collect()
                })
                .collect();
            total += 1;
            with_inf += rows.iter().flatten().any(|x| x.is_infinite()) as usize;
            let got = solve(&CostMatrix::from_rows(&rows).unwrap());
            let want = brute_force_assignment(&rows);
            infeasible += want.is_none() as usize;
            let agree = match (&got, &want) {
                (Ok(a), Some((c, p))) => a.total_cost == *c && &a.permutation == p,
                (Err(_), None) => true,
                _ => false,
            };
            if !agree {
                mismatches.push(format!("k={k} #{i}"));
            }
        }
    }
    verdict(
        3,
        "assignment oracle",
        vec![check(
            mismatches.is_empty(),
            format!(
                "{total} matrices ({with_inf} with infinite entries, {infeasible} infeasible), {} mismatches {:?}",
                mismatches.len(),
                mismatches.iter().take(5).collect::<Vec<_>>()
            ),
        )],
    );
}

#[test]
fn criterion_04_ged_ordering() {
    let cm = CostModel::default();
    let opts = ExactOptions::default();
    let mut checks = Vec::new();

    match published() {
        Err(e) => checks.push(Check::Blocked(format!("full matrices: {e}"))),
        Ok(d) => {
            let a1 = distance_matrix(&d.graphs, Method::Apx1, &cm, &opts).unwrap();
            let a2 = distance_matrix(&d.graphs, Method::Apx2, &cm, &opts).unwrap();
            let n = d.len();
            let above =
                (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).filter(|&(r, c)| a1.get(r, c) > a2.get(r, c)).count();
            let self_nonzero = d
                .graphs
                .iter()
                .filter(|g| {
                    ged::distance(g, g, Method::Apx1, &cm).unwrap() != 0.0
                        || ged::distance(g, g, Method::Apx2, &cm).unwrap() != 0.0
                })
                .count();
            checks.push(check(
                above == 0 && self_nonzero == 0,
                format!("{n}x{n}: {above} cells with APX1 > APX2, {self_nonzero} non-zero self distances"),
            ));
        }
    }

    let (mut pairs, mut exact_above, mut oracle_diff, mut rigid_bad) = (0, 0, 0, 0);
    for (s, d) in small_sets().iter().enumerate() {
        let moved: Vec<_> = d.graphs.iter().map(|g| rigid(g, 0.3 + s as f64, [3.5, -1.25])).collect();
        for (i, g) in d.graphs.iter().enumerate() {
            for (j, h) in d.graphs.iter().enumerate() {
                pairs += 1;
                let dist: Vec<f64> = Method::ALL.iter().map(|&m| ged::distance(g, h, m, &cm).unwrap()).collect();
                for (k, &m) in Method::ALL.iter().enumerate() {
                    rigid_bad += !close(dist[k], ged::distance(&moved[i], &moved[j], m, &cm).unwrap(), 1e-9) as usize;
                }
                let (apx2, exact) = (dist[1], dist[2]);
                exact_above += (exact > apx2) as usize;
                let oracle = partial_injections(g.wedge_count(), h.wedge_count())
                    .into_iter()
                    .map(|map| edit_path(g, h, map, &cm).cost())
                    .fold(f64::INFINITY, f64::min);
                oracle_diff += (exact != oracle) as usize;
            }
        }
    }
    checks.push(check(
        exact_above == 0 && oracle_diff == 0,
        format!("synthetic <= 4 wedges, {pairs} pairs: {exact_above} with EXACT > APX2, {oracle_diff} differing from the exhaustive oracle"),
    ));
    checks.push(check(
        rigid_bad == 0,
        format!("rigid motions: {rigid_bad} of {} distances moved beyond 1e-9", 3 * pairs),
    ));
    verdict(4, "GED ordering properties", checks);
}

#[test]
fn criterion_05_ranking() {
    let title = "ranking";
    let d = match published() {
        Ok(d) => d,
        Err(e) => return verdict(5, title, vec![Check::Blocked(e)]),
    };
    let cm = CostModel::default();
    let opts = ExactOptions::default();
    let refs = default_references(d);
    let ref_graphs: Vec<_> = refs.iter().map(|r| d.graphs[d.index_of(r).unwrap()].clone()).collect();
    let curves = |m: Method| {
        let dm = distance_matrix_between(&ref_graphs, &d.graphs, m, &cm, &opts).unwrap();
        rank_and_roc(d, &refs, &dm).unwrap()
    };
    let t = Instant::now();
    let apx2 = curves(Method::Apx2);
    let secs = t.elapsed().as_secs_f64();
    let apx1 = curves(Method::Apx1);
    let perfect = apx2.iter().filter(|c| c.auc == 1.0).count();
    let auc = |cs: &[wedgekit::eval::RocCurve], class: &str| cs.iter().find(|c| c.class == class).map(|c| c.auc);
    let mut checks =
        vec![check(perfect >= 16, format!("{perfect} of {} signs with AUC 1 under APX2 (>= 16)", apx2.len()))];
    for sign in ["li", "tu"] {
        let (a2, a1) = (auc(&apx2, sign), auc(&apx1, sign));
        checks.push(check(
            matches!((a2, a1), (Some(x), Some(y)) if x > y),
            format!("{sign}: APX2 {a2:?} vs APX1 {a1:?}"),
        ));
    }
    checks.push(check(secs < 10.0, format!("APX2 ranking in {secs:.2} s (< 10 s)")));
    verdict(5, title, checks);
}

#[test]
fn criterion_06_knn_accuracy() {
    let title = "k-NN accuracy";
    let d = match published() {
        Ok(d) => d,
        Err(e) => return verdict(6, title, vec![Check::Blocked(e)]),
    };
    let cm = CostModel::default();
    let opts = ExactOptions::default();
    let a2 = cross_validate(d, Method::Apx2, &cm, &opts, 3, 10, 0).unwrap();
    let a1 = cross_validate(d, Method::Apx1, &cm, &opts, 3, 10, 0).unwrap();
    verdict(
        6,
        title,
        vec![
            check((a2.mean - 92.87).abs() <= 4.0, format!("APX2 mean {:.2} (92.87 +/- 4)", a2.mean)),
            check((a1.mean - 89.17).abs() <= 4.0, format!("APX1 mean {:.2} (89.17 +/- 4)", a1.mean)),
            check(a2.mean > a1.mean, format!("APX2 {:.2} > APX1 {:.2}", a2.mean, a1.mean)),
        ],
    );
}

#[test]
fn criterion_07_exact_accuracy() {
    let title = "exact-method accuracy";
    let d = match published() {
        Ok(d) => d,
        Err(e) => return verdict(7, title, vec![Check::Blocked(e)]),
    };
    let cm = CostModel::default();
    let opts = ExactOptions::default();
    let keep: Vec<usize> = (0..d.len()).filter(|&i| 2 * d.graphs[i].wedge_count() <= opts.max_wedges).collect();
    let sub = d.subset(&keep);
    let exact = cross_validate(&sub, Method::Exact, &cm, &opts, 3, 3, 0).unwrap();
    let apx2 = cross_validate(&sub, Method::Apx2, &cm, &opts, 3, 3, 0).unwrap();
    verdict(
        7,
        title,
        vec![check(
            exact.mean >= apx2.mean - 1.5,
            format!(
                "3 folds over {} graphs: EXACT {:.2} vs APX2 {:.2} (>= APX2 - 1.5)",
                sub.len(),
                exact.mean,
                apx2.mean
            ),
        )],
    );
}

#[test]
fn criterion_08_network_correctness() {
    let mut checks = Vec::new();

    let (plain, n1) = gradient_check(false);
    let (looped, n2) = gradient_check(true);
    checks.push(check(
        plain < 1e-4 && looped < 1e-4 && n1 > 50 && n2 > 50,
        format!("gradient check max relative error {:.1e} / {:.1e} with self-loops (< 1e-4)", plain, looped),
    ));

    let mut worst: f64 = 0.0;
    let steps = 400;
    for i in 0..=steps {
        for j in 0..=steps {
            let b = bspline_basis([i as f64 / steps as f64, j as f64 / steps as f64]);
            worst = worst.max((b.iter().map(|(_, w)| w).sum::<f64>() - 1.0).abs());
        }
    }
    checks.push(check(worst <= 1e-12, format!("B-spline partition of unity off by {worst:.1e} (<= 1e-12)")));

    let mut rng = stream_rng(8, Stream::Synth, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        let len = rng.gen_range(1..40);
        let scale = [1.0, 30.0, 700.0][rng.gen_range(0..3)];
        let logits: Vec<f64> = (0..len).map(|_| rng.gen_range(-scale..scale)).collect();
        let p = softmax(&logits);
        worst = worst.max((p.iter().sum::<f64>() - 1.0).abs());
        if p.iter().any(|x| !(0.0..=1.0).contains(x)) {
            worst = f64::INFINITY;
        }
    }
    checks.push(check(worst <= 1e-9, format!("softmax sums off by {worst:.1e} (<= 1e-9)")));

    let d = synthesize(&SynthConfig { classes: 3, per_class: 4, ..SynthConfig::default() });
    let cfg = TrainConfig {
        net: NetConfig { widths: vec![8, 8, 8, 8], classes: 3, ..NetConfig::default() },
        epochs: 4,
        batch: 5,
        augment: true,
        seed: 42,
        ..TrainConfig::default()
    };
    let runs: Vec<_> = [1, 1, 4]
        .iter()
        .map(|&threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| train(&d.graphs, &cfg).unwrap())
        })
        .collect();
    let same = runs.windows(2).all(|w| w[0].1 == w[1].1 && w[0].0.params == w[1].0.params);
    checks.push(check(same, "fixed-seed traces and weights identical across runs and pool sizes".into()));

    verdict(8, "network correctness", checks);
}

#[test]
fn criterion_09_network_accuracy() {
    let title = "network accuracy";
    let d = match published() {
        Ok(d) => d,
        Err(e) => return verdict(9, title, vec![Check::Blocked(e)]),
    };
    let base = TrainConfig {
        net: NetConfig { classes: d.class_names.len(), ..NetConfig::default() },
        ..TrainConfig::default()
    };
    let augmented = TrainConfig { augment: true, ..base.clone() };

    let fold0: Vec<usize> = {
        let assign = wedgekit::eval::fold_assignment(d.len(), 10, 0).unwrap();
        (0..d.len()).filter(|&i| assign[i] != 0).collect()
    };
    let t = Instant::now();
    train(&d.subset(&fold0).graphs, &augmented).unwrap();
    let minutes = t.elapsed().as_secs_f64() / 60.0;

    let with = cross_validate_net(d, &augmented, 10, 10, 0).unwrap();
    let without = cross_validate_net(d, &base, 10, 10, 0).unwrap();
    verdict(
        9,
        title,
        vec![
            check(
                with.mean >= without.mean + 3.0,
                format!("augmented {:.2} vs plain {:.2} (gap >= 3)", with.mean, without.mean),
            ),
            check((with.mean - 93.54).abs() <= 5.0, format!("augmented mean {:.2} (93.54 +/- 5)", with.mean)),
            check(minutes <= 15.0, format!("one fold trained in {minutes:.1} min (<= 15)")),
        ],
    );
}

#[test]
fn criterion_10_runtime_shape() {
    let (d, source) = match published() {
        Ok(d) => (d.clone(), "published data"),
        Err(_) => (table_shaped(10), "synthetic data with the published class sizes and wedge counts"),
    };
    let cfg = BenchConfig::default();
    let records = bench(&d, &[BenchSubject::Ged(Method::Apx1), BenchSubject::Ged(Method::Apx2)], &cfg).unwrap();
    let mut checks = Vec::new();
    for m in [Method::Apx1, Method::Apx2] {
        let rs: Vec<_> = records.iter().filter(|r| r.method == m.name()).collect();
        let xs: Vec<f64> = rs.iter().map(|r| r.train_size as f64).collect();
        let ys: Vec<f64> = rs.iter().map(|r| r.mean_ms).collect();
        let r2 = linear_fit_r2(&xs, &ys);
        let per_pair = rs.iter().map(|r| r.per_pair_ms()).fold(0.0, f64::max);
        checks.push(check(
            rs.len() == 4 && r2 >= 0.95 && per_pair < 1.0,
            format!("{}: R^2 {r2:.4} (>= 0.95), worst per-pair {per_pair:.4} ms (< 1 ms)", m.name()),
        ));
    }
    checks.push(Check::Pass(format!("measured on {source}")));
    verdict(10, "runtime shape", checks);
}

#[test]
fn table_shaped_proxy_matches_published_counts() {
    let d = table_shaped(10);
    let s = compute_stats(&d).unwrap();
    assert_eq!(d.class_names, SIGN_NAMES.map(String::from).to_vec());
    assert_eq!(s.total_graphs, 267);
    for &(name, g, v, e, ..) in &TABLE {
        let c = s.class(name).unwrap();
        assert_eq!((c.graphs, c.vertices, c.edges), (g, v, e), "{name}");
    }
}
