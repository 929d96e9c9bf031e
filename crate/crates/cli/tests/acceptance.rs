//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fails.

use std::collections::HashSet;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use animst_core::centrality::{
    betweenness_centrality, brandes_betweenness, closeness_centrality, degree_centrality,
    eigenvector_centrality, EigenConfig,
};
use animst_core::mst::{kruskal, load_tree, SpanningTree, WeightedEdge};
use animst_core::query::TreeIndex;
use animst_core::report::read_report;
use animst_core::similarity::{
    crew_similarity, score_histogram, score_similarity, similarity_table, topic_similarity,
};
use animst_core::{generate_synthetic, AnimeRecord, Catalog};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FULL_SCALE: usize = 4029;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn animst(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_animst"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "animst {args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn random_tree(rng: &mut ChaCha8Rng, k: usize) -> SpanningTree {
    let mut labels: Vec<u32> = (0..k as u32).collect();
    labels.shuffle(rng);
    let edges = (1..k)
        .map(|v| WeightedEdge::new(labels[rng.gen_range(0..v)], labels[v], 1.0))
        .collect();
    SpanningTree::from_edges(k, edges).unwrap()
}

fn tree_of(k: usize, edges: &[(u32, u32)]) -> SpanningTree {
    SpanningTree::from_edges(
        k,
        edges
            .iter()
            .map(|&(u, v)| WeightedEdge::new(u, v, 1.0))
            .collect(),
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// 1. Kruskal against exhaustive spanning-tree enumeration.

fn connects_all(k: usize, edges: &[&WeightedEdge]) -> bool {
    let mut label: Vec<usize> = (0..k).collect();
    for e in edges {
        let (from, to) = (label[e.v as usize], label[e.u as usize]);
        if from == to {
            return false;
        }
        label
            .iter_mut()
            .filter(|l| **l == from)
            .for_each(|l| *l = to);
    }
    true
}

fn exhaustive_minimum(k: usize, edges: &[WeightedEdge]) -> (f64, usize) {
    let m = edges.len();
    let (mut best, mut count) = (f64::INFINITY, 0usize);
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != k - 1 {
            continue;
        }
        let chosen: Vec<&WeightedEdge> = (0..m)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| &edges[b])
            .collect();
        if connects_all(k, &chosen) {
            count += 1;
            best = best.min(chosen.iter().map(|e| e.w).sum());
        }
    }
    (best, count)
}

fn criterion_mst_oracle() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let graphs = 200;
    for g in 0..graphs {
        let k = 4 + g % 4;
        let mut edges = Vec::new();
        for u in 0..k as u32 {
            for v in u + 1..k as u32 {
                // Dyadic weights keep every sum exact.
                edges.push(WeightedEdge::new(
                    u,
                    v,
                    rng.gen_range(0..1 << 16) as f64 / 256.0,
                ));
            }
        }
        let (best, count) = exhaustive_minimum(k, &edges);
        ensure!(
            count == k.pow(k as u32 - 2),
            "K{k}: {count} trees enumerated"
        );
        let tree = kruskal(k, edges).map_err(|e| e.to_string())?;
        ensure!(
            tree.total_weight() == best,
            "graph {g} (K{k}): kruskal {} vs exhaustive {best}",
            tree.total_weight()
        );
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!("{graphs} graphs K4..K7 exact, {elapsed:.2?}"))
}

// ---------------------------------------------------------------------------
// 2. Subtree-count betweenness against Brandes.

fn criterion_betweenness() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let trees = 120;
    for t in 0..trees {
        let k = rng.gen_range(2..=64);
        let tree = random_tree(&mut rng, k);
        let fast = betweenness_centrality(&tree);
        let brandes = brandes_betweenness(&tree.unweighted_adjacency());
        let denom = ((k * k + 2) as i64 - 3 * k as i64) as f64;
        for (v, (f, b)) in fast.iter().zip(&brandes).enumerate() {
            ensure!(
                b.fract() == 0.0 && f.raw == *b as u64,
                "tree {t} vertex {v}: {} vs {b}",
                f.raw
            );
            let expected = if denom > 0.0 { 2.0 * b / denom } else { 0.0 };
            ensure!(
                (f.normalized - expected).abs() <= 1e-12,
                "tree {t} vertex {v}: normalized {} vs {expected}",
                f.normalized
            );
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!(
        "{trees} random trees k<=64, raw exact, {elapsed:.2?}"
    ))
}

// ---------------------------------------------------------------------------
// 3. Eigenvector residuals.

fn residual(tree: &SpanningTree, e: &[f64]) -> (f64, f64) {
    let mut re = vec![0.0; e.len()];
    for edge in tree.edges() {
        re[edge.u as usize] += e[edge.v as usize];
        re[edge.v as usize] += e[edge.u as usize];
    }
    let lambda: f64 = e.iter().zip(&re).map(|(a, b)| a * b).sum();
    let r = re
        .iter()
        .zip(e)
        .map(|(a, b)| (a - lambda * b).powi(2))
        .sum::<f64>()
        .sqrt();
    (lambda, r)
}

/// Eigenvector column of a build's distribution table, in vertex order.
fn report_eigenvector(dir: &Path) -> Result<Vec<f64>, String> {
    let file = fs::File::open(dir.join("distributions.tsv")).map_err(|e| e.to_string())?;
    let rows = read_report(file).map_err(|e| e.to_string())?;
    Ok(rows.iter().map(|r| r.centrality.eigenvector).collect())
}

fn criterion_eigen(builds: &[PathBuf]) -> Check {
    let p3 = tree_of(3, &[(0, 1), (1, 2)]);
    let ev = eigenvector_centrality(&p3, &EigenConfig::default()).map_err(|e| e.to_string())?;
    let mut dense = DMatrix::<f64>::zeros(3, 3);
    for e in p3.edges() {
        dense[(e.u as usize, e.v as usize)] = 1.0;
        dense[(e.v as usize, e.u as usize)] = 1.0;
    }
    let eig = SymmetricEigen::new(dense);
    let top = eig.eigenvalues.imax();
    let sign = eig.eigenvectors.column(top).sum().signum();
    for v in 0..3 {
        let want = [0.5, std::f64::consts::FRAC_1_SQRT_2, 0.5][v];
        ensure!(
            (ev.vector[v] - want).abs() <= 1e-8,
            "P3 e[{v}] = {}",
            ev.vector[v]
        );
        ensure!(
            (ev.vector[v] - sign * eig.eigenvectors[(v, top)]).abs() <= 1e-8,
            "P3 disagrees with dense solver"
        );
    }
    ensure!(
        (ev.lambda - 2f64.sqrt()).abs() <= 1e-8,
        "P3 lambda {}",
        ev.lambda
    );
    ensure!(
        (eig.eigenvalues[top] - 2f64.sqrt()).abs() <= 1e-8,
        "dense lambda"
    );

    let mut worst = 0.0f64;
    for dir in builds {
        let (tree, _) = load_tree(&dir.join("tree.tsv")).map_err(|e| e.to_string())?;
        let e = report_eigenvector(dir)?;
        let (lambda, r) = residual(&tree, &e);
        ensure!(lambda > 0.0, "{}: lambda {lambda}", dir.display());
        ensure!(
            r <= 1e-8,
            "{} (k={}): residual {r:e}",
            dir.display(),
            tree.vertex_count()
        );
        worst = worst.max(r);
    }
    Ok(format!(
        "P3 matches dense solver; max residual {worst:.2e} over {} built trees incl. k={FULL_SCALE}",
        builds.len()
    ))
}

// ---------------------------------------------------------------------------
// 4. Closed-form centralities.

fn criterion_closed_forms(builds: &[PathBuf]) -> Check {
    let tol = 1e-12;
    for leaves in 2..=10u32 {
        let star = tree_of(
            leaves as usize + 1,
            &(1..=leaves).map(|l| (0, l)).collect::<Vec<_>>(),
        );
        let b = betweenness_centrality(&star);
        ensure!(
            (b[0].normalized - 1.0).abs() <= tol,
            "star center betweenness {}",
            b[0].normalized
        );
        ensure!(
            (degree_centrality(&star)[0] - 1.0).abs() <= tol,
            "star center degree"
        );
    }
    let p3 = tree_of(3, &[(0, 1), (1, 2)]);
    ensure!(
        (closeness_centrality(&p3)[1] - 1.0).abs() <= tol,
        "P3 middle closeness"
    );
    for n in 4..=32u32 {
        let path = tree_of(n as usize, &(1..n).map(|v| (v - 1, v)).collect::<Vec<_>>());
        let c = closeness_centrality(&path)[0];
        ensure!(
            (c - 2.0 / n as f64).abs() <= tol,
            "P{n} endpoint closeness {c}"
        );
    }

    let mut trees: Vec<SpanningTree> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let k = rng.gen_range(2..200);
        trees.push(random_tree(&mut rng, k));
    }
    for dir in builds {
        trees.push(
            load_tree(&dir.join("tree.tsv"))
                .map_err(|e| e.to_string())?
                .0,
        );
    }
    for t in &trees {
        let sum: f64 = degree_centrality(t).iter().sum();
        ensure!(
            (sum - 2.0).abs() <= tol,
            "degree sum {sum} on k={}",
            t.vertex_count()
        );
    }
    Ok(format!(
        "star/path fixtures exact; degree sum = 2 on {} trees",
        trees.len()
    ))
}

// ---------------------------------------------------------------------------
// 5. Similarity table against a brute-force recomputation.

fn brute_force_table(records: &[AnimeRecord]) -> Vec<[f64; 4]> {
    let shared = |a: &[String], b: &[String]| {
        let set: HashSet<&String> = a.iter().collect();
        b.iter().filter(|x| set.contains(x)).count()
    };
    let hist = |r: &AnimeRecord| {
        let total: u64 = r.votes.iter().sum();
        r.votes
            .iter()
            .map(|&c| c as f64 / total as f64)
            .collect::<Vec<f64>>()
    };
    let mut raw = Vec::new();
    for i in 0..records.len() {
        for j in i + 1..records.len() {
            let (x, y) = (hist(&records[i]), hist(&records[j]));
            let mut chi = 0.0;
            for n in 0..x.len() {
                let s = x[n] + y[n];
                if s != 0.0 {
                    chi += (x[n] - y[n]) * (x[n] - y[n]) / s;
                }
            }
            raw.push([
                ((1 + shared(&records[i].crew, &records[j].crew)) as f64).ln(),
                chi,
                shared(&records[i].topics, &records[j].topics) as f64,
            ]);
        }
    }
    let ranges: Vec<(f64, f64)> = (0..3)
        .map(|m| {
            let lo = raw.iter().map(|r| r[m]).fold(f64::INFINITY, f64::min);
            let hi = raw.iter().map(|r| r[m]).fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        })
        .collect();
    raw.iter()
        .map(|r| {
            let z = |m: usize| {
                let (lo, hi) = ranges[m];
                if hi == lo {
                    0.0
                } else {
                    (r[m] - lo) / (hi - lo)
                }
            };
            let (d, s, h) = (1.0 - z(0), z(1), 1.0 - z(2));
            [d, s, h, (d * d + s * s + h * h).sqrt()]
        })
        .collect()
}

fn criterion_similarity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut catalogs = 0;
    for round in 0..300u64 {
        let k = 2 + (round % 7) as usize;
        let catalog = generate_synthetic(k, round, 11).map_err(|e| e.to_string())?;
        let (table, _) = similarity_table(&catalog).map_err(|e| e.to_string())?;
        let oracle = brute_force_table(catalog.records());
        ensure!(table.len() == oracle.len(), "pair count for k={k}");
        for (got, want) in table.iter().zip(&oracle) {
            ensure!(
                [got.crew_norm, got.score_norm, got.topic_norm, got.delta] == *want,
                "seed {round} pair ({}, {}): {:?} vs {want:?}",
                got.i,
                got.j,
                [got.crew_norm, got.score_norm, got.topic_norm, got.delta]
            );
        }
        catalogs += 1;
    }

    let pool = generate_synthetic(400, 99, 11).map_err(|e| e.to_string())?;
    let (table, _) = similarity_table(&pool).map_err(|e| e.to_string())?;
    let root3 = 3f64.sqrt();
    for _ in 0..10_000 {
        let (i, j) = (rng.gen_range(0..400), rng.gen_range(0..400));
        let (a, b) = (pool.record(i), pool.record(j));
        ensure!(
            crew_similarity(&a.crew, &b.crew) == crew_similarity(&b.crew, &a.crew),
            "crew symmetry"
        );
        ensure!(
            topic_similarity(&a.topics, &b.topics) == topic_similarity(&b.topics, &a.topics),
            "topic symmetry"
        );
        let (ha, hb) = (
            score_histogram(&a.votes, &a.id).map_err(|e| e.to_string())?,
            score_histogram(&b.votes, &b.id).map_err(|e| e.to_string())?,
        );
        ensure!(
            score_similarity(&ha, &hb).unwrap() == score_similarity(&hb, &ha).unwrap(),
            "score symmetry"
        );
        if i != j {
            let idx = pair_index(400, i.min(j), i.max(j));
            let s = &table[idx];
            for c in [s.crew_norm, s.score_norm, s.topic_norm] {
                ensure!((0.0..=1.0).contains(&c), "component {c} out of range");
            }
            ensure!(
                (0.0..=root3).contains(&s.delta),
                "delta {} out of range",
                s.delta
            );
        }
    }
    Ok(format!(
        "{catalogs} catalogs k<=8 bit-exact; 10000 random pairs symmetric and in range"
    ))
}

fn pair_index(k: usize, i: usize, j: usize) -> usize {
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

// ---------------------------------------------------------------------------
// 6. The published branch.

fn criterion_branch() -> Check {
    let ids = ["3598", "3841", "3907", "3817", "2936", "2354"];
    let edges = [(0, 1), (1, 2), (2, 3), (2, 4), (2, 5)];
    let index = TreeIndex::new(tree_of(6, &edges), ids.map(String::from).to_vec())
        .map_err(|e| e.to_string())?;
    let mut near: Vec<String> = index
        .neighbors("3907")
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|n| n.id)
        .collect();
    near.sort();
    ensure!(
        near == ["2354", "2936", "3817", "3841"],
        "neighbors(3907) = {near:?}"
    );
    let path = index.path("3598", "2354").map_err(|e| e.to_string())?;
    ensure!(
        path.hops == 3 && path.via == ["3841", "3907"],
        "path = {path:?}"
    );
    Ok("neighbors(3907) = {3841, 3817, 2936, 2354}; 3598 -> 2354 is 3 walks via 3841, 3907".into())
}

// ---------------------------------------------------------------------------
// 7. Full-scale build time and memory.

fn peak_child_rss_bytes() -> u64 {
    let mut usage: libc::rusage = unsafe { std::mem::zeroed() };
    unsafe { libc::getrusage(libc::RUSAGE_CHILDREN, &mut usage) };
    usage.ru_maxrss as u64 * 1024
}

fn criterion_scale(work: &Path) -> Check {
    let input = work.join("full_scale.jsonl");
    animst(&[
        "generate",
        "--k",
        &FULL_SCALE.to_string(),
        "--seed",
        "1",
        "-o",
        p(&input),
    ])?;
    let out = work.join("scale");
    let start = Instant::now();
    let summary = animst(&["build", p(&input), "-o", p(&out)])?;
    let elapsed = start.elapsed();
    let rss = peak_child_rss_bytes();
    ensure!(
        summary.contains(&format!("k\t{FULL_SCALE}\n"))
            && summary.contains("edges_considered\t8114406\n"),
        "unexpected summary: {summary}"
    );
    ensure!(elapsed < Duration::from_secs(60), "build took {elapsed:?}");
    ensure!(rss < 2 << 30, "peak memory {} MiB", rss >> 20);
    Ok(format!(
        "k={FULL_SCALE}, 8114406 pairs: {elapsed:.2?}, peak RSS {} MiB",
        rss >> 20
    ))
}

// ---------------------------------------------------------------------------
// 8. Byte-identical rebuilds.

fn criterion_determinism(work: &Path) -> Check {
    let input = work.join("full_scale.jsonl");
    let first = work.join("scale");
    let second = work.join("scale_again");
    animst(&["build", p(&input), "-o", p(&second)])?;
    for dir in [&first, &second] {
        animst(&[
            "export-dot",
            "-a",
            p(dir),
            "-o",
            p(&dir.join("tree.dot")),
            "--titles",
        ])?;
    }
    let mut compared = Vec::new();
    for file in [
        "pairs.bin",
        "tree.tsv",
        "tree.dot",
        "centrality.tsv",
        "distributions.tsv",
    ] {
        let a = fs::read(first.join(file)).map_err(|e| format!("{file}: {e}"))?;
        let b = fs::read(second.join(file)).map_err(|e| format!("{file}: {e}"))?;
        ensure!(a == b, "{file} differs between builds");
        compared.push(format!("{file} ({} B)", a.len()));
    }
    Ok(format!("identical: {}", compared.join(", ")))
}

fn extra_builds(work: &Path) -> Result<Vec<PathBuf>, String> {
    let mut dirs = Vec::new();
    for (k, seed) in [(2usize, 0u64), (10, 1), (100, 7), (500, 3), (1500, 11)] {
        let input = work.join(format!("k{k}.jsonl"));
        let catalog: Catalog = generate_synthetic(k, seed, 11).map_err(|e| e.to_string())?;
        catalog.save(&input).map_err(|e| e.to_string())?;
        let out = work.join(format!("k{k}"));
        animst(&["build", p(&input), "-o", p(&out)])?;
        dirs.push(out);
    }
    Ok(dirs)
}

fn run(name: &str, results: &mut Vec<bool>, check: impl FnOnce() -> Check) {
    let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    match &outcome {
        Ok(detail) => println!("PASS  {name}: {detail}"),
        Err(why) => println!("FAIL  {name}: {why}"),
    }
    results.push(outcome.is_ok());
}

fn main() {
    let work = tempfile::tempdir().expect("temp dir");
    let work = work.path();
    let mut results = Vec::new();

    run(
        "[7] full-scale build under 60 s and 2 GB",
        &mut results,
        || criterion_scale(work),
    );
    let mut builds = extra_builds(work).unwrap_or_default();
    builds.push(work.join("scale"));

    run(
        "[1] Kruskal equals exhaustive enumeration",
        &mut results,
        criterion_mst_oracle,
    );
    run(
        "[2] subtree betweenness equals Brandes",
        &mut results,
        criterion_betweenness,
    );
    run(
        "[3] eigenvector residual and P3 oracle",
        &mut results,
        || criterion_eigen(&builds),
    );
    run("[4] closed-form centrality fixtures", &mut results, || {
        criterion_closed_forms(&builds)
    });
    run(
        "[5] similarity table equals brute force",
        &mut results,
        criterion_similarity,
    );
    run(
        "[6] published branch neighbors and path",
        &mut results,
        criterion_branch,
    );
    run("[8] byte-identical rebuilds", &mut results, || {
        criterion_determinism(work)
    });

    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} acceptance criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
