//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails. The long-running stretch cells run only
//! with `--ignored` or `--include-ignored`; bare arguments pick criteria by id.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trisparse::canon::{are_isomorphic, canonical_form};
use trisparse::defect::{dense_cap_check, is_k_dense_set, is_k_sparse_set, recoloring_bound, sparse_bound_witness};
use trisparse::driver::{compute_number, probe_conjecture, CapReason, RunLimits, RunReport, RunStatus};
use trisparse::enumerator::{level_step_with, verify_membership, LevelSet, ProblemSpec, StepOptions};
use trisparse::formats::graph6;
use trisparse::formats::level::{level_path, read_level_file, write_level};
use trisparse::graph::{Graph, VertexSet};
use trisparse::oracle::{brute_isomorphic, compare_levels};

type Outcome = Result<(), Vec<String>>;

struct Criterion {
    id: &'static str,
    title: &'static str,
    stretch: bool,
    run: fn() -> Outcome,
}

fn limits() -> RunLimits {
    RunLimits::default()
}

fn threshold(k: usize, j: usize) -> ProblemSpec {
    ProblemSpec::threshold(k, j).unwrap()
}

fn ramsey(k: usize, i: usize, j: usize) -> ProblemSpec {
    ProblemSpec::ramsey(k, i, j).unwrap()
}

fn run(spec: &ProblemSpec) -> Result<RunReport, String> {
    compute_number(spec, &limits()).map_err(|e| format!("{spec}: {e}"))
}

/// Checks value and extremal count for every `(spec, value, count)`.
fn expect_cells(cells: &[(ProblemSpec, usize, usize)]) -> Outcome {
    let mut errors = Vec::new();
    for (spec, value, count) in cells {
        match run(spec) {
            Ok(r) if r.value == Some(*value) && r.extremal_count == Some(*count) => {}
            Ok(r) => {
                errors.push(format!("{spec}: got {:?} ({:?}), expected {value} ({count})", r.value, r.extremal_count))
            }
            Err(e) => errors.push(e),
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn one_based(order: usize, edges: &[(usize, usize)]) -> Graph {
    let edges: Vec<_> = edges.iter().map(|&(u, v)| (u - 1, v - 1)).collect();
    Graph::from_edges(order, &edges).unwrap()
}

fn r1_4_6_extremal() -> Graph {
    one_based(9, &[(1, 2), (2, 3), (3, 8), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9), (1, 4), (4, 9), (2, 6)])
}

fn r1_4_7_cubic() -> Graph {
    one_based(
        12,
        &[
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (1, 6),
            (1, 7),
            (2, 8),
            (3, 9),
            (4, 10),
            (5, 11),
            (6, 12),
            (12, 9),
            (9, 11),
            (11, 7),
            (7, 10),
            (10, 8),
            (8, 12),
        ],
    )
}

/// The second order-12 reference graph as transcribed. It contains the
/// 4-cycle v3 v4 v9 v8.
fn r1_4_7_transcribed() -> Graph {
    one_based(
        12,
        &[
            (1, 2),
            (1, 9),
            (2, 7),
            (2, 6),
            (3, 4),
            (3, 7),
            (3, 8),
            (4, 5),
            (4, 9),
            (5, 10),
            (5, 6),
            (11, 12),
            (8, 9),
            (9, 10),
            (10, 11),
            (8, 12),
            (7, 11),
            (6, 12),
        ],
    )
}

/// The transcription without the edge v4 v9.
fn r1_4_7_other() -> Graph {
    let drawn = r1_4_7_transcribed();
    let edges: Vec<_> = drawn.edges().filter(|&e| e != (3, 8)).collect();
    Graph::from_edges(12, &edges).unwrap()
}

fn threshold_fast() -> Outcome {
    let mut cells = vec![
        (threshold(1, 3), 5, 1),
        (threshold(1, 4), 7, 2),
        (threshold(1, 5), 11, 1),
        (threshold(2, 4), 5, 1),
        (threshold(2, 5), 9, 2),
        (threshold(2, 6), 11, 6),
        (threshold(3, 5), 6, 1),
        (threshold(3, 6), 8, 2),
        (threshold(4, 6), 7, 1),
        (threshold(4, 7), 9, 2),
        (threshold(5, 7), 8, 1),
    ];
    cells.extend((2..=7).map(|k| (threshold(k, 3), 3, 2)));
    let start = Instant::now();
    expect_cells(&cells)?;
    let secs = start.elapsed().as_secs_f64();
    if secs > 60.0 {
        return Err(vec![format!("took {secs:.1}s in total, over the 60s budget")]);
    }
    Ok(())
}

fn threshold_moderate() -> Outcome {
    expect_cells(&[
        (threshold(1, 6), 13, 16),
        (threshold(2, 7), 13, 288),
        (threshold(3, 7), 13, 5),
        (threshold(4, 8), 11, 7),
        (threshold(5, 10), 14, 46),
    ])
}

fn r1_4_row() -> Outcome {
    let cells = [(4, 6, 1), (5, 8, 1), (6, 10, 1), (7, 13, 2)];
    let mut errors = Vec::new();
    let mut reports = Vec::new();
    for (j, value, count) in cells {
        let spec = ramsey(1, 4, j);
        match run(&spec) {
            Ok(r) => {
                if r.value != Some(value) || r.extremal_count != Some(count) {
                    errors.push(format!(
                        "{spec}: got {:?} ({:?}), expected {value} ({count})",
                        r.value, r.extremal_count
                    ));
                }
                reports.push(r);
            }
            Err(e) => return Err(vec![e]),
        }
    }
    let order_9 = r1_4_6_extremal();
    if !verify_membership(&order_9, &ramsey(1, 4, 6)) {
        errors.push("order-9 reference graph is not admissible for R_1(4,6)".into());
    }
    if !reports[2].extremal.iter().any(|g| are_isomorphic(g, &order_9)) {
        errors.push("no order-9 extremal graph matches the reference graph".into());
    }
    if !reports[1].extremal.iter().any(|g| are_isomorphic(g, &Graph::cycle(7).unwrap())) {
        errors.push("R_1(4,5) extremal graph is not C7".into());
    }
    let ext = &reports[3].extremal;
    for (name, fig) in [("cubic", r1_4_7_cubic()), ("other", r1_4_7_other())] {
        if !verify_membership(&fig, &ramsey(1, 4, 7)) {
            errors.push(format!("{name} order-12 reference graph is not admissible for R_1(4,7)"));
        }
        if !ext.iter().any(|g| are_isomorphic(g, &fig)) {
            errors.push(format!("no order-12 extremal graph matches the {name} reference graph"));
        }
    }
    let c4 = VertexSet::from_vertices([2, 3, 7, 8]);
    if !is_k_dense_set(&r1_4_7_transcribed(), c4, 1) {
        errors.push("transcribed order-12 graph no longer shows the 4-cycle v3 v4 v9 v8".into());
    }
    if are_isomorphic(&r1_4_7_cubic(), &r1_4_7_other()) {
        errors.push("order-12 reference graphs coincide".into());
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn dense_diagonal_sweep() -> Outcome {
    // R_k(k+2, j) = j, with extremal counts from the i = k+2 rows
    let mut cells = Vec::new();
    for (j, count) in (3..=9).zip([2, 2, 3, 3, 4, 4, 5]) {
        cells.push((ramsey(1, 3, j), j, count));
    }
    for j in 4..=10 {
        cells.push((ramsey(2, 4, j), j, 3));
    }
    for (j, count) in (5..=12).zip([7, 7, 8, 8, 9, 9, 10, 10]) {
        cells.push((ramsey(3, 5, j), j, count));
    }
    expect_cells(&cells)
}

fn extremal_structure() -> Outcome {
    let mut errors = Vec::new();
    let mut check = |spec: ProblemSpec, ok: &dyn Fn(&[Graph]) -> bool, what: &str| match run(&spec) {
        Ok(r) if ok(&r.extremal) => {}
        Ok(r) => errors.push(format!("{spec}: {} extremal graphs, expected {what}", r.extremal.len())),
        Err(e) => errors.push(e),
    };
    for k in 2..=5 {
        let star = Graph::complete_bipartite(1, k + 1).unwrap();
        check(threshold(k, k + 2), &|ext| ext.len() == 1 && are_isomorphic(&ext[0], &star), "exactly K_{1,k+1}");
    }
    for k in 3..=5 {
        let full = Graph::complete_bipartite(2, k + 2).unwrap();
        let missing = Graph::from_edges(k + 4, &full.edges().skip(1).collect::<Vec<_>>()).unwrap();
        check(
            threshold(k, k + 3),
            &|ext| {
                ext.len() == 2
                    && ext.iter().any(|g| are_isomorphic(g, &full))
                    && ext.iter().any(|g| are_isomorphic(g, &missing))
            },
            "K_{2,k+2} and K_{2,k+2} minus an edge",
        );
    }
    for k in 4..=5 {
        let b = Graph::complete_bipartite(3, k + 3).unwrap();
        check(threshold(k, k + 4), &|ext| ext.iter().any(|g| are_isomorphic(g, &b)), "K_{3,k+3} among them");
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn conjecture_probe() -> Outcome {
    let rows = probe_conjecture(2..=5, &limits()).map_err(|e| vec![e.to_string()])?;
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| !r.agrees())
        .map(|r| {
            format!(
                "k={} i={}: value {:?}, predicted {}, bipartite witness {}",
                r.k, r.i, r.value, r.predicted, r.bipartite_witness_found
            )
        })
        .collect();
    if rows.len() != 10 {
        return Err(vec![format!("{} cells probed, expected 10", rows.len())]);
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

fn oracle_equivalence() -> Outcome {
    let specs = [threshold(1, 3), threshold(1, 4), ramsey(1, 4, 4), threshold(2, 4)];
    let mut errors = Vec::new();
    for spec in specs {
        match compare_levels(7, &spec, &StepOptions::default()) {
            Ok(rows) => {
                for c in rows.iter().filter(|c| !c.agrees()) {
                    errors.push(format!(
                        "{spec} order {}: oracle {} enumerator {} ({} missing, {} extra)",
                        c.order,
                        c.oracle_count,
                        c.enumerator_count,
                        c.missing.len(),
                        c.extra.len()
                    ));
                }
            }
            Err(e) => errors.push(format!("{spec}: {e}")),
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let edges: Vec<_> = (1..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    let kept: Vec<_> = edges.into_iter().filter(|_| rng.gen_bool(p)).collect();
    Graph::from_edges(n, &kept).unwrap()
}

fn random_triangle_free(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut pairs: Vec<_> = (1..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    pairs.shuffle(rng);
    let mut rows = vec![0u32; n];
    for (u, v) in pairs {
        if rng.gen_bool(p) && rows[u] & rows[v] == 0 {
            rows[u] |= 1 << v;
            rows[v] |= 1 << u;
        }
    }
    Graph::from_rows(&rows).unwrap()
}

fn level_files(spec: &ProblemSpec, workers: usize) -> Vec<Vec<u8>> {
    let opts = StepOptions { workers, ..StepOptions::default() };
    let mut level = LevelSet::initial();
    let mut files = Vec::new();
    loop {
        let mut buf = Vec::new();
        write_level(&level, spec, &mut buf).unwrap();
        files.push(buf);
        if level.is_empty() {
            return files;
        }
        level = level_step_with(&level, spec, &opts).unwrap();
    }
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7269_736b);
    let mut errors = Vec::new();

    let mut mismatches = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.1..0.9);
        let g = random_graph(&mut rng, n, p);
        let mut pi: Vec<usize> = (0..n).collect();
        pi.shuffle(&mut rng);
        if canonical_form(&g) != canonical_form(&g.permute(&pi).unwrap()) {
            mismatches += 1;
        }
    }
    for _ in 0..300 {
        let (a, b) = (rng.gen_range(1..=7), rng.gen_range(1..=7));
        let g = random_graph(&mut rng, a, 0.4);
        let h = random_graph(&mut rng, b, 0.4);
        if (canonical_form(&g) == canonical_form(&h)) != brute_isomorphic(&g, &h).unwrap() {
            mismatches += 1;
        }
    }
    if mismatches > 0 {
        errors.push(format!("canonical form: {mismatches} mismatches"));
    }

    let bad_codec = (0..10000)
        .filter(|_| {
            let n = rng.gen_range(0..=20);
            let p = rng.gen_range(0.0..1.0);
            let g = random_graph(&mut rng, n, p);
            graph6::decode(&graph6::encode(&g)).ok() != Some(g)
        })
        .count();
    if bad_codec > 0 {
        errors.push(format!("graph6: {bad_codec} round-trip failures"));
    }

    let mut generated = Vec::new();
    let mut bound_failures = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=10);
        let p = rng.gen_range(0.2..1.0);
        let g = random_triangle_free(&mut rng, n, p);
        let k = rng.gen_range(0..=3);
        let w = sparse_bound_witness(&g, k);
        if !is_k_sparse_set(&g, w.set, k) || w.set.len() < recoloring_bound(n, g.max_degree(), k) {
            bound_failures += 1;
        }
        generated.push(g);
    }
    if bound_failures > 0 {
        errors.push(format!("recolouring bound: {bound_failures} failures"));
    }

    for spec in [threshold(2, 6), ramsey(1, 4, 6), threshold(4, 8)] {
        let mut level = LevelSet::initial();
        while !level.is_empty() {
            generated.extend(level.graphs().copied());
            level = level_step_with(&level, &spec, &StepOptions::default()).unwrap();
        }
    }
    let capped = generated.iter().filter(|g| (0..=4).any(|k| !dense_cap_check(g, k).unwrap_or(false))).count();
    if capped > 0 {
        errors.push(format!("dense cap: {capped} of {} graphs fail", generated.len()));
    }

    for spec in [threshold(2, 7), ramsey(1, 4, 7), threshold(5, 10)] {
        let one = level_files(&spec, 1);
        if one != level_files(&spec, 2) || one != level_files(&spec, 8) {
            errors.push(format!("{spec}: level files differ across worker counts"));
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn stretch_t1_7() -> Outcome {
    let spec = threshold(1, 7);
    let r = run(&spec).map_err(|e| vec![e])?;
    let mut errors = Vec::new();
    if r.value != Some(18) || r.extremal_count != Some(1) {
        errors.push(format!("{spec}: got {:?} ({:?}), expected 18 (1)", r.value, r.extremal_count));
    }
    if r.per_level_counts.get(&13) != Some(&108243) {
        errors.push(format!("order 13 holds {:?} graphs, expected 108243", r.per_level_counts.get(&13)));
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn stretch_r4_9_11() -> Outcome {
    let spec = ramsey(4, 9, 11);
    match run(&spec).map_err(|e| vec![e])?.value {
        Some(18) => Ok(()),
        other => Err(vec![format!("{spec}: got {other:?}, expected 18")]),
    }
}

fn blank_cell_caps_cleanly() -> Outcome {
    let spec = threshold(1, 8);
    let dir = tempfile::tempdir().map_err(|e| vec![e.to_string()])?;
    let l = RunLimits { max_level_cardinality: 50_000, checkpoint_dir: Some(dir.path().to_path_buf()), ..limits() };
    let r = compute_number(&spec, &l).map_err(|e| vec![e.to_string()])?;
    let RunStatus::Capped { reason: CapReason::Cardinality { .. }, last_complete } = r.status else {
        return Err(vec![format!("expected a cardinality cap, got {:?}", r.status)]);
    };
    match read_level_file(&level_path(dir.path(), &spec, last_complete)) {
        Ok((level, s)) if s == spec && Some(&level.len()) == r.per_level_counts.get(&last_complete) => Ok(()),
        Ok(_) => Err(vec!["last checkpoint disagrees with the report".into()]),
        Err(e) => Err(vec![format!("last checkpoint unreadable: {e}")]),
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let include_stretch = args.iter().any(|a| a == "--ignored" || a == "--include-ignored");
    let only_stretch = args.iter().any(|a| a == "--ignored");
    if args.iter().any(|a| a == "--list") {
        return;
    }
    // bare arguments select criteria by id, as libtest filters do
    let filters: Vec<&String> = args.iter().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria = [
        Criterion { id: "1", title: "T_k(j) fast cells", stretch: false, run: threshold_fast },
        Criterion { id: "2", title: "T_k(j) moderate cells", stretch: false, run: threshold_moderate },
        Criterion {
            id: "3",
            title: "R_1(4,j) row and reference extremal graphs (second order-12 graph without edge v4 v9)",
            stretch: false,
            run: r1_4_row,
        },
        Criterion {
            id: "4",
            title: "R_k(k+2,j) = j sweep with extremal counts",
            stretch: false,
            run: dense_diagonal_sweep,
        },
        Criterion { id: "5", title: "extremal structure of T_k(k+2..k+4)", stretch: false, run: extremal_structure },
        Criterion {
            id: "6",
            title: "T_k(k+i) = k+2i-1 probe for 2 <= i <= k <= 5",
            stretch: false,
            run: conjecture_probe,
        },
        Criterion {
            id: "7",
            title: "enumerator levels equal the oracle for n <= 7",
            stretch: false,
            run: oracle_equivalence,
        },
        Criterion { id: "8", title: "property suites", stretch: false, run: property_suites },
        Criterion {
            id: "9a",
            title: "stretch: T_1(7) = 18 (1), 108243 graphs at order 13",
            stretch: true,
            run: stretch_t1_7,
        },
        Criterion { id: "9b", title: "stretch: R_4(9,11) = 18", stretch: true, run: stretch_r4_9_11 },
        Criterion {
            id: "9c",
            title: "blank cell T_1(8) stops with a clean checkpoint",
            stretch: false,
            run: blank_cell_caps_cleanly,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        if !filters.is_empty() && !filters.iter().any(|f| c.id.starts_with(f.as_str())) {
            continue;
        }
        if (c.stretch && !include_stretch) || (!c.stretch && only_stretch) {
            println!("SKIP criterion {}: {} (run with --ignored)", c.id, c.title);
            continue;
        }
        let start = Instant::now();
        let outcome = (c.run)();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS criterion {}: {} ({secs:.1}s)", c.id, c.title),
            Err(details) => {
                failed += 1;
                println!("FAIL criterion {}: {} ({secs:.1}s)", c.id, c.title);
                for d in details {
                    println!("    {d}");
                }
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
