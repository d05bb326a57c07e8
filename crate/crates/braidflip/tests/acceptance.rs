//! Acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line (visible with `cargo test --test acceptance -- --nocapture`).

use std::collections::BTreeMap;
use std::time::Instant;

use braidflip::{
    analyze_braid, eigen_multiplicity, enumerate_colorings, euclidean_edge_lengths,
    extract_flip_sequence, flip_operator, initial_triangulation, matrices_match,
    orthogonality_suite, pentagon_suite_exhaustive, pentagon_suite_random, ptolemy_propagate,
    synthetic_flip, verify_commutativity, verify_pentagon_euclidean,
    verify_pentagon_on_configuration, Coloring, Edge, PentagonTuple, PerturbedTuple, Point,
    RecouplingParams, RecouplingTuple, Segment, StrandSystem, Trajectory, Triangulation,
    EIGEN_RANK_TOL,
};
use braidflip::fixtures::{five_point_orbit, two_cluster_orbits};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn verdict(number: usize, title: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {number} ({title}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance {number} ({title}) failed: {detail}");
}

fn tuple_at(r: usize) -> RecouplingTuple {
    RecouplingTuple::new(RecouplingParams::new(r))
}

#[test]
fn criterion_1_paper_example_regression() {
    let clock = Instant::now();
    let system = five_point_orbit(1.0 / 3.0, 1).expect("fixture is valid");
    let tuple = tuple_at(4);
    let analysis = analyze_braid(&system, &tuple, 512, 1e-9).expect("pipeline runs");

    let six_events = analysis.events.len() == 6;

    let mut tri = initial_triangulation(&system, 512).expect("start triangulation");
    let mut dims = vec![enumerate_colorings(&tri, &tuple).unwrap().dim()];
    for ev in &analysis.events {
        tri = tri.apply_flip(ev.removed, ev.inserted).unwrap();
        dims.push(enumerate_colorings(&tri, &tuple).unwrap().dim());
    }
    let all_160 = dims.iter().all(|&d| d == 160);

    let deviation = analysis.operator.max_deviation_from_identity();
    let not_identity = deviation > 1e-3;

    let multiplicity = eigen_multiplicity(&analysis.operator, -1.0, EIGEN_RANK_TOL);
    let elapsed = clock.elapsed().as_secs_f64();

    let pass = six_events && all_160 && not_identity && multiplicity == 20 && elapsed < 10.0;
    verdict(
        1,
        "paper example regression",
        pass,
        &format!(
            "events={} dims={dims:?} max|A-I|={deviation:.3e} mult(-1)={multiplicity} elapsed={elapsed:.2}s",
            analysis.events.len()
        ),
    );
}

#[test]
fn criterion_2_orthogonality_suite() {
    let clock = Instant::now();
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for r in 3..=8 {
        let report = orthogonality_suite(&tuple_at(r)).expect("finite label set");
        if report.worst_dev > worst {
            worst = report.worst_dev;
            detail = format!("r={r}: {}", report.worst_case);
        }
    }
    let elapsed = clock.elapsed().as_secs_f64();
    let pass = worst < 1e-9 && elapsed < 60.0;
    verdict(
        2,
        "orthogonality identity r=3..8",
        pass,
        &format!("worst deviation {worst:.3e} at {detail}, elapsed {elapsed:.2}s"),
    );
}

#[test]
fn criterion_3_pentagon_suite() {
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for r in 3..=6 {
        let report = pentagon_suite_exhaustive(&tuple_at(r)).expect("finite label set");
        if report.worst_dev > worst {
            worst = report.worst_dev;
            detail = format!("exhaustive r={r}: {}", report.worst_case);
        }
    }
    for (r, seed) in [(7, 0x5EED_0007_u64), (8, 0x5EED_0008)] {
        let report = pentagon_suite_random(&tuple_at(r), 10_000, seed).expect("finite label set");
        if report.worst_dev > worst {
            worst = report.worst_dev;
            detail = format!("random r={r}: {}", report.worst_case);
        }
    }
    let pass = worst < 1e-8;
    verdict(
        3,
        "pentagon identity r=3..6 exhaustive, r=7..8 random",
        pass,
        &format!("worst deviation {worst:.3e} at {detail}"),
    );
}

/// Random pentagon in convex position: five points at jittered angles and
/// radii close enough to 1 that convexity is automatic.
fn random_convex_pentagon(rng: &mut ChaCha8Rng) -> Vec<Point> {
    (0..5)
        .map(|k| {
            let angle = std::f64::consts::TAU * (k as f64 + rng.random_range(-0.22..0.22)) / 5.0;
            let radius = rng.random_range(0.95..1.12);
            Point::new(radius * angle.cos(), radius * angle.sin())
        })
        .collect()
}

#[test]
fn criterion_4_geometric_pentagon() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FF_EE00);
    let tuples: Vec<RecouplingTuple> = [3, 4, 5].into_iter().map(tuple_at).collect();
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    let mut first_config: Option<Vec<Point>> = None;
    let mut failures = Vec::new();
    while accepted < 100 {
        attempts += 1;
        assert!(attempts < 1_000, "random pentagon generation kept degenerating");
        let points = random_convex_pentagon(&mut rng);
        let mut results = Vec::new();
        let mut degenerate = false;
        for tuple in &tuples {
            match verify_pentagon_on_configuration(&points, tuple) {
                Ok(ok) => results.push(ok),
                Err(_) => {
                    degenerate = true;
                    break;
                }
            }
        }
        if degenerate {
            continue;
        }
        accepted += 1;
        if first_config.is_none() {
            first_config = Some(points.clone());
        }
        if results.iter().any(|&ok| !ok) {
            failures.push((accepted, results));
        }
    }

    let tampered = PerturbedTuple::new(tuple_at(4), 1e-3);
    let power = verify_pentagon_on_configuration(first_config.as_ref().unwrap(), &tampered)
        .expect("configuration already known to be generic");

    let pass = failures.is_empty() && !power;
    verdict(
        4,
        "geometric pentagon on 100 random configurations",
        pass,
        &format!(
            "failures on {} configs, tampered tuple detected: {}, attempts {attempts}",
            failures.len(),
            !power
        ),
    );
}

#[test]
fn criterion_5_commutativity_of_disjoint_flips() {
    let system = two_cluster_orbits().expect("fixture is valid");
    let events = extract_flip_sequence(&system, 512, 1e-6).expect("extraction succeeds");
    assert_eq!(events.len(), 14, "two-cluster fixture changed");

    let mut chain = vec![initial_triangulation(&system, 512).expect("start triangulation")];
    for ev in &events {
        let next = chain.last().unwrap().apply_flip(ev.removed, ev.inserted).unwrap();
        chain.push(next);
    }

    let pairs: Vec<usize> = (0..events.len() - 1)
        .filter(|&k| events[k].is_disjoint_from(&events[k + 1]))
        .collect();
    let enough_pairs = pairs.len() >= 5;

    let mut checked = 0usize;
    let mut commuted = true;
    for r in [3, 4] {
        let tuple = tuple_at(r);
        for &k in &pairs {
            let basis = enumerate_colorings(&chain[k], &tuple).unwrap();
            let ok = verify_commutativity(&events[k], &events[k + 1], &basis, &tuple)
                .expect("disjoint pairs must be accepted");
            commuted &= ok;
            checked += 1;
        }
    }

    let pass = enough_pairs && commuted;
    verdict(
        5,
        "commutativity of edge-disjoint flips",
        pass,
        &format!(
            "{} disjoint pairs at indices {pairs:?}, {checked} checks, all commuted: {commuted}",
            pairs.len()
        ),
    );
}

#[test]
fn criterion_6_isotopy_invariance() {
    let tuple = tuple_at(4);
    let base = analyze_braid(
        &five_point_orbit(1.0 / 3.0, 1).unwrap(),
        &tuple,
        512,
        1e-9,
    )
    .unwrap();
    let moved = analyze_braid(&five_point_orbit(0.3, 1).unwrap(), &tuple, 512, 1e-9).unwrap();
    let same_operator = matrices_match(base.operator.matrix(), moved.operator.matrix(), 1e-9, 1e-7);

    let doubled = analyze_braid(
        &five_point_orbit(1.0 / 3.0, 2).unwrap(),
        &tuple,
        1024,
        1e-9,
    )
    .unwrap();
    let squared = base.operator.matrix() * base.operator.matrix();
    let doubling = matrices_match(doubled.operator.matrix(), &squared, 1e-8, 1e-8);

    let pass = same_operator && doubling;
    verdict(
        6,
        "isotopy invariance and doubled braid",
        pass,
        &format!(
            "perturbed-radius deviation {:.3e}, doubled-braid deviation {:.3e}, events {}/{}",
            braidflip::max_entry_deviation(base.operator.matrix(), moved.operator.matrix()),
            braidflip::max_entry_deviation(doubled.operator.matrix(), &squared),
            base.operator.event_count(),
            doubled.operator.event_count(),
        ),
    );
}

#[test]
fn criterion_7_trivial_braid_exact_identity() {
    let points = [
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.1),
        Point::new(0.4, 1.2),
    ];
    let strands = points
        .iter()
        .map(|&p| {
            Trajectory::new(vec![Segment::Linear {
                t0: 0.0,
                t1: 1.0,
                from: p,
                to: p,
            }])
            .unwrap()
        })
        .collect();
    let system = StrandSystem::new(strands).unwrap();
    let analysis = analyze_braid(&system, &tuple_at(5), 64, 1e-9).unwrap();
    let dim = analysis.basis.dim();
    let exact = analysis.operator.matrix() == &nalgebra::DMatrix::<f64>::identity(dim, dim);
    let pass = analysis.events.is_empty() && exact;
    verdict(
        7,
        "trivial braid gives the exact identity",
        pass,
        &format!("events={}, exact identity: {exact}", analysis.events.len()),
    );
}

#[test]
fn criterion_8_ptolemy_roundtrip_and_cycle() {
    // (a) one flip followed by its reverse restores every label to 1e-12.
    let quad = Triangulation::from_triangles(4, [[0, 1, 2], [0, 1, 3]]).unwrap();
    let (ev, _) = synthetic_flip(&quad, Edge::new(0, 1)).unwrap();
    let mut labels = BTreeMap::new();
    labels.insert(Edge::new(0, 1), 1.7);
    labels.insert(Edge::new(0, 2), 0.6);
    labels.insert(Edge::new(1, 2), 2.9);
    labels.insert(Edge::new(1, 3), 1.3);
    labels.insert(Edge::new(0, 3), 2.2);
    let seed = Coloring::new(labels);
    let back = ptolemy_propagate(&seed, &[ev.clone(), ev.inverse()]).unwrap();
    let mut roundtrip_worst = 0.0f64;
    for (e, &want) in seed.assignment() {
        let got = back.label(*e).expect("roundtrip keeps the edge set");
        roundtrip_worst = roundtrip_worst.max((got - want).abs());
    }

    // (b) the five-flip cycle through all fans of a convex pentagon returns
    // Euclidean edge lengths to their initial values.
    let points: Vec<Point> = {
        let radii = [1.0, 1.05, 0.97, 1.03, 0.96];
        let offsets = [0.07, -0.04, 0.09, -0.06, 0.02];
        (0..5)
            .map(|k| {
                let angle = std::f64::consts::TAU * k as f64 / 5.0 + offsets[k];
                Point::new(radii[k] * angle.cos(), radii[k] * angle.sin())
            })
            .collect()
    };
    let fan0 = Triangulation::from_triangles(5, [[0, 1, 2], [0, 2, 3], [0, 3, 4]]).unwrap();
    let removals = [
        Edge::new(0, 3),
        Edge::new(0, 2),
        Edge::new(2, 4),
        Edge::new(1, 4),
        Edge::new(1, 3),
    ];
    let mut tri = fan0.clone();
    let mut cycle = Vec::new();
    for &removed in &removals {
        let (ev, next) = synthetic_flip(&tri, removed).unwrap();
        cycle.push(ev);
        tri = next;
    }
    assert_eq!(tri, fan0, "five flips must close the cycle");
    let lengths = euclidean_edge_lengths(&fan0, &points);
    let transported = ptolemy_propagate(&lengths, &cycle).unwrap();
    let mut cycle_worst = 0.0f64;
    for (e, &want) in lengths.assignment() {
        let got = transported.label(*e).expect("cycle keeps the edge set");
        cycle_worst = cycle_worst.max((got - want).abs() / want.abs().max(1.0));
    }
    let euclid = verify_pentagon_euclidean(&points).unwrap();

    let pass = roundtrip_worst <= 1e-12 && cycle_worst <= 1e-9 && euclid;
    verdict(
        8,
        "Ptolemy roundtrip and pentagon cycle",
        pass,
        &format!("roundtrip residual {roundtrip_worst:.3e}, cycle residual {cycle_worst:.3e}"),
    );
}

/// Independent brute-force coloring enumerator: odometer over all label
/// assignments in lexicographic row order, filtering by per-triangle
/// admissibility.
fn brute_force_rows<T>(tri: &Triangulation, tuple: &T) -> Vec<Vec<T::Label>>
where
    T: PentagonTuple,
{
    let labels = tuple.label_list().expect("finite label set");
    let edges = tri.edge_list();
    let triangles: Vec<[usize; 3]> = tri
        .triangles()
        .iter()
        .map(|t| {
            let es = braidflip::geometry::triangle_edges(*t);
            let pos = |e: Edge| edges.iter().position(|&x| x == e).unwrap();
            [pos(es[0]), pos(es[1]), pos(es[2])]
        })
        .collect();
    let mut rows = Vec::new();
    let mut counter = vec![0usize; edges.len()];
    'outer: loop {
        let row: Vec<T::Label> = counter.iter().map(|&k| labels[k]).collect();
        if triangles
            .iter()
            .all(|&[a, b, c]| tuple.admissible(row[a], row[b], row[c]))
        {
            rows.push(row);
        }
        // Lexicographic odometer: advance the last position first.
        for k in (0..counter.len()).rev() {
            counter[k] += 1;
            if counter[k] < labels.len() {
                continue 'outer;
            }
            counter[k] = 0;
        }
        break;
    }
    rows
}

#[test]
fn criterion_9_oracle_equivalence() {
    // (a) coloring counts and rows against brute force, all triangulations
    // with at most 8 edges, r <= 5.
    let shapes: Vec<Triangulation> = vec![
        Triangulation::from_triangles(3, [[0, 1, 2]]).unwrap(),
        Triangulation::from_triangles(4, [[0, 1, 2], [0, 1, 3]]).unwrap(),
        Triangulation::from_triangles(4, [[0, 1, 2], [0, 2, 3]]).unwrap(),
        Triangulation::from_triangles(5, [[0, 1, 2], [0, 2, 3], [0, 3, 4]]).unwrap(),
        Triangulation::from_triangles(5, [[0, 1, 2], [1, 2, 3], [2, 3, 4]]).unwrap(),
    ];
    let mut enumerations_agree = true;
    let mut counts = Vec::new();
    for r in 3..=5 {
        let tuple = tuple_at(r);
        for tri in &shapes {
            assert!(tri.edge_list().len() <= 8);
            let brute = brute_force_rows(tri, &tuple);
            let basis = enumerate_colorings(tri, &tuple).unwrap();
            let same_count = brute.len() == basis.dim();
            let same_rows = (0..basis.dim()).all(|k| basis.label_row(k) == brute[k].as_slice());
            enumerations_agree &= same_count && same_rows;
            counts.push(brute.len());
        }
    }

    // (b) flip-operator columns against a direct summation over target
    // colorings on the five-point fixture's first extracted event at r=4.
    let system = five_point_orbit(1.0 / 3.0, 1).unwrap();
    let events = extract_flip_sequence(&system, 512, 1e-9).unwrap();
    let first = &events[0];
    let before_tri = initial_triangulation(&system, 512).unwrap();
    let after_tri = before_tri.apply_flip(first.removed, first.inserted).unwrap();
    let params = RecouplingParams::new(4);
    let tuple = tuple_at(4);
    let before = enumerate_colorings(&before_tri, &tuple).unwrap();
    let after = enumerate_colorings(&after_tri, &tuple).unwrap();
    let operator = flip_operator(first, &before, &after, &tuple).unwrap();

    let brute_before = brute_force_rows(&before_tri, &tuple);
    let brute_after = brute_force_rows(&after_tri, &tuple);
    assert_eq!(brute_before.len(), before.dim(), "basis/brute-force count mismatch");
    assert_eq!(brute_after.len(), after.dim(), "basis/brute-force count mismatch");
    assert!(
        (0..before.dim()).all(|k| before.label_row(k) == brute_before[k].as_slice())
            && (0..after.dim()).all(|k| after.label_row(k) == brute_after[k].as_slice()),
        "basis rows must agree with the brute-force enumeration order"
    );
    let before_edges = before_tri.edge_list();
    let after_edges = after_tri.edge_list();
    let pos_before = |e: Edge| before_edges.iter().position(|&x| x == e).unwrap();
    let pos_after = |e: Edge| after_edges.iter().position(|&x| x == e).unwrap();

    let mut columns_agree = true;
    let mut column_worst = 0.0f64;
    for (f, row) in brute_before.iter().enumerate() {
        // Direct summation: a target coloring g contributes
        // sixj(f(a), f(b), g(i), f(c), f(d), f(j)) when it matches f on
        // every shared edge.
        let mut naive = vec![0.0f64; brute_after.len()];
        for (g, grow) in brute_after.iter().enumerate() {
            let matches = before_edges
                .iter()
                .enumerate()
                .filter(|&(_, e)| *e != first.removed)
                .all(|(k, e)| grow[pos_after(*e)] == row[k]);
            if !matches {
                continue;
            }
            naive[g] = params.sixj(
                row[pos_before(first.quad[0])] as usize,
                row[pos_before(first.quad[1])] as usize,
                grow[pos_after(first.inserted)] as usize,
                row[pos_before(first.quad[2])] as usize,
                row[pos_before(first.quad[3])] as usize,
                row[pos_before(first.removed)] as usize,
            );
        }
        let mut from_operator = vec![0.0f64; after.dim()];
        for &(t, v) in operator.column(f) {
            from_operator[t] = v;
        }
        for g in 0..naive.len() {
            let dev = (naive[g] - from_operator[g]).abs();
            column_worst = column_worst.max(dev);
            columns_agree &= dev <= 1e-12;
        }
    }

    let pass = enumerations_agree && columns_agree;
    verdict(
        9,
        "oracle equivalence (brute-force colorings and naive columns)",
        pass,
        &format!(
            "enumerations agree: {enumerations_agree} (counts {counts:?}), worst column deviation {column_worst:.3e}"
        ),
    );
}
