//! End-to-end properties of the extraction and operator pipeline that go
//! beyond the acceptance gate: sampling stability, time reversal, base-time
//! conjugation, doubled braids, frozen Ptolemy transport values, and
//! graceful failure on persistently degenerate inputs.

use std::collections::BTreeMap;

use braidflip::fixtures::five_point_orbit;
use braidflip::{
    analyze_braid, eigenvalue_clusters, euclidean_edge_lengths, extract_flip_sequence,
    initial_triangulation, ptolemy_propagate, spectra_match, Edge, Error, Point, RecouplingParams,
    RecouplingTuple, Segment, StrandSystem, Trajectory, EIGEN_CLUSTER_TOL,
};

fn tuple_at(r: usize) -> RecouplingTuple {
    RecouplingTuple::new(RecouplingParams::new(r))
}

#[test]
fn extraction_is_stable_under_refinement() {
    let system = five_point_orbit(1.0 / 3.0, 1).unwrap();
    let coarse = extract_flip_sequence(&system, 512, 1e-9).unwrap();
    let fine = extract_flip_sequence(&system, 1024, 1e-9).unwrap();
    assert_eq!(coarse.len(), fine.len());
    for (a, b) in coarse.iter().zip(&fine) {
        assert_eq!((a.removed, a.inserted), (b.removed, b.inserted));
        assert_eq!(a.quad, b.quad);
        assert!(
            (a.t_mid() - b.t_mid()).abs() < 1e-6,
            "event time moved: {} vs {}",
            a.t_mid(),
            b.t_mid()
        );
    }
}

#[test]
fn time_reversal_mirrors_the_event_sequence() {
    let system = five_point_orbit(1.0 / 3.0, 1).unwrap();
    let forward = extract_flip_sequence(&system, 512, 1e-9).unwrap();
    let backward = extract_flip_sequence(&system.reversed(), 512, 1e-9).unwrap();
    assert_eq!(forward.len(), backward.len());
    for (k, back) in backward.iter().enumerate() {
        let mirrored = forward[forward.len() - 1 - k].inverse();
        assert_eq!(back.removed, mirrored.removed, "event {k}");
        assert_eq!(back.inserted, mirrored.inserted, "event {k}");
        assert_eq!(back.quad, mirrored.quad, "event {k}");
        assert!(
            (back.t_mid() - (1.0 - mirrored.t_mid())).abs() < 1e-6,
            "event {k} time not mirrored: {} vs {}",
            back.t_mid(),
            1.0 - mirrored.t_mid()
        );
    }
}

#[test]
fn base_time_shift_conjugates_the_operator() {
    let tuple = tuple_at(4);
    let base = analyze_braid(&five_point_orbit(1.0 / 3.0, 1).unwrap(), &tuple, 512, 1e-9).unwrap();
    let shifted_system = five_point_orbit(1.0 / 3.0, 1)
        .unwrap()
        .shift_origin(0.5)
        .unwrap();
    let shifted = analyze_braid(&shifted_system, &tuple, 512, 1e-9).unwrap();
    assert_eq!(base.events.len(), shifted.events.len());
    assert_eq!(base.operator.dim(), shifted.operator.dim());
    assert!(
        spectra_match(&base.operator, &shifted.operator, 1e-6).unwrap(),
        "spectrum must be invariant under a shift of the base time"
    );
}

#[test]
fn paper_fixture_spectrum_clusters() {
    let analysis = analyze_braid(
        &five_point_orbit(1.0 / 3.0, 1).unwrap(),
        &tuple_at(4),
        512,
        1e-9,
    )
    .unwrap();
    let clusters = eigenvalue_clusters(&analysis.operator, EIGEN_CLUSTER_TOL).unwrap();
    assert_eq!(clusters.len(), 2, "clusters: {clusters:?}");
    assert!((clusters[0].0.re + 1.0).abs() < 1e-6 && clusters[0].0.im.abs() < 1e-6);
    assert_eq!(clusters[0].1, 20);
    assert!((clusters[1].0.re - 1.0).abs() < 1e-6 && clusters[1].0.im.abs() < 1e-6);
    assert_eq!(clusters[1].1, 140);
}

#[test]
fn doubled_braid_doubles_the_event_sequence() {
    let single = extract_flip_sequence(&five_point_orbit(1.0 / 3.0, 1).unwrap(), 512, 1e-9).unwrap();
    let double = extract_flip_sequence(&five_point_orbit(1.0 / 3.0, 2).unwrap(), 1024, 1e-9).unwrap();
    assert_eq!(double.len(), 2 * single.len());
    for (k, ev) in double.iter().enumerate() {
        let want = &single[k % single.len()];
        assert_eq!((ev.removed, ev.inserted), (want.removed, want.inserted), "event {k}");
        let want_time = 0.5 * want.t_mid() + if k < single.len() { 0.0 } else { 0.5 };
        assert!(
            (ev.t_mid() - want_time).abs() < 1e-3,
            "event {k} at {} expected near {want_time}",
            ev.t_mid()
        );
    }
}

#[test]
fn ptolemy_transport_matches_frozen_values() {
    let system = five_point_orbit(1.0 / 3.0, 1).unwrap();
    let events = extract_flip_sequence(&system, 512, 1e-9).unwrap();
    let tri0 = initial_triangulation(&system, 512).unwrap();
    let points = system.position_at(0.0).unwrap();
    let seed = euclidean_edge_lengths(&tri0, &points);
    let transported = ptolemy_propagate(&seed, &events).unwrap();

    let mut expected = BTreeMap::new();
    expected.insert(Edge::new(0, 1), 0.333_333_333_333_333_31);
    expected.insert(Edge::new(0, 2), 2.732_050_807_568_877_2);
    expected.insert(Edge::new(0, 3), 4.524_870_024_737_243_3);
    expected.insert(Edge::new(1, 2), 6.942_532_693_276_552_5);
    expected.insert(Edge::new(1, 3), 1.779_200_694_344_288_8);
    expected.insert(Edge::new(1, 4), 2.418_973_610_768_707);
    expected.insert(Edge::new(2, 3), 3.0f64.sqrt());
    expected.insert(Edge::new(2, 4), 3.0f64.sqrt());
    expected.insert(Edge::new(3, 4), 3.0f64.sqrt());

    assert_eq!(transported.assignment().len(), expected.len());
    for (e, want) in &expected {
        let got = transported.label(*e).expect("edge survives the loop");
        assert!(
            (got - want).abs() <= 1e-9 * want.abs().max(1.0),
            "label of {e}: got {got}, expected {want}"
        );
    }

    // Transporting back along the reversed, inverted sequence recovers the
    // seed labeling.
    let reversed: Vec<_> = events.iter().rev().map(|ev| ev.inverse()).collect();
    let back = ptolemy_propagate(&transported, &reversed).unwrap();
    for (e, &want) in seed.assignment() {
        let got = back.label(*e).expect("edge set is restored");
        assert!(
            (got - want).abs() <= 1e-9 * want.abs().max(1.0),
            "roundtrip label of {e}: got {got}, expected {want}"
        );
    }
}

#[test]
fn persistent_degeneracy_is_reported_not_looped() {
    // Four points pinned on one circle for all time: every sample is
    // degenerate, so extraction must fail cleanly.
    let mut strands: Vec<Trajectory> = (0..4)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / 4.0;
            Trajectory::stationary(Point::new(angle.cos(), angle.sin()))
        })
        .collect();
    strands.push(Trajectory::circular(Point::new(4.0, 0.0), 0.25, 0.0, std::f64::consts::TAU));
    let system = StrandSystem::new(strands).unwrap();
    let got = extract_flip_sequence(&system, 64, 1e-9);
    assert!(
        matches!(got, Err(Error::DegenerateConfiguration { .. })),
        "expected a degenerate-configuration error, got {got:?}"
    );
}

#[test]
fn piecewise_linear_orbit_gives_the_same_invariant() {
    // Replace the moving point's circular orbit by a square loop through
    // (1/3, 0), (0, 1/3), (-1/3, 0), (0, -1/3): an isotopic piecewise-linear
    // braid, so the composed operator must agree entrywise with the smooth
    // fixture's.
    let r = 1.0 / 3.0;
    let waypoints = [
        Point::new(r, 0.0),
        Point::new(0.0, r),
        Point::new(-r, 0.0),
        Point::new(0.0, -r),
        Point::new(r, 0.0),
    ];
    let square_orbit = Trajectory::new(
        (0..4)
            .map(|leg| Segment::Linear {
                t0: leg as f64 / 4.0,
                t1: (leg + 1) as f64 / 4.0,
                from: waypoints[leg],
                to: waypoints[leg + 1],
            })
            .collect(),
    )
    .unwrap();
    let strands = vec![
        Trajectory::stationary(Point::new(0.0, 0.0)),
        square_orbit,
        Trajectory::stationary(Point::new(-0.5, 3.0f64.sqrt() / 2.0)),
        Trajectory::stationary(Point::new(-0.5, -(3.0f64.sqrt()) / 2.0)),
        Trajectory::stationary(Point::new(1.0, 0.0)),
    ];
    let system = StrandSystem::new(strands).unwrap();

    let tuple = tuple_at(4);
    let linear = analyze_braid(&system, &tuple, 1024, 1e-9).unwrap();
    let smooth = analyze_braid(&five_point_orbit(1.0 / 3.0, 1).unwrap(), &tuple, 512, 1e-9).unwrap();
    assert_eq!(linear.operator.dim(), 160);
    assert!(
        braidflip::matrices_match(
            linear.operator.matrix(),
            smooth.operator.matrix(),
            1e-9,
            1e-7
        ),
        "piecewise-linear orbit must give the same operator, deviation {:.3e}",
        braidflip::max_entry_deviation(linear.operator.matrix(), smooth.operator.matrix())
    );
}
