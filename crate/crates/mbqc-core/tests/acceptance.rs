//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured values (visible with `--nocapture`).
//!
//! Run with `cargo test -p mbqc-core --test acceptance`.

use mbqc_core::gadget::{gadget, GadgetKind, ScenarioExpectation};
use mbqc_core::graph::derive_correction_sets;
use mbqc_core::grover::{
    closed_form_correction_sets, grover_flow, grover_graph, reference_circuit_grover, run_grover,
    Oracle,
};
use mbqc_core::pattern::{
    enumerate_branches, exact_output_distribution, run_pattern, Basis, MeasurementPattern,
    RunOptions,
};
use mbqc_core::state::MIN_BRANCH_WEIGHT;
use mbqc_core::stats::uniformity_test_4;
use mbqc_core::ubqc::{
    blindness_enumerate, generate_secrets, run_ubqc_grover, run_ubqc_grover_with_secrets,
    run_ubqc_session, ClientSecrets, ProtocolMode,
};
use mbqc_core::{
    Angle, ClassicalBits, Complex64, Flow, InputSpec, OpenGraph, OutcomeSource, RngStream,
    StateVector,
};
use std::time::Instant;

const EXACT_TOL: f64 = 1e-9;

fn random_qubit(rng: &mut RngStream) -> (Complex64, Complex64) {
    let a = Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5);
    let b = Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5);
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    (a / norm, b / norm)
}

/// Criterion 1: every oracle returns its marked bitstring in all 1024
/// shots, in under 10 seconds for the four of them.
#[test]
fn criterion_01_grover_determinism() {
    let start = Instant::now();
    for oracle in Oracle::all() {
        let hist = run_grover(oracle, 1024, 7).unwrap();
        assert!(hist.is_consistent());
        assert_eq!(
            hist.counts.get(&oracle.marked_bitstring()),
            Some(&1024),
            "oracle {} gave {:?}",
            oracle.marked_bitstring(),
            hist.counts
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("criterion 01 PASS: 4 oracles x 1024 shots, all marked, in {elapsed:?}");
}

/// Criterion 2: H gadget reads 0 with exact probability 1/2; a 1024-shot
/// sample stays within ±0.05.
#[test]
fn criterion_02_h_gadget() {
    let g = gadget(GadgetKind::H);
    let exact = exact_output_distribution(
        &g.graph,
        &g.flow,
        &g.pattern,
        &[InputSpec::Zero],
        &RunOptions::default(),
    )
    .unwrap();
    assert!(
        (exact[0] - 0.5).abs() < EXACT_TOL,
        "exact P(0) = {}",
        exact[0]
    );

    let mut zeros = 0u32;
    for shot in 0..1024u64 {
        let mut rng = RngStream::for_shot(2025, shot);
        let run = run_pattern(
            &g.graph,
            &g.flow,
            &g.pattern,
            &[InputSpec::Zero],
            &mut rng,
            &RunOptions::default(),
        )
        .unwrap();
        zeros += u32::from(run.outputs[0] == 0);
    }
    let freq = f64::from(zeros) / 1024.0;
    assert!((freq - 0.5).abs() <= 0.05, "sampled {freq}");
    println!(
        "criterion 02 PASS: exact P(0) = {}, sampled {freq}",
        exact[0]
    );
}

/// Criterion 3: T gadget on |+⟩ reads 0 in the X basis with exact
/// probability cos²(π/8); a 1024-shot sample stays within ±0.04.
#[test]
fn criterion_03_t_gadget() {
    let expected = (std::f64::consts::PI / 8.0).cos().powi(2);
    let g = gadget(GadgetKind::T);
    let options = RunOptions {
        output_z_corrections: true,
        output_bases: Some(vec![Basis::X]),
        ..RunOptions::default()
    };
    let exact =
        exact_output_distribution(&g.graph, &g.flow, &g.pattern, &[InputSpec::Plus], &options)
            .unwrap();
    assert!(
        (exact[0] - expected).abs() < EXACT_TOL,
        "exact P(0) = {}, want {expected}",
        exact[0]
    );

    let mut zeros = 0u32;
    for shot in 0..1024u64 {
        let mut rng = RngStream::for_shot(2026, shot);
        let run = run_pattern(
            &g.graph,
            &g.flow,
            &g.pattern,
            &[InputSpec::Plus],
            &mut rng,
            &options,
        )
        .unwrap();
        zeros += u32::from(run.outputs[0] == 0);
    }
    let freq = f64::from(zeros) / 1024.0;
    assert!((freq - expected).abs() <= 0.04, "sampled {freq}");
    println!(
        "criterion 03 PASS: exact P(0) = {}, sampled {freq}",
        exact[0]
    );
}

/// Criterion 4: X, Z, and CZ gadget scenarios are deterministic across
/// 1024 shots each.
#[test]
fn criterion_04_deterministic_gadgets() {
    for kind in [GadgetKind::X, GadgetKind::Z, GadgetKind::Cz] {
        let scenario = kind.paper_scenario();
        let ScenarioExpectation::PointMass(ref expected) = scenario.expected else {
            panic!("scenario must be deterministic");
        };
        let g = gadget(kind);
        let options = RunOptions {
            output_z_corrections: true,
            output_bases: Some(scenario.output_bases.clone()),
            ..RunOptions::default()
        };
        for shot in 0..1024u64 {
            let mut rng = RngStream::for_shot(2027, shot);
            let run = run_pattern(
                &g.graph,
                &g.flow,
                &g.pattern,
                &scenario.inputs,
                &mut rng,
                &options,
            )
            .unwrap();
            let got = mbqc_core::histogram::render_bits(&run.outputs);
            assert_eq!(&got, expected, "{kind:?} shot {shot}");
        }
    }
    println!("criterion 04 PASS: X, Z, CZ all deterministic over 1024 shots");
}

/// Criterion 5: each gadget matches its dense unitary on 100 seeded random
/// inputs with per-branch fidelity above 1 − 1e−9, in under 5 seconds.
#[test]
fn criterion_05_gadget_matrix_equivalence() {
    let start = Instant::now();
    let mut rng = RngStream::new(505);
    let kinds = [
        GadgetKind::H,
        GadgetKind::X,
        GadgetKind::Z,
        GadgetKind::T,
        GadgetKind::Rz(Angle::radians(1.0)),
        GadgetKind::Cz,
    ];
    let mut worst = 1.0f64;
    for kind in kinds {
        let g = gadget(kind);
        for _ in 0..100 {
            let inputs: Vec<InputSpec> = (0..kind.arity())
                .map(|_| {
                    let (a, b) = random_qubit(&mut rng);
                    InputSpec::Arbitrary(a, b)
                })
                .collect();
            let options = RunOptions {
                output_z_corrections: true,
                ..RunOptions::default()
            };
            let branches =
                enumerate_branches(&g.graph, &g.flow, &g.pattern, &inputs, &options).unwrap();
            let mut total = 0.0;
            for branch in &branches {
                total += branch.weight;
                assert!(branch.weight > MIN_BRANCH_WEIGHT);
                let mut reference = StateVector::new(g.graph.node_count()).unwrap();
                for node in 0..g.graph.node_count() {
                    if !g.graph.is_output(node) && branch.bits.get(node).unwrap() == 1 {
                        reference.x(node).unwrap();
                    }
                }
                for (k, spec) in inputs.iter().enumerate() {
                    let out = g.graph.outputs()[k];
                    let InputSpec::Arbitrary(a, b) = *spec else {
                        unreachable!()
                    };
                    reference
                        .apply_one_qubit_unitary(out, &[[a, -b.conj()], [b, a.conj()]])
                        .unwrap();
                }
                kind.apply_dense(&mut reference, g.graph.outputs()).unwrap();
                let fidelity = branch.state.fidelity(&reference).unwrap();
                worst = worst.min(fidelity);
                assert!(fidelity > 1.0 - EXACT_TOL, "{kind:?}: fidelity {fidelity}");
            }
            assert!((total - 1.0).abs() < EXACT_TOL);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("criterion 05 PASS: worst branch fidelity {worst} in {elapsed:?}");
}

/// Criterion 6: flow-derived correction sets equal the closed-form sets on
/// all 18 grid nodes.
#[test]
fn criterion_06_correction_set_oracle() {
    let derived = derive_correction_sets(&grover_graph(), &grover_flow()).unwrap();
    let closed = closed_form_correction_sets();
    for i in 0..18 {
        assert_eq!(derived.sx[i], closed.sx[i], "S_X({i})");
        assert_eq!(derived.sz[i], closed.sz[i], "S_Z({i})");
    }
    println!("criterion 06 PASS: derived sets equal closed form on 18/18 nodes");
}

/// Criterion 7: the blind run recovers the marked string as a point mass
/// for every oracle and 20 random secret draws, in under 60 seconds.
#[test]
fn criterion_07_ubqc_correctness() {
    let start = Instant::now();
    for oracle in Oracle::all() {
        for secret_seed in 0..20u64 {
            let secrets = generate_secrets(&mut RngStream::new(700 + secret_seed));
            let run = run_ubqc_grover_with_secrets(
                oracle,
                &secrets,
                64,
                900 + secret_seed,
                ProtocolMode::Faithful,
            )
            .unwrap();
            assert!(
                run.client.is_point_mass_on(&oracle.marked_bitstring()),
                "oracle {} seed {secret_seed}: {:?}",
                oracle.marked_bitstring(),
                run.client.counts
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!("criterion 07 PASS: 4 oracles x 20 secret draws x 64 shots in {elapsed:?}");
}

/// Criterion 8: the masked angle δ is exactly uniform over the octants,
/// two of the sixteen (θ, r) pairs per octant, for every corrected angle.
#[test]
fn criterion_08_blindness_angle_level() {
    for k in 0..8 {
        let counts = blindness_enumerate(Angle::octant(k)).unwrap();
        assert_eq!(counts, [2u32; 8], "octant {k}");
    }
    println!("criterion 08 PASS: delta uniform (2/16 per octant) for all 8 corrected angles");
}

/// Criterion 9: the server-view histogram over 4096 shots passes the
/// 4-bin chi-square uniformity test at significance 0.01 for every oracle.
#[test]
fn criterion_09_blindness_outcome_level() {
    for oracle in Oracle::all() {
        let run = run_ubqc_grover(oracle, 4096, 909, ProtocolMode::Faithful).unwrap();
        let counts =
            ["00", "01", "10", "11"].map(|k| run.server_view.counts.get(k).copied().unwrap_or(0));
        let test = uniformity_test_4(&counts);
        assert!(
            test.passes,
            "oracle {}: statistic {} p {}",
            oracle.marked_bitstring(),
            test.statistic,
            test.p_value
        );
        println!(
            "criterion 09 PASS: oracle {} server view {:?} chi2 {:.3} p {:.3}",
            oracle.marked_bitstring(),
            counts,
            test.statistic,
            test.p_value
        );
    }
}

/// Criterion 10: faithful and replica sessions produce identical client
/// results when fed the same outcome schedule.
#[test]
fn criterion_10_mode_equivalence() {
    struct Schedule {
        bits: Vec<u8>,
        pos: usize,
    }
    impl OutcomeSource for Schedule {
        fn sample_bit(&mut self, prob_zero: f64) -> u8 {
            if prob_zero >= 1.0 - 1e-9 {
                0
            } else if prob_zero <= 1e-9 {
                1
            } else {
                let b = self.bits[self.pos];
                self.pos += 1;
                b
            }
        }
    }

    let mut rng = RngStream::new(1010);
    for oracle in Oracle::all() {
        for _ in 0..25 {
            let secrets = generate_secrets(&mut rng);
            let bits: Vec<u8> = (0..16).map(|_| rng.next_bit()).collect();
            let mut a = Schedule {
                bits: bits.clone(),
                pos: 0,
            };
            let mut b = Schedule { bits, pos: 0 };
            let faithful =
                run_ubqc_session(oracle, &secrets, &mut a, ProtocolMode::Faithful).unwrap();
            let replica =
                run_ubqc_session(oracle, &secrets, &mut b, ProtocolMode::Replica).unwrap();
            assert_eq!(faithful.client_output, replica.client_output);
            for (x, y) in faithful.rounds.iter().zip(replica.rounds.iter()) {
                assert_eq!(x.delta, y.delta);
                assert_eq!(x.s_raw, y.s_raw);
                assert_eq!(x.s_unmasked, y.s_unmasked);
            }
        }
    }

    // Whole-histogram form: identical per-shot streams, identical results.
    for oracle in Oracle::all() {
        let f = run_ubqc_grover(oracle, 256, 44, ProtocolMode::Faithful).unwrap();
        let r = run_ubqc_grover(oracle, 256, 44, ProtocolMode::Replica).unwrap();
        assert_eq!(f.client.counts, r.client.counts);
    }
    println!("criterion 10 PASS: faithful == replica on shared schedules (4 oracles x 25)");
}

/// Criterion 11: with θ ≡ 0 and r ≡ 0 the blind run reproduces the plain
/// Grover run seed for seed, histogram for histogram.
#[test]
fn criterion_11_degenerate_secrets() {
    for oracle in Oracle::all() {
        let plain = run_grover(oracle, 1024, 7).unwrap();
        for mode in [ProtocolMode::Faithful, ProtocolMode::Replica] {
            let blind = run_ubqc_grover_with_secrets(oracle, &ClientSecrets::zero(), 1024, 7, mode)
                .unwrap();
            assert_eq!(blind.client.counts, plain.counts, "{mode:?}");
            assert_eq!(blind.client.shots, plain.shots);
            assert_eq!(blind.client.seed, plain.seed);
        }
    }
    println!("criterion 11 PASS: zero-secret UBQC == plain Grover, both modes, 4 oracles");
}

/// Supplementary: the pattern and the reference circuit agree, and
/// disabling corrections destroys the determinism they provide.
#[test]
fn supplementary_reference_and_correction_necessity() {
    for oracle in Oracle::all() {
        let dist = reference_circuit_grover(oracle).unwrap();
        assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((dist[oracle.marked_index()] - 1.0).abs() < EXACT_TOL);
    }
    let hist =
        mbqc_core::grover::run_grover_opts(Oracle::parse("00").unwrap(), 4096, 13, false).unwrap();
    for key in ["00", "01", "10", "11"] {
        assert!(
            hist.frequency(key) <= 0.35,
            "{key}: {}",
            hist.frequency(key)
        );
    }
    println!("supplementary PASS: circuit reference point masses; uncorrected run near-uniform");
}

/// Supplementary: a malformed pattern cannot sneak through construction.
#[test]
fn supplementary_pattern_validation() {
    let graph = OpenGraph::new(2, &[(0, 1)], &[0], &[1]).unwrap();
    let flow = Flow::new(2, &[(0, 0)]).unwrap();
    assert!(MeasurementPattern::from_flow(&graph, &flow, vec![Angle::ZERO; 2]).is_err());
    let bits = ClassicalBits::new(1);
    assert!(bits.get(0).is_err());
    println!("supplementary PASS: structural validation rejects malformed flow");
}
