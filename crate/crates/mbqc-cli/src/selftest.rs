//! The built-in invariant suite behind `mbqc selftest`.
//!
//! Every check prints one `ok`/`FAIL` line; the command exits nonzero if
//! any check fails, naming the failures. The hidden
//! `--disable-corrections` flag runs the pattern executions without their
//! conditional corrections, which must make the correction-dependent
//! checks fail, proving the suite actually verifies them.

use crate::cli::SelftestArgs;
use anyhow::Result;
use mbqc_core::gadget::{gadget, GadgetKind};
use mbqc_core::graph::{derive_correction_sets, validate_flow};
use mbqc_core::grover::{
    closed_form_correction_sets, grover_flow, grover_graph, run_grover_opts, Oracle, NODE_COUNT,
};
use mbqc_core::pattern::{enumerate_branches, RunOptions};
use mbqc_core::stats::uniformity_test_4;
use mbqc_core::ubqc::{
    blindness_enumerate, generate_secrets, run_ubqc_grover, run_ubqc_grover_with_secrets,
    ClientSecrets, ProtocolMode,
};
use mbqc_core::{Angle, Flow, InputSpec, RngStream, StateVector, AMPLITUDE_TOLERANCE};
use std::time::Instant;

type CheckOutcome = std::result::Result<String, String>;

struct Check {
    name: &'static str,
    run: fn(bool) -> CheckOutcome,
}

const CHECKS: &[Check] = &[
    Check {
        name: "norm preservation",
        run: norm_preservation,
    },
    Check {
        name: "gate unitarity",
        run: gate_unitarity,
    },
    Check {
        name: "commutation identities",
        run: commutation_identities,
    },
    Check {
        name: "cz propagation identities",
        run: cz_propagation,
    },
    Check {
        name: "flow validation",
        run: flow_validation,
    },
    Check {
        name: "correction-set closed form",
        run: correction_sets,
    },
    Check {
        name: "gadget equivalence",
        run: gadget_equivalence,
    },
    Check {
        name: "blindness enumeration",
        run: blindness_enumeration,
    },
    Check {
        name: "grover determinism",
        run: grover_determinism,
    },
    Check {
        name: "correction necessity",
        run: correction_necessity,
    },
    Check {
        name: "ubqc correctness",
        run: ubqc_correctness,
    },
    Check {
        name: "ubqc degeneracy",
        run: ubqc_degeneracy,
    },
    Check {
        name: "server-view uniformity",
        run: server_view_uniformity,
    },
];

pub fn cmd_selftest(args: SelftestArgs) -> Result<bool> {
    let corrections = !args.disable_corrections;
    let started = Instant::now();
    let mut failures = Vec::new();
    for check in CHECKS {
        match (check.run)(corrections) {
            Ok(detail) => println!("ok   {:<27} {detail}", check.name),
            Err(detail) => {
                println!("FAIL {:<27} {detail}", check.name);
                failures.push(check.name);
            }
        }
    }
    let elapsed = started.elapsed();
    if failures.is_empty() {
        println!("selftest: {} checks passed in {elapsed:?}", CHECKS.len());
        Ok(true)
    } else {
        println!(
            "selftest: {BAD}/{ALL} checks failed in {elapsed:?}: {names}",
            BAD = failures.len(),
            ALL = CHECKS.len(),
            names = failures.join(", ")
        );
        Ok(false)
    }
}

/// A reproducible non-trivial state to probe identities on.
fn scrambled_state(qubits: usize, seed: u64) -> StateVector {
    let mut rng = RngStream::new(seed);
    let mut state = StateVector::new(qubits).unwrap();
    for q in 0..qubits {
        state.h(q).unwrap();
        state.rz(Angle::radians(rng.next_f64() * 6.0), q).unwrap();
    }
    for q in 1..qubits {
        state.cz(q - 1, q).unwrap();
    }
    for q in 0..qubits {
        state.rz(Angle::radians(rng.next_f64() * 6.0), q).unwrap();
        state.h(q).unwrap();
    }
    state
}

fn norm_preservation(_: bool) -> CheckOutcome {
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let state = scrambled_state(4, seed);
        worst = worst.max((state.norm_sqr() - 1.0).abs());
    }
    if worst < AMPLITUDE_TOLERANCE {
        Ok(format!("worst |norm-1| = {worst:.2e}"))
    } else {
        Err(format!("norm drifted by {worst:.2e}"))
    }
}

fn gate_unitarity(_: bool) -> CheckOutcome {
    let mut worst = 0.0f64;
    for seed in 20..40u64 {
        let reference = scrambled_state(3, seed);
        let theta = Angle::radians(seed as f64 * 0.37);
        let mut state = reference.clone();
        state.h(0).unwrap();
        state.h(0).unwrap();
        state.x(1).unwrap();
        state.x(1).unwrap();
        state.z(2).unwrap();
        state.z(2).unwrap();
        state.cz(0, 2).unwrap();
        state.cz(0, 2).unwrap();
        state.rz(theta, 1).unwrap();
        state.rz(-theta, 1).unwrap();
        for (a, b) in state.amplitudes().iter().zip(reference.amplitudes()) {
            worst = worst.max((a - b).norm());
        }
    }
    if worst < AMPLITUDE_TOLERANCE {
        Ok(format!("worst inverse-pair residue = {worst:.2e}"))
    } else {
        Err(format!("inverse pairs drifted by {worst:.2e}"))
    }
}

fn commutation_identities(_: bool) -> CheckOutcome {
    let mut worst = 0.0f64;
    for seed in 40..55u64 {
        let base = scrambled_state(2, seed);
        // HZ = XH
        let mut lhs = base.clone();
        lhs.z(0).unwrap();
        lhs.h(0).unwrap();
        let mut rhs = base.clone();
        rhs.h(0).unwrap();
        rhs.x(0).unwrap();
        for (a, b) in lhs.amplitudes().iter().zip(rhs.amplitudes()) {
            worst = worst.max((a - b).norm());
        }
        // HX = ZH
        let mut lhs = base.clone();
        lhs.x(0).unwrap();
        lhs.h(0).unwrap();
        let mut rhs = base.clone();
        rhs.h(0).unwrap();
        rhs.z(0).unwrap();
        for (a, b) in lhs.amplitudes().iter().zip(rhs.amplitudes()) {
            worst = worst.max((a - b).norm());
        }
        // XZ = -ZX
        let mut lhs = base.clone();
        lhs.z(0).unwrap();
        lhs.x(0).unwrap();
        let mut rhs = base;
        rhs.x(0).unwrap();
        rhs.z(0).unwrap();
        for (a, b) in lhs.amplitudes().iter().zip(rhs.amplitudes()) {
            worst = worst.max((a + b).norm());
        }
    }
    if worst < AMPLITUDE_TOLERANCE {
        Ok(format!("worst residue = {worst:.2e}"))
    } else {
        Err(format!("identity violated by {worst:.2e}"))
    }
}

fn cz_propagation(_: bool) -> CheckOutcome {
    let mut worst = 0.0f64;
    for seed in 55..70u64 {
        let base = scrambled_state(2, seed);
        // CZ(X⊗I) = (X⊗Z)CZ
        let mut lhs = base.clone();
        lhs.x(0).unwrap();
        lhs.cz(0, 1).unwrap();
        let mut rhs = base.clone();
        rhs.cz(0, 1).unwrap();
        rhs.x(0).unwrap();
        rhs.z(1).unwrap();
        for (a, b) in lhs.amplitudes().iter().zip(rhs.amplitudes()) {
            worst = worst.max((a - b).norm());
        }
        // CZ(I⊗X) = (Z⊗X)CZ
        let mut lhs = base.clone();
        lhs.x(1).unwrap();
        lhs.cz(0, 1).unwrap();
        let mut rhs = base;
        rhs.cz(0, 1).unwrap();
        rhs.x(1).unwrap();
        rhs.z(0).unwrap();
        for (a, b) in lhs.amplitudes().iter().zip(rhs.amplitudes()) {
            worst = worst.max((a - b).norm());
        }
    }
    if worst < AMPLITUDE_TOLERANCE {
        Ok(format!("worst residue = {worst:.2e}"))
    } else {
        Err(format!("identity violated by {worst:.2e}"))
    }
}

fn flow_validation(_: bool) -> CheckOutcome {
    let graph = grover_graph();
    if !validate_flow(&graph, &grover_flow()).map_err(|e| e.to_string())? {
        return Err("grid flow rejected".into());
    }
    let mut shifted: Vec<(usize, usize)> = (0..16).map(|i| (i, i + 4)).collect();
    shifted[14] = (14, 16);
    shifted[15] = (15, 17);
    let corrupted = Flow::new(NODE_COUNT, &shifted).map_err(|e| e.to_string())?;
    match validate_flow(&graph, &corrupted) {
        Ok(false) => Ok("grid flow accepted, shifted flow rejected".into()),
        Ok(true) => Err("corrupted flow accepted".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn correction_sets(_: bool) -> CheckOutcome {
    let derived =
        derive_correction_sets(&grover_graph(), &grover_flow()).map_err(|e| e.to_string())?;
    let closed = closed_form_correction_sets();
    for i in 0..NODE_COUNT {
        if derived.sx[i] != closed.sx[i] || derived.sz[i] != closed.sz[i] {
            return Err(format!("sets differ at node {i}"));
        }
    }
    Ok("derived sets equal closed form on 18/18 nodes".into())
}

fn gadget_equivalence(_: bool) -> CheckOutcome {
    let mut rng = RngStream::new(4242);
    let mut worst = 1.0f64;
    for kind in [
        GadgetKind::H,
        GadgetKind::X,
        GadgetKind::Z,
        GadgetKind::T,
        GadgetKind::Rz(Angle::radians(2.2)),
        GadgetKind::Cz,
    ] {
        let g = gadget(kind);
        for _ in 0..10 {
            let inputs: Vec<InputSpec> = (0..kind.arity())
                .map(|_| {
                    let a = mbqc_core::Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5);
                    let b = mbqc_core::Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5);
                    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
                    InputSpec::Arbitrary(a / norm, b / norm)
                })
                .collect();
            let options = RunOptions {
                output_z_corrections: true,
                ..RunOptions::default()
            };
            let branches = enumerate_branches(&g.graph, &g.flow, &g.pattern, &inputs, &options)
                .map_err(|e| e.to_string())?;
            for branch in &branches {
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
                kind.apply_dense(&mut reference, g.graph.outputs())
                    .map_err(|e| e.to_string())?;
                worst = worst.min(branch.state.fidelity(&reference).unwrap());
            }
        }
    }
    if worst > 1.0 - AMPLITUDE_TOLERANCE {
        Ok(format!("worst branch fidelity = {worst:.12}"))
    } else {
        Err(format!("branch fidelity dropped to {worst}"))
    }
}

fn blindness_enumeration(_: bool) -> CheckOutcome {
    for k in 0..8 {
        let counts = blindness_enumerate(Angle::octant(k)).map_err(|e| e.to_string())?;
        if counts != [2u32; 8] {
            return Err(format!("octant {k}: {counts:?}"));
        }
    }
    Ok("delta exactly uniform for all 8 corrected angles".into())
}

fn grover_determinism(corrections: bool) -> CheckOutcome {
    for oracle in Oracle::all() {
        let hist = run_grover_opts(oracle, 256, 7, corrections).map_err(|e| e.to_string())?;
        if !hist.is_point_mass_on(&oracle.marked_bitstring()) {
            return Err(format!(
                "oracle {}: {:?}",
                oracle.marked_bitstring(),
                hist.counts
            ));
        }
    }
    Ok("4 oracles x 256 shots all marked".into())
}

fn correction_necessity(corrections: bool) -> CheckOutcome {
    // The corrected run must be deterministic...
    let oracle = Oracle::parse("00").unwrap();
    let corrected = run_grover_opts(oracle, 512, 19, corrections).map_err(|e| e.to_string())?;
    if !corrected.is_point_mass_on("00") {
        return Err(format!(
            "corrected run is not a point mass: {:?}",
            corrected.counts
        ));
    }
    // ...while the uncorrected run must scatter.
    let uncorrected = run_grover_opts(oracle, 4096, 19, false).map_err(|e| e.to_string())?;
    for key in ["00", "01", "10", "11"] {
        if uncorrected.frequency(key) > 0.35 {
            return Err(format!(
                "uncorrected run concentrated on {key}: {}",
                uncorrected.frequency(key)
            ));
        }
    }
    Ok("corrections deterministic on, near-uniform off".into())
}

fn ubqc_correctness(_: bool) -> CheckOutcome {
    for oracle in Oracle::all() {
        for secret_seed in 0..2u64 {
            let secrets = generate_secrets(&mut RngStream::new(3000 + secret_seed));
            let run = run_ubqc_grover_with_secrets(
                oracle,
                &secrets,
                32,
                41 + secret_seed,
                ProtocolMode::Faithful,
            )
            .map_err(|e| e.to_string())?;
            if !run.client.is_point_mass_on(&oracle.marked_bitstring()) {
                return Err(format!(
                    "oracle {} secrets {secret_seed}: {:?}",
                    oracle.marked_bitstring(),
                    run.client.counts
                ));
            }
        }
    }
    Ok("4 oracles x 2 secret draws unmask to the marked string".into())
}

fn ubqc_degeneracy(_: bool) -> CheckOutcome {
    let oracle = Oracle::parse("10").unwrap();
    let plain = run_grover_opts(oracle, 256, 23, true).map_err(|e| e.to_string())?;
    for mode in [ProtocolMode::Faithful, ProtocolMode::Replica] {
        let blind = run_ubqc_grover_with_secrets(oracle, &ClientSecrets::zero(), 256, 23, mode)
            .map_err(|e| e.to_string())?;
        if blind.client.counts != plain.counts {
            return Err(format!("{mode:?} diverges from the plain run"));
        }
    }
    Ok("zero-secret runs equal the plain run, both modes".into())
}

fn server_view_uniformity(_: bool) -> CheckOutcome {
    let run = run_ubqc_grover(
        Oracle::parse("00").unwrap(),
        4096,
        31,
        ProtocolMode::Faithful,
    )
    .map_err(|e| e.to_string())?;
    let counts =
        ["00", "01", "10", "11"].map(|k| run.server_view.counts.get(k).copied().unwrap_or(0));
    let test = uniformity_test_4(&counts);
    if test.passes {
        Ok(format!(
            "chi2 {:.3}, p {:.3} over {counts:?}",
            test.statistic, test.p_value
        ))
    } else {
        Err(format!(
            "server view non-uniform: chi2 {:.3}, p {:.4}",
            test.statistic, test.p_value
        ))
    }
}
