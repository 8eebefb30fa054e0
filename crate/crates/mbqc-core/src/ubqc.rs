//! Blind delegated execution of the Grover pattern.
//!
//! Two logical parties share one session: the client owns the planned
//! angles and two per-node secrets: an octant rotation θ baked into the
//! prepared state and an outcome-flip bit r. Each round the client sends
//! the masked angle δ = φ′ + θ + πr, the server measures in the |±_δ⟩
//! basis and returns the raw outcome, and the client unmasks it by XORing
//! r. The server observes only δ and raw outcomes, which are uniform
//! regardless of the computation.
//!
//! Two execution modes are provided. `Faithful` follows the protocol's
//! message structure: corrections are folded into δ by the client and the
//! server applies no conditional gates. `Replica` runs the whole protocol
//! as a single adaptive circuit: conditional corrections as gates, the θ/r
//! masking as explicit rotations, and the outcome flip realized by an X
//! gate plus a second measurement. Both unmask to the same results.

use crate::angle::Angle;
use crate::bits::ClassicalBits;
use crate::error::{Error, Result};
use crate::frontier::{ensure_ready, FrontierState};
use crate::graph::{InputSpec, NodePrep, OpenGraph};
use crate::grover::{build_grover_pattern, Oracle, NODE_COUNT, OUTPUT_NODES};
use crate::histogram::{render_bits, ShotHistogram};
use crate::pattern::{corrected_angle, MeasurementPattern};
use crate::rng::RngStream;
use crate::state::{OutcomeSource, StateVector};
use alloc::vec;
use alloc::vec::Vec;

/// Separates the secret-generation stream from the measurement stream of
/// the same shot.
const SECRETS_STREAM_SALT: u64 = 0x5542_5143;

/// The client's hidden per-node parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClientSecrets {
    /// Rotation octants; node `i` is prepared as `|+_{θ_i}⟩`.
    pub theta_octants: Vec<u8>,
    /// Outcome-flip bits.
    pub r: Vec<u8>,
}

impl ClientSecrets {
    /// θ ≡ 0, r ≡ 0: the protocol degenerates to the plain pattern.
    pub fn zero() -> Self {
        ClientSecrets {
            theta_octants: vec![0; NODE_COUNT],
            r: vec![0; NODE_COUNT],
        }
    }

    pub fn theta(&self, node: usize) -> Angle {
        Angle::Octant(self.theta_octants[node] % 8)
    }

    fn check_len(&self) -> Result<()> {
        if self.theta_octants.len() != NODE_COUNT || self.r.len() != NODE_COUNT {
            return Err(Error::SizeMismatch {
                expected: NODE_COUNT,
                got: self.theta_octants.len().min(self.r.len()),
            });
        }
        Ok(())
    }
}

/// Draw fresh secrets: θ uniform over the eight octants, r uniform bits.
pub fn generate_secrets(rng: &mut RngStream) -> ClientSecrets {
    let theta_octants = (0..NODE_COUNT).map(|_| rng.next_octant()).collect();
    let r = (0..NODE_COUNT).map(|_| rng.next_bit()).collect();
    ClientSecrets { theta_octants, r }
}

/// Blind initial state: H then RZ(θ_i) on every node, then the edge CZs.
pub fn blind_prepare(
    state: &mut StateVector,
    graph: &OpenGraph,
    secrets: &ClientSecrets,
) -> Result<()> {
    secrets.check_len()?;
    if state.num_qubits() != graph.node_count() {
        return Err(Error::SizeMismatch {
            expected: graph.node_count(),
            got: state.num_qubits(),
        });
    }
    for node in 0..graph.node_count() {
        state.h(node)?;
        state.rz(secrets.theta(node), node)?;
    }
    for &(a, b) in graph.edges() {
        state.cz(a, b)?;
    }
    Ok(())
}

/// δ = φ′ + θ + π·r, exact when the operands are octants.
pub fn client_delta(phi_corrected: Angle, theta: Angle, r: u8) -> Angle {
    let masked = phi_corrected + theta;
    if r & 1 == 1 {
        masked.plus_pi()
    } else {
        masked
    }
}

/// The corrected angle φ′ for `node`, computed from unmasked outcomes.
pub fn client_compute_phi(
    node: usize,
    pattern: &MeasurementPattern,
    unmasked: &ClassicalBits,
) -> Result<Angle> {
    for &dep in pattern.sx(node).iter().chain(pattern.sz(node).iter()) {
        if !unmasked.is_measured(dep) {
            return Err(Error::DependencyUnmeasured {
                node,
                dependency: dep,
            });
        }
    }
    let sx = unmasked.parity(pattern.sx(node).iter().copied())?;
    let sz = unmasked.parity(pattern.sz(node).iter().copied())?;
    Ok(corrected_angle(pattern.angle(node), sx, sz))
}

/// Measure `node` in the `|±_δ⟩` basis: RZ(−δ), H, then a Z measurement.
/// This is everything the server does with a round's message.
pub fn server_measure_delta(
    state: &mut StateVector,
    bits: &mut ClassicalBits,
    node: usize,
    delta: Angle,
    src: &mut dyn OutcomeSource,
) -> Result<u8> {
    state.rz(-delta, node)?;
    state.h(node)?;
    state.measure_z(node, src, bits)
}

/// Enumerate δ over all sixteen (θ, r) pairs for a fixed corrected angle.
///
/// Returns per-octant counts out of 16. A uniform result (two hits per
/// octant whatever φ′ is) is the angle-level blindness statement.
pub fn blindness_enumerate(phi_corrected: Angle) -> Result<[u32; 8]> {
    let Some(phi) = phi_corrected.as_octant() else {
        return Err(Error::Usage(
            "blindness enumeration needs an octant angle".into(),
        ));
    };
    let mut counts = [0u32; 8];
    for theta in 0..8u8 {
        for r in 0..2u8 {
            let delta = (phi + theta + 4 * r) % 8;
            counts[usize::from(delta)] += 1;
        }
    }
    Ok(counts)
}

/// How a session executes the protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolMode {
    /// Protocol messages: client folds corrections into δ, server applies
    /// no conditional gates, outcomes unmasked classically.
    Faithful,
    /// Single adaptive circuit: conditional corrections and θ/r
    /// rotations as gates, outcome flips via X-then-remeasure.
    Replica,
}

/// One protocol round as both parties see it.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub node: usize,
    /// Angle sent client → server.
    pub delta: Angle,
    /// Outcome returned server → client.
    pub s_raw: u8,
    /// `s_raw ^ r`, client side only.
    pub s_unmasked: u8,
}

/// Everything one session produced. The client sees all of it; the server
/// view is obtained by stripping secrets and unmasked values.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionRecord {
    pub rounds: Vec<RoundRecord>,
    pub secrets: ClientSecrets,
    /// Final result after the client's output corrections.
    pub client_output: [u8; 2],
    /// Output bits as physically measured on the server.
    pub server_output_raw: [u8; 2],
    /// Outputs as the server can best correct them from raw outcomes,
    /// the flips-omitted comparison view.
    pub server_view_output: [u8; 2],
}

/// One round as the server sees it: the masked angle and the raw outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ServerRound {
    pub node: usize,
    pub delta: Angle,
    pub s_raw: u8,
}

/// The server's complete knowledge of a session: no θ, no r, no planned
/// angle ever enters this structure.
#[derive(Debug, Clone, PartialEq)]
pub struct ServerView {
    pub rounds: Vec<ServerRound>,
    pub output_raw: [u8; 2],
    pub output_view: [u8; 2],
}

/// Either party's view of a session.
#[derive(Debug, Clone, PartialEq)]
pub enum PartyView {
    Client(SessionRecord),
    Server(ServerView),
}

impl SessionRecord {
    pub fn server_view(&self) -> ServerView {
        ServerView {
            rounds: self
                .rounds
                .iter()
                .map(|r| ServerRound {
                    node: r.node,
                    delta: r.delta,
                    s_raw: r.s_raw,
                })
                .collect(),
            output_raw: self.server_output_raw,
            output_view: self.server_view_output,
        }
    }
}

fn blind_preps(secrets: &ClientSecrets) -> Vec<NodePrep> {
    (0..NODE_COUNT)
        .map(|node| NodePrep {
            base: InputSpec::Plus,
            rotation: Some(secrets.theta(node)),
        })
        .collect()
}

/// Run one blind session over the Grover pattern.
pub fn run_ubqc_session(
    oracle: Oracle,
    secrets: &ClientSecrets,
    src: &mut dyn OutcomeSource,
    mode: ProtocolMode,
) -> Result<SessionRecord> {
    secrets.check_len()?;
    match mode {
        ProtocolMode::Faithful => faithful_session(oracle, secrets, src),
        ProtocolMode::Replica => replica_session(oracle, secrets, src),
    }
}

fn faithful_session(
    oracle: Oracle,
    secrets: &ClientSecrets,
    src: &mut dyn OutcomeSource,
) -> Result<SessionRecord> {
    let (graph, _flow, pattern) = build_grover_pattern(oracle);
    let preps = blind_preps(secrets);
    let mut engine = FrontierState::new(NODE_COUNT);
    let mut edge_done = vec![false; graph.edges().len()];
    let mut client_bits = ClassicalBits::new(NODE_COUNT);
    let mut server_bits = ClassicalBits::new(NODE_COUNT);
    let mut rounds = Vec::with_capacity(NODE_COUNT - 2);

    for node in 0..NODE_COUNT - 2 {
        // Client: corrected angle from unmasked history, then the mask.
        let phi = client_compute_phi(node, &pattern, &client_bits)?;
        let delta = client_delta(phi, secrets.theta(node), secrets.r[node]);

        // Server: measure at δ, nothing else.
        ensure_ready(&mut engine, &graph, &preps, &mut edge_done, node)?;
        engine.rz(-delta, node)?;
        engine.h(node)?;
        let s_raw = engine.measure(node, src)?;
        engine.drop_collapsed(node, s_raw)?;
        server_bits.record(node, s_raw)?;

        // Client: unmask.
        let s_unmasked = s_raw ^ (secrets.r[node] & 1);
        client_bits.record(node, s_unmasked)?;
        rounds.push(RoundRecord {
            node,
            delta,
            s_raw,
            s_unmasked,
        });
    }

    let mut client_output = [0u8; 2];
    let mut server_output_raw = [0u8; 2];
    let mut server_view_output = [0u8; 2];
    for (k, &out) in OUTPUT_NODES.iter().enumerate() {
        ensure_ready(&mut engine, &graph, &preps, &mut edge_done, out)?;
        let s_raw = engine.measure(out, src)?;
        engine.drop_collapsed(out, s_raw)?;
        server_bits.record(out, s_raw)?;
        server_output_raw[k] = s_raw;
        // The X byproduct is fixed by unmasked outcomes; the client undoes
        // it classically, the server can only use his raw record.
        client_output[k] = s_raw ^ client_bits.parity(pattern.sx(out).iter().copied())?;
        server_view_output[k] = s_raw ^ server_bits.parity(pattern.sx(out).iter().copied())?;
    }

    Ok(SessionRecord {
        rounds,
        secrets: secrets.clone(),
        client_output,
        server_output_raw,
        server_view_output,
    })
}

fn replica_session(
    oracle: Oracle,
    secrets: &ClientSecrets,
    src: &mut dyn OutcomeSource,
) -> Result<SessionRecord> {
    let (graph, _flow, pattern) = build_grover_pattern(oracle);
    let preps = blind_preps(secrets);
    let mut engine = FrontierState::new(NODE_COUNT);
    let mut edge_done = vec![false; graph.edges().len()];
    // The single classical register of the circuit: holds post-flip values.
    let mut register = ClassicalBits::new(NODE_COUNT);
    let mut rounds = Vec::with_capacity(NODE_COUNT - 2);

    for node in 0..NODE_COUNT - 2 {
        // Bookkeeping for the transcript; the gates below realize the same δ.
        let phi = client_compute_phi(node, &pattern, &register)?;
        let delta = client_delta(phi, secrets.theta(node), secrets.r[node]);

        ensure_ready(&mut engine, &graph, &preps, &mut edge_done, node)?;
        // πr rotation, then −θ, then the corrected measurement of φ.
        if secrets.r[node] & 1 == 1 {
            engine.z(node)?;
        }
        engine.rz(-secrets.theta(node), node)?;
        for &j in pattern.sz(node) {
            if register.get(j)? == 1 {
                engine.z(node)?;
            }
        }
        for &j in pattern.sx(node) {
            if register.get(j)? == 1 {
                engine.x(node)?;
            }
        }
        engine.rz(-pattern.angle(node), node)?;
        engine.h(node)?;
        let s_raw = engine.measure(node, src)?;
        // Outcome flip: the register cannot be edited directly, so apply X
        // and measure again.
        let recorded = if secrets.r[node] & 1 == 1 {
            engine.x(node)?;
            engine.measure(node, src)?
        } else {
            s_raw
        };
        engine.drop_collapsed(node, recorded)?;
        register.record(node, recorded)?;
        rounds.push(RoundRecord {
            node,
            delta,
            s_raw,
            s_unmasked: recorded,
        });
    }

    let mut client_output = [0u8; 2];
    let mut server_output_raw = [0u8; 2];
    let mut server_view_output = [0u8; 2];
    for (k, &out) in OUTPUT_NODES.iter().enumerate() {
        ensure_ready(&mut engine, &graph, &preps, &mut edge_done, out)?;
        for &j in pattern.sx(out) {
            if register.get(j)? == 1 {
                engine.x(out)?;
            }
        }
        let s = engine.measure(out, src)?;
        engine.drop_collapsed(out, s)?;
        register.record(out, s)?;
        client_output[k] = s;
        server_output_raw[k] = s;
        // Omitting the flips conditions the output X on the raw outcomes
        // instead, which differs from the client's result by the parity of
        // r over the X dependencies.
        let r_parity: u8 = pattern
            .sx(out)
            .iter()
            .map(|&j| secrets.r[j] & 1)
            .sum::<u8>()
            & 1;
        server_view_output[k] = s ^ r_parity;
    }

    Ok(SessionRecord {
        rounds,
        secrets: secrets.clone(),
        client_output,
        server_output_raw,
        server_view_output,
    })
}

/// Aggregated result of a multi-shot blind run.
#[derive(Debug, Clone)]
pub struct UbqcRun {
    /// Unmasked, corrected outcomes: the computation's actual result.
    pub client: ShotHistogram,
    /// What the server can reconstruct without the secrets.
    pub server_view: ShotHistogram,
    pub sessions: Vec<SessionRecord>,
}

/// Run `shots` sessions with fresh secrets per shot.
pub fn run_ubqc_grover(
    oracle: Oracle,
    shots: u64,
    seed: u64,
    mode: ProtocolMode,
) -> Result<UbqcRun> {
    run_shots(oracle, shots, seed, mode, None)
}

/// Run `shots` sessions with the same fixed secrets.
pub fn run_ubqc_grover_with_secrets(
    oracle: Oracle,
    secrets: &ClientSecrets,
    shots: u64,
    seed: u64,
    mode: ProtocolMode,
) -> Result<UbqcRun> {
    run_shots(oracle, shots, seed, mode, Some(secrets))
}

/// One shot of a multi-shot run: derive the shot's measurement stream (and,
/// unless fixed, a dedicated secrets stream) and execute a session. Shots
/// are independent, so any execution order reproduces the same run.
pub fn ubqc_shot(
    oracle: Oracle,
    seed: u64,
    shot_index: u64,
    mode: ProtocolMode,
    fixed_secrets: Option<&ClientSecrets>,
) -> Result<SessionRecord> {
    let secrets = match fixed_secrets {
        Some(s) => s.clone(),
        None => generate_secrets(&mut RngStream::new(seed ^ shot_index ^ SECRETS_STREAM_SALT)),
    };
    let mut src = RngStream::for_shot(seed, shot_index);
    run_ubqc_session(oracle, &secrets, &mut src, mode)
}

fn run_shots(
    oracle: Oracle,
    shots: u64,
    seed: u64,
    mode: ProtocolMode,
    fixed_secrets: Option<&ClientSecrets>,
) -> Result<UbqcRun> {
    let mut client = ShotHistogram::new(seed);
    let mut server_view = ShotHistogram::new(seed);
    let mut sessions = Vec::with_capacity(shots as usize);
    for shot in 0..shots {
        let session = ubqc_shot(oracle, seed, shot, mode, fixed_secrets)?;
        client.record(render_bits(&session.client_output));
        server_view.record(render_bits(&session.server_view_output));
        sessions.push(session);
    }
    Ok(UbqcRun {
        client,
        server_view,
        sessions,
    })
}
