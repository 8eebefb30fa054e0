//! Parallel shot dispatch.
//!
//! Shots derive their streams from `seed ^ shot_index`, so batches can run
//! on any number of workers and still reproduce the sequential histograms
//! bit for bit.

use mbqc_core::gadget::GateGadget;
use mbqc_core::grover::{grover_shot, Oracle};
use mbqc_core::histogram::{render_bits, ShotHistogram};
use mbqc_core::pattern::{run_pattern, RunOptions};
use mbqc_core::ubqc::{ubqc_shot, ProtocolMode, SessionRecord, UbqcRun};
use mbqc_core::{InputSpec, Result, RngStream};
use rayon::prelude::*;

pub fn parallel_grover(oracle: Oracle, shots: u64, seed: u64) -> Result<ShotHistogram> {
    let outcomes: Result<Vec<[u8; 2]>> = (0..shots)
        .into_par_iter()
        .map(|shot| grover_shot(oracle, seed, shot))
        .collect();
    let mut hist = ShotHistogram::new(seed);
    for bits in outcomes? {
        hist.record(render_bits(&bits));
    }
    Ok(hist)
}

pub fn parallel_gadget(
    gadget: &GateGadget,
    inputs: &[InputSpec],
    options: &RunOptions,
    shots: u64,
    seed: u64,
) -> Result<ShotHistogram> {
    let outcomes: Result<Vec<Vec<u8>>> = (0..shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng = RngStream::for_shot(seed, shot);
            run_pattern(
                &gadget.graph,
                &gadget.flow,
                &gadget.pattern,
                inputs,
                &mut rng,
                options,
            )
            .map(|run| run.outputs)
        })
        .collect();
    let mut hist = ShotHistogram::new(seed);
    for bits in outcomes? {
        hist.record(render_bits(&bits));
    }
    Ok(hist)
}

pub fn parallel_ubqc(oracle: Oracle, shots: u64, seed: u64, mode: ProtocolMode) -> Result<UbqcRun> {
    let sessions: Result<Vec<SessionRecord>> = (0..shots)
        .into_par_iter()
        .map(|shot| ubqc_shot(oracle, seed, shot, mode, None))
        .collect();
    let sessions = sessions?;
    let mut client = ShotHistogram::new(seed);
    let mut server_view = ShotHistogram::new(seed);
    for session in &sessions {
        client.record(render_bits(&session.client_output));
        server_view.record(render_bits(&session.server_view_output));
    }
    Ok(UbqcRun {
        client,
        server_view,
        sessions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use mbqc_core::grover::run_grover;
    use mbqc_core::ubqc::run_ubqc_grover;

    #[test]
    fn parallel_grover_matches_sequential() {
        let oracle = Oracle::parse("10").unwrap();
        let par = parallel_grover(oracle, 512, 99).unwrap();
        let seq = run_grover(oracle, 512, 99).unwrap();
        assert_eq!(par, seq);
    }

    #[test]
    fn parallel_ubqc_matches_sequential() {
        let oracle = Oracle::parse("01").unwrap();
        let par = parallel_ubqc(oracle, 256, 5, ProtocolMode::Faithful).unwrap();
        let seq = run_ubqc_grover(oracle, 256, 5, ProtocolMode::Faithful).unwrap();
        assert_eq!(par.client, seq.client);
        assert_eq!(par.server_view, seq.server_view);
        assert_eq!(par.sessions.len(), seq.sessions.len());
        assert_eq!(par.sessions[0], seq.sessions[0]);
    }
}
