//! Non-streaming construction of the same state, used as the correctness
//! oracle for the streaming engine.
//!
//! All `4K` source packets (plus the vacuum that initially fills the delay
//! lines) are created up front; the delay lines are a static identification
//! of temporal indices (a short-delay packet created at slot `t` is the
//! `t+1` partner, a long-delay packet the `t+N` partner); then every beam
//! splitter is applied in layer order. No windowing, no eviction.

use crate::error::{Error, Result};
use crate::gaussian::{beamsplitter_50, squeezer, BsOrientation, GaussianState};
use crate::mode::{mode, ModeId, Spatial};
use crate::pipeline::{LossModel, PipelineConfig};

/// Build the full `4K`-mode detector state in one arena.
pub fn batch_oracle(cfg: &PipelineConfig, k_count: u32) -> Result<GaussianState> {
    cfg.validate()?;
    if k_count == 0 {
        return Err(Error::InvalidParameter("k_count must be positive".into()));
    }
    if k_count > 256 {
        return Err(Error::ResourceLimit(format!(
            "batch construction of {k_count} macronodes exceeds desk scale (max 256)"
        )));
    }
    use Spatial::*;
    let n = cfg.n;
    let [ra, rb, rc, rd] = cfg.squeezing;

    // every mode that will ever exist, labeled by its arrival slot:
    // short-delay packets from slot t arrive at t+1, long-delay at t+N;
    // slots 0..N-1 of the C line and slot 0 of the B line are primer vacuum
    let mut all: Vec<ModeId> = Vec::new();
    for t in 0..k_count {
        all.push(mode(A, t));
        all.push(mode(D, t));
    }
    for t in 0..=k_count {
        all.push(mode(B, t));
    }
    for t in 0..k_count + n {
        all.push(mode(C, t));
    }
    let mut state = GaussianState::vacuum(&all)?;

    // squeeze the source packets (primers stay vacuum)
    for t in 0..k_count {
        state.apply_symplectic(&squeezer(-ra), &[mode(A, t)])?;
        state.apply_symplectic(&squeezer(rb), &[mode(B, t + 1)])?;
        state.apply_symplectic(&squeezer(-rc), &[mode(C, t + n)])?;
        state.apply_symplectic(&squeezer(rd), &[mode(D, t)])?;
        if let LossModel::PerSegment { source, .. } = &cfg.loss {
            state.apply_loss(mode(A, t), source[0])?;
            state.apply_loss(mode(B, t + 1), source[1])?;
            state.apply_loss(mode(C, t + n), source[2])?;
            state.apply_loss(mode(D, t), source[3])?;
        }
    }

    let bs_f = beamsplitter_50(BsOrientation::MinusOnFirst);
    let bs_s = beamsplitter_50(BsOrientation::MinusOnSecond);

    // layer 1: the three square-cluster splitters of every slot
    for t in 0..k_count {
        state.apply_symplectic(&bs_f, &[mode(B, t + 1), mode(A, t)])?;
        state.apply_symplectic(&bs_s, &[mode(C, t + n), mode(D, t)])?;
        state.apply_symplectic(&bs_s, &[mode(B, t + 1), mode(C, t + n)])?;
        if let LossModel::PerSegment {
            short_delay,
            long_delay,
            ..
        } = &cfg.loss
        {
            state.apply_loss(mode(B, t + 1), *short_delay)?;
            state.apply_loss(mode(C, t + n), *long_delay)?;
        }
    }

    // layer 2: the two delay-line splitters of every detection slot
    for k in 0..k_count {
        state.apply_symplectic(&bs_s, &[mode(A, k), mode(B, k)])?;
    }
    for k in 0..k_count {
        state.apply_symplectic(&bs_s, &[mode(C, k), mode(D, k)])?;
    }

    for k in 0..k_count {
        match &cfg.loss {
            LossModel::Ideal => {}
            LossModel::GlobalDetection(eta) => {
                for sp in Spatial::ALL {
                    state.apply_loss(mode(sp, k), *eta)?;
                }
            }
            LossModel::PerSegment { detection, .. } => {
                for (sp, &eta) in Spatial::ALL.iter().zip(detection) {
                    state.apply_loss(mode(*sp, k), eta)?;
                }
            }
        }
    }

    // drop the packets still inside the delay lines
    let leftovers: Vec<ModeId> = state
        .modes()
        .iter()
        .copied()
        .filter(|m| m.temporal >= k_count)
        .collect();
    state.remove_modes(&leftovers)?;
    let mut order = Vec::with_capacity(4 * k_count as usize);
    for k in 0..k_count {
        for sp in Spatial::ALL {
            order.push(mode(sp, k));
        }
    }
    state.reorder(&order)?;
    Ok(state)
}
