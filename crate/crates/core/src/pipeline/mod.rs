//! Streaming construction of the two-dimensional cluster state.
//!
//! Each clock tick injects four squeezed wave packets, runs them through the
//! five-beam-splitter network, and emits the four detector modes of one
//! macronode. The two optical delay lines are temporal rewiring: a mode
//! created on the short-delay beam at clock `k` meets the network again at
//! clock `k+1`, one on the long-delay beam at clock `k+N`.
//!
//! The wiring below is frozen so that the derived nullifiers come out exactly
//! in the published six-term form; the regression tests in `tests/` assert
//! this rather than assuming it. Source modes are created directly under the
//! detector id they will eventually own:
//!
//! ```text
//! clock k injects  (A,k)  p-squeezed   (B,k+1) x-squeezed
//!                  (C,k+N) p-squeezed  (D,k)   x-squeezed
//! BS-1 ((B,k+1),(A,k))  minus-on-first    BS-2 ((C,k+N),(D,k)) minus-on-second
//! BS-3 ((B,k+1),(C,k+N)) minus-on-second
//! BS-4 ((A,k),(B,k))     minus-on-second  BS-5 ((C,k),(D,k))   minus-on-second
//! ```
//!
//! The delay lines start filled with vacuum, so the first `N` macronodes are
//! boundary (transient) and excluded from verification statistics.

mod batch;
mod forms;
mod nullifier;
mod sampling;

pub use batch::batch_oracle;
pub use forms::FormTracker;
pub use nullifier::{nullifier_coeffs, NullifierKind, NullifierSpec, NullifierTerm};
pub use sampling::{
    nullifier_sample_records, sample_frames, Basis, NullifierSampleRecord, SampleTable,
};

use crate::error::{Error, Result};
use crate::gaussian::{beamsplitter_50, squeezer, BsOrientation, GaussianState, SymplecticOp};
use crate::mode::{mode, ModeId, Spatial};
use crate::variance_db;
use serde::{Deserialize, Serialize};

/// Optical losses along the generation and detection paths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum LossModel {
    /// No loss anywhere.
    Ideal,
    /// A single transmission applied to every beam just before detection.
    GlobalDetection(f64),
    /// Separate transmissions per segment: at the source, inside each delay
    /// line, and per detection path.
    PerSegment {
        source: [f64; 4],
        short_delay: f64,
        long_delay: f64,
        detection: [f64; 4],
    },
}

impl LossModel {
    fn validate(&self) -> Result<()> {
        let check = |eta: f64| -> Result<()> {
            if (0.0..=1.0).contains(&eta) {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "transmission {eta} outside [0, 1]"
                )))
            }
        };
        match self {
            LossModel::Ideal => Ok(()),
            LossModel::GlobalDetection(eta) => check(*eta),
            LossModel::PerSegment {
                source,
                short_delay,
                long_delay,
                detection,
            } => {
                for &eta in source.iter().chain(detection) {
                    check(eta)?;
                }
                check(*short_delay)?;
                check(*long_delay)
            }
        }
    }
}

/// Static configuration of one pipeline instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Inputs per helix turn (ratio of the two delay lines).
    pub n: u32,
    /// Squeezing parameter per OPO, ordered `[r_A, r_B, r_C, r_D]`.
    pub squeezing: [f64; 4],
    pub loss: LossModel,
}

impl PipelineConfig {
    pub fn ideal(n: u32, r: f64) -> Self {
        PipelineConfig {
            n,
            squeezing: [r; 4],
            loss: LossModel::Ideal,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!(
                "helix period N = {} must be at least 2",
                self.n
            )));
        }
        self.loss.validate()
    }
}

/// The operations a clock step needs from its backing store. Implemented by
/// the plain Gaussian state and by the form tracker that keeps nullifier
/// bookkeeping across evictions.
pub trait Arena {
    fn add_vacuum_mode(&mut self, id: ModeId) -> Result<()>;
    fn has_mode(&self, id: ModeId) -> bool;
    fn two_mode(&mut self, op: &SymplecticOp, a: ModeId, b: ModeId) -> Result<()>;
    fn one_mode(&mut self, op: &SymplecticOp, a: ModeId) -> Result<()>;
    fn loss(&mut self, id: ModeId, eta: f64) -> Result<()>;
    fn live_modes(&self) -> usize;
}

impl Arena for GaussianState {
    fn add_vacuum_mode(&mut self, id: ModeId) -> Result<()> {
        self.add_vacuum(&[id])
    }
    fn has_mode(&self, id: ModeId) -> bool {
        self.contains(id)
    }
    fn two_mode(&mut self, op: &SymplecticOp, a: ModeId, b: ModeId) -> Result<()> {
        self.apply_symplectic(op, &[a, b])
    }
    fn one_mode(&mut self, op: &SymplecticOp, a: ModeId) -> Result<()> {
        self.apply_symplectic(op, &[a])
    }
    fn loss(&mut self, id: ModeId, eta: f64) -> Result<()> {
        self.apply_loss(id, eta)
    }
    fn live_modes(&self) -> usize {
        self.num_modes()
    }
}

/// Run one clock tick of the frozen network on `arena`, emitting macronode
/// `k`. Returns the four detector mode ids.
pub fn clock_step(arena: &mut impl Arena, cfg: &PipelineConfig, k: u32) -> Result<[ModeId; 4]> {
    use Spatial::*;
    let n = cfg.n;
    let [ra, rb, rc, rd] = cfg.squeezing;
    let (m_a, m_d) = (mode(A, k), mode(D, k));
    let (m_b_out, m_c_out) = (mode(B, k + 1), mode(C, k + n));

    // inject the macronode's four squeezed packets
    for (id, r) in [(m_a, -ra), (m_b_out, rb), (m_c_out, -rc), (m_d, rd)] {
        arena.add_vacuum_mode(id)?;
        arena.one_mode(&squeezer(r), id)?;
    }
    if let LossModel::PerSegment { source, .. } = &cfg.loss {
        arena.loss(m_a, source[0])?;
        arena.loss(m_b_out, source[1])?;
        arena.loss(m_c_out, source[2])?;
        arena.loss(m_d, source[3])?;
    }

    // square-cluster stage
    let bs_f = beamsplitter_50(BsOrientation::MinusOnFirst);
    let bs_s = beamsplitter_50(BsOrientation::MinusOnSecond);
    arena.two_mode(&bs_f, m_b_out, m_a)?;
    arena.two_mode(&bs_s, m_c_out, m_d)?;
    arena.two_mode(&bs_s, m_b_out, m_c_out)?;

    if let LossModel::PerSegment {
        short_delay,
        long_delay,
        ..
    } = &cfg.loss
    {
        arena.loss(m_b_out, *short_delay)?;
        arena.loss(m_c_out, *long_delay)?;
    }

    // delay-line partners; the lines start filled with vacuum
    let (m_b_in, m_c_in) = (mode(B, k), mode(C, k));
    if !arena.has_mode(m_b_in) {
        arena.add_vacuum_mode(m_b_in)?;
    }
    if !arena.has_mode(m_c_in) {
        arena.add_vacuum_mode(m_c_in)?;
    }
    arena.two_mode(&bs_s, m_a, m_b_in)?;
    arena.two_mode(&bs_s, m_c_in, m_d)?;

    let emitted = [m_a, m_b_in, m_c_in, m_d];
    match &cfg.loss {
        LossModel::Ideal => {}
        LossModel::GlobalDetection(eta) => {
            for &m in &emitted {
                arena.loss(m, *eta)?;
            }
        }
        LossModel::PerSegment { detection, .. } => {
            for (&m, &eta) in emitted.iter().zip(detection) {
                arena.loss(m, eta)?;
            }
        }
    }
    Ok(emitted)
}

/// Streaming pipeline over a plain Gaussian state (no eviction; callers
/// decide what to do with emitted modes).
pub struct Pipeline {
    cfg: PipelineConfig,
    state: GaussianState,
    next_k: u32,
}

impl Pipeline {
    pub fn new(cfg: PipelineConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Pipeline {
            cfg,
            state: GaussianState::empty(),
            next_k: 0,
        })
    }

    pub fn state(&self) -> &GaussianState {
        &self.state
    }

    pub fn state_mut(&mut self) -> &mut GaussianState {
        &mut self.state
    }

    pub fn next_k(&self) -> u32 {
        self.next_k
    }

    /// Advance one clock tick; returns the emitted macronode's mode ids.
    pub fn step(&mut self) -> Result<[ModeId; 4]> {
        let k = self.next_k;
        let emitted = clock_step(&mut self.state, &self.cfg, k)?;
        self.next_k += 1;
        Ok(emitted)
    }
}

/// One exact nullifier-variance row.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NullifierRecord {
    pub k: u32,
    pub kind: NullifierKind,
    pub variance: f64,
    pub db: f64,
    /// Anchors in the first `N` indices touch the vacuum that primed the
    /// delay lines and are excluded from verification statistics.
    pub boundary: bool,
}

/// Result of an exact streaming run.
#[derive(Clone, Debug)]
pub struct ExactRun {
    pub records: Vec<NullifierRecord>,
    /// Peak number of live modes ever held (bounded-memory check).
    pub max_live: usize,
}

/// Stream `k_count` macronodes, computing every completed nullifier variance
/// from the exact covariance while evicting emitted modes immediately.
///
/// Live-mode count stays below `4 (N + 2)` regardless of `k_count`.
pub fn run_exact_nullifiers(cfg: &PipelineConfig, k_count: u32) -> Result<ExactRun> {
    cfg.validate()?;
    let n = cfg.n;
    let mut tracker = FormTracker::new();
    let mut records = Vec::new();
    let mut max_live = 0usize;

    for k in 0..k_count {
        let emitted = clock_step(&mut tracker, cfg, k)?;
        max_live = max_live.max(tracker.live_modes());

        // open this clock's anchors, then fold the freshly emitted modes into
        // every open anchor they touch: k (own terms), k-1 (its k+1 terms),
        // k-N (its k+N terms)
        for kind in NullifierKind::ALL {
            tracker.open_form((k, kind))?;
        }
        let mut anchors = vec![k];
        if k >= 1 {
            anchors.push(k - 1);
        }
        if k >= n {
            anchors.push(k - n);
        }
        for &a in &anchors {
            for kind in NullifierKind::ALL {
                let spec = nullifier_coeffs(a, n, kind);
                let terms: Vec<_> = spec
                    .terms
                    .iter()
                    .filter(|t| t.mode.temporal == k)
                    .map(|t| (t.mode, t.quadrature, t.coeff))
                    .collect();
                if !terms.is_empty() {
                    tracker.accumulate((a, kind), &terms)?;
                }
            }
        }
        if k >= n {
            let a = k - n;
            for kind in NullifierKind::ALL {
                let variance = tracker.close_form((a, kind))?;
                records.push(NullifierRecord {
                    k: a,
                    kind,
                    variance,
                    db: variance_db(variance),
                    boundary: a < n,
                });
            }
        }
        tracker.evict(&emitted)?;
        max_live = max_live.max(tracker.live_modes());
    }
    records.sort_by_key(|r| (r.k, r.kind.family(), r.kind.quadrature() as u8));
    Ok(ExactRun { records, max_live })
}

/// Stream `k_count` macronodes keeping every emitted mode (desk-scale runs
/// used for streaming-vs-batch comparisons and graph extraction).
///
/// Returns the state over exactly the detector modes `(A..D, 0..k_count-1)`;
/// in-flight leftovers are marginalized out.
pub fn run_accumulate(cfg: &PipelineConfig, k_count: u32) -> Result<GaussianState> {
    cfg.validate()?;
    if k_count == 0 {
        return Err(Error::InvalidParameter("k_count must be positive".into()));
    }
    if k_count > 256 {
        return Err(Error::ResourceLimit(format!(
            "accumulating run of {k_count} macronodes exceeds desk scale (max 256)"
        )));
    }
    let mut p = Pipeline::new(cfg.clone())?;
    for _ in 0..k_count {
        p.step()?;
    }
    let leftovers: Vec<ModeId> = p
        .state()
        .modes()
        .iter()
        .copied()
        .filter(|m| m.temporal >= k_count)
        .collect();
    let mut state = p.state;
    state.remove_modes(&leftovers)?;
    let mut order: Vec<ModeId> = Vec::with_capacity(4 * k_count as usize);
    for k in 0..k_count {
        for sp in Spatial::ALL {
            order.push(mode(sp, k));
        }
    }
    state.reorder(&order)?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(PipelineConfig::ideal(1, 0.5).validate().is_err());
        assert!(PipelineConfig::ideal(2, 0.5).validate().is_ok());
        let bad = PipelineConfig {
            n: 5,
            squeezing: [0.5; 4],
            loss: LossModel::GlobalDetection(1.2),
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn window_is_constant_after_warmup() {
        let cfg = PipelineConfig::ideal(5, 0.4);
        let mut p = Pipeline::new(cfg).unwrap();
        let mut sizes = Vec::new();
        for _ in 0..20 {
            let emitted = p.step().unwrap();
            p.state_mut().remove_modes(&emitted).unwrap();
            sizes.push(p.state().num_modes());
        }
        // after warm-up the in-flight set is (B,k+1) plus N long-delay modes
        let tail: Vec<_> = sizes[8..].to_vec();
        assert!(tail.iter().all(|&s| s == tail[0]));
        assert_eq!(tail[0], 6);
    }

    #[test]
    fn r_zero_nullifiers_at_reference() {
        let cfg = PipelineConfig::ideal(3, 0.0);
        let run = run_exact_nullifiers(&cfg, 12).unwrap();
        for rec in run.records.iter().filter(|r| !r.boundary) {
            assert!(
                (rec.variance - 2.0).abs() < 1e-12,
                "k={} kind={} var={}",
                rec.k,
                rec.kind,
                rec.variance
            );
            assert!(rec.db.abs() < 1e-12);
        }
    }

    #[test]
    fn ideal_nullifiers_hit_two_e_minus_2r() {
        let r = 0.7;
        let cfg = PipelineConfig::ideal(4, r);
        let run = run_exact_nullifiers(&cfg, 16).unwrap();
        let expect = 2.0 * (-2.0 * r).exp();
        let interior: Vec<_> = run.records.iter().filter(|rec| !rec.boundary).collect();
        assert!(!interior.is_empty());
        for rec in interior {
            assert!(
                (rec.variance - expect).abs() < 1e-10,
                "k={} kind={} var={} expect={}",
                rec.k,
                rec.kind,
                rec.variance,
                expect
            );
        }
    }

    #[test]
    fn memory_bound_holds() {
        let cfg = PipelineConfig::ideal(5, 0.3);
        let run = run_exact_nullifiers(&cfg, 200).unwrap();
        assert!(
            run.max_live <= 4 * (5 + 2),
            "live modes peaked at {}",
            run.max_live
        );
    }
}
