//! State verification: nullifier variance reports and the inseparability
//! sweep over all bipartitions.

mod vlf;

pub use vlf::{enumerate_case_table, hexad, threshold_db, vlf_bound, CaseRow, WitnessPair};

use crate::error::{Error, Result};
use crate::pipeline::NullifierKind;
use crate::variance_db;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Sufficient single-threshold criterion: every bipartition is witnessed once
/// all four nullifier variances sit below this (the worst case-table class).
pub const SUFFICIENT_DB: f64 = -4.515449934959718; // 10 log10(sqrt(2)/4)

/// Variances of the four nullifiers at one anchor index, in dB against the
/// shot-noise reference 2.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NullifierReport {
    pub k: u32,
    /// Ordered `[x1, p1, x2, p2]`.
    pub variances: [f64; 4],
    pub db: [f64; 4],
    /// Number of frames behind a sample-based estimate (`None` for exact
    /// covariance rows).
    pub sample_count: Option<u32>,
    pub stderr_db: Option<f64>,
}

pub(crate) fn kind_slot(kind: NullifierKind) -> usize {
    match kind {
        NullifierKind::X1 => 0,
        NullifierKind::P1 => 1,
        NullifierKind::X2 => 2,
        NullifierKind::P2 => 3,
    }
}

impl NullifierReport {
    pub fn from_variances(k: u32, variances: [f64; 4]) -> Self {
        let db = variances.map(variance_db);
        NullifierReport {
            k,
            variances,
            db,
            sample_count: None,
            stderr_db: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (v, d) in self.variances.iter().zip(&self.db) {
            if *v <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "nullifier variance {v} must be positive"
                )));
            }
            if (d - variance_db(*v)).abs() > 1e-9 {
                return Err(Error::InvalidParameter(
                    "dB column inconsistent with variance column".into(),
                ));
            }
        }
        if self.sample_count.is_some() && self.stderr_db.map_or(true, |s| s <= 0.0) {
            return Err(Error::InvalidParameter(
                "sample-based reports need a positive standard error".into(),
            ));
        }
        Ok(())
    }

    pub fn db_of(&self, kind: NullifierKind) -> f64 {
        self.db[kind_slot(kind)]
    }
}

/// Report lookup across anchors.
#[derive(Clone, Debug, Default)]
pub struct ReportTable {
    rows: HashMap<u32, NullifierReport>,
}

impl ReportTable {
    pub fn new(rows: Vec<NullifierReport>) -> Result<Self> {
        let mut map = HashMap::with_capacity(rows.len());
        for row in rows {
            row.validate()?;
            if map.insert(row.k, row).is_some() {
                return Err(Error::InvalidParameter("duplicate report row".into()));
            }
        }
        Ok(ReportTable { rows: map })
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn anchors(&self) -> Vec<u32> {
        let mut ks: Vec<u32> = self.rows.keys().copied().collect();
        ks.sort_unstable();
        ks
    }

    pub fn get(&self, k: u32) -> Option<&NullifierReport> {
        self.rows.get(&k)
    }

    fn db_at(&self, k: i64, kind: NullifierKind) -> Option<f64> {
        if k < 0 {
            return None;
        }
        self.rows.get(&(k as u32)).map(|r| r.db_of(kind))
    }
}

/// Inseparability verdict for one anchor.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub k: u32,
    pub verified: bool,
    /// Smallest `threshold - max(pair dB)` over all 62 bipartitions;
    /// positive means every condition holds with room to spare.
    pub margin_db: f64,
    /// Threshold class of the binding bipartition.
    pub binding_class_db: f64,
    /// Family and canonical mask of the binding bipartition.
    pub binding_family: u8,
    pub binding_mask: u8,
    /// Whether the headline sufficient criterion (all four below -4.515 dB at
    /// this anchor) holds, independent of the fine-grained sweep.
    pub sufficient_only: bool,
}

/// Run the fine-grained per-bipartition check at every anchor where the
/// required neighbor rows exist.
///
/// Returns `(verdicts, incomplete_anchors)`: anchors whose witnesses need
/// rows outside the table (the first and last few) are listed separately
/// rather than judged.
pub fn check_inseparability(
    table: &ReportTable,
    n: u32,
) -> Result<(Vec<Verdict>, Vec<u32>)> {
    if table.is_empty() {
        return Err(Error::Incomplete("report table is empty".into()));
    }
    let cases: Vec<(u8, CaseRow)> = [1u8, 2]
        .into_iter()
        .flat_map(|family| {
            enumerate_case_table(family, n)
                .into_iter()
                .map(move |row| (family, row))
        })
        .collect();
    let mut verdicts = Vec::new();
    let mut incomplete = Vec::new();
    'anchors: for k in table.anchors() {
        let mut margin = f64::INFINITY;
        let mut binding = (0.0, 1u8, 0u8);
        for (family, row) in &cases {
            let x_db = table.db_at(k as i64 + row.witness.x_offset, row.witness.x_kind);
            let p_db = table.db_at(k as i64 + row.witness.p_offset, row.witness.p_kind);
            let (x_db, p_db) = match (x_db, p_db) {
                (Some(x), Some(p)) => (x, p),
                _ => {
                    incomplete.push(k);
                    continue 'anchors;
                }
            };
            let m = row.threshold_db - x_db.max(p_db);
            if m < margin {
                margin = m;
                binding = (row.threshold_db, *family, row.mask);
            }
        }
        let report = table.get(k).expect("anchor exists");
        verdicts.push(Verdict {
            k,
            verified: margin > 0.0,
            margin_db: margin,
            binding_class_db: binding.0,
            binding_family: binding.1,
            binding_mask: binding.2,
            sufficient_only: report.db.iter().all(|&d| d < SUFFICIENT_DB),
        });
    }
    Ok((verdicts, incomplete))
}
