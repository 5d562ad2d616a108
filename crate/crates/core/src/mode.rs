//! Wave-packet mode naming.
//!
//! Every mode is addressed by a spatial label (which of the four beams it
//! lives on) and a temporal index `k` (which wave packet on that beam). The
//! four modes sharing a temporal index form a macronode.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Spatial label of a beam / homodyne channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Spatial {
    A,
    B,
    C,
    D,
}

impl Spatial {
    pub const ALL: [Spatial; 4] = [Spatial::A, Spatial::B, Spatial::C, Spatial::D];

    pub fn index(self) -> usize {
        match self {
            Spatial::A => 0,
            Spatial::B => 1,
            Spatial::C => 2,
            Spatial::D => 3,
        }
    }
}

impl fmt::Display for Spatial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Spatial::A => "A",
            Spatial::B => "B",
            Spatial::C => "C",
            Spatial::D => "D",
        };
        f.write_str(s)
    }
}

/// One quadrature of a mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrature {
    X,
    P,
}

/// Identifier of a single wave-packet mode (micronode).
///
/// The ordering is temporal index first, spatial label second, so that modes
/// sort in emission order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeId {
    pub spatial: Spatial,
    pub temporal: u32,
}

impl ModeId {
    pub fn new(spatial: Spatial, temporal: u32) -> Self {
        ModeId { spatial, temporal }
    }
}

impl PartialOrd for ModeId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ModeId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.temporal, self.spatial).cmp(&(other.temporal, other.spatial))
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.spatial, self.temporal)
    }
}

/// Shorthand used throughout tests and pipeline code.
pub fn mode(spatial: Spatial, temporal: u32) -> ModeId {
    ModeId::new(spatial, temporal)
}
