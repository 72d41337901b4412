//! Resource caps guarding every enumeration whose cost is exponential.

use thiserror::Error;

/// Absolute ceiling on the fan-in of an object: sieves are bitmasks in a
/// `u64`, so no configuration can raise the per-object arrow budget past 64.
pub const FANIN_HARD_LIMIT: usize = 64;

/// Configurable budgets for the exponential paths.
///
/// Every operation that enumerates sieves (`2^fan-in` per object), whole
/// topologies, frame assignments, or nucleus candidates takes a `Caps` and
/// fails with [`CapExceeded`] instead of running away.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest allowed number of arrows into a single object.
    pub max_fanin: usize,
    /// Largest total arrow count for whole-topology enumeration.
    pub max_enum_arrows: usize,
    /// Largest allowed number of frame elements.
    pub max_frame: usize,
    /// Largest frame size for exhaustive nucleus enumeration.
    pub max_nuclei_frame: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_fanin: 16,
            max_enum_arrows: 5,
            max_frame: 12,
            max_nuclei_frame: 8,
        }
    }
}

impl Caps {
    /// The effective fan-in bound: the configured value, clamped to the
    /// [`FANIN_HARD_LIMIT`] imposed by the bitmask representation.
    pub fn fanin_bound(&self) -> usize {
        self.max_fanin.min(FANIN_HARD_LIMIT)
    }
}

/// A requested computation would exceed one of the configured [`Caps`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what} requires {needed}, exceeding the cap of {cap}")]
pub struct CapExceeded {
    /// What was being measured (e.g. "fan-in of object `b`").
    pub what: String,
    /// The size the computation would need.
    pub needed: usize,
    /// The configured bound.
    pub cap: usize,
}

impl CapExceeded {
    pub fn new(what: impl Into<String>, needed: usize, cap: usize) -> Self {
        CapExceeded {
            what: what.into(),
            needed,
            cap,
        }
    }
}
