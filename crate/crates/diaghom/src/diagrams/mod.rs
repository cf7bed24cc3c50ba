//! Diagram combinatorics: set partitions of {1..n, 1'..n'}, composition with
//! loop counting, family membership, and annular link-state decomposition.
//!
//! Vertex labels are encoded internally as `u8` codes: unprimed `i` (1-based)
//! is `i - 1`, primed `i'` is `n + i - 1`. All public types are immutable and
//! canonically stored, so structural equality is semantic equality.

mod annular;
mod families;
mod partition;
mod text;

pub use annular::{
    build_annular, decompose_annular, link_states, rotation_diagram, AnnularDiagram,
    AnnularLinkState,
};
pub use families::{enumerate_basis, family_contains, is_planar_rectangular, DiagramFamily};
pub use partition::{compose, SetPartition};
pub use text::parse_set_partition;

use thiserror::Error;

/// Largest supported strand count. Keeps vertex codes within `u8` and blocks
/// every enumeration that could not complete anyway.
pub const MAX_STRANDS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("strand counts differ: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("strand count {0} out of range (1..={MAX_STRANDS})")]
    BadStrandCount(usize),
    #[error("not a partition of the 2n labels: {0}")]
    InvalidPartition(String),
    #[error("defect counts differ: bottom {bottom} vs top {top}")]
    DefectMismatch { bottom: usize, top: usize },
    #[error("invalid link state: {0}")]
    InvalidLinkState(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A labeled boundary vertex, `index` in 1..=n, primed meaning the top row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexLabel {
    pub index: u8,
    pub primed: bool,
}

impl VertexLabel {
    pub fn new(index: u8, primed: bool) -> Self {
        VertexLabel { index, primed }
    }

    /// Internal code for strand count `n`: unprimed `i - 1`, primed `n + i - 1`.
    pub fn code(self, n: usize) -> u8 {
        debug_assert!(self.index >= 1 && (self.index as usize) <= n);
        if self.primed {
            (n as u8) + self.index - 1
        } else {
            self.index - 1
        }
    }

    pub fn from_code(code: u8, n: usize) -> Self {
        let c = code as usize;
        debug_assert!(c < 2 * n);
        if c < n {
            VertexLabel { index: code + 1, primed: false }
        } else {
            VertexLabel { index: (c - n) as u8 + 1, primed: true }
        }
    }
}

impl std::fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.primed {
            write!(f, "{}'", self.index)
        } else {
            write!(f, "{}", self.index)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_codes_round_trip() {
        let n = 5;
        for index in 1..=n as u8 {
            for primed in [false, true] {
                let v = VertexLabel::new(index, primed);
                assert_eq!(VertexLabel::from_code(v.code(n), n), v);
            }
        }
    }

    #[test]
    fn label_display() {
        assert_eq!(VertexLabel::new(3, false).to_string(), "3");
        assert_eq!(VertexLabel::new(3, true).to_string(), "3'");
    }
}
