//! Directed graphs as row-major adjacency bit strings.
//!
//! A graph on `n` nodes is the `n*n`-bit string where bit `i*n + j` is set
//! iff the edge `i -> j` exists. This layout is normative: the textual
//! dataset encoding, CNF edge-variable numbering, and flip positions all
//! refer to it.

use std::fmt;

use crate::bits::BitString;

/// Node-count ceiling. The generator works in the 5-30 range; 64 leaves
/// headroom while keeping edge indices within `u16`-scale arithmetic.
pub const MAX_NODES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("node count {0} out of range 1..={MAX_NODES}")]
    NodeCountOutOfRange(usize),
    #[error("edge index {index} out of range for {n}-node graph (limit {limit})")]
    PositionOutOfRange { index: usize, n: usize, limit: usize },
    #[error("duplicate flip position {0}")]
    DuplicatePosition(usize),
    #[error("node count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("bitstring length {got} does not match n^2 = {expected}")]
    BadLength { expected: usize, got: usize },
    #[error("bitstring contains non-binary character at position {0}")]
    BadCharacter(usize),
}

/// Index of a single adjacency bit; `(i, j) = (index / n, index % n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeIndex(pub usize);

impl EdgeIndex {
    pub fn from_pair(i: usize, j: usize, n: usize) -> Self {
        EdgeIndex(i * n + j)
    }

    pub fn pair(self, n: usize) -> (usize, usize) {
        (self.0 / n, self.0 % n)
    }
}

/// Immutable directed graph value; edits produce new graphs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectedGraph {
    n: usize,
    bits: BitString,
}

impl DirectedGraph {
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        check_node_count(n)?;
        Ok(DirectedGraph {
            n,
            bits: BitString::zeros(n * n),
        })
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        check_node_count(n)?;
        Ok(DirectedGraph {
            n,
            bits: BitString::from_fn(n * n, |_| true),
        })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> bool) -> Result<Self, GraphError> {
        check_node_count(n)?;
        Ok(DirectedGraph {
            n,
            bits: BitString::from_fn(n * n, f),
        })
    }

    /// Builds a graph from the low `n*n` bits of `mask` (bit `t` of the mask
    /// is adjacency bit `t`). Only valid while `n*n <= 64`; used by the
    /// exhaustive oracle scans.
    pub fn from_edge_mask(n: usize, mask: u64) -> Result<Self, GraphError> {
        check_node_count(n)?;
        if n * n > 64 {
            return Err(GraphError::NodeCountOutOfRange(n));
        }
        Self::from_fn(n, |t| mask >> t & 1 == 1)
    }

    pub fn from_bits(n: usize, bits: BitString) -> Result<Self, GraphError> {
        check_node_count(n)?;
        if bits.len() != n * n {
            return Err(GraphError::BadLength {
                expected: n * n,
                got: bits.len(),
            });
        }
        Ok(DirectedGraph { n, bits })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn bit_len(&self) -> usize {
        self.n * self.n
    }

    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.bits.get(i * self.n + j)
    }

    pub fn edge_count(&self) -> usize {
        self.bits.count_ones()
    }

    /// Returns a copy of `self` with exactly the given bit positions flipped.
    pub fn flip_bits(&self, positions: &[EdgeIndex]) -> Result<Self, GraphError> {
        let limit = self.bit_len();
        let mut out = self.bits.clone();
        for (k, &EdgeIndex(t)) in positions.iter().enumerate() {
            if t >= limit {
                return Err(GraphError::PositionOutOfRange {
                    index: t,
                    n: self.n,
                    limit,
                });
            }
            if positions[..k].contains(&EdgeIndex(t)) {
                return Err(GraphError::DuplicatePosition(t));
            }
            out.flip(t);
        }
        Ok(DirectedGraph { n: self.n, bits: out })
    }

    /// Count of differing adjacency bits.
    pub fn hamming(&self, other: &DirectedGraph) -> Result<usize, GraphError> {
        if self.n != other.n {
            return Err(GraphError::SizeMismatch(self.n, other.n));
        }
        Ok(self.bits.distance(&other.bits))
    }

    /// Row-major `'0'`/`'1'` text of length `n*n`; the normative dataset encoding.
    pub fn encode_bitstring(&self) -> String {
        self.bits.to_text()
    }

    pub fn decode_bitstring(n: usize, text: &str) -> Result<Self, GraphError> {
        check_node_count(n)?;
        if text.len() != n * n {
            return Err(GraphError::BadLength {
                expected: n * n,
                got: text.len(),
            });
        }
        let bits = BitString::parse_text(text).map_err(GraphError::BadCharacter)?;
        Ok(DirectedGraph { n, bits })
    }

    /// Relabels nodes: node `i` of the result is node `perm[i]` of `self`.
    pub fn relabel(&self, perm: &[usize]) -> DirectedGraph {
        assert_eq!(perm.len(), self.n);
        let n = self.n;
        DirectedGraph {
            n,
            bits: BitString::from_fn(n * n, |t| self.has_edge(perm[t / n], perm[t % n])),
        }
    }
}

fn check_node_count(n: usize) -> Result<(), GraphError> {
    if n == 0 || n > MAX_NODES {
        Err(GraphError::NodeCountOutOfRange(n))
    } else {
        Ok(())
    }
}

impl fmt::Debug for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DirectedGraph(n={}, {})", self.n, self.bits.to_text())
    }
}
