/// Resource limits for enumerations and backtracking searches.
///
/// The guards exist so that an accidental request at the wrong scale
/// (say all planes of `F_3^8`) fails fast with the offending count
/// instead of running unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of subspaces a single enumeration may produce.
    pub max_subspaces: u64,
    /// Maximum number of nodes a backtracking search may visit.
    pub max_nodes: u64,
}

pub const DEFAULT_MAX_SUBSPACES: u64 = 10_000_000;
pub const DEFAULT_MAX_NODES: u64 = 10_000_000;

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_subspaces: DEFAULT_MAX_SUBSPACES,
            max_nodes: DEFAULT_MAX_NODES,
        }
    }
}

impl Budget {
    pub fn new(max_subspaces: u64, max_nodes: u64) -> Self {
        Budget {
            max_subspaces,
            max_nodes,
        }
    }
}
