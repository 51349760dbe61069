use serde::{Deserialize, Serialize};

/// Run-length accounting.
///
/// One operation is one candidate coalition structure whose value gets
/// computed: a construction candidate, a local-search neighbour, or a
/// path-relinking probe.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationCounter {
    pub construction: u64,
    pub local_search: u64,
    pub relink: u64,
}

impl OperationCounter {
    #[inline]
    pub fn total(&self) -> u64 {
        self.construction + self.local_search + self.relink
    }
}
