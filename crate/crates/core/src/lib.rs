//! Exact chain complexes for cyclopermutohedra, bi-cyclopermutohedra and
//! polygon-linkage moduli spaces, with discrete Morse theory and homology.

pub mod bicyclopermutohedron;
pub mod cli;
pub mod complex;
pub mod cp_morse;
pub mod cyclopermutohedron;
pub mod discrete_morse;
pub mod homology;
pub mod linkage;
pub mod partitions;
pub mod sparse;

/// Upper bound on `n` for the expensive builders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceGuard {
    pub max_n: usize,
}

impl ResourceGuard {
    pub const DEFAULT_MAX_N: usize = 8;

    pub fn unlimited() -> Self {
        Self { max_n: usize::MAX }
    }

    pub fn allows(&self, n: usize) -> bool {
        n <= self.max_n
    }
}

impl Default for ResourceGuard {
    fn default() -> Self {
        Self {
            max_n: Self::DEFAULT_MAX_N,
        }
    }
}
