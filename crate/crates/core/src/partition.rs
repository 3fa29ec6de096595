use alloc::vec::Vec;

use crate::{Error, ProblemInstance, Result};

/// A total assignment of every subset to one of `k` covers (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Partition {
    k: usize,
    assignment: Vec<u32>,
}

impl Partition {
    pub fn new(k: usize, assignment: Vec<u32>) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewCovers(k));
        }
        if let Some((subset, &cover)) = assignment
            .iter()
            .enumerate()
            .find(|(_, &c)| c as usize >= k)
        {
            return Err(Error::CoverOutOfRange { subset, cover, k });
        }
        Ok(Partition { k, assignment })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn cover_of(&self, subset: usize) -> u32 {
        self.assignment[subset]
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    /// Subsets assigned to `cover`, ascending.
    pub fn members(&self, cover: u32) -> impl Iterator<Item = usize> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c == cover)
            .map(|(j, _)| j)
    }

    /// Checks that this partition was built for `instance`.
    pub fn check_against(&self, instance: &ProblemInstance) -> Result<()> {
        if self.assignment.len() != instance.num_subsets() {
            return Err(Error::PartitionLength {
                expected: instance.num_subsets(),
                got: self.assignment.len(),
            });
        }
        if self.k != instance.k() {
            return Err(Error::PartitionCovers {
                expected: instance.k(),
                got: self.k,
            });
        }
        Ok(())
    }
}
