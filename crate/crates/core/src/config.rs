use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Largest phase skip accepted by the optimizer.
pub const MAX_SKIP: u8 = 3;

/// Clocking and search parameters shared by every optimization step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PhaseConfig {
    /// Number of clock phases an edge may skip. An edge may span up to
    /// `skip + 1` levels without an intermediate buffer.
    pub skip: u8,
    /// Maximum fanout of one splitter.
    pub max_fanout: usize,
    /// Fanout counts up to this value get every subset enumerated in the
    /// initial level assignment; larger fanouts are sampled.
    pub enum_threshold: usize,
    /// Number of sampled fanout subsets for nodes above `enum_threshold`.
    pub subset_cap: usize,
    pub seed: u64,
    /// Level assigned to every primary input.
    pub pi_level: i64,
    /// Largest number of effective-delay assignments tried per splitter
    /// tree before falling back to a restricted family of leaf orders.
    pub order_budget: usize,
}

impl Default for PhaseConfig {
    fn default() -> Self {
        PhaseConfig {
            skip: 0,
            max_fanout: 4,
            enum_threshold: 15,
            subset_cap: 1 << 15,
            seed: 1,
            pi_level: 0,
            order_budget: 4096,
        }
    }
}

impl PhaseConfig {
    pub fn with_skip(skip: u8) -> Self {
        PhaseConfig {
            skip,
            ..PhaseConfig::default()
        }
    }

    pub fn max_fanout(mut self, x: usize) -> Self {
        self.max_fanout = x;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Maximum number of levels one edge may cross (`N = skip + 1`).
    pub fn span(&self) -> u32 {
        u32::from(self.skip) + 1
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.skip > MAX_SKIP {
            return Err(ConfigError::Skip(self.skip));
        }
        if self.max_fanout < 2 {
            return Err(ConfigError::MaxFanout(self.max_fanout));
        }
        if self.subset_cap == 0 {
            return Err(ConfigError::SubsetCap);
        }
        if self.order_budget == 0 {
            return Err(ConfigError::OrderBudget);
        }
        if self.pi_level < 0 {
            return Err(ConfigError::PiLevel(self.pi_level));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = PhaseConfig::default();
        assert_eq!(cfg.span(), 1);
        assert_eq!(cfg.subset_cap, 1 << cfg.enum_threshold);
        assert!(cfg.validate().is_ok());
        assert_eq!(PhaseConfig::with_skip(1).span(), 2);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(PhaseConfig::with_skip(4).validate().is_err());
        assert!(PhaseConfig::default().max_fanout(1).validate().is_err());
    }
}
