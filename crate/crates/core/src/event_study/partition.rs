use serde::{Deserialize, Serialize};

use super::detect::MarketOrderEvent;
use super::StudyError;

/// Equal-count size bins.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeBins {
    /// Inclusive upper size bound of each bin.
    pub upper_bounds: Vec<u64>,
}

impl SizeBins {
    /// Bin `b` ends at the `ceil((b + 1) n / k)`-th smallest size.
    pub fn from_sizes(sizes: &[u64], n_bins: usize) -> Result<Self, StudyError> {
        if n_bins == 0 || sizes.len() < n_bins {
            return Err(StudyError::TooFewEvents {
                events: sizes.len(),
                bins: n_bins,
            });
        }
        let mut sorted = sizes.to_vec();
        sorted.sort_unstable();
        let n = sorted.len();
        let upper_bounds = (0..n_bins)
            .map(|b| sorted[((b + 1) * n).div_ceil(n_bins) - 1])
            .collect();
        Ok(SizeBins { upper_bounds })
    }

    pub fn len(&self) -> usize {
        self.upper_bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upper_bounds.is_empty()
    }

    pub fn bin_of(&self, size: u64) -> usize {
        self.upper_bounds
            .partition_point(|&u| u < size)
            .min(self.upper_bounds.len() - 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizePartition {
    pub bins: SizeBins,
    pub members: Vec<Vec<MarketOrderEvent>>,
    /// Ties collapsed at least one bin to nothing.
    pub degenerate: bool,
}

/// Splits events into `n_bins` size classes of (nearly) equal count.
pub fn partition_by_size(events: &[MarketOrderEvent], n_bins: usize) -> Result<SizePartition, StudyError> {
    let sizes: Vec<u64> = events.iter().map(|e| e.total_shares).collect();
    let bins = SizeBins::from_sizes(&sizes, n_bins)?;
    let mut members = vec![Vec::new(); n_bins];
    for e in events {
        members[bins.bin_of(e.total_shares)].push(e.clone());
    }
    let degenerate = members.iter().any(Vec::is_empty);
    Ok(SizePartition {
        bins,
        members,
        degenerate,
    })
}
