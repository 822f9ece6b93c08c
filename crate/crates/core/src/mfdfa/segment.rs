use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::Profile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Tiled from index 0 upward.
    Forward,
    /// Tiled from the end downward.
    Backward,
}

/// Where the segments of length `tau` sit inside a profile. Forward segments
/// come first, then backward ones, `floor(len / tau)` of each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegmentLayout {
    pub tau: usize,
    pub n_segments: usize,
    pub starts: Vec<(usize, Direction)>,
}

impl SegmentLayout {
    pub fn for_length(len: usize, tau: usize) -> Result<Self> {
        if tau < 2 {
            return Err(Error::ConfigInvalid(format!("segment length {tau} < 2")));
        }
        if tau > len {
            return Err(Error::TauTooLarge { tau, len });
        }
        let per_pass = len / tau;
        let forward = (0..per_pass).map(|k| (k * tau, Direction::Forward));
        let backward = (0..per_pass).map(|k| (len - (k + 1) * tau, Direction::Backward));
        let starts: Vec<_> = forward.chain(backward).collect();
        Ok(Self {
            tau,
            n_segments: starts.len(),
            starts,
        })
    }

    /// Half-open index ranges of every segment, in layout order.
    pub fn ranges(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        self.starts.iter().map(move |&(s, _)| s..s + self.tau)
    }
}

pub fn segment<T: Scalar>(profile: &Profile<T>, tau: usize) -> Result<SegmentLayout> {
    SegmentLayout::for_length(profile.len(), tau)
}
