//! Weight levels, basic intervals (blocks) and the per-shift split of blocks
//! into gaps and large intervals.
//!
//! Blocks are cut from the heaviest level downward and cover every integer
//! exponent between the heaviest and the lightest level present, so a block
//! of `l` levels always spans a weight ratio of `(1 + eps)^(l-1)` and levels
//! `l` positions apart differ by at least `(1 + eps)^l`.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::transform::{level_weight, RoundedInstance};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CascadeParams {
    pub eps: f64,
    /// Edge size bound the block length was computed for (at least 2).
    pub s: usize,
    /// Blocks per period: `k - 1` large-interval blocks and one gap.
    pub k: usize,
    /// Levels per block.
    pub l: usize,
}

/// `k = ceil(1/eps) + 1` and `l = ceil(log_{1+eps}(s/eps))`, with `s`
/// raised to 2 for instances of singleton edges.
pub fn compute_params(eps: f64, s: usize) -> Result<CascadeParams> {
    if !(eps.is_finite() && eps > 0.0 && eps < 1.0) {
        return Err(Error::Epsilon {
            eps,
            reason: "must lie in (0, 1)".into(),
        });
    }
    let s = s.max(2);
    let inv = 1.0 / eps;
    let k = (inv - 1e-9 * inv).ceil() as usize + 1;
    let target = s as f64 / eps;
    let mut l = 1u32;
    while level_weight(eps, l) < target {
        l += 1;
    }
    Ok(CascadeParams {
        eps,
        s,
        k,
        l: l as usize,
    })
}

/// Distinct exponents of `r`, heaviest first.
pub fn weight_levels(r: &RoundedInstance) -> Vec<u32> {
    let mut levels = r.exponents.clone();
    levels.sort_unstable_by(|a, b| b.cmp(a));
    levels.dedup();
    levels
}

/// Inclusive exponent range, `hi >= lo`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub hi: u32,
    pub lo: u32,
}

impl Block {
    pub fn len(&self) -> usize {
        (self.hi - self.lo) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, level: u32) -> bool {
        self.lo <= level && level <= self.hi
    }
}

/// A maximal run of consecutive non-gap blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LargeInterval {
    pub blocks: Range<usize>,
    pub hi: u32,
    pub lo: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftPartition {
    pub x: usize,
    pub params: CascadeParams,
    /// Heaviest block first.
    pub blocks: Vec<Block>,
    pub gap_flags: Vec<bool>,
    /// Heaviest first; interval `j` of the cascade is `intervals[j - 1]`.
    pub intervals: Vec<LargeInterval>,
    block_interval: Vec<Option<usize>>,
}

impl ShiftPartition {
    pub fn block_of_level(&self, level: u32) -> Option<usize> {
        let top = self.blocks.first()?.hi;
        let bottom = self.blocks.last()?.lo;
        if level > top || level < bottom {
            return None;
        }
        Some((top - level) as usize / self.params.l)
    }

    /// 0-based index into `intervals`, or `None` for gap (or absent) levels.
    pub fn interval_of_level(&self, level: u32) -> Option<usize> {
        self.block_of_level(level).and_then(|b| self.block_interval[b])
    }

    pub fn is_gap_level(&self, level: u32) -> bool {
        self.block_of_level(level).is_some_and(|b| self.gap_flags[b])
    }
}

/// Block `b` is a gap for shift `x` iff `b ≡ k - 1 - x (mod k)`.
pub fn is_gap_block(b: usize, k: usize, x: usize) -> bool {
    b % k == (k - 1 - x) % k
}

pub fn build_shift_partition(levels: &[u32], params: &CascadeParams, x: usize) -> ShiftPartition {
    assert!(x < params.k, "shift {x} out of range 0..{}", params.k);
    let l = params.l as u32;
    let mut blocks = Vec::new();
    if let (Some(&top), Some(&bottom)) = (levels.first(), levels.last()) {
        debug_assert!(top >= bottom);
        let mut hi = top;
        loop {
            let lo = hi.saturating_sub(l - 1).max(bottom);
            blocks.push(Block { hi, lo });
            if lo == bottom {
                break;
            }
            hi = lo - 1;
        }
    }
    let gap_flags: Vec<bool> = (0..blocks.len()).map(|b| is_gap_block(b, params.k, x)).collect();

    let mut intervals: Vec<LargeInterval> = Vec::new();
    let mut block_interval = vec![None; blocks.len()];
    let mut b = 0;
    while b < blocks.len() {
        if gap_flags[b] {
            b += 1;
            continue;
        }
        let start = b;
        while b < blocks.len() && !gap_flags[b] {
            block_interval[b] = Some(intervals.len());
            b += 1;
        }
        intervals.push(LargeInterval {
            blocks: start..b,
            hi: blocks[start].hi,
            lo: blocks[b - 1].lo,
        });
    }

    ShiftPartition {
        x,
        params: *params,
        blocks,
        gap_flags,
        intervals,
        block_interval,
    }
}
