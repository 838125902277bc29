use crate::randwalk::TimeGrid;
use crate::{Error, Result};

/// Block anchors `a₀ = 0, aᵢ = 2^{i−1}` for `i = 1…blocks`, and the interior
/// points `I^i_k = {2^{p/2^k}·aᵢ : p = 1…2^k−1}` of each block (empty for
/// block 0).
///
/// All times are computed as `exp2(i − 1 + p/2^k)`, so a point shared by
/// two levels has the same bits in both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockGrid {
    blocks: usize,
}

impl BlockGrid {
    pub fn new(blocks: usize) -> Result<Self> {
        if blocks == 0 || blocks > 1000 {
            return Err(Error::InvalidInput(format!("block count must be in 1..=1000, got {blocks}")));
        }
        Ok(Self { blocks })
    }

    /// Number of blocks `[aᵢ, aᵢ₊₁]`, `i = 0…blocks−1`.
    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn anchor(&self, i: usize) -> f64 {
        assert!(i <= self.blocks, "anchor index out of range");
        if i == 0 {
            0.0
        } else {
            ((i - 1) as f64).exp2()
        }
    }

    /// Point `t_{i,p} = 2^{i−1+p/2^k}` of block `i ≥ 1`; `p = 0` and `p = 2^k`
    /// give the block's endpoints.
    pub fn point(&self, i: usize, p: usize, k: u32) -> f64 {
        assert!(i >= 1, "block 0 has no interior points");
        ((i - 1) as f64 + p as f64 / (1u64 << k) as f64).exp2()
    }

    pub fn interior(&self, i: usize, k: u32) -> Vec<f64> {
        if i == 0 {
            return Vec::new();
        }
        (1..(1usize << k)).map(|p| self.point(i, p, k)).collect()
    }

    /// Anchors `a₁…a_blocks` together with every `I^i_k`.
    pub fn times(&self, k: u32) -> TimeGrid {
        let mut t: Vec<f64> = (1..=self.blocks).map(|i| self.anchor(i)).collect();
        for i in 1..self.blocks {
            t.extend(self.interior(i, k));
        }
        t.sort_by(f64::total_cmp);
        TimeGrid::new(t).expect("dyadic block times are increasing")
    }
}
