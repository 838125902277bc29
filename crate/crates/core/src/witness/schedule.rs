use serde::Serialize;

use crate::{Error, Result};

/// Number of inner steps used to stand in for the limit `ℓ → ∞` when one
/// level hands its thresholds to the next. The neglected tail is below
/// `C·2^{−L/4}/(1 − 2^{−1/4}) ≈ 6·C·10⁻¹⁶` for `L = 200`.
const LIMIT_TRUNCATION: usize = 200;

/// Thresholds and step sizes for the refinement.
///
/// `f` decreases and `h` increases in both arguments:
///
/// - `f(1,0) = C_f + 2^{−1/2}(1 − 2^{−1/4})^{−2}·C_f`, `h(1,0) = 0`;
/// - `f(k,ℓ−1) − f(k,ℓ) = C_f·2^{−(k+ℓ)/4}` and
///   `h(k,ℓ) − h(k,ℓ−1) = C_h·2^{−(k+ℓ)/4}`;
/// - `f(k,0)`, `h(k,0)` continue from the limit of level `k − 1`.
///
/// The step weights are `α(k,ℓ) = 16^{−k−ℓ}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Schedule {
    pub c_f: f64,
    pub c_h: f64,
    /// Levels `k = 1…outer`.
    pub outer: u32,
    /// Substeps `ℓ = 1…inner` per level.
    pub inner: usize,
    /// Coordinates reserved for the initial direction.
    pub initial_cell: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Self {
            c_f: 0.05,
            c_h: 0.15,
            outer: 2,
            inner: 2,
            initial_cell: 48,
        }
    }
}

/// Coordinate cells: `J⁰` for the initial direction and `J^k_ℓ` for the
/// perturbation at substep `(k, ℓ)`. Cells are disjoint and cover `0..n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    pub initial: Vec<usize>,
    /// `cells[k−1][ℓ−1] = J^k_ℓ`.
    pub cells: Vec<Vec<Vec<usize>>>,
}

impl Partition {
    pub fn cell(&self, k: u32, l: usize) -> &[usize] {
        &self.cells[k as usize - 1][l - 1]
    }
}

impl Schedule {
    pub fn validate(&self) -> Result<()> {
        if !(self.c_f > 0.0) || !(self.c_h > 0.0) || !self.c_f.is_finite() || !self.c_h.is_finite() {
            return Err(Error::InvalidInput("C_f and C_h must be positive".into()));
        }
        if self.outer > 20 || self.inner > 64 {
            return Err(Error::InvalidInput("too many refinement levels".into()));
        }
        if self.initial_cell < 2 {
            return Err(Error::InvalidInput("initial cell needs at least 2 coordinates".into()));
        }
        Ok(())
    }

    fn step(k: u32, l: usize) -> f64 {
        (-((k as f64 + l as f64) / 4.0)).exp2()
    }

    fn level_start(&self, k: u32, c: f64, sign: f64, base: f64) -> f64 {
        let mut v = base;
        for kk in 1..k {
            for l in 1..=LIMIT_TRUNCATION {
                v += sign * c * Self::step(kk, l);
            }
        }
        v
    }

    /// Value of `2^{−1/2}(1 − 2^{−1/4})^{−2} = Σ_{k,ℓ≥1} 2^{−(k+ℓ)/4}`.
    pub fn total_weight() -> f64 {
        let r = (-0.25f64).exp2();
        0.5f64.sqrt() / (1.0 - r).powi(2)
    }

    pub fn f(&self, k: u32, l: usize) -> f64 {
        assert!(k >= 1, "levels start at 1");
        let start = self.level_start(k, self.c_f, -1.0, self.c_f * (1.0 + Self::total_weight()));
        (1..=l).fold(start, |v, j| v - self.c_f * Self::step(k, j))
    }

    pub fn h(&self, k: u32, l: usize) -> f64 {
        assert!(k >= 1, "levels start at 1");
        let start = self.level_start(k, self.c_h, 1.0, 0.0);
        (1..=l).fold(start, |v, j| v + self.c_h * Self::step(k, j))
    }

    pub fn alpha(k: u32, l: usize) -> f64 {
        16f64.powi(-(k as i32) - l as i32)
    }

    /// `J⁰ = 0..initial_cell`; the remaining coordinates are shared among
    /// the `outer·inner` cells in proportion to `2^{−(k+ℓ)/8}` (floors, with
    /// the remainder handed out in order). Without cells, `J⁰ = 0..n`.
    pub fn partition(&self, n: usize) -> Result<Partition> {
        self.validate()?;
        let cells = self.outer as usize * self.inner;
        if n < self.initial_cell + 2 * cells {
            return Err(Error::InvalidInput(format!(
                "dimension {n} too small: need {} initial coordinates and 2 per cell for {cells} cells",
                self.initial_cell
            )));
        }
        if cells == 0 {
            // no refinement: the initial direction may use every coordinate
            return Ok(Partition {
                initial: (0..n).collect(),
                cells: Vec::new(),
            });
        }
        let rest = n - self.initial_cell;
        let weights: Vec<f64> = (1..=self.outer)
            .flat_map(|k| (1..=self.inner).map(move |l| (-((k as f64 + l as f64) / 8.0)).exp2()))
            .collect();
        let total: f64 = weights.iter().sum();
        let mut sizes: Vec<usize> = weights
            .iter()
            .map(|w| ((w / total) * rest as f64).floor().max(2.0) as usize)
            .collect();
        let mut used: usize = sizes.iter().sum();
        while used > rest {
            let i = sizes.iter().enumerate().max_by_key(|s| *s.1).map(|s| s.0).unwrap();
            sizes[i] -= 1;
            used -= 1;
        }
        let mut idx = 0;
        while used < rest {
            sizes[idx % cells] += 1;
            used += 1;
            idx += 1;
        }
        let mut next = self.initial_cell;
        let mut out = Vec::with_capacity(self.outer as usize);
        let mut it = sizes.into_iter();
        for _ in 0..self.outer {
            let mut row = Vec::with_capacity(self.inner);
            for _ in 0..self.inner {
                let s = it.next().unwrap();
                row.push((next..next + s).collect());
                next += s;
            }
            out.push(row);
        }
        Ok(Partition {
            initial: (0..self.initial_cell).collect(),
            cells: out,
        })
    }
}
