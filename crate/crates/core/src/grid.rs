//! The volume lattice and the polygonal pressure approximation.
//!
//! For resolution `n`, the lattice `{v_k}` is anchored at `v_0 = 1` and is
//! determined in both directions by
//!
//! ```text
//! G(v_k, v_{k+1}) = (p(v_k) - p(v_{k+1})) (v_{k+1} - v_k) = 1/n^2 .
//! ```
//!
//! Replacing `p` by the chord interpolant through the vertices `(v_k, p(v_k))`
//! gives the polygonal pressure `p_n`; by construction each lattice cell
//! contributes exactly `1/n` to `Phi_n(v) = \int_1^v sqrt(-p_n'(w)) dw`, so
//! `Phi_n(v_k) = k/n` holds identically and never needs floating-point
//! quadrature.
//!
//! The lattice is extended lazily on both sides; entries are computed once
//! and never recomputed, so two builds with the same inputs agree bit for bit.

use alloc::vec::Vec;
use core::fmt;

use crate::fmath;
use crate::state::GasParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridError {
    /// Queried volume lies outside the stored lattice range.
    OutOfRange,
    /// Root bracketing failed; impossible for valid `GasParams`.
    RootNotBracketed,
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::OutOfRange => write!(f, "volume outside stored lattice range"),
            GridError::RootNotBracketed => write!(f, "failed to bracket lattice recurrence root"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GridError {}

/// The lazily extended volume lattice `{v_k}` for one resolution `n`.
#[derive(Debug, Clone)]
pub struct PressureGrid {
    params: GasParams,
    n: u32,
    /// `v_k` for `k >= 0`; `up[k] = v_k`, `up[0] = 1`.
    up: Vec<f64>,
    /// `v_k` for `k < 0`; `down[m] = v_{-1-m}`.
    down: Vec<f64>,
}

impl PressureGrid {
    /// Builds the lattice covering at least `j_min ..= j_max`.
    pub fn build(params: GasParams, n: u32, j_min: i64, j_max: i64) -> Self {
        assert!(n >= 1, "resolution must be positive");
        assert!(j_min <= 0 && 0 <= j_max, "range must contain k = 0");
        let mut grid = PressureGrid {
            params,
            n,
            up: alloc::vec![1.0],
            down: Vec::new(),
        };
        grid.extend(j_min);
        grid.extend(j_max);
        grid
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn params(&self) -> &GasParams {
        &self.params
    }

    #[inline]
    pub fn k_min(&self) -> i64 {
        -(self.down.len() as i64)
    }

    #[inline]
    pub fn k_max(&self) -> i64 {
        self.up.len() as i64 - 1
    }

    /// Ensures `v_k` is stored. Previously stored entries are untouched.
    pub fn extend(&mut self, k: i64) {
        while self.k_max() < k {
            let last = *self.up.last().expect("v_0 present");
            let next = self.solve_up(last);
            self.up.push(next);
        }
        while self.k_min() > k {
            let first = if self.down.is_empty() {
                self.up[0]
            } else {
                *self.down.last().expect("nonempty")
            };
            let prev = self.solve_down(first);
            self.down.push(prev);
        }
    }

    /// `v_k`, extending the lattice if necessary.
    pub fn v(&mut self, k: i64) -> f64 {
        self.extend(k);
        self.v_stored(k).expect("just extended")
    }

    /// `v_k` if already stored.
    #[inline]
    pub fn v_stored(&self, k: i64) -> Option<f64> {
        if k >= 0 {
            self.up.get(k as usize).copied()
        } else {
            self.down.get((-k - 1) as usize).copied()
        }
    }

    /// Cell width `delta_k = v_{k+1} - v_k`, extending if necessary.
    pub fn delta(&mut self, k: i64) -> f64 {
        self.v(k + 1) - self.v(k)
    }

    /// Linear interpolation of `(v_k, p(v_k))`; exact at the vertices.
    /// The caller must have extended the lattice to cover `v`.
    pub fn poly_pressure(&self, v: f64) -> Result<f64, GridError> {
        let lo = self.v_stored(self.k_min()).ok_or(GridError::OutOfRange)?;
        let hi = self.v_stored(self.k_max()).ok_or(GridError::OutOfRange)?;
        if !(v >= lo && v <= hi) {
            return Err(GridError::OutOfRange);
        }
        // binary search for the cell k with v_k <= v <= v_{k+1}
        let (mut a, mut b) = (self.k_min(), self.k_max());
        while b - a > 1 {
            let mid = a + (b - a) / 2;
            if self.v_stored(mid).unwrap() <= v {
                a = mid;
            } else {
                b = mid;
            }
        }
        let va = self.v_stored(a).unwrap();
        if a == b {
            return Ok(self.params.pressure(va));
        }
        let vb = self.v_stored(b).unwrap();
        let pa = self.params.pressure(va);
        let pb = self.params.pressure(vb);
        Ok(pa + (pb - pa) * (v - va) / (vb - va))
    }

    /// `n^2 G(v_k, v_{k+1}) - 1` for a stored pair; certification of the
    /// recurrence residual.
    pub fn residual(&self, k: i64) -> Option<f64> {
        let a = self.v_stored(k)?;
        let b = self.v_stored(k + 1)?;
        let g = (self.params.pressure(a) - self.params.pressure(b)) * (b - a);
        Some(g * (self.n as f64) * (self.n as f64) - 1.0)
    }

    fn target(&self) -> f64 {
        1.0 / (self.n as f64 * self.n as f64)
    }

    /// Solves `G(v_lo, v) = 1/n^2` for `v > v_lo`. `G` is strictly increasing
    /// in `v` on `(v_lo, inf)`, so bracketing by geometric doubling is safe.
    fn solve_up(&self, v_lo: f64) -> f64 {
        let p_lo = self.params.pressure(v_lo);
        let g = |v: f64| (p_lo - self.params.pressure(v)) * (v - v_lo);
        let target = self.target();
        let mut hi = v_lo * 2.0;
        while g(hi) < target {
            hi *= 2.0;
        }
        let root = bisect(v_lo, hi, |v| g(v) - target);
        newton_polish(root, v_lo, hi, |v| {
            let gv = g(v) - target;
            let dgv = (p_lo - self.params.pressure(v))
                + self.params.k * self.params.gamma * fmath::powf(v, -self.params.gamma - 1.0)
                    * (v - v_lo);
            (gv, dgv)
        })
    }

    /// Solves `G(v, v_hi) = 1/n^2` for `0 < v < v_hi`; strictly decreasing in `v`.
    fn solve_down(&self, v_hi: f64) -> f64 {
        let p_hi = self.params.pressure(v_hi);
        let g = |v: f64| (self.params.pressure(v) - p_hi) * (v_hi - v);
        let target = self.target();
        let mut lo = v_hi * 0.5;
        while g(lo) < target {
            lo *= 0.5;
        }
        let root = bisect(lo, v_hi, |v| target - g(v));
        newton_polish(root, lo, v_hi, |v| {
            let gv = g(v) - target;
            let dgv = -self.params.k * self.params.gamma * fmath::powf(v, -self.params.gamma - 1.0)
                * (v_hi - v)
                - (self.params.pressure(v) - p_hi);
            (gv, dgv)
        })
    }
}

/// Bisection on a sign change of `f` over `[lo, hi]`, run to relative
/// interval width 1e-15.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    debug_assert!(f(lo) <= 0.0 && f(hi) >= 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-15 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// A couple of Newton steps clamped to the bracket; cheap residual cleanup
/// after bisection.
fn newton_polish(mut x: f64, lo: f64, hi: f64, fdf: impl Fn(f64) -> (f64, f64)) -> f64 {
    for _ in 0..3 {
        let (fx, dfx) = fdf(x);
        if dfx == 0.0 {
            break;
        }
        let next = x - fx / dfx;
        if !(next > lo && next < hi) {
            break;
        }
        if next == x {
            break;
        }
        x = next;
    }
    x
}
