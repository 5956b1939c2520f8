//! The standard-state Riemann solver.
//!
//! Data `(left, right)` with `right = (i+M+N, j+M-N)` relative to
//! `left = (i, j)` for strengths `M, N` in `{-1, 0, 1}` resolve into at most
//! one backward and one forward jump around the middle state `(i+M, j+M)`.
//! `s = (i-j)/n` is constant across the backward jump and `r = (i+j)/n`
//! across the forward jump, exactly, in integer arithmetic.
//!
//! Slopes come from the lattice formula `|lambda| = 1/(n |v_a - v_b|)` over
//! the cell the jump straddles; this equals the chord speed
//! `sqrt((p(v_b) - p(v_a)) / (v_a - v_b))` of the polygonal flux by the
//! construction of the lattice, which the tests cross-check.

use core::fmt;

use crate::grid::PressureGrid;
use crate::state::StandardState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiemannError {
    /// No `(M, N)` in `{-1,0,1}^2` connects the two states.
    IncompatibleStates,
    /// States carry different resolutions.
    MixedResolutions,
}

impl fmt::Display for RiemannError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RiemannError::IncompatibleStates => {
                write!(f, "no admissible single-step wave strengths connect the states")
            }
            RiemannError::MixedResolutions => write!(f, "states have different resolutions"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for RiemannError {}

/// Solution of one standard-state Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveFan {
    pub left: StandardState,
    pub middle: StandardState,
    pub right: StandardState,
    /// Backward strength; +1 rarefactive, -1 compressive, 0 no jump.
    pub m: i8,
    /// Forward strength.
    pub n_strength: i8,
    /// Present iff `m != 0`; always negative.
    pub backward_slope: Option<f64>,
    /// Present iff `n_strength != 0`; always positive.
    pub forward_slope: Option<f64>,
}

/// Slope of a backward jump between volume indices `j` (left) and `j+M`
/// (right): `-1/(n |v_{j+M} - v_j|) < 0`.
pub fn backward_slope(grid: &mut PressureGrid, j: i64, m: i8) -> f64 {
    debug_assert!(m == 1 || m == -1);
    let a = grid.v(j);
    let b = grid.v(j + m as i64);
    -1.0 / (grid.n() as f64 * (b - a).abs())
}

/// Slope of a forward jump whose left (middle) state has volume index
/// `j_mid` and whose right state has `j_mid - N`: `+1/(n |v_{j_mid} - v_{j_mid-N}|)`.
pub fn forward_slope(grid: &mut PressureGrid, j_mid: i64, n: i8) -> f64 {
    debug_assert!(n == 1 || n == -1);
    let a = grid.v(j_mid);
    let b = grid.v(j_mid - n as i64);
    1.0 / (grid.n() as f64 * (a - b).abs())
}

/// Solves the Riemann problem between two standard states.
pub fn solve_riemann(
    grid: &mut PressureGrid,
    left: StandardState,
    right: StandardState,
) -> Result<WaveFan, RiemannError> {
    if left.n != right.n {
        return Err(RiemannError::MixedResolutions);
    }
    // M = (delta_r)/2, N = (delta_s)/2 in index units: i+j jumps by 2M across
    // the backward wave, i-j by 2N across the forward wave.
    let dr = right.r_index() - left.r_index();
    let ds = right.s_index() - left.s_index();
    if dr % 2 != 0 || ds % 2 != 0 {
        return Err(RiemannError::IncompatibleStates);
    }
    let m = dr / 2;
    let n = ds / 2;
    if m.abs() > 1 || n.abs() > 1 {
        return Err(RiemannError::IncompatibleStates);
    }
    let (m, n) = (m as i8, n as i8);
    let middle = StandardState::new(left.n, left.i + m as i64, left.j + m as i64);
    debug_assert_eq!(middle.i + n as i64, right.i);
    debug_assert_eq!(middle.j - n as i64, right.j);
    let backward = if m != 0 {
        Some(backward_slope(grid, left.j, m))
    } else {
        None
    };
    let forward = if n != 0 {
        Some(forward_slope(grid, middle.j, n))
    } else {
        None
    };
    Ok(WaveFan {
        left,
        middle,
        right,
        m,
        n_strength: n,
        backward_slope: backward,
        forward_slope: forward,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::GasParams;

    fn grid() -> PressureGrid {
        PressureGrid::build(GasParams::new(1.0, 2.0).unwrap(), 10, -6, 6)
    }

    /// Enumeration oracle: try all nine (M, N) pairs against the index
    /// equations, independent of the solver's arithmetic.
    fn oracle_strengths(l: StandardState, r: StandardState) -> Option<(i8, i8)> {
        for m in [-1i64, 0, 1] {
            for n in [-1i64, 0, 1] {
                if l.i + m + n == r.i && l.j + m - n == r.j {
                    return Some((m as i8, n as i8));
                }
            }
        }
        None
    }

    #[test]
    fn single_backward_rarefaction() {
        let mut g = grid();
        let l = StandardState::new(10, 0, 0);
        let r = StandardState::new(10, 1, 1);
        let fan = solve_riemann(&mut g, l, r).unwrap();
        assert_eq!((fan.m, fan.n_strength), (1, 0));
        assert_eq!(fan.middle, r);
        assert!(fan.forward_slope.is_none());
        let v1 = g.v(1);
        let expect = -1.0 / (10.0 * (v1 - 1.0));
        assert_eq!(fan.backward_slope.unwrap(), expect);
        assert!((expect + 1.3405).abs() < 1e-3);
    }

    #[test]
    fn constant_state_has_no_jumps() {
        let mut g = grid();
        let l = StandardState::new(10, 2, -1);
        let fan = solve_riemann(&mut g, l, l).unwrap();
        assert_eq!((fan.m, fan.n_strength), (0, 0));
        assert_eq!(fan.middle, l);
        assert!(fan.backward_slope.is_none() && fan.forward_slope.is_none());
    }

    #[test]
    fn compression_then_rarefaction() {
        let mut g = grid();
        let l = StandardState::new(10, 0, 0);
        let r = StandardState::new(10, 0, -2);
        let fan = solve_riemann(&mut g, l, r).unwrap();
        assert_eq!((fan.m, fan.n_strength), oracle_strengths(l, r).unwrap());
        assert_eq!((fan.m, fan.n_strength), (-1, 1));
        assert_eq!(fan.middle, StandardState::new(10, -1, -1));
        assert!(fan.backward_slope.unwrap() < 0.0);
        assert!(fan.forward_slope.unwrap() > 0.0);
    }

    #[test]
    fn rejects_multi_step_data() {
        let mut g = grid();
        let l = StandardState::new(10, 0, 0);
        let r = StandardState::new(10, 4, 0);
        assert_eq!(
            solve_riemann(&mut g, l, r),
            Err(RiemannError::IncompatibleStates)
        );
        let r2 = StandardState::new(10, 1, 0); // odd index deltas
        assert_eq!(
            solve_riemann(&mut g, l, r2),
            Err(RiemannError::IncompatibleStates)
        );
    }

    #[test]
    fn slope_signs_and_cell_symmetry() {
        let mut g = grid();
        for j in -5..5 {
            for m in [-1i8, 1] {
                assert!(backward_slope(&mut g, j, m) < 0.0);
            }
            // |backward (j, M=1)| < |backward (j, M=-1)| since widths increase
            assert!(
                backward_slope(&mut g, j, 1).abs() < backward_slope(&mut g, j, -1).abs(),
                "at j={j}"
            );
            // forward and backward slopes over the same cell have equal magnitude
            let f = forward_slope(&mut g, j + 1, 1);
            let b = backward_slope(&mut g, j, 1);
            assert!(f > 0.0);
            assert!((f + b).abs() < 1e-18);
        }
    }

    #[test]
    fn rankine_hugoniot_chord_speed() {
        let mut g = grid();
        let p = *g.params();
        for j in -5..5 {
            for m in [-1i8, 1] {
                let lam = backward_slope(&mut g, j, m);
                let (va, vb) = (g.v(j + m as i64), g.v(j));
                let rh = lam * lam * (va - vb) - (p.pressure(vb) - p.pressure(va));
                assert!(
                    rh.abs() <= 1e-12 * lam * lam * (va - vb).abs(),
                    "RH residual {rh:e} at j={j}, m={m}"
                );
            }
        }
    }

    #[test]
    fn mirror_involution() {
        // reflecting x (i -> -i, swap sides) mirrors the fan and negates slopes
        let mut g = grid();
        let l = StandardState::new(10, 1, 2);
        let r = StandardState::new(10, 2, 1);
        let fan = solve_riemann(&mut g, l, r).unwrap();
        let lm = StandardState::new(10, -r.i, r.j);
        let rm = StandardState::new(10, -l.i, l.j);
        let mirror = solve_riemann(&mut g, lm, rm).unwrap();
        assert_eq!(mirror.m, fan.n_strength);
        assert_eq!(mirror.n_strength, fan.m);
        match (fan.forward_slope, mirror.backward_slope) {
            (Some(f), Some(b)) => assert!((f + b).abs() < 1e-18),
            (None, None) => {}
            _ => panic!("mirror asymmetry"),
        }
    }
}
