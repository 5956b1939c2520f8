//! Gas parameters and the lattice states the scheme evolves on.
//!
//! A standard state at resolution `n` is `(u, v) = (i/n, v_j)` for integers
//! `i, j`, where `v_j` is the j-th vertex of the volume lattice. The discrete
//! Riemann invariants are `r = (i+j)/n` and `s = (i-j)/n`; all invariant
//! bookkeeping is done on the exact integers `i+j` and `i-j`.

use core::fmt;

/// Pressure-law parameters for `p(v) = K v^(-gamma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParams {
    /// Pressure coefficient, `K > 0`.
    pub k: f64,
    /// Adiabatic exponent. Simulation requires `1 < gamma < 3`; the exact
    /// interaction formulas additionally admit `gamma = 3`.
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamError {
    NonPositiveK,
    GammaOutOfRange,
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::NonPositiveK => write!(f, "pressure coefficient K must be positive"),
            ParamError::GammaOutOfRange => {
                write!(f, "adiabatic exponent gamma must satisfy 1 < gamma < 3")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ParamError {}

impl GasParams {
    pub fn new(k: f64, gamma: f64) -> Result<Self, ParamError> {
        if !(k > 0.0) {
            return Err(ParamError::NonPositiveK);
        }
        if !(gamma > 1.0 && gamma < 3.0) {
            return Err(ParamError::GammaOutOfRange);
        }
        Ok(GasParams { k, gamma })
    }

    /// Pressure `p(v) = K v^(-gamma)`.
    #[inline]
    pub fn pressure(&self, v: f64) -> f64 {
        self.k * crate::fmath::powf(v, -self.gamma)
    }

    /// Sound speed `c(v) = sqrt(-p'(v)) = sqrt(K gamma) v^(-(gamma+1)/2)`.
    #[inline]
    pub fn sound_speed(&self, v: f64) -> f64 {
        crate::fmath::sqrt(self.k * self.gamma) * crate::fmath::powf(v, -0.5 * (self.gamma + 1.0))
    }
}

/// A lattice state `(u, v) = (i/n, v_j)` at resolution `n`.
///
/// `i` and `j` may be any integers; neighbouring sampled states differ by at
/// most one lattice step per characteristic family, i.e. by 2/n in exactly
/// one of the invariants `r`, `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StandardState {
    pub n: u32,
    /// Velocity index, `u = i/n`.
    pub i: i64,
    /// Volume index, `v = v_j` and the discrete `Phi` value is `j/n`.
    pub j: i64,
}

impl StandardState {
    pub fn new(n: u32, i: i64, j: i64) -> Self {
        StandardState { n, i, j }
    }

    /// Exact integer numerator of `r = (i+j)/n`. Conserved across forward jumps.
    #[inline]
    pub fn r_index(&self) -> i64 {
        self.i + self.j
    }

    /// Exact integer numerator of `s = (i-j)/n`. Conserved across backward jumps.
    #[inline]
    pub fn s_index(&self) -> i64 {
        self.i - self.j
    }

    #[inline]
    pub fn u(&self) -> f64 {
        self.i as f64 / self.n as f64
    }

    /// Discrete Riemann invariants `(r, s)`, each computed as one exact
    /// integer divided once by `n`.
    #[inline]
    pub fn invariants(&self) -> (f64, f64) {
        let n = self.n as f64;
        (self.r_index() as f64 / n, self.s_index() as f64 / n)
    }
}

/// Free-function form of [`StandardState::invariants`].
pub fn invariants_of(state: &StandardState) -> (f64, f64) {
    state.invariants()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_reject_bad_inputs() {
        assert!(GasParams::new(0.0, 2.0).is_err());
        assert!(GasParams::new(-1.0, 2.0).is_err());
        assert!(GasParams::new(1.0, 1.0).is_err());
        assert!(GasParams::new(1.0, 3.0).is_err());
        assert!(GasParams::new(1.0, 5.0 / 3.0).is_ok());
    }

    #[test]
    fn invariants_match_index_arithmetic() {
        assert_eq!(StandardState::new(10, 0, 0).invariants(), (0.0, 0.0));
        assert_eq!(StandardState::new(10, 3, 1).invariants(), (0.4, 0.2));
        assert_eq!(StandardState::new(4, -1, 1).invariants(), (0.0, -0.5));
    }

    #[test]
    fn sound_speed_matches_pressure_slope() {
        let p = GasParams::new(1.3, 1.8).unwrap();
        let v = 2.7;
        let h = 1e-6;
        let dp = (p.pressure(v + h) - p.pressure(v - h)) / (2.0 * h);
        let c = p.sound_speed(v);
        assert!((c * c + dp).abs() < 1e-6);
    }
}
