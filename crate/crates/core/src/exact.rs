//! Closed-form solution for the interaction of two centered rarefaction
//! waves, used as an independent oracle for the front tracker's density
//! decay.
//!
//! In the scaled invariants
//!
//! ```text
//! S = u + (2 sqrt(K)/(gamma-1)) v^((1-gamma)/2),
//! R = u - (2 sqrt(K)/(gamma-1)) v^((1-gamma)/2),
//! ```
//!
//! with the first interaction at `t = t_bar`, `u = 0` there, and
//! `S_bar = -R_bar > 0`, the time at which the interaction of the pair of
//! characteristics labelled `(S, R)` ends is
//!
//! ```text
//! t(S, R) = t_bar * ((S_bar - R_bar)/(S - R))^alpha * F(1-alpha, alpha; 1; z),
//! z = ((S_bar - S)(R_bar - R)) / ((S_bar - R_bar)(S - R)),
//! alpha = (gamma+1) / (2(gamma-1)).
//! ```
//!
//! In the admissible region (`0 < S <= S_bar`, `R_bar <= R < 0`) the argument
//! `z` is nonpositive and vanishes at the onset `(S, R) = (S_bar, R_bar)`.
//! When `alpha` is a positive integer `N`, i.e. `gamma = (2N+1)/(2N-1)`, the
//! series terminates and the same value has the Legendre form
//!
//! ```text
//! t(S, R) = t_bar * ((S_bar - R_bar)/(S - R))^alpha
//!           * P_(alpha-1)( (S_bar^2 - S R) / (S_bar (S - R)) ),
//! ```
//!
//! with the standard (unit-normalised, `P_k(1) = 1`) Legendre polynomials.
//! The two forms agree identically in the terminating regime; that identity
//! is enforced by the test suite rather than assumed.

use alloc::vec::Vec;
use core::fmt;

use crate::fmath;
use crate::special;
use crate::state::GasParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactError {
    /// `(S, R)` outside `0 < S <= S_bar`, `R_bar <= R < 0`.
    InadmissibleInvariants,
    /// gamma is not of the form `(2N+1)/(2N-1)` for integer `N >= 1`.
    NotLegendreGamma,
    /// `S <= R`: no positive volume corresponds to the pair.
    DegenerateOrdering,
    InvalidConfig,
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactError::InadmissibleInvariants => {
                write!(f, "invariant pair outside the admissible interaction region")
            }
            ExactError::NotLegendreGamma => {
                write!(f, "gamma is not (2N+1)/(2N-1) for a positive integer N")
            }
            ExactError::DegenerateOrdering => write!(f, "requires S > R"),
            ExactError::InvalidConfig => write!(f, "invalid interaction configuration"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ExactError {}

/// Two symmetric centered rarefaction waves meeting at `t = t_bar`.
#[derive(Debug, Clone, Copy)]
pub struct InteractionConfig {
    pub t_bar: f64,
    /// `S_bar = -R_bar > 0`, the invariant of the pre-interaction state.
    pub s_bar: f64,
    pub params: GasParams,
}

impl InteractionConfig {
    /// `gamma = 3` is admitted here (alpha = 1, exact formulas hold) even
    /// though the simulation modules exclude it.
    pub fn new(t_bar: f64, s_bar: f64, k: f64, gamma: f64) -> Result<Self, ExactError> {
        if !(t_bar > 0.0 && s_bar > 0.0 && k > 0.0 && gamma > 1.0 && gamma <= 3.0) {
            return Err(ExactError::InvalidConfig);
        }
        Ok(InteractionConfig {
            t_bar,
            s_bar,
            params: GasParams { k, gamma },
        })
    }

    pub fn r_bar(&self) -> f64 {
        -self.s_bar
    }

    fn check_admissible(&self, s: f64, r: f64) -> Result<(), ExactError> {
        if s > 0.0 && s <= self.s_bar && r >= self.r_bar() && r < 0.0 {
            Ok(())
        } else {
            Err(ExactError::InadmissibleInvariants)
        }
    }
}

/// `alpha = (gamma+1) / (2(gamma-1))`; exceeds 1 exactly when `gamma < 3`.
pub fn alpha(gamma: f64) -> f64 {
    (gamma + 1.0) / (2.0 * (gamma - 1.0))
}

/// Hypergeometric form of the interaction end time.
pub fn t_interaction_hyper(cfg: &InteractionConfig, s: f64, r: f64) -> Result<f64, ExactError> {
    cfg.check_admissible(s, r)?;
    let a = alpha(cfg.params.gamma);
    let sb = cfg.s_bar;
    let rb = cfg.r_bar();
    let z = ((sb - s) * (rb - r)) / ((sb - rb) * (s - r));
    let pre = fmath::powf((sb - rb) / (s - r), a);
    Ok(cfg.t_bar * pre * special::hyp_f_alpha(a, z))
}

/// Legendre form, valid when `gamma = (2N+1)/(2N-1)` so that `alpha = N`.
pub fn t_interaction_legendre(
    cfg: &InteractionConfig,
    s: f64,
    r: f64,
    n: u32,
) -> Result<f64, ExactError> {
    if n < 1 {
        return Err(ExactError::NotLegendreGamma);
    }
    let gamma_n = (2.0 * n as f64 + 1.0) / (2.0 * n as f64 - 1.0);
    if fmath::abs(cfg.params.gamma - gamma_n) > 1e-9 {
        return Err(ExactError::NotLegendreGamma);
    }
    cfg.check_admissible(s, r)?;
    let sb = cfg.s_bar;
    let rb = cfg.r_bar();
    let arg = (sb * sb - s * r) / (sb * (s - r));
    let pre = fmath::powf((sb - rb) / (s - r), n as f64);
    Ok(cfg.t_bar * pre * special::legendre_p(n - 1, arg))
}

/// Inverts `S - R = (4 sqrt(K)/(gamma-1)) v^((1-gamma)/2)` to the specific
/// volume and density of the state carrying the pair `(S, R)`.
pub fn volume_from_invariants(params: &GasParams, s: f64, r: f64) -> Result<(f64, f64), ExactError> {
    if !(s > r) {
        return Err(ExactError::DegenerateOrdering);
    }
    let g = params.gamma;
    let base = (g - 1.0) * (s - r) / (4.0 * crate::fmath::sqrt(params.k));
    let v = fmath::powf(base, 2.0 / (1.0 - g));
    Ok((v, 1.0 / v))
}

/// Samples the closed-form decay curve along the symmetric path `S = -R`,
/// from the onset down to `s_min`, geometrically. Returns `(t, rho_min)`
/// pairs; `t * rho` stays bounded above and below as `S -> 0`.
pub fn decay_curve(
    cfg: &InteractionConfig,
    s_min: f64,
    samples: usize,
) -> Result<Vec<(f64, f64)>, ExactError> {
    if !(s_min > 0.0 && s_min < cfg.s_bar) || samples < 2 {
        return Err(ExactError::InvalidConfig);
    }
    let ratio = fmath::powf(s_min / cfg.s_bar, 1.0 / (samples as f64 - 1.0));
    let mut out = Vec::with_capacity(samples);
    let mut s = cfg.s_bar;
    for idx in 0..samples {
        if idx > 0 {
            s *= ratio;
        }
        let t = t_interaction_hyper(cfg, s, -s)?;
        let (_, rho) = volume_from_invariants(&cfg.params, s, -s)?;
        out.push((t, rho));
    }
    Ok(out)
}

/// Least-squares slope of `log rho` against `log t` over the given pairs.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(t, rho) in points {
        let x = fmath::ln(t);
        let y = fmath::ln(rho);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
