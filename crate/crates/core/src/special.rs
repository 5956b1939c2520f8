//! Special functions used by the closed-form interaction solution: the Gauss
//! hypergeometric value `F(1-a, a; 1; z)` and Legendre polynomials.

use crate::fmath;

/// Gauss series for `F(a, b; 1; z)`, truncated when the next term falls
/// below `1e-16` of the partial sum. Requires `|z| < 1` unless the series
/// terminates.
fn gauss_series(a: f64, b: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..500 {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((1.0 + kf) * (1.0 + kf)) * z;
        sum += term;
        if fmath::abs(term) < 1e-16 * fmath::abs(sum) {
            break;
        }
    }
    sum
}

/// `F(1-alpha, alpha; 1; z)` for real `alpha > 1` and `z <= 0` or `z < 1`.
///
/// When `alpha` is a positive integer the series terminates after `alpha`
/// terms and is a polynomial, valid for every real `z`. Otherwise the series
/// converges only for `|z| < 1`; for `z < 0` a Pfaff transformation maps the
/// argument to `z/(z-1)` in `[0, 1)` first.
pub fn hyp_f_alpha(alpha: f64, z: f64) -> f64 {
    let a = 1.0 - alpha;
    let b = alpha;
    let rounded = round_to_int(alpha);
    if let Some(n) = rounded {
        // terminating: a = 1-n is a nonpositive integer
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..(n - 1) {
            let kf = k as f64;
            term *= (a + kf) * (b + kf) / ((1.0 + kf) * (1.0 + kf)) * z;
            sum += term;
        }
        return sum;
    }
    if z < 0.0 {
        // F(a,b;c;z) = (1-z)^(-a) F(a, c-b; c; z/(z-1))
        let w = z / (z - 1.0);
        return fmath::powf(1.0 - z, -a) * gauss_series(a, 1.0 - b, w);
    }
    gauss_series(a, b, z)
}

fn round_to_int(x: f64) -> Option<u32> {
    let r = libm::round(x);
    if fmath::abs(x - r) < 1e-9 && r >= 1.0 && r < 1e6 {
        Some(r as u32)
    } else {
        None
    }
}

/// Legendre polynomial `P_n(x)` by the three-term recurrence
/// `(k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}`; valid for all real `x`.
pub fn legendre_p(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut p_prev = 1.0;
    let mut p_curr = x;
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p_curr - kf * p_prev) / (kf + 1.0);
        p_prev = p_curr;
        p_curr = p_next;
    }
    p_curr
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_low_orders() {
        for x in [-1.5, -0.3, 0.0, 0.7, 1.0, 1.25, 3.0] {
            assert_eq!(legendre_p(0, x), 1.0);
            assert_eq!(legendre_p(1, x), x);
            assert!((legendre_p(2, x) - 0.5 * (3.0 * x * x - 1.0)).abs() < 1e-14);
            assert!(
                (legendre_p(3, x) - 0.5 * (5.0 * x * x * x - 3.0 * x)).abs() < 1e-13,
                "P3 at {x}"
            );
        }
        assert_eq!(legendre_p(7, 1.0), 1.0);
    }

    #[test]
    fn terminating_series_is_polynomial() {
        // alpha = 2: F(-1, 2; 1; z) = 1 - 2z for any z
        for z in [-3.0, -0.125, 0.0, 0.4, 2.0] {
            assert!((hyp_f_alpha(2.0, z) - (1.0 - 2.0 * z)).abs() < 1e-14);
        }
        // alpha = 3: F(-2, 3; 1; z) = 1 - 6z + 6z^2
        for z in [-1.5, -0.2, 0.3] {
            let expect = 1.0 - 6.0 * z + 6.0 * z * z;
            assert!((hyp_f_alpha(3.0, z) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn pfaff_branch_matches_series_where_both_converge() {
        // non-integer alpha, small negative z: direct series vs Pfaff route
        let alpha = 2.6;
        for z in [-0.05, -0.3, -0.6] {
            let direct = {
                let a = 1.0 - alpha;
                let b = alpha;
                let mut term = 1.0;
                let mut sum = 1.0;
                for k in 0..400 {
                    let kf = k as f64;
                    term *= (a + kf) * (b + kf) / ((1.0 + kf) * (1.0 + kf)) * z;
                    sum += term;
                    if term.abs() < 1e-17 * sum.abs() {
                        break;
                    }
                }
                sum
            };
            let via_pfaff = hyp_f_alpha(alpha, z);
            assert!(
                (direct - via_pfaff).abs() < 1e-12 * direct.abs().max(1.0),
                "z={z}: {direct} vs {via_pfaff}"
            );
        }
    }
}
