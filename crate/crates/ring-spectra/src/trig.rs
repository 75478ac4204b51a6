//! Trigonometric helpers in units of pi.
//!
//! Stencil eigenvalues are weighted sums of `cos(k*theta)` and
//! `sin(k*theta)` with `theta = pi * x` and `x` a small rational (2n/N).
//! Evaluating in units of pi keeps the quarter-period values exact:
//! `sin_pi(1.0) == 0.0` and `cos_pi(0.5) == 0.0` without round-off, which
//! in turn makes derivative stencils vanish exactly at the constant mode
//! and keeps coupling blocks purely imaginary at the half mode.

use std::f64::consts::PI;

/// sin(pi * x) with exact zeros at integer `x` and exact +-1 at half-integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0); // [0, 2)
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r == 0.5 {
        return 1.0;
    }
    if r == 1.5 {
        return -1.0;
    }
    if r < 0.5 {
        (PI * r).sin()
    } else if r < 1.0 {
        (PI * (1.0 - r)).sin()
    } else if r < 1.5 {
        -(PI * (r - 1.0)).sin()
    } else {
        -(PI * (2.0 - r)).sin()
    }
}

/// cos(pi * x) with exact zeros at half-integer `x` and exact +-1 at integers.
pub fn cos_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 {
        return 1.0;
    }
    if r == 1.0 {
        return -1.0;
    }
    if r == 0.5 || r == 1.5 {
        return 0.0;
    }
    if r < 0.5 {
        (PI * r).cos()
    } else if r < 1.0 {
        -(PI * (1.0 - r)).cos()
    } else if r < 1.5 {
        -(PI * (r - 1.0)).cos()
    } else {
        (PI * (2.0 - r)).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_special_values() {
        assert_eq!(sin_pi(0.0), 0.0);
        assert_eq!(sin_pi(1.0), 0.0);
        assert_eq!(sin_pi(7.0), 0.0);
        assert_eq!(sin_pi(0.5), 1.0);
        assert_eq!(sin_pi(1.5), -1.0);
        assert_eq!(sin_pi(-0.5), -1.0);
        assert_eq!(cos_pi(0.0), 1.0);
        assert_eq!(cos_pi(1.0), -1.0);
        assert_eq!(cos_pi(0.5), 0.0);
        assert_eq!(cos_pi(2.5), 0.0);
    }

    #[test]
    fn matches_std_on_generic_arguments() {
        for i in 0..100 {
            let x = -3.0 + 0.0613 * i as f64;
            assert!((sin_pi(x) - (PI * x).sin()).abs() < 1e-13);
            assert!((cos_pi(x) - (PI * x).cos()).abs() < 1e-13);
        }
    }
}
