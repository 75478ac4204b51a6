//! Exact vibration spectrum of the circular ring.
//!
//! With the Fourier ansatz `u_n = U sin(n(theta - phi))`,
//! `w_n = W cos(n(theta - phi))` the continuum eigenvalue problem reduces,
//! for each mode number n, to a real symmetric 2x2 problem whose entries
//! depend on the normalized thickness `tbar = t/R` and the radius R. The
//! two roots per mode are `lambda_{n+-} = K_n (1 +- L_n)`; the amplitude
//! ratio `U/W` classifies each mode as membrane- or bending-dominated, and
//! the classification of the two branches swaps at the transition mode
//! `nhat(tbar)`.

use num::complex::Complex64;
use thiserror::Error;

use crate::circulant::{amplitude_ratio, decouple_2x2, Block2x2, RatioError};

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("normalized thickness must satisfy 0 < tbar < 1, got {0}")]
    ThicknessRange(f64),
    #[error("{name} must be positive and finite, got {value}")]
    NotPositive { name: &'static str, value: f64 },
}

/// Ring geometry under the fixed model normalization `E/rho = 1` with a
/// rectangular cross-section (`I = A t^2 / 12`).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RingParams {
    tbar: f64,
    radius: f64,
}

impl RingParams {
    pub fn new(tbar: f64, radius: f64) -> Result<Self, ParamError> {
        if !(tbar > 0.0) || !tbar.is_finite() {
            return Err(ParamError::NotPositive { name: "tbar", value: tbar });
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(ParamError::NotPositive { name: "radius", value: radius });
        }
        Ok(Self { tbar, radius })
    }

    pub fn tbar(&self) -> f64 {
        self.tbar
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Normalized moment of inertia `Ibar = tbar^2 / 12`.
    pub fn ibar(&self) -> f64 {
        self.tbar * self.tbar / 12.0
    }
}

/// Eigenvalue branch selector: `lambda_plus >= lambda_minus` per mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::Plus => write!(f, "plus"),
            Branch::Minus => write!(f, "minus"),
        }
    }
}

/// Continuum 2x2 mode block (real symmetric):
/// `A = (n^2/R^2)(1 + Ibar)`, `B = (n/R^2)(1 + Ibar n^2)`,
/// `D = (1/R^2)(1 + Ibar n^4)`.
pub fn analytic_block(n: u32, params: &RingParams) -> Block2x2 {
    let nn = n as f64;
    let r2 = params.radius * params.radius;
    let ibar = params.ibar();
    let a = nn * nn / r2 * (1.0 + ibar);
    let b = nn / r2 * (1.0 + ibar * nn * nn);
    let d = 1.0 / r2 * (1.0 + ibar * nn * nn * nn * nn);
    Block2x2::hermitian(a, Complex64::new(b, 0.0), d)
}

/// `K_n = (n^2+1)(n^2 tbar^2 + 12) / (24 R^2)`.
pub fn k_n(n: f64, params: &RingParams) -> f64 {
    let t2 = params.tbar * params.tbar;
    (n * n + 1.0) * (n * n * t2 + 12.0) / (24.0 * params.radius * params.radius)
}

/// `M_n = n^2 tbar^2 (n^2 - 1)^2 / (12 R^4)`.
pub fn m_n(n: f64, params: &RingParams) -> f64 {
    let t2 = params.tbar * params.tbar;
    let r2 = params.radius * params.radius;
    n * n * t2 * (n * n - 1.0) * (n * n - 1.0) / (12.0 * r2 * r2)
}

/// `L_n^2 = 1 - M_n / K_n^2`, a function of n and tbar only.
pub fn l_squared(n: f64, tbar: f64) -> f64 {
    let t2 = tbar * tbar;
    let num = 48.0 * n * n * t2 * (n * n - 1.0) * (n * n - 1.0);
    let den = (n * n + 1.0) * (n * n + 1.0) * (n * n * t2 + 12.0) * (n * n * t2 + 12.0);
    1.0 - num / den
}

/// Exact eigenvalue pair `(lambda_plus, lambda_minus)` at integer mode n.
///
/// The minus eigenvalue is exactly zero for n = 0 (companion of the
/// breathing mode, a rigid rotation) and n = 1 (rigid translation), where
/// `M_n = 0`; those zeros are returned exactly rather than as square roots
/// of round-off.
pub fn analytic_eigenvalues(n: u32, params: &RingParams) -> (f64, f64) {
    let nn = n as f64;
    let k = k_n(nn, params);
    if n <= 1 {
        return (2.0 * k, 0.0);
    }
    let m = m_n(nn, params);
    let l = l_squared(nn, params.tbar).max(0.0).sqrt();
    let plus = k * (1.0 + l);
    (plus, m / plus)
}

/// Amplitude ratio `rho = B_n / (lambda_branch - A_n)`; `|rho| > 1` marks a
/// membrane-dominated mode.
pub fn analytic_ratio(n: u32, branch: Branch, params: &RingParams) -> Result<f64, RatioError> {
    let block = analytic_block(n, params);
    let (plus, minus) = analytic_eigenvalues(n, params);
    let lambda = match branch {
        Branch::Plus => plus,
        Branch::Minus => minus,
    };
    amplitude_ratio(lambda, &block).map(|r| r.re)
}

/// Physical classification of the exact mode `(n, branch)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PhysicalClass {
    Membrane,
    Bending,
}

impl std::fmt::Display for PhysicalClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PhysicalClass::Membrane => write!(f, "membrane"),
            PhysicalClass::Bending => write!(f, "bending"),
        }
    }
}

/// Classify by the exact amplitude ratio: membrane-dominated iff |rho| >= 1.
/// Modes whose ratio is undefined (pure transverse or pure circumferential)
/// classify by which displacement survives.
pub fn classify(n: u32, branch: Branch, params: &RingParams) -> PhysicalClass {
    match analytic_ratio(n, branch, params) {
        Ok(rho) => {
            if rho.abs() >= 1.0 {
                PhysicalClass::Membrane
            } else {
                PhysicalClass::Bending
            }
        }
        // lambda = A with b = 0: pure circumferential (u) mode
        Err(_) => PhysicalClass::Membrane,
    }
}

/// Transition mode `nhat(tbar)`: the minimizer of `L_n^2` over n >= 1,
/// `nhat = sqrt(x*)` where `x*` is the unique root above unity of
/// `h(x) = -tbar^2 x^3 + (4 tbar^2 + 12) x^2 + (tbar^2 + 48) x - 12`.
///
/// The cubic has three real roots; the trigonometric form of Cardano's
/// formula is used and the largest root polished by a few Newton steps.
pub fn transition_mode(tbar: f64) -> Result<f64, ParamError> {
    if !(tbar > 0.0 && tbar < 1.0) {
        return Err(ParamError::ThicknessRange(tbar));
    }
    let t2 = tbar * tbar;
    // monic form x^3 + a x^2 + b x + c
    let a = -(4.0 * t2 + 12.0) / t2;
    let b = -(t2 + 48.0) / t2;
    let c = 12.0 / t2;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let m = 2.0 * (-p / 3.0).sqrt();
    let cos_arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
    let phi = cos_arg.acos() / 3.0;
    let mut x = m * phi.cos() - a / 3.0; // largest real root
    // Newton polish on the monic cubic
    for _ in 0..50 {
        let f = ((x + a) * x + b) * x + c;
        let df = (3.0 * x + 2.0 * a) * x + b;
        let step = f / df;
        x -= step;
        if step.abs() <= 1e-14 * x.abs() {
            break;
        }
    }
    Ok(x.sqrt())
}

/// One sampled point `(theta, u, w)` of an eigenfunction.
pub type ModeSample = (f64, f64, f64);

/// Sample the eigenfunction pair of mode `(n, branch)` with W normalized to
/// one and U equal to the amplitude ratio:
/// `u = rho sin(n(theta - phase))`, `w = cos(n(theta - phase))`.
///
/// Modes with an undefined ratio (pure circumferential response, e.g. the
/// n = 0 rigid rotation) are emitted as `u = 1, w = 0`.
pub fn sample_mode(
    n: u32,
    branch: Branch,
    params: &RingParams,
    phase: f64,
    samples: usize,
) -> Vec<ModeSample> {
    let ratio = analytic_ratio(n, branch, params);
    (0..samples.max(1))
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / samples.max(1) as f64;
            let arg = n as f64 * (theta - phase);
            match ratio {
                Ok(rho) => (theta, rho * arg.sin(), arg.cos()),
                Err(_) => (theta, 1.0, 0.0),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(tbar: f64) -> RingParams {
        RingParams::new(tbar, 1.0).unwrap()
    }

    #[test]
    fn block_special_cases() {
        let p = params(0.1);
        let b0 = analytic_block(0, &p);
        assert_eq!((b0.a.re, b0.b.re, b0.d.re), (0.0, 0.0, 1.0));

        // tbar -> 0 limit at n=1 gives A = B = D = 1
        let tiny = params(1e-300);
        let b1 = analytic_block(1, &tiny);
        assert!((b1.a.re - 1.0).abs() < 1e-15);
        assert!((b1.b.re - 1.0).abs() < 1e-15);
        assert!((b1.d.re - 1.0).abs() < 1e-15);

        let b2 = analytic_block(2, &p);
        assert!((b2.a.re - 4.0 * (1.0 + 1.0 / 1200.0)).abs() < 1e-14);
        assert!((b2.b.re - 2.0 * (1.0 + 4.0 / 1200.0)).abs() < 1e-14);
        assert!((b2.d.re - (1.0 + 16.0 / 1200.0)).abs() < 1e-14);
    }

    #[test]
    fn rigid_body_and_breathing_modes() {
        let p = params(0.1);
        let (_, minus1) = analytic_eigenvalues(1, &p);
        assert_eq!(minus1, 0.0);
        let (plus0, minus0) = analytic_eigenvalues(0, &p);
        assert_eq!(minus0, 0.0);
        // breathing eigenvalue 1/R^2
        assert!((plus0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn formula_route_matches_block_decoupling() {
        for &tbar in &[0.1, 0.015, 0.01] {
            let p = params(tbar);
            for n in 0..40u32 {
                let (plus, minus) = analytic_eigenvalues(n, &p);
                let e = decouple_2x2(&analytic_block(n, &p)).unwrap();
                let scale = plus.max(1.0);
                assert!((plus - e.lambda_plus).abs() < 1e-12 * scale, "n={n} plus");
                assert!((minus - e.lambda_minus).abs() < 1e-12 * scale, "n={n} minus");
            }
        }
    }

    #[test]
    fn trace_and_determinant_identities() {
        let p = params(0.015);
        for n in 2..60u32 {
            let (plus, minus) = analytic_eigenvalues(n, &p);
            let k = k_n(n as f64, &p);
            let m = m_n(n as f64, &p);
            assert!((plus + minus - 2.0 * k).abs() < 1e-12 * (2.0 * k));
            assert!((plus * minus - m).abs() < 1e-12 * m.max(1e-300));
            assert!(plus >= minus && minus >= 0.0);
        }
    }

    #[test]
    fn l_squared_is_radius_independent() {
        for &tbar in &[0.1, 0.01] {
            for n in 1..30 {
                let nn = n as f64;
                let base = l_squared(nn, tbar);
                for &r in &[0.5, 1.0, 2.0] {
                    let p = RingParams::new(tbar, r).unwrap();
                    let k = k_n(nn, &p);
                    let m = m_n(nn, &p);
                    let l2 = 1.0 - m / (k * k);
                    assert!((l2 - base).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn ratio_examples() {
        let p0 = params(1e-12);
        // rigid translation: rho = -1 exactly in the thin limit
        assert!((analytic_ratio(1, Branch::Minus, &p0).unwrap() + 1.0).abs() < 1e-10);
        let p = params(0.1);
        assert!(analytic_ratio(2, Branch::Minus, &p).unwrap().abs() < 1.0);
        assert!(analytic_ratio(2, Branch::Plus, &p).unwrap().abs() > 1.0);
    }

    #[test]
    fn classification_flips_once_at_the_transition_mode() {
        for &tbar in &[0.1, 0.05, 0.015] {
            let p = params(tbar);
            let nhat = transition_mode(tbar).unwrap();
            let mut flips = Vec::new();
            let mut prev = analytic_ratio(2, Branch::Minus, &p).unwrap().abs() < 1.0;
            for n in 3..(2.0 * nhat) as u32 + 10 {
                let now = analytic_ratio(n, Branch::Minus, &p).unwrap().abs() < 1.0;
                if now != prev {
                    flips.push(n);
                }
                prev = now;
            }
            assert_eq!(flips.len(), 1, "tbar={tbar}");
            let flip = flips[0] as f64;
            assert!(flip >= nhat.floor() && flip <= nhat.ceil() + 1.0, "tbar={tbar} flip={flip} nhat={nhat}");
        }
    }

    #[test]
    fn transition_mode_matches_log_linear_fit() {
        for &tbar in &[1e-3, 1e-2, 1e-1] {
            let nhat = transition_mode(tbar).unwrap();
            let fit = -0.9985 * tbar.log10() + 0.5421;
            assert!((nhat.log10() - fit).abs() < 0.02, "tbar={tbar} nhat={nhat}");
        }
        assert!((transition_mode(0.1).unwrap() - 34.8).abs() < 0.2);
        assert!(transition_mode(0.01).unwrap() > 100.0);
    }

    #[test]
    fn transition_mode_is_a_local_minimum_of_l_squared() {
        for &tbar in &[0.3, 0.1, 0.02, 1e-3] {
            let nhat = transition_mode(tbar).unwrap();
            let at = l_squared(nhat, tbar);
            assert!(l_squared(nhat - 0.1, tbar) > at, "tbar={tbar}");
            assert!(l_squared(nhat + 0.1, tbar) > at, "tbar={tbar}");
        }
    }

    #[test]
    fn transition_mode_range_errors() {
        assert!(transition_mode(0.0).is_err());
        assert!(transition_mode(1.0).is_err());
    }

    #[test]
    fn sampled_modes() {
        let p = params(0.1);
        // breathing: u = 0, w = 1 everywhere
        for (_, u, w) in sample_mode(0, Branch::Plus, &p, 0.0, 8) {
            assert_eq!(u, 0.0);
            assert_eq!(w, 1.0);
        }
        // rigid translation in the thin limit: u = -sin, w = cos
        let thin = params(1e-12);
        for (theta, u, w) in sample_mode(1, Branch::Minus, &thin, 0.0, 16) {
            assert!((u + theta.sin()).abs() < 1e-9);
            assert!((w - theta.cos()).abs() < 1e-12);
        }
        // bending-dominated amplitude: max|u| < max|w|
        let s = sample_mode(3, Branch::Minus, &p, 0.0, 64);
        let umax = s.iter().map(|(_, u, _)| u.abs()).fold(0.0, f64::max);
        let wmax = s.iter().map(|(_, _, w)| w.abs()).fold(0.0, f64::max);
        assert!(umax < wmax);
    }

    proptest! {
        /// nhat agrees with the integer argmin of L^2 within one mode.
        #[test]
        fn transition_matches_integer_argmin(log_tbar in -3.0f64..-1.0) {
            let tbar = 10f64.powf(log_tbar);
            let nhat = transition_mode(tbar).unwrap();
            let upper = (2.5 * nhat) as u32 + 4;
            let argmin = (1..upper)
                .min_by(|&a, &b| {
                    l_squared(a as f64, tbar)
                        .partial_cmp(&l_squared(b as f64, tbar))
                        .unwrap()
                })
                .unwrap();
            prop_assert!((argmin as f64 - nhat).abs() <= 1.0, "tbar={} nhat={} argmin={}", tbar, nhat, argmin);
        }

        /// Eigenvalues are nonnegative and ordered for arbitrary parameters.
        #[test]
        fn eigenvalues_ordered_nonnegative(n in 0u32..200, log_tbar in -4.0f64..-0.5, radius in 0.25f64..4.0) {
            let p = RingParams::new(10f64.powf(log_tbar), radius).unwrap();
            let (plus, minus) = analytic_eigenvalues(n, &p);
            prop_assert!(plus >= minus);
            prop_assert!(minus >= 0.0);
        }
    }
}
