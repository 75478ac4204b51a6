//! Circulant eigenvalues and 2x2 block decoupling.
//!
//! A real circulant N x N matrix is determined by its first row
//! `c_0 .. c_{N-1}` and is diagonalized by the Fourier vectors
//! `v_j = (1, w^j, w^{2j}, ...) / sqrt(N)` with `w = exp(2 pi i / N)`; the
//! j-th eigenvalue is the DFT sum `sum_k c_k w^{jk}`. Block matrices whose
//! four blocks are circulant therefore reduce, mode by mode, to 2x2
//! eigenvalue problems with the scalar block eigenvalues as entries.

use num::complex::Complex64;
use num::{BigRational, ToPrimitive, Zero};
use thiserror::Error;

use crate::trig::{cos_pi, sin_pi};

/// Symmetry class of a circulant first row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// `c_k == c_{N-k}`; all eigenvalues are real.
    Symmetric,
    /// `c_0 == 0` and `c_k == -c_{N-k}`; all eigenvalues are purely imaginary.
    SkewSymmetric,
    /// No structure assumed; eigenvalues are general complex numbers.
    General,
}

#[derive(Debug, Error, PartialEq)]
pub enum CirculantError {
    #[error("mode index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("first row has {got} coefficients, expected {expected}")]
    RowLength { got: usize, expected: usize },
    #[error("row violates the {0:?} pattern")]
    SymmetryViolated(Symmetry),
    #[error("circulant size must be at least 1")]
    EmptyMatrix,
}

#[derive(Debug, Error, PartialEq)]
pub enum DecoupleError {
    #[error("degenerate pencil: K = (a+d)/2 vanishes while M = {m}")]
    DegeneratePencil { m: f64 },
    #[error("radicand 1 - M/K^2 = {arg} is negative beyond the round-off guard")]
    NegativeRadicand { arg: f64 },
}

#[derive(Debug, Error, PartialEq)]
pub enum RatioError {
    #[error("lambda coincides with the diagonal entry a; ratio has a pole")]
    Pole,
    #[error("lambda equals a with b = 0: pure circumferential mode, ratio undefined")]
    PureAxisMode,
    #[error("off-diagonal entry is not purely imaginary: |Re b| = {re} vs |b| = {abs}")]
    NotImaginary { re: f64, abs: f64 },
}

/// First row of an N x N circulant matrix with exact rational entries.
#[derive(Debug, Clone)]
pub struct CirculantSpec {
    size: usize,
    coeffs: Vec<BigRational>,
    symmetry: Symmetry,
}

impl CirculantSpec {
    /// Build a spec from the full first row, checking the claimed symmetry
    /// pattern by exact rational comparison.
    pub fn new(coeffs: Vec<BigRational>, symmetry: Symmetry) -> Result<Self, CirculantError> {
        let size = coeffs.len();
        if size == 0 {
            return Err(CirculantError::EmptyMatrix);
        }
        let ok = match symmetry {
            Symmetry::Symmetric => (1..size).all(|k| coeffs[k] == coeffs[size - k]),
            Symmetry::SkewSymmetric => {
                coeffs[0].is_zero() && (1..size).all(|k| coeffs[k] == -&coeffs[size - k])
            }
            Symmetry::General => true,
        };
        if !ok {
            return Err(CirculantError::SymmetryViolated(symmetry));
        }
        Ok(Self { size, coeffs, symmetry })
    }

    /// Build a spec by folding a stencil `(offset, value)` onto an N-periodic
    /// first row. Offsets may exceed the period; contributions accumulate,
    /// which reproduces the assembled matrix when the stencil wraps around.
    pub fn from_stencil(
        stencil: &[(i64, BigRational)],
        size: usize,
        symmetry: Symmetry,
    ) -> Result<Self, CirculantError> {
        if size == 0 {
            return Err(CirculantError::EmptyMatrix);
        }
        let mut row = vec![BigRational::zero(); size];
        for (offset, value) in stencil {
            let k = offset.rem_euclid(size as i64) as usize;
            row[k] += value;
        }
        Self::new(row, symmetry)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    /// Sum of |c_k| as f64; the natural scale for eigenvalue round-off.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| rat_to_f64(c).abs()).sum()
    }

    /// Dense assembly `C[i][j] = c_{(j-i) mod N}` (test and oracle support).
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.size;
        let row: Vec<f64> = self.coeffs.iter().map(rat_to_f64).collect();
        (0..n)
            .map(|i| (0..n).map(|j| row[(j + n - i) % n]).collect())
            .collect()
    }
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("rational outside f64 range")
}

/// j-th eigenvalue of the circulant defined by `spec`:
/// `lambda_j = sum_k c_k w^{jk}` with `w = exp(2 pi i / N)`.
///
/// Symmetric rows use the real cosine form and skew-symmetric rows the
/// imaginary sine form, so the structural zero of the other component is
/// exact rather than round-off sized.
pub fn circulant_eigenvalue(spec: &CirculantSpec, j: usize) -> Result<Complex64, CirculantError> {
    let n = spec.size;
    if j >= n {
        return Err(CirculantError::IndexOutOfRange { index: j, size: n });
    }
    // angle of w^{jk} is pi * (2jk/N)
    let x = |k: usize| 2.0 * (j as f64) * (k as f64) / (n as f64);
    let c: Vec<f64> = spec.coeffs.iter().map(rat_to_f64).collect();
    match spec.symmetry {
        Symmetry::Symmetric => {
            let mut re = 0.0;
            for (k, ck) in c.iter().enumerate() {
                re += ck * cos_pi(x(k));
            }
            Ok(Complex64::new(re, 0.0))
        }
        Symmetry::SkewSymmetric => {
            let mut im = 0.0;
            for (k, ck) in c.iter().enumerate() {
                im += ck * sin_pi(x(k));
            }
            Ok(Complex64::new(0.0, im))
        }
        Symmetry::General => {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, ck) in c.iter().enumerate() {
                acc += Complex64::new(ck * cos_pi(x(k)), ck * sin_pi(x(k)));
            }
            Ok(acc)
        }
    }
}

/// One 2x2 block of a Fourier-decoupled pencil.
///
/// For the Hermitian pencils arising here `a` and `d` are real and
/// `c = conj(b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block2x2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Block2x2 {
    pub fn hermitian(a: f64, b: Complex64, d: f64) -> Self {
        Self {
            a: Complex64::new(a, 0.0),
            b,
            c: b.conj(),
            d: Complex64::new(d, 0.0),
        }
    }
}

/// Roots of the block characteristic equation `lambda^2 - 2K lambda + M = 0`
/// in the `K (1 +- L)` parameterization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair2x2 {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub k: f64,
    pub m: f64,
    pub l: f64,
}

/// Round-off guard for the radicand of `L = sqrt(1 - M/K^2)`: arguments in
/// `[-1e-12, 0)` clamp to zero (the radicand crosses zero near the
/// transition mode), anything more negative is a hard error.
const RADICAND_GUARD: f64 = 1e-12;

/// Solve the 2x2 block eigenvalue problem with commuting diagonal blocks:
/// `K = (a+d)/2`, `M = a d - c b`, `L = sqrt(1 - M/K^2)`,
/// `lambda_plus = K (1+L)`, `lambda_minus = K (1-L)`.
///
/// The minus root is evaluated as `M / (K (1+L))` to avoid cancellation when
/// `M` is small against `K^2`.
pub fn decouple_2x2(block: &Block2x2) -> Result<EigenPair2x2, DecoupleError> {
    let a = block.a.re;
    let d = block.d.re;
    let m_c = block.a * block.d - block.c * block.b;
    let m = m_c.re;
    let k = 0.5 * (a + d);
    if k == 0.0 {
        if m == 0.0 {
            return Ok(EigenPair2x2 { lambda_plus: 0.0, lambda_minus: 0.0, k, m, l: 0.0 });
        }
        return Err(DecoupleError::DegeneratePencil { m });
    }
    let arg = 1.0 - m / (k * k);
    let arg = if arg < 0.0 {
        if arg < -RADICAND_GUARD {
            return Err(DecoupleError::NegativeRadicand { arg });
        }
        0.0
    } else {
        arg
    };
    let l = arg.sqrt();
    let lambda_plus = k * (1.0 + l);
    let lambda_minus = if m == 0.0 { 0.0 } else { m / lambda_plus };
    // Keep the ordering contract even for negative K (not hit by the ring
    // pencils, which are nonnegative).
    let (lambda_plus, lambda_minus) = if lambda_plus >= lambda_minus {
        (lambda_plus, lambda_minus)
    } else {
        (lambda_minus, lambda_plus)
    };
    Ok(EigenPair2x2 { lambda_plus, lambda_minus, k, m, l })
}

/// Amplitude ratio `rho = b / (lambda - a)` of the eigenvector belonging to
/// `lambda`.
pub fn amplitude_ratio(lambda: f64, block: &Block2x2) -> Result<Complex64, RatioError> {
    let denom = lambda - block.a.re;
    if denom == 0.0 {
        if block.b.norm() == 0.0 {
            return Err(RatioError::PureAxisMode);
        }
        return Err(RatioError::Pole);
    }
    Ok(block.b / Complex64::new(denom, 0.0))
}

/// Relative real-part tolerance below which an off-diagonal entry counts as
/// purely imaginary.
const IMAGINARY_TOL: f64 = 1e-13;

/// Physical amplitude ratio for the ring's discrete blocks.
///
/// The coupling circulants are skew-symmetric, so `b` is purely imaginary;
/// under the sine/cosine mode convention the physical circumferential /
/// transverse amplitude ratio is the real number `Im(b) / (lambda - a)`.
pub fn physical_amplitude_ratio(lambda: f64, block: &Block2x2) -> Result<f64, RatioError> {
    let abs = block.b.norm();
    if abs > 0.0 && block.b.re.abs() > IMAGINARY_TOL * abs {
        return Err(RatioError::NotImaginary { re: block.b.re.abs(), abs });
    }
    let denom = lambda - block.a.re;
    if denom == 0.0 {
        if abs == 0.0 {
            return Err(RatioError::PureAxisMode);
        }
        return Err(RatioError::Pole);
    }
    Ok(block.b.im / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn spec(vals: &[(i64, i64)], sym: Symmetry) -> CirculantSpec {
        CirculantSpec::new(vals.iter().map(|&(n, d)| rat(n, d)).collect(), sym).unwrap()
    }

    #[test]
    fn identity_circulant_has_unit_eigenvalues() {
        let s = spec(&[(1, 1), (0, 1), (0, 1), (0, 1)], Symmetry::Symmetric);
        for j in 0..4 {
            let ev = circulant_eigenvalue(&s, j).unwrap();
            assert_eq!(ev, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn symmetric_second_difference_row() {
        // N=4, c = (2, -1, 0, -1): eigenvalue at j=1 is 2 - w - w^3 = 2.
        let s = spec(&[(2, 1), (-1, 1), (0, 1), (-1, 1)], Symmetry::Symmetric);
        let ev = circulant_eigenvalue(&s, 1).unwrap();
        assert!((ev.re - 2.0).abs() < 1e-15);
        assert_eq!(ev.im, 0.0);
    }

    #[test]
    fn skew_row_gives_imaginary_eigenvalue() {
        // N=4, c = (0, 1, 0, -1): eigenvalue at j=1 is 2 i sin(pi/2) = 2i.
        let s = spec(&[(0, 1), (1, 1), (0, 1), (-1, 1)], Symmetry::SkewSymmetric);
        let ev = circulant_eigenvalue(&s, 1).unwrap();
        assert_eq!(ev.re, 0.0);
        assert!((ev.im - 2.0).abs() < 1e-15);
    }

    #[test]
    fn index_out_of_range_is_an_error() {
        let s = spec(&[(1, 1), (0, 1)], Symmetry::Symmetric);
        assert_eq!(
            circulant_eigenvalue(&s, 2),
            Err(CirculantError::IndexOutOfRange { index: 2, size: 2 })
        );
    }

    #[test]
    fn symmetry_validation_rejects_bad_rows() {
        let r = CirculantSpec::new(vec![rat(0, 1), rat(1, 1), rat(1, 1)], Symmetry::SkewSymmetric);
        assert!(matches!(r, Err(CirculantError::SymmetryViolated(_))));
    }

    #[test]
    fn stencil_folding_accumulates_wraparound() {
        // Skew stencil at offsets +-1, +-2 folded onto N=4: the +-2 legs
        // collide and cancel.
        let st = vec![(1i64, rat(1, 3)), (-1, rat(-1, 3)), (2, rat(1, 8)), (-2, rat(-1, 8))];
        let s = CirculantSpec::from_stencil(&st, 4, Symmetry::SkewSymmetric).unwrap();
        assert!(s.coeffs()[2].is_zero());
        assert_eq!(s.coeffs()[1], rat(1, 3));
    }

    /// Dense residual check: the j-th Fourier vector is an eigenvector of
    /// the densely assembled circulant.
    fn dense_residual(s: &CirculantSpec, j: usize) -> f64 {
        let n = s.size();
        let dense = s.to_dense();
        let lam = circulant_eigenvalue(s, j).unwrap();
        let v: Vec<Complex64> = (0..n)
            .map(|k| {
                let x = 2.0 * (j as f64) * (k as f64) / (n as f64);
                Complex64::new(cos_pi(x), sin_pi(x)) / (n as f64).sqrt()
            })
            .collect();
        let mut res = 0.0f64;
        let mut norm_c = 0.0f64;
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += Complex64::new(dense[i][k], 0.0) * v[k];
                norm_c += dense[i][k] * dense[i][k];
            }
            res += (acc - lam * v[i]).norm_sqr();
        }
        res.sqrt() / norm_c.sqrt().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn eigenvector_residual_small_for_all_modes() {
        let s = spec(
            &[(11, 20), (13, 60), (1, 120), (0, 1), (0, 1), (0, 1), (1, 120), (13, 60)],
            Symmetry::Symmetric,
        );
        for j in 0..8 {
            assert!(dense_residual(&s, j) < 1e-12);
        }
    }

    #[test]
    fn conjugate_modes_coincide_for_symmetric_rows() {
        let s = spec(
            &[(6, 1), (-4, 1), (1, 1), (0, 1), (0, 1), (0, 1), (0, 1), (1, 1), (-4, 1)],
            Symmetry::Symmetric,
        );
        for j in 1..=4 {
            let a = circulant_eigenvalue(&s, j).unwrap().re;
            let b = circulant_eigenvalue(&s, 9 - j).unwrap().re;
            assert!((a - b).abs() <= 1e-13 * s.l1_norm());
        }
    }

    #[test]
    fn decouple_scaled_identity() {
        let b = Block2x2::hermitian(1.0, Complex64::new(0.0, 0.0), 1.0);
        let e = decouple_2x2(&b).unwrap();
        assert_eq!((e.lambda_plus, e.lambda_minus, e.l), (1.0, 1.0, 0.0));
    }

    #[test]
    fn decouple_matches_quadratic_roots() {
        // a=2, d=0, b=c=1: lambda^2 - 2 lambda - 1 = 0.
        let b = Block2x2 {
            a: Complex64::new(2.0, 0.0),
            b: Complex64::new(1.0, 0.0),
            c: Complex64::new(1.0, 0.0),
            d: Complex64::new(0.0, 0.0),
        };
        let e = decouple_2x2(&b).unwrap();
        assert!((e.lambda_plus - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        assert!((e.lambda_minus - (1.0 - 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn decouple_hermitian_imaginary_coupling() {
        // [[1, i], [-i, 1]] has eigenvalues 2 and 0.
        let b = Block2x2::hermitian(1.0, Complex64::new(0.0, 1.0), 1.0);
        let e = decouple_2x2(&b).unwrap();
        assert!((e.lambda_plus - 2.0).abs() < 1e-15);
        assert!(e.lambda_minus.abs() < 1e-15);
    }

    #[test]
    fn degenerate_pencil_is_an_error() {
        let b = Block2x2::hermitian(1.0, Complex64::new(0.0, 2.0), -1.0);
        assert!(matches!(decouple_2x2(&b), Err(DecoupleError::DegeneratePencil { .. })));
    }

    #[test]
    fn ratio_examples() {
        let b = Block2x2::hermitian(0.0, Complex64::new(1.0, 0.0), 0.0);
        assert_eq!(amplitude_ratio(1.0, &b).unwrap(), Complex64::new(1.0, 0.0));

        // a=2, b=1, lambda = 1 + sqrt(2): rho = 1/(sqrt(2)-1) = 1 + sqrt(2).
        let b = Block2x2::hermitian(2.0, Complex64::new(1.0, 0.0), 0.0);
        let rho = amplitude_ratio(1.0 + 2f64.sqrt(), &b).unwrap();
        assert!((rho.re - (1.0 + 2f64.sqrt())).abs() < 1e-14);

        // [[1, i], [-i, 1]] at lambda=2: physical ratio Im(b)/(2-1) = 1.
        let b = Block2x2::hermitian(1.0, Complex64::new(0.0, 1.0), 1.0);
        assert_eq!(physical_amplitude_ratio(2.0, &b).unwrap(), 1.0);
    }

    #[test]
    fn ratio_pole_cases_are_distinct() {
        let b = Block2x2::hermitian(1.0, Complex64::new(0.0, 1.0), 1.0);
        assert_eq!(amplitude_ratio(1.0, &b), Err(RatioError::Pole));
        let b0 = Block2x2::hermitian(1.0, Complex64::new(0.0, 0.0), 2.0);
        assert_eq!(amplitude_ratio(1.0, &b0), Err(RatioError::PureAxisMode));
    }

    proptest! {
        /// Symmetric specs have eigenvalues with negligible imaginary part
        /// even when evaluated through the general complex sum.
        #[test]
        fn symmetric_rows_have_real_spectrum(vals in proptest::collection::vec(-50i64..50, 3..8), j in 0usize..16) {
            let n = vals.len() * 2;
            let mut row = vec![0i64; n];
            row[0] = vals[0];
            for (k, v) in vals.iter().enumerate().skip(1) {
                row[k] = *v;
                row[n - k] = *v;
            }
            let coeffs: Vec<BigRational> = row.iter().map(|&v| rat(v, 7)).collect();
            let general = CirculantSpec::new(coeffs.clone(), Symmetry::General).unwrap();
            let sym = CirculantSpec::new(coeffs, Symmetry::Symmetric).unwrap();
            let j = j % n;
            let ev_g = circulant_eigenvalue(&general, j).unwrap();
            let ev_s = circulant_eigenvalue(&sym, j).unwrap();
            prop_assert!(ev_g.im.abs() < 1e-13 * sym.l1_norm().max(1.0));
            prop_assert!((ev_g.re - ev_s.re).abs() < 1e-12 * sym.l1_norm().max(1.0));
        }

        /// decouple_2x2 satisfies the trace and determinant identities.
        #[test]
        fn decouple_trace_det(a in -100.0f64..100.0, d in -100.0f64..100.0, bim in -50.0f64..50.0) {
            let block = Block2x2::hermitian(a, Complex64::new(0.0, bim), d);
            if let Ok(e) = decouple_2x2(&block) {
                let scale = (a.abs() + d.abs() + bim.abs()).max(1.0);
                prop_assert!((e.lambda_plus + e.lambda_minus - (a + d)).abs() < 1e-12 * scale);
                prop_assert!((e.lambda_plus * e.lambda_minus - e.m).abs() < 1e-12 * scale * scale);
                prop_assert!(e.lambda_plus >= e.lambda_minus);
            }
        }
    }
}
