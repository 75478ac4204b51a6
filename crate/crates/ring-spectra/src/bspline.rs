//! Cardinal B-splines by repeated convolution, in exact rational arithmetic.
//!
//! `phi_p = phi_{p-1} * 1_[0,1)` is a piecewise polynomial of degree p on
//! [0, p+1] with C^{p-1} smoothness. Inner products of (derivatives of)
//! integer-shifted splines are integrals of polynomial products over unit
//! intervals and evaluate to exact rationals, which is what lets the
//! published stencil tables be checked entry by entry without rounding.

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BsplineError {
    #[error("derivative order {order} exceeds what degree {degree} supports")]
    DerivativeOrder { order: usize, degree: usize },
}

pub(crate) fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Piecewise polynomial on [0, m] with integer breakpoints; piece `i` covers
/// [i, i+1] and stores coefficients in the local coordinate t = x - i,
/// ascending powers, exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePoly {
    pieces: Vec<Vec<BigRational>>,
}

impl PiecewisePoly {
    /// Characteristic function of [0, 1).
    pub fn box_function() -> Self {
        Self { pieces: vec![vec![BigRational::one()]] }
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn piece(&self, i: usize) -> &[BigRational] {
        &self.pieces[i]
    }

    /// Max polynomial degree over the pieces.
    pub fn degree(&self) -> usize {
        self.pieces.iter().map(|p| p.len().saturating_sub(1)).max().unwrap_or(0)
    }

    /// Convolve with the unit box: result(x) = integral of self over [x-1, x].
    pub fn convolve_box(&self) -> Self {
        // Antiderivative F with F(0) = 0, evaluated piecewise; result piece j
        // is F_j(t) - F_{j-1}(t) where F_{-1} = 0 and F beyond the support is
        // the constant total integral.
        let anti: Vec<Vec<BigRational>> = self
            .pieces
            .iter()
            .map(|p| {
                let mut a = vec![BigRational::zero(); p.len() + 1];
                for (m, c) in p.iter().enumerate() {
                    a[m + 1] = c / rational((m + 1) as i64, 1);
                }
                a
            })
            .collect();
        // running constants so that F is continuous across breakpoints
        let mut consts = vec![BigRational::zero(); self.pieces.len() + 1];
        for i in 0..self.pieces.len() {
            let at_one: BigRational = anti[i].iter().fold(BigRational::zero(), |s, c| s + c);
            consts[i + 1] = &consts[i] + at_one;
        }
        let total = consts[self.pieces.len()].clone();
        let f_piece = |j: isize, out: &mut Vec<BigRational>, sign: i64| {
            if j < 0 {
                return; // F = 0 left of the support
            }
            let j = j as usize;
            if j >= anti.len() {
                // F = total integral right of the support
                out[0] += &total * rational(sign, 1);
                return;
            }
            for (m, c) in anti[j].iter().enumerate() {
                out[m] += c * rational(sign, 1);
            }
            out[0] += &consts[j] * rational(sign, 1);
        };
        let mut pieces = Vec::with_capacity(self.pieces.len() + 1);
        for j in 0..=(self.pieces.len() as isize) {
            let len = self.pieces.iter().map(|p| p.len()).max().unwrap_or(0) + 1;
            let mut out = vec![BigRational::zero(); len];
            f_piece(j, &mut out, 1);
            f_piece(j - 1, &mut out, -1);
            while out.len() > 1 && out.last().map(|c| c.is_zero()).unwrap_or(false) {
                out.pop();
            }
            pieces.push(out);
        }
        Self { pieces }
    }

    /// Piecewise derivative (loses one polynomial degree).
    pub fn derivative(&self) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                if p.len() <= 1 {
                    return vec![BigRational::zero()];
                }
                (1..p.len()).map(|m| &p[m] * rational(m as i64, 1)).collect()
            })
            .collect();
        Self { pieces }
    }

    /// Exact evaluation at a rational point; right-continuous at breakpoints,
    /// zero outside the support.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        if x.is_negative() {
            return BigRational::zero();
        }
        let floor = x.floor();
        let i = floor.to_integer();
        let i: usize = match num::ToPrimitive::to_usize(&i) {
            Some(v) if v < self.pieces.len() => v,
            _ => return BigRational::zero(),
        };
        let t = x - floor;
        horner(&self.pieces[i], &t)
    }

    /// Jump of the d-th derivative at interior breakpoint `k` (exact);
    /// zero jump at every interior breakpoint for d <= p-1 is the C^{p-1}
    /// smoothness statement.
    pub fn derivative_jump(&self, d: usize, k: usize) -> BigRational {
        let mut f = self.clone();
        for _ in 0..d {
            f = f.derivative();
        }
        let left = horner(&f.pieces[k - 1], &BigRational::one());
        let right = horner(&f.pieces[k], &BigRational::zero());
        right - left
    }

    /// Exact integral over the whole support.
    pub fn integral(&self) -> BigRational {
        self.pieces
            .iter()
            .map(|p| {
                p.iter()
                    .enumerate()
                    .fold(BigRational::zero(), |s, (m, c)| s + c / rational((m + 1) as i64, 1))
            })
            .fold(BigRational::zero(), |s, v| s + v)
    }
}

fn horner(coeffs: &[BigRational], t: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

/// Cardinal B-spline of degree p on [0, p+1], built by repeated box
/// convolution; `phi_0` is the characteristic function of [0, 1).
pub fn cardinal_bspline(p: usize) -> PiecewisePoly {
    let mut phi = PiecewisePoly::box_function();
    for _ in 0..p {
        phi = phi.convolve_box();
    }
    phi
}

/// Exact inner product of shifted spline derivatives:
/// `integral of phi_{p_row}^{(r)}(x) * phi_{p_col}^{(s)}(x - k) dx`.
///
/// Empty support overlap returns exactly zero.
pub fn inner_product_coefficient(
    p_row: usize,
    p_col: usize,
    r: usize,
    s: usize,
    k: i64,
) -> Result<BigRational, BsplineError> {
    if r > p_row {
        return Err(BsplineError::DerivativeOrder { order: r, degree: p_row });
    }
    if s > p_col {
        return Err(BsplineError::DerivativeOrder { order: s, degree: p_col });
    }
    let mut f = cardinal_bspline(p_row);
    for _ in 0..r {
        f = f.derivative();
    }
    let mut g = cardinal_bspline(p_col);
    for _ in 0..s {
        g = g.derivative();
    }
    // piece i of f pairs with piece i-k of g (both in the same local coord)
    let mut acc = BigRational::zero();
    for i in 0..f.piece_count() as i64 {
        let j = i - k;
        if j < 0 || j >= g.piece_count() as i64 {
            continue;
        }
        acc += integrate_product_unit(f.piece(i as usize), g.piece(j as usize));
    }
    Ok(acc)
}

/// integral over [0,1] of the product of two local polynomials.
fn integrate_product_unit(a: &[BigRational], b: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (m, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (l, cb) in b.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            acc += ca * cb / rational((m + l + 1) as i64, 1);
        }
    }
    acc
}
