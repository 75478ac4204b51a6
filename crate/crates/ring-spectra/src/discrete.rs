//! Discrete per-mode blocks of the spline Galerkin formulations.
//!
//! The mass and stiffness matrices of both formulations are 2x2 block
//! matrices with circulant blocks, so the discrete Fourier basis decouples
//! the eigenvalue problem into one 2x2 pencil per mode number n. The block
//! entries are assembled from the dimensionless table rows evaluated at the
//! angle `theta = n h` with the published scale factors reattached; the
//! mixed formulation is statically condensed mode by mode (the per-mode
//! block eigenvalues are scalars, so condensation commutes with the Fourier
//! decoupling).

use num::complex::Complex64;
use thiserror::Error;

use crate::analytic::{analytic_eigenvalues, RingParams};
use crate::circulant::{decouple_2x2, physical_amplitude_ratio, Block2x2, DecoupleError, RatioError};
use crate::tables::{mixed_rows, standard_rows, Formulation, MixedRows, StandardRows, TableError};

#[derive(Debug, Error, PartialEq)]
pub enum DiscretizationError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("need at least 2 elements, got {0}")]
    TooFewElements(usize),
}

#[derive(Debug, Error, PartialEq)]
pub enum SpectrumError {
    #[error("mode index {index} out of range for {elements} elements")]
    ModeOutOfRange { index: usize, elements: usize },
    #[error("strain Gram eigenvalue {value} is not positive at mode {mode}")]
    GramNotPositive { mode: usize, value: f64 },
    #[error(transparent)]
    Decouple(#[from] DecoupleError),
}

/// Periodic spline discretization of the ring: N elements of size
/// `h = 2 pi / N`, spline degree p per displacement field.
///
/// Unique Fourier modes run from 0 to N/2; the normalized mode number of
/// mode n is `xi = n h / pi = 2n/N`, which spans (0, 1] over the unique
/// nonzero modes.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Discretization {
    pub degree: u8,
    pub elements: usize,
    pub formulation: Formulation,
}

impl Discretization {
    pub fn new(degree: u8, elements: usize, formulation: Formulation) -> Result<Self, DiscretizationError> {
        // degree validation via the table lookup
        crate::tables::build_table(degree, formulation)?;
        if elements < 2 {
            return Err(DiscretizationError::TooFewElements(elements));
        }
        Ok(Self { degree, elements, formulation })
    }

    pub fn mesh_size(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.elements as f64
    }

    /// Normalized mode number of mode n (`theta / pi`).
    pub fn xi(&self, n: usize) -> f64 {
        2.0 * n as f64 / self.elements as f64
    }

    /// Largest unique mode index (floor of N/2).
    pub fn max_unique_mode(&self) -> usize {
        self.elements / 2
    }
}

/// Mass-normalized discrete 2x2 pencil block at one mode: the off-diagonal
/// entry is purely imaginary because the coupling circulants are
/// skew-symmetric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteModeBlock {
    pub a: f64,
    pub b_im: f64,
    pub d: f64,
    /// Mass circulant eigenvalue (positive: the mass is SPD).
    pub mass: f64,
}

impl DiscreteModeBlock {
    pub fn to_block(&self) -> Block2x2 {
        Block2x2::hermitian(self.a, Complex64::new(0.0, self.b_im), self.d)
    }
}

/// Standard-formulation block at mode n.
pub fn mode_block_standard(
    n: usize,
    disc: &Discretization,
    params: &RingParams,
) -> Result<DiscreteModeBlock, SpectrumError> {
    let rows = standard_rows(disc.degree).expect("degree validated at construction");
    standard_block_at(disc.xi(n), disc.mesh_size(), &rows, params, n, disc.elements)
}

fn standard_block_at(
    x: f64,
    h: f64,
    rows: &StandardRows,
    params: &RingParams,
    n: usize,
    elements: usize,
) -> Result<DiscreteModeBlock, SpectrumError> {
    if n >= elements {
        return Err(SpectrumError::ModeOutOfRange { index: n, elements });
    }
    let ibar = params.ibar();
    let r2 = params.radius() * params.radius();
    let m = rows.mass.eval_re(x);
    let k11 = rows.k11.eval_re(x);
    let k12m = rows.k12m.eval_im(x);
    let k12b = rows.k12b.eval_im(x);
    let k22b = rows.k22b.eval_re(x);
    let h2 = h * h;
    let a = (1.0 + ibar) * k11 / (m * r2 * h2);
    let b_im = (k12m + ibar * k12b / h2) / (m * r2 * h);
    let d = (1.0 + ibar * k22b / (m * h2 * h2)) / r2;
    Ok(DiscreteModeBlock { a, b_im, d, mass: m * params.radius() * h })
}

/// Mixed-formulation block at mode n, statically condensed.
///
/// Per mode the saddle system has scalar blocks; eliminating the strain
/// unknowns gives `K = conj(Keu) Kee^{-1} Keu` entrywise (transposition of
/// a real circulant conjugates its eigenvalues), which is Hermitian
/// nonnegative by construction.
pub fn mode_block_mixed(
    n: usize,
    disc: &Discretization,
    params: &RingParams,
) -> Result<DiscreteModeBlock, SpectrumError> {
    let rows = mixed_rows(disc.degree).expect("degree validated at construction");
    mixed_block_at(disc.xi(n), disc.mesh_size(), &rows, params, n, disc.elements)
}

fn mixed_block_at(
    x: f64,
    h: f64,
    rows: &MixedRows,
    params: &RingParams,
    n: usize,
    elements: usize,
) -> Result<DiscreteModeBlock, SpectrumError> {
    if n >= elements {
        return Err(SpectrumError::ModeOutOfRange { index: n, elements });
    }
    let ibar = params.ibar();
    let r2 = params.radius() * params.radius();
    let m = rows.mass.eval_re(x);
    let g = rows.gram.eval_re(x);
    if !(g > 0.0) {
        return Err(SpectrumError::GramNotPositive { mode: n, value: g });
    }
    let e11 = rows.keu11.eval(x);
    let e12 = rows.keu12.eval(x);
    let e22 = rows.keu22.eval(x);
    let h2 = h * h;
    // membrane + bending contributions of the condensed stiffness, already
    // divided by the mass eigenvalue M = R h m
    let a = (1.0 + ibar) * e11.norm_sqr() / (g * m * r2 * h2);
    let b = e11.conj() * (e12 + e22 * (ibar / h2)) / (g * m * r2 * h);
    let d = (e12.norm_sqr() + ibar * e22.norm_sqr() / (h2 * h2)) / (g * m * r2);
    Ok(DiscreteModeBlock { a, b_im: b.im, d, mass: m * params.radius() * h })
}

/// One spectrum entry: eigenvalue pair and physical amplitude ratios at one
/// mode number. Ratios are `None` where undefined (pure circumferential
/// modes).
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SpectrumPoint {
    pub n: usize,
    pub xi: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub rho_plus: Option<f64>,
    pub rho_minus: Option<f64>,
}

/// Discrete spectrum over all modes n = 0 .. N-1 (modes n and N-n carry the
/// same eigenvalues).
#[derive(Debug, Clone)]
pub struct DiscreteSpectrum {
    pub disc: Discretization,
    pub params: RingParams,
    pub points: Vec<SpectrumPoint>,
}

/// Discrete block at mode n for either formulation.
pub fn mode_block(
    n: usize,
    disc: &Discretization,
    params: &RingParams,
) -> Result<DiscreteModeBlock, SpectrumError> {
    match disc.formulation {
        Formulation::Standard => mode_block_standard(n, disc, params),
        Formulation::Mixed => mode_block_mixed(n, disc, params),
    }
}

fn ratio_opt(r: Result<f64, RatioError>) -> Option<f64> {
    r.ok()
}

/// Decouple one block into a spectrum point.
pub fn spectrum_point(
    n: usize,
    disc: &Discretization,
    params: &RingParams,
) -> Result<SpectrumPoint, SpectrumError> {
    let block = mode_block(n, disc, params)?.to_block();
    let pair = decouple_2x2(&block)?;
    Ok(SpectrumPoint {
        n,
        xi: disc.xi(n),
        lambda_plus: pair.lambda_plus,
        lambda_minus: pair.lambda_minus,
        rho_plus: ratio_opt(physical_amplitude_ratio(pair.lambda_plus, &block)),
        rho_minus: ratio_opt(physical_amplitude_ratio(pair.lambda_minus, &block)),
    })
}

/// Full discrete spectrum; per-mode work is independent and deterministic.
pub fn discrete_spectrum(
    disc: &Discretization,
    params: &RingParams,
) -> Result<DiscreteSpectrum, SpectrumError> {
    let points = (0..disc.elements)
        .map(|n| spectrum_point(n, disc, params))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DiscreteSpectrum { disc: *disc, params: *params, points })
}

/// Relative eigenvalue error `|lambda^h - lambda| / lambda` of mode
/// `(n, branch)`; `None` where the exact eigenvalue vanishes (n = 0, 1 on
/// the minus branch).
pub fn relative_error(
    point: &SpectrumPoint,
    params: &RingParams,
    branch: crate::analytic::Branch,
) -> Option<f64> {
    let (plus, minus) = analytic_eigenvalues(point.n as u32, params);
    let (exact, discrete) = match branch {
        crate::analytic::Branch::Plus => (plus, point.lambda_plus),
        crate::analytic::Branch::Minus => (minus, point.lambda_minus),
    };
    if exact == 0.0 {
        return None;
    }
    Some((discrete - exact).abs() / exact)
}
