//! Circulant coefficient tables of the standard and mixed spline Galerkin
//! formulations, degrees 2-4.
//!
//! Each named matrix is circulant; its first row is determined by a short
//! list of exact rational coefficients together with a symmetry pattern and
//! a scale factor `h^a * R^b * Ibar^c` (with `Ibar = tbar^2 / 12`). The
//! dimensionless rows are what enters every closed-form spectrum
//! expression; the scale factors reattach the physics.
//!
//! The shipped rows are hard-coded constants; [`verify_tables`] recomputes
//! every entry from first principles through exact B-spline integration and
//! compares by exact rational equality.

use std::collections::BTreeMap;
use std::fmt;

use num::complex::Complex64;
use num::BigRational;
use thiserror::Error;

use crate::bspline::{inner_product_coefficient, rational};
use crate::circulant::rat_to_f64;
use crate::trig::{cos_pi, sin_pi};

/// Galerkin formulation selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    Standard,
    Mixed,
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formulation::Standard => write!(f, "standard"),
            Formulation::Mixed => write!(f, "mixed"),
        }
    }
}

/// Names of the circulant blocks appearing in the two formulations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[allow(non_camel_case_types)]
pub enum MatrixName {
    M,
    K11m,
    K12m,
    K22m,
    K11b,
    K12b,
    K22b,
    Kee11,
    Kee22,
    Keu11,
    Keu12,
    Keu21,
    Keu22,
}

impl fmt::Display for MatrixName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MatrixName::M => "M",
            MatrixName::K11m => "K11m",
            MatrixName::K12m => "K12m",
            MatrixName::K22m => "K22m",
            MatrixName::K11b => "K11b",
            MatrixName::K12b => "K12b",
            MatrixName::K22b => "K22b",
            MatrixName::Kee11 => "Kee11",
            MatrixName::Kee22 => "Kee22",
            MatrixName::Keu11 => "Keu11",
            MatrixName::Keu12 => "Keu12",
            MatrixName::Keu21 => "Keu21",
            MatrixName::Keu22 => "Keu22",
        };
        write!(f, "{s}")
    }
}

/// First-row symmetry pattern of a banded circulant.
///
/// The plain patterns mirror about offset 0 (`c_k = +-c_{N-k}`); the shift
/// patterns, which arise from pairing the degree-(p-1) strain basis with the
/// degree-p displacement basis, mirror about offset -1/2
/// (`c_k = +-c_{N-1-k}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    Symmetric,
    SkewSymmetric,
    ShiftSymmetric,
    ShiftSkewSymmetric,
}

/// Scale factor `h^h_exp * R^r_exp * Ibar^ibar_exp` multiplying the
/// dimensionless row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scale {
    pub h_exp: i32,
    pub r_exp: i32,
    pub ibar_exp: u8,
}

impl Scale {
    pub fn factor(&self, h: f64, radius: f64, ibar: f64) -> f64 {
        h.powi(self.h_exp) * radius.powi(self.r_exp) * ibar.powi(self.ibar_exp as i32)
    }
}

/// One named circulant row: one-sided coefficients `c_0..c_bw`, the pattern
/// that completes the first row, and the physical scale.
#[derive(Debug, Clone)]
pub struct TableEntry {
    pub name: MatrixName,
    pub coeffs: Vec<BigRational>,
    pub pattern: Pattern,
    pub scale: Scale,
}

impl TableEntry {
    /// Bandwidth (largest nonzero offset magnitude is `bw` or `bw + 1` for
    /// shift patterns).
    pub fn bandwidth(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Expand to the full stencil `(offset, value)` on the integer line.
    pub fn stencil(&self) -> Vec<(i64, BigRational)> {
        let mut out = Vec::new();
        match self.pattern {
            Pattern::Symmetric => {
                out.push((0, self.coeffs[0].clone()));
                for (k, c) in self.coeffs.iter().enumerate().skip(1) {
                    out.push((k as i64, c.clone()));
                    out.push((-(k as i64), c.clone()));
                }
            }
            Pattern::SkewSymmetric => {
                for (k, c) in self.coeffs.iter().enumerate().skip(1) {
                    out.push((k as i64, c.clone()));
                    out.push((-(k as i64), -c.clone()));
                }
            }
            Pattern::ShiftSymmetric => {
                for (k, c) in self.coeffs.iter().enumerate() {
                    out.push((k as i64, c.clone()));
                    out.push((-1 - k as i64, c.clone()));
                }
            }
            Pattern::ShiftSkewSymmetric => {
                for (k, c) in self.coeffs.iter().enumerate() {
                    out.push((k as i64, c.clone()));
                    out.push((-1 - k as i64, -c.clone()));
                }
            }
        }
        out
    }

    /// Dimensionless eigenvalue evaluator for this row.
    pub fn row_eval(&self) -> RowEval {
        RowEval::new(self)
    }
}

/// Closed-form eigenvalue of a dimensionless circulant row as a function of
/// the angle `theta = pi * x` (`x = 2n/N` is twice the normalized mode
/// number divided by... i.e. `x = n h / pi`). Independent of N: the stencil
/// DFT sum `sum_k c_k exp(i k theta)` only sees the angle, so folding the
/// stencil onto any period N that realizes the angle gives the same value.
#[derive(Debug, Clone)]
pub struct RowEval {
    coeffs: Vec<f64>,
    pattern: Pattern,
    /// exact value at theta = 0 (rational sum, converted once)
    at_zero: f64,
    /// exact value at theta = pi for plain symmetric rows
    at_pi: f64,
}

impl RowEval {
    fn new(entry: &TableEntry) -> Self {
        let coeffs: Vec<f64> = entry.coeffs.iter().map(rat_to_f64).collect();
        let zero_rat: BigRational = match entry.pattern {
            Pattern::Symmetric => entry
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k == 0 { c.clone() } else { c * rational(2, 1) })
                .sum(),
            Pattern::SkewSymmetric => rational(0, 1),
            Pattern::ShiftSymmetric => entry.coeffs.iter().map(|c| c * rational(2, 1)).sum(),
            Pattern::ShiftSkewSymmetric => rational(0, 1),
        };
        let pi_rat: BigRational = match entry.pattern {
            Pattern::Symmetric => entry
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let w = if k == 0 { 1 } else if k % 2 == 0 { 2 } else { -2 };
                    c * rational(w, 1)
                })
                .sum(),
            _ => rational(0, 1),
        };
        Self { coeffs, pattern: entry.pattern, at_zero: rat_to_f64(&zero_rat), at_pi: rat_to_f64(&pi_rat) }
    }

    /// Evaluate at `x = theta / pi`.
    pub fn eval(&self, x: f64) -> Complex64 {
        let xr = x.rem_euclid(2.0);
        match self.pattern {
            Pattern::Symmetric => {
                if xr == 0.0 {
                    return Complex64::new(self.at_zero, 0.0);
                }
                if xr == 1.0 {
                    return Complex64::new(self.at_pi, 0.0);
                }
                let mut re = self.coeffs[0];
                for (k, c) in self.coeffs.iter().enumerate().skip(1) {
                    re += 2.0 * c * cos_pi(k as f64 * x);
                }
                Complex64::new(re, 0.0)
            }
            Pattern::SkewSymmetric => {
                let mut im = 0.0;
                for (k, c) in self.coeffs.iter().enumerate().skip(1) {
                    im += 2.0 * c * sin_pi(k as f64 * x);
                }
                Complex64::new(0.0, im)
            }
            Pattern::ShiftSymmetric => {
                if xr == 0.0 {
                    return Complex64::new(self.at_zero, 0.0);
                }
                let mut s = 0.0;
                for (k, c) in self.coeffs.iter().enumerate() {
                    s += 2.0 * c * cos_pi((k as f64 + 0.5) * x);
                }
                half_phase(x) * s
            }
            Pattern::ShiftSkewSymmetric => {
                let mut s = 0.0;
                for (k, c) in self.coeffs.iter().enumerate() {
                    s += 2.0 * c * sin_pi((k as f64 + 0.5) * x);
                }
                half_phase(x) * Complex64::new(0.0, s)
            }
        }
    }

    /// Real part of the eigenvalue (valid for symmetric rows).
    pub fn eval_re(&self, x: f64) -> f64 {
        self.eval(x).re
    }

    /// Imaginary part of the eigenvalue (valid for skew rows).
    pub fn eval_im(&self, x: f64) -> f64 {
        self.eval(x).im
    }
}

/// `exp(-i theta / 2)` for `theta = pi x`.
fn half_phase(x: f64) -> Complex64 {
    Complex64::new(cos_pi(0.5 * x), -sin_pi(0.5 * x))
}

#[derive(Debug, Error, PartialEq)]
pub enum TableError {
    #[error("unsupported spline degree {0}; shipped tables cover p = 2, 3, 4")]
    UnsupportedDegree(u8),
}

/// Complete coefficient table of one formulation at one degree.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    pub degree: u8,
    pub formulation: Formulation,
    entries: BTreeMap<MatrixName, TableEntry>,
}

impl CoefficientTable {
    pub fn entry(&self, name: MatrixName) -> &TableEntry {
        &self.entries[&name]
    }

    pub fn names(&self) -> impl Iterator<Item = MatrixName> + '_ {
        self.entries.keys().copied()
    }
}

// Published one-sided rows, exact rationals as (numerator, denominator).

const MASS: [&[(i64, i64)]; 3] = [
    &[(11, 20), (13, 60), (1, 120)],
    &[(151, 315), (397, 1680), (1, 42), (1, 5040)],
    &[(15619, 36288), (44117, 181440), (913, 22680), (251, 181440), (1, 362880)],
];

const K11: [&[(i64, i64)]; 3] = [
    &[(1, 1), (-1, 3), (-1, 6)],
    &[(2, 3), (-1, 8), (-1, 5), (-1, 120)],
    &[(35, 72), (-11, 360), (-17, 90), (-59, 2520), (-1, 5040)],
];

const K12M: [&[(i64, i64)]; 3] = [
    &[(0, 1), (5, 12), (1, 24)],
    &[(0, 1), (49, 144), (7, 90), (1, 720)],
    &[(0, 1), (809, 2880), (289, 2880), (41, 6720), (1, 40320)],
];

const K12B: [&[(i64, i64)]; 3] = [
    &[(0, 1), (1, 1), (-1, 2)],
    &[(0, 1), (19, 24), (-1, 3), (-1, 24)],
    &[(0, 1), (217, 360), (-67, 360), (-3, 40), (-1, 720)],
];

const K22B: [&[(i64, i64)]; 3] = [
    &[(6, 1), (-4, 1), (1, 1)],
    &[(8, 3), (-3, 2), (0, 1), (1, 6)],
    &[(19, 12), (-43, 60), (-4, 15), (11, 60), (1, 120)],
];

const KEE: [&[(i64, i64)]; 3] = [
    &[(2, 3), (1, 6)],
    &[(11, 20), (13, 60), (1, 120)],
    &[(151, 315), (397, 1680), (1, 42), (1, 5040)],
];

const KEU11: [&[(i64, i64)]; 3] = [
    &[(-1, 2), (-1, 6)],
    &[(-1, 3), (-5, 24), (-1, 120)],
    &[(-35, 144), (-17, 80), (-17, 720), (-1, 5040)],
];

const KEU12: [&[(i64, i64)]; 3] = [
    &[(11, 24), (1, 24)],
    &[(151, 360), (19, 240), (1, 720)],
    &[(15619, 40320), (477, 4480), (247, 40320), (1, 40320)],
];

const KEU22: [&[(i64, i64)]; 3] = [
    &[(1, 2), (-1, 2)],
    &[(5, 12), (-3, 8), (-1, 24)],
    &[(49, 144), (-21, 80), (-11, 144), (-1, 720)],
];

fn row(data: &[(i64, i64)]) -> Vec<BigRational> {
    data.iter().map(|&(n, d)| rational(n, d)).collect()
}

fn degree_index(p: u8) -> Result<usize, TableError> {
    match p {
        2 | 3 | 4 => Ok(p as usize - 2),
        other => Err(TableError::UnsupportedDegree(other)),
    }
}

/// Assemble the coefficient table for degree `p` and the given formulation.
pub fn build_table(p: u8, formulation: Formulation) -> Result<CoefficientTable, TableError> {
    let i = degree_index(p)?;
    let mut entries = BTreeMap::new();
    let mut put = |name, data: &[(i64, i64)], pattern, scale| {
        entries.insert(name, TableEntry { name, coeffs: row(data), pattern, scale });
    };
    match formulation {
        Formulation::Standard => {
            put(MatrixName::M, MASS[i], Pattern::Symmetric, Scale { h_exp: 1, r_exp: 1, ibar_exp: 0 });
            put(MatrixName::K11m, K11[i], Pattern::Symmetric, Scale { h_exp: -1, r_exp: -1, ibar_exp: 0 });
            put(MatrixName::K11b, K11[i], Pattern::Symmetric, Scale { h_exp: -1, r_exp: -1, ibar_exp: 1 });
            put(MatrixName::K12m, K12M[i], Pattern::SkewSymmetric, Scale { h_exp: 0, r_exp: -1, ibar_exp: 0 });
            put(MatrixName::K12b, K12B[i], Pattern::SkewSymmetric, Scale { h_exp: -2, r_exp: -1, ibar_exp: 1 });
            put(MatrixName::K22m, MASS[i], Pattern::Symmetric, Scale { h_exp: 1, r_exp: -1, ibar_exp: 0 });
            put(MatrixName::K22b, K22B[i], Pattern::Symmetric, Scale { h_exp: -3, r_exp: -1, ibar_exp: 1 });
        }
        Formulation::Mixed => {
            put(MatrixName::M, MASS[i], Pattern::Symmetric, Scale { h_exp: 1, r_exp: 1, ibar_exp: 0 });
            put(MatrixName::Kee11, KEE[i], Pattern::Symmetric, Scale { h_exp: 1, r_exp: 1, ibar_exp: 0 });
            put(MatrixName::Kee22, KEE[i], Pattern::Symmetric, Scale { h_exp: 1, r_exp: 3, ibar_exp: 1 });
            put(MatrixName::Keu11, KEU11[i], Pattern::ShiftSkewSymmetric, Scale { h_exp: 0, r_exp: 0, ibar_exp: 0 });
            put(MatrixName::Keu21, KEU11[i], Pattern::ShiftSkewSymmetric, Scale { h_exp: 0, r_exp: 1, ibar_exp: 1 });
            put(MatrixName::Keu12, KEU12[i], Pattern::ShiftSymmetric, Scale { h_exp: 1, r_exp: 0, ibar_exp: 0 });
            put(MatrixName::Keu22, KEU22[i], Pattern::ShiftSymmetric, Scale { h_exp: -1, r_exp: 1, ibar_exp: 1 });
        }
    }
    Ok(CoefficientTable { degree: p, formulation, entries })
}

/// Integration recipe reproducing a published row:
/// `c_k = sign * integral of phi_{dr}^{(r)}(x) phi_{dc}^{(s)}(x - k) dx`.
struct Recipe {
    label: &'static str,
    row_degree_offset: i8,
    col_degree_offset: i8,
    r: usize,
    s: usize,
    sign: i64,
    data: &'static [&'static [(i64, i64)]; 3],
    pattern: Pattern,
}

const STANDARD_RECIPES: [Recipe; 5] = [
    Recipe { label: "mass", row_degree_offset: 0, col_degree_offset: 0, r: 0, s: 0, sign: 1, data: &MASS, pattern: Pattern::Symmetric },
    Recipe { label: "K11m", row_degree_offset: 0, col_degree_offset: 0, r: 1, s: 1, sign: 1, data: &K11, pattern: Pattern::Symmetric },
    Recipe { label: "K12m", row_degree_offset: 0, col_degree_offset: 0, r: 0, s: 1, sign: 1, data: &K12M, pattern: Pattern::SkewSymmetric },
    Recipe { label: "K12b", row_degree_offset: 0, col_degree_offset: 0, r: 1, s: 2, sign: 1, data: &K12B, pattern: Pattern::SkewSymmetric },
    Recipe { label: "K22b", row_degree_offset: 0, col_degree_offset: 0, r: 2, s: 2, sign: 1, data: &K22B, pattern: Pattern::Symmetric },
];

const MIXED_RECIPES: [Recipe; 5] = [
    Recipe { label: "mass", row_degree_offset: 0, col_degree_offset: 0, r: 0, s: 0, sign: 1, data: &MASS, pattern: Pattern::Symmetric },
    Recipe { label: "Kee", row_degree_offset: -1, col_degree_offset: -1, r: 0, s: 0, sign: 1, data: &KEE, pattern: Pattern::Symmetric },
    Recipe { label: "Keu11", row_degree_offset: -1, col_degree_offset: 0, r: 1, s: 0, sign: 1, data: &KEU11, pattern: Pattern::ShiftSkewSymmetric },
    Recipe { label: "Keu12", row_degree_offset: -1, col_degree_offset: 0, r: 0, s: 0, sign: 1, data: &KEU12, pattern: Pattern::ShiftSymmetric },
    Recipe { label: "Keu22", row_degree_offset: -1, col_degree_offset: 0, r: 0, s: 2, sign: -1, data: &KEU22, pattern: Pattern::ShiftSymmetric },
];

/// One mismatch found by [`verify_tables`].
#[derive(Debug, Clone)]
pub struct Mismatch {
    pub row: String,
    pub offset: i64,
    pub published: BigRational,
    pub computed: BigRational,
}

/// Per-row verification outcome.
#[derive(Debug, Clone)]
pub struct RowVerification {
    pub formulation: Formulation,
    pub label: String,
    pub coefficients_checked: usize,
}

/// Verification report: every published coefficient recomputed by exact
/// integration, every pattern mirror checked.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub degree: u8,
    pub rows: Vec<RowVerification>,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn all_match(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn rows_for(&self, formulation: Formulation) -> usize {
        self.rows.iter().filter(|r| r.formulation == formulation).count()
    }
}

/// Recompute every published coefficient of both formulations at degree `p`
/// via exact rational integration; mismatches are report content, not
/// errors.
pub fn verify_tables(p: u8) -> Result<VerifyReport, TableError> {
    let i = degree_index(p)?;
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    let sets: [(Formulation, &[Recipe; 5]); 2] = [
        (Formulation::Standard, &STANDARD_RECIPES),
        (Formulation::Mixed, &MIXED_RECIPES),
    ];
    for (formulation, recipes) in sets {
        for recipe in recipes.iter() {
            let published = row(recipe.data[i]);
            let dr = (p as i8 + recipe.row_degree_offset) as usize;
            let dc = (p as i8 + recipe.col_degree_offset) as usize;
            let mut checked = 0;
            let mut check = |offset: i64, expected: BigRational| {
                let computed = inner_product_coefficient(dr, dc, recipe.r, recipe.s, offset)
                    .expect("recipe derivative orders are valid")
                    * rational(recipe.sign, 1);
                checked += 1;
                if computed != expected {
                    mismatches.push(Mismatch {
                        row: format!("{formulation} {}", recipe.label),
                        offset,
                        published: expected,
                        computed,
                    });
                }
            };
            for (k, c) in published.iter().enumerate() {
                check(k as i64, c.clone());
                // pattern mirror
                match recipe.pattern {
                    Pattern::Symmetric if k > 0 => check(-(k as i64), c.clone()),
                    Pattern::SkewSymmetric if k > 0 => check(-(k as i64), -c.clone()),
                    Pattern::ShiftSymmetric => check(-1 - k as i64, c.clone()),
                    Pattern::ShiftSkewSymmetric => check(-1 - k as i64, -c.clone()),
                    _ => {}
                }
            }
            // the stencil must end where the published bandwidth says it does
            check(published.len() as i64, BigRational::from_integer(0.into()));
            rows.push(RowVerification {
                formulation,
                label: recipe.label.to_string(),
                coefficients_checked: checked,
            });
        }
    }
    Ok(VerifyReport { degree: p, rows, mismatches })
}

/// Dimensionless row evaluators of the standard formulation.
pub struct StandardRows {
    pub mass: RowEval,
    pub k11: RowEval,
    pub k12m: RowEval,
    pub k12b: RowEval,
    pub k22b: RowEval,
}

pub fn standard_rows(p: u8) -> Result<StandardRows, TableError> {
    let t = build_table(p, Formulation::Standard)?;
    Ok(StandardRows {
        mass: t.entry(MatrixName::M).row_eval(),
        k11: t.entry(MatrixName::K11m).row_eval(),
        k12m: t.entry(MatrixName::K12m).row_eval(),
        k12b: t.entry(MatrixName::K12b).row_eval(),
        k22b: t.entry(MatrixName::K22b).row_eval(),
    })
}

/// Dimensionless row evaluators of the mixed formulation.
pub struct MixedRows {
    pub mass: RowEval,
    pub gram: RowEval,
    pub keu11: RowEval,
    pub keu12: RowEval,
    pub keu22: RowEval,
}

pub fn mixed_rows(p: u8) -> Result<MixedRows, TableError> {
    let t = build_table(p, Formulation::Mixed)?;
    Ok(MixedRows {
        mass: t.entry(MatrixName::M).row_eval(),
        gram: t.entry(MatrixName::Kee11).row_eval(),
        keu11: t.entry(MatrixName::Keu11).row_eval(),
        keu12: t.entry(MatrixName::Keu12).row_eval(),
        keu22: t.entry(MatrixName::Keu22).row_eval(),
    })
}
