//! Dense-assembly oracle for the per-mode spectrum route.
//!
//! Assembles the full block-circulant mass and stiffness matrices (the
//! mixed formulation is condensed to displacement form by block
//! elimination), reduces the generalized problem to standard form through a
//! Cholesky factorization of the SPD mass, and diagonalizes with cyclic
//! Jacobi rotations. Entirely self-contained so it stays independent of the
//! Fourier decoupling it is meant to check.

use num::BigRational;
use thiserror::Error;

use crate::analytic::RingParams;
use crate::circulant::rat_to_f64;
use crate::discrete::Discretization;
use crate::tables::{build_table, Formulation, MatrixName, TableEntry};

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("dense oracle is test-scale only: {0} elements exceeds 64")]
    TooLarge(usize),
    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("Jacobi sweep limit reached before off-diagonal tolerance")]
    NoConvergence,
}

/// Square dense matrix in row-major storage.
#[derive(Debug, Clone)]
pub struct DenseMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Fold a stencil onto an N-periodic circulant and place it as a dense
/// block at `(row0, col0)`, scaled by `factor`.
fn add_circulant_block(
    out: &mut DenseMatrix,
    row0: usize,
    col0: usize,
    n: usize,
    stencil: &[(i64, BigRational)],
    factor: f64,
) {
    let mut first_row = vec![0.0f64; n];
    let mut exact = vec![BigRational::from_integer(0.into()); n];
    for (off, c) in stencil {
        let k = off.rem_euclid(n as i64) as usize;
        exact[k] += c;
    }
    for (k, c) in exact.iter().enumerate() {
        first_row[k] = rat_to_f64(c) * factor;
    }
    for i in 0..n {
        for j in 0..n {
            *out.at_mut(row0 + i, col0 + j) += first_row[(j + n - i) % n];
        }
    }
}

fn block_of(
    entry: &TableEntry,
    n: usize,
    h: f64,
    params: &RingParams,
) -> (Vec<(i64, BigRational)>, f64) {
    (entry.stencil(), entry.scale.factor(h, params.radius(), params.ibar()))
}

/// Assembled (stiffness, mass) pair of the standard formulation: 2N x 2N.
pub fn assemble_standard(disc: &Discretization, params: &RingParams) -> (DenseMatrix, DenseMatrix) {
    let n = disc.elements;
    let h = disc.mesh_size();
    let t = build_table(disc.degree, Formulation::Standard).expect("validated degree");
    let mut k = DenseMatrix::zeros(2 * n);
    let mut m = DenseMatrix::zeros(2 * n);
    for (name, r0, c0) in [
        (MatrixName::K11m, 0, 0),
        (MatrixName::K11b, 0, 0),
        (MatrixName::K12m, 0, n),
        (MatrixName::K12b, 0, n),
        (MatrixName::K22m, n, n),
        (MatrixName::K22b, n, n),
    ] {
        let (st, f) = block_of(t.entry(name), n, h, params);
        add_circulant_block(&mut k, r0, c0, n, &st, f);
    }
    // K21 = K12^T
    for i in 0..n {
        for j in 0..n {
            *k.at_mut(n + i, j) = k.at(j, n + i);
        }
    }
    let (st, f) = block_of(t.entry(MatrixName::M), n, h, params);
    add_circulant_block(&mut m, 0, 0, n, &st, f);
    add_circulant_block(&mut m, n, n, n, &st, f);
    (k, m)
}

/// Assembled condensed (stiffness, mass) pair of the mixed formulation.
///
/// Builds the strain Gram `Kee` (block diagonal) and coupling `Keu` of the
/// saddle system, then eliminates the strains:
/// `K = Keu^T Kee^{-1} Keu`.
pub fn assemble_mixed(disc: &Discretization, params: &RingParams) -> Result<(DenseMatrix, DenseMatrix), OracleError> {
    let n = disc.elements;
    let h = disc.mesh_size();
    let t = build_table(disc.degree, Formulation::Mixed).expect("validated degree");
    let mut kee = DenseMatrix::zeros(2 * n);
    let mut keu = DenseMatrix::zeros(2 * n);
    for (name, r0, c0) in [(MatrixName::Kee11, 0, 0), (MatrixName::Kee22, n, n)] {
        let (st, f) = block_of(t.entry(name), n, h, params);
        add_circulant_block(&mut kee, r0, c0, n, &st, f);
    }
    for (name, r0, c0) in [
        (MatrixName::Keu11, 0, 0),
        (MatrixName::Keu12, 0, n),
        (MatrixName::Keu21, n, 0),
        (MatrixName::Keu22, n, n),
    ] {
        let (st, f) = block_of(t.entry(name), n, h, params);
        add_circulant_block(&mut keu, r0, c0, n, &st, f);
    }
    // W = Kee^{-1} Keu by Cholesky solves, then K = Keu^T W, symmetrized
    let chol = cholesky(&kee)?;
    let dim = 2 * n;
    let mut w = DenseMatrix::zeros(dim);
    for col in 0..dim {
        let rhs: Vec<f64> = (0..dim).map(|i| keu.at(i, col)).collect();
        let x = cholesky_solve(&chol, &rhs);
        for i in 0..dim {
            *w.at_mut(i, col) = x[i];
        }
    }
    let mut k = DenseMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = 0.0;
            for l in 0..dim {
                acc += keu.at(l, i) * w.at(l, j);
            }
            *k.at_mut(i, j) = acc;
        }
    }
    for i in 0..dim {
        for j in 0..i {
            let s = 0.5 * (k.at(i, j) + k.at(j, i));
            *k.at_mut(i, j) = s;
            *k.at_mut(j, i) = s;
        }
    }
    let mut m = DenseMatrix::zeros(dim);
    let (st, f) = block_of(t.entry(MatrixName::M), n, h, params);
    add_circulant_block(&mut m, 0, 0, n, &st, f);
    add_circulant_block(&mut m, n, n, n, &st, f);
    Ok((k, m))
}

/// Lower-triangular Cholesky factor of an SPD matrix.
pub fn cholesky(a: &DenseMatrix) -> Result<DenseMatrix, OracleError> {
    let n = a.n;
    let mut l = DenseMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = a.at(i, j);
            for k in 0..j {
                s -= l.at(i, k) * l.at(j, k);
            }
            if i == j {
                if s <= 0.0 {
                    return Err(OracleError::NotPositiveDefinite { row: i, pivot: s });
                }
                *l.at_mut(i, i) = s.sqrt();
            } else {
                *l.at_mut(i, j) = s / l.at(j, j);
            }
        }
    }
    Ok(l)
}

/// Solve `L L^T x = b` given the Cholesky factor.
pub fn cholesky_solve(l: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    let n = l.n;
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l.at(i, k) * y[k];
        }
        y[i] = s / l.at(i, i);
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l.at(k, i) * x[k];
        }
        x[i] = s / l.at(i, i);
    }
    x
}

/// Transform the generalized pencil `(K, M)` to standard form
/// `A = L^{-1} K L^{-T}` with `M = L L^T`.
fn reduce_to_standard(k: &DenseMatrix, m: &DenseMatrix) -> Result<DenseMatrix, OracleError> {
    let n = k.n;
    let l = cholesky(m)?;
    // Y = L^{-1} K: forward-substitute columns of K
    let mut y = DenseMatrix::zeros(n);
    for col in 0..n {
        for i in 0..n {
            let mut s = k.at(i, col);
            for kk in 0..i {
                s -= l.at(i, kk) * y.at(kk, col);
            }
            *y.at_mut(i, col) = s / l.at(i, i);
        }
    }
    // A = Y L^{-T}: forward-substitute rows of Y (A L^T = Y)
    let mut a = DenseMatrix::zeros(n);
    for row in 0..n {
        for j in 0..n {
            let mut s = y.at(row, j);
            for kk in 0..j {
                s -= a.at(row, kk) * l.at(j, kk);
            }
            *a.at_mut(row, j) = s / l.at(j, j);
        }
    }
    // enforce symmetry against accumulated rounding
    for i in 0..n {
        for j in 0..i {
            let s = 0.5 * (a.at(i, j) + a.at(j, i));
            *a.at_mut(i, j) = s;
            *a.at_mut(j, i) = s;
        }
    }
    Ok(a)
}

/// Cyclic Jacobi eigenvalues of a symmetric matrix; sweeps until the
/// off-diagonal Frobenius norm drops below `1e-12` of the matrix norm.
pub fn jacobi_eigenvalues(a: &DenseMatrix) -> Result<Vec<f64>, OracleError> {
    let n = a.n;
    let mut a = a.clone();
    let norm = a.frobenius().max(f64::MIN_POSITIVE);
    let tol = 1e-12 * norm;
    for _sweep in 0..60 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += 2.0 * a.at(i, j) * a.at(i, j);
            }
        }
        if off.sqrt() <= tol {
            let mut ev: Vec<f64> = (0..n).map(|i| a.at(i, i)).collect();
            ev.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
            return Ok(ev);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.at(p, q);
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a.at(p, p);
                let aqq = a.at(q, q);
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.at(k, p);
                    let akq = a.at(k, q);
                    *a.at_mut(k, p) = c * akp - s * akq;
                    *a.at_mut(k, q) = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a.at(p, k);
                    let aqk = a.at(q, k);
                    *a.at_mut(p, k) = c * apk - s * aqk;
                    *a.at_mut(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    Err(OracleError::NoConvergence)
}

/// All 2N eigenvalues of the assembled generalized problem, sorted
/// ascending. Test-scale guard: N <= 64.
pub fn dense_oracle(disc: &Discretization, params: &RingParams) -> Result<Vec<f64>, OracleError> {
    if disc.elements > 64 {
        return Err(OracleError::TooLarge(disc.elements));
    }
    let (k, m) = match disc.formulation {
        Formulation::Standard => assemble_standard(disc, params),
        Formulation::Mixed => assemble_mixed(disc, params)?,
    };
    let a = reduce_to_standard(&k, &m)?;
    jacobi_eigenvalues(&a)
}

/// Isolated single-field model problems on the unit circle (second- and
/// fourth-order), assembled densely; returns all N eigenvalues sorted.
/// Used to cross-check the per-mode route behind the invariant error
/// spectra.
pub fn dense_isolated(fourth_order: bool, degree: u8, elements: usize) -> Result<Vec<f64>, OracleError> {
    if elements > 128 {
        return Err(OracleError::TooLarge(elements));
    }
    let t = build_table(degree, Formulation::Standard).expect("validated degree");
    let h = 2.0 * std::f64::consts::PI / elements as f64;
    let (stiff_name, stiff_scale) = if fourth_order {
        (MatrixName::K22b, h.powi(-3))
    } else {
        (MatrixName::K11m, h.powi(-1))
    };
    let mut k = DenseMatrix::zeros(elements);
    add_circulant_block(&mut k, 0, 0, elements, &t.entry(stiff_name).stencil(), stiff_scale);
    let mut m = DenseMatrix::zeros(elements);
    add_circulant_block(&mut m, 0, 0, elements, &t.entry(MatrixName::M).stencil(), h);
    let a = reduce_to_standard(&k, &m)?;
    jacobi_eigenvalues(&a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_on_known_matrix() {
        // eigenvalues of [[2,1],[1,2]] are 1 and 3
        let mut a = DenseMatrix::zeros(2);
        *a.at_mut(0, 0) = 2.0;
        *a.at_mut(0, 1) = 1.0;
        *a.at_mut(1, 0) = 1.0;
        *a.at_mut(1, 1) = 2.0;
        let ev = jacobi_eigenvalues(&a).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14);
        assert!((ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn cholesky_roundtrip() {
        let mut m = DenseMatrix::zeros(3);
        let vals = [[4.0, 2.0, 0.4], [2.0, 5.0, 1.0], [0.4, 1.0, 3.0]];
        for i in 0..3 {
            for j in 0..3 {
                *m.at_mut(i, j) = vals[i][j];
            }
        }
        let l = cholesky(&m).unwrap();
        let b = [1.0, -2.0, 0.5];
        let x = cholesky_solve(&l, &b);
        for i in 0..3 {
            let r: f64 = (0..3).map(|j| vals[i][j] * x[j]).sum();
            assert!((r - b[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut m = DenseMatrix::zeros(2);
        *m.at_mut(0, 0) = 1.0;
        *m.at_mut(0, 1) = 3.0;
        *m.at_mut(1, 0) = 3.0;
        *m.at_mut(1, 1) = 1.0;
        assert!(matches!(cholesky(&m), Err(OracleError::NotPositiveDefinite { .. })));
    }

    #[test]
    fn identity_pencil_has_unit_spectrum() {
        // replacing the stiffness by the mass gives all eigenvalues 1
        let disc = Discretization::new(2, 8, Formulation::Standard).unwrap();
        let params = RingParams::new(0.1, 1.0).unwrap();
        let (_, m) = assemble_standard(&disc, &params);
        let a = reduce_to_standard(&m, &m).unwrap();
        for ev in jacobi_eigenvalues(&a).unwrap() {
            assert!((ev - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn oracle_size_guard() {
        let disc = Discretization::new(2, 128, Formulation::Standard).unwrap();
        let params = RingParams::new(0.1, 1.0).unwrap();
        assert_eq!(dense_oracle(&disc, &params), Err(OracleError::TooLarge(128)));
    }

    #[test]
    fn breathing_mode_present_once() {
        let disc = Discretization::new(2, 8, Formulation::Standard).unwrap();
        let params = RingParams::new(0.1, 1.0).unwrap();
        let ev = dense_oracle(&disc, &params).unwrap();
        let hits = ev.iter().filter(|&&l| (l - 1.0).abs() < 1e-6).count();
        assert_eq!(hits, 1);
    }
}
