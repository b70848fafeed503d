use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use super::PIVOT_THRESHOLD;
use crate::error::{Result, ScatterError};

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(ScatterError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ScatterError::DimensionMismatch("ragged rows".into()));
        }
        Self::from_row_major(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self[(r, c)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

/// A square system `A x = b`.
pub trait LinearSystem {
    fn matrix(&self) -> &ComplexMatrix;
    fn rhs(&self) -> &[Complex64];
}

pub fn norm_inf(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: Vec<Complex64>,
    /// 1-norm condition number ‖A‖₁‖A⁻¹‖₁.
    pub condition_estimate: f64,
    /// ‖A·x − b‖∞ of the returned solution.
    pub residual_norm: f64,
}

/// Determinant kept as `mantissa · 2^exponent` so that products of many
/// pivots neither overflow nor underflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledDeterminant {
    pub mantissa: Complex64,
    pub exponent: i32,
}

impl ScaledDeterminant {
    fn one() -> Self {
        Self {
            mantissa: Complex64::new(1.0, 0.0),
            exponent: 0,
        }
    }

    fn zero() -> Self {
        Self {
            mantissa: Complex64::new(0.0, 0.0),
            exponent: 0,
        }
    }

    fn mul(&mut self, factor: Complex64) {
        self.mantissa *= factor;
        let magnitude = self.mantissa.norm();
        if magnitude == 0.0 || !magnitude.is_finite() {
            return;
        }
        let shift = magnitude.log2().floor() as i32;
        self.mantissa *= 2f64.powi(-shift);
        self.exponent += shift;
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.norm() == 0.0
    }

    pub fn to_complex(&self) -> Complex64 {
        self.mantissa * 2f64.powi(self.exponent)
    }

    pub fn abs(&self) -> f64 {
        self.mantissa.norm() * 2f64.powi(self.exponent)
    }

    /// Natural log of |det|; −∞ for a zero determinant.
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.norm().ln() + self.exponent as f64 * std::f64::consts::LN_2
    }
}

struct LuFactors {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

enum Factorization {
    Complete(LuFactors),
    Singular { column: usize, pivot: f64 },
}

fn factor(a: &ComplexMatrix, threshold: f64, det: &mut ScaledDeterminant) -> Factorization {
    let n = a.rows;
    let mut lu = a.data.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let (pivot_row, pivot_abs) = (col..n)
            .map(|r| (r, lu[r * n + col].norm()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot_abs <= threshold {
            *det = ScaledDeterminant::zero();
            return Factorization::Singular {
                column: col,
                pivot: pivot_abs,
            };
        }
        if pivot_row != col {
            for c in 0..n {
                lu.swap(col * n + c, pivot_row * n + c);
            }
            perm.swap(col, pivot_row);
            det.mul(Complex64::new(-1.0, 0.0));
        }
        let pivot = lu[col * n + col];
        det.mul(pivot);
        for r in col + 1..n {
            let factor = lu[r * n + col] / pivot;
            lu[r * n + col] = factor;
            if factor.norm() == 0.0 {
                continue;
            }
            for c in col + 1..n {
                let update = factor * lu[col * n + c];
                lu[r * n + c] -= update;
            }
        }
    }
    Factorization::Complete(LuFactors { n, lu, perm })
}

impl LuFactors {
    fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let mut acc = x[r];
            for c in 0..r {
                acc -= self.lu[r * n + c] * x[c];
            }
            x[r] = acc;
        }
        for r in (0..n).rev() {
            let mut acc = x[r];
            for c in r + 1..n {
                acc -= self.lu[r * n + c] * x[c];
            }
            x[r] = acc / self.lu[r * n + r];
        }
        x
    }

    fn inverse_norm_one(&self) -> f64 {
        let n = self.n;
        let mut unit = vec![Complex64::new(0.0, 0.0); n];
        let mut worst: f64 = 0.0;
        for c in 0..n {
            unit[c] = Complex64::new(1.0, 0.0);
            let column = self.solve(&unit);
            unit[c] = Complex64::new(0.0, 0.0);
            worst = worst.max(column.iter().map(|z| z.norm()).sum());
        }
        worst
    }
}

/// Gaussian elimination with partial pivoting.
///
/// Fails with [`ScatterError::SingularMatrix`] when a pivot falls below
/// `1e-14` times the largest entry of `a`.
pub fn solve_dense(a: &ComplexMatrix, b: &[Complex64]) -> Result<SolveReport> {
    solve_dense_scaled(a, b, a.max_abs())
}

/// [`solve_dense`] for systems of the form `I + K`, where cancellation can
/// leave every entry of `A` tiny: pivots are compared with
/// `1e-14 (1 + max|K|)` instead.
pub fn solve_identity_plus(a: &ComplexMatrix, b: &[Complex64]) -> Result<SolveReport> {
    let mut perturbation: f64 = 0.0;
    if a.is_square() {
        for r in 0..a.rows {
            for c in 0..a.cols {
                let delta = if r == c { a[(r, c)] - 1.0 } else { a[(r, c)] };
                perturbation = perturbation.max(delta.norm());
            }
        }
    }
    solve_dense_scaled(a, b, 1.0 + perturbation)
}

fn solve_dense_scaled(a: &ComplexMatrix, b: &[Complex64], scale: f64) -> Result<SolveReport> {
    if !a.is_square() || a.rows != b.len() {
        return Err(ScatterError::DimensionMismatch(format!(
            "{}x{} matrix against rhs of length {}",
            a.rows,
            a.cols,
            b.len()
        )));
    }
    let threshold = PIVOT_THRESHOLD * scale;
    let mut det = ScaledDeterminant::one();
    let lu = match factor(a, threshold, &mut det) {
        Factorization::Complete(lu) => lu,
        Factorization::Singular { column, pivot } => {
            return Err(ScatterError::SingularMatrix { column, pivot })
        }
    };
    let solution = lu.solve(b);
    let residual: Vec<Complex64> = a
        .mul_vec(&solution)
        .iter()
        .zip(b)
        .map(|(ax, bi)| ax - bi)
        .collect();
    Ok(SolveReport {
        condition_estimate: a.norm_one() * lu.inverse_norm_one(),
        residual_norm: norm_inf(&residual),
        solution,
    })
}

/// Determinant as the signed product of LU pivots. Exactly singular
/// matrices give a zero determinant; no threshold is applied.
pub fn determinant(a: &ComplexMatrix) -> Result<ScaledDeterminant> {
    if !a.is_square() {
        return Err(ScatterError::DimensionMismatch(format!(
            "determinant of a {}x{} matrix",
            a.rows, a.cols
        )));
    }
    let mut det = ScaledDeterminant::one();
    factor(a, 0.0, &mut det);
    Ok(det)
}
