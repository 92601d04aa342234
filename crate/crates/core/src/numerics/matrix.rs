//! Dense matrices over [`Scalar`] and determinants over the series ring.

use std::fmt;

use rug::Float;

use super::scalar::Scalar;
use super::series::MultiSeries;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch("matrix dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn try_from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Result<Scalar>,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j)?);
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn identity(one: &Scalar, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { one.clone() } else { one.zero_like() })
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

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = self.get(i, 0) * other.get(0, j);
            for k in 1..self.cols {
                acc += self.get(i, k) * other.get(k, j);
            }
            acc
        }))
    }

    /// Sub-matrix keeping the listed rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self {
            rows: rows.len(),
            cols: cols.len(),
            entries: rows
                .iter()
                .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone()))
                .collect(),
        }
    }

    /// Removes the listed rows and columns. An empty result is represented by
    /// `None`; its determinant is one by convention.
    pub fn minor(&self, drop_rows: &[usize], drop_cols: &[usize]) -> Option<Self> {
        let rows: Vec<usize> = (0..self.rows).filter(|i| !drop_rows.contains(i)).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|j| !drop_cols.contains(j)).collect();
        if rows.is_empty() || cols.is_empty() {
            return None;
        }
        Some(self.select(&rows, &cols))
    }

    /// Determinant by Gaussian elimination with largest-modulus partial
    /// pivoting. A singular matrix yields a value of tiny modulus rather than
    /// an error.
    pub fn determinant(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = self.entries[0].one_like();
        for k in 0..n {
            let pivot_row = (k..n)
                .max_by(|&i, &j| {
                    a.get(i, k)
                        .abs()
                        .partial_cmp(&a.get(j, k).abs())
                        .expect("NaN in determinant")
                })
                .expect("non-empty pivot range");
            if a.get(pivot_row, k).is_zero() {
                return Ok(det.zero_like());
            }
            if pivot_row != k {
                a.swap_rows(pivot_row, k);
                det = -det;
            }
            let pivot = a.get(k, k).clone();
            det *= &pivot;
            let inv = pivot.recip();
            for i in k + 1..n {
                let factor = a.get(i, k) * &inv;
                if factor.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let v = a.get(i, j) - &(&factor * a.get(k, j));
                    a.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Solves `self · x = rhs` by pivoted elimination.
    pub fn solve(&self, rhs: &[Scalar]) -> Result<Vec<Scalar>> {
        if !self.is_square() || rhs.len() != self.rows {
            return Err(Error::ShapeMismatch("solve needs a square system".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.to_vec();
        for k in 0..n {
            let pivot_row = (k..n)
                .max_by(|&i, &j| {
                    a.get(i, k)
                        .abs()
                        .partial_cmp(&a.get(j, k).abs())
                        .expect("NaN in solve")
                })
                .expect("non-empty pivot range");
            if a.get(pivot_row, k).is_zero() {
                return Err(Error::Singularity {
                    what: "linear solve",
                    modulus: 0.0,
                });
            }
            a.swap_rows(pivot_row, k);
            b.swap(pivot_row, k);
            let inv = a.get(k, k).recip();
            for i in k + 1..n {
                let factor = a.get(i, k) * &inv;
                for j in k + 1..n {
                    let v = a.get(i, j) - &(&factor * a.get(k, j));
                    a.set(i, j, v);
                }
                let v = &b[i] - &(&factor * &b[k]);
                b[i] = v;
            }
        }
        let mut x = b.clone();
        for i in (0..n).rev() {
            let mut acc = b[i].clone();
            for j in i + 1..n {
                acc -= a.get(i, j) * &x[j];
            }
            x[i] = acc / a.get(i, i);
        }
        Ok(x)
    }

    /// Decimal digits of cancellation suggested by Hadamard's bound,
    /// `log10(prod_i ||row_i|| / |det|)`.
    pub fn hadamard_digits_lost(&self, det: &Scalar) -> f64 {
        let bits = det.bits();
        let mut log_bound = 0.0;
        for i in 0..self.rows {
            let mut norm2 = Float::with_val(bits, 0);
            for j in 0..self.cols {
                let m = self.get(i, j).abs();
                norm2 += Float::with_val(bits, &m * &m);
            }
            log_bound += 0.5 * log10_float(&norm2);
        }
        let d = det.abs();
        if d.is_zero() {
            return f64::INFINITY;
        }
        (log_bound - log10_float(&d)).max(0.0)
    }
}

fn log10_float(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    Float::with_val(x.prec(), x.log10_ref()).to_f64()
}

impl fmt::Debug for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ScalarMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Determinant of a square grid of series with uniform shape.
///
/// Division-free: Laplace expansion along columns, memoized over row subsets
/// (`n·2^(n-1)` series products). Entries may be non-invertible.
pub fn series_determinant(m: &[Vec<MultiSeries>]) -> Result<MultiSeries> {
    let n = m.len();
    if n == 0 {
        return Err(Error::ShapeMismatch("empty series matrix".into()));
    }
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::ShapeMismatch("series matrix is not square".into()));
    }
    if n > 20 {
        return Err(Error::SizeCap {
            what: "series determinant dimension",
            got: n,
            max: 20,
        });
    }
    let shape = m[0][0].orders().to_vec();
    if m.iter().flatten().any(|e| e.orders() != shape.as_slice()) {
        return Err(Error::ShapeMismatch("series entries differ in shape".into()));
    }
    let one = MultiSeries::constant(m[0][0].constant_term().one_like(), &shape);
    // minors[mask] = det of rows in `mask` x columns 0..popcount(mask)
    let mut minors: Vec<Option<MultiSeries>> = vec![None; 1 << n];
    minors[0] = Some(one);
    let mut masks: Vec<usize> = (1..1usize << n).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        let k = mask.count_ones() as usize;
        let col = k - 1;
        let mut acc: Option<MultiSeries> = None;
        let mut position = 0usize;
        for i in 0..n {
            if mask & (1 << i) == 0 {
                continue;
            }
            let sub = minors[mask & !(1 << i)].as_ref().expect("smaller minors first");
            let term = &m[i][col] * sub;
            let negative = (position + col) % 2 == 1;
            acc = Some(match (acc, negative) {
                (None, false) => term,
                (None, true) => -&term,
                (Some(a), false) => &a + &term,
                (Some(a), true) => &a - &term,
            });
            position += 1;
        }
        minors[mask] = acc;
    }
    Ok(minors[(1 << n) - 1].take().expect("full minor"))
}
