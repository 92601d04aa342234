//! Truncated multivariate power series ("jets") over [`Scalar`].
//!
//! Coefficients are stored densely in row-major order (last variable
//! fastest) for every multi-index `m` with `m[j] <= orders[j]`. Products
//! drop every term that leaves this box, so all ring operations are exact on
//! the retained coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Complex;

use super::scalar::{Precision, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct MultiSeries {
    orders: Vec<usize>,
    strides: Vec<usize>,
    coeffs: Vec<Scalar>,
}

fn strides_for(orders: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; orders.len()];
    for d in (0..orders.len().saturating_sub(1)).rev() {
        strides[d] = strides[d + 1] * (orders[d + 1] + 1);
    }
    strides
}

/// Calls `f` with the flat offset of every multi-index in the box
/// `0..=limits[d]`, in row-major order.
fn for_each_in_box(limits: &[usize], strides: &[usize], mut f: impl FnMut(usize)) {
    let n = limits.len();
    if n == 0 {
        f(0);
        return;
    }
    let mut idx = vec![0usize; n];
    let mut flat = 0usize;
    loop {
        f(flat);
        let mut d = n;
        loop {
            if d == 0 {
                return;
            }
            d -= 1;
            if idx[d] < limits[d] {
                idx[d] += 1;
                flat += strides[d];
                break;
            }
            flat -= idx[d] * strides[d];
            idx[d] = 0;
        }
    }
}

impl MultiSeries {
    pub fn zeros(prec: Precision, orders: &[usize]) -> Self {
        let len = orders.iter().map(|o| o + 1).product();
        Self {
            orders: orders.to_vec(),
            strides: strides_for(orders),
            coeffs: vec![prec.zero(); len],
        }
    }

    pub fn constant(c: Scalar, orders: &[usize]) -> Self {
        let mut s = Self::zeros_bits(&c, orders);
        s.coeffs[0] = c;
        s
    }

    fn zeros_bits(like: &Scalar, orders: &[usize]) -> Self {
        let len = orders.iter().map(|o| o + 1).product();
        Self {
            orders: orders.to_vec(),
            strides: strides_for(orders),
            coeffs: vec![like.zero_like(); len],
        }
    }

    /// The formal variable `x_var` itself.
    pub fn variable(prec: Precision, orders: &[usize], var: usize) -> Self {
        assert!(var < orders.len(), "variable index out of range");
        let mut s = Self::zeros(prec, orders);
        if orders[var] >= 1 {
            let stride = s.strides[var];
            s.coeffs[stride] = prec.one();
        }
        s
    }

    /// Builds a series from explicit coefficients in row-major order.
    pub fn from_coeffs(orders: &[usize], coeffs: Vec<Scalar>) -> Result<Self> {
        let len: usize = orders.iter().map(|o| o + 1).product();
        if coeffs.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "expected {len} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Self {
            orders: orders.to_vec(),
            strides: strides_for(orders),
            coeffs,
        })
    }

    /// Univariate series in variable `var` of a ring with the given orders;
    /// `coeffs[k]` multiplies `x_var^k`. Coefficients past the order are dropped.
    pub fn from_univariate(like: &Scalar, orders: &[usize], var: usize, coeffs: &[Scalar]) -> Self {
        let mut s = Self::zeros_bits(like, orders);
        for (k, c) in coeffs.iter().enumerate().take(orders[var] + 1) {
            s.coeffs[k * s.strides[var]] = c.clone();
        }
        s
    }

    /// Taylor expansion of `sin(center + x_var)`.
    pub fn sine_jet(center: &Scalar, var: usize, orders: &[usize]) -> Self {
        let coeffs = sine_taylor(center, orders[var]);
        Self::from_univariate(center, orders, var, &coeffs)
    }

    pub fn num_vars(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn flat_index(&self, idx: &[usize]) -> Option<usize> {
        if idx.len() != self.orders.len() {
            return None;
        }
        let mut flat = 0;
        for ((&i, &o), &st) in idx.iter().zip(&self.orders).zip(&self.strides) {
            if i > o {
                return None;
            }
            flat += i * st;
        }
        Some(flat)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|&st| {
                let i = flat / st;
                flat %= st;
                i
            })
            .collect()
    }

    /// Coefficient of `x^idx`; zero when `idx` lies outside the retained box.
    pub fn coeff(&self, idx: &[usize]) -> Scalar {
        match self.flat_index(idx) {
            Some(f) => self.coeffs[f].clone(),
            None => self.coeffs[0].zero_like(),
        }
    }

    pub fn set_coeff(&mut self, idx: &[usize], value: Scalar) {
        let f = self
            .flat_index(idx)
            .expect("multi-index outside the truncation box");
        self.coeffs[f] = value;
    }

    pub fn constant_term(&self) -> &Scalar {
        &self.coeffs[0]
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.orders == other.orders
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "series orders {:?} vs {:?}",
                self.orders, other.orders
            )))
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= k;
        }
        out
    }

    pub fn add_constant(&self, k: &Scalar) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += k;
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c -= o;
        }
        Ok(out)
    }

    /// Truncated product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let bits = self.coeffs[0].bits();
        let mut out: Vec<Complex> = (0..self.coeffs.len()).map(|_| Complex::new(bits)).collect();
        let mut limits = vec![0usize; self.orders.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mi = self.multi_index(i);
            for d in 0..limits.len() {
                limits[d] = self.orders[d] - mi[d];
            }
            for_each_in_box(&limits, &self.strides, |j| {
                let b = &other.coeffs[j].0;
                if !(b.real().is_zero() && b.imag().is_zero()) {
                    out[i + j] += &a.0 * b;
                }
            });
        }
        Ok(Self {
            orders: self.orders.clone(),
            strides: self.strides.clone(),
            coeffs: out.into_iter().map(Scalar::from_complex).collect(),
        })
    }

    /// Multiplicative inverse up to truncation.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::NonInvertible);
        }
        let inv0 = a0.recip();
        let bits = a0.bits();
        let mut out: Vec<Scalar> = vec![a0.zero_like(); self.coeffs.len()];
        out[0] = inv0.clone();
        for m in 1..self.coeffs.len() {
            let mi = self.multi_index(m);
            let mut acc = Complex::new(bits);
            for_each_in_box(&mi, &self.strides, |k| {
                if k != 0 {
                    let a = &self.coeffs[k].0;
                    if !(a.real().is_zero() && a.imag().is_zero()) {
                        acc += a * &out[m - k].0;
                    }
                }
            });
            out[m] = -(Scalar::from_complex(acc) * &inv0);
        }
        Ok(Self {
            orders: self.orders.clone(),
            strides: self.strides.clone(),
            coeffs: out,
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.reciprocal()?)
    }

    pub fn powu(&self, n: u32) -> Self {
        let mut result = Self::constant(self.coeffs[0].one_like(), &self.orders);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Largest total degree that can survive truncation.
    pub fn total_order(&self) -> usize {
        self.orders.iter().sum()
    }

    /// `f(self)` where `taylor[k]` is the k-th Taylor coefficient of `f` about
    /// the constant term of `self`.
    pub fn compose_taylor(&self, taylor: &[Scalar]) -> Self {
        let mut u = self.clone();
        u.coeffs[0] = u.coeffs[0].zero_like();
        let top = self.total_order().min(taylor.len().saturating_sub(1));
        let mut acc = Self::constant(taylor[top].clone(), &self.orders);
        for k in (0..top).rev() {
            acc = &acc * &u;
            acc.coeffs[0] += &taylor[k];
        }
        acc
    }

    pub fn sin(&self) -> Self {
        self.compose_taylor(&sine_taylor(&self.coeffs[0], self.total_order()))
    }

    pub fn cos(&self) -> Self {
        let shifted = &self.coeffs[0] + &half_pi_like(&self.coeffs[0]);
        self.compose_taylor(&sine_taylor(&shifted, self.total_order()))
    }

    /// Copy into a ring with different truncation orders (same variable count);
    /// coefficients beyond the new orders are dropped, new ones are zero.
    pub fn with_orders(&self, orders: &[usize]) -> Self {
        assert_eq!(orders.len(), self.orders.len(), "variable count must match");
        let mut out = Self::zeros_bits(&self.coeffs[0], orders);
        for (f, c) in self.coeffs.iter().enumerate() {
            let mi = self.multi_index(f);
            if let Some(g) = out.flat_index(&mi) {
                out.coeffs[g] = c.clone();
            }
        }
        out
    }

    /// Evaluates the truncated polynomial at a point.
    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.orders.len(), "point dimension");
        let powers: Vec<Vec<Scalar>> = point
            .iter()
            .zip(&self.orders)
            .map(|(x, &o)| univariate_powers_of_scalar(x, o))
            .collect();
        let mut acc = self.coeffs[0].zero_like();
        for (f, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mi = self.multi_index(f);
            let mut term = c.clone();
            for (d, &e) in mi.iter().enumerate() {
                term *= &powers[d][e];
            }
            acc += term;
        }
        acc
    }

    /// Substitutes `x_j -> subs[j]` where each substitution is a univariate
    /// series in variable `j` of the target ring (given by its coefficient list
    /// truncated at `target_orders[j]`). `self` is read as a polynomial.
    pub fn substitute_univariate(&self, subs: &[Vec<Scalar>], target_orders: &[usize]) -> Self {
        assert_eq!(subs.len(), self.orders.len());
        assert_eq!(target_orders.len(), self.orders.len());
        // transforms[j][m][i] = coefficient of x^i in subs[j]^m
        let transforms: Vec<Vec<Vec<Scalar>>> = subs
            .iter()
            .enumerate()
            .map(|(j, sub)| univariate_power_table(sub, self.orders[j], target_orders[j]))
            .collect();
        let mut current_orders = self.orders.clone();
        let mut current = self.clone();
        for j in 0..self.orders.len() {
            let mut next_orders = current_orders.clone();
            next_orders[j] = target_orders[j];
            let mut next = Self::zeros_bits(&self.coeffs[0], &next_orders);
            for (f, c) in current.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut mi = current.multi_index(f);
                let m = mi[j];
                for i in 0..=target_orders[j] {
                    let t = &transforms[j][m][i];
                    if t.is_zero() {
                        continue;
                    }
                    mi[j] = i;
                    let g = next.flat_index(&mi).expect("index inside target box");
                    next.coeffs[g] += c * t;
                }
            }
            current = next;
            current_orders = next_orders;
        }
        current
    }
}

fn half_pi_like(like: &Scalar) -> Scalar {
    let pi = rug::Float::with_val(like.bits(), rug::float::Constant::Pi);
    Scalar::from_complex(Complex::with_val(like.bits(), (pi / 2u32, 0)))
}

/// Taylor coefficients `sin(center + k·pi/2) / k!` for `k = 0..=order`.
pub fn sine_taylor(center: &Scalar, order: usize) -> Vec<Scalar> {
    let (s, c) = center.sin_cos();
    let mut out = Vec::with_capacity(order + 1);
    let mut fact = center.one_like();
    for k in 0..=order {
        if k > 0 {
            fact = fact.mul_int(k as i64);
        }
        let v = match k % 4 {
            0 => s.clone(),
            1 => c.clone(),
            2 => -&s,
            _ => -&c,
        };
        out.push(v / &fact);
    }
    out
}

fn univariate_powers_of_scalar(x: &Scalar, max: usize) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(max + 1);
    let mut p = x.one_like();
    for _ in 0..=max {
        out.push(p.clone());
        p *= x;
    }
    out
}

/// Truncated product of univariate coefficient lists.
pub fn univariate_mul(a: &[Scalar], b: &[Scalar], order: usize) -> Vec<Scalar> {
    let zero = a[0].zero_like();
    let mut out = vec![zero; order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j].0 += &x.0 * &y.0;
        }
    }
    out
}

/// `table[m][i]` = coefficient of `x^i` in `sub^m`, `m = 0..=max_power`.
fn univariate_power_table(sub: &[Scalar], max_power: usize, order: usize) -> Vec<Vec<Scalar>> {
    let zero = sub[0].zero_like();
    let mut padded: Vec<Scalar> = sub.iter().take(order + 1).cloned().collect();
    padded.resize(order + 1, zero.clone());
    let mut table = Vec::with_capacity(max_power + 1);
    let mut cur = vec![zero; order + 1];
    cur[0] = sub[0].one_like();
    for _ in 0..=max_power {
        table.push(cur.clone());
        cur = univariate_mul(&cur, &padded, order);
    }
    table
}

impl fmt::Debug for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiSeries(orders={:?}, [", self.orders)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                write!(f, " {:?}:{:?}", self.multi_index(i), c)?;
            }
        }
        write!(f, " ])")
    }
}

impl Add for &MultiSeries {
    type Output = MultiSeries;
    fn add(self, rhs: &MultiSeries) -> MultiSeries {
        self.try_add(rhs).expect("series shape mismatch")
    }
}

impl Sub for &MultiSeries {
    type Output = MultiSeries;
    fn sub(self, rhs: &MultiSeries) -> MultiSeries {
        self.try_sub(rhs).expect("series shape mismatch")
    }
}

impl Mul for &MultiSeries {
    type Output = MultiSeries;
    fn mul(self, rhs: &MultiSeries) -> MultiSeries {
        self.try_mul(rhs).expect("series shape mismatch")
    }
}

impl Neg for &MultiSeries {
    type Output = MultiSeries;
    fn neg(self) -> MultiSeries {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = -&*c;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::new(50)
    }

    fn poly1(coeffs: &[i64], order: usize) -> MultiSeries {
        let p = p();
        let c: Vec<Scalar> = coeffs.iter().map(|&k| p.int(k)).collect();
        MultiSeries::from_univariate(&p.one(), &[order], 0, &c)
    }

    #[test]
    fn difference_of_squares() {
        let prod = &poly1(&[1, 1], 2) * &poly1(&[1, -1], 2);
        assert_eq!(prod, poly1(&[1, 0, -1], 2));
    }

    #[test]
    fn telescoping_truncates_to_one() {
        let prod = &poly1(&[1, 1, 1, 1, 1], 4) * &poly1(&[1, -1], 4);
        assert_eq!(prod, poly1(&[1], 4));
    }

    #[test]
    fn geometric_reciprocal() {
        let r = poly1(&[1, -1], 3).reciprocal().unwrap();
        assert_eq!(r, poly1(&[1, 1, 1, 1], 3));
    }

    #[test]
    fn reciprocal_of_two_plus_x() {
        let p = p();
        let r = poly1(&[2, 1], 1).reciprocal().unwrap();
        assert_eq!(r.coeff(&[0]), p.ratio(1, 2));
        assert_eq!(r.coeff(&[1]), p.ratio(-1, 4));
    }

    #[test]
    fn zero_constant_is_not_invertible() {
        assert_eq!(poly1(&[0, 1], 3).reciprocal(), Err(Error::NonInvertible));
    }

    #[test]
    fn shape_mismatch_is_reported() {
        assert!(matches!(
            poly1(&[1], 2).try_mul(&poly1(&[1], 3)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn sine_jets() {
        let p = p();
        let s0 = MultiSeries::sine_jet(&p.zero(), 0, &[2]);
        assert_eq!(s0, poly1(&[0, 1, 0], 2));
        let half_pi = p.pi() / p.int(2);
        let s1 = MultiSeries::sine_jet(&half_pi, 0, &[2]);
        assert!(s1.coeff(&[0]).rel_dev(&p.one()) < 1e-48);
        assert!(s1.coeff(&[1]).abs_f64() < 1e-48);
        assert!(s1.coeff(&[2]).rel_dev(&p.ratio(-1, 2)) < 1e-48);
    }

    #[test]
    fn sin_of_series_matches_jet() {
        let p = p();
        let a = p.real(0.37);
        let x = MultiSeries::variable(p, &[6], 0).add_constant(&a);
        let direct = MultiSeries::sine_jet(&a, 0, &[6]);
        let composed = x.sin();
        for k in 0..=6 {
            assert!(composed.coeff(&[k]).abs_dev(&direct.coeff(&[k])) < 1e-45);
        }
    }

    #[test]
    fn bivariate_affine_sine_and_cos() {
        // sin(c + x - y) and cos via sin^2 + cos^2 = 1
        let p = p();
        let orders = [3, 3];
        let x = MultiSeries::variable(p, &orders, 0);
        let y = MultiSeries::variable(p, &orders, 1);
        let arg = (&x - &y).add_constant(&p.real(0.8));
        let s = arg.sin();
        let c = arg.cos();
        let one = &(&s * &s) + &(&c * &c);
        assert!(one.coeff(&[0, 0]).rel_dev(&p.one()) < 1e-45);
        for f in 1..one.len() {
            assert!(one.coeffs()[f].abs_f64() < 1e-45);
        }
        // coefficient of x*y in sin(c+x-y) is +sin(c)
        assert!(s.coeff(&[1, 1]).rel_dev(&p.real(0.8).sin()) < 1e-45);
    }

    #[test]
    fn substitution_matches_evaluation_of_composed_series() {
        let p = p();
        // poly(u, v) = 1 + 2u + 3uv + v^2
        let mut poly = MultiSeries::zeros(p, &[1, 2]);
        poly.set_coeff(&[0, 0], p.int(1));
        poly.set_coeff(&[1, 0], p.int(2));
        poly.set_coeff(&[1, 1], p.int(3));
        poly.set_coeff(&[0, 2], p.int(1));
        // u = 1 + x, v = 2x... per variable: u(x0) = 1 + x0, v(x1) = x1 - x1^2
        let subs = vec![vec![p.int(1), p.int(1)], vec![p.int(0), p.int(1), p.int(-1)]];
        let out = poly.substitute_univariate(&subs, &[2, 3]);
        let orders = [2, 3];
        let u = MultiSeries::variable(p, &orders, 0).add_constant(&p.one());
        let x1 = MultiSeries::variable(p, &orders, 1);
        let v = &x1 - &(&x1 * &x1);
        let two = MultiSeries::constant(p.int(2), &orders);
        let three = MultiSeries::constant(p.int(3), &orders);
        let expected = &(&(&two * &u) + &(&(&three * &u) * &v)) + &(&v * &v);
        let expected = expected.add_constant(&p.one());
        assert_eq!(out, expected);
    }

    #[test]
    fn with_orders_truncates_and_extends() {
        let s = poly1(&[1, 2, 3], 2);
        assert_eq!(s.with_orders(&[1]), poly1(&[1, 2], 1));
        assert_eq!(s.with_orders(&[4]).coeff(&[2]), Precision::new(50).int(3));
        assert!(s.with_orders(&[4]).coeff(&[4]).is_zero());
    }
}
