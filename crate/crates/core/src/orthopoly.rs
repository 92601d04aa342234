//! Moments of `φ`, Hankel determinants and the orthogonal polynomials they
//! define; the boundary distribution `H_N^{(r)}`, its generating function
//! `h_N(z)`, the symmetric family `h_{N,s}` and the bare partition function.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{gamma, jets, HomParams};
use crate::numerics::combin::permutations_with_sign;
use crate::numerics::{MultiSeries, Precision, Scalar, ScalarMatrix};

/// Polynomial with coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::ShapeMismatch("polynomial needs at least one coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn constant(c: Scalar) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Degree as stored (leading zeros are kept).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.coeffs[0].zero_like())
    }

    pub fn leading(&self) -> &Scalar {
        self.coeffs.last().expect("non-empty")
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.leading().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// `Σ_k coeff_k · k! · t_k`: the operator `P(∂_ε)` applied to a function
    /// with Taylor coefficients `t_k` at `ε = 0`.
    pub fn apply_derivative(&self, taylor: &[Scalar], prec: Precision) -> Scalar {
        let mut acc = prec.zero();
        let mut fact = prec.one();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                fact = fact.mul_int(k as i64);
            }
            if let Some(t) = taylor.get(k) {
                acc += c * t * &fact;
            }
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| match k {
                0 => c.format_real(20),
                1 => format!("{} z", c.format_real(20)),
                _ => format!("{} z^{k}", c.format_real(20)),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Moments `c_n = ∂^n φ(λ)`, Hankel determinants `D_n` and norms
/// `h_n = D_{n+1}/D_n`.
#[derive(Clone, Debug)]
pub struct MomentTable {
    pub params: HomParams,
    pub c: Vec<Scalar>,
    pub h: Vec<Scalar>,
    /// `D_0 = 1, D_1, …`.
    pub hankel_dets: Vec<Scalar>,
}

pub fn hankel_matrix(c: &[Scalar], n: usize) -> ScalarMatrix {
    ScalarMatrix::from_fn(n, n, |i, j| c[i + j].clone())
}

pub fn moments(p: &HomParams, n_max: usize) -> Result<MomentTable> {
    let prec = p.precision();
    let c = p.phi_derivatives(n_max)?;
    let max_dim = n_max / 2 + 1;
    let mut dets = vec![prec.one()];
    let thr = prec.singularity_threshold();
    for n in 1..=max_dim {
        let d = hankel_matrix(&c, n).determinant()?;
        if d.is_below(&thr) {
            return Err(Error::DegenerateHankel { order: n });
        }
        dets.push(d);
    }
    let h = (0..max_dim).map(|n| &dets[n + 1] / &dets[n]).collect();
    Ok(MomentTable {
        params: p.clone(),
        c,
        h,
        hankel_dets: dets,
    })
}

impl MomentTable {
    pub fn precision(&self) -> Precision {
        self.params.precision()
    }

    /// Largest `n` for which `P_n` and `K_n` are available.
    pub fn max_degree(&self) -> usize {
        (self.c.len() - 1) / 2
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.max_degree() {
            return Err(Error::SizeCap {
                what: "polynomial degree for the moment table",
                got: n,
                max: self.max_degree(),
            });
        }
        Ok(())
    }

    /// Bilinear form `⟨P, Q⟩ = Σ p_i q_j c_{i+j}`.
    pub fn inner(&self, a: &Poly, b: &Poly) -> Result<Scalar> {
        if a.degree() + b.degree() >= self.c.len() {
            return Err(Error::SizeCap {
                what: "moment index",
                got: a.degree() + b.degree(),
                max: self.c.len() - 1,
            });
        }
        let mut acc = self.precision().zero();
        for (i, x) in a.coeffs().iter().enumerate() {
            for (j, y) in b.coeffs().iter().enumerate() {
                acc += x * y * &self.c[i + j];
            }
        }
        Ok(acc)
    }

    /// Monic orthogonal polynomial of degree `n`.
    pub fn monic_p(&self, n: usize) -> Result<Poly> {
        self.check_degree(n)?;
        let prec = self.precision();
        if n == 0 {
            return Ok(Poly::constant(prec.one()));
        }
        let rhs: Vec<Scalar> = (0..n).map(|i| -self.c[i + n].clone()).collect();
        let low = hankel_matrix(&self.c, n).solve(&rhs)?;
        let mut coeffs = low;
        coeffs.push(prec.one());
        Poly::new(coeffs)
    }

    /// `K_n = n! φ^{n+1} / h_n · P_n`.
    pub fn k_poly(&self, n: usize) -> Result<Poly> {
        let pn = self.monic_p(n)?;
        let prec = self.precision();
        let phi = &self.c[0];
        let k = prec.factorial(n as u32) * phi.powu(n as u32 + 1) / &self.h[n];
        Ok(pn.scale(&k))
    }
}

/// `Z_N = (ab)^{N²} Π_{k<N} h_k/(k!)²`.
pub fn z_from_norms(p: &HomParams, n: usize) -> Result<Scalar> {
    if n == 0 {
        return Err(Error::InvalidParams("lattice size must be at least 1".into()));
    }
    let prec = p.precision();
    let table = moments(p, 2 * n - 2)?;
    let mut acc = (p.a() * p.b()).powu((n * n) as u32);
    for k in 0..n {
        acc *= &table.h[k];
        acc /= prec.factorial(k as u32).powu(2);
    }
    Ok(acc)
}

/// `H_N^{(r)}`, `r = 1..N`: the position distribution of the c-vertex in the
/// top row.
pub fn boundary_h(p: &HomParams, n: usize) -> Result<Vec<Scalar>> {
    if n == 0 {
        return Err(Error::InvalidParams("lattice size must be at least 1".into()));
    }
    let table = moments(p, 2 * n - 2)?;
    let k = table.k_poly(n - 1)?;
    let orders = [n - 1];
    let omega = jets::omega(p, 0, &orders)?;
    let rho = jets::rho(p, 0, &orders)?;
    let rho_pow = rho.powu(n as u32 - 1);
    (1..=n)
        .map(|r| {
            let f = &omega.powu((n - r) as u32) * &rho_pow;
            Ok(k.apply_derivative(f.coeffs(), p.precision()))
        })
        .collect()
}

/// `h_N(z) = Σ_r H_N^{(r)} z^{r−1}`.
pub fn gen_h(p: &HomParams, n: usize) -> Result<Poly> {
    Poly::new(boundary_h(p, n)?)
}

/// `h_1, …, h_{n_max}`.
pub fn gen_h_family(p: &HomParams, n_max: usize) -> Result<Vec<Poly>> {
    (1..=n_max).map(|n| gen_h(p, n)).collect()
}

/// `V_N^{(p)} = K_{N−1}(∂) ω^{N−p}` at `ε = 0`, `p = 1..N`.
pub fn v_vector(p: &HomParams, n: usize) -> Result<Vec<Scalar>> {
    let table = moments(p, 2 * n - 2)?;
    let k = table.k_poly(n - 1)?;
    let omega = jets::omega(p, 0, &[n - 1])?;
    Ok((1..=n)
        .map(|q| k.apply_derivative(omega.powu((n - q) as u32).coeffs(), p.precision()))
        .collect())
}

/// `𝓐 = (I − 𝓔)^{N−1}` with `𝓔` the sub-diagonal shift, by repeated
/// multiplication.
pub fn a_matrix_power(prec: Precision, n: usize) -> Result<ScalarMatrix> {
    let one = prec.one();
    let base = ScalarMatrix::from_fn(n, n, |i, j| {
        if i == j {
            one.clone()
        } else if i == j + 1 {
            -one.clone()
        } else {
            prec.zero()
        }
    });
    let mut acc = ScalarMatrix::identity(&one, n);
    for _ in 0..n.saturating_sub(1) {
        acc = acc.try_mul(&base)?;
    }
    Ok(acc)
}

/// `𝓐_{pr} = (−1)^{p−r} C(N−1, p−r)` written out.
pub fn a_matrix_binomial(prec: Precision, n: usize) -> ScalarMatrix {
    ScalarMatrix::from_fn(n, n, |p, r| {
        if p < r {
            prec.zero()
        } else {
            let b = prec.binomial(n as u32 - 1, (p - r) as u32);
            if (p - r) % 2 == 0 {
                b
            } else {
                -b
            }
        }
    })
}

/// Residue form of the operator identity: `K_{N−1}(∂) ω^m` equals the
/// coefficient of `z^{N−1−m}` in `(z−1)^{N−1} h_N(z)`. Returns both sides for
/// `m = 0..N−1`.
pub fn claim_sides(p: &HomParams, n: usize) -> Result<Vec<(Scalar, Scalar)>> {
    let prec = p.precision();
    let table = moments(p, 2 * n - 2)?;
    let k = table.k_poly(n - 1)?;
    let omega = jets::omega(p, 0, &[n - 1])?;
    let h = gen_h(p, n)?;
    let binom: Vec<Scalar> = (0..n)
        .map(|i| {
            let b = prec.binomial(n as u32 - 1, i as u32);
            if (n - 1 - i) % 2 == 0 {
                b
            } else {
                -b
            }
        })
        .collect();
    let integrand = Poly::new(binom)?.mul(&h);
    Ok((0..n)
        .map(|m| {
            let lhs = k.apply_derivative(omega.powu(m as u32).coeffs(), prec);
            (lhs, integrand.coeff(n - 1 - m))
        })
        .collect())
}

/// Evaluation of `h_{N,s}` with a flag for the perturbed stencil.
#[derive(Clone, Debug)]
pub struct HnsValue {
    pub value: Scalar,
    /// Points closer than `NEAR_POINTS`; evaluated on a perturbed stencil
    /// with tolerance degraded to about `1e-20`.
    pub perturbed: bool,
}

pub const NEAR_POINTS: f64 = 1e-10;

/// Raw determinant definition at pairwise-distinct points.
fn h_ns_direct(hs: &[Poly], n: usize, points: &[Scalar]) -> Result<Scalar> {
    let s = points.len();
    let prec_one = points[0].one_like();
    let m = ScalarMatrix::from_fn(s, s, |i, j| {
        let u = &points[j];
        u.powu((s - 1 - i) as u32) * (u - &prec_one).powu(i as u32) * hs[n - s + i].eval(u)
    });
    let mut vdm = prec_one.clone();
    for j in 0..s {
        for k in j + 1..s {
            vdm *= &points[k] - &points[j];
        }
    }
    Ok(m.determinant()? / vdm)
}

fn check_hns_args(n: usize, s: usize) -> Result<()> {
    if s == 0 || s > n {
        return Err(Error::IndexOutOfRange(format!("need 1 <= s <= N = {n}, got s = {s}")));
    }
    Ok(())
}

fn min_gap(points: &[Scalar]) -> f64 {
    let mut min = f64::INFINITY;
    for j in 0..points.len() {
        for k in j + 1..points.len() {
            min = min.min((&points[k] - &points[j]).abs_f64());
        }
    }
    min
}

/// `h_{N,s}(u₁..u_s)` from its determinant definition.
pub fn h_ns(p: &HomParams, n: usize, points: &[Scalar]) -> Result<HnsValue> {
    let s = points.len();
    check_hns_args(n, s)?;
    if min_gap(points) >= NEAR_POINTS {
        let hs = gen_h_family(p, n)?;
        return Ok(HnsValue {
            value: h_ns_direct(&hs, n, points)?,
            perturbed: false,
        });
    }
    // perturbed stencil u_j + j δ and u_j + 2 j δ, Richardson-combined
    let fine = Precision::new(200);
    let pf = p.with_precision(fine);
    let hs = gen_h_family(&pf, n)?;
    let lift = |x: &Scalar| Scalar::from_complex(rug::Complex::with_val(fine.bits(), x.as_complex()));
    let delta = fine.from_float(&fine.epsilon_with_offset(170));
    let shifted = |step: &Scalar| -> Vec<Scalar> {
        points
            .iter()
            .enumerate()
            .map(|(j, u)| lift(u) + step.mul_int(j as i64))
            .collect()
    };
    let f1 = h_ns_direct(&hs, n, &shifted(&delta))?;
    let f2 = h_ns_direct(&hs, n, &shifted(&delta.mul_int(2)))?;
    let value = f1.mul_int(2) - f2;
    let back = Scalar::from_complex(rug::Complex::with_val(p.precision().bits(), value.as_complex()));
    Ok(HnsValue {
        value: back,
        perturbed: true,
    })
}

/// Dense coefficient tensor of `h_{N,s}` (degree `≤ N−1` in each variable),
/// recovered by inverse discrete Fourier transform over rotated roots of
/// unity, one rotation per variable so the nodes never coincide.
pub fn h_ns_poly(p: &HomParams, n: usize, s: usize) -> Result<MultiSeries> {
    check_hns_args(n, s)?;
    let prec = p.precision();
    let hs = gen_h_family(p, n)?;
    let two_pi = prec.pi().mul_int(2);
    let imag_unit = prec.complex(0.0, 1.0);
    let nodes: Vec<Vec<Scalar>> = (0..s)
        .map(|j| {
            let theta = prec.ratio(j as i64 + 1, s as i64 + 1);
            (0..n)
                .map(|m| (&imag_unit * &two_pi * (prec.int(m as i64) + &theta) / prec.int(n as i64)).exp())
                .collect()
        })
        .collect();
    let orders = vec![n - 1; s];
    let mut values = MultiSeries::zeros(prec, &orders);
    let total = values.len();
    for flat in 0..total {
        let idx = values.multi_index(flat);
        let pts: Vec<Scalar> = idx.iter().enumerate().map(|(j, &m)| nodes[j][m].clone()).collect();
        values.set_coeff(&idx, h_ns_direct(&hs, n, &pts)?);
    }
    // separable inverse transform along each axis
    let mut coeffs = values;
    for var in 0..s {
        let theta = prec.ratio(var as i64 + 1, s as i64 + 1);
        let mut next = MultiSeries::zeros(prec, &orders);
        for flat in 0..total {
            let idx = next.multi_index(flat);
            let k = idx[var];
            let mut acc = prec.zero();
            for m in 0..n {
                let mut src = idx.clone();
                src[var] = m;
                // conj of node^k = e^{-2πi(m+θ)k/N}
                let w = (-(&imag_unit * &two_pi * (prec.int(m as i64) + &theta) * prec.int(k as i64))
                    / prec.int(n as i64))
                .exp();
                acc += w * coeffs.coeff(&src);
            }
            next.set_coeff(&idx, acc / prec.int(n as i64));
        }
        coeffs = next;
    }
    Ok(coeffs)
}

/// Bare partition function `Z_N(λ+ξ₁, …, λ+ξ_s, λ, …)/Z_N(λ, …)`. Vanishing
/// shifts are dropped (`h_{N,s+1}(…, 1) = h_{N,s}(…)`).
pub fn bare_z(p: &HomParams, n: usize, xis: &[Scalar]) -> Result<Scalar> {
    if xis.len() > n {
        return Err(Error::IndexOutOfRange(format!(
            "{} inhomogeneities on an N = {n} lattice",
            xis.len()
        )));
    }
    let prec = p.precision();
    let active: Vec<&Scalar> = xis.iter().filter(|x| !x.is_zero()).collect();
    if active.is_empty() {
        return Ok(prec.one());
    }
    let a = p.a();
    let mut factor = prec.one();
    let mut us = Vec::with_capacity(active.len());
    for xi in &active {
        let shifted = &p.lambda + *xi;
        factor *= (p.a_at(&shifted) / &a).powu(n as u32 - 1);
        us.push(gamma(xi, p)?);
    }
    Ok(factor * h_ns(p, n, &us)?.value)
}

/// `Asym` helper: signed sum of `f` over all orderings of the arguments,
/// divided by `s!`.
pub fn antisymmetrize(points: &[Scalar], f: impl Fn(&[Scalar]) -> Result<Scalar>) -> Result<Scalar> {
    let s = points.len();
    let prec_zero = points[0].zero_like();
    let mut acc = prec_zero;
    let mut fact = 1i64;
    for k in 2..=s as i64 {
        fact *= k;
    }
    for (perm, sign) in permutations_with_sign(s) {
        let args: Vec<Scalar> = perm.iter().map(|&i| points[i].clone()).collect();
        let v = f(&args)?;
        if sign > 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    Ok(acc.div_int(fact))
}

/// Tanh-sinh quadrature of `∫ e^{x(λ−π/2)} x^k sinh(ηx)/sinh(πx/2) dx` over
/// the real line, truncated where the tail drops below `1e-30`.
pub fn laplace_moment(p: &HomParams, k: u32) -> Result<Scalar> {
    if !p.is_disordered_real() {
        return Err(Error::InvalidParams(
            "the Laplace representation is implemented for the real disordered regime only".into(),
        ));
    }
    let prec = Precision::new(50);
    let lam = prec.real(p.lambda.re_f64());
    let eta = prec.real(p.eta.re_f64());
    let (l, e) = (p.lambda.re_f64(), p.eta.re_f64());
    let kappa = std::f64::consts::FRAC_PI_2 - e - (l - std::f64::consts::FRAC_PI_2).abs();
    // tail ∫_X^∞ x^k e^{-κx} dx stays below 1e-30
    let mut x_max = 80.0 / kappa;
    while (k as f64) * x_max.ln() - kappa * x_max > -30.0 * std::f64::consts::LN_10 {
        x_max *= 1.5;
    }
    let half_pi = prec.pi() / prec.int(2);
    let shift = &lam - &half_pi;
    let limit_at_zero = &eta / &half_pi;
    let integrand = |x: &Scalar| -> Scalar {
        if x.is_zero() {
            return if k == 0 { limit_at_zero.clone() } else { x.zero_like() };
        }
        (x * &shift).exp() * x.powu(k) * (&eta * x).sinh() / (&half_pi * x).sinh()
    };
    let big_x = prec.real(x_max);
    let tol = 1e-18;
    let mut prev: Option<Scalar> = None;
    for level in 3..=12 {
        let h = 1.0 / f64::from(1u32 << level);
        let est = tanh_sinh(&integrand, &big_x, h, prec);
        if let Some(pv) = &prev {
            if est.abs_dev(pv) <= tol * est.abs_f64().max(1.0) {
                return Ok(Scalar::from_complex(rug::Complex::with_val(
                    p.precision().bits(),
                    est.as_complex(),
                )));
            }
        }
        prev = Some(est);
    }
    Err(Error::InvalidParams("tanh-sinh quadrature did not converge".into()))
}

fn tanh_sinh(f: &impl Fn(&Scalar) -> Scalar, half_width: &Scalar, h: f64, prec: Precision) -> Scalar {
    let half_pi = prec.pi() / prec.int(2);
    let mut sum = prec.zero();
    let mut j: i64 = 0;
    loop {
        let t = prec.real(h * j as f64);
        let sh = t.sinh();
        let ch = (t.exp() + (-&t).exp()) / prec.int(2);
        let u = &half_pi * &sh;
        let cosh_u = (u.exp() + (-&u).exp()) / prec.int(2);
        let tanh_u = u.sinh() / &cosh_u;
        let weight = &half_pi * &ch / cosh_u.powu(2);
        if weight.abs_f64() < 1e-60 {
            break;
        }
        let x = half_width * &tanh_u;
        let contrib = if j == 0 {
            f(&x) * &weight
        } else {
            (f(&x) + f(&-x.clone())) * &weight
        };
        sum += contrib;
        j += 1;
        if j > 1_000_000 {
            break;
        }
    }
    sum * half_width * prec.real(h)
}

/// The product `Π_j ω_j^{N−r} ρ_j^N Π_{j<k} 1/(ρ̃_j ρ_k (ω̃_j ω_k − 1))` as a
/// series in `ε₁..ε_s` with per-variable order `order`.
pub fn ortho_generating_product(p: &HomParams, n: usize, r: usize, s: usize, order: usize) -> Result<MultiSeries> {
    let prec = p.precision();
    let orders = vec![order; s];
    let mut g = MultiSeries::constant(prec.one(), &orders);
    let mut omegas = Vec::with_capacity(s);
    let mut rhos = Vec::with_capacity(s);
    for j in 0..s {
        let om = jets::omega(p, j, &orders)?;
        let rh = jets::rho(p, j, &orders)?;
        g = &g * &(&om.powu((n - r) as u32) * &rh.powu(n as u32));
        omegas.push(om);
        rhos.push(rh);
    }
    for j in 0..s {
        let om_t = jets::omega_tilde(p, j, &orders)?;
        let rh_t = jets::rho_tilde(p, j, &orders)?;
        for k in j + 1..s {
            let pair = (&om_t * &omegas[k]).add_constant(&-prec.one());
            let den = &(&rh_t * &rhos[k]) * &pair;
            g = g.try_div(&den)?;
        }
    }
    Ok(g)
}

/// `F_N^{(r,s)}` from the orthogonal-polynomial determinant
/// `(−1)^s det[K_{N−s+i−1}(∂_{ε_j})]` acting on the generating product.
pub fn efp_ortho(p: &HomParams, n: usize, r: usize, s: usize) -> Result<Scalar> {
    efp_ortho_capped(p, n, r, s, crate::efp::S_CAP, crate::efp::N_CAP)
}

pub fn efp_ortho_capped(p: &HomParams, n: usize, r: usize, s: usize, s_cap: usize, n_cap: usize) -> Result<Scalar> {
    crate::efp::check_indices(n, r, s)?;
    let prec = p.precision();
    if s > r {
        return Ok(prec.zero());
    }
    if s == 0 {
        return Ok(prec.one());
    }
    if s > s_cap {
        return Err(Error::SizeCap { what: "s for the orthogonal-polynomial formula", got: s, max: s_cap });
    }
    if n > n_cap {
        return Err(Error::SizeCap { what: "N for the orthogonal-polynomial formula", got: n, max: n_cap });
    }
    let table = moments(p, 2 * n - 2)?;
    let order = n - 1;
    let g = ortho_generating_product(p, n, r, s, order)?;
    // weights[i][k] = [K_{N−s+i}]_k · k!
    let mut weights = Vec::with_capacity(s);
    for i in 0..s {
        let k = table.k_poly(n - s + i)?;
        let mut fact = prec.one();
        let row: Vec<Scalar> = (0..=order)
            .map(|m| {
                if m > 0 {
                    fact = fact.mul_int(m as i64);
                }
                k.coeff(m) * &fact
            })
            .collect();
        weights.push(row);
    }
    let mut det = prec.zero();
    for (perm, sign) in permutations_with_sign(s) {
        let mut acc = prec.zero();
        for flat in 0..g.len() {
            let idx = g.multi_index(flat);
            let mut w = g.coeffs()[flat].clone();
            for (j, &m) in idx.iter().enumerate() {
                w *= &weights[perm[j]][m];
            }
            acc += w;
        }
        if sign > 0 {
            det += acc;
        } else {
            det -= acc;
        }
    }
    Ok(if s % 2 == 0 { det } else { -det })
}

/// Both sides of the bordered Hankel identity: the `n×n` determinant with
/// moment columns `c_{i+m}`, `m < n−k`, and columns `x_j^i` equals
/// `h_0⋯h_{n−k−1} det[P_{n−k+i}(x_j)]_{i,j<k}`.
pub fn bordered_hankel_sides(table: &MomentTable, n: usize, xs: &[Scalar]) -> Result<(Scalar, Scalar)> {
    let k = xs.len();
    if k > n {
        return Err(Error::ShapeMismatch(format!("{k} border columns for an {n}x{n} determinant")));
    }
    let prec = table.precision();
    let m = n - k;
    if n >= 1 && 2 * n - 1 > table.c.len() {
        return Err(Error::SizeCap { what: "moment index", got: 2 * n - 2, max: table.c.len() - 1 });
    }
    let lhs = ScalarMatrix::from_fn(n, n, |i, col| {
        if col < m {
            table.c[i + col].clone()
        } else {
            xs[col - m].powu(i as u32)
        }
    })
    .determinant()?;
    let polys: Vec<Poly> = (0..k).map(|i| table.monic_p(m + i)).collect::<Result<_>>()?;
    let inner = ScalarMatrix::from_fn(k, k, |i, j| polys[i].eval(&xs[j])).determinant()?;
    let norms = table.h[..m].iter().fold(prec.one(), |acc, h| acc * h);
    Ok((lhs, norms * inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn prec() -> Precision {
        Precision::new(128)
    }

    #[test]
    fn moment_basics() {
        let p = prec();
        let ice = HomParams::ice_point(p);
        let t = moments(&ice, 16).unwrap();
        assert!(t.c[0].rel_dev(&ice.phi()) < 1e-120);
        assert!(t.c[1].abs_f64() < 1e-120);
        assert!(t.h[0].rel_dev(&t.c[0]) < 1e-120);
        for n in 1..=8 {
            let prod = t.h[..n].iter().fold(p.one(), |acc, x| acc * x);
            assert!(prod.rel_dev(&t.hankel_dets[n]) < 1e-100);
        }
    }

    #[test]
    fn orthogonality() {
        let p = prec();
        let ice = HomParams::ice_point(p);
        let t = moments(&ice, 12).unwrap();
        assert!(t.monic_p(0).unwrap().leading().rel_dev(&p.one()) < 1e-120);
        let p1 = t.monic_p(1).unwrap();
        assert!(p1.coeff(0).abs_dev(&(-&t.c[1] / &t.c[0])) < 1e-120);
        for m in 0..=5 {
            for n in 0..=5 {
                let ip = t.inner(&t.monic_p(m).unwrap(), &t.monic_p(n).unwrap()).unwrap();
                if m == n {
                    assert!(ip.rel_dev(&t.h[n]) < 1e-90);
                } else {
                    assert!(ip.abs_f64() < 1e-90 * t.h[m.max(n)].abs_f64());
                }
            }
        }
        assert!(t.k_poly(0).unwrap().coeff(0).rel_dev(&p.one()) < 1e-120);
    }

    #[test]
    fn boundary_distribution() {
        let p = prec();
        let ice = HomParams::ice_point(p);
        let h3 = boundary_h(&ice, 3).unwrap();
        for (x, k) in h3.iter().zip([2, 3, 2]) {
            assert!(x.rel_dev(&p.ratio(k, 7)) < 1e-100);
        }
        let hp = HomParams::new(p, p.real(1.3), p.real(0.4)).unwrap();
        for n in 1..=6 {
            let got = boundary_h(&hp, n).unwrap();
            let want = oracle::brute_first_row_c(&hp, n).unwrap();
            for (g, w) in got.iter().zip(&want) {
                assert!(g.rel_dev(w) < 1e-90, "N = {n}");
            }
        }
        let h2 = gen_h(&ice, 2).unwrap();
        assert!(h2.coeff(0).rel_dev(&p.ratio(1, 2)) < 1e-100);
        for n in 1..=10 {
            assert!(gen_h(&hp, n).unwrap().eval(&p.one()).rel_dev(&p.one()) < 1e-90);
        }
    }

    #[test]
    fn claim_and_matrix_identities() {
        let p = prec();
        let hp = HomParams::new(p, p.real(1.7), p.real(0.5)).unwrap();
        for n in 1..=6 {
            for (lhs, rhs) in claim_sides(&hp, n).unwrap() {
                assert!(lhs.abs_dev(&rhs) < 1e-90);
            }
            let v = v_vector(&hp, n).unwrap();
            let h = boundary_h(&hp, n).unwrap();
            let a = a_matrix_power(p, n).unwrap();
            let b = a_matrix_binomial(p, n);
            for i in 0..n {
                for j in 0..n {
                    assert!(a.get(i, j).abs_dev(b.get(i, j)) < 1e-120);
                }
                let mut acc = p.zero();
                for j in 0..n {
                    acc += a.get(i, j) * &h[j];
                }
                if n % 2 == 0 {
                    acc = -acc;
                }
                assert!(acc.abs_dev(&v[i]) < 1e-90);
            }
        }
    }

    #[test]
    fn h_ns_properties() {
        let p = prec();
        let hp = HomParams::new(p, p.real(1.4), p.real(0.35)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let pts: Vec<Scalar> = (0..3).map(|_| p.real(rng.gen_range(-1.0..2.0))).collect();
        let n = 5;
        let single = h_ns(&hp, n, &pts[..1]).unwrap().value;
        assert!(single.rel_dev(&gen_h(&hp, n).unwrap().eval(&pts[0])) < 1e-100);
        let two = h_ns(&hp, n, &pts[..2]).unwrap().value;
        let mut with_one = pts[..2].to_vec();
        with_one.push(p.one());
        assert!(h_ns(&hp, n, &with_one).unwrap().value.rel_dev(&two) < 1e-90);
        let swapped = vec![pts[1].clone(), pts[0].clone(), pts[2].clone()];
        let v = h_ns(&hp, n, &pts).unwrap().value;
        assert!(h_ns(&hp, n, &swapped).unwrap().value.rel_dev(&v) < 1e-90);
        let poly = h_ns_poly(&hp, n, 3).unwrap();
        assert!(poly.evaluate(&pts).rel_dev(&v) < 1e-80);
        let close = vec![pts[0].clone(), &pts[0] + &p.real(1e-14)];
        let res = h_ns(&hp, n, &close).unwrap();
        assert!(res.perturbed);
        let two_poly = h_ns_poly(&hp, n, 2).unwrap();
        assert!(res.value.rel_dev(&two_poly.evaluate(&close)) < 1e-20);
    }

    #[test]
    fn partition_function_from_norms() {
        let p = prec();
        let hp = HomParams::new(p, p.real(1.3), p.real(0.55)).unwrap();
        for n in 1..=7 {
            let z = crate::detform::z_hom(&hp, n).unwrap().value;
            assert!(z_from_norms(&hp, n).unwrap().rel_dev(&z) < 1e-100);
        }
    }

    #[test]
    fn free_fermion_generating_function() {
        let p = prec();
        let ff = HomParams::free_fermion_point(p);
        for n in 1..=5 {
            let h = gen_h(&ff, n).unwrap();
            let half = p.ratio(1, 2);
            for r in 0..n {
                let want = p.binomial(n as u32 - 1, r as u32) * half.powu(n as u32 - 1);
                assert!(h.coeff(r).rel_dev(&want) < 1e-100);
            }
        }
    }

    #[test]
    fn laplace_grounding() {
        let p = prec();
        let hp = HomParams::new(p, p.real(1.2), p.real(0.4)).unwrap();
        let phi = laplace_moment(&hp, 0).unwrap();
        assert!(phi.rel_dev(&hp.phi()) < 1e-15);
        let derivs = hp.phi_derivatives(2).unwrap();
        let c2 = laplace_moment(&hp, 2).unwrap();
        assert!(c2.rel_dev(&derivs[2]) < 1e-12);
    }
    #[test]
    fn ortho_emptiness_matches_derivative_formula() {
        let p = prec();
        let ice = HomParams::ice_point(p);
        assert!(efp_ortho(&ice, 3, 1, 1).unwrap().rel_dev(&p.ratio(2, 7)) < 1e-100);
        let hp = HomParams::new(p, p.real(1.45), p.real(0.3)).unwrap();
        for n in 1..=6 {
            for r in 1..=n {
                for s in 1..=r.min(3) {
                    let a = efp_ortho(&hp, n, r, s).unwrap();
                    let b = crate::efp::efp_hom(&hp, n, r, s).unwrap();
                    assert!(a.rel_dev(&b) < 1e-80, "N={n} r={r} s={s}");
                }
            }
        }
    }

    #[test]
    fn bordered_hankel_identity() {
        let p = prec();
        let hp = HomParams::new(p, p.real(1.6), p.real(0.45)).unwrap();
        let t = moments(&hp, 12).unwrap();
        let xs = [p.real(0.3), p.real(-1.1), p.real(2.5)];
        for n in 3..=6 {
            for k in 1..=3 {
                let (lhs, rhs) = bordered_hankel_sides(&t, n, &xs[..k]).unwrap();
                assert!(lhs.rel_dev(&rhs) < 1e-90, "n={n} k={k}");
            }
        }
    }
}
