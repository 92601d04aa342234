//! Multiple integral representations of the emptiness formation probability.
//! Every contour encircles only the origin, so each integral is the
//! coefficient of `Π z_j^{−1}` of a Laurent series whose only pole is an
//! explicit monomial; the analytic remainder is expanded in a truncated
//! series ring.

use crate::detform::z_hom;
use crate::efp::{check_indices, N_CAP};
use crate::error::{Error, Result};
use crate::model::{jets, HomParams};
use crate::numerics::combin::permutations_with_sign;
use crate::numerics::{series_determinant, MultiSeries, Precision, Scalar};
use crate::oracle;
use crate::orthopoly::{gen_h_family, h_ns_poly};

/// Default cap on `s` for the first two representations.
pub const S_CAP: usize = 3;
/// Default cap on `s` for the partition-function representation.
pub const S_CAP_MIR3: usize = 2;

/// Residue at the origin of `F(z) / Π z_j^{pole_j}` with `F` analytic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueProblem {
    pub pole_orders: Vec<usize>,
    pub taylor_orders: Vec<usize>,
}

impl ResidueProblem {
    pub fn new(pole_orders: Vec<usize>, taylor_orders: Vec<usize>) -> Result<Self> {
        if pole_orders.len() != taylor_orders.len() {
            return Err(Error::ShapeMismatch("pole and Taylor orders differ in length".into()));
        }
        if pole_orders.iter().zip(&taylor_orders).any(|(&p, &t)| p > t + 1) {
            return Err(Error::ShapeMismatch(
                "Taylor order below pole order minus one".into(),
            ));
        }
        Ok(Self {
            pole_orders,
            taylor_orders,
        })
    }

    pub fn uniform(s: usize, pole: usize, taylor: usize) -> Result<Self> {
        Self::new(vec![pole; s], vec![taylor; s])
    }

    pub fn num_vars(&self) -> usize {
        self.pole_orders.len()
    }

    /// Coefficient of `Π z_j^{pole_j − 1}` of the analytic part.
    pub fn extract(&self, analytic: &MultiSeries) -> Result<Scalar> {
        if analytic.orders() != self.taylor_orders.as_slice() {
            return Err(Error::ShapeMismatch("series ring differs from the problem".into()));
        }
        let idx: Vec<usize> = self.pole_orders.iter().map(|&p| p.saturating_sub(1)).collect();
        if self.pole_orders.contains(&0) {
            // no pole in some variable: the integral vanishes
            return Ok(analytic.constant_term().zero_like());
        }
        Ok(analytic.coeff(&idx))
    }
}

fn check_caps(n: usize, r: usize, s: usize, s_cap: usize, what: &'static str) -> Result<()> {
    check_indices(n, r, s)?;
    if s > s_cap {
        return Err(Error::SizeCap { what, got: s, max: s_cap });
    }
    if n > N_CAP {
        return Err(Error::SizeCap { what: "N for the integral representations", got: n, max: N_CAP });
    }
    Ok(())
}

/// Default Taylor order for the first two representations.
pub fn default_order(r: usize, s: usize) -> usize {
    r + s + 2
}

/// Default Taylor order for the partition-function representation.
pub fn default_order_mir3(r: usize) -> usize {
    r + 2
}

fn var(prec: Precision, orders: &[usize], j: usize) -> MultiSeries {
    MultiSeries::variable(prec, orders, j)
}

fn poly_series(prec: Precision, orders: &[usize], j: usize, coeffs: &[Scalar]) -> MultiSeries {
    let like = prec.zero();
    let mut c = coeffs.to_vec();
    c.truncate(orders[j] + 1);
    MultiSeries::from_univariate(&like, orders, j, &c)
}

/// `(z_j − 1)^{−k}`.
fn inv_z_minus_one(prec: Precision, orders: &[usize], j: usize, k: u32) -> Result<MultiSeries> {
    Ok(var(prec, orders, j).add_constant(&-prec.one()).reciprocal()?.powu(k))
}

/// Pair factor `(z̃_j − 1)(z_k − 1)/(z̃_j z_k − 1)` over the common
/// denominator `b² z_j z_k − (a²+b²−c²) z_j + a²`.
fn pair_factor(p: &HomParams, orders: &[usize], j: usize, k: usize) -> Result<MultiSeries> {
    let prec = p.precision();
    let (a2, b2, c2) = (p.a().powu(2), p.b().powu(2), p.c().powu(2));
    let zj = var(prec, orders, j);
    let zk = var(prec, orders, k);
    let num = &zj.scale(&(&c2 - &a2)).add_constant(&a2) * &zk.add_constant(&-prec.one());
    let den = (&(&zj * &zk).scale(&b2) - &zj.scale(&(&a2 + &b2 - &c2))).add_constant(&a2);
    if den.constant_term().is_below(&prec.singularity_threshold()) {
        return Err(Error::Singularity { what: "pair denominator at the origin", modulus: 0.0 });
    }
    num.try_div(&den)
}

/// Analytic part of the first representation: the determinant with
/// `z_j^r` cleared, times the double product.
pub fn mir1_integrand(p: &HomParams, n: usize, s: usize, order: usize) -> Result<MultiSeries> {
    let prec = p.precision();
    let orders = vec![order; s];
    let hs = gen_h_family(p, n)?;
    let mut rows = Vec::with_capacity(s);
    for k in 1..=s {
        let row = (0..s)
            .map(|j| {
                let h = poly_series(prec, &orders, j, hs[n - k].coeffs());
                let zpow = var(prec, &orders, j).powu(k as u32 - 1);
                Ok(&(&zpow * &h) * &inv_z_minus_one(prec, &orders, j, k as u32)?)
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let mut acc = series_determinant(&rows)?;
    for j in 0..s {
        for k in j + 1..s {
            acc = &acc * &pair_factor(p, &orders, j, k)?;
        }
    }
    Ok(acc)
}

pub fn efp_mir1(p: &HomParams, n: usize, r: usize, s: usize) -> Result<Scalar> {
    efp_mir1_with_order(p, n, r, s, default_order(r, s))
}

pub fn efp_mir1_with_order(p: &HomParams, n: usize, r: usize, s: usize, order: usize) -> Result<Scalar> {
    check_caps(n, r, s, S_CAP, "s for the first integral representation")?;
    let prec = p.precision();
    if s == 0 {
        return Ok(prec.one());
    }
    if s > r {
        return Ok(prec.zero());
    }
    let problem = ResidueProblem::uniform(s, r, order)?;
    let res = problem.extract(&mir1_integrand(p, n, s, order)?)?;
    Ok(if s % 2 == 0 { res } else { -res })
}

/// Univariate coefficients of `u(z) = −(z−1)/((t²−2tΔ)z+1)`.
pub fn u_series(p: &HomParams, order: usize) -> Result<Vec<Scalar>> {
    let prec = p.precision();
    let (t, delta) = (p.b() / p.a(), p.delta());
    let kappa = t.powu(2) - (&t * &delta).mul_int(2);
    let orders = [order];
    let z = var(prec, &orders, 0);
    let num = -&z.add_constant(&-prec.one());
    let den = z.scale(&kappa).add_constant(&prec.one());
    Ok(num.try_div(&den)?.coeffs().to_vec())
}

/// Analytic part of the second representation, with `z_j^r` cleared and the
/// constant prefactor omitted.
pub fn mir2_integrand(p: &HomParams, n: usize, s: usize, order: usize) -> Result<MultiSeries> {
    let prec = p.precision();
    let orders = vec![order; s];
    let (t, delta) = (p.b() / p.a(), p.delta());
    let t2 = t.powu(2);
    let two_t_delta = (&t * &delta).mul_int(2);
    let kappa = &t2 - &two_t_delta;
    let mut acc = MultiSeries::constant(prec.one(), &orders);
    for j in 0..s {
        for k in j + 1..s {
            let diff = &var(prec, &orders, k) - &var(prec, &orders, j);
            acc = &acc * &(&diff * &diff);
        }
    }
    for j in 0..s {
        for k in 0..s {
            if j == k {
                continue;
            }
            let zj = var(prec, &orders, j);
            let den = (&(&zj * &var(prec, &orders, k)).scale(&t2) - &zj.scale(&two_t_delta)).add_constant(&prec.one());
            acc = acc.try_div(&den)?;
        }
        let lin = var(prec, &orders, j).scale(&kappa).add_constant(&prec.one());
        acc = &acc * &lin.powu(s as u32 - 1);
        acc = &acc * &inv_z_minus_one(prec, &orders, j, s as u32)?;
    }
    let h_big = h_ns_poly(p, n, s)?.with_orders(&orders);
    acc = &acc * &h_big;
    if s > 1 {
        let u = u_series(p, order)?;
        let h_small = h_ns_poly(p, s, s)?;
        let subs = vec![u; s];
        acc = &acc * &h_small.substitute_univariate(&subs, &orders);
    }
    Ok(acc)
}

fn factorial_i64(s: usize) -> i64 {
    (1..=s as i64).product()
}

pub fn efp_mir2(p: &HomParams, n: usize, r: usize, s: usize) -> Result<Scalar> {
    efp_mir2_with_order(p, n, r, s, default_order(r, s))
}

pub fn efp_mir2_with_order(p: &HomParams, n: usize, r: usize, s: usize, order: usize) -> Result<Scalar> {
    check_caps(n, r, s, S_CAP, "s for the second integral representation")?;
    let prec = p.precision();
    if s == 0 {
        return Ok(prec.one());
    }
    if s > r {
        return Ok(prec.zero());
    }
    let problem = ResidueProblem::uniform(s, r, order)?;
    let res = problem.extract(&mir2_integrand(p, n, s, order)?)?;
    let z_s = z_hom(p, s)?.value;
    let den = p.a().powu((s * (s - 1)) as u32) * p.c().powu(s as u32);
    let value = z_s / den * res;
    let value = value.div_int(factorial_i64(s));
    Ok(if (s * (s + 1) / 2) % 2 == 0 { value } else { -value })
}

/// Source of the jet of `Z_N(η−ξ₁, …, η−ξ_s, λ, …, λ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZJetSource {
    /// Enumeration with jet-valued weights (`N ≤ 6`).
    Oracle,
    /// `h_{N,s}` composed with the `ω` jets.
    HnsOmega,
}

/// `Z_N(η−ξ₁, …, η−ξ_s, λ, …)/Z_N(λ, …)` as a jet in `ξ`.
pub fn shifted_z_ratio_jet(p: &HomParams, n: usize, s: usize, order: usize, source: ZJetSource) -> Result<MultiSeries> {
    let prec = p.precision();
    let orders = vec![order; s];
    match source {
        ZJetSource::Oracle => {
            if n > 6 {
                return Err(Error::SizeCap { what: "N for enumeration jets", got: n, max: 6 });
            }
            let mut lambdas = vec![p.lambda.clone(); n];
            for l in lambdas.iter_mut().take(s) {
                *l = p.eta.clone();
            }
            let jet = oracle::z_jet(prec, &lambdas, &p.eta, &orders, &vec![-1; s])?;
            Ok(jet.scale(&z_hom(p, n)?.value.recip()))
        }
        ZJetSource::HnsOmega => {
            let omega = jets::omega_coeffs(p, order)?;
            let h = h_ns_poly(p, n, s)?;
            let mut acc = h.substitute_univariate(&vec![omega; s], &orders);
            let center = prec.pi() - p.eta.mul_int(2);
            let a_inv = p.a().recip();
            for j in 0..s {
                // a(η − ξ) = sin(2η − ξ) = sin(π − 2η + ξ)
                let ratio = MultiSeries::sine_jet(&center, j, &orders).scale(&a_inv);
                acc = &acc * &ratio.powu(n as u32 - 1);
            }
            Ok(acc)
        }
    }
}

/// Analytic part of the partition-function representation, with
/// `(sin ξ_j)^r` replaced by its unit factor and constants omitted.
pub fn mir3_integrand(p: &HomParams, n: usize, r: usize, s: usize, order: usize, source: ZJetSource) -> Result<MultiSeries> {
    let prec = p.precision();
    let orders = vec![order; s];
    let two_eta = p.eta.mul_int(2);
    let mut acc = MultiSeries::constant(prec.one(), &orders);
    for j in 0..s {
        for k in j + 1..s {
            let sdiff = (&var(prec, &orders, k) - &var(prec, &orders, j)).sin();
            acc = &acc * &(&sdiff * &sdiff);
        }
    }
    for j in 0..s {
        for k in 0..s {
            if j != k {
                let arg = (&var(prec, &orders, j) - &var(prec, &orders, k)).add_constant(&two_eta);
                acc = acc.try_div(&arg.sin())?;
            }
        }
        let s1 = MultiSeries::sine_jet(&-two_eta.clone(), j, &orders).powu((n - r) as u32);
        let s2 = MultiSeries::sine_jet(&(&p.lambda - &p.eta), j, &orders).powu(s as u32);
        acc = acc.try_div(&(&s1 * &s2))?;
        acc = acc.try_div(&sinc_series(prec, &orders, j).powu(r as u32))?;
    }
    acc = &acc * &shifted_z_ratio_jet(p, n, s, order, source)?;
    let lam_s = vec![p.lambda.clone(); s];
    acc = &acc * &oracle::z_jet(prec, &lam_s, &p.eta, &orders, &vec![1; s])?;
    Ok(acc)
}

/// `sin ξ / ξ` in variable `j`.
fn sinc_series(prec: Precision, orders: &[usize], j: usize) -> MultiSeries {
    let mut c = Vec::with_capacity(orders[j] + 1);
    let mut fact = prec.one();
    for m in 0..=orders[j] {
        // fact = (m+1)!
        fact = fact.mul_int(m as i64 + 1);
        c.push(if m % 2 == 1 {
            prec.zero()
        } else if (m / 2) % 2 == 0 {
            fact.recip()
        } else {
            -fact.recip()
        });
    }
    MultiSeries::from_univariate(&prec.zero(), orders, j, &c)
}

pub fn efp_mir3(p: &HomParams, n: usize, r: usize, s: usize) -> Result<Scalar> {
    let source = if n <= 6 { ZJetSource::Oracle } else { ZJetSource::HnsOmega };
    efp_mir3_with(p, n, r, s, default_order_mir3(r), source)
}

pub fn efp_mir3_with(p: &HomParams, n: usize, r: usize, s: usize, order: usize, source: ZJetSource) -> Result<Scalar> {
    check_caps(n, r, s, S_CAP_MIR3, "s for the partition-function integral representation")?;
    let prec = p.precision();
    if s == 0 {
        return Ok(prec.one());
    }
    if s > r {
        return Ok(prec.zero());
    }
    let problem = ResidueProblem::uniform(s, r, order)?;
    let res = problem.extract(&mir3_integrand(p, n, r, s, order, source)?)?;
    let num = p.a().powu(((n - r) * s) as u32) * p.b().powu((r * s) as u32);
    let value = num / p.c().powu(s as u32) * res;
    let value = value.div_int(factorial_i64(s));
    let parity = n * s + s * (s + 1) / 2;
    Ok(if parity % 2 == 0 { value } else { -value })
}

/// Both sides of the antisymmetrization identity at the points `z`.
pub fn asym_sides(p: &HomParams, z: &[Scalar]) -> Result<(Scalar, Scalar)> {
    let s = z.len();
    let prec = p.precision();
    let (a, b, c) = (p.a(), p.b(), p.c());
    let (a2, b2, c2) = (a.powu(2), b.powu(2), c.powu(2));
    let pair = |zs: &[Scalar]| -> Scalar {
        let mut acc = prec.one();
        for j in 0..s {
            for k in j + 1..s {
                let num = (&zs[j] * (&c2 - &a2) + &a2) * (&zs[k] - prec.one());
                let den = &zs[j] * &zs[k] * &b2 - &zs[j] * (&a2 + &b2 - &c2) + &a2;
                acc *= num / den;
            }
        }
        acc
    };
    let mut lhs = prec.zero();
    for (perm, sign) in permutations_with_sign(s) {
        let args: Vec<Scalar> = perm.iter().map(|&i| z[i].clone()).collect();
        let v = pair(&args);
        if sign > 0 {
            lhs += v;
        } else {
            lhs -= v;
        }
    }
    let lhs = lhs.div_int(factorial_i64(s));
    let (t, delta) = (&b / &a, p.delta());
    let t2 = t.powu(2);
    let two_t_delta = (&t * &delta).mul_int(2);
    let kappa = &t2 - &two_t_delta;
    let mut rhs = z_hom(p, s)?.value / (a.powu((s * (s - 1)) as u32) * c.powu(s as u32));
    rhs = rhs.div_int(factorial_i64(s));
    let mut us = Vec::with_capacity(s);
    for j in 0..s {
        for k in j + 1..s {
            rhs *= &z[k] - &z[j];
        }
        for k in 0..s {
            if k != j {
                rhs /= &z[j] * &z[k] * &t2 - &z[j] * &two_t_delta + prec.one();
            }
        }
        let lin = &z[j] * &kappa + prec.one();
        us.push(-(&z[j] - prec.one()) / &lin);
        rhs *= lin.powu(s as u32 - 1);
    }
    let hss = h_ns_poly(p, s, s)?.evaluate(&us);
    Ok((lhs, rhs * hss))
}

/// Both sides of `det[h_{N−k+1}(z_j)/(z_j^{r−k+1}(z_j−1)^k)] =
/// (−1)^{s(s−1)/2} Π z_j^{−r}(z_j−1)^{−s} Π_{j<k}(z_k−z_j) h_{N,s}(z)`.
pub fn determinant_hns_sides(p: &HomParams, n: usize, r: usize, z: &[Scalar]) -> Result<(Scalar, Scalar)> {
    let s = z.len();
    let prec = p.precision();
    let hs = gen_h_family(p, n)?;
    let m = crate::numerics::ScalarMatrix::from_fn(s, s, |row, j| {
        let k = row + 1;
        let zj = &z[j];
        hs[n - k].eval(zj) / (zj.powi(r as i32 - k as i32 + 1) * (zj - prec.one()).powu(k as u32))
    });
    let lhs = m.determinant()?;
    let mut rhs = crate::orthopoly::h_ns(p, n, z)?.value;
    for j in 0..s {
        rhs /= z[j].powu(r as u32) * (&z[j] - prec.one()).powu(s as u32);
        for k in j + 1..s {
            rhs *= &z[k] - &z[j];
        }
    }
    if (s * (s - 1) / 2) % 2 == 1 {
        rhs = -rhs;
    }
    Ok((lhs, rhs))
}
