//! Model parameters, Boltzmann weights and the scalar functions built from
//! them.
//!
//! Weights use the trigonometric parametrization
//! `a = sin(λ − ν + η)`, `b = sin(λ − ν − η)`, `c = sin 2η`. All functions
//! accept complex arguments; the disordered regime corresponds to real
//! `0 < η < π/2`, `η < λ < π − η`.

use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::{MultiSeries, Precision, Scalar, ScalarMatrix};

/// Returns `1/x`, or a singularity error when `|x|` is below the working
/// threshold.
pub fn checked_recip(x: &Scalar, prec: Precision, what: &'static str) -> Result<Scalar> {
    ensure_nonzero(x, prec, what)?;
    Ok(x.recip())
}

pub fn ensure_nonzero(x: &Scalar, prec: Precision, what: &'static str) -> Result<()> {
    if x.is_below(&prec.singularity_threshold()) {
        return Err(Error::Singularity {
            what,
            modulus: x.abs_f64(),
        });
    }
    Ok(())
}

/// Singularity test for a determinant relative to its Hadamard bound, so
/// that a determinant of many small entries is not mistaken for a pole;
/// singular once no working digit survives the cancellation.
pub fn ensure_nonsingular(m: &ScalarMatrix, det: &Scalar, prec: Precision, what: &'static str) -> Result<()> {
    if det.is_zero() || m.hadamard_digits_lost(det) >= prec.digits() as f64 {
        return Err(Error::Singularity {
            what,
            modulus: det.abs_f64(),
        });
    }
    Ok(())
}

/// `(a, b, c)` for spectral parameters `λ`, `ν`.
pub fn weights(lambda: &Scalar, nu: &Scalar, eta: &Scalar) -> (Scalar, Scalar, Scalar) {
    let diff = lambda - nu;
    (
        (&diff + eta).sin(),
        (&diff - eta).sin(),
        eta.mul_int(2).sin(),
    )
}

/// `φ(λ, ν) = c / (a b)`.
pub fn phi(lambda: &Scalar, nu: &Scalar, eta: &Scalar, prec: Precision) -> Result<Scalar> {
    let (a, b, c) = weights(lambda, nu, eta);
    ensure_nonzero(&a, prec, "phi (a-weight pole)")?;
    ensure_nonzero(&b, prec, "phi (b-weight pole)")?;
    Ok(c / (a * b))
}

/// `d(x, y) = sin(x − y)`.
pub fn d_fn(x: &Scalar, y: &Scalar) -> Scalar {
    (x - y).sin()
}

/// `e(x, y) = sin(x − y + 2η)`.
pub fn e_fn(x: &Scalar, y: &Scalar, eta: &Scalar) -> Scalar {
    (x - y + eta.mul_int(2)).sin()
}

/// R-matrix function `f(x, y) = sin(y − x + 2η) / sin(y − x)`.
pub fn f_fn(x: &Scalar, y: &Scalar, eta: &Scalar, prec: Precision) -> Result<Scalar> {
    let den = (y - x).sin();
    ensure_nonzero(&den, prec, "f (coincident arguments)")?;
    Ok((y - x + eta.mul_int(2)).sin() / den)
}

/// R-matrix function `g(x, y) = sin 2η / sin(y − x)`.
pub fn g_rmatrix_fn(x: &Scalar, y: &Scalar, eta: &Scalar, prec: Precision) -> Result<Scalar> {
    let den = (y - x).sin();
    ensure_nonzero(&den, prec, "g (coincident arguments)")?;
    Ok(eta.mul_int(2).sin() / den)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuxFn {
    D,
    E,
    F,
    GR,
}

pub fn aux_function(name: AuxFn, x: &Scalar, y: &Scalar, eta: &Scalar, prec: Precision) -> Result<Scalar> {
    match name {
        AuxFn::D => Ok(d_fn(x, y)),
        AuxFn::E => Ok(e_fn(x, y, eta)),
        AuxFn::F => f_fn(x, y, eta, prec),
        AuxFn::GR => g_rmatrix_fn(x, y, eta, prec),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Disordered,
    Ferroelectric,
    Antiferroelectric,
    /// `|Δ| = 1` within tolerance.
    Boundary,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::Disordered => "disordered",
            Regime::Ferroelectric => "ferroelectric",
            Regime::Antiferroelectric => "antiferroelectric",
            Regime::Boundary => "boundary",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct RegimeInfo {
    pub delta: Scalar,
    pub t_ratio: Scalar,
    pub regime: Regime,
}

/// Spectral and crossing parameter of the homogeneous model (`ν = 0`).
#[derive(Clone, Debug)]
pub struct HomParams {
    pub lambda: Scalar,
    pub eta: Scalar,
    prec: Precision,
}

impl HomParams {
    pub fn new(prec: Precision, lambda: Scalar, eta: Scalar) -> Result<Self> {
        let p = Self { lambda, eta, prec };
        ensure_nonzero(&p.a(), prec, "a-weight")?;
        ensure_nonzero(&p.b(), prec, "b-weight")?;
        ensure_nonzero(&p.c(), prec, "c-weight")?;
        Ok(p)
    }

    /// Parses angles such as `pi/2` or `0.5235987`.
    pub fn parse(prec: Precision, lambda: &str, eta: &str) -> Result<Self> {
        Self::new(prec, prec.parse_angle(lambda)?, prec.parse_angle(eta)?)
    }

    /// `λ = π/2`, `η = π/6`: all weights equal.
    pub fn ice_point(prec: Precision) -> Self {
        Self::parse(prec, "pi/2", "pi/6").expect("ice point is regular")
    }

    /// `λ = π/2`, `η = π/4`: `Δ = 0`.
    pub fn free_fermion_point(prec: Precision) -> Self {
        Self::parse(prec, "pi/2", "pi/4").expect("free-fermion point is regular")
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// Same parameters carried at a different precision.
    pub fn with_precision(&self, prec: Precision) -> Self {
        let lift = |x: &Scalar| {
            Scalar::from_complex(rug::Complex::with_val(prec.bits(), x.as_complex()))
        };
        Self {
            lambda: lift(&self.lambda),
            eta: lift(&self.eta),
            prec,
        }
    }

    pub fn a(&self) -> Scalar {
        self.a_at(&self.lambda)
    }

    pub fn b(&self) -> Scalar {
        self.b_at(&self.lambda)
    }

    pub fn c(&self) -> Scalar {
        self.eta.mul_int(2).sin()
    }

    /// `a(x, 0) = sin(x + η)`.
    pub fn a_at(&self, x: &Scalar) -> Scalar {
        (x + &self.eta).sin()
    }

    /// `b(x, 0) = sin(x − η)`.
    pub fn b_at(&self, x: &Scalar) -> Scalar {
        (x - &self.eta).sin()
    }

    /// `φ(λ) = sin 2η / (sin(λ − η) sin(λ + η))`.
    pub fn phi(&self) -> Scalar {
        self.c() / (self.a() * self.b())
    }

    /// Taylor coefficients `φ^(k)(λ)/k!` for `k = 0..=order`.
    pub fn phi_taylor(&self, order: usize) -> Result<Vec<Scalar>> {
        let orders = [order];
        let a = MultiSeries::sine_jet(&(&self.lambda + &self.eta), 0, &orders);
        let b = MultiSeries::sine_jet(&(&self.lambda - &self.eta), 0, &orders);
        ensure_nonzero(a.constant_term(), self.prec, "phi (a-weight pole)")?;
        ensure_nonzero(b.constant_term(), self.prec, "phi (b-weight pole)")?;
        let jet = (&a * &b).reciprocal()?.scale(&self.c());
        Ok(jet.coeffs().to_vec())
    }

    /// Derivatives `∂^k φ(λ)` for `k = 0..=order`.
    pub fn phi_derivatives(&self, order: usize) -> Result<Vec<Scalar>> {
        let taylor = self.phi_taylor(order)?;
        let mut fact = self.prec.one();
        Ok(taylor
            .into_iter()
            .enumerate()
            .map(|(k, t)| {
                if k > 0 {
                    fact = fact.mul_int(k as i64);
                }
                t * &fact
            })
            .collect())
    }

    pub fn delta(&self) -> Scalar {
        let (a, b, c) = (self.a(), self.b(), self.c());
        (a.powu(2) + b.powu(2) - c.powu(2)) / (a * b).mul_int(2)
    }

    pub fn regime_info(&self) -> RegimeInfo {
        let delta = self.delta();
        let t_ratio = self.b() / self.a();
        let x = delta.re_f64();
        let tol = 1e-20;
        let regime = if ((x.abs() - 1.0).abs()) < tol {
            Regime::Boundary
        } else if x.abs() < 1.0 {
            Regime::Disordered
        } else if x > 1.0 {
            Regime::Ferroelectric
        } else {
            Regime::Antiferroelectric
        };
        RegimeInfo {
            delta,
            t_ratio,
            regime,
        }
    }

    /// Real parameters with `0 < η < π/2` and `η < λ < π − η`.
    pub fn is_disordered_real(&self) -> bool {
        let tiny = 1e-30;
        if self.lambda.im_f64().abs() > tiny || self.eta.im_f64().abs() > tiny {
            return false;
        }
        let (l, e) = (self.lambda.re_f64(), self.eta.re_f64());
        let half_pi = std::f64::consts::FRAC_PI_2;
        e > 0.0 && e < half_pi && l > e && l < std::f64::consts::PI - e
    }

    pub fn omega_family(&self, eps: &Scalar) -> Result<OmegaFamily> {
        omega_family(eps, self)
    }
}

/// Spectral parameters `λ_α` (columns, right to left), `ν_k` (rows, top to
/// bottom) and crossing parameter `η` of the inhomogeneous model.
#[derive(Clone, Debug)]
pub struct InhomParams {
    pub lambdas: Vec<Scalar>,
    pub nus: Vec<Scalar>,
    pub eta: Scalar,
    prec: Precision,
}

impl InhomParams {
    /// Equal-length parameter sets with `N ≥ 1`. Coincident values are
    /// accepted here; the determinant formulas check distinctness themselves.
    pub fn new(prec: Precision, lambdas: Vec<Scalar>, nus: Vec<Scalar>, eta: Scalar) -> Result<Self> {
        if lambdas.is_empty() || lambdas.len() != nus.len() {
            return Err(Error::InvalidParams(format!(
                "need N >= 1 lambdas and nus of equal length, got {} and {}",
                lambdas.len(),
                nus.len()
            )));
        }
        Ok(Self {
            lambdas,
            nus,
            eta,
            prec,
        })
    }

    /// `λ_α = λ`, `ν_k = 0`.
    pub fn homogeneous(hom: &HomParams, n: usize) -> Self {
        Self {
            lambdas: vec![hom.lambda.clone(); n],
            nus: vec![hom.precision().zero(); n],
            eta: hom.eta.clone(),
            prec: hom.precision(),
        }
    }

    pub fn from_f64(prec: Precision, lambdas: &[f64], nus: &[f64], eta: f64) -> Result<Self> {
        Self::new(
            prec,
            lambdas.iter().map(|&x| prec.real(x)).collect(),
            nus.iter().map(|&x| prec.real(x)).collect(),
            prec.real(eta),
        )
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// `a(λ_α, ν_k)`, 0-based indices.
    pub fn a(&self, alpha: usize, k: usize) -> Scalar {
        (&self.lambdas[alpha] - &self.nus[k] + &self.eta).sin()
    }

    pub fn b(&self, alpha: usize, k: usize) -> Scalar {
        (&self.lambdas[alpha] - &self.nus[k] - &self.eta).sin()
    }

    pub fn c(&self) -> Scalar {
        self.eta.mul_int(2).sin()
    }

    pub fn phi(&self, alpha: usize, k: usize) -> Result<Scalar> {
        phi(&self.lambdas[alpha], &self.nus[k], &self.eta, self.prec)
    }

    /// Errors unless both parameter sets are pairwise distinct (mod π) above
    /// the singularity threshold.
    pub fn check_distinct(&self) -> Result<()> {
        let thr = self.prec.singularity_threshold();
        for (set, what) in [(&self.lambdas, "lambdas"), (&self.nus, "nus")] {
            for i in 0..set.len() {
                for j in i + 1..set.len() {
                    if d_fn(&set[i], &set[j]).is_below(&thr) {
                        return Err(Error::CoincidentParameters { what });
                    }
                }
            }
        }
        Ok(())
    }

    /// Smallest `|sin(x_i − x_j)|` over pairs within either set.
    pub fn min_separation(&self) -> f64 {
        let mut min = f64::INFINITY;
        for set in [&self.lambdas, &self.nus] {
            for i in 0..set.len() {
                for j in i + 1..set.len() {
                    min = min.min(d_fn(&set[i], &set[j]).abs_f64());
                }
            }
        }
        min
    }

    /// Parameters with `λ_alpha` and `ν_k` removed (0-based).
    pub fn without(&self, alpha: usize, k: usize) -> Self {
        let mut lambdas = self.lambdas.clone();
        lambdas.remove(alpha);
        let mut nus = self.nus.clone();
        nus.remove(k);
        Self {
            lambdas,
            nus,
            eta: self.eta.clone(),
            prec: self.prec,
        }
    }
}

/// `ω`, `ω̃`, `ρ`, `ρ̃` at one point.
#[derive(Clone, Debug)]
pub struct OmegaFamily {
    pub omega: Scalar,
    pub omega_tilde: Scalar,
    pub rho: Scalar,
    pub rho_tilde: Scalar,
}

pub fn omega_family(eps: &Scalar, p: &HomParams) -> Result<OmegaFamily> {
    let prec = p.precision();
    let two_eta = p.eta.mul_int(2);
    let (a, b, c) = (p.a(), p.b(), p.c());
    let s = eps.sin();
    let s_minus = (eps - &two_eta).sin();
    let s_plus = (eps + &two_eta).sin();
    let den_rho = (eps + &p.lambda - &p.eta).sin();
    let den_rho_t = (eps + &p.lambda + &p.eta).sin();
    for (x, what) in [
        (&s_minus, "omega (sin(eps - 2 eta) pole)"),
        (&s_plus, "omega-tilde (sin(eps + 2 eta) pole)"),
        (&den_rho, "rho (sin(eps + lambda - eta) pole)"),
        (&den_rho_t, "rho-tilde (sin(eps + lambda + eta) pole)"),
    ] {
        ensure_nonzero(x, prec, what)?;
    }
    Ok(OmegaFamily {
        omega: &a / &b * &s / &s_minus,
        omega_tilde: &b / &a * &s / &s_plus,
        rho: &b / &c * &s_minus / den_rho,
        rho_tilde: &a / &c * &s_plus / den_rho_t,
    })
}

/// `γ(ξ) = [a(λ)/b(λ)] · [b(λ+ξ)/a(λ+ξ)]`.
pub fn gamma(xi: &Scalar, p: &HomParams) -> Result<Scalar> {
    let shifted = &p.lambda + xi;
    let a_shift = p.a_at(&shifted);
    ensure_nonzero(&a_shift, p.precision(), "gamma (a(lambda + xi) pole)")?;
    Ok(p.a() / p.b() * p.b_at(&shifted) / a_shift)
}

/// `z̃ = b² z / ((a² + b² − c²) z − a²)`.
pub fn z_tilde(z: &Scalar, p: &HomParams) -> Result<Scalar> {
    let (a2, b2, c2) = (p.a().powu(2), p.b().powu(2), p.c().powu(2));
    let den = (&a2 + &b2 - c2) * z - a2;
    ensure_nonzero(&den, p.precision(), "z-tilde")?;
    Ok(b2 * z / den)
}

/// Jets in the variable `var` of a ring with the given orders.
pub mod jets {
    use super::*;

    fn sin_shift(center: &Scalar, var: usize, orders: &[usize]) -> MultiSeries {
        MultiSeries::sine_jet(center, var, orders)
    }

    /// `ω(ε)` as a series in `ε = x_var`.
    pub fn omega(p: &HomParams, var: usize, orders: &[usize]) -> Result<MultiSeries> {
        let zero = p.precision().zero();
        let num = sin_shift(&zero, var, orders);
        let den = sin_shift(&-p.eta.mul_int(2), var, orders);
        Ok(num.try_div(&den)?.scale(&(p.a() / p.b())))
    }

    pub fn omega_tilde(p: &HomParams, var: usize, orders: &[usize]) -> Result<MultiSeries> {
        let zero = p.precision().zero();
        let num = sin_shift(&zero, var, orders);
        let den = sin_shift(&p.eta.mul_int(2), var, orders);
        Ok(num.try_div(&den)?.scale(&(p.b() / p.a())))
    }

    pub fn rho(p: &HomParams, var: usize, orders: &[usize]) -> Result<MultiSeries> {
        let num = sin_shift(&-p.eta.mul_int(2), var, orders);
        let den = sin_shift(&(&p.lambda - &p.eta), var, orders);
        Ok(num.try_div(&den)?.scale(&(p.b() / p.c())))
    }

    pub fn rho_tilde(p: &HomParams, var: usize, orders: &[usize]) -> Result<MultiSeries> {
        let num = sin_shift(&p.eta.mul_int(2), var, orders);
        let den = sin_shift(&(&p.lambda + &p.eta), var, orders);
        Ok(num.try_div(&den)?.scale(&(p.a() / p.c())))
    }

    /// Univariate coefficient list of `ω(ε)` up to `order`.
    pub fn omega_coeffs(p: &HomParams, order: usize) -> Result<Vec<Scalar>> {
        Ok(omega(p, 0, &[order])?.coeffs().to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn prec() -> Precision {
        Precision::new(128)
    }

    #[test]
    fn ice_and_free_fermion_weights() {
        let p = prec();
        let ice = HomParams::ice_point(p);
        let s3 = p.int(3).sqrt() / p.int(2);
        for w in [ice.a(), ice.b(), ice.c()] {
            assert!(w.rel_dev(&s3) < 1e-120);
        }
        let ff = HomParams::free_fermion_point(p);
        let s2 = p.int(2).sqrt() / p.int(2);
        assert!(ff.a().rel_dev(&s2) < 1e-120);
        assert!(ff.b().rel_dev(&s2) < 1e-120);
        assert!(ff.c().rel_dev(&p.one()) < 1e-120);
        assert!(ice.phi().rel_dev(&(p.int(2) / p.int(3).sqrt())) < 1e-120);
        assert!(ff.phi().rel_dev(&p.int(2)) < 1e-120);
    }

    #[test]
    fn weights_depend_on_difference_only() {
        let p = prec();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let (l, n, e) = (p.real(rng.gen()), p.real(rng.gen()), p.real(rng.gen()));
            let (a1, b1, c1) = weights(&l, &n, &e);
            let (a2, b2, c2) = weights(&(&l - &n), &p.zero(), &e);
            assert!(a1.abs_dev(&a2) < 1e-120 && b1.abs_dev(&b2) < 1e-120 && c1.abs_dev(&c2) < 1e-120);
        }
    }

    #[test]
    fn phi_pole_is_reported() {
        let p = prec();
        let eta = p.pi() / p.int(7);
        assert!(matches!(
            phi(&eta, &p.zero(), &eta, p),
            Err(Error::Singularity { .. })
        ));
    }

    #[test]
    fn aux_function_values() {
        let p = prec();
        let eta = p.pi() / p.int(6);
        let x = p.real(0.4);
        assert!(aux_function(AuxFn::D, &x, &x, &eta, p).unwrap().is_zero());
        let e = aux_function(AuxFn::E, &x, &x, &eta, p).unwrap();
        assert!(e.rel_dev(&eta.mul_int(2).sin()) < 1e-120);
        let f = aux_function(AuxFn::F, &p.zero(), &eta.mul_int(2), &eta, p).unwrap();
        assert!(f.rel_dev(&p.one()) < 1e-120);
        assert!(aux_function(AuxFn::F, &x, &x, &eta, p).is_err());
        assert!(aux_function(AuxFn::GR, &x, &x, &eta, p).is_err());
    }

    #[test]
    fn omega_family_at_zero() {
        let p = prec();
        let ice = HomParams::ice_point(p);
        let fam = ice.omega_family(&p.zero()).unwrap();
        assert!(fam.omega.is_zero());
        assert!(fam.rho.rel_dev(&-p.one()) < 1e-120);
        assert!(fam.rho_tilde.rel_dev(&p.one()) < 1e-120);
    }

    #[test]
    fn gamma_values() {
        let p = prec();
        let ice = HomParams::ice_point(p);
        assert!(gamma(&p.zero(), &ice).unwrap().rel_dev(&p.one()) < 1e-120);
        let g = gamma(&(p.pi() / p.int(6)), &ice).unwrap();
        assert!(g.rel_dev(&p.int(2)) < 1e-120);
    }

    #[test]
    fn z_tilde_values() {
        let p = prec();
        let ice = HomParams::ice_point(p);
        assert!(z_tilde(&p.int(2), &ice).unwrap().rel_dev(&p.int(2)) < 1e-120);
        let ff = HomParams::free_fermion_point(p);
        let z = p.real(0.3);
        assert!(z_tilde(&z, &ff).unwrap().rel_dev(&-z) < 1e-120);
    }

    #[test]
    fn regime_labels() {
        let p = prec();
        assert_eq!(HomParams::ice_point(p).regime_info().regime, Regime::Disordered);
        let ferro = HomParams::new(p, p.complex(0.0, 1.3), p.complex(0.0, 0.4)).unwrap();
        assert_eq!(ferro.regime_info().regime, Regime::Ferroelectric);
        let half_pi = p.pi() / p.int(2);
        let anti = HomParams::new(p, &half_pi + &p.complex(0.0, 0.3), &half_pi + &p.complex(0.0, 0.5)).unwrap();
        assert_eq!(anti.regime_info().regime, Regime::Antiferroelectric);
        let boundary = HomParams::new(p, p.real(0.7), p.pi()).err();
        // c = sin 2π vanishes: not a valid parameter set
        assert!(boundary.is_some());
    }

    fn random_disordered(rng: &mut ChaCha8Rng, p: Precision) -> HomParams {
        let eta: f64 = rng.gen_range(0.1..1.4);
        let lambda: f64 = rng.gen_range(eta + 0.05..std::f64::consts::PI - eta - 0.05);
        HomParams::new(p, p.real(lambda), p.real(eta)).unwrap()
    }

    #[test]
    fn delta_is_cos_two_eta() {
        let p = prec();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let h = random_disordered(&mut rng, p);
            let info = h.regime_info();
            assert!(info.delta.rel_dev(&h.eta.mul_int(2).cos()) < 1e-100);
            assert_eq!(info.regime, Regime::Disordered);
            assert!(h.a().re_f64() > 0.0 && h.b().re_f64() > 0.0 && h.c().re_f64() > 0.0);
            assert!(h.is_disordered_real());
        }
    }

    #[test]
    fn omega_relations() {
        let p = prec();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let h = random_disordered(&mut rng, p);
            let eps = p.real(rng.gen_range(-0.3..0.3));
            let f = h.omega_family(&eps).unwrap();
            assert!((&f.rho * (&f.omega - p.one())).rel_dev(&p.one()) < 1e-100);
            assert!((&f.rho_tilde * (p.one() - &f.omega_tilde)).rel_dev(&p.one()) < 1e-100);
            assert!(z_tilde(&f.omega, &h).unwrap().rel_dev(&f.omega_tilde) < 1e-100);
            let xi = p.real(rng.gen_range(-0.3..0.3));
            let shifted = -&h.lambda + &h.eta - &xi;
            let via_omega = h.omega_family(&shifted).unwrap().omega;
            assert!(gamma(&xi, &h).unwrap().rel_dev(&via_omega) < 1e-100);
        }
    }

    #[test]
    fn pair_factor_identity() {
        let p = prec();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let h = random_disordered(&mut rng, p);
            let e1 = p.real(rng.gen_range(-0.2..0.2));
            let e2 = p.real(rng.gen_range(-0.2..0.2));
            let lhs = (&e1 + &h.lambda + &h.eta).sin() * (&e2 + &h.lambda - &h.eta).sin()
                / (&e1 - &e2 + h.eta.mul_int(2)).sin();
            let f1 = h.omega_family(&e1).unwrap();
            let f2 = h.omega_family(&e2).unwrap();
            let rhs = (h.phi() * &f1.rho_tilde * &f2.rho * (&f1.omega_tilde * &f2.omega - p.one())).recip();
            assert!(lhs.rel_dev(&rhs) < 1e-100);
        }
    }

    #[test]
    fn jets_match_pointwise_values() {
        let p = prec();
        let h = HomParams::ice_point(p);
        let x = p.real(0.01);
        let f = h.omega_family(&x).unwrap();
        let orders = [60];
        for (jet, val) in [
            (jets::omega(&h, 0, &orders).unwrap(), &f.omega),
            (jets::omega_tilde(&h, 0, &orders).unwrap(), &f.omega_tilde),
            (jets::rho(&h, 0, &orders).unwrap(), &f.rho),
            (jets::rho_tilde(&h, 0, &orders).unwrap(), &f.rho_tilde),
        ] {
            assert!(jet.evaluate(std::slice::from_ref(&x)).rel_dev(val) < 1e-90);
        }
    }

    #[test]
    fn phi_taylor_matches_derivatives() {
        let p = prec();
        let ice = HomParams::ice_point(p);
        let d = ice.phi_derivatives(4).unwrap();
        assert!(d[0].rel_dev(&ice.phi()) < 1e-120);
        assert!(d[1].abs_f64() < 1e-120);
        assert!(d[3].abs_f64() < 1e-115);
    }
}
