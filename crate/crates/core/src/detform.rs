//! Determinant formulas for the partition function and the identities of
//! its recurrence in the lattice size.

use crate::error::{Error, Result};
use crate::model::{d_fn, e_fn, ensure_nonzero, f_fn, HomParams, InhomParams};
use crate::numerics::{product_or, Precision, Scalar, ScalarMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IkMethod {
    Inhomogeneous,
    Homogeneous,
}

#[derive(Clone, Debug)]
pub struct IkResult {
    pub value: Scalar,
    pub matrix_dim: usize,
    pub method: IkMethod,
    /// Conditioning notes: digits lost to cancellation, near-coincident
    /// parameters.
    pub warnings: Vec<String>,
}

/// Separation below which parameters count as nearly coincident.
pub const NEAR_COINCIDENT: f64 = 1e-10;

fn conditioning_warning(m: &ScalarMatrix, det: &Scalar, prec: Precision) -> Option<String> {
    let lost = m.hadamard_digits_lost(det);
    // Hadamard-bound estimate; flag once an eighth of the working digits is gone
    if lost > prec.digits() as f64 / 8.0 {
        Some(format!(
            "determinant cancellation: about {lost:.0} of {} digits lost",
            prec.digits()
        ))
    } else {
        None
    }
}

/// `𝓜_{αk} = φ(λ_α, ν_k)`.
pub fn phi_matrix(p: &InhomParams) -> Result<ScalarMatrix> {
    let n = p.n();
    ScalarMatrix::try_from_fn(n, n, |al, k| p.phi(al, k))
}

/// Vandermonde-type denominator `Π_{α<β} d(λ_β,λ_α) Π_{j<k} d(ν_j,ν_k)`.
fn ik_denominator(p: &InhomParams) -> Scalar {
    let n = p.n();
    let mut den = p.precision().one();
    for al in 0..n {
        for be in al + 1..n {
            den *= d_fn(&p.lambdas[be], &p.lambdas[al]);
            den *= d_fn(&p.nus[al], &p.nus[be]);
        }
    }
    den
}

fn ik_numerator(p: &InhomParams) -> Scalar {
    let n = p.n();
    let mut num = p.precision().one();
    for al in 0..n {
        for k in 0..n {
            num *= p.a(al, k) * p.b(al, k);
        }
    }
    num
}

/// Inhomogeneous determinant formula.
pub fn z_ik_inhom(p: &InhomParams) -> Result<IkResult> {
    p.check_distinct()?;
    let m = phi_matrix(p)?;
    let det = m.determinant()?;
    // pairwise distinctness was checked above; the product itself may be
    // far below the threshold near the homogeneous limit
    let den = ik_denominator(p);
    let mut warnings = Vec::new();
    let sep = p.min_separation();
    if sep < NEAR_COINCIDENT {
        warnings.push(format!(
            "near-coincident spectral parameters: minimum separation {sep:.3e}"
        ));
    }
    warnings.extend(conditioning_warning(&m, &det, p.precision()));
    Ok(IkResult {
        value: ik_numerator(p) / den * det,
        matrix_dim: p.n(),
        method: IkMethod::Inhomogeneous,
        warnings,
    })
}

/// `𝓝_{αk} = ∂^{α+k}φ(λ)` (0-based), the homogeneous moment matrix.
pub fn derivative_matrix(p: &HomParams, n: usize) -> Result<ScalarMatrix> {
    let derivs = p.phi_derivatives(2 * n - 2)?;
    Ok(ScalarMatrix::from_fn(n, n, |i, j| derivs[i + j].clone()))
}

/// Homogeneous limit of the determinant formula.
pub fn z_hom(p: &HomParams, n: usize) -> Result<IkResult> {
    if n == 0 {
        return Err(Error::InvalidParams("lattice size must be at least 1".into()));
    }
    let prec = p.precision();
    let m = derivative_matrix(p, n)?;
    let det = m.determinant()?;
    let ab = p.a() * p.b();
    let mut den = prec.one();
    for k in 1..n as u32 {
        den *= prec.factorial(k).powu(2);
    }
    let mut warnings = Vec::new();
    warnings.extend(conditioning_warning(&m, &det, prec));
    Ok(IkResult {
        value: ab.powu((n * n) as u32) / den * det,
        matrix_dim: n,
        method: IkMethod::Homogeneous,
        warnings,
    })
}

/// Right-hand side of the recurrence in `N`, with the smaller partition
/// functions evaluated by the determinant formula.
pub fn rec_z_rhs(p: &InhomParams) -> Result<Scalar> {
    let n = p.n();
    if n == 1 {
        return Ok(p.c());
    }
    let prec = p.precision();
    let mut total = prec.zero();
    for al in 0..n {
        let la = &p.lambdas[al];
        let mut coef = p.c();
        for be in 0..n {
            if be != al {
                coef *= p.b(be, 0);
                coef *= f_fn(la, &p.lambdas[be], &p.eta, prec)?;
            }
        }
        for k in 1..n {
            coef *= p.a(al, k);
        }
        total += coef * z_ik_inhom(&p.without(al, 0))?.value;
    }
    Ok(total)
}

/// `g(λ) = Π_α e(λ_α, λ) / Π_k b(λ, ν_k)`.
pub fn g_n(lambda: &Scalar, p: &InhomParams) -> Result<Scalar> {
    let prec = p.precision();
    let num = product_or(&prec.one(), p.lambdas.iter().map(|l| e_fn(l, lambda, &p.eta)));
    let den = product_or(&prec.one(), p.nus.iter().map(|nu| (lambda - nu - &p.eta).sin()));
    ensure_nonzero(&den, prec, "g (b-weight pole)")?;
    Ok(num / den)
}

/// `g(λ_α)` as a sum over its poles `λ = ν_k + η`.
pub fn g_n_pole_sum(alpha: usize, p: &InhomParams) -> Result<Scalar> {
    let n = p.n();
    let prec = p.precision();
    let mut total = prec.zero();
    for k in 0..n {
        let mut term = p.phi(alpha, k)?;
        for be in 0..n {
            term *= p.a(be, k);
        }
        for j in 0..n {
            if j != k {
                term /= d_fn(&p.nus[k], &p.nus[j]);
            }
        }
        total += term;
    }
    Ok(total)
}

/// Cofactor expansion of `det 𝓜` weighted by `g(λ_α)` along the first
/// column.
pub fn det_reduction_rhs(p: &InhomParams) -> Result<Scalar> {
    let n = p.n();
    let prec = p.precision();
    let m = phi_matrix(p)?;
    let mut sum = prec.zero();
    for al in 0..n {
        let minor = match m.minor(&[al], &[0]) {
            Some(sub) => sub.determinant()?,
            None => prec.one(),
        };
        let term = g_n(&p.lambdas[al], p)? * minor;
        if al % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let num = product_or(&prec.one(), (1..n).map(|k| d_fn(&p.nus[0], &p.nus[k])));
    let den = product_or(&prec.one(), (0..n).map(|al| p.a(al, 0)));
    ensure_nonzero(&den, prec, "a-weight product")?;
    Ok(num / den * sum)
}

/// Routes to the homogeneous partition function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZMethod {
    DetHom,
    Ortho,
    Oracle,
    Qism,
}

impl ZMethod {
    pub const ALL: [ZMethod; 4] = [ZMethod::DetHom, ZMethod::Ortho, ZMethod::Oracle, ZMethod::Qism];

    pub fn tag(self) -> &'static str {
        match self {
            ZMethod::DetHom => "det-hom",
            ZMethod::Ortho => "ortho",
            ZMethod::Oracle => "oracle",
            ZMethod::Qism => "qism",
        }
    }

    pub fn parse(tag: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|m| m.tag() == tag).ok_or_else(|| Error::Parse {
            input: tag.into(),
            reason: "unknown partition-function method".into(),
        })
    }

    pub fn check(self, n: usize) -> Result<()> {
        let max = match self {
            ZMethod::DetHom | ZMethod::Ortho => usize::MAX,
            ZMethod::Oracle => crate::oracle::MAX_N,
            ZMethod::Qism => crate::qism::MAX_SITES,
        };
        if n == 0 {
            return Err(Error::InvalidParams("lattice size must be at least 1".into()));
        }
        if n > max {
            return Err(Error::SizeCap { what: "N", got: n, max });
        }
        Ok(())
    }
}

/// `Z_N(λ, …, λ)` by the chosen route, with conditioning notes.
pub fn z_hom_by(method: ZMethod, p: &HomParams, n: usize) -> Result<(Scalar, Vec<String>)> {
    method.check(n)?;
    Ok(match method {
        ZMethod::DetHom => {
            let res = z_hom(p, n)?;
            (res.value, res.warnings)
        }
        ZMethod::Ortho => (crate::orthopoly::z_from_norms(p, n)?, Vec::new()),
        ZMethod::Oracle => (crate::oracle::brute_z(&InhomParams::homogeneous(p, n))?, Vec::new()),
        ZMethod::Qism => (crate::qism::z_qism(&InhomParams::homogeneous(p, n))?, Vec::new()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::qism;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn prec() -> Precision {
        Precision::new(128)
    }

    fn random_params(rng: &mut ChaCha8Rng, p: Precision, n: usize) -> InhomParams {
        let eta: f64 = rng.gen_range(0.2..0.6);
        let lambdas: Vec<f64> = (0..n).map(|_| rng.gen_range(1.2..1.9)).collect();
        let nus: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.2..0.2)).collect();
        InhomParams::from_f64(p, &lambdas, &nus, eta).unwrap()
    }

    #[test]
    fn agrees_with_enumeration() {
        let p = prec();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=5 {
            let params = random_params(&mut rng, p, n);
            let ik = z_ik_inhom(&params).unwrap();
            let z = oracle::brute_z(&params).unwrap();
            assert!(ik.value.rel_dev(&z) < 1e-100, "N = {n}");
            assert!(ik.value.is_physically_real(p));
        }
        let params = random_params(&mut rng, p, 6);
        let ik = z_ik_inhom(&params).unwrap().value;
        assert!(ik.rel_dev(&qism::z_qism(&params).unwrap()) < 1e-90);
    }

    #[test]
    fn coincident_parameters_are_refused() {
        let p = prec();
        let params = InhomParams::homogeneous(&HomParams::ice_point(p), 3);
        assert!(matches!(z_ik_inhom(&params), Err(Error::CoincidentParameters { .. })));
    }

    #[test]
    fn homogeneous_counts() {
        let p = prec();
        let ice = HomParams::ice_point(p);
        let w = p.int(3).sqrt() / p.int(2);
        for (n, count) in [(1usize, 1i64), (2, 2), (3, 7), (4, 42), (5, 429)] {
            let z = z_hom(&ice, n).unwrap().value;
            let ratio = z / w.powu((n * n) as u32);
            assert!(ratio.rel_dev(&p.int(count)) < 1e-100, "N = {n}");
        }
        let ff = HomParams::free_fermion_point(p);
        for n in 1..=6 {
            assert!(z_hom(&ff, n).unwrap().value.rel_dev(&p.one()) < 1e-100);
        }
        assert!(z_hom(&ice, 2).unwrap().value.rel_dev(&p.ratio(9, 8)) < 1e-120);
    }

    #[test]
    fn recurrence_and_pole_sum() {
        let p = prec();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for n in 3..=5 {
            let params = random_params(&mut rng, p, n);
            let z = z_ik_inhom(&params).unwrap().value;
            assert!(rec_z_rhs(&params).unwrap().rel_dev(&z) < 1e-90);
            for al in 0..n {
                let g = g_n(&params.lambdas[al], &params).unwrap();
                assert!(g_n_pole_sum(al, &params).unwrap().rel_dev(&g) < 1e-90);
            }
            let det = phi_matrix(&params).unwrap().determinant().unwrap();
            assert!(det_reduction_rhs(&params).unwrap().rel_dev(&det) < 1e-90);
        }
    }

    #[test]
    fn homogeneous_limit() {
        let p = Precision::new(200);
        let ice = HomParams::ice_point(p);
        let delta = p.epsilon_with_offset(180);
        let delta = p.from_float(&delta);
        for n in 2..=5 {
            let mut params = InhomParams::homogeneous(&ice, n);
            for i in 0..n {
                params.lambdas[i] = &ice.lambda + &delta.mul_int(i as i64 + 1);
                params.nus[i] = delta.mul_int(i as i64 + 1);
            }
            let ik = z_ik_inhom(&params).unwrap();
            assert!(!ik.warnings.is_empty());
            assert!(ik.value.rel_dev(&z_hom(&ice, n).unwrap().value) < 1e-15);
        }
    }
}
