//! Emptiness formation probability `F_N^{(r,s)}` from determinant formulas:
//! the inhomogeneous multiple sum, its `s = 2, 3` special cases, the
//! homogeneous derivative determinant and the recurrence in `N`.

use std::fmt;
use std::str::FromStr;

use crate::detform::{derivative_matrix, phi_matrix, z_ik_inhom};
use crate::error::{Error, Result};
use crate::model::{d_fn, e_fn, ensure_nonsingular, ensure_nonzero, f_fn, HomParams, InhomParams};
use crate::numerics::combin::{combinations, permutations_with_sign};
use crate::numerics::{product_or, MultiSeries, Scalar, ScalarMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    SumInhom,
    DetHom,
    Ortho,
    Mir1,
    Mir2,
    Mir3,
    Oracle,
    Qism,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::SumInhom,
        Method::DetHom,
        Method::Ortho,
        Method::Mir1,
        Method::Mir2,
        Method::Mir3,
        Method::Oracle,
        Method::Qism,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Method::SumInhom => "sum-inhom",
            Method::DetHom => "det-hom",
            Method::Ortho => "ortho",
            Method::Mir1 => "mir1",
            Method::Mir2 => "mir2",
            Method::Mir3 => "mir3",
            Method::Oracle => "oracle",
            Method::Qism => "qism",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| Error::Parse {
                input: s.to_string(),
                reason: "unknown method tag".into(),
            })
    }
}

#[derive(Clone, Debug)]
pub struct EfpValue {
    pub value: Scalar,
    pub n: usize,
    pub r: usize,
    pub s: usize,
    pub method: Method,
}

pub fn check_indices(n: usize, r: usize, s: usize) -> Result<()> {
    if n == 0 || r == 0 || r > n || s == 0 || s > n {
        return Err(Error::IndexOutOfRange(format!(
            "need 1 <= r, s <= N = {n}, got r = {r}, s = {s}"
        )));
    }
    Ok(())
}

/// `g_r(λ) = Π_{α>r} d(λ_α,λ) Π_{α≤r} e(λ_α,λ) / Π_k b(λ,ν_k)`.
pub fn g_r_fn(lambda: &Scalar, p: &InhomParams, r: usize) -> Result<Scalar> {
    let prec = p.precision();
    let mut num = prec.one();
    for (i, l) in p.lambdas.iter().enumerate() {
        num *= if i < r { e_fn(l, lambda, &p.eta) } else { d_fn(l, lambda) };
    }
    let den = product_or(&prec.one(), p.nus.iter().map(|nu| (lambda - nu - &p.eta).sin()));
    ensure_nonzero(&den, prec, "g_r (b-weight pole)")?;
    Ok(num / den)
}

/// `(1/det 𝓜) Π_{j≤s} Π_{k>j} d(ν_j,ν_k) / (Π_{β≤r} a(λ_β,ν_j) Π_{β>r} b(λ_β,ν_j))`.
fn inhom_prefactor(p: &InhomParams, r: usize, s: usize, m: &ScalarMatrix, det_m: &Scalar) -> Result<Scalar> {
    let prec = p.precision();
    let n = p.n();
    ensure_nonsingular(m, det_m, prec, "emptiness prefactor (det M)")?;
    let mut num = prec.one();
    let mut den = det_m.clone();
    for j in 0..s {
        for k in j + 1..n {
            num *= d_fn(&p.nus[j], &p.nus[k]);
        }
        for be in 0..n {
            let w = if be < r { p.a(be, j) } else { p.b(be, j) };
            ensure_nonzero(&w, prec, "emptiness prefactor (weight)")?;
            den *= w;
        }
    }
    Ok(num / den)
}

fn minor_det(m: &ScalarMatrix, rows: &[usize], s: usize) -> Result<Scalar> {
    let cols: Vec<usize> = (0..s).collect();
    match m.minor(rows, &cols) {
        Some(sub) => sub.determinant(),
        None => Ok(m.get(0, 0).one_like()),
    }
}

/// The multiple-sum formula for `F_N^{(r,s)}` at distinct parameters.
pub fn efp_inhom(p: &InhomParams, r: usize, s: usize) -> Result<Scalar> {
    let n = p.n();
    check_indices(n, r, s)?;
    let prec = p.precision();
    if s > r {
        return Ok(prec.zero());
    }
    p.check_distinct()?;
    let m = phi_matrix(p)?;
    let det_m = m.determinant()?;
    let g: Vec<Scalar> = (0..r).map(|al| g_r_fn(&p.lambdas[al], p, r)).collect::<Result<_>>()?;
    let mut total = prec.zero();
    let mut tuple = Vec::with_capacity(s);
    sum_tuples(p, &m, &g, r, s, &mut tuple, &mut total)?;
    Ok(total * inhom_prefactor(p, r, s, &m, &det_m)?)
}

fn sum_tuples(
    p: &InhomParams,
    m: &ScalarMatrix,
    g: &[Scalar],
    r: usize,
    s: usize,
    tuple: &mut Vec<usize>,
    total: &mut Scalar,
) -> Result<()> {
    if tuple.len() == s {
        *total += tuple_term(p, m, g, s, tuple)?;
        return Ok(());
    }
    for al in 0..r {
        if !tuple.contains(&al) {
            tuple.push(al);
            sum_tuples(p, m, g, r, s, tuple, total)?;
            tuple.pop();
        }
    }
    Ok(())
}

fn tuple_term(p: &InhomParams, m: &ScalarMatrix, g: &[Scalar], s: usize, tuple: &[usize]) -> Result<Scalar> {
    let prec = p.precision();
    // 1-based indices in the sign
    let mut exponent = s + tuple.iter().map(|a| a + 1).sum::<usize>();
    let mut term = prec.one();
    for j in 0..s {
        term *= &g[tuple[j]];
        for k in j + 1..s {
            if tuple[k] > tuple[j] {
                exponent += 1;
            }
            let e = e_fn(&p.lambdas[tuple[j]], &p.lambdas[tuple[k]], &p.eta);
            ensure_nonzero(&e, prec, "e-factor")?;
            term *= p.a(tuple[j], k) * p.b(tuple[k], j) / e;
        }
    }
    let mut rows = tuple.to_vec();
    rows.sort_unstable();
    term *= minor_det(m, &rows, s)?;
    Ok(if exponent % 2 == 0 { term } else { -term })
}

fn chi(beta: usize, alpha: usize) -> usize {
    usize::from(beta > alpha)
}

/// The `s = 2` formula written out.
pub fn efp_inhom_s2(p: &InhomParams, r: usize) -> Result<Scalar> {
    let n = p.n();
    check_indices(n, r, 2)?;
    let prec = p.precision();
    if r < 2 {
        return Ok(prec.zero());
    }
    p.check_distinct()?;
    let m = phi_matrix(p)?;
    let det_m = m.determinant()?;
    let mut sum = prec.zero();
    for al in 1..=r {
        for be in 1..=r {
            if be == al {
                continue;
            }
            let (la, lb) = (&p.lambdas[al - 1], &p.lambdas[be - 1]);
            let mut t = p.a(al - 1, 1) * p.b(be - 1, 0) / e_fn(la, lb, &p.eta);
            t *= g_r_fn(la, p, r)? * g_r_fn(lb, p, r)?;
            let mut rows = vec![al - 1, be - 1];
            rows.sort_unstable();
            t *= minor_det(&m, &rows, 2)?;
            if (al + be + chi(be, al)) % 2 == 0 {
                sum += t;
            } else {
                sum -= t;
            }
        }
    }
    let mut pref = prec.one();
    for k in 1..n {
        pref *= d_fn(&p.nus[0], &p.nus[k]);
    }
    for k in 2..n {
        pref *= d_fn(&p.nus[1], &p.nus[k]);
    }
    let mut den = det_m;
    for be in 0..n {
        den *= if be < r {
            p.a(be, 0) * p.a(be, 1)
        } else {
            p.b(be, 0) * p.b(be, 1)
        };
    }
    Ok(pref / den * sum)
}

/// The `s = 3` formula written out.
pub fn efp_inhom_s3(p: &InhomParams, r: usize) -> Result<Scalar> {
    let n = p.n();
    check_indices(n, r, 3)?;
    let prec = p.precision();
    if r < 3 {
        return Ok(prec.zero());
    }
    p.check_distinct()?;
    let m = phi_matrix(p)?;
    let det_m = m.determinant()?;
    let gr: Vec<Scalar> = (0..r).map(|i| g_r_fn(&p.lambdas[i], p, r)).collect::<Result<_>>()?;
    let e = |x: usize, y: usize| e_fn(&p.lambdas[x - 1], &p.lambdas[y - 1], &p.eta);
    let mut sum = prec.zero();
    for al in 1..=r {
        for be in 1..=r {
            for ga in 1..=r {
                if be == al || ga == al || ga == be {
                    continue;
                }
                let sign = al + be + ga + 1 + chi(ga, al) + chi(ga, be) + chi(be, al);
                let mut t = &gr[al - 1] * &gr[be - 1] * &gr[ga - 1];
                t *= p.a(al - 1, 1) * p.a(al - 1, 2) * p.a(be - 1, 2);
                t *= p.b(be - 1, 0) * p.b(ga - 1, 0) * p.b(ga - 1, 1);
                t /= e(al, be) * e(al, ga) * e(be, ga);
                let mut rows = vec![al - 1, be - 1, ga - 1];
                rows.sort_unstable();
                t *= minor_det(&m, &rows, 3)?;
                if sign % 2 == 0 {
                    sum += t;
                } else {
                    sum -= t;
                }
            }
        }
    }
    let mut pref = prec.one();
    let mut den = det_m;
    for j in 0..3 {
        for k in j + 1..n {
            pref *= d_fn(&p.nus[j], &p.nus[k]);
        }
        for be in 0..n {
            den *= if be < r { p.a(be, j) } else { p.b(be, j) };
        }
    }
    Ok(pref / den * sum)
}

/// `F̃ = Z·F` from the determinant formulas; `s = 0` gives `Z`.
pub fn efp_inhom_unnormalized(p: &InhomParams, r: usize, s: usize) -> Result<Scalar> {
    let z = z_ik_inhom(p)?.value;
    if s == 0 {
        return Ok(z);
    }
    if s > r {
        return Ok(p.precision().zero());
    }
    Ok(efp_inhom(p, r, s)? * z)
}

/// Right-hand side of the recurrence for `F̃_N^{(r,s)}`.
pub fn rec_efp_rhs(p: &InhomParams, r: usize, s: usize) -> Result<Scalar> {
    let n = p.n();
    check_indices(n, r, s)?;
    if n == 1 {
        return Ok(p.c());
    }
    let prec = p.precision();
    let mut outer = p.c();
    for be in r..n {
        outer *= p.a(be, 0);
    }
    let mut total = prec.zero();
    for al in 0..r {
        let la = &p.lambdas[al];
        let mut coef = prec.one();
        for be in 0..r {
            if be != al {
                coef *= p.b(be, 0) * f_fn(la, &p.lambdas[be], &p.eta, prec)?;
            }
        }
        for k in 1..n {
            coef *= p.a(al, k);
        }
        total += coef * efp_inhom_unnormalized(&p.without(al, 0), r - 1, s - 1)?;
    }
    Ok(outer * total)
}

/// Default cap on `s` for the homogeneous evaluators.
pub const S_CAP: usize = 3;
/// Default cap on `N` for the homogeneous evaluators.
pub const N_CAP: usize = 10;

/// The product `G(ε₁..ε_s)` multiplying the derivative operators in the
/// homogeneous formula, as a series with per-variable order `order`.
pub fn hom_generating_product(p: &HomParams, n: usize, r: usize, s: usize, order: usize) -> Result<MultiSeries> {
    let prec = p.precision();
    let orders = vec![order; s];
    let two_eta = p.eta.mul_int(2);
    let mut g = MultiSeries::constant(prec.one(), &orders);
    for j in 0..s {
        let sin_e = MultiSeries::sine_jet(&prec.zero(), j, &orders);
        let sin_m = MultiSeries::sine_jet(&-two_eta.clone(), j, &orders);
        let den = MultiSeries::sine_jet(&(&p.lambda - &p.eta), j, &orders);
        g = &g * &sin_e.powu((n - r) as u32);
        g = &g * &sin_m.powu(r as u32);
        g = g.try_div(&den.powu(n as u32))?;
    }
    for j in 0..s {
        for k in j + 1..s {
            let up = MultiSeries::sine_jet(&(&p.lambda + &p.eta), j, &orders);
            let down = MultiSeries::sine_jet(&(&p.lambda - &p.eta), k, &orders);
            let diff = &MultiSeries::variable(prec, &orders, j) - &MultiSeries::variable(prec, &orders, k);
            let den = diff.add_constant(&two_eta).sin();
            g = (&g * &(&up * &down)).try_div(&den)?;
        }
    }
    Ok(g)
}

/// Homogeneous derivative-determinant formula for `F_N^{(r,s)}`.
pub fn efp_hom(p: &HomParams, n: usize, r: usize, s: usize) -> Result<Scalar> {
    efp_hom_capped(p, n, r, s, S_CAP, N_CAP)
}

pub fn efp_hom_capped(p: &HomParams, n: usize, r: usize, s: usize, s_cap: usize, n_cap: usize) -> Result<Scalar> {
    check_indices(n, r, s)?;
    let prec = p.precision();
    if s > r {
        return Ok(prec.zero());
    }
    if s > s_cap {
        return Err(Error::SizeCap {
            what: "s for the homogeneous determinant",
            got: s,
            max: s_cap,
        });
    }
    if n > n_cap {
        return Err(Error::SizeCap {
            what: "N for the homogeneous determinant",
            got: n,
            max: n_cap,
        });
    }
    let derivs = p.phi_derivatives(2 * n)?;
    let g = hom_generating_product(p, n, r, s, n - 1)?;
    let numeric_cols = n - s;
    let perms = permutations_with_sign(s);
    let mut factorials = vec![prec.one()];
    for k in 1..n {
        let next = factorials[k - 1].mul_int(k as i64);
        factorials.push(next);
    }
    // operator columns sit at positions n-s..n-1
    let col_parity: usize = (numeric_cols..n).sum();
    let mut det = prec.zero();
    for rows in combinations(n, s) {
        let rest: Vec<usize> = (0..n).filter(|i| !rows.contains(i)).collect();
        let numeric = if numeric_cols == 0 {
            prec.one()
        } else {
            ScalarMatrix::from_fn(numeric_cols, numeric_cols, |i, m| derivs[rest[i] + m].clone()).determinant()?
        };
        let mut operator = prec.zero();
        let mut idx = vec![0usize; s];
        for (perm, sign) in &perms {
            let mut weight = prec.one();
            for j in 0..s {
                let row = rows[perm[j]];
                idx[j] = row;
                weight *= &factorials[row];
            }
            let term = weight * g.coeff(&idx);
            if *sign > 0 {
                operator += term;
            } else {
                operator -= term;
            }
        }
        let term = numeric * operator;
        if (rows.iter().sum::<usize>() + col_parity) % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    let deriv = derivative_matrix(p, n)?;
    let det_n = deriv.determinant()?;
    ensure_nonzero(&p.a(), prec, "a-weight")?;
    ensure_nonzero(&p.b(), prec, "b-weight")?;
    ensure_nonsingular(&deriv, &det_n, prec, "homogeneous emptiness prefactor")?;
    let mut pref = prec.one();
    for j in 1..=s {
        pref *= prec.factorial((n - j) as u32);
    }
    let den = p.a().powu((r * s) as u32) * p.b().powu(((n - r) * s) as u32) * det_n;
    let value = pref / den * det;
    Ok(if s % 2 == 0 { value } else { -value })
}

impl Method {
    /// Refuses homogeneous evaluations outside the method's caps before any
    /// work is done.
    pub fn check_homogeneous(self, n: usize, r: usize, s: usize) -> Result<()> {
        check_indices(n, r, s)?;
        let trivial = s == 0 || s > r;
        let cap = |what: &'static str, got: usize, max: usize| {
            if got > max {
                Err(Error::SizeCap { what, got, max })
            } else {
                Ok(())
            }
        };
        match self {
            Method::SumInhom => Err(Error::CoincidentParameters {
                what: "the multiple-sum formula (homogeneous input)",
            }),
            Method::DetHom | Method::Ortho | Method::Mir1 | Method::Mir2 => {
                cap("N", n, N_CAP)?;
                if trivial {
                    Ok(())
                } else {
                    cap("s", s, S_CAP)
                }
            }
            Method::Mir3 => {
                cap("N", n, N_CAP)?;
                if trivial {
                    Ok(())
                } else {
                    cap("s", s, crate::contour::S_CAP_MIR3)
                }
            }
            Method::Oracle => cap("N for enumeration", n, crate::oracle::MAX_N),
            Method::Qism => cap("N for the operator contraction", n, crate::qism::MAX_SITES),
        }
    }
}

/// `F_N^{(r,s)}` at homogeneous parameters by the chosen method.
pub fn efp_hom_by(method: Method, p: &HomParams, n: usize, r: usize, s: usize) -> Result<EfpValue> {
    method.check_homogeneous(n, r, s)?;
    let value = match method {
        Method::SumInhom => unreachable!("refused by check_homogeneous"),
        Method::DetHom => efp_hom(p, n, r, s)?,
        Method::Ortho => crate::orthopoly::efp_ortho(p, n, r, s)?,
        Method::Mir1 => crate::contour::efp_mir1(p, n, r, s)?,
        Method::Mir2 => crate::contour::efp_mir2(p, n, r, s)?,
        Method::Mir3 => crate::contour::efp_mir3(p, n, r, s)?,
        Method::Oracle => crate::oracle::brute_efp(&InhomParams::homogeneous(p, n), r, s)?,
        Method::Qism => crate::qism::efp_qism(&InhomParams::homogeneous(p, n), r, s)?,
    };
    Ok(EfpValue { value, n, r, s, method })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Precision;
    use crate::oracle;
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
    fn method_tags_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.tag().parse::<Method>().unwrap(), m);
        }
        assert!("bogus".parse::<Method>().is_err());
    }

    #[test]
    fn g_r_values() {
        let p = prec();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let params = random_params(&mut rng, p, 3);
        let x = p.real(1.4);
        let full = g_r_fn(&x, &params, 3).unwrap();
        assert!(full.rel_dev(&crate::detform::g_n(&x, &params).unwrap()) < 1e-120);
        assert!(g_r_fn(&params.lambdas[2], &params, 2).unwrap().is_zero());
        let eta = &params.eta;
        let direct = e_fn(&params.lambdas[0], &x, eta) * e_fn(&params.lambdas[1], &x, eta)
            * (&params.lambdas[2] - &x).sin()
            / params.nus.iter().fold(p.one(), |acc, nu| acc * (&x - nu - eta).sin());
        assert!(g_r_fn(&x, &params, 2).unwrap().rel_dev(&direct) < 1e-120);
    }

    #[test]
    fn multiple_sum_matches_enumeration() {
        let p = prec();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for n in 1..=4 {
            let params = random_params(&mut rng, p, n);
            for r in 1..=n {
                for s in 1..=n {
                    let want = oracle::brute_efp(&params, r, s).unwrap();
                    let got = efp_inhom(&params, r, s).unwrap();
                    assert!(got.abs_dev(&want) < 1e-90, "N={n} r={r} s={s}");
                }
            }
        }
    }

    #[test]
    fn special_cases_match_general_sum() {
        let p = prec();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let params = random_params(&mut rng, p, 5);
        for r in 1..=5 {
            let g2 = efp_inhom(&params, r, 2).unwrap();
            assert!(efp_inhom_s2(&params, r).unwrap().abs_dev(&g2) < 1e-100);
            let g3 = efp_inhom(&params, r, 3).unwrap();
            assert!(efp_inhom_s3(&params, r).unwrap().abs_dev(&g3) < 1e-100);
        }
    }

    #[test]
    fn recurrence_holds() {
        let p = prec();
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let params = random_params(&mut rng, p, 4);
        for (r, s) in [(2, 1), (3, 2), (3, 3), (4, 2)] {
            let lhs = efp_inhom_unnormalized(&params, r, s).unwrap();
            assert!(rec_efp_rhs(&params, r, s).unwrap().rel_dev(&lhs) < 1e-90, "r={r} s={s}");
        }
    }

    #[test]
    fn homogeneous_values() {
        let p = prec();
        let ice = HomParams::ice_point(p);
        assert!(efp_hom(&ice, 3, 1, 1).unwrap().rel_dev(&p.ratio(2, 7)) < 1e-100);
        assert!(efp_hom(&ice, 3, 2, 1).unwrap().rel_dev(&p.ratio(5, 7)) < 1e-100);
        for s in 1..=3 {
            assert!(efp_hom(&ice, 4, 4, s).unwrap().rel_dev(&p.one()) < 1e-100);
        }
        let want = oracle::brute_efp(&InhomParams::homogeneous(&ice, 4), 2, 2).unwrap();
        assert!(efp_hom(&ice, 4, 2, 2).unwrap().rel_dev(&want) < 1e-80);
        assert!(efp_hom(&ice, 4, 1, 2).unwrap().is_zero());
        assert!(matches!(efp_hom(&ice, 5, 4, 4), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn homogeneous_matches_enumeration() {
        let p = prec();
        let h = HomParams::new(p, p.real(1.4), p.real(0.45)).unwrap();
        for n in 2..=5 {
            let params = InhomParams::homogeneous(&h, n);
            for r in 1..=n {
                for s in 1..=r.min(3) {
                    let want = oracle::brute_efp(&params, r, s).unwrap();
                    let got = efp_hom(&h, n, r, s).unwrap();
                    assert!(got.rel_dev(&want) < 1e-80, "N={n} r={r} s={s}");
                }
            }
        }
    }
}
