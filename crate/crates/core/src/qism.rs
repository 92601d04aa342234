//! Monodromy-matrix operators on the `2^N`-dimensional quantum space.
//!
//! Site `k` (1-based) is bit `k − 1` of the amplitude index; bit 0 is spin
//! up, so `|⇑⟩` is pattern 0 and `|⇓⟩` is the all-ones pattern. The
//! monodromy matrix is `T(λ) = L_N(λ) ··· L_1(λ)` with
//! `L_k = [[a π̄_k + b π_k, c σ⁻_k], [c σ⁺_k, b π̄_k + a π_k]]`,
//! where `π_k` projects on spin down at site `k`.

use std::ops::Range;

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{ensure_nonzero, InhomParams};
use crate::numerics::{Precision, Scalar};

pub const MAX_SITES: usize = 14;

#[derive(Clone, Debug)]
pub struct QuantumState {
    n_sites: usize,
    amps: Vec<Scalar>,
}

impl QuantumState {
    pub fn zero(prec: Precision, n_sites: usize) -> Result<Self> {
        check_sites(n_sites)?;
        Ok(Self {
            n_sites,
            amps: vec![prec.zero(); 1 << n_sites],
        })
    }

    pub fn basis(prec: Precision, n_sites: usize, pattern: usize) -> Result<Self> {
        let mut s = Self::zero(prec, n_sites)?;
        if pattern >= s.amps.len() {
            return Err(Error::IndexOutOfRange(format!("pattern {pattern} on {n_sites} sites")));
        }
        s.amps[pattern] = prec.one();
        Ok(s)
    }

    /// `|⇑⟩`.
    pub fn all_up(prec: Precision, n_sites: usize) -> Result<Self> {
        Self::basis(prec, n_sites, 0)
    }

    /// `|⇓⟩`.
    pub fn all_down(prec: Precision, n_sites: usize) -> Result<Self> {
        Self::basis(prec, n_sites, (1 << n_sites) - 1)
    }

    /// Amplitudes with independent real and imaginary parts in `[−1, 1]`.
    pub fn random(prec: Precision, n_sites: usize, rng: &mut impl Rng) -> Result<Self> {
        let mut s = Self::zero(prec, n_sites)?;
        for a in &mut s.amps {
            *a = prec.complex(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        Ok(s)
    }

    pub fn from_amplitudes(amps: Vec<Scalar>) -> Result<Self> {
        let n_sites = amps.len().trailing_zeros() as usize;
        if amps.is_empty() || 1 << n_sites != amps.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} amplitudes is not a power of two",
                amps.len()
            )));
        }
        check_sites(n_sites)?;
        Ok(Self { n_sites, amps })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn amplitudes(&self) -> &[Scalar] {
        &self.amps
    }

    pub fn amplitude(&self, pattern: usize) -> &Scalar {
        &self.amps[pattern]
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        Self {
            n_sites: self.n_sites,
            amps: self.amps.iter().map(|a| a * k).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            n_sites: self.n_sites,
            amps: self.amps.iter().zip(&other.amps).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            n_sites: self.n_sites,
            amps: self.amps.iter().zip(&other.amps).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.amps.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    /// Sets to zero every amplitude with spin up on one of `sites` (1-based).
    pub fn project_down(&self, sites: Range<usize>) -> Self {
        let mask: usize = sites.map(|k| 1usize << (k - 1)).sum();
        Self {
            n_sites: self.n_sites,
            amps: self
                .amps
                .iter()
                .enumerate()
                .map(|(p, a)| if p & mask == mask { a.clone() } else { a.zero_like() })
                .collect(),
        }
    }

    /// `⟨⇓|ψ⟩`.
    pub fn down_component(&self) -> &Scalar {
        self.amps.last().expect("state is never empty")
    }
}

fn check_sites(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParams("need at least one site".into()));
    }
    if n > MAX_SITES {
        return Err(Error::SizeCap {
            what: "quantum space",
            got: n,
            max: MAX_SITES,
        });
    }
    Ok(())
}

/// Entry of the monodromy matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entry {
    A,
    B,
    C,
    D,
}

impl Entry {
    pub const ALL: [Entry; 4] = [Entry::A, Entry::B, Entry::C, Entry::D];

    /// `(row, column)` in auxiliary space.
    pub fn index(self) -> (usize, usize) {
        match self {
            Entry::A => (0, 0),
            Entry::B => (0, 1),
            Entry::C => (1, 0),
            Entry::D => (1, 1),
        }
    }

    pub fn from_index(i: usize, j: usize) -> Self {
        match (i, j) {
            (0, 0) => Entry::A,
            (0, 1) => Entry::B,
            (1, 0) => Entry::C,
            _ => Entry::D,
        }
    }
}

/// Row parameters and crossing parameter shared by all operators.
#[derive(Clone, Debug)]
pub struct Chain {
    pub nus: Vec<Scalar>,
    pub eta: Scalar,
}

impl Chain {
    pub fn new(nus: Vec<Scalar>, eta: Scalar) -> Result<Self> {
        check_sites(nus.len())?;
        Ok(Self { nus, eta })
    }

    pub fn from_params(p: &InhomParams) -> Result<Self> {
        Self::new(p.nus.clone(), p.eta.clone())
    }

    pub fn n_sites(&self) -> usize {
        self.nus.len()
    }

    /// Entry of the partial monodromy matrix `L_{end} ··· L_{start}` over the
    /// 1-based site range `sites`, applied to `state`.
    pub fn apply_on(&self, entry: Entry, lambda: &Scalar, state: &QuantumState, sites: Range<usize>) -> QuantumState {
        assert_eq!(state.n_sites, self.n_sites(), "state and chain sizes differ");
        assert!(sites.start >= 1 && sites.end <= self.n_sites() + 1, "site range out of bounds");
        let (i, j) = entry.index();
        let zero = state.amps[0].zero_like();
        let mut up: Vec<Scalar>;
        let mut down: Vec<Scalar>;
        if j == 0 {
            up = state.amps.clone();
            down = vec![zero.clone(); state.amps.len()];
        } else {
            up = vec![zero.clone(); state.amps.len()];
            down = state.amps.clone();
        }
        let c = self.eta.mul_int(2).sin();
        for k in sites {
            let diff = lambda - &self.nus[k - 1];
            let a = (&diff + &self.eta).sin();
            let b = (&diff - &self.eta).sin();
            let m = 1usize << (k - 1);
            let mut new_up = Vec::with_capacity(up.len());
            let mut new_down = Vec::with_capacity(up.len());
            for p in 0..up.len() {
                if p & m == 0 {
                    new_up.push(&a * &up[p]);
                    new_down.push(&c * &up[p | m] + &b * &down[p]);
                } else {
                    new_up.push(&b * &up[p] + &c * &down[p ^ m]);
                    new_down.push(&a * &down[p]);
                }
            }
            up = new_up;
            down = new_down;
        }
        QuantumState {
            n_sites: state.n_sites,
            amps: if i == 0 { up } else { down },
        }
    }

    pub fn apply(&self, entry: Entry, lambda: &Scalar, state: &QuantumState) -> QuantumState {
        self.apply_on(entry, lambda, state, 1..self.n_sites() + 1)
    }

    pub fn apply_a(&self, lambda: &Scalar, state: &QuantumState) -> QuantumState {
        self.apply(Entry::A, lambda, state)
    }

    pub fn apply_b(&self, lambda: &Scalar, state: &QuantumState) -> QuantumState {
        self.apply(Entry::B, lambda, state)
    }

    pub fn apply_c(&self, lambda: &Scalar, state: &QuantumState) -> QuantumState {
        self.apply(Entry::C, lambda, state)
    }

    pub fn apply_d(&self, lambda: &Scalar, state: &QuantumState) -> QuantumState {
        self.apply(Entry::D, lambda, state)
    }
}

/// `⟨⇓| B(λ_N) ··· B(λ₁) |⇑⟩`.
pub fn z_qism(p: &InhomParams) -> Result<Scalar> {
    let chain = Chain::from_params(p)?;
    let mut state = QuantumState::all_up(p.precision(), p.n())?;
    for l in &p.lambdas {
        state = chain.apply_b(l, &state);
    }
    Ok(state.down_component().clone())
}

/// `⟨⇓| B(λ_N)···B(λ_{r+1}) π₁···π_s B(λ_r)···B(λ₁) |⇑⟩`, not normalized.
pub fn efp_qism_unnormalized(p: &InhomParams, r: usize, s: usize) -> Result<Scalar> {
    let n = p.n();
    if r == 0 || r > n || s == 0 || s > n {
        return Err(Error::IndexOutOfRange(format!(
            "need 1 <= r, s <= N = {n}, got r = {r}, s = {s}"
        )));
    }
    let chain = Chain::from_params(p)?;
    let mut state = QuantumState::all_up(p.precision(), n)?;
    for (i, l) in p.lambdas.iter().enumerate() {
        if i == r {
            state = state.project_down(1..s + 1);
        }
        state = chain.apply_b(l, &state);
    }
    if r == n {
        state = state.project_down(1..s + 1);
    }
    Ok(state.down_component().clone())
}

pub fn efp_qism(p: &InhomParams, r: usize, s: usize) -> Result<Scalar> {
    let num = efp_qism_unnormalized(p, r, s)?;
    let z = z_qism(p)?;
    ensure_nonzero(&z, p.precision(), "partition function")?;
    Ok(num / z)
}

/// R-matrix `R(λ, λ')` in the basis `00, 01, 10, 11` of the two auxiliary
/// spaces.
pub fn r_matrix(x: &Scalar, y: &Scalar, eta: &Scalar, prec: Precision) -> Result<[[Scalar; 4]; 4]> {
    let f = crate::model::f_fn(y, x, eta, prec)?;
    let g = crate::model::g_rmatrix_fn(y, x, eta, prec)?;
    let z = prec.zero();
    let o = prec.one();
    Ok([
        [f.clone(), z.clone(), z.clone(), z.clone()],
        [z.clone(), g.clone(), o.clone(), z.clone()],
        [z.clone(), o, g, z.clone()],
        [z.clone(), z.clone(), z, f],
    ])
}

fn rel_deviation(lhs: &QuantumState, rhs: &QuantumState) -> f64 {
    let scale = lhs.max_abs().max(rhs.max_abs());
    if scale == 0.0 {
        return 0.0;
    }
    lhs.sub(rhs).max_abs() / scale
}

/// Maximum relative deviation over the sixteen entry relations of
/// `R(λ,λ') [T(λ) ⊗ T(λ')] = [T(λ') ⊗ T(λ)] R(λ,λ')` applied to `state`.
pub fn rtt_deviations(chain: &Chain, x: &Scalar, y: &Scalar, state: &QuantumState, prec: Precision) -> Result<Vec<f64>> {
    let r = r_matrix(x, y, &chain.eta, prec)?;
    // products[(k, m), (l, n)] = T_km(first) T_ln(second) |ψ⟩
    let product = |first: &Scalar, second: &Scalar, k: usize, m: usize, l: usize, n: usize| {
        let inner = chain.apply(Entry::from_index(l, n), second, state);
        chain.apply(Entry::from_index(k, m), first, &inner)
    };
    let mut lhs_terms = vec![vec![None; 4]; 4];
    let mut rhs_terms = vec![vec![None; 4]; 4];
    for km in 0..4 {
        for ln in 0..4 {
            let (k, m) = (km / 2, km % 2);
            let (l, n) = (ln / 2, ln % 2);
            lhs_terms[km][ln] = Some(product(x, y, k, m, l, n));
            rhs_terms[km][ln] = Some(product(y, x, k, m, l, n));
        }
    }
    let get = |t: &Vec<Vec<Option<QuantumState>>>, k: usize, m: usize, l: usize, n: usize| {
        t[k * 2 + m][l * 2 + n].clone().expect("filled above")
    };
    let zero = QuantumState::zero(prec, chain.n_sites())?;
    let mut out = Vec::with_capacity(16);
    for i in 0..2 {
        for j in 0..2 {
            for m in 0..2 {
                for n in 0..2 {
                    let mut lhs = zero.clone();
                    let mut rhs = zero.clone();
                    for k in 0..2 {
                        for l in 0..2 {
                            let rl = &r[i * 2 + j][k * 2 + l];
                            if !rl.is_zero() {
                                lhs = lhs.add(&get(&lhs_terms, k, m, l, n).scale(rl));
                            }
                            let rr = &r[k * 2 + l][m * 2 + n];
                            if !rr.is_zero() {
                                rhs = rhs.add(&get(&rhs_terms, i, k, j, l).scale(rr));
                            }
                        }
                    }
                    out.push(rel_deviation(&lhs, &rhs));
                }
            }
        }
    }
    Ok(out)
}

/// `B(λ)B(λ') = B(λ')B(λ)` on `state`.
pub fn bb_deviation(chain: &Chain, x: &Scalar, y: &Scalar, state: &QuantumState) -> f64 {
    let lhs = chain.apply_b(x, &chain.apply_b(y, state));
    let rhs = chain.apply_b(y, &chain.apply_b(x, state));
    rel_deviation(&lhs, &rhs)
}

/// `A(λ)B(λ') = f(λ,λ')B(λ')A(λ) + g(λ',λ)B(λ)A(λ')` on `state`.
pub fn ab_deviation(chain: &Chain, x: &Scalar, y: &Scalar, state: &QuantumState, prec: Precision) -> Result<f64> {
    let f = crate::model::f_fn(x, y, &chain.eta, prec)?;
    let g = crate::model::g_rmatrix_fn(y, x, &chain.eta, prec)?;
    let lhs = chain.apply_a(x, &chain.apply_b(y, state));
    let t1 = chain.apply_b(y, &chain.apply_a(x, state)).scale(&f);
    let t2 = chain.apply_b(x, &chain.apply_a(y, state)).scale(&g);
    Ok(rel_deviation(&lhs, &t1.add(&t2)))
}

/// Largest amplitude that `B(λ_n)···B(λ₁)` moves from site-1-down into
/// site-1-up, relative to the largest output amplitude.
pub fn triangular_deviation(chain: &Chain, lambdas: &[Scalar], state: &QuantumState) -> f64 {
    let down1 = state.project_down(1..2);
    let mut out = down1;
    for l in lambdas {
        out = chain.apply_b(l, &out);
    }
    let scale = out.max_abs();
    let leak = out
        .amps
        .iter()
        .enumerate()
        .filter(|(p, _)| p & 1 == 0)
        .map(|(_, a)| a.abs_f64())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        0.0
    } else {
        leak / scale
    }
}

/// Applies `⟨↓₁|·|↑₁⟩`: keeps site-1-down amplitudes of `state` and
/// reinterprets them as a state on sites `2..N` (still indexed on N sites
/// with bit 0 cleared).
fn site1_down_block(state: &QuantumState) -> QuantumState {
    QuantumState {
        n_sites: state.n_sites,
        amps: (0..state.amps.len())
            .map(|p| {
                if p & 1 == 0 {
                    state.amps[p | 1].clone()
                } else {
                    state.amps[p].zero_like()
                }
            })
            .collect(),
    }
}

/// `⟨⇓₁|B(λ_n)···B(λ₁)|⇑⟩` against the explicit sum of `B₂` products in
/// which one operator is replaced by `A₂`, and against the reduced form in
/// which `A₂` has acted on `|⇑₂⟩`. Returns both relative deviations.
pub fn key_deviations(chain: &Chain, lambdas: &[Scalar], prec: Precision) -> Result<(f64, f64)> {
    let n_sites = chain.n_sites();
    let up = QuantumState::all_up(prec, n_sites)?;
    let mut full = up.clone();
    for l in lambdas {
        full = chain.apply_b(l, &full);
    }
    let lhs = site1_down_block(&full);
    let rest = 2..n_sites + 1;
    let nu1 = &chain.nus[0];
    let eta = &chain.eta;
    let c = eta.mul_int(2).sin();
    let a1 = |l: &Scalar| (l - nu1 + eta).sin();
    let b1 = |l: &Scalar| (l - nu1 - eta).sin();
    let n = lambdas.len();

    let mut e21 = QuantumState::zero(prec, n_sites)?;
    for alpha in 0..n {
        let mut coef = c.clone();
        for beta in alpha + 1..n {
            coef *= a1(&lambdas[beta]);
        }
        for beta in 0..alpha {
            coef *= b1(&lambdas[beta]);
        }
        let mut v = up.clone();
        for (beta, l) in lambdas.iter().enumerate() {
            let entry = if beta == alpha { Entry::A } else { Entry::B };
            v = chain.apply_on(entry, l, &v, rest.clone());
        }
        e21 = e21.add(&v.scale(&coef));
    }

    let mut keyed = QuantumState::zero(prec, n_sites)?;
    for alpha in 0..n {
        let la = &lambdas[alpha];
        let mut coef = c.clone();
        for beta in 0..n {
            if beta != alpha {
                coef *= b1(&lambdas[beta]);
                coef *= crate::model::f_fn(la, &lambdas[beta], eta, prec)?;
            }
        }
        for k in 1..n_sites {
            coef *= (la - &chain.nus[k] + eta).sin();
        }
        let mut v = up.clone();
        for (beta, l) in lambdas.iter().enumerate() {
            if beta != alpha {
                v = chain.apply_on(Entry::B, l, &v, rest.clone());
            }
        }
        keyed = keyed.add(&v.scale(&coef));
    }
    Ok((rel_deviation(&lhs, &e21), rel_deviation(&lhs, &keyed)))
}

/// `A(λ)|⇑⟩ = Π_k a(λ, ν_k) |⇑⟩`.
pub fn a_eigen_deviation(chain: &Chain, lambda: &Scalar, prec: Precision) -> Result<f64> {
    let up = QuantumState::all_up(prec, chain.n_sites())?;
    let got = chain.apply_a(lambda, &up);
    let eig = chain
        .nus
        .iter()
        .fold(prec.one(), |acc, nu| acc * (lambda - nu + &chain.eta).sin());
    Ok(rel_deviation(&got, &up.scale(&eig)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::HomParams;
    use crate::oracle;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn prec() -> Precision {
        Precision::new(128)
    }

    fn random_params(rng: &mut ChaCha8Rng, n: usize) -> InhomParams {
        let eta: f64 = rng.gen_range(0.2..0.6);
        let lambdas: Vec<f64> = (0..n).map(|_| rng.gen_range(1.2..1.9)).collect();
        let nus: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.2..0.2)).collect();
        InhomParams::from_f64(prec(), &lambdas, &nus, eta).unwrap()
    }

    #[test]
    fn single_site_b() {
        let p = prec();
        let chain = Chain::new(vec![p.zero()], p.real(0.4)).unwrap();
        let out = chain.apply_b(&p.real(1.1), &QuantumState::all_up(p, 1).unwrap());
        assert!(out.amplitude(1).rel_dev(&p.real(0.8).sin()) < 1e-120);
        assert!(out.amplitude(0).is_zero());
    }

    #[test]
    fn matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=4 {
            let params = random_params(&mut rng, n);
            let z = oracle::brute_z(&params).unwrap();
            assert!(z_qism(&params).unwrap().rel_dev(&z) < 1e-110, "N = {n}");
            for r in 1..=n {
                for s in 1..=n {
                    let want = oracle::brute_efp(&params, r, s).unwrap();
                    let got = efp_qism(&params, r, s).unwrap();
                    assert!(got.abs_dev(&want) < 1e-110, "N = {n}, r = {r}, s = {s}");
                }
            }
        }
        let ice = InhomParams::homogeneous(&HomParams::ice_point(prec()), 2);
        assert!(z_qism(&ice).unwrap().rel_dev(&prec().ratio(9, 8)) < 1e-120);
    }

    #[test]
    fn yang_baxter_relations() {
        let p = prec();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let params = random_params(&mut rng, 3);
        let chain = Chain::from_params(&params).unwrap();
        let (x, y) = (p.real(1.31), p.real(1.77));
        for _ in 0..3 {
            let st = QuantumState::random(p, 3, &mut rng).unwrap();
            let devs = rtt_deviations(&chain, &x, &y, &st, p).unwrap();
            assert!(devs.iter().all(|&d| d < 1e-110), "{devs:?}");
            assert!(bb_deviation(&chain, &x, &y, &st) < 1e-110);
            assert!(ab_deviation(&chain, &x, &y, &st, p).unwrap() < 1e-110);
        }
        assert!(a_eigen_deviation(&chain, &x, p).unwrap() < 1e-110);
    }

    #[test]
    fn two_site_structure() {
        let p = prec();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let params = random_params(&mut rng, 4);
        let chain = Chain::from_params(&params).unwrap();
        let st = QuantumState::random(p, 4, &mut rng).unwrap();
        assert!(triangular_deviation(&chain, &params.lambdas[..3], &st) < 1e-110);
        for n in 2..=3 {
            let (e21, key) = key_deviations(&chain, &params.lambdas[..n], p).unwrap();
            assert!(e21 < 1e-110 && key < 1e-110, "{e21} {key}");
        }
    }
}
