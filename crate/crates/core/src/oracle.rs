//! Exhaustive enumeration of domain-wall configurations for small lattices.
//!
//! Edge states: 0 is an up or right arrow, 1 is a down or left arrow.
//! Columns `α = 1..N` run right to left, rows `k = 1..N` top to bottom. A
//! vertex reads its top and right edges and emits its bottom and left edges;
//! arrow conservation is `top + right = bottom + left`. Domain-wall
//! boundaries fix top edges to 1, bottom edges to 0, right edges to 0 and
//! left edges to 1 (all horizontal boundary arrows out, all vertical in).

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{HomParams, InhomParams};
use crate::numerics::{MultiSeries, Precision, Scalar};

pub const MAX_N: usize = 7;

/// Vertex types, written as `(top, right, bottom, left)` edge states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexType {
    /// (0,0,0,0)
    A1,
    /// (1,1,1,1)
    A2,
    /// (0,1,0,1)
    B1,
    /// (1,0,1,0)
    B2,
    /// (1,0,0,1)
    C1,
    /// (0,1,1,0)
    C2,
}

impl VertexType {
    fn from_edges(top: u8, right: u8, bottom: u8) -> Self {
        match (top, right, bottom) {
            (0, 0, _) => VertexType::A1,
            (1, 1, _) => VertexType::A2,
            (0, 1, 0) => VertexType::B1,
            (1, 0, 1) => VertexType::B2,
            (1, 0, 0) => VertexType::C1,
            _ => VertexType::C2,
        }
    }

    /// `(top, right, bottom, left)`.
    pub fn edges(self) -> (u8, u8, u8, u8) {
        match self {
            VertexType::A1 => (0, 0, 0, 0),
            VertexType::A2 => (1, 1, 1, 1),
            VertexType::B1 => (0, 1, 0, 1),
            VertexType::B2 => (1, 0, 1, 0),
            VertexType::C1 => (1, 0, 0, 1),
            VertexType::C2 => (0, 1, 1, 0),
        }
    }

    pub fn is_c(self) -> bool {
        matches!(self, VertexType::C1 | VertexType::C2)
    }
}

/// One valid configuration; `types[k][α]` with 0-based row and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DwbcConfig {
    size: usize,
    types: Vec<VertexType>,
}

impl DwbcConfig {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn vertex(&self, row: usize, col: usize) -> VertexType {
        self.types[row * self.size + col]
    }

    /// State of the left edge of vertex `(row, col)` (0-based).
    pub fn left_edge(&self, row: usize, col: usize) -> u8 {
        self.vertex(row, col).edges().3
    }

    /// The alternating sign matrix: `+1` for `C1`, `−1` for `C2`.
    pub fn to_asm(&self) -> Vec<Vec<i8>> {
        (0..self.size)
            .map(|k| {
                (0..self.size)
                    .map(|a| match self.vertex(k, a) {
                        VertexType::C1 => 1,
                        VertexType::C2 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for DwbcConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_asm() {
            // columns are numbered right to left
            let line: Vec<String> = row.iter().rev().map(|v| format!("{v:>2}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Commutative ring used to carry vertex weights.
pub trait Weight: Clone {
    fn mul_w(&self, other: &Self) -> Self;
    fn add_w(&mut self, other: &Self);
    fn zero_w(&self) -> Self;
    fn one_w(&self) -> Self;
}

impl Weight for Scalar {
    fn mul_w(&self, other: &Self) -> Self {
        self * other
    }
    fn add_w(&mut self, other: &Self) {
        *self += other;
    }
    fn zero_w(&self) -> Self {
        self.zero_like()
    }
    fn one_w(&self) -> Self {
        self.one_like()
    }
}

impl Weight for MultiSeries {
    fn mul_w(&self, other: &Self) -> Self {
        self * other
    }
    fn add_w(&mut self, other: &Self) {
        *self = &*self + other;
    }
    fn zero_w(&self) -> Self {
        self.scale(&self.constant_term().zero_like())
    }
    fn one_w(&self) -> Self {
        MultiSeries::constant(self.constant_term().one_like(), self.orders())
    }
}

/// Counting weight.
impl Weight for u64 {
    fn mul_w(&self, other: &Self) -> Self {
        self * other
    }
    fn add_w(&mut self, other: &Self) {
        *self += other;
    }
    fn zero_w(&self) -> Self {
        0
    }
    fn one_w(&self) -> Self {
        1
    }
}

/// Per-vertex weights: `a[α][k]`, `b[α][k]` and the common `c`.
#[derive(Clone, Debug)]
pub struct WeightTable<W> {
    pub a: Vec<Vec<W>>,
    pub b: Vec<Vec<W>>,
    pub c: W,
}

impl<W: Weight> WeightTable<W> {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    fn weight(&self, t: VertexType, col: usize, row: usize) -> &W {
        match t {
            VertexType::A1 | VertexType::A2 => &self.a[col][row],
            VertexType::B1 | VertexType::B2 => &self.b[col][row],
            _ => &self.c,
        }
    }
}

impl WeightTable<Scalar> {
    pub fn from_params(p: &InhomParams) -> Self {
        let n = p.n();
        WeightTable {
            a: (0..n).map(|al| (0..n).map(|k| p.a(al, k)).collect()).collect(),
            b: (0..n).map(|al| (0..n).map(|k| p.b(al, k)).collect()).collect(),
            c: p.c(),
        }
    }
}

impl WeightTable<u64> {
    pub fn unit(n: usize) -> Self {
        WeightTable {
            a: vec![vec![1; n]; n],
            b: vec![vec![1; n]; n],
            c: 1,
        }
    }
}

impl WeightTable<MultiSeries> {
    /// Weights for series-valued spectral parameters `λ_α` and scalar `ν_k`.
    pub fn from_jets(lambdas: &[MultiSeries], nus: &[Scalar], eta: &Scalar) -> Result<Self> {
        if lambdas.is_empty() || lambdas.len() != nus.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} spectral jets for {} row parameters",
                lambdas.len(),
                nus.len()
            )));
        }
        let orders = lambdas[0].orders().to_vec();
        if lambdas.iter().any(|l| l.orders() != orders.as_slice()) {
            return Err(Error::ShapeMismatch("spectral jets of differing shape".into()));
        }
        let sin_shift = |l: &MultiSeries, shift: Scalar| l.add_constant(&shift).sin();
        let a = lambdas
            .iter()
            .map(|l| nus.iter().map(|nu| sin_shift(l, eta - nu)).collect())
            .collect();
        let b = lambdas
            .iter()
            .map(|l| nus.iter().map(|nu| sin_shift(l, -(eta + nu))).collect())
            .collect();
        Ok(WeightTable {
            a,
            b,
            c: MultiSeries::constant(eta.mul_int(2).sin(), &orders),
        })
    }
}

/// Restriction on the configurations summed over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constraint {
    None,
    /// Left edges of column `r` in rows `1..=s` all point left.
    Emptiness { r: usize, s: usize },
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParams("lattice size must be at least 1".into()));
    }
    if n > MAX_N {
        return Err(Error::SizeCap {
            what: "exhaustive enumeration",
            got: n,
            max: MAX_N,
        });
    }
    Ok(())
}

struct Walker<'a, W, F> {
    n: usize,
    table: &'a WeightTable<W>,
    constraint: Constraint,
    vertical: Vec<u8>,
    types: Vec<VertexType>,
    prefix: Vec<W>,
    leaf: F,
}

impl<W: Weight, F: FnMut(&[VertexType], &W)> Walker<'_, W, F> {
    fn step(&mut self, pos: usize, h: u8) {
        let n = self.n;
        if pos == n * n {
            let w = self.prefix.last().expect("prefix is never empty");
            (self.leaf)(&self.types, w);
            return;
        }
        let (row, col) = (pos / n, pos % n);
        let top = self.vertical[col];
        for bottom in [0u8, 1] {
            let sum = top + h;
            if sum < bottom || sum - bottom > 1 {
                continue;
            }
            let left = sum - bottom;
            if col == n - 1 && left != 1 {
                continue;
            }
            if row == n - 1 && bottom != 0 {
                continue;
            }
            if let Constraint::Emptiness { r, s } = self.constraint {
                if col + 1 == r && row < s && left != 1 {
                    continue;
                }
            }
            let t = VertexType::from_edges(top, h, bottom);
            let w = self.prefix[pos].mul_w(self.table.weight(t, col, row));
            self.prefix.push(w);
            self.types.push(t);
            self.vertical[col] = bottom;
            let next_h = if col == n - 1 { 0 } else { left };
            self.step(pos + 1, next_h);
            self.vertical[col] = top;
            self.types.pop();
            self.prefix.pop();
        }
    }
}

/// Depth-first walk over all configurations satisfying `constraint`;
/// `leaf` receives the vertex types (row-major) and the configuration weight.
pub fn walk<W: Weight>(
    table: &WeightTable<W>,
    constraint: Constraint,
    leaf: impl FnMut(&[VertexType], &W),
) -> Result<()> {
    let n = table.n();
    check_size(n)?;
    if table.a.iter().chain(&table.b).any(|row| row.len() != n) {
        return Err(Error::ShapeMismatch("weight table must be N x N".into()));
    }
    let mut walker = Walker {
        n,
        table,
        constraint,
        vertical: vec![1; n],
        types: Vec::with_capacity(n * n),
        prefix: Vec::with_capacity(n * n + 1),
        leaf,
    };
    walker.prefix.push(table.c.one_w());
    walker.step(0, 0);
    Ok(())
}

/// All configurations of size `n`, in depth-first order.
pub fn enumerate(n: usize) -> Result<Vec<DwbcConfig>> {
    let mut out = Vec::new();
    walk(&WeightTable::unit(n), Constraint::None, |types, _| {
        out.push(DwbcConfig {
            size: n,
            types: types.to_vec(),
        })
    })?;
    Ok(out)
}

/// Number of configurations satisfying `constraint`.
pub fn count(n: usize, constraint: Constraint) -> Result<u64> {
    let mut total = 0u64;
    walk(&WeightTable::unit(n), constraint, |_, w| total += w)?;
    Ok(total)
}

pub fn config_weight_in<W: Weight>(cfg: &DwbcConfig, table: &WeightTable<W>) -> Result<W> {
    if cfg.size != table.n() {
        return Err(Error::ShapeMismatch(format!(
            "configuration of size {} against {} parameters",
            cfg.size,
            table.n()
        )));
    }
    let n = cfg.size;
    let mut w = table.c.one_w();
    for row in 0..n {
        for col in 0..n {
            w = w.mul_w(table.weight(cfg.vertex(row, col), col, row));
        }
    }
    Ok(w)
}

pub fn config_weight(cfg: &DwbcConfig, p: &InhomParams) -> Result<Scalar> {
    config_weight_in(cfg, &WeightTable::from_params(p))
}

/// Constrained partition sum over any weight ring.
pub fn partition_sum<W: Weight>(table: &WeightTable<W>, constraint: Constraint) -> Result<W> {
    let mut total = table.c.zero_w();
    walk(table, constraint, |_, w| total.add_w(w))?;
    Ok(total)
}

pub fn brute_z(p: &InhomParams) -> Result<Scalar> {
    partition_sum(&WeightTable::from_params(p), Constraint::None)
}

fn check_indices(n: usize, r: usize, s: usize) -> Result<()> {
    if r == 0 || r > n || s == 0 || s > n {
        return Err(Error::IndexOutOfRange(format!(
            "need 1 <= r, s <= N = {n}, got r = {r}, s = {s}"
        )));
    }
    Ok(())
}

pub fn brute_efp(p: &InhomParams, r: usize, s: usize) -> Result<Scalar> {
    check_indices(p.n(), r, s)?;
    let table = WeightTable::from_params(p);
    let z = partition_sum(&table, Constraint::None)?;
    let restricted = partition_sum(&table, Constraint::Emptiness { r, s })?;
    Ok(restricted / z)
}

/// Unnormalized constrained sum `Z · F`.
pub fn brute_efp_unnormalized(p: &InhomParams, r: usize, s: usize) -> Result<Scalar> {
    check_indices(p.n(), r, s)?;
    partition_sum(&WeightTable::from_params(p), Constraint::Emptiness { r, s })
}

/// Distribution of the position of the c-vertex in the top row.
pub fn brute_first_row_c(p: &HomParams, n: usize) -> Result<Vec<Scalar>> {
    check_size(n)?;
    let table = WeightTable::from_params(&InhomParams::homogeneous(p, n));
    let zero = p.precision().zero();
    let mut sums = vec![zero.clone(); n];
    walk(&table, Constraint::None, |types, w| {
        let pos = types[..n].iter().position(|t| t.is_c()).expect("top row holds one c-vertex");
        sums[pos] += w;
    })?;
    let z: Scalar = sums.iter().fold(zero, |acc, x| acc + x);
    Ok(sums.into_iter().map(|x| x / &z).collect())
}

/// Exact partition function of the homogeneous model as a jet in the
/// shifts of the first `xi_orders.len()` spectral parameters:
/// `Z_N(λ₁ + ξ₁, …, λ_s + ξ_s, λ_{s+1}, …)` with `ν = 0`.
pub fn z_jet(
    prec: Precision,
    lambdas: &[Scalar],
    eta: &Scalar,
    xi_orders: &[usize],
    signs: &[i64],
) -> Result<MultiSeries> {
    let n = lambdas.len();
    let s = xi_orders.len();
    if s > n || signs.len() != s {
        return Err(Error::ShapeMismatch(format!(
            "{s} jet variables for {n} spectral parameters"
        )));
    }
    let jets: Vec<MultiSeries> = lambdas
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let base = MultiSeries::constant(l.clone(), xi_orders);
            if i < s {
                let v = MultiSeries::variable(prec, xi_orders, i).scale(&prec.int(signs[i]));
                &base + &v
            } else {
                base
            }
        })
        .collect();
    let nus = vec![prec.zero(); n];
    partition_sum(&WeightTable::from_jets(&jets, &nus, eta)?, Constraint::None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
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
    fn configuration_counts() {
        let expected = [1u64, 2, 7, 42, 429, 7436];
        for (i, &e) in expected.iter().enumerate() {
            assert_eq!(count(i + 1, Constraint::None).unwrap(), e);
        }
        assert_eq!(enumerate(4).unwrap().len(), 42);
        assert!(matches!(enumerate(8), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn configurations_are_alternating_sign_matrices() {
        for cfg in enumerate(4).unwrap() {
            let asm = cfg.to_asm();
            for i in 0..4 {
                let row: i32 = asm[i].iter().map(|&x| x as i32).sum();
                let col: i32 = asm.iter().map(|r| r[i] as i32).sum();
                assert_eq!((row, col), (1, 1));
            }
        }
    }

    #[test]
    fn small_partition_functions() {
        let p = prec();
        let one = brute_z(&InhomParams::homogeneous(&HomParams::ice_point(p), 1)).unwrap();
        assert!(one.rel_dev(&HomParams::ice_point(p).c()) < 1e-120);
        let ice2 = brute_z(&InhomParams::homogeneous(&HomParams::ice_point(p), 2)).unwrap();
        assert!(ice2.rel_dev(&p.ratio(9, 8)) < 1e-120);
        let ff3 = brute_z(&InhomParams::homogeneous(&HomParams::free_fermion_point(p), 3)).unwrap();
        assert!(ff3.rel_dev(&p.one()) < 1e-120);
        let cfg = &enumerate(2).unwrap()[0];
        let w = config_weight(cfg, &InhomParams::homogeneous(&HomParams::ice_point(p), 2)).unwrap();
        assert!(w.rel_dev(&p.ratio(9, 16)) < 1e-120);
    }

    #[test]
    fn permutation_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=4 {
            let params = random_params(&mut rng, n);
            let z = brute_z(&params).unwrap();
            let mut swapped = params.clone();
            swapped.lambdas.swap(0, n - 1);
            swapped.nus.rotate_left(1);
            assert!(brute_z(&swapped).unwrap().rel_dev(&z) < 1e-110);
        }
    }

    #[test]
    fn emptiness_basic_values() {
        let p = prec();
        let ice2 = InhomParams::homogeneous(&HomParams::ice_point(p), 2);
        assert!(brute_efp(&ice2, 1, 1).unwrap().rel_dev(&p.ratio(1, 2)) < 1e-120);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let params = random_params(&mut rng, 4);
        assert!(brute_efp(&params, 2, 3).unwrap().is_zero());
        for s in 1..=4 {
            assert!(brute_efp(&params, 4, s).unwrap().rel_dev(&p.one()) < 1e-120);
        }
        let mut prev = p.zero();
        for r in 1..=4 {
            let f = brute_efp(&params, r, 1).unwrap();
            assert!(f.re_f64() >= prev.re_f64() - 1e-100 && f.re_f64() <= 1.0 + 1e-100);
            prev = f;
        }
        assert!(brute_efp(&params, 0, 1).is_err());
    }

    #[test]
    fn first_row_distribution() {
        let p = prec();
        let ice = HomParams::ice_point(p);
        let h = brute_first_row_c(&ice, 3).unwrap();
        for (x, k) in h.iter().zip([2, 3, 2]) {
            assert!(x.rel_dev(&p.ratio(k, 7)) < 1e-120);
        }
        let hp = HomParams::new(p, p.real(1.3), p.real(0.4)).unwrap();
        let h2 = brute_first_row_c(&hp, 2).unwrap();
        let (a2, b2) = (hp.a().powu(2), hp.b().powu(2));
        assert!(h2[0].rel_dev(&(&a2 / (&a2 + &b2))) < 1e-120);
        for n in 2..=5 {
            let params = InhomParams::homogeneous(&hp, n);
            let h = brute_first_row_c(&hp, n).unwrap();
            let total = h.iter().fold(p.zero(), |acc, x| acc + x);
            assert!(total.rel_dev(&p.one()) < 1e-120);
            for r in 1..=n {
                let hi = brute_efp(&params, r, 1).unwrap();
                let lo = if r > 1 { brute_efp(&params, r - 1, 1).unwrap() } else { p.zero() };
                assert!((hi - lo).rel_dev(&h[r - 1]) < 1e-100);
            }
        }
    }

    #[test]
    fn jet_weights_match_shifted_scalars() {
        let p = prec();
        let ice = HomParams::ice_point(p);
        let lambdas = vec![ice.lambda.clone(); 3];
        let jet = z_jet(p, &lambdas, &ice.eta, &[3, 3], &[1, -1]).unwrap();
        let x = p.real(0.01);
        let y = p.real(0.02);
        let mut shifted = InhomParams::homogeneous(&ice, 3);
        shifted.lambdas[0] = &ice.lambda + &x;
        shifted.lambdas[1] = &ice.lambda - &y;
        let direct = brute_z(&shifted).unwrap();
        let approx = jet.evaluate(&[x, y]);
        // truncation error of order 0.02^4
        assert!(approx.rel_dev(&direct) < 1e-5);
        assert!(jet.constant_term().rel_dev(&brute_z(&InhomParams::homogeneous(&ice, 3)).unwrap()) < 1e-120);
    }
}
