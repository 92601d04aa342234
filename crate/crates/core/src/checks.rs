//! Validation suite: every cross-method agreement and identity, reported as
//! one record per invariant.

use serde::Serialize;

use crate::contour::{
    asym_sides, default_order, determinant_hns_sides, efp_mir1, efp_mir2, efp_mir2_with_order, efp_mir3,
    shifted_z_ratio_jet, ZJetSource,
};
use crate::detform::{det_reduction_rhs, g_n, g_n_pole_sum, phi_matrix, rec_z_rhs, z_hom, z_ik_inhom};
use crate::efp::{efp_hom, efp_inhom, efp_inhom_s2, efp_inhom_s3, rec_efp_rhs};
use crate::error::{Error, Result};
use crate::model::{HomParams, InhomParams};
use crate::numerics::{MultiSeries, Precision, Scalar, ScalarMatrix};
use crate::oracle;
use crate::orthopoly::{
    a_matrix_binomial, a_matrix_power, bare_z, boundary_h, bordered_hankel_sides, claim_sides, efp_ortho, gen_h,
    h_ns, laplace_moment, moments, v_vector,
};
use crate::qism::{self, Chain};
use crate::sampling::Sampler;

/// Version of the JSON report layout.
pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    #[serde(serialize_with = "as_decimal")]
    pub max_dev: f64,
    #[serde(serialize_with = "as_decimal")]
    pub tol: f64,
    pub pass: bool,
    #[serde(skip)]
    pub group: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn as_decimal<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{x:.3e}"))
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub version: u32,
    pub precision: u32,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub prec: Precision,
    pub seed: u64,
}

impl SuiteConfig {
    pub fn new(prec: Precision) -> Self {
        Self { prec, seed: 20240601 }
    }

    /// `10^{−exp}` at 128 digits and above, shrunk in proportion below.
    pub fn tol(&self, exp: u32) -> f64 {
        let d = self.prec.digits().min(128) as f64;
        10f64.powf(-(exp as f64) * d / 128.0)
    }
}

/// Running maximum of deviations; NaN counts as infinite.
#[derive(Default)]
struct Worst(f64);

impl Worst {
    fn push(&mut self, d: f64) {
        self.0 = if d.is_nan() { f64::INFINITY } else { self.0.max(d) };
    }
}

fn record(group: &'static str, name: &str, anchor: &str, worst: Worst, tol: f64) -> CheckRecord {
    CheckRecord {
        name: name.into(),
        anchor: anchor.into(),
        max_dev: worst.0,
        tol,
        pass: worst.0 <= tol,
        group,
        warnings: Vec::new(),
    }
}

type GroupFn = fn(&SuiteConfig) -> Result<Vec<CheckRecord>>;

/// Group names in execution order with their descriptions.
pub const GROUPS: [(&str, &str, GroupFn); 12] = [
    ("numerics", "determinants, series reciprocal, sine jets", numerics_group),
    ("partition", "partition function across methods and special points", partition_group),
    ("efp-inhom", "inhomogeneous emptiness probability across methods", efp_inhom_group),
    ("homogeneous", "homogeneous emptiness probability method chain", homogeneous_group),
    ("recurrences", "recurrences in N for Z and the emptiness probability", recurrences_group),
    ("identities", "pole-sum and cofactor identities behind the recurrence", identities_group),
    ("yang-baxter", "monodromy-matrix algebra on random states", yang_baxter_group),
    ("orthopoly", "orthogonal polynomials and generating functions", orthopoly_group),
    ("bare-z", "bare partition function against near-homogeneous determinants", bare_z_group),
    ("laplace", "Laplace representation of the weight by quadrature", laplace_group),
    ("contour", "integral-representation structure", contour_group),
    ("grid", "grid structure of the homogeneous emptiness probability", grid_group),
];

pub fn group_names() -> Vec<&'static str> {
    GROUPS.iter().map(|g| g.0).collect()
}

/// Runs the named groups (all when `only` is empty).
pub fn run(config: &SuiteConfig, only: &[String]) -> Result<Report> {
    for name in only {
        if !GROUPS.iter().any(|g| g.0 == name) {
            return Err(Error::InvalidParams(format!(
                "unknown check group `{name}`; known: {}",
                group_names().join(", ")
            )));
        }
    }
    let mut records = Vec::new();
    for (name, _, f) in GROUPS {
        if only.is_empty() || only.iter().any(|o| o == name) {
            records.extend(f(config)?);
        }
    }
    Ok(Report {
        version: REPORT_VERSION,
        precision: config.prec.digits(),
        records,
    })
}

pub fn run_group(config: &SuiteConfig, name: &str) -> Result<Vec<CheckRecord>> {
    Ok(run(config, &[name.to_string()])?.records)
}

pub fn numerics_group(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    const G: &str = "numerics";
    let p60 = Precision::new(60);
    let mut smp = Sampler::new(cfg.seed, p60);
    let mut worst = Worst::default();
    for _ in 0..5 {
        let draw = |smp: &mut Sampler| {
            let v: Vec<Scalar> = (0..16)
                .map(|_| p60.complex(smp.uniform(-1.0..1.0), smp.uniform(-1.0..1.0)))
                .collect();
            ScalarMatrix::new(4, 4, v)
        };
        let a = draw(&mut smp)?;
        let b = draw(&mut smp)?;
        let ab = a.try_mul(&b)?.determinant()?;
        worst.push(ab.rel_dev(&(a.determinant()? * b.determinant()?)));
    }
    let mut out = vec![record(G, "det-multiplicative", "det(AB) = det A det B", worst, 1e-50)];

    let prec = cfg.prec;
    let mut smp = Sampler::new(cfg.seed + 1, prec);
    let mut worst = Worst::default();
    for _ in 0..5 {
        let orders = [4, 3];
        let mut f = MultiSeries::zeros(prec, &orders);
        for flat in 0..f.len() {
            let idx = f.multi_index(flat);
            f.set_coeff(&idx, prec.real(smp.uniform(-1.0..1.0)));
        }
        f.set_coeff(&[0, 0], prec.real(1.5));
        let one = &f * &f.reciprocal()?;
        worst.push(one.add_constant(&-prec.one()).max_abs_coeff());
    }
    let tol = 10f64.powi(-(prec.digits() as i32) + 5);
    out.push(record(G, "series-reciprocal", "f·(1/f) = 1", worst, tol));

    let mut worst = Worst::default();
    let center = prec.real(0.7);
    let jet = MultiSeries::sine_jet(&center, 0, &[8]);
    let mut fact = prec.one();
    let half_pi = prec.pi().div_int(2);
    for k in 0..=8usize {
        if k > 0 {
            fact = fact.mul_int(k as i64);
        }
        let want = (&center + &half_pi.mul_int(k as i64)).sin() / &fact;
        worst.push(jet.coeffs()[k].abs_dev(&want));
    }
    out.push(record(G, "sine-jet", "sin(c+ε) Taylor coefficients", worst, cfg.tol(110)));
    Ok(out)
}

pub fn partition_group(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    const G: &str = "partition";
    let prec = cfg.prec;
    let mut smp = Sampler::new(cfg.seed + 10, prec);
    let (mut w_ik, mut w_qism) = (Worst::default(), Worst::default());
    for n in 1..=5 {
        for _ in 0..20 {
            let params = smp.inhom(n)?;
            let z = oracle::brute_z(&params)?;
            w_ik.push(z_ik_inhom(&params)?.value.rel_dev(&z));
            w_qism.push(qism::z_qism(&params)?.rel_dev(&z));
        }
    }
    let tol = cfg.tol(90);
    let mut out = vec![
        record(G, "z-oracle-vs-determinant", "inhomogeneous determinant formula", w_ik, tol),
        record(G, "z-oracle-vs-qism", "B-operator contraction", w_qism, tol),
    ];

    let ice = HomParams::ice_point(prec);
    let w = prec.int(3).sqrt().div_int(2);
    let mut worst = Worst::default();
    let mut warnings = Vec::new();
    for n in 1..=5 {
        let res = z_hom(&ice, n)?;
        warnings.extend(res.warnings.iter().map(|m| format!("N = {n}: {m}")));
        let ratio = res.value / w.powu((n * n) as u32);
        let count = oracle::count(n, oracle::Constraint::None)?;
        worst.push(ratio.abs_dev(&prec.int(count as i64)));
    }
    let mut rec = record(G, "ice-point-enumeration", "alternating sign matrix counts", worst, tol);
    rec.warnings = warnings;
    out.push(rec);

    let ff = HomParams::free_fermion_point(prec);
    let mut worst = Worst::default();
    for n in 1..=6 {
        worst.push(z_hom(&ff, n)?.value.abs_dev(&prec.one()));
    }
    out.push(record(G, "free-fermion-z", "Z_N = 1 at η = π/4, λ = π/2", worst, tol));
    Ok(out)
}

pub fn efp_inhom_group(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    const G: &str = "efp-inhom";
    let prec = cfg.prec;
    let mut smp = Sampler::new(cfg.seed + 20, prec);
    let (mut w_sum, mut w_qism, mut w_low) = (Worst::default(), Worst::default(), Worst::default());
    for n in 1..=5 {
        for _ in 0..10 {
            let params = smp.inhom(n)?;
            for r in 1..=n {
                for s in 1..=r {
                    let want = oracle::brute_efp(&params, r, s)?;
                    let sum = efp_inhom(&params, r, s)?;
                    w_sum.push(sum.rel_dev(&want));
                    w_qism.push(qism::efp_qism(&params, r, s)?.rel_dev(&want));
                    if s == 2 {
                        w_low.push(efp_inhom_s2(&params, r)?.rel_dev(&sum));
                    }
                    if s == 3 {
                        w_low.push(efp_inhom_s3(&params, r)?.rel_dev(&sum));
                    }
                }
            }
        }
    }
    let tol = cfg.tol(80);
    Ok(vec![
        record(G, "efp-oracle-vs-sum", "inhomogeneous multiple-sum formula", w_sum, tol),
        record(G, "efp-oracle-vs-qism", "operator definition of the emptiness probability", w_qism, tol),
        record(G, "efp-low-s-forms", "explicit s = 2, 3 forms", w_low, tol),
    ])
}

/// Ice point followed by two random disordered points.
fn homogeneous_points(cfg: &SuiteConfig) -> Result<Vec<HomParams>> {
    let mut smp = Sampler::new(cfg.seed + 30, cfg.prec);
    Ok(vec![HomParams::ice_point(cfg.prec), smp.hom()?, smp.hom()?])
}

pub fn homogeneous_group(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    const G: &str = "homogeneous";
    let prec = cfg.prec;
    let (mut w1, mut w2, mut w3, mut wo) = (Worst::default(), Worst::default(), Worst::default(), Worst::default());
    for hp in homogeneous_points(cfg)? {
        for n in 1..=6 {
            for r in 1..=n {
                for s in 1..=r.min(3) {
                    let want = efp_hom(&hp, n, r, s)?;
                    w1.push(efp_mir1(&hp, n, r, s)?.rel_dev(&want));
                    w2.push(efp_mir2(&hp, n, r, s)?.rel_dev(&want));
                    wo.push(efp_ortho(&hp, n, r, s)?.rel_dev(&want));
                    if s <= 2 && n <= 5 {
                        w3.push(efp_mir3(&hp, n, r, s)?.rel_dev(&want));
                    }
                }
            }
        }
    }
    let mut out = vec![
        record(G, "hom-vs-mir1", "first integral representation", w1, cfg.tol(60)),
        record(G, "hom-vs-mir2", "second integral representation", w2, cfg.tol(60)),
        record(G, "hom-vs-mir3", "partition-function integral representation", w3, cfg.tol(50)),
        record(G, "hom-vs-ortho", "orthogonal-polynomial determinant", wo, cfg.tol(60)),
    ];

    let ice = HomParams::ice_point(prec);
    let h = boundary_h(&ice, 3)?;
    let mut worst = Worst::default();
    let mut partial = prec.zero();
    for (r, k) in [(1usize, 2i64), (2, 5), (3, 7)] {
        let want = prec.ratio(k, 7);
        partial += &h[r - 1];
        worst.push(partial.rel_dev(&want));
        worst.push(efp_hom(&ice, 3, r, 1)?.rel_dev(&want));
        worst.push(efp_mir1(&ice, 3, r, 1)?.rel_dev(&want));
        worst.push(oracle::brute_efp(&InhomParams::homogeneous(&ice, 3), r, 1)?.rel_dev(&want));
    }
    out.push(record(G, "boundary-polarization", "F_3^{(r,1)} = 2/7, 5/7, 1 at the ice point", worst, cfg.tol(80)));
    Ok(out)
}

pub fn recurrences_group(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    const G: &str = "recurrences";
    let mut smp = Sampler::new(cfg.seed + 40, cfg.prec);
    let mut wz = Worst::default();
    for n in 3..=5 {
        let params = smp.inhom(n)?;
        wz.push(rec_z_rhs(&params)?.rel_dev(&z_ik_inhom(&params)?.value));
    }
    let mut we = Worst::default();
    let params = smp.inhom(4)?;
    for (r, s) in [(2, 1), (3, 2), (3, 3)] {
        let lhs = crate::efp::efp_inhom_unnormalized(&params, r, s)?;
        we.push(rec_efp_rhs(&params, r, s)?.rel_dev(&lhs));
    }
    let tol = cfg.tol(80);
    Ok(vec![
        record(G, "recurrence-z", "recurrence in N for the partition function", wz, tol),
        record(G, "recurrence-efp", "recurrence in N for the emptiness probability", we, tol),
    ])
}

pub fn identities_group(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    const G: &str = "identities";
    let mut smp = Sampler::new(cfg.seed + 50, cfg.prec);
    let (mut wg, mut wd) = (Worst::default(), Worst::default());
    for n in 2..=5 {
        let params = smp.inhom(n)?;
        for al in 0..n {
            let g = g_n(&params.lambdas[al], &params)?;
            wg.push(g_n_pole_sum(al, &params)?.rel_dev(&g));
        }
        let det = phi_matrix(&params)?.determinant()?;
        wd.push(det_reduction_rhs(&params)?.rel_dev(&det));
    }
    let tol = cfg.tol(90);
    Ok(vec![
        record(G, "g-pole-sum", "g(λ_α) as a sum over its poles", wg, tol),
        record(G, "cofactor-reduction", "det 𝓜 from the g-weighted cofactor expansion", wd, tol),
    ])
}

pub fn yang_baxter_group(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    const G: &str = "yang-baxter";
    let prec = cfg.prec;
    let mut smp = Sampler::new(cfg.seed + 60, prec);
    let (mut w_rtt, mut w_bb, mut w_ab, mut w_tri, mut w_key, mut w_e21) = (
        Worst::default(),
        Worst::default(),
        Worst::default(),
        Worst::default(),
        Worst::default(),
        Worst::default(),
    );
    for n in 3..=4 {
        let params = smp.inhom(n)?;
        let chain = Chain::from_params(&params)?;
        let (x, y) = (params.lambdas[0].clone(), params.lambdas[1].clone());
        for _ in 0..20 {
            let st = smp.state(n)?;
            for d in qism::rtt_deviations(&chain, &x, &y, &st, prec)? {
                w_rtt.push(d);
            }
            w_bb.push(qism::bb_deviation(&chain, &x, &y, &st));
            w_ab.push(qism::ab_deviation(&chain, &x, &y, &st, prec)?);
            w_tri.push(qism::triangular_deviation(&chain, &params.lambdas[..n - 1], &st));
        }
        for k in 2..=n - 1 {
            let (e21, key) = qism::key_deviations(&chain, &params.lambdas[..k], prec)?;
            w_e21.push(e21);
            w_key.push(key);
        }
    }
    let tol = cfg.tol(90);
    Ok(vec![
        record(G, "rtt-16-entries", "RTT relation, all 16 entries", w_rtt, tol),
        record(G, "bb-commute", "[B(x), B(y)] = 0", w_bb, tol),
        record(G, "ab-exchange", "A-B exchange relation", w_ab, tol),
        record(G, "two-site-triangular", "two-site monodromy triangular structure", w_tri, tol),
        record(G, "two-site-e21", "lower-left entry of the two-site monodromy", w_e21, tol),
        record(G, "key-relation", "key relation for the projected B-operators", w_key, tol),
    ])
}

pub fn orthopoly_group(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    const G: &str = "orthopoly";
    let prec = cfg.prec;
    let mut smp = Sampler::new(cfg.seed + 70, prec);
    let hp = smp.hom()?;
    let tol = cfg.tol(80);
    let table = moments(&hp, 16)?;
    let mut worst = Worst::default();
    for n in 1..=8 {
        let prod = table.h[..n].iter().fold(prec.one(), |acc, x| acc * x);
        worst.push(prod.rel_dev(&table.hankel_dets[n]));
    }
    let mut out = vec![record(G, "hankel-product", "D_n = h_0⋯h_{n−1}", worst, tol)];

    let xs = smp.real_points(2, -1.5..1.5);
    let (lhs, rhs) = bordered_hankel_sides(&table, 5, &xs)?;
    let mut worst = Worst::default();
    worst.push(lhs.rel_dev(&rhs));
    out.push(record(G, "bordered-hankel", "bordered Hankel determinant, n = 5, k = 2", worst, tol));

    let (mut w_claim, mut w_tah, mut w_pow) = (Worst::default(), Worst::default(), Worst::default());
    for n in 1..=8 {
        for (l, r) in claim_sides(&hp, n)? {
            w_claim.push(l.abs_dev(&r) / l.abs_f64().max(1e-300).max(r.abs_f64()));
        }
        let v = v_vector(&hp, n)?;
        let h = boundary_h(&hp, n)?;
        let a_pow = a_matrix_power(prec, n)?;
        let a_bin = a_matrix_binomial(prec, n);
        for i in 0..n {
            let mut acc = prec.zero();
            for j in 0..n {
                w_pow.push(a_pow.get(i, j).abs_dev(a_bin.get(i, j)));
                acc += a_bin.get(i, j) * &h[j];
            }
            if n % 2 == 0 {
                acc = -acc;
            }
            w_tah.push(acc.abs_dev(&v[i]) / v[i].abs_f64().max(1.0));
        }
    }
    out.push(record(G, "claim-residue", "operator identity as a residue, f = z^m", w_claim, tol));
    out.push(record(G, "v-equals-signed-ah", "v = (−1)^{N−1} 𝓐 h", w_tah, tol));
    out.push(record(G, "a-matrix-power", "𝓐 = (I − 𝓔)^{N−1}", w_pow, tol));

    let mut worst = Worst::default();
    for n in 1..=12 {
        worst.push(gen_h(&hp, n)?.eval(&prec.one()).abs_dev(&prec.one()));
    }
    out.push(record(G, "h-normalization", "h_N(1) = 1", worst, cfg.tol(90)));

    let mut worst = Worst::default();
    for n in 2..=8 {
        for s in 1..=3.min(n - 1) {
            let pts = smp.real_points(s, -1.0..0.8);
            let base = h_ns(&hp, n, &pts)?.value;
            let mut with_one = pts.clone();
            with_one.push(prec.one());
            worst.push(h_ns(&hp, n, &with_one)?.value.rel_dev(&base));
        }
    }
    out.push(record(G, "hns-reduction", "h_{N,s+1}(u, 1) = h_{N,s}(u)", worst, 1e-20));

    let ff = HomParams::free_fermion_point(prec);
    let mut worst = Worst::default();
    let half = prec.ratio(1, 2);
    for n in 1..=6 {
        let h = gen_h(&ff, n)?;
        for r in 0..n {
            let want = prec.binomial(n as u32 - 1, r as u32) * half.powu(n as u32 - 1);
            worst.push(h.coeff(r).abs_dev(&want));
        }
    }
    out.push(record(G, "free-fermion-h", "h_N(z) = ((1+z)/2)^{N−1} at the free-fermion point", worst, cfg.tol(90)));
    Ok(out)
}

pub fn bare_z_group(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    const G: &str = "bare-z";
    let prec = Precision::new(cfg.prec.digits().max(200));
    let mut smp = Sampler::new(cfg.seed + 80, prec);
    let delta = prec.from_float(&prec.epsilon_with_offset(prec.digits() as i32 - 20));
    let mut worst = Worst::default();
    for n in 1..=5 {
        let hp = smp.hom()?;
        let z0 = z_hom(&hp, n)?.value;
        for s in 1..=n.min(3) {
            let xis = smp.real_points(s, -0.15..0.15);
            let ratio = bare_z(&hp, n, &xis)?;
            // distinct parameters within 1e-20 of the target point
            let mut params = InhomParams::homogeneous(&hp, n);
            for i in 0..n {
                let shift = if i < s { xis[i].clone() } else { prec.zero() };
                params.lambdas[i] = &hp.lambda + &shift + delta.mul_int(i as i64 + 1);
                params.nus[i] = delta.mul_int(2 * i as i64 + 1);
            }
            let z = z_ik_inhom(&params)?.value;
            worst.push((z / &z0).rel_dev(&ratio));
        }
    }
    Ok(vec![record(G, "bare-z-vs-determinant", "bare partition function from h_{N,s}", worst, 1e-10)])
}

pub fn laplace_group(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    const G: &str = "laplace";
    let mut smp = Sampler::new(cfg.seed + 90, cfg.prec);
    let (mut w_phi, mut w_mom) = (Worst::default(), Worst::default());
    for _ in 0..5 {
        let hp = smp.hom()?;
        let derivs = hp.phi_derivatives(4)?;
        w_phi.push(laplace_moment(&hp, 0)?.rel_dev(&hp.phi()));
        for k in 1..=4u32 {
            let m = laplace_moment(&hp, k)?;
            w_mom.push(m.abs_dev(&derivs[k as usize]) / derivs[k as usize].abs_f64().max(1.0));
        }
    }
    Ok(vec![
        record(G, "laplace-phi", "φ(λ) as a Laplace integral", w_phi, 1e-15),
        record(G, "laplace-moments", "∂^n φ as moments of the Laplace weight, n ≤ 4", w_mom, 1e-12),
    ])
}

pub fn contour_group(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    const G: &str = "contour";
    let prec = cfg.prec;
    let mut smp = Sampler::new(cfg.seed + 100, prec);
    let hp = smp.hom()?;
    let mut worst = Worst::default();
    for s in 2..=3 {
        for _ in 0..3 {
            let z = smp.circle_points(s, 0.3);
            let (l, r) = asym_sides(&hp, &z)?;
            worst.push(l.rel_dev(&r));
        }
    }
    let mut out = vec![record(G, "antisymmetrization", "antisymmetric part of the double product", worst, cfg.tol(60))];

    let mut worst = Worst::default();
    for r in 2..=5 {
        let z = smp.circle_points(2, 0.4);
        let (l, rr) = determinant_hns_sides(&hp, 5, r, &z)?;
        worst.push(l.rel_dev(&rr));
    }
    out.push(record(G, "determinant-vs-hns", "integrand determinant through h_{N,s}", worst, cfg.tol(80)));

    let mut worst = Worst::default();
    for (n, r, s) in [(4, 2, 2), (5, 3, 2), (5, 4, 3)] {
        let a = efp_mir2_with_order(&hp, n, r, s, default_order(r, s))?;
        let b = efp_mir2_with_order(&hp, n, r, s, 2 * default_order(r, s))?;
        worst.push(a.abs_dev(&b));
    }
    let tol = 10f64.powi(-(prec.digits() as i32) + 15);
    out.push(record(G, "truncation-doubling", "doubling Taylor orders leaves values unchanged", worst, tol));

    let mut worst = Worst::default();
    for n in 2..=5 {
        for s in 1..=2 {
            let a = shifted_z_ratio_jet(&hp, n, s, 4, ZJetSource::Oracle)?;
            let b = shifted_z_ratio_jet(&hp, n, s, 4, ZJetSource::HnsOmega)?;
            worst.push(a.try_sub(&b)?.max_abs_coeff() / a.max_abs_coeff());
        }
    }
    out.push(record(G, "z-jet-sources", "shifted Z_N jets: enumeration versus h_{N,s}∘ω", worst, cfg.tol(80)));
    Ok(out)
}

pub fn grid_group(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    const G: &str = "grid";
    let prec = cfg.prec;
    let mut smp = Sampler::new(cfg.seed + 110, prec);
    let hp = smp.hom()?;
    let (mut w_struct, mut w_range) = (Worst::default(), Worst::default());
    for n in 1..=5 {
        for r in 1..=n {
            for s in 1..=3.min(n) {
                let v = efp_hom(&hp, n, r, s)?;
                if s > r {
                    w_struct.push(v.abs_f64());
                }
                if r == n {
                    w_struct.push(v.abs_dev(&prec.one()));
                }
                let x = v.re_f64();
                w_range.push((-x).max(x - 1.0).max(0.0) + v.im_f64().abs());
            }
        }
    }
    let tol = cfg.tol(80);
    Ok(vec![
        record(G, "grid-zero-and-one", "F = 0 for s > r and F = 1 for r = N", w_struct, tol),
        record(G, "grid-range", "0 ≤ F ≤ 1 and real", w_range, tol),
    ])
}
