use proptest::prelude::*;

use sixvertex::detform::z_ik_inhom;
use sixvertex::efp::efp_hom;
use sixvertex::model::{HomParams, InhomParams};
use sixvertex::numerics::{MultiSeries, Precision, Scalar, ScalarMatrix};
use sixvertex::orthopoly::boundary_h;
use sixvertex::sampling::{ETA_RANGE, LAMBDA_RANGE, NU_RANGE};

const DIGITS: u32 = 40;
const TOL: f64 = 1e-30;

fn prec() -> Precision {
    Precision::new(DIGITS)
}

fn series(orders: &[usize], coeffs: &[(f64, f64)]) -> MultiSeries {
    let p = prec();
    let vals = coeffs.iter().map(|&(re, im)| p.complex(re, im)).collect();
    MultiSeries::from_coeffs(orders, vals).unwrap()
}

fn coeff_vec(len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), len)
}

fn series_dev(a: &MultiSeries, b: &MultiSeries) -> f64 {
    a.try_sub(b).unwrap().max_abs_coeff()
}

fn matrix(n: usize, entries: &[(f64, f64)]) -> ScalarMatrix {
    let p = prec();
    ScalarMatrix::from_fn(n, n, |i, j| {
        let (re, im) = entries[i * n + j];
        p.complex(re, im)
    })
}

fn hom(lambda: f64, eta: f64) -> HomParams {
    let p = prec();
    HomParams::new(p, p.real(lambda), p.real(eta)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn series_ring_laws(f in coeff_vec(9), g in coeff_vec(9), h in coeff_vec(9)) {
        let o = [2, 2];
        let (f, g, h) = (series(&o, &f), series(&o, &g), series(&o, &h));
        let fg = f.try_mul(&g).unwrap();
        prop_assert!(series_dev(&fg, &g.try_mul(&f).unwrap()) < TOL);
        let left = fg.try_mul(&h).unwrap();
        let right = f.try_mul(&g.try_mul(&h).unwrap()).unwrap();
        prop_assert!(series_dev(&left, &right) < TOL);
        let dist = f.try_mul(&g.try_add(&h).unwrap()).unwrap();
        let sum = fg.try_add(&f.try_mul(&h).unwrap()).unwrap();
        prop_assert!(series_dev(&dist, &sum) < TOL);
    }

    #[test]
    fn series_reciprocal(c0 in 0.5..2.0f64, rest in coeff_vec(8)) {
        let mut coeffs = vec![(c0, 0.0)];
        coeffs.extend(rest);
        let f = series(&[2, 2], &coeffs);
        let prod = f.try_mul(&f.reciprocal().unwrap()).unwrap();
        let one = MultiSeries::constant(prec().one(), &[2, 2]);
        prop_assert!(series_dev(&prod, &one) < TOL);
    }

    #[test]
    fn determinant_laws(a in coeff_vec(16), b in coeff_vec(16), i in 0usize..4, j in 0usize..4) {
        prop_assume!(i != j);
        let (ma, mb) = (matrix(4, &a), matrix(4, &b));
        let da = ma.determinant().unwrap();
        let mut swapped = ma.clone();
        swapped.swap_rows(i, j);
        prop_assert!((swapped.determinant().unwrap() + &da).abs_f64() < TOL);
        let prod = ma.try_mul(&mb).unwrap().determinant().unwrap();
        prop_assert!(prod.abs_dev(&(da * mb.determinant().unwrap())) < TOL);
        prop_assert!(ma.transpose().determinant().unwrap().abs_dev(&ma.determinant().unwrap()) < TOL);
    }

    #[test]
    fn partition_function_is_symmetric(
        lambdas in prop::collection::vec(LAMBDA_RANGE, 3),
        nus in prop::collection::vec(NU_RANGE, 3),
        eta in ETA_RANGE,
        k in 1usize..3,
    ) {
        let p = prec();
        let z = z_ik_inhom(&InhomParams::from_f64(p, &lambdas, &nus, eta).unwrap()).unwrap().value;
        let mut l2 = lambdas.clone();
        l2.swap(0, k);
        let mut n2 = nus.clone();
        n2.swap(k, 0);
        let zl = z_ik_inhom(&InhomParams::from_f64(p, &l2, &nus, eta).unwrap()).unwrap().value;
        let zn = z_ik_inhom(&InhomParams::from_f64(p, &lambdas, &n2, eta).unwrap()).unwrap().value;
        prop_assert!(zl.rel_dev(&z) < 1e-25);
        prop_assert!(zn.rel_dev(&z) < 1e-25);
    }

    #[test]
    fn emptiness_probability_is_a_monotone_probability(lambda in LAMBDA_RANGE, eta in ETA_RANGE, n in 1usize..=5) {
        let hp = hom(lambda, eta);
        let s_max = n.min(3);
        let mut table = vec![vec![prec().zero(); s_max + 1]; n + 1];
        for r in 1..=n {
            for s in 1..=s_max {
                let f = efp_hom(&hp, n, r, s).unwrap();
                prop_assert!(f.im_f64().abs() < TOL);
                let v = f.re_f64();
                prop_assert!((-TOL..=1.0 + TOL).contains(&v), "F({r},{s}) = {v}");
                if s > r {
                    prop_assert!(f.is_zero());
                }
                table[r][s] = f;
            }
        }
        for r in 1..=n {
            for s in 1..s_max {
                prop_assert!(table[r][s + 1].re_f64() <= table[r][s].re_f64() + TOL);
            }
            if r < n {
                for s in 1..=s_max {
                    prop_assert!(table[r][s].re_f64() <= table[r + 1][s].re_f64() + TOL);
                }
            }
        }
        prop_assert!(table[n][1].abs_dev(&prec().one()) < TOL);
    }

    #[test]
    fn boundary_distribution_is_a_distribution(lambda in LAMBDA_RANGE, eta in ETA_RANGE, n in 1usize..=7) {
        let h = boundary_h(&hom(lambda, eta), n).unwrap();
        prop_assert_eq!(h.len(), n);
        let total: Scalar = h.iter().cloned().sum();
        prop_assert!(total.abs_dev(&prec().one()) < TOL);
        for x in &h {
            prop_assert!(x.re_f64() > -TOL && x.im_f64().abs() < TOL);
        }
    }

    #[test]
    fn decimal_output_round_trips(re in -1e6..1e6f64, digits in 10usize..30) {
        let p = prec();
        let x = p.real(re) / p.int(7);
        let back = p.parse_decimal(&x.format_decimal(digits)).unwrap();
        prop_assert!(back.rel_dev(&x) < 10f64.powi(1 - digits as i32));
    }
}
