//! Seeded draws of disordered-regime parameters, points and states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::model::{HomParams, InhomParams};
use crate::numerics::{Precision, Scalar};
use crate::qism::QuantumState;

pub const ETA_RANGE: std::ops::Range<f64> = 0.2..0.6;
pub const LAMBDA_RANGE: std::ops::Range<f64> = 1.2..1.9;
pub const NU_RANGE: std::ops::Range<f64> = -0.2..0.2;

pub struct Sampler {
    rng: ChaCha8Rng,
    prec: Precision,
}

impl Sampler {
    pub fn new(seed: u64, prec: Precision) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            prec,
        }
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn uniform(&mut self, range: std::ops::Range<f64>) -> f64 {
        self.rng.gen_range(range)
    }

    pub fn inhom(&mut self, n: usize) -> Result<InhomParams> {
        let eta = self.uniform(ETA_RANGE);
        let lambdas: Vec<f64> = (0..n).map(|_| self.uniform(LAMBDA_RANGE)).collect();
        let nus: Vec<f64> = (0..n).map(|_| self.uniform(NU_RANGE)).collect();
        InhomParams::from_f64(self.prec, &lambdas, &nus, eta)
    }

    pub fn hom(&mut self) -> Result<HomParams> {
        let eta = self.uniform(ETA_RANGE);
        let lambda = self.uniform(LAMBDA_RANGE);
        HomParams::new(self.prec, self.prec.real(lambda), self.prec.real(eta))
    }

    pub fn real_points(&mut self, k: usize, range: std::ops::Range<f64>) -> Vec<Scalar> {
        (0..k).map(|_| self.prec.real(self.rng.gen_range(range.clone()))).collect()
    }

    /// Points at random angles on the circle `|z| = radius`.
    pub fn circle_points(&mut self, k: usize, radius: f64) -> Vec<Scalar> {
        (0..k)
            .map(|_| {
                let th: f64 = self.rng.gen_range(0.0..std::f64::consts::TAU);
                self.prec.complex(radius * th.cos(), radius * th.sin())
            })
            .collect()
    }

    pub fn state(&mut self, n_sites: usize) -> Result<QuantumState> {
        QuantumState::random(self.prec, n_sites, &mut self.rng)
    }
}
