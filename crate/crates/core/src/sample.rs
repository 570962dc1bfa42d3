//! Seeded generation of dense random elements and matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{CdElement, Element, Signature};
use crate::matrix::Mat2;
use crate::scalar::Rational;

/// Default seed for reproducible campaigns.
pub const DEFAULT_SEED: u64 = 0;

/// Default number of random samples per campaign.
pub const DEFAULT_SAMPLES: usize = 1000;

/// Deterministic source of random algebra elements.
///
/// Coordinates are small rationals `n/d` with `|n| <= 6` and `1 <= d <= 4`,
/// which keeps exact products cheap while exercising non-integer values.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Independent stream for item `index` of a campaign seeded with `seed`;
    /// lets parallel workers draw the same values as a serial run.
    pub fn for_item(seed: u64, index: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64 + 1);
        Sampler { rng }
    }

    pub fn rational(&mut self) -> Rational {
        let n: i64 = self.rng.gen_range(-6..=6);
        let d: i64 = self.rng.gen_range(1..=4);
        Rational::new(n, d).expect("nonzero denominator")
    }

    /// Dense element; every coordinate is drawn independently.
    pub fn element(&mut self, signature: &Signature) -> CdElement {
        let coeffs = (0..signature.dim()).map(|_| self.rational()).collect();
        Element::new(signature.clone(), coeffs).expect("length matches signature")
    }

    /// Dense element with nonzero norm.
    pub fn element_with_nonzero_norm(&mut self, signature: &Signature) -> CdElement {
        loop {
            let x = self.element(signature);
            if !num_traits::Zero::is_zero(&x.norm()) {
                return x;
            }
        }
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }

    pub fn matrix(&mut self, signature: &Signature) -> Mat2 {
        Mat2::new(self.element(signature), self.element(signature), self.element(signature), self.element(signature))
            .expect("entries share a signature")
    }
}
