//! Seeded sample generation.
//!
//! Every sample gets its own generator derived from `(seed, property, index)`,
//! so a sample's value does not depend on how work is scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cayley_dickson::CdElement;
use crate::heisenberg::{HeisenbergElement, HeisenbergGroup};
use crate::scalar::Rational;
use crate::unitriangular::UniTriMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampler {
    pub seed: u64,
    /// Largest numerator and denominator magnitude.
    pub magnitude: u32,
}

impl Sampler {
    pub fn new(seed: u64, magnitude: u32) -> Self {
        Sampler {
            seed,
            magnitude: magnitude.max(1),
        }
    }

    /// The generator for sample `index` of the stream named `tag`.
    pub fn rng(&self, tag: &str, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(fnv1a(tag) ^ index as u64);
        rng
    }

    /// Uniform numerator in `−M..=M` over uniform denominator in `1..=M`.
    pub fn rational<R: Rng + ?Sized>(&self, rng: &mut R) -> Rational {
        let m = i64::from(self.magnitude);
        Rational::new(rng.random_range(-m..=m), rng.random_range(1..=m)).expect("positive denominator")
    }

    pub fn nonzero_rational<R: Rng + ?Sized>(&self, rng: &mut R) -> Rational {
        loop {
            let q = self.rational(rng);
            if !q.is_zero() {
                return q;
            }
        }
    }

    pub fn cd<R: Rng + ?Sized>(&self, rng: &mut R, level: u32) -> CdElement {
        let coeffs = (0..1usize << level).map(|_| self.rational(rng)).collect();
        CdElement::new(level, coeffs).expect("valid shape")
    }

    pub fn nonzero_cd<R: Rng + ?Sized>(&self, rng: &mut R, level: u32) -> CdElement {
        loop {
            let x = self.cd(rng, level);
            if !x.is_zero() {
                return x;
            }
        }
    }

    pub fn vector<R: Rng + ?Sized>(&self, rng: &mut R, level: u32, dim: usize) -> Vec<CdElement> {
        (0..dim).map(|_| self.cd(rng, level)).collect()
    }

    /// A vector with at least one nonzero coordinate; other coordinates are
    /// zero with probability one half.
    pub fn nonzero_vector<R: Rng + ?Sized>(&self, rng: &mut R, level: u32, dim: usize) -> Vec<CdElement> {
        let anchor = rng.random_range(0..dim);
        (0..dim)
            .map(|k| {
                if k == anchor {
                    self.nonzero_cd(rng, level)
                } else if rng.random_bool(0.5) {
                    CdElement::zero(level)
                } else {
                    self.cd(rng, level)
                }
            })
            .collect()
    }

    pub fn heisenberg<R: Rng + ?Sized>(&self, rng: &mut R, group: &HeisenbergGroup) -> HeisenbergElement {
        let (level, dim) = (group.w.scalar_level, group.w.dim);
        HeisenbergElement {
            a: self.cd(rng, level),
            x: self.vector(rng, level, dim),
            f: self.vector(rng, level, dim),
        }
    }

    /// Random unitriangular matrix; rows `1 … skip_rows` are left as identity rows.
    pub fn unitriangular<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        size: usize,
        level: u32,
        skip_rows: usize,
    ) -> UniTriMatrix {
        let mut m = UniTriMatrix::identity(size, level);
        for i in skip_rows + 1..=size {
            for j in i + 1..=size {
                m.set(i, j, self.cd(rng, level)).expect("upper entry");
            }
        }
        m
    }
}

fn fnv1a(tag: &str) -> u64 {
    tag.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    }) << 20
}
