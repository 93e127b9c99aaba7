use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{Matrix, Scalar};

/// Scalars that can be drawn for benchmark and oracle inputs.
pub trait RandomEntry: Scalar {
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

/// Integers are uniform on [-8, 8], so products stay exact.
impl RandomEntry for i64 {
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen_range(-8..=8)
    }
}

impl RandomEntry for i32 {
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen_range(-8..=8)
    }
}

/// Reals are uniform on [-1, 1].
impl RandomEntry for f64 {
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen_range(-1.0..=1.0)
    }
}

impl RandomEntry for f32 {
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen_range(-1.0..=1.0)
    }
}

/// ChaCha8 seeded from a `u64`; the stream is stable across platforms and
/// `rand_chacha` patch releases.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix<T: RandomEntry, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |_, _| T::sample(rng))
}
