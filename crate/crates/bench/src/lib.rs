//! Shared fixtures for the criterion benchmarks.

use matmul_core::{random_matrix, seeded_rng, Matrix, RandomEntry};

pub const SEED: u64 = 0x5eed;

/// Orders swept by default. Larger orders belong to `matmul bench`.
pub const ORDERS: [usize; 3] = [64, 128, 256];

pub const PRESETS: [&str; 6] =
    ["naive", "strassen-mod2", "winograd-mod2", "winograd-mod", "two-temp-mod", "in-place-mod"];

/// Seeded square operand pair.
pub fn operands<T: RandomEntry>(order: usize) -> (Matrix<T>, Matrix<T>) {
    let mut rng = seeded_rng(SEED ^ order as u64);
    (random_matrix(order, order, &mut rng), random_matrix(order, order, &mut rng))
}
