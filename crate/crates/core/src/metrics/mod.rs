//! Operation accounting, closed-form cost predictions and the benchmark
//! driver.

mod bench;
mod counter;
mod predict;
mod random;

pub use bench::{bench_run, BenchRecord};
pub use counter::OpCounter;
pub use predict::{predicted_ops, predicted_ops_for, predicted_temp_buffers, recursion_calls};
pub use random::{random_matrix, seeded_rng, RandomEntry};
