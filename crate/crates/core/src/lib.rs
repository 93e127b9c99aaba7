//! Dense matrix multiplication by the naive method, Strassen's algorithm and
//! the Strassen-Winograd variant, together with:
//!
//! * two memory-scheduled Winograd kernels (two temporaries, fully in place)
//!   whose step order is stored as data and machine-checked,
//! * base-case policies (unrolled small kernels, naive cutoff),
//! * zero padding for arbitrary shapes,
//! * deterministic operation and buffer accounting ([`OpCounter`]) and a
//!   small benchmark driver.
//!
//! Every kernel is generic over a [`Scalar`] ring, so the same code runs on
//! exact integers (bit-exact oracle checks) and on `f64`.

pub mod error;
pub mod hybrid;
pub mod kernels;
pub mod matrix;
pub mod metrics;
pub mod schedules;

pub use error::{MatmulError, Result};
pub use hybrid::{
    cutoff_naive_preferred, multiply, multiply_clobbering, multiply_traced, preset, variant_catalog, Kernel,
    Preset, VariantSpec, DEFAULT_CUTOFF,
};
pub use kernels::{
    naive_mul, strassen_mul, unrolled_base, unrolled_strassen_base, winograd_block_mul, winograd_knuth_mul,
    winograd_knuth_mul_with, BasePolicy,
};
pub use matrix::{
    block_add, max_abs_diff, pad_to_pow2, read_matrix, unpad, write_matrix, Matrix, MatrixView,
    MatrixViewMut, Operand, Scalar, Sign,
};
pub use metrics::{
    bench_run, predicted_ops, predicted_ops_for, predicted_temp_buffers, random_matrix, seeded_rng,
    BenchRecord, OpCounter, RandomEntry,
};
pub use schedules::{
    in_place_winograd, schedule_table, two_temp_winograd, validate_schedule, Legality, Loc, ScheduleKind,
    ScheduleStep, Slot, StepOp, Sym, Violation,
};
