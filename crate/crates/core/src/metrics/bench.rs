use std::time::Instant;

use serde::Serialize;

use super::{random_matrix, seeded_rng, OpCounter, RandomEntry};
use crate::error::{MatmulError, Result};
use crate::hybrid::{multiply, multiply_clobbering, Kernel, Preset};
use crate::matrix::Matrix;

/// One measured point: a preset at one order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub algo: String,
    pub order: usize,
    pub reps: usize,
    #[serde(rename = "min_time_s")]
    pub min_time: f64,
    #[serde(rename = "median_time_s")]
    pub median_time: f64,
    pub mults: u64,
    pub adds: u64,
    pub temp_buffers: u64,
    pub peak_live_elements: u64,
    pub seed: u64,
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

fn timed_run<T: RandomEntry>(preset: &Preset, a: &Matrix<T>, b: &Matrix<T>) -> Result<(f64, OpCounter)> {
    let mut counter = OpCounter::new();
    let secs = if preset.spec.kernel == Kernel::InPlace && a.is_square_pow2() && a.shape() == b.shape() {
        // Copies are made outside the timed region; the kernel then owns them.
        let (mut ac, mut bc) = (a.clone(), b.clone());
        let t = Instant::now();
        std::hint::black_box(multiply_clobbering(&mut ac, &mut bc, preset.spec.base, &mut counter)?);
        t.elapsed().as_secs_f64()
    } else {
        let t = Instant::now();
        std::hint::black_box(multiply(a, b, &preset.spec, &mut counter)?);
        t.elapsed().as_secs_f64()
    };
    Ok((secs, counter))
}

/// Times `preset` on seeded random `order x order` inputs, `reps` times per
/// order. Every repetition is instrumented and must report identical counts.
pub fn bench_run<T: RandomEntry>(
    preset: &Preset,
    orders: &[usize],
    reps: usize,
    seed: u64,
) -> Result<Vec<BenchRecord>> {
    if reps == 0 {
        return Err(MatmulError::Parameter("reps must be at least 1".into()));
    }
    let mut records = Vec::with_capacity(orders.len());
    for &order in orders {
        let mut rng = seeded_rng(seed);
        let a: Matrix<T> = random_matrix(order, order, &mut rng);
        let b: Matrix<T> = random_matrix(order, order, &mut rng);
        let mut times = Vec::with_capacity(reps);
        let mut first: Option<OpCounter> = None;
        for _ in 0..reps {
            let (secs, counter) = timed_run(preset, &a, &b)?;
            match &first {
                None => first = Some(counter),
                Some(f) if f.totals() != counter.totals() => {
                    return Err(MatmulError::Nondeterministic(format!(
                        "{} at order {order}: {:?} vs {:?}",
                        preset.name,
                        f.totals(),
                        counter.totals()
                    )))
                }
                Some(_) => {}
            }
            times.push(secs);
        }
        times.sort_by(f64::total_cmp);
        let c = first.expect("reps >= 1");
        records.push(BenchRecord {
            algo: preset.name.to_string(),
            order,
            reps,
            min_time: times[0],
            median_time: median(&times),
            mults: c.mults(),
            adds: c.adds(),
            temp_buffers: c.temp_buffers(),
            peak_live_elements: c.peak_live_elements(),
            seed,
        });
    }
    Ok(records)
}
