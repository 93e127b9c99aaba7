//! Operation counts by recurrence, independent of the kernels themselves.

use crate::error::{MatmulError, Result};
use crate::hybrid::{Kernel, VariantSpec};
use crate::kernels::BasePolicy;

/// Recursive products and block additions per level.
fn per_level(kernel: Kernel, knuth_extra_call: bool) -> (u64, u64) {
    match kernel {
        Kernel::Naive => unreachable!("naive is not recursive"),
        Kernel::Strassen => (7, 18),
        Kernel::WinogradKnuth if knuth_extra_call => (8, 15),
        Kernel::WinogradKnuth | Kernel::WinogradBlock | Kernel::TwoTemp | Kernel::InPlace => (7, 15),
    }
}

/// Auxiliary buffers allocated by one non-base call.
fn buffers_per_call(kernel: Kernel, knuth_extra_call: bool) -> u64 {
    match kernel {
        Kernel::Naive | Kernel::InPlace => 0,
        // 7 products, 10 operand sums
        Kernel::Strassen => 17,
        // 8 operand sums, 7 products, w and w + u
        Kernel::WinogradKnuth => 17 + knuth_extra_call as u64,
        // S1..S4, T1..T4, P1..P7, U2..U4
        Kernel::WinogradBlock => 18,
        // X and Y
        Kernel::TwoTemp => 2,
    }
}

fn naive_ops(n: u64) -> (u64, u64) {
    (n * n * n, n * n * (n - 1))
}

/// Cost of a fully recursive product with `(p, a)` per level, down to 1x1.
fn scalar_recurrence(n: u64, (p, a): (u64, u64)) -> (u64, u64) {
    if n == 1 {
        return (1, 0);
    }
    let h = n / 2;
    let (m, s) = scalar_recurrence(h, (p, a));
    (p * m, p * s + a * h * h)
}

fn is_leaf(policy: BasePolicy, n: usize) -> bool {
    n == 1
        || match policy {
            BasePolicy::ScalarOnly => false,
            BasePolicy::UnrolledUpTo(o) | BasePolicy::NaiveCutoff(o) => n <= o,
        }
}

fn check(kernel: Kernel, policy: BasePolicy, order: usize) -> Result<()> {
    policy.validate()?;
    if order == 0 || (kernel.is_recursive() && !order.is_power_of_two()) {
        return Err(MatmulError::Parameter(format!("{kernel:?} needs a power-of-two order, got {order}")));
    }
    Ok(())
}

fn ops_rec(kernel: Kernel, extra: bool, policy: BasePolicy, n: usize) -> (u64, u64) {
    if is_leaf(policy, n) {
        let n = n as u64;
        return match policy {
            _ if n == 1 => (1, 0),
            BasePolicy::NaiveCutoff(_) => naive_ops(n),
            // unrolled leaves run the Strassen or the Winograd expansion
            _ => {
                let family = if kernel == Kernel::Strassen { (7, 18) } else { (7, 15) };
                scalar_recurrence(n, family)
            }
        };
    }
    let (p, a) = per_level(kernel, extra);
    let h = n / 2;
    let (m, s) = ops_rec(kernel, extra, policy, h);
    let h = h as u64;
    (p * m, p * s + a * h * h)
}

/// Predicted `(mults, adds)` for one product of square order `order`.
///
/// * `ScalarOnly` Strassen: `(7^k, 6 (7^k - 4^k))` for `order = 2^k`.
/// * `ScalarOnly` Winograd forms and schedules: `(7^k, 5 (7^k - 4^k))`.
/// * `NaiveCutoff(t)`: `d` levels of recursion down to leaf order
///   `s = order / 2^d <= t`, each leaf costing `s^3` multiplications.
/// * `UnrolledUpTo` leaves cost the same as their recursive expansion.
pub fn predicted_ops(kernel: Kernel, policy: BasePolicy, order: usize) -> Result<(u64, u64)> {
    predicted_ops_for(&VariantSpec::new(kernel, policy), order)
}

pub fn predicted_ops_for(spec: &VariantSpec, order: usize) -> Result<(u64, u64)> {
    check(spec.kernel, spec.base, order)?;
    if spec.kernel == Kernel::Naive {
        return Ok(naive_ops(order as u64));
    }
    Ok(ops_rec(spec.kernel, spec.knuth_extra_call, spec.base, order))
}

/// Number of non-base recursive calls in one product of order `order`.
pub fn recursion_calls(spec: &VariantSpec, order: usize) -> Result<u64> {
    check(spec.kernel, spec.base, order)?;
    if spec.kernel == Kernel::Naive {
        return Ok(0);
    }
    let (p, _) = per_level(spec.kernel, spec.knuth_extra_call);
    let mut n = order;
    let (mut calls, mut width) = (0u64, 1u64);
    while !is_leaf(spec.base, n) {
        calls += width;
        width *= p;
        n /= 2;
    }
    Ok(calls)
}

/// Predicted auxiliary buffer allocation events.
pub fn predicted_temp_buffers(spec: &VariantSpec, order: usize) -> Result<u64> {
    Ok(recursion_calls(spec, order)? * buffers_per_call(spec.kernel, spec.knuth_extra_call))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_two_per_level_claims() {
        assert_eq!(predicted_ops(Kernel::Strassen, BasePolicy::ScalarOnly, 2).unwrap(), (7, 18));
        assert_eq!(predicted_ops(Kernel::WinogradBlock, BasePolicy::ScalarOnly, 2).unwrap(), (7, 15));
    }

    #[test]
    fn strassen_order_four() {
        // a(4) = 7 a(2) + 18 * 2^2 = 7*18 + 72
        assert_eq!(predicted_ops(Kernel::Strassen, BasePolicy::ScalarOnly, 4).unwrap(), (49, 198));
    }

    #[test]
    fn closed_forms() {
        for k in 0..=10u32 {
            let n = 1usize << k;
            let (p7, p4) = (7u64.pow(k), 4u64.pow(k));
            assert_eq!(
                predicted_ops(Kernel::Strassen, BasePolicy::ScalarOnly, n).unwrap(),
                (p7, 6 * (p7 - p4))
            );
            for kern in [Kernel::WinogradKnuth, Kernel::WinogradBlock, Kernel::TwoTemp, Kernel::InPlace] {
                assert_eq!(predicted_ops(kern, BasePolicy::ScalarOnly, n).unwrap(), (p7, 5 * (p7 - p4)));
                assert_eq!(predicted_ops(kern, BasePolicy::UnrolledUpTo(8), n).unwrap(), (p7, 5 * (p7 - p4)));
            }
            // total = 7 n^log2(7) - 6 n^2
            let (m, a) = predicted_ops(Kernel::Strassen, BasePolicy::ScalarOnly, n).unwrap();
            assert_eq!(m + a, 7 * p7 - 6 * (n as u64).pow(2));
        }
    }

    #[test]
    fn naive_cutoff_recurrence() {
        let (m, _) = predicted_ops(Kernel::WinogradBlock, BasePolicy::NaiveCutoff(12), 32).unwrap();
        assert_eq!(m, 49 * 512);
        let (m, _) = predicted_ops(Kernel::Strassen, BasePolicy::NaiveCutoff(12), 1024).unwrap();
        assert_eq!(m, 7u64.pow(7) * 512);
        // leaf at the top: plain naive
        assert_eq!(predicted_ops(Kernel::Strassen, BasePolicy::NaiveCutoff(12), 8).unwrap(), (512, 64 * 7));
    }

    #[test]
    fn buffers() {
        let spec = VariantSpec::new(Kernel::TwoTemp, BasePolicy::ScalarOnly);
        for k in 0..8u32 {
            let calls = (7u64.pow(k) - 1) / 6;
            assert_eq!(predicted_temp_buffers(&spec, 1 << k).unwrap(), 2 * calls);
        }
        let spec = VariantSpec::new(Kernel::InPlace, BasePolicy::ScalarOnly);
        assert_eq!(predicted_temp_buffers(&spec, 64).unwrap(), 0);
    }

    #[test]
    fn bad_parameters() {
        assert!(predicted_ops(Kernel::Strassen, BasePolicy::ScalarOnly, 12).is_err());
        assert!(predicted_ops(Kernel::Strassen, BasePolicy::UnrolledUpTo(16), 64).is_err());
        assert!(predicted_ops(Kernel::Strassen, BasePolicy::NaiveCutoff(0), 64).is_err());
        assert!(predicted_ops(Kernel::Naive, BasePolicy::ScalarOnly, 12).is_ok());
    }
}
