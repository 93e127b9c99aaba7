use super::{add_into, base_case, check_square_pow2, split, split_mut, BasePolicy, Scratch, UnrolledForm};
use crate::error::Result;
use crate::matrix::{Matrix, MatrixView, MatrixViewMut, Scalar, Sign};
use crate::metrics::OpCounter;

/// `c = a * b` by the Winograd variant in Knuth's form.
///
/// With the left operand blocked as `[[a, b], [c, d]]` and the right as
/// `[[A, C], [B, D]]`:
///
/// ```text
/// u = (c - a)(C - D)
/// v = (c + d)(C - A)
/// w = aA + (c + d - a)(A + D - C)
///
/// [ aA + bB                  w + v + (a + b - c - d)D ]
/// [ w + u + d(B + C - A - D) w + u + v                ]
/// ```
///
/// The product `aA` is formed once and shared, giving seven recursive
/// products and 15 block additions per level.
pub fn winograd_knuth_mul<T: Scalar>(
    a: MatrixView<'_, T>,
    b: MatrixView<'_, T>,
    c: MatrixViewMut<'_, T>,
    policy: BasePolicy,
    counter: &mut OpCounter,
) -> Result<()> {
    winograd_knuth_mul_with(a, b, c, policy, false, counter)
}

/// As [`winograd_knuth_mul`]; with `extra_call` the product `aA` is
/// recomputed for `w` instead of shared, i.e. eight recursive products per
/// level.
pub fn winograd_knuth_mul_with<T: Scalar>(
    a: MatrixView<'_, T>,
    b: MatrixView<'_, T>,
    c: MatrixViewMut<'_, T>,
    policy: BasePolicy,
    extra_call: bool,
    counter: &mut OpCounter,
) -> Result<()> {
    policy.validate()?;
    check_square_pow2(a, b, &c)?;
    knuth_rec(a, b, c, policy, extra_call, counter);
    Ok(())
}

pub(crate) fn knuth_rec<T: Scalar>(
    left: MatrixView<'_, T>,
    right: MatrixView<'_, T>,
    mut out: MatrixViewMut<'_, T>,
    policy: BasePolicy,
    extra_call: bool,
    counter: &mut OpCounter,
) {
    if base_case(left, right, &mut out, policy, UnrolledForm::Winograd, counter) {
        return;
    }
    let h = left.rows() / 2;
    let [a, b, c, d] = split(left);
    let [big_a, big_c, big_b, big_d] = split(right);
    let [c11, c12, c21, c22] = split_mut(out);
    let mut s = Scratch::new();

    let mul = |x: MatrixView<'_, T>, y: MatrixView<'_, T>, s: &mut Scratch, counter: &mut OpCounter| {
        let mut p = s.buffer(h, counter);
        knuth_rec(x, y, p.view_mut(), policy, extra_call, counter);
        p
    };

    let c_minus_a = s.combine(c, a, Sign::Minus, counter);
    let cc_minus_dd = s.combine(big_c, big_d, Sign::Minus, counter);
    let c_plus_d = s.combine(c, d, Sign::Plus, counter);
    let cc_minus_aa = s.combine(big_c, big_a, Sign::Minus, counter);
    // c + d - a and A + D - C
    let s1 = s.combine(c_plus_d.view(), a, Sign::Minus, counter);
    let t1 = s.combine(big_d, cc_minus_aa.view(), Sign::Minus, counter);
    // a + b - c - d and B + C - A - D
    let s2 = s.combine(b, s1.view(), Sign::Minus, counter);
    let t2 = s.combine(big_b, t1.view(), Sign::Minus, counter);

    let a_aa = mul(a, big_a, &mut s, counter);
    let b_bb = mul(b, big_b, &mut s, counter);
    let u = mul(c_minus_a.view(), cc_minus_dd.view(), &mut s, counter);
    let v = mul(c_plus_d.view(), cc_minus_aa.view(), &mut s, counter);
    let p5 = mul(s1.view(), t1.view(), &mut s, counter);
    let p6 = mul(s2.view(), big_d, &mut s, counter);
    let p7 = mul(d, t2.view(), &mut s, counter);

    let w = if extra_call {
        let again = mul(a, big_a, &mut s, counter);
        s.combine(again.view(), p5.view(), Sign::Plus, counter)
    } else {
        s.combine(a_aa.view(), p5.view(), Sign::Plus, counter)
    };
    let wu = s.combine(w.view(), u.view(), Sign::Plus, counter);

    add_into(a_aa.view(), b_bb.view(), c11, Sign::Plus, counter);
    let mut c12 = c12;
    add_into(w.view(), v.view(), c12.rb_mut(), Sign::Plus, counter);
    super::accumulate(p6.view(), c12, Sign::Plus, counter);
    add_into(wu.view(), p7.view(), c21, Sign::Plus, counter);
    add_into(wu.view(), v.view(), c22, Sign::Plus, counter);

    s.close(counter);
}

/// `c = a * b` by the 22-operation block form of the Winograd variant:
///
/// ```text
/// S1 = A21 + A22   T1 = B12 - B11   P1 = A11 B11   U1 = P1 + P2
/// S2 = S1 - A11    T2 = B22 - T1    P2 = A12 B21   U2 = P1 + P6
/// S3 = A11 - A21   T3 = B22 - B12   P3 = S4 B22    U3 = U2 + P7
/// S4 = A12 - S2    T4 = T2 - B21    P4 = A22 T4    U4 = U2 + P5
///                                   P5 = S1 T1     U5 = U4 + P3
///                                   P6 = S2 T2     U6 = U3 - P4
///                                   P7 = S3 T3     U7 = U3 + P5
///
/// C = [[U1, U5], [U6, U7]]
/// ```
pub fn winograd_block_mul<T: Scalar>(
    a: MatrixView<'_, T>,
    b: MatrixView<'_, T>,
    c: MatrixViewMut<'_, T>,
    policy: BasePolicy,
    counter: &mut OpCounter,
) -> Result<()> {
    policy.validate()?;
    check_square_pow2(a, b, &c)?;
    block_rec(a, b, c, policy, counter);
    Ok(())
}

pub(crate) fn block_rec<T: Scalar>(
    a: MatrixView<'_, T>,
    b: MatrixView<'_, T>,
    mut c: MatrixViewMut<'_, T>,
    policy: BasePolicy,
    counter: &mut OpCounter,
) {
    if base_case(a, b, &mut c, policy, UnrolledForm::Winograd, counter) {
        return;
    }
    let h = a.rows() / 2;
    let [a11, a12, a21, a22] = split(a);
    let [b11, b12, b21, b22] = split(b);
    let [c11, c12, c21, c22] = split_mut(c);
    let mut s = Scratch::new();

    let s1 = s.combine(a21, a22, Sign::Plus, counter);
    let s2 = s.combine(s1.view(), a11, Sign::Minus, counter);
    let s3 = s.combine(a11, a21, Sign::Minus, counter);
    let t1 = s.combine(b12, b11, Sign::Minus, counter);
    let t2 = s.combine(b22, t1.view(), Sign::Minus, counter);
    let t3 = s.combine(b22, b12, Sign::Minus, counter);
    let s4 = s.combine(a12, s2.view(), Sign::Minus, counter);
    let t4 = s.combine(t2.view(), b21, Sign::Minus, counter);

    let mut mul = |x: MatrixView<'_, T>, y: MatrixView<'_, T>, counter: &mut OpCounter| -> Matrix<T> {
        let mut p = s.buffer(h, counter);
        block_rec(x, y, p.view_mut(), policy, counter);
        p
    };
    let p1 = mul(a11, b11, counter);
    let p2 = mul(a12, b21, counter);
    let p3 = mul(s4.view(), b22, counter);
    let p4 = mul(a22, t4.view(), counter);
    let p5 = mul(s1.view(), t1.view(), counter);
    let p6 = mul(s2.view(), t2.view(), counter);
    let p7 = mul(s3.view(), t3.view(), counter);

    add_into(p1.view(), p2.view(), c11, Sign::Plus, counter);
    let u2 = s.combine(p1.view(), p6.view(), Sign::Plus, counter);
    let u3 = s.combine(u2.view(), p7.view(), Sign::Plus, counter);
    let u4 = s.combine(u2.view(), p5.view(), Sign::Plus, counter);
    add_into(u4.view(), p3.view(), c12, Sign::Plus, counter);
    add_into(u3.view(), p4.view(), c21, Sign::Minus, counter);
    add_into(u3.view(), p5.view(), c22, Sign::Plus, counter);

    s.close(counter);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::naive_mul;

    fn pair(n: usize, seed: u64) -> (Matrix<i64>, Matrix<i64>) {
        let mut x = seed;
        let mut next = move || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 33) % 17) as i64 - 8
        };
        let a = Matrix::from_fn(n, n, |_, _| next());
        let b = Matrix::from_fn(n, n, |_, _| next());
        (a, b)
    }

    fn naive(a: &Matrix<i64>, b: &Matrix<i64>) -> Matrix<i64> {
        let mut c = Matrix::zeros(a.rows(), b.cols());
        naive_mul(a.view(), b.view(), c.view_mut(), &mut OpCounter::new()).unwrap();
        c
    }

    fn knuth(a: &Matrix<i64>, b: &Matrix<i64>, extra: bool) -> (Matrix<i64>, OpCounter) {
        let mut c = Matrix::zeros(a.rows(), a.rows());
        let mut cnt = OpCounter::new();
        winograd_knuth_mul_with(a.view(), b.view(), c.view_mut(), BasePolicy::ScalarOnly, extra, &mut cnt)
            .unwrap();
        (c, cnt)
    }

    fn block(a: &Matrix<i64>, b: &Matrix<i64>, policy: BasePolicy) -> (Matrix<i64>, OpCounter) {
        let mut c = Matrix::zeros(a.rows(), a.rows());
        let mut cnt = OpCounter::new();
        winograd_block_mul(a.view(), b.view(), c.view_mut(), policy, &mut cnt).unwrap();
        (c, cnt)
    }

    #[test]
    fn knuth_order_two() {
        let a = Matrix::from_rows(&[[1i64, 2], [3, 4]]).unwrap();
        let b = Matrix::from_rows(&[[5i64, 6], [7, 8]]).unwrap();
        let (c, cnt) = knuth(&a, &b, false);
        assert_eq!(c, Matrix::from_rows(&[[19, 22], [43, 50]]).unwrap());
        assert_eq!((cnt.mults(), cnt.adds()), (7, 15));
        assert_eq!(knuth(&a, &Matrix::identity(2), false).0, a);
    }

    #[test]
    fn knuth_matches_naive() {
        for (n, seed) in [(4, 1), (8, 2), (16, 3)] {
            let (a, b) = pair(n, seed);
            assert_eq!(knuth(&a, &b, false).0, naive(&a, &b), "order {n}");
            assert_eq!(knuth(&a, &b, true).0, naive(&a, &b), "order {n}, extra call");
        }
    }

    #[test]
    fn knuth_extra_call_costs_one_more_product_per_level() {
        let (a, b) = pair(4, 9);
        let (_, cnt) = knuth(&a, &b, true);
        assert_eq!(cnt.mults(), 64);
        // a(n) = 8 a(n/2) + 15 (n/2)^2, a(1) = 0
        assert_eq!(cnt.adds(), 8 * 15 + 15 * 4);
    }

    #[test]
    fn block_order_two() {
        let a = Matrix::from_rows(&[[1i64, 2], [3, 4]]).unwrap();
        let b = Matrix::from_rows(&[[5i64, 6], [7, 8]]).unwrap();
        let (c, cnt) = block(&a, &b, BasePolicy::ScalarOnly);
        assert_eq!(c, Matrix::from_rows(&[[19, 22], [43, 50]]).unwrap());
        assert_eq!((cnt.mults(), cnt.adds()), (7, 15));
        assert_eq!(cnt.temp_buffers(), 18);
        assert_eq!(cnt.live_elements(), 0);
    }

    #[test]
    fn block_order_32_matches_naive() {
        let (a, b) = pair(32, 4);
        let want = naive(&a, &b);
        for policy in [BasePolicy::ScalarOnly, BasePolicy::UnrolledUpTo(8), BasePolicy::NaiveCutoff(12)] {
            assert_eq!(block(&a, &b, policy).0, want, "{policy}");
        }
    }

    #[test]
    fn knuth_and_block_agree() {
        let (a, b) = pair(16, 11);
        assert_eq!(knuth(&a, &b, false).0, block(&a, &b, BasePolicy::ScalarOnly).0);
    }
}
