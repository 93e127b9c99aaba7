use super::{
    accumulate, add_into, base_case, check_square_pow2, split, split_mut, BasePolicy, Scratch, UnrolledForm,
};
use crate::error::Result;
use crate::matrix::{MatrixView, MatrixViewMut, Scalar, Sign};
use crate::metrics::OpCounter;

/// `c = a * b` by Strassen's seven products
///
/// ```text
/// P1 = (A11 + A22)(B11 + B22)    P5 = (A11 + A12) B22
/// P2 = (A21 + A22) B11           P6 = (A21 - A11)(B11 + B12)
/// P3 = A11 (B12 - B22)           P7 = (A12 - A22)(B21 + B22)
/// P4 = A22 (B21 - B11)
///
/// C11 = P1 + P4 - P5 + P7        C12 = P3 + P5
/// C21 = P2 + P4                  C22 = P1 + P3 - P2 + P6
/// ```
///
/// 18 block additions per level. Operands must be square with a common
/// power-of-two order.
pub fn strassen_mul<T: Scalar>(
    a: MatrixView<'_, T>,
    b: MatrixView<'_, T>,
    c: MatrixViewMut<'_, T>,
    policy: BasePolicy,
    counter: &mut OpCounter,
) -> Result<()> {
    policy.validate()?;
    check_square_pow2(a, b, &c)?;
    strassen_rec(a, b, c, policy, counter);
    Ok(())
}

pub(crate) fn strassen_rec<T: Scalar>(
    a: MatrixView<'_, T>,
    b: MatrixView<'_, T>,
    mut c: MatrixViewMut<'_, T>,
    policy: BasePolicy,
    counter: &mut OpCounter,
) {
    if base_case(a, b, &mut c, policy, UnrolledForm::Strassen, counter) {
        return;
    }
    let h = a.rows() / 2;
    let [a11, a12, a21, a22] = split(a);
    let [b11, b12, b21, b22] = split(b);
    let [mut c11, c12, c21, mut c22] = split_mut(c);
    let mut s = Scratch::new();

    let p = |x: MatrixView<'_, T>, y: MatrixView<'_, T>, s: &mut Scratch, counter: &mut OpCounter| {
        let mut out = s.buffer(h, counter);
        strassen_rec(x, y, out.view_mut(), policy, counter);
        out
    };

    let l = s.combine(a11, a22, Sign::Plus, counter);
    let r = s.combine(b11, b22, Sign::Plus, counter);
    let p1 = p(l.view(), r.view(), &mut s, counter);

    let l = s.combine(a21, a22, Sign::Plus, counter);
    let p2 = p(l.view(), b11, &mut s, counter);

    let r = s.combine(b12, b22, Sign::Minus, counter);
    let p3 = p(a11, r.view(), &mut s, counter);

    let r = s.combine(b21, b11, Sign::Minus, counter);
    let p4 = p(a22, r.view(), &mut s, counter);

    let l = s.combine(a11, a12, Sign::Plus, counter);
    let p5 = p(l.view(), b22, &mut s, counter);

    let l = s.combine(a21, a11, Sign::Minus, counter);
    let r = s.combine(b11, b12, Sign::Plus, counter);
    let p6 = p(l.view(), r.view(), &mut s, counter);

    let l = s.combine(a12, a22, Sign::Minus, counter);
    let r = s.combine(b21, b22, Sign::Plus, counter);
    let p7 = p(l.view(), r.view(), &mut s, counter);

    add_into(p1.view(), p4.view(), c11.rb_mut(), Sign::Plus, counter);
    accumulate(p5.view(), c11.rb_mut(), Sign::Minus, counter);
    accumulate(p7.view(), c11, Sign::Plus, counter);

    add_into(p3.view(), p5.view(), c12, Sign::Plus, counter);
    add_into(p2.view(), p4.view(), c21, Sign::Plus, counter);

    add_into(p1.view(), p3.view(), c22.rb_mut(), Sign::Plus, counter);
    accumulate(p2.view(), c22.rb_mut(), Sign::Minus, counter);
    accumulate(p6.view(), c22, Sign::Plus, counter);

    s.close(counter);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::naive_mul;
    use crate::matrix::Matrix;

    fn run(a: &Matrix<i64>, b: &Matrix<i64>, policy: BasePolicy) -> (Matrix<i64>, OpCounter) {
        let mut c = Matrix::zeros(a.rows(), a.rows());
        let mut cnt = OpCounter::new();
        strassen_mul(a.view(), b.view(), c.view_mut(), policy, &mut cnt).unwrap();
        (c, cnt)
    }

    #[test]
    fn order_two_counts_seven_and_eighteen() {
        let a = Matrix::from_rows(&[[1i64, 2], [3, 4]]).unwrap();
        let b = Matrix::from_rows(&[[5i64, 6], [7, 8]]).unwrap();
        let (c, cnt) = run(&a, &b, BasePolicy::ScalarOnly);
        assert_eq!(c, Matrix::from_rows(&[[19, 22], [43, 50]]).unwrap());
        assert_eq!((cnt.mults(), cnt.adds()), (7, 18));
        assert_eq!(cnt.live_elements(), 0);
    }

    #[test]
    fn order_one_is_scalar_product() {
        let a = Matrix::from_rows(&[[3i64]]).unwrap();
        let b = Matrix::from_rows(&[[4i64]]).unwrap();
        let (c, cnt) = run(&a, &b, BasePolicy::NaiveCutoff(12));
        assert_eq!(c[(0, 0)], 12);
        assert_eq!((cnt.mults(), cnt.adds(), cnt.temp_buffers()), (1, 0, 0));
    }

    #[test]
    fn order_eight_matches_naive() {
        let a = Matrix::from_fn(8, 8, |i, j| ((i * 7 + j * 3) % 17) as i64 - 8);
        let b = Matrix::from_fn(8, 8, |i, j| ((i * 5 + j * 11) % 13) as i64 - 6);
        let mut want = Matrix::zeros(8, 8);
        naive_mul(a.view(), b.view(), want.view_mut(), &mut OpCounter::new()).unwrap();
        for policy in [BasePolicy::ScalarOnly, BasePolicy::UnrolledUpTo(4), BasePolicy::NaiveCutoff(3)] {
            assert_eq!(run(&a, &b, policy).0, want, "{policy}");
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        let a = Matrix::<i64>::zeros(3, 3);
        let mut c = Matrix::<i64>::zeros(3, 3);
        let r = strassen_mul(a.view(), a.view(), c.view_mut(), BasePolicy::ScalarOnly, &mut OpCounter::new());
        assert!(matches!(r, Err(crate::MatmulError::Dimension(_))));
        let a = Matrix::<i64>::zeros(2, 4);
        let b = Matrix::<i64>::zeros(4, 2);
        let mut c = Matrix::<i64>::zeros(2, 2);
        let r = strassen_mul(a.view(), b.view(), c.view_mut(), BasePolicy::ScalarOnly, &mut OpCounter::new());
        assert!(r.is_err());
    }
}
