use super::{Matrix, MatrixView, MatrixViewMut, Scalar};
use crate::error::{dim_err, Result};
use crate::metrics::OpCounter;

/// Source operand of [`block_add`]: either an independent view or the
/// destination itself (the aliasing case the in-place schedules need).
#[derive(Clone, Copy)]
pub enum Operand<'a, T> {
    View(MatrixView<'a, T>),
    Dst,
}

impl<'a, T> From<MatrixView<'a, T>> for Operand<'a, T> {
    fn from(v: MatrixView<'a, T>) -> Self {
        Operand::View(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `dst = a + b` or `dst = a - b`, element-wise. Either operand may be
/// [`Operand::Dst`]; element `(i, j)` of the result depends only on element
/// `(i, j)` of each input, so aliasing is safe. Counts `rows * cols` adds.
// `Dst - Dst` is evaluated literally rather than folded to zero.
#[allow(clippy::eq_op)]
pub fn block_add<T: Scalar>(
    a: Operand<'_, T>,
    b: Operand<'_, T>,
    mut dst: MatrixViewMut<'_, T>,
    sign: Sign,
    counter: &mut OpCounter,
) -> Result<()> {
    for op in [&a, &b] {
        if let Operand::View(v) = op {
            if v.shape() != dst.shape() {
                return dim_err(format!(
                    "block_add operand {:?} vs destination {:?}",
                    v.shape(),
                    dst.shape()
                ));
            }
        }
    }
    let (rows, cols) = dst.shape();
    for i in 0..rows {
        let ra = match a {
            Operand::View(v) => Some(v.row(i)),
            Operand::Dst => None,
        };
        let rb = match b {
            Operand::View(v) => Some(v.row(i)),
            Operand::Dst => None,
        };
        let d = dst.row_mut(i);
        match (ra, rb, sign) {
            (Some(x), Some(y), Sign::Plus) => {
                for ((d, &x), &y) in d.iter_mut().zip(x).zip(y) {
                    *d = x + y;
                }
            }
            (Some(x), Some(y), Sign::Minus) => {
                for ((d, &x), &y) in d.iter_mut().zip(x).zip(y) {
                    *d = x - y;
                }
            }
            (None, Some(y), Sign::Plus) => d.iter_mut().zip(y).for_each(|(d, &y)| *d = *d + y),
            (None, Some(y), Sign::Minus) => d.iter_mut().zip(y).for_each(|(d, &y)| *d = *d - y),
            (Some(x), None, Sign::Plus) => d.iter_mut().zip(x).for_each(|(d, &x)| *d = x + *d),
            (Some(x), None, Sign::Minus) => d.iter_mut().zip(x).for_each(|(d, &x)| *d = x - *d),
            (None, None, Sign::Plus) => d.iter_mut().for_each(|d| *d = *d + *d),
            (None, None, Sign::Minus) => d.iter_mut().for_each(|d| *d = *d - *d),
        }
    }
    counter.record_adds((rows * cols) as u64);
    Ok(())
}

/// Zero-pads `a` into the top-left corner of a square matrix whose order is
/// the next power of two at or above `max(rows, cols)`.
pub fn pad_to_pow2<T: Scalar>(a: &Matrix<T>) -> Matrix<T> {
    let order = a.rows().max(a.cols()).next_power_of_two();
    pad_to_order(a, order).expect("order covers both extents")
}

/// Zero-pads `a` into the top-left corner of an `order x order` matrix.
pub fn pad_to_order<T: Scalar>(a: &Matrix<T>, order: usize) -> Result<Matrix<T>> {
    if a.rows() > order || a.cols() > order {
        return dim_err(format!("cannot pad {:?} to order {order}", a.shape()));
    }
    if a.shape() == (order, order) {
        return Ok(a.clone());
    }
    let mut out = Matrix::zeros(order, order);
    out.view_mut().submatrix(0, 0, a.rows(), a.cols())?.copy_from(a.view())?;
    Ok(out)
}

/// Top-left `rows x cols` block of `c`.
pub fn unpad<T: Scalar>(c: &Matrix<T>, rows: usize, cols: usize) -> Result<Matrix<T>> {
    if rows > c.rows() || cols > c.cols() {
        return dim_err(format!("cannot unpad {:?} to larger extent {rows}x{cols}", c.shape()));
    }
    Ok(c.submatrix(0, 0, rows, cols)?.to_matrix())
}

/// Largest absolute element-wise difference.
pub fn max_abs_diff<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<T> {
    if a.shape() != b.shape() {
        return dim_err(format!("compare {:?} with {:?}", a.shape(), b.shape()));
    }
    Ok(a.as_slice().iter().zip(b.as_slice()).map(|(&x, &y)| (x - y).abs()).fold(T::zero(), |m, d| {
        if d > m {
            d
        } else {
            m
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Matrix<i64> {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn add_two_blocks() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[5, 6], &[7, 8]]);
        let mut d = Matrix::zeros(2, 2);
        let mut c = OpCounter::new();
        block_add(a.view().into(), b.view().into(), d.view_mut(), Sign::Plus, &mut c).unwrap();
        assert_eq!(d, m(&[&[6, 8], &[10, 12]]));
        assert_eq!(c.adds(), 4);
    }

    #[test]
    fn self_difference_is_zero() {
        let a = m(&[&[1, -2], &[3, 9]]);
        let mut d = Matrix::from_fn(2, 2, |_, _| 77);
        let mut c = OpCounter::new();
        block_add(a.view().into(), a.view().into(), d.view_mut(), Sign::Minus, &mut c).unwrap();
        assert_eq!(d, Matrix::zeros(2, 2));
    }

    #[test]
    fn dst_aliases_left_operand() {
        let mut a = m(&[&[1]]);
        let b = m(&[&[2]]);
        let mut c = OpCounter::new();
        block_add(Operand::Dst, b.view().into(), a.view_mut(), Sign::Plus, &mut c).unwrap();
        assert_eq!(a, m(&[&[3]]));
    }

    #[test]
    fn dst_aliases_right_operand() {
        // dst = a - dst
        let a = m(&[&[10, 20]]);
        let mut d = m(&[&[1, 2]]);
        let mut c = OpCounter::new();
        block_add(a.view().into(), Operand::Dst, d.view_mut(), Sign::Minus, &mut c).unwrap();
        assert_eq!(d, m(&[&[9, 18]]));
    }

    #[test]
    fn aliasing_within_one_parent() {
        // S1 = A21 + A22 stored in A21, on quadrants of one matrix.
        let mut a = m(&[&[1, 2], &[3, 4]]);
        let [_, _, a21, a22] = a.view_mut().quadrants().unwrap();
        let mut c = OpCounter::new();
        block_add(Operand::Dst, a22.rb().into(), a21, Sign::Plus, &mut c).unwrap();
        assert_eq!(a, m(&[&[1, 2], &[7, 4]]));
    }

    #[test]
    fn extent_mismatch() {
        let a = Matrix::<i64>::zeros(2, 2);
        let b = Matrix::<i64>::zeros(2, 3);
        let mut d = Matrix::<i64>::zeros(2, 2);
        let mut c = OpCounter::new();
        let r = block_add(a.view().into(), b.view().into(), d.view_mut(), Sign::Plus, &mut c);
        assert!(matches!(r, Err(crate::MatmulError::Dimension(_))));
    }

    #[test]
    fn padding_examples() {
        let a = Matrix::from_fn(5, 3, |i, j| (i * 3 + j + 1) as i64);
        let p = pad_to_pow2(&a);
        assert_eq!(p.shape(), (8, 8));
        for i in 0..8 {
            for j in 0..8 {
                let want = if i < 5 && j < 3 { a[(i, j)] } else { 0 };
                assert_eq!(p[(i, j)], want);
            }
        }
        let sq = Matrix::from_fn(4, 4, |i, j| (i + 7 * j) as i64);
        assert_eq!(pad_to_pow2(&sq), sq);
        let one = m(&[&[7]]);
        assert_eq!(pad_to_pow2(&one), one);
    }

    #[test]
    fn unpad_examples() {
        let c = Matrix::from_fn(8, 8, |i, j| (i * 8 + j) as i64);
        let u = unpad(&c, 5, 3).unwrap();
        assert_eq!(u.shape(), (5, 3));
        assert_eq!(u[(4, 2)], 34);
        assert_eq!(unpad(&c, 8, 8).unwrap(), c);
        assert!(unpad(&c, 9, 1).is_err());
    }

    #[test]
    fn max_abs_diff_examples() {
        let a = Matrix::from_rows(&[[1.0f64]]).unwrap();
        let b = Matrix::from_rows(&[[1.5f64]]).unwrap();
        assert_eq!(max_abs_diff(&a, &b).unwrap(), 0.5);
        assert_eq!(max_abs_diff(&a, &a).unwrap(), 0.0);
        assert!(max_abs_diff(&a, &Matrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn max_abs_diff_matches_loop() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let a = Matrix::from_fn(7, 9, |_, _| rng.gen_range(-1.0..1.0f64));
        let b = Matrix::from_fn(7, 9, |_, _| rng.gen_range(-1.0..1.0f64));
        let mut want = 0.0f64;
        for i in 0..7 {
            for j in 0..9 {
                want = want.max((a[(i, j)] - b[(i, j)]).abs());
            }
        }
        assert_eq!(max_abs_diff(&a, &b).unwrap(), want);
    }

    proptest! {
        #[test]
        fn padding_round_trip(rows in 1usize..=64, cols in 1usize..=64, seed in any::<i64>()) {
            let a = Matrix::from_fn(rows, cols, |i, j| seed.wrapping_mul(31).wrapping_add((i * 131 + j) as i64));
            let p = pad_to_pow2(&a);
            prop_assert!(p.is_square_pow2());
            prop_assert_eq!(unpad(&p, rows, cols).unwrap(), a);
        }

        #[test]
        fn add_then_subtract_restores(vals in proptest::collection::vec(-1000i64..1000, 18)) {
            let orig = Matrix::new(3, 3, vals[..9].to_vec()).unwrap();
            let other = Matrix::new(3, 3, vals[9..].to_vec()).unwrap();
            let mut d = orig.clone();
            let mut c = OpCounter::new();
            block_add(Operand::Dst, other.view().into(), d.view_mut(), Sign::Plus, &mut c).unwrap();
            block_add(Operand::Dst, other.view().into(), d.view_mut(), Sign::Minus, &mut c).unwrap();
            prop_assert_eq!(d, orig);
        }

        #[test]
        fn quadrant_tiling(half_r in 1usize..8, half_c in 1usize..8) {
            let (rows, cols) = (2 * half_r, 2 * half_c);
            let mut m = Matrix::<i64>::zeros(rows, cols);
            let quads = m.view_mut().quadrants().unwrap();
            for (q, mut v) in quads.into_iter().enumerate() {
                for i in 0..half_r {
                    for j in 0..half_c {
                        v.set(i, j, (q * 1000 + i * 10 + j) as i64 + 1);
                    }
                }
            }
            for i in 0..rows {
                for j in 0..cols {
                    let q = (i / half_r) * 2 + j / half_c;
                    let want = (q * 1000 + (i % half_r) * 10 + j % half_c) as i64 + 1;
                    prop_assert_eq!(m[(i, j)], want);
                }
            }
        }
    }
}
