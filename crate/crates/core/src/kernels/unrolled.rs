//! Fixed-size base kernels with the recursion expanded: `win8` calls `win4`,
//! which calls `win2`, which calls the scalar product, each a distinct
//! function over stack arrays. Arithmetic order and operation counts match
//! the recursive kernels with `ScalarOnly` at the same order.

use super::UnrolledForm;
use crate::error::{dim_err, Result};
use crate::matrix::{MatrixView, MatrixViewMut, Scalar, Sign};
use crate::metrics::OpCounter;

type Block<T, const N: usize> = [[T; N]; N];

fn combine<T: Scalar, const N: usize>(
    x: &Block<T, N>,
    y: &Block<T, N>,
    sign: Sign,
    counter: &mut OpCounter,
) -> Block<T, N> {
    let mut out = [[T::zero(); N]; N];
    for i in 0..N {
        for j in 0..N {
            out[i][j] = match sign {
                Sign::Plus => x[i][j] + y[i][j],
                Sign::Minus => x[i][j] - y[i][j],
            };
        }
    }
    counter.record_adds((N * N) as u64);
    out
}

fn split<T: Scalar, const N: usize, const H: usize>(m: &Block<T, N>) -> [Block<T, H>; 4] {
    debug_assert_eq!(N, 2 * H);
    let mut q = [[[T::zero(); H]; H]; 4];
    for i in 0..H {
        for j in 0..H {
            q[0][i][j] = m[i][j];
            q[1][i][j] = m[i][j + H];
            q[2][i][j] = m[i + H][j];
            q[3][i][j] = m[i + H][j + H];
        }
    }
    q
}

fn join<T: Scalar, const N: usize, const H: usize>(q: [Block<T, H>; 4]) -> Block<T, N> {
    debug_assert_eq!(N, 2 * H);
    let mut m = [[T::zero(); N]; N];
    for i in 0..H {
        for j in 0..H {
            m[i][j] = q[0][i][j];
            m[i][j + H] = q[1][i][j];
            m[i + H][j] = q[2][i][j];
            m[i + H][j + H] = q[3][i][j];
        }
    }
    m
}

fn scalar1<T: Scalar>(a: &Block<T, 1>, b: &Block<T, 1>, counter: &mut OpCounter) -> Block<T, 1> {
    counter.record_mults(1);
    [[a[0][0] * b[0][0]]]
}

macro_rules! winograd_level {
    ($name:ident, $n:literal, $h:literal, $inner:ident) => {
        fn $name<T: Scalar>(a: &Block<T, $n>, b: &Block<T, $n>, cnt: &mut OpCounter) -> Block<T, $n> {
            use Sign::{Minus, Plus};
            let [a11, a12, a21, a22] = split::<T, $n, $h>(a);
            let [b11, b12, b21, b22] = split::<T, $n, $h>(b);
            let s1 = combine(&a21, &a22, Plus, cnt);
            let s2 = combine(&s1, &a11, Minus, cnt);
            let s3 = combine(&a11, &a21, Minus, cnt);
            let t1 = combine(&b12, &b11, Minus, cnt);
            let t2 = combine(&b22, &t1, Minus, cnt);
            let t3 = combine(&b22, &b12, Minus, cnt);
            let s4 = combine(&a12, &s2, Minus, cnt);
            let t4 = combine(&t2, &b21, Minus, cnt);
            let p1 = $inner(&a11, &b11, cnt);
            let p2 = $inner(&a12, &b21, cnt);
            let p3 = $inner(&s4, &b22, cnt);
            let p4 = $inner(&a22, &t4, cnt);
            let p5 = $inner(&s1, &t1, cnt);
            let p6 = $inner(&s2, &t2, cnt);
            let p7 = $inner(&s3, &t3, cnt);
            let u1 = combine(&p1, &p2, Plus, cnt);
            let u2 = combine(&p1, &p6, Plus, cnt);
            let u3 = combine(&u2, &p7, Plus, cnt);
            let u4 = combine(&u2, &p5, Plus, cnt);
            let u5 = combine(&u4, &p3, Plus, cnt);
            let u6 = combine(&u3, &p4, Minus, cnt);
            let u7 = combine(&u3, &p5, Plus, cnt);
            join::<T, $n, $h>([u1, u5, u6, u7])
        }
    };
}

macro_rules! strassen_level {
    ($name:ident, $n:literal, $h:literal, $inner:ident) => {
        fn $name<T: Scalar>(a: &Block<T, $n>, b: &Block<T, $n>, cnt: &mut OpCounter) -> Block<T, $n> {
            use Sign::{Minus, Plus};
            let [a11, a12, a21, a22] = split::<T, $n, $h>(a);
            let [b11, b12, b21, b22] = split::<T, $n, $h>(b);
            let p1 = {
                let l = combine(&a11, &a22, Plus, cnt);
                let r = combine(&b11, &b22, Plus, cnt);
                $inner(&l, &r, cnt)
            };
            let p2 = $inner(&combine(&a21, &a22, Plus, cnt), &b11, cnt);
            let p3 = $inner(&a11, &combine(&b12, &b22, Minus, cnt), cnt);
            let p4 = $inner(&a22, &combine(&b21, &b11, Minus, cnt), cnt);
            let p5 = $inner(&combine(&a11, &a12, Plus, cnt), &b22, cnt);
            let p6 = {
                let l = combine(&a21, &a11, Minus, cnt);
                let r = combine(&b11, &b12, Plus, cnt);
                $inner(&l, &r, cnt)
            };
            let p7 = {
                let l = combine(&a12, &a22, Minus, cnt);
                let r = combine(&b21, &b22, Plus, cnt);
                $inner(&l, &r, cnt)
            };
            let c11 = combine(&combine(&combine(&p1, &p4, Plus, cnt), &p5, Minus, cnt), &p7, Plus, cnt);
            let c12 = combine(&p3, &p5, Plus, cnt);
            let c21 = combine(&p2, &p4, Plus, cnt);
            let c22 = combine(&combine(&combine(&p1, &p3, Plus, cnt), &p2, Minus, cnt), &p6, Plus, cnt);
            join::<T, $n, $h>([c11, c12, c21, c22])
        }
    };
}

winograd_level!(win2, 2, 1, scalar1);
winograd_level!(win4, 4, 2, win2);
winograd_level!(win8, 8, 4, win4);

strassen_level!(str2, 2, 1, scalar1);
strassen_level!(str4, 4, 2, str2);
strassen_level!(str8, 8, 4, str4);

fn load<T: Scalar, const N: usize>(v: MatrixView<'_, T>) -> Block<T, N> {
    let mut m = [[T::zero(); N]; N];
    for (i, row) in m.iter_mut().enumerate() {
        row.copy_from_slice(v.row(i));
    }
    m
}

fn store<T: Scalar, const N: usize>(m: &Block<T, N>, mut c: MatrixViewMut<'_, T>) {
    for (i, row) in m.iter().enumerate() {
        c.row_mut(i).copy_from_slice(row);
    }
}

/// Runs the unrolled kernel of `form` for `order` in {1, 2, 4, 8}. Shapes are
/// the caller's responsibility.
pub(crate) fn dispatch<T: Scalar>(
    a: MatrixView<'_, T>,
    b: MatrixView<'_, T>,
    c: MatrixViewMut<'_, T>,
    order: usize,
    form: UnrolledForm,
    counter: &mut OpCounter,
) {
    macro_rules! go {
        ($n:literal, $win:ident, $str:ident) => {{
            let (x, y) = (load::<T, $n>(a), load::<T, $n>(b));
            let r = match form {
                UnrolledForm::Winograd => $win(&x, &y, counter),
                UnrolledForm::Strassen => $str(&x, &y, counter),
            };
            store(&r, c);
        }};
    }
    match order {
        1 => go!(1, scalar1, scalar1),
        2 => go!(2, win2, str2),
        4 => go!(4, win4, str4),
        8 => go!(8, win8, str8),
        _ => unreachable!("unrolled kernels exist for orders 1, 2, 4 and 8 only"),
    }
}

fn check(
    a: MatrixView<'_, impl Scalar>,
    b: MatrixView<'_, impl Scalar>,
    c: (usize, usize),
    order: usize,
) -> Result<()> {
    if !matches!(order, 2 | 4 | 8) {
        return dim_err(format!("no unrolled kernel for order {order}"));
    }
    for shape in [a.shape(), b.shape(), c] {
        if shape != (order, order) {
            return dim_err(format!("operand is {shape:?}, unrolled kernel expects order {order}"));
        }
    }
    Ok(())
}

/// Unrolled block-form Winograd product for order 2, 4 or 8.
pub fn unrolled_base<T: Scalar>(
    a: MatrixView<'_, T>,
    b: MatrixView<'_, T>,
    c: MatrixViewMut<'_, T>,
    order: usize,
    counter: &mut OpCounter,
) -> Result<()> {
    check(a, b, c.shape(), order)?;
    dispatch(a, b, c, order, UnrolledForm::Winograd, counter);
    Ok(())
}

/// Unrolled Strassen product for order 2, 4 or 8.
pub fn unrolled_strassen_base<T: Scalar>(
    a: MatrixView<'_, T>,
    b: MatrixView<'_, T>,
    c: MatrixViewMut<'_, T>,
    order: usize,
    counter: &mut OpCounter,
) -> Result<()> {
    check(a, b, c.shape(), order)?;
    dispatch(a, b, c, order, UnrolledForm::Strassen, counter);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{naive_mul, strassen_mul, winograd_block_mul, BasePolicy};
    use crate::matrix::Matrix;
    use rand::{Rng, SeedableRng};

    fn random(n: usize, rng: &mut impl Rng) -> Matrix<i64> {
        Matrix::from_fn(n, n, |_, _| rng.gen_range(-8..=8))
    }

    #[test]
    fn order_two_equals_recursive_block_form() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let (a, b) = (random(2, &mut rng), random(2, &mut rng));
            let (mut c1, mut c2) = (Matrix::zeros(2, 2), Matrix::zeros(2, 2));
            let (mut k1, mut k2) = (OpCounter::new(), OpCounter::new());
            unrolled_base(a.view(), b.view(), c1.view_mut(), 2, &mut k1).unwrap();
            winograd_block_mul(a.view(), b.view(), c2.view_mut(), BasePolicy::ScalarOnly, &mut k2).unwrap();
            assert_eq!(c1, c2);
            assert_eq!((k1.mults(), k1.adds()), (k2.mults(), k2.adds()));
        }
    }

    #[test]
    fn counts_match_recursive_kernels() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in [2, 4, 8] {
            let (a, b) = (random(n, &mut rng), random(n, &mut rng));
            let mut c = Matrix::zeros(n, n);
            let (mut k1, mut k2) = (OpCounter::new(), OpCounter::new());
            unrolled_strassen_base(a.view(), b.view(), c.view_mut(), n, &mut k1).unwrap();
            strassen_mul(a.view(), b.view(), c.view_mut(), BasePolicy::ScalarOnly, &mut k2).unwrap();
            assert_eq!((k1.mults(), k1.adds()), (k2.mults(), k2.adds()), "strassen order {n}");

            let (mut k1, mut k2) = (OpCounter::new(), OpCounter::new());
            unrolled_base(a.view(), b.view(), c.view_mut(), n, &mut k1).unwrap();
            winograd_block_mul(a.view(), b.view(), c.view_mut(), BasePolicy::ScalarOnly, &mut k2).unwrap();
            assert_eq!((k1.mults(), k1.adds()), (k2.mults(), k2.adds()), "winograd order {n}");
            assert_eq!(k1.temp_buffers(), 0);
        }
    }

    #[test]
    fn order_four_matches_naive() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let (a, b) = (random(4, &mut rng), random(4, &mut rng));
        let (mut c, mut want) = (Matrix::zeros(4, 4), Matrix::zeros(4, 4));
        unrolled_base(a.view(), b.view(), c.view_mut(), 4, &mut OpCounter::new()).unwrap();
        naive_mul(a.view(), b.view(), want.view_mut(), &mut OpCounter::new()).unwrap();
        assert_eq!(c, want);
        unrolled_strassen_base(a.view(), b.view(), c.view_mut(), 4, &mut OpCounter::new()).unwrap();
        assert_eq!(c, want);
    }

    #[test]
    fn order_eight_identity() {
        let id = Matrix::<i64>::identity(8);
        let mut c = Matrix::zeros(8, 8);
        unrolled_base(id.view(), id.view(), c.view_mut(), 8, &mut OpCounter::new()).unwrap();
        assert_eq!(c, id);
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = Matrix::<i64>::zeros(4, 4);
        let mut c = Matrix::<i64>::zeros(4, 4);
        assert!(unrolled_base(a.view(), a.view(), c.view_mut(), 8, &mut OpCounter::new()).is_err());
        assert!(unrolled_base(a.view(), a.view(), c.view_mut(), 16, &mut OpCounter::new()).is_err());
    }
}
