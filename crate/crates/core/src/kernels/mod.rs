//! Multiplication kernels: the naive triple loop, Strassen, the Winograd
//! variant in Knuth's `u, v, w` form and in the 22-operation block form, and
//! the unrolled fixed-size base kernels.
//!
//! The recursive kernels take square power-of-two operands of identical
//! order. They allocate their temporaries freshly at every level and record
//! each allocation in the [`OpCounter`]; the memory-scheduled variants live
//! in [`crate::schedules`].

mod strassen;
mod unrolled;
mod winograd;

use std::fmt;

use crate::error::{dim_err, MatmulError, Result};
use crate::matrix::{block_add, Matrix, MatrixView, MatrixViewMut, Scalar, Sign};
use crate::metrics::OpCounter;

pub use strassen::strassen_mul;
pub use unrolled::{unrolled_base, unrolled_strassen_base};
pub use winograd::{winograd_block_mul, winograd_knuth_mul, winograd_knuth_mul_with};

/// Where a recursive kernel stops recursing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasePolicy {
    /// Recurse down to 1x1 operands.
    ScalarOnly,
    /// Hand over to the unrolled kernel once the order is at most this
    /// (1, 2, 4 or 8).
    UnrolledUpTo(usize),
    /// Hand over to the naive kernel once the order is at most this.
    NaiveCutoff(usize),
}

impl BasePolicy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            BasePolicy::ScalarOnly => Ok(()),
            BasePolicy::UnrolledUpTo(1 | 2 | 4 | 8) => Ok(()),
            BasePolicy::UnrolledUpTo(o) => {
                Err(MatmulError::Parameter(format!("unrolled base order must be 1, 2, 4 or 8, got {o}")))
            }
            BasePolicy::NaiveCutoff(0) => {
                Err(MatmulError::Parameter("naive cutoff threshold must be at least 1".into()))
            }
            BasePolicy::NaiveCutoff(_) => Ok(()),
        }
    }

    /// Order at or below which recursion stops (1 for `ScalarOnly`).
    pub fn leaf_threshold(&self) -> usize {
        match *self {
            BasePolicy::ScalarOnly => 1,
            BasePolicy::UnrolledUpTo(o) | BasePolicy::NaiveCutoff(o) => o.max(1),
        }
    }
}

impl fmt::Display for BasePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasePolicy::ScalarOnly => write!(f, "scalar"),
            BasePolicy::UnrolledUpTo(o) => write!(f, "unrolled<={o}"),
            BasePolicy::NaiveCutoff(t) => write!(f, "naive<={t}"),
        }
    }
}

/// Which straight-line kernel family an unrolled base case uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum UnrolledForm {
    Strassen,
    Winograd,
}

/// `c = a * b` by the triple loop: `c[i][j]` accumulates `a[i][p] * b[p][j]`
/// for ascending `p`, starting from zero. Counts `m*n*k` multiplications and
/// `m*k*(n-1)` additions, the first product into a zero accumulator being
/// free.
pub fn naive_mul<T: Scalar>(
    a: MatrixView<'_, T>,
    b: MatrixView<'_, T>,
    c: MatrixViewMut<'_, T>,
    counter: &mut OpCounter,
) -> Result<()> {
    if a.cols() != b.rows() {
        return dim_err(format!("inner dimensions differ: {:?} x {:?}", a.shape(), b.shape()));
    }
    if c.shape() != (a.rows(), b.cols()) {
        return dim_err(format!("output is {:?}, product is {}x{}", c.shape(), a.rows(), b.cols()));
    }
    naive_unchecked(a, b, c, counter);
    Ok(())
}

pub(crate) fn naive_unchecked<T: Scalar>(
    a: MatrixView<'_, T>,
    b: MatrixView<'_, T>,
    mut c: MatrixViewMut<'_, T>,
    counter: &mut OpCounter,
) {
    let (m, n, k) = (a.rows(), a.cols(), b.cols());
    let bp = b.as_ptr();
    let bs = b.stride();
    for i in 0..m {
        let arow = a.row(i);
        let crow = c.row_mut(i);
        for (j, cij) in crow.iter_mut().enumerate() {
            let mut sum = T::zero();
            for (p, &aip) in arow.iter().enumerate() {
                // SAFETY: p < n = b.rows() and j < k = b.cols().
                let bpj = unsafe { *bp.add(p * bs + j) };
                sum = sum + aip * bpj;
            }
            *cij = sum;
        }
    }
    let (m, n, k) = (m as u64, n as u64, k as u64);
    counter.record_mults(m * n * k);
    counter.record_adds(m * k * n.saturating_sub(1));
}

/// Checks the recursive-kernel contract and returns the common order.
pub(crate) fn check_square_pow2<T: Scalar>(
    a: MatrixView<'_, T>,
    b: MatrixView<'_, T>,
    c: &MatrixViewMut<'_, T>,
) -> Result<usize> {
    let n = a.rows();
    for (name, shape) in [("a", a.shape()), ("b", b.shape()), ("c", c.shape())] {
        if shape != (n, n) {
            return dim_err(format!("operand {name} is {}x{}, expected square order {n}", shape.0, shape.1));
        }
    }
    if !n.is_power_of_two() {
        return dim_err(format!("order {n} is not a power of two; pad first"));
    }
    Ok(n)
}

/// Handles the base case for order `n` under `policy`; returns `false` if
/// the caller should recurse.
pub(crate) fn base_case<T: Scalar>(
    a: MatrixView<'_, T>,
    b: MatrixView<'_, T>,
    c: &mut MatrixViewMut<'_, T>,
    policy: BasePolicy,
    form: UnrolledForm,
    counter: &mut OpCounter,
) -> bool {
    let n = a.rows();
    if n == 1 {
        c.set(0, 0, a.get(0, 0) * b.get(0, 0));
        counter.record_mults(1);
        return true;
    }
    match policy {
        BasePolicy::ScalarOnly => false,
        BasePolicy::UnrolledUpTo(o) if n <= o => {
            unrolled::dispatch(a, b, c.rb_mut(), n, form, counter);
            true
        }
        BasePolicy::NaiveCutoff(t) if n <= t => {
            naive_unchecked(a, b, c.rb_mut(), counter);
            true
        }
        _ => false,
    }
}

/// Auxiliary buffers of one recursion frame. Every buffer is recorded as an
/// allocation event; all are released together when the frame closes.
pub(crate) struct Scratch {
    elements: u64,
}

impl Scratch {
    pub(crate) fn new() -> Self {
        Self { elements: 0 }
    }

    pub(crate) fn buffer<T: Scalar>(&mut self, order: usize, counter: &mut OpCounter) -> Matrix<T> {
        let e = (order * order) as u64;
        counter.record_alloc(e);
        self.elements += e;
        Matrix::zeros(order, order)
    }

    /// Fresh buffer holding `x + y` or `x - y`.
    pub(crate) fn combine<T: Scalar>(
        &mut self,
        x: MatrixView<'_, T>,
        y: MatrixView<'_, T>,
        sign: Sign,
        counter: &mut OpCounter,
    ) -> Matrix<T> {
        let mut out = self.buffer(x.rows(), counter);
        block_add(x.into(), y.into(), out.view_mut(), sign, counter).expect("quadrants share one extent");
        out
    }

    pub(crate) fn close(self, counter: &mut OpCounter) {
        counter.record_free(self.elements);
    }
}

/// `dst = x ± y` over quadrants already known to agree in extent.
pub(crate) fn add_into<T: Scalar>(
    x: MatrixView<'_, T>,
    y: MatrixView<'_, T>,
    dst: MatrixViewMut<'_, T>,
    sign: Sign,
    counter: &mut OpCounter,
) {
    block_add(x.into(), y.into(), dst, sign, counter).expect("quadrants share one extent");
}

/// `dst = dst ± y`.
pub(crate) fn accumulate<T: Scalar>(
    y: MatrixView<'_, T>,
    dst: MatrixViewMut<'_, T>,
    sign: Sign,
    counter: &mut OpCounter,
) {
    block_add(crate::matrix::Operand::Dst, y.into(), dst, sign, counter).expect("quadrants share one extent");
}

pub(crate) fn split<'a, T: Scalar>(m: MatrixView<'a, T>) -> [MatrixView<'a, T>; 4] {
    m.quadrants().expect("power-of-two order above 1 is even")
}

pub(crate) fn split_mut<'a, T: Scalar>(m: MatrixViewMut<'a, T>) -> [MatrixViewMut<'a, T>; 4] {
    m.quadrants().expect("power-of-two order above 1 is even")
}
