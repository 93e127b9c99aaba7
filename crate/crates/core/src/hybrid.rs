//! Named algorithm variants and the shape-agnostic `multiply` entry point.

use std::fmt;

use crate::error::{dim_err, MatmulError, Result};
use crate::kernels::{self, BasePolicy};
use crate::matrix::{pad_to_order, unpad, Matrix, MatrixView, MatrixViewMut, Scalar};
use crate::metrics::OpCounter;
use crate::schedules::{self, ScheduleStep};

/// Order at or below which the `*-mod2` and `*-mod` schedule presets switch
/// to the naive kernel.
pub const DEFAULT_CUTOFF: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kernel {
    Naive,
    Strassen,
    WinogradKnuth,
    WinogradBlock,
    TwoTemp,
    InPlace,
}

impl Kernel {
    pub fn is_recursive(self) -> bool {
        self != Kernel::Naive
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VariantSpec {
    pub kernel: Kernel,
    pub base: BasePolicy,
    /// Zero-pad shapes that are not square powers of two.
    pub pad: bool,
    /// Knuth form only: recompute the shared product instead of reusing it.
    pub knuth_extra_call: bool,
}

impl VariantSpec {
    pub const fn new(kernel: Kernel, base: BasePolicy) -> Self {
        Self { kernel, base, pad: !matches!(kernel, Kernel::Naive), knuth_extra_call: false }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kernel == Kernel::Naive && self.pad {
            return Err(MatmulError::Parameter("the naive kernel takes any shape; pad must be off".into()));
        }
        self.base.validate()
    }

    /// Replaces a `NaiveCutoff` threshold; other policies are unchanged.
    pub fn with_cutoff(mut self, threshold: usize) -> Self {
        if let BasePolicy::NaiveCutoff(_) = self.base {
            self.base = BasePolicy::NaiveCutoff(threshold);
        }
        self
    }
}

impl fmt::Display for VariantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/{}", self.kernel, self.base)?;
        if self.knuth_extra_call {
            write!(f, "/8-call")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub spec: VariantSpec,
}

/// The twelve named presets, in a stable order.
pub fn variant_catalog() -> Vec<Preset> {
    use BasePolicy::*;
    use Kernel::*;
    let p = |name, kernel, base| Preset { name, spec: VariantSpec::new(kernel, base) };
    vec![
        p("naive", Naive, ScalarOnly),
        p("strassen", Strassen, ScalarOnly),
        p("winograd-knuth", WinogradKnuth, ScalarOnly),
        p("winograd-block", WinogradBlock, ScalarOnly),
        p("strassen-mod", Strassen, UnrolledUpTo(8)),
        p("winograd-mod", WinogradBlock, UnrolledUpTo(8)),
        p("strassen-mod2", Strassen, NaiveCutoff(DEFAULT_CUTOFF)),
        p("winograd-mod2", WinogradBlock, NaiveCutoff(DEFAULT_CUTOFF)),
        p("two-temp", TwoTemp, ScalarOnly),
        p("in-place", InPlace, ScalarOnly),
        p("two-temp-mod", TwoTemp, NaiveCutoff(DEFAULT_CUTOFF)),
        p("in-place-mod", InPlace, NaiveCutoff(DEFAULT_CUTOFF)),
    ]
}

/// Looks up a preset by name.
pub fn preset(name: &str) -> Option<Preset> {
    variant_catalog().into_iter().find(|p| p.name == name)
}

/// True when the naive product of an `m x k` by `k x n` pair costs no more
/// than one level of recursion followed by naive products:
/// `m*k*n <= 4*(m*k + k*n + m*n)`.
pub fn cutoff_naive_preferred(m: usize, k: usize, n: usize) -> bool {
    let (m, k, n) = (m as u128, k as u128, n as u128);
    m * k * n <= 4 * (m * k + k * n + m * n)
}

fn run_kernel<T: Scalar>(
    a: MatrixView<'_, T>,
    b: MatrixView<'_, T>,
    c: MatrixViewMut<'_, T>,
    spec: &VariantSpec,
    counter: &mut OpCounter,
    trace: Option<&mut dyn FnMut(&ScheduleStep)>,
) -> Result<()> {
    match spec.kernel {
        Kernel::Naive => kernels::naive_mul(a, b, c, counter),
        Kernel::Strassen => kernels::strassen_mul(a, b, c, spec.base, counter),
        Kernel::WinogradKnuth => {
            kernels::winograd_knuth_mul_with(a, b, c, spec.base, spec.knuth_extra_call, counter)
        }
        Kernel::WinogradBlock => kernels::winograd_block_mul(a, b, c, spec.base, counter),
        Kernel::TwoTemp => schedules::two_temp_winograd_traced(a, b, c, spec.base, counter, trace),
        Kernel::InPlace => {
            // The public entry point never clobbers the caller's matrices.
            let (mut ac, mut bc) = (a.to_matrix(), b.to_matrix());
            schedules::in_place_winograd_traced(ac.view_mut(), bc.view_mut(), c, spec.base, counter, trace)
        }
    }
}

/// `a * b` with the given variant. Recursive variants with `pad` accept any
/// conforming shapes: operands are zero-padded to a common power-of-two
/// order and the result is cut back. Neither input is modified, whatever the
/// variant.
pub fn multiply<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    spec: &VariantSpec,
    counter: &mut OpCounter,
) -> Result<Matrix<T>> {
    multiply_traced(a, b, spec, counter, None)
}

/// As [`multiply`]; for schedule variants, `trace` receives every top-level
/// step as it runs.
pub fn multiply_traced<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    spec: &VariantSpec,
    counter: &mut OpCounter,
    trace: Option<&mut dyn FnMut(&ScheduleStep)>,
) -> Result<Matrix<T>> {
    spec.validate()?;
    let (m, k, n) = (a.rows(), a.cols(), b.cols());
    if k != b.rows() {
        return dim_err(format!("inner dimensions differ: {m}x{k} times {}x{n}", b.rows()));
    }
    if !spec.kernel.is_recursive() {
        let mut c = Matrix::zeros(m, n);
        run_kernel(a.view(), b.view(), c.view_mut(), spec, counter, trace)?;
        return Ok(c);
    }
    let conforming = m == k && k == n && m.is_power_of_two();
    if conforming {
        let mut c = Matrix::zeros(m, n);
        run_kernel(a.view(), b.view(), c.view_mut(), spec, counter, trace)?;
        return Ok(c);
    }
    if !spec.pad {
        return dim_err(format!(
            "{m}x{k} times {k}x{n} is not a square power-of-two product and padding is off"
        ));
    }
    let order = m.max(k).max(n).next_power_of_two();
    let (ap, bp) = (pad_to_order(a, order)?, pad_to_order(b, order)?);
    let mut c = Matrix::zeros(order, order);
    run_kernel(ap.view(), bp.view(), c.view_mut(), spec, counter, trace)?;
    unpad(&c, m, n)
}

/// In-place product with true clobbering semantics: `a` and `b` must be
/// square with a common power-of-two order and are left with unspecified
/// contents.
pub fn multiply_clobbering<T: Scalar>(
    a: &mut Matrix<T>,
    b: &mut Matrix<T>,
    base: BasePolicy,
    counter: &mut OpCounter,
) -> Result<Matrix<T>> {
    let mut c = Matrix::zeros(a.rows(), b.cols());
    schedules::in_place_winograd(a.view_mut(), b.view_mut(), c.view_mut(), base, counter)?;
    Ok(c)
}
