use std::sync::OnceLock;

use super::{
    validate_schedule, Legality, Loc, ScheduleKind, ScheduleStep, StepOp, IN_PLACE_TABLE, TWO_TEMP_TABLE,
};
use crate::error::{MatmulError, Result};
use crate::kernels::{base_case, check_square_pow2, split, split_mut, BasePolicy, Scratch, UnrolledForm};
use crate::matrix::{block_add, views_alias, MatrixView, MatrixViewMut, Operand, Scalar, Sign};
use crate::metrics::OpCounter;

pub(crate) type Trace<'t> = Option<&'t mut dyn FnMut(&ScheduleStep)>;

/// A validated table plus, per position, whether the product there may run
/// in place on its operands.
struct Plan {
    steps: &'static [ScheduleStep],
    clobber_safe: Vec<bool>,
}

fn plan(kind: ScheduleKind) -> &'static Plan {
    static TWO_TEMP: OnceLock<Plan> = OnceLock::new();
    static IN_PLACE: OnceLock<Plan> = OnceLock::new();
    let (cell, steps): (_, &'static [ScheduleStep]) = match kind {
        ScheduleKind::TwoTemp => (&TWO_TEMP, &TWO_TEMP_TABLE),
        ScheduleKind::InPlace => (&IN_PLACE, &IN_PLACE_TABLE),
    };
    cell.get_or_init(|| match validate_schedule(steps) {
        Ok(Legality::Legal { clobber_safe, .. }) => Plan {
            steps,
            // The two-temp kernel promises to leave its inputs alone.
            clobber_safe: match kind {
                ScheduleKind::TwoTemp => vec![false; steps.len()],
                ScheduleKind::InPlace => clobber_safe,
            },
        },
        other => panic!("built-in {kind:?} schedule failed validation: {other:?}"),
    })
}

enum Slot<'a, T> {
    Read(MatrixView<'a, T>),
    Write(MatrixViewMut<'a, T>),
    Empty,
}

impl<T: Scalar> Slot<'_, T> {
    fn view(&self) -> MatrixView<'_, T> {
        match self {
            Slot::Read(v) => *v,
            Slot::Write(v) => v.rb(),
            Slot::Empty => unreachable!("validated schedules only read bound locations"),
        }
    }

    fn view_mut(&mut self) -> Result<MatrixViewMut<'_, T>> {
        match self {
            Slot::Write(v) => Ok(v.rb_mut()),
            Slot::Read(_) => Err(MatmulError::Contract("schedule writes a read-only operand".into())),
            Slot::Empty => unreachable!("validated schedules only write bound locations"),
        }
    }
}

fn disjoint<'s, 'a, T, const N: usize>(
    slots: &'s mut [Slot<'a, T>; 14],
    locs: [Loc; N],
) -> [&'s mut Slot<'a, T>; N] {
    slots.get_disjoint_mut(locs.map(Loc::index)).expect("validated schedules use distinct locations per step")
}

/// Runs one level of a schedule over bound quadrant slots.
fn run_frame<T: Scalar>(
    steps: &[ScheduleStep],
    clobber_safe: &[bool],
    slots: &mut [Slot<'_, T>; 14],
    policy: BasePolicy,
    counter: &mut OpCounter,
    mut trace: Trace<'_>,
) -> Result<()> {
    for (pos, s) in steps.iter().enumerate() {
        if let Some(t) = trace.as_mut() {
            t(s);
        }
        let (l, r, d) = (s.lhs.loc, s.rhs.loc, s.dst);
        match s.op {
            StepOp::Add | StepOp::Sub => {
                let sign = if s.op == StepOp::Add { Sign::Plus } else { Sign::Minus };
                if l != d && r != d && l != r {
                    let [dst, x, y] = disjoint(slots, [d, l, r]);
                    block_add(x.view().into(), y.view().into(), dst.view_mut()?, sign, counter)?;
                } else if l == d && r == d {
                    let dst = &mut slots[d.index()];
                    block_add(Operand::Dst, Operand::Dst, dst.view_mut()?, sign, counter)?;
                } else if l == d {
                    let [dst, y] = disjoint(slots, [d, r]);
                    block_add(Operand::Dst, y.view().into(), dst.view_mut()?, sign, counter)?;
                } else if r == d {
                    let [dst, x] = disjoint(slots, [d, l]);
                    block_add(x.view().into(), Operand::Dst, dst.view_mut()?, sign, counter)?;
                } else {
                    let [dst, x] = disjoint(slots, [d, l]);
                    let v = x.view();
                    block_add(v.into(), v.into(), dst.view_mut()?, sign, counter)?;
                }
            }
            StepOp::Mul => {
                if clobber_safe[pos] && l != r {
                    let [dst, x, y] = disjoint(slots, [d, l, r]);
                    in_place_rec(x.view_mut()?, y.view_mut()?, dst.view_mut()?, policy, counter)?;
                } else if l != r {
                    let [dst, x, y] = disjoint(slots, [d, l, r]);
                    two_temp_rec(x.view(), y.view(), dst.view_mut()?, policy, counter, None)?;
                } else {
                    let [dst, x] = disjoint(slots, [d, l]);
                    let v = x.view();
                    two_temp_rec(v, v, dst.view_mut()?, policy, counter, None)?;
                }
            }
        }
    }
    Ok(())
}

pub(crate) fn two_temp_rec<T: Scalar>(
    a: MatrixView<'_, T>,
    b: MatrixView<'_, T>,
    mut c: MatrixViewMut<'_, T>,
    policy: BasePolicy,
    counter: &mut OpCounter,
    trace: Trace<'_>,
) -> Result<()> {
    if base_case(a, b, &mut c, policy, UnrolledForm::Winograd, counter) {
        return Ok(());
    }
    let h = a.rows() / 2;
    let [a11, a12, a21, a22] = split(a);
    let [b11, b12, b21, b22] = split(b);
    let [c11, c12, c21, c22] = split_mut(c);
    let mut scratch = Scratch::new();
    let mut x = scratch.buffer::<T>(h, counter);
    let mut y = scratch.buffer::<T>(h, counter);
    {
        use Slot::{Read, Write};
        let mut slots = [
            Read(a11),
            Read(a12),
            Read(a21),
            Read(a22),
            Read(b11),
            Read(b12),
            Read(b21),
            Read(b22),
            Write(c11),
            Write(c12),
            Write(c21),
            Write(c22),
            Write(x.view_mut()),
            Write(y.view_mut()),
        ];
        let p = plan(ScheduleKind::TwoTemp);
        run_frame(p.steps, &p.clobber_safe, &mut slots, policy, counter, trace)?;
    }
    scratch.close(counter);
    Ok(())
}

pub(crate) fn in_place_rec<T: Scalar>(
    a: MatrixViewMut<'_, T>,
    b: MatrixViewMut<'_, T>,
    mut c: MatrixViewMut<'_, T>,
    policy: BasePolicy,
    counter: &mut OpCounter,
) -> Result<()> {
    in_place_frame(a, b, c.rb_mut(), policy, counter, None)
}

fn in_place_frame<T: Scalar>(
    a: MatrixViewMut<'_, T>,
    b: MatrixViewMut<'_, T>,
    mut c: MatrixViewMut<'_, T>,
    policy: BasePolicy,
    counter: &mut OpCounter,
    trace: Trace<'_>,
) -> Result<()> {
    if base_case(a.rb(), b.rb(), &mut c, policy, UnrolledForm::Winograd, counter) {
        return Ok(());
    }
    let [a11, a12, a21, a22] = split_mut(a);
    let [b11, b12, b21, b22] = split_mut(b);
    let [c11, c12, c21, c22] = split_mut(c);
    use Slot::{Empty, Write};
    let mut slots = [
        Write(a11),
        Write(a12),
        Write(a21),
        Write(a22),
        Write(b11),
        Write(b12),
        Write(b21),
        Write(b22),
        Write(c11),
        Write(c12),
        Write(c21),
        Write(c22),
        Empty,
        Empty,
    ];
    let p = plan(ScheduleKind::InPlace);
    run_frame(p.steps, &p.clobber_safe, &mut slots, policy, counter, trace)
}

/// Executes an arbitrary (not necessarily legal) step list for one level on
/// writable copies, with every product computed by the two-temp kernel. Used
/// to cross-check the validator against numeric execution.
#[cfg(test)]
pub(crate) fn run_steps_unplanned<T: Scalar>(
    steps: &[ScheduleStep],
    a: MatrixViewMut<'_, T>,
    b: MatrixViewMut<'_, T>,
    c: MatrixViewMut<'_, T>,
    counter: &mut OpCounter,
) -> Result<()> {
    let h = a.rows() / 2;
    let [a11, a12, a21, a22] = split_mut(a);
    let [b11, b12, b21, b22] = split_mut(b);
    let [c11, c12, c21, c22] = split_mut(c);
    let mut x = crate::matrix::Matrix::zeros(h, h);
    let mut y = crate::matrix::Matrix::zeros(h, h);
    use Slot::Write;
    let mut slots = [
        Write(a11),
        Write(a12),
        Write(a21),
        Write(a22),
        Write(b11),
        Write(b12),
        Write(b21),
        Write(b22),
        Write(c11),
        Write(c12),
        Write(c21),
        Write(c22),
        Write(x.view_mut()),
        Write(y.view_mut()),
    ];
    let no_clobber = vec![false; steps.len()];
    run_frame(steps, &no_clobber, &mut slots, BasePolicy::ScalarOnly, counter, None)
}

fn check_disjoint<T: Scalar>(pairs: &[(&str, MatrixView<'_, T>, &str, MatrixView<'_, T>)]) -> Result<()> {
    for (n1, v1, n2, v2) in pairs {
        if views_alias(*v1, *v2) {
            return Err(MatmulError::Contract(format!("operands {n1} and {n2} overlap")));
        }
    }
    Ok(())
}

/// `c = a * b` following the two-temporary schedule. Allocates two
/// half-order buffers per recursion level and never writes `a` or `b`.
pub fn two_temp_winograd<T: Scalar>(
    a: MatrixView<'_, T>,
    b: MatrixView<'_, T>,
    c: MatrixViewMut<'_, T>,
    policy: BasePolicy,
    counter: &mut OpCounter,
) -> Result<()> {
    two_temp_winograd_traced(a, b, c, policy, counter, None)
}

/// As [`two_temp_winograd`], reporting each top-level step to `trace` as it
/// executes.
pub fn two_temp_winograd_traced<T: Scalar>(
    a: MatrixView<'_, T>,
    b: MatrixView<'_, T>,
    c: MatrixViewMut<'_, T>,
    policy: BasePolicy,
    counter: &mut OpCounter,
    trace: Trace<'_>,
) -> Result<()> {
    policy.validate()?;
    check_square_pow2(a, b, &c)?;
    check_disjoint(&[("a", a, "c", c.rb()), ("b", b, "c", c.rb())])?;
    two_temp_rec(a, b, c, policy, counter, trace)
}

/// `c = a * b` following the in-place schedule: no auxiliary buffers, every
/// intermediate stored in a quadrant of `a`, `b` or `c`. The contents of
/// `a` and `b` are unspecified afterwards.
pub fn in_place_winograd<T: Scalar>(
    a: MatrixViewMut<'_, T>,
    b: MatrixViewMut<'_, T>,
    c: MatrixViewMut<'_, T>,
    policy: BasePolicy,
    counter: &mut OpCounter,
) -> Result<()> {
    in_place_winograd_traced(a, b, c, policy, counter, None)
}

pub fn in_place_winograd_traced<T: Scalar>(
    a: MatrixViewMut<'_, T>,
    b: MatrixViewMut<'_, T>,
    c: MatrixViewMut<'_, T>,
    policy: BasePolicy,
    counter: &mut OpCounter,
    trace: Trace<'_>,
) -> Result<()> {
    policy.validate()?;
    check_square_pow2(a.rb(), b.rb(), &c)?;
    check_disjoint(&[("a", a.rb(), "b", b.rb()), ("a", a.rb(), "c", c.rb()), ("b", b.rb(), "c", c.rb())])?;
    in_place_frame(a, b, c, policy, counter, trace)
}
