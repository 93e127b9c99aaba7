//! Memory-scheduled Winograd kernels.
//!
//! Both schedules are the 22 block operations of the Winograd variant in a
//! fixed order with a fixed storage map. The step lists are data: the
//! executor interprets them and [`validate_schedule`] checks their dataflow
//! symbolically.
//!
//! * [`ScheduleKind::TwoTemp`] keeps the inputs intact and uses two
//!   temporaries `X` and `Y` of half order per level.
//! * [`ScheduleKind::InPlace`] stores every intermediate in a quadrant of
//!   `A`, `B` or `C` and allocates nothing; the inputs are clobbered.

mod exec;
mod validate;

use std::fmt;

pub use exec::{in_place_winograd, in_place_winograd_traced, two_temp_winograd, two_temp_winograd_traced};
pub use validate::{validate_schedule, Legality, Slot, Violation};

/// Storage location of one schedule operand: a quadrant of an input or of
/// the output, or one of the two temporaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Loc {
    A11,
    A12,
    A21,
    A22,
    B11,
    B12,
    B21,
    B22,
    C11,
    C12,
    C21,
    C22,
    X,
    Y,
}

impl Loc {
    pub const ALL: [Loc; 14] = [
        Loc::A11,
        Loc::A12,
        Loc::A21,
        Loc::A22,
        Loc::B11,
        Loc::B12,
        Loc::B21,
        Loc::B22,
        Loc::C11,
        Loc::C12,
        Loc::C21,
        Loc::C22,
        Loc::X,
        Loc::Y,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_input(self) -> bool {
        self.index() < 8
    }

    pub fn is_temp(self) -> bool {
        matches!(self, Loc::X | Loc::Y)
    }
}

/// Symbolic value held by a location: an input quadrant or one of the
/// S/T/P/U intermediates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    A11,
    A12,
    A21,
    A22,
    B11,
    B12,
    B21,
    B22,
    S1,
    S2,
    S3,
    S4,
    T1,
    T2,
    T3,
    T4,
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    U1,
    U2,
    U3,
    U4,
    U5,
    U6,
    U7,
}

impl Sym {
    /// The defining operation of every intermediate; `None` for inputs.
    pub fn definition(self) -> Option<(StepOp, Sym, Sym)> {
        use StepOp::{Add, Mul, Sub};
        use Sym::*;
        Some(match self {
            A11 | A12 | A21 | A22 | B11 | B12 | B21 | B22 => return None,
            S1 => (Add, A21, A22),
            S2 => (Sub, S1, A11),
            S3 => (Sub, A11, A21),
            S4 => (Sub, A12, S2),
            T1 => (Sub, B12, B11),
            T2 => (Sub, B22, T1),
            T3 => (Sub, B22, B12),
            T4 => (Sub, T2, B21),
            P1 => (Mul, A11, B11),
            P2 => (Mul, A12, B21),
            P3 => (Mul, S4, B22),
            P4 => (Mul, A22, T4),
            P5 => (Mul, S1, T1),
            P6 => (Mul, S2, T2),
            P7 => (Mul, S3, T3),
            U1 => (Add, P1, P2),
            U2 => (Add, P1, P6),
            U3 => (Add, U2, P7),
            U4 => (Add, U2, P5),
            U5 => (Add, U4, P3),
            U6 => (Sub, U3, P4),
            U7 => (Add, U3, P5),
        })
    }

    pub(crate) fn input_at(loc: Loc) -> Option<Sym> {
        use Sym::*;
        Some(match loc {
            Loc::A11 => A11,
            Loc::A12 => A12,
            Loc::A21 => A21,
            Loc::A22 => A22,
            Loc::B11 => B11,
            Loc::B12 => B12,
            Loc::B21 => B21,
            Loc::B22 => B22,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepOp {
    Add,
    Sub,
    /// Recursive block product.
    Mul,
}

/// One operand read by a step: the value it expects and where it reads it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Source {
    pub sym: Sym,
    pub loc: Loc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScheduleStep {
    /// 1-based row number in the published table.
    pub index: usize,
    pub result: Sym,
    pub op: StepOp,
    pub lhs: Source,
    pub rhs: Source,
    pub dst: Loc,
}

impl fmt::Display for ScheduleStep {
    /// `step 7: P1 = A11*B11 -> C11`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.op {
            StepOp::Add => '+',
            StepOp::Sub => '-',
            StepOp::Mul => '*',
        };
        write!(
            f,
            "step {}: {:?} = {:?}{}{:?} -> {:?}",
            self.index, self.result, self.lhs.sym, op, self.rhs.sym, self.dst
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScheduleKind {
    TwoTemp,
    InPlace,
}

const fn step(
    index: usize,
    result: Sym,
    op: StepOp,
    lhs: (Sym, Loc),
    rhs: (Sym, Loc),
    dst: Loc,
) -> ScheduleStep {
    ScheduleStep {
        index,
        result,
        op,
        lhs: Source { sym: lhs.0, loc: lhs.1 },
        rhs: Source { sym: rhs.0, loc: rhs.1 },
        dst,
    }
}

use StepOp::{Add, Mul, Sub};

/// Two-temporary schedule; `X` and `Y` hold the S and T operands.
pub const TWO_TEMP_TABLE: [ScheduleStep; 22] = [
    step(1, Sym::S3, Sub, (Sym::A11, Loc::A11), (Sym::A21, Loc::A21), Loc::X),
    step(2, Sym::T3, Sub, (Sym::B22, Loc::B22), (Sym::B12, Loc::B12), Loc::Y),
    step(3, Sym::P7, Mul, (Sym::S3, Loc::X), (Sym::T3, Loc::Y), Loc::C21),
    step(4, Sym::S1, Add, (Sym::A21, Loc::A21), (Sym::A22, Loc::A22), Loc::X),
    step(5, Sym::T1, Sub, (Sym::B12, Loc::B12), (Sym::B11, Loc::B11), Loc::Y),
    step(6, Sym::P5, Mul, (Sym::S1, Loc::X), (Sym::T1, Loc::Y), Loc::C22),
    step(7, Sym::S2, Sub, (Sym::S1, Loc::X), (Sym::A11, Loc::A11), Loc::X),
    step(8, Sym::T2, Sub, (Sym::B22, Loc::B22), (Sym::T1, Loc::Y), Loc::Y),
    step(9, Sym::P6, Mul, (Sym::S2, Loc::X), (Sym::T2, Loc::Y), Loc::C12),
    step(10, Sym::S4, Sub, (Sym::A12, Loc::A12), (Sym::S2, Loc::X), Loc::X),
    step(11, Sym::P3, Mul, (Sym::S4, Loc::X), (Sym::B22, Loc::B22), Loc::C11),
    step(12, Sym::P1, Mul, (Sym::A11, Loc::A11), (Sym::B11, Loc::B11), Loc::X),
    step(13, Sym::U2, Add, (Sym::P1, Loc::X), (Sym::P6, Loc::C12), Loc::C12),
    step(14, Sym::U3, Add, (Sym::U2, Loc::C12), (Sym::P7, Loc::C21), Loc::C21),
    step(15, Sym::U4, Add, (Sym::U2, Loc::C12), (Sym::P5, Loc::C22), Loc::C12),
    step(16, Sym::U7, Add, (Sym::U3, Loc::C21), (Sym::P5, Loc::C22), Loc::C22),
    step(17, Sym::U5, Add, (Sym::U4, Loc::C12), (Sym::P3, Loc::C11), Loc::C12),
    step(18, Sym::T4, Sub, (Sym::T2, Loc::Y), (Sym::B21, Loc::B21), Loc::Y),
    step(19, Sym::P4, Mul, (Sym::A22, Loc::A22), (Sym::T4, Loc::Y), Loc::C11),
    step(20, Sym::U6, Sub, (Sym::U3, Loc::C21), (Sym::P4, Loc::C11), Loc::C21),
    step(21, Sym::P2, Mul, (Sym::A12, Loc::A12), (Sym::B21, Loc::B21), Loc::C11),
    step(22, Sym::U1, Add, (Sym::P1, Loc::X), (Sym::P2, Loc::C11), Loc::C11),
];

/// In-place schedule; every intermediate lands in a quadrant of A, B or C.
pub const IN_PLACE_TABLE: [ScheduleStep; 22] = [
    step(1, Sym::S3, Sub, (Sym::A11, Loc::A11), (Sym::A21, Loc::A21), Loc::C11),
    step(2, Sym::S1, Add, (Sym::A21, Loc::A21), (Sym::A22, Loc::A22), Loc::A21),
    step(3, Sym::T1, Sub, (Sym::B12, Loc::B12), (Sym::B11, Loc::B11), Loc::C22),
    step(4, Sym::T3, Sub, (Sym::B22, Loc::B22), (Sym::B12, Loc::B12), Loc::B12),
    step(5, Sym::P7, Mul, (Sym::S3, Loc::C11), (Sym::T3, Loc::B12), Loc::C21),
    step(6, Sym::S2, Sub, (Sym::S1, Loc::A21), (Sym::A11, Loc::A11), Loc::C12),
    step(7, Sym::P1, Mul, (Sym::A11, Loc::A11), (Sym::B11, Loc::B11), Loc::C11),
    step(8, Sym::T2, Sub, (Sym::B22, Loc::B22), (Sym::T1, Loc::C22), Loc::B11),
    step(9, Sym::P5, Mul, (Sym::S1, Loc::A21), (Sym::T1, Loc::C22), Loc::A11),
    step(10, Sym::T4, Sub, (Sym::T2, Loc::B11), (Sym::B21, Loc::B21), Loc::C22),
    step(11, Sym::P4, Mul, (Sym::A22, Loc::A22), (Sym::T4, Loc::C22), Loc::A21),
    step(12, Sym::S4, Sub, (Sym::A12, Loc::A12), (Sym::S2, Loc::C12), Loc::A22),
    step(13, Sym::P6, Mul, (Sym::S2, Loc::C12), (Sym::T2, Loc::B11), Loc::C22),
    step(14, Sym::U2, Add, (Sym::P1, Loc::C11), (Sym::P6, Loc::C22), Loc::C22),
    step(15, Sym::P2, Mul, (Sym::A12, Loc::A12), (Sym::B21, Loc::B21), Loc::C12),
    step(16, Sym::U1, Add, (Sym::P1, Loc::C11), (Sym::P2, Loc::C12), Loc::C11),
    step(17, Sym::U4, Add, (Sym::U2, Loc::C22), (Sym::P5, Loc::A11), Loc::C12),
    step(18, Sym::U3, Add, (Sym::U2, Loc::C22), (Sym::P7, Loc::C21), Loc::C22),
    step(19, Sym::U6, Sub, (Sym::U3, Loc::C22), (Sym::P4, Loc::A21), Loc::C21),
    step(20, Sym::U7, Add, (Sym::U3, Loc::C22), (Sym::P5, Loc::A11), Loc::C22),
    step(21, Sym::P3, Mul, (Sym::S4, Loc::A22), (Sym::B22, Loc::B22), Loc::A12),
    step(22, Sym::U5, Add, (Sym::U4, Loc::C12), (Sym::P3, Loc::A12), Loc::C12),
];

pub fn schedule_table(kind: ScheduleKind) -> &'static [ScheduleStep; 22] {
    match kind {
        ScheduleKind::TwoTemp => &TWO_TEMP_TABLE,
        ScheduleKind::InPlace => &IN_PLACE_TABLE,
    }
}
