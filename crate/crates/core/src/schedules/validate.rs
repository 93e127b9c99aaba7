use std::collections::HashSet;
use std::fmt;

use super::{Loc, ScheduleStep, StepOp, Sym};
use crate::error::{MatmulError, Result};

/// Outcome of the symbolic dataflow check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Legality {
    Legal {
        /// Per execution position: true for a product whose operand
        /// locations are never read again before being overwritten, i.e. the
        /// recursive call may clobber them.
        clobber_safe: Vec<bool>,
        /// Whether any step stores into an input quadrant.
        writes_inputs: bool,
    },
    Illegal(Violation),
}

impl Legality {
    pub fn is_legal(&self) -> bool {
        matches!(self, Legality::Legal { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Undefined,
    Value(Sym),
    /// Operand storage handed to a product that was allowed to overwrite it.
    Clobbered,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A step read a location that no longer (or not yet) holds the value
    /// it names.
    StaleRead {
        /// 1-based execution position.
        position: usize,
        /// Table row of the offending step.
        step: usize,
        loc: Loc,
        expected: Sym,
        found: Slot,
    },
    /// After the last step an output quadrant does not hold its result.
    WrongOutput { loc: Loc, expected: Sym, found: Slot },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::StaleRead { position, step, loc, expected, found } => write!(
                f,
                "position {position} (step {step}) reads {expected:?} from {loc:?}, which holds {found:?}"
            ),
            Violation::WrongOutput { loc, expected, found } => {
                write!(f, "{loc:?} ends holding {found:?}, expected {expected:?}")
            }
        }
    }
}

const OUTPUTS: [(Loc, Sym); 4] =
    [(Loc::C11, Sym::U1), (Loc::C12, Sym::U5), (Loc::C21, Sym::U6), (Loc::C22, Sym::U7)];

fn check_shape(steps: &[ScheduleStep]) -> Result<()> {
    let bad = |msg: String| Err(MatmulError::Schedule(msg));
    if steps.len() != 22 {
        return bad(format!("expected 22 steps, got {}", steps.len()));
    }
    let products = steps.iter().filter(|s| s.op == StepOp::Mul).count();
    if products != 7 {
        return bad(format!("expected 7 recursive products, got {products}"));
    }
    let mut indices = HashSet::new();
    let mut results = HashSet::new();
    for s in steps {
        if !(1..=22).contains(&s.index) || !indices.insert(s.index) {
            return bad(format!("step index {} is out of range or repeated", s.index));
        }
        if !results.insert(s.result) {
            return bad(format!("{:?} is computed more than once", s.result));
        }
        match s.result.definition() {
            None => return bad(format!("step {} overwrites input symbol {:?}", s.index, s.result)),
            Some(def) if def != (s.op, s.lhs.sym, s.rhs.sym) => {
                return bad(format!(
                    "step {} computes {:?} as {:?}({:?}, {:?}), but it is defined as {:?}",
                    s.index, s.result, s.op, s.lhs.sym, s.rhs.sym, def
                ))
            }
            Some(_) => {}
        }
        if s.op == StepOp::Mul && (s.dst == s.lhs.loc || s.dst == s.rhs.loc) {
            return bad(format!("product at step {} overwrites its own operand", s.index));
        }
    }
    Ok(())
}

/// Symbolic execution. `clobber_at` marks one execution position whose
/// product operands become garbage afterwards.
fn simulate(steps: &[ScheduleStep], clobber_at: Option<usize>) -> Option<Violation> {
    let mut state = [Slot::Undefined; 14];
    for loc in Loc::ALL {
        if let Some(sym) = Sym::input_at(loc) {
            state[loc.index()] = Slot::Value(sym);
        }
    }
    for (pos, s) in steps.iter().enumerate() {
        for src in [s.lhs, s.rhs] {
            let found = state[src.loc.index()];
            if found != Slot::Value(src.sym) {
                return Some(Violation::StaleRead {
                    position: pos + 1,
                    step: s.index,
                    loc: src.loc,
                    expected: src.sym,
                    found,
                });
            }
        }
        if clobber_at == Some(pos) {
            state[s.lhs.loc.index()] = Slot::Clobbered;
            state[s.rhs.loc.index()] = Slot::Clobbered;
        }
        state[s.dst.index()] = Slot::Value(s.result);
    }
    OUTPUTS.iter().find_map(|&(loc, expected)| {
        let found = state[loc.index()];
        (found != Slot::Value(expected)).then_some(Violation::WrongOutput { loc, expected, found })
    })
}

/// Checks a 22-step schedule: every read must find exactly the value the
/// step names, and the four output quadrants must end holding U1, U5, U6
/// and U7. For legal schedules it also reports which products may clobber
/// their operands.
pub fn validate_schedule(steps: &[ScheduleStep]) -> Result<Legality> {
    check_shape(steps)?;
    if let Some(v) = simulate(steps, None) {
        return Ok(Legality::Illegal(v));
    }
    let clobber_safe = steps
        .iter()
        .enumerate()
        .map(|(pos, s)| s.op == StepOp::Mul && simulate(steps, Some(pos)).is_none())
        .collect();
    Ok(Legality::Legal { clobber_safe, writes_inputs: steps.iter().any(|s| s.dst.is_input()) })
}
