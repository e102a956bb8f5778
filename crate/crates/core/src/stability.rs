//! Elementarization and the four-way status classifier.
//!
//! The elementarization of a formula keeps only the live alternative of every
//! choice, turns assignments and prints into falsity and sequencing into
//! conjunction. A position is stable when the elementarization of
//! `program ⊃ goal` holds. Truth is decided by ground evaluation: conditions
//! are evaluated against the active constants and θ, and procedure atoms are
//! unfolded through their first matching active declaration, to a bounded
//! depth.

use std::fmt;

use crate::ast::{Call, Cond, Decl, Goal, ProcDecl, ProgramD, Status, Subst, Value};
use crate::eval::EvalEnv;
use crate::machine::{ex_m_step, EngineError, Limits};
use crate::pretty;
use crate::user::user_move_available;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElemFormula {
    True,
    False,
    Atom(Call),
    Cond(Cond),
    And(Vec<ElemFormula>),
    /// `body ⊃ head`, the reading of a procedure declaration.
    Impl(Box<ElemFormula>, Call),
}

impl fmt::Display for ElemFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElemFormula::True => f.write_str("⊤"),
            ElemFormula::False => f.write_str("⊥"),
            ElemFormula::Atom(c) => f.write_str(&pretty::goal(&Goal::Call(c.clone()))),
            ElemFormula::Cond(c) => f.write_str(&pretty::cond(c)),
            ElemFormula::And(items) if items.is_empty() => f.write_str("⊤"),
            ElemFormula::And(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ∧ ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
            ElemFormula::Impl(body, head) => {
                write!(f, "({body} ⊃ {})", pretty::goal(&Goal::Call(head.clone())))
            }
        }
    }
}

fn conj(a: ElemFormula, b: ElemFormula) -> ElemFormula {
    let mut items = Vec::new();
    for f in [a, b] {
        match f {
            ElemFormula::And(inner) => items.extend(inner),
            other => items.push(other),
        }
    }
    ElemFormula::And(items)
}

pub fn elementarize_goal(g: &Goal) -> ElemFormula {
    match g {
        Goal::Top => ElemFormula::True,
        Goal::Print(_) | Goal::Assign(..) => ElemFormula::False,
        Goal::Call(c) => ElemFormula::Atom(c.clone()),
        Goal::Cond(c) => ElemFormula::Cond(c.clone()),
        Goal::Seq(a, b) => conj(elementarize_goal(a), elementarize_goal(b)),
        Goal::Choice(alts) => elementarize_goal(&alts[0]),
    }
}

/// Constant declarations carry no claim; their content reaches the formula
/// through the evaluation environment instead.
pub fn elementarize_program(p: &ProgramD) -> ElemFormula {
    match p {
        ProgramD::Leaf(Decl::Const(..)) => ElemFormula::True,
        ProgramD::Leaf(Decl::Proc(proc_)) => ElemFormula::Impl(
            Box::new(elementarize_goal(&proc_.body)),
            Call::new(proc_.name.clone(), proc_.head.clone()),
        ),
        ProgramD::And(items) => ElemFormula::And(items.iter().map(elementarize_program).collect()),
        ProgramD::Choice(alts) => elementarize_program(&alts[0]),
    }
}

/// Ground truth of an elementarized formula.
pub struct Truth<'a> {
    env: &'a EvalEnv<'a>,
    defs: Vec<&'a ProcDecl>,
}

impl<'a> Truth<'a> {
    pub fn new(env: &'a EvalEnv<'a>, program: &'a ProgramD) -> Self {
        let defs = program
            .active_view()
            .into_iter()
            .filter_map(|d| match d {
                Decl::Proc(p) => Some(p),
                Decl::Const(..) => None,
            })
            .collect();
        Truth { env, defs }
    }

    pub fn eval(&self, f: &ElemFormula, depth: usize) -> Result<bool, EngineError> {
        Ok(match f {
            ElemFormula::True => true,
            ElemFormula::False => false,
            ElemFormula::Cond(c) => self.env.eval_cond(c).unwrap_or(false),
            ElemFormula::And(items) => {
                for item in items {
                    if !self.eval(item, depth)? {
                        return Ok(false);
                    }
                }
                true
            }
            // Declarations are what atoms are unfolded through, so they
            // hold under that reading.
            ElemFormula::Impl(..) => true,
            ElemFormula::Atom(call) => {
                let args: Result<Vec<Value>, _> = call.args.iter().map(|a| self.env.eval(a)).collect();
                let Ok(args) = args else {
                    return Ok(false);
                };
                let Some((def, bindings)) = self
                    .defs
                    .iter()
                    .filter(|d| d.name == call.name)
                    .find_map(|d| d.match_head(&args).map(|b| (*d, b)))
                else {
                    return Ok(false);
                };
                if depth == 0 {
                    return Err(EngineError::DepthExceeded(0));
                }
                let body = elementarize_goal(&def.body.substitute(&bindings));
                self.eval(&body, depth - 1)?
            }
        })
    }
}

/// Everything that goes into a status decision, for diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub program_elem: ElemFormula,
    pub goal_elem: ElemFormula,
    pub program_truth: bool,
    pub goal_truth: bool,
    pub stable: bool,
    /// A trial machine step makes a move.
    pub machine_move: bool,
    pub user_move: bool,
    pub status: Status,
}

impl fmt::Display for StabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "elem(P) = {}  [{}]", self.program_elem, self.program_truth)?;
        writeln!(f, "elem(G) = {}  [{}]", self.goal_elem, self.goal_truth)?;
        writeln!(f, "stable = {}", self.stable)?;
        writeln!(
            f,
            "moves: machine = {}, user = {}",
            self.machine_move, self.user_move
        )?;
        write!(f, "status: {}", self.status)
    }
}

pub fn explain(p: &ProgramD, g: &Goal, theta: &Subst, limits: Limits) -> Result<StabilityReport, EngineError> {
    let env = EvalEnv::new(p, theta);
    let truth = Truth::new(&env, p);
    let program_elem = elementarize_program(p);
    let goal_elem = elementarize_goal(g);
    let depth_error = |e| match e {
        EngineError::DepthExceeded(_) => EngineError::DepthExceeded(limits.max_unfold),
        other => other,
    };
    let program_truth = truth.eval(&program_elem, limits.max_unfold).map_err(depth_error)?;
    let goal_truth = truth.eval(&goal_elem, limits.max_unfold).map_err(depth_error)?;
    let stable = !program_truth || goal_truth;
    // Trial step on copies; its output is discarded.
    let machine_move = ex_m_step(p, g, theta, limits)?.is_some_and(|o| o.moved);
    let user_move = user_move_available(p);
    let status = match (stable, machine_move, user_move) {
        (false, true, _) => Status::MachineMove,
        (false, false, _) => Status::MachineStuck,
        (true, _, true) => Status::UserMove,
        (true, _, false) => Status::Terminal,
    };
    Ok(StabilityReport {
        program_elem,
        goal_elem,
        program_truth,
        goal_truth,
        stable,
        machine_move,
        user_move,
        status,
    })
}

pub fn stable_status(p: &ProgramD, g: &Goal, theta: &Subst, limits: Limits) -> Result<Status, EngineError> {
    explain(p, g, theta, limits).map(|r| r.status)
}
