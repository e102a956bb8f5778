//! Machine moves: goal reduction and backchaining until exactly one move is
//! made.
//!
//! A move is an assignment, a print, or a switch of a goal-level choice. A
//! step either makes one move, succeeds without moving (the goal is already
//! reduced as far as it goes), or is stuck. Moves are never undone.
//!
//! A goal-level choice first reduces inside its live alternative and only
//! switches to the next one when the live alternative is stuck. Switching
//! unconditionally would discard every first alternative before it ran.

use std::fmt;

use thiserror::Error;

use crate::ast::{Call, Decl, Goal, ProgramD, Subst, Value};
use crate::eval::EvalEnv;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Nesting bound for procedure calls, both when backchaining and when
    /// unfolding atoms during stability checks.
    pub max_unfold: usize,
    /// Machine moves allowed in one run.
    pub max_moves: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_unfold: 64,
            max_moves: 10_000,
        }
    }
}

/// Conditions that abort a run outright.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("print of unbound variable `{0}`")]
    UnboundPrint(String),
    #[error("procedure unfolding exceeded depth {0}")]
    DepthExceeded(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Effect {
    Bind(String, Value),
    Output(String),
    Switch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveInfo {
    pub effect: Effect,
    /// Where the move happened in the new goal (sequence children are 0 and
    /// 1, choice alternatives by index).
    pub path: Vec<usize>,
    /// The move happened inside a procedure body expanded by this step.
    pub via_call: bool,
    /// The move happened inside the live alternative of a goal choice.
    pub in_choice: bool,
}

impl MoveInfo {
    /// Short tag used in traces.
    pub fn rule(&self) -> &'static str {
        if self.via_call {
            "call"
        } else if self.in_choice {
            "advance"
        } else {
            match self.effect {
                Effect::Bind(..) => "8",
                Effect::Output(_) => "9",
                Effect::Switch => "11",
            }
        }
    }
}

impl fmt::Display for MoveInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = if self.path.is_empty() {
            ".".to_string()
        } else {
            self.path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
        };
        let delta = match &self.effect {
            Effect::Bind(x, v) => format!("{x}:={}:{}", v.kind(), crate::pretty::expr(&v.to_expr())),
            _ => "-".to_string(),
        };
        write!(f, "rule={} goal-path={path} theta={delta}", self.rule())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveOutcome {
    pub moved: bool,
    pub new_goal: Goal,
    pub new_theta: Subst,
    /// At most one line.
    pub output: Vec<String>,
    pub info: Option<MoveInfo>,
}

enum Red {
    /// New goal, effect, reversed path, via_call, in_choice.
    Moved(Goal, Effect, Vec<usize>, bool, bool),
    Idle,
    Stuck,
}

struct Ctx<'a> {
    program: &'a ProgramD,
    env: EvalEnv<'a>,
    limits: Limits,
}

impl Ctx<'_> {
    fn step(&self, g: &Goal, depth: usize) -> Result<Red, EngineError> {
        Ok(match g {
            Goal::Top => Red::Idle,
            Goal::Cond(c) => match self.env.eval_cond(c) {
                Ok(true) => Red::Idle,
                _ => Red::Stuck,
            },
            Goal::Assign(x, e) => match self.env.eval(e) {
                Ok(v) => Red::Moved(Goal::Top, Effect::Bind(x.clone(), v), Vec::new(), false, false),
                Err(_) => Red::Stuck,
            },
            Goal::Print(x) => {
                let v = self
                    .env
                    .theta()
                    .get(x)
                    .ok_or_else(|| EngineError::UnboundPrint(x.clone()))?;
                Red::Moved(Goal::Top, Effect::Output(v.to_string()), Vec::new(), false, false)
            }
            Goal::Call(call) => self.call(call, depth)?,
            Goal::Seq(a, b) => match self.step(a, depth)? {
                Red::Moved(a2, eff, mut path, vc, ic) => {
                    path.push(0);
                    Red::Moved(Goal::Seq(Box::new(a2), b.clone()), eff, path, vc, ic)
                }
                Red::Stuck => Red::Stuck,
                Red::Idle => match self.step(b, depth)? {
                    Red::Moved(b2, eff, mut path, vc, ic) => {
                        path.push(1);
                        Red::Moved(Goal::Seq(a.clone(), Box::new(b2)), eff, path, vc, ic)
                    }
                    other => other,
                },
            },
            Goal::Choice(alts) => match self.step(&alts[0], depth)? {
                Red::Moved(first, eff, mut path, vc, _) => {
                    path.push(0);
                    let mut next = alts.clone();
                    next[0] = first;
                    Red::Moved(Goal::Choice(next), eff, path, vc, true)
                }
                Red::Idle => Red::Idle,
                Red::Stuck if alts.len() >= 2 => Red::Moved(
                    Goal::Choice(alts[1..].to_vec()),
                    Effect::Switch,
                    Vec::new(),
                    false,
                    false,
                ),
                Red::Stuck => Red::Stuck,
            },
        })
    }

    /// A procedure call. Arguments are evaluated before matching; the
    /// call is replaced by the instantiated body once that body moves.
    fn call(&self, call: &Call, depth: usize) -> Result<Red, EngineError> {
        if depth >= self.limits.max_unfold {
            return Err(EngineError::DepthExceeded(self.limits.max_unfold));
        }
        let args: Result<Vec<Value>, _> = call.args.iter().map(|a| self.env.eval(a)).collect();
        let Ok(args) = args else {
            return Ok(Red::Stuck);
        };
        self.bch(self.program, call, &args, depth + 1)
    }

    fn bch(&self, d: &ProgramD, call: &Call, args: &[Value], depth: usize) -> Result<Red, EngineError> {
        match d {
            ProgramD::Leaf(Decl::Proc(p)) if p.name == call.name => {
                let Some(bindings) = p.match_head(args) else {
                    return Ok(Red::Stuck);
                };
                let body = p.body.substitute(&bindings);
                Ok(match self.step(&body, depth)? {
                    Red::Moved(g, eff, path, _, ic) => Red::Moved(g, eff, path, true, ic),
                    other => other,
                })
            }
            ProgramD::Leaf(_) => Ok(Red::Stuck),
            // Left-first: the right conjunct is tried only when the left
            // one yields no success.
            ProgramD::And(items) => {
                for item in items {
                    match self.bch(item, call, args, depth)? {
                        Red::Stuck => continue,
                        other => return Ok(other),
                    }
                }
                Ok(Red::Stuck)
            }
            ProgramD::Choice(alts) => self.bch(&alts[0], call, args, depth),
        }
    }
}

/// Attempts one machine move. `Ok(None)` means no move exists.
pub fn ex_m_step(
    program: &ProgramD,
    goal: &Goal,
    theta: &Subst,
    limits: Limits,
) -> Result<Option<MoveOutcome>, EngineError> {
    let ctx = Ctx {
        program,
        env: EvalEnv::new(program, theta),
        limits,
    };
    Ok(match ctx.step(goal, 0)? {
        Red::Stuck => None,
        Red::Idle => Some(MoveOutcome {
            moved: false,
            new_goal: goal.clone(),
            new_theta: theta.clone(),
            output: Vec::new(),
            info: None,
        }),
        Red::Moved(new_goal, effect, mut path, via_call, in_choice) => {
            path.reverse();
            let (new_theta, output) = match &effect {
                Effect::Bind(x, v) => (theta.bind(x.clone(), v.clone()), Vec::new()),
                Effect::Output(line) => (theta.clone(), vec![line.clone()]),
                Effect::Switch => (theta.clone(), Vec::new()),
            };
            Some(MoveOutcome {
                moved: true,
                new_goal,
                new_theta,
                output,
                info: Some(MoveInfo {
                    effect,
                    path,
                    via_call,
                    in_choice,
                }),
            })
        }
    })
}
