//! An interpreter for a small C-like language in which sequential-choice
//! declarations model objects the user can switch with an Esc keystroke.
//!
//! A program is a declaration tree and a main goal. Execution alternates
//! between machine moves (assignments, prints, goal-level switches), made
//! while the position is unstable, and user moves (Esc events that advance a
//! declaration-level choice), read while it is stable.

pub mod ast;
pub mod eval;
pub mod machine;
pub mod parser;
pub mod pretty;
pub mod runtime;
pub mod session;
pub mod stability;
pub mod user;

pub use ast::{Address, Call, CmpOp, Cond, Decl, Event, Expr, Goal, ProcDecl, ProgramD, Status, Subst, Value};
pub use eval::{EvalEnv, EvalError};
pub use machine::{ex_m_step, EngineError, Limits, MoveOutcome};
pub use parser::{parse_program, ParseError, Program};
pub use runtime::{run, snapshot, EventInput, EventSource, RunResult, RunState, Runner, Verdict};
pub use stability::{elementarize_goal, elementarize_program, stable_status, ElemFormula};
pub use user::{exs_apply, user_move_available, SwitchResult};
