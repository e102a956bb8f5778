//! The top-level execution loop.
//!
//! Each iteration classifies the position, then either lets the machine make
//! one move, reads one user event, or stops. Events are only read at stable
//! positions where the user can move.

use std::collections::VecDeque;
use std::fmt;
use std::sync::mpsc::Receiver;

use serde::Serialize;
use thiserror::Error;

use crate::ast::{Address, Event, Goal, ProgramD, Status, Subst, Value};
use crate::machine::{ex_m_step, EngineError, Limits, MoveInfo};
use crate::parser::Program;
use crate::pretty;
use crate::stability::{explain, StabilityReport};
use crate::user::{exs_apply, sole_switchable, SwitchResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunState {
    pub program: ProgramD,
    pub goal: Goal,
    pub theta: Subst,
    pub output_log: Vec<String>,
    pub move_count: usize,
    pub status: Status,
}

/// An event as typed: `esc <path>` or a bare `esc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EventInput {
    At(Address),
    /// Targets the only switchable choice.
    Bare,
}

impl fmt::Display for EventInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventInput::At(a) => write!(f, "esc {a}"),
            EventInput::Bare => f.write_str("esc"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct EventSyntaxError {
    pub line: usize,
    pub message: String,
}

/// Parses one event line. Blank lines and `%` comments yield `None`.
pub fn parse_event_line(line: &str) -> Result<Option<EventInput>, String> {
    let text = line.split('%').next().unwrap_or("").trim();
    if text.is_empty() {
        return Ok(None);
    }
    let mut words = text.split_whitespace();
    if words.next() != Some("esc") {
        return Err(format!("expected `esc <path>`, found `{text}`"));
    }
    let ev = match words.next() {
        None => EventInput::Bare,
        Some(path) => EventInput::At(path.parse().map_err(|e| format!("{e}"))?),
    };
    if let Some(extra) = words.next() {
        return Err(format!("unexpected `{extra}` after event"));
    }
    Ok(Some(ev))
}

/// Parses a scripted event file.
pub fn parse_event_script(text: &str) -> Result<Vec<EventInput>, EventSyntaxError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        match parse_event_line(line) {
            Ok(Some(ev)) => out.push(ev),
            Ok(None) => {}
            Err(message) => return Err(EventSyntaxError { line: i + 1, message }),
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceKind {
    Interactive,
    Scripted,
    Session,
}

/// Where user events come from.
pub enum EventSource {
    /// A finite list consumed front to back.
    Scripted(VecDeque<EventInput>),
    /// A producer running elsewhere; reads block until an event arrives or
    /// the producer hangs up.
    Channel(SourceKind, Receiver<EventInput>),
}

impl EventSource {
    pub fn scripted(events: impl IntoIterator<Item = EventInput>) -> Self {
        EventSource::Scripted(events.into_iter().collect())
    }

    pub fn kind(&self) -> SourceKind {
        match self {
            EventSource::Scripted(_) => SourceKind::Scripted,
            EventSource::Channel(kind, _) => *kind,
        }
    }

    fn next(&mut self) -> Option<EventInput> {
        match self {
            EventSource::Scripted(q) => q.pop_front(),
            EventSource::Channel(_, rx) => rx.recv().ok(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Succeeded,
    Failed,
    StableWaiting,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Succeeded => 0,
            Verdict::Failed => 1,
            Verdict::StableWaiting => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Succeeded => "Succeeded",
            Verdict::Failed => "Failed",
            Verdict::StableWaiting => "StableWaiting",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RunError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("move limit of {0} reached")]
    MoveLimit(usize),
    #[error("invalid event `{event}`: {reason}")]
    InvalidEvent { event: String, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEntry {
    /// Classification at the head of a loop iteration.
    Status(StabilityReport),
    Move {
        index: usize,
        info: MoveInfo,
        output: Option<String>,
    },
    Event(SwitchResult),
    /// An interactive event that could not be applied and was skipped.
    Rejected(RunError),
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEntry::Status(r) => write!(f, "STATUS {}", r.status),
            TraceEntry::Move { index, info, .. } => write!(f, "MOVE {index}: {info}"),
            TraceEntry::Event(r) => write!(
                f,
                "EVENT esc {}: {}",
                r.target,
                if r.switched { "switched" } else { "no-op" }
            ),
            TraceEntry::Rejected(e) => write!(f, "REJECTED {e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub verdict: Verdict,
    pub state: RunState,
    pub diagnostic: Option<String>,
}

/// Owns one run's state and exposes the loop's individual steps.
#[derive(Clone, Debug)]
pub struct Runner {
    state: RunState,
    limits: Limits,
}

impl Runner {
    /// The initial status is computed eagerly.
    pub fn new(program: Program, limits: Limits) -> Result<Self, RunError> {
        let mut runner = Runner {
            state: RunState {
                program: program.decls,
                goal: program.goal,
                theta: Subst::new(),
                output_log: Vec::new(),
                move_count: 0,
                status: Status::MachineMove,
            },
            limits,
        };
        runner.classify()?;
        Ok(runner)
    }

    pub fn state(&self) -> &RunState {
        &self.state
    }

    pub fn into_state(self) -> RunState {
        self.state
    }

    pub fn classify(&mut self) -> Result<StabilityReport, RunError> {
        let s = &self.state;
        let report = explain(&s.program, &s.goal, &s.theta, self.limits)?;
        self.state.status = report.status;
        Ok(report)
    }

    /// Makes one machine move. Only valid at a `MachineMove` position.
    pub fn machine_move(&mut self) -> Result<(MoveInfo, Option<String>), RunError> {
        if self.state.move_count >= self.limits.max_moves {
            return Err(RunError::MoveLimit(self.limits.max_moves));
        }
        let s = &self.state;
        let outcome = ex_m_step(&s.program, &s.goal, &s.theta, self.limits)?
            .filter(|o| o.moved)
            .expect("machine_move called without an available move");
        let line = outcome.output.into_iter().next();
        self.state.goal = outcome.new_goal;
        self.state.theta = outcome.new_theta;
        self.state.output_log.extend(line.clone());
        self.state.move_count += 1;
        Ok((outcome.info.expect("moved outcome carries info"), line))
    }

    pub fn resolve_event(&self, input: &EventInput) -> Result<Event, RunError> {
        let address = match input {
            EventInput::At(a) => a.clone(),
            EventInput::Bare => sole_switchable(&self.state.program).ok_or_else(|| RunError::InvalidEvent {
                event: input.to_string(),
                reason: "a bare `esc` needs exactly one switchable choice".into(),
            })?,
        };
        if self.state.program.resolve(&address).is_err() {
            return Err(RunError::InvalidEvent {
                event: input.to_string(),
                reason: "no such declaration node".into(),
            });
        }
        Ok(Event { address })
    }

    /// Applies a user event; the program is untouched when the event is rejected.
    pub fn user_move(&mut self, input: &EventInput) -> Result<SwitchResult, RunError> {
        let ev = self.resolve_event(input)?;
        let result = exs_apply(&self.state.program, &ev).map_err(|e| RunError::InvalidEvent {
            event: input.to_string(),
            reason: e.to_string(),
        })?;
        self.state.program = result.new_program.clone();
        Ok(result)
    }

    /// Runs to a verdict, reporting every loop step to `observe`.
    pub fn run_with(mut self, source: &mut EventSource, mut observe: impl FnMut(&TraceEntry)) -> RunResult {
        let fail = |state: RunState, e: RunError| RunResult {
            verdict: Verdict::Failed,
            state,
            diagnostic: Some(e.to_string()),
        };
        loop {
            let report = match self.classify() {
                Ok(r) => r,
                Err(e) => return fail(self.state, e),
            };
            let status = report.status;
            observe(&TraceEntry::Status(report));
            match status {
                Status::Terminal => {
                    return RunResult {
                        verdict: Verdict::Succeeded,
                        state: self.state,
                        diagnostic: None,
                    }
                }
                Status::MachineStuck => {
                    return RunResult {
                        verdict: Verdict::Failed,
                        state: self.state,
                        diagnostic: Some("no move is available for the machine".into()),
                    }
                }
                Status::MachineMove => match self.machine_move() {
                    Ok((info, output)) => observe(&TraceEntry::Move {
                        index: self.state.move_count,
                        info,
                        output,
                    }),
                    Err(e) => return fail(self.state, e),
                },
                Status::UserMove => loop {
                    let Some(input) = source.next() else {
                        return RunResult {
                            verdict: Verdict::StableWaiting,
                            state: self.state,
                            diagnostic: None,
                        };
                    };
                    match self.user_move(&input) {
                        Ok(r) => {
                            observe(&TraceEntry::Event(r));
                            break;
                        }
                        Err(e) if source.kind() != SourceKind::Scripted => {
                            observe(&TraceEntry::Rejected(e));
                        }
                        Err(e) => return fail(self.state, e),
                    }
                },
            }
        }
    }
}

/// Runs a program against an event source.
pub fn run(program: Program, source: &mut EventSource, limits: Limits) -> RunResult {
    run_observed(program, source, limits, |_| {})
}

pub fn run_observed(
    program: Program,
    source: &mut EventSource,
    limits: Limits,
    observe: impl FnMut(&TraceEntry),
) -> RunResult {
    let initial = RunState {
        program: program.decls.clone(),
        goal: program.goal.clone(),
        theta: Subst::new(),
        output_log: Vec::new(),
        move_count: 0,
        status: Status::MachineMove,
    };
    match Runner::new(program, limits) {
        Ok(runner) => runner.run_with(source, observe),
        Err(e) => RunResult {
            verdict: Verdict::Failed,
            state: initial,
            diagnostic: Some(e.to_string()),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChoiceView {
    pub path: String,
    pub remaining: usize,
    pub active_pretty: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaEntry {
    pub var: String,
    pub kind: &'static str,
    pub value: serde_json::Value,
}

/// Serializable view of a run state. Field order is the wire order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Snapshot {
    pub program_pretty: String,
    pub choices: Vec<ChoiceView>,
    pub goal_pretty: String,
    pub theta: Vec<ThetaEntry>,
    pub status: Status,
    pub move_count: usize,
    pub outputs: Vec<String>,
}

pub fn snapshot(state: &RunState) -> Snapshot {
    let choices = state
        .program
        .choices()
        .into_iter()
        .map(|(addr, node)| ChoiceView {
            path: addr.to_string(),
            remaining: node.children().len(),
            active_pretty: pretty::program(&node.children()[0]),
        })
        .collect();
    let theta = state
        .theta
        .iter()
        .map(|(var, v)| ThetaEntry {
            var: var.clone(),
            kind: v.kind(),
            value: match v {
                Value::Int(n) => serde_json::Value::from(*n),
                Value::Bool(b) => serde_json::Value::from(*b),
                Value::Str(s) | Value::Sym(s) => serde_json::Value::from(s.as_str()),
            },
        })
        .collect();
    Snapshot {
        program_pretty: pretty::program_body(&state.program),
        choices,
        goal_pretty: pretty::goal(&state.goal),
        theta,
        status: state.status,
        move_count: state.move_count,
        outputs: state.output_log.clone(),
    }
}
