//! Newline-delimited JSON session protocol.
//!
//! Requests: `{"load": text}`, `{"event": "dot.path"}`, `{"reset": true}`.
//! Replies: `{"state": snapshot}`, `{"output": line}`, `{"verdict": name}`,
//! `{"ack": {"event": path, "queued": true}}`, `{"error": {"code", "message"}}`.
//!
//! One session drives one run at a time. After every request the engine
//! runs until it needs a user event or reaches a verdict, so every reply to a
//! request is produced before the next request is read.

use std::collections::VecDeque;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::ast::{Address, Status};
use crate::machine::Limits;
use crate::parser::parse_program;
use crate::runtime::{snapshot, EventInput, RunError, Runner, Snapshot, Verdict};

#[derive(Debug, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum Request {
    Load { load: String },
    Event { event: String },
    Reset { reset: bool },
}

#[derive(Debug, Serialize)]
pub struct Ack {
    pub event: String,
    pub queued: bool,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reply {
    State(Snapshot),
    Output(String),
    Verdict(Verdict),
    Ack(Ack),
    Error(ErrorBody),
}

impl Reply {
    fn error(code: &'static str, message: impl Into<String>) -> Reply {
        Reply::Error(ErrorBody {
            code,
            message: message.into(),
        })
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("replies always serialize")
    }
}

pub struct Session {
    source: Option<String>,
    runner: Option<Runner>,
    queue: VecDeque<EventInput>,
    finished: bool,
    limits: Limits,
}

impl Session {
    pub fn new(limits: Limits) -> Self {
        Session {
            source: None,
            runner: None,
            queue: VecDeque::new(),
            finished: false,
            limits,
        }
    }

    /// Loads program text and drives it to its first waiting point.
    pub fn load(&mut self, text: &str) -> Vec<Reply> {
        let program = match parse_program(text) {
            Ok(p) => p,
            Err(e) => return vec![Reply::error("parse_error", e.to_string())],
        };
        self.source = Some(text.to_string());
        self.queue.clear();
        self.finished = false;
        match Runner::new(program, self.limits) {
            Ok(runner) => {
                let mut out = vec![Reply::State(snapshot(runner.state()))];
                self.runner = Some(runner);
                self.drive(&mut out);
                out
            }
            Err(e) => {
                self.runner = None;
                self.finished = true;
                vec![Reply::error("fatal", e.to_string()), Reply::Verdict(Verdict::Failed)]
            }
        }
    }

    pub fn handle_line(&mut self, line: &str) -> Vec<Reply> {
        if line.trim().is_empty() {
            return Vec::new();
        }
        let request = match serde_json::from_str::<Request>(line) {
            Ok(r) => r,
            Err(e) => return vec![Reply::error("bad_json", e.to_string())],
        };
        match request {
            Request::Load { load } => self.load(&load),
            Request::Reset { reset: false } => vec![Reply::error("bad_json", "`reset` must be true")],
            Request::Reset { reset: true } => match self.source.clone() {
                Some(text) => self.load(&text),
                None => vec![Reply::error("no_program", "nothing loaded")],
            },
            Request::Event { event } => self.event(&event),
        }
    }

    fn event(&mut self, path: &str) -> Vec<Reply> {
        let trimmed = path.trim();
        let input = if trimmed.is_empty() || trimmed == "esc" {
            EventInput::Bare
        } else {
            match trimmed.parse::<Address>() {
                Ok(a) => EventInput::At(a),
                Err(e) => return vec![Reply::error("bad_path", e.to_string())],
            }
        };
        let Some(runner) = self.runner.as_mut() else {
            return vec![Reply::error("no_program", "nothing loaded")];
        };
        if self.finished || runner.state().status != Status::UserMove {
            self.queue.push_back(input);
            return vec![Reply::Ack(Ack {
                event: trimmed.to_string(),
                queued: true,
            })];
        }
        if let Err(e) = runner.resolve_event(&input) {
            return vec![Reply::error("bad_path", e.to_string())];
        }
        let mut out = Vec::new();
        self.apply(&input, &mut out);
        out
    }

    fn apply(&mut self, input: &EventInput, out: &mut Vec<Reply>) {
        let runner = self.runner.as_mut().expect("apply with a loaded program");
        match runner.user_move(input) {
            Ok(_) => {
                if self.classify(out) {
                    let runner = self.runner.as_ref().unwrap();
                    out.push(Reply::State(snapshot(runner.state())));
                    self.drive(out);
                }
            }
            Err(e) => out.push(Reply::error("bad_path", e.to_string())),
        }
    }

    /// Re-classifies; on a fatal error emits it with a failed verdict.
    fn classify(&mut self, out: &mut Vec<Reply>) -> bool {
        let runner = self.runner.as_mut().unwrap();
        match runner.classify() {
            Ok(_) => true,
            Err(e) => {
                self.fail(e, out);
                false
            }
        }
    }

    fn fail(&mut self, e: RunError, out: &mut Vec<Reply>) {
        out.push(Reply::error("fatal", e.to_string()));
        out.push(Reply::Verdict(Verdict::Failed));
        self.finished = true;
    }

    /// Makes machine moves and consumes queued events until the run waits
    /// for the user or ends.
    fn drive(&mut self, out: &mut Vec<Reply>) {
        loop {
            let runner = self.runner.as_mut().unwrap();
            match runner.state().status {
                Status::MachineMove => match runner.machine_move() {
                    Ok((_, line)) => {
                        if let Some(line) = line {
                            out.push(Reply::Output(line));
                        }
                        if !self.classify(out) {
                            return;
                        }
                        let runner = self.runner.as_ref().unwrap();
                        out.push(Reply::State(snapshot(runner.state())));
                    }
                    Err(e) => return self.fail(e, out),
                },
                Status::UserMove => {
                    let Some(input) = self.queue.pop_front() else {
                        return;
                    };
                    if let Err(e) = runner.resolve_event(&input) {
                        out.push(Reply::error("bad_path", e.to_string()));
                        continue;
                    }
                    return self.apply(&input, out);
                }
                Status::Terminal => {
                    out.push(Reply::Verdict(Verdict::Succeeded));
                    self.finished = true;
                    return;
                }
                Status::MachineStuck => {
                    out.push(Reply::Verdict(Verdict::Failed));
                    self.finished = true;
                    return;
                }
            }
        }
    }
}

/// Serves one session over a line transport until the reader closes.
pub fn serve<R: BufRead, W: Write>(initial: Option<&str>, limits: Limits, reader: R, mut writer: W) -> io::Result<()> {
    let mut session = Session::new(limits);
    let emit = |replies: Vec<Reply>, w: &mut W| -> io::Result<()> {
        for r in replies {
            writeln!(w, "{}", r.to_line())?;
        }
        w.flush()
    };
    if let Some(text) = initial {
        emit(session.load(text), &mut writer)?;
    }
    for line in reader.lines() {
        let line = line?;
        emit(session.handle_line(&line), &mut writer)?;
    }
    Ok(())
}
