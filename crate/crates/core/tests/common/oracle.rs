//! Reference model for straight-line programs, written without any of the
//! interpreter's machinery.
//!
//! Declarations are top-level constant choices. The goal is a list of items;
//! an item is a plain statement or a choice of statement lists. The model
//! keeps a "done" flag per statement and scans left to right: the first
//! unfinished assignment or print is the next machine move, a false
//! condition blocks (and inside a choice drops the live alternative when
//! another one remains). When nothing is pending the position is stable and
//! the next event is consumed.

use std::collections::HashMap;
use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::Rng;

use super::R;

#[derive(Clone, Debug, PartialEq)]
pub enum Val {
    Int(i64),
    Sym(&'static str),
}

#[derive(Clone, Debug)]
pub enum Ex {
    Lit(Val),
    Const(usize),
    Var(usize),
    /// `var + 1`
    Inc(usize),
}

#[derive(Clone, Debug)]
pub enum St {
    Assign(usize, Ex),
    Print(usize),
    Eq(Ex, Ex),
    Ne(Ex, Ex),
    Lt(Ex, Ex),
}

#[derive(Clone, Debug)]
pub enum Item {
    St(St),
    Choice(Vec<Vec<St>>),
}

#[derive(Clone, Debug)]
pub struct Case {
    /// One entry per top-level declaration: the values of constant `c{i}`.
    /// A single value is a plain declaration.
    pub decls: Vec<Vec<Val>>,
    pub goal: Vec<Item>,
}

const VAR_NAMES: &[&str] = &["x", "y"];
const SYMS: &[&str] = &["A", "B"];

fn val(rng: &mut R) -> Val {
    if rng.gen_bool(0.7) {
        Val::Int(rng.gen_range(0..3))
    } else {
        Val::Sym(SYMS.choose(rng).unwrap())
    }
}

fn ex(rng: &mut R, consts: usize) -> Ex {
    match rng.gen_range(0..5) {
        0 | 1 => Ex::Const(rng.gen_range(0..consts)),
        2 => Ex::Lit(val(rng)),
        3 => Ex::Var(rng.gen_range(0..VAR_NAMES.len())),
        _ => Ex::Inc(rng.gen_range(0..VAR_NAMES.len())),
    }
}

fn st(rng: &mut R, consts: usize) -> St {
    match rng.gen_range(0..7) {
        0 | 1 => St::Assign(rng.gen_range(0..VAR_NAMES.len()), ex(rng, consts)),
        2 => St::Print(rng.gen_range(0..VAR_NAMES.len())),
        3 | 4 => St::Eq(Ex::Const(rng.gen_range(0..consts)), ex(rng, consts)),
        5 => St::Ne(ex(rng, consts), ex(rng, consts)),
        _ => St::Lt(ex(rng, consts), ex(rng, consts)),
    }
}

impl Case {
    pub fn random(rng: &mut R) -> Case {
        let k = rng.gen_range(1..=3);
        let decls: Vec<Vec<Val>> = (0..k)
            .map(|_| {
                let n = if rng.gen_bool(0.85) { rng.gen_range(2..=3) } else { 1 };
                (0..n).map(|_| val(rng)).collect()
            })
            .collect();
        let items = rng.gen_range(1..=4);
        let goal = (0..items)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    let alts = rng.gen_range(2..=3);
                    Item::Choice(
                        (0..alts)
                            .map(|_| (0..rng.gen_range(1..=3)).map(|_| st(rng, k)).collect())
                            .collect(),
                    )
                } else {
                    Item::St(st(rng, k))
                }
            })
            .collect();
        let mut case = Case { decls, goal };
        case.ground_untargeted_vars();
        case
    }

    /// A variable that is never assigned or printed would read as a symbol
    /// in source text, so such references become literals.
    fn ground_untargeted_vars(&mut self) {
        let mut targeted = [false; 2];
        let mut mark = |s: &St| match s {
            St::Assign(v, _) | St::Print(v) => targeted[*v] = true,
            _ => {}
        };
        for item in &self.goal {
            match item {
                Item::St(s) => mark(s),
                Item::Choice(alts) => alts.iter().flatten().for_each(&mut mark),
            }
        }
        let fix = |e: &mut Ex| match e {
            Ex::Var(v) | Ex::Inc(v) if !targeted[*v] => *e = Ex::Lit(Val::Int(0)),
            _ => {}
        };
        let fix_st = |s: &mut St| match s {
            St::Assign(_, e) => fix(e),
            St::Print(_) => {}
            St::Eq(a, b) | St::Ne(a, b) | St::Lt(a, b) => {
                fix(a);
                fix(b);
            }
        };
        for item in &mut self.goal {
            match item {
                Item::St(s) => fix_st(s),
                Item::Choice(alts) => alts.iter_mut().flatten().for_each(fix_st),
            }
        }
    }

    /// Number of effective switches the user can make.
    pub fn switch_budget(&self) -> usize {
        self.decls.iter().map(|d| d.len() - 1).sum()
    }

    pub fn source(&self) -> String {
        let lit = |v: &Val| match v {
            Val::Int(n) => n.to_string(),
            Val::Sym(s) => s.to_string(),
        };
        let ex = |e: &Ex| match e {
            Ex::Lit(v) => lit(v),
            Ex::Const(i) => format!("c{i}"),
            Ex::Var(v) => VAR_NAMES[*v].to_string(),
            Ex::Inc(v) => format!("{} + 1", VAR_NAMES[*v]),
        };
        let st = |s: &St| match s {
            St::Assign(v, e) => format!("{} = {}", VAR_NAMES[*v], ex(e)),
            St::Print(v) => format!("print({})", VAR_NAMES[*v]),
            St::Eq(a, b) => format!("{} == {}", ex(a), ex(b)),
            St::Ne(a, b) => format!("{} != {}", ex(a), ex(b)),
            St::Lt(a, b) => format!("{} < {}", ex(a), ex(b)),
        };
        let mut out = String::from("decls {\n");
        for (i, vals) in self.decls.iter().enumerate() {
            let alts: Vec<String> = vals.iter().map(|v| format!("c{i} == {}", lit(v))).collect();
            if alts.len() == 1 {
                let _ = writeln!(out, "  {};", alts[0]);
            } else {
                let _ = writeln!(out, "  choice({});", alts.join(", "));
            }
        }
        out.push_str("}\ngoal {\n");
        let items: Vec<String> = self
            .goal
            .iter()
            .map(|item| match item {
                Item::St(s) => st(s),
                Item::Choice(alts) => {
                    let alts: Vec<String> = alts
                        .iter()
                        .map(|a| a.iter().map(st).collect::<Vec<_>>().join("; "))
                        .collect();
                    format!("choice({})", alts.join(", "))
                }
            })
            .collect();
        let _ = writeln!(out, "  {}", items.join(";\n  "));
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Succeeded,
    Failed,
    StableWaiting,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRun {
    pub outputs: Vec<String>,
    pub verdict: OracleVerdict,
}

enum Scan {
    Moved,
    Idle,
    Stuck,
    Fatal,
}

/// Remaining alternatives of an item and done flags for the live one.
type ItemState<'a> = (Vec<&'a [St]>, Vec<bool>);

struct Model<'a> {
    consts: Vec<Vec<Val>>,
    theta: HashMap<usize, Val>,
    outputs: Vec<String>,
    items: Vec<ItemState<'a>>,
}

impl<'a> Model<'a> {
    fn eval(&self, e: &Ex) -> Option<Val> {
        match e {
            Ex::Lit(v) => Some(v.clone()),
            Ex::Const(i) => Some(self.consts[*i][0].clone()),
            Ex::Var(v) => self.theta.get(v).cloned(),
            Ex::Inc(v) => match self.theta.get(v)? {
                Val::Int(n) => Some(Val::Int(n + 1)),
                Val::Sym(_) => None,
            },
        }
    }

    fn holds(&self, s: &St) -> bool {
        match s {
            St::Eq(a, b) => matches!((self.eval(a), self.eval(b)), (Some(x), Some(y)) if x == y),
            St::Ne(a, b) => matches!((self.eval(a), self.eval(b)), (Some(x), Some(y)) if x != y),
            St::Lt(a, b) => matches!(
                (self.eval(a), self.eval(b)),
                (Some(Val::Int(x)), Some(Val::Int(y))) if x < y
            ),
            _ => unreachable!(),
        }
    }

    /// Runs the live statements of one item. `None` means the item is
    /// finished and the scan continues.
    fn scan_item(&mut self, idx: usize) -> Option<Scan> {
        let (alts, done) = &self.items[idx];
        let stmts = alts[0];
        let can_switch = alts.len() >= 2;
        for (j, s) in stmts.iter().enumerate() {
            if done[j] {
                continue;
            }
            let blocked = match s {
                St::Assign(v, e) => match self.eval(e) {
                    Some(val) => {
                        self.theta.insert(*v, val);
                        self.items[idx].1[j] = true;
                        return Some(Scan::Moved);
                    }
                    None => true,
                },
                St::Print(v) => match self.theta.get(v) {
                    Some(val) => {
                        let line = match val {
                            Val::Int(n) => n.to_string(),
                            Val::Sym(s) => s.to_string(),
                        };
                        self.outputs.push(line);
                        self.items[idx].1[j] = true;
                        return Some(Scan::Moved);
                    }
                    None => return Some(Scan::Fatal),
                },
                cond => !self.holds(cond),
            };
            if blocked {
                if can_switch {
                    let (alts, done) = &mut self.items[idx];
                    alts.remove(0);
                    *done = vec![false; alts[0].len()];
                    return Some(Scan::Moved);
                }
                return Some(Scan::Stuck);
            }
        }
        None
    }

    fn scan(&mut self) -> Scan {
        for idx in 0..self.items.len() {
            if let Some(s) = self.scan_item(idx) {
                return s;
            }
        }
        Scan::Idle
    }
}

/// Runs the model against one event sequence (top-level declaration indices).
pub fn run(case: &Case, events: &[usize]) -> OracleRun {
    let items = case
        .goal
        .iter()
        .map(|item| match item {
            Item::St(s) => (vec![std::slice::from_ref(s)], vec![false]),
            Item::Choice(alts) => (
                alts.iter().map(|a| a.as_slice()).collect::<Vec<_>>(),
                vec![false; alts[0].len()],
            ),
        })
        .collect();
    let mut m = Model {
        consts: case.decls.clone(),
        theta: HashMap::new(),
        outputs: Vec::new(),
        items,
    };
    let mut events = events.iter();
    loop {
        match m.scan() {
            Scan::Moved => {}
            Scan::Stuck | Scan::Fatal => {
                return OracleRun {
                    outputs: m.outputs,
                    verdict: OracleVerdict::Failed,
                }
            }
            Scan::Idle => {
                if m.consts.iter().all(|c| c.len() < 2) {
                    return OracleRun {
                        outputs: m.outputs,
                        verdict: OracleVerdict::Succeeded,
                    };
                }
                let Some(&target) = events.next() else {
                    return OracleRun {
                        outputs: m.outputs,
                        verdict: OracleVerdict::StableWaiting,
                    };
                };
                if m.consts[target].len() >= 2 {
                    m.consts[target].remove(0);
                }
            }
        }
    }
}

/// Every event sequence over `targets` choices of length at most `max_len`.
pub fn sequences(targets: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for seq in &frontier {
            for t in 0..targets {
                let mut s: Vec<usize> = seq.clone();
                s.push(t);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
