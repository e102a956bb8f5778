//! Abstract syntax for goals, declarations and programs, plus the small
//! vocabulary (values, substitutions, addresses, events, statuses) that the
//! rest of the interpreter shares.
//!
//! Trees are immutable values. Every rewrite produces a new tree.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    pub(crate) fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(i64),
    Str(String),
    Sym(String),
    Bool(bool),
    /// A variable read from the substitution.
    Var(String),
    /// A reference to a constant declared with `c == E`.
    Const(String),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn bin(op: BinOp, left: Expr, right: Expr) -> Expr {
        Expr::Bin(op, Box::new(left), Box::new(right))
    }

    /// Replaces every `Var(name)` bound in `bindings` with the literal form
    /// of its value.
    pub fn substitute(&self, bindings: &BTreeMap<String, Value>) -> Expr {
        match self {
            Expr::Var(name) => match bindings.get(name) {
                Some(v) => v.to_expr(),
                None => self.clone(),
            },
            Expr::Bin(op, l, r) => Expr::bin(*op, l.substitute(bindings), r.substitute(bindings)),
            _ => self.clone(),
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Expr::Int(_) | Expr::Str(_) | Expr::Sym(_) | Expr::Bool(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn is_ordering(self) -> bool {
        matches!(self, CmpOp::Lt | CmpOp::Le | CmpOp::Gt | CmpOp::Ge)
    }
}

/// A single comparison used as a statement or as a guard.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cond {
    pub op: CmpOp,
    pub left: Expr,
    pub right: Expr,
}

impl Cond {
    pub fn new(op: CmpOp, left: Expr, right: Expr) -> Self {
        Cond { op, left, right }
    }

    pub fn substitute(&self, bindings: &BTreeMap<String, Value>) -> Cond {
        Cond {
            op: self.op,
            left: self.left.substitute(bindings),
            right: self.right.substitute(bindings),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Call {
    pub name: String,
    pub args: Vec<Expr>,
}

impl Call {
    pub fn new(name: impl Into<String>, args: Vec<Expr>) -> Self {
        Call { name: name.into(), args }
    }
}

/// A main statement. The residual goal is rewritten in place as the machine
/// makes moves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Goal {
    Top,
    Print(String),
    Call(Call),
    Cond(Cond),
    Assign(String, Expr),
    Seq(Box<Goal>, Box<Goal>),
    /// Goal-level sequential choice. Never empty; only the first alternative
    /// is live.
    Choice(Vec<Goal>),
}

impl Goal {
    pub fn seq(first: Goal, second: Goal) -> Goal {
        Goal::Seq(Box::new(first), Box::new(second))
    }

    /// Right-nested sequence of the given statements. Panics on an empty list.
    pub fn seq_all(mut items: Vec<Goal>) -> Goal {
        let mut acc = items.pop().expect("seq_all on empty list");
        while let Some(g) = items.pop() {
            acc = Goal::seq(g, acc);
        }
        acc
    }

    pub fn substitute(&self, bindings: &BTreeMap<String, Value>) -> Goal {
        match self {
            Goal::Top | Goal::Print(_) => self.clone(),
            Goal::Call(c) => Goal::Call(Call {
                name: c.name.clone(),
                args: c.args.iter().map(|a| a.substitute(bindings)).collect(),
            }),
            Goal::Cond(c) => Goal::Cond(c.substitute(bindings)),
            Goal::Assign(x, e) => Goal::Assign(x.clone(), e.substitute(bindings)),
            Goal::Seq(a, b) => Goal::seq(a.substitute(bindings), b.substitute(bindings)),
            Goal::Choice(alts) => Goal::Choice(alts.iter().map(|g| g.substitute(bindings)).collect()),
        }
    }

    /// True when every leaf reachable outside non-first choice alternatives
    /// is `Top` or a condition.
    pub fn is_fully_reduced(&self) -> bool {
        match self {
            Goal::Top | Goal::Cond(_) => true,
            Goal::Print(_) | Goal::Assign(..) | Goal::Call(_) => false,
            Goal::Seq(a, b) => a.is_fully_reduced() && b.is_fully_reduced(),
            Goal::Choice(alts) => alts[0].is_fully_reduced(),
        }
    }

    /// Total number of alternatives held by goal-level choices.
    pub fn choice_alternatives(&self) -> usize {
        match self {
            Goal::Seq(a, b) => a.choice_alternatives() + b.choice_alternatives(),
            Goal::Choice(alts) => alts.len() + alts.iter().map(Goal::choice_alternatives).sum::<usize>(),
            _ => 0,
        }
    }

    pub fn at_path(&self, path: &[usize]) -> Option<&Goal> {
        let Some((&head, rest)) = path.split_first() else {
            return Some(self);
        };
        match self {
            Goal::Seq(a, _) if head == 0 => a.at_path(rest),
            Goal::Seq(_, b) if head == 1 => b.at_path(rest),
            Goal::Choice(alts) => alts.get(head)?.at_path(rest),
            _ => None,
        }
    }
}

/// A procedure declaration `name(args) = { body }`. Identifiers in the head
/// are universally bound parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProcDecl {
    pub name: String,
    /// Head arguments: parameters as `Expr::Var`, or literal patterns.
    pub head: Vec<Expr>,
    pub params: Vec<String>,
    pub body: Goal,
}

impl ProcDecl {
    /// Builds a declaration whose parameters are the distinct head variables.
    pub fn new(name: impl Into<String>, head: Vec<Expr>, body: Goal) -> Self {
        let mut params: Vec<String> = Vec::new();
        for arg in &head {
            if let Expr::Var(p) = arg {
                if !params.contains(p) {
                    params.push(p.clone());
                }
            }
        }
        ProcDecl {
            name: name.into(),
            head,
            params,
            body,
        }
    }

    pub fn arity(&self) -> usize {
        self.head.len()
    }

    /// Matches the head against argument values, returning the parameter
    /// bindings on success.
    pub fn match_head(&self, args: &[Value]) -> Option<BTreeMap<String, Value>> {
        if args.len() != self.head.len() {
            return None;
        }
        let mut bindings = BTreeMap::new();
        for (pat, val) in self.head.iter().zip(args) {
            match pat {
                Expr::Var(p) => match bindings.get(p) {
                    Some(prev) if prev != val => return None,
                    Some(_) => {}
                    None => {
                        bindings.insert(p.clone(), val.clone());
                    }
                },
                lit => {
                    if Value::from_literal(lit).as_ref() != Some(val) {
                        return None;
                    }
                }
            }
        }
        Some(bindings)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Decl {
    Const(String, Expr),
    Proc(ProcDecl),
}

/// A declaration tree. Only user moves rewrite it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProgramD {
    Leaf(Decl),
    /// Conjunction of declarations; child `i` is addressed by index `i`.
    And(Vec<ProgramD>),
    /// Declaration-level sequential choice. Never empty.
    Choice(Vec<ProgramD>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid address {0}")]
pub struct InvalidAddress(pub Address);

impl ProgramD {
    pub fn children(&self) -> &[ProgramD] {
        match self {
            ProgramD::Leaf(_) => &[],
            ProgramD::And(items) | ProgramD::Choice(items) => items,
        }
    }

    /// Returns the subtree at `addr`.
    pub fn resolve(&self, addr: &Address) -> Result<&ProgramD, InvalidAddress> {
        let mut node = self;
        for &i in &addr.0 {
            node = node
                .children()
                .get(i)
                .ok_or_else(|| InvalidAddress(addr.clone()))?;
        }
        Ok(node)
    }

    /// Returns a copy of the tree with the subtree at `addr` replaced.
    pub fn replace_at(&self, addr: &Address, replacement: ProgramD) -> Result<ProgramD, InvalidAddress> {
        fn go(node: &ProgramD, path: &[usize], replacement: ProgramD) -> Option<ProgramD> {
            let Some((&head, rest)) = path.split_first() else {
                return Some(replacement);
            };
            let rebuild = |items: &[ProgramD]| -> Option<Vec<ProgramD>> {
                let child = go(items.get(head)?, rest, replacement)?;
                let mut out = items.to_vec();
                out[head] = child;
                Some(out)
            };
            match node {
                ProgramD::Leaf(_) => None,
                ProgramD::And(items) => rebuild(items).map(ProgramD::And),
                ProgramD::Choice(items) => rebuild(items).map(ProgramD::Choice),
            }
        }
        go(self, &addr.0, replacement).ok_or_else(|| InvalidAddress(addr.clone()))
    }

    /// Declarations reachable when every choice is replaced by its first
    /// alternative, left to right.
    pub fn active_view(&self) -> Vec<&Decl> {
        let mut out = Vec::new();
        self.collect_active(&mut out);
        out
    }

    fn collect_active<'a>(&'a self, out: &mut Vec<&'a Decl>) {
        match self {
            ProgramD::Leaf(d) => out.push(d),
            ProgramD::And(items) => items.iter().for_each(|d| d.collect_active(out)),
            ProgramD::Choice(alts) => alts[0].collect_active(out),
        }
    }

    /// Every choice node in the tree, in pre-order, with its address.
    pub fn choices(&self) -> Vec<(Address, &ProgramD)> {
        fn go<'a>(node: &'a ProgramD, path: &mut Vec<usize>, out: &mut Vec<(Address, &'a ProgramD)>) {
            if let ProgramD::Choice(_) = node {
                out.push((Address(path.clone()), node));
            }
            for (i, child) in node.children().iter().enumerate() {
                path.push(i);
                go(child, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Total number of alternatives over all choice nodes.
    pub fn alternative_count(&self) -> usize {
        let own = match self {
            ProgramD::Choice(alts) => alts.len(),
            _ => 0,
        };
        own + self.children().iter().map(ProgramD::alternative_count).sum::<usize>()
    }

    /// Every node address in the tree, root first.
    pub fn addresses(&self) -> Vec<Address> {
        fn go(node: &ProgramD, path: &mut Vec<usize>, out: &mut Vec<Address>) {
            out.push(Address(path.clone()));
            for (i, child) in node.children().iter().enumerate() {
                path.push(i);
                go(child, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

/// A ground runtime value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Int(i64),
    Str(String),
    Sym(String),
    Bool(bool),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Int(_) => "int",
            Value::Str(_) => "str",
            Value::Sym(_) => "sym",
            Value::Bool(_) => "bool",
        }
    }

    pub fn to_expr(&self) -> Expr {
        match self {
            Value::Int(n) => Expr::Int(*n),
            Value::Str(s) => Expr::Str(s.clone()),
            Value::Sym(s) => Expr::Sym(s.clone()),
            Value::Bool(b) => Expr::Bool(*b),
        }
    }

    pub fn from_literal(e: &Expr) -> Option<Value> {
        match e {
            Expr::Int(n) => Some(Value::Int(*n)),
            Expr::Str(s) => Some(Value::Str(s.clone())),
            Expr::Sym(s) => Some(Value::Sym(s.clone())),
            Expr::Bool(b) => Some(Value::Bool(*b)),
            _ => None,
        }
    }
}

/// The printed form: text and symbols verbatim, numbers in decimal.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Str(s) | Value::Sym(s) => f.write_str(s),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// Variable store. Binding a name replaces any previous binding.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subst(BTreeMap<String, Value>);

impl Subst {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &str) -> Option<&Value> {
        self.0.get(var)
    }

    /// `θ ⊎ {⟨var, value⟩}`.
    pub fn bind(&self, var: impl Into<String>, value: Value) -> Subst {
        let mut next = self.clone();
        next.0.insert(var.into(), value);
        next
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(String, Value)> for Subst {
    fn from_iter<I: IntoIterator<Item = (String, Value)>>(iter: I) -> Self {
        Subst(iter.into_iter().collect())
    }
}

/// Root-relative child-index path into a declaration tree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Address(pub Vec<usize>);

impl Address {
    pub fn root() -> Self {
        Address(Vec::new())
    }

    pub fn is_prefix_of(&self, other: &Address) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl From<Vec<usize>> for Address {
    fn from(v: Vec<usize>) -> Self {
        Address(v)
    }
}

/// Dot-separated indices; the root is written as `.`.
impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(".");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed address `{0}`")]
pub struct BadAddress(pub String);

impl std::str::FromStr for Address {
    type Err = BadAddress;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "." {
            return Ok(Address::root());
        }
        s.split('.')
            .map(|part| part.parse::<usize>().map_err(|_| BadAddress(s.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(Address)
    }
}

/// An Esc keystroke addressed to one declaration node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub address: Address,
}

impl Event {
    pub fn esc(address: impl Into<Address>) -> Self {
        Event {
            address: address.into(),
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "esc {}", self.address)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Status {
    MachineMove,
    MachineStuck,
    UserMove,
    Terminal,
}

impl Status {
    /// The numeric code of the `stable(P, G, I)` relation.
    pub fn code(self) -> i8 {
        match self {
            Status::MachineMove => 0,
            Status::MachineStuck => -1,
            Status::UserMove => 1,
            Status::Terminal => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::MachineMove => "MachineMove",
            Status::MachineStuck => "MachineStuck",
            Status::UserMove => "UserMove",
            Status::Terminal => "Terminal",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name(), self.code())
    }
}
