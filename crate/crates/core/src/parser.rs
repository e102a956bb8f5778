//! Parser for `.seqc` program files.
//!
//! ```text
//! decls { choice(model == BMW320, model == BMW520) }
//! goal  { choice(model == BMW320; price = $32,000; print(price),
//!                model == BMW520; price = $54,000; print(price)) }
//! ```
//!
//! Bare identifiers are resolved after parsing: names declared with `c == E`
//! become constant references, names assigned or printed anywhere become
//! variables, procedure parameters are variables inside their body, and every
//! other identifier is a symbol literal.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::ast::{BinOp, Call, CmpOp, Cond, Decl, Expr, Goal, ProcDecl, ProgramD};

/// A parsed program: the declaration tree and the main goal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub decls: ProgramD,
    pub goal: Goal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Arity,
    EmptyChoice,
    NameClash,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Str(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Assign,
    Cmp(CmpOp),
    Arith(BinOp),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(s) => write!(f, "integer `{s}`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Assign => f.write_str("`=`"),
            Tok::Cmp(op) => write!(f, "`{}`", op.symbol()),
            Tok::Arith(op) => write!(f, "`{}`", op.symbol()),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

const KEYWORDS: &[&str] = &["decls", "goal", "choice", "skip", "print", "true", "false"];

fn syntax(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Syntax,
        line,
        col,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    macro_rules! bump {
        () => {{
            let c = chars[i];
            i += 1;
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let (tline, tcol) = (line, col);
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        let peek = |k: usize| chars.get(i + k).copied();
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(bump!());
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(bump!());
            }
            Tok::Int(s)
        } else if c == '$' {
            Tok::Str(lex_money(&chars, &mut i, &mut col).ok_or_else(|| {
                syntax(tline, tcol, "expected digits after `$`")
            })?)
        } else if c == '"' {
            bump!();
            let mut s = String::new();
            loop {
                if i >= chars.len() {
                    return Err(syntax(tline, tcol, "unterminated string literal"));
                }
                match bump!() {
                    '"' => break,
                    '\\' => {
                        if i >= chars.len() {
                            return Err(syntax(tline, tcol, "unterminated string literal"));
                        }
                        match bump!() {
                            'n' => s.push('\n'),
                            't' => s.push('\t'),
                            '"' => s.push('"'),
                            '\\' => s.push('\\'),
                            other => {
                                return Err(syntax(line, col - 1, format!("unknown escape `\\{other}`")))
                            }
                        }
                    }
                    ch => s.push(ch),
                }
            }
            Tok::Str(s)
        } else {
            let two = (c, peek(1));
            let (tok, width) = match two {
                ('=', Some('=')) => (Tok::Cmp(CmpOp::Eq), 2),
                ('!', Some('=')) => (Tok::Cmp(CmpOp::Ne), 2),
                ('<', Some('=')) => (Tok::Cmp(CmpOp::Le), 2),
                ('>', Some('=')) => (Tok::Cmp(CmpOp::Ge), 2),
                ('<', _) => (Tok::Cmp(CmpOp::Lt), 1),
                ('>', _) => (Tok::Cmp(CmpOp::Gt), 1),
                ('=', _) => (Tok::Assign, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                (',', _) => (Tok::Comma, 1),
                (';', _) => (Tok::Semi, 1),
                ('+', _) => (Tok::Arith(BinOp::Add), 1),
                ('-', _) => (Tok::Arith(BinOp::Sub), 1),
                ('*', _) => (Tok::Arith(BinOp::Mul), 1),
                ('/', _) => (Tok::Arith(BinOp::Div), 1),
                _ => return Err(syntax(tline, tcol, format!("unexpected character `{c}`"))),
            };
            for _ in 0..width {
                bump!();
            }
            tok
        };
        out.push(Spanned {
            tok,
            line: tline,
            col: tcol,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// Money tokens: `$` digits, optional `,ddd` groups, optional `.dd` cents.
/// A comma belongs to the token only when exactly three digits follow it.
fn lex_money(chars: &[char], i: &mut usize, col: &mut usize) -> Option<String> {
    let digit = |k: usize| chars.get(k).is_some_and(|c| c.is_ascii_digit());
    let start = *i;
    let mut j = start + 1;
    if !digit(j) {
        return None;
    }
    while digit(j) {
        j += 1;
    }
    while chars.get(j) == Some(&',') && digit(j + 1) && digit(j + 2) && digit(j + 3) && !digit(j + 4) {
        j += 4;
    }
    if chars.get(j) == Some(&'.') && digit(j + 1) {
        j += 1;
        while digit(j) {
            j += 1;
        }
    }
    *col += j - start;
    *i = j;
    Some(chars[start..j].iter().collect())
}

struct CallSite {
    name: String,
    arity: usize,
    line: usize,
    col: usize,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    calls: Vec<CallSite>,
    heads: Vec<CallSite>,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            calls: Vec::new(),
            heads: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let idx = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[idx].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, expected: &str) -> ParseError {
        let (line, col) = self.here();
        syntax(line, col, format!("expected {expected}, found {}", self.peek()))
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(expected))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.is_keyword(kw) {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(&format!("`{kw}`")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                Ok(s)
            }
            _ => Err(self.error_here(what)),
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error_here("end of input"))
        }
    }

    fn file(&mut self) -> Result<(ProgramD, Goal), ParseError> {
        self.expect_keyword("decls")?;
        self.expect(Tok::LBrace, "`{`")?;
        let decls = ProgramD::And(self.decl_list()?);
        self.expect(Tok::RBrace, "`}` closing the decls block")?;
        self.expect_keyword("goal")?;
        self.expect(Tok::LBrace, "`{`")?;
        let goal = self.goal_seq()?;
        self.expect(Tok::RBrace, "`}` closing the goal block")?;
        self.expect_eof()?;
        Ok((decls, goal))
    }

    /// Zero or more `;`-separated declaration items up to a closing brace.
    fn decl_list(&mut self) -> Result<Vec<ProgramD>, ParseError> {
        let mut items = Vec::new();
        while *self.peek() != Tok::RBrace {
            items.push(self.decl_item()?);
            if *self.peek() == Tok::Semi {
                self.next();
            } else {
                break;
            }
        }
        Ok(items)
    }

    fn decl_item(&mut self) -> Result<ProgramD, ParseError> {
        let (line, col) = self.here();
        if self.is_keyword("choice") {
            self.next();
            self.expect(Tok::LParen, "`(`")?;
            let mut alts = vec![self.decl_alt()?];
            while *self.peek() == Tok::Comma {
                self.next();
                alts.push(self.decl_alt()?);
            }
            self.expect(Tok::RParen, "`,` or `)`")?;
            if alts.len() < 2 {
                return Err(empty_choice(line, col));
            }
            return Ok(ProgramD::Choice(alts));
        }
        if *self.peek() == Tok::LBrace {
            self.next();
            let items = self.decl_list()?;
            self.expect(Tok::RBrace, "`}`")?;
            return Ok(ProgramD::And(items));
        }
        let name = self.ident("a declaration")?;
        match self.peek() {
            Tok::Cmp(CmpOp::Eq) => {
                self.next();
                let e = self.expr()?;
                Ok(ProgramD::Leaf(Decl::Const(name, e)))
            }
            Tok::LParen => {
                self.next();
                let mut head = Vec::new();
                if *self.peek() != Tok::RParen {
                    loop {
                        head.push(self.head_arg()?);
                        if *self.peek() == Tok::Comma {
                            self.next();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen, "`,` or `)`")?;
                self.expect(Tok::Assign, "`=` after procedure head")?;
                self.expect(Tok::LBrace, "`{` opening the procedure body")?;
                let body = self.goal_seq()?;
                self.expect(Tok::RBrace, "`}` closing the procedure body")?;
                self.heads.push(CallSite {
                    name: name.clone(),
                    arity: head.len(),
                    line,
                    col,
                });
                Ok(ProgramD::Leaf(Decl::Proc(ProcDecl::new(name, head, body))))
            }
            _ => Err(self.error_here("`==` or `(` in declaration")),
        }
    }

    /// A choice alternative: one item, or several `;`-joined items.
    fn decl_alt(&mut self) -> Result<ProgramD, ParseError> {
        let first = self.decl_item()?;
        if *self.peek() != Tok::Semi {
            return Ok(first);
        }
        let mut items = vec![first];
        while *self.peek() == Tok::Semi {
            self.next();
            if matches!(self.peek(), Tok::Comma | Tok::RParen) {
                break;
            }
            items.push(self.decl_item()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            ProgramD::And(items)
        })
    }

    fn head_arg(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                Ok(Expr::Var(s))
            }
            _ => {
                let e = self.unary()?;
                if e.is_literal() {
                    Ok(e)
                } else {
                    Err(self.error_here("a parameter name or literal"))
                }
            }
        }
    }

    fn goal_seq(&mut self) -> Result<Goal, ParseError> {
        let mut stmts = vec![self.stmt()?];
        while *self.peek() == Tok::Semi {
            self.next();
            if matches!(self.peek(), Tok::Comma | Tok::RParen | Tok::RBrace) {
                break;
            }
            stmts.push(self.stmt()?);
        }
        Ok(Goal::seq_all(stmts))
    }

    fn stmt(&mut self) -> Result<Goal, ParseError> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::Ident(kw) if kw == "skip" => {
                self.next();
                Ok(Goal::Top)
            }
            Tok::Ident(kw) if kw == "print" => {
                self.next();
                self.expect(Tok::LParen, "`(`")?;
                let var = self.ident("a variable name")?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Goal::Print(var))
            }
            Tok::Ident(kw) if kw == "choice" => {
                self.next();
                self.expect(Tok::LParen, "`(`")?;
                let mut alts = vec![self.goal_seq()?];
                while *self.peek() == Tok::Comma {
                    self.next();
                    alts.push(self.goal_seq()?);
                }
                self.expect(Tok::RParen, "`,` or `)`")?;
                if alts.len() < 2 {
                    return Err(empty_choice(line, col));
                }
                Ok(Goal::Choice(alts))
            }
            Tok::LBrace => {
                self.next();
                let g = self.goal_seq()?;
                self.expect(Tok::RBrace, "`}`")?;
                Ok(g)
            }
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) && *self.peek_at(1) == Tok::Assign => {
                self.next();
                self.next();
                let e = self.expr()?;
                Ok(Goal::Assign(name, e))
            }
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) && *self.peek_at(1) == Tok::LParen => {
                self.next();
                self.next();
                let mut args = Vec::new();
                if *self.peek() != Tok::RParen {
                    loop {
                        args.push(self.expr()?);
                        if *self.peek() == Tok::Comma {
                            self.next();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen, "`,` or `)`")?;
                self.calls.push(CallSite {
                    name: name.clone(),
                    arity: args.len(),
                    line,
                    col,
                });
                Ok(Goal::Call(Call::new(name, args)))
            }
            _ => {
                let left = self.expr()?;
                let op = match self.peek() {
                    Tok::Cmp(op) => *op,
                    _ => return Err(self.error_here("a comparison operator")),
                };
                self.next();
                let right = self.expr()?;
                Ok(Goal::Cond(Cond::new(op, left, right)))
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        while let Tok::Arith(op @ (BinOp::Add | BinOp::Sub)) = *self.peek() {
            self.next();
            let rhs = self.term()?;
            acc = Expr::bin(op, acc, rhs);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        while let Tok::Arith(op @ (BinOp::Mul | BinOp::Div)) = *self.peek() {
            self.next();
            let rhs = self.unary()?;
            acc = Expr::bin(op, acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Arith(BinOp::Sub) {
            let (line, col) = self.here();
            self.next();
            if let Tok::Int(digits) = self.peek().clone() {
                self.next();
                return format!("-{digits}")
                    .parse()
                    .map(Expr::Int)
                    .map_err(|_| syntax(line, col, "integer literal out of range"));
            }
            let e = self.primary()?;
            return Ok(Expr::bin(BinOp::Sub, Expr::Int(0), e));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::Int(digits) => {
                self.next();
                digits
                    .parse()
                    .map(Expr::Int)
                    .map_err(|_| syntax(line, col, "integer literal out of range"))
            }
            Tok::Str(s) => {
                self.next();
                Ok(Expr::Str(s))
            }
            Tok::Ident(s) if s == "true" || s == "false" => {
                self.next();
                Ok(Expr::Bool(s == "true"))
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                // Provisional; see `Resolver`.
                Ok(Expr::Sym(s))
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.error_here("an expression")),
        }
    }

    fn check_arity(&self) -> Result<(), ParseError> {
        let mut declared: BTreeMap<&str, &CallSite> = BTreeMap::new();
        for h in &self.heads {
            match declared.get(h.name.as_str()) {
                Some(first) if first.arity != h.arity => {
                    return Err(arity_error(h, first.arity));
                }
                Some(_) => {}
                None => {
                    declared.insert(&h.name, h);
                }
            }
        }
        for c in &self.calls {
            if let Some(decl) = declared.get(c.name.as_str()) {
                if decl.arity != c.arity {
                    return Err(arity_error(c, decl.arity));
                }
            }
        }
        Ok(())
    }
}

fn empty_choice(line: usize, col: usize) -> ParseError {
    ParseError {
        kind: ParseErrorKind::EmptyChoice,
        line,
        col,
        message: "`choice` needs at least two alternatives".into(),
    }
}

fn arity_error(site: &CallSite, expected: usize) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Arity,
        line: site.line,
        col: site.col,
        message: format!(
            "`{}` used with {} argument(s) but declared with {}",
            site.name, site.arity, expected
        ),
    }
}

fn clash(message: String) -> ParseError {
    ParseError {
        kind: ParseErrorKind::NameClash,
        line: 1,
        col: 1,
        message,
    }
}

/// Rewrites provisional `Sym` identifiers into variables and constant
/// references.
struct Resolver {
    consts: BTreeSet<String>,
    vars: BTreeSet<String>,
}

impl Resolver {
    fn new(decls: &ProgramD, goal: &Goal) -> Result<Self, ParseError> {
        let mut consts = BTreeSet::new();
        let mut vars = BTreeSet::new();
        collect_decl_names(decls, &mut consts, &mut vars)?;
        collect_targets(goal, &mut vars);
        if let Some(name) = consts.intersection(&vars).next() {
            return Err(clash(format!(
                "`{name}` is declared as a constant and also assigned or printed"
            )));
        }
        Ok(Resolver { consts, vars })
    }

    fn expr(&self, e: &Expr, params: &[String], allow_vars: bool) -> Expr {
        match e {
            Expr::Sym(name) => {
                if params.contains(name) {
                    Expr::Var(name.clone())
                } else if self.consts.contains(name) {
                    Expr::Const(name.clone())
                } else if allow_vars && self.vars.contains(name) {
                    Expr::Var(name.clone())
                } else {
                    e.clone()
                }
            }
            Expr::Bin(op, l, r) => Expr::bin(
                *op,
                self.expr(l, params, allow_vars),
                self.expr(r, params, allow_vars),
            ),
            _ => e.clone(),
        }
    }

    fn goal(&self, g: &Goal, params: &[String]) -> Goal {
        match g {
            Goal::Top | Goal::Print(_) => g.clone(),
            Goal::Call(c) => Goal::Call(Call::new(
                c.name.clone(),
                c.args.iter().map(|a| self.expr(a, params, true)).collect(),
            )),
            Goal::Cond(c) => Goal::Cond(Cond::new(
                c.op,
                self.expr(&c.left, params, true),
                self.expr(&c.right, params, true),
            )),
            Goal::Assign(x, e) => Goal::Assign(x.clone(), self.expr(e, params, true)),
            Goal::Seq(a, b) => Goal::seq(self.goal(a, params), self.goal(b, params)),
            Goal::Choice(alts) => Goal::Choice(alts.iter().map(|a| self.goal(a, params)).collect()),
        }
    }

    fn decls(&self, d: &ProgramD) -> ProgramD {
        match d {
            ProgramD::Leaf(Decl::Const(name, e)) => ProgramD::Leaf(Decl::Const(name.clone(), self.expr(e, &[], false))),
            ProgramD::Leaf(Decl::Proc(p)) => ProgramD::Leaf(Decl::Proc(ProcDecl {
                name: p.name.clone(),
                head: p.head.clone(),
                params: p.params.clone(),
                body: self.goal(&p.body, &p.params),
            })),
            ProgramD::And(items) => ProgramD::And(items.iter().map(|i| self.decls(i)).collect()),
            ProgramD::Choice(alts) => ProgramD::Choice(alts.iter().map(|a| self.decls(a)).collect()),
        }
    }
}

fn collect_targets(g: &Goal, out: &mut BTreeSet<String>) {
    match g {
        Goal::Print(x) | Goal::Assign(x, _) => {
            out.insert(x.clone());
        }
        Goal::Seq(a, b) => {
            collect_targets(a, out);
            collect_targets(b, out);
        }
        Goal::Choice(alts) => alts.iter().for_each(|a| collect_targets(a, out)),
        _ => {}
    }
}

fn collect_decl_names(
    d: &ProgramD,
    consts: &mut BTreeSet<String>,
    vars: &mut BTreeSet<String>,
) -> Result<(), ParseError> {
    match d {
        ProgramD::Leaf(Decl::Const(name, _)) => {
            consts.insert(name.clone());
        }
        ProgramD::Leaf(Decl::Proc(p)) => {
            let mut targets = BTreeSet::new();
            collect_targets(&p.body, &mut targets);
            if let Some(param) = p.params.iter().find(|x| targets.contains(*x)) {
                return Err(clash(format!(
                    "parameter `{param}` of `{}` cannot be assigned or printed in its body",
                    p.name
                )));
            }
            vars.extend(targets);
        }
        ProgramD::And(items) | ProgramD::Choice(items) => {
            for i in items {
                collect_decl_names(i, consts, vars)?;
            }
        }
    }
    Ok(())
}

/// Parses a whole `decls { ... } goal { ... }` file.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(text)?;
    let (decls, goal) = p.file()?;
    p.check_arity()?;
    let r = Resolver::new(&decls, &goal)?;
    Ok(Program {
        decls: r.decls(&decls),
        goal: r.goal(&goal, &[]),
    })
}

/// Parses a `goal { ... }` block on its own, with no declarations in scope.
pub fn parse_goal(text: &str) -> Result<Goal, ParseError> {
    let mut p = Parser::new(text)?;
    p.expect_keyword("goal")?;
    p.expect(Tok::LBrace, "`{`")?;
    let goal = p.goal_seq()?;
    p.expect(Tok::RBrace, "`}`")?;
    p.expect_eof()?;
    let empty = ProgramD::And(Vec::new());
    let r = Resolver::new(&empty, &goal)?;
    Ok(r.goal(&goal, &[]))
}

/// Parses a `decls { ... }` block on its own.
pub fn parse_decls(text: &str) -> Result<ProgramD, ParseError> {
    let mut p = Parser::new(text)?;
    p.expect_keyword("decls")?;
    p.expect(Tok::LBrace, "`{`")?;
    let decls = ProgramD::And(p.decl_list()?);
    p.expect(Tok::RBrace, "`}`")?;
    p.expect_eof()?;
    p.check_arity()?;
    let r = Resolver::new(&decls, &Goal::Top)?;
    Ok(r.decls(&decls))
}
