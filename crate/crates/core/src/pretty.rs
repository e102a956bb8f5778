//! Concrete-syntax rendering. `parse(pretty(t)) == t` for every tree the
//! parser can produce.

use std::fmt::Write;

use crate::ast::{Address, Cond, Decl, Expr, Goal, ProgramD};
use crate::parser::Program;

fn is_money(s: &str) -> bool {
    let Some(rest) = s.strip_prefix('$') else {
        return false;
    };
    let (int_part, cents) = match rest.split_once('.') {
        Some((i, c)) => (i, Some(c)),
        None => (rest, None),
    };
    if let Some(c) = cents {
        if c.is_empty() || !c.bytes().all(|b| b.is_ascii_digit()) {
            return false;
        }
    }
    let mut groups = int_part.split(',');
    let first = groups.next().unwrap_or("");
    if first.is_empty() || !first.bytes().all(|b| b.is_ascii_digit()) {
        return false;
    }
    groups.all(|g| g.len() == 3 && g.bytes().all(|b| b.is_ascii_digit()))
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, 0);
    out
}

/// `min_prec` is the binding strength the context demands.
fn write_expr(out: &mut String, e: &Expr, min_prec: u8) {
    match e {
        Expr::Int(n) if *n < 0 && min_prec > 0 => {
            let _ = write!(out, "({n})");
        }
        Expr::Int(n) => {
            let _ = write!(out, "{n}");
        }
        Expr::Str(s) if is_money(s) => out.push_str(s),
        Expr::Str(s) => out.push_str(&quote(s)),
        Expr::Sym(s) | Expr::Var(s) | Expr::Const(s) => out.push_str(s),
        Expr::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Expr::Bin(op, l, r) => {
            let prec = op.precedence();
            let parens = prec < min_prec;
            if parens {
                out.push('(');
            }
            write_expr(out, l, prec);
            let _ = write!(out, " {} ", op.symbol());
            write_expr(out, r, prec + 1);
            if parens {
                out.push(')');
            }
        }
    }
}

pub fn cond(c: &Cond) -> String {
    format!("{} {} {}", expr(&c.left), c.op.symbol(), expr(&c.right))
}

/// Renders a goal on one line. `Top` is `skip`.
pub fn goal(g: &Goal) -> String {
    let mut out = String::new();
    write_goal(&mut out, g);
    out
}

fn write_goal(out: &mut String, g: &Goal) {
    match g {
        Goal::Top => out.push_str("skip"),
        Goal::Print(x) => {
            let _ = write!(out, "print({x})");
        }
        Goal::Call(c) => {
            let args: Vec<String> = c.args.iter().map(expr).collect();
            let _ = write!(out, "{}({})", c.name, args.join(", "));
        }
        Goal::Cond(c) => out.push_str(&cond(c)),
        Goal::Assign(x, e) => {
            let _ = write!(out, "{x} = {}", expr(e));
        }
        Goal::Seq(a, b) => {
            if matches!(**a, Goal::Seq(..)) {
                out.push_str("{ ");
                write_goal(out, a);
                out.push_str(" }");
            } else {
                write_goal(out, a);
            }
            out.push_str("; ");
            write_goal(out, b);
        }
        Goal::Choice(alts) => {
            out.push_str("choice(");
            for (i, a) in alts.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_goal(out, a);
            }
            out.push(')');
        }
    }
}

pub fn decl(d: &Decl) -> String {
    match d {
        Decl::Const(name, e) => format!("{name} == {}", expr(e)),
        Decl::Proc(p) => {
            let head: Vec<String> = p.head.iter().map(expr).collect();
            format!("{}({}) = {{ {} }}", p.name, head.join(", "), goal(&p.body))
        }
    }
}

/// Renders a declaration subtree on one line. Conjunctions are braced.
pub fn program(p: &ProgramD) -> String {
    match p {
        ProgramD::Leaf(d) => decl(d),
        ProgramD::And(items) => {
            let parts: Vec<String> = items.iter().map(program).collect();
            if parts.is_empty() {
                "{ }".into()
            } else {
                format!("{{ {} }}", parts.join("; "))
            }
        }
        ProgramD::Choice(alts) => {
            let parts: Vec<String> = alts.iter().map(program).collect();
            format!("choice({})", parts.join(", "))
        }
    }
}

/// Top-level declaration items, one per entry. A non-conjunction root is a
/// single item.
fn top_items(p: &ProgramD) -> Vec<String> {
    match p {
        ProgramD::And(items) => items.iter().map(program).collect(),
        other => vec![program(other)],
    }
}

fn top_statements(g: &Goal) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = g;
    while let Goal::Seq(a, b) = cur {
        if matches!(**a, Goal::Seq(..)) {
            out.push(format!("{{ {} }}", goal(a)));
        } else {
            out.push(goal(a));
        }
        cur = b;
    }
    out.push(goal(cur));
    out
}

/// Canonical file layout used by `seqc fmt`.
pub fn file(prog: &Program) -> String {
    let mut out = String::from("decls {\n");
    for item in top_items(&prog.decls) {
        let _ = writeln!(out, "  {item};");
    }
    out.push_str("}\ngoal {\n");
    for stmt in top_statements(&prog.goal) {
        let _ = writeln!(out, "  {stmt};");
    }
    out.push_str("}\n");
    out
}

/// The declaration tree on one line, without the outer conjunction braces.
pub fn program_body(p: &ProgramD) -> String {
    top_items(p).join("; ")
}

/// One line per choice node: address, remaining alternatives, and the tree.
pub fn address_listing(p: &ProgramD) -> String {
    let mut out = String::new();
    for (addr, node) in p.choices() {
        let remaining = node.children().len();
        let _ = writeln!(out, "{addr}\t[{remaining} remaining]\t{}", program(node));
    }
    out
}

pub fn address(a: &Address) -> String {
    a.to_string()
}
