//! Random program generators shared by the integration tests.
#![allow(dead_code)]

pub mod oracle;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use seqc::ast::{BinOp, Call, CmpOp, Cond, Decl, Expr, Goal, ProcDecl, ProgramD};
use seqc::parser::Program;

pub type R = ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const VARS: &[&str] = &["x", "y", "z"];
pub const CONSTS: &[&str] = &["c0", "c1", "c2"];
pub const SYMS: &[&str] = &["A", "B", "BMW320"];
pub const STRS: &[&str] = &["hi", "$1,000", "a \"q\" b", ""];

/// Knobs for the random generators.
#[derive(Clone, Copy)]
pub struct Shape {
    pub depth: usize,
    pub procs: usize,
    /// Whether procedure bodies and the goal may call procedures.
    pub calls: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            depth: 4,
            procs: 2,
            calls: true,
        }
    }
}

fn literal(rng: &mut R) -> Expr {
    match rng.gen_range(0..4) {
        0 => Expr::Int(rng.gen_range(-3..4)),
        1 => Expr::Sym(SYMS.choose(rng).unwrap().to_string()),
        2 => Expr::Str(STRS.choose(rng).unwrap().to_string()),
        _ => Expr::Bool(rng.gen()),
    }
}

/// An expression over literals, constants and the given variables.
pub fn expr(rng: &mut R, depth: usize, vars: &[String]) -> Expr {
    if depth == 0 || rng.gen_bool(0.6) {
        return match rng.gen_range(0..4) {
            0 | 1 => literal(rng),
            2 => Expr::Const(CONSTS.choose(rng).unwrap().to_string()),
            _ if !vars.is_empty() => Expr::Var(vars.choose(rng).unwrap().clone()),
            _ => Expr::Int(rng.gen_range(0..5)),
        };
    }
    let op = *[BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div].choose(rng).unwrap();
    Expr::bin(op, expr(rng, depth - 1, vars), expr(rng, depth - 1, vars))
}

fn cond(rng: &mut R, vars: &[String]) -> Cond {
    let op = *[CmpOp::Eq, CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge]
        .choose(rng)
        .unwrap();
    Cond::new(op, expr(rng, 1, vars), expr(rng, 1, vars))
}

/// Procedure signatures: name and arity. Procedure `i` may only call
/// procedures with a smaller index, so there is no recursion.
pub fn signatures(n: usize) -> Vec<(String, usize)> {
    (0..n).map(|i| (format!("p{i}"), i % 3)).collect()
}

pub fn goal(
    rng: &mut R,
    depth: usize,
    vars: &[String],
    callable: &[(String, usize)],
) -> Goal {
    let leaf = depth == 0 || rng.gen_bool(0.35);
    if leaf {
        return match rng.gen_range(0..6) {
            0 => Goal::Top,
            1 => Goal::Print(VARS.choose(rng).unwrap().to_string()),
            2 | 3 => Goal::Assign(VARS.choose(rng).unwrap().to_string(), expr(rng, 2, vars)),
            4 if !callable.is_empty() => {
                let (name, arity) = callable.choose(rng).unwrap();
                Goal::Call(Call::new(name.clone(), (0..*arity).map(|_| expr(rng, 1, vars)).collect()))
            }
            _ => Goal::Cond(cond(rng, vars)),
        };
    }
    if rng.gen_bool(0.55) {
        Goal::seq(goal(rng, depth - 1, vars, callable), goal(rng, depth - 1, vars, callable))
    } else {
        let n = rng.gen_range(2..=3);
        Goal::Choice((0..n).map(|_| goal(rng, depth - 1, vars, callable)).collect())
    }
}

fn const_decl(rng: &mut R, name: &str) -> ProgramD {
    let e = if rng.gen_bool(0.8) {
        literal(rng)
    } else {
        // Refers to an earlier constant only.
        let idx = CONSTS.iter().position(|c| *c == name).unwrap();
        if idx == 0 {
            literal(rng)
        } else {
            Expr::bin(BinOp::Add, Expr::Const(CONSTS[idx - 1].into()), Expr::Int(1))
        }
    };
    ProgramD::Leaf(Decl::Const(name.into(), e))
}

fn proc_decl(rng: &mut R, idx: usize, sigs: &[(String, usize)], shape: Shape) -> ProgramD {
    let (name, arity) = &sigs[idx];
    let params: Vec<String> = (0..*arity).map(|i| format!("a{i}")).collect();
    let mut head: Vec<Expr> = params.iter().map(|p| Expr::Var(p.clone())).collect();
    if !head.is_empty() && rng.gen_bool(0.3) {
        head[0] = Expr::Int(rng.gen_range(0..3));
    }
    let mut scope: Vec<String> = VARS.iter().map(|v| v.to_string()).collect();
    scope.extend(params.iter().filter(|p| head.contains(&Expr::Var((*p).clone()))).cloned());
    let callable = if shape.calls { &sigs[..idx] } else { &[][..] };
    let body = goal(rng, shape.depth.saturating_sub(1).min(2), &scope, callable);
    ProgramD::Leaf(Decl::Proc(ProcDecl::new(name.clone(), head, body)))
}

fn const_tree(rng: &mut R, depth: usize, name: &str) -> ProgramD {
    if depth == 0 || rng.gen_bool(0.5) {
        return const_decl(rng, name);
    }
    let n = rng.gen_range(2..=3);
    let items: Vec<ProgramD> = (0..n).map(|_| const_tree(rng, depth - 1, name)).collect();
    if rng.gen_bool(0.6) {
        ProgramD::Choice(items)
    } else {
        ProgramD::And(items)
    }
}

/// A random program in the shape the parser produces: a conjunction at the
/// root, every constant declared, variables assigned somewhere, choices with
/// at least two alternatives.
pub fn program(rng: &mut R, shape: Shape) -> Program {
    let sigs = signatures(shape.procs);
    let mut items = Vec::new();
    for c in CONSTS {
        let leaf_depth = rng.gen_range(0..=2);
        let mut tree = const_tree(rng, leaf_depth, c);
        if !matches!(tree, ProgramD::Choice(_)) && rng.gen_bool(0.5) {
            tree = ProgramD::Choice(vec![tree, const_decl(rng, c)]);
        }
        items.push(tree);
    }
    for i in 0..sigs.len() {
        let d = proc_decl(rng, i, &sigs, shape);
        items.push(if rng.gen_bool(0.3) {
            ProgramD::Choice(vec![d, proc_decl(rng, i, &sigs, shape)])
        } else {
            d
        });
    }
    items.shuffle(rng);
    let vars: Vec<String> = VARS.iter().map(|v| v.to_string()).collect();
    let callable = if shape.calls { &sigs[..] } else { &[][..] };
    let body = goal(rng, shape.depth, &vars, callable);
    // Every variable is an assignment target, so names resolve the same way
    // after printing and reparsing.
    let prelude = Goal::seq_all(
        VARS.iter()
            .map(|v| Goal::Assign(v.to_string(), Expr::Int(rng.gen_range(0..3))))
            .collect(),
    );
    Program {
        decls: ProgramD::And(items),
        goal: Goal::seq(prelude, body),
    }
}

/// A goal on its own over the fixed variable pool; it may call `p0()` and
/// `p1(_)`.
pub fn random_goal(rng: &mut R, depth: usize) -> Goal {
    let vars: Vec<String> = VARS.iter().map(|v| v.to_string()).collect();
    let sigs = signatures(2);
    goal(rng, depth, &vars, &sigs)
}
