//! Expression and condition evaluation against the active constant
//! declarations and the current substitution.

use std::collections::HashMap;

use thiserror::Error;

use crate::ast::{BinOp, CmpOp, Cond, Decl, Expr, ProgramD, Subst, Value};

/// Constant resolution nests at most this deep before it is reported as a cycle.
pub const CONST_DEPTH_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("integer overflow")]
    Overflow,
    #[error("constant `{0}` does not resolve within {CONST_DEPTH_LIMIT} steps")]
    ConstantCycle(String),
}

/// The constants visible through the active view, plus θ.
#[derive(Clone, Debug)]
pub struct EvalEnv<'a> {
    constants: HashMap<&'a str, &'a Expr>,
    theta: &'a Subst,
}

impl<'a> EvalEnv<'a> {
    /// When a constant is declared more than once in the active view the
    /// leftmost declaration wins.
    pub fn new(program: &'a ProgramD, theta: &'a Subst) -> Self {
        let mut constants = HashMap::new();
        for d in program.active_view() {
            if let Decl::Const(name, e) = d {
                constants.entry(name.as_str()).or_insert(e);
            }
        }
        EvalEnv { constants, theta }
    }

    pub fn theta(&self) -> &'a Subst {
        self.theta
    }

    pub fn eval(&self, e: &Expr) -> Result<Value, EvalError> {
        self.eval_at(e, 0)
    }

    fn eval_at(&self, e: &Expr, depth: usize) -> Result<Value, EvalError> {
        match e {
            Expr::Int(n) => Ok(Value::Int(*n)),
            Expr::Str(s) => Ok(Value::Str(s.clone())),
            Expr::Sym(s) => Ok(Value::Sym(s.clone())),
            Expr::Bool(b) => Ok(Value::Bool(*b)),
            Expr::Var(x) => self
                .theta
                .get(x)
                .cloned()
                .ok_or_else(|| EvalError::UnboundVariable(x.clone())),
            Expr::Const(c) => {
                if depth >= CONST_DEPTH_LIMIT {
                    return Err(EvalError::ConstantCycle(c.clone()));
                }
                let body = self
                    .constants
                    .get(c.as_str())
                    .ok_or_else(|| EvalError::UnknownConstant(c.clone()))?;
                self.eval_at(body, depth + 1)
            }
            Expr::Bin(op, l, r) => {
                let l = self.eval_at(l, depth)?;
                let r = self.eval_at(r, depth)?;
                let (Value::Int(a), Value::Int(b)) = (&l, &r) else {
                    return Err(EvalError::TypeMismatch(format!(
                        "`{}` needs integers, got {} and {}",
                        op.symbol(),
                        l.kind(),
                        r.kind()
                    )));
                };
                let (a, b) = (*a, *b);
                let out = match op {
                    BinOp::Add => a.checked_add(b),
                    BinOp::Sub => a.checked_sub(b),
                    BinOp::Mul => a.checked_mul(b),
                    BinOp::Div if b == 0 => return Err(EvalError::DivisionByZero),
                    BinOp::Div => a.checked_div(b),
                };
                out.map(Value::Int).ok_or(EvalError::Overflow)
            }
        }
    }

    /// Equality across different kinds is false, not an error.
    pub fn eval_cond(&self, c: &Cond) -> Result<bool, EvalError> {
        let l = self.eval(&c.left)?;
        let r = self.eval(&c.right)?;
        match c.op {
            CmpOp::Eq => Ok(l == r),
            CmpOp::Ne => Ok(l != r),
            op => {
                let (Value::Int(a), Value::Int(b)) = (&l, &r) else {
                    return Err(EvalError::TypeMismatch(format!(
                        "`{}` needs integers, got {} and {}",
                        op.symbol(),
                        l.kind(),
                        r.kind()
                    )));
                };
                Ok(match op {
                    CmpOp::Lt => a < b,
                    CmpOp::Le => a <= b,
                    CmpOp::Gt => a > b,
                    CmpOp::Ge => a >= b,
                    CmpOp::Eq | CmpOp::Ne => unreachable!(),
                })
            }
        }
    }
}
