//! Exact evaluator for the emitted MiniZinc expression subset.
//!
//! Integer arithmetic is arbitrary precision, float arithmetic is exact
//! rational. `div` truncates toward zero and `mod` follows the dividend's
//! sign, matching the FlatZinc builtins. Division by zero and friends
//! yield `Undefined`, which callers treat as an unsatisfied constraint.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::rational::Rat;

use super::ast::{BinOp, MznExpr};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Bool(bool),
    Int(BigInt),
    Float(Rat),
}

impl Value {
    pub fn int(v: i64) -> Self {
        Value::Int(BigInt::from(v))
    }

    fn as_float(&self) -> Option<Rat> {
        match self {
            Value::Int(v) => Some(Rat::from_bigint(v.clone())),
            Value::Float(r) => Some(r.clone()),
            Value::Bool(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),
    #[error("type error in `{0}`")]
    Type(String),
    #[error("undefined result (division or modulo by zero)")]
    Undefined,
}

pub fn eval_expr(e: &MznExpr, env: &HashMap<String, Value>) -> Result<Value, EvalError> {
    use Value::*;
    match e {
        MznExpr::BoolLit(b) => Ok(Bool(*b)),
        MznExpr::IntLit(v) => Ok(Int(v.clone())),
        MznExpr::FloatLit(r) => Ok(Float(r.clone())),
        MznExpr::Ident(name) => env
            .get(name)
            .cloned()
            .ok_or_else(|| EvalError::UnknownIdent(name.clone())),
        MznExpr::Not(a) => match eval_expr(a, env)? {
            Bool(b) => Ok(Bool(!b)),
            _ => Err(EvalError::Type("not".into())),
        },
        MznExpr::Neg(a) => match eval_expr(a, env)? {
            Int(v) => Ok(Int(-v)),
            Float(r) => Ok(Float(-r)),
            Bool(_) => Err(EvalError::Type("unary -".into())),
        },
        MznExpr::Ite(c, t, f) => match eval_expr(c, env)? {
            Bool(true) => eval_expr(t, env),
            Bool(false) => eval_expr(f, env),
            _ => Err(EvalError::Type("if condition".into())),
        },
        MznExpr::Bin(op, a, b) => {
            let va = eval_expr(a, env)?;
            let vb = eval_expr(b, env)?;
            eval_bin(*op, va, vb)
        }
        MznExpr::Call(name, _) => Err(EvalError::Type(format!("call to {name}"))),
        MznExpr::ArrayLit(_) => Err(EvalError::Type("array literal".into())),
    }
}

fn eval_bin(op: BinOp, a: Value, b: Value) -> Result<Value, EvalError> {
    use Value::*;
    let type_err = || EvalError::Type(format!("{op:?}"));
    match op {
        BinOp::And | BinOp::Or | BinOp::Xor | BinOp::Imp | BinOp::Iff => match (a, b) {
            (Bool(x), Bool(y)) => Ok(Bool(match op {
                BinOp::And => x && y,
                BinOp::Or => x || y,
                BinOp::Xor => x != y,
                BinOp::Imp => !x || y,
                _ => x == y,
            })),
            _ => Err(type_err()),
        },
        BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
            let ord = match (&a, &b) {
                (Bool(x), Bool(y)) => x.cmp(y),
                (Int(x), Int(y)) => x.cmp(y),
                _ => {
                    let (x, y) = (a.as_float().ok_or_else(type_err)?, b.as_float().ok_or_else(type_err)?);
                    x.cmp(&y)
                }
            };
            Ok(Bool(match op {
                BinOp::Eq => ord.is_eq(),
                BinOp::Ne => ord.is_ne(),
                BinOp::Lt => ord.is_lt(),
                BinOp::Le => ord.is_le(),
                BinOp::Gt => ord.is_gt(),
                _ => ord.is_ge(),
            }))
        }
        BinOp::Add | BinOp::Sub | BinOp::Mul => match (&a, &b) {
            (Int(x), Int(y)) => Ok(Int(match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                _ => x * y,
            })),
            _ => {
                let (x, y) = (a.as_float().ok_or_else(type_err)?, b.as_float().ok_or_else(type_err)?);
                Ok(Float(match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    _ => x * y,
                }))
            }
        },
        BinOp::FDiv => {
            let (x, y) = (a.as_float().ok_or_else(type_err)?, b.as_float().ok_or_else(type_err)?);
            if y.is_zero() {
                return Err(EvalError::Undefined);
            }
            Ok(Float(x / y))
        }
        BinOp::IDiv | BinOp::Mod => match (a, b) {
            (Int(x), Int(y)) => {
                if y.is_zero() {
                    return Err(EvalError::Undefined);
                }
                // BigInt `/` and `%` truncate toward zero with the
                // dividend's sign, exactly the FlatZinc semantics.
                Ok(Int(if op == BinOp::IDiv { x / y } else { x % y }))
            }
            _ => Err(type_err()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_mzn;
    use super::*;

    fn eval_constraint(text: &str, env: &[(&str, Value)]) -> Result<Value, EvalError> {
        let model = parse_mzn(&format!("constraint {text}; solve satisfy;")).unwrap();
        let e = model.constraints().next().unwrap().clone();
        let env: HashMap<String, Value> =
            env.iter().map(|(n, v)| (n.to_string(), v.clone())).collect();
        eval_expr(&e, &env)
    }

    #[test]
    fn truncating_division_and_mod() {
        assert_eq!(eval_constraint("(7 div 2) = 3", &[]), Ok(Value::Bool(true)));
        assert_eq!(eval_constraint("(-7 div 2) = -3", &[]), Ok(Value::Bool(true)));
        assert_eq!(eval_constraint("(-7 mod 2) = -1", &[]), Ok(Value::Bool(true)));
        assert_eq!(eval_constraint("(7 mod -2) = 1", &[]), Ok(Value::Bool(true)));
        assert_eq!(eval_constraint("1 div 0", &[]), Err(EvalError::Undefined));
    }

    #[test]
    fn mixed_numeric_comparison() {
        assert_eq!(
            eval_constraint("x < 2.5", &[("x", Value::int(2))]),
            Ok(Value::Bool(true))
        );
        assert_eq!(
            eval_constraint("(x + 0.5) = 2.5", &[("x", Value::int(2))]),
            Ok(Value::Bool(true))
        );
    }

    #[test]
    fn exact_fraction_arithmetic() {
        assert_eq!(
            eval_constraint("((1.0 / 3.0) + (1.0 / 3.0) + (1.0 / 3.0)) = 1.0", &[]),
            Ok(Value::Bool(true))
        );
    }
}
