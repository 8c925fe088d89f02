//! Printer for the emitted MiniZinc subset.
//!
//! Binary operations are fully parenthesized; rationals with no short
//! exact decimal form become a constant float fraction `(n.0 / d.0)`,
//! which the rational-preserving preprocessor recognizes and protects
//! from the flattener's double-based constant fold.

use std::fmt::Write;

use num_traits::Signed;

use crate::rational::Rat;

use super::ast::*;

/// Longest decimal emitted directly; anything needing more significant
/// digits becomes a fraction of two integer-valued float literals.
pub const MAX_FLOAT_DECIMAL_DIGITS: usize = 25;

pub fn print_mzn(model: &MznModel) -> String {
    let mut out = String::new();
    for item in &model.items {
        match item {
            MznItem::Include(path) => writeln!(out, "include \"{path}\";").unwrap(),
            MznItem::VarDecl(d) => writeln!(out, "{}", decl(d)).unwrap(),
            MznItem::Constraint(e) => writeln!(out, "constraint {};", expr(e)).unwrap(),
            MznItem::Solve(s) => writeln!(out, "{}", solve(s)).unwrap(),
        }
    }
    out
}

fn decl(d: &MznVarDecl) -> String {
    let ty = match (&d.ty, &d.domain) {
        (MznType::Bool, _) => "bool".to_string(),
        (MznType::Int, None) => "int".to_string(),
        (MznType::Int, Some(MznDomain::IntRange(lo, hi))) => format!("{lo}..{hi}"),
        (MznType::Float, None) => "float".to_string(),
        (MznType::Float, Some(MznDomain::FloatRange(lo, hi))) => {
            format!("{}..{}", float_lit(lo), float_lit(hi))
        }
        (ty, dom) => panic!("inconsistent declaration: {ty:?} with {dom:?}"),
    };
    format!("var {ty}: {};", d.name)
}

fn solve(s: &MznSolve) -> String {
    match s {
        MznSolve::Satisfy => "solve satisfy;".to_string(),
        MznSolve::Minimize(e) => format!("solve minimize {};", expr(e)),
        MznSolve::Maximize(e) => format!("solve maximize {};", expr(e)),
        MznSolve::LexMinimize(es) => {
            let objs: Vec<String> = es.iter().map(expr).collect();
            format!("solve search lex_minimize([{}]);", objs.join(", "))
        }
    }
}

/// A float constant: exact short decimal, or a fraction kept foldable
/// only through the exactness-preserving path.
pub fn float_lit(r: &Rat) -> String {
    if let Some(s) = r.to_exact_decimal(MAX_FLOAT_DECIMAL_DIGITS) {
        return s;
    }
    let mag = r.abs();
    let frac = format!("({}.0 / {}.0)", mag.numer(), mag.denom());
    if r.is_negative() {
        format!("(-{frac})")
    } else {
        frac
    }
}

pub fn expr(e: &MznExpr) -> String {
    match e {
        MznExpr::BoolLit(b) => b.to_string(),
        MznExpr::IntLit(v) => {
            if v.is_negative() {
                format!("(-{})", v.magnitude())
            } else {
                v.to_string()
            }
        }
        MznExpr::FloatLit(r) => float_lit(r),
        MznExpr::Ident(name) => name.clone(),
        MznExpr::Not(a) => format!("(not {})", expr(a)),
        MznExpr::Neg(a) => format!("(-{})", expr(a)),
        MznExpr::Bin(op, a, b) => {
            let op = match op {
                BinOp::Iff => "<->",
                BinOp::Imp => "->",
                BinOp::Or => "\\/",
                BinOp::Xor => "xor",
                BinOp::And => "/\\",
                BinOp::Eq => "=",
                BinOp::Ne => "!=",
                BinOp::Lt => "<",
                BinOp::Le => "<=",
                BinOp::Gt => ">",
                BinOp::Ge => ">=",
                BinOp::Add => "+",
                BinOp::Sub => "-",
                BinOp::Mul => "*",
                BinOp::FDiv => "/",
                BinOp::IDiv => "div",
                BinOp::Mod => "mod",
            };
            format!("({} {op} {})", expr(a), expr(b))
        }
        MznExpr::Ite(c, t, f) => format!(
            "(if {} then {} else {} endif)",
            expr(c),
            expr(t),
            expr(f)
        ),
        MznExpr::Call(name, args) => {
            let args: Vec<String> = args.iter().map(expr).collect();
            format!("{name}({})", args.join(", "))
        }
        MznExpr::ArrayLit(items) => {
            let items: Vec<String> = items.iter().map(expr).collect();
            format!("[{}]", items.join(", "))
        }
    }
}
