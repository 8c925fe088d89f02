//! Printer for optimization-extended SMT-LIB scripts.
//!
//! The dialect switch only changes objective / soft-assertion surface
//! syntax, never semantics. The rewrite table:
//!
//! | dialect  | soft weight form      | `:id` attrs | priority option      |
//! |----------|-----------------------|-------------|----------------------|
//! | default  | fraction `(/ p q)`    | emitted     | `:opt.priority`      |
//! | z3-style | decimal when exact    | emitted     | `:opt.priority`      |
//! | bclt-style | fraction `(/ p q)`  | omitted     | omitted              |
//!
//! Only the default dialect is required to round-trip through
//! [`parse_smt2`](super::parse_smt2).

use std::fmt::Write;

use num_traits::Signed;

use crate::rational::Rat;

use super::script::{Combination, InertCommand, ObjDirection, SmtScript};
use super::term::{Op, TermArena, TermId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dialect {
    #[default]
    Default,
    Z3,
    Bclt,
}

impl Dialect {
    fn emit_ids(self) -> bool {
        !matches!(self, Dialect::Bclt)
    }

    fn emit_priority(self) -> bool {
        !matches!(self, Dialect::Bclt)
    }

    fn weight(self, w: &Rat) -> String {
        match self {
            Dialect::Z3 => w
                .to_exact_decimal(17)
                .unwrap_or_else(|| rat_smt(w)),
            _ => rat_smt(w),
        }
    }
}

/// SMT-LIB spelling of a rational constant.
fn rat_smt(r: &Rat) -> String {
    if r.is_negative() {
        return format!("(- {})", rat_smt(&r.abs()));
    }
    if r.is_integer() {
        format!("{}.0", r.numer())
    } else {
        format!("(/ {} {})", r.numer(), r.denom())
    }
}

pub fn print_smt2(script: &SmtScript, dialect: Dialect) -> String {
    let mut out = String::new();
    if let Some(logic) = &script.logic {
        writeln!(out, "(set-logic {logic})").unwrap();
    }
    if script.combination == Combination::Lexicographic && dialect.emit_priority() {
        writeln!(out, "(set-option :opt.priority lex)").unwrap();
    }
    for (name, sort) in &script.decls {
        writeln!(out, "(declare-fun {name} () {sort})").unwrap();
    }
    for &a in &script.assertions {
        writeln!(out, "(assert {})", print_term(&script.arena, a)).unwrap();
    }
    for soft in &script.soft_assertions {
        let mut line = format!(
            "(assert-soft {} :weight {}",
            print_term(&script.arena, soft.term),
            dialect.weight(&soft.weight)
        );
        if dialect.emit_ids() && !soft.group.is_empty() {
            write!(line, " :id {}", soft.group).unwrap();
        }
        line.push(')');
        writeln!(out, "{line}").unwrap();
    }
    for obj in &script.objectives {
        let cmd = match obj.direction {
            ObjDirection::Minimize => "minimize",
            ObjDirection::Maximize => "maximize",
        };
        let mut line = format!("({cmd} {}", print_term(&script.arena, obj.term));
        if obj.signed {
            line.push_str(" :signed");
        }
        if let Some(name) = &obj.name {
            if dialect.emit_ids() {
                write!(line, " :id {name}").unwrap();
            }
        }
        line.push(')');
        writeln!(out, "{line}").unwrap();
    }
    for cmd in &script.inert {
        let text = match cmd {
            InertCommand::CheckSat => "(check-sat)",
            InertCommand::GetObjectives => "(get-objectives)",
            InertCommand::Exit => "(exit)",
        };
        writeln!(out, "{text}").unwrap();
    }
    out
}

pub fn print_term(arena: &TermArena, id: TermId) -> String {
    let node = arena.node(id);
    let spelled = |op: &Op| -> &'static str {
        match op {
            Op::Not => "not",
            Op::And => "and",
            Op::Or => "or",
            Op::Xor => "xor",
            Op::Implies => "=>",
            Op::Ite => "ite",
            Op::Eq => "=",
            Op::Distinct => "distinct",
            Op::Add => "+",
            Op::Sub => "-",
            Op::Neg => "-",
            Op::Mul => "*",
            Op::Div => "/",
            Op::ToReal => "to_real",
            Op::Le => "<=",
            Op::Lt => "<",
            Op::Ge => ">=",
            Op::Gt => ">",
            Op::BvAdd => "bvadd",
            Op::BvSub => "bvsub",
            Op::BvMul => "bvmul",
            Op::BvNeg => "bvneg",
            Op::BvNot => "bvnot",
            Op::BvAnd => "bvand",
            Op::BvOr => "bvor",
            Op::BvXor => "bvxor",
            Op::BvShl => "bvshl",
            Op::BvLshr => "bvlshr",
            Op::BvAshr => "bvashr",
            Op::BvUlt => "bvult",
            Op::BvUle => "bvule",
            Op::BvUgt => "bvugt",
            Op::BvUge => "bvuge",
            Op::BvSlt => "bvslt",
            Op::BvSle => "bvsle",
            Op::BvSgt => "bvsgt",
            Op::BvSge => "bvsge",
            _ => unreachable!("leaf handled separately"),
        }
    };
    match &node.op {
        Op::Var(name) => name.clone(),
        Op::BoolConst(b) => b.to_string(),
        Op::IntConst(v) => {
            if v.is_negative() {
                format!("(- {})", v.magnitude())
            } else {
                v.to_string()
            }
        }
        Op::RealConst(r) => rat_smt(r),
        Op::BvConst { value, width } => format!("(_ bv{value} {width})"),
        Op::ZeroExtend(k) => format!(
            "((_ zero_extend {k}) {})",
            print_term(arena, node.children[0])
        ),
        Op::SignExtend(k) => format!(
            "((_ sign_extend {k}) {})",
            print_term(arena, node.children[0])
        ),
        op => {
            let mut s = format!("({}", spelled(op));
            for &c in &node.children {
                s.push(' ');
                s.push_str(&print_term(arena, c));
            }
            s.push(')');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_smt2;
    use super::super::script::scripts_structurally_equal;
    use super::*;

    fn roundtrip(text: &str) {
        let s1 = parse_smt2(text).unwrap();
        let printed = print_smt2(&s1, Dialect::Default);
        let s2 = parse_smt2(&printed).unwrap();
        assert!(
            scripts_structurally_equal(&s1, &s2),
            "round trip failed:\n{printed}"
        );
    }

    #[test]
    fn roundtrips() {
        roundtrip("(declare-const x Int)(assert (<= 0 x))(minimize x)");
        roundtrip(
            "(set-logic QF_LIRA)(declare-const x Int)(declare-const r Real)\
             (assert (= r (/ 7 2)))(assert (<= (to_real x) r))(maximize x)(check-sat)",
        );
        roundtrip(
            "(declare-const a Bool)(declare-const b Bool)\
             (assert (or (and a b) (and a b)))\
             (assert-soft (not a) :weight (/ 5 2) :id g)(minimize 1)",
        );
        roundtrip(
            "(set-option :opt.priority lex)(declare-const v (_ BitVec 8))\
             (assert (bvule v (_ bv100 8)))(maximize v :signed)(minimize v)(get-objectives)",
        );
        roundtrip(
            "(declare-const x Int)(assert (= (- x) (* (- 2) x)))(assert (distinct x 3))",
        );
    }

    #[test]
    fn rational_constant_form() {
        let s = parse_smt2("(declare-const r Real)(assert (= r (/ 7 2)))").unwrap();
        let printed = print_smt2(&s, Dialect::Default);
        assert!(printed.contains("(/ 7 2)"), "got: {printed}");
    }

    #[test]
    fn independent_objectives_in_order() {
        let s = parse_smt2(
            "(declare-const x Int)(declare-const y Int)\
             (assert (<= 0 x))(assert (<= 0 y))(minimize x)(maximize y)",
        )
        .unwrap();
        let printed = print_smt2(&s, Dialect::Default);
        let min_pos = printed.find("(minimize x)").unwrap();
        let max_pos = printed.find("(maximize y)").unwrap();
        assert!(min_pos < max_pos);
    }

    #[test]
    fn dialect_deltas_are_surface_only() {
        let s = parse_smt2(
            "(set-option :opt.priority lex)(declare-const a Bool)\
             (assert-soft a :weight (/ 1 4) :id g)(minimize 1)(minimize 2)",
        )
        .unwrap();
        let z3 = print_smt2(&s, Dialect::Z3);
        assert!(z3.contains(":weight 0.25"), "got: {z3}");
        assert!(z3.contains(":id g"));
        assert!(z3.contains(":opt.priority lex"));
        let bclt = print_smt2(&s, Dialect::Bclt);
        assert!(bclt.contains(":weight (/ 1 4)"), "got: {bclt}");
        assert!(!bclt.contains(":id"));
        assert!(!bclt.contains(":opt.priority"));
        // identical command skeleton in all dialects
        for d in [Dialect::Default, Dialect::Z3, Dialect::Bclt] {
            let p = print_smt2(&s, d);
            assert_eq!(p.matches("(assert-soft").count(), 1);
            assert_eq!(p.matches("(minimize").count(), 2);
        }
    }
}
