//! FlatZinc pretty-printer.
//!
//! `parse_fzn(print_fzn(m)?) == m` for every valid model whose float
//! constants admit a finite decimal form. In lossless mode (the default)
//! a float with no finite decimal representation is an error instead of
//! being rounded.

use std::fmt::Write;

use crate::rational::Rat;

use super::ast::*;
use super::error::FznError;

/// Significant-digit cap for exact decimal emission. Large enough for
/// every power-of-two denominator up to 2^256.
const MAX_DECIMAL_DIGITS: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FloatMode {
    /// Reject floats with no exact finite decimal form.
    Lossless,
    /// Round such floats through the nearest binary double.
    Approximate,
}

pub fn print_fzn(model: &FznModel) -> Result<String, FznError> {
    print_fzn_with(model, FloatMode::Lossless)
}

pub fn print_fzn_with(model: &FznModel, mode: FloatMode) -> Result<String, FznError> {
    let mut out = String::new();
    let p = Printer { mode };
    for param in &model.params {
        p.param(&mut out, param)?;
    }
    for var in &model.vars {
        p.var(&mut out, var)?;
    }
    for arr in &model.arrays {
        p.array(&mut out, arr)?;
    }
    for c in &model.constraints {
        p.constraint(&mut out, c)?;
    }
    for s in &model.solve_items {
        p.solve(&mut out, s)?;
    }
    Ok(out)
}

struct Printer {
    mode: FloatMode,
}

impl Printer {
    fn float(&self, r: &Rat) -> Result<String, FznError> {
        match r.to_exact_decimal(MAX_DECIMAL_DIGITS) {
            Some(s) => Ok(s),
            None => match self.mode {
                FloatMode::Lossless => Err(FznError::InexactFloat(r.to_string())),
                FloatMode::Approximate => {
                    let f = r.to_f64_lossy();
                    let mut s = format!("{f}");
                    if !s.contains('.') && !s.contains('e') && !s.contains('E') {
                        s.push_str(".0");
                    }
                    Ok(s)
                }
            },
        }
    }

    fn set(&self, s: &SetVal) -> String {
        match s {
            SetVal::Range(lo, hi) => format!("{lo}..{hi}"),
            SetVal::Elems(es) => {
                let items: Vec<String> = es.iter().map(|e| e.to_string()).collect();
                format!("{{{}}}", items.join(", "))
            }
        }
    }

    fn lit(&self, lit: &FznLit) -> Result<String, FznError> {
        Ok(match lit {
            FznLit::Bool(b) => b.to_string(),
            FznLit::Int(v) => v.to_string(),
            FznLit::Float(r) => self.float(r)?,
            FznLit::Set(s) => self.set(s),
        })
    }

    fn atom(&self, atom: &FznAtom) -> Result<String, FznError> {
        match atom {
            FznAtom::Lit(l) => self.lit(l),
            FznAtom::Id(s) => Ok(s.clone()),
        }
    }

    fn atoms(&self, atoms: &[FznAtom]) -> Result<String, FznError> {
        let parts: Result<Vec<String>, FznError> = atoms.iter().map(|a| self.atom(a)).collect();
        Ok(parts?.join(", "))
    }

    fn ann_arg(&self, arg: &AnnArg) -> Result<String, FznError> {
        Ok(match arg {
            AnnArg::Atom(a) => self.atom(a)?,
            AnnArg::Range(lo, hi) => format!("{lo}..{hi}"),
            AnnArg::Array(items) => {
                let parts: Result<Vec<String>, FznError> =
                    items.iter().map(|a| self.ann_arg(a)).collect();
                format!("[{}]", parts?.join(", "))
            }
            AnnArg::Call(name, args) => {
                let parts: Result<Vec<String>, FznError> =
                    args.iter().map(|a| self.ann_arg(a)).collect();
                format!("{name}({})", parts?.join(", "))
            }
            AnnArg::Str(s) => format!("\"{s}\""),
        })
    }

    fn annotations(&self, anns: &[FznAnnotation]) -> Result<String, FznError> {
        let mut out = String::new();
        for ann in anns {
            if ann.args.is_empty() {
                write!(out, " :: {}", ann.name).unwrap();
            } else {
                let parts: Result<Vec<String>, FznError> =
                    ann.args.iter().map(|a| self.ann_arg(a)).collect();
                write!(out, " :: {}({})", ann.name, parts?.join(", ")).unwrap();
            }
        }
        Ok(out)
    }

    fn param(&self, out: &mut String, p: &FznParam) -> Result<(), FznError> {
        let ty = match p.ty {
            FznVarType::Bool => "bool",
            FznVarType::Int => "int",
            FznVarType::Float => "float",
            FznVarType::SetOfInt => "set of int",
        };
        writeln!(out, "{ty}: {} = {};", p.name, self.lit(&p.value)?).unwrap();
        Ok(())
    }

    fn var(&self, out: &mut String, v: &FznVarDecl) -> Result<(), FznError> {
        let ty = match (&v.ty, &v.domain) {
            (FznVarType::Bool, _) => "bool".to_string(),
            (FznVarType::Int, None) => "int".to_string(),
            (FznVarType::Int, Some(FznDomain::Int(s))) => self.set(s),
            (FznVarType::Float, None) => "float".to_string(),
            (FznVarType::Float, Some(FznDomain::Float(lo, hi))) => {
                format!("{}..{}", self.float(lo)?, self.float(hi)?)
            }
            (FznVarType::SetOfInt, None) => "set of int".to_string(),
            (FznVarType::SetOfInt, Some(FznDomain::SetUniverse(s))) => {
                format!("set of {}", self.set(s))
            }
            (ty, dom) => panic!("inconsistent declaration: {ty:?} with {dom:?}"),
        };
        let anns = self.annotations(&v.annotations)?;
        match &v.assigned {
            Some(a) => {
                writeln!(out, "var {ty}: {}{anns} = {};", v.name, self.atom(a)?).unwrap()
            }
            None => writeln!(out, "var {ty}: {}{anns};", v.name).unwrap(),
        }
        Ok(())
    }

    fn array(&self, out: &mut String, a: &FznArray) -> Result<(), FznError> {
        let elem = match a.elem {
            FznScalar::Bool => "bool",
            FznScalar::Int => "int",
            FznScalar::Float => "float",
        };
        let var = if a.is_var { "var " } else { "" };
        let anns = self.annotations(&a.annotations)?;
        writeln!(
            out,
            "array [1..{}] of {var}{elem}: {}{anns} = [{}];",
            a.elems.len(),
            a.name,
            self.atoms(&a.elems)?
        )
        .unwrap();
        Ok(())
    }

    fn constraint(&self, out: &mut String, c: &FznConstraint) -> Result<(), FznError> {
        let args: Result<Vec<String>, FznError> = c
            .args
            .iter()
            .map(|arg| match arg {
                FznArg::Atom(a) => self.atom(a),
                FznArg::Array(elems) => Ok(format!("[{}]", self.atoms(elems)?)),
            })
            .collect();
        let anns = self.annotations(&c.annotations)?;
        writeln!(out, "constraint {}({}){anns};", c.name, args?.join(", ")).unwrap();
        Ok(())
    }

    fn solve(&self, out: &mut String, s: &FznSolveGoal) -> Result<(), FznError> {
        let anns = self.annotations(&s.annotations)?;
        match s.kind {
            FznGoalKind::Satisfy => writeln!(out, "solve{anns} satisfy;").unwrap(),
            FznGoalKind::Minimize => writeln!(
                out,
                "solve{anns} minimize {};",
                self.atom(s.objective.as_ref().unwrap())?
            )
            .unwrap(),
            FznGoalKind::Maximize => writeln!(
                out,
                "solve{anns} maximize {};",
                self.atom(s.objective.as_ref().unwrap())?
            )
            .unwrap(),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_fzn;
    use super::*;

    fn roundtrip(text: &str, multi: bool) {
        let m1 = parse_fzn(text, multi).unwrap();
        let printed = print_fzn(&m1).unwrap();
        let m2 = parse_fzn(&printed, multi).unwrap();
        assert_eq!(m1, m2, "printed form:\n{printed}");
        // and the fixpoint: printing the reparse gives the same text
        assert_eq!(printed, print_fzn(&m2).unwrap());
    }

    #[test]
    fn simple_roundtrips() {
        roundtrip("var 1..3: x; solve satisfy;", false);
        roundtrip(
            "var bool: b; var 0..1: x; constraint bool2int(b, x); solve satisfy;",
            false,
        );
        roundtrip("var {1, 3, 5}: x; solve minimize x;", false);
        roundtrip(
            "int: n = 3; var 1..10: x; constraint int_le(x, n); solve maximize x;",
            false,
        );
        roundtrip(
            "var 0..4: x; var 0..4: y; array [1..2] of var int: xs :: output_array([1..2]) = [x, y]; \
             constraint all_different_int(xs); solve satisfy;",
            false,
        );
        roundtrip(
            "var set of 1..3: s; var 0..3: c; constraint set_card(s, c); solve maximize c;",
            false,
        );
        roundtrip(
            "var 0.0..2.5: f; constraint float_lin_eq([2.0], [f], 1.5); solve satisfy;",
            false,
        );
        roundtrip("var 1..3: x; var 1..3: y; solve minimize x; solve maximize y;", true);
    }

    #[test]
    fn empty_constraint_list() {
        roundtrip("var 1..1: x; solve satisfy;", false);
    }

    #[test]
    fn exact_float_survives_roundtrip() {
        // 1799972218749879 / 2^51 has a 51-digit exact decimal form.
        let num = 1_799_972_218_749_879i64;
        let den = 2i64.pow(51);
        let r = Rat::from_i64_fraction(num, den);
        let lit = r.to_exact_decimal(300).unwrap();
        let text = format!("var float: f; constraint float_eq(f, {lit}); solve satisfy;");
        let m = parse_fzn(&text, false).unwrap();
        match &m.constraints[0].args[1] {
            FznArg::Atom(FznAtom::Lit(FznLit::Float(stored))) => assert_eq!(*stored, r),
            other => panic!("unexpected {other:?}"),
        }
        let printed = print_fzn(&m).unwrap();
        let m2 = parse_fzn(&printed, false).unwrap();
        assert_eq!(m, m2);
    }

    #[test]
    fn nondecimal_rational_rejected_in_lossless_mode() {
        let mut m = parse_fzn("var float: f; solve satisfy;", false).unwrap();
        m.constraints.push(FznConstraint {
            name: "float_eq".to_string(),
            args: vec![
                FznArg::Atom(FznAtom::Id("f".into())),
                FznArg::Atom(FznAtom::Lit(FznLit::Float(Rat::from_i64_fraction(1, 3)))),
            ],
            annotations: vec![],
        });
        assert!(matches!(print_fzn(&m), Err(FznError::InexactFloat(_))));
        assert!(print_fzn_with(&m, FloatMode::Approximate).is_ok());
    }

    #[test]
    fn literal_corpus_parses_exactly() {
        // (literal, numerator, denominator) computed by hand
        let corpus: &[(&str, i64, i64)] = &[
            ("0.5", 1, 2),
            ("0.25", 1, 4),
            ("2.0", 2, 1),
            ("-0.75", -3, 4),
            ("1e2", 100, 1),
            ("1.5e1", 15, 1),
            ("1.5e-2", 3, 200),
            ("-2.5e-1", -1, 4),
            ("0.125", 1, 8),
            ("100.001", 100001, 1000),
            ("0.0009765625", 1, 1024),
            ("3.14", 157, 50),
            ("-0.2", -1, 5),
            ("7.0e0", 7, 1),
            ("0.000001", 1, 1000000),
        ];
        for (lit, num, den) in corpus {
            let text = format!("var float: f; constraint float_eq(f, {lit}); solve satisfy;");
            let m = parse_fzn(&text, false).unwrap();
            match &m.constraints[0].args[1] {
                FznArg::Atom(FznAtom::Lit(FznLit::Float(r))) => {
                    assert_eq!(*r, Rat::from_i64_fraction(*num, *den), "literal {lit}");
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }
}
