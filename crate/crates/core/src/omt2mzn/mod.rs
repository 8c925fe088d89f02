//! OMT-to-MiniZinc translation.
//!
//! Scripts over Bool/LIRA/BV become MiniZinc models: shared compound
//! subterms (≥2 fathers) get fresh defined variables, integers are
//! declared unbounded (bound atoms travel as ordinary constraints),
//! floats always receive the policy domain, and bit-vectors ride on the
//! `int` type with modular arithmetic. Weighted MaxSMT turns into
//! penalty objectives first; multiple objectives split into independent
//! models or a single MiniSearch lexicographic model.

mod daggify;
mod maxsmt;

pub use daggify::{daggify, daggify_with, fresh_prefix, LabelMode, LabelPlan};
pub use maxsmt::maxsmt_to_pb;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::mzn::{BinOp, MznDomain, MznExpr, MznItem, MznModel, MznSolve, MznType, MznVarDecl};
use crate::rational::Rat;
use crate::smt::{Combination, ObjDirection, Op, SmtScript, Sort, TermId};

/// Width ceiling for the bit-level fallbacks (bitwise operators and
/// non-constant shifts), which cost O(width) emitted nodes per operator.
pub const MAX_BITWISE_WIDTH: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntDomainMode {
    /// `var int:` plus whatever bound constraints the script carries.
    UnboundedWithConstraints,
    /// Every integer is capped at ±2³¹.
    Capped,
}

#[derive(Debug, Clone)]
pub struct BoundsPolicy {
    /// Symmetric float domain magnitude; defaults to the largest feasible
    /// 32-bit float domain.
    pub float_domain: Rat,
    pub int_domain_mode: IntDomainMode,
}

impl Default for BoundsPolicy {
    fn default() -> Self {
        BoundsPolicy {
            float_domain: Rat::from_decimal_str("3.402823e+38").unwrap(),
            int_domain_mode: IntDomainMode::UnboundedWithConstraints,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputKind {
    Single,
    Independent(usize),
    Lexicographic,
}

#[derive(Debug, Clone)]
pub struct MznOutput {
    pub models: Vec<MznModel>,
    pub kind: OutputKind,
    /// One entry per objective, for the independent-mode manifest.
    pub objective_names: Vec<String>,
}

impl MznOutput {
    pub fn documents(&self) -> Vec<String> {
        self.models.iter().map(crate::mzn::print_mzn).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TranslateError {
    #[error("bit-vectors must be narrower than 64 bits, got {0}")]
    BvTooWide(u32),
    #[error("bit-level operator `{op}` supported only up to width {max}, got {width}")]
    BitwiseTooWide { op: String, width: u32, max: u32 },
    #[error("lexicographic mode needs at least two objectives, got {0}")]
    LexNeedsTwo(usize),
}

pub fn translate(script: &SmtScript, policy: &BoundsPolicy) -> Result<MznOutput, TranslateError> {
    translate_with_mode(script, policy, LabelMode::TwoFathers)
}

pub fn translate_with_mode(
    script: &SmtScript,
    policy: &BoundsPolicy,
    mode: LabelMode,
) -> Result<MznOutput, TranslateError> {
    let script = maxsmt_to_pb(script);
    let plan = daggify_with(&script, mode);
    let tr = Translator {
        script: &script,
        plan: &plan,
        policy,
    };

    let mut base: Vec<MznItem> = Vec::new();
    for (name, sort) in &script.decls {
        base.push(MznItem::VarDecl(tr.decl(name, *sort)?));
    }
    for &id in &plan.order {
        let (decl, constraint) = tr.definition(id)?;
        base.push(MznItem::VarDecl(decl));
        base.push(MznItem::Constraint(constraint));
    }
    for &a in &script.assertions {
        base.push(MznItem::Constraint(tr.expr(a)?));
    }

    let objective_names: Vec<String> = script
        .objectives
        .iter()
        .enumerate()
        .map(|(i, o)| o.name.clone().unwrap_or_else(|| format!("obj{}", i + 1)))
        .collect();

    // Objective value expression, honoring the signed flag on BV terms.
    let obj_expr = |i: usize| -> Result<MznExpr, TranslateError> {
        let obj = &script.objectives[i];
        let e = tr.use_site(obj.term)?;
        match self::obj_sort(&script, obj.term) {
            Sort::BitVec(w) if obj.signed => Ok(tr.signed_value(e, w)),
            _ => Ok(e),
        }
    };

    if script.combination == Combination::Lexicographic && script.objectives.len() < 2 {
        return Err(TranslateError::LexNeedsTwo(script.objectives.len()));
    }
    match (script.objectives.len(), script.combination) {
        (0, _) => {
            let mut items = base;
            items.push(MznItem::Solve(MznSolve::Satisfy));
            Ok(MznOutput {
                models: vec![MznModel { items }],
                kind: OutputKind::Single,
                objective_names,
            })
        }
        (1, _) => {
            let mut items = base;
            let e = obj_expr(0)?;
            let solve = match script.objectives[0].direction {
                ObjDirection::Minimize => MznSolve::Minimize(e),
                ObjDirection::Maximize => MznSolve::Maximize(e),
            };
            items.push(MznItem::Solve(solve));
            Ok(MznOutput {
                models: vec![MznModel { items }],
                kind: OutputKind::Single,
                objective_names,
            })
        }
        (n, Combination::Independent) => {
            let mut models = Vec::with_capacity(n);
            for i in 0..n {
                let mut items = base.clone();
                let e = obj_expr(i)?;
                let solve = match script.objectives[i].direction {
                    ObjDirection::Minimize => MznSolve::Minimize(e),
                    ObjDirection::Maximize => MznSolve::Maximize(e),
                };
                items.push(MznItem::Solve(solve));
                models.push(MznModel { items });
            }
            Ok(MznOutput {
                models,
                kind: OutputKind::Independent(n),
                objective_names,
            })
        }
        (n, Combination::Lexicographic) => {
            if n < 2 {
                return Err(TranslateError::LexNeedsTwo(n));
            }
            let mut items = vec![MznItem::Include("minisearch.mzn".to_string())];
            items.extend(base);
            // lex_minimize wants minimization everywhere: maximize
            // objectives enter negated.
            let mut objs = Vec::with_capacity(n);
            for i in 0..n {
                let e = obj_expr(i)?;
                objs.push(match script.objectives[i].direction {
                    ObjDirection::Minimize => e,
                    ObjDirection::Maximize => MznExpr::Neg(Box::new(e)),
                });
            }
            items.push(MznItem::Solve(MznSolve::LexMinimize(objs)));
            Ok(MznOutput {
                models: vec![MznModel { items }],
                kind: OutputKind::Lexicographic,
                objective_names,
            })
        }
    }
}

fn obj_sort(script: &SmtScript, id: TermId) -> Sort {
    script.arena.sort(id)
}

/// Translates a single bit-vector term to its integer expression, with
/// every subterm inlined. The entry point for differential tests of the
/// modular semantics.
pub fn translate_bv_term(script: &SmtScript, id: TermId) -> Result<MznExpr, TranslateError> {
    let plan = LabelPlan::default();
    let policy = BoundsPolicy::default();
    let tr = Translator {
        script,
        plan: &plan,
        policy: &policy,
    };
    tr.expr(id)
}

struct Translator<'a> {
    script: &'a SmtScript,
    plan: &'a LabelPlan,
    policy: &'a BoundsPolicy,
}

impl Translator<'_> {
    fn decl(&self, name: &str, sort: Sort) -> Result<MznVarDecl, TranslateError> {
        Ok(match sort {
            Sort::Bool => MznVarDecl {
                name: name.to_string(),
                ty: MznType::Bool,
                domain: None,
            },
            Sort::Int => self.int_decl(name.to_string()),
            Sort::Real => MznVarDecl {
                name: name.to_string(),
                ty: MznType::Float,
                domain: Some(MznDomain::FloatRange(
                    -self.policy.float_domain.clone(),
                    self.policy.float_domain.clone(),
                )),
            },
            Sort::BitVec(w) => {
                if w >= 64 {
                    return Err(TranslateError::BvTooWide(w));
                }
                MznVarDecl {
                    name: name.to_string(),
                    ty: MznType::Int,
                    domain: Some(MznDomain::IntRange(
                        BigInt::from(0),
                        (BigInt::one() << w) - 1,
                    )),
                }
            }
        })
    }

    fn int_decl(&self, name: String) -> MznVarDecl {
        let domain = match self.policy.int_domain_mode {
            IntDomainMode::UnboundedWithConstraints => None,
            IntDomainMode::Capped => {
                let cap: BigInt = BigInt::one() << 31;
                Some(MznDomain::IntRange(-cap.clone(), cap))
            }
        };
        MznVarDecl {
            name,
            ty: MznType::Int,
            domain,
        }
    }

    /// Declaration and defining constraint for a labeled node.
    fn definition(&self, id: TermId) -> Result<(MznVarDecl, MznExpr), TranslateError> {
        let label = &self.plan.labels[&id];
        let body = self.expr(id)?;
        let sort = self.script.arena.sort(id);
        let decl = match sort {
            Sort::Bool => MznVarDecl {
                name: label.clone(),
                ty: MznType::Bool,
                domain: None,
            },
            other => self.decl(label, other)?,
        };
        let link = match sort {
            Sort::Bool => MznExpr::bin(BinOp::Iff, MznExpr::ident(label), body),
            _ => MznExpr::bin(BinOp::Eq, MznExpr::ident(label), body),
        };
        Ok((decl, link))
    }

    /// Expression for a node at a use site: labeled nodes become a name.
    fn use_site(&self, id: TermId) -> Result<MznExpr, TranslateError> {
        if let Some(label) = self.plan.labels.get(&id) {
            return Ok(MznExpr::ident(label));
        }
        self.expr(id)
    }

    /// One-level expansion: children go through `use_site`.
    fn expr(&self, id: TermId) -> Result<MznExpr, TranslateError> {
        let node = self.script.arena.node(id);
        let kids = &node.children;
        let kid = |i: usize| self.use_site(kids[i]);
        let fold = |op: BinOp| -> Result<MznExpr, TranslateError> {
            let mut acc = self.use_site(kids[0])?;
            for &c in &kids[1..] {
                acc = MznExpr::bin(op, acc, self.use_site(c)?);
            }
            Ok(acc)
        };
        Ok(match &node.op {
            Op::Var(name) => MznExpr::ident(name),
            Op::BoolConst(b) => MznExpr::BoolLit(*b),
            Op::IntConst(v) => MznExpr::IntLit(v.clone()),
            Op::RealConst(r) => MznExpr::FloatLit(r.clone()),
            Op::BvConst { value, width } => {
                if *width >= 64 {
                    return Err(TranslateError::BvTooWide(*width));
                }
                MznExpr::IntLit(BigInt::from(value.clone()))
            }
            Op::Not => MznExpr::Not(Box::new(kid(0)?)),
            Op::And => fold(BinOp::And)?,
            Op::Or => fold(BinOp::Or)?,
            Op::Xor => fold(BinOp::Xor)?,
            Op::Implies => fold(BinOp::Imp)?,
            Op::Ite => MznExpr::Ite(Box::new(kid(0)?), Box::new(kid(1)?), Box::new(kid(2)?)),
            Op::Eq => self.chain(kids, BinOp::Eq)?,
            Op::Distinct => {
                let mut pairs = Vec::new();
                for i in 0..kids.len() {
                    for j in i + 1..kids.len() {
                        pairs.push(MznExpr::bin(
                            BinOp::Ne,
                            self.use_site(kids[i])?,
                            self.use_site(kids[j])?,
                        ));
                    }
                }
                conj(pairs)
            }
            Op::Add => fold(BinOp::Add)?,
            Op::Sub => fold(BinOp::Sub)?,
            Op::Neg => MznExpr::Neg(Box::new(kid(0)?)),
            Op::Mul => fold(BinOp::Mul)?,
            Op::Div => fold(BinOp::FDiv)?,
            Op::ToReal => kid(0)?,
            Op::Le => self.chain(kids, BinOp::Le)?,
            Op::Lt => self.chain(kids, BinOp::Lt)?,
            Op::Ge => self.chain(kids, BinOp::Ge)?,
            Op::Gt => self.chain(kids, BinOp::Gt)?,
            bv_op => self.bv_expr(bv_op, id)?,
        })
    }

    fn chain(&self, kids: &[TermId], op: BinOp) -> Result<MznExpr, TranslateError> {
        // Comparisons over bit-vector carriers need the signed/unsigned
        // reading only through the dedicated bv operators; plain = over
        // carriers is value equality either way.
        let mut parts = Vec::new();
        for w in kids.windows(2) {
            parts.push(MznExpr::bin(
                op,
                self.use_site(w[0])?,
                self.use_site(w[1])?,
            ));
        }
        Ok(conj(parts))
    }

    // ---- bit-vectors as ints ------------------------------------------------

    fn width_of(&self, id: TermId) -> Result<u32, TranslateError> {
        match self.script.arena.sort(id) {
            Sort::BitVec(w) if w < 64 => Ok(w),
            Sort::BitVec(w) => Err(TranslateError::BvTooWide(w)),
            other => panic!("expected a bit-vector, got {other}"),
        }
    }

    fn two_pow(&self, k: u32) -> MznExpr {
        MznExpr::IntLit(BigInt::one() << k)
    }

    /// `if x ≥ 2^(w−1) then x − 2^w else x`
    fn signed_value(&self, x: MznExpr, w: u32) -> MznExpr {
        MznExpr::Ite(
            Box::new(MznExpr::bin(BinOp::Ge, x.clone(), self.two_pow(w - 1))),
            Box::new(MznExpr::bin(BinOp::Sub, x.clone(), self.two_pow(w))),
            Box::new(x),
        )
    }

    fn modw(&self, e: MznExpr, w: u32) -> MznExpr {
        MznExpr::bin(BinOp::Mod, e, self.two_pow(w))
    }

    /// Bit j of `x`: `(x div 2^j) mod 2`.
    fn bit(&self, x: &MznExpr, j: u32) -> MznExpr {
        MznExpr::bin(
            BinOp::Mod,
            MznExpr::bin(BinOp::IDiv, x.clone(), self.two_pow(j)),
            MznExpr::int(2),
        )
    }

    fn check_bitwise(&self, op: &Op, w: u32) -> Result<(), TranslateError> {
        if w > MAX_BITWISE_WIDTH {
            return Err(TranslateError::BitwiseTooWide {
                op: format!("{op:?}"),
                width: w,
                max: MAX_BITWISE_WIDTH,
            });
        }
        Ok(())
    }

    fn bv_expr(&self, op: &Op, id: TermId) -> Result<MznExpr, TranslateError> {
        let node = self.script.arena.node(id);
        let kids = &node.children;
        let a = self.use_site(kids[0])?;
        let wa = self.width_of(kids[0])?;
        match op {
            Op::BvNeg => Ok(self.modw(
                MznExpr::bin(BinOp::Sub, self.two_pow(wa), a),
                wa,
            )),
            Op::BvNot => Ok(MznExpr::bin(
                BinOp::Sub,
                MznExpr::IntLit((BigInt::one() << wa) - 1),
                a,
            )),
            Op::ZeroExtend(_) => Ok(a),
            Op::SignExtend(k) => {
                let w = wa + k;
                if w >= 64 {
                    return Err(TranslateError::BvTooWide(w));
                }
                // negative carriers move up to the top of the wider range
                Ok(MznExpr::Ite(
                    Box::new(MznExpr::bin(BinOp::Ge, a.clone(), self.two_pow(wa - 1))),
                    Box::new(MznExpr::bin(
                        BinOp::Add,
                        a.clone(),
                        MznExpr::IntLit((BigInt::one() << w) - (BigInt::one() << wa)),
                    )),
                    Box::new(a),
                ))
            }
            Op::BvAdd | Op::BvSub | Op::BvMul => {
                let b = self.use_site(kids[1])?;
                let sum = match op {
                    Op::BvAdd => MznExpr::bin(BinOp::Add, a, b),
                    // keep the dividend non-negative for `mod`
                    Op::BvSub => MznExpr::bin(
                        BinOp::Add,
                        MznExpr::bin(BinOp::Sub, a, b),
                        self.two_pow(wa),
                    ),
                    _ => MznExpr::bin(BinOp::Mul, a, b),
                };
                Ok(self.modw(sum, wa))
            }
            Op::BvUlt | Op::BvUle | Op::BvUgt | Op::BvUge => {
                let b = self.use_site(kids[1])?;
                let cmp = match op {
                    Op::BvUlt => BinOp::Lt,
                    Op::BvUle => BinOp::Le,
                    Op::BvUgt => BinOp::Gt,
                    _ => BinOp::Ge,
                };
                Ok(MznExpr::bin(cmp, a, b))
            }
            Op::BvSlt | Op::BvSle | Op::BvSgt | Op::BvSge => {
                let b = self.use_site(kids[1])?;
                let cmp = match op {
                    Op::BvSlt => BinOp::Lt,
                    Op::BvSle => BinOp::Le,
                    Op::BvSgt => BinOp::Gt,
                    _ => BinOp::Ge,
                };
                Ok(MznExpr::bin(
                    cmp,
                    self.signed_value(a, wa),
                    self.signed_value(b, wa),
                ))
            }
            Op::BvAnd | Op::BvOr | Op::BvXor => {
                self.check_bitwise(op, wa)?;
                let b = self.use_site(kids[1])?;
                let mut parts = Vec::new();
                for j in 0..wa {
                    let ba = self.bit(&a, j);
                    let bb = self.bit(&b, j);
                    let bit = match op {
                        Op::BvAnd => MznExpr::bin(BinOp::Mul, ba, bb),
                        Op::BvOr => MznExpr::bin(
                            BinOp::Sub,
                            MznExpr::bin(BinOp::Add, ba.clone(), bb.clone()),
                            MznExpr::bin(BinOp::Mul, ba, bb),
                        ),
                        _ => MznExpr::bin(
                            BinOp::Mod,
                            MznExpr::bin(BinOp::Add, ba, bb),
                            MznExpr::int(2),
                        ),
                    };
                    parts.push(MznExpr::bin(
                        BinOp::Mul,
                        self.two_pow(j),
                        bit,
                    ));
                }
                Ok(sum(parts))
            }
            Op::BvShl | Op::BvLshr | Op::BvAshr => {
                let shift = kids[1];
                match &self.script.arena.node(shift).op {
                    Op::BvConst { value, .. } => {
                        let c = u32::try_from(value.clone()).unwrap_or(u32::MAX);
                        Ok(self.shift_by_const(op, a, wa, c))
                    }
                    _ => {
                        self.check_bitwise(op, wa)?;
                        let b = self.use_site(shift)?;
                        // nested selection over every feasible amount
                        let mut result = self.shift_overflow(op, a.clone(), wa);
                        for c in (0..wa).rev() {
                            result = MznExpr::Ite(
                                Box::new(MznExpr::bin(
                                    BinOp::Eq,
                                    b.clone(),
                                    MznExpr::int(c as i64),
                                )),
                                Box::new(self.shift_by_const(op, a.clone(), wa, c)),
                                Box::new(result),
                            );
                        }
                        Ok(result)
                    }
                }
            }
            other => panic!("not a bit-vector operator: {other:?}"),
        }
    }

    fn shift_by_const(&self, op: &Op, a: MznExpr, w: u32, c: u32) -> MznExpr {
        if c >= w {
            return self.shift_overflow(op, a, w);
        }
        if c == 0 {
            return a;
        }
        match op {
            Op::BvShl => self.modw(MznExpr::bin(BinOp::Mul, a, self.two_pow(c)), w),
            Op::BvLshr => MznExpr::bin(BinOp::IDiv, a, self.two_pow(c)),
            _ => {
                // arithmetic shift: logical shift plus a one-fill of the
                // top c bits when the sign bit is set
                let logical = MznExpr::bin(BinOp::IDiv, a.clone(), self.two_pow(c));
                let fill = MznExpr::IntLit((BigInt::one() << w) - (BigInt::one() << (w - c)));
                MznExpr::Ite(
                    Box::new(MznExpr::bin(BinOp::Ge, a, self.two_pow(w - 1))),
                    Box::new(MznExpr::bin(BinOp::Add, logical.clone(), fill)),
                    Box::new(logical),
                )
            }
        }
    }

    /// Result of shifting by an amount ≥ width.
    fn shift_overflow(&self, op: &Op, a: MznExpr, w: u32) -> MznExpr {
        match op {
            Op::BvAshr => MznExpr::Ite(
                Box::new(MznExpr::bin(BinOp::Ge, a, self.two_pow(w - 1))),
                Box::new(MznExpr::IntLit((BigInt::one() << w) - 1)),
                Box::new(MznExpr::int(0)),
            ),
            _ => MznExpr::int(0),
        }
    }
}

fn conj(parts: Vec<MznExpr>) -> MznExpr {
    let mut it = parts.into_iter();
    let first = it.next().unwrap_or(MznExpr::BoolLit(true));
    it.fold(first, |acc, p| MznExpr::bin(BinOp::And, acc, p))
}

fn sum(parts: Vec<MznExpr>) -> MznExpr {
    let mut it = parts.into_iter();
    let first = it.next().unwrap_or(MznExpr::int(0));
    it.fold(first, |acc, p| MznExpr::bin(BinOp::Add, acc, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mzn::{eval_expr, parse_mzn, print_mzn, Value};
    use crate::smt::parse_smt2;
    use std::collections::HashMap;

    #[test]
    fn single_objective_model() {
        let s = parse_smt2(
            "(declare-const x Int)(assert (and (<= 0 x) (<= x 9)))(minimize x)",
        )
        .unwrap();
        let out = translate(&s, &BoundsPolicy::default()).unwrap();
        assert_eq!(out.kind, OutputKind::Single);
        let doc = print_mzn(&out.models[0]);
        assert!(doc.contains("var int: x;"), "{doc}");
        assert!(doc.contains("solve minimize x;"), "{doc}");
        // emitted text parses back
        parse_mzn(&doc).unwrap();
    }

    #[test]
    fn floats_always_get_the_policy_domain() {
        let s = parse_smt2("(declare-const r Real)(assert (<= r 1.5))(maximize r)").unwrap();
        let out = translate(&s, &BoundsPolicy::default()).unwrap();
        let doc = print_mzn(&out.models[0]);
        assert!(doc.contains("var -3.402823e38..3.402823e38: r;"), "{doc}");
    }

    #[test]
    fn independent_objectives_split_models() {
        let s = parse_smt2(
            "(declare-const x Int)(declare-const y Int)\
             (assert (<= 0 x))(assert (<= 0 y))(minimize x)(maximize y)",
        )
        .unwrap();
        let out = translate(&s, &BoundsPolicy::default()).unwrap();
        assert_eq!(out.kind, OutputKind::Independent(2));
        assert_eq!(out.models.len(), 2);
        let a = print_mzn(&out.models[0]);
        let b = print_mzn(&out.models[1]);
        assert!(a.contains("solve minimize x;"));
        assert!(b.contains("solve maximize y;"));
        // models differ only in the solve item
        let strip = |s: &str| -> String {
            s.lines().filter(|l| !l.starts_with("solve")).collect()
        };
        assert_eq!(strip(&a), strip(&b));
    }

    #[test]
    fn lexicographic_mode_emits_minisearch() {
        let s = parse_smt2(
            "(set-option :opt.priority lex)(declare-const x Int)(declare-const y Int)\
             (assert (<= 0 x))(assert (<= 0 y))(minimize x)(maximize y)",
        )
        .unwrap();
        let out = translate(&s, &BoundsPolicy::default()).unwrap();
        assert_eq!(out.kind, OutputKind::Lexicographic);
        assert_eq!(out.models.len(), 1);
        let doc = print_mzn(&out.models[0]);
        assert!(doc.contains("include \"minisearch.mzn\";"), "{doc}");
        assert!(doc.contains("lex_minimize([x, (-y)]);"), "{doc}");
    }

    #[test]
    fn lexicographic_needs_two() {
        let s = parse_smt2(
            "(set-option :opt.priority lex)(declare-const x Int)(assert (<= 0 x))(minimize x)",
        )
        .unwrap();
        assert_eq!(
            translate(&s, &BoundsPolicy::default()).unwrap_err(),
            TranslateError::LexNeedsTwo(1)
        );
    }

    #[test]
    fn shared_node_defined_once() {
        let s = parse_smt2(
            "(declare-const a Bool)(declare-const b Bool)(assert (or (and a b) (and a b)))",
        )
        .unwrap();
        let out = translate(&s, &BoundsPolicy::default()).unwrap();
        let doc = print_mzn(&out.models[0]);
        assert_eq!(doc.matches("ZINC_DEF_").count(), 4, "{doc}");
        // declaration, two uses, one definition head
        assert!(doc.contains("var bool: ZINC_DEF_"), "{doc}");
    }

    #[test]
    fn wide_bitvectors_rejected() {
        let s = parse_smt2("(declare-const v (_ BitVec 64))(assert (bvule v v))").unwrap();
        assert_eq!(
            translate(&s, &BoundsPolicy::default()).unwrap_err(),
            TranslateError::BvTooWide(64)
        );
    }

    #[test]
    fn bitwise_cutoff() {
        let s = parse_smt2(
            "(declare-const v (_ BitVec 32))(declare-const u (_ BitVec 32))\
             (assert (= (bvand v u) v))",
        )
        .unwrap();
        assert!(matches!(
            translate(&s, &BoundsPolicy::default()).unwrap_err(),
            TranslateError::BitwiseTooWide { .. }
        ));
    }

    fn eval_bv(text: &str, env: &[(&str, i64)]) -> Value {
        let s = parse_smt2(text).unwrap();
        let last = *s.assertions.last().unwrap();
        let e = translate_bv_term(&s, last).unwrap();
        let env: HashMap<String, Value> = env
            .iter()
            .map(|(n, v)| (n.to_string(), Value::int(*v)))
            .collect();
        eval_expr(&e, &env).unwrap()
    }

    #[test]
    fn bv_modular_addition() {
        // 0x0F + 0x01 at width 8 = 16
        let v = eval_bv(
            "(declare-const r (_ BitVec 8))(assert (= r (bvadd (_ bv15 8) (_ bv1 8))))",
            &[("r", 16)],
        );
        assert_eq!(v, Value::Bool(true));
        let wrap = eval_bv(
            "(declare-const r (_ BitVec 8))(assert (= r (bvadd (_ bv255 8) (_ bv1 8))))",
            &[("r", 0)],
        );
        assert_eq!(wrap, Value::Bool(true));
    }

    #[test]
    fn bv_signed_comparison() {
        // 0xFF is −1 signed at width 8, so bvslt 0xFF 0x00 holds
        let s = parse_smt2("(assert (bvslt (_ bv255 8) (_ bv0 8)))").unwrap();
        let e = translate_bv_term(&s, s.assertions[0]).unwrap();
        assert_eq!(eval_expr(&e, &HashMap::new()), Ok(Value::Bool(true)));
        let s = parse_smt2("(assert (bvult (_ bv255 8) (_ bv0 8)))").unwrap();
        let e = translate_bv_term(&s, s.assertions[0]).unwrap();
        assert_eq!(eval_expr(&e, &HashMap::new()), Ok(Value::Bool(false)));
    }
}
