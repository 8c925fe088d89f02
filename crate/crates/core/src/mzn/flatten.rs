//! Flattens the emitted MiniZinc subset into FlatZinc.
//!
//! This is the built-in replacement for an external `mzn2fzn` compiler,
//! good for exactly the model shapes the translator emits. It mirrors the
//! standard compiler's observable behavior:
//!
//! - top-level bound conjuncts `x ⋈ c` are absorbed into variable domains,
//! - nested expressions become `X_INTRODUCED_n_` variables defined by
//!   FlatZinc builtins (with `defines_var` annotations),
//! - and, deliberately, a division between two float constants is folded
//!   through a binary double and re-read from its shortest decimal form.
//!   That last point reproduces the rounding behavior of double-based
//!   compilers; the rational-preserving wrapper exists to route fractions
//!   around it.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::fzn::{
    AnnArg, FznAnnotation, FznAtom, FznConstraint, FznDomain, FznGoalKind, FznLit, FznModel,
    FznSolveGoal, FznVarDecl, FznVarType, SetVal,
};
use crate::rational::Rat;

use super::ast::*;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlattenError {
    #[error("unsupported expression: {0}")]
    Unsupported(String),
    #[error("type error: {0}")]
    Type(String),
    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),
    #[error("integer literal out of the FlatZinc range: {0}")]
    LiteralOverflow(String),
    #[error("missing solve item")]
    NoSolveItem,
    #[error("constant division by zero")]
    DivisionByZero,
}

type IntIv = Option<(BigInt, BigInt)>;
type FloatIv = Option<(Rat, Rat)>;

/// Linear integer expression: `k + Σ coeff·var`.
#[derive(Debug, Clone, Default)]
struct LinI {
    terms: BTreeMap<String, BigInt>,
    k: BigInt,
}

impl LinI {
    fn constant(k: BigInt) -> Self {
        LinI {
            terms: BTreeMap::new(),
            k,
        }
    }

    fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(name.to_string(), BigInt::from(1));
        LinI {
            terms,
            k: BigInt::zero(),
        }
    }

    fn scale(mut self, c: &BigInt) -> Self {
        if c.is_zero() {
            return LinI::constant(BigInt::zero());
        }
        for v in self.terms.values_mut() {
            *v *= c;
        }
        self.terms.retain(|_, v| !v.is_zero());
        self.k *= c;
        self
    }

    fn add(mut self, other: LinI) -> Self {
        for (name, c) in other.terms {
            let entry = self.terms.entry(name).or_insert_with(BigInt::zero);
            *entry += c;
        }
        self.terms.retain(|_, v| !v.is_zero());
        self.k += other.k;
        self
    }

    fn sub(self, other: LinI) -> Self {
        self.add(other.scale(&BigInt::from(-1)))
    }

    fn as_const(&self) -> Option<&BigInt> {
        self.terms.is_empty().then_some(&self.k)
    }

    fn as_unit_var(&self) -> Option<&str> {
        if self.k.is_zero() && self.terms.len() == 1 {
            let (name, c) = self.terms.iter().next().unwrap();
            if *c == BigInt::from(1) {
                return Some(name);
            }
        }
        None
    }
}

/// Linear float expression: `k + Σ coeff·var` with rational coefficients.
#[derive(Debug, Clone)]
struct LinF {
    terms: BTreeMap<String, Rat>,
    k: Rat,
}

impl LinF {
    fn constant(k: Rat) -> Self {
        LinF {
            terms: BTreeMap::new(),
            k,
        }
    }

    fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(name.to_string(), Rat::one());
        LinF {
            terms,
            k: Rat::zero(),
        }
    }

    fn scale(mut self, c: &Rat) -> Self {
        if c.is_zero() {
            return LinF::constant(Rat::zero());
        }
        for v in self.terms.values_mut() {
            *v = &*v * c;
        }
        self.k = &self.k * c;
        self
    }

    fn add(mut self, other: LinF) -> Self {
        for (name, c) in other.terms {
            let entry = self.terms.entry(name).or_insert_with(Rat::zero);
            *entry = &*entry + &c;
        }
        self.terms.retain(|_, v| !v.is_zero());
        self.k = self.k + other.k;
        self
    }

    fn sub(self, other: LinF) -> Self {
        self.add(other.scale(&-Rat::one()))
    }

    fn as_const(&self) -> Option<&Rat> {
        self.terms.is_empty().then_some(&self.k)
    }

    fn as_unit_var(&self) -> Option<&str> {
        if self.k.is_zero() && self.terms.len() == 1 {
            let (name, c) = self.terms.iter().next().unwrap();
            if *c == Rat::one() {
                return Some(name);
            }
        }
        None
    }
}

fn iv_add(a: &IntIv, b: &IntIv) -> IntIv {
    match (a, b) {
        (Some((al, ah)), Some((bl, bh))) => Some((al + bl, ah + bh)),
        _ => None,
    }
}

fn iv_scale(a: &IntIv, c: &BigInt) -> IntIv {
    a.as_ref().map(|(lo, hi)| {
        if c.is_negative() {
            (hi * c, lo * c)
        } else {
            (lo * c, hi * c)
        }
    })
}

fn fiv_add(a: &FloatIv, b: &FloatIv) -> FloatIv {
    match (a, b) {
        (Some((al, ah)), Some((bl, bh))) => Some((al + bl, ah + bh)),
        _ => None,
    }
}

fn fiv_scale(a: &FloatIv, c: &Rat) -> FloatIv {
    a.as_ref().map(|(lo, hi)| {
        if c.is_negative() {
            (hi * c, lo * c)
        } else {
            (lo * c, hi * c)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ExprTy {
    Bool,
    Int,
    Float,
}

struct Flattener {
    vars: Vec<FznVarDecl>,
    constraints: Vec<FznConstraint>,
    counter: usize,
    int_iv: HashMap<String, IntIv>,
    float_iv: HashMap<String, FloatIv>,
    bools: HashMap<String, ()>,
    /// Half-open bounds accumulated from absorbed conjuncts.
    abs_int: HashMap<String, (Option<BigInt>, Option<BigInt>)>,
    abs_float: HashMap<String, (Option<Rat>, Option<Rat>)>,
    /// Cache of int-to-float coercion variables.
    int2float: HashMap<String, String>,
    trivially_false: bool,
}

/// Flattens a model of the emitted subset into FlatZinc.
pub fn flatten_mzn(model: &MznModel) -> Result<FznModel, FlattenError> {
    let f = Flattener {
        vars: Vec::new(),
        constraints: Vec::new(),
        counter: 0,
        int_iv: HashMap::new(),
        float_iv: HashMap::new(),
        bools: HashMap::new(),
        abs_int: HashMap::new(),
        abs_float: HashMap::new(),
        int2float: HashMap::new(),
        trivially_false: false,
    };
    f.run(model)
}

impl Flattener {
    fn run(mut self, model: &MznModel) -> Result<FznModel, FlattenError> {
        // Register declarations.
        let mut declared_int: HashMap<String, IntIv> = HashMap::new();
        let mut declared_float: HashMap<String, FloatIv> = HashMap::new();
        let mut decl_order: Vec<(String, ExprTy)> = Vec::new();
        for d in model.decls() {
            match (&d.ty, &d.domain) {
                (MznType::Bool, _) => {
                    self.bools.insert(d.name.clone(), ());
                    decl_order.push((d.name.clone(), ExprTy::Bool));
                }
                (MznType::Int, dom) => {
                    let iv = match dom {
                        Some(MznDomain::IntRange(lo, hi)) => Some((lo.clone(), hi.clone())),
                        _ => None,
                    };
                    declared_int.insert(d.name.clone(), iv.clone());
                    self.int_iv.insert(d.name.clone(), iv);
                    decl_order.push((d.name.clone(), ExprTy::Int));
                }
                (MznType::Float, dom) => {
                    let iv = match dom {
                        Some(MznDomain::FloatRange(lo, hi)) => Some((lo.clone(), hi.clone())),
                        _ => None,
                    };
                    declared_float.insert(d.name.clone(), iv.clone());
                    self.float_iv.insert(d.name.clone(), iv);
                    decl_order.push((d.name.clone(), ExprTy::Float));
                }
            }
        }

        // Split constraints into top-level conjuncts and absorb bound
        // atoms into domains, like the standard compiler does.
        let mut kept: Vec<MznExpr> = Vec::new();
        for c in model.constraints() {
            let mut conjuncts = Vec::new();
            split_conjuncts(c, &mut conjuncts);
            for conjunct in conjuncts {
                if !self.try_absorb(conjunct)? {
                    kept.push(conjunct.clone());
                }
            }
        }

        // Emit source variable declarations with the absorbed domains.
        // Absorbed bounds that only close one side cannot become a FlatZinc
        // domain; they are re-emitted as unary linear constraints.
        for (name, ty) in &decl_order {
            match ty {
                ExprTy::Bool => self.vars.push(FznVarDecl {
                    name: name.clone(),
                    ty: FznVarType::Bool,
                    domain: None,
                    annotations: vec![],
                    assigned: None,
                }),
                ExprTy::Int => {
                    let declared = declared_int.get(name).cloned().flatten();
                    let (abs_lo, abs_hi) = self
                        .abs_int
                        .get(name)
                        .cloned()
                        .unwrap_or((None, None));
                    let lo = merge_bound(declared.as_ref().map(|(l, _)| l.clone()), abs_lo, true);
                    let hi = merge_bound(declared.as_ref().map(|(_, h)| h.clone()), abs_hi, false);
                    let (domain, iv) = match (lo, hi) {
                        (Some(lo), Some(hi)) if lo <= hi => (
                            Some(FznDomain::Int(SetVal::Range(to_i64(&lo)?, to_i64(&hi)?))),
                            Some((lo, hi)),
                        ),
                        (Some(_), Some(_)) => {
                            // contradictory bounds: keep the declared domain
                            // shape (if any) and mark the model unsatisfiable
                            self.trivially_false = true;
                            match declared {
                                Some((lo, hi)) => (
                                    Some(FznDomain::Int(SetVal::Range(
                                        to_i64(&lo)?,
                                        to_i64(&hi)?,
                                    ))),
                                    Some((lo, hi)),
                                ),
                                None => (None, None),
                            }
                        }
                        (lo, hi) => {
                            if let Some(lo) = &lo {
                                self.emit_unary_int_bound(name, lo, true)?;
                            }
                            if let Some(hi) = &hi {
                                self.emit_unary_int_bound(name, hi, false)?;
                            }
                            (None, None)
                        }
                    };
                    self.int_iv.insert(name.clone(), iv);
                    self.vars.push(FznVarDecl {
                        name: name.clone(),
                        ty: FznVarType::Int,
                        domain,
                        annotations: vec![],
                        assigned: None,
                    });
                }
                ExprTy::Float => {
                    let declared = declared_float.get(name).cloned().flatten();
                    let (abs_lo, abs_hi) = self
                        .abs_float
                        .get(name)
                        .cloned()
                        .unwrap_or((None, None));
                    let lo = merge_fbound(declared.as_ref().map(|(l, _)| l.clone()), abs_lo, true);
                    let hi =
                        merge_fbound(declared.as_ref().map(|(_, h)| h.clone()), abs_hi, false);
                    let (domain, iv) = match (lo, hi) {
                        (Some(lo), Some(hi)) if lo <= hi => (
                            Some(FznDomain::Float(lo.clone(), hi.clone())),
                            Some((lo, hi)),
                        ),
                        (Some(_), Some(_)) => {
                            self.trivially_false = true;
                            match declared {
                                Some((lo, hi)) => (
                                    Some(FznDomain::Float(lo.clone(), hi.clone())),
                                    Some((lo, hi)),
                                ),
                                None => (None, None),
                            }
                        }
                        (lo, hi) => {
                            if let Some(lo) = &lo {
                                self.emit_unary_float_bound(name, lo, true);
                            }
                            if let Some(hi) = &hi {
                                self.emit_unary_float_bound(name, hi, false);
                            }
                            (None, None)
                        }
                    };
                    self.float_iv.insert(name.clone(), iv);
                    self.vars.push(FznVarDecl {
                        name: name.clone(),
                        ty: FznVarType::Float,
                        domain,
                        annotations: vec![],
                        assigned: None,
                    });
                }
            }
        }

        for c in &kept {
            self.assert_root(c)?;
        }

        let mut solve_items = Vec::new();
        for item in &model.items {
            if let MznItem::Solve(s) = item {
                match s {
                    MznSolve::Satisfy => solve_items.push(FznSolveGoal {
                        kind: FznGoalKind::Satisfy,
                        objective: None,
                        annotations: vec![],
                    }),
                    MznSolve::Minimize(e) | MznSolve::Maximize(e) => {
                        let atom = self.materialize_numeric(e)?;
                        solve_items.push(FznSolveGoal {
                            kind: if matches!(s, MznSolve::Minimize(_)) {
                                FznGoalKind::Minimize
                            } else {
                                FznGoalKind::Maximize
                            },
                            objective: Some(atom),
                            annotations: vec![],
                        });
                    }
                    MznSolve::LexMinimize(es) => {
                        for e in es {
                            let atom = self.materialize_numeric(e)?;
                            solve_items.push(FznSolveGoal {
                                kind: FznGoalKind::Minimize,
                                objective: Some(atom),
                                annotations: vec![],
                            });
                        }
                    }
                }
            }
        }
        if solve_items.is_empty() {
            return Err(FlattenError::NoSolveItem);
        }

        if self.trivially_false {
            self.constraints.push(FznConstraint {
                name: "bool_clause".to_string(),
                args: vec![crate::fzn::FznArg::Array(vec![]), crate::fzn::FznArg::Array(vec![])],
                annotations: vec![],
            });
        }

        Ok(FznModel {
            params: vec![],
            arrays: vec![],
            vars: self.vars,
            constraints: self.constraints,
            solve_items,
        })
    }

    // ---- bound absorption --------------------------------------------

    /// Absorbs `x ⋈ c` / `c ⋈ x` into the variable's interval. Returns
    /// true when the conjunct was consumed.
    fn try_absorb(&mut self, e: &MznExpr) -> Result<bool, FlattenError> {
        let MznExpr::Bin(op, a, b) = e else {
            return Ok(false);
        };
        let (name, lit, flipped) = match (a.as_ref(), b.as_ref()) {
            (MznExpr::Ident(n), lit) if is_num_lit(lit) => (n, lit, false),
            (lit, MznExpr::Ident(n)) if is_num_lit(lit) => (n, lit, true),
            _ => return Ok(false),
        };
        // Orient as `x ⋈ c`.
        let op = if flipped { flip(*op) } else { *op };
        if self.int_iv.contains_key(name) {
            let c = match num_lit_int(lit) {
                Some(c) => c,
                None => return Ok(false),
            };
            let (lo, hi) = match op {
                BinOp::Le => (None, Some(c)),
                BinOp::Lt => (None, Some(c - 1)),
                BinOp::Ge => (Some(c), None),
                BinOp::Gt => (Some(c + 1), None),
                BinOp::Eq => (Some(c.clone()), Some(c)),
                _ => return Ok(false),
            };
            let entry = self.abs_int.entry(name.clone()).or_insert((None, None));
            entry.0 = merge_bound(entry.0.take(), lo, true);
            entry.1 = merge_bound(entry.1.take(), hi, false);
            return Ok(true);
        }
        if self.float_iv.contains_key(name) {
            let c = match num_lit_float(lit) {
                Some(c) => c,
                None => return Ok(false),
            };
            // Strict float bounds cannot be absorbed into a closed domain.
            let (lo, hi) = match op {
                BinOp::Le => (None, Some(c)),
                BinOp::Ge => (Some(c), None),
                BinOp::Eq => (Some(c.clone()), Some(c)),
                _ => return Ok(false),
            };
            let entry = self.abs_float.entry(name.clone()).or_insert((None, None));
            entry.0 = merge_fbound(entry.0.take(), lo, true);
            entry.1 = merge_fbound(entry.1.take(), hi, false);
            return Ok(true);
        }
        Ok(false)
    }

    /// Re-emits a one-sided absorbed bound as a unary linear constraint.
    fn emit_unary_int_bound(
        &mut self,
        name: &str,
        bound: &BigInt,
        is_lower: bool,
    ) -> Result<(), FlattenError> {
        let (coeff, rhs) = if is_lower {
            (-1i64, -bound.clone())
        } else {
            (1, bound.clone())
        };
        self.push(
            "int_lin_le",
            vec![
                crate::fzn::FznArg::Array(vec![FznAtom::int(coeff)]),
                crate::fzn::FznArg::Array(vec![FznAtom::Id(name.to_string())]),
                crate::fzn::FznArg::Atom(FznAtom::Lit(FznLit::Int(to_i64(&rhs)?))),
            ],
        );
        Ok(())
    }

    fn emit_unary_float_bound(&mut self, name: &str, bound: &Rat, is_lower: bool) {
        let (coeff, rhs) = if is_lower {
            (-Rat::one(), -bound.clone())
        } else {
            (Rat::one(), bound.clone())
        };
        self.push(
            "float_lin_le",
            vec![
                crate::fzn::FznArg::Array(vec![FznAtom::Lit(FznLit::Float(coeff))]),
                crate::fzn::FznArg::Array(vec![FznAtom::Id(name.to_string())]),
                crate::fzn::FznArg::Atom(FznAtom::Lit(FznLit::Float(rhs))),
            ],
        );
    }

    // ---- fresh variables ----------------------------------------------

    fn fresh_name(&mut self) -> String {
        let name = format!("X_INTRODUCED_{}_", self.counter);
        self.counter += 1;
        name
    }

    fn new_bool_var(&mut self) -> String {
        let name = self.fresh_name();
        self.bools.insert(name.clone(), ());
        self.vars.push(FznVarDecl {
            name: name.clone(),
            ty: FznVarType::Bool,
            domain: None,
            annotations: vec![],
            assigned: None,
        });
        name
    }

    fn new_int_var(&mut self, iv: IntIv) -> Result<String, FlattenError> {
        let name = self.fresh_name();
        let (domain, _) = int_domain(&iv, None)?;
        self.int_iv.insert(name.clone(), iv);
        self.vars.push(FznVarDecl {
            name: name.clone(),
            ty: FznVarType::Int,
            domain,
            annotations: vec![],
            assigned: None,
        });
        Ok(name)
    }

    fn new_float_var(&mut self, iv: FloatIv) -> Result<String, FlattenError> {
        let name = self.fresh_name();
        let (domain, _) = float_domain(&iv, None);
        self.float_iv.insert(name.clone(), iv);
        self.vars.push(FznVarDecl {
            name: name.clone(),
            ty: FznVarType::Float,
            domain,
            annotations: vec![],
            assigned: None,
        });
        Ok(name)
    }

    fn push(&mut self, name: &str, args: Vec<crate::fzn::FznArg>) {
        self.constraints.push(FznConstraint {
            name: name.to_string(),
            args,
            annotations: vec![],
        });
    }

    fn push_defining(&mut self, name: &str, args: Vec<crate::fzn::FznArg>, defined: &str) {
        self.constraints.push(FznConstraint {
            name: name.to_string(),
            args,
            annotations: vec![FznAnnotation {
                name: "defines_var".to_string(),
                args: vec![AnnArg::Atom(FznAtom::Id(defined.to_string()))],
            }],
        });
    }

    // ---- typing ---------------------------------------------------------

    fn ty_of(&self, e: &MznExpr) -> Result<ExprTy, FlattenError> {
        Ok(match e {
            MznExpr::BoolLit(_) => ExprTy::Bool,
            MznExpr::IntLit(_) => ExprTy::Int,
            MznExpr::FloatLit(_) => ExprTy::Float,
            MznExpr::Ident(n) => {
                if self.bools.contains_key(n) {
                    ExprTy::Bool
                } else if self.int_iv.contains_key(n) {
                    ExprTy::Int
                } else if self.float_iv.contains_key(n) {
                    ExprTy::Float
                } else {
                    return Err(FlattenError::UnknownIdent(n.clone()));
                }
            }
            MznExpr::Not(_) => ExprTy::Bool,
            MznExpr::Neg(a) => self.ty_of(a)?,
            MznExpr::Ite(_, t, e) => {
                let (tt, te) = (self.ty_of(t)?, self.ty_of(e)?);
                join(tt, te)
            }
            MznExpr::Bin(op, a, b) => match op {
                BinOp::Iff
                | BinOp::Imp
                | BinOp::Or
                | BinOp::Xor
                | BinOp::And
                | BinOp::Eq
                | BinOp::Ne
                | BinOp::Lt
                | BinOp::Le
                | BinOp::Gt
                | BinOp::Ge => ExprTy::Bool,
                BinOp::FDiv => ExprTy::Float,
                BinOp::IDiv | BinOp::Mod => ExprTy::Int,
                BinOp::Add | BinOp::Sub | BinOp::Mul => {
                    join(self.ty_of(a)?, self.ty_of(b)?)
                }
            },
            MznExpr::Call(name, _) => {
                return Err(FlattenError::Unsupported(format!("call to {name}")))
            }
            MznExpr::ArrayLit(_) => {
                return Err(FlattenError::Unsupported("array literal".to_string()))
            }
        })
    }

    // ---- root assertions ------------------------------------------------

    fn assert_root(&mut self, e: &MznExpr) -> Result<(), FlattenError> {
        match e {
            MznExpr::BoolLit(true) => Ok(()),
            MznExpr::BoolLit(false) => {
                self.trivially_false = true;
                Ok(())
            }
            MznExpr::Bin(BinOp::And, a, b) => {
                self.assert_root(a)?;
                self.assert_root(b)
            }
            MznExpr::Bin(BinOp::Imp, a, b) => {
                let ra = self.reify(a)?;
                let rb = self.reify(b)?;
                self.push(
                    "bool_clause",
                    vec![
                        crate::fzn::FznArg::Array(vec![rb]),
                        crate::fzn::FznArg::Array(vec![ra]),
                    ],
                );
                Ok(())
            }
            MznExpr::Bin(BinOp::Or, _, _) => {
                let mut pos = Vec::new();
                let mut neg = Vec::new();
                self.collect_clause(e, &mut pos, &mut neg)?;
                self.push(
                    "bool_clause",
                    vec![crate::fzn::FznArg::Array(pos), crate::fzn::FznArg::Array(neg)],
                );
                Ok(())
            }
            MznExpr::Bin(op, a, b)
                if matches!(
                    op,
                    BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge
                ) =>
            {
                let ta = self.ty_of(a)?;
                let tb = self.ty_of(b)?;
                if ta == ExprTy::Bool || tb == ExprTy::Bool {
                    let ra = self.reify(a)?;
                    let rb = self.reify(b)?;
                    match op {
                        BinOp::Eq | BinOp::Iff => self.push(
                            "bool_eq",
                            vec![crate::fzn::FznArg::Atom(ra), crate::fzn::FznArg::Atom(rb)],
                        ),
                        BinOp::Ne => self.push(
                            "bool_xor",
                            vec![crate::fzn::FznArg::Atom(ra), crate::fzn::FznArg::Atom(rb)],
                        ),
                        BinOp::Le => self.push(
                            "bool_le",
                            vec![crate::fzn::FznArg::Atom(ra), crate::fzn::FznArg::Atom(rb)],
                        ),
                        BinOp::Lt => self.push(
                            "bool_lt",
                            vec![crate::fzn::FznArg::Atom(ra), crate::fzn::FznArg::Atom(rb)],
                        ),
                        BinOp::Ge => self.push(
                            "bool_le",
                            vec![crate::fzn::FznArg::Atom(rb), crate::fzn::FznArg::Atom(ra)],
                        ),
                        BinOp::Gt => self.push(
                            "bool_lt",
                            vec![crate::fzn::FznArg::Atom(rb), crate::fzn::FznArg::Atom(ra)],
                        ),
                        _ => unreachable!(),
                    }
                    return Ok(());
                }
                self.emit_cmp(*op, a, b, None)
            }
            MznExpr::Bin(BinOp::Iff, a, b) => {
                let ra = self.reify(a)?;
                let rb = self.reify(b)?;
                self.push(
                    "bool_eq",
                    vec![crate::fzn::FznArg::Atom(ra), crate::fzn::FznArg::Atom(rb)],
                );
                Ok(())
            }
            MznExpr::Bin(BinOp::Xor, a, b) => {
                let ra = self.reify(a)?;
                let rb = self.reify(b)?;
                self.push(
                    "bool_xor",
                    vec![crate::fzn::FznArg::Atom(ra), crate::fzn::FznArg::Atom(rb)],
                );
                Ok(())
            }
            MznExpr::Not(inner) => match inner.as_ref() {
                MznExpr::Bin(op, a, b)
                    if matches!(
                        op,
                        BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge
                    ) && self.ty_of(a)? != ExprTy::Bool =>
                {
                    self.emit_cmp(negate_cmp(*op), a, b, None)
                }
                _ => {
                    let r = self.reify(inner)?;
                    self.push(
                        "bool_clause",
                        vec![
                            crate::fzn::FznArg::Array(vec![]),
                            crate::fzn::FznArg::Array(vec![r]),
                        ],
                    );
                    Ok(())
                }
            },
            MznExpr::Ident(_) | MznExpr::Ite(..) => {
                let r = self.reify(e)?;
                self.push(
                    "bool_clause",
                    vec![
                        crate::fzn::FznArg::Array(vec![r]),
                        crate::fzn::FznArg::Array(vec![]),
                    ],
                );
                Ok(())
            }
            other => Err(FlattenError::Type(format!(
                "expected a Boolean constraint, got {other:?}"
            ))),
        }
    }

    /// Collects the literals of a disjunction tree.
    fn collect_clause(
        &mut self,
        e: &MznExpr,
        pos: &mut Vec<FznAtom>,
        neg: &mut Vec<FznAtom>,
    ) -> Result<(), FlattenError> {
        match e {
            MznExpr::Bin(BinOp::Or, a, b) => {
                self.collect_clause(a, pos, neg)?;
                self.collect_clause(b, pos, neg)
            }
            MznExpr::Not(inner) if self.ty_of(inner)? == ExprTy::Bool => {
                neg.push(self.reify(inner)?);
                Ok(())
            }
            _ => {
                pos.push(self.reify(e)?);
                Ok(())
            }
        }
    }

    // ---- reification ------------------------------------------------------

    fn reify(&mut self, e: &MznExpr) -> Result<FznAtom, FlattenError> {
        match e {
            MznExpr::BoolLit(b) => Ok(FznAtom::boolean(*b)),
            MznExpr::Ident(n) if self.bools.contains_key(n) => Ok(FznAtom::Id(n.clone())),
            MznExpr::Ident(n) => Err(FlattenError::Type(format!(
                "`{n}` used as a Boolean"
            ))),
            MznExpr::Not(a) => {
                let ra = self.reify(a)?;
                let r = self.new_bool_var();
                self.push_defining(
                    "bool_not",
                    vec![
                        crate::fzn::FznArg::Atom(ra),
                        crate::fzn::FznArg::Atom(FznAtom::Id(r.clone())),
                    ],
                    &r,
                );
                Ok(FznAtom::Id(r))
            }
            MznExpr::Bin(op, a, b) => {
                match op {
                    BinOp::And | BinOp::Or | BinOp::Xor => {
                        let ra = self.reify(a)?;
                        let rb = self.reify(b)?;
                        let r = self.new_bool_var();
                        let name = match op {
                            BinOp::And => "bool_and",
                            BinOp::Or => "bool_or",
                            _ => "bool_xor",
                        };
                        self.push_defining(
                            name,
                            vec![
                                crate::fzn::FznArg::Atom(ra),
                                crate::fzn::FznArg::Atom(rb),
                                crate::fzn::FznArg::Atom(FznAtom::Id(r.clone())),
                            ],
                            &r,
                        );
                        Ok(FznAtom::Id(r))
                    }
                    BinOp::Imp => {
                        let ra = self.reify(a)?;
                        let rb = self.reify(b)?;
                        let r = self.new_bool_var();
                        self.push_defining(
                            "bool_le_reif",
                            vec![
                                crate::fzn::FznArg::Atom(ra),
                                crate::fzn::FznArg::Atom(rb),
                                crate::fzn::FznArg::Atom(FznAtom::Id(r.clone())),
                            ],
                            &r,
                        );
                        Ok(FznAtom::Id(r))
                    }
                    BinOp::Iff => {
                        let ra = self.reify(a)?;
                        let rb = self.reify(b)?;
                        let r = self.new_bool_var();
                        self.push_defining(
                            "bool_eq_reif",
                            vec![
                                crate::fzn::FznArg::Atom(ra),
                                crate::fzn::FznArg::Atom(rb),
                                crate::fzn::FznArg::Atom(FznAtom::Id(r.clone())),
                            ],
                            &r,
                        );
                        Ok(FznAtom::Id(r))
                    }
                    BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
                        let ta = self.ty_of(a)?;
                        if ta == ExprTy::Bool {
                            let ra = self.reify(a)?;
                            let rb = self.reify(b)?;
                            let r = self.new_bool_var();
                            let name = match op {
                                BinOp::Eq => "bool_eq_reif",
                                BinOp::Ne => "bool_xor",
                                BinOp::Le => "bool_le_reif",
                                BinOp::Lt => "bool_lt_reif",
                                BinOp::Ge => "bool_le_reif",
                                _ => "bool_lt_reif",
                            };
                            let (ra, rb) = if matches!(op, BinOp::Ge | BinOp::Gt) {
                                (rb, ra)
                            } else {
                                (ra, rb)
                            };
                            self.push_defining(
                                name,
                                vec![
                                    crate::fzn::FznArg::Atom(ra),
                                    crate::fzn::FznArg::Atom(rb),
                                    crate::fzn::FznArg::Atom(FznAtom::Id(r.clone())),
                                ],
                                &r,
                            );
                            return Ok(FznAtom::Id(r));
                        }
                        let r = self.new_bool_var();
                        self.emit_cmp(*op, a, b, Some(FznAtom::Id(r.clone())))?;
                        Ok(FznAtom::Id(r))
                    }
                    _ => Err(FlattenError::Type(format!(
                        "expected a Boolean expression, found {op:?}"
                    ))),
                }
            }
            MznExpr::Ite(c, t, f) => {
                let rc = self.reify(c)?;
                let rt = self.reify(t)?;
                let rf = self.reify(f)?;
                let r = self.new_bool_var();
                let bt = self.new_bool_var();
                self.push_defining(
                    "bool_eq_reif",
                    vec![
                        crate::fzn::FznArg::Atom(FznAtom::Id(r.clone())),
                        crate::fzn::FznArg::Atom(rt),
                        crate::fzn::FznArg::Atom(FznAtom::Id(bt.clone())),
                    ],
                    &bt,
                );
                self.push(
                    "bool_clause",
                    vec![
                        crate::fzn::FznArg::Array(vec![FznAtom::Id(bt)]),
                        crate::fzn::FznArg::Array(vec![rc.clone()]),
                    ],
                );
                let bf = self.new_bool_var();
                self.push_defining(
                    "bool_eq_reif",
                    vec![
                        crate::fzn::FznArg::Atom(FznAtom::Id(r.clone())),
                        crate::fzn::FznArg::Atom(rf),
                        crate::fzn::FznArg::Atom(FznAtom::Id(bf.clone())),
                    ],
                    &bf,
                );
                self.push(
                    "bool_clause",
                    vec![
                        crate::fzn::FznArg::Array(vec![FznAtom::Id(bf), rc]),
                        crate::fzn::FznArg::Array(vec![]),
                    ],
                );
                Ok(FznAtom::Id(r))
            }
            other => Err(FlattenError::Type(format!(
                "expected a Boolean expression, got {other:?}"
            ))),
        }
    }

    // ---- numeric comparisons -----------------------------------------------

    fn emit_cmp(
        &mut self,
        op: BinOp,
        a: &MznExpr,
        b: &MznExpr,
        reif: Option<FznAtom>,
    ) -> Result<(), FlattenError> {
        let ty = join(self.ty_of(a)?, self.ty_of(b)?);
        match ty {
            ExprTy::Int => {
                let (la, _) = self.flatten_int(a)?;
                let (lb, _) = self.flatten_int(b)?;
                let diff = la.sub(lb);
                self.emit_int_lin(op, diff, reif)
            }
            ExprTy::Float => {
                let (la, _) = self.flatten_float(a)?;
                let (lb, _) = self.flatten_float(b)?;
                let diff = la.sub(lb);
                self.emit_float_lin(op, diff, reif)
            }
            ExprTy::Bool => Err(FlattenError::Type("comparison of Booleans".to_string())),
        }
    }

    fn emit_const_bool(&mut self, value: bool, reif: Option<FznAtom>) {
        match reif {
            Some(r) => self.push(
                "bool_eq",
                vec![
                    crate::fzn::FznArg::Atom(r),
                    crate::fzn::FznArg::Atom(FznAtom::boolean(value)),
                ],
            ),
            None => {
                if !value {
                    self.trivially_false = true;
                }
            }
        }
    }

    /// Emits `diff ⋈ 0` as an `int_lin_*` constraint.
    fn emit_int_lin(
        &mut self,
        op: BinOp,
        diff: LinI,
        reif: Option<FznAtom>,
    ) -> Result<(), FlattenError> {
        if let Some(k) = diff.as_const() {
            let holds = match op {
                BinOp::Eq => k.is_zero(),
                BinOp::Ne => !k.is_zero(),
                BinOp::Lt => k.is_negative(),
                BinOp::Le => !k.is_positive(),
                BinOp::Gt => k.is_positive(),
                BinOp::Ge => !k.is_negative(),
                _ => unreachable!(),
            };
            self.emit_const_bool(holds, reif);
            return Ok(());
        }
        // Normalize to ≤ / = / ≠ with the bound on the right.
        let (op, diff) = match op {
            BinOp::Ge | BinOp::Gt => (flip(op), diff.scale(&BigInt::from(-1))),
            other => (other, diff),
        };
        let mut bound = -diff.k.clone();
        if op == BinOp::Lt {
            bound -= 1;
        }
        let (mut coeffs, mut vars) = (Vec::new(), Vec::new());
        for (name, c) in &diff.terms {
            coeffs.push(FznAtom::Lit(FznLit::Int(to_i64(c)?)));
            vars.push(FznAtom::Id(name.clone()));
        }
        let bound = FznAtom::Lit(FznLit::Int(to_i64(&bound)?));
        let base = match op {
            BinOp::Eq => "int_lin_eq",
            BinOp::Ne => "int_lin_ne",
            BinOp::Le | BinOp::Lt => "int_lin_le",
            _ => unreachable!(),
        };
        let mut args = vec![
            crate::fzn::FznArg::Array(coeffs),
            crate::fzn::FznArg::Array(vars),
            crate::fzn::FznArg::Atom(bound),
        ];
        match reif {
            None => self.push(base, args),
            Some(r) => {
                args.push(crate::fzn::FznArg::Atom(r));
                self.push(&format!("{base}_reif"), args);
            }
        }
        Ok(())
    }

    fn emit_float_lin(
        &mut self,
        op: BinOp,
        diff: LinF,
        reif: Option<FznAtom>,
    ) -> Result<(), FlattenError> {
        if let Some(k) = diff.as_const() {
            let holds = match op {
                BinOp::Eq => k.is_zero(),
                BinOp::Ne => !k.is_zero(),
                BinOp::Lt => k.is_negative(),
                BinOp::Le => k.is_negative() || k.is_zero(),
                BinOp::Gt => !k.is_negative() && !k.is_zero(),
                BinOp::Ge => !k.is_negative(),
                _ => unreachable!(),
            };
            self.emit_const_bool(holds, reif);
            return Ok(());
        }
        let (op, diff) = match op {
            BinOp::Ge | BinOp::Gt => {
                let flipped = flip(op);
                (flipped, diff.scale(&-Rat::one()))
            }
            other => (other, diff),
        };
        let bound = -diff.k.clone();
        let (mut coeffs, mut vars) = (Vec::new(), Vec::new());
        for (name, c) in &diff.terms {
            coeffs.push(FznAtom::Lit(FznLit::Float(c.clone())));
            vars.push(FznAtom::Id(name.clone()));
        }
        let bound = FznAtom::Lit(FznLit::Float(bound));
        let base = match op {
            BinOp::Eq => "float_lin_eq",
            BinOp::Ne => "float_lin_ne",
            BinOp::Le => "float_lin_le",
            BinOp::Lt => "float_lin_lt",
            _ => unreachable!(),
        };
        let mut args = vec![
            crate::fzn::FznArg::Array(coeffs),
            crate::fzn::FznArg::Array(vars),
            crate::fzn::FznArg::Atom(bound),
        ];
        match reif {
            None => self.push(base, args),
            Some(r) => {
                args.push(crate::fzn::FznArg::Atom(r));
                self.push(&format!("{base}_reif"), args);
            }
        }
        Ok(())
    }

    // ---- integer expressions ----------------------------------------------

    fn flatten_int(&mut self, e: &MznExpr) -> Result<(LinI, IntIv), FlattenError> {
        match e {
            MznExpr::IntLit(v) => Ok((
                LinI::constant(v.clone()),
                Some((v.clone(), v.clone())),
            )),
            MznExpr::Ident(n) => {
                let iv = self
                    .int_iv
                    .get(n)
                    .cloned()
                    .ok_or_else(|| FlattenError::Type(format!("`{n}` used as an integer")))?;
                Ok((LinI::var(n), iv))
            }
            MznExpr::Neg(a) => {
                let (l, iv) = self.flatten_int(a)?;
                Ok((l.scale(&BigInt::from(-1)), iv_scale(&iv, &BigInt::from(-1))))
            }
            MznExpr::Bin(BinOp::Add, a, b) => {
                let (la, iva) = self.flatten_int(a)?;
                let (lb, ivb) = self.flatten_int(b)?;
                Ok((la.add(lb), iv_add(&iva, &ivb)))
            }
            MznExpr::Bin(BinOp::Sub, a, b) => {
                let (la, iva) = self.flatten_int(a)?;
                let (lb, ivb) = self.flatten_int(b)?;
                Ok((
                    la.sub(lb),
                    iv_add(&iva, &iv_scale(&ivb, &BigInt::from(-1))),
                ))
            }
            MznExpr::Bin(BinOp::Mul, a, b) => {
                let (la, iva) = self.flatten_int(a)?;
                let (lb, ivb) = self.flatten_int(b)?;
                if let Some(c) = la.as_const() {
                    let c = c.clone();
                    return Ok((lb.scale(&c), iv_scale(&ivb, &c)));
                }
                if let Some(c) = lb.as_const() {
                    let c = c.clone();
                    return Ok((la.scale(&c), iv_scale(&iva, &c)));
                }
                // genuine product: introduce t = a*b
                let (aa, iva) = self.materialize_int(la, iva)?;
                let (ab, ivb) = self.materialize_int(lb, ivb)?;
                let iv = mul_iv(&iva, &ivb)
                    .ok_or_else(|| FlattenError::Unsupported("unbounded product".into()))?;
                let t = self.new_int_var(Some(iv.clone()))?;
                self.push_defining(
                    "int_times",
                    vec![
                        crate::fzn::FznArg::Atom(aa),
                        crate::fzn::FznArg::Atom(ab),
                        crate::fzn::FznArg::Atom(FznAtom::Id(t.clone())),
                    ],
                    &t,
                );
                Ok((LinI::var(&t), Some(iv)))
            }
            MznExpr::Bin(BinOp::IDiv, a, b) | MznExpr::Bin(BinOp::Mod, a, b) => {
                let is_div = matches!(e, MznExpr::Bin(BinOp::IDiv, ..));
                let (la, iva) = self.flatten_int(a)?;
                let (lb, _) = self.flatten_int(b)?;
                let Some(m) = lb.as_const().cloned() else {
                    return Err(FlattenError::Unsupported(
                        "division/modulo by a non-constant".to_string(),
                    ));
                };
                if m.is_zero() {
                    return Err(FlattenError::DivisionByZero);
                }
                let (aa, iva) = self.materialize_int(la, iva)?;
                let iv = if is_div {
                    div_iv(&iva, &m)
                } else {
                    mod_iv(&iva, &m)
                };
                let iv = iv.ok_or_else(|| {
                    FlattenError::Unsupported("unbounded division operand".into())
                })?;
                let t = self.new_int_var(Some(iv.clone()))?;
                self.push_defining(
                    if is_div { "int_div" } else { "int_mod" },
                    vec![
                        crate::fzn::FznArg::Atom(aa),
                        crate::fzn::FznArg::Atom(FznAtom::Lit(FznLit::Int(to_i64(&m)?))),
                        crate::fzn::FznArg::Atom(FznAtom::Id(t.clone())),
                    ],
                    &t,
                );
                Ok((LinI::var(&t), Some(iv)))
            }
            MznExpr::Ite(c, t, f) => {
                let rc = self.reify(c)?;
                let (lt, ivt) = self.flatten_int(t)?;
                let (lf, ivf) = self.flatten_int(f)?;
                let (ta, ivt) = self.materialize_int(lt, ivt)?;
                let (fa, ivf) = self.materialize_int(lf, ivf)?;
                let iv = hull_iv(&ivt, &ivf);
                let v = self.new_int_var(iv.clone())?;
                let bt = self.new_bool_var();
                self.push_defining(
                    "int_eq_reif",
                    vec![
                        crate::fzn::FznArg::Atom(FznAtom::Id(v.clone())),
                        crate::fzn::FznArg::Atom(ta),
                        crate::fzn::FznArg::Atom(FznAtom::Id(bt.clone())),
                    ],
                    &bt,
                );
                self.push(
                    "bool_clause",
                    vec![
                        crate::fzn::FznArg::Array(vec![FznAtom::Id(bt)]),
                        crate::fzn::FznArg::Array(vec![rc.clone()]),
                    ],
                );
                let bf = self.new_bool_var();
                self.push_defining(
                    "int_eq_reif",
                    vec![
                        crate::fzn::FznArg::Atom(FznAtom::Id(v.clone())),
                        crate::fzn::FznArg::Atom(fa),
                        crate::fzn::FznArg::Atom(FznAtom::Id(bf.clone())),
                    ],
                    &bf,
                );
                self.push(
                    "bool_clause",
                    vec![
                        crate::fzn::FznArg::Array(vec![FznAtom::Id(bf), rc]),
                        crate::fzn::FznArg::Array(vec![]),
                    ],
                );
                Ok((LinI::var(&v), iv))
            }
            other => Err(FlattenError::Type(format!(
                "expected an integer expression, got {other:?}"
            ))),
        }
    }

    fn materialize_int(
        &mut self,
        lin: LinI,
        iv: IntIv,
    ) -> Result<(FznAtom, IntIv), FlattenError> {
        if let Some(k) = lin.as_const() {
            let v = to_i64(k)?;
            return Ok((
                FznAtom::int(v),
                Some((k.clone(), k.clone())),
            ));
        }
        if let Some(name) = lin.as_unit_var() {
            let iv = self.int_iv[name].clone();
            return Ok((FznAtom::Id(name.to_string()), iv));
        }
        let v = self.new_int_var(iv.clone())?;
        // Σ c·x − v = −k
        let mut coeffs = Vec::new();
        let mut vars = Vec::new();
        for (name, c) in &lin.terms {
            coeffs.push(FznAtom::Lit(FznLit::Int(to_i64(c)?)));
            vars.push(FznAtom::Id(name.clone()));
        }
        coeffs.push(FznAtom::int(-1));
        vars.push(FznAtom::Id(v.clone()));
        let bound = -lin.k.clone();
        self.push_defining(
            "int_lin_eq",
            vec![
                crate::fzn::FznArg::Array(coeffs),
                crate::fzn::FznArg::Array(vars),
                crate::fzn::FznArg::Atom(FznAtom::Lit(FznLit::Int(to_i64(&bound)?))),
            ],
            &v,
        );
        Ok((FznAtom::Id(v), iv))
    }

    // ---- float expressions --------------------------------------------------

    fn coerce_int_var(&mut self, name: &str) -> Result<String, FlattenError> {
        if let Some(f) = self.int2float.get(name) {
            return Ok(f.clone());
        }
        let iv = self.int_iv[name]
            .as_ref()
            .map(|(lo, hi)| (Rat::from_bigint(lo.clone()), Rat::from_bigint(hi.clone())));
        let f = self.new_float_var(iv)?;
        self.push_defining(
            "int2float",
            vec![
                crate::fzn::FznArg::Atom(FznAtom::Id(name.to_string())),
                crate::fzn::FznArg::Atom(FznAtom::Id(f.clone())),
            ],
            &f,
        );
        self.int2float.insert(name.to_string(), f.clone());
        Ok(f)
    }

    fn flatten_float(&mut self, e: &MznExpr) -> Result<(LinF, FloatIv), FlattenError> {
        match e {
            MznExpr::FloatLit(r) => Ok((
                LinF::constant(r.clone()),
                Some((r.clone(), r.clone())),
            )),
            MznExpr::IntLit(v) => {
                let r = Rat::from_bigint(v.clone());
                Ok((LinF::constant(r.clone()), Some((r.clone(), r))))
            }
            MznExpr::Ident(n) if self.float_iv.contains_key(n) => {
                Ok((LinF::var(n), self.float_iv[n].clone()))
            }
            MznExpr::Ident(n) if self.int_iv.contains_key(n) => {
                let f = self.coerce_int_var(n)?;
                Ok((LinF::var(&f), self.float_iv[&f].clone()))
            }
            MznExpr::Ident(n) => Err(FlattenError::Type(format!("`{n}` used as a float"))),
            MznExpr::Neg(a) => {
                let (l, iv) = self.flatten_float(a)?;
                let minus_one = -Rat::one();
                Ok((l.scale(&minus_one), fiv_scale(&iv, &minus_one)))
            }
            MznExpr::Bin(BinOp::Add, a, b) => {
                let (la, iva) = self.flatten_float(a)?;
                let (lb, ivb) = self.flatten_float(b)?;
                Ok((la.add(lb), fiv_add(&iva, &ivb)))
            }
            MznExpr::Bin(BinOp::Sub, a, b) => {
                let (la, iva) = self.flatten_float(a)?;
                let (lb, ivb) = self.flatten_float(b)?;
                let minus_one = -Rat::one();
                Ok((la.sub(lb), fiv_add(&iva, &fiv_scale(&ivb, &minus_one))))
            }
            MznExpr::Bin(BinOp::Mul, a, b) => {
                let (la, iva) = self.flatten_float(a)?;
                let (lb, ivb) = self.flatten_float(b)?;
                if let Some(c) = la.as_const() {
                    let c = c.clone();
                    return Ok((lb.scale(&c), fiv_scale(&ivb, &c)));
                }
                if let Some(c) = lb.as_const() {
                    let c = c.clone();
                    return Ok((la.scale(&c), fiv_scale(&iva, &c)));
                }
                // var·var products are produced by no emission path
                let (aa, iva) = self.materialize_float(la, iva)?;
                let (ab, ivb) = self.materialize_float(lb, ivb)?;
                let iv = fmul_iv(&iva, &ivb).ok_or_else(|| {
                    FlattenError::Unsupported("unbounded float product".into())
                })?;
                let t = self.new_float_var(Some(iv.clone()))?;
                self.push_defining(
                    "float_times",
                    vec![
                        crate::fzn::FznArg::Atom(aa),
                        crate::fzn::FznArg::Atom(ab),
                        crate::fzn::FznArg::Atom(FznAtom::Id(t.clone())),
                    ],
                    &t,
                );
                Ok((LinF::var(&t), Some(iv)))
            }
            MznExpr::Bin(BinOp::FDiv, a, b) => {
                let (la, iva) = self.flatten_float(a)?;
                let (lb, _) = self.flatten_float(b)?;
                let Some(c) = lb.as_const().cloned() else {
                    return Err(FlattenError::Unsupported(
                        "float division by a non-constant".to_string(),
                    ));
                };
                if c.is_zero() {
                    return Err(FlattenError::DivisionByZero);
                }
                if let Some(num) = la.as_const().cloned() {
                    // The standard compiler folds constant float division
                    // with binary doubles and prints the rounded result.
                    let folded = double_fold_div(&num, &c)?;
                    return Ok((
                        LinF::constant(folded.clone()),
                        Some((folded.clone(), folded)),
                    ));
                }
                let (aa, iva) = self.materialize_float(la, iva)?;
                let iv = fiv_scale(&iva, &c.recip());
                let iv = match iv {
                    Some((lo, hi)) if lo <= hi => Some((lo, hi)),
                    Some((lo, hi)) => Some((hi, lo)),
                    None => None,
                };
                let t = self.new_float_var(iv.clone())?;
                self.push_defining(
                    "float_div",
                    vec![
                        crate::fzn::FznArg::Atom(aa),
                        crate::fzn::FznArg::Atom(FznAtom::Lit(FznLit::Float(c))),
                        crate::fzn::FznArg::Atom(FznAtom::Id(t.clone())),
                    ],
                    &t,
                );
                Ok((LinF::var(&t), iv))
            }
            MznExpr::Ite(c, t, f) => {
                let rc = self.reify(c)?;
                let (lt, ivt) = self.flatten_float(t)?;
                let (lf, ivf) = self.flatten_float(f)?;
                let (ta, ivt) = self.materialize_float(lt, ivt)?;
                let (fa, ivf) = self.materialize_float(lf, ivf)?;
                let iv = fhull_iv(&ivt, &ivf);
                let v = self.new_float_var(iv.clone())?;
                let bt = self.new_bool_var();
                self.push_defining(
                    "float_eq_reif",
                    vec![
                        crate::fzn::FznArg::Atom(FznAtom::Id(v.clone())),
                        crate::fzn::FznArg::Atom(ta),
                        crate::fzn::FznArg::Atom(FznAtom::Id(bt.clone())),
                    ],
                    &bt,
                );
                self.push(
                    "bool_clause",
                    vec![
                        crate::fzn::FznArg::Array(vec![FznAtom::Id(bt)]),
                        crate::fzn::FznArg::Array(vec![rc.clone()]),
                    ],
                );
                let bf = self.new_bool_var();
                self.push_defining(
                    "float_eq_reif",
                    vec![
                        crate::fzn::FznArg::Atom(FznAtom::Id(v.clone())),
                        crate::fzn::FznArg::Atom(fa),
                        crate::fzn::FznArg::Atom(FznAtom::Id(bf.clone())),
                    ],
                    &bf,
                );
                self.push(
                    "bool_clause",
                    vec![
                        crate::fzn::FznArg::Array(vec![FznAtom::Id(bf), rc]),
                        crate::fzn::FznArg::Array(vec![]),
                    ],
                );
                Ok((LinF::var(&v), iv))
            }
            MznExpr::Bin(BinOp::IDiv, ..) | MznExpr::Bin(BinOp::Mod, ..) => {
                let (lin, iv) = self.flatten_int(e)?;
                let (atom, _) = self.materialize_int(lin, iv)?;
                match atom {
                    FznAtom::Id(n) => {
                        let f = self.coerce_int_var(&n)?;
                        Ok((LinF::var(&f), self.float_iv[&f].clone()))
                    }
                    FznAtom::Lit(FznLit::Int(v)) => {
                        let r = Rat::from_int(v);
                        Ok((LinF::constant(r.clone()), Some((r.clone(), r))))
                    }
                    _ => unreachable!(),
                }
            }
            other => Err(FlattenError::Type(format!(
                "expected a float expression, got {other:?}"
            ))),
        }
    }

    fn materialize_float(
        &mut self,
        lin: LinF,
        iv: FloatIv,
    ) -> Result<(FznAtom, FloatIv), FlattenError> {
        if let Some(k) = lin.as_const() {
            return Ok((
                FznAtom::Lit(FznLit::Float(k.clone())),
                Some((k.clone(), k.clone())),
            ));
        }
        if let Some(name) = lin.as_unit_var() {
            let iv = self.float_iv[name].clone();
            return Ok((FznAtom::Id(name.to_string()), iv));
        }
        let v = self.new_float_var(iv.clone())?;
        let mut coeffs = Vec::new();
        let mut vars = Vec::new();
        for (name, c) in &lin.terms {
            coeffs.push(FznAtom::Lit(FznLit::Float(c.clone())));
            vars.push(FznAtom::Id(name.clone()));
        }
        coeffs.push(FznAtom::Lit(FznLit::Float(-Rat::one())));
        vars.push(FznAtom::Id(v.clone()));
        let bound = -lin.k.clone();
        self.push_defining(
            "float_lin_eq",
            vec![
                crate::fzn::FznArg::Array(coeffs),
                crate::fzn::FznArg::Array(vars),
                crate::fzn::FznArg::Atom(FznAtom::Lit(FznLit::Float(bound))),
            ],
            &v,
        );
        Ok((FznAtom::Id(v), iv))
    }

    fn materialize_numeric(&mut self, e: &MznExpr) -> Result<FznAtom, FlattenError> {
        match self.ty_of(e)? {
            ExprTy::Int => {
                let (lin, iv) = self.flatten_int(e)?;
                Ok(self.materialize_int(lin, iv)?.0)
            }
            ExprTy::Float => {
                let (lin, iv) = self.flatten_float(e)?;
                Ok(self.materialize_float(lin, iv)?.0)
            }
            ExprTy::Bool => Err(FlattenError::Type(
                "objective must be numeric".to_string(),
            )),
        }
    }
}

// ---- helpers -------------------------------------------------------------

fn split_conjuncts<'a>(e: &'a MznExpr, out: &mut Vec<&'a MznExpr>) {
    match e {
        MznExpr::Bin(BinOp::And, a, b) => {
            split_conjuncts(a, out);
            split_conjuncts(b, out);
        }
        other => out.push(other),
    }
}

fn is_num_lit(e: &MznExpr) -> bool {
    matches!(e, MznExpr::IntLit(_) | MznExpr::FloatLit(_))
        || matches!(e, MznExpr::Neg(inner) if is_num_lit(inner))
}

fn num_lit_int(e: &MznExpr) -> Option<BigInt> {
    match e {
        MznExpr::IntLit(v) => Some(v.clone()),
        MznExpr::Neg(inner) => num_lit_int(inner).map(|v| -v),
        _ => None,
    }
}

fn num_lit_float(e: &MznExpr) -> Option<Rat> {
    match e {
        MznExpr::FloatLit(r) => Some(r.clone()),
        MznExpr::IntLit(v) => Some(Rat::from_bigint(v.clone())),
        MznExpr::Neg(inner) => num_lit_float(inner).map(|v| -v),
        _ => None,
    }
}

fn flip(op: BinOp) -> BinOp {
    match op {
        BinOp::Le => BinOp::Ge,
        BinOp::Lt => BinOp::Gt,
        BinOp::Ge => BinOp::Le,
        BinOp::Gt => BinOp::Lt,
        other => other,
    }
}

fn negate_cmp(op: BinOp) -> BinOp {
    match op {
        BinOp::Eq => BinOp::Ne,
        BinOp::Ne => BinOp::Eq,
        BinOp::Lt => BinOp::Ge,
        BinOp::Le => BinOp::Gt,
        BinOp::Gt => BinOp::Le,
        BinOp::Ge => BinOp::Lt,
        other => other,
    }
}

fn join(a: ExprTy, b: ExprTy) -> ExprTy {
    match (a, b) {
        (ExprTy::Float, _) | (_, ExprTy::Float) => ExprTy::Float,
        (ExprTy::Int, _) | (_, ExprTy::Int) => ExprTy::Int,
        _ => ExprTy::Bool,
    }
}

/// Tightest bound: max of lower bounds, min of upper bounds.
fn merge_bound(a: Option<BigInt>, b: Option<BigInt>, is_lower: bool) -> Option<BigInt> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if is_lower { a.max(b) } else { a.min(b) }),
        (a, b) => a.or(b),
    }
}

fn merge_fbound(a: Option<Rat>, b: Option<Rat>, is_lower: bool) -> Option<Rat> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if is_lower { a.max(b) } else { a.min(b) }),
        (a, b) => a.or(b),
    }
}

/// FlatZinc domain for an auxiliary variable's interval.
fn int_domain(
    iv: &IntIv,
    _declared: Option<(BigInt, BigInt)>,
) -> Result<(Option<FznDomain>, bool), FlattenError> {
    match iv {
        None => Ok((None, false)),
        Some((lo, hi)) if lo <= hi => Ok((
            Some(FznDomain::Int(SetVal::Range(to_i64(lo)?, to_i64(hi)?))),
            false,
        )),
        Some(_) => Ok((None, true)),
    }
}

fn float_domain(iv: &FloatIv, _declared: Option<(Rat, Rat)>) -> (Option<FznDomain>, bool) {
    match iv {
        None => (None, false),
        Some((lo, hi)) if lo <= hi => (Some(FznDomain::Float(lo.clone(), hi.clone())), false),
        Some(_) => (None, true),
    }
}

fn to_i64(v: &BigInt) -> Result<i64, FlattenError> {
    v.to_i64()
        .ok_or_else(|| FlattenError::LiteralOverflow(v.to_string()))
}

fn mul_iv(a: &IntIv, b: &IntIv) -> Option<(BigInt, BigInt)> {
    let (al, ah) = a.as_ref()?;
    let (bl, bh) = b.as_ref()?;
    let candidates = [al * bl, al * bh, ah * bl, ah * bh];
    Some((
        candidates.iter().min().unwrap().clone(),
        candidates.iter().max().unwrap().clone(),
    ))
}

fn fmul_iv(a: &FloatIv, b: &FloatIv) -> Option<(Rat, Rat)> {
    let (al, ah) = a.as_ref()?;
    let (bl, bh) = b.as_ref()?;
    let candidates = [al * bl, al * bh, ah * bl, ah * bh];
    Some((
        candidates.iter().min().unwrap().clone(),
        candidates.iter().max().unwrap().clone(),
    ))
}

fn div_iv(a: &IntIv, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let (lo, hi) = a.as_ref()?;
    let candidates = [lo / m, hi / m];
    Some((
        candidates.iter().min().unwrap().clone(),
        candidates.iter().max().unwrap().clone(),
    ))
}

fn mod_iv(a: &IntIv, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let (lo, hi) = a.as_ref()?;
    let mag: BigInt = m.abs() - 1;
    let lo_bound = if lo.is_negative() {
        -mag.clone()
    } else {
        BigInt::zero()
    };
    let hi_bound = if hi.is_negative() { BigInt::zero() } else { mag };
    Some((lo_bound, hi_bound))
}

fn hull_iv(a: &IntIv, b: &IntIv) -> IntIv {
    match (a, b) {
        (Some((al, ah)), Some((bl, bh))) => {
            Some((al.min(bl).clone(), ah.max(bh).clone()))
        }
        _ => None,
    }
}

fn fhull_iv(a: &FloatIv, b: &FloatIv) -> FloatIv {
    match (a, b) {
        (Some((al, ah)), Some((bl, bh))) => Some((
            al.clone().min(bl.clone()),
            ah.clone().max(bh.clone()),
        )),
        _ => None,
    }
}

/// Folds `a / b` through the nearest binary doubles and re-reads the
/// quotient from its shortest round-trip decimal form.
fn double_fold_div(a: &Rat, b: &Rat) -> Result<Rat, FlattenError> {
    let fa = a.to_f64_lossy();
    let fb = b.to_f64_lossy();
    let q = fa / fb;
    if !q.is_finite() {
        return Err(FlattenError::DivisionByZero);
    }
    let printed = format!("{q}");
    let printed = if printed.contains('.') || printed.contains('e') {
        printed
    } else {
        format!("{printed}.0")
    };
    Rat::from_decimal_str(&printed)
        .map_err(|e| FlattenError::Unsupported(format!("unprintable double: {e}")))
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_mzn;
    use super::*;
    use crate::fzn::{parse_fzn, print_fzn};

    fn flatten_text(text: &str) -> FznModel {
        let model = parse_mzn(text).unwrap();
        let fzn = flatten_mzn(&model).unwrap();
        // the flattened model must be valid FlatZinc
        let printed = print_fzn(&fzn).unwrap();
        parse_fzn(&printed, true).unwrap()
    }

    #[test]
    fn bounds_are_absorbed_into_domains() {
        let m = flatten_text("var int: x; constraint x >= 0 /\\ x <= 9; solve minimize x;");
        let x = m.var("x").unwrap();
        assert_eq!(x.domain, Some(FznDomain::Int(SetVal::Range(0, 9))));
        assert!(m.constraints.is_empty());
    }

    #[test]
    fn nested_expressions_get_introduced_vars() {
        let m = flatten_text(
            "var 0..3: x; var 0..3: y; constraint ((x * y) + 1) <= 5; solve satisfy;",
        );
        assert!(m.vars.iter().any(|v| v.name.starts_with("X_INTRODUCED_")));
        assert!(m.constraints.iter().any(|c| c.name == "int_times"));
    }

    #[test]
    fn mod_and_ite() {
        let m = flatten_text(
            "var 0..7: x; constraint ((x mod 2) = 1) /\\ ((if x > 3 then 1 else 0 endif) = 1); \
             solve satisfy;",
        );
        assert!(m.constraints.iter().any(|c| c.name == "int_mod"));
        assert!(m.constraints.iter().any(|c| c.name == "int_eq_reif"));
    }

    #[test]
    fn constant_float_division_is_double_folded() {
        // 1799972218749879 / 2251799813685248 is exactly representable as
        // a double, but its shortest decimal form is not the exact value:
        // the fold loses the fraction, which is the defect the wrapper
        // exists to bypass.
        let exact = Rat::from_i64_fraction(1_799_972_218_749_879, 2_251_799_813_685_248);
        let m = flatten_text(
            "var float: w; constraint w = (1799972218749879.0 / 2251799813685248.0); \
             solve satisfy;",
        );
        let c = m
            .constraints
            .iter()
            .find(|c| c.name == "float_lin_eq")
            .expect("equality against a constant becomes float_lin_eq");
        let folded = c
            .args
            .iter()
            .filter_map(|arg| match arg {
                crate::fzn::FznArg::Atom(FznAtom::Lit(FznLit::Float(r))) => Some(r.abs()),
                _ => None,
            })
            .find(|r| *r != Rat::one())
            .expect("the folded quotient appears as the bound");
        assert_ne!(folded, exact, "the double fold must round");
        let delta = (folded - exact).abs();
        assert!(delta < Rat::from_i64_fraction(1, 1_000_000_000));
    }

    #[test]
    fn exact_decimal_constants_survive() {
        let m = flatten_text(
            "var 0.0..10.0: f; constraint (2.0 * f) >= 0.1; solve maximize f;",
        );
        let c = m
            .constraints
            .iter()
            .find(|c| c.name.starts_with("float_lin"))
            .unwrap();
        let has_tenth = c.args.iter().any(|arg| match arg {
            crate::fzn::FznArg::Atom(FznAtom::Lit(FznLit::Float(r))) => {
                *r == Rat::from_i64_fraction(1, 10) || *r == Rat::from_i64_fraction(-1, 10)
            }
            _ => false,
        });
        assert!(has_tenth, "0.1 must stay exactly 1/10: {c:?}");
    }

    #[test]
    fn lex_solve_becomes_multiple_goals() {
        let m = flatten_text(
            "var 0..3: x; var 0..3: y; constraint x + y >= 2; \
             solve search lex_minimize([x, y]);",
        );
        assert_eq!(m.solve_items.len(), 2);
        assert!(m
            .solve_items
            .iter()
            .all(|s| s.kind == FznGoalKind::Minimize));
    }

    #[test]
    fn contradictory_bounds_mark_unsat() {
        let m = flatten_text("var int: x; constraint x >= 3 /\\ x <= 1; solve satisfy;");
        assert!(m
            .constraints
            .iter()
            .any(|c| c.name == "bool_clause"
                && c.args.iter().all(|a| a.as_array() == Some(&[][..]))));
    }
}
