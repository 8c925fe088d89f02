//! FlatZinc to optimization-extended SMT-LIB encoding.
//!
//! Two integer representations are supported: `la` maps `int`/`float` to
//! the SMT Int/Real sorts, `bv` maps `int` to fixed-width two's-complement
//! bit-vectors (Boolean-and-integer models only). Intermediate linear
//! terms in `bv` mode are widened far enough that no overflow can occur,
//! so both encodings agree exactly on every model value.

mod pb;
mod propagate;

pub use pb::{detect_pb, PbMarker};
pub use propagate::{is_trivially_unsat, propagate_constants_and_aliases};

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cardnet::{
    self, ArithLink, CardnetError, Lit, PbRelation, Wire,
};
use crate::fzn::{
    FznAtom, FznConstraint, FznDomain, FznGoalKind, FznLit, FznModel, FznVarType, SetVal,
};
use crate::rational::Rat;
use crate::smt::{Dialect, ObjDirection, Op, SmtError, SmtScript, Sort, TermId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntMode {
    La,
    Bv,
}

/// Encoder configuration.
#[derive(Debug, Clone)]
pub struct EncodeConfig {
    pub int_mode: IntMode,
    /// Base bit-vector width; `None` selects the smallest width covering
    /// every declared domain plus a sign bit.
    pub bv_width: Option<u32>,
    /// Replace recognized pseudo-Boolean sums with cardinality networks.
    pub pb_rewrite: bool,
    pub dialect: Dialect,
}

impl Default for EncodeConfig {
    fn default() -> Self {
        EncodeConfig {
            int_mode: IntMode::La,
            bv_width: None,
            pb_rewrite: true,
            dialect: Dialect::Default,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EncodeError {
    #[error("unsupported builtin `{0}`")]
    UnsupportedBuiltin(String),
    #[error("bit-vector mode: domain of `{var}` does not fit in {width} bits")]
    BvDomainOverflow { var: String, width: u32 },
    #[error("bit-vector mode covers int/bool models only; `{0}` is a float")]
    FloatInBvMode(String),
    #[error("bit-vector mode requires a finite domain on `{0}`")]
    UnboundedIntInBvMode(String),
    #[error("bit-vector width {0} out of the supported range 2..=63")]
    BadWidth(u32),
    #[error("set variable `{0}` needs a finite universe")]
    UnboundedSet(String),
    #[error("internal term construction error: {0}")]
    Smt(#[from] SmtError),
    #[error("cardinality network error: {0}")]
    Cardnet(#[from] CardnetError),
}

/// Boolean-per-element encoding of one set variable.
#[derive(Debug, Clone)]
pub struct SetEncoding {
    pub elems: Vec<i64>,
    pub membership: Vec<TermId>,
}

/// Encodes a validated model into an SMT script. Constant/alias
/// propagation and pseudo-Boolean detection run first.
pub fn encode_model(model: &FznModel, cfg: &EncodeConfig) -> Result<SmtScript, EncodeError> {
    let model = propagate_constants_and_aliases(model);
    let markers = if cfg.pb_rewrite { detect_pb(&model) } else { Vec::new() };
    let mut enc = Encoder::new(&model, cfg, markers)?;
    enc.run()?;
    Ok(enc.script)
}

struct Encoder<'m> {
    model: &'m FznModel,
    cfg: &'m EncodeConfig,
    script: SmtScript,
    width: u32,
    sets: HashMap<String, SetEncoding>,
    markers: HashMap<usize, PbMarker>,
    fresh: u32,
}

impl<'m> Encoder<'m> {
    fn new(
        model: &'m FznModel,
        cfg: &'m EncodeConfig,
        markers: Vec<PbMarker>,
    ) -> Result<Self, EncodeError> {
        let width = match cfg.int_mode {
            IntMode::La => 0,
            IntMode::Bv => select_width(model, cfg)?,
        };
        let mut script = SmtScript::new();
        script.logic = Some(match cfg.int_mode {
            IntMode::La => "QF_LIRA".to_string(),
            IntMode::Bv => "QF_BV".to_string(),
        });
        Ok(Encoder {
            model,
            cfg,
            script,
            width,
            sets: HashMap::new(),
            markers: markers
                .into_iter()
                .map(|m| (m.constraint_index, m))
                .collect(),
            fresh: 0,
        })
    }

    fn run(&mut self) -> Result<(), EncodeError> {
        self.declare_vars()?;
        for (i, c) in self.model.constraints.iter().enumerate() {
            if self.cfg.pb_rewrite {
                if let Some(marker) = self.markers.get(&i).cloned() {
                    self.encode_pb_marker(&marker)?;
                    continue;
                }
            }
            self.encode_constraint(c)?;
        }
        for goal in &self.model.solve_items {
            let Some(obj) = &goal.objective else { continue };
            let term = self.numeric_atom(obj)?;
            let direction = match goal.kind {
                FznGoalKind::Minimize => ObjDirection::Minimize,
                FznGoalKind::Maximize => ObjDirection::Maximize,
                FznGoalKind::Satisfy => continue,
            };
            let signed = self.cfg.int_mode == IntMode::Bv
                && self.script.arena.sort(term).bv_width().is_some();
            let name = obj.as_id().map(|s| s.to_string());
            self.script.add_objective(direction, term, signed, name)?;
        }
        Ok(())
    }

    // ---- declarations ---------------------------------------------------

    fn declare_vars(&mut self) -> Result<(), EncodeError> {
        for v in &self.model.vars {
            match v.ty {
                FznVarType::Bool => {
                    self.script.declare(&v.name, Sort::Bool)?;
                }
                FznVarType::Int => match self.cfg.int_mode {
                    IntMode::La => {
                        let x = self.script.declare(&v.name, Sort::Int)?;
                        if let Some(FznDomain::Int(s)) = &v.domain {
                            let dom = self.int_domain_assertion_la(x, s)?;
                            self.script.assert(dom)?;
                        }
                    }
                    IntMode::Bv => {
                        let Some(FznDomain::Int(s)) = &v.domain else {
                            return Err(EncodeError::UnboundedIntInBvMode(v.name.clone()));
                        };
                        check_fits(&v.name, s, self.width)?;
                        let x = self.script.declare(&v.name, Sort::BitVec(self.width))?;
                        let dom = self.int_domain_assertion_bv(x, s)?;
                        self.script.assert(dom)?;
                    }
                },
                FznVarType::Float => {
                    if self.cfg.int_mode == IntMode::Bv {
                        return Err(EncodeError::FloatInBvMode(v.name.clone()));
                    }
                    let x = self.script.declare(&v.name, Sort::Real)?;
                    if let Some(FznDomain::Float(lo, hi)) = &v.domain {
                        let lo = self.script.arena.real_const(lo.clone());
                        let hi = self.script.arena.real_const(hi.clone());
                        let a = self.script.arena.le(lo, x)?;
                        let b = self.script.arena.le(x, hi)?;
                        let both = self.script.arena.and(vec![a, b])?;
                        self.script.assert(both)?;
                    }
                }
                FznVarType::SetOfInt => {
                    let Some(FznDomain::SetUniverse(universe)) = &v.domain else {
                        return Err(EncodeError::UnboundedSet(v.name.clone()));
                    };
                    let elems: Vec<i64> = universe.iter().collect();
                    let mut membership = Vec::with_capacity(elems.len());
                    for (idx, _) in elems.iter().enumerate() {
                        let name = format!("_memb_{}_{idx}", v.name);
                        membership.push(self.script.declare(&name, Sort::Bool)?);
                    }
                    self.sets
                        .insert(v.name.clone(), SetEncoding { elems, membership });
                }
            }
        }
        Ok(())
    }

    fn int_domain_assertion_la(&mut self, x: TermId, s: &SetVal) -> Result<TermId, EncodeError> {
        match s {
            SetVal::Range(lo, hi) => {
                let lo = self.script.arena.int_const_i64(*lo);
                let hi = self.script.arena.int_const_i64(*hi);
                let a = self.script.arena.le(lo, x)?;
                let b = self.script.arena.le(x, hi)?;
                Ok(self.script.arena.and(vec![a, b])?)
            }
            SetVal::Elems(es) => {
                let mut cases = Vec::new();
                for &e in es {
                    let c = self.script.arena.int_const_i64(e);
                    cases.push(self.script.arena.eq(vec![x, c])?);
                }
                Ok(self.script.arena.or(cases)?)
            }
        }
    }

    fn int_domain_assertion_bv(&mut self, x: TermId, s: &SetVal) -> Result<TermId, EncodeError> {
        let w = self.width;
        match s {
            SetVal::Range(lo, hi) => {
                let lo = self.bv_signed_const(BigInt::from(*lo), w);
                let hi = self.bv_signed_const(BigInt::from(*hi), w);
                let a = self.script.arena.bv_binary(Op::BvSle, lo, x)?;
                let b = self.script.arena.bv_binary(Op::BvSle, x, hi)?;
                Ok(self.script.arena.and(vec![a, b])?)
            }
            SetVal::Elems(es) => {
                let mut cases = Vec::new();
                for &e in es {
                    let c = self.bv_signed_const(BigInt::from(e), w);
                    cases.push(self.script.arena.eq(vec![x, c])?);
                }
                Ok(self.script.arena.or(cases)?)
            }
        }
    }

    // ---- atoms ------------------------------------------------------------

    fn fresh_name(&mut self, prefix: &str) -> String {
        let n = self.fresh;
        self.fresh += 1;
        format!("_{prefix}{n}")
    }

    fn bv_signed_const(&mut self, v: BigInt, w: u32) -> TermId {
        let modulus = BigInt::from(1) << w;
        let mut v = v % &modulus;
        if v.is_negative() {
            v += &modulus;
        }
        self.script
            .arena
            .bv_const(v.to_biguint().unwrap_or_else(BigUint::zero), w)
    }

    fn bool_atom(&mut self, atom: &FznAtom) -> Result<TermId, EncodeError> {
        Ok(match atom {
            FznAtom::Lit(FznLit::Bool(b)) => self.script.arena.bool_const(*b),
            FznAtom::Id(name) => {
                let sort = self.script.sort_of(name).unwrap_or(Sort::Bool);
                self.script.arena.var(name, sort)
            }
            other => panic!("validation let a non-bool atom through: {other:?}"),
        })
    }

    fn int_atom(&mut self, atom: &FznAtom) -> Result<TermId, EncodeError> {
        Ok(match atom {
            FznAtom::Lit(FznLit::Int(v)) => match self.cfg.int_mode {
                IntMode::La => self.script.arena.int_const_i64(*v),
                IntMode::Bv => self.bv_signed_const(BigInt::from(*v), self.width),
            },
            FznAtom::Id(name) => {
                let sort = self
                    .script
                    .sort_of(name)
                    .expect("declared before constraints");
                self.script.arena.var(name, sort)
            }
            other => panic!("validation let a non-int atom through: {other:?}"),
        })
    }

    fn float_atom(&mut self, atom: &FznAtom) -> Result<TermId, EncodeError> {
        Ok(match atom {
            FznAtom::Lit(FznLit::Float(r)) => self.script.arena.real_const(r.clone()),
            FznAtom::Id(name) => {
                let sort = self
                    .script
                    .sort_of(name)
                    .expect("declared before constraints");
                self.script.arena.var(name, sort)
            }
            other => panic!("validation let a non-float atom through: {other:?}"),
        })
    }

    fn numeric_atom(&mut self, atom: &FznAtom) -> Result<TermId, EncodeError> {
        match atom {
            FznAtom::Lit(FznLit::Float(_)) => self.float_atom(atom),
            FznAtom::Lit(FznLit::Int(_)) => self.int_atom(atom),
            FznAtom::Id(name) => {
                let sort = self
                    .script
                    .sort_of(name)
                    .expect("declared before constraints");
                Ok(self.script.arena.var(name, sort))
            }
            other => panic!("non-numeric objective atom: {other:?}"),
        }
    }

    // ---- linear machinery ---------------------------------------------------

    /// `Σ coeffs·atoms ⋈ bound` over integers, in either mode.
    fn int_lin(
        &mut self,
        coeffs: &[i64],
        atoms: &[&FznAtom],
        bound: i64,
        rel: PbRelation,
        strict: bool,
    ) -> Result<TermId, EncodeError> {
        match self.cfg.int_mode {
            IntMode::La => {
                let mut parts = Vec::new();
                for (&c, atom) in coeffs.iter().zip(atoms) {
                    let x = self.int_atom(atom)?;
                    if c == 1 {
                        parts.push(x);
                    } else {
                        let cc = self.script.arena.int_const_i64(c);
                        parts.push(self.script.arena.mul(vec![cc, x])?);
                    }
                }
                let sum = if parts.is_empty() {
                    self.script.arena.int_const_i64(0)
                } else {
                    self.script.arena.add(parts)?
                };
                let b = self.script.arena.int_const_i64(bound);
                Ok(match (rel, strict) {
                    (PbRelation::Eq, _) => self.script.arena.eq(vec![sum, b])?,
                    (PbRelation::Le, false) => self.script.arena.le(sum, b)?,
                    (PbRelation::Le, true) => self.script.arena.lt(sum, b)?,
                    (PbRelation::Ge, false) => self.script.arena.ge(sum, b)?,
                    (PbRelation::Ge, true) => self.script.arena.gt(sum, b)?,
                })
            }
            IntMode::Bv => {
                // Widen enough that the worst-case sum cannot wrap.
                let mag: BigInt = coeffs
                    .iter()
                    .map(|c| BigInt::from(c.unsigned_abs()) << (self.width - 1))
                    .sum::<BigInt>()
                    + BigInt::from(bound.unsigned_abs());
                let wide = (mag.bits() as u32 + 2).max(self.width);
                let mut parts: Vec<TermId> = Vec::new();
                for (&c, atom) in coeffs.iter().zip(atoms) {
                    let x = self.int_atom(atom)?;
                    let x = self.widen(x, wide)?;
                    let cc = self.bv_signed_const(BigInt::from(c), wide);
                    parts.push(self.script.arena.bv_binary(Op::BvMul, cc, x)?);
                }
                let sum = match parts.len() {
                    0 => self.bv_signed_const(BigInt::zero(), wide),
                    _ => {
                        let mut acc = parts[0];
                        for &p in &parts[1..] {
                            acc = self.script.arena.bv_binary(Op::BvAdd, acc, p)?;
                        }
                        acc
                    }
                };
                let b = self.bv_signed_const(BigInt::from(bound), wide);
                Ok(match (rel, strict) {
                    (PbRelation::Eq, _) => self.script.arena.eq(vec![sum, b])?,
                    (PbRelation::Le, false) => {
                        self.script.arena.bv_binary(Op::BvSle, sum, b)?
                    }
                    (PbRelation::Le, true) => self.script.arena.bv_binary(Op::BvSlt, sum, b)?,
                    (PbRelation::Ge, false) => {
                        self.script.arena.bv_binary(Op::BvSge, sum, b)?
                    }
                    (PbRelation::Ge, true) => self.script.arena.bv_binary(Op::BvSgt, sum, b)?,
                })
            }
        }
    }

    fn widen(&mut self, t: TermId, to: u32) -> Result<TermId, EncodeError> {
        let Sort::BitVec(w) = self.script.arena.sort(t) else {
            return Ok(t);
        };
        if w >= to {
            return Ok(t);
        }
        Ok(self.script.arena.bv_extend(true, to - w, t)?)
    }

    /// Two-atom comparison `a ⋈ b` over integers.
    fn int_cmp(
        &mut self,
        a: &FznAtom,
        b: &FznAtom,
        rel: PbRelation,
        strict: bool,
    ) -> Result<TermId, EncodeError> {
        match self.cfg.int_mode {
            IntMode::La => {
                let ta = self.int_atom(a)?;
                let tb = self.int_atom(b)?;
                Ok(match (rel, strict) {
                    (PbRelation::Eq, _) => self.script.arena.eq(vec![ta, tb])?,
                    (PbRelation::Le, false) => self.script.arena.le(ta, tb)?,
                    (PbRelation::Le, true) => self.script.arena.lt(ta, tb)?,
                    (PbRelation::Ge, false) => self.script.arena.ge(ta, tb)?,
                    (PbRelation::Ge, true) => self.script.arena.gt(ta, tb)?,
                })
            }
            IntMode::Bv => {
                let ta = self.int_atom(a)?;
                let tb = self.int_atom(b)?;
                Ok(match (rel, strict) {
                    (PbRelation::Eq, _) => self.script.arena.eq(vec![ta, tb])?,
                    (PbRelation::Le, false) => self.script.arena.bv_binary(Op::BvSle, ta, tb)?,
                    (PbRelation::Le, true) => self.script.arena.bv_binary(Op::BvSlt, ta, tb)?,
                    (PbRelation::Ge, false) => self.script.arena.bv_binary(Op::BvSge, ta, tb)?,
                    (PbRelation::Ge, true) => self.script.arena.bv_binary(Op::BvSgt, ta, tb)?,
                })
            }
        }
    }

    fn float_lin(
        &mut self,
        coeffs: &[Rat],
        atoms: &[&FznAtom],
        bound: Rat,
        rel: PbRelation,
        strict: bool,
    ) -> Result<TermId, EncodeError> {
        let mut parts = Vec::new();
        for (c, atom) in coeffs.iter().zip(atoms) {
            let x = self.float_atom(atom)?;
            let cc = self.script.arena.real_const(c.clone());
            parts.push(self.script.arena.mul(vec![cc, x])?);
        }
        let sum = if parts.is_empty() {
            self.script.arena.real_const(Rat::zero())
        } else {
            self.script.arena.add(parts)?
        };
        let b = self.script.arena.real_const(bound);
        Ok(match (rel, strict) {
            (PbRelation::Eq, _) => self.script.arena.eq(vec![sum, b])?,
            (PbRelation::Le, false) => self.script.arena.le(sum, b)?,
            (PbRelation::Le, true) => self.script.arena.lt(sum, b)?,
            (PbRelation::Ge, false) => self.script.arena.ge(sum, b)?,
            (PbRelation::Ge, true) => self.script.arena.gt(sum, b)?,
        })
    }

    // ---- constraint dispatch -------------------------------------------------

    fn assert(&mut self, t: TermId) -> Result<(), EncodeError> {
        self.script.assert(t)?;
        Ok(())
    }

    fn encode_constraint(&mut self, c: &FznConstraint) -> Result<(), EncodeError> {
        let atom = |i: usize| -> &FznAtom { c.args[i].as_atom().expect("validated arity") };
        let array = |i: usize| -> &[FznAtom] { c.args[i].as_array().expect("validated arity") };
        let int_coeffs = |i: usize| -> Vec<i64> {
            array(i)
                .iter()
                .map(|a| match a {
                    FznAtom::Lit(FznLit::Int(v)) => *v,
                    other => panic!("validated par int array: {other:?}"),
                })
                .collect()
        };
        let float_coeffs = |i: usize| -> Vec<Rat> {
            array(i)
                .iter()
                .map(|a| match a {
                    FznAtom::Lit(FznLit::Float(r)) => r.clone(),
                    other => panic!("validated par float array: {other:?}"),
                })
                .collect()
        };
        let par_int = |a: &FznAtom| -> i64 {
            match a {
                FznAtom::Lit(FznLit::Int(v)) => *v,
                other => panic!("validated par int: {other:?}"),
            }
        };
        let par_float = |a: &FznAtom| -> Rat {
            match a {
                FznAtom::Lit(FznLit::Float(r)) => r.clone(),
                other => panic!("validated par float: {other:?}"),
            }
        };

        if self.cfg.int_mode == IntMode::Bv
            && (c.name.starts_with("float") || c.name.contains("float"))
        {
            return Err(EncodeError::FloatInBvMode(c.name.clone()));
        }

        match c.name.as_str() {
            // ---- bool ----
            "bool2int" => {
                let b = self.bool_atom(atom(0))?;
                let x = self.int_atom(atom(1))?;
                let one = self.int_one();
                let zero = self.int_zero();
                let ite = self.script.arena.ite(b, one, zero)?;
                let eq = self.script.arena.eq(vec![x, ite])?;
                self.assert(eq)
            }
            "bool_not" => {
                let a = self.bool_atom(atom(0))?;
                let b = self.bool_atom(atom(1))?;
                let na = self.script.arena.not(a)?;
                let eq = self.script.arena.eq(vec![b, na])?;
                self.assert(eq)
            }
            "bool_and" | "bool_or" => {
                let a = self.bool_atom(atom(0))?;
                let b = self.bool_atom(atom(1))?;
                let r = self.bool_atom(atom(2))?;
                let op = if c.name == "bool_and" {
                    self.script.arena.and(vec![a, b])?
                } else {
                    self.script.arena.or(vec![a, b])?
                };
                let eq = self.script.arena.eq(vec![r, op])?;
                self.assert(eq)
            }
            "bool_xor" => {
                let a = self.bool_atom(atom(0))?;
                let b = self.bool_atom(atom(1))?;
                let x = self.script.arena.xor(a, b)?;
                if c.args.len() == 3 {
                    let r = self.bool_atom(atom(2))?;
                    let eq = self.script.arena.eq(vec![r, x])?;
                    self.assert(eq)
                } else {
                    self.assert(x)
                }
            }
            "bool_eq" | "bool_eq_reif" | "bool_le" | "bool_le_reif" | "bool_lt"
            | "bool_lt_reif" => {
                let a = self.bool_atom(atom(0))?;
                let b = self.bool_atom(atom(1))?;
                let base = match &c.name[5..7] {
                    "eq" => self.script.arena.eq(vec![a, b])?,
                    "le" => self.script.arena.implies(a, b)?,
                    _ => {
                        let na = self.script.arena.not(a)?;
                        self.script.arena.and(vec![na, b])?
                    }
                };
                if c.name.ends_with("_reif") {
                    let r = self.bool_atom(atom(2))?;
                    let eq = self.script.arena.eq(vec![r, base])?;
                    self.assert(eq)
                } else {
                    self.assert(base)
                }
            }
            "bool_clause" => {
                let mut lits = Vec::new();
                for a in array(0) {
                    lits.push(self.bool_atom(a)?);
                }
                for a in array(1) {
                    let t = self.bool_atom(a)?;
                    lits.push(self.script.arena.not(t)?);
                }
                let clause = self.script.arena.or(lits)?;
                self.assert(clause)
            }
            "array_bool_and" | "array_bool_or" => {
                let mut lits = Vec::new();
                for a in array(0) {
                    lits.push(self.bool_atom(a)?);
                }
                let r = self.bool_atom(atom(1))?;
                let folded = if c.name == "array_bool_and" {
                    self.script.arena.and(lits)?
                } else {
                    self.script.arena.or(lits)?
                };
                let eq = self.script.arena.eq(vec![r, folded])?;
                self.assert(eq)
            }
            "array_bool_xor" => {
                let mut acc = self.script.arena.false_();
                for a in array(0) {
                    let t = self.bool_atom(a)?;
                    acc = self.script.arena.xor(acc, t)?;
                }
                self.assert(acc)
            }
            "array_bool_element" | "array_var_bool_element" => {
                let idx = atom(0).clone();
                let elems: Vec<FznAtom> = array(1).to_vec();
                let v = self.bool_atom(atom(2))?;
                let mut cases = Vec::new();
                for (j, e) in elems.iter().enumerate() {
                    let pos = FznAtom::int(j as i64 + 1);
                    let at = self.int_cmp(&idx, &pos, PbRelation::Eq, false)?;
                    let ej = self.bool_atom(e)?;
                    let veq = self.script.arena.eq(vec![v, ej])?;
                    cases.push(self.script.arena.and(vec![at, veq])?);
                }
                let any = self.script.arena.or(cases)?;
                self.assert(any)
            }
            "bool_lin_eq" | "bool_lin_le" => {
                let coeffs = int_coeffs(0);
                let bools = array(1).to_vec();
                let mut parts = Vec::new();
                for (cc, b) in coeffs.iter().zip(&bools) {
                    let bt = self.bool_atom(b)?;
                    let w = self.int_const_mode(*cc);
                    let z = self.int_zero();
                    parts.push(self.script.arena.ite(bt, w, z)?);
                }
                let sum = self.sum_mode(parts)?;
                if c.name == "bool_lin_eq" {
                    let rhs = self.int_atom(atom(2))?;
                    let rhs = self.match_widths(sum, rhs)?;
                    let sum = self.match_widths(rhs.1, sum)?.0;
                    let eq = self.script.arena.eq(vec![sum, rhs.0])?;
                    self.assert(eq)
                } else {
                    let bound = par_int(atom(2));
                    let b = self.int_const_wide(bound, sum)?;
                    let le = self.cmp_mode(sum, b, PbRelation::Le, false)?;
                    self.assert(le)
                }
            }
            // ---- int ----
            "int_abs" => {
                let (a, r) = (atom(0).clone(), atom(1).clone());
                match self.cfg.int_mode {
                    IntMode::La => {
                        let ta = self.int_atom(&a)?;
                        let tr = self.int_atom(&r)?;
                        let zero = self.int_zero();
                        let ge = self.script.arena.ge(ta, zero)?;
                        let neg = self.script.arena.neg(ta)?;
                        let ite = self.script.arena.ite(ge, ta, neg)?;
                        let eq = self.script.arena.eq(vec![tr, ite])?;
                        self.assert(eq)
                    }
                    IntMode::Bv => {
                        // widen so |min| is representable
                        let wide = self.width + 1;
                        let ta = self.int_atom(&a)?;
                        let tr = self.int_atom(&r)?;
                        let ta = self.widen(ta, wide)?;
                        let tr = self.widen(tr, wide)?;
                        let zero = self.bv_signed_const(BigInt::zero(), wide);
                        let ge = self.script.arena.bv_binary(Op::BvSge, ta, zero)?;
                        let neg = self.script.arena.bv_unary(Op::BvNeg, ta)?;
                        let ite = self.script.arena.ite(ge, ta, neg)?;
                        let eq = self.script.arena.eq(vec![tr, ite])?;
                        self.assert(eq)
                    }
                }
            }
            "int_plus" => {
                let lin = self.int_lin(
                    &[1, 1, -1],
                    &[atom(0), atom(1), atom(2)],
                    0,
                    PbRelation::Eq,
                    false,
                )?;
                self.assert(lin)
            }
            "int_times" => {
                let (a, b, r) = (atom(0), atom(1), atom(2));
                match (a, b) {
                    (FznAtom::Lit(FznLit::Int(k)), other)
                    | (other, FznAtom::Lit(FznLit::Int(k))) => {
                        let lin = self.int_lin(
                            &[*k, -1],
                            &[other, r],
                            0,
                            PbRelation::Eq,
                            false,
                        )?;
                        self.assert(lin)
                    }
                    _ => Err(EncodeError::UnsupportedBuiltin(
                        "int_times between two variables (non-linear)".to_string(),
                    )),
                }
            }
            "int_div" | "int_mod" => self.encode_div_mod(c, atom(0), atom(1), atom(2)),
            "int_max" | "int_min" => {
                let a = atom(0).clone();
                let b = atom(1).clone();
                let r = self.int_atom(atom(2))?;
                let ta = self.int_atom(&a)?;
                let tb = self.int_atom(&b)?;
                let cond = self.int_cmp(&a, &b, PbRelation::Ge, false)?;
                let ite = if c.name == "int_max" {
                    self.script.arena.ite(cond, ta, tb)?
                } else {
                    self.script.arena.ite(cond, tb, ta)?
                };
                let eq = self.script.arena.eq(vec![r, ite])?;
                self.assert(eq)
            }
            "int_eq" | "int_ne" | "int_le" | "int_lt" | "int_eq_reif" | "int_ne_reif"
            | "int_le_reif" | "int_lt_reif" => {
                let a = atom(0).clone();
                let b = atom(1).clone();
                let base = match &c.name[4..6] {
                    "eq" => self.int_cmp(&a, &b, PbRelation::Eq, false)?,
                    "ne" => {
                        let eq = self.int_cmp(&a, &b, PbRelation::Eq, false)?;
                        self.script.arena.not(eq)?
                    }
                    "le" => self.int_cmp(&a, &b, PbRelation::Le, false)?,
                    _ => self.int_cmp(&a, &b, PbRelation::Le, true)?,
                };
                if c.name.ends_with("_reif") {
                    let r = self.bool_atom(atom(2))?;
                    let eq = self.script.arena.eq(vec![r, base])?;
                    self.assert(eq)
                } else {
                    self.assert(base)
                }
            }
            "int_lin_eq" | "int_lin_ne" | "int_lin_le" | "int_lin_eq_reif"
            | "int_lin_ne_reif" | "int_lin_le_reif" => {
                let coeffs = int_coeffs(0);
                let vars: Vec<&FznAtom> = array(1).iter().collect();
                let bound = par_int(atom(2));
                let base = match &c.name[8..10] {
                    "eq" => self.int_lin(&coeffs, &vars, bound, PbRelation::Eq, false)?,
                    "ne" => {
                        let eq = self.int_lin(&coeffs, &vars, bound, PbRelation::Eq, false)?;
                        self.script.arena.not(eq)?
                    }
                    _ => self.int_lin(&coeffs, &vars, bound, PbRelation::Le, false)?,
                };
                if c.name.ends_with("_reif") {
                    let r = self.bool_atom(atom(3))?;
                    let eq = self.script.arena.eq(vec![r, base])?;
                    self.assert(eq)
                } else {
                    self.assert(base)
                }
            }
            "array_int_element" | "array_var_int_element" => {
                let idx = atom(0).clone();
                let elems: Vec<FznAtom> = array(1).to_vec();
                let v = atom(2).clone();
                self.encode_element_int(&idx, &elems, &v)
            }
            "array_int_maximum" | "array_int_minimum" => {
                let m = atom(0).clone();
                let xs: Vec<FznAtom> = array(1).to_vec();
                let is_max = c.name.ends_with("maximum");
                let mut bounds = Vec::new();
                let mut attained = Vec::new();
                for x in &xs {
                    let cmp = if is_max {
                        self.int_cmp(&m, x, PbRelation::Ge, false)?
                    } else {
                        self.int_cmp(&m, x, PbRelation::Le, false)?
                    };
                    bounds.push(cmp);
                    attained.push(self.int_cmp(&m, x, PbRelation::Eq, false)?);
                }
                let all = self.script.arena.and(bounds)?;
                let any = self.script.arena.or(attained)?;
                let both = self.script.arena.and(vec![all, any])?;
                self.assert(both)
            }
            // ---- float (la only; the bv guard ran above) ----
            "int2float" => {
                let x = self.int_atom(atom(0))?;
                let f = self.float_atom(atom(1))?;
                let xr = self.script.arena.to_real(x)?;
                let eq = self.script.arena.eq(vec![f, xr])?;
                self.assert(eq)
            }
            "float_abs" => {
                let a = self.float_atom(atom(0))?;
                let r = self.float_atom(atom(1))?;
                let zero = self.script.arena.real_const(Rat::zero());
                let ge = self.script.arena.ge(a, zero)?;
                let neg = self.script.arena.neg(a)?;
                let ite = self.script.arena.ite(ge, a, neg)?;
                let eq = self.script.arena.eq(vec![r, ite])?;
                self.assert(eq)
            }
            "float_plus" => {
                let lin = self.float_lin(
                    &[Rat::one(), Rat::one(), -Rat::one()],
                    &[atom(0), atom(1), atom(2)],
                    Rat::zero(),
                    PbRelation::Eq,
                    false,
                )?;
                self.assert(lin)
            }
            "float_times" => {
                let (a, b, r) = (atom(0), atom(1), atom(2));
                match (a, b) {
                    (FznAtom::Lit(FznLit::Float(k)), other)
                    | (other, FznAtom::Lit(FznLit::Float(k))) => {
                        let lin = self.float_lin(
                            &[k.clone(), -Rat::one()],
                            &[other, r],
                            Rat::zero(),
                            PbRelation::Eq,
                            false,
                        )?;
                        self.assert(lin)
                    }
                    _ => Err(EncodeError::UnsupportedBuiltin(
                        "float_times between two variables (non-linear)".to_string(),
                    )),
                }
            }
            "float_div" => {
                let (a, b, r) = (atom(0), atom(1), atom(2));
                let FznAtom::Lit(FznLit::Float(den)) = b else {
                    return Err(EncodeError::UnsupportedBuiltin(
                        "float_div by a variable (non-linear)".to_string(),
                    ));
                };
                if den.is_zero() {
                    let f = self.script.arena.false_();
                    return self.assert(f);
                }
                let ta = self.float_atom(a)?;
                let tb = self.script.arena.real_const(den.clone());
                let q = self.script.arena.div(ta, tb)?;
                let tr = self.float_atom(r)?;
                let eq = self.script.arena.eq(vec![tr, q])?;
                self.assert(eq)
            }
            "float_max" | "float_min" => {
                let a = self.float_atom(atom(0))?;
                let b = self.float_atom(atom(1))?;
                let r = self.float_atom(atom(2))?;
                let cond = self.script.arena.ge(a, b)?;
                let ite = if c.name == "float_max" {
                    self.script.arena.ite(cond, a, b)?
                } else {
                    self.script.arena.ite(cond, b, a)?
                };
                let eq = self.script.arena.eq(vec![r, ite])?;
                self.assert(eq)
            }
            "float_eq" | "float_ne" | "float_le" | "float_lt" | "float_eq_reif"
            | "float_ne_reif" | "float_le_reif" | "float_lt_reif" => {
                let a = self.float_atom(atom(0))?;
                let b = self.float_atom(atom(1))?;
                let base = match &c.name[6..8] {
                    "eq" => self.script.arena.eq(vec![a, b])?,
                    "ne" => {
                        let eq = self.script.arena.eq(vec![a, b])?;
                        self.script.arena.not(eq)?
                    }
                    "le" => self.script.arena.le(a, b)?,
                    _ => self.script.arena.lt(a, b)?,
                };
                if c.name.ends_with("_reif") {
                    let r = self.bool_atom(atom(2))?;
                    let eq = self.script.arena.eq(vec![r, base])?;
                    self.assert(eq)
                } else {
                    self.assert(base)
                }
            }
            "float_lin_eq" | "float_lin_ne" | "float_lin_le" | "float_lin_lt"
            | "float_lin_eq_reif" | "float_lin_le_reif" | "float_lin_ne_reif"
            | "float_lin_lt_reif" => {
                let coeffs = float_coeffs(0);
                let vars: Vec<&FznAtom> = array(1).iter().collect();
                let bound = par_float(atom(2));
                let base = match &c.name[10..12] {
                    "eq" => self.float_lin(&coeffs, &vars, bound, PbRelation::Eq, false)?,
                    "ne" => {
                        let eq =
                            self.float_lin(&coeffs, &vars, bound, PbRelation::Eq, false)?;
                        self.script.arena.not(eq)?
                    }
                    "le" => self.float_lin(&coeffs, &vars, bound, PbRelation::Le, false)?,
                    _ => self.float_lin(&coeffs, &vars, bound, PbRelation::Le, true)?,
                };
                if c.name.ends_with("_reif") {
                    let r = self.bool_atom(atom(3))?;
                    let eq = self.script.arena.eq(vec![r, base])?;
                    self.assert(eq)
                } else {
                    self.assert(base)
                }
            }
            "array_float_element" | "array_var_float_element" => {
                let idx = atom(0).clone();
                let elems: Vec<FznAtom> = array(1).to_vec();
                let v = self.float_atom(atom(2))?;
                let mut cases = Vec::new();
                for (j, e) in elems.iter().enumerate() {
                    let pos = FznAtom::int(j as i64 + 1);
                    let at = self.int_cmp(&idx, &pos, PbRelation::Eq, false)?;
                    let ej = self.float_atom(e)?;
                    let veq = self.script.arena.eq(vec![v, ej])?;
                    cases.push(self.script.arena.and(vec![at, veq])?);
                }
                let any = self.script.arena.or(cases)?;
                self.assert(any)
            }
            "array_float_maximum" | "array_float_minimum" => {
                let m = self.float_atom(atom(0))?;
                let is_max = c.name.ends_with("maximum");
                let mut bounds = Vec::new();
                let mut attained = Vec::new();
                for x in array(1).to_vec() {
                    let xt = self.float_atom(&x)?;
                    let cmp = if is_max {
                        self.script.arena.ge(m, xt)?
                    } else {
                        self.script.arena.le(m, xt)?
                    };
                    bounds.push(cmp);
                    attained.push(self.script.arena.eq(vec![m, xt])?);
                }
                let all = self.script.arena.and(bounds)?;
                let any = self.script.arena.or(attained)?;
                let both = self.script.arena.and(vec![all, any])?;
                self.assert(both)
            }
            // ---- sets ----
            "set_in" | "set_in_reif" => {
                let x = atom(0).clone();
                let (elems, membs) = self.set_arg(atom(1))?;
                let mut cases = Vec::new();
                for (e, memb) in elems.iter().zip(&membs) {
                    let at = self.int_cmp(&x, &FznAtom::int(*e), PbRelation::Eq, false)?;
                    cases.push(self.script.arena.and(vec![at, *memb])?);
                }
                let any = self.script.arena.or(cases)?;
                if c.name.ends_with("_reif") {
                    let r = self.bool_atom(atom(2))?;
                    let eq = self.script.arena.eq(vec![r, any])?;
                    self.assert(eq)
                } else {
                    self.assert(any)
                }
            }
            "set_eq" | "set_ne" | "set_subset" => {
                let (ae, am) = self.set_arg(atom(0))?;
                let (be, bm) = self.set_arg(atom(1))?;
                let universe = merged_universe(&ae, &be);
                let mut parts = Vec::new();
                for e in universe {
                    let ma = self.membership_of(&ae, &am, e);
                    let mb = self.membership_of(&be, &bm, e);
                    let part = match c.name.as_str() {
                        "set_subset" => self.script.arena.implies(ma, mb)?,
                        _ => self.script.arena.eq(vec![ma, mb])?,
                    };
                    parts.push(part);
                }
                let all = self.script.arena.and(parts)?;
                let term = if c.name == "set_ne" {
                    self.script.arena.not(all)?
                } else {
                    all
                };
                self.assert(term)
            }
            "set_union" | "set_intersect" | "set_diff" => {
                let (ae, am) = self.set_arg(atom(0))?;
                let (be, bm) = self.set_arg(atom(1))?;
                let (re, rm) = self.set_arg(atom(2))?;
                let mut universe = merged_universe(&ae, &be);
                universe = merged_universe(&universe, &re);
                let mut parts = Vec::new();
                for e in universe {
                    let ma = self.membership_of(&ae, &am, e);
                    let mb = self.membership_of(&be, &bm, e);
                    let mr = self.membership_of(&re, &rm, e);
                    let combined = match c.name.as_str() {
                        "set_union" => self.script.arena.or(vec![ma, mb])?,
                        "set_intersect" => self.script.arena.and(vec![ma, mb])?,
                        _ => {
                            let nb = self.script.arena.not(mb)?;
                            self.script.arena.and(vec![ma, nb])?
                        }
                    };
                    parts.push(self.script.arena.eq(vec![mr, combined])?);
                }
                let all = self.script.arena.and(parts)?;
                self.assert(all)
            }
            "set_card" => self.encode_set_card(atom(0), atom(1)),
            // ---- globals ----
            "all_different_int" => {
                let xs: Vec<FznAtom> = array(0).to_vec();
                let mut pairs = Vec::new();
                for i in 0..xs.len() {
                    for j in i + 1..xs.len() {
                        let eq = self.int_cmp(&xs[i], &xs[j], PbRelation::Eq, false)?;
                        pairs.push(self.script.arena.not(eq)?);
                    }
                }
                let all = self.script.arena.and(pairs)?;
                self.assert(all)
            }
            "count_eq" => {
                let xs: Vec<FznAtom> = array(0).to_vec();
                let y = atom(1).clone();
                let cnt = atom(2).clone();
                let mut parts = Vec::new();
                for x in &xs {
                    let hit = self.int_cmp(x, &y, PbRelation::Eq, false)?;
                    let one = self.int_one();
                    let zero = self.int_zero();
                    parts.push(self.script.arena.ite(hit, one, zero)?);
                }
                let sum = self.sum_mode(parts)?;
                let ct = self.int_atom(&cnt)?;
                let (sum, ct) = self.match_widths(sum, ct)?;
                let eq = self.script.arena.eq(vec![sum, ct])?;
                self.assert(eq)
            }
            "table_int" => {
                let xs: Vec<FznAtom> = array(0).to_vec();
                let flat = int_coeffs(1);
                let n = xs.len();
                if n == 0 || flat.len() % n != 0 {
                    return Err(EncodeError::UnsupportedBuiltin(
                        "table_int with a ragged table".to_string(),
                    ));
                }
                if n > 8 || flat.len() / n > 256 {
                    return Err(EncodeError::UnsupportedBuiltin(
                        "table_int beyond the supported (small) arity".to_string(),
                    ));
                }
                let mut rows = Vec::new();
                for row in flat.chunks(n) {
                    let mut cells = Vec::new();
                    for (x, v) in xs.iter().zip(row) {
                        cells.push(self.int_cmp(x, &FznAtom::int(*v), PbRelation::Eq, false)?);
                    }
                    rows.push(self.script.arena.and(cells)?);
                }
                let any = self.script.arena.or(rows)?;
                self.assert(any)
            }
            other => Err(EncodeError::UnsupportedBuiltin(other.to_string())),
        }
    }

    // ---- helpers shared by int builtins ------------------------------------

    fn int_zero(&mut self) -> TermId {
        match self.cfg.int_mode {
            IntMode::La => self.script.arena.int_const_i64(0),
            IntMode::Bv => self.bv_signed_const(BigInt::zero(), self.width),
        }
    }

    fn int_one(&mut self) -> TermId {
        self.int_const_mode(1)
    }

    fn int_const_mode(&mut self, v: i64) -> TermId {
        match self.cfg.int_mode {
            IntMode::La => self.script.arena.int_const_i64(v),
            IntMode::Bv => self.bv_signed_const(BigInt::from(v), self.width),
        }
    }

    /// Constant matching the width of `like` (or a plain Int in la mode).
    fn int_const_wide(&mut self, v: i64, like: TermId) -> Result<TermId, EncodeError> {
        match self.script.arena.sort(like) {
            Sort::BitVec(w) => Ok(self.bv_signed_const(BigInt::from(v), w)),
            _ => Ok(self.script.arena.int_const_i64(v)),
        }
    }

    /// Sums a list of same-mode numeric terms, widening in bv mode so the
    /// sum cannot wrap.
    fn sum_mode(&mut self, parts: Vec<TermId>) -> Result<TermId, EncodeError> {
        if parts.is_empty() {
            return Ok(self.int_zero());
        }
        match self.cfg.int_mode {
            IntMode::La => Ok(self.script.arena.add(parts)?),
            IntMode::Bv => {
                let max_w = parts
                    .iter()
                    .map(|&p| self.script.arena.sort(p).bv_width().unwrap_or(self.width))
                    .max()
                    .unwrap();
                let extra = (parts.len() as f64).log2().ceil() as u32 + 1;
                let wide = max_w + extra;
                let mut acc = self.widen(parts[0], wide)?;
                for &p in &parts[1..] {
                    let p = self.widen(p, wide)?;
                    acc = self.script.arena.bv_binary(Op::BvAdd, acc, p)?;
                }
                Ok(acc)
            }
        }
    }

    /// Widens the narrower of two terms so they can be compared.
    fn match_widths(&mut self, a: TermId, b: TermId) -> Result<(TermId, TermId), EncodeError> {
        match (self.script.arena.sort(a), self.script.arena.sort(b)) {
            (Sort::BitVec(wa), Sort::BitVec(wb)) => {
                let w = wa.max(wb);
                Ok((self.widen(a, w)?, self.widen(b, w)?))
            }
            _ => Ok((a, b)),
        }
    }

    fn cmp_mode(
        &mut self,
        a: TermId,
        b: TermId,
        rel: PbRelation,
        strict: bool,
    ) -> Result<TermId, EncodeError> {
        let (a, b) = self.match_widths(a, b)?;
        let is_bv = self.script.arena.sort(a).bv_width().is_some();
        Ok(match (rel, strict, is_bv) {
            (PbRelation::Eq, _, _) => self.script.arena.eq(vec![a, b])?,
            (PbRelation::Le, false, false) => self.script.arena.le(a, b)?,
            (PbRelation::Le, true, false) => self.script.arena.lt(a, b)?,
            (PbRelation::Ge, false, false) => self.script.arena.ge(a, b)?,
            (PbRelation::Ge, true, false) => self.script.arena.gt(a, b)?,
            (PbRelation::Le, false, true) => self.script.arena.bv_binary(Op::BvSle, a, b)?,
            (PbRelation::Le, true, true) => self.script.arena.bv_binary(Op::BvSlt, a, b)?,
            (PbRelation::Ge, false, true) => self.script.arena.bv_binary(Op::BvSge, a, b)?,
            (PbRelation::Ge, true, true) => self.script.arena.bv_binary(Op::BvSgt, a, b)?,
        })
    }

    /// Truncating division and dividend-signed modulo, FlatZinc style:
    /// `a = b·q + r`, `|r| < |b|`, `sign(r) = sign(a)` (or zero).
    fn encode_div_mod(
        &mut self,
        c: &FznConstraint,
        a: &FznAtom,
        b: &FznAtom,
        out: &FznAtom,
    ) -> Result<(), EncodeError> {
        let FznAtom::Lit(FznLit::Int(bval)) = b else {
            return Err(EncodeError::UnsupportedBuiltin(format!(
                "{} by a variable (non-linear)",
                c.name
            )));
        };
        if *bval == 0 {
            let f = self.script.arena.false_();
            return self.assert(f);
        }
        let babs = bval.unsigned_abs() as i64;
        let is_div = c.name == "int_div";
        // Fresh q and r; one of them is the output.
        let (q_atom, r_atom);
        if is_div {
            q_atom = out.clone();
            let r_name = self.fresh_name("rem");
            self.declare_int_aux(&r_name, -(babs - 1), babs - 1)?;
            r_atom = FznAtom::Id(r_name);
        } else {
            r_atom = out.clone();
            let q_name = self.fresh_name("quot");
            let (qlo, qhi) = self.quotient_bounds(a, *bval);
            self.declare_int_aux(&q_name, qlo, qhi)?;
            q_atom = FznAtom::Id(q_name);
        }
        // a - b*q - r = 0
        let lin = self.int_lin(
            &[1, -bval, -1],
            &[a, &q_atom, &r_atom],
            0,
            PbRelation::Eq,
            false,
        )?;
        self.assert(lin)?;
        // sign conditions on r
        let zero = FznAtom::int(0);
        let a_nonneg = self.int_cmp(a, &zero, PbRelation::Ge, false)?;
        let r_lo0 = self.int_cmp(&r_atom, &zero, PbRelation::Ge, false)?;
        let r_hi = self.int_cmp(&r_atom, &FznAtom::int(babs - 1), PbRelation::Le, false)?;
        let pos_case = self.script.arena.and(vec![r_lo0, r_hi])?;
        let pos = self.script.arena.implies(a_nonneg, pos_case)?;
        self.assert(pos)?;
        let a_nonpos = self.int_cmp(a, &zero, PbRelation::Le, false)?;
        let r_hi0 = self.int_cmp(&r_atom, &zero, PbRelation::Le, false)?;
        let r_lo = self.int_cmp(&r_atom, &FznAtom::int(-(babs - 1)), PbRelation::Ge, false)?;
        let neg_case = self.script.arena.and(vec![r_lo, r_hi0])?;
        let neg = self.script.arena.implies(a_nonpos, neg_case)?;
        self.assert(neg)
    }

    fn quotient_bounds(&self, a: &FznAtom, b: i64) -> (i64, i64) {
        let (lo, hi) = match a {
            FznAtom::Lit(FznLit::Int(v)) => (*v, *v),
            FznAtom::Id(name) => match self.model.var(name).and_then(|v| v.domain.as_ref()) {
                Some(FznDomain::Int(s)) => match (s.lo(), s.hi()) {
                    (Some(lo), Some(hi)) => (lo, hi),
                    _ => (i64::MIN / 2, i64::MAX / 2),
                },
                _ => (i64::MIN / 2, i64::MAX / 2),
            },
            _ => (i64::MIN / 2, i64::MAX / 2),
        };
        let candidates = [lo / b, hi / b];
        (
            *candidates.iter().min().unwrap(),
            *candidates.iter().max().unwrap(),
        )
    }

    fn declare_int_aux(&mut self, name: &str, lo: i64, hi: i64) -> Result<(), EncodeError> {
        match self.cfg.int_mode {
            IntMode::La => {
                let x = self.script.declare(name, Sort::Int)?;
                let dom = self.int_domain_assertion_la(x, &SetVal::Range(lo, hi))?;
                self.assert(dom)
            }
            IntMode::Bv => {
                // A wider carrier for carriers the base width cannot hold.
                let need = bits_for(lo).max(bits_for(hi)).max(self.width);
                let x = self.script.declare(name, Sort::BitVec(need))?;
                let lo = self.bv_signed_const(BigInt::from(lo), need);
                let hi = self.bv_signed_const(BigInt::from(hi), need);
                let a = self.script.arena.bv_binary(Op::BvSle, lo, x)?;
                let b = self.script.arena.bv_binary(Op::BvSle, x, hi)?;
                let both = self.script.arena.and(vec![a, b])?;
                self.assert(both)
            }
        }
    }

    fn encode_element_int(
        &mut self,
        idx: &FznAtom,
        elems: &[FznAtom],
        v: &FznAtom,
    ) -> Result<(), EncodeError> {
        let mut cases = Vec::new();
        for (j, e) in elems.iter().enumerate() {
            let pos = FznAtom::int(j as i64 + 1);
            let at = self.int_cmp(idx, &pos, PbRelation::Eq, false)?;
            let veq = self.int_cmp(v, e, PbRelation::Eq, false)?;
            cases.push(self.script.arena.and(vec![at, veq])?);
        }
        let any = self.script.arena.or(cases)?;
        self.assert(any)
    }

    // ---- sets -----------------------------------------------------------------

    /// Elements and membership terms of a set argument (variable or literal).
    fn set_arg(&mut self, atom: &FznAtom) -> Result<(Vec<i64>, Vec<TermId>), EncodeError> {
        match atom {
            FznAtom::Id(name) => {
                let enc = self
                    .sets
                    .get(name)
                    .unwrap_or_else(|| panic!("set `{name}` not declared"))
                    .clone();
                Ok((enc.elems, enc.membership))
            }
            FznAtom::Lit(FznLit::Set(s)) => {
                let elems: Vec<i64> = s.iter().collect();
                let membs = elems
                    .iter()
                    .map(|_| self.script.arena.true_())
                    .collect();
                Ok((elems, membs))
            }
            other => panic!("validation let a non-set atom through: {other:?}"),
        }
    }

    fn membership_of(&mut self, elems: &[i64], membs: &[TermId], e: i64) -> TermId {
        match elems.iter().position(|&x| x == e) {
            Some(i) => membs[i],
            None => self.script.arena.false_(),
        }
    }

    /// Links a set's cardinality variable to sorting-network outputs:
    /// output j holds iff the cardinality is at least j.
    fn encode_set_card(&mut self, s: &FznAtom, card: &FznAtom) -> Result<(), EncodeError> {
        if let FznAtom::Lit(FznLit::Set(sv)) = s {
            let n = sv.len() as i64;
            let eq = self.int_cmp(card, &FznAtom::int(n), PbRelation::Eq, false)?;
            return self.assert(eq);
        }
        let (elems, membs) = self.set_arg(s)?;
        let n = elems.len();
        // Zero-size sets pin the cardinality directly.
        if n == 0 {
            let eq = self.int_cmp(card, &FznAtom::int(0), PbRelation::Eq, false)?;
            return self.assert(eq);
        }
        let inputs: Vec<Lit> = (0..n as u32).map(Lit::pos).collect();
        let net = cardnet::build_cardinality_network(&inputs, n, n as u32)?;
        // Map network variable ids to Bool terms: inputs are the
        // membership variables, auxiliaries get fresh names.
        let mut terms: HashMap<u32, TermId> = HashMap::new();
        for (i, &m) in membs.iter().enumerate() {
            terms.insert(i as u32, m);
        }
        for aux in n as u32..net.next_free_var {
            let name = self.fresh_name("card");
            let t = self.script.declare(&name, Sort::Bool)?;
            terms.insert(aux, t);
        }
        for clause in &net.clauses {
            let mut lits = Vec::new();
            for l in clause {
                let t = terms[&l.var];
                lits.push(if l.neg { self.script.arena.not(t)? } else { t });
            }
            let or = self.script.arena.or(lits)?;
            self.assert(or)?;
        }
        // bounds: 0 ≤ card ≤ n
        let lo = self.int_cmp(card, &FznAtom::int(0), PbRelation::Ge, false)?;
        let hi = self.int_cmp(card, &FznAtom::int(n as i64), PbRelation::Le, false)?;
        self.assert(lo)?;
        self.assert(hi)?;
        for (j, out) in net.outputs.iter().enumerate() {
            let o = match out {
                Wire::Const(b) => self.script.arena.bool_const(*b),
                Wire::Lit(l) => {
                    let t = terms[&l.var];
                    if l.neg {
                        self.script.arena.not(t)?
                    } else {
                        t
                    }
                }
            };
            let ge = self.int_cmp(card, &FznAtom::int(j as i64 + 1), PbRelation::Ge, false)?;
            let link = self.script.arena.eq(vec![o, ge])?;
            self.assert(link)?;
        }
        Ok(())
    }

    // ---- pseudo-Boolean rewrite --------------------------------------------------

    fn encode_pb_marker(&mut self, marker: &PbMarker) -> Result<(), EncodeError> {
        let terms: Vec<(Lit, i64)> = marker
            .terms
            .iter()
            .enumerate()
            .map(|(i, (_, w))| (Lit::pos(i as u32), *w))
            .collect();
        let n = terms.len() as u32;
        let pb = cardnet::encode_pb_sum(&terms, marker.relation, marker.bound, n)?;
        let mut term_map: HashMap<u32, TermId> = HashMap::new();
        for (i, (name, _)) in marker.terms.iter().enumerate() {
            let t = self.script.arena.var(name, Sort::Bool);
            term_map.insert(i as u32, t);
        }
        for aux in n..pb.next_free_var {
            let name = self.fresh_name("pb");
            let t = self.script.declare(&name, Sort::Bool)?;
            term_map.insert(aux, t);
        }
        for clause in &pb.clauses {
            let mut lits = Vec::new();
            for l in clause {
                let t = term_map[&l.var];
                lits.push(if l.neg { self.script.arena.not(t)? } else { t });
            }
            let or = self.script.arena.or(lits)?;
            self.assert(or)?;
        }
        if let Some(link) = &pb.link {
            let t = self.encode_arith_link(link, &term_map)?;
            self.assert(t)?;
        }
        Ok(())
    }

    /// `Σ_g w_g · (true outputs in group g) ⋈ bound` over network outputs.
    fn encode_arith_link(
        &mut self,
        link: &ArithLink,
        term_map: &HashMap<u32, TermId>,
    ) -> Result<TermId, EncodeError> {
        let mut parts = Vec::new();
        for (w, outs) in &link.groups {
            for out in outs {
                let o = match out {
                    Wire::Const(b) => self.script.arena.bool_const(*b),
                    Wire::Lit(l) => {
                        let t = term_map[&l.var];
                        if l.neg {
                            self.script.arena.not(t)?
                        } else {
                            t
                        }
                    }
                };
                let wc = self.int_const_mode(*w);
                let z = self.int_zero();
                parts.push(self.script.arena.ite(o, wc, z)?);
            }
        }
        let sum = self.sum_mode(parts)?;
        let bound = i64::try_from(link.bound).expect("normalized bound fits i64");
        let b = self.int_const_wide(bound, sum)?;
        self.cmp_mode(sum, b, link.relation, false)
    }
}

fn merged_universe(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut u: Vec<i64> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

fn bits_for(v: i64) -> u32 {
    // width of the smallest signed carrier
    let mag = if v < 0 {
        BigInt::from(v).magnitude().bits()
    } else {
        BigInt::from(v).bits() + 1
    };
    (mag as u32).max(2)
}

fn check_fits(var: &str, s: &SetVal, width: u32) -> Result<(), EncodeError> {
    let (Some(lo), Some(hi)) = (s.lo(), s.hi()) else {
        return Err(EncodeError::UnboundedIntInBvMode(var.to_string()));
    };
    let min = -(BigInt::from(1) << (width - 1));
    let max = (BigInt::from(1) << (width - 1)) - 1;
    if BigInt::from(lo) < min || BigInt::from(hi) > max {
        return Err(EncodeError::BvDomainOverflow {
            var: var.to_string(),
            width,
        });
    }
    Ok(())
}

/// Smallest width covering every declared int domain and set universe,
/// plus a sign bit; clamped to at least 2.
fn select_width(model: &FznModel, cfg: &EncodeConfig) -> Result<u32, EncodeError> {
    if let Some(w) = cfg.bv_width {
        if !(2..=63).contains(&w) {
            return Err(EncodeError::BadWidth(w));
        }
        for v in &model.vars {
            if v.ty == FznVarType::Int {
                if let Some(FznDomain::Int(s)) = &v.domain {
                    check_fits(&v.name, s, w)?;
                }
            }
        }
        return Ok(w);
    }
    let mut need = 2u32;
    for v in &model.vars {
        let s = match (&v.ty, &v.domain) {
            (FznVarType::Int, Some(FznDomain::Int(s))) => s,
            (FznVarType::SetOfInt, Some(FznDomain::SetUniverse(s))) => s,
            (FznVarType::Int, None) => {
                return Err(EncodeError::UnboundedIntInBvMode(v.name.clone()))
            }
            _ => continue,
        };
        if let (Some(lo), Some(hi)) = (s.lo(), s.hi()) {
            need = need.max(bits_for(lo)).max(bits_for(hi));
        }
        // Set cardinalities range up to the universe size.
        if v.ty == FznVarType::SetOfInt {
            need = need.max(bits_for(s.len() as i64));
        }
    }
    if need > 63 {
        return Err(EncodeError::BadWidth(need));
    }
    Ok(need)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fzn::parse_fzn;
    use crate::smt::print_smt2;

    fn encode(text: &str, cfg: &EncodeConfig) -> SmtScript {
        let m = parse_fzn(text, true).unwrap();
        encode_model(&m, cfg).unwrap()
    }

    #[test]
    fn domain_becomes_bounds_in_la_mode() {
        let s = encode("var 1..3: x; solve satisfy;", &EncodeConfig::default());
        let printed = print_smt2(&s, Dialect::Default);
        assert!(printed.contains("(declare-fun x () Int)"), "{printed}");
        assert!(printed.contains("(assert (and (<= 1 x) (<= x 3)))"), "{printed}");
    }

    #[test]
    fn constant_float_division_folds() {
        let s = encode(
            "var float: c; constraint float_div(1.0, 4.0, c); solve satisfy;",
            &EncodeConfig::default(),
        );
        let printed = print_smt2(&s, Dialect::Default);
        assert!(printed.contains("(assert (= c (/ 1 4)))"), "{printed}");
    }

    #[test]
    fn set_gets_membership_booleans() {
        let s = encode(
            "var set of 1..3: s; var 0..3: c; constraint set_card(s, c); solve satisfy;",
            &EncodeConfig::default(),
        );
        let names: Vec<&str> = s.decls.iter().map(|(n, _)| n.as_str()).collect();
        assert!(names.contains(&"_memb_s_0"));
        assert!(names.contains(&"_memb_s_2"));
        // the cardinality link mentions network outputs tied to c
        let printed = print_smt2(&s, Dialect::Default);
        assert!(printed.contains("(>= c 1)"), "{printed}");
    }

    #[test]
    fn multiple_goals_become_objectives() {
        let s = encode(
            "var 1..3: x; var 1..3: y; solve minimize x; solve maximize y;",
            &EncodeConfig::default(),
        );
        assert_eq!(s.objectives.len(), 2);
        assert_eq!(s.objectives[0].direction, ObjDirection::Minimize);
        assert_eq!(s.objectives[1].direction, ObjDirection::Maximize);
    }

    #[test]
    fn bv_mode_uses_bitvectors_and_signed_objectives() {
        let cfg = EncodeConfig {
            int_mode: IntMode::Bv,
            ..EncodeConfig::default()
        };
        let s = encode("var -3..3: x; solve maximize x;", &cfg);
        let printed = print_smt2(&s, Dialect::Default);
        assert!(printed.contains("(_ BitVec 3)"), "{printed}");
        assert!(printed.contains(":signed"), "{printed}");
    }

    #[test]
    fn bv_mode_rejects_floats() {
        let m = parse_fzn("var 0.0..1.0: f; solve satisfy;", false).unwrap();
        let cfg = EncodeConfig {
            int_mode: IntMode::Bv,
            ..EncodeConfig::default()
        };
        assert!(matches!(
            encode_model(&m, &cfg),
            Err(EncodeError::FloatInBvMode(_))
        ));
    }

    #[test]
    fn bv_mode_width_overflow() {
        let m = parse_fzn("var 0..100: x; solve satisfy;", false).unwrap();
        let cfg = EncodeConfig {
            int_mode: IntMode::Bv,
            bv_width: Some(4),
            ..EncodeConfig::default()
        };
        assert!(matches!(
            encode_model(&m, &cfg),
            Err(EncodeError::BvDomainOverflow { .. })
        ));
    }

    #[test]
    fn nonlinear_instances_are_rejected() {
        let m = parse_fzn(
            "var 0..3: x; var 0..3: y; var 0..9: z; constraint int_times(x, y, z); solve satisfy;",
            false,
        )
        .unwrap();
        let err = encode_model(&m, &EncodeConfig::default()).unwrap_err();
        assert!(matches!(err, EncodeError::UnsupportedBuiltin(s) if s.contains("int_times")));
    }

    #[test]
    fn pb_rewrite_produces_clauses() {
        let text = "var bool: b1; var bool: b2; var bool: b3; \
             var 0..1: x1; var 0..1: x2; var 0..1: x3; \
             constraint bool2int(b1, x1); constraint bool2int(b2, x2); \
             constraint bool2int(b3, x3); \
             constraint int_lin_le([1, 1, 1], [x1, x2, x3], 1); solve satisfy;";
        let on = encode(text, &EncodeConfig::default());
        let off = encode(
            text,
            &EncodeConfig {
                pb_rewrite: false,
                ..EncodeConfig::default()
            },
        );
        let printed_on = print_smt2(&on, Dialect::Default);
        let printed_off = print_smt2(&off, Dialect::Default);
        assert!(printed_on.contains("_pb"), "{printed_on}");
        assert!(!printed_off.contains("_pb"), "{printed_off}");
    }
}
