//! Hash-consed term DAG.
//!
//! Terms are interned in a [`TermArena`]: structurally equal terms always
//! receive the same [`TermId`], so sharing is maximal and father counts
//! are well defined. Construction goes through the arena's builder
//! methods, which also check operator signatures.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::rational::Rat;

use super::error::SmtError;

/// Sorts of the supported theory fragment (Bool + LIRA + BV).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sort {
    Bool,
    Int,
    Real,
    BitVec(u32),
}

impl Sort {
    pub fn is_numeric(self) -> bool {
        matches!(self, Sort::Int | Sort::Real)
    }

    pub fn bv_width(self) -> Option<u32> {
        match self {
            Sort::BitVec(w) => Some(w),
            _ => None,
        }
    }
}

impl std::fmt::Display for Sort {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sort::Bool => write!(f, "Bool"),
            Sort::Int => write!(f, "Int"),
            Sort::Real => write!(f, "Real"),
            Sort::BitVec(w) => write!(f, "(_ BitVec {w})"),
        }
    }
}

/// Node identifier; equal ids mean structurally equal terms within one arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(pub u32);

/// Operator or leaf payload of a term node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Op {
    Var(String),
    BoolConst(bool),
    IntConst(BigInt),
    RealConst(Rat),
    BvConst { value: BigUint, width: u32 },
    Not,
    And,
    Or,
    Xor,
    Implies,
    Ite,
    Eq,
    Distinct,
    Add,
    Sub,
    Neg,
    Mul,
    Div,
    ToReal,
    Le,
    Lt,
    Ge,
    Gt,
    BvAdd,
    BvSub,
    BvMul,
    BvNeg,
    BvNot,
    BvAnd,
    BvOr,
    BvXor,
    BvShl,
    BvLshr,
    BvAshr,
    BvUlt,
    BvUle,
    BvUgt,
    BvUge,
    BvSlt,
    BvSle,
    BvSgt,
    BvSge,
    ZeroExtend(u32),
    SignExtend(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermNode {
    pub op: Op,
    pub children: Vec<TermId>,
    pub sort: Sort,
}

/// Interning arena. One arena per script; ids are meaningless across arenas.
#[derive(Debug, Clone, Default)]
pub struct TermArena {
    nodes: Vec<TermNode>,
    index: HashMap<(Op, Vec<TermId>), TermId>,
}

impl TermArena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&self, id: TermId) -> &TermNode {
        &self.nodes[id.0 as usize]
    }

    pub fn sort(&self, id: TermId) -> Sort {
        self.node(id).sort
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn intern(&mut self, op: Op, children: Vec<TermId>, sort: Sort) -> TermId {
        if let Some(id) = self.index.get(&(op.clone(), children.clone())) {
            return *id;
        }
        let id = TermId(self.nodes.len() as u32);
        self.index.insert((op.clone(), children.clone()), id);
        self.nodes.push(TermNode { op, children, sort });
        id
    }

    fn mismatch(&self, context: &str, msg: impl Into<String>) -> SmtError {
        SmtError::SortMismatch {
            context: context.to_string(),
            msg: msg.into(),
        }
    }

    // ---- leaves ----------------------------------------------------------

    pub fn var(&mut self, name: &str, sort: Sort) -> TermId {
        self.intern(Op::Var(name.to_string()), vec![], sort)
    }

    pub fn bool_const(&mut self, v: bool) -> TermId {
        self.intern(Op::BoolConst(v), vec![], Sort::Bool)
    }

    pub fn true_(&mut self) -> TermId {
        self.bool_const(true)
    }

    pub fn false_(&mut self) -> TermId {
        self.bool_const(false)
    }

    pub fn int_const(&mut self, v: BigInt) -> TermId {
        self.intern(Op::IntConst(v), vec![], Sort::Int)
    }

    pub fn int_const_i64(&mut self, v: i64) -> TermId {
        self.int_const(BigInt::from(v))
    }

    pub fn real_const(&mut self, v: Rat) -> TermId {
        self.intern(Op::RealConst(v), vec![], Sort::Real)
    }

    /// Bit-vector constant; the value is reduced modulo 2^width.
    pub fn bv_const(&mut self, value: BigUint, width: u32) -> TermId {
        assert!(width >= 1, "bit-vector width must be at least 1");
        let modulus = BigUint::one() << width;
        let value = value % modulus;
        self.intern(Op::BvConst { value, width }, vec![], Sort::BitVec(width))
    }

    pub fn bv_const_u64(&mut self, value: u64, width: u32) -> TermId {
        self.bv_const(BigUint::from(value), width)
    }

    /// The signed value of an Int constant node, if it is one.
    pub fn as_int_const(&self, id: TermId) -> Option<&BigInt> {
        match &self.node(id).op {
            Op::IntConst(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_real_const(&self, id: TermId) -> Option<&Rat> {
        match &self.node(id).op {
            Op::RealConst(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_const(&self, id: TermId) -> bool {
        matches!(
            self.node(id).op,
            Op::BoolConst(_) | Op::IntConst(_) | Op::RealConst(_) | Op::BvConst { .. }
        )
    }

    // ---- boolean ---------------------------------------------------------

    fn check_bools(&self, context: &str, children: &[TermId]) -> Result<(), SmtError> {
        for &c in children {
            if self.sort(c) != Sort::Bool {
                return Err(self.mismatch(context, format!("expected Bool, got {}", self.sort(c))));
            }
        }
        Ok(())
    }

    pub fn not(&mut self, t: TermId) -> Result<TermId, SmtError> {
        self.check_bools("not", &[t])?;
        Ok(self.intern(Op::Not, vec![t], Sort::Bool))
    }

    pub fn and(&mut self, children: Vec<TermId>) -> Result<TermId, SmtError> {
        self.check_bools("and", &children)?;
        match children.len() {
            0 => Ok(self.true_()),
            1 => Ok(children[0]),
            _ => Ok(self.intern(Op::And, children, Sort::Bool)),
        }
    }

    pub fn or(&mut self, children: Vec<TermId>) -> Result<TermId, SmtError> {
        self.check_bools("or", &children)?;
        match children.len() {
            0 => Ok(self.false_()),
            1 => Ok(children[0]),
            _ => Ok(self.intern(Op::Or, children, Sort::Bool)),
        }
    }

    pub fn xor(&mut self, a: TermId, b: TermId) -> Result<TermId, SmtError> {
        self.check_bools("xor", &[a, b])?;
        Ok(self.intern(Op::Xor, vec![a, b], Sort::Bool))
    }

    pub fn implies(&mut self, a: TermId, b: TermId) -> Result<TermId, SmtError> {
        self.check_bools("=>", &[a, b])?;
        Ok(self.intern(Op::Implies, vec![a, b], Sort::Bool))
    }

    pub fn iff(&mut self, a: TermId, b: TermId) -> Result<TermId, SmtError> {
        self.eq(vec![a, b])
    }

    // ---- polymorphic -----------------------------------------------------

    /// Promotes Int constants to Real when mixed with Real-sorted siblings.
    fn unify_numeric(&mut self, children: &mut [TermId]) {
        let any_real = children.iter().any(|&c| self.sort(c) == Sort::Real);
        if !any_real {
            return;
        }
        for c in children.iter_mut() {
            if let Op::IntConst(v) = &self.node(*c).op {
                let r = Rat::from_bigint(v.clone());
                *c = self.real_const(r);
            }
        }
    }

    fn check_same_sort(&self, context: &str, children: &[TermId]) -> Result<Sort, SmtError> {
        let first = self.sort(children[0]);
        for &c in &children[1..] {
            if self.sort(c) != first {
                return Err(self.mismatch(
                    context,
                    format!("mixed sorts {} and {}", first, self.sort(c)),
                ));
            }
        }
        Ok(first)
    }

    pub fn eq(&mut self, mut children: Vec<TermId>) -> Result<TermId, SmtError> {
        if children.len() < 2 {
            return Err(self.mismatch("=", "needs at least two arguments"));
        }
        self.unify_numeric(&mut children);
        self.check_same_sort("=", &children)?;
        Ok(self.intern(Op::Eq, children, Sort::Bool))
    }

    pub fn distinct(&mut self, mut children: Vec<TermId>) -> Result<TermId, SmtError> {
        if children.len() < 2 {
            return Err(self.mismatch("distinct", "needs at least two arguments"));
        }
        self.unify_numeric(&mut children);
        self.check_same_sort("distinct", &children)?;
        Ok(self.intern(Op::Distinct, children, Sort::Bool))
    }

    pub fn ite(&mut self, c: TermId, t: TermId, e: TermId) -> Result<TermId, SmtError> {
        self.check_bools("ite condition", &[c])?;
        let mut branches = [t, e];
        self.unify_numeric(&mut branches);
        let sort = self.check_same_sort("ite", &branches)?;
        Ok(self.intern(Op::Ite, vec![c, branches[0], branches[1]], sort))
    }

    // ---- arithmetic ------------------------------------------------------

    fn check_numeric(&mut self, context: &str, children: &mut Vec<TermId>) -> Result<Sort, SmtError> {
        self.unify_numeric(children);
        let sort = self.check_same_sort(context, children)?;
        if !sort.is_numeric() {
            return Err(self.mismatch(context, format!("expected Int or Real, got {sort}")));
        }
        Ok(sort)
    }

    pub fn add(&mut self, mut children: Vec<TermId>) -> Result<TermId, SmtError> {
        match children.len() {
            0 => Err(self.mismatch("+", "needs arguments")),
            1 => Ok(children[0]),
            _ => {
                let sort = self.check_numeric("+", &mut children)?;
                Ok(self.intern(Op::Add, children, sort))
            }
        }
    }

    pub fn sub(&mut self, mut children: Vec<TermId>) -> Result<TermId, SmtError> {
        if children.len() < 2 {
            return Err(self.mismatch("-", "needs at least two arguments"));
        }
        let sort = self.check_numeric("-", &mut children)?;
        Ok(self.intern(Op::Sub, children, sort))
    }

    pub fn neg(&mut self, t: TermId) -> Result<TermId, SmtError> {
        // Fold on constants so `(- 5)` is a literal.
        match &self.node(t).op {
            Op::IntConst(v) => {
                let v = -v.clone();
                return Ok(self.int_const(v));
            }
            Op::RealConst(v) => {
                let v = -v.clone();
                return Ok(self.real_const(v));
            }
            _ => {}
        }
        let sort = self.sort(t);
        if !sort.is_numeric() {
            return Err(self.mismatch("-", format!("expected Int or Real, got {sort}")));
        }
        Ok(self.intern(Op::Neg, vec![t], sort))
    }

    /// Linear multiplication: at most one non-constant factor.
    pub fn mul(&mut self, mut children: Vec<TermId>) -> Result<TermId, SmtError> {
        match children.len() {
            0 => Err(self.mismatch("*", "needs arguments")),
            1 => Ok(children[0]),
            _ => {
                let sort = self.check_numeric("*", &mut children)?;
                let non_const = children.iter().filter(|&&c| !self.is_const(c)).count();
                if non_const > 1 {
                    return Err(SmtError::Nonlinear(
                        "product of two non-constant terms".to_string(),
                    ));
                }
                Ok(self.intern(Op::Mul, children, sort))
            }
        }
    }

    /// Real division by a non-zero constant; constant/constant folds.
    pub fn div(&mut self, a: TermId, b: TermId) -> Result<TermId, SmtError> {
        let mut pair = vec![a, b];
        self.unify_numeric(&mut pair);
        let (a, b) = (pair[0], pair[1]);
        let bval = match &self.node(b).op {
            Op::RealConst(r) => Some(r.clone()),
            Op::IntConst(v) => Some(Rat::from_bigint(v.clone())),
            _ => None,
        };
        let Some(bval) = bval else {
            return Err(SmtError::Nonlinear(
                "division by a non-constant term".to_string(),
            ));
        };
        if bval.is_zero() {
            return Err(self.mismatch("/", "division by zero"));
        }
        match &self.node(a).op {
            Op::RealConst(r) => {
                let v = r.clone() / bval;
                return Ok(self.real_const(v));
            }
            Op::IntConst(v) => {
                let v = Rat::from_bigint(v.clone()) / bval;
                return Ok(self.real_const(v));
            }
            _ => {}
        }
        if self.sort(a) != Sort::Real {
            return Err(self.mismatch("/", format!("expected Real, got {}", self.sort(a))));
        }
        let b = self.real_const(bval);
        Ok(self.intern(Op::Div, vec![a, b], Sort::Real))
    }

    pub fn to_real(&mut self, t: TermId) -> Result<TermId, SmtError> {
        match &self.node(t).op {
            Op::IntConst(v) => {
                let r = Rat::from_bigint(v.clone());
                return Ok(self.real_const(r));
            }
            _ => {}
        }
        if self.sort(t) != Sort::Int {
            return Err(self.mismatch("to_real", format!("expected Int, got {}", self.sort(t))));
        }
        Ok(self.intern(Op::ToReal, vec![t], Sort::Real))
    }

    fn cmp(&mut self, op: Op, context: &str, a: TermId, b: TermId) -> Result<TermId, SmtError> {
        let mut pair = vec![a, b];
        self.check_numeric(context, &mut pair)?;
        Ok(self.intern(op, pair, Sort::Bool))
    }

    pub fn le(&mut self, a: TermId, b: TermId) -> Result<TermId, SmtError> {
        self.cmp(Op::Le, "<=", a, b)
    }

    pub fn lt(&mut self, a: TermId, b: TermId) -> Result<TermId, SmtError> {
        self.cmp(Op::Lt, "<", a, b)
    }

    pub fn ge(&mut self, a: TermId, b: TermId) -> Result<TermId, SmtError> {
        self.cmp(Op::Ge, ">=", a, b)
    }

    pub fn gt(&mut self, a: TermId, b: TermId) -> Result<TermId, SmtError> {
        self.cmp(Op::Gt, ">", a, b)
    }

    // ---- bit-vectors -----------------------------------------------------

    fn check_bv_pair(&self, context: &str, a: TermId, b: TermId) -> Result<u32, SmtError> {
        match (self.sort(a), self.sort(b)) {
            (Sort::BitVec(w1), Sort::BitVec(w2)) if w1 == w2 => Ok(w1),
            (sa, sb) => Err(self.mismatch(
                context,
                format!("expected equal-width bit-vectors, got {sa} and {sb}"),
            )),
        }
    }

    pub fn bv_binary(&mut self, op: Op, a: TermId, b: TermId) -> Result<TermId, SmtError> {
        let context = format!("{op:?}");
        let w = self.check_bv_pair(&context, a, b)?;
        let sort = match op {
            Op::BvAdd | Op::BvSub | Op::BvMul | Op::BvAnd | Op::BvOr | Op::BvXor | Op::BvShl
            | Op::BvLshr | Op::BvAshr => Sort::BitVec(w),
            Op::BvUlt | Op::BvUle | Op::BvUgt | Op::BvUge | Op::BvSlt | Op::BvSle | Op::BvSgt
            | Op::BvSge => Sort::Bool,
            other => panic!("not a binary bit-vector operator: {other:?}"),
        };
        Ok(self.intern(op, vec![a, b], sort))
    }

    pub fn bv_unary(&mut self, op: Op, a: TermId) -> Result<TermId, SmtError> {
        let Sort::BitVec(w) = self.sort(a) else {
            return Err(self.mismatch("bv op", format!("expected bit-vector, got {}", self.sort(a))));
        };
        match op {
            Op::BvNeg | Op::BvNot => Ok(self.intern(op, vec![a], Sort::BitVec(w))),
            other => panic!("not a unary bit-vector operator: {other:?}"),
        }
    }

    pub fn bv_extend(&mut self, signed: bool, extra: u32, a: TermId) -> Result<TermId, SmtError> {
        let Sort::BitVec(w) = self.sort(a) else {
            return Err(self.mismatch(
                "extend",
                format!("expected bit-vector, got {}", self.sort(a)),
            ));
        };
        if extra == 0 {
            return Ok(a);
        }
        let op = if signed {
            Op::SignExtend(extra)
        } else {
            Op::ZeroExtend(extra)
        };
        Ok(self.intern(op, vec![a], Sort::BitVec(w + extra)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_consing_shares_nodes() {
        let mut arena = TermArena::new();
        let a = arena.var("a", Sort::Bool);
        let b = arena.var("b", Sort::Bool);
        let ab1 = arena.and(vec![a, b]).unwrap();
        let ab2 = arena.and(vec![a, b]).unwrap();
        assert_eq!(ab1, ab2);
        let ba = arena.and(vec![b, a]).unwrap();
        assert_ne!(ab1, ba, "hash consing is structural, not modulo commutativity");
    }

    #[test]
    fn const_folds() {
        let mut arena = TermArena::new();
        let five = arena.int_const_i64(5);
        let neg = arena.neg(five).unwrap();
        assert_eq!(arena.as_int_const(neg), Some(&BigInt::from(-5)));
        let seven = arena.int_const_i64(7);
        let two = arena.int_const_i64(2);
        let frac = arena.div(seven, two).unwrap();
        assert_eq!(arena.as_real_const(frac), Some(&Rat::from_i64_fraction(7, 2)));
    }

    #[test]
    fn sort_checking() {
        let mut arena = TermArena::new();
        let x = arena.var("x", Sort::Int);
        let b = arena.var("b", Sort::Bool);
        assert!(arena.and(vec![x, b]).is_err());
        assert!(arena.le(x, b).is_err());
        let y = arena.var("y", Sort::Int);
        assert!(arena.mul(vec![x, y]).is_err(), "non-linear product rejected");
        let c2 = arena.int_const_i64(2);
        assert!(arena.mul(vec![c2, x]).is_ok());
    }

    #[test]
    fn numeral_promotion_in_real_context() {
        let mut arena = TermArena::new();
        let r = arena.var("r", Sort::Real);
        let two = arena.int_const_i64(2);
        let le = arena.le(r, two).unwrap();
        let node = arena.node(le);
        assert_eq!(arena.sort(node.children[1]), Sort::Real);
    }

    #[test]
    fn bv_constants_reduced() {
        let mut arena = TermArena::new();
        let c = arena.bv_const_u64(300, 8);
        match &arena.node(c).op {
            Op::BvConst { value, width } => {
                assert_eq!(*width, 8);
                assert_eq!(*value, BigUint::from(44u32));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
