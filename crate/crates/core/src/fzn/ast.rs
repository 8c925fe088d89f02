//! FlatZinc model representation.
//!
//! Parameters and array names are resolved while parsing, so constraint
//! arguments only ever hold literals, variable identifiers, or inline
//! arrays of those. Array and parameter declarations are kept on the model
//! for printing.

use crate::rational::Rat;

/// Scalar FlatZinc types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FznScalar {
    Bool,
    Int,
    Float,
}

/// Type of a declared FlatZinc variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FznVarType {
    Bool,
    Int,
    Float,
    SetOfInt,
}

/// A finite or interval set of integers, kept in the shape it was written.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetVal {
    Range(i64, i64),
    /// Sorted, deduplicated, non-empty.
    Elems(Vec<i64>),
}

impl SetVal {
    pub fn from_elems(mut elems: Vec<i64>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        SetVal::Elems(elems)
    }

    pub fn contains(&self, v: i64) -> bool {
        match self {
            SetVal::Range(lo, hi) => *lo <= v && v <= *hi,
            SetVal::Elems(es) => es.binary_search(&v).is_ok(),
        }
    }

    pub fn len(&self) -> u64 {
        match self {
            SetVal::Range(lo, hi) => {
                if lo > hi {
                    0
                } else {
                    (hi - lo) as u64 + 1
                }
            }
            SetVal::Elems(es) => es.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lo(&self) -> Option<i64> {
        match self {
            SetVal::Range(lo, hi) => (lo <= hi).then_some(*lo),
            SetVal::Elems(es) => es.first().copied(),
        }
    }

    pub fn hi(&self) -> Option<i64> {
        match self {
            SetVal::Range(lo, hi) => (lo <= hi).then_some(*hi),
            SetVal::Elems(es) => es.last().copied(),
        }
    }

    /// Enumerates the members. Callers bound the size first.
    pub fn iter(&self) -> Box<dyn Iterator<Item = i64> + '_> {
        match self {
            SetVal::Range(lo, hi) => Box::new(*lo..=*hi),
            SetVal::Elems(es) => Box::new(es.iter().copied()),
        }
    }

    /// Membership-wise equality, independent of representation.
    pub fn same_members(&self, other: &SetVal) -> bool {
        self.len() == other.len() && self.iter().zip(other.iter()).all(|(a, b)| a == b)
    }
}

/// Domain attached to a variable declaration.
#[derive(Debug, Clone, PartialEq)]
pub enum FznDomain {
    Int(SetVal),
    Float(Rat, Rat),
    /// Universe of a `var set of ...` declaration.
    SetUniverse(SetVal),
}

/// A literal value.
#[derive(Debug, Clone, PartialEq)]
pub enum FznLit {
    Bool(bool),
    Int(i64),
    Float(Rat),
    Set(SetVal),
}

impl FznLit {
    pub fn scalar(&self) -> Option<FznScalar> {
        match self {
            FznLit::Bool(_) => Some(FznScalar::Bool),
            FznLit::Int(_) => Some(FznScalar::Int),
            FznLit::Float(_) => Some(FznScalar::Float),
            FznLit::Set(_) => None,
        }
    }
}

/// Literal or variable reference.
#[derive(Debug, Clone, PartialEq)]
pub enum FznAtom {
    Lit(FznLit),
    Id(String),
}

impl FznAtom {
    pub fn as_id(&self) -> Option<&str> {
        match self {
            FznAtom::Id(s) => Some(s),
            FznAtom::Lit(_) => None,
        }
    }

    pub fn int(v: i64) -> Self {
        FznAtom::Lit(FznLit::Int(v))
    }

    pub fn boolean(v: bool) -> Self {
        FznAtom::Lit(FznLit::Bool(v))
    }
}

/// Constraint argument: scalar/set atom or an inline array of atoms.
#[derive(Debug, Clone, PartialEq)]
pub enum FznArg {
    Atom(FznAtom),
    Array(Vec<FznAtom>),
}

impl FznArg {
    pub fn as_atom(&self) -> Option<&FznAtom> {
        match self {
            FznArg::Atom(a) => Some(a),
            FznArg::Array(_) => None,
        }
    }

    pub fn as_array(&self) -> Option<&[FznAtom]> {
        match self {
            FznArg::Array(a) => Some(a),
            FznArg::Atom(_) => None,
        }
    }
}

/// Annotation argument; kept structurally so printing is faithful.
#[derive(Debug, Clone, PartialEq)]
pub enum AnnArg {
    Atom(FznAtom),
    Range(i64, i64),
    Array(Vec<AnnArg>),
    Call(String, Vec<AnnArg>),
    Str(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FznAnnotation {
    pub name: String,
    pub args: Vec<AnnArg>,
}

impl FznAnnotation {
    /// The variable named by a `defines_var(x)` annotation, if this is one.
    pub fn defines_var(&self) -> Option<&str> {
        if self.name != "defines_var" || self.args.len() != 1 {
            return None;
        }
        match &self.args[0] {
            AnnArg::Atom(FznAtom::Id(x)) => Some(x),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FznVarDecl {
    pub name: String,
    pub ty: FznVarType,
    pub domain: Option<FznDomain>,
    pub annotations: Vec<FznAnnotation>,
    /// Right-hand side of `= ...` on the declaration, if any.
    pub assigned: Option<FznAtom>,
}

impl FznVarDecl {
    pub fn is_output(&self) -> bool {
        self.annotations.iter().any(|a| a.name == "output_var")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FznParam {
    pub name: String,
    pub ty: FznVarType,
    pub value: FznLit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FznArray {
    pub name: String,
    pub is_var: bool,
    pub elem: FznScalar,
    pub elems: Vec<FznAtom>,
    pub annotations: Vec<FznAnnotation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FznConstraint {
    pub name: String,
    pub args: Vec<FznArg>,
    pub annotations: Vec<FznAnnotation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FznGoalKind {
    Satisfy,
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FznSolveGoal {
    pub kind: FznGoalKind,
    pub objective: Option<FznAtom>,
    pub annotations: Vec<FznAnnotation>,
}

/// A parsed, validated FlatZinc instance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FznModel {
    pub params: Vec<FznParam>,
    pub arrays: Vec<FznArray>,
    pub vars: Vec<FznVarDecl>,
    pub constraints: Vec<FznConstraint>,
    /// Non-empty after validation; more than one item only with the
    /// multi-objective extension.
    pub solve_items: Vec<FznSolveGoal>,
}

impl FznModel {
    pub fn var(&self, name: &str) -> Option<&FznVarDecl> {
        self.vars.iter().find(|v| v.name == name)
    }

    pub fn var_mut(&mut self, name: &str) -> Option<&mut FznVarDecl> {
        self.vars.iter_mut().find(|v| v.name == name)
    }

    /// Names listed in output annotations (`output_var` / `output_array`).
    pub fn output_names(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self
            .vars
            .iter()
            .filter(|v| v.is_output())
            .map(|v| v.name.as_str())
            .collect();
        out.extend(
            self.arrays
                .iter()
                .filter(|a| a.annotations.iter().any(|an| an.name == "output_array"))
                .map(|a| a.name.as_str()),
        );
        out
    }
}
