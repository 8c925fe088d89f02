//! AST for the MiniZinc subset this crate emits and flattens.

use num_bigint::BigInt;

use crate::rational::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Iff,
    Imp,
    Or,
    Xor,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
    /// Float division `/`.
    FDiv,
    /// Integer division `div` (truncating).
    IDiv,
    /// Integer remainder `mod` (sign of the dividend).
    Mod,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MznExpr {
    BoolLit(bool),
    IntLit(BigInt),
    FloatLit(Rat),
    Ident(String),
    Not(Box<MznExpr>),
    Neg(Box<MznExpr>),
    Bin(BinOp, Box<MznExpr>, Box<MznExpr>),
    Ite(Box<MznExpr>, Box<MznExpr>, Box<MznExpr>),
    /// Only used inside `solve search ...` items (MiniSearch combinators).
    Call(String, Vec<MznExpr>),
    ArrayLit(Vec<MznExpr>),
}

impl MznExpr {
    pub fn int(v: i64) -> Self {
        MznExpr::IntLit(BigInt::from(v))
    }

    pub fn bin(op: BinOp, a: MznExpr, b: MznExpr) -> Self {
        MznExpr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn ident(name: &str) -> Self {
        MznExpr::Ident(name.to_string())
    }

    /// Number of nodes in the expression tree.
    pub fn node_count(&self) -> usize {
        match self {
            MznExpr::BoolLit(_)
            | MznExpr::IntLit(_)
            | MznExpr::FloatLit(_)
            | MznExpr::Ident(_) => 1,
            MznExpr::Not(e) | MznExpr::Neg(e) => 1 + e.node_count(),
            MznExpr::Bin(_, a, b) => 1 + a.node_count() + b.node_count(),
            MznExpr::Ite(c, t, e) => 1 + c.node_count() + t.node_count() + e.node_count(),
            MznExpr::Call(_, args) | MznExpr::ArrayLit(args) => {
                1 + args.iter().map(|a| a.node_count()).sum::<usize>()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MznType {
    Bool,
    Int,
    Float,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MznDomain {
    IntRange(BigInt, BigInt),
    FloatRange(Rat, Rat),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MznVarDecl {
    pub name: String,
    pub ty: MznType,
    pub domain: Option<MznDomain>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MznSolve {
    Satisfy,
    Minimize(MznExpr),
    Maximize(MznExpr),
    /// MiniSearch lexicographic minimization over the listed objectives.
    LexMinimize(Vec<MznExpr>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum MznItem {
    Include(String),
    VarDecl(MznVarDecl),
    Constraint(MznExpr),
    Solve(MznSolve),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MznModel {
    pub items: Vec<MznItem>,
}

impl MznModel {
    pub fn decls(&self) -> impl Iterator<Item = &MznVarDecl> {
        self.items.iter().filter_map(|i| match i {
            MznItem::VarDecl(d) => Some(d),
            _ => None,
        })
    }

    pub fn constraints(&self) -> impl Iterator<Item = &MznExpr> {
        self.items.iter().filter_map(|i| match i {
            MznItem::Constraint(e) => Some(e),
            _ => None,
        })
    }

    pub fn solve(&self) -> Option<&MznSolve> {
        self.items.iter().find_map(|i| match i {
            MznItem::Solve(s) => Some(s),
            _ => None,
        })
    }

    /// Total expression-node count over constraints and the solve item.
    pub fn expression_node_count(&self) -> usize {
        let mut n = 0;
        for item in &self.items {
            match item {
                MznItem::Constraint(e) => n += e.node_count(),
                MznItem::Solve(MznSolve::Minimize(e)) | MznItem::Solve(MznSolve::Maximize(e)) => {
                    n += e.node_count()
                }
                MznItem::Solve(MznSolve::LexMinimize(es)) => {
                    n += es.iter().map(|e| e.node_count()).sum::<usize>()
                }
                _ => {}
            }
        }
        n
    }
}
