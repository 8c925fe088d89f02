//! Optimization-extended SMT-LIB scripts.

use std::collections::HashMap;

use crate::rational::Rat;

use super::error::SmtError;
use super::term::{Sort, TermArena, TermId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjDirection {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub direction: ObjDirection,
    pub term: TermId,
    /// Signed comparison order for bit-vector objectives.
    pub signed: bool,
    /// Optional `:id` attribute.
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SoftAssertion {
    pub term: TermId,
    pub weight: Rat,
    pub group: String,
}

/// How multiple objectives combine at script level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Combination {
    #[default]
    Independent,
    Lexicographic,
}

/// Commands recognized but not acted upon (`check-sat`, `get-objectives`,
/// `exit`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InertCommand {
    CheckSat,
    GetObjectives,
    Exit,
}

#[derive(Debug, Clone, Default)]
pub struct SmtScript {
    pub arena: TermArena,
    /// Declarations in order of appearance.
    pub decls: Vec<(String, Sort)>,
    pub assertions: Vec<TermId>,
    pub soft_assertions: Vec<SoftAssertion>,
    pub objectives: Vec<Objective>,
    pub logic: Option<String>,
    pub combination: Combination,
    pub inert: Vec<InertCommand>,
}

impl SmtScript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, name: &str, sort: Sort) -> Result<TermId, SmtError> {
        if self.decls.iter().any(|(n, _)| n == name) {
            return Err(SmtError::DuplicateDecl(name.to_string()));
        }
        self.decls.push((name.to_string(), sort));
        Ok(self.arena.var(name, sort))
    }

    pub fn sort_of(&self, name: &str) -> Option<Sort> {
        self.decls
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| *s)
    }

    pub fn assert(&mut self, t: TermId) -> Result<(), SmtError> {
        if self.arena.sort(t) != Sort::Bool {
            return Err(SmtError::SortMismatch {
                context: "assert".to_string(),
                msg: format!("expected Bool, got {}", self.arena.sort(t)),
            });
        }
        self.assertions.push(t);
        Ok(())
    }

    pub fn assert_soft(&mut self, t: TermId, weight: Rat, group: &str) -> Result<(), SmtError> {
        if self.arena.sort(t) != Sort::Bool {
            return Err(SmtError::SortMismatch {
                context: "assert-soft".to_string(),
                msg: format!("expected Bool, got {}", self.arena.sort(t)),
            });
        }
        if weight <= Rat::zero() {
            return Err(SmtError::BadWeight(weight.to_string()));
        }
        self.soft_assertions.push(SoftAssertion {
            term: t,
            weight,
            group: group.to_string(),
        });
        Ok(())
    }

    pub fn add_objective(
        &mut self,
        direction: ObjDirection,
        term: TermId,
        signed: bool,
        name: Option<String>,
    ) -> Result<(), SmtError> {
        let sort = self.arena.sort(term);
        if !sort.is_numeric() && sort.bv_width().is_none() {
            return Err(SmtError::SortMismatch {
                context: "objective".to_string(),
                msg: format!("expected Int, Real or BitVec, got {sort}"),
            });
        }
        self.objectives.push(Objective {
            direction,
            term,
            signed,
            name,
        });
        Ok(())
    }

    /// Every root of the term DAG: assertions, soft assertions, objectives.
    pub fn roots(&self) -> Vec<TermId> {
        let mut roots: Vec<TermId> = self.assertions.clone();
        roots.extend(self.soft_assertions.iter().map(|s| s.term));
        roots.extend(self.objectives.iter().map(|o| o.term));
        roots
    }

    /// The nodes reachable from the roots, children before parents.
    pub fn topo_order(&self) -> Vec<TermId> {
        let mut order = Vec::new();
        let mut seen = vec![false; self.arena.len()];
        let mut stack: Vec<(TermId, bool)> = self.roots().iter().rev().map(|&r| (r, false)).collect();
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                order.push(id);
                continue;
            }
            if seen[id.0 as usize] {
                continue;
            }
            seen[id.0 as usize] = true;
            stack.push((id, true));
            for &c in self.arena.node(id).children.iter().rev() {
                if !seen[c.0 as usize] {
                    stack.push((c, false));
                }
            }
        }
        order
    }
}

/// Number of fathers (distinct parent/child-slot edges) of every node
/// reachable from the script's roots. Roots themselves contribute no
/// edges, so a node used only as an assertion root has count zero.
pub fn father_counts(script: &SmtScript) -> HashMap<TermId, u32> {
    let mut counts: HashMap<TermId, u32> = HashMap::new();
    for id in script.topo_order() {
        counts.entry(id).or_insert(0);
        for &c in &script.arena.node(id).children {
            *counts.entry(c).or_insert(0) += 1;
        }
    }
    counts
}

/// Structural equality of two terms living in (possibly) different arenas.
pub fn term_structurally_equal(
    a: &TermArena,
    ta: TermId,
    b: &TermArena,
    tb: TermId,
) -> bool {
    let mut memo: HashMap<(TermId, TermId), bool> = HashMap::new();
    fn go(
        a: &TermArena,
        ta: TermId,
        b: &TermArena,
        tb: TermId,
        memo: &mut HashMap<(TermId, TermId), bool>,
    ) -> bool {
        if let Some(&r) = memo.get(&(ta, tb)) {
            return r;
        }
        let na = a.node(ta);
        let nb = b.node(tb);
        let r = na.op == nb.op
            && na.sort == nb.sort
            && na.children.len() == nb.children.len()
            && na
                .children
                .iter()
                .zip(&nb.children)
                .all(|(&ca, &cb)| go(a, ca, b, cb, memo));
        memo.insert((ta, tb), r);
        r
    }
    go(a, ta, b, tb, &mut memo)
}

/// Structural equality of whole scripts, used by round-trip tests.
pub fn scripts_structurally_equal(a: &SmtScript, b: &SmtScript) -> bool {
    a.decls == b.decls
        && a.logic == b.logic
        && a.combination == b.combination
        && a.inert == b.inert
        && a.assertions.len() == b.assertions.len()
        && a.soft_assertions.len() == b.soft_assertions.len()
        && a.objectives.len() == b.objectives.len()
        && a
            .assertions
            .iter()
            .zip(&b.assertions)
            .all(|(&x, &y)| term_structurally_equal(&a.arena, x, &b.arena, y))
        && a.soft_assertions.iter().zip(&b.soft_assertions).all(|(x, y)| {
            x.weight == y.weight
                && x.group == y.group
                && term_structurally_equal(&a.arena, x.term, &b.arena, y.term)
        })
        && a.objectives.iter().zip(&b.objectives).all(|(x, y)| {
            x.direction == y.direction
                && x.signed == y.signed
                && x.name == y.name
                && term_structurally_equal(&a.arena, x.term, &b.arena, y.term)
        })
}

#[cfg(test)]
mod tests {
    use super::super::term::Op;
    use super::*;

    #[test]
    fn father_counts_single_assertion() {
        let mut s = SmtScript::new();
        let a = s.declare("a", Sort::Bool).unwrap();
        let b = s.declare("b", Sort::Bool).unwrap();
        let ab = s.arena.and(vec![a, b]).unwrap();
        s.assert(ab).unwrap();
        let counts = father_counts(&s);
        assert_eq!(counts[&ab], 0);
        assert_eq!(counts[&a], 1);
        assert_eq!(counts[&b], 1);
    }

    #[test]
    fn father_counts_shared_node() {
        // (or (and a b) (and a b)) is (or X X): X has two fathers.
        let mut s = SmtScript::new();
        let a = s.declare("a", Sort::Bool).unwrap();
        let b = s.declare("b", Sort::Bool).unwrap();
        let ab = s.arena.and(vec![a, b]).unwrap();
        let or = s.arena.or(vec![ab, ab]).unwrap();
        s.assert(or).unwrap();
        let counts = father_counts(&s);
        assert_eq!(counts[&ab], 2);
        assert_eq!(counts[&a], 1, "a occurs in one distinct parent slot");
    }

    #[test]
    fn empty_script_has_empty_counts() {
        let s = SmtScript::new();
        assert!(father_counts(&s).is_empty());
    }

    #[test]
    fn topo_order_is_children_first() {
        let mut s = SmtScript::new();
        let x = s.declare("x", Sort::Int).unwrap();
        let zero = s.arena.int_const_i64(0);
        let le = s.arena.le(zero, x).unwrap();
        s.assert(le).unwrap();
        let order = s.topo_order();
        let pos = |id: TermId| order.iter().position(|&o| o == id).unwrap();
        assert!(pos(zero) < pos(le));
        assert!(pos(x) < pos(le));
        assert!(matches!(s.arena.node(le).op, Op::Le));
    }
}
