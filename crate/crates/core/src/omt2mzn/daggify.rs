//! ≥2-father DAG-ification.
//!
//! A fresh label is associated with all and only the compound DAG nodes
//! that have at least two fathers; every other node is inlined at each
//! use site. Leaves (variables and constants) are never labeled: a
//! reference needs no definition.

use std::collections::HashMap;

use crate::smt::{father_counts, SmtScript, TermId};

/// Which nodes receive definitions; the two extremes exist for size
/// comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelMode {
    /// Label exactly the compound nodes with two or more fathers.
    #[default]
    TwoFathers,
    /// Label nothing; every node is inlined at each use.
    Inline,
    /// Label every compound node.
    FullyLabeled,
}

#[derive(Debug, Clone, Default)]
pub struct LabelPlan {
    /// Node id → fresh label name.
    pub labels: HashMap<TermId, String>,
    /// Labeled nodes, children before parents.
    pub order: Vec<TermId>,
}

/// Label prefix guaranteed not to capture any script symbol.
pub fn fresh_prefix(script: &SmtScript) -> String {
    let mut prefix = "ZINC_DEF_".to_string();
    while script.decls.iter().any(|(n, _)| n.starts_with(&prefix)) {
        prefix.insert(5, 'Z');
    }
    prefix
}

pub fn daggify(script: &SmtScript) -> LabelPlan {
    daggify_with(script, LabelMode::TwoFathers)
}

pub fn daggify_with(script: &SmtScript, mode: LabelMode) -> LabelPlan {
    let counts = father_counts(script);
    let prefix = fresh_prefix(script);
    let mut plan = LabelPlan::default();
    for id in script.topo_order() {
        let node = script.arena.node(id);
        if node.children.is_empty() {
            continue;
        }
        let label = match mode {
            LabelMode::Inline => false,
            LabelMode::FullyLabeled => true,
            LabelMode::TwoFathers => counts.get(&id).copied().unwrap_or(0) >= 2,
        };
        if label {
            plan.labels.insert(id, format!("{prefix}{}_", id.0));
            plan.order.push(id);
        }
    }
    plan
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smt::parse_smt2;

    #[test]
    fn shared_and_node_gets_one_label() {
        // (or X X) with X = (and a b): X has two fathers.
        let s = parse_smt2(
            "(declare-const a Bool)(declare-const b Bool)(assert (or (and a b) (and a b)))",
        )
        .unwrap();
        let plan = daggify(&s);
        assert_eq!(plan.labels.len(), 1);
        let or = s.assertions[0];
        let and = s.arena.node(or).children[0];
        assert!(plan.labels.contains_key(&and));
    }

    #[test]
    fn only_the_shared_or_node_is_labeled() {
        // ((a∧b)∨(a∧c)) ∧ ((a∧b)∨(a∧c)) ∧ (a∨c): the or node is shared;
        // the and nodes each have one father (the shared or); leaves are
        // excluded even though `a` has several fathers.
        let s = parse_smt2(
            "(declare-const a Bool)(declare-const b Bool)(declare-const c Bool)\
             (assert (and (or (and a b) (and a c)) (or (and a b) (and a c)) (or a c)))",
        )
        .unwrap();
        let plan = daggify(&s);
        assert_eq!(plan.labels.len(), 1, "labels: {:?}", plan.labels);
    }

    #[test]
    fn tree_shaped_formula_has_no_labels() {
        let s = parse_smt2(
            "(declare-const a Bool)(declare-const b Bool)(assert (or (and a b) (not b)))",
        )
        .unwrap();
        assert!(daggify(&s).labels.is_empty());
    }

    #[test]
    fn prefix_avoids_capture() {
        let s = parse_smt2("(declare-const ZINC_DEF_1_ Bool)(assert ZINC_DEF_1_)").unwrap();
        let prefix = fresh_prefix(&s);
        assert!(!"ZINC_DEF_1_".starts_with(&prefix));
    }

    #[test]
    fn order_is_children_first() {
        let s = parse_smt2(
            "(declare-const a Bool)(declare-const b Bool)\
             (assert (or (and (not a) b) (and (not a) b)))\
             (assert (or (not a) (not a)))",
        )
        .unwrap();
        let plan = daggify(&s);
        // (not a) is shared inside (and (not a) b) and by itself
        let pos: HashMap<&TermId, usize> =
            plan.order.iter().enumerate().map(|(i, id)| (id, i)).collect();
        for (&id, _) in &plan.labels {
            for &child in &s.arena.node(id).children {
                if plan.labels.contains_key(&child) {
                    assert!(pos[&child] < pos[&id]);
                }
            }
        }
    }
}
