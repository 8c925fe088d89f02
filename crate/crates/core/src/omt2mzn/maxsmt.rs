//! Weighted MaxSMT to pseudo-Boolean objective conversion.
//!
//! Each soft-assertion group becomes one synthesized minimization
//! objective `Σ wᵢ · (violation of soft clause i)`; hard assertions are
//! untouched and the soft assertions disappear as constraints.

use crate::rational::Rat;
use crate::smt::{ObjDirection, SmtScript};

/// Converts soft assertions into penalty objectives. A script without
/// soft assertions is returned unchanged.
pub fn maxsmt_to_pb(script: &SmtScript) -> SmtScript {
    if script.soft_assertions.is_empty() {
        return script.clone();
    }
    let mut out = script.clone();
    // Group order follows first appearance.
    let mut groups: Vec<String> = Vec::new();
    for soft in &out.soft_assertions {
        if !groups.contains(&soft.group) {
            groups.push(soft.group.clone());
        }
    }
    for group in &groups {
        let softs: Vec<_> = out
            .soft_assertions
            .iter()
            .filter(|s| &s.group == group)
            .cloned()
            .collect();
        let integral = softs.iter().all(|s| s.weight.is_integer());
        let mut parts = Vec::new();
        for soft in &softs {
            let (zero, weight) = if integral {
                let z = out.arena.int_const_i64(0);
                let w = out
                    .arena
                    .int_const(soft.weight.as_integer().expect("integral weight"));
                (z, w)
            } else {
                let z = out.arena.real_const(Rat::zero());
                let w = out.arena.real_const(soft.weight.clone());
                (z, w)
            };
            let violation = out
                .arena
                .ite(soft.term, zero, weight)
                .expect("soft assertions are Bool");
            parts.push(violation);
        }
        let total = out.arena.add(parts).expect("homogeneous penalty sum");
        let name = if group.is_empty() {
            None
        } else {
            Some(group.clone())
        };
        out.add_objective(ObjDirection::Minimize, total, false, name)
            .expect("penalty objectives are numeric");
    }
    out.soft_assertions.clear();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smt::{parse_smt2, Op};

    #[test]
    fn no_soft_clauses_is_identity() {
        let s = parse_smt2("(declare-const x Int)(assert (<= 0 x))(minimize x)").unwrap();
        let out = maxsmt_to_pb(&s);
        assert_eq!(out.objectives.len(), 1);
        assert!(out.soft_assertions.is_empty());
    }

    #[test]
    fn soft_clauses_become_a_penalty_objective() {
        let s = parse_smt2(
            "(declare-const a Bool)\
             (assert-soft a :weight 1)\
             (assert-soft (not a) :weight (/ 5 2))",
        )
        .unwrap();
        let out = maxsmt_to_pb(&s);
        assert!(out.soft_assertions.is_empty());
        assert_eq!(out.objectives.len(), 1);
        assert_eq!(out.objectives[0].direction, ObjDirection::Minimize);
        // mixed integer/rational weights force a Real-sorted penalty
        assert_eq!(
            out.arena.sort(out.objectives[0].term),
            crate::smt::Sort::Real
        );
        assert!(matches!(out.arena.node(out.objectives[0].term).op, Op::Add));
    }

    #[test]
    fn groups_become_separate_objectives() {
        let s = parse_smt2(
            "(declare-const a Bool)(declare-const b Bool)\
             (assert-soft a :weight 2 :id g1)\
             (assert-soft b :weight 3 :id g2)\
             (assert-soft (not a) :weight 1 :id g1)",
        )
        .unwrap();
        let out = maxsmt_to_pb(&s);
        assert_eq!(out.objectives.len(), 2);
        assert_eq!(out.objectives[0].name.as_deref(), Some("g1"));
        assert_eq!(out.objectives[1].name.as_deref(), Some("g2"));
    }
}
