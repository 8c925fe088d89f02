//! Recognition of pseudo-Boolean sums hiding in integer linear
//! constraints.
//!
//! The standard flattener turns `Σ wᵢ·Aᵢ` over Booleans into a linear sum
//! over fresh 0/1 integers tied to the Booleans by `bool2int`. This pass
//! finds those sums so the encoder can replace the naive arithmetic
//! encoding with cardinality networks.

use std::collections::HashMap;

use crate::cardnet::PbRelation;
use crate::fzn::{FznAtom, FznDomain, FznLit, FznModel};

/// One recognized pseudo-Boolean constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct PbMarker {
    pub constraint_index: usize,
    /// (Boolean variable name, weight).
    pub terms: Vec<(String, i64)>,
    pub relation: PbRelation,
    pub bound: i64,
}

/// Markers for every `int_lin_eq`/`int_lin_le`/`bool_lin_*` constraint
/// whose integer arguments are all 0/1 images of Booleans (or constants).
/// Mixed sums with genuine integer variables are left alone.
pub fn detect_pb(model: &FznModel) -> Vec<PbMarker> {
    // Map from 0/1 integer image to its Boolean preimage.
    let mut image: HashMap<&str, &str> = HashMap::new();
    for c in &model.constraints {
        if c.name != "bool2int" {
            continue;
        }
        let (Some(b), Some(x)) = (
            c.args[0].as_atom().and_then(|a| a.as_id()),
            c.args[1].as_atom().and_then(|a| a.as_id()),
        ) else {
            continue;
        };
        // Only rewrite when the image's domain adds nothing beyond {0,1}.
        let zero_one = match &model.var(x).and_then(|v| v.domain.clone()) {
            None => true,
            Some(FznDomain::Int(s)) => s.contains(0) && s.contains(1),
            _ => false,
        };
        if zero_one {
            image.entry(x).or_insert(b);
        }
    }

    let mut markers = Vec::new();
    for (i, c) in model.constraints.iter().enumerate() {
        let (relation, is_bool_lin) = match c.name.as_str() {
            "int_lin_eq" => (PbRelation::Eq, false),
            "int_lin_le" => (PbRelation::Le, false),
            "bool_lin_eq" => (PbRelation::Eq, true),
            "bool_lin_le" => (PbRelation::Le, true),
            _ => continue,
        };
        let Some(coeffs) = c.args[0].as_array() else {
            continue;
        };
        let Some(vars) = c.args[1].as_array() else {
            continue;
        };
        let bound_atom = c.args[2].as_atom();
        let mut bound = match bound_atom {
            Some(FznAtom::Lit(FznLit::Int(v))) => *v,
            // bool_lin_eq takes a var int sum; only a constant sum is a
            // closed pseudo-Boolean constraint.
            _ => continue,
        };
        let mut terms = Vec::new();
        let mut ok = true;
        for (coeff, var) in coeffs.iter().zip(vars) {
            let FznAtom::Lit(FznLit::Int(w)) = coeff else {
                ok = false;
                break;
            };
            match var {
                FznAtom::Id(name) if is_bool_lin => terms.push((name.clone(), *w)),
                FznAtom::Id(name) => match image.get(name.as_str()) {
                    Some(b) => terms.push((b.to_string(), *w)),
                    None => {
                        ok = false;
                        break;
                    }
                },
                FznAtom::Lit(FznLit::Int(v)) => bound -= w * v,
                FznAtom::Lit(FznLit::Bool(b)) if is_bool_lin => {
                    if *b {
                        bound -= w;
                    }
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && !terms.is_empty() && terms.iter().all(|(_, w)| *w != 0) {
            markers.push(PbMarker {
                constraint_index: i,
                terms,
                relation,
                bound,
            });
        }
    }
    markers
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fzn::parse_fzn;

    #[test]
    fn unit_weight_sum_is_detected() {
        let m = parse_fzn(
            "var bool: b1; var bool: b2; var bool: b3; \
             var 0..1: x1; var 0..1: x2; var 0..1: x3; \
             constraint bool2int(b1, x1); constraint bool2int(b2, x2); \
             constraint bool2int(b3, x3); \
             constraint int_lin_le([1, 1, 1], [x1, x2, x3], 2); solve satisfy;",
            false,
        )
        .unwrap();
        let markers = detect_pb(&m);
        assert_eq!(markers.len(), 1);
        assert_eq!(markers[0].relation, PbRelation::Le);
        assert_eq!(markers[0].bound, 2);
        assert_eq!(
            markers[0].terms,
            vec![("b1".to_string(), 1), ("b2".to_string(), 1), ("b3".to_string(), 1)]
        );
    }

    #[test]
    fn mixed_sum_is_not_rewritten() {
        let m = parse_fzn(
            "var bool: b; var 0..1: x; var 0..9: y; \
             constraint bool2int(b, x); \
             constraint int_lin_eq([2, 1], [x, y], 5); solve satisfy;",
            false,
        )
        .unwrap();
        assert!(detect_pb(&m).is_empty());
    }

    #[test]
    fn bool_lin_is_directly_pb() {
        let m = parse_fzn(
            "var bool: a; var bool: b; \
             constraint bool_lin_le([2, 3], [a, b], 4); solve satisfy;",
            false,
        )
        .unwrap();
        let markers = detect_pb(&m);
        assert_eq!(markers.len(), 1);
        assert_eq!(markers[0].terms.len(), 2);
    }

    #[test]
    fn constant_images_fold_into_bound() {
        let m = parse_fzn(
            "var bool: b; var 0..1: x; constraint bool2int(b, x); \
             constraint int_lin_le([1, 5], [x, 1], 6); solve satisfy;",
            false,
        )
        .unwrap();
        let markers = detect_pb(&m);
        assert_eq!(markers.len(), 1);
        assert_eq!(markers[0].bound, 1);
    }
}
