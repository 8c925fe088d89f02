//! Constant and alias propagation over FlatZinc models.
//!
//! Fixed variables and pure aliases are substituted away so the encoded
//! problem keeps as few variables as possible. A contradiction between
//! two constants for the same variable is not an error: the result is an
//! equisatisfiable model carrying an explicitly false constraint.

use std::collections::HashMap;

use crate::fzn::{
    FznArg, FznAtom, FznConstraint, FznDomain, FznLit, FznModel, SetVal,
};

/// Union-find over variable names with a constant attached to some roots.
struct Aliases {
    parent: HashMap<String, String>,
    constant: HashMap<String, FznLit>,
    conflict: bool,
}

impl Aliases {
    fn new() -> Self {
        Aliases {
            parent: HashMap::new(),
            constant: HashMap::new(),
            conflict: false,
        }
    }

    fn find(&mut self, name: &str) -> String {
        let mut root = name.to_string();
        while let Some(p) = self.parent.get(&root) {
            root = p.clone();
        }
        // path compression
        let mut cur = name.to_string();
        while cur != root {
            let next = self.parent[&cur].clone();
            self.parent.insert(cur, root.clone());
            cur = next;
        }
        root
    }

    fn union(&mut self, a: &str, b: &str) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        match (self.constant.get(&ra).cloned(), self.constant.get(&rb).cloned()) {
            (Some(ca), Some(cb)) => {
                if !lit_eq(&ca, &cb) {
                    self.conflict = true;
                }
                self.parent.insert(rb, ra);
            }
            (Some(_), None) => {
                self.parent.insert(rb, ra);
            }
            _ => {
                self.parent.insert(ra, rb);
            }
        }
    }

    fn fix(&mut self, name: &str, value: FznLit) {
        let root = self.find(name);
        match self.constant.get(&root) {
            Some(existing) => {
                if !lit_eq(existing, &value) {
                    self.conflict = true;
                }
            }
            None => {
                self.constant.insert(root, value);
            }
        }
    }

    fn value_of(&mut self, name: &str) -> Option<FznLit> {
        let root = self.find(name);
        self.constant.get(&root).cloned()
    }
}

fn lit_eq(a: &FznLit, b: &FznLit) -> bool {
    match (a, b) {
        (FznLit::Set(x), FznLit::Set(y)) => x.same_members(y),
        _ => a == b,
    }
}

/// Returns an equisatisfiable model with fixed variables and pure aliases
/// eliminated. Trivial inconsistencies become an explicit false constraint
/// (`bool_clause([], [])`), never an error.
pub fn propagate_constants_and_aliases(model: &FznModel) -> FznModel {
    let mut aliases = Aliases::new();

    // Assignments on declarations.
    for v in &model.vars {
        match &v.assigned {
            Some(FznAtom::Lit(lit)) => aliases.fix(&v.name, lit.clone()),
            Some(FznAtom::Id(other)) => aliases.union(&v.name, other),
            None => {}
        }
    }
    // Equality constraints between two variables or a variable and a
    // constant.
    let mut consumed = vec![false; model.constraints.len()];
    for (i, c) in model.constraints.iter().enumerate() {
        let eq = matches!(c.name.as_str(), "int_eq" | "bool_eq" | "float_eq" | "set_eq");
        if !eq || c.args.len() != 2 {
            continue;
        }
        match (&c.args[0], &c.args[1]) {
            (FznArg::Atom(FznAtom::Id(a)), FznArg::Atom(FznAtom::Id(b))) => {
                aliases.union(a, b);
                consumed[i] = true;
            }
            (FznArg::Atom(FznAtom::Id(a)), FznArg::Atom(FznAtom::Lit(lit)))
            | (FznArg::Atom(FznAtom::Lit(lit)), FznArg::Atom(FznAtom::Id(a))) => {
                aliases.fix(a, lit.clone());
                consumed[i] = true;
            }
            _ => {}
        }
    }

    // Representatives must survive when referenced by a solve item or an
    // output annotation.
    let mut keep: Vec<String> = Vec::new();
    for goal in &model.solve_items {
        if let Some(FznAtom::Id(name)) = &goal.objective {
            keep.push(name.clone());
        }
    }
    for name in model.output_names() {
        keep.push(name.to_string());
    }

    // Pick a representative per class: a kept name if any, else the first
    // declared member.
    let mut repr: HashMap<String, String> = HashMap::new();
    for v in &model.vars {
        let root = aliases.find(&v.name);
        repr.entry(root).or_insert_with(|| v.name.clone());
    }
    for name in &keep {
        let root = aliases.find(name);
        repr.insert(root, name.clone());
    }

    // Precompute the substitution for every declared variable.
    let mut resolved: HashMap<String, FznAtom> = HashMap::new();
    for v in &model.vars {
        let atom = if let Some(lit) = aliases.value_of(&v.name) {
            FznAtom::Lit(lit)
        } else {
            let root = aliases.find(&v.name);
            FznAtom::Id(repr.get(&root).cloned().unwrap_or_else(|| v.name.clone()))
        };
        resolved.insert(v.name.clone(), atom);
    }
    let resolve = |name: &str| -> FznAtom {
        resolved
            .get(name)
            .cloned()
            .unwrap_or_else(|| FznAtom::Id(name.to_string()))
    };

    // Rebuild variables: intersect domains across each alias class and
    // drop eliminated names.
    let mut out_vars = Vec::new();
    let mut class_domain: HashMap<String, Option<FznDomain>> = HashMap::new();
    let mut conflict = aliases.conflict;
    for v in &model.vars {
        let root = aliases.find(&v.name);
        let entry = class_domain.entry(root).or_insert_with(|| v.domain.clone());
        if let (Some(cur), Some(new)) = (entry.clone(), v.domain.clone()) {
            match intersect_domains(&cur, &new) {
                Some(d) => *entry = Some(d),
                None => conflict = true,
            }
        } else if v.domain.is_some() {
            *entry = v.domain.clone();
        }
    }
    for v in &model.vars {
        let root = aliases.find(&v.name);
        let fixed = aliases.value_of(&v.name);
        // A fixed class whose constant misses the intersected domain is a
        // contradiction even when the variable itself is eliminated.
        let domain = class_domain.get(&root).cloned().unwrap_or(None);
        if let (Some(lit), Some(domain)) = (&fixed, &domain) {
            if !lit_in_domain(lit, domain) {
                conflict = true;
            }
        }
        let is_repr = repr.get(&root).map(|r| r == &v.name).unwrap_or(false);
        if !is_repr {
            continue;
        }
        let kept = keep.contains(&v.name);
        if fixed.is_some() && !kept {
            // fully eliminated
            continue;
        }
        let mut decl = v.clone();
        decl.domain = domain;
        decl.assigned = None;
        out_vars.push(decl);
    }

    // Rewrite constraints.
    let mut out_constraints = Vec::new();
    for (i, c) in model.constraints.iter().enumerate() {
        if consumed[i] {
            continue;
        }
        let args = c
            .args
            .iter()
            .map(|arg| match arg {
                FznArg::Atom(FznAtom::Id(name)) => FznArg::Atom(resolve(name)),
                FznArg::Atom(a) => FznArg::Atom(a.clone()),
                FznArg::Array(elems) => FznArg::Array(
                    elems
                        .iter()
                        .map(|a| match a {
                            FznAtom::Id(name) => resolve(name),
                            lit => lit.clone(),
                        })
                        .collect(),
                ),
            })
            .collect();
        out_constraints.push(FznConstraint {
            name: c.name.clone(),
            args,
            annotations: c.annotations.clone(),
        });
    }

    // Kept-but-fixed variables get their defining constraint back.
    for name in &keep {
        if let Some(lit) = aliases.value_of(name) {
            let builtin = match &lit {
                FznLit::Bool(_) => "bool_eq",
                FznLit::Int(_) => "int_eq",
                FznLit::Float(_) => "float_eq",
                FznLit::Set(_) => "set_eq",
            };
            out_constraints.push(FznConstraint {
                name: builtin.to_string(),
                args: vec![
                    FznArg::Atom(FznAtom::Id(name.clone())),
                    FznArg::Atom(FznAtom::Lit(lit)),
                ],
                annotations: vec![],
            });
        }
    }

    if conflict {
        out_constraints.push(FznConstraint {
            name: "bool_clause".to_string(),
            args: vec![FznArg::Array(vec![]), FznArg::Array(vec![])],
            annotations: vec![],
        });
    }

    // Solve items: a fixed objective variable was kept above, so goals
    // survive unchanged up to representative renaming.
    let solve_items = model
        .solve_items
        .iter()
        .map(|goal| {
            let mut goal = goal.clone();
            if let Some(FznAtom::Id(name)) = &goal.objective {
                if !keep.contains(name) {
                    if let FznAtom::Id(r) = resolve(name) {
                        goal.objective = Some(FznAtom::Id(r));
                    }
                }
            }
            goal
        })
        .collect();

    FznModel {
        params: model.params.clone(),
        arrays: vec![],
        vars: out_vars,
        constraints: out_constraints,
        solve_items,
    }
}

fn lit_in_domain(lit: &FznLit, domain: &FznDomain) -> bool {
    match (lit, domain) {
        (FznLit::Int(v), FznDomain::Int(s)) => s.contains(*v),
        (FznLit::Float(r), FznDomain::Float(lo, hi)) => lo <= r && r <= hi,
        (FznLit::Set(s), FznDomain::SetUniverse(u)) => s.iter().all(|e| u.contains(e)),
        _ => true,
    }
}

fn intersect_domains(a: &FznDomain, b: &FznDomain) -> Option<FznDomain> {
    match (a, b) {
        (FznDomain::Int(x), FznDomain::Int(y)) => {
            let s = intersect_sets(x, y)?;
            Some(FznDomain::Int(s))
        }
        (FznDomain::Float(alo, ahi), FznDomain::Float(blo, bhi)) => {
            let lo = alo.clone().max(blo.clone());
            let hi = ahi.clone().min(bhi.clone());
            (lo <= hi).then_some(FznDomain::Float(lo, hi))
        }
        (FznDomain::SetUniverse(x), FznDomain::SetUniverse(y)) => {
            let s = intersect_sets(x, y)?;
            Some(FznDomain::SetUniverse(s))
        }
        _ => None,
    }
}

fn intersect_sets(a: &SetVal, b: &SetVal) -> Option<SetVal> {
    let out = match (a, b) {
        (SetVal::Range(alo, ahi), SetVal::Range(blo, bhi)) => {
            let lo = *alo.max(blo);
            let hi = *ahi.min(bhi);
            if lo > hi {
                return None;
            }
            SetVal::Range(lo, hi)
        }
        (SetVal::Elems(es), other) | (other, SetVal::Elems(es)) => {
            let filtered: Vec<i64> = es.iter().copied().filter(|&e| other.contains(e)).collect();
            if filtered.is_empty() {
                return None;
            }
            SetVal::from_elems(filtered)
        }
    };
    Some(out)
}

/// True when the model contains the canonical false constraint produced
/// for trivially inconsistent inputs.
pub fn is_trivially_unsat(model: &FznModel) -> bool {
    model.constraints.iter().any(|c| {
        c.name == "bool_clause"
            && c.args.len() == 2
            && c.args.iter().all(|a| a.as_array() == Some(&[][..]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fzn::parse_fzn;

    #[test]
    fn constant_substitution() {
        let m = parse_fzn(
            "var 0..9: x; var 0..9: y; constraint int_eq(x, 5); \
             constraint int_lin_le([1, 1], [x, y], 8); solve satisfy;",
            false,
        )
        .unwrap();
        let p = propagate_constants_and_aliases(&m);
        assert_eq!(p.vars.len(), 1, "x is eliminated: {:?}", p.vars);
        let lin = p.constraints.iter().find(|c| c.name == "int_lin_le").unwrap();
        let vars = lin.args[1].as_array().unwrap();
        assert!(vars.contains(&FznAtom::int(5)));
    }

    #[test]
    fn alias_chain_collapses() {
        let m = parse_fzn(
            "var 0..9: x; var 0..9: y; var 0..5: z; \
             constraint int_eq(x, y); constraint int_eq(y, z); \
             constraint int_lin_le([1], [x], 4); solve satisfy;",
            false,
        )
        .unwrap();
        let p = propagate_constants_and_aliases(&m);
        assert_eq!(p.vars.len(), 1);
        // intersected domain 0..5
        assert_eq!(
            p.vars[0].domain,
            Some(FznDomain::Int(SetVal::Range(0, 5)))
        );
    }

    #[test]
    fn conflicting_constants_mark_unsat() {
        let m = parse_fzn(
            "var 0..9: x; constraint int_eq(x, 3); constraint int_eq(x, 4); solve satisfy;",
            false,
        )
        .unwrap();
        let p = propagate_constants_and_aliases(&m);
        assert!(is_trivially_unsat(&p));
    }

    #[test]
    fn constant_outside_domain_marks_unsat() {
        let m = parse_fzn(
            "var 0..2: x; constraint int_eq(x, 7); solve satisfy;",
            false,
        )
        .unwrap();
        let p = propagate_constants_and_aliases(&m);
        assert!(is_trivially_unsat(&p));
    }

    #[test]
    fn objective_variable_survives_fixing() {
        let m = parse_fzn(
            "var 0..9: x; constraint int_eq(x, 5); solve minimize x;",
            false,
        )
        .unwrap();
        let p = propagate_constants_and_aliases(&m);
        assert_eq!(p.vars.len(), 1);
        assert!(p
            .constraints
            .iter()
            .any(|c| c.name == "int_eq"), "fixing constraint restored: {:?}", p.constraints);
        assert_eq!(
            p.solve_items[0].objective,
            Some(FznAtom::Id("x".to_string()))
        );
    }
}
