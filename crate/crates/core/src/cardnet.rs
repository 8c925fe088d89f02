//! Cardinality (sorting/merging) networks over Boolean literals, and the
//! pseudo-Boolean encodings built on them.
//!
//! The construction is the merge-sort style network: inputs are padded to
//! a power of two with constant-false wires, sorted by an odd-even merge
//! sorter built from two-sided 2-comparators, and then truncated to the
//! first k+1 outputs by a backwards cone-of-influence sweep. Constants
//! propagate through comparators, so padding costs nothing.
//!
//! Every comparator output is functionally defined by its three clauses,
//! which gives the two key properties: for any total input assignment
//! there is exactly one consistent extension to the auxiliary variables,
//! and in it the j-th output is true iff at least j inputs are true.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

/// A Boolean literal over a numeric variable id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub var: u32,
    pub neg: bool,
}

impl Lit {
    pub fn pos(var: u32) -> Self {
        Lit { var, neg: false }
    }

    pub fn negated(self) -> Self {
        Lit {
            var: self.var,
            neg: !self.neg,
        }
    }
}

pub type Clause = Vec<Lit>;

/// A circuit wire: a literal or a constant folded through the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wire {
    Const(bool),
    Lit(Lit),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CardnetError {
    #[error("empty input list")]
    EmptyInputs,
    #[error("count bound {k} out of range for {n} inputs")]
    KOutOfRange { k: usize, n: usize },
    #[error("zero weight on a pseudo-Boolean term")]
    ZeroWeight,
}

/// Output of [`build_cardinality_network`].
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkResult {
    /// First `min(k+1, n)` sorted outputs; output j (1-based) is true iff
    /// at least j inputs are true.
    pub outputs: Vec<Wire>,
    pub clauses: Vec<Clause>,
    pub aux_variable_count: u32,
    /// First variable id not used by inputs or auxiliaries.
    pub next_free_var: u32,
}

/// Definition record for one comparator output, used for pruning.
struct Def {
    clauses: Vec<Clause>,
    deps: Vec<u32>,
}

struct NetBuilder {
    next_var: u32,
    defs: BTreeMap<u32, Def>,
}

impl NetBuilder {
    fn fresh(&mut self) -> u32 {
        let v = self.next_var;
        self.next_var += 1;
        v
    }

    /// Two-sided comparator: returns `(a ∨ b, a ∧ b)`.
    fn comparator(&mut self, a: Wire, b: Wire) -> (Wire, Wire) {
        use Wire::{Const, Lit as WLit};
        match (a, b) {
            (Const(false), w) | (w, Const(false)) => (w, Const(false)),
            (Const(true), w) | (w, Const(true)) => (Const(true), w),
            (WLit(x), WLit(y)) if x == y => (WLit(x), WLit(x)),
            (WLit(x), WLit(y)) if x == y.negated() => (Const(true), Const(false)),
            (WLit(x), WLit(y)) => {
                let or_v = Lit::pos(self.fresh());
                let and_v = Lit::pos(self.fresh());
                self.defs.insert(
                    or_v.var,
                    Def {
                        clauses: vec![
                            vec![x.negated(), or_v],
                            vec![y.negated(), or_v],
                            vec![x, y, or_v.negated()],
                        ],
                        deps: vec![x.var, y.var],
                    },
                );
                self.defs.insert(
                    and_v.var,
                    Def {
                        clauses: vec![
                            vec![and_v.negated(), x],
                            vec![and_v.negated(), y],
                            vec![x.negated(), y.negated(), and_v],
                        ],
                        deps: vec![x.var, y.var],
                    },
                );
                (WLit(or_v), WLit(and_v))
            }
        }
    }

    /// Batcher odd-even merge of two sorted runs of equal power-of-two
    /// length. Sorted means descending truth: position j true iff the run
    /// counts at least j true wires.
    fn merge(&mut self, a: &[Wire], b: &[Wire]) -> Vec<Wire> {
        debug_assert_eq!(a.len(), b.len());
        if a.len() == 1 {
            let (hi, lo) = self.comparator(a[0], b[0]);
            return vec![hi, lo];
        }
        let odd = |xs: &[Wire]| -> Vec<Wire> { xs.iter().copied().step_by(2).collect() };
        let even = |xs: &[Wire]| -> Vec<Wire> { xs.iter().copied().skip(1).step_by(2).collect() };
        let d = self.merge(&odd(a), &odd(b));
        let e = self.merge(&even(a), &even(b));
        let n = a.len();
        let mut out = Vec::with_capacity(2 * n);
        out.push(d[0]);
        for i in 1..n {
            let (hi, lo) = self.comparator(d[i], e[i - 1]);
            out.push(hi);
            out.push(lo);
        }
        out.push(e[n - 1]);
        out
    }

    fn sort(&mut self, xs: &[Wire]) -> Vec<Wire> {
        if xs.len() == 1 {
            return xs.to_vec();
        }
        debug_assert!(xs.len().is_power_of_two());
        let mid = xs.len() / 2;
        let left = self.sort(&xs[..mid]);
        let right = self.sort(&xs[mid..]);
        self.merge(&left, &right)
    }
}

/// Builds a sorting network over `inputs` truncated to its first
/// `min(k+1, n)` outputs, enough to express any of ≤k / ≥k / =k.
pub fn build_cardinality_network(
    inputs: &[Lit],
    k: usize,
    first_fresh_var: u32,
) -> Result<NetworkResult, CardnetError> {
    let n = inputs.len();
    if n == 0 {
        return Err(CardnetError::EmptyInputs);
    }
    if k > n {
        return Err(CardnetError::KOutOfRange { k, n });
    }
    let mut builder = NetBuilder {
        next_var: first_fresh_var,
        defs: BTreeMap::new(),
    };
    let padded = n.next_power_of_two();
    let mut wires: Vec<Wire> = inputs.iter().map(|&l| Wire::Lit(l)).collect();
    wires.resize(padded, Wire::Const(false));
    let sorted = builder.sort(&wires);
    let keep = (k + 1).min(n);
    let outputs: Vec<Wire> = sorted[..keep].to_vec();

    // Cone of influence of the kept outputs: keep only the auxiliary
    // definitions the outputs transitively depend on.
    let mut needed: Vec<u32> = outputs
        .iter()
        .filter_map(|w| match w {
            Wire::Lit(l) => Some(l.var),
            Wire::Const(_) => None,
        })
        .collect();
    let mut reached: HashSet<u32> = HashSet::new();
    while let Some(v) = needed.pop() {
        if !reached.insert(v) {
            continue;
        }
        if let Some(def) = builder.defs.get(&v) {
            needed.extend(def.deps.iter().copied());
        }
    }
    // Renumber the surviving auxiliaries densely, in allocation order.
    let mut remap: HashMap<u32, u32> = HashMap::new();
    let mut next = first_fresh_var;
    for (&v, _) in builder.defs.iter() {
        if reached.contains(&v) {
            remap.insert(v, next);
            next += 1;
        }
    }
    let fix = |l: Lit| -> Lit {
        match remap.get(&l.var) {
            Some(&v) => Lit { var: v, neg: l.neg },
            None => l,
        }
    };
    let mut clauses = Vec::new();
    for (&v, def) in builder.defs.iter() {
        if reached.contains(&v) {
            for clause in &def.clauses {
                clauses.push(clause.iter().map(|&l| fix(l)).collect());
            }
        }
    }
    let outputs = outputs
        .into_iter()
        .map(|w| match w {
            Wire::Lit(l) => Wire::Lit(fix(l)),
            c => c,
        })
        .collect();
    Ok(NetworkResult {
        outputs,
        clauses,
        aux_variable_count: next - first_fresh_var,
        next_free_var: next,
    })
}

/// Clause set plus bookkeeping returned by the `encode_*` functions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CardEncoding {
    pub clauses: Vec<Clause>,
    pub aux_variable_count: u32,
    pub next_free_var: u32,
}

fn force_true(wire: Wire, clauses: &mut Vec<Clause>) {
    match wire {
        Wire::Const(true) => {}
        Wire::Const(false) => clauses.push(vec![]),
        Wire::Lit(l) => clauses.push(vec![l]),
    }
}

fn force_false(wire: Wire, clauses: &mut Vec<Clause>) {
    match wire {
        Wire::Const(false) => {}
        Wire::Const(true) => clauses.push(vec![]),
        Wire::Lit(l) => clauses.push(vec![l.negated()]),
    }
}

/// At most `k` of `inputs` are true.
pub fn encode_atmost_k(
    inputs: &[Lit],
    k: usize,
    first_fresh_var: u32,
) -> Result<CardEncoding, CardnetError> {
    let n = inputs.len();
    if n == 0 {
        return Err(CardnetError::EmptyInputs);
    }
    if k > n {
        return Err(CardnetError::KOutOfRange { k, n });
    }
    if k == n {
        return Ok(CardEncoding {
            next_free_var: first_fresh_var,
            ..Default::default()
        });
    }
    if k == 0 {
        let mut seen = HashSet::new();
        let mut clauses = Vec::new();
        for &l in inputs {
            if seen.insert(l) {
                clauses.push(vec![l.negated()]);
            }
        }
        return Ok(CardEncoding {
            clauses,
            aux_variable_count: 0,
            next_free_var: first_fresh_var,
        });
    }
    let net = build_cardinality_network(inputs, k, first_fresh_var)?;
    let mut clauses = net.clauses;
    force_false(net.outputs[k], &mut clauses);
    Ok(CardEncoding {
        clauses,
        aux_variable_count: net.aux_variable_count,
        next_free_var: net.next_free_var,
    })
}

/// At least `k` of `inputs` are true.
pub fn encode_atleast_k(
    inputs: &[Lit],
    k: usize,
    first_fresh_var: u32,
) -> Result<CardEncoding, CardnetError> {
    let n = inputs.len();
    if n == 0 {
        return Err(CardnetError::EmptyInputs);
    }
    if k > n {
        return Err(CardnetError::KOutOfRange { k, n });
    }
    if k == 0 {
        return Ok(CardEncoding {
            next_free_var: first_fresh_var,
            ..Default::default()
        });
    }
    let net = build_cardinality_network(inputs, k - 1, first_fresh_var)?;
    let mut clauses = net.clauses;
    force_true(net.outputs[k - 1], &mut clauses);
    Ok(CardEncoding {
        clauses,
        aux_variable_count: net.aux_variable_count,
        next_free_var: net.next_free_var,
    })
}

/// Exactly `k` of `inputs` are true.
pub fn encode_exactly_k(
    inputs: &[Lit],
    k: usize,
    first_fresh_var: u32,
) -> Result<CardEncoding, CardnetError> {
    let n = inputs.len();
    if n == 0 {
        return Err(CardnetError::EmptyInputs);
    }
    if k > n {
        return Err(CardnetError::KOutOfRange { k, n });
    }
    let net = build_cardinality_network(inputs, k, first_fresh_var)?;
    let mut clauses = net.clauses;
    if k >= 1 {
        force_true(net.outputs[k - 1], &mut clauses);
    }
    if k < n {
        force_false(net.outputs[k], &mut clauses);
    }
    Ok(CardEncoding {
        clauses,
        aux_variable_count: net.aux_variable_count,
        next_free_var: net.next_free_var,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbRelation {
    Le,
    Ge,
    Eq,
}

/// Arithmetic side condition of a multi-weight pseudo-Boolean encoding:
/// `Σ_g weight_g · (number of true outputs in group g) ⋈ bound`.
///
/// Because each group's outputs come from a sorting network over that
/// group's literals, the number of true outputs equals the number of true
/// literals in the group.
#[derive(Debug, Clone, PartialEq)]
pub struct ArithLink {
    pub groups: Vec<(i64, Vec<Wire>)>,
    pub relation: PbRelation,
    pub bound: i128,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PbEncoding {
    pub clauses: Vec<Clause>,
    /// Present only when several distinct weights are involved.
    pub link: Option<ArithLink>,
    pub aux_variable_count: u32,
    pub next_free_var: u32,
}

/// Encodes `Σ weight_i · lit_i ⋈ bound`.
///
/// Duplicate literals are merged by summing weights, complementary pairs
/// are folded into the bound, and negative weights are normalized away by
/// flipping polarity. Equal-weight groups each get one cardinality
/// network; a single surviving group reduces to pure clauses, several
/// groups additionally produce an [`ArithLink`].
pub fn encode_pb_sum(
    terms: &[(Lit, i64)],
    relation: PbRelation,
    bound: i64,
    first_fresh_var: u32,
) -> Result<PbEncoding, CardnetError> {
    if terms.iter().any(|(_, w)| *w == 0) {
        return Err(CardnetError::ZeroWeight);
    }
    // Merge duplicate literals: weight per (var, polarity).
    let mut by_var: BTreeMap<u32, i128> = BTreeMap::new();
    let mut shift: i128 = 0;
    for &(lit, w) in terms {
        // Normalize to the positive-polarity variable:
        // w·(¬x) = w − w·x.
        let w = w as i128;
        if lit.neg {
            shift += w;
            *by_var.entry(lit.var).or_insert(0) -= w;
        } else {
            *by_var.entry(lit.var).or_insert(0) += w;
        }
    }
    let mut bound = bound as i128 - shift;
    // Now make all weights positive by flipping to negated literals.
    let mut positives: Vec<(Lit, i128)> = Vec::new();
    for (var, w) in by_var {
        if w > 0 {
            positives.push((Lit::pos(var), w));
        } else if w < 0 {
            // w·x = w + (−w)·(¬x)
            bound -= w;
            positives.push((Lit::pos(var).negated(), -w));
        }
    }
    let total: i128 = positives.iter().map(|(_, w)| w).sum();

    let unsat = PbEncoding {
        clauses: vec![vec![]],
        link: None,
        aux_variable_count: 0,
        next_free_var: first_fresh_var,
    };
    let trivial = PbEncoding {
        clauses: vec![],
        link: None,
        aux_variable_count: 0,
        next_free_var: first_fresh_var,
    };
    match relation {
        PbRelation::Le => {
            if bound < 0 {
                return Ok(unsat);
            }
            if bound >= total {
                return Ok(trivial);
            }
        }
        PbRelation::Ge => {
            if bound <= 0 {
                return Ok(trivial);
            }
            if bound > total {
                return Ok(unsat);
            }
        }
        PbRelation::Eq => {
            if bound < 0 || bound > total {
                return Ok(unsat);
            }
        }
    }

    // Group literals by weight (ascending for determinism).
    let mut groups: BTreeMap<i128, Vec<Lit>> = BTreeMap::new();
    for (lit, w) in positives {
        groups.entry(w).or_default().push(lit);
    }

    if groups.len() == 1 {
        let (&w, lits) = groups.iter().next().unwrap();
        let n = lits.len();
        return match relation {
            PbRelation::Le => {
                // count ≤ floor(bound / w)
                let k = (bound / w) as usize;
                let k = k.min(n);
                let enc = encode_atmost_k(lits, k, first_fresh_var)?;
                Ok(PbEncoding {
                    clauses: enc.clauses,
                    link: None,
                    aux_variable_count: enc.aux_variable_count,
                    next_free_var: enc.next_free_var,
                })
            }
            PbRelation::Ge => {
                // count ≥ ceil(bound / w)
                let k = (bound + w - 1) / w;
                if k as usize > n {
                    return Ok(unsat);
                }
                let enc = encode_atleast_k(lits, k as usize, first_fresh_var)?;
                Ok(PbEncoding {
                    clauses: enc.clauses,
                    link: None,
                    aux_variable_count: enc.aux_variable_count,
                    next_free_var: enc.next_free_var,
                })
            }
            PbRelation::Eq => {
                if bound % w != 0 {
                    return Ok(unsat);
                }
                let k = (bound / w) as usize;
                if k > n {
                    return Ok(unsat);
                }
                let enc = encode_exactly_k(lits, k, first_fresh_var)?;
                Ok(PbEncoding {
                    clauses: enc.clauses,
                    link: None,
                    aux_variable_count: enc.aux_variable_count,
                    next_free_var: enc.next_free_var,
                })
            }
        };
    }

    // Several weights: one full sorting network per group, related to the
    // bound by a small integer-linear side condition over the counts.
    let mut clauses = Vec::new();
    let mut next = first_fresh_var;
    let mut aux = 0;
    let mut link_groups = Vec::new();
    for (&w, lits) in groups.iter() {
        let net = build_cardinality_network(lits, lits.len(), next)?;
        clauses.extend(net.clauses);
        aux += net.aux_variable_count;
        next = net.next_free_var;
        link_groups.push((w as i64, net.outputs));
    }
    Ok(PbEncoding {
        clauses,
        link: Some(ArithLink {
            groups: link_groups,
            relation,
            bound,
        }),
        aux_variable_count: aux,
        next_free_var: next,
    })
}

/// Reference evaluation helpers, independent of the network construction.
///
/// The extension of a total input assignment is computed by plain unit
/// propagation over the clause set; comparator clauses are closed under
/// it, so the result is total whenever an extension exists.
pub mod check {
    use super::{ArithLink, Clause, Lit, PbRelation, Wire};
    use std::collections::HashMap;

    #[derive(Debug, Clone, PartialEq)]
    pub enum Propagation {
        /// All variables forced, all clauses satisfied.
        Total(HashMap<u32, bool>),
        Conflict,
        /// Fixpoint reached with some variable still unassigned.
        Stuck,
    }

    pub fn unit_propagate(clauses: &[Clause], inputs: &HashMap<u32, bool>) -> Propagation {
        let mut assign = inputs.clone();
        let mut vars: Vec<u32> = clauses
            .iter()
            .flatten()
            .map(|l| l.var)
            .chain(inputs.keys().copied())
            .collect();
        vars.sort_unstable();
        vars.dedup();
        loop {
            let mut changed = false;
            for clause in clauses {
                if clause.is_empty() {
                    return Propagation::Conflict;
                }
                let mut unassigned: Option<Lit> = None;
                let mut satisfied = false;
                let mut unassigned_count = 0;
                for &lit in clause {
                    match assign.get(&lit.var) {
                        Some(&v) => {
                            if v != lit.neg {
                                satisfied = true;
                                break;
                            }
                        }
                        None => {
                            unassigned_count += 1;
                            unassigned = Some(lit);
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match unassigned_count {
                    0 => return Propagation::Conflict,
                    1 => {
                        let lit = unassigned.unwrap();
                        assign.insert(lit.var, !lit.neg);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        if vars.iter().all(|v| assign.contains_key(v)) {
            Propagation::Total(assign)
        } else {
            Propagation::Stuck
        }
    }

    pub fn eval_wire(wire: Wire, assign: &HashMap<u32, bool>) -> bool {
        match wire {
            Wire::Const(b) => b,
            Wire::Lit(l) => assign[&l.var] != l.neg,
        }
    }

    pub fn eval_link(link: &ArithLink, assign: &HashMap<u32, bool>) -> bool {
        let sum: i128 = link
            .groups
            .iter()
            .map(|(w, outs)| {
                let count = outs.iter().filter(|&&o| eval_wire(o, assign)).count() as i128;
                *w as i128 * count
            })
            .sum();
        match link.relation {
            PbRelation::Le => sum <= link.bound,
            PbRelation::Ge => sum >= link.bound,
            PbRelation::Eq => sum == link.bound,
        }
    }

    /// Does some extension of `inputs` satisfy `clauses` (and `link`)?
    pub fn satisfiable_extension(
        clauses: &[Clause],
        link: Option<&ArithLink>,
        inputs: &HashMap<u32, bool>,
    ) -> bool {
        match unit_propagate(clauses, inputs) {
            Propagation::Conflict => false,
            Propagation::Total(assign) => link.is_none_or(|l| eval_link(l, &assign)),
            Propagation::Stuck => {
                panic!("propagation stuck: encoding is not closed under unit propagation")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::check::*;
    use super::*;
    use std::collections::HashMap;

    fn lits(n: u32) -> Vec<Lit> {
        (0..n).map(Lit::pos).collect()
    }

    fn assignment(n: u32, mask: u32) -> HashMap<u32, bool> {
        (0..n).map(|i| (i, mask & (1 << i) != 0)).collect()
    }

    #[test]
    fn two_input_comparator_base_case() {
        let net = build_cardinality_network(&lits(2), 2, 2).unwrap();
        assert_eq!(net.outputs.len(), 2);
        assert_eq!(net.aux_variable_count, 2);
        assert_eq!(net.clauses.len(), 6);
        for mask in 0..4u32 {
            let inputs = assignment(2, mask);
            let count = mask.count_ones();
            match unit_propagate(&net.clauses, &inputs) {
                Propagation::Total(assign) => {
                    assert_eq!(eval_wire(net.outputs[0], &assign), count >= 1);
                    assert_eq!(eval_wire(net.outputs[1], &assign), count >= 2);
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn outputs_count_truth_exhaustively() {
        // Networks of every size/bound up to 6 inputs, all assignments.
        for n in 1..=6u32 {
            for k in 0..=n as usize {
                let net = build_cardinality_network(&lits(n), k, n).unwrap();
                assert_eq!(net.outputs.len(), (k + 1).min(n as usize));
                for mask in 0..(1u32 << n) {
                    let inputs = assignment(n, mask);
                    let count = mask.count_ones() as usize;
                    match unit_propagate(&net.clauses, &inputs) {
                        Propagation::Total(assign) => {
                            for (j, &out) in net.outputs.iter().enumerate() {
                                assert_eq!(
                                    eval_wire(out, &assign),
                                    count >= j + 1,
                                    "n={n} k={k} mask={mask:b} output {j}"
                                );
                            }
                            // sortedness
                            let vals: Vec<bool> =
                                net.outputs.iter().map(|&o| eval_wire(o, &assign)).collect();
                            assert!(vals.windows(2).all(|w| w[0] >= w[1]));
                        }
                        other => panic!("unexpected {other:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn extension_is_unique_on_small_networks() {
        // Enumerate all aux assignments and count models per input pattern.
        for n in [2u32, 3, 4] {
            let net = build_cardinality_network(&lits(n), n as usize, n).unwrap();
            let aux = net.aux_variable_count;
            assert!(aux <= 14, "keep the exhaustive check cheap");
            for mask in 0..(1u32 << n) {
                let mut models = 0;
                for aux_mask in 0..(1u64 << aux) {
                    let mut assign = assignment(n, mask);
                    for i in 0..aux {
                        assign.insert(n + i, aux_mask & (1 << i) != 0);
                    }
                    let ok = net.clauses.iter().all(|clause| {
                        clause.iter().any(|l| assign[&l.var] != l.neg)
                    });
                    if ok {
                        models += 1;
                    }
                }
                assert_eq!(models, 1, "n={n} mask={mask:b}");
            }
        }
    }

    #[test]
    fn k_out_of_range() {
        assert!(matches!(
            build_cardinality_network(&lits(3), 4, 3),
            Err(CardnetError::KOutOfRange { .. })
        ));
        assert!(matches!(
            build_cardinality_network(&[], 0, 0),
            Err(CardnetError::EmptyInputs)
        ));
    }

    #[test]
    fn atmost_zero_forces_all_false() {
        let enc = encode_atmost_k(&lits(3), 0, 3).unwrap();
        assert_eq!(enc.clauses.len(), 3);
        assert!(enc.clauses.iter().all(|c| c.len() == 1 && c[0].neg));
    }

    #[test]
    fn atleast_n_forces_all_true() {
        let enc = encode_atleast_k(&lits(3), 3, 3).unwrap();
        for mask in 0..8u32 {
            let ok = satisfiable_extension(&enc.clauses, None, &assignment(3, mask));
            assert_eq!(ok, mask == 0b111, "mask={mask:b}");
        }
    }

    #[test]
    fn atmost_one_of_three() {
        let enc = encode_atmost_k(&lits(3), 1, 3).unwrap();
        for mask in 0..8u32 {
            let ok = satisfiable_extension(&enc.clauses, None, &assignment(3, mask));
            assert_eq!(ok, mask.count_ones() <= 1, "mask={mask:b}");
        }
    }

    #[test]
    fn cardinality_encodings_match_counting() {
        for n in 1..=7u32 {
            for k in 0..=n as usize {
                let atmost = encode_atmost_k(&lits(n), k, n).unwrap();
                let atleast = encode_atleast_k(&lits(n), k, n).unwrap();
                let exactly = encode_exactly_k(&lits(n), k, n).unwrap();
                for mask in 0..(1u32 << n) {
                    let m = assignment(n, mask);
                    let count = mask.count_ones() as usize;
                    assert_eq!(
                        satisfiable_extension(&atmost.clauses, None, &m),
                        count <= k,
                        "atmost n={n} k={k} mask={mask:b}"
                    );
                    assert_eq!(
                        satisfiable_extension(&atleast.clauses, None, &m),
                        count >= k,
                        "atleast n={n} k={k} mask={mask:b}"
                    );
                    assert_eq!(
                        satisfiable_extension(&exactly.clauses, None, &m),
                        count == k,
                        "exactly n={n} k={k} mask={mask:b}"
                    );
                }
            }
        }
    }

    #[test]
    fn unit_weight_pb_reduces_to_atmost() {
        let terms: Vec<(Lit, i64)> = lits(4).into_iter().map(|l| (l, 1)).collect();
        let pb = encode_pb_sum(&terms, PbRelation::Le, 2, 4).unwrap();
        let atmost = encode_atmost_k(&lits(4), 2, 4).unwrap();
        assert!(pb.link.is_none());
        assert_eq!(pb.clauses, atmost.clauses);
    }

    #[test]
    fn single_literal_overweight_forces_false() {
        // 5·a ≤ 4 forces a false.
        let pb = encode_pb_sum(&[(Lit::pos(0), 5)], PbRelation::Le, 4, 1).unwrap();
        assert!(satisfiable_extension(&pb.clauses, pb.link.as_ref(), &assignment(1, 0)));
        assert!(!satisfiable_extension(&pb.clauses, pb.link.as_ref(), &assignment(1, 1)));
    }

    #[test]
    fn weighted_pb_matches_arithmetic() {
        let weights = [2i64, 2, 3, 3, 3];
        let terms: Vec<(Lit, i64)> = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| (Lit::pos(i as u32), w))
            .collect();
        for rel in [PbRelation::Le, PbRelation::Ge, PbRelation::Eq] {
            for bound in -1..=14i64 {
                let pb = encode_pb_sum(&terms, rel, bound, 5).unwrap();
                for mask in 0..32u32 {
                    let m = assignment(5, mask);
                    let sum: i64 = weights
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, &w)| w)
                        .sum();
                    let expected = match rel {
                        PbRelation::Le => sum <= bound,
                        PbRelation::Ge => sum >= bound,
                        PbRelation::Eq => sum == bound,
                    };
                    assert_eq!(
                        satisfiable_extension(&pb.clauses, pb.link.as_ref(), &m),
                        expected,
                        "rel={rel:?} bound={bound} mask={mask:b}"
                    );
                }
            }
        }
    }

    #[test]
    fn normalization_of_duplicates_and_negations() {
        // 2·a + 3·a = 5·a; and w1·a + w2·(¬a) folds into the bound.
        let a = Lit::pos(0);
        let pb = encode_pb_sum(&[(a, 2), (a, 3), (a.negated(), 4)], PbRelation::Le, 5, 1).unwrap();
        // value(a=T) = 5, value(a=F) = 4; both ≤ 5
        assert!(satisfiable_extension(&pb.clauses, pb.link.as_ref(), &assignment(1, 1)));
        assert!(satisfiable_extension(&pb.clauses, pb.link.as_ref(), &assignment(1, 0)));
        let pb = encode_pb_sum(&[(a, 2), (a, 3), (a.negated(), 4)], PbRelation::Le, 4, 1).unwrap();
        assert!(!satisfiable_extension(&pb.clauses, pb.link.as_ref(), &assignment(1, 1)));
        assert!(satisfiable_extension(&pb.clauses, pb.link.as_ref(), &assignment(1, 0)));
    }

    #[test]
    fn negative_weights() {
        // -2·a + 3·b ≥ 1
        let terms = [(Lit::pos(0), -2i64), (Lit::pos(1), 3)];
        let pb = encode_pb_sum(&terms, PbRelation::Ge, 1, 2).unwrap();
        for mask in 0..4u32 {
            let a = mask & 1 != 0;
            let b = mask & 2 != 0;
            let sum = -2 * a as i64 + 3 * b as i64;
            assert_eq!(
                satisfiable_extension(&pb.clauses, pb.link.as_ref(), &assignment(2, mask)),
                sum >= 1,
                "mask={mask:b}"
            );
        }
    }

    #[test]
    fn zero_weight_rejected() {
        assert_eq!(
            encode_pb_sum(&[(Lit::pos(0), 0)], PbRelation::Le, 1, 1),
            Err(CardnetError::ZeroWeight)
        );
    }

    #[test]
    fn deterministic_construction() {
        let a = build_cardinality_network(&lits(9), 4, 9).unwrap();
        let b = build_cardinality_network(&lits(9), 4, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn growth_stays_tame() {
        // Doubling n for fixed k should grow the clause count roughly
        // linearly; no exact constant is asserted.
        let k = 4;
        let mut prev: Option<usize> = None;
        for n in [8u32, 16, 32, 64, 128, 256] {
            let net = build_cardinality_network(&lits(n), k, n).unwrap();
            let c = net.clauses.len();
            if let Some(p) = prev {
                assert!(
                    c <= 3 * p,
                    "clause growth from {p} to {c} when doubling n to {n}"
                );
            }
            let bound = 40 * n as usize * 9 + 60; // C·n·log²(k+1) with log²(5)≈5.4, generous C
            assert!(c <= bound, "n={n}: {c} clauses exceeds bound {bound}");
            prev = Some(c);
        }
        // Monotone in k for fixed n: deeper truncation keeps fewer clauses.
        let full = build_cardinality_network(&lits(64), 64, 64).unwrap();
        let truncated = build_cardinality_network(&lits(64), 4, 64).unwrap();
        assert!(truncated.clauses.len() < full.clauses.len());
    }
}
