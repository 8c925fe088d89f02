//! Brute-force reference solver and differential checker.
//!
//! The oracle enumerates finite search spaces exhaustively, deriving
//! functionally-determined variables instead of enumerating them, and
//! classifies candidate results against a reference with the relative
//! error rule: a sat result is correct when every objective's Δ stays
//! below 10⁻⁶, incorrect on unsat-against-sat or when Δ reaches the
//! threshold, and unverified when the candidate could not be solved.
//! All arithmetic is exact; no binary floating point is involved.

pub mod adapter;
pub mod bitvec;
mod fzn_solve;
pub mod report;
mod smt_solve;

pub use fzn_solve::solve_fzn;
pub use smt_solve::solve_smt;

use serde::Serialize;

use crate::rational::Rat;

/// How multiple solve goals combine during reference solving.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GoalMode {
    /// Optimize every goal independently in one enumeration pass.
    #[default]
    Independent,
    /// Earlier goals dominate later ones.
    Lexicographic,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleStatus {
    /// Satisfiable, with the exact optimum of every optimization goal in
    /// goal order (empty for pure satisfaction problems).
    Sat { optima: Vec<Rat> },
    Unsat,
    /// The instance is outside the oracle's reach (infinite domain or
    /// search space beyond the budget), with the reason.
    Inapplicable(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub status: OracleStatus,
    /// Number of assignments enumerated; 0 for inapplicable instances.
    pub assignments: u64,
}

impl OracleResult {
    pub fn sat(optima: Vec<Rat>, assignments: u64) -> Self {
        OracleResult {
            status: OracleStatus::Sat { optima },
            assignments,
        }
    }

    pub fn unsat(assignments: u64) -> Self {
        OracleResult {
            status: OracleStatus::Unsat,
            assignments,
        }
    }

    pub fn inapplicable(reason: impl Into<String>) -> Self {
        OracleResult {
            status: OracleStatus::Inapplicable(reason.into()),
            assignments: 0,
        }
    }

    pub fn is_sat(&self) -> bool {
        matches!(self.status, OracleStatus::Sat { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum IncorrectReason {
    /// The candidate reported unsat on a satisfiable reference.
    UnsatOnSat,
    /// The candidate reported sat on an unsatisfiable reference.
    SatOnUnsat,
    /// The candidate reports a different number of objectives.
    ObjectiveCount,
    /// Some objective's relative error reached 10⁻⁶.
    Delta(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Classification {
    Correct,
    Incorrect(IncorrectReason),
    Unverified,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub classification: Classification,
    /// Largest per-objective relative error, when every reference
    /// optimum is nonzero and both sides produced values.
    pub delta: Option<Rat>,
}

/// `Δ ≥ 10⁻⁶` is incorrect.
pub fn delta_threshold() -> Rat {
    Rat::from_i64_fraction(1, 1_000_000)
}

/// Classifies a candidate result against the reference.
///
/// The reference must be sat or unsat. An inapplicable candidate is
/// `Unverified`. For sat/sat pairs the per-objective relative error
/// `|o_ref − o_cand| / |o_ref|` is compared against 10⁻⁶, falling back
/// to the absolute error when the reference optimum is zero.
pub fn classify(reference: &OracleResult, candidate: &OracleResult) -> Verdict {
    use OracleStatus::*;
    let unverified = Verdict {
        classification: Classification::Unverified,
        delta: None,
    };
    match (&reference.status, &candidate.status) {
        (Inapplicable(_), _) | (_, Inapplicable(_)) => unverified,
        (Unsat, Unsat) => Verdict {
            classification: Classification::Correct,
            delta: None,
        },
        (Sat { .. }, Unsat) => Verdict {
            classification: Classification::Incorrect(IncorrectReason::UnsatOnSat),
            delta: None,
        },
        (Unsat, Sat { .. }) => Verdict {
            classification: Classification::Incorrect(IncorrectReason::SatOnUnsat),
            delta: None,
        },
        (Sat { optima: r }, Sat { optima: c }) => {
            if r.len() != c.len() {
                return Verdict {
                    classification: Classification::Incorrect(IncorrectReason::ObjectiveCount),
                    delta: None,
                };
            }
            let mut worst = Rat::zero();
            let mut all_nonzero = true;
            for (o_ref, o_cand) in r.iter().zip(c) {
                let diff = (o_ref - o_cand).abs();
                let component = if o_ref.is_zero() {
                    all_nonzero = false;
                    diff
                } else {
                    diff / o_ref.abs()
                };
                if component > worst {
                    worst = component;
                }
            }
            let delta = (all_nonzero && !r.is_empty()).then(|| worst.clone());
            if worst < delta_threshold() {
                Verdict {
                    classification: Classification::Correct,
                    delta,
                }
            } else {
                Verdict {
                    classification: Classification::Incorrect(IncorrectReason::Delta(
                        worst.to_string(),
                    )),
                    delta,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sat1(v: Rat) -> OracleResult {
        OracleResult::sat(vec![v], 1)
    }

    #[test]
    fn classify_equal_is_correct_with_zero_delta() {
        let v = classify(&sat1(Rat::from_int(2)), &sat1(Rat::from_int(2)));
        assert_eq!(v.classification, Classification::Correct);
        assert_eq!(v.delta, Some(Rat::zero()));
    }

    #[test]
    fn classify_below_threshold_is_correct() {
        // candidate 1 + 9·10⁻⁷ against reference 1
        let cand = Rat::one() + Rat::from_i64_fraction(9, 10_000_000);
        let v = classify(&sat1(Rat::one()), &sat1(cand));
        assert_eq!(v.classification, Classification::Correct);
        assert_eq!(v.delta, Some(Rat::from_i64_fraction(9, 10_000_000)));
    }

    #[test]
    fn classify_above_threshold_is_incorrect() {
        // candidate 1 + 2·10⁻⁶ against reference 1
        let cand = Rat::one() + Rat::from_i64_fraction(2, 1_000_000);
        let v = classify(&sat1(Rat::one()), &sat1(cand));
        assert!(matches!(
            v.classification,
            Classification::Incorrect(IncorrectReason::Delta(_))
        ));
    }

    #[test]
    fn classify_exactly_at_threshold_is_incorrect() {
        let cand = Rat::one() + Rat::from_i64_fraction(1, 1_000_000);
        let v = classify(&sat1(Rat::one()), &sat1(cand));
        assert!(matches!(
            v.classification,
            Classification::Incorrect(IncorrectReason::Delta(_))
        ));
    }

    #[test]
    fn classify_unsat_on_sat_is_incorrect() {
        let v = classify(&sat1(Rat::from_int(5)), &OracleResult::unsat(1));
        assert_eq!(
            v.classification,
            Classification::Incorrect(IncorrectReason::UnsatOnSat)
        );
    }

    #[test]
    fn classify_zero_reference_uses_absolute_error() {
        let v = classify(&sat1(Rat::zero()), &sat1(Rat::from_i64_fraction(1, 10_000_000)));
        assert_eq!(v.classification, Classification::Correct);
        assert_eq!(v.delta, None, "delta reported only for nonzero references");
        let v = classify(&sat1(Rat::zero()), &sat1(Rat::from_i64_fraction(1, 100_000)));
        assert!(matches!(v.classification, Classification::Incorrect(_)));
    }

    #[test]
    fn classify_is_reflexively_correct() {
        for r in [
            OracleResult::unsat(0),
            sat1(Rat::from_int(7)),
            OracleResult::sat(vec![Rat::from_int(1), Rat::from_i64_fraction(-3, 2)], 9),
        ] {
            assert_eq!(classify(&r, &r).classification, Classification::Correct);
        }
    }

    #[test]
    fn inapplicable_candidate_is_unverified() {
        let v = classify(&sat1(Rat::one()), &OracleResult::inapplicable("too big"));
        assert_eq!(v.classification, Classification::Unverified);
    }
}
