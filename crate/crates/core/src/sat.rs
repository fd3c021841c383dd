//! 1-in-3-SAT instances and their reduction to multi-trace membership.
//!
//! Each clause gets one lifeline and the multi-trace demands exactly one
//! emission on it; each variable becomes an exclusive alternative whose
//! branches emit on the lifelines of the clauses containing the
//! corresponding literal. Choosing a branch assigns the variable, and the
//! multi-trace is accepted iff every clause has exactly one true literal.

use crate::analysis::{omega, GlobalVerdict, SearchConfig};
use crate::term::InteractionTerm;
use crate::trace::{MultiTrace, Signature};
use thiserror::Error;

/// Variables the brute-force oracle is willing to enumerate (2^24 assignments).
pub const BRUTE_FORCE_MAX_VARS: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("malformed formula: {0}")]
    MalformedFormula(String),

    #[error("{num_vars} variables exceed the brute-force limit of {max}")]
    TooLarge { num_vars: u32, max: u32 },
}

/// A possibly negated variable; variables are numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    pub fn positive(var: u32) -> Self {
        Literal { var, negated: false }
    }

    pub fn negative(var: u32) -> Self {
        Literal { var, negated: true }
    }

    /// Signed DIMACS form: `-3` is the negation of variable 3.
    pub fn from_dimacs(value: i64) -> Result<Self, SatError> {
        if value == 0 || value.unsigned_abs() > u32::MAX as u64 {
            return Err(SatError::MalformedFormula(format!(
                "literal {value} out of range"
            )));
        }
        Ok(Literal {
            var: value.unsigned_abs() as u32,
            negated: value < 0,
        })
    }

    fn holds_under(&self, assignment: &Assignment) -> bool {
        assignment.value(self.var) != self.negated
    }
}

/// A conjunction of three-literal clauses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula3 {
    num_vars: u32,
    clauses: Vec<[Literal; 3]>,
}

impl CnfFormula3 {
    pub fn new(num_vars: u32, clauses: Vec<[Literal; 3]>) -> Result<Self, SatError> {
        if num_vars == 0 {
            return Err(SatError::MalformedFormula(
                "formula needs at least one variable".to_owned(),
            ));
        }
        if clauses.is_empty() {
            return Err(SatError::MalformedFormula(
                "formula needs at least one clause".to_owned(),
            ));
        }
        for clause in &clauses {
            for literal in clause {
                if literal.var == 0 || literal.var > num_vars {
                    return Err(SatError::MalformedFormula(format!(
                        "variable {} out of range 1..={}",
                        literal.var, num_vars
                    )));
                }
            }
        }
        Ok(CnfFormula3 { num_vars, clauses })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }
}

/// A total assignment of the formula's variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment(values)
    }

    pub fn value(&self, var: u32) -> bool {
        self.0[(var - 1) as usize]
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }
}

/// The interaction, multi-trace and signature a formula reduces to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedInstance {
    pub signature: Signature,
    pub interaction: InteractionTerm,
    pub multi_trace: MultiTrace,
}

fn fold_right(
    op: fn(InteractionTerm, InteractionTerm) -> InteractionTerm,
    items: Vec<InteractionTerm>,
) -> InteractionTerm {
    items
        .into_iter()
        .rev()
        .reduce(|acc, item| op(item, acc))
        .expect("fold over at least one item")
}

/// Builds the membership instance equivalent to 1-in-3 satisfiability.
///
/// The signature has one lifeline per clause and a single message; the
/// interaction is the right-folded parallel composition of one alternative
/// per variable, each branch being the right-folded weak sequence of its
/// per-clause emissions (an occurrence of the literal in clause `j`
/// contributes one `lj!m`, clauses without it contribute the empty
/// interaction); the multi-trace holds exactly one `lj!m` per component.
pub fn reduce(formula: &CnfFormula3) -> ReducedInstance {
    let q = formula.clauses.len();
    let lifelines: Vec<String> = (1..=q).map(|j| format!("l{j}")).collect();
    let signature =
        Signature::new(lifelines, ["m"]).expect("clause lifelines are distinct and non-empty");

    let branch = |literal: Literal| -> InteractionTerm {
        let blocks: Vec<InteractionTerm> = formula
            .clauses
            .iter()
            .enumerate()
            .map(|(j, clause)| {
                let occurrences = clause.iter().filter(|l| **l == literal).count();
                if occurrences == 0 {
                    InteractionTerm::Empty
                } else {
                    let name = format!("l{}", j + 1);
                    let emission = signature
                        .emission(&name, "m")
                        .expect("lifeline exists by construction");
                    fold_right(
                        InteractionTerm::seq,
                        vec![InteractionTerm::act(emission); occurrences],
                    )
                }
            })
            .collect();
        fold_right(InteractionTerm::seq, blocks)
    };

    let alternatives: Vec<InteractionTerm> = (1..=formula.num_vars)
        .map(|v| {
            InteractionTerm::alt(
                branch(Literal::positive(v)),
                branch(Literal::negative(v)),
            )
        })
        .collect();
    let interaction = fold_right(InteractionTerm::par, alternatives);

    let components: Vec<Vec<crate::trace::Action>> = (1..=q)
        .map(|j| {
            let emission = signature
                .emission(&format!("l{j}"), "m")
                .expect("lifeline exists by construction");
            vec![emission]
        })
        .collect();
    let multi_trace =
        MultiTrace::new(&signature, components).expect("one emission per own lifeline");

    ReducedInstance {
        signature,
        interaction,
        multi_trace,
    }
}

/// Whether exactly one literal of every clause is true under `assignment`.
pub fn satisfies_one_in_three(formula: &CnfFormula3, assignment: &Assignment) -> bool {
    formula.clauses.iter().all(|clause| {
        clause
            .iter()
            .filter(|literal| literal.holds_under(assignment))
            .count()
            == 1
    })
}

/// Enumerates all assignments and returns the first 1-in-3 solution, if any.
pub fn brute_force_1in3(formula: &CnfFormula3) -> Result<Option<Assignment>, SatError> {
    let p = formula.num_vars;
    if p > BRUTE_FORCE_MAX_VARS {
        return Err(SatError::TooLarge {
            num_vars: p,
            max: BRUTE_FORCE_MAX_VARS,
        });
    }
    for bits in 0u64..(1u64 << p) {
        let assignment = Assignment((0..p).map(|v| bits & (1 << v) != 0).collect());
        if satisfies_one_in_three(formula, &assignment) {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}

/// Cross-checks the reduction: brute-force 1-in-3 solvability must coincide
/// with a Pass verdict on the reduced membership instance.
pub fn verify_reduction(formula: &CnfFormula3) -> Result<bool, SatError> {
    let solvable = brute_force_1in3(formula)?.is_some();
    let instance = reduce(formula);
    let verdict = omega(
        &instance.interaction,
        &instance.multi_trace,
        &SearchConfig::default(),
    )
    .expect("analysis without a node budget cannot exhaust");
    Ok(solvable == (verdict == GlobalVerdict::Pass))
}

/// Parses a DIMACS-style formula restricted to exactly three literals per
/// clause: a `p cnf <vars> <clauses>` header, `c` comment lines, and
/// 0-terminated clauses of signed integers.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula3, SatError> {
    let mut header: Option<(u32, usize)> = None;
    let mut tokens: Vec<i64> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(SatError::MalformedFormula("duplicate header".to_owned()));
            }
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() != 3 || fields[0] != "cnf" {
                return Err(SatError::MalformedFormula(format!(
                    "bad header line `{line}`"
                )));
            }
            let num_vars: u32 = fields[1]
                .parse()
                .map_err(|_| SatError::MalformedFormula(format!("bad variable count `{}`", fields[1])))?;
            let num_clauses: usize = fields[2]
                .parse()
                .map_err(|_| SatError::MalformedFormula(format!("bad clause count `{}`", fields[2])))?;
            header = Some((num_vars, num_clauses));
            continue;
        }
        if header.is_none() {
            return Err(SatError::MalformedFormula(format!(
                "clause line `{line}` before header"
            )));
        }
        for token in line.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| SatError::MalformedFormula(format!("bad literal `{token}`")))?;
            tokens.push(value);
        }
    }
    let (num_vars, num_clauses) =
        header.ok_or_else(|| SatError::MalformedFormula("missing `p cnf` header".to_owned()))?;

    let mut clauses: Vec<[Literal; 3]> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    for value in tokens {
        if value == 0 {
            let literals: [Literal; 3] = current.as_slice().try_into().map_err(|_| {
                SatError::MalformedFormula(format!(
                    "clause {} has {} literals, expected exactly 3",
                    clauses.len() + 1,
                    current.len()
                ))
            })?;
            clauses.push(literals);
            current.clear();
        } else {
            current.push(Literal::from_dimacs(value)?);
        }
    }
    if !current.is_empty() {
        return Err(SatError::MalformedFormula(
            "last clause is not 0-terminated".to_owned(),
        ));
    }
    if clauses.len() != num_clauses {
        return Err(SatError::MalformedFormula(format!(
            "header declares {num_clauses} clauses but {} were given",
            clauses.len()
        )));
    }
    CnfFormula3::new(num_vars, clauses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{BinaryOp, InteractionTerm as T};

    // (v1 ∨ ¬v2 ∨ v4) ∧ (v1 ∨ v3 ∨ ¬v4)
    fn worked_example() -> CnfFormula3 {
        CnfFormula3::new(
            4,
            vec![
                [
                    Literal::positive(1),
                    Literal::negative(2),
                    Literal::positive(4),
                ],
                [
                    Literal::positive(1),
                    Literal::positive(3),
                    Literal::negative(4),
                ],
            ],
        )
        .unwrap()
    }

    #[test]
    fn worked_example_is_solvable_and_oracle_accepts_known_solution() {
        let formula = worked_example();
        let found = brute_force_1in3(&formula).unwrap();
        assert!(found.is_some());
        // the known solution [v1→⊥, v2→⊤, v3→⊤, v4→⊤]
        let known = Assignment::new(vec![false, true, true, true]);
        assert!(satisfies_one_in_three(&formula, &known));
    }

    #[test]
    fn unsatisfiable_examples() {
        // (v1 ∨ v2 ∨ v3) ∧ (¬v1 ∨ ¬v2 ∨ ¬v3): clause 1 wants one true,
        // clause 2 wants exactly two true
        let formula = CnfFormula3::new(
            3,
            vec![
                [
                    Literal::positive(1),
                    Literal::positive(2),
                    Literal::positive(3),
                ],
                [
                    Literal::negative(1),
                    Literal::negative(2),
                    Literal::negative(3),
                ],
            ],
        )
        .unwrap();
        assert_eq!(brute_force_1in3(&formula).unwrap(), None);

        // (v1 ∨ v1 ∨ v1): either zero or three true literals
        let repeated = CnfFormula3::new(
            1,
            vec![[
                Literal::positive(1),
                Literal::positive(1),
                Literal::positive(1),
            ]],
        )
        .unwrap();
        assert_eq!(brute_force_1in3(&repeated).unwrap(), None);
    }

    #[test]
    fn brute_force_guard() {
        let clause = [
            Literal::positive(1),
            Literal::positive(2),
            Literal::positive(3),
        ];
        let formula = CnfFormula3::new(25, vec![clause]).unwrap();
        assert_eq!(
            brute_force_1in3(&formula),
            Err(SatError::TooLarge {
                num_vars: 25,
                max: BRUTE_FORCE_MAX_VARS
            })
        );
    }

    #[test]
    fn reduce_worked_example_shape() {
        let formula = worked_example();
        let instance = reduce(&formula);
        assert_eq!(instance.signature.lifeline_count(), 2);
        assert_eq!(instance.multi_trace.len(), 2);
        // one alt per variable under right-folded pars
        fn count_ops(term: &T, op: BinaryOp) -> usize {
            match term {
                T::Binary(o, l, r) => {
                    (*o == op) as usize + count_ops(l, op) + count_ops(r, op)
                }
                T::Loop(_, body) => count_ops(body, op),
                _ => 0,
            }
        }
        assert_eq!(count_ops(&instance.interaction, BinaryOp::Alt), 4);
        assert_eq!(count_ops(&instance.interaction, BinaryOp::Par), 3);
        let verdict = omega(
            &instance.interaction,
            &instance.multi_trace,
            &SearchConfig::default(),
        )
        .unwrap();
        assert_eq!(verdict, GlobalVerdict::Pass);
    }

    #[test]
    fn reduce_smallest_instance() {
        // p=1, q=1, φ = (v1 ∨ v1 ∨ v1): the positive branch chains three
        // emissions, the negative branch is empty
        let formula = CnfFormula3::new(
            1,
            vec![[
                Literal::positive(1),
                Literal::positive(1),
                Literal::positive(1),
            ]],
        )
        .unwrap();
        let instance = reduce(&formula);
        let l1_m = instance.signature.emission("l1", "m").unwrap();
        let chain = T::seq(
            T::act(l1_m),
            T::seq(T::act(l1_m), T::act(l1_m)),
        );
        assert_eq!(instance.interaction, T::alt(chain, T::Empty));
        assert_eq!(instance.multi_trace.len(), 1);
        // equivalence still holds: neither side is satisfiable
        assert!(verify_reduction(&formula).unwrap());
        let verdict = omega(
            &instance.interaction,
            &instance.multi_trace,
            &SearchConfig::default(),
        )
        .unwrap();
        assert_eq!(verdict, GlobalVerdict::Fail);
    }

    #[test]
    fn verify_reduction_on_both_polarities() {
        assert!(verify_reduction(&worked_example()).unwrap());
        let unsat = CnfFormula3::new(
            3,
            vec![
                [
                    Literal::positive(1),
                    Literal::positive(2),
                    Literal::positive(3),
                ],
                [
                    Literal::negative(1),
                    Literal::negative(2),
                    Literal::negative(3),
                ],
            ],
        )
        .unwrap();
        assert!(verify_reduction(&unsat).unwrap());
    }

    #[test]
    fn dimacs_round_trip() {
        let text = "c a comment\np cnf 4 2\n1 -2 4 0\n1 3 -4 0\n";
        let formula = parse_dimacs(text).unwrap();
        assert_eq!(formula, worked_example());
    }

    #[test]
    fn dimacs_rejects_wrong_arity_and_counts() {
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n1 2 0\n"),
            Err(SatError::MalformedFormula(_))
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 2\n1 2 -1 0\n"),
            Err(SatError::MalformedFormula(_))
        ));
        assert!(matches!(
            parse_dimacs("1 2 3 0\n"),
            Err(SatError::MalformedFormula(_))
        ));
    }
}
