//! The interaction-term algebra: static analyses and rewriting steps.
//!
//! An interaction is a binary tree whose leaves are actions (or the empty
//! interaction) and whose inner nodes schedule their children: `strict`
//! orders all actions of the left child before those of the right, `seq`
//! only orders actions sharing a lifeline, `par` interleaves freely and
//! `alt` picks one side. `loop_f` repeats its body, composing unrollings
//! with `f`.

use crate::error::CoreError;
use crate::position::Position;
use crate::trace::{Action, LifelineId};
use std::collections::BTreeSet;

/// Binary composition operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinaryOp {
    Strict,
    Seq,
    Alt,
    Par,
}

impl BinaryOp {
    /// Scheduling operators order executions of both children; `alt` instead
    /// discards one of them.
    pub fn is_scheduling(self) -> bool {
        !matches!(self, BinaryOp::Alt)
    }

    pub fn name(self) -> &'static str {
        match self {
            BinaryOp::Strict => "strict",
            BinaryOp::Seq => "seq",
            BinaryOp::Alt => "alt",
            BinaryOp::Par => "par",
        }
    }
}

/// Operator used to compose successive unrollings of a loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LoopKind {
    Strict,
    Seq,
    Par,
}

impl LoopKind {
    pub fn binary_op(self) -> BinaryOp {
        match self {
            LoopKind::Strict => BinaryOp::Strict,
            LoopKind::Seq => BinaryOp::Seq,
            LoopKind::Par => BinaryOp::Par,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LoopKind::Strict => "loop_strict",
            LoopKind::Seq => "loop_seq",
            LoopKind::Par => "loop_par",
        }
    }
}

/// An interaction term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum InteractionTerm {
    /// Expresses exactly the empty trace.
    Empty,
    /// Expresses exactly the one-action trace.
    Act(Action),
    Binary(BinaryOp, Box<InteractionTerm>, Box<InteractionTerm>),
    Loop(LoopKind, Box<InteractionTerm>),
}

impl InteractionTerm {
    pub fn act(action: Action) -> Self {
        InteractionTerm::Act(action)
    }

    pub fn strict(left: InteractionTerm, right: InteractionTerm) -> Self {
        InteractionTerm::Binary(BinaryOp::Strict, Box::new(left), Box::new(right))
    }

    pub fn seq(left: InteractionTerm, right: InteractionTerm) -> Self {
        InteractionTerm::Binary(BinaryOp::Seq, Box::new(left), Box::new(right))
    }

    pub fn alt(left: InteractionTerm, right: InteractionTerm) -> Self {
        InteractionTerm::Binary(BinaryOp::Alt, Box::new(left), Box::new(right))
    }

    pub fn par(left: InteractionTerm, right: InteractionTerm) -> Self {
        InteractionTerm::Binary(BinaryOp::Par, Box::new(left), Box::new(right))
    }

    pub fn loop_strict(body: InteractionTerm) -> Self {
        InteractionTerm::Loop(LoopKind::Strict, Box::new(body))
    }

    pub fn loop_seq(body: InteractionTerm) -> Self {
        InteractionTerm::Loop(LoopKind::Seq, Box::new(body))
    }

    pub fn loop_par(body: InteractionTerm) -> Self {
        InteractionTerm::Loop(LoopKind::Par, Box::new(body))
    }

    /// All positions addressing a sub-term, in Dewey notation.
    pub fn positions(&self) -> BTreeSet<Position> {
        let mut out = BTreeSet::new();
        out.insert(Position::root());
        match self {
            InteractionTerm::Empty | InteractionTerm::Act(_) => {}
            InteractionTerm::Binary(_, left, right) => {
                out.extend(left.positions().iter().map(|p| p.prefixed(1)));
                out.extend(right.positions().iter().map(|p| p.prefixed(2)));
            }
            InteractionTerm::Loop(_, body) => {
                out.extend(body.positions().iter().map(|p| p.prefixed(1)));
            }
        }
        out
    }

    /// The sub-term at `p`, descending 1 = left/body and 2 = right.
    pub fn sub_interaction(&self, p: &Position) -> Result<&InteractionTerm, CoreError> {
        let mut node = self;
        for digit in p.digits() {
            node = match (node, digit) {
                (InteractionTerm::Binary(_, left, _), 1) => left,
                (InteractionTerm::Binary(_, _, right), 2) => right,
                (InteractionTerm::Loop(_, body), 1) => body,
                _ => return Err(CoreError::InvalidPosition(p.clone())),
            };
        }
        Ok(node)
    }

    /// Whether the term accepts the empty trace.
    pub fn expresses_empty(&self) -> bool {
        match self {
            InteractionTerm::Empty => true,
            InteractionTerm::Act(_) => false,
            InteractionTerm::Binary(op, left, right) => {
                if op.is_scheduling() {
                    left.expresses_empty() && right.expresses_empty()
                } else {
                    left.expresses_empty() || right.expresses_empty()
                }
            }
            InteractionTerm::Loop(_, _) => true,
        }
    }

    /// Whether the term accepts some execution with no action on `l`.
    pub fn avoids(&self, l: LifelineId) -> bool {
        match self {
            InteractionTerm::Empty => true,
            InteractionTerm::Act(act) => act.lifeline != l,
            InteractionTerm::Binary(op, left, right) => {
                if op.is_scheduling() {
                    left.avoids(l) && right.avoids(l)
                } else {
                    left.avoids(l) || right.avoids(l)
                }
            }
            InteractionTerm::Loop(_, _) => true,
        }
    }

    /// Positions of the immediately executable action leaves.
    pub fn frontier(&self) -> BTreeSet<Position> {
        let mut out = BTreeSet::new();
        match self {
            InteractionTerm::Empty => {}
            InteractionTerm::Act(_) => {
                out.insert(Position::root());
            }
            InteractionTerm::Binary(op, left, right) => {
                out.extend(left.frontier().iter().map(|p| p.prefixed(1)));
                match op {
                    BinaryOp::Alt | BinaryOp::Par => {
                        out.extend(right.frontier().iter().map(|p| p.prefixed(2)));
                    }
                    BinaryOp::Strict => {
                        if left.expresses_empty() {
                            out.extend(right.frontier().iter().map(|p| p.prefixed(2)));
                        }
                    }
                    BinaryOp::Seq => {
                        // A right-hand action is executable only if the left
                        // child can avoid its lifeline entirely.
                        for p in right.frontier() {
                            let act = right
                                .action_at(&p)
                                .expect("frontier positions address action leaves");
                            if left.avoids(act.lifeline) {
                                out.insert(p.prefixed(2));
                            }
                        }
                    }
                }
            }
            InteractionTerm::Loop(_, body) => {
                out.extend(body.frontier().iter().map(|p| p.prefixed(1)));
            }
        }
        out
    }

    /// The action leaf at `p`, if `p` addresses one.
    pub fn action_at(&self, p: &Position) -> Option<Action> {
        match self.sub_interaction(p) {
            Ok(InteractionTerm::Act(act)) => Some(*act),
            _ => None,
        }
    }

    /// Restricts the term to the executions with no action on `l`.
    ///
    /// Defined only when `avoids(l)` holds; alternative branches that cannot
    /// avoid `l` are dropped and loops whose body cannot avoid `l` are
    /// forbidden from repeating (they become the empty interaction).
    pub fn prune(&self, l: LifelineId) -> Result<InteractionTerm, CoreError> {
        if !self.avoids(l) {
            return Err(CoreError::PruneUndefined(l.index()));
        }
        Ok(self.prune_unchecked(l))
    }

    fn prune_unchecked(&self, l: LifelineId) -> InteractionTerm {
        match self {
            InteractionTerm::Empty | InteractionTerm::Act(_) => self.clone(),
            InteractionTerm::Binary(BinaryOp::Alt, left, right) => {
                match (left.avoids(l), right.avoids(l)) {
                    (true, true) => InteractionTerm::alt(
                        left.prune_unchecked(l),
                        right.prune_unchecked(l),
                    ),
                    (true, false) => left.prune_unchecked(l),
                    (false, true) => right.prune_unchecked(l),
                    (false, false) => unreachable!("caller checked avoids"),
                }
            }
            InteractionTerm::Binary(op, left, right) => InteractionTerm::Binary(
                *op,
                Box::new(left.prune_unchecked(l)),
                Box::new(right.prune_unchecked(l)),
            ),
            InteractionTerm::Loop(kind, body) => {
                if body.avoids(l) {
                    InteractionTerm::Loop(*kind, Box::new(body.prune_unchecked(l)))
                } else {
                    InteractionTerm::Empty
                }
            }
        }
    }

    /// Executes the frontier action at `p` and returns the simplified
    /// residual term together with the executed action.
    pub fn execute(&self, p: &Position) -> Result<(InteractionTerm, Action), CoreError> {
        if !self.frontier().contains(p) {
            return Err(CoreError::NotInFrontier(p.clone()));
        }
        let (residual, act) = self.execute_raw(p.digits());
        Ok((residual.simplify(), act))
    }

    // One small step, exactly as derived from the frontier cases; no
    // simplification. The caller has checked `p` is in the frontier.
    fn execute_raw(&self, path: &[u8]) -> (InteractionTerm, Action) {
        match (self, path) {
            (InteractionTerm::Act(act), []) => (InteractionTerm::Empty, *act),
            (InteractionTerm::Binary(op, left, right), [1, rest @ ..]) => {
                let (left2, act) = left.execute_raw(rest);
                match op {
                    BinaryOp::Alt => (left2, act),
                    _ => (
                        InteractionTerm::Binary(*op, Box::new(left2), right.clone()),
                        act,
                    ),
                }
            }
            (InteractionTerm::Binary(op, left, right), [2, rest @ ..]) => {
                let (right2, act) = right.execute_raw(rest);
                match op {
                    BinaryOp::Alt | BinaryOp::Strict => (right2, act),
                    BinaryOp::Seq => (
                        InteractionTerm::Binary(
                            BinaryOp::Seq,
                            Box::new(left.prune_unchecked(act.lifeline)),
                            Box::new(right2),
                        ),
                        act,
                    ),
                    BinaryOp::Par => (
                        InteractionTerm::Binary(BinaryOp::Par, left.clone(), Box::new(right2)),
                        act,
                    ),
                }
            }
            (InteractionTerm::Loop(kind, body), [1, rest @ ..]) => {
                let (body2, act) = body.execute_raw(rest);
                (
                    InteractionTerm::Binary(
                        kind.binary_op(),
                        Box::new(body2),
                        Box::new(InteractionTerm::Loop(*kind, body.clone())),
                    ),
                    act,
                )
            }
            _ => unreachable!("caller checked frontier membership"),
        }
    }

    /// Eliminates empty children of scheduling operators, bottom-up.
    ///
    /// `alt` branches and loop nodes are kept as they are (dropping an empty
    /// `alt` branch or a loop would change the accepted traces); their
    /// sub-terms are still simplified.
    pub fn simplify(&self) -> InteractionTerm {
        match self {
            InteractionTerm::Empty | InteractionTerm::Act(_) => self.clone(),
            InteractionTerm::Binary(op, left, right) if op.is_scheduling() => {
                let left = left.simplify();
                let right = right.simplify();
                match (left, right) {
                    (InteractionTerm::Empty, right) => right,
                    (left, InteractionTerm::Empty) => left,
                    (left, right) => InteractionTerm::Binary(*op, Box::new(left), Box::new(right)),
                }
            }
            InteractionTerm::Binary(op, left, right) => InteractionTerm::Binary(
                *op,
                Box::new(left.simplify()),
                Box::new(right.simplify()),
            ),
            InteractionTerm::Loop(kind, body) => {
                InteractionTerm::Loop(*kind, Box::new(body.simplify()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::Signature;

    fn sig() -> Signature {
        Signature::new(["a", "b", "c"], ["m1", "m2", "m3", "m4"]).unwrap()
    }

    // seq(alt(strict(b!m2,c?m2),0),b!m3), the small two-lifeline example.
    fn small_term(sig: &Signature) -> InteractionTerm {
        InteractionTerm::seq(
            InteractionTerm::alt(
                InteractionTerm::strict(
                    InteractionTerm::act(sig.emission("b", "m2").unwrap()),
                    InteractionTerm::act(sig.reception("c", "m2").unwrap()),
                ),
                InteractionTerm::Empty,
            ),
            InteractionTerm::act(sig.emission("b", "m3").unwrap()),
        )
    }

    // The running example:
    // seq(loop_seq(seq(strict(a!m1,b?m1), seq(alt(strict(b!m2,c?m2),0), b!m3))),
    //     par(a!m1, strict(c!m4, a?m4)))
    fn running_term(sig: &Signature) -> InteractionTerm {
        InteractionTerm::seq(
            InteractionTerm::loop_seq(InteractionTerm::seq(
                InteractionTerm::strict(
                    InteractionTerm::act(sig.emission("a", "m1").unwrap()),
                    InteractionTerm::act(sig.reception("b", "m1").unwrap()),
                ),
                InteractionTerm::seq(
                    InteractionTerm::alt(
                        InteractionTerm::strict(
                            InteractionTerm::act(sig.emission("b", "m2").unwrap()),
                            InteractionTerm::act(sig.reception("c", "m2").unwrap()),
                        ),
                        InteractionTerm::Empty,
                    ),
                    InteractionTerm::act(sig.emission("b", "m3").unwrap()),
                ),
            )),
            InteractionTerm::par(
                InteractionTerm::act(sig.emission("a", "m1").unwrap()),
                InteractionTerm::strict(
                    InteractionTerm::act(sig.emission("c", "m4").unwrap()),
                    InteractionTerm::act(sig.reception("a", "m4").unwrap()),
                ),
            ),
        )
    }

    fn pos(text: &str) -> Position {
        Position::parse(text).unwrap()
    }

    fn positions_as_strings(set: &BTreeSet<Position>) -> Vec<String> {
        set.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn positions_of_small_term() {
        let sig = sig();
        let term = small_term(&sig);
        assert_eq!(
            positions_as_strings(&term.positions()),
            ["ε", "1", "11", "111", "112", "12", "2"]
        );
        assert_eq!(
            positions_as_strings(&InteractionTerm::Empty.positions()),
            ["ε"]
        );
        let lp = InteractionTerm::loop_seq(InteractionTerm::act(sig.emission("a", "m1").unwrap()));
        assert_eq!(positions_as_strings(&lp.positions()), ["ε", "1"]);
    }

    #[test]
    fn sub_interaction_descends() {
        let sig = sig();
        let term = small_term(&sig);
        assert_eq!(term.sub_interaction(&Position::root()).unwrap(), &term);
        assert_eq!(
            term.sub_interaction(&pos("112")).unwrap(),
            &InteractionTerm::act(sig.reception("c", "m2").unwrap())
        );
        let lp = InteractionTerm::loop_seq(InteractionTerm::act(sig.emission("a", "m1").unwrap()));
        assert_eq!(
            lp.sub_interaction(&pos("2")),
            Err(CoreError::InvalidPosition(pos("2")))
        );
    }

    #[test]
    fn emptiness_cases() {
        let sig = sig();
        let term = small_term(&sig);
        assert!(InteractionTerm::Empty.expresses_empty());
        assert!(!InteractionTerm::act(sig.emission("b", "m2").unwrap()).expresses_empty());
        assert!(!term.expresses_empty());
        // the alt child of the small term does express the empty trace
        assert!(term.sub_interaction(&pos("1")).unwrap().expresses_empty());
        assert!(InteractionTerm::loop_par(InteractionTerm::act(sig.emission("b", "m2").unwrap()))
            .expresses_empty());
    }

    #[test]
    fn avoids_cases() {
        let sig = sig();
        let c = sig.lifeline_id("c").unwrap();
        let term = small_term(&sig);
        assert!(InteractionTerm::Empty.avoids(c));
        assert!(!InteractionTerm::act(sig.reception("c", "m2").unwrap()).avoids(c));
        assert!(term.avoids(c));
        // b!m3 sits outside the alt, so the whole term cannot avoid b
        let b = sig.lifeline_id("b").unwrap();
        assert!(!term.avoids(b));
        assert!(InteractionTerm::loop_seq(term.clone()).avoids(b));
    }

    #[test]
    fn frontier_of_running_example() {
        let sig = sig();
        let term = running_term(&sig);
        assert_eq!(
            positions_as_strings(&term.frontier()),
            ["1111", "21", "221"]
        );
    }

    #[test]
    fn frontier_base_cases() {
        let sig = sig();
        assert!(InteractionTerm::Empty.frontier().is_empty());
        let act = InteractionTerm::act(sig.emission("a", "m1").unwrap());
        assert_eq!(positions_as_strings(&act.frontier()), ["ε"]);
        // strict(a!m1, b?m1): the right side is blocked
        let strict = InteractionTerm::strict(
            InteractionTerm::act(sig.emission("a", "m1").unwrap()),
            InteractionTerm::act(sig.reception("b", "m1").unwrap()),
        );
        assert_eq!(positions_as_strings(&strict.frontier()), ["1"]);
    }

    #[test]
    fn frontier_addresses_action_leaves() {
        let sig = sig();
        let term = running_term(&sig);
        for p in term.frontier() {
            assert!(term.action_at(&p).is_some(), "{p} must address an action");
        }
    }

    #[test]
    fn prune_cuts_alt_branch() {
        let sig = sig();
        let c = sig.lifeline_id("c").unwrap();
        // loop_seq(seq(strict(a!m1,b?m1), seq(alt(strict(b!m2,c?m2),0), b!m3)))
        let term = running_term(&sig).sub_interaction(&pos("1")).unwrap().clone();
        let pruned = term.prune(c).unwrap();
        let expected = InteractionTerm::loop_seq(InteractionTerm::seq(
            InteractionTerm::strict(
                InteractionTerm::act(sig.emission("a", "m1").unwrap()),
                InteractionTerm::act(sig.reception("b", "m1").unwrap()),
            ),
            InteractionTerm::seq(
                InteractionTerm::Empty,
                InteractionTerm::act(sig.emission("b", "m3").unwrap()),
            ),
        ));
        assert_eq!(pruned, expected);
    }

    #[test]
    fn prune_forbids_loop() {
        let sig = sig();
        let a = sig.lifeline_id("a").unwrap();
        let term = running_term(&sig).sub_interaction(&pos("1")).unwrap().clone();
        assert_eq!(term.prune(a).unwrap(), InteractionTerm::Empty);
    }

    #[test]
    fn prune_undefined_when_not_avoided() {
        let sig = sig();
        let b = sig.lifeline_id("b").unwrap();
        let act = InteractionTerm::act(sig.emission("b", "m2").unwrap());
        assert_eq!(act.prune(b), Err(CoreError::PruneUndefined(b.index())));
        // base cases
        assert_eq!(InteractionTerm::Empty.prune(b).unwrap(), InteractionTerm::Empty);
        let other = InteractionTerm::act(sig.emission("a", "m1").unwrap());
        assert_eq!(other.prune(b).unwrap(), other);
    }

    #[test]
    fn execute_action_leaf() {
        let sig = sig();
        let a_m1 = sig.emission("a", "m1").unwrap();
        let act = InteractionTerm::act(a_m1);
        let (residual, executed) = act.execute(&Position::root()).unwrap();
        assert_eq!(residual, InteractionTerm::Empty);
        assert_eq!(executed, a_m1);
    }

    #[test]
    fn execute_running_example_at_221() {
        let sig = sig();
        let term = running_term(&sig);
        let (residual, act) = term.execute(&pos("221")).unwrap();
        assert_eq!(act, sig.emission("c", "m4").unwrap());
        // seq(loop_seq(seq(strict(a!m1,b?m1), b!m3)), par(a!m1, a?m4))
        let expected = InteractionTerm::seq(
            InteractionTerm::loop_seq(InteractionTerm::seq(
                InteractionTerm::strict(
                    InteractionTerm::act(sig.emission("a", "m1").unwrap()),
                    InteractionTerm::act(sig.reception("b", "m1").unwrap()),
                ),
                InteractionTerm::act(sig.emission("b", "m3").unwrap()),
            )),
            InteractionTerm::par(
                InteractionTerm::act(sig.emission("a", "m1").unwrap()),
                InteractionTerm::act(sig.reception("a", "m4").unwrap()),
            ),
        );
        assert_eq!(residual, expected);
    }

    #[test]
    fn execute_weak_seq_right_side() {
        let sig = sig();
        let a_m1 = sig.emission("a", "m1").unwrap();
        let b_m2 = sig.emission("b", "m2").unwrap();
        // execute(seq(a!m1, b!m2), 2) -> (a!m1, b!m2)
        let term = InteractionTerm::seq(InteractionTerm::act(a_m1), InteractionTerm::act(b_m2));
        let (residual, act) = term.execute(&pos("2")).unwrap();
        assert_eq!(act, b_m2);
        assert_eq!(residual, InteractionTerm::act(a_m1));
    }

    #[test]
    fn execute_rejects_non_frontier_positions() {
        let sig = sig();
        let term = running_term(&sig);
        assert_eq!(
            term.execute(&pos("1112")),
            Err(CoreError::NotInFrontier(pos("1112")))
        );
    }

    #[test]
    fn simplify_cases() {
        let sig = sig();
        let a_m1 = InteractionTerm::act(sig.emission("a", "m1").unwrap());
        assert_eq!(
            InteractionTerm::seq(a_m1.clone(), InteractionTerm::Empty).simplify(),
            a_m1
        );
        // alt keeps its empty branch
        let alt = InteractionTerm::alt(a_m1.clone(), InteractionTerm::Empty);
        assert_eq!(alt.simplify(), alt);
        // two nested eliminations
        assert_eq!(
            InteractionTerm::strict(InteractionTerm::Empty, InteractionTerm::Empty).simplify(),
            InteractionTerm::Empty
        );
    }
}
