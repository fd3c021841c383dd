//! Bounded enumeration of accepted traces and execution-tree exploration.
//!
//! Loops make the full execution tree infinite, so every entry point takes
//! an [`ExplorationBound`]. The unrolling budget is charged per loop
//! occurrence along a path: stepping into a loop body counts one unrolling
//! of that loop, and the copy of the loop left in the residual term carries
//! one unrolling less. A budget of 0 therefore restricts every loop to its
//! empty repetition.

use crate::error::CoreError;
use crate::position::Position;
use crate::term::{BinaryOp, InteractionTerm, LoopKind};
use crate::trace::{project, Action, GlobalTrace, MultiTrace, Signature};
use std::collections::{BTreeSet, HashMap, HashSet};
use std::rc::Rc;

/// Caps for the otherwise infinite exploration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExplorationBound {
    /// Maximum number of unrollings of any single loop occurrence along a path.
    pub max_loop_unrollings: u32,
    /// Optional cap on the length of enumerated traces (tree depth).
    pub max_trace_length: Option<usize>,
}

impl ExplorationBound {
    pub fn unrollings(max_loop_unrollings: u32) -> Self {
        ExplorationBound {
            max_loop_unrollings,
            max_trace_length: None,
        }
    }

    pub fn with_max_len(mut self, max_trace_length: usize) -> Self {
        self.max_trace_length = Some(max_trace_length);
        self
    }
}

/// The bounded execution tree rooted at some interaction.
///
/// Every edge `(p, act)` satisfies `execute(parent, p) = (child, act)`;
/// children are ordered lexicographically by position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionTree {
    pub term: InteractionTerm,
    /// Whether this node's term expresses the empty trace.
    pub accepting: bool,
    pub edges: Vec<ExecutionEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionEdge {
    pub position: Position,
    pub action: Action,
    pub subtree: ExecutionTree,
}

impl ExecutionTree {
    pub fn node_count(&self) -> usize {
        1 + self.edges.iter().map(|e| e.subtree.node_count()).sum::<usize>()
    }

    /// Traces spelled by root-to-accepting-node paths.
    pub fn accepting_traces(&self) -> BTreeSet<GlobalTrace> {
        let mut out = BTreeSet::new();
        let mut prefix = Vec::new();
        self.collect_accepting(&mut prefix, &mut out);
        out
    }

    fn collect_accepting(&self, prefix: &mut Vec<Action>, out: &mut BTreeSet<GlobalTrace>) {
        if self.accepting {
            out.insert(GlobalTrace::new(prefix.clone()));
        }
        for edge in &self.edges {
            prefix.push(edge.action);
            edge.subtree.collect_accepting(prefix, out);
            prefix.pop();
        }
    }
}

// Interaction term decorated with the remaining unrolling budget of each
// loop node. Mirrors the term operations so that the budget can gate loop
// entries without touching the public term type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Budgeted {
    Empty,
    Act(Action),
    Binary(BinaryOp, Box<Budgeted>, Box<Budgeted>),
    Loop(LoopKind, Box<Budgeted>, u32),
}

impl Budgeted {
    fn from_term(term: &InteractionTerm, budget: u32) -> Budgeted {
        match term {
            InteractionTerm::Empty => Budgeted::Empty,
            InteractionTerm::Act(act) => Budgeted::Act(*act),
            InteractionTerm::Binary(op, left, right) => Budgeted::Binary(
                *op,
                Box::new(Budgeted::from_term(left, budget)),
                Box::new(Budgeted::from_term(right, budget)),
            ),
            InteractionTerm::Loop(kind, body) => {
                Budgeted::Loop(*kind, Box::new(Budgeted::from_term(body, budget)), budget)
            }
        }
    }

    fn strip(&self) -> InteractionTerm {
        match self {
            Budgeted::Empty => InteractionTerm::Empty,
            Budgeted::Act(act) => InteractionTerm::Act(*act),
            Budgeted::Binary(op, left, right) => {
                InteractionTerm::Binary(*op, Box::new(left.strip()), Box::new(right.strip()))
            }
            Budgeted::Loop(kind, body, _) => {
                InteractionTerm::Loop(*kind, Box::new(body.strip()))
            }
        }
    }

    fn expresses_empty(&self) -> bool {
        match self {
            Budgeted::Empty => true,
            Budgeted::Act(_) => false,
            Budgeted::Binary(op, left, right) => {
                if op.is_scheduling() {
                    left.expresses_empty() && right.expresses_empty()
                } else {
                    left.expresses_empty() || right.expresses_empty()
                }
            }
            Budgeted::Loop(_, _, _) => true,
        }
    }

    fn avoids(&self, l: crate::trace::LifelineId) -> bool {
        match self {
            Budgeted::Empty => true,
            Budgeted::Act(act) => act.lifeline != l,
            Budgeted::Binary(op, left, right) => {
                if op.is_scheduling() {
                    left.avoids(l) && right.avoids(l)
                } else {
                    left.avoids(l) || right.avoids(l)
                }
            }
            Budgeted::Loop(_, _, _) => true,
        }
    }

    fn action_at(&self, path: &[u8]) -> Option<Action> {
        match (self, path) {
            (Budgeted::Act(act), []) => Some(*act),
            (Budgeted::Binary(_, left, _), [1, rest @ ..]) => left.action_at(rest),
            (Budgeted::Binary(_, _, right), [2, rest @ ..]) => right.action_at(rest),
            (Budgeted::Loop(_, body, _), [1, rest @ ..]) => body.action_at(rest),
            _ => None,
        }
    }

    // Same as the term frontier, except that exhausted loops expose nothing.
    fn frontier(&self) -> BTreeSet<Position> {
        let mut out = BTreeSet::new();
        match self {
            Budgeted::Empty => {}
            Budgeted::Act(_) => {
                out.insert(Position::root());
            }
            Budgeted::Binary(op, left, right) => {
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
                        for p in right.frontier() {
                            let act = right
                                .action_at(p.digits())
                                .expect("frontier positions address action leaves");
                            if left.avoids(act.lifeline) {
                                out.insert(p.prefixed(2));
                            }
                        }
                    }
                }
            }
            Budgeted::Loop(_, body, remaining) => {
                if *remaining > 0 {
                    out.extend(body.frontier().iter().map(|p| p.prefixed(1)));
                }
            }
        }
        out
    }

    fn prune_unchecked(&self, l: crate::trace::LifelineId) -> Budgeted {
        match self {
            Budgeted::Empty | Budgeted::Act(_) => self.clone(),
            Budgeted::Binary(BinaryOp::Alt, left, right) => {
                match (left.avoids(l), right.avoids(l)) {
                    (true, true) => Budgeted::Binary(
                        BinaryOp::Alt,
                        Box::new(left.prune_unchecked(l)),
                        Box::new(right.prune_unchecked(l)),
                    ),
                    (true, false) => left.prune_unchecked(l),
                    (false, true) => right.prune_unchecked(l),
                    (false, false) => unreachable!("caller checked avoids"),
                }
            }
            Budgeted::Binary(op, left, right) => Budgeted::Binary(
                *op,
                Box::new(left.prune_unchecked(l)),
                Box::new(right.prune_unchecked(l)),
            ),
            Budgeted::Loop(kind, body, remaining) => {
                if body.avoids(l) {
                    Budgeted::Loop(*kind, Box::new(body.prune_unchecked(l)), *remaining)
                } else {
                    Budgeted::Empty
                }
            }
        }
    }

    // One small step; `path` comes from this term's frontier. The copy of a
    // loop left behind in the residual keeps one unrolling less.
    fn execute(&self, path: &[u8]) -> (Budgeted, Action) {
        match (self, path) {
            (Budgeted::Act(act), []) => (Budgeted::Empty, *act),
            (Budgeted::Binary(op, left, right), [1, rest @ ..]) => {
                let (left2, act) = left.execute(rest);
                match op {
                    BinaryOp::Alt => (left2, act),
                    _ => (Budgeted::Binary(*op, Box::new(left2), right.clone()), act),
                }
            }
            (Budgeted::Binary(op, left, right), [2, rest @ ..]) => {
                let (right2, act) = right.execute(rest);
                match op {
                    BinaryOp::Alt | BinaryOp::Strict => (right2, act),
                    BinaryOp::Seq => (
                        Budgeted::Binary(
                            BinaryOp::Seq,
                            Box::new(left.prune_unchecked(act.lifeline)),
                            Box::new(right2),
                        ),
                        act,
                    ),
                    BinaryOp::Par => (
                        Budgeted::Binary(BinaryOp::Par, left.clone(), Box::new(right2)),
                        act,
                    ),
                }
            }
            (Budgeted::Loop(kind, body, remaining), [1, rest @ ..]) => {
                debug_assert!(*remaining > 0);
                let (body2, act) = body.execute(rest);
                (
                    Budgeted::Binary(
                        kind.binary_op(),
                        Box::new(body2),
                        Box::new(Budgeted::Loop(*kind, body.clone(), remaining - 1)),
                    ),
                    act,
                )
            }
            _ => unreachable!("path comes from the frontier"),
        }
    }

    fn simplify(&self) -> Budgeted {
        match self {
            Budgeted::Empty | Budgeted::Act(_) => self.clone(),
            Budgeted::Binary(op, left, right) if op.is_scheduling() => {
                let left = left.simplify();
                let right = right.simplify();
                match (left, right) {
                    (Budgeted::Empty, right) => right,
                    (left, Budgeted::Empty) => left,
                    (left, right) => Budgeted::Binary(*op, Box::new(left), Box::new(right)),
                }
            }
            Budgeted::Binary(op, left, right) => {
                Budgeted::Binary(*op, Box::new(left.simplify()), Box::new(right.simplify()))
            }
            Budgeted::Loop(kind, body, remaining) => {
                Budgeted::Loop(*kind, Box::new(body.simplify()), *remaining)
            }
        }
    }
}

type TraceSet = BTreeSet<Vec<Action>>;

fn traces_of(
    term: &Budgeted,
    remaining_len: Option<usize>,
    memo: &mut HashMap<(Budgeted, Option<usize>), Rc<TraceSet>>,
) -> Rc<TraceSet> {
    let key = (term.clone(), remaining_len);
    if let Some(cached) = memo.get(&key) {
        return Rc::clone(cached);
    }
    let mut out = TraceSet::new();
    if term.expresses_empty() {
        out.insert(Vec::new());
    }
    if remaining_len != Some(0) {
        for p in term.frontier() {
            let (residual, act) = term.execute(p.digits());
            let residual = residual.simplify();
            let next_len = remaining_len.map(|n| n - 1);
            for suffix in traces_of(&residual, next_len, memo).iter() {
                let mut trace = Vec::with_capacity(1 + suffix.len());
                trace.push(act);
                trace.extend_from_slice(suffix);
                out.insert(trace);
            }
        }
    }
    let out = Rc::new(out);
    memo.insert(key, Rc::clone(&out));
    out
}

/// The accepted traces reachable within `bound`.
///
/// The result contains the empty trace iff the term expresses it, and is
/// monotone in the unrolling budget.
pub fn accepted_traces(term: &InteractionTerm, bound: &ExplorationBound) -> BTreeSet<GlobalTrace> {
    let root = Budgeted::from_term(term, bound.max_loop_unrollings);
    let mut memo = HashMap::new();
    traces_of(&root, bound.max_trace_length, &mut memo)
        .iter()
        .map(|actions| GlobalTrace::new(actions.clone()))
        .collect()
}

/// Projections of the bounded accepted traces, deduplicated.
pub fn accepted_multitraces(
    term: &InteractionTerm,
    sig: &Signature,
    bound: &ExplorationBound,
) -> Result<BTreeSet<MultiTrace>, CoreError> {
    accepted_traces(term, bound)
        .iter()
        .map(|trace| project(trace, sig))
        .collect()
}

fn build_tree(term: &Budgeted, remaining_len: Option<usize>) -> ExecutionTree {
    let mut edges = Vec::new();
    if remaining_len != Some(0) {
        for position in term.frontier() {
            let (residual, action) = term.execute(position.digits());
            let residual = residual.simplify();
            edges.push(ExecutionEdge {
                position,
                action,
                subtree: build_tree(&residual, remaining_len.map(|n| n - 1)),
            });
        }
    }
    ExecutionTree {
        term: term.strip(),
        accepting: term.expresses_empty(),
        edges,
    }
}

/// The execution tree of `term`, cut off at `bound`.
pub fn explore_tree(term: &InteractionTerm, bound: &ExplorationBound) -> ExecutionTree {
    let root = Budgeted::from_term(term, bound.max_loop_unrollings);
    build_tree(&root, bound.max_trace_length)
}

/// Decides `trace ∈ Accept(term)` by reading the trace head against frontier
/// actions, branching where several positions carry the same action.
///
/// No bound is needed: each step consumes one trace action, so the search
/// depth is the trace length.
pub fn is_accepted_trace(term: &InteractionTerm, trace: &GlobalTrace) -> bool {
    fn go(
        term: &InteractionTerm,
        rest: &[Action],
        dead: &mut HashSet<(InteractionTerm, usize)>,
    ) -> bool {
        match rest.first() {
            None => term.expresses_empty(),
            Some(head) => {
                if dead.contains(&(term.clone(), rest.len())) {
                    return false;
                }
                for p in term.frontier() {
                    if term.action_at(&p) == Some(*head) {
                        let (residual, _) = term
                            .execute(&p)
                            .expect("frontier positions are executable");
                        if go(&residual, &rest[1..], dead) {
                            return true;
                        }
                    }
                }
                dead.insert((term.clone(), rest.len()));
                false
            }
        }
    }
    go(term, trace.actions(), &mut HashSet::new())
}
