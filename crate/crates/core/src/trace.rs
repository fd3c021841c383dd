//! Signatures, actions, global traces and multi-traces.
//!
//! A signature fixes the lifelines (sub-systems) and messages of a
//! distributed system. A global trace totally orders the observed actions;
//! a multi-trace keeps one locally-ordered trace per lifeline and says
//! nothing about the relative order of actions on distinct lifelines.

use crate::error::CoreError;
use std::fmt;

/// Index of a lifeline in its signature's declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LifelineId(pub u32);

/// Index of a message in its signature's declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MessageId(pub u32);

impl LifelineId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl MessageId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The lifelines and messages a model is built over.
///
/// Declaration order is canonical: multi-trace components always follow the
/// lifeline order of the signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    lifelines: Vec<String>,
    messages: Vec<String>,
}

impl Signature {
    pub fn new<L, M>(lifelines: L, messages: M) -> Result<Self, CoreError>
    where
        L: IntoIterator,
        L::Item: Into<String>,
        M: IntoIterator,
        M::Item: Into<String>,
    {
        let lifelines: Vec<String> = lifelines.into_iter().map(Into::into).collect();
        let messages: Vec<String> = messages.into_iter().map(Into::into).collect();
        if lifelines.is_empty() || messages.is_empty() {
            return Err(CoreError::EmptySignature);
        }
        for (n, l) in lifelines.iter().enumerate() {
            if lifelines[..n].contains(l) {
                return Err(CoreError::DuplicateLifeline(l.clone()));
            }
        }
        for (n, m) in messages.iter().enumerate() {
            if messages[..n].contains(m) {
                return Err(CoreError::DuplicateMessage(m.clone()));
            }
        }
        Ok(Signature { lifelines, messages })
    }

    pub fn lifeline_count(&self) -> usize {
        self.lifelines.len()
    }

    pub fn lifelines(&self) -> impl Iterator<Item = (LifelineId, &str)> {
        self.lifelines
            .iter()
            .enumerate()
            .map(|(n, name)| (LifelineId(n as u32), name.as_str()))
    }

    pub fn lifeline_id(&self, name: &str) -> Result<LifelineId, CoreError> {
        self.lifelines
            .iter()
            .position(|l| l == name)
            .map(|n| LifelineId(n as u32))
            .ok_or_else(|| CoreError::UnknownLifeline(name.to_owned()))
    }

    pub fn message_id(&self, name: &str) -> Result<MessageId, CoreError> {
        self.messages
            .iter()
            .position(|m| m == name)
            .map(|n| MessageId(n as u32))
            .ok_or_else(|| CoreError::UnknownMessage(name.to_owned()))
    }

    pub fn lifeline_name(&self, id: LifelineId) -> &str {
        &self.lifelines[id.index()]
    }

    pub fn message_name(&self, id: MessageId) -> &str {
        &self.messages[id.index()]
    }

    pub fn contains_action(&self, act: &Action) -> bool {
        act.lifeline.index() < self.lifelines.len() && act.message.index() < self.messages.len()
    }

    /// Builds the emission `lifeline!message`.
    pub fn emission(&self, lifeline: &str, message: &str) -> Result<Action, CoreError> {
        Ok(Action {
            lifeline: self.lifeline_id(lifeline)?,
            direction: Direction::Emit,
            message: self.message_id(message)?,
        })
    }

    /// Builds the reception `lifeline?message`.
    pub fn reception(&self, lifeline: &str, message: &str) -> Result<Action, CoreError> {
        Ok(Action {
            lifeline: self.lifeline_id(lifeline)?,
            direction: Direction::Receive,
            message: self.message_id(message)?,
        })
    }

    /// Renders an action as `l!m` or `l?m`.
    pub fn action_label(&self, act: &Action) -> String {
        format!(
            "{}{}{}",
            self.lifeline_name(act.lifeline),
            act.direction,
            self.message_name(act.message)
        )
    }

    /// Renders a trace as dot-separated actions, or `eps` when empty.
    pub fn trace_label(&self, trace: &GlobalTrace) -> String {
        if trace.is_empty() {
            return "eps".to_owned();
        }
        trace
            .actions()
            .iter()
            .map(|a| self.action_label(a))
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Renders a multi-trace as a tuple, e.g. `(a!m1.a?m4, eps, c!m4)`.
    pub fn multitrace_label(&self, mu: &MultiTrace) -> String {
        let parts: Vec<String> = mu
            .components()
            .iter()
            .map(|c| {
                if c.is_empty() {
                    "eps".to_owned()
                } else {
                    c.iter().map(|a| self.action_label(a)).collect::<Vec<_>>().join(".")
                }
            })
            .collect();
        format!("({})", parts.join(", "))
    }
}

/// Emission (`!`) or reception (`?`) of a message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Emit,
    Receive,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Emit => write!(f, "!"),
            Direction::Receive => write!(f, "?"),
        }
    }
}

/// An atomic observable event: `l!m` or `l?m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action {
    pub lifeline: LifelineId,
    pub direction: Direction,
    pub message: MessageId,
}

/// A totally ordered sequence of actions; one global execution.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GlobalTrace(Vec<Action>);

impl GlobalTrace {
    pub fn new(actions: Vec<Action>) -> Self {
        GlobalTrace(actions)
    }

    pub fn empty() -> Self {
        GlobalTrace(Vec::new())
    }

    pub fn actions(&self) -> &[Action] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<Action>> for GlobalTrace {
    fn from(actions: Vec<Action>) -> Self {
        GlobalTrace(actions)
    }
}

/// One local trace per lifeline, in signature order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiTrace {
    components: Vec<Vec<Action>>,
}

impl MultiTrace {
    /// Builds a multi-trace, checking that there is one component per
    /// lifeline and that each component only holds actions of its own
    /// lifeline.
    pub fn new(sig: &Signature, components: Vec<Vec<Action>>) -> Result<Self, CoreError> {
        if components.len() != sig.lifeline_count() {
            return Err(CoreError::ComponentCountMismatch {
                expected: sig.lifeline_count(),
                got: components.len(),
            });
        }
        for (j, component) in components.iter().enumerate() {
            for act in component {
                if act.lifeline.index() != j {
                    return Err(CoreError::WrongLifeline { component: j });
                }
                if !sig.contains_action(act) {
                    return Err(CoreError::UnknownMessage(format!(
                        "message index {} out of range",
                        act.message.index()
                    )));
                }
            }
        }
        Ok(MultiTrace { components })
    }

    /// The empty multi-trace `(ε, …, ε)` over `sig`.
    pub fn empty(sig: &Signature) -> Self {
        MultiTrace {
            components: vec![Vec::new(); sig.lifeline_count()],
        }
    }

    pub fn components(&self) -> &[Vec<Action>] {
        &self.components
    }

    pub fn component(&self, j: usize) -> &[Action] {
        &self.components[j]
    }

    /// Total number of actions, i.e. the sum of component lengths.
    pub fn len(&self) -> usize {
        self.components.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.components.iter().all(Vec::is_empty)
    }

    /// First action of each non-empty component, with its component index.
    pub fn head_actions(&self) -> Vec<(usize, Action)> {
        self.components
            .iter()
            .enumerate()
            .filter_map(|(j, c)| c.first().map(|act| (j, *act)))
            .collect()
    }

    /// Removes the first action of component `j`, which must equal `act`.
    pub fn consume(&self, j: usize, act: &Action) -> Result<MultiTrace, CoreError> {
        let component = self
            .components
            .get(j)
            .ok_or(CoreError::HeadMismatch { component: j })?;
        match component.first() {
            Some(head) if head == act => {
                let mut components = self.components.clone();
                components[j].remove(0);
                Ok(MultiTrace { components })
            }
            _ => Err(CoreError::HeadMismatch { component: j }),
        }
    }

    /// Re-attaches `act` at the head of component `j`; inverse of `consume`.
    pub fn prepend(&self, j: usize, act: Action) -> MultiTrace {
        let mut components = self.components.clone();
        components[j].insert(0, act);
        MultiTrace { components }
    }
}

/// Projects a global trace onto a multi-trace: each action is appended to
/// the component of its own lifeline, preserving the global order per
/// lifeline.
pub fn project(trace: &GlobalTrace, sig: &Signature) -> Result<MultiTrace, CoreError> {
    let mut components = vec![Vec::new(); sig.lifeline_count()];
    for act in trace.actions() {
        if act.lifeline.index() >= sig.lifeline_count() {
            return Err(CoreError::UnknownLifeline(format!(
                "lifeline index {} out of range",
                act.lifeline.index()
            )));
        }
        if act.message.index() >= sig.messages.len() {
            return Err(CoreError::UnknownMessage(format!(
                "message index {} out of range",
                act.message.index()
            )));
        }
        components[act.lifeline.index()].push(*act);
    }
    Ok(MultiTrace { components })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig_abcd() -> Signature {
        Signature::new(["a", "b", "c", "d"], ["m1", "m2"]).unwrap()
    }

    #[test]
    fn signature_rejects_duplicates_and_empties() {
        assert_eq!(
            Signature::new(["a", "a"], ["m"]),
            Err(CoreError::DuplicateLifeline("a".into()))
        );
        assert_eq!(
            Signature::new(["a"], ["m", "m"]),
            Err(CoreError::DuplicateMessage("m".into()))
        );
        assert_eq!(Signature::new(Vec::<String>::new(), ["m"]), Err(CoreError::EmptySignature));
    }

    #[test]
    fn projection_splits_by_lifeline() {
        // a!m1.c?m1.c!m2.d?m2 over {a,b,c,d} -> (a!m1, eps, c?m1.c!m2, d?m2)
        let sig = sig_abcd();
        let trace = GlobalTrace::new(vec![
            sig.emission("a", "m1").unwrap(),
            sig.reception("c", "m1").unwrap(),
            sig.emission("c", "m2").unwrap(),
            sig.reception("d", "m2").unwrap(),
        ]);
        let mu = project(&trace, &sig).unwrap();
        assert_eq!(sig.multitrace_label(&mu), "(a!m1, eps, c?m1.c!m2, d?m2)");
        assert_eq!(mu.len(), trace.len());
    }

    #[test]
    fn projection_of_empty_trace() {
        let sig = sig_abcd();
        let mu = project(&GlobalTrace::empty(), &sig).unwrap();
        assert!(mu.is_empty());
        assert_eq!(mu.components().len(), 4);
    }

    #[test]
    fn projection_over_two_lifelines() {
        // b!m2.c?m2.b!m3 over {b,c} -> (b!m2.b!m3, c?m2)
        let sig = Signature::new(["b", "c"], ["m2", "m3"]).unwrap();
        let trace = GlobalTrace::new(vec![
            sig.emission("b", "m2").unwrap(),
            sig.reception("c", "m2").unwrap(),
            sig.emission("b", "m3").unwrap(),
        ]);
        let mu = project(&trace, &sig).unwrap();
        assert_eq!(sig.multitrace_label(&mu), "(b!m2.b!m3, c?m2)");
        assert_eq!(mu.len(), 3);
    }

    #[test]
    fn projection_rejects_foreign_actions() {
        let small = Signature::new(["a"], ["m1"]).unwrap();
        let big = sig_abcd();
        let trace = GlobalTrace::new(vec![big.emission("c", "m2").unwrap()]);
        assert!(matches!(
            project(&trace, &small),
            Err(CoreError::UnknownLifeline(_))
        ));
    }

    #[test]
    fn head_actions_and_consume() {
        let sig = Signature::new(["a", "b", "c"], ["m1", "m4"]).unwrap();
        let a_m1 = sig.emission("a", "m1").unwrap();
        let a_rm4 = sig.reception("a", "m4").unwrap();
        let c_m4 = sig.emission("c", "m4").unwrap();
        let mu = MultiTrace::new(&sig, vec![vec![a_m1, a_rm4], vec![], vec![c_m4]]).unwrap();
        assert_eq!(mu.len(), 3);
        assert_eq!(mu.head_actions(), vec![(0, a_m1), (2, c_m4)]);

        let mu2 = mu.consume(0, &a_m1).unwrap();
        assert_eq!(mu2.len(), 2);
        assert_eq!(sig.multitrace_label(&mu2), "(a?m4, eps, c!m4)");
        // re-prepending restores the original
        assert_eq!(mu2.prepend(0, a_m1), mu);

        // consuming from an empty component fails
        assert_eq!(
            mu.consume(1, &a_m1),
            Err(CoreError::HeadMismatch { component: 1 })
        );
        // consuming a non-head action fails
        assert_eq!(
            mu.consume(0, &c_m4),
            Err(CoreError::HeadMismatch { component: 0 })
        );
    }

    #[test]
    fn empty_multitrace_has_no_heads() {
        let sig = sig_abcd();
        let mu = MultiTrace::empty(&sig);
        assert!(mu.head_actions().is_empty());
        assert_eq!(mu.len(), 0);
    }

    #[test]
    fn multitrace_rejects_misplaced_actions() {
        let sig = Signature::new(["a", "b"], ["m"]).unwrap();
        let b_m = sig.emission("b", "m").unwrap();
        assert_eq!(
            MultiTrace::new(&sig, vec![vec![b_m], vec![]]),
            Err(CoreError::WrongLifeline { component: 0 })
        );
    }
}
