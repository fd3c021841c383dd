//! Multi-trace membership analysis.
//!
//! The analysis walks a graph whose vertices are either `(term, multi-trace)`
//! pairs or coverage verdicts. From a pair, either a verdict rule fires (the
//! multi-trace is empty, or no component head matches a frontier action) or
//! one consuming step per match rewrites the term and removes the matched
//! head. Every consuming step shrinks the multi-trace by one action, so the
//! reachable graph is finite and acyclic and each maximal path has at most
//! `|μ| + 1` edges.

use crate::position::Position;
use crate::term::InteractionTerm;
use crate::trace::{Action, GlobalTrace, MultiTrace};
use std::collections::{HashMap, HashSet, VecDeque};
use thiserror::Error;

/// Per-path outcome of an analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoverageVerdict {
    /// The multi-trace was fully consumed and the residual term accepts ε.
    Cov,
    /// Standard-mode failure sink.
    UnCov,
    /// Extended mode: consumed everything but the residual still requires
    /// actions; the observation stopped too early.
    TooShort,
    /// Extended mode: no match although every component is still logging.
    Out,
    /// Extended mode: no match and some component has been emptied, so a
    /// longer local observation might have matched.
    LackObs,
}

impl std::fmt::Display for CoverageVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            CoverageVerdict::Cov => "Cov",
            CoverageVerdict::UnCov => "UnCov",
            CoverageVerdict::TooShort => "TooShort",
            CoverageVerdict::Out => "Out",
            CoverageVerdict::LackObs => "LackObs",
        };
        write!(f, "{name}")
    }
}

/// Verdict aggregated over all paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GlobalVerdict {
    Pass,
    WeakPass,
    Inconc,
    Fail,
}

impl std::fmt::Display for GlobalVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            GlobalVerdict::Pass => "Pass",
            GlobalVerdict::WeakPass => "WeakPass",
            GlobalVerdict::Inconc => "Inconc",
            GlobalVerdict::Fail => "Fail",
        };
        write!(f, "{name}")
    }
}

/// Which rule vocabulary the analysis uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalysisMode {
    /// Verdicts Cov/UnCov, global Pass/Fail.
    Standard,
    /// Verdicts Cov/TooShort/Out/LackObs, global Pass/WeakPass/Inconc/Fail.
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStrategy {
    DepthFirst,
    BreadthFirst,
}

/// Knobs for the verdict search. The verdict itself is independent of the
/// strategy and of memoization; traversals stop as soon as Cov is reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub strategy: SearchStrategy,
    /// Deduplicate `(term, multi-trace)` vertices. Identical pairs reach
    /// identical verdicts, so merging is sound.
    pub memoize: bool,
    /// Abort with [`AnalysisError::BudgetExhausted`] after expanding this
    /// many pair vertices without a certain verdict.
    pub node_budget: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            strategy: SearchStrategy::DepthFirst,
            memoize: true,
            node_budget: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("node budget of {budget} exhausted before a verdict was certain")]
    BudgetExhausted { budget: usize },
}

/// Rule that produced an edge of the analysis graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R4a,
    R4b,
}

impl std::fmt::Display for RuleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            RuleId::R1 => "R1",
            RuleId::R2 => "R2",
            RuleId::R3 => "R3",
            RuleId::R4 => "R4",
            RuleId::R4a => "R4a",
            RuleId::R4b => "R4b",
        };
        write!(f, "{name}")
    }
}

/// Label of a consuming (R3) edge: which action was read, at which frontier
/// position of the term, from which multi-trace component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsumeStep {
    pub action: Action,
    pub position: Position,
    pub component: usize,
}

/// Vertex of the analysis graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AnalysisVertex {
    Pair {
        term: InteractionTerm,
        multi_trace: MultiTrace,
    },
    Sink(CoverageVerdict),
}

/// One outgoing edge computed by the analysis rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Successor {
    pub rule: RuleId,
    /// Present exactly on R3 edges.
    pub step: Option<ConsumeStep>,
    pub vertex: AnalysisVertex,
}

/// Applies the analysis rules once to `(term, mu)`.
///
/// Empty multi-trace: a single verdict edge (Cov when the term expresses ε,
/// otherwise UnCov or TooShort depending on the mode). Otherwise one edge
/// per match between a component head and a frontier action carrying that
/// action; when no match exists, a single verdict edge (UnCov, or Out /
/// LackObs in extended mode depending on whether some component is empty).
pub fn step_successors(
    term: &InteractionTerm,
    mu: &MultiTrace,
    mode: AnalysisMode,
) -> Vec<Successor> {
    if mu.is_empty() {
        let successor = if term.expresses_empty() {
            Successor {
                rule: RuleId::R1,
                step: None,
                vertex: AnalysisVertex::Sink(CoverageVerdict::Cov),
            }
        } else {
            match mode {
                AnalysisMode::Standard => Successor {
                    rule: RuleId::R2,
                    step: None,
                    vertex: AnalysisVertex::Sink(CoverageVerdict::UnCov),
                },
                AnalysisMode::Extended => Successor {
                    rule: RuleId::R2,
                    step: None,
                    vertex: AnalysisVertex::Sink(CoverageVerdict::TooShort),
                },
            }
        };
        return vec![successor];
    }

    let heads = mu.head_actions();
    let mut successors = Vec::new();
    for position in term.frontier() {
        let frontier_action = term
            .action_at(&position)
            .expect("frontier positions address action leaves");
        for (component, head) in &heads {
            if *head == frontier_action {
                let (residual, _) = term
                    .execute(&position)
                    .expect("frontier positions are executable");
                let consumed = mu
                    .consume(*component, head)
                    .expect("head_actions returns component heads");
                successors.push(Successor {
                    rule: RuleId::R3,
                    step: Some(ConsumeStep {
                        action: *head,
                        position: position.clone(),
                        component: *component,
                    }),
                    vertex: AnalysisVertex::Pair {
                        term: residual,
                        multi_trace: consumed,
                    },
                });
            }
        }
    }
    if successors.is_empty() {
        let (rule, verdict) = match mode {
            AnalysisMode::Standard => (RuleId::R4, CoverageVerdict::UnCov),
            AnalysisMode::Extended => {
                if mu.components().iter().all(|c| !c.is_empty()) {
                    (RuleId::R4a, CoverageVerdict::Out)
                } else {
                    (RuleId::R4b, CoverageVerdict::LackObs)
                }
            }
        };
        successors.push(Successor {
            rule,
            step: None,
            vertex: AnalysisVertex::Sink(verdict),
        });
    }
    successors
}

/// Final report of a verdict search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisOutcome {
    pub verdict: GlobalVerdict,
    /// On Pass, one accepting path read as a global trace (its projection is
    /// the analyzed multi-trace). On an extended Fail, the consumed prefix of
    /// one path ending in Out.
    pub witness: Option<GlobalTrace>,
    /// The sink the witness path reached.
    pub witness_sink: Option<CoverageVerdict>,
    /// Number of pair vertices expanded.
    pub expanded: usize,
}

/// Standard-mode global verdict: Pass iff some path reaches Cov.
pub fn omega(
    term: &InteractionTerm,
    mu: &MultiTrace,
    cfg: &SearchConfig,
) -> Result<GlobalVerdict, AnalysisError> {
    analyze(term, mu, AnalysisMode::Standard, cfg).map(|outcome| outcome.verdict)
}

/// Extended-mode global verdict: Pass if some path reaches Cov, else
/// WeakPass if some path reaches TooShort, else Inconc if some path reaches
/// LackObs, else Fail (all paths lead to Out).
pub fn omega_tilde(
    term: &InteractionTerm,
    mu: &MultiTrace,
    cfg: &SearchConfig,
) -> Result<GlobalVerdict, AnalysisError> {
    analyze(term, mu, AnalysisMode::Extended, cfg).map(|outcome| outcome.verdict)
}

/// Runs the verdict search and reports the verdict with a witness path.
pub fn analyze(
    term: &InteractionTerm,
    mu: &MultiTrace,
    mode: AnalysisMode,
    cfg: &SearchConfig,
) -> Result<AnalysisOutcome, AnalysisError> {
    // Each work item carries the actions consumed so far, i.e. the path.
    let mut work: VecDeque<(InteractionTerm, MultiTrace, Vec<Action>)> = VecDeque::new();
    let mut seen: HashSet<(InteractionTerm, MultiTrace)> = HashSet::new();
    let root = (term.clone(), mu.clone());
    if cfg.memoize {
        seen.insert(root.clone());
    }
    work.push_back((root.0, root.1, Vec::new()));

    let mut expanded = 0usize;
    let mut too_short = false;
    let mut lack_obs = false;
    let mut out_witness: Option<Vec<Action>> = None;

    while let Some((t, m, prefix)) = match cfg.strategy {
        SearchStrategy::DepthFirst => work.pop_back(),
        SearchStrategy::BreadthFirst => work.pop_front(),
    } {
        expanded += 1;
        if let Some(budget) = cfg.node_budget {
            if expanded > budget {
                return Err(AnalysisError::BudgetExhausted { budget });
            }
        }
        for successor in step_successors(&t, &m, mode) {
            match successor.vertex {
                AnalysisVertex::Sink(CoverageVerdict::Cov) => {
                    return Ok(AnalysisOutcome {
                        verdict: GlobalVerdict::Pass,
                        witness: Some(GlobalTrace::new(prefix)),
                        witness_sink: Some(CoverageVerdict::Cov),
                        expanded,
                    });
                }
                AnalysisVertex::Sink(CoverageVerdict::TooShort) => too_short = true,
                AnalysisVertex::Sink(CoverageVerdict::LackObs) => lack_obs = true,
                AnalysisVertex::Sink(CoverageVerdict::Out) => {
                    if out_witness.is_none() {
                        out_witness = Some(prefix.clone());
                    }
                }
                AnalysisVertex::Sink(CoverageVerdict::UnCov) => {}
                AnalysisVertex::Pair { term, multi_trace } => {
                    if !cfg.memoize || seen.insert((term.clone(), multi_trace.clone())) {
                        let mut path = prefix.clone();
                        path.push(
                            successor
                                .step
                                .as_ref()
                                .expect("pair successors are R3 edges")
                                .action,
                        );
                        work.push_back((term, multi_trace, path));
                    }
                }
            }
        }
    }

    let outcome = match mode {
        AnalysisMode::Standard => AnalysisOutcome {
            verdict: GlobalVerdict::Fail,
            witness: None,
            witness_sink: None,
            expanded,
        },
        AnalysisMode::Extended => {
            if too_short {
                AnalysisOutcome {
                    verdict: GlobalVerdict::WeakPass,
                    witness: None,
                    witness_sink: None,
                    expanded,
                }
            } else if lack_obs {
                AnalysisOutcome {
                    verdict: GlobalVerdict::Inconc,
                    witness: None,
                    witness_sink: None,
                    expanded,
                }
            } else {
                AnalysisOutcome {
                    verdict: GlobalVerdict::Fail,
                    witness: out_witness.map(GlobalTrace::new),
                    witness_sink: Some(CoverageVerdict::Out),
                    expanded,
                }
            }
        }
    };
    Ok(outcome)
}

/// Edge of an explicit analysis graph, by vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisEdge {
    pub from: usize,
    pub to: usize,
    pub rule: RuleId,
    pub step: Option<ConsumeStep>,
}

/// The reachable analysis subgraph, explored exhaustively (no early stop).
///
/// Vertex 0 is the root pair; equal pairs are merged and each coverage
/// verdict gets a single sink vertex. Vertices appear in breadth-first
/// discovery order, which makes the layout deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisGraph {
    pub vertices: Vec<AnalysisVertex>,
    pub edges: Vec<AnalysisEdge>,
}

impl AnalysisGraph {
    pub fn root(&self) -> usize {
        0
    }

    fn successors_by_vertex(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for edge in &self.edges {
            out[edge.from].push(edge.to);
        }
        out
    }

    /// Structural cycle check over the edge list.
    pub fn is_acyclic(&self) -> bool {
        let successors = self.successors_by_vertex();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.vertices.len()];
        for start in 0..self.vertices.len() {
            if state[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            state[start] = 1;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next < successors[v].len() {
                    let child = successors[v][*next];
                    *next += 1;
                    match state[child] {
                        0 => {
                            state[child] = 1;
                            stack.push((child, 0));
                        }
                        1 => return false,
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    stack.pop();
                }
            }
        }
        true
    }

    /// Longest path (in edges) from the root; `None` if a cycle is reachable.
    pub fn longest_path_from_root(&self) -> Option<usize> {
        if !self.is_acyclic() {
            return None;
        }
        let successors = self.successors_by_vertex();
        let mut memo: Vec<Option<usize>> = vec![None; self.vertices.len()];
        fn longest(v: usize, successors: &[Vec<usize>], memo: &mut Vec<Option<usize>>) -> usize {
            if let Some(cached) = memo[v] {
                return cached;
            }
            let best = successors[v]
                .iter()
                .map(|&c| 1 + longest(c, successors, memo))
                .max()
                .unwrap_or(0);
            memo[v] = Some(best);
            best
        }
        Some(longest(0, &successors, &mut memo))
    }
}

/// Builds the full reachable analysis graph from `(term, mu)`.
pub fn analysis_graph(
    term: &InteractionTerm,
    mu: &MultiTrace,
    mode: AnalysisMode,
    node_budget: Option<usize>,
) -> Result<AnalysisGraph, AnalysisError> {
    let mut vertices: Vec<AnalysisVertex> = Vec::new();
    let mut edges: Vec<AnalysisEdge> = Vec::new();
    let mut pair_index: HashMap<(InteractionTerm, MultiTrace), usize> = HashMap::new();
    let mut sink_index: HashMap<CoverageVerdict, usize> = HashMap::new();
    let mut queue: VecDeque<usize> = VecDeque::new();

    let root_key = (term.clone(), mu.clone());
    vertices.push(AnalysisVertex::Pair {
        term: term.clone(),
        multi_trace: mu.clone(),
    });
    pair_index.insert(root_key, 0);
    queue.push_back(0);

    let mut expanded = 0usize;
    while let Some(v) = queue.pop_front() {
        expanded += 1;
        if let Some(budget) = node_budget {
            if expanded > budget {
                return Err(AnalysisError::BudgetExhausted { budget });
            }
        }
        let (t, m) = match &vertices[v] {
            AnalysisVertex::Pair { term, multi_trace } => (term.clone(), multi_trace.clone()),
            AnalysisVertex::Sink(_) => unreachable!("only pairs are queued"),
        };
        for successor in step_successors(&t, &m, mode) {
            let to = match &successor.vertex {
                AnalysisVertex::Sink(verdict) => *sink_index.entry(*verdict).or_insert_with(|| {
                    vertices.push(AnalysisVertex::Sink(*verdict));
                    vertices.len() - 1
                }),
                AnalysisVertex::Pair { term, multi_trace } => {
                    let key = (term.clone(), multi_trace.clone());
                    match pair_index.get(&key) {
                        Some(&idx) => idx,
                        None => {
                            vertices.push(successor.vertex.clone());
                            let idx = vertices.len() - 1;
                            pair_index.insert(key, idx);
                            queue.push_back(idx);
                            idx
                        }
                    }
                }
            };
            edges.push(AnalysisEdge {
                from: v,
                to,
                rule: successor.rule,
                step: successor.step,
            });
        }
    }
    Ok(AnalysisGraph { vertices, edges })
}
