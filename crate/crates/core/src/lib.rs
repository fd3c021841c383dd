//! Interaction models for distributed systems: term algebra, small-step
//! execution, bounded trace semantics, and multi-trace membership analysis.
//!
//! An interaction term describes the message exchanges a system may perform.
//! Executions are read either as global traces (totally ordered) or as
//! multi-traces (one local trace per lifeline). This crate decides whether a
//! multi-trace is accepted by a term, enumerates bounded trace semantics,
//! and generates hardness witness instances from 1-in-3-SAT formulas.

pub mod analysis;
pub mod error;
pub mod explore;
pub mod position;
pub mod sat;
pub mod term;
pub mod trace;

pub use analysis::{
    analysis_graph, analyze, omega, omega_tilde, step_successors, AnalysisEdge, AnalysisError,
    AnalysisGraph, AnalysisMode, AnalysisOutcome, AnalysisVertex, ConsumeStep, CoverageVerdict,
    GlobalVerdict, RuleId, SearchConfig, SearchStrategy, Successor,
};
pub use error::CoreError;
pub use explore::{
    accepted_multitraces, accepted_traces, explore_tree, is_accepted_trace, ExecutionEdge,
    ExecutionTree, ExplorationBound,
};
pub use position::Position;
pub use sat::{
    brute_force_1in3, parse_dimacs, reduce, satisfies_one_in_three, verify_reduction, Assignment,
    CnfFormula3, Literal, ReducedInstance, SatError,
};
pub use term::{BinaryOp, InteractionTerm, LoopKind};
pub use trace::{
    project, Action, Direction, GlobalTrace, LifelineId, MessageId, MultiTrace, Signature,
};
