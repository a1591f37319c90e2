//! Finite multi-agent S4: formulas, relational and topological semantics,
//! trust, and the epistemic reading of empirical models.

mod axioms;
mod formula;
mod kripke;
mod topology;
mod translate;

use thiserror::Error;

pub use axioms::{
    check_axioms, check_trust, check_trustworthy, fundamental_truth_check, semantic_closure,
    trust_instance, AxiomReport, AxiomWitness, FundamentalTruthReport, Schema, SchemaResult,
    TrustFailure, TrustFlavor,
};
pub use formula::{parse, Formula, SyntaxError};
pub use kripke::{
    identity_relation, image, intersection_relation, is_reflexive, is_transitive, necessity,
    total_relation, union_relation, Relation, TopoModel,
};
pub use topology::{eval_topological, relation_of, topologies, topology_of, Topology};
pub use translate::{soundness_violations, translate, MultiAgentScenario, SoundnessWitness, WorldKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModalError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("unknown agent {0}")]
    UnknownAgent(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("unknown world {0}")]
    UnknownWorld(String),
    #[error("duplicate {0}")]
    Duplicate(String),
    #[error("malformed model: {0}")]
    Malformed(String),
    #[error("agent set is empty")]
    EmptyAgentSet,
    #[error("relation of agent {agent} is not S4: {reason}")]
    NotS4 { agent: String, reason: String },
    #[error("not an Alexandrov topology: {0}")]
    NotAlexandrov(String),
    #[error("{truster} does not trust {trusted}")]
    TrustPreconditionFailed { truster: String, trusted: String },
    #[error("scenario is not connected")]
    Disconnected,
    #[error("model is disturbing")]
    DisturbingModel,
    #[error("multi-agent scenario was not translated from this model")]
    Mismatch,
}
