use thiserror::Error;

/// Errors shared by every module in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("coupling on edge {{{i},{j}}} is zero")]
    ZeroCoupling { i: usize, j: usize },
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("scale limit exceeded: {0}")]
    ScaleLimit(String),
    #[error("lifting stayed degenerate after {attempts} attempts")]
    DegenerateLifting { attempts: u32 },
    #[error("cell does not describe a spanning tree: {0}")]
    NotATreeCell(String),
    #[error("network still carries generic markers; sample parameters first")]
    UnresolvedGeneric,
    #[error("randomizer is numerically singular (condition estimate {cond:.2e})")]
    SingularRandomizer { cond: f64 },
    #[error("power-flow data missing")]
    MissingPFData,
    #[error("phase delays missing")]
    MissingDelays,
    #[error("coordinate {index} too close to zero for torus evaluation")]
    NearZeroCoordinate { index: usize },
    #[error("network is not unicycle")]
    NotUnicycle,
    #[error("unsupported topology: {0}")]
    WrongTopology(String),
    #[error("coupling pattern does not match: {0}")]
    WrongCouplingPattern(String),
    #[error("face subgraph outside the closed-form condition families: {0}")]
    UnsupportedFaceTopology(String),
    #[error("leaf peeling failed: {0}")]
    LeafPeelFailure(String),
    #[error("no balanced subnetwork for the given couplings")]
    NoBalancedSubnetwork,
    #[error("the unique cycle is odd")]
    OddCycle,
    #[error("cycle couplings do not have a common square")]
    NonUniformMagnitude,
    #[error("solver failed: {0}")]
    SolverFailed(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
