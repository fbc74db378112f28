use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("enumeration too large: |E|^n = {requested} words exceeds cap {cap}")]
    EnumerationTooLarge { requested: u128, cap: u64 },

    #[error("word is not admissible: pair ({left}, {right}) at position {index} has A = 0")]
    InadmissibleWord {
        index: usize,
        left: String,
        right: String,
    },

    #[error("empty word has no associated map")]
    EmptyWord,

    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("edge `{edge}` is not a contraction: certified Lipschitz bound {lip}")]
    NotContraction { edge: String, lip: f64 },

    #[error("edge `{edge}` does not map its seed into the target seed (escape {escape:.3e})")]
    SeedNotInvariant { edge: String, escape: f64 },

    #[error("incidence pair ({e}, {f}) invalid: requires t({e}) = i({f}) so the maps compose")]
    IncidenceMismatch { e: String, f: String },

    #[error("system is not uniformly contracting (lambda = {lambda}); operation requires lambda < 1")]
    NotUniformlyContracting { lambda: f64 },

    #[error("map does not support region kind {region} here: {detail}")]
    UnsupportedRegion { region: String, detail: String },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("measure query radius {r:.3e} is below the resolution floor {floor:.3e}")]
    BelowResolutionFloor { r: f64, floor: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("julia: {0}")]
    Julia(String),

    #[error("pressure enclosure unresolved at depth cap {depth}: [{lo}, {hi}] does not certify a sign")]
    Unresolved { depth: usize, lo: f64, hi: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),
}
