use crate::graph::EdgeKey;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("self-loop {0}-{0} not allowed")]
    SelfLoop(u32),
    #[error("vertex {0} out of range (graph has {1} vertices)")]
    VertexOutOfRange(u32, usize),
    #[error("edge {0} not present")]
    MissingEdge(EdgeKey),
    #[error("partial colouring: edge {0} is uncoloured")]
    PartialColouring(EdgeKey),
    #[error("colour {colour} on edge {edge} outside palette 1..={palette}")]
    ColourOutOfPalette { edge: EdgeKey, colour: u32, palette: u32 },
    #[error("improper colouring: edges {0} and {1} share a vertex and a colour")]
    ImproperColouring(EdgeKey, EdgeKey),
    #[error("isolated edge {0}: neighbour sums cannot be distinguished")]
    IsolatedEdge(EdgeKey),
    #[error("rotation system malformed: {0}")]
    MalformedRotation(String),
    #[error("rotation system does not match the graph: {0}")]
    EmbeddingMismatch(String),
    #[error("graph is not planar")]
    NonPlanar,
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("no nsd colouring with palette 1..={palette} for component containing vertex {witness}")]
    NoColouringWithPalette { palette: u32, witness: u32 },
    #[error("list precondition violated: {0}")]
    ListPrecondition(String),
    #[error("extension failed: {0}")]
    ExtensionFailed(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
