use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Top-level error. Each variant maps to one failure category so that front
/// ends can translate errors into exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("line {line}: malformed header: {msg}")]
    MalformedHeader { line: usize, msg: String },
    #[error("line {line}: unsupported element type {element_type}")]
    UnsupportedElement { line: usize, element_type: u32 },
    #[error("line {line}: node index {index} out of range")]
    IndexOutOfRange { line: usize, index: usize },
    #[error("line {line}: parse error: {msg}")]
    Parse { line: usize, msg: String },
    #[error("tetrahedron {tet} references vertex {vertex}, but the mesh has {n_vertices} vertices")]
    VertexOutOfRange { tet: usize, vertex: usize, n_vertices: usize },
    #[error("tetrahedron {tet} repeats a vertex")]
    RepeatedVertex { tet: usize },
    #[error("face {face:?} is shared by {count} tetrahedra")]
    NonManifold { face: [usize; 3], count: usize },
    #[error("invalid generator argument: {0}")]
    InvalidArgument(String),
    #[error("invalid mesh json: {0}")]
    Json(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AssemblyError {
    #[error("tetrahedron {tet} is degenerate (volume {volume:e})")]
    DegenerateTet { tet: usize, volume: f64 },
    #[error("boundary triangle {tri} has a normal that points into its tetrahedron")]
    Orientation { tri: usize },
    #[error("material is not passive at {location}: {detail}")]
    NonPassiveMaterial { location: String, detail: String },
    #[error("{field} is not coercive at {location}: Re part has eigenvalue {value:e}, need c > 0 with c|ξ|² <= Re(ξ^H {field} ξ)")]
    NotCoercive { location: String, field: &'static str, value: f64 },
    #[error("bad material specification: {0}")]
    Material(String),
    #[error("rank deficiency: {0}")]
    RankDeficient(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("dense problem dimension {dim} exceeds the cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("pencil has inconsistent dimensions: {0}")]
    Dimension(String),
    #[error("factorization failed: {0}")]
    Factorization(String),
    #[error("iteration did not converge after {iterations} steps (worst residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("invalid solver argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("degree {degree}: wavenumber {k} sits on an interior resonance at {root}")]
    Resonance { degree: usize, k: f64, root: f64 },
    #[error("root bracketing failed on [{a}, {b}]")]
    BracketFailure { a: f64, b: f64 },
    #[error("invalid oracle parameters: {0}")]
    InvalidArgument(String),
}
