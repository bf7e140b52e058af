use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("grid size {0} is not a power of two (n_points must be a power of two and at least 8)")]
    GridSize(usize),
    #[error("grid bounds must satisfy x_max > x_min (got x_min = {x_min}, x_max = {x_max})")]
    GridBounds { x_min: f64, x_max: f64 },
    #[error("physical parameters must be finite and strictly positive (hbar = {hbar}, mass = {mass})")]
    PhysParams { hbar: f64, mass: f64 },
    #[error("grid uses hbar = {grid} but the physical parameters use hbar = {phys}")]
    HbarMismatch { grid: f64, phys: f64 },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("fields are in different representations")]
    RepresentationMismatch,
    #[error("field is already in the {0:?} representation")]
    SameRepresentation(crate::numerics::Representation),
    #[error("amplitude count {got} does not match grid size {expected}")]
    AmplitudeLength { expected: usize, got: usize },
    #[error("invalid window: {0}")]
    Window(String),
    #[error("quadrature did not converge: estimate {value} with error {error:e} after {subdivisions} subdivisions")]
    Quadrature { value: String, error: f64, subdivisions: usize },
    #[error("invalid oscillatory integral: {0}")]
    Integral(String),
    #[error("Airy argument {0} is outside the supported domain z >= -1000")]
    AiryDomain(f64),
    #[error("state is not resolvable on this grid: {0}")]
    Unresolved(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("field support leaves the usable window: {0}")]
    WindowEscape(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, LabError>;
