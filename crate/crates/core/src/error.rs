use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("point is not on SL(2,R): <p,p> = {norm}")]
    OffManifold { norm: f64 },

    #[error("vector is not tangent to SL(2,R): <X,p> = {dot}")]
    NotTangent { dot: f64 },

    #[error("matrix is not in U1(2): neither commutes nor anticommutes with J1")]
    NotInU12,

    #[error("degenerate tangent plane (pivot {pivot:e})")]
    DegenerateTangentPlane { pivot: f64 },

    #[error("null normal: g_tau(n,n) = {norm:e}")]
    NullNormal { norm: f64 },

    #[error("angle degenerate: sin(theta) = {sin_theta:e}")]
    AngleDegenerate { sin_theta: f64 },

    #[error("degenerate v-decomposition: b = {b:e}")]
    DegenerateDecomposition { b: f64 },

    #[error("{what} = {value} lies outside [{min}, {max}]")]
    Domain {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("singular constraint at v = {v}: coefficient of xi2' is {coefficient:e}")]
    SingularConstraint { v: f64, coefficient: f64 },

    #[error("closed form is singular at u = {u}")]
    Singularity { u: f64 },

    #[error("theta = pi/2: the surface is a Hopf cylinder")]
    HopfCylinder,

    #[error(
        "theta = 0 is impossible: the horizontal distribution of the Hopf map is not integrable"
    )]
    NonIntegrable,

    #[error("case mismatch: family is {family}, parameters are {params}")]
    CaseMismatch { family: String, params: String },

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
