use core::fmt;

/// Result alias used across the crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the numerical routines.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// An input violated a stated constraint (e.g. `v0·v0 = 1`).
    Constraint { name: &'static str, residual: f64 },
    /// A parameter was outside its admissible domain.
    InvalidInput(&'static str),
    /// The event sits on (or numerically at) the singular set of a map.
    Singular { residual: f64 },
    /// A grid point of a pushforward landed on a singular set.
    SingularGridPoint { index: usize, tau: f64, residual: f64 },
    /// Every sample of a light ray lies in the singular set.
    SingularRay,
    /// Requested proper time outside the sampled range (including the stencil).
    OutOfRange { value: f64, min: f64, max: f64 },
    /// Finite-difference step is too coarse for the data it acts on.
    StepTooLarge { step: f64, limit: f64 },
    /// Sampled data is too short for the interpolation window.
    InsufficientSamples { needed: usize, got: usize },
    /// Sample abscissae (or values of a ray rule) are not strictly increasing.
    NotMonotone { index: usize },
    /// Evaluation at the pole of a homography.
    Pole { at: f64 },
    /// Spectral relation evaluated at zero frequency.
    ZeroFrequency,
    /// Two independent evaluation routes disagree.
    Inconsistent { what: &'static str, residual: f64 },
    /// A truncated integral did not converge at the given cutoff.
    NonConvergence { tail_bound: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Constraint { name, residual } => {
                write!(f, "constraint `{name}` violated (residual {residual:e})")
            }
            Error::InvalidInput(what) => write!(f, "invalid input: {what}"),
            Error::Singular { residual } => {
                write!(f, "event on singular set (residual {residual:e})")
            }
            Error::SingularGridPoint {
                index,
                tau,
                residual,
            } => write!(
                f,
                "grid point {index} (tau = {tau}) maps onto the singular set (residual {residual:e})"
            ),
            Error::SingularRay => write!(f, "light ray lies entirely within a singular set"),
            Error::OutOfRange { value, min, max } => {
                write!(f, "{value} outside sampled range [{min}, {max}]")
            }
            Error::StepTooLarge { step, limit } => {
                write!(f, "step {step:e} too large (limit {limit:e})")
            }
            Error::InsufficientSamples { needed, got } => {
                write!(f, "need at least {needed} samples, got {got}")
            }
            Error::NotMonotone { index } => {
                write!(f, "samples not strictly increasing at index {index}")
            }
            Error::Pole { at } => write!(f, "homography evaluated at its pole u = {at}"),
            Error::ZeroFrequency => write!(f, "spectral relation undefined at zero frequency"),
            Error::Inconsistent { what, residual } => {
                write!(f, "{what}: routes disagree (residual {residual:e})")
            }
            Error::NonConvergence { tail_bound } => {
                write!(f, "integral not converged at cutoff (tail bound {tail_bound:e})")
            }
        }
    }
}

impl core::error::Error for Error {}
