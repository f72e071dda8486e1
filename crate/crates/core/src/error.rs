use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A real argument fell outside the domain of the operation.
    Domain { name: &'static str, value: f64 },
    /// An integer argument violated a precondition.
    InvalidArgument(&'static str),
    /// The coefficient set does not carry enough terms for the requested truncation.
    OrderTooSmall { required: usize, available: usize },
    /// The coefficient set was drawn for a different expansion.
    KindMismatch,
    /// A variance that is non-negative analytically came out negative.
    NegativeVariance(f64),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { name, value } => write!(f, "{name} = {value} is outside the domain"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::OrderTooSmall { required, available } => write!(
                f,
                "coefficient order {available} is too small, need at least {required}"
            ),
            Error::KindMismatch => write!(f, "coefficient set has the wrong expansion kind"),
            Error::NegativeVariance(v) => write!(f, "variance computed negative: {v}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain { name, value })
    }
}
