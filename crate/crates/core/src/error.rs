use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A valuation or logarithm was requested for zero.
    ZeroInput,
    NotPrime(u64),
    /// Homogeneous coordinates `(0, 0)`.
    BothZero,
    ZeroPolynomial,
    ZeroMap,
    /// The reduced map has degree below 2.
    DegreeTooLow(usize),
    /// `d^n` would exceed the configured degree budget.
    IterateTooLarge { degree: u128, budget: u64 },
    /// Orbit coordinates outgrew the bit budget at this orbit index.
    HeightBudgetExceeded(u64),
    ExceptionalTarget,
    PreperiodicStart,
    SecondIteratePolynomial,
    /// The modular backend only handles finite places.
    BackendUnsupported,
    RationalFiberRequired,
    NonpositiveHeight,
    InvalidEpsilon,
    /// A certified enclosure could not be narrowed enough under the cap.
    PrecisionCapReached,
    DuplicatePlace,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroInput => write!(f, "input must be nonzero"),
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::BothZero => write!(f, "homogeneous coordinates are both zero"),
            Error::ZeroPolynomial => write!(f, "polynomial is zero"),
            Error::ZeroMap => write!(f, "numerator and denominator are both zero"),
            Error::DegreeTooLow(d) => write!(f, "map has degree {d} after reduction; need at least 2"),
            Error::IterateTooLarge { degree, budget } => {
                write!(f, "iterate degree {degree} exceeds degree budget {budget}")
            }
            Error::HeightBudgetExceeded(n) => {
                write!(f, "orbit coordinates exceed the height budget at index {n}")
            }
            Error::ExceptionalTarget => write!(f, "target point is exceptional for the map"),
            Error::PreperiodicStart => write!(f, "starting point is preperiodic"),
            Error::SecondIteratePolynomial => write!(f, "second iterate of the map is a polynomial"),
            Error::BackendUnsupported => {
                write!(f, "modular backend does not support the archimedean place")
            }
            Error::RationalFiberRequired => write!(f, "fiber contains non-rational points"),
            Error::NonpositiveHeight => write!(f, "canonical height interval is not positive"),
            Error::InvalidEpsilon => write!(f, "epsilon must lie in (0, 1]"),
            Error::PrecisionCapReached => write!(f, "precision cap reached before the enclosure was narrow enough"),
            Error::DuplicatePlace => write!(f, "duplicate place in place set"),
        }
    }
}

impl core::error::Error for Error {}
