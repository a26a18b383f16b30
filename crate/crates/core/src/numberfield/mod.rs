//! Totally real cubic fields: defining polynomials with certified real
//! embeddings, maximality and splitting at rational primes, unit groups with
//! a certified box enumeration, regulators, and a Minkowski-bound class
//! number certificate.
//!
//! A field is presented by a monic irreducible cubic `x^3 + a x^2 + b x + c`
//! over the integers. For a totally real presentation the three real roots
//! `rho_1 > rho_2 > rho_3` give the embeddings; a unit `u = c_0 + c_1 theta
//! + c_2 theta^2` of norm `+-1` maps to the chamber point
//!
//! ```text
//! alpha_k(u) = k (3 - k) log(|u_(k)| / |u_(k+1)|),    k = 1, 2,
//! ```
//!
//! where `|u_(1)| >= |u_(2)| >= |u_(3)|` are the absolute embedding values in
//! descending order. The unit-box count weights each field by `R h lambda`
//! (regulator, class number, and the product of residue degrees over a set
//! of non-decomposed primes); [`field_to_spectrum`] packages the same data
//! as geodesic classes so the volume count over the generated spectrum
//! reproduces the unit-box total exactly.
//!
//! All integer quantities (norms, discriminants, resultants, root
//! certification) are computed exactly; floating point enters only through
//! logarithms and embedding approximations read off certified intervals.

mod fields;
mod poly;
mod units;

pub use fields::{
    are_isomorphic, c_constant, enumerate_fields, enumerate_units_in_box, field_to_spectrum,
    find_fundamental_units, lambda_s, minkowski_h1_certificate, theta_entries, theta_weight,
    validate_ingested, Certifications, EnumerationConfig, FieldRecord, MinkowskiCertificate,
    PrimeSetPolicy, RecordSource,
};
pub use poly::{
    dedekind_maximal_at_p, factor_cubic_mod_p, splitting_type, CubicPoly, RootInterval,
    SplittingType, DEFAULT_ROOT_PRECISION,
};
pub use units::{
    norm, regulator, resultant_norm, unit_inverse, unit_mul, unit_pow, CompletenessCertificate,
    UnitElement, UnitStatus,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NumberFieldError {
    #[error("x^3 + {a} x^2 + {b} x + {c} is reducible over the rationals")]
    Reducible { a: i64, b: i64, c: i64 },
    #[error("coefficient {0} exceeds the supported magnitude {1}")]
    CoefficientTooLarge(i64, i64),
    #[error("precision {0} is not a positive finite real")]
    BadPrecision(f64),
    #[error("polynomial is not totally real (three real roots required)")]
    NotTotallyReal,
    #[error("{0} is not a prime number")]
    NotPrime(u64),
    #[error("order is not maximal at {p}; splitting through the defining polynomial is unreliable there")]
    NotMaximalAt { p: u64 },
    #[error("element {0:?} is the zero element")]
    ZeroElement([i64; 3]),
    #[error("element has norm {0}, not a unit")]
    NotAUnit(i128),
    #[error("integer overflow in unit coordinate arithmetic; exponents too large for this presentation")]
    CoordinateOverflow,
    #[error("search up to coordinate height {bound} found fewer than two independent units")]
    InsufficientUnits { bound: i64 },
    #[error("unit pair is multiplicatively dependent (log-embedding determinant below 1e-12)")]
    DependentUnits,
    #[error("strict box enumeration requires table-confirmed fundamental units")]
    UncertifiedUnits,
    #[error("box bound {0} is not a finite nonnegative real")]
    BadBox(f64),
    #[error("box enumeration grid of {0} exponent pairs exceeds the supported size")]
    BoxTooLarge(u128),
    #[error("record is missing {0}")]
    MissingData(&'static str),
    #[error("unit lattice reduction did not stabilize")]
    ReductionFailed,
    #[error("norm {0} is not +-1")]
    NormNotUnit(i128),
    #[error("stored regulator {stored} does not match recomputed {recomputed} to 1e-9 relative")]
    RegulatorMismatch { stored: f64, recomputed: f64 },
    #[error("stored field discriminant {stored} does not match the polynomial discriminant {computed}")]
    DiscMismatch { stored: i128, computed: i128 },
    #[error("class number {0} must be at least 1")]
    BadClassNumber(u64),
    #[error("regulator {0} is not a positive finite real")]
    BadRegulator(f64),
    #[error("prime {p} is decomposed (more than one prime above it)")]
    Decomposed { p: u64 },
    #[error("the non-decomposed prime set has {0} elements; at least two are required without the override policy")]
    TooFewPrimes(usize),
    #[error("degree {0} is not a prime at least 3")]
    BadDegree(u32),
    #[error("discriminant bound {0} must be positive")]
    BadDiscBound(i128),
    #[error("enumeration configuration bound {0} must be positive")]
    BadConfigBound(i64),
    #[error(transparent)]
    Chamber(#[from] crate::chamber::ChamberError),
}
