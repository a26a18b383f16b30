//! Weighted lattice counting in Weyl chambers.
//!
//! The crate models spectra of "geodesic classes": points in the positive
//! orthant `R_+^r` (the `r` coordinates are simple-root lengths of a chamber
//! element) carrying a positive volume weight and a determinant factor.
//! On top of that data model it provides
//!
//! * counting functions over coordinate boxes (`counting`): volume counts,
//!   index counts, higher-moment counts, and their ratio reports against
//!   product-shaped normalizers;
//! * generalized Dirichlet series in `r` complex variables with a
//!   pole-term model and a quadrature cross-check of the closed-form chamber
//!   integral (`dirichlet`);
//! * a numerical Tauberian harness (`tauberian`): squared-mollifier kernels
//!   with nonnegative Fourier transform, moment-limit checks, smoothed
//!   counting integrals and normalized-count profiles;
//! * totally real cubic fields (`numberfield`): enumeration by discriminant,
//!   certified real embeddings, unit search, regulators, box enumeration of
//!   units in alpha-coordinates, and a Minkowski-bound class-number-one
//!   certificate, feeding unit counts back into the chamber data model;
//! * plain-text file formats and experiment drivers (`io`, `experiment`)
//!   shared with the command-line interface.
//!
//! All counting reductions run in a canonical order with compensated
//! summation, so results are byte-identical regardless of worker count.

pub mod chamber;
pub mod counting;
pub mod dirichlet;
pub mod experiment;
pub mod io;
pub mod numberfield;
pub mod numeric;
pub mod tauberian;

pub mod guide;

pub use chamber::{ChamberBasis, GeodesicClass, Provenance, Spectrum};
pub use counting::{BoundConvention, CountQuery};
