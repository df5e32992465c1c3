//! Exact computation of spline space dimensions over planar meshes whose
//! edges are arcs of algebraic curves.
//!
//! The library computes, entirely in rational arithmetic:
//!
//! * dimensions of the spaces `C^r_d` of piecewise polynomial functions of
//!   degree at most `d` with smoothness `r` across curved edges
//!   ([`splinespace`]),
//! * per-degree dimensions of the associated ideal complexes and the
//!   Euler-characteristic dimension identity ([`homology`]),
//! * Hilbert polynomial fits, postulation numbers and Hilbert series
//!   numerators ([`hilbert`]),
//! * transfers along nets of forms, relating a curved mesh to a rectilinear
//!   image mesh ([`net`]),
//! * genericity verification and the closed-form dimension formula with its
//!   degree bound ([`generic`]).
//!
//! Coefficients live in ℚ throughout.  Dimension counts over ℚ agree with
//! those over ℝ for rational input data since matrix rank does not change
//! under field extension.

pub mod exactalg;
pub mod generic;
pub mod hilbert;
pub mod homology;
pub mod mesh;
pub mod net;
pub mod splinespace;

pub use exactalg::{monomial_basis, parse_form, Form, RatMatrix, Rational};

