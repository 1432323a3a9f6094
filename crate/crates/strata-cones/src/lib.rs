//! Exact-arithmetic cone calculus for cyclic chain-diagram strata.
//!
//! The library is organized in four layers:
//!
//! * [`cyclic`] — arithmetic on the cyclic index circle `{1, …, n}`: index
//!   sets, cyclic intervals, chain diagrams, admissibility, and the sign-set
//!   map `phi`.
//! * [`polycone`] — exact rational polyhedral cones over the integer lattice:
//!   double-description conversion between inequality and generator form,
//!   intersection, saturated sum, and membership with certificates.  No
//!   floating point anywhere.
//! * [`pcone`] — cones cut out by `p`-expressions (inequalities whose
//!   coefficients are signed powers of a prime `p`): stratum contexts,
//!   the partial-Hasse cone built by two independent routes, kernels,
//!   generator weights, and the derived cone families.
//! * [`verify`] — exhaustive verification suites over a desk-scale envelope
//!   of stratum contexts, producing deterministic JSON reports.
//!
//! All computation is exact: coefficients are arbitrary-precision integers
//! (or integer polynomials in `p` in symbolic mode), and every cone is
//! understood as the set of integer points of its rational hull.

pub mod cyclic;
pub mod pcone;
pub mod polycone;
pub mod verify;
