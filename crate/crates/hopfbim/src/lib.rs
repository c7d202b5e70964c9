//! Exact computation in the Morita theory of half-braided algebras over
//! finite-dimensional (co)quasitriangular ribbon Hopf algebras: transmuted
//! coend algebras, compatible bimodules with braiding and balance, Drinfeld
//! maps and quantum moment maps, internal End/Hom functors, and an evaluator
//! for a cobordism generator alphabet.
//!
//! All arithmetic is exact (rationals, cyclotomics, prime fields); every
//! construction is validated by machine-checkable axiom suites.

pub mod cobeval;
pub mod coend;
pub mod drinfeld;
pub mod error;
pub mod fixtures;
pub mod hopf;
pub mod iend;
pub mod io;
pub mod linalg;
pub mod morita;
pub mod rep;
pub mod scalar;
pub mod suite;
pub mod tensor;
