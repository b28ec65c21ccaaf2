//! Exact decision procedures for principal polarizability of isogeny
//! classes of abelian surfaces over finite fields.
//!
//! An isogeny class over `F_q` is named by its Weil polynomial
//! `x^4 + a x^3 + b x^2 + a q x + q^2`. The closed-form test lives in
//! [`criteria::main_criterion`]; the CM-field machinery in [`quadring`] and
//! [`cmquartic`] supplies independent evidence (ramification, inert divisors
//! of `pi - conj(pi)`, Artin symbols) that [`criteria::cross_check`] compares
//! against it. [`tzmodel`] checks the explicit degree-9 polarization on the
//! trace-zero surface, and [`census`] enumerates whole families.
//!
//! All arithmetic is exact (`i128`); no floating point enters a decision.

pub mod census;
pub mod cmquartic;
pub mod criteria;
mod error;
pub mod intkernel;
pub mod quadring;
pub mod tzmodel;
pub mod weilpoly;

pub use error::{Error, Result};
