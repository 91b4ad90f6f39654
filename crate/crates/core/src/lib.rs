//! Computational toolkit for sieving problems around exceptional characters.
//!
//! * [`primes`]: prime tables, Liouville's λ, Mertens products, primorials.
//! * [`sieve_functions`]: Dickman ρ, Buchstab ω and the linear sieve
//!   functions F, f.
//! * [`interval`]: exact survivor sets of `(x, x+y]` for arbitrary-precision
//!   `x`, rough-number and almost-prime counts.
//! * [`dirichlet`]: Kronecker symbols, `L(s, χ_d)` at real `s`, real-zero
//!   scans, prime counts in progressions and the parity bias table.
//! * [`constructions`]: greedy residue-class thinning, CRT, admissible sets,
//!   prime-gap certificates and Jacobsthal's function.
//! * [`heuristics`]: bound formulas, the sieve envelope check and maximal
//!   prime gaps.

// `!(a > b)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod budget;
pub mod constructions;
mod decimal;
pub mod dirichlet;
pub mod error;
pub mod heuristics;
pub mod interval;
pub mod primes;
pub mod sieve_functions;

pub use budget::Budget;
pub use constructions::{
    AdmissibleSet, Congruence, CongruenceSystem, GapCertificate, GapMatch, ResidueClassPlan, ThinMode,
};
pub use dirichlet::{ApCounts, BiasRow, BiasTable, QuadChar, ZeroScanReport};
pub use error::{Error, Result};
pub use heuristics::{CramerPrediction, EnvelopeReport, GapRecord, HeuristicParams, ParityReport, Prop3Case};
pub use interval::{IntervalSpec, Progression, RoughCounts, SieveOptions, SurvivorSet};
pub use primes::{Factorization, PrimeTable};
pub use sieve_functions::{SieveFunctionGrid, SieveFunctionRow};
