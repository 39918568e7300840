//! Exact computation of the Links-Gould invariant of braid closures, with an
//! Alexander oracle, closed-form family evaluators and a conjecture harness.

pub mod alexander;
pub mod braid;
pub mod families;
pub mod lgcore;
pub mod poly2;
pub mod verify;

pub use braid::BraidWord;
pub use lgcore::lg_invariant;
pub use poly2::{Laurent1, Laurent2, Rat2};
