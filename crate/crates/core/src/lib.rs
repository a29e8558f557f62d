//! Probabilistic defeasible argumentation with presumptions.
//!
//! The crate combines an environmental model (probabilistic formulas solved
//! by exact-arithmetic linear programming), an analytical model (defeasible
//! argumentation with presumptions) and the annotation functions linking
//! them, together with a belief revision operator over those annotations.

pub mod am;
pub mod em;
pub mod fixtures;
pub mod lang;
pub mod par;
pub mod pp;
pub mod revision;
