//! Braided tensor algebras, symmetric-algebra towers, Nichols algebras and
//! universal enveloping algebras of braided Lie algebras, computed exactly
//! up to a fixed tensor degree.

pub mod braided;
pub mod enveloping;
pub mod linalg;
pub mod tower;
