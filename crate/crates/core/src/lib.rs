//! Exact-arithmetic tools for the polynomial method over algebraic
//! varieties.

pub mod bounds;
pub mod combination;
pub mod decompose;
pub mod envelope;
pub mod error;
pub mod factor;
pub mod fixtures;
pub mod grid;
pub mod groebner;
pub mod hamsandwich;
pub mod ideal;
pub mod incidence;
pub mod linalg;
pub mod monomial;
pub mod partition;
pub mod poly;
pub mod profile;
pub mod rational;
pub mod serde_rational;
pub mod sharp;
pub mod siegel;
pub mod variety;

pub use error::{Error, Result};
pub use ideal::Ideal;
pub use monomial::{Monomial, MonomialOrder, OrderKind};
pub use poly::{Polynomial, RationalPoint};
pub use rational::Rational;
pub use variety::Variety;
