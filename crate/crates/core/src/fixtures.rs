//! Named example varieties and ideals.

use crate::error::{Error, Result};
use crate::groebner::Budget;
use crate::ideal::Ideal;
use crate::poly::poly;
use crate::variety::{Parameterization, Variety};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fixture {
    pub name: &'static str,
    pub n: usize,
    pub generators: &'static [&'static str],
    /// Whether the ideal is prime (so it defines a `Variety`).
    pub prime: bool,
}

pub const FIXTURES: &[Fixture] = &[
    Fixture { name: "twisted-cubic", n: 3, generators: &["x1 - x0^2", "x2 - x0^3"], prime: true },
    Fixture { name: "circle", n: 2, generators: &["x0^2 + x1^2 - 1"], prime: true },
    Fixture { name: "line-in-3-space", n: 3, generators: &["x1 - x0", "x2 + x0 - 1"], prime: true },
    Fixture { name: "cubic-union-line", n: 3, generators: &["x1 - x0^2", "x0*x2 - x1^2"], prime: false },
    Fixture { name: "four-points", n: 2, generators: &["x0^2 - 1", "x1^2 - 1"], prime: false },
    Fixture { name: "parabola", n: 2, generators: &["x1 - x0^2"], prime: true },
    Fixture { name: "plane-conic", n: 2, generators: &["x0*x1 - 1"], prime: true },
    Fixture { name: "plane-cubic", n: 2, generators: &["x1^2 - x0^3 - x0"], prime: true },
    Fixture { name: "plane-quartic", n: 2, generators: &["x1 - x0^4 + x0"], prime: true },
    Fixture { name: "plane", n: 2, generators: &[], prime: true },
    Fixture { name: "space", n: 3, generators: &[], prime: true },
];

pub fn find(name: &str) -> Result<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name).ok_or_else(|| Error::NotFound(format!("fixture {name}")))
}

pub fn ideal(name: &str) -> Result<Ideal> {
    let f = find(name)?;
    Ideal::parse(f.n, f.generators)
}

/// The variety of a prime fixture, with a point oracle where one is known.
pub fn variety(name: &str) -> Result<Variety> {
    variety_with(name, Budget::default())
}

pub fn variety_with(name: &str, budget: Budget) -> Result<Variety> {
    let f = find(name)?;
    if !f.prime {
        return Err(Error::PreconditionViolated(format!("{name} is not irreducible")));
    }
    let v = Variety::new(Ideal::parse(f.n, f.generators)?.with_budget(budget))?;
    match name {
        "circle" => v.with_parameterization(Parameterization::rational(
            vec![poly("1 - x0^2", 1), poly("2*x0", 1)],
            poly("1 + x0^2", 1),
        )?),
        "plane-conic" => v.with_parameterization(Parameterization::rational(
            vec![poly("x0^2", 1), poly("1", 1)],
            poly("x0", 1),
        )?),
        _ => Ok(v),
    }
}
