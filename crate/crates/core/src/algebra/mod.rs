//! Free graded-commutative algebras over the rationals.
//!
//! Every element the engine manipulates lives in some tensor product
//! `B ⊗ ΛW ⊗ ΛW ⊗ ΛW ⊗ Λ(t, dt)`. Instead of separate algebra objects, each
//! variable carries a [`Space`] tag telling which tensor factor it belongs to,
//! and all of those factors share one canonical monomial order.

mod basis;
mod maps;
mod monomial;
mod polynomial;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use basis::{basis_of_degree, GradedBasis};
pub use maps::{AlgebraMap, Derivation};
pub use monomial::Monomial;
pub use polynomial::Polynomial;

use crate::Error;

/// Exact rational coefficients.
pub type Q = num_rational::BigRational;

/// Tensor factor a variable belongs to.
///
/// The derived order is the block order of canonical monomials: base
/// generators first, then the three copies of the fibre, then the interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Space {
    Base,
    W0,
    W1,
    W2,
    Interval,
}

impl Space {
    pub const FIBER_COPIES: [Space; 3] = [Space::W0, Space::W1, Space::W2];

    pub fn is_fiber(self) -> bool {
        matches!(self, Space::W0 | Space::W1 | Space::W2)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Space::Base => "base",
            Space::W0 => "w0",
            Space::W1 => "w1",
            Space::W2 => "w2",
            Space::Interval => "interval",
        }
    }

    pub fn parse(s: &str) -> Option<Space> {
        Some(match s {
            "base" => Space::Base,
            "w0" => Space::W0,
            "w1" => Space::W1,
            "w2" => Space::W2,
            "interval" => Space::Interval,
            _ => return None,
        })
    }
}

/// A generator of the ambient free algebra.
///
/// `index` numbers base generators and fibre generators separately; the three
/// fibre copies share indices. The degree travels with the variable so that
/// Koszul signs can be computed without a generator table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub space: Space,
    pub index: u32,
    pub degree: u32,
}

impl Var {
    /// The interval coordinate `t`, of degree 0.
    pub const T: Var = Var { space: Space::Interval, index: 0, degree: 0 };
    /// Its differential `dt`, of degree 1.
    pub const DT: Var = Var { space: Space::Interval, index: 1, degree: 1 };

    pub const fn base(index: u32, degree: u32) -> Var {
        Var { space: Space::Base, index, degree }
    }

    pub const fn fiber(index: u32, degree: u32) -> Var {
        Var { space: Space::W0, index, degree }
    }

    pub fn is_odd(self) -> bool {
        self.degree % 2 == 1
    }

    pub fn is_fiber(self) -> bool {
        self.space.is_fiber()
    }

    /// The same fibre generator in another copy.
    pub fn in_copy(self, space: Space) -> Var {
        debug_assert!(self.is_fiber() && space.is_fiber());
        Var { space, ..self }
    }
}

/// A named generator with its global id (its position in a [`GeneratorTable`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: usize,
    pub name: String,
    pub var: Var,
}

impl Generator {
    pub fn degree(&self) -> u32 {
        self.var.degree
    }

    pub fn space(&self) -> Space {
        self.var.space
    }
}

/// Registry of every generator of a model, including fibre copies and the
/// interval generators.
#[derive(Clone, Debug, Default)]
pub struct GeneratorTable {
    generators: Vec<Generator>,
}

impl GeneratorTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, var: Var) -> usize {
        let id = self.generators.len();
        self.generators.push(Generator { id, name: name.into(), var });
        id
    }

    pub fn get(&self, id: usize) -> Option<&Generator> {
        self.generators.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.generators.iter()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn find(&self, space: Space, name: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.var.space == space && g.name == name)
    }

    pub fn lookup(&self, var: Var) -> Option<&Generator> {
        self.generators.iter().find(|g| g.var == var)
    }

    /// Sorts an unordered product of generators into canonical order.
    ///
    /// Returns the canonical monomial and the Koszul sign picked up on the
    /// way; the sign is 0 when an odd generator occurs twice.
    pub fn normalize_monomial(&self, raw: &[(usize, u32)]) -> Result<(Monomial, i8), Error> {
        let factors = raw
            .iter()
            .map(|&(id, e)| self.get(id).map(|g| (g.var, e)).ok_or(Error::UnknownGenerator(id)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Monomial::normalize(factors))
    }
}

/// Something that can print variables.
pub trait Namer {
    fn var_name(&self, var: Var) -> String;
}

/// Fallback names: `b0`, `w3`, `w3'`, `w3''`, `t`, `dt`.
pub struct PlainNames;

impl Namer for PlainNames {
    fn var_name(&self, var: Var) -> String {
        use alloc::format;
        match var.space {
            Space::Base => format!("b{}", var.index),
            Space::W0 => format!("w{}", var.index),
            Space::W1 => format!("w{}'", var.index),
            Space::W2 => format!("w{}''", var.index),
            Space::Interval => String::from(if var.index == 0 { "t" } else { "dt" }),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&PlainNames.var_name(*self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> GeneratorTable {
        let mut t = GeneratorTable::new();
        t.push("b3", Var::base(0, 3));
        t.push("w3", Var::fiber(0, 3));
        t.push("w5", Var::fiber(1, 5));
        t.push("w3", Var::fiber(0, 3).in_copy(Space::W1));
        t
    }

    #[test]
    fn unknown_generator_is_reported() {
        assert_eq!(table().normalize_monomial(&[(7, 1)]), Err(Error::UnknownGenerator(7)));
    }

    #[test]
    fn odd_square_vanishes() {
        let (_, sign) = table().normalize_monomial(&[(1, 1), (1, 1)]).unwrap();
        assert_eq!(sign, 0);
    }

    #[test]
    fn second_copy_moves_past_first_with_sign() {
        let t = table();
        let (m, sign) = t.normalize_monomial(&[(3, 1), (1, 1)]).unwrap();
        assert_eq!(sign, -1);
        let (expected, s) = t.normalize_monomial(&[(1, 1), (3, 1)]).unwrap();
        assert_eq!((m, s), (expected, 1));
    }

    /// Independent oracle: bubble sort with one sign flip per odd-odd swap.
    fn bubble_sign(mut items: Vec<(Var, u32)>) -> i8 {
        let mut sign = 1i8;
        for i in 0..items.len() {
            for j in 0..items.len() - 1 - i {
                if items[j].0 > items[j + 1].0 {
                    if items[j].0.is_odd() && items[j + 1].0.is_odd() {
                        sign = -sign;
                    }
                    items.swap(j, j + 1);
                }
            }
        }
        sign
    }

    #[test]
    fn three_odd_factors_form_an_even_permutation() {
        let t = table();
        // w5 · b3 · w3  ->  b3 · w3 · w5
        let raw = [(2, 1), (0, 1), (1, 1)];
        let oracle = bubble_sign(raw.iter().map(|&(id, e)| (t.get(id).unwrap().var, e)).collect());
        assert_eq!(oracle, 1);
        let (m, sign) = t.normalize_monomial(&raw).unwrap();
        assert_eq!(sign, oracle);
        let (expected, _) = t.normalize_monomial(&[(0, 1), (1, 1), (2, 1)]).unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn space_names_round_trip() {
        for s in [Space::Base, Space::W0, Space::W1, Space::W2, Space::Interval] {
            assert_eq!(Space::parse(s.as_str()), Some(s));
        }
    }
}
