use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write as _};
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::{Monomial, Namer, PlainNames, Space, Var, Q};

/// Exact rational linear combination of canonical monomials.
///
/// Zero coefficients are never stored, so two polynomials are equal exactly
/// when their term maps are equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// Product of the given factors in the given order, Koszul signs applied.
    pub fn product(factors: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let (m, sign) = Monomial::normalize(factors);
        match sign {
            0 => Self::zero(),
            s => Self::term(m, Q::from_integer(s.into())),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common degree of all terms; `None` for zero or inhomogeneous input.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// True when every term has degree `n` (vacuously for zero).
    pub fn is_homogeneous_of(&self, n: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == n)
    }

    pub fn homogeneous_part(&self, n: u32) -> Self {
        self.filter(|m| m.degree() == n)
    }

    /// Terms whose fibre word length is exactly `r`.
    pub fn word_length_part(&self, r: u32) -> Self {
        self.filter(|m| m.word_length() == r)
    }

    pub fn min_word_length(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::word_length).min()
    }

    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Self {
        Polynomial { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.terms.keys().flat_map(|m| m.factors().iter().map(|&(v, _)| v))
    }

    pub fn uses_only(&self, allowed: impl FnMut(Var) -> bool) -> bool {
        self.vars().all(allowed)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let mut out = Self::zero();
        for (a, c) in &self.terms {
            if let Some((p, neg)) = a.mul(m) {
                out.add_term(p, if neg { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Groups terms by their non-base part: `self = Σ coeff_m · m` with each
    /// `coeff_m` in the base algebra and `m` a product of fibre (or interval)
    /// generators.
    pub fn by_fiber_part(&self) -> BTreeMap<Monomial, Polynomial> {
        let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (base, rest) = m.split_base();
            out.entry(rest).or_default().add_term(base, c.clone());
        }
        out
    }

    /// Inverse of [`Polynomial::by_fiber_part`].
    pub fn from_fiber_parts<'a>(parts: impl IntoIterator<Item = (&'a Monomial, &'a Polynomial)>) -> Self {
        let mut out = Self::zero();
        for (m, coeff) in parts {
            out += &coeff.mul_monomial(m);
        }
        out
    }

    /// Renames variables; the result is re-sorted with Koszul signs.
    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (n, sign) = Monomial::normalize(m.factors().iter().map(|&(v, e)| (f(v), e)));
            match sign {
                0 => {}
                1 => out.add_term(n, c.clone()),
                _ => out.add_term(n, -c.clone()),
            }
        }
        out
    }

    /// Moves every fibre factor from copy `from` to copy `to`.
    pub fn shift_copy(&self, from: Space, to: Space) -> Self {
        self.map_vars(|v| if v.space == from { v.in_copy(to) } else { v })
    }

    pub fn display<'a>(&'a self, names: &'a dyn Namer) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

impl From<Var> for Polynomial {
    fn from(v: Var) -> Self {
        Polynomial::var(v)
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self -= &rhs;
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                if let Some((m, neg)) = a.mul(b) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    names: &'a dyn Namer,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.poly.terms() {
            let mut s = String::new();
            if first {
                if c.is_negative() {
                    s.push('-');
                }
            } else if c.is_negative() {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            first = false;
            let mag = c.abs();
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                parts.push(alloc::format!("{}", mag));
            }
            for &(v, e) in m.factors() {
                let name = self.names.var_name(v);
                parts.push(if e == 1 { name } else { alloc::format!("{}^{}", name, e) });
            }
            s.push_str(&parts.join("*"));
            f.write_str(&s)?;
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write!(s, "{}", self.display(&PlainNames))?;
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn odd_generators_anticommute() {
        let w3 = Polynomial::var(Var::fiber(0, 3));
        let w5 = Polynomial::var(Var::fiber(1, 5));
        assert!((&(&w3 * &w5) + &(&w5 * &w3)).is_zero());
        assert!((&w3 * &w3).is_zero());
    }

    #[test]
    fn unit_is_neutral() {
        let p = &Polynomial::var(Var::base(0, 2)) + &Polynomial::var(Var::fiber(0, 3)).scale(&q(-4));
        assert_eq!(&Polynomial::one() * &p, p);
        assert_eq!(&p * &Polynomial::one(), p);
    }

    #[test]
    fn base_times_fiber_copy_is_already_canonical() {
        let b3 = Polynomial::var(Var::base(0, 3));
        let w3 = Polynomial::var(Var::fiber(0, 3));
        let w3p = Polynomial::var(Var::fiber(0, 3).in_copy(Space::W1));
        let p = &(&b3 * &w3) * &w3p;
        let expected = Polynomial::product([(Var::base(0, 3), 1), (Var::fiber(0, 3), 1), (Var::fiber(0, 3).in_copy(Space::W1), 1)]);
        assert_eq!(p, expected);
        assert_eq!(p.terms().next().unwrap().1, &q(1));
    }

    #[test]
    fn fiber_parts_round_trip() {
        let x = Var::base(0, 2);
        let y = Var::base(1, 5);
        let w = Var::fiber(0, 3);
        let p = &Polynomial::product([(x, 2), (w, 1)]) + &Polynomial::product([(y, 1), (w, 1), (w.in_copy(Space::W1), 1)]);
        let parts = p.by_fiber_part();
        assert_eq!(parts.len(), 2);
        assert_eq!(Polynomial::from_fiber_parts(parts.iter()), p);
    }

    #[test]
    fn word_length_parts() {
        let w1 = Var::fiber(0, 1);
        let w2 = Var::fiber(1, 3);
        let p = &Polynomial::var(w1) + &Polynomial::product([(w1, 1), (w2, 1)]);
        assert_eq!(p.min_word_length(), Some(1));
        assert_eq!(p.word_length_part(2), Polynomial::product([(w1, 1), (w2, 1)]));
        assert_eq!(p.degree(), None);
    }
}
