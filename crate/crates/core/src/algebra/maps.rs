use alloc::collections::BTreeMap;

use num_traits::Zero;

use super::{Monomial, Polynomial, Var, Q};

/// Algebra homomorphism given on generators. Variables without an entry are
/// mapped to themselves, so base generators are fixed unless stated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraMap {
    images: BTreeMap<Var, Polynomial>,
}

impl AlgebraMap {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn set(&mut self, v: Var, image: Polynomial) {
        if image == Polynomial::var(v) {
            self.images.remove(&v);
        } else {
            self.images.insert(v, image);
        }
    }

    pub fn with(mut self, v: Var, image: Polynomial) -> Self {
        self.set(v, image);
        self
    }

    pub fn image(&self, v: Var) -> Polynomial {
        self.images.get(&v).cloned().unwrap_or_else(|| Polynomial::var(v))
    }

    /// Explicitly stored images (non-identity entries).
    pub fn entries(&self) -> impl Iterator<Item = (&Var, &Polynomial)> {
        self.images.iter()
    }

    pub fn apply_monomial(&self, m: &Monomial) -> Polynomial {
        let mut acc = Polynomial::one();
        for &(v, e) in m.factors() {
            match self.images.get(&v) {
                Some(img) => acc = &acc * &img.pow(e),
                None => acc = acc.mul_monomial(&Monomial::from_sorted(alloc::vec![(v, e)])),
            }
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            out += &self.apply_monomial(m).scale(c);
        }
        out
    }

    /// `self ∘ other` on the variables either map touches.
    pub fn compose(&self, other: &AlgebraMap) -> AlgebraMap {
        let mut out = AlgebraMap::identity();
        for (&v, img) in &other.images {
            out.set(v, self.apply(img));
        }
        for (&v, img) in &self.images {
            if !other.images.contains_key(&v) {
                out.set(v, img.clone());
            }
        }
        out
    }
}

/// Degree +1 derivation given on generators; missing entries are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Derivation {
    images: BTreeMap<Var, Polynomial>,
}

impl Derivation {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn set(&mut self, v: Var, image: Polynomial) {
        if image.is_zero() {
            self.images.remove(&v);
        } else {
            self.images.insert(v, image);
        }
    }

    pub fn with(mut self, v: Var, image: Polynomial) -> Self {
        self.set(v, image);
        self
    }

    pub fn image(&self, v: Var) -> Polynomial {
        self.images.get(&v).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Var, &Polynomial)> {
        self.images.iter()
    }

    /// Graded Leibniz rule `d(ab) = d(a)b + (-1)^{|a|} a d(b)`.
    pub fn apply_monomial(&self, m: &Monomial) -> Polynomial {
        let mut out = Polynomial::zero();
        let factors = m.factors();
        let mut prefix_degree = 0u32;
        for (i, &(v, e)) in factors.iter().enumerate() {
            if let Some(dv) = self.images.get(&v) {
                let (prefix, suffix) = m.around(i);
                let mut left = prefix.factors().to_vec();
                if e > 1 {
                    left.push((v, e - 1));
                }
                let left = Polynomial::term(Monomial::from_sorted(left), Q::from_integer(e.into()));
                let mut term = (&left * dv).mul_monomial(&suffix);
                if prefix_degree % 2 == 1 {
                    term = -term;
                }
                out += &term;
            }
            prefix_degree += v.degree * e;
        }
        out
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            if c.is_zero() {
                continue;
            }
            out += &self.apply_monomial(m).scale(c);
        }
        out
    }
}
