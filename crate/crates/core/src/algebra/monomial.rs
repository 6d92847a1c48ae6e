use alloc::vec::Vec;

use super::{Space, Var};

/// A canonical product of generators, always with positive sign.
///
/// Factors are sorted by [`Var`] order, exponents are positive, and odd
/// generators appear with exponent exactly 1. Signs produced while sorting
/// are absorbed into the coefficient of the owning [`super::Polynomial`].
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(alloc::vec![(v, 1)])
    }

    /// Canonical form of an arbitrary product of factors.
    ///
    /// Returns the monomial together with the sign `(-1)^k`, `k` the number
    /// of odd-odd transpositions needed to sort the factors. The sign is 0
    /// when the product vanishes because an odd generator repeats.
    pub fn normalize(raw: impl IntoIterator<Item = (Var, u32)>) -> (Monomial, i8) {
        let mut items: Vec<(Var, u32)> = raw.into_iter().filter(|&(_, e)| e > 0).collect();
        let mut sign = 1i8;
        // Insertion sort; every adjacent swap of two odd blocks flips the sign.
        for i in 1..items.len() {
            let mut j = i;
            while j > 0 && items[j - 1].0 > items[j].0 {
                if block_is_odd(items[j - 1]) && block_is_odd(items[j]) {
                    sign = -sign;
                }
                items.swap(j - 1, j);
                j -= 1;
            }
        }
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(items.len());
        for (v, e) in items {
            match out.last_mut() {
                Some((last, exp)) if *last == v => *exp += e,
                _ => out.push((v, e)),
            }
        }
        if out.iter().any(|&(v, e)| v.is_odd() && e > 1) {
            return (Monomial::one(), 0);
        }
        (Monomial(out), sign)
    }

    /// Builds a monomial from factors that are already canonical.
    pub(crate) fn from_sorted(factors: Vec<(Var, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        Monomial(factors)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(v, e)| v.degree * e).sum()
    }

    /// Number of fibre factors, counted with multiplicity.
    pub fn word_length(&self) -> u32 {
        self.0.iter().filter(|(v, _)| v.is_fiber()).map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |&(_, e)| e)
    }

    pub fn contains_space(&self, space: Space) -> bool {
        self.0.iter().any(|(v, _)| v.space == space)
    }

    /// Splits into the base part and the rest. Since base generators come
    /// first, `base * rest` reproduces `self` with sign `+1`.
    pub fn split_base(&self) -> (Monomial, Monomial) {
        let cut = self.0.iter().take_while(|(v, _)| v.space == Space::Base).count();
        (Monomial(self.0[..cut].to_vec()), Monomial(self.0[cut..].to_vec()))
    }

    /// Product with Koszul sign; `None` when the product vanishes.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        if self.0.is_empty() {
            return Some((other.clone(), false));
        }
        if other.0.is_empty() {
            return Some((self.clone(), false));
        }
        // Moving each odd factor of `other` left past the greater odd factors
        // of `self` costs one sign each.
        let mut negative = false;
        for &(b, eb) in &other.0 {
            if b.degree * eb % 2 == 0 {
                continue;
            }
            let passed = self.0.iter().filter(|&&(a, ea)| a > b && a.degree * ea % 2 == 1).count();
            if passed % 2 == 1 {
                negative = !negative;
            }
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            if a < b {
                out.push((a, ea));
                i += 1;
            } else if b < a {
                out.push((b, eb));
                j += 1;
            } else {
                if a.is_odd() {
                    return None;
                }
                out.push((a, ea + eb));
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Some((Monomial(out), negative))
    }

    /// Prefix and suffix around factor position `i` (both canonical).
    pub(crate) fn around(&self, i: usize) -> (Monomial, Monomial) {
        (Monomial(self.0[..i].to_vec()), Monomial(self.0[i + 1..].to_vec()))
    }
}

fn block_is_odd((v, e): (Var, u32)) -> bool {
    v.degree * e % 2 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Degree depends on the index only, as it does for fibre copies.
    fn arb_var() -> impl Strategy<Value = Var> {
        (0usize..4, 0u32..4).prop_map(|(s, i)| {
            let space = [Space::Base, Space::W0, Space::W1, Space::W2][s];
            Var { space, index: i, degree: i + 1 }
        })
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(raw in proptest::collection::vec((arb_var(), 1u32..3), 0..6)) {
            let (m, sign) = Monomial::normalize(raw);
            if sign != 0 {
                let (again, s2) = Monomial::normalize(m.factors().to_vec());
                prop_assert_eq!(s2, 1);
                prop_assert_eq!(again, m);
            }
        }

        #[test]
        fn product_agrees_with_normalizing_the_concatenation(
            a in proptest::collection::vec((arb_var(), 1u32..3), 0..4),
            b in proptest::collection::vec((arb_var(), 1u32..3), 0..4),
        ) {
            let (ma, sa) = Monomial::normalize(a);
            let (mb, sb) = Monomial::normalize(b);
            prop_assume!(sa != 0 && sb != 0);
            let concat: Vec<_> = ma.factors().iter().chain(mb.factors()).copied().collect();
            let (expected, se) = Monomial::normalize(concat);
            match ma.mul(&mb) {
                None => prop_assert_eq!(se, 0),
                Some((m, neg)) => {
                    prop_assert_eq!(m, expected);
                    prop_assert_eq!(if neg { -1 } else { 1 }, se);
                }
            }
        }
    }

    /// Sorts exponent-one factors by adjacent swaps, flipping the sign on
    /// every odd-odd swap.
    fn bubble_sign(mut vars: Vec<Var>) -> (Vec<Var>, i8) {
        let mut sign = 1;
        for end in (1..vars.len()).rev() {
            for i in 0..end {
                if vars[i + 1] < vars[i] {
                    if vars[i].is_odd() && vars[i + 1].is_odd() {
                        sign = -sign;
                    }
                    vars.swap(i, i + 1);
                }
            }
        }
        (vars, sign)
    }

    #[test]
    fn two_odd_transpositions_cancel() {
        let (b3, w3, w5) = (Var::base(0, 3), Var::fiber(0, 3), Var::fiber(1, 5));
        let (m, sign) = Monomial::normalize([(w5, 1), (b3, 1), (w3, 1)]);
        assert_eq!(m.factors(), &[(b3, 1), (w3, 1), (w5, 1)]);
        assert_eq!(sign, bubble_sign(alloc::vec![w5, b3, w3]).1);
        assert_eq!(sign, 1);
    }

    proptest! {
        #[test]
        fn sign_matches_bubble_sort(perm in Just((0u32..6).collect::<Vec<_>>()).prop_shuffle()) {
            let vars: Vec<Var> = perm
                .iter()
                .map(|&i| Var { space: [Space::Base, Space::W0][(i % 2) as usize], index: i, degree: i / 2 + 1 })
                .collect();
            let (sorted, expected) = bubble_sign(vars.clone());
            let (m, sign) = Monomial::normalize(vars.into_iter().map(|v| (v, 1)));
            let got: Vec<Var> = m.factors().iter().map(|&(v, _)| v).collect();
            prop_assert_eq!(got, sorted);
            prop_assert_eq!(sign, expected);
        }
    }

    #[test]
    fn even_generators_accumulate_exponents() {
        let x = Var::base(0, 2);
        let (m, sign) = Monomial::normalize([(x, 1), (x, 2)]);
        assert_eq!(sign, 1);
        assert_eq!(m.factors(), &[(x, 3)]);
        assert_eq!(m.degree(), 6);
    }

    #[test]
    fn word_length_counts_all_copies() {
        let (m, _) = Monomial::normalize([
            (Var::base(0, 3), 1),
            (Var::fiber(0, 3), 1),
            (Var::fiber(0, 3).in_copy(Space::W1), 1),
            (Var::fiber(1, 2).in_copy(Space::W2), 2),
        ]);
        assert_eq!(m.word_length(), 4);
        let (base, rest) = m.split_base();
        assert_eq!(base.factors().len(), 1);
        assert_eq!(rest.word_length(), 4);
    }
}
