//! Relative models `B -> B ⊗ ΛW` and fibrewise comultiplications.

use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{AlgebraMap, Derivation, Polynomial, Space, Var};
use crate::dga::{Complex, DifferentialViolation, FreeCdga};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberGenerator {
    pub name: String,
    pub degree: u32,
}

/// `(B ⊗ ΛW, D)` with `W` listed in K-S order. `differential[k]` is `D(w_k)`,
/// written with base variables and `Space::W0` fibre variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeModel {
    pub base: FreeCdga,
    pub fiber: Vec<FiberGenerator>,
    pub differential: Vec<Polynomial>,
}

/// Generator images of a comultiplication, indexed like the fibre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comultiplication {
    pub images: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelViolation {
    Base(DifferentialViolation),
    ArityMismatch { expected: usize, found: usize },
    FiberDegreeZero { generator: usize },
    BeyondTruncation { generator: usize },
    WrongDegree { generator: usize },
    KsOrder { generator: usize, offending: Var },
    PureBaseTerm { generator: usize, term: Polynomial },
    DSquaredNonzero { generator: usize, value: Polynomial },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComultViolation {
    ArityMismatch { expected: usize, found: usize },
    WrongDegree { generator: usize },
    ForeignVariable { generator: usize, offending: Var },
    CounitShape { generator: usize, witness: Polynomial },
    NotDg { generator: usize, defect: Polynomial },
}

impl RelativeModel {
    pub fn truncation(&self) -> u32 {
        self.base.truncation
    }

    pub fn fiber_var(&self, k: usize) -> Var {
        Var::fiber(k as u32, self.fiber[k].degree)
    }

    pub fn fiber_vars(&self) -> Vec<Var> {
        (0..self.fiber.len()).map(|k| self.fiber_var(k)).collect()
    }

    /// Variables of `B ⊗ ΛW^{⊗c}` for the listed copies.
    pub fn vars_in(&self, copies: &[Space]) -> Vec<Var> {
        let mut vars = self.base.vars();
        for &s in copies {
            vars.extend(self.fiber_vars().into_iter().map(|v| v.in_copy(s)));
        }
        vars
    }

    /// `D` on `B ⊗ ΛW^{⊗c}` (acting on each copy), extended by `d(t) = dt`
    /// on the interval.
    pub fn derivation_on(&self, copies: &[Space]) -> Derivation {
        Self::derivation_for(&self.base, &self.fiber, &self.differential, copies)
    }

    pub(crate) fn derivation_for(base: &FreeCdga, fiber: &[FiberGenerator], differential: &[Polynomial], copies: &[Space]) -> Derivation {
        let mut d = base.derivation();
        for (k, img) in differential.iter().enumerate() {
            let v = Var::fiber(k as u32, fiber[k].degree);
            for &s in copies {
                d.set(v.in_copy(s), shift_to(img, s));
            }
        }
        d.set(Var::T, Polynomial::var(Var::DT));
        d
    }

    pub fn derivation(&self) -> Derivation {
        self.derivation_on(&[Space::W0])
    }

    pub fn complex(&self, copies: &[Space]) -> Complex {
        Complex { vars: self.vars_in(copies), derivation: self.derivation_on(copies), truncation: self.truncation() }
    }

    /// True when `D(W) = 0`.
    pub fn has_trivial_fiber_differential(&self) -> bool {
        self.differential.iter().all(Polynomial::is_zero)
    }

    pub fn with_differential(&self, differential: Vec<Polynomial>) -> RelativeModel {
        RelativeModel { base: self.base.clone(), fiber: self.fiber.clone(), differential }
    }

    /// Fibre generators must be listed in non-decreasing degree.
    pub fn check_degree_order(&self) -> Result<(), Error> {
        for (k, pair) in self.fiber.windows(2).enumerate() {
            if pair[1].degree < pair[0].degree {
                return Err(Error::DegreeOrder(self.fiber[k + 1].name.clone()));
            }
        }
        Ok(())
    }
}

/// Moves a `W0` polynomial into fibre copy `s`.
pub(crate) fn shift_to(p: &Polynomial, s: Space) -> Polynomial {
    if s == Space::W0 {
        p.clone()
    } else {
        p.shift_copy(Space::W0, s)
    }
}

/// Moves copies `(0, 1)` to `(1, 2)`.
pub(crate) fn shift_up(p: &Polynomial) -> Polynomial {
    p.map_vars(|v| match v.space {
        Space::W0 => v.in_copy(Space::W1),
        Space::W1 => v.in_copy(Space::W2),
        _ => v,
    })
}

impl Comultiplication {
    /// `C₀(w) = w + w'`.
    pub fn standard(model: &RelativeModel) -> Self {
        Comultiplication {
            images: model.fiber_vars().into_iter().map(|v| &Polynomial::var(v) + &Polynomial::var(v.in_copy(Space::W1))).collect(),
        }
    }

    pub fn is_standard(&self, model: &RelativeModel) -> bool {
        *self == Self::standard(model)
    }

    /// `C(w_k) - w_k - w'_k`.
    pub fn excess(&self, model: &RelativeModel, k: usize) -> Polynomial {
        let v = model.fiber_var(k);
        &(&self.images[k] - &Polynomial::var(v)) - &Polynomial::var(v.in_copy(Space::W1))
    }

    /// `C` as an algebra map `B ⊗ ΛW -> B ⊗ ΛW ⊗ ΛW`.
    pub fn as_map(&self, model: &RelativeModel) -> AlgebraMap {
        let mut m = AlgebraMap::identity();
        for (k, img) in self.images.iter().enumerate() {
            m.set(model.fiber_var(k), img.clone());
        }
        m
    }

    /// `C ⊗ 1`: first copy through `C`, second copy to the third.
    pub fn left_map(&self, model: &RelativeModel) -> AlgebraMap {
        let mut m = self.as_map(model);
        for v in model.fiber_vars() {
            m.set(v.in_copy(Space::W1), Polynomial::var(v.in_copy(Space::W2)));
        }
        m
    }

    /// `1 ⊗ C`: first copy fixed, second copy through `C` into copies 1 and 2.
    pub fn right_map(&self, model: &RelativeModel) -> AlgebraMap {
        let mut m = AlgebraMap::identity();
        for (k, img) in self.images.iter().enumerate() {
            m.set(model.fiber_var(k).in_copy(Space::W1), shift_up(img));
        }
        m
    }
}

/// Shape, K-S condition, projection condition and `D² = 0`.
pub fn validate_relative_model(m: &RelativeModel) -> Result<(), ModelViolation> {
    m.base.check_d_squared().map_err(ModelViolation::Base)?;
    if m.differential.len() != m.fiber.len() {
        return Err(ModelViolation::ArityMismatch { expected: m.fiber.len(), found: m.differential.len() });
    }
    let base_vars = m.base.vars();
    for (k, g) in m.fiber.iter().enumerate() {
        if g.degree == 0 {
            return Err(ModelViolation::FiberDegreeZero { generator: k });
        }
        if g.degree + 1 > m.truncation() {
            return Err(ModelViolation::BeyondTruncation { generator: k });
        }
        let img = &m.differential[k];
        if !img.is_homogeneous_of(g.degree + 1) {
            return Err(ModelViolation::WrongDegree { generator: k });
        }
        if let Some(v) = img
            .vars()
            .find(|v| !(base_vars.contains(v) || (v.space == Space::W0 && (v.index as usize) < k && *v == m.fiber_var(v.index as usize))))
        {
            return Err(ModelViolation::KsOrder { generator: k, offending: v });
        }
        let pure = img.word_length_part(0);
        if !pure.is_zero() {
            return Err(ModelViolation::PureBaseTerm { generator: k, term: pure });
        }
    }
    let d = m.derivation();
    for (k, img) in m.differential.iter().enumerate() {
        let dd = d.apply(img);
        if !dd.is_zero() {
            return Err(ModelViolation::DSquaredNonzero { generator: k, value: dd });
        }
    }
    Ok(())
}

/// Degree, counit shape and the DG condition `D₂ ∘ C = C ∘ D`.
pub fn validate_comultiplication(m: &RelativeModel, c: &Comultiplication) -> Result<(), ComultViolation> {
    if c.images.len() != m.fiber.len() {
        return Err(ComultViolation::ArityMismatch { expected: m.fiber.len(), found: c.images.len() });
    }
    let allowed = m.vars_in(&[Space::W0, Space::W1]);
    for (k, img) in c.images.iter().enumerate() {
        if !img.is_homogeneous_of(m.fiber[k].degree) {
            return Err(ComultViolation::WrongDegree { generator: k });
        }
        if let Some(v) = img.vars().find(|v| !allowed.contains(v)) {
            return Err(ComultViolation::ForeignVariable { generator: k, offending: v });
        }
        let bad = c.excess(m, k).filter(|t| !(t.contains_space(Space::W0) && t.contains_space(Space::W1)));
        if !bad.is_zero() {
            return Err(ComultViolation::CounitShape { generator: k, witness: bad });
        }
    }
    let d2 = m.derivation_on(&[Space::W0, Space::W1]);
    let cmap = c.as_map(m);
    for (k, img) in c.images.iter().enumerate() {
        let defect = &d2.apply(img) - &cmap.apply(&m.differential[k]);
        if !defect.is_zero() {
            return Err(ComultViolation::NotDg { generator: k, defect });
        }
    }
    Ok(())
}

/// Hypotheses of the normalization theorems, plus generators whose
/// associativity defect turned out not to be exact.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HypothesisReport {
    pub truncation: u32,
    /// Odd degrees with nonzero cohomology and a basis of representatives.
    pub odd_cohomology: Vec<(u32, Vec<Polynomial>)>,
    pub even_fiber_generators: Vec<usize>,
    pub non_associative: Vec<usize>,
}

impl HypothesisReport {
    pub fn satisfied(&self) -> bool {
        self.odd_cohomology.is_empty() && self.even_fiber_generators.is_empty() && self.non_associative.is_empty()
    }
}

/// Scans `H^odd(B)` below the truncation degree and the parities of `W`.
pub fn check_hypotheses(m: &RelativeModel) -> Result<HypothesisReport, Error> {
    let mut report = HypothesisReport { truncation: m.truncation(), ..Default::default() };
    let complex = m.base.complex();
    let mut n = 1;
    while n < m.truncation() {
        let slice = complex.slice(n)?;
        if !slice.complement.is_empty() {
            report.odd_cohomology.push((n, slice.complement));
        }
        n += 2;
    }
    report.even_fiber_generators = m.fiber.iter().enumerate().filter(|(_, g)| g.degree % 2 == 0).map(|(k, _)| k).collect();
    Ok(report)
}

/// `(C ⊗ 1) C(w_k) - (1 ⊗ C) C(w_k)` in `B ⊗ ΛW ⊗ ΛW ⊗ ΛW`.
pub fn associativity_defect(m: &RelativeModel, c: &Comultiplication, k: usize) -> Polynomial {
    let img = &c.images[k];
    &c.left_map(m).apply(img) - &c.right_map(m).apply(img)
}

/// Result of testing the associativity defect of one generator for exactness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AssociativityVerdict {
    /// A preimage `h` with `D(h)` equal to the defect.
    Exact(Polynomial),
    /// The defect's class, reduced against boundaries.
    NotExact(Polynomial),
}

/// Checks that every associativity defect is a boundary of the triple tensor
/// complex. With `D(W) = 0` the complex splits over fibre monomials and the
/// test runs coefficientwise in `B`.
pub fn check_homotopy_associative(m: &RelativeModel, c: &Comultiplication) -> Result<Vec<AssociativityVerdict>, Error> {
    let copies = [Space::W0, Space::W1, Space::W2];
    let mut out = Vec::with_capacity(m.fiber.len());
    for k in 0..m.fiber.len() {
        let defect = associativity_defect(m, c, k);
        if defect.is_zero() {
            out.push(AssociativityVerdict::Exact(Polynomial::zero()));
            continue;
        }
        if m.has_trivial_fiber_differential() {
            let base = m.base.complex();
            let mut witness = Polynomial::zero();
            let mut class = Polynomial::zero();
            for (mono, coeff) in defect.by_fiber_part() {
                match base.solve_preimage(&coeff)? {
                    Some(eta) => witness += &eta.mul_monomial(&mono),
                    None => {
                        let n = coeff.degree().ok_or(Error::NotHomogeneous)?;
                        class += &base.slice(n)?.reduce(&coeff)?.mul_monomial(&mono);
                    }
                }
            }
            out.push(if class.is_zero() { AssociativityVerdict::Exact(witness) } else { AssociativityVerdict::NotExact(class) });
        } else {
            let complex = m.complex(&copies);
            match complex.solve_preimage(&defect)? {
                Some(h) => out.push(AssociativityVerdict::Exact(h)),
                None => {
                    let n = defect.degree().ok_or(Error::NotHomogeneous)?;
                    out.push(AssociativityVerdict::NotExact(complex.slice(n)?.reduce(&defect)?));
                }
            }
        }
    }
    Ok(out)
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use alloc::vec;

    #[test]
    fn example_models_validate() {
        assert_eq!(validate_relative_model(&non_hopf()), Ok(()));
        let (m, c) = s2();
        assert_eq!(validate_relative_model(&m), Ok(()));
        assert_eq!(validate_comultiplication(&m, &c), Ok(()));
        let (m, c) = non_standard();
        assert_eq!(validate_comultiplication(&m, &c), Ok(()));
    }

    #[test]
    fn ks_violation_is_reported() {
        // D(w1) = b2 w2 with w2 later in the order.
        let w2 = Var::fiber(1, 2);
        let m = RelativeModel {
            base: base(&[("b2", 2)], vec![Polynomial::zero()], 10),
            fiber: fiber(&[("w1", 3), ("w2", 2)]),
            differential: vec![Polynomial::product([(Var::base(0, 2), 1), (w2, 1)]), Polynomial::zero()],
        };
        assert_eq!(validate_relative_model(&m), Err(ModelViolation::KsOrder { generator: 0, offending: w2 }));
    }

    #[test]
    fn counit_violation_is_reported() {
        let m = non_hopf().with_differential(vec![Polynomial::zero(), Polynomial::zero()]);
        let mut c = Comultiplication::standard(&m);
        c.images[0] = Polynomial::var(m.fiber_var(0));
        assert!(matches!(validate_comultiplication(&m, &c), Err(ComultViolation::CounitShape { generator: 0, .. })));
    }

    #[test]
    fn hypothesis_reports() {
        let r = check_hypotheses(&non_hopf()).unwrap();
        assert_eq!(r.odd_cohomology, vec![(3, vec![Polynomial::var(Var::base(0, 3))])]);
        let (m, _) = s2();
        let r = check_hypotheses(&m).unwrap();
        assert_eq!(r.even_fiber_generators, vec![1]);
        let ok = RelativeModel {
            base: base(&[("x", 2)], vec![Polynomial::zero()], 8),
            fiber: fiber(&[("w3", 3)]),
            differential: vec![Polynomial::zero()],
        };
        assert!(check_hypotheses(&ok).unwrap().satisfied());
    }

    #[test]
    fn associativity_defects_vanish_on_examples() {
        let m = non_hopf();
        let c0 = Comultiplication::standard(&m);
        for k in 0..2 {
            assert!(associativity_defect(&m, &c0, k).is_zero());
        }
        let (m, c) = non_standard();
        assert!(associativity_defect(&m, &c, 1).is_zero());
        let (m, c) = s2();
        assert!(associativity_defect(&m, &c, 1).is_zero());
        assert!(check_homotopy_associative(&m, &c).unwrap().iter().all(|v| matches!(v, AssociativityVerdict::Exact(_))));
    }

    #[test]
    fn non_associative_class_is_reported() {
        // C(z3) = z + z' + u v' w', all of u, v, w of degree 1.
        let m = RelativeModel {
            base: base(&[("b3", 3)], vec![Polynomial::zero()], 8),
            fiber: fiber(&[("u", 1), ("v", 1), ("w", 1), ("z", 3)]),
            differential: vec![Polynomial::zero(); 4],
        };
        let mut c = Comultiplication::standard(&m);
        let (u, v, w) = (m.fiber_var(0), m.fiber_var(1), m.fiber_var(2));
        c.images[3] += &Polynomial::product([(u, 1), (v.in_copy(Space::W1), 1), (w.in_copy(Space::W1), 1)]);
        assert_eq!(validate_comultiplication(&m, &c), Ok(()));
        // Oracle: expand both sides of the defect independently.
        let chi = &c.images[3] - &(&Polynomial::var(m.fiber_var(3)) + &Polynomial::var(m.fiber_var(3).in_copy(Space::W1)));
        let left = chi.clone();
        let beta = Polynomial::product([(u, 1), (v.in_copy(Space::W2), 1), (w.in_copy(Space::W2), 1)])
            + Polynomial::product([(u.in_copy(Space::W1), 1), (v.in_copy(Space::W2), 1), (w.in_copy(Space::W2), 1)]);
        let gamma = &(&Polynomial::var(u) * &(&Polynomial::var(v.in_copy(Space::W1)) + &Polynomial::var(v.in_copy(Space::W2))))
            * &(&Polynomial::var(w.in_copy(Space::W1)) + &Polynomial::var(w.in_copy(Space::W2)));
        let delta = shift_up(&chi);
        let expected = &(&left + &beta) - &(&gamma + &delta);
        assert_eq!(associativity_defect(&m, &c, 3), expected);
        let verdicts = check_homotopy_associative(&m, &c).unwrap();
        assert!(matches!(&verdicts[3], AssociativityVerdict::NotExact(class) if *class == expected));
    }

    #[test]
    fn degree_order_is_enforced() {
        let m = RelativeModel {
            base: base(&[("x", 2)], vec![Polynomial::zero()], 12),
            fiber: fiber(&[("w5", 5), ("w3", 3)]),
            differential: vec![Polynomial::zero(); 2],
        };
        assert_eq!(m.check_degree_order(), Err(Error::DegreeOrder("w3".into())));
    }
}
