//! Solutions of `α(χ) + β(χ) = γ(χ) + δ(χ)` for mixed tensors `χ`.
//!
//! On `B ⊗ ΛW ⊗ ΛW -> B ⊗ ΛW ⊗ ΛW ⊗ ΛW` the four algebra maps are
//!
//! | map | `w`      | `w'`      |
//! |-----|----------|-----------|
//! | α   | `w`      | `w'`      |
//! | β   | `w + w'` | `w''`     |
//! | γ   | `w`      | `w' + w''`|
//! | δ   | `w'`     | `w''`     |
//!
//! For odd generators and word length `r ≥ 3` every mixed solution is a sum
//! `Σ b_I (S_I - w_I - w'_I)` over strictly increasing `I`, where
//! `S_I = Π (w_i + w'_i)`. This module computes that decomposition and also
//! provides brute-force null spaces that check the claim independently.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::One;

use crate::algebra::{AlgebraMap, Monomial, Polynomial, Space, Var, Q};
use crate::linalg::{self, SparseVec};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    Alpha,
    Beta,
    Gamma,
    Delta,
}

fn map_for(kind: MapKind, vars: impl IntoIterator<Item = Var>) -> AlgebraMap {
    let mut m = AlgebraMap::identity();
    for v in vars {
        let w = v.in_copy(Space::W0);
        let (w0, w1, w2) = (Polynomial::var(w), Polynomial::var(w.in_copy(Space::W1)), Polynomial::var(w.in_copy(Space::W2)));
        let (a, b) = match kind {
            MapKind::Alpha => (w0, w1),
            MapKind::Beta => (&w0 + &w1, w2),
            MapKind::Gamma => (w0, &w1 + &w2),
            MapKind::Delta => (w1, w2),
        };
        m.set(w, a);
        m.set(w.in_copy(Space::W1), b);
    }
    m
}

pub fn apply_map(kind: MapKind, chi: &Polynomial) -> Polynomial {
    map_for(kind, chi.vars().filter(|v| matches!(v.space, Space::W0 | Space::W1))).apply(chi)
}

/// `α(χ) + β(χ) - γ(χ) - δ(χ)`.
pub fn identity_residual(chi: &Polynomial) -> Polynomial {
    let a = apply_map(MapKind::Alpha, chi);
    let b = apply_map(MapKind::Beta, chi);
    let g = apply_map(MapKind::Gamma, chi);
    let d = apply_map(MapKind::Delta, chi);
    &(&a + &b) - &(&g + &d)
}

/// A homogeneous-length element of `B ⊗ Λ⁺W ⊗ Λ⁺W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedTensor {
    value: Polynomial,
    word_length: u32,
}

impl MixedTensor {
    pub fn new(value: Polynomial) -> Result<Self, Error> {
        let mut r = None;
        for (m, _) in value.terms() {
            if m.contains_space(Space::W2) || m.contains_space(Space::Interval) {
                return Err(Error::InvalidInput("mixed tensor may only use base and the first two fibre copies".into()));
            }
            if !(m.contains_space(Space::W0) && m.contains_space(Space::W1)) {
                return Err(Error::InvalidInput("term is not mixed".into()));
            }
            let l = m.word_length();
            if *r.get_or_insert(l) != l {
                return Err(Error::InvalidInput("terms of different word length".into()));
            }
        }
        Ok(MixedTensor { value, word_length: r.unwrap_or(0) })
    }

    pub fn value(&self) -> &Polynomial {
        &self.value
    }

    pub fn word_length(&self) -> u32 {
        self.word_length
    }
}

/// Subscript sequence `I`, stored as the first-copy generators `w_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SubscriptSequence(pub Vec<Var>);

impl SubscriptSequence {
    pub fn indices(&self) -> Vec<u32> {
        self.0.iter().map(|v| v.index).collect()
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    fn product(&self, copy: impl Fn(usize) -> Space) -> Polynomial {
        Polynomial::product(self.0.iter().enumerate().map(|(j, v)| (v.in_copy(copy(j)), 1)))
    }

    /// `w_I`.
    pub fn w(&self) -> Polynomial {
        self.product(|_| Space::W0)
    }

    /// `w'_I`.
    pub fn w_prime(&self) -> Polynomial {
        self.product(|_| Space::W1)
    }

    /// `w^ε_I` for a copy pattern `ε`, bit `j` selecting the copy of factor `j`.
    pub fn w_eps(&self, eps: u32) -> Polynomial {
        self.product(|j| if eps >> j & 1 == 1 { Space::W1 } else { Space::W0 })
    }

    /// `S_I = Π (w_i + w'_i)`.
    pub fn s(&self) -> Polynomial {
        let mut acc = Polynomial::one();
        for v in &self.0 {
            acc = &acc * &(&Polynomial::var(v.in_copy(Space::W0)) + &Polynomial::var(v.in_copy(Space::W1)));
        }
        acc
    }

    /// `S_I - w_I - w'_I`.
    pub fn solution_form(&self) -> Polynomial {
        &(&self.s() - &self.w()) - &self.w_prime()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasicFormRejection {
    TooShort(u32),
    IdentityFails(Polynomial),
    NotBasicForm(Polynomial),
}

pub type BasicForm = BTreeMap<SubscriptSequence, Polynomial>;

/// `Σ b_I (S_I - w_I - w'_I)`.
pub fn build_basic_form(form: &BasicForm) -> Polynomial {
    let mut out = Polynomial::zero();
    for (seq, b) in form {
        out += &(b * &seq.solution_form());
    }
    out
}

/// Writes `χ = Σ b_I (S_I - w_I - w'_I)` or explains why it cannot.
///
/// `b_I` is read off as the coefficient of `w'_{i1} w_{i2} ⋯ w_{ir}`, which
/// occurs in `S_I - w_I - w'_I` with coefficient 1 and in no other
/// solution form; the answer is then rebuilt and compared exactly.
pub fn solve_basic_form(chi: &MixedTensor) -> Result<BasicForm, BasicFormRejection> {
    if chi.value.is_zero() {
        return Ok(BasicForm::new());
    }
    if chi.word_length < 3 {
        return Err(BasicFormRejection::TooShort(chi.word_length));
    }
    let residual = identity_residual(&chi.value);
    if !residual.is_zero() {
        return Err(BasicFormRejection::IdentityFails(residual));
    }
    let parts = chi.value.by_fiber_part();
    let mut form = BasicForm::new();
    for mono in parts.keys() {
        let Some(seq) = subscripts(mono) else { continue };
        if form.contains_key(&seq) {
            continue;
        }
        let mut ordered = alloc::vec![(seq.0[0].in_copy(Space::W1), 1)];
        ordered.extend(seq.0[1..].iter().map(|&v| (v, 1)));
        let (m, sign) = Monomial::normalize(ordered);
        let b = parts.get(&m).cloned().unwrap_or_default();
        let b = if sign < 0 { -b } else { b };
        if !b.is_zero() {
            form.insert(seq, b);
        }
    }
    let rebuilt = build_basic_form(&form);
    if rebuilt != chi.value {
        return Err(BasicFormRejection::NotBasicForm(&chi.value - &rebuilt));
    }
    Ok(form)
}

/// Strictly increasing subscript sequence of a fibre monomial, or `None`
/// when an index repeats.
fn subscripts(m: &Monomial) -> Option<SubscriptSequence> {
    let mut vars: Vec<Var> = Vec::new();
    for &(v, e) in m.factors() {
        if !v.is_fiber() {
            continue;
        }
        for _ in 0..e {
            vars.push(v.in_copy(Space::W0));
        }
    }
    vars.sort();
    let seq = SubscriptSequence(vars);
    seq.is_strictly_increasing().then_some(seq)
}

/// The linear conditions of the lemmas behind the structure theorem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaCondition {
    BetaEqGamma,
    BetaZero,
    BetaEqDelta,
    AlphaBetaEqGamma,
    BetaEqGammaDelta,
}

impl LemmaCondition {
    pub const ALL: [LemmaCondition; 5] = [
        LemmaCondition::BetaEqGamma,
        LemmaCondition::BetaZero,
        LemmaCondition::BetaEqDelta,
        LemmaCondition::AlphaBetaEqGamma,
        LemmaCondition::BetaEqGammaDelta,
    ];

    pub fn residual(self, chi: &Polynomial) -> Polynomial {
        let m = |k| apply_map(k, chi);
        match self {
            LemmaCondition::BetaEqGamma => &m(MapKind::Beta) - &m(MapKind::Gamma),
            LemmaCondition::BetaZero => m(MapKind::Beta),
            LemmaCondition::BetaEqDelta => &m(MapKind::Beta) - &m(MapKind::Delta),
            LemmaCondition::AlphaBetaEqGamma => &(&m(MapKind::Alpha) + &m(MapKind::Beta)) - &m(MapKind::Gamma),
            LemmaCondition::BetaEqGammaDelta => &(&m(MapKind::Beta) - &m(MapKind::Gamma)) - &m(MapKind::Delta),
        }
    }
}

/// The lemmas' answers: the solutions `χ_I` supported on `{w^ε_I}`.
pub fn lemma_closed_form(cond: LemmaCondition, seq: &SubscriptSequence) -> Vec<Polynomial> {
    match cond {
        LemmaCondition::BetaEqGamma => alloc::vec![seq.s()],
        LemmaCondition::BetaZero => Vec::new(),
        LemmaCondition::BetaEqDelta => alloc::vec![seq.w_prime()],
        LemmaCondition::AlphaBetaEqGamma => alloc::vec![&seq.s() - &seq.w()],
        LemmaCondition::BetaEqGammaDelta => alloc::vec![&seq.s() - &seq.w_prime()],
    }
}

/// Null space of `cond` on `span{w^ε_I : ε ∈ {0,1}^r}` by elimination.
/// Coefficients are scalars; over a base algebra the problem decouples
/// along a basis of `B`, so this covers every base degree.
pub fn lemma_kernel(cond: LemmaCondition, seq: &SubscriptSequence) -> Vec<Polynomial> {
    let r = seq.0.len() as u32;
    let unknowns: Vec<Polynomial> = (0..1u32 << r).map(|eps| seq.w_eps(eps)).collect();
    null_space(&unknowns, |p| cond.residual(p))
}

fn null_space(unknowns: &[Polynomial], f: impl Fn(&Polynomial) -> Polynomial) -> Vec<Polynomial> {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    let cols: Vec<SparseVec> = unknowns.iter().map(|u| coords(&f(u), &mut index)).collect();
    linalg::kernel(&cols)
        .into_iter()
        .map(|k| {
            let mut p = Polynomial::zero();
            for (&j, c) in &k {
                p += &unknowns[j].scale(c);
            }
            p
        })
        .collect()
}

fn coords(p: &Polynomial, index: &mut BTreeMap<Monomial, usize>) -> SparseVec {
    let mut v = SparseVec::new();
    for (m, c) in p.terms() {
        let next = index.len();
        v.insert(*index.entry(m.clone()).or_insert(next), c.clone());
    }
    v
}

/// Upper bound on the number of unknowns for the brute-force oracle.
pub const BRUTE_FORCE_LIMIT: usize = 5000;

/// All mixed `χ` of word length `r` over `pool` (first-copy generators,
/// scalar coefficients) satisfying `α + β = γ + δ`.
pub fn brute_force_solution_space(r: u32, pool: &[Var]) -> Result<Vec<Polynomial>, Error> {
    let mut letters: Vec<Var> = pool.iter().map(|v| v.in_copy(Space::W0)).collect();
    letters.extend(pool.iter().map(|v| v.in_copy(Space::W1)));
    letters.sort();
    let mut unknowns = Vec::new();
    let mut current = Vec::new();
    mixed_monomials(&letters, r, &mut current, &mut unknowns);
    if unknowns.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { size: unknowns.len(), limit: BRUTE_FORCE_LIMIT });
    }
    Ok(null_space(&unknowns, identity_residual))
}

fn mixed_monomials(letters: &[Var], r: u32, current: &mut Vec<(Var, u32)>, out: &mut Vec<Polynomial>) {
    if r == 0 {
        let m = Monomial::normalize(current.iter().copied()).0;
        if m.contains_space(Space::W0) && m.contains_space(Space::W1) {
            out.push(Polynomial::term(m, Q::one()));
        }
        return;
    }
    let Some((&v, rest)) = letters.split_first() else { return };
    let max = if v.is_odd() { 1 } else { r };
    for e in (0..=max).rev() {
        if e > 0 {
            current.push((v, e));
        }
        mixed_monomials(rest, r - e, current, out);
        if e > 0 {
            current.pop();
        }
    }
}

/// `{S_I - w_I - w'_I}` over strictly increasing `I ⊆ pool` with `|I| = r`.
pub fn solution_form_span(r: u32, pool: &[Var]) -> Vec<Polynomial> {
    let mut sorted: Vec<Var> = pool.iter().map(|v| v.in_copy(Space::W0)).collect();
    sorted.sort();
    let mut out = Vec::new();
    let mut current = Vec::new();
    subsets(&sorted, r as usize, &mut current, &mut |s| out.push(SubscriptSequence(s.to_vec()).solution_form()));
    out
}

fn subsets(items: &[Var], k: usize, current: &mut Vec<Var>, f: &mut impl FnMut(&[Var])) {
    if current.len() == k {
        f(current);
        return;
    }
    for (i, &v) in items.iter().enumerate() {
        current.push(v);
        subsets(&items[i + 1..], k, current, f);
        current.pop();
    }
}

fn rank_of(ps: &[&Polynomial], index: &mut BTreeMap<Monomial, usize>) -> usize {
    let vs: Vec<SparseVec> = ps.iter().map(|p| coords(p, index)).collect();
    linalg::rank(vs.iter())
}

/// `span(b) ⊆ span(a)`.
pub fn span_contains(a: &[Polynomial], b: &[Polynomial]) -> bool {
    let mut index = BTreeMap::new();
    let ra = rank_of(&a.iter().collect::<Vec<_>>(), &mut index);
    let both: Vec<&Polynomial> = a.iter().chain(b.iter()).collect();
    rank_of(&both, &mut index) == ra
}

pub fn same_span(a: &[Polynomial], b: &[Polynomial]) -> bool {
    span_contains(a, b) && span_contains(b, a)
}

pub fn span_dim(a: &[Polynomial]) -> usize {
    rank_of(&a.iter().collect::<Vec<_>>(), &mut BTreeMap::new())
}
