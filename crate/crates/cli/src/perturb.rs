//! Seeded perturbations of a trivial pair `(d_B ⊗ 1, C₀)`.
//!
//! The output is equivalent to the input by construction, so the
//! normalization pipelines must bring it back. Round-trip tests use this as
//! their source of non-trivial models.

use std::str::FromStr;

use fibrewise_core::algebra::basis_of_degree;
use fibrewise_core::certify::conjugate;
use fibrewise_core::model::{check_hypotheses, validate_comultiplication};
use fibrewise_core::{ChangeOfGenerators, Comultiplication, Monomial, Polynomial, RelativeModel, Space, Var, Q};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbMode {
    ChangeOfGenerators,
    ExactHomotopy,
    Both,
}

impl FromStr for PerturbMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "change-of-generators" => Ok(PerturbMode::ChangeOfGenerators),
            "exact-homotopy" => Ok(PerturbMode::ExactHomotopy),
            "both" => Ok(PerturbMode::Both),
            _ => Err(format!("unknown mode {s:?} (expected change-of-generators, exact-homotopy or both)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PerturbationSpec {
    pub seed: u64,
    pub max_word_length: u32,
    pub mode: PerturbMode,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PerturbError {
    #[error("perturbation needs D(W) = 0, C = C0 and satisfied hypotheses: {0}")]
    Precondition(String),
    #[error("nothing to perturb: {0}")]
    Unsatisfiable(String),
    #[error(transparent)]
    Engine(#[from] fibrewise_core::Error),
}

const COEFFICIENTS: [i64; 4] = [-2, -1, 1, 2];

fn coefficient(rng: &mut ChaCha8Rng) -> Q {
    Q::from_integer((*COEFFICIENTS.choose(rng).expect("non-empty")).into())
}

/// Strictly increasing index tuples below `k` with length in `1..=max_len`.
fn subsets_below(k: usize, max_len: u32) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << k) {
        if mask.count_ones() <= max_len {
            out.push((0..k).filter(|i| mask & (1 << i) != 0).collect());
        }
    }
    out
}

fn fiber_product(model: &RelativeModel, idx: &[usize], copies: &[Space]) -> Polynomial {
    let raw: Vec<(Var, u32)> = idx.iter().zip(copies).map(|(&i, &s)| (model.fiber_var(i).in_copy(s), 1)).collect();
    let (m, sign) = Monomial::normalize(raw);
    Polynomial::term(m, Q::from_integer(sign.into()))
}

/// Candidate tail terms `b w_I` for `φ(w_k)`.
fn change_candidates(model: &RelativeModel, k: usize, max_len: u32) -> Result<Vec<Polynomial>, PerturbError> {
    let target = model.fiber[k].degree;
    let base_vars = model.base.vars();
    let mut out = Vec::new();
    for idx in subsets_below(k, max_len) {
        let d: u32 = idx.iter().map(|&i| model.fiber[i].degree).sum();
        if d > target {
            continue;
        }
        let w = fiber_product(model, &idx, &vec![Space::W0; idx.len()]);
        if w.is_zero() {
            continue;
        }
        for b in &basis_of_degree(&base_vars, target - d, model.truncation())?.monomials {
            out.push(&Polynomial::term(b.clone(), Q::from_integer(1.into())) * &w);
        }
    }
    Ok(out)
}

/// Candidate exact mixed terms `d(η) w^ε_I` for the excess of `C(w_k)`.
fn homotopy_candidates(model: &RelativeModel, k: usize, max_len: u32) -> Result<Vec<Polynomial>, PerturbError> {
    let target = model.fiber[k].degree;
    let base = model.base.complex();
    let base_vars = model.base.vars();
    let mut out = Vec::new();
    for idx in subsets_below(k, max_len).into_iter().filter(|i| i.len() >= 2) {
        let d: u32 = idx.iter().map(|&i| model.fiber[i].degree).sum();
        // The coefficient is a boundary, so it has positive degree.
        if d + 2 > target {
            continue;
        }
        let mut etas = Vec::new();
        for eta in &basis_of_degree(&base_vars, target - d - 1, model.truncation())?.monomials {
            let beta = base.d(&Polynomial::term(eta.clone(), Q::from_integer(1.into())));
            if !beta.is_zero() {
                etas.push(beta);
            }
        }
        if etas.is_empty() {
            continue;
        }
        let r = idx.len();
        for eps in 1u32..(1 << r) - 1 {
            let copies: Vec<Space> = (0..r).map(|j| if eps & (1 << j) != 0 { Space::W1 } else { Space::W0 }).collect();
            let w = fiber_product(model, &idx, &copies);
            if w.is_zero() {
                continue;
            }
            out.extend(etas.iter().map(|beta| beta * &w));
        }
    }
    Ok(out)
}

/// Keeps each candidate with probability 1/2, forcing at least one.
fn pick(rng: &mut ChaCha8Rng, candidates: &[Vec<Polynomial>]) -> Vec<Polynomial> {
    let mut out: Vec<Polynomial> = candidates
        .iter()
        .map(|cs| {
            let mut p = Polynomial::zero();
            for c in cs {
                if rng.gen_bool(0.5) {
                    p += &c.scale(&coefficient(rng));
                }
            }
            p
        })
        .collect();
    if out.iter().all(Polynomial::is_zero) {
        let nonempty: Vec<usize> = (0..candidates.len()).filter(|&k| !candidates[k].is_empty()).collect();
        if let Some(&k) = nonempty.choose(rng) {
            let c = candidates[k].choose(rng).expect("non-empty");
            out[k] = c.scale(&coefficient(rng));
        }
    }
    out
}

/// Applies `spec` to a trivial pair.
///
/// In mode [`PerturbMode::Both`], exact coefficients are added first and a
/// change of generators applied afterwards; a half with no candidates is
/// skipped. A single mode with no candidates is an error, except for an empty
/// fibre, which is returned unchanged.
pub fn perturb(
    model: &RelativeModel,
    c: &Comultiplication,
    spec: &PerturbationSpec,
) -> Result<(RelativeModel, Comultiplication), PerturbError> {
    if !model.has_trivial_fiber_differential() {
        return Err(PerturbError::Precondition("D(W) is not zero".into()));
    }
    if !c.is_standard(model) {
        return Err(PerturbError::Precondition("C is not the standard coproduct".into()));
    }
    let report = check_hypotheses(model)?;
    if !report.satisfied() {
        return Err(PerturbError::Precondition(format!("{report:?}")));
    }
    if model.fiber.is_empty() {
        return Ok((model.clone(), c.clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = model.fiber.len();
    let (mut m, mut cm) = (model.clone(), c.clone());
    let want_homotopy = matches!(spec.mode, PerturbMode::ExactHomotopy | PerturbMode::Both);
    let want_change = matches!(spec.mode, PerturbMode::ChangeOfGenerators | PerturbMode::Both);
    let mut applied = false;

    if want_homotopy {
        let cands = (0..n).map(|k| homotopy_candidates(&m, k, spec.max_word_length)).collect::<Result<Vec<_>, _>>()?;
        if cands.iter().any(|c| !c.is_empty()) {
            for (k, p) in pick(&mut rng, &cands).into_iter().enumerate() {
                cm.images[k] += &p;
            }
            if let Err(v) = validate_comultiplication(&m, &cm) {
                return Err(fibrewise_core::Error::Internal(format!("exact perturbation broke C: {v:?}")).into());
            }
            applied = true;
        } else if spec.mode == PerturbMode::ExactHomotopy {
            return Err(PerturbError::Unsatisfiable("no exact coefficients below the truncation degree".into()));
        }
    }
    if want_change {
        let cands = (0..n).map(|k| change_candidates(&m, k, spec.max_word_length)).collect::<Result<Vec<_>, _>>()?;
        if cands.iter().any(|c| !c.is_empty()) {
            let mut phi = ChangeOfGenerators::identity(&m);
            for (k, p) in pick(&mut rng, &cands).into_iter().enumerate() {
                phi.images[k] += &p;
            }
            (m, cm) = conjugate(&phi, &m, &cm)?;
            applied = true;
        } else if spec.mode == PerturbMode::ChangeOfGenerators {
            return Err(PerturbError::Unsatisfiable("no admissible change of generators".into()));
        }
    }
    if !applied {
        return Err(PerturbError::Unsatisfiable("neither perturbation kind has candidates".into()));
    }
    Ok((m, cm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use fibrewise_core::dga::BaseGenerator;
    use fibrewise_core::{FiberGenerator, FreeCdga};

    fn model(fiber: &[u32]) -> RelativeModel {
        let x = Var::base(0, 2);
        RelativeModel {
            base: FreeCdga::new(
                vec![BaseGenerator { name: "x".into(), degree: 2 }, BaseGenerator { name: "y".into(), degree: 5 }],
                vec![Polynomial::zero(), Polynomial::product([(x, 3)])],
                16,
            ),
            fiber: fiber.iter().map(|&d| FiberGenerator { name: format!("w{d}"), degree: d }).collect(),
            differential: vec![Polynomial::zero(); fiber.len()],
        }
    }

    #[test]
    fn subsets() {
        assert_eq!(subsets_below(3, 2), vec![vec![0], vec![1], vec![0, 1], vec![2], vec![0, 2], vec![1, 2]]);
        assert!(subsets_below(0, 3).is_empty());
    }

    #[test]
    fn change_of_generators_makes_d_nonzero() {
        // y w1 w3 is the only tail of w9 whose coefficient is not a cycle.
        let m = model(&[1, 3, 9]);
        let c = Comultiplication::standard(&m);
        let mut nonzero = 0;
        for seed in 0..8 {
            let spec = PerturbationSpec { seed, max_word_length: 3, mode: PerturbMode::ChangeOfGenerators };
            let (m2, c2) = perturb(&m, &c, &spec).unwrap();
            assert_eq!(validate_comultiplication(&m2, &c2), Ok(()));
            if !m2.has_trivial_fiber_differential() {
                nonzero += 1;
                assert!(!c2.is_standard(&m2));
            }
        }
        assert!(nonzero > 0);
    }

    #[test]
    fn exact_terms_need_odd_length() {
        let m = model(&[1, 3, 5, 15]);
        let cands = homotopy_candidates(&m, 3, 3).unwrap();
        assert!(!cands.is_empty());
        assert!(cands.iter().all(|p| p.min_word_length() == Some(3)));
        assert!(homotopy_candidates(&model(&[1, 3, 9]), 2, 3).unwrap().is_empty());
    }

    #[test]
    fn deterministic() {
        let m = model(&[1, 3, 5, 15]);
        let c = Comultiplication::standard(&m);
        for mode in [PerturbMode::ChangeOfGenerators, PerturbMode::ExactHomotopy, PerturbMode::Both] {
            let spec = PerturbationSpec { seed: 7, max_word_length: 3, mode };
            assert_eq!(perturb(&m, &c, &spec).unwrap(), perturb(&m, &c, &spec).unwrap());
        }
    }

    #[test]
    fn empty_fiber_is_left_alone() {
        let m = model(&[]);
        let c = Comultiplication::standard(&m);
        let spec = PerturbationSpec { seed: 3, max_word_length: 3, mode: PerturbMode::Both };
        assert_eq!(perturb(&m, &c, &spec).unwrap(), (m, c));
    }

    #[test]
    fn preconditions() {
        let m = model(&[3, 9]);
        let mut c = Comultiplication::standard(&m);
        c.images[1] += &Polynomial::product([(Var::base(0, 2), 3), (m.fiber_var(0), 1)]);
        let spec = PerturbationSpec { seed: 3, max_word_length: 3, mode: PerturbMode::Both };
        assert!(matches!(perturb(&m, &c, &spec), Err(PerturbError::Precondition(_))));
        // Nothing exact is available over Λ(x2).
        let mut m = model(&[3, 9]);
        m.base = FreeCdga::new(vec![BaseGenerator { name: "x".into(), degree: 2 }], vec![Polynomial::zero()], 14);
        let c = Comultiplication::standard(&m);
        let spec = PerturbationSpec { seed: 3, max_word_length: 3, mode: PerturbMode::ExactHomotopy };
        assert!(matches!(perturb(&m, &c, &spec), Err(PerturbError::Unsatisfiable(_))));
        let spec = PerturbationSpec { mode: PerturbMode::Both, ..spec };
        assert!(perturb(&m, &c, &spec).is_ok());
    }
}
