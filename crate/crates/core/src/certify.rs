//! Certificates and their independent verifier.
//!
//! A certificate is a chain of steps starting at an input pair `(D, C)`.
//! A change of generators `φ` replaces the pair by its conjugate
//! `(φ⁻¹ D φ, (φ⁻¹ ⊗ φ⁻¹) C φ)`; a DG homotopy replaces `C` by another
//! comultiplication homotopic to it under and over the base. The verifier
//! recomputes every step from the certificate data alone.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::algebra::{AlgebraMap, Polynomial, Space, Var, Q};
use crate::model::{shift_to, validate_comultiplication, validate_relative_model, Comultiplication, RelativeModel};
use crate::normalize::{NormalizationResult, Outcome, Pipeline};
use crate::Error;

/// A unipotent automorphism of `B ⊗ ΛW` fixing `B`: `w_k ↦ images[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChangeOfGenerators {
    pub images: Vec<Polynomial>,
}

impl ChangeOfGenerators {
    pub fn identity(model: &RelativeModel) -> Self {
        ChangeOfGenerators { images: model.fiber_vars().into_iter().map(Polynomial::var).collect() }
    }

    pub fn is_identity(&self, model: &RelativeModel) -> bool {
        *self == Self::identity(model)
    }

    pub fn as_map(&self, model: &RelativeModel) -> AlgebraMap {
        let mut m = AlgebraMap::identity();
        for (k, img) in self.images.iter().enumerate() {
            m.set(model.fiber_var(k), img.clone());
        }
        m
    }

    /// `φ ⊗_B φ` on `B ⊗ ΛW ⊗ ΛW`.
    pub fn on_both_copies(&self, model: &RelativeModel) -> AlgebraMap {
        let mut m = self.as_map(model);
        for (k, img) in self.images.iter().enumerate() {
            m.set(model.fiber_var(k).in_copy(Space::W1), shift_to(img, Space::W1));
        }
        m
    }

    /// `φ(w_k) - w_k` must be a same-degree element of `B ⊗ ΛW(k)` with no
    /// pure base part.
    pub fn check_shape(&self, model: &RelativeModel) -> Result<(), Error> {
        if self.images.len() != model.fiber.len() {
            return Err(Error::ShapeViolation(format!("{} images for {} generators", self.images.len(), model.fiber.len())));
        }
        let base_vars = model.base.vars();
        for (k, img) in self.images.iter().enumerate() {
            let v = model.fiber_var(k);
            let tail = img - &Polynomial::var(v);
            let name = &model.fiber[k].name;
            if !tail.is_homogeneous_of(v.degree) {
                return Err(Error::ShapeViolation(format!("image of {name} is not homogeneous of the generator's degree")));
            }
            let lower = |x: Var| {
                base_vars.contains(&x) || (x.space == Space::W0 && (x.index as usize) < k && x == model.fiber_var(x.index as usize))
            };
            if !tail.uses_only(lower) {
                return Err(Error::ShapeViolation(format!("image of {name} involves generators outside B ⊗ ΛW(<{name})")));
            }
            if !tail.word_length_part(0).is_zero() {
                return Err(Error::ShapeViolation(format!("image of {name} has a pure base term")));
            }
        }
        Ok(())
    }

    /// Inverse by back-substitution in K-S order, verified by composing.
    pub fn invert(&self, model: &RelativeModel) -> Result<ChangeOfGenerators, Error> {
        self.check_shape(model)?;
        let mut inv = AlgebraMap::identity();
        let mut images = Vec::with_capacity(self.images.len());
        for (k, img) in self.images.iter().enumerate() {
            let v = model.fiber_var(k);
            // φ(w_k) = w_k + R_k with R_k in lower generators, so
            // φ⁻¹(w_k) = w_k - φ⁻¹(R_k).
            let tail = img - &Polynomial::var(v);
            let image = &Polynomial::var(v) - &inv.apply(&tail);
            inv.set(v, image.clone());
            images.push(image);
        }
        let out = ChangeOfGenerators { images };
        let phi = self.as_map(model);
        for (k, v) in model.fiber_vars().into_iter().enumerate() {
            let back = phi.apply(&out.images[k]);
            let forth = inv.apply(&self.images[k]);
            if back != Polynomial::var(v) || forth != Polynomial::var(v) {
                return Err(Error::Internal(format!("inverse of change of generators fails at {}", model.fiber[k].name)));
            }
        }
        Ok(out)
    }
}

/// `(D', C') = (φ⁻¹ ∘ D ∘ φ, (φ⁻¹ ⊗ φ⁻¹) ∘ C ∘ φ)`, revalidated.
pub fn conjugate(
    phi: &ChangeOfGenerators,
    model: &RelativeModel,
    c: &Comultiplication,
) -> Result<(RelativeModel, Comultiplication), Error> {
    let inv = phi.invert(model)?;
    let inv_map = inv.as_map(model);
    let inv2 = inv.on_both_copies(model);
    let d = model.derivation();
    let cmap = c.as_map(model);
    let mut differential = Vec::with_capacity(phi.images.len());
    let mut images = Vec::with_capacity(phi.images.len());
    for img in &phi.images {
        differential.push(inv_map.apply(&d.apply(img)));
        images.push(inv2.apply(&cmap.apply(img)));
    }
    let m2 = model.with_differential(differential);
    let c2 = Comultiplication { images };
    validate_relative_model(&m2).map_err(|e| Error::Revalidation(format!("{e:?}")))?;
    validate_comultiplication(&m2, &c2).map_err(|e| Error::Revalidation(format!("{e:?}")))?;
    Ok((m2, c2))
}

/// A DG homotopy `H: B ⊗ ΛW -> B ⊗ ΛW ⊗ ΛW ⊗ Λ(t, dt)` from `start` to `end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGHomotopy {
    pub images: Vec<Polynomial>,
    pub start: Comultiplication,
    pub end: Comultiplication,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomotopyFailure {
    Arity,
    WrongDegree,
    ForeignVariable(Var),
    Projection(Polynomial),
    NotDg(Polynomial),
    Start(Polynomial),
    End(Polynomial),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyViolation {
    pub generator: Option<usize>,
    pub failure: HomotopyFailure,
}

fn evaluation(t: Q) -> AlgebraMap {
    AlgebraMap::identity().with(Var::T, Polynomial::constant(t)).with(Var::DT, Polynomial::zero())
}

/// Degree, projection compatibility, the DG condition and both endpoints.
pub fn verify_homotopy(model: &RelativeModel, h: &DGHomotopy) -> Result<(), HomotopyViolation> {
    let n = model.fiber.len();
    if h.images.len() != n || h.start.images.len() != n || h.end.images.len() != n {
        return Err(HomotopyViolation { generator: None, failure: HomotopyFailure::Arity });
    }
    let mut allowed = model.vars_in(&[Space::W0, Space::W1]);
    allowed.extend([Var::T, Var::DT]);
    let d = model.derivation_on(&[Space::W0, Space::W1]);
    let hmap = {
        let mut m = AlgebraMap::identity();
        for (k, img) in h.images.iter().enumerate() {
            m.set(model.fiber_var(k), img.clone());
        }
        m
    };
    let at0 = evaluation(Q::zero());
    let at1 = evaluation(Q::one());
    for (k, img) in h.images.iter().enumerate() {
        let fail = |failure| Err(HomotopyViolation { generator: Some(k), failure });
        if !img.is_homogeneous_of(model.fiber[k].degree) {
            return fail(HomotopyFailure::WrongDegree);
        }
        if let Some(v) = img.vars().find(|v| !allowed.contains(v)) {
            return fail(HomotopyFailure::ForeignVariable(v));
        }
        let pure = img.filter(|m| m.word_length() == 0);
        if !pure.is_zero() {
            return fail(HomotopyFailure::Projection(pure));
        }
        let defect = &d.apply(img) - &hmap.apply(&model.differential[k]);
        if !defect.is_zero() {
            return fail(HomotopyFailure::NotDg(defect));
        }
        let s = &at0.apply(img) - &h.start.images[k];
        if !s.is_zero() {
            return fail(HomotopyFailure::Start(s));
        }
        let e = &at1.apply(img) - &h.end.images[k];
        if !e.is_zero() {
            return fail(HomotopyFailure::End(e));
        }
    }
    Ok(())
}

/// A differential on `W` together with a comultiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub differential: Vec<Polynomial>,
    pub comultiplication: Comultiplication,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    ChangeOfGenerators { map: ChangeOfGenerators, result: Structure },
    Homotopy(DGHomotopy),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceCertificate {
    pub source: Structure,
    pub steps: Vec<Step>,
    pub target: Structure,
}

/// Where and why a certificate was rejected. `step` is `None` for problems
/// with the declared endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateRejection {
    pub step: Option<usize>,
    pub reason: String,
}

fn reject<T>(step: Option<usize>, reason: impl Into<String>) -> Result<T, CertificateRejection> {
    Err(CertificateRejection { step, reason: reason.into() })
}

/// Replays `cert` against the input `(model, c)`.
pub fn verify_equivalence(model: &RelativeModel, c: &Comultiplication, cert: &EquivalenceCertificate) -> Result<(), CertificateRejection> {
    if let Err(e) = validate_relative_model(model) {
        return reject(None, format!("input model is invalid: {e:?}"));
    }
    if let Err(e) = validate_comultiplication(model, c) {
        return reject(None, format!("input comultiplication is invalid: {e:?}"));
    }
    if cert.source.differential != model.differential || cert.source.comultiplication != *c {
        return reject(None, "certificate source does not match the input model");
    }
    let mut m = model.clone();
    let mut cm = c.clone();
    for (i, step) in cert.steps.iter().enumerate() {
        match step {
            Step::ChangeOfGenerators { map, result } => {
                let (m2, c2) = match conjugate(map, &m, &cm) {
                    Ok(x) => x,
                    Err(e) => return reject(Some(i), format!("{e}")),
                };
                if m2.differential != result.differential {
                    return reject(Some(i), "recorded differential differs from the recomputed conjugate");
                }
                if c2 != result.comultiplication {
                    return reject(Some(i), "recorded comultiplication differs from the recomputed conjugate");
                }
                m = m2;
                cm = c2;
            }
            Step::Homotopy(h) => {
                if h.start != cm {
                    return reject(Some(i), "homotopy does not start at the current comultiplication");
                }
                if let Err(v) = verify_homotopy(&m, h) {
                    return reject(Some(i), format!("homotopy rejected: {v:?}"));
                }
                if let Err(e) = validate_comultiplication(&m, &h.end) {
                    return reject(Some(i), format!("homotopy ends at an invalid comultiplication: {e:?}"));
                }
                cm = h.end.clone();
            }
        }
    }
    if m.differential != cert.target.differential || cm != cert.target.comultiplication {
        return reject(None, "replayed chain does not end at the declared target");
    }
    Ok(())
}

/// Plain-text statement of what a normalization run supports.
pub fn emit_triviality_report(result: &NormalizationResult) -> String {
    let verdict = match (&result.outcome, result.pipeline) {
        (Outcome::Normalized(_), Pipeline::Hopf) => "fibrewise trivial (algebraic criterion met)",
        (Outcome::Normalized(_), Pipeline::Ls) => "fibrewise H-trivial (algebraic criterion met)",
        (Outcome::Obstructed(_), Pipeline::Hopf) => "not trivializable by this method; obstruction class attached",
        (Outcome::Obstructed(_), Pipeline::Ls) => "not H-trivializable by this method; obstruction class attached",
        (Outcome::HypothesisViolation, _) => "hypotheses violated; normalization succeeded but no conclusion is drawn",
    };
    let mut s = String::new();
    s.push_str(verdict);
    s.push('\n');
    s.push_str(&format!("verified up to degree {}\n", result.report.truncation));
    let topo = match result.pipeline {
        Pipeline::Hopf => "rational fibrewise triviality",
        Pipeline::Ls => "rational fibrewise H-triviality",
    };
    if matches!(result.outcome, Outcome::Normalized(_)) {
        s.push_str(&format!("topological conclusion ({topo}) follows from the published theorem and is not machine-verified\n"));
    }
    s
}
