//! The Hopf and Leray–Samelson normalization pipelines.
//!
//! Both work through the fibre generators in K-S order and, for each
//! generator, through ascending word length. Every rewrite is recorded as a
//! certificate step, so a successful run ends with an
//! [`EquivalenceCertificate`] from the input pair to the normal form.
//!
//! The pipelines always attempt the rewrite. A concrete failure is reported
//! as an [`Obstruction`]; a run that succeeds although the hypotheses of the
//! theorems fail is reported as [`Outcome::HypothesisViolation`] unless
//! [`NormalizeOptions::override_hypotheses`] is set.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::One;

use crate::algebra::{Monomial, Polynomial, Space, Var, Q};
use crate::certify::{conjugate, ChangeOfGenerators, DGHomotopy, EquivalenceCertificate, Step, Structure};
use crate::dga::CohomologySlice;
use crate::model::{
    check_homotopy_associative, check_hypotheses, validate_comultiplication, validate_relative_model, AssociativityVerdict,
    Comultiplication, HypothesisReport, RelativeModel,
};
use crate::propsolve::{solve_basic_form, MixedTensor};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pipeline {
    Hopf,
    Ls,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    HopfLinear,
    HopfHigher,
    LsEven,
    LsOdd,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::HopfLinear => "hopf-linear",
            Stage::HopfHigher => "hopf-higher",
            Stage::LsEven => "ls-even",
            Stage::LsOdd => "ls-odd",
        }
    }

    pub fn parse(s: &str) -> Option<Stage> {
        [Stage::HopfLinear, Stage::HopfHigher, Stage::LsEven, Stage::LsOdd].into_iter().find(|x| x.as_str() == s)
    }
}

/// A non-exact class that stops a normalization step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub stage: Stage,
    pub generator: usize,
    pub word_length: u32,
    /// Coefficients reduced to the chosen complement of the boundaries.
    pub class_witness: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Normalized(EquivalenceCertificate),
    Obstructed(Obstruction),
    HypothesisViolation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationResult {
    pub pipeline: Pipeline,
    pub outcome: Outcome,
    pub report: HypothesisReport,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NormalizeOptions {
    pub override_hypotheses: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StageError {
    Obstructed(Obstruction),
    Engine(Error),
}

impl From<Error> for StageError {
    fn from(e: Error) -> Self {
        StageError::Engine(e)
    }
}

/// Current pair `(D, C)` and the steps that led to it.
#[derive(Clone, Debug)]
pub struct Run {
    pub model: RelativeModel,
    pub comult: Comultiplication,
    pub steps: Vec<Step>,
    slices: BTreeMap<u32, CohomologySlice>,
}

impl Run {
    pub fn new(model: RelativeModel, comult: Comultiplication) -> Self {
        Run { model, comult, steps: Vec::new(), slices: BTreeMap::new() }
    }

    fn structure(&self) -> Structure {
        Structure { differential: self.model.differential.clone(), comultiplication: self.comult.clone() }
    }

    fn change(&mut self, phi: ChangeOfGenerators) -> Result<(), Error> {
        if phi.is_identity(&self.model) {
            return Ok(());
        }
        let (m, c) = conjugate(&phi, &self.model, &self.comult)?;
        self.model = m;
        self.comult = c;
        self.steps.push(Step::ChangeOfGenerators { map: phi, result: self.structure() });
        Ok(())
    }

    fn single_change(&self, k: usize, image: Polynomial) -> ChangeOfGenerators {
        let mut phi = ChangeOfGenerators::identity(&self.model);
        phi.images[k] = image;
        phi
    }

    fn slice(&mut self, n: u32) -> Result<&CohomologySlice, Error> {
        if !self.slices.contains_key(&n) {
            let s = self.model.base.complex().slice(n)?;
            self.slices.insert(n, s);
        }
        Ok(&self.slices[&n])
    }

    /// Complement component of a base cycle.
    fn class_of(&mut self, b: &Polynomial) -> Result<Polynomial, Error> {
        match b.degree() {
            None if b.is_zero() => Ok(Polynomial::zero()),
            None => Err(Error::NotHomogeneous),
            Some(n) => self.slice(n)?.reduce(b),
        }
    }

    pub fn certificate(&self, source: Structure) -> EquivalenceCertificate {
        EquivalenceCertificate { source, steps: self.steps.clone(), target: self.structure() }
    }
}

fn obstruct<T>(stage: Stage, generator: usize, word_length: u32, class_witness: Polynomial) -> Result<T, StageError> {
    Err(StageError::Obstructed(Obstruction { stage, generator, word_length, class_witness }))
}

/// Removes the word-length-one part of every `D(w_k)`.
pub fn hopf_stage_linear(run: &mut Run) -> Result<(), StageError> {
    let base = run.model.base.complex();
    for k in 0..run.model.fiber.len() {
        let linear = run.model.differential[k].word_length_part(1).by_fiber_part();
        if linear.is_empty() {
            continue;
        }
        let mut image = Polynomial::var(run.model.fiber_var(k));
        for (m, b) in &linear {
            if !base.d(b).is_zero() {
                return Err(Error::Internal(format!("linear coefficient in D({}) is not a cycle", run.model.fiber[k].name)).into());
            }
            match base.solve_preimage(b)? {
                Some(eta) => image -= &eta.mul_monomial(m),
                None => {
                    let class = run.class_of(b)?;
                    return obstruct(Stage::HopfLinear, k, 1, class);
                }
            }
        }
        let phi = run.single_change(k, image);
        run.change(phi)?;
    }
    Ok(())
}

/// Kills `D(w_k)` one word length at a time, reading the primitives off the
/// comultiplication.
pub fn hopf_stage_higher(run: &mut Run) -> Result<(), StageError> {
    let base = run.model.base.complex();
    for k in 0..run.model.fiber.len() {
        while let Some(r) = run.model.differential[k].min_word_length() {
            if r < 2 {
                return Err(Error::Internal("linear terms left after the linear stage".into()).into());
            }
            let lowest = run.model.differential[k].word_length_part(r).by_fiber_part();
            let cparts = run.comult.images[k].by_fiber_part();
            let mut image = Polynomial::var(run.model.fiber_var(k));
            for (m, b) in &lowest {
                // The DG condition gives d(β) = ±N b for the coefficient β of
                // w'_{i1} w_{i1}^{N-1} w_{i2} ⋯ in C(w_k).
                let factors = m.factors();
                let (first, n) = factors[0];
                let mut raw = alloc::vec![(first.in_copy(Space::W1), 1)];
                if n > 1 {
                    raw.push((first, n - 1));
                }
                raw.extend_from_slice(&factors[1..]);
                let (target, sign) = Monomial::normalize(raw);
                let beta = cparts.get(&target).cloned().unwrap_or_default();
                let mut eta = beta.scale(&(Q::from_integer(sign.into()) / Q::from_integer(n.into())));
                if base.d(&eta) != *b {
                    eta = match base.solve_preimage(b) {
                        Ok(Some(e)) => e,
                        Ok(None) | Err(Error::NotACycle) => {
                            let class = run.class_of(b).unwrap_or_else(|_| b.clone());
                            return obstruct(Stage::HopfHigher, k, r, class);
                        }
                        Err(e) => return Err(e.into()),
                    };
                }
                image -= &eta.mul_monomial(m);
            }
            let phi = run.single_change(k, image);
            run.change(phi)?;
            if let Some(r2) = run.model.differential[k].min_word_length() {
                if r2 <= r {
                    return Err(Error::Internal(format!("word length of D({}) did not increase", run.model.fiber[k].name)).into());
                }
            }
        }
    }
    Ok(())
}

/// Removes the length-`r` excess `p` of `C(w_k)` by a homotopy
/// `H(w_k) = C(w_k) - p t - s η dt` where `D(η) = p` and `s = -(-1)^{|p|}`.
fn remove_exact(run: &mut Run, k: usize, r: u32, p: &Polynomial, stage: Stage) -> Result<(), StageError> {
    let base = run.model.base.complex();
    let mut eta = Polynomial::zero();
    let mut witness = Polynomial::zero();
    for (m, beta) in p.by_fiber_part() {
        if !base.d(&beta).is_zero() {
            return Err(Error::Internal(format!("excess coefficient of C({}) is not a cycle", run.model.fiber[k].name)).into());
        }
        match base.solve_preimage(&beta)? {
            Some(e) => eta += &e.mul_monomial(&m),
            None => witness += &run.class_of(&beta)?.mul_monomial(&m),
        }
    }
    if !witness.is_zero() {
        return obstruct(stage, k, r, witness);
    }
    let degree = run.model.fiber[k].degree;
    let s = if degree.is_multiple_of(2) { -Q::one() } else { Q::one() };
    let start = run.comult.clone();
    let mut end = start.clone();
    end.images[k] -= p;
    let mut images = start.images.clone();
    images[k] = &(&images[k] - &(p * &Polynomial::var(Var::T))) - &(&eta * &Polynomial::var(Var::DT)).scale(&s);
    run.comult = end.clone();
    run.steps.push(Step::Homotopy(DGHomotopy { images, start, end }));
    Ok(())
}

/// Even lowest length: every coefficient must be exact.
pub fn ls_even_step(run: &mut Run, k: usize) -> Result<(), StageError> {
    let p = run.comult.excess(&run.model, k);
    let Some(r) = p.min_word_length() else { return Ok(()) };
    remove_exact(run, k, r, &p.word_length_part(r), Stage::LsEven)
}

/// Odd lowest length: the complement part is absorbed by a change of
/// generators, the boundary part by a homotopy.
pub fn ls_odd_step(run: &mut Run, k: usize) -> Result<(), StageError> {
    let p = run.comult.excess(&run.model, k);
    let Some(r) = p.min_word_length() else { return Ok(()) };
    let pr = p.word_length_part(r);
    let mut classes = Polynomial::zero();
    for (m, beta) in pr.by_fiber_part() {
        let n = beta.degree().ok_or(Error::NotHomogeneous)?;
        let (_, class) = match run.slice(n)?.split(&beta) {
            Ok(x) => x,
            Err(Error::NotACycle) => {
                return Err(Error::Internal(format!("excess coefficient of C({}) is not a cycle", run.model.fiber[k].name)).into())
            }
            Err(e) => return Err(e.into()),
        };
        classes += &class.mul_monomial(&m);
    }
    if !classes.is_zero() {
        let chi = MixedTensor::new(classes.clone())?;
        let form = match solve_basic_form(&chi) {
            Ok(f) => f,
            Err(_) => return obstruct(Stage::LsOdd, k, r, classes),
        };
        let mut image = Polynomial::var(run.model.fiber_var(k));
        for (seq, b) in &form {
            image -= &(b * &seq.w());
        }
        let phi = run.single_change(k, image);
        run.change(phi)?;
    }
    let rest = run.comult.excess(&run.model, k).word_length_part(r);
    if !rest.is_zero() {
        remove_exact(run, k, r, &rest, Stage::LsOdd)?;
    }
    Ok(())
}

/// Brings every `C(w_k)` to `w_k + w'_k`; requires `D(W) = 0`.
pub fn ls_stages(run: &mut Run) -> Result<(), StageError> {
    if !run.model.has_trivial_fiber_differential() {
        return Err(Error::Internal("Leray–Samelson stage needs D(W) = 0".into()).into());
    }
    for k in 0..run.model.fiber.len() {
        let before: Vec<Polynomial> = run.comult.images[..k].to_vec();
        while let Some(r) = run.comult.excess(&run.model, k).min_word_length() {
            if r % 2 == 0 {
                ls_even_step(run, k)?;
            } else {
                ls_odd_step(run, k)?;
            }
            if let Some(r2) = run.comult.excess(&run.model, k).min_word_length() {
                if r2 <= r {
                    return Err(Error::Internal(format!("excess length of C({}) did not increase", run.model.fiber[k].name)).into());
                }
            }
        }
        if run.comult.images[..k] != before[..] {
            return Err(Error::Internal(format!("steps for {} changed earlier generators", run.model.fiber[k].name)).into());
        }
    }
    Ok(())
}

fn prepare(model: &RelativeModel, c: &Comultiplication) -> Result<HypothesisReport, Error> {
    validate_relative_model(model).map_err(|e| Error::InvalidInput(format!("{e:?}")))?;
    validate_comultiplication(model, c).map_err(|e| Error::InvalidInput(format!("{e:?}")))?;
    model.check_degree_order()?;
    check_hypotheses(model)
}

fn finish(
    pipeline: Pipeline,
    run: Result<Run, StageError>,
    source: Structure,
    report: HypothesisReport,
    empty_fiber: bool,
    opts: NormalizeOptions,
) -> Result<NormalizationResult, Error> {
    let outcome = match run {
        Err(StageError::Engine(e)) => return Err(e),
        Err(StageError::Obstructed(o)) => Outcome::Obstructed(o),
        Ok(run) if report.satisfied() || opts.override_hypotheses || empty_fiber => Outcome::Normalized(run.certificate(source)),
        Ok(_) => Outcome::HypothesisViolation,
    };
    Ok(NormalizationResult { pipeline, outcome, report })
}

/// `(D, C) ≡ (d_B ⊗ 1, C')`.
pub fn hopf_normalize(model: &RelativeModel, c: &Comultiplication, opts: NormalizeOptions) -> Result<NormalizationResult, Error> {
    let report = prepare(model, c)?;
    let mut run = Run::new(model.clone(), c.clone());
    let source = run.structure();
    let res = hopf_stage_linear(&mut run).and_then(|_| hopf_stage_higher(&mut run)).map(|_| run);
    finish(Pipeline::Hopf, res, source, report, model.fiber.is_empty(), opts)
}

/// `(D, C) ≡ (d_B ⊗ 1, C₀)`.
pub fn ls_normalize(model: &RelativeModel, c: &Comultiplication, opts: NormalizeOptions) -> Result<NormalizationResult, Error> {
    let mut report = prepare(model, c)?;
    let mut run = Run::new(model.clone(), c.clone());
    let source = run.structure();
    if let Err(e) = hopf_stage_linear(&mut run).and_then(|_| hopf_stage_higher(&mut run)) {
        return finish(Pipeline::Ls, Err(e), source, report, model.fiber.is_empty(), opts);
    }
    // Exactness of the defect is only meaningful once D(W) = 0.
    let verdicts = check_homotopy_associative(&run.model, &run.comult)?;
    report.non_associative =
        verdicts.iter().enumerate().filter(|(_, v)| matches!(v, AssociativityVerdict::NotExact(_))).map(|(k, _)| k).collect();
    let res = ls_stages(&mut run).map(|_| run);
    finish(Pipeline::Ls, res, source, report, model.fiber.is_empty(), opts)
}
