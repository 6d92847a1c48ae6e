#![allow(dead_code)]

use std::path::{Path, PathBuf};

use fibrewise::document::{model_document, to_json};
use fibrewise::perturb::{perturb, PerturbError, PerturbMode, PerturbationSpec};
use fibrewise_core::dga::BaseGenerator;
use fibrewise_core::{Comultiplication, FiberGenerator, FreeCdga, Polynomial, RelativeModel, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

pub fn fixture(name: &str) -> PathBuf {
    Path::new(FIXTURES).join(format!("{name}.json"))
}

pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[&str]) -> Invocation {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fibrewise").chain(args.iter().copied());
    let code = fibrewise::run(argv, &mut out, &mut err);
    Invocation { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

/// The three round-trip bases: Λ(x2), Λ(x2, y5; dy = x³), Λ(x4, y6).
pub fn rt_base(which: usize, truncation: u32) -> FreeCdga {
    let g = |name: &str, degree| BaseGenerator { name: name.into(), degree };
    match which % 3 {
        0 => FreeCdga::new(vec![g("x", 2)], vec![Polynomial::zero()], truncation),
        1 => FreeCdga::new(vec![g("x", 2), g("y", 5)], vec![Polynomial::zero(), Polynomial::product([(Var::base(0, 2), 3)])], truncation),
        _ => FreeCdga::new(vec![g("x", 4), g("y", 6)], vec![Polynomial::zero(); 2], truncation),
    }
}

pub fn trivial_model(base: FreeCdga, degrees: &[u32]) -> RelativeModel {
    let mut degrees = degrees.to_vec();
    degrees.sort_unstable();
    RelativeModel {
        base,
        fiber: degrees.iter().enumerate().map(|(i, &d)| FiberGenerator { name: format!("w{d}_{i}"), degree: d }).collect(),
        differential: vec![Polynomial::zero(); degrees.len()],
    }
}

pub struct RtCase {
    pub seed: u64,
    pub mode: PerturbMode,
    pub original: (RelativeModel, Comultiplication),
    pub perturbed: (RelativeModel, Comultiplication),
}

/// Seeded round-trip cases: at most four odd fibre generators of degree at
/// most 9, truncation 14, modes alternating between `both` and
/// `change-of-generators`. Seeds whose perturbation is unavailable or leaves
/// the pair unchanged are skipped.
pub fn rt_cases(count: usize) -> Vec<RtCase> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        seed += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=4);
        let degrees: Vec<u32> = (0..n).map(|_| 2 * rng.gen_range(0..5) + 1).collect();
        let m = trivial_model(rt_base(rng.gen_range(0..3), 14), &degrees);
        let c = Comultiplication::standard(&m);
        let mode = if seed.is_multiple_of(2) { PerturbMode::Both } else { PerturbMode::ChangeOfGenerators };
        let spec = PerturbationSpec { seed, max_word_length: 3, mode };
        match perturb(&m, &c, &spec) {
            Ok(p) if p != (m.clone(), c.clone()) => out.push(RtCase { seed, mode, original: (m, c), perturbed: p }),
            Ok(_) | Err(PerturbError::Unsatisfiable(_)) => {}
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
    out
}

pub fn write_model(dir: &Path, name: &str, m: &RelativeModel, c: &Comultiplication) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, to_json(&model_document(m, c))).unwrap();
    p
}
