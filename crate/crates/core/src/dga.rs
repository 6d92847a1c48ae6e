//! Differentials, degreewise cohomology and exactness solving.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{basis_of_degree, AlgebraMap, Derivation, GradedBasis, Monomial, Polynomial, Space, Var};
use crate::linalg::{self, Rref, SparseVec};
use crate::Error;

/// A free graded-commutative algebra on `vars` with a derivation, considered
/// up to a truncation degree.
#[derive(Clone, Debug)]
pub struct Complex {
    pub vars: Vec<Var>,
    pub derivation: Derivation,
    pub truncation: u32,
}

impl Complex {
    pub fn basis(&self, n: u32) -> Result<GradedBasis, Error> {
        basis_of_degree(&self.vars, n, self.truncation)
    }

    pub fn d(&self, p: &Polynomial) -> Polynomial {
        self.derivation.apply(p)
    }

    /// Images of the degree-`n` basis under `d`, as sparse vectors over the
    /// degree `n + 1` monomials that occur (indexed through `targets`).
    fn columns(&self, n: u32, targets: &mut MonomialIndex) -> Result<(GradedBasis, Vec<SparseVec>), Error> {
        let basis = self.basis(n)?;
        let cols = basis.monomials.iter().map(|m| targets.coords(&self.derivation.apply_monomial(m))).collect();
        Ok((basis, cols))
    }

    /// Some `η` with `d(η) = b`, free variables zero; `None` if `b` is not
    /// exact. The zero element always has the preimage zero.
    pub fn solve_preimage(&self, b: &Polynomial) -> Result<Option<Polynomial>, Error> {
        if b.is_zero() {
            return Ok(Some(Polynomial::zero()));
        }
        let n = b.degree().ok_or(Error::NotHomogeneous)?;
        if n > self.truncation {
            return Err(Error::DegreeOutOfRange { degree: n, truncation: self.truncation });
        }
        if !self.d(b).is_zero() {
            return Err(Error::NotACycle);
        }
        if n == 0 {
            return Ok(None);
        }
        let mut targets = MonomialIndex::default();
        let (src, cols) = self.columns(n - 1, &mut targets)?;
        let Some(rhs) = targets.coords_if_known(b) else {
            return Ok(None);
        };
        Ok(linalg::solve(&cols, &rhs).map(|x| from_coords(&src, &x)))
    }

    /// Cycles, boundaries and the chosen complement in degree `n`.
    ///
    /// Unlike [`FreeCdga::cohomology_in_degree`] this does not insist on
    /// `n + 1` being inside the truncation: `d` is applied symbolically, so
    /// the cycle condition is exact at every degree.
    pub fn slice(&self, n: u32) -> Result<CohomologySlice, Error> {
        let mut targets = MonomialIndex::default();
        let (basis, cols) = self.columns(n, &mut targets)?;
        let kernel = linalg::kernel(&cols);
        // Kernel vectors carry a 1 at their own free column and zeros at
        // the other free columns, so a cycle's coordinates in the cycle
        // basis are its entries at the free columns.
        let free: Vec<usize> = kernel.iter().map(|k| *k.keys().next_back().expect("nonzero")).collect();
        let cycles: Vec<Polynomial> = kernel.iter().map(|k| from_coords(&basis, k)).collect();

        let mut boundary_rref = Rref::new();
        let mut boundaries = Vec::new();
        if n > 0 {
            let mut own = MonomialIndex::from_basis(&basis);
            let (_, bcols) = self.columns(n - 1, &mut own)?;
            for col in &bcols {
                let z = restrict(col, &free);
                let id = boundary_rref.rank();
                if boundary_rref.insert(id, &z).is_ok() {
                    boundaries.push(from_coords(&basis, col));
                }
            }
        }
        let complement = (0..free.len()).filter(|i| !boundary_rref.is_pivot(*i)).map(|i| cycles[i].clone()).collect();
        Ok(CohomologySlice { degree: n, cycles, boundaries, complement, basis, free, boundary_rref })
    }
}

/// `Z = E ⊕ N` in one degree.
///
/// `complement` consists of the cycle basis vectors whose coordinates are not
/// pivots of the echelonized boundaries, which makes the choice canonical.
#[derive(Clone, Debug)]
pub struct CohomologySlice {
    pub degree: u32,
    pub cycles: Vec<Polynomial>,
    pub boundaries: Vec<Polynomial>,
    pub complement: Vec<Polynomial>,
    basis: GradedBasis,
    free: Vec<usize>,
    boundary_rref: Rref,
}

impl CohomologySlice {
    pub fn dim_cohomology(&self) -> usize {
        self.complement.len()
    }

    /// Splits a cycle as `c = e + n` with `e` a boundary and `n ∈ N`.
    pub fn split(&self, c: &Polynomial) -> Result<(Polynomial, Polynomial), Error> {
        if c.is_zero() {
            return Ok((Polynomial::zero(), Polynomial::zero()));
        }
        if !c.is_homogeneous_of(self.degree) {
            return Err(Error::WrongDegree { expected: self.degree, found: c.degree().unwrap_or(0) });
        }
        let coords = MonomialIndex::from_basis(&self.basis).coords_if_known(c).ok_or(Error::NotACycle)?;
        let z = restrict(&coords, &self.free);
        let mut rebuilt = Polynomial::zero();
        for (&i, a) in &z {
            rebuilt += &self.cycles[i].scale(a);
        }
        if &rebuilt != c {
            return Err(Error::NotACycle);
        }
        let rem = self.boundary_rref.reduce(&z);
        let mut n = Polynomial::zero();
        for (&i, a) in &rem {
            n += &self.cycles[i].scale(a);
        }
        Ok((c - &n, n))
    }

    /// The complement component of a cycle; zero exactly for boundaries.
    pub fn reduce(&self, c: &Polynomial) -> Result<Polynomial, Error> {
        self.split(c).map(|(_, n)| n)
    }
}

/// Dynamic coordinate system over monomials.
#[derive(Default)]
struct MonomialIndex {
    index: BTreeMap<Monomial, usize>,
}

impl MonomialIndex {
    fn from_basis(b: &GradedBasis) -> Self {
        MonomialIndex { index: b.monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect() }
    }

    fn coords(&mut self, p: &Polynomial) -> SparseVec {
        let mut v = SparseVec::new();
        for (m, c) in p.terms() {
            let next = self.index.len();
            let i = *self.index.entry(m.clone()).or_insert(next);
            v.insert(i, c.clone());
        }
        v
    }

    fn coords_if_known(&self, p: &Polynomial) -> Option<SparseVec> {
        p.terms().map(|(m, c)| self.index.get(m).map(|&i| (i, c.clone()))).collect()
    }
}

fn from_coords(basis: &GradedBasis, x: &SparseVec) -> Polynomial {
    let mut p = Polynomial::zero();
    for (&j, c) in x {
        p.add_term(basis.monomials[j].clone(), c.clone());
    }
    p
}

/// Entries at the listed positions, renumbered by their rank in the list.
fn restrict(v: &SparseVec, positions: &[usize]) -> SparseVec {
    positions.iter().enumerate().filter_map(|(k, p)| v.get(p).map(|c| (k, c.clone()))).collect()
}

/// A named generator of the base algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseGenerator {
    pub name: String,
    pub degree: u32,
}

/// A free CDGA `(ΛV, d)` given on generators. Generator `i` is
/// `Var::base(i, degree)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeCdga {
    pub generators: Vec<BaseGenerator>,
    pub differential: Vec<Polynomial>,
    pub truncation: u32,
}

/// Why a differential fails to be one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DifferentialViolation {
    WrongDegree { generator: usize },
    ForeignVariable { generator: usize },
    DSquaredNonzero { generator: usize, value: Polynomial },
}

impl FreeCdga {
    pub fn new(generators: Vec<BaseGenerator>, differential: Vec<Polynomial>, truncation: u32) -> Self {
        FreeCdga { generators, differential, truncation }
    }

    pub fn var(&self, i: usize) -> Var {
        Var::base(i as u32, self.generators[i].degree)
    }

    pub fn vars(&self) -> Vec<Var> {
        (0..self.generators.len()).map(|i| self.var(i)).collect()
    }

    pub fn derivation(&self) -> Derivation {
        let mut d = Derivation::zero();
        for (i, img) in self.differential.iter().enumerate() {
            d.set(self.var(i), img.clone());
        }
        d
    }

    pub fn complex(&self) -> Complex {
        Complex { vars: self.vars(), derivation: self.derivation(), truncation: self.truncation }
    }

    pub fn extend_leibniz(&self, p: &Polynomial) -> Polynomial {
        self.derivation().apply(p)
    }

    /// Degrees, variables and `d² = 0` on every generator. By the Leibniz
    /// rule this gives `d² = 0` everywhere.
    pub fn check_d_squared(&self) -> Result<(), DifferentialViolation> {
        let d = self.derivation();
        for (i, img) in self.differential.iter().enumerate() {
            if !img.uses_only(|v| v.space == Space::Base && (v.index as usize) < self.generators.len() && v == self.var(v.index as usize)) {
                return Err(DifferentialViolation::ForeignVariable { generator: i });
            }
            let dd = d.apply(img);
            if !dd.is_zero() {
                return Err(DifferentialViolation::DSquaredNonzero { generator: i, value: dd });
            }
            if !img.is_homogeneous_of(self.generators[i].degree + 1) {
                return Err(DifferentialViolation::WrongDegree { generator: i });
            }
        }
        Ok(())
    }

    pub fn cohomology_in_degree(&self, n: u32) -> Result<CohomologySlice, Error> {
        if n + 1 > self.truncation {
            return Err(Error::DegreeOutOfRange { degree: n + 1, truncation: self.truncation });
        }
        self.complex().slice(n)
    }

    pub fn split_cycles(&self, n: u32) -> Result<CohomologySlice, Error> {
        self.cohomology_in_degree(n)
    }

    pub fn solve_preimage(&self, b: &Polynomial) -> Result<Option<Polynomial>, Error> {
        self.complex().solve_preimage(b)
    }
}

/// An algebra map between free algebras with differentials, given on the
/// generators of its source.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    pub generators: Vec<Var>,
    pub map: AlgebraMap,
    pub source_differential: Derivation,
    pub target_differential: Derivation,
    pub dg: bool,
    pub under_over_base: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismViolation {
    DegreeChange { generator: Var },
    NotDg { generator: Var, defect: Polynomial },
    MovesBase { generator: Var },
    ProjectionMismatch { generator: Var },
}

/// Degree preservation, and on request DG and under/over-base conditions.
pub fn check_dg_map(f: &AlgebraMorphism) -> Result<(), MorphismViolation> {
    for &g in &f.generators {
        let img = f.map.image(g);
        if !img.is_homogeneous_of(g.degree) {
            return Err(MorphismViolation::DegreeChange { generator: g });
        }
        if f.under_over_base {
            if g.space == Space::Base && img != Polynomial::var(g) {
                return Err(MorphismViolation::MovesBase { generator: g });
            }
            let pure_base = img.filter(|m| m.word_length() == 0);
            if g.space != Space::Base && !pure_base.is_zero() {
                return Err(MorphismViolation::ProjectionMismatch { generator: g });
            }
        }
        if f.dg {
            let defect = &f.target_differential.apply(&img) - &f.map.apply(&f.source_differential.image(g));
            if !defect.is_zero() {
                return Err(MorphismViolation::NotDg { generator: g, defect });
            }
        }
    }
    Ok(())
}
