use alloc::string::ToString;
use alloc::vec::Vec;

use super::{Monomial, Var};
use crate::Error;

/// All canonical monomials of one degree in a set of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    pub degree: u32,
    pub monomials: Vec<Monomial>,
}

impl GradedBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.monomials.binary_search(m).ok()
    }

    pub fn filtered(&self, keep: impl FnMut(&&Monomial) -> bool) -> GradedBasis {
        GradedBasis { degree: self.degree, monomials: self.monomials.iter().filter(keep).cloned().collect() }
    }
}

/// Enumerates the degree-`n` monomials in `vars`, sorted and duplicate-free.
pub fn basis_of_degree(vars: &[Var], n: u32, truncation: u32) -> Result<GradedBasis, Error> {
    if n > truncation {
        return Err(Error::DegreeOutOfRange { degree: n, truncation });
    }
    if let Some(v) = vars.iter().find(|v| v.degree == 0) {
        return Err(Error::DegreeZeroVariable(v.to_string()));
    }
    let mut sorted: Vec<Var> = vars.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut monomials = Vec::new();
    let mut current = Vec::new();
    enumerate(&sorted, n, &mut current, &mut monomials);
    monomials.sort();
    Ok(GradedBasis { degree: n, monomials })
}

fn enumerate(vars: &[Var], remaining: u32, current: &mut Vec<(Var, u32)>, out: &mut Vec<Monomial>) {
    let Some((&v, rest)) = vars.split_first() else {
        if remaining == 0 {
            out.push(Monomial::from_sorted(current.clone()));
        }
        return;
    };
    let max = if v.is_odd() { 1 } else { remaining / v.degree };
    for e in 0..=max.min(remaining / v.degree) {
        if e > 0 {
            current.push((v, e));
        }
        enumerate(rest, remaining - e * v.degree, current, out);
        if e > 0 {
            current.pop();
        }
    }
}
