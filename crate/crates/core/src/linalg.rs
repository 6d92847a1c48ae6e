//! Sparse exact linear algebra over the rationals.
//!
//! Vectors are sparse maps from coordinate to nonzero coefficient. The
//! reduced row echelon form is unique, so every derived quantity here
//! (pivots, kernel bases, preimages with free variables set to zero) is
//! deterministic and independent of insertion details beyond column order.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::algebra::Q;

pub type SparseVec = BTreeMap<usize, Q>;

/// `v += c * w`, dropping entries that cancel.
pub fn axpy(v: &mut SparseVec, c: &Q, w: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (&i, x) in w {
        let entry = v.entry(i).or_insert_with(Q::zero);
        *entry += c * x;
        if entry.is_zero() {
            v.remove(&i);
        }
    }
}

pub fn scale(v: &SparseVec, c: &Q) -> SparseVec {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(&i, x)| (i, x * c)).collect()
}

/// Fully reduced echelon basis of a growing subspace.
///
/// Each stored row has a leading 1 at its pivot and zeros at every other
/// pivot. Optionally every row remembers which combination of the inserted
/// vectors produced it.
#[derive(Clone, Debug, Default)]
pub struct Rref {
    rows: BTreeMap<usize, (SparseVec, SparseVec)>,
}

impl Rref {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.rows.contains_key(&i)
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseVec)> {
        self.rows.iter().map(|(&p, (r, _))| (p, r))
    }

    /// Reduces `v` against the stored rows; returns the remainder and the
    /// combination of stored inputs that was subtracted.
    pub fn reduce_tracked(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut rem = v.clone();
        let mut used = SparseVec::new();
        for (p, (row, combo)) in &self.rows {
            if let Some(c) = rem.get(p).cloned() {
                axpy(&mut rem, &-c.clone(), row);
                axpy(&mut used, &c, combo);
            }
        }
        (rem, used)
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut rem = v.clone();
        for (p, (row, _)) in &self.rows {
            if let Some(c) = rem.get(p).cloned() {
                axpy(&mut rem, &-c, row);
            }
        }
        rem
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts input number `id`. Returns `Err(dependency)` when the vector is
    /// already in the span, where `dependency` expresses it through earlier
    /// inputs.
    pub fn insert(&mut self, id: usize, v: &SparseVec) -> Result<usize, SparseVec> {
        let (rem, used) = self.reduce_tracked(v);
        if rem.is_empty() {
            return Err(used);
        }
        let mut combo = SparseVec::new();
        combo.insert(id, Q::one());
        axpy(&mut combo, &-Q::one(), &used);
        let (&pivot, lead) = rem.iter().next().expect("nonzero remainder");
        let inv = lead.recip();
        let row = scale(&rem, &inv);
        let combo = scale(&combo, &inv);
        for (r, c) in self.rows.values_mut() {
            if let Some(x) = r.get(&pivot).cloned() {
                axpy(r, &-x.clone(), &row);
                axpy(c, &-x, &combo);
            }
        }
        self.rows.insert(pivot, (row, combo));
        Ok(pivot)
    }

    pub fn extend<'a>(&mut self, vs: impl IntoIterator<Item = &'a SparseVec>) {
        for v in vs {
            let id = self.rank();
            let _ = self.insert(id, v);
        }
    }
}

pub fn rank<'a>(vs: impl IntoIterator<Item = &'a SparseVec>) -> usize {
    let mut r = Rref::new();
    r.extend(vs);
    r.rank()
}

/// Kernel of the linear map whose `j`-th column is `columns[j]`.
///
/// The basis has one vector per non-pivot column `j`: `e_j` minus the
/// expression of column `j` through the pivot columns before it.
pub fn kernel(columns: &[SparseVec]) -> Vec<SparseVec> {
    let mut rref = Rref::new();
    let mut out = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        if let Err(dep) = rref.insert(j, col) {
            let mut k = SparseVec::new();
            k.insert(j, Q::one());
            axpy(&mut k, &-Q::one(), &dep);
            out.push(k);
        }
    }
    out
}

/// Solves `Σ x_j columns[j] = b`, with every free variable set to zero.
pub fn solve(columns: &[SparseVec], b: &SparseVec) -> Option<SparseVec> {
    let mut rref = Rref::new();
    for (j, col) in columns.iter().enumerate() {
        let _ = rref.insert(j, col);
    }
    let (rem, used) = rref.reduce_tracked(b);
    rem.is_empty().then_some(used)
}

/// `Σ coords[j] columns[j]`.
pub fn combine(columns: &[SparseVec], coords: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (&j, c) in coords {
        axpy(&mut out, c, &columns[j]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().filter(|e| e.1 != 0).map(|&(i, x)| (i, Q::from_integer(x.into()))).collect()
    }

    #[test]
    fn kernel_of_a_rank_one_map() {
        let cols = [v(&[(0, 1), (1, 2)]), v(&[(0, 2), (1, 4)]), v(&[])];
        let k = kernel(&cols);
        assert_eq!(k, alloc::vec![v(&[(0, -2), (1, 1)]), v(&[(2, 1)])]);
        for kv in &k {
            assert!(combine(&cols, kv).is_empty());
        }
    }

    #[test]
    fn solve_sets_free_variables_to_zero() {
        let cols = [v(&[(0, 1)]), v(&[(0, 1)]), v(&[(1, 3)])];
        let x = solve(&cols, &v(&[(0, 2), (1, 6)])).unwrap();
        assert_eq!(x, v(&[(0, 2), (2, 2)]));
        assert!(solve(&cols, &v(&[(3, 1)])).is_none());
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<SparseVec>> {
        proptest::collection::vec(proptest::collection::vec(-2i64..3, 4), 0..6).prop_map(|cols| {
            cols.iter()
                .map(|c| c.iter().enumerate().filter(|e| *e.1 != 0).map(|(i, &x)| (i, Q::from_integer(x.into()))).collect())
                .collect()
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(cols in arb_matrix()) {
            let k = kernel(&cols);
            prop_assert_eq!(rank(cols.iter()) + k.len(), cols.len());
            for kv in &k {
                prop_assert!(combine(&cols, kv).is_empty());
            }
        }

        #[test]
        fn solutions_reproduce_the_right_hand_side(cols in arb_matrix(), x in proptest::collection::vec(-3i64..4, 6)) {
            let coords: SparseVec = x.iter().take(cols.len()).enumerate().filter(|e| *e.1 != 0).map(|(i, &c)| (i, Q::from_integer(c.into()))).collect();
            let b = combine(&cols, &coords);
            let sol = solve(&cols, &b).expect("b is in the image");
            prop_assert_eq!(combine(&cols, &sol), b);
        }
    }
}
