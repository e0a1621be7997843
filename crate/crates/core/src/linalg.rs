//! Exact sparse Gaussian elimination.
//!
//! Rows are kept in echelon form keyed by their leading label; the pivot of a
//! vector is its first nonzero label in canonical order.

use std::collections::BTreeMap;
use std::ops::Bound;

use thiserror::Error;

use crate::element::{AlgebraElement, Label};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("mixed label spaces ({0:#x} and {1:#x})")]
    MixedLabelSpaces(u64, u64),
}

/// An incrementally built echelon basis of a subspace.
#[derive(Clone, Debug)]
pub struct Echelon<L, S> {
    rows: Vec<AlgebraElement<L, S>>,
    combos: Option<Vec<AlgebraElement<usize, S>>>,
    pivots: BTreeMap<L, usize>,
    space: Option<u64>,
    inserted: usize,
}

impl<L: Label, S: Scalar> Default for Echelon<L, S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<L: Label, S: Scalar> Echelon<L, S> {
    pub fn new() -> Self {
        Self { rows: Vec::new(), combos: None, pivots: BTreeMap::new(), space: None, inserted: 0 }
    }

    /// An echelon basis that also records each row as a combination of the
    /// inserted vectors, so membership queries can return coefficients.
    pub fn tracking() -> Self {
        Self { combos: Some(Vec::new()), ..Self::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[AlgebraElement<L, S>] {
        &self.rows
    }

    fn check_space(&mut self, v: &AlgebraElement<L, S>) -> Result<(), LinalgError> {
        for l in v.labels() {
            let s = l.space();
            match self.space {
                None => self.space = Some(s),
                Some(t) if t != s => return Err(LinalgError::MixedLabelSpaces(t, s)),
                _ => {}
            }
        }
        Ok(())
    }

    /// Reduces `v` against the basis, returning the residual together with
    /// the combination of rows that was subtracted.
    fn reduce_tracked(&self, v: &AlgebraElement<L, S>) -> (AlgebraElement<L, S>, BTreeMap<usize, S>) {
        let mut residual = v.clone();
        let mut used = BTreeMap::new();
        let mut cursor: Option<L> = None;
        loop {
            let lower = match &cursor {
                Some(c) => Bound::Excluded(c.clone()),
                None => Bound::Unbounded,
            };
            let next = residual
                .terms()
                .range((lower, Bound::Unbounded))
                .find_map(|(l, c)| self.pivots.get(l).map(|&row| (l.clone(), c.clone(), row)));
            let Some((label, coeff, row)) = next else { break };
            residual.add_scaled(&self.rows[row], &(-coeff.clone()));
            used.insert(row, coeff);
            cursor = Some(label);
        }
        (residual, used)
    }

    /// Residual of `v` after eliminating every pivot label.
    pub fn reduce(&self, v: &AlgebraElement<L, S>) -> AlgebraElement<L, S> {
        self.reduce_tracked(v).0
    }

    pub fn contains(&self, v: &AlgebraElement<L, S>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &AlgebraElement<L, S>) -> Result<bool, LinalgError> {
        self.check_space(v)?;
        let index = self.inserted;
        self.inserted += 1;
        let (residual, used) = self.reduce_tracked(v);
        let Some((lead, lead_coeff)) = residual.first().map(|(l, c)| (l.clone(), c.clone())) else {
            return Ok(false);
        };
        let inv = S::one().checked_div(&lead_coeff).expect("leading coefficient is nonzero");
        if let Some(combos) = &mut self.combos {
            let mut combo = AlgebraElement::basis(index);
            for (row, c) in &used {
                combo.add_scaled(&combos[*row], &(-c.clone()));
            }
            combos.push(combo.scale(&inv));
        }
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(residual.scale(&inv));
        Ok(true)
    }

    /// Coefficients `c` over the inserted vectors with `Σ cᵢ vᵢ = target`, or
    /// `None` when `target` lies outside the span. Requires [`Echelon::tracking`].
    pub fn solve(&self, target: &AlgebraElement<L, S>) -> Option<Vec<S>> {
        let combos = self.combos.as_ref().expect("solve needs a tracking echelon");
        let (residual, used) = self.reduce_tracked(target);
        if !residual.is_zero() {
            return None;
        }
        let mut coeffs = vec![S::zero(); self.inserted];
        for (row, c) in used {
            for (&j, cj) in combos[row].iter() {
                coeffs[j] = coeffs[j].clone() + c.clone() * cj.clone();
            }
        }
        Some(coeffs)
    }
}

/// Exact rank of the span of `elements`.
pub fn span_rank<L: Label, S: Scalar>(elements: &[AlgebraElement<L, S>]) -> Result<usize, LinalgError> {
    let mut ech = Echelon::new();
    for e in elements {
        ech.insert(e)?;
    }
    Ok(ech.rank())
}

/// Coefficients expressing `target` in terms of `basis`, if it lies in their span.
pub fn in_span<L: Label, S: Scalar>(
    target: &AlgebraElement<L, S>,
    basis: &[AlgebraElement<L, S>],
) -> Result<Option<Vec<S>>, LinalgError> {
    let mut ech = Echelon::tracking();
    for b in basis {
        ech.insert(b)?;
    }
    ech.check_space(target)?;
    Ok(ech.solve(target))
}

/// Whether every element of `inner` lies in the span of `outer`.
pub fn span_contains<L: Label, S: Scalar>(
    outer: &[AlgebraElement<L, S>],
    inner: &[AlgebraElement<L, S>],
) -> Result<bool, LinalgError> {
    let mut ech = Echelon::new();
    for b in outer {
        ech.insert(b)?;
    }
    for t in inner {
        ech.check_space(t)?;
        if !ech.contains(t) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Qi, Q};
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    type E = AlgebraElement<usize, Q>;

    fn vec_elem(v: &[i64]) -> E {
        E::from_terms(v.iter().enumerate().map(|(i, &c)| (i, Q::from_int(c))))
    }

    #[test]
    fn rank_examples() {
        let x = E::basis(0);
        let two_x = E::term(0, Q::from_int(2));
        assert_eq!(span_rank(&[x, two_x]).unwrap(), 1);
        assert_eq!(span_rank::<usize, Q>(&[]).unwrap(), 0);
    }

    #[test]
    fn in_span_examples() {
        let x = E::basis(0);
        let y = E::basis(1);
        let z = E::basis(2);
        let coeffs = in_span(&(x.clone() + y.clone()), &[x.clone(), y.clone()]).unwrap().unwrap();
        assert_eq!(coeffs, vec![Q::one(), Q::one()]);
        assert_eq!(in_span(&z, &[x, y]).unwrap(), None);
    }

    #[test]
    fn mixed_spaces_are_rejected() {
        let a: AlgebraElement<Vec<u16>, Q> = AlgebraElement::basis(vec![0, 1]);
        let b: AlgebraElement<Vec<u16>, Q> = AlgebraElement::basis(vec![0, 1, 2]);
        assert!(matches!(span_rank(&[a.clone(), b.clone()]), Err(LinalgError::MixedLabelSpaces(..))));
        assert!(in_span(&b, &[a]).is_err());
    }

    #[test]
    fn dependent_rows_with_complex_coefficients() {
        let i = Qi::new(Q::zero(), Q::one());
        let a: AlgebraElement<usize, Qi> = AlgebraElement::from_terms([(0, Qi::one()), (1, i.clone())]);
        let b: AlgebraElement<usize, Qi> = AlgebraElement::from_terms([(0, i.clone()), (1, -Qi::one())]);
        // b = i·a
        assert_eq!(span_rank(&[a.clone(), b.clone()]).unwrap(), 1);
        let c = in_span(&b, &[a]).unwrap().unwrap();
        assert_eq!(c, vec![i]);
    }

    /// Brute-force rank over small integer matrices via fraction-free determinants
    /// of every square minor.
    fn minor_rank(rows: &[Vec<i64>]) -> usize {
        fn det(m: &[Vec<i128>]) -> i128 {
            let n = m.len();
            if n == 0 {
                return 1;
            }
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i128>> = m[1..]
                        .iter()
                        .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &x)| x).collect())
                        .collect();
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    sign * m[0][j] * det(&minor)
                })
                .sum()
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        for k in (1..=r.min(c)).rev() {
            for rs in subsets(r, k) {
                for cs in subsets(c, k) {
                    let m: Vec<Vec<i128>> =
                        rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j] as i128).collect()).collect();
                    if det(&m) != 0 {
                        return k;
                    }
                }
            }
        }
        0
    }

    proptest! {
        #[test]
        fn rank_matches_minor_oracle(rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 4), 0..5)) {
            let elems: Vec<E> = rows.iter().map(|r| vec_elem(r)).collect();
            prop_assert_eq!(span_rank(&elems).unwrap(), minor_rank(&rows));
        }

        #[test]
        fn rank_is_permutation_and_scaling_invariant(
            rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..6),
            scale in prop::collection::vec(1i64..=4, 6),
        ) {
            let elems: Vec<E> = rows.iter().map(|r| vec_elem(r)).collect();
            let base = span_rank(&elems).unwrap();
            let mut rev: Vec<E> = elems.iter().rev().cloned().collect();
            prop_assert_eq!(span_rank(&rev).unwrap(), base);
            for (e, s) in rev.iter_mut().zip(&scale) {
                *e = e.scale(&Q::from_int(-*s));
            }
            prop_assert_eq!(span_rank(&rev).unwrap(), base);
        }

        #[test]
        fn membership_agrees_with_rank(
            rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 4), 0..4),
            target in prop::collection::vec(-2i64..=2, 4),
        ) {
            let basis: Vec<E> = rows.iter().map(|r| vec_elem(r)).collect();
            let t = vec_elem(&target);
            let mut with_t = basis.clone();
            with_t.push(t.clone());
            let same_rank = span_rank(&with_t).unwrap() == span_rank(&basis).unwrap();
            let solved = in_span(&t, &basis).unwrap();
            prop_assert_eq!(solved.is_some(), same_rank);
            if let Some(c) = solved {
                let mut rebuilt = E::zero();
                for (b, ci) in basis.iter().zip(&c) {
                    rebuilt.add_scaled(b, ci);
                }
                prop_assert_eq!(rebuilt, t);
            }
        }
    }
}
