//! Sparse linear combinations over a labeled basis.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Neg, Sub};

use crate::group::Elem;
use crate::scalar::{Qi, Scalar};

/// A basis label. Labels from different spaces (e.g. field monomials over
/// different windows) report different [`Label::space`] tags.
pub trait Label: Clone + Ord + Hash + Debug + Send + Sync + 'static {
    fn space(&self) -> u64 {
        0
    }
}

impl Label for u16 {}
impl Label for usize {}
impl Label for u64 {}
impl Label for String {}

impl Label for Vec<Elem> {
    fn space(&self) -> u64 {
        self.len() as u64
    }
}

impl<A: Label, B: Label> Label for (A, B) {
    fn space(&self) -> u64 {
        self.0.space().wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(self.1.space())
    }
}

impl<A: Label, B: Label, C: Label> Label for (A, B, C) {
    fn space(&self) -> u64 {
        (self.0.clone(), (self.1.clone(), self.2.clone())).space()
    }
}

/// A finite linear combination `Σ c_l · l`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct AlgebraElement<L, S = Qi> {
    terms: BTreeMap<L, S>,
}

impl<L: Label, S: Scalar> Default for AlgebraElement<L, S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<L: Label, S: Scalar> AlgebraElement<L, S> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn basis(label: L) -> Self {
        Self::term(label, S::one())
    }

    pub fn term(label: L, coeff: S) -> Self {
        let mut out = Self::zero();
        out.add_term(label, coeff);
        out
    }

    /// Sums the given terms, merging repeated labels.
    pub fn from_terms<I: IntoIterator<Item = (L, S)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (l, c) in terms {
            out.add_term(l, c);
        }
        out
    }

    /// Sum of the given basis labels with coefficient one each.
    pub fn sum_of<I: IntoIterator<Item = L>>(labels: I) -> Self {
        Self::from_terms(labels.into_iter().map(|l| (l, S::one())))
    }

    pub fn add_term(&mut self, label: L, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(label) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// `self += coeff · other`.
    pub fn add_scaled(&mut self, other: &Self, coeff: &S) {
        if coeff.is_zero() {
            return;
        }
        for (l, c) in &other.terms {
            self.add_term(l.clone(), c.clone() * coeff.clone());
        }
    }

    pub fn scale(&self, coeff: &S) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(l, c)| (l.clone(), c.clone() * coeff.clone())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, label: &L) -> S {
        self.terms.get(label).cloned().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&L, &S)> {
        self.terms.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &L> {
        self.terms.keys()
    }

    pub fn first(&self) -> Option<(&L, &S)> {
        self.terms.iter().next()
    }

    pub(crate) fn terms(&self) -> &BTreeMap<L, S> {
        &self.terms
    }

    /// Extends a basis map linearly: `Σ c_l · f(l)`.
    pub fn linear<M: Label>(&self, mut f: impl FnMut(&L) -> AlgebraElement<M, S>) -> AlgebraElement<M, S> {
        let mut out = AlgebraElement::zero();
        for (l, c) in &self.terms {
            out.add_scaled(&f(l), c);
        }
        out
    }

    /// Like [`Self::linear`] but with conjugated coefficients.
    pub fn antilinear<M: Label>(&self, mut f: impl FnMut(&L) -> AlgebraElement<M, S>) -> AlgebraElement<M, S> {
        let mut out = AlgebraElement::zero();
        for (l, c) in &self.terms {
            out.add_scaled(&f(l), &c.conj());
        }
        out
    }

    /// Extends a map on basis pairs bilinearly.
    pub fn bilinear<M: Label, N: Label>(
        &self,
        other: &AlgebraElement<M, S>,
        mut f: impl FnMut(&L, &M) -> AlgebraElement<N, S>,
    ) -> AlgebraElement<N, S> {
        let mut out = AlgebraElement::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_scaled(&f(a, b), &(ca.clone() * cb.clone()));
            }
        }
        out
    }

    /// Relabels through `f`, merging labels that collide.
    pub fn map_labels<M: Label>(&self, mut f: impl FnMut(&L) -> M) -> AlgebraElement<M, S> {
        AlgebraElement::from_terms(self.terms.iter().map(|(l, c)| (f(l), c.clone())))
    }

    /// Tensor product `self ⊗ other` on pair labels.
    pub fn tensor<M: Label>(&self, other: &AlgebraElement<M, S>) -> AlgebraElement<(L, M), S> {
        self.bilinear(other, |a, b| AlgebraElement::basis((a.clone(), b.clone())))
    }

    /// Renders as `c1·l1 + c2·l2`, using `name` for labels.
    pub fn render_with(&self, mut name: impl FnMut(&L) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_owned();
        }
        self.terms
            .iter()
            .map(|(l, c)| if c.is_one() { name(l) } else { format!("({})·{}", c.render(), name(l)) })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<L: Label, S: Scalar> AddAssign<&AlgebraElement<L, S>> for AlgebraElement<L, S> {
    fn add_assign(&mut self, rhs: &AlgebraElement<L, S>) {
        for (l, c) in &rhs.terms {
            self.add_term(l.clone(), c.clone());
        }
    }
}

impl<L: Label, S: Scalar> Add for AlgebraElement<L, S> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl<L: Label, S: Scalar> Neg for AlgebraElement<L, S> {
    type Output = Self;

    fn neg(self) -> Self {
        Self { terms: self.terms.into_iter().map(|(l, c)| (l, -c)).collect() }
    }
}

impl<L: Label, S: Scalar> Sub for AlgebraElement<L, S> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<L: Label, S: Scalar> FromIterator<(L, S)> for AlgebraElement<L, S> {
    fn from_iter<I: IntoIterator<Item = (L, S)>>(iter: I) -> Self {
        Self::from_terms(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Q;
    use num_traits::{One, Zero};

    type E = AlgebraElement<usize, Q>;

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut x = E::basis(1);
        x.add_term(1, -Q::one());
        assert!(x.is_zero());
        let y = E::from_terms([(2, Q::from_int(3)), (2, Q::from_int(-3)), (4, Q::zero())]);
        assert!(y.is_zero());
    }

    #[test]
    fn bilinear_extension() {
        let x = E::from_terms([(1, Q::from_int(2)), (2, Q::one())]);
        let y = E::from_terms([(10, Q::one()), (20, Q::from_int(-1))]);
        let prod = x.bilinear(&y, |a, b| E::basis(a + b));
        let expected =
            E::from_terms([(11, Q::from_int(2)), (21, Q::from_int(-2)), (12, Q::one()), (22, Q::from_int(-1))]);
        assert_eq!(prod, expected);
    }
}
