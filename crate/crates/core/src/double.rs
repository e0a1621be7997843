//! The double `D(H;G)`: functions on a normal subgroup `H` crossed with the
//! group algebra of `G`, with basis `(h, g)`.

use std::marker::PhantomData;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Element, HopfAlgebra, PairElement, StructureAlgebra};
use crate::element::AlgebraElement;
use crate::group::{Elem, FiniteGroup, Subgroup};
use crate::scalar::Scalar;
use crate::verify::{check_law, compare, LawResult, Schedule};

/// Basis label `(h, g)` with `h ∈ H`, `g ∈ G`.
pub type DoubleLabel = (Elem, Elem);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DoubleError {
    #[error("subgroup is not normal: {g}·{h}·{g}⁻¹ = {image} lies outside it")]
    NotNormal { g: String, h: String, image: String },
}

/// Rejects a non-normal subgroup, naming a violating conjugation.
pub fn require_normal(sub: &Subgroup) -> Result<(), DoubleError> {
    match sub.normality_witness() {
        None => Ok(()),
        Some((x, h)) => {
            let g = sub.parent();
            Err(DoubleError::NotNormal {
                g: g.name(x).to_owned(),
                h: g.name(h).to_owned(),
                image: g.name(g.mul(g.mul(x, h), g.inv(x))).to_owned(),
            })
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuantumDouble<S> {
    sub: Subgroup,
    forced: bool,
    _scalar: PhantomData<S>,
}

impl<S: Scalar> QuantumDouble<S> {
    pub fn build(sub: &Subgroup) -> Result<Self, DoubleError> {
        require_normal(sub)?;
        Ok(Self { sub: sub.clone(), forced: false, _scalar: PhantomData })
    }

    /// Builds the structure maps even for a non-normal subgroup, so the
    /// verifiers can exhibit what breaks.
    pub fn force_build(sub: &Subgroup) -> Self {
        Self { sub: sub.clone(), forced: !sub.is_normal(), _scalar: PhantomData }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.sub.parent()
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.sub
    }

    /// Whether this was force-built over a non-normal subgroup.
    pub fn is_forced(&self) -> bool {
        self.forced
    }

    /// `z = (1/|G|) Σ_g (e, g)`.
    pub fn integral(&self) -> Element<Self> {
        let g = self.group();
        let c = S::from_ratio(1, g.order() as i64);
        AlgebraElement::from_terms(g.elements().map(|x| ((g.identity(), x), c.clone())))
    }

    /// `a·z = z·a = ε(a)z` on every basis label.
    pub fn verify_integral(&self) -> LawResult {
        let basis = self.basis();
        let z = self.integral();
        check_law(
            "integral",
            Schedule::Exhaustive,
            &[basis.len()],
            |t| {
                let a = AlgebraElement::basis(basis[t[0]]);
                let target = z.scale(&self.counit_basis(&basis[t[0]]));
                let r = |l: &DoubleLabel| self.render(l);
                compare(&self.mul(&a, &z), &target, r).or_else(|| compare(&self.mul(&z, &a), &target, r))
            },
            |t| vec![self.render(&basis[t[0]])],
        )
    }
}

impl<S: Scalar> StructureAlgebra for QuantumDouble<S> {
    type Label = DoubleLabel;
    type Scalar = S;

    fn basis(&self) -> Vec<DoubleLabel> {
        let g = self.group();
        self.sub.members().iter().flat_map(|&h| g.elements().map(move |x| (h, x))).collect()
    }

    fn dim(&self) -> usize {
        self.sub.order() * self.group().order()
    }

    fn contains(&self, &(h, g): &DoubleLabel) -> bool {
        self.sub.contains(h) && (g as usize) < self.group().order()
    }

    fn mul_basis(&self, &(h1, g1): &DoubleLabel, &(h2, g2): &DoubleLabel) -> Element<Self> {
        let g = self.group();
        if g.mul(h1, g1) == g.mul(g1, h2) {
            AlgebraElement::basis((h1, g.mul(g1, g2)))
        } else {
            AlgebraElement::zero()
        }
    }

    fn unit(&self) -> Element<Self> {
        let e = self.group().identity();
        AlgebraElement::sum_of(self.sub.members().iter().map(|&h| (h, e)))
    }

    fn star_basis(&self, &(h, g): &DoubleLabel) -> Element<Self> {
        let grp = self.group();
        AlgebraElement::basis((grp.conjugate(g, h), grp.inv(g)))
    }

    fn render(&self, &(h, g): &DoubleLabel) -> String {
        let grp = self.group();
        format!("({},{})", grp.name(h), grp.name(g))
    }
}

impl<S: Scalar> HopfAlgebra for QuantumDouble<S> {
    fn comul_basis(&self, &(h, g): &DoubleLabel) -> PairElement<Self> {
        let grp = self.group();
        AlgebraElement::sum_of(self.sub.members().iter().map(|&t| ((t, g), (grp.mul(grp.inv(t), h), g))))
    }

    fn counit_basis(&self, &(h, _): &DoubleLabel) -> S {
        if h == self.group().identity() {
            S::one()
        } else {
            S::zero()
        }
    }

    fn antipode_basis(&self, &(h, g): &DoubleLabel) -> Element<Self> {
        let grp = self.group();
        AlgebraElement::basis((grp.conjugate(g, grp.inv(h)), grp.inv(g)))
    }
}
