//! Structure-constant *-algebras, Hopf structures and module actions.
//!
//! An algebra is given by a labeled basis and products of basis pairs; every
//! operation on general elements is the (bi/anti)linear extension. Nothing here
//! assumes the axioms hold: that is what [`crate::verify`] is for.

use std::marker::PhantomData;

use num_traits::Zero;
use std::sync::Arc;

use crate::element::{AlgebraElement, Label};
use crate::group::{Elem, FiniteGroup, Subgroup};
use crate::scalar::Scalar;

/// Element type of an algebra.
pub type Element<A> = AlgebraElement<<A as StructureAlgebra>::Label, <A as StructureAlgebra>::Scalar>;
/// Element type of the tensor square of an algebra.
pub type PairElement<A> =
    AlgebraElement<(<A as StructureAlgebra>::Label, <A as StructureAlgebra>::Label), <A as StructureAlgebra>::Scalar>;

pub trait StructureAlgebra: Send + Sync {
    type Label: Label;
    type Scalar: Scalar;

    /// Basis labels in canonical order.
    fn basis(&self) -> Vec<Self::Label>;

    fn dim(&self) -> usize {
        self.basis().len()
    }

    /// Whether `label` is one of the declared basis labels.
    fn contains(&self, label: &Self::Label) -> bool;

    fn mul_basis(&self, a: &Self::Label, b: &Self::Label) -> Element<Self>;

    fn unit(&self) -> Element<Self>;

    fn star_basis(&self, a: &Self::Label) -> Element<Self>;

    fn render(&self, label: &Self::Label) -> String {
        format!("{label:?}")
    }

    fn mul(&self, x: &Element<Self>, y: &Element<Self>) -> Element<Self> {
        x.bilinear(y, |a, b| self.mul_basis(a, b))
    }

    /// Conjugate-linear extension of the basis star.
    fn star(&self, x: &Element<Self>) -> Element<Self> {
        x.antilinear(|a| self.star_basis(a))
    }

    fn render_element(&self, x: &Element<Self>) -> String {
        x.render_with(|l| self.render(l))
    }

    /// Left-to-right product of a sequence; the unit when empty.
    fn product<'a, I>(&self, items: I) -> Element<Self>
    where
        I: IntoIterator<Item = &'a Element<Self>>,
        Self: 'a,
    {
        items.into_iter().fold(self.unit(), |acc, x| self.mul(&acc, x))
    }
}

pub trait HopfAlgebra: StructureAlgebra {
    /// `Δ` on a basis label.
    fn comul_basis(&self, a: &Self::Label) -> PairElement<Self>;

    /// `ε` on a basis label.
    fn counit_basis(&self, a: &Self::Label) -> Self::Scalar;

    /// `S` on a basis label.
    fn antipode_basis(&self, a: &Self::Label) -> Element<Self>;

    fn comul(&self, x: &Element<Self>) -> PairElement<Self> {
        x.linear(|a| self.comul_basis(a))
    }

    fn counit(&self, x: &Element<Self>) -> Self::Scalar {
        x.iter().fold(Self::Scalar::zero(), |acc, (l, c)| acc + c.clone() * self.counit_basis(l))
    }

    fn antipode(&self, x: &Element<Self>) -> Element<Self> {
        x.linear(|a| self.antipode_basis(a))
    }
}

/// Product in the untwisted tensor square: `(a⊗b)(c⊗d) = ac⊗bd`.
pub fn tensor_square_mul<A: StructureAlgebra>(alg: &A, x: &PairElement<A>, y: &PairElement<A>) -> PairElement<A> {
    x.bilinear(y, |(a, b), (c, d)| alg.mul_basis(a, c).tensor(&alg.mul_basis(b, d)))
}

/// A left action of a Hopf algebra on an algebra, given on basis pairs.
pub trait ModuleAction: Send + Sync {
    type Acting: HopfAlgebra;
    type Space: StructureAlgebra<Scalar = <Self::Acting as StructureAlgebra>::Scalar>;

    fn acting(&self) -> &Self::Acting;

    fn space(&self) -> &Self::Space;

    fn act_basis(
        &self,
        a: &<Self::Acting as StructureAlgebra>::Label,
        x: &<Self::Space as StructureAlgebra>::Label,
    ) -> Element<Self::Space>;

    fn act(&self, a: &Element<Self::Acting>, x: &Element<Self::Space>) -> Element<Self::Space> {
        a.bilinear(x, |p, q| self.act_basis(p, q))
    }
}

/// Group algebra `ℂK` of a subgroup `K` with `Δ(g) = g⊗g`, `ε(g) = 1`,
/// `S(g) = g* = g⁻¹`.
#[derive(Clone, Debug)]
pub struct GroupAlgebra<S> {
    sub: Subgroup,
    _scalar: PhantomData<S>,
}

impl<S: Scalar> GroupAlgebra<S> {
    pub fn new(sub: Subgroup) -> Self {
        Self { sub, _scalar: PhantomData }
    }

    pub fn of_group(group: &Arc<FiniteGroup>) -> Self {
        Self::new(Subgroup::whole(group))
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.sub
    }

    pub fn group(&self) -> &FiniteGroup {
        self.sub.parent()
    }
}

impl<S: Scalar> StructureAlgebra for GroupAlgebra<S> {
    type Label = Elem;
    type Scalar = S;

    fn basis(&self) -> Vec<Elem> {
        self.sub.members().to_vec()
    }

    fn dim(&self) -> usize {
        self.sub.order()
    }

    fn contains(&self, label: &Elem) -> bool {
        self.sub.contains(*label)
    }

    fn mul_basis(&self, a: &Elem, b: &Elem) -> Element<Self> {
        AlgebraElement::basis(self.group().mul(*a, *b))
    }

    fn unit(&self) -> Element<Self> {
        AlgebraElement::basis(self.group().identity())
    }

    fn star_basis(&self, a: &Elem) -> Element<Self> {
        AlgebraElement::basis(self.group().inv(*a))
    }

    fn render(&self, label: &Elem) -> String {
        self.group().name(*label).to_owned()
    }
}

impl<S: Scalar> HopfAlgebra for GroupAlgebra<S> {
    fn comul_basis(&self, a: &Elem) -> PairElement<Self> {
        AlgebraElement::basis((*a, *a))
    }

    fn counit_basis(&self, _: &Elem) -> S {
        S::one()
    }

    fn antipode_basis(&self, a: &Elem) -> Element<Self> {
        AlgebraElement::basis(self.group().inv(*a))
    }
}

/// Function algebra `Ĉ(K)` of a subgroup with basis `δ_g`, pointwise product,
/// `Δ(δ_g) = Σ_t δ_t⊗δ_{t⁻¹g}`, `ε(δ_g) = [g = e]`, `S(δ_g) = δ_{g⁻¹}`, `δ_g* = δ_g`.
#[derive(Clone, Debug)]
pub struct FunctionAlgebra<S> {
    sub: Subgroup,
    _scalar: PhantomData<S>,
}

impl<S: Scalar> FunctionAlgebra<S> {
    pub fn new(sub: Subgroup) -> Self {
        Self { sub, _scalar: PhantomData }
    }

    pub fn of_group(group: &Arc<FiniteGroup>) -> Self {
        Self::new(Subgroup::whole(group))
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.sub
    }

    pub fn group(&self) -> &FiniteGroup {
        self.sub.parent()
    }
}

impl<S: Scalar> StructureAlgebra for FunctionAlgebra<S> {
    type Label = Elem;
    type Scalar = S;

    fn basis(&self) -> Vec<Elem> {
        self.sub.members().to_vec()
    }

    fn dim(&self) -> usize {
        self.sub.order()
    }

    fn contains(&self, label: &Elem) -> bool {
        self.sub.contains(*label)
    }

    fn mul_basis(&self, a: &Elem, b: &Elem) -> Element<Self> {
        if a == b {
            AlgebraElement::basis(*a)
        } else {
            AlgebraElement::zero()
        }
    }

    fn unit(&self) -> Element<Self> {
        AlgebraElement::sum_of(self.sub.members().iter().copied())
    }

    fn star_basis(&self, a: &Elem) -> Element<Self> {
        AlgebraElement::basis(*a)
    }

    fn render(&self, label: &Elem) -> String {
        format!("d[{}]", self.group().name(*label))
    }
}

impl<S: Scalar> HopfAlgebra for FunctionAlgebra<S> {
    fn comul_basis(&self, a: &Elem) -> PairElement<Self> {
        let g = self.group();
        AlgebraElement::sum_of(self.sub.members().iter().map(|&t| (t, g.mul(g.inv(t), *a))))
    }

    fn counit_basis(&self, a: &Elem) -> S {
        if *a == self.group().identity() {
            S::one()
        } else {
            S::zero()
        }
    }

    fn antipode_basis(&self, a: &Elem) -> Element<Self> {
        AlgebraElement::basis(self.group().inv(*a))
    }
}

/// The trivial action `a·x = ε(a)x`.
#[derive(Clone, Debug)]
pub struct TrivialAction<H, X> {
    acting: H,
    space: X,
}

impl<H, X> TrivialAction<H, X> {
    pub fn new(acting: H, space: X) -> Self {
        Self { acting, space }
    }
}

impl<H, X> ModuleAction for TrivialAction<H, X>
where
    H: HopfAlgebra,
    X: StructureAlgebra<Scalar = H::Scalar>,
{
    type Acting = H;
    type Space = X;

    fn acting(&self) -> &H {
        &self.acting
    }

    fn space(&self) -> &X {
        &self.space
    }

    fn act_basis(&self, a: &H::Label, x: &X::Label) -> Element<X> {
        AlgebraElement::term(x.clone(), self.acting.counit_basis(a))
    }
}

/// The arrow map `g ⇀ δ_h = Σ_{t∈K} δ_t·δ_{t⁻¹h}(g)` of a group `G` on the
/// function algebra of a subgroup `K`: `δ_{hg⁻¹}` when `g ∈ K`, zero otherwise.
/// It is a genuine action only when `K = G`.
#[derive(Clone, Debug)]
pub struct ArrowAction<S> {
    acting: GroupAlgebra<S>,
    space: FunctionAlgebra<S>,
}

impl<S: Scalar> ArrowAction<S> {
    pub fn new(sub: Subgroup) -> Self {
        let acting = GroupAlgebra::of_group(sub.parent());
        Self { acting, space: FunctionAlgebra::new(sub) }
    }
}

impl<S: Scalar> ModuleAction for ArrowAction<S> {
    type Acting = GroupAlgebra<S>;
    type Space = FunctionAlgebra<S>;

    fn acting(&self) -> &GroupAlgebra<S> {
        &self.acting
    }

    fn space(&self) -> &FunctionAlgebra<S> {
        &self.space
    }

    fn act_basis(&self, g: &Elem, h: &Elem) -> Element<FunctionAlgebra<S>> {
        let sub = self.space.subgroup();
        let grp = sub.parent();
        if sub.contains(*g) {
            AlgebraElement::basis(grp.mul(*h, grp.inv(*g)))
        } else {
            AlgebraElement::zero()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Qi;

    #[test]
    fn group_algebra_products() {
        let z4 = Arc::new(FiniteGroup::cyclic(4));
        let a: GroupAlgebra<Qi> = GroupAlgebra::of_group(&z4);
        let x = AlgebraElement::sum_of([1u16, 2]);
        let y = AlgebraElement::basis(3u16);
        assert_eq!(a.mul(&x, &y), AlgebraElement::sum_of([0u16, 1]));
        assert_eq!(a.star(&x), AlgebraElement::sum_of([3u16, 2]));
    }

    #[test]
    fn function_algebra_unit_and_coproduct() {
        let z4 = Arc::new(FiniteGroup::cyclic(4));
        let f: FunctionAlgebra<Qi> = FunctionAlgebra::of_group(&z4);
        let d1 = AlgebraElement::basis(1u16);
        assert_eq!(f.mul(&f.unit(), &d1), d1);
        let delta = f.comul_basis(&1);
        assert_eq!(delta.len(), 4);
        assert_eq!(delta.coeff(&(3, 2)), Qi::from_int(1));
        assert_eq!(f.counit(&f.unit()), Qi::from_int(1));
    }

    #[test]
    fn arrow_action_vanishes_off_subgroup() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let h = Subgroup::closure(&s3, &[1]);
        let act: ArrowAction<Qi> = ArrowAction::new(h);
        assert!(act.act_basis(&2, &1).is_zero());
        assert_eq!(act.act_basis(&1, &1), AlgebraElement::basis(0));
    }
}
