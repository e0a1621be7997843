//! Twisting maps, twisted tensor products and the iterated algebra `A_{n,m}`.
//!
//! Factor `i` is the group algebra of `H` for even `i` and the function
//! algebra of `G` for odd `i`; both have group-element labels.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Element, FunctionAlgebra, GroupAlgebra, HopfAlgebra, ModuleAction, StructureAlgebra};
use crate::double::QuantumDouble;
use crate::element::{AlgebraElement, Label};
use crate::group::{Elem, FiniteGroup, Subgroup};
use crate::linalg::{span_rank, LinalgError};
use crate::scalar::Scalar;
use crate::verify::{check_law, compare, LawResult, Mode, Report};
use crate::DEFAULT_BASIS_CAP;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error("window ({n}, {m}) is empty")]
    EmptyWindow { n: i64, m: i64 },
    #[error("window ({n}, {m}) is not inside ({outer_n}, {outer_m})")]
    WindowMismatch { n: i64, m: i64, outer_n: i64, outer_m: i64 },
    #[error("basis of size {size} exceeds cap {cap}")]
    TooLarge { size: u128, cap: usize },
    #[error("hexagon fails for factors ({i}, {j}, {k}) at {witness}")]
    Hexagon { i: i64, j: i64, k: i64, witness: String },
    #[error("different subgroups or groups")]
    SubgroupMismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A linear map `R: B⊗A → A⊗B` given on basis pairs, written `R(b⊗a) = a_R⊗b_R`.
pub trait TwistingMap: Send + Sync {
    type Left: StructureAlgebra;
    type Right: StructureAlgebra<Scalar = <Self::Left as StructureAlgebra>::Scalar>;

    /// `A`.
    fn left(&self) -> &Self::Left;

    /// `B`.
    fn right(&self) -> &Self::Right;

    fn twist_basis(
        &self,
        b: &<Self::Right as StructureAlgebra>::Label,
        a: &<Self::Left as StructureAlgebra>::Label,
    ) -> TwistOutput<Self>;

    fn twist(&self, x: &TwistInput<Self>) -> TwistOutput<Self> {
        x.linear(|(b, a)| self.twist_basis(b, a))
    }
}

type LabelOf<A> = <A as StructureAlgebra>::Label;
type ScalarOf<A> = <A as StructureAlgebra>::Scalar;
/// Element of `B⊗A`.
pub type TwistInput<R> = AlgebraElement<
    (LabelOf<<R as TwistingMap>::Right>, LabelOf<<R as TwistingMap>::Left>),
    ScalarOf<<R as TwistingMap>::Left>,
>;
/// Element of `A⊗B`.
pub type TwistOutput<R> = AlgebraElement<
    (LabelOf<<R as TwistingMap>::Left>, LabelOf<<R as TwistingMap>::Right>),
    ScalarOf<<R as TwistingMap>::Left>,
>;

/// One factor of the iterated algebra.
#[derive(Clone, Debug)]
pub enum Factor<S> {
    Group { index: i64, alg: GroupAlgebra<S> },
    Dual { index: i64, alg: FunctionAlgebra<S> },
}

impl<S: Scalar> Factor<S> {
    pub fn new(sub: &Subgroup, index: i64) -> Self {
        if index.rem_euclid(2) == 0 {
            Factor::Group { index, alg: GroupAlgebra::new(sub.clone()) }
        } else {
            Factor::Dual { index, alg: FunctionAlgebra::new(Subgroup::whole(sub.parent())) }
        }
    }

    pub fn index(&self) -> i64 {
        match self {
            Factor::Group { index, .. } | Factor::Dual { index, .. } => *index,
        }
    }

    pub fn is_group(&self) -> bool {
        matches!(self, Factor::Group { .. })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        match self {
            Factor::Group { alg, .. } => alg.subgroup().parent(),
            Factor::Dual { alg, .. } => alg.subgroup().parent(),
        }
    }
}

macro_rules! delegate {
    ($self:ident, $alg:ident => $e:expr) => {
        match $self {
            Factor::Group { alg: $alg, .. } => $e,
            Factor::Dual { alg: $alg, .. } => $e,
        }
    };
}

impl<S: Scalar> StructureAlgebra for Factor<S> {
    type Label = Elem;
    type Scalar = S;

    fn basis(&self) -> Vec<Elem> {
        delegate!(self, a => a.basis())
    }

    fn dim(&self) -> usize {
        delegate!(self, a => a.dim())
    }

    fn contains(&self, label: &Elem) -> bool {
        delegate!(self, a => a.contains(label))
    }

    fn mul_basis(&self, a: &Elem, b: &Elem) -> Element<Self> {
        delegate!(self, x => x.mul_basis(a, b))
    }

    fn unit(&self) -> Element<Self> {
        delegate!(self, a => a.unit())
    }

    fn star_basis(&self, a: &Elem) -> Element<Self> {
        delegate!(self, x => x.star_basis(a))
    }

    fn render(&self, label: &Elem) -> String {
        delegate!(self, a => a.render(label))
    }
}

/// `R_{i,j}(x_j⊗x_i)` on labels, for `i < j`.
pub fn standard_twist_labels(g: &FiniteGroup, i: i64, j: i64, xj: Elem, xi: Elem) -> (Elem, Elem) {
    debug_assert!(i < j);
    if j - i >= 2 {
        (xi, xj)
    } else if i.rem_euclid(2) == 0 {
        // δ_g ⊗ h ↦ h ⊗ δ_{h⁻¹g}
        (xi, g.mul(g.inv(xi), xj))
    } else {
        // h ⊗ δ_g ↦ δ_{gh⁻¹} ⊗ h
        (g.mul(xi, g.inv(xj)), xj)
    }
}

/// The twist `R_{i,j}: A_j⊗A_i → A_i⊗A_j`.
#[derive(Clone, Debug)]
pub struct StandardTwist<S> {
    i: i64,
    j: i64,
    left: Factor<S>,
    right: Factor<S>,
}

impl<S: Scalar> StandardTwist<S> {
    pub fn new(sub: &Subgroup, i: i64, j: i64) -> Self {
        assert!(i < j, "twist R_{{{i},{j}}} needs i < j");
        Self { i, j, left: Factor::new(sub, i), right: Factor::new(sub, j) }
    }

    pub fn indices(&self) -> (i64, i64) {
        (self.i, self.j)
    }
}

impl<S: Scalar> TwistingMap for StandardTwist<S> {
    type Left = Factor<S>;
    type Right = Factor<S>;

    fn left(&self) -> &Factor<S> {
        &self.left
    }

    fn right(&self) -> &Factor<S> {
        &self.right
    }

    fn twist_basis(&self, b: &Elem, a: &Elem) -> AlgebraElement<(Elem, Elem), S> {
        AlgebraElement::basis(standard_twist_labels(self.left.group(), self.i, self.j, *b, *a))
    }
}

/// All `R_{i,j}` with `n ≤ i < j ≤ m`.
pub fn standard_twists<S: Scalar>(sub: &Subgroup, n: i64, m: i64) -> Vec<StandardTwist<S>> {
    (n..=m).flat_map(|i| (i + 1..=m).map(move |j| StandardTwist::new(sub, i, j))).collect()
}

/// The flip `τ(b⊗a) = a⊗b`.
#[derive(Clone, Debug)]
pub struct Flip<A, B> {
    left: A,
    right: B,
}

impl<A, B> Flip<A, B> {
    pub fn new(left: A, right: B) -> Self {
        Self { left, right }
    }
}

impl<A, B> TwistingMap for Flip<A, B>
where
    A: StructureAlgebra,
    B: StructureAlgebra<Scalar = A::Scalar>,
{
    type Left = A;
    type Right = B;

    fn left(&self) -> &A {
        &self.left
    }

    fn right(&self) -> &B {
        &self.right
    }

    fn twist_basis(&self, b: &B::Label, a: &A::Label) -> AlgebraElement<(A::Label, B::Label), A::Scalar> {
        AlgebraElement::basis((a.clone(), b.clone()))
    }
}

/// `A⊗_R B` with `(a⊗b)(a'⊗b') = a·a'_R ⊗ b_R·b'` and `(a⊗b)* = R(b*⊗a*)`.
#[derive(Clone, Debug)]
pub struct TwistedProduct<R> {
    twist: R,
}

impl<R: TwistingMap> TwistedProduct<R> {
    pub fn new(twist: R) -> Self {
        Self { twist }
    }

    pub fn twist(&self) -> &R {
        &self.twist
    }
}

impl<R: TwistingMap> StructureAlgebra for TwistedProduct<R> {
    type Label = (LabelOf<R::Left>, LabelOf<R::Right>);
    type Scalar = ScalarOf<R::Left>;

    fn basis(&self) -> Vec<Self::Label> {
        let bs = self.twist.right().basis();
        self.twist.left().basis().into_iter().flat_map(|a| bs.iter().map(move |b| (a.clone(), b.clone()))).collect()
    }

    fn dim(&self) -> usize {
        self.twist.left().dim() * self.twist.right().dim()
    }

    fn contains(&self, (a, b): &Self::Label) -> bool {
        self.twist.left().contains(a) && self.twist.right().contains(b)
    }

    fn mul_basis(&self, (a, b): &Self::Label, (a2, b2): &Self::Label) -> Element<Self> {
        let (ma, mb) = (self.twist.left(), self.twist.right());
        self.twist.twist_basis(b, a2).linear(|(ar, br)| ma.mul_basis(a, ar).tensor(&mb.mul_basis(br, b2)))
    }

    fn unit(&self) -> Element<Self> {
        self.twist.left().unit().tensor(&self.twist.right().unit())
    }

    fn star_basis(&self, (a, b): &Self::Label) -> Element<Self> {
        let swapped = self.twist.right().star_basis(b).tensor(&self.twist.left().star_basis(a));
        self.twist.twist(&swapped)
    }

    fn render(&self, (a, b): &Self::Label) -> String {
        format!("{}⊗{}", self.twist.left().render(a), self.twist.right().render(b))
    }
}

/// `T₁ = (id_A⊗R₂)∘(R₃⊗id_B): C⊗(A⊗_{R₁}B) → (A⊗_{R₁}B)⊗C`.
pub struct LeftNested<R1, R2, R3> {
    inner: TwistedProduct<R1>,
    r2: R2,
    r3: R3,
}

impl<R1, R2, R3> LeftNested<R1, R2, R3> {
    pub fn new(r1: R1, r2: R2, r3: R3) -> Self {
        Self { inner: TwistedProduct { twist: r1 }, r2, r3 }
    }
}

impl<A, B, C, R1, R2, R3> TwistingMap for LeftNested<R1, R2, R3>
where
    A: StructureAlgebra,
    B: StructureAlgebra<Scalar = A::Scalar>,
    C: StructureAlgebra<Scalar = A::Scalar>,
    R1: TwistingMap<Left = A, Right = B>,
    R2: TwistingMap<Left = B, Right = C>,
    R3: TwistingMap<Left = A, Right = C>,
{
    type Left = TwistedProduct<R1>;
    type Right = C;

    fn left(&self) -> &TwistedProduct<R1> {
        &self.inner
    }

    fn right(&self) -> &C {
        self.r2.right()
    }

    fn twist_basis(&self, c: &C::Label, (a, b): &(A::Label, B::Label)) -> TwistOutput<Self> {
        self.r3
            .twist_basis(c, a)
            .linear(|(a1, c1)| self.r2.twist_basis(c1, b).map_labels(|(b1, c2)| ((a1.clone(), b1.clone()), c2.clone())))
    }
}

/// `T₂ = (R₁⊗id_C)∘(id_B⊗R₃): (B⊗_{R₂}C)⊗A → A⊗(B⊗_{R₂}C)`.
pub struct RightNested<R1, R2, R3> {
    inner: TwistedProduct<R2>,
    r1: R1,
    r3: R3,
}

impl<R1, R2, R3> RightNested<R1, R2, R3> {
    pub fn new(r1: R1, r2: R2, r3: R3) -> Self {
        Self { inner: TwistedProduct { twist: r2 }, r1, r3 }
    }
}

impl<A, B, C, R1, R2, R3> TwistingMap for RightNested<R1, R2, R3>
where
    A: StructureAlgebra,
    B: StructureAlgebra<Scalar = A::Scalar>,
    C: StructureAlgebra<Scalar = A::Scalar>,
    R1: TwistingMap<Left = A, Right = B>,
    R2: TwistingMap<Left = B, Right = C>,
    R3: TwistingMap<Left = A, Right = C>,
{
    type Left = A;
    type Right = TwistedProduct<R2>;

    fn left(&self) -> &A {
        self.r1.left()
    }

    fn right(&self) -> &TwistedProduct<R2> {
        &self.inner
    }

    fn twist_basis(&self, (b, c): &(B::Label, C::Label), a: &A::Label) -> TwistOutput<Self> {
        self.r3
            .twist_basis(c, a)
            .linear(|(a1, c1)| self.r1.twist_basis(b, a1).map_labels(|(a2, b1)| (a2.clone(), (b1.clone(), c1.clone()))))
    }
}

/// `R(m⊗b) = Σ (m₍₁₎·b)⊗m₍₂₎` for a module algebra `B` over `M`.
#[derive(Clone, Debug)]
pub struct ActionTwist<Act> {
    act: Act,
}

impl<Act: ModuleAction> ActionTwist<Act> {
    pub fn new(act: Act) -> Self {
        Self { act }
    }
}

impl<Act: ModuleAction> TwistingMap for ActionTwist<Act> {
    type Left = Act::Space;
    type Right = Act::Acting;

    fn left(&self) -> &Act::Space {
        self.act.space()
    }

    fn right(&self) -> &Act::Acting {
        self.act.acting()
    }

    fn twist_basis(&self, m: &LabelOf<Act::Acting>, b: &LabelOf<Act::Space>) -> TwistOutput<Self> {
        self.act
            .acting()
            .comul_basis(m)
            .linear(|(m1, m2)| self.act.act_basis(m1, b).tensor(&AlgebraElement::basis(m2.clone())))
    }
}

/// The smash product `B#M`: `(a#m)(b#n) = Σ a(m₍₁₎·b) # m₍₂₎n`.
#[derive(Clone, Debug)]
pub struct SmashProduct<Act> {
    act: Act,
}

impl<Act: ModuleAction> SmashProduct<Act> {
    pub fn new(act: Act) -> Self {
        Self { act }
    }
}

impl<Act: ModuleAction> StructureAlgebra for SmashProduct<Act> {
    type Label = (LabelOf<Act::Space>, LabelOf<Act::Acting>);
    type Scalar = ScalarOf<Act::Acting>;

    fn basis(&self) -> Vec<Self::Label> {
        let ms = self.act.acting().basis();
        self.act.space().basis().into_iter().flat_map(|a| ms.iter().map(move |m| (a.clone(), m.clone()))).collect()
    }

    fn contains(&self, (a, m): &Self::Label) -> bool {
        self.act.space().contains(a) && self.act.acting().contains(m)
    }

    fn mul_basis(&self, (a, m): &Self::Label, (b, n): &Self::Label) -> Element<Self> {
        let (space, hopf) = (self.act.space(), self.act.acting());
        hopf.comul_basis(m).linear(|(m1, m2)| {
            let left = space.mul(&AlgebraElement::basis(a.clone()), &self.act.act_basis(m1, b));
            left.tensor(&hopf.mul_basis(m2, n))
        })
    }

    fn unit(&self) -> Element<Self> {
        self.act.space().unit().tensor(&self.act.acting().unit())
    }

    /// `(a#m)* = (1#m*)(a*#1)`.
    fn star_basis(&self, (a, m): &Self::Label) -> Element<Self> {
        let (space, hopf) = (self.act.space(), self.act.acting());
        let ms = hopf.star_basis(m);
        let a_star = space.star_basis(a);
        hopf.comul(&ms).linear(|(m1, m2)| {
            self.act.act(&AlgebraElement::basis(m1.clone()), &a_star).tensor(&AlgebraElement::basis(m2.clone()))
        })
    }

    fn render(&self, (a, m): &Self::Label) -> String {
        format!("{}#{}", self.act.space().render(a), self.act.acting().render(m))
    }
}

/// `D(H;G)` acting on `ℂH` by `(h,g)·t = [h = gtg⁻¹]·h`.
#[derive(Clone, Debug)]
pub struct AdjointAction<S> {
    double: QuantumDouble<S>,
    space: GroupAlgebra<S>,
}

impl<S: Scalar> AdjointAction<S> {
    pub fn new(double: QuantumDouble<S>) -> Self {
        let space = GroupAlgebra::new(double.subgroup().clone());
        Self { double, space }
    }
}

impl<S: Scalar> ModuleAction for AdjointAction<S> {
    type Acting = QuantumDouble<S>;
    type Space = GroupAlgebra<S>;

    fn acting(&self) -> &QuantumDouble<S> {
        &self.double
    }

    fn space(&self) -> &GroupAlgebra<S> {
        &self.space
    }

    fn act_basis(&self, &(h, g): &(Elem, Elem), t: &Elem) -> Element<GroupAlgebra<S>> {
        let grp = self.double.group();
        if grp.mul(grp.mul(g, *t), grp.inv(g)) == h {
            AlgebraElement::basis(h)
        } else {
            AlgebraElement::zero()
        }
    }
}

fn dims3(a: usize, b: usize, c: usize) -> u64 {
    (a as u64).saturating_mul(b as u64).saturating_mul(c as u64)
}

/// Unit absorption and the two compatibility conditions of a twisting map.
pub fn verify_twisting_map<R: TwistingMap>(r: &R, mode: Mode) -> Report {
    let (ma, mb) = (r.left(), r.right());
    let (ab, bb) = (ma.basis(), mb.basis());
    let (na, nb) = (ab.len(), bb.len());
    let schedule = mode.resolve(dims3(nb, na.max(nb), na.max(nb)));
    let rp = |(a, b): &(LabelOf<R::Left>, LabelOf<R::Right>)| format!("{}⊗{}", ma.render(a), mb.render(b));
    let mut report = Report::new("twisting-map");

    report.push(check_law(
        "twist.closure",
        schedule,
        &[nb, na],
        |t| {
            r.twist_basis(&bb[t[0]], &ab[t[1]])
                .labels()
                .find(|(a, b)| !ma.contains(a) || !mb.contains(b))
                .map(|p| format!("label {} outside A⊗B", rp(p)))
        },
        |t| vec![mb.render(&bb[t[0]]), ma.render(&ab[t[1]])],
    ));
    let ua = ma.unit();
    let ub = mb.unit();
    report.push(check_law(
        "twist.unit_right",
        schedule,
        &[na],
        |t| {
            let a = AlgebraElement::basis(ab[t[0]].clone());
            compare(&r.twist(&ub.tensor(&a)), &a.tensor(&ub), rp)
        },
        |t| vec![ma.render(&ab[t[0]])],
    ));
    report.push(check_law(
        "twist.unit_left",
        schedule,
        &[nb],
        |t| {
            let b = AlgebraElement::basis(bb[t[0]].clone());
            compare(&r.twist(&b.tensor(&ua)), &ua.tensor(&b), rp)
        },
        |t| vec![mb.render(&bb[t[0]])],
    ));
    // R∘(id_B⊗m_A) = (m_A⊗id_B)∘(id_A⊗R)∘(R⊗id_A)
    report.push(check_law(
        "twist.mul_left",
        schedule,
        &[nb, na, na],
        |t| {
            let (b, a, a2) = (&bb[t[0]], &ab[t[1]], &ab[t[2]]);
            let lhs = ma.mul_basis(a, a2).linear(|x| r.twist_basis(b, x));
            let rhs = r.twist_basis(b, a).linear(|(ar, br)| {
                r.twist_basis(br, a2)
                    .linear(|(a2r, b2)| ma.mul_basis(ar, a2r).tensor(&AlgebraElement::basis(b2.clone())))
            });
            compare(&lhs, &rhs, rp)
        },
        |t| vec![mb.render(&bb[t[0]]), ma.render(&ab[t[1]]), ma.render(&ab[t[2]])],
    ));
    // R∘(m_B⊗id_A) = (id_A⊗m_B)∘(R⊗id_B)∘(id_B⊗R)
    report.push(check_law(
        "twist.mul_right",
        schedule,
        &[nb, nb, na],
        |t| {
            let (b, b2, a) = (&bb[t[0]], &bb[t[1]], &ab[t[2]]);
            let lhs = mb.mul_basis(b, b2).linear(|y| r.twist_basis(y, a));
            let rhs = r.twist_basis(b2, a).linear(|(ar, b2r)| {
                r.twist_basis(b, ar)
                    .linear(|(arr, br)| AlgebraElement::basis(arr.clone()).tensor(&mb.mul_basis(br, b2r)))
            });
            compare(&lhs, &rhs, rp)
        },
        |t| vec![mb.render(&bb[t[0]]), mb.render(&bb[t[1]]), ma.render(&ab[t[2]])],
    ));
    report
}

/// The hexagon equation for `R₁: B⊗A→A⊗B`, `R₂: C⊗B→B⊗C`, `R₃: C⊗A→A⊗C`
/// on every basis triple `c⊗b⊗a`.
pub fn verify_hexagon<A, B, C, R1, R2, R3>(r1: &R1, r2: &R2, r3: &R3, mode: Mode) -> LawResult
where
    A: StructureAlgebra,
    B: StructureAlgebra<Scalar = A::Scalar>,
    C: StructureAlgebra<Scalar = A::Scalar>,
    R1: TwistingMap<Left = A, Right = B>,
    R2: TwistingMap<Left = B, Right = C>,
    R3: TwistingMap<Left = A, Right = C>,
{
    let (ma, mb, mc) = (r1.left(), r1.right(), r2.right());
    let (ab, bb, cb) = (ma.basis(), mb.basis(), mc.basis());
    let schedule = mode.resolve(dims3(cb.len(), bb.len(), ab.len()));
    let r3l =
        |(a, b, c): &(A::Label, B::Label, C::Label)| format!("{}⊗{}⊗{}", ma.render(a), mb.render(b), mc.render(c));
    check_law(
        "hexagon",
        schedule,
        &[cb.len(), bb.len(), ab.len()],
        |t| {
            let (c, b, a) = (&cb[t[0]], &bb[t[1]], &ab[t[2]]);
            // (id_A⊗R₂)∘(R₃⊗id_B)∘(id_C⊗R₁)
            let lhs = r1.twist_basis(b, a).linear(|(a1, b1)| {
                r3.twist_basis(c, a1).linear(|(a2, c1)| {
                    r2.twist_basis(c1, b1).map_labels(|(b2, c2)| (a2.clone(), b2.clone(), c2.clone()))
                })
            });
            // (R₁⊗id_C)∘(id_B⊗R₃)∘(R₂⊗id_A)
            let rhs = r2.twist_basis(c, b).linear(|(b1, c1)| {
                r3.twist_basis(c1, a).linear(|(a1, c2)| {
                    r1.twist_basis(b1, a1).map_labels(|(a2, b2)| (a2.clone(), b2.clone(), c2.clone()))
                })
            });
            compare(&lhs, &rhs, r3l)
        },
        |t| vec![mc.render(&cb[t[0]]), mb.render(&bb[t[1]]), ma.render(&ab[t[2]])],
    )
}

/// Hexagon laws for every triple `i < j < k` of standard twists in `[n, m]`.
pub fn verify_standard_hexagons<S: Scalar>(sub: &Subgroup, n: i64, m: i64, mode: Mode) -> Report {
    let mut report = Report::new(format!("hexagon[{n},{m}]"));
    for i in n..=m {
        for j in i + 1..=m {
            for k in j + 1..=m {
                let r1 = StandardTwist::<S>::new(sub, i, j);
                let r2 = StandardTwist::<S>::new(sub, j, k);
                let r3 = StandardTwist::<S>::new(sub, i, k);
                let mut law = verify_hexagon(&r1, &r2, &r3, mode);
                law.law = format!("hexagon({i},{j},{k})");
                report.push(law);
            }
        }
    }
    report
}

/// `A_{n,m}` on tuple labels `(x_n, …, x_m)`.
#[derive(Clone, Debug)]
pub struct IteratedAlgebra<S> {
    sub: Subgroup,
    n: i64,
    m: i64,
    factors: Vec<Factor<S>>,
}

impl<S: Scalar> IteratedAlgebra<S> {
    pub fn build(sub: &Subgroup, n: i64, m: i64) -> Result<Self, TwistError> {
        Self::build_capped(sub, n, m, DEFAULT_BASIS_CAP)
    }

    /// Builds `A_{n,m}` after checking every hexagon in the window.
    pub fn build_capped(sub: &Subgroup, n: i64, m: i64, cap: usize) -> Result<Self, TwistError> {
        if n > m {
            return Err(TwistError::EmptyWindow { n, m });
        }
        let factors: Vec<Factor<S>> = (n..=m).map(|i| Factor::new(sub, i)).collect();
        let size = factors.iter().try_fold(1u128, |acc, f| acc.checked_mul(f.dim() as u128)).unwrap_or(u128::MAX);
        if size > cap as u128 {
            return Err(TwistError::TooLarge { size, cap });
        }
        let hex = verify_standard_hexagons::<S>(sub, n, m, Mode::Exhaustive);
        if let Some(bad) = hex.laws.iter().find(|l| !l.passed()) {
            let idx: Vec<i64> = bad
                .law
                .trim_start_matches("hexagon(")
                .trim_end_matches(')')
                .split(',')
                .filter_map(|s| s.parse().ok())
                .collect();
            return Err(TwistError::Hexagon {
                i: idx[0],
                j: idx[1],
                k: idx[2],
                witness: bad.failures[0].labels.join("⊗"),
            });
        }
        Ok(Self { sub: sub.clone(), n, m, factors })
    }

    pub fn window(&self) -> (i64, i64) {
        (self.n, self.m)
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.sub
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.sub.parent()
    }

    pub fn factors(&self) -> &[Factor<S>] {
        &self.factors
    }

    pub fn factor(&self, index: i64) -> &Factor<S> {
        &self.factors[(index - self.n) as usize]
    }

    /// Brings a factor word into ascending index order, twisting the
    /// rightmost out-of-order neighbors first and merging equal indices.
    pub fn normal_order(&self, word: Vec<(i64, Elem)>) -> AlgebraElement<Vec<Elem>, S> {
        let g = self.group();
        let mut out = AlgebraElement::zero();
        let mut stack = vec![(word, S::one())];
        while let Some((w, c)) = stack.pop() {
            let Some(p) = (0..w.len().saturating_sub(1)).rev().find(|&p| w[p].0 >= w[p + 1].0) else {
                debug_assert_eq!(w.len(), self.factors.len());
                out.add_term(w.into_iter().map(|(_, x)| x).collect(), c);
                continue;
            };
            let ((j, xj), (i, xi)) = (w[p], w[p + 1]);
            if i == j {
                for (x, cx) in self.factor(i).mul_basis(&xj, &xi).iter() {
                    let mut next = w.clone();
                    next.splice(p..p + 2, [(i, *x)]);
                    stack.push((next, c.clone() * cx.clone()));
                }
            } else {
                let (yi, yj) = standard_twist_labels(g, i, j, xj, xi);
                let mut next = w;
                next[p] = (i, yi);
                next[p + 1] = (j, yj);
                stack.push((next, c));
            }
        }
        out
    }

    fn indexed<'a>(&self, t: &'a [Elem]) -> impl Iterator<Item = (i64, Elem)> + 'a {
        let n = self.n;
        t.iter().enumerate().map(move |(k, &x)| (n + k as i64, x))
    }

    /// Pads a tuple of an inner window with units of the missing factors.
    pub fn embed_basis(&self, inner_n: i64, tuple: &[Elem]) -> Result<AlgebraElement<Vec<Elem>, S>, TwistError> {
        let inner_m = inner_n + tuple.len() as i64 - 1;
        if inner_n < self.n || inner_m > self.m || tuple.is_empty() {
            return Err(TwistError::WindowMismatch { n: inner_n, m: inner_m, outer_n: self.n, outer_m: self.m });
        }
        let mut out: AlgebraElement<Vec<Elem>, S> = AlgebraElement::basis(Vec::new());
        for f in &self.factors {
            let i = f.index();
            let slot = if (inner_n..=inner_m).contains(&i) {
                AlgebraElement::basis(tuple[(i - inner_n) as usize])
            } else {
                f.unit()
            };
            out = out.bilinear(&slot, |prefix, x| {
                let mut v = prefix.clone();
                v.push(*x);
                AlgebraElement::basis(v)
            });
        }
        Ok(out)
    }
}

impl<S: Scalar> StructureAlgebra for IteratedAlgebra<S> {
    type Label = Vec<Elem>;
    type Scalar = S;

    fn basis(&self) -> Vec<Vec<Elem>> {
        let slots: Vec<Vec<Elem>> = self.factors.iter().map(|f| f.basis()).collect();
        let mut out = vec![Vec::new()];
        for s in &slots {
            out = out.into_iter().flat_map(|p| s.iter().map(move |&x| [p.as_slice(), &[x]].concat())).collect();
        }
        out
    }

    fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).product()
    }

    fn contains(&self, label: &Vec<Elem>) -> bool {
        label.len() == self.factors.len() && self.factors.iter().zip(label).all(|(f, x)| f.contains(x))
    }

    fn mul_basis(&self, a: &Vec<Elem>, b: &Vec<Elem>) -> Element<Self> {
        self.normal_order(self.indexed(a).chain(self.indexed(b)).collect())
    }

    fn unit(&self) -> Element<Self> {
        let mut out: AlgebraElement<Vec<Elem>, S> = AlgebraElement::basis(Vec::new());
        for f in &self.factors {
            out = out.bilinear(&f.unit(), |p, x| AlgebraElement::basis([p.as_slice(), &[*x]].concat()));
        }
        out
    }

    /// Even slots invert; an odd slot `δ_g` becomes `δ_{h_L g h_R}` with its
    /// even neighbors (identity where the window ends).
    fn star_basis(&self, t: &Vec<Elem>) -> Element<Self> {
        let g = self.group();
        let e = g.identity();
        let k = t.len();
        let out = (0..k)
            .map(|s| {
                if self.factors[s].is_group() {
                    g.inv(t[s])
                } else {
                    let hl = if s > 0 { t[s - 1] } else { e };
                    let hr = if s + 1 < k { t[s + 1] } else { e };
                    g.product([hl, t[s], hr])
                }
            })
            .collect();
        AlgebraElement::basis(out)
    }

    fn render(&self, t: &Vec<Elem>) -> String {
        self.factors.iter().zip(t).map(|(f, x)| f.render(x)).collect::<Vec<_>>().join("⊗")
    }
}

/// The inclusion `A_{n',m'} → A_{n,m}`.
pub struct WindowEmbedding<'a, S> {
    inner: &'a IteratedAlgebra<S>,
    outer: &'a IteratedAlgebra<S>,
}

impl<'a, S: Scalar> WindowEmbedding<'a, S> {
    pub fn new(inner: &'a IteratedAlgebra<S>, outer: &'a IteratedAlgebra<S>) -> Result<Self, TwistError> {
        if inner.group() != outer.group() || inner.sub.members() != outer.sub.members() {
            return Err(TwistError::SubgroupMismatch);
        }
        let ((n, m), (on, om)) = (inner.window(), outer.window());
        if n < on || m > om {
            return Err(TwistError::WindowMismatch { n, m, outer_n: on, outer_m: om });
        }
        Ok(Self { inner, outer })
    }

    pub fn apply_basis(&self, t: &[Elem]) -> AlgebraElement<Vec<Elem>, S> {
        self.outer.embed_basis(self.inner.n, t).expect("window checked at construction")
    }

    pub fn apply(&self, x: &AlgebraElement<Vec<Elem>, S>) -> AlgebraElement<Vec<Elem>, S> {
        x.linear(|t| self.apply_basis(t))
    }

    /// Unital, multiplicative, star-preserving and injective.
    pub fn verify(&self, mode: Mode) -> Report {
        let basis = self.inner.basis();
        let n = basis.len();
        let schedule = mode.resolve(dims3(n, n, 1));
        let r = |l: &Vec<Elem>| self.outer.render(l);
        let names = |t: &[usize]| t.iter().map(|&i| self.inner.render(&basis[i])).collect::<Vec<_>>();
        let mut report = Report::new("window-embedding");
        report.push(LawResult::fact(
            "embedding.unital",
            self.apply(&self.inner.unit()) == self.outer.unit(),
            "unit is not mapped to unit",
        ));
        report.push(check_law(
            "embedding.multiplicative",
            schedule,
            &[n, n],
            |t| {
                let lhs = self.apply(&self.inner.mul_basis(&basis[t[0]], &basis[t[1]]));
                let rhs = self.outer.mul(&self.apply_basis(&basis[t[0]]), &self.apply_basis(&basis[t[1]]));
                compare(&lhs, &rhs, r)
            },
            names,
        ));
        report.push(check_law(
            "embedding.star",
            schedule,
            &[n],
            |t| {
                let lhs = self.apply(&self.inner.star_basis(&basis[t[0]]));
                let rhs = self.outer.star(&self.apply_basis(&basis[t[0]]));
                compare(&lhs, &rhs, r)
            },
            names,
        ));
        let images: Vec<_> = basis.iter().map(|t| self.apply_basis(t)).collect();
        let rank = span_rank(&images);
        report.push(LawResult::fact(
            "embedding.injective",
            rank.as_ref().is_ok_and(|&r| r == n),
            format!("rank {rank:?} of {n} embedded basis elements"),
        ));
        report
    }
}

fn flatten_left<L: Clone>(((a, b), c): &((L, L), L)) -> Vec<L> {
    vec![a.clone(), b.clone(), c.clone()]
}

fn flatten_right<L: Clone>((a, (b, c)): &(L, (L, L))) -> Vec<L> {
    vec![a.clone(), b.clone(), c.clone()]
}

/// Compares `(A⊗_{R₁}B)⊗_{T₁}C`, `A⊗_{T₂}(B⊗_{R₂}C)` and the bubble-ordered
/// product of `A_{n,n+2}` on every pair of basis tuples.
pub fn verify_bracketing<S: Scalar>(sub: &Subgroup, n: i64) -> Result<Report, TwistError> {
    let iter = IteratedAlgebra::<S>::build(sub, n, n + 2)?;
    let r = |i, j| StandardTwist::<S>::new(sub, i, j);
    let t1 = TwistedProduct::new(LeftNested::new(r(n, n + 1), r(n + 1, n + 2), r(n, n + 2)));
    let t2 = TwistedProduct::new(RightNested::new(r(n, n + 1), r(n + 1, n + 2), r(n, n + 2)));
    let basis = iter.basis();
    let k = basis.len();
    let left = |t: &Vec<Elem>| ((t[0], t[1]), t[2]);
    let right = |t: &Vec<Elem>| (t[0], (t[1], t[2]));
    let rr = |l: &Vec<Elem>| iter.render(l);
    let names = |t: &[usize]| t.iter().map(|&i| iter.render(&basis[i])).collect::<Vec<_>>();
    let mut report = Report::new(format!("bracketing[{n},{}]", n + 2));
    report.push(check_law(
        "bracketing.mul",
        Mode::Exhaustive.resolve(0),
        &[k, k],
        |t| {
            let (x, y) = (&basis[t[0]], &basis[t[1]]);
            let a = t1.mul_basis(&left(x), &left(y)).map_labels(flatten_left);
            let b = t2.mul_basis(&right(x), &right(y)).map_labels(flatten_right);
            let c = iter.mul_basis(x, y);
            compare(&a, &b, rr).or_else(|| compare(&a, &c, rr))
        },
        names,
    ));
    report.push(check_law(
        "bracketing.star",
        Mode::Exhaustive.resolve(0),
        &[k],
        |t| {
            let x = &basis[t[0]];
            let a = t1.star_basis(&left(x)).map_labels(flatten_left);
            let b = t2.star_basis(&right(x)).map_labels(flatten_right);
            compare(&a, &b, rr).or_else(|| compare(&a, &iter.star_basis(x), rr))
        },
        names,
    ));
    report.push(LawResult::fact(
        "bracketing.unit",
        t1.unit().map_labels(flatten_left) == iter.unit() && t2.unit().map_labels(flatten_right) == iter.unit(),
        "units differ",
    ));
    Ok(report)
}

/// Structure constants of the twisted product from an action against the
/// direct smash product formula, plus the twisting-map laws.
pub fn verify_smash_recovery<Act>(act: Act, mode: Mode) -> Report
where
    Act: ModuleAction + Clone,
    LabelOf<Act::Space>: Label,
{
    let twisted = TwistedProduct::new(ActionTwist::new(act.clone()));
    let smash = SmashProduct::new(act);
    let mut report = verify_twisting_map(twisted.twist(), mode);
    report.subject = "smash-recovery".into();
    let basis = smash.basis();
    let k = basis.len();
    let rr = |l: &(LabelOf<Act::Space>, LabelOf<Act::Acting>)| smash.render(l);
    let names = |t: &[usize]| t.iter().map(|&i| smash.render(&basis[i])).collect::<Vec<_>>();
    report.push(LawResult::fact("smash.basis", twisted.basis() == basis, "basis orders differ"));
    report.push(check_law(
        "smash.mul",
        Mode::Exhaustive.resolve(0),
        &[k, k],
        |t| compare(&twisted.mul_basis(&basis[t[0]], &basis[t[1]]), &smash.mul_basis(&basis[t[0]], &basis[t[1]]), rr),
        names,
    ));
    report.push(check_law(
        "smash.star",
        Mode::Exhaustive.resolve(0),
        &[k],
        |t| compare(&twisted.star_basis(&basis[t[0]]), &smash.star_basis(&basis[t[0]]), rr),
        names,
    ));
    report.push(LawResult::fact("smash.unit", twisted.unit() == smash.unit(), "units differ"));
    report
}
