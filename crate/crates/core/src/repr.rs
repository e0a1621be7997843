//! Exact sparse matrices and matrix representations of the algebras, used as
//! independent oracles for products, stars and faithfulness.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{Element, StructureAlgebra};
use crate::element::AlgebraElement;
use crate::group::{Elem, Subgroup};
use crate::linalg::span_rank;
use crate::scalar::Scalar;
use crate::twisted::{IteratedAlgebra, TwistError};
use crate::verify::{check_law, LawResult, Mode, Report};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReprError {
    #[error("no representation is provided for the window [{n},{m}]")]
    UnsupportedWindow { n: i64, m: i64 },
    #[error("carrier of dimension {size} exceeds the cap {cap}")]
    TooLarge { size: u128, cap: usize },
    #[error(transparent)]
    Twist(#[from] TwistError),
}

/// A square matrix stored row by row; each row is sorted by column and holds
/// no zero entries, so equality is structural.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<S> {
    dim: usize,
    rows: Vec<Vec<(usize, S)>>,
}

impl<S: Scalar> SparseMatrix<S> {
    pub fn zero(dim: usize) -> Self {
        Self { dim, rows: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, rows: (0..dim).map(|i| vec![(i, S::one())]).collect() }
    }

    /// Sums repeated entries and drops zeros.
    pub fn from_entries<I: IntoIterator<Item = (usize, usize, S)>>(dim: usize, entries: I) -> Self {
        let mut acc: Vec<BTreeMap<usize, S>> = vec![BTreeMap::new(); dim];
        for (i, j, c) in entries {
            assert!(i < dim && j < dim, "entry ({i},{j}) outside a {dim}×{dim} matrix");
            let slot = acc[i].entry(j).or_insert_with(S::zero);
            *slot = slot.clone() + c;
        }
        Self::from_maps(dim, acc)
    }

    fn from_maps(dim: usize, maps: Vec<BTreeMap<usize, S>>) -> Self {
        let rows = maps.into_iter().map(|m| m.into_iter().filter(|(_, c)| !c.is_zero()).collect()).collect();
        Self { dim, rows }
    }

    /// A matrix with a single 1 per listed `(row, column)`.
    pub fn partial_permutation<I: IntoIterator<Item = (usize, usize)>>(dim: usize, entries: I) -> Self {
        Self::from_entries(dim, entries.into_iter().map(|(i, j)| (i, j, S::one())))
    }

    pub fn diagonal<I: IntoIterator<Item = S>>(values: I) -> Self {
        let rows: Vec<Vec<(usize, S)>> =
            values.into_iter().enumerate().map(|(i, c)| if c.is_zero() { vec![] } else { vec![(i, c)] }).collect();
        Self { dim: rows.len(), rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        self.rows[i].iter().find(|(c, _)| *c == j).map(|(_, v)| v.clone()).unwrap_or_else(S::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, c)| (i, *j, c)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let maps = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BTreeMap::new();
                for (k, a) in row {
                    for (j, b) in &other.rows[*k] {
                        let slot = acc.entry(*j).or_insert_with(S::zero);
                        *slot = slot.clone() + a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect();
        Self::from_maps(self.dim, maps)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self::from_entries(self.dim, self.entries().chain(other.entries()).map(|(i, j, c)| (i, j, c.clone())))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_entries(self.dim, self.entries().map(|(i, j, x)| (i, j, x.clone() * c.clone())))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_entries(self.dim, self.entries().map(|(i, j, c)| (j, i, c.conj())))
    }

    /// The matrix as a vector over `(row, column)` labels.
    pub fn to_element(&self) -> AlgebraElement<(usize, usize), S> {
        AlgebraElement::from_terms(self.entries().map(|(i, j, c)| ((i, j), c.clone())))
    }

    pub fn render(&self) -> String {
        let body: Vec<String> = self.entries().map(|(i, j, c)| format!("[{i},{j}]={}", c.render())).collect();
        format!("{}×{} {{{}}}", self.dim, self.dim, body.join(" "))
    }
}

/// A linear map from an algebra into square matrices, given on basis labels.
pub trait Representation: Send + Sync {
    type Alg: StructureAlgebra;

    fn algebra(&self) -> &Self::Alg;

    fn carrier_dim(&self) -> usize;

    fn image_basis(
        &self,
        label: &<Self::Alg as StructureAlgebra>::Label,
    ) -> SparseMatrix<<Self::Alg as StructureAlgebra>::Scalar>;

    fn image(&self, x: &Element<Self::Alg>) -> SparseMatrix<<Self::Alg as StructureAlgebra>::Scalar> {
        x.iter().fold(SparseMatrix::zero(self.carrier_dim()), |acc, (l, c)| acc.add(&self.image_basis(l).scale(c)))
    }
}

fn mismatch<S: Scalar>(lhs: &SparseMatrix<S>, rhs: &SparseMatrix<S>) -> Option<String> {
    if lhs == rhs {
        return None;
    }
    let diff = lhs.add(&rhs.scale(&-S::one()));
    let (i, j, c) = diff.entries().next().expect("matrices differ");
    Some(format!("matrices differ at [{i},{j}] by {}", c.render()))
}

/// Unit, multiplicativity, star-to-adjoint and faithfulness of a representation.
/// The rank of the basis images is recorded as the metric `rank`.
pub fn verify_representation<R: Representation>(rep: &R, mode: Mode) -> Report {
    let alg = rep.algebra();
    let basis = alg.basis();
    let n = basis.len();
    let schedule = mode.resolve((n as u64).saturating_mul(n as u64).saturating_mul(n as u64));
    let images: Vec<_> = basis.iter().map(|l| rep.image_basis(l)).collect();
    let names = |t: &[usize]| t.iter().map(|&i| alg.render(&basis[i])).collect::<Vec<_>>();
    let mut report = Report::new("representation");
    report.push(LawResult::fact(
        "rep.unit",
        rep.image(&alg.unit()) == SparseMatrix::identity(rep.carrier_dim()),
        "unit is not mapped to the identity",
    ));
    report.push(check_law(
        "rep.multiplicative",
        schedule,
        &[n, n],
        |t| mismatch(&rep.image(&alg.mul_basis(&basis[t[0]], &basis[t[1]])), &images[t[0]].mul(&images[t[1]])),
        names,
    ));
    report.push(check_law(
        "rep.star",
        schedule,
        &[n],
        |t| mismatch(&rep.image(&alg.star_basis(&basis[t[0]])), &images[t[0]].adjoint()),
        names,
    ));
    let flat: Vec<_> = images.iter().map(SparseMatrix::to_element).collect();
    let rank = span_rank(&flat).unwrap_or(0);
    report.push(LawResult::fact("rep.faithful", rank == n, format!("rank {rank} of {n} basis images")));
    report.metric("rank", rank as u64);
    report.metric("carrier", rep.carrier_dim() as u64);
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PiKind {
    /// `A_{0,2}` on functions of `(g₀, g₂)`.
    Even,
    /// `A_{1,3}` on functions of `(a, b)`, the two odd slots.
    Odd,
}

/// The representations `π_{0,2}` and `π_{1,3}` on functions on `G×G`.
///
/// For `π_{0,2}` the outer group factors translate the two arguments on the
/// right and `δ_g` multiplies by `[g₀⁻¹g₂ = g]`. For `π_{1,3}` the middle
/// factor translates both arguments on the left, `δ_g` in slot 1 multiplies
/// by `[a⁻¹ = g]` and `δ_s` in slot 3 by `[b = s]`.
#[derive(Clone, Debug)]
pub struct WindowRepresentation<S> {
    alg: IteratedAlgebra<S>,
    kind: PiKind,
}

impl<S: Scalar> WindowRepresentation<S> {
    pub fn new(sub: &Subgroup, n: i64, m: i64) -> Result<Self, ReprError> {
        let kind = match (n, m) {
            (0, 2) => PiKind::Even,
            (1, 3) => PiKind::Odd,
            _ => return Err(ReprError::UnsupportedWindow { n, m }),
        };
        Ok(Self { alg: IteratedAlgebra::build(sub, n, m)?, kind })
    }

    /// Whether the formulas were chosen here rather than given in closed form
    /// (true for `π_{1,3}`).
    pub fn is_dualized(&self) -> bool {
        self.kind == PiKind::Odd
    }

    fn order(&self) -> usize {
        self.alg.group().order()
    }

    fn index(&self, a: Elem, b: Elem) -> usize {
        a as usize * self.order() + b as usize
    }

    fn pairs(&self) -> impl Iterator<Item = (Elem, Elem)> + '_ {
        let g = self.alg.group();
        g.elements().flat_map(move |a| g.elements().map(move |b| (a, b)))
    }

    fn translate(&self, f: impl Fn(Elem, Elem) -> (Elem, Elem)) -> SparseMatrix<S> {
        SparseMatrix::partial_permutation(
            self.carrier_dim(),
            self.pairs().map(|(a, b)| {
                let (c, d) = f(a, b);
                (self.index(a, b), self.index(c, d))
            }),
        )
    }

    fn indicator(&self, f: impl Fn(Elem, Elem) -> bool) -> SparseMatrix<S> {
        SparseMatrix::diagonal(self.pairs().map(|(a, b)| if f(a, b) { S::one() } else { S::zero() }))
    }

    /// Image of a single factor entry at position `slot` of the window.
    pub fn factor_image(&self, slot: usize, x: Elem) -> SparseMatrix<S> {
        let g = self.alg.group();
        match (self.kind, slot) {
            (PiKind::Even, 0) => self.translate(|a, b| (g.mul(a, x), b)),
            (PiKind::Even, 1) => self.indicator(|a, b| g.mul(g.inv(a), b) == x),
            (PiKind::Even, 2) => self.translate(|a, b| (a, g.mul(b, x))),
            (PiKind::Odd, 0) => self.indicator(|a, _| g.inv(a) == x),
            (PiKind::Odd, 1) => {
                let xi = g.inv(x);
                self.translate(|a, b| (g.mul(xi, a), g.mul(xi, b)))
            }
            (PiKind::Odd, 2) => self.indicator(|_, b| b == x),
            _ => panic!("slot {slot} outside a three-factor window"),
        }
    }
}

impl<S: Scalar> Representation for WindowRepresentation<S> {
    type Alg = IteratedAlgebra<S>;

    fn algebra(&self) -> &IteratedAlgebra<S> {
        &self.alg
    }

    fn carrier_dim(&self) -> usize {
        self.order() * self.order()
    }

    fn image_basis(&self, t: &Vec<Elem>) -> SparseMatrix<S> {
        t.iter()
            .enumerate()
            .fold(SparseMatrix::identity(self.carrier_dim()), |acc, (s, &x)| acc.mul(&self.factor_image(s, x)))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::FiniteGroup;
    use crate::scalar::Qi;

    fn s3_a3() -> Subgroup {
        let g = Arc::new(FiniteGroup::symmetric(3));
        Subgroup::closure(&g, &[4])
    }

    #[test]
    fn sparse_matrix_arithmetic() {
        let a: SparseMatrix<Qi> = SparseMatrix::partial_permutation(3, [(0, 1), (1, 2), (2, 0)]);
        let id = SparseMatrix::identity(3);
        assert_eq!(a.mul(&a).mul(&a), id);
        assert_eq!(a.adjoint().mul(&a), id);
        assert_eq!(a.add(&a.scale(&-Qi::from_int(1))), SparseMatrix::zero(3));
        assert_eq!(a.get(0, 1), Qi::from_int(1));
        assert_eq!(a.nnz(), 3);
    }

    #[test]
    fn pi_02_is_a_faithful_star_representation() {
        let rep: WindowRepresentation<Qi> = WindowRepresentation::new(&s3_a3(), 0, 2).unwrap();
        let r = verify_representation(&rep, Mode::Exhaustive);
        assert!(r.passed(), "{:?}", r.failed_laws());
        assert_eq!(r.metrics["rank"], 54);
        assert_eq!(r.metrics["carrier"], 36);
    }

    #[test]
    fn pi_02_delta_is_diagonal() {
        let rep: WindowRepresentation<Qi> = WindowRepresentation::new(&s3_a3(), 0, 2).unwrap();
        let g = rep.algebra().group().clone();
        let m = rep.factor_image(1, 1);
        for (i, j, _) in m.entries() {
            assert_eq!(i, j);
            let (a, b) = ((i / 6) as Elem, (i % 6) as Elem);
            assert_eq!(g.mul(g.inv(a), b), 1);
        }
        assert_eq!(m.nnz(), 6);
    }

    #[test]
    fn pi_13_is_a_faithful_star_representation() {
        let rep: WindowRepresentation<Qi> = WindowRepresentation::new(&s3_a3(), 1, 3).unwrap();
        assert!(rep.is_dualized());
        let r = verify_representation(&rep, Mode::default());
        assert!(r.passed(), "{:?}", r.failed_laws());
        assert_eq!(r.metrics["rank"], 108);
    }

    #[test]
    fn other_windows_are_rejected() {
        let err = WindowRepresentation::<Qi>::new(&s3_a3(), 0, 1).unwrap_err();
        assert_eq!(err, ReprError::UnsupportedWindow { n: 0, m: 1 });
    }
}
