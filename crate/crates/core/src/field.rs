//! The truncated field algebra generated by `δ_g(x)` on integer sites and
//! `ρ_h(l)` on half-integer sites, with a normal-form monomial basis.
//!
//! Sites are stored as doubled integers: integer site `x` has code `2x`,
//! half site `l` has the odd code `2l`. An observable window `[lo, hi]` carries
//! integer sites `lo..=hi` and half sites `lo-½, …, hi+½`.

use std::marker::PhantomData;
use std::sync::Arc;

use smallvec::SmallVec;
use thiserror::Error;

use crate::algebra::{Element, StructureAlgebra};
use crate::double::{require_normal, DoubleError};
use crate::element::{AlgebraElement, Label};
use crate::group::{Elem, FiniteGroup, Subgroup};
use crate::repr::{Representation, SparseMatrix};
use crate::scalar::Scalar;
use crate::verify::{check_law, LawResult, Mode, Report, Schedule};
use crate::DEFAULT_BASIS_CAP;

/// Cap on the carrier dimension of the lattice representation.
pub const LATTICE_CARRIER_CAP: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("empty window [{lo},{hi}]")]
    EmptyWindow { lo: i64, hi: i64 },
    #[error(transparent)]
    NotNormal(#[from] DoubleError),
    #[error("{what} of size {size} exceeds the cap {cap}")]
    TooLarge { what: &'static str, size: u128, cap: usize },
    #[error("site {site} lies outside the window")]
    SiteOutside { site: String },
    #[error("{name} is not an element of the subgroup")]
    NotInSubgroup { name: String },
    #[error("element index {0} is out of range")]
    UnknownElement(Elem),
}

/// Renders a doubled site code: `2` as `1`, `-1` as `-1/2`.
pub fn site_name(code: i64) -> String {
    if code % 2 == 0 {
        (code / 2).to_string()
    } else {
        format!("{code}/2")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeWindow {
    lo: i64,
    hi: i64,
}

impl LatticeWindow {
    pub fn new(lo: i64, hi: i64) -> Result<Self, FieldError> {
        if lo > hi {
            return Err(FieldError::EmptyWindow { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn n_int(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn n_half(&self) -> usize {
        self.n_int() + 1
    }

    pub fn int_sites(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    /// Doubled codes of the half sites, ascending.
    pub fn half_codes(&self) -> impl Iterator<Item = i64> {
        let lo = self.lo;
        (0..self.n_half() as i64).map(move |j| 2 * lo - 1 + 2 * j)
    }

    pub fn int_index(&self, x: i64) -> Option<usize> {
        (self.lo..=self.hi).contains(&x).then(|| (x - self.lo) as usize)
    }

    pub fn half_index(&self, code: i64) -> Option<usize> {
        let j = code - (2 * self.lo - 1);
        (code.rem_euclid(2) == 1 && j >= 0 && j / 2 < self.n_half() as i64).then_some((j / 2) as usize)
    }

    pub fn half_code(&self, j: usize) -> i64 {
        2 * self.lo - 1 + 2 * j as i64
    }

    pub fn contains(&self, other: &LatticeWindow) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl std::fmt::Display for LatticeWindow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// A normal-form monomial `δ_{g₀}(x₀)⋯δ_{g_{K-1}}(x_{K-1}) ρ_{h₀}(l₀)⋯ρ_{h_K}(l_K)`
/// with every site assigned; `ρ` entries may be the identity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldMonomial {
    lo: i64,
    deltas: SmallVec<[Elem; 8]>,
    rhos: SmallVec<[Elem; 8]>,
}

impl FieldMonomial {
    pub fn new(window: &LatticeWindow, deltas: &[Elem], rhos: &[Elem]) -> Self {
        assert_eq!(deltas.len(), window.n_int(), "one δ entry per integer site");
        assert_eq!(rhos.len(), window.n_half(), "one ρ entry per half site");
        Self { lo: window.lo, deltas: deltas.into(), rhos: rhos.into() }
    }

    pub fn window(&self) -> LatticeWindow {
        LatticeWindow { lo: self.lo, hi: self.lo + self.deltas.len() as i64 - 1 }
    }

    pub fn deltas(&self) -> &[Elem] {
        &self.deltas
    }

    pub fn rhos(&self) -> &[Elem] {
        &self.rhos
    }

    /// The monomial as a generator word in normal order, identity `ρ`s omitted.
    pub fn to_word(&self, e: Elem) -> Vec<Gen> {
        let w = self.window();
        let d = self.deltas.iter().enumerate().map(|(i, &g)| Gen::Delta { x: w.lo + i as i64, g });
        let r = self.rhos.iter().enumerate().filter(|(_, &h)| h != e).map(|(j, &h)| Gen::Rho { l2: w.half_code(j), h });
        d.chain(r).collect()
    }
}

impl Label for FieldMonomial {
    fn space(&self) -> u64 {
        (self.lo as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (self.deltas.len() as u64) ^ 0xf1e1d
    }
}

pub type FieldElement<S> = AlgebraElement<FieldMonomial, S>;

/// A generator `δ_g(x)` or `ρ_h(l)`; `l2` is the doubled half site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    Delta { x: i64, g: Elem },
    Rho { l2: i64, h: Elem },
}

impl Gen {
    pub fn delta(x: i64, g: Elem) -> Self {
        Gen::Delta { x, g }
    }

    pub fn rho(l2: i64, h: Elem) -> Self {
        Gen::Rho { l2, h }
    }

    /// Doubled site code.
    pub fn site_code(&self) -> i64 {
        match *self {
            Gen::Delta { x, .. } => 2 * x,
            Gen::Rho { l2, .. } => l2,
        }
    }

    pub fn star(&self, g: &FiniteGroup) -> Self {
        match *self {
            Gen::Delta { .. } => *self,
            Gen::Rho { l2, h } => Gen::Rho { l2, h: g.inv(h) },
        }
    }

    pub fn render(&self, g: &FiniteGroup) -> String {
        match *self {
            Gen::Delta { x, g: a } => format!("d[{}]@{x}", g.name(a)),
            Gen::Rho { l2, h } => format!("r[{}]@{}", g.name(h), site_name(l2)),
        }
    }
}

pub fn render_word(g: &FiniteGroup, word: &[Gen]) -> String {
    if word.is_empty() {
        "1".to_owned()
    } else {
        word.iter().map(|x| x.render(g)).collect()
    }
}

/// Reduction order for [`FieldAlgebra::normal_order`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReductionOrder {
    /// Rewrite the leftmost redex first.
    #[default]
    LeftToRight,
    /// Rewrite the rightmost redex first.
    RightToLeft,
}

/// A normal-ordered word: ascending `δ`s on some integer sites, then one
/// `ρ` entry per half site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalWord {
    pub deltas: Vec<Option<Elem>>,
    pub rhos: Vec<Elem>,
}

#[derive(Clone, Debug)]
pub struct FieldAlgebra<S> {
    sub: Subgroup,
    window: LatticeWindow,
    forced: bool,
    _scalar: PhantomData<S>,
}

impl<S: Scalar> FieldAlgebra<S> {
    pub fn build(sub: &Subgroup, window: LatticeWindow) -> Result<Self, FieldError> {
        Self::build_capped(sub, window, DEFAULT_BASIS_CAP)
    }

    pub fn build_capped(sub: &Subgroup, window: LatticeWindow, cap: usize) -> Result<Self, FieldError> {
        require_normal(sub)?;
        Self::force_build(sub, window, cap)
    }

    /// Skips the normality check.
    pub fn force_build(sub: &Subgroup, window: LatticeWindow, cap: usize) -> Result<Self, FieldError> {
        let size = (sub.parent().order() as u128)
            .checked_pow(window.n_int() as u32)
            .and_then(|a| a.checked_mul((sub.order() as u128).checked_pow(window.n_half() as u32)?))
            .unwrap_or(u128::MAX);
        if size > cap as u128 {
            return Err(FieldError::TooLarge { what: "field basis", size, cap });
        }
        Ok(Self { sub: sub.clone(), window, forced: !sub.is_normal(), _scalar: PhantomData })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.sub.parent()
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.sub
    }

    pub fn window(&self) -> LatticeWindow {
        self.window
    }

    pub fn is_forced(&self) -> bool {
        self.forced
    }

    fn check_gen(&self, gen: &Gen) -> Result<(), FieldError> {
        let g = self.group();
        match *gen {
            Gen::Delta { x, g: a } => {
                if a as usize >= g.order() {
                    return Err(FieldError::UnknownElement(a));
                }
                self.window.int_index(x).ok_or_else(|| FieldError::SiteOutside { site: x.to_string() })?;
            }
            Gen::Rho { l2, h } => {
                if h as usize >= g.order() {
                    return Err(FieldError::UnknownElement(h));
                }
                if !self.sub.contains(h) {
                    return Err(FieldError::NotInSubgroup { name: g.name(h).to_owned() });
                }
                self.window.half_index(l2).ok_or_else(|| FieldError::SiteOutside { site: site_name(l2) })?;
            }
        }
        Ok(())
    }

    /// Prefix products `c_j = h₀⋯h_j` of the `ρ` block.
    fn prefixes(&self, rhos: &[Elem]) -> SmallVec<[Elem; 8]> {
        let g = self.group();
        let mut acc = g.identity();
        rhos.iter()
            .map(|&h| {
                acc = g.mul(acc, h);
                acc
            })
            .collect()
    }

    fn from_prefixes(&self, c: &[Elem]) -> SmallVec<[Elem; 8]> {
        let g = self.group();
        let mut prev = g.identity();
        c.iter()
            .map(|&x| {
                let h = g.mul(g.inv(prev), x);
                prev = x;
                h
            })
            .collect()
    }

    fn monomial(&self, deltas: SmallVec<[Elem; 8]>, rhos: SmallVec<[Elem; 8]>) -> FieldMonomial {
        FieldMonomial { lo: self.window.lo, deltas, rhos }
    }

    /// Sum over all completions of the unassigned `δ` sites.
    pub fn expand(&self, word: &NormalWord) -> FieldElement<S> {
        let g = self.group();
        let mut partial: Vec<SmallVec<[Elem; 8]>> = vec![SmallVec::new()];
        for slot in &word.deltas {
            partial = match slot {
                Some(a) => partial
                    .into_iter()
                    .map(|mut p| {
                        p.push(*a);
                        p
                    })
                    .collect(),
                None => partial
                    .into_iter()
                    .flat_map(|p| {
                        g.elements().map(move |a| {
                            let mut q = p.clone();
                            q.push(a);
                            q
                        })
                    })
                    .collect(),
            };
        }
        let rhos: SmallVec<[Elem; 8]> = word.rhos.iter().copied().collect();
        AlgebraElement::sum_of(partial.into_iter().map(|d| self.monomial(d, rhos.clone())))
    }

    fn empty_word(&self) -> NormalWord {
        let e = self.group().identity();
        NormalWord { deltas: vec![None; self.window.n_int()], rhos: vec![e; self.window.n_half()] }
    }

    pub fn generator(&self, gen: &Gen) -> Result<FieldElement<S>, FieldError> {
        self.check_gen(gen)?;
        let mut w = self.empty_word();
        match *gen {
            Gen::Delta { x, g } => w.deltas[self.window.int_index(x).unwrap()] = Some(g),
            Gen::Rho { l2, h } => w.rhos[self.window.half_index(l2).unwrap()] = h,
        }
        Ok(self.expand(&w))
    }

    pub fn delta(&self, x: i64, g: Elem) -> Result<FieldElement<S>, FieldError> {
        self.generator(&Gen::delta(x, g))
    }

    /// `ρ_h` at the half site with doubled code `l2`.
    pub fn rho(&self, l2: i64, h: Elem) -> Result<FieldElement<S>, FieldError> {
        self.generator(&Gen::rho(l2, h))
    }

    /// Right multiplication by a single generator.
    pub fn mul_gen(&self, x: &FieldElement<S>, gen: &Gen) -> Result<FieldElement<S>, FieldError> {
        self.check_gen(gen)?;
        let g = self.group();
        Ok(match *gen {
            Gen::Delta { x: site, g: a } => {
                let i = self.window.int_index(site).unwrap();
                AlgebraElement::from_terms(
                    x.iter()
                        .filter(|(m, _)| m.deltas[i] == g.mul(self.prefixes(&m.rhos)[i], a))
                        .map(|(m, c)| (m.clone(), c.clone())),
                )
            }
            Gen::Rho { l2, h } => {
                let j = self.window.half_index(l2).unwrap();
                x.map_labels(|m| {
                    let mut c = self.prefixes(&m.rhos);
                    for s in c.iter_mut().skip(j) {
                        *s = g.mul(*s, h);
                    }
                    self.monomial(m.deltas.clone(), self.from_prefixes(&c))
                })
            }
        })
    }

    /// Product of a generator word, the unit when empty.
    pub fn word(&self, word: &[Gen]) -> Result<FieldElement<S>, FieldError> {
        word.iter().try_fold(self.unit(), |acc, gen| self.mul_gen(&acc, gen))
    }

    /// Rewrites a generator word to normal order with the defining relations;
    /// `None` when it reduces to zero.
    pub fn reduce_word(&self, word: &[Gen], strategy: ReductionOrder) -> Result<Option<NormalWord>, FieldError> {
        for gen in word {
            self.check_gen(gen)?;
        }
        let g = self.group();
        let e = g.identity();
        let mut w: Vec<Gen> = word.to_vec();
        loop {
            let n = w.len();
            let positions: Box<dyn Iterator<Item = usize>> = match strategy {
                ReductionOrder::LeftToRight => Box::new(0..n),
                ReductionOrder::RightToLeft => Box::new((0..n).rev()),
            };
            let mut rewrote = false;
            for p in positions {
                if let Gen::Rho { h, .. } = w[p] {
                    if h == e {
                        w.remove(p);
                        rewrote = true;
                        break;
                    }
                }
                if p + 1 == n {
                    continue;
                }
                let replacement: Option<Vec<Gen>> = match (w[p], w[p + 1]) {
                    (Gen::Delta { x, g: a }, Gen::Delta { x: y, g: b }) if x == y => {
                        if a != b {
                            return Ok(None);
                        }
                        Some(vec![w[p]])
                    }
                    (d1 @ Gen::Delta { x, .. }, d2 @ Gen::Delta { x: y, .. }) if x > y => Some(vec![d2, d1]),
                    (r @ Gen::Rho { l2, h }, Gen::Delta { x, g: a }) => {
                        let a = if l2 < 2 * x { g.mul(h, a) } else { a };
                        Some(vec![Gen::Delta { x, g: a }, r])
                    }
                    (Gen::Rho { l2, h: a }, Gen::Rho { l2: m2, h: b }) if l2 == m2 => {
                        Some(vec![Gen::Rho { l2, h: g.mul(a, b) }])
                    }
                    (Gen::Rho { l2, h: a }, r2 @ Gen::Rho { l2: m2, h: b }) if l2 > m2 => {
                        Some(vec![r2, Gen::Rho { l2, h: g.conjugate(b, a) }])
                    }
                    _ => None,
                };
                if let Some(rep) = replacement {
                    w.splice(p..p + 2, rep);
                    rewrote = true;
                    break;
                }
            }
            if !rewrote {
                break;
            }
        }
        let mut out = self.empty_word();
        for gen in w {
            match gen {
                Gen::Delta { x, g } => out.deltas[self.window.int_index(x).unwrap()] = Some(g),
                Gen::Rho { l2, h } => out.rhos[self.window.half_index(l2).unwrap()] = h,
            }
        }
        Ok(Some(out))
    }

    pub fn normal_order(&self, word: &[Gen], strategy: ReductionOrder) -> Result<FieldElement<S>, FieldError> {
        Ok(self.reduce_word(word, strategy)?.map(|w| self.expand(&w)).unwrap_or_default())
    }

    pub fn render_normal_word(&self, w: &NormalWord) -> String {
        let g = self.group();
        let e = g.identity();
        let d = w.deltas.iter().enumerate().filter_map(|(i, a)| a.map(|a| Gen::delta(self.window.lo + i as i64, a)));
        let r = w.rhos.iter().enumerate().filter(|(_, &h)| h != e).map(|(j, &h)| Gen::rho(self.window.half_code(j), h));
        render_word(g, &d.chain(r).collect::<Vec<_>>())
    }

    /// Every instance of the defining relations on this window, as
    /// `(family, lhs word, rhs as a sum of words)`.
    pub fn relation_instances(&self) -> Vec<(&'static str, Vec<Gen>, Vec<Vec<Gen>>)> {
        let g = self.group();
        let h_members = self.sub.members().to_vec();
        let ints: Vec<i64> = self.window.int_sites().collect();
        let halves: Vec<i64> = self.window.half_codes().collect();
        let mut out = Vec::new();
        for &x in &ints {
            out.push(("unit", vec![], g.elements().map(|a| vec![Gen::delta(x, a)]).collect()));
        }
        for &l in &halves {
            out.push(("unit", vec![Gen::rho(l, g.identity())], vec![vec![]]));
        }
        for &x in &ints {
            for a in g.elements() {
                for b in g.elements() {
                    let rhs = if a == b { vec![vec![Gen::delta(x, a)]] } else { vec![] };
                    out.push(("delta.same_site", vec![Gen::delta(x, a), Gen::delta(x, b)], rhs));
                }
            }
        }
        for &l in &halves {
            for &a in &h_members {
                for &b in &h_members {
                    out.push((
                        "rho.same_site",
                        vec![Gen::rho(l, a), Gen::rho(l, b)],
                        vec![vec![Gen::rho(l, g.mul(a, b))]],
                    ));
                }
            }
        }
        for &x in &ints {
            for &y in ints.iter().filter(|&&y| y != x) {
                for a in g.elements() {
                    for b in g.elements() {
                        let (d1, d2) = (Gen::delta(x, a), Gen::delta(y, b));
                        out.push(("delta.commute", vec![d1, d2], vec![vec![d2, d1]]));
                    }
                }
            }
        }
        for &l in &halves {
            for &x in &ints {
                for &h in &h_members {
                    for a in g.elements() {
                        let moved = if l < 2 * x { g.mul(h, a) } else { a };
                        out.push((
                            "rho_delta.exchange",
                            vec![Gen::rho(l, h), Gen::delta(x, a)],
                            vec![vec![Gen::delta(x, moved), Gen::rho(l, h)]],
                        ));
                    }
                }
            }
        }
        for &l in &halves {
            for &m in halves.iter().filter(|&&m| m != l) {
                for &a in &h_members {
                    for &b in &h_members {
                        let rhs = if l > m {
                            vec![Gen::rho(m, b), Gen::rho(l, g.conjugate(b, a))]
                        } else {
                            vec![Gen::rho(m, g.conjugate(g.inv(a), b)), Gen::rho(l, a)]
                        };
                        out.push(("rho_rho.exchange", vec![Gen::rho(l, a), Gen::rho(m, b)], vec![rhs]));
                    }
                }
            }
        }
        out
    }

    /// The defining relations evaluated in this algebra through [`Self::word`].
    pub fn verify_relations(&self) -> Report {
        let g = self.group().clone();
        relation_report(
            self,
            "field-relations",
            |w| self.word(w).expect("relation words lie in the window"),
            |a, b| (a != b).then(|| format!("{} != {}", self.render_element(a), self.render_element(b))),
            |w| render_word(&g, w),
        )
    }

    /// Normal ordering under both strategies against the word product, on
    /// scheduled words of length `len`.
    pub fn verify_normal_order(&self, len: usize, mode: Mode) -> LawResult {
        let gens = self.all_generators();
        let k = gens.len();
        let dims = vec![k; len];
        let schedule = mode.resolve((k as u64).saturating_pow(len as u32));
        let g = self.group().clone();
        check_law(
            "normal_order.confluence",
            schedule,
            &dims,
            |t| {
                let word: Vec<Gen> = t.iter().map(|&i| gens[i]).collect();
                let a = self.normal_order(&word, ReductionOrder::LeftToRight).ok()?;
                let b = self.normal_order(&word, ReductionOrder::RightToLeft).ok()?;
                let c = self.word(&word).ok()?;
                (a != b || a != c).then(|| {
                    format!("{} / {} / {}", self.render_element(&a), self.render_element(&b), self.render_element(&c))
                })
            },
            |t| vec![render_word(&g, &t.iter().map(|&i| gens[i]).collect::<Vec<_>>())],
        )
    }

    /// Every generator on the window, `δ`s first.
    pub fn all_generators(&self) -> Vec<Gen> {
        let g = self.group();
        let mut out: Vec<Gen> =
            self.window.int_sites().flat_map(|x| g.elements().map(move |a| Gen::delta(x, a))).collect();
        for l in self.window.half_codes() {
            out.extend(self.sub.members().iter().map(|&h| Gen::rho(l, h)));
        }
        out
    }
}

fn relation_report<T, E, C, R>(source: &T, subject: &str, eval: E, cmp: C, render: R) -> Report
where
    T: HasRelations,
    E: Fn(&[Gen]) -> T::Value + Sync,
    C: Fn(&T::Value, &T::Value) -> Option<String> + Sync,
    R: Fn(&[Gen]) -> String,
{
    let instances = source.instances();
    let mut families: Vec<&'static str> = instances.iter().map(|(f, _, _)| *f).collect();
    families.dedup();
    let mut report = Report::new(subject);
    for fam in families {
        let group: Vec<_> = instances.iter().filter(|(f, _, _)| *f == fam).collect();
        report.push(check_law(
            &format!("relation.{fam}"),
            Schedule::Exhaustive,
            &[group.len()],
            |t| {
                let (_, lhs, rhs) = group[t[0]];
                let l = eval(lhs);
                let r = source.sum(rhs.iter().map(|w| eval(w)).collect());
                cmp(&l, &r)
            },
            |t| {
                let (_, lhs, rhs) = group[t[0]];
                let rhs: Vec<String> = rhs.iter().map(|w| render(w)).collect();
                vec![render(lhs), if rhs.is_empty() { "0".into() } else { rhs.join(" + ") }]
            },
        ));
    }
    report
}

trait HasRelations: Sync {
    type Value: Send;
    fn instances(&self) -> Vec<(&'static str, Vec<Gen>, Vec<Vec<Gen>>)>;
    fn sum(&self, values: Vec<Self::Value>) -> Self::Value;
}

impl<S: Scalar> HasRelations for FieldAlgebra<S> {
    type Value = FieldElement<S>;

    fn instances(&self) -> Vec<(&'static str, Vec<Gen>, Vec<Vec<Gen>>)> {
        self.relation_instances()
    }

    fn sum(&self, values: Vec<FieldElement<S>>) -> FieldElement<S> {
        values.into_iter().fold(AlgebraElement::zero(), |acc, v| acc + v)
    }
}

impl<S: Scalar> StructureAlgebra for FieldAlgebra<S> {
    type Label = FieldMonomial;
    type Scalar = S;

    fn basis(&self) -> Vec<FieldMonomial> {
        let g = self.group();
        let h: Vec<Elem> = self.sub.members().to_vec();
        let mut deltas: Vec<SmallVec<[Elem; 8]>> = vec![SmallVec::new()];
        for _ in 0..self.window.n_int() {
            deltas = deltas
                .into_iter()
                .flat_map(|p| {
                    g.elements().map(move |a| {
                        let mut q = p.clone();
                        q.push(a);
                        q
                    })
                })
                .collect();
        }
        let mut rhos: Vec<SmallVec<[Elem; 8]>> = vec![SmallVec::new()];
        for _ in 0..self.window.n_half() {
            rhos = rhos
                .into_iter()
                .flat_map(|p| {
                    h.iter().map(move |&a| {
                        let mut q = p.clone();
                        q.push(a);
                        q
                    })
                })
                .collect();
        }
        let mut out: Vec<FieldMonomial> =
            deltas.iter().flat_map(|d| rhos.iter().map(move |r| self.monomial(d.clone(), r.clone()))).collect();
        out.sort();
        out
    }

    fn dim(&self) -> usize {
        self.group().order().pow(self.window.n_int() as u32) * self.sub.order().pow(self.window.n_half() as u32)
    }

    fn contains(&self, m: &FieldMonomial) -> bool {
        let g = self.group();
        m.lo == self.window.lo
            && m.deltas.len() == self.window.n_int()
            && m.rhos.len() == self.window.n_half()
            && m.deltas.iter().all(|&a| (a as usize) < g.order())
            && m.rhos.iter().all(|&h| (h as usize) < g.order() && self.sub.contains(h))
    }

    /// `(g₁, c₁)(g₂, c₂) = [g₁ = c₁g₂]·(g₁, c₁c₂)` in prefix coordinates.
    fn mul_basis(&self, a: &FieldMonomial, b: &FieldMonomial) -> Element<Self> {
        let g = self.group();
        let ca = self.prefixes(&a.rhos);
        let cb = self.prefixes(&b.rhos);
        if a.deltas.iter().zip(&b.deltas).zip(&ca).any(|((&ga, &gb), &c)| ga != g.mul(c, gb)) {
            return AlgebraElement::zero();
        }
        let c: SmallVec<[Elem; 8]> = ca.iter().zip(&cb).map(|(&x, &y)| g.mul(x, y)).collect();
        AlgebraElement::basis(self.monomial(a.deltas.clone(), self.from_prefixes(&c)))
    }

    fn unit(&self) -> Element<Self> {
        self.expand(&self.empty_word())
    }

    /// `(g, c)* = (c⁻¹g, c⁻¹)` in prefix coordinates.
    fn star_basis(&self, m: &FieldMonomial) -> Element<Self> {
        let g = self.group();
        let c = self.prefixes(&m.rhos);
        let deltas = m.deltas.iter().zip(&c).map(|(&a, &x)| g.mul(g.inv(x), a)).collect();
        let cinv: SmallVec<[Elem; 8]> = c.iter().map(|&x| g.inv(x)).collect();
        AlgebraElement::basis(self.monomial(deltas, self.from_prefixes(&cinv)))
    }

    fn render(&self, m: &FieldMonomial) -> String {
        render_word(self.group(), &m.to_word(self.group().identity()))
    }
}

/// Operators on functions of configurations `σ` over the integer sites plus
/// one virtual site to the right. `δ_g(x)` multiplies by `[σ_x = g]`;
/// `ρ_h(l)` sends `ψ` to `σ ↦ ψ(σ′)` with `σ′_x = h⁻¹σ_x` for every `x > l`.
#[derive(Clone, Debug)]
pub struct LatticeRepresentation<S> {
    field: FieldAlgebra<S>,
    sites: usize,
    dim: usize,
}

impl<S: Scalar> LatticeRepresentation<S> {
    pub fn new(field: &FieldAlgebra<S>) -> Result<Self, FieldError> {
        let sites = field.window.n_int() + 1;
        let size = (field.group().order() as u128).checked_pow(sites as u32).unwrap_or(u128::MAX);
        if size > LATTICE_CARRIER_CAP as u128 {
            return Err(FieldError::TooLarge { what: "lattice carrier", size, cap: LATTICE_CARRIER_CAP });
        }
        Ok(Self { field: field.clone(), sites, dim: size as usize })
    }

    fn decode(&self, mut idx: usize) -> Vec<Elem> {
        let n = self.field.group().order();
        let mut out = vec![0; self.sites];
        for s in (0..self.sites).rev() {
            out[s] = (idx % n) as Elem;
            idx /= n;
        }
        out
    }

    fn encode(&self, sigma: &[Elem]) -> usize {
        let n = self.field.group().order();
        sigma.iter().fold(0, |acc, &x| acc * n + x as usize)
    }

    pub fn generator_matrix(&self, gen: &Gen) -> Result<SparseMatrix<S>, FieldError> {
        self.field.check_gen(gen)?;
        let g = self.field.group();
        let w = self.field.window;
        Ok(match *gen {
            Gen::Delta { x, g: a } => {
                let i = w.int_index(x).unwrap();
                SparseMatrix::diagonal((0..self.dim).map(|k| if self.decode(k)[i] == a { S::one() } else { S::zero() }))
            }
            Gen::Rho { l2, h } => {
                let hi = g.inv(h);
                SparseMatrix::partial_permutation(
                    self.dim,
                    (0..self.dim).map(|k| {
                        let mut s = self.decode(k);
                        for (i, v) in s.iter_mut().enumerate() {
                            if l2 < 2 * (w.lo + i as i64) {
                                *v = g.mul(hi, *v);
                            }
                        }
                        (k, self.encode(&s))
                    }),
                )
            }
        })
    }

    pub fn word_matrix(&self, word: &[Gen]) -> Result<SparseMatrix<S>, FieldError> {
        word.iter().try_fold(SparseMatrix::identity(self.dim), |acc, gen| Ok(acc.mul(&self.generator_matrix(gen)?)))
    }

    /// The defining relations as matrix identities.
    pub fn verify_relations(&self) -> Report {
        let g = self.field.group().clone();
        relation_report(
            self,
            "lattice-relations",
            |w| self.word_matrix(w).expect("relation words lie in the window"),
            |a, b| (a != b).then(|| "matrix images differ".to_owned()),
            |w| render_word(&g, w),
        )
    }

    /// `ρ_h(l)` and `δ_g(x)` images against the images of their stars.
    pub fn verify_generator_star(&self) -> LawResult {
        let gens = self.field.all_generators();
        let g = self.field.group().clone();
        check_law(
            "lattice.star",
            Schedule::Exhaustive,
            &[gens.len()],
            |t| {
                let gen = gens[t[0]];
                let lhs = self.generator_matrix(&gen.star(&g)).ok()?;
                (lhs != self.generator_matrix(&gen).ok()?.adjoint())
                    .then(|| "image of star is not the adjoint".to_owned())
            },
            |t| vec![gens[t[0]].render(&g)],
        )
    }
}

impl<S: Scalar> HasRelations for LatticeRepresentation<S> {
    type Value = SparseMatrix<S>;

    fn instances(&self) -> Vec<(&'static str, Vec<Gen>, Vec<Vec<Gen>>)> {
        self.field.relation_instances()
    }

    fn sum(&self, values: Vec<SparseMatrix<S>>) -> SparseMatrix<S> {
        values.iter().fold(SparseMatrix::zero(self.dim), |acc, v| acc.add(v))
    }
}

impl<S: Scalar> Representation for LatticeRepresentation<S> {
    type Alg = FieldAlgebra<S>;

    fn algebra(&self) -> &FieldAlgebra<S> {
        &self.field
    }

    fn carrier_dim(&self) -> usize {
        self.dim
    }

    fn image_basis(&self, m: &FieldMonomial) -> SparseMatrix<S> {
        self.word_matrix(&m.to_word(self.field.group().identity())).expect("basis monomials lie in the window")
    }
}
