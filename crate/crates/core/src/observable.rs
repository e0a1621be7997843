//! The action of `D(H;G)` on the field algebra, its integral projection, the
//! `v`/`w` generators of the observable algebra and the isomorphism `Φ` from
//! the iterated twisted product onto their span.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Element, ModuleAction, StructureAlgebra};
use crate::double::{DoubleLabel, QuantumDouble};
use crate::element::AlgebraElement;
use crate::field::{site_name, FieldAlgebra, FieldElement, FieldError, FieldMonomial, Gen, LatticeWindow};
use crate::group::{Elem, FiniteGroup, Subgroup};
use crate::linalg::{Echelon, LinalgError};
use crate::scalar::Scalar;
use crate::twisted::{IteratedAlgebra, TwistError, WindowEmbedding};
use crate::verify::{
    check_law, compare, verify_module_algebra, LawResult, Mode, Report, Schedule, Witness, MAX_WITNESSES,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObservableError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("the double and the field algebra use different subgroups")]
    SubgroupMismatch,
    #[error("factor window [{n},{m}] does not match observable window {window}")]
    WindowMismatch { n: i64, m: i64, window: String },
    #[error("{0} is not defined on this window")]
    OutOfWindow(String),
}

fn same_subgroup(a: &Subgroup, b: &Subgroup) -> bool {
    a.parent() == b.parent() && a.members() == b.members()
}

/// `γ`: the left action of `D(H;G)` on the field algebra.
#[derive(Clone, Debug)]
pub struct GammaAction<S> {
    double: QuantumDouble<S>,
    field: FieldAlgebra<S>,
}

impl<S: Scalar> GammaAction<S> {
    pub fn new(double: QuantumDouble<S>, field: FieldAlgebra<S>) -> Result<Self, ObservableError> {
        if !same_subgroup(double.subgroup(), field.subgroup()) {
            return Err(ObservableError::SubgroupMismatch);
        }
        Ok(Self { double, field })
    }

    pub fn double(&self) -> &QuantumDouble<S> {
        &self.double
    }

    pub fn field(&self) -> &FieldAlgebra<S> {
        &self.field
    }

    fn group(&self) -> &Arc<FiniteGroup> {
        self.field.group()
    }

    /// `(h,g)·M = [g(h₀⋯h_K)g⁻¹ = h]·M′` where `M′` has `δ` entries `g·g_x`
    /// and `ρ` entries `g·h_l·g⁻¹`.
    pub fn act_monomial(&self, &(h, g): &DoubleLabel, m: &FieldMonomial) -> FieldElement<S> {
        let grp = self.group();
        let gi = grp.inv(g);
        if grp.product([g, grp.product(m.rhos().iter().copied()), gi]) != h {
            return AlgebraElement::zero();
        }
        let deltas: Vec<Elem> = m.deltas().iter().map(|&x| grp.mul(g, x)).collect();
        let rhos: Vec<Elem> = m.rhos().iter().map(|&x| grp.product([g, x, gi])).collect();
        AlgebraElement::basis(FieldMonomial::new(&m.window(), &deltas, &rhos))
    }

    /// The action on a generator word through the iterated coproduct
    /// `Δ⁽ⁿ⁾(h,g) = Σ_{t₁⋯tₙ=h} (t₁,g)⊗⋯⊗(tₙ,g)` and the generator rules.
    pub fn act_word(&self, &(h, g): &DoubleLabel, word: &[Gen]) -> Result<FieldElement<S>, ObservableError> {
        let grp = self.group();
        let mut rest = h;
        let mut image = Vec::with_capacity(word.len());
        for gen in word {
            match *gen {
                Gen::Delta { x, g: f } => image.push(Gen::delta(x, grp.mul(g, f))),
                Gen::Rho { l2, h: t } => {
                    let ti = grp.conjugate(grp.inv(g), t);
                    image.push(Gen::rho(l2, ti));
                    rest = grp.mul(grp.inv(ti), rest);
                }
            }
        }
        if rest != grp.identity() {
            return Ok(AlgebraElement::zero());
        }
        Ok(self.field.word(&image)?)
    }

    /// `γ_z` for the normalized integral `z = (1/|G|)Σ_g (e,g)`: monomials
    /// with trivial `ρ` product, averaged over `G`.
    pub fn project_z(&self, x: &FieldElement<S>) -> FieldElement<S> {
        let grp = self.group();
        let e = grp.identity();
        let c = S::from_ratio(1, grp.order() as i64);
        let mut out = AlgebraElement::zero();
        for (m, coeff) in x.iter() {
            if grp.product(m.rhos().iter().copied()) != e {
                continue;
            }
            let k = coeff.clone() * c.clone();
            for g in grp.elements() {
                for (l, v) in self.act_monomial(&(e, g), m).iter() {
                    out.add_term(l.clone(), v.clone() * k.clone());
                }
            }
        }
        out
    }

    /// Closed form against the coproduct extension, the generator rules,
    /// `project_z` against the action of the integral, idempotence, and the
    /// module-algebra laws.
    pub fn verify(&self, mode: Mode) -> Report {
        let field = &self.field;
        let fb = field.basis();
        let db = self.double.basis();
        let n = fb.len() as u64;
        let schedule = mode.resolve(n.saturating_mul(n).saturating_mul(n));
        let r = |l: &FieldMonomial| field.render(l);
        let e = self.group().identity();
        let mut report = Report::new("gamma");
        report.push(check_law(
            "gamma.closed_form",
            schedule,
            &[db.len(), fb.len()],
            |t| {
                let (a, m) = (&db[t[0]], &fb[t[1]]);
                let oracle = self.act_word(a, &m.to_word(e)).ok()?;
                compare(&self.act_monomial(a, m), &oracle, r)
            },
            |t| vec![self.double.render(&db[t[0]]), field.render(&fb[t[1]])],
        ));
        let gens = field.all_generators();
        let grp = self.group().clone();
        report.push(check_law(
            "gamma.generators",
            Schedule::Exhaustive,
            &[db.len(), gens.len()],
            |t| {
                let (h, g) = db[t[0]];
                let gen = gens[t[1]];
                let x = field.generator(&gen).ok()?;
                let lhs = self.act(&AlgebraElement::basis((h, g)), &x);
                let rhs = match gen {
                    Gen::Delta { x, g: f } if h == e => field.delta(x, grp.mul(g, f)).ok()?,
                    Gen::Rho { l2, h: t } if grp.conjugate(grp.inv(g), t) == h => field.rho(l2, h).ok()?,
                    _ => AlgebraElement::zero(),
                };
                compare(&lhs, &rhs, r)
            },
            |t| vec![self.double.render(&db[t[0]]), gens[t[1]].render(&grp)],
        ));
        let z = self.double.integral();
        report.push(check_law(
            "project_z.integral",
            schedule,
            &[fb.len()],
            |t| {
                let x = AlgebraElement::basis(fb[t[0]].clone());
                compare(&self.project_z(&x), &self.act(&z, &x), r)
            },
            |t| vec![field.render(&fb[t[0]])],
        ));
        report.push(check_law(
            "project_z.idempotent",
            schedule,
            &[fb.len()],
            |t| {
                let p = self.project_z(&AlgebraElement::basis(fb[t[0]].clone()));
                compare(&self.project_z(&p), &p, r)
            },
            |t| vec![field.render(&fb[t[0]])],
        ));
        report.extend(verify_module_algebra(self, mode));
        report
    }
}

impl<S: Scalar> ModuleAction for GammaAction<S> {
    type Acting = QuantumDouble<S>;
    type Space = FieldAlgebra<S>;

    fn acting(&self) -> &QuantumDouble<S> {
        &self.double
    }

    fn space(&self) -> &FieldAlgebra<S> {
        &self.field
    }

    fn act_basis(&self, a: &DoubleLabel, m: &FieldMonomial) -> Element<FieldAlgebra<S>> {
        self.act_monomial(a, m)
    }
}

/// A `v` or `w` generator of the observable algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VwLabel {
    /// `v_h(x)`.
    V { h: Elem, x: i64 },
    /// `w_g(l)` at the half site with doubled code `l2`.
    W { g: Elem, l2: i64 },
    /// `v_h(x)` with its left `ρ` factor dropped.
    TruncatedV { h: Elem, x: i64 },
}

impl VwLabel {
    pub fn render(&self, g: &FiniteGroup) -> String {
        match *self {
            VwLabel::V { h, x } => format!("v[{}]@{x}", g.name(h)),
            VwLabel::W { g: a, l2 } => format!("w[{}]@{}", g.name(a), site_name(l2)),
            VwLabel::TruncatedV { h, x } => format!("v'[{}]@{x}", g.name(h)),
        }
    }

    /// The generator as a sum of generator words.
    pub fn words<S: Scalar>(&self, field: &FieldAlgebra<S>) -> Result<Vec<Vec<Gen>>, ObservableError> {
        let grp = field.group();
        let w = field.window();
        let out = |label: &VwLabel| ObservableError::OutOfWindow(label.render(grp));
        match *self {
            VwLabel::V { h, x } | VwLabel::TruncatedV { h, x } => {
                if w.int_index(x).is_none() || !field.subgroup().contains(h) {
                    return Err(out(self));
                }
                let truncated = matches!(self, VwLabel::TruncatedV { .. });
                Ok(grp
                    .elements()
                    .map(|k| {
                        let ki = grp.inv(k);
                        let mut word = Vec::with_capacity(3);
                        if !truncated {
                            word.push(Gen::rho(2 * x - 1, grp.product([k, grp.inv(h), ki])));
                        }
                        word.push(Gen::delta(x, k));
                        word.push(Gen::rho(2 * x + 1, grp.product([k, h, ki])));
                        word
                    })
                    .collect())
            }
            VwLabel::W { g, l2 } => {
                let (left, right) = ((l2 - 1).div_euclid(2), (l2 + 1).div_euclid(2));
                if l2.rem_euclid(2) != 1 || w.int_index(left).is_none() || w.int_index(right).is_none() {
                    return Err(out(self));
                }
                Ok(grp.elements().map(|k| vec![Gen::delta(left, k), Gen::delta(right, grp.mul(k, g))]).collect())
            }
        }
    }

    pub fn element<S: Scalar>(&self, field: &FieldAlgebra<S>) -> Result<FieldElement<S>, ObservableError> {
        Ok(mul_words(field, &field.unit(), &self.words(field)?))
    }
}

/// `x·Σ_w w` for a sum of generator words.
pub fn mul_words<S: Scalar>(field: &FieldAlgebra<S>, x: &FieldElement<S>, words: &[Vec<Gen>]) -> FieldElement<S> {
    let mut out = AlgebraElement::zero();
    for word in words {
        let mut acc = x.clone();
        for gen in word {
            acc = field.mul_gen(&acc, gen).expect("generator words are validated on construction");
        }
        out += &acc;
    }
    out
}

/// Every `v_h(x)` with `h` in `v_sub` and every `w_g(l)` on the window.
pub fn vw_labels<S: Scalar>(field: &FieldAlgebra<S>, v_sub: &Subgroup) -> Vec<VwLabel> {
    let w = field.window();
    let mut out: Vec<VwLabel> =
        w.int_sites().flat_map(|x| v_sub.members().iter().map(move |&h| VwLabel::V { h, x })).collect();
    let grp = field.group();
    for l2 in w.half_codes().filter(|&c| c > 2 * w.lo() && c < 2 * w.hi()) {
        out.extend(grp.elements().map(|g| VwLabel::W { g, l2 }));
    }
    out
}

/// The two finite-window stand-ins for the observable algebra: the image of
/// `project_z` and the algebra generated by the `v`/`w` generators.
#[derive(Clone, Debug)]
pub struct ObservableSpace<S> {
    window: LatticeWindow,
    z_image: Echelon<FieldMonomial, S>,
    vw: Echelon<FieldMonomial, S>,
    vw_vectors: Vec<FieldElement<S>>,
}

impl<S: Scalar> ObservableSpace<S> {
    /// The `v` generators use `v_sub`, which must be normal in `G` and lie
    /// in the field's subgroup.
    pub fn compute(gamma: &GammaAction<S>, v_sub: &Subgroup) -> Result<Self, ObservableError> {
        let field = gamma.field();
        let mut z_image = Echelon::new();
        for m in field.basis() {
            z_image.insert(&gamma.project_z(&AlgebraElement::basis(m)))?;
        }
        let (vw, vw_vectors) = Self::vw_closure(field, v_sub)?;
        Ok(Self { window: field.window(), z_image, vw, vw_vectors })
    }

    /// Right-multiplies new span vectors by every generator until nothing
    /// new appears.
    pub fn vw_closure(
        field: &FieldAlgebra<S>,
        v_sub: &Subgroup,
    ) -> Result<(Echelon<FieldMonomial, S>, Vec<FieldElement<S>>), ObservableError> {
        let gens: Vec<Vec<Vec<Gen>>> =
            vw_labels(field, v_sub).iter().map(|l| l.words(field)).collect::<Result<_, _>>()?;
        let mut span = Echelon::new();
        let mut vectors = Vec::new();
        let unit = field.unit();
        span.insert(&unit)?;
        vectors.push(unit);
        let mut next = 0;
        while next < vectors.len() {
            let x = vectors[next].clone();
            next += 1;
            for words in &gens {
                let y = mul_words(field, &x, words);
                if span.insert(&y)? {
                    vectors.push(y);
                }
            }
        }
        Ok((span, vectors))
    }

    pub fn window(&self) -> LatticeWindow {
        self.window
    }

    pub fn z_dim(&self) -> usize {
        self.z_image.rank()
    }

    pub fn vw_dim(&self) -> usize {
        self.vw.rank()
    }

    pub fn vw_span(&self) -> &Echelon<FieldMonomial, S> {
        &self.vw
    }

    /// Vectors whose span is the `v`/`w` algebra, products of generators.
    pub fn vw_vectors(&self) -> &[FieldElement<S>] {
        &self.vw_vectors
    }

    pub fn z_image(&self) -> &Echelon<FieldMonomial, S> {
        &self.z_image
    }

    /// `vw ⊆ z-image`, fixed points of `project_z`, and star closure of the
    /// z-image.
    pub fn verify(&self, gamma: &GammaAction<S>) -> Report {
        let field = gamma.field();
        let r = |l: &FieldMonomial| field.render(l);
        let mut report = Report::new("observable-span");
        let k = self.vw_vectors.len();
        report.push(check_law(
            "span.vw_fixed",
            Schedule::Exhaustive,
            &[k],
            |t| compare(&gamma.project_z(&self.vw_vectors[t[0]]), &self.vw_vectors[t[0]], r),
            |t| vec![format!("vw vector {}", t[0])],
        ));
        report.push(check_law(
            "span.vw_in_z_image",
            Schedule::Exhaustive,
            &[k],
            |t| (!self.z_image.contains(&self.vw_vectors[t[0]])).then(|| "outside the z-image".to_owned()),
            |t| vec![format!("vw vector {}", t[0])],
        ));
        let rows = self.z_image.rows();
        report.push(check_law(
            "span.z_star_closed",
            Schedule::Exhaustive,
            &[rows.len()],
            |t| (!self.z_image.contains(&field.star(&rows[t[0]]))).then(|| "star leaves the z-image".to_owned()),
            |t| vec![format!("z-image row {}", t[0])],
        ));
        report.metric("field", field.dim() as u64);
        report.metric("z_image", self.z_dim() as u64);
        report.metric("vw_span", self.vw_dim() as u64);
        report
    }
}

/// The `v`/`w` relations, invariance under `γ_z`, and the truncated-`v`
/// control (which is expected to fail).
pub fn verify_vw_relations<S: Scalar>(gamma: &GammaAction<S>) -> Result<Report, ObservableError> {
    let field = gamma.field();
    let grp = field.group().clone();
    let w = field.window();
    let h_members = field.subgroup().members().to_vec();
    let r = |l: &FieldMonomial| field.render(l);
    let el = |l: VwLabel| l.element(field);
    let labels = vw_labels(field, field.subgroup());
    let mut report = Report::new("vw-relations");
    report.notes.push("v_{h1}(x)v_{h1}(x) = v_{h1h2}(x) read as v_{h1}(x)v_{h2}(x) = v_{h1h2}(x)".into());

    let elements: Vec<FieldElement<S>> = labels.iter().map(|&l| el(l)).collect::<Result<_, _>>()?;
    report.push(check_law(
        "vw.fixed_by_z",
        Schedule::Exhaustive,
        &[labels.len()],
        |t| compare(&gamma.project_z(&elements[t[0]]), &elements[t[0]], r),
        |t| vec![labels[t[0]].render(&grp)],
    ));

    let ws: Vec<(Elem, i64)> =
        labels.iter().filter_map(|l| if let VwLabel::W { g, l2 } = *l { Some((g, l2)) } else { None }).collect();
    let mut tally: BTreeMap<&'static str, (u64, Vec<(Vec<String>, String)>)> = BTreeMap::new();
    let mut record = |law: &'static str, outcome: Option<String>, labels: Vec<String>| {
        let entry = tally.entry(law).or_default();
        entry.0 += 1;
        if let Some(d) = outcome {
            entry.1.push((labels, d));
        }
    };
    for &(g1, l2) in &ws {
        let a = el(VwLabel::W { g: g1, l2 })?;
        record("vw.w_projection", compare(&field.star(&a), &a, r), vec![VwLabel::W { g: g1, l2 }.render(&grp)]);
        for &(g2, m2) in ws.iter().filter(|(_, m2)| *m2 == l2) {
            let b = el(VwLabel::W { g: g2, l2: m2 })?;
            let rhs = if g1 == g2 { a.clone() } else { AlgebraElement::zero() };
            record(
                "vw.w_projection",
                compare(&field.mul(&a, &b), &rhs, r),
                vec![VwLabel::W { g: g1, l2 }.render(&grp), VwLabel::W { g: g2, l2 }.render(&grp)],
            );
        }
    }
    let unit = field.unit();
    for x in w.int_sites() {
        for &h1 in &h_members {
            let v1 = el(VwLabel::V { h: h1, x })?;
            let name = VwLabel::V { h: h1, x }.render(&grp);
            record("vw.v_unitary", compare(&field.mul(&field.star(&v1), &v1), &unit, r), vec![name.clone()]);
            for &h2 in &h_members {
                let v2 = el(VwLabel::V { h: h2, x })?;
                let v12 = el(VwLabel::V { h: grp.mul(h1, h2), x })?;
                record(
                    "vw.v_product",
                    compare(&field.mul(&v1, &v2), &v12, r),
                    vec![name.clone(), VwLabel::V { h: h2, x }.render(&grp)],
                );
            }
            for g in grp.elements() {
                if let Ok(wr) = el(VwLabel::W { g, l2: 2 * x + 1 }) {
                    let moved = el(VwLabel::W { g: grp.mul(h1, g), l2: 2 * x + 1 })?;
                    record(
                        "vw.v_w_right",
                        compare(&field.mul(&v1, &wr), &field.mul(&moved, &v1), r),
                        vec![name.clone(), VwLabel::W { g, l2: 2 * x + 1 }.render(&grp)],
                    );
                }
                if let Ok(wl) = el(VwLabel::W { g, l2: 2 * x - 1 }) {
                    let moved = el(VwLabel::W { g: grp.mul(g, grp.inv(h1)), l2: 2 * x - 1 })?;
                    record(
                        "vw.v_w_left",
                        compare(&field.mul(&v1, &wl), &field.mul(&moved, &v1), r),
                        vec![name.clone(), VwLabel::W { g, l2: 2 * x - 1 }.render(&grp)],
                    );
                }
            }
        }
    }
    for law in ["vw.w_projection", "vw.v_unitary", "vw.v_product", "vw.v_w_right", "vw.v_w_left"] {
        let (checked, fails) = tally.remove(law).unwrap_or_default();
        report.push(LawResult {
            law: law.to_owned(),
            mode: "exhaustive".to_owned(),
            checked,
            failed: fails.len() as u64,
            failures: fails
                .into_iter()
                .take(MAX_WITNESSES)
                .map(|(labels, detail)| Witness { tuple: Vec::new(), labels, detail })
                .collect(),
        });
    }
    Ok(report)
}

/// Whether every truncated `v_h(x)` (left `ρ` dropped) with `h ≠ e` is fixed
/// by `γ_z`. Expected to fail for nontrivial `H`.
pub fn verify_truncated_v<S: Scalar>(gamma: &GammaAction<S>) -> Result<LawResult, ObservableError> {
    let field = gamma.field();
    let grp = field.group().clone();
    let e = grp.identity();
    let labels: Vec<VwLabel> = field
        .window()
        .int_sites()
        .flat_map(|x| {
            field.subgroup().members().iter().filter(move |&&h| h != e).map(move |&h| VwLabel::TruncatedV { h, x })
        })
        .collect();
    let elements: Vec<FieldElement<S>> = labels.iter().map(|l| l.element(field)).collect::<Result<_, _>>()?;
    let r = |l: &FieldMonomial| field.render(l);
    Ok(check_law(
        "truncated_v.fixed_by_z",
        Schedule::Exhaustive,
        &[labels.len()],
        |t| compare(&gamma.project_z(&elements[t[0]]), &elements[t[0]], r),
        |t| vec![labels[t[0]].render(&grp)],
    ))
}

/// `z·(δ_{g₁}(1)δ_{g₂}(2)) = (1/|G|)·w_{g₁⁻¹g₂}(3/2)` with `H = G`, on the
/// observable window `[1,2]`.
pub fn verify_chain_formula<S: Scalar>(group: &Arc<FiniteGroup>) -> Result<LawResult, ObservableError> {
    let whole = Subgroup::whole(group);
    let field = FieldAlgebra::<S>::build(&whole, LatticeWindow::new(1, 2)?)?;
    let gamma = GammaAction::new(QuantumDouble::build(&whole).expect("the whole group is normal"), field)?;
    let field = gamma.field();
    let n = group.order();
    let c = S::from_ratio(1, n as i64);
    let r = |l: &FieldMonomial| field.render(l);
    Ok(check_law(
        "chain_formula",
        Schedule::Exhaustive,
        &[n, n],
        |t| {
            let (g1, g2) = (t[0] as Elem, t[1] as Elem);
            let lhs = gamma.project_z(&field.word(&[Gen::delta(1, g1), Gen::delta(2, g2)]).ok()?);
            let w = VwLabel::W { g: group.mul(group.inv(g1), g2), l2: 3 }.element(field).ok()?;
            compare(&lhs, &w.scale(&c), r)
        },
        |t| vec![format!("d[{}]@1d[{}]@2", group.name(t[0] as Elem), group.name(t[1] as Elem))],
    ))
}

/// `Φ`: factor `i` of `A_{2n,2m}` goes to `v` at site `i/2` (even `i`) or
/// `w` at half site `i/2` (odd `i`); tuples go to ordered products.
#[derive(Clone, Debug)]
pub struct PhiMap<S> {
    iterated: IteratedAlgebra<S>,
    field: FieldAlgebra<S>,
}

impl<S: Scalar> PhiMap<S> {
    pub fn new(iterated: IteratedAlgebra<S>, field: FieldAlgebra<S>) -> Result<Self, ObservableError> {
        let (n, m) = iterated.window();
        let w = field.window();
        if n != 2 * w.lo() || m != 2 * w.hi() {
            return Err(ObservableError::WindowMismatch { n, m, window: w.to_string() });
        }
        if !same_subgroup(iterated.subgroup(), field.subgroup()) {
            return Err(ObservableError::SubgroupMismatch);
        }
        Ok(Self { iterated, field })
    }

    /// Builds `A_{2lo,2hi}` and the field algebra on `[lo, hi]`.
    pub fn build(sub: &Subgroup, window: LatticeWindow) -> Result<Self, ObservableError> {
        let iterated = IteratedAlgebra::build(sub, 2 * window.lo(), 2 * window.hi())?;
        Self::new(iterated, FieldAlgebra::build(sub, window)?)
    }

    pub fn iterated(&self) -> &IteratedAlgebra<S> {
        &self.iterated
    }

    pub fn field(&self) -> &FieldAlgebra<S> {
        &self.field
    }

    fn factor_label(&self, slot: usize, x: Elem) -> VwLabel {
        let i = self.iterated.window().0 + slot as i64;
        if i.rem_euclid(2) == 0 {
            VwLabel::V { h: x, x: i / 2 }
        } else {
            VwLabel::W { g: x, l2: i }
        }
    }

    /// `x·Φ(t)`.
    pub fn right_mul(&self, x: &FieldElement<S>, t: &[Elem]) -> FieldElement<S> {
        t.iter().enumerate().fold(x.clone(), |acc, (slot, &e)| {
            let words = self.factor_label(slot, e).words(&self.field).expect("factors lie in the window");
            mul_words(&self.field, &acc, &words)
        })
    }

    pub fn apply_basis(&self, t: &[Elem]) -> FieldElement<S> {
        self.right_mul(&self.field.unit(), t)
    }

    pub fn apply(&self, x: &Element<IteratedAlgebra<S>>) -> FieldElement<S> {
        x.linear(|t| self.apply_basis(t))
    }

    /// Unital, multiplicative, star-compatible, injective, and onto the
    /// `v`/`w` span (checked both ways).
    pub fn verify(&self, vw: &Echelon<FieldMonomial, S>, vw_vectors: &[FieldElement<S>], mode: Mode) -> Report {
        let basis = self.iterated.basis();
        let n = basis.len();
        let schedule = mode.resolve((n as u64).pow(2));
        let images: Vec<FieldElement<S>> = basis.iter().map(|t| self.apply_basis(t)).collect();
        let lin = |x: &Element<IteratedAlgebra<S>>| {
            let mut out = AlgebraElement::zero();
            for (t, c) in x.iter() {
                let i = basis.binary_search(t).expect("product lands in the basis");
                out.add_scaled(&images[i], c);
            }
            out
        };
        let r = |l: &FieldMonomial| self.field.render(l);
        let names = |t: &[usize]| t.iter().map(|&i| self.iterated.render(&basis[i])).collect::<Vec<_>>();
        let mut report = Report::new("phi");
        report.push(LawResult::fact(
            "phi.unit",
            self.apply(&self.iterated.unit()) == self.field.unit(),
            "unit is not mapped to unit",
        ));
        report.push(check_law(
            "phi.multiplicative",
            schedule,
            &[n, n],
            |t| {
                let lhs = lin(&self.iterated.mul_basis(&basis[t[0]], &basis[t[1]]));
                compare(&lhs, &self.right_mul(&images[t[0]], &basis[t[1]]), r)
            },
            names,
        ));
        report.push(check_law(
            "phi.star",
            schedule,
            &[n],
            |t| compare(&lin(&self.iterated.star_basis(&basis[t[0]])), &self.field.star(&images[t[0]]), r),
            names,
        ));
        let mut span = Echelon::new();
        for x in &images {
            if span.insert(x).is_err() {
                break;
            }
        }
        report.push(LawResult::fact("phi.injective", span.rank() == n, format!("rank {} of {n}", span.rank())));
        let into = images.iter().all(|x| vw.contains(x));
        let onto = vw_vectors.iter().all(|x| span.contains(x));
        report.push(LawResult::fact(
            "phi.image",
            into && onto && span.rank() == vw.rank(),
            format!("image in vw-span: {into}, vw-span in image: {onto}, ranks {} and {}", span.rank(), vw.rank()),
        ));
        report.metric("iterated", n as u64);
        report.metric("phi_rank", span.rank() as u64);
        report
    }
}

/// Inclusion of the field algebra of a smaller window.
pub struct FieldInclusion<'a, S> {
    inner: &'a FieldAlgebra<S>,
    outer: &'a FieldAlgebra<S>,
}

impl<'a, S: Scalar> FieldInclusion<'a, S> {
    pub fn new(inner: &'a FieldAlgebra<S>, outer: &'a FieldAlgebra<S>) -> Result<Self, ObservableError> {
        if !same_subgroup(inner.subgroup(), outer.subgroup()) {
            return Err(ObservableError::SubgroupMismatch);
        }
        if !outer.window().contains(&inner.window()) {
            let w = inner.window();
            return Err(ObservableError::WindowMismatch { n: w.lo(), m: w.hi(), window: outer.window().to_string() });
        }
        Ok(Self { inner, outer })
    }

    pub fn apply(&self, x: &FieldElement<S>) -> FieldElement<S> {
        let e = self.inner.group().identity();
        x.linear(|m| self.outer.word(&m.to_word(e)).expect("inner sites lie in the outer window"))
    }
}

/// Embedding of `[lo,hi] ⊂ [lo′,hi′]` on both sides and `Φ∘embed = incl∘Φ`.
pub fn verify_tower<S: Scalar>(
    sub: &Subgroup,
    inner: LatticeWindow,
    outer: LatticeWindow,
    mode: Mode,
) -> Result<Report, ObservableError> {
    let phi_in = PhiMap::<S>::build(sub, inner)?;
    let phi_out = PhiMap::<S>::build(sub, outer)?;
    let emb = WindowEmbedding::new(phi_in.iterated(), phi_out.iterated())?;
    let incl = FieldInclusion::new(phi_in.field(), phi_out.field())?;
    let mut report = emb.verify(mode);
    report.subject = "tower".into();
    let basis = phi_in.iterated().basis();
    let r = |l: &FieldMonomial| phi_out.field().render(l);
    report.push(check_law(
        "tower.phi_commutes",
        Schedule::Exhaustive,
        &[basis.len()],
        |t| {
            let t = &basis[t[0]];
            compare(&phi_out.apply(&emb.apply_basis(t)), &incl.apply(&phi_in.apply_basis(t)), r)
        },
        |t| vec![phi_in.iterated().render(&basis[t[0]])],
    ));
    let fb = phi_in.field().basis();
    let fr = |t: &[usize]| t.iter().map(|&i| phi_in.field().render(&fb[i])).collect::<Vec<_>>();
    let k = fb.len() as u64;
    let schedule = mode.resolve(k * k * k);
    report.push(check_law(
        "tower.field_inclusion",
        schedule,
        &[fb.len(), fb.len()],
        |t| {
            let (a, b) = (AlgebraElement::basis(fb[t[0]].clone()), AlgebraElement::basis(fb[t[1]].clone()));
            let lhs = incl.apply(&phi_in.field().mul(&a, &b));
            compare(&lhs, &phi_out.field().mul(&incl.apply(&a), &incl.apply(&b)), r)
                .or_else(|| compare(&incl.apply(&phi_in.field().star(&a)), &phi_out.field().star(&incl.apply(&a)), r))
        },
        fr,
    ));
    Ok(report)
}

/// The `v`/`w` algebra of `h_sub` inside that of the whole group, both in the
/// field algebra with `H = G`.
pub fn verify_inclusion<S: Scalar>(h_sub: &Subgroup, window: LatticeWindow) -> Result<Report, ObservableError> {
    let whole = Subgroup::whole(h_sub.parent());
    let field = FieldAlgebra::<S>::build(&whole, window)?;
    if let Some((g, h)) = h_sub.normality_witness() {
        let grp = h_sub.parent();
        return Err(ObservableError::OutOfWindow(format!(
            "v generators for a non-normal subgroup ({}, {})",
            grp.name(g),
            grp.name(h)
        )));
    }
    let (small, small_vectors) = ObservableSpace::vw_closure(&field, h_sub)?;
    let (big, _) = ObservableSpace::vw_closure(&field, &whole)?;
    let mut report = Report::new("inclusion");
    let outside = small_vectors.iter().position(|x| !big.contains(x));
    report.push(LawResult::fact(
        "inclusion.contained",
        outside.is_none(),
        format!("vector {outside:?} of the smaller span lies outside"),
    ));
    report.metric("vw_span_h", small.rank() as u64);
    report.metric("vw_span_g", big.rank() as u64);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Qi;

    // S3 indices: 0=e, 1=(12), 2=(13), 3=(23), 4=(123), 5=(132).
    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::symmetric(3))
    }

    fn gamma(sub: &Subgroup, lo: i64, hi: i64) -> GammaAction<Qi> {
        let field = FieldAlgebra::build(sub, LatticeWindow::new(lo, hi).unwrap()).unwrap();
        GammaAction::new(QuantumDouble::build(sub).unwrap(), field).unwrap()
    }

    fn z2() -> Subgroup {
        Subgroup::whole(&Arc::new(FiniteGroup::cyclic(2)))
    }

    #[test]
    fn action_examples() {
        let g = s3();
        let a3 = Subgroup::closure(&g, &[4]);
        let gm = gamma(&a3, 0, 1);
        let f = gm.field();
        let rho = f.rho(1, 5).unwrap();
        assert_eq!(gm.act(&AlgebraElement::basis((4, 1)), &rho), f.rho(1, 4).unwrap());
        assert!(gm.act(&AlgebraElement::basis((5, 1)), &rho).is_zero());
        let d = f.delta(0, 2).unwrap();
        assert_eq!(gm.act(&AlgebraElement::basis((0, 4)), &d), f.delta(0, g.mul(4, 2)).unwrap());
        assert!(gm.act(&AlgebraElement::basis((4, 4)), &d).is_zero());
        let unit = gm.double().unit();
        let x = f.word(&[Gen::delta(1, 3), Gen::rho(3, 4)]).unwrap();
        assert_eq!(gm.act(&unit, &x), x);
    }

    #[test]
    fn projection_examples() {
        let gm = gamma(&Subgroup::closure(&s3(), &[4]), 0, 1);
        let f = gm.field();
        assert!(gm.project_z(&f.rho(1, 4).unwrap()).is_zero());
        let avg = gm.project_z(&f.delta(0, 1).unwrap());
        assert_eq!(avg, f.unit().scale(&Qi::from_ratio(1, 6)));
    }

    #[test]
    fn gamma_laws_on_z2() {
        let r = gamma(&z2(), 0, 1).verify(Mode::Exhaustive);
        assert!(r.passed(), "{:?}", r.failed_laws());
        assert_eq!(r.law("gamma.closed_form").unwrap().checked, 4 * 32);
    }

    #[test]
    fn gamma_laws_on_s3_sampled() {
        let r = gamma(&Subgroup::closure(&s3(), &[4]), 0, 1).verify(Mode::default());
        assert!(r.passed(), "{:?}", r.failed_laws());
        assert!(r.law("gamma.closed_form").unwrap().mode.starts_with("sampled"));
    }

    #[test]
    fn w_in_z2() {
        let f: FieldAlgebra<Qi> = FieldAlgebra::build(&z2(), LatticeWindow::new(0, 1).unwrap()).unwrap();
        let w = VwLabel::W { g: 1, l2: 1 }.element(&f).unwrap();
        let expected = f.word(&[Gen::delta(0, 0), Gen::delta(1, 1)]).unwrap()
            + f.word(&[Gen::delta(0, 1), Gen::delta(1, 0)]).unwrap();
        assert_eq!(w, expected);
        assert!(VwLabel::W { g: 1, l2: 3 }.element(&f).is_err());
    }

    #[test]
    fn vw_relations_and_invariance() {
        for sub in [Subgroup::closure(&s3(), &[4]), z2()] {
            let r = verify_vw_relations(&gamma(&sub, 0, 1)).unwrap();
            assert!(r.passed(), "{:?}", r.failed_laws());
            assert_eq!(r.notes.len(), 1);
        }
    }

    #[test]
    fn truncated_v_is_not_invariant() {
        let res = verify_truncated_v(&gamma(&Subgroup::closure(&s3(), &[4]), 0, 1)).unwrap();
        assert!(!res.passed());
        assert!(!res.failures.is_empty());
    }

    #[test]
    fn chain_formula_for_s3() {
        let res = verify_chain_formula::<Qi>(&s3()).unwrap();
        assert!(res.passed(), "{:?}", res.failures);
        assert_eq!(res.checked, 36);
    }

    #[test]
    fn observable_span_and_phi_for_s3_a3() {
        let a3 = Subgroup::closure(&s3(), &[4]);
        let gm = gamma(&a3, 0, 1);
        let space = ObservableSpace::compute(&gm, &a3).unwrap();
        assert_eq!(space.vw_dim(), 54);
        let sr = space.verify(&gm);
        assert!(sr.passed(), "{:?}", sr.failed_laws());
        let phi = PhiMap::<Qi>::build(&a3, LatticeWindow::new(0, 1).unwrap()).unwrap();
        let r = phi.verify(space.vw_span(), space.vw_vectors(), Mode::Exhaustive);
        assert!(r.passed(), "{:?}", r.failed_laws());
        assert_eq!(r.law("phi.multiplicative").unwrap().checked, 2916);
        assert_eq!(r.metrics["phi_rank"], 54);
    }

    #[test]
    fn phi_factor_formula() {
        let a3 = Subgroup::closure(&s3(), &[4]);
        let phi = PhiMap::<Qi>::build(&a3, LatticeWindow::new(0, 1).unwrap()).unwrap();
        let f = phi.field();
        let (h, g, k) = (4, 3, 5);
        let v0 = VwLabel::V { h, x: 0 }.element(f).unwrap();
        let w = VwLabel::W { g, l2: 1 }.element(f).unwrap();
        let v1 = VwLabel::V { h: k, x: 1 }.element(f).unwrap();
        assert_eq!(phi.apply_basis(&[h, g, k]), f.mul(&f.mul(&v0, &w), &v1));
    }

    #[test]
    fn phi_window_mismatch() {
        let a3 = Subgroup::closure(&s3(), &[4]);
        let it = IteratedAlgebra::<Qi>::build(&a3, 0, 3).unwrap();
        let f = FieldAlgebra::build(&a3, LatticeWindow::new(0, 1).unwrap()).unwrap();
        assert!(matches!(PhiMap::new(it, f), Err(ObservableError::WindowMismatch { .. })));
    }

    #[test]
    fn tower_for_z4() {
        let g = Arc::new(FiniteGroup::cyclic(4));
        let z2 = Subgroup::closure(&g, &[2]);
        let r = verify_tower::<Qi>(
            &z2,
            LatticeWindow::new(0, 1).unwrap(),
            LatticeWindow::new(0, 2).unwrap(),
            Mode::default(),
        )
        .unwrap();
        assert!(r.passed(), "{:?}", r.failed_laws());
    }

    #[test]
    fn trivial_subgroup_inclusion() {
        let r = verify_inclusion::<Qi>(&Subgroup::trivial(&s3()), LatticeWindow::new(0, 1).unwrap()).unwrap();
        assert!(r.passed());
        assert_eq!(r.metrics["vw_span_g"], 216);
    }
}
