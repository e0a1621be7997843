//! Axiom verifiers producing report objects.
//!
//! A law is checked on tuples of basis indices. Each verifier resolves its
//! schedule once from the cube of the relevant basis sizes: exhaustive up to
//! [`EXHAUSTIVE_LIMIT`], otherwise a seeded sample per law.

use std::collections::BTreeMap;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{tensor_square_mul, Element, HopfAlgebra, ModuleAction, PairElement, StructureAlgebra};
use crate::element::AlgebraElement;
use crate::scalar::Scalar;

pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;
pub const DEFAULT_SAMPLES: usize = 500;
pub const DEFAULT_SEED: u64 = 0x5eed;
/// Witnesses kept per law.
pub const MAX_WITNESSES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Mode {
    /// Exhaustive below the threshold, sampled above it.
    Auto {
        seed: u64,
        samples: usize,
    },
    Exhaustive,
    Sampled {
        seed: u64,
        samples: usize,
    },
}

impl Default for Mode {
    fn default() -> Self {
        Mode::Auto { seed: DEFAULT_SEED, samples: DEFAULT_SAMPLES }
    }
}

impl Mode {
    pub fn auto(seed: u64) -> Self {
        Mode::Auto { seed, samples: DEFAULT_SAMPLES }
    }

    pub fn sampled(seed: u64) -> Self {
        Mode::Sampled { seed, samples: DEFAULT_SAMPLES }
    }

    /// Picks the schedule for a verifier whose largest law ranges over
    /// `cube` tuples.
    pub fn resolve(self, cube: u64) -> Schedule {
        match self {
            Mode::Exhaustive => Schedule::Exhaustive,
            Mode::Auto { .. } if cube <= EXHAUSTIVE_LIMIT => Schedule::Exhaustive,
            Mode::Auto { seed, samples } | Mode::Sampled { seed, samples } => Schedule::Sampled { seed, samples },
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Auto { seed, samples } => write!(f, "auto:{seed}:{samples}"),
            Mode::Exhaustive => write!(f, "exhaustive"),
            Mode::Sampled { seed, samples } => write!(f, "sampled:{seed}:{samples}"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    /// `exhaustive`, `auto[:seed[:samples]]` or `sampled[:seed[:samples]]`.
    fn from_str(s: &str) -> Result<Self, String> {
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or_default();
        let mut num = |default: u64| -> Result<u64, String> {
            match parts.next() {
                None => Ok(default),
                Some(p) => p.parse().map_err(|_| format!("bad number {p:?} in mode {s:?}")),
            }
        };
        let mode = match kind {
            "exhaustive" => Mode::Exhaustive,
            "auto" => Mode::Auto { seed: num(DEFAULT_SEED)?, samples: num(DEFAULT_SAMPLES as u64)? as usize },
            "sampled" => Mode::Sampled { seed: num(DEFAULT_SEED)?, samples: num(DEFAULT_SAMPLES as u64)? as usize },
            _ => return Err(format!("unknown mode {s:?}")),
        };
        if parts.next().is_some() {
            return Err(format!("trailing fields in mode {s:?}"));
        }
        Ok(mode)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    Exhaustive,
    Sampled { seed: u64, samples: usize },
}

/// A law violation: basis indices of the tuple, their rendered labels, and
/// the two sides that disagreed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub tuple: Vec<usize>,
    pub labels: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawResult {
    pub law: String,
    pub mode: String,
    pub checked: u64,
    pub failed: u64,
    pub failures: Vec<Witness>,
}

impl LawResult {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    /// A single exact fact, e.g. a rank comparison.
    pub fn fact(law: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        let detail = detail.into();
        let failures = if ok { Vec::new() } else { vec![Witness { tuple: Vec::new(), labels: Vec::new(), detail }] };
        Self { law: law.into(), mode: "exact".into(), checked: 1, failed: u64::from(!ok), failures }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub subject: String,
    pub laws: Vec<LawResult>,
    /// Dimensions, ranks and similar exact counts.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Self { subject: subject.into(), laws: Vec::new(), metrics: BTreeMap::new(), notes: Vec::new() }
    }

    pub fn metric(&mut self, name: impl Into<String>, value: u64) {
        self.metrics.insert(name.into(), value);
    }

    pub fn passed(&self) -> bool {
        self.laws.iter().all(LawResult::passed)
    }

    pub fn law(&self, name: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.law == name)
    }

    pub fn failed_laws(&self) -> Vec<&str> {
        self.laws.iter().filter(|l| !l.passed()).map(|l| l.law.as_str()).collect()
    }

    pub fn push(&mut self, law: LawResult) {
        self.laws.push(law);
    }

    pub fn extend(&mut self, other: Report) {
        self.laws.extend(other.laws);
        self.metrics.extend(other.metrics);
        self.notes.extend(other.notes);
    }
}

fn law_seed(seed: u64, law: &str) -> u64 {
    // FNV-1a over the law name so each law draws its own tuples.
    law.bytes().fold(seed ^ 0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

fn decode(mut index: u64, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in dims.iter().enumerate().rev() {
        out[slot] = (index % d as u64) as usize;
        index /= d as u64;
    }
    out
}

/// The tuples a law is checked on, in report order.
pub fn schedule_tuples(law: &str, schedule: Schedule, dims: &[usize]) -> (String, Vec<Vec<usize>>) {
    let total = dims.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d as u64)).unwrap_or(u64::MAX);
    match schedule {
        Schedule::Sampled { seed, samples } if total > samples as u64 => {
            let mut rng = ChaCha8Rng::seed_from_u64(law_seed(seed, law));
            let tuples = (0..samples).map(|_| dims.iter().map(|&d| rng.gen_range(0..d)).collect()).collect();
            (format!("sampled(seed={seed}, n={samples})"), tuples)
        }
        _ => ("exhaustive".to_owned(), (0..total).map(|i| decode(i, dims)).collect()),
    }
}

/// Checks `test` on every scheduled tuple. `test` returns a description of
/// the discrepancy on failure; `render` names the tuple's basis labels.
pub fn check_law<F, R>(law: &str, schedule: Schedule, dims: &[usize], test: F, render: R) -> LawResult
where
    F: Fn(&[usize]) -> Option<String> + Sync,
    R: Fn(&[usize]) -> Vec<String>,
{
    let (mode, tuples) =
        if dims.contains(&0) { ("exhaustive".to_owned(), Vec::new()) } else { schedule_tuples(law, schedule, dims) };
    let outcomes: Vec<Option<String>> = tuples.par_iter().map(|t| test(t)).collect();
    let mut failed = 0;
    let mut failures = Vec::new();
    for (t, outcome) in tuples.iter().zip(outcomes) {
        if let Some(detail) = outcome {
            failed += 1;
            if failures.len() < MAX_WITNESSES {
                failures.push(Witness { tuple: t.clone(), labels: render(t), detail });
            }
        }
    }
    LawResult { law: law.to_owned(), mode, checked: tuples.len() as u64, failed, failures }
}

const DETAIL_CAP: usize = 240;

fn clip(s: String) -> String {
    if s.chars().count() <= DETAIL_CAP {
        s
    } else {
        let mut out: String = s.chars().take(DETAIL_CAP).collect();
        out.push('…');
        out
    }
}

/// `None` when equal, otherwise a rendered `lhs != rhs`.
pub fn compare<L: crate::element::Label, S: Scalar>(
    lhs: &AlgebraElement<L, S>,
    rhs: &AlgebraElement<L, S>,
    render: impl Fn(&L) -> String,
) -> Option<String> {
    if lhs == rhs {
        None
    } else {
        Some(clip(format!("{} != {}", lhs.render_with(&render), rhs.render_with(&render))))
    }
}

fn cube(dims: &[usize]) -> u64 {
    dims.iter().fold(1u64, |acc, &d| acc.saturating_mul(d as u64))
}

fn first_outside<A: StructureAlgebra>(alg: &A, x: &Element<A>) -> Option<String> {
    x.labels().find(|l| !alg.contains(l)).map(|l| format!("label {} outside the basis", alg.render(l)))
}

fn render_pair<A: StructureAlgebra>(alg: &A) -> impl Fn(&(A::Label, A::Label)) -> String + '_ {
    move |(a, b)| format!("{}⊗{}", alg.render(a), alg.render(b))
}

/// Algebra and star axioms on basis tuples.
pub fn verify_star_algebra<A: StructureAlgebra>(alg: &A, mode: Mode) -> Report {
    let basis = alg.basis();
    let n = basis.len();
    let schedule = mode.resolve(cube(&[n, n, n]));
    let el = |i: usize| AlgebraElement::<A::Label, A::Scalar>::basis(basis[i].clone());
    let names = |t: &[usize]| t.iter().map(|&i| alg.render(&basis[i])).collect::<Vec<_>>();
    let r = |l: &A::Label| alg.render(l);
    let mut report = Report::new("star-algebra");

    report.push(LawResult::fact("closure.unit", first_outside(alg, &alg.unit()).is_none(), "unit leaves the basis"));
    report.push(check_law(
        "closure.mul",
        schedule,
        &[n, n],
        |t| first_outside(alg, &alg.mul_basis(&basis[t[0]], &basis[t[1]])),
        names,
    ));
    report.push(check_law(
        "closure.star",
        schedule,
        &[n],
        |t| first_outside(alg, &alg.star_basis(&basis[t[0]])),
        names,
    ));
    report.push(check_law(
        "associativity",
        schedule,
        &[n, n, n],
        |t| {
            let (a, b, c) = (el(t[0]), el(t[1]), el(t[2]));
            compare(&alg.mul(&alg.mul(&a, &b), &c), &alg.mul(&a, &alg.mul(&b, &c)), r)
        },
        names,
    ));
    let unit = alg.unit();
    report.push(check_law(
        "unit",
        schedule,
        &[n],
        |t| {
            let x = el(t[0]);
            compare(&alg.mul(&unit, &x), &x, r).or_else(|| compare(&alg.mul(&x, &unit), &x, r))
        },
        names,
    ));
    report.push(check_law(
        "star.involution",
        schedule,
        &[n],
        |t| {
            let x = el(t[0]);
            compare(&alg.star(&alg.star(&x)), &x, r)
        },
        names,
    ));
    report.push(check_law(
        "star.antimultiplicative",
        schedule,
        &[n, n],
        |t| {
            let (a, b) = (el(t[0]), el(t[1]));
            compare(&alg.star(&alg.mul(&a, &b)), &alg.mul(&alg.star(&b), &alg.star(&a)), r)
        },
        names,
    ));
    let c = A::Scalar::imag_unit().unwrap_or_else(|| A::Scalar::from_ratio(1, 2)) + A::Scalar::from_ratio(1, 3);
    report.push(check_law(
        "star.conjugate_linear",
        schedule,
        &[n, n],
        |t| {
            let (a, b) = (el(t[0]), el(t[1]));
            let lhs = alg.star(&(a.scale(&c) + b.clone()));
            let rhs = alg.star(&a).scale(&c.conj()) + alg.star(&b);
            compare(&lhs, &rhs, r)
        },
        names,
    ));
    report
}

fn triple_left<L: Clone>(((a, b), c): &((L, L), L)) -> (L, L, L) {
    (a.clone(), b.clone(), c.clone())
}

/// Coalgebra, bialgebra, antipode and star-compatibility laws.
pub fn verify_hopf<A: HopfAlgebra>(alg: &A, mode: Mode) -> Report {
    let basis = alg.basis();
    let n = basis.len();
    let schedule = mode.resolve(cube(&[n, n, n]));
    let el = |i: usize| AlgebraElement::<A::Label, A::Scalar>::basis(basis[i].clone());
    let names = |t: &[usize]| t.iter().map(|&i| alg.render(&basis[i])).collect::<Vec<_>>();
    let r = |l: &A::Label| alg.render(l);
    let rp = render_pair(alg);
    let r3 =
        |(a, b, c): &(A::Label, A::Label, A::Label)| format!("{}⊗{}⊗{}", alg.render(a), alg.render(b), alg.render(c));
    let mut report = Report::new("hopf");

    report.push(check_law(
        "closure.comul",
        schedule,
        &[n],
        |t| {
            alg.comul_basis(&basis[t[0]])
                .labels()
                .find(|(a, b)| !alg.contains(a) || !alg.contains(b))
                .map(|p| format!("label {} outside the basis", rp(p)))
        },
        names,
    ));
    report.push(check_law(
        "closure.antipode",
        schedule,
        &[n],
        |t| first_outside(alg, &alg.antipode_basis(&basis[t[0]])),
        names,
    ));
    report.push(check_law(
        "coassociativity",
        schedule,
        &[n],
        |t| {
            let d = alg.comul_basis(&basis[t[0]]);
            let left: AlgebraElement<_, A::Scalar> =
                d.linear(|(a, b)| alg.comul_basis(a).tensor(&AlgebraElement::basis(b.clone())).map_labels(triple_left));
            let right: AlgebraElement<_, A::Scalar> = d.linear(|(a, b)| {
                AlgebraElement::basis(a.clone())
                    .tensor(&alg.comul_basis(b))
                    .map_labels(|(x, (y, z))| (x.clone(), y.clone(), z.clone()))
            });
            compare(&left, &right, r3)
        },
        names,
    ));
    report.push(check_law(
        "counit",
        schedule,
        &[n],
        |t| {
            let x = el(t[0]);
            let d = alg.comul(&x);
            let left = d.linear(|(a, b)| AlgebraElement::term(b.clone(), alg.counit_basis(a)));
            let right = d.linear(|(a, b)| AlgebraElement::term(a.clone(), alg.counit_basis(b)));
            compare(&left, &x, r).or_else(|| compare(&right, &x, r))
        },
        names,
    ));
    let unit = alg.unit();
    report.push(LawResult::fact("comul.unit", alg.comul(&unit) == unit.tensor(&unit), "Δ(1) != 1⊗1"));
    report.push(check_law(
        "comul.multiplicative",
        schedule,
        &[n, n],
        |t| {
            let (a, b) = (el(t[0]), el(t[1]));
            let lhs = alg.comul(&alg.mul(&a, &b));
            let rhs = tensor_square_mul(alg, &alg.comul(&a), &alg.comul(&b));
            compare(&lhs, &rhs, &rp)
        },
        names,
    ));
    report.push(LawResult::fact("counit.unit", alg.counit(&unit).is_one(), "ε(1) != 1"));
    report.push(check_law(
        "counit.multiplicative",
        schedule,
        &[n, n],
        |t| {
            let (a, b) = (el(t[0]), el(t[1]));
            let lhs = alg.counit(&alg.mul(&a, &b));
            let rhs = alg.counit(&a) * alg.counit(&b);
            (lhs != rhs).then(|| format!("{} != {}", lhs.render(), rhs.render()))
        },
        names,
    ));
    report.push(check_law(
        "antipode",
        schedule,
        &[n],
        |t| {
            let x = el(t[0]);
            let d = alg.comul(&x);
            let target = unit.scale(&alg.counit(&x));
            let left: Element<A> =
                d.linear(|(a, b)| alg.mul(&alg.antipode_basis(a), &AlgebraElement::basis(b.clone())));
            let right: Element<A> =
                d.linear(|(a, b)| alg.mul(&AlgebraElement::basis(a.clone()), &alg.antipode_basis(b)));
            compare(&left, &target, r).or_else(|| compare(&right, &target, r))
        },
        names,
    ));
    report.push(check_law(
        "comul.star",
        schedule,
        &[n],
        |t| {
            let x = el(t[0]);
            let lhs = alg.comul(&alg.star(&x));
            let rhs: PairElement<A> = alg.comul(&x).antilinear(|(a, b)| alg.star_basis(a).tensor(&alg.star_basis(b)));
            compare(&lhs, &rhs, &rp)
        },
        names,
    ));
    report
}

/// Module and module-algebra laws of an action.
pub fn verify_module_algebra<M: ModuleAction>(act: &M, mode: Mode) -> Report {
    let h = act.acting();
    let x = act.space();
    let hb = h.basis();
    let xb = x.basis();
    let (n, m) = (hb.len(), xb.len());
    let schedule = mode.resolve(cube(&[n, m, m]));
    let hel = |i: usize| AlgebraElement::basis(hb[i].clone());
    let xel = |i: usize| AlgebraElement::basis(xb[i].clone());
    let r = |l: &<M::Space as StructureAlgebra>::Label| x.render(l);
    let names_hxx = |t: &[usize]| vec![h.render(&hb[t[0]]), x.render(&xb[t[1]]), x.render(&xb[t[2]])];
    let names_hx = |t: &[usize]| vec![h.render(&hb[t[0]]), x.render(&xb[t[1]])];
    let mut report = Report::new("module-algebra");

    report.push(check_law(
        "closure.action",
        schedule,
        &[n, m],
        |t| first_outside(x, &act.act_basis(&hb[t[0]], &xb[t[1]])),
        names_hx,
    ));
    report.push(check_law(
        "module_algebra.product",
        schedule,
        &[n, m, m],
        |t| {
            let (f, g) = (xel(t[1]), xel(t[2]));
            let lhs = act.act(&hel(t[0]), &x.mul(&f, &g));
            let rhs = h
                .comul_basis(&hb[t[0]])
                .linear(|(a1, a2)| x.mul(&act.act_basis(a1, &xb[t[1]]), &act.act_basis(a2, &xb[t[2]])));
            compare(&lhs, &rhs, r)
        },
        names_hxx,
    ));
    let unit = x.unit();
    report.push(check_law(
        "module_algebra.unit",
        schedule,
        &[n],
        |t| {
            let a = hel(t[0]);
            compare(&act.act(&a, &unit), &unit.scale(&h.counit(&a)), r)
        },
        |t| vec![h.render(&hb[t[0]])],
    ));
    report.push(check_law(
        "action.associativity",
        schedule,
        &[n, n, m],
        |t| {
            let (a, b, f) = (hel(t[0]), hel(t[1]), xel(t[2]));
            compare(&act.act(&h.mul(&a, &b), &f), &act.act(&a, &act.act(&b, &f)), r)
        },
        |t| vec![h.render(&hb[t[0]]), h.render(&hb[t[1]]), x.render(&xb[t[2]])],
    ));
    let hunit = h.unit();
    report.push(check_law(
        "action.unit",
        schedule,
        &[m],
        |t| {
            let f = xel(t[0]);
            compare(&act.act(&hunit, &f), &f, r)
        },
        |t| vec![x.render(&xb[t[0]])],
    ));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ArrowAction, FunctionAlgebra, GroupAlgebra, TrivialAction};
    use crate::group::{FiniteGroup, Subgroup};
    use crate::scalar::Qi;
    use std::sync::Arc;

    #[test]
    fn mode_parsing() {
        assert_eq!("exhaustive".parse::<Mode>().unwrap(), Mode::Exhaustive);
        assert_eq!("sampled:7".parse::<Mode>().unwrap(), Mode::Sampled { seed: 7, samples: 500 });
        assert_eq!("auto:1:20".parse::<Mode>().unwrap(), Mode::Auto { seed: 1, samples: 20 });
        assert!("sampled:x".parse::<Mode>().is_err());
        assert!("fast".parse::<Mode>().is_err());
    }

    #[test]
    fn schedule_threshold() {
        assert_eq!(Mode::auto(3).resolve(1_000_000), Schedule::Exhaustive);
        assert_eq!(Mode::auto(3).resolve(1_000_001), Schedule::Sampled { seed: 3, samples: 500 });
        let (mode, tuples) = schedule_tuples("x", Schedule::Sampled { seed: 3, samples: 500 }, &[972, 972, 972]);
        assert!(mode.starts_with("sampled"));
        assert_eq!(tuples.len(), 500);
        assert_eq!(tuples, schedule_tuples("x", Schedule::Sampled { seed: 3, samples: 500 }, &[972, 972, 972]).1);
    }

    #[test]
    fn group_algebra_of_z4_is_a_hopf_star_algebra() {
        let z4 = Arc::new(FiniteGroup::cyclic(4));
        let a: GroupAlgebra<Qi> = GroupAlgebra::of_group(&z4);
        assert!(verify_star_algebra(&a, Mode::Exhaustive).passed());
        assert!(verify_hopf(&a, Mode::Exhaustive).passed());
        let assoc = verify_star_algebra(&a, Mode::Exhaustive);
        assert_eq!(assoc.law("associativity").unwrap().checked, 64);
    }

    #[test]
    fn dual_of_s3_is_a_hopf_star_algebra() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let f: FunctionAlgebra<Qi> = FunctionAlgebra::of_group(&s3);
        assert!(verify_star_algebra(&f, Mode::Exhaustive).passed());
        assert!(verify_hopf(&f, Mode::Exhaustive).passed());
    }

    #[test]
    fn trivial_action_is_a_module_algebra() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let act = TrivialAction::new(GroupAlgebra::<Qi>::of_group(&s3), FunctionAlgebra::<Qi>::of_group(&s3));
        assert!(verify_module_algebra(&act, Mode::Exhaustive).passed());
    }

    #[test]
    fn arrow_action_fails_off_the_whole_group() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let full: ArrowAction<Qi> = ArrowAction::new(Subgroup::whole(&s3));
        assert!(verify_module_algebra(&full, Mode::Exhaustive).passed());
        let half: ArrowAction<Qi> = ArrowAction::new(Subgroup::closure(&s3, &[1]));
        let report = verify_module_algebra(&half, Mode::Exhaustive);
        assert!(!report.law("action.associativity").unwrap().passed());
    }
}
