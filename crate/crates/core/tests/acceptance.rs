//! Acceptance suite: one line per criterion. Runs without the libtest
//! harness so the lines always show.

use std::sync::Arc;
use std::time::{Duration, Instant};

use gspin_core::double::QuantumDouble;
use gspin_core::field::{FieldAlgebra, LatticeRepresentation, LatticeWindow};
use gspin_core::observable::{
    verify_chain_formula, verify_inclusion, verify_tower, verify_truncated_v, verify_vw_relations, GammaAction,
    ObservableSpace, PhiMap,
};
use gspin_core::repr::{verify_representation, WindowRepresentation};
use gspin_core::suite::{run_suite, RunConfig, Status, Suite};
use gspin_core::twisted::{
    standard_twists, verify_bracketing, verify_smash_recovery, verify_standard_hexagons, verify_twisting_map,
    AdjointAction,
};
use gspin_core::verify::{verify_hopf, verify_star_algebra, Mode, Report};
use gspin_core::{FiniteGroup, Qi, StructureAlgebra, Subgroup};

type Check = Result<String, String>;

fn s3() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::symmetric(3))
}

fn a3() -> Subgroup {
    Subgroup::closure(&s3(), &[4])
}

fn z4_z2() -> Subgroup {
    Subgroup::closure(&Arc::new(FiniteGroup::cyclic(4)), &[2])
}

fn window(n: i64, m: i64) -> LatticeWindow {
    LatticeWindow::new(n, m).unwrap()
}

fn instances() -> Vec<(&'static str, Subgroup)> {
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let d4 = Arc::new(FiniteGroup::dihedral(4));
    let q8 = Arc::new(FiniteGroup::quaternion());
    let minus_one = q8.element("-1").unwrap();
    vec![
        ("(Z2,Z2)", Subgroup::whole(&z2)),
        ("(Z4,Z2)", z4_z2()),
        ("(S3,A3)", a3()),
        ("(D4,Z(D4))", Subgroup::center(&d4)),
        ("(Q8,{±1})", Subgroup::closure(&q8, &[minus_one])),
        ("(S3,S3)", Subgroup::whole(&s3())),
        ("(S3,{e})", Subgroup::trivial(&s3())),
    ]
}

fn passed(r: &Report) -> Result<(), String> {
    if r.passed() {
        Ok(())
    } else {
        let w = r.laws.iter().find(|l| !l.passed()).and_then(|l| l.failures.first()).map(|w| w.detail.clone());
        Err(format!("{} failed {:?}: {:?}", r.subject, r.failed_laws(), w))
    }
}

fn exhaustive(r: &Report) -> Result<(), String> {
    match r.laws.iter().find(|l| l.mode != "exhaustive" && l.mode != "exact") {
        Some(l) => Err(format!("{}: law {} ran as {}", r.subject, l.law, l.mode)),
        None => Ok(()),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.1?}, limit {limit:?}"))
}

fn metric(r: &Report, name: &str) -> u64 {
    r.metrics.get(name).copied().unwrap_or(0)
}

fn criterion_1() -> Check {
    let mut out = Vec::new();
    for (name, sub) in instances() {
        let start = Instant::now();
        let d = QuantumDouble::<Qi>::build(&sub).map_err(|e| format!("{name}: {e}"))?;
        let mut r = verify_star_algebra(&d, Mode::Exhaustive);
        r.extend(verify_hopf(&d, Mode::Exhaustive));
        r.push(d.verify_integral());
        r.subject = name.into();
        passed(&r)?;
        exhaustive(&r)?;
        within(start, Duration::from_secs(30))?;
        out.push(format!("{name} dim {}", d.dim()));
    }
    Ok(out.join(", "))
}

fn criterion_2() -> Check {
    let cfg = RunConfig::new("S3", &["(12)"], [0, 1]).with_suites(&[Suite::DoubleNegative]);
    let a = run_suite(&cfg).map_err(|e| e.to_string())?;
    let b = run_suite(&cfg).map_err(|e| e.to_string())?;
    let outcome = a.suite(Suite::DoubleNegative).unwrap();
    ensure(outcome.status == Status::ExpectedFailure && a.overall, || format!("status {:?}", outcome.status))?;
    let failing: Vec<_> = outcome.reports.iter().flat_map(|r| r.laws.iter()).filter(|l| !l.passed()).collect();
    ensure(failing.iter().any(|l| !l.failures.is_empty()), || "no witness recorded".into())?;
    ensure(a.to_json() == b.to_json(), || "witnesses differ between runs".into())?;
    let first = &failing[0];
    Ok(format!("{} fails, e.g. at {}", first.law, first.failures[0].labels.join(" ⊗ ")))
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let sub = a3();
    let mut twists = 0;
    for t in standard_twists::<Qi>(&sub, -2, 4) {
        let r = verify_twisting_map(&t, Mode::Exhaustive);
        passed(&r)?;
        exhaustive(&r)?;
        twists += 1;
    }
    let hex = verify_standard_hexagons::<Qi>(&sub, -2, 4, Mode::Exhaustive);
    passed(&hex)?;
    exhaustive(&hex)?;
    ensure(hex.laws.len() == 35, || format!("{} hexagon triples", hex.laws.len()))?;
    for n in [0, 1] {
        let r = verify_bracketing::<Qi>(&sub, n).map_err(|e| e.to_string())?;
        passed(&r)?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{twists} twists, {} hexagon triples, bracketing on A_{{0,2}} and A_{{1,3}}", hex.laws.len()))
}

fn criterion_4() -> Check {
    let d = QuantumDouble::<Qi>::build(&a3()).map_err(|e| e.to_string())?;
    let act = AdjointAction::new(d);
    let module_dim = gspin_core::GroupAlgebra::<Qi>::new(a3()).dim();
    ensure(module_dim == 3, || format!("module dim {module_dim}"))?;
    let r = verify_smash_recovery(act, Mode::Exhaustive);
    passed(&r)?;
    exhaustive(&r)?;
    let mul = r.law("smash.mul").ok_or("smash.mul missing")?;
    Ok(format!("smash.mul equal on {} basis pairs", mul.checked))
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let mut out = Vec::new();
    for ((a, b), rank) in [((0, 2), 54), ((1, 3), 108)] {
        let rep = WindowRepresentation::<Qi>::new(&a3(), a, b).map_err(|e| e.to_string())?;
        let r = verify_representation(&rep, Mode::Exhaustive);
        passed(&r)?;
        ensure(metric(&r, "rank") == rank, || format!("pi[{a},{b}] rank {}", metric(&r, "rank")))?;
        ensure(r.law("rep.star").is_some() && r.law("rep.faithful").is_some(), || "laws missing".into())?;
        out.push(format!("pi[{a},{b}] rank {rank}"));
    }
    within(start, Duration::from_secs(60))?;
    Ok(out.join(", "))
}

fn criterion_6() -> Check {
    let z2 = Subgroup::whole(&Arc::new(FiniteGroup::cyclic(2)));
    let f = FieldAlgebra::<Qi>::build(&z2, window(0, 1)).map_err(|e| e.to_string())?;
    let rep = LatticeRepresentation::new(&f).map_err(|e| e.to_string())?;
    let rel = rep.verify_relations();
    passed(&rel)?;
    exhaustive(&rel)?;
    let r = verify_star_algebra(&f, Mode::Exhaustive);
    passed(&r)?;
    exhaustive(&r)?;
    let g = FieldAlgebra::<Qi>::build(&a3(), window(0, 1)).map_err(|e| e.to_string())?;
    let r = verify_star_algebra(&g, Mode::default());
    passed(&r)?;
    for law in ["associativity", "star.involution", "star.antimultiplicative"] {
        let l = r.law(law).ok_or(format!("{law} missing"))?;
        ensure(l.mode.starts_with("sampled") && l.checked == 500, || format!("{law}: {} x{}", l.mode, l.checked))?;
    }
    Ok(format!("{} lattice relation families on (Z2,Z2), 500 samples on (S3,A3) dim {}", rel.laws.len(), g.dim()))
}

fn criterion_7() -> Check {
    let z2 = Subgroup::whole(&Arc::new(FiniteGroup::cyclic(2)));
    for (sub, mode) in [(z2, Mode::Exhaustive), (a3(), Mode::default())] {
        let g = GammaAction::new(
            QuantumDouble::<Qi>::build(&sub).map_err(|e| e.to_string())?,
            FieldAlgebra::build(&sub, window(0, 1)).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        let r = g.verify(mode);
        passed(&r)?;
        for law in ["gamma.closed_form", "project_z.idempotent"] {
            ensure(r.law(law).is_some(), || format!("{law} missing"))?;
        }
        let vw = verify_vw_relations(&g).map_err(|e| e.to_string())?;
        passed(&vw)?;
        ensure(vw.law("vw.fixed_by_z").is_some(), || "vw.fixed_by_z missing".into())?;
    }
    let chain = verify_chain_formula::<Qi>(&s3()).map_err(|e| e.to_string())?;
    ensure(chain.passed() && chain.checked == 36, || format!("chain formula {chain:?}"))?;
    Ok("closed form = coproduct extension, z fixes v and w, chain formula on 36 pairs".into())
}

fn phi_check(sub: &Subgroup, n: i64, m: i64, dim: u64) -> Result<Report, String> {
    let phi = PhiMap::<Qi>::build(sub, window(n, m)).map_err(|e| e.to_string())?;
    let (span, vectors) = ObservableSpace::vw_closure(phi.field(), sub).map_err(|e| e.to_string())?;
    let r = phi.verify(&span, &vectors, Mode::Exhaustive);
    passed(&r)?;
    exhaustive(&r)?;
    ensure(metric(&r, "iterated") == dim && metric(&r, "phi_rank") == dim, || format!("metrics {:?}", r.metrics))?;
    Ok(r)
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let r = phi_check(&a3(), 0, 1, 54)?;
    let (mul, star) = (r.law("phi.multiplicative").unwrap().checked, r.law("phi.star").unwrap().checked);
    ensure(mul == 54 * 54 && star == 54, || format!("checked {mul} pairs, {star} stars"))?;
    phi_check(&z4_z2(), 0, 2, 128)?;
    within(start, Duration::from_secs(300))?;
    Ok(format!("(S3,A3) rank 54 on {mul} pairs, (Z4,Z2) on [0,2] rank 128"))
}

fn criterion_9() -> Check {
    let r = verify_tower::<Qi>(&z4_z2(), window(0, 1), window(0, 2), Mode::default()).map_err(|e| e.to_string())?;
    passed(&r)?;
    for law in
        ["embedding.unital", "embedding.injective", "embedding.multiplicative", "embedding.star", "tower.phi_commutes"]
    {
        ensure(r.law(law).is_some(), || format!("{law} missing"))?;
    }
    Ok(format!("{} inner basis elements commute", r.law("tower.phi_commutes").unwrap().checked))
}

fn criterion_10() -> Check {
    let r = verify_inclusion::<Qi>(&a3(), window(0, 1)).map_err(|e| e.to_string())?;
    passed(&r)?;
    let (h, g) = (metric(&r, "vw_span_h"), metric(&r, "vw_span_g"));
    ensure(h == 54 && g == 216, || format!("spans {h} and {g}"))?;
    Ok(format!("span {h} ⊆ span {g}"))
}

fn criterion_11() -> Check {
    let g = GammaAction::new(
        QuantumDouble::<Qi>::build(&a3()).map_err(|e| e.to_string())?,
        FieldAlgebra::build(&a3(), window(0, 1)).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let law = verify_truncated_v(&g).map_err(|e| e.to_string())?;
    ensure(!law.passed() && !law.failures.is_empty(), || "truncated v is invariant".into())?;
    Ok(format!("expected failure at {}", law.failures[0].labels.join(", ")))
}

fn criterion_12() -> Check {
    let cfg = RunConfig::new("S3", &["(123)"], [0, 1]).with_mode("sampled:4242");
    let a = run_suite(&cfg).map_err(|e| e.to_string())?.to_json();
    let b = run_suite(&cfg).map_err(|e| e.to_string())?.to_json();
    ensure(a == b, || "JSON reports differ".into())?;
    Ok(format!("{} identical bytes", a.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("double Hopf axioms on seven instances", criterion_1),
        ("non-normal forced double fails as expected", criterion_2),
        ("twists, hexagons and bracketing", criterion_3),
        ("smash product recovery", criterion_4),
        ("faithful window representations", criterion_5),
        ("field algebra relations and star algebra", criterion_6),
        ("action and observable identities", criterion_7),
        ("Phi isomorphism onto the vw-span", criterion_8),
        ("tower consistency", criterion_9),
        ("observable inclusion", criterion_10),
        ("truncated v fails invariance", criterion_11),
        ("deterministic JSON", criterion_12),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let t = start.elapsed();
        match &result {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}) [{t:.1?}]", i + 1),
            Err(e) => {
                println!("criterion {:>2} FAIL  {name}: {e} [{t:.1?}]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 12 criteria pass");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
