//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines come out in order and
//! uncaptured. Exits non-zero when any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use pag_cli::analysis::{AnalysisEntry, Output};
use pag_cli::scenario::{build, Analysis, Command, Scenario};
use pag_cli::{analyze, fixtures, report};
use pag_core::gauge::{Descriptor, Separation, Verdict};
use pag_core::presymplectic::{MixedGroup, PAGMorphism, PresymplecticGroup};
use pag_core::scalar::rat;
use pag_core::weyl::{ccr_push, CyclotomicScalar, WeylElement};
use pag_core::{RatMatrix, Rational};
use rand::Rng;

use common::{TestRng, WindowGroup};

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, Box<dyn Fn() -> Outcome>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run_text(text: &str, name: &str, filter: Option<Command>) -> Result<Vec<AnalysisEntry>, String> {
    analyze(text, name, filter)
        .map(|r| r.analyses)
        .map_err(|e| format!("{name}: {e}"))
}

fn fixture(name: &str) -> &'static str {
    fixtures::get(name).expect("bundled fixture")
}

fn unverified(name: &str, e: &AnalysisEntry) -> String {
    let failed: Vec<&str> = e
        .verification
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.check.as_str())
        .collect();
    format!("{name} analysis {}: failed checks {failed:?}", e.index)
}

fn criterion_1() -> Outcome {
    let cases = [
        ("prop48_m2", (2, 1)),
        ("prop48_m3", (1, 0)),
        ("prop48_m4", (1, 0)),
    ];
    let mut seen = Vec::new();
    for (name, dims) in cases {
        let entries = run_text(fixture(name), name, Some(Command::Locality))?;
        ensure(!entries.is_empty(), || {
            format!("{name}: no locality analysis")
        })?;
        for e in &entries {
            let Output::Locality(r) = &e.result else {
                return Err(format!("{name}: unexpected output"));
            };
            ensure(r.dims == dims, || {
                format!("{name}: dims {:?}, expected {dims:?}", r.dims)
            })?;
            ensure(r.verdict == Verdict::NotInjective, || {
                format!("{name}: verdict {}", r.verdict)
            })?;
            ensure(e.verified(), || unverified(name, e))?;
            seen.push(format!("{name} {:?}", r.dims));
        }
    }
    let m4: Scenario = Scenario::parse(fixture("prop48_m4")).map_err(|e| e.to_string())?;
    ensure(m4.dim_m == 4, || "prop48_m4 is not four-dimensional".into())?;
    Ok(format!("{} NOT injective", seen.join(", ")))
}

fn locality_of(
    s: &Scenario,
) -> Result<(Box<pag_core::gauge::LocalityReport>, AnalysisEntry), String> {
    let text = common::to_json(s);
    let mut entries = run_text(&text, &s.name, None)?;
    let e = entries
        .pop()
        .ok_or_else(|| format!("{}: no analysis", s.name))?;
    match &e.result {
        Output::Locality(r) => Ok((r.clone(), e)),
        _ => Err(format!("{}: unexpected output", s.name)),
    }
}

fn criterion_2(rng: &mut TestRng) -> Outcome {
    let n = 50;
    for i in 0..n {
        let s = common::connected_2d(rng, i);
        let (r, e) = locality_of(&s)?;
        ensure(r.verdict == Verdict::Injective, || {
            format!("{}: verdict {}\n{}", s.name, r.verdict, common::to_json(&s))
        })?;
        ensure(e.verified(), || unverified(&s.name, &e))?;
    }
    Ok(format!("{n} connected morphisms, all injective"))
}

fn criterion_3(rng: &mut TestRng) -> Outcome {
    let n = 200;
    let mut tally: BTreeMap<(usize, bool), usize> = BTreeMap::new();
    for i in 0..n {
        let m = 2 + i % 3;
        let s = common::library_morphism(rng, m, i);
        let (r, e) = locality_of(&s)?;
        ensure(r.criteria_agree, || {
            format!(
                "{}: model {} vs push-forward {}\n{}",
                s.name,
                r.model_injective,
                r.pushforward_injective,
                common::to_json(&s)
            )
        })?;
        ensure(r.naturality, || {
            format!("{}: C-block differs from the push-forward", s.name)
        })?;
        ensure(e.verified(), || unverified(&s.name, &e))?;
        *tally.entry((m, r.model_injective)).or_default() += 1;
    }
    let parts: Vec<String> = (2..=4)
        .map(|m| {
            format!(
                "m={m}: {} injective / {} not",
                tally.get(&(m, true)).unwrap_or(&0),
                tally.get(&(m, false)).unwrap_or(&0)
            )
        })
        .collect();
    Ok(format!("{n} morphisms agree ({})", parts.join(", ")))
}

fn criterion_4() -> Outcome {
    let mut lines = Vec::new();
    for name in ["thm410_m3", "thm410_m2"] {
        let text = fixture(name);
        let scenario = Scenario::parse(text).map_err(|e| e.to_string())?;
        let built = build(&scenario).map_err(|f| format!("{name}: {f:?}"))?;
        let entries = run_text(text, name, Some(Command::Nogo))?;
        ensure(entries.len() == 1, || {
            format!("{name}: expected one no-go analysis")
        })?;
        let e = &entries[0];
        let Output::Nogo(c) = &e.result else {
            return Err(format!("{name}: unexpected output"));
        };
        ensure(e.verified(), || unverified(name, e))?;
        let (f1, f2) = scenario
            .analyses
            .iter()
            .find_map(|a| match a {
                Analysis::Nogo { f1, f2 } => Some((f1.clone(), f2.clone())),
                _ => None,
            })
            .expect("one no-go analysis");
        let f1 = built.morphism(&f1).expect("validated");
        let f2 = built.morphism(&f2).expect("validated");
        let xi3 = f1.source().pag();
        let xi1 = f1.target().pag();

        let kernel = c.kernel.generators().columns();
        ensure(!kernel.is_empty(), || format!("{name}: trivial kernel"))?;
        ensure(
            c.kernel_in_radical && xi3.radical().contains_group(&c.kernel),
            || format!("{name}: kernel outside the radical"),
        )?;
        for k in &kernel {
            ensure(f2.induced().apply(k).iter().all(Zero::is_zero), || {
                format!("{name}: PS(f2) k != 0")
            })?;
        }
        let ob = c
            .obstruction
            .as_ref()
            .ok_or_else(|| format!("{name}: no obstruction"))?;
        let k: Vec<Rational> =
            ob.k.iter()
                .map(|s| pag_core::scalar::parse_rational(s).expect("rational"))
                .collect();
        ensure(c.kernel.contains(&k), || {
            format!("{name}: k not in the kernel")
        })?;
        let image = f1.induced().apply(&k);
        ensure(
            !xi1.radical().contains(&image) && !ob.image_in_radical,
            || format!("{name}: PS(f1)k lies in the radical"),
        )?;
        ensure(ob.lambda == "1/2", || {
            format!("{name}: lambda {}", ob.lambda)
        })?;
        let scaled: Vec<Rational> = image.iter().map(|x| x * rat(1, 2)).collect();
        let gens = xi1.group().generators().columns();
        let breaks_integrality = gens.iter().any(|g| !xi1.pairing(&scaled, g).is_integer());
        ensure(
            breaks_integrality && !xi1.is_central(&scaled) && !ob.scaled_image_central,
            || format!("{name}: scaled image is central"),
        )?;
        let cert = &ob.certificate;
        ensure(cert.phi == scaled, || {
            format!("{name}: certificate is not about the scaled image")
        })?;
        ensure(cert.pairing == rat(1, 2), || {
            format!("{name}: tau/2pi = {}", cert.pairing)
        })?;
        cert.verify(xi1).map_err(|e| format!("{name}: {e}"))?;
        ensure(cert.scalar == CyclotomicScalar::from_integer(-2), || {
            format!("{name}: final scalar {}", cert.scalar)
        })?;
        ensure(ob.pushes_to_zero, || {
            format!("{name}: W(lambda k) - 1 not pushed to zero")
        })?;
        lines.push(format!("{name} k = ({})", ob.k.join(", ")));
    }
    Ok(format!("{}; scalar -2 in both", lines.join(", ")))
}

fn check_hk(name: &str, text: &str) -> Result<usize, String> {
    let entries = run_text(text, name, Some(Command::Hk))?;
    ensure(entries.len() == 1, || {
        format!("{name}: expected one quotient analysis")
    })?;
    let e = &entries[0];
    let Output::Hk(r) = &e.result else {
        return Err(format!("{name}: unexpected output"));
    };
    ensure(e.verified(), || unverified(name, e))?;
    ensure(r.objects.iter().all(|o| o.kernel_in_radical), || {
        format!("{name}: kernel outside radical")
    })?;
    ensure(r.morphisms.iter().all(|m| m.triangle_commutes), || {
        format!("{name}: triangle fails")
    })?;
    ensure(
        r.all_injective && r.morphisms.iter().all(|m| m.injective),
        || format!("{name}: induced morphism not injective\n{text}"),
    )?;
    Ok(r.morphisms.len())
}

fn criterion_5(rng: &mut TestRng) -> Outcome {
    let mut morphisms = check_hk("hk_minkowski", fixture("hk_minkowski"))?;
    let n = 20;
    for i in 0..n {
        let s = common::hk_scenario(rng, i);
        morphisms += check_hk(&s.name, &common::to_json(&s))?;
    }
    Ok(format!(
        "hk_minkowski + {n} random diagrams, {morphisms} induced morphisms injective"
    ))
}

/// Random element of a window group: lattice multiples, halves along
/// divisible directions.
fn group_element(rng: &mut TestRng, g: &WindowGroup) -> Vec<Rational> {
    let y: Vec<Rational> = g
        .slots
        .iter()
        .map(|s| match s {
            common::Slot::Lattice(sc) => sc * rat(rng.gen_range(-2..=2), 1),
            common::Slot::Divisible => rat(rng.gen_range(-3..=3), 2),
            common::Slot::Absent => rat(0, 1),
        })
        .collect();
    g.point(&y)
}

fn coefficient(rng: &mut TestRng) -> (Rational, CyclotomicScalar) {
    let r = rat(rng.gen_range(-3..=3), rng.gen_range(1..=3));
    let orders = [1u64, 2, 3, 4, 6, 8];
    let ord = orders[rng.gen_range(0..orders.len())];
    let root = CyclotomicScalar::root_of_unity(rng.gen_range(0..8), ord);
    (r.clone(), CyclotomicScalar::from_rational(r) * root)
}

fn weyl_element(rng: &mut TestRng, g: &WindowGroup, pag: &Arc<PresymplecticGroup>) -> WeylElement {
    let mut a = WeylElement::zero(pag);
    for _ in 0..rng.gen_range(0..=3) {
        let (_, alpha) = coefficient(rng);
        a = a
            .add(&WeylElement::term(pag, &group_element(rng, g), alpha).expect("element"))
            .expect("same group");
    }
    a
}

/// Element with distinct group elements and coefficients of rational
/// modulus, so its ℓ¹ norm is the exact sum of moduli.
fn rational_modulus_element(
    rng: &mut TestRng,
    g: &WindowGroup,
    pag: &Arc<PresymplecticGroup>,
) -> (WeylElement, Rational) {
    let mut a = WeylElement::zero(pag);
    let mut norm = Rational::zero();
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..rng.gen_range(0..=4) {
        let b = group_element(rng, g);
        let (r, alpha) = coefficient(rng);
        if r.is_zero() || !seen.insert(b.clone()) {
            continue;
        }
        norm += r.abs();
        a = a
            .add(&WeylElement::term(pag, &b, alpha).expect("element"))
            .expect("same group");
    }
    (a, norm)
}

/// Lattice groups `Z^{n1} → Z^{n2} → Z^{n3}` with pairings pulled back from
/// the last one, so both maps preserve them.
fn random_ccr_pair(rng: &mut TestRng) -> (PAGMorphism, PAGMorphism) {
    let dims: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=3)).collect();
    let (n1, n2, n3) = (dims[0], dims[1], dims[2]);
    let mut s3 = RatMatrix::zeros(n3, n3);
    for i in 0..n3 {
        for j in i + 1..n3 {
            let v = rat(rng.gen_range(-4..=4), rng.gen_range(1..=4));
            s3[(j, i)] = -v.clone();
            s3[(i, j)] = v;
        }
    }
    let int = |rng: &mut TestRng, r: usize, c: usize| {
        let e: Vec<i64> = (0..r * c).map(|_| rng.gen_range(-2..=2)).collect();
        RatMatrix::from_i64(r, c, &e)
    };
    let t2 = int(rng, n3, n2);
    let t1 = int(rng, n2, n1);
    let s2 = &(&t2.transpose() * &s3) * &t2;
    let s1 = &(&t1.transpose() * &s2) * &t1;
    let b1 = PresymplecticGroup::new(MixedGroup::integer_lattice(n1), s1).expect("antisymmetric");
    let b2 = PresymplecticGroup::new(MixedGroup::integer_lattice(n2), s2).expect("antisymmetric");
    let b3 = PresymplecticGroup::new(MixedGroup::integer_lattice(n3), s3).expect("antisymmetric");
    let f = PAGMorphism::new(b1, b2.clone(), t1).expect("pairing preserved");
    let g = PAGMorphism::new(b2, b3, t2).expect("pairing preserved");
    (f, g)
}

fn criterion_6(rng: &mut TestRng) -> Outcome {
    let err = |e: pag_core::weyl::WeylError| e.to_string();
    for i in 0..1000 {
        let g = WindowGroup::random(rng);
        let pag = Arc::new(g.pag.clone());
        let (a, b, c) = (
            weyl_element(rng, &g, &pag),
            weyl_element(rng, &g, &pag),
            weyl_element(rng, &g, &pag),
        );
        let left = a.product(&b).map_err(err)?.product(&c).map_err(err)?;
        let right = a.product(&b.product(&c).map_err(err)?).map_err(err)?;
        ensure(left == right, || {
            format!("associativity fails on triple {i}")
        })?;
    }
    for i in 0..500 {
        let g = WindowGroup::random(rng);
        let pag = Arc::new(g.pag.clone());
        let w = WeylElement::weyl(&pag, &group_element(rng, &g)).map_err(err)?;
        let one = WeylElement::unit(&pag);
        ensure(
            w.star().product(&w).map_err(err)? == one && w.product(&w.star()).map_err(err)? == one,
            || format!("W(b) is not unitary in case {i}"),
        )?;
    }
    for i in 0..500 {
        let g = WindowGroup::random(rng);
        let pag = Arc::new(g.pag.clone());
        let a = weyl_element(rng, &g, &pag);
        let omega = a.star().product(&a).map_err(err)?.trivial_state();
        let sum = a.terms().fold(CyclotomicScalar::zero(), |acc, (_, c)| {
            acc + c.abs_squared()
        });
        ensure(omega == sum, || {
            format!("state of a*a differs from the sum of |alpha|^2 in case {i}")
        })?;

        let (a, norm) = rational_modulus_element(rng, &g, &pag);
        let (banach, exact) = a.banach_norm();
        ensure(exact && banach == norm, || {
            format!("l1 norm {banach} vs {norm} in case {i}")
        })?;
        let omega = a.star().product(&a).map_err(err)?.trivial_state();
        let omega = omega
            .to_rational()
            .ok_or_else(|| format!("irrational state in case {i}"))?;
        ensure(
            omega >= Rational::zero() && omega <= &banach * &banach,
            || {
                format!(
                    "state {omega} exceeds norm^2 {} in case {i}",
                    &banach * &banach
                )
            },
        )?;
    }
    for i in 0..100 {
        let (f, g) = random_ccr_pair(rng);
        let gf = f.then(&g).map_err(|e| e.to_string())?;
        let src = Arc::new(f.source().clone());
        let mut a = WeylElement::zero(&src);
        for _ in 0..rng.gen_range(1..=3) {
            let b: Vec<Rational> = (0..src.ambient_dim())
                .map(|_| rat(rng.gen_range(-2..=2), 1))
                .collect();
            let (_, alpha) = coefficient(rng);
            a = a
                .add(&WeylElement::term(&src, &b, alpha).map_err(err)?)
                .map_err(err)?;
        }
        let two_step = ccr_push(&g, &ccr_push(&f, &a).map_err(err)?).map_err(err)?;
        let one_step = ccr_push(&gf, &a).map_err(err)?;
        ensure(two_step == one_step, || {
            format!("CCR(g)CCR(f) != CCR(gf) in case {i}")
        })?;
    }
    Ok(
        "1000 associativity triples, 500 unitarity, 500 state and norm checks, 100 CCR pairs"
            .into(),
    )
}

fn criterion_7(rng: &mut TestRng) -> Outcome {
    let mut points = 0usize;
    let (mut central, mut radical) = (0usize, 0usize);
    for i in 0..500 {
        let g = WindowGroup::random(rng);
        let center = g.pag.center();
        let rad = g.pag.radical();
        let probes = g.probes();
        for y in g.window() {
            let x = g.point(&y);
            let inside = g.contains_coords(&y);
            let pairings: Vec<Rational> = probes.iter().map(|p| g.pag.pairing(&x, p)).collect();
            let oracle_center = inside && pairings.iter().all(|v| v.is_integer());
            let oracle_radical = inside && pairings.iter().all(Zero::is_zero);
            ensure(g.pag.contains(&x) == inside, || {
                format!("group {i}: membership differs at {y:?}")
            })?;
            ensure(center.contains(&x) == oracle_center, || {
                format!("group {i}: center differs at {y:?}: {:?}", g)
            })?;
            ensure(rad.contains(&x) == oracle_radical, || {
                format!("group {i}: radical differs at {y:?}")
            })?;
            points += 1;
            central += oracle_center as usize;
            radical += oracle_radical as usize;
        }
    }
    Ok(format!(
        "500 groups, {points} window points ({central} central, {radical} radical)"
    ))
}

fn criterion_8(rng: &mut TestRng) -> Outcome {
    let (mut equiv, mut sep) = (0usize, 0usize);
    for batch in 0..5 {
        let pairs: Vec<_> = (0..100).map(|_| common::configuration_pair(rng)).collect();
        let analyses = pairs
            .iter()
            .map(|(l, r, _)| Analysis::Separate {
                object: None,
                left: l.clone(),
                right: r.clone(),
            })
            .collect();
        let s = common::scenario(&format!("separation_{batch}"), 4, &[], vec![], analyses);
        let entries = run_text(&common::to_json(&s), &s.name, None)?;
        ensure(entries.len() == pairs.len(), || {
            "missing separation results".into()
        })?;
        for ((left, right, equivalent), e) in pairs.iter().zip(&entries) {
            let Output::Separate(r) = &e.result else {
                return Err("unexpected output".into());
            };
            ensure(e.verified(), || unverified(&s.name, e))?;
            match (&r.separation, equivalent) {
                (Separation::GaugeEquivalent, true) => equiv += 1,
                (Separation::Separated { descriptor, gap }, false) => {
                    let expected = match descriptor {
                        Descriptor::Charge { index, r } => {
                            r * (&left.curvature_coords[*index] - &right.curvature_coords[*index])
                        }
                        Descriptor::Holonomy { index } => {
                            &left.holonomy_coords[*index] - &right.holonomy_coords[*index]
                        }
                    };
                    ensure(*gap == expected && !gap.is_integer(), || {
                        format!("pair {left:?} / {right:?}: gap {gap}, recomputed {expected}")
                    })?;
                    sep += 1;
                }
                (got, _) => {
                    return Err(format!(
                        "pair {left:?} / {right:?}: got {got:?}, built equivalent: {equivalent}"
                    ))
                }
            }
        }
    }
    Ok(format!(
        "500 pairs: {equiv} gauge-equivalent, {sep} separated with non-integral gap"
    ))
}

fn criterion_9() -> Outcome {
    for name in fixtures::NAMES {
        let text = fixture(name);
        let a = analyze(text, name, None).map_err(|e| format!("{name}: {e}"))?;
        let b = analyze(text, name, None).map_err(|e| format!("{name}: {e}"))?;
        ensure(report::to_json(&a) == report::to_json(&b), || {
            format!("{name}: JSON differs")
        })?;
        ensure(report::to_text(&a) == report::to_text(&b), || {
            format!("{name}: text differs")
        })?;
    }
    Ok(format!(
        "{} fixtures byte-identical across runs",
        fixtures::NAMES.len()
    ))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("non-local dimension counts", 1, Box::new(criterion_1)),
        (
            "2d connected locality",
            5,
            Box::new(|| criterion_2(&mut common::rng(2))),
        ),
        (
            "criterion equivalence",
            30,
            Box::new(|| criterion_3(&mut common::rng(3))),
        ),
        ("classical and quantum no-go", 5, Box::new(criterion_4)),
        (
            "quotient construction",
            30,
            Box::new(|| criterion_5(&mut common::rng(5))),
        ),
        (
            "Weyl algebra core",
            60,
            Box::new(|| criterion_6(&mut common::rng(6))),
        ),
        (
            "center/radical window oracle",
            60,
            Box::new(|| criterion_7(&mut common::rng(7))),
        ),
        (
            "separation",
            10,
            Box::new(|| criterion_8(&mut common::rng(8))),
        ),
        ("determinism", 60, Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (i, (title, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {limit} s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {} {status} {title} [{:.2} s / {limit} s]: {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
