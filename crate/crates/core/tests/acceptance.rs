//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p quasimodular --test acceptance -- --nocapture`.
//!
//! A criterion can carry a known deviation: a sub-check whose literal target
//! does not follow from the definitions the library implements. Such a
//! sub-check is still run and its line reads FAIL; the test asserts the
//! computed alternative instead, and that nothing else fails.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quasimodular::brackets::{
    cm_mu, family_first, family_second, family_third, jacobiator, kappa_bracket, mr_triple,
    rc_modular, zagier_bracket, BracketTriple,
};
use quasimodular::derivations::{delta_alpha_b, partial_a, varpi};
use quasimodular::derivations::{serre_theta, Derivation};
use quasimodular::qseries::{eisenstein_qexp, evaluate, q_derivative, QSeries};
use quasimodular::star::{
    certify_deformation, depth_profile, find_associativity_failure, Rule, StarTruncation,
};
use quasimodular::structure::{
    check_scaling_morphism, classify_admissible, is_admissible, is_poissonian,
    ore_extension_bracket, ore_system_determinant, rc_shape_solve, recover_potential,
    shape_bracket, truncated_center, unimodularity_search, Classification, RcShape, Unimodularity,
};
use quasimodular::{delta, parse, Generator, Monomial, Poly, Scalar};

// ---------------------------------------------------------------- oracles

fn p(s: &str) -> Poly {
    parse(s).unwrap()
}

fn s(n: i64) -> Scalar {
    Scalar::int(n)
}

fn fr(n: i64, d: i64) -> Scalar {
    Scalar::frac(n, d)
}

fn t() -> Scalar {
    Scalar::t()
}

fn gens() -> [Poly; 3] {
    [Poly::e2(), Poly::e4(), Poly::e6()]
}

/// Ramanujan's D written out with partial derivatives.
fn d_oracle(f: &Poly) -> Poly {
    let a = &p("(E2^2 - E4)/12") * &f.partial(Generator::E2);
    let b = &p("(E2*E4 - E6)/3") * &f.partial(Generator::E4);
    let c = &p("(E2*E6 - E4^2)/2") * &f.partial(Generator::E6);
    &(&a + &b) + &c
}

/// `{f,g}` from the chain rule and the three generator values.
fn chain_rule_bracket(b: &BracketTriple, f: &Poly, g: &Poly) -> Poly {
    use Generator::*;
    let pairs = [(E2, E4, &b.r12), (E4, E6, &b.p46), (E6, E2, &b.q62)];
    let mut out = Poly::zero();
    for (u, v, val) in pairs {
        let minor = &(&f.partial(u) * &g.partial(v)) - &(&f.partial(v) * &g.partial(u));
        out = &out + &(&minor * val);
    }
    out
}

fn jacobiator_oracle(b: &BracketTriple, f: &Poly, g: &Poly, h: &Poly) -> Poly {
    let br = |x: &Poly, y: &Poly| chain_rule_bracket(b, x, y);
    &(&br(f, &br(g, h)) + &br(g, &br(h, f))) + &br(h, &br(f, g))
}

fn det3(m: [[Poly; 3]; 3]) -> Poly {
    let minor = |a: &Poly, b: &Poly, c: &Poly, d: &Poly| &(a * d) - &(b * c);
    let x = &m[0][0] * &minor(&m[1][1], &m[1][2], &m[2][1], &m[2][2]);
    let y = &m[0][1] * &minor(&m[1][0], &m[1][2], &m[2][0], &m[2][2]);
    let z = &m[0][2] * &minor(&m[1][0], &m[1][1], &m[2][0], &m[2][1]);
    &(&x - &y) + &z
}

fn grad(f: &Poly) -> [Poly; 3] {
    Generator::ALL.map(|g| f.partial(g))
}

fn rc1_oracle(f: &Poly, g: &Poly) -> Poly {
    let k = s(f.homogeneous_weight().unwrap() as i64);
    let l = s(g.homogeneous_weight().unwrap() as i64);
    &(f * &d_oracle(g)).scale(&k) - &(g * &d_oracle(f)).scale(&l)
}

fn random_poly(rng: &mut ChaCha8Rng, max_weight: u32, modular: bool) -> Poly {
    let mut out = Poly::zero();
    while out.is_zero() {
        for w in (0..=max_weight).step_by(2) {
            let monos = if modular {
                Monomial::modular_of_weight(w)
            } else {
                Monomial::of_weight(w)
            };
            for m in monos {
                if rng.gen_bool(0.3) {
                    out.add_term(m, s(rng.gen_range(-4..=4)));
                }
            }
        }
    }
    out
}

fn random_homogeneous(rng: &mut ChaCha8Rng, weight: u32, modular: bool) -> Poly {
    let monos = if modular {
        Monomial::modular_of_weight(weight)
    } else {
        Monomial::of_weight(weight)
    };
    let mut out = Poly::zero();
    while out.is_zero() {
        for m in &monos {
            if rng.gen_bool(0.6) {
                out.add_term(*m, s(rng.gen_range(-4..=4)));
            }
        }
    }
    out
}

fn monomials(max_total: u32, modular: bool) -> Vec<Poly> {
    (2..=max_total)
        .step_by(2)
        .flat_map(|w| {
            if modular {
                Monomial::modular_of_weight(w)
            } else {
                Monomial::of_weight(w)
            }
        })
        .map(Poly::monomial)
        .collect()
}

fn weight(f: &Poly) -> u32 {
    f.homogeneous_weight().unwrap()
}

fn sigma_brute(k: u32, n: usize) -> BigInt {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| BigInt::from(d).pow(k))
        .sum()
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

// ---------------------------------------------------------------- harness

struct Sub {
    label: String,
    ok: bool,
    deviation: Option<&'static str>,
}

#[derive(Default)]
struct Criterion {
    subs: Vec<Sub>,
    notes: Vec<String>,
}

impl Criterion {
    fn check(&mut self, label: impl Into<String>, ok: bool) {
        self.subs.push(Sub {
            label: label.into(),
            ok,
            deviation: None,
        });
    }

    fn known_deviation(&mut self, label: impl Into<String>, ok: bool, why: &'static str) {
        self.subs.push(Sub {
            label: label.into(),
            ok,
            deviation: Some(why),
        });
    }

    fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }
}

type CriterionSpec = (&'static str, f64, fn(&mut Criterion));

struct Outcome {
    id: usize,
    title: &'static str,
    secs: f64,
    budget: f64,
    crit: Criterion,
}

fn run(id: usize, title: &'static str, budget: f64, f: fn(&mut Criterion)) -> Outcome {
    let start = Instant::now();
    let mut crit = Criterion::default();
    f(&mut crit);
    Outcome {
        id,
        title,
        secs: start.elapsed().as_secs_f64(),
        budget,
        crit,
    }
}

// ---------------------------------------------------------------- criteria

fn c1_jacobi(c: &mut Criterion) {
    let fams = [
        ("first(t)", family_first(&t())),
        ("second(t)", family_second(&t())),
        ("third(t)", family_third(&t())),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let triples: Vec<[Poly; 3]> = (0..50)
        .map(|_| std::array::from_fn(|_| random_poly(&mut rng, 10, false)))
        .collect();
    for (name, b) in &fams {
        c.check(format!("{name} curl condition"), is_poissonian(b));
        let mut gen_ok = true;
        for f in &gens() {
            for g in &gens() {
                for h in &gens() {
                    gen_ok &=
                        jacobiator(b, f, g, h).is_zero() && jacobiator_oracle(b, f, g, h).is_zero();
                }
            }
        }
        c.check(format!("{name} jacobiator on generator triples"), gen_ok);
        let rand_ok = triples.iter().all(|[f, g, h]| {
            let lib = jacobiator(b, f, g, h);
            lib.is_zero() && lib == jacobiator_oracle(b, f, g, h)
        });
        c.check(format!("{name} jacobiator on 50 random triples"), rand_ok);
    }
}

fn c2_admissible(c: &mut Criterion) {
    let monos = monomials(20, true);
    for (name, b) in [
        ("first(t)", family_first(&t())),
        ("second(t)", family_second(&t())),
        ("third(t)", family_third(&t())),
    ] {
        c.check(format!("{name} admissible"), is_admissible(&b));
        let mut n = 0;
        let mut ok = true;
        for f in &monos {
            for g in &monos {
                if weight(f) + weight(g) > 20 {
                    continue;
                }
                n += 1;
                let v = b.apply(f, g);
                ok &= v == rc1_oracle(f, g) && v == rc_modular(1, f, g);
            }
        }
        c.check(format!("{name} equals RC_1 on {n} modular pairs"), ok);
    }
}

fn c3_jacobian(c: &mut Criterion) {
    let mu = t();
    let b = family_third(&mu);
    let expected = &(&delta() * &Poly::e2()).scale(&s(-2)) + &p("E4^2*E6").scale(&mu);
    c.check(
        "potential of third(t)",
        recover_potential(&b) == Some(expected.clone()),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut ok = true;
    for _ in 0..25 {
        let f = random_poly(&mut rng, 12, false);
        let g = random_poly(&mut rng, 12, false);
        let jac = det3([grad(&f), grad(&g), grad(&expected)]);
        ok &= b.apply(&f, &g) == jac;
    }
    c.check("bracket equals Jacobian determinant on 25 random pairs", ok);
}

fn c4_unimodular(c: &mut Criterion) {
    let mut cases = vec![("first(1)".to_string(), family_first(&s(1)))];
    for a in [0, 1, 2, 3, 5, -1] {
        cases.push((format!("second({a})"), family_second(&s(a))));
    }
    for (name, b) in &cases {
        match unimodularity_search(b, 20) {
            Ok(Unimodularity::NotUnimodular(cert)) => {
                c.check(format!("{name} certificate"), !cert.value.is_zero());
                if name == "first(1)" {
                    c.note(format!("{name}: {cert}"));
                }
            }
            other => c.check(format!("{name} expected no solution, got {other:?}"), false),
        }
    }
    let b = family_second(&s(4));
    let k0 = (&delta() * &Poly::e2()).scale(&s(-2));
    // independent: curl(p,q,r) = (p,q,r) x grad(k0)
    let [pp, qq, rr] = [&b.p46, &b.q62, &b.r12];
    let d = |f: &Poly, g| f.partial(g);
    use Generator::*;
    let curl = [
        &d(rr, E4) - &d(qq, E6),
        &d(pp, E6) - &d(rr, E2),
        &d(qq, E2) - &d(pp, E4),
    ];
    let gk = grad(&k0);
    let cross = [
        &(qq * &gk[2]) - &(rr * &gk[1]),
        &(rr * &gk[0]) - &(pp * &gk[2]),
        &(pp * &gk[1]) - &(qq * &gk[0]),
    ];
    c.check("-2*Delta*E2 solves the second(4) equation", curl == cross);
    match unimodularity_search(&b, 20) {
        Ok(Unimodularity::Unimodular {
            potential,
            casimirs,
        }) => {
            let diff = &k0 - &potential;
            let mut span = casimirs.clone();
            span.push(Poly::one());
            let mut with = span.clone();
            with.push(diff);
            c.check(
                "second(4) solution set contains -2*Delta*E2 up to constants",
                quasimodular::structure::same_span(&span, &with),
            );
            c.note(format!("second(4): k = {potential}"));
        }
        other => c.check(
            format!("second(4) expected a solution, got {other:?}"),
            false,
        ),
    }
    c.check(
        "second(4) potential is -2*Delta*E2",
        recover_potential(&b) == Some(k0),
    );
}

fn center_matches(b: &BracketTriple, max_w: u32, expected: &dyn Fn(u32) -> Vec<Poly>) -> bool {
    truncated_center(b, max_w)
        .into_iter()
        .all(|(w, basis)| quasimodular::structure::same_span(&basis, &expected(w)))
}

fn c5_centers(c: &mut Criterion) {
    let only_constants = |w: u32| if w == 0 { vec![Poly::one()] } else { vec![] };
    let single = |gen: Poly| {
        move |w: u32| {
            let gw = weight(&gen);
            if w == 0 {
                vec![Poly::one()]
            } else if w.is_multiple_of(gw) {
                vec![gen.pow_u(w / gw)]
            } else {
                vec![]
            }
        }
    };
    c.check(
        "first(1): constants only up to 24",
        center_matches(&family_first(&s(1)), 24, &only_constants),
    );
    c.check(
        "second(0): E2 powers at every even weight up to 24",
        center_matches(&family_second(&s(0)), 24, &single(Poly::e2())),
    );
    c.check(
        "second(1): Delta*E2^4 at 20",
        center_matches(&family_second(&s(1)), 24, &single(p("Delta*E2^4"))),
    );
    c.check(
        "second(2): Delta*E2^2 at 16",
        center_matches(&family_second(&s(2)), 24, &single(p("Delta*E2^2"))),
    );
    c.check(
        "second(4): Delta*E2 at 14",
        center_matches(&family_second(&s(4)), 24, &single(p("Delta*E2"))),
    );
    c.check(
        "second(1/2): constants only below 28",
        center_matches(&family_second(&fr(1, 2)), 26, &only_constants),
    );
    c.check(
        "second(-1): constants only up to 24",
        center_matches(&family_second(&s(-1)), 24, &only_constants),
    );
    let k1 = p("-2*Delta*E2 + E4^2*E6");
    c.check(
        "third(1): 1, k, k^2 at 0, 14, 28",
        center_matches(&family_third(&s(1)), 28, &single(k1)),
    );
}

fn c6_first_deformation(c: &mut Criterion) {
    let a = t();
    let d = partial_a(&a);
    let b1 = family_first(&s(1));
    let ok = gens().iter().all(|f| {
        gens()
            .iter()
            .all(|g| zagier_bracket(&d, 1, f, g) == b1.apply(f, g))
    });
    c.check("order-1 bracket with symbolic a equals first(1)", ok);

    let st = StarTruncation::new(Rule::Zagier(d.clone()), 3).unwrap();
    let rep = certify_deformation(&st, 3, 10);
    c.check(
        format!(
            "associativity n <= 3, weight <= 10, symbolic a ({} triples)",
            rep.triples
        ),
        rep.passed(),
    );

    let two = zagier_bracket(&d, 2, &Poly::e2(), &Poly::e4());
    let top = two.coeff(&Monomial::new(3, 1, 0));
    // 2*2*C(3,2)... expanded by hand: (72 - 120 + 80) a^2 = 32 a^2
    let a2 = &a * &a;
    c.note(format!("[E2,E4]_2 has E4*E2^3 coefficient {top}"));
    c.known_deviation(
        "E4*E2^3 coefficient is 8a^2",
        top == &s(8) * &a2,
        "the stated definitions give 32a^2",
    );
    c.check("E4*E2^3 coefficient is 32a^2", top == &s(32) * &a2);
    c.check("depth of [E2,E4]_2 is 3", two.depth().ok() == Some(3));

    let st0 = StarTruncation::new(Rule::Zagier(partial_a(&s(0))), 3).unwrap();
    let monos = monomials(14, false);
    let mut ok = true;
    for f in &monos {
        for g in &monos {
            if weight(f) + weight(g) > 14 {
                continue;
            }
            for n in 0..=3 {
                ok &= depth_profile(&st0, n, f, g).unwrap().within_bound();
            }
        }
    }
    c.check("a = 0: depth <= s + t for n <= 3, weight <= 14", ok);
}

fn c7_second_deformation(c: &mut Criterion) {
    let mut ok = true;
    for b in [s(0), s(1), s(-2), fr(1, 3)] {
        let al = t();
        let target = family_second(&al);
        let d = delta_alpha_b(&al, &b);
        for f in &gens() {
            for g in &gens() {
                ok &= kappa_bracket(&al, &d, 1, f, g) == target.apply(f, g);
            }
        }
    }
    for al in [s(0), s(1), fr(-1, 3), s(4), fr(-2, 3)] {
        let target = family_second(&al);
        let d = delta_alpha_b(&al, &t());
        for f in &gens() {
            for g in &gens() {
                ok &= kappa_bracket(&al, &d, 1, f, g) == target.apply(f, g);
            }
        }
    }
    c.check(
        "order-1 kappa bracket equals second(alpha), alpha or b symbolic",
        ok,
    );

    let al = t();
    let e = delta_alpha_b(&al, &s(0));
    let h = varpi(&al).scale(&fr(1, 2));
    let monos = monomials(14, false);
    let mut ok = true;
    let mut pairs = 0;
    for f in &monos {
        for g in &monos {
            if weight(f) + weight(g) > 14 {
                continue;
            }
            pairs += 1;
            for n in 0..=3 {
                ok &= cm_mu(&e, &h, n, f, g).unwrap() == kappa_bracket(&al, &e, n, f, g);
            }
        }
    }
    c.check(
        format!("CM terms equal kappa terms, n <= 3, {pairs} pairs"),
        ok,
    );

    let two = kappa_bracket(
        &s(0),
        &delta_alpha_b(&s(0), &s(1)),
        2,
        &Poly::e4(),
        &Poly::e6(),
    );
    c.check(
        "alpha = 0, b = 1: [E4,E6]_2 has positive E2-degree",
        two.depth().is_ok_and(|d| d > 0),
    );
    c.note(format!("alpha = 0, b = 1: [E4,E6]_2 = {two}"));

    let al = fr(-1, 3);
    let st = StarTruncation::new(
        Rule::Kappa {
            alpha: al.clone(),
            derivation: delta_alpha_b(&al, &s(1)),
        },
        3,
    )
    .unwrap();
    let found = find_associativity_failure(&st, 3, 8);
    if let Some(w) = &found {
        c.note(format!(
            "alpha = -1/3, b = 1 witness: ({}, {}, {}) -> {}",
            w.f, w.g, w.h, w.residual
        ));
    }
    c.known_deviation(
        "alpha = -1/3, b = 1: nonzero order-3 residual (search up to weight 8)",
        found.is_some(),
        "at alpha = -1/3 the brackets do not depend on b, so b = 1 is the associative b = 0 deformation",
    );
    let d0 = delta_alpha_b(&al, &s(0));
    let db = delta_alpha_b(&al, &t());
    let monos = monomials(10, false);
    let mut same = true;
    for f in &monos {
        for g in &monos {
            for n in 0..=3 {
                same &= kappa_bracket(&al, &d0, n, f, g) == kappa_bracket(&al, &db, n, f, g);
            }
        }
    }
    c.check(
        "alpha = -1/3: brackets with symbolic b equal b = 0, n <= 3, weight <= 10",
        same,
    );
}

fn c8_eholzer(c: &mut Criterion) {
    let st = StarTruncation::new(Rule::Eholzer, 3).unwrap();
    let rep = certify_deformation(&st, 3, 12);
    c.check(
        format!(
            "associativity n <= 3, weight <= 12 ({} triples)",
            rep.triples
        ),
        rep.passed(),
    );
    let v = st.term(1, &Poly::e4(), &Poly::e6());
    c.check("order 1 on (E4,E6) is -2*Delta", v == delta().scale(&s(-2)));
}

fn c9_mr(c: &mut Criterion) {
    let b = mr_triple();
    let j = jacobiator(&b, &Poly::e2(), &Poly::e4(), &Poly::e6());
    let oracle = jacobiator_oracle(&b, &Poly::e2(), &Poly::e4(), &Poly::e6());
    c.note(format!("jacobiator(E2,E4,E6) = {j}"));
    c.check(
        "quasimodular RC_1 triple has nonzero jacobiator",
        !j.is_zero() && j == oracle,
    );
}

fn c10_classification(c: &mut Criterion) {
    let cases = [
        (family_first(&t()), Classification::First { lambda: t() }),
        (family_second(&t()), Classification::Second { alpha: t() }),
        (family_third(&t()), Classification::Third { mu: t() }),
        (
            family_first(&s(0)),
            Classification::Second { alpha: fr(-2, 3) },
        ),
        (family_third(&s(0)), Classification::Second { alpha: s(4) }),
    ];
    for (b, want) in cases {
        let got = classify_admissible(&b).unwrap();
        c.check(format!("classified as {want}"), got == want);
    }
    // alpha E2E6 + beta E4^2, -(3alpha/2 E2E4^2 + eps E4E6)
    let shaped = |alpha: Scalar, beta: Scalar, eps: Scalar| {
        BracketTriple::new(
            &p("E2*E6").scale(&alpha) + &p("E4^2").scale(&beta),
            delta().scale(&s(-2)),
            -&(&p("E2*E4^2").scale(&(alpha * fr(3, 2))) + &p("E4*E6").scale(&eps)),
        )
    };
    let mut rejected = true;
    for (a, b) in [
        (s(1), s(1)),
        (s(0), s(2)),
        (fr(-1, 3), s(1)),
        (s(3), fr(1, 2)),
    ] {
        // eps = 4 beta / (2 - alpha) is forced by the first equation
        let forced = &(&s(4) * &b) / &(&s(2) - &a);
        for eps in [&forced + &s(1), s(0), -&forced] {
            if eps == forced {
                continue;
            }
            let tri = shaped(a.clone(), b.clone(), eps);
            rejected &= classify_admissible(&tri).unwrap() == Classification::Reject
                && !is_poissonian(&tri);
        }
    }
    c.check("perturbed triples are rejected and not Poisson", rejected);
    let det = ore_system_determinant(&t());
    let oracle = -&(&(&s(3) * &t() + &s(2)) * &(&t() - &s(4)));
    c.check("determinant is -(3a+2)(a-4)", det == oracle);
    let zeros: Vec<Scalar> = (-12..=12)
        .flat_map(|n| (1..=6).map(move |d| fr(n, d)))
        .filter(|a| ore_system_determinant(a).is_zero())
        .collect();
    let mut zs = zeros;
    zs.dedup();
    c.check(
        "determinant vanishes exactly at -2/3 and 4 on sampled alpha",
        zs == vec![fr(-2, 3), s(4)],
    );
}

fn c11_morphisms(c: &mut Criterion) {
    c.check(
        "E2 -> lambda*E2 maps first(lambda) to first(1), lambda symbolic",
        check_scaling_morphism(&t(), &family_first(&t()), &family_first(&s(1))).unwrap(),
    );
    c.check(
        "E2 -> mu*E2 maps third(mu) to third(1), mu symbolic",
        check_scaling_morphism(&t(), &family_third(&t()), &family_third(&s(1))).unwrap(),
    );
    c.check(
        "E2 -> 2*E2 does not map first(1) to first(1)",
        !check_scaling_morphism(&s(2), &family_first(&s(1)), &family_first(&s(1))).unwrap(),
    );
    let theta = serre_theta();
    let delta1 = Derivation::new(Poly::zero(), p("1/3*E4^2"), p("1/2*E4*E6"));
    let ore1 = ore_extension_bracket(&theta.scale(&s(2)), &delta1).unwrap();
    c.check(
        "Ore extension reproduces first(1)",
        ore1 == family_first(&s(1)),
    );
    let ore2 = ore_extension_bracket(&theta.scale(&(&s(-3) * &t())), &Derivation::zero()).unwrap();
    c.check(
        "Ore extension reproduces second(t)",
        ore2 == family_second(&t()),
    );
}

fn c12_qseries(c: &mut Criterion) {
    let n = 50;
    let e2 = eisenstein_qexp(2, n).unwrap();
    let e4 = eisenstein_qexp(4, n).unwrap();
    let e6 = eisenstein_qexp(6, n).unwrap();
    let oracle_ok = (1..=n).all(|m| {
        let sig = |k| BigRational::from_integer(sigma_brute(k, m));
        *e2.coeff(m) == q(-24) * sig(1)
            && *e4.coeff(m) == q(240) * sig(3)
            && *e6.coeff(m) == q(-504) * sig(5)
    });
    c.check(
        "Eisenstein coefficients match divisor sums through q^50",
        oracle_ok,
    );
    // q dE/dq written with series products
    let twelve = |x: &QSeries| x.scale(&BigRational::new(1.into(), 12.into()));
    let ode2 = q_derivative(&e2) == twelve(&e2.mul(&e2).sub(&e4));
    let ode4 = q_derivative(&e4)
        == e2
            .mul(&e4)
            .sub(&e6)
            .scale(&BigRational::new(1.into(), 3.into()));
    let ode6 = q_derivative(&e6)
        == e2
            .mul(&e6)
            .sub(&e4.mul(&e4))
            .scale(&BigRational::new(1.into(), 2.into()));
    c.check("Ramanujan equations through q^50", ode2 && ode4 && ode6);
    let dl = evaluate(&delta(), n, None).unwrap();
    let de2 = evaluate(&p("Delta*E2"), n, None).unwrap();
    c.check("D Delta = Delta*E2 through q^50", q_derivative(&dl) == de2);
    c.check("Delta has q-coefficient 1728", *dl.coeff(1) == q(1728));
    let m = 30;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut ok = true;
    for _ in 0..20 {
        let (k, l) = (2 * rng.gen_range(2..=7), 2 * rng.gen_range(2..=7));
        let f = random_homogeneous(&mut rng, k, true);
        let g = random_homogeneous(&mut rng, l, true);
        let (sf, sg) = (
            evaluate(&f, m, None).unwrap(),
            evaluate(&g, m, None).unwrap(),
        );
        let rhs = sf
            .mul(&q_derivative(&sg))
            .scale(&q(k as i64))
            .sub(&sg.mul(&q_derivative(&sf)).scale(&q(l as i64)));
        ok &= evaluate(&rc_modular(1, &f, &g), m, None).unwrap() == rhs;
    }
    c.check("RC_1 identity on 20 random modular pairs through q^30", ok);
}

fn c13_rc_shape(c: &mut Criterion) {
    match rc_shape_solve(&family_third(&s(0))).unwrap() {
        RcShape::Solvable(sol) => {
            let target = family_third(&s(0));
            use Generator::*;
            let ok = [(E2, E4), (E4, E6), (E6, E2)]
                .iter()
                .all(|&(u, v)| shape_bracket(&sol, u, v) == target.value(u, v));
            c.check("mu = 0 solvable and the solution reproduces third(0)", ok);
        }
        RcShape::Unsolvable(_) => c.check("mu = 0 solvable", false),
    }
    for mu in [t(), s(1), fr(-3, 2)] {
        let out = rc_shape_solve(&family_third(&mu)).unwrap();
        if let RcShape::Unsolvable(certs) = &out {
            if mu == t() {
                for (g, cert) in certs {
                    c.note(format!("mu = t, kappa({g}) = 1: {cert}"));
                }
            }
        }
        c.check(format!("mu = {mu} unsolvable"), !out.is_solvable());
    }
}

#[test]
fn acceptance() {
    let criteria: [CriterionSpec; 13] = [
        ("Jacobi identity and curl condition", 5.0, c1_jacobi),
        ("admissibility and RC_1 restriction", 5.0, c2_admissible),
        ("third family potential and Jacobian form", 5.0, c3_jacobian),
        ("unimodularity search", 10.0, c4_unimodular),
        ("truncated Poisson centers", 30.0, c5_centers),
        ("first-family deformation", 30.0, c6_first_deformation),
        ("second-family deformation", 30.0, c7_second_deformation),
        ("Eholzer deformation", 20.0, c8_eholzer),
        ("quasimodular RC_1 is not Poisson", 1.0, c9_mr),
        ("classification", 5.0, c10_classification),
        ("morphisms and Ore realizations", 5.0, c11_morphisms),
        ("q-expansion cross-validation", 20.0, c12_qseries),
        ("no RC shape for the third family", 5.0, c13_rc_shape),
    ];
    let outcomes: Vec<Outcome> = criteria
        .iter()
        .enumerate()
        .map(|(i, &(title, budget, f))| run(i + 1, title, budget, f))
        .collect();

    let mut unexpected = Vec::new();
    let mut total = 0.0;
    for o in &outcomes {
        total += o.secs;
        let failed: Vec<&Sub> = o.crit.subs.iter().filter(|s| !s.ok).collect();
        let status = if failed.is_empty() { "PASS" } else { "FAIL" };
        let slow = if o.secs > o.budget {
            " over budget"
        } else {
            ""
        };
        println!(
            "{status} {:>2}. {} ({:.1} s, budget {:.0} s{slow})",
            o.id, o.title, o.secs, o.budget
        );
        for sub in &failed {
            match sub.deviation {
                Some(why) => println!("       known deviation: {}: {why}", sub.label),
                None => println!("       failed: {}", sub.label),
            }
        }
        for n in &o.crit.notes {
            println!("       {n}");
        }
        for sub in failed.iter().filter(|s| s.deviation.is_none()) {
            unexpected.push(format!("{}: {}", o.id, sub.label));
        }
    }
    println!("total {total:.1} s");
    assert!(
        unexpected.is_empty(),
        "unexpected failures: {unexpected:#?}"
    );
}
