//! Named checks with machine-readable reports.
//!
//! Each check computes a property and compares it with the outcome the
//! theory predicts for the given parameters. `assoc` and `depth` assert that
//! the property holds; `expect_fail` inverts the expectation of any check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::brackets::{
    family_first, family_second, family_third, jacobiator, rc1_modular_triple, rc_modular,
    BracketTriple,
};
use crate::derivations::{delta_alpha_b, partial_a, ramanujan_d, serre_theta, varpi, Derivation};
use crate::error::{Error, Result};
use crate::poly::{delta, Monomial, Poly};
use crate::qseries::{evaluate, q_derivative, QSeries};
use crate::scalar::Scalar;
use crate::star::{certify_deformation, depth_profile, test_monomials, Rule, StarTruncation};
use crate::structure::{
    check_scaling_morphism, classify_admissible, is_admissible, is_poissonian,
    ore_extension_bracket, rc_shape_solve, recover_potential, same_span, truncated_center,
    truncated_centralizer, Classification, RcShape, Unimodularity,
};

pub const CHECKS: [&str; 12] = [
    "admissible",
    "assoc",
    "center",
    "centralizer",
    "classify",
    "depth",
    "jacobi",
    "morphism",
    "potential",
    "qexp",
    "rcshape",
    "unimodular",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub inputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub parameters: BTreeMap<String, String>,
    pub status: Status,
    pub witnesses: Vec<Witness>,
}

/// A report together with its human-readable lines.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub report: CheckReport,
    pub lines: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.report.status == Status::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    First,
    Second,
    Third,
    /// RC_1 on modular forms with E2 central.
    Rc1,
}

impl Family {
    pub fn parse(name: &str) -> Option<Family> {
        match name {
            "first" => Some(Family::First),
            "second" => Some(Family::Second),
            "third" => Some(Family::Third),
            "rc1" => Some(Family::Rc1),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::First => "first",
            Family::Second => "second",
            Family::Third => "third",
            Family::Rc1 => "rc1",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub family: Option<Family>,
    pub lambda: Option<Scalar>,
    pub alpha: Option<Scalar>,
    pub mu: Option<Scalar>,
    pub a: Option<Scalar>,
    pub b: Option<Scalar>,
    pub order: Option<usize>,
    pub maxweight: Option<u32>,
    pub rule: Option<String>,
    pub element: Option<Poly>,
    pub expect_fail: bool,
}

impl Options {
    fn lambda(&self) -> Scalar {
        self.lambda.clone().unwrap_or_else(Scalar::one)
    }
    fn alpha(&self) -> Scalar {
        self.alpha.clone().unwrap_or_else(Scalar::one)
    }
    fn mu(&self) -> Scalar {
        self.mu.clone().unwrap_or_else(Scalar::one)
    }
    fn a(&self) -> Scalar {
        self.a.clone().unwrap_or_else(Scalar::zero)
    }
    fn b(&self) -> Scalar {
        self.b.clone().unwrap_or_else(Scalar::zero)
    }

    fn family_or(&self, default: Family) -> Family {
        self.family.unwrap_or(default)
    }

    fn triple(&self, fam: Family) -> BracketTriple {
        match fam {
            Family::First => family_first(&self.lambda()),
            Family::Second => family_second(&self.alpha()),
            Family::Third => family_third(&self.mu()),
            Family::Rc1 => rc1_modular_triple(),
        }
    }

    fn family_params(&self, fam: Family, params: &mut BTreeMap<String, String>) {
        params.insert("family".into(), fam.name().into());
        match fam {
            Family::First => params.insert("lambda".into(), self.lambda().to_string()),
            Family::Second => params.insert("alpha".into(), self.alpha().to_string()),
            Family::Third => params.insert("mu".into(), self.mu().to_string()),
            Family::Rc1 => None,
        };
    }
}

struct Builder {
    check: &'static str,
    params: BTreeMap<String, String>,
    witnesses: Vec<Witness>,
    lines: Vec<String>,
}

impl Builder {
    fn new(check: &'static str) -> Self {
        Builder {
            check,
            params: BTreeMap::new(),
            witnesses: Vec::new(),
            lines: Vec::new(),
        }
    }

    fn param(&mut self, k: &str, v: impl ToString) {
        self.params.insert(k.into(), v.to_string());
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn finish(self, ok: bool, expect_fail: bool) -> CheckOutcome {
        let mut params = self.params;
        if expect_fail {
            params.insert("expect_fail".into(), "true".into());
        }
        let pass = ok != expect_fail;
        CheckOutcome {
            report: CheckReport {
                check: self.check.into(),
                parameters: params,
                status: if pass { Status::Pass } else { Status::Fail },
                witnesses: self.witnesses,
            },
            lines: self.lines,
        }
    }
}

fn pretty(ps: &[Poly]) -> Vec<String> {
    ps.iter().map(Poly::to_string).collect()
}

/// `c*Delta^j*E2^i` when `f` has that form, else the expanded polynomial.
pub fn delta_form(f: &Poly) -> String {
    let d = delta();
    let mut rest = f.clone();
    let mut j = 0;
    while let Some(q) = rest.div_exact(&d) {
        rest = q;
        j += 1;
    }
    let mut it = rest.terms();
    let (Some((m, c)), None) = (it.next(), it.next()) else {
        return f.to_string();
    };
    if j == 0 || m.e4 != 0 || m.e6 != 0 {
        return f.to_string();
    }
    let mut parts = Vec::new();
    if !c.is_one() {
        parts.push(c.to_string());
    }
    parts.push(if j == 1 {
        "Delta".to_string()
    } else {
        format!("Delta^{j}")
    });
    match m.e2 {
        0 => {}
        1 => parts.push("E2".into()),
        e => parts.push(format!("E2^{e}")),
    }
    parts.join("*")
}

fn pretty_basis(ps: &[Poly]) -> Vec<String> {
    ps.iter().map(delta_form).collect()
}

/// Run one named check.
pub fn run_check(name: &str, opts: &Options) -> Result<CheckOutcome> {
    match name {
        "jacobi" => Ok(check_jacobi(opts)),
        "admissible" => Ok(check_admissible(opts)),
        "unimodular" => check_unimodular(opts),
        "potential" => Ok(check_potential(opts)),
        "center" => Ok(check_center(opts)),
        "centralizer" => Ok(check_centralizer(opts)),
        "classify" => check_classify(opts),
        "assoc" => check_assoc(opts),
        "depth" => check_depth(opts),
        "qexp" => check_qexp(opts),
        "morphism" => check_morphism(opts),
        "rcshape" => check_rcshape(opts),
        _ => Err(Error::Unsupported(format!("unknown check {name:?}"))),
    }
}

fn check_jacobi(opts: &Options) -> CheckOutcome {
    let fam = opts.family_or(Family::First);
    let mut b = Builder::new("jacobi");
    opts.family_params(fam, &mut b.params);
    let triple = opts.triple(fam);
    let poissonian = is_poissonian(&triple);
    let jac = jacobiator(&triple, &Poly::e2(), &Poly::e4(), &Poly::e6());
    b.line(format!("(p,q,r).curl(p,q,r) = 0: {poissonian}"));
    b.line(format!("jacobiator(E2,E4,E6) = {jac}"));
    if !jac.is_zero() {
        b.witnesses.push(Witness {
            inputs: pretty(&[Poly::e2(), Poly::e4(), Poly::e6()]),
            residual: Some(jac.to_string()),
            ..Default::default()
        });
    }
    b.finish(poissonian && jac.is_zero(), opts.expect_fail)
}

fn check_admissible(opts: &Options) -> CheckOutcome {
    let fam = opts.family_or(Family::First);
    let maxw = opts.maxweight.unwrap_or(20);
    let mut b = Builder::new("admissible");
    opts.family_params(fam, &mut b.params);
    b.param("maxweight", maxw);
    let triple = opts.triple(fam);
    let adm = is_admissible(&triple);
    b.line(format!("admissible: {adm}"));
    let monos = test_monomials(true, maxw);
    let mut pairs = 0;
    for f in &monos {
        for g in &monos {
            if f.homogeneous_weight().unwrap() + g.homogeneous_weight().unwrap() > maxw {
                continue;
            }
            pairs += 1;
            let diff = &triple.apply(f, g) - &rc_modular(1, f, g);
            if !diff.is_zero() {
                b.witnesses.push(Witness {
                    inputs: pretty(&[f.clone(), g.clone()]),
                    residual: Some(diff.to_string()),
                    ..Default::default()
                });
            }
        }
    }
    b.line(format!(
        "restriction to modular pairs (total weight <= {maxw}): {pairs} pairs, {} mismatches",
        b.witnesses.len()
    ));
    let ok = adm && b.witnesses.is_empty();
    b.finish(ok, opts.expect_fail)
}

/// Parameter value of the second family that a triple reduces to, if any.
fn as_second_alpha(fam: Family, opts: &Options) -> Option<Scalar> {
    match fam {
        Family::Second => Some(opts.alpha()),
        Family::Rc1 => Some(Scalar::zero()),
        Family::First if opts.lambda().is_zero() => Some(Scalar::frac(-2, 3)),
        Family::Third if opts.mu().is_zero() => Some(Scalar::int(4)),
        _ => None,
    }
}

fn predicted_unimodular(fam: Family, opts: &Options) -> bool {
    match as_second_alpha(fam, opts) {
        Some(alpha) => alpha == Scalar::int(4),
        None => fam == Family::Third,
    }
}

fn check_unimodular(opts: &Options) -> Result<CheckOutcome> {
    let fam = opts.family_or(Family::First);
    let maxw = opts.maxweight.unwrap_or(20);
    let mut b = Builder::new("unimodular");
    opts.family_params(fam, &mut b.params);
    b.param("maxweight", maxw);
    let triple = opts.triple(fam);
    let found = crate::structure::unimodularity_search(&triple, maxw)?;
    let predicted = predicted_unimodular(fam, opts);
    let observed = match &found {
        Unimodularity::Unimodular {
            potential,
            casimirs,
        } => {
            b.line(format!("solution found: k = {potential}"));
            b.line(format!(
                "homogeneous solutions: {}",
                pretty(casimirs).join(", ")
            ));
            b.witnesses.push(Witness {
                inputs: vec![format!("weight <= {maxw}")],
                residual: Some(potential.to_string()),
                basis: Some(pretty(casimirs)),
                ..Default::default()
            });
            true
        }
        Unimodularity::NotUnimodular(cert) => {
            b.line(format!("no solution of weight <= {maxw}: {cert}"));
            b.witnesses.push(Witness {
                inputs: vec![format!("weight <= {maxw}")],
                certificate: Some(cert.to_string()),
                ..Default::default()
            });
            false
        }
    };
    b.line(format!("predicted unimodular: {predicted}"));
    Ok(b.finish(observed == predicted, opts.expect_fail))
}

fn predicted_potential(fam: Family, opts: &Options) -> Option<Poly> {
    let k0 = (&delta() * &Poly::e2()).scale(&Scalar::int(-2));
    match fam {
        Family::Third => Some(&k0 + &(&Poly::e4().pow_u(2) * &Poly::e6()).scale(&opts.mu())),
        _ => (as_second_alpha(fam, opts) == Some(Scalar::int(4))).then_some(k0),
    }
}

fn check_potential(opts: &Options) -> CheckOutcome {
    let fam = opts.family_or(Family::Third);
    let mut b = Builder::new("potential");
    opts.family_params(fam, &mut b.params);
    let triple = opts.triple(fam);
    let found = recover_potential(&triple);
    let predicted = predicted_potential(fam, opts);
    b.line(format!(
        "recovered potential: {}",
        found.as_ref().map_or("none".to_string(), Poly::to_string)
    ));
    b.line(format!(
        "predicted potential: {}",
        predicted
            .as_ref()
            .map_or("none".to_string(), Poly::to_string)
    ));
    if let Some(k) = &found {
        b.witnesses.push(Witness {
            inputs: vec![fam.name().into()],
            residual: Some(k.to_string()),
            ..Default::default()
        });
    }
    b.finish(found == predicted, opts.expect_fail)
}

/// Generator of the Poisson center beyond the constants, as the theory
/// predicts; `None` when the center is the constants only.
pub fn predicted_center_generator(triple_family: Family, opts: &Options) -> Option<Poly> {
    if triple_family == Family::Third && !opts.mu().is_zero() {
        return predicted_potential(Family::Third, opts);
    }
    let alpha = as_second_alpha(triple_family, opts)?;
    let q = alpha.as_rational()?.clone();
    if q.is_zero() {
        return Some(Poly::e2());
    }
    if q.is_negative() {
        return None;
    }
    let (p, den) = (q.numer().clone(), q.denom().clone());
    let to_u32 = |x: &BigInt| u32::try_from(x).ok();
    let (p, den) = (to_u32(&p)?, to_u32(&den)?);
    let (dpow, e2pow) = if p % 2 == 1 {
        (p, 4 * den)
    } else if (p / 2) % 2 == 1 {
        (p / 2, 2 * den)
    } else {
        (p / 4, den)
    };
    Some(&delta().pow_u(dpow) * &Poly::e2().pow_u(e2pow))
}

/// Expected center basis in weight `w` given the generator.
pub fn predicted_center_basis(generator: Option<&Poly>, w: u32) -> Vec<Poly> {
    if w == 0 {
        return vec![Poly::one()];
    }
    let Some(g) = generator else {
        return Vec::new();
    };
    let gw = g.homogeneous_weight().expect("homogeneous generator");
    if w.is_multiple_of(gw) {
        vec![g.pow_u(w / gw)]
    } else {
        Vec::new()
    }
}

fn check_center(opts: &Options) -> CheckOutcome {
    let fam = opts.family_or(Family::Second);
    let maxw = opts.maxweight.unwrap_or(24);
    let mut b = Builder::new("center");
    opts.family_params(fam, &mut b.params);
    b.param("maxweight", maxw);
    let triple = opts.triple(fam);
    let generator = predicted_center_generator(fam, opts);
    let mut ok = true;
    for (w, basis) in truncated_center(&triple, maxw) {
        let expected = predicted_center_basis(generator.as_ref(), w);
        let agree = same_span(&basis, &expected);
        ok &= agree;
        if !basis.is_empty() || !agree {
            b.line(format!(
                "w={w}: {{{}}}{}",
                pretty_basis(&basis).join(", "),
                if agree { "" } else { "  (unexpected)" }
            ));
            b.witnesses.push(Witness {
                inputs: vec![format!("weight {w}")],
                basis: Some(pretty_basis(&basis)),
                ..Default::default()
            });
        }
    }
    if generator.as_ref().is_some_and(|_| triple.has_parameter()) {
        b.line("symbolic parameter: generic-parameter evidence only");
    }
    b.finish(ok, opts.expect_fail)
}

fn check_centralizer(opts: &Options) -> CheckOutcome {
    let fam = opts.family_or(Family::First);
    let maxw = opts.maxweight.unwrap_or(12);
    let g = opts.element.clone().unwrap_or_else(Poly::e2);
    let mut b = Builder::new("centralizer");
    opts.family_params(fam, &mut b.params);
    b.param("maxweight", maxw);
    b.param("element", &g);
    let triple = opts.triple(fam);
    let predicted: Option<Poly> = match fam {
        Family::First if g == Poly::e2() && !opts.lambda().is_zero() => Some(Poly::e2()),
        _ => None,
    };
    let mut ok = true;
    for (w, basis) in truncated_centralizer(&triple, &g, maxw) {
        let commute = basis.iter().all(|f| triple.apply(&g, f).is_zero());
        let agree = match &predicted {
            Some(p) => same_span(&basis, &predicted_center_basis(Some(p), w)),
            None => true,
        };
        ok &= commute && agree;
        if !basis.is_empty() {
            b.line(format!("w={w}: {{{}}}", pretty_basis(&basis).join(", ")));
            b.witnesses.push(Witness {
                inputs: vec![format!("weight {w}")],
                basis: Some(pretty_basis(&basis)),
                ..Default::default()
            });
        }
    }
    b.finish(ok, opts.expect_fail)
}

fn predicted_class(fam: Family, opts: &Options) -> Classification {
    if let Some(alpha) = as_second_alpha(fam, opts) {
        return Classification::Second { alpha };
    }
    match fam {
        Family::First => Classification::First {
            lambda: opts.lambda(),
        },
        _ => Classification::Third { mu: opts.mu() },
    }
}

fn check_classify(opts: &Options) -> Result<CheckOutcome> {
    let fam = opts.family_or(Family::First);
    let mut b = Builder::new("classify");
    opts.family_params(fam, &mut b.params);
    let triple = opts.triple(fam);
    let tag = classify_admissible(&triple)?;
    let predicted = predicted_class(fam, opts);
    b.line(format!("classification: {tag}"));
    b.line(format!("predicted: {predicted}"));
    b.witnesses.push(Witness {
        inputs: vec![
            triple.r12.to_string(),
            triple.p46.to_string(),
            triple.q62.to_string(),
        ],
        residual: Some(tag.to_string()),
        ..Default::default()
    });
    Ok(b.finish(tag == predicted, opts.expect_fail))
}

fn rule_from(opts: &Options, b: &mut Builder) -> Result<Rule> {
    let name = opts.rule.clone().unwrap_or_else(|| "eholzer".into());
    b.param("rule", &name);
    Ok(match name.as_str() {
        "eholzer" => Rule::Eholzer,
        "mr" => Rule::Quasimodular,
        "zagier" => {
            b.param("a", opts.a());
            Rule::Zagier(partial_a(&opts.a()))
        }
        "kappa" => {
            b.param("alpha", opts.alpha());
            b.param("b", opts.b());
            Rule::Kappa {
                alpha: opts.alpha(),
                derivation: delta_alpha_b(&opts.alpha(), &opts.b()),
            }
        }
        "cm" => {
            b.param("alpha", opts.alpha());
            Rule::ConnesMoscovici {
                e: delta_alpha_b(&opts.alpha(), &Scalar::zero()),
                h: varpi(&opts.alpha()).scale(&Scalar::frac(1, 2)),
            }
        }
        other => return Err(Error::Unsupported(format!("unknown rule {other:?}"))),
    })
}

fn check_assoc(opts: &Options) -> Result<CheckOutcome> {
    let mut b = Builder::new("assoc");
    let rule = rule_from(opts, &mut b)?;
    let order = opts.order.unwrap_or(3);
    let default_w = if matches!(rule, Rule::Eholzer) { 12 } else { 6 };
    let maxw = opts.maxweight.unwrap_or(default_w);
    b.param("order", order);
    b.param("maxweight", maxw);
    let s = StarTruncation::new(rule, order)?;
    let report = certify_deformation(&s, order, maxw);
    b.line(format!(
        "{} ordered triples, orders 0..={order}: {} nonzero residuals",
        report.triples,
        report.residuals.len()
    ));
    for w in report.residuals.iter().take(5) {
        b.line(format!(
            "order {} on ({}, {}, {}): {}",
            w.n, w.f, w.g, w.h, w.residual
        ));
    }
    for w in &report.residuals {
        b.witnesses.push(Witness {
            inputs: vec![
                w.n.to_string(),
                w.f.to_string(),
                w.g.to_string(),
                w.h.to_string(),
            ],
            residual: Some(w.residual.to_string()),
            ..Default::default()
        });
    }
    Ok(b.finish(report.passed(), opts.expect_fail))
}

fn check_depth(opts: &Options) -> Result<CheckOutcome> {
    let mut b = Builder::new("depth");
    let rule = rule_from(opts, &mut b)?;
    let order = opts.order.unwrap_or(3);
    let maxw = opts.maxweight.unwrap_or(14);
    b.param("order", order);
    b.param("maxweight", maxw);
    let modular = rule.is_modular();
    let s = StarTruncation::new(rule, order)?;
    let monos = test_monomials(modular, maxw);
    let mut pairs = 0;
    for f in &monos {
        for g in &monos {
            let wf = f.homogeneous_weight().unwrap_or(0);
            let wg = g.homogeneous_weight().unwrap_or(0);
            if wf + wg > maxw {
                continue;
            }
            pairs += 1;
            for n in 0..=order {
                let prof = depth_profile(&s, n, f, g)?;
                if !prof.within_bound() {
                    b.witnesses.push(Witness {
                        inputs: vec![n.to_string(), f.to_string(), g.to_string()],
                        residual: Some(s.term(n, f, g).to_string()),
                        certificate: Some(format!(
                            "depth {} exceeds {}",
                            prof.actual.unwrap_or(0),
                            prof.expected_bound
                        )),
                        ..Default::default()
                    });
                }
            }
        }
    }
    b.line(format!(
        "{pairs} pairs (total weight <= {maxw}), orders 0..={order}: {} violations of depth <= s+t",
        b.witnesses.len()
    ));
    if let Some(w) = b.witnesses.first().cloned() {
        b.line(format!(
            "first violation: order {} on ({}, {})",
            w.inputs[0], w.inputs[1], w.inputs[2]
        ));
    }
    let ok = b.witnesses.is_empty();
    Ok(b.finish(ok, opts.expect_fail))
}

/// Random weight-homogeneous polynomial with small integer coefficients.
pub fn random_homogeneous<R: Rng>(rng: &mut R, weight: u32, modular_only: bool) -> Poly {
    let monos: Vec<Monomial> = if modular_only {
        Monomial::modular_of_weight(weight)
    } else {
        Monomial::of_weight(weight)
    };
    let mut out = Poly::zero();
    while out.is_zero() && !monos.is_empty() {
        for m in &monos {
            if rng.gen_bool(0.6) {
                out.add_term(*m, Scalar::int(rng.gen_range(-5..=5)));
            }
        }
    }
    out
}

fn series(f: &Poly, n: usize) -> QSeries {
    evaluate(f, n, None).expect("rational polynomial")
}

fn check_qexp(opts: &Options) -> Result<CheckOutcome> {
    let n = opts.order.unwrap_or(50);
    let mut b = Builder::new("qexp");
    b.param("order", n);
    let d = ramanujan_d();
    let mut ok = true;
    for g in [Poly::e2(), Poly::e4(), Poly::e6(), delta()] {
        let lhs = q_derivative(&series(&g, n));
        let rhs = series(&d.apply(&g), n);
        let agree = lhs == rhs;
        ok &= agree;
        b.line(format!("D({g}) = {}: {agree}", d.apply(&g)));
        if !agree {
            b.witnesses.push(Witness {
                inputs: vec![g.to_string()],
                residual: Some(lhs.sub(&rhs).to_string()),
                ..Default::default()
            });
        }
    }
    let c1 = series(&delta(), n.max(1)).coeff(1).clone();
    let c1_ok = c1 == BigRational::from_integer(1728.into());
    ok &= c1_ok;
    b.line(format!("q-coefficient of Delta: {c1}"));

    let m = n.min(30);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut rc_ok = 0;
    for _ in 0..20 {
        let k = 2 * rng.gen_range(2..=8);
        let l = 2 * rng.gen_range(2..=8);
        let f = random_homogeneous(&mut rng, k, true);
        let g = random_homogeneous(&mut rng, l, true);
        let (sf, sg) = (series(&f, m), series(&g, m));
        let kq = BigRational::from_integer(k.into());
        let lq = BigRational::from_integer(l.into());
        let rhs = sf
            .mul(&q_derivative(&sg))
            .scale(&kq)
            .sub(&sg.mul(&q_derivative(&sf)).scale(&lq));
        let lhs = series(&rc_modular(1, &f, &g), m);
        if lhs == rhs {
            rc_ok += 1;
        } else {
            ok = false;
            b.witnesses.push(Witness {
                inputs: vec![f.to_string(), g.to_string()],
                residual: Some(lhs.sub(&rhs).to_string()),
                ..Default::default()
            });
        }
    }
    b.line(format!(
        "RC_1 identity through q^{m}: {rc_ok}/20 random modular pairs"
    ));
    Ok(b.finish(ok && c1_ok, opts.expect_fail))
}

fn check_morphism(opts: &Options) -> Result<CheckOutcome> {
    let fam = opts.family_or(Family::First);
    let mut b = Builder::new("morphism");
    opts.family_params(fam, &mut b.params);
    let one = Scalar::one();
    let mut ok = true;
    match fam {
        Family::First | Family::Third => {
            let (eta, src, dst) = match fam {
                Family::First => (
                    opts.lambda(),
                    family_first(&opts.lambda()),
                    family_first(&one),
                ),
                _ => (opts.mu(), family_third(&opts.mu()), family_third(&one)),
            };
            let m = check_scaling_morphism(&eta, &src, &dst)?;
            b.line(format!(
                "E2 -> ({eta})*E2 maps {} to parameter 1: {m}",
                fam.name()
            ));
            ok &= m;
        }
        Family::Second | Family::Rc1 => {}
    }
    let theta = serre_theta();
    let realization = match fam {
        Family::First => Some((
            theta.scale(&Scalar::int(2)),
            Derivation::new(
                Poly::zero(),
                Poly::e4().pow_u(2).scale(&Scalar::frac(1, 3)),
                (&Poly::e4() * &Poly::e6()).scale(&Scalar::frac(1, 2)),
            ),
            family_first(&one),
        )),
        Family::Second | Family::Rc1 => {
            let alpha = as_second_alpha(fam, opts).expect("second family");
            Some((
                theta.scale(&(Scalar::int(-3) * &alpha)),
                Derivation::zero(),
                family_second(&alpha),
            ))
        }
        Family::Third => None,
    };
    if let Some((sigma, delta_, expected)) = realization {
        let ore = ore_extension_bracket(&sigma, &delta_)?;
        let agree = ore == expected;
        b.line(format!("Ore extension with sigma = [{sigma}], delta = [{delta_}] reproduces the family: {agree}"));
        ok &= agree;
        b.witnesses.push(Witness {
            inputs: vec![sigma.to_string(), delta_.to_string()],
            residual: Some(format!("{{E2,E4}} = {}; {{E6,E2}} = {}", ore.r12, ore.q62)),
            ..Default::default()
        });
    }
    Ok(b.finish(ok, opts.expect_fail))
}

fn check_rcshape(opts: &Options) -> Result<CheckOutcome> {
    let mut b = Builder::new("rcshape");
    let mu = opts.mu.clone().unwrap_or_else(Scalar::t);
    b.param("mu", &mu);
    let triple = family_third(&mu);
    let outcome = rc_shape_solve(&triple)?;
    let predicted = mu.is_zero();
    match &outcome {
        RcShape::Solvable(sol) => {
            b.line(format!(
                "solvable: kappa = ({}, {}, {}), delta = [{}]",
                sol.kappa[0], sol.kappa[1], sol.kappa[2], sol.delta
            ));
            b.witnesses.push(Witness {
                inputs: vec![mu.to_string()],
                residual: Some(sol.delta.to_string()),
                ..Default::default()
            });
        }
        RcShape::Unsolvable(certs) => {
            for (g, c) in certs {
                b.line(format!("kappa({g}) = 1: {c}"));
                b.witnesses.push(Witness {
                    inputs: vec![format!("kappa({g}) = 1")],
                    certificate: Some(c.to_string()),
                    ..Default::default()
                });
            }
        }
    }
    b.line(format!("predicted solvable: {predicted}"));
    Ok(b.finish(outcome.is_solvable() == predicted, opts.expect_fail))
}

/// The fixed suite run by `verify all`, sorted by check name then parameters.
pub fn suite() -> Vec<(&'static str, Options)> {
    let s = |x: i64| Some(Scalar::int(x));
    let t = || Some(Scalar::t());
    let fam = |f| Some(f);
    let mut out: Vec<(&'static str, Options)> = vec![
        (
            "jacobi",
            Options {
                family: fam(Family::First),
                lambda: t(),
                ..Default::default()
            },
        ),
        (
            "jacobi",
            Options {
                family: fam(Family::Second),
                alpha: t(),
                ..Default::default()
            },
        ),
        (
            "jacobi",
            Options {
                family: fam(Family::Third),
                mu: t(),
                ..Default::default()
            },
        ),
        (
            "admissible",
            Options {
                family: fam(Family::First),
                lambda: s(1),
                ..Default::default()
            },
        ),
        (
            "admissible",
            Options {
                family: fam(Family::Second),
                alpha: s(1),
                ..Default::default()
            },
        ),
        (
            "admissible",
            Options {
                family: fam(Family::Third),
                mu: s(1),
                ..Default::default()
            },
        ),
        (
            "unimodular",
            Options {
                family: fam(Family::First),
                lambda: s(1),
                ..Default::default()
            },
        ),
        (
            "unimodular",
            Options {
                family: fam(Family::Second),
                alpha: s(1),
                ..Default::default()
            },
        ),
        (
            "unimodular",
            Options {
                family: fam(Family::Second),
                alpha: s(4),
                ..Default::default()
            },
        ),
        (
            "potential",
            Options {
                family: fam(Family::Third),
                mu: t(),
                ..Default::default()
            },
        ),
        (
            "potential",
            Options {
                family: fam(Family::First),
                lambda: s(1),
                ..Default::default()
            },
        ),
        (
            "center",
            Options {
                family: fam(Family::First),
                lambda: s(1),
                ..Default::default()
            },
        ),
        (
            "center",
            Options {
                family: fam(Family::Second),
                alpha: s(1),
                ..Default::default()
            },
        ),
        (
            "center",
            Options {
                family: fam(Family::Third),
                mu: s(1),
                maxweight: Some(28),
                ..Default::default()
            },
        ),
        (
            "centralizer",
            Options {
                family: fam(Family::First),
                lambda: s(1),
                ..Default::default()
            },
        ),
        (
            "classify",
            Options {
                family: fam(Family::First),
                lambda: s(1),
                ..Default::default()
            },
        ),
        (
            "classify",
            Options {
                family: fam(Family::Second),
                alpha: t(),
                ..Default::default()
            },
        ),
        (
            "classify",
            Options {
                family: fam(Family::Third),
                mu: t(),
                ..Default::default()
            },
        ),
        (
            "assoc",
            Options {
                rule: Some("eholzer".into()),
                order: Some(3),
                maxweight: Some(12),
                ..Default::default()
            },
        ),
        (
            "assoc",
            Options {
                rule: Some("zagier".into()),
                a: t(),
                order: Some(3),
                maxweight: Some(6),
                ..Default::default()
            },
        ),
        (
            "assoc",
            Options {
                rule: Some("kappa".into()),
                alpha: Some(Scalar::frac(-1, 3)),
                b: s(1),
                order: Some(3),
                maxweight: Some(8),
                expect_fail: true,
                ..Default::default()
            },
        ),
        (
            "depth",
            Options {
                rule: Some("zagier".into()),
                a: s(0),
                order: Some(3),
                maxweight: Some(14),
                ..Default::default()
            },
        ),
        (
            "depth",
            Options {
                rule: Some("zagier".into()),
                a: s(1),
                order: Some(2),
                maxweight: Some(6),
                expect_fail: true,
                ..Default::default()
            },
        ),
        (
            "qexp",
            Options {
                order: Some(50),
                ..Default::default()
            },
        ),
        (
            "morphism",
            Options {
                family: fam(Family::First),
                lambda: t(),
                ..Default::default()
            },
        ),
        (
            "morphism",
            Options {
                family: fam(Family::Second),
                alpha: t(),
                ..Default::default()
            },
        ),
        (
            "morphism",
            Options {
                family: fam(Family::Third),
                mu: t(),
                ..Default::default()
            },
        ),
        (
            "rcshape",
            Options {
                mu: s(0),
                ..Default::default()
            },
        ),
        (
            "rcshape",
            Options {
                mu: t(),
                ..Default::default()
            },
        ),
    ];
    out.sort_by_key(|(name, _)| *name);
    out
}

/// Run the whole suite.
pub fn run_all() -> Result<Vec<CheckOutcome>> {
    let mut outs = suite()
        .into_iter()
        .map(|(name, opts)| run_check(name, &opts))
        .collect::<Result<Vec<_>>>()?;
    outs.sort_by(|x, y| {
        (x.report.check.as_str(), &x.report.parameters)
            .cmp(&(y.report.check.as_str(), &y.report.parameters))
    });
    Ok(outs)
}
