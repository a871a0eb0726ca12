//! Structural analysis of bracket triples.
//!
//! Identities between derivations, brackets and algebra maps are checked on
//! the generator pairs only; the defect of each identity is a biderivation
//! (or a biderivation over the map), so vanishing on generators is enough.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::brackets::{rc1_modular_triple, BracketTriple, GENERATOR_PAIRS};
use crate::derivations::Derivation;
use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank, solve, Matrix, Solution};
use crate::poly::{delta, Generator, Monomial, Poly};
use crate::scalar::Scalar;

/// `(dr/dE4 - dq/dE6, dp/dE6 - dr/dE2, dq/dE2 - dp/dE4)`.
pub fn curl_triple(p: &Poly, q: &Poly, r: &Poly) -> [Poly; 3] {
    use Generator::*;
    [
        &r.partial(E4) - &q.partial(E6),
        &p.partial(E6) - &r.partial(E2),
        &q.partial(E2) - &p.partial(E4),
    ]
}

pub fn curl_of(b: &BracketTriple) -> [Poly; 3] {
    curl_triple(&b.p46, &b.q62, &b.r12)
}

fn dot(a: [&Poly; 3], b: &[Poly; 3]) -> Poly {
    &(&(a[0] * &b[0]) + &(a[1] * &b[1])) + &(a[2] * &b[2])
}

fn cross(a: [&Poly; 3], b: [&Poly; 3]) -> [Poly; 3] {
    [
        &(a[1] * b[2]) - &(a[2] * b[1]),
        &(a[2] * b[0]) - &(a[0] * b[2]),
        &(a[0] * b[1]) - &(a[1] * b[0]),
    ]
}

pub fn gradient(k: &Poly) -> [Poly; 3] {
    Generator::ALL.map(|g| k.partial(g))
}

/// `(p, q, r) . curl(p, q, r) = 0`.
pub fn is_poissonian(b: &BracketTriple) -> bool {
    dot(b.pqr(), &curl_of(b)).is_zero()
}

/// `det[grad f; grad g; grad k]`.
pub fn jacobian_det(f: &Poly, g: &Poly, k: &Poly) -> Poly {
    let (gf, gg, gk) = (gradient(f), gradient(g), gradient(k));
    dot(
        [&gk[0], &gk[1], &gk[2]],
        &cross([&gf[0], &gf[1], &gf[2]], [&gg[0], &gg[1], &gg[2]]),
    )
}

fn integrate(f: &Poly, g: Generator) -> Poly {
    Poly::from_terms(f.terms().map(|(m, c)| {
        let e = m.exponent(g);
        let mut up = *m;
        up.set_exponent(g, e + 1);
        (up, c / &Scalar::int(e as i64 + 1))
    }))
}

/// The potential `k` with `grad k = (p, q, r)` and no constant term, if the triple is a gradient.
pub fn recover_potential(b: &BracketTriple) -> Option<Poly> {
    use Generator::*;
    if curl_of(b).iter().any(|c| !c.is_zero()) {
        return None;
    }
    let mut k = integrate(&b.p46, E2);
    let rest = &b.q62 - &k.partial(E4);
    k = &k + &integrate(&rest, E4);
    let rest = &b.r12 - &k.partial(E6);
    k = &k + &integrate(&rest, E6);
    let target = [&b.p46, &b.q62, &b.r12];
    let grad = gradient(&k);
    (0..3).all(|i| &grad[i] == target[i]).then_some(k)
}

/// A row combination `y` with `y^T A = 0` and `y^T b = value != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// Equation labels with their multipliers.
    pub combination: Vec<(String, Scalar)>,
    pub value: Scalar,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .combination
            .iter()
            .map(|(label, c)| format!("({c})*{label}"))
            .collect();
        write!(f, "{} gives 0 = {}", parts.join(" + "), self.value)
    }
}

fn certificate_from(labels: &[String], y: &[Scalar], rhs: &[Scalar]) -> Certificate {
    let combination = labels
        .iter()
        .zip(y)
        .filter(|(_, c)| !c.is_zero())
        .map(|(l, c)| (l.clone(), c.clone()))
        .collect();
    let value = y.iter().zip(rhs).map(|(a, b)| a * b).sum();
    Certificate { combination, value }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Unimodularity {
    /// `potential` solves the equation; adding any combination of
    /// `casimirs` gives the other solutions of weight at most the bound.
    Unimodular {
        potential: Poly,
        casimirs: Vec<Poly>,
    },
    NotUnimodular(Certificate),
}

const COMPONENT: [&str; 3] = ["E2", "E4", "E6"];

fn row_label(key: &(usize, Monomial)) -> String {
    format!("component {} at {}", COMPONENT[key.0], key.1)
}

/// Search `k` of weight at most `max_weight` with `curl(p,q,r) = (p,q,r) x grad k`.
///
/// Columns are grouped by the weight of `k`; groups that touch a common
/// equation are merged, and each group is solved on its own.
pub fn unimodularity_search(b: &BracketTriple, max_weight: u32) -> Result<Unimodularity> {
    if !b.is_weight_homogeneous() {
        return Err(Error::NonHomogeneousTriple);
    }
    let pqr = b.pqr();
    let curl = curl_of(b);

    struct Block {
        columns: Vec<(Monomial, [Poly; 3])>,
        rows: BTreeSet<(usize, Monomial)>,
    }
    let mut blocks: Vec<Block> = Vec::new();
    for w in (0..=max_weight).step_by(2) {
        let mut block = Block {
            columns: Vec::new(),
            rows: BTreeSet::new(),
        };
        for m in Monomial::of_weight(w) {
            let gk = gradient(&Poly::monomial(m));
            let image = cross(pqr, [&gk[0], &gk[1], &gk[2]]);
            for (c, comp) in image.iter().enumerate() {
                block.rows.extend(comp.monomials().map(|mm| (c, *mm)));
            }
            block.columns.push((m, image));
        }
        let mut merged = block;
        let mut kept = Vec::new();
        for other in blocks.drain(..) {
            if other.rows.is_disjoint(&merged.rows) {
                kept.push(other);
            } else {
                merged.columns.extend(other.columns);
                merged.rows.extend(other.rows);
            }
        }
        kept.push(merged);
        blocks = kept;
    }

    let mut targets: Vec<BTreeMap<(usize, Monomial), Scalar>> = vec![BTreeMap::new(); blocks.len()];
    for (c, comp) in curl.iter().enumerate() {
        for (m, coeff) in comp.terms() {
            let key = (c, *m);
            match blocks.iter().position(|bl| bl.rows.contains(&key)) {
                Some(i) => {
                    targets[i].insert(key, coeff.clone());
                }
                None => {
                    return Ok(Unimodularity::NotUnimodular(Certificate {
                        combination: vec![(row_label(&key), Scalar::one())],
                        value: coeff.clone(),
                    }));
                }
            }
        }
    }

    let mut potential = Poly::zero();
    let mut casimirs = Vec::new();
    for (block, target) in blocks.iter().zip(&targets) {
        let keys: Vec<(usize, Monomial)> = block.rows.iter().copied().collect();
        let index: BTreeMap<(usize, Monomial), usize> =
            keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut a = Matrix::zeros(keys.len(), block.columns.len());
        for (j, (_, image)) in block.columns.iter().enumerate() {
            for (c, comp) in image.iter().enumerate() {
                for (m, coeff) in comp.terms() {
                    a.set(index[&(c, *m)], j, coeff.clone());
                }
            }
        }
        let rhs: Vec<Scalar> = keys
            .iter()
            .map(|k| target.get(k).cloned().unwrap_or_else(Scalar::zero))
            .collect();
        let monos: Vec<Monomial> = block.columns.iter().map(|(m, _)| *m).collect();
        let to_poly = |v: &[Scalar]| Poly::from_terms(monos.iter().copied().zip(v.iter().cloned()));
        match solve(&a, &rhs) {
            Solution::Infeasible { certificate } => {
                let labels: Vec<String> = keys.iter().map(row_label).collect();
                return Ok(Unimodularity::NotUnimodular(certificate_from(
                    &labels,
                    &certificate,
                    &rhs,
                )));
            }
            Solution::Feasible {
                particular,
                homogeneous,
            } => {
                potential = &potential + &to_poly(&particular);
                casimirs.extend(homogeneous.iter().map(|v| to_poly(v)));
            }
        }
    }
    casimirs.sort_by_key(|p| p.monomials().next().copied());
    Ok(Unimodularity::Unimodular {
        potential,
        casimirs,
    })
}

fn weight_depth_at_most(p: &Poly, weight: u32, depth: u32) -> bool {
    p.monomials()
        .all(|m| m.weight() == weight && m.depth() <= depth)
}

/// The shape part of admissibility: `{E4,E6} = -2 Delta`, `{E2,E4}` of
/// weight 8 and `{E6,E2}` of weight 10, both of depth at most one.
pub fn has_admissible_shape(b: &BracketTriple) -> bool {
    b.p46 == delta().scale(&Scalar::int(-2))
        && weight_depth_at_most(&b.r12, 8, 1)
        && weight_depth_at_most(&b.q62, 10, 1)
}

pub fn is_admissible(b: &BracketTriple) -> bool {
    has_admissible_shape(b) && is_poissonian(b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    First { lambda: Scalar },
    Second { alpha: Scalar },
    Third { mu: Scalar },
    Reject,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::First { lambda } => write!(f, "First(lambda={lambda})"),
            Classification::Second { alpha } => write!(f, "Second(alpha={alpha})"),
            Classification::Third { mu } => write!(f, "Third(mu={mu})"),
            Classification::Reject => write!(f, "Reject"),
        }
    }
}

/// Ore parameters `(alpha, beta, gamma, epsilon)` of an admissible-shaped triple:
/// `{E2,E4} = alpha E2 E6 + beta E4^2`, `{E6,E2} = -(gamma E2 E4^2 + epsilon E4 E6)`.
pub fn ore_parameters(b: &BracketTriple) -> Result<[Scalar; 4]> {
    if !has_admissible_shape(b) {
        return Err(Error::NotAdmissibleShape(format!(
            "{{E2,E4}} = {}, {{E4,E6}} = {}, {{E6,E2}} = {}",
            b.r12, b.p46, b.q62
        )));
    }
    let alpha = b.r12.coeff(&Monomial::new(1, 0, 1));
    let beta = b.r12.coeff(&Monomial::new(0, 2, 0));
    let gamma = -b.q62.coeff(&Monomial::new(1, 2, 0));
    let epsilon = -b.q62.coeff(&Monomial::new(0, 1, 1));
    Ok([alpha, beta, gamma, epsilon])
}

/// The matrix of the linear system in `(beta, epsilon)`.
pub fn ore_system_matrix(alpha: &Scalar) -> [[Scalar; 2]; 2] {
    [
        [Scalar::int(4), alpha - &Scalar::int(2)],
        [Scalar::int(3) * alpha - Scalar::int(4), Scalar::int(4)],
    ]
}

pub fn ore_system_determinant(alpha: &Scalar) -> Scalar {
    let m = ore_system_matrix(alpha);
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

/// Sort an admissible-shaped triple into one of the three families.
///
/// Triples of the right shape that are not Poisson come back as `Reject`;
/// a triple of the wrong shape is an error.
pub fn classify_admissible(b: &BracketTriple) -> Result<Classification> {
    let [alpha, beta, gamma, epsilon] = ore_parameters(b)?;
    let three = Scalar::int(3);
    if &three * &alpha != Scalar::int(2) * &gamma {
        return Ok(Classification::Reject);
    }
    let m = ore_system_matrix(&alpha);
    let e1 = &m[0][0] * &beta + &m[0][1] * &epsilon;
    let e2 = &m[1][0] * &beta + &m[1][1] * &epsilon;
    if !e1.is_zero() || !e2.is_zero() {
        return Ok(Classification::Reject);
    }
    if beta.is_zero() && epsilon.is_zero() {
        return Ok(Classification::Second { alpha });
    }
    if alpha == Scalar::frac(-2, 3) && epsilon == &beta * &Scalar::frac(3, 2) {
        return Ok(Classification::First {
            lambda: &three * &beta,
        });
    }
    if alpha == Scalar::int(4) && epsilon == &beta * &Scalar::int(-2) {
        return Ok(Classification::Third { mu: beta });
    }
    Ok(Classification::Reject)
}

fn derivation_defect(
    sigma: &Derivation,
    b: &BracketTriple,
    pairs: &[(Generator, Generator)],
) -> bool {
    pairs.iter().all(|&(u, v)| {
        let (fu, fv) = (Poly::gen(u), Poly::gen(v));
        let lhs = sigma.apply(&b.apply(&fu, &fv));
        let rhs = &b.apply(sigma.value(u), &fv) + &b.apply(&fu, sigma.value(v));
        lhs == rhs
    })
}

fn sigma_derivation_defect(
    delta_: &Derivation,
    sigma: &Derivation,
    b: &BracketTriple,
    pairs: &[(Generator, Generator)],
) -> bool {
    pairs.iter().all(|&(u, v)| {
        let (fu, fv) = (Poly::gen(u), Poly::gen(v));
        let lhs = delta_.apply(&b.apply(&fu, &fv));
        let mut rhs = &b.apply(delta_.value(u), &fv) + &b.apply(&fu, delta_.value(v));
        rhs = &rhs + &(sigma.value(u) * delta_.value(v));
        rhs = &rhs - &(delta_.value(u) * sigma.value(v));
        lhs == rhs
    })
}

/// `sigma({f,g}) = {sigma f, g} + {f, sigma g}`.
pub fn is_poisson_derivation(sigma: &Derivation, b: &BracketTriple) -> bool {
    derivation_defect(sigma, b, &GENERATOR_PAIRS)
}

/// `delta({f,g}) = {delta f, g} + {f, delta g} + sigma(f) delta(g) - delta(f) sigma(g)`.
pub fn is_poisson_sigma_derivation(
    delta_: &Derivation,
    sigma: &Derivation,
    b: &BracketTriple,
) -> bool {
    sigma_derivation_defect(delta_, sigma, b, &GENERATOR_PAIRS)
}

fn acts_on_modular_forms(d: &Derivation) -> bool {
    d.value(Generator::E2).is_zero()
        && [Generator::E4, Generator::E6]
            .iter()
            .all(|g| d.value(*g).monomials().all(|m| m.e2 == 0))
}

/// Extension of `(M_*, RC_1)` by `E2` with `{E2, f} = sigma(f) E2 + delta(f)`.
pub fn ore_extension_bracket(sigma: &Derivation, delta_: &Derivation) -> Result<BracketTriple> {
    if !acts_on_modular_forms(sigma) || !acts_on_modular_forms(delta_) {
        return Err(Error::OreConditions(
            "sigma and delta must map modular forms to modular forms and vanish on E2".into(),
        ));
    }
    let base = rc1_modular_triple();
    let pair = [(Generator::E4, Generator::E6)];
    if !derivation_defect(sigma, &base, &pair) {
        return Err(Error::OreConditions(
            "sigma is not a Poisson derivation".into(),
        ));
    }
    if !sigma_derivation_defect(delta_, sigma, &base, &pair) {
        return Err(Error::OreConditions(
            "delta is not a Poisson sigma-derivation".into(),
        ));
    }
    let e2 = Poly::e2();
    let ext = |g: Generator| &(sigma.value(g) * &e2) + delta_.value(g);
    Ok(BracketTriple::new(
        ext(Generator::E4),
        base.p46.clone(),
        -ext(Generator::E6),
    ))
}

fn coordinates(p: &Poly, monos: &[Monomial]) -> Vec<Scalar> {
    monos.iter().map(|m| p.coeff(m)).collect()
}

/// Kernel of `f -> (B(g_1, f), ..., B(g_r, f))` on weight `w`.
fn common_kernel(b: &BracketTriple, gs: &[Poly], w: u32) -> Vec<Poly> {
    let monos = Monomial::of_weight(w);
    if monos.is_empty() {
        return Vec::new();
    }
    let images: Vec<Vec<Poly>> = monos
        .iter()
        .map(|m| {
            let f = Poly::monomial(*m);
            gs.iter().map(|g| b.apply(g, &f)).collect()
        })
        .collect();
    let mut row_keys: BTreeSet<(usize, Monomial)> = BTreeSet::new();
    for im in &images {
        for (i, p) in im.iter().enumerate() {
            row_keys.extend(p.monomials().map(|m| (i, *m)));
        }
    }
    let keys: Vec<(usize, Monomial)> = row_keys.into_iter().collect();
    let index: BTreeMap<(usize, Monomial), usize> =
        keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let mut a = Matrix::zeros(keys.len(), monos.len());
    for (j, im) in images.iter().enumerate() {
        for (i, p) in im.iter().enumerate() {
            for (m, c) in p.terms() {
                a.set(index[&(i, *m)], j, c.clone());
            }
        }
    }
    nullspace(&a)
        .into_iter()
        .map(|v| {
            let p = Poly::from_terms(monos.iter().copied().zip(v));
            let lead = p
                .terms()
                .next()
                .map(|(_, c)| c.clone())
                .expect("nonzero kernel vector");
            p.scale(&lead.recip().expect("nonzero"))
        })
        .collect()
}

/// Per even weight `w <= max_weight`, a basis of `{f of weight w : B(g, f) = 0}`.
pub fn truncated_centralizer(
    b: &BracketTriple,
    g: &Poly,
    max_weight: u32,
) -> Vec<(u32, Vec<Poly>)> {
    (0..=max_weight)
        .step_by(2)
        .map(|w| (w, common_kernel(b, std::slice::from_ref(g), w)))
        .collect()
}

/// Per even weight `w <= max_weight`, a basis of the Poisson center in weight `w`.
pub fn truncated_center(b: &BracketTriple, max_weight: u32) -> Vec<(u32, Vec<Poly>)> {
    let gens = [Poly::e2(), Poly::e4(), Poly::e6()];
    (0..=max_weight)
        .step_by(2)
        .map(|w| (w, common_kernel(b, &gens, w)))
        .collect()
}

/// Whether two lists of polynomials span the same space.
pub fn same_span(a: &[Poly], b: &[Poly]) -> bool {
    let monos: Vec<Monomial> = a
        .iter()
        .chain(b)
        .flat_map(|p| p.monomials().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let to_matrix = |ps: &[&Poly]| {
        Matrix::from_rows(
            ps.iter().map(|p| coordinates(p, &monos)).collect(),
            monos.len(),
        )
    };
    let ra = rank(&to_matrix(&a.iter().collect::<Vec<_>>()));
    let rb = rank(&to_matrix(&b.iter().collect::<Vec<_>>()));
    let rab = rank(&to_matrix(&a.iter().chain(b).collect::<Vec<_>>()));
    ra == rb && ra == rab
}

/// `phi(B_src(u, v)) = B_dst(phi u, phi v)` on generator pairs, where
/// `phi` sends `E2` to `eta E2` and fixes `E4`, `E6`.
pub fn check_scaling_morphism(
    eta: &Scalar,
    src: &BracketTriple,
    dst: &BracketTriple,
) -> Result<bool> {
    if eta.is_zero() {
        return Err(Error::ZeroScaling);
    }
    Ok(GENERATOR_PAIRS.iter().all(|&(u, v)| {
        let (fu, fv) = (Poly::gen(u), Poly::gen(v));
        let lhs = src.apply(&fu, &fv).scale_e2(eta);
        let rhs = dst.apply(&fu.scale_e2(eta), &fv.scale_e2(eta));
        lhs == rhs
    }))
}

/// Derivations spanning the complex-like shape
/// `E2 -> A E2^2 + B E4`, `E4 -> C E4 E2 + D E6`, `E6 -> E E6 E2 + F E4^2`.
pub fn complex_like_basis() -> [Derivation; 6] {
    let m = |a, b, c| Poly::monomial(Monomial::new(a, b, c));
    let z = Poly::zero;
    [
        Derivation::new(m(2, 0, 0), z(), z()),
        Derivation::new(m(0, 1, 0), z(), z()),
        Derivation::new(z(), m(1, 1, 0), z()),
        Derivation::new(z(), m(0, 0, 1), z()),
        Derivation::new(z(), z(), m(1, 0, 1)),
        Derivation::new(z(), z(), m(0, 2, 0)),
    ]
}

/// One equation `sum c * kappa[a] * x[j] = rhs` of the shape system.
#[derive(Clone, Debug)]
struct BilinearEq {
    label: String,
    terms: Vec<(usize, usize, Scalar)>,
    rhs: Scalar,
}

fn shape_equations(target: &BracketTriple) -> Vec<BilinearEq> {
    let basis = complex_like_basis();
    let mut out = Vec::new();
    for (u, v) in GENERATOR_PAIRS {
        let (fu, fv) = (Poly::gen(u), Poly::gen(v));
        let mut parts: Vec<(usize, usize, Poly)> = Vec::new();
        for (j, d) in basis.iter().enumerate() {
            parts.push((u.index(), j, &fu * d.value(v)));
            parts.push((v.index(), j, -(&fv * d.value(u))));
        }
        let rhs_poly = target.value(u, v);
        let monos: BTreeSet<Monomial> = parts
            .iter()
            .flat_map(|(_, _, p)| p.monomials().copied())
            .chain(rhs_poly.monomials().copied())
            .collect();
        for m in monos {
            let terms = parts
                .iter()
                .map(|(a, j, p)| (*a, *j, p.coeff(&m)))
                .filter(|(_, _, c)| !c.is_zero())
                .collect();
            out.push(BilinearEq {
                label: format!("{{{u},{v}}} at {m}"),
                terms,
                rhs: rhs_poly.coeff(&m),
            });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RcShapeSolution {
    /// `kappa(E2), kappa(E4), kappa(E6)`.
    pub kappa: [Scalar; 3],
    pub delta: Derivation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RcShape {
    Solvable(Box<RcShapeSolution>),
    /// One certificate per normalization `kappa(generator) = 1`.
    Unsolvable(Vec<(Generator, Certificate)>),
}

impl RcShape {
    pub fn is_solvable(&self) -> bool {
        matches!(self, RcShape::Solvable(_))
    }
}

enum Normalized {
    Found([Scalar; 3], Vec<Scalar>),
    Inconsistent(Certificate),
}

fn solve_normalized(eqs: &[BilinearEq], fixed: usize) -> Result<Normalized> {
    let mut kappa: [Option<Scalar>; 3] = [None, None, None];
    kappa[fixed] = Some(Scalar::one());
    loop {
        let known: Vec<&BilinearEq> = eqs
            .iter()
            .filter(|e| e.terms.iter().all(|(a, _, _)| kappa[*a].is_some()))
            .collect();
        let mut a = Matrix::zeros(known.len(), 6);
        let mut rhs = Vec::with_capacity(known.len());
        for (i, e) in known.iter().enumerate() {
            for (k, j, c) in &e.terms {
                let v = a.get(i, *j) + &(c * kappa[*k].as_ref().expect("known"));
                a.set(i, *j, v);
            }
            rhs.push(e.rhs.clone());
        }
        let labels: Vec<String> = known
            .iter()
            .map(|e| format!("{} with kappa = {}", e.label, kappa_text(&kappa)))
            .collect();
        let (particular, homogeneous) = match solve(&a, &rhs) {
            Solution::Infeasible { certificate } => {
                return Ok(Normalized::Inconsistent(certificate_from(
                    &labels,
                    &certificate,
                    &rhs,
                )))
            }
            Solution::Feasible {
                particular,
                homogeneous,
            } => (particular, homogeneous),
        };
        if kappa.iter().all(Option::is_some) {
            return Ok(Normalized::Found(
                kappa.map(|k| k.expect("known")),
                particular,
            ));
        }
        let determined: Vec<Option<&Scalar>> = (0..6)
            .map(|j| {
                homogeneous
                    .iter()
                    .all(|h| h[j].is_zero())
                    .then(|| &particular[j])
            })
            .collect();
        let mut progress = false;
        for e in eqs {
            let unknown: BTreeSet<usize> = e
                .terms
                .iter()
                .filter(|(a, _, _)| kappa[*a].is_none())
                .map(|(a, _, _)| *a)
                .collect();
            if unknown.len() != 1 || e.terms.iter().any(|(_, j, _)| determined[*j].is_none()) {
                continue;
            }
            let u = *unknown.iter().next().expect("one unknown");
            let mut coeff = Scalar::zero();
            let mut rest = Scalar::zero();
            for (k, j, c) in &e.terms {
                let x = determined[*j].expect("determined");
                match &kappa[*k] {
                    Some(kv) => rest = rest + c * kv * x,
                    None => coeff = coeff + c * x,
                }
            }
            if coeff.is_zero() {
                if rest != e.rhs {
                    return Ok(Normalized::Inconsistent(Certificate {
                        combination: vec![(e.label.clone(), Scalar::one())],
                        value: &e.rhs - &rest,
                    }));
                }
                continue;
            }
            kappa[u] = Some((&e.rhs - &rest) / coeff);
            progress = true;
            break;
        }
        if !progress {
            return Err(Error::Unsupported(
                "shape system not decided by propagation".into(),
            ));
        }
    }
}

fn kappa_text(kappa: &[Option<Scalar>; 3]) -> String {
    let parts: Vec<String> = kappa
        .iter()
        .zip(COMPONENT)
        .filter_map(|(k, name)| k.as_ref().map(|v| format!("{name}:{v}")))
        .collect();
    format!("({})", parts.join(", "))
}

/// Decide whether `target(f, g) = kappa(f) f delta(g) - kappa(g) g delta(f)` for a
/// function `kappa` and a complex-like derivation `delta`.
///
/// The equations are bilinear in `kappa` and the coefficients of `delta`,
/// and invariant under `(kappa, delta) -> (c kappa, delta / c)`. Each
/// normalization `kappa(generator) = 1` is solved by propagation: equations
/// with known `kappa` are linear in `delta`, and forced `delta` coefficients
/// determine further `kappa` values.
pub fn rc_shape_solve(target: &BracketTriple) -> Result<RcShape> {
    let eqs = shape_equations(target);
    let basis = complex_like_basis();
    let mut certs = Vec::new();
    for g in Generator::ALL {
        match solve_normalized(&eqs, g.index())? {
            Normalized::Found(kappa, coeffs) => {
                let delta_ = basis
                    .iter()
                    .zip(&coeffs)
                    .fold(Derivation::zero(), |acc, (d, c)| acc.add(&d.scale(c)));
                return Ok(RcShape::Solvable(Box::new(RcShapeSolution {
                    kappa,
                    delta: delta_,
                })));
            }
            Normalized::Inconsistent(c) => certs.push((g, c)),
        }
    }
    if [&target.r12, &target.p46, &target.q62]
        .iter()
        .all(|p| p.is_zero())
    {
        return Ok(RcShape::Solvable(Box::new(RcShapeSolution {
            kappa: [Scalar::zero(), Scalar::zero(), Scalar::zero()],
            delta: Derivation::zero(),
        })));
    }
    Ok(RcShape::Unsolvable(certs))
}

/// `kappa(u) u delta(v) - kappa(v) v delta(u)` on a generator pair.
pub fn shape_bracket(sol: &RcShapeSolution, u: Generator, v: Generator) -> Poly {
    let (fu, fv) = (Poly::gen(u), Poly::gen(v));
    &(&fu * sol.delta.value(v)).scale(&sol.kappa[u.index()])
        - &(&fv * sol.delta.value(u)).scale(&sol.kappa[v.index()])
}
