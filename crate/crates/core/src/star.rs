//! Truncated star products and order-by-order associativity checks.

use std::fmt;

use crate::brackets::{cm_mu, kappa_split, rc_sum, reduced_weight_split, weight_split};
use crate::derivations::{ramanujan_d, Derivation};
use crate::error::{Error, Result};
use crate::grading::bigrade;
use crate::poly::{Monomial, Poly};
use crate::scalar::Scalar;

/// The rule producing the terms `mu_n` of a star product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Rankin-Cohen brackets on modular forms.
    Eholzer,
    /// Rankin-Cohen brackets of a weight-2 derivation, weight tops.
    Zagier(Derivation),
    /// Rankin-Cohen brackets with tops `K_alpha + n - 1`.
    Kappa {
        alpha: Scalar,
        derivation: Derivation,
    },
    /// Connes-Moscovici terms for `HE - EH = E`.
    ConnesMoscovici { e: Derivation, h: Derivation },
    /// Quasimodular brackets with tops `k - s + n - 1`.
    Quasimodular,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Eholzer => "eholzer",
            Rule::Zagier(_) => "zagier",
            Rule::Kappa { .. } => "kappa",
            Rule::ConnesMoscovici { .. } => "cm",
            Rule::Quasimodular => "mr",
        }
    }

    /// Whether the rule lives on modular forms only.
    pub fn is_modular(&self) -> bool {
        matches!(self, Rule::Eholzer)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarTruncation {
    rule: Rule,
    order: usize,
}

/// A polynomial split into graded pieces, with derivative powers cached.
struct Prepared {
    pieces: Vec<(Scalar, Vec<Poly>)>,
}

impl StarTruncation {
    pub fn new(rule: Rule, order: usize) -> Result<Self> {
        if let Rule::ConnesMoscovici { e, h } = &rule {
            if h.commutator(e) != *e {
                return Err(Error::NotAnSl2Pair);
            }
        }
        Ok(StarTruncation { rule, order })
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn split(&self, f: &Poly) -> Option<(Derivation, Vec<(Scalar, Poly)>)> {
        match &self.rule {
            Rule::Eholzer => Some((ramanujan_d(), weight_split(f))),
            Rule::Zagier(d) => Some((d.clone(), weight_split(f))),
            Rule::Kappa { alpha, derivation } => Some((derivation.clone(), kappa_split(alpha)(f))),
            Rule::Quasimodular => Some((ramanujan_d(), reduced_weight_split(f))),
            Rule::ConnesMoscovici { .. } => None,
        }
    }

    fn prepare(&self, f: &Poly, depth: usize) -> Option<Prepared> {
        let (d, pieces) = self.split(f)?;
        Some(Prepared {
            pieces: pieces
                .into_iter()
                .map(|(k, p)| {
                    let powers = d.powers(&p, depth);
                    (k, powers)
                })
                .collect(),
        })
    }

    fn term_prepared(n: usize, f: &Prepared, g: &Prepared) -> Poly {
        let mut out = Poly::zero();
        for (kf, fp) in &f.pieces {
            for (kg, gp) in &g.pieces {
                out.add_assign_ref(&rc_sum(fp, kf, gp, kg, n));
            }
        }
        out
    }

    /// `mu_n(f, g)`.
    pub fn term(&self, n: usize, f: &Poly, g: &Poly) -> Poly {
        match &self.rule {
            Rule::ConnesMoscovici { e, h } => {
                cm_mu(e, h, n, f, g).expect("checked at construction")
            }
            _ => {
                let pf = self.prepare(f, n).expect("piecewise rule");
                let pg = self.prepare(g, n).expect("piecewise rule");
                Self::term_prepared(n, &pf, &pg)
            }
        }
    }
}

/// `[mu_0(f,g), ..., mu_N(f,g)]`.
pub fn star(f: &Poly, g: &Poly, s: &StarTruncation) -> Vec<Poly> {
    (0..=s.order).map(|n| s.term(n, f, g)).collect()
}

/// `sum_r mu_(n-r)(mu_r(f,g), h) - sum_r mu_(n-r)(f, mu_r(g,h))`.
pub fn check_associativity(s: &StarTruncation, n: usize, f: &Poly, g: &Poly, h: &Poly) -> Poly {
    let mut out = Poly::zero();
    for r in 0..=n {
        out.add_assign_ref(&s.term(n - r, &s.term(r, f, g), h));
        out.add_assign_ref(&-s.term(n - r, f, &s.term(r, g, h)));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocWitness {
    pub n: usize,
    pub f: Poly,
    pub g: Poly,
    pub h: Poly,
    pub residual: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationReport {
    pub rule: String,
    pub n_max: usize,
    pub weight_max: u32,
    /// Number of ordered triples checked at each order.
    pub triples: usize,
    pub residuals: Vec<AssocWitness>,
}

impl DeformationReport {
    pub fn passed(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// Nonconstant monomials of weight at most `weight_max`, by increasing weight.
pub fn test_monomials(modular_only: bool, weight_max: u32) -> Vec<Poly> {
    (2..=weight_max)
        .step_by(2)
        .flat_map(|w| {
            if modular_only {
                Monomial::modular_of_weight(w)
            } else {
                Monomial::of_weight(w)
            }
        })
        .map(Poly::monomial)
        .collect()
}

/// Order-`n` associativity for all `n <= n_max` over every ordered triple of
/// test monomials. Multilinearity makes monomial triples sufficient.
pub fn certify_deformation(s: &StarTruncation, n_max: usize, weight_max: u32) -> DeformationReport {
    let monos = test_monomials(s.rule.is_modular(), weight_max);
    let m = monos.len();
    let mut residuals = Vec::new();

    if matches!(s.rule, Rule::ConnesMoscovici { .. }) {
        for f in &monos {
            for g in &monos {
                for h in &monos {
                    for n in 0..=n_max {
                        let res = check_associativity(s, n, f, g, h);
                        if !res.is_zero() {
                            residuals.push(witness(n, f, g, h, res));
                        }
                    }
                }
            }
        }
    } else {
        let prep: Vec<Prepared> = monos
            .iter()
            .map(|f| s.prepare(f, n_max).expect("piecewise rule"))
            .collect();
        // pair[i][j][r] = prepared mu_r(monos[i], monos[j]) with n_max - r powers
        let pair: Vec<Vec<Vec<Prepared>>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        (0..=n_max)
                            .map(|r| {
                                let p = StarTruncation::term_prepared(r, &prep[i], &prep[j]);
                                s.prepare(&p, n_max - r).expect("piecewise rule")
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        #[allow(clippy::needless_range_loop)]
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for n in 0..=n_max {
                        let mut res = Poly::zero();
                        for r in 0..=n {
                            res.add_assign_ref(&StarTruncation::term_prepared(
                                n - r,
                                &pair[i][j][r],
                                &prep[k],
                            ));
                            res.add_assign_ref(&-StarTruncation::term_prepared(
                                n - r,
                                &prep[i],
                                &pair[j][k][r],
                            ));
                        }
                        if !res.is_zero() {
                            residuals.push(witness(n, &monos[i], &monos[j], &monos[k], res));
                        }
                    }
                }
            }
        }
    }
    DeformationReport {
        rule: s.rule.name().to_string(),
        n_max,
        weight_max,
        triples: m * m * m,
        residuals,
    }
}

fn witness(n: usize, f: &Poly, g: &Poly, h: &Poly, residual: Poly) -> AssocWitness {
    AssocWitness {
        n,
        f: f.clone(),
        g: g.clone(),
        h: h.clone(),
        residual,
    }
}

/// First triple (by increasing total weight) with a nonzero order-`n` residual.
pub fn find_associativity_failure(
    s: &StarTruncation,
    n: usize,
    weight_max: u32,
) -> Option<AssocWitness> {
    let monos = test_monomials(s.rule.is_modular(), weight_max);
    let mut triples: Vec<(u32, usize, usize, usize)> = Vec::new();
    let w = |p: &Poly| p.homogeneous_weight().expect("monomial");
    for i in 0..monos.len() {
        for j in 0..monos.len() {
            for k in 0..monos.len() {
                triples.push((w(&monos[i]) + w(&monos[j]) + w(&monos[k]), i, j, k));
            }
        }
    }
    triples.sort();
    triples.into_iter().find_map(|(_, i, j, k)| {
        let res = check_associativity(s, n, &monos[i], &monos[j], &monos[k]);
        (!res.is_zero()).then(|| witness(n, &monos[i], &monos[j], &monos[k], res))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthProfile {
    /// `s + t`.
    pub expected_bound: u32,
    /// Depth of `mu_n(f, g)`; `None` when it vanishes.
    pub actual: Option<u32>,
}

impl DepthProfile {
    pub fn within_bound(&self) -> bool {
        self.actual.is_none_or(|d| d <= self.expected_bound)
    }
}

pub fn depth_profile(s: &StarTruncation, n: usize, f: &Poly, g: &Poly) -> Result<DepthProfile> {
    let (_, sf) = bigrade(f).ok_or_else(|| Error::NotBigradedHomogeneous(f.to_string()))?;
    let (_, sg) = bigrade(g).ok_or_else(|| Error::NotBigradedHomogeneous(g.to_string()))?;
    let term = s.term(n, f, g);
    Ok(DepthProfile {
        expected_bound: sf + sg,
        actual: term.depth().ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivations::{delta_alpha_b, half_weight_euler, partial_a, varpi};
    use crate::parse::parse;

    fn p(s: &str) -> Poly {
        parse(s).unwrap()
    }

    #[test]
    fn star_terms() {
        let s = StarTruncation::new(Rule::Eholzer, 2).unwrap();
        let terms = star(&Poly::e4(), &Poly::e6(), &s);
        assert_eq!(terms[0], p("E4*E6"));
        assert_eq!(terms[1], p("-2*Delta"));
        let z = StarTruncation::new(Rule::Zagier(partial_a(&Scalar::zero())), 1).unwrap();
        assert_eq!(
            star(&Poly::e2(), &Poly::e4(), &z)[1],
            p("-1/3*(2*E6*E2 - E4^2)")
        );
    }

    #[test]
    fn cm_needs_pair() {
        let bad = Rule::ConnesMoscovici {
            e: ramanujan_d(),
            h: ramanujan_d(),
        };
        assert_eq!(StarTruncation::new(bad, 2), Err(Error::NotAnSl2Pair));
        let good = Rule::ConnesMoscovici {
            e: ramanujan_d(),
            h: half_weight_euler(),
        };
        assert!(StarTruncation::new(good, 2).is_ok());
    }

    #[test]
    fn order_zero_is_associative() {
        let s = StarTruncation::new(Rule::Quasimodular, 0).unwrap();
        assert!(check_associativity(&s, 0, &Poly::e2(), &Poly::e4(), &p("E2*E6")).is_zero());
    }

    #[test]
    fn small_certificates() {
        let s = StarTruncation::new(Rule::Eholzer, 2).unwrap();
        assert!(certify_deformation(&s, 2, 8).passed());
        let z = StarTruncation::new(Rule::Zagier(partial_a(&Scalar::frac(1, 5))), 2).unwrap();
        assert!(certify_deformation(&z, 2, 6).passed());
        let alpha = Scalar::frac(2, 7);
        let cm = StarTruncation::new(
            Rule::ConnesMoscovici {
                e: delta_alpha_b(&alpha, &Scalar::zero()),
                h: varpi(&alpha).scale(&Scalar::frac(1, 2)),
            },
            2,
        )
        .unwrap();
        assert!(certify_deformation(&cm, 2, 4).passed());
    }

    #[test]
    fn depth_profiles() {
        let z0 = StarTruncation::new(Rule::Zagier(partial_a(&Scalar::zero())), 2).unwrap();
        let prof = depth_profile(&z0, 2, &Poly::e2(), &Poly::e4()).unwrap();
        assert_eq!(prof.expected_bound, 1);
        assert!(prof.within_bound());
        let z1 = StarTruncation::new(Rule::Zagier(partial_a(&Scalar::one())), 2).unwrap();
        let prof = depth_profile(&z1, 2, &Poly::e2(), &Poly::e4()).unwrap();
        assert_eq!(prof.actual, Some(3));
        assert!(depth_profile(&z1, 2, &p("E2 + E4"), &Poly::e4()).is_err());
    }
}
