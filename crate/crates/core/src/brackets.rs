//! Bracket constructions on ℚ(t)[E2, E4, E6].
//!
//! A Poisson-type bracket on the polynomial algebra is stored as a
//! [`BracketTriple`] of generator values and extended by the partial
//! derivative formula. The Rankin-Cohen style brackets are bi-differential
//! operators built from a derivation and a choice of binomial "tops"; they
//! act piece by piece and extend bilinearly.

use crate::derivations::{ramanujan_d, Derivation};
use crate::error::{Error, Result};
use crate::grading::{bigraded_pieces, KappaAlpha};
use crate::poly::{delta, Generator, Poly};
use crate::scalar::Scalar;

/// Generator values `{E2,E4}`, `{E4,E6}`, `{E6,E2}` of a bracket.
///
/// In the curl convention `(x, y, z) = (E2, E4, E6)` these are `r`, `p`, `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BracketTriple {
    pub r12: Poly,
    pub p46: Poly,
    pub q62: Poly,
}

impl BracketTriple {
    pub fn new(r12: Poly, p46: Poly, q62: Poly) -> Self {
        BracketTriple { r12, p46, q62 }
    }

    /// `{u, v}` for two generators.
    pub fn value(&self, u: Generator, v: Generator) -> Poly {
        use Generator::*;
        match (u, v) {
            (E2, E4) => self.r12.clone(),
            (E4, E6) => self.p46.clone(),
            (E6, E2) => self.q62.clone(),
            (E4, E2) => -&self.r12,
            (E6, E4) => -&self.p46,
            (E2, E6) => -&self.q62,
            _ => Poly::zero(),
        }
    }

    /// `(p, q, r)` in the curl convention.
    pub fn pqr(&self) -> [&Poly; 3] {
        [&self.p46, &self.q62, &self.r12]
    }

    pub fn apply(&self, f: &Poly, g: &Poly) -> Poly {
        apply_bracket(self, f, g)
    }

    /// Each generator value is weight-homogeneous (zero counts as homogeneous).
    pub fn is_weight_homogeneous(&self) -> bool {
        [&self.r12, &self.p46, &self.q62]
            .iter()
            .all(|p| p.is_zero() || p.homogeneous_weight().is_some())
    }

    pub fn has_parameter(&self) -> bool {
        [&self.r12, &self.p46, &self.q62]
            .iter()
            .any(|p| p.has_parameter())
    }
}

/// The three generator pairs `(E2,E4)`, `(E4,E6)`, `(E6,E2)`.
pub const GENERATOR_PAIRS: [(Generator, Generator); 3] = [
    (Generator::E2, Generator::E4),
    (Generator::E4, Generator::E6),
    (Generator::E6, Generator::E2),
];

/// `sum_{i<j} (df/dx_i dg/dx_j - dg/dx_i df/dx_j) {x_i, x_j}`.
pub fn apply_bracket(b: &BracketTriple, f: &Poly, g: &Poly) -> Poly {
    use Generator::*;
    let df = Generator::ALL.map(|x| f.partial(x));
    let dg = Generator::ALL.map(|x| g.partial(x));
    let mut out = Poly::zero();
    for (i, j, val) in [(E2, E4, &b.r12), (E4, E6, &b.p46), (E6, E2, &b.q62)] {
        if val.is_zero() {
            continue;
        }
        let (i, j) = (i.index(), j.index());
        let minor = &(&df[i] * &dg[j]) - &(&dg[i] * &df[j]);
        if !minor.is_zero() {
            out.add_assign_ref(&(&minor * val));
        }
    }
    out
}

fn mono(e2: u32, e4: u32, e6: u32, c: Scalar) -> Poly {
    Poly::term(crate::poly::Monomial::new(e2, e4, e6), c)
}

/// First family: `{E2,E4} = (lambda E4^2 - 2 E2 E6)/3`,
/// `{E6,E2} = (2 E2 E4^2 - lambda E4 E6)/2`, `{E4,E6} = -2 Delta`.
pub fn family_first(lambda: &Scalar) -> BracketTriple {
    BracketTriple::new(
        &mono(0, 2, 0, lambda * &Scalar::frac(1, 3)) + &mono(1, 0, 1, Scalar::frac(-2, 3)),
        delta().scale(&Scalar::int(-2)),
        &mono(1, 2, 0, Scalar::one()) + &mono(0, 1, 1, lambda * &Scalar::frac(-1, 2)),
    )
}

/// Second family: `{E2,E4} = alpha E2 E6`, `{E6,E2} = -(3/2) alpha E2 E4^2`.
pub fn family_second(alpha: &Scalar) -> BracketTriple {
    BracketTriple::new(
        mono(1, 0, 1, alpha.clone()),
        delta().scale(&Scalar::int(-2)),
        mono(1, 2, 0, alpha * &Scalar::frac(-3, 2)),
    )
}

/// Third family: `{E2,E4} = 4 E6 E2 + mu E4^2`, `{E6,E2} = -(6 E4^2 E2 - 2 mu E4 E6)`.
pub fn family_third(mu: &Scalar) -> BracketTriple {
    BracketTriple::new(
        &mono(1, 0, 1, Scalar::int(4)) + &mono(0, 2, 0, mu.clone()),
        delta().scale(&Scalar::int(-2)),
        &mono(1, 2, 0, Scalar::int(-6)) + &mono(0, 1, 1, mu * &Scalar::int(2)),
    )
}

/// RC_1 on modular forms, embedded with E2 central.
pub fn rc1_modular_triple() -> BracketTriple {
    family_second(&Scalar::zero())
}

/// The triple whose generator values are the quasimodular RC_1 brackets.
pub fn mr_triple() -> BracketTriple {
    use Generator::*;
    let g = |x| Poly::gen(x);
    BracketTriple::new(
        rc_quasimodular(1, &g(E2), &g(E4)),
        rc_quasimodular(1, &g(E4), &g(E6)),
        rc_quasimodular(1, &g(E6), &g(E2)),
    )
}

/// `top (top-1) ... (top-lower+1) / lower!` for an arbitrary scalar top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedBinomial {
    pub top: Scalar,
    pub lower: u32,
}

impl GeneralizedBinomial {
    pub fn new(top: Scalar, lower: u32) -> Self {
        GeneralizedBinomial { top, lower }
    }

    pub fn value(&self) -> Scalar {
        let mut acc = Scalar::one();
        for i in 0..self.lower {
            acc = acc * (&self.top - &Scalar::int(i as i64)) / Scalar::int(i as i64 + 1);
        }
        acc
    }
}

pub fn binomial(top: &Scalar, lower: u32) -> Scalar {
    GeneralizedBinomial::new(top.clone(), lower).value()
}

/// Order-`n` Rankin-Cohen sum for homogeneous operands with grading values
/// `kf`, `kg`:
/// `sum_r (-1)^r C(kf+n-1, n-r) C(kg+n-1, r) d^r f d^(n-r) g`.
pub(crate) fn rc_sum(
    f_powers: &[Poly],
    kf: &Scalar,
    g_powers: &[Poly],
    kg: &Scalar,
    n: usize,
) -> Poly {
    let shift = Scalar::int(n as i64 - 1);
    let (tf, tg) = (kf + &shift, kg + &shift);
    let mut out = Poly::zero();
    for r in 0..=n {
        let left = &f_powers[r];
        let right = &g_powers[n - r];
        if left.is_zero() || right.is_zero() {
            continue;
        }
        let mut c = binomial(&tf, (n - r) as u32) * binomial(&tg, r as u32);
        if r % 2 == 1 {
            c = -c;
        }
        if c.is_zero() {
            continue;
        }
        out.add_assign_ref(&(left * right).scale(&c));
    }
    out
}

/// Bilinear extension of [`rc_sum`] over the pieces chosen by `split`.
fn piecewise_rc<S>(d: &Derivation, n: usize, f: &Poly, g: &Poly, split: S) -> Poly
where
    S: Fn(&Poly) -> Vec<(Scalar, Poly)>,
{
    let fs: Vec<(Scalar, Vec<Poly>)> = split(f)
        .into_iter()
        .map(|(k, p)| (k, d.powers(&p, n)))
        .collect();
    let gs: Vec<(Scalar, Vec<Poly>)> = split(g)
        .into_iter()
        .map(|(k, p)| (k, d.powers(&p, n)))
        .collect();
    let mut out = Poly::zero();
    for (kf, fp) in &fs {
        for (kg, gp) in &gs {
            out.add_assign_ref(&rc_sum(fp, kf, gp, kg, n));
        }
    }
    out
}

pub(crate) fn weight_split(f: &Poly) -> Vec<(Scalar, Poly)> {
    f.weight_components()
        .into_iter()
        .map(|(w, p)| (Scalar::int(w as i64), p))
        .collect()
}

pub(crate) fn reduced_weight_split(f: &Poly) -> Vec<(Scalar, Poly)> {
    bigraded_pieces(f)
        .into_iter()
        .map(|c| (Scalar::int(c.weight as i64 - c.depth as i64), c.form))
        .collect()
}

pub(crate) fn kappa_split(alpha: &Scalar) -> impl Fn(&Poly) -> Vec<(Scalar, Poly)> {
    let kappa = KappaAlpha::new(alpha.clone());
    move |f: &Poly| {
        bigraded_pieces(f)
            .into_iter()
            .map(|c| (kappa.value(c.weight, c.depth), c.form))
            .collect()
    }
}

/// Classical Rankin-Cohen bracket built on `D`, with weight tops.
pub fn rc_modular(n: usize, f: &Poly, g: &Poly) -> Poly {
    zagier_bracket(&ramanujan_d(), n, f, g)
}

/// Quasimodular RC_n: tops use `k - s` and `l - t` on bigraded pieces.
pub fn rc_quasimodular(n: usize, f: &Poly, g: &Poly) -> Poly {
    piecewise_rc(&ramanujan_d(), n, f, g, reduced_weight_split)
}

/// Rankin-Cohen bracket of a weight-2 derivation, with weight tops.
pub fn zagier_bracket(d: &Derivation, n: usize, f: &Poly, g: &Poly) -> Poly {
    piecewise_rc(d, n, f, g, weight_split)
}

/// Rankin-Cohen bracket with tops `K_alpha(f) + n - 1`, `K_alpha(g) + n - 1`.
pub fn kappa_bracket(alpha: &Scalar, d: &Derivation, n: usize, f: &Poly, g: &Poly) -> Poly {
    piecewise_rc(d, n, f, g, kappa_split(alpha))
}

/// `(F + c)` applied `m` times as a rising product:
/// `F o (F+1) o ... o (F+m-1)` with `F = 2H + shift`.
fn rising_2h(h: &Derivation, shift: i64, m: usize, f: &Poly) -> Poly {
    let mut acc = f.clone();
    for i in 0..m {
        let c = Scalar::int(shift + i as i64);
        let mut next = h.apply(&acc).scale(&Scalar::int(2));
        next.add_scaled(&c, &acc);
        acc = next;
    }
    acc
}

/// Connes-Moscovici term `mu_n(f, g)` for derivations with `HE - EH = E`.
pub fn cm_mu(e: &Derivation, h: &Derivation, n: usize, f: &Poly, g: &Poly) -> Result<Poly> {
    if h.commutator(e) != *e {
        return Err(Error::NotAnSl2Pair);
    }
    let mut factorial = vec![Scalar::one()];
    for i in 1..=n {
        let prev = factorial[i - 1].clone();
        factorial.push(prev * Scalar::int(i as i64));
    }
    let mut out = Poly::zero();
    for r in 0..=n {
        let left = e.apply_n(&rising_2h(h, r as i64, n - r, f), r);
        if left.is_zero() {
            continue;
        }
        let right = e.apply_n(&rising_2h(h, (n - r) as i64, r, g), n - r);
        if right.is_zero() {
            continue;
        }
        let mut c = Scalar::one() / (&factorial[r] * &factorial[n - r]);
        if r % 2 == 1 {
            c = -c;
        }
        out.add_assign_ref(&(&left * &right).scale(&c));
    }
    Ok(out)
}

/// `delta(f) d(g) - d(f) delta(g)`.
pub fn bracket_from_pair(delta_: &Derivation, d: &Derivation, f: &Poly, g: &Poly) -> Poly {
    &(&delta_.apply(f) * &d.apply(g)) - &(&d.apply(f) * &delta_.apply(g))
}

/// Cyclic sum `{f,{g,h}} + {g,{h,f}} + {h,{f,g}}`.
pub fn jacobiator(b: &BracketTriple, f: &Poly, g: &Poly, h: &Poly) -> Poly {
    let t1 = b.apply(f, &b.apply(g, h));
    let t2 = b.apply(g, &b.apply(h, f));
    let t3 = b.apply(h, &b.apply(f, g));
    &(&t1 + &t2) + &t3
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivations::{delta_alpha_b, partial_a, varpi, weight_euler};
    use crate::parse::parse;
    use crate::poly::Monomial;

    fn p(s: &str) -> Poly {
        parse(s).unwrap()
    }

    #[test]
    fn family_values() {
        let b = family_first(&Scalar::one());
        assert_eq!(b.apply(&Poly::e4(), &Poly::e6()), p("-2*Delta"));
        assert_eq!(
            b.apply(&Poly::e2(), &Poly::e4()),
            p("-1/3*(2*E6*E2 - E4^2)")
        );
        let bt = family_first(&Scalar::t());
        assert_eq!(
            bt.apply(&Poly::e2(), &Poly::e6()),
            p("-1/2*(2*E4^2*E2 - t*E4*E6)")
        );
        let b1 = family_second(&Scalar::one());
        assert_eq!(b1.apply(&Poly::e2(), &Poly::e4()), p("E6*E2"));
        let b0 = family_second(&Scalar::zero());
        assert!(b0.apply(&Poly::e2(), &Poly::e4()).is_zero());
        assert!(b0.apply(&Poly::e2(), &Poly::e6()).is_zero());
        assert_eq!(
            family_third(&Scalar::zero()),
            family_second(&Scalar::int(4))
        );
        assert_eq!(
            family_third(&Scalar::one()).apply(&Poly::e2(), &Poly::e4()),
            p("4*E6*E2 + E4^2")
        );
    }

    #[test]
    fn generalized_binomial() {
        assert_eq!(binomial(&Scalar::int(7), 0), Scalar::one());
        assert_eq!(binomial(&Scalar::int(7), 3), Scalar::int(35));
        assert_eq!(binomial(&Scalar::int(2), 3), Scalar::zero());
        // C(1/2, 2) = (1/2)(-1/2)/2 = -1/8
        assert_eq!(binomial(&Scalar::frac(1, 2), 2), Scalar::frac(-1, 8));
        // C(t, 2) = t(t-1)/2
        let t = Scalar::t();
        assert_eq!(
            binomial(&t, 2),
            &t * &(&t - &Scalar::one()) / Scalar::int(2)
        );
    }

    #[test]
    fn rc_modular_examples() {
        let (e4, e6) = (Poly::e4(), Poly::e6());
        assert_eq!(rc_modular(0, &e4, &e6), &e4 * &e6);
        assert_eq!(rc_modular(1, &e4, &e6), p("-2*Delta"));
        assert_eq!(rc_modular(2, &e4, &e4), p("25/9*Delta"));
    }

    #[test]
    fn rc_quasimodular_examples() {
        assert_eq!(
            rc_quasimodular(1, &Poly::e2(), &Poly::e4()),
            p("(E4^2 - E6*E2)/3")
        );
        let f = p("E2*E4 + E6");
        let g = p("E2^2");
        assert_eq!(rc_quasimodular(0, &f, &g), &f * &g);
        assert_eq!(rc_quasimodular(1, &Poly::e4(), &Poly::e6()), p("-2*Delta"));
    }

    #[test]
    fn zagier_examples() {
        let a = Scalar::t();
        let d = partial_a(&a);
        assert_eq!(
            zagier_bracket(&d, 1, &Poly::e2(), &Poly::e4()),
            p("-1/3*(2*E6*E2 - E4^2)")
        );
        let f = p("E2*E4 - 3*E6");
        assert!(zagier_bracket(&d, 1, &f, &f).is_zero());
        let second = zagier_bracket(&d, 2, &Poly::e2(), &Poly::e4());
        assert_eq!(second.depth(), Ok(3));
    }

    #[test]
    fn kappa_bracket_examples() {
        let alpha = Scalar::t();
        let b = Scalar::frac(2, 7);
        let d = delta_alpha_b(&alpha, &b);
        let fam = family_second(&alpha);
        for (u, v) in GENERATOR_PAIRS {
            let (fu, fv) = (Poly::gen(u), Poly::gen(v));
            assert_eq!(kappa_bracket(&alpha, &d, 1, &fu, &fv), fam.apply(&fu, &fv));
        }
        let f = p("E2*E4");
        let g = p("E6 + E2^3");
        assert_eq!(kappa_bracket(&alpha, &d, 0, &f, &g), &f * &g);
        let d01 = delta_alpha_b(&Scalar::zero(), &Scalar::one());
        let r = kappa_bracket(&Scalar::zero(), &d01, 2, &Poly::e4(), &Poly::e6());
        assert!(r.depth().unwrap() > 0);
    }

    #[test]
    fn cm_mu_requires_sl2_pair() {
        let d = ramanujan_d();
        assert_eq!(
            cm_mu(&d, &weight_euler(), 1, &Poly::e4(), &Poly::e6()),
            Err(Error::NotAnSl2Pair)
        );
        let h = crate::derivations::half_weight_euler();
        let f = p("E4*E2");
        let g = p("E6");
        assert_eq!(cm_mu(&d, &h, 0, &f, &g).unwrap(), &f * &g);
    }

    #[test]
    fn pair_brackets() {
        let alpha = Scalar::t();
        let fam = family_second(&alpha);
        let (dl, d) = (varpi(&alpha), delta_alpha_b(&alpha, &Scalar::zero()));
        for (u, v) in GENERATOR_PAIRS {
            let (fu, fv) = (Poly::gen(u), Poly::gen(v));
            assert_eq!(bracket_from_pair(&dl, &d, &fu, &fv), fam.apply(&fu, &fv));
        }
        let first = family_first(&Scalar::one());
        let da = partial_a(&Scalar::t());
        for (u, v) in GENERATOR_PAIRS {
            let (fu, fv) = (Poly::gen(u), Poly::gen(v));
            assert_eq!(
                bracket_from_pair(&weight_euler(), &da, &fu, &fv),
                first.apply(&fu, &fv)
            );
        }
        let f = p("E2^2 + E4");
        assert!(bracket_from_pair(&dl, &d, &f, &f).is_zero());
    }

    #[test]
    fn jacobiator_examples() {
        let b = family_third(&Scalar::t());
        let (e2, e4, e6) = (Poly::e2(), Poly::e4(), Poly::e6());
        assert!(jacobiator(&b, &e2, &e4, &e6).is_zero());
        let f = p("E2*E4 + E6");
        assert!(jacobiator(&family_first(&Scalar::one()), &f, &f, &e6).is_zero());
        assert!(!jacobiator(&mr_triple(), &e2, &e4, &e6).is_zero());
    }

    #[test]
    fn witness_monomial_coefficient() {
        let a = Scalar::t();
        let second = zagier_bracket(&partial_a(&a), 2, &Poly::e2(), &Poly::e4());
        let top = second.coeff(&Monomial::new(3, 1, 0));
        assert_eq!(top, Scalar::int(32) * &a * &a);
    }
}
