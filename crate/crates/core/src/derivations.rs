//! Derivations of ℚ(t)[E2, E4, E6], stored by their values on the generators.

use std::fmt;

use crate::brackets::{family_first, family_second, BracketTriple};
use crate::error::{Error, Result};
use crate::poly::{delta, Generator, Monomial, Poly};
use crate::scalar::Scalar;

/// A derivation, determined by its images of E2, E4 and E6.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    values: [Poly; 3],
}

impl Derivation {
    pub fn new(v_e2: Poly, v_e4: Poly, v_e6: Poly) -> Self {
        Derivation {
            values: [v_e2, v_e4, v_e6],
        }
    }

    pub fn zero() -> Self {
        Derivation::new(Poly::zero(), Poly::zero(), Poly::zero())
    }

    pub fn value(&self, g: Generator) -> &Poly {
        &self.values[g.index()]
    }

    pub fn values(&self) -> &[Poly; 3] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Poly::is_zero)
    }

    /// Leibniz extension: `sum_g (df/dg) * d(g)`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in f.terms() {
            for g in Generator::ALL {
                let e = m.exponent(g);
                if e == 0 || self.values[g.index()].is_zero() {
                    continue;
                }
                let mut rest = *m;
                rest.set_exponent(g, e - 1);
                let coeff = c * &Scalar::int(e as i64);
                out.add_scaled(&coeff, &self.values[g.index()].mul_monomial(&rest));
            }
        }
        out
    }

    /// `d^n(f)`.
    pub fn apply_n(&self, f: &Poly, n: usize) -> Poly {
        let mut acc = f.clone();
        for _ in 0..n {
            acc = self.apply(&acc);
        }
        acc
    }

    /// Iterates `[f, d f, d^2 f, ..., d^n f]`.
    pub fn powers(&self, f: &Poly, n: usize) -> Vec<Poly> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(f.clone());
        for i in 0..n {
            let next = self.apply(&out[i]);
            out.push(next);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Derivation {
        Derivation {
            values: self.values.clone().map(|v| v.scale(c)),
        }
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        Derivation::new(
            &self.values[0] + &other.values[0],
            &self.values[1] + &other.values[1],
            &self.values[2] + &other.values[2],
        )
    }

    pub fn sub(&self, other: &Derivation) -> Derivation {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    /// `self o other - other o self`, again a derivation.
    pub fn commutator(&self, other: &Derivation) -> Derivation {
        let vals =
            Generator::ALL.map(|g| &self.apply(other.value(g)) - &other.apply(self.value(g)));
        let [a, b, c] = vals;
        Derivation::new(a, b, c)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "E2 -> {}; E4 -> {}; E6 -> {}",
            self.values[0], self.values[1], self.values[2]
        )
    }
}

fn mono(e2: u32, e4: u32, e6: u32, c: Scalar) -> Poly {
    Poly::term(Monomial::new(e2, e4, e6), c)
}

/// `D = q d/dq` through the Ramanujan equations.
pub fn ramanujan_d() -> Derivation {
    Derivation::new(
        &mono(2, 0, 0, Scalar::frac(1, 12)) + &mono(0, 1, 0, Scalar::frac(-1, 12)),
        &mono(1, 1, 0, Scalar::frac(1, 3)) + &mono(0, 0, 1, Scalar::frac(-1, 3)),
        &mono(1, 0, 1, Scalar::frac(1, 2)) + &mono(0, 2, 0, Scalar::frac(-1, 2)),
    )
}

/// Serre derivative on modular forms, extended by zero on E2.
pub fn serre_theta() -> Derivation {
    Derivation::new(
        Poly::zero(),
        mono(0, 0, 1, Scalar::frac(-1, 3)),
        mono(0, 2, 0, Scalar::frac(-1, 2)),
    )
}

/// `pi(f) = k f E2` on weight `k`.
pub fn pi() -> Derivation {
    Derivation::new(
        mono(2, 0, 0, Scalar::int(2)),
        mono(1, 1, 0, Scalar::int(4)),
        mono(1, 0, 1, Scalar::int(6)),
    )
}

/// `pi_alpha(f) = K_alpha(f) f E2`.
pub fn pi_alpha(alpha: &Scalar) -> Derivation {
    Derivation::new(
        mono(2, 0, 0, Scalar::int(-3) * alpha),
        mono(1, 1, 0, Scalar::int(4)),
        mono(1, 0, 1, Scalar::int(6)),
    )
}

/// `f -> B(Delta, f) / (12 Delta)` on the generators.
pub fn derivation_from_delta_bracket(b: &BracketTriple) -> Result<Derivation> {
    let d = delta();
    let twelve_delta = d.scale(&Scalar::int(12));
    let vals = Generator::ALL.map(|g| {
        let num = b.apply(&d, &Poly::gen(g));
        num.div_exact(&twelve_delta)
            .ok_or_else(|| Error::InexactDivision(num.to_string()))
    });
    let [a, b2, c] = vals;
    Ok(Derivation::new(a?, b2?, c?))
}

/// The derivation attached to the first family with parameter 1.
pub fn dz() -> Derivation {
    derivation_from_delta_bracket(&family_first(&Scalar::one()))
        .expect("Delta divides the first-family bracket")
}

/// The derivation attached to the second family; the result does not depend on `alpha`.
pub fn dv_for(alpha: &Scalar) -> Result<Derivation> {
    derivation_from_delta_bracket(&family_second(alpha))
}

pub fn dv() -> Derivation {
    dv_for(&Scalar::zero()).expect("Delta divides the second-family bracket")
}

/// `dZ + a pi`.
pub fn partial_a(a: &Scalar) -> Derivation {
    dz().add(&pi().scale(a))
}

/// `dV + b pi_alpha`.
pub fn delta_alpha_b(alpha: &Scalar, b: &Scalar) -> Derivation {
    dv().add(&pi_alpha(alpha).scale(b))
}

/// The Euler operator `f -> K_alpha(f) f`.
pub fn varpi(alpha: &Scalar) -> Derivation {
    Derivation::new(
        mono(1, 0, 0, Scalar::int(-3) * alpha),
        mono(0, 1, 0, Scalar::int(4)),
        mono(0, 0, 1, Scalar::int(6)),
    )
}

/// `f -> k f` on weight `k`.
pub fn weight_euler() -> Derivation {
    Derivation::new(
        mono(1, 0, 0, Scalar::int(2)),
        mono(0, 1, 0, Scalar::int(4)),
        mono(0, 0, 1, Scalar::int(6)),
    )
}

/// `f -> (k/2) f` on weight `k`.
pub fn half_weight_euler() -> Derivation {
    weight_euler().scale(&Scalar::frac(1, 2))
}

/// Returns `alpha` with `delta o d - d o delta = alpha d`, if it exists.
pub fn is_solvable_pair(delta_: &Derivation, d: &Derivation) -> Option<Scalar> {
    let c = delta_.commutator(d);
    if d.is_zero() {
        return c.is_zero().then(Scalar::zero);
    }
    let (g, m, dc) = Generator::ALL
        .iter()
        .find_map(|g| d.value(*g).terms().next().map(|(m, c)| (*g, *m, c.clone())))?;
    let alpha = c.value(g).coeff(&m).checked_div(&dc)?;
    (c == d.scale(&alpha)).then_some(alpha)
}

/// Coefficients `c_m` with `f = sum c_m Delta^m`, or `None` if `f` is not in ℚ(t)[Delta].
pub fn delta_expansion(f: &Poly) -> Option<Vec<(u32, Scalar)>> {
    let d = delta();
    let mut out = Vec::new();
    for (w, part) in f.weight_components() {
        if w % 12 != 0 {
            return None;
        }
        let m = w / 12;
        let power = d.pow_u(m);
        let lead_m = Monomial::new(0, 3 * m, 0);
        let c = part.coeff(&lead_m).checked_div(&power.coeff(&lead_m))?;
        if c.is_zero() || part != power.scale(&c) {
            return None;
        }
        out.push((m, c));
    }
    Some(out)
}

/// The Euler derivative `Delta d/dDelta` on ℚ(t)[Delta].
pub fn xi_on_delta_polys(f: &Poly) -> Result<Poly> {
    let coeffs = delta_expansion(f).ok_or_else(|| Error::NotInDeltaRing(f.to_string()))?;
    let d = delta();
    Ok(coeffs
        .into_iter()
        .map(|(m, c)| d.pow_u(m).scale(&(c * Scalar::int(m as i64))))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn p(s: &str) -> Poly {
        parse(s).unwrap()
    }

    #[test]
    fn apply_examples() {
        let d = delta();
        assert_eq!(ramanujan_d().apply(&d), &d * &Poly::e2());
        assert_eq!(serre_theta().apply(&Poly::e4()), p("-1/3*E6"));
        for der in [ramanujan_d(), pi(), varpi(&Scalar::t())] {
            assert!(der.apply(&Poly::one()).is_zero());
        }
    }

    #[test]
    fn catalog_values() {
        assert_eq!(dz().value(Generator::E4), &p("-1/3*E6"));
        assert_eq!(dz().value(Generator::E2), &p("-1/12*E4"));
        let a = Scalar::t();
        assert_eq!(
            partial_a(&a).value(Generator::E6),
            &p("6*t*E6*E2 - 1/2*E4^2")
        );
        assert!(dv().value(Generator::E2).is_zero());
        assert_eq!(dv(), serre_theta());
        assert_eq!(
            delta_alpha_b(&Scalar::t(), &Scalar::int(2)).value(Generator::E2),
            &p("-6*t*E2^2")
        );
    }

    #[test]
    fn dv_independent_of_alpha() {
        for alpha in [Scalar::zero(), Scalar::one(), Scalar::int(4), Scalar::t()] {
            assert_eq!(dv_for(&alpha).unwrap(), dv());
        }
    }

    #[test]
    fn commutator_examples() {
        let d = ramanujan_d();
        assert!(d.commutator(&d).is_zero());
        let alpha = Scalar::t();
        let dv0 = delta_alpha_b(&alpha, &Scalar::zero());
        assert_eq!(varpi(&alpha).commutator(&dv0), dv0.scale(&Scalar::int(2)));
        assert_eq!(half_weight_euler().commutator(&d), d);
    }

    #[test]
    fn solvable_pairs() {
        assert_eq!(
            is_solvable_pair(&varpi(&Scalar::zero()), &dv()),
            Some(Scalar::int(2))
        );
        assert_eq!(
            is_solvable_pair(&ramanujan_d(), &ramanujan_d()),
            Some(Scalar::zero())
        );
        assert_eq!(is_solvable_pair(&ramanujan_d(), &serre_theta()), None);
        assert_eq!(
            is_solvable_pair(&pi(), &Derivation::zero()),
            Some(Scalar::zero())
        );
    }

    #[test]
    fn xi_examples() {
        let d = delta();
        assert_eq!(xi_on_delta_polys(&d).unwrap(), d);
        let d2 = d.pow_u(2);
        assert_eq!(xi_on_delta_polys(&d2).unwrap(), d2.scale(&Scalar::int(2)));
        assert!(xi_on_delta_polys(&Poly::e4()).is_err());
        assert_eq!(xi_on_delta_polys(&Poly::int(5)).unwrap(), Poly::zero());
    }
}
