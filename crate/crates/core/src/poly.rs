//! Sparse polynomials in the Eisenstein generators E2, E4, E6.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use crate::scalar::Scalar;
use crate::PolyError;

/// One of the three generators of the algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    E2,
    E4,
    E6,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::E2, Generator::E4, Generator::E6];

    pub fn weight(self) -> u32 {
        match self {
            Generator::E2 => 2,
            Generator::E4 => 4,
            Generator::E6 => 6,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Generator::E2 => 0,
            Generator::E4 => 1,
            Generator::E6 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::E2 => "E2",
            Generator::E4 => "E4",
            Generator::E6 => "E6",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector `E2^e2 * E4^e4 * E6^e6`.
///
/// The ordering is the canonical print order: increasing weight, then
/// decreasing `(e2, e4, e6)` lexicographically within a weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub e2: u32,
    pub e4: u32,
    pub e6: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        e2: 0,
        e4: 0,
        e6: 0,
    };

    pub fn new(e2: u32, e4: u32, e6: u32) -> Self {
        Monomial { e2, e4, e6 }
    }

    pub fn generator(g: Generator) -> Self {
        let mut m = Monomial::ONE;
        m.set_exponent(g, 1);
        m
    }

    pub fn weight(&self) -> u32 {
        2 * self.e2 + 4 * self.e4 + 6 * self.e6
    }

    /// Depth contribution, the power of E2.
    pub fn depth(&self) -> u32 {
        self.e2
    }

    pub fn exponent(&self, g: Generator) -> u32 {
        match g {
            Generator::E2 => self.e2,
            Generator::E4 => self.e4,
            Generator::E6 => self.e6,
        }
    }

    pub fn set_exponent(&mut self, g: Generator, e: u32) {
        match g {
            Generator::E2 => self.e2 = e,
            Generator::E4 => self.e4 = e,
            Generator::E6 => self.e6 = e,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.e2 + other.e2, self.e4 + other.e4, self.e6 + other.e6)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        Some(Monomial::new(
            self.e2.checked_sub(other.e2)?,
            self.e4.checked_sub(other.e4)?,
            self.e6.checked_sub(other.e6)?,
        ))
    }

    fn lex_key(&self) -> (u32, u32, u32) {
        (self.e2, self.e4, self.e6)
    }

    /// All monomials of a given weight, in canonical order.
    pub fn of_weight(w: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        if !w.is_multiple_of(2) {
            return out;
        }
        let half = w / 2; // e2 + 2 e4 + 3 e6 = half
        for e6 in 0..=half / 3 {
            for e4 in 0..=(half - 3 * e6) / 2 {
                let e2 = half - 3 * e6 - 2 * e4;
                out.push(Monomial::new(e2, e4, e6));
            }
        }
        out.sort();
        out
    }

    /// Monomials without E2 (modular monomials) of a given weight.
    pub fn modular_of_weight(w: u32) -> Vec<Monomial> {
        Monomial::of_weight(w)
            .into_iter()
            .filter(|m| m.e2 == 0)
            .collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.lex_key().cmp(&self.lex_key()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for g in Generator::ALL {
            match self.exponent(g) {
                0 => {}
                1 => parts.push(g.name().to_string()),
                e => parts.push(format!("{}^{}", g.name(), e)),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// A polynomial in E2, E4, E6 with coefficients in ℚ(t). No zero
/// coefficients are ever stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::term(Monomial::ONE, c)
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(Scalar::int(n))
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Poly::term(m, Scalar::one())
    }

    pub fn gen(g: Generator) -> Self {
        Poly::monomial(Monomial::generator(g))
    }

    pub fn e2() -> Self {
        Poly::gen(Generator::E2)
    }

    pub fn e4() -> Self {
        Poly::gen(Generator::E4)
    }

    pub fn e6() -> Self {
        Poly::gen(Generator::E6)
    }

    /// The formal parameter `t` as a constant polynomial.
    pub fn t() -> Self {
        Poly::constant(Scalar::t())
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(iter: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Constant polynomial value, if the polynomial is a scalar.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(*m, c.clone());
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &Poly) {
        if c.is_zero() {
            return;
        }
        for (m, d) in &other.terms {
            self.add_term(*m, c * d);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, d)| (*m, c * d)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, c)| (n.mul(m), c.clone()))
                .collect(),
        }
    }

    /// Integer power; negative exponents are rejected.
    pub fn pow(&self, exp: i64) -> Result<Poly, PolyError> {
        if exp < 0 {
            return Err(PolyError::NegativeExponent(exp));
        }
        Ok(self.pow_u(exp as u32))
    }

    pub fn pow_u(&self, mut exp: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to a generator.
    pub fn partial(&self, g: Generator) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(g);
            if e == 0 {
                continue;
            }
            let mut dm = *m;
            dm.set_exponent(g, e - 1);
            out.add_term(dm, c * &Scalar::int(e as i64));
        }
        out
    }

    /// Weight-homogeneous parts in increasing weight.
    pub fn weight_components(&self) -> Vec<(u32, Poly)> {
        let mut out: Vec<(u32, Poly)> = Vec::new();
        // BTreeMap order is by weight first, so components come out sorted.
        for (m, c) in &self.terms {
            let w = m.weight();
            match out.last_mut() {
                Some((lw, p)) if *lw == w => {
                    p.terms.insert(*m, c.clone());
                }
                _ => out.push((w, Poly::term(*m, c.clone()))),
            }
        }
        out
    }

    /// The weight, when the polynomial is nonzero and weight-homogeneous.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut ws = self.terms.keys().map(Monomial::weight);
        let w = ws.next()?;
        ws.all(|x| x == w).then_some(w)
    }

    /// Degree in E2. The zero polynomial has no depth.
    pub fn depth(&self) -> Result<u32, PolyError> {
        self.terms
            .keys()
            .map(Monomial::depth)
            .max()
            .ok_or(PolyError::ZeroDepth)
    }

    /// Whether any coefficient involves the formal parameter.
    pub fn has_parameter(&self) -> bool {
        self.terms.values().any(|c| !c.is_rational())
    }

    /// Replace the formal parameter by a rational value.
    pub fn substitute_t(&self, value: &BigRational) -> Result<Poly, PolyError> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let v = c.eval_at(value).ok_or(PolyError::PoleAtValue)?;
            out.add_term(*m, Scalar::from_rational(v));
        }
        Ok(out)
    }

    /// Algebra substitution `E2 -> eta * E2`, identity on E4 and E6.
    pub fn scale_e2(&self, eta: &Scalar) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c * &eta.pow(m.e2));
        }
        out
    }

    /// Map every coefficient through `f`, dropping zeros.
    pub fn map_coeffs<F: Fn(&Monomial, &Scalar) -> Scalar>(&self, f: F) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(m, c))))
    }

    /// Leading term for exact division: largest `(e2, e4, e6)` lexicographically.
    fn lex_leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().max_by_key(|(m, _)| m.lex_key())
    }

    /// Exact division. `None` when `divisor` is zero or does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (dm, dc) = divisor.lex_leading()?;
        let (dm, dc_inv) = (*dm, dc.recip()?);
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.lex_leading() {
            let qm = rm.div(&dm)?;
            let qc = rc * &dc_inv;
            rem.add_scaled(&-&qc, &divisor.mul_monomial(&qm));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Parse the expression grammar (see [`crate::parse`]).
    pub fn parse(text: &str) -> Result<Poly, crate::parse::ParseError> {
        crate::parse::parse(text)
    }
}

/// The discriminant `E4^3 - E6^2`.
pub fn delta() -> Poly {
    &Poly::e4().pow_u(3) - &Poly::e6().pow_u(2)
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! poly_owned_ops {
    ($trait:ident, $method:ident) => {
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

poly_owned_ops!(Add, add);
poly_owned_ops!(Sub, sub);
poly_owned_ops!(Mul, mul);

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        let mut acc = Poly::zero();
        for p in iter {
            acc.add_assign_ref(&p);
        }
        acc
    }
}

impl From<Scalar> for Poly {
    fn from(c: Scalar) -> Self {
        Poly::constant(c)
    }
}

impl From<Generator> for Poly {
    fn from(g: Generator) -> Self {
        Poly::gen(g)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative_display();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = if negative { -c } else { c.clone() };
            if *m == Monomial::ONE {
                f.write_str(&abs.factor_text())?;
            } else if abs.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", abs.factor_text(), m)?;
            }
        }
        Ok(())
    }
}
