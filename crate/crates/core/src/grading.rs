//! The (weight, depth) bigrading of the quasimodular algebra.
//!
//! The piece of weight `k` and depth exactly `s` is spanned by the monomials
//! `E2^s * E4^i * E6^j` with `4i + 6j = k - 2s`. Spaces of depth at most `s`
//! are sums of these pieces.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::scalar::Scalar;

pub use crate::poly::delta;

/// A nonzero homogeneous piece of weight `weight` and depth `depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedComponent {
    pub weight: u32,
    pub depth: u32,
    pub form: Poly,
}

impl BigradedComponent {
    /// The E2-free cofactor, `form / E2^depth`.
    pub fn modular_cofactor(&self) -> Poly {
        Poly::from_terms(
            self.form
                .terms()
                .map(|(m, c)| (Monomial::new(m.e2 - self.depth, m.e4, m.e6), c.clone())),
        )
    }
}

/// Split `f` into its bigraded pieces, sorted by `(weight, depth)`.
pub fn bigraded_pieces(f: &Poly) -> Vec<BigradedComponent> {
    let mut buckets: BTreeMap<(u32, u32), Vec<(Monomial, Scalar)>> = BTreeMap::new();
    for (m, c) in f.terms() {
        buckets
            .entry((m.weight(), m.depth()))
            .or_default()
            .push((*m, c.clone()));
    }
    buckets
        .into_iter()
        .map(|((weight, depth), terms)| BigradedComponent {
            weight,
            depth,
            form: Poly::from_terms(terms),
        })
        .collect()
}

/// The bigrade of `f` if it is nonzero and lies in a single piece.
pub fn bigrade(f: &Poly) -> Option<(u32, u32)> {
    let mut it = f.monomials().map(|m| (m.weight(), m.depth()));
    let first = it.next()?;
    it.all(|x| x == first).then_some(first)
}

fn check_bigrade(k: i64, s: i64) -> Result<()> {
    if k < 0 || k % 2 != 0 || s < 0 || 2 * s > k {
        return Err(Error::InvalidBigrade {
            weight: k,
            depth: s,
        });
    }
    Ok(())
}

/// Monomial basis of the piece of weight `k` and depth `s`.
pub fn basis(k: i64, s: i64) -> Result<Vec<Monomial>> {
    check_bigrade(k, s)?;
    let mut out: Vec<Monomial> = Monomial::of_weight(k as u32)
        .into_iter()
        .filter(|m| m.e2 == s as u32)
        .collect();
    out.sort();
    Ok(out)
}

/// `k - (3 alpha + 2) s`.
pub fn kappa_alpha(alpha: &Scalar, k: i64, s: i64) -> Scalar {
    let slope = Scalar::int(3) * alpha + Scalar::int(2);
    Scalar::int(k) - slope * Scalar::int(s)
}

/// The graded-additive map `K_alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaAlpha {
    pub alpha: Scalar,
}

impl KappaAlpha {
    pub fn new(alpha: Scalar) -> Self {
        KappaAlpha { alpha }
    }

    pub fn value(&self, k: u32, s: u32) -> Scalar {
        kappa_alpha(&self.alpha, k as i64, s as i64)
    }

    pub fn of_monomial(&self, m: &Monomial) -> Scalar {
        self.value(m.weight(), m.depth())
    }

    /// Value on a bigraded-homogeneous polynomial.
    pub fn of_poly(&self, f: &Poly) -> Option<Scalar> {
        bigrade(f).map(|(k, s)| self.value(k, s))
    }
}
