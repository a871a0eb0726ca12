//! Truncated q-expansions with exact rational coefficients.

use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, PolyError, Result};
use crate::poly::{Generator, Poly};

/// `c_0 + c_1 q + ... + c_N q^N + O(q^(N+1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<BigRational>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        let mut s = QSeries::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series keeps at least c_0");
        QSeries { coeffs }
    }

    /// The truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn truncate(&self, order: usize) -> QSeries {
        assert!(order <= self.order());
        QSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let n = self.order().min(other.order());
        QSeries {
            coeffs: (0..=n)
                .map(|i| &self.coeffs[i] + &other.coeffs[i])
                .collect(),
        }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        let n = self.order().min(other.order());
        QSeries {
            coeffs: (0..=n)
                .map(|i| &self.coeffs[i] - &other.coeffs[i])
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let n = self.order().min(other.order());
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> QSeries {
        let mut acc = QSeries::constant(BigRational::one(), self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// `q d/dq`: `c_n -> n c_n`.
pub fn q_derivative(s: &QSeries) -> QSeries {
    QSeries {
        coeffs: s
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * BigRational::from_integer(BigInt::from(n)))
            .collect(),
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let var = match n {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{n}"),
            };
            if n == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{abs}*{var}")?;
            }
        }
        let tail = format!("O(q^{})", self.order() + 1);
        if first {
            write!(f, "{tail}")
        } else {
            write!(f, " + {tail}")
        }
    }
}

static BERNOULLI: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());

/// `B_k` from `t / (e^t - 1)` (so `B_1 = -1/2`).
pub fn bernoulli(k: usize) -> BigRational {
    let mut cache = BERNOULLI.lock().expect("bernoulli cache");
    if cache.is_empty() {
        cache.push(BigRational::one());
    }
    while cache.len() <= k {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let m = cache.len();
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, b) in cache.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * b;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        let next = -acc / BigRational::from_integer(BigInt::from(m + 1));
        cache.push(next);
    }
    cache[k].clone()
}

/// `sigma_k(n) = sum_{d | n} d^k`.
pub fn sigma(k: u32, n: i64) -> Result<BigInt> {
    if n <= 0 {
        return Err(Error::Unsupported(format!("sigma needs n >= 1, got {n}")));
    }
    let mut acc = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            acc += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                acc += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    Ok(acc)
}

/// `E_k = 1 - (2k / B_k) sum sigma_(k-1)(n) q^n`.
pub fn eisenstein_qexp(k: u32, order: usize) -> Result<QSeries> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::Unsupported(format!(
            "Eisenstein weight must be even and >= 2, got {k}"
        )));
    }
    let factor = -BigRational::from_integer(BigInt::from(2 * k)) / bernoulli(k as usize);
    let mut s = QSeries::constant(BigRational::one(), order);
    for n in 1..=order {
        let sig = sigma(k - 1, n as i64)?;
        s.coeffs[n] = &factor * BigRational::from_integer(sig);
    }
    Ok(s)
}

/// Substitute the expansions of E2, E4, E6 into `f`, with `t = t_value` if given.
pub fn evaluate(f: &Poly, order: usize, t_value: Option<&BigRational>) -> Result<QSeries> {
    let f = match t_value {
        Some(v) => f.substitute_t(v)?,
        None if f.has_parameter() => return Err(PolyError::SymbolicParameter.into()),
        None => f.clone(),
    };
    let base = Generator::ALL.map(|g| eisenstein_qexp(g.weight(), order).expect("valid weight"));
    let mut powers: [Vec<QSeries>; 3] = Default::default();
    let mut out = QSeries::zero(order);
    for (m, c) in f.terms() {
        let mut term = QSeries::constant(c.as_rational().expect("substituted").clone(), order);
        for g in Generator::ALL {
            let e = m.exponent(g) as usize;
            if e == 0 {
                continue;
            }
            let cache = &mut powers[g.index()];
            while cache.len() < e {
                let next = match cache.last() {
                    Some(p) => p.mul(&base[g.index()]),
                    None => base[g.index()].clone(),
                };
                cache.push(next);
            }
            term = term.mul(&cache[e - 1]);
        }
        out = out.add(&term);
    }
    Ok(out)
}
