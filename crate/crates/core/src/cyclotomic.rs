//! Exact arithmetic in the group of complex roots of unity.
//!
//! A root of unity is stored as a reduced fraction `a/m` representing
//! `e^{2πi·a/m}` with `0 <= a < m`; the multiplicative order is then exactly
//! `m`. Every predicate downstream (Cartan entries, q-integer vanishing,
//! centrality) reduces to monomial identities among such fractions, so no
//! cyclotomic-field sums are ever formed.

use crate::error::{EngineError, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A root of unity `e^{2πi·num/den}`, always in canonical reduced form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

impl RootOfUnity {
    /// Normalized representation of `e^{2πi·a/m}`.
    pub fn new(a: i64, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(EngineError::InvalidOrder);
        }
        Ok(Self::reduce(a as i128, m as u128))
    }

    fn reduce(a: i128, m: u128) -> Self {
        debug_assert!(m > 0);
        let a = a.rem_euclid(m as i128) as u128;
        let g = gcd(a, m);
        let (a, m) = if a == 0 { (0, 1) } else { (a / g, m / g) };
        debug_assert!(m <= u64::MAX as u128, "root-of-unity order overflow");
        RootOfUnity {
            num: a as u64,
            den: m as u64,
        }
    }

    pub fn one() -> Self {
        RootOfUnity { num: 0, den: 1 }
    }

    pub fn minus_one() -> Self {
        RootOfUnity { num: 1, den: 2 }
    }

    /// The canonical primitive root `e^{2πi/n}`.
    pub fn primitive(n: u64) -> Result<Self> {
        Self::new(1, n)
    }

    pub fn is_one(&self) -> bool {
        self.den == 1
    }

    /// Multiplicative order; equals the reduced denominator.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn mul(&self, other: &RootOfUnity) -> RootOfUnity {
        let d1 = self.den as u128;
        let d2 = other.den as u128;
        let l = d1 / gcd(d1, d2) * d2;
        let a = (self.num as u128 * (l / d1) + other.num as u128 * (l / d2)) % l;
        Self::reduce(a as i128, l)
    }

    pub fn inv(&self) -> RootOfUnity {
        if self.num == 0 {
            *self
        } else {
            RootOfUnity {
                num: self.den - self.num,
                den: self.den,
            }
        }
    }

    pub fn pow(&self, k: i128) -> RootOfUnity {
        let den = self.den as u128;
        let e = k.rem_euclid(den as i128) as u128;
        let a = (self.num as u128 * e) % den;
        Self::reduce(a as i128, den)
    }

    pub fn neg(&self) -> RootOfUnity {
        self.mul(&RootOfUnity::minus_one())
    }

    /// The fraction of a full turn, for the floating-point cross-check oracle.
    pub fn turns(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Discrete logarithm with respect to a primitive `n`-th root: returns
    /// `k` with `self = e^{2πi·k/n}` if one exists.
    pub fn dlog(&self, n: u64) -> Option<i64> {
        if n % self.den != 0 {
            return None;
        }
        Some((self.num as u128 * (n / self.den) as u128) as i64)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ζ({}/{})", self.num, self.den)
    }
}

/// Parse the `a/m` serialization used by all file formats.
pub fn parse_root(s: &str) -> Result<RootOfUnity> {
    let (a, m) = s.split_once('/').ok_or_else(|| EngineError::ParseError {
        line: 0,
        msg: format!("root of unity must be written a/m, got {s:?}"),
    })?;
    let a: i64 = a.trim().parse().map_err(|_| EngineError::ParseError {
        line: 0,
        msg: format!("bad numerator in {s:?}"),
    })?;
    let m: u64 = m.trim().parse().map_err(|_| EngineError::ParseError {
        line: 0,
        msg: format!("bad denominator in {s:?}"),
    })?;
    RootOfUnity::new(a, m)
}

/// True iff the q-integer `(n)_q = 1 + q + … + q^{n-1}` vanishes.
///
/// Convention: `(0)_q = 0` (the empty q-integer), so `n = 0` returns true.
/// For `n > 0` the sum is `(q^n - 1)/(q - 1)` when `q ≠ 1` and `n` when
/// `q = 1`, so vanishing is decided purely by order arithmetic.
pub fn q_number_is_zero(n: u64, q: &RootOfUnity) -> bool {
    n == 0 || (!q.is_one() && q.pow(n as i128).is_one())
}
