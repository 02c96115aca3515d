//! Exact elements u + v√d of a real quadratic field ℚ(√d), d squarefree > 1,
//! with rationals embedded as the d = 1 case.
//!
//! The representation is canonical (v = 0 forces d = 1), so derived equality
//! and hashing are value equality. Signs and comparisons are exact: the sign
//! of u + v√d is decided by the signs of u, v and of u² − v²d.

use crate::arith::squarefree_part;
use crate::{Error, Result};
use rug::{Complete, Integer, Rational};
use std::cmp::Ordering;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadNum {
    u: Rational,
    v: Rational,
    d: u64,
}

impl QuadNum {
    pub fn rational(u: Rational) -> QuadNum {
        QuadNum {
            u,
            v: Rational::new(),
            d: 1,
        }
    }

    pub fn from_integer(n: &Integer) -> QuadNum {
        QuadNum::rational(Rational::from(n))
    }

    pub fn from_i64(n: i64) -> QuadNum {
        QuadNum::rational(Rational::from(n))
    }

    /// u + v√d with d squarefree > 1 (for nonzero v).
    pub fn quadratic(u: Rational, v: Rational, d: u64) -> Result<QuadNum> {
        if v.cmp0() == Ordering::Equal {
            return Ok(QuadNum::rational(u));
        }
        if d == 1 {
            return Ok(QuadNum::rational(u + v));
        }
        if d == 0 || squarefree_part(d as i64) != Ok(d as i64) {
            return Err(Error::InvalidSquarefreeRadicand(d));
        }
        Ok(QuadNum { u, v, d })
    }

    pub fn rational_part(&self) -> &Rational {
        &self.u
    }

    pub fn surd_part(&self) -> &Rational {
        &self.v
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.d == 1
    }

    pub fn is_zero(&self) -> bool {
        self.u.cmp0() == Ordering::Equal && self.v.cmp0() == Ordering::Equal
    }

    pub fn conj(&self) -> QuadNum {
        QuadNum {
            u: self.u.clone(),
            v: -self.v.clone(),
            d: self.d,
        }
    }

    pub fn neg(&self) -> QuadNum {
        QuadNum {
            u: -self.u.clone(),
            v: -self.v.clone(),
            d: self.d,
        }
    }

    fn common_radicand(&self, other: &QuadNum) -> Result<u64> {
        if self.d == other.d {
            Ok(self.d)
        } else if self.is_rational() {
            Ok(other.d)
        } else if other.is_rational() {
            Ok(self.d)
        } else {
            Err(Error::MixedFields(self.d, other.d))
        }
    }

    pub fn add(&self, other: &QuadNum) -> Result<QuadNum> {
        let d = self.common_radicand(other)?;
        QuadNum::quadratic(
            (&self.u + &other.u).complete(),
            (&self.v + &other.v).complete(),
            d,
        )
    }

    pub fn sub(&self, other: &QuadNum) -> Result<QuadNum> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QuadNum) -> Result<QuadNum> {
        let d = self.common_radicand(other)?;
        let u = (&self.u * &other.u).complete() + (&self.v * &other.v).complete() * Rational::from(d);
        let v = (&self.u * &other.v).complete() + (&self.v * &other.u).complete();
        QuadNum::quadratic(u, v, d)
    }

    pub fn mul_rational(&self, q: &Rational) -> QuadNum {
        QuadNum {
            u: (&self.u * q).complete(),
            v: (&self.v * q).complete(),
            d: if self.v.cmp0() == Ordering::Equal || q.cmp0() == Ordering::Equal {
                1
            } else {
                self.d
            },
        }
    }

    /// Exact sign: −1, 0 or 1.
    pub fn sign(&self) -> i32 {
        let su = self.u.cmp0();
        let sv = self.v.cmp0();
        match (su, sv) {
            (Ordering::Equal, Ordering::Equal) => 0,
            (s, Ordering::Equal) => ord_sign(s),
            (Ordering::Equal, s) => ord_sign(s),
            (a, b) if a == b => ord_sign(a),
            _ => {
                // u and v have opposite signs; compare u² with v²d.
                let u2 = (&self.u * &self.u).complete();
                let v2d = (&self.v * &self.v).complete() * Rational::from(self.d);
                match u2.cmp(&v2d) {
                    Ordering::Equal => {
                        unreachable!("u² = v²·d would make √d rational (d = {})", self.d)
                    }
                    Ordering::Greater => ord_sign(su),
                    Ordering::Less => ord_sign(sv),
                }
            }
        }
    }

    /// Exact value comparison within a common field.
    pub fn cmp_exact(&self, other: &QuadNum) -> Result<Ordering> {
        let diff = self.sub(other)?;
        Ok(match diff.sign() {
            0 => Ordering::Equal,
            s if s < 0 => Ordering::Less,
            _ => Ordering::Greater,
        })
    }

    /// |self| compared with |other|, exactly (via the squares).
    pub fn abs_cmp(&self, other: &QuadNum) -> Result<Ordering> {
        let s2 = self.mul(self)?;
        let o2 = other.mul(other)?;
        s2.cmp_exact(&o2)
    }

    /// Approximate value, for display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        self.u.to_f64() + self.v.to_f64() * (self.d as f64).sqrt()
    }
}

fn ord_sign(o: Ordering) -> i32 {
    match o {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Exact Horner evaluation of an integer polynomial (lowest degree first).
pub fn eval_int_poly(coefficients: &[Integer], x: &QuadNum) -> Result<QuadNum> {
    let mut acc = QuadNum::from_i64(0);
    for c in coefficients.iter().rev() {
        acc = acc.mul(x)?.add(&QuadNum::from_integer(c))?;
    }
    Ok(acc)
}

impl std::fmt::Display for QuadNum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.u);
        }
        if self.u.cmp0() != Ordering::Equal {
            write!(f, "{}", self.u)?;
            if self.v.cmp0() == Ordering::Less {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let av = self.v.clone().abs();
            if av == 1 {
                write!(f, "sqrt({})", self.d)
            } else {
                write!(f, "{}*sqrt({})", av, self.d)
            }
        } else {
            if self.v.cmp0() == Ordering::Less {
                write!(f, "-")?;
            }
            let av = self.v.clone().abs();
            if av == 1 {
                write!(f, "sqrt({})", self.d)
            } else {
                write!(f, "{}*sqrt({})", av, self.d)
            }
        }
    }
}
