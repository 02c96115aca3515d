//! Minimal arbitrary-precision complex arithmetic on top of MPFR floats.
//!
//! Only the operations the j-function pipeline needs. Every value carries its
//! working precision; binary operations produce results at the larger of the
//! two operand precisions, so precision never silently degrades.

use rug::Float;

#[derive(Debug, Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> BigComplex {
        BigComplex { re, im }
    }

    pub fn with_prec(prec: u32, re: f64, im: f64) -> BigComplex {
        BigComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_integer(prec: u32, n: &rug::Integer) -> BigComplex {
        BigComplex {
            re: Float::with_val(prec, n),
            im: Float::new(prec),
        }
    }

    pub fn zero(prec: u32) -> BigComplex {
        BigComplex {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn one(prec: u32) -> BigComplex {
        BigComplex {
            re: Float::with_val(prec, 1),
            im: Float::new(prec),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Re-rounds both parts to the given precision.
    pub fn rounded_to(&self, prec: u32) -> BigComplex {
        BigComplex {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn conj(&self) -> BigComplex {
        BigComplex {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn neg(&self) -> BigComplex {
        BigComplex {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn add(&self, rhs: &BigComplex) -> BigComplex {
        let prec = self.prec().max(rhs.prec());
        BigComplex {
            re: Float::with_val(prec, &self.re + &rhs.re),
            im: Float::with_val(prec, &self.im + &rhs.im),
        }
    }

    pub fn sub(&self, rhs: &BigComplex) -> BigComplex {
        let prec = self.prec().max(rhs.prec());
        BigComplex {
            re: Float::with_val(prec, &self.re - &rhs.re),
            im: Float::with_val(prec, &self.im - &rhs.im),
        }
    }

    pub fn mul(&self, rhs: &BigComplex) -> BigComplex {
        let prec = self.prec().max(rhs.prec());
        let re = Float::with_val(prec, &self.re * &rhs.re) - Float::with_val(prec, &self.im * &rhs.im);
        let im = Float::with_val(prec, &self.re * &rhs.im) + Float::with_val(prec, &self.im * &rhs.re);
        BigComplex { re, im }
    }

    pub fn mul_float(&self, rhs: &Float) -> BigComplex {
        let prec = self.prec().max(rhs.prec());
        BigComplex {
            re: Float::with_val(prec, &self.re * rhs),
            im: Float::with_val(prec, &self.im * rhs),
        }
    }

    pub fn div(&self, rhs: &BigComplex) -> BigComplex {
        let prec = self.prec().max(rhs.prec());
        let den = rhs.norm_sqr();
        let num = self.mul(&rhs.conj());
        BigComplex {
            re: Float::with_val(prec, &num.re / &den),
            im: Float::with_val(prec, &num.im / &den),
        }
    }

    pub fn recip(&self) -> BigComplex {
        BigComplex::one(self.prec()).div(self)
    }

    pub fn norm_sqr(&self) -> Float {
        let prec = self.prec();
        Float::with_val(prec, &self.re * &self.re) + Float::with_val(prec, &self.im * &self.im)
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    /// e^z = e^re · (cos im + i·sin im).
    pub fn exp(&self) -> BigComplex {
        let prec = self.prec();
        let scale = self.re.clone().exp();
        let (sin, cos) = self.im.clone().sin_cos(Float::new(prec));
        BigComplex {
            re: Float::with_val(prec, &cos * &scale),
            im: Float::with_val(prec, &sin * &scale),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl std::fmt::Display for BigComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Float, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol
    }

    #[test]
    fn field_operations() {
        let a = BigComplex::with_prec(128, 3.0, 4.0);
        let b = BigComplex::with_prec(128, -1.0, 2.0);
        let p = a.mul(&b);
        assert!(close(&p.re, -11.0, 1e-30));
        assert!(close(&p.im, 2.0, 1e-30));
        let q = p.div(&b);
        assert!(close(&q.re, 3.0, 1e-25));
        assert!(close(&q.im, 4.0, 1e-25));
        assert!(close(&a.abs(), 5.0, 1e-30));
        let r = a.recip().mul(&a);
        assert!(close(&r.re, 1.0, 1e-25));
        assert!(close(&r.im, 0.0, 1e-25));
    }

    #[test]
    fn exp_of_half_turn() {
        // e^{iπ} = −1
        let pi = Float::with_val(192, rug::float::Constant::Pi);
        let z = BigComplex::new(Float::new(192), pi);
        let e = z.exp();
        assert!(close(&e.re, -1.0, 1e-40));
        assert!(close(&e.im, 0.0, 1e-40));
    }
}
