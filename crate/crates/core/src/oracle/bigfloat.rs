//! Binary floating point on `BigInt` mantissas, and complex numbers over it.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::multipoly::Rational;

/// `man · 2^exp`, with `|man|` kept below `2^prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigFloat {
    man: BigInt,
    exp: i64,
    prec: u32,
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat { man: BigInt::zero(), exp: 0, prec }
    }

    pub fn one(prec: u32) -> Self {
        BigFloat::from_int(1, prec)
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        BigFloat { man: BigInt::from(n), exp: 0, prec }.rounded()
    }

    pub fn from_bigint(n: BigInt, prec: u32) -> Self {
        BigFloat { man: n, exp: 0, prec }.rounded()
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        let n = BigFloat::from_bigint(r.numer().clone(), prec + 4);
        let d = BigFloat::from_bigint(r.denom().clone(), prec + 4);
        n.div(&d).with_prec(prec)
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        match Rational::from_float(v) {
            Some(r) => BigFloat::from_rational(&r, prec),
            None => BigFloat::zero(prec),
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigFloat { man: self.man.clone(), exp: self.exp, prec }.rounded()
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    /// Rounds the mantissa to `prec` bits, to nearest.
    fn rounded(mut self) -> Self {
        let bits = self.man.bits();
        if bits > u64::from(self.prec) {
            let k = bits - u64::from(self.prec);
            let neg = self.man.is_negative();
            let mag = self.man.magnitude();
            let half = num_bigint::BigUint::one() << (k - 1);
            let mag = (mag + half) >> k;
            self.man = BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, mag);
            self.exp += k as i64;
        }
        if self.man.is_zero() {
            self.exp = 0;
        }
        self
    }

    /// Position of the leading bit, `⌊log2 |self|⌋ + 1`; `i64::MIN` for zero.
    pub fn magnitude_bits(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.man.bits() as i64 + self.exp
        }
    }

    pub fn neg(&self) -> Self {
        BigFloat { man: -&self.man, exp: self.exp, prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        BigFloat { man: self.man.abs(), exp: self.exp, prec: self.prec }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            return other.with_prec(prec);
        }
        if other.is_zero() {
            return self.with_prec(prec);
        }
        let gap = i64::from(prec) + 4;
        if self.magnitude_bits() - other.magnitude_bits() > gap {
            return self.with_prec(prec);
        }
        if other.magnitude_bits() - self.magnitude_bits() > gap {
            return other.with_prec(prec);
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let shift = (hi.exp - lo.exp) as usize;
        let man = (&hi.man << shift) + &lo.man;
        BigFloat { man, exp: lo.exp, prec }.rounded()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        BigFloat { man: &self.man * &other.man, exp: self.exp + other.exp, prec }.rounded()
    }

    pub fn mul_int(&self, n: i64) -> Self {
        BigFloat { man: &self.man * n, exp: self.exp, prec: self.prec }.rounded()
    }

    /// Quotient; division by zero panics.
    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "BigFloat division by zero");
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            return BigFloat::zero(prec);
        }
        let want = i64::from(prec) + 2 + other.man.bits() as i64 - self.man.bits() as i64;
        let shift = want.max(0) as usize;
        let man = (&self.man << shift) / &other.man;
        BigFloat { man, exp: self.exp - shift as i64 - other.exp, prec }.rounded()
    }

    /// Multiplication by `2^k`.
    pub fn ldexp(&self, k: i64) -> Self {
        BigFloat { man: self.man.clone(), exp: self.exp + k, prec: self.prec }
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "square root of a negative BigFloat");
        if self.is_zero() {
            return self.clone();
        }
        // Scale the mantissa to about 2·prec bits with an even exponent.
        let target = 2 * i64::from(self.prec) + 4;
        let mut shift = (target - self.man.bits() as i64).max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m = self.man.magnitude() << shift as usize;
        let r = m.sqrt();
        BigFloat { man: BigInt::from(r), exp: (self.exp - shift) / 2, prec: self.prec }.rounded()
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.abs().sub(&other.abs()).sign_ordering()
    }

    fn sign_ordering(&self) -> Ordering {
        match self.man.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits() as i64;
        let drop = (bits - 60).max(0);
        let top = (&self.man >> drop as usize).to_f64().unwrap_or(0.0);
        let e = self.exp + drop;
        if e > 2000 {
            return top.signum() * f64::INFINITY;
        }
        if e < -2000 {
            return 0.0;
        }
        // Split the scaling to stay within the f64 exponent range.
        let half = e / 2;
        top * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
    }

    /// `log2 |self|` as an `f64`; `-inf` for zero.
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.man.bits() as i64;
        let drop = (bits - 60).max(0);
        let top = (&self.man >> drop as usize).to_f64().unwrap().abs();
        top.log2() + (self.exp + drop) as f64
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

/// Complex number with [`BigFloat`] parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Complex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::new(BigFloat::zero(prec), BigFloat::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Complex::new(BigFloat::one(prec), BigFloat::zero(prec))
    }

    pub fn from_real(re: BigFloat) -> Self {
        let prec = re.prec();
        Complex::new(re, BigFloat::zero(prec))
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        Complex::from_real(BigFloat::from_rational(r, prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Complex::new(BigFloat::from_f64(re, prec), BigFloat::from_f64(im, prec))
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Complex::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Complex::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Complex::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> Self {
        Complex::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        Complex::new(re, im)
    }

    pub fn scale(&self, r: &BigFloat) -> Self {
        Complex::new(self.re.mul(r), self.im.mul(r))
    }

    pub fn mul_int(&self, n: i64) -> Self {
        Complex::new(self.re.mul_int(n), self.im.mul_int(n))
    }

    /// `|z|²`.
    pub fn norm_sqr(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt()
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Complex::new(self.re.div(&n), self.im.neg().div(&n))
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        if im < 0.0 {
            write!(f, "{re:e} - {:e}i", -im)
        } else {
            write!(f, "{re:e} + {im:e}i")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::ratio;

    const P: u32 = 256;

    #[test]
    fn arithmetic_matches_f64() {
        let a = BigFloat::from_f64(1.5, P);
        let b = BigFloat::from_f64(-0.25, P);
        assert_eq!(a.add(&b).to_f64(), 1.25);
        assert_eq!(a.mul(&b).to_f64(), -0.375);
        assert_eq!(a.div(&b).to_f64(), -6.0);
        assert_eq!(BigFloat::from_int(9, P).sqrt().to_f64(), 3.0);
        assert_eq!(BigFloat::from_int(1, P).ldexp(-3).to_f64(), 0.125);
    }

    #[test]
    fn third_is_accurate_to_precision() {
        let third = BigFloat::from_rational(&ratio(1, 3), P);
        let back = third.mul_int(3).sub(&BigFloat::one(P));
        assert!(back.is_zero() || back.magnitude_bits() < -(P as i64) + 4);
    }

    #[test]
    fn sqrt_two_squared() {
        let r = BigFloat::from_int(2, P).sqrt();
        let err = r.mul(&r).sub(&BigFloat::from_int(2, P));
        assert!(err.is_zero() || err.magnitude_bits() < -(P as i64) + 6);
    }

    #[test]
    fn complex_division() {
        let z = Complex::from_f64(1.0, 2.0, P);
        let w = Complex::from_f64(3.0, -1.0, P);
        let q = z.div(&w);
        let back = q.mul(&w).sub(&z);
        assert!(back.abs().log2() < -240.0);
        assert_eq!(Complex::from_f64(3.0, 4.0, P).abs().to_f64(), 5.0);
    }

    #[test]
    fn tiny_addend_absorbed() {
        let one = BigFloat::one(64);
        let tiny = BigFloat::one(64).ldexp(-500);
        assert_eq!(one.add(&tiny), one);
    }
}
