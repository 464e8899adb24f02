//! Exact Gaussian-rational scalars: complex numbers with `BigRational`
//! real and imaginary parts. This field closes all the inner products of
//! the dual polynomial eigenfunctions, so biorthonormality can be asserted
//! with zero tolerance.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Self { re: BigRational::one(), im: BigRational::zero() }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    /// `num/den` as a real Gaussian rational.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    /// `(re_num/re_den) + (im_num/im_den)·i`.
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        assert!(re_den != 0 && im_den != 0, "zero denominator");
        Self {
            re: BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            im: BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        }
    }

    /// `i^k` for any integer exponent.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Exact division by a positive integer.
    pub fn div_int(&self, n: u64) -> Self {
        let d = BigRational::from_integer(BigInt::from(n));
        Self { re: &self.re / &d, im: &self.im / &d }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    // Keep precision for large numerators/denominators by scaling both
    // sides down together before the float division.
    let (n, d) = (r.numer(), r.denom());
    let shift = (n.bits().max(d.bits()) as i64 - 900).max(0) as u64;
    let n = n >> shift;
    let d = d >> shift;
    let nf = n.to_string().parse::<f64>().unwrap_or(if n.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    });
    let df = d.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
    nf / df
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}
