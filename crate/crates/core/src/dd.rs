//! Double-double real and complex arithmetic (about 32 significant digits)
//! built from error-free transforms. Used where high-order series
//! coefficients cancel heavily.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn new(hi: f64) -> Self {
        Dd { hi, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = Dd::new(self.hi * x);
        let corr = (self - ax * ax).hi * (x * 0.5);
        let (hi, lo) = two_sum(ax.hi, corr);
        Dd { hi, lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::new(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

pub fn dd(z: Complex64) -> Cdd {
    Cdd { re: Dd::new(z.re), im: Dd::new(z.im) }
}

pub fn to_c64(z: Cdd) -> Complex64 {
    Complex64::new(z.re.to_f64(), z.im.to_f64())
}

impl Cdd {
    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    pub fn conj(self) -> Cdd {
        Cdd { re: self.re, im: -self.im }
    }
}

impl Add for Cdd {
    type Output = Cdd;
    #[inline]
    fn add(self, b: Cdd) -> Cdd {
        Cdd { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    #[inline]
    fn sub(self, b: Cdd) -> Cdd {
        Cdd { re: self.re - b.re, im: self.im - b.im }
    }
}

impl Neg for Cdd {
    type Output = Cdd;
    #[inline]
    fn neg(self) -> Cdd {
        Cdd { re: -self.re, im: -self.im }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    #[inline]
    fn mul(self, b: Cdd) -> Cdd {
        Cdd { re: self.re * b.re - self.im * b.im, im: self.re * b.im + self.im * b.re }
    }
}

impl Div for Cdd {
    type Output = Cdd;
    fn div(self, b: Cdd) -> Cdd {
        // Scale by a power of two first so |b|^2 neither overflows nor underflows.
        let s = b.re.hi.abs().max(b.im.hi.abs());
        let e = if s > 0.0 { s.log2().floor() } else { 0.0 };
        let f = Dd::new((-e).exp2());
        let bs = Cdd { re: b.re * f, im: b.im * f };
        let den = bs.norm_sqr();
        let num = self * bs.conj();
        Cdd { re: num.re * f / den, im: num.im * f / den }
    }
}

/// Principal square root, branch cut on the negative real axis.
pub fn sqrt(z: Cdd) -> Cdd {
    if z.re.hi == 0.0 && z.im.hi == 0.0 {
        return z;
    }
    let r = z.norm_sqr().sqrt();
    let half = Dd::new(0.5);
    let two = Dd::new(2.0);
    if z.re.hi >= 0.0 {
        let s = ((r + z.re) * half).sqrt();
        Cdd { re: s, im: z.im / (s * two) }
    } else {
        let s = ((r - z.re) * half).sqrt();
        let s = if z.im.hi < 0.0 { -s } else { s };
        Cdd { re: z.im / (s * two), im: s }
    }
}

pub fn norm(z: Cdd) -> f64 {
    to_c64(z).norm()
}
