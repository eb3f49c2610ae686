//! Exact Gaussian-rational arithmetic for indeterminacy and conjugacy checks.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An element of Q(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl RationalComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        RationalComplex { re, im }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    /// (a + bi) with a = an/ad, b = bn/bd.
    pub fn from_fracs(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        Self::new(
            BigRational::new(an.into(), ad.into()),
            BigRational::new(bn.into(), bd.into()),
        )
    }

    /// Exact value of a finite float pair (every finite f64 is a dyadic rational).
    pub fn from_f64_exact(c: Complex64) -> Option<Self> {
        Some(Self::new(BigRational::from_float(c.re)?, BigRational::from_float(c.im)?))
    }

    /// Continued-fraction approximation of each part with denominator ≤ `max_den`.
    pub fn approximate(c: Complex64, max_den: i64) -> Self {
        Self::new(approximate_real(c.re, max_den), approximate_real(c.im, max_den))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        Self::new(&self.re / &n, -&self.im / &n)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

fn approximate_real(x: f64, max_den: i64) -> BigRational {
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-300 {
            break;
        }
        let approx = h1.to_f64().unwrap() / k1.to_f64().unwrap();
        if approx == x {
            break;
        }
        r = 1.0 / frac;
    }
    if k1.is_zero() {
        return BigRational::from_integer(BigInt::from(x.round() as i64));
    }
    BigRational::new(h1, k1)
}

impl Add for &RationalComplex {
    type Output = RationalComplex;
    fn add(self, o: &RationalComplex) -> RationalComplex {
        RationalComplex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &RationalComplex {
    type Output = RationalComplex;
    fn sub(self, o: &RationalComplex) -> RationalComplex {
        RationalComplex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &RationalComplex {
    type Output = RationalComplex;
    fn mul(self, o: &RationalComplex) -> RationalComplex {
        RationalComplex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &RationalComplex {
    type Output = RationalComplex;
    fn neg(self) -> RationalComplex {
        RationalComplex::new(-&self.re, -&self.im)
    }
}

impl Add for RationalComplex {
    type Output = RationalComplex;
    fn add(self, o: RationalComplex) -> RationalComplex {
        &self + &o
    }
}

impl Sub for RationalComplex {
    type Output = RationalComplex;
    fn sub(self, o: RationalComplex) -> RationalComplex {
        &self - &o
    }
}

impl Mul for RationalComplex {
    type Output = RationalComplex;
    fn mul(self, o: RationalComplex) -> RationalComplex {
        &self * &o
    }
}

pub fn is_zero_vector(v: &[RationalComplex]) -> bool {
    v.iter().all(RationalComplex::is_zero)
}

/// Rescales a vector to a primitive integral representative (common
/// denominators cleared, integer content removed) to limit coefficient growth.
pub fn primitive<const N: usize>(v: &[RationalComplex; N]) -> [RationalComplex; N] {
    let mut lcm = BigInt::one();
    for c in v {
        lcm = lcm.lcm(c.re.denom()).lcm(c.im.denom());
    }
    let scale = BigRational::from_integer(lcm);
    let ints: Vec<(BigInt, BigInt)> = v
        .iter()
        .map(|c| ((&c.re * &scale).to_integer(), (&c.im * &scale).to_integer()))
        .collect();
    let mut g = BigInt::zero();
    for (a, b) in &ints {
        g = g.gcd(a).gcd(b);
    }
    if g.is_zero() {
        return v.clone();
    }
    let g = g.abs();
    let mut out = v.clone();
    for (o, (a, b)) in out.iter_mut().zip(ints) {
        *o = RationalComplex::new(
            BigRational::from_integer(a / &g),
            BigRational::from_integer(b / &g),
        );
    }
    out
}

/// Exact F(z).
pub fn apply_f_exact(z: &[RationalComplex; 3]) -> [RationalComplex; 3] {
    let [z0, z1, z2] = z;
    let (s0, s1, s2) = (z0 * z0, z1 * z1, z2 * z2);
    let q = &(&s0 - &s1) - &s2;
    [z0 * &q, &s1 * z2, z2 * &(&s0 - &s2)]
}

/// Exact G(z) = (z0 α − z1²(z0 + z4), z1²(z2 + z3), z4 α, z2 α, z3 α).
pub fn apply_g_exact(z: &[RationalComplex; 5]) -> [RationalComplex; 5] {
    let [z0, z1, z2, z3, z4] = z;
    let beta = z0 + z4;
    let eta = z2 + z3;
    let alpha = &(&beta * &beta) - &(&eta * &eta);
    let s1 = z1 * z1;
    [
        &(z0 * &alpha) - &(&s1 * &beta),
        &s1 * &eta,
        z4 * &alpha,
        z2 * &alpha,
        z3 * &alpha,
    ]
}

/// Exact X(w) = (w0 − w2/2, w1, w2/2, w2/2, w2/2).
pub fn embed_x_exact(w: &[RationalComplex; 3]) -> [RationalComplex; 5] {
    let half = RationalComplex::from_fracs(1, 2, 0, 1);
    let h = &w[2] * &half;
    [&w[0] - &h, w[1].clone(), h.clone(), h.clone(), h]
}
