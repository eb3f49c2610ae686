//! Points in C^3, C^5 and their projectivizations, the extended complex line,
//! Fubini–Study distance and the text formats used by the CLI.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

/// Tolerance used for projective equality in Fubini–Study distance.
pub const PROJECTIVE_EQ_TOL: f64 = 1e-10;

/// An element of the Riemann sphere C ∪ {∞}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtendedComplex {
    pub fn real(x: f64) -> Self {
        ExtendedComplex::Finite(Complex64::new(x, 0.0))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedComplex::Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            ExtendedComplex::Finite(c) => Some(c),
            ExtendedComplex::Infinity => None,
        }
    }

    /// Modulus, with |∞| = +∞.
    pub fn norm(&self) -> f64 {
        match self {
            ExtendedComplex::Finite(c) => c.norm(),
            ExtendedComplex::Infinity => f64::INFINITY,
        }
    }

    pub fn add(self, other: Self) -> Result<Self> {
        use ExtendedComplex::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
            (Infinity, Infinity) => Err(Error::UndefinedArithmetic("inf + inf")),
            _ => Ok(Infinity),
        }
    }

    pub fn neg(self) -> Self {
        match self {
            ExtendedComplex::Finite(a) => ExtendedComplex::Finite(-a),
            ExtendedComplex::Infinity => ExtendedComplex::Infinity,
        }
    }

    /// Subtraction; ∞ − ∞ is undefined (there is a single point at infinity).
    pub fn sub(self, other: Self) -> Result<Self> {
        use ExtendedComplex::*;
        match (self, other) {
            (Infinity, Infinity) => Err(Error::UndefinedArithmetic("inf - inf")),
            _ => self.add(other.neg()),
        }
    }

    pub fn mul(self, other: Self) -> Result<Self> {
        use ExtendedComplex::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Ok(Finite(a * b)),
            (Infinity, Finite(b)) | (Finite(b), Infinity) => {
                if b == Complex64::new(0.0, 0.0) {
                    Err(Error::UndefinedArithmetic("inf * 0"))
                } else {
                    Ok(Infinity)
                }
            }
            (Infinity, Infinity) => Ok(Infinity),
        }
    }

    /// 1/x with 1/0 = ∞ and 1/∞ = 0.
    pub fn recip(self) -> Self {
        match self {
            ExtendedComplex::Infinity => ExtendedComplex::Finite(Complex64::new(0.0, 0.0)),
            ExtendedComplex::Finite(a) if a == Complex64::new(0.0, 0.0) => {
                ExtendedComplex::Infinity
            }
            ExtendedComplex::Finite(a) => ExtendedComplex::Finite(a.inv()),
        }
    }
}

impl From<Complex64> for ExtendedComplex {
    fn from(c: Complex64) -> Self {
        ExtendedComplex::Finite(c)
    }
}

impl fmt::Display for ExtendedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedComplex::Finite(c) => f.write_str(&format_complex(*c)),
            ExtendedComplex::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedComplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Read access to the coordinate array of a point.
pub trait Coords<const N: usize> {
    fn coords(&self) -> &[Complex64; N];
}

impl<const N: usize> Coords<N> for [Complex64; N] {
    fn coords(&self) -> &[Complex64; N] {
        self
    }
}

/// A vector in C^N (N is 3 or 5 in this crate).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffinePoint<const N: usize>(pub [Complex64; N]);

pub type Affine3 = AffinePoint<3>;
pub type Affine5 = AffinePoint<5>;

impl<const N: usize> AffinePoint<N> {
    pub fn new(c: [Complex64; N]) -> Self {
        AffinePoint(c)
    }

    pub fn from_real(r: [f64; N]) -> Self {
        AffinePoint(r.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        AffinePoint(self.0.map(|c| c * s))
    }
}

impl<const N: usize> Coords<N> for AffinePoint<N> {
    fn coords(&self) -> &[Complex64; N] {
        &self.0
    }
}

impl<const N: usize> std::ops::Index<usize> for AffinePoint<N> {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

/// A point of P^{N-1}, stored as its canonical representative: the first
/// coordinate of maximal modulus is exactly 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HomogeneousPoint<const N: usize> {
    coords: [Complex64; N],
    pivot: usize,
}

pub type Point2 = HomogeneousPoint<3>;
pub type Point4 = HomogeneousPoint<5>;

impl<const N: usize> HomogeneousPoint<N> {
    pub fn pivot(&self) -> usize {
        self.pivot
    }

    /// The canonical representative as an affine vector.
    pub fn lift(&self) -> AffinePoint<N> {
        AffinePoint(self.coords)
    }

    pub fn from_real(r: [f64; N]) -> Result<Self> {
        normalize(&AffinePoint::from_real(r))
    }

    pub fn from_complex(c: [Complex64; N]) -> Result<Self> {
        normalize(&c)
    }
}

impl<const N: usize> Coords<N> for HomogeneousPoint<N> {
    fn coords(&self) -> &[Complex64; N] {
        &self.coords
    }
}

impl<const N: usize> std::ops::Index<usize> for HomogeneousPoint<N> {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.coords[i]
    }
}

/// Canonical projective representative of a nonzero vector.
pub fn normalize<const N: usize>(v: &impl Coords<N>) -> Result<HomogeneousPoint<N>> {
    let c = v.coords();
    let mut pivot = 0;
    let mut best = -1.0;
    for (i, z) in c.iter().enumerate() {
        let m = z.norm();
        if m.is_nan() {
            return Err(Error::InvalidArgument("NaN coordinate".into()));
        }
        if m > best {
            best = m;
            pivot = i;
        }
    }
    if best == 0.0 {
        return Err(Error::ZeroVector);
    }
    let p = c[pivot];
    if p == Complex64::new(1.0, 0.0) {
        return Ok(HomogeneousPoint { coords: *c, pivot });
    }
    let mut coords = c.map(|z| z / p);
    coords[pivot] = Complex64::new(1.0, 0.0);
    Ok(HomogeneousPoint { coords, pivot })
}

/// ‖v‖_p for p ≥ 1, or the sup norm for p = ∞.
pub fn norm_p(v: &[Complex64], p: f64) -> f64 {
    if p.is_infinite() {
        v.iter().map(|c| c.norm()).fold(0.0, f64::max)
    } else if p == 1.0 {
        v.iter().map(|c| c.norm()).sum()
    } else if p == 2.0 {
        v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    } else {
        v.iter().map(|c| c.norm().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Fubini–Study distance in [0, π/2], computed as atan2(‖p∧q‖, |⟨p,q⟩|)
/// so that it stays accurate near 0.
pub fn fs_distance<const N: usize>(p: &impl Coords<N>, q: &impl Coords<N>) -> f64 {
    let (p, q) = (p.coords(), q.coords());
    let sp = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let sq = q.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if sp == 0.0 || sq == 0.0 {
        return f64::NAN;
    }
    let p: Vec<Complex64> = p.iter().map(|c| c / sp).collect();
    let q: Vec<Complex64> = q.iter().map(|c| c / sq).collect();
    let inner: Complex64 = p.iter().zip(&q).map(|(a, b)| a.conj() * b).sum();
    let mut wedge = 0.0;
    for i in 0..N {
        for j in i + 1..N {
            wedge += (p[i] * q[j] - p[j] * q[i]).norm_sqr();
        }
    }
    wedge.sqrt().atan2(inner.norm())
}

pub fn projectively_equal<const N: usize>(p: &impl Coords<N>, q: &impl Coords<N>) -> bool {
    fs_distance(p, q) < PROJECTIVE_EQ_TOL
}

fn format_real(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Shortest round-trip text for a complex number, e.g. `1.5-2i`.
pub fn format_complex(c: Complex64) -> String {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", format_real(c.re), sign, format_real(c.im.abs()))
}

fn parse_real(s: &str) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("invalid number '{s}'")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("non-finite number '{s}'")));
    }
    Ok(v)
}

/// Parses `a`, `bi`, `a+bi`, `a-i`, with exponents allowed.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty complex number".into()));
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(parse_real(&s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => parse_real(t),
        }
    };
    match split {
        Some(k) => Ok(Complex64::new(parse_real(&body[..k])?, imag(&body[k..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

fn parse_coords<const N: usize>(s: &str, sep: char) -> Result<[Complex64; N]> {
    let parts: Vec<&str> = s.split(sep).collect();
    if parts.len() != N {
        return Err(Error::DimensionMismatch { expected: N, found: parts.len() });
    }
    let mut out = [Complex64::new(0.0, 0.0); N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = parse_complex(p)?;
    }
    Ok(out)
}

impl<const N: usize> fmt::Display for AffinePoint<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| format_complex(*c)).collect();
        f.write_str(&parts.join(","))
    }
}

impl<const N: usize> FromStr for AffinePoint<N> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
        Ok(AffinePoint(parse_coords(s, ',')?))
    }
}

impl<const N: usize> fmt::Display for HomogeneousPoint<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| format_complex(*c)).collect();
        write!(f, "[{}]", parts.join(" : "))
    }
}

/// Accepts `[a : b : c]` or the affine `a,b,c` form.
impl<const N: usize> FromStr for HomogeneousPoint<N> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            normalize(&parse_coords::<N>(inner, ':')?)
        } else {
            normalize(&s.parse::<AffinePoint<N>>()?)
        }
    }
}

fn serialize_coords<S: Serializer>(c: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(c.len()))?;
    for z in c {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

fn deserialize_coords<'de, D: Deserializer<'de>, const N: usize>(
    d: D,
) -> std::result::Result<[Complex64; N], D::Error> {
    let v: Vec<[f64; 2]> = Vec::deserialize(d)?;
    if v.len() != N {
        return Err(serde::de::Error::invalid_length(v.len(), &"point coordinates"));
    }
    let mut out = [Complex64::new(0.0, 0.0); N];
    for (o, [re, im]) in out.iter_mut().zip(v) {
        *o = Complex64::new(re, im);
    }
    Ok(out)
}

/// Serialized as a list of `[re, im]` pairs.
impl<const N: usize> Serialize for AffinePoint<N> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_coords(&self.0, s)
    }
}

impl<'de, const N: usize> Deserialize<'de> for AffinePoint<N> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(AffinePoint(deserialize_coords::<D, N>(d)?))
    }
}

impl<const N: usize> Serialize for HomogeneousPoint<N> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_coords(&self.coords, s)
    }
}

impl<'de, const N: usize> Deserialize<'de> for HomogeneousPoint<N> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let c = deserialize_coords::<D, N>(d)?;
        normalize(&c).map_err(serde::de::Error::custom)
    }
}

/// Serializes a slice of complex numbers as `[re, im]` pairs.
pub fn serialize_complex_slice<S: Serializer>(
    c: &[Complex64],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    serialize_coords(c, s)
}

pub fn serialize_complex<S: Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [c.re, c.im].serialize(s)
}
