//! Indeterminacy sets I_n of the iterates F^n, their generation for small n,
//! and a cheap certificate for points outside E = ∪ I_n.

use num_complex::Complex64;
use serde::Serialize;

use crate::dihedral::{apply_f, tau};
use crate::error::{Error, Result};
use crate::exact::{apply_f_exact, is_zero_vector, primitive, RationalComplex};
use crate::geometry::{fs_distance, normalize, Coords, ExtendedComplex, Point2, PROJECTIVE_EQ_TOL};
use crate::poly::{roots, Poly};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Threshold on the image of a normalized point below which it counts as zero.
pub const FLOAT_ZERO_IMAGE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Arithmetic {
    Float,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IndeterminacyVerdict {
    pub member: bool,
    /// The step k with F(F^k(z)) = 0, i.e. z ∈ I_{k+1} \ I_k.
    pub first_hit_step: Option<usize>,
}

/// I1 = {[±1:1:0], [0:1:0], [±1:0:1]}.
pub fn indeterminacy_i1() -> Vec<Point2> {
    [
        [1.0, 1.0, 0.0],
        [-1.0, 1.0, 0.0],
        [0.0, 1.0, 0.0],
        [1.0, 0.0, 1.0],
        [-1.0, 0.0, 1.0],
    ]
    .iter()
    .map(|r| Point2::from_real(*r).expect("nonzero"))
    .collect()
}

pub fn in_i1(z: &impl Coords<3>) -> bool {
    indeterminacy_i1().iter().any(|p| fs_distance(p, z) < PROJECTIVE_EQ_TOL)
}

/// I2 = {z2 ≠ 0, z0/z2 = ±1} ∪ I1.
pub fn in_i2(z: &impl Coords<3>) -> bool {
    let Ok(p) = normalize(z) else { return false };
    let [z0, _, z2] = *p.coords();
    let on_lines = z2.norm() > PROJECTIVE_EQ_TOL
        && ((z0 - z2).norm() <= PROJECTIVE_EQ_TOL || (z0 + z2).norm() <= PROJECTIVE_EQ_TOL);
    on_lines || in_i1(&p)
}

/// Membership in I_n, decided by the forward orbit hitting the zero vector.
///
/// Exact mode lifts the float coordinates to their exact dyadic values.
pub fn in_in(z: &impl Coords<3>, n: usize, mode: Arithmetic) -> Result<IndeterminacyVerdict> {
    match mode {
        Arithmetic::Float => Ok(in_in_float(z, n)),
        Arithmetic::Exact => {
            let mut lifted = Vec::with_capacity(3);
            for c in z.coords() {
                lifted.push(
                    RationalComplex::from_f64_exact(*c)
                        .ok_or_else(|| Error::InvalidArgument("non-finite coordinate".into()))?,
                );
            }
            let lifted: [RationalComplex; 3] = lifted.try_into().expect("length 3");
            in_in_rational(&lifted, n)
        }
    }
}

fn in_in_float(z: &impl Coords<3>, n: usize) -> IndeterminacyVerdict {
    let Ok(mut p) = normalize(z) else {
        return IndeterminacyVerdict { member: false, first_hit_step: None };
    };
    for k in 0..n {
        let img = apply_f(&p);
        if img.0.iter().all(|c| c.norm() < FLOAT_ZERO_IMAGE) {
            return IndeterminacyVerdict { member: true, first_hit_step: Some(k) };
        }
        p = match normalize(&img) {
            Ok(q) => q,
            Err(_) => return IndeterminacyVerdict { member: true, first_hit_step: Some(k) },
        };
    }
    IndeterminacyVerdict { member: false, first_hit_step: None }
}

/// Largest step count accepted in exact mode; coordinate heights triple per step.
pub const MAX_EXACT_STEPS: usize = 8;

/// Exact membership in I_n for a Gaussian-rational point.
pub fn in_in_rational(z: &[RationalComplex; 3], n: usize) -> Result<IndeterminacyVerdict> {
    if n > MAX_EXACT_STEPS {
        return Err(Error::InvalidArgument(format!(
            "exact mode supports at most {MAX_EXACT_STEPS} steps, got {n}"
        )));
    }
    if is_zero_vector(z) {
        return Err(Error::ZeroVector);
    }
    let mut cur = primitive(z);
    for k in 0..n {
        let img = apply_f_exact(&cur);
        if is_zero_vector(&img) {
            return Ok(IndeterminacyVerdict { member: true, first_hit_step: Some(k) });
        }
        cur = primitive(&img);
    }
    Ok(IndeterminacyVerdict { member: false, first_hit_step: None })
}

/// Coordinates of the cleared point p̃(x) = (s, ζ η(x), 1 − ζ ηS(x)) as
/// polynomials in x. When τ(p̃(x)) = x, F^{n−2} maps p̃(x) onto a line z0 = ±z2.
fn lifted_point_polys(n: usize, zeta: Complex64, sign: f64) -> [Poly; 3] {
    // P_k = T^k(x) as polynomials.
    let mut p = vec![Poly::x()];
    for k in 1..=n.saturating_sub(3) {
        let prev = &p[k - 1];
        p.push(prev.mul(prev).scale(Complex64::new(2.0, 0.0)).sub(&Poly::constant(ONE)));
    }
    let prod = |from: usize| -> Poly {
        let mut acc = Poly::constant(ONE);
        for q in p.iter().take(n - 2).skip(from) {
            acc = acc.mul(q);
        }
        acc
    };
    let eta = prod(0).scale(Complex64::new(2f64.powi(n as i32 - 2), 0.0));
    let mut eta_s = Poly::constant(Complex64::new(0.0, 0.0));
    for j in 1..=n - 2 {
        eta_s = eta_s.add(&prod(j).scale(Complex64::new(2f64.powi((n - 2 - j) as i32), 0.0)));
    }
    [
        Poly::constant(Complex64::new(sign, 0.0)),
        eta.scale(zeta),
        Poly::constant(ONE).sub(&eta_s.scale(zeta)),
    ]
}

/// Points z ∈ I_n \ I_{n−1} with z1 = ζ·(cleared factor) and z0 = ±(cleared
/// factor), for n ∈ {3, 4, 5}. Candidates come from the roots of the
/// constraint polynomial in x = τ(z) and are kept only if the float orbit
/// first vanishes at step n − 1.
pub fn generate_in_prime(n: usize, zeta: Complex64, sign: i8) -> Result<Vec<Point2>> {
    if !(3..=5).contains(&n) {
        return Err(Error::InvalidArgument(format!("n must be 3, 4 or 5, got {n}")));
    }
    if zeta.norm() == 0.0 {
        return Err(Error::InvalidArgument("zeta must be nonzero".into()));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidArgument("sign must be +1 or -1".into()));
    }
    let [p0, p1, p2] = lifted_point_polys(n, zeta, sign as f64);
    // p0² − p1² − p2² − 2x p1 p2 = 0 expresses τ(p̃(x)) = x.
    let constraint = p0
        .mul(&p0)
        .sub(&p1.mul(&p1))
        .sub(&p2.mul(&p2))
        .sub(&Poly::x().mul(&p1).mul(&p2).scale(Complex64::new(2.0, 0.0)));
    let xs = roots(&constraint)?;
    let mut out: Vec<Point2> = Vec::new();
    for x in xs {
        let v = [p0.eval(x), p1.eval(x), p2.eval(x)];
        let Ok(z) = normalize(&v) else { continue };
        let verdict = in_in_float(&z, n);
        if verdict.first_hit_step != Some(n - 1) {
            continue;
        }
        if out.iter().all(|q| fs_distance(q, &z) > 1e-8) {
            out.push(z);
        }
    }
    if out.is_empty() {
        Err(Error::NoSolution)
    } else {
        Ok(out)
    }
}

/// The closed-form I3' template [±1/(2τ) : ζ : (1 − ζ)/(2τ)] with τ² = (2 − ζ)/4.
pub fn i3_template(zeta: Complex64, tau_value: Complex64, sign: i8) -> Result<Point2> {
    let d = 2.0 * tau_value;
    normalize(&[Complex64::new(sign as f64, 0.0) / d, zeta, (1.0 - zeta) / d])
}

/// Sufficient condition for z ∉ E: |τ(z)| > 1 and |z2| > |z0| + |z1|.
pub fn e_exclusion_certificate(z: &impl Coords<3>) -> bool {
    let Ok(p) = normalize(z) else { return false };
    let [z0, z1, z2] = *p.coords();
    let t_ok = match tau(&p) {
        ExtendedComplex::Infinity => true,
        ExtendedComplex::Finite(t) => t.norm() > 1.0,
    };
    t_ok && z2.norm() > z0.norm() + z1.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RationalComplex as R;

    #[test]
    fn i1_points_hit_at_step_zero() {
        for p in indeterminacy_i1() {
            let v = in_in(&p, 3, Arithmetic::Exact).unwrap();
            assert_eq!(v.first_hit_step, Some(0));
            assert!(in_i2(&p));
        }
    }

    #[test]
    fn i2_line_points_hit_at_step_one() {
        let z = [R::from_ints(3, 1), R::from_ints(7, -2), R::from_ints(3, 1)];
        let v = in_in_rational(&z, 4).unwrap();
        assert_eq!(v.first_hit_step, Some(1));
        let p = Point2::from_real([-2.0, 5.0, 2.0]).unwrap();
        assert!(in_i2(&p));
        assert_eq!(in_in(&p, 4, Arithmetic::Float).unwrap().first_hit_step, Some(1));
    }

    #[test]
    fn generic_point_not_in_e() {
        let p = Point2::from_real([1.0, 1.0, 3.0]).unwrap();
        assert!(!in_in(&p, 6, Arithmetic::Exact).unwrap().member);
        assert!(in_in(&p, 20, Arithmetic::Exact).is_err());
        assert!(!in_in(&p, 20, Arithmetic::Float).unwrap().member);
        assert!(e_exclusion_certificate(&p));
        assert!(!e_exclusion_certificate(&Point2::from_real([2.0, 1.0, 1.0]).unwrap()));
    }

    #[test]
    fn generated_points_have_correct_depth() {
        for n in 3..=5 {
            for sign in [1i8, -1] {
                let pts = generate_in_prime(n, Complex64::new(0.7, 0.3), sign).unwrap();
                assert!(!pts.is_empty());
                for p in pts {
                    assert_eq!(in_in(&p, n, Arithmetic::Float).unwrap().first_hit_step, Some(n - 1));
                }
            }
        }
    }

    #[test]
    fn generate_rejects_bad_arguments() {
        assert!(generate_in_prime(3, Complex64::new(0.0, 0.0), 1).is_err());
        assert!(generate_in_prime(6, Complex64::new(1.0, 0.0), 1).is_err());
    }
}
