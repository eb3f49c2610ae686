//! Fixed points of F and G, their Jacobians and multiplier types.

use num_complex::Complex64;
use serde::Serialize;

use crate::dihedral::apply_f;
use crate::error::{Error, Result};
use crate::geometry::{serialize_complex, serialize_complex_slice};
use crate::grigorchuk::apply_g;
use crate::poly::{eigenvalues, solve, CMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance on ||μ| − 1| for a parabolic multiplier.
pub const UNIT_TOL: f64 = 1e-8;
/// Moduli below this count as zero eigenvalues.
pub const ZERO_EIG_TOL: f64 = 1e-12;
/// Maximum scaled residual ‖H(z) − λz‖ for a fixed point.
pub const FIXED_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointType {
    SuperAttracting,
    Attracting,
    Repelling,
    Saddle,
    Parabolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MapId {
    F,
    G,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedPointRecord {
    pub map: MapId,
    #[serde(serialize_with = "serialize_complex_slice")]
    pub location: Vec<Complex64>,
    /// H(z) = λ z; λ = 1 for affine fixed points.
    #[serde(serialize_with = "serialize_complex")]
    pub lambda: Complex64,
    /// Eigenvalues of H'(z)/λ.
    #[serde(serialize_with = "serialize_complex_slice")]
    pub eigenvalues: Vec<Complex64>,
    #[serde(rename = "type")]
    pub fp_type: FixedPointType,
    pub residual: f64,
}

/// Jacobian of F.
pub fn jacobian_f(z: &[Complex64; 3]) -> [[Complex64; 3]; 3] {
    let [z0, z1, z2] = *z;
    let j = [
        [3.0 * z0 * z0 - z1 * z1 - z2 * z2, -2.0 * z0 * z1, -2.0 * z0 * z2],
        [ZERO, 2.0 * z1 * z2, z1 * z1],
        [2.0 * z0 * z2, ZERO, z0 * z0 - 3.0 * z2 * z2],
    ];
    debug_assert!({
        let det = crate::poly::determinant(&crate::poly::mat_from_array(&j));
        let closed =
            6.0 * z1 * z2 * (z0 * z0 - z2 * z2) * (z0 * z0 - z1 * z1 - z2 * z2);
        let s = z.iter().map(|c| c.norm()).fold(1.0, f64::max);
        (det - closed).norm() <= 1e-10 * s.powi(6)
    });
    j
}

/// Jacobian of G, with β = z0 + z4, η = z2 + z3 and α = β² − η².
pub fn jacobian_g(z: &[Complex64; 5]) -> [[Complex64; 5]; 5] {
    let [z0, z1, z2, z3, z4] = *z;
    let b = z0 + z4;
    let e = z2 + z3;
    let a = b * b - e * e;
    let s1 = z1 * z1;
    [
        [a + 2.0 * z0 * b - s1, -2.0 * z1 * b, -2.0 * z0 * e, -2.0 * z0 * e, 2.0 * z0 * b - s1],
        [ZERO, 2.0 * z1 * e, s1, s1, ZERO],
        [2.0 * z4 * b, ZERO, -2.0 * z4 * e, -2.0 * z4 * e, a + 2.0 * z4 * b],
        [2.0 * z2 * b, ZERO, a - 2.0 * z2 * e, -2.0 * z2 * e, 2.0 * z2 * b],
        [2.0 * z3 * b, ZERO, -2.0 * z3 * e, a - 2.0 * z3 * e, 2.0 * z3 * b],
    ]
}

/// Type from multiplier moduli. Zero eigenvalues are dropped in projective
/// mode, so they do not block a repelling verdict there.
pub fn fixed_point_type(eigs: &[Complex64], projective: bool) -> FixedPointType {
    let mods: Vec<f64> = eigs.iter().map(|m| m.norm()).collect();
    if mods.iter().all(|&m| m <= ZERO_EIG_TOL) {
        return FixedPointType::SuperAttracting;
    }
    if mods.iter().any(|&m| (m - 1.0).abs() <= UNIT_TOL) {
        return FixedPointType::Parabolic;
    }
    let considered: Vec<f64> = if projective {
        mods.iter().copied().filter(|&m| m > ZERO_EIG_TOL).collect()
    } else {
        mods
    };
    if considered.iter().all(|&m| m < 1.0) {
        FixedPointType::Attracting
    } else if considered.iter().all(|&m| m > 1.0) {
        FixedPointType::Repelling
    } else {
        FixedPointType::Saddle
    }
}

fn record(
    map: MapId,
    z: &[Complex64],
    lambda: Complex64,
    image: &[Complex64],
    jac: CMatrix,
) -> Result<FixedPointRecord> {
    let s = z.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let resid = z
        .iter()
        .zip(image)
        .map(|(a, b)| (b - lambda * a).norm())
        .fold(0.0, f64::max)
        / s.powi(3).max(1.0);
    if resid > FIXED_RESIDUAL_TOL {
        return Err(Error::NotFixed { residual: resid });
    }
    if lambda == ZERO {
        return Err(Error::InvalidArgument("lambda must be nonzero".into()));
    }
    let scaled: CMatrix = jac.iter().map(|r| r.iter().map(|c| c / lambda).collect()).collect();
    let eigs = eigenvalues(&scaled)?;
    Ok(FixedPointRecord {
        map,
        location: z.to_vec(),
        lambda,
        fp_type: fixed_point_type(&eigs, lambda != ONE),
        eigenvalues: eigs,
        residual: resid,
    })
}

/// Validates H(z) = λz and classifies the multipliers of H'(z)/λ.
pub fn classify_fixed_point_f(z: &[Complex64; 3], lambda: Complex64) -> Result<FixedPointRecord> {
    let img = apply_f(z);
    let jac = jacobian_f(z).iter().map(|r| r.to_vec()).collect();
    record(MapId::F, z, lambda, &img.0, jac)
}

pub fn classify_fixed_point_g(z: &[Complex64; 5], lambda: Complex64) -> Result<FixedPointRecord> {
    let img = apply_g(z);
    let jac = jacobian_g(z).iter().map(|r| r.to_vec()).collect();
    record(MapId::G, z, lambda, &img.0, jac)
}

/// Point of the family Y_F = {(±√(1 + z2²), 0, z2)} of affine fixed points.
pub fn y_f_sample(z2: Complex64, sign: f64) -> [Complex64; 3] {
    [sign * (ONE + z2 * z2).sqrt(), ZERO, z2]
}

/// Point [1 : 0 : t] of the projective fixed line {z1 = 0}; t ≠ ±1.
pub fn projective_line_sample(t: Complex64) -> [Complex64; 3] {
    [ONE, ZERO, t]
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedFamily {
    pub name: &'static str,
    pub description: &'static str,
    pub samples: Vec<FixedPointRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointSet {
    pub isolated: Vec<FixedPointRecord>,
    pub families: Vec<FixedFamily>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Affine,
    Projective,
}

/// Fixed points of F: isolated points plus sampled one-parameter families.
pub fn fixed_points_f(domain: Domain) -> Result<FixedPointSet> {
    let i = Complex64::new(0.0, 1.0);
    let params = [
        Complex64::new(0.5, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(0.3, 0.7),
        Complex64::new(-1.5, 0.2),
    ];
    match domain {
        Domain::Affine => {
            let isolated = vec![
                classify_fixed_point_f(&[ZERO; 3], ONE)?,
                classify_fixed_point_f(&[ZERO, i, -i], ONE)?,
                classify_fixed_point_f(&[ZERO, -i, i], ONE)?,
            ];
            let mut samples = Vec::new();
            for t in params {
                for sign in [1.0, -1.0] {
                    samples.push(classify_fixed_point_f(&y_f_sample(t, sign), ONE)?);
                }
            }
            Ok(FixedPointSet {
                isolated,
                families: vec![FixedFamily {
                    name: "Y_F",
                    description: "z1 = 0, z0^2 = 1 + z2^2",
                    samples,
                }],
            })
        }
        Domain::Projective => {
            let z = [ZERO, ONE, -ONE];
            let isolated = vec![classify_fixed_point_f(&z, -ONE)?];
            let mut samples = Vec::new();
            for t in params {
                let z = projective_line_sample(t);
                samples.push(classify_fixed_point_f(&z, ONE - t * t)?);
            }
            Ok(FixedPointSet {
                isolated,
                families: vec![FixedFamily {
                    name: "line_z1_zero",
                    description: "z1 = 0 minus the points [+-1 : 0 : 1]",
                    samples,
                }],
            })
        }
    }
}

/// Y1(γ) = (−γ ± √(1 + 4γ²), 0, γ, γ, γ).
pub fn y1_point(gamma: Complex64, sign: f64) -> [Complex64; 5] {
    let r = (ONE + 4.0 * gamma * gamma).sqrt();
    [-gamma + sign * r, ZERO, gamma, gamma, gamma]
}

/// Initial guesses for the eight points of Y2: α a primitive cube root of
/// unity, β² = (−4α − 3 ± i√(8α + 3))/(2α + 10).
pub fn y2_seeds() -> Vec<[Complex64; 5]> {
    let i = Complex64::new(0.0, 1.0);
    let mut out = Vec::new();
    for k in [1.0, 2.0] {
        let a = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k / 3.0);
        for s in [1.0, -1.0] {
            let w = (-4.0 * a - 3.0 + s * i * (8.0 * a + 3.0).sqrt()) / (2.0 * a + 10.0);
            let b0 = w.sqrt();
            for b in [b0, -b0] {
                let z0 = b / (b * b * (a - 1.0) - 1.0);
                out.push([z0, -ONE / b, a * b, a * a * b, b]);
            }
        }
    }
    out
}

/// Newton refinement of G(z) = z.
pub fn refine_g_fixed(mut z: [Complex64; 5]) -> Result<[Complex64; 5]> {
    for _ in 0..50 {
        let g = apply_g(&z);
        let r: Vec<Complex64> = (0..5).map(|k| g[k] - z[k]).collect();
        if r.iter().map(|c| c.norm()).fold(0.0, f64::max) < 1e-15 {
            break;
        }
        let jac = jacobian_g(&z);
        let a: CMatrix = (0..5)
            .map(|i| (0..5).map(|j| jac[i][j] - if i == j { ONE } else { ZERO }).collect())
            .collect();
        let neg: Vec<Complex64> = r.iter().map(|c| -c).collect();
        let dx = solve(&a, &neg)?;
        for k in 0..5 {
            z[k] += dx[k];
        }
    }
    Ok(z)
}

#[derive(Clone, Debug, Serialize)]
pub struct GFixedPointReport {
    /// 0 and (±1, 0, 0, 0, 0).
    pub trivial: Vec<FixedPointRecord>,
    pub y1: Vec<FixedPointRecord>,
    pub y2: Vec<FixedPointRecord>,
    /// [−1 : −2 : 1 : 1 : 1], with G(z) = −4z.
    pub projective: Vec<FixedPointRecord>,
}

/// Fixed points of G, with Y1 sampled at the given γ values.
pub fn fixed_points_g(gammas: &[Complex64]) -> Result<GFixedPointReport> {
    let mut trivial = vec![classify_fixed_point_g(&[ZERO; 5], ONE)?];
    for s in [1.0, -1.0] {
        let mut z = [ZERO; 5];
        z[0] = Complex64::new(s, 0.0);
        trivial.push(classify_fixed_point_g(&z, ONE)?);
    }
    let mut y1 = Vec::new();
    for &g in gammas {
        for s in [1.0, -1.0] {
            y1.push(classify_fixed_point_g(&y1_point(g, s), ONE)?);
        }
    }
    let mut y2 = Vec::new();
    for seed in y2_seeds() {
        let z = refine_g_fixed(seed)?;
        y2.push(classify_fixed_point_g(&z, ONE)?);
    }
    let p = [-1.0, -2.0, 1.0, 1.0, 1.0].map(|x| Complex64::new(x, 0.0));
    let projective = vec![classify_fixed_point_g(&p, Complex64::new(-4.0, 0.0))?];
    Ok(GFixedPointReport { trivial, y1, y2, projective })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_moduli(e: &[Complex64]) -> Vec<f64> {
        let mut m: Vec<f64> = e.iter().map(|x| x.norm()).collect();
        m.sort_by(f64::total_cmp);
        m
    }

    /// Central differences as an independent check of an analytic Jacobian.
    fn fd_jacobian<const N: usize>(h: impl Fn(&[Complex64; N]) -> [Complex64; N], z: [Complex64; N]) -> Vec<Vec<Complex64>> {
        let eps = 1e-6;
        let mut out = vec![vec![ZERO; N]; N];
        for j in 0..N {
            let (mut zp, mut zm) = (z, z);
            zp[j] += eps;
            zm[j] -= eps;
            let (fp, fm) = (h(&zp), h(&zm));
            for i in 0..N {
                out[i][j] = (fp[i] - fm[i]) / (2.0 * eps);
            }
        }
        out
    }

    #[test]
    fn jacobians_match_finite_differences() {
        let z3 = [c(0.7, 0.2), c(-1.1, 0.4), c(0.3, -0.8)];
        let jf = jacobian_f(&z3);
        let fd = fd_jacobian(|z| apply_f(z).0, z3);
        let z5 = [c(0.7, 0.2), c(-1.1, 0.4), c(0.3, -0.8), c(0.5, 0.5), c(-0.2, 1.0)];
        let jg = jacobian_g(&z5);
        let gd = fd_jacobian(|z| apply_g(z).0, z5);
        for i in 0..3 {
            for j in 0..3 {
                assert!((jf[i][j] - fd[i][j]).norm() < 1e-8);
            }
        }
        for i in 0..5 {
            for j in 0..5 {
                assert!((jg[i][j] - gd[i][j]).norm() < 1e-8, "G'[{i}][{j}]");
            }
        }
    }

    #[test]
    fn determinant_at_reference_point() {
        let z = [c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)];
        let d = crate::poly::determinant(&crate::poly::mat_from_array(&jacobian_f(&z)));
        assert!((d - c(36.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn dihedral_fixed_point_types() {
        let set = fixed_points_f(Domain::Affine).unwrap();
        assert_eq!(set.isolated[0].fp_type, FixedPointType::SuperAttracting);
        assert_eq!(set.isolated[1].fp_type, FixedPointType::Repelling);
        let m = sorted_moduli(&set.isolated[1].eigenvalues);
        assert!((m[0] - 2.0).abs() < 1e-6 && (m[1] - 2.0).abs() < 1e-6 && (m[2] - 3.0).abs() < 1e-9);
        for s in &set.families[0].samples {
            assert_eq!(s.fp_type, FixedPointType::Parabolic);
        }
        let proj = fixed_points_f(Domain::Projective).unwrap();
        assert!(proj.isolated[0].residual < 1e-15);
    }

    #[test]
    fn y_f_multipliers_are_zero_one_three() {
        // At (√2, 0, 1) the Jacobian is [[5,0,-2√2],[0,0,0],[2√2,0,-1]].
        let z = [c(2f64.sqrt(), 0.0), ZERO, c(1.0, 0.0)];
        let r = classify_fixed_point_f(&z, ONE).unwrap();
        let m = sorted_moduli(&r.eigenvalues);
        assert!(m[0] < 1e-12 && (m[1] - 1.0).abs() < 1e-12 && (m[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn grigorchuk_fixed_points() {
        let rep = fixed_points_g(&[c(1.0, 0.0), c(0.5, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(rep.trivial[0].fp_type, FixedPointType::SuperAttracting);
        for r in &rep.y1 {
            assert_eq!(r.fp_type, FixedPointType::Parabolic);
        }
        assert_eq!(rep.y2.len(), 8);
        for r in &rep.y2 {
            assert!(r.residual < 1e-12);
            assert_ne!(r.fp_type, FixedPointType::Attracting);
        }
        assert!(rep.projective[0].residual == 0.0);
    }

    #[test]
    fn not_fixed_is_rejected() {
        let z = [c(1.0, 0.0), c(1.0, 0.0), c(3.0, 0.0)];
        assert!(matches!(classify_fixed_point_f(&z, ONE), Err(Error::NotFixed { .. })));
    }

    #[test]
    fn type_rules() {
        use FixedPointType::*;
        assert_eq!(fixed_point_type(&[ZERO, ZERO], false), SuperAttracting);
        assert_eq!(fixed_point_type(&[c(0.5, 0.0), c(0.1, 0.0)], false), Attracting);
        assert_eq!(fixed_point_type(&[c(2.0, 0.0), c(0.0, 3.0)], false), Repelling);
        assert_eq!(fixed_point_type(&[c(2.0, 0.0), ZERO], false), Saddle);
        assert_eq!(fixed_point_type(&[c(2.0, 0.0), ZERO], true), Repelling);
        assert_eq!(fixed_point_type(&[c(2.0, 0.0), c(0.0, 1.0)], false), Parabolic);
    }
}
