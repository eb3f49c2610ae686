//! The map G on P^4 attached to the Grigorchuk pencil, the embedding
//! X : P^2 → M ⊂ P^4 that conjugates F to G, and the degenerate behavior of
//! G on the quadric J = {α = 0}.

use num_complex::Complex64;
use serde::Serialize;

use crate::classification::{classify_point, Classification};
use crate::error::{Error, Result};
use crate::exact::{apply_g_exact, is_zero_vector, RationalComplex};
use crate::geometry::{normalize, Affine3, Affine5, AffinePoint, Coords, Point2, Point4};
use crate::spectrum::pencil_spectrum_in_zeta;

/// Relative tolerance for membership in M and on J.
pub const SLICE_TOL: f64 = 1e-10;

/// α(z) = (z0 + z4)² − (z2 + z3)².
pub fn alpha(z: &impl Coords<5>) -> Complex64 {
    let [z0, _, z2, z3, z4] = *z.coords();
    let b = z0 + z4;
    let e = z2 + z3;
    b * b - e * e
}

/// G(z) = (z0 α − z1²(z0 + z4), z1²(z2 + z3), z4 α, z2 α, z3 α).
pub fn apply_g(z: &impl Coords<5>) -> Affine5 {
    let [z0, z1, z2, z3, z4] = *z.coords();
    let a = alpha(z);
    let s1 = z1 * z1;
    AffinePoint([z0 * a - s1 * (z0 + z4), s1 * (z2 + z3), z4 * a, z2 * a, z3 * a])
}

/// X(w) = (w0 − w2/2, w1, w2/2, w2/2, w2/2).
pub fn embed_x(w: &impl Coords<3>) -> Affine5 {
    let [w0, w1, w2] = *w.coords();
    let h = w2 / 2.0;
    AffinePoint([w0 - h, w1, h, h, h])
}

/// True when z2 = z3 = z4 up to a relative tolerance.
pub fn in_m(z: &impl Coords<5>) -> bool {
    let c = z.coords();
    let s = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    (c[2] - c[3]).norm() <= SLICE_TOL * s && (c[3] - c[4]).norm() <= SLICE_TOL * s
}

/// Inverse of X on M: w = (z0 + z4, z1, 2 z4).
pub fn embed_x_inverse(z: &impl Coords<5>) -> Result<Affine3> {
    if !in_m(z) {
        return Err(Error::NotInM);
    }
    let [z0, z1, _, _, z4] = *z.coords();
    Ok(AffinePoint([z0 + z4, z1, 2.0 * z4]))
}

/// A point of M ≅ P^2 carried with its dihedral preimage.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SlicePoint {
    pub point: Point4,
    pub dihedral_preimage: Point2,
}

impl SlicePoint {
    pub fn from_dihedral(w: &impl Coords<3>) -> Result<Self> {
        let dihedral_preimage = normalize(w)?;
        let point = normalize(&embed_x(&dihedral_preimage))?;
        Ok(SlicePoint { point, dihedral_preimage })
    }

    pub fn try_from_point(z: &impl Coords<5>) -> Result<Self> {
        let w = embed_x_inverse(z)?;
        Ok(SlicePoint { point: normalize(z)?, dihedral_preimage: normalize(&w)? })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct JOrbitFacts {
    /// G(z) is a multiple of (±1, 1, 0, 0, 0), a point of the spectrum.
    pub image_in_spectrum: bool,
    /// G(G(z)) is the zero vector.
    pub second_image_zero: bool,
}

/// For z on J (α(z) = 0): G(z) ∝ (±1, 1, 0, 0, 0) and G²(z) = 0.
pub fn j_orbit_facts(z: &impl Coords<5>) -> Result<JOrbitFacts> {
    let c = z.coords();
    let s = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if alpha(z).norm() > 1e-12 * s * s {
        return Err(Error::NotOnJ);
    }
    let g = apply_g(z);
    let tol = 1e-12 * s * s * s;
    let tail_zero = g.0[2..].iter().all(|x| x.norm() <= tol);
    let head = (g[0] - g[1]).norm() <= tol || (g[0] + g[1]).norm() <= tol;
    let gg = apply_g(&g);
    Ok(JOrbitFacts {
        image_in_spectrum: tail_zero && head,
        second_image_zero: gg.norm_inf() <= 1e-12 * s.powi(9),
    })
}

/// Exact version of [`j_orbit_facts`] for Gaussian-rational points.
pub fn j_orbit_facts_exact(z: &[RationalComplex; 5]) -> Result<JOrbitFacts> {
    let b = &z[0] + &z[4];
    let e = &z[2] + &z[3];
    if !(&(&b * &b) - &(&e * &e)).is_zero() {
        return Err(Error::NotOnJ);
    }
    let g = apply_g_exact(z);
    let tail_zero = is_zero_vector(&g[2..]);
    let head = (&g[0] - &g[1]).is_zero() || (&g[0] + &g[1]).is_zero();
    Ok(JOrbitFacts {
        image_in_spectrum: tail_zero && head,
        second_image_zero: is_zero_vector(&apply_g_exact(&g)),
    })
}

/// Classifies a point of M by pulling it back to P^2. The verdict (including
/// any limit point) is expressed in the dihedral chart.
pub fn classify_gm(z: &impl Coords<5>, max_iter: usize, tol: f64) -> Result<Classification> {
    let w = embed_x_inverse(z)?;
    classify_point(&normalize(&w)?, max_iter, tol)
}

/// Spectrum of the Hecke-type operator a + b + c + d, which acts like
/// I + a + 2t on the dihedral side: [−2, 0] ∪ [2, 4].
pub fn hecke_intervals() -> Vec<(f64, f64)> {
    pencil_spectrum_in_zeta(1.0, 1.0, 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dihedral::apply_f;
    use crate::geometry::fs_distance;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn conjugacy_on_a_sample() {
        let w = AffinePoint([c(0.3, 1.0), c(-2.0, 0.5), c(1.5, -0.25)]);
        let lhs = embed_x(&apply_f(&w));
        let rhs = apply_g(&embed_x(&w));
        for k in 0..5 {
            assert!((lhs[k] - rhs[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_embedding_round_trip() {
        let w = AffinePoint([c(1.0, 0.0), c(2.0, -1.0), c(0.5, 0.5)]);
        let back = embed_x_inverse(&embed_x(&w)).unwrap();
        assert!(fs_distance(&back, &w) < 1e-15);
        let off = AffinePoint([c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(embed_x_inverse(&off), Err(Error::NotInM));
    }

    #[test]
    fn projective_fixed_point_with_multiplier() {
        let z = AffinePoint::from_real([-1.0, -2.0, 1.0, 1.0, 1.0]);
        assert_eq!(apply_g(&z), AffinePoint::from_real([4.0, 8.0, -4.0, -4.0, -4.0]));
    }

    #[test]
    fn j_facts_on_sample() {
        // z0 + z4 = z2 + z3.
        let z = AffinePoint::from_real([1.0, 3.0, 2.0, 0.5, 1.5]);
        let f = j_orbit_facts(&z).unwrap();
        assert!(f.image_in_spectrum && f.second_image_zero);
        let off = AffinePoint::from_real([1.0, 3.0, 2.0, 0.5, 1.0]);
        assert_eq!(j_orbit_facts(&off), Err(Error::NotOnJ));
    }

    #[test]
    fn hecke_preset() {
        assert_eq!(hecke_intervals(), vec![(-2.0, 0.0), (2.0, 4.0)]);
    }
}
