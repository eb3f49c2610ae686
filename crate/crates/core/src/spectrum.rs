//! Joint spectrum of the dihedral pencil z0 I + z1 a + z2 t in P^2, its real
//! slice, the affine pencil spectrum in the ζ-line and 2×2 irreducible blocks.

use num_complex::Complex64;
use serde::Serialize;

use crate::dihedral::{conic_q, tau};
use crate::geometry::{Coords, ExtendedComplex};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumVerdict {
    pub in_spectrum: bool,
    /// The cosine parameter x ∈ [−1, 1] with χ_x(z) = 0, when z1 z2 ≠ 0.
    pub x_param: Option<f64>,
    /// Distance from τ(z) to [−1, 1]; zero inside the spectrum.
    pub margin: f64,
}

/// Membership in σ(A_λ) = {τ ∈ [−1, 1]} ∪ {z1 z2 = 0, z0² = z1² + z2²}.
pub fn spectrum_membership(z: &impl Coords<3>, tol: f64) -> SpectrumVerdict {
    let [_, z1, z2] = *z.coords();
    if z1 * z2 == ZERO {
        let q = conic_q(z);
        let n2: f64 = z.coords().iter().map(|c| c.norm_sqr()).sum();
        let inside = q.norm() <= tol * n2;
        let margin = if inside {
            0.0
        } else {
            match tau(z) {
                ExtendedComplex::Infinity => f64::INFINITY,
                ExtendedComplex::Finite(t) => segment_distance(t),
            }
        };
        return SpectrumVerdict { in_spectrum: inside, x_param: None, margin };
    }
    let t = tau(z).finite().expect("z1 z2 != 0 gives a finite tau");
    let inside = t.im.abs() <= tol && t.re >= -1.0 - tol && t.re <= 1.0 + tol;
    SpectrumVerdict {
        in_spectrum: inside,
        x_param: inside.then(|| t.re.clamp(-1.0, 1.0)),
        margin: if inside { 0.0 } else { segment_distance(t) },
    }
}

fn segment_distance(t: Complex64) -> f64 {
    (t - Complex64::new(t.re.clamp(-1.0, 1.0), 0.0)).norm()
}

/// The real slice z = [1 : x : y]: (|x| − |y|)² ≤ 1 ≤ (|x| + |y|)².
pub fn real_slice_spectrum(x: f64, y: f64) -> bool {
    let (a, b) = (x.abs(), y.abs());
    (a - b) * (a - b) <= 1.0 && 1.0 <= (a + b) * (a + b)
}

/// det(z0 I + z1 ρθ(a) + z2 ρθ(t)) for the 2-dimensional irreducible ρθ.
pub fn char_poly_rho_theta(z: &impl Coords<3>, theta: f64) -> Complex64 {
    let [z0, z1, z2] = *z.coords();
    let closed = z0 * z0 - z1 * z1 - z2 * z2 - 2.0 * z1 * z2 * theta.cos();
    // ρθ(a) = [[0, e^{iθ}], [e^{−iθ}, 0]], ρθ(t) = [[0, 1], [1, 0]].
    let e = Complex64::from_polar(1.0, theta);
    let (m01, m10) = (z1 * e + z2, z1 * e.conj() + z2);
    let det = z0 * z0 - m01 * m10;
    let scale = z.coords().iter().map(|c| c.norm()).fold(1.0, f64::max);
    debug_assert!((det - closed).norm() <= 1e-12 * scale * scale);
    closed
}

/// The ζ for which (c − ζ) I + w1 a + w2 t is not invertible, i.e.
/// (c − ζ)² ∈ [(|w1| − |w2|)², (|w1| + |w2|)²], as merged closed intervals.
pub fn pencil_spectrum_in_zeta(c: f64, w1: f64, w2: f64) -> Vec<(f64, f64)> {
    let rmin = (w1.abs() - w2.abs()).abs();
    let rmax = w1.abs() + w2.abs();
    if rmin == 0.0 {
        vec![(c - rmax, c + rmax)]
    } else {
        vec![(c - rmax, c - rmin), (c + rmin, c + rmax)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;

    #[test]
    fn known_points() {
        let v = spectrum_membership(&Point2::from_real([2.0, 1.0, 1.0]).unwrap(), 1e-10);
        assert!(v.in_spectrum);
        assert_eq!(v.x_param, Some(1.0));
        let v = spectrum_membership(&Point2::from_real([1.0, 1.0, 3.0]).unwrap(), 1e-10);
        assert!(!v.in_spectrum);
        assert!((v.margin - 0.5).abs() < 1e-15);
        let v = spectrum_membership(&Point2::from_real([1.0, 0.0, 1.0]).unwrap(), 1e-10);
        assert!(v.in_spectrum && v.x_param.is_none());
    }

    #[test]
    fn real_slice_examples() {
        assert!(real_slice_spectrum(1.0, 1.0));
        assert!(!real_slice_spectrum(0.2, 0.3));
        assert!(!real_slice_spectrum(3.0, 0.5));
    }

    #[test]
    fn hecke_interval_preset() {
        assert_eq!(pencil_spectrum_in_zeta(1.0, 1.0, 2.0), vec![(-2.0, 0.0), (2.0, 4.0)]);
        assert_eq!(pencil_spectrum_in_zeta(0.0, 1.0, 1.0), vec![(-2.0, 2.0)]);
    }

    #[test]
    fn rho_theta_vanishes_on_spectrum() {
        let th = 0.9_f64;
        // With z1 = z2 = 1: z0² = 2 + 2cos θ.
        let z0 = (2.0 + 2.0 * th.cos()).sqrt();
        let z = Point2::from_real([z0, 1.0, 1.0]).unwrap();
        assert!(char_poly_rho_theta(&z, th).norm() < 1e-14);
    }
}
