//! Julia/Fatou classification of points of P^2 under F.

use serde::Serialize;

use crate::dihedral::apply_f;
use crate::error::Result;
use crate::geometry::{fs_distance, normalize, Coords, Point2};
use crate::indeterminacy::{e_exclusion_certificate, in_in, Arithmetic};
use crate::spectrum::spectrum_membership;

/// Consecutive iterates closer than this count as converged.
pub const CONVERGENCE_TOL: f64 = 1e-10;
/// Number of consecutive converged steps required for a numerical Fatou verdict.
pub const CONVERGENCE_STREAK: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    /// z lies in the joint spectrum; `x_param` is cos θ when z1 z2 ≠ 0.
    JuliaSpectrum { x_param: Option<f64> },
    /// The orbit reaches an indeterminacy point: z ∈ I_{step+1}.
    JuliaIndeterminacy { step: usize },
    /// Proven Fatou by the exclusion certificate.
    FatouCertified,
    /// Iterates converged numerically to `limit`.
    FatouNumerical { limit: Point2 },
    Unknown,
}

impl Classification {
    pub fn is_julia(&self) -> bool {
        matches!(
            self,
            Classification::JuliaSpectrum { .. } | Classification::JuliaIndeterminacy { .. }
        )
    }

    pub fn label(&self) -> &'static str {
        match self {
            Classification::JuliaSpectrum { .. } => "julia_spectrum",
            Classification::JuliaIndeterminacy { .. } => "julia_indeterminacy",
            Classification::FatouCertified => "fatou_certified",
            Classification::FatouNumerical { .. } => "fatou_numerical",
            Classification::Unknown => "unknown",
        }
    }
}

/// Classifies z: spectrum first, then indeterminacy within `max_iter` steps,
/// then the exclusion certificate, then numerical convergence.
pub fn classify_point(z: &impl Coords<3>, max_iter: usize, tol: f64) -> Result<Classification> {
    let p = normalize(z)?;
    let spec = spectrum_membership(&p, tol);
    if spec.in_spectrum {
        return Ok(Classification::JuliaSpectrum { x_param: spec.x_param });
    }
    let ind = in_in(&p, max_iter, Arithmetic::Float)?;
    if let Some(step) = ind.first_hit_step {
        return Ok(Classification::JuliaIndeterminacy { step });
    }
    if e_exclusion_certificate(&p) {
        return Ok(Classification::FatouCertified);
    }
    let mut cur = p;
    let mut streak = 0;
    for _ in 0..max_iter {
        let next = normalize(&apply_f(&cur))?;
        if fs_distance(&cur, &next) < CONVERGENCE_TOL {
            streak += 1;
            if streak >= CONVERGENCE_STREAK {
                return Ok(Classification::FatouNumerical { limit: next });
            }
        } else {
            streak = 0;
        }
        cur = next;
    }
    Ok(Classification::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(r: [f64; 3]) -> Point2 {
        Point2::from_real(r).unwrap()
    }

    #[test]
    fn reference_points() {
        assert_eq!(
            classify_point(&p([2.0, 1.0, 1.0]), 100, 1e-10).unwrap(),
            Classification::JuliaSpectrum { x_param: Some(1.0) }
        );
        assert_eq!(
            classify_point(&p([1.0, 1.0, 3.0]), 100, 1e-10).unwrap(),
            Classification::FatouCertified
        );
        assert_eq!(
            classify_point(&p([-2.0, 5.0, 2.0]), 100, 1e-10).unwrap(),
            Classification::JuliaIndeterminacy { step: 1 }
        );
    }

    #[test]
    fn numerical_fatou_limit() {
        // τ = (4 − 0.25 − 0.09)/(2·0.5·0.3) is far from [−1, 1]; |z2| is small.
        let c = classify_point(&p([2.0, 0.5, 0.3]), 200, 1e-10).unwrap();
        match c {
            Classification::FatouNumerical { limit } => {
                let star = crate::dihedral::limit_f_star(&p([2.0, 0.5, 0.3])).unwrap();
                assert!(fs_distance(&limit, &star) < 1e-8);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
