//! The dihedral map F on P^2, its semi-conjugacy τ∘F = T∘τ with the
//! Tchebyshev polynomial T(x) = 2x² − 1, orbits, the factored form of F^n and
//! the limit of F^n on the Fatou set.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    fs_distance, normalize, Affine3, AffinePoint, Coords, ExtendedComplex, Point2,
};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Orbit values beyond this modulus are treated as ∞ (their squares would overflow).
const SATURATION: f64 = 1e150;

/// F(z) = (z0(z0² − z1² − z2²), z1² z2, z2(z0² − z2²)).
pub fn apply_f(z: &impl Coords<3>) -> Affine3 {
    let [z0, z1, z2] = *z.coords();
    let (s0, s1, s2) = (z0 * z0, z1 * z1, z2 * z2);
    AffinePoint([z0 * (s0 - s1 - s2), s1 * z2, z2 * (s0 - s2)])
}

/// The companion map F2 = σ∘F∘σ with σ swapping z1 and z2.
pub fn apply_f2(z: &impl Coords<3>) -> Affine3 {
    let [z0, z1, z2] = *z.coords();
    let (s0, s1, s2) = (z0 * z0, z1 * z1, z2 * z2);
    AffinePoint([z0 * (s0 - s1 - s2), z1 * (s0 - s1), z1 * s2])
}

/// q(z) = z0² − z1² − z2², the defining form of the conic S0.
pub fn conic_q(z: &impl Coords<3>) -> Complex64 {
    let [z0, z1, z2] = *z.coords();
    z0 * z0 - z1 * z1 - z2 * z2
}

/// τ(z) = (z0² − z1² − z2²)/(2 z1 z2), with τ = 0 on S0 and ∞ where z1 z2 = 0 otherwise.
pub fn tau(z: &impl Coords<3>) -> ExtendedComplex {
    let [_, z1, z2] = *z.coords();
    let q = conic_q(z);
    if q == ZERO {
        return ExtendedComplex::Finite(ZERO);
    }
    let d = 2.0 * z1 * z2;
    if d == ZERO {
        ExtendedComplex::Infinity
    } else {
        ExtendedComplex::Finite(q / d)
    }
}

/// T(x) = 2x² − 1 on the Riemann sphere.
pub fn tchebyshev_t(x: ExtendedComplex) -> ExtendedComplex {
    match x {
        ExtendedComplex::Infinity => ExtendedComplex::Infinity,
        ExtendedComplex::Finite(c) => {
            if c.norm() > SATURATION {
                return ExtendedComplex::Infinity;
            }
            let v = 2.0 * c * c - 1.0;
            if v.norm() > SATURATION || !v.is_finite() {
                ExtendedComplex::Infinity
            } else {
                ExtendedComplex::Finite(v)
            }
        }
    }
}

/// T_k(x) by the three-term recurrence T_{k+1} = 2x T_k − T_{k−1}.
pub fn tchebyshev_tk(k: u32, x: Complex64) -> Complex64 {
    let (mut prev, mut cur) = (Complex64::new(1.0, 0.0), x);
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// The terms t_j = 1/(2^j ∏_{k<j} T^k(τ)) for j = 1, 2, ...
///
/// Computed as t_j = t_{j−1}/(2 T^{j−1}(τ)); a saturated factor makes the
/// remaining terms exactly zero.
pub fn tchebyshev_terms(tau: ExtendedComplex, count: usize) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(count);
    let mut x = tau;
    let mut t = Complex64::new(1.0, 0.0);
    for k in 0..count {
        match x {
            ExtendedComplex::Infinity => t = ZERO,
            ExtendedComplex::Finite(c) => {
                if c == ZERO {
                    return Err(Error::ZeroTchebyshevFactor { k });
                }
                t /= 2.0 * c;
            }
        }
        out.push(t);
        x = tchebyshev_t(x);
    }
    Ok(out)
}

/// f_n(z) = Σ_{j=1}^{n−1} t_j.
pub fn f_n(z: &impl Coords<3>, n: usize) -> Result<Complex64> {
    let terms = tchebyshev_terms(tau(z), n.saturating_sub(1))?;
    Ok(terms.iter().sum())
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitTrace {
    /// Normalized iterates z, F(z), ..., up to termination.
    pub points: Vec<Point2>,
    /// The representatives actually iterated (raw vectors when not renormalizing).
    pub affine: Vec<Affine3>,
    pub tau_values: Vec<ExtendedComplex>,
    /// Step k whose image F(z_k) vanished, if any.
    pub terminated_at_indeterminacy: Option<usize>,
}

impl OrbitTrace {
    /// CSV with columns step, z0_re, z0_im, z1_re, z1_im, z2_re, z2_im, tau_re, tau_im, tau_is_inf.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record([
            "step", "z0_re", "z0_im", "z1_re", "z1_im", "z2_re", "z2_im", "tau_re", "tau_im",
            "tau_is_inf",
        ])?;
        for (k, (p, t)) in self.points.iter().zip(&self.tau_values).enumerate() {
            let mut rec = vec![k.to_string()];
            for c in p.coords() {
                rec.push(c.re.to_string());
                rec.push(c.im.to_string());
            }
            match t {
                ExtendedComplex::Finite(c) => {
                    rec.extend([c.re.to_string(), c.im.to_string(), "0".into()])
                }
                ExtendedComplex::Infinity => rec.extend([String::new(), String::new(), "1".into()]),
            }
            wr.write_record(&rec)?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// True when F(z) is negligible relative to ‖z‖³, i.e. z is (numerically) an
/// indeterminacy point.
pub(crate) fn image_vanishes(z: &Affine3, img: &Affine3) -> bool {
    let s = z.norm_inf();
    img.norm_inf() <= 1e-14 * s * s * s
}

/// Iterates F up to n times, stopping at an indeterminacy point.
pub fn iterate_f(z: &impl Coords<3>, n: usize, renormalize: bool) -> Result<OrbitTrace> {
    let start = normalize(z)?;
    let mut cur = if renormalize { start.lift() } else { AffinePoint(*z.coords()) };
    let mut trace = OrbitTrace {
        points: vec![start],
        affine: vec![cur],
        tau_values: vec![tau(&start)],
        terminated_at_indeterminacy: None,
    };
    for k in 0..n {
        let img = apply_f(&cur);
        if image_vanishes(&cur, &img) {
            trace.terminated_at_indeterminacy = Some(k);
            break;
        }
        let p = normalize(&img)?;
        cur = if renormalize { p.lift() } else { img };
        trace.points.push(p);
        trace.affine.push(cur);
        trace.tau_values.push(tau(&p));
    }
    Ok(trace)
}

/// F^n(z) through the factored form [z0 : z1 t_n : z2 + z1 Σ_{j=1}^{n} t_j].
pub fn closed_form_fn(z: &impl Coords<3>, n: usize) -> Result<Point2> {
    if n < 2 {
        return Err(Error::InvalidArgument("closed form needs n >= 2".into()));
    }
    let trace = iterate_f(z, n, true)?;
    if let Some(step) = trace.terminated_at_indeterminacy {
        return Err(Error::IndeterminateOrbit { step });
    }
    let [z0, z1, z2] = *z.coords();
    let terms = tchebyshev_terms(tau(z), n)?;
    let partial: Complex64 = terms.iter().sum();
    normalize(&[z0, z1 * terms[n - 1], z2 + z1 * partial])
}

/// lim f_n: the root of w² − 2τw + 1 with |w| ≤ 1, taking e^{−iθ}
/// (θ = arccos τ) on the real segment [−1, 1] and 0 at τ = ∞.
pub fn limit_f(z: &impl Coords<3>) -> Complex64 {
    limit_f_of_tau(tau(z))
}

pub fn limit_f_of_tau(t: ExtendedComplex) -> Complex64 {
    let t = match t {
        ExtendedComplex::Infinity => return ZERO,
        ExtendedComplex::Finite(t) => t,
    };
    if t.im.abs() <= 1e-15 * (1.0 + t.norm()) && t.re.abs() <= 1.0 {
        return Complex64::from_polar(1.0, -t.re.acos());
    }
    let s = (t * t - 1.0).sqrt();
    let (a, b) = (t + s, t - s);
    // The larger root is cancellation-free; the product of the roots is 1.
    let big = if a.norm() >= b.norm() { a } else { b };
    big.inv()
}

/// F_*(z) = [z0 : 0 : z2 + z1 f(z)], the limit of F^n on the Fatou set.
pub fn limit_f_star(z: &impl Coords<3>) -> Result<Point2> {
    let [z0, z1, z2] = *z.coords();
    normalize(&[z0, ZERO, z2 + z1 * limit_f(z)])
}

/// Distance between consecutive normalized iterates, used to detect convergence.
pub fn step_distance(a: &Point2, b: &Point2) -> f64 {
    fs_distance(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn p(r: [f64; 3]) -> Point2 {
        Point2::from_real(r).unwrap()
    }

    #[test]
    fn f_values() {
        let z = AffinePoint::from_real([2.0, 1.0, 1.0]);
        assert_eq!(apply_f(&z), AffinePoint::from_real([4.0, 1.0, 3.0]));
        assert_eq!(tau(&z), ExtendedComplex::real(1.0));
        assert_eq!(tau(&apply_f(&z)), ExtendedComplex::real(1.0));
        let z = AffinePoint::from_real([1.0, 1.0, 3.0]);
        assert_eq!(tau(&z), ExtendedComplex::real(-1.5));
        assert_eq!(tau(&apply_f(&z)), ExtendedComplex::real(3.5));
    }

    #[test]
    fn tau_conventions() {
        assert_eq!(tau(&p([1.0, 1.0, 0.0])), ExtendedComplex::real(0.0));
        assert_eq!(tau(&p([2.0, 1.0, 0.0])), ExtendedComplex::Infinity);
    }

    #[test]
    fn tchebyshev_recurrence_matches_cosine() {
        let th: f64 = 0.37;
        for k in 0..12 {
            let v = tchebyshev_tk(k, c(th.cos(), 0.0));
            assert!((v.re - (k as f64 * th).cos()).abs() < 1e-13);
        }
        // Composition T^k agrees with T_{2^k}.
        let x = c(0.3, 0.2);
        let mut e = ExtendedComplex::Finite(x);
        for k in 0..4 {
            e = tchebyshev_t(e);
            assert!((e.finite().unwrap() - tchebyshev_tk(1 << (k + 1), x)).norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_agrees_with_iteration() {
        for z in [[2.0, 1.0, 1.0], [1.0, 1.0, 3.0], [0.3, -0.7, 1.1]] {
            let z = p(z);
            let tr = iterate_f(&z, 8, true).unwrap();
            for n in 2..=8 {
                let cf = closed_form_fn(&z, n).unwrap();
                assert!(fs_distance(&cf, &tr.points[n]) < 1e-9, "n={n}");
            }
        }
    }

    #[test]
    fn limit_f_values() {
        assert!((limit_f(&p([1.0, 1.0, 3.0])) - c((5f64.sqrt() - 3.0) / 2.0, 0.0)).norm() < 1e-15);
        assert_eq!(limit_f(&p([2.0, 1.0, 0.0])), ZERO);
        assert!((limit_f(&p([1.0, 1.0, 0.0])) - c(0.0, -1.0)).norm() < 1e-15);
        let z = p([1.0, 1.0, 3.0]);
        let tr = iterate_f(&z, 60, true).unwrap();
        assert!(fs_distance(&tr.points[60], &limit_f_star(&z).unwrap()) < 1e-6);
    }

    #[test]
    fn indeterminacy_stops_orbit() {
        let tr = iterate_f(&p([1.0, 1.0, 0.0]), 5, true).unwrap();
        assert_eq!(tr.terminated_at_indeterminacy, Some(0));
        assert_eq!(tr.points.len(), 1);
        // [1:0:1] is also an indeterminacy point: F(1,0,1) = 0.
        let tr = iterate_f(&p([1.0, 0.0, 1.0]), 5, true).unwrap();
        assert_eq!(tr.terminated_at_indeterminacy, Some(0));
    }

    #[test]
    fn raw_orbit_shrinks_near_origin() {
        let z = AffinePoint::from_real([0.3, 0.2, 0.4]);
        let tr = iterate_f(&z, 3, false).unwrap();
        let norms: Vec<f64> = tr.affine.iter().map(|a| a.norm_inf()).collect();
        assert!(norms.windows(2).all(|w| w[1] < w[0]), "{norms:?}");
    }

    #[test]
    fn f2_is_conjugate_by_swap() {
        let z = [c(0.3, 0.1), c(-1.2, 0.4), c(0.7, -0.9)];
        let sw = [z[0], z[2], z[1]];
        let a = apply_f2(&z);
        let b = apply_f(&sw);
        assert_eq!(a.0, [b[0], b[2], b[1]]);
    }

    #[test]
    fn orbit_csv_has_header_and_rows() {
        let tr = iterate_f(&p([1.0, 1.0, 3.0]), 3, true).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("step,z0_re"));
        assert_eq!(s.lines().count(), 5);
    }
}
