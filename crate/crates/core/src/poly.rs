//! Dense complex polynomials, Durand–Kerner root finding and small complex
//! matrix utilities (characteristic polynomial, eigenvalues, linear solve).

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Polynomial with coefficients in increasing degree order.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<Complex64>);

impl Poly {
    pub fn constant(c: Complex64) -> Self {
        Poly(vec![c])
    }

    /// The monomial x.
    pub fn x() -> Self {
        Poly(vec![ZERO, ONE])
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|c| *c != ZERO).unwrap_or(0)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.0.iter().rev().fold(ZERO, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::constant(ZERO);
        }
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly(
            (0..n)
                .map(|k| {
                    self.0.get(k).copied().unwrap_or(ZERO) + o.0.get(k).copied().unwrap_or(ZERO)
                })
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(-ONE))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = vec![ZERO; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    /// Drops trailing zero coefficients.
    pub fn trimmed(&self) -> Poly {
        let d = self.degree();
        Poly(self.0[..=d].to_vec())
    }
}

/// All complex roots of `p` by Durand–Kerner, polished with Newton steps.
/// Exact-zero low coefficients are split off as roots at 0.
pub fn roots(p: &Poly) -> Result<Vec<Complex64>> {
    let p = p.trimmed();
    let deg = p.degree();
    if deg == 0 {
        return Err(Error::RootFindingFailure("constant polynomial".into()));
    }
    let zeros = p.0.iter().take_while(|c| **c == ZERO).count();
    let core = Poly(p.0[zeros..].to_vec());
    let mut out = vec![ZERO; zeros];
    if core.degree() > 0 {
        out.extend(durand_kerner(&core)?);
    }
    Ok(out)
}

fn durand_kerner(p: &Poly) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let lead = p.0[n];
    let monic: Vec<Complex64> = p.0.iter().map(|c| c / lead).collect();
    let monic = Poly(monic);
    if n == 1 {
        return Ok(vec![-monic.0[0]]);
    }
    // Cauchy-type radius bound for the initial circle.
    let radius = 1.0 + monic.0[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let scale = monic.0.iter().map(|c| c.norm()).fold(1.0, f64::max);
    for attempt in 0..8 {
        let seed = Complex64::from_polar(1.0, 0.4 + 0.37 * attempt as f64);
        let r = radius.clamp(1e-3, 1e6) * (0.9 + 0.05 * attempt as f64);
        let mut z: Vec<Complex64> = (0..n).map(|k| r * seed.powu(k as u32 + 1)).collect();
        let mut converged = false;
        for _ in 0..500 {
            let mut max_step: f64 = 0.0;
            for i in 0..n {
                let mut den = ONE;
                for j in 0..n {
                    if i != j {
                        den *= z[i] - z[j];
                    }
                }
                if den == ZERO {
                    den = Complex64::new(1e-300, 0.0);
                }
                let step = monic.eval(z[i]) / den;
                if step.is_finite() {
                    z[i] -= step;
                    max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
                }
            }
            if max_step < 1e-15 {
                converged = true;
                break;
            }
        }
        if !z.iter().all(|c| c.is_finite()) {
            continue;
        }
        let dp = monic.derivative();
        for zi in z.iter_mut() {
            for _ in 0..3 {
                let d = dp.eval(*zi);
                if d == ZERO {
                    break;
                }
                let step = monic.eval(*zi) / d;
                if !step.is_finite() || step.norm() > 1e-6 * (1.0 + zi.norm()) {
                    break;
                }
                *zi -= step;
            }
        }
        let resid = z
            .iter()
            .map(|zi| monic.eval(*zi).norm() / (scale * (1.0 + zi.norm()).powi(n as i32)))
            .fold(0.0, f64::max);
        if converged || resid < 1e-10 {
            return Ok(z);
        }
    }
    Err(Error::RootFindingFailure(format!(
        "Durand-Kerner did not converge for degree {n}"
    )))
}

/// Square complex matrix stored row-major.
pub type CMatrix = Vec<Vec<Complex64>>;

pub fn mat_from_array<const N: usize>(m: &[[Complex64; N]; N]) -> CMatrix {
    m.iter().map(|r| r.to_vec()).collect()
}

/// Characteristic polynomial det(xI − A) by Faddeev–LeVerrier.
pub fn char_poly(a: &CMatrix) -> Poly {
    let n = a.len();
    let mut coeffs = vec![ZERO; n + 1];
    coeffs[n] = ONE;
    let mut m = vec![vec![ZERO; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![ZERO; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = ZERO;
                for l in 0..n {
                    s += a[i][l] * m[l][j];
                }
                next[i][j] = s;
            }
            next[i][i] += coeffs[n - k + 1];
        }
        m = next;
        let mut tr = ZERO;
        for i in 0..n {
            for l in 0..n {
                tr += a[i][l] * m[l][i];
            }
        }
        coeffs[n - k] = -tr / k as f64;
    }
    Poly(coeffs)
}

pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    roots(&char_poly(a))
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(a: &CMatrix) -> Complex64 {
    let n = a.len();
    let mut m = a.clone();
    let mut det = ONE;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[i][k].norm().total_cmp(&m[j][k].norm()))
            .unwrap();
        if m[p][k] == ZERO {
            return ZERO;
        }
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                let v = m[k][j];
                m[i][j] -= f * v;
            }
        }
    }
    det
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
pub fn solve(a: &CMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = a.len();
    let mut m: Vec<Vec<Complex64>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(*bi);
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[i][k].norm().total_cmp(&m[j][k].norm()))
            .unwrap();
        if m[p][k].norm() < 1e-300 {
            return Err(Error::RootFindingFailure("singular linear system".into()));
        }
        m.swap(p, k);
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..=n {
                let v = m[k][j];
                m[i][j] -= f * v;
            }
        }
    }
    let mut x = vec![ZERO; n];
    for k in (0..n).rev() {
        let mut s = m[k][n];
        for j in k + 1..n {
            s -= m[k][j] * x[j];
        }
        x[k] = s / m[k][k];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close_sets(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        let mut used = vec![false; b.len()];
        a.len() == b.len()
            && a.iter().all(|x| {
                if let Some(j) = (0..b.len()).find(|&j| !used[j] && (b[j] - x).norm() < tol) {
                    used[j] = true;
                    true
                } else {
                    false
                }
            })
    }

    #[test]
    fn roots_of_product_polynomial() {
        let rs = [c(1.0, 0.0), c(-2.0, 0.5), c(0.0, 3.0), c(0.25, -0.25)];
        let mut p = Poly::constant(ONE);
        for r in rs {
            p = p.mul(&Poly(vec![-r, ONE]));
        }
        let found = roots(&p).unwrap();
        assert!(close_sets(&found, &rs, 1e-10), "{found:?}");
    }

    #[test]
    fn zero_roots_are_split_exactly() {
        let p = Poly(vec![ZERO, ZERO, c(-4.0, 0.0), ONE]);
        let found = roots(&p).unwrap();
        assert_eq!(&found[..2], &[ZERO, ZERO]);
        assert!((found[2] - c(4.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn char_poly_matches_determinant() {
        let a = vec![
            vec![c(1.0, 0.0), c(2.0, 1.0), c(0.0, 0.0)],
            vec![c(0.5, 0.0), c(-1.0, 0.0), c(3.0, 0.0)],
            vec![c(0.0, 1.0), c(1.0, 0.0), c(2.0, -1.0)],
        ];
        let p = char_poly(&a);
        let x = c(0.3, -0.7);
        let shifted: CMatrix = (0..3)
            .map(|i| (0..3).map(|j| if i == j { x - a[i][j] } else { -a[i][j] }).collect())
            .collect();
        assert!((p.eval(x) - determinant(&shifted)).norm() < 1e-12);
    }

    #[test]
    fn solve_recovers_solution() {
        let a = vec![
            vec![c(2.0, 0.0), c(1.0, 1.0)],
            vec![c(0.0, -1.0), c(3.0, 0.0)],
        ];
        let x = [c(1.0, -2.0), c(0.5, 0.5)];
        let b: Vec<Complex64> = a.iter().map(|r| r[0] * x[0] + r[1] * x[1]).collect();
        let got = solve(&a, &b).unwrap();
        assert!((got[0] - x[0]).norm() < 1e-14 && (got[1] - x[1]).norm() < 1e-14);
    }
}
