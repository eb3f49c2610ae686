//! Eigenvalues of dense real symmetric matrices: Householder reduction to
//! tridiagonal form followed by the implicit QL iteration.

use crate::error::{Error, Result};

/// Dense real symmetric matrix, row-major, full storage.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![0.0; n * n] }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        symmetric_eigenvalues(self)
    }
}

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn symmetric_eigenvalues(m: &SymMatrix) -> Result<Vec<f64>> {
    let n = m.n;
    if n == 0 {
        return Ok(Vec::new());
    }
    let (mut d, mut e) = tridiagonalize(m);
    tql1(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Householder reduction; returns the diagonal and the subdiagonal (e[0] = 0).
fn tridiagonalize(m: &SymMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.n;
    let mut a = m.data.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        // Reflect column k below the diagonal onto a multiple of e_{k+1}.
        let scale: f64 = (k + 1..n).map(|i| a[i * n + k].abs()).sum();
        d[k] = a[k * n + k];
        if scale == 0.0 {
            e[k + 1] = 0.0;
            continue;
        }
        let mut sigma = 0.0;
        for i in k + 1..n {
            v[i] = a[i * n + k] / scale;
            sigma += v[i] * v[i];
        }
        let alpha = if v[k + 1] > 0.0 { -sigma.sqrt() } else { sigma.sqrt() };
        e[k + 1] = scale * alpha;
        let h = sigma - v[k + 1] * alpha;
        v[k + 1] -= alpha;
        // p = A22 v / h, then w = p − (pᵀv / 2h) v.
        for i in k + 1..n {
            let row = &a[i * n + k + 1..i * n + n];
            let s: f64 = row.iter().zip(&v[k + 1..n]).map(|(x, y)| x * y).sum();
            p[i] = s / h;
        }
        let kf: f64 = (k + 1..n).map(|i| p[i] * v[i]).sum::<f64>() / (2.0 * h);
        for i in k + 1..n {
            p[i] -= kf * v[i];
        }
        for i in k + 1..n {
            let (vi, pi) = (v[i], p[i]);
            let row = &mut a[i * n + k + 1..i * n + n];
            for ((x, vj), pj) in row.iter_mut().zip(&v[k + 1..n]).zip(&p[k + 1..n]) {
                *x -= vi * pj + pi * vj;
            }
        }
    }
    if n >= 2 {
        d[n - 2] = a[(n - 2) * n + n - 2];
        e[n - 1] = a[(n - 1) * n + n - 2];
    }
    d[n - 1] = a[(n - 1) * n + n - 1];
    (d, e)
}

/// Implicit QL on a symmetric tridiagonal matrix, eigenvalues only.
fn tql1(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::RootFindingFailure("QL iteration did not converge".into()));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;
                p = d[m];
                let (mut c, mut c2, mut c3) = (1.0, 1.0, 1.0);
                let el1 = e[l + 1];
                let (mut s, mut s2) = (0.0, 0.0);
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cyclic Jacobi rotations, used only as an independent check.
    fn jacobi_eigenvalues(m: &SymMatrix) -> Vec<f64> {
        let n = m.n;
        let mut a = m.data.clone();
        for _ in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i * n + j] * a[i * n + j])
                .sum();
            if off < 1e-24 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (a[k * n + p], a[k * n + q]);
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut d: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
        d.sort_by(f64::total_cmp);
        d
    }

    fn random_sym(n: usize, seed: u64) -> SymMatrix {
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let v = next();
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        m
    }

    #[test]
    fn agrees_with_jacobi() {
        for (n, seed) in [(1, 1), (2, 2), (5, 3), (17, 4), (40, 5)] {
            let m = random_sym(n, seed);
            let a = symmetric_eigenvalues(&m).unwrap();
            let b = jacobi_eigenvalues(&m);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-10, "n={n}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn path_graph_spectrum() {
        // Adjacency of the path on n vertices: 2 cos(kπ/(n+1)).
        let n = 30;
        let mut m = SymMatrix::zeros(n);
        for i in 0..n - 1 {
            m.data[i * n + i + 1] = 1.0;
            m.data[(i + 1) * n + i] = 1.0;
        }
        let ev = symmetric_eigenvalues(&m).unwrap();
        let mut expect: Vec<f64> = (1..=n)
            .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n + 1) as f64).cos())
            .collect();
        expect.sort_by(f64::total_cmp);
        for (x, y) in ev.iter().zip(&expect) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_and_degenerate_inputs() {
        let mut m = SymMatrix::zeros(4);
        for (i, v) in [3.0, -1.0, 2.0, 2.0].iter().enumerate() {
            m.data[i * 4 + i] = *v;
        }
        assert_eq!(symmetric_eigenvalues(&m).unwrap(), vec![-1.0, 2.0, 2.0, 3.0]);
    }
}
