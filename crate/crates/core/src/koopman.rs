//! Finite-level permutation representations of the dihedral and Grigorchuk
//! groups acting on the leaves of the binary tree, dense pencils built from
//! them, and checks of the Schur-complement renormalization.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symeig::{symmetric_eigenvalues, SymMatrix};

/// Largest level for which permutations are built.
pub const MAX_LEVEL: u32 = 14;
/// Largest level for which dense matrices are materialized.
pub const MAX_DENSE_LEVEL: u32 = 12;

/// A permutation of {0, …, N−1}; the operator is (M v)[i] = v[perm[i]].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Permutation(pub Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// (self ∘ other)[i] = self[other[i]].
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&j| self.0[j as usize]).collect())
    }

    pub fn is_involution(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| self.0[j as usize] as usize == i)
    }

    /// diag(lo, hi): `lo` on the first half, `hi` on the second.
    pub fn direct_sum(lo: &Permutation, hi: &Permutation) -> Permutation {
        let off = lo.len() as u32;
        let mut v = lo.0.clone();
        v.extend(hi.0.iter().map(|&j| j + off));
        Permutation(v)
    }

    /// i ↦ i XOR 2^{level−1}: swaps the two halves.
    pub fn half_swap(level: u32) -> Permutation {
        let n = 1usize << level;
        let bit = if level == 0 { 0 } else { 1u32 << (level - 1) };
        Permutation((0..n as u32).map(|i| i ^ bit).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    Dihedral,
    Grigorchuk,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelRep {
    pub group: GroupKind,
    pub level: u32,
    /// Generators in order: (a, t) for the dihedral group, (a, b, c, d) for Grigorchuk.
    pub generators: Vec<(char, Permutation)>,
}

impl LevelRep {
    pub fn dimension(&self) -> usize {
        1usize << self.level
    }

    pub fn generator(&self, name: char) -> Option<&Permutation> {
        self.generators.iter().find(|(n, _)| *n == name).map(|(_, p)| p)
    }

    /// Permutations as JSON index lists keyed by generator name.
    pub fn to_json(&self) -> Result<String> {
        let m: BTreeMap<String, &Permutation> =
            self.generators.iter().map(|(n, p)| (n.to_string(), p)).collect();
        Ok(serde_json::to_string(&m)?)
    }
}

fn check_level(level: u32, max: u32) -> Result<()> {
    if level > max {
        Err(Error::LevelTooLarge { level, max })
    } else {
        Ok(())
    }
}

/// a_n swaps the halves; t_n = diag(a_{n−1}, t_{n−1}).
pub fn build_dihedral_level(level: u32) -> Result<LevelRep> {
    check_level(level, MAX_LEVEL)?;
    let mut t = Permutation::identity(1);
    for k in 1..=level {
        t = Permutation::direct_sum(&Permutation::half_swap(k - 1), &t);
    }
    Ok(LevelRep {
        group: GroupKind::Dihedral,
        level,
        generators: vec![('a', Permutation::half_swap(level)), ('t', t)],
    })
}

/// b_n = diag(a, c), c_n = diag(a, d), d_n = diag(I, b) on the level n − 1 halves.
pub fn build_grigorchuk_level(level: u32) -> Result<LevelRep> {
    check_level(level, MAX_LEVEL)?;
    let id = Permutation::identity(1);
    let (mut b, mut c, mut d) = (id.clone(), id.clone(), id);
    for k in 1..=level {
        let a = Permutation::half_swap(k - 1);
        let i = Permutation::identity(1 << (k - 1));
        let nb = Permutation::direct_sum(&a, &c);
        let nc = Permutation::direct_sum(&a, &d);
        let nd = Permutation::direct_sum(&i, &b);
        (b, c, d) = (nb, nc, nd);
    }
    Ok(LevelRep {
        group: GroupKind::Grigorchuk,
        level,
        generators: vec![('a', Permutation::half_swap(level)), ('b', b), ('c', c), ('d', d)],
    })
}

fn real_weights(w: &[Complex64]) -> Result<Vec<f64>> {
    if w.iter().any(|c| c.im != 0.0) {
        return Err(Error::NonRealWeights);
    }
    Ok(w.iter().map(|c| c.re).collect())
}

/// Dense symmetric matrix z0 I + Σ w_g M_g.
pub fn pencil_matrix(rep: &LevelRep, z0: f64, weights: &[f64]) -> Result<SymMatrix> {
    check_level(rep.level, MAX_DENSE_LEVEL)?;
    if weights.len() != rep.generators.len() {
        return Err(Error::DimensionMismatch {
            expected: rep.generators.len(),
            found: weights.len(),
        });
    }
    let n = rep.dimension();
    let mut m = SymMatrix::zeros(n);
    for i in 0..n {
        m.add_at(i, i, z0);
    }
    for ((_, p), &w) in rep.generators.iter().zip(weights) {
        for (i, &j) in p.0.iter().enumerate() {
            m.add_at(i, j as usize, w);
        }
    }
    Ok(m)
}

/// Eigenvalues (ascending) of Σ w_g M_g for real weights.
pub fn pencil_eigenvalues(rep: &LevelRep, weights: &[Complex64]) -> Result<Vec<f64>> {
    let w = real_weights(weights)?;
    symmetric_eigenvalues(&pencil_matrix(rep, 0.0, &w)?)
}

/// Smallest singular value of z0 I + Σ w_g M_g.
///
/// Real coefficients use the symmetric eigenvalues directly; complex ones go
/// through the real 2N embedding of the Hermitian P*P.
pub fn min_singular_value(rep: &LevelRep, z0: Complex64, weights: &[Complex64]) -> Result<f64> {
    if z0.im == 0.0 && weights.iter().all(|c| c.im == 0.0) {
        let w: Vec<f64> = weights.iter().map(|c| c.re).collect();
        let ev = symmetric_eigenvalues(&pencil_matrix(rep, z0.re, &w)?)?;
        return Ok(ev.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min));
    }
    let re: Vec<f64> = weights.iter().map(|c| c.re).collect();
    let im: Vec<f64> = weights.iter().map(|c| c.im).collect();
    let a = pencil_matrix(rep, z0.re, &re)?;
    let b = pencil_matrix(rep, z0.im, &im)?;
    let n = a.n;
    // P = A + iB with A, B symmetric: P*P = (A² + B²) + i(AB − BA).
    let ab = matmul(&a, &b);
    let ba = matmul(&b, &a);
    let aa = matmul(&a, &a);
    let bb = matmul(&b, &b);
    let mut h = SymMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            let r = aa[i * n + j] + bb[i * n + j];
            let s = ab[i * n + j] - ba[i * n + j];
            h.data[i * 2 * n + j] = r;
            h.data[(i + n) * 2 * n + j + n] = r;
            h.data[i * 2 * n + j + n] = -s;
            h.data[(i + n) * 2 * n + j] = s;
        }
    }
    let ev = symmetric_eigenvalues(&h)?;
    Ok(ev[0].max(0.0).sqrt())
}

fn matmul(a: &SymMatrix, b: &SymMatrix) -> Vec<f64> {
    let n = a.n;
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a.data[i * n + k];
            if aik == 0.0 {
                continue;
            }
            let row = &b.data[k * n..k * n + n];
            for (o, x) in out[i * n..i * n + n].iter_mut().zip(row) {
                *o += aik * x;
            }
        }
    }
    out
}

/// Singular-at-resolution threshold ‖coeffs‖₁ (π/2^level)².
pub fn singular_threshold(coeffs: &[Complex64], level: u32) -> f64 {
    let l1: f64 = coeffs.iter().map(|c| c.norm()).sum();
    l1 * (std::f64::consts::PI / (1u64 << level) as f64).powi(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SchurCheck {
    pub level: u32,
    pub big_min_sv: f64,
    pub big_threshold: f64,
    pub small_min_sv: f64,
    pub small_threshold: f64,
    /// |singular(level n+1, z) − singular(level n, F(z)/d)| as 0 or 1.
    pub indicator_difference: f64,
}

/// Compares singularity of z0 I + z1 a + z2 t at level n + 1 with that of its
/// Schur complement (z0 q/d) I + (z1² z2/d) a + z2 t at level n, d = z0² − z2².
pub fn schur_reduction_check(level: u32, z: &[Complex64; 3]) -> Result<SchurCheck> {
    let [z0, z1, z2] = *z;
    let d = z0 * z0 - z2 * z2;
    if d == Complex64::new(0.0, 0.0) {
        return Err(Error::SchurPreconditionViolated);
    }
    check_level(level + 1, MAX_DENSE_LEVEL)?;
    let q = z0 * z0 - z1 * z1 - z2 * z2;
    let small = [z0 * q / d, z1 * z1 * z2 / d, z2];
    let big_rep = build_dihedral_level(level + 1)?;
    let small_rep = build_dihedral_level(level)?;
    let big_min_sv = min_singular_value(&big_rep, z0, &[z1, z2])?;
    let small_min_sv = min_singular_value(&small_rep, small[0], &small[1..])?;
    let big_threshold = singular_threshold(z, level + 1);
    let small_threshold = singular_threshold(&small, level);
    let ind_big = big_min_sv <= big_threshold;
    let ind_small = small_min_sv <= small_threshold;
    Ok(SchurCheck {
        level,
        big_min_sv,
        big_threshold,
        small_min_sv,
        small_threshold,
        indicator_difference: if ind_big == ind_small { 0.0 } else { 1.0 },
    })
}

/// Dihedral readouts x = (μ² − z1² − z2²)/(2 z1 z2) for the eigenvalues μ of
/// z1 a + z2 t, sorted ascending.
pub fn empirical_spectrum_params(rep: &LevelRep, z1: f64, z2: f64) -> Result<Vec<f64>> {
    if rep.group != GroupKind::Dihedral {
        return Err(Error::InvalidArgument("readout needs the dihedral representation".into()));
    }
    if z1 * z2 == 0.0 {
        return Err(Error::InvalidArgument("readout needs z1 z2 != 0".into()));
    }
    let ev = pencil_eigenvalues(rep, &[Complex64::new(z1, 0.0), Complex64::new(z2, 0.0)])?;
    let mut xs: Vec<f64> =
        ev.iter().map(|m| (m * m - z1 * z1 - z2 * z2) / (2.0 * z1 * z2)).collect();
    xs.sort_by(f64::total_cmp);
    Ok(xs)
}

/// Largest gap between consecutive sorted values.
pub fn max_gap(xs: &[f64]) -> f64 {
    xs.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

/// Checks (b + c + d − I)/2 = t entrywise at the given level.
pub fn u_equals_t(level: u32) -> Result<bool> {
    let g = build_grigorchuk_level(level)?;
    let t = build_dihedral_level(level)?;
    let t = t.generator('t').expect("t");
    let (b, c, d) = (g.generator('b').unwrap(), g.generator('c').unwrap(), g.generator('d').unwrap());
    for i in 0..g.dimension() {
        let mut row: BTreeMap<u32, i32> = BTreeMap::new();
        for p in [b, c, d] {
            *row.entry(p.0[i]).or_default() += 1;
        }
        *row.entry(i as u32).or_default() -= 1;
        row.retain(|_, v| *v != 0);
        let expect: BTreeMap<u32, i32> = [(t.0[i], 2)].into_iter().collect();
        if row != expect {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Writes one eigenvalue per line.
pub fn eigenvalues_csv(values: &[f64]) -> String {
    let mut s = String::from("eigenvalue\n");
    for v in values {
        s.push_str(&format!("{v}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_involutions() {
        for level in 0..=6 {
            for rep in [build_dihedral_level(level).unwrap(), build_grigorchuk_level(level).unwrap()] {
                for (_, p) in &rep.generators {
                    assert!(p.is_involution());
                    assert_eq!(p.len(), 1 << level);
                }
            }
        }
    }

    #[test]
    fn grigorchuk_relations() {
        let g = build_grigorchuk_level(6).unwrap();
        let (b, c, d) = (g.generator('b').unwrap(), g.generator('c').unwrap(), g.generator('d').unwrap());
        assert_eq!(&b.compose(c), d);
        assert_eq!(&c.compose(d), b);
    }

    #[test]
    fn level_one_generators() {
        let d = build_dihedral_level(1).unwrap();
        assert_eq!(d.generator('a').unwrap().0, vec![1, 0]);
        assert_eq!(d.generator('t').unwrap().0, vec![0, 1]);
        assert!(build_dihedral_level(15).is_err());
    }

    #[test]
    fn u_matches_t() {
        for level in 0..=8 {
            assert!(u_equals_t(level).unwrap());
        }
    }

    #[test]
    fn dihedral_readouts_match_cosines() {
        let rep = build_dihedral_level(5).unwrap();
        let xs = empirical_spectrum_params(&rep, 1.0, 1.0).unwrap();
        for x in xs {
            // Allowed values: ±1 and cos(2πk/32).
            let ok = (0..=32).any(|k| {
                (x - (2.0 * std::f64::consts::PI * k as f64 / 32.0).cos()).abs() < 1e-9
            });
            assert!(ok, "{x}");
        }
    }

    #[test]
    fn complex_singular_value_matches_real_path() {
        let rep = build_dihedral_level(4).unwrap();
        let w = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        let real = min_singular_value(&rep, Complex64::new(2.0, 0.0), &w).unwrap();
        // Multiplying the whole pencil by a unit phase leaves singular values unchanged.
        let ph = Complex64::from_polar(1.0, 0.7);
        let wc = [w[0] * ph, w[1] * ph];
        let cplx = min_singular_value(&rep, Complex64::new(2.0, 0.0) * ph, &wc).unwrap();
        assert!((real - cplx).abs() < 1e-7, "{real} vs {cplx}");
    }

    #[test]
    fn schur_precondition() {
        let z = [Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)];
        assert_eq!(schur_reduction_check(3, &z), Err(Error::SchurPreconditionViolated));
    }

    #[test]
    fn non_real_weights_rejected() {
        let rep = build_dihedral_level(2).unwrap();
        let w = [Complex64::new(1.0, 0.5), Complex64::new(1.0, 0.0)];
        assert_eq!(pencil_eigenvalues(&rep, &w), Err(Error::NonRealWeights));
    }
}
