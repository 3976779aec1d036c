//! Tensor Hermite eigenbasis of the harmonic oscillator `H = -Δ + |x|²`.
//!
//! Basis functions are products of 1-D Hermite functions `h_m` (orthonormal in
//! `L²(ℝ)`, eigenfunctions of `-d²/dx² + x²` with eigenvalue `2m+1`), indexed
//! by a multi-index `α`; the n-D eigenvalue is `λ = 2|α| + n`. Indices are
//! retained by whole eigenvalue clusters `I(j) = {k : 2j ≤ λ_k < 2(j+1)}` up
//! to a cutoff `J`, and sorted by eigenvalue with lexicographic tie-break so
//! that runs are reproducible and raising `J` appends rather than reshuffles.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{GridField, SpectralField};

/// Default cap on the tensor grid size `M^n`.
pub const DEFAULT_GRID_BUDGET: usize = 1 << 22;

/// Per-axis Hermite degrees of one basis function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    dim: u8,
    alpha: [u16; 4],
}

impl MultiIndex {
    pub fn new(alpha: &[usize]) -> Self {
        assert!((1..=4).contains(&alpha.len()), "dimension must be 1..=4");
        let mut a = [0u16; 4];
        for (dst, &src) in a.iter_mut().zip(alpha) {
            *dst = u16::try_from(src).expect("per-axis degree too large");
        }
        Self {
            dim: alpha.len() as u8,
            alpha: a,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn degree(&self, axis: usize) -> usize {
        assert!(axis < self.dim());
        self.alpha[axis] as usize
    }

    pub fn degrees(&self) -> &[u16] {
        &self.alpha[..self.dim()]
    }

    /// Total degree `|α|`.
    pub fn total_degree(&self) -> usize {
        self.degrees().iter().map(|&d| d as usize).sum()
    }

    /// Oscillator eigenvalue `λ = 2|α| + n` (a positive integer with the
    /// parity of `n`).
    pub fn eigenvalue(&self) -> usize {
        2 * self.total_degree() + self.dim()
    }

    /// Cluster index `j` with `2j ≤ λ < 2(j+1)`.
    pub fn cluster(&self) -> usize {
        self.eigenvalue() / 2
    }

    /// Packs the per-axis degrees into one integer. Stable under truncation
    /// changes, which keys the per-mode random streams.
    pub fn stream_key(&self) -> u64 {
        let mut key = self.dim as u64;
        for &d in self.alpha.iter() {
            key = (key << 15) | d as u64;
        }
        key
    }
}

/// One retained eigenvalue cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cluster {
    pub j: usize,
    /// Range into the sorted basis index list.
    pub start: usize,
    pub end: usize,
}

impl Cluster {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

/// Immutable basis data shared by every field: index enumeration, clusters,
/// Gauss–Hermite quadrature, and 1-D value/derivative tables at the nodes.
#[derive(Debug)]
pub struct BasisTable {
    dim: usize,
    cluster_cutoff: usize,
    max_degree: usize,
    quad_points: usize,
    grid_len: usize,
    indices: Vec<MultiIndex>,
    clusters: Vec<Cluster>,
    nodes: Vec<f64>,
    /// Quadrature weights already corrected for the `e^{-x²}` factor, so that
    /// `∫ f ≈ Σ_i ŵ_i f(x_i)` for functions with Hermite decay.
    weights: Vec<f64>,
    /// `h_m(x_i)` for `m = 0..=max_degree+1`, row-major by degree.
    values: Vec<f64>,
    /// `h'_m(x_i)`, same layout.
    derivs: Vec<f64>,
    /// Offset of each retained index in the dense degree tensor.
    dense_offsets: Vec<usize>,
    /// Node-major synthesis matrix `[M × (d_max+1)]`.
    synth_mat: Vec<f64>,
    /// Node-major synthesis matrix including the ladder overflow degree,
    /// `[M × (d_max+2)]`.
    synth_mat_ext: Vec<f64>,
}

impl BasisTable {
    /// Builds the basis for dimension `n`, cluster cutoff `J`, and `M`
    /// quadrature points per axis, under the default grid budget.
    pub fn build(n: usize, cluster_cutoff: usize, quad_points: usize) -> Result<Arc<Self>> {
        Self::build_with_budget(n, cluster_cutoff, quad_points, DEFAULT_GRID_BUDGET)
    }

    /// Builds with the default quadrature size `M = 2·d_max + 1` (exact for
    /// products of two retained basis functions).
    pub fn build_default(n: usize, cluster_cutoff: usize) -> Result<Arc<Self>> {
        let d_max = Self::max_degree_for(n, cluster_cutoff)?;
        Self::build(n, cluster_cutoff, 2 * d_max + 1)
    }

    /// Default size raised to `M = 6·d_max + 1`, which removes the aliasing
    /// of cubic products at the cost of a larger grid.
    pub fn build_dealiased(n: usize, cluster_cutoff: usize) -> Result<Arc<Self>> {
        let d_max = Self::max_degree_for(n, cluster_cutoff)?;
        Self::build(n, cluster_cutoff, 6 * d_max + 1)
    }

    pub fn build_with_budget(
        n: usize,
        cluster_cutoff: usize,
        quad_points: usize,
        budget: usize,
    ) -> Result<Arc<Self>> {
        let d_max = Self::max_degree_for(n, cluster_cutoff)?;
        let floor = 2 * d_max + 1;
        if quad_points < floor {
            return Err(Error::QuadratureTooCoarse {
                m: quad_points,
                floor,
            });
        }
        let grid_len = quad_points
            .checked_pow(n as u32)
            .filter(|&p| p <= budget)
            .ok_or(Error::BudgetExceeded {
                points: quad_points.saturating_pow(n as u32),
                budget,
            })?;

        let mut indices = enumerate_indices(n, d_max);
        indices.sort_by_key(|mi| {
            (
                mi.eigenvalue(),
                [mi.alpha[0], mi.alpha[1], mi.alpha[2], mi.alpha[3]],
            )
        });

        let mut clusters: Vec<Cluster> = Vec::new();
        for (k, mi) in indices.iter().enumerate() {
            let j = mi.cluster();
            match clusters.last_mut() {
                Some(c) if c.j == j => c.end = k + 1,
                _ => clusters.push(Cluster {
                    j,
                    start: k,
                    end: k + 1,
                }),
            }
        }

        let (nodes, weights) = gauss_hermite(quad_points);

        let degrees = d_max + 2; // values up to d_max+1 for the ladder
        let mut values = vec![0.0; degrees * quad_points];
        let mut derivs = vec![0.0; degrees * quad_points];
        for (i, &x) in nodes.iter().enumerate() {
            let h = hermite_values(degrees + 1, x); // one past for h'_{d_max+1}
            for m in 0..degrees {
                values[m * quad_points + i] = h[m];
                // h'_m = √(m/2) h_{m-1} − √((m+1)/2) h_{m+1}
                let lower = if m == 0 {
                    0.0
                } else {
                    (m as f64 / 2.0).sqrt() * h[m - 1]
                };
                derivs[m * quad_points + i] = lower - ((m as f64 + 1.0) / 2.0).sqrt() * h[m + 1];
            }
        }

        let dense = d_max + 1;
        let dense_offsets = indices
            .iter()
            .map(|mi| {
                mi.degrees()
                    .iter()
                    .fold(0usize, |acc, &d| acc * dense + d as usize)
            })
            .collect();

        let mut synth_mat = vec![0.0; quad_points * dense];
        let mut synth_mat_ext = vec![0.0; quad_points * (dense + 1)];
        for i in 0..quad_points {
            for m in 0..=d_max + 1 {
                let v = values[m * quad_points + i];
                if m <= d_max {
                    synth_mat[i * dense + m] = v;
                }
                synth_mat_ext[i * (dense + 1) + m] = v;
            }
        }

        Ok(Arc::new(Self {
            dim: n,
            cluster_cutoff,
            max_degree: d_max,
            quad_points,
            grid_len,
            indices,
            clusters,
            nodes,
            weights,
            values,
            derivs,
            dense_offsets,
            synth_mat,
            synth_mat_ext,
        }))
    }

    /// Largest per-axis degree retained by cluster cutoff `J` in dimension
    /// `n`: eigenvalues `2m + n < 2(J+1)` give `m ≤ J - ⌊n/2⌋`.
    fn max_degree_for(n: usize, cluster_cutoff: usize) -> Result<usize> {
        if !(1..=4).contains(&n) {
            return Err(Error::BadDimension(n));
        }
        if cluster_cutoff < 1 {
            return Err(Error::EmptyBasis {
                n,
                j: cluster_cutoff,
            });
        }
        let half = n / 2;
        if cluster_cutoff < half {
            return Err(Error::EmptyBasis {
                n,
                j: cluster_cutoff,
            });
        }
        Ok(cluster_cutoff - half)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cluster_cutoff(&self) -> usize {
        self.cluster_cutoff
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn quad_points(&self) -> usize {
        self.quad_points
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn grid_len(&self) -> usize {
        self.grid_len
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn index(&self, k: usize) -> MultiIndex {
        self.indices[k]
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn eigenvalue(&self, k: usize) -> f64 {
        self.indices[k].eigenvalue() as f64
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `h_m` at the quadrature nodes, valid for `m ≤ max_degree + 1`.
    pub fn values_of_degree(&self, m: usize) -> &[f64] {
        &self.values[m * self.quad_points..(m + 1) * self.quad_points]
    }

    pub fn derivs_of_degree(&self, m: usize) -> &[f64] {
        &self.derivs[m * self.quad_points..(m + 1) * self.quad_points]
    }

    pub(crate) fn dense_offsets(&self) -> &[usize] {
        &self.dense_offsets
    }

    /// Degree-major analysis matrix `[(d_max+2) × M]` (shares storage with
    /// the value table).
    pub(crate) fn analysis_rows(&self, degrees: usize) -> &[f64] {
        &self.values[..degrees * self.quad_points]
    }

    pub(crate) fn synth_mat(&self) -> &[f64] {
        &self.synth_mat
    }

    pub(crate) fn synth_mat_ext(&self) -> &[f64] {
        &self.synth_mat_ext
    }

    /// Identifying triple used to detect mismatched fields.
    pub fn fingerprint(&self) -> (usize, usize, usize) {
        (self.dim, self.cluster_cutoff, self.quad_points)
    }

    pub(crate) fn check_same(&self, other: &BasisTable) -> Result<()> {
        if self.fingerprint() == other.fingerprint() {
            Ok(())
        } else {
            Err(Error::BasisMismatch {
                lhs: self.fingerprint(),
                rhs: other.fingerprint(),
            })
        }
    }

    /// Cartesian coordinates of grid point `i` (row-major over axes).
    pub fn grid_point(&self, mut i: usize) -> Vec<f64> {
        let mut coords = vec![0.0; self.dim];
        for axis in (0..self.dim).rev() {
            coords[axis] = self.nodes[i % self.quad_points];
            i /= self.quad_points;
        }
        coords
    }

    /// Product quadrature weight of grid point `i`.
    pub fn grid_weight(&self, mut i: usize) -> f64 {
        let mut w = 1.0;
        for _ in 0..self.dim {
            w *= self.weights[i % self.quad_points];
            i /= self.quad_points;
        }
        w
    }

    pub fn spectral_zero(self: &Arc<Self>) -> SpectralField {
        SpectralField::new(self.clone(), vec![Complex64::new(0.0, 0.0); self.len()])
    }

    /// Field with a single unit coefficient on basis index `k`.
    pub fn spectral_unit(self: &Arc<Self>, k: usize) -> SpectralField {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.len()];
        coeffs[k] = Complex64::new(1.0, 0.0);
        SpectralField::new(self.clone(), coeffs)
    }

    pub fn grid_zero(self: &Arc<Self>) -> GridField {
        GridField::new(self.clone(), vec![Complex64::new(0.0, 0.0); self.grid_len])
    }
}

fn enumerate_indices(n: usize, d_max: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut alpha = vec![0usize; n];
    fill(&mut out, &mut alpha, 0, d_max);
    fn fill(out: &mut Vec<MultiIndex>, alpha: &mut Vec<usize>, axis: usize, left: usize) {
        if axis == alpha.len() - 1 {
            for d in 0..=left {
                alpha[axis] = d;
                out.push(MultiIndex::new(alpha));
            }
            return;
        }
        for d in 0..=left {
            alpha[axis] = d;
            fill(out, alpha, axis + 1, left - d);
        }
        alpha[axis] = 0;
    }
    out
}

/// Orthonormal Hermite function values `h_0(x) .. h_{degrees-1}(x)`.
///
/// The three-term recurrence runs on values rescaled by a running power of
/// `e`, so degrees in the classically forbidden region (where the bare
/// recurrence would overflow long before the function itself leaves the
/// subnormal range) stay finite.
pub fn hermite_values(degrees: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; degrees];
    if degrees == 0 {
        return out;
    }
    // h_0 = π^{-1/4} e^{-x²/2}, carried as v·e^{logscale}
    let mut logscale = -0.25 * std::f64::consts::PI.ln() - 0.5 * x * x;
    let mut prev = 0.0f64;
    let mut cur = 1.0f64;
    out[0] = cur * logscale.exp();
    for m in 0..degrees - 1 {
        let mf = m as f64;
        let next = x * (2.0 / (mf + 1.0)).sqrt() * cur - (mf / (mf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > 1e100 {
            cur *= 1e-100;
            prev *= 1e-100;
            logscale += 100.0 * std::f64::consts::LN_10;
        }
        out[m + 1] = cur * logscale.exp();
    }
    out
}

/// Gauss–Hermite nodes and weights, already corrected for the `e^{-x²}`
/// factor: `∫ f(x) dx ≈ Σ ŵ_i f(x_i)` is exact when `f·e^{x²}` is a
/// polynomial of degree < 2M.
pub fn gauss_hermite(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    // Jacobi matrix of the orthonormal Hermite polynomials.
    let mut jac = DMatrix::<f64>::zeros(m, m);
    for k in 1..m {
        let b = (k as f64 / 2.0).sqrt();
        jac[(k - 1, k)] = b;
        jac[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(jac);
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // Newton polish on the degree-M orthonormal polynomial; the prescaled
    // recurrence ratio cancels the common exponential factor.
    for x in nodes.iter_mut() {
        for _ in 0..2 {
            let h = hermite_values(m + 1, *x);
            let deriv = (2.0 * m as f64).sqrt() * h[m - 1];
            if deriv != 0.0 {
                *x -= h[m] / deriv;
            }
        }
    }
    // Enforce the exact ± symmetry of the node set.
    for i in 0..m / 2 {
        let v = 0.5 * (nodes[m - 1 - i] - nodes[i]);
        nodes[i] = -v;
        nodes[m - 1 - i] = v;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }

    // Christoffel weights through the Hermite *functions*: the corrected
    // weight is ŵ_i = 1 / Σ_{k<M} h_k(x_i)².
    let weights = nodes
        .iter()
        .map(|&x| {
            let h = hermite_values(m, x);
            1.0 / h.iter().map(|v| v * v).sum::<f64>()
        })
        .collect();

    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalue_and_cluster_arithmetic() {
        let mi = MultiIndex::new(&[1, 0, 0]);
        assert_eq!(mi.eigenvalue(), 5);
        assert_eq!(mi.cluster(), 2);
        let mi = MultiIndex::new(&[3]);
        assert_eq!(mi.eigenvalue(), 7);
        assert_eq!(mi.cluster(), 3);
    }

    #[test]
    fn clusters_1d() {
        // n=1, J=4: eigenvalues 1,3,5,7,9, each its own cluster I(j) = {k=j}.
        let basis = BasisTable::build_default(1, 4).unwrap();
        assert_eq!(basis.len(), 5);
        let eigs: Vec<usize> = basis.indices().iter().map(|m| m.eigenvalue()).collect();
        assert_eq!(eigs, vec![1, 3, 5, 7, 9]);
        for (k, c) in basis.clusters().iter().enumerate() {
            assert_eq!(c.len(), 1);
            assert_eq!(c.j, k);
            assert_eq!(c.start, k);
        }
    }

    #[test]
    fn clusters_2d() {
        // n=2, J=3: sizes (1,2,3) for j=1,2,3 and eigenvalues 2,4,4,6,6,6.
        let basis = BasisTable::build_default(2, 3).unwrap();
        assert_eq!(basis.len(), 6);
        let eigs: Vec<usize> = basis.indices().iter().map(|m| m.eigenvalue()).collect();
        assert_eq!(eigs, vec![2, 4, 4, 6, 6, 6]);
        let sizes: Vec<(usize, usize)> = basis.clusters().iter().map(|c| (c.j, c.len())).collect();
        assert_eq!(sizes, vec![(1, 1), (2, 2), (3, 3)]);
    }

    #[test]
    fn clusters_3d() {
        // n=3, J=2: I(2) holds the three permutations of (1,0,0), eigenvalue 5.
        let basis = BasisTable::build_default(3, 2).unwrap();
        let c = basis
            .clusters()
            .iter()
            .find(|c| c.j == 2)
            .expect("cluster j=2");
        assert_eq!(c.len(), 3);
        for k in c.start..c.end {
            assert_eq!(basis.index(k).eigenvalue(), 5);
            assert_eq!(basis.index(k).total_degree(), 1);
        }
    }

    /// Combinatorial cluster-size oracle: compositions of `j - ⌊n/2⌋` into
    /// `n` parts.
    fn cluster_size_oracle(n: usize, j: usize) -> usize {
        let half = n / 2;
        if j < half {
            return 0;
        }
        let m = j - half;
        match n {
            1 => 1,
            2 => m + 1,
            3 => (m + 1) * (m + 2) / 2,
            4 => (m + 1) * (m + 2) * (m + 3) / 6,
            _ => unreachable!(),
        }
    }

    #[test]
    fn cluster_sizes_match_combinatorial_counts() {
        for n in 1..=3usize {
            let j_top = 16;
            let basis = BasisTable::build_default(n, j_top).unwrap();
            let mut total = 0;
            for c in basis.clusters() {
                assert_eq!(c.len(), cluster_size_oracle(n, c.j), "n={n} j={}", c.j);
                assert!(c.j <= j_top);
                total += c.len();
            }
            assert_eq!(total, basis.len());
        }
    }

    #[test]
    fn ordering_is_eigenvalue_then_lex() {
        // n=2, J=4 retains |α| ≤ 3 (eigenvalues up through 8)
        let basis = BasisTable::build_default(2, 4).unwrap();
        let degs: Vec<Vec<u16>> = basis
            .indices()
            .iter()
            .map(|m| m.degrees().to_vec())
            .collect();
        assert_eq!(
            degs,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![1, 0],
                vec![0, 2],
                vec![1, 1],
                vec![2, 0],
                vec![0, 3],
                vec![1, 2],
                vec![2, 1],
                vec![3, 0],
            ]
        );
    }

    #[test]
    fn rejects_coarse_quadrature_and_bad_dims() {
        assert!(matches!(
            BasisTable::build(2, 8, 10),
            Err(Error::QuadratureTooCoarse { .. })
        ));
        assert!(matches!(
            BasisTable::build_default(5, 4),
            Err(Error::BadDimension(5))
        ));
        assert!(matches!(
            BasisTable::build_default(4, 1),
            Err(Error::EmptyBasis { .. })
        ));
        assert!(matches!(
            BasisTable::build_with_budget(3, 16, 31, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn quadrature_integrates_gaussian() {
        // ∫ e^{-x²} dx = √π via the corrected weights.
        let (nodes, weights) = gauss_hermite(necessary_points());
        let s: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(&x, &w)| w * (-x * x).exp())
            .sum();
        assert!((s - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        fn necessary_points() -> usize {
            24
        }
    }

    #[test]
    fn discrete_gram_is_identity_1d() {
        let m = 41;
        let d_max = 20;
        let (nodes, weights) = gauss_hermite(m);
        let mut worst = 0.0f64;
        let tables: Vec<Vec<f64>> = nodes
            .iter()
            .map(|&x| hermite_values(d_max + 1, x))
            .collect();
        for a in 0..=d_max {
            for b in 0..=d_max {
                let s: f64 = (0..m)
                    .map(|i| weights[i] * tables[i][a] * tables[i][b])
                    .sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((s - expect).abs());
            }
        }
        assert!(worst < 1e-12, "gram deviation {worst}");
    }

    #[test]
    fn hermite_values_match_closed_forms() {
        let x = 0.7f64;
        let h = hermite_values(3, x);
        let h0 = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
        assert!((h[0] - h0).abs() < 1e-15);
        assert!((h[1] - std::f64::consts::SQRT_2 * x * h0).abs() < 1e-15);
        // h_2 = (2x²-1)/√2 · h_0
        assert!((h[2] - (2.0 * x * x - 1.0) / std::f64::consts::SQRT_2 * h0).abs() < 1e-14);
    }

    #[test]
    fn hermite_values_survive_deep_forbidden_region() {
        // Bare unscaled recurrence would overflow around degree ~300 here.
        let h = hermite_values(400, 26.0);
        assert!(h.iter().all(|v| v.is_finite()));
        // Degree near the turning point x² ≈ 2m+1 is O(1)-ish.
        assert!(h[338].abs() > 1e-8);
    }
}
