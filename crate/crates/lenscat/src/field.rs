//! Coefficient- and grid-space carriers for fields, with the transforms
//! between them.
//!
//! `SpectralField` stores Hermite coefficients in basis order; `GridField`
//! stores complex values on the tensor Gauss–Hermite grid. Synthesis and
//! analysis are per-axis dense matrix contractions; with the default
//! quadrature size the discrete inner product is exact on products of two
//! retained basis functions, so `analyze ∘ synthesize` is the identity up to
//! rounding.

use std::sync::Arc;

use num_complex::Complex64;

use crate::basis::{hermite_values, BasisTable};
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct SpectralField {
    basis: Arc<BasisTable>,
    coeffs: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct GridField {
    basis: Arc<BasisTable>,
    values: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(basis: Arc<BasisTable>, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(
            coeffs.len(),
            basis.len(),
            "coefficient count must match basis"
        );
        Self { basis, coeffs }
    }

    pub fn basis(&self) -> &Arc<BasisTable> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// `L²` norm; equals the Euclidean coefficient norm by orthonormality.
    pub fn norm_l2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.basis.check_same(&other.basis)?;
        Ok(Self {
            basis: self.basis.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.basis.check_same(&other.basis)?;
        Ok(Self {
            basis: self.basis.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Evaluates the expansion at arbitrary points (one `Vec` of length `n`
    /// per point).
    pub fn eval_at(&self, points: &[Vec<f64>]) -> Vec<Complex64> {
        let n = self.basis.dim();
        let degrees = self.basis.max_degree() + 1;
        points
            .iter()
            .map(|pt| {
                assert_eq!(pt.len(), n);
                let tables: Vec<Vec<f64>> =
                    pt.iter().map(|&x| hermite_values(degrees, x)).collect();
                self.basis
                    .indices()
                    .iter()
                    .zip(&self.coeffs)
                    .map(|(mi, c)| {
                        let mut w = 1.0;
                        for (axis, &d) in mi.degrees().iter().enumerate() {
                            w *= tables[axis][d as usize];
                        }
                        c * w
                    })
                    .sum()
            })
            .collect()
    }
}

impl GridField {
    pub fn new(basis: Arc<BasisTable>, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), basis.grid_len(), "value count must be M^n");
        Self { basis, values }
    }

    pub fn basis(&self) -> &Arc<BasisTable> {
        &self.basis
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// `L²` norm through the product quadrature.
    pub fn norm_l2_quad(&self) -> f64 {
        let mut s = 0.0;
        for (i, v) in self.values.iter().enumerate() {
            s += self.basis.grid_weight(i) * v.norm_sqr();
        }
        s.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Contracts `mat` (`rows × shape[axis]`) along `axis` of the row-major
/// tensor `data`, replacing that extent with `rows`.
fn apply_axis(
    data: &[Complex64],
    shape: &mut [usize],
    axis: usize,
    mat: &[f64],
    rows: usize,
) -> Vec<Complex64> {
    let cols = shape[axis];
    assert_eq!(mat.len(), rows * cols);
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut out = vec![Complex64::new(0.0, 0.0); outer * rows * inner];
    for o in 0..outer {
        let in_base = o * cols * inner;
        let out_base = o * rows * inner;
        for r in 0..rows {
            let row = &mat[r * cols..(r + 1) * cols];
            let dst = &mut out[out_base + r * inner..out_base + (r + 1) * inner];
            for (s, &m) in row.iter().enumerate() {
                if m == 0.0 {
                    continue;
                }
                let src = &data[in_base + s * inner..in_base + (s + 1) * inner];
                for (d, v) in dst.iter_mut().zip(src) {
                    *d += v * m;
                }
            }
        }
    }
    shape[axis] = rows;
    out
}

/// Scatters sorted coefficients into the dense degree tensor of the given
/// per-axis extent.
fn scatter(f: &SpectralField, extent: usize) -> Vec<Complex64> {
    let basis = f.basis();
    let n = basis.dim();
    let mut dense = vec![Complex64::new(0.0, 0.0); extent.pow(n as u32)];
    if extent == basis.max_degree() + 1 {
        for (&off, &c) in basis.dense_offsets().iter().zip(f.coeffs()) {
            dense[off] = c;
        }
    } else {
        for (mi, &c) in basis.indices().iter().zip(f.coeffs()) {
            let off = mi
                .degrees()
                .iter()
                .fold(0usize, |acc, &d| acc * extent + d as usize);
            dense[off] = c;
        }
    }
    dense
}

/// Evaluates the expansion on the tensor quadrature grid.
pub fn synthesize(f: &SpectralField) -> GridField {
    let basis = f.basis();
    let n = basis.dim();
    let degrees = basis.max_degree() + 1;
    let mut data = scatter(f, degrees);
    let mut shape = vec![degrees; n];
    for axis in 0..n {
        data = apply_axis(
            &data,
            &mut shape,
            axis,
            basis.synth_mat(),
            basis.quad_points(),
        );
    }
    GridField::new(basis.clone(), data)
}

/// Evaluates the expansion on the grid scaled by `node_scale` (nodes
/// `node_scale · x_i` per axis). Exact per mode; used by the lens maps.
pub fn synthesize_at_scaled_nodes(f: &SpectralField, node_scale: f64) -> GridField {
    let basis = f.basis();
    let n = basis.dim();
    let degrees = basis.max_degree() + 1;
    let m = basis.quad_points();
    let mut mat = vec![0.0; m * degrees];
    for (i, &x) in basis.nodes().iter().enumerate() {
        let h = hermite_values(degrees, node_scale * x);
        mat[i * degrees..(i + 1) * degrees].copy_from_slice(&h);
    }
    let mut data = scatter(f, degrees);
    let mut shape = vec![degrees; n];
    for axis in 0..n {
        data = apply_axis(&data, &mut shape, axis, &mat, m);
    }
    GridField::new(basis.clone(), data)
}

/// Projects grid values onto the retained basis through the discrete inner
/// product.
pub fn analyze(g: &GridField) -> SpectralField {
    let basis = g.basis();
    let n = basis.dim();
    let degrees = basis.max_degree() + 1;
    let m = basis.quad_points();
    let mut data: Vec<Complex64> = g
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| v * basis.grid_weight(i))
        .collect();
    let mut shape = vec![m; n];
    for axis in 0..n {
        data = apply_axis(
            &data,
            &mut shape,
            axis,
            basis.analysis_rows(degrees),
            degrees,
        );
    }
    let coeffs = basis.dense_offsets().iter().map(|&off| data[off]).collect();
    SpectralField::new(basis.clone(), coeffs)
}

/// Ladder coefficients of `∂f/∂x_axis`: the tridiagonal relation
/// `(∂f)_r = √((r+1)/2)·c_{r+1} − √(r/2)·c_{r−1}` along one axis of the
/// dense tensor, with one overflow degree.
fn ladder_derivative(dense: &[Complex64], shape: &[usize], axis: usize) -> Vec<Complex64> {
    ladder_apply(dense, shape, axis, -1.0)
}

/// Same tridiagonal structure for multiplication by `x_axis`:
/// `(x f)_r = √((r+1)/2)·c_{r+1} + √(r/2)·c_{r−1}`.
fn ladder_position(dense: &[Complex64], shape: &[usize], axis: usize) -> Vec<Complex64> {
    ladder_apply(dense, shape, axis, 1.0)
}

fn ladder_apply(
    dense: &[Complex64],
    shape: &[usize],
    axis: usize,
    lower_sign: f64,
) -> Vec<Complex64> {
    let d = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut out = vec![Complex64::new(0.0, 0.0); outer * (d + 1) * inner];
    for o in 0..outer {
        let in_base = o * d * inner;
        let out_base = o * (d + 1) * inner;
        for r in 0..=d {
            let up = ((r as f64 + 1.0) / 2.0).sqrt();
            let down = lower_sign * (r as f64 / 2.0).sqrt();
            let dst = &mut out[out_base + r * inner..out_base + (r + 1) * inner];
            if r + 1 < d {
                let src = &dense[in_base + (r + 1) * inner..in_base + (r + 2) * inner];
                for (t, v) in dst.iter_mut().zip(src) {
                    *t += v * up;
                }
            }
            if r >= 1 && r <= d {
                let src = &dense[in_base + (r - 1) * inner..in_base + r * inner];
                for (t, v) in dst.iter_mut().zip(src) {
                    *t += v * down;
                }
            }
        }
    }
    out
}

fn synthesize_dense(
    basis: &Arc<BasisTable>,
    mut data: Vec<Complex64>,
    shape: &mut [usize],
) -> GridField {
    let degrees = basis.max_degree() + 1;
    for axis in 0..basis.dim() {
        let mat = if shape[axis] == degrees {
            basis.synth_mat()
        } else {
            basis.synth_mat_ext()
        };
        data = apply_axis(&data, shape, axis, mat, basis.quad_points());
    }
    GridField::new(basis.clone(), data)
}

/// All partial derivatives as grid fields, via the exact coefficient-space
/// ladder followed by synthesis (including the overflow degree).
pub fn gradient(f: &SpectralField) -> Vec<GridField> {
    let basis = f.basis();
    let n = basis.dim();
    let degrees = basis.max_degree() + 1;
    let dense = scatter(f, degrees);
    let base_shape = vec![degrees; n];
    (0..n)
        .map(|axis| {
            let data = ladder_derivative(&dense, &base_shape, axis);
            let mut shape = base_shape.clone();
            shape[axis] = degrees + 1;
            synthesize_dense(basis, data, &mut shape)
        })
        .collect()
}

/// `x_axis · f` as a grid field through the exact ladder.
pub fn position_product(f: &SpectralField, axis: usize) -> GridField {
    let basis = f.basis();
    let n = basis.dim();
    let degrees = basis.max_degree() + 1;
    let dense = scatter(f, degrees);
    let base_shape = vec![degrees; n];
    let data = ladder_position(&dense, &base_shape, axis);
    let mut shape = base_shape;
    shape[axis] = degrees + 1;
    synthesize_dense(basis, data, &mut shape)
}

/// Pointwise multiplication by the Japanese bracket `⟨x⟩^a = (1+|x|²)^{a/2}`.
pub fn weight_pointwise(g: &GridField, power: f64) -> GridField {
    assert!(power >= 0.0, "weight power must be nonnegative");
    let basis = g.basis();
    let values = g
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let r2: f64 = basis.grid_point(i).iter().map(|x| x * x).sum();
            v * (1.0 + r2).powf(power / 2.0)
        })
        .collect();
    GridField::new(basis.clone(), values)
}

/// `⟨x⟩^a f` on the grid (synthesis followed by the pointwise weight).
pub fn apply_weight(f: &SpectralField, power: f64) -> GridField {
    weight_pointwise(&synthesize(f), power)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisTable;
    use crate::testutil::random_field;

    #[test]
    fn ground_state_value_at_origin() {
        // φ₀(0) = π^{-n/4}; the origin is a node because M is odd.
        let basis = BasisTable::build_default(2, 8).unwrap();
        let g = synthesize(&basis.spectral_unit(0));
        let m = basis.quad_points();
        let origin = (m / 2) * m + m / 2;
        let expect = std::f64::consts::PI.powf(-0.5);
        assert!((g.values()[origin].re - expect).abs() < 1e-12);
        assert!(g.values()[origin].im.abs() < 1e-15);
    }

    #[test]
    fn zero_coeffs_zero_grid() {
        let basis = BasisTable::build_default(2, 6).unwrap();
        let g = synthesize(&basis.spectral_zero());
        assert_eq!(g.max_abs(), 0.0);
    }

    #[test]
    fn round_trip_random_coeffs() {
        for (n, j) in [(1, 12), (2, 8), (3, 5)] {
            let basis = BasisTable::build_default(n, j).unwrap();
            let f = random_field(&basis, 7);
            let back = analyze(&synthesize(&f));
            let err: f64 = f
                .coeffs()
                .iter()
                .zip(back.coeffs())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err < 1e-10 * f.norm_l2().max(1.0), "n={n} err={err}");
        }
    }

    #[test]
    fn gram_matrix_identity_2d() {
        let basis = BasisTable::build_default(2, 6).unwrap();
        let grids: Vec<GridField> = (0..basis.len())
            .map(|k| synthesize(&basis.spectral_unit(k)))
            .collect();
        let mut worst = 0.0f64;
        for a in 0..basis.len() {
            for b in 0..basis.len() {
                let mut s = Complex64::new(0.0, 0.0);
                for i in 0..basis.grid_len() {
                    s += grids[a].values()[i].conj() * grids[b].values()[i] * basis.grid_weight(i);
                }
                let expect = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((s.re - expect).abs().max(s.im.abs()));
            }
        }
        assert!(worst < 1e-12, "worst gram deviation {worst}");
    }

    #[test]
    fn derivative_ladder_ground_state() {
        // d/dx φ₀ = −(1/√2) φ₁ in one dimension.
        let basis = BasisTable::build_default(1, 6).unwrap();
        let d = gradient(&basis.spectral_unit(0));
        let expect = synthesize(&basis.spectral_unit(1)).values().to_vec();
        for (a, b) in d[0].values().iter().zip(&expect) {
            assert!((a + b / std::f64::consts::SQRT_2).norm() < 1e-13);
        }
    }

    #[test]
    fn position_ladder_ground_state() {
        // x·φ₀ = (1/√2) φ₁ in one dimension.
        let basis = BasisTable::build_default(1, 6).unwrap();
        let xf = position_product(&basis.spectral_unit(0), 0);
        let expect = synthesize(&basis.spectral_unit(1));
        for (a, b) in xf.values().iter().zip(expect.values()) {
            assert!((a - b / std::f64::consts::SQRT_2).norm() < 1e-13);
        }
    }

    #[test]
    fn gradient_of_zero_is_zero() {
        let basis = BasisTable::build_default(2, 5).unwrap();
        for g in gradient(&basis.spectral_zero()) {
            assert_eq!(g.max_abs(), 0.0);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let basis = BasisTable::build_default(2, 8).unwrap();
        let m = basis.quad_points();
        let f = random_field(&basis, 3);
        let grads = gradient(&f);
        // centered differences of the evaluated expansion at interior nodes
        for &(gi, gj) in &[
            (m / 2, m / 2),
            (m / 2 - 2, m / 2 + 3),
            (m / 2 + 1, m / 2 - 4),
        ] {
            let pt = vec![basis.nodes()[gi], basis.nodes()[gj]];
            for axis in 0..2 {
                let ladder = grads[axis].values()[gi * m + gj];
                let mut errs = Vec::new();
                for &h in &[2e-3, 1e-3] {
                    let mut hi = pt.clone();
                    let mut lo = pt.clone();
                    hi[axis] += h;
                    lo[axis] -= h;
                    let v = f.eval_at(&[hi, lo]);
                    let fd = (v[0] - v[1]) / (2.0 * h);
                    errs.push((fd - ladder).norm());
                }
                assert!(errs[0] < 1e-4, "node ({gi},{gj}) axis {axis}: {}", errs[0]);
                // halving h divides the error by ~4
                assert!(
                    errs[1] < errs[0] / 2.5 || errs[1] < 1e-11,
                    "O(h²): {} then {}",
                    errs[0],
                    errs[1]
                );
            }
        }
    }

    #[test]
    fn weight_on_zero_field() {
        let basis = BasisTable::build_default(2, 5).unwrap();
        let w = apply_weight(&basis.spectral_zero(), 1.0);
        assert_eq!(w.max_abs(), 0.0);
    }

    #[test]
    fn scaled_node_synthesis_matches_eval() {
        let basis = BasisTable::build_default(2, 6).unwrap();
        let f = random_field(&basis, 11);
        let scale = 0.8;
        let g = synthesize_at_scaled_nodes(&f, scale);
        let m = basis.quad_points();
        for &(i, jj) in &[(0usize, 3usize), (4, 9), (7, 1)] {
            let pt = vec![scale * basis.nodes()[i], scale * basis.nodes()[jj]];
            let direct = f.eval_at(&[pt])[0];
            assert!((g.values()[i * m + jj] - direct).norm() < 1e-11);
        }
    }
}
