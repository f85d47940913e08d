//! Distance from a round `S²` to orbits of the torus `T^n` acting on `C^n`.
//!
//! An isometric copy of `S²` in `R^{2n} = C^n` is the image of a linear
//! isometry `λ: R³ → C^n` with complex coordinates `λ_i`. Its squared
//! distance to the orbit `{|z_i| = c_i}` averages to `Σ E(|λ_i(v)| - c_i)²`
//! over `v ∈ S²`, which is at least `Σ Var|λ_i(v)| >= 1/16`.
//!
//! Expectations over `S²` are computed per coordinate in a frame adapted to
//! `λ_i`: with `e_i` spanning its kernel and `σ1 >= σ2` its singular values,
//! `v = t e_i + sqrt(1-t²)(cos φ u_1 + sin φ u_2)` gives
//! `|λ_i(v)| = sqrt(1-t²) sqrt(σ1² cos²φ + σ2² sin²φ)` with `t` uniform on
//! `[-1, 1]` (Archimedes) and `φ` uniform on the circle.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, Matrix2x3, Matrix3, SymmetricEigen, Vector3};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Radii `c_1..c_n` of the orbit `{|z_i| = c_i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusOrbitSpec {
    radii: Vec<f64>,
}

impl TorusOrbitSpec {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if let Some(r) = radii.iter().find(|r| !(**r >= 0.0 && r.is_finite())) {
            return Err(Error::InvalidInput(format!(
                "orbit radius {r} is not a nonnegative real"
            )));
        }
        Ok(TorusOrbitSpec { radii })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

/// `sqrt(Σ (|z_i| - c_i)²)` for `z` given as `(re_1, im_1, re_2, im_2, ...)`.
pub fn dist_to_orbit(z: &[f64], c: &TorusOrbitSpec) -> Result<f64> {
    if z.len() != 2 * c.len() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} real coordinates, orbit needs {}",
            z.len(),
            2 * c.len()
        )));
    }
    Ok(z.chunks(2)
        .zip(c.radii())
        .map(|(w, r)| {
            let d = w[0].hypot(w[1]) - r;
            d * d
        })
        .sum::<f64>()
        .sqrt())
}

/// `∫₀¹ (sqrt(1-t²) - c)² dt = 2/3 + c² - cπ/2`.
pub fn chord_variance_integral(c: f64) -> f64 {
    2.0 / 3.0 + c * c - c * PI / 2.0
}

/// The same integral by `n`-point Gauss–Legendre after `t = sin φ`, which
/// removes the square-root singularity at `t = 1`.
pub fn chord_variance_quadrature(c: f64, n: usize) -> f64 {
    let (x, w) = gauss_legendre(n);
    x.iter()
        .zip(&w)
        .map(|(xi, wi)| {
            let phi = FRAC_PI_2 * 0.5 * (xi + 1.0);
            let d = phi.cos() - c;
            wi * d * d * phi.cos()
        })
        .sum::<f64>()
        * FRAC_PI_2
        * 0.5
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` (Newton on `P_n`).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                z
            } else {
                p1
            };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn sign_fix(mut e: Vector3<f64>) -> Vector3<f64> {
    if let Some(first) = e.iter().find(|v| v.abs() > 1e-14) {
        if *first < 0.0 {
            e = -e;
        }
    }
    e
}

/// Eigen-frame of `BᵀB`, columns ordered by decreasing eigenvalue, with the
/// singular values of `B`.
fn block_frame(block: &Matrix2x3<f64>) -> (Matrix3<f64>, [f64; 2]) {
    let eig = SymmetricEigen::new(block.transpose() * block);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let frame = Matrix3::from_columns(&order.map(|k| eig.eigenvectors.column(k).into_owned()));
    let s = [
        eig.eigenvalues[order[0]].max(0.0).sqrt(),
        eig.eigenvalues[order[1]].max(0.0).sqrt(),
    ];
    (frame, s)
}

/// Unit vector in the kernel of a `2×3` block; first nonzero coordinate
/// positive, `(1, 0, 0)` for the zero block.
pub fn kernel_direction(block: &Matrix2x3<f64>) -> Vector3<f64> {
    if block.amax() == 0.0 {
        return Vector3::x();
    }
    let a: Vector3<f64> = block.row(0).transpose();
    let b: Vector3<f64> = block.row(1).transpose();
    let cross = a.cross(&b);
    let scale = a.norm() * b.norm();
    if cross.norm() > 1e-8 * scale {
        return sign_fix(cross.normalize());
    }
    let (frame, _) = block_frame(block);
    sign_fix(frame.column(2).into_owned())
}

/// `v = t e + sqrt(1-t²) u` with `t` uniform on `[-1, 1]` and `u` uniform on
/// the unit circle orthogonal to `e`.
pub fn archimedes_sample<R: Rng + ?Sized>(e: &Vector3<f64>, rng: &mut R) -> Vector3<f64> {
    let e = e.normalize();
    let helper = if e.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let b1 = (helper - e * e.dot(&helper)).normalize();
    let b2 = e.cross(&b1);
    let t: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
    let r = (1.0 - t * t).max(0.0).sqrt();
    let v = e * t + (b1 * phi.cos() + b2 * phi.sin()) * r;
    v.normalize()
}

/// A `2n × 3` matrix with orthonormal columns, read as `n` blocks `λ_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceIsometry {
    matrix: DMatrix<f64>,
}

impl SubspaceIsometry {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.ncols() != 3 || !matrix.nrows().is_multiple_of(2) || matrix.nrows() < 4 {
            return Err(Error::DimensionMismatch(format!(
                "isometry must be 2n x 3 with n >= 2, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let err = (matrix.transpose() * &matrix - DMatrix::<f64>::identity(3, 3)).amax();
        if err > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "columns are not orthonormal (error {err:.3e})"
            )));
        }
        Ok(SubspaceIsometry { matrix })
    }

    /// Orthonormalized Gaussian matrix (Haar-distributed 3-frame in `R^{2n}`).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(
                "need n >= 2 complex coordinates".into(),
            ));
        }
        let g = DMatrix::from_fn(2 * n, 3, |_, _| rng.sample::<f64, _>(StandardNormal));
        let qr = g.qr();
        let mut q = qr.q();
        let r = qr.r();
        for k in 0..3 {
            if r[(k, k)] < 0.0 {
                q.column_mut(k).neg_mut();
            }
        }
        Self::new(q)
    }

    /// `λ(v) = (v₁ + i v₂, v₃)` in `C²`.
    pub fn plane_and_axis() -> Self {
        let mut m = DMatrix::zeros(4, 3);
        m[(0, 0)] = 1.0;
        m[(1, 1)] = 1.0;
        m[(2, 2)] = 1.0;
        SubspaceIsometry { matrix: m }
    }

    /// `λ_i(v) = v_i` for `i = 1, 2, 3` in `C³`.
    pub fn real_axes() -> Self {
        let mut m = DMatrix::zeros(6, 3);
        for i in 0..3 {
            m[(2 * i, i)] = 1.0;
        }
        SubspaceIsometry { matrix: m }
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn block(&self, i: usize) -> Matrix2x3<f64> {
        Matrix2x3::from_fn(|r, c| self.matrix[(2 * i + r, c)])
    }

    pub fn apply(&self, v: &Vector3<f64>) -> Vec<f64> {
        (&self.matrix * nalgebra::DVector::from_column_slice(v.as_slice()))
            .iter()
            .copied()
            .collect()
    }
}

/// How sphere expectations are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum QuadratureSpec {
    /// Gauss–Legendre in the polar angle times Gauss–Legendre on each
    /// azimuth quadrant (`azimuth` nodes in total).
    ProductGauss {
        polar: usize,
        azimuth: usize,
    },
    MonteCarlo {
        samples: usize,
        seed: u64,
    },
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec::ProductGauss {
            polar: 64,
            azimuth: 256,
        }
    }
}

/// Sphere moments of one coordinate `|λ_i(v)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockMoments {
    /// `E|λ_i(v)|`, also the optimal radius `c_i`.
    pub mean_abs: f64,
    pub mean_sq: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    pub blocks: Vec<BlockMoments>,
    /// `Σ Var|λ_i(v)|`: the least expected squared distance to any orbit.
    pub total: f64,
    /// `Σ E|λ_i(v)|²`, equal to 1 for an isometry.
    pub second_moment_sum: f64,
}

impl VarianceReport {
    /// Orbit with the optimal radii `c_i = E|λ_i(v)|`.
    pub fn optimal_orbit(&self) -> TorusOrbitSpec {
        TorusOrbitSpec {
            radii: self.blocks.iter().map(|b| b.mean_abs).collect(),
        }
    }
}

fn product_moments(s: [f64; 2], polar: usize, azimuth: usize) -> (f64, f64) {
    let (tx, tw) = gauss_legendre(polar);
    let per_quadrant = (azimuth / 4).max(1);
    let (ax, aw) = gauss_legendre(per_quadrant);
    // E over t of sqrt(1-t²)^k with t = cos θ: ½ ∫₀^π sin^{k+1} θ dθ
    let mut e_r = 0.0;
    let mut e_r2 = 0.0;
    for (x, w) in tx.iter().zip(&tw) {
        let theta = FRAC_PI_2 * (x + 1.0);
        let st = theta.sin();
        let wt = 0.5 * w * FRAC_PI_2 * st;
        e_r += wt * st;
        e_r2 += wt * st * st;
    }
    let mut e_h = 0.0;
    let mut e_h2 = 0.0;
    for q in 0..4 {
        for (x, w) in ax.iter().zip(&aw) {
            let phi = q as f64 * FRAC_PI_2 + FRAC_PI_2 * 0.5 * (x + 1.0);
            let (sp, cp) = phi.sin_cos();
            let h2 = s[0] * s[0] * cp * cp + s[1] * s[1] * sp * sp;
            let wphi = w * 0.25 * 0.5;
            e_h += wphi * h2.sqrt();
            e_h2 += wphi * h2;
        }
    }
    (e_r * e_h, e_r2 * e_h2)
}

/// Per-coordinate moments of `|λ_i(v)|` for `v` uniform on `S²`.
pub fn component_variance_report(lambda: &SubspaceIsometry, q: &QuadratureSpec) -> VarianceReport {
    let n = lambda.n();
    let moments: Vec<(f64, f64)> = match *q {
        QuadratureSpec::ProductGauss { polar, azimuth } => (0..n)
            .map(|i| {
                let (_, s) = block_frame(&lambda.block(i));
                product_moments(s, polar, azimuth)
            })
            .collect(),
        QuadratureSpec::MonteCarlo { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut acc = vec![(0.0, 0.0); n];
            for _ in 0..samples {
                let v = uniform_sphere(&mut rng);
                let z = lambda.apply(&v);
                for (i, a) in acc.iter_mut().enumerate() {
                    let r2 = z[2 * i] * z[2 * i] + z[2 * i + 1] * z[2 * i + 1];
                    a.0 += r2.sqrt();
                    a.1 += r2;
                }
            }
            let k = samples.max(1) as f64;
            acc.into_iter().map(|(a, b)| (a / k, b / k)).collect()
        }
    };
    let blocks: Vec<BlockMoments> = moments
        .into_iter()
        .map(|(m1, m2)| BlockMoments {
            mean_abs: m1,
            mean_sq: m2,
            variance: (m2 - m1 * m1).max(0.0),
        })
        .collect();
    VarianceReport {
        total: blocks.iter().map(|b| b.variance).sum(),
        second_moment_sum: blocks.iter().map(|b| b.mean_sq).sum(),
        blocks,
    }
}

/// Direct uniform sampling on `S²` (normalized Gaussian).
pub fn uniform_sphere<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// Result of [`far_point`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FarPoint {
    pub v: [f64; 3],
    pub distance: f64,
}

fn sq_dist_at(lambda: &SubspaceIsometry, c: &TorusOrbitSpec, v: &Vector3<f64>) -> f64 {
    let d = dist_to_orbit(&lambda.apply(v), c).expect("dimensions checked by caller");
    d * d
}

fn grad_at(lambda: &SubspaceIsometry, c: &TorusOrbitSpec, v: &Vector3<f64>) -> Vector3<f64> {
    let mut g = Vector3::zeros();
    for (i, r) in c.radii().iter().enumerate() {
        let b = lambda.block(i);
        let z = b * v;
        let nz = z.norm();
        if nz > 1e-15 {
            g += b.transpose() * z * (2.0 * (nz - r) / nz);
        }
    }
    g - v * v.dot(&g)
}

/// Vertices of an icosahedron subdivided `level` times, on the unit sphere.
pub fn icosphere(level: usize) -> Vec<Vector3<f64>> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<Vector3<f64>> = [
        (-1.0, phi, 0.0),
        (1.0, phi, 0.0),
        (-1.0, -phi, 0.0),
        (1.0, -phi, 0.0),
        (0.0, -1.0, phi),
        (0.0, 1.0, phi),
        (0.0, -1.0, -phi),
        (0.0, 1.0, -phi),
        (phi, 0.0, -1.0),
        (phi, 0.0, 1.0),
        (-phi, 0.0, -1.0),
        (-phi, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vector3::new(x, y, z).normalize())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut mid = std::collections::HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        for f in &faces {
            let mut m = [0usize; 3];
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                m[k] = *mid.entry(key).or_insert_with(|| {
                    verts.push((verts[a] + verts[b]).normalize());
                    verts.len() - 1
                });
            }
            next.push([f[0], m[0], m[2]]);
            next.push([f[1], m[1], m[0]]);
            next.push([f[2], m[2], m[1]]);
            next.push([m[0], m[1], m[2]]);
        }
        faces = next;
    }
    verts
}

/// A point of the image sphere far from the orbit `c`: best vertex of a
/// level-3 icosphere, then projected gradient ascent with step halving.
pub fn far_point(lambda: &SubspaceIsometry, c: &TorusOrbitSpec) -> Result<FarPoint> {
    if c.len() != lambda.n() {
        return Err(Error::DimensionMismatch(format!(
            "orbit has {} radii for {} coordinates",
            c.len(),
            lambda.n()
        )));
    }
    let grid = icosphere(3);
    let mut v = grid[0];
    let mut f = f64::NEG_INFINITY;
    for g in &grid {
        let val = sq_dist_at(lambda, c, g);
        if val > f {
            f = val;
            v = *g;
        }
    }
    let mut step = 0.1;
    for _ in 0..200 {
        let g = grad_at(lambda, c, &v);
        if g.norm() < 1e-14 {
            break;
        }
        let mut moved = false;
        while step > 1e-14 {
            let cand = (v + g * (step / g.norm())).normalize();
            let val = sq_dist_at(lambda, c, &cand);
            if val > f {
                v = cand;
                f = val;
                moved = true;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    Ok(FarPoint {
        v: [v.x, v.y, v.z],
        distance: f.sqrt(),
    })
}

/// Summary of repeated variance checks on random isometries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapSummary {
    pub n: usize,
    pub trials: usize,
    pub min_total: f64,
    pub max_second_moment_error: f64,
    pub min_far_distance: f64,
    pub pass: bool,
}

/// Draws `trials` random isometries into `C^n` and records the smallest
/// total variance and the smallest far-point distance to the optimal orbit.
pub fn torus_gap_trials(
    n: usize,
    trials: usize,
    seed: u64,
    q: &QuadratureSpec,
) -> Result<GapSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_total = f64::INFINITY;
    let mut max_err: f64 = 0.0;
    let mut min_far = f64::INFINITY;
    for _ in 0..trials {
        let lambda = SubspaceIsometry::random(n, &mut rng)?;
        let rep = component_variance_report(&lambda, q);
        min_total = min_total.min(rep.total);
        max_err = max_err.max((rep.second_moment_sum - 1.0).abs());
        min_far = min_far.min(far_point(&lambda, &rep.optimal_orbit())?.distance);
    }
    Ok(GapSummary {
        n,
        trials,
        min_total,
        max_second_moment_error: max_err,
        min_far_distance: min_far,
        pass: min_total >= 1.0 / 16.0 - 1e-6 && min_far >= 0.25 - 1e-6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_distance_examples() {
        let c = TorusOrbitSpec::new(vec![1.0]).unwrap();
        assert_eq!(dist_to_orbit(&[1.0, 0.0], &c).unwrap(), 0.0);
        let c = TorusOrbitSpec::new(vec![0.6, 0.8]).unwrap();
        let a: f64 = 1.234;
        let z = [
            0.6 * a.cos(),
            0.6 * a.sin(),
            -0.8 * 0.3f64.cos(),
            0.8 * 0.3f64.sin(),
        ];
        assert!(dist_to_orbit(&z, &c).unwrap() < 1e-15);
        let c = TorusOrbitSpec::new(vec![0.0, 1.0]).unwrap();
        assert!((dist_to_orbit(&[1.0, 0.0, 0.0, 0.0], &c).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(dist_to_orbit(&[1.0], &c).is_err());
    }

    #[test]
    fn chord_variance_values() {
        assert!((chord_variance_integral(0.0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((chord_variance_integral(PI / 4.0) - 0.0498164).abs() < 1e-7);
        assert!((chord_variance_integral(1.0) - 0.0958704).abs() < 1e-7);
        for c in [0.0, 0.3, PI / 4.0, 1.0, 3.7] {
            assert!((chord_variance_quadrature(c, 32) - chord_variance_integral(c)).abs() < 1e-13);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let i: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((i - 2.0 / 19.0).abs() < 1e-14);
        let (x, w) = gauss_legendre(1);
        assert_eq!((x[0], w[0]), (0.0, 2.0));
    }

    #[test]
    fn kernel_examples() {
        let b = Matrix2x3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0);
        assert_eq!(kernel_direction(&b), Vector3::z());
        assert_eq!(kernel_direction(&Matrix2x3::zeros()), Vector3::x());
        let b = Matrix2x3::new(0.3, -1.2, 0.5, 2.0, 0.1, -0.7);
        let e = kernel_direction(&b);
        assert!((b * e).norm() < 1e-12);
        assert!((e.norm() - 1.0).abs() < 1e-15);
        let rank_one = Matrix2x3::new(1.0, 2.0, 0.0, 2.0, 4.0, 0.0);
        assert!((rank_one * kernel_direction(&rank_one)).norm() < 1e-12);
    }

    #[test]
    fn closed_form_reports() {
        let q = QuadratureSpec::default();
        let rep = component_variance_report(&SubspaceIsometry::plane_and_axis(), &q);
        assert!((rep.blocks[0].variance - (2.0 / 3.0 - PI * PI / 16.0)).abs() < 1e-12);
        assert!((rep.blocks[1].variance - 1.0 / 12.0).abs() < 1e-12);
        assert!((rep.total - 0.13315).abs() < 1e-5);
        let rep = component_variance_report(&SubspaceIsometry::real_axes(), &q);
        for b in &rep.blocks {
            assert!((b.variance - 1.0 / 12.0).abs() < 1e-12);
        }
        assert!((rep.total - 0.25).abs() < 1e-12);
        assert!((rep.second_moment_sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn far_point_examples() {
        let lambda = SubspaceIsometry::plane_and_axis();
        let rep = component_variance_report(&lambda, &QuadratureSpec::default());
        assert!(far_point(&lambda, &rep.optimal_orbit()).unwrap().distance >= 0.25);
        let zero = TorusOrbitSpec::new(vec![0.0, 0.0]).unwrap();
        assert!((far_point(&lambda, &zero).unwrap().distance - 1.0).abs() < 1e-12);
    }

    #[test]
    fn icosphere_counts() {
        assert_eq!(icosphere(0).len(), 12);
        assert_eq!(icosphere(3).len(), 642);
    }
}
