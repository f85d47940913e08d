//! Linear dependence of circle triples and the determinant certificate.
//!
//! Three distinct points `A, B, C` on the unit circle satisfy a unique (up to
//! scale) relation `aA + bB + cC = 0`. If the triple is a suborbit with
//! `B = GA` and `C = HA` for orthogonal `G, H`, then `(aI + bG + cH)A = 0`
//! and therefore `det(aI + bG + cH) = 0`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::{is_prime, primes_up_to};

/// Acceptance band for a vanishing certificate.
pub const CERTIFICATE_TOL: f64 = 1e-9;

const COINCIDENT_TOL: f64 = 1e-12;
const CIRCLE_TOL: f64 = 1e-9;

/// Unit-norm `(a, b, c)` with the first nonzero coordinate positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DependenceParameters {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl DependenceParameters {
    pub fn as_array(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// `|aA + bB + cC|` for the given points.
    pub fn relation_residual(&self, a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
        let x = self.a * a[0] + self.b * b[0] + self.c * c[0];
        let y = self.a * a[1] + self.b * b[1] + self.c * c[1];
        x.hypot(y)
    }
}

/// Kernel of the `2 × 3` matrix `[A B C]`.
///
/// The kernel of a rank-two `2 × 3` matrix is spanned by the cross product of
/// its rows, which is also its smallest right singular vector.
pub fn dependence_parameters(
    a: [f64; 2],
    b: [f64; 2],
    c: [f64; 2],
) -> Result<DependenceParameters> {
    for (name, p) in [("A", a), ("B", b), ("C", c)] {
        let r = p[0].hypot(p[1]);
        if (r - 1.0).abs() > CIRCLE_TOL {
            return Err(Error::InvalidInput(format!(
                "{name} is not on the unit circle (|{name}| = {r})"
            )));
        }
    }
    let dist = |p: [f64; 2], q: [f64; 2]| (p[0] - q[0]).hypot(p[1] - q[1]);
    if dist(a, b) < COINCIDENT_TOL || dist(b, c) < COINCIDENT_TOL || dist(a, c) < COINCIDENT_TOL {
        return Err(Error::CoincidentPoints("two of A, B, C coincide".into()));
    }
    let xs = Vector3::new(a[0], b[0], c[0]);
    let ys = Vector3::new(a[1], b[1], c[1]);
    let mut k = xs.cross(&ys);
    k /= k.norm();
    let lead = k.iter().copied().find(|v| v.abs() > 1e-14).unwrap_or(1.0);
    if lead < 0.0 {
        k = -k;
    }
    Ok(DependenceParameters {
        a: k[0],
        b: k[1],
        c: k[2],
    })
}

/// Two `N × N` orthogonal matrices with `B = GA`, `C = HA`.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationPair {
    g: DMatrix<f64>,
    h: DMatrix<f64>,
}

impl RepresentationPair {
    pub fn new(g: DMatrix<f64>, h: DMatrix<f64>) -> Result<Self> {
        let n = g.nrows();
        if n == 0 || g.ncols() != n || h.nrows() != n || h.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "G is {}x{} and H is {}x{}",
                g.nrows(),
                g.ncols(),
                h.nrows(),
                h.ncols()
            )));
        }
        let id = DMatrix::<f64>::identity(n, n);
        for (name, m) in [("G", &g), ("H", &h)] {
            let err = (m.transpose() * m - &id).amax();
            if err > 1e-10 {
                return Err(Error::InvalidInput(format!(
                    "{name} is not orthogonal (error {err:.3e})"
                )));
            }
        }
        Ok(RepresentationPair { g, h })
    }

    /// `G = R(2πj/p)`, `H = R(2πk/p)` repeated on `blocks` diagonal blocks.
    pub fn cyclic(p: u64, j: u64, k: u64, blocks: usize) -> Result<Self> {
        if p == 0 || blocks == 0 {
            return Err(Error::InvalidInput(
                "need p ≥ 1 and at least one block".into(),
            ));
        }
        let g = block_rotation(2.0 * PI * (j % p) as f64 / p as f64, blocks);
        let h = block_rotation(2.0 * PI * (k % p) as f64 / p as f64, blocks);
        RepresentationPair::new(g, h)
    }

    pub fn n(&self) -> usize {
        self.g.nrows()
    }

    pub fn g(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn h(&self) -> &DMatrix<f64> {
        &self.h
    }
}

/// Block-diagonal matrix with `blocks` copies of the plane rotation by `angle`.
pub fn block_rotation(angle: f64, blocks: usize) -> DMatrix<f64> {
    let (s, c) = angle.sin_cos();
    let mut m = DMatrix::zeros(2 * blocks, 2 * blocks);
    for b in 0..blocks {
        let o = 2 * b;
        m[(o, o)] = c;
        m[(o, o + 1)] = -s;
        m[(o + 1, o)] = s;
        m[(o + 1, o + 1)] = c;
    }
    m
}

/// `det(aI + bG + cH)` for an arbitrary (not necessarily normalized) triple.
pub fn certificate_residual(params: [f64; 3], rep: &RepresentationPair) -> f64 {
    let n = rep.n();
    let [a, b, c] = params;
    let m = DMatrix::<f64>::identity(n, n) * a + rep.g() * b + rep.h() * c;
    m.determinant()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarnessResult {
    pub p: u64,
    pub steps: (u64, u64),
    pub n: usize,
    pub params: DependenceParameters,
    pub residual: f64,
}

impl HarnessResult {
    pub fn pass(&self) -> bool {
        self.residual.abs() < CERTIFICATE_TOL
    }
}

/// Builds the orbit triple `A, R(2πj/p)A, R(2πk/p)A` with `A = (1, 0)`, takes
/// its dependence parameters and evaluates the certificate on the block
/// representation of size `2·blocks`.
pub fn orbit_triple_harness(p: u64, steps: (u64, u64), blocks: usize) -> Result<HarnessResult> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let (j, k) = (steps.0 % p, steps.1 % p);
    if j == 0 || k == 0 || j == k {
        return Err(Error::RepeatedIndices(format!(
            "0, {j}, {k} are not distinct in Z_{p}"
        )));
    }
    let point = |s: u64| {
        let t = 2.0 * PI * s as f64 / p as f64;
        [t.cos(), t.sin()]
    };
    let params = dependence_parameters(point(0), point(j), point(k))?;
    let rep = RepresentationPair::cyclic(p, j, k, blocks)?;
    Ok(HarnessResult {
        p,
        steps: (j, k),
        n: rep.n(),
        params,
        residual: certificate_residual(params.as_array(), &rep),
    })
}

/// Every prime `3 ≤ p ≤ p_max` and every ordered pair of distinct nonzero
/// steps, in that order.
pub fn harness_sweep(p_max: u64, blocks: usize) -> Result<Vec<HarnessResult>> {
    let cases: Vec<(u64, u64, u64)> = primes_up_to(p_max)
        .into_iter()
        .filter(|&p| p >= 3)
        .flat_map(|p| {
            (1..p).flat_map(move |j| (1..p).filter(move |&k| k != j).map(move |k| (p, j, k)))
        })
        .collect();
    cases
        .into_par_iter()
        .map(|(p, j, k)| orbit_triple_harness(p, (j, k), blocks))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub samples: usize,
    /// Minimum, 10%, 50%, 90% quantiles and maximum of `|residual|` over
    /// uniformly random circle triples.
    pub generic_quantiles: [f64; 5],
    pub generic_below_tol: usize,
    /// Random rotations of the triple the representation was built from.
    pub controls: usize,
    pub control_max: f64,
}

/// Certificate residuals for random circle triples against the `p = 3`
/// rotation pair `G = R(120°)`, `H = R(240°)`.
///
/// Only triples that are rotated copies of the equilateral triangle vanish;
/// they are sampled separately as controls.
pub fn separation_demo(samples: usize, seed: u64) -> Result<SeparationReport> {
    let rep = RepresentationPair::cyclic(3, 1, 2, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let on_circle = |t: f64| [t.cos(), t.sin()];
    let mut generic = Vec::with_capacity(samples);
    while generic.len() < samples {
        let t: [f64; 3] = [
            rng.gen_range(0.0..2.0 * PI),
            rng.gen_range(0.0..2.0 * PI),
            rng.gen_range(0.0..2.0 * PI),
        ];
        match dependence_parameters(on_circle(t[0]), on_circle(t[1]), on_circle(t[2])) {
            Ok(params) => generic.push(certificate_residual(params.as_array(), &rep).abs()),
            Err(Error::CoincidentPoints(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let controls = (samples / 100).max(1);
    let mut control_max: f64 = 0.0;
    for _ in 0..controls {
        let t0 = rng.gen_range(0.0..2.0 * PI);
        let third = 2.0 * PI / 3.0;
        let params = dependence_parameters(
            on_circle(t0),
            on_circle(t0 + third),
            on_circle(t0 + 2.0 * third),
        )?;
        control_max = control_max.max(certificate_residual(params.as_array(), &rep).abs());
    }
    let generic_below_tol = generic.iter().filter(|&&v| v < CERTIFICATE_TOL).count();
    generic.sort_by(f64::total_cmp);
    let q = |f: f64| generic[((generic.len() - 1) as f64 * f).round() as usize];
    Ok(SeparationReport {
        samples,
        generic_quantiles: [q(0.0), q(0.1), q(0.5), q(0.9), q(1.0)],
        generic_below_tol,
        controls,
        control_max,
    })
}
