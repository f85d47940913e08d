//! Euclidean suborbits: building `Z_p^α` witnesses for finite point sets.
//!
//! The building blocks are the two-point orbit (a regular simplex with the
//! cyclic action), products of witnesses, arcs of consecutive p-gon points,
//! grid approximations and bricks. [`embed_simplex`] combines them into a
//! witness for an arbitrary affinely independent configuration.
//!
//! Distances are squared throughout the LPs: a cut `S` with weight `s`
//! contributes `s` to `D(i,j)` whenever exactly one of `i, j` lies in `S`.

use std::collections::HashSet;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    sq_dist, squared_distances, unit_chord_sq, PointConfiguration, SquaredDistanceMatrix,
};
use crate::lp::{solve_feasibility, LpOptions};
use crate::primes::{is_prime, next_prime, primes_up_to};
use crate::witness::{compose, rotation_torus_witness, verify_witness, ClaimFrame, GroupWitness};

/// Largest point count accepted by [`brick_embed`].
pub const MAX_BRICK_POINTS: usize = 8;

/// Distance tolerance every returned embedding is checked against.
pub const EMBED_TOL: f64 = 1e-7;

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{p} is not a prime")))
    }
}

/// Orthonormal basis of the sum-zero hyperplane of `R^n` (Helmert
/// contrasts), as the columns of an `n × (n-1)` matrix.
pub(crate) fn helmert(n: usize) -> DMatrix<f64> {
    let mut q = DMatrix::zeros(n, n.saturating_sub(1));
    for k in 1..n {
        let kf = k as f64;
        let norm = (kf * (kf + 1.0)).sqrt();
        for i in 0..k {
            q[(i, k - 1)] = 1.0 / norm;
        }
        q[(k, k - 1)] = -kf / norm;
    }
    q
}

/// The pair `{0, t}` as two vertices of a regular `(p-1)`-simplex of side
/// `t`, acted on by cyclic permutation of the vertices.
///
/// The simplex lives in the sum-zero hyperplane of `R^p`, written in the
/// Helmert basis, so the witness has ambient dimension `p - 1` and center 0.
/// Label `"0"` is vertex 0 and label `"1"` (at distance `t`) is vertex 1.
pub fn two_point_orbit(p: u64, t: f64) -> Result<GroupWitness> {
    require_prime(p)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "side length must be positive, got {t}"
        )));
    }
    let n = p as usize;
    let q = helmert(n);
    let mut perm = DMatrix::zeros(n, n);
    for i in 0..n {
        perm[((i + 1) % n, i)] = 1.0;
    }
    let g = q.transpose() * perm * &q;
    let scale = t / 2f64.sqrt();
    let vertex = |k: usize| -> Vec<f64> { q.row(k).iter().map(|v| v * scale).collect() };
    let base = DVector::from_vec(vertex(0));
    let claimed =
        PointConfiguration::new(vec![vertex(0), vertex(1)], vec!["0".into(), "1".into()])?;
    Ok(GroupWitness {
        p,
        generators: vec![g],
        center: DVector::zeros(n - 1),
        base,
        words: vec![vec![0], vec![1]],
        claimed,
        frame: ClaimFrame::Ambient,
    })
}

/// The pair `{0, t}` as two adjacent vertices of a regular p-gon in the plane.
/// Same group as [`two_point_orbit`] in two dimensions.
pub(crate) fn chord_pair_witness(p: u64, t: f64) -> Result<GroupWitness> {
    let r = t / (2.0 * (PI / p as f64).sin());
    rotation_torus_witness(
        p,
        &[r],
        &[],
        vec![vec![0], vec![1]],
        vec!["0".into(), "1".into()],
        false,
    )
}

fn pair_label(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// Product of two witnesses with the componentwise action.
///
/// Without a selection the claim is the full Cartesian product, labeled
/// `"(a,b)"` in row-major order. A selection keeps only the listed pairs.
pub fn product_witness(
    a: &GroupWitness,
    b: &GroupWitness,
    selection: Option<&[(String, String)]>,
) -> Result<GroupWitness> {
    if a.p != b.p {
        return Err(Error::InvalidInput(format!(
            "mismatched primes {} and {}",
            a.p, b.p
        )));
    }
    let pairs: Vec<(String, String)> = match selection {
        Some(s) => s.to_vec(),
        None => a
            .claimed
            .labels()
            .iter()
            .flat_map(|la| {
                b.claimed
                    .labels()
                    .iter()
                    .map(move |lb| (la.clone(), lb.clone()))
            })
            .collect(),
    };
    let picks: Vec<(String, Vec<String>)> = pairs
        .into_iter()
        .map(|(la, lb)| (pair_label(&la, &lb), vec![la, lb]))
        .collect();
    compose(&[a, b], &picks)
}

/// `m` consecutive vertices of a regular p-gon scaled to a given step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcPointSet {
    pub p: u64,
    pub indices: Vec<u64>,
    pub radius: f64,
    /// Length of the chord between neighbours.
    pub scale: f64,
    pub config: PointConfiguration,
    /// `max |dist(b_i, b_j) - |i-j| * scale|`.
    pub max_deviation: f64,
}

impl ArcPointSet {
    /// Expected distance between `b_i` and `b_j`.
    pub fn chord(&self, i: u64, j: u64) -> f64 {
        let k = i.abs_diff(j) as f64;
        let p = self.p as f64;
        (PI * k / p).sin() / (PI / p).sin() * self.scale
    }

    pub fn witness(&self) -> Result<GroupWitness> {
        rotation_torus_witness(
            self.p,
            &[self.radius],
            &[],
            self.indices.iter().map(|&i| vec![i]).collect(),
            self.config.labels().to_vec(),
            false,
        )
    }
}

pub fn consecutive_arc_points(p: u64, m: usize, step_length: f64) -> Result<ArcPointSet> {
    require_prime(p)?;
    if m == 0 || m as u64 > p {
        return Err(Error::InvalidInput(format!(
            "need 1 <= m <= p, got m = {m}, p = {p}"
        )));
    }
    if !(step_length > 0.0 && step_length.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "step length must be positive, got {step_length}"
        )));
    }
    let radius = step_length / (2.0 * (PI / p as f64).sin());
    let points: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / p as f64;
            vec![radius * a.cos(), radius * a.sin()]
        })
        .collect();
    let config = PointConfiguration::indexed(points)?;
    let mut max_deviation = 0.0_f64;
    for i in 0..m {
        for j in i + 1..m {
            let d = sq_dist(config.point(i), config.point(j)).sqrt();
            max_deviation = max_deviation.max((d - (j - i) as f64 * step_length).abs());
        }
    }
    Ok(ArcPointSet {
        p,
        indices: (0..m as u64).collect(),
        radius,
        scale: step_length,
        config,
        max_deviation,
    })
}

/// Result of [`grid_approximation`].
#[derive(Debug, Clone)]
pub struct GridApproximation {
    pub approximant: PointConfiguration,
    pub witness: GroupWitness,
    /// Grid resolution: coordinates are rounded to multiples of `extent / s`.
    pub s: u64,
    /// `max |‖a_i - a_j‖ - ‖x_i - x_j‖|` over pairs.
    pub distortion: f64,
}

fn distortion(a: &[Vec<f64>], b: &PointConfiguration) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let da = sq_dist(&a[i], &a[j]).sqrt();
            let db = sq_dist(b.point(i), b.point(j)).sqrt();
            worst = worst.max((da - db).abs());
        }
    }
    worst
}

/// Approximates `target` by a suborbit of `Z_p^k` built from one arc per
/// coordinate.
///
/// Coordinates are rounded onto the grid `lo + (extent / s) Z` and grid index
/// `n` along a coordinate is sent to arc point `n` of a p-gon whose
/// neighbouring chord is `extent / s`. The smallest `s` whose pairwise
/// distance distortion is at most `delta` is used.
pub fn grid_approximation(
    target: &PointConfiguration,
    delta: f64,
    p: u64,
) -> Result<GridApproximation> {
    require_prime(p)?;
    if !(delta > 0.0) {
        return Err(Error::InvalidInput(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let k = target.dim();
    let m = target.len();
    let lo: Vec<f64> = (0..k)
        .map(|c| {
            target
                .points()
                .iter()
                .map(|x| x[c])
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let extent = (0..k)
        .map(|c| {
            target
                .points()
                .iter()
                .map(|x| x[c] - lo[c])
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    let labels = target.labels().to_vec();

    if extent == 0.0 {
        let witness = rotation_torus_witness(p, &[], &[0.0], vec![vec![]; m], labels, false)?;
        return Ok(GridApproximation {
            approximant: witness.claimed.clone(),
            witness,
            s: 0,
            distortion: 0.0,
        });
    }

    let s_max = (p - 1).min(1 << 16);
    let mut best = f64::INFINITY;
    for s in 1..=s_max {
        let idx: Vec<Vec<u64>> = target
            .points()
            .iter()
            .map(|x| {
                (0..k)
                    .map(|c| ((x[c] - lo[c]) / extent * s as f64).round() as u64)
                    .collect()
            })
            .collect();
        let radius = extent / s as f64 / (2.0 * (PI / p as f64).sin());
        let pts: Vec<Vec<f64>> = idx
            .iter()
            .map(|w| {
                w.iter()
                    .flat_map(|&n| {
                        let a = 2.0 * PI * n as f64 / p as f64;
                        [radius * a.cos(), radius * a.sin()]
                    })
                    .collect()
            })
            .collect();
        let d = distortion(&pts, target);
        best = best.min(d);
        if d <= delta {
            let witness = rotation_torus_witness(p, &vec![radius; k], &[], idx, labels, false)?;
            return Ok(GridApproximation {
                approximant: witness.claimed.clone(),
                witness,
                s,
                distortion: d,
            });
        }
    }
    Err(Error::infeasible(
        "grid",
        p,
        format!("best distortion {best:.3e} exceeds delta {delta:.3e}"),
    ))
}

/// One cut of a [`CutDecomposition`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    /// Indices on the reported side (the smaller one, ties broken by not
    /// containing the last index).
    pub set: Vec<usize>,
    pub weight: f64,
}

/// Nonnegative combination of cut semimetrics, i.e. a brick embedding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutDecomposition {
    pub m: usize,
    pub cuts: Vec<Cut>,
}

impl CutDecomposition {
    pub fn reconstruct(&self) -> SquaredDistanceMatrix {
        let mut d = DMatrix::zeros(self.m, self.m);
        for cut in &self.cuts {
            for i in 0..self.m {
                for j in 0..self.m {
                    if cut.set.contains(&i) != cut.set.contains(&j) {
                        d[(i, j)] += cut.weight;
                    }
                }
            }
        }
        SquaredDistanceMatrix::from_matrix(d).expect("cut sums are symmetric and nonnegative")
    }

    /// Brick vertex of point `i`: coordinate `c` is `sqrt(s_c)` if `i` is on
    /// the reported side of cut `c`, else 0.
    pub fn brick_points(&self) -> Vec<Vec<f64>> {
        (0..self.m)
            .map(|i| {
                self.cuts
                    .iter()
                    .map(|c| {
                        if c.set.contains(&i) {
                            c.weight.sqrt()
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Cut masks on `m` points with the last point outside, smallest sides first.
fn cut_masks(m: usize) -> Vec<u32> {
    let full = (1u32 << m) - 1;
    let mut masks: Vec<u32> = (1..1u32 << (m - 1)).collect();
    let side = |s: u32| s.count_ones().min((full ^ s).count_ones());
    masks.sort_by_key(|&s| (side(s), s));
    masks
}

fn mask_side(mask: u32, m: usize) -> Vec<usize> {
    let full = (1u32 << m) - 1;
    let other = full ^ mask;
    let pick = if other.count_ones() < mask.count_ones() {
        other
    } else {
        mask
    };
    (0..m).filter(|&i| pick >> i & 1 == 1).collect()
}

fn pair_rows(m: usize) -> Vec<(usize, usize)> {
    (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect()
}

/// Decomposes `target` into cut semimetrics by LP feasibility.
pub fn brick_embed(target: &SquaredDistanceMatrix) -> Result<CutDecomposition> {
    let m = target.size();
    if m > MAX_BRICK_POINTS {
        return Err(Error::InvalidInput(format!(
            "brick embedding supports at most {MAX_BRICK_POINTS} points, got {m}"
        )));
    }
    if m == 1 {
        return Ok(CutDecomposition { m, cuts: vec![] });
    }
    let rows = pair_rows(m);
    let masks = cut_masks(m);
    let columns: Vec<Vec<f64>> = masks
        .iter()
        .map(|&s| {
            rows.iter()
                .map(|&(i, j)| f64::from(((s >> i) ^ (s >> j)) & 1))
                .collect()
        })
        .collect();
    let rhs: Vec<f64> = rows.iter().map(|&(i, j)| target.get(i, j)).collect();
    let sol = solve_feasibility(&columns, &rhs, &LpOptions::default());
    if !sol.feasible {
        return Err(Error::infeasible(
            "brick",
            0,
            format!(
                "not in the cut cone (phase-one residual {:.3e})",
                sol.infeasibility
            ),
        ));
    }
    let cuts: Vec<Cut> = masks
        .iter()
        .zip(&sol.x)
        .filter(|(_, &w)| w >= 1e-12)
        .map(|(&s, &w)| Cut {
            set: mask_side(s, m),
            weight: w,
        })
        .collect();
    let dec = CutDecomposition { m, cuts };
    let err = dec.reconstruct().max_abs_diff(target);
    if err > 1e-9 {
        return Err(Error::infeasible(
            "brick",
            0,
            format!("reconstruction error {err:.3e}"),
        ));
    }
    Ok(dec)
}

fn trivial_witness(p: u64, labels: Vec<String>) -> Result<GroupWitness> {
    let m = labels.len();
    rotation_torus_witness(p, &[], &[0.0], vec![vec![]; m], labels, false)
}

fn index_labels(m: usize) -> Vec<String> {
    (0..m).map(|i| i.to_string()).collect()
}

/// Product of one [`two_point_orbit`] per cut; point `i` takes vertex `"1"`
/// of every cut whose reported side contains it.
pub fn brick_witness(c: &CutDecomposition, p: u64) -> Result<GroupWitness> {
    require_prime(p)?;
    if c.cuts.is_empty() {
        return trivial_witness(p, index_labels(c.m));
    }
    let factors = c
        .cuts
        .iter()
        .map(|cut| two_point_orbit(p, cut.weight.sqrt()))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&GroupWitness> = factors.iter().collect();
    let picks: Vec<(String, Vec<String>)> = (0..c.m)
        .map(|i| {
            let parts = c
                .cuts
                .iter()
                .map(|cut| {
                    if cut.set.contains(&i) {
                        "1".to_string()
                    } else {
                        "0".to_string()
                    }
                })
                .collect();
            (i.to_string(), parts)
        })
        .collect();
    compose(&refs, &picks)
}

/// Apex angle at the middle of three consecutive p-gon vertices.
pub fn consecutive_apex_angle(p: u64) -> f64 {
    let pts: Vec<[f64; 2]> = (0..3)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / p as f64;
            [a.cos(), a.sin()]
        })
        .collect();
    let u = [pts[0][0] - pts[1][0], pts[0][1] - pts[1][1]];
    let v = [pts[2][0] - pts[1][0], pts[2][1] - pts[1][1]];
    let cos = (u[0] * v[0] + u[1] * v[1]) / (u[0].hypot(u[1]) * v[0].hypot(v[1]));
    cos.clamp(-1.0, 1.0).acos()
}

/// Result of [`isosceles_with_apex_angle`].
#[derive(Debug, Clone)]
pub struct IsoscelesWitness {
    pub witness: GroupWitness,
    /// Length of the `{0, t}` factor.
    pub t: f64,
    /// Measured apex angle of the realized triangle.
    pub apex_angle: f64,
    /// Apex angle of three consecutive p-gon vertices (the `t = 0` limit).
    pub max_angle: f64,
}

fn apex_angle(config: &PointConfiguration) -> f64 {
    let a = config.point_by_label("A").unwrap();
    let b = config.point_by_label("B").unwrap();
    let c = config.point_by_label("C").unwrap();
    let u: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let v: Vec<f64> = c.iter().zip(a).map(|(x, y)| x - y).collect();
    let dot: f64 = u.iter().zip(&v).map(|(x, y)| x * y).sum();
    let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (dot / (nu * nv)).clamp(-1.0, 1.0).acos()
}

/// Isosceles triangle `A, B, C` (apex `A`) with apex angle `alpha`, as a
/// suborbit of `Z_p^2`: three consecutive unit p-gon vertices times the pair
/// `{0, t}`, with `A` lifted to `t`.
pub fn isosceles_with_apex_angle(alpha: f64, p: u64) -> Result<IsoscelesWitness> {
    require_prime(p)?;
    if p < 3 {
        return Err(Error::InvalidInput(
            "three consecutive p-gon vertices need p >= 3".into(),
        ));
    }
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::InvalidInput(format!(
            "apex angle must lie in (0, pi), got {alpha}"
        )));
    }
    let max_angle = consecutive_apex_angle(p);
    if alpha > max_angle + 1e-12 {
        return Err(Error::infeasible(
            "isosceles",
            p,
            format!("alpha {alpha} exceeds the consecutive-vertex angle {max_angle}"),
        ));
    }
    let labels = vec!["B".to_string(), "A".to_string(), "C".to_string()];
    let gon = rotation_torus_witness(
        p,
        &[1.0],
        &[],
        vec![vec![0], vec![1], vec![2]],
        labels.clone(),
        false,
    )?;
    // |B - A|² and (B - A)·(C - A) on the unit p-gon
    let side_sq = unit_chord_sq(1, p);
    let dot = side_sq * max_angle.cos();
    let angle_at = |t: f64| ((dot + t * t) / (side_sq + t * t)).clamp(-1.0, 1.0).acos();

    let t = if alpha >= max_angle {
        0.0
    } else {
        let mut lo = 0.0;
        let mut hi = side_sq.sqrt();
        while angle_at(hi) > alpha {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if angle_at(mid) > alpha {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        0.5 * (lo + hi)
    };

    let witness = if t == 0.0 {
        gon
    } else {
        let pair = chord_pair_witness(p, t)?;
        let picks = vec![
            ("A".to_string(), vec!["A".to_string(), "1".to_string()]),
            ("B".to_string(), vec!["B".to_string(), "0".to_string()]),
            ("C".to_string(), vec!["C".to_string(), "0".to_string()]),
        ];
        compose(&[&gon, &pair], &picks)?
    };
    let apex_angle = apex_angle(&witness.realized_config());
    if (apex_angle - alpha).abs() > 1e-9 && t > 0.0 {
        return Err(Error::infeasible(
            "isosceles",
            p,
            format!("bisection reached angle {apex_angle}, wanted {alpha}"),
        ));
    }
    Ok(IsoscelesWitness {
        witness,
        t,
        apex_angle,
        max_angle,
    })
}

/// How [`embed_simplex`] looks for a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbedStrategy {
    /// Pattern cone seeded with all cuts (covers the brick case).
    #[default]
    Auto,
    /// Cut cone only: succeeds exactly when the target is a brick subset.
    Brick,
    /// Shift by `η`, approximate the rest on a grid, cover the error by a brick.
    GridBrick,
}

#[derive(Debug, Clone, Copy)]
pub struct EmbedOptions {
    pub strategy: EmbedStrategy,
    /// Move to larger primes on failure instead of reporting infeasibility.
    pub escalate: bool,
    /// Rounds of ε halving or prime increase.
    pub max_rounds: usize,
    /// Grid accuracy of the first grid round, relative to `sqrt(η)`.
    pub initial_delta: f64,
    /// Largest pattern count enumerated exactly during pricing.
    pub exhaustive_pricing_limit: u64,
    pub max_columns: usize,
    pub seed: u64,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        EmbedOptions {
            strategy: EmbedStrategy::Auto,
            escalate: false,
            max_rounds: 12,
            initial_delta: 0.05,
            exhaustive_pricing_limit: 4_000_000,
            max_columns: 2_000,
            seed: 42,
        }
    }
}

/// Which construction produced an [`Embedding`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbedMethod {
    Trivial,
    Brick,
    PatternCone,
    GridBrick,
    /// Three consecutive p-gon points times a `{0, t}` pair.
    Isosceles,
}

#[derive(Debug, Clone)]
pub struct Embedding {
    /// Witness whose labeled orbit points are isometric to the target.
    pub witness: GroupWitness,
    pub method: EmbedMethod,
    pub p: u64,
    /// Rotation planes (one generator each).
    pub planes: usize,
    pub max_distance_error: f64,
}

/// `λ_min` of the centered Gram matrix on the sum-zero subspace.
fn simplex_margin(d: &SquaredDistanceMatrix) -> f64 {
    let m = d.size();
    let q = helmert(m);
    let g = q.transpose() * d.centered_gram() * &q;
    SymmetricEigen::new(g)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Coordinates in `R^{m-1}` realizing a squared-distance matrix with a
/// positive definite centered Gram matrix.
pub(crate) fn realize(
    d: &SquaredDistanceMatrix,
    labels: Vec<String>,
) -> Result<PointConfiguration> {
    let m = d.size();
    let q = helmert(m);
    let g = q.transpose() * d.centered_gram() * &q;
    let eig = SymmetricEigen::new(g);
    let mut coords = &q * &eig.eigenvectors;
    for (c, &l) in eig.eigenvalues.iter().enumerate() {
        let s = l.max(0.0).sqrt();
        coords.column_mut(c).scale_mut(s);
    }
    let pts = (0..m)
        .map(|i| coords.row(i).iter().copied().collect())
        .collect();
    PointConfiguration::new(pts, labels)
}

/// A rotation-plane pattern: exponent of each point in one `Z_p` plane.
type Pattern = Vec<u64>;

struct PatternLp<'a> {
    p: u64,
    m: usize,
    rows: Vec<(usize, usize)>,
    chord: Vec<f64>,
    /// `(cos, sin)` of `2πs/p`.
    unit: Vec<(f64, f64)>,
    opts: &'a EmbedOptions,
}

impl PatternLp<'_> {
    fn new(p: u64, m: usize, opts: &EmbedOptions) -> PatternLp<'_> {
        PatternLp {
            p,
            m,
            rows: pair_rows(m),
            chord: (0..p as i64).map(|s| unit_chord_sq(s, p)).collect(),
            unit: (0..p)
                .map(|s| {
                    let t = 2.0 * PI * s as f64 / p as f64;
                    (t.cos(), t.sin())
                })
                .collect(),
            opts,
        }
    }

    fn column(&self, g: &[u64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|&(i, j)| self.chord[((g[j] + self.p - g[i]) % self.p) as usize])
            .collect()
    }

    fn score(&self, y: &[f64], g: &[u64]) -> f64 {
        self.rows
            .iter()
            .zip(y)
            .map(|(&(i, j), w)| w * self.chord[((g[j] + self.p - g[i]) % self.p) as usize])
            .sum()
    }

    /// Patterns enumerated by exhaustive pricing (the last exponent is
    /// solved in closed form).
    fn enumeration_size(&self) -> Option<u64> {
        self.p.checked_pow(self.m.saturating_sub(2) as u32)
    }

    fn exhaustive_allowed(&self) -> bool {
        self.enumeration_size()
            .is_some_and(|n| n <= self.opts.exhaustive_pricing_limit)
    }

    /// Best exponent for slot `k` with the others fixed, given the pair
    /// weights `w[i][k]`. The score in slot `k` is `c - 2 Re(e^{iθ} S)`
    /// for a fixed complex `S`, so the optimum is a grid neighbour of
    /// `arg(-conj(S))`.
    fn best_slot(&self, w: &[Vec<f64>], g: &[u64], k: usize) -> u64 {
        let (mut re, mut im) = (0.0, 0.0);
        for (i, &gi) in g.iter().enumerate() {
            if i != k {
                let (c, s) = self.unit[gi as usize];
                re += w[i][k] * c;
                im -= w[i][k] * s;
            }
        }
        let p = self.p as f64;
        let theta = im.atan2(-re).rem_euclid(2.0 * PI);
        let x = theta * p / (2.0 * PI);
        let lo = (x.floor() as u64) % self.p;
        let hi = (lo + 1) % self.p;
        let value = |e: u64| {
            let (c, s) = self.unit[e as usize];
            -(c * re - s * im)
        };
        if value(hi) > value(lo) {
            hi
        } else {
            lo
        }
    }

    fn pair_weights(&self, y: &[f64]) -> Vec<Vec<f64>> {
        let mut w = vec![vec![0.0; self.m]; self.m];
        for (&(i, j), &v) in self.rows.iter().zip(y) {
            w[i][j] = v;
            w[j][i] = v;
        }
        w
    }

    /// An unseen pattern with positive reduced value `y · column(g)`, or
    /// `None`. Small grids are enumerated outright. Otherwise local search
    /// runs first, around the basic patterns and then from random starts,
    /// and full enumeration only confirms that nothing is left.
    fn price(
        &self,
        y: &[f64],
        round: usize,
        basis: &[&Pattern],
        seen: &HashSet<Pattern>,
    ) -> Option<Pattern> {
        let fresh = |(v, g): (f64, Pattern)| (v > 1e-10 && !seen.contains(&g)).then_some(g);
        if self
            .enumeration_size()
            .is_some_and(|n| n <= CHEAP_ENUMERATION)
        {
            return fresh(self.price_exhaustive(y));
        }
        let w = self.pair_weights(y);
        let mut visited = HashSet::new();
        let near = basis
            .iter()
            .filter(|b| visited.insert((**b).clone()))
            .map(|b| self.local_search(y, &w, b, 1))
            .fold((f64::NEG_INFINITY, vec![]), better);
        if let Some(g) = fresh(near) {
            return Some(g);
        }
        let starts = self.price_heuristic(y, &w, round, HEURISTIC_STARTS, &mut visited);
        if let Some(g) = fresh(starts) {
            return Some(g);
        }
        if self.exhaustive_allowed() {
            return fresh(self.price_exhaustive(y));
        }
        // Last attempt before giving up: wider windows, more starts.
        let wide = basis
            .iter()
            .map(|b| self.local_search(y, &w, b, 2))
            .fold((f64::NEG_INFINITY, vec![]), better);
        if let Some(g) = fresh(wide) {
            return Some(g);
        }
        fresh(self.price_heuristic(y, &w, round | 1 << 32, 8 * HEURISTIC_STARTS, &mut visited))
    }

    fn price_exhaustive(&self, y: &[f64]) -> (f64, Pattern) {
        let m = self.m;
        let p = self.p;
        let w = self.pair_weights(y);
        let free = m.saturating_sub(2);
        let count = p.pow(free as u32);
        let mut best = (f64::NEG_INFINITY, vec![0u64; m]);
        let mut g = vec![0u64; m];
        for code in 0..count {
            let mut c = code;
            for slot in g.iter_mut().skip(1).take(free) {
                *slot = c % p;
                c /= p;
            }
            g[m - 1] = self.best_slot(&w, &g, m - 1);
            let v = self.score(y, &g);
            if v > best.0 {
                best = (v, g.clone());
            }
        }
        best
    }

    /// Local search from continuous local maxima reached from seeded
    /// random starts.
    fn price_heuristic(
        &self,
        y: &[f64],
        w: &[Vec<f64>],
        round: usize,
        starts: usize,
        visited: &mut HashSet<Pattern>,
    ) -> (f64, Pattern) {
        let m = self.m;
        let p = self.p as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(
            self.opts.seed ^ (round as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        let mut best = (f64::NEG_INFINITY, vec![]);
        for _ in 0..starts {
            let mut theta: Vec<f64> = (0..m)
                .map(|i| {
                    if i == 0 {
                        0.0
                    } else {
                        rng.gen_range(0.0..2.0 * PI)
                    }
                })
                .collect();
            for _ in 0..200 {
                let mut moved = 0.0f64;
                for k in 1..m {
                    let (mut re, mut im) = (0.0, 0.0);
                    for (i, t) in theta.iter().enumerate() {
                        if i != k {
                            re += w[i][k] * t.cos();
                            im -= w[i][k] * t.sin();
                        }
                    }
                    if re == 0.0 && im == 0.0 {
                        continue;
                    }
                    let t = im.atan2(-re);
                    let d = (t - theta[k]).sin().abs();
                    moved = moved.max(d);
                    theta[k] = t;
                }
                if moved < 1e-12 {
                    break;
                }
            }
            let base: Pattern = theta
                .iter()
                .map(|t| (t.rem_euclid(2.0 * PI) * p / (2.0 * PI)).round() as u64 % self.p)
                .collect();
            if !visited.insert(base.clone()) {
                continue;
            }
            best = better(best, self.local_search(y, w, &base, 1));
        }
        best
    }

    /// Window search around `base`, then exact coordinate ascent.
    fn local_search(&self, y: &[f64], w: &[Vec<f64>], base: &[u64], radius: u64) -> (f64, Pattern) {
        let (mut v, mut g) = self.window_search(y, base, radius);
        for _ in 0..100 {
            let before = v;
            for k in 1..self.m {
                let keep = g[k];
                g[k] = self.best_slot(w, &g, k);
                let s = self.score(y, &g);
                if s > v {
                    v = s;
                } else {
                    g[k] = keep;
                }
            }
            if v <= before {
                break;
            }
        }
        (v, g)
    }

    /// Best pattern within `±radius` of `base` in every free slot.
    fn window_search(&self, y: &[f64], base: &[u64], radius: u64) -> (f64, Pattern) {
        let m = self.m;
        let p = self.p;
        let side = 2 * radius + 1;
        let count = side.pow(m as u32 - 1);
        let mut g = base.to_vec();
        let mut best = (f64::NEG_INFINITY, g.clone());
        for code in 0..count {
            let mut c = code;
            for k in 1..m {
                let off = c % side;
                c /= side;
                g[k] = (base[k] + p * (radius + 1) + off - radius) % p;
            }
            let v = self.score(y, &g);
            if v > best.0 {
                best = (v, g.clone());
            }
        }
        best
    }
}

const HEURISTIC_STARTS: usize = 64;
const CHEAP_ENUMERATION: u64 = 20_000;

fn better(a: (f64, Pattern), b: (f64, Pattern)) -> (f64, Pattern) {
    if b.0 > a.0 {
        b
    } else {
        a
    }
}

/// Column generation over rotation patterns. Returns `(pattern, weight)`
/// pairs whose weighted chord patterns sum to `d`.
fn pattern_cone(
    d: &SquaredDistanceMatrix,
    p: u64,
    opts: &EmbedOptions,
    generate: bool,
) -> Result<Vec<(Pattern, f64)>> {
    let m = d.size();
    let lp = PatternLp::new(p, m, opts);
    let rhs: Vec<f64> = lp.rows.iter().map(|&(i, j)| d.get(i, j)).collect();
    let mut patterns: Vec<Pattern> = cut_masks(m)
        .into_iter()
        .map(|s| (0..m).map(|i| u64::from(s >> i & 1)).collect())
        .collect();
    let mut seen: HashSet<Pattern> = patterns.iter().cloned().collect();
    let mut columns: Vec<Vec<f64>> = patterns.iter().map(|g| lp.column(g)).collect();
    let stage = if generate { "pattern-cone" } else { "brick" };

    for round in 0.. {
        let sol = solve_feasibility(&columns, &rhs, &LpOptions::default());
        if sol.feasible {
            return Ok(patterns
                .into_iter()
                .zip(sol.x)
                .filter(|(_, w)| *w > 0.0)
                .collect());
        }
        if !generate {
            return Err(Error::infeasible(
                stage,
                p,
                format!("phase-one residual {:.3e}", sol.infeasibility),
            ));
        }
        if columns.len() >= opts.max_columns {
            return Err(Error::infeasible(stage, p, "column budget exhausted"));
        }
        let basis: Vec<&Pattern> = patterns
            .iter()
            .zip(&sol.x)
            .filter(|(_, &x)| x > 0.0)
            .map(|(g, _)| g)
            .collect();
        let Some(g) = lp.price(&sol.duals, round, &basis, &seen) else {
            let how = if lp.exhaustive_allowed() {
                "certified by exhaustive pricing"
            } else {
                "no improving pattern found"
            };
            return Err(Error::infeasible(
                stage,
                p,
                format!(
                    "outside the pattern cone ({how}, phase-one residual {:.3e})",
                    sol.infeasibility
                ),
            ));
        };
        seen.insert(g.clone());
        columns.push(lp.column(&g));
        patterns.push(g);
    }
    unreachable!()
}

/// Witness with one rotation plane per pattern, claiming `target`.
fn planes_witness(
    p: u64,
    planes: &[(Pattern, f64)],
    target: &PointConfiguration,
) -> Result<GroupWitness> {
    let m = target.len();
    if planes.is_empty() {
        return trivial_witness(p, target.labels().to_vec())?.with_claim(target.clone());
    }
    let radii: Vec<f64> = planes.iter().map(|(_, w)| w.sqrt()).collect();
    let words = (0..m)
        .map(|i| planes.iter().map(|(g, _)| g[i]).collect())
        .collect();
    rotation_torus_witness(p, &radii, &[], words, target.labels().to_vec(), false)?
        .with_claim(target.clone())
}

fn finish(witness: GroupWitness, method: EmbedMethod, planes: usize) -> Result<Embedding> {
    let report = verify_witness(&witness, EMBED_TOL)?;
    if !report.pass {
        return Err(Error::infeasible(
            "verify",
            witness.p,
            format!(
                "witness check failed (axioms {:.2e}, distances {:.2e})",
                report.group_axiom_error, report.max_distance_error
            ),
        ));
    }
    Ok(Embedding {
        p: witness.p,
        witness,
        method,
        planes,
        max_distance_error: report.max_distance_error,
    })
}

/// Builds a `Z_p^α` witness whose labeled orbit points are isometric to
/// `target`. The claim of the returned witness is `target` itself.
pub fn embed_simplex(
    target: &PointConfiguration,
    p: u64,
    opts: &EmbedOptions,
) -> Result<Embedding> {
    require_prime(p)?;
    let m = target.len();
    if m == 1 {
        let w = trivial_witness(p, target.labels().to_vec())?.with_claim(target.clone())?;
        return finish(w, EmbedMethod::Trivial, 0);
    }
    let d = squared_distances(target);
    let margin = simplex_margin(&d);
    if !(margin > 1e-9) {
        return Err(Error::Degenerate(format!(
            "points are affinely dependent (smallest Gram eigenvalue {margin:.3e})"
        )));
    }
    if m > MAX_BRICK_POINTS && opts.strategy != EmbedStrategy::Auto {
        return Err(Error::InvalidInput(format!(
            "at most {MAX_BRICK_POINTS} points supported"
        )));
    }

    let mut p = p;
    let mut last_err = None;
    for _ in 0..opts.max_rounds.max(1) {
        let attempt = match opts.strategy {
            EmbedStrategy::Brick => pattern_cone(&d, p, opts, false).and_then(|planes| {
                finish(
                    planes_witness(p, &planes, target)?,
                    EmbedMethod::Brick,
                    planes.len(),
                )
            }),
            EmbedStrategy::Auto => pattern_cone(&d, p, opts, false)
                .and_then(|planes| {
                    finish(
                        planes_witness(p, &planes, target)?,
                        EmbedMethod::Brick,
                        planes.len(),
                    )
                })
                .or_else(|_| {
                    pattern_cone(&d, p, opts, true).and_then(|planes| {
                        finish(
                            planes_witness(p, &planes, target)?,
                            EmbedMethod::PatternCone,
                            planes.len(),
                        )
                    })
                }),
            EmbedStrategy::GridBrick => return grid_brick(target, &d, margin, p, opts),
        };
        match attempt {
            Ok(e) => return Ok(e),
            Err(e @ Error::Infeasible { .. }) if opts.escalate => {
                last_err = Some(e);
                p = next_prime(p);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one round ran"))
}

/// Shift / grid / brick pipeline.
///
/// With `η = λ_min` of the centered Gram matrix, `D - η(J - I)` is still a
/// simplex matrix (its centered Gram drops uniformly by `η/2`). The shifted
/// simplex is approximated on a grid; the leftover `η(J - I) - e` is close to
/// a regular simplex and is covered by cuts, each realized as a p-gon chord.
fn grid_brick(
    target: &PointConfiguration,
    d: &SquaredDistanceMatrix,
    margin: f64,
    p: u64,
    opts: &EmbedOptions,
) -> Result<Embedding> {
    let m = target.len();
    let eta = margin;
    let shifted_m = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            0.0
        } else {
            (d.get(i, j) - eta).max(0.0)
        }
    });
    let shifted = SquaredDistanceMatrix::from_matrix((&shifted_m + shifted_m.transpose()) * 0.5)?;
    let labels = target.labels().to_vec();
    let inner = realize(&shifted, labels)?;

    let mut p = p;
    let mut delta = opts.initial_delta * eta.sqrt();
    let mut last_err = None;
    for _ in 0..opts.max_rounds.max(1) {
        let grid = match grid_approximation(&inner, delta, p) {
            Ok(g) => g,
            Err(e @ Error::Infeasible { .. }) => {
                if !opts.escalate {
                    return Err(e);
                }
                last_err = Some(e);
                p = next_prime(2 * p);
                continue;
            }
            Err(e) => return Err(e),
        };
        let a = squared_distances(&grid.approximant);
        let rest = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                0.0
            } else {
                d.get(i, j) - a.get(i, j)
            }
        });
        if rest.iter().any(|&v| v < 0.0) {
            last_err = Some(Error::infeasible(
                "brick",
                p,
                "grid error exceeds the shift",
            ));
            delta *= 0.5;
            continue;
        }
        let rest = SquaredDistanceMatrix::from_matrix((&rest + rest.transpose()) * 0.5)?;
        match brick_embed(&rest) {
            Ok(cuts) => {
                let planes: Vec<(Pattern, f64)> = cuts
                    .cuts
                    .iter()
                    .map(|c| {
                        let g = (0..m).map(|i| u64::from(c.set.contains(&i))).collect();
                        (g, c.weight / unit_chord_sq(1, p))
                    })
                    .collect();
                let brick = planes_witness(p, &planes, &grid.approximant)?;
                let brick = GroupWitness {
                    claimed: brick.realized_config(),
                    frame: ClaimFrame::Ambient,
                    ..brick
                };
                let picks: Vec<(String, Vec<String>)> = target
                    .labels()
                    .iter()
                    .map(|l| (l.clone(), vec![l.clone(), l.clone()]))
                    .collect();
                let joined =
                    compose(&[&grid.witness, &brick], &picks)?.with_claim(target.clone())?;
                return finish(joined, EmbedMethod::GridBrick, planes.len() + inner.dim());
            }
            Err(e @ Error::Infeasible { .. }) => {
                last_err = Some(Error::infeasible("brick", p, e.to_string()));
                delta *= 0.5;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one round ran"))
}

/// Smallest prime `p <= p_max` for which [`embed_simplex`] succeeds without
/// escalation.
pub fn min_prime_for(
    target: &PointConfiguration,
    p_max: u64,
    opts: &EmbedOptions,
) -> Result<Embedding> {
    let opts = EmbedOptions {
        escalate: false,
        ..*opts
    };
    for p in primes_up_to(p_max) {
        match embed_simplex(target, p, &opts) {
            Ok(e) => return Ok(e),
            Err(Error::Infeasible { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Exhausted { p_max })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(len: f64) -> PointConfiguration {
        PointConfiguration::indexed(vec![vec![0.0], vec![len]]).unwrap()
    }

    #[test]
    fn closed_form_pricing_matches_enumeration() {
        let opts = EmbedOptions::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, m) in [(5, 3), (7, 4), (11, 4), (13, 5), (2, 5), (3, 2)] {
            let lp = PatternLp::new(p, m, &opts);
            for _ in 0..20 {
                let y: Vec<f64> = lp.rows.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
                let mut naive = f64::NEG_INFINITY;
                let mut g = vec![0u64; m];
                for code in 0..p.pow(m as u32 - 1) {
                    let mut c = code;
                    for slot in g.iter_mut().skip(1) {
                        *slot = c % p;
                        c /= p;
                    }
                    naive = naive.max(lp.score(&y, &g));
                }
                let (v, g) = lp.price_exhaustive(&y);
                assert!((v - naive).abs() < 1e-12, "p={p} m={m}: {v} vs {naive}");
                assert!((lp.score(&y, &g) - v).abs() < 1e-15);
                let (h, _) =
                    lp.price_heuristic(&y, &lp.pair_weights(&y), 0, 64, &mut HashSet::new());
                assert!(h <= v + 1e-12);
            }
        }
    }

    #[test]
    fn helmert_is_orthonormal() {
        let q = helmert(6);
        assert!((q.transpose() * &q - DMatrix::identity(5, 5)).amax() < 1e-15);
        assert!((q.transpose() * DVector::from_element(6, 1.0)).amax() < 1e-15);
    }

    #[test]
    fn two_point_orbit_examples() {
        let w = two_point_orbit(2, 1.0).unwrap();
        assert_eq!(w.dim(), 1);
        assert!((w.claimed.point(0)[0] - 0.5).abs() < 1e-15);
        assert!((w.claimed.point(1)[0] + 0.5).abs() < 1e-15);
        for (p, t) in [(3, 1.0), (5, 2.0), (7, 0.3)] {
            let w = two_point_orbit(p, t).unwrap();
            assert!(verify_witness(&w, 1e-10).unwrap().pass);
            let orbit: Vec<_> = (0..p).map(|k| w.orbit_point(&[k])).collect();
            for i in 0..orbit.len() {
                for j in i + 1..orbit.len() {
                    assert!(((&orbit[i] - &orbit[j]).norm() - t).abs() < 1e-12);
                }
            }
        }
        assert!(two_point_orbit(4, 1.0).is_err());
    }

    #[test]
    fn products() {
        let a = two_point_orbit(2, 1.0).unwrap();
        let sq = product_witness(&a, &a, None).unwrap();
        assert_eq!(sq.claimed.len(), 4);
        let d = squared_distances(&sq.claimed);
        let i = sq.claimed.index_of("(0,0)").unwrap();
        let j = sq.claimed.index_of("(1,1)").unwrap();
        assert!((d.get(i, j) - 2.0).abs() < 1e-14);
        assert!(verify_witness(&sq, 1e-12).unwrap().pass);

        let rect = product_witness(
            &two_point_orbit(3, 1.0).unwrap(),
            &two_point_orbit(3, 2.0).unwrap(),
            None,
        )
        .unwrap();
        assert!(verify_witness(&rect, 1e-10).unwrap().pass);
        let sel = [
            ("0".to_string(), "0".to_string()),
            ("1".to_string(), "1".to_string()),
        ];
        let diag = product_witness(
            &two_point_orbit(3, 1.0).unwrap(),
            &two_point_orbit(3, 2.0).unwrap(),
            Some(&sel),
        )
        .unwrap();
        assert!((squared_distances(&diag.claimed).get(0, 1) - 5.0).abs() < 1e-12);

        let b = two_point_orbit(5, 1.0).unwrap();
        assert!(product_witness(&a, &b, None).is_err());
    }

    #[test]
    fn arcs() {
        let a = consecutive_arc_points(7, 2, 0.3).unwrap();
        assert!(a.max_deviation < 1e-15);
        let a = consecutive_arc_points(13, 3, 1.0).unwrap();
        let d = sq_dist(a.config.point(0), a.config.point(2)).sqrt();
        assert!((d - a.chord(0, 2)).abs() < 1e-12);
        let w = a.witness().unwrap();
        assert!(verify_witness(&w, 1e-12).unwrap().pass);
        assert!(consecutive_arc_points(5, 6, 1.0).is_err());
    }

    #[test]
    fn brick_examples() {
        let reg = SquaredDistanceMatrix::from_upper(4, &[1.0; 6]).unwrap();
        let dec = brick_embed(&reg).unwrap();
        assert!(dec.reconstruct().max_abs_diff(&reg) < 1e-12);
        assert_eq!(dec.cuts.len(), 4);
        for c in &dec.cuts {
            assert_eq!(c.set.len(), 1);
            assert!((c.weight - 0.5).abs() < 1e-12);
        }
        let s = brick_embed(&SquaredDistanceMatrix::from_upper(2, &[4.0]).unwrap()).unwrap();
        assert_eq!(
            s.cuts,
            vec![Cut {
                set: vec![0],
                weight: 4.0
            }]
        );
        let bump = SquaredDistanceMatrix::from_upper(4, &[1.02, 1.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(
            brick_embed(&bump)
                .unwrap()
                .reconstruct()
                .max_abs_diff(&bump)
                < 1e-9
        );
        // a collinear triple is not a cut metric in squared distances
        let line = SquaredDistanceMatrix::from_upper(3, &[1.0, 4.0, 1.0]).unwrap();
        assert!(matches!(brick_embed(&line), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn brick_witnesses() {
        let reg = SquaredDistanceMatrix::from_upper(4, &[1.0; 6]).unwrap();
        let dec = brick_embed(&reg).unwrap();
        for p in [2, 3] {
            let w = brick_witness(&dec, p).unwrap();
            assert_eq!(w.rank(), 4);
            assert!(verify_witness(&w, 1e-10).unwrap().pass);
            assert!(squared_distances(&w.realized_config()).max_abs_diff(&reg) < 1e-12);
        }
    }

    #[test]
    fn hexagon_apex_angle() {
        assert!((consecutive_apex_angle(6) - 2.0 * PI / 3.0).abs() < 1e-12);
        let iso = isosceles_with_apex_angle(2.0 * PI / 3.0, 7).unwrap();
        assert!(iso.t > 0.0);
        assert!((iso.apex_angle - 2.0 * PI / 3.0).abs() < 1e-9);
        assert!(verify_witness(&iso.witness, 1e-9).unwrap().pass);
        let right = isosceles_with_apex_angle(PI / 2.0, 101).unwrap();
        assert!((right.apex_angle - PI / 2.0).abs() < 1e-9);
        let top = isosceles_with_apex_angle(consecutive_apex_angle(11), 11).unwrap();
        assert_eq!(top.t, 0.0);
        assert!(isosceles_with_apex_angle(2.9, 5).is_err());
    }

    #[test]
    fn grid_examples() {
        let sq = PointConfiguration::indexed(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ])
        .unwrap();
        let g = grid_approximation(&sq, 0.1, 101).unwrap();
        assert_eq!(g.s, 1);
        assert!(g.distortion < 1e-12);
        assert!(verify_witness(&g.witness, 1e-12).unwrap().pass);

        let one = PointConfiguration::indexed(vec![vec![3.0]]).unwrap();
        assert_eq!(grid_approximation(&one, 1e-3, 2).unwrap().distortion, 0.0);

        let tri =
            PointConfiguration::indexed(vec![vec![0.0, 0.0], vec![0.37, 0.0], vec![0.1, 0.93]])
                .unwrap();
        let g = grid_approximation(&tri, 1e-2, 1009).unwrap();
        assert!(g.distortion <= 1e-2);
        assert!(matches!(
            grid_approximation(&tri, 1e-6, 5),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn simplex_embeddings() {
        let e = embed_simplex(&seg(1.0), 2, &EmbedOptions::default()).unwrap();
        assert_eq!(e.method, EmbedMethod::Brick);

        let reg = PointConfiguration::indexed(vec![
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        let e = embed_simplex(&reg, 2, &EmbedOptions::default()).unwrap();
        assert_eq!(e.method, EmbedMethod::Brick);
        assert!(e.max_distance_error < 1e-12);

        let thin =
            PointConfiguration::indexed(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.9, 0.3]])
                .unwrap();
        let e = min_prime_for(&thin, 200, &EmbedOptions::default()).unwrap();
        assert!(e.max_distance_error < EMBED_TOL);

        let line = PointConfiguration::indexed(vec![vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        assert!(matches!(
            embed_simplex(&line, 5, &EmbedOptions::default()),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn grid_brick_pipeline() {
        let right =
            PointConfiguration::indexed(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]])
                .unwrap();
        let opts = EmbedOptions {
            strategy: EmbedStrategy::GridBrick,
            escalate: true,
            max_rounds: 40,
            ..EmbedOptions::default()
        };
        let e = embed_simplex(&right, 101, &opts).unwrap();
        assert_eq!(e.method, EmbedMethod::GridBrick);
        assert!(e.max_distance_error < EMBED_TOL);
    }
}
