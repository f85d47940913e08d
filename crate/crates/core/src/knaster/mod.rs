//! Searching for placements of a point set on which a test map is constant.
//!
//! A point set `X ⊂ R^k` is placed in `R^n` by an orthonormal `k`-frame `F`.
//! The spread `Φ(F) = Σ_x ‖f(Fx) - μ‖²` (with `μ` the mean image) vanishes
//! exactly when `f` is constant on the placed copy. Each restart runs
//! Riemannian gradient descent on the Stiefel manifold followed by a
//! Levenberg–Marquardt polish in tangent coordinates; restarts run in
//! parallel and the best `(Φ, restart)` wins.

mod expr;
mod frame;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euclid::{embed_simplex, EmbedOptions};
use crate::geometry::PointConfiguration;
use crate::witness::{verify_witness, GroupWitness};

pub use expr::{parse_expr, Expr};
pub use frame::{Frame, FRAME_TOL};

/// A map `R^n → R^d` from a small evaluable family.
#[derive(Debug, Clone, PartialEq)]
pub enum TestMap {
    /// `x ↦ A x` with `A` of size `d × n`.
    Linear(DMatrix<f64>),
    /// `x ↦ (xᵀ Q_1 x, ..., xᵀ Q_d x)` with symmetric `Q_l`.
    Quadratic(Vec<DMatrix<f64>>),
    Expression {
        exprs: Vec<Expr>,
        n: usize,
    },
}

impl TestMap {
    pub fn linear(a: DMatrix<f64>) -> Result<Self> {
        if a.nrows() == 0 || a.ncols() == 0 {
            return Err(Error::DimensionMismatch(
                "linear map needs a nonempty matrix".into(),
            ));
        }
        Ok(TestMap::Linear(a))
    }

    /// Symmetrizes each matrix.
    pub fn quadratic(qs: Vec<DMatrix<f64>>) -> Result<Self> {
        let n = qs.first().map(|q| q.nrows()).unwrap_or(0);
        if n == 0 || qs.iter().any(|q| q.nrows() != n || q.ncols() != n) {
            return Err(Error::DimensionMismatch(
                "quadratic map needs square matrices of one size".into(),
            ));
        }
        Ok(TestMap::Quadratic(
            qs.into_iter().map(|q| (&q + q.transpose()) * 0.5).collect(),
        ))
    }

    pub fn d(&self) -> usize {
        match self {
            TestMap::Linear(a) => a.nrows(),
            TestMap::Quadratic(qs) => qs.len(),
            TestMap::Expression { exprs, .. } => exprs.len(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            TestMap::Linear(a) => a.ncols(),
            TestMap::Quadratic(qs) => qs[0].nrows(),
            TestMap::Expression { n, .. } => *n,
        }
    }

    /// Expression maps can be re-read on any `R^n` that holds all their
    /// variables; matrix maps keep their size.
    pub fn with_dim(&self, n: usize) -> Result<TestMap> {
        match self {
            TestMap::Expression { exprs, .. } => {
                let need = exprs.iter().map(Expr::arity).max().unwrap_or(0);
                if need > n {
                    return Err(Error::DimensionMismatch(format!(
                        "expression uses x{need} but n = {n}"
                    )));
                }
                Ok(TestMap::Expression {
                    exprs: exprs.clone(),
                    n,
                })
            }
            _ if self.n() == n => Ok(self.clone()),
            _ => Err(Error::DimensionMismatch(format!(
                "map is defined on R^{}, not R^{n}",
                self.n()
            ))),
        }
    }

    /// Smallest domain dimension the map can be read on.
    pub fn min_dim(&self) -> usize {
        match self {
            TestMap::Expression { exprs, .. } => {
                exprs.iter().map(Expr::arity).max().unwrap_or(0).max(1)
            }
            _ => self.n(),
        }
    }

    /// Whether the domain dimension can be chosen freely.
    pub fn is_resizable(&self) -> bool {
        matches!(self, TestMap::Expression { .. })
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        match self {
            TestMap::Linear(a) => (a * DVector::from_column_slice(x))
                .iter()
                .copied()
                .collect(),
            TestMap::Quadratic(qs) => {
                let v = DVector::from_column_slice(x);
                qs.iter().map(|q| v.dot(&(q * &v))).collect()
            }
            TestMap::Expression { exprs, .. } => exprs.iter().map(|e| e.eval(x)).collect(),
        }
    }

    /// Value and `d × n` Jacobian.
    pub fn eval_jacobian(&self, x: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
        match self {
            TestMap::Linear(a) => (self.eval(x), a.clone()),
            TestMap::Quadratic(qs) => {
                let v = DVector::from_column_slice(x);
                let mut jac = DMatrix::zeros(qs.len(), x.len());
                let mut val = Vec::with_capacity(qs.len());
                for (l, q) in qs.iter().enumerate() {
                    let qv = q * &v;
                    val.push(v.dot(&qv));
                    jac.row_mut(l).copy_from(&(qv * 2.0).transpose());
                }
                (val, jac)
            }
            TestMap::Expression { exprs, .. } => {
                let mut jac = DMatrix::zeros(exprs.len(), x.len());
                let mut val = Vec::with_capacity(exprs.len());
                for (l, e) in exprs.iter().enumerate() {
                    let (v, g) = e.eval_grad(x);
                    val.push(v);
                    for (c, gc) in g.into_iter().enumerate() {
                        jac[(l, c)] = gc;
                    }
                }
                (val, jac)
            }
        }
    }

    /// Central-difference Jacobian.
    pub fn jacobian_fd(&self, x: &[f64], h: f64) -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(self.d(), x.len());
        let mut xp = x.to_vec();
        for c in 0..x.len() {
            xp[c] = x[c] + h;
            let fp = self.eval(&xp);
            xp[c] = x[c] - h;
            let fm = self.eval(&xp);
            xp[c] = x[c];
            for l in 0..self.d() {
                jac[(l, c)] = (fp[l] - fm[l]) / (2.0 * h);
            }
        }
        jac
    }

    /// `s · f`.
    pub fn scaled(&self, s: f64) -> TestMap {
        match self {
            TestMap::Linear(a) => TestMap::Linear(a * s),
            TestMap::Quadratic(qs) => TestMap::Quadratic(qs.iter().map(|q| q * s).collect()),
            TestMap::Expression { exprs, n } => TestMap::Expression {
                exprs: exprs
                    .iter()
                    .map(|e| Expr::Mul(Box::new(Expr::Num(s)), Box::new(e.clone())))
                    .collect(),
                n: *n,
            },
        }
    }
}

/// Parses one expression per line or `;`-separated item as a map on `R^n`.
pub fn parse_test_map(text: &str, n: usize) -> Result<TestMap> {
    let mut exprs = Vec::new();
    let mut offset = 0;
    for item in text.split([';', '\n']) {
        if !item.trim().is_empty() {
            let e = parse_expr(item).map_err(|err| match err {
                Error::Syntax { position, message } => Error::Syntax {
                    position: position + offset,
                    message,
                },
                Error::UnknownIdentifier { name, position } => Error::UnknownIdentifier {
                    name,
                    position: position + offset,
                },
                other => other,
            })?;
            exprs.push(e);
        }
        offset += item.len() + 1;
    }
    if exprs.is_empty() {
        return Err(Error::Syntax {
            position: 0,
            message: "no expressions".into(),
        });
    }
    TestMap::Expression { exprs, n: 0 }.with_dim(n)
}

/// [`parse_test_map`] on the smallest `R^n` holding every variable used.
pub fn parse_test_map_minimal(text: &str) -> Result<TestMap> {
    let f = parse_test_map(text, usize::MAX)?;
    f.with_dim(f.min_dim())
}

fn check_dims(frame: &Frame, x: &PointConfiguration, f: &TestMap) -> Result<()> {
    if frame.k() != x.dim() {
        return Err(Error::DimensionMismatch(format!(
            "frame has {} columns but points live in R^{}",
            frame.k(),
            x.dim()
        )));
    }
    if frame.n() != f.n() {
        return Err(Error::DimensionMismatch(format!(
            "frame lives in R^{} but the map is defined on R^{}",
            frame.n(),
            f.n()
        )));
    }
    Ok(())
}

/// `Σ_x ‖f(Fx) - μ‖²`.
pub fn spread_objective(frame: &Frame, x: &PointConfiguration, f: &TestMap) -> Result<f64> {
    check_dims(frame, x, f)?;
    let pts: Vec<DVector<f64>> = x
        .points()
        .iter()
        .map(|p| DVector::from_column_slice(p))
        .collect();
    Ok(Objective { pts: &pts, f }.value(frame.matrix()).0)
}

struct Objective<'a> {
    pts: &'a [DVector<f64>],
    f: &'a TestMap,
}

impl Objective<'_> {
    /// `(Φ, centered residuals)`.
    fn value(&self, frame: &DMatrix<f64>) -> (f64, Vec<Vec<f64>>) {
        let images: Vec<Vec<f64>> = self
            .pts
            .iter()
            .map(|p| self.f.eval((frame * p).as_slice()))
            .collect();
        centered(images)
    }

    /// `(Φ, residuals, Jacobians of f at each placed point)`.
    fn with_jacobians(&self, frame: &DMatrix<f64>) -> (f64, Vec<Vec<f64>>, Vec<DMatrix<f64>>) {
        let (images, jacs): (Vec<_>, Vec<_>) = self
            .pts
            .iter()
            .map(|p| self.f.eval_jacobian((frame * p).as_slice()))
            .unzip();
        let (phi, r) = centered(images);
        (phi, r, jacs)
    }

    /// Euclidean gradient `2 Σ J_xᵀ r_x xᵀ`; the mean drops out because the
    /// residuals sum to zero.
    fn gradient(&self, frame: &DMatrix<f64>) -> (f64, DMatrix<f64>) {
        let (phi, r, jacs) = self.with_jacobians(frame);
        let mut g = DMatrix::zeros(frame.nrows(), frame.ncols());
        for ((p, rx), j) in self.pts.iter().zip(&r).zip(&jacs) {
            let jr = j.transpose() * DVector::from_column_slice(rx);
            g += jr * p.transpose() * 2.0;
        }
        (phi, g)
    }
}

fn centered(images: Vec<Vec<f64>>) -> (f64, Vec<Vec<f64>>) {
    let m = images.len() as f64;
    let d = images.first().map_or(0, Vec::len);
    let mut mu = vec![0.0; d];
    for im in &images {
        for (a, v) in mu.iter_mut().zip(im) {
            *a += v / m;
        }
    }
    let r: Vec<Vec<f64>> = images
        .into_iter()
        .map(|im| im.iter().zip(&mu).map(|(v, a)| v - a).collect())
        .collect();
    let phi = r.iter().flatten().map(|v| v * v).sum();
    (phi, r)
}

/// Riemannian gradient of `Φ` at a frame (for checks and diagnostics).
pub fn spread_gradient(frame: &Frame, x: &PointConfiguration, f: &TestMap) -> Result<DMatrix<f64>> {
    check_dims(frame, x, f)?;
    let pts: Vec<DVector<f64>> = x
        .points()
        .iter()
        .map(|p| DVector::from_column_slice(p))
        .collect();
    let (_, g) = Objective { pts: &pts, f }.gradient(frame.matrix());
    Ok(frame.project(&g))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Success threshold on `Φ`.
    pub tol: f64,
    pub seed: u64,
    /// Levenberg–Marquardt iterations after gradient descent (0 disables).
    pub polish_iterations: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            restarts: 64,
            max_iterations: 500,
            tol: 1e-8,
            seed: 42,
            polish_iterations: 100,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub frame: Frame,
    pub phi: f64,
    pub success: bool,
    pub restarts: usize,
    /// Index of the winning restart.
    pub best_restart: usize,
    /// Iterations (descent plus polish) of the winning restart.
    pub iterations: usize,
    pub seed: u64,
    pub labels: Vec<String>,
    /// `f(F x)` per labeled point.
    pub images: Vec<Vec<f64>>,
    pub n: usize,
    /// `d(q - 1) + k` for the witness group of order `q`.
    pub bound: usize,
    pub warnings: Vec<String>,
}

struct RestartResult {
    phi: f64,
    frame: DMatrix<f64>,
    iterations: usize,
}

fn descend(obj: &Objective, start: Frame, opts: &SearchOptions) -> RestartResult {
    let mut f = start;
    let (mut phi, _) = obj.value(f.matrix());
    let floor = phi * 1e-32;
    let mut step = 0.1;
    let mut iterations = 0;
    for _ in 0..opts.max_iterations {
        if phi <= floor || phi == 0.0 {
            break;
        }
        iterations += 1;
        let (_, g) = obj.gradient(f.matrix());
        let rg = f.project(&g);
        let gn = rg.norm();
        if gn == 0.0 || !gn.is_finite() {
            break;
        }
        let dir = rg / gn;
        let mut accepted = false;
        for _ in 0..60 {
            let cand = f.retract(&(&dir * -step));
            let (pc, _) = obj.value(cand.matrix());
            if pc <= phi - 1e-4 * step * gn {
                f = cand;
                phi = pc;
                accepted = true;
                step = (step * 2.0).min(1.0);
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        debug_assert!(f.orthonormality_error() < 1e-10);
    }
    let (frame, phi, extra) = polish(obj, f, phi, floor, opts.polish_iterations);
    RestartResult {
        phi,
        frame,
        iterations: iterations + extra,
    }
}

/// Levenberg–Marquardt in tangent coordinates `F(E_ab - E_ba)` and `F⊥ E_cb`.
fn polish(
    obj: &Objective,
    mut f: Frame,
    mut phi: f64,
    floor: f64,
    max_iter: usize,
) -> (DMatrix<f64>, f64, usize) {
    let (n, k) = (f.n(), f.k());
    let mut mu = 1e-3;
    let mut iterations = 0;
    for _ in 0..max_iter {
        if phi <= floor || phi == 0.0 {
            break;
        }
        iterations += 1;
        let fm = f.matrix().clone();
        let comp = f.complement();
        let mut basis: Vec<DMatrix<f64>> = Vec::with_capacity(k * (k - 1) / 2 + (n - k) * k);
        for a in 0..k {
            for b in a + 1..k {
                let mut dir = DMatrix::zeros(n, k);
                dir.column_mut(b).copy_from(&fm.column(a));
                let neg = -fm.column(b);
                dir.column_mut(a).copy_from(&neg);
                basis.push(dir);
            }
        }
        for c in 0..n - k {
            for b in 0..k {
                let mut dir = DMatrix::zeros(n, k);
                dir.column_mut(b).copy_from(&comp.column(c));
                basis.push(dir);
            }
        }
        let (_, r, jacs) = obj.with_jacobians(&fm);
        let m = obj.pts.len();
        let d = r.first().map_or(0, Vec::len);
        let mut jm = DMatrix::zeros(m * d, basis.len());
        for (j, b) in basis.iter().enumerate() {
            let mut cols: Vec<DVector<f64>> = obj
                .pts
                .iter()
                .zip(&jacs)
                .map(|(p, jx)| jx * (b * p))
                .collect();
            let mean = cols.iter().fold(DVector::zeros(d), |acc, c| acc + c) / m as f64;
            for (i, c) in cols.iter_mut().enumerate() {
                *c -= &mean;
                jm.view_mut((i * d, j), (d, 1)).copy_from(c);
            }
        }
        let rv = DVector::from_iterator(m * d, r.iter().flatten().copied());
        let a = jm.transpose() * &jm;
        let g = jm.transpose() * &rv;
        let dmax = a.diagonal().max().max(1e-300);
        let mut improved = false;
        while mu < 1e20 {
            let mut damped = a.clone();
            for i in 0..damped.nrows() {
                damped[(i, i)] += mu * (a[(i, i)] + 1e-12 * dmax);
            }
            let Some(delta) = damped.cholesky().map(|c| c.solve(&(-&g))) else {
                mu *= 10.0;
                continue;
            };
            let mut step = DMatrix::zeros(n, k);
            for (b, dlt) in basis.iter().zip(delta.iter()) {
                step += b * *dlt;
            }
            let cand = f.retract(&step);
            let (pc, _) = obj.value(cand.matrix());
            if pc < phi {
                f = cand;
                phi = pc;
                mu = (mu / 3.0).max(1e-12);
                improved = true;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    (f.matrix().clone(), phi, iterations)
}

/// Multi-start minimization of the spread over frames in `V_{n,k}`.
///
/// `witness` must realize `x` (up to isometry); its group order `q` sets
/// the dimension bound `d(q - 1) + k`, below which a warning is recorded.
pub fn search_constant_configuration(
    x: &PointConfiguration,
    witness: &GroupWitness,
    f: &TestMap,
    n: usize,
    opts: &SearchOptions,
) -> Result<SearchReport> {
    let report = verify_witness(&witness.with_claim(x.clone())?, 1e-7)?;
    if !report.pass {
        return Err(Error::InvalidWitness(format!(
            "witness does not realize the points (axioms {:.2e}, distances {:.2e})",
            report.group_axiom_error, report.max_distance_error
        )));
    }
    let k = x.dim();
    if n < k {
        return Err(Error::DimensionMismatch(format!(
            "cannot place points of R^{k} in R^{n}"
        )));
    }
    if f.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "map is defined on R^{}, search runs in R^{n}",
            f.n()
        )));
    }
    let q = witness.group_order().unwrap_or(u64::MAX) as usize;
    let bound = f.d().saturating_mul(q.saturating_sub(1)).saturating_add(k);
    let mut warnings = Vec::new();
    if n < bound {
        warnings.push(format!(
            "n = {n} is below d(q-1)+k = {bound}; a constant placement need not exist"
        ));
    }
    if opts.restarts == 0 {
        return Err(Error::InvalidInput(
            "at least one restart is required".into(),
        ));
    }

    let pts: Vec<DVector<f64>> = x
        .points()
        .iter()
        .map(|p| DVector::from_column_slice(p))
        .collect();
    let obj = Objective { pts: &pts, f };
    let results: Vec<RestartResult> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(r as u64);
            let start = Frame::random(n, k, &mut rng).expect("n >= k checked");
            descend(&obj, start, opts)
        })
        .collect();
    let (best_restart, best) = results
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.phi.total_cmp(&b.1.phi).then(a.0.cmp(&b.0)))
        .expect("at least one restart");
    let frame = Frame::orthonormalize(best.frame.clone());
    let images = pts
        .iter()
        .map(|p| f.eval((frame.matrix() * p).as_slice()))
        .collect();
    let phi = obj.value(frame.matrix()).0;
    Ok(SearchReport {
        success: phi < opts.tol,
        phi,
        frame,
        restarts: opts.restarts,
        best_restart,
        iterations: best.iterations,
        seed: opts.seed,
        labels: x.labels().to_vec(),
        images,
        n,
        bound,
        warnings,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct EuclideanSearchOptions {
    pub search: SearchOptions,
    pub embed: EmbedOptions,
    /// Cap on the search dimension when the map's domain is resizable.
    pub max_dimension: usize,
}

impl Default for EuclideanSearchOptions {
    fn default() -> Self {
        EuclideanSearchOptions {
            search: SearchOptions::default(),
            embed: EmbedOptions {
                escalate: true,
                ..EmbedOptions::default()
            },
            max_dimension: 64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EuclideanReport {
    pub search: SearchReport,
    pub p: u64,
    /// Number of generators of the embedding witness.
    pub rank: usize,
    /// Radius of the orbit sphere around the witness center.
    pub radius: f64,
    /// Dimension of the span of the centered orbit points.
    pub orbit_dim: usize,
    /// Whether `max_dimension` cut the search below the bound.
    pub capped: bool,
    /// The centered orbit points the search placed (in `R^orbit_dim`).
    pub placed: PointConfiguration,
}

/// Embeds `x` as a p-torus suborbit, moves the orbit center to the origin and
/// searches placements of the resulting spherical copy.
pub fn euclidean_search(
    x: &PointConfiguration,
    p: u64,
    f: &TestMap,
    d: usize,
    opts: &EuclideanSearchOptions,
) -> Result<EuclideanReport> {
    if f.d() != d {
        return Err(Error::DimensionMismatch(format!(
            "map has {} components, expected d = {d}",
            f.d()
        )));
    }
    let emb = embed_simplex(x, p, &opts.embed)?;
    let w = &emb.witness;
    let m = x.len();
    let centered = DMatrix::from_fn(w.dim(), m, |r, i| {
        w.orbit_point(&w.words[i])[r] - w.center[r]
    });
    let radius = centered.column(0).norm();
    let svd = centered.clone().svd(true, false);
    let u = svd.u.expect("requested");
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > 1e-10 * smax.max(1e-300))
        .collect();
    let basis = DMatrix::from_columns(
        &keep
            .iter()
            .map(|&i| u.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    let coords = basis.transpose() * &centered;
    let orbit_dim = basis.ncols().max(1);
    let pts: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            if keep.is_empty() {
                vec![0.0]
            } else {
                coords.column(i).iter().copied().collect()
            }
        })
        .collect();
    let placed = PointConfiguration::new(pts, x.labels().to_vec())?;

    let q = w.group_order().unwrap_or(u64::MAX) as usize;
    let bound = d
        .saturating_mul(q.saturating_sub(1))
        .saturating_add(orbit_dim);
    let (map, capped) = if f.is_resizable() {
        let n = bound.min(opts.max_dimension).max(orbit_dim).max(f.n());
        (f.with_dim(n)?, n < bound)
    } else {
        if f.n() < orbit_dim {
            return Err(Error::DimensionMismatch(format!(
                "map on R^{} cannot see an orbit spanning {orbit_dim} dimensions",
                f.n()
            )));
        }
        (f.clone(), false)
    };
    let search = search_constant_configuration(&placed, w, &map, map.n(), &opts.search)?;
    Ok(EuclideanReport {
        search,
        p: emb.p,
        rank: w.rank(),
        radius,
        orbit_dim,
        capped,
        placed,
    })
}
