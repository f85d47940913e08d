//! Labeled point configurations and their distance data.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Norm tolerance for configurations flagged as lying on the unit sphere.
pub const UNIT_SPHERE_TOL: f64 = 1e-9;

/// Minimum-eigenvalue threshold for the PSD verdict on unit Gram matrices.
pub const PSD_TOL: f64 = 1e-9;

/// A finite labeled point set in `R^N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointConfiguration {
    points: Vec<Vec<f64>>,
    labels: Vec<String>,
    #[serde(default)]
    on_unit_sphere: bool,
}

impl PointConfiguration {
    pub fn new(points: Vec<Vec<f64>>, labels: Vec<String>) -> Result<Self> {
        Self::build(points, labels, false)
    }

    /// Labels the points `"0"`, `"1"`, ...
    pub fn indexed(points: Vec<Vec<f64>>) -> Result<Self> {
        let labels = (0..points.len()).map(|i| i.to_string()).collect();
        Self::build(points, labels, false)
    }

    /// Like [`PointConfiguration::new`] but every point must have unit norm.
    pub fn spherical(points: Vec<Vec<f64>>, labels: Vec<String>) -> Result<Self> {
        Self::build(points, labels, true)
    }

    fn build(points: Vec<Vec<f64>>, labels: Vec<String>, on_unit_sphere: bool) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("configuration has no points".into()));
        }
        if points.len() != labels.len() {
            return Err(Error::LabelMismatch(format!(
                "{} points but {} labels",
                points.len(),
                labels.len()
            )));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::DimensionMismatch(
                "points must have dimension >= 1".into(),
            ));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "point {i} has dimension {} but expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "point {i} has a non-finite coordinate"
                )));
            }
            if on_unit_sphere {
                let norm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > UNIT_SPHERE_TOL {
                    return Err(Error::InvalidInput(format!(
                        "point {i} has norm {norm}, expected 1"
                    )));
                }
            }
        }
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if let Some(j) = seen.insert(l.as_str(), i) {
                return Err(Error::LabelMismatch(format!(
                    "label `{l}` used by points {j} and {i}"
                )));
            }
        }
        Ok(PointConfiguration {
            points,
            labels,
            on_unit_sphere,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn point_by_label(&self, label: &str) -> Option<&[f64]> {
        self.index_of(label).map(|i| self.points[i].as_slice())
    }

    pub fn is_spherical(&self) -> bool {
        self.on_unit_sphere
    }

    /// Centered Gram matrix `-1/2 C D C` of the squared distances.
    pub fn centered_gram(&self) -> DMatrix<f64> {
        squared_distances(self).centered_gram()
    }
}

/// Symmetric matrix of squared pairwise distances with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SquaredDistanceMatrix(DMatrix<f64>);

impl SquaredDistanceMatrix {
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::DimensionMismatch(
                "squared distance matrix must be square and non-empty".into(),
            ));
        }
        for i in 0..m.nrows() {
            if m[(i, i)] != 0.0 {
                return Err(Error::InvalidInput(format!(
                    "diagonal entry {i} is not zero"
                )));
            }
            for j in 0..m.ncols() {
                let v = m[(i, j)];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "entry ({i},{j}) = {v} is not a nonnegative real"
                    )));
                }
                if v != m[(j, i)] {
                    return Err(Error::InvalidInput(format!(
                        "entry ({i},{j}) breaks symmetry"
                    )));
                }
            }
        }
        Ok(SquaredDistanceMatrix(m))
    }

    /// Triangle `(X, Y, Z) = (|AB|², |AC|², |BC|²)` as a 3×3 matrix on `A, B, C`.
    pub fn from_sides(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_matrix(DMatrix::from_row_slice(
            3,
            3,
            &[0.0, x, y, x, 0.0, z, y, z, 0.0],
        ))
    }

    /// Builds from the strict upper triangle given row by row.
    pub fn from_upper(m: usize, upper: &[f64]) -> Result<Self> {
        if upper.len() != m * (m.saturating_sub(1)) / 2 {
            return Err(Error::DimensionMismatch(format!(
                "{} entries do not fill the upper triangle of a {m}x{m} matrix",
                upper.len()
            )));
        }
        let mut d = DMatrix::zeros(m, m);
        let mut it = upper.iter();
        for i in 0..m {
            for j in i + 1..m {
                let v = *it.next().unwrap();
                d[(i, j)] = v;
                d[(j, i)] = v;
            }
        }
        Self::from_matrix(d)
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// Strict upper triangle, row by row.
    pub fn upper(&self) -> Vec<f64> {
        let m = self.size();
        let mut out = Vec::with_capacity(m * (m - 1) / 2);
        for i in 0..m {
            for j in i + 1..m {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn centered_gram(&self) -> DMatrix<f64> {
        let m = self.size();
        let c = DMatrix::<f64>::identity(m, m) - DMatrix::from_element(m, m, 1.0 / m as f64);
        let g = &c * &self.0 * &c * -0.5;
        (&g + g.transpose()) * 0.5
    }

    pub fn max_abs_diff(&self, other: &SquaredDistanceMatrix) -> f64 {
        (&self.0 - &other.0).amax()
    }
}

pub fn squared_distances(config: &PointConfiguration) -> SquaredDistanceMatrix {
    let m = config.len();
    let mut d = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in i + 1..m {
            let v = sq_dist(config.point(i), config.point(j));
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    SquaredDistanceMatrix(d)
}

pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Gram matrix of points on a unit sphere recovered from squared distances.
#[derive(Debug, Clone)]
pub struct UnitGram {
    pub matrix: DMatrix<f64>,
    pub min_eigenvalue: f64,
    pub psd: bool,
}

pub fn gram_of_unit_config(sides: &SquaredDistanceMatrix) -> UnitGram {
    let m = sides.size();
    let matrix = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            1.0
        } else {
            1.0 - sides.get(i, j) / 2.0
        }
    });
    let min_eigenvalue = min_eigenvalue(&matrix);
    UnitGram {
        psd: min_eigenvalue >= -PSD_TOL,
        matrix,
        min_eigenvalue,
    }
}

pub(crate) fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Concatenates `λ_i · part_i` label by label.
///
/// Output labels follow the first part's order. With `spherical` set the
/// weights must satisfy `Σλ² = 1` and the result is flagged spherical.
pub fn direct_sum(
    parts: &[(PointConfiguration, f64)],
    spherical: bool,
) -> Result<PointConfiguration> {
    let Some((first, _)) = parts.first() else {
        return Err(Error::InvalidInput("direct sum of no parts".into()));
    };
    for (k, (part, _)) in parts.iter().enumerate().skip(1) {
        if part.len() != first.len() || first.labels().iter().any(|l| part.index_of(l).is_none()) {
            return Err(Error::LabelMismatch(format!(
                "part {k} has a different label set"
            )));
        }
    }
    if spherical {
        let s: f64 = parts.iter().map(|(_, w)| w * w).sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::WeightNormalization(s));
        }
    }
    let points = first
        .labels()
        .iter()
        .map(|l| {
            parts
                .iter()
                .flat_map(|(part, w)| part.point_by_label(l).unwrap().iter().map(move |v| w * v))
                .collect()
        })
        .collect::<Vec<Vec<f64>>>();
    let labels = first.labels().to_vec();
    if spherical {
        // norms are only 1 up to roundoff of the parts
        let norms_ok = points
            .iter()
            .all(|p| (p.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs() <= UNIT_SPHERE_TOL);
        if norms_ok {
            return PointConfiguration::spherical(points, labels);
        }
        return Err(Error::InvalidInput(
            "spherical direct sum of parts that are not on the unit sphere".into(),
        ));
    }
    PointConfiguration::new(points, labels)
}

/// `p` points at angles `phase + 2πk/p` on a circle of the given radius,
/// labeled by `k`.
pub fn regular_pgon(p: u64, radius: f64, phase: f64) -> Result<PointConfiguration> {
    if p < 2 {
        return Err(Error::InvalidInput(format!(
            "regular p-gon needs p >= 2, got {p}"
        )));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "radius must be positive, got {radius}"
        )));
    }
    let points = (0..p)
        .map(|k| {
            let a = phase + 2.0 * PI * k as f64 / p as f64;
            vec![radius * a.cos(), radius * a.sin()]
        })
        .collect();
    PointConfiguration::indexed(points)
}

/// `4 sin²(π s / p)`: squared chord of the unit circle between p-gon vertices `s` apart.
pub fn unit_chord_sq(s: i64, p: u64) -> f64 {
    let x = (PI * s as f64 / p as f64).sin();
    4.0 * x * x
}
