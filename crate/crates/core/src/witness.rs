//! Explicit p-torus actions that certify suborbit claims.
//!
//! A witness stores commuting orthogonal generators `g_1..g_α` of prime
//! order `p`, a fixed center, a base point and one exponent vector (word) per
//! claimed label. The labeled point is `center + g^w (base - center)`; the
//! verifier recomputes every such point and compares it with the claim.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{sq_dist, PointConfiguration};

#[derive(Debug, Clone, PartialEq)]
pub struct GroupWitness {
    pub p: u64,
    pub generators: Vec<DMatrix<f64>>,
    pub center: DVector<f64>,
    pub base: DVector<f64>,
    /// One exponent vector per label of `claimed`, in the same order.
    pub words: Vec<Vec<u64>>,
    pub claimed: PointConfiguration,
    pub frame: ClaimFrame,
}

/// How the claimed points relate to the witness space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimFrame {
    /// Claimed points are given in the witness's own coordinates.
    #[default]
    Ambient,
    /// Claimed points are an isometric copy in other coordinates; only
    /// pairwise distances are compared.
    Isometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub max_point_error: f64,
    pub max_distance_error: f64,
    pub group_axiom_error: f64,
    pub pass: bool,
}

impl VerificationReport {
    /// Re-evaluates the verdict with separate tolerances per error kind.
    pub fn within(&self, axiom_tol: f64, point_tol: f64, distance_tol: f64) -> bool {
        self.group_axiom_error <= axiom_tol
            && self.max_point_error <= point_tol
            && self.max_distance_error <= distance_tol
    }
}

impl GroupWitness {
    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Number of generators `α`; the group is `Z_p^α`.
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// `log_p |G|` as a float-free pair: the group order is `p^rank`.
    pub fn group_order(&self) -> Option<u64> {
        self.p.checked_pow(self.rank() as u32)
    }

    /// `center + g^word (base - center)`.
    pub fn orbit_point(&self, word: &[u64]) -> DVector<f64> {
        let mut v = &self.base - &self.center;
        for (g, &e) in self.generators.iter().zip(word) {
            let e = e % self.p;
            if e != 0 {
                v = matrix_power(g, e) * v;
            }
        }
        v + &self.center
    }

    pub fn realized_points(&self) -> Vec<DVector<f64>> {
        self.words.iter().map(|w| self.orbit_point(w)).collect()
    }

    /// The labeled orbit points as a configuration in the witness space.
    pub fn realized_config(&self) -> PointConfiguration {
        let pts = self
            .realized_points()
            .into_iter()
            .map(|v| v.as_slice().to_vec())
            .collect();
        PointConfiguration::new(pts, self.claimed.labels().to_vec())
            .expect("labels come from a valid configuration")
    }

    pub fn word_of(&self, label: &str) -> Option<&[u64]> {
        self.claimed
            .index_of(label)
            .map(|i| self.words[i].as_slice())
    }

    /// Keeps only the given labels (in that order), optionally renaming them.
    pub fn restrict(&self, labels: &[&str], renamed: Option<&[String]>) -> Result<GroupWitness> {
        let mut pts = Vec::with_capacity(labels.len());
        let mut words = Vec::with_capacity(labels.len());
        for l in labels {
            let i = self
                .claimed
                .index_of(l)
                .ok_or_else(|| Error::LabelMismatch(format!("label `{l}` not in witness")))?;
            pts.push(self.claimed.point(i).to_vec());
            words.push(self.words[i].clone());
        }
        let names = match renamed {
            Some(r) if r.len() == labels.len() => r.to_vec(),
            Some(_) => {
                return Err(Error::LabelMismatch(
                    "rename list has the wrong length".into(),
                ))
            }
            None => labels.iter().map(|s| s.to_string()).collect(),
        };
        let claimed = if self.claimed.is_spherical() {
            PointConfiguration::spherical(pts, names)?
        } else {
            PointConfiguration::new(pts, names)?
        };
        Ok(GroupWitness {
            claimed,
            words,
            ..self.clone()
        })
    }

    /// Replaces the claim by `config`, keeping the words label by label.
    /// Used when the orbit realizes an isometric copy of a configuration
    /// given in other coordinates.
    pub fn with_claim(&self, config: PointConfiguration) -> Result<GroupWitness> {
        let words = config
            .labels()
            .iter()
            .map(|l| {
                self.word_of(l)
                    .map(|w| w.to_vec())
                    .ok_or_else(|| Error::LabelMismatch(format!("label `{l}` not in witness")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupWitness {
            claimed: config,
            words,
            frame: ClaimFrame::Isometric,
            ..self.clone()
        })
    }
}

/// `m^e` by repeated squaring.
pub fn matrix_power(m: &DMatrix<f64>, mut e: u64) -> DMatrix<f64> {
    let n = m.nrows();
    let mut result = DMatrix::identity(n, n);
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Checks every witness invariant and the claimed isometry.
///
/// For an [`ClaimFrame::Isometric`] claim the point error is reported as 0 and
/// only pairwise distances are compared.
pub fn verify_witness(w: &GroupWitness, tol: f64) -> Result<VerificationReport> {
    let n = w.dim();
    if n == 0 {
        return Err(Error::DimensionMismatch(
            "witness has ambient dimension 0".into(),
        ));
    }
    if w.base.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "base has dimension {} but center has {n}",
            w.base.len()
        )));
    }
    for (i, g) in w.generators.iter().enumerate() {
        if g.nrows() != n || g.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "generator {i} is {}x{} but the ambient dimension is {n}",
                g.nrows(),
                g.ncols()
            )));
        }
    }
    if w.words.len() != w.claimed.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} words for {} claimed points",
            w.words.len(),
            w.claimed.len()
        )));
    }
    if let Some(bad) = w.words.iter().find(|wd| wd.len() != w.rank()) {
        return Err(Error::DimensionMismatch(format!(
            "word of length {} for {} generators",
            bad.len(),
            w.rank()
        )));
    }
    if w.frame == ClaimFrame::Ambient && w.claimed.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "claimed points have dimension {} but the ambient dimension is {n}",
            w.claimed.dim()
        )));
    }
    if w.p < 2 {
        return Err(Error::InvalidWitness(format!(
            "group order p = {} is not >= 2",
            w.p
        )));
    }

    let id = DMatrix::<f64>::identity(n, n);
    let mut axiom = 0.0_f64;
    for (i, g) in w.generators.iter().enumerate() {
        axiom = axiom.max((g.transpose() * g - &id).amax());
        axiom = axiom.max((matrix_power(g, w.p) - &id).amax());
        for h in &w.generators[i + 1..] {
            axiom = axiom.max((g * h - h * g).amax());
        }
    }

    let realized = w.realized_points();
    let mut point_err = 0.0_f64;
    if w.frame == ClaimFrame::Ambient {
        for (r, c) in realized.iter().zip(w.claimed.points()) {
            point_err = point_err.max(sq_dist(r.as_slice(), c).sqrt());
        }
    }
    let mut dist_err = 0.0_f64;
    for i in 0..realized.len() {
        for j in i + 1..realized.len() {
            let dr = sq_dist(realized[i].as_slice(), realized[j].as_slice()).sqrt();
            let dc = sq_dist(w.claimed.point(i), w.claimed.point(j)).sqrt();
            dist_err = dist_err.max((dr - dc).abs());
        }
    }
    let finite = axiom.is_finite() && point_err.is_finite() && dist_err.is_finite();
    Ok(VerificationReport {
        max_point_error: point_err,
        max_distance_error: dist_err,
        group_axiom_error: axiom,
        pass: finite && axiom <= tol && point_err <= tol && dist_err <= tol,
    })
}

/// Rotation by `angle` in the plane of coordinates `(2c, 2c+1)` of `R^dim`.
pub(crate) fn plane_rotation(dim: usize, plane: usize, angle: f64) -> DMatrix<f64> {
    let mut g = DMatrix::identity(dim, dim);
    let (s, c) = angle.sin_cos();
    let i = 2 * plane;
    g[(i, i)] = c;
    g[(i, i + 1)] = -s;
    g[(i + 1, i)] = s;
    g[(i + 1, i + 1)] = c;
    g
}

/// Orbit of `Z_p^planes` acting by independent `2π/p` rotations on
/// `planes` coordinate planes, with radius `radii[c]` in plane `c`, followed
/// by `fixed` coordinates held at the given values. Center is the origin of
/// the planes (the fixed block is left untouched by every generator).
pub(crate) fn rotation_torus_witness(
    p: u64,
    radii: &[f64],
    fixed: &[f64],
    words: Vec<Vec<u64>>,
    labels: Vec<String>,
    spherical: bool,
) -> Result<GroupWitness> {
    let planes = radii.len();
    let dim = 2 * planes + fixed.len();
    if dim == 0 {
        return Err(Error::DimensionMismatch(
            "torus witness needs at least one coordinate".into(),
        ));
    }
    let angle = 2.0 * PI / p as f64;
    let mut generators: Vec<DMatrix<f64>> =
        (0..planes).map(|c| plane_rotation(dim, c, angle)).collect();
    let mut words = words;
    if planes == 0 {
        // a single trivial generator keeps the group non-empty
        generators.push(DMatrix::identity(dim, dim));
        for w in words.iter_mut() {
            w.push(0);
        }
    }
    let mut center = DVector::zeros(dim);
    let mut base = DVector::zeros(dim);
    for (c, r) in radii.iter().enumerate() {
        base[2 * c] = *r;
    }
    for (k, v) in fixed.iter().enumerate() {
        center[2 * planes + k] = *v;
        base[2 * planes + k] = *v;
    }
    let pts = words
        .iter()
        .map(|w| {
            let mut x = vec![0.0; dim];
            for c in 0..planes {
                let a = angle * (w[c] % p) as f64;
                x[2 * c] = radii[c] * a.cos();
                x[2 * c + 1] = radii[c] * a.sin();
            }
            x[2 * planes..].copy_from_slice(fixed);
            x
        })
        .collect::<Vec<_>>();
    let claimed = if spherical {
        PointConfiguration::spherical(pts, labels)?
    } else {
        PointConfiguration::new(pts, labels)?
    };
    Ok(GroupWitness {
        p,
        generators,
        center,
        base,
        words,
        claimed,
        frame: ClaimFrame::Ambient,
    })
}

/// Block-diagonal product of several witnesses (same `p`), keeping one
/// combined label per pick. `picks[k] = (label, labels in each factor)`.
pub(crate) fn compose(
    factors: &[&GroupWitness],
    picks: &[(String, Vec<String>)],
) -> Result<GroupWitness> {
    let Some(first) = factors.first() else {
        return Err(Error::InvalidInput("product of no witnesses".into()));
    };
    let p = first.p;
    if let Some(f) = factors.iter().find(|f| f.p != p) {
        return Err(Error::InvalidInput(format!(
            "mismatched primes {} and {}",
            p, f.p
        )));
    }
    let dim: usize = factors.iter().map(|f| f.dim()).sum();
    let mut generators = Vec::new();
    let mut center = DVector::zeros(dim);
    let mut base = DVector::zeros(dim);
    let mut offset = 0;
    for f in factors {
        let d = f.dim();
        for g in &f.generators {
            let mut big = DMatrix::identity(dim, dim);
            big.view_mut((offset, offset), (d, d)).copy_from(g);
            generators.push(big);
        }
        center.rows_mut(offset, d).copy_from(&f.center);
        base.rows_mut(offset, d).copy_from(&f.base);
        offset += d;
    }
    let mut words = Vec::with_capacity(picks.len());
    let mut pts = Vec::with_capacity(picks.len());
    let mut labels = Vec::with_capacity(picks.len());
    for (label, parts) in picks {
        if parts.len() != factors.len() {
            return Err(Error::LabelMismatch(format!(
                "pick `{label}` names {} factors",
                parts.len()
            )));
        }
        let mut word = Vec::new();
        let mut pt = Vec::new();
        for (f, l) in factors.iter().zip(parts) {
            let i = f
                .claimed
                .index_of(l)
                .ok_or_else(|| Error::LabelMismatch(format!("label `{l}` not in factor")))?;
            word.extend_from_slice(&f.words[i]);
            pt.extend_from_slice(f.claimed.point(i));
        }
        words.push(word);
        pts.push(pt);
        labels.push(label.clone());
    }
    let frame = if factors.iter().all(|f| f.frame == ClaimFrame::Ambient) {
        ClaimFrame::Ambient
    } else {
        ClaimFrame::Isometric
    };
    Ok(GroupWitness {
        p,
        generators,
        center,
        base,
        words,
        claimed: PointConfiguration::new(pts, labels)?,
        frame,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn antipodal_segment() -> GroupWitness {
        GroupWitness {
            p: 2,
            generators: vec![DMatrix::from_element(1, 1, -1.0)],
            center: DVector::from_element(1, 0.5),
            base: DVector::from_element(1, 1.0),
            words: vec![vec![1], vec![0]],
            claimed: PointConfiguration::indexed(vec![vec![0.0], vec![1.0]]).unwrap(),
            frame: ClaimFrame::Ambient,
        }
    }

    #[test]
    fn antipodal_pair_realizes_segment() {
        let r = verify_witness(&antipodal_segment(), 1e-12).unwrap();
        assert!(r.pass);
        assert_eq!(r.max_point_error, 0.0);
    }

    #[test]
    fn non_orthogonal_generator_fails() {
        let mut w = antipodal_segment();
        w.generators[0][(0, 0)] = -1.1;
        let r = verify_witness(&w, 1e-9).unwrap();
        assert!(!r.pass);
        assert!(r.group_axiom_error > 1e-9);
    }

    #[test]
    fn dimension_errors() {
        let mut w = antipodal_segment();
        w.base = DVector::zeros(2);
        assert!(matches!(
            verify_witness(&w, 1e-9),
            Err(Error::DimensionMismatch(_))
        ));
        let mut w = antipodal_segment();
        w.words.pop();
        assert!(matches!(
            verify_witness(&w, 1e-9),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn rotation_witness_points_match() {
        let w = rotation_torus_witness(
            5,
            &[1.0, 0.5],
            &[0.25],
            vec![vec![0, 0], vec![1, 3], vec![4, 2]],
            vec!["a".into(), "b".into(), "c".into()],
            false,
        )
        .unwrap();
        let r = verify_witness(&w, 1e-12).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn power_by_squaring() {
        let g = plane_rotation(2, 0, 2.0 * PI / 7.0);
        assert!((matrix_power(&g, 7) - DMatrix::identity(2, 2)).amax() < 1e-14);
        assert!((matrix_power(&g, 3) - &g * &g * &g).amax() < 1e-15);
    }
}
