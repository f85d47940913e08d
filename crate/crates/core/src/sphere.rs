//! Triangles on round spheres in squared-side coordinates `(X, Y, Z)`.
//!
//! `X = |AB|²`, `Y = |AC|²`, `Z = |BC|²`. Triangles of circumradius 1 lie on
//! the surface [`sigma_residual`]` = 0`; the region `R` of triangles that fit
//! on the unit sphere is cut out by the unit Gram test [`in_r`]. A triangle
//! in `conv({0} ∪ Σ_p)` is a suborbit of a `Z_p^α` action on a unit sphere,
//! which [`decompose_in_rp`] certifies and [`witness_from_certificate`] makes
//! explicit.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{gram_of_unit_config, unit_chord_sq, SquaredDistanceMatrix};
use crate::lp::{solve_feasibility, LpOptions};
use crate::primes::{is_prime, primes_up_to};
use crate::witness::{rotation_torus_witness, GroupWitness};

/// Tolerance on the decomposition LP and on certificate sides.
pub const DECOMPOSITION_TOL: f64 = 1e-9;

/// Squared sides `(X, Y, Z) = (|AB|², |AC|², |BC|²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleSides {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl TriangleSides {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        for v in [x, y, z] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "squared side {v} is not a nonnegative real"
                )));
            }
        }
        Ok(TriangleSides { x, y, z })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn distance_matrix(&self) -> SquaredDistanceMatrix {
        SquaredDistanceMatrix::from_sides(self.x, self.y, self.z).expect("validated sides")
    }

    pub fn max_abs_diff(&self, other: &TriangleSides) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }
}

impl FromStr for TriangleSides {
    type Err = Error;

    /// Parses `"X,Y,Z"`.
    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("`{t}` is not a number")))
            })
            .collect::<Result<_>>()?;
        match v.as_slice() {
            [x, y, z] => TriangleSides::new(*x, *y, *z),
            _ => Err(Error::DimensionMismatch(format!(
                "expected three sides, got {}",
                v.len()
            ))),
        }
    }
}

/// `XYZ + X² + Y² + Z² - 2XY - 2YZ - 2ZX`.
pub fn sigma_residual(t: &TriangleSides) -> f64 {
    let TriangleSides { x, y, z } = *t;
    x * y * z + x * x + y * y + z * z - 2.0 * x * y - 2.0 * y * z - 2.0 * z * x
}

/// Squared circumradius `XYZ / (2XY + 2YZ + 2ZX - X² - Y² - Z²)`.
pub fn circumradius_sq(t: &TriangleSides) -> Result<f64> {
    let TriangleSides { x, y, z } = *t;
    let den = 2.0 * (x * y + y * z + z * x) - x * x - y * y - z * z;
    if den <= 1e-12 {
        return Err(Error::Degenerate(format!(
            "sides ({x}, {y}, {z}) span no circle (denominator {den:.3e})"
        )));
    }
    Ok(x * y * z / den)
}

/// Three arcs of the unit circle, as exact fractions of a full turn.
///
/// Points sit at `A = 0`, `B = a1`, `C = a1 + a3`, so `AB` subtends `a1`,
/// `AC` subtends `a2` and `BC` subtends `a3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcTriple([Ratio<i64>; 3]);

impl ArcTriple {
    pub fn new(a1: Ratio<i64>, a2: Ratio<i64>, a3: Ratio<i64>) -> Result<Self> {
        let arcs = [a1, a2, a3];
        if arcs.iter().any(|a| *a < Ratio::zero() || *a > Ratio::one()) {
            return Err(Error::InvalidInput("arcs must lie in [0, 1]".into()));
        }
        if a1 + a2 + a3 != Ratio::one() {
            return Err(Error::InvalidInput(format!(
                "arcs {a1} + {a2} + {a3} do not sum to 1"
            )));
        }
        Ok(ArcTriple(arcs))
    }

    pub fn arcs(&self) -> [Ratio<i64>; 3] {
        self.0
    }

    /// Least common denominator of the three arcs.
    pub fn denominator(&self) -> i64 {
        self.0.iter().fold(1, |l, a| l.lcm(a.denom()))
    }

    /// Circle positions of `A, B, C` as fractions of a turn.
    pub fn positions(&self) -> [Ratio<i64>; 3] {
        let [a1, _, a3] = self.0;
        [Ratio::zero(), a1, a1 + a3]
    }
}

impl fmt::Display for ArcTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "{a},{b},{c}")
    }
}

impl FromStr for ArcTriple {
    type Err = Error;

    /// Parses `"a/b,c/d,e/f"`; plain integers are accepted as fractions over 1.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<Ratio<i64>> = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                let (n, d) = t.split_once('/').unwrap_or((t, "1"));
                let n: i64 = n
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad fraction `{t}`")))?;
                let d: i64 = d
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad fraction `{t}`")))?;
                if d == 0 {
                    return Err(Error::InvalidInput(format!("zero denominator in `{t}`")));
                }
                Ok(Ratio::new(n, d))
            })
            .collect::<Result<_>>()?;
        match parts.as_slice() {
            [a, b, c] => ArcTriple::new(*a, *b, *c),
            _ => Err(Error::DimensionMismatch(format!(
                "expected three arcs, got {}",
                parts.len()
            ))),
        }
    }
}

fn chord_sq_of(arc: Ratio<i64>) -> f64 {
    let s = (PI * *arc.numer() as f64 / *arc.denom() as f64).sin();
    4.0 * s * s
}

pub fn sides_from_arcs(a: &ArcTriple) -> TriangleSides {
    let [a1, a2, a3] = a.arcs();
    TriangleSides {
        x: chord_sq_of(a1),
        y: chord_sq_of(a2),
        z: chord_sq_of(a3),
    }
}

/// A triangle `(0, j, k)` of the standard `Z_p` action on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaAtom {
    pub j: u64,
    pub k: u64,
    pub sides: TriangleSides,
}

/// All ordered triples `(0, j, k)` of `Z_p` except `(0, 0, 0)`, repeated
/// indices included.
pub fn sigma_p(p: u64) -> Vec<SigmaAtom> {
    let mut out = Vec::with_capacity((p * p - 1) as usize);
    for j in 0..p {
        for k in 0..p {
            if j == 0 && k == 0 {
                continue;
            }
            out.push(SigmaAtom {
                j,
                k,
                sides: TriangleSides {
                    x: unit_chord_sq(j as i64, p),
                    y: unit_chord_sq(k as i64, p),
                    z: unit_chord_sq(k as i64 - j as i64, p),
                },
            });
        }
    }
    out
}

/// Whether the triangle fits on the unit sphere (unit Gram matrix PSD).
pub fn in_r(t: &TriangleSides) -> bool {
    gram_of_unit_config(&t.distance_matrix()).psd
}

/// One weighted atom of a [`DecompositionCertificate`]: `Z_p` indices of
/// `A, B, C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedAtom {
    pub indices: [u64; 3],
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionCertificate {
    pub p: u64,
    pub atoms: Vec<WeightedAtom>,
    pub origin_weight: f64,
}

impl DecompositionCertificate {
    /// `Σ w · sides(atom)`.
    pub fn sides(&self) -> TriangleSides {
        let mut s = [0.0; 3];
        for a in &self.atoms {
            let [i, j, k] = a.indices.map(|v| v as i64);
            s[0] += a.weight * unit_chord_sq(j - i, self.p);
            s[1] += a.weight * unit_chord_sq(k - i, self.p);
            s[2] += a.weight * unit_chord_sq(k - j, self.p);
        }
        TriangleSides {
            x: s[0],
            y: s[1],
            z: s[2],
        }
    }

    pub fn total_weight(&self) -> f64 {
        self.origin_weight + self.atoms.iter().map(|a| a.weight).sum::<f64>()
    }

    /// Structural checks: prime order, indices in range, nonnegative weights
    /// summing to one.
    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::MalformedCertificate(format!(
                "{} is not a prime",
                self.p
            )));
        }
        if !(self.origin_weight >= 0.0) {
            return Err(Error::MalformedCertificate("negative origin weight".into()));
        }
        for a in &self.atoms {
            if !(a.weight > 0.0 && a.weight.is_finite()) {
                return Err(Error::MalformedCertificate(format!(
                    "atom weight {} is not positive",
                    a.weight
                )));
            }
            if a.indices.iter().any(|&i| i >= self.p) {
                return Err(Error::MalformedCertificate(format!(
                    "indices {:?} outside Z_{}",
                    a.indices, self.p
                )));
            }
        }
        let total = self.total_weight();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::MalformedCertificate(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(())
    }

    /// [`validate`](Self::validate) plus agreement with the target sides.
    pub fn check(&self, target: &TriangleSides) -> Result<()> {
        self.validate()?;
        let err = self.sides().max_abs_diff(target);
        if err > DECOMPOSITION_TOL {
            return Err(Error::MalformedCertificate(format!(
                "sides differ from the target by {err:.3e}"
            )));
        }
        Ok(())
    }
}

/// Outcome of [`decompose_in_rp`].
#[derive(Debug, Clone, PartialEq)]
pub enum Decomposition {
    Feasible(DecompositionCertificate),
    /// `farkas · (X, Y, Z, 1) > 0` while `farkas · column <= 0` on every atom
    /// and on the origin.
    Infeasible {
        residual: f64,
        farkas: [f64; 4],
    },
}

impl Decomposition {
    pub fn certificate(&self) -> Option<&DecompositionCertificate> {
        match self {
            Decomposition::Feasible(c) => Some(c),
            Decomposition::Infeasible { .. } => None,
        }
    }
}

/// Distinct atoms of `Σ_p` (first ordered triple per side triple).
fn distinct_atoms(p: u64) -> Vec<SigmaAtom> {
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for a in sigma_p(p) {
        let key = a.sides.as_array().map(|v| (v * 1e12).round() as i64);
        if seen.insert(key, ()).is_none() {
            out.push(a);
        }
    }
    out
}

fn decompose_with(t: &TriangleSides, p: u64, atoms: &[SigmaAtom]) -> Decomposition {
    let mut columns: Vec<Vec<f64>> = atoms
        .iter()
        .map(|a| vec![a.sides.x, a.sides.y, a.sides.z, 1.0])
        .collect();
    columns.push(vec![0.0, 0.0, 0.0, 1.0]);
    let rhs = [t.x, t.y, t.z, 1.0];
    let opts = LpOptions {
        feasibility_tol: DECOMPOSITION_TOL,
        ..LpOptions::default()
    };
    let sol = solve_feasibility(&columns, &rhs, &opts);
    if !sol.feasible {
        let y = &sol.duals;
        return Decomposition::Infeasible {
            residual: sol.infeasibility,
            farkas: [y[0], y[1], y[2], y[3]],
        };
    }
    let n = atoms.len();
    let mut cert = DecompositionCertificate {
        p,
        atoms: atoms
            .iter()
            .zip(&sol.x)
            .filter(|(_, &w)| w > 1e-13)
            .map(|(a, &w)| WeightedAtom {
                indices: [0, a.j, a.k],
                weight: w,
            })
            .collect(),
        origin_weight: sol.x[n],
    };
    // the LP only matches the sum to 1e-9; put any slack on the origin
    let atom_total: f64 = cert.atoms.iter().map(|a| a.weight).sum();
    cert.origin_weight = (1.0 - atom_total).max(0.0);
    if atom_total > 1.0 {
        for a in cert.atoms.iter_mut() {
            a.weight /= atom_total;
        }
    }
    Decomposition::Feasible(cert)
}

/// LP feasibility of `t ∈ conv({0} ∪ Σ_p)`.
pub fn decompose_in_rp(t: &TriangleSides, p: u64) -> Result<Decomposition> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not a prime")));
    }
    let dec = decompose_with(t, p, &distinct_atoms(p));
    if let Decomposition::Feasible(c) = &dec {
        if c.check(t).is_err() {
            return Ok(Decomposition::Infeasible {
                residual: c.sides().max_abs_diff(t),
                farkas: [0.0; 4],
            });
        }
    }
    Ok(dec)
}

/// Union-of-atoms variant used to probe monotonicity across primes: the
/// combined atom set of `p` and `q` (as chord triples) is decomposed.
pub fn decompose_in_union(t: &TriangleSides, p: u64, q: u64) -> bool {
    let mut cols: Vec<Vec<f64>> = distinct_atoms(p)
        .into_iter()
        .chain(distinct_atoms(q))
        .map(|a| vec![a.sides.x, a.sides.y, a.sides.z, 1.0])
        .collect();
    cols.push(vec![0.0, 0.0, 0.0, 1.0]);
    let opts = LpOptions {
        feasibility_tol: DECOMPOSITION_TOL,
        ..LpOptions::default()
    };
    solve_feasibility(&cols, &[t.x, t.y, t.z, 1.0], &opts).feasible
}

/// Direct sum of `sqrt(w)`-scaled unit p-gon planes, one `Z_p` generator per
/// atom, with the origin weight realized as a frozen coordinate pair
/// `(sqrt(w_0), 0)` shared by all three points.
pub fn witness_from_certificate(c: &DecompositionCertificate) -> Result<GroupWitness> {
    c.validate()?;
    let radii: Vec<f64> = c.atoms.iter().map(|a| a.weight.sqrt()).collect();
    let fixed: Vec<f64> = if c.origin_weight > 0.0 {
        vec![c.origin_weight.sqrt(), 0.0]
    } else {
        vec![]
    };
    let words: Vec<Vec<u64>> = (0..3)
        .map(|v| c.atoms.iter().map(|a| a.indices[v]).collect())
        .collect();
    let labels = vec!["A".to_string(), "B".to_string(), "C".to_string()];
    let mut w = rotation_torus_witness(c.p, &radii, &fixed, words, labels, true)?;
    w.center = DVector::zeros(w.dim());
    Ok(w)
}

/// Smallest prime `p <= p_max` with `t ∈ R_p`, searched in parallel batches.
pub fn find_prime_spherical(
    t: &TriangleSides,
    p_max: u64,
) -> Result<(u64, DecompositionCertificate)> {
    let primes = primes_up_to(p_max);
    for batch in primes.chunks(8) {
        let hit = batch
            .par_iter()
            .map(|&p| decompose_in_rp(t, p).map(|d| (p, d)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .find_map(|(p, d)| match d {
                Decomposition::Feasible(c) => Some((p, c)),
                Decomposition::Infeasible { .. } => None,
            });
        if let Some(found) = hit {
            return Ok(found);
        }
    }
    Err(Error::Exhausted { p_max })
}

/// Verdict of [`classify_circle_triangle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CircleVerdict {
    /// One arc is 1/2: a suborbit of `Z_2²`.
    RightAngled,
    /// Two points coincide: a segment, a suborbit of `Z_2` on a larger sphere.
    Degenerate,
    ZpSuborbit {
        p: u64,
    },
    NotSubtoral,
}

#[derive(Debug, Clone)]
pub struct CircleClassification {
    pub arcs: ArcTriple,
    pub verdict: CircleVerdict,
    pub certificate: Option<DecompositionCertificate>,
    pub witness: Option<GroupWitness>,
}

/// Exact classification of a triangle inscribed in the unit circle.
pub fn classify_circle_triangle(a: &ArcTriple) -> Result<CircleClassification> {
    let half = Ratio::new(1, 2);
    let arcs = a.arcs();
    let t = sides_from_arcs(a);
    let atom = |indices: [u64; 3], weight: f64| WeightedAtom { indices, weight };

    let (verdict, cert) = if let Some(h) = arcs.iter().position(|&x| x == half) {
        // (4,4,0) = (0,1,1), (4,0,4) = (0,1,0), (0,4,4) = (0,0,1) in Z_2
        let parts = match h {
            0 => [(t.y, [0, 1, 1]), (t.z, [0, 1, 0])],
            1 => [(t.x, [0, 1, 1]), (t.z, [0, 0, 1])],
            _ => [(t.x, [0, 1, 0]), (t.y, [0, 0, 1])],
        };
        let atoms: Vec<WeightedAtom> = parts
            .iter()
            .filter(|(s, _)| *s > 0.0)
            .map(|&(s, idx)| atom(idx, s / 4.0))
            .collect();
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        let atoms = atoms
            .into_iter()
            .map(|a| atom(a.indices, a.weight / total))
            .collect();
        (
            CircleVerdict::RightAngled,
            Some(DecompositionCertificate {
                p: 2,
                atoms,
                origin_weight: 0.0,
            }),
        )
    } else if let Some(z) = arcs.iter().position(|x| x.is_zero()) {
        // the two remaining points are a chord of squared length s
        let (s, idx) = match z {
            0 => (t.y, [0, 0, 1]),
            1 => (t.x, [0, 1, 0]),
            _ => (t.x, [0, 1, 1]),
        };
        let w = s / 4.0;
        let atoms = if w > 0.0 { vec![atom(idx, w)] } else { vec![] };
        (
            CircleVerdict::Degenerate,
            Some(DecompositionCertificate {
                p: 2,
                atoms,
                origin_weight: 1.0 - w,
            }),
        )
    } else {
        let d = a.denominator();
        if is_prime(d as u64) {
            let p = d as u64;
            let idx = a
                .positions()
                .map(|x| (x * d).to_integer().rem_euclid(d) as u64);
            (
                CircleVerdict::ZpSuborbit { p },
                Some(DecompositionCertificate {
                    p,
                    atoms: vec![atom(idx, 1.0)],
                    origin_weight: 0.0,
                }),
            )
        } else {
            (CircleVerdict::NotSubtoral, None)
        }
    };
    let witness = cert.as_ref().map(witness_from_certificate).transpose()?;
    Ok(CircleClassification {
        arcs: *a,
        verdict,
        certificate: cert,
        witness,
    })
}
