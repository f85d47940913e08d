//! Self-describing JSON documents.
//!
//! Every document carries a `"kind"` tag and a format `"version"`. Floats are
//! written with 17 significant digits (trailing zeros trimmed), so parsing a
//! document reproduces every value bit for bit.

use std::io;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::certificate::{DependenceParameters, HarnessResult, SeparationReport};
use crate::error::{Error, Result};
use crate::euclid::EmbedMethod;
use crate::geometry::PointConfiguration;
use crate::sphere::{CircleVerdict, DecompositionCertificate, TriangleSides};
use crate::torus::{FarPoint, GapSummary, QuadratureSpec};
use crate::witness::{ClaimFrame, GroupWitness, VerificationReport};

pub const FORMAT_VERSION: &str = "1.0.0";

fn version() -> String {
    FORMAT_VERSION.to_string()
}

/// Outcome carried by result documents; it determines the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Embedded,
    Feasible,
    Infeasible,
    Pass,
    Fail,
    Constant,
    NotFound,
    Vanishes,
    Nonzero,
    Exhausted,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Embedded
            | Verdict::Feasible
            | Verdict::Pass
            | Verdict::Constant
            | Verdict::Vanishes => 0,
            Verdict::Infeasible
            | Verdict::Fail
            | Verdict::NotFound
            | Verdict::Nonzero
            | Verdict::Exhausted => 2,
            Verdict::Error => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Document {
    Config(ConfigDoc),
    Witness(WitnessDoc),
    Embedding(EmbeddingDoc),
    Classification(ClassificationDoc),
    Decomposition(DecompositionDoc),
    Verification(VerificationDoc),
    TorusGap(TorusGapDoc),
    FarPoint(FarPointDoc),
    Search(SearchDoc),
    Certificate(CertificateDoc),
    Harness(HarnessDoc),
    Error(ErrorDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Config(_) => "config",
            Document::Witness(_) => "witness",
            Document::Embedding(_) => "embedding",
            Document::Classification(_) => "classification",
            Document::Decomposition(_) => "decomposition",
            Document::Verification(_) => "verification",
            Document::TorusGap(_) => "torus-gap",
            Document::FarPoint(_) => "far-point",
            Document::Search(_) => "search",
            Document::Certificate(_) => "certificate",
            Document::Harness(_) => "harness",
            Document::Error(_) => "error",
        }
    }

    pub fn verdict(&self) -> Option<Verdict> {
        match self {
            Document::Config(_) | Document::Witness(_) | Document::Classification(_) => None,
            Document::Embedding(d) => Some(d.verdict),
            Document::Decomposition(d) => Some(d.verdict),
            Document::Verification(d) => Some(d.verdict),
            Document::TorusGap(d) => Some(d.verdict),
            Document::FarPoint(d) => Some(d.verdict),
            Document::Search(d) => Some(d.verdict),
            Document::Certificate(d) => Some(d.verdict),
            Document::Harness(d) => Some(d.verdict),
            Document::Error(d) => Some(d.verdict),
        }
    }

    /// 0 for success or a feasible verdict, 2 for a negative verdict, 1 for
    /// errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Document::Classification(c) => match c.verdict {
                CircleVerdict::NotSubtoral => 2,
                _ => 0,
            },
            _ => self.verdict().map_or(0, Verdict::exit_code),
        }
    }

    /// The witness carried by this document, if any.
    pub fn witness(&self) -> Option<&WitnessDoc> {
        match self {
            Document::Witness(w) => Some(w),
            Document::Embedding(d) => Some(&d.witness),
            Document::Classification(d) => d.witness.as_ref(),
            Document::Decomposition(d) => d.witness.as_ref(),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigDoc {
    #[serde(default = "version")]
    pub version: String,
    pub points: Vec<Vec<f64>>,
    /// Defaults to `"0", "1", ...`.
    #[serde(default)]
    pub labels: Vec<String>,
}

impl ConfigDoc {
    pub fn from_config(c: &PointConfiguration) -> Self {
        ConfigDoc {
            version: version(),
            points: c.points().to_vec(),
            labels: c.labels().to_vec(),
        }
    }

    pub fn to_config(&self) -> Result<PointConfiguration> {
        if self.labels.is_empty() {
            PointConfiguration::indexed(self.points.clone())
        } else {
            PointConfiguration::new(self.points.clone(), self.labels.clone())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessDoc {
    #[serde(default = "version")]
    pub version: String,
    pub p: u64,
    /// Row-major generator matrices.
    pub generators: Vec<Vec<Vec<f64>>>,
    pub center: Vec<f64>,
    pub base: Vec<f64>,
    pub words: Vec<Vec<u64>>,
    pub labels: Vec<String>,
    pub claimed: Vec<Vec<f64>>,
    #[serde(default)]
    pub spherical: bool,
    #[serde(default)]
    pub frame: ClaimFrame,
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn from_rows(r: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    let n = r.first().map_or(0, Vec::len);
    if r.iter().any(|row| row.len() != n) {
        return Err(Error::MalformedDocument(format!("{what} has ragged rows")));
    }
    Ok(DMatrix::from_row_iterator(
        r.len(),
        n,
        r.iter().flatten().copied(),
    ))
}

impl WitnessDoc {
    pub fn from_witness(w: &GroupWitness) -> Self {
        WitnessDoc {
            version: version(),
            p: w.p,
            generators: w.generators.iter().map(rows).collect(),
            center: w.center.iter().copied().collect(),
            base: w.base.iter().copied().collect(),
            words: w.words.clone(),
            labels: w.claimed.labels().to_vec(),
            claimed: w.claimed.points().to_vec(),
            spherical: w.claimed.is_spherical(),
            frame: w.frame,
        }
    }

    pub fn to_witness(&self) -> Result<GroupWitness> {
        let n = self.center.len();
        if self.base.len() != n {
            return Err(Error::MalformedDocument(format!(
                "base has {} coordinates, center has {n}",
                self.base.len()
            )));
        }
        let mut generators = Vec::with_capacity(self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            let m = from_rows(g, "generator")?;
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::MalformedDocument(format!(
                    "generator {i} is {}x{}, expected {n}x{n}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            generators.push(m);
        }
        if self.words.len() != self.labels.len()
            || self.words.iter().any(|w| w.len() != generators.len())
        {
            return Err(Error::MalformedDocument(
                "one word of generator length is needed per label".into(),
            ));
        }
        let claimed = if self.spherical {
            PointConfiguration::spherical(self.claimed.clone(), self.labels.clone())?
        } else {
            PointConfiguration::new(self.claimed.clone(), self.labels.clone())?
        };
        Ok(GroupWitness {
            p: self.p,
            generators,
            center: DVector::from_vec(self.center.clone()),
            base: DVector::from_vec(self.base.clone()),
            words: self.words.clone(),
            claimed,
            frame: self.frame,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingDoc {
    #[serde(default = "version")]
    pub version: String,
    pub verdict: Verdict,
    pub method: EmbedMethod,
    pub p: u64,
    pub planes: usize,
    pub max_distance_error: f64,
    /// Set for isosceles constructions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub apex_angle: Option<f64>,
    pub witness: WitnessDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationDoc {
    #[serde(default = "version")]
    pub version: String,
    pub arcs: String,
    #[serde(flatten)]
    pub verdict: CircleVerdict,
    pub sides: TriangleSides,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<DecompositionCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionDoc {
    #[serde(default = "version")]
    pub version: String,
    pub verdict: Verdict,
    pub p: u64,
    pub sides: TriangleSides,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<DecompositionCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
    /// Phase-one infeasibility of the LP.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    /// Separating functional on `(X, Y, Z, total weight)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub farkas: Option<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationDoc {
    #[serde(default = "version")]
    pub version: String,
    pub verdict: Verdict,
    pub tol: f64,
    pub report: VerificationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusGapDoc {
    #[serde(default = "version")]
    pub version: String,
    pub verdict: Verdict,
    pub seed: u64,
    pub quadrature: QuadratureSpec,
    pub bound: f64,
    pub summary: GapSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarPointDoc {
    #[serde(default = "version")]
    pub version: String,
    pub verdict: Verdict,
    pub seed: u64,
    pub radii: Vec<f64>,
    /// Row-major `2n × 3` isometry.
    pub isometry: Vec<Vec<f64>>,
    pub threshold: f64,
    pub far_point: FarPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EuclideanInfo {
    pub p: u64,
    pub rank: usize,
    pub radius: f64,
    pub orbit_dim: usize,
    pub capped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchDoc {
    #[serde(default = "version")]
    pub version: String,
    pub verdict: Verdict,
    pub phi: f64,
    pub tol: f64,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub bound: usize,
    pub restarts: usize,
    pub best_restart: usize,
    pub iterations: usize,
    pub seed: u64,
    /// Row-major `n × k` frame.
    pub frame: Vec<Vec<f64>>,
    pub labels: Vec<String>,
    pub images: Vec<Vec<f64>>,
    #[serde(default)]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euclidean: Option<EuclideanInfo>,
}

impl SearchDoc {
    pub fn from_report(r: &crate::knaster::SearchReport, tol: f64, d: usize) -> Self {
        SearchDoc {
            version: version(),
            verdict: if r.success {
                Verdict::Constant
            } else {
                Verdict::NotFound
            },
            phi: r.phi,
            tol,
            n: r.n,
            k: r.frame.k(),
            d,
            bound: r.bound,
            restarts: r.restarts,
            best_restart: r.best_restart,
            iterations: r.iterations,
            seed: r.seed,
            frame: rows(r.frame.matrix()),
            labels: r.labels.clone(),
            images: r.images.clone(),
            warnings: r.warnings.clone(),
            euclidean: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDoc {
    #[serde(default = "version")]
    pub version: String,
    pub verdict: Verdict,
    pub params: DependenceParameters,
    pub n: usize,
    pub residual: f64,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation: Option<SeparationReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessDoc {
    #[serde(default = "version")]
    pub version: String,
    pub verdict: Verdict,
    pub cases: usize,
    pub max_residual: f64,
    pub tol: f64,
    pub results: Vec<HarnessResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorDoc {
    #[serde(default = "version")]
    pub version: String,
    pub verdict: Verdict,
    pub error: String,
    pub message: String,
}

impl ErrorDoc {
    pub fn from_error(e: &Error) -> Self {
        let (verdict, kind) = match e {
            Error::Infeasible { .. } => (Verdict::Infeasible, "infeasible"),
            Error::Exhausted { .. } => (Verdict::Exhausted, "exhausted"),
            Error::DimensionMismatch(_) => (Verdict::Error, "dimension_mismatch"),
            Error::LabelMismatch(_) => (Verdict::Error, "label_mismatch"),
            Error::InvalidInput(_) => (Verdict::Error, "invalid_input"),
            Error::WeightNormalization(_) => (Verdict::Error, "weight_normalization"),
            Error::Degenerate(_) => (Verdict::Error, "degenerate"),
            Error::InvalidWitness(_) => (Verdict::Error, "invalid_witness"),
            Error::MalformedCertificate(_) => (Verdict::Error, "malformed_certificate"),
            Error::MalformedDocument(_) => (Verdict::Error, "malformed_document"),
            Error::Usage(_) => (Verdict::Error, "usage"),
            Error::Syntax { .. } => (Verdict::Error, "syntax"),
            Error::UnknownIdentifier { .. } => (Verdict::Error, "unknown_identifier"),
            Error::CoincidentPoints(_) => (Verdict::Error, "coincident_points"),
            Error::RepeatedIndices(_) => (Verdict::Error, "repeated_indices"),
        };
        ErrorDoc {
            version: version(),
            verdict,
            error: kind.into(),
            message: e.to_string(),
        }
    }
}

/// Shortest decimal form of the 17-significant-digit rounding of `v`.
pub fn format_f64(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0.0" } else { "0.0" }.into();
    }
    let s = format!("{v:.16e}");
    let (mant, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if mant.starts_with('-') { "-" } else { "" };
    let digits: String = mant
        .trim_start_matches('-')
        .chars()
        .filter(|c| *c != '.')
        .collect();
    let digits = digits.trim_end_matches('0');
    let body = if (-5..17).contains(&exp) {
        if exp >= 0 {
            let e = exp as usize;
            if digits.len() <= e + 1 {
                format!("{digits}{}.0", "0".repeat(e + 1 - digits.len()))
            } else {
                format!("{}.{}", &digits[..e + 1], &digits[e + 1..])
            }
        } else {
            format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
        }
    } else if digits.len() == 1 {
        format!("{digits}e{exp}")
    } else {
        format!("{}.{}e{exp}", &digits[..1], &digits[1..])
    };
    format!("{sign}{body}")
}

struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17);
    value.serialize(&mut ser).expect("documents serialize");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euclid::two_point_orbit;
    use crate::verify_witness;

    #[test]
    fn float_format() {
        assert_eq!(format_f64(0.5), "0.5");
        assert_eq!(format_f64(1.0), "1.0");
        assert_eq!(format_f64(-2.0e20), "-2e20");
        assert_eq!(format_f64(1e-7), "9.9999999999999995e-8");
        assert_eq!(format_f64(2f64.powi(-20)), "9.5367431640625e-7");
        assert_eq!(format_f64(0.1), "0.10000000000000001");
        assert_eq!(format_f64(123456.0), "123456.0");
        for v in [
            0.1,
            1.0 / 3.0,
            -std::f64::consts::PI,
            6.02e23,
            5e-324,
            f64::MAX,
            1e16,
            1e17,
        ] {
            let back: f64 = format_f64(v).parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v}");
        }
    }

    #[test]
    fn witness_round_trip() {
        let w = two_point_orbit(5, 2.0).unwrap();
        let doc = Document::Witness(WitnessDoc::from_witness(&w));
        let text = doc.to_json();
        assert!(text.starts_with("{\"kind\":\"witness\",\"version\":\"1.0.0\""));
        let back = Document::from_json(&text).unwrap();
        assert_eq!(back, doc);
        let w2 = back.witness().unwrap().to_witness().unwrap();
        assert_eq!(w2, w);
        assert!(verify_witness(&w2, 1e-10).unwrap().pass);
    }

    #[test]
    fn config_input() {
        let d = Document::from_json(r#"{"kind":"config","points":[[0,0],[1,0]]}"#).unwrap();
        let Document::Config(c) = d else { panic!() };
        let c = c.to_config().unwrap();
        assert_eq!(c.labels(), ["0", "1"]);
        assert!(matches!(
            Document::from_json("{\"kind\":\"nope\"}"),
            Err(Error::MalformedDocument(_))
        ));
    }

    #[test]
    fn flattened_verdict() {
        let doc = Document::Classification(ClassificationDoc {
            version: version(),
            arcs: "1/5,1/5,3/5".into(),
            verdict: CircleVerdict::ZpSuborbit { p: 5 },
            sides: TriangleSides::new(1.0, 1.0, 2.0).unwrap(),
            certificate: None,
            witness: None,
        });
        let text = doc.to_json();
        assert!(
            text.contains("\"verdict\":\"zp_suborbit\",\"p\":5"),
            "{text}"
        );
        assert_eq!(Document::from_json(&text).unwrap(), doc);
    }
}
