//! Command-line dispatch.
//!
//! [`dispatch`] parses an argument list, runs one subcommand and returns the
//! JSON document it produced together with the exit code. It never prints;
//! the `suborbit` binary does that.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::certificate::{
    certificate_residual, dependence_parameters, harness_sweep, orbit_triple_harness,
    separation_demo, RepresentationPair, CERTIFICATE_TOL,
};
use crate::error::{Error, Result};
use crate::euclid::two_point_orbit;
use crate::euclid::{
    embed_simplex, isosceles_with_apex_angle, min_prime_for, realize, EmbedMethod, EmbedOptions,
    EmbedStrategy,
};
use crate::geometry::SquaredDistanceMatrix;
use crate::io::{
    CertificateDoc, ClassificationDoc, DecompositionDoc, Document, EmbeddingDoc, ErrorDoc,
    EuclideanInfo, FarPointDoc, HarnessDoc, SearchDoc, TorusGapDoc, Verdict, VerificationDoc,
    WitnessDoc, FORMAT_VERSION,
};
use crate::knaster::{
    euclidean_search, parse_test_map, parse_test_map_minimal, search_constant_configuration,
    EuclideanSearchOptions, SearchOptions,
};
use crate::sphere::{
    classify_circle_triangle, decompose_in_rp, find_prime_spherical, witness_from_certificate,
    ArcTriple, Decomposition, TriangleSides,
};
use crate::torus::{
    component_variance_report, far_point, torus_gap_trials, QuadratureSpec, SubspaceIsometry,
    TorusOrbitSpec,
};
use crate::witness::{rotation_torus_witness, verify_witness};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "suborbit", version, about = "Constructive p-torus suborbits")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Overrides the subcommand's acceptance tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Writes the document to this path instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Suppresses diagnostics.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Brick,
    GridBrick,
}

impl From<StrategyArg> for EmbedStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Auto => EmbedStrategy::Auto,
            StrategyArg::Brick => EmbedStrategy::Brick,
            StrategyArg::GridBrick => EmbedStrategy::GridBrick,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuadratureArg {
    Gauss,
    MonteCarlo,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, default_value_t = 500)]
    pub max_iterations: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Realize an affinely independent point set as a p-torus suborbit.
    EmbedSimplex {
        /// Config document.
        #[arg(long)]
        input: PathBuf,
        /// Prime order of the group.
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        /// Raise p (and refine the grid) when the requested p fails.
        #[arg(long)]
        escalate: bool,
    },
    /// Realize a triangle given by squared sides or an isosceles apex angle.
    EmbedTriangle {
        #[arg(
            long,
            conflicts_with = "apex_angle",
            required_unless_present = "apex_angle"
        )]
        /// Squared sides `|AB|²,|AC|²,|BC|²`.
        sides: Option<TriangleSides>,
        /// Apex angle in radians.
        #[arg(long)]
        apex_angle: Option<f64>,
        #[arg(long)]
        p: u64,
        /// Move to larger primes until the construction succeeds.
        #[arg(long)]
        escalate: bool,
    },
    /// Smallest prime for which the point set embeds.
    MinPrime {
        /// Config document.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 200)]
        p_max: u64,
    },
    /// Exact verdict for a triangle inscribed in the unit circle.
    ClassifyCircleTriangle {
        /// Arcs as fractions of the full turn, e.g. `1/4,1/4,1/2`.
        #[arg(long)]
        arcs: ArcTriple,
    },
    /// Decompose squared sides of a unit-circumradius triangle over Z_p atoms.
    Decompose {
        /// Squared sides `|AB|²,|AC|²,|BC|²`.
        #[arg(long)]
        sides: TriangleSides,
        #[arg(long, conflicts_with = "p_max", required_unless_present = "p_max")]
        p: Option<u64>,
        /// Search primes up to this bound instead of a fixed p.
        #[arg(long)]
        p_max: Option<u64>,
    },
    /// Build a witness from a document or a standard orbit.
    Witness {
        /// Decomposition, classification, embedding or witness document.
        #[arg(long, conflicts_with_all = ["pgon", "two_point"])]
        input: Option<PathBuf>,
        /// Regular p-gon on the unit circle as a Z_p orbit.
        #[arg(long, conflicts_with = "two_point")]
        pgon: Option<u64>,
        /// Two vertices of a regular simplex: `p,t`.
        #[arg(long, value_parser = parse_two_point)]
        two_point: Option<(u64, f64)>,
    },
    /// Check a witness carried by any document.
    VerifyWitness {
        /// Any document that carries a witness.
        #[arg(long)]
        input: PathBuf,
    },
    /// Variance lower bound on random 3-dimensional isometries into C^n.
    TorusGapVerify {
        /// Complex dimension of the torus.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = QuadratureArg::Gauss)]
        quadrature: QuadratureArg,
        #[arg(long, default_value_t = 64)]
        polar: usize,
        #[arg(long, default_value_t = 256)]
        azimuth: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Point of the sphere far from a torus orbit.
    FarPoint {
        /// Complex dimension of the torus.
        #[arg(long)]
        n: usize,
        /// Orbit radii; defaults to the variance-optimal orbit.
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
    },
    /// Place a witnessed point set so that a test map is constant on it.
    KnasterSearch {
        /// Document carrying a witness; its claimed points are searched.
        #[arg(long)]
        witness: PathBuf,
        /// Components separated by `;`, variables `x1..xn`.
        #[arg(long)]
        map: String,
        /// Dimension of the search space.
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Embed a point set as a suborbit and search over the resulting sphere.
    KnasterEuclidean {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: u64,
        /// Components separated by `;`, variables `x1..xn`.
        #[arg(long)]
        map: String,
        /// Cap on the search dimension.
        #[arg(long, default_value_t = 64)]
        max_dim: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Determinant certificate of a circle triple against a rotation pair.
    Certificate {
        /// Positions as fractions of the full turn, e.g. `0,1/5,2/5`.
        #[arg(long, value_delimiter = ',', required = true)]
        turns: Vec<String>,
        /// Order of the rotations G = R(2πj/p), H = R(2πk/p).
        #[arg(long)]
        p: u64,
        #[arg(long)]
        j: u64,
        #[arg(long)]
        k: u64,
        /// Copies of the 2×2 rotation blocks.
        #[arg(long, default_value_t = 1)]
        blocks: usize,
        /// Also sample this many random triples against the p = 3 pair.
        #[arg(long)]
        separation: Option<usize>,
    },
    /// Certificate on constructed orbit triples.
    OrbitHarness {
        #[arg(
            long,
            conflicts_with = "p_max",
            required_unless_present = "p_max",
            requires = "steps"
        )]
        p: Option<u64>,
        /// Rotation steps `j,k`.
        #[arg(long, value_parser = parse_steps)]
        steps: Option<(u64, u64)>,
        /// Sweep all primes up to this bound and all step pairs.
        #[arg(long)]
        p_max: Option<u64>,
        #[arg(long, default_value_t = 1)]
        blocks: usize,
    },
}

fn parse_two_point(s: &str) -> std::result::Result<(u64, f64), String> {
    let (p, t) = s.split_once(',').ok_or("expected p,t")?;
    Ok((
        p.trim().parse().map_err(|e| format!("p: {e}"))?,
        t.trim().parse().map_err(|e| format!("t: {e}"))?,
    ))
}

fn parse_steps(s: &str) -> std::result::Result<(u64, u64), String> {
    let (j, k) = s.split_once(',').ok_or("expected j,k")?;
    Ok((
        j.trim().parse().map_err(|e| format!("j: {e}"))?,
        k.trim().parse().map_err(|e| format!("k: {e}"))?,
    ))
}

/// `a/b` or a decimal.
fn parse_fraction(s: &str) -> Result<f64> {
    let s = s.trim();
    if s.contains('/') {
        let r: Ratio<i64> = s
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad fraction `{s}`")))?;
        Ok(*r.numer() as f64 / *r.denom() as f64)
    } else {
        s.parse()
            .map_err(|_| Error::InvalidInput(format!("bad number `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub exit_code: i32,
    /// `None` for `--help` and `--version`.
    pub document: Option<Document>,
    /// What goes to standard output: the JSON document, help text, or
    /// nothing when `--output` was given.
    pub stdout: String,
    pub diagnostics: String,
}

/// Parses and runs one command line (including the program name).
pub fn dispatch<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return CommandResult {
                    exit_code: 0,
                    document: None,
                    stdout: e.to_string(),
                    diagnostics: String::new(),
                };
            }
            let message = e.to_string();
            let doc = Document::Error(ErrorDoc::from_error(&Error::Usage(
                message.trim_start_matches("error: ").trim_end().to_string(),
            )));
            return CommandResult {
                exit_code: 1,
                stdout: doc.to_json(),
                document: Some(doc),
                diagnostics: message,
            };
        }
    };
    let mut diag = Vec::new();
    let doc = match run(&cli, &mut diag) {
        Ok(doc) => doc,
        Err(e) => {
            diag.push(format!("error: {e}"));
            Document::Error(ErrorDoc::from_error(&e))
        }
    };
    let text = doc.to_json();
    let mut exit_code = doc.exit_code();
    let mut stdout = text.clone();
    if let Some(path) = &cli.output {
        match fs::write(path, &text) {
            Ok(()) => stdout.clear(),
            Err(e) => {
                diag.push(format!("error: cannot write {}: {e}", path.display()));
                exit_code = 1;
            }
        }
    }
    CommandResult {
        exit_code,
        document: Some(doc),
        stdout,
        diagnostics: if cli.quiet {
            String::new()
        } else {
            diag.join("\n")
        },
    }
}

fn read_document(path: &Path) -> Result<Document> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    Document::from_json(&text)
}

fn read_config(path: &Path) -> Result<crate::geometry::PointConfiguration> {
    match read_document(path)? {
        Document::Config(c) => c.to_config(),
        other => Err(Error::MalformedDocument(format!(
            "expected a config document, got {}",
            other.kind()
        ))),
    }
}

fn embedding_doc(emb: &crate::euclid::Embedding) -> Document {
    Document::Embedding(EmbeddingDoc {
        version: FORMAT_VERSION.into(),
        verdict: Verdict::Embedded,
        method: emb.method,
        p: emb.p,
        planes: emb.planes,
        max_distance_error: emb.max_distance_error,
        apex_angle: None,
        witness: WitnessDoc::from_witness(&emb.witness),
    })
}

fn decomposition_doc(t: TriangleSides, p: u64, d: &Decomposition) -> Result<Document> {
    Ok(Document::Decomposition(match d {
        Decomposition::Feasible(c) => DecompositionDoc {
            version: FORMAT_VERSION.into(),
            verdict: Verdict::Feasible,
            p,
            sides: t,
            certificate: Some(c.clone()),
            witness: Some(WitnessDoc::from_witness(&witness_from_certificate(c)?)),
            residual: None,
            farkas: None,
        },
        Decomposition::Infeasible { residual, farkas } => DecompositionDoc {
            version: FORMAT_VERSION.into(),
            verdict: Verdict::Infeasible,
            p,
            sides: t,
            certificate: None,
            witness: None,
            residual: Some(*residual),
            farkas: Some(*farkas),
        },
    }))
}

fn search_options(cli: &Cli, s: &SearchArgs) -> SearchOptions {
    SearchOptions {
        restarts: s.restarts,
        max_iterations: s.max_iterations,
        tol: cli.tol.unwrap_or(SearchOptions::default().tol),
        seed: cli.seed,
        ..SearchOptions::default()
    }
}

fn run(cli: &Cli, diag: &mut Vec<String>) -> Result<Document> {
    let embed_opts = |strategy: EmbedStrategy, escalate: bool| EmbedOptions {
        strategy,
        escalate,
        seed: cli.seed,
        ..EmbedOptions::default()
    };
    match &cli.command {
        Command::EmbedSimplex {
            input,
            p,
            strategy,
            escalate,
        } => {
            let x = read_config(input)?;
            let emb = embed_simplex(&x, *p, &embed_opts((*strategy).into(), *escalate))?;
            diag.push(format!(
                "embedded {} points at p = {} ({:?})",
                x.len(),
                emb.p,
                emb.method
            ));
            Ok(embedding_doc(&emb))
        }
        Command::EmbedTriangle {
            sides,
            apex_angle,
            p,
            escalate,
        } => {
            if let Some(alpha) = apex_angle {
                let iso = isosceles_with_apex_angle(*alpha, *p)?;
                let rep = verify_witness(&iso.witness, cli.tol.unwrap_or(1e-7))?;
                diag.push(format!(
                    "t = {}, attainable apex angles below {}",
                    iso.t, iso.max_angle
                ));
                return Ok(Document::Embedding(EmbeddingDoc {
                    version: FORMAT_VERSION.into(),
                    verdict: if rep.pass {
                        Verdict::Embedded
                    } else {
                        Verdict::Fail
                    },
                    method: EmbedMethod::Isosceles,
                    p: *p,
                    planes: iso.witness.rank(),
                    max_distance_error: rep.max_distance_error,
                    apex_angle: Some(iso.apex_angle),
                    witness: WitnessDoc::from_witness(&iso.witness),
                }));
            }
            let t = sides.expect("clap requires sides or apex angle");
            let d = SquaredDistanceMatrix::from_sides(t.x, t.y, t.z)?;
            let x = realize(&d, vec!["A".into(), "B".into(), "C".into()])?;
            let emb = embed_simplex(&x, *p, &embed_opts(EmbedStrategy::Auto, *escalate))?;
            Ok(embedding_doc(&emb))
        }
        Command::MinPrime { input, p_max } => {
            let x = read_config(input)?;
            let emb = min_prime_for(&x, *p_max, &embed_opts(EmbedStrategy::Auto, false))?;
            diag.push(format!("smallest prime: {}", emb.p));
            Ok(embedding_doc(&emb))
        }
        Command::ClassifyCircleTriangle { arcs } => {
            let c = classify_circle_triangle(arcs)?;
            Ok(Document::Classification(ClassificationDoc {
                version: FORMAT_VERSION.into(),
                arcs: c.arcs.to_string(),
                verdict: c.verdict,
                sides: crate::sphere::sides_from_arcs(&c.arcs),
                certificate: c.certificate.clone(),
                witness: c.witness.as_ref().map(WitnessDoc::from_witness),
            }))
        }
        Command::Decompose { sides, p, p_max } => match (p, p_max) {
            (Some(p), _) => decomposition_doc(*sides, *p, &decompose_in_rp(sides, *p)?),
            (None, Some(p_max)) => {
                let (p, cert) = find_prime_spherical(sides, *p_max)?;
                diag.push(format!("smallest prime: {p}"));
                decomposition_doc(*sides, p, &Decomposition::Feasible(cert))
            }
            (None, None) => Err(Error::Usage("--p or --p-max is required".into())),
        },
        Command::Witness {
            input,
            pgon,
            two_point,
        } => {
            let w = if let Some(path) = input {
                match read_document(path)? {
                    Document::Decomposition(DecompositionDoc {
                        certificate: Some(c),
                        ..
                    })
                    | Document::Classification(ClassificationDoc {
                        certificate: Some(c),
                        ..
                    }) => witness_from_certificate(&c)?,
                    doc => match doc.witness() {
                        Some(w) => w.to_witness()?,
                        None => {
                            return Err(Error::MalformedDocument(format!(
                                "{} document carries no witness",
                                doc.kind()
                            )))
                        }
                    },
                }
            } else if let Some(p) = pgon {
                let p = *p;
                if p < 2 {
                    return Err(Error::InvalidInput("a p-gon needs p >= 2".into()));
                }
                rotation_torus_witness(
                    p,
                    &[1.0],
                    &[],
                    (0..p).map(|i| vec![i]).collect(),
                    (0..p).map(|i| i.to_string()).collect(),
                    true,
                )?
            } else if let Some((p, t)) = two_point {
                two_point_orbit(*p, *t)?
            } else {
                return Err(Error::Usage(
                    "one of --input, --pgon, --two-point is required".into(),
                ));
            };
            Ok(Document::Witness(WitnessDoc::from_witness(&w)))
        }
        Command::VerifyWitness { input } => {
            let doc = read_document(input)?;
            let w = doc
                .witness()
                .ok_or_else(|| {
                    Error::MalformedDocument(format!("{} document carries no witness", doc.kind()))
                })?
                .to_witness()?;
            let tol = cli.tol.unwrap_or(1e-7);
            let report = verify_witness(&w, tol)?;
            Ok(Document::Verification(VerificationDoc {
                version: FORMAT_VERSION.into(),
                verdict: if report.pass {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                },
                tol,
                report,
            }))
        }
        Command::TorusGapVerify {
            n,
            trials,
            quadrature,
            polar,
            azimuth,
            samples,
        } => {
            let q = match quadrature {
                QuadratureArg::Gauss => QuadratureSpec::ProductGauss {
                    polar: *polar,
                    azimuth: *azimuth,
                },
                QuadratureArg::MonteCarlo => QuadratureSpec::MonteCarlo {
                    samples: *samples,
                    seed: cli.seed,
                },
            };
            let summary = torus_gap_trials(*n, *trials, cli.seed, &q)?;
            let tol = cli.tol.unwrap_or(1e-6);
            let pass =
                summary.min_total >= 1.0 / 16.0 - tol && summary.min_far_distance >= 0.25 - tol;
            diag.push(format!("min total variance {}", summary.min_total));
            Ok(Document::TorusGap(TorusGapDoc {
                version: FORMAT_VERSION.into(),
                verdict: if pass { Verdict::Pass } else { Verdict::Fail },
                seed: cli.seed,
                quadrature: q,
                bound: 1.0 / 16.0,
                summary,
            }))
        }
        Command::FarPoint { n, radii } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let lambda = SubspaceIsometry::random(*n, &mut rng)?;
            let c = match radii {
                Some(r) => TorusOrbitSpec::new(r.clone())?,
                None => {
                    component_variance_report(&lambda, &QuadratureSpec::default()).optimal_orbit()
                }
            };
            let fp = far_point(&lambda, &c)?;
            let tol = cli.tol.unwrap_or(1e-6);
            Ok(Document::FarPoint(FarPointDoc {
                version: FORMAT_VERSION.into(),
                verdict: if fp.distance >= 0.25 - tol {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                },
                seed: cli.seed,
                radii: c.radii().to_vec(),
                isometry: lambda
                    .matrix()
                    .row_iter()
                    .map(|r| r.iter().copied().collect())
                    .collect(),
                threshold: 0.25,
                far_point: fp,
            }))
        }
        Command::KnasterSearch {
            witness,
            map,
            n,
            search,
        } => {
            let doc = read_document(witness)?;
            let w = doc
                .witness()
                .ok_or_else(|| {
                    Error::MalformedDocument(format!("{} document carries no witness", doc.kind()))
                })?
                .to_witness()?;
            let f = parse_test_map(map, *n)?;
            let opts = search_options(cli, search);
            let r = search_constant_configuration(&w.claimed, &w, &f, *n, &opts)?;
            diag.extend(r.warnings.iter().map(|s| format!("warning: {s}")));
            Ok(Document::Search(SearchDoc::from_report(
                &r,
                opts.tol,
                f.d(),
            )))
        }
        Command::KnasterEuclidean {
            input,
            p,
            map,
            max_dim,
            search,
        } => {
            let x = read_config(input)?;
            let f = parse_test_map_minimal(map)?;
            let opts = EuclideanSearchOptions {
                search: search_options(cli, search),
                embed: EmbedOptions {
                    escalate: true,
                    seed: cli.seed,
                    ..EmbedOptions::default()
                },
                max_dimension: *max_dim,
            };
            let r = euclidean_search(&x, *p, &f, f.d(), &opts)?;
            diag.extend(r.search.warnings.iter().map(|s| format!("warning: {s}")));
            if r.capped {
                diag.push(format!("warning: search dimension capped at {max_dim}"));
            }
            let mut doc = SearchDoc::from_report(&r.search, opts.search.tol, f.d());
            doc.euclidean = Some(EuclideanInfo {
                p: r.p,
                rank: r.rank,
                radius: r.radius,
                orbit_dim: r.orbit_dim,
                capped: r.capped,
            });
            Ok(Document::Search(doc))
        }
        Command::Certificate {
            turns,
            p,
            j,
            k,
            blocks,
            separation,
        } => {
            if turns.len() != 3 {
                return Err(Error::DimensionMismatch(format!(
                    "expected three positions, got {}",
                    turns.len()
                )));
            }
            let mut pts = [[0.0; 2]; 3];
            for (pt, s) in pts.iter_mut().zip(turns) {
                let a = 2.0 * std::f64::consts::PI * parse_fraction(s)?;
                *pt = [a.cos(), a.sin()];
            }
            let params = dependence_parameters(pts[0], pts[1], pts[2])?;
            let rep = RepresentationPair::cyclic(*p, *j, *k, *blocks)?;
            let residual = certificate_residual(params.as_array(), &rep);
            let tol = cli.tol.unwrap_or(CERTIFICATE_TOL);
            let separation = separation
                .map(|s| separation_demo(s, cli.seed))
                .transpose()?;
            Ok(Document::Certificate(CertificateDoc {
                version: FORMAT_VERSION.into(),
                verdict: if residual.abs() < tol {
                    Verdict::Vanishes
                } else {
                    Verdict::Nonzero
                },
                params,
                n: rep.n(),
                residual,
                tol,
                separation,
            }))
        }
        Command::OrbitHarness {
            p,
            steps,
            p_max,
            blocks,
        } => {
            let results = match (p, p_max) {
                (Some(p), _) => {
                    let steps =
                        steps.ok_or_else(|| Error::Usage("--steps is required with --p".into()))?;
                    vec![orbit_triple_harness(*p, steps, *blocks)?]
                }
                (None, Some(p_max)) => harness_sweep(*p_max, *blocks)?,
                (None, None) => return Err(Error::Usage("--p or --p-max is required".into())),
            };
            let tol = cli.tol.unwrap_or(CERTIFICATE_TOL);
            let max_residual = results.iter().map(|r| r.residual.abs()).fold(0.0, f64::max);
            Ok(Document::Harness(HarnessDoc {
                version: FORMAT_VERSION.into(),
                verdict: if max_residual < tol {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                },
                cases: results.len(),
                max_residual,
                tol,
                results,
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> CommandResult {
        dispatch(std::iter::once("suborbit").chain(args.iter().copied()))
    }

    #[test]
    fn spec_examples() {
        let r = run(&["classify-circle-triangle", "--arcs", "1/4,1/4,1/2"]);
        assert_eq!(r.exit_code, 0, "{}", r.stdout);
        assert!(r.stdout.contains("\"verdict\":\"right_angled\""));
        assert!(r.stdout.contains("\"witness\""));

        let r = run(&["decompose", "--sides", "4,3,3", "--p", "5"]);
        assert_eq!(r.exit_code, 2, "{}", r.stdout);
        assert!(r.stdout.contains("\"verdict\":\"infeasible\""));
    }

    #[test]
    fn usage_errors_are_documents() {
        let r = run(&["no-such-command"]);
        assert_eq!(r.exit_code, 1);
        assert!(r.stdout.contains("\"kind\":\"error\""));
        let r = run(&["--help"]);
        assert_eq!(r.exit_code, 0);
        assert!(r.document.is_none());
    }

    #[test]
    fn fractions() {
        assert_eq!(parse_fraction("1/4").unwrap(), 0.25);
        assert_eq!(parse_fraction("0.5").unwrap(), 0.5);
        assert!(parse_fraction("a/b").is_err());
    }
}
