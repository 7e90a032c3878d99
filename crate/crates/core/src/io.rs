//! Versioned JSON schemas (`"schema": "convexproj/1"`), a float formatter
//! that keeps 17 significant digits, and CSV views.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::benzecri::BenzecriChart;
use crate::body::{convex_hull, ConvexBody, Facet};
use crate::charfn::CharEval;
use crate::cone::PolyCone;
use crate::cusps::{CuspRep, DeformPath, DeformSample, Keyframe};
use crate::error::Error;
use crate::linalg::{matrix_from_rows, matrix_to_rows, Matrix, ProjMatrix, Vector};
use crate::smoothing::{BoundaryPatch, SmoothedPatch};

pub const SCHEMA: &str = "convexproj/1";

/// Failure to read or interpret an input document.
#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Domain(#[from] Error),
}

impl From<serde_json::Error> for LoadError {
    fn from(e: serde_json::Error) -> Self {
        Self::Schema(e.to_string())
    }
}

struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + std::io::Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Compact JSON with every float as `{:.16e}` and non-finite floats as `null`.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value.serialize(&mut ser).expect("report types always serialize");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Parses a document and rejects a `schema` field other than [`SCHEMA`].
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, LoadError> {
    let raw: serde_json::Value = serde_json::from_str(text)?;
    if let Some(s) = raw.get("schema") {
        if s != SCHEMA {
            return Err(LoadError::Schema(format!("unsupported schema {s}")));
        }
    }
    Ok(serde_json::from_value(raw)?)
}

fn schema() -> String {
    SCHEMA.to_string()
}

fn vec_of(v: &Vector) -> Vec<f64> {
    v.iter().copied().collect()
}

fn vector(v: &[f64]) -> Vector {
    Vector::from_column_slice(v)
}

fn square(rows: &[Vec<f64>], size: usize) -> Result<Matrix, LoadError> {
    let m = matrix_from_rows(rows)?;
    if m.nrows() != size || m.ncols() != size {
        return Err(LoadError::Schema(format!(
            "expected a {size}x{size} matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m)
}

fn check_len(v: &[f64], n: usize, what: &str) -> Result<(), LoadError> {
    if v.len() == n {
        Ok(())
    } else {
        Err(LoadError::Schema(format!("{what} has length {}, expected {n}", v.len())))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacetJson {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// `{"dim":n,"vertices":[[...]],"facets":[{"normal":[...],"offset":r}]}`;
/// either list may be omitted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyJson {
    #[serde(default = "schema")]
    pub schema: String,
    pub dim: usize,
    #[serde(default)]
    pub vertices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<FacetJson>>,
}

impl BodyJson {
    pub fn from_body(body: &ConvexBody) -> Self {
        Self {
            schema: schema(),
            dim: body.dim(),
            vertices: body.vertices().iter().map(vec_of).collect(),
            facets: Some(
                body.facets()
                    .iter()
                    .map(|f| FacetJson {
                        normal: vec_of(&f.normal),
                        offset: f.offset,
                    })
                    .collect(),
            ),
        }
    }

    /// Vertices win when present; facets are then ignored.
    pub fn to_body(&self) -> Result<ConvexBody, LoadError> {
        if !self.vertices.is_empty() {
            for v in &self.vertices {
                check_len(v, self.dim, "vertex")?;
            }
            let pts: Vec<Vector> = self.vertices.iter().map(|v| vector(v)).collect();
            return Ok(convex_hull(&pts)?);
        }
        let facets = self
            .facets
            .as_ref()
            .ok_or_else(|| LoadError::Schema("body needs vertices or facets".into()))?
            .iter()
            .map(|f| {
                check_len(&f.normal, self.dim, "facet normal")?;
                Ok(Facet::new(vector(&f.normal), f.offset)?)
            })
            .collect::<Result<Vec<_>, LoadError>>()?;
        Ok(ConvexBody::from_halfspaces(self.dim, facets)?)
    }
}

/// A polyhedral cone by generators or by facet functionals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeJson {
    #[serde(default = "schema")]
    pub schema: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normals: Option<Vec<Vec<f64>>>,
}

impl ConeJson {
    pub fn from_cone(cone: &PolyCone) -> Self {
        Self {
            schema: schema(),
            dim: cone.ambient_dim(),
            generators: Some(cone.generators().iter().map(vec_of).collect()),
            normals: None,
        }
    }

    pub fn to_cone(&self) -> Result<PolyCone, LoadError> {
        let parse = |rows: &Vec<Vec<f64>>| -> Result<Vec<Vector>, LoadError> {
            rows.iter()
                .map(|r| {
                    check_len(r, self.dim, "cone vector")?;
                    Ok(vector(r))
                })
                .collect()
        };
        match (&self.generators, &self.normals) {
            (Some(g), None) => Ok(PolyCone::from_generators(&parse(g)?)?),
            (None, Some(n)) => Ok(PolyCone::from_normals(&parse(n)?)?),
            _ => Err(LoadError::Schema("cone needs exactly one of generators, normals".into())),
        }
    }
}

/// A bare array of points or `{"points": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointsJson {
    Bare(Vec<Vec<f64>>),
    Wrapped {
        #[serde(default = "schema")]
        schema: String,
        points: Vec<Vec<f64>>,
    },
}

impl PointsJson {
    pub fn points(&self) -> &[Vec<f64>] {
        match self {
            Self::Bare(p) | Self::Wrapped { points: p, .. } => p,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartReport {
    pub schema: String,
    pub n: usize,
    pub point: Vec<f64>,
    pub tau: Vec<Vec<f64>>,
    #[serde(rename = "R_achieved")]
    pub r_achieved: f64,
    #[serde(rename = "R_bound")]
    pub r_bound: f64,
    pub verified: bool,
    pub image: BodyJson,
}

impl ChartReport {
    pub fn new(chart: &BenzecriChart, point: &Vector, verified: bool) -> Self {
        Self {
            schema: schema(),
            n: chart.n,
            point: vec_of(point),
            tau: chart.tau.to_rows(),
            r_achieved: chart.r_achieved,
            r_bound: 5f64.powi(chart.n as i32 - 1),
            verified,
            image: BodyJson::from_body(&chart.image),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharEvalJson {
    pub x: Vec<f64>,
    pub chi: f64,
    pub log_chi: f64,
    pub c: f64,
    pub grad_c: Vec<f64>,
    pub hess_c: Vec<Vec<f64>>,
    pub min_eig_hess: f64,
}

impl From<&CharEval> for CharEvalJson {
    fn from(e: &CharEval) -> Self {
        Self {
            x: vec_of(&e.x),
            chi: e.chi,
            log_chi: e.log_chi,
            c: e.c,
            grad_c: vec_of(&e.grad_c),
            hess_c: matrix_to_rows(&e.hess_c),
            min_eig_hess: e.hess_c.clone().symmetric_eigen().eigenvalues.min(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KappaJson {
    pub samples: usize,
    pub seed: u64,
    pub estimate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharfnReport {
    pub schema: String,
    pub records: Vec<CharEvalJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<KappaJson>,
}

impl CharfnReport {
    pub fn new(records: &[CharEval], kappa: Option<KappaJson>) -> Self {
        Self {
            schema: schema(),
            records: records.iter().map(CharEvalJson::from).collect(),
            kappa,
        }
    }
}

/// Columns `x0..x{n-1}, chi, c, min_eig_hess`.
pub fn charfn_csv(records: &[CharEvalJson]) -> String {
    let n = records.first().map_or(0, |r| r.x.len());
    let mut out: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    out.extend(["chi", "c", "min_eig_hess"].map(String::from));
    let mut text = out.join(",") + "\n";
    for r in records {
        let mut row: Vec<String> = r.x.iter().map(|v| csv_f64(*v)).collect();
        row.extend([r.chi, r.c, r.min_eig_hess].map(csv_f64));
        text += &row.join(",");
        text.push('\n');
    }
    text
}

fn csv_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchJson {
    #[serde(default = "schema")]
    pub schema: String,
    pub radius: f64,
    pub points: Vec<Vec<f64>>,
    pub heights: Vec<f64>,
}

impl PatchJson {
    pub fn to_patch(&self) -> Result<BoundaryPatch, LoadError> {
        if self.points.len() != self.heights.len() {
            return Err(LoadError::Schema(format!(
                "{} points but {} heights",
                self.points.len(),
                self.heights.len()
            )));
        }
        Ok(BoundaryPatch {
            radius: self.radius,
            points: self.points.iter().map(|p| vector(p)).collect(),
            heights: self.heights.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothReport {
    pub schema: String,
    pub kappa: f64,
    pub radius: f64,
    pub alpha: f64,
    pub beta: f64,
    pub points: Vec<Vec<f64>>,
    pub heights: Vec<f64>,
    pub input_heights: Vec<f64>,
}

impl SmoothReport {
    pub fn new(kappa: f64, input: &BoundaryPatch, out: &SmoothedPatch) -> Self {
        Self {
            schema: schema(),
            kappa,
            radius: out.radius,
            alpha: out.alpha,
            beta: out.beta,
            points: out.points.iter().map(vec_of).collect(),
            heights: out.heights.clone(),
            input_heights: input.heights.clone(),
        }
    }
}

/// `{"dim":3,"generators":[[[...],...],...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepJson {
    #[serde(default = "schema")]
    pub schema: String,
    pub dim: usize,
    pub generators: Vec<Vec<Vec<f64>>>,
}

fn matrices(rows: &[Vec<Vec<f64>>], dim: usize) -> Result<Vec<ProjMatrix>, LoadError> {
    rows.iter()
        .map(|g| Ok(ProjMatrix::new(square(g, dim + 1)?)?))
        .collect()
}

impl RepJson {
    pub fn from_rep(rep: &CuspRep) -> Self {
        Self {
            schema: schema(),
            dim: rep.dim(),
            generators: rep.generators().iter().map(ProjMatrix::to_rows).collect(),
        }
    }

    pub fn to_rep(&self) -> Result<CuspRep, LoadError> {
        Ok(CuspRep::new(matrices(&self.generators, self.dim)?)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KeyframeJson {
    pub t: f64,
    pub generators: Vec<Vec<Vec<f64>>>,
}

/// `{"keyframes":[{"t":0,"generators":[...]},...]}` with optional
/// `base_point` (homogeneous coordinates).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathJson {
    #[serde(default = "schema")]
    pub schema: String,
    pub keyframes: Vec<KeyframeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<Vec<f64>>,
}

impl PathJson {
    pub fn from_path(path: &DeformPath) -> Self {
        Self {
            schema: schema(),
            keyframes: path
                .keyframes
                .iter()
                .map(|k| KeyframeJson {
                    t: k.t,
                    generators: k.generators.iter().map(ProjMatrix::to_rows).collect(),
                })
                .collect(),
            base_point: path.base_point.clone(),
        }
    }

    pub fn to_path(&self) -> Result<DeformPath, LoadError> {
        let first = self
            .keyframes
            .first()
            .and_then(|k| k.generators.first())
            .ok_or_else(|| LoadError::Schema("path needs at least one keyframe with generators".into()))?;
        let dim = first.len().saturating_sub(1);
        let keyframes = self
            .keyframes
            .iter()
            .map(|k| {
                Ok(Keyframe {
                    t: k.t,
                    generators: matrices(&k.generators, dim)?,
                })
            })
            .collect::<Result<Vec<_>, LoadError>>()?;
        if let Some(p) = &self.base_point {
            check_len(p, dim + 1, "base_point")?;
        }
        Ok(DeformPath {
            keyframes,
            base_point: self.base_point.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformSampleJson {
    pub t: f64,
    pub stage_reached: String,
    pub vfg_witness: Option<usize>,
    pub verdict: Option<String>,
    pub min_eig_q: Option<f64>,
    pub hausdorff_delta: Option<f64>,
    pub hull_delta: Option<f64>,
    pub error: Option<String>,
}

impl From<&DeformSample> for DeformSampleJson {
    fn from(s: &DeformSample) -> Self {
        Self {
            t: s.t,
            stage_reached: s.stage_reached.as_str().into(),
            vfg_witness: s.vfg_witness,
            verdict: s.verdict.map(|v| v.as_str().into()),
            min_eig_q: s.min_eig_q,
            hausdorff_delta: s.hausdorff_delta,
            hull_delta: s.hull_delta,
            error: s.error.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformReport {
    pub schema: String,
    pub samples: Vec<DeformSampleJson>,
}

impl DeformReport {
    pub fn new(samples: &[DeformSample]) -> Self {
        Self {
            schema: schema(),
            samples: samples.iter().map(DeformSampleJson::from).collect(),
        }
    }
}

/// Columns `t, stage_reached, min_eig_Q, hausdorff_delta`; missing values empty.
pub fn deform_csv(samples: &[DeformSampleJson]) -> String {
    let mut text = String::from("t,stage_reached,min_eig_Q,hausdorff_delta\n");
    for s in samples {
        let opt = |v: Option<f64>| v.map(csv_f64).unwrap_or_default();
        text += &format!(
            "{},{},{},{}\n",
            csv_f64(s.t),
            s.stage_reached,
            opt(s.min_eig_q),
            opt(s.hausdorff_delta)
        );
    }
    text
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightJson {
    pub characters: Vec<f64>,
    pub dim: usize,
    pub eigenspace_dim: usize,
    pub flow_kind: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub base_point: Vec<f64>,
    pub chart: usize,
    pub normal: Vec<f64>,
    pub q: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    pub tangent_rank: usize,
    pub verdict: String,
    pub tolerance: f64,
}

impl From<&crate::cusps::ConvexityCertificate> for CertificateJson {
    fn from(c: &crate::cusps::ConvexityCertificate) -> Self {
        Self {
            base_point: vec_of(c.base_point.coords()),
            chart: c.chart,
            normal: vec_of(&c.normal),
            q: matrix_to_rows(&c.q),
            eigenvalues: c.eigenvalues.clone(),
            tangent_rank: c.tangent_rank,
            verdict: c.verdict.as_str().into(),
            tolerance: c.tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainJson {
    pub chart: usize,
    pub flow_generator: Vec<Vec<f64>>,
    pub flow_kind: String,
    pub boundary_samples: usize,
    pub hull_vertices: usize,
    pub invariance_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuspReport {
    pub schema: String,
    pub family: String,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub rep: RepJson,
    pub lie_generators: Vec<Vec<Vec<f64>>>,
    pub vfg_witness: Option<usize>,
    pub weights: Vec<WeightJson>,
    pub translation_dim: usize,
    pub bracket_residual: f64,
    pub roundtrip_residual: f64,
    pub certificate: CertificateJson,
    pub domain: Option<DomainJson>,
    pub domain_error: Option<String>,
}

/// Structured domain error for the error stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorReport {
    pub schema: String,
    pub kind: String,
    pub message: String,
}

impl ErrorReport {
    pub fn new(kind: &str, message: String) -> Self {
        Self {
            schema: schema(),
            kind: kind.into(),
            message,
        }
    }

    pub fn from_error(e: &Error) -> Self {
        Self::new(error_kind(e), e.to_string())
    }
}

/// Variant name of a domain error.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DimensionMismatch { .. } => "DimensionMismatch",
        Error::UnsupportedDimension(_) => "UnsupportedDimension",
        Error::NonFinite => "NonFinite",
        Error::Overflow(_) => "Overflow",
        Error::NotEMatrix { .. } => "NotEMatrix",
        Error::Singular => "Singular",
        Error::NoCommonFlag(_) => "NoCommonFlag",
        Error::NotPointed => "NotPointed",
        Error::PointNotInterior => "PointNotInterior",
        Error::NotInterior(_) => "NotInterior",
        Error::EmptySet => "EmptySet",
        Error::DegenerateSpan { .. } => "DegenerateSpan",
        Error::NumericalDegeneracy(_) => "NumericalDegeneracy",
        Error::BadKappa(_) => "BadKappa",
        Error::NonPositiveInput(..) => "NonPositiveInput",
        Error::FlatFunction => "FlatFunction",
        Error::NoValidAlphaBeta(_) => "NoValidAlphaBeta",
        Error::NotConvexPatch(_) => "NotConvexPatch",
        Error::BadParams(_) => "BadParams",
        Error::NotVfg(_) => "NotVfg",
        Error::NotEGroup { .. } => "NotEGroup",
        Error::NotLieClosed(_) => "NotLieClosed",
        Error::UnknownWeight => "UnknownWeight",
        Error::WrongDimension { .. } => "WrongDimension",
        Error::NotStrictlyConvex(_) => "NotStrictlyConvex",
        Error::FlowlineMisses => "FlowlineMisses",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cusps::{deform_path_check, CuspFamily, DeformOptions, OrbitGrid};

    #[test]
    fn floats_keep_seventeen_digits_and_round_trip() {
        let v = vec![0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE];
        let text = to_json(&v);
        assert!(text.contains("1.0000000000000001e-1"), "{text}");
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
        assert_eq!(to_json(&vec![f64::NAN, f64::INFINITY]), "[null,null]");
    }

    #[test]
    fn body_round_trip() {
        let body = ConvexBody::standard_simplex(2).unwrap();
        let json = to_json(&BodyJson::from_body(&body));
        let parsed: BodyJson = from_json(&json).unwrap();
        assert_eq!(parsed, BodyJson::from_body(&body));
        let rebuilt = parsed.to_body().unwrap();
        assert_eq!(rebuilt.vertices().len(), 3);
        let halfspaces = BodyJson {
            facets: parsed.facets.clone(),
            vertices: Vec::new(),
            ..parsed
        };
        assert_eq!(halfspaces.to_body().unwrap().vertices().len(), 3);
    }

    #[test]
    fn schema_and_shape_errors() {
        assert!(matches!(
            from_json::<BodyJson>(r#"{"schema":"other/2","dim":1,"vertices":[[0],[1]]}"#),
            Err(LoadError::Schema(_))
        ));
        assert!(matches!(from_json::<BodyJson>(r#"{"dim":1,"bogus":3}"#), Err(LoadError::Schema(_))));
        let bad = from_json::<RepJson>(r#"{"dim":3,"generators":[[[1,0],[0,1]]]}"#).unwrap();
        assert!(matches!(bad.to_rep(), Err(LoadError::Schema(_))));
    }

    #[test]
    fn points_accept_both_shapes() {
        let a: PointsJson = from_json("[[1,2],[3,4]]").unwrap();
        let b: PointsJson = from_json(r#"{"points":[[1,2],[3,4]]}"#).unwrap();
        assert_eq!(a.points(), b.points());
    }

    #[test]
    fn deform_report_round_trip_and_csv() {
        let f = CuspFamily::C3 { alpha: 1.0, beta: 2.0 };
        let rep = f.lattice().unwrap();
        let path = PathJson {
            schema: schema(),
            keyframes: vec![
                KeyframeJson { t: 0.0, generators: RepJson::from_rep(&rep).generators },
                KeyframeJson { t: 1.0, generators: RepJson::from_rep(&rep).generators },
            ],
            base_point: None,
        };
        let parsed: PathJson = from_json(&to_json(&path)).unwrap();
        let opts = DeformOptions { samples: 2, power_bound: 4, grid: OrbitGrid { lo: -1.0, hi: 1.0, points: 5 } };
        let samples = deform_path_check(&parsed.to_path().unwrap(), &opts).unwrap();
        let report = DeformReport::new(&samples);
        let back: DeformReport = from_json(&to_json(&report)).unwrap();
        assert_eq!(back, report);
        let csv = deform_csv(&report.samples);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(1).unwrap().starts_with("0.0000000000000000e0,complete,"));
        assert!(csv.lines().nth(1).unwrap().ends_with(','));
    }
}
