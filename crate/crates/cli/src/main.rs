use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use convexproj::benzecri::{benzecri_chart, verify_benzecri};
use convexproj::charfn::{chi_eval, estimate_kappa, triangulate_dual};
use convexproj::cusps::{
    build_cusp_domain, deform_path_check, orbit_certificate, radial_flow_for_weight,
    translation_group, vfg_test, weight_decomposition, CuspFamily, DeformOptions, OrbitGrid,
};
use convexproj::error::Error;
use convexproj::io::{
    charfn_csv, deform_csv, from_json, to_json, BodyJson, CertificateJson, CharfnReport, ConeJson,
    CuspReport, DeformReport, DomainJson, ErrorReport, KappaJson, LoadError, PatchJson, PathJson,
    PointsJson, RepJson, SmoothReport, WeightJson,
};
use convexproj::linalg::{ProjPoint, Vector};
use convexproj::smoothing::{build_cap, smooth_boundary_patch};

mod selftest;

#[derive(Parser)]
#[command(name = "convexproj", version, about = "Properly convex projective geometry toolkit")]
struct Cli {
    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Benzécri chart of a polytope at an interior point.
    Normalize {
        #[arg(long)]
        body: PathBuf,
        /// Interior point as a JSON array, e.g. "[0.1,0.1]".
        #[arg(long)]
        point: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Characteristic function of a polyhedral cone at given points.
    Charfn {
        #[arg(long)]
        cone: PathBuf,
        #[arg(long)]
        points: PathBuf,
        /// Also estimate the uniform convexity constant from this many samples.
        #[arg(long)]
        kappa: Option<usize>,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smooth a concave boundary patch with the cap function of parameter kappa.
    Smooth {
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        patch: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weights, translation group, orbit certificate and domain of a cusp family.
    Cusp {
        #[arg(long)]
        family: String,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        /// Base point in homogeneous coordinates; defaults to [0:0:0:1] for
        /// C0 and [1:1:1:1] otherwise.
        #[arg(long)]
        point: Option<String>,
        #[arg(long, default_value_t = 21)]
        grid_points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the cusp pipeline along a keyframed path of representations.
    Deform {
        #[arg(long)]
        path: PathBuf,
        #[arg(long, default_value_t = 11)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        power_bound: usize,
        #[arg(long, default_value_t = 21)]
        grid_points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit (t, stage_reached, min_eig_Q, hausdorff_delta) as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Quick invariant checks across all modules.
    Selftest,
}

enum Failure {
    Domain(Error),
    Input(LoadError),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Domain(e)
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Domain(e) => Self::Domain(e),
            other => Self::Input(other),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::Input(LoadError::Io(e))
    }
}

fn read<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)?;
    Ok(from_json(&text)?)
}

fn parse_vector(text: &str) -> Result<Vector, Failure> {
    let v: Vec<f64> = serde_json::from_str(text).map_err(LoadError::from)?;
    Ok(Vector::from_vec(v))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn normalize(body: &Path, point: &str, out: Option<&Path>) -> Result<(), Failure> {
    let body = read::<BodyJson>(body)?.to_body()?;
    let p = parse_vector(point)?;
    let chart = benzecri_chart(&body, &p)?;
    let verified = verify_benzecri(&chart.image, 5f64.powi(chart.n as i32 - 1));
    emit(out, &to_json(&convexproj::io::ChartReport::new(&chart, &p, verified)))
}

fn charfn(cone: &Path, points: &Path, kappa: Option<usize>, seed: u64, csv: bool, out: Option<&Path>) -> Result<(), Failure> {
    let cone = read::<ConeJson>(cone)?.to_cone()?;
    let pts: PointsJson = read(points)?;
    let tri = triangulate_dual(&cone)?;
    let evals = pts
        .points()
        .iter()
        .map(|p| chi_eval(&tri, &Vector::from_column_slice(p)))
        .collect::<Result<Vec<_>, _>>()?;
    let kappa = match kappa {
        Some(samples) => Some(KappaJson {
            samples,
            seed,
            estimate: estimate_kappa(&tri, samples, seed)?,
        }),
        None => None,
    };
    let report = CharfnReport::new(&evals, kappa);
    if csv {
        emit(out, charfn_csv(&report.records).trim_end())
    } else {
        emit(out, &to_json(&report))
    }
}

fn smooth(kappa: f64, patch: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let cap = build_cap(kappa)?;
    let patch = read::<PatchJson>(patch)?.to_patch()?;
    let smoothed = smooth_boundary_patch(&cap, &patch)?;
    emit(out, &to_json(&SmoothReport::new(kappa, &patch, &smoothed)))
}

fn cusp(
    family: &str,
    alpha: Option<f64>,
    beta: Option<f64>,
    point: Option<&str>,
    grid_points: usize,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let fam = CuspFamily::from_name(family, alpha, beta)?;
    let rep = fam.lattice()?;
    let x = match point {
        Some(text) => ProjPoint::new(parse_vector(text)?)?,
        None if fam == CuspFamily::C0 => ProjPoint::from_slice(&[0.0, 0.0, 0.0, 1.0])?,
        None => ProjPoint::from_slice(&[1.0; 4])?,
    };
    let (lx, ly) = fam.lie_generators()?;
    let decomp = weight_decomposition(&rep)?;
    let weights = decomp
        .weights
        .iter()
        .map(|w| {
            Ok(WeightJson {
                characters: w.characters.clone(),
                dim: w.dim(),
                eigenspace_dim: w.eigenspace.ncols(),
                flow_kind: radial_flow_for_weight(&decomp, &w.characters)?.kind().as_str().into(),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let group = translation_group(&rep)?;
    let cert = orbit_certificate(&group, &x)?;
    let grid = OrbitGrid {
        points: grid_points,
        ..OrbitGrid::default()
    };
    let (domain, domain_error) = match build_cusp_domain(&rep, &x, &grid) {
        Ok(d) => (
            Some(DomainJson {
                chart: d.chart(),
                flow_generator: convexproj::linalg::matrix_to_rows(&d.flow().generator()),
                flow_kind: d.flow().kind().as_str().into(),
                boundary_samples: d.boundary().len(),
                hull_vertices: d.hull().vertices().len(),
                invariance_residual: d.invariance_residual(),
            }),
            None,
        ),
        Err(e) => (None, Some(e.to_string())),
    };
    let report = CuspReport {
        schema: convexproj::io::SCHEMA.into(),
        family: fam.name().into(),
        alpha,
        beta,
        rep: RepJson::from_rep(&rep),
        lie_generators: vec![lx.to_rows(), ly.to_rows()],
        vfg_witness: vfg_test(&rep, 1).witness,
        weights,
        translation_dim: group.dim(),
        bracket_residual: group.bracket_residual(),
        roundtrip_residual: group.roundtrip_residual(),
        certificate: CertificateJson::from(&cert),
        domain,
        domain_error,
    };
    emit(out, &to_json(&report))
}

fn deform(
    path: &Path,
    samples: usize,
    power_bound: usize,
    grid_points: usize,
    csv: bool,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let path = read::<PathJson>(path)?.to_path()?;
    let opts = DeformOptions {
        samples,
        power_bound,
        grid: OrbitGrid {
            points: grid_points,
            ..OrbitGrid::default()
        },
    };
    let report = DeformReport::new(&deform_path_check(&path, &opts)?);
    if csv {
        emit(out, deform_csv(&report.samples).trim_end())
    } else {
        emit(out, &to_json(&report))
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    match &cli.command {
        Command::Normalize { body, point, out } => normalize(body, point, out.as_deref())?,
        Command::Charfn {
            cone,
            points,
            kappa,
            csv,
            out,
        } => charfn(cone, points, *kappa, cli.seed, *csv, out.as_deref())?,
        Command::Smooth { kappa, patch, out } => smooth(*kappa, patch, out.as_deref())?,
        Command::Cusp {
            family,
            alpha,
            beta,
            point,
            grid_points,
            out,
        } => cusp(family, *alpha, *beta, point.as_deref(), *grid_points, out.as_deref())?,
        Command::Deform {
            path,
            samples,
            power_bound,
            grid_points,
            out,
            csv,
        } => deform(path, *samples, *power_bound, *grid_points, *csv, out.as_deref())?,
        Command::Selftest => {
            let report = selftest::run(cli.seed);
            println!("{}", to_json(&report));
            return Ok(report.passed);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Domain(e)) => {
            eprintln!("{}", to_json(&ErrorReport::from_error(&e)));
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            let kind = match e {
                LoadError::Io(_) => "Io",
                _ => "Schema",
            };
            eprintln!("{}", to_json(&ErrorReport::new(kind, e.to_string())));
            ExitCode::from(2)
        }
    }
}
