use super::certificate::{orbit_certificate, Verdict};
use super::domain::{build_cusp_domain, CuspDomain, OrbitGrid};
use super::expm;
use super::group::{translation_group, vfg_test, CuspRep};
use crate::body::{hausdorff_bodies, hausdorff_points};
use crate::error::{Error, Result};
use crate::linalg::{mat_log_e, ProjMatrix, ProjPoint, Vector};

#[derive(Clone, Debug, PartialEq)]
pub struct Keyframe {
    pub t: f64,
    pub generators: Vec<ProjMatrix>,
}

/// Keyframed path of representations; `base_point` defaults to `[1:...:1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformPath {
    pub keyframes: Vec<Keyframe>,
    pub base_point: Option<Vec<f64>>,
}

/// The stage a sample stopped at; `Complete` when all of them succeeded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Vfg,
    TranslationGroup,
    OrbitCertificate,
    CuspDomain,
    Complete,
}

impl Stage {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Vfg => "vfg",
            Self::TranslationGroup => "translation_group",
            Self::OrbitCertificate => "orbit_certificate",
            Self::CuspDomain => "cusp_domain",
            Self::Complete => "complete",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeformSample {
    pub t: f64,
    pub stage_reached: Stage,
    pub vfg_witness: Option<usize>,
    pub verdict: Option<Verdict>,
    pub min_eig_q: Option<f64>,
    /// Hausdorff distance between this and the previous sampled boundary.
    pub hausdorff_delta: Option<f64>,
    /// Same for the sampled hulls.
    pub hull_delta: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeformOptions {
    pub samples: usize,
    pub power_bound: usize,
    pub grid: OrbitGrid,
}

impl Default for DeformOptions {
    fn default() -> Self {
        Self {
            samples: 11,
            power_bound: 4,
            grid: OrbitGrid::default(),
        }
    }
}

impl DeformPath {
    fn validate(&self) -> Result<()> {
        let first = self.keyframes.first().ok_or(Error::EmptySet)?;
        let count = first.generators.len();
        for pair in self.keyframes.windows(2) {
            if !(pair[1].t > pair[0].t) {
                return Err(Error::NumericalDegeneracy("keyframe times must increase".into()));
            }
        }
        for k in &self.keyframes {
            if k.generators.len() != count {
                return Err(Error::DimensionMismatch {
                    expected: count,
                    got: k.generators.len(),
                });
            }
        }
        Ok(())
    }

    pub fn t_range(&self) -> Option<(f64, f64)> {
        Some((self.keyframes.first()?.t, self.keyframes.last()?.t))
    }
}

/// The representation at time `t`: linear in logs when every keyframe
/// generator is an e-matrix, linear in entries otherwise.
pub fn interpolate_path(path: &DeformPath, t: f64) -> Result<CuspRep> {
    path.validate()?;
    let frames = &path.keyframes;
    let seg = frames.windows(2).position(|w| t <= w[1].t).unwrap_or(frames.len().saturating_sub(2));
    if frames.len() == 1 {
        return CuspRep::new(frames[0].generators.clone());
    }
    let (a, b) = (&frames[seg], &frames[seg + 1]);
    let s = ((t - a.t) / (b.t - a.t)).clamp(0.0, 1.0);
    let logs = frames.iter().all(|k| k.generators.iter().all(ProjMatrix::is_e_matrix));
    let gens = a
        .generators
        .iter()
        .zip(&b.generators)
        .map(|(ga, gb)| {
            if ga == gb {
                Ok(ga.clone())
            } else if logs {
                let la = mat_log_e(ga)?.into_matrix();
                let lb = mat_log_e(gb)?.into_matrix();
                ProjMatrix::new(expm(&(la * (1.0 - s) + lb * s))?)
            } else {
                ProjMatrix::new(ga.as_matrix() * (1.0 - s) + gb.as_matrix() * s)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    CuspRep::new(gens)
}

/// Finite-index subgroup with e-matrix generators: `g^m`, or `g^{2m}` to
/// clear negative real eigenvalues.
fn core(rep: &CuspRep, m: usize) -> Result<CuspRep> {
    let c = rep.powers(m)?;
    if c.all_e_matrices() {
        Ok(c)
    } else {
        rep.powers(2 * m)
    }
}

fn check_sample(rep: &CuspRep, x: &ProjPoint, opts: &DeformOptions, out: &mut DeformSample) -> Option<CuspDomain> {
    let v = vfg_test(rep, opts.power_bound);
    out.vfg_witness = v.witness;
    let Some(m) = v.witness else {
        out.stage_reached = Stage::Vfg;
        out.error = Some(Error::NotVfg(opts.power_bound).to_string());
        return None;
    };
    out.stage_reached = Stage::TranslationGroup;
    let core = match core(rep, m) {
        Ok(c) => c,
        Err(e) => {
            out.error = Some(e.to_string());
            return None;
        }
    };
    let group = match translation_group(&core) {
        Ok(g) => g,
        Err(e) => {
            out.error = Some(e.to_string());
            return None;
        }
    };
    out.stage_reached = Stage::OrbitCertificate;
    match orbit_certificate(&group, x) {
        Ok(c) => {
            out.verdict = Some(c.verdict);
            out.min_eig_q = Some(c.min_eigenvalue());
            if c.verdict != Verdict::StrictlyConvex {
                out.error = Some(Error::NotStrictlyConvex(c.verdict.as_str().into()).to_string());
                return None;
            }
        }
        Err(e) => {
            out.error = Some(e.to_string());
            return None;
        }
    }
    out.stage_reached = Stage::CuspDomain;
    match build_cusp_domain(&core, x, &opts.grid) {
        Ok(d) => {
            out.stage_reached = Stage::Complete;
            Some(d)
        }
        Err(e) => {
            out.error = Some(e.to_string());
            None
        }
    }
}

/// Runs the cusp pipeline at `opts.samples` equally spaced times of the path.
pub fn deform_path_check(path: &DeformPath, opts: &DeformOptions) -> Result<Vec<DeformSample>> {
    path.validate()?;
    if opts.samples < 2 {
        return Err(Error::NumericalDegeneracy("need at least two samples".into()));
    }
    let (t0, t1) = path.t_range().ok_or(Error::EmptySet)?;
    let size = path.keyframes[0].generators.first().ok_or(Error::EmptySet)?.as_matrix().nrows();
    let x = match &path.base_point {
        Some(p) => ProjPoint::new(Vector::from_column_slice(p))?,
        None => ProjPoint::new(Vector::from_element(size, 1.0))?,
    };
    let mut out = Vec::with_capacity(opts.samples);
    let mut prev: Option<CuspDomain> = None;
    for i in 0..opts.samples {
        let t = t0 + (t1 - t0) * i as f64 / (opts.samples - 1) as f64;
        let mut sample = DeformSample {
            t,
            stage_reached: Stage::Vfg,
            vfg_witness: None,
            verdict: None,
            min_eig_q: None,
            hausdorff_delta: None,
            hull_delta: None,
            error: None,
        };
        let domain = match interpolate_path(path, t) {
            Ok(rep) => check_sample(&rep, &x, opts, &mut sample),
            Err(e) => {
                sample.error = Some(e.to_string());
                None
            }
        };
        if let (Some(a), Some(b)) = (&prev, &domain) {
            sample.hausdorff_delta = hausdorff_points(a.boundary(), b.boundary()).ok();
            sample.hull_delta = hausdorff_bodies(a.hull(), b.hull()).ok();
        }
        prev = domain;
        out.push(sample);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::family::{cusp_generator, CuspFamily};
    use super::*;
    use crate::linalg::Matrix;

    fn c3_frame(t: f64, alpha: f64, beta: f64) -> Keyframe {
        let f = CuspFamily::C3 { alpha, beta };
        Keyframe {
            t,
            generators: vec![cusp_generator(&f, 1.0, 0.0).unwrap(), cusp_generator(&f, 0.0, 1.0).unwrap()],
        }
    }

    fn opts(samples: usize) -> DeformOptions {
        DeformOptions {
            samples,
            power_bound: 4,
            grid: OrbitGrid { lo: -1.0, hi: 1.0, points: 7 },
        }
    }

    #[test]
    fn constant_path_has_zero_deltas() {
        let path = DeformPath {
            keyframes: vec![c3_frame(0.0, 1.0, 2.0), c3_frame(1.0, 1.0, 2.0)],
            base_point: None,
        };
        let r = deform_path_check(&path, &opts(3)).unwrap();
        assert!(r.iter().all(|s| s.stage_reached == Stage::Complete));
        for s in &r[1..] {
            assert!(s.hausdorff_delta.unwrap() < 1e-12);
            assert!(s.hull_delta.unwrap() < 1e-12);
        }
    }

    #[test]
    fn log_interpolation_moves_alpha_linearly() {
        let path = DeformPath {
            keyframes: vec![c3_frame(0.0, 1.0, 2.0), c3_frame(1.0, 2.0, 2.0)],
            base_point: None,
        };
        let rep = interpolate_path(&path, 0.25).unwrap();
        let g = rep.generators()[0].as_matrix();
        assert!((g[(2, 2)] - (-1.25f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn errors_are_recorded_per_sample() {
        let mut rot = Matrix::identity(4, 4);
        rot[(0, 0)] = 0.0;
        rot[(0, 3)] = -1.0;
        rot[(3, 0)] = 1.0;
        rot[(3, 3)] = 0.0;
        let mut bad = c3_frame(1.0, 1.0, 2.0);
        bad.generators[0] = ProjMatrix::new(rot * 3.0).unwrap();
        let path = DeformPath {
            keyframes: vec![c3_frame(0.0, 1.0, 2.0), bad],
            base_point: None,
        };
        let r = deform_path_check(&path, &opts(5)).unwrap();
        assert_eq!(r[0].stage_reached, Stage::Complete);
        assert!(r.iter().any(|s| s.stage_reached != Stage::Complete && s.error.is_some()));
    }
}
