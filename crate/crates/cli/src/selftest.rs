//! `convexproj selftest`: one fast check per module invariant.

use convexproj::benzecri::{benzecri_chart, verify_benzecri};
use convexproj::body::{convex_hull, hilbert_distance, ConvexBody};
use convexproj::charfn::{chi_eval, triangulate_dual};
use convexproj::cone::PolyCone;
use convexproj::cusps::{
    cusp_generator, orbit_certificate, translation_group, CuspFamily, Verdict,
};
use convexproj::linalg::{mat_exp, mat_log_e, LieElement, ProjPoint, Vector};
use convexproj::sampling::{in_ball, seeded_rng};
use convexproj::smoothing::{build_cap, m_kappa};
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SelftestReport {
    pub schema: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

type Outcome = Result<(bool, String), String>;

fn exp_log_round_trip(_: u64) -> Outcome {
    let x = LieElement::from_rows(&[
        vec![0.3, 1.0, 0.0, -0.2],
        vec![0.0, 0.1, 0.5, 0.0],
        vec![0.0, 0.0, -0.4, 2.0],
        vec![0.0, 0.0, 0.0, 0.0],
    ])
    .map_err(|e| e.to_string())?;
    let g = mat_exp(&x).map_err(|e| e.to_string())?;
    let back = mat_log_e(&g).map_err(|e| e.to_string())?;
    let err = (back.as_matrix() - x.as_matrix()).norm();
    Ok((err < 1e-10, format!("|log exp X - X| = {err:.3e}")))
}

fn benzecri_bound(seed: u64) -> Outcome {
    let mut rng = seeded_rng(seed);
    let mut worst: f64 = 0.0;
    for n in [2usize, 3] {
        let bound = 5f64.powi(n as i32 - 1);
        for _ in 0..10 {
            let pts: Vec<Vector> = (0..3 * n + 2).map(|_| in_ball(&mut rng, n, 1.0)).collect();
            let body = convex_hull(&pts).map_err(|e| e.to_string())?;
            let p = body.vertex_centroid();
            let chart = benzecri_chart(&body, &p).map_err(|e| e.to_string())?;
            if !verify_benzecri(&chart.image, bound) {
                return Ok((false, format!("R = {} exceeds {bound} in dim {n}", chart.r_achieved)));
            }
            worst = worst.max(chart.r_achieved / bound);
        }
    }
    Ok((true, format!("worst R / 5^(n-1) = {worst:.4}")))
}

fn orthant_closed_form(_: u64) -> Outcome {
    let tri = triangulate_dual(&PolyCone::orthant(3).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let x = Vector::from_vec(vec![0.5, 2.0, 3.0]);
    let e = chi_eval(&tri, &x).map_err(|e| e.to_string())?;
    let rel = (e.chi * 3.0 - 1.0).abs();
    let euler = (e.grad_c.dot(&x) + 1.0).abs();
    Ok((rel < 1e-12 && euler < 1e-9, format!("chi rel err {rel:.3e}, |dc(x) + 1| = {euler:.3e}")))
}

fn smoothing_is_min_outside_band(_: u64) -> Outcome {
    let cap = build_cap(0.5).map_err(|e| e.to_string())?;
    let far = m_kappa(&cap, 1.0, 10.0).map_err(|e| e.to_string())?;
    let sym = (m_kappa(&cap, 2.0, 3.0).map_err(|e| e.to_string())? - m_kappa(&cap, 3.0, 2.0).map_err(|e| e.to_string())?).abs();
    Ok((far == 1.0 && sym < 1e-12, format!("m(1,10) = {far}, asymmetry {sym:.3e}")))
}

fn cusp_certificates(_: u64) -> Outcome {
    let mut verdicts = Vec::new();
    for (fam, x) in [
        (CuspFamily::C0, [0.0, 0.0, 0.0, 1.0]),
        (CuspFamily::C3 { alpha: 1.0, beta: 2.0 }, [1.0; 4]),
    ] {
        let a = cusp_generator(&fam, 0.3, -0.2).map_err(|e| e.to_string())?;
        let b = cusp_generator(&fam, -0.1, 0.7).map_err(|e| e.to_string())?;
        let ab = cusp_generator(&fam, 0.2, 0.5).map_err(|e| e.to_string())?;
        if (a.as_matrix() * b.as_matrix() - ab.as_matrix()).norm() > 1e-10 {
            return Ok((false, format!("{} is not a homomorphism", fam.name())));
        }
        let t = translation_group(&fam.lattice().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let c = orbit_certificate(&t, &ProjPoint::from_slice(&x).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        verdicts.push(c.verdict);
    }
    let ok = verdicts.iter().all(|v| *v == Verdict::StrictlyConvex);
    let names: Vec<&str> = verdicts.iter().map(Verdict::as_str).collect();
    Ok((ok, names.join(", ")))
}

fn hilbert_interval(_: u64) -> Outcome {
    let body = ConvexBody::from_vertices(&[Vector::from_vec(vec![-1.0]), Vector::from_vec(vec![1.0])])
        .map_err(|e| e.to_string())?;
    let d = hilbert_distance(&body, &Vector::from_vec(vec![0.0]), &Vector::from_vec(vec![0.5]))
        .map_err(|e| e.to_string())?;
    let err = (d - 3f64.ln()).abs();
    Ok((err < 1e-12, format!("|d(0, 1/2) - log 3| = {err:.3e}")))
}

pub fn run(seed: u64) -> SelftestReport {
    let suites: [(&str, fn(u64) -> Outcome); 6] = [
        ("projlinalg.exp_log_round_trip", exp_log_round_trip),
        ("benzecri.bound", benzecri_bound),
        ("charfn.orthant_closed_form", orthant_closed_form),
        ("smoothing.min_outside_band", smoothing_is_min_outside_band),
        ("cusps.certificates", cusp_certificates),
        ("convexbody.hilbert_interval", hilbert_interval),
    ];
    let checks: Vec<Check> = suites
        .iter()
        .map(|(name, f)| {
            let (passed, detail) = f(seed).unwrap_or_else(|e| (false, e));
            Check {
                name: (*name).into(),
                passed,
                detail,
            }
        })
        .collect();
    SelftestReport {
        schema: convexproj::io::SCHEMA.into(),
        seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}
