//! Benzécri charts: a projective map `tau` with `tau(p) = 0` and
//! `B(1) ⊂ tau(Ω) ⊂ B(R)`.
//!
//! Stage A is the inductive construction: slice through `p`, normalize the
//! slice recursively, extend, squeeze vertically, shear the top tangency to
//! `e_n` and push the bottom down to height `-1`. That construction controls
//! the outer radius only, so stage B balances the polar body (centroid at the
//! origin, then a minimum-volume ellipsoid) which guarantees
//! `R <= n^{3/2}`. Stage B is also tried directly on the translated body; the
//! candidate with the smallest radius is returned.

use crate::body::{convex_hull, volume_centroid, ConvexBody, ConvexDomain, Facet};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, ProjMatrix, Vector};

/// Slack used by [`verify_benzecri`].
pub const VERIFY_SLACK: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct BenzecriChart {
    pub tau: ProjMatrix,
    pub r_achieved: f64,
    pub n: usize,
    /// `tau(Ω)`.
    pub image: ConvexBody,
}

fn translation(shift: &Vector) -> Matrix {
    let n = shift.len();
    let mut m = Matrix::identity(n + 1, n + 1);
    m.view_mut((0, n), (n, 1)).copy_from(shift);
    m
}

fn scaling(n: usize, s: f64) -> Matrix {
    let mut m = Matrix::identity(n + 1, n + 1) * s;
    m[(n, n)] = 1.0;
    m
}

/// Projective map of the line taking `a -> -1`, `p -> 0`, `b -> 1`.
fn interval_chart(a: f64, b: f64, p: f64) -> Matrix {
    let alpha = (a + b - 2.0 * p) / (b - a);
    let beta = p - a - alpha * a;
    Matrix::from_row_slice(2, 2, &[1.0, -p, alpha, beta])
}

fn stage_a(body: &ConvexBody, p: &Vector) -> Result<Matrix> {
    let n = body.dim();
    if n == 1 {
        let lo = body.vertices().iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
        let hi = body.vertices().iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
        return Ok(interval_chart(lo, hi, p[0]));
    }
    let t0 = translation(&-p);
    // Coordinates (u, h) with the slicing coordinate x_1 moved last.
    let mut perm = Matrix::zeros(n + 1, n + 1);
    for i in 0..n - 1 {
        perm[(i, i + 1)] = 1.0;
    }
    perm[(n - 1, 0)] = 1.0;
    perm[(n, n)] = 1.0;
    let mut tau = &perm * &t0;
    let b1 = map_vertices(body, &tau)?;

    let slice_facets = b1
        .facets()
        .iter()
        .filter(|f| f.normal.rows(0, n - 1).norm() > 1e-12)
        .map(|f| Facet::new(f.normal.rows(0, n - 1).into_owned(), f.offset))
        .collect::<Result<Vec<_>>>()?;
    let slice = ConvexBody::from_halfspaces(n - 1, slice_facets)?;
    let mut tp = benzecri_chart(&slice, &Vector::zeros(n - 1))?.tau.into_matrix();
    if tp[(n - 1, n - 1)] < 0.0 {
        tp = -tp;
    }

    // Extend the slice chart by (u, h) -> (M u, h) / (w'.u + gamma h + c).
    let wp = tp.view((n - 1, 0), (1, n - 1)).transpose();
    let c = tp[(n - 1, n - 1)];
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for v in b1.vertices() {
        let h = v[n - 1];
        let d = wp.dot(&v.rows(0, n - 1)) + c;
        if h > 1e-14 {
            lo = lo.max(-d / h);
        } else if h < -1e-14 {
            hi = hi.min(d / -h);
        }
    }
    let gamma = match (lo.is_finite(), hi.is_finite()) {
        (true, true) if lo < hi => 0.5 * (lo + hi),
        (true, false) => lo + 1.0,
        (false, true) => hi - 1.0,
        _ => {
            return Err(Error::NumericalDegeneracy(
                "no chart-preserving extension of the slice chart".into(),
            ))
        }
    };
    let mut ext = Matrix::zeros(n + 1, n + 1);
    ext.view_mut((0, 0), (n - 1, n - 1))
        .copy_from(&tp.view((0, 0), (n - 1, n - 1)));
    ext[(n - 1, n - 1)] = 1.0;
    ext.view_mut((n, 0), (1, n - 1))
        .copy_from(&tp.view((n - 1, 0), (1, n - 1)));
    ext[(n, n - 1)] = gamma;
    ext[(n, n)] = c;
    tau = &ext * &tau;
    let b2 = map_vertices(body, &tau)?;

    let h_max = b2.vertices().iter().map(|v| v[n - 1]).fold(f64::NEG_INFINITY, f64::max);
    let mut vscale = Matrix::identity(n + 1, n + 1);
    vscale[(n - 1, n - 1)] = 1.0 / h_max;
    tau = &vscale * &tau;
    let b3 = map_vertices(body, &tau)?;

    let top = b3.vertices().iter().map(|v| v[n - 1]).fold(f64::NEG_INFINITY, f64::max);
    let z = b3
        .vertices()
        .iter()
        .filter(|v| v[n - 1] >= top - 1e-9 * top.abs())
        .min_by(|a, b| {
            a.iter()
                .zip(b.iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .ok_or_else(|| Error::NumericalDegeneracy("no top tangency".into()))?;
    let mut shear = Matrix::identity(n + 1, n + 1);
    for i in 0..n - 1 {
        shear[(i, n - 1)] = -z[i] / z[n - 1];
    }
    tau = &shear * &tau;
    let b4 = map_vertices(body, &tau)?;

    // A(mu): h -> (1+mu) h / (1 + mu h), u -> u / (1 + mu h); fixes H and z.
    let h_min = b4.vertices().iter().map(|v| v[n - 1]).fold(f64::INFINITY, f64::min);
    let mu = -(1.0 + h_min) / (2.0 * h_min);
    let mut squeeze = Matrix::identity(n + 1, n + 1);
    squeeze[(n - 1, n - 1)] = 1.0 + mu;
    squeeze[(n, n - 1)] = mu;
    Ok(&squeeze * &tau)
}

/// Centered minimum-volume ellipsoid `{x : x^T A x <= 1}` of a symmetric
/// point set (Khachiyan's algorithm with Todd–Yildirim away steps).
pub fn mvee_centered(points: &[Vector]) -> Result<Matrix> {
    let d = points[0].len();
    let df = d as f64;
    let m = points.len();
    let mut u = vec![1.0 / m as f64; m];
    let mut x = Matrix::zeros(d, d);
    for (p, ui) in points.iter().zip(&u) {
        x += p * p.transpose() * *ui;
    }
    for _ in 0..100_000 {
        let xi = x.clone().try_inverse().ok_or(Error::Singular)?;
        let lev: Vec<f64> = points.iter().map(|p| p.dot(&(&xi * p))).collect();
        if lev.iter().any(|l| !l.is_finite()) {
            return Err(Error::NonFinite);
        }
        let (jp, mp) = lev
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let (jm, mm) = lev
            .iter()
            .copied()
            .enumerate()
            .filter(|(i, _)| u[*i] > 0.0)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or(Error::NonFinite)?;
        let eps_plus = mp / df - 1.0;
        let eps_minus = 1.0 - mm / df;
        if eps_plus.max(eps_minus) <= 1e-9 {
            break;
        }
        if eps_plus > eps_minus {
            let step = (mp - df) / (df * (mp - 1.0));
            for ui in u.iter_mut() {
                *ui *= 1.0 - step;
            }
            u[jp] += step;
            x = x * (1.0 - step) + &points[jp] * points[jp].transpose() * step;
        } else {
            let beta = ((df - mm) / (mm * (df - 1.0))).min(u[jm]);
            if beta >= 1.0 - 1e-15 {
                break;
            }
            let step = beta / (1.0 - beta);
            for ui in u.iter_mut() {
                *ui *= 1.0 + step;
            }
            u[jm] = (u[jm] - step).max(0.0);
            x = x * (1.0 + step) - &points[jm] * points[jm].transpose() * step;
        }
    }
    Ok(x.try_inverse().ok_or(Error::Singular)? / df)
}

fn polar_vertices(body: &ConvexBody) -> Vec<Vector> {
    body.facets().iter().map(|f| &f.normal / f.offset).collect()
}

/// Map (fixing 0) that puts the polar centroid at 0 and rounds the polar.
fn stage_b(body: &ConvexBody) -> Result<Matrix> {
    let n = body.dim();
    let (_, centroid) = volume_centroid(&polar_vertices(body))?;
    let mut tw = Matrix::identity(n + 1, n + 1);
    tw.view_mut((n, 0), (1, n)).copy_from(&(-&centroid).transpose());
    let balanced = map_vertices(body, &tw)?;
    let polar = polar_vertices(&balanced);
    let sym: Vec<Vector> = polar.iter().flat_map(|p| [p.clone(), -p]).collect();
    let a = mvee_centered(&sym)?;
    let eig = a.symmetric_eigen();
    let inv_sqrt = &eig.eigenvectors
        * Matrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()))
        * eig.eigenvectors.transpose();
    let mut lin = Matrix::identity(n + 1, n + 1);
    lin.view_mut((0, 0), (n, n)).copy_from(&inv_sqrt);
    Ok(lin * tw)
}

/// Rescales so the largest centered ball inside the image has radius 1.
///
/// The image is the hull of the mapped vertices, rescaled in place so that its
/// facets and vertices are mutually exact.
fn unit_inradius(body: &ConvexBody, tau: Matrix) -> Result<(Matrix, ConvexBody)> {
    let n = body.dim();
    let img = map_vertices(body, &tau)?;
    let rho = img.inradius_at(&Vector::zeros(n));
    if img.is_degenerate() || !(rho > 0.0) {
        return Err(Error::NumericalDegeneracy("chart image lost the base point".into()));
    }
    let pts: Vec<Vector> = img.vertices().iter().map(|v| v / rho).collect();
    Ok((scaling(n, 1.0 / rho) * tau, convex_hull(&pts)?))
}

fn map_vertices(body: &ConvexBody, tau: &Matrix) -> Result<ConvexBody> {
    let n = body.dim();
    let pts: Vec<Vector> = body
        .vertices()
        .iter()
        .map(|v| {
            let y = tau * v.clone().insert_row(n, 1.0);
            y.rows(0, n) / y[n]
        })
        .collect();
    convex_hull(&pts)
}

/// Benzécri chart of a bounded polytope centered at the interior point `p`.
pub fn benzecri_chart(body: &ConvexBody, p: &Vector) -> Result<BenzecriChart> {
    let n = body.dim();
    if p.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: p.len(),
        });
    }
    if !body.is_bounded() || body.is_degenerate() {
        return Err(Error::NumericalDegeneracy(
            "body must be bounded with nonempty interior".into(),
        ));
    }
    if !body.is_interior(p) {
        return Err(Error::PointNotInterior);
    }
    if n == 1 {
        let tau = ProjMatrix::new(stage_a(body, p)?)?;
        let image = body.transform(&tau)?;
        // The interval map is exact: the image is (-1, 1).
        return Ok(BenzecriChart {
            tau,
            r_achieved: 1.0,
            n,
            image,
        });
    }
    let origin = Vector::zeros(n);
    let t0 = translation(&-p);
    let mut candidates: Vec<(Matrix, ConvexBody)> = Vec::new();
    let stage_a_result = stage_a(body, p).and_then(|t| unit_inradius(body, t));
    let first_err = match stage_a_result {
        Ok((tau_a, img_a)) => {
            if let Ok(b) = stage_b(&img_a).and_then(|m| unit_inradius(body, m * &tau_a)) {
                candidates.push(b);
            }
            candidates.push((tau_a, img_a));
            None
        }
        Err(e) => Some(e),
    };
    if let Ok(b) = map_vertices(body, &t0)
        .and_then(|img| stage_b(&img))
        .and_then(|m| unit_inradius(body, m * &t0))
    {
        candidates.push(b);
    }
    let (tau, image) = candidates
        .into_iter()
        .min_by(|a, b| a.1.circumradius_at(&origin).total_cmp(&b.1.circumradius_at(&origin)))
        .ok_or_else(|| first_err.unwrap_or(Error::NumericalDegeneracy("no chart found".into())))?;
    let r = image.circumradius_at(&origin);
    let scale = tau.abs().max();
    Ok(BenzecriChart {
        tau: ProjMatrix::new(tau / scale)?,
        r_achieved: r,
        n,
        image,
    })
}

/// `B(1) ⊂ body ⊂ B(r)`: every facet at distance `>= 1` from the origin and
/// every vertex of norm `<= r`, up to [`VERIFY_SLACK`].
pub fn verify_benzecri(body: &ConvexBody, r: f64) -> bool {
    let origin = Vector::zeros(body.dim());
    body.is_bounded()
        && !body.is_degenerate()
        && body.facets().iter().all(|f| f.slack(&origin) >= 1.0 - VERIFY_SLACK)
        && body.vertices().iter().all(|v| v.norm() <= r + VERIFY_SLACK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{in_ball, seeded_rng};
    use rand::RngExt;

    fn v(x: &[f64]) -> Vector {
        Vector::from_column_slice(x)
    }

    fn act(tau: &ProjMatrix, x: &Vector) -> Vector {
        let n = x.len();
        let y = tau.as_matrix() * x.clone().insert_row(n, 1.0);
        y.rows(0, n) / y[n]
    }

    #[test]
    fn interval_goes_to_symmetric_interval() {
        let body = convex_hull(&[v(&[2.0]), v(&[7.0])]).unwrap();
        let chart = benzecri_chart(&body, &v(&[3.0])).unwrap();
        assert_eq!(chart.r_achieved, 1.0);
        assert!(act(&chart.tau, &v(&[3.0])).norm() < 1e-15);
        assert!((act(&chart.tau, &v(&[2.0]))[0] + 1.0).abs() < 1e-14);
        assert!((act(&chart.tau, &v(&[7.0]))[0] - 1.0).abs() < 1e-14);
        assert!(verify_benzecri(&chart.image, 1.0));
    }

    #[test]
    fn verify_examples() {
        let square = ConvexBody::cube(2, 1.0).unwrap();
        assert!(verify_benzecri(&square, 2f64.sqrt()));
        assert!(!verify_benzecri(&ConvexBody::cube(2, 6.0).unwrap(), 5.0));
        let tri = convex_hull(&[v(&[-1.0, -1.0]), v(&[3.0, -1.0]), v(&[-1.0, 3.0])]).unwrap();
        assert!(verify_benzecri(&tri, 10f64.sqrt()));
        assert!(!verify_benzecri(&tri, 3.1));
        let thin = convex_hull(&[v(&[-1.0, -0.5]), v(&[3.0, -0.5]), v(&[-1.0, 3.0])]).unwrap();
        assert!(!verify_benzecri(&thin, 5.0));
    }

    #[test]
    fn polygon_approximating_ball_passes_with_small_radius() {
        let pts: Vec<Vector> = (0..64)
            .map(|k| {
                let a = k as f64 * std::f64::consts::TAU / 64.0;
                v(&[a.cos(), a.sin()]) / (std::f64::consts::PI / 64.0).cos()
            })
            .collect();
        let body = convex_hull(&pts).unwrap();
        assert!(verify_benzecri(&body, 1.01));
        let chart = benzecri_chart(&body, &v(&[0.0, 0.0])).unwrap();
        assert!(chart.r_achieved <= 5.0);
        assert!(verify_benzecri(&chart.image, chart.r_achieved));
    }

    #[test]
    fn random_triangles() {
        let mut rng = seeded_rng(7);
        for _ in 0..50 {
            let pts: Vec<Vector> = (0..3).map(|_| in_ball(&mut rng, 2, 3.0)).collect();
            let Ok(body) = convex_hull(&pts) else { continue };
            if body.is_degenerate() || body.inradius_at(&body.vertex_centroid()) < 1e-3 {
                continue;
            }
            let w: Vec<f64> = (0..3).map(|_| rng.random::<f64>() + 0.05).collect();
            let total: f64 = w.iter().sum();
            let p: Vector = pts.iter().zip(&w).map(|(q, wi)| q * (*wi / total)).sum();
            let chart = benzecri_chart(&body, &p).unwrap();
            assert!(act(&chart.tau, &p).norm() < 1e-9);
            assert!(verify_benzecri(&chart.image, 5.0), "R = {}", chart.r_achieved);
        }
    }

    #[test]
    fn mvee_of_square_is_circumscribed_circle() {
        let pts = [v(&[1.0, 1.0]), v(&[-1.0, -1.0]), v(&[1.0, -1.0]), v(&[-1.0, 1.0])];
        let a = mvee_centered(&pts).unwrap();
        assert!((a - Matrix::identity(2, 2) * 0.5).norm() < 1e-6);
    }
}
