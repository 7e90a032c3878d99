//! Wolfe's minimum-norm-point algorithm for the convex hull of a finite set.

use crate::linalg::{Matrix, Vector};

#[derive(Clone, Debug)]
pub struct MinNorm {
    pub point: Vector,
    /// Convex weights, indexed like the input.
    pub weights: Vec<f64>,
}

/// Affine minimizer of `|sum a_i p_i|` subject to `sum a_i = 1`.
fn affine_min(pts: &[&Vector]) -> Vec<f64> {
    let k = pts.len();
    let mut sys = Matrix::zeros(k + 1, k + 1);
    for i in 0..k {
        for j in 0..k {
            sys[(i, j)] = pts[i].dot(pts[j]);
        }
        sys[(i, k)] = 1.0;
        sys[(k, i)] = 1.0;
    }
    let mut rhs = Vector::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = sys
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .unwrap_or_else(|_| Vector::from_element(k + 1, 1.0 / k as f64));
    sol.rows(0, k).iter().copied().collect()
}

/// Point of `conv(pts)` closest to the origin.
pub fn min_norm_point(pts: &[Vector]) -> MinNorm {
    assert!(!pts.is_empty(), "min_norm_point needs at least one point");
    let scale = pts.iter().map(|p| p.norm_squared()).fold(0.0, f64::max);
    let tol = 1e-15 * scale.max(f64::MIN_POSITIVE);
    let start = (0..pts.len())
        .min_by(|&a, &b| pts[a].norm_squared().total_cmp(&pts[b].norm_squared()))
        .unwrap();
    let mut active: Vec<usize> = vec![start];
    let mut w: Vec<f64> = vec![1.0];
    let mut x = pts[start].clone();
    for _ in 0..(50 * pts.len() + 100) {
        let (j, best) = (0..pts.len())
            .map(|i| (i, x.dot(&pts[i])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if x.norm_squared() - best <= 1e-12 * scale || active.contains(&j) {
            break;
        }
        active.push(j);
        w.push(0.0);
        loop {
            let sub: Vec<&Vector> = active.iter().map(|&i| &pts[i]).collect();
            let alpha = affine_min(&sub);
            if alpha.iter().all(|&a| a > tol) {
                w = alpha;
                break;
            }
            let mut theta = 1.0f64;
            for (wi, ai) in w.iter().zip(&alpha) {
                if *ai <= tol && wi - ai > 0.0 {
                    theta = theta.min(wi / (wi - ai));
                }
            }
            for (wi, ai) in w.iter_mut().zip(&alpha) {
                *wi = theta * ai + (1.0 - theta) * *wi;
            }
            let mut keep_a = Vec::new();
            let mut keep_w = Vec::new();
            for (i, wi) in active.iter().zip(&w) {
                if *wi > tol {
                    keep_a.push(*i);
                    keep_w.push(*wi);
                }
            }
            if keep_a.is_empty() {
                keep_a.push(*active.last().unwrap());
                keep_w.push(1.0);
            }
            active = keep_a;
            w = keep_w;
            if active.len() == 1 {
                w = vec![1.0];
                break;
            }
        }
        let total: f64 = w.iter().sum();
        x = Vector::zeros(pts[0].len());
        for (i, wi) in active.iter().zip(w.iter_mut()) {
            *wi /= total;
            x += &pts[*i] * *wi;
        }
    }
    let mut weights = vec![0.0; pts.len()];
    for (i, wi) in active.iter().zip(&w) {
        weights[*i] = *wi;
    }
    MinNorm { point: x, weights }
}

/// Euclidean distance from `p` to `conv(pts)`.
pub fn distance_to_hull(p: &Vector, pts: &[Vector]) -> f64 {
    let shifted: Vec<Vector> = pts.iter().map(|q| q - p).collect();
    min_norm_point(&shifted).point.norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> Vector {
        Vector::from_column_slice(x)
    }

    #[test]
    fn segment_projection() {
        let r = min_norm_point(&[v(&[1.0, -1.0]), v(&[1.0, 1.0])]);
        assert!((r.point - v(&[1.0, 0.0])).norm() < 1e-14);
        assert!((r.weights[0] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn origin_inside_triangle() {
        let pts = [v(&[1.0, 0.0]), v(&[-1.0, 1.0]), v(&[-1.0, -1.0])];
        let r = min_norm_point(&pts);
        assert!(r.point.norm() < 1e-12);
        let recon: Vector = pts.iter().zip(&r.weights).map(|(p, w)| p * *w).sum();
        assert!(recon.norm() < 1e-12);
    }

    #[test]
    fn distance_to_square() {
        let sq = [v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[1.0, 1.0])];
        assert!((distance_to_hull(&v(&[2.0, 2.0]), &sq) - 2f64.sqrt()).abs() < 1e-12);
        assert!((distance_to_hull(&v(&[0.5, 3.0]), &sq) - 2.0).abs() < 1e-12);
        assert!(distance_to_hull(&v(&[0.3, 0.3]), &sq) < 1e-12);
    }
}
