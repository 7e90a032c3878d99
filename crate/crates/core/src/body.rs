//! Convex bodies in an affine chart, the Hilbert metric and Hausdorff distances.

use crate::error::{Error, Result};
use crate::hull::hull_indices;
pub use crate::hull::Facet;
use crate::linalg::{rank, Matrix, ProjMatrix, ProjPoint, Vector};
use crate::minnorm::{distance_to_hull, min_norm_point};

/// A convex domain of `R^n` that can be probed along rays.
pub trait ConvexDomain {
    fn dim(&self) -> usize;
    fn is_interior(&self, x: &Vector) -> bool;
    /// Largest `t` with `x + t u` in the closure; `u` is a unit vector.
    /// Returns `f64::INFINITY` when the ray never leaves.
    fn exit_distance(&self, x: &Vector, u: &Vector) -> f64;
}

/// Convex polytope (or polyhedron) in the standard affine chart.
///
/// `affine_dim < dim` marks a flagged lower-dimensional hull; `bounded` is
/// false for polyhedra given by half-spaces with a nonzero recession cone.
#[derive(Clone, Debug)]
pub struct ConvexBody {
    dim: usize,
    vertices: Vec<Vector>,
    facets: Vec<Facet>,
    affine_dim: usize,
    bounded: bool,
}

/// Convex hull of a finite point set.
///
/// Inputs spanning a proper affine subspace give a body with
/// `is_degenerate() == true` rather than an error.
pub fn convex_hull(points: &[Vector]) -> Result<ConvexBody> {
    let raw = hull_indices(points)?;
    Ok(ConvexBody {
        dim: points[0].len(),
        vertices: raw.vertex_ids.iter().map(|&i| points[i].clone()).collect(),
        facets: raw.facets,
        affine_dim: raw.affine_dim,
        bounded: true,
    })
}

/// Same as [`convex_hull`], but also returns the indices of the extreme points.
pub fn convex_hull_indexed(points: &[Vector]) -> Result<(ConvexBody, Vec<usize>)> {
    let raw = hull_indices(points)?;
    let body = ConvexBody {
        dim: points[0].len(),
        vertices: raw.vertex_ids.iter().map(|&i| points[i].clone()).collect(),
        facets: raw.facets,
        affine_dim: raw.affine_dim,
        bounded: true,
    };
    Ok((body, raw.vertex_ids))
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

/// A nonzero `u` with `normal . u <= 0` for every facet, if one exists.
pub fn recession_ray(dim: usize, normals: &[Vector]) -> Option<Vector> {
    if normals.is_empty() {
        let mut u = Vector::zeros(dim);
        u[0] = 1.0;
        return Some(u);
    }
    let n = Matrix::from_fn(normals.len(), dim, |i, j| normals[i][j]);
    if rank(&n, 1e-10) < dim {
        let ns = crate::linalg::null_space(&n, 1e-10);
        return Some(ns.column(0).into_owned());
    }
    for subset in subsets(normals.len(), dim - 1) {
        let sub = Matrix::from_fn(dim - 1, dim, |i, j| normals[subset[i]][j]);
        let ns = crate::linalg::null_space(&sub, 1e-10);
        if ns.ncols() != 1 {
            continue;
        }
        let u: Vector = ns.column(0).into_owned();
        for cand in [u.clone(), -u] {
            if normals.iter().all(|a| a.dot(&cand) <= 1e-10) {
                return Some(cand);
            }
        }
    }
    None
}

impl ConvexBody {
    pub fn from_vertices(points: &[Vector]) -> Result<Self> {
        convex_hull(points)
    }

    /// Intersection of half-spaces `normal . x <= offset`; vertices are
    /// enumerated over `dim`-subsets of facets.
    pub fn from_halfspaces(dim: usize, facets: Vec<Facet>) -> Result<Self> {
        if dim == 0 || dim > 4 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if let Some(f) = facets.iter().find(|f| f.normal.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: f.normal.len(),
            });
        }
        let normals: Vec<Vector> = facets.iter().map(|f| f.normal.clone()).collect();
        let bounded = recession_ray(dim, &normals).is_none();
        let scale = 1.0 + facets.iter().map(|f| f.offset.abs()).fold(0.0, f64::max);
        let mut vertices: Vec<Vector> = Vec::new();
        for subset in subsets(facets.len(), dim) {
            let a = Matrix::from_fn(dim, dim, |i, j| facets[subset[i]].normal[j]);
            let b = Vector::from_fn(dim, |i, _| facets[subset[i]].offset);
            if a.determinant().abs() < 1e-12 {
                continue;
            }
            let Some(x) = a.lu().solve(&b) else { continue };
            if facets.iter().all(|f| f.slack(&x) >= -1e-9 * scale)
                && !vertices.iter().any(|v| (v - &x).norm() <= 1e-9 * scale)
            {
                vertices.push(x);
            }
        }
        if vertices.is_empty() && bounded {
            return Err(Error::EmptySet);
        }
        let affine_dim = if vertices.is_empty() {
            dim
        } else {
            hull_indices(&vertices)?.affine_dim.max(if bounded { 0 } else { dim })
        };
        Ok(Self {
            dim,
            vertices,
            facets,
            affine_dim,
            bounded,
        })
    }

    /// Trusted constructor from both representations (e.g. parsed input).
    pub fn from_parts(vertices: Vec<Vector>, facets: Vec<Facet>) -> Result<Self> {
        let dim = vertices.first().ok_or(Error::EmptySet)?.len();
        let affine_dim = hull_indices(&vertices)?.affine_dim;
        Ok(Self {
            dim,
            vertices,
            facets,
            affine_dim,
            bounded: true,
        })
    }

    /// `[-half, half]^dim`.
    pub fn cube(dim: usize, half: f64) -> Result<Self> {
        let facets = (0..dim)
            .flat_map(|i| {
                [1.0, -1.0].map(|s| {
                    let mut n = Vector::zeros(dim);
                    n[i] = s;
                    Facet { normal: n, offset: half }
                })
            })
            .collect();
        Self::from_halfspaces(dim, facets)
    }

    /// Standard simplex `conv(0, e_1, ..., e_dim)`.
    pub fn standard_simplex(dim: usize) -> Result<Self> {
        let mut pts = vec![Vector::zeros(dim)];
        for i in 0..dim {
            let mut e = Vector::zeros(dim);
            e[i] = 1.0;
            pts.push(e);
        }
        convex_hull(&pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_degenerate(&self) -> bool {
        self.affine_dim < self.dim
    }

    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    /// Vertices as points `[v : 1]` of the sphere.
    pub fn vertex_points(&self) -> Vec<ProjPoint> {
        self.vertices
            .iter()
            .map(|v| ProjPoint::from_affine(v.as_slice()).expect("finite vertex"))
            .collect()
    }

    fn scale(&self) -> f64 {
        1.0 + self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.facets.iter().all(|f| f.slack(x) >= -tol)
    }

    /// Distance from `x` to the nearest facet hyperplane (negative outside).
    pub fn inradius_at(&self, x: &Vector) -> f64 {
        self.facets
            .iter()
            .map(|f| f.slack(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest distance from `x` to a vertex.
    pub fn circumradius_at(&self, x: &Vector) -> f64 {
        self.vertices
            .iter()
            .map(|v| (v - x).norm())
            .fold(0.0, f64::max)
    }

    pub fn vertex_centroid(&self) -> Vector {
        self.vertices.iter().sum::<Vector>() / self.vertices.len() as f64
    }

    /// Image under a projective map that keeps the body inside the chart.
    pub fn transform(&self, tau: &ProjMatrix) -> Result<ConvexBody> {
        let m = tau.as_matrix();
        if m.nrows() != self.dim + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.dim + 1,
                got: m.nrows(),
            });
        }
        let lifted: Vec<Vector> = self
            .vertices
            .iter()
            .map(|v| m * v.clone().insert_row(self.dim, 1.0))
            .collect();
        let w: Vec<f64> = lifted.iter().map(|y| y[self.dim]).collect();
        let sign = if w.iter().all(|&x| x > 0.0) {
            1.0
        } else if w.iter().all(|&x| x < 0.0) {
            -1.0
        } else {
            return Err(Error::NumericalDegeneracy(
                "image leaves the affine chart".into(),
            ));
        };
        let vertices: Vec<Vector> = lifted
            .iter()
            .map(|y| y.rows(0, self.dim) / y[self.dim])
            .collect();
        if !self.bounded || self.is_degenerate() {
            return convex_hull(&vertices);
        }
        let inv = tau.inverse()?.into_matrix() * sign;
        let facets = self
            .facets
            .iter()
            .map(|f| {
                let psi = f.normal.clone().insert_row(self.dim, -f.offset);
                let img = inv.transpose() * psi;
                Facet::new(img.rows(0, self.dim).into_owned(), -img[self.dim])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dim: self.dim,
            vertices,
            facets,
            affine_dim: self.affine_dim,
            bounded: true,
        })
    }
}

/// Volume and volume centroid of `conv(points)` for a full-dimensional set.
///
/// Cones from an interior point over each facet; facet measures and
/// centroids are computed recursively in intrinsic coordinates.
pub fn volume_centroid(points: &[Vector]) -> Result<(f64, Vector)> {
    let raw = hull_indices(points)?;
    let d = points[0].len();
    if raw.affine_dim < d {
        return Err(Error::DegenerateSpan {
            rank: raw.affine_dim,
            dim: d,
        });
    }
    let verts: Vec<&Vector> = raw.vertex_ids.iter().map(|&i| &points[i]).collect();
    if d == 1 {
        let lo = verts.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
        let hi = verts.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
        return Ok((hi - lo, Vector::from_element(1, 0.5 * (lo + hi))));
    }
    let scale = 1.0 + verts.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let q: Vector = verts.iter().copied().sum::<Vector>() / verts.len() as f64;
    let mut vol = 0.0;
    let mut moment = Vector::zeros(d);
    for f in &raw.facets {
        let on: Vec<&Vector> = verts
            .iter()
            .copied()
            .filter(|v| f.slack(v).abs() <= 1e-9 * scale)
            .collect();
        let basis = crate::linalg::orthogonal_completion(&f.normal)
            .columns(1, d - 1)
            .into_owned();
        let origin = *on
            .first()
            .ok_or_else(|| Error::NumericalDegeneracy("facet without vertices".into()))?;
        let local: Vec<Vector> = on.iter().map(|v| basis.transpose() * (*v - origin)).collect();
        let (area, c_local) = volume_centroid(&local)?;
        let c_facet = origin + &basis * c_local;
        let h = f.slack(&q);
        let piece = h * area / d as f64;
        let apex_centroid = &q + (&c_facet - &q) * (d as f64 / (d as f64 + 1.0));
        vol += piece;
        moment += apex_centroid * piece;
    }
    Ok((vol, moment / vol))
}

impl ConvexDomain for ConvexBody {
    fn dim(&self) -> usize {
        self.dim
    }

    fn is_interior(&self, x: &Vector) -> bool {
        !self.is_degenerate()
            && x.len() == self.dim
            && self.facets.iter().all(|f| f.slack(x) > 1e-12 * self.scale())
    }

    fn exit_distance(&self, x: &Vector, u: &Vector) -> f64 {
        self.facets
            .iter()
            .filter_map(|f| {
                let rate = f.normal.dot(u);
                (rate > 1e-15).then(|| f.slack(x) / rate)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Euclidean ball.
#[derive(Clone, Debug)]
pub struct Ball {
    pub center: Vector,
    pub radius: f64,
}

impl ConvexDomain for Ball {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn is_interior(&self, x: &Vector) -> bool {
        (x - &self.center).norm() < self.radius
    }

    fn exit_distance(&self, x: &Vector, u: &Vector) -> f64 {
        let d = x - &self.center;
        let b = u.dot(&d);
        let c = d.norm_squared() - self.radius * self.radius;
        -b + (b * b - c).max(0.0).sqrt()
    }
}

fn require_interior<D: ConvexDomain + ?Sized>(dom: &D, x: &Vector) -> Result<()> {
    if x.len() != dom.dim() {
        return Err(Error::DimensionMismatch {
            expected: dom.dim(),
            got: x.len(),
        });
    }
    if dom.is_interior(x) {
        Ok(())
    } else {
        Err(Error::PointNotInterior)
    }
}

/// Exit parameters `(t-, t+)` of `x -+ t v`, measured in units of `v`.
pub fn line_boundary_intersections<D: ConvexDomain + ?Sized>(
    dom: &D,
    x: &Vector,
    v: &Vector,
) -> Result<(f64, f64)> {
    require_interior(dom, x)?;
    let len = v.norm();
    if len == 0.0 {
        return Ok((f64::INFINITY, f64::INFINITY));
    }
    let u = v / len;
    Ok((dom.exit_distance(x, &-&u) / len, dom.exit_distance(x, &u) / len))
}

/// Hilbert distance `log [p, a, b, q]` (no factor 1/2).
pub fn hilbert_distance<D: ConvexDomain + ?Sized>(dom: &D, a: &Vector, b: &Vector) -> Result<f64> {
    require_interior(dom, a)?;
    require_interior(dom, b)?;
    let diff = b - a;
    let len = diff.norm();
    if len == 0.0 {
        return Ok(0.0);
    }
    let u = diff / len;
    let back = dom.exit_distance(a, &-&u);
    let fwd = dom.exit_distance(b, &u);
    Ok((len / back).ln_1p() + (len / fwd).ln_1p())
}

/// Hilbert–Finsler norm `|v| (1/t+ + 1/t-)`.
pub fn finsler_norm<D: ConvexDomain + ?Sized>(dom: &D, x: &Vector, v: &Vector) -> Result<f64> {
    require_interior(dom, x)?;
    let len = v.norm();
    if len == 0.0 {
        return Ok(0.0);
    }
    let u = v / len;
    Ok(len / dom.exit_distance(x, &u) + len / dom.exit_distance(x, &-&u))
}

/// Hausdorff distance between finite point samples (brute force).
pub fn hausdorff_points(a: &[Vector], b: &[Vector]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let directed = |from: &[Vector], to: &[Vector]| {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| (p - q).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}

/// Hausdorff distance between polytopes, exact up to the min-norm solver:
/// the distance to a convex set is convex, so each directed distance is
/// attained at a vertex.
pub fn hausdorff_bodies(a: &ConvexBody, b: &ConvexBody) -> Result<f64> {
    if a.vertices.is_empty() || b.vertices.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(directed_hausdorff(a, b).max(directed_hausdorff(b, a)))
}

/// `max_v d(v, to)` over the vertices of `from`. The nearest vertex of `to`
/// bounds each distance from above, so the exact solver only runs on
/// vertices that can still raise the maximum. The nearest point of `to`
/// lies on a facet visible from `v`, so only those facets' vertices enter.
fn directed_hausdorff(from: &ConvexBody, to: &ConvexBody) -> f64 {
    let tol = 1e-9 * to.scale();
    let incidence: Vec<Vec<usize>> = to
        .facets
        .iter()
        .map(|f| (0..to.vertices.len()).filter(|&i| f.slack(&to.vertices[i]).abs() <= tol).collect())
        .collect();
    let mut upper: Vec<(f64, &Vector)> = from
        .vertices
        .iter()
        .map(|v| {
            let ub = to.vertices.iter().map(|q| (v - q).norm()).fold(f64::INFINITY, f64::min);
            (ub, v)
        })
        .collect();
    upper.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut best: f64 = 0.0;
    for (ub, v) in upper {
        if ub <= best {
            break;
        }
        let lb = to.facets.iter().map(|f| -f.slack(v)).fold(0.0, f64::max);
        if lb >= ub {
            best = ub;
            continue;
        }
        if lb == 0.0 && to.bounded && !to.is_degenerate() {
            continue;
        }
        let mut near = vec![false; to.vertices.len()];
        let mut any = false;
        for (f, ids) in to.facets.iter().zip(&incidence) {
            if f.slack(v) < 0.0 {
                any = true;
                for &i in ids {
                    near[i] = true;
                }
            }
        }
        let pts: Vec<Vector> = if any && !to.is_degenerate() {
            to.vertices.iter().zip(&near).filter(|(_, &k)| k).map(|(q, _)| q.clone()).collect()
        } else {
            to.vertices.clone()
        };
        best = best.max(distance_to_hull(v, &pts));
    }
    best
}

/// Input to [`is_properly_convex`].
#[derive(Clone, Debug)]
pub enum Candidate {
    /// Closed cone in `R^{n+1}` spanned by these vectors.
    Cone(Vec<Vector>),
    /// Region of the standard chart.
    Body(ConvexBody),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// A linear functional positive on the closure (a hyperplane it misses).
    Hyperplane(Vector),
    /// A vector `v` with both `v` and `-v` in the closed cone.
    Line(Vector),
    /// A recession direction `u`: the point at infinity `[u : 0]` lies in
    /// the closure.
    Ray(Vector),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProperConvexity {
    pub properly_convex: bool,
    pub witness: Witness,
}

pub fn is_properly_convex(c: &Candidate) -> ProperConvexity {
    match c {
        Candidate::Cone(gens) => {
            let unit: Vec<Vector> = gens.iter().map(|g| g.normalize()).collect();
            let mn = min_norm_point(&unit);
            if mn.point.norm() > 1e-10 {
                ProperConvexity {
                    properly_convex: true,
                    witness: Witness::Hyperplane(mn.point.normalize()),
                }
            } else {
                let j = (0..unit.len())
                    .max_by(|&a, &b| mn.weights[a].total_cmp(&mn.weights[b]))
                    .unwrap();
                ProperConvexity {
                    properly_convex: false,
                    witness: Witness::Line(unit[j].clone()),
                }
            }
        }
        Candidate::Body(body) => {
            let normals: Vec<Vector> = body.facets.iter().map(|f| f.normal.clone()).collect();
            match (body.bounded, recession_ray(body.dim, &normals)) {
                (true, _) | (false, None) => {
                    let mut h = Vector::zeros(body.dim + 1);
                    h[body.dim] = 1.0;
                    ProperConvexity {
                        properly_convex: true,
                        witness: Witness::Hyperplane(h),
                    }
                }
                (false, Some(u)) => ProperConvexity {
                    properly_convex: false,
                    witness: Witness::Ray(u),
                },
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::exp_nilpotent;
    use approx::assert_relative_eq;

    fn v(x: &[f64]) -> Vector {
        Vector::from_column_slice(x)
    }

    fn interval(a: f64, b: f64) -> ConvexBody {
        convex_hull(&[v(&[a]), v(&[b])]).unwrap()
    }

    #[test]
    fn triangle_centroid_is_vertex_mean() {
        let pts = [v(&[0.0, 0.0]), v(&[4.0, 0.0]), v(&[1.0, 3.0])];
        let (vol, c) = volume_centroid(&pts).unwrap();
        assert_relative_eq!(vol, 6.0, epsilon = 1e-12);
        assert_relative_eq!(c, v(&[5.0 / 3.0, 1.0]), epsilon = 1e-12);
    }

    #[test]
    fn trapezoid_and_tetrahedron_centroids() {
        // Trapezoid with parallel sides 4 (y=0) and 2 (y=1): ybar = (1/3)(4+2*2)/(4+2).
        let trap = [v(&[0.0, 0.0]), v(&[4.0, 0.0]), v(&[1.0, 1.0]), v(&[3.0, 1.0])];
        let (vol, c) = volume_centroid(&trap).unwrap();
        assert_relative_eq!(vol, 3.0, epsilon = 1e-12);
        assert_relative_eq!(c, v(&[2.0, 4.0 / 9.0]), epsilon = 1e-12);
        let tet = [v(&[0.0, 0.0, 0.0]), v(&[2.0, 0.0, 0.0]), v(&[0.0, 3.0, 0.0]), v(&[0.0, 0.0, 6.0])];
        let (vol, c) = volume_centroid(&tet).unwrap();
        assert_relative_eq!(vol, 6.0, epsilon = 1e-12);
        assert_relative_eq!(c, v(&[0.5, 0.75, 1.5]), epsilon = 1e-12);
    }

    #[test]
    fn exit_parameters() {
        let ball = Ball { center: v(&[0.0, 0.0, 0.0]), radius: 1.0 };
        let (tm, tp) = line_boundary_intersections(&ball, &v(&[0.0, 0.0, 0.0]), &v(&[1.0, 0.0, 0.0])).unwrap();
        assert_relative_eq!(tm, 1.0);
        assert_relative_eq!(tp, 1.0);

        let sq = ConvexBody::cube(2, 1.0).unwrap();
        let d = v(&[1.0, 1.0]) / 2f64.sqrt();
        let (tm, tp) = line_boundary_intersections(&sq, &v(&[0.0, 0.0]), &d).unwrap();
        assert_relative_eq!(tm, 2f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(tp, 2f64.sqrt(), epsilon = 1e-15);

        assert_eq!(
            line_boundary_intersections(&sq, &v(&[2.0, 0.0]), &d),
            Err(Error::PointNotInterior)
        );
    }

    #[test]
    fn hilbert_on_interval() {
        let i = interval(-1.0, 1.0);
        let d = hilbert_distance(&i, &v(&[0.0]), &v(&[0.5])).unwrap();
        assert!((d - 3f64.ln()).abs() < 1e-15);
        assert_eq!(hilbert_distance(&i, &v(&[0.3]), &v(&[0.3])).unwrap(), 0.0);
        let back = hilbert_distance(&i, &v(&[0.5]), &v(&[0.0])).unwrap();
        assert_eq!(d, back);
    }

    #[test]
    fn finsler_examples() {
        let i = interval(-1.0, 1.0);
        assert_relative_eq!(finsler_norm(&i, &v(&[0.0]), &v(&[0.7])).unwrap(), 1.4);
        assert_eq!(finsler_norm(&i, &v(&[0.2]), &v(&[0.0])).unwrap(), 0.0);

        let half_line = ConvexBody::from_halfspaces(1, vec![Facet { normal: v(&[-1.0]), offset: 0.0 }]).unwrap();
        assert!(!half_line.is_bounded());
        for s in [0.1, 1.0, 7.5] {
            assert_eq!(finsler_norm(&half_line, &v(&[s]), &v(&[0.3])).unwrap(), 0.3 / s);
        }
    }

    #[test]
    fn projective_invariance_on_triangle() {
        let tri = convex_hull(&[v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0])]).unwrap();
        let tau = ProjMatrix::from_rows(&[
            vec![1.0, 0.2, 0.1],
            vec![0.0, 1.3, -0.2],
            vec![0.3, 0.1, 1.0],
        ])
        .unwrap();
        let img = tri.transform(&tau).unwrap();
        let map = |x: &Vector| {
            let y = tau.as_matrix() * v(&[x[0], x[1], 1.0]);
            v(&[y[0] / y[2], y[1] / y[2]])
        };
        let (a, b) = (v(&[0.2, 0.3]), v(&[0.5, 0.1]));
        let d0 = hilbert_distance(&tri, &a, &b).unwrap();
        let d1 = hilbert_distance(&img, &map(&a), &map(&b)).unwrap();
        assert!((d0 - d1).abs() < 1e-12);
    }

    #[test]
    fn hausdorff_examples() {
        let sq = convex_hull(&[v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[1.0, 1.0])]).unwrap();
        assert_eq!(hausdorff_bodies(&sq, &sq).unwrap(), 0.0);
        let eps = 0.03;
        let moved: Vec<Vector> = sq.vertices().iter().map(|p| p + v(&[eps, 0.0])).collect();
        let sq2 = convex_hull(&moved).unwrap();
        assert!((hausdorff_bodies(&sq, &sq2).unwrap() - eps).abs() < 1e-12);
        assert_eq!(hausdorff_points(&[], sq.vertices()), Err(Error::EmptySet));
    }

    #[test]
    fn proper_convexity_examples() {
        let simplex = ConvexBody::standard_simplex(3).unwrap();
        assert!(is_properly_convex(&Candidate::Body(simplex)).properly_convex);

        let line = Candidate::Cone(vec![v(&[1.0, 0.0, 1.0]), v(&[-1.0, 0.0, -1.0]), v(&[0.0, 1.0, 1.0])]);
        let verdict = is_properly_convex(&line);
        assert!(!verdict.properly_convex);
        assert!(matches!(verdict.witness, Witness::Line(_)));

        let half = ConvexBody::from_halfspaces(2, vec![Facet { normal: v(&[-1.0, 0.0]), offset: 0.0 }]).unwrap();
        let verdict = is_properly_convex(&Candidate::Body(half));
        assert!(!verdict.properly_convex);
        let Witness::Ray(u) = verdict.witness else { panic!() };
        assert!(u[0] >= -1e-12);
    }

    #[test]
    fn paraboloid_samples_are_all_vertices() {
        let mut pts = Vec::new();
        for i in 0..5 {
            for j in 0..5 {
                let (s, t) = (-1.0 + 0.5 * i as f64, -1.0 + 0.5 * j as f64);
                pts.push(v(&[(s * s + t * t) / 2.0, s, t]));
            }
        }
        let (_, idx) = convex_hull_indexed(&pts).unwrap();
        assert_eq!(idx.len(), 25);
        for (k, p) in pts.iter().enumerate() {
            let others: Vec<Vector> = pts.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, q)| q.clone()).collect();
            assert!(distance_to_hull(p, &others) > 1e-6);
        }
    }

    #[test]
    fn transformed_facets_support_transformed_vertices() {
        let c = exp_nilpotent(&Matrix::from_row_slice(
            3,
            3,
            &[0.0, 0.4, 0.0, 0.0, 0.0, 0.4, 0.0, 0.0, 0.0],
        ));
        let tau = ProjMatrix::new(c).unwrap();
        let img = ConvexBody::cube(2, 0.5).unwrap().transform(&tau).unwrap();
        assert_eq!(img.vertices().len(), 4);
        for p in img.vertices() {
            assert!(img.contains(p, 1e-12));
            let tight = img.facets().iter().filter(|f| f.slack(p).abs() < 1e-12).count();
            assert_eq!(tight, 2);
        }
    }
}
