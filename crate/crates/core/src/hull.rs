//! Incremental (beneath-beyond) convex hull for point sets in dimensions 1 to 4.
//!
//! Simplicial facets are grown point by point; coplanar facets are merged in
//! the final H-representation, and a point is reported as a vertex only when
//! the facets through it have normals spanning the space.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{rank, Matrix, Vector};

/// Facet inequality `normal . x <= offset` with unit normal.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub normal: Vector,
    pub offset: f64,
}

impl Facet {
    pub fn new(normal: Vector, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if !(n > 0.0) || !offset.is_finite() {
            return Err(Error::NumericalDegeneracy("zero facet normal".into()));
        }
        Ok(Self {
            normal: normal / n,
            offset: offset / n,
        })
    }

    /// Signed slack `offset - normal . x` (positive inside).
    pub fn slack(&self, x: &Vector) -> f64 {
        self.offset - self.normal.dot(x)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct RawHull {
    pub vertex_ids: Vec<usize>,
    pub facets: Vec<Facet>,
    pub affine_dim: usize,
}

struct SimplexFacet {
    verts: Vec<usize>,
    normal: Vector,
    offset: f64,
    alive: bool,
}

fn scale_of(points: &[Vector]) -> f64 {
    let n = points.len() as f64;
    let centroid: Vector = points.iter().sum::<Vector>() / n;
    points
        .iter()
        .map(|p| (p - &centroid).norm())
        .fold(0.0, f64::max)
}

/// Unit normal of the hyperplane through `d` points of `R^d`, via cofactors.
fn hyperplane_normal(pts: &[&Vector], scale: f64) -> Option<Vector> {
    let d = pts[0].len();
    let rows = d - 1;
    let m = Matrix::from_fn(rows, d, |i, j| pts[i + 1][j] - pts[0][j]);
    let mut normal = Vector::zeros(d);
    for j in 0..d {
        let minor = m.clone().remove_column(j);
        let det = if rows == 0 { 1.0 } else { minor.determinant() };
        normal[j] = if j % 2 == 0 { det } else { -det };
    }
    let nn = normal.norm();
    if nn <= 1e-13 * scale.max(1e-300).powi(rows as i32) {
        return None;
    }
    Some(normal / nn)
}

pub(crate) fn hull_indices(points: &[Vector]) -> Result<RawHull> {
    let first = points.first().ok_or(Error::EmptySet)?;
    let d = first.len();
    if d == 0 || d > 4 {
        return Err(Error::UnsupportedDimension(d));
    }
    if let Some(p) = points.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: p.len(),
        });
    }
    if points.iter().any(|p| p.iter().any(|x| !x.is_finite())) {
        return Err(Error::NonFinite);
    }
    let scale = scale_of(points);
    let i0 = (0..points.len())
        .min_by(|&a, &b| {
            points[a]
                .iter()
                .zip(points[b].iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap();
    if scale == 0.0 {
        return Ok(RawHull {
            vertex_ids: vec![i0],
            facets: Vec::new(),
            affine_dim: 0,
        });
    }

    let mut basis: Vec<Vector> = Vec::new();
    let mut simplex = vec![i0];
    for _ in 0..d {
        let residual = |p: &Vector| {
            let mut r = p - &points[i0];
            for b in &basis {
                r -= b * b.dot(&r);
            }
            r
        };
        let (best, res) = points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, residual(p)))
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap();
        let rn = res.norm();
        if rn <= 1e-9 * scale {
            break;
        }
        basis.push(res / rn);
        simplex.push(best);
    }
    let k = basis.len();
    if k < d {
        let b = Matrix::from_columns(&basis);
        let intrinsic: Vec<Vector> = points
            .iter()
            .map(|p| b.transpose() * (p - &points[i0]))
            .collect();
        let inner = hull_indices(&intrinsic)?;
        let facets = inner
            .facets
            .iter()
            .map(|f| {
                let n = &b * &f.normal;
                let off = f.offset + n.dot(&points[i0]);
                Facet {
                    normal: n,
                    offset: off,
                }
            })
            .collect();
        return Ok(RawHull {
            vertex_ids: inner.vertex_ids,
            facets,
            affine_dim: k,
        });
    }

    if d == 1 {
        let (imin, imax) = (0..points.len()).fold((i0, i0), |(lo, hi), i| {
            (
                if points[i][0] < points[lo][0] { i } else { lo },
                if points[i][0] > points[hi][0] { i } else { hi },
            )
        });
        return Ok(RawHull {
            vertex_ids: vec![imin.min(imax), imin.max(imax)],
            facets: vec![
                Facet {
                    normal: Vector::from_element(1, -1.0),
                    offset: -points[imin][0],
                },
                Facet {
                    normal: Vector::from_element(1, 1.0),
                    offset: points[imax][0],
                },
            ],
            affine_dim: 1,
        });
    }

    let interior: Vector = simplex.iter().map(|&i| &points[i]).sum::<Vector>() / (d + 1) as f64;
    let eps = 1e-11 * scale;
    let make = |verts: Vec<usize>| -> Option<SimplexFacet> {
        let refs: Vec<&Vector> = verts.iter().map(|&i| &points[i]).collect();
        let mut normal = hyperplane_normal(&refs, scale)?;
        let mut offset = normal.dot(refs[0]);
        if normal.dot(&interior) > offset {
            normal.neg_mut();
            offset = -offset;
        }
        Some(SimplexFacet {
            verts,
            normal,
            offset,
            alive: true,
        })
    };

    let mut facets: Vec<SimplexFacet> = Vec::new();
    for skip in 0..=d {
        let verts: Vec<usize> = simplex
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != skip)
            .map(|(_, &i)| i)
            .collect();
        facets.push(make(verts).ok_or_else(|| {
            Error::NumericalDegeneracy("degenerate initial simplex".into())
        })?);
    }

    for (pi, p) in points.iter().enumerate() {
        if simplex.contains(&pi) {
            continue;
        }
        let visible: Vec<usize> = facets
            .iter()
            .enumerate()
            .filter(|(_, f)| f.alive && f.normal.dot(p) - f.offset > eps)
            .map(|(i, _)| i)
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut ridges: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for &fi in &visible {
            let verts = &facets[fi].verts;
            for skip in 0..verts.len() {
                let mut ridge: Vec<usize> = verts
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != skip)
                    .map(|(_, &v)| v)
                    .collect();
                ridge.sort_unstable();
                *ridges.entry(ridge).or_insert(0) += 1;
            }
        }
        for &fi in &visible {
            facets[fi].alive = false;
        }
        for (ridge, count) in ridges {
            if count != 1 {
                continue;
            }
            let mut verts = ridge;
            verts.push(pi);
            if let Some(f) = make(verts) {
                facets.push(f);
            }
        }
    }

    let alive: Vec<&SimplexFacet> = facets.iter().filter(|f| f.alive).collect();
    let mut merged: Vec<Facet> = Vec::new();
    for f in &alive {
        let dup = merged.iter().any(|g| {
            (&g.normal - &f.normal).norm() <= 1e-9 && (g.offset - f.offset).abs() <= 1e-9 * scale
        });
        if !dup {
            merged.push(Facet {
                normal: f.normal.clone(),
                offset: f.offset,
            });
        }
    }
    let mut candidates: Vec<usize> = alive.iter().flat_map(|f| f.verts.iter().copied()).collect();
    candidates.sort_unstable();
    candidates.dedup();
    let vertex_ids = candidates
        .into_iter()
        .filter(|&i| {
            let active: Vec<Vector> = merged
                .iter()
                .filter(|f| f.slack(&points[i]).abs() <= 1e-9 * scale)
                .map(|f| f.normal.clone())
                .collect();
            active.len() >= d && rank(&Matrix::from_columns(&active), 1e-9) == d
        })
        .collect();
    Ok(RawHull {
        vertex_ids,
        facets: merged,
        affine_dim: d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(raw: &[&[f64]]) -> Vec<Vector> {
        raw.iter().map(|p| Vector::from_column_slice(p)).collect()
    }

    #[test]
    fn square_with_center() {
        let p = pts(&[&[0.0, 0.0], &[1.0, 0.0], &[0.5, 0.5], &[1.0, 1.0], &[0.0, 1.0]]);
        let h = hull_indices(&p).unwrap();
        assert_eq!(h.vertex_ids, vec![0, 1, 3, 4]);
        assert_eq!(h.facets.len(), 4);
        for f in &h.facets {
            assert!(f.slack(&p[2]) > 0.4);
        }
    }

    #[test]
    fn cube_faces_merge() {
        let mut p = Vec::new();
        for i in 0..8 {
            p.push(Vector::from_vec(vec![
                (i & 1) as f64,
                ((i >> 1) & 1) as f64,
                ((i >> 2) & 1) as f64,
            ]));
        }
        p.push(Vector::from_vec(vec![0.5, 0.5, 1.0]));
        let h = hull_indices(&p).unwrap();
        assert_eq!(h.facets.len(), 6);
        assert_eq!(h.vertex_ids, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn collinear_points_are_degenerate() {
        let p = pts(&[&[0.0, 0.0], &[1.0, 1.0], &[3.0, 3.0], &[2.0, 2.0]]);
        let h = hull_indices(&p).unwrap();
        assert_eq!(h.affine_dim, 1);
        assert_eq!(h.vertex_ids, vec![0, 2]);
    }

    #[test]
    fn four_simplex() {
        let mut p: Vec<Vector> = (0..4)
            .map(|i| {
                let mut v = Vector::zeros(4);
                v[i] = 1.0;
                v
            })
            .collect();
        p.push(Vector::zeros(4));
        p.push(Vector::from_element(4, 0.1));
        let h = hull_indices(&p).unwrap();
        assert_eq!(h.facets.len(), 5);
        assert_eq!(h.vertex_ids, vec![0, 1, 2, 3, 4]);
    }
}
