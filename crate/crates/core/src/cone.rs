//! Pointed polyhedral cones in `R^{n+1}` and cone duality.

use crate::body::{ConvexBody, ConvexDomain};
use crate::error::{Error, Result};
use crate::hull::hull_indices;
use crate::linalg::{orthogonal_completion, rank, Matrix, Vector};
use crate::minnorm::min_norm_point;

/// Closed pointed cone `{x : psi(x) >= 0}` given by extreme rays and facet
/// normals (unit length unless produced by [`PolyCone::transform`]).
#[derive(Clone, Debug)]
pub struct PolyCone {
    generators: Vec<Vector>,
    normals: Vec<Vector>,
}

/// Min-norm point of the unit generators; it is positive on the cone iff the
/// cone is pointed.
fn separating_functional(unit: &[Vector]) -> Result<Vector> {
    let mn = min_norm_point(unit);
    if mn.point.norm() <= 1e-10 {
        return Err(Error::NotPointed);
    }
    Ok(mn.point)
}

impl PolyCone {
    /// Cone spanned by `gens`; redundant generators are dropped.
    pub fn from_generators(gens: &[Vector]) -> Result<Self> {
        let first = gens.first().ok_or(Error::EmptySet)?;
        let n = first.len();
        if !(2..=5).contains(&n) {
            return Err(Error::UnsupportedDimension(n.saturating_sub(1)));
        }
        if let Some(g) = gens.iter().find(|g| g.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: g.len(),
            });
        }
        if gens.iter().any(|g| g.iter().any(|x| !x.is_finite())) {
            return Err(Error::NonFinite);
        }
        if gens.iter().any(|g| g.norm() == 0.0) {
            return Err(Error::NumericalDegeneracy("zero generator".into()));
        }
        let unit: Vec<Vector> = gens.iter().map(|g| g.normalize()).collect();
        let r = rank(&Matrix::from_columns(&unit), 1e-10);
        let phi = separating_functional(&unit)?;
        if r < n {
            return Err(Error::DegenerateSpan { rank: r, dim: n });
        }
        let phi_hat = phi.normalize();
        let q = orthogonal_completion(&phi_hat);
        let b = q.columns(1, n - 1).into_owned();
        let slice: Vec<Vector> = unit
            .iter()
            .map(|g| b.transpose() * (g / phi.dot(g)))
            .collect();
        let raw = hull_indices(&slice)?;
        if raw.affine_dim < n - 1 {
            return Err(Error::DegenerateSpan {
                rank: raw.affine_dim + 1,
                dim: n,
            });
        }
        let normals = raw
            .facets
            .iter()
            .map(|f| (&phi * f.offset - &b * &f.normal).normalize())
            .collect();
        let generators = raw.vertex_ids.iter().map(|&i| unit[i].clone()).collect();
        Ok(Self {
            generators,
            normals,
        })
    }

    /// Cone `{x : psi(x) >= 0 for all psi}`.
    pub fn from_normals(normals: &[Vector]) -> Result<Self> {
        Ok(Self::from_generators(normals)?.dual())
    }

    /// The closed positive orthant of `R^ambient`.
    pub fn orthant(ambient: usize) -> Result<Self> {
        let basis: Vec<Vector> = (0..ambient)
            .map(|i| {
                let mut e = Vector::zeros(ambient);
                e[i] = 1.0;
                e
            })
            .collect();
        Self::from_generators(&basis)
    }

    /// The cone over a bounded full-dimensional body in the standard chart.
    pub fn over_body(body: &ConvexBody) -> Result<Self> {
        if !body.is_bounded() {
            return Err(Error::NotPointed);
        }
        if body.is_degenerate() {
            return Err(Error::DegenerateSpan {
                rank: body.affine_dim() + 1,
                dim: body.dim() + 1,
            });
        }
        let d = body.dim();
        let generators = body
            .vertices()
            .iter()
            .map(|v| v.clone().insert_row(d, 1.0).normalize())
            .collect();
        let normals = body
            .facets()
            .iter()
            .map(|f| (-&f.normal).insert_row(d, f.offset).normalize())
            .collect();
        Ok(Self {
            generators,
            normals,
        })
    }

    /// Dual cone: generators and facet normals trade places.
    pub fn dual(&self) -> Self {
        Self {
            generators: self.normals.clone(),
            normals: self.generators.clone(),
        }
    }

    /// Image `A . C` of the cone under an invertible linear map.
    ///
    /// Rays are mapped linearly without renormalization, so anything built
    /// from generator combinations is transported exactly.
    pub fn transform(&self, a: &Matrix) -> Result<Self> {
        let inv = a.clone().try_inverse().ok_or(Error::Singular)?;
        Ok(Self {
            generators: self.generators.iter().map(|g| a * g).collect(),
            normals: self.normals.iter().map(|psi| inv.transpose() * psi).collect(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.generators[0].len()
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn normals(&self) -> &[Vector] {
        &self.normals
    }

    /// `min_psi psi(x) / (|psi| |x|)`; positive exactly on the interior.
    pub fn min_functional(&self, x: &Vector) -> f64 {
        let nx = x.norm().max(f64::MIN_POSITIVE);
        self.normals
            .iter()
            .map(|psi| psi.dot(x) / (nx * psi.norm()))
            .fold(f64::INFINITY, f64::min)
    }

    /// Sum of the unit generators, an interior point.
    pub fn interior_point(&self) -> Vector {
        self.generators.iter().sum()
    }
}

impl ConvexDomain for PolyCone {
    fn dim(&self) -> usize {
        self.ambient_dim()
    }

    fn is_interior(&self, x: &Vector) -> bool {
        x.len() == self.ambient_dim() && self.min_functional(x) > 1e-12
    }

    fn exit_distance(&self, x: &Vector, u: &Vector) -> f64 {
        self.normals
            .iter()
            .filter_map(|psi| {
                let rate = psi.dot(u);
                (rate < -1e-15).then(|| psi.dot(x) / -rate)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Same rays up to positive scaling and order.
pub fn same_rays(a: &[Vector], b: &[Vector], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|x| {
            b.iter()
                .any(|y| (x.normalize() - y.normalize()).norm() <= tol)
        })
}
