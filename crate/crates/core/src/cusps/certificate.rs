use super::expm;
use super::group::TranslationGroup;
use crate::error::{Error, Result};
use crate::linalg::{null_space, rank, Matrix, ProjPoint, Vector};

/// Central-difference step for the orbit parameterization.
pub const CERT_STEP: f64 = 1e-4;
/// Eigenvalue magnitude below which `Q` counts as zero.
pub const CERT_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    StrictlyConvex,
    Flat,
    Indefinite,
    /// Rank-deficient orbit map, or eigenvalues of one sign with some of them
    /// below tolerance.
    Degenerate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::StrictlyConvex => "strictly_convex",
            Self::Flat => "flat",
            Self::Indefinite => "indefinite",
            Self::Degenerate => "degenerate",
        }
    }
}

/// Second fundamental form `Q = nu . D^2 f` of the orbit `T x` at `x`.
///
/// `normal` is oriented so that `trace Q >= 0`; it then points to the
/// convex side of the orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexityCertificate {
    pub base_point: ProjPoint,
    pub chart: usize,
    pub normal: Vector,
    pub q: Matrix,
    pub eigenvalues: Vec<f64>,
    pub tangent_rank: usize,
    pub verdict: Verdict,
    pub tolerance: f64,
}

impl ConvexityCertificate {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Chart index of the largest homogeneous coordinate (ties go to the last).
pub(crate) fn chart_index(x: &Vector) -> usize {
    let mut best = 0;
    for (k, v) in x.iter().enumerate() {
        if v.abs() >= x[best].abs() {
            best = k;
        }
    }
    best
}

pub(crate) fn chart_coords(w: &Vector, k: usize) -> Option<Vector> {
    let wk = w[k];
    if !wk.is_finite() || wk.abs() <= 1e-300 {
        return None;
    }
    let out: Vec<f64> = w.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, c)| c / wk).collect();
    let out = Vector::from_vec(out);
    out.iter().all(|c| c.is_finite()).then_some(out)
}

/// Orbit map `u -> chart_k(exp(sum u_i X_i) x)`.
pub(crate) fn orbit_map(basis: &[Matrix], x: &Vector, k: usize, u: &[f64]) -> Result<Vector> {
    let size = x.len();
    let mut m = Matrix::zeros(size, size);
    for (b, ui) in basis.iter().zip(u) {
        m += b * *ui;
    }
    chart_coords(&(expm(&m)? * x), k).ok_or_else(|| Error::NumericalDegeneracy("orbit leaves the chart".into()))
}

pub fn orbit_certificate(t: &TranslationGroup, x: &ProjPoint) -> Result<ConvexityCertificate> {
    let n = x.dim();
    if t.dim() + 1 != n {
        return Err(Error::WrongDimension {
            expected: n - 1,
            got: t.dim(),
        });
    }
    let basis: Vec<Matrix> = t.lie_basis().iter().map(|b| b.as_matrix().clone()).collect();
    if basis[0].nrows() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: basis[0].nrows() - 1,
            got: n,
        });
    }
    let xv = x.coords().clone();
    let k = chart_index(&xv);
    let d = n - 1;
    let h = CERT_STEP;
    let f = |u: &[f64]| orbit_map(&basis, &xv, k, u);
    let shifted = |pairs: &[(usize, f64)]| {
        let mut u = vec![0.0; d];
        for &(i, s) in pairs {
            u[i] += s;
        }
        f(&u)
    };
    let f0 = f(&vec![0.0; d])?;
    let mut jac = Matrix::zeros(n, d);
    for i in 0..d {
        let col = (shifted(&[(i, h)])? - shifted(&[(i, -h)])?) / (2.0 * h);
        jac.set_column(i, &col);
    }
    let tangent_rank = rank(&jac, 1e-6 * jac.norm().max(1e-300));
    let mut hess: Vec<Vec<Vector>> = vec![vec![Vector::zeros(n); d]; d];
    for i in 0..d {
        hess[i][i] = (shifted(&[(i, h)])? - &f0 * 2.0 + shifted(&[(i, -h)])?) / (h * h);
        for j in i + 1..d {
            let v = (shifted(&[(i, h), (j, h)])? - shifted(&[(i, h), (j, -h)])?
                - shifted(&[(i, -h), (j, h)])?
                + shifted(&[(i, -h), (j, -h)])?)
                / (4.0 * h * h);
            hess[i][j] = v.clone();
            hess[j][i] = v;
        }
    }
    let base = |normal: Vector, q: Matrix, eigenvalues: Vec<f64>, verdict| ConvexityCertificate {
        base_point: x.clone(),
        chart: k,
        normal,
        q,
        eigenvalues,
        tangent_rank,
        verdict,
        tolerance: CERT_TOL,
    };
    if tangent_rank < d {
        return Ok(base(Vector::zeros(n), Matrix::zeros(d, d), vec![0.0; d], Verdict::Degenerate));
    }
    let normals = null_space(&jac.transpose(), 1e-6);
    if normals.ncols() != 1 {
        return Ok(base(Vector::zeros(n), Matrix::zeros(d, d), vec![0.0; d], Verdict::Degenerate));
    }
    let mut nu = normals.column(0).into_owned();
    nu /= nu.norm();
    let mut q = Matrix::from_fn(d, d, |i, j| nu.dot(&hess[i][j]));
    if q.trace() < 0.0 {
        nu.neg_mut();
        q.neg_mut();
    }
    let mut eig: Vec<f64> = q.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    let big: Vec<f64> = eig.iter().copied().filter(|e| e.abs() > CERT_TOL).collect();
    let verdict = if big.is_empty() {
        Verdict::Flat
    } else if big.len() == d && big.iter().all(|&e| e > 0.0) {
        Verdict::StrictlyConvex
    } else if big.iter().any(|&e| e > 0.0) && big.iter().any(|&e| e < 0.0) {
        Verdict::Indefinite
    } else {
        Verdict::Degenerate
    };
    Ok(base(nu, q, eig, verdict))
}

#[cfg(test)]
mod tests {
    use super::super::family::CuspFamily;
    use super::super::group::translation_group;
    use super::*;
    use crate::linalg::LieElement;
    use approx::assert_relative_eq;

    fn group(f: CuspFamily) -> TranslationGroup {
        translation_group(&f.lattice().unwrap()).unwrap()
    }

    #[test]
    fn c0_paraboloid_has_identity_form() {
        let c = orbit_certificate(&group(CuspFamily::C0), &ProjPoint::from_slice(&[0.0, 0.0, 0.0, 1.0]).unwrap()).unwrap();
        assert_eq!(c.verdict, Verdict::StrictlyConvex);
        assert_eq!(c.chart, 3);
        // The Lie basis is orthonormal in the Frobenius norm, so each unit
        // direction has `|X x|^2 = 1/2` in the chart.
        for e in &c.eigenvalues {
            assert_relative_eq!(*e, 0.5, epsilon = 1e-6);
        }
        assert_relative_eq!(c.normal[0], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn c3_surface_is_strictly_convex_and_flat_slice() {
        let g = group(CuspFamily::C3 { alpha: 1.0, beta: 1.0 });
        let c = orbit_certificate(&g, &ProjPoint::from_slice(&[1.0; 4]).unwrap()).unwrap();
        assert_eq!(c.verdict, Verdict::StrictlyConvex);
        let flat = orbit_certificate(&g, &ProjPoint::from_slice(&[1.0, 1.0, 0.0, 1.0]).unwrap()).unwrap();
        assert_eq!(flat.verdict, Verdict::Flat);
    }

    #[test]
    fn c3_form_matches_graph_hessian() {
        // In the coordinates (s, t) with u = (e^s, e^t), the graph
        // z = u^-a v^-b has D^2 z(s,t) = [[a^2, ab], [ab, b^2]] z, and the
        // chart Hessian of (e^s, e^t) is diag(1, 1) in the first two slots.
        let (a, b) = (1.0, 2.0);
        let x = Matrix::from_diagonal(&Vector::from_vec(vec![1.0, 0.0, -a, 0.0]));
        let y = Matrix::from_diagonal(&Vector::from_vec(vec![0.0, 1.0, -b, 0.0]));
        let t = TranslationGroup::from_basis(vec![LieElement::new(x).unwrap(), LieElement::new(y).unwrap()]).unwrap();
        let c = orbit_certificate(&t, &ProjPoint::from_slice(&[1.0; 4]).unwrap()).unwrap();
        let grad = Vector::from_vec(vec![1.0, 0.0, -a]).cross(&Vector::from_vec(vec![0.0, 1.0, -b]));
        let nu = &grad / grad.norm();
        let second = |i: usize, j: usize| {
            let d2 = [[a * a, a * b], [a * b, b * b]][i][j];
            let diag = if i == j { 1.0 } else { 0.0 };
            let v = Vector::from_vec(vec![if i == 0 { diag } else { 0.0 }, if i == 1 { diag } else { 0.0 }, d2]);
            nu.dot(&v)
        };
        let expect = Matrix::from_fn(2, 2, |i, j| second(i, j));
        let expect = if expect.trace() < 0.0 { -expect } else { expect };
        assert_relative_eq!(c.q, expect, epsilon = 1e-6);
        assert_eq!(c.verdict, Verdict::StrictlyConvex);
    }

    #[test]
    fn wrong_dimension() {
        let x = LieElement::elementary(3, 0, 0);
        let t = TranslationGroup::from_basis(vec![x]).unwrap();
        let err = orbit_certificate(&t, &ProjPoint::from_slice(&[1.0; 4]).unwrap()).unwrap_err();
        assert_eq!(err, Error::WrongDimension { expected: 2, got: 1 });
    }

    #[test]
    fn chart_ties_go_last() {
        assert_eq!(chart_index(&Vector::from_vec(vec![1.0, -1.0, 0.5, 1.0])), 3);
        assert_eq!(chart_index(&Vector::from_vec(vec![2.0, -1.0, 0.5, 1.0])), 0);
    }
}
