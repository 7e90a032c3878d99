//! Small-dimension real linear algebra for projective geometry.
//!
//! Matrices here are at most 5×5 (projective dimension `n <= 4`), so every
//! routine favours robustness and exactness on structured inputs (nilpotent,
//! triangular, unipotent) over asymptotic cost.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Relative tolerance used when declaring an eigenvalue real.
pub const REAL_EIG_TOL: f64 = 1e-8;
/// Eigenvalues closer than this (relative) are treated as one cluster and
/// replaced by the cluster mean; defective blocks scatter roots by roughly
/// `eps^(1/k)`.
pub const EIG_CLUSTER_TOL: f64 = 5e-5;
/// Relative determinant threshold for invertibility.
pub const DET_TOL: f64 = 1e-12;
/// Commutator tolerance for "pairwise commuting" generator sets.
pub const COMMUTE_TOL: f64 = 1e-9;

const MAX_AMBIENT: usize = 5;

fn check_finite(m: &Matrix) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

fn check_square(m: &Matrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    if m.nrows() < 2 || m.nrows() > MAX_AMBIENT {
        return Err(Error::UnsupportedDimension(m.nrows().saturating_sub(1)));
    }
    Ok(())
}

/// A real `(n+1)×(n+1)` matrix acting on `RP^n` (or `S^n`).
#[derive(Clone, Debug, PartialEq)]
pub struct ProjMatrix(Matrix);

impl ProjMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        check_square(&m)?;
        check_finite(&m)?;
        Ok(Self(m))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(matrix_from_rows(rows)?)
    }

    /// Identity acting on `RP^dim`.
    pub fn identity(dim: usize) -> Self {
        Self(Matrix::identity(dim + 1, dim + 1))
    }

    /// Projective dimension `n`.
    pub fn dim(&self) -> usize {
        self.0.nrows() - 1
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        matrix_to_rows(&self.0)
    }

    /// `|det| > DET_TOL * prod(column norms)` (Hadamard-relative test).
    pub fn is_invertible(&self) -> bool {
        let scale: f64 = self.0.column_iter().map(|c| c.norm()).product();
        scale > 0.0 && self.0.determinant().abs() > DET_TOL * scale
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_invertible() {
            return Err(Error::Singular);
        }
        self.0.clone().try_inverse().map(Self).ok_or(Error::Singular)
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &ProjMatrix) -> ProjMatrix {
        ProjMatrix(&self.0 * &other.0)
    }

    pub fn scaled(&self, s: f64) -> ProjMatrix {
        ProjMatrix(&self.0 * s)
    }

    pub fn is_e_matrix(&self) -> bool {
        eigenvalues(&self.0).iter().all(|z| is_real(z) && z.re > 0.0)
    }
}

/// An element of `gl(n+1, R)`; no invertibility requirement.
#[derive(Clone, Debug, PartialEq)]
pub struct LieElement(Matrix);

impl LieElement {
    pub fn new(m: Matrix) -> Result<Self> {
        check_square(&m)?;
        check_finite(&m)?;
        Ok(Self(m))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(matrix_from_rows(rows)?)
    }

    pub fn zero(dim: usize) -> Self {
        Self(Matrix::zeros(dim + 1, dim + 1))
    }

    /// Elementary matrix `E_{i,j}` (zero-based indices).
    pub fn elementary(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Matrix::zeros(dim + 1, dim + 1);
        m[(i, j)] = 1.0;
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows() - 1
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        matrix_to_rows(&self.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * s)
    }

    pub fn add(&self, other: &LieElement) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn bracket(&self, other: &LieElement) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }
}

/// A point of `RP^n` (or of `S^n` when `oriented`), in homogeneous coordinates.
///
/// Coordinates are stored with unit Euclidean norm. In projective mode the sign
/// is fixed so the largest-magnitude coordinate is positive.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjPoint {
    coords: Vector,
    oriented: bool,
}

impl ProjPoint {
    pub fn new(coords: Vector) -> Result<Self> {
        Self::build(coords, false)
    }

    /// A point of the sphere `S^n`: only positive rescaling is forgotten.
    pub fn oriented(coords: Vector) -> Result<Self> {
        Self::build(coords, true)
    }

    fn build(coords: Vector, oriented: bool) -> Result<Self> {
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if coords.len() < 2 || coords.len() > MAX_AMBIENT {
            return Err(Error::UnsupportedDimension(coords.len().saturating_sub(1)));
        }
        let norm = coords.norm();
        if norm <= f64::MIN_POSITIVE {
            return Err(Error::NumericalDegeneracy("zero homogeneous vector".into()));
        }
        let mut coords = coords / norm;
        if !oriented {
            let k = coords.iamax();
            if coords[k] < 0.0 {
                coords.neg_mut();
            }
        }
        Ok(Self { coords, oriented })
    }

    pub fn from_slice(x: &[f64]) -> Result<Self> {
        Self::new(Vector::from_column_slice(x))
    }

    /// The point `[x : 1]` of the standard affine chart.
    pub fn from_affine(x: &[f64]) -> Result<Self> {
        let mut v = Vector::zeros(x.len() + 1);
        v.rows_mut(0, x.len()).copy_from_slice(x);
        v[x.len()] = 1.0;
        Self::build(v, true)
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &Vector {
        &self.coords
    }

    pub fn is_oriented(&self) -> bool {
        self.oriented
    }

    /// Affine coordinates in the chart `x_k != 0`.
    pub fn chart(&self, k: usize) -> Option<Vector> {
        let w = self.coords[k];
        if w.abs() <= 1e-300 {
            return None;
        }
        let mut out = Vector::zeros(self.coords.len() - 1);
        let mut j = 0;
        for (i, c) in self.coords.iter().enumerate() {
            if i != k {
                out[j] = c / w;
                j += 1;
            }
        }
        Some(out)
    }

    /// Affine coordinates in the standard chart (last coordinate 1).
    pub fn to_affine(&self) -> Option<Vector> {
        self.chart(self.coords.len() - 1)
    }

    /// Same point of `RP^n` (or `S^n` when both are oriented) within `tol`.
    pub fn same_point(&self, other: &ProjPoint, tol: f64) -> bool {
        if self.coords.len() != other.coords.len() {
            return false;
        }
        let d_plus = (&self.coords - &other.coords).norm();
        if self.oriented && other.oriented {
            d_plus <= tol
        } else {
            d_plus.min((&self.coords + &other.coords).norm()) <= tol
        }
    }
}

pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<Matrix> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::EmptySet);
    }
    let m = rows[0].len();
    if let Some(bad) = rows.iter().find(|r| r.len() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: bad.len(),
        });
    }
    Ok(Matrix::from_fn(n, m, |i, j| rows[i][j]))
}

pub fn matrix_to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn one_norm(m: &Matrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `true` when `x^(size) = 0` up to a tolerance relative to `||x||^size`.
pub fn is_nilpotent(x: &Matrix) -> bool {
    let size = x.nrows();
    let norm = x.norm();
    if norm == 0.0 {
        return true;
    }
    let mut p = x.clone();
    for _ in 1..size {
        p = &p * x;
    }
    p.norm() <= 1e-13 * norm.powi(size as i32)
}

/// Finite exponential series; exact (up to rounding) when `x` is nilpotent.
pub fn exp_nilpotent(x: &Matrix) -> Matrix {
    let size = x.nrows();
    let mut out = Matrix::identity(size, size);
    let mut term = Matrix::identity(size, size);
    for k in 1..size {
        term = &term * x / k as f64;
        out += &term;
    }
    out
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Degree-13 Padé approximant with scaling and squaring.
pub fn exp_pade(a: &Matrix) -> Matrix {
    let size = a.nrows();
    let norm = one_norm(a);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a = a / 2f64.powi(s);
    let b = &PADE13;
    let id = Matrix::identity(size, size);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9])
        + &a6 * b[7]
        + &a4 * b[5]
        + &a2 * b[3]
        + &id * b[1];
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8])
        + &a6 * b[6]
        + &a4 * b[4]
        + &a2 * b[2]
        + &id * b[0];
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Pade denominator is nonsingular for scaled arguments");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Matrix exponential of a Lie algebra element.
pub fn mat_exp(x: &LieElement) -> Result<ProjMatrix> {
    let m = x.as_matrix();
    if let Some(max_re) = eigenvalues(m)
        .iter()
        .map(|z| z.re)
        .reduce(f64::max)
        .filter(|&re| re > 700.0)
    {
        return Err(Error::Overflow(max_re));
    }
    let e = if is_nilpotent(m) {
        exp_nilpotent(m)
    } else {
        exp_pade(m)
    };
    ProjMatrix::new(e)
}

/// Principal square root via the product form of the Denman–Beavers iteration.
pub fn sqrt_db(a: &Matrix) -> Result<Matrix> {
    let size = a.nrows();
    let id = Matrix::identity(size, size);
    let mut m = a.clone();
    let mut y = a.clone();
    for _ in 0..100 {
        let m_inv = m.clone().try_inverse().ok_or(Error::Singular)?;
        y = &y * (&id + &m_inv) * 0.5;
        m = (&id + (&m + &m_inv) * 0.5) * 0.5;
        if (&m - &id).norm() < 1e-14 * (size as f64) {
            return Ok(y);
        }
    }
    Err(Error::NumericalDegeneracy(
        "square root iteration did not converge".into(),
    ))
}

/// `log(a)` for `||a - I|| < 1` via the Gregory series in `(a-I)(a+I)^-1`.
fn log_near_identity(a: &Matrix) -> Result<Matrix> {
    let size = a.nrows();
    let id = Matrix::identity(size, size);
    let denom = (a + &id).try_inverse().ok_or(Error::Singular)?;
    let z = (a - &id) * denom;
    let z2 = &z * &z;
    let mut term = z.clone();
    let mut out = z.clone();
    for j in 1..200 {
        term = &term * &z2;
        let add = &term / (2 * j + 1) as f64;
        out += &add;
        if add.norm() < 1e-18 * out.norm().max(1e-300) {
            break;
        }
    }
    Ok(out * 2.0)
}

/// The unique real logarithm with real spectrum of an e-matrix.
pub fn mat_log_e(m: &ProjMatrix) -> Result<LieElement> {
    let a = m.as_matrix();
    if let Some(bad) = eigenvalues(a)
        .into_iter()
        .find(|z| !is_real(z) || z.re <= 0.0)
    {
        return Err(Error::NotEMatrix {
            re: bad.re,
            im: bad.im,
        });
    }
    let size = a.nrows();
    let id = Matrix::identity(size, size);
    let n = a - &id;
    if is_nilpotent(&n) {
        let mut out = Matrix::zeros(size, size);
        let mut p = id.clone();
        for k in 1..size {
            p = &p * &n;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            out += &p * (sign / k as f64);
        }
        return LieElement::new(out);
    }
    let mut root = a.clone();
    let mut k = 0;
    while one_norm(&(&root - &id)) >= 0.25 {
        root = sqrt_db(&root)?;
        k += 1;
        if k > 64 {
            return Err(Error::NumericalDegeneracy(
                "too many square roots in logarithm".into(),
            ));
        }
    }
    let log = log_near_identity(&root)? * 2f64.powi(k);
    LieElement::new(log)
}

/// `|Im λ| <= REAL_EIG_TOL * (1 + |λ|)`.
pub fn is_real(z: &Complex<f64>) -> bool {
    z.im.abs() <= REAL_EIG_TOL * (1.0 + z.norm())
}

/// All eigenvalues with multiplicity, sorted by `(re, im)`.
///
/// Roots of a defective block are scattered by rounding; clusters within
/// [`EIG_CLUSTER_TOL`] are replaced by their mean, which is well conditioned.
pub fn eigenvalues(m: &Matrix) -> Vec<Complex<f64>> {
    let raw: Vec<Complex<f64>> = m.clone().complex_eigenvalues().iter().copied().collect();
    let mut out = cluster_average(&raw);
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    out
}

fn cluster_average(raw: &[Complex<f64>]) -> Vec<Complex<f64>> {
    let k = raw.len();
    let mut label: Vec<usize> = (0..k).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..k {
        for j in (i + 1)..k {
            let tol = EIG_CLUSTER_TOL * (1.0 + raw[i].norm().max(raw[j].norm()));
            if (raw[i] - raw[j]).norm() <= tol {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out = raw.to_vec();
    for i in 0..k {
        let r = find(&mut label, i);
        let members: Vec<usize> = (0..k).filter(|&j| find(&mut label, j) == r).collect();
        if members.len() > 1 {
            let sum: Complex<f64> = members.iter().map(|&j| raw[j]).sum();
            let mut mean = sum / members.len() as f64;
            if is_real(&mean) {
                mean.im = 0.0;
            }
            out[i] = mean;
        }
    }
    out
}

/// Image of `x` under `m`, normalized; orientation is kept for sphere points.
pub fn act_projective(m: &ProjMatrix, x: &ProjPoint) -> Result<ProjPoint> {
    if m.as_matrix().nrows() != x.coords().len() {
        return Err(Error::DimensionMismatch {
            expected: m.as_matrix().nrows(),
            got: x.coords().len(),
        });
    }
    let y = m.as_matrix() * x.coords();
    if x.is_oriented() {
        ProjPoint::oriented(y)
    } else {
        ProjPoint::new(y)
    }
}

/// Orthonormal basis (as columns) of the numerical null space of `a`.
///
/// Singular values below `tol * max(1, sigma_max)` count as zero.
pub fn null_space(a: &Matrix, tol: f64) -> Matrix {
    let cols = a.ncols();
    let rows = a.nrows().max(cols);
    let mut padded = Matrix::zeros(rows, cols);
    padded.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.max().max(1.0);
    let idx: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= tol * smax)
        .collect();
    let mut out = Matrix::zeros(cols, idx.len());
    for (c, &i) in idx.iter().enumerate() {
        out.set_column(c, &v_t.row(i).transpose());
    }
    out
}

/// Numerical rank with relative singular-value threshold.
pub fn rank(a: &Matrix, tol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let sv = a.clone().svd(false, false).singular_values;
    let smax = sv.max();
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

/// Orthogonal matrix whose first column is the unit vector `v` (Householder).
pub fn orthogonal_completion(v: &Vector) -> Matrix {
    let k = v.len();
    let mut e1 = Vector::zeros(k);
    e1[0] = 1.0;
    let w = v - &e1;
    let wn = w.norm();
    if wn < 1e-14 {
        return Matrix::identity(k, k);
    }
    let w = w / wn;
    Matrix::identity(k, k) - &w * w.transpose() * 2.0
}

pub fn is_upper_triangular(m: &Matrix, tol: f64) -> bool {
    let scale = m.norm().max(1.0);
    (0..m.nrows()).all(|i| (0..i).all(|j| m[(i, j)].abs() <= tol * scale))
}

fn commutator_norm(a: &Matrix, b: &Matrix) -> f64 {
    (a * b - b * a).norm()
}

/// `true` when every pair commutes within [`COMMUTE_TOL`] (relative).
pub fn pairwise_commute(mats: &[Matrix]) -> bool {
    mats.iter().enumerate().all(|(i, a)| {
        mats[i + 1..]
            .iter()
            .all(|b| commutator_norm(a, b) <= COMMUTE_TOL * (a.norm() * b.norm()).max(1.0))
    })
}

fn real_eigs_desc(m: &Matrix) -> Option<Vec<f64>> {
    let eigs = eigenvalues(m);
    if !eigs.iter().all(is_real) {
        return None;
    }
    let mut re: Vec<f64> = eigs.iter().map(|z| z.re).collect();
    re.sort_by(|a, b| b.abs().total_cmp(&a.abs()).then(b.total_cmp(a)));
    Some(re)
}

/// Common eigenvector of commuting real-spectrum matrices.
///
/// Restricts successively to the eigenspace of each matrix for its
/// largest-magnitude eigenvalue; the final vector is the normalized projection
/// of the first standard basis vector with a nonzero component.
fn common_eigenvector(mats: &[Matrix]) -> Result<Vector> {
    let k = mats[0].nrows();
    let mut basis = Matrix::identity(k, k);
    for m in mats {
        let restricted = basis.transpose() * m * &basis;
        let eigs = real_eigs_desc(&restricted)
            .ok_or_else(|| Error::NoCommonFlag("complex spectrum".into()))?;
        let lambda = eigs[0];
        let shifted = &restricted - Matrix::identity(basis.ncols(), basis.ncols()) * lambda;
        let ns = null_space(&shifted, 1e-7);
        if ns.ncols() == 0 {
            return Err(Error::NoCommonFlag(format!(
                "no eigenvector for eigenvalue {lambda:.6e}"
            )));
        }
        basis = &basis * ns;
    }
    let proj = &basis * basis.transpose();
    let mut v = (0..k)
        .map(|j| proj.column(j).into_owned())
        .find(|c| c.norm() > 1e-6)
        .ok_or_else(|| Error::NoCommonFlag("empty common eigenspace".into()))?;
    v /= v.norm();
    let i = v.iamax();
    if v[i] < 0.0 {
        v.neg_mut();
    }
    for m in mats {
        let mv = m * &v;
        let lam = v.dot(&mv);
        if (&mv - &v * lam).norm() > 1e-7 * m.norm().max(1.0) {
            return Err(Error::NoCommonFlag(
                "eigenspace is not invariant (generators do not commute)".into(),
            ));
        }
    }
    Ok(v)
}

/// Conjugates commuting real-spectrum generators into upper-triangular form.
///
/// Returns `(P, gens')` with `gens'[i] = P^-1 gens[i] P` upper triangular; `P`
/// is orthogonal. Already-triangular inputs return `P = I` unchanged.
pub fn simultaneous_upper_triangularize(
    gens: &[ProjMatrix],
) -> Result<(ProjMatrix, Vec<ProjMatrix>)> {
    let first = gens
        .first()
        .ok_or_else(|| Error::NoCommonFlag("no generators".into()))?;
    let size = first.as_matrix().nrows();
    if let Some(g) = gens.iter().find(|g| g.as_matrix().nrows() != size) {
        return Err(Error::DimensionMismatch {
            expected: size,
            got: g.as_matrix().nrows(),
        });
    }
    let mats: Vec<Matrix> = gens.iter().map(|g| g.as_matrix().clone()).collect();
    if !pairwise_commute(&mats) {
        return Err(Error::NoCommonFlag("generators do not commute".into()));
    }
    if mats.iter().any(|m| !eigenvalues(m).iter().all(is_real)) {
        return Err(Error::NoCommonFlag("complex spectrum".into()));
    }
    if mats.iter().all(|m| is_upper_triangular(m, 1e-12)) {
        return Ok((ProjMatrix::identity(size - 1), gens.to_vec()));
    }
    let mut p = Matrix::identity(size, size);
    let mut current = mats;
    for level in 0..size - 1 {
        let k = size - level;
        let blocks: Vec<Matrix> = current
            .iter()
            .map(|m| m.view((level, level), (k, k)).into_owned())
            .collect();
        let v = common_eigenvector(&blocks)?;
        let q = orthogonal_completion(&v);
        let mut qf = Matrix::identity(size, size);
        qf.view_mut((level, level), (k, k)).copy_from(&q);
        p = &p * &qf;
        current = current
            .iter()
            .map(|m| qf.transpose() * m * &qf)
            .collect();
    }
    let out = current
        .into_iter()
        .map(|mut m| {
            let tol = 1e-9 * m.norm().max(1.0);
            for i in 0..size {
                for j in 0..i {
                    if m[(i, j)].abs() <= tol {
                        m[(i, j)] = 0.0;
                    }
                }
            }
            ProjMatrix::new(m)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((ProjMatrix::new(p)?, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn e(i: usize, j: usize) -> Matrix {
        LieElement::elementary(3, i, j).into_matrix()
    }

    fn c0_log(s: f64, t: f64) -> Matrix {
        (e(0, 1) + e(1, 3)) * s + (e(0, 2) + e(2, 3)) * t
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let out = mat_exp(&LieElement::zero(3)).unwrap();
        assert_eq!(out.as_matrix(), &Matrix::identity(4, 4));
    }

    #[test]
    fn exp_nilpotent_reproduces_c0() {
        let x = LieElement::new(c0_log(1.0, 2.0)).unwrap();
        let m = mat_exp(&x).unwrap().into_matrix();
        assert_eq!(m[(0, 3)], 2.5);
        assert_eq!(m[(0, 1)], 1.0);
        assert_eq!(m[(0, 2)], 2.0);
        assert_eq!(m[(1, 3)], 1.0);
        assert_eq!(m[(2, 3)], 2.0);
    }

    #[test]
    fn exp_diagonal() {
        let x = LieElement::elementary(3, 0, 0);
        let m = mat_exp(&x).unwrap().into_matrix();
        assert_relative_eq!(m[(0, 0)], std::f64::consts::E, max_relative = 1e-14);
        assert_relative_eq!(m[(1, 1)], 1.0);
    }

    #[test]
    fn exp_overflow_is_reported() {
        let x = LieElement::elementary(1, 0, 0).scale(800.0);
        assert!(matches!(mat_exp(&x), Err(Error::Overflow(_))));
    }

    #[test]
    fn log_examples() {
        let log_i = mat_log_e(&ProjMatrix::identity(3)).unwrap();
        assert_eq!(log_i.as_matrix().norm(), 0.0);

        let c0 = ProjMatrix::new(exp_nilpotent(&c0_log(1.0, 2.0))).unwrap();
        let log = mat_log_e(&c0).unwrap();
        assert!((log.as_matrix() - c0_log(1.0, 2.0)).norm() < 1e-15);

        let d = ProjMatrix::new(Matrix::from_diagonal(&Vector::from_vec(vec![2.0, 0.5]))).unwrap();
        let log = mat_log_e(&d).unwrap().into_matrix();
        assert_relative_eq!(log[(0, 0)], 2f64.ln(), max_relative = 1e-13);
        assert_relative_eq!(log[(1, 1)], -(2f64.ln()), max_relative = 1e-13);
        assert!(log[(0, 1)].abs() < 1e-15);

        let neg = ProjMatrix::new(Matrix::from_diagonal(&Vector::from_vec(vec![-1.0, 1.0]))).unwrap();
        assert!(matches!(mat_log_e(&neg), Err(Error::NotEMatrix { .. })));
    }

    #[test]
    fn log_of_non_nilpotent_block_matrix_round_trips() {
        // C1-shaped generator: scalar block plus a unipotent 3x3 block.
        let m = Matrix::from_row_slice(
            4,
            4,
            &[
                std::f64::consts::E, 0.0, 0.0, 0.0,
                0.0, 1.0, 1.0, -0.5,
                0.0, 0.0, 1.0, 1.0,
                0.0, 0.0, 0.0, 1.0,
            ],
        );
        let pm = ProjMatrix::new(m.clone()).unwrap();
        let log = mat_log_e(&pm).unwrap();
        let back = mat_exp(&log).unwrap().into_matrix();
        assert!((back - m).norm() < 1e-12);
    }

    #[test]
    fn eigenvalue_examples() {
        let d = Matrix::from_diagonal(&Vector::from_vec(vec![3.0, 1.0, 2.0]));
        let eigs = eigenvalues(&d);
        let re: Vec<f64> = eigs.iter().map(|z| z.re).collect();
        assert_eq!(re, vec![1.0, 2.0, 3.0]);

        let (c, s) = (1f64.cos(), 1f64.sin());
        let rot = Matrix::from_row_slice(2, 2, &[c, -s, s, c]);
        let eigs = eigenvalues(&rot);
        assert_relative_eq!(eigs[0].re, c, epsilon = 1e-14);
        assert_relative_eq!(eigs[0].im, -s, epsilon = 1e-14);
        assert_relative_eq!(eigs[1].im, s, epsilon = 1e-14);
        assert!(!is_real(&eigs[0]));
    }

    #[test]
    fn defective_conjugated_block_has_real_spectrum() {
        let c0 = exp_nilpotent(&c0_log(0.7, -1.3));
        let q = Matrix::from_row_slice(
            4,
            4,
            &[1.0, 0.2, 0.0, 0.3, 0.1, 1.0, 0.4, 0.0, 0.0, 0.3, 1.0, 0.2, 0.5, 0.0, 0.1, 1.0],
        );
        let conj = &q * c0 * q.clone().try_inverse().unwrap();
        for z in eigenvalues(&conj) {
            assert!(is_real(&z), "{z}");
            assert!((z.re - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn action_examples() {
        let x = ProjPoint::from_slice(&[0.3, -1.0, 2.0, 1.0]).unwrap();
        let id = ProjMatrix::identity(3);
        assert!(act_projective(&id, &x).unwrap().same_point(&x, 1e-15));

        let (s, t) = (0.5, -1.5);
        let c0 = ProjMatrix::new(exp_nilpotent(&c0_log(s, t))).unwrap();
        let origin = ProjPoint::from_slice(&[0.0, 0.0, 0.0, 1.0]).unwrap();
        let img = act_projective(&c0, &origin).unwrap();
        let expect =
            ProjPoint::from_slice(&[(s * s + t * t) / 2.0, s, t, 1.0]).unwrap();
        assert!(img.same_point(&expect, 1e-15));

        let doubled = c0.scaled(2.0);
        assert!(act_projective(&doubled, &x)
            .unwrap()
            .same_point(&act_projective(&c0, &x).unwrap(), 1e-15));
    }

    #[test]
    fn triangular_input_is_left_alone() {
        let a = ProjMatrix::new(exp_nilpotent(&c0_log(1.0, 0.0))).unwrap();
        let b = ProjMatrix::new(exp_nilpotent(&c0_log(0.0, 1.0))).unwrap();
        let (p, out) = simultaneous_upper_triangularize(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(p.as_matrix(), &Matrix::identity(4, 4));
        assert_eq!(out, vec![a, b]);
    }

    fn rotation3(axis: [f64; 3], angle: f64) -> Matrix {
        let k = nalgebra::Vector3::new(axis[0], axis[1], axis[2]).normalize();
        let r = nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(k), angle);
        Matrix::from_iterator(3, 3, r.matrix().iter().copied())
    }

    #[test]
    fn generic_rotations_have_no_common_flag() {
        let a = ProjMatrix::new(rotation3([1.0, 0.2, 0.3], 0.9)).unwrap();
        let b = ProjMatrix::new(rotation3([0.1, 1.0, -0.4], 1.3)).unwrap();
        assert!(matches!(
            simultaneous_upper_triangularize(&[a, b]),
            Err(Error::NoCommonFlag(_))
        ));
    }

    #[test]
    fn null_space_of_rank_deficient_matrix() {
        let a = Matrix::from_row_slice(2, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let ns = null_space(&a, 1e-12);
        assert_eq!(ns.ncols(), 1);
        assert_relative_eq!(ns[(2, 0)].abs(), 1.0, epsilon = 1e-14);
    }
}
