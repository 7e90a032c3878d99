//! Convex smoothing: the smooth minimum `m^kappa`, relative smoothing of a
//! convex function against a quadratic barrier, and smoothing of convex
//! boundary patches given by samples.

use crate::body::{convex_hull, Ball, ConvexBody, ConvexDomain};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::sampling::{in_ball, seeded_rng, Rng};
use rand::RngExt;

/// Concave symmetric cap `K` on `[0,1]` equal to `min(t, 1-t)` outside
/// `(delta, 1-delta)`, where `kappa = delta / (1 - delta)`.
///
/// Inside the band `K` is the quintic Hermite interpolant of `min(t, 1-t)`
/// matching value, slope and curvature at both ends. Symmetry kills the odd
/// terms, leaving `K = delta + w (5/8 - 3u^2/4 + u^4/8)` with
/// `u = (t - 1/2) / w`, `w = 1/2 - delta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CapFunction {
    kappa: f64,
    delta: f64,
}

pub fn build_cap(kappa: f64) -> Result<CapFunction> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::BadKappa(kappa));
    }
    Ok(CapFunction {
        kappa,
        delta: kappa / (1.0 + kappa),
    })
}

impl CapFunction {
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    fn half_width(&self) -> f64 {
        0.5 - self.delta
    }

    pub fn k(&self, t: f64) -> f64 {
        if t <= self.delta {
            t
        } else if t >= 1.0 - self.delta {
            1.0 - t
        } else {
            let w = self.half_width();
            let u = (t - 0.5) / w;
            let u2 = u * u;
            self.delta + w * (0.625 - 0.75 * u2 + 0.125 * u2 * u2)
        }
    }

    pub fn dk(&self, t: f64) -> f64 {
        if t <= self.delta {
            1.0
        } else if t >= 1.0 - self.delta {
            -1.0
        } else {
            let u = (t - 0.5) / self.half_width();
            -1.5 * u + 0.5 * u * u * u
        }
    }

    pub fn d2k(&self, t: f64) -> f64 {
        if t <= self.delta || t >= 1.0 - self.delta {
            0.0
        } else {
            let u = (t - 0.5) / self.half_width();
            1.5 * (u * u - 1.0) / self.half_width()
        }
    }
}

/// `m^kappa(x, y) = (x + y) K(x / (x + y))` for positive arguments.
pub fn m_kappa(cap: &CapFunction, x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::NonPositiveInput(x, y));
    }
    Ok(m_parts(cap, x, y).value)
}

/// Value and partial derivatives of `m^kappa` up to second order.
#[derive(Clone, Copy, Debug)]
pub struct MParts {
    pub value: f64,
    pub mx: f64,
    pub my: f64,
    pub mxx: f64,
    pub mxy: f64,
    pub myy: f64,
}

/// `m^kappa` and its derivatives on the closed quadrant minus the origin.
pub fn m_parts(cap: &CapFunction, x: f64, y: f64) -> MParts {
    let s = x + y;
    let r = x / s;
    if r <= cap.delta {
        return MParts { value: x, mx: 1.0, my: 0.0, mxx: 0.0, mxy: 0.0, myy: 0.0 };
    }
    if r >= 1.0 - cap.delta {
        return MParts { value: y, mx: 0.0, my: 1.0, mxx: 0.0, mxy: 0.0, myy: 0.0 };
    }
    let (k, dk, d2k) = (cap.k(r), cap.dk(r), cap.d2k(r));
    let s3 = s * s * s;
    MParts {
        value: s * k,
        mx: k + dk * y / s,
        my: k - dk * x / s,
        mxx: d2k * y * y / s3,
        mxy: -d2k * x * y / s3,
        myy: d2k * x * x / s3,
    }
}

/// A convex function on a domain of `R^n` with value, gradient and Hessian.
///
/// Derivatives default to central differences.
pub trait ConvexFunction {
    fn dim(&self) -> usize;
    fn value(&self, x: &Vector) -> f64;

    fn gradient(&self, x: &Vector) -> Vector {
        fd_gradient(&|y| self.value(y), x, 1e-6)
    }

    fn hessian(&self, x: &Vector) -> Matrix {
        fd_hessian(&|y| self.value(y), x, 1e-4)
    }
}

type ScalarFn = Box<dyn Fn(&Vector) -> f64 + Send + Sync>;
type GradFn = Box<dyn Fn(&Vector) -> Vector + Send + Sync>;
type HessFn = Box<dyn Fn(&Vector) -> Matrix + Send + Sync>;

/// Closure-backed [`ConvexFunction`]; missing derivatives fall back to
/// finite differences.
pub struct ConvexFn {
    dim: usize,
    value: ScalarFn,
    gradient: Option<GradFn>,
    hessian: Option<HessFn>,
}

impl ConvexFn {
    pub fn new(dim: usize, value: impl Fn(&Vector) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            dim,
            value: Box::new(value),
            gradient: None,
            hessian: None,
        }
    }

    pub fn with_gradient(mut self, g: impl Fn(&Vector) -> Vector + Send + Sync + 'static) -> Self {
        self.gradient = Some(Box::new(g));
        self
    }

    pub fn with_hessian(mut self, h: impl Fn(&Vector) -> Matrix + Send + Sync + 'static) -> Self {
        self.hessian = Some(Box::new(h));
        self
    }
}

impl ConvexFunction for ConvexFn {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &Vector) -> f64 {
        (self.value)(x)
    }

    fn gradient(&self, x: &Vector) -> Vector {
        match &self.gradient {
            Some(g) => g(x),
            None => fd_gradient(&|y| self.value(y), x, 1e-6),
        }
    }

    fn hessian(&self, x: &Vector) -> Matrix {
        match &self.hessian {
            Some(h) => h(x),
            None => fd_hessian(&|y| self.value(y), x, 1e-4),
        }
    }
}

pub fn fd_gradient(f: &dyn Fn(&Vector) -> f64, x: &Vector, h: f64) -> Vector {
    Vector::from_fn(x.len(), |i, _| {
        let mut a = x.clone();
        let mut b = x.clone();
        a[i] += h;
        b[i] -= h;
        (f(&a) - f(&b)) / (2.0 * h)
    })
}

pub fn fd_hessian(f: &dyn Fn(&Vector) -> f64, x: &Vector, h: f64) -> Matrix {
    let n = x.len();
    let at = |i: usize, si: f64, j: usize, sj: f64| {
        let mut y = x.clone();
        y[i] += si * h;
        y[j] += sj * h;
        f(&y)
    };
    let f0 = f(x);
    let mut hess = Matrix::zeros(n, n);
    for i in 0..n {
        hess[(i, i)] = (at(i, 1.0, i, 0.0) - 2.0 * f0 + at(i, -1.0, i, 0.0)) / (h * h);
        for j in 0..i {
            let v = (at(i, 1.0, j, 1.0) - at(i, 1.0, j, -1.0) - at(i, -1.0, j, 1.0)
                + at(i, -1.0, j, -1.0))
                / (4.0 * h * h);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    hess
}

/// A bounded convex region that can report `max |x|^2` and be sampled.
pub trait Region: ConvexDomain {
    fn max_norm_sq(&self) -> f64;
    fn sample(&self, rng: &mut Rng) -> Vector;
}

impl Region for ConvexBody {
    fn max_norm_sq(&self) -> f64 {
        self.vertices().iter().map(|v| v.norm_squared()).fold(0.0, f64::max)
    }

    fn sample(&self, rng: &mut Rng) -> Vector {
        let w: Vec<f64> = self
            .vertices()
            .iter()
            .map(|_| -(1.0 - rng.random::<f64>()).ln())
            .collect();
        let tot: f64 = w.iter().sum();
        self.vertices().iter().zip(&w).map(|(v, wi)| v * (wi / tot)).sum()
    }
}

impl Region for Ball {
    fn max_norm_sq(&self) -> f64 {
        (self.center.norm() + self.radius).powi(2)
    }

    fn sample(&self, rng: &mut Rng) -> Vector {
        &self.center + in_ball(rng, self.center.len(), self.radius)
    }
}

/// `F = -m^kappa(-f, -g)` with the barrier `g(x) = alpha |x|^2 + beta`.
///
/// `F = g` on the inner body and `F = f` wherever `f >= kappa g`, in
/// particular near the boundary where `f` vanishes.
pub struct RelativeSmooth<F> {
    f: F,
    cap: CapFunction,
    alpha: f64,
    beta: f64,
}

impl<F: ConvexFunction> RelativeSmooth<F> {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn inner(&self) -> &F {
        &self.f
    }

    pub fn barrier(&self, x: &Vector) -> f64 {
        self.alpha * x.norm_squared() + self.beta
    }

    fn parts(&self, x: &Vector) -> Option<(f64, f64, MParts)> {
        let fv = self.f.value(x);
        let gv = self.barrier(x);
        (fv < 0.0 && gv < 0.0).then(|| (fv, gv, m_parts(&self.cap, -fv, -gv)))
    }
}

impl<F: ConvexFunction> ConvexFunction for RelativeSmooth<F> {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn value(&self, x: &Vector) -> f64 {
        match self.parts(x) {
            Some((_, _, m)) => -m.value,
            None => self.f.value(x),
        }
    }

    fn gradient(&self, x: &Vector) -> Vector {
        match self.parts(x) {
            Some((_, _, m)) => {
                let mut g = x * (2.0 * self.alpha * m.my);
                if m.mx != 0.0 {
                    g += self.f.gradient(x) * m.mx;
                }
                g
            }
            None => self.f.gradient(x),
        }
    }

    fn hessian(&self, x: &Vector) -> Matrix {
        let Some((_, _, m)) = self.parts(x) else {
            return self.f.hessian(x);
        };
        let n = x.len();
        let dg = x * (2.0 * self.alpha);
        let mut h = Matrix::identity(n, n) * (2.0 * self.alpha * m.my) - &dg * dg.transpose() * m.myy;
        if m.mx != 0.0 || m.mxy != 0.0 {
            let df = self.f.gradient(x);
            h -= &df * df.transpose() * m.mxx;
            h -= (&df * dg.transpose() + &dg * df.transpose()) * m.mxy;
            if m.mx != 0.0 {
                h += self.f.hessian(x) * m.mx;
            }
        }
        h
    }
}

const HALVINGS: usize = 60;

/// Relative convex smoothing of `f` (convex on `c`, zero on its boundary)
/// that replaces `f` by a strictly convex quadratic on `c_minus`.
///
/// `alpha` is halved from 1 until `2 alpha M <= kappa |max f|` over
/// `c_minus`, with `M = max |x|^2` on `c` and `beta = -2 alpha M`. Convexity
/// puts the maximum of `f` on `c_minus` at a vertex, so the bound certifies
/// `g >= kappa f` on all of `c_minus`.
pub fn relative_smooth<F: ConvexFunction, R: Region>(
    f: F,
    cap: &CapFunction,
    c: &R,
    c_minus: &ConvexBody,
    seed: u64,
) -> Result<RelativeSmooth<F>> {
    let n = f.dim();
    if c.dim() != n || c_minus.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if c.dim() != n { c.dim() } else { c_minus.dim() },
        });
    }
    let mut rng = seeded_rng(seed);
    let f_min = (0..512)
        .map(|_| f.value(&c.sample(&mut rng)))
        .chain(c_minus.vertices().iter().map(|v| f.value(v)))
        .fold(f64::INFINITY, f64::min);
    if !(f_min < -1e-9) {
        return Err(Error::FlatFunction);
    }
    let f_max = c_minus
        .vertices()
        .iter()
        .map(|v| f.value(v))
        .fold(f64::NEG_INFINITY, f64::max);
    let big_m = c.max_norm_sq();
    if !(f_max < 0.0) || !(big_m > 0.0) || c_minus.vertices().iter().any(|v| !c.is_interior(v)) {
        return Err(Error::NoValidAlphaBeta(0));
    }
    let mut alpha = 1.0;
    for _ in 0..=HALVINGS {
        if 2.0 * alpha * big_m <= cap.kappa * -f_max {
            return Ok(RelativeSmooth {
                f,
                cap: *cap,
                alpha,
                beta: -2.0 * alpha * big_m,
            });
        }
        alpha *= 0.5;
    }
    Err(Error::NoValidAlphaBeta(HALVINGS))
}

/// Samples `(x_i, h_i)` of a concave height function over the disc
/// `|x| <= radius` that vanishes on the rim; the region between the
/// hyperplane and the graph is convex.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPatch {
    pub radius: f64,
    pub points: Vec<Vector>,
    pub heights: Vec<f64>,
}

/// Smoothed heights at the same sample points.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothedPatch {
    pub radius: f64,
    pub points: Vec<Vector>,
    pub heights: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
}

/// Concave piecewise-linear envelope of the samples, negated.
fn patch_envelope(patch: &BoundaryPatch) -> Result<ConvexFn> {
    let d = patch.points.first().ok_or(Error::EmptySet)?.len();
    if !(1..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if patch.points.len() != patch.heights.len() {
        return Err(Error::NotConvexPatch("points and heights differ in length".into()));
    }
    if let Some(p) = patch.points.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: p.len() });
    }
    let r = patch.radius;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::NotConvexPatch(format!("radius {r}")));
    }
    let h_max = patch.heights.iter().copied().fold(0.0, f64::max);
    let tol = 1e-9 * (1.0 + h_max);
    for (p, &h) in patch.points.iter().zip(&patch.heights) {
        let rho = p.norm();
        if !h.is_finite() || p.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if rho > r * (1.0 + 1e-9) {
            return Err(Error::NotConvexPatch("sample outside the disc".into()));
        }
        if h < -tol {
            return Err(Error::NotConvexPatch("negative height".into()));
        }
        if rho >= r * (1.0 - 1e-9) && h > tol {
            return Err(Error::NotConvexPatch("nonzero height on the rim".into()));
        }
    }
    if h_max <= 1e-9 {
        return Err(Error::FlatFunction);
    }
    let lifted: Vec<Vector> = patch
        .points
        .iter()
        .zip(&patch.heights)
        .flat_map(|(p, &h)| [p.clone().insert_row(d, h.max(0.0)), p.clone().insert_row(d, 0.0)])
        .collect();
    let hull = convex_hull(&lifted)?;
    if hull.is_degenerate() {
        return Err(Error::NotConvexPatch("samples do not span the disc".into()));
    }
    let upper: Vec<(Vector, f64)> = hull
        .facets()
        .iter()
        .filter(|f| f.normal[d] > 1e-12)
        .map(|f| (f.normal.rows(0, d) / f.normal[d], f.offset / f.normal[d]))
        .collect();
    let envelope = move |x: &Vector| {
        upper
            .iter()
            .map(|(nx, off)| off - nx.dot(x))
            .fold(f64::INFINITY, f64::min)
    };
    for (i, (p, &h)) in patch.points.iter().zip(&patch.heights).enumerate() {
        if envelope(p) - h > 1e-7 * (1.0 + h_max) {
            return Err(Error::NotConvexPatch(format!("sample {i} lies below the concave envelope")));
        }
    }
    Ok(ConvexFn::new(d, move |x| -envelope(x)))
}

/// The smoothed convex function `F` behind [`smooth_boundary_patch`]; the new
/// height is `-F`.
///
/// The inner body is the cube of half-width `radius / 2`, which contains the
/// inner half-disc and stays inside the disc for `d <= 3`.
pub fn patch_smoother(cap: &CapFunction, patch: &BoundaryPatch) -> Result<RelativeSmooth<ConvexFn>> {
    let f = patch_envelope(patch)?;
    let d = f.dim();
    let disc = Ball {
        center: Vector::zeros(d),
        radius: patch.radius,
    };
    let inner = ConvexBody::cube(d, 0.5 * patch.radius)?;
    relative_smooth(f, cap, &disc, &inner, 0)
}

/// Smoothing of a convex boundary patch: the new graph lies between the
/// hyperplane and the old one, is Hessian-convex over the inner half-disc
/// and agrees with the input near the rim.
pub fn smooth_boundary_patch(cap: &CapFunction, patch: &BoundaryPatch) -> Result<SmoothedPatch> {
    let smooth = patch_smoother(cap, patch)?;
    Ok(SmoothedPatch {
        radius: patch.radius,
        points: patch.points.clone(),
        heights: patch.points.iter().map(|p| -smooth.value(p)).collect(),
        alpha: smooth.alpha(),
        beta: smooth.beta(),
    })
}

/// `F(ta + (1-t)b) - tF(a) - (1-t)F(b)`; non-positive for convex `F`.
pub fn secant_gap<F: ConvexFunction + ?Sized>(f: &F, a: &Vector, b: &Vector, t: f64) -> f64 {
    f.value(&(a * t + b * (1.0 - t))) - t * f.value(a) - (1.0 - t) * f.value(b)
}
