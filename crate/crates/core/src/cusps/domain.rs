use super::certificate::{chart_coords, orbit_certificate, orbit_map, ConvexityCertificate, Verdict};
use super::expm;
use super::group::{radial_flow_for_weight, translation_group, weight_decomposition, CuspRep, RadialFlow, TranslationGroup};
use super::optimize::{illinois, nelder_mead};
use crate::body::{convex_hull_indexed, hilbert_distance, ConvexBody, ConvexDomain};
use crate::error::{Error, Result};
use crate::linalg::{act_projective, Matrix, ProjPoint, Vector};

/// Uniform grid `[lo, hi]^k` of orbit parameters with `points` per axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for OrbitGrid {
    fn default() -> Self {
        Self {
            lo: -2.0,
            hi: 2.0,
            points: 21,
        }
    }
}

impl OrbitGrid {
    fn axis(&self) -> Vec<f64> {
        if self.points <= 1 {
            return vec![0.5 * (self.lo + self.hi)];
        }
        (0..self.points)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.points - 1) as f64)
            .collect()
    }

    /// All parameter tuples, last coordinate fastest.
    pub fn parameters(&self, dim: usize) -> Vec<Vec<f64>> {
        let axis = self.axis();
        let mut out = vec![Vec::new()];
        for _ in 0..dim {
            out = out
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |&a| {
                        let mut q = p.clone();
                        q.push(a);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

/// Coordinates `(tau, u)` on the domain: the point
/// `chart(exp(tau A + sum u_i L_i) x)`. Leaves are `tau = const`, the
/// boundary orbit is `tau = 0` and the interior is `tau < 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Foliation {
    pub logs: Vec<Matrix>,
    pub flow: Matrix,
    pub base: Vector,
    pub chart: usize,
}

const NEWTON_ITERS: usize = 60;
const HOMOTOPY_STEPS: usize = 16;

impl Foliation {
    pub fn dim(&self) -> usize {
        self.base.len() - 1
    }

    fn homogeneous(&self, p: &[f64]) -> Result<Vector> {
        let mut m = &self.flow * p[0];
        for (l, ui) in self.logs.iter().zip(&p[1..]) {
            m += l * *ui;
        }
        Ok(expm(&m)? * &self.base)
    }

    /// Chart coordinates of the point with foliation coordinates `p = (tau, u)`.
    pub fn point(&self, p: &[f64]) -> Option<Vector> {
        self.homogeneous(p).ok().and_then(|w| chart_coords(&w, self.chart))
    }

    fn residual_and_jacobian(&self, p: &[f64], z: &Vector) -> Option<(Vector, Matrix)> {
        let w = self.homogeneous(p).ok()?;
        let k = self.chart;
        let c = chart_coords(&w, k)?;
        let n = self.dim();
        let mut jac = Matrix::zeros(n, n);
        let dirs = std::iter::once(&self.flow).chain(&self.logs);
        for (col, gen) in dirs.enumerate() {
            let d = gen * &w;
            let mut j = 0;
            for i in 0..=n {
                if i != k {
                    jac[(j, col)] = (d[i] * w[k] - w[i] * d[k]) / (w[k] * w[k]);
                    j += 1;
                }
            }
        }
        Some((c - z, jac))
    }

    fn newton(&self, z: &Vector, start: &[f64]) -> Option<Vec<f64>> {
        let tol = 1e-12 * (1.0 + z.norm());
        let mut p = start.to_vec();
        let (mut r, mut jac) = self.residual_and_jacobian(&p, z)?;
        for _ in 0..NEWTON_ITERS {
            let rn = r.norm();
            if rn <= tol {
                return Some(p);
            }
            let step = jac.clone().lu().solve(&-&r)?;
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..30 {
                let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(a, b)| a + lambda * b).collect();
                if let Some((rt, jt)) = self.residual_and_jacobian(&trial, z) {
                    if rt.norm() < rn {
                        p = trial;
                        r = rt;
                        jac = jt;
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if !accepted {
                return None;
            }
        }
        (r.norm() <= tol).then_some(p)
    }

    /// Foliation coordinates of the chart point `z`, or `None` when `z` is
    /// not reached by the flowout of the orbit.
    pub fn solve(&self, z: &Vector) -> Option<Vec<f64>> {
        let n = self.dim();
        if z.len() != n || z.iter().any(|c| !c.is_finite()) {
            return None;
        }
        let zero = vec![0.0; n];
        if let Some(p) = self.newton(z, &zero) {
            return Some(p);
        }
        let z0 = chart_coords(&self.base, self.chart)?;
        let mut p = zero;
        for s in 1..=HOMOTOPY_STEPS {
            let zs = &z0 + (z - &z0) * (s as f64 / HOMOTOPY_STEPS as f64);
            p = self.newton(&zs, &p)?;
        }
        Some(p)
    }

    /// `tau(z)`; zero on the boundary orbit, negative inside.
    pub fn depth(&self, z: &Vector) -> Option<f64> {
        self.solve(z).map(|p| p[0])
    }

    /// The radial flow `Phi_t` in chart coordinates.
    pub fn flow_point(&self, z: &Vector, t: f64) -> Option<Vector> {
        let mut w = Vector::zeros(z.len() + 1);
        let mut j = 0;
        for i in 0..w.len() {
            if i == self.chart {
                w[i] = 1.0;
            } else {
                w[i] = z[j];
                j += 1;
            }
        }
        chart_coords(&(expm(&(&self.flow * t)).ok()? * w), self.chart)
    }
}

/// A domain foliated by level sets of a depth function that increases at
/// unit speed along a flow; the boundary is the zero level.
pub trait FoliatedDomain {
    /// Depth of `y`: negative inside, zero on the boundary, `None` where the
    /// flowlines through the boundary never reach.
    fn level(&self, y: &Vector) -> Option<f64>;
    fn flow(&self, y: &Vector, t: f64) -> Option<Vector>;
}

/// Flow time `T(y)` with `Phi_T(y)` on the boundary.
pub fn flow_time<D: FoliatedDomain + ?Sized>(dom: &D, y: &Vector) -> Result<f64> {
    let l0 = dom.level(y).ok_or(Error::FlowlineMisses)?;
    if l0 > 1e-9 {
        return Err(Error::PointNotInterior);
    }
    if l0.abs() <= 1e-15 {
        return Ok(0.0);
    }
    let g = |t: f64| dom.flow(y, t).and_then(|p| dom.level(&p)).unwrap_or(f64::NAN);
    let mut hi = (-l0).max(1e-6);
    let mut g_hi = g(hi);
    let mut tries = 0;
    while !(g_hi >= 0.0) {
        if !g_hi.is_finite() || tries > 60 {
            return Err(Error::FlowlineMisses);
        }
        hi *= 2.0;
        g_hi = g(hi);
        tries += 1;
    }
    illinois(g, 0.0, hi, 1e-12 * (1.0 + hi)).ok_or(Error::FlowlineMisses)
}

/// The convex domain bounded by the orbit `T x`, sampled on an orbit grid.
#[derive(Clone, Debug)]
pub struct CuspDomain {
    rep: CuspRep,
    group: TranslationGroup,
    flow: RadialFlow,
    foliation: Foliation,
    certificate: ConvexityCertificate,
    boundary: Vec<Vector>,
    hull: ConvexBody,
    invariance_residual: f64,
}

impl CuspDomain {
    pub fn rep(&self) -> &CuspRep {
        &self.rep
    }

    pub fn translation_group(&self) -> &TranslationGroup {
        &self.group
    }

    /// Radial flow oriented so that positive time moves towards the boundary.
    pub fn flow(&self) -> &RadialFlow {
        &self.flow
    }

    pub fn foliation(&self) -> &Foliation {
        &self.foliation
    }

    pub fn certificate(&self) -> &ConvexityCertificate {
        &self.certificate
    }

    pub fn base_point(&self) -> &ProjPoint {
        &self.certificate.base_point
    }

    pub fn chart(&self) -> usize {
        self.foliation.chart
    }

    /// Boundary samples in chart coordinates.
    pub fn boundary(&self) -> &[Vector] {
        &self.boundary
    }

    pub fn boundary_points(&self) -> Vec<ProjPoint> {
        self.boundary
            .iter()
            .filter_map(|z| self.lift(z).and_then(|w| ProjPoint::new(w).ok()))
            .collect()
    }

    pub fn hull(&self) -> &ConvexBody {
        &self.hull
    }

    /// Largest chart distance between `g . sample(u)` and `sample(u + c_g)`.
    pub fn invariance_residual(&self) -> f64 {
        self.invariance_residual
    }

    fn lift(&self, z: &Vector) -> Option<Vector> {
        let k = self.foliation.chart;
        let mut w = Vector::zeros(z.len() + 1);
        let mut j = 0;
        for i in 0..w.len() {
            w[i] = if i == k {
                1.0
            } else {
                j += 1;
                z[j - 1]
            };
        }
        Some(w)
    }
}

impl ConvexDomain for CuspDomain {
    fn dim(&self) -> usize {
        self.foliation.dim()
    }

    fn is_interior(&self, x: &Vector) -> bool {
        self.foliation.depth(x).is_some_and(|t| t < -1e-12)
    }

    fn exit_distance(&self, x: &Vector, u: &Vector) -> f64 {
        let level = |t: f64| self.foliation.depth(&(x + u * t));
        match level(0.0) {
            Some(t) if t < 0.0 => {}
            _ => return 0.0,
        }
        let mut lo = 0.0;
        let mut hi = 1e-2 * (1.0 + x.norm());
        loop {
            match level(hi) {
                Some(t) if t < 0.0 => {
                    lo = hi;
                    hi *= 2.0;
                    if hi > 1e12 {
                        return f64::INFINITY;
                    }
                }
                _ => break,
            }
        }
        let tol = 1e-14 * (1.0 + hi);
        while hi - lo > tol {
            if let (Some(a), Some(b)) = (level(lo), level(hi)) {
                if a < 0.0 && b >= 0.0 {
                    let g = |t: f64| level(t).unwrap_or(f64::NAN);
                    if let Some(r) = illinois(g, lo, hi, tol) {
                        return r;
                    }
                }
            }
            let mid = 0.5 * (lo + hi);
            match level(mid) {
                Some(t) if t < 0.0 => lo = mid,
                _ => hi = mid,
            }
        }
        0.5 * (lo + hi)
    }
}

impl FoliatedDomain for CuspDomain {
    fn level(&self, y: &Vector) -> Option<f64> {
        self.foliation.depth(y)
    }

    fn flow(&self, y: &Vector, t: f64) -> Option<Vector> {
        self.foliation.flow_point(y, t)
    }
}

/// Least-squares coordinates of `m` in the span of `basis`.
fn coordinates_in(basis: &[Matrix], m: &Matrix) -> Vec<f64> {
    let cols: Vec<Vector> = basis.iter().map(|b| Vector::from_column_slice(b.as_slice())).collect();
    let a = Matrix::from_columns(&cols);
    let rhs = Vector::from_column_slice(m.as_slice());
    let sol = a.clone().svd(true, true).solve(&rhs, 1e-12).unwrap_or_else(|_| Vector::zeros(basis.len()));
    sol.iter().copied().collect()
}

/// Builds the domain bounded by `T x` for the translation group of `rep`.
pub fn build_cusp_domain(rep: &CuspRep, x: &ProjPoint, grid: &OrbitGrid) -> Result<CuspDomain> {
    let group = translation_group(rep)?;
    let certificate = orbit_certificate(&group, x)?;
    if certificate.verdict != Verdict::StrictlyConvex {
        return Err(Error::NotStrictlyConvex(certificate.verdict.as_str().into()));
    }
    let decomp = weight_decomposition(rep)?;
    let widest = decomp
        .weights
        .iter()
        .enumerate()
        .fold(0, |best, (i, w)| if w.dim() > decomp.weights[best].dim() { i } else { best });
    let mut flow = radial_flow_for_weight(&decomp, &decomp.weights[widest].characters)?;

    let n = x.dim();
    let k = certificate.chart;
    let xv = x.coords().clone();
    let ax = flow.generator() * &xv;
    let d = Vector::from_iterator(
        n,
        (0..=n).filter(|&i| i != k).map(|i| (ax[i] * xv[k] - xv[i] * ax[k]) / (xv[k] * xv[k])),
    );
    let push = certificate.normal.dot(&d);
    if push.abs() <= 1e-9 * d.norm().max(1.0) {
        return Err(Error::NumericalDegeneracy("radial flow is tangent to the orbit".into()));
    }
    if push > 0.0 {
        flow = flow.reversed();
    }
    let logs = group.orbit_basis();
    let foliation = Foliation {
        logs: logs.clone(),
        flow: flow.generator(),
        base: xv.clone(),
        chart: k,
    };

    let params = grid.parameters(n - 1);
    let boundary = params
        .iter()
        .map(|u| orbit_map(&logs, &xv, k, u))
        .collect::<Result<Vec<_>>>()?;
    let (hull, extreme) = convex_hull_indexed(&boundary)?;
    if hull.is_degenerate() {
        return Err(Error::DegenerateSpan {
            rank: hull.affine_dim(),
            dim: n,
        });
    }
    if extreme.len() != boundary.len() {
        return Err(Error::NotStrictlyConvex(format!(
            "{} of {} orbit samples are not extreme",
            boundary.len() - extreme.len(),
            boundary.len()
        )));
    }

    let mut invariance_residual: f64 = 0.0;
    for g in rep.generators() {
        let log = crate::linalg::mat_log_e(g)?;
        let c = coordinates_in(&logs, log.as_matrix());
        for u in &params {
            let image = act_projective(g, &ProjPoint::new(expm(&combine(&logs, u))? * &xv)?)?;
            let image = chart_coords(image.coords(), k)
                .ok_or_else(|| Error::NumericalDegeneracy("generator image leaves the chart".into()))?;
            let shifted: Vec<f64> = u.iter().zip(&c).map(|(a, b)| a + b).collect();
            let target = orbit_map(&logs, &xv, k, &shifted)?;
            invariance_residual = invariance_residual.max((image - &target).norm() / (1.0 + target.norm()));
        }
    }
    if invariance_residual > 1e-8 {
        return Err(Error::NumericalDegeneracy(format!(
            "generator images leave the orbit (residual {invariance_residual:.3e})"
        )));
    }

    Ok(CuspDomain {
        rep: rep.clone(),
        group,
        flow,
        foliation,
        certificate,
        boundary,
        hull,
        invariance_residual,
    })
}

fn combine(basis: &[Matrix], u: &[f64]) -> Matrix {
    let size = basis[0].nrows();
    let mut m = Matrix::zeros(size, size);
    for (b, ui) in basis.iter().zip(u) {
        m += b * *ui;
    }
    m
}

/// `F(y) = d(y, T y0)` for the reference leaf at flow time `depth`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exhaustion {
    pub depth: f64,
}

/// Hilbert distance from `y` to the reference leaf when the leaf separates
/// `y` from the boundary, zero otherwise.
pub fn exhaustion_function(dom: &CuspDomain, leaf: &Exhaustion, y: &Vector) -> Result<f64> {
    let p = dom.foliation.solve(y).ok_or(Error::FlowlineMisses)?;
    if -p[0] <= leaf.depth {
        return Ok(0.0);
    }
    let objective = |u: &[f64]| {
        let mut q = vec![-leaf.depth];
        q.extend_from_slice(u);
        dom.foliation
            .point(&q)
            .and_then(|z| hilbert_distance(dom, y, &z).ok())
            .unwrap_or(f64::INFINITY)
    };
    let (_, best) = nelder_mead(objective, &p[1..], 0.1, 1e-13, 2000);
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::FlowlineMisses)
    }
}
