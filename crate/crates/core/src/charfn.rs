//! Characteristic function `chi(x) = int_{C*} exp(-psi(x)) d psi` of a
//! polyhedral cone and the convexity function `c = log(chi) / (n+1)`.
//!
//! The dual cone is split into simplicial cones; on each one the integral is
//! `|det Phi| / prod phi_i(x)`, so values and derivatives are exact sums.

use rand::RngExt;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::body::finsler_norm;
use crate::cone::PolyCone;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::sampling::seeded_rng;

#[derive(Clone, Debug, PartialEq)]
pub struct DualSimplex {
    /// Indices into [`DualTriangulation::dual_generators`].
    pub indices: Vec<usize>,
    pub abs_det: f64,
}

#[derive(Clone, Debug)]
pub struct DualTriangulation {
    cone: PolyCone,
    simplices: Vec<DualSimplex>,
}

#[derive(Clone, Debug)]
pub struct CharEval {
    pub x: Vector,
    pub chi: f64,
    pub log_chi: f64,
    pub c: f64,
    pub grad_c: Vector,
    pub hess_c: Matrix,
}

/// Orthonormal basis (columns) of the span of `cols`, of dimension `k`.
fn span_basis(cols: &[Vector], k: usize) -> Matrix {
    let m = Matrix::from_columns(cols);
    let svd = m.svd(true, false);
    let u = svd.u.expect("requested U");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    Matrix::from_columns(&order[..k].iter().map(|&i| u.column(i).into_owned()).collect::<Vec<_>>())
}

/// Pulling triangulation of the `k`-dimensional cone spanned by `gens[ids]`.
fn fan(gens: &[Vector], ids: &[usize], k: usize) -> Result<Vec<Vec<usize>>> {
    if ids.len() == k {
        return Ok(vec![ids.to_vec()]);
    }
    let cols: Vec<Vector> = ids.iter().map(|&i| gens[i].clone()).collect();
    let basis = span_basis(&cols, k);
    let coords: Vec<Vector> = cols.iter().map(|g| basis.transpose() * g).collect();
    let sub = PolyCone::from_generators(&coords)?;
    let apex = ids[0];
    let mut out = Vec::new();
    for psi in sub.normals() {
        let members: Vec<usize> = ids
            .iter()
            .zip(&coords)
            .filter(|(_, c)| psi.dot(c).abs() <= 1e-9 * c.norm())
            .map(|(&i, _)| i)
            .collect();
        if members.contains(&apex) {
            continue;
        }
        for tail in fan(gens, &members, k - 1)? {
            let mut simplex = vec![apex];
            simplex.extend(tail);
            out.push(simplex);
        }
    }
    Ok(out)
}

/// Fan triangulation of the dual cone from its first generator.
pub fn triangulate_dual(cone: &PolyCone) -> Result<DualTriangulation> {
    let gens = cone.normals();
    let n = cone.ambient_dim();
    let ids: Vec<usize> = (0..gens.len()).collect();
    let simplices = fan(gens, &ids, n)?
        .into_iter()
        .map(|indices| {
            let m = Matrix::from_columns(&indices.iter().map(|&i| gens[i].clone()).collect::<Vec<_>>());
            let abs_det = m.determinant().abs();
            if abs_det <= 1e-12 {
                return Err(Error::NumericalDegeneracy("flat simplex in dual triangulation".into()));
            }
            Ok(DualSimplex { indices, abs_det })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DualTriangulation {
        cone: cone.clone(),
        simplices,
    })
}

impl DualTriangulation {
    pub fn cone(&self) -> &PolyCone {
        &self.cone
    }

    pub fn dual_generators(&self) -> &[Vector] {
        self.cone.normals()
    }

    pub fn simplices(&self) -> &[DualSimplex] {
        &self.simplices
    }

    pub fn ambient_dim(&self) -> usize {
        self.cone.ambient_dim()
    }
}

/// `chi`, `c` and the analytic gradient and Hessian of `c` at `x`.
pub fn chi_eval(t: &DualTriangulation, x: &Vector) -> Result<CharEval> {
    let n = t.ambient_dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    let phis = t.dual_generators();
    let vals: Vec<f64> = phis.iter().map(|p| p.dot(x)).collect();
    let min_rel = phis
        .iter()
        .zip(&vals)
        .map(|(p, v)| v / (p.norm() * x.norm()))
        .fold(f64::INFINITY, f64::min);
    if !(min_rel > 1e-12) {
        return Err(Error::NotInterior(min_rel));
    }
    let logs: Vec<f64> = t
        .simplices
        .iter()
        .map(|s| s.abs_det.ln() - s.indices.iter().map(|&i| vals[i].ln()).sum::<f64>())
        .collect();
    let lmax = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logs.iter().map(|l| (l - lmax).exp()).collect();
    let total: f64 = w.iter().sum();
    let log_chi = lmax + total.ln();

    let a: Vec<Vector> = phis.iter().zip(&vals).map(|(p, v)| p / *v).collect();
    let sums: Vec<Vector> = t
        .simplices
        .iter()
        .map(|s| s.indices.iter().map(|&i| &a[i]).sum())
        .collect();
    let mut g = Vector::zeros(n);
    for (sum, wi) in sums.iter().zip(&w) {
        g -= sum * (wi / total);
    }
    // Centered second moment; `E[ss^T] - gg^T` cancels badly near the boundary.
    let mut h = Matrix::zeros(n, n);
    for ((s, sum), wi) in t.simplices.iter().zip(&sums).zip(&w) {
        let wh = wi / total;
        let dev = sum + &g;
        h += &dev * dev.transpose() * wh;
        for &i in &s.indices {
            h += &a[i] * a[i].transpose() * wh;
        }
    }
    let nf = n as f64;
    let grad_c = &g / nf;
    let mut hess_c = h / nf;
    hess_c = (&hess_c + hess_c.transpose()) * 0.5;
    Ok(CharEval {
        x: x.clone(),
        chi: log_chi.exp(),
        log_chi,
        c: log_chi / nf,
        grad_c,
        hess_c,
    })
}

/// The point `x chi(x)^{1/(n+1)}` of the level set `chi = 1`.
pub fn characteristic_section(t: &DualTriangulation, x: &Vector) -> Result<Vector> {
    let e = chi_eval(t, x)?;
    Ok(x * e.c.exp())
}

/// `D^2 c_x(v, v) / F(x, v)^2` with `F` the Hilbert–Finsler norm of the cone.
pub fn kappa_ratio(t: &DualTriangulation, x: &Vector, v: &Vector) -> Result<f64> {
    let e = chi_eval(t, x)?;
    let f = finsler_norm(t.cone(), x, v).map_err(|_| Error::NotInterior(t.cone().min_functional(x)))?;
    Ok(v.dot(&(&e.hess_c * v)) / (f * f))
}

/// Sampled lower estimate of the uniform convexity constant.
///
/// Points are characteristic sections of Dirichlet combinations of the
/// generators; directions are Gaussian combinations of the generators.
pub fn estimate_kappa(t: &DualTriangulation, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = seeded_rng(seed);
    let gens = t.cone().generators();
    let n = t.ambient_dim();
    let mut best = f64::INFINITY;
    for _ in 0..samples.max(1) {
        let mut x = Vector::zeros(n);
        for g in gens {
            let w: f64 = Exp1.sample(&mut rng);
            x += g * (w + 1e-12);
        }
        let mut v = Vector::zeros(n);
        for g in gens {
            let z: f64 = StandardNormal.sample(&mut rng);
            v += g * z;
        }
        if v.norm() == 0.0 {
            v = gens[rng.random_range(0..gens.len())].clone();
        }
        let x = characteristic_section(t, &x)?;
        best = best.min(kappa_ratio(t, &x, &v)?);
    }
    Ok(best)
}

/// `|c(e^{-t} x) - c(x) - t|`.
pub fn flow_equivariance_check(t: &DualTriangulation, x: &Vector, time: f64) -> Result<f64> {
    let c0 = chi_eval(t, x)?.c;
    let c1 = chi_eval(t, &(x * (-time).exp()))?.c;
    Ok((c1 - c0 - time).abs())
}
