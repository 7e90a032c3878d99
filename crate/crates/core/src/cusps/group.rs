use super::expm;
use crate::error::{Error, Result};
use crate::linalg::{
    eigenvalues, is_real, mat_log_e, null_space, simultaneous_upper_triangularize, LieElement,
    Matrix, ProjMatrix, ProjPoint, Vector,
};

/// Generators of a lattice `Gamma` in `GL(n+1, R)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CuspRep {
    generators: Vec<ProjMatrix>,
}

impl CuspRep {
    pub fn new(generators: Vec<ProjMatrix>) -> Result<Self> {
        let first = generators.first().ok_or(Error::EmptySet)?;
        let size = first.as_matrix().nrows();
        if let Some(g) = generators.iter().find(|g| g.as_matrix().nrows() != size) {
            return Err(Error::DimensionMismatch {
                expected: size,
                got: g.as_matrix().nrows(),
            });
        }
        Ok(Self { generators })
    }

    /// Projective dimension `n`.
    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub fn generators(&self) -> &[ProjMatrix] {
        &self.generators
    }

    /// The subgroup generated by `m`-th powers of the generators.
    pub fn powers(&self, m: usize) -> Result<CuspRep> {
        let gens = self
            .generators
            .iter()
            .map(|g| ProjMatrix::new(g.as_matrix().pow(m as u32)))
            .collect::<Result<Vec<_>>>()?;
        CuspRep::new(gens)
    }

    /// Orthogonal `P` with every `P^-1 g P` upper triangular.
    pub fn triangularize(&self) -> Result<(ProjMatrix, Vec<ProjMatrix>)> {
        simultaneous_upper_triangularize(&self.generators)
    }

    pub fn all_e_matrices(&self) -> bool {
        self.generators.iter().all(ProjMatrix::is_e_matrix)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VfgVerdict {
    pub passed: bool,
    /// Smallest power `m` making every eigenvalue of every `g^m` real.
    pub witness: Option<usize>,
}

/// Searches `m = 1..=power_bound` for generator powers with real spectrum.
pub fn vfg_test(rep: &CuspRep, power_bound: usize) -> VfgVerdict {
    let mut powers: Vec<Matrix> = rep.generators.iter().map(|g| g.as_matrix().clone()).collect();
    for m in 1..=power_bound {
        if powers.iter().all(|p| eigenvalues(p).iter().all(is_real)) {
            return VfgVerdict {
                passed: true,
                witness: Some(m),
            };
        }
        for (p, g) in powers.iter_mut().zip(&rep.generators) {
            let next = &*p * g.as_matrix();
            *p = &next / next.norm().max(f64::MIN_POSITIVE);
        }
    }
    VfgVerdict {
        passed: false,
        witness: None,
    }
}

/// A weight `lambda` given by its values on the generators, with bases of
/// the generalized weight space `V(lambda)` and weight space `E(lambda)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight {
    pub characters: Vec<f64>,
    pub basis: Matrix,
    pub eigenspace: Matrix,
}

impl Weight {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightDecomposition {
    pub rep: CuspRep,
    pub weights: Vec<Weight>,
}

impl WeightDecomposition {
    pub fn find(&self, characters: &[f64]) -> Option<usize> {
        self.weights.iter().position(|w| same_character(&w.characters, characters))
    }
}

fn same_character(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len()
        && a
            .iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= 1e-6 * (1.0 + x.abs().max(y.abs())))
}

fn stacked_shifts(rep: &CuspRep, chars: &[f64], power: u32) -> Matrix {
    let size = rep.dim() + 1;
    let k = rep.generators.len();
    let mut out = Matrix::zeros(size * k, size);
    for (i, (g, &l)) in rep.generators.iter().zip(chars).enumerate() {
        let shifted = g.as_matrix() - Matrix::identity(size, size) * l;
        out.view_mut((i * size, 0), (size, size)).copy_from(&shifted.pow(power));
    }
    out
}

/// `V = sum V(lambda)`, weights sorted lexicographically by their values.
///
/// Characters are read from the diagonal after simultaneous
/// triangularization; `V(lambda)` is the joint kernel of
/// `(g - lambda(g))^m` with `m` the multiplicity of `lambda`.
pub fn weight_decomposition(rep: &CuspRep) -> Result<WeightDecomposition> {
    if !vfg_test(rep, 1).passed {
        return Err(Error::NotVfg(1));
    }
    let (_, tri) = rep.triangularize()?;
    let size = rep.dim() + 1;
    let mut groups: Vec<(Vec<f64>, usize)> = Vec::new();
    for k in 0..size {
        let chars: Vec<f64> = tri.iter().map(|g| g.as_matrix()[(k, k)]).collect();
        match groups.iter_mut().find(|(c, _)| same_character(c, &chars)) {
            Some((c, count)) => {
                for (ci, x) in c.iter_mut().zip(&chars) {
                    *ci = (*ci * *count as f64 + x) / (*count + 1) as f64;
                }
                *count += 1;
            }
            None => groups.push((chars, 1)),
        }
    }
    groups.sort_by(|a, b| {
        a.0.iter()
            .zip(&b.0)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let weights = groups
        .into_iter()
        .map(|(characters, mult)| {
            let basis = null_space(&stacked_shifts(rep, &characters, mult as u32), 1e-9);
            if basis.ncols() != mult {
                return Err(Error::NumericalDegeneracy(format!(
                    "generalized weight space has dimension {} but multiplicity {mult}",
                    basis.ncols()
                )));
            }
            let eigenspace = null_space(&stacked_shifts(rep, &characters, 1), 1e-9);
            Ok(Weight {
                characters,
                basis,
                eigenspace,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightDecomposition {
        rep: rep.clone(),
        weights,
    })
}

/// `T(Gamma) = exp <log Gamma>` for a lattice of e-matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct TranslationGroup {
    lie_basis: Vec<LieElement>,
    generator_logs: Vec<LieElement>,
    bracket_residual: f64,
    roundtrip_residual: f64,
}

fn flatten(m: &Matrix) -> Vector {
    Vector::from_column_slice(m.as_slice())
}

fn unflatten(v: &Vector, size: usize) -> Matrix {
    Matrix::from_column_slice(size, size, v.as_slice())
}

/// Orthonormal basis (Frobenius inner product) of the span of `mats`.
fn orthonormal_span(mats: &[Matrix]) -> Matrix {
    let cols: Vec<Vector> = mats.iter().map(flatten).collect();
    let stack = Matrix::from_columns(&cols);
    let svd = stack.svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| smax > 0.0 && svd.singular_values[i] > 1e-9 * smax)
        .collect();
    Matrix::from_columns(&keep.iter().map(|&i| u.column(i).into_owned()).collect::<Vec<_>>())
}

fn project(basis: &Matrix, m: &Matrix) -> Matrix {
    let v = flatten(m);
    unflatten(&(basis * (basis.transpose() * v)), m.nrows())
}

fn bracket_residual(elems: &[Matrix], span: &Matrix) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in elems.iter().enumerate() {
        for b in &elems[i + 1..] {
            let c = a * b - b * a;
            let scale = (a.norm() * b.norm()).max(f64::MIN_POSITIVE);
            worst = worst.max((&c - project(span, &c)).norm() / scale);
        }
    }
    worst
}

impl TranslationGroup {
    /// A group from an explicit Lie basis, checked for bracket closure.
    pub fn from_basis(basis: Vec<LieElement>) -> Result<Self> {
        let mats: Vec<Matrix> = basis.iter().map(|x| x.as_matrix().clone()).collect();
        let span = orthonormal_span(&mats);
        let residual = bracket_residual(&mats, &span);
        if residual > 1e-8 {
            return Err(Error::NotLieClosed(residual));
        }
        Ok(Self {
            lie_basis: basis,
            generator_logs: Vec::new(),
            bracket_residual: residual,
            roundtrip_residual: 0.0,
        })
    }

    pub fn dim(&self) -> usize {
        self.lie_basis.len()
    }

    pub fn lie_basis(&self) -> &[LieElement] {
        &self.lie_basis
    }

    pub fn generator_logs(&self) -> &[LieElement] {
        &self.generator_logs
    }

    pub fn bracket_residual(&self) -> f64 {
        self.bracket_residual
    }

    /// `max |exp(log g) - g| / |g|` over the generators.
    pub fn roundtrip_residual(&self) -> f64 {
        self.roundtrip_residual
    }

    /// `exp(sum u_i X_i)` for the Lie basis `X_i`.
    pub fn element(&self, u: &[f64]) -> Result<ProjMatrix> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: u.len(),
            });
        }
        let size = self.lie_basis[0].dim() + 1;
        let mut m = Matrix::zeros(size, size);
        for (x, ui) in self.lie_basis.iter().zip(u) {
            m += x.as_matrix() * *ui;
        }
        ProjMatrix::new(expm(&m)?)
    }

    /// Parameterization used for orbit grids: the generator logs when they
    /// form a basis, the Lie basis otherwise.
    pub fn orbit_basis(&self) -> Vec<Matrix> {
        if self.generator_logs.len() == self.dim() {
            self.generator_logs.iter().map(|x| x.as_matrix().clone()).collect()
        } else {
            self.lie_basis.iter().map(|x| x.as_matrix().clone()).collect()
        }
    }
}

pub fn translation_group(rep: &CuspRep) -> Result<TranslationGroup> {
    let logs = rep
        .generators
        .iter()
        .enumerate()
        .map(|(index, g)| mat_log_e(g).map_err(|_| Error::NotEGroup { index }))
        .collect::<Result<Vec<_>>>()?;
    let mats: Vec<Matrix> = logs.iter().map(|x| x.as_matrix().clone()).collect();
    let span = orthonormal_span(&mats);
    let size = rep.dim() + 1;
    let lie_basis = span
        .column_iter()
        .map(|c| LieElement::new(unflatten(&c.into_owned(), size)))
        .collect::<Result<Vec<_>>>()?;
    let basis_mats: Vec<Matrix> = lie_basis.iter().map(|x| x.as_matrix().clone()).collect();
    let residual = bracket_residual(&basis_mats, &span);
    if residual > 1e-8 {
        return Err(Error::NotLieClosed(residual));
    }
    let mut roundtrip: f64 = 0.0;
    for (g, l) in rep.generators.iter().zip(&mats) {
        let back = expm(&project(&span, l))?;
        roundtrip = roundtrip.max((back - g.as_matrix()).norm() / g.as_matrix().norm());
    }
    Ok(TranslationGroup {
        lie_basis,
        generator_logs: logs,
        bracket_residual: residual,
        roundtrip_residual: roundtrip,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowKind {
    Parabolic,
    Hyperbolic,
}

impl FlowKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Parabolic => "parabolic",
            Self::Hyperbolic => "hyperbolic",
        }
    }
}

/// `Phi_t = exp(tA)` with `A = v phi^T` of rank one: center `[v]`,
/// stationary hyperplane `ker phi`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialFlow {
    v: Vector,
    phi: Vector,
    kind: FlowKind,
}

impl RadialFlow {
    pub fn from_rank_one(v: Vector, phi: Vector) -> Result<Self> {
        if v.len() != phi.len() {
            return Err(Error::DimensionMismatch {
                expected: v.len(),
                got: phi.len(),
            });
        }
        if v.norm() == 0.0 || phi.norm() == 0.0 {
            return Err(Error::NumericalDegeneracy("zero radial flow".into()));
        }
        let kind = if phi.dot(&v).abs() <= 1e-9 * phi.norm() * v.norm() {
            FlowKind::Parabolic
        } else {
            FlowKind::Hyperbolic
        };
        Ok(Self { v, phi, kind })
    }

    pub fn generator(&self) -> Matrix {
        &self.v * self.phi.transpose()
    }

    pub fn center(&self) -> Result<ProjPoint> {
        ProjPoint::new(self.v.clone())
    }

    /// Normal vector of the stationary hyperplane.
    pub fn stationary_normal(&self) -> &Vector {
        &self.phi
    }

    pub fn kind(&self) -> FlowKind {
        self.kind
    }

    /// `Phi_{-t}`.
    pub fn reversed(&self) -> Self {
        Self {
            v: -&self.v,
            phi: self.phi.clone(),
            kind: self.kind,
        }
    }

    /// `exp(tA) = I + ((e^{ct} - 1)/c) A` with `c = phi . v`.
    pub fn at(&self, t: f64) -> Matrix {
        let size = self.v.len();
        let c = if self.kind == FlowKind::Parabolic { 0.0 } else { self.phi.dot(&self.v) };
        let f = if c == 0.0 { t } else { (c * t).exp_m1() / c };
        Matrix::identity(size, size) + self.generator() * f
    }
}

/// The radial flow centralized by `Gamma` that moves only `V(lambda)`.
///
/// In a flag basis `f_1..f_m` of `V(lambda)` completed by the other
/// generalized weight spaces, the generator is `E_{1m}`.
pub fn radial_flow_for_weight(decomp: &WeightDecomposition, characters: &[f64]) -> Result<RadialFlow> {
    let idx = decomp.find(characters).ok_or(Error::UnknownWeight)?;
    let w = &decomp.weights[idx];
    let m = w.dim();
    let flag = if m == 1 {
        w.basis.clone()
    } else {
        let restricted = decomp
            .rep
            .generators()
            .iter()
            .map(|g| ProjMatrix::new(w.basis.transpose() * g.as_matrix() * &w.basis))
            .collect::<Result<Vec<_>>>()?;
        let (q, _) = simultaneous_upper_triangularize(&restricted)?;
        &w.basis * q.as_matrix()
    };
    let mut cols: Vec<Vector> = flag.column_iter().map(|c| c.into_owned()).collect();
    for (j, other) in decomp.weights.iter().enumerate() {
        if j != idx {
            cols.extend(other.basis.column_iter().map(|c| c.into_owned()));
        }
    }
    let frame = Matrix::from_columns(&cols);
    let inv = frame.try_inverse().ok_or(Error::Singular)?;
    let phi = inv.row(m - 1).transpose();
    RadialFlow::from_rank_one(flag.column(0).into_owned(), phi)
}

#[cfg(test)]
mod tests {
    use super::super::family::CuspFamily;
    use super::*;
    use approx::assert_relative_eq;

    fn rotation_rep(angle: f64) -> CuspRep {
        let mut g = Matrix::identity(4, 4);
        g[(0, 0)] = angle.cos();
        g[(0, 3)] = -angle.sin();
        g[(3, 0)] = angle.sin();
        g[(3, 3)] = angle.cos();
        CuspRep::new(vec![ProjMatrix::new(g).unwrap()]).unwrap()
    }

    #[test]
    fn vfg_examples() {
        for f in [CuspFamily::C0, CuspFamily::C1, CuspFamily::C3 { alpha: 1.0, beta: 2.0 }] {
            assert_eq!(vfg_test(&f.lattice().unwrap(), 1), VfgVerdict { passed: true, witness: Some(1) });
        }
        assert!(!vfg_test(&rotation_rep(1.0), 64).passed);
        let quarter = vfg_test(&rotation_rep(std::f64::consts::FRAC_PI_2), 8);
        assert_eq!(quarter.witness, Some(2));
    }

    #[test]
    fn c3_weights() {
        let rep = CuspFamily::C3 { alpha: 1.0, beta: 2.0 }.lattice().unwrap();
        let d = weight_decomposition(&rep).unwrap();
        let e = 1f64.exp();
        let mut got: Vec<Vec<f64>> = d.weights.iter().map(|w| w.characters.clone()).collect();
        let mut expect = vec![vec![e, 1.0], vec![1.0, e], vec![1.0 / e, (-2f64).exp()], vec![1.0, 1.0]];
        let key = |v: &Vec<f64>| (v[0] * 1e6).round() as i64 * 1_000_000_000 + (v[1] * 1e6).round() as i64;
        got.sort_by_key(key);
        expect.sort_by_key(key);
        for (g, x) in got.iter().zip(&expect) {
            assert_relative_eq!(g[0], x[0], epsilon = 1e-12);
            assert_relative_eq!(g[1], x[1], epsilon = 1e-12);
        }
        assert!(d.weights.iter().all(|w| w.dim() == 1));
    }

    #[test]
    fn c0_and_c1_weights() {
        let d0 = weight_decomposition(&CuspFamily::C0.lattice().unwrap()).unwrap();
        assert_eq!(d0.weights.len(), 1);
        assert_eq!(d0.weights[0].dim(), 4);
        let d1 = weight_decomposition(&CuspFamily::C1.lattice().unwrap()).unwrap();
        let dims: Vec<usize> = d1.weights.iter().map(Weight::dim).collect();
        assert_eq!(dims, vec![3, 1]);
        assert_relative_eq!(d1.weights[1].characters[0], 1f64.exp(), epsilon = 1e-12);
        for d in [&d0, &d1] {
            for w in &d.weights {
                let k = stacked_shifts(&d.rep, &w.characters, 4);
                assert!((k * &w.basis).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn translation_group_of_c0() {
        let t = translation_group(&CuspFamily::C0.lattice().unwrap()).unwrap();
        assert_eq!(t.dim(), 2);
        assert!(t.roundtrip_residual() < 1e-12);
        let (a, b) = CuspFamily::C0.lie_generators().unwrap();
        let span = orthonormal_span(&t.lie_basis().iter().map(|x| x.as_matrix().clone()).collect::<Vec<_>>());
        for x in [a.as_matrix(), b.as_matrix()] {
            assert!((x - project(&span, x)).norm() < 1e-12);
        }
    }

    #[test]
    fn translation_group_rejects_negative_eigenvalue() {
        let mut g = Matrix::identity(4, 4);
        g[(0, 0)] = -2.0;
        let rep = CuspRep::new(vec![ProjMatrix::new(g).unwrap()]).unwrap();
        assert_eq!(translation_group(&rep).unwrap_err(), Error::NotEGroup { index: 0 });
    }

    #[test]
    fn non_closed_span_is_reported() {
        let x = LieElement::elementary(3, 0, 1);
        let y = LieElement::elementary(3, 1, 0);
        assert!(matches!(TranslationGroup::from_basis(vec![x, y]), Err(Error::NotLieClosed(_))));
    }

    #[test]
    fn radial_flows() {
        let d0 = weight_decomposition(&CuspFamily::C0.lattice().unwrap()).unwrap();
        let f0 = radial_flow_for_weight(&d0, &d0.weights[0].characters).unwrap();
        assert_eq!(f0.kind(), FlowKind::Parabolic);
        let a = f0.generator();
        let mut e14 = Matrix::zeros(4, 4);
        e14[(0, 3)] = 1.0;
        assert!((&a - &e14).norm() < 1e-12 || (&a + &e14).norm() < 1e-12, "{a}");
        let rep3 = CuspFamily::C3 { alpha: 1.0, beta: 1.5 }.lattice().unwrap();
        let d3 = weight_decomposition(&rep3).unwrap();
        for w in &d3.weights {
            let f = radial_flow_for_weight(&d3, &w.characters).unwrap();
            assert_eq!(f.kind(), FlowKind::Hyperbolic);
            let phi = f.at(0.7);
            for g in rep3.generators() {
                let g = g.as_matrix();
                assert!((g * &phi - &phi * g).norm() < 1e-12);
            }
            assert_relative_eq!(phi.trace(), 3.0 + 0.7f64.exp(), epsilon = 1e-12);
        }
        assert_eq!(radial_flow_for_weight(&d3, &[5.0, 5.0]).unwrap_err(), Error::UnknownWeight);
    }
}
