use super::group::CuspRep;
use crate::error::{Error, Result};
use crate::linalg::{LieElement, Matrix, ProjMatrix};

/// The cusp Lie groups `C_0`, `C_1`, `C_2(alpha)`, `C_3(alpha, beta)` of
/// orientable three-dimensional generalized cusps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CuspFamily {
    C0,
    C1,
    C2 { alpha: f64 },
    C3 { alpha: f64, beta: f64 },
}

impl CuspFamily {
    /// Parses `C0`..`C3`; missing parameters are `BadParams`.
    pub fn from_name(name: &str, alpha: Option<f64>, beta: Option<f64>) -> Result<Self> {
        let need = |v: Option<f64>, what: &str| {
            v.ok_or_else(|| Error::BadParams(format!("{name} needs {what}")))
        };
        let fam = match name.to_ascii_uppercase().as_str() {
            "C0" => Self::C0,
            "C1" => Self::C1,
            "C2" => Self::C2 { alpha: need(alpha, "alpha")? },
            "C3" => Self::C3 {
                alpha: need(alpha, "alpha")?,
                beta: need(beta, "beta")?,
            },
            other => return Err(Error::BadParams(format!("unknown family {other}"))),
        };
        fam.validate()?;
        Ok(fam)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::C0 => "C0",
            Self::C1 => "C1",
            Self::C2 { .. } => "C2",
            Self::C3 { .. } => "C3",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::C0 | Self::C1 => Ok(()),
            Self::C2 { alpha } if alpha > 0.0 && alpha.is_finite() => Ok(()),
            Self::C2 { alpha } => Err(Error::BadParams(format!("C2 needs alpha > 0, got {alpha}"))),
            Self::C3 { alpha, beta } if alpha > 0.0 && beta >= alpha && beta.is_finite() => Ok(()),
            Self::C3 { alpha, beta } => Err(Error::BadParams(format!(
                "C3 needs beta >= alpha > 0, got alpha={alpha}, beta={beta}"
            ))),
        }
    }

    /// `(X, Y)` with `C(s, t) = exp(sX + tY)`.
    pub fn lie_generators(&self) -> Result<(LieElement, LieElement)> {
        self.validate()?;
        let mut x = Matrix::zeros(4, 4);
        let mut y = Matrix::zeros(4, 4);
        match *self {
            Self::C0 => {
                x[(0, 1)] = 1.0;
                x[(1, 3)] = 1.0;
                y[(0, 2)] = 1.0;
                y[(2, 3)] = 1.0;
            }
            Self::C1 => {
                x[(0, 0)] = 1.0;
                x[(1, 3)] = -1.0;
                y[(1, 2)] = 1.0;
                y[(2, 3)] = 1.0;
            }
            Self::C2 { alpha } => {
                x[(0, 0)] = 1.0;
                x[(2, 3)] = -alpha;
                y[(1, 1)] = 1.0;
                y[(2, 3)] = -1.0;
            }
            Self::C3 { alpha, beta } => {
                x[(0, 0)] = 1.0;
                x[(2, 2)] = -alpha;
                y[(1, 1)] = 1.0;
                y[(2, 2)] = -beta;
            }
        }
        Ok((LieElement::new(x)?, LieElement::new(y)?))
    }

    /// The lattice generated by the group elements at `(1,0)` and `(0,1)`.
    pub fn lattice(&self) -> Result<CuspRep> {
        CuspRep::new(vec![cusp_generator(self, 1.0, 0.0)?, cusp_generator(self, 0.0, 1.0)?])
    }
}

/// The group element of the family at parameters `(s, t)`, written entrywise.
pub fn cusp_generator(fam: &CuspFamily, s: f64, t: f64) -> Result<ProjMatrix> {
    fam.validate()?;
    if !s.is_finite() || !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let rows: [[f64; 4]; 4] = match *fam {
        CuspFamily::C0 => [
            [1.0, s, t, 0.5 * (s * s + t * t)],
            [0.0, 1.0, 0.0, s],
            [0.0, 0.0, 1.0, t],
            [0.0, 0.0, 0.0, 1.0],
        ],
        CuspFamily::C1 => [
            [s.exp(), 0.0, 0.0, 0.0],
            [0.0, 1.0, t, 0.5 * t * t - s],
            [0.0, 0.0, 1.0, t],
            [0.0, 0.0, 0.0, 1.0],
        ],
        CuspFamily::C2 { alpha } => [
            [s.exp(), 0.0, 0.0, 0.0],
            [0.0, t.exp(), 0.0, 0.0],
            [0.0, 0.0, 1.0, -t - alpha * s],
            [0.0, 0.0, 0.0, 1.0],
        ],
        CuspFamily::C3 { alpha, beta } => [
            [s.exp(), 0.0, 0.0, 0.0],
            [0.0, t.exp(), 0.0, 0.0],
            [0.0, 0.0, (-alpha * s - beta * t).exp(), 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
    };
    ProjMatrix::new(Matrix::from_fn(4, 4, |i, j| rows[i][j]))
}
