use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Orthonormal `k`-frame in `R^n`: a point of the Stiefel manifold `V_{n,k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame(DMatrix<f64>);

pub const FRAME_TOL: f64 = 1e-12;

impl Frame {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.ncols() == 0 || m.ncols() > m.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "a {}x{} matrix is not a frame",
                m.nrows(),
                m.ncols()
            )));
        }
        let f = Frame(m);
        let err = f.orthonormality_error();
        if err > FRAME_TOL {
            return Err(Error::InvalidInput(format!(
                "columns are not orthonormal (error {err:.3e})"
            )));
        }
        Ok(f)
    }

    /// Q factor of `m` with the signs fixed so that `R` has a positive
    /// diagonal. This is the QR retraction.
    pub fn orthonormalize(m: DMatrix<f64>) -> Self {
        let k = m.ncols();
        let qr = m.qr();
        let r = qr.r();
        let mut q = qr.q();
        for c in 0..k {
            if r[(c, c)] < 0.0 {
                q.column_mut(c).neg_mut();
            }
        }
        Frame(q)
    }

    pub fn random<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::DimensionMismatch(format!("no {k}-frames in R^{n}")));
        }
        let g = DMatrix::from_fn(n, k, |_, _| rng.sample::<f64, _>(StandardNormal));
        Ok(Self::orthonormalize(g))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn k(&self) -> usize {
        self.0.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn orthonormality_error(&self) -> f64 {
        let k = self.k();
        (self.0.transpose() * &self.0 - DMatrix::<f64>::identity(k, k)).amax()
    }

    /// Orthonormal basis of the orthogonal complement (`n × (n-k)`).
    pub fn complement(&self) -> DMatrix<f64> {
        let (n, k) = (self.n(), self.k());
        let mut m = DMatrix::zeros(n, k + n);
        m.columns_mut(0, k).copy_from(&self.0);
        m.columns_mut(k, n).fill_with_identity();
        let q = m.qr().q();
        q.columns(k, n - k).into_owned()
    }

    /// Projection of an ambient direction onto the tangent space at this
    /// frame: `G - F sym(FᵀG)`.
    pub fn project(&self, g: &DMatrix<f64>) -> DMatrix<f64> {
        let ftg = self.0.transpose() * g;
        let sym = (&ftg + ftg.transpose()) * 0.5;
        g - &self.0 * sym
    }

    pub fn retract(&self, step: &DMatrix<f64>) -> Self {
        Self::orthonormalize(&self.0 + step)
    }
}
