use crate::error::{Error, Result};

/// Relative tolerances shared by every numerical routine.
///
/// The defaults leave double-precision headroom for dense problems up to
/// `n = 64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermitian validation: `|M - M*|_F <= herm * max(1, |M|_F)`.
    pub herm: f64,
    /// Eigenvalue floor, relative to the spectral norm.
    pub psd: f64,
    /// Generic equality tolerance.
    pub eq: f64,
    /// Jacobi stopping threshold on the off-diagonal mass.
    pub conv: f64,
    /// Sweep cap for the Jacobi solver.
    pub max_sweeps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: 1e-10,
            psd: 1e-9,
            eq: 1e-9,
            conv: 1e-13,
            max_sweeps: 64,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.herm) {
            return Err(Error::InvalidTolerance("herm must be positive"));
        }
        if !positive(self.psd) {
            return Err(Error::InvalidTolerance("psd must be positive"));
        }
        if !positive(self.eq) {
            return Err(Error::InvalidTolerance("eq must be positive"));
        }
        if !positive(self.conv) {
            return Err(Error::InvalidTolerance("conv must be positive"));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidTolerance("max_sweeps must be at least 1"));
        }
        Ok(())
    }

    pub fn with_psd(mut self, psd: f64) -> Self {
        self.psd = psd;
        self
    }

    pub fn with_eq(mut self, eq: f64) -> Self {
        self.eq = eq;
        self
    }
}
