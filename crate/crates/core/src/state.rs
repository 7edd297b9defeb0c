use crate::error::{OttoError, Result};
use crate::scalar::Real;

/// Diagonal of the two-level density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalState<T> {
    pub rho00: T,
    pub rho11: T,
}

impl<T: Real> DiagonalState<T> {
    pub fn from_ground(rho00: T) -> Result<Self> {
        if !(rho00 >= T::zero() && rho00 <= T::one()) {
            return Err(OttoError::InvalidParams(format!(
                "ground population must lie in [0, 1], got {rho00}"
            )));
        }
        Ok(Self {
            rho00,
            rho11: T::one() - rho00,
        })
    }
}
