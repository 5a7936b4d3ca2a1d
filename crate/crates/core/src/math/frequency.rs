//! Frequency sweep description.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencySpec {
    /// Centre angular frequency `ν` (rad/s).
    pub center_nu: f64,
    /// Wave speed `c`.
    pub c: f64,
    /// Angular frequencies of the sweep.
    pub omegas: Vec<f64>,
}

impl FrequencySpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0) {
            return Err(Error::InvalidArgument(format!("wave speed c = {} must be positive", self.c)));
        }
        if !(self.center_nu > 0.0) {
            return Err(Error::InvalidArgument("centre frequency must be positive".into()));
        }
        if self.omegas.is_empty() {
            return Err(Error::EmptyInput("frequency sweep"));
        }
        if let Some(w) = self.omegas.iter().find(|w| !(**w > 0.0)) {
            return Err(Error::InvalidArgument(format!("frequency {w} must be positive")));
        }
        Ok(())
    }

    pub fn wavenumber(&self, omega: f64) -> f64 {
        omega / self.c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive_entries() {
        let mut f = FrequencySpec {
            center_nu: 1.0,
            c: 1.0,
            omegas: vec![1.0, 0.0],
        };
        assert!(f.validate().is_err());
        f.omegas = vec![0.9, 1.1];
        assert!(f.validate().is_ok());
        f.c = -1.0;
        assert!(f.validate().is_err());
    }
}
