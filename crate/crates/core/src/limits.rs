use crate::error::{Error, Result};

pub const DEFAULT_ENUM_CAP: u64 = 1 << 24;
pub const ENUM_CAP_ENV: &str = "COVERMETRIC_ENUM_CAP";

/// Upper bound on the number of items an exhaustive enumeration may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumCap(pub u64);

impl EnumCap {
    /// Reads `COVERMETRIC_ENUM_CAP`, falling back to 2^24.
    pub fn from_env() -> EnumCap {
        std::env::var(ENUM_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(EnumCap)
            .unwrap_or(EnumCap(DEFAULT_ENUM_CAP))
    }

    /// `base^exp` if it fits under the cap.
    pub fn check(&self, base: usize, exp: usize) -> Result<u64> {
        let too_large = || Error::TooLargeToEnumerate {
            required: format!("{base}^{exp}"),
            cap: self.0,
        };
        let count = (base as u64)
            .checked_pow(exp as u32)
            .ok_or_else(too_large)?;
        if count > self.0 {
            return Err(too_large());
        }
        Ok(count)
    }
}

impl Default for EnumCap {
    fn default() -> Self {
        EnumCap::from_env()
    }
}
