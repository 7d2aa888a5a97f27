use std::collections::BTreeMap;

use serde::Deserialize;

use crate::error::{CoreError, Result};

/// Externally supplied values for quantities that are not computed
/// natively. Keys have the form `<role>@<place>` with role one of `C`,
/// `Prym1`, `Prym2`, `D` and place a prime or `inf`.
#[derive(Clone, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    #[serde(default)]
    pub tamagawa: BTreeMap<String, u64>,
    #[serde(default)]
    pub mu: BTreeMap<String, i32>,
    #[serde(default)]
    pub lambda2: Option<i32>,
}

impl Overrides {
    pub fn from_json(text: &str) -> Result<Self> {
        let ov: Overrides = serde_json::from_str(text).map_err(|e| CoreError::Invalid(format!("override file: {e}")))?;
        for (k, v) in &ov.tamagawa {
            if *v == 0 {
                return Err(CoreError::Invalid(format!("Tamagawa override {k} must be positive")));
            }
        }
        for v in ov.mu.values().chain(ov.lambda2.iter()) {
            if *v != 1 && *v != -1 {
                return Err(CoreError::Invalid(format!("sign override must be 1 or -1, got {v}")));
            }
        }
        Ok(ov)
    }
}

pub fn key(role: &str, place: &str) -> String {
    format!("{role}@{place}")
}
