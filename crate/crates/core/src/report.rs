use serde::Serialize;
use serde_json::Value;

/// One place's factor `lambda_v` and the terms it was assembled from.
#[derive(Clone, Debug, Serialize)]
pub struct LocalTermReport {
    pub place: String,
    pub lambda: i32,
    pub mu_c: i32,
    pub mu_d: i32,
    pub delta: i32,
    /// Exponent `e` in the factor `(-1)^e` coming from the kernel/cokernel ratio.
    pub exponent: i64,
    pub methods: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub overrides: Vec<String>,
    pub details: Value,
}

/// A sign together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sign {
    pub value: i32,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub override_key: Option<String>,
}

/// Override keys consumed by a set of signs.
pub fn override_keys<'a>(signs: impl IntoIterator<Item = &'a Sign>) -> Vec<String> {
    signs
        .into_iter()
        .filter_map(|s| s.override_key.as_deref())
        .flat_map(|k| k.split(',').map(str::to_string))
        .collect()
}

impl Sign {
    pub fn native(value: i32, method: &str) -> Self {
        Sign { value, method: method.into(), override_key: None }
    }

    pub fn overridden(value: i32, key: &str) -> Self {
        Sign { value, method: "override".into(), override_key: Some(key.into()) }
    }
}
