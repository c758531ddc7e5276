use crate::error::{Error, Result};

/// Resource caps shared by every search in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caps {
    /// Maximum size of an explicitly enumerated permutation group.
    pub closure: usize,
    /// Largest quandle for which subquandles are enumerated exhaustively.
    pub component_size: usize,
    /// Search nodes visited by the morphism enumerator.
    pub morphism_nodes: usize,
    /// Largest |Inn(Q)| for which an envelope model is built.
    pub envelope_inn: usize,
    /// Largest prime tried when looking for a separating quotient.
    pub prime: u64,
    /// Elements enumerated when measuring a finite matrix group.
    pub matrix_group: usize,
    /// Terms computed in a lower central series before giving up.
    pub series_steps: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            closure: 1_000_000,
            component_size: 12,
            morphism_nodes: 10_000_000,
            envelope_inn: 2048,
            prime: 97,
            matrix_group: 200_000,
            series_steps: 64,
        }
    }
}

impl Caps {
    /// Parses overrides of the form `closure=5000,prime=193`.
    pub fn with_overrides(mut self, list: &str) -> Result<Caps> {
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Malformed(format!("cap override `{item}` is not key=value")))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Malformed(format!("cap `{key}` needs a nonnegative integer")))?;
            let as_usize = value as usize;
            match key.trim() {
                "closure" => self.closure = as_usize,
                "components" | "component_size" => self.component_size = as_usize,
                "morphisms" | "morphism_nodes" => self.morphism_nodes = as_usize,
                "inn" | "envelope_inn" => self.envelope_inn = as_usize,
                "prime" => self.prime = value,
                "matrix_group" => self.matrix_group = as_usize,
                "series" | "series_steps" => self.series_steps = as_usize,
                other => return Err(Error::Malformed(format!("unknown cap `{other}`"))),
            }
        }
        Ok(self)
    }

    /// Defaults, overridden by the `QF_CAPS` environment variable when set.
    pub fn from_env() -> Result<Caps> {
        match std::env::var("QF_CAPS") {
            Ok(list) => Caps::default().with_overrides(&list),
            Err(_) => Ok(Caps::default()),
        }
    }
}
