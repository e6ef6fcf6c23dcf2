//! Names for the algebras a report talks about, and their reconstruction.

use std::collections::BTreeMap;
use std::sync::Arc;

use gdefect_core::quivalg::Algebra;
use gdefect_core::trimat::TriMat;

use crate::load::Loaded;
use crate::CliError;

pub fn corner_role(loaded: &Loaded, vertices: &[usize]) -> String {
    format!("corner:{}", loaded.vertex_labels(vertices).join(","))
}

pub fn trimat_role(loaded: &Loaded, a_vertices: &[usize]) -> String {
    format!("T:{}", loaded.vertex_labels(a_vertices).join(","))
}

fn labels_to_vertices(loaded: &Loaded, list: &str) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for t in list.split(',') {
        out.push(
            loaded
                .algebra
                .vertex_index(t)
                .ok_or_else(|| CliError::Validation(format!("unknown vertex `{t}` in algebra role")))?,
        );
    }
    Ok(out)
}

/// Rebuilds algebras from role names, caching them.
pub struct Resolver<'a> {
    loaded: &'a Loaded,
    cache: BTreeMap<String, Arc<Algebra>>,
}

impl<'a> Resolver<'a> {
    pub fn new(loaded: &'a Loaded) -> Self {
        Resolver {
            loaded,
            cache: BTreeMap::new(),
        }
    }

    pub fn get(&mut self, role: &str) -> Result<Arc<Algebra>, CliError> {
        if let Some(a) = self.cache.get(role) {
            return Ok(a.clone());
        }
        let alg = if let Some(base) = role.strip_suffix("^op") {
            Arc::new(self.get(base)?.opposite())
        } else if role == "R" {
            self.loaded.algebra.clone()
        } else if let Some(list) = role.strip_prefix("corner:") {
            let v = labels_to_vertices(self.loaded, list)?;
            Arc::new(
                self.loaded
                    .algebra
                    .corner(&v)
                    .map_err(|e| CliError::Validation(e.to_string()))?
                    .algebra,
            )
        } else if let Some(list) = role.strip_prefix("T:") {
            let v = labels_to_vertices(self.loaded, list)?;
            let (tm, _) = TriMat::from_split(&self.loaded.algebra, &v).map_err(|e| CliError::Validation(e.to_string()))?;
            tm.t().clone()
        } else {
            return Err(CliError::Validation(format!("unknown algebra role `{role}`")));
        };
        self.cache.insert(role.to_string(), alg.clone());
        Ok(alg)
    }
}
