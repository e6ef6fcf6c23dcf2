//! From a parsed file to an algebra with its named modules.

use std::collections::BTreeMap;
use std::sync::Arc;

use gdefect_core::exactfield::{Field, Mat};
use gdefect_core::homalg::Settings;
use gdefect_core::modcat::Module;
use gdefect_core::quivalg::{build_algebra, Algebra, QuiverAlgebra};
use sha2::{Digest, Sha256};

use crate::format::{parse, AlgebraFile};
use crate::CliError;

pub const DEFAULT_LENGTH_CAP: usize = 12;

/// Command-line overrides of file options.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub prime: Option<u32>,
    pub bound: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct Loaded {
    pub file: AlgebraFile,
    pub sha256: String,
    pub field: Field,
    pub length_cap: usize,
    pub settings: Settings,
    pub presentation: QuiverAlgebra,
    pub algebra: Arc<Algebra>,
    pub modules: BTreeMap<String, Module>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn load(text: &str, overrides: Overrides) -> Result<Loaded, CliError> {
    let file = parse(text)?;
    let p = overrides.prime.or(file.p).unwrap_or(Field::DEFAULT_PRIME);
    let field = Field::new(p).map_err(|e| CliError::Validation(e.to_string()))?;
    let length_cap = file.options.length_cap.unwrap_or(DEFAULT_LENGTH_CAP);
    let mut settings = Settings::default();
    if let Some(b) = overrides.bound.or(file.options.bound) {
        settings.bound = b;
    }
    if let Some(s) = overrides.seed.or(file.options.seed) {
        settings.seed = s;
    }
    let presentation = build_algebra(field, &file.quiver, &file.relations, length_cap)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let algebra = Arc::new(presentation.algebra().clone());
    let mut modules = BTreeMap::new();
    for (name, spec) in &file.modules {
        let q = &file.quiver;
        let maps: Vec<Mat> = q
            .arrows()
            .iter()
            .zip(&spec.maps)
            .map(|(arrow, m)| {
                let (rows, cols) = (spec.dims[arrow.target], spec.dims[arrow.source]);
                match m {
                    Some(m) if rows > 0 && cols > 0 => Mat::from_i64_rows(field, m),
                    _ => Mat::zeros(field, rows, cols),
                }
            })
            .collect();
        let m = Module::from_representation(&presentation, algebra.clone(), spec.dims.clone(), &maps)
            .map_err(|e| CliError::Validation(format!("module `{name}`: {e}")))?;
        modules.insert(name.clone(), m);
    }
    Ok(Loaded {
        file,
        sha256: sha256_hex(text.as_bytes()),
        field,
        length_cap,
        settings,
        presentation,
        algebra,
        modules,
    })
}

impl Loaded {
    /// Vertex indices from labels, or from the name of an idempotent in
    /// the file.
    pub fn vertex_set(&self, spec: &str) -> Result<Vec<usize>, CliError> {
        if let Some(v) = self.file.idempotents.get(spec.trim()) {
            return Ok(v.clone());
        }
        let mut out = Vec::new();
        for t in spec.split([',', ' ']).filter(|s| !s.is_empty()) {
            let v = self
                .algebra
                .vertex_index(t)
                .ok_or_else(|| CliError::Validation(format!("unknown vertex `{t}`")))?;
            out.push(v);
        }
        out.sort_unstable();
        out.dedup();
        if out.is_empty() {
            return Err(CliError::Validation("empty idempotent".into()));
        }
        Ok(out)
    }

    pub fn vertex_labels(&self, set: &[usize]) -> Vec<String> {
        set.iter().map(|&v| self.algebra.vertex_labels()[v].clone()).collect()
    }
}
