//! Replays the certificates of a report against its input file.
//!
//! Subjects are rebuilt from their action matrices and validated as
//! modules; witnesses are checked directly (an isomorphism is checked to be
//! one, an Ext dimension is recomputed at the stated degree) rather than
//! searched for again.

use std::sync::Arc;

use gdefect_core::exactfield::{Field, Mat};
use gdefect_core::gproj::{gpd, is_reflexive};
use gdefect_core::homalg::{ext_from, is_self_injective, min_resolution, DimValue, Outcome, Settings};
use gdefect_core::modcat::{Module, Morphism};
use gdefect_core::quivalg::Algebra;
use serde_json::{json, Value};

use crate::load::Loaded;
use crate::roles::Resolver;

fn matrix(field: Field, rows: usize, cols: usize, v: &Value) -> Result<Mat, String> {
    let list = v.as_array().ok_or("matrix is not a list of rows")?;
    let mut data = Vec::with_capacity(rows * cols);
    if rows > 0 && list.len() != rows {
        return Err(format!("matrix has {} rows, expected {rows}", list.len()));
    }
    for row in list {
        let row = row.as_array().ok_or("row is not a list")?;
        if row.len() != cols {
            return Err(format!("row has {} entries, expected {cols}", row.len()));
        }
        for x in row {
            let x = x.as_u64().ok_or("entry is not a field element")?;
            if x >= field.p() as u64 {
                return Err(format!("entry {x} is not reduced modulo {}", field.p()));
            }
            data.push(x as u32);
        }
    }
    Ok(Mat::from_vec(field, rows, cols, data))
}

fn usize_field(c: &Value, key: &str) -> Result<usize, String> {
    c[key].as_u64().map(|x| x as usize).ok_or_else(|| format!("missing `{key}`"))
}

struct Replay<'a> {
    resolver: Resolver<'a>,
    settings: Settings,
    checked: usize,
    failures: Vec<Value>,
}

impl Replay<'_> {
    fn subject(&mut self, v: &Value) -> Result<(Arc<Algebra>, Module), String> {
        let role = v["algebra"].as_str().ok_or("subject without algebra")?;
        let alg = self.resolver.get(role).map_err(|e| e.to_string())?;
        let dims: Vec<usize> = v["dims"]
            .as_array()
            .ok_or("subject without dims")?
            .iter()
            .map(|x| x.as_u64().map(|x| x as usize).ok_or("bad dimension"))
            .collect::<Result<_, _>>()?;
        if dims.len() != alg.num_vertices() {
            return Err("subject has the wrong number of vertices".into());
        }
        let actions = v["actions"].as_array().ok_or("subject without actions")?;
        if actions.len() != alg.dim() {
            return Err("subject has the wrong number of action blocks".into());
        }
        let mats = actions
            .iter()
            .enumerate()
            .map(|(b, a)| {
                let (l, r) = alg.grade(b);
                matrix(alg.field(), dims[l], dims[r], a)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let m = Module::new(alg.clone(), dims, mats).map_err(|e| format!("subject is not a module: {e}"))?;
        Ok((alg, m))
    }

    fn ext_to_regular(&self, alg: &Arc<Algebra>, m: &Module, upto: usize) -> Result<Vec<usize>, String> {
        let res = min_resolution(m, &Settings { bound: upto, ..self.settings });
        let regular = Module::regular(alg.clone());
        (0..=upto)
            .map(|t| ext_from(&res, &regular, t).ok_or_else(|| format!("Ext^{t} out of range")))
            .collect()
    }

    fn periodic(&mut self, c: &Value) -> Result<(), String> {
        let (alg, m) = self.subject(&c["subject"])?;
        let (i, j) = (usize_field(c, "i")?, usize_field(c, "j")?);
        if i >= j {
            return Err("periodicity indices out of order".into());
        }
        let res = min_resolution(&m, &Settings { bound: j, ..self.settings });
        if res.syzygies.len() <= j {
            return Err(format!("resolution stops before Ω^{j}"));
        }
        let (src, dst) = (&res.syzygies[i], &res.syzygies[j]);
        let blocks = c["witness"].as_array().ok_or("missing witness")?;
        if blocks.len() != alg.num_vertices() {
            return Err("witness has the wrong number of blocks".into());
        }
        let blocks = blocks
            .iter()
            .enumerate()
            .map(|(v, b)| matrix(alg.field(), dst.dims()[v], src.dims()[v], b))
            .collect::<Result<Vec<_>, _>>()?;
        let w = Morphism::new(src.clone(), dst.clone(), blocks).map_err(|e| format!("witness is not a module map: {e}"))?;
        if !w.is_iso() {
            return Err("witness is not an isomorphism".into());
        }
        match c["claim"].as_str() {
            Some("pd_infinite") if !src.is_zero() => Ok(()),
            Some("pd_infinite") => Err("periodic syzygy is zero".into()),
            Some("gproj") => {
                let e = self.ext_to_regular(&alg, &m, j)?;
                match (1..=j).find(|&t| e[t] != 0) {
                    None => Ok(()),
                    Some(t) => Err(format!("Ext^{t}(M, R) ≠ 0")),
                }
            }
            Some("gpd_infinite") => {
                let e = self.ext_to_regular(&alg, &m, j)?;
                if (i + 1..=j).any(|t| e[t] != 0) {
                    Ok(())
                } else {
                    Err("the periodic part is Hom(−, R)-exact".into())
                }
            }
            other => Err(format!("unknown periodicity claim {other:?}")),
        }
    }

    fn certificate(&mut self, c: &Value) -> Result<(), String> {
        let kind = c["kind"].as_str().ok_or("certificate without kind")?;
        match kind {
            "all" => {
                for part in c["parts"].as_array().ok_or("missing parts")? {
                    self.certificate(part)?;
                }
                Ok(())
            }
            "periodic" => self.periodic(c),
            "projective" | "not_projective" => {
                let (_, m) = self.subject(&c["subject"])?;
                if m.is_projective() == (kind == "projective") {
                    Ok(())
                } else {
                    Err(format!("projectivity claim `{kind}` is false"))
                }
            }
            "finite_resolution" => {
                let (_, m) = self.subject(&c["subject"])?;
                let n = usize_field(c, "pd")?;
                let res = min_resolution(&m, &Settings { bound: n + 1, ..self.settings });
                match res.outcome {
                    Outcome::Finite { pd } if pd == n => Ok(()),
                    _ => Err(format!("resolution does not have length {n}")),
                }
            }
            "gpd_replay" => {
                let (_, m) = self.subject(&c["subject"])?;
                let n = usize_field(c, "gpd")?;
                match gpd(&m, &self.settings) {
                    DimValue::Finite(g) if g == n => Ok(()),
                    other => Err(format!("gpd replays as {}", other.verdict())),
                }
            }
            "ext_nonzero" => {
                let (alg, m) = self.subject(&c["subject"])?;
                let (degree, dim) = (usize_field(c, "degree")?, usize_field(c, "dim")?);
                let e = self.ext_to_regular(&alg, &m, degree)?;
                if dim > 0 && e[degree] == dim {
                    Ok(())
                } else {
                    Err(format!("Ext^{degree}(M, R) has dimension {}, not {dim}", e[degree]))
                }
            }
            "not_reflexive" => {
                let (_, m) = self.subject(&c["subject"])?;
                if is_reflexive(&m) {
                    Err("module is reflexive".into())
                } else {
                    Ok(())
                }
            }
            "structural" => {
                let role = c["algebra"].as_str().ok_or("missing algebra")?;
                let alg = self.resolver.get(role).map_err(|e| e.to_string())?;
                let op = Arc::new(alg.opposite());
                let ok = match c["reason"].as_str() {
                    Some("semisimple") => alg.is_semisimple(),
                    Some(_) => alg.is_radical_square_zero() && alg.is_connected() && !is_self_injective(&alg, &op),
                    None => false,
                };
                if ok {
                    Ok(())
                } else {
                    Err("structural reason does not apply".into())
                }
            }
            other => Err(format!("unknown certificate kind `{other}`")),
        }
    }

    fn walk(&mut self, v: &Value, path: &str) {
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    let here = format!("{path}/{k}");
                    if k == "certificate" {
                        self.checked += 1;
                        if let Err(reason) = self.certificate(x) {
                            self.failures.push(json!({"path": here, "reason": reason}));
                        }
                    } else {
                        self.walk(x, &here);
                    }
                }
            }
            Value::Array(items) => {
                for (k, x) in items.iter().enumerate() {
                    self.walk(x, &format!("{path}/{k}"));
                }
            }
            _ => {}
        }
    }
}

/// Checks every certificate in `report`. `loaded` must be the report's
/// input, loaded with the report's field and bounds.
pub fn verify(loaded: &Loaded, report: &Value) -> Value {
    let mut replay = Replay {
        resolver: Resolver::new(loaded),
        settings: loaded.settings,
        checked: 0,
        failures: Vec::new(),
    };
    if report["input"]["sha256"].as_str() != Some(loaded.sha256.as_str()) {
        replay
            .failures
            .push(json!({"path": "/input/sha256", "reason": "input file does not match the report"}));
    }
    if report["field_p"].as_u64() != Some(loaded.field.p() as u64) {
        replay
            .failures
            .push(json!({"path": "/field_p", "reason": "field does not match the report"}));
    }
    replay.walk(&report["results"], "/results");
    json!({
        "certificates_checked": replay.checked,
        "failures": replay.failures,
        "verdict": if replay.failures.is_empty() { "holds" } else { "fails" },
    })
}
