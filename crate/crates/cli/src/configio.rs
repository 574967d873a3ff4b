//! Reading and writing scatterer configurations.
//!
//! Schema:
//!
//! ```json
//! {"scatterers": [{"position": [x, y, z], "alpha": a}, ...]}
//! ```
//!
//! Numbers are written at 17 significant digits, so a save/load round trip
//! reproduces every float exactly. Parse errors name the offending field
//! by path (for example `scatterers[3].position[1]: expected number`).

use ptscat_core::model::{Configuration, Point3, PointScatterer};
use serde_json::Value;

use crate::json::Json;

/// Parses a configuration document, reporting problems with a field path.
pub fn parse_configuration(text: &str) -> Result<Configuration, String> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| format!("malformed JSON: {e}"))?;
    let root = root
        .as_object()
        .ok_or_else(|| "top level: expected an object".to_string())?;
    let scatterers = root
        .get("scatterers")
        .ok_or_else(|| "scatterers: missing field".to_string())?
        .as_array()
        .ok_or_else(|| "scatterers: expected an array".to_string())?;
    if scatterers.is_empty() {
        return Err("scatterers: at least one scatterer is required".to_string());
    }

    let mut parsed = Vec::with_capacity(scatterers.len());
    for (i, item) in scatterers.iter().enumerate() {
        let obj = item
            .as_object()
            .ok_or_else(|| format!("scatterers[{i}]: expected an object"))?;
        let position = obj
            .get("position")
            .ok_or_else(|| format!("scatterers[{i}].position: missing field"))?
            .as_array()
            .ok_or_else(|| format!("scatterers[{i}].position: expected an array"))?;
        if position.len() != 3 {
            return Err(format!(
                "scatterers[{i}].position: expected 3 components, got {}",
                position.len()
            ));
        }
        let mut coords = [0.0f64; 3];
        for (c, value) in position.iter().enumerate() {
            coords[c] = value
                .as_f64()
                .ok_or_else(|| format!("scatterers[{i}].position[{c}]: expected number"))?;
        }
        let alpha = obj
            .get("alpha")
            .ok_or_else(|| format!("scatterers[{i}].alpha: missing field"))?
            .as_f64()
            .ok_or_else(|| format!("scatterers[{i}].alpha: expected number"))?;
        parsed.push(PointScatterer::new(
            Point3::new(coords[0], coords[1], coords[2]),
            alpha,
        ));
    }

    Configuration::new(parsed).map_err(|e| e.to_string())
}

/// Renders a configuration as a schema-conformant document.
pub fn render_configuration(config: &Configuration) -> String {
    let scatterers: Vec<Json> = config
        .scatterers()
        .iter()
        .map(|s| {
            Json::Obj(vec![
                (
                    "position",
                    Json::floats([s.position.x, s.position.y, s.position.z]),
                ),
                ("alpha", Json::Num(s.alpha)),
            ])
        })
        .collect();
    Json::Obj(vec![("scatterers", Json::Arr(scatterers))]).render()
}
