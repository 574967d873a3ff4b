//! Run manifests: the provenance record written next to every artifact.
//!
//! A manifest holds the command name, the fully resolved parameter set
//! (defaults included), the tool version, the rank tolerance when the
//! command uses one, and a timestamp. JSON reports embed it inline; file
//! outputs additionally get a `<file>.manifest.json` sidecar, so re-running
//! the recorded command reproduces the artifact byte-for-byte with the
//! same build.
//!
//! The timestamp honors the `SOURCE_DATE_EPOCH` convention: when that
//! variable is set (as reproducibility harnesses and the golden tests do),
//! the recorded time is taken from it instead of the wall clock, which
//! makes whole files — manifest included — byte-stable across reruns.

use std::path::Path;

use crate::json::Json;

#[derive(Debug, Clone)]
pub struct Manifest {
    pub command: &'static str,
    /// Fully resolved parameters, in a fixed order.
    pub parameters: Vec<(&'static str, Json)>,
    /// Detection tolerance for commands that rank a matrix; `None` (and
    /// `null` in the output) for commands that do not.
    pub rank_tolerance: Option<f64>,
}

impl Manifest {
    pub fn new(command: &'static str, parameters: Vec<(&'static str, Json)>) -> Self {
        Manifest {
            command,
            parameters,
            rank_tolerance: None,
        }
    }

    pub fn with_rank_tolerance(mut self, rtol: f64) -> Self {
        self.rank_tolerance = Some(rtol);
        self
    }

    pub fn to_json(&self) -> Json {
        Json::Obj(vec![
            ("command", Json::Str(self.command.to_string())),
            ("parameters", Json::Obj(self.parameters.clone())),
            (
                "tool_version",
                Json::Str(env!("CARGO_PKG_VERSION").to_string()),
            ),
            (
                "rank_tolerance",
                match self.rank_tolerance {
                    Some(r) => Json::Num(r),
                    None => Json::Null,
                },
            ),
            ("timestamp", Json::Str(timestamp())),
        ])
    }

    /// Renders the standalone sidecar document.
    pub fn render(&self) -> String {
        self.to_json().render()
    }

    /// The sidecar path for an output file: `<file>.manifest.json`.
    pub fn sidecar_path(output: &Path) -> std::path::PathBuf {
        let mut name = output
            .file_name()
            .map(|n| n.to_os_string())
            .unwrap_or_default();
        name.push(".manifest.json");
        output.with_file_name(name)
    }
}

/// RFC 3339 UTC timestamp; `SOURCE_DATE_EPOCH` overrides the wall clock.
fn timestamp() -> String {
    let from_env = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.parse::<i64>().ok())
        .and_then(|secs| chrono::DateTime::<chrono::Utc>::from_timestamp(secs, 0));
    let t = from_env.unwrap_or_else(chrono::Utc::now);
    t.to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}
