//! State files: `{"values": [[re, im], ...], "spectrum_weights": [w, ...]}`,
//! the weights being optional.

use num_complex::Complex64;
use qg_core::linalg::CVec;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub values: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum_weights: Option<Vec<f64>>,
}

impl StateFile {
    pub fn from_values(values: &CVec) -> Self {
        StateFile { values: values.iter().map(|z| [z.re, z.im]).collect(), spectrum_weights: None }
    }

    pub fn values(&self) -> CVec {
        CVec::from_iterator(self.values.len(), self.values.iter().map(|p| Complex64::new(p[0], p[1])))
    }
}

pub fn parse_state_file(bytes: &[u8]) -> Result<StateFile, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// One `[re, im]` pair per line; `-0.0` is written as `0.0`.
pub fn emit_state_file(state: &StateFile) -> String {
    let num = |x: f64| serde_json::to_string(&(x + 0.0)).expect("finite floats serialize");
    let values: Vec<String> = state.values.iter().map(|[a, b]| format!("    [{},{}]", num(*a), num(*b))).collect();
    let mut out = format!("{{\n  \"values\": [\n{}\n  ]", values.join(",\n"));
    if let Some(w) = &state.spectrum_weights {
        let w: Vec<String> = w.iter().map(|x| num(*x)).collect();
        out.push_str(&format!(",\n  \"spectrum_weights\": [{}]", w.join(",")));
    }
    out.push_str("\n}\n");
    out
}
