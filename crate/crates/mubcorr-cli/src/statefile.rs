//! State and basis-set file formats.
//!
//! A state file is a single JSON document carrying either an explicit
//! matrix or a named family:
//!
//! ```json
//! { "dims": [2, 2], "matrix": [[[1.0, 0.0], [0.0, 0.0]], ...] }
//! { "family": "werner", "params": { "d": 2, "alpha": 0.5 } }
//! ```
//!
//! Matrix entries are `[re, im]` pairs, rows listed in row-major order.
//! Supplying both `matrix` and a family descriptor is rejected as
//! ambiguous. Basis-set files use the same `[re, im]` convention with one
//! matrix (vectors as columns) per basis.

use mubcorr::qmath::{CMatrix, C64};
use mubcorr::states::{
    make_bell_diagonal, make_pure_from_schmidt, make_rho1, make_rho2, make_werner,
};
use mubcorr::{BipartiteState, MubFamily, ProbabilityVector, ProjectiveBasis};
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<serde_json::Value>,
}

fn get_f64(params: &serde_json::Value, key: &str) -> Result<f64, String> {
    params
        .get(key)
        .and_then(|v| v.as_f64())
        .ok_or_else(|| format!("family parameter '{key}' missing or not a number"))
}

fn get_usize(params: &serde_json::Value, key: &str) -> Result<usize, String> {
    params
        .get(key)
        .and_then(|v| v.as_u64())
        .map(|v| v as usize)
        .ok_or_else(|| format!("family parameter '{key}' missing or not an integer"))
}

fn get_f64_list(params: &serde_json::Value, key: &str) -> Result<Vec<f64>, String> {
    params
        .get(key)
        .and_then(|v| v.as_array())
        .map(|a| a.iter().filter_map(|x| x.as_f64()).collect::<Vec<f64>>())
        .ok_or_else(|| format!("family parameter '{key}' missing or not a list"))
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))
    }

    /// Resolve the file into a validated state. `max_dim` caps the total
    /// dimension.
    pub fn to_state(&self, max_dim: usize) -> Result<BipartiteState, StateFileError> {
        match (&self.matrix, &self.family) {
            (Some(_), Some(_)) => Err(StateFileError::Parse(
                "both an explicit matrix and a family descriptor given; ambiguity rejected".into(),
            )),
            (None, None) => Err(StateFileError::Parse(
                "state file needs either a matrix or a family descriptor".into(),
            )),
            (Some(rows), None) => {
                let (d_a, d_b) = self.dims.ok_or_else(|| {
                    StateFileError::Parse("explicit matrices need a dims field".into())
                })?;
                let n = d_a * d_b;
                if n > max_dim {
                    return Err(StateFileError::Unsupported(format!(
                        "total dimension {n} exceeds the cap {max_dim}"
                    )));
                }
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(StateFileError::Parse(format!(
                        "matrix must be {n}×{n} for dims ({d_a}, {d_b})"
                    )));
                }
                let m = CMatrix::from_fn(n, n, |r, c| C64::new(rows[r][c][0], rows[r][c][1]));
                BipartiteState::from_matrix(m, d_a, d_b).map_err(StateFileError::from)
            }
            (None, Some(family)) => {
                let params = self.params.as_ref().unwrap_or(&serde_json::Value::Null);
                let state = match family.as_str() {
                    "werner" => {
                        let d = get_usize(params, "d").map_err(StateFileError::Parse)?;
                        let alpha = get_f64(params, "alpha").map_err(StateFileError::Parse)?;
                        make_werner(d, alpha)
                    }
                    "bell-diagonal" => {
                        let r = get_f64_list(params, "r").map_err(StateFileError::Parse)?;
                        if r.len() != 3 {
                            return Err(StateFileError::Parse(
                                "bell-diagonal needs r = [r1, r2, r3]".into(),
                            ));
                        }
                        make_bell_diagonal([r[0], r[1], r[2]])
                    }
                    "rho1" => make_rho1(get_f64(params, "p").map_err(StateFileError::Parse)?),
                    "rho2" => make_rho2(get_f64(params, "p").map_err(StateFileError::Parse)?),
                    "pure-schmidt" => {
                        let lambda =
                            get_f64_list(params, "lambda").map_err(StateFileError::Parse)?;
                        let pv = ProbabilityVector::new(lambda)
                            .map_err(|e| StateFileError::Parse(e.to_string()))?;
                        make_pure_from_schmidt(&pv)
                    }
                    other => {
                        return Err(StateFileError::Parse(format!("unknown family '{other}'")))
                    }
                }
                .map_err(StateFileError::from)?;
                if let Some((d_a, d_b)) = self.dims {
                    if (d_a, d_b) != (state.d_a(), state.d_b()) {
                        return Err(StateFileError::Parse(format!(
                            "declared dims ({d_a}, {d_b}) conflict with family dims ({}, {})",
                            state.d_a(),
                            state.d_b()
                        )));
                    }
                }
                if state.dim() > max_dim {
                    return Err(StateFileError::Unsupported(format!(
                        "total dimension {} exceeds the cap {max_dim}",
                        state.dim()
                    )));
                }
                Ok(state)
            }
        }
    }

    pub fn from_state(state: &BipartiteState) -> Self {
        let n = state.dim();
        let m = state.matrix();
        let rows: Vec<Vec<[f64; 2]>> = (0..n)
            .map(|r| (0..n).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
            .collect();
        Self {
            dims: Some((state.d_a(), state.d_b())),
            matrix: Some(rows),
            family: None,
            params: None,
        }
    }
}

/// Errors split by CLI exit-code class.
#[derive(Debug)]
pub enum StateFileError {
    /// Malformed content (exit 2).
    Parse(String),
    /// Valid content outside supported dimensions (exit 3).
    Unsupported(String),
}

impl From<mubcorr::Error> for StateFileError {
    fn from(e: mubcorr::Error) -> Self {
        match e {
            mubcorr::Error::UnsupportedDimension { .. }
            | mubcorr::Error::UnsupportedLevel { .. }
            | mubcorr::Error::DimensionOverflow { .. } => Self::Unsupported(e.to_string()),
            other => Self::Parse(other.to_string()),
        }
    }
}

impl std::fmt::Display for StateFileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Parse(msg) | Self::Unsupported(msg) => write!(f, "{msg}"),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MubFile {
    pub dim: usize,
    /// bases[k][j] is the j-th vector of the k-th basis.
    pub bases: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overlap: Option<OverlapReport>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OverlapReport {
    /// max over basis pairs and vector pairs of | |⟨a|b⟩|² − 1/d |.
    pub max_deviation: f64,
    pub pairs_checked: usize,
}

impl MubFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))
    }

    pub fn from_family(family: &MubFamily) -> Self {
        let d = family.dim();
        let bases = family
            .bases()
            .iter()
            .map(|b| {
                (0..d)
                    .map(|j| {
                        let v = b.vector(j);
                        (0..d).map(|k| [v[k].re, v[k].im]).collect()
                    })
                    .collect()
            })
            .collect();
        let mut max_dev = 0.0f64;
        let mut pairs = 0usize;
        for i in 0..family.len() {
            for j in (i + 1)..family.len() {
                max_dev = max_dev.max(mubcorr::mub::unbiased_deviation(
                    &family.bases()[i],
                    &family.bases()[j],
                ));
                pairs += 1;
            }
        }
        Self {
            dim: d,
            bases,
            overlap: Some(OverlapReport {
                max_deviation: max_dev,
                pairs_checked: pairs,
            }),
        }
    }

    /// Rebuild and re-validate the family (round-trip check).
    pub fn to_family(&self) -> Result<MubFamily, String> {
        let d = self.dim;
        let mut bases = Vec::with_capacity(self.bases.len());
        for raw in &self.bases {
            if raw.len() != d || raw.iter().any(|v| v.len() != d) {
                return Err(format!("each basis must hold {d} vectors of length {d}"));
            }
            let m = CMatrix::from_fn(d, d, |k, j| C64::new(raw[j][k][0], raw[j][k][1]));
            bases.push(ProjectiveBasis::new(m).map_err(|e| e.to_string())?);
        }
        MubFamily::new(d, bases).map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("basis files serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_and_matrix_together_are_rejected() {
        let text = r#"{"dims": [2, 2], "matrix": [], "family": "werner", "params": {"d": 2, "alpha": 0.0}}"#;
        let f = StateFile::parse(text).unwrap();
        assert!(matches!(f.to_state(64), Err(StateFileError::Parse(_))));
    }

    #[test]
    fn werner_family_round_trip() {
        let text = r#"{"family": "werner", "params": {"d": 2, "alpha": 0.5}}"#;
        let state = StateFile::parse(text).unwrap().to_state(64).unwrap();
        let serialized = serde_json::to_string(&StateFile::from_state(&state)).unwrap();
        let reparsed = StateFile::parse(&serialized).unwrap().to_state(64).unwrap();
        assert!(
            mubcorr::qmath::max_entry_diff(state.matrix(), reparsed.matrix()) < 1e-15,
            "round trip must be the identity"
        );
    }

    #[test]
    fn dim_cap_is_enforced() {
        let text = r#"{"family": "werner", "params": {"d": 3, "alpha": 0.1}}"#;
        let f = StateFile::parse(text).unwrap();
        assert!(matches!(f.to_state(8), Err(StateFileError::Unsupported(_))));
        assert!(f.to_state(9).is_ok());
    }

    #[test]
    fn mub_file_round_trips() {
        let fam = mubcorr::standard_mub_family(3).unwrap();
        let file = MubFile::from_family(&fam);
        let back = MubFile::parse(&file.to_json())
            .unwrap()
            .to_family()
            .unwrap();
        assert_eq!(back.len(), 4);
    }
}
