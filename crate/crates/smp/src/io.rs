//! JSON model files and machine-readable reports.
//!
//! A model file looks like
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "n_states": 2,
//!   "eps0": "1/10",
//!   "mode": "bounded",
//!   "states": ["up", "down"],
//!   "p": [
//!     {"i": 1, "j": 2, "h": 0, "coeffs": ["1", "0"],
//!      "bound": {"delta": "1", "G": "0", "eps_max": "1/10"}},
//!     {"i": "down", "j": "up", "h": 1, "coeffs": ["1", "0"]}
//!   ],
//!   "e": "discrete-time"
//! }
//! ```
//!
//! * `i` and `j` are state numbers or, when `states` lists names, names.
//! * `state_ids` optionally replaces the default numbering `1..=n_states`.
//! * `k` may be given and must then equal `h + len(coeffs) − 1`.
//! * `pivotal` defaults to `true`.
//! * `e` is a list of entries like `p`, the string `"discrete-time"`
//!   (`e_ij = p_ij`), or `{"continuous-time": [{"i", "h", "coeffs", "bound"?}]}`
//!   giving exit rates `λ_i` (`e_ij = p_ij / λ_i`).
//!
//! Rationals are written as `"p/q"` strings (integers and decimals are
//! accepted on input).  Serialization always writes the explicit form with
//! `format_version`, and parsing a serialized model gives back the same model.

use std::collections::{BTreeMap, BTreeSet};

use laurent::rational::format_rational;
use laurent::serial::{BoundRecord, ExpansionRecord, RecordError};
use laurent::{parse_rational, Expansion, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::error::SmpError;
use crate::model::{Mode, PerturbedSmp, State};
use crate::oracle::ComparisonReport;
use crate::reduction::{PairHitting, ReductionTrace};
use crate::stationary::StationaryReport;
use crate::validate::ValidationReport;

/// Version written to every document.
pub const FORMAT_VERSION: u32 = 1;

/// Failure to read a model file.
#[derive(Debug, Error)]
pub enum ModelFileError {
    /// Malformed JSON or a field of the wrong type.
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    /// Unsupported version.
    #[error("unsupported format_version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    /// Structurally invalid content.
    #[error("{0}")]
    Format(String),
    /// An expansion entry is invalid.
    #[error("{location}: {source}")]
    Entry {
        /// Which entry.
        location: String,
        /// Underlying error.
        source: RecordError,
    },
    /// The model could not be constructed.
    #[error(transparent)]
    Model(#[from] SmpError),
}

/// A state given by number or by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateRef {
    /// State number.
    Id(State),
    /// State name.
    Name(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryRecord {
    i: StateRef,
    j: StateRef,
    h: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<i64>,
    coeffs: Vec<String>,
    #[serde(default = "default_true")]
    pivotal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bound: Option<BoundRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RateRecord {
    i: StateRef,
    h: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<i64>,
    coeffs: Vec<String>,
    #[serde(default = "default_true")]
    pivotal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bound: Option<BoundRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum SojournData {
    Explicit(Vec<EntryRecord>),
    Keyword(String),
    Rates {
        #[serde(rename = "continuous-time")]
        continuous_time: Vec<RateRecord>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    format_version: Option<u32>,
    n_states: usize,
    eps0: String,
    mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    states: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    state_ids: Option<Vec<State>>,
    #[serde(default)]
    polynomial_exact: bool,
    p: Vec<EntryRecord>,
    e: SojournData,
}

fn default_true() -> bool {
    true
}

struct Resolver {
    ids: Vec<State>,
    by_name: BTreeMap<String, State>,
}

impl Resolver {
    fn resolve(&self, r: &StateRef, location: &str) -> Result<State, ModelFileError> {
        match r {
            StateRef::Id(id) if self.ids.contains(id) => Ok(*id),
            StateRef::Id(id) => Err(ModelFileError::Format(format!("{location}: unknown state {id}"))),
            StateRef::Name(name) => self
                .by_name
                .get(name)
                .copied()
                .ok_or_else(|| ModelFileError::Format(format!("{location}: unknown state name `{name}`"))),
        }
    }
}

fn expansion(
    h: i64,
    k: Option<i64>,
    coeffs: &[String],
    pivotal: bool,
    bound: &Option<BoundRecord>,
    location: &str,
) -> Result<Expansion, ModelFileError> {
    let k = k.unwrap_or(h + coeffs.len() as i64 - 1);
    let record = ExpansionRecord { h, k, coeffs: coeffs.to_vec(), pivotal, bound: bound.clone() };
    Expansion::try_from(&record).map_err(|source| ModelFileError::Entry { location: location.to_string(), source })
}

fn entries(
    records: &[EntryRecord],
    resolver: &Resolver,
    what: &str,
) -> Result<BTreeMap<(State, State), Expansion>, ModelFileError> {
    let mut out = BTreeMap::new();
    for (n, r) in records.iter().enumerate() {
        let location = format!("{what}[{n}]");
        let i = resolver.resolve(&r.i, &location)?;
        let j = resolver.resolve(&r.j, &location)?;
        let x = expansion(r.h, r.k, &r.coeffs, r.pivotal, &r.bound, &location)?;
        if out.insert((i, j), x).is_some() {
            return Err(ModelFileError::Format(format!("{location}: duplicate entry ({i}, {j})")));
        }
    }
    Ok(out)
}

/// Parses a model from JSON text.
pub fn parse_model(text: &str) -> Result<PerturbedSmp, ModelFileError> {
    let record: ModelRecord = serde_json::from_str(text)?;
    if let Some(v) = record.format_version {
        if v != FORMAT_VERSION {
            return Err(ModelFileError::Version(v));
        }
    }
    let eps0 = parse_rational(&record.eps0).map_err(|e| ModelFileError::Format(format!("eps0: {e}")))?;
    let mode = match record.mode.as_str() {
        "bounded" => Mode::Bounded,
        "plain" => Mode::Plain,
        other => return Err(ModelFileError::Format(format!("mode must be `bounded` or `plain`, got `{other}`"))),
    };
    let ids = match &record.state_ids {
        Some(ids) => {
            let distinct: BTreeSet<State> = ids.iter().copied().collect();
            if ids.len() != record.n_states || distinct.len() != ids.len() || distinct.contains(&0) {
                return Err(ModelFileError::Format("state_ids must list n_states distinct positive numbers".into()));
            }
            ids.clone()
        }
        None => (1..=record.n_states).collect(),
    };
    if record.n_states == 0 {
        return Err(ModelFileError::Format("n_states must be positive".into()));
    }
    let mut by_name = BTreeMap::new();
    if let Some(names) = &record.states {
        if names.len() != record.n_states {
            return Err(ModelFileError::Format(format!(
                "states lists {} names for {} states",
                names.len(),
                record.n_states
            )));
        }
        for (name, &id) in names.iter().zip(&ids) {
            if by_name.insert(name.clone(), id).is_some() {
                return Err(ModelFileError::Format(format!("duplicate state name `{name}`")));
            }
        }
    }
    let resolver = Resolver { ids: ids.clone(), by_name };
    let p = entries(&record.p, &resolver, "p")?;
    let e = match &record.e {
        SojournData::Explicit(list) => {
            let e = entries(list, &resolver, "e")?;
            if let Some((i, j)) = e.keys().find(|key| !p.contains_key(key)) {
                return Err(ModelFileError::Format(format!("e entry ({i}, {j}) has no matching p entry")));
            }
            e
        }
        SojournData::Keyword(word) if word == "discrete-time" => p.clone(),
        SojournData::Keyword(word) => return Err(ModelFileError::Format(format!("unknown sojourn keyword `{word}`"))),
        SojournData::Rates { continuous_time } => {
            let mut rates = BTreeMap::new();
            for (n, r) in continuous_time.iter().enumerate() {
                let location = format!("e.continuous-time[{n}]");
                let i = resolver.resolve(&r.i, &location)?;
                let x = expansion(r.h, r.k, &r.coeffs, r.pivotal, &r.bound, &location)?;
                if rates.insert(i, x).is_some() {
                    return Err(ModelFileError::Format(format!("{location}: duplicate rate for state {i}")));
                }
            }
            let mut e = BTreeMap::new();
            for (&(i, j), pij) in &p {
                let rate =
                    rates.get(&i).ok_or_else(|| ModelFileError::Format(format!("no exit rate for state {i}")))?;
                e.insert((i, j), laurent::div(pij, rate).map_err(SmpError::from)?);
            }
            e
        }
    };
    let names = record.states.map(|names| ids.iter().copied().zip(names).collect()).unwrap_or_default();
    Ok(PerturbedSmp::with_states(ids, eps0, mode, p, e)?
        .with_names(names)
        .with_polynomial_exact(record.polynomial_exact))
}

fn entry_record(i: State, j: State, x: &Expansion) -> EntryRecord {
    let r = ExpansionRecord::from(x);
    EntryRecord {
        i: StateRef::Id(i),
        j: StateRef::Id(j),
        h: r.h,
        k: Some(r.k),
        coeffs: r.coeffs,
        pivotal: r.pivotal,
        bound: r.bound,
    }
}

/// Serializes a model to its explicit JSON form.
pub fn model_to_value(model: &PerturbedSmp) -> Value {
    let states = model.states();
    let dense = states.iter().copied().eq(1..=states.len());
    let named = !model.names().is_empty();
    let record = ModelRecord {
        format_version: Some(FORMAT_VERSION),
        n_states: model.n_states(),
        eps0: format_rational(model.eps0()),
        mode: model.mode().as_str().to_string(),
        states: named.then(|| states.iter().map(|&s| model.name(s)).collect()),
        state_ids: (!dense).then(|| states.to_vec()),
        polynomial_exact: model.polynomial_exact(),
        p: model.p_entries().iter().map(|(&(i, j), x)| entry_record(i, j, x)).collect(),
        e: SojournData::Explicit(model.e_entries().iter().map(|(&(i, j), x)| entry_record(i, j, x)).collect()),
    };
    serde_json::to_value(record).expect("model records serialize")
}

/// Serializes a model to pretty-printed JSON.
pub fn serialize_model(model: &PerturbedSmp) -> String {
    serde_json::to_string_pretty(&model_to_value(model)).expect("values serialize")
}

fn rational(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

fn expansion_value(x: &Expansion) -> Value {
    let mut v = serde_json::to_value(x).expect("expansions serialize");
    v["series"] = Value::String(x.to_series_string());
    v
}

/// Validation report as JSON.
pub fn validation_to_value(report: &ValidationReport) -> Value {
    json!({
        "format_version": FORMAT_VERSION,
        "kind": "validation",
        "valid": report.is_ok(),
        "violations": report.violations,
    })
}

/// Reduction trace as JSON (each intermediate model in explicit form).
pub fn trace_to_value(trace: &ReductionTrace) -> Value {
    json!({
        "format_version": FORMAT_VERSION,
        "kind": "reduction",
        "order": trace.order,
        "models": trace.models.iter().map(model_to_value).collect::<Vec<_>>(),
    })
}

/// Expected return time as JSON.
pub fn hitting_to_value(state: State, order: &[State], expansion: &Expansion) -> Value {
    json!({
        "format_version": FORMAT_VERSION,
        "kind": "hitting",
        "state": state,
        "order": order,
        "expansion": expansion_value(expansion),
    })
}

/// Stationary report as JSON.
pub fn stationary_to_value(report: &StationaryReport) -> Value {
    let states: Vec<Value> = report
        .states
        .iter()
        .map(|s| {
            json!({
                "state": s.state,
                "n_minus": s.n_minus(),
                "n_plus": s.n_plus(),
                "limit_at_zero": rational(&s.limit_at_zero),
                "sojourn": expansion_value(&s.sojourn),
                "return_time": expansion_value(&s.return_time),
                "pi": expansion_value(&s.pi),
            })
        })
        .collect();
    json!({
        "format_version": FORMAT_VERSION,
        "kind": "stationary",
        "consistent": report.is_consistent(),
        "x0": report.x0,
        "n_plus": report.n_plus,
        "residuals": report.residuals.iter().map(rational).collect::<Vec<_>>(),
        "delta_floor": report.delta_floor.as_ref().map(rational),
        "states": states,
        "violations": report.violations,
    })
}

/// Pair hitting times as JSON.
pub fn pair_to_value(pair: &PairHitting) -> Value {
    json!({
        "format_version": FORMAT_VERSION,
        "kind": "pair",
        "i": pair.i,
        "j": pair.j,
        "E_ij": expansion_value(&pair.e_ij),
        "E_ji": expansion_value(&pair.e_ji),
        "E_ii": expansion_value(&pair.e_ii),
        "E_jj": expansion_value(&pair.e_jj),
    })
}

/// Oracle comparison as JSON.
pub fn comparison_to_value(report: &ComparisonReport) -> Value {
    let mut v = serde_json::to_value(report).expect("reports serialize");
    v["format_version"] = json!(FORMAT_VERSION);
    v["kind"] = json!("oracle");
    v["pass"] = json!(report.pass());
    v
}
