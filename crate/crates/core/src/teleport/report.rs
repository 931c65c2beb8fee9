//! Serialization of the benchmark report: rounded JSON, flat CSV and a
//! plain-text summary with the measured reference values alongside.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::circuit::Outcome;
use crate::{Error, Result};

use super::bench::BenchmarkReport;
use super::InputState;

/// Significant digits kept in emitted numbers.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StateReference {
    pub input: InputState,
    pub state_fidelity: f64,
    pub tangle: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProcessReference {
    pub outcome: Outcome,
    pub process_fidelity: f64,
    pub average_output_fidelity: f64,
}

/// Values measured on the physical three-transmon device. They include error
/// sources beyond T1/T2* and are carried for comparison only.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExperimentReference {
    pub states: [StateReference; 4],
    pub processes: [ProcessReference; 4],
    pub mean_process_fidelity: f64,
    pub mean_output_fidelity: f64,
    /// Witness and robustness for the `minus` input.
    pub witness_expectation: f64,
    pub robustness_lower_bound: f64,
    /// Conditional fidelities of qubit C for the `minus` input, outcomes 00..11.
    pub conditional_fidelities_minus: [f64; 4],
}

pub const EXPERIMENT_REFERENCE: ExperimentReference = ExperimentReference {
    states: [
        StateReference {
            input: InputState::Zero,
            state_fidelity: 0.82,
            tangle: None,
        },
        StateReference {
            input: InputState::One,
            state_fidelity: 0.79,
            tangle: None,
        },
        StateReference {
            input: InputState::Minus,
            state_fidelity: 0.78,
            tangle: Some(0.49),
        },
        StateReference {
            input: InputState::Plus,
            state_fidelity: 0.80,
            tangle: Some(0.52),
        },
    ],
    processes: [
        ProcessReference {
            outcome: Outcome::O00,
            process_fidelity: 0.82,
            average_output_fidelity: 0.88,
        },
        ProcessReference {
            outcome: Outcome::O01,
            process_fidelity: 0.78,
            average_output_fidelity: 0.85,
        },
        ProcessReference {
            outcome: Outcome::O10,
            process_fidelity: 0.84,
            average_output_fidelity: 0.89,
        },
        ProcessReference {
            outcome: Outcome::O11,
            process_fidelity: 0.87,
            average_output_fidelity: 0.91,
        },
    ],
    mean_process_fidelity: 0.83,
    mean_output_fidelity: 0.88,
    witness_expectation: -0.28,
    robustness_lower_bound: 0.56,
    conditional_fidelities_minus: [0.88, 0.82, 0.82, 0.89],
};

impl ExperimentReference {
    pub fn state(&self, input: InputState) -> &StateReference {
        self.states.iter().find(|s| s.input == input).unwrap()
    }

    pub fn process(&self, outcome: Outcome) -> &ProcessReference {
        self.processes
            .iter()
            .find(|p| p.outcome == outcome)
            .unwrap()
    }
}

fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        // also folds -0.0 into 0.0
        return if x.is_finite() { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Rounds every floating-point number in the tree to [`SIGNIFICANT_DIGITS`].
pub fn round_json(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap());
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_json).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_json(v))).collect())
        }
        other => other,
    }
}

fn serde_err(e: impl std::fmt::Display) -> Error {
    Error::InvalidState(format!("report serialization failed: {e}"))
}

/// Pretty-printed JSON with rounded numbers and a trailing newline.
pub fn to_json_string<T: Serialize>(report: &T) -> Result<String> {
    let value = round_json(serde_json::to_value(report).map_err(serde_err)?);
    let mut out = serde_json::to_string_pretty(&value).map_err(serde_err)?;
    out.push('\n');
    Ok(out)
}

/// Flat `(input, outcome, metric, value)` rows; values rounded as in the JSON.
pub fn to_csv(report: &BenchmarkReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["input", "outcome", "metric", "value"])
        .map_err(serde_err)?;
    let mut row = |input: &str, outcome: &str, metric: &str, value: f64| {
        w.write_record([input, outcome, metric, &round_sig(value).to_string()])
            .map_err(serde_err)
    };
    for s in &report.states {
        let input = s.input.label();
        row(input, "", "state_fidelity", s.state_fidelity)?;
        row(input, "", "purity", s.purity)?;
        if let Some(wit) = &s.witness {
            row(input, "", "witness_expectation", wit.expectation)?;
            row(
                input,
                "",
                "robustness_lower_bound",
                wit.robustness_lower_bound,
            )?;
        }
        if let Some(tau) = s.tangle_upper_bound {
            row(input, "", "tangle_upper_bound", tau)?;
        }
        for o in &s.outcomes {
            row(input, o.outcome.label(), "probability", o.probability)?;
            if let Some(f) = o.fidelity {
                row(input, o.outcome.label(), "conditional_fidelity", f)?;
            }
        }
        for (label, value) in s.pauli_set.iter() {
            row(input, "", &format!("pauli_{label}"), value)?;
        }
    }
    for p in &report.processes {
        if let (Some(fp), Some(fbar)) = (p.process_fidelity, p.average_output_fidelity) {
            row("", p.outcome.label(), "process_fidelity", fp)?;
            row("", p.outcome.label(), "average_output_fidelity", fbar)?;
        }
    }
    if let Some(v) = report.mean_process_fidelity {
        row("", "", "mean_process_fidelity", v)?;
    }
    if let Some(v) = report.mean_output_fidelity {
        row("", "", "mean_output_fidelity", v)?;
    }
    let bytes = w.into_inner().map_err(serde_err)?;
    String::from_utf8(bytes).map_err(serde_err)
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.4}"))
}

/// Plain-text table of the headline figures with the reference column.
pub fn format_summary(report: &BenchmarkReport) -> String {
    let r = &report.reference;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<32} {:>10} {:>10}",
        "metric", "simulated", "reference"
    );
    let _ = writeln!(out, "{}", "-".repeat(54));
    let mut line = |name: String, sim: Option<f64>, reference: Option<f64>| {
        let _ = writeln!(out, "{name:<32} {:>10} {:>10}", cell(sim), cell(reference));
    };
    for s in &report.states {
        let rs = r.state(s.input);
        line(
            format!("state fidelity |{}>", s.input),
            Some(s.state_fidelity),
            Some(rs.state_fidelity),
        );
    }
    for p in &report.processes {
        let rp = r.process(p.outcome);
        line(
            format!("Fp {}", p.outcome),
            p.process_fidelity,
            Some(rp.process_fidelity),
        );
    }
    for p in &report.processes {
        let rp = r.process(p.outcome);
        line(
            format!("F_avg {}", p.outcome),
            p.average_output_fidelity,
            Some(rp.average_output_fidelity),
        );
    }
    line(
        "mean Fp".into(),
        report.mean_process_fidelity,
        Some(r.mean_process_fidelity),
    );
    line(
        "mean F_avg".into(),
        report.mean_output_fidelity,
        Some(r.mean_output_fidelity),
    );
    for s in &report.states {
        if let Some(w) = &s.witness {
            let reference = (s.input == InputState::Minus).then_some(r.witness_expectation);
            line(
                format!("witness |{}>", s.input),
                Some(w.expectation),
                reference,
            );
            let reference = (s.input == InputState::Minus).then_some(r.robustness_lower_bound);
            line(
                format!("robustness bound |{}>", s.input),
                Some(w.robustness_lower_bound),
                reference,
            );
        }
    }
    for s in &report.states {
        if s.input.is_tripartite() {
            line(
                format!("tau3 upper bound |{}>", s.input),
                s.tangle_upper_bound,
                r.state(s.input).tangle,
            );
        }
    }
    out
}
