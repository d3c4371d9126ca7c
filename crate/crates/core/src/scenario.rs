//! Serialized scenario description shared by the CLI and the HTTP service.
//!
//! Field names are the canonical wire names; unknown fields are rejected.

use serde::{Deserialize, Serialize};

use crate::ces::{validate_params, CesParams, EconomicProblem, Prices};
use crate::pareto::{GridScale, GridSpec, SweepSpec, DEFAULT_NODE_CAP};
use crate::quanta::PreferencePair;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CesSection {
    #[serde(rename = "F")]
    pub tfp: f64,
    pub a: f64,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriceSection {
    #[serde(rename = "pK")]
    pub capital: f64,
    #[serde(rename = "pL")]
    pub labor: f64,
    #[serde(rename = "pQ")]
    pub output: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumSection {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
}

impl QuantumSection {
    pub fn weights(&self) -> [f64; 3] {
        [self.w1, self.w2, self.w3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct GridSection {
    pub k_min: f64,
    pub k_max: f64,
    pub l_min: f64,
    pub l_max: f64,
    #[serde(rename = "nK")]
    pub n_k: usize,
    #[serde(rename = "nL")]
    pub n_l: usize,
    pub scale: GridScale,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_nodes: Option<usize>,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            k_min: 0.1,
            k_max: 10.0,
            l_min: 0.1,
            l_max: 10.0,
            n_k: 100,
            n_l: 100,
            scale: GridScale::Logarithmic,
            max_nodes: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" => Ok(OutputFormat::Jsonl),
            other => Err(format!("unknown format {other:?} (expected csv or jsonl)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: String,
    pub format: OutputFormat,
}

/// Everything a computation needs; the request body of the service.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub ces: CesSection,
    pub prices: PriceSection,
    pub quantum1: QuantumSection,
    pub quantum2: QuantumSection,
    pub grid: GridSection,
    pub sweep: SweepSection,
}

/// A run configuration file: a scenario plus where to write results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub ces: CesSection,
    pub prices: PriceSection,
    pub quantum1: QuantumSection,
    pub quantum2: QuantumSection,
    pub grid: GridSection,
    pub sweep: SweepSection,
    pub output: OutputSection,
}

impl ScenarioConfig {
    pub fn spec(&self) -> ScenarioSpec {
        ScenarioSpec {
            ces: self.ces,
            prices: self.prices,
            quantum1: self.quantum1,
            quantum2: self.quantum2,
            grid: self.grid,
            sweep: self.sweep,
        }
    }

    /// The bundled example: unit prices, `a = 0.5`, `r = 1`, weights
    /// `(2, 2, 1)` and `(1, 1, 3)` with confidences 0.8 and 0.5.
    pub fn sample() -> Self {
        Self {
            ces: CesSection {
                tfp: 1.0,
                a: 0.5,
                r: 1.0,
            },
            prices: PriceSection {
                capital: 1.0,
                labor: 1.0,
                output: 1.0,
            },
            quantum1: QuantumSection {
                w1: 2.0,
                w2: 2.0,
                w3: 1.0,
                mu: Some(0.8),
            },
            quantum2: QuantumSection {
                w1: 1.0,
                w2: 1.0,
                w3: 3.0,
                mu: Some(0.5),
            },
            grid: GridSection::default(),
            sweep: SweepSection {
                samples: 500,
                seed: 42,
            },
            output: OutputSection {
                dir: "out".into(),
                format: OutputFormat::Csv,
            },
        }
    }
}

/// One failed field check, addressed by its dotted wire path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldViolation {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for FieldViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Validated, typed form of a [`ScenarioSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub problem: EconomicProblem<f64>,
    pub pair: PreferencePair<f64>,
    pub grid: GridSpec<f64>,
    pub sweep: SweepSpec,
}

fn violation(field: &str, message: impl Into<String>) -> FieldViolation {
    FieldViolation {
        field: field.into(),
        message: message.into(),
    }
}

impl ScenarioSpec {
    /// Checks every field invariant, reporting all failures at once.
    ///
    /// Preference consistency is not checked here; see [`PreferencePair::consistency`].
    pub fn build(&self) -> Result<Scenario, Vec<FieldViolation>> {
        let mut violations = Vec::new();

        let params = CesParams {
            tfp: self.ces.tfp,
            share: self.ces.a,
            substitution: self.ces.r,
        };
        let prices = Prices {
            capital: self.prices.capital,
            labor: self.prices.labor,
            output: self.prices.output,
        };
        for v in validate_params(&params, &prices).violations {
            let section = if v.name.starts_with('p') {
                "prices"
            } else {
                "ces"
            };
            violations.push(violation(section, v.name));
        }

        let pair = PreferencePair::new(
            self.quantum1.weights(),
            self.quantum1.mu,
            self.quantum2.weights(),
            self.quantum2.mu,
        );
        if pair.is_err() {
            for (name, q) in [("quantum1", &self.quantum1), ("quantum2", &self.quantum2)] {
                if q.weights().iter().any(|w| !(*w > 0.0 && w.is_finite())) {
                    violations.push(violation(name, "weights must be positive"));
                }
                if q.mu.is_some_and(|mu| !(0.0..=1.0).contains(&mu)) {
                    violations.push(violation(name, "mu must lie in [0, 1]"));
                }
            }
        }

        let g = &self.grid;
        let grid = GridSpec::with_cap(
            (g.k_min, g.k_max),
            (g.l_min, g.l_max),
            (g.n_k, g.n_l),
            g.scale,
            g.max_nodes.unwrap_or(DEFAULT_NODE_CAP),
        );
        if let Err(e) = &grid {
            violations.push(violation("grid", e.to_string()));
        }
        let sweep = SweepSpec::new(self.sweep.samples, self.sweep.seed);
        if let Err(e) = &sweep {
            violations.push(violation("sweep", e.to_string()));
        }

        if !violations.is_empty() {
            return Err(violations);
        }
        Ok(Scenario {
            problem: EconomicProblem { params, prices },
            pair: pair.expect("checked above"),
            grid: grid.expect("checked above"),
            sweep: sweep.expect("checked above"),
        })
    }
}
