//! Run configuration: JSON ingestion, validation and canonical re-emission.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use tropkp_core::scalar::{format_rational, parse_rational};
use tropkp_core::{
    alpha_from_divisor, beta_from_lambda, psi, Component, Divisor, HirotaPoint, KappaConfig, Scalar, VertexChoice,
};

use crate::CliError;

/// One of the three equivalent parametrizations of a point of the Hirota variety.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parametrization {
    Beta(Vec<String>),
    Lambda(Vec<String>),
    Divisor(DivisorSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorSpec {
    pub points: Vec<String>,
    pub split_k: usize,
    #[serde(default = "default_component")]
    pub p0_component: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub genus: usize,
    pub kappas: Vec<String>,
    pub class_k: usize,
    #[serde(default = "default_choice")]
    pub vertex_choice: String,
    pub parametrization: Parametrization,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_component() -> String {
    "X+".into()
}

fn default_choice() -> String {
    "v1".into()
}

fn default_samples() -> usize {
    20
}

fn default_tolerance() -> f64 {
    1e-8
}

/// Parameters of a validated [`RunConfig`].
#[derive(Clone, Debug)]
pub enum Params {
    Beta(Vec<Scalar>),
    Lambda(Vec<Scalar>),
    Divisor(Divisor),
}

/// A validated configuration with exact values.
#[derive(Clone, Debug)]
pub struct Validated {
    pub kc: KappaConfig,
    pub class_k: usize,
    pub choice: VertexChoice,
    pub params: Params,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn parse_all(values: &[String], name: &str, expected: usize) -> Result<Vec<Scalar>, CliError> {
    if values.len() != expected {
        return Err(invalid(format!("{name} has {} entries, expected {expected}", values.len())));
    }
    values.iter().map(|s| parse_rational(s).map_err(CliError::from)).collect()
}

fn canonical(values: &[Scalar]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| invalid(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<Validated, CliError> {
        let g = self.genus;
        if g == 0 {
            return Err(invalid("genus must be at least 1"));
        }
        let kc = KappaConfig::new(parse_all(&self.kappas, "kappas", g + 1)?)?;
        if self.class_k == 0 || self.class_k > g {
            return Err(invalid(format!("class_k={} out of range 1..={g}", self.class_k)));
        }
        let choice: VertexChoice = self.vertex_choice.parse()?;
        let params = match &self.parametrization {
            Parametrization::Beta(b) => Params::Beta(parse_all(b, "beta", g)?),
            Parametrization::Lambda(l) => Params::Lambda(parse_all(l, "lambda", g)?),
            Parametrization::Divisor(d) => {
                let points = parse_all(&d.points, "divisor points", g)?;
                let component: Component = d.p0_component.parse()?;
                let expected = match choice {
                    VertexChoice::V1 => d.split_k,
                    VertexChoice::V2 => (g + 1).saturating_sub(d.split_k),
                };
                if expected != self.class_k {
                    return Err(invalid(format!(
                        "divisor split_k={} gives class {expected} at {choice}, config says class_k={}",
                        d.split_k, self.class_k
                    )));
                }
                let div = Divisor::new(points, d.split_k, component)?;
                div.validate(&kc)?;
                Params::Divisor(div)
            }
        };
        if !self.tolerance.is_finite() || self.tolerance < 0.0 {
            return Err(invalid("tolerance must be a finite non-negative number"));
        }
        Ok(Validated {
            kc,
            class_k: self.class_k,
            choice,
            params,
            samples: self.samples,
            seed: self.seed,
            tolerance: self.tolerance,
        })
    }

    /// The same configuration with every rational in canonical `p/q` form.
    pub fn canonicalize(&self) -> Result<Self, CliError> {
        let v = self.validate()?;
        let parametrization = match &v.params {
            Params::Beta(b) => Parametrization::Beta(canonical(b)),
            Params::Lambda(l) => Parametrization::Lambda(canonical(l)),
            Params::Divisor(d) => Parametrization::Divisor(DivisorSpec {
                points: canonical(&d.points),
                split_k: d.split_k,
                p0_component: d.p0_component.to_string(),
            }),
        };
        Ok(Self {
            kappas: canonical(v.kc.kappas()),
            vertex_choice: v.choice.to_string(),
            parametrization,
            ..self.clone()
        })
    }
}

impl Validated {
    pub fn hirota_point(&self) -> Result<HirotaPoint, CliError> {
        Ok(match &self.params {
            Params::Beta(b) => psi(&self.kc, b, self.class_k, self.choice)?,
            Params::Lambda(l) => {
                let beta = beta_from_lambda(&self.kc, l, self.class_k)?;
                psi(&self.kc, &beta, self.class_k, self.choice)?
            }
            Params::Divisor(d) => alpha_from_divisor(&self.kc, d, self.choice)?,
        })
    }

    /// Seeded sample points in `[-1, 1]^3`.
    pub fn sample_points(&self) -> Vec<[f64; 3]> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.samples).map(|_| [0, 1, 2].map(|_| rng.gen_range(-1.0..=1.0))).collect()
    }
}
