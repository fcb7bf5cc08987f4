//! Run configuration: JSON file, command-line overrides, validation.

use std::path::PathBuf;

use hbarcon::dirac::HbarMode;
use hbarcon::{parse, Ctx, GradedPolynomial, Scalar, SymplecticContext};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Hermite level of the test state.
    pub level: usize,
    pub nq: usize,
    pub np: usize,
    /// Half-width of the square domain; chosen from the state when absent.
    pub half_width: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            level: 0,
            nq: 1025,
            np: 129,
            half_width: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    /// Rows of `ω^{ab}` as exact numbers; the standard block form when absent.
    pub omega: Option<Vec<Vec<String>>>,
    pub hamiltonian: Option<String>,
    /// `"symbolic"` or a positive number.
    pub hbar: String,
    /// Truncation order in `ħ`; untruncated when absent.
    pub order: Option<u32>,
    pub ghosts: bool,
    pub observables: Vec<String>,
    pub max_stages: usize,
    /// `ξ_a` coefficients folded into `H̃` before the iteration.
    pub xi: Option<Vec<String>>,
    /// Degree bound of the test basis for `coeffs` and `compare`.
    pub basis_degree: Option<u32>,
    pub grid: GridConfig,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 1,
            omega: None,
            hamiltonian: None,
            hbar: "symbolic".into(),
            order: None,
            ghosts: false,
            observables: Vec::new(),
            max_stages: 8,
            xi: None,
            basis_degree: None,
            grid: GridConfig::default(),
            out: None,
            format: Format::Json,
        }
    }
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Parse `text` as an exact number.
fn number(text: &str, what: &str) -> Result<Scalar, CliError> {
    let ctx = SymplecticContext::standard(1).expect("n = 1 is valid");
    let p = parse(text, &ctx).map_err(|e| config_error(format!("{what}: {e}")))?;
    p.as_constant()
        .ok_or_else(|| config_error(format!("{what}: `{text}` is not a number")))
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| config_error(format!("config file: {e}")))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.context()?;
        self.hbar_mode()?;
        if self.max_stages == 0 {
            return Err(config_error("max_stages must be at least 1"));
        }
        if self.grid.nq < 5 || self.grid.np < 5 {
            return Err(config_error("grid needs at least 5 points per axis"));
        }
        if let Some(w) = self.grid.half_width {
            if !(w > 0.0 && w.is_finite()) {
                return Err(config_error("grid half_width must be positive"));
            }
        }
        Ok(())
    }

    pub fn context(&self) -> Result<Ctx, CliError> {
        let ctx = match &self.omega {
            None => SymplecticContext::standard(self.n),
            Some(rows) => {
                let mut m = Vec::new();
                for row in rows {
                    let mut r = Vec::new();
                    for entry in row {
                        r.push(number(entry, "omega")?);
                    }
                    m.push(r);
                }
                SymplecticContext::with_omega(self.n, m)
            }
        };
        ctx.map_err(|e| config_error(e.to_string()))
    }

    pub fn hbar_mode(&self) -> Result<HbarMode, CliError> {
        if self.hbar == "symbolic" {
            return Ok(HbarMode::Symbolic);
        }
        let v = number(&self.hbar, "hbar")?;
        if !v.is_real() || v.is_zero() || v.is_negative_lead() {
            return Err(config_error(format!("hbar must be positive, got {}", self.hbar)));
        }
        Ok(HbarMode::Numeric(v))
    }

    /// Numeric `ħ` for floating-point runs; 1 when symbolic.
    pub fn hbar_f64(&self) -> Result<f64, CliError> {
        Ok(match self.hbar_mode()? {
            HbarMode::Symbolic => 1.0,
            HbarMode::Numeric(v) => v.to_f64_pair().0,
        })
    }

    pub fn hamiltonian(&self, ctx: &Ctx) -> Result<GradedPolynomial, CliError> {
        let text = self
            .hamiltonian
            .as_deref()
            .ok_or_else(|| config_error("missing hamiltonian (--hamiltonian)"))?;
        expression(text, ctx, "hamiltonian")
    }

    pub fn observables(&self, ctx: &Ctx) -> Result<Vec<GradedPolynomial>, CliError> {
        self.observables
            .iter()
            .map(|o| expression(o, ctx, "observable"))
            .collect()
    }

    pub fn xi(&self, ctx: &Ctx) -> Result<Option<Vec<GradedPolynomial>>, CliError> {
        self.xi
            .as_ref()
            .map(|list| list.iter().map(|x| expression(x, ctx, "xi")).collect())
            .transpose()
    }
}

pub fn expression(text: &str, ctx: &Ctx, what: &str) -> Result<GradedPolynomial, CliError> {
    parse(text, ctx).map_err(|e| CliError::Expression {
        what: what.to_string(),
        text: text.to_string(),
        source: e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn json_round_trip() {
        let cfg = RunConfig {
            hamiltonian: Some("1/2*p^2 + 1/2*q^2".into()),
            observables: vec!["q".into(), "p".into()],
            ..RunConfig::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_json(&text).unwrap(), cfg);
        let partial = RunConfig::from_json(r#"{"hamiltonian": "q^2", "hbar": "0.5"}"#).unwrap();
        assert_eq!(partial.n, 1);
        assert_eq!(partial.hbar_f64().unwrap(), 0.5);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = RunConfig {
            hbar: "-1".into(),
            ..RunConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = RunConfig {
            omega: Some(vec![vec!["0".into(), "1".into()], vec!["1".into(), "0".into()]]),
            ..RunConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(RunConfig::from_json(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn expression_errors_carry_offsets() {
        let ctx = SymplecticContext::standard(1).unwrap();
        let err = expression("q^-1", &ctx, "observable").unwrap_err();
        assert!(err.to_string().contains("byte 2"), "{err}");
    }
}
