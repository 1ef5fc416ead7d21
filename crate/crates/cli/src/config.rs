//! Scenario configuration. A config file holds one scenario object, a list
//! of them, or `{"scenarios": [...]}`.

use std::path::PathBuf;

use cmv_core::scalar::{RealScalar, DEFAULT_RANK_TOL, DEFAULT_ZERO_TOL};
use cmv_core::{PatternKind, Scalar, SolvePattern, Tolerance, VerblunskySeq};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A scalar in a config or report: a real literal or a `[re, im]` pair.
/// Literals are exact rationals `"p/q"`; the float backend also accepts
/// decimals, as strings or JSON numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Real(String),
    Complex([String; 2]),
    Number(f64),
    Numbers([f64; 2]),
}

impl Num {
    pub fn from_scalar<T: Scalar>(v: &T) -> Num {
        let im = v.im();
        if im.is_zero() {
            Num::Real(v.re().to_literal())
        } else {
            Num::Complex([v.re().to_literal(), im.to_literal()])
        }
    }

    pub fn parse<T: Scalar>(&self) -> Option<T> {
        match self {
            Num::Real(re) => cmv_core::scalar::parse_complex(re, "0"),
            Num::Complex([re, im]) => cmv_core::scalar::parse_complex(re, im),
            Num::Number(re) => cmv_core::scalar::parse_complex(&re.to_string(), "0"),
            Num::Numbers([re, im]) => cmv_core::scalar::parse_complex(&re.to_string(), &im.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    #[default]
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Solve,
    VerifyIdentities,
    VerifyKernel,
    Reconstruct,
    OlpDump,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Solve => "solve",
            ScenarioKind::VerifyIdentities => "verify-identities",
            ScenarioKind::VerifyKernel => "verify-kernel",
            ScenarioKind::Reconstruct => "reconstruct",
            ScenarioKind::OlpDump => "olp-dump",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VerblunskyConfig {
    Zero,
    Constant { value: Num },
    List { values: Vec<Num> },
    /// `VerblunskySeq::random_pythagorean(length, seed)`.
    Random { length: usize, seed: u64 },
    /// `value * ratio^n`; float backend only.
    Geometric { value: Num, ratio: f64 },
}

impl VerblunskyConfig {
    pub fn build<T: Scalar>(&self) -> Result<VerblunskySeq<T>, CliError> {
        let num = |v: &Num, field: &str| {
            v.parse::<T>()
                .ok_or_else(|| CliError::invalid(field, format!("{v:?} is not a valid scalar for this backend")))
        };
        let seq = match self {
            VerblunskyConfig::Zero => Ok(VerblunskySeq::zero()),
            VerblunskyConfig::Constant { value } => VerblunskySeq::constant(num(value, "verblunsky.value")?),
            VerblunskyConfig::List { values } => {
                let parsed = values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| num(v, &format!("verblunsky.values[{i}]")))
                    .collect::<Result<Vec<T>, _>>()?;
                VerblunskySeq::list(parsed)
            }
            VerblunskyConfig::Random { length, seed } => Ok(VerblunskySeq::random_pythagorean(*length, *seed)),
            VerblunskyConfig::Geometric { value, ratio } => {
                VerblunskySeq::geometric(num(value, "verblunsky.value")?, *ratio)
            }
        };
        seq.map_err(|e| CliError::invalid("verblunsky", e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternName {
    Diagonal,
    AlmostDiagonal,
    Tridiagonal,
    AlmostTridiagonal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternConfig {
    pub kind: PatternName,
    /// Size `N0` of the full Hermitian head block (almost patterns only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub head: Option<usize>,
    /// Number `M` of rows and columns carrying unknowns.
    pub size: usize,
}

impl PatternConfig {
    pub fn build(&self) -> Result<SolvePattern, CliError> {
        let head = || {
            self.head
                .ok_or_else(|| CliError::invalid("pattern.head", "almost patterns need a head size"))
        };
        let kind = match self.kind {
            PatternName::Diagonal => PatternKind::Diagonal,
            PatternName::Tridiagonal => PatternKind::Tridiagonal,
            PatternName::AlmostDiagonal => PatternKind::AlmostDiagonal { head: head()? },
            PatternName::AlmostTridiagonal => PatternKind::AlmostTridiagonal { head: head()? },
        };
        if self.head.is_some() && matches!(self.kind, PatternName::Diagonal | PatternName::Tridiagonal) {
            return Err(CliError::invalid("pattern.head", "only almost patterns take a head size"));
        }
        SolvePattern::new(kind, self.size).map_err(|e| CliError::invalid("pattern", e.to_string()))
    }
}

/// The operand `Ω` for identity checks and reconstruction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OmegaConfig {
    Identity,
    /// `diag(0, -1, 1, -2, 2, ...)`.
    Lebesgue,
    /// `C + C†`.
    CmvSum,
    Diagonal { values: Vec<Num> },
    /// `BandMatrix::random`, or its Hermitian part when `hermitian` is set.
    Random {
        band: usize,
        seed: u64,
        #[serde(default)]
        hermitian: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct ToleranceConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<f64>,
}

impl ToleranceConfig {
    pub fn resolve(&self) -> Result<Tolerance, CliError> {
        let t = Tolerance {
            zero: self.zero.unwrap_or(DEFAULT_ZERO_TOL),
            rank: self.rank.unwrap_or(DEFAULT_RANK_TOL),
        };
        for (name, v) in [("tolerance.zero", t.zero), ("tolerance.rank", t.rank)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(CliError::invalid(name, format!("{v} must lie in (0, 1)")));
            }
        }
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Filled in from the subcommand when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ScenarioKind>,
    #[serde(default)]
    pub backend: Backend,
    pub verblunsky: VerblunskyConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<PatternConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default)]
    pub tolerance: ToleranceConfig,
    /// Evaluation point for kernel checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Num>,
    /// Off-diagonal tail `λ_k` for the kernel top-diagonal check; defaults
    /// to `λ_k = k + 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<OmegaConfig>,
    /// Order bound `r` for reconstruction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    /// Number of OLP to dump, `x_0..x_count`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| {
            self.kind.map_or("scenario", ScenarioKind::name).to_string()
        })
    }

    pub fn require_order(&self) -> Result<usize, CliError> {
        match self.order {
            Some(0) => Err(CliError::invalid("order", "must be at least 1")),
            Some(n) => Ok(n),
            None => Err(CliError::invalid("order", "required for this scenario")),
        }
    }

    /// The window to use: the explicit one, or a default sized for the
    /// scenario.
    pub fn resolved_window(&self) -> Result<usize, CliError> {
        if let Some(w) = self.window {
            return Ok(w);
        }
        let kind = self.kind.ok_or_else(|| CliError::invalid("kind", "missing"))?;
        Ok(match kind {
            ScenarioKind::Solve => {
                let p = self
                    .pattern
                    .as_ref()
                    .ok_or_else(|| CliError::invalid("pattern", "required for solve"))?;
                2 * p.size + 16
            }
            ScenarioKind::VerifyIdentities => 40,
            ScenarioKind::VerifyKernel => 30,
            ScenarioKind::Reconstruct => 48,
            ScenarioKind::OlpDump => 0,
        })
    }
}

/// The accepted shapes of a config document.
#[derive(Deserialize)]
#[serde(untagged)]
enum Document {
    Wrapped { scenarios: Vec<ScenarioConfig> },
    Many(Vec<ScenarioConfig>),
    One(Box<ScenarioConfig>),
}

pub fn parse_document(text: &str) -> Result<Vec<ScenarioConfig>, serde_json::Error> {
    Ok(match serde_json::from_str::<Document>(text) {
        Ok(Document::Wrapped { scenarios }) | Ok(Document::Many(scenarios)) => scenarios,
        Ok(Document::One(s)) => vec![*s],
        // untagged errors are vague; report the single-object error instead
        Err(_) => vec![serde_json::from_str::<ScenarioConfig>(text)?],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use cmv_core::{ExactComplex, FloatComplex};

    #[test]
    fn numbers_round_trip() {
        let v = ExactComplex::from_ratios(3, 5, -4, 5);
        let n = Num::from_scalar(&v);
        assert_eq!(n, Num::Complex(["3/5".into(), "-4/5".into()]));
        assert_eq!(n.parse::<ExactComplex>(), Some(v));
        assert_eq!(Num::Real("3/5".into()).parse::<FloatComplex>(), Some(FloatComplex::new(0.6, 0.0)));
        assert_eq!(Num::Number(0.6).parse::<ExactComplex>(), None);
    }

    #[test]
    fn exact_backend_rejects_non_pythagorean() {
        let c = VerblunskyConfig::Constant { value: Num::Real("1/2".into()) };
        assert!(matches!(c.build::<ExactComplex>(), Err(CliError::ConfigInvalid { .. })));
        assert!(c.build::<FloatComplex>().is_ok());
    }

    #[test]
    fn document_shapes() {
        let one = r#"{"verblunsky": {"kind": "zero"}, "order": 2}"#;
        assert_eq!(parse_document(one).unwrap().len(), 1);
        let many = format!("[{one}, {one}]");
        assert_eq!(parse_document(&many).unwrap().len(), 2);
        let wrapped = format!(r#"{{"scenarios": [{one}]}}"#);
        assert_eq!(parse_document(&wrapped).unwrap().len(), 1);
        let bad = r#"{"verblunsky": {"kind": "zero"}, "ordr": 2}"#;
        assert!(parse_document(bad).unwrap_err().to_string().contains("ordr"));
    }

    #[test]
    fn tolerance_defaults() {
        let t = ToleranceConfig::default().resolve().unwrap();
        assert_eq!((t.zero, t.rank), (1e-10, 1e-8));
        assert!(ToleranceConfig { zero: Some(2.0), rank: None }.resolve().is_err());
    }

    #[test]
    fn head_only_for_almost_patterns() {
        let p = PatternConfig { kind: PatternName::Diagonal, head: Some(2), size: 10 };
        assert!(p.build().is_err());
        let p = PatternConfig { kind: PatternName::AlmostTridiagonal, head: None, size: 10 };
        assert!(p.build().is_err());
        let p = PatternConfig { kind: PatternName::AlmostTridiagonal, head: Some(4), size: 40 };
        assert_eq!(p.build().unwrap().head(), 4);
    }
}
