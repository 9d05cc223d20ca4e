//! TOML run configuration, presets and command-line overrides.

use serde::Deserialize;
use shintani_core::exact::{int, parse_rational};
use shintani_core::linalg::QMatrix;
use shintani_core::test_functions::{AffineLatticeTerm, TestFunction};
use shintani_core::{QVec, Rational};
use thiserror::Error;

#[derive(Debug, Error)]
#[error("{message}")]
pub struct ConfigError {
    pub message: String,
    pub line: Option<usize>,
}

impl ConfigError {
    pub fn new(message: impl Into<String>) -> Self {
        ConfigError { message: message.into(), line: None }
    }

    pub fn at(mut self, line: Option<usize>) -> Self {
        self.line = self.line.or(line);
        self
    }
}

pub type ConfigResult<T> = std::result::Result<T, ConfigError>;

/// An integer or a rational written as `"a/b"`.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn to_rational(&self) -> ConfigResult<Rational> {
        match self {
            Num::Int(n) => Ok(int(*n)),
            Num::Text(s) => parse_rational(s).ok_or_else(|| ConfigError::new(format!("not a rational number: {s:?}"))),
        }
    }
}

fn qvec(v: &[Num]) -> ConfigResult<QVec> {
    v.iter().map(Num::to_rational).collect()
}

fn qmatrix_rows(rows: &[Vec<Num>]) -> ConfigResult<QMatrix> {
    let rows: Vec<QVec> = rows.iter().map(|r| qvec(r)).collect::<ConfigResult<_>>()?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(ConfigError::new("matrices must be square and nonempty"));
    }
    Ok(QMatrix::from_rows(rows))
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Riemann,
    Hurwitz,
    RqField,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub preset: Option<Preset>,
    pub k: Option<Vec<u32>>,
    pub ell: Option<u64>,
    pub function: Option<FunctionConfig>,
    pub cone: Option<ConeConfig>,
    pub hurwitz: Option<HurwitzConfig>,
    pub field: Option<FieldConfig>,
    pub hill: Option<HillConfig>,
    pub level: Option<LevelConfig>,
    pub precision: Option<PrecisionConfig>,
    #[serde(default)]
    pub points: Vec<PointConfig>,
}

/// `Σ coeff·[offset + lattice·ℤⁿ]`; lattice given by rows.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionConfig {
    pub terms: Vec<TermConfig>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    #[serde(default = "one")]
    pub coeff: i64,
    pub offset: Vec<Num>,
    pub lattice: Vec<Vec<Num>>,
}

fn one() -> i64 {
    1
}

/// A single open cone, or a weighted sum of them.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeConfig {
    pub generators: Option<Vec<Vec<Num>>>,
    #[serde(default)]
    pub terms: Vec<WeightedCone>,
    #[serde(default)]
    pub constant: i64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedCone {
    pub weight: i64,
    pub generators: Vec<Vec<Num>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HurwitzConfig {
    pub a: Num,
    pub f: Num,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub d: i64,
    /// Positive integer `n` for the conductor `(n)`.
    #[serde(default = "one")]
    pub conductor: i64,
    #[serde(default)]
    pub m: u32,
    /// Indices into the list of class representatives; all classes if absent.
    pub classes: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HillConfig {
    pub alphas: Vec<Vec<Vec<Num>>>,
    pub w: Option<Vec<Vec<Num>>>,
    #[serde(default)]
    pub points: Vec<Vec<Num>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct LevelConfig {
    pub kind: LevelKind,
    #[serde(default)]
    pub m: u32,
    pub offset: Option<Vec<i64>>,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum LevelKind {
    Full,
    Units,
    Coset,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrecisionConfig {
    pub p: Option<u64>,
    #[serde(rename = "M")]
    pub m: Option<u32>,
    pub caps: Option<Vec<u32>>,
    pub cutoff: Option<u32>,
}

/// A point `(s, branch)` of weight space.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointConfig {
    pub s: Num,
    #[serde(default)]
    pub branch: u64,
}

/// Values taken from the command line, applied over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub preset: Option<Preset>,
    pub k: Option<Vec<u32>>,
    pub p: Option<u64>,
    pub prec: Option<u32>,
    pub caps: Option<Vec<u32>>,
    pub cutoff: Option<u32>,
    pub ell: Option<u64>,
}

/// Parsed configuration with the source text kept for line diagnostics.
#[derive(Clone, Debug, Default)]
pub struct Loaded {
    pub config: RunConfig,
    pub source: String,
}

impl Loaded {
    pub fn parse(source: &str) -> ConfigResult<Self> {
        let config: RunConfig = toml::from_str(source).map_err(|e| {
            let line = e.span().map(|s| line_of_offset(source, s.start));
            ConfigError::new(e.message().to_string()).at(line)
        })?;
        Ok(Loaded { config, source: source.to_string() })
    }

    pub fn apply(&mut self, o: &Overrides) {
        let c = &mut self.config;
        if o.preset.is_some() {
            c.preset = o.preset;
        }
        if o.k.is_some() {
            c.k = o.k.clone();
        }
        if o.ell.is_some() {
            c.ell = o.ell;
        }
        if o.p.is_some() || o.prec.is_some() || o.caps.is_some() || o.cutoff.is_some() {
            let pr = c.precision.get_or_insert_with(PrecisionConfig::default);
            if o.p.is_some() {
                pr.p = o.p;
            }
            if o.prec.is_some() {
                pr.m = o.prec;
            }
            if o.caps.is_some() {
                pr.caps = o.caps.clone();
            }
            if o.cutoff.is_some() {
                pr.cutoff = o.cutoff;
            }
        }
    }

    /// Line of the first `key = …` assignment in the file.
    pub fn line_of(&self, key: &str) -> Option<usize> {
        self.source.lines().position(|l| {
            let t = l.trim_start();
            t.strip_prefix(key).is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map(|i| i + 1)
    }

    pub fn err(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError::new(message).at(self.line_of(key))
    }

    pub fn ks(&self) -> Vec<u32> {
        self.config.k.clone().unwrap_or_else(|| vec![0, 1])
    }

    /// `(p, M)`; mandatory for the p-adic tasks.
    pub fn precision(&self) -> ConfigResult<(u64, u32)> {
        let pr = self.config.precision.as_ref();
        let p = pr.and_then(|x| x.p).ok_or_else(|| ConfigError::new("precision block required: missing p"))?;
        let m = pr.and_then(|x| x.m).ok_or_else(|| ConfigError::new("precision block required: missing M"))?;
        if !shintani_core::padic::is_prime(p) {
            return Err(self.err("p", format!("p = {p} is not prime")));
        }
        if m == 0 {
            return Err(self.err("M", "M must be positive"));
        }
        Ok((p, m))
    }

    pub fn caps(&self) -> Option<Vec<u32>> {
        self.config.precision.as_ref().and_then(|x| x.caps.clone())
    }

    pub fn cutoff(&self) -> Option<u32> {
        self.config.precision.as_ref().and_then(|x| x.cutoff)
    }

    pub fn test_function(&self) -> ConfigResult<TestFunction> {
        let fc = self.config.function.as_ref().ok_or_else(|| ConfigError::new("missing [function] table"))?;
        let mut terms = Vec::new();
        let mut dim = None;
        for t in &fc.terms {
            let offset = qvec(&t.offset)?;
            let lattice = qmatrix_rows(&t.lattice)?;
            if *dim.get_or_insert(offset.len()) != offset.len() {
                return Err(self.err("offset", "all terms must have the same dimension"));
            }
            terms.push(AffineLatticeTerm::new(t.coeff, offset, lattice).map_err(|e| self.err("lattice", e.to_string()))?);
        }
        let dim = dim.ok_or_else(|| self.err("terms", "[function] needs at least one term"))?;
        TestFunction::from_terms(dim, terms).map_err(|e| ConfigError::new(e.to_string()))
    }

    pub fn cone_function(&self) -> ConfigResult<shintani_core::cones::ConeFunction> {
        use shintani_core::cones::{ConeFunction, OpenCone};
        let cc = self.config.cone.as_ref().ok_or_else(|| ConfigError::new("missing [cone] table"))?;
        let cone = |gens: &[Vec<Num>]| -> ConfigResult<OpenCone> {
            let g: Vec<QVec> = gens.iter().map(|v| qvec(v)).collect::<ConfigResult<_>>()?;
            OpenCone::new(g).map_err(|e| self.err("generators", e.to_string()))
        };
        let mut terms = Vec::new();
        if let Some(g) = &cc.generators {
            terms.push((1, cone(g)?));
        }
        for t in &cc.terms {
            terms.push((t.weight, cone(&t.generators)?));
        }
        if terms.is_empty() {
            return Err(self.err("generators", "[cone] needs generators or terms"));
        }
        Ok(ConeFunction::new(terms, cc.constant))
    }

    pub fn hurwitz(&self) -> ConfigResult<(Rational, Rational)> {
        let h = self.config.hurwitz.as_ref().ok_or_else(|| ConfigError::new("hurwitz preset needs a [hurwitz] table with a and f"))?;
        let (a, f) = (h.a.to_rational()?, h.f.to_rational()?);
        if f <= int(0) || a <= int(0) || a > f {
            return Err(self.err("a", "hurwitz preset needs 0 < a ≤ f"));
        }
        Ok((a, f))
    }
}

pub fn line_of_offset(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())].matches('\n').count() + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_and_lines() {
        let src = "preset = \"hurwitz\"\nk = [1]\n\n[hurwitz]\na = 1\nf = \"3\"\n";
        let l = Loaded::parse(src).unwrap();
        assert_eq!(l.config.preset, Some(Preset::Hurwitz));
        assert_eq!(l.hurwitz().unwrap(), (int(1), int(3)));
        assert_eq!(l.line_of("f"), Some(6));
    }

    #[test]
    fn unknown_keys_report_a_line() {
        let err = Loaded::parse("k = [0]\nbogus = 1\n").unwrap_err();
        assert_eq!(err.line, Some(2));
    }

    #[test]
    fn overrides_create_the_precision_block() {
        let mut l = Loaded::default();
        l.apply(&Overrides { p: Some(3), prec: Some(6), ..Default::default() });
        assert_eq!(l.precision().unwrap(), (3, 6));
        assert!(Loaded::default().precision().is_err());
    }
}
