//! Run configuration as read from JSON or assembled by the CLI.

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use schwarz_core::spaces::{NormKind, Space};
use schwarz_core::symmetric::TripleSystem;
use schwarz_core::theorems::TheoremId;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// `"all"` or an explicit list of tags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TheoremSelection {
    All,
    List(Vec<TheoremId>),
}

impl TheoremSelection {
    pub fn tags(&self) -> Vec<TheoremId> {
        match self {
            Self::All => TheoremId::ALL.to_vec(),
            Self::List(v) => v.clone(),
        }
    }
}

impl Serialize for TheoremSelection {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::All => s.serialize_str("all"),
            Self::List(v) => v.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for TheoremSelection {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Word(String),
            List(Vec<String>),
        }
        let parse = |s: &str| TheoremId::from_str(s).map_err(serde::de::Error::custom);
        match Raw::deserialize(d)? {
            Raw::Word(w) if w.eq_ignore_ascii_case("all") => Ok(Self::All),
            Raw::Word(w) => Ok(Self::List(vec![parse(&w)?])),
            Raw::List(v) => v.iter().map(|s| parse(s)).collect::<Result<_, _>>().map(Self::List),
        }
    }
}

/// A space given by name (`"disc"`, `"euclidean(2)"`, `"product(2,1)"`, ...),
/// as a triple system, or as a full space descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceSpec {
    Named(String),
    Triple(TripleSystem),
    Space(Space<f64>),
}

fn parse_args(s: &str) -> Result<Vec<f64>, ConfigError> {
    s.split(',').map(|p| p.trim().parse::<f64>().map_err(|_| ConfigError::Invalid(format!("bad number {p:?}")))).collect()
}

fn as_dim(x: f64) -> Result<usize, ConfigError> {
    if x >= 1.0 && x.fract() == 0.0 && x <= 64.0 {
        Ok(x as usize)
    } else {
        Err(ConfigError::Invalid(format!("dimension {x} must be an integer in 1..=64")))
    }
}

/// Parses names such as `euclidean(2)`, `lp(2,3)`, `product(2,1)`, `bidisc`.
pub fn parse_space_name(name: &str) -> Result<Space<f64>, ConfigError> {
    let name = name.trim().to_ascii_lowercase();
    let invalid = |m: String| ConfigError::Invalid(m);
    let (head, args) = match name.split_once('(') {
        Some((h, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(|| invalid(format!("unclosed parenthesis in {name:?}")))?;
            (h.trim().to_string(), parse_args(inner)?)
        }
        None => (name.clone(), Vec::new()),
    };
    let one_dim = |args: &[f64]| -> Result<usize, ConfigError> {
        match args {
            [d] => as_dim(*d),
            _ => Err(invalid(format!("{head} takes one dimension"))),
        }
    };
    let space = match head.as_str() {
        "disc" if args.is_empty() => Space::euclidean(1),
        "bidisc" if args.is_empty() => Space::sup(2),
        "euclidean" | "ball" | "hilbert_ball" => Space::euclidean(one_dim(&args)?),
        "sup" | "polydisc" => Space::sup(one_dim(&args)?),
        "one" | "l1" => Space::one(one_dim(&args)?),
        "real_euclidean" => Space::real_euclidean(one_dim(&args)?),
        "lp" => match args.as_slice() {
            [d, p] => Space::lp(as_dim(*d)?, *p).map_err(|e| invalid(e.to_string()))?,
            _ => return Err(invalid("lp takes a dimension and an exponent".into())),
        },
        "product" | "product_of_balls" => {
            let blocks = args.iter().map(|&b| as_dim(b)).collect::<Result<Vec<_>, _>>()?;
            Space::product(&blocks).map_err(|e| invalid(e.to_string()))?
        }
        _ => return Err(invalid(format!("unknown space {name:?}"))),
    };
    Ok(space)
}

impl SpaceSpec {
    pub fn resolve(&self) -> Result<Space<f64>, ConfigError> {
        match self {
            Self::Named(n) => parse_space_name(n),
            Self::Triple(t) => Ok(t.space()),
            Self::Space(s) => Space::new(s.dim, s.kind.clone(), s.real_restricted).map_err(|e| ConfigError::Invalid(e.to_string())),
        }
    }
}

/// The triple system whose unit ball is the ball of `space`, if any.
pub fn triple_system_of(space: &Space<f64>) -> Option<TripleSystem> {
    if space.real_restricted {
        return None;
    }
    match &space.kind {
        NormKind::Euclidean => TripleSystem::hilbert_ball(space.dim).ok(),
        NormKind::Sup => TripleSystem::polydisc(space.dim).ok(),
        NormKind::Product { blocks } => TripleSystem::product_of_balls(blocks).ok(),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateConfig {
    #[serde(default = "default_gate_derivatives")]
    pub derivatives: usize,
    #[serde(default = "default_gate_norms")]
    pub operator_norms: usize,
}

fn default_gate_derivatives() -> usize {
    1000
}

fn default_gate_norms() -> usize {
    100
}

impl Default for GateConfig {
    fn default() -> Self {
        Self { derivatives: default_gate_derivatives(), operator_norms: default_gate_norms() }
    }
}

fn default_samples() -> usize {
    100
}

fn default_degree() -> u32 {
    3
}

fn default_tolerance() -> f64 {
    1e-9
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub theorems: TheoremSelection,
    /// Domain; together with `codom` replaces the default roster.
    #[serde(default)]
    pub dom: Option<SpaceSpec>,
    #[serde(default)]
    pub codom: Option<SpaceSpec>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_degree")]
    pub degree: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub gates: GateConfig,
}

impl RunConfig {
    pub fn new(theorems: TheoremSelection) -> Self {
        Self {
            theorems,
            dom: None,
            codom: None,
            samples: default_samples(),
            degree: default_degree(),
            seed: 0,
            tolerance: default_tolerance(),
            output: None,
            gates: GateConfig::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.samples == 0 {
            return Err(ConfigError::Invalid("samples must be at least 1".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(ConfigError::Invalid(format!("tolerance {} must be positive", self.tolerance)));
        }
        if self.degree == 0 || self.degree > 12 {
            return Err(ConfigError::Invalid(format!("degree {} must lie in 1..=12", self.degree)));
        }
        if let TheoremSelection::List(v) = &self.theorems {
            if v.is_empty() {
                return Err(ConfigError::Invalid("no theorems requested".into()));
            }
        }
        if self.dom.is_some() != self.codom.is_some() {
            return Err(ConfigError::Invalid("dom and codom must be given together".into()));
        }
        if let (Some(d), Some(c)) = (&self.dom, &self.codom) {
            let d = d.resolve()?;
            c.resolve()?;
            if d.real_restricted {
                return Err(ConfigError::Invalid("the domain must be a complex space".into()));
            }
        }
        Ok(())
    }

    /// The explicit `(dom, codom)` pair, if one was given.
    pub fn spaces(&self) -> Result<Option<(Space<f64>, Space<f64>)>, ConfigError> {
        match (&self.dom, &self.codom) {
            (Some(d), Some(c)) => Ok(Some((d.resolve()?, c.resolve()?))),
            _ => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_parse() {
        assert_eq!(parse_space_name("disc").unwrap(), Space::euclidean(1));
        assert_eq!(parse_space_name("bidisc").unwrap(), Space::sup(2));
        assert_eq!(parse_space_name("product(2, 1)").unwrap(), Space::product(&[2, 1]).unwrap());
        assert_eq!(parse_space_name("lp(3,4)").unwrap(), Space::lp(3, 4.0).unwrap());
        assert!(parse_space_name("euclidean(0)").is_err());
        assert!(parse_space_name("torus").is_err());
        assert!(parse_space_name("euclidean(2").is_err());
    }

    #[test]
    fn json_forms() {
        let cfg = RunConfig::from_json(
            r#"{"theorems": ["T2_1", "t3_10"], "dom": {"kind": "product_of_balls", "blocks": [2, 1]},
                "codom": {"dim": 2, "kind": "euclidean"}, "samples": 5, "seed": 9}"#,
        )
        .unwrap();
        assert_eq!(cfg.theorems, TheoremSelection::List(vec![TheoremId::T2_1, TheoremId::T3_10]));
        let (d, c) = cfg.spaces().unwrap().unwrap();
        assert_eq!(d, Space::product(&[2, 1]).unwrap());
        assert_eq!(c, Space::euclidean(2));
        assert_eq!(cfg.tolerance, 1e-9);
        let all = RunConfig::from_json(r#"{"theorems": "all"}"#).unwrap();
        assert_eq!(all.theorems.tags().len(), 24);
        assert_eq!(serde_json::to_value(&all.theorems).unwrap(), "all");
    }

    #[test]
    fn invalid_configs() {
        for bad in [
            r#"{"theorems": ["T9_9"]}"#,
            r#"{"theorems": "all", "samples": 0}"#,
            r#"{"theorems": "all", "tolerance": -1}"#,
            r#"{"theorems": "all", "dom": "disc"}"#,
            r#"{"theorems": "all", "dom": "real_euclidean(1)", "codom": "disc"}"#,
            r#"{"theorems": "all", "colour": 3}"#,
            r#"{"theorems": []}"#,
        ] {
            assert!(RunConfig::from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn triple_systems_from_spaces() {
        assert_eq!(triple_system_of(&Space::euclidean(3)), Some(TripleSystem::hilbert_ball(3).unwrap()));
        assert_eq!(triple_system_of(&Space::sup(2)), Some(TripleSystem::polydisc(2).unwrap()));
        assert_eq!(triple_system_of(&Space::one(2)), None);
    }
}
