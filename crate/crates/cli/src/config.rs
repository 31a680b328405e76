//! Job configuration files (grammar in `docs/config.md`).

use std::path::Path;
use std::sync::Arc;

use cherednik_core::expr::{parse_element, parse_scalar};
use cherednik_core::groupdata::{line_column, parse_group_data};
use cherednik_core::{CherednikAlgebra, PbwElement, ReflectionFunction, ReflectionGroup, Scalar};
use clap::ValueEnum;
use serde::Deserialize;
use thiserror::Error;

pub const DEFAULT_PRECISION: u32 = 64;
pub const DEFAULT_CUTOFF: u32 = 10;
pub const DEFAULT_LEVELS: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Reflections,
    Euler,
    VermaWeights,
    Singular,
    SimpleCharacter,
    Order,
    Blocks,
    DecompMatrix,
    Norm,
    LatticeCheck,
    WsDecompose,
    CoadmissibleCheck,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("config line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("config field `{field}`: {message}")]
    Validation { field: String, message: String },
}

fn invalid(field: &str, message: impl ToString) -> ConfigError {
    ConfigError::Validation {
        field: field.to_string(),
        message: message.to_string(),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Value {
    Int(i64),
    Text(String),
}

impl Value {
    fn text(&self) -> String {
        match self {
            Value::Int(n) => n.to_string(),
            Value::Text(s) => s.clone(),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CValues {
    One(Value),
    PerClass(Vec<Value>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    command: Option<String>,
    group: String,
    c: Option<CValues>,
    prime: Option<u64>,
    precision: Option<u32>,
    cutoff: Option<u32>,
    levels: Option<u32>,
    level: Option<u32>,
    r: Option<u32>,
    irrep: Option<String>,
    element: Option<String>,
    elements: Option<Vec<String>>,
}

/// A validated job.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub command: Option<Command>,
    pub group_spec: String,
    pub algebra: Arc<CherednikAlgebra>,
    /// c values per reflection class, as canonical text.
    pub c_text: Vec<String>,
    pub prime: Option<u64>,
    pub precision: u32,
    pub cutoff: u32,
    pub levels: u32,
    pub level: u32,
    pub r: Option<u32>,
    pub irrep: Option<String>,
    /// `element`, or one entry of `elements` per level.
    pub elements: Vec<PbwElement>,
}

fn is_builtin(spec: &str) -> bool {
    spec.starts_with("cyclic:") || spec.starts_with("dihedral:") || spec == "S3" || spec == "S4"
}

fn load_group(spec: &str, base_dir: &Path) -> Result<Arc<ReflectionGroup>, ConfigError> {
    if is_builtin(spec) {
        return ReflectionGroup::builtin(spec).map(Arc::new).map_err(|e| invalid("group", e));
    }
    let path = base_dir.join(spec);
    let text = std::fs::read_to_string(&path).map_err(|e| invalid("group", format!("{}: {e}", path.display())))?;
    parse_group_data(&text).map_err(|e| invalid("group", format!("{}: {e}", path.display())))
}

/// Parses and validates a config. Relative group-data paths resolve against
/// `base_dir`; `env_precision` replaces the default precision when the file
/// sets none.
pub fn parse_config(text: &str, base_dir: &Path, env_precision: Option<u32>) -> Result<JobConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_column(text, s.start));
        ConfigError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;

    let command = raw
        .command
        .as_deref()
        .map(|s| Command::from_str(s, false).map_err(|_| invalid("command", format!("unknown command `{s}`"))))
        .transpose()?;

    let group = load_group(&raw.group, base_dir)?;
    let conductor = group.group().conductor();
    let classes = ReflectionFunction::zero(group.reflections()).classes().len();
    let texts: Vec<String> = match &raw.c {
        None => vec!["0".to_string(); classes],
        Some(CValues::One(v)) => vec![v.text(); classes],
        Some(CValues::PerClass(vs)) => vs.iter().map(Value::text).collect(),
    };
    let values = texts
        .iter()
        .map(|t| parse_scalar(t, conductor).map_err(|e| invalid("c", format!("`{t}`: {e}"))))
        .collect::<Result<Vec<Scalar>, _>>()?;
    let c = ReflectionFunction::per_class(group.reflections(), values.clone()).map_err(|e| invalid("c", e))?;
    let algebra = Arc::new(CherednikAlgebra::new(group.clone(), c));

    if let Some(p) = raw.prime {
        cherednik_core::PadicContext::new(p, 1, conductor).map_err(|e| invalid("prime", e))?;
    }
    let precision = raw.precision.or(env_precision).unwrap_or(DEFAULT_PRECISION);
    if precision == 0 {
        return Err(invalid("precision", "must be positive"));
    }
    let cutoff = raw.cutoff.unwrap_or(DEFAULT_CUTOFF);
    if cutoff == 0 {
        return Err(invalid("cutoff", "must be positive"));
    }
    let levels = raw.levels.unwrap_or(DEFAULT_LEVELS);
    if levels == 0 {
        return Err(invalid("levels", "must be positive"));
    }
    if let Some(label) = &raw.irrep {
        if group.irrep(label).is_none() {
            let known: Vec<&str> = group.irreps().iter().map(|w| w.label()).collect();
            return Err(invalid("irrep", format!("unknown irrep `{label}` (known: {})", known.join(", "))));
        }
    }
    let elements = match (&raw.element, &raw.elements) {
        (Some(_), Some(_)) => return Err(invalid("elements", "give either `element` or `elements`")),
        (Some(e), None) => vec![parse_element(e, &algebra).map_err(|err| invalid("element", err))?],
        (None, Some(es)) => {
            if es.len() != levels as usize {
                return Err(invalid("elements", format!("expected {levels} entries, one per level")));
            }
            es.iter()
                .enumerate()
                .map(|(k, e)| parse_element(e, &algebra).map_err(|err| invalid(&format!("elements[{k}]"), err)))
                .collect::<Result<_, _>>()?
        }
        (None, None) => Vec::new(),
    };

    Ok(JobConfig {
        command,
        group_spec: raw.group,
        algebra,
        c_text: values.iter().map(Scalar::to_string).collect(),
        prime: raw.prime,
        precision,
        cutoff,
        levels,
        level: raw.level.unwrap_or(0),
        r: raw.r,
        irrep: raw.irrep,
        elements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<JobConfig, ConfigError> {
        parse_config(text, Path::new("."), None)
    }

    #[test]
    fn minimal_z2() {
        let cfg = parse("group = \"cyclic:2\"\nc = \"1/2\"\n").unwrap();
        assert_eq!(cfg.c_text, ["1/2"]);
        assert_eq!(cfg.cutoff, DEFAULT_CUTOFF);
        assert_eq!(cfg.precision, DEFAULT_PRECISION);
    }

    #[test]
    fn unknown_key_is_a_parse_error() {
        let err = parse("group = \"cyclic:2\"\nfoo = 1\n").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn s3_has_one_reflection_class() {
        assert!(parse("group = \"S3\"\nc = [\"1/3\"]\n").is_ok());
        let err = parse("group = \"S3\"\nc = [\"1/3\", \"1/2\"]\n").unwrap_err();
        assert!(matches!(err, ConfigError::Validation { ref field, .. } if field == "c"));
    }

    #[test]
    fn validation_names_the_field() {
        let cases = [
            ("group = \"cyclic:2\"\nirrep = \"std\"\n", "irrep"),
            ("group = \"cyclic:2\"\nc = \"1/\"\n", "c"),
            ("group = \"cyclic:2\"\ncutoff = 0\n", "cutoff"),
            ("group = \"cyclic:3\"\nprime = 5\n", "prime"),
            ("group = \"cyclic:2\"\nelement = \"x2\"\n", "element"),
            ("group = \"cyclic:2\"\ncommand = \"frobnicate\"\n", "command"),
            ("group = \"nonexistent.toml\"\n", "group"),
        ];
        for (text, field) in cases {
            match parse(text) {
                Err(ConfigError::Validation { field: f, .. }) => assert_eq!(f, field, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn environment_precision_is_only_a_default() {
        let cfg = parse_config("group = \"cyclic:2\"\n", Path::new("."), Some(12)).unwrap();
        assert_eq!(cfg.precision, 12);
        let cfg = parse_config("group = \"cyclic:2\"\nprecision = 30\n", Path::new("."), Some(12)).unwrap();
        assert_eq!(cfg.precision, 30);
    }

    #[test]
    fn cyclotomic_c_values() {
        let cfg = parse("group = \"cyclic:3\"\nc = [\"z\", \"1/2\"]\n").unwrap();
        assert_eq!(cfg.c_text, ["z", "1/2"]);
    }
}
