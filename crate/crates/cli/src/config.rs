use std::path::{Path, PathBuf};

use serde::Deserialize;
use spinwreath_core::{builtin, load_gamma, Builtin, GammaData, VirtualChar};

use crate::error::CliError;

/// Settings read from the optional TOML config file. Flags override every field.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub gamma: Option<String>,
    pub n: Option<usize>,
    pub xi: Option<String>,
    pub degree: Option<usize>,
    pub window: Option<i64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XiSpec {
    Standard,
    Mckay(Option<String>),
    Explicit(Vec<i64>),
}

impl XiSpec {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        match s {
            "standard" => return Ok(XiSpec::Standard),
            "mckay" => return Ok(XiSpec::Mckay(None)),
            _ => {}
        }
        if let Some(pi) = s.strip_prefix("mckay:") {
            return Ok(XiSpec::Mckay(Some(pi.trim().to_string())));
        }
        s.split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map(XiSpec::Explicit)
            .map_err(|_| CliError::Config(format!("xi must be 'standard', 'mckay', 'mckay:<char>' or an integer vector, got {s:?}")))
    }

    pub fn resolve(&self, g: &GammaData) -> Result<VirtualChar, CliError> {
        let k = g.num_classes();
        let xi = match self {
            XiSpec::Standard => VirtualChar::standard(k),
            XiSpec::Mckay(None) => g.mckay_xi(None)?,
            XiSpec::Mckay(Some(pi)) => {
                let i = g
                    .char_index(pi)
                    .or_else(|| pi.parse().ok())
                    .ok_or_else(|| CliError::Config(format!("unknown character {pi:?}")))?;
                g.mckay_xi(Some(i))?
            }
            XiSpec::Explicit(v) => {
                if v.len() != k {
                    return Err(CliError::Config(format!("xi has {} entries, {} has {k} characters", v.len(), g.name)));
                }
                VirtualChar { coeffs: v.clone() }
            }
        };
        if !xi.is_self_dual(g) {
            return Err(CliError::Config(format!("xi {:?} is not self-dual", xi.coeffs)));
        }
        Ok(xi)
    }
}

/// Either a built-in group with its concrete elements or character data loaded from a file.
pub enum GammaSource {
    Builtin(Builtin),
    File(GammaData),
}

impl GammaSource {
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        match builtin(spec) {
            Ok(b) => Ok(GammaSource::Builtin(b)),
            Err(builtin_err) => {
                let path = Path::new(spec);
                if !path.exists() {
                    return Err(CliError::Config(format!("{builtin_err}; no file at {spec:?}")));
                }
                let bytes = std::fs::read(path).map_err(|e| CliError::Config(format!("{spec}: {e}")))?;
                Ok(GammaSource::File(load_gamma(&bytes)?))
            }
        }
    }

    pub fn data(&self) -> &GammaData {
        match self {
            GammaSource::Builtin(b) => &b.data,
            GammaSource::File(g) => g,
        }
    }

    pub fn builtin(&self) -> Option<&Builtin> {
        match self {
            GammaSource::Builtin(b) => Some(b),
            GammaSource::File(_) => None,
        }
    }
}

/// Merged configuration for one run.
pub struct RunConfig {
    pub gamma: GammaSource,
    pub n: Option<usize>,
    pub xi: Option<XiSpec>,
    pub degree: Option<usize>,
    pub window: Option<i64>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

/// Flags shared by every subcommand.
#[derive(Debug, Default, clap::Args)]
pub struct CommonArgs {
    /// Built-in group name (trivial, cyclic:k, klein4, quaternion8) or path to a group document.
    #[arg(long)]
    pub gamma: Option<String>,
    /// Rank of the wreath product.
    #[arg(long)]
    pub n: Option<usize>,
    /// Weight character: standard, mckay, mckay:<char>, or comma separated integers.
    #[arg(long)]
    pub xi: Option<String>,
    /// Fock degree bound for relation checks.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Mode window for relation checks.
    #[arg(long)]
    pub window: Option<i64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the document here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn merge(flags: CommonArgs, file: FileConfig) -> Result<Self, CliError> {
        let gamma = flags.gamma.or(file.gamma).ok_or_else(|| CliError::Config("--gamma is required".into()))?;
        let xi = flags.xi.or(file.xi).map(|s| XiSpec::parse(&s)).transpose()?;
        Ok(RunConfig {
            gamma: GammaSource::parse(&gamma)?,
            n: flags.n.or(file.n),
            xi,
            degree: flags.degree.or(file.degree),
            window: flags.window.or(file.window),
            format: flags.format.or(file.format).unwrap_or_default(),
            output: flags.output.or(file.output),
        })
    }

    pub fn require_n(&self) -> Result<usize, CliError> {
        self.n.ok_or_else(|| CliError::Config("--n is required".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xi_specs() {
        assert_eq!(XiSpec::parse("standard").unwrap(), XiSpec::Standard);
        assert_eq!(XiSpec::parse("mckay:1").unwrap(), XiSpec::Mckay(Some("1".into())));
        assert_eq!(XiSpec::parse("2, -1,-1").unwrap(), XiSpec::Explicit(vec![2, -1, -1]));
        assert!(XiSpec::parse("bogus").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file: FileConfig = toml::from_str("gamma = \"cyclic:2\"\nn = 3\nformat = \"csv\"").unwrap();
        let flags = CommonArgs { n: Some(2), ..Default::default() };
        let cfg = RunConfig::merge(flags, file).unwrap();
        assert_eq!(cfg.n, Some(2));
        assert_eq!(cfg.format, Format::Csv);
        assert_eq!(cfg.gamma.data().num_classes(), 2);
    }

    #[test]
    fn non_self_dual_xi_rejected() {
        let g = builtin("cyclic:3").unwrap().data;
        assert!(XiSpec::Explicit(vec![0, 1, 0]).resolve(&g).is_err());
        assert!(XiSpec::Explicit(vec![2, -1, -1]).resolve(&g).is_ok());
    }
}
