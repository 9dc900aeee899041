//! JSON run configuration.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use horn_inverse::area_reconstruction::Scenario;
use horn_inverse::forward::{AreaFunction, ObservableKind, PhysicalConstants};
use horn_inverse::io::{area_from_table, Table};
use horn_inverse::numerics::RealGrid;
use horn_inverse::phase_retrieval::SideInfo;
use horn_inverse::reference;
use horn_inverse::verify::Tolerances;
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Forward,
    Invert,
    Example,
    Verify,
}

/// Area profile for forward runs. Lengths in cm, areas in cm².
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum AreaSpec {
    /// The closed-form reference duct.
    #[default]
    Builtin,
    /// `x,area` CSV, resolved against the config file's directory.
    Table { path: PathBuf },
    Const { a0: f64, length: f64 },
    /// `A(x) = a0·exp(γx)`.
    Exp { a0: f64, gamma: f64, length: f64 },
    /// `A(x) = a0 + b·x + c·x²`.
    Quadratic { a0: f64, b: f64, c: f64, length: f64 },
}

impl AreaSpec {
    /// Samples the profile with exact end slopes; `None` for the builtin duct.
    pub fn sample(&self, n: usize, base: &Path) -> Result<Option<AreaFunction>> {
        let area = match *self {
            AreaSpec::Builtin => return Ok(None),
            AreaSpec::Table { ref path } => {
                let path = base.join(path);
                let t = Table::load(&path).with_context(|| format!("reading area table {}", path.display()))?;
                area_from_table(&t)?
            }
            AreaSpec::Const { a0, length } => AreaFunction::from_fn(length, n, |_| a0, |_| 0.0)?,
            AreaSpec::Exp { a0, gamma, length } => {
                AreaFunction::from_fn(length, n, |x| a0 * (gamma * x).exp(), |x| a0 * gamma * (gamma * x).exp())?
            }
            AreaSpec::Quadratic { a0, b, c, length } => {
                AreaFunction::from_fn(length, n, |x| a0 + b * x + c * x * x, |x| b + 2.0 * c * x)?
            }
        };
        Ok(Some(area))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KGridSpec {
    pub kmin: f64,
    pub kmax: f64,
    pub n: usize,
}

impl Default for KGridSpec {
    fn default() -> Self {
        Self { kmin: 0.02, kmax: 40.0, n: 2000 }
    }
}

impl KGridSpec {
    pub fn grid(&self) -> Result<RealGrid> {
        if !(self.kmin > 0.0 && self.kmax > self.kmin) {
            bail!("kgrid needs 0 < kmin < kmax");
        }
        Ok(RealGrid::uniform(self.kmin, self.kmax, self.n)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KindSelection {
    /// The string `"all"`.
    Keyword(String),
    List(Vec<ObservableKind>),
}

impl Default for KindSelection {
    fn default() -> Self {
        KindSelection::Keyword("all".into())
    }
}

impl KindSelection {
    pub fn kinds(&self) -> Result<Vec<ObservableKind>> {
        match self {
            KindSelection::Keyword(k) if k == "all" => Ok(ObservableKind::ALL.to_vec()),
            KindSelection::Keyword(k) => bail!("kinds must be \"all\" or a list, found \"{k}\""),
            KindSelection::List(v) if v.is_empty() => bail!("kinds list is empty"),
            KindSelection::List(v) => Ok(v.clone()),
        }
    }
}

fn schema_default() -> u32 {
    SCHEMA
}

fn x_points_default() -> usize {
    reference::DEFAULT_X_POINTS
}

fn mic_default() -> f64 {
    reference::MIC_DISTANCE
}

fn endpoint_k_default() -> [f64; 2] {
    [1.0, 2.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "schema_default")]
    pub schema: u32,
    /// Checked against the subcommand when present.
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub constants: PhysicalConstants,
    #[serde(default)]
    pub area: AreaSpec,
    /// Samples of the area profile on `[0, l]`.
    #[serde(default = "x_points_default")]
    pub x_points: usize,
    #[serde(default)]
    pub kgrid: KGridSpec,
    #[serde(default)]
    pub kinds: KindSelection,
    /// Microphone distance `r` in cm.
    #[serde(default = "mic_default")]
    pub mic_distance: f64,
    #[serde(default)]
    pub scenario: Option<Scenario>,
    /// Spectral CSV for `invert`, resolved against the config file's directory.
    #[serde(default)]
    pub data: Option<PathBuf>,
    #[serde(default)]
    pub side_info: SideInfo,
    /// Duct length for `invert`; the reference length when omitted.
    #[serde(default)]
    pub length: Option<f64>,
    /// Nodes of the kernel equations on `[0, l]`.
    #[serde(default)]
    pub inverse_x_points: Option<usize>,
    #[serde(default)]
    pub certificate_tolerance: Option<f64>,
    /// Wavenumbers used to read `A(l)`, `A′(l)` from output impedance.
    #[serde(default = "endpoint_k_default")]
    pub endpoint_k: [f64; 2],
    /// Family members to materialize: `"default"` or explicit parameter maps.
    #[serde(default)]
    pub family_members: Option<MemberSelection>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Criteria run by `verify`; all when omitted.
    #[serde(default)]
    pub criteria: Option<Vec<u8>>,
    /// Golden CSV directory for `verify`, resolved against the config file's directory.
    #[serde(default)]
    pub golden_dir: Option<PathBuf>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MemberSelection {
    /// The string `"default"`: the family's default grid.
    Keyword(String),
    List(Vec<std::collections::BTreeMap<String, f64>>),
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

impl RunConfig {
    pub fn from_json(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: RunConfig = serde_json::from_str(text).context("invalid configuration")?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_json(&text, &base).with_context(|| format!("in {}", path.display()))
    }

    fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA {
            bail!("unsupported schema {} (expected {SCHEMA})", self.schema);
        }
        PhysicalConstants::new(self.constants.c, self.constants.mu)?;
        if self.x_points < 3 {
            bail!("x_points must be at least 3");
        }
        if !(self.mic_distance > 0.0) {
            bail!("mic_distance must be positive");
        }
        if let Some(l) = self.length {
            if !(l > 0.0 && l.is_finite()) {
                bail!("length must be positive");
            }
        }
        if let Some(MemberSelection::Keyword(k)) = &self.family_members {
            if k != "default" {
                bail!("family_members must be \"default\" or a list, found \"{k}\"");
            }
        }
        self.kinds.kinds()?;
        Ok(())
    }

    pub fn check_mode(&self, mode: Mode) -> Result<()> {
        match self.mode {
            Some(m) if m != mode => bail!("configuration is for mode {m:?}, not {mode:?}"),
            _ => Ok(()),
        }
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        self.base_dir.join(p)
    }
}
