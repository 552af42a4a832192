//! TOML job specifications.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use pincode::builders::{
    capped_rm_complex, complete_relation, coxeter_relation, from_chain_complex, read_chain_complex,
    read_presentation, reed_muller_relation, single_pin_relation, steane_relation, torus_tiling,
    triangular_color_relation, Cap, ChainComplex, GroupPresentation,
};
use pincode::relation::{read_relation, PinCodeRelation};

use crate::CliError;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub relation: RelationSpec,
    #[serde(default)]
    pub code: CodeSpec,
    #[serde(default)]
    pub distance: DistanceSpec,
    #[serde(default)]
    pub transversality: TransversalitySpec,
    #[serde(default)]
    pub shrunk: ShrunkSpec,
    #[serde(default)]
    pub puncture: PunctureSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builder {
    #[default]
    Complete,
    ReedMuller,
    Capped,
    Coxeter,
    Tiling,
    Triangular,
    Steane,
    SinglePin,
    ChainFile,
    RelationFile,
    PresentationFile,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapName {
    #[default]
    None,
    Triangle,
    Square,
}

impl From<CapName> for Cap {
    fn from(c: CapName) -> Cap {
        match c {
            CapName::None => Cap::None,
            CapName::Triangle => Cap::Triangle,
            CapName::Square => Cap::Square,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    #[serde(default)]
    pub builder: Builder,
    /// Level sizes for `complete`.
    pub levels: Option<Vec<usize>>,
    /// Number of levels for `reed_muller`.
    pub m: Option<usize>,
    /// Top rank for `capped`.
    pub d: Option<usize>,
    #[serde(default)]
    pub left: CapName,
    #[serde(default)]
    pub right: CapName,
    /// Linear Coxeter diagram for `coxeter`.
    pub orders: Option<Vec<usize>>,
    #[serde(default)]
    pub split: bool,
    /// `hexagonal` or `square_octagon`.
    pub tiling: Option<String>,
    pub l1: Option<usize>,
    pub l2: Option<usize>,
    /// Input file for the `*_file` builders, relative to the spec.
    pub path: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub x: Option<usize>,
    pub z: Option<usize>,
    /// Build the CCZ code with this `x` instead of the (x, z)-pin code.
    pub ccz_x: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceSpec {
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub seed: u64,
}

fn default_mode() -> String {
    "exact".into()
}

fn default_budget() -> u64 {
    1000
}

impl Default for DistanceSpec {
    fn default() -> Self {
        Self {
            mode: default_mode(),
            budget: default_budget(),
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransversalitySpec {
    #[serde(default = "default_level")]
    pub level: usize,
}

fn default_level() -> usize {
    3
}

impl Default for TransversalitySpec {
    fn default() -> Self {
        Self { level: default_level() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShrunkSpec {
    /// Ranks of the shrinking type; defaults to `0..x`.
    #[serde(rename = "type")]
    pub type_ranks: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PunctureSpec {
    /// Use the `pinned`-pinned sets of the relation as the generator matrix.
    pub pinned: Option<usize>,
    /// Or read the generator matrix from this file.
    pub matrix: Option<PathBuf>,
    #[serde(default = "default_target_k")]
    pub target_k: usize,
    #[serde(default = "default_target_d")]
    pub target_d: usize,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub seed: u64,
}

fn default_target_k() -> usize {
    1
}

fn default_target_d() -> usize {
    2
}

impl Default for PunctureSpec {
    fn default() -> Self {
        Self {
            pinned: None,
            matrix: None,
            target_k: default_target_k(),
            target_d: default_target_d(),
            budget: default_budget(),
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
    #[serde(default = "default_format")]
    pub format: String,
}

fn default_format() -> String {
    "dense".into()
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: None,
            format: default_format(),
        }
    }
}

/// A parsed spec with its hash and the directory relative paths resolve against.
pub struct LoadedSpec {
    pub spec: JobSpec,
    pub hash: String,
    pub base: PathBuf,
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<JobSpec, CliError> {
        toml::from_str(text).map_err(|e| CliError::Spec(e.to_string()))
    }

    #[cfg(test)]
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("job specs serialize")
    }
}

pub fn load(path: &Path) -> Result<LoadedSpec, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Spec(format!("{} is not UTF-8", path.display())))?;
    let spec = JobSpec::parse(&text).map_err(|e| match e {
        CliError::Spec(m) => CliError::Spec(format!("{}: {m}", path.display())),
        other => other,
    })?;
    Ok(LoadedSpec {
        spec,
        hash: hex::encode(Sha256::digest(&bytes)),
        base: path.parent().map(Path::to_path_buf).unwrap_or_default(),
    })
}

fn need<T: Copy>(value: Option<T>, field: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Spec(format!("relation.{field} is required for this builder")))
}

fn read_text(base: &Path, path: &Option<PathBuf>) -> Result<String, CliError> {
    let path = path
        .as_ref()
        .ok_or_else(|| CliError::Spec("relation.path is required for this builder".into()))?;
    let full = base.join(path);
    std::fs::read_to_string(&full).map_err(|e| CliError::Io(format!("{}: {e}", full.display())))
}

/// The relation and, when the builder has one, its chain complex.
pub fn build_relation(loaded: &LoadedSpec) -> Result<(PinCodeRelation, Option<ChainComplex>), CliError> {
    let r = &loaded.spec.relation;
    let from_complex = |cc: ChainComplex| -> Result<_, CliError> {
        let rel = from_chain_complex(&cc, None)?;
        Ok((rel, Some(cc)))
    };
    match r.builder {
        Builder::Complete => {
            let levels = r
                .levels
                .as_ref()
                .ok_or_else(|| CliError::Spec("relation.levels is required for this builder".into()))?;
            Ok((complete_relation(levels)?, None))
        }
        Builder::ReedMuller => Ok((reed_muller_relation(need(r.m, "m")?)?, None)),
        Builder::Capped => from_complex(capped_rm_complex(r.left.into(), r.right.into(), need(r.d, "d")?)?),
        Builder::Coxeter => {
            let orders = r
                .orders
                .as_ref()
                .ok_or_else(|| CliError::Spec("relation.orders is required for this builder".into()))?;
            let p = GroupPresentation::linear_coxeter(orders)?;
            Ok((coxeter_relation(&p, r.split)?, None))
        }
        Builder::Tiling => {
            let kind = r
                .tiling
                .as_deref()
                .ok_or_else(|| CliError::Spec("relation.tiling is required for this builder".into()))?
                .parse()
                .map_err(|e: pincode::Error| CliError::Spec(e.to_string()))?;
            from_complex(torus_tiling(kind, need(r.l1, "l1")?, need(r.l2, "l2")?)?)
        }
        Builder::Triangular => Ok((triangular_color_relation(need(r.l1, "l1")?, need(r.l2, "l2")?)?, None)),
        Builder::Steane => Ok((steane_relation()?, None)),
        Builder::SinglePin => Ok((single_pin_relation()?, None)),
        Builder::ChainFile => from_complex(read_chain_complex(&read_text(&loaded.base, &r.path)?)?),
        Builder::RelationFile => Ok((read_relation(&read_text(&loaded.base, &r.path)?)?, None)),
        Builder::PresentationFile => {
            let p = read_presentation(&read_text(&loaded.base, &r.path)?)?;
            Ok((coxeter_relation(&p, r.split)?, None))
        }
    }
}
