use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::series::{ClassFilter, Mutation};
use crate::spectral::{GridSpec, InitialKind};
use crate::suite::Family;
use crate::treelib::{TreeClassParams, DEFAULT_DEPTH_CEILING, DEFAULT_SIZE_CEILING};

/// Environment variable that overrides `[output] dir`.
pub const OUT_DIR_ENV: &str = "NSTREES_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    /// `K`
    pub cutoff: f64,
    /// `M`, odd
    pub points_per_axis: usize,
    /// `δ`; half a spacing when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singular_cutoff: Option<f64>,
    /// `T`
    pub time_horizon: f64,
    /// `n_t`
    pub time_nodes: usize,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub kind: InitialKind,
    pub amplitude: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSection {
    pub size_cap: usize,
    pub depth_cap: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassName {
    All,
    Simple,
    Short,
}

impl std::str::FromStr for ClassName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(ClassName::All),
            "simple" => Ok(ClassName::Simple),
            "short" => Ok(ClassName::Short),
            _ => Err(Error::Config(format!("unknown class {s:?} (all, simple, short)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSection {
    pub filter: ClassName,
    /// `β`
    pub ratio: f64,
    /// `Δβ`
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationName {
    #[default]
    None,
    DropGraftFactor,
    DropSymmetryWeight,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSection {
    /// Families to run; all when empty.
    #[serde(default)]
    pub only: Vec<Family>,
    /// Deliberate defect in the tree recursion, for checking that the
    /// suite catches it.
    #[serde(default)]
    pub mutation: MutationName,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreesSection {
    pub max_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecaySection {
    /// Time of the `|k|` profile.
    pub time: f64,
    /// `|k|` of the node followed in time.
    pub wavenumber: f64,
}

/// Everything a run needs, read from one TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridSection,
    pub initial: InitialSection,
    pub truncation: TruncationSection,
    pub class: ClassSection,
    pub trees: TreesSection,
    pub decay: DecaySection,
    pub suite: SuiteSection,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: GridSection {
                cutoff: 5.0,
                points_per_axis: 11,
                singular_cutoff: None,
                time_horizon: 2.0,
                time_nodes: 33,
                alpha: 2.0,
            },
            initial: InitialSection {
                kind: InitialKind::RandomDivfree,
                amplitude: 0.1,
                seed: 7,
            },
            truncation: TruncationSection { size_cap: 5, depth_cap: 2 },
            class: ClassSection {
                filter: ClassName::All,
                ratio: 0.45,
                tolerance: 0.06,
            },
            trees: TreesSection { max_size: 7 },
            decay: DecaySection {
                time: 1.0,
                wavenumber: 1.0,
            },
            suite: SuiteSection {
                only: Vec::new(),
                mutation: MutationName::None,
            },
            output: OutputSection { dir: PathBuf::from("out") },
        }
    }
}

impl RunConfig {
    pub fn from_toml(s: &str) -> Result<Self> {
        let c: RunConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&s)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// sha256 of the canonical TOML serialization.
    pub fn fingerprint(&self) -> Result<String> {
        Ok(hex::encode(Sha256::digest(self.to_toml()?.as_bytes())))
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        let g = &self.grid;
        let mut spec = GridSpec::new(g.cutoff, g.points_per_axis, g.time_horizon, g.time_nodes, g.alpha)?;
        if let Some(d) = g.singular_cutoff {
            spec.singular_cutoff = d;
            spec.validate()?;
        }
        Ok(spec)
    }

    pub fn class_params(&self) -> Result<TreeClassParams> {
        TreeClassParams::new(self.class.ratio, self.class.tolerance)
    }

    pub fn class_filter(&self) -> Result<ClassFilter> {
        Ok(match self.class.filter {
            ClassName::All => ClassFilter::All,
            ClassName::Simple => ClassFilter::Simple,
            ClassName::Short => ClassFilter::short(&self.class_params()?),
        })
    }

    pub fn mutation(&self) -> Mutation {
        match self.suite.mutation {
            MutationName::None => Mutation::None,
            MutationName::DropGraftFactor => Mutation::DropGraftFactor,
            MutationName::DropSymmetryWeight => Mutation::DropSymmetryWeight,
        }
    }

    /// Every precondition of the modules the commands call.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        self.grid_spec().map_err(|e| Error::Config(e.to_string()))?;
        if !(2.0..3.0).contains(&self.grid.alpha) {
            return bad(format!("alpha {} not in [2, 3)", self.grid.alpha));
        }
        let a = self.initial.amplitude;
        if !(a >= 0.0 && a.is_finite()) {
            return bad(format!("amplitude {a} must be finite and >= 0"));
        }
        if self.truncation.size_cap > DEFAULT_SIZE_CEILING {
            return bad(format!(
                "size_cap {} exceeds ceiling {DEFAULT_SIZE_CEILING}",
                self.truncation.size_cap
            ));
        }
        if !(-1..=DEFAULT_DEPTH_CEILING).contains(&self.truncation.depth_cap) {
            return bad(format!(
                "depth_cap {} not in [-1, {DEFAULT_DEPTH_CEILING}]",
                self.truncation.depth_cap
            ));
        }
        if self.trees.max_size == 0 || self.trees.max_size > DEFAULT_SIZE_CEILING {
            return bad(format!(
                "trees.max_size {} not in [1, {DEFAULT_SIZE_CEILING}]",
                self.trees.max_size
            ));
        }
        self.class_params().map_err(|e| Error::Config(e.to_string()))?;
        let d = &self.decay;
        if !(d.time > 0.0 && d.time <= self.grid.time_horizon) {
            return bad(format!("decay.time {} not in (0, T]", d.time));
        }
        if !(d.wavenumber > 0.0 && d.wavenumber.is_finite()) {
            return bad(format!("decay.wavenumber {} must be positive", d.wavenumber));
        }
        if self.output.dir.as_os_str().is_empty() {
            return bad("output.dir is empty".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut c = RunConfig::default();
        c.grid.singular_cutoff = Some(0.25);
        c.suite.only = vec![Family::Lemma4, Family::ZnFit];
        let s = c.to_toml().unwrap();
        let back = RunConfig::from_toml(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.fingerprint().unwrap(), c.fingerprint().unwrap());
    }

    #[test]
    fn fingerprint_sees_every_field() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.initial.seed += 1;
        assert_ne!(a.fingerprint().unwrap(), b.fingerprint().unwrap());
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = RunConfig::default();
        c.grid.points_per_axis = 10;
        assert!(RunConfig::from_toml(&c.to_toml().unwrap()).is_err());
        let mut c = RunConfig::default();
        c.truncation.size_cap = 40;
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.class.tolerance = 0.9;
        assert!(c.validate().is_err());
        assert!(RunConfig::from_toml("[grid]\ncutoff = 1.0\n").is_err());
    }
}
