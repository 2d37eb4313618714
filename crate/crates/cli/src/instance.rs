//! Instance files: `{"kind": ..., "colors": [...], "q": ..., "advantages": {...}}`.
//!
//! Colors and thieves are 1-based on disk and 0-based in the library.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::path::Path;

use fairsplit_core::necklace::{AdvantageSpec, Necklace, NecklaceError};
use fairsplit_core::ColoredPath;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Path,
    Cycle,
    Necklace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub kind: Kind,
    pub colors: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub advantages: Option<BTreeMap<usize, Vec<usize>>>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let inst: InstanceFile = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        inst.zero_based_colors()?;
        Ok(inst)
    }

    /// Reads `path`, or stdin when `path` is `-`.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Schema(format!("reading stdin: {e}")))?;
            s
        } else {
            std::fs::read_to_string(path).map_err(|e| CliError::Schema(format!("reading {}: {e}", path.display())))?
        };
        Self::parse(&text)
    }

    pub fn expect_kind(&self, kinds: &[Kind]) -> Result<(), CliError> {
        if kinds.contains(&self.kind) {
            Ok(())
        } else {
            Err(CliError::Schema(format!("expected kind {kinds:?}, got {:?}", self.kind)))
        }
    }

    fn zero_based_colors(&self) -> Result<Vec<usize>, CliError> {
        if self.colors.is_empty() {
            return Err(CliError::Schema("colors must be nonempty".into()));
        }
        if self.colors.contains(&0) {
            return Err(CliError::Schema("colors are 1-based".into()));
        }
        let m = *self.colors.iter().max().unwrap();
        let present: BTreeSet<usize> = self.colors.iter().copied().collect();
        if present.len() != m {
            let missing = (1..=m).find(|c| !present.contains(c)).unwrap();
            return Err(CliError::Schema(format!("color {missing} is missing; colors must be contiguous from 1")));
        }
        Ok(self.colors.iter().map(|c| c - 1).collect())
    }

    pub fn path(&self) -> Result<ColoredPath, CliError> {
        ColoredPath::new(self.zero_based_colors()?).map_err(|e| CliError::Schema(e.to_string()))
    }

    pub fn necklace(&self) -> Result<Necklace, CliError> {
        let q = self.q.ok_or_else(|| CliError::Schema("necklace instances need q".into()))?;
        Necklace::new(self.zero_based_colors()?, q).map_err(|e| CliError::Schema(e.to_string()))
    }

    pub fn advantage_spec(&self, neck: &Necklace) -> Result<AdvantageSpec, CliError> {
        let mut map = BTreeMap::new();
        for (&color, thieves) in self.advantages.iter().flatten() {
            if color == 0 || thieves.contains(&0) {
                return Err(CliError::Schema("advantage colors and thieves are 1-based".into()));
            }
            let set: BTreeSet<usize> = thieves.iter().map(|t| t - 1).collect();
            if set.len() != thieves.len() {
                return Err(CliError::Schema(format!("color {color} lists a thief twice")));
            }
            map.insert(color - 1, set);
        }
        AdvantageSpec::new(neck, map).map_err(|e| match e {
            NecklaceError::InvalidSpec(msg) => CliError::Schema(msg),
            other => CliError::Schema(other.to_string()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_necklace() {
        let inst = InstanceFile::parse(r#"{"kind":"necklace","colors":[1,1,1,1],"q":3,"advantages":{"1":[3]}}"#).unwrap();
        let neck = inst.necklace().unwrap();
        let spec = inst.advantage_spec(&neck).unwrap();
        assert_eq!(spec.advantaged(0), Some(&BTreeSet::from([2])));
    }

    #[test]
    fn schema_errors() {
        for bad in [
            r#"{"kind":"path","colors":[]}"#,
            r#"{"kind":"path","colors":[0,1]}"#,
            r#"{"kind":"path","colors":[1,3]}"#,
            r#"{"kind":"tree","colors":[1]}"#,
            r#"{"kind":"path","colors":[1],"extra":1}"#,
            r#"not json"#,
        ] {
            assert!(matches!(InstanceFile::parse(bad), Err(CliError::Schema(_))), "{bad}");
        }
        let inst = InstanceFile::parse(r#"{"kind":"necklace","colors":[1,1]}"#).unwrap();
        assert!(matches!(inst.necklace(), Err(CliError::Schema(_))));
    }
}
