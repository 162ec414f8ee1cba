//! Fixture store: published exact values consumed by the verification
//! drivers. Every entry carries a provenance tag; recomputed entries must
//! agree with published ones when both are present.

use crate::error::{Error, Result};
use crate::exact::parse_quad;
use crate::exact::{parse_rat, BigRat, QuadFieldElem};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureEntry {
    pub key: String,
    /// exact value string: "p/q" or "(a+b*sqrt(D))/c"
    pub value: String,
    /// one of "paper-s8", "paper-prop8.5", "recomputed"
    pub provenance: String,
    #[serde(default)]
    pub citation: String,
}

#[derive(Debug, Default)]
pub struct FixtureStore {
    pub dir: Option<PathBuf>,
    entries: BTreeMap<String, Vec<FixtureEntry>>,
}

pub const PROVENANCES: [&str; 3] = ["paper-s8", "paper-prop8.5", "recomputed"];

impl FixtureStore {
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let mut store = FixtureStore { dir: Some(dir.to_path_buf()), entries: BTreeMap::new() };
        if !dir.is_dir() {
            return Err(Error::Usage(format!("fixture directory {dir:?} not found")));
        }
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for path in paths {
            store.load_file(&path)?;
        }
        Ok(store)
    }

    pub fn load_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        self.load_str(&text)
    }

    pub fn load_str(&mut self, text: &str) -> Result<()> {
        let entries: Vec<FixtureEntry> = serde_json::from_str(text)?;
        for e in entries {
            self.insert(e)?;
        }
        Ok(())
    }

    pub fn insert(&mut self, e: FixtureEntry) -> Result<()> {
        if !PROVENANCES.contains(&e.provenance.as_str()) {
            return Err(Error::Usage(format!(
                "fixture {} has unknown provenance {:?}",
                e.key, e.provenance
            )));
        }
        // validate the value parses
        let _ = parse_quad(&e.value)?;
        let bucket = self.entries.entry(e.key.clone()).or_default();
        // recomputed entries must agree with published ones
        if let Some(prev) = bucket.first() {
            let a = parse_quad(&prev.value)?;
            let b = parse_quad(&e.value)?;
            if a != b {
                return Err(Error::Assertion(format!(
                    "fixture {} disagrees across provenances: {} vs {}",
                    e.key, prev.value, e.value
                )));
            }
        }
        bucket.push(e);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Result<QuadFieldElem> {
        let bucket = self
            .entries
            .get(key)
            .ok_or_else(|| Error::MissingFixture(key.to_string()))?;
        parse_quad(&bucket[0].value)
    }

    pub fn get_rat(&self, key: &str) -> Result<BigRat> {
        let bucket = self
            .entries
            .get(key)
            .ok_or_else(|| Error::MissingFixture(key.to_string()))?;
        parse_rat(&bucket[0].value)
    }

    pub fn provenance(&self, key: &str) -> Option<&str> {
        self.entries
            .get(key)
            .and_then(|b| b.first())
            .map(|e| e.provenance.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = &String> {
        self.entries.keys()
    }
}

/// Locate the fixture directory: explicit path, then HARDERLAB_FIXTURES,
/// then ./fixtures relative to the working directory.
pub fn locate_fixtures(explicit: Option<&Path>) -> Result<FixtureStore> {
    if let Some(p) = explicit {
        return FixtureStore::load_dir(p);
    }
    if let Ok(env) = std::env::var("HARDERLAB_FIXTURES") {
        return FixtureStore::load_dir(Path::new(&env));
    }
    FixtureStore::load_dir(Path::new("fixtures"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn provenance_and_agreement() {
        let mut store = FixtureStore::default();
        store
            .insert(FixtureEntry {
                key: "x".into(),
                value: "-20874555/28".into(),
                provenance: "paper-s8".into(),
                citation: "case (10,4)".into(),
            })
            .unwrap();
        // agreeing recomputed entry is fine
        store
            .insert(FixtureEntry {
                key: "x".into(),
                value: "-20874555/28".into(),
                provenance: "recomputed".into(),
                citation: "".into(),
            })
            .unwrap();
        // disagreeing entry is rejected
        let bad = store.insert(FixtureEntry {
            key: "x".into(),
            value: "1/2".into(),
            provenance: "recomputed".into(),
            citation: "".into(),
        });
        assert!(bad.is_err());
        // unknown provenance is rejected
        let bad2 = store.insert(FixtureEntry {
            key: "y".into(),
            value: "1".into(),
            provenance: "guess".into(),
            citation: "".into(),
        });
        assert!(bad2.is_err());
        assert_eq!(store.provenance("x"), Some("paper-s8"));
    }
}
