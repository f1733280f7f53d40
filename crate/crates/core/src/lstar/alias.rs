//! Alias table: human-readable relation names bound to ℒ programs.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use super::LStarError;
use crate::lcore::{parse_program, Compiled, Program};

#[derive(Debug, Clone)]
pub struct AliasEntry {
    pub name: String,
    pub code: Arc<Compiled>,
    pub doc: String,
}

#[derive(Debug, Clone, Default)]
pub struct AliasTable {
    entries: BTreeMap<String, AliasEntry>,
}

impl AliasTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, program: Program, doc: &str) {
        let entry = AliasEntry { name: name.to_string(), code: Arc::new(Compiled::new(program)), doc: doc.to_string() };
        self.entries.insert(name.to_string(), entry);
    }

    pub fn get(&self, name: &str) -> Option<&AliasEntry> {
        self.entries.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn merge(&mut self, other: &AliasTable) {
        for (k, v) in &other.entries {
            self.entries.insert(k.clone(), v.clone());
        }
    }

    /// Reads a manifest of `ALIAS = path [| arity [| doc]]` lines; `#`
    /// starts a comment line. Paths are relative to the manifest.
    pub fn from_manifest(path: &Path) -> Result<Self, LStarError> {
        let text = std::fs::read_to_string(path).map_err(|e| LStarError::Manifest(format!("{}: {e}", path.display())))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let mut table = AliasTable::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |m: &str| LStarError::Manifest(format!("line {}: {m}", n + 1));
            let (name, rest) = line.split_once('=').ok_or_else(|| bad("expected `ALIAS = path`"))?;
            let name = name.trim();
            if !name.starts_with(|c: char| c.is_ascii_uppercase())
                || !name.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
            {
                return Err(bad("alias names are uppercase identifiers"));
            }
            let mut fields = rest.split('|').map(str::trim);
            let file = fields.next().unwrap_or_default();
            let declared = fields.next();
            let doc = fields.next().unwrap_or_default();
            let src = std::fs::read_to_string(dir.join(file)).map_err(|e| bad(&format!("{file}: {e}")))?;
            let program = parse_program(&src).map_err(|e| bad(&format!("{file}: {e}")))?;
            if let Some(a) = declared.filter(|a| !a.is_empty()) {
                if a.parse::<usize>().ok() != Some(program.arity) {
                    return Err(bad(&format!("{file}: declared arity {a}, program has {}", program.arity)));
                }
            }
            table.insert(name, program, doc);
        }
        Ok(table)
    }
}
