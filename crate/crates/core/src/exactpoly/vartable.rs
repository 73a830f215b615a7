use std::collections::HashMap;
use std::sync::Arc;

use super::PolyError;

/// Ordered, immutable list of variable names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VarTable {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>, PolyError> {
        let mut index = HashMap::new();
        let mut v = Vec::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref().to_string();
            if n.is_empty() || !is_identifier(&n) {
                return Err(PolyError::BadVariableName(n));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(PolyError::DuplicateVariable(n));
            }
            v.push(n);
        }
        Ok(Arc::new(VarTable { names: v, index }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize, PolyError> {
        self.index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    /// A new table with `extra` appended.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Result<Arc<Self>, PolyError> {
        let mut names: Vec<String> = self.names.clone();
        names.extend(extra.iter().map(|s| s.as_ref().to_string()));
        Self::new(&names)
    }

    /// A new table without the listed variables.
    pub fn without(&self, drop: &[&str]) -> Result<Arc<Self>, PolyError> {
        let names: Vec<&String> = self
            .names
            .iter()
            .filter(|n| !drop.contains(&n.as_str()))
            .collect();
        Self::new(&names)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
