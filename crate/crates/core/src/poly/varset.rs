use std::collections::HashMap;

use super::Var;

/// Ordered variable names; the position of a name is its [`Var`] index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarSet {
    names: Vec<String>,
    index: HashMap<String, Var>,
}

impl VarSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Self {
        let mut vs = Self::new();
        for n in names {
            vs.insert(n.as_ref());
        }
        vs
    }

    /// Returns the existing index if the name is already present.
    pub fn insert(&mut self, name: &str) -> Var {
        if let Some(&v) = self.index.get(name) {
            return v;
        }
        let v = Var(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), v);
        v
    }

    pub fn get(&self, name: &str) -> Option<Var> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: Var) -> &str {
        self.names
            .get(v.0 as usize)
            .map(String::as_str)
            .unwrap_or("?")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> {
        (0..self.names.len() as u32).map(Var)
    }
}
