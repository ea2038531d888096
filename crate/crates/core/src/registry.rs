//! Name-keyed registries for interchangeable algorithm variants.
//!
//! Each family of strategies (kernel families, W₂ estimators, ξ samplers,
//! Π evaluators) exposes a `registry()` returning a [`Registry`] of
//! constructors keyed by a stable lowercase name, so the CLI and the
//! experiment configs can pick a variant at runtime.

use crate::error::{Error, Result};

pub struct Registry<T: ?Sized + 'static> {
    kind: &'static str,
    entries: Vec<(&'static str, &'static T)>,
}

impl<T: ?Sized + 'static> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: Vec::new(),
        }
    }

    pub fn register(mut self, name: &'static str, item: &'static T) -> Self {
        debug_assert!(
            self.entries.iter().all(|(n, _)| *n != name),
            "duplicate registration of {name}"
        );
        self.entries.push((name, item));
        self
    }

    pub fn get(&self, name: &str) -> Result<&'static T> {
        let key = name.trim().to_ascii_lowercase();
        self.entries
            .iter()
            .find(|(n, _)| *n == key)
            .map(|(_, item)| *item)
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _)| *n).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &'static T)> + '_ {
        self.entries.iter().copied()
    }

    pub fn kind(&self) -> &'static str {
        self.kind
    }
}
