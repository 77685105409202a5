//! Name-keyed registries of interchangeable algorithm variants.
//!
//! Each family (routes to `Q(tau)`, routes to the group inverse, accessibility
//! measures) is a trait; concrete variants are registered under a stable name
//! and looked up at runtime, e.g. from a CLI flag.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub trait Named {
    fn name(&self) -> &'static str;

    fn describe(&self) -> &'static str {
        ""
    }
}

pub struct Registry<S: ?Sized> {
    kind: &'static str,
    entries: Vec<Arc<S>>,
}

impl<S: ?Sized + Named> Registry<S> {
    pub fn new(kind: &'static str) -> Self {
        Registry {
            kind,
            entries: Vec::new(),
        }
    }

    /// Registers a variant; a later registration under the same name replaces the earlier one.
    pub fn register(&mut self, entry: Arc<S>) -> &mut Self {
        self.entries.retain(|e| e.name() != entry.name());
        self.entries.push(entry);
        self
    }

    pub fn get(&self, name: &str) -> Result<Arc<S>> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .cloned()
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<S>> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<S: ?Sized + Named> fmt::Debug for Registry<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("kind", &self.kind)
            .field("entries", &self.names())
            .finish()
    }
}
