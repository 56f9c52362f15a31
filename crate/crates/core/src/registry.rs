//! Name-keyed registry of interchangeable strategies.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub struct Registry<T: ?Sized> {
    entries: BTreeMap<&'static str, Arc<T>>,
    default: Option<&'static str>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new() -> Self {
        Registry { entries: BTreeMap::new(), default: None }
    }

    /// Registers `strategy` under `name`. The first registration becomes the
    /// default. Returns the strategy previously registered under that name.
    pub fn register(&mut self, name: &'static str, strategy: Arc<T>) -> Option<Arc<T>> {
        self.default.get_or_insert(name);
        self.entries.insert(name, strategy)
    }

    pub fn get(&self, name: &str) -> Option<Arc<T>> {
        self.entries.get(name).cloned()
    }

    pub fn default_strategy(&self) -> Option<Arc<T>> {
        self.default.and_then(|n| self.get(n))
    }

    pub fn default_name(&self) -> Option<&'static str> {
        self.default
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }
}

impl<T: ?Sized> Default for Registry<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: ?Sized> fmt::Debug for Registry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("names", &self.entries.keys().collect::<Vec<_>>())
            .field("default", &self.default)
            .finish()
    }
}
