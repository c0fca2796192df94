//! Process-wide memo tables with idempotent insertion.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

/// A cache from keys to shared values. Concurrent misses may compute the
/// same value twice; the first insertion wins and both callers see equal
/// values.
pub struct Memo<K, V> {
    map: Mutex<HashMap<K, Arc<V>>>,
}

impl<K: Eq + Hash + Clone, V> Memo<K, V> {
    pub fn new() -> Self {
        Memo {
            map: Mutex::new(HashMap::new()),
        }
    }

    pub fn get_or_try<E>(&self, key: &K, make: impl FnOnce() -> Result<V, E>) -> Result<Arc<V>, E> {
        if let Some(v) = self.map.lock().expect("memo lock").get(key) {
            return Ok(v.clone());
        }
        let v = Arc::new(make()?);
        let mut m = self.map.lock().expect("memo lock");
        Ok(m.entry(key.clone()).or_insert(v).clone())
    }
}

impl<K: Eq + Hash + Clone, V> Default for Memo<K, V> {
    fn default() -> Self {
        Self::new()
    }
}
