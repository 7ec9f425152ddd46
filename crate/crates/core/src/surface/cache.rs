//! Per-surface memo of expensive dense factorizations.

use std::any::Any;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

type Entry = Arc<dyn Any + Send + Sync>;

#[derive(Default)]
pub struct Cache {
    map: Mutex<HashMap<(&'static str, i64), Entry>>,
}

impl std::fmt::Debug for Cache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = self.map.lock().map(|m| m.len()).unwrap_or(0);
        write!(f, "Cache({} entries)", n)
    }
}

impl Cache {
    /// Returns the cached value for `key`, computing it on first use. The
    /// lock is not held during the computation, so two threads may race to
    /// fill the same slot; both compute the same deterministic value.
    pub fn get_or<T, E>(&self, key: (&'static str, i64), make: impl FnOnce() -> Result<T, E>) -> Result<Arc<T>, E>
    where
        T: Send + Sync + 'static,
    {
        if let Some(v) = self.map.lock().unwrap().get(&key) {
            if let Ok(t) = v.clone().downcast::<T>() {
                return Ok(t);
            }
        }
        let v = Arc::new(make()?);
        self.map.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }
}
