//! Content-addressed memo of local data and Frobenius traces, keyed by the
//! model's coefficients and the prime. Safe for concurrent use; every entry
//! is a deterministic function of its key, so racing writers agree.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::RwLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::local_reduction::{self, Kodaira, LocalReductionData, ReductionClass};
use crate::places::Place;
use crate::weierstrass::{self, EllipticCurve, PointCountConfig};

pub const CACHE_ENV: &str = "ECPARITY_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Entry {
    Local {
        kodaira: Kodaira,
        class: ReductionClass,
        f_v: u32,
        v_delta_min: u32,
        tamagawa: Option<u32>,
    },
    Trace {
        trace: i64,
    },
}

#[derive(Debug, Default)]
pub struct LocalCache {
    entries: RwLock<HashMap<String, Entry>>,
    path: Option<PathBuf>,
}

fn key(curve: &EllipticCurve, ell: u64, kind: &str) -> String {
    let mut h = Sha256::new();
    h.update(format!("{curve}|{ell}|{kind}").as_bytes());
    hex::encode(h.finalize())
}

impl LocalCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Loads the file if it exists; a missing or unreadable file starts empty.
    pub fn open(path: impl AsRef<Path>) -> Self {
        let path = path.as_ref().to_path_buf();
        let entries: HashMap<String, Entry> = std::fs::read_to_string(&path)
            .ok()
            .and_then(|s| serde_json::from_str::<BTreeMap<String, Entry>>(&s).ok())
            .map(|m| m.into_iter().collect())
            .unwrap_or_default();
        LocalCache {
            entries: RwLock::new(entries),
            path: Some(path),
        }
    }

    /// File named by `ECPARITY_CACHE`, or memory only when it is unset.
    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(p) if !p.is_empty() => Self::open(p),
            _ => Self::in_memory(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get(&self, k: &str) -> Option<Entry> {
        self.entries.read().unwrap().get(k).cloned()
    }

    fn put(&self, k: String, e: Entry) {
        self.entries.write().unwrap().insert(k, e);
    }

    pub fn local(&self, curve: &EllipticCurve, ell: u64) -> Result<LocalReductionData> {
        let k = key(curve, ell, "local");
        if let Some(Entry::Local {
            kodaira,
            class,
            f_v,
            v_delta_min,
            tamagawa,
        }) = self.get(&k)
        {
            return Ok(LocalReductionData {
                place: Place::rational(ell),
                kodaira,
                reduction_class: class,
                f_v,
                v_delta_min,
                tamagawa_hint: tamagawa,
            });
        }
        let red = local_reduction::tate_algorithm(curve, ell)?;
        self.put(
            k,
            Entry::Local {
                kodaira: red.kodaira,
                class: red.reduction_class,
                f_v: red.f_v,
                v_delta_min: red.v_delta_min,
                tamagawa: red.tamagawa_hint,
            },
        );
        Ok(red)
    }

    pub fn trace(&self, curve: &EllipticCurve, ell: u64, config: PointCountConfig) -> Result<i64> {
        let k = key(curve, ell, "trace");
        if let Some(Entry::Trace { trace }) = self.get(&k) {
            return Ok(trace);
        }
        let trace = weierstrass::count_points_mod(curve, ell, config)?.trace;
        self.put(k, Entry::Trace { trace });
        Ok(trace)
    }

    /// Writes the whole map, sorted by key, to the backing file if there is one.
    pub fn save(&self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let sorted: BTreeMap<String, Entry> = self
            .entries
            .read()
            .unwrap()
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string(&sorted)?)?;
        std::fs::rename(tmp, path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_file() {
        let dir = std::env::temp_dir().join(format!("ecparity-cache-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cache.json");
        let e = EllipticCurve::from_i64([0, -1, 1, -10, -20]).unwrap();
        let c = LocalCache::open(&path);
        let red = c.local(&e, 11).unwrap();
        assert_eq!(c.trace(&e, 13, PointCountConfig::default()).unwrap(), 4);
        c.save().unwrap();
        let again = LocalCache::open(&path);
        assert_eq!(again.len(), 2);
        assert_eq!(again.local(&e, 11).unwrap(), red);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn concurrent_readers_and_writers() {
        use rayon::prelude::*;
        let e = EllipticCurve::from_i64([0, -1, 1, -10, -20]).unwrap();
        let c = LocalCache::in_memory();
        let traces: Vec<i64> = (0..64)
            .into_par_iter()
            .map(|i| {
                c.trace(&e, [3, 5, 7, 13][i % 4], PointCountConfig::default())
                    .unwrap()
            })
            .collect();
        assert_eq!(&traces[..4], &[-1, 1, -2, 4]);
        assert_eq!(c.len(), 4);
    }
}
