use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::matrix::Matrix;
use crate::ring::Ring;
use crate::words::{Letter, Word};

/// Word images keyed by word, filled level by level so every entry is one
/// product away from its prefix.
///
/// Lookups take a read lock; each level is computed in parallel from a
/// snapshot and then inserted by a single writer.
#[derive(Clone)]
pub struct PrefixMemo<T: Ring> {
    map: Arc<RwLock<HashMap<Word, Matrix<T>>>>,
}

impl<T: Ring> Default for PrefixMemo<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Ring> PrefixMemo<T> {
    pub fn new() -> Self {
        let mut m = HashMap::new();
        m.insert(Word::identity(), Matrix::identity(4));
        PrefixMemo { map: Arc::new(RwLock::new(m)) }
    }

    pub fn get(&self, w: &Word) -> Option<Matrix<T>> {
        self.map.read().unwrap().get(w).cloned()
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Makes sure every word in `words` (and all its prefixes) is present.
    pub fn fill<'a>(&self, words: &[Word], gen: impl Fn(Letter) -> &'a Matrix<T> + Sync)
    where
        T: 'a,
    {
        let mut missing: BTreeMap<usize, HashSet<Word>> = BTreeMap::new();
        {
            let map = self.map.read().unwrap();
            for w in words {
                let mut cur = w.clone();
                while !map.contains_key(&cur) {
                    let (p, _) = cur.prefix().expect("identity is always present");
                    missing.entry(cur.len()).or_default().insert(cur);
                    cur = p;
                }
            }
        }
        for (_, level) in missing {
            let level: Vec<Word> = level.into_iter().collect();
            let computed: Vec<(Word, Matrix<T>)> = {
                let map = self.map.read().unwrap();
                level
                    .into_par_iter()
                    .map(|w| {
                        let (p, l) = w.prefix().unwrap();
                        let m = map[&p].mul(gen(l));
                        (w, m)
                    })
                    .collect()
            };
            let mut map = self.map.write().unwrap();
            map.extend(computed);
        }
    }
}

#[derive(Serialize, serde::Deserialize)]
struct CacheFile<T> {
    generators: Vec<Matrix<T>>,
    entries: Vec<(Word, Matrix<T>)>,
}

impl<T: Ring + Serialize + DeserializeOwned> PrefixMemo<T> {
    /// Writes the memo as JSON sorted by word, tagged with the generator
    /// images it was computed from.
    pub fn save(&self, path: &Path, generators: &[Matrix<T>]) -> std::io::Result<()> {
        let map = self.map.read().unwrap();
        let mut entries: Vec<(Word, Matrix<T>)> = map.iter().map(|(w, m)| (w.clone(), m.clone())).collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let file = CacheFile { generators: generators.to_vec(), entries };
        let text = serde_json::to_string(&file).map_err(std::io::Error::other)?;
        std::fs::write(path, text)
    }

    /// Merges a memo written by [`save`](Self::save). A file computed from
    /// different generators is ignored; returns the number of entries taken.
    pub fn load(&self, path: &Path, generators: &[Matrix<T>]) -> std::io::Result<usize> {
        let text = std::fs::read_to_string(path)?;
        let file: CacheFile<T> = serde_json::from_str(&text).map_err(std::io::Error::other)?;
        if file.generators != generators {
            log::warn!("ignoring stale cache {}", path.display());
            return Ok(0);
        }
        let n = file.entries.len();
        self.map.write().unwrap().extend(file.entries);
        Ok(n)
    }
}
