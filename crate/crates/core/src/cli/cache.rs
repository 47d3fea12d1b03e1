//! Append-only JSON-lines results cache.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::request::{Request, Values};

pub const CACHE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub version: u32,
    pub key: String,
    pub request: Request,
    pub value: Values,
}

/// In-memory index over a cache file. Later lines win over earlier ones
/// with the same key. Writes go through `&mut self`, so one writer.
#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    records: Vec<CacheRecord>,
    by_key: HashMap<String, usize>,
}

impl Cache {
    pub fn open(path: &Path) -> Result<Self> {
        let io_err = |source| Error::Io {
            path: path.to_owned(),
            source,
        };
        let mut cache = Self {
            path: path.to_owned(),
            records: Vec::new(),
            by_key: HashMap::new(),
        };
        let file = match File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(io_err(e)),
        };
        for line in BufReader::new(file).lines() {
            let line = line.map_err(io_err)?;
            if line.trim().is_empty() {
                continue;
            }
            let record: CacheRecord =
                serde_json::from_str(&line).map_err(|source| Error::Json {
                    path: path.to_owned(),
                    source,
                })?;
            if record.version != CACHE_VERSION {
                log::warn!(
                    "skipping cache record {} with version {}",
                    record.key,
                    record.version
                );
                continue;
            }
            cache.insert(record);
        }
        Ok(cache)
    }

    fn insert(&mut self, record: CacheRecord) {
        match self.by_key.get(&record.key) {
            Some(&i) => self.records[i] = record,
            None => {
                self.by_key.insert(record.key.clone(), self.records.len());
                self.records.push(record);
            }
        }
    }

    pub fn get(&self, key: &str) -> Option<&CacheRecord> {
        self.by_key.get(key).map(|&i| &self.records[i])
    }

    pub fn records(&self) -> &[CacheRecord] {
        &self.records
    }

    pub fn append(&mut self, request: Request, value: Values) -> Result<()> {
        let record = CacheRecord {
            version: CACHE_VERSION,
            key: request.key(),
            request,
            value,
        };
        let line = serde_json::to_string(&record).expect("cache record serializes");
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|source| Error::Io {
                path: self.path.clone(),
                source,
            })?;
        writeln!(file, "{line}").map_err(|source| Error::Io {
            path: self.path.clone(),
            source,
        })?;
        self.insert(record);
        Ok(())
    }

    /// Cached value for `request`, computing and appending it on a miss.
    pub fn get_or_compute(
        &mut self,
        request: &Request,
        compute: impl FnOnce() -> Result<Values>,
    ) -> Result<Values> {
        if let Some(hit) = self.get(&request.key()) {
            return Ok(hit.value.clone());
        }
        let value = compute()?;
        self.append(request.clone(), value.clone())?;
        Ok(value)
    }
}
