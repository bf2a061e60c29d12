use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use num_bigint::BigUint;

use super::Factorization;

/// Append-only factorization cache, one `<n> = <p1>^<e1> * ... [* C<cofactor>]`
/// record per line. Later records for the same `n` win.
#[derive(Debug)]
pub struct FactorCache {
    path: PathBuf,
    entries: Mutex<HashMap<String, Factorization>>,
    writer: Mutex<File>,
}

impl FactorCache {
    pub fn open(path: impl AsRef<Path>) -> io::Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = HashMap::new();
        if path.exists() {
            for line in BufReader::new(File::open(&path)?).lines() {
                let line = line?;
                let Some((n, rhs)) = line.split_once('=') else {
                    continue;
                };
                let n = n.trim();
                if n.is_empty() || !n.bytes().all(|b| b.is_ascii_digit()) {
                    continue;
                }
                if let Ok(f) = rhs.parse::<Factorization>() {
                    entries.insert(n.to_string(), f);
                }
            }
        }
        let writer = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(FactorCache {
            path,
            entries: Mutex::new(entries),
            writer: Mutex::new(writer),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Cached factorization of `n`, ignoring records whose product is not `n`.
    pub fn get(&self, n: &BigUint) -> Option<Factorization> {
        let entries = self.entries.lock().unwrap_or_else(|e| e.into_inner());
        entries
            .get(&n.to_string())
            .filter(|f| f.value() == *n)
            .cloned()
    }

    pub fn insert(&self, n: &BigUint, fact: &Factorization) -> io::Result<()> {
        let key = n.to_string();
        {
            let mut writer = self.writer.lock().unwrap_or_else(|e| e.into_inner());
            writeln!(writer, "{key} = {fact}")?;
            writer.flush()?;
        }
        self.entries
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert(key, fact.clone());
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factorize_cached, DEFAULT_FACTOR_BUDGET};
    use std::fs;

    #[test]
    fn records_survive_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("factors.txt");
        let n = BigUint::from(19_684u32);
        {
            let cache = FactorCache::open(&path).unwrap();
            let f = factorize_cached(&n, DEFAULT_FACTOR_BUDGET, Some(&cache));
            assert!(f.is_complete());
        }
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, "19684 = 2^2 * 7^1 * 19^1 * 37^1\n");
        let cache = FactorCache::open(&path).unwrap();
        assert_eq!(cache.len(), 1);
        assert_eq!(
            cache.get(&n).unwrap().to_string(),
            "2^2 * 7^1 * 19^1 * 37^1"
        );
    }

    #[test]
    fn pasted_external_factorization_is_used() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("factors.txt");
        let p = BigUint::from(1_000_000_007u64);
        let q = BigUint::from(998_244_353u64);
        let n = &p * &q;
        fs::write(&path, format!("# pasted\n{n} = {q}^1 * {p}^1\n")).unwrap();
        let cache = FactorCache::open(&path).unwrap();
        // budget 0 could never split n on its own
        let f = factorize_cached(&n, 0, Some(&cache));
        assert!(f.is_complete());
        assert_eq!(f.factors.len(), 2);
    }

    #[test]
    fn inconsistent_records_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("factors.txt");
        fs::write(&path, "28 = 2^2 * 5^1\n").unwrap();
        let cache = FactorCache::open(&path).unwrap();
        assert!(cache.get(&BigUint::from(28u32)).is_none());
    }
}
