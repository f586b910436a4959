//! Content-addressed on-disk cache of coset representatives.
//!
//! One file per `(n, q, w)`, named by the SHA-256 of the key. Layout, all
//! integers little-endian `u32`:
//!
//! ```text
//! "HKF1" | n | q | key length | key bytes | count | count x (length | matrix)
//! matrix = n*n x (numerator length | coefficients | denominator length | coefficients)
//! ```
//!
//! Rational functions are stored reduced with monic denominator, so equal
//! inputs give byte-identical files. Files are written to a temporary name
//! and renamed into place; a corrupt or mismatched file is recomputed and
//! overwritten.

use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use sha2::{Digest, Sha256};

use crate::group::{coset_reps, CosetSource, GroupError, GroupMat};
use crate::linalg::{Poly, RatFunc};
use crate::weyl::ExtendedWeylElt;

const MAGIC: &[u8; 4] = b"HKF1";

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub repaired: u64,
}

#[derive(Debug)]
pub struct CosetCache {
    dir: PathBuf,
    memory: Mutex<HashMap<Vec<u8>, Arc<Vec<GroupMat>>>>,
    stats: Mutex<CacheStats>,
}

fn key_bytes(w: &ExtendedWeylElt) -> Vec<u8> {
    let mut k = Vec::new();
    k.extend_from_slice(&(w.n() as u32).to_le_bytes());
    k.extend_from_slice(&w.q.to_le_bytes());
    k.extend(w.encode());
    k
}

fn put(out: &mut Vec<u8>, x: u32) {
    out.extend_from_slice(&x.to_le_bytes());
}

fn put_poly(out: &mut Vec<u8>, p: &Poly) {
    put(out, p.coeffs().len() as u32);
    for &c in p.coeffs() {
        put(out, c);
    }
}

/// Serializes a representative list for `w`.
pub fn encode(w: &ExtendedWeylElt, reps: &[GroupMat]) -> Vec<u8> {
    let mut out = MAGIC.to_vec();
    put(&mut out, w.n() as u32);
    put(&mut out, w.q);
    let enc = w.encode();
    put(&mut out, enc.len() as u32);
    out.extend(&enc);
    put(&mut out, reps.len() as u32);
    for g in reps {
        let mut m = Vec::new();
        for e in g.entries() {
            put_poly(&mut m, e.num());
            put_poly(&mut m, e.den());
        }
        put(&mut out, m.len() as u32);
        out.extend(m);
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn u32(&mut self) -> Option<u32> {
        let b = self.buf.get(self.pos..self.pos + 4)?;
        self.pos += 4;
        Some(u32::from_le_bytes(b.try_into().ok()?))
    }

    fn bytes(&mut self, k: usize) -> Option<&[u8]> {
        let b = self.buf.get(self.pos..self.pos + k)?;
        self.pos += k;
        Some(b)
    }

    fn poly(&mut self, q: u32) -> Option<Poly> {
        let k = self.u32()? as usize;
        if k > self.buf.len() {
            return None;
        }
        let c = (0..k).map(|_| self.u32()).collect::<Option<Vec<u32>>>()?;
        if c.iter().any(|&x| x >= q) || c.last() == Some(&0) {
            return None;
        }
        Some(Poly::from_coeffs(q, c))
    }
}

/// Parses a file written by [`encode`]; `None` unless the header matches
/// `w` and the whole buffer is well formed and canonical.
pub fn decode(w: &ExtendedWeylElt, buf: &[u8]) -> Option<Vec<GroupMat>> {
    let mut r = Reader { buf, pos: 0 };
    if r.bytes(4)? != MAGIC {
        return None;
    }
    let n = r.u32()? as usize;
    let q = r.u32()?;
    if n != w.n() || q != w.q {
        return None;
    }
    let k = r.u32()? as usize;
    if r.bytes(k)? != w.encode().as_slice() {
        return None;
    }
    let count = r.u32()? as usize;
    let mut out = Vec::with_capacity(count.min(1 << 16));
    for _ in 0..count {
        let len = r.u32()? as usize;
        let end = r.pos + len;
        let mut entries = Vec::with_capacity(n * n);
        for _ in 0..n * n {
            let num = r.poly(q)?;
            let den = r.poly(q)?;
            if den.is_zero() {
                return None;
            }
            let e = RatFunc::new(num.clone(), den.clone());
            if *e.num() != num || *e.den() != den {
                return None;
            }
            entries.push(e);
        }
        if r.pos != end {
            return None;
        }
        out.push(GroupMat::from_entries(n, q, entries).ok()?);
    }
    (r.pos == buf.len()).then_some(out)
}

impl CosetCache {
    pub fn new(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(CosetCache { dir, memory: Mutex::new(HashMap::new()), stats: Mutex::new(CacheStats::default()) })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, w: &ExtendedWeylElt) -> PathBuf {
        let digest = Sha256::digest(key_bytes(w));
        self.dir.join(format!("{}.hkf", hex::encode(digest)))
    }

    pub fn stats(&self) -> CacheStats {
        *self.stats.lock().expect("stats lock")
    }

    fn bump(&self, f: impl FnOnce(&mut CacheStats)) {
        f(&mut self.stats.lock().expect("stats lock"));
    }

    fn store(&self, path: &Path, bytes: &[u8]) -> io::Result<()> {
        let tmp = self.dir.join(format!(
            ".{}.{}.{}.tmp",
            path.file_name().and_then(|s| s.to_str()).unwrap_or("entry"),
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        fs::write(&tmp, bytes)?;
        fs::rename(&tmp, path)
    }

    /// Representatives of `I w I / I`, from memory, disk or computed.
    pub fn load_or_compute(&self, w: &ExtendedWeylElt, budget: u32) -> Result<Arc<Vec<GroupMat>>, GroupError> {
        let key = key_bytes(w);
        if let Some(v) = self.memory.lock().expect("cache lock").get(&key) {
            self.bump(|s| s.hits += 1);
            return Ok(v.clone());
        }
        let path = self.path_for(w);
        let existing = fs::read(&path).ok();
        let decoded = existing.as_deref().and_then(|b| decode(w, b));
        let reps = match decoded {
            Some(r) => {
                self.bump(|s| s.hits += 1);
                r
            }
            None => {
                let r = coset_reps(w, budget)?;
                self.bump(|s| if existing.is_some() { s.repaired += 1 } else { s.misses += 1 });
                // a failed write only costs a recomputation next time
                let _ = self.store(&path, &encode(w, &r));
                r
            }
        };
        let reps = Arc::new(reps);
        self.memory.lock().expect("cache lock").insert(key, reps.clone());
        Ok(reps)
    }
}

impl CosetSource for CosetCache {
    fn reps(&self, w: &ExtendedWeylElt, budget: u32) -> Result<Vec<GroupMat>, GroupError> {
        Ok(self.load_or_compute(w, budget)?.as_ref().clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::elements_with_torus_up_to;

    #[test]
    fn round_trip_and_repair() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CosetCache::new(dir.path()).unwrap();
        let ws = elements_with_torus_up_to(2, 3, 2);
        for w in ws.iter().take(12) {
            let direct = coset_reps(w, 16).unwrap();
            assert_eq!(*cache.load_or_compute(w, 16).unwrap(), direct);
            let bytes = fs::read(cache.path_for(w)).unwrap();
            assert_eq!(decode(w, &bytes).unwrap(), direct);
        }
        let w = &ws[5];
        let path = cache.path_for(w);
        let good = fs::read(&path).unwrap();
        fs::write(&path, &good[..good.len() - 3]).unwrap();
        let fresh = CosetCache::new(dir.path()).unwrap();
        assert_eq!(*fresh.load_or_compute(w, 16).unwrap(), coset_reps(w, 16).unwrap());
        assert_eq!(fresh.stats().repaired, 1);
        assert_eq!(fs::read(&path).unwrap(), good);
        let again = CosetCache::new(dir.path()).unwrap();
        again.load_or_compute(w, 16).unwrap();
        assert_eq!(again.stats(), CacheStats { hits: 1, misses: 0, repaired: 0 });
    }
}
