//! On-disk ball cache.
//!
//! One file per `(group, radius)` named `<digest>-r<radius>.ball`, where
//! `<digest>` is [`GroupSpec::digest`]. Layout, all integers little-endian:
//!
//! ```text
//! magic    8 bytes  "TCBALL\0\0"
//! version  u32      FORMAT_VERSION
//! speclen  u32, then speclen bytes of JSON-encoded GroupSpec
//! radius   u32
//! count    u64
//! count × { length u32, element }
//! ```
//!
//! Elements appear in BFS order (sorted by length). Element encodings:
//! free abelian `u32 d, d×i64`; semidirect `u32 d, d×i64, i64 k`;
//! PQ `bigint m, u32 e, i64 k`; lamplighter `i64 shift, u32 n, n×(i64 pos, u32 value)`;
//! Baumslag–Solitar `i64 head, u32 n, n×(i8 sign, i64 exponent)`.
//! A bigint is `u8 sign (0 zero, 1 positive, 2 negative), u32 len, len bytes of
//! little-endian magnitude`.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, Sign};

use super::bs::{BsWord, Syllable};
use super::element::{LampConfig, PqElement};
use super::{Ball, Element, GroupError, GroupSpec};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 8] = b"TCBALL\0\0";
pub const CACHE_ENV: &str = "TAMECUT_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".tamecut-cache";

#[derive(Clone, Debug)]
pub struct BallCache {
    dir: PathBuf,
}

impl BallCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Flag, then `TAMECUT_CACHE_DIR`, then `./.tamecut-cache`.
    pub fn resolve(flag: Option<&Path>) -> Self {
        if let Some(p) = flag {
            return Self::new(p);
        }
        match std::env::var_os(CACHE_ENV) {
            Some(p) if !p.is_empty() => Self::new(p),
            _ => Self::new(DEFAULT_CACHE_DIR),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, spec: &GroupSpec, radius: u32) -> PathBuf {
        self.dir.join(format!("{}-r{radius}.ball", spec.digest()))
    }

    pub fn load(&self, spec: &GroupSpec, radius: u32) -> Result<Option<Ball>, GroupError> {
        let path = self.path_for(spec, radius);
        if !path.exists() {
            return Ok(None);
        }
        let bytes = fs::read(&path)?;
        let ball = decode_ball(&bytes)?;
        if &ball.group != spec || ball.radius != radius {
            return Err(GroupError::Cache(format!("{} does not match the requested group", path.display())));
        }
        Ok(Some(ball))
    }

    /// Largest cached ball for `spec`, truncated to `max_radius`.
    pub fn load_any(&self, spec: &GroupSpec, max_radius: u32) -> Result<Option<Ball>, GroupError> {
        let best = self.entries()?.into_iter().filter(|(d, _)| *d == spec.digest()).map(|(_, r)| r).max();
        match best {
            Some(r) => Ok(self.load(spec, r)?.map(|b| if r > max_radius { b.truncate(max_radius) } else { b })),
            None => Ok(None),
        }
    }

    /// Writes `ball` unless another writer holds the entry's lock.
    pub fn store(&self, ball: &Ball) -> Result<PathBuf, GroupError> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(&ball.group, ball.radius);
        let lock = path.with_extension("lock");
        let _guard = match fs::OpenOptions::new().write(true).create_new(true).open(&lock) {
            Ok(_) => LockGuard(lock),
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => return Ok(path),
            Err(e) => return Err(e.into()),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(&encode_ball(ball)?)?;
        tmp.persist(&path).map_err(|e| GroupError::Io(e.error))?;
        Ok(path)
    }

    /// `(digest, radius)` of every cache file.
    pub fn entries(&self) -> Result<Vec<(String, u32)>, GroupError> {
        let mut out = Vec::new();
        let rd = match fs::read_dir(&self.dir) {
            Ok(rd) => rd,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(e.into()),
        };
        for entry in rd {
            let name = entry?.file_name().to_string_lossy().into_owned();
            if let Some(stem) = name.strip_suffix(".ball") {
                if let Some((digest, r)) = stem.rsplit_once("-r") {
                    if let Ok(r) = r.parse() {
                        out.push((digest.to_string(), r));
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn clear(&self) -> Result<usize, GroupError> {
        let entries = self.entries()?;
        for (digest, r) in &entries {
            fs::remove_file(self.dir.join(format!("{digest}-r{r}.ball")))?;
        }
        Ok(entries.len())
    }
}

struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

pub fn encode_ball(ball: &Ball) -> Result<Vec<u8>, GroupError> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    let spec = serde_json::to_vec(&ball.group).map_err(|e| GroupError::Cache(e.to_string()))?;
    out.extend_from_slice(&(spec.len() as u32).to_le_bytes());
    out.extend_from_slice(&spec);
    out.extend_from_slice(&ball.radius.to_le_bytes());
    out.extend_from_slice(&(ball.len() as u64).to_le_bytes());
    for (x, l) in ball.iter() {
        out.extend_from_slice(&l.to_le_bytes());
        encode_element(x, &mut out);
    }
    Ok(out)
}

fn put_i64(out: &mut Vec<u8>, x: i64) {
    out.extend_from_slice(&x.to_le_bytes());
}

fn put_u32(out: &mut Vec<u8>, x: u32) {
    out.extend_from_slice(&x.to_le_bytes());
}

fn put_bigint(out: &mut Vec<u8>, x: &BigInt) {
    let (sign, mag) = x.to_bytes_le();
    out.push(match sign {
        Sign::NoSign => 0,
        Sign::Plus => 1,
        Sign::Minus => 2,
    });
    let mag: &[u8] = if sign == Sign::NoSign { &[] } else { &mag };
    put_u32(out, mag.len() as u32);
    out.extend_from_slice(mag);
}

fn encode_element(x: &Element, out: &mut Vec<u8>) {
    match x {
        Element::FreeAbelian { v } => {
            put_u32(out, v.len() as u32);
            v.iter().for_each(|&c| put_i64(out, c));
        }
        Element::Semidirect { v, k } => {
            put_u32(out, v.len() as u32);
            v.iter().for_each(|&c| put_i64(out, c));
            put_i64(out, *k);
        }
        Element::Pq(e) => {
            put_bigint(out, &e.m);
            put_u32(out, e.e);
            put_i64(out, e.k);
        }
        Element::Lamplighter(l) => {
            put_i64(out, l.shift);
            put_u32(out, l.lamps.len() as u32);
            for (&pos, &val) in &l.lamps {
                put_i64(out, pos);
                put_u32(out, val);
            }
        }
        Element::BaumslagSolitar(w) => {
            put_i64(out, w.head);
            put_u32(out, w.syllables.len() as u32);
            for s in &w.syllables {
                out.push(s.sign as u8);
                put_i64(out, s.exponent);
            }
        }
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8], GroupError> {
        if self.bytes.len() < n {
            return Err(GroupError::Cache("truncated cache file".into()));
        }
        let (head, tail) = self.bytes.split_at(n);
        self.bytes = tail;
        Ok(head)
    }

    fn u8(&mut self) -> Result<u8, GroupError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, GroupError> {
        let mut b = [0u8; 4];
        self.take(4)?.read_exact(&mut b)?;
        Ok(u32::from_le_bytes(b))
    }

    fn u64(&mut self) -> Result<u64, GroupError> {
        let mut b = [0u8; 8];
        self.take(8)?.read_exact(&mut b)?;
        Ok(u64::from_le_bytes(b))
    }

    fn i64(&mut self) -> Result<i64, GroupError> {
        Ok(self.u64()? as i64)
    }

    fn bigint(&mut self) -> Result<BigInt, GroupError> {
        let sign = match self.u8()? {
            0 => Sign::NoSign,
            1 => Sign::Plus,
            2 => Sign::Minus,
            s => return Err(GroupError::Cache(format!("bad bigint sign byte {s}"))),
        };
        let len = self.u32()? as usize;
        Ok(BigInt::from_bytes_le(sign, self.take(len)?))
    }

    fn vec_i64(&mut self) -> Result<Vec<i64>, GroupError> {
        let d = self.u32()? as usize;
        (0..d).map(|_| self.i64()).collect()
    }
}

pub fn decode_ball(bytes: &[u8]) -> Result<Ball, GroupError> {
    let mut r = Reader { bytes };
    if r.take(8)? != MAGIC {
        return Err(GroupError::Cache("not a ball cache file".into()));
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(GroupError::Cache(format!("unsupported cache version {version}")));
    }
    let spec_len = r.u32()? as usize;
    let spec: GroupSpec = serde_json::from_slice(r.take(spec_len)?).map_err(|e| GroupError::Cache(e.to_string()))?;
    let radius = r.u32()?;
    let count = r.u64()? as usize;
    let mut members = Vec::with_capacity(count);
    let mut lengths = Vec::with_capacity(count);
    for _ in 0..count {
        lengths.push(r.u32()?);
        let x = match &spec {
            GroupSpec::FreeAbelian { .. } => Element::FreeAbelian { v: r.vec_i64()? },
            GroupSpec::SemidirectZd { .. } => {
                let v = r.vec_i64()?;
                Element::Semidirect { v, k: r.i64()? }
            }
            GroupSpec::Pq { .. } => {
                let m = r.bigint()?;
                let e = r.u32()?;
                Element::Pq(PqElement { m, e, k: r.i64()? })
            }
            GroupSpec::Lamplighter { .. } => {
                let shift = r.i64()?;
                let n = r.u32()?;
                let lamps = (0..n).map(|_| Ok((r.i64()?, r.u32()?))).collect::<Result<_, GroupError>>()?;
                Element::Lamplighter(LampConfig { lamps, shift })
            }
            GroupSpec::BaumslagSolitar { .. } => {
                let head = r.i64()?;
                let n = r.u32()?;
                let syllables = (0..n)
                    .map(|_| Ok(Syllable { sign: r.u8()? as i8, exponent: r.i64()? }))
                    .collect::<Result<_, GroupError>>()?;
                Element::BaumslagSolitar(BsWord { head, syllables })
            }
        };
        members.push(x);
    }
    if !r.bytes.is_empty() {
        return Err(GroupError::Cache("trailing bytes in cache file".into()));
    }
    Ok(Ball::from_parts(spec, radius, members, lengths))
}
