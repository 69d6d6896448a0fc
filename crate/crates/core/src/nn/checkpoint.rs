//! Binary checkpoint: magic, `u32` version, `u32` header length, JSON header
//! (architecture and tensor sizes), `f64` normalization constant, `u64` seed,
//! then every tensor as little-endian `f64` in parameter order.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::net::{NetConfig, SplineNet};
use super::NetError;

pub const MAGIC: &[u8; 8] = b"WKSPLNET";
pub const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Header {
    config: NetConfig,
    tensors: Vec<usize>,
}

pub fn to_bytes(net: &SplineNet) -> Vec<u8> {
    let header =
        serde_json::to_vec(&Header { config: net.config.clone(), tensors: net.params.iter().map(Vec::len).collect() })
            .expect("header serializes");
    let mut out = Vec::with_capacity(32 + header.len() + 8 * net.parameter_count());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(header.len() as u32).to_le_bytes());
    out.extend_from_slice(&header);
    out.extend_from_slice(&net.norm.to_le_bytes());
    out.extend_from_slice(&net.seed.to_le_bytes());
    for t in &net.params {
        for v in t {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], NetError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| NetError::Checkpoint(format!("truncated at byte {}", self.pos)))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, NetError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, NetError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64, NetError> {
        Ok(f64::from_bits(self.u64()?))
    }
}

pub fn from_bytes(buf: &[u8]) -> Result<SplineNet, NetError> {
    let mut c = Cursor { buf, pos: 0 };
    if c.take(MAGIC.len())? != MAGIC {
        return Err(NetError::Checkpoint("not a network checkpoint".into()));
    }
    let version = c.u32()?;
    if version != VERSION {
        return Err(NetError::Checkpoint(format!("unsupported version {version}")));
    }
    let len = c.u32()? as usize;
    let header: Header =
        serde_json::from_slice(c.take(len)?).map_err(|e| NetError::Checkpoint(format!("header: {e}")))?;
    header.config.validate()?;
    if header.tensors != header.config.param_sizes() {
        return Err(NetError::ShapeMismatch("tensor sizes do not match the architecture".into()));
    }
    let norm = c.f64()?;
    let seed = c.u64()?;
    let mut params = Vec::with_capacity(header.tensors.len());
    for &n in &header.tensors {
        params.push((0..n).map(|_| c.f64()).collect::<Result<Vec<_>, _>>()?);
    }
    if c.pos != buf.len() {
        return Err(NetError::Checkpoint(format!("{} trailing bytes", buf.len() - c.pos)));
    }
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(NetError::DegenerateNormalization);
    }
    Ok(SplineNet { config: header.config, norm, seed, params })
}

pub fn save(net: &SplineNet, path: &Path) -> Result<(), NetError> {
    let mut f = std::fs::File::create(path).map_err(|e| NetError::Io(format!("{}: {e}", path.display())))?;
    f.write_all(&to_bytes(net)).map_err(|e| NetError::Io(format!("{}: {e}", path.display())))
}

pub fn load(path: &Path) -> Result<SplineNet, NetError> {
    let mut buf = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut buf))
        .map_err(|e| NetError::Io(format!("{}: {e}", path.display())))?;
    from_bytes(&buf)
}
