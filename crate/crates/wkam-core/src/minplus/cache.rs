//! Binary kernel cache.
//!
//! Layout: magic `WKAM1` (5 bytes), then little-endian u32 d, u32 n, f64 t,
//! u32 W, u32 m, followed by the row-major n^d × n^d entries as 64-bit
//! little-endian floats.

use super::{ActionKernel, KernelError};
use crate::grid::TorusGrid;
use std::io::{self, Read, Write};
use std::path::Path;
use thiserror::Error;

pub const MAGIC: &[u8; 5] = b"WKAM1";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("bad magic: not a kernel cache file")]
    BadMagic,
    #[error("truncated cache file")]
    Truncated,
    #[error("invalid header field: {0}")]
    BadHeader(&'static str),
    #[error("cached kernel is invalid: {0}")]
    BadKernel(#[from] KernelError),
    #[error("cache parameters (d={d}, n={n}, t={t}, W={w}, m={m}) do not match the request")]
    Mismatch {
        d: usize,
        n: usize,
        t: f64,
        w: i32,
        m: usize,
    },
}

pub fn write_kernel(path: &Path, kernel: &ActionKernel) -> Result<(), CacheError> {
    let mut f = io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(MAGIC)?;
    f.write_all(&(kernel.grid().dim() as u32).to_le_bytes())?;
    f.write_all(&(kernel.grid().n() as u32).to_le_bytes())?;
    f.write_all(&kernel.t().to_le_bytes())?;
    f.write_all(&(kernel.winding() as u32).to_le_bytes())?;
    f.write_all(&(kernel.substeps() as u32).to_le_bytes())?;
    for v in kernel.entries() {
        f.write_all(&v.to_le_bytes())?;
    }
    f.flush()?;
    Ok(())
}

pub fn read_kernel(path: &Path) -> Result<ActionKernel, CacheError> {
    let mut f = io::BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 5];
    read_exact(&mut f, &mut magic)?;
    if &magic != MAGIC {
        return Err(CacheError::BadMagic);
    }
    let d = read_u32(&mut f)? as usize;
    let n = read_u32(&mut f)? as usize;
    let t = read_f64(&mut f)?;
    let w = read_u32(&mut f)? as i32;
    let m = read_u32(&mut f)? as usize;
    let grid = TorusGrid::new(d, n).map_err(|_| CacheError::BadHeader("grid"))?;
    if !t.is_finite() || t < 0.0 {
        return Err(CacheError::BadHeader("t"));
    }
    let count = grid.node_count() * grid.node_count();
    let mut entries = Vec::with_capacity(count);
    let mut buf = [0u8; 8];
    for _ in 0..count {
        read_exact(&mut f, &mut buf)?;
        entries.push(f64::from_le_bytes(buf));
    }
    let mut kernel = ActionKernel::from_entries(grid, t, entries)?;
    kernel.set_provenance(w, m);
    Ok(kernel)
}

/// Read a kernel and require it to match the given assembly parameters.
pub fn read_kernel_matching(
    path: &Path,
    dim: usize,
    n: usize,
    t: f64,
    w: i32,
    m: usize,
) -> Result<ActionKernel, CacheError> {
    let kernel = read_kernel(path)?;
    let ok = kernel.grid().dim() == dim
        && kernel.grid().n() == n
        && kernel.t() == t
        && kernel.winding() == w
        && kernel.substeps() == m;
    if !ok {
        return Err(CacheError::Mismatch {
            d: kernel.grid().dim(),
            n: kernel.grid().n(),
            t: kernel.t(),
            w: kernel.winding(),
            m: kernel.substeps(),
        });
    }
    Ok(kernel)
}

impl ActionKernel {
    pub(crate) fn set_provenance(&mut self, winding: i32, substeps: usize) {
        self.winding = winding;
        self.substeps = substeps;
    }
}

fn read_exact(r: &mut impl Read, buf: &mut [u8]) -> Result<(), CacheError> {
    r.read_exact(buf).map_err(|e| {
        if e.kind() == io::ErrorKind::UnexpectedEof {
            CacheError::Truncated
        } else {
            CacheError::Io(e)
        }
    })
}

fn read_u32(r: &mut impl Read) -> Result<u32, CacheError> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64, CacheError> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(f64::from_le_bytes(b))
}
