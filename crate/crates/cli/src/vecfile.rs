//! Binary vector files: `GFPV`, u32 version, u64 k, u64 r, u64 count, then
//! `count·k` digit words. All integers little-endian.

use std::io::{Read, Write};

use gfp_fft::{GfpElement, GfpParams};

use crate::error::{CliError, Result};

pub const MAGIC: &[u8; 4] = b"GFPV";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorFile {
    pub params: GfpParams,
    pub elements: Vec<GfpElement>,
}

pub fn write_vectors<W: Write>(mut w: W, params: &GfpParams, elements: &[GfpElement]) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(params.k() as u64).to_le_bytes())?;
    w.write_all(&params.r().to_le_bytes())?;
    w.write_all(&(elements.len() as u64).to_le_bytes())?;
    for x in elements {
        if x.digits().len() != params.k() {
            return Err(CliError::Format(format!("element has {} digits, expected {}", x.digits().len(), params.k())));
        }
        for d in x.digits() {
            w.write_all(&d.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

fn read_exact<R: Read, const N: usize>(r: &mut R, what: &str) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => CliError::Format(format!("truncated while reading {what}")),
        _ => CliError::Io(e),
    })?;
    Ok(buf)
}

pub fn read_vectors<R: Read>(mut r: R) -> Result<VectorFile> {
    let magic: [u8; 4] = read_exact(&mut r, "magic")?;
    if &magic != MAGIC {
        return Err(CliError::Format(format!("bad magic {magic:?}")));
    }
    let version = u32::from_le_bytes(read_exact(&mut r, "version")?);
    if version != VERSION {
        return Err(CliError::Format(format!("unsupported version {version}")));
    }
    let k = u64::from_le_bytes(read_exact(&mut r, "k")?);
    let radix = u64::from_le_bytes(read_exact(&mut r, "r")?);
    let count = u64::from_le_bytes(read_exact(&mut r, "count")?);
    let k = usize::try_from(k).map_err(|_| CliError::Format(format!("k = {k} too large")))?;
    let params = GfpParams::new(radix, k).map_err(|e| CliError::Format(e.to_string()))?;
    let mut elements = Vec::new();
    for i in 0..count {
        let digits = (0..k)
            .map(|_| read_exact::<_, 8>(&mut r, &format!("element {i}")).map(u64::from_le_bytes))
            .collect::<Result<Vec<_>>>()?;
        elements.push(params.element(digits).map_err(|e| CliError::Format(format!("element {i}: {e}")))?);
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(CliError::Format("trailing bytes after last element".into()));
    }
    Ok(VectorFile { params, elements })
}
