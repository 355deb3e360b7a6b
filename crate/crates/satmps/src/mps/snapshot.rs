//! Binary MPS snapshots.
//!
//! Layout, all integers and floats little-endian:
//!
//! ```text
//! magic      8 bytes   "SATMPS\0\x01"
//! n          u32
//! center     u32
//! norm_sq    f64
//! bonds      n × (u32 left, u32 right)
//! payload    per site, left·2·right f64 in row-major (left, physical, right) order
//! ```
//!
//! Floats are stored by bit pattern, so a write/read cycle is exact.

use std::io::{Read, Write};

use ndarray::Array3;

use super::{Mps, MpsError, MpsResult};

pub const SNAPSHOT_MAGIC: &[u8; 8] = b"SATMPS\0\x01";

const MAX_DIM: u32 = 1 << 16;

fn io(e: std::io::Error) -> MpsError { MpsError::Snapshot(e.to_string()) }

pub fn write_snapshot<W: Write>(mps: &Mps, mut out: W) -> MpsResult<()> {
    out.write_all(SNAPSHOT_MAGIC).map_err(io)?;
    out.write_all(&(mps.n() as u32).to_le_bytes()).map_err(io)?;
    out.write_all(&(mps.center() as u32).to_le_bytes()).map_err(io)?;
    out.write_all(&mps.norm_sq().to_le_bytes()).map_err(io)?;
    for t in mps.tensors() {
        let (l, _, r) = t.dim();
        out.write_all(&(l as u32).to_le_bytes()).map_err(io)?;
        out.write_all(&(r as u32).to_le_bytes()).map_err(io)?;
    }
    for t in mps.tensors() {
        for x in t.as_standard_layout().iter() {
            out.write_all(&x.to_le_bytes()).map_err(io)?;
        }
    }
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> MpsResult<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b).map_err(io)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> MpsResult<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b).map_err(io)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_snapshot<R: Read>(mut input: R) -> MpsResult<Mps> {
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic).map_err(io)?;
    if &magic != SNAPSHOT_MAGIC {
        return Err(MpsError::Snapshot("bad magic".into()));
    }
    let n = read_u32(&mut input)?;
    if n == 0 || n > 4096 {
        return Err(MpsError::Snapshot(format!("implausible site count {n}")));
    }
    let center = read_u32(&mut input)? as usize;
    let norm_sq = read_f64(&mut input)?;
    let mut dims = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let l = read_u32(&mut input)?;
        let r = read_u32(&mut input)?;
        if l == 0 || r == 0 || l > MAX_DIM || r > MAX_DIM {
            return Err(MpsError::Snapshot(format!("implausible bond dims {l}x{r}")));
        }
        dims.push((l as usize, r as usize));
    }
    let mut tensors = Vec::with_capacity(n as usize);
    for (l, r) in dims {
        let data = (0..l * 2 * r).map(|_| read_f64(&mut input)).collect::<MpsResult<Vec<_>>>()?;
        tensors.push(Array3::from_shape_vec((l, 2, r), data).expect("sized payload"));
    }
    let mut rest = Vec::new();
    input.read_to_end(&mut rest).map_err(io)?;
    if !rest.is_empty() {
        return Err(MpsError::Snapshot(format!("{} trailing bytes", rest.len())));
    }
    Mps::from_parts(tensors, center, norm_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mps::{flat_run, TruncationPolicy};
    use crate::sat::generate_satisfiable;

    #[test]
    fn roundtrip_is_bit_exact() {
        let inst = generate_satisfiable(10, 30, 8).unwrap();
        let (mps, _) = flat_run(&inst, &TruncationPolicy::exact(), 5).unwrap();
        let mut bytes = Vec::new();
        write_snapshot(&mps, &mut bytes).unwrap();
        let back = read_snapshot(bytes.as_slice()).unwrap();
        assert_eq!(back, mps);
        let mut again = Vec::new();
        write_snapshot(&back, &mut again).unwrap();
        assert_eq!(again, bytes);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_snapshot(&b"NOTANMPS"[..]).is_err());
        let inst = generate_satisfiable(5, 3, 8).unwrap();
        let (mps, _) = flat_run(&inst, &TruncationPolicy::exact(), 2).unwrap();
        let mut bytes = Vec::new();
        write_snapshot(&mps, &mut bytes).unwrap();
        bytes.push(0);
        assert!(read_snapshot(bytes.as_slice()).is_err());
        bytes.truncate(bytes.len() - 9);
        assert!(read_snapshot(bytes.as_slice()).is_err());
    }
}
