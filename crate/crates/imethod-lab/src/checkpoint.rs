//! Binary snapshots of a field at a moment in time.
//!
//! Layout, all little-endian:
//!   magic "NLSF" | version u32 = 1 | dim u32 | points u32 per axis |
//!   box length f64 | time f64 | values as (re f64, im f64) pairs,
//!   row-major with the last axis fastest.
//! Writing the same field twice produces byte-identical files.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;
use num_complex::Complex64;
use std::path::Path;

const MAGIC: &[u8; 4] = b"NLSF";
const VERSION: u32 = 1;

pub fn write_checkpoint(path: &Path, f: &Field, t: f64) -> Result<()> {
    let grid = f.grid();
    let mut buf =
        Vec::with_capacity(4 + 4 + 4 + 4 * grid.dim() + 16 + 16 * grid.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(grid.dim() as u32).to_le_bytes());
    for _ in 0..grid.dim() {
        buf.extend_from_slice(&(grid.points() as u32).to_le_bytes());
    }
    buf.extend_from_slice(&grid.length().to_le_bytes());
    buf.extend_from_slice(&t.to_le_bytes());
    for v in f.values() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    std::fs::write(path, buf)?;
    Ok(())
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.pos + len > self.data.len() {
            return Err(Error::CheckpointTruncated {
                expected: self.pos + len,
                found: self.data.len(),
            });
        }
        let slice = &self.data[self.pos..self.pos + len];
        self.pos += len;
        Ok(slice)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn read_checkpoint(path: &Path) -> Result<(Field, f64)> {
    let data = std::fs::read(path)?;
    let mut cur = Cursor { data: &data, pos: 0 };
    if cur.take(4)? != MAGIC {
        return Err(Error::CheckpointBadMagic);
    }
    let version = cur.u32()?;
    if version != VERSION {
        return Err(Error::CheckpointVersion(version));
    }
    let dim = cur.u32()? as usize;
    if dim == 0 || dim > 8 {
        return Err(Error::Checkpoint(format!("implausible dimension {dim}")));
    }
    let mut points = Vec::with_capacity(dim);
    for _ in 0..dim {
        points.push(cur.u32()? as usize);
    }
    if points.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Checkpoint(format!(
            "anisotropic grids are not supported: {points:?}"
        )));
    }
    let length = cur.f64()?;
    let t = cur.f64()?;
    let grid = Grid::new(dim, points[0], length)?;
    let expected_total = cur.pos + 16 * grid.len();
    if data.len() != expected_total {
        return Err(Error::CheckpointTruncated {
            expected: expected_total,
            found: data.len(),
        });
    }
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = cur.f64()?;
        let im = cur.f64()?;
        values.push(Complex64::new(re, im));
    }
    Ok((Field::new(grid, values)?, t))
}
