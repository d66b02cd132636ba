//! Binary field snapshots.
//!
//! Little-endian layout: magic `NLSF`, `version: u32`, `d: u32`, `K: u32` per axis,
//! `boundary: u32` (0 periodic, 1 Dirichlet), domain lengths as `f64` per axis, then interleaved
//! `(re, im)` `f64` coefficients in lexicographic wavevector order (first axis slowest, each
//! axis ascending from `-K/2` for periodic grids, `1..=K` for Dirichlet).

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use super::field::SpectralField;
use super::grid::{Boundary, Grid};
use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

pub const MAGIC: &[u8; 4] = b"NLSF";
pub const VERSION: u32 = 1;

/// Storage indices of a grid listed in lexicographic wavevector order.
fn lexicographic_order<T: Real>(grid: &Grid<T>) -> Vec<usize> {
    let modes = grid.modes_per_axis();
    let shift = match grid.boundary() {
        Boundary::Periodic => modes / 2,
        Boundary::Dirichlet => 0,
    };
    (0..grid.len())
        .map(|lex| {
            let mut rest = lex;
            let mut index = 0;
            let mut stride = 1;
            for _ in 0..grid.dim() {
                let pos = rest % modes;
                rest /= modes;
                index += ((pos + shift) % modes) * stride;
                stride *= modes;
            }
            index
        })
        .collect()
}

pub fn write_snapshot<T: Real, W: Write>(field: &SpectralField<T>, mut out: W) -> Result<()> {
    let grid = field.grid();
    let mut buf = Vec::with_capacity(32 + 16 * grid.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(grid.dim() as u32).to_le_bytes());
    for _ in 0..grid.dim() {
        buf.extend_from_slice(&(grid.modes_per_axis() as u32).to_le_bytes());
    }
    buf.extend_from_slice(&grid.boundary().code().to_le_bytes());
    for l in grid.lengths() {
        buf.extend_from_slice(&l.as_f64().to_le_bytes());
    }
    for i in lexicographic_order(grid) {
        let c = field.coeffs()[i];
        buf.extend_from_slice(&c.re.as_f64().to_le_bytes());
        buf.extend_from_slice(&c.im.as_f64().to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.pos + N;
        let slice = self.bytes.get(self.pos..end).ok_or_else(|| Error::Snapshot("unexpected end of file".into()))?;
        self.pos = end;
        Ok(slice.try_into().expect("slice has length N"))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take()?))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take()?))
    }
}

pub fn read_snapshot<T: Real, R: Read>(mut input: R) -> Result<SpectralField<T>> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let mut cur = Cursor { bytes: &bytes, pos: 0 };
    if &cur.take::<4>()? != MAGIC {
        return Err(Error::Snapshot("bad magic".into()));
    }
    let version = cur.u32()?;
    if version != VERSION {
        return Err(Error::Snapshot(format!("unsupported version {version}")));
    }
    let dim = cur.u32()? as usize;
    if !(1..=3).contains(&dim) {
        return Err(Error::Snapshot(format!("bad dimension {dim}")));
    }
    let modes: Vec<u32> = (0..dim).map(|_| cur.u32()).collect::<Result<_>>()?;
    if modes.iter().any(|&m| m != modes[0]) {
        return Err(Error::Snapshot("anisotropic mode counts are not supported".into()));
    }
    let code = cur.u32()?;
    let boundary = Boundary::from_code(code).ok_or_else(|| Error::Snapshot(format!("bad boundary code {code}")))?;
    let lengths: Vec<T> = (0..dim).map(|_| cur.f64().map(T::lit)).collect::<Result<_>>()?;
    let grid = Grid::new(dim, modes[0] as usize, boundary, &lengths)?;

    let mut coeffs = vec![Cplx::new(T::zero(), T::zero()); grid.len()];
    for i in lexicographic_order(&grid) {
        let re = cur.f64()?;
        let im = cur.f64()?;
        coeffs[i] = Cplx::new(T::lit(re), T::lit(im));
    }
    if cur.pos != bytes.len() {
        return Err(Error::Snapshot(format!("{} trailing bytes", bytes.len() - cur.pos)));
    }
    SpectralField::new(grid, coeffs)
}

pub fn save_snapshot<T: Real>(field: &SpectralField<T>, path: impl AsRef<Path>) -> Result<()> {
    let file = fs::File::create(path)?;
    write_snapshot(field, std::io::BufWriter::new(file))
}

pub fn load_snapshot<T: Real>(path: impl AsRef<Path>) -> Result<SpectralField<T>> {
    read_snapshot(fs::File::open(path)?)
}
