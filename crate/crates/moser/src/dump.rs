//! Flat binary grid dump.
//!
//! Layout, all integers and floats little-endian:
//!
//! | offset | size | content |
//! |---|---|---|
//! | 0 | 8 | magic `ALGDGRID` |
//! | 8 | 4 | `u32` format version, currently 1 |
//! | 12 | 4 | `u32` number of axes `d` |
//! | 16 | 4 | `u32` components per node `c` |
//! | 20 | 4 | `u32` reserved, zero |
//! | 24 | 8·d | `u64` node count per axis |
//! | 24 + 8d | 16·d | `f64` pairs `(lo, hi)` per axis |
//! | 24 + 24d | 8·c·N | `f64` samples |
//!
//! Samples are row-major over nodes with the first axis slowest and the
//! component index fastest, so the value of component `k` at node
//! `(i_1, …, i_d)` sits at sample `((i_1·n_2 + i_2)·n_3 + …)·c + k`.
//! Node `i` on axis `a` has coordinate `lo_a + (hi_a − lo_a)·i/(n_a − 1)`.

use std::io::{Read, Write};

use crate::{GridFunction, MoserError, Real};

pub const GRID_DUMP_MAGIC: &[u8; 8] = b"ALGDGRID";
pub const GRID_DUMP_VERSION: u32 = 1;

/// Decoded grid dump.
#[derive(Clone, Debug, PartialEq)]
pub struct GridDump {
    pub counts: Vec<u64>,
    pub bounds: Vec<(f64, f64)>,
    pub ncomp: u32,
    pub data: Vec<f64>,
}

pub fn write_grid_dump<T: Real, W: Write>(
    w: &mut W,
    f: &GridFunction<T>,
) -> Result<(), MoserError> {
    let g = f.grid();
    let d = g.dim();
    w.write_all(GRID_DUMP_MAGIC)?;
    w.write_all(&GRID_DUMP_VERSION.to_le_bytes())?;
    w.write_all(&(d as u32).to_le_bytes())?;
    w.write_all(&(f.ncomp() as u32).to_le_bytes())?;
    w.write_all(&0u32.to_le_bytes())?;
    for _ in 0..d {
        w.write_all(&(g.nodes_per_axis() as u64).to_le_bytes())?;
    }
    for a in 0..d {
        let (lo, hi) = g.bounds(a);
        w.write_all(&lo.as_f64().to_le_bytes())?;
        w.write_all(&hi.as_f64().to_le_bytes())?;
    }
    for v in f.data() {
        w.write_all(&v.as_f64().to_le_bytes())?;
    }
    Ok(())
}

fn take<const N: usize, R: Read>(r: &mut R) -> Result<[u8; N], MoserError> {
    let mut b = [0u8; N];
    r.read_exact(&mut b)?;
    Ok(b)
}

pub fn read_grid_dump<R: Read>(r: &mut R) -> Result<GridDump, MoserError> {
    if &take::<8, _>(r)? != GRID_DUMP_MAGIC {
        return Err(MoserError::Dump("bad magic".into()));
    }
    let version = u32::from_le_bytes(take(r)?);
    if version != GRID_DUMP_VERSION {
        return Err(MoserError::Dump(format!("unknown version {}", version)));
    }
    let d = u32::from_le_bytes(take(r)?) as usize;
    let ncomp = u32::from_le_bytes(take(r)?);
    let _reserved = u32::from_le_bytes(take(r)?);
    let counts: Vec<u64> = (0..d)
        .map(|_| take(r).map(u64::from_le_bytes))
        .collect::<Result<_, _>>()?;
    let bounds = (0..d)
        .map(|_| {
            let lo = f64::from_le_bytes(take(r)?);
            let hi = f64::from_le_bytes(take(r)?);
            Ok((lo, hi))
        })
        .collect::<Result<Vec<_>, MoserError>>()?;
    let len = counts.iter().product::<u64>() as usize * ncomp as usize;
    let data = (0..len)
        .map(|_| take(r).map(f64::from_le_bytes))
        .collect::<Result<_, _>>()?;
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(MoserError::Dump(format!("{} trailing bytes", rest.len())));
    }
    Ok(GridDump {
        counts,
        bounds,
        ncomp,
        data,
    })
}
