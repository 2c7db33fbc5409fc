//! JSON containers for fields and trajectories, and CSV axis slices.
//!
//! Node data is row-major: entry `n` is node `(ix, iy, iz)` with
//! `n = (ix * M + iy) * M + iz` and wavevector `-K + (ix, iy, iz) * spacing`.
//! Each node is stored as six numbers `[re x, im x, re y, im y, re z, im z]`.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{vnorm, SpectralField, Trajectory, Vec3c};
use super::grid::{Grid, GridSpec};
use crate::error::{Error, Result};

pub const FIELD_FORMAT: &str = "nstrees-field";
pub const TRAJECTORY_FORMAT: &str = "nstrees-trajectory";
pub const FORMAT_VERSION: u32 = 1;
pub const INDEX_ORDER: &str = "row-major (ix, iy, iz); n = (ix*M + iy)*M + iz; k = -K + i*spacing";

#[derive(Debug, Serialize, Deserialize)]
struct FieldFile {
    format: String,
    version: u32,
    index_order: String,
    grid: GridSpec,
    values: Vec<[f64; 6]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TrajectoryFile {
    format: String,
    version: u32,
    index_order: String,
    grid: GridSpec,
    times: Vec<f64>,
    frames: Vec<Vec<[f64; 6]>>,
}

fn pack(values: &[Vec3c]) -> Vec<[f64; 6]> {
    values
        .iter()
        .map(|v| [v[0].re, v[0].im, v[1].re, v[1].im, v[2].re, v[2].im])
        .collect()
}

fn unpack(values: &[[f64; 6]]) -> Vec<Vec3c> {
    values
        .iter()
        .map(|r| {
            [
                Complex64::new(r[0], r[1]),
                Complex64::new(r[2], r[3]),
                Complex64::new(r[4], r[5]),
            ]
        })
        .collect()
}

fn check_header(format: &str, expected: &str, version: u32) -> Result<()> {
    if format != expected {
        return Err(Error::InvalidParam(format!("format {format:?}, expected {expected:?}")));
    }
    if version != FORMAT_VERSION {
        return Err(Error::InvalidParam(format!("unsupported version {version}")));
    }
    Ok(())
}

pub fn write_field<W: Write>(w: W, f: &SpectralField) -> Result<()> {
    let file = FieldFile {
        format: FIELD_FORMAT.into(),
        version: FORMAT_VERSION,
        index_order: INDEX_ORDER.into(),
        grid: f.grid().spec().clone(),
        values: pack(f.values()),
    };
    serde_json::to_writer(w, &file)?;
    Ok(())
}

pub fn read_field<R: Read>(r: R) -> Result<SpectralField> {
    let file: FieldFile = serde_json::from_reader(r)?;
    check_header(&file.format, FIELD_FORMAT, file.version)?;
    let grid = Grid::new(file.grid)?;
    SpectralField::from_values(&grid, unpack(&file.values))
}

pub fn write_trajectory<W: Write>(w: W, traj: &Trajectory) -> Result<()> {
    let file = TrajectoryFile {
        format: TRAJECTORY_FORMAT.into(),
        version: FORMAT_VERSION,
        index_order: INDEX_ORDER.into(),
        grid: traj.grid().spec().clone(),
        times: traj.grid().spec().times(),
        frames: traj.frames().iter().map(|f| pack(f.values())).collect(),
    };
    serde_json::to_writer(w, &file)?;
    Ok(())
}

pub fn read_trajectory<R: Read>(r: R) -> Result<Trajectory> {
    let file: TrajectoryFile = serde_json::from_reader(r)?;
    check_header(&file.format, TRAJECTORY_FORMAT, file.version)?;
    let grid = Grid::new(file.grid)?;
    let frames = file
        .frames
        .iter()
        .map(|v| SpectralField::from_values(&grid, unpack(v)))
        .collect::<Result<Vec<_>>>()?;
    Trajectory::from_frames(&grid, frames)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

#[derive(Debug, Serialize)]
struct SliceRow {
    kx: f64,
    ky: f64,
    kz: f64,
    abs: f64,
}

/// `kx,ky,kz,abs` for every node on the chosen axis through the origin.
pub fn write_axis_slice<W: Write>(w: W, f: &SpectralField, axis: Axis) -> Result<()> {
    let grid = f.grid();
    let m = grid.spec().points_per_axis;
    let c = grid.center;
    let mut out = csv::Writer::from_writer(w);
    for i in 0..m {
        let idx = match axis {
            Axis::X => grid.index(i, c, c),
            Axis::Y => grid.index(c, i, c),
            Axis::Z => grid.index(c, c, i),
        };
        let k = grid.wavevectors[idx];
        out.serialize(SliceRow {
            kx: k[0],
            ky: k[1],
            kz: k[2],
            abs: vnorm(&f.values()[idx]),
        })?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::field::{make_initial, InitialKind};

    fn grid() -> Grid {
        Grid::new(GridSpec::new(2.0, 5, 1.0, 3, 2.5).unwrap()).unwrap()
    }

    #[test]
    fn field_round_trip_is_bitwise() {
        let g = grid();
        let h = make_initial(&g, InitialKind::RandomDivfree, 0.4, 9).unwrap();
        let mut buf = Vec::new();
        write_field(&mut buf, &h).unwrap();
        let back = read_field(buf.as_slice()).unwrap();
        assert_eq!(back.values(), h.values());
        assert_eq!(back.grid().spec(), g.spec());
    }

    #[test]
    fn trajectory_round_trip() {
        let g = grid();
        let h = make_initial(&g, InitialKind::SingleBump, 0.4, 9).unwrap();
        let tr = Trajectory::semigroup(&h);
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &tr).unwrap();
        let back = read_trajectory(buf.as_slice()).unwrap();
        for (a, b) in back.frames().iter().zip(tr.frames()) {
            assert_eq!(a.values(), b.values());
        }
    }

    #[test]
    fn wrong_format_rejected() {
        let g = grid();
        let tr = Trajectory::zeros(&g);
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &tr).unwrap();
        assert!(read_field(buf.as_slice()).is_err());
    }

    #[test]
    fn slice_has_one_row_per_axis_node() {
        let g = grid();
        let h = make_initial(&g, InitialKind::RandomDivfree, 1.0, 2).unwrap();
        let mut buf = Vec::new();
        write_axis_slice(&mut buf, &h, Axis::Y).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "kx,ky,kz,abs");
        assert_eq!(lines.len(), 6);
        assert!(lines[3].starts_with("0.0,0.0,0.0,0"));
    }
}
