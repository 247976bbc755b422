//! On-disk formats.
//!
//! * Field CSV: header `x,value`, one row per grid point.
//! * Trace CSV: header `x,<t_0>,<t_1>,…`, one row per grid point and one
//!   column per snapshot.
//! * Trace binary: little-endian header `n: u64, L: f64, m: u64, dt: f64`
//!   (`m` snapshots), then the `m × n` values snapshot by snapshot. The
//!   header has no start time; [`read_trace_binary`] takes it as an argument.
//! * Path binary: the increments as little-endian doubles, described by a
//!   JSON sidecar [`PathSidecar`].
//! * Ensemble CSV: `t,mean,se,n`.
//!
//! Every float is written with 17 significant digits, which round-trips.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimates::EnsembleStats;
use crate::noise::BrownianPath;
use crate::spectral::{Field, Grid, SpaceTimeTrace};

/// Round-trip float formatting.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_error(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv: {e}"))
}

fn parse(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("not a number: {s:?}")))
}

/// Write `bytes` to `path` through a temporary file in the same directory
/// and a rename, so readers never see a partial file.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Write rows of pre-formatted cells with a header.
pub fn write_csv<W: Write>(w: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header).map_err(csv_error)?;
    for r in rows {
        out.write_record(&r).map_err(csv_error)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_field_csv<W: Write>(w: W, f: &Field) -> Result<()> {
    let rows = f
        .grid()
        .points()
        .into_iter()
        .zip(f.values())
        .map(|(x, v)| vec![fmt_f64(x), fmt_f64(*v)]);
    write_csv(w, &["x", "value"], rows)
}

/// Read a field CSV on `grid`; the `x` column must match the grid points.
pub fn read_field_csv<R: Read>(r: R, grid: &Grid) -> Result<Field> {
    let tr = read_columns(r)?;
    if tr.len() != 2 {
        return Err(Error::InvalidArgument(format!("expected 2 columns, found {}", tr.len())));
    }
    check_points(&tr[0], grid)?;
    Field::new(grid, tr[1].clone())
}

fn read_columns<R: Read>(r: R) -> Result<Vec<Vec<f64>>> {
    read_table(r).map(|(_, cols)| cols)
}

fn read_table<R: Read>(r: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut rdr = csv::Reader::from_reader(r);
    let header: Vec<String> = rdr.headers().map_err(csv_error)?.iter().map(String::from).collect();
    let mut cols = vec![Vec::new(); header.len()];
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        for (c, cell) in cols.iter_mut().zip(rec.iter()) {
            c.push(parse(cell)?);
        }
    }
    Ok((header, cols))
}

fn check_points(xs: &[f64], grid: &Grid) -> Result<()> {
    let pts = grid.points();
    if xs.len() != pts.len() || xs.iter().zip(&pts).any(|(a, b)| (a - b).abs() > 1e-12 * grid.length()) {
        return Err(Error::GridMismatch("x column does not match the grid".into()));
    }
    Ok(())
}

pub fn write_trace_csv<W: Write>(w: W, tr: &SpaceTimeTrace) -> Result<()> {
    let mut header = vec!["x".to_string()];
    header.extend(tr.times().into_iter().map(fmt_f64));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let pts = tr.grid().points();
    let rows = (0..tr.grid().n()).map(|j| {
        let mut row = vec![fmt_f64(pts[j])];
        row.extend(tr.snapshots().iter().map(|s| fmt_f64(s.values()[j])));
        row
    });
    write_csv(w, &header, rows)
}

pub fn read_trace_csv<R: Read>(r: R, grid: &Grid) -> Result<SpaceTimeTrace> {
    let (header, cols) = read_table(r)?;
    if cols.len() < 2 {
        return Err(Error::InvalidArgument("trace CSV has no snapshot columns".into()));
    }
    check_points(&cols[0], grid)?;
    let times = header[1..].iter().map(|h| parse(h)).collect::<Result<Vec<_>>>()?;
    let snaps = cols[1..]
        .iter()
        .map(|c| Field::new(grid, c.clone()))
        .collect::<Result<Vec<_>>>()?;
    SpaceTimeTrace::from_times(&times, snaps)
}

pub fn write_trace_binary<W: Write>(mut w: W, tr: &SpaceTimeTrace) -> Result<()> {
    let g = tr.grid();
    w.write_all(&(g.n() as u64).to_le_bytes())?;
    w.write_all(&g.length().to_le_bytes())?;
    w.write_all(&(tr.len() as u64).to_le_bytes())?;
    w.write_all(&tr.dt().to_le_bytes())?;
    for s in tr.snapshots() {
        for v in s.values() {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    Ok(f64::from_bits(read_u64(r)?))
}

/// Read a binary trace; the format does not store `t0`, so it is supplied.
pub fn read_trace_binary<R: Read>(mut r: R, t0: f64) -> Result<SpaceTimeTrace> {
    let n = read_u64(&mut r)? as usize;
    let length = read_f64(&mut r)?;
    let m = read_u64(&mut r)? as usize;
    let dt = read_f64(&mut r)?;
    let grid = Grid::new(n, length)?;
    if m == 0 {
        return Err(Error::InvalidArgument("binary trace has no snapshots".into()));
    }
    let snaps = (0..m)
        .map(|_| {
            let v = (0..n).map(|_| read_f64(&mut r)).collect::<Result<Vec<_>>>()?;
            Field::new(&grid, v)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(Error::InvalidArgument(format!("{} trailing bytes after trace", rest.len())));
    }
    SpaceTimeTrace::new(&grid, t0, dt, snaps)
}

/// JSON description of a binary path file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSidecar {
    pub seed: u64,
    pub stream: u64,
    pub dt: f64,
    pub m: usize,
}

pub fn write_path_binary<W: Write>(mut w: W, path: &BrownianPath) -> Result<PathSidecar> {
    for v in &path.increments {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(PathSidecar {
        seed: path.seed,
        stream: path.stream,
        dt: path.dt,
        m: path.steps(),
    })
}

pub fn read_path_binary<R: Read>(mut r: R, sidecar: &PathSidecar) -> Result<BrownianPath> {
    let increments = (0..sidecar.m)
        .map(|_| read_f64(&mut r))
        .collect::<Result<Vec<_>>>()?;
    Ok(BrownianPath {
        seed: sidecar.seed,
        stream: sidecar.stream,
        dt: sidecar.dt,
        increments,
    })
}

pub fn write_ensemble_csv<W: Write>(w: W, stats: &EnsembleStats) -> Result<()> {
    let rows = (0..stats.t_grid.len()).map(|j| {
        vec![
            fmt_f64(stats.t_grid[j]),
            fmt_f64(stats.mean[j]),
            fmt_f64(stats.standard_error[j]),
            stats.paths[j].to_string(),
        ]
    });
    write_csv(w, &["t", "mean", "se", "n"], rows)
}
