//! Signal persistence: CSV with columns `x,re,im`, and a small versioned
//! little-endian binary container.
//!
//! Binary layout (version 1): magic `MFSG`, `u16` version, `u64` sample
//! count, `f64` spacing, then `n` pairs of `f64` (re, im).

use std::io::{Read, Write};

use num_complex::Complex64;

use super::{Grid1D, Signal};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"MFSG";
const VERSION: u16 = 1;

pub fn write_signal_csv<W: Write>(signal: &Signal, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["x", "re", "im"])?;
    for (k, z) in signal.samples().iter().enumerate() {
        w.write_record([
            format!("{:e}", signal.grid().point(k)),
            format!("{:e}", z.re),
            format!("{:e}", z.im),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV written by [`write_signal_csv`]; the grid is inferred from the
/// first two abscissae and checked against every row.
pub fn read_signal_csv<R: Read>(reader: R) -> Result<Signal> {
    let mut r = csv::Reader::from_reader(reader);
    let mut xs = Vec::new();
    let mut samples = Vec::new();
    for record in r.records() {
        let record = record?;
        if record.len() != 3 {
            return Err(Error::Data(format!("expected 3 columns, got {}", record.len())));
        }
        let parse = |i: usize| -> Result<f64> {
            record[i]
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Data(format!("column {i}: {e}")))
        };
        xs.push(parse(0)?);
        samples.push(Complex64::new(parse(1)?, parse(2)?));
    }
    if xs.len() < 2 {
        return Err(Error::Data("a signal needs at least two rows".into()));
    }
    let dx = xs[1] - xs[0];
    let grid = Grid1D::new(xs.len(), dx * xs.len() as f64)?;
    for (k, &x) in xs.iter().enumerate() {
        if (x - grid.point(k)).abs() > 1e-9 * grid.extent() {
            return Err(Error::Data(format!(
                "row {k}: abscissa {x} is not on the centered grid (expected {})",
                grid.point(k)
            )));
        }
    }
    Signal::new(grid, samples)
}

pub fn write_signal_binary<W: Write>(signal: &Signal, mut writer: W) -> Result<()> {
    writer.write_all(MAGIC)?;
    writer.write_all(&VERSION.to_le_bytes())?;
    writer.write_all(&(signal.len() as u64).to_le_bytes())?;
    writer.write_all(&signal.grid().dx().to_le_bytes())?;
    for z in signal.samples() {
        writer.write_all(&z.re.to_le_bytes())?;
        writer.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_signal_binary<R: Read>(mut reader: R) -> Result<Signal> {
    let mut magic = [0u8; 4];
    reader.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("not a signal file (bad magic)".into()));
    }
    let mut b2 = [0u8; 2];
    reader.read_exact(&mut b2)?;
    let version = u16::from_le_bytes(b2);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported signal file version {version}")));
    }
    let mut b8 = [0u8; 8];
    reader.read_exact(&mut b8)?;
    let n = usize::try_from(u64::from_le_bytes(b8))
        .map_err(|_| Error::Format("sample count overflows usize".into()))?;
    reader.read_exact(&mut b8)?;
    let dx = f64::from_le_bytes(b8);
    let grid = Grid1D::new(n, dx * n as f64)?;
    let mut samples = Vec::with_capacity(n);
    for _ in 0..n {
        reader.read_exact(&mut b8)?;
        let re = f64::from_le_bytes(b8);
        reader.read_exact(&mut b8)?;
        samples.push(Complex64::new(re, f64::from_le_bytes(b8)));
    }
    Signal::new(grid, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn binary_round_trip(
            log_n in 1u32..8,
            extent in 0.5f64..100.0,
            values in prop::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 128),
        ) {
            let n = 1usize << log_n;
            let grid = Grid1D::new(n, extent).unwrap();
            let samples = values[..n].iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            let s = Signal::new(grid, samples).unwrap();
            let mut buf = Vec::new();
            write_signal_binary(&s, &mut buf).unwrap();
            prop_assert_eq!(read_signal_binary(buf.as_slice()).unwrap(), s);
        }

        #[test]
        fn csv_round_trip(values in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 16)) {
            let grid = Grid1D::new(16, 5.0).unwrap();
            let samples = values.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            let s = Signal::new(grid, samples).unwrap();
            let mut buf = Vec::new();
            write_signal_csv(&s, &mut buf).unwrap();
            let back = read_signal_csv(buf.as_slice()).unwrap();
            prop_assert!(back.grid().same_as(s.grid()));
            prop_assert!(back.max_abs_diff(&s).unwrap() <= 1e-12 * 1e3);
        }
    }

    #[test]
    fn binary_rejects_bad_header() {
        assert!(matches!(read_signal_binary(&b"NOPE\x01\x00"[..]), Err(Error::Format(_))));
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&9u16.to_le_bytes());
        assert!(matches!(read_signal_binary(buf.as_slice()), Err(Error::Format(_))));
    }

    #[test]
    fn csv_rejects_off_grid_rows() {
        let text = "x,re,im\n-1,0,0\n0,0,0\n0.5,0,0\n1,0,0\n";
        assert!(matches!(read_signal_csv(text.as_bytes()), Err(Error::Data(_))));
    }
}
