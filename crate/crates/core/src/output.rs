// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

//! Minimal CSV emitter. Reals are written with 17 significant digits so that
//! every `f64` round-trips and repeated runs are byte-identical.

use std::io::{self, Write};

use crate::{Error, Result};

pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn int(x: usize) -> String {
    x.to_string()
}

pub fn flag(x: bool) -> String {
    if x { "1" } else { "0" }.to_string()
}

pub struct CsvWriter<W: Write> {
    out: io::BufWriter<W>,
    columns: usize,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(out: W, header: &[&str]) -> Result<Self> {
        let mut w = Self { out: io::BufWriter::new(out), columns: header.len() };
        writeln!(w.out, "{}", header.join(",")).map_err(io_error)?;
        Ok(w)
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        if fields.len() != self.columns {
            return Err(Error::DimensionMismatch { expected: self.columns, found: fields.len() });
        }
        writeln!(self.out, "{}", fields.join(",")).map_err(io_error)
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush().map_err(io_error)
    }
}

fn io_error(e: io::Error) -> Error {
    Error::Io(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for &x in &[0.1, -1.0 / 3.0, 1e-300, 123456.789, 0.0] {
            assert_eq!(real(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn rejects_ragged_rows() {
        let mut buf = Vec::new();
        let mut w = CsvWriter::new(&mut buf, &["a", "b"]).unwrap();
        assert!(w.row(&[real(1.0)]).is_err());
        w.row(&[real(1.0), int(2)]).unwrap();
        w.finish().unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n1.0000000000000000e0,2\n");
    }
}
