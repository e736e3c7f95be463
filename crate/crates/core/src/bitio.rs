//! Message and codeword files.
//!
//! Two encodings are supported:
//!
//! * ASCII: one vector per line, characters `0`/`1`. Blank lines are skipped.
//! * Packed binary: a sequence of records, each an 8-byte little-endian bit
//!   count followed by `ceil(len/8)` bytes. Bit `j` is stored in byte `j/8`
//!   at position `j%8` (least significant bit first); padding bits are zero.

use std::io::{BufRead, Read, Write};

use crate::error::{Error, Result};
use crate::gf2::BitVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BitFormat {
    Ascii,
    Binary,
}

pub fn read_ascii<R: BufRead>(reader: R) -> Result<Vec<BitVector>> {
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v = line
            .parse::<BitVector>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        out.push(v);
    }
    Ok(out)
}

pub fn write_ascii<W: Write>(mut writer: W, vectors: &[BitVector]) -> Result<()> {
    for v in vectors {
        writeln!(writer, "{v}")?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut reader: R) -> Result<Vec<BitVector>> {
    let mut buf = Vec::new();
    reader.read_to_end(&mut buf)?;
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < buf.len() {
        let header = buf
            .get(pos..pos + 8)
            .ok_or_else(|| Error::Parse(format!("truncated length header at byte {pos}")))?;
        let len = u64::from_le_bytes(header.try_into().expect("8-byte slice")) as usize;
        pos += 8;
        let nbytes = len.div_ceil(8);
        let body = buf
            .get(pos..pos + nbytes)
            .ok_or_else(|| Error::Parse(format!("truncated record body at byte {pos}")))?;
        let mut v = BitVector::zeros(len);
        for j in 0..len {
            if (body[j / 8] >> (j % 8)) & 1 == 1 {
                v.set(j, true);
            }
        }
        if len % 8 != 0 && body[nbytes - 1] >> (len % 8) != 0 {
            return Err(Error::Parse(format!(
                "non-zero padding bits in record ending at byte {}",
                pos + nbytes
            )));
        }
        pos += nbytes;
        out.push(v);
    }
    Ok(out)
}

pub fn write_binary<W: Write>(mut writer: W, vectors: &[BitVector]) -> Result<()> {
    for v in vectors {
        writer.write_all(&(v.len() as u64).to_le_bytes())?;
        let mut bytes = vec![0u8; v.len().div_ceil(8)];
        for j in 0..v.len() {
            if v.get(j) {
                bytes[j / 8] |= 1 << (j % 8);
            }
        }
        writer.write_all(&bytes)?;
    }
    Ok(())
}

pub fn read<R: BufRead>(reader: R, format: BitFormat) -> Result<Vec<BitVector>> {
    match format {
        BitFormat::Ascii => read_ascii(reader),
        BitFormat::Binary => read_binary(reader),
    }
}

pub fn write<W: Write>(writer: W, vectors: &[BitVector], format: BitFormat) -> Result<()> {
    match format {
        BitFormat::Ascii => write_ascii(writer, vectors),
        BitFormat::Binary => write_binary(writer, vectors),
    }
}
