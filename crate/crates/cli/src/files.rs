//! File plumbing: atomic output and the channel-output symbol format.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use polarkit::channels::BEC_ERASURE;
use polarkit::Channel;
use tempfile::NamedTempFile;

/// Writes through a temporary file in the destination directory and renames
/// it into place, so readers never observe a partial file.
pub fn write_atomic<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let tmp = NamedTempFile::new_in(dir).with_context(|| format!("creating temp file in {}", dir.display()))?;
    {
        let mut out = BufWriter::new(tmp.as_file());
        body(&mut out)?;
        out.flush()?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(BufReader::new(f))
}

/// Maps a file symbol id to the internal output id. BEC files use
/// 0 = received 0, 1 = received 1, 2 = erasure.
fn internal_symbol(ch: &Channel, id: usize) -> Result<usize> {
    match ch {
        Channel::Bec(_) => match id {
            0 => Ok(0),
            1 => Ok(2),
            2 => Ok(BEC_ERASURE),
            _ => bail!("BEC symbol {id} outside {{0,1,2}}"),
        },
        _ => {
            let alphabet = ch.table().y_count();
            if id >= alphabet {
                bail!("symbol {id} outside 0..{alphabet}");
            }
            Ok(id)
        }
    }
}

/// One block of `len` symbols: whitespace-separated ids, or a compact run
/// of `len` single-digit ids with no separators.
pub fn parse_symbol_line(ch: &Channel, line: &str, len: usize) -> Result<Vec<usize>> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let ids: Vec<usize> = if tokens.len() == 1 && len > 1 {
        let t = tokens[0];
        if t.len() != len || !t.bytes().all(|b| b.is_ascii_digit()) {
            bail!("expected {len} symbols, got {t:?}");
        }
        t.bytes().map(|b| (b - b'0') as usize).collect()
    } else {
        if tokens.len() != len {
            bail!("expected {len} symbols, got {}", tokens.len());
        }
        tokens
            .iter()
            .map(|t| t.parse::<usize>().with_context(|| format!("bad symbol {t:?}")))
            .collect::<Result<_>>()?
    };
    ids.into_iter().map(|id| internal_symbol(ch, id)).collect()
}

pub fn read_symbols(ch: &Channel, path: &Path, len: usize) -> Result<Vec<Vec<usize>>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(no, l)| parse_symbol_line(ch, l, len).with_context(|| format!("{}:{}", path.display(), no + 1)))
        .collect()
}
