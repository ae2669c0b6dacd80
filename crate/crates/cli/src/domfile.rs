//! `.dom` files: a `dim=<n> count=<k>` header and one word per line, sorted.
//! `#` lines are comments. Reads are gzip-transparent; writes compress when
//! the path ends in `.gz`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use flate2::read::MultiGzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;
use hyperdom::{VertexSet, Word};

pub fn parse(text: impl BufRead) -> Result<VertexSet> {
    let mut header: Option<(usize, usize)> = None;
    let mut words = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((dim, count)) = header else {
            header = Some(parse_header(line).with_context(|| format!("line {}: bad header {line:?}", i + 1))?);
            continue;
        };
        let w: Word = line.parse().with_context(|| format!("line {}: bad word {line:?}", i + 1))?;
        if w.len() != dim {
            bail!("line {}: word has length {}, header says dim={dim}", i + 1, w.len());
        }
        if words.len() == count {
            bail!("line {}: more than count={count} words", i + 1);
        }
        words.push(w);
    }
    let Some((dim, count)) = header else {
        bail!("missing dim=<n> count=<k> header");
    };
    if words.len() != count {
        bail!("header says count={count}, found {} words", words.len());
    }
    Ok(VertexSet::new(dim, words)?)
}

fn parse_header(line: &str) -> Result<(usize, usize)> {
    let mut dim = None;
    let mut count = None;
    for tok in line.split_whitespace() {
        match tok.split_once('=') {
            Some(("dim", v)) => dim = Some(v.parse()?),
            Some(("count", v)) => count = Some(v.parse()?),
            _ => bail!("unexpected token {tok:?}"),
        }
    }
    match (dim, count) {
        (Some(d), Some(c)) => Ok((d, c)),
        _ => bail!("need both dim and count"),
    }
}

pub fn read(path: &Path) -> Result<VertexSet> {
    let mut raw = Vec::new();
    File::open(path)
        .with_context(|| format!("opening {}", path.display()))?
        .read_to_end(&mut raw)?;
    let parsed = if raw.starts_with(&[0x1f, 0x8b]) {
        parse(BufReader::new(MultiGzDecoder::new(&raw[..])))
    } else {
        parse(&raw[..])
    };
    parsed.with_context(|| format!("reading {}", path.display()))
}

pub fn serialize(set: &VertexSet, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "dim={} count={}", set.dim(), set.len())?;
    for w in set {
        writeln!(out, "{w}")?;
    }
    Ok(())
}

pub fn write(path: &Path, set: &VertexSet) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    if path.extension().is_some_and(|e| e == "gz") {
        let mut enc = GzEncoder::new(BufWriter::new(file), Compression::default());
        serialize(set, &mut enc)?;
        enc.finish()?.flush()?;
    } else {
        let mut w = BufWriter::new(file);
        serialize(set, &mut w)?;
        w.flush()?;
    }
    Ok(())
}
