use std::io::{Read, Write};

use crate::error::{Error, Result};

use super::offspring::OffspringDistribution;
use super::sequence::DegreeSequence;

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input)
}

fn field<T: std::str::FromStr>(record: &csv::StringRecord, i: usize, line: u64) -> Result<T> {
    record
        .get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("line {line}: bad field {i} in {record:?}")))
}

/// Reads a degree sequence in counts form (`k,n_k`) or explicit form
/// (`vertex,degree`), chosen by the header.
pub fn read_degree_csv<R: Read>(input: R) -> Result<DegreeSequence> {
    let mut rdr = reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    match header.as_slice() {
        ["k", "n_k"] => {
            let mut counts = Vec::new();
            for rec in rdr.records() {
                let rec = rec?;
                let line = rec.position().map_or(0, |p| p.line());
                counts.push((field::<u32>(&rec, 0, line)?, field::<u64>(&rec, 1, line)?));
            }
            DegreeSequence::from_counts(counts)
        }
        ["vertex", "degree"] => {
            let mut pairs = Vec::new();
            for rec in rdr.records() {
                let rec = rec?;
                let line = rec.position().map_or(0, |p| p.line());
                pairs.push((field::<u64>(&rec, 0, line)?, field::<u32>(&rec, 1, line)?));
            }
            pairs.sort_by_key(|&(v, _)| v);
            if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::Parse("duplicate vertex id".into()));
            }
            DegreeSequence::from_degrees(pairs.into_iter().map(|(_, d)| d).collect())
        }
        other => Err(Error::Parse(format!(
            "expected header `k,n_k` or `vertex,degree`, found {other:?}"
        ))),
    }
}

/// Reads a pmf with header `k,p`.
pub fn read_pmf_csv<R: Read>(input: R) -> Result<OffspringDistribution<f64>> {
    let mut rdr = reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != ["k", "p"] {
        return Err(Error::Parse(format!("expected header `k,p`, found {header:?}")));
    }
    let mut atoms = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        atoms.push((field::<u64>(&rec, 0, line)?, field::<f64>(&rec, 1, line)?));
    }
    OffspringDistribution::new(atoms)
}

pub fn write_counts_csv<W: Write>(seq: &DegreeSequence, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "n_k"])?;
    for (k, nk) in seq.counts() {
        w.write_record([k.to_string(), nk.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Explicit form, vertices numbered from 1.
pub fn write_explicit_csv<W: Write>(seq: &DegreeSequence, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["vertex", "degree"])?;
    for (i, d) in seq.degrees().iter().enumerate() {
        w.write_record([(i + 1).to_string(), d.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
