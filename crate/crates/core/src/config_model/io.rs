use std::io::{BufRead, Write};

use crate::error::{Error, Result};

use super::pairing::MultiGraph;

/// Provenance carried in the `#` comment lines of an edge list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeListHeader {
    pub seed: Option<u64>,
    pub degree_sha256: Option<String>,
    pub attempts: Option<u32>,
}

/// Writes `u,v` rows with 1-based vertices after the provenance comments.
pub fn write_edge_list<W: Write>(g: &MultiGraph, header: &EdgeListHeader, mut out: W) -> Result<()> {
    writeln!(out, "# n={}", g.n())?;
    if let Some(seed) = header.seed {
        writeln!(out, "# seed={seed}")?;
    }
    if let Some(hash) = &header.degree_sha256 {
        writeln!(out, "# degree_sha256={hash}")?;
    }
    if let Some(a) = header.attempts {
        writeln!(out, "# attempts={a}")?;
    }
    writeln!(out, "u,v")?;
    for &(u, v) in g.edges() {
        writeln!(out, "{},{}", u + 1, v + 1)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads an edge list written by [`write_edge_list`]. The vertex count comes
/// from the `# n=` comment, or else the largest endpoint.
pub fn read_edge_list<R: BufRead>(input: R) -> Result<(MultiGraph, EdgeListHeader)> {
    let mut header = EdgeListHeader::default();
    let mut n = None;
    let mut edges = Vec::new();
    let mut seen_header = false;
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            let c = c.trim();
            let bad = || Error::Parse(format!("line {}: bad comment `{line}`", lineno + 1));
            if let Some(v) = c.strip_prefix("n=") {
                n = Some(v.parse::<usize>().map_err(|_| bad())?);
            } else if let Some(v) = c.strip_prefix("seed=") {
                header.seed = Some(v.parse().map_err(|_| bad())?);
            } else if let Some(v) = c.strip_prefix("degree_sha256=") {
                header.degree_sha256 = Some(v.to_owned());
            } else if let Some(v) = c.strip_prefix("attempts=") {
                header.attempts = Some(v.parse().map_err(|_| bad())?);
            }
            continue;
        }
        if !seen_header {
            if line.replace(' ', "") != "u,v" {
                return Err(Error::Parse(format!("expected `u,v` header, found `{line}`")));
            }
            seen_header = true;
            continue;
        }
        let (u, v) = line
            .split_once(',')
            .and_then(|(a, b)| Some((a.trim().parse::<u32>().ok()?, b.trim().parse::<u32>().ok()?)))
            .filter(|&(a, b)| a >= 1 && b >= 1)
            .ok_or_else(|| Error::Parse(format!("line {}: bad edge `{line}`", lineno + 1)))?;
        edges.push((u - 1, v - 1));
    }
    let max_vertex = edges.iter().map(|&(u, v)| u.max(v) as usize + 1).max().unwrap_or(0);
    let n = n.unwrap_or(max_vertex);
    if max_vertex > n {
        return Err(Error::Parse(format!("edge endpoint exceeds n={n}")));
    }
    let mut owner = Vec::with_capacity(edges.len() * 2);
    for &(u, v) in &edges {
        owner.push(u);
        owner.push(v);
    }
    let mut g = MultiGraph::from_parts(n, edges, owner);
    if let Some(seed) = header.seed {
        g = g.with_seed(seed);
    }
    Ok((g, header))
}
