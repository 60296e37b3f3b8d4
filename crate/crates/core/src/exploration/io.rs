use std::io::Write;

use crate::error::Result;

use super::trace::ExplorationTrace;

/// Writes the sampled process as `t,S,A,V,L,N,event_kind`.
pub fn write_trace_csv<W: Write>(trace: &ExplorationTrace, mut out: W) -> Result<()> {
    writeln!(out, "t,S,A,V,L,N,event_kind")?;
    for s in &trace.samples {
        writeln!(out, "{},{},{},{},{},{},{}", s.t, s.s, s.a, s.v, s.l, s.cycles, s.kind)?;
    }
    out.flush()?;
    Ok(())
}

/// Writes one `T_i,v,e,k` row per explored component. Isolated vertices are
/// never woken and are reported in a trailing comment.
pub fn write_boundaries_csv<W: Write>(trace: &ExplorationTrace, mut out: W) -> Result<()> {
    writeln!(out, "T_i,v,e,k")?;
    for (t, (v, e, k)) in trace.boundary_times().zip(&trace.components) {
        writeln!(out, "{t},{v},{e},{k}")?;
    }
    if trace.isolated > 0 {
        writeln!(out, "# isolated={}", trace.isolated)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree_model::DegreeSequence;
    use crate::exploration::explore;
    use crate::rng::stream_rng;

    #[test]
    fn csv_shapes() {
        let s = DegreeSequence::from_degrees(vec![1, 1, 2, 0]).unwrap();
        let (trace, _) = explore(&s, &mut stream_rng(1, 0)).unwrap();
        let mut buf = Vec::new();
        write_trace_csv(&trace, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,S,A,V,L,N,event_kind");
        assert_eq!(lines.len(), trace.samples.len() + 1);
        assert!(lines.last().unwrap().ends_with(",end"));
        assert!(lines[1].starts_with("0,"));

        let mut buf = Vec::new();
        write_boundaries_csv(&trace, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("T_i,v,e,k"));
        assert!(text.ends_with("# isolated=1\n"));
        let rows: u64 = text.lines().skip(1).filter(|l| !l.starts_with('#')).map(|l| {
            let f: Vec<u64> = l.split(',').skip(1).map(|x| x.parse().unwrap()).collect();
            f[0]
        }).sum();
        assert_eq!(rows, 3);
    }
}
