use std::fmt;

use crate::error::{Error, Result};

use super::tilde::TildeProcess;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EventKind {
    /// A sleeping vertex is woken to start a new component.
    C1,
    /// Pairing whose partner was sleeping; the partner's vertex wakes.
    Activation,
    /// Pairing whose partner was active; closes a cycle.
    Cycle,
    /// No sleeping or active half-edges remain.
    End,
}

impl EventKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EventKind::C1 => "C1",
            EventKind::Activation => "activation",
            EventKind::Cycle => "cycle",
            EventKind::End => "end",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Process state right after an event (and the kill that follows it).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub t: f64,
    /// Sleeping half-edges.
    pub s: u64,
    /// Active half-edges.
    pub a: u64,
    /// Sleeping vertices.
    pub v: u64,
    /// Living half-edges, `s + a`.
    pub l: u64,
    /// Cycles created so far.
    pub cycles: u64,
    pub kind: EventKind,
    /// Vertex woken (C1, activation) or owning the dying half-edge (cycle).
    pub vertex: u32,
    /// Half-edge chosen by C1 or dying in C3.
    pub half_edge: u32,
    /// Half-edge killed by the preceding C2, for pairings.
    pub partner: Option<u32>,
}

/// State just before a C1 step (`T_i−`). The trace ends with a sentinel
/// boundary holding the final state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Boundary {
    pub t: f64,
    pub s: u64,
    pub v: u64,
    pub cycles: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExplorationTrace {
    pub n: u64,
    pub ell: u64,
    pub max_degree: u32,
    /// Number of degree-0 vertices; they are never woken.
    pub isolated: u64,
    pub samples: Vec<Sample>,
    /// C1 boundaries followed by the end sentinel.
    pub boundaries: Vec<Boundary>,
    /// `(v, e, k)` of every component in discovery order, isolated vertices
    /// last.
    pub components: Vec<(u64, u64, u64)>,
    /// True when every event was sampled.
    pub complete: bool,
}

impl ExplorationTrace {
    /// Final cycle count.
    pub fn cycles(&self) -> u64 {
        self.boundaries.last().map_or(0, |b| b.cycles)
    }

    /// Sampled state in force at time `t` (the last sample at or before `t`).
    /// Exact only for complete traces.
    pub fn state_at(&self, t: f64) -> Option<&Sample> {
        let idx = self.samples.partition_point(|s| s.t <= t);
        idx.checked_sub(1).map(|i| &self.samples[i])
    }

    /// Times of the C1 steps.
    pub fn boundary_times(&self) -> impl Iterator<Item = f64> + '_ {
        self.boundaries[..self.boundaries.len().saturating_sub(1)].iter().map(|b| b.t)
    }

    /// Checks `0 ≤ S̃ − S = A − Ã < −min_{s≤t} Ã(s) + Δ` at every sample,
    /// with `S̃, Ã` computed from the same lifetimes.
    pub fn check_sandwich(&self, tilde: &TildeProcess) -> SandwichReport {
        let mut running_min = 0i64; // Ã(0) = ℓ − ℓ
        let mut report = SandwichReport::default();
        for s in &self.samples {
            let (s_tilde, _) = tilde.at(s.t);
            let a_tilde = s.l as i64 - s_tilde as i64;
            running_min = running_min.min(a_tilde);
            let gap = s_tilde as i64 - s.s as i64;
            let ok_lower = gap >= 0 && gap == s.a as i64 - a_tilde;
            let ok_upper = gap < -running_min + self.max_degree as i64;
            report.checked += 1;
            report.max_slack = report.max_slack.max(gap + running_min);
            if !(ok_lower && ok_upper) {
                report.violations.push(s.t);
            }
        }
        report
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SandwichReport {
    pub checked: usize,
    /// Times at which the inequality failed.
    pub violations: Vec<f64>,
    /// Largest `S̃ − S + min Ã` seen; must stay below `Δ`.
    pub max_slack: i64,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Component sizes from the boundary states: between consecutive C1 times,
/// `v = V(T_i−) − V(T_{i+1}−)`, `e = (S(T_i−) − S(T_{i+1}−))/2` and `k` is
/// the number of cycle events in between. Isolated vertices follow as
/// `(1, 0, 0)`.
pub fn component_sizes_from_trace(trace: &ExplorationTrace) -> Result<Vec<(u64, u64, u64)>> {
    let b = &trace.boundaries;
    if b.is_empty() {
        return Err(Error::CorruptTrace("missing end sentinel".into()));
    }
    let mut out = Vec::with_capacity(b.len() - 1 + trace.isolated as usize);
    for (i, w) in b.windows(2).enumerate() {
        let (x, y) = (w[0], w[1]);
        if y.t < x.t || y.v >= x.v || y.s > x.s || y.cycles < x.cycles {
            return Err(Error::CorruptTrace(format!("non-monotone boundary {i}")));
        }
        let ds = x.s - y.s;
        if ds % 2 == 1 {
            return Err(Error::CorruptTrace(format!("odd half-edge count at boundary {i}")));
        }
        out.push((x.v - y.v, ds / 2, y.cycles - x.cycles));
    }
    let end = b[b.len() - 1];
    if end.s != 0 || end.v != trace.isolated {
        return Err(Error::CorruptTrace(format!(
            "end state S={} V={} but {} isolated vertices",
            end.s, end.v, trace.isolated
        )));
    }
    out.extend(std::iter::repeat((1, 0, 0)).take(trace.isolated as usize));
    Ok(out)
}
