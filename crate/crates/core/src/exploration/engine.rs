use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::config_model::MultiGraph;
use crate::degree_model::DegreeSequence;
use crate::error::Result;

use super::trace::{component_sizes_from_trace, Boundary, EventKind, ExplorationTrace, Sample};

/// How much of the process to record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceLevel {
    /// Every event for `n ≤ 10⁵`, otherwise decimated.
    Auto,
    /// Every event.
    Full,
    /// Every `every`-th event plus all C1 and cycle events.
    Decimated { every: u64 },
    /// Only component boundaries.
    Boundaries,
}

#[derive(Clone, Copy, Debug)]
pub struct ExploreOptions {
    pub level: TraceLevel,
    /// Return the half-edge lifetimes (needed for the tilde processes).
    pub keep_lifetimes: bool,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        Self {
            level: TraceLevel::Auto,
            keep_lifetimes: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Exploration {
    pub trace: ExplorationTrace,
    pub graph: MultiGraph,
    /// Lifetime of every half-edge, indexed like `graph.half_edge_owner()`.
    pub lifetimes: Option<Vec<f64>>,
}

const SLEEPING: u8 = 0;
const ACTIVE: u8 = 1;
const DEAD: u8 = 2;

struct Engine<'a> {
    seq: &'a DegreeSequence,
    owner: Vec<u32>,
    first: Vec<usize>,
    state: Vec<u8>,
    sleeping: Vec<u32>,
    sleeping_pos: Vec<u32>,
    stack: Vec<u32>,
    s: u64,
    a: u64,
    v: u64,
    cycles: u64,
}

impl Engine<'_> {
    fn half_edges_of(&self, vertex: u32) -> std::ops::Range<usize> {
        let start = self.first[vertex as usize];
        start..start + self.seq.degree(vertex as usize) as usize
    }

    fn remove_sleeping(&mut self, h: u32) {
        let pos = self.sleeping_pos[h as usize] as usize;
        let last = self.sleeping.pop().expect("sleeping half-edge present");
        if last != h {
            self.sleeping[pos] = last;
            self.sleeping_pos[last as usize] = pos as u32;
        }
    }

    /// Wakes `vertex`; all its half-edges except `skip` become active.
    /// `first_out`, if given, is pushed last so that C2 kills it first.
    fn wake(&mut self, vertex: u32, skip: Option<u32>, first_out: Option<u32>) {
        let range = self.half_edges_of(vertex);
        self.v -= 1;
        self.s -= range.len() as u64;
        for h in range {
            let h = h as u32;
            self.remove_sleeping(h);
            if Some(h) == skip {
                self.state[h as usize] = DEAD;
                continue;
            }
            self.state[h as usize] = ACTIVE;
            self.a += 1;
            if Some(h) != first_out {
                self.stack.push(h);
            }
        }
        if let Some(h) = first_out {
            self.stack.push(h);
        }
    }

    /// C2: kill the most recently activated active half-edge.
    fn kill(&mut self) -> u32 {
        loop {
            let h = self.stack.pop().expect("an active half-edge exists");
            if self.state[h as usize] == ACTIVE {
                self.state[h as usize] = DEAD;
                self.a -= 1;
                return h;
            }
        }
    }
}

/// Explores the configuration multigraph with the default options.
pub fn explore<R: Rng + ?Sized>(seq: &DegreeSequence, rng: &mut R) -> Result<(ExplorationTrace, MultiGraph)> {
    let e = explore_with(seq, rng, ExploreOptions::default())?;
    Ok((e.trace, e.graph))
}

/// Runs the exploration process.
///
/// Half-edges get i.i.d. Exp(1) lifetimes and are swept in increasing
/// lifetime order. C1 wakes the owner of a uniformly chosen sleeping
/// half-edge, and that half-edge is the first one killed by C2. C2 kills the
/// most recently activated active half-edge. C3 pairs the killed half-edge
/// with the next half-edge to die spontaneously, waking its vertex if it was
/// sleeping and counting a cycle if it was active.
pub fn explore_with<R: Rng + ?Sized>(
    seq: &DegreeSequence,
    rng: &mut R,
    opts: ExploreOptions,
) -> Result<Exploration> {
    let owner = crate::config_model::owners_of(seq)?;
    let ell = owner.len();
    let n = seq.n();
    let lifetimes: Vec<f64> = (0..ell).map(|_| Exp1.sample(rng)).collect();
    let mut order: Vec<(f64, u32)> = lifetimes.iter().enumerate().map(|(h, &t)| (t, h as u32)).collect();
    order.sort_unstable_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));

    let mut first = Vec::with_capacity(n);
    let mut acc = 0usize;
    for &d in seq.degrees() {
        first.push(acc);
        acc += d as usize;
    }
    let isolated = seq.count(0);
    let mut eng = Engine {
        seq,
        owner,
        first,
        state: vec![SLEEPING; ell],
        sleeping: (0..ell as u32).collect(),
        sleeping_pos: (0..ell as u32).collect(),
        stack: Vec::new(),
        s: ell as u64,
        a: 0,
        v: n as u64,
        cycles: 0,
    };

    let level = match opts.level {
        TraceLevel::Auto if n <= 100_000 => TraceLevel::Full,
        TraceLevel::Auto => TraceLevel::Decimated {
            every: (ell as u64).div_ceil(10_000).max(1),
        },
        other => other,
    };
    let mut samples = Vec::new();
    let mut boundaries = Vec::new();
    let mut edges = Vec::with_capacity(ell / 2);
    let mut event_count = 0u64;
    let mut record = |eng: &Engine, samples: &mut Vec<Sample>, s: Sample| {
        event_count += 1;
        let keep = match level {
            TraceLevel::Full | TraceLevel::Auto => true,
            TraceLevel::Decimated { every } => {
                matches!(s.kind, EventKind::C1 | EventKind::Cycle | EventKind::End) || event_count % every == 0
            }
            TraceLevel::Boundaries => false,
        };
        if keep {
            debug_assert_eq!(s.l, eng.s + eng.a);
            samples.push(s);
        }
    };

    let mut t = 0.0f64;
    let mut sweep = 0usize;
    let mut pending: Option<u32> = None;
    loop {
        if pending.is_none() {
            debug_assert_eq!(eng.a, 0);
            if eng.sleeping.is_empty() {
                break;
            }
            boundaries.push(Boundary {
                t,
                s: eng.s,
                v: eng.v,
                cycles: eng.cycles,
            });
            let h = eng.sleeping[rng.random_range(0..eng.sleeping.len())];
            let vertex = eng.owner[h as usize];
            eng.wake(vertex, None, Some(h));
            pending = Some(eng.kill());
            let snap = sample(&eng, t, EventKind::C1, vertex, h, None);
            record(&eng, &mut samples, snap);
        }
        let killed = pending.take().expect("a killed half-edge awaits its partner");
        let g = loop {
            let (_, h) = order[sweep];
            sweep += 1;
            if eng.state[h as usize] != DEAD {
                break h;
            }
        };
        t = lifetimes[g as usize];
        let vertex = eng.owner[g as usize];
        edges.push((eng.owner[killed as usize], vertex));
        let kind = if eng.state[g as usize] == ACTIVE {
            eng.state[g as usize] = DEAD;
            eng.a -= 1;
            eng.cycles += 1;
            EventKind::Cycle
        } else {
            eng.wake(vertex, Some(g), None);
            EventKind::Activation
        };
        if eng.a > 0 {
            pending = Some(eng.kill());
        }
        let snap = sample(&eng, t, kind, vertex, g, Some(killed));
        record(&eng, &mut samples, snap);
    }
    let end = Boundary {
        t,
        s: eng.s,
        v: eng.v,
        cycles: eng.cycles,
    };
    boundaries.push(end);
    let snap = sample(&eng, t, EventKind::End, u32::MAX, u32::MAX, None);
    record(&eng, &mut samples, snap);

    let mut trace = ExplorationTrace {
        n: n as u64,
        ell: ell as u64,
        max_degree: seq.max_degree(),
        isolated,
        samples,
        boundaries,
        components: Vec::new(),
        complete: matches!(level, TraceLevel::Full),
    };
    trace.components = component_sizes_from_trace(&trace)?;
    let graph = MultiGraph::from_parts(n, edges, eng.owner);
    Ok(Exploration {
        trace,
        graph,
        lifetimes: opts.keep_lifetimes.then_some(lifetimes),
    })
}

fn sample(eng: &Engine, t: f64, kind: EventKind, vertex: u32, half_edge: u32, partner: Option<u32>) -> Sample {
    Sample {
        t,
        s: eng.s,
        a: eng.a,
        v: eng.v,
        l: eng.s + eng.a,
        cycles: eng.cycles,
        kind,
        vertex,
        half_edge,
        partner,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config_model::{components, pair_half_edges};
    use crate::degree_model::{from_iid_pmf, OffspringDistribution};
    use crate::error::Error;
    use crate::exploration::TildeProcess;
    use crate::rng::stream_rng;

    fn seq(d: &[u32]) -> DegreeSequence {
        DegreeSequence::from_degrees(d.to_vec()).unwrap()
    }

    #[test]
    fn single_edge() {
        let (trace, g) = explore(&seq(&[1, 1]), &mut stream_rng(3, 0)).unwrap();
        let kinds: Vec<_> = trace.samples.iter().map(|s| s.kind).collect();
        assert_eq!(kinds, vec![EventKind::C1, EventKind::Activation, EventKind::End]);
        assert_eq!(trace.components, vec![(2, 1, 0)]);
        assert_eq!(trace.cycles(), 0);
        assert_eq!(g.edges().len(), 1);
    }

    #[test]
    fn forced_loop() {
        let (trace, g) = explore(&seq(&[2]), &mut stream_rng(3, 0)).unwrap();
        let kinds: Vec<_> = trace.samples.iter().map(|s| s.kind).collect();
        assert_eq!(kinds, vec![EventKind::C1, EventKind::Cycle, EventKind::End]);
        assert_eq!(trace.components, vec![(1, 1, 1)]);
        assert_eq!(g.edges(), &[(0, 0)]);
    }

    #[test]
    fn isolated_vertices_stay_asleep() {
        let (trace, _) = explore(&seq(&[0, 1, 0, 1]), &mut stream_rng(3, 0)).unwrap();
        assert_eq!(trace.boundaries.last().unwrap().v, 2);
        assert_eq!(trace.components, vec![(2, 1, 0), (1, 0, 0), (1, 0, 0)]);
    }

    #[test]
    fn odd_sum_rejected() {
        assert!(matches!(explore(&seq(&[1, 2]), &mut stream_rng(0, 0)), Err(Error::Parity(3))));
    }

    #[test]
    fn trace_matches_union_find() {
        let pmf = OffspringDistribution::new(vec![(1, 0.7f64), (3, 0.3)]).unwrap();
        for i in 0..20 {
            let mut rng = stream_rng(8, i);
            let s = from_iid_pmf(&pmf, 1000, &mut rng).unwrap();
            let (trace, g) = explore(&s, &mut rng).unwrap();
            let mut from_trace = trace.components.clone();
            from_trace.sort_unstable();
            assert_eq!(from_trace, components(&g).multiset());
            assert_eq!(g.degrees(), s.degrees());
        }
    }

    #[test]
    fn conservation_and_monotonicity() {
        let pmf = OffspringDistribution::new(vec![(0, 0.1f64), (1, 0.5), (2, 0.1), (4, 0.3)]).unwrap();
        let mut rng = stream_rng(12, 0);
        let s = from_iid_pmf(&pmf, 2000, &mut rng).unwrap();
        let (trace, _) = explore(&s, &mut rng).unwrap();
        assert!(trace.complete);
        for w in trace.samples.windows(2) {
            assert!(w[1].s <= w[0].s);
            assert!(w[1].cycles >= w[0].cycles);
            assert!(w[1].t >= w[0].t);
            if matches!(w[1].kind, EventKind::Activation | EventKind::Cycle) {
                // one spontaneous death plus the kill preceding it, except a
                // final pairing that leaves nothing to kill
                let drop = w[0].l - w[1].l;
                assert!(drop == 2 || (drop == 1 && w[1].a == 0), "drop {drop}");
            }
        }
        for x in &trace.samples {
            assert_eq!(x.l, x.s + x.a);
        }
        // A(T_i−) = 0: the sample preceding each C1 has no active half-edges
        for (i, x) in trace.samples.iter().enumerate().skip(1) {
            if x.kind == EventKind::C1 {
                assert_eq!(trace.samples[i - 1].a, 0);
            }
        }
    }

    #[test]
    fn l_drops_by_two_per_pairing() {
        // between consecutive C2 kills the living count drops by 2
        let mut rng = stream_rng(4, 1);
        let s = seq(&[3, 3, 3, 1, 1, 1, 2, 2]);
        let (trace, _) = explore(&s, &mut rng).unwrap();
        let pairings = trace
            .samples
            .iter()
            .filter(|x| matches!(x.kind, EventKind::Activation | EventKind::Cycle))
            .count() as u64;
        assert_eq!(pairings * 2, s.half_edges());
    }

    #[test]
    fn matching_law_is_uniform() {
        let s = seq(&[1, 1, 1, 1]);
        let trials = 100_000;
        let mut counts = [0u32; 4];
        for i in 0..trials {
            let (_, g) = explore(&s, &mut stream_rng(21, i)).unwrap();
            let p = g
                .edges()
                .iter()
                .find_map(|&(u, v)| match (u, v) {
                    (0, x) | (x, 0) => Some(x),
                    _ => None,
                })
                .unwrap();
            counts[p as usize] += 1;
        }
        let e = trials as f64 / 3.0;
        let chi2: f64 = counts[1..].iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
        // 2 degrees of freedom, upper 0.001 quantile
        assert!(chi2 < 13.816, "{counts:?}");
    }

    #[test]
    fn sandwich_holds() {
        let pmf = OffspringDistribution::new(vec![(1, 0.7f64), (3, 0.3)]).unwrap();
        for i in 0..5 {
            let mut rng = stream_rng(30, i);
            let s = from_iid_pmf(&pmf, 1000, &mut rng).unwrap();
            let e = explore_with(&s, &mut rng, ExploreOptions { level: TraceLevel::Full, keep_lifetimes: true }).unwrap();
            let tilde = TildeProcess::new(&s, e.lifetimes.as_ref().unwrap());
            let report = e.trace.check_sandwich(&tilde);
            assert!(report.holds(), "{:?}", &report.violations[..report.violations.len().min(5)]);
        }
    }

    #[test]
    fn decimated_keeps_boundaries_exact() {
        let pmf = OffspringDistribution::new(vec![(1, 0.7f64), (3, 0.3)]).unwrap();
        let mut rng = stream_rng(2, 2);
        let s = from_iid_pmf(&pmf, 5000, &mut rng).unwrap();
        let mut r1 = stream_rng(40, 0);
        let mut r2 = stream_rng(40, 0);
        let full = explore_with(&s, &mut r1, ExploreOptions { level: TraceLevel::Full, keep_lifetimes: false }).unwrap();
        let dec = explore_with(&s, &mut r2, ExploreOptions { level: TraceLevel::Decimated { every: 50 }, keep_lifetimes: false }).unwrap();
        assert_eq!(full.trace.boundaries, dec.trace.boundaries);
        assert_eq!(full.trace.components, dec.trace.components);
        assert!(dec.trace.samples.len() < full.trace.samples.len());
        assert!(!dec.trace.complete);
        let none = explore_with(&s, &mut stream_rng(40, 0), ExploreOptions { level: TraceLevel::Boundaries, keep_lifetimes: false }).unwrap();
        assert!(none.trace.samples.is_empty());
        assert_eq!(none.trace.components, full.trace.components);
    }

    #[test]
    fn same_pairing_law_as_direct_pairing_on_component_counts() {
        // mean number of components agrees between the two constructions
        let s = seq(&[1, 1, 1, 1, 2, 2, 3, 3]);
        let trials = 20_000u64;
        let (mut a, mut b) = (0usize, 0usize);
        for i in 0..trials {
            let (_, g) = explore(&s, &mut stream_rng(50, i)).unwrap();
            a += components(&g).component_count();
            b += components(&pair_half_edges(&s, &mut stream_rng(51, i)).unwrap()).component_count();
        }
        let (ma, mb) = (a as f64 / trials as f64, b as f64 / trials as f64);
        assert!((ma - mb).abs() < 0.03, "{ma} vs {mb}");
    }
}
