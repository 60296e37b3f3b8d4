use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;

use super::pairing::MultiGraph;

/// Size of one connected component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentSize {
    pub v: u64,
    pub e: u64,
}

impl ComponentSize {
    /// Complexity `k = e − v + 1`, the number of independent cycles.
    pub fn k(&self) -> u64 {
        self.e + 1 - self.v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentStats {
    /// Components by decreasing `v`; ties broken by smallest vertex index.
    pub sizes: Vec<ComponentSize>,
    /// Smallest vertex index of each entry of `sizes`.
    pub min_vertex: Vec<u32>,
    /// Vertex counts of the largest component by degree.
    pub c1_degree_counts: BTreeMap<u32, u64>,
}

impl ComponentStats {
    pub fn component_count(&self) -> usize {
        self.sizes.len()
    }

    fn nth(&self, i: usize) -> ComponentSize {
        self.sizes.get(i).copied().unwrap_or(ComponentSize { v: 0, e: 0 })
    }

    pub fn v1(&self) -> u64 {
        self.nth(0).v
    }

    pub fn e1(&self) -> u64 {
        self.nth(0).e
    }

    pub fn k1(&self) -> u64 {
        self.sizes.first().map_or(0, ComponentSize::k)
    }

    pub fn v2(&self) -> u64 {
        self.nth(1).v
    }

    pub fn e2(&self) -> u64 {
        self.nth(1).e
    }

    /// `Σ_C k(C)`.
    pub fn total_complexity(&self) -> u64 {
        self.sizes.iter().map(ComponentSize::k).sum()
    }

    /// `(v, e, k)` triples sorted ascending, for multiset comparison.
    pub fn multiset(&self) -> Vec<(u64, u64, u64)> {
        let mut m: Vec<_> = self.sizes.iter().map(|c| (c.v, c.e, c.k())).collect();
        m.sort_unstable();
        m
    }
}

/// Exact component statistics by union-find. Loops add an edge to their
/// component without merging anything.
pub fn components(g: &MultiGraph) -> ComponentStats {
    let n = g.n();
    let mut uf = UnionFind::<u32>::new(n);
    for &(u, v) in g.edges() {
        if u != v {
            uf.union(u, v);
        }
    }
    let labels = uf.into_labeling();
    // root -> (v, e, min vertex)
    let mut acc: Vec<(u64, u64, u32)> = vec![(0, 0, u32::MAX); n];
    for (v, &root) in labels.iter().enumerate() {
        let slot = &mut acc[root as usize];
        slot.0 += 1;
        slot.2 = slot.2.min(v as u32);
    }
    for &(u, _) in g.edges() {
        acc[labels[u as usize] as usize].1 += 1;
    }
    let mut comps: Vec<(ComponentSize, u32, u32)> = acc
        .iter()
        .enumerate()
        .filter(|(_, a)| a.0 > 0)
        .map(|(root, a)| (ComponentSize { v: a.0, e: a.1 }, a.2, root as u32))
        .collect();
    comps.sort_by(|a, b| b.0.v.cmp(&a.0.v).then(a.1.cmp(&b.1)));

    let mut c1_degree_counts = BTreeMap::new();
    if let Some(&(_, _, root)) = comps.first() {
        let deg = g.degrees();
        for (v, &label) in labels.iter().enumerate() {
            if label == root {
                *c1_degree_counts.entry(deg[v]).or_insert(0u64) += 1;
            }
        }
    }
    ComponentStats {
        sizes: comps.iter().map(|c| c.0).collect(),
        min_vertex: comps.iter().map(|c| c.1).collect(),
        c1_degree_counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config_model::pair_half_edges;
    use crate::degree_model::{from_iid_pmf, DegreeSequence, OffspringDistribution};
    use crate::rng::stream_rng;

    #[test]
    fn two_dumbbells() {
        let g = MultiGraph::from_parts(4, vec![(0, 1), (2, 3)], vec![0, 1, 2, 3]);
        let c = components(&g);
        assert_eq!(c.sizes, vec![ComponentSize { v: 2, e: 1 }; 2]);
        assert_eq!(c.min_vertex, vec![0, 2]);
        assert_eq!(c.k1(), 0);
        assert_eq!(c.c1_degree_counts.get(&1), Some(&2));
    }

    #[test]
    fn cycle_has_complexity_one() {
        let m = 7u32;
        let edges = (0..m).map(|i| (i, (i + 1) % m)).collect();
        let c = components(&MultiGraph::from_parts(m as usize, edges, vec![]));
        assert_eq!(c.sizes, vec![ComponentSize { v: 7, e: 7 }]);
        assert_eq!(c.k1(), 1);
    }

    #[test]
    fn loop_counts_as_cycle() {
        let g = MultiGraph::from_parts(2, vec![(0, 0)], vec![0, 0]);
        let c = components(&g);
        assert_eq!(c.sizes, vec![ComponentSize { v: 1, e: 1 }, ComponentSize { v: 1, e: 0 }]);
        assert_eq!(c.k1(), 1);
        assert_eq!(c.v2(), 1);
    }

    #[test]
    fn euler_identity_on_random_instances() {
        let pmf = OffspringDistribution::new(vec![(0, 0.05f64), (1, 0.6), (2, 0.1), (3, 0.25)]).unwrap();
        for i in 0..100 {
            let mut rng = stream_rng(99, i);
            let seq = from_iid_pmf(&pmf, 1000, &mut rng).unwrap();
            let g = pair_half_edges(&seq, &mut rng).unwrap();
            let c = components(&g);
            let ell = seq.half_edges();
            assert_eq!(c.sizes.iter().map(|s| s.v).sum::<u64>(), 1000);
            assert_eq!(c.sizes.iter().map(|s| s.e).sum::<u64>(), ell / 2);
            assert_eq!(
                c.total_complexity() as i64,
                (ell / 2) as i64 - 1000 + c.component_count() as i64
            );
            assert_eq!(c.c1_degree_counts.values().sum::<u64>(), c.v1());
        }
    }

    #[test]
    fn isolated_vertices_are_components() {
        let seq = DegreeSequence::from_degrees(vec![0, 0, 1, 1]).unwrap();
        let g = pair_half_edges(&seq, &mut stream_rng(0, 0)).unwrap();
        let c = components(&g);
        assert_eq!(c.component_count(), 3);
        assert_eq!(c.v1(), 2);
        assert_eq!(c.min_vertex, vec![2, 0, 1]);
    }
}
