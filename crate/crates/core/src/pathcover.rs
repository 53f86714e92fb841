//! Constrained minimum path cover on layered set graphs.
//!
//! Given a family of required sets and a path budget, finds exactly that
//! many vertex-disjoint paths in the Hasse diagram (arcs add one element)
//! covering every required set, minimizing how many extra sets get used.
//! Solved as a min-cost flow with vertex lower bounds; outputs are
//! deterministic through canonical node numbering and fixed tie-breaks.

use std::collections::VecDeque;

use crate::chains::Chain;
use crate::error::Error;
use crate::lattice::{next_same_cardinality, ElementSet, Family};
use crate::Result;

/// Most set-nodes a single instance may materialize.
const NODE_BUDGET: u64 = 1 << 20;
/// Most arcs a single instance may materialize.
const ARC_BUDGET: u64 = 1 << 22;

/// A path cover problem: cover `required` by exactly `target_paths`
/// vertex-disjoint skipless paths inside the layer band spanned by
/// `required`, paying 1 per non-required set used.
#[derive(Clone, Debug)]
pub struct LayeredCoverInstance {
    required: Family,
    target_paths: usize,
    lo: u32,
    hi: u32,
}

impl LayeredCoverInstance {
    /// Builds an instance; the layer band is the min..max cardinality of
    /// the required sets.
    pub fn new(required: Family, target_paths: usize) -> Result<Self> {
        let (Some(first), Some(last)) = (required.members().first(), required.members().last())
        else {
            return Err(Error::Precondition(
                "path cover needs a nonempty required family".into(),
            ));
        };
        let (lo, hi) = (first.cardinality(), last.cardinality());
        let n = required.universe() as u64;
        let mut nodes: u64 = 0;
        let mut arcs: u64 = 0;
        for t in lo..=hi {
            let count = crate::colex::binomial(n, t as u64)?;
            nodes = nodes.saturating_add(count);
            // Split arc, start arc, end arc, and the upward Hasse fan.
            let fan = if t < hi { n - t as u64 } else { 0 };
            arcs = arcs.saturating_add(count.saturating_mul(3 + fan));
        }
        if nodes > NODE_BUDGET || arcs > ARC_BUDGET {
            return Err(Error::Capacity(format!(
                "layer band {lo}..={hi} of [{n}] needs {nodes} nodes and {arcs} arcs"
            )));
        }
        Ok(Self {
            required,
            target_paths,
            lo,
            hi,
        })
    }

    pub fn required(&self) -> &Family {
        &self.required
    }

    pub fn target_paths(&self) -> usize {
        self.target_paths
    }

    /// The materialized layer band `(lo, hi)`.
    pub fn layers(&self) -> (u32, u32) {
        (self.lo, self.hi)
    }
}

struct FlowEdge {
    to: u32,
    cap: u32,
    cost: i64,
}

/// Residual-graph min-cost max-flow with successive shortest paths.
/// Edge `2i + 1` is the reverse of edge `2i`.
struct FlowNetwork {
    adjacency: Vec<Vec<u32>>,
    edges: Vec<FlowEdge>,
}

impl FlowNetwork {
    fn new(vertices: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); vertices],
            edges: Vec::new(),
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: u32, cost: i64) -> usize {
        let id = self.edges.len();
        self.adjacency[from].push(id as u32);
        self.edges.push(FlowEdge {
            to: to as u32,
            cap,
            cost,
        });
        self.adjacency[to].push(id as u32 + 1);
        self.edges.push(FlowEdge {
            to: from as u32,
            cap: 0,
            cost: -cost,
        });
        id
    }

    /// Flow already pushed through forward edge `id`.
    fn flow(&self, id: usize) -> u32 {
        self.edges[id ^ 1].cap
    }

    /// Sends as much flow as possible from `source` to `sink`, cheapest
    /// paths first (Dijkstra on reduced costs; ties broken by vertex
    /// index). Returns the total flow.
    fn min_cost_max_flow(&mut self, source: usize, sink: usize) -> u64 {
        let v = self.adjacency.len();
        let mut potential = vec![0i64; v];
        let mut dist = vec![i64::MAX; v];
        let mut pred_edge = vec![u32::MAX; v];
        let mut total: u64 = 0;
        loop {
            dist.iter_mut().for_each(|d| *d = i64::MAX);
            pred_edge.iter_mut().for_each(|p| *p = u32::MAX);
            dist[source] = 0;
            let mut heap = std::collections::BinaryHeap::new();
            heap.push(std::cmp::Reverse((0i64, source as u32)));
            while let Some(std::cmp::Reverse((d, u))) = heap.pop() {
                let u = u as usize;
                if d > dist[u] {
                    continue;
                }
                for &eid in &self.adjacency[u] {
                    let e = &self.edges[eid as usize];
                    if e.cap == 0 {
                        continue;
                    }
                    let w = e.to as usize;
                    let nd = d + e.cost + potential[u] - potential[w];
                    if nd < dist[w] {
                        dist[w] = nd;
                        pred_edge[w] = eid;
                        heap.push(std::cmp::Reverse((nd, e.to)));
                    }
                }
            }
            if dist[sink] == i64::MAX {
                return total;
            }
            for u in 0..v {
                if dist[u] < i64::MAX {
                    potential[u] += dist[u];
                }
            }
            let mut bottleneck = u32::MAX;
            let mut u = sink;
            while u != source {
                let eid = pred_edge[u] as usize;
                bottleneck = bottleneck.min(self.edges[eid].cap);
                u = self.edges[eid ^ 1].to as usize;
            }
            let mut u = sink;
            while u != source {
                let eid = pred_edge[u] as usize;
                self.edges[eid].cap -= bottleneck;
                self.edges[eid ^ 1].cap += bottleneck;
                u = self.edges[eid ^ 1].to as usize;
            }
            total += bottleneck as u64;
        }
    }

    /// Vertices reachable from `start` through positive residual capacity.
    fn residual_reachable(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adjacency.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &eid in &self.adjacency[u] {
                let e = &self.edges[eid as usize];
                if e.cap > 0 && !seen[e.to as usize] {
                    seen[e.to as usize] = true;
                    queue.push_back(e.to as usize);
                }
            }
        }
        seen
    }
}

/// Dense numbering of every set in layers `lo..=hi` of `[n]`: layers
/// ascending, colex within a layer. This is the canonical family order
/// restricted to the band.
struct LayerBand {
    lo: u32,
    words: Vec<u64>,
    layer_start: Vec<usize>,
}

impl LayerBand {
    fn new(universe: u32, lo: u32, hi: u32) -> Result<Self> {
        let mut words = Vec::new();
        let mut layer_start = Vec::with_capacity((hi - lo + 2) as usize);
        for t in lo..=hi {
            layer_start.push(words.len());
            let count = crate::colex::binomial(universe as u64, t as u64)?;
            let mut word = if t == 0 { 0 } else { (1u64 << t) - 1 };
            for _ in 0..count {
                words.push(word);
                word = next_same_cardinality(word);
            }
        }
        layer_start.push(words.len());
        Ok(Self {
            lo,
            words,
            layer_start,
        })
    }

    fn len(&self) -> usize {
        self.words.len()
    }

    fn layer_slice(&self, t: u32) -> (usize, &[u64]) {
        let i = (t - self.lo) as usize;
        let start = self.layer_start[i];
        (start, &self.words[start..self.layer_start[i + 1]])
    }

    fn index_of(&self, word: u64) -> usize {
        let t = word.count_ones();
        let (start, slice) = self.layer_slice(t);
        start + slice.binary_search(&word).expect("word in band")
    }
}

/// Solves the instance: exactly `target_paths` vertex-disjoint skipless
/// paths covering all required sets, with the fewest non-required sets.
///
/// Infeasibility returns an error carrying the required sets on the
/// source side of the final residual cut; the certificate is empty when
/// the target itself exceeds the band's vertex capacity.
pub fn min_path_cover(inst: &LayeredCoverInstance) -> Result<Vec<Chain>> {
    let n = inst.required.universe();
    let band = LayerBand::new(n, inst.lo, inst.hi)?;
    let node_count = band.len();
    let m = inst.target_paths;

    let mut required = vec![false; node_count];
    for s in inst.required() {
        required[band.index_of(s.word())] = true;
    }

    let v_in = |i: usize| 2 * i;
    let v_out = |i: usize| 2 * i + 1;
    let s_node = 2 * node_count;
    let t_node = 2 * node_count + 1;
    let ss = 2 * node_count + 2;
    let tt = 2 * node_count + 3;
    let mut net = FlowNetwork::new(2 * node_count + 4);

    // Vertex split arcs; lower bound 1 on required vertices is shifted
    // onto the auxiliary source and sink.
    let mut split_edge = vec![usize::MAX; node_count];
    for i in 0..node_count {
        if required[i] {
            net.add_edge(ss, v_out(i), 1, 0);
            net.add_edge(v_in(i), tt, 1, 0);
        } else {
            split_edge[i] = net.add_edge(v_in(i), v_out(i), 1, 1);
        }
    }
    // Hasse arcs to the next layer up.
    let mut hasse_edges: Vec<(usize, usize, usize)> = Vec::new();
    for i in 0..node_count {
        let word = band.words[i];
        let t = word.count_ones();
        if t >= inst.hi {
            continue;
        }
        for e in 1..=n {
            let bit = 1u64 << (e - 1);
            if word & bit == 0 {
                let j = band.index_of(word | bit);
                hasse_edges.push((net.add_edge(v_out(i), v_in(j), 1, 0), i, j));
            }
        }
    }
    // Paths may start and end at any vertex.
    let mut start_edges: Vec<(usize, usize)> = Vec::new();
    let mut path_cap = 0u32;
    for i in 0..node_count {
        start_edges.push((net.add_edge(s_node, v_in(i), 1, 0), i));
        net.add_edge(v_out(i), t_node, 1, 0);
        path_cap = path_cap.saturating_add(1);
    }
    // Exactly m path units circulate through the endpoints.
    let m32 = u32::try_from(m.min(path_cap as usize + 1)).unwrap_or(u32::MAX);
    net.add_edge(ss, s_node, m32, 0);
    net.add_edge(t_node, tt, m32, 0);

    let supply = inst.required().len() as u64 + m32 as u64;
    let sent = net.min_cost_max_flow(ss, tt);
    if sent < supply || m32 as usize != m {
        let reachable = net.residual_reachable(ss);
        let cut = inst
            .required()
            .iter()
            .filter(|s| reachable[v_out(band.index_of(s.word()))])
            .copied();
        return Err(Error::InfeasibleTarget {
            target: m,
            cut: Family::from_sets(n, cut)?,
        });
    }

    // Reconstruct the m paths from the unit flows.
    let mut next = vec![usize::MAX; node_count];
    for &(eid, from, to) in &hasse_edges {
        if net.flow(eid) > 0 {
            debug_assert_eq!(next[from], usize::MAX);
            next[from] = to;
        }
    }
    let mut chains = Vec::with_capacity(m);
    for &(eid, start) in &start_edges {
        if net.flow(eid) == 0 {
            continue;
        }
        let mut sets = Vec::new();
        let mut i = start;
        loop {
            sets.push(ElementSet::from_word(n, band.words[i])?);
            if next[i] == usize::MAX {
                break;
            }
            i = next[i];
        }
        chains.push(Chain::new(sets)?);
    }
    debug_assert_eq!(chains.len(), m);
    Ok(chains)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(universe: u32, sets: &[&[u32]]) -> Family {
        Family::from_sets(
            universe,
            sets.iter()
                .map(|s| ElementSet::from_elements(universe, s).unwrap()),
        )
        .unwrap()
    }

    fn cover_words(chains: &[Chain]) -> Vec<u64> {
        let mut words: Vec<u64> = chains
            .iter()
            .flat_map(|c| c.sets().iter().map(|s| s.word()))
            .collect();
        words.sort();
        words
    }

    #[test]
    fn single_maximal_chain_through_the_cube() {
        let req = family(3, &[&[], &[1, 2, 3]]);
        let inst = LayeredCoverInstance::new(req, 1).unwrap();
        let chains = min_path_cover(&inst).unwrap();
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].sets().len(), 4);
        assert!(chains[0].is_skipless());
        // Cost 2: both intermediate sets are non-required.
    }

    #[test]
    fn full_layer_covered_by_singletons() {
        let req = Family::full_layer(4, 2).unwrap();
        let inst = LayeredCoverInstance::new(req.clone(), 6).unwrap();
        let chains = min_path_cover(&inst).unwrap();
        assert_eq!(chains.len(), 6);
        assert!(chains.iter().all(|c| c.sets().len() == 1));
        let mut expected: Vec<u64> = req.iter().map(|s| s.word()).collect();
        expected.sort();
        assert_eq!(cover_words(&chains), expected);
    }

    #[test]
    fn infeasible_target_reports_a_cut() {
        // An antichain of 6 sets cannot be covered by fewer paths than
        // its width.
        let req = Family::full_layer(4, 2).unwrap();
        let inst = LayeredCoverInstance::new(req, 5).unwrap();
        match min_path_cover(&inst) {
            Err(Error::InfeasibleTarget { target, cut }) => {
                assert_eq!(target, 5);
                assert!(!cut.is_empty());
            }
            other => panic!("expected infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn cost_zero_when_required_is_already_a_path() {
        let req = family(3, &[&[1], &[1, 2], &[1, 2, 3]]);
        let inst = LayeredCoverInstance::new(req.clone(), 1).unwrap();
        let chains = min_path_cover(&inst).unwrap();
        assert_eq!(chains.len(), 1);
        assert_eq!(cover_words(&chains), vec![0b001, 0b011, 0b111]);
    }

    #[test]
    fn extra_paths_beyond_cover_land_on_cheap_singletons() {
        let req = family(3, &[&[1], &[1, 2]]);
        let inst = LayeredCoverInstance::new(req.clone(), 3).unwrap();
        let chains = min_path_cover(&inst).unwrap();
        assert_eq!(chains.len(), 3);
        // Splitting the two required sets over two single-vertex paths
        // leaves one filler vertex as the only extra cost.
        let used: usize = chains.iter().map(|c| c.sets().len()).sum();
        assert_eq!(used, 3);
        let words = cover_words(&chains);
        for s in req.iter() {
            assert!(words.contains(&s.word()));
        }
    }

    #[test]
    fn target_larger_than_band_is_infeasible() {
        let req = family(2, &[&[1]]);
        let inst = LayeredCoverInstance::new(req, 5).unwrap();
        assert!(matches!(
            min_path_cover(&inst),
            Err(Error::InfeasibleTarget { .. })
        ));
    }
}
