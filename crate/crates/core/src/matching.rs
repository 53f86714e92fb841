//! Bipartite maximum matching and Hall deficiency certificates.
//!
//! One deterministic Hopcroft-Karp engine backs every matching question in
//! the crate: the shadow matching number of a single layer, Dilworth width
//! via the comparability split graph, and the incremental probes of the
//! saturation checker.

use crate::error::Error;
use crate::lattice::{shadow, Family};
use crate::Result;

/// A bipartite graph given by adjacency lists from left to right vertices.
#[derive(Clone, Debug)]
pub struct BipartiteGraph {
    left_count: usize,
    right_count: usize,
    adjacency: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Validates index ranges and rejects duplicate edges within a list.
    pub fn new(left_count: usize, right_count: usize, adjacency: Vec<Vec<usize>>) -> Result<Self> {
        if adjacency.len() != left_count {
            return Err(Error::Precondition(format!(
                "expected {left_count} adjacency lists, got {}",
                adjacency.len()
            )));
        }
        for (u, list) in adjacency.iter().enumerate() {
            let mut seen = vec![false; right_count];
            for &v in list {
                if v >= right_count {
                    return Err(Error::Precondition(format!(
                        "edge ({u}, {v}) leaves the right side of size {right_count}"
                    )));
                }
                if seen[v] {
                    return Err(Error::Precondition(format!("duplicate edge ({u}, {v})")));
                }
                seen[v] = true;
            }
        }
        Ok(Self {
            left_count,
            right_count,
            adjacency,
        })
    }

    pub fn left_count(&self) -> usize {
        self.left_count
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }
}

/// A matching as (left, right) index pairs, sorted by left index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Runs Hopcroft-Karp phases until no augmenting path remains, starting
/// from whatever partial matching `match_l`/`match_r` already encode.
/// Returns the final matching size. Deterministic: vertices are scanned
/// in index order and adjacency lists in list order.
pub(crate) fn augment_to_maximum(
    adjacency: &[Vec<usize>],
    match_l: &mut [Option<usize>],
    match_r: &mut [Option<usize>],
) -> usize {
    let left_count = adjacency.len();
    let mut dist = vec![usize::MAX; left_count];
    let mut cursor = vec![0usize; left_count];
    let mut queue = std::collections::VecDeque::new();

    loop {
        // Breadth-first layering from the free left vertices.
        queue.clear();
        for u in 0..left_count {
            if match_l[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut reachable_free_right = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adjacency[u] {
                match match_r[v] {
                    None => reachable_free_right = true,
                    Some(w) => {
                        if dist[w] == usize::MAX {
                            dist[w] = dist[u] + 1;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        if !reachable_free_right {
            break;
        }

        cursor.iter_mut().for_each(|c| *c = 0);
        for u in 0..left_count {
            if match_l[u].is_none() {
                level_graph_augment(u, adjacency, &mut dist, &mut cursor, match_l, match_r);
            }
        }
    }
    match_l.iter().filter(|m| m.is_some()).count()
}

/// Iterative depth-first search for one augmenting path inside the level
/// graph built by the breadth-first pass.
fn level_graph_augment(
    start: usize,
    adjacency: &[Vec<usize>],
    dist: &mut [usize],
    cursor: &mut [usize],
    match_l: &mut [Option<usize>],
    match_r: &mut [Option<usize>],
) -> bool {
    let mut path: Vec<(usize, usize)> = Vec::new();
    let mut u = start;
    loop {
        let mut advanced = false;
        while cursor[u] < adjacency[u].len() {
            let v = adjacency[u][cursor[u]];
            cursor[u] += 1;
            match match_r[v] {
                None => {
                    path.push((u, v));
                    for &(a, b) in &path {
                        match_l[a] = Some(b);
                        match_r[b] = Some(a);
                    }
                    return true;
                }
                Some(w) if dist[u] != usize::MAX && dist[w] == dist[u] + 1 => {
                    path.push((u, v));
                    u = w;
                    advanced = true;
                    break;
                }
                _ => {}
            }
        }
        if !advanced {
            dist[u] = usize::MAX;
            match path.pop() {
                Some((prev, _)) => u = prev,
                None => return false,
            }
        }
    }
}

/// Maximum-cardinality matching via Hopcroft-Karp.
pub fn max_matching(graph: &BipartiteGraph) -> Matching {
    let mut match_l = vec![None; graph.left_count()];
    let mut match_r = vec![None; graph.right_count()];
    augment_to_maximum(graph.adjacency(), &mut match_l, &mut match_r);
    collect_pairs(&match_l)
}

pub(crate) fn collect_pairs(match_l: &[Option<usize>]) -> Matching {
    Matching {
        pairs: match_l
            .iter()
            .enumerate()
            .filter_map(|(u, m)| m.map(|v| (u, v)))
            .collect(),
    }
}

/// Hall deficiency of the left side with a witness set.
///
/// Returns `d = max over X of |X| - |N(X)|` together with a left vertex
/// set attaining the maximum: the vertices reachable by alternating paths
/// from the unmatched left vertices of a maximum matching. A graph whose
/// left side is perfectly matched yields `(0, [])`.
pub fn hall_deficiency(graph: &BipartiteGraph) -> (usize, Vec<usize>) {
    let mut match_l = vec![None; graph.left_count()];
    let mut match_r = vec![None; graph.right_count()];
    let size = augment_to_maximum(graph.adjacency(), &mut match_l, &mut match_r);
    let d = graph.left_count() - size;

    let mut in_witness = vec![false; graph.left_count()];
    let mut queue = std::collections::VecDeque::new();
    for u in 0..graph.left_count() {
        if match_l[u].is_none() {
            in_witness[u] = true;
            queue.push_back(u);
        }
    }
    let mut right_seen = vec![false; graph.right_count()];
    while let Some(u) = queue.pop_front() {
        for &v in &graph.adjacency()[u] {
            if right_seen[v] {
                continue;
            }
            right_seen[v] = true;
            if let Some(w) = match_r[v] {
                if !in_witness[w] {
                    in_witness[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let witness: Vec<usize> = (0..graph.left_count()).filter(|&u| in_witness[u]).collect();

    // The alternating-reachability argument guarantees the witness attains
    // the deficiency; check it directly since it is cheap.
    debug_assert_eq!(
        witness.len() - right_seen.iter().filter(|&&s| s).count(),
        d
    );
    (d, witness)
}

/// The shadow matching number of a single-layer family: the size of a
/// maximum matching between `B` and `shadow(B)` under containment.
pub fn nu(b: &Family) -> Result<usize> {
    let Some(first) = b.members().first() else {
        return Err(Error::Precondition(
            "shadow matching number needs a nonempty family".into(),
        ));
    };
    let t = first.cardinality();
    if b.iter().any(|s| s.cardinality() != t) {
        return Err(Error::MixedLayers);
    }
    if t == 0 {
        return Err(Error::Precondition(
            "shadow matching number needs cardinality at least 1".into(),
        ));
    }
    let sh = shadow(b)?;
    let right_index = |set_word: u64| {
        sh.members()
            .binary_search_by_key(&(t - 1, set_word), |s| (s.cardinality(), s.word()))
            .expect("shadow member present")
    };
    let adjacency: Vec<Vec<usize>> = b
        .iter()
        .map(|s| {
            s.elements()
                .map(|e| right_index(s.word() & !(1 << (e - 1))))
                .collect()
        })
        .collect();
    let graph = BipartiteGraph::new(b.len(), sh.len(), adjacency)?;
    Ok(max_matching(&graph).len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ElementSet;
    use proptest::prelude::*;

    fn graph(l: usize, r: usize, adj: &[&[usize]]) -> BipartiteGraph {
        BipartiteGraph::new(l, r, adj.iter().map(|a| a.to_vec()).collect()).unwrap()
    }

    #[test]
    fn complete_three_by_three() {
        let g = graph(3, 3, &[&[0, 1, 2], &[0, 1, 2], &[0, 1, 2]]);
        assert_eq!(max_matching(&g).len(), 3);
    }

    #[test]
    fn colex_segment_against_its_shadow() {
        // Left: {12, 13, 23, 14}; right: {1, 2, 3, 4}; containment edges.
        let g = graph(4, 4, &[&[0, 1], &[0, 2], &[1, 2], &[0, 3]]);
        let m = max_matching(&g);
        assert_eq!(m.len(), 4);
    }

    #[test]
    fn edgeless_graph() {
        let g = graph(3, 2, &[&[], &[], &[]]);
        assert_eq!(max_matching(&g).len(), 0);
        let (d, witness) = hall_deficiency(&g);
        assert_eq!(d, 3);
        assert_eq!(witness, vec![0, 1, 2]);
    }

    #[test]
    fn star_into_one_right_vertex() {
        let g = graph(4, 1, &[&[0], &[0], &[0], &[0]]);
        let (d, witness) = hall_deficiency(&g);
        assert_eq!(d, 3);
        assert_eq!(witness, vec![0, 1, 2, 3]);
    }

    #[test]
    fn perfectly_matched_left_has_empty_witness() {
        let g = graph(2, 3, &[&[0, 1], &[1, 2]]);
        let (d, witness) = hall_deficiency(&g);
        assert_eq!(d, 0);
        assert!(witness.is_empty());
    }

    #[test]
    fn complete_three_by_two() {
        let g = graph(3, 2, &[&[0, 1], &[0, 1], &[0, 1]]);
        let (d, _) = hall_deficiency(&g);
        assert_eq!(d, 1);
    }

    #[test]
    fn rejects_out_of_range_and_duplicate_edges() {
        assert!(BipartiteGraph::new(1, 1, vec![vec![1]]).is_err());
        assert!(BipartiteGraph::new(1, 2, vec![vec![0, 0]]).is_err());
        assert!(BipartiteGraph::new(2, 1, vec![vec![0]]).is_err());
    }

    #[test]
    fn shadow_matching_number_examples() {
        let seg = Family::from_sets(
            4,
            [
                ElementSet::from_elements(4, &[1, 2]).unwrap(),
                ElementSet::from_elements(4, &[1, 3]).unwrap(),
                ElementSet::from_elements(4, &[2, 3]).unwrap(),
                ElementSet::from_elements(4, &[1, 4]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(nu(&seg).unwrap(), 4);

        let single = Family::from_sets(6, [ElementSet::from_elements(6, &[2, 5]).unwrap()]).unwrap();
        assert_eq!(nu(&single).unwrap(), 1);

        assert_eq!(nu(&Family::full_layer(4, 1).unwrap()).unwrap(), 1);

        assert!(nu(&Family::new(3).unwrap()).is_err());
        assert!(nu(&Family::full_powerset(2).unwrap()).is_err());
        let empty_layer = Family::full_layer(3, 0).unwrap();
        assert!(nu(&empty_layer).is_err());
    }

    proptest! {
        /// König/Hall consistency: matching size plus deficiency equals the
        /// left count, and the witness attains the deficiency.
        #[test]
        fn matching_and_deficiency_agree(
            left in 1usize..12,
            right in 1usize..12,
            seed in proptest::collection::vec(0u16.., 0..144),
        ) {
            let mut adjacency = vec![Vec::new(); left];
            for (i, s) in seed.iter().enumerate() {
                let u = i % left;
                let v = (*s as usize) % right;
                if !adjacency[u].contains(&v) {
                    adjacency[u].push(v);
                }
            }
            let g = BipartiteGraph::new(left, right, adjacency).unwrap();
            let m = max_matching(&g);
            let (d, witness) = hall_deficiency(&g);
            prop_assert_eq!(m.len() + d, left);

            // Recompute |N(witness)| from scratch.
            let mut seen = vec![false; right];
            for &u in &witness {
                for &v in &g.adjacency()[u] {
                    seen[v] = true;
                }
            }
            let neighborhood = seen.iter().filter(|&&s| s).count();
            prop_assert_eq!(witness.len() - neighborhood, d);

            // Matched pairs are real edges with distinct endpoints.
            let mut used_r = vec![false; right];
            for &(u, v) in &m.pairs {
                prop_assert!(g.adjacency()[u].contains(&v));
                prop_assert!(!used_r[v]);
                used_r[v] = true;
            }
        }
    }
}
