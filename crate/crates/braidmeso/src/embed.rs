//! Backtracking enumeration of simplicial graph embeddings, used for the
//! link inclusion into the Fano incidence graph and its complement analysis.

use crate::linkgraph::LabeledMetricGraph;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct GraphEmbedding {
    /// vertex_map[v] = image of source vertex v in the target.
    pub vertex_map: Vec<usize>,
}

impl GraphEmbedding {
    /// Independent re-verification: injective and incidence-preserving.
    pub fn verify(&self, src: &LabeledMetricGraph, dst: &LabeledMetricGraph) -> bool {
        let n = src.vertex_count();
        if self.vertex_map.len() != n {
            return false;
        }
        let mut seen = vec![false; dst.vertex_count()];
        for &w in &self.vertex_map {
            if w >= dst.vertex_count() || seen[w] {
                return false;
            }
            seen[w] = true;
        }
        src.edges
            .iter()
            .all(|e| dst.has_edge(self.vertex_map[e.u], self.vertex_map[e.v]))
    }

    /// Target edges not hit by the embedding, as index pairs of the target.
    pub fn complement_edges(
        &self,
        src: &LabeledMetricGraph,
        dst: &LabeledMetricGraph,
    ) -> Vec<(usize, usize)> {
        let mut hit = vec![false; dst.edge_count()];
        for e in &src.edges {
            let (a, b) = (self.vertex_map[e.u], self.vertex_map[e.v]);
            for (i, f) in dst.edges.iter().enumerate() {
                if (f.u == a && f.v == b) || (f.u == b && f.v == a) {
                    hit[i] = true;
                }
            }
        }
        dst.edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !hit[*i])
            .map(|(_, f)| (f.u, f.v))
            .collect()
    }
}

/// Exhaustive enumeration of simplicial embeddings src -> dst in
/// deterministic order. When `respect_lengths` is set, matched edges must
/// also agree in metric length.
pub fn embedding_search(
    src: &LabeledMetricGraph,
    dst: &LabeledMetricGraph,
    respect_lengths: bool,
    limit: Option<usize>,
) -> Vec<GraphEmbedding> {
    let n = src.vertex_count();
    let m = dst.vertex_count();
    let mut out = Vec::new();
    if n > m {
        return out;
    }
    // order source vertices for connectivity: BFS from vertex 0
    let order = bfs_order(src);
    let src_deg = src.degrees();
    let dst_deg = dst.degrees();
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; m];

    #[allow(clippy::too_many_arguments)]
    fn rec(
        src: &LabeledMetricGraph,
        dst: &LabeledMetricGraph,
        order: &[usize],
        pos: usize,
        src_deg: &[usize],
        dst_deg: &[usize],
        respect_lengths: bool,
        assign: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<GraphEmbedding>,
        limit: Option<usize>,
    ) {
        if limit.is_some_and(|l| out.len() >= l) {
            return;
        }
        if pos == order.len() {
            out.push(GraphEmbedding {
                vertex_map: assign.clone(),
            });
            return;
        }
        let v = order[pos];
        'cand: for w in 0..dst.vertex_count() {
            if used[w] || src_deg[v] > dst_deg[w] {
                continue;
            }
            for (x, ei) in src.neighbors(v) {
                if assign[x] != usize::MAX {
                    let want_units = src.edges[ei].units;
                    let found = dst.edges.iter().any(|e| {
                        ((e.u == w && e.v == assign[x]) || (e.v == w && e.u == assign[x]))
                            && (!respect_lengths || e.units == want_units)
                    });
                    if !found {
                        continue 'cand;
                    }
                }
            }
            assign[v] = w;
            used[w] = true;
            rec(
                src,
                dst,
                order,
                pos + 1,
                src_deg,
                dst_deg,
                respect_lengths,
                assign,
                used,
                out,
                limit,
            );
            assign[v] = usize::MAX;
            used[w] = false;
        }
    }
    rec(
        src,
        dst,
        &order,
        0,
        &src_deg,
        &dst_deg,
        respect_lengths,
        &mut assign,
        &mut used,
        &mut out,
        limit,
    );
    out
}

fn bfs_order(g: &LabeledMetricGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for (w, _) in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

/// Is the edge set a forest, and if so, does discarding isolated vertices
/// leave a single tree with the given number of edges?
pub fn is_tree_after_isolated_removal(
    edges: &[(usize, usize)],
    expected_edges: usize,
) -> bool {
    if edges.len() != expected_edges {
        return false;
    }
    let mut verts: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    verts.sort();
    verts.dedup();
    // connected + acyclic <=> |V| = |E| + 1 and connected
    if verts.len() != edges.len() + 1 {
        return false;
    }
    let index = |v: usize| verts.binary_search(&v).unwrap();
    let mut dsu: Vec<usize> = (0..verts.len()).collect();
    fn find(dsu: &mut Vec<usize>, x: usize) -> usize {
        if dsu[x] != x {
            let r = find(dsu, dsu[x]);
            dsu[x] = r;
        }
        dsu[x]
    }
    for &(u, v) in edges {
        let (ru, rv) = (find(&mut dsu, index(u)), find(&mut dsu, index(v)));
        if ru == rv {
            return false;
        }
        dsu[ru] = rv;
    }
    true
}

/// Degrees within an edge set, keyed by vertex.
pub fn edge_set_degrees(edges: &[(usize, usize)]) -> std::collections::BTreeMap<usize, usize> {
    let mut d = std::collections::BTreeMap::new();
    for &(u, v) in edges {
        *d.entry(u).or_insert(0) += 1;
        *d.entry(v).or_insert(0) += 1;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkgraph::{build_l, build_l2};

    #[test]
    fn l_embeds_into_l2() {
        let l = build_l();
        let l2 = build_l2();
        let found = embedding_search(&l, &l2, true, Some(1));
        assert!(!found.is_empty());
        assert!(found[0].verify(&l, &l2));
    }

    #[test]
    fn l2_does_not_embed_into_l() {
        let l = build_l();
        let l2 = build_l2();
        assert!(embedding_search(&l2, &l, false, Some(1)).is_empty());
    }

    #[test]
    fn complement_of_l_in_l2_is_a_five_edge_tree() {
        let l = build_l();
        let l2 = build_l2();
        let found = embedding_search(&l, &l2, true, None);
        assert!(!found.is_empty());
        for emb in &found {
            assert!(emb.verify(&l, &l2));
            let comp = emb.complement_edges(&l, &l2);
            assert!(
                is_tree_after_isolated_removal(&comp, 5),
                "complement {comp:?} is not a 5-edge tree"
            );
            // double-star shape: exactly two internal vertices of degree 3
            let degs = edge_set_degrees(&comp);
            let threes = degs.values().filter(|&&d| d == 3).count();
            let ones = degs.values().filter(|&&d| d == 1).count();
            assert_eq!((threes, ones), (2, 4), "tree degrees {degs:?}");
        }
    }

    #[test]
    fn tree_predicate_rejects_disconnected_sets() {
        assert!(is_tree_after_isolated_removal(
            &[(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)],
            5
        ));
        assert!(!is_tree_after_isolated_removal(
            &[(0, 1), (2, 3), (4, 5), (6, 7), (8, 9)],
            5
        ));
        assert!(!is_tree_after_isolated_removal(&[(0, 1), (1, 2), (2, 0)], 3));
    }
}
