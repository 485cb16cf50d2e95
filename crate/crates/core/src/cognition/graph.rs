//! Graph memory.
//!
//! Each node `i` has a random vector `H_i` and a memory `M_i`, the sum of its
//! neighbors' vectors. The graph vector is `G = bundle_i(H_i * bin(M_i))`,
//! so unbinding `H_i` from `G` yields a noisy copy of node `i`'s memory.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hv::ops::{accumulate, binarize};
use crate::hv::rng::split_seed;
use crate::hv::{bind, bundle, rank_score, unbind, Codebook, HyperVector, Metric, Repr};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphComposition {
    /// `G = bundle_i(H_i * M_i)`.
    #[default]
    BindNodeMemory,
    /// `G = bundle_i(H_i, M_i)`: superposes node and memory without binding.
    BundleNodeMemory,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphOptions {
    pub dim: usize,
    /// Drop self-loops and repeated edges instead of failing.
    pub dedupe: bool,
    pub composition: GraphComposition,
}

impl Default for GraphOptions {
    fn default() -> Self {
        GraphOptions {
            dim: crate::hv::DEFAULT_DIM,
            dedupe: false,
            composition: GraphComposition::BindNodeMemory,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GraphMemory {
    nodes: Codebook,
    memories: Vec<Vec<i64>>,
    memory_hvs: Vec<HyperVector>,
    graph: HyperVector,
    edges: Vec<(usize, usize)>,
    seed: u64,
}

fn memory_tie_seed(seed: u64, i: usize) -> u64 {
    split_seed(seed, "node-memory", i as u64)
}

/// Encodes an undirected simple graph. `extra_nodes` adds isolated nodes.
pub fn graph_encode(
    edges: &[(String, String)],
    extra_nodes: &[String],
    seed: u64,
    opts: GraphOptions,
) -> Result<GraphMemory> {
    let mut nodes = Codebook::new("graph-node", seed, opts.dim, Repr::Bipolar)?;
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
    for (u, v) in edges {
        if u == v {
            if opts.dedupe {
                continue;
            }
            return Err(Error::InvalidGraph(format!("self-loop on {u:?}")));
        }
        nodes.insert(u)?;
        nodes.insert(v)?;
        let (a, b) = (nodes.position(u).expect("inserted"), nodes.position(v).expect("inserted"));
        let key = (a.min(b), a.max(b));
        if pairs.contains(&key) {
            if opts.dedupe {
                continue;
            }
            return Err(Error::InvalidGraph(format!("duplicate edge {u:?}-{v:?}")));
        }
        pairs.push(key);
    }
    for n in extra_nodes {
        nodes.insert(n)?;
    }
    if nodes.is_empty() {
        return Err(Error::InvalidGraph("graph has no nodes".into()));
    }
    let mut memories = vec![vec![0i64; opts.dim]; nodes.len()];
    for &(a, b) in &pairs {
        accumulate(&mut memories[a], &nodes.vectors()[b], 1);
        accumulate(&mut memories[b], &nodes.vectors()[a], 1);
    }
    let memory_hvs = memories
        .iter()
        .enumerate()
        .map(|(i, m)| binarize(m, memory_tie_seed(seed, i), Repr::Bipolar))
        .collect::<Result<Vec<_>>>()?;
    let terms: Vec<HyperVector> = match opts.composition {
        GraphComposition::BindNodeMemory => nodes
            .vectors()
            .iter()
            .zip(&memory_hvs)
            .map(|(h, m)| bind(h, m))
            .collect::<Result<_>>()?,
        GraphComposition::BundleNodeMemory => nodes
            .vectors()
            .iter()
            .zip(&memory_hvs)
            .flat_map(|(h, m)| [h.clone(), m.clone()])
            .collect(),
    };
    let graph = if terms.len() == 1 {
        terms[0].clone()
    } else {
        bundle(&terms, split_seed(seed, "graph", 0))?.binarized
    };
    Ok(GraphMemory {
        nodes,
        memories,
        memory_hvs,
        graph,
        edges: pairs,
        seed,
    })
}

impl GraphMemory {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &Codebook {
        &self.nodes
    }

    pub fn graph_vector(&self) -> &HyperVector {
        &self.graph
    }

    /// Exact neighbor sum of node `i` (bipolar view).
    pub fn memory(&self, i: usize) -> &[i64] {
        &self.memories[i]
    }

    pub fn memory_hv(&self, i: usize) -> &HyperVector {
        &self.memory_hvs[i]
    }

    pub fn memory_tie_seed(&self, i: usize) -> u64 {
        memory_tie_seed(self.seed, i)
    }

    fn index(&self, node: &str) -> Result<usize> {
        self.nodes
            .position(node)
            .ok_or_else(|| Error::MissingItem(format!("node {node:?} not in graph")))
    }

    /// Cosine of `bin(M_i)` and `H_j`.
    pub fn directed_score(&self, i: &str, j: &str) -> Result<f64> {
        let (a, b) = (self.index(i)?, self.index(j)?);
        rank_score(&self.memory_hvs[a], &self.nodes.vectors()[b], Metric::Cosine)
    }

    /// Mean of both directed scores, so the score is symmetric in `i`, `j`.
    pub fn edge_score(&self, i: &str, j: &str) -> Result<f64> {
        Ok((self.directed_score(i, j)? + self.directed_score(j, i)?) / 2.0)
    }

    /// Edge score read back from the graph vector alone: `M_i` is
    /// approximated by `G * H_i`.
    pub fn edge_score_from_graph(&self, i: &str, j: &str) -> Result<f64> {
        let (a, b) = (self.index(i)?, self.index(j)?);
        let h = self.nodes.vectors();
        let dir = |x: usize, y: usize| -> Result<f64> {
            rank_score(&unbind(&self.graph, &h[x])?, &h[y], Metric::Cosine)
        };
        Ok((dir(a, b)? + dir(b, a)?) / 2.0)
    }
}

/// `(present, score)` with `present = score >= threshold`.
pub fn graph_edge_query(gm: &GraphMemory, i: &str, j: &str, threshold: f64) -> Result<(bool, f64)> {
    let s = gm.edge_score(i, j)?;
    Ok((s >= threshold, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::erdos_renyi;
    use crate::learning::metrics::auc;

    fn e(u: &str, v: &str) -> (String, String) {
        (u.into(), v.into())
    }

    fn opts(dim: usize) -> GraphOptions {
        GraphOptions {
            dim,
            ..Default::default()
        }
    }

    #[test]
    fn single_edge_memories() {
        let g = graph_encode(&[e("1", "2")], &[], 3, opts(1000)).unwrap();
        let h = g.nodes().vectors();
        assert_eq!(g.memory_hv(0), &h[1]);
        assert_eq!(g.memory_hv(1), &h[0]);
        assert_eq!(g.memory(0), h[1].signed_values().as_slice());
        assert_eq!(graph_edge_query(&g, "1", "2", 0.25).unwrap(), (true, 1.0));
    }

    #[test]
    fn star_graph() {
        let edges: Vec<_> = ["a", "b", "c", "d"].iter().map(|l| e("hub", l)).collect();
        let g = graph_encode(&edges, &[], 5, opts(2048)).unwrap();
        let h = g.nodes().vectors();
        let leaves: Vec<_> = h[1..].to_vec();
        assert_eq!(g.memory_hv(0), &bundle(&leaves, g.memory_tie_seed(0)).unwrap().binarized);
        for i in 1..5 {
            assert_eq!(g.memory_hv(i), &h[0]);
        }
    }

    #[test]
    fn invalid_graphs() {
        assert!(matches!(
            graph_encode(&[e("1", "1")], &[], 0, opts(64)),
            Err(Error::InvalidGraph(_))
        ));
        let dup = [e("1", "2"), e("2", "1")];
        assert!(graph_encode(&dup, &[], 0, opts(64)).is_err());
        let mut o = opts(64);
        o.dedupe = true;
        assert_eq!(graph_encode(&dup, &[], 0, o).unwrap().edge_count(), 1);
        assert!(graph_encode(&[], &[], 0, opts(64)).is_err());
        let g = graph_encode(&[e("1", "2")], &[], 0, opts(64)).unwrap();
        assert!(matches!(g.edge_score("1", "9"), Err(Error::MissingItem(_))));
    }

    #[test]
    fn er_graph_recovers_edges() {
        let edges = erdos_renyi(50, 0.1, 1);
        let nodes: Vec<String> = (0..50).map(|i| i.to_string()).collect();
        let g = graph_encode(&edges, &nodes, 2, opts(10_000)).unwrap();
        let (mut pos, mut neg, mut pos_g, mut neg_g) = (vec![], vec![], vec![], vec![]);
        for u in 0..50 {
            for v in (u + 1)..50 {
                let (a, b) = (u.to_string(), v.to_string());
                let s = g.edge_score(&a, &b).unwrap();
                assert_eq!(s, g.edge_score(&b, &a).unwrap());
                let sg = g.edge_score_from_graph(&a, &b).unwrap();
                if edges.contains(&(a.clone(), b.clone())) {
                    pos.push(s);
                    pos_g.push(sg);
                } else {
                    neg.push(s);
                    neg_g.push(sg);
                }
            }
        }
        assert!(auc(&pos, &neg) >= 0.95);
        assert!(neg.iter().all(|s| s.abs() < 0.06));
        assert!(auc(&pos_g, &neg_g) > 0.8);
    }
}
