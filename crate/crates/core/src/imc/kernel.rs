//! Kernel graphs `F(I, P, C)` and their spatial or temporal lowering.
//!
//! A graph holds kernel functions tagged with the execution modes that use
//! them, item-memory inputs `I`, composed-vector inputs `P` and control
//! constructs `C`. A node shared by several modes is a multiplexed data
//! path, so `C` is non-empty exactly when some node is shared.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelOp {
    Bind,
    Bundle,
    Permute,
    Similarity,
    Projection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelNode {
    pub name: String,
    pub op: KernelOp,
    pub modes: Vec<String>,
    pub dim: usize,
    /// Stored operand vectors of `dim` bits.
    pub items: usize,
    /// Graph inputs or other node names.
    pub inputs: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct KernelGraph {
    pub nodes: Vec<KernelNode>,
    pub item_inputs: Vec<String>,
    pub composed_inputs: Vec<String>,
    pub controls: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    Spatial,
    Temporal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoreGroup {
    pub name: String,
    pub modes: Vec<String>,
    pub nodes: Vec<String>,
    pub bits: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelMapping {
    pub strategy: Strategy,
    pub groups: Vec<CoreGroup>,
    pub schedule: Vec<String>,
    pub reprograms: u64,
    /// Stored bits over all groups.
    pub area_bits: u64,
    /// Critical-path steps of the schedule, reprogramming included.
    pub latency_steps: u64,
}

impl KernelNode {
    pub fn bits(&self) -> u64 {
        self.items as u64 * self.dim as u64
    }
}

impl KernelGraph {
    /// Modes in first-appearance order.
    pub fn modes(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for n in &self.nodes {
            for m in &n.modes {
                if !out.contains(m) {
                    out.push(m.clone());
                }
            }
        }
        out
    }

    pub fn is_mode_partitioned(&self) -> bool {
        self.nodes.iter().all(|n| n.modes.len() == 1)
    }

    pub fn validate(&self) -> Result<()> {
        let inputs: BTreeSet<&str> = self
            .item_inputs
            .iter()
            .chain(&self.composed_inputs)
            .map(String::as_str)
            .collect();
        let mut names = BTreeSet::new();
        for n in &self.nodes {
            if n.modes.is_empty() {
                return Err(Error::Mapping(format!("node {:?} has no mode", n.name)));
            }
            if inputs.contains(n.name.as_str()) || !names.insert(n.name.as_str()) {
                return Err(Error::Mapping(format!("duplicate name {:?}", n.name)));
            }
        }
        for n in &self.nodes {
            if let Some(src) = n.inputs.iter().find(|s| !inputs.contains(s.as_str()) && !names.contains(s.as_str())) {
                return Err(Error::Mapping(format!("node {:?} reads unknown {src:?}", n.name)));
            }
        }
        let mut reached: BTreeSet<&str> = inputs.clone();
        let mut queue: VecDeque<&str> = inputs.iter().copied().collect();
        while let Some(s) = queue.pop_front() {
            for n in self.nodes.iter().filter(|n| n.inputs.iter().any(|i| i == s)) {
                if reached.insert(n.name.as_str()) {
                    queue.push_back(n.name.as_str());
                }
            }
        }
        if let Some(n) = self.nodes.iter().find(|n| !reached.contains(n.name.as_str())) {
            return Err(Error::Mapping(format!("node {:?} is unreachable from the inputs", n.name)));
        }
        if self.controls.is_empty() != self.is_mode_partitioned() {
            return Err(Error::Mapping(
                "control constructs must be present exactly when modes share nodes".into(),
            ));
        }
        Ok(())
    }

    /// Longest chain of nodes used by `mode`.
    fn depth(&self, mode: &str) -> u64 {
        let in_mode: BTreeMap<&str, &KernelNode> = self
            .nodes
            .iter()
            .filter(|n| n.modes.iter().any(|m| m == mode))
            .map(|n| (n.name.as_str(), n))
            .collect();
        let mut memo: BTreeMap<&str, u64> = BTreeMap::new();
        fn visit<'a>(
            name: &'a str,
            nodes: &BTreeMap<&'a str, &'a KernelNode>,
            memo: &mut BTreeMap<&'a str, u64>,
        ) -> u64 {
            if let Some(&d) = memo.get(name) {
                return d;
            }
            let d = 1 + nodes[name]
                .inputs
                .iter()
                .filter(|i| nodes.contains_key(i.as_str()))
                .map(|i| visit(i.as_str(), nodes, memo))
                .max()
                .unwrap_or(0);
            memo.insert(name, d);
            d
        }
        in_mode.keys().map(|k| visit(k, &in_mode, &mut memo)).max().unwrap_or(0)
    }

    fn mode_nodes(&self, mode: &str) -> Vec<&KernelNode> {
        self.nodes.iter().filter(|n| n.modes.iter().any(|m| m == mode)).collect()
    }
}

/// Lowers `kg` for the execution `schedule` of modes (each mode once, in
/// order, when `None`).
pub fn lower_kernels(kg: &KernelGraph, strategy: Strategy, schedule: Option<&[String]>) -> Result<KernelMapping> {
    kg.validate()?;
    let modes = kg.modes();
    let schedule: Vec<String> = schedule.map(<[String]>::to_vec).unwrap_or_else(|| modes.clone());
    if let Some(m) = schedule.iter().find(|m| !modes.contains(m)) {
        return Err(Error::Mapping(format!("schedule names unknown mode {m:?}")));
    }
    let mode_bits = |m: &str| kg.mode_nodes(m).iter().map(|n| n.bits()).sum::<u64>();
    let compute: u64 = schedule.iter().map(|m| kg.depth(m)).sum();
    let groups: Vec<CoreGroup> = match strategy {
        Strategy::Spatial => modes
            .iter()
            .map(|m| CoreGroup {
                name: m.clone(),
                modes: vec![m.clone()],
                nodes: kg.mode_nodes(m).iter().map(|n| n.name.clone()).collect(),
                bits: mode_bits(m),
            })
            .collect(),
        Strategy::Temporal => vec![CoreGroup {
            name: modes.join("+"),
            modes: modes.clone(),
            nodes: kg.nodes.iter().map(|n| n.name.clone()).collect(),
            bits: modes.iter().map(|m| mode_bits(m)).max().unwrap_or(0),
        }],
    };
    let (reprograms, reprogram_steps) = match strategy {
        Strategy::Spatial => (0, 0),
        Strategy::Temporal => {
            let switches: Vec<&String> = schedule
                .windows(2)
                .filter(|w| w[0] != w[1])
                .map(|w| &w[1])
                .collect();
            let steps = switches
                .iter()
                .map(|m| kg.mode_nodes(m).iter().map(|n| n.items as u64).sum::<u64>())
                .sum();
            (switches.len() as u64, steps)
        }
    };
    Ok(KernelMapping {
        strategy,
        area_bits: groups.iter().map(|g| g.bits).sum(),
        groups,
        schedule,
        reprograms,
        latency_steps: compute + reprogram_steps,
    })
}

/// Tree-structured classifier with encoding, tree-search and associative
/// search modes. `shared` routes all modes through common similarity and
/// bundling data paths (with control constructs).
pub fn tree_classifier_graph(dim: usize, shared: bool) -> KernelGraph {
    let node = |name: &str, op, modes: &[&str], items, inputs: &[&str]| KernelNode {
        name: name.into(),
        op,
        modes: modes.iter().map(|m| m.to_string()).collect(),
        dim,
        items,
        inputs: inputs.iter().map(|i| i.to_string()).collect(),
    };
    let mut nodes = vec![
        node("bind_features", KernelOp::Bind, &["encoding"], 16, &["feature_ids", "feature_values"]),
        node("permute_path", KernelOp::Permute, &["tree_search"], 1, &["query"]),
        node("bind_path", KernelOp::Bind, &["tree_search"], 8, &["permute_path", "node_items"]),
    ];
    if shared {
        nodes.push(node("bundle", KernelOp::Bundle, &["encoding", "tree_search"], 2, &["bind_features", "bind_path"]));
        nodes.push(node("similarity", KernelOp::Similarity, &["tree_search", "associative_search"], 16, &["bundle", "leaf_classes"]));
    } else {
        nodes.push(node("bundle_features", KernelOp::Bundle, &["encoding"], 2, &["bind_features"]));
        nodes.push(node("bundle_path", KernelOp::Bundle, &["tree_search"], 2, &["bind_path"]));
        nodes.push(node("node_similarity", KernelOp::Similarity, &["tree_search"], 8, &["bundle_path"]));
        nodes.push(node("leaf_similarity", KernelOp::Similarity, &["associative_search"], 16, &["query", "leaf_classes"]));
    }
    KernelGraph {
        nodes,
        item_inputs: vec!["feature_ids".into(), "node_items".into(), "leaf_classes".into()],
        composed_inputs: vec!["feature_values".into(), "query".into()],
        controls: if shared { vec!["mode_select".into()] } else { vec![] },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_graph_spatial_and_temporal() {
        let g = tree_classifier_graph(1024, false);
        g.validate().unwrap();
        let s = lower_kernels(&g, Strategy::Spatial, None).unwrap();
        assert_eq!(s.groups.len(), 3);
        assert_eq!(s.reprograms, 0);
        let t = lower_kernels(&g, Strategy::Temporal, None).unwrap();
        assert_eq!(t.groups.len(), 1);
        assert_eq!(t.reprograms, 2);
        assert!(t.area_bits <= s.area_bits);
        assert!(t.latency_steps >= s.latency_steps);
        let sched: Vec<String> = ["encoding", "tree_search", "encoding", "associative_search", "associative_search"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(lower_kernels(&g, Strategy::Temporal, Some(&sched)).unwrap().reprograms, 3);
    }

    #[test]
    fn shared_graph_needs_controls() {
        let g = tree_classifier_graph(256, true);
        g.validate().unwrap();
        assert!(!g.is_mode_partitioned());
        let mut bad = g.clone();
        bad.controls.clear();
        assert!(bad.validate().is_err());
        let mut bad2 = tree_classifier_graph(256, false);
        bad2.controls.push("mux".into());
        assert!(bad2.validate().is_err());
    }

    #[test]
    fn single_mode_is_strategy_independent() {
        let g = KernelGraph {
            nodes: vec![KernelNode {
                name: "b".into(),
                op: KernelOp::Bind,
                modes: vec!["only".into()],
                dim: 64,
                items: 3,
                inputs: vec!["x".into()],
            }],
            item_inputs: vec!["x".into()],
            ..Default::default()
        };
        let s = lower_kernels(&g, Strategy::Spatial, None).unwrap();
        let t = lower_kernels(&g, Strategy::Temporal, None).unwrap();
        assert_eq!((&s.groups, s.reprograms, s.area_bits, s.latency_steps), (&t.groups, t.reprograms, t.area_bits, t.latency_steps));
    }

    #[test]
    fn malformed_graphs() {
        let mut g = tree_classifier_graph(64, false);
        g.nodes[0].inputs.push("nowhere".into());
        assert!(matches!(g.validate(), Err(Error::Mapping(_))));
        let mut g = tree_classifier_graph(64, false);
        g.nodes.push(KernelNode {
            name: "island".into(),
            op: KernelOp::Bundle,
            modes: vec!["encoding".into()],
            dim: 64,
            items: 1,
            inputs: vec![],
        });
        assert!(g.validate().is_err());
        let g = tree_classifier_graph(64, false);
        assert!(lower_kernels(&g, Strategy::Spatial, Some(&["dream".to_string()])).is_err());
    }
}
