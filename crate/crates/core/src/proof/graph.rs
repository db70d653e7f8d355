//! Transition graph of the subsystem: states are vertices, isolated basis
//! elements are edges.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::oplib::{subsystem_dim, Kind, StateIndex};

use super::{IsolatedSet, StepTag};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeInfo {
    pub has_g: bool,
    pub has_f: bool,
    pub first_step: StepTag,
}

/// Simple graph on the 6J+7 subsystem states. An edge is present iff at least
/// one off-diagonal basis element on that state pair has been isolated.
#[derive(Debug, Clone)]
pub struct TransitionGraph {
    pub j: u32,
    pub edges: BTreeMap<(u32, u32), EdgeInfo>,
}

impl TransitionGraph {
    /// Builds the graph of all isolated G/F elements with provenance at or
    /// before `stage`.
    pub fn from_isolated(j: u32, isolated: &IsolatedSet, stage: StepTag) -> Self {
        let mut edges: BTreeMap<(u32, u32), EdgeInfo> = BTreeMap::new();
        for (elem, tag) in isolated.iter() {
            if *tag > stage || elem.kind == Kind::D {
                continue;
            }
            let info = edges.entry((elem.j, elem.k)).or_insert(EdgeInfo {
                has_g: false,
                has_f: false,
                first_step: *tag,
            });
            match elem.kind {
                Kind::G => info.has_g = true,
                Kind::F => info.has_f = true,
                Kind::D => unreachable!(),
            }
            if *tag < info.first_step {
                info.first_step = *tag;
            }
        }
        Self { j, edges }
    }

    pub fn vertex_count(&self) -> u32 {
        subsystem_dim(self.j)
    }

    /// Connected components as sorted lists of flat indices. Isolated
    /// vertices form their own components.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let n = subsystem_dim(self.j);
        let mut adjacency: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for (a, b) in self.edges.keys() {
            adjacency.entry(*a).or_default().push(*b);
            adjacency.entry(*b).or_default().push(*a);
        }
        let mut seen = vec![false; n as usize];
        let mut components = Vec::new();
        for start in 0..n {
            if seen[start as usize] {
                continue;
            }
            let mut component = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start as usize] = true;
            while let Some(v) = queue.pop_front() {
                component.push(v);
                if let Some(neighbors) = adjacency.get(&v) {
                    for &w in neighbors {
                        if !seen[w as usize] {
                            seen[w as usize] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Breadth-first tree from `root`: `parent[v]` for every reachable vertex.
    pub fn bfs_tree(&self, root: u32) -> BTreeMap<u32, u32> {
        let mut adjacency: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
        for (a, b) in self.edges.keys() {
            adjacency.entry(*a).or_default().insert(*b);
            adjacency.entry(*b).or_default().insert(*a);
        }
        let mut parent = BTreeMap::new();
        let mut queue = VecDeque::from([root]);
        let mut seen = BTreeSet::from([root]);
        while let Some(v) = queue.pop_front() {
            if let Some(neighbors) = adjacency.get(&v) {
                for &w in neighbors {
                    if seen.insert(w) {
                        parent.insert(w, v);
                        queue.push_back(w);
                    }
                }
            }
        }
        parent
    }

    /// Deterministic DOT rendering: vertices grouped by level block, edges
    /// labeled with the held element kinds and the earliest step that
    /// produced one.
    pub fn to_dot(&self, name: &str) -> String {
        let n = subsystem_dim(self.j);
        let mut out = String::new();
        writeln!(out, "graph {name} {{").unwrap();
        writeln!(out, "  rankdir=LR;").unwrap();
        writeln!(out, "  node [shape=plaintext];").unwrap();
        let mut current_block = None;
        for flat in 0..n {
            let s = StateIndex::from_flat(self.j, flat).unwrap();
            if current_block != Some(s.block) {
                if current_block.is_some() {
                    writeln!(out, "  }}").unwrap();
                }
                writeln!(out, "  subgraph cluster_{} {{", s.block.label()).unwrap();
                writeln!(out, "    label=\"{}\";", s.block.label()).unwrap();
                current_block = Some(s.block);
            }
            writeln!(out, "    v{} [label=\"{}\"];", flat, s).unwrap();
        }
        if current_block.is_some() {
            writeln!(out, "  }}").unwrap();
        }
        for ((a, b), info) in &self.edges {
            let mut kinds = String::new();
            if info.has_g {
                kinds.push('G');
            }
            if info.has_f {
                kinds.push('F');
            }
            writeln!(
                out,
                "  v{a} -- v{b} [label=\"{kinds} {}\"];",
                info.first_step.label()
            )
            .unwrap();
        }
        writeln!(out, "}}").unwrap();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oplib::PauliElement;

    fn set_with(j: u32, pairs: &[(u32, u32)]) -> IsolatedSet {
        let mut s = IsolatedSet::new();
        for &(a, b) in pairs {
            let (e, _) = PauliElement::canonical(Kind::G, a, b).unwrap();
            s.insert(e, StepTag::Step1).unwrap();
        }
        let _ = j;
        s
    }

    #[test]
    fn component_detection() {
        // J=0: 7 vertices; a path over 0-1-2 leaves 4 singletons
        let s = set_with(0, &[(0, 1), (1, 2)]);
        let g = TransitionGraph::from_isolated(0, &s, StepTag::Step6);
        let comps = g.components();
        assert_eq!(comps.len(), 5);
        assert_eq!(comps[0], vec![0, 1, 2]);
        assert!(!g.is_connected());
    }

    #[test]
    fn bfs_tree_covers_component() {
        let s = set_with(0, &[(0, 1), (1, 2), (0, 3), (3, 4), (4, 5), (5, 6)]);
        let g = TransitionGraph::from_isolated(0, &s, StepTag::Step6);
        assert!(g.is_connected());
        let tree = g.bfs_tree(0);
        assert_eq!(tree.len(), 6);
        assert_eq!(tree[&2], 1);
    }

    #[test]
    fn dot_output_is_deterministic() {
        let s = set_with(1, &[(0, 4), (1, 5)]);
        let g = TransitionGraph::from_isolated(1, &s, StepTag::Step6);
        assert_eq!(g.to_dot("t"), g.to_dot("t"));
        assert!(g.to_dot("t").contains("v0 -- v4 [label=\"G step1\"]"));
    }
}
