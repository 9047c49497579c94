use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};

/// A precedence DAG over `node_count` nodes; an edge `(u, v)` means `u ≺ v`.
///
/// Construction rejects self-loops, duplicate edges and cycles, so every
/// value of this type is acyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecedenceDag {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
}

impl PrecedenceDag {
    pub fn new(node_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut preds = vec![Vec::new(); node_count];
        let mut succs = vec![Vec::new(); node_count];
        for &(u, v) in &edges {
            if u >= node_count || v >= node_count {
                return Err(Error::InvalidInstance(format!(
                    "edge ({u}, {v}) references a node outside 0..{node_count}"
                )));
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("self-loop on node {u}")));
            }
            if !seen.insert((u, v)) {
                return Err(Error::InvalidInstance(format!("duplicate edge ({u}, {v})")));
            }
            preds[v].push(u);
            succs[u].push(v);
        }
        for list in preds.iter_mut().chain(succs.iter_mut()) {
            list.sort_unstable();
        }
        let dag = PrecedenceDag {
            node_count,
            edges,
            preds,
            succs,
        };
        dag.topological_order()?;
        Ok(dag)
    }

    pub fn empty(node_count: usize) -> Self {
        PrecedenceDag {
            node_count,
            edges: Vec::new(),
            preds: vec![Vec::new(); node_count],
            succs: vec![Vec::new(); node_count],
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn preds(&self, v: usize) -> &[usize] {
        &self.preds[v]
    }

    pub fn succs(&self, u: usize) -> &[usize] {
        &self.succs[u]
    }

    /// Kahn's algorithm, always releasing the lowest-index available node.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let mut indeg: Vec<usize> = self.preds.iter().map(Vec::len).collect();
        let mut ready: BTreeSet<usize> = (0..self.node_count).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.node_count);
        while let Some(u) = ready.pop_first() {
            order.push(u);
            for &v in &self.succs[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    ready.insert(v);
                }
            }
        }
        if order.len() == self.node_count {
            Ok(order)
        } else {
            Err(Error::CycleDetected(self.find_cycle(&indeg)))
        }
    }

    /// Walks backwards through nodes that still have unreleased predecessors
    /// until a node repeats.
    fn find_cycle(&self, indeg: &[usize]) -> Vec<usize> {
        let Some(start) = (0..self.node_count).find(|&v| indeg[v] > 0) else {
            return Vec::new();
        };
        let mut pos = vec![usize::MAX; self.node_count];
        let mut walk = Vec::new();
        let mut v = start;
        while pos[v] == usize::MAX {
            pos[v] = walk.len();
            walk.push(v);
            v = *self.preds[v]
                .iter()
                .find(|&&u| indeg[u] > 0)
                .expect("stuck node has a stuck predecessor");
        }
        let mut cycle = walk[pos[v]..].to_vec();
        cycle.reverse();
        cycle
    }

    /// In-degree and out-degree at most one everywhere.
    pub fn is_chain_union(&self) -> bool {
        self.preds.iter().all(|p| p.len() <= 1) && self.succs.iter().all(|s| s.len() <= 1)
    }

    /// Longest path (sum of `weight`) starting at each node, including the node itself.
    pub fn tails<W: Fn(usize) -> i64>(&self, weight: W) -> Vec<i64> {
        let order = self.topological_order().expect("dag is acyclic");
        let mut tail = vec![0i64; self.node_count];
        for &u in order.iter().rev() {
            let best = self.succs[u].iter().map(|&v| tail[v]).max().unwrap_or(0);
            tail[u] = weight(u) + best;
        }
        tail
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The eight-job example graph, converted to 0-based indices.
    fn example_umps() -> PrecedenceDag {
        let e = [(4, 1), (1, 5), (6, 2), (3, 6), (6, 7), (7, 5), (8, 4)];
        PrecedenceDag::new(8, e.iter().map(|&(u, v)| (u - 1, v - 1)).collect()).unwrap()
    }

    #[test]
    fn topo_single_edge() {
        let d = PrecedenceDag::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(d.topological_order().unwrap(), vec![0, 1]);
    }

    #[test]
    fn topo_ties_by_index() {
        assert_eq!(PrecedenceDag::empty(3).topological_order().unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn topo_example() {
        let order: Vec<usize> = example_umps().topological_order().unwrap().iter().map(|v| v + 1).collect();
        assert_eq!(order, vec![3, 6, 2, 7, 8, 4, 1, 5]);
    }

    #[test]
    fn topo_example_is_a_linear_extension() {
        let d = example_umps();
        let order = d.topological_order().unwrap();
        let mut pos = [0; 8];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        assert!(d.edges().iter().all(|&(u, v)| pos[u] < pos[v]));
    }

    #[test]
    fn rejects_cycle() {
        let err = PrecedenceDag::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap_err();
        match err {
            Error::CycleDetected(c) => {
                assert_eq!(c.len(), 3);
                let mut s = c.clone();
                s.sort();
                assert_eq!(s, vec![0, 1, 2]);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn rejects_self_loop_and_duplicates() {
        assert!(PrecedenceDag::new(2, vec![(1, 1)]).is_err());
        assert!(PrecedenceDag::new(2, vec![(0, 1), (0, 1)]).is_err());
        assert!(PrecedenceDag::new(2, vec![(0, 2)]).is_err());
    }

    #[test]
    fn tails_follow_longest_path() {
        let d = example_umps();
        let t = d.tails(|_| 1);
        // 8 -> 4 -> 1 -> 5
        assert_eq!(t[7], 4);
        assert_eq!(t[4], 1);
    }
}
