use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use super::{mutate, ClusterCategory, ClusterError, ClusterObject, ExchangeTriangleData, ObjectKey, RigidPool};

/// One mutation step `nodes[from] → nodes[to]` at `position`.
#[derive(Clone, Debug)]
pub struct ExchangeEdge {
    pub from: usize,
    pub position: usize,
    pub to: usize,
    /// Position of the new summand in `nodes[to]`.
    pub to_position: usize,
    pub triangles: ExchangeTriangleData,
}

/// Breadth-first exchange graph. Each node lists its summands sorted by
/// key and positions index into that order. Every mutation is recorded,
/// so each undirected edge appears once from each side.
#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    pub nodes: Vec<Vec<ClusterObject>>,
    pub edges: Vec<ExchangeEdge>,
    /// `adjacency[i][k] = (j, k')` when mutating node `i` at `k` gives node
    /// `j` with the new summand at `k'`.
    pub adjacency: Vec<Vec<Option<(usize, usize)>>>,
    pub truncated: bool,
    /// Why exploration stopped early, if it did.
    pub reason: Option<String>,
}

fn canonical(t: &[ClusterObject]) -> (Vec<ObjectKey>, Vec<ClusterObject>) {
    let mut sorted = t.to_vec();
    sorted.sort_by_key(ClusterObject::key);
    (sorted.iter().map(ClusterObject::key).collect(), sorted)
}

/// Explores mutations from `P_1 ⊕ … ⊕ P_n`, visiting nodes in BFS order
/// and positions in increasing order, so the result is deterministic.
/// Stops adding nodes at `max_nodes`; a missing exchange partner
/// ([`ClusterError::NotFoundWithinBound`]) also truncates the graph.
pub fn exchange_graph(ctx: &ClusterCategory, pool: &mut RigidPool, max_nodes: usize) -> Result<ExchangeGraph, ClusterError> {
    let n = ctx.quiver().vertex_count();
    let (key0, start) = canonical(&ctx.initial_cluster());
    let mut graph =
        ExchangeGraph { nodes: vec![start], edges: Vec::new(), adjacency: vec![vec![None; n]], truncated: false, reason: None };
    let mut index: HashMap<Vec<ObjectKey>, usize> = HashMap::from([(key0, 0)]);
    let mut queue = VecDeque::from([0usize]);
    let stop = |g: &mut ExchangeGraph, why: String| {
        if !g.truncated {
            g.truncated = true;
            g.reason = Some(why);
        }
    };
    if max_nodes == 0 {
        stop(&mut graph, "max_nodes is 0".into());
        return Ok(graph);
    }
    while let Some(i) = queue.pop_front() {
        for k in 0..n {
            let current = graph.nodes[i].clone();
            let m = match mutate(ctx, pool, &current, k) {
                Ok(m) => m,
                Err(e @ ClusterError::NotFoundWithinBound(_)) => {
                    stop(&mut graph, e.to_string());
                    continue;
                }
                Err(e) => return Err(e),
            };
            let (key, sorted) = canonical(&m.cluster);
            let j = match index.get(&key) {
                Some(&j) => j,
                None => {
                    if graph.nodes.len() >= max_nodes {
                        stop(&mut graph, format!("reached max_nodes = {max_nodes}"));
                        continue;
                    }
                    let j = graph.nodes.len();
                    graph.nodes.push(sorted.clone());
                    graph.adjacency.push(vec![None; n]);
                    index.insert(key, j);
                    queue.push_back(j);
                    j
                }
            };
            let to_position = sorted.iter().position(|o| *o == m.added).expect("new summand is in the node");
            graph.adjacency[i][k] = Some((j, to_position));
            graph.edges.push(ExchangeEdge { from: i, position: k, to: j, to_position, triangles: m.triangles });
        }
    }
    Ok(graph)
}

#[derive(Serialize)]
pub struct NodeSummary {
    pub id: usize,
    pub summands: Vec<String>,
}

#[derive(Serialize)]
pub struct EdgeSummary {
    pub from: usize,
    pub position: usize,
    pub to: usize,
    pub to_position: usize,
    pub exchanged: [String; 2],
    pub e: String,
    pub e_prime: String,
}

/// Serializable mirror of an [`ExchangeGraph`] with 1-based positions.
#[derive(Serialize)]
pub struct GraphSummary {
    pub node_count: usize,
    pub edge_count: usize,
    pub truncated: bool,
    pub reason: Option<String>,
    pub nodes: Vec<NodeSummary>,
    pub edges: Vec<EdgeSummary>,
}

impl ExchangeGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Undirected edges `(i, j)` with `i < j`.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self.edges.iter().map(|e| (e.from.min(e.to), e.from.max(e.to))).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn degree(&self, i: usize) -> usize {
        self.undirected_edges().iter().filter(|(a, b)| *a == i || *b == i).count()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            if seen.get(i).copied().unwrap_or(true) {
                continue;
            }
            seen[i] = true;
            stack.extend(self.adjacency[i].iter().flatten().map(|(j, _)| *j));
        }
        seen.iter().all(|&s| s)
    }

    /// `μ_k' ∘ μ_k` returns to the start on every recorded mutation.
    pub fn mutations_are_involutive(&self) -> bool {
        self.edges.iter().all(|e| match self.adjacency[e.to][e.to_position] {
            Some((back, pos)) => back == e.from && pos == e.position,
            None => self.truncated,
        })
    }

    fn node_label(&self, i: usize) -> String {
        format!("{{{}}}", self.nodes[i].iter().map(ClusterObject::label).collect::<Vec<_>>().join(", "))
    }

    pub fn summary(&self) -> GraphSummary {
        GraphSummary {
            node_count: self.nodes.len(),
            edge_count: self.undirected_edges().len(),
            truncated: self.truncated,
            reason: self.reason.clone(),
            nodes: (0..self.nodes.len())
                .map(|i| NodeSummary { id: i, summands: self.nodes[i].iter().map(ClusterObject::label).collect() })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSummary {
                    from: e.from,
                    position: e.position + 1,
                    to: e.to,
                    to_position: e.to_position + 1,
                    exchanged: [e.triangles.x.label(), e.triangles.y.label()],
                    e: e.triangles.e.label(),
                    e_prime: e.triangles.e_prime.label(),
                })
                .collect(),
        }
    }

    /// Undirected DOT graph; nodes are labelled by summand dimension
    /// vectors and edges by the mutated positions on both ends.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph exchange {\n");
        if let Some(reason) = &self.reason {
            let _ = writeln!(out, "  // truncated: {reason}");
            let _ = writeln!(out, "  label=\"truncated\";");
        }
        for i in 0..self.nodes.len() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", self.node_label(i));
        }
        for e in &self.edges {
            if e.from < e.to {
                let _ = writeln!(out, "  n{} -- n{} [label=\"{}/{}\"];", e.from, e.to, e.position + 1, e.to_position + 1);
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "nodes: {}", self.nodes.len());
        let _ = writeln!(out, "edges: {}", self.undirected_edges().len());
        if let Some(reason) = &self.reason {
            let _ = writeln!(out, "truncated: {reason}");
        }
        for i in 0..self.nodes.len() {
            let _ = writeln!(out, "node {i}: {}", self.node_label(i));
        }
        for e in &self.edges {
            if e.from < e.to {
                let _ = writeln!(
                    out,
                    "edge {} -- {} at {}/{}: {} <-> {}, e = {}, e' = {}",
                    e.from,
                    e.to,
                    e.position + 1,
                    e.to_position + 1,
                    e.triangles.x,
                    e.triangles.y,
                    e.triangles.e.label(),
                    e.triangles.e_prime.label()
                );
            }
        }
        out
    }
}
