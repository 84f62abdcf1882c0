//! Metric networks: a weighted multigraph viewed as a length space.
//!
//! A point `(edge, alpha)` sits at fraction `alpha` of the way from the
//! edge's first endpoint `a` to its second endpoint `b`, so `alpha = 0` is
//! node `a` and `alpha = 1` is node `b`.

mod tour;
mod walk;

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
pub use tour::{Leg, Tour};
pub use walk::{NetworkWalk, TimedLeg};
pub(crate) use walk::TIME_TOL;

pub type NodeId = usize;
pub type EdgeId = usize;

/// Tolerance used when comparing positions along an edge.
pub(crate) const ALPHA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: NodeId,
    pub b: NodeId,
    pub len: f64,
}

/// On-disk network description. Edge order defines edge ids.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkFile {
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeFile {
    pub a: String,
    pub b: String,
    pub len: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkPoint {
    pub edge: EdgeId,
    pub alpha: f64,
}

impl NetworkPoint {
    pub fn new(edge: EdgeId, alpha: f64) -> Self {
        Self { edge, alpha }
    }
}

/// Canonical form of a point: nodes are identified regardless of which
/// incident edge was used to name them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Location {
    Node(NodeId),
    Interior { edge: EdgeId, alpha: f64 },
}

#[derive(Debug, Clone)]
pub struct Network {
    names: Vec<String>,
    edges: Vec<Edge>,
    incident: Vec<Vec<EdgeId>>,
    node_dist: Vec<Vec<f64>>,
}

#[derive(Copy, Clone, PartialEq)]
struct HeapItem(f64, NodeId);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Network {
    pub fn new(names: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Empty("network has no nodes".into()));
        }
        let mut incident = vec![Vec::new(); names.len()];
        for (id, e) in edges.iter().enumerate() {
            if e.a >= names.len() || e.b >= names.len() {
                return Err(invalid(format!("edge {id} references an unknown node")));
            }
            if !(e.len >= 0.0) || !e.len.is_finite() {
                return Err(invalid(format!("edge {id} has invalid length {}", e.len)));
            }
            incident[e.a].push(id);
            if e.b != e.a {
                incident[e.b].push(id);
            }
        }
        let mut net = Self { names, edges, incident, node_dist: Vec::new() };
        net.node_dist = (0..net.names.len()).map(|s| net.dijkstra(s)).collect();
        Ok(net)
    }

    /// Builds a network from `(a, b, len)` triples over nodes named by index.
    pub fn from_edges(node_count: usize, edges: &[(NodeId, NodeId, f64)]) -> Result<Self> {
        let names = (0..node_count).map(|i| format!("n{i}")).collect();
        let edges = edges.iter().map(|&(a, b, len)| Edge { a, b, len }).collect();
        Self::new(names, edges)
    }

    pub fn from_file(file: &NetworkFile) -> Result<Self> {
        let index = |name: &str| {
            file.nodes
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| invalid(format!("edge references unknown node {name:?}")))
        };
        let edges = file
            .edges
            .iter()
            .map(|e| Ok(Edge { a: index(&e.a)?, b: index(&e.b)?, len: e.len }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.nodes.clone(), edges)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: NetworkFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> NetworkFile {
        NetworkFile {
            nodes: self.names.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeFile { a: self.names[e.a].clone(), b: self.names[e.b].clone(), len: e.len })
                .collect(),
        }
    }

    fn dijkstra(&self, source: NodeId) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.names.len()];
        dist[source] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(HeapItem(0.0, source));
        while let Some(HeapItem(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &e in &self.incident[u] {
                let v = self.other_end(e, u);
                let nd = d + self.edges[e].len;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(HeapItem(nd, v));
                }
            }
        }
        dist
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn incident(&self, node: NodeId) -> &[EdgeId] {
        &self.incident[node]
    }

    pub fn other_end(&self, edge: EdgeId, node: NodeId) -> NodeId {
        let e = &self.edges[edge];
        if e.a == node {
            e.b
        } else {
            e.a
        }
    }

    /// Degree with multi-edges counted separately and self-loops counted twice.
    pub fn degree(&self, node: NodeId) -> usize {
        self.incident[node].iter().map(|&e| if self.edges[e].a == self.edges[e].b { 2 } else { 1 }).sum()
    }

    /// `λ(N) = Σ l(e)`.
    pub fn total_measure(&self) -> f64 {
        self.edges.iter().map(|e| e.len).sum()
    }

    /// Exact total length, summing the binary values of the edge lengths.
    pub fn total_measure_exact(&self) -> BigRational {
        self.edges.iter().fold(BigRational::zero(), |acc, e| {
            acc + BigRational::from_float(e.len).expect("finite edge length")
        })
    }

    pub fn node_distance(&self, u: NodeId, v: NodeId) -> f64 {
        self.node_dist[u][v]
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.names.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &e in &self.incident[u] {
                let v = self.other_end(e, u);
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// A point naming `node`, through its lowest-id incident edge.
    pub fn node_point(&self, node: NodeId) -> Result<NetworkPoint> {
        let &e = self
            .incident
            .get(node)
            .and_then(|inc| inc.first())
            .ok_or_else(|| invalid(format!("node {node} has no incident edge")))?;
        let alpha = if self.edges[e].a == node { 0.0 } else { 1.0 };
        Ok(NetworkPoint::new(e, alpha))
    }

    pub fn check_point(&self, p: &NetworkPoint) -> Result<()> {
        if p.edge >= self.edges.len() {
            return Err(invalid(format!("edge {} does not exist", p.edge)));
        }
        if !(0.0..=1.0).contains(&p.alpha) {
            return Err(invalid(format!("alpha {} outside [0, 1]", p.alpha)));
        }
        Ok(())
    }

    pub fn locate(&self, p: &NetworkPoint) -> Location {
        let e = &self.edges[p.edge];
        if p.alpha <= ALPHA_TOL || e.len * p.alpha <= ALPHA_TOL {
            Location::Node(e.a)
        } else if p.alpha >= 1.0 - ALPHA_TOL || e.len * (1.0 - p.alpha) <= ALPHA_TOL {
            Location::Node(e.b)
        } else {
            Location::Interior { edge: p.edge, alpha: p.alpha }
        }
    }

    /// Whether two point names denote the same point of the network.
    pub fn same_point(&self, u: &NetworkPoint, v: &NetworkPoint) -> bool {
        match (self.locate(u), self.locate(v)) {
            (Location::Node(a), Location::Node(b)) => a == b,
            (Location::Interior { edge: e1, alpha: a1 }, Location::Interior { edge: e2, alpha: a2 }) => {
                e1 == e2 && (a1 - a2).abs() * self.edges[e1].len <= ALPHA_TOL
            }
            _ => false,
        }
    }

    /// All `(edge, alpha)` names of a point: one for interior points, one per
    /// incident edge end for nodes.
    pub(crate) fn representations(&self, p: &NetworkPoint) -> Vec<(EdgeId, f64)> {
        match self.locate(p) {
            Location::Interior { edge, alpha } => vec![(edge, alpha)],
            Location::Node(n) => {
                let mut out = Vec::new();
                for &e in &self.incident[n] {
                    let edge = &self.edges[e];
                    if edge.a == n {
                        out.push((e, 0.0));
                    }
                    if edge.b == n {
                        out.push((e, 1.0));
                    }
                }
                out
            }
        }
    }

    fn ends(&self, p: &NetworkPoint) -> [(NodeId, f64); 2] {
        let e = &self.edges[p.edge];
        [(e.a, p.alpha * e.len), (e.b, (1.0 - p.alpha) * e.len)]
    }

    /// Shortest-path distance between two points.
    pub fn distance(&self, u: &NetworkPoint, v: &NetworkPoint) -> Result<f64> {
        self.check_point(u)?;
        self.check_point(v)?;
        let mut best = f64::INFINITY;
        if u.edge == v.edge {
            best = self.edges[u.edge].len * (u.alpha - v.alpha).abs();
        }
        for (nu, du) in self.ends(u) {
            for (nv, dv) in self.ends(v) {
                best = best.min(du + self.node_dist[nu][nv] + dv);
            }
        }
        if best.is_finite() {
            Ok(best)
        } else {
            Err(Error::Unreachable)
        }
    }

    /// Length of the interval `[u, v]` along their common edge.
    pub fn measure_of_interval(&self, u: &NetworkPoint, v: &NetworkPoint) -> Result<f64> {
        self.check_point(u)?;
        self.check_point(v)?;
        if u.edge != v.edge {
            return Err(Error::DifferentEdges);
        }
        Ok(self.edges[u.edge].len * (u.alpha - v.alpha).abs())
    }

    /// Euler's criterion: connected and every node of even degree.
    pub fn is_eulerian(&self) -> Result<bool> {
        if self.edges.is_empty() {
            return Err(Error::Empty("network has no edges".into()));
        }
        Ok(self.is_connected() && (0..self.names.len()).all(|n| self.degree(n) % 2 == 0))
    }

    /// Network with every zero-length edge contracted, plus the map from old
    /// node ids to new ones. Metric and measure are unchanged.
    pub fn contract_zero_length(&self) -> Result<(Network, Vec<NodeId>)> {
        let n = self.names.len();
        let mut parent: Vec<NodeId> = (0..n).collect();
        fn find(parent: &mut [NodeId], x: NodeId) -> NodeId {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for e in &self.edges {
            if e.len == 0.0 {
                let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut new_id = vec![usize::MAX; n];
        let mut names = Vec::new();
        for v in 0..n {
            let root = find(&mut parent, v);
            if new_id[root] == usize::MAX {
                new_id[root] = names.len();
                names.push(self.names[root].clone());
            }
            new_id[v] = new_id[root];
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.len > 0.0)
            .map(|e| Edge { a: new_id[e.a], b: new_id[e.b], len: e.len })
            .collect();
        Ok((Network::new(names, edges)?, new_id))
    }

    /// Hierholzer's algorithm; incident edges are taken in increasing id
    /// order so the output is deterministic.
    pub fn eulerian_tour(&self) -> Result<Tour> {
        if !self.is_eulerian()? {
            return Err(Error::NotEulerian("some node has odd degree or the network is disconnected".into()));
        }
        let mut used = vec![false; self.edges.len()];
        let mut next = vec![0usize; self.names.len()];
        let start = self.edges[0].a;
        // Stack of (node, edge used to reach it).
        let mut stack: Vec<(NodeId, Option<EdgeId>)> = vec![(start, None)];
        let mut circuit: Vec<(NodeId, Option<EdgeId>)> = Vec::new();
        while let Some(&(u, _)) = stack.last() {
            let inc = &self.incident[u];
            while next[u] < inc.len() && used[inc[next[u]]] {
                next[u] += 1;
            }
            if next[u] < inc.len() {
                let e = inc[next[u]];
                used[e] = true;
                stack.push((self.other_end(e, u), Some(e)));
            } else {
                circuit.push(stack.pop().expect("nonempty stack"));
            }
        }
        circuit.reverse();
        let mut legs = Vec::with_capacity(self.edges.len());
        for w in circuit.windows(2) {
            let (from, _) = w[0];
            let (_, via) = w[1];
            let e = via.expect("every step after the first has an edge");
            let edge = &self.edges[e];
            let (a0, a1) = if edge.a == from { (0.0, 1.0) } else { (1.0, 0.0) };
            legs.push(Leg { edge: e, from_alpha: a0, to_alpha: a1 });
        }
        Ok(Tour::new(legs))
    }

    /// Route through consecutive points, each pair joined along a common
    /// edge. When two nodes are joined by several edges the lowest id wins.
    pub fn tour_through(&self, points: &[NetworkPoint]) -> Result<Tour> {
        if points.len() < 2 {
            return Err(invalid("a route needs at least two points"));
        }
        let mut legs = Vec::new();
        for pair in points.windows(2) {
            let (u, v) = (&pair[0], &pair[1]);
            self.check_point(u)?;
            self.check_point(v)?;
            let ru = self.representations(u);
            let rv = self.representations(v);
            let mut candidates: Vec<Leg> = Vec::new();
            for &(eu, au) in &ru {
                for &(ev, av) in &rv {
                    if eu == ev && (au - av).abs() > ALPHA_TOL {
                        candidates.push(Leg { edge: eu, from_alpha: au, to_alpha: av });
                    }
                }
            }
            let leg = candidates.into_iter().min_by_key(|l| l.edge).ok_or(Error::DifferentEdges)?;
            legs.push(leg);
        }
        Ok(Tour::new(legs))
    }

    /// Every node once, plus interior points of each edge at spacing
    /// `l(e)/⌈l(e)/pitch⌉`.
    pub fn grid_points(&self, pitch: f64) -> Result<Vec<NetworkPoint>> {
        if !(pitch > 0.0) {
            return Err(invalid("pitch must be positive"));
        }
        let mut pts = Vec::new();
        for n in 0..self.names.len() {
            if !self.incident[n].is_empty() {
                pts.push(self.node_point(n)?);
            }
        }
        for (id, e) in self.edges.iter().enumerate() {
            let k = (e.len / pitch - 1e-9).ceil().max(1.0) as usize;
            for i in 1..k {
                pts.push(NetworkPoint::new(id, i as f64 / k as f64));
            }
        }
        Ok(pts)
    }

    /// Unit-speed periodic walk following `tour`; zero-length legs are
    /// skipped.
    pub fn parametrization(&self, tour: &Tour) -> Result<NetworkWalk> {
        if !tour.is_closed(self) {
            return Err(invalid("parametrization needs a closed tour"));
        }
        NetworkWalk::along(self, tour, true)
    }
}
