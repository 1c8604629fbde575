use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{ColoredGraph, Vertex};

pub const INF: f64 = f64::INFINITY;

#[derive(Clone, Copy, PartialEq)]
struct Item {
    d: f64,
    v: Vertex,
}

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .d
            .total_cmp(&self.d)
            .then_with(|| other.v.cmp(&self.v))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Reusable Dijkstra over a graph with an optional edge filter.
pub struct Dijkstra {
    dist: Vec<f64>,
    touched: Vec<Vertex>,
    heap: BinaryHeap<Item>,
}

impl Dijkstra {
    pub fn new(n: usize) -> Self {
        Dijkstra {
            dist: vec![INF; n],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    /// Distances from `src` using only edges with `allowed(edge_id)`. Stops expanding beyond `limit`.
    pub fn run<F: Fn(usize) -> bool>(
        &mut self,
        g: &ColoredGraph,
        src: Vertex,
        limit: f64,
        allowed: F,
    ) -> &[f64] {
        for &x in &self.touched {
            self.dist[x] = INF;
        }
        self.touched.clear();
        self.heap.clear();
        self.dist[src] = 0.0;
        self.touched.push(src);
        self.heap.push(Item { d: 0.0, v: src });
        while let Some(Item { d, v }) = self.heap.pop() {
            if d > self.dist[v] || d > limit {
                continue;
            }
            for &(w, id) in g.adj(v) {
                if !allowed(id) {
                    continue;
                }
                let nd = d + g.edge(id).weight;
                if nd < self.dist[w] {
                    if self.dist[w] == INF {
                        self.touched.push(w);
                    }
                    self.dist[w] = nd;
                    self.heap.push(Item { d: nd, v: w });
                }
            }
        }
        &self.dist
    }
}

pub fn shortest_distance(g: &ColoredGraph, u: Vertex, v: Vertex) -> f64 {
    let mut dj = Dijkstra::new(g.n());
    dj.run(g, u, INF, |_| true)[v]
}

/// Independent oracle for tests: all distances from `src` by edge relaxation.
pub fn bellman_ford(g: &ColoredGraph, src: Vertex) -> Vec<f64> {
    let mut d = vec![INF; g.n()];
    d[src] = 0.0;
    for _ in 0..g.n() {
        let mut changed = false;
        for e in g.edges() {
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                if d[a] + e.weight < d[b] {
                    d[b] = d[a] + e.weight;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    d
}
