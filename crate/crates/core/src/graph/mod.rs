//! Colored weighted multigraphs: model, text I/O, generators, fault subtraction, distances.

mod dist;
mod generate;
mod io;

pub use dist::{bellman_ford, shortest_distance, Dijkstra, INF};
pub use generate::{generate_random, ColoringPolicy, GenParams, Size};
pub use io::{parse_graph, serialize_graph};

use serde::{Deserialize, Serialize};

use crate::colorset::{Color, ColorSet};
use crate::error::{Error, Result};

pub type Vertex = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorMode {
    Ecft,
    Vcft,
}

impl ColorMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ColorMode::Ecft => "ecft",
            ColorMode::Vcft => "vcft",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: Vertex,
    pub v: Vertex,
    pub weight: f64,
    /// Present only in ECFT mode.
    pub color: Option<Color>,
}

impl Edge {
    pub fn other(&self, x: Vertex) -> Vertex {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColoredGraph {
    mode: ColorMode,
    n: usize,
    color_count: u32,
    edges: Vec<Edge>,
    vertex_colors: Vec<Color>,
    adj: Vec<Vec<(Vertex, EdgeId)>>,
}

impl ColoredGraph {
    /// Edge tuples are `(u, v, weight, color)`; color is required in ECFT and ignored in VCFT.
    pub fn new(
        mode: ColorMode,
        n: usize,
        color_count: u32,
        edges: Vec<(Vertex, Vertex, f64, Option<Color>)>,
        vertex_colors: Vec<Color>,
    ) -> Result<Self> {
        if mode == ColorMode::Vcft && vertex_colors.len() != n {
            return Err(Error::InvalidGraph(format!(
                "expected {n} vertex colors, got {}",
                vertex_colors.len()
            )));
        }
        for (x, &c) in vertex_colors.iter().enumerate() {
            if c >= color_count {
                return Err(Error::InvalidGraph(format!(
                    "vertex {x} color {c} out of range"
                )));
            }
        }
        let mut out = Vec::with_capacity(edges.len());
        for (id, (u, v, w, c)) in edges.into_iter().enumerate() {
            check_edge(mode, n, color_count, u, v, w, c).map_err(Error::InvalidGraph)?;
            let color = if mode == ColorMode::Ecft { c } else { None };
            out.push(Edge { id, u, v, weight: w, color });
        }
        let vertex_colors = if mode == ColorMode::Vcft {
            vertex_colors
        } else {
            Vec::new()
        };
        Ok(Self::from_parts(mode, n, color_count, out, vertex_colors))
    }

    fn from_parts(
        mode: ColorMode,
        n: usize,
        color_count: u32,
        edges: Vec<Edge>,
        vertex_colors: Vec<Color>,
    ) -> Self {
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push((e.v, e.id));
            adj[e.v].push((e.u, e.id));
        }
        ColoredGraph {
            mode,
            n,
            color_count,
            edges,
            vertex_colors,
            adj,
        }
    }

    pub fn mode(&self) -> ColorMode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn color_count(&self) -> u32 {
        self.color_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    /// Incident `(neighbor, edge_id)` pairs in edge-id order.
    pub fn adj(&self, x: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adj[x]
    }

    pub fn vertex_color(&self, x: Vertex) -> Color {
        self.vertex_colors[x]
    }

    pub fn vertex_colors(&self) -> &[Color] {
        &self.vertex_colors
    }

    /// Colors whose failure damages the edge.
    pub fn damage_colors(&self, id: EdgeId) -> ColorSet {
        let e = &self.edges[id];
        match self.mode {
            ColorMode::Ecft => ColorSet::singleton(e.color.expect("ecft edge color")),
            ColorMode::Vcft => {
                ColorSet::from_slice(&[self.vertex_colors[e.u], self.vertex_colors[e.v]])
            }
        }
    }

    pub fn is_damaged(&self, id: EdgeId, faults: &ColorSet) -> bool {
        let e = &self.edges[id];
        match self.mode {
            ColorMode::Ecft => faults.contains(e.color.expect("ecft edge color")),
            ColorMode::Vcft => {
                faults.contains(self.vertex_colors[e.u]) || faults.contains(self.vertex_colors[e.v])
            }
        }
    }

    pub fn has_parallel_edges(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges
            .iter()
            .any(|e| !seen.insert((e.u.min(e.v), e.u.max(e.v))))
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Subgraph on the same vertex set keeping the listed edges. Edge ids are renumbered densely
    /// in the order given; use [`ColoredGraph::edge_mask`] when original ids must be kept.
    pub fn subgraph(&self, keep: &[EdgeId]) -> ColoredGraph {
        let edges = keep
            .iter()
            .enumerate()
            .map(|(i, &id)| Edge { id: i, ..self.edges[id].clone() })
            .collect();
        Self::from_parts(
            self.mode,
            self.n,
            self.color_count,
            edges,
            self.vertex_colors.clone(),
        )
    }

    /// Membership mask over edge ids for the listed edges.
    pub fn edge_mask(&self, keep: &[EdgeId]) -> Vec<bool> {
        let mut mask = vec![false; self.m()];
        for &id in keep {
            mask[id] = true;
        }
        mask
    }
}

fn check_edge(
    mode: ColorMode,
    n: usize,
    color_count: u32,
    u: Vertex,
    v: Vertex,
    w: f64,
    c: Option<Color>,
) -> std::result::Result<(), String> {
    if u >= n || v >= n {
        return Err(format!("vertex out of range in edge ({u},{v})"));
    }
    if u == v {
        return Err(format!("self-loop at vertex {u}"));
    }
    if !(w.is_finite() && w > 0.0) {
        return Err(format!("weight {w} is not positive and finite"));
    }
    match (mode, c) {
        (ColorMode::Ecft, None) => return Err("ecft edge without color".into()),
        (ColorMode::Ecft, Some(c)) if c >= color_count => {
            return Err(format!("color {c} out of range"))
        }
        _ => {}
    }
    Ok(())
}

/// A set of failed colors together with the budget it was drawn under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaultSet {
    pub colors: ColorSet,
    pub budget: usize,
}

impl FaultSet {
    pub fn new(colors: ColorSet, budget: usize, color_count: u32) -> Result<Self> {
        if colors.len() > budget {
            return Err(Error::InvalidParams(format!(
                "fault set {colors} exceeds budget {budget}"
            )));
        }
        if colors.iter().any(|c| c >= color_count) {
            return Err(Error::InvalidParams(format!(
                "fault set {colors} has a color out of range"
            )));
        }
        Ok(FaultSet { colors, budget })
    }
}

/// g − F: drop every damaged edge. Vertex set and edge ids of survivors are renumbered densely.
pub fn subtract_faults(g: &ColoredGraph, faults: &FaultSet) -> ColoredGraph {
    let keep: Vec<EdgeId> = (0..g.m())
        .filter(|&id| !g.is_damaged(id, &faults.colors))
        .collect();
    g.subgraph(&keep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> ColoredGraph {
        ColoredGraph::new(
            ColorMode::Ecft,
            3,
            3,
            vec![
                (0, 1, 1.0, Some(0)),
                (1, 2, 1.0, Some(1)),
                (0, 2, 1.0, Some(2)),
            ],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn subtract_empty_is_identity() {
        let g = triangle();
        let f = FaultSet::new(ColorSet::new(), 1, 3).unwrap();
        assert_eq!(subtract_faults(&g, &f), g);
    }

    #[test]
    fn subtract_removes_exact_color() {
        let g = triangle();
        let f = FaultSet::new(ColorSet::singleton(1), 1, 3).unwrap();
        let h = subtract_faults(&g, &f);
        assert_eq!(h.m(), 2);
        assert!(h.edges().iter().all(|e| e.color != Some(1)));
    }

    #[test]
    fn vcft_damage_by_either_endpoint() {
        let g = ColoredGraph::new(ColorMode::Vcft, 2, 4, vec![(0, 1, 1.0, None)], vec![1, 3])
            .unwrap();
        let f = FaultSet::new(ColorSet::singleton(3), 1, 4).unwrap();
        assert_eq!(subtract_faults(&g, &f).m(), 0);
    }

    #[test]
    fn rejects_bad_edges() {
        let bad = |edges| ColoredGraph::new(ColorMode::Ecft, 2, 1, edges, vec![]).is_err();
        assert!(bad(vec![(0, 0, 1.0, Some(0))]));
        assert!(bad(vec![(0, 1, 0.0, Some(0))]));
        assert!(bad(vec![(0, 1, 1.0, Some(1))]));
        assert!(bad(vec![(0, 1, f64::INFINITY, Some(0))]));
    }

    #[test]
    fn fault_budget_enforced() {
        assert!(FaultSet::new(ColorSet::from_slice(&[0, 1]), 1, 3).is_err());
        assert!(FaultSet::new(ColorSet::from_slice(&[5]), 1, 3).is_err());
    }
}
