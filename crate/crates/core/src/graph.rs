//! Simple undirected graphs, linear orders, and vertex separators.
//!
//! Vertices are labelled `1..=n`. A linear order assigns each vertex a rank
//! in `1..=n`; the minimal vertex separator at cut `j` is the set of
//! vertices ranked after `j` that have a neighbor ranked at or before `j`.
//! Minimizing the largest separator over all orders yields the vertex
//! separation number, which equals the pathwidth of the graph.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// 1-based vertex label.
pub type Vertex = usize;

/// Default size cap for the exponential minimal-order search.
pub const DEFAULT_ORDER_SEARCH_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// Graphs must have at least one vertex.
    NoVertices,
    /// An endpoint lies outside `1..=n`.
    VertexOutOfRange { vertex: Vertex, n: usize },
    /// Both endpoints of an edge coincide.
    SelfLoop { vertex: Vertex },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::NoVertices => write!(f, "graph must have at least one vertex"),
            GraphError::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range 1..={n}")
            }
            GraphError::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
        }
    }
}

impl core::error::Error for GraphError {}

/// Simple undirected graph on vertices `1..=n`.
///
/// Duplicate edges collapse; self-loops are rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(Vertex, Vertex)>,
    adj: Vec<BTreeSet<Vertex>>,
}

impl Graph {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut set = BTreeSet::new();
        let mut adj = vec![BTreeSet::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w < 1 || w > n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { vertex: u });
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if set.insert((a, b)) {
                adj[a - 1].insert(b);
                adj[b - 1].insert(a);
            }
        }
        Ok(Graph { n, edges: set, adj })
    }

    /// Path on `n` vertices with edges `i`–`i+1`.
    pub fn path(n: usize) -> Result<Self, GraphError> {
        Self::new(n, (1..n).map(|i| (i, i + 1)))
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::VertexOutOfRange { vertex: n, n: 3 });
        }
        Self::new(n, (1..n).map(|i| (i, i + 1)).chain([(n, 1)]))
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        Self::new(
            n,
            (1..=n).flat_map(move |u| (u + 1..=n).map(move |v| (u, v))),
        )
    }

    /// Star with center `1` and `leaves` leaves.
    pub fn star(leaves: usize) -> Result<Self, GraphError> {
        Self::new(leaves + 1, (2..=leaves + 1).map(|v| (1, v)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as normalized `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges.iter().copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n
    }

    /// Neighbor set of `v`; panics if `v` is out of range.
    pub fn neighbors(&self, v: Vertex) -> &BTreeSet<Vertex> {
        &self.adj[v - 1]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v - 1].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.edges.contains(&(a, b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderError {
    Empty,
    /// The sequence is not a permutation of `1..=n`.
    NotAPermutation { position: usize, vertex: Vertex },
    /// The order covers a different number of vertices than the graph.
    LengthMismatch { order_n: usize, graph_n: usize },
}

impl fmt::Display for OrderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderError::Empty => write!(f, "linear order must cover at least one vertex"),
            OrderError::NotAPermutation { position, vertex } => write!(
                f,
                "vertex {vertex} at position {position} makes the sequence not a permutation"
            ),
            OrderError::LengthMismatch { order_n, graph_n } => write!(
                f,
                "order covers {order_n} vertices but the graph has {graph_n}"
            ),
        }
    }
}

impl core::error::Error for OrderError {}

/// Bijection between vertices `1..=n` and ranks `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOrder {
    seq: Vec<Vertex>,  // seq[r-1] = vertex at rank r
    rank: Vec<usize>,  // rank[v-1] = rank of vertex v
}

impl LinearOrder {
    /// Vertex `v` gets rank `v`.
    pub fn identity(n: usize) -> Result<Self, OrderError> {
        Self::from_sequence((1..=n).collect())
    }

    /// Builds an order from the vertex sequence in rank order (rank 1 first).
    pub fn from_sequence(seq: Vec<Vertex>) -> Result<Self, OrderError> {
        let n = seq.len();
        if n == 0 {
            return Err(OrderError::Empty);
        }
        let mut rank = vec![0usize; n];
        for (i, &v) in seq.iter().enumerate() {
            if v < 1 || v > n || rank[v - 1] != 0 {
                return Err(OrderError::NotAPermutation {
                    position: i + 1,
                    vertex: v,
                });
            }
            rank[v - 1] = i + 1;
        }
        Ok(LinearOrder { seq, rank })
    }

    pub fn n(&self) -> usize {
        self.seq.len()
    }

    pub fn rank(&self, v: Vertex) -> usize {
        self.rank[v - 1]
    }

    pub fn vertex_at_rank(&self, r: usize) -> Vertex {
        self.seq[r - 1]
    }

    /// Vertices in rank order.
    pub fn sequence(&self) -> &[Vertex] {
        &self.seq
    }
}

/// Vertices ranked after `j` with a neighbor ranked at or before `j`.
///
/// This is the unique inclusion-minimal set separating the first `j`
/// vertices of the order from the remainder. Requires `j <= n`; `j = 0` and
/// `j = n` both yield the empty set.
pub fn minimal_vertex_separator(
    g: &Graph,
    order: &LinearOrder,
    j: usize,
) -> BTreeSet<Vertex> {
    assert!(order.n() == g.n(), "order does not match graph");
    assert!(j <= g.n(), "cut position {j} exceeds n = {}", g.n());
    let mut sep = BTreeSet::new();
    for u in g.vertices() {
        if order.rank(u) > j && g.neighbors(u).iter().any(|&w| order.rank(w) <= j) {
            sep.insert(u);
        }
    }
    sep
}

/// Largest separator size over all cuts of the given order.
pub fn vertex_separation_number(g: &Graph, order: &LinearOrder) -> usize {
    (1..=g.n())
        .map(|j| minimal_vertex_separator(g, order, j).len())
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderSearchError {
    /// The subset dynamic program is exponential; refuse above the cap.
    TooLarge { n: usize, cap: usize },
}

impl fmt::Display for OrderSearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderSearchError::TooLarge { n, cap } => write!(
                f,
                "minimal-order search needs 2^n subsets; n = {n} exceeds cap {cap}"
            ),
        }
    }
}

impl core::error::Error for OrderSearchError {}

/// Finds an order minimizing the vertex separation number, with its value.
///
/// Subset dynamic program over prefixes: the best width achievable when a
/// set `S` forms the order's prefix is the larger of the boundary of `S`
/// and the best width over all choices of the last vertex of `S`. Runs in
/// `O(2^n * n)` time and `O(2^n)` memory, so `n` is capped (see
/// [`DEFAULT_ORDER_SEARCH_CAP`]). Ranks are assigned from the back; ties
/// pick the smallest vertex label, making the returned order deterministic.
pub fn find_minimal_order(
    g: &Graph,
    cap: usize,
) -> Result<(LinearOrder, usize), OrderSearchError> {
    let n = g.n();
    if n > cap || n >= usize::BITS as usize {
        return Err(OrderSearchError::TooLarge { n, cap });
    }
    let adj_mask: Vec<usize> = (1..=n)
        .map(|v| g.neighbors(v).iter().fold(0usize, |m, &w| m | 1 << (w - 1)))
        .collect();
    let full = (1usize << n) - 1;
    // boundary(s) = vertices outside s adjacent to s
    let boundary = |s: usize| -> u32 {
        let mut out = 0usize;
        for v in 0..n {
            if s & (1 << v) == 0 && adj_mask[v] & s != 0 {
                out |= 1 << v;
            }
        }
        out.count_ones()
    };
    let mut f = vec![0u32; full + 1];
    for s in 1..=full {
        let mut best = u32::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            best = best.min(f[s & !(1 << v)]);
        }
        f[s] = best.max(boundary(s));
    }
    // Reconstruct back to front: the last vertex of prefix s is the smallest
    // v whose removal attains min f(s \ {v}).
    let mut seq_rev = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let mut best = u32::MAX;
        let mut pick = 0usize;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if f[s & !(1 << v)] < best {
                best = f[s & !(1 << v)];
                pick = v;
            }
        }
        seq_rev.push(pick + 1);
        s &= !(1 << pick);
    }
    seq_rev.reverse();
    let order = LinearOrder::from_sequence(seq_rev).expect("reconstruction is a permutation");
    Ok((order, f[full] as usize))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScheduleError {
    OrderMismatch { order_n: usize, graph_n: usize },
}

impl fmt::Display for ScheduleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleError::OrderMismatch { order_n, graph_n } => write!(
                f,
                "order covers {order_n} vertices but the graph has {graph_n}"
            ),
        }
    }
}

impl core::error::Error for ScheduleError {}

/// Per-phase separators and quantum sets driving the canonical-path flow.
///
/// Phase `j` (one per vertex rank) has layers `1..=|S_j|+2`; its first step
/// recolors the rank-`j` vertex and each later step `l` splits over the
/// colors of the `(l-1)`-th smallest vertex of `S_j`. The quantum set at a
/// layer lists the separator vertices whose color is currently
/// path-dependent; it shrinks by the recolored vertex after a phase's first
/// step and grows by the split vertex after each splitting step. The final
/// layer of phase `j` coincides with layer 1 of phase `j+1`.
#[derive(Debug, Clone)]
pub struct SeparatorSchedule {
    order: LinearOrder,
    separators: Vec<Vec<Vertex>>,
    quantum: Vec<Vec<BTreeSet<Vertex>>>,
    vsn: usize,
    total_path_len: usize,
}

impl SeparatorSchedule {
    pub fn build(g: &Graph, order: LinearOrder) -> Result<Self, ScheduleError> {
        if order.n() != g.n() {
            return Err(ScheduleError::OrderMismatch {
                order_n: order.n(),
                graph_n: g.n(),
            });
        }
        let n = g.n();
        let separators: Vec<Vec<Vertex>> = (1..=n)
            .map(|j| minimal_vertex_separator(g, &order, j).into_iter().collect())
            .collect();
        let vsn = separators.iter().map(Vec::len).max().unwrap_or(0);
        let total_path_len = n + separators.iter().map(Vec::len).sum::<usize>();
        let mut quantum: Vec<Vec<BTreeSet<Vertex>>> = Vec::with_capacity(n);
        let mut current = BTreeSet::new();
        for j in 1..=n {
            let sep = &separators[j - 1];
            let mut layers = Vec::with_capacity(sep.len() + 2);
            layers.push(current.clone());
            current.remove(&order.vertex_at_rank(j));
            layers.push(current.clone());
            for &u in sep {
                current.insert(u);
                layers.push(current.clone());
            }
            quantum.push(layers);
        }
        Ok(SeparatorSchedule {
            order,
            separators,
            quantum,
            vsn,
            total_path_len,
        })
    }

    pub fn order(&self) -> &LinearOrder {
        &self.order
    }

    pub fn n(&self) -> usize {
        self.order.n()
    }

    /// Separator at cut `j`, sorted ascending. `j` in `1..=n`.
    pub fn separator(&self, j: usize) -> &[Vertex] {
        &self.separators[j - 1]
    }

    /// Steps in phase `j`: one consolidation plus one split per separator vertex.
    pub fn phase_steps(&self, j: usize) -> usize {
        self.separators[j - 1].len() + 1
    }

    /// Layers in phase `j` (`phase_steps + 1`).
    pub fn num_layers(&self, j: usize) -> usize {
        self.separators[j - 1].len() + 2
    }

    /// Quantum set at layer `(j, l)`; `l` in `1..=num_layers(j)`.
    pub fn quantum_set(&self, j: usize, l: usize) -> &BTreeSet<Vertex> {
        &self.quantum[j - 1][l - 1]
    }

    /// Vertices ranked at or before `j`.
    pub fn prefix(&self, j: usize) -> impl Iterator<Item = Vertex> + '_ {
        self.order.sequence()[..j].iter().copied()
    }

    /// Vertices ranked after `j`; the separator at `j` is a subset.
    pub fn suffix(&self, j: usize) -> impl Iterator<Item = Vertex> + '_ {
        self.order.sequence()[j..].iter().copied()
    }

    /// Vertex recolored by step `(j, l)`: the rank-`j` vertex when `l = 1`,
    /// otherwise the `(l-1)`-th smallest vertex of the phase's separator.
    pub fn step_vertex(&self, j: usize, l: usize) -> Vertex {
        if l == 1 {
            self.order.vertex_at_rank(j)
        } else {
            self.separators[j - 1][l - 2]
        }
    }

    /// Largest separator size over the order's cuts.
    pub fn vsn(&self) -> usize {
        self.vsn
    }

    /// Separator-to-log ratio `vsn / log2 n`; zero for a single vertex.
    pub fn lambda(&self) -> f64 {
        if self.n() < 2 {
            0.0
        } else {
            self.vsn as f64 / num_traits::Float::log2(self.n() as f64)
        }
    }

    /// Length of every canonical path: `n` consolidations plus all splits.
    pub fn total_path_len(&self) -> usize {
        self.total_path_len
    }
}
