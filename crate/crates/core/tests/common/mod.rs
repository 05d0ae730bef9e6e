//! Shared helpers for the integration tests: independent re-derivations of
//! separator properties, brute-force order search, and exhaustive coloring
//! enumeration used to cross-check the library's answers.
#![allow(dead_code)]

use std::collections::BTreeSet;

use colorsampler_core::chain::TransitionMatrix;
use colorsampler_core::graph::{Graph, LinearOrder, Vertex};

/// True when removing `sep` from the graph leaves no path from any vertex
/// ranked at most `j` to any unranked-away vertex ranked above `j` outside
/// `sep`. Checked by BFS, independently of the separator's defining formula.
pub fn bfs_separates(g: &Graph, order: &LinearOrder, j: usize, sep: &BTreeSet<Vertex>) -> bool {
    let n = g.n();
    let mut reached = vec![false; n + 1];
    let mut queue: Vec<Vertex> = Vec::new();
    for r in 1..=j {
        let v = order.vertex_at_rank(r);
        if !sep.contains(&v) && !reached[v] {
            reached[v] = true;
            queue.push(v);
        }
    }
    while let Some(v) = queue.pop() {
        for &w in g.neighbors(v) {
            if !sep.contains(&w) && !reached[w] {
                reached[w] = true;
                queue.push(w);
            }
        }
    }
    (1..=n).all(|v| {
        let rank = order.rank(v);
        rank <= j || sep.contains(&v) || !reached[v]
    })
}

/// Asserts, for every cut position of `order`, that the separator both
/// disconnects the prefix from the rest of the suffix (BFS check) and is
/// minimal: each separator vertex has a neighbor in the prefix, so dropping
/// it would break the separation.
pub fn assert_separator_properties(g: &Graph, order: &LinearOrder) {
    for j in 0..=g.n() {
        let sep = colorsampler_core::graph::minimal_vertex_separator(g, order, j);
        assert!(
            bfs_separates(g, order, j, &sep),
            "separator at cut {j} fails to disconnect"
        );
        for &u in &sep {
            assert!(order.rank(u) > j, "separator vertex {u} not in suffix");
            let touches_prefix = g.neighbors(u).iter().any(|&w| order.rank(w) <= j);
            assert!(
                touches_prefix,
                "separator vertex {u} at cut {j} is unnecessary"
            );
        }
    }
}

fn permutations_rec(prefix: &mut Vec<Vertex>, rest: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
    if rest.is_empty() {
        out.push(prefix.clone());
        return;
    }
    for i in 0..rest.len() {
        let v = rest.remove(i);
        prefix.push(v);
        permutations_rec(prefix, rest, out);
        prefix.pop();
        rest.insert(i, v);
    }
}

/// All permutations of `1..=n`, for exhaustive order searches.
pub fn all_orders(n: usize) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut rest: Vec<Vertex> = (1..=n).collect();
    permutations_rec(&mut Vec::new(), &mut rest, &mut out);
    out
}

/// Minimum separation number over every vertex order, by brute force.
pub fn brute_force_vsn(g: &Graph) -> usize {
    all_orders(g.n())
        .into_iter()
        .map(|seq| {
            let order = LinearOrder::from_sequence(seq).unwrap();
            colorsampler_core::graph::vertex_separation_number(g, &order)
        })
        .min()
        .expect("graph has at least one vertex")
}

/// Every color vector over `n` vertices and `k` colors, in odometer order.
pub fn all_color_vectors(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(k.pow(n as u32));
    let mut cur = vec![1usize; n];
    loop {
        out.push(cur.clone());
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if cur[pos] < k {
                cur[pos] += 1;
                for c in cur.iter_mut().skip(pos + 1) {
                    *c = 1;
                }
                break;
            }
        }
    }
}

/// True when every state can reach every other through off-diagonal
/// transitions; the matrices are symmetric, so one BFS suffices.
pub fn matrix_is_irreducible(p: &TransitionMatrix) -> bool {
    let dim = p.dim();
    if dim == 0 {
        return false;
    }
    let mut seen = vec![false; dim];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1usize;
    while let Some(i) = stack.pop() {
        for &(j, _) in p.off_diagonal(i) {
            if !seen[j] {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == dim
}

/// Iterates a row vector through the chain's float transition rows.
pub fn power_row(rows: &[Vec<(usize, f64)>], start: usize, t: u64) -> Vec<f64> {
    let dim = rows.len();
    let mut cur = vec![0.0f64; dim];
    cur[start] = 1.0;
    for _ in 0..t {
        let mut next = vec![0.0f64; dim];
        for (i, &ci) in cur.iter().enumerate() {
            if ci == 0.0 {
                continue;
            }
            for &(j, pij) in &rows[i] {
                next[j] += ci * pij;
            }
        }
        cur = next;
    }
    cur
}
