//! Colorings, the proper / singly-flawed classification, and color availability.
//!
//! A coloring assigns each vertex a color in `1..=k`. It is *proper* when no
//! edge is monochromatic and *singly-flawed* when some vertex lies on every
//! monochromatic edge; everything else is invalid and outside the chain's
//! state space.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Graph, Vertex};

/// 1-based color.
pub type Color = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringError {
    LengthMismatch { coloring_n: usize, graph_n: usize },
    ColorOutOfRange { vertex: Vertex, color: Color, k: usize },
    /// Greedy coloring ran out of colors at a vertex (needs `k >= max degree + 1`).
    NoColorLeft { vertex: Vertex, k: usize },
    EmptyColorSet,
}

impl fmt::Display for ColoringError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColoringError::LengthMismatch {
                coloring_n,
                graph_n,
            } => write!(
                f,
                "coloring covers {coloring_n} vertices but the graph has {graph_n}"
            ),
            ColoringError::ColorOutOfRange { vertex, color, k } => {
                write!(f, "vertex {vertex} has color {color} outside 1..={k}")
            }
            ColoringError::NoColorLeft { vertex, k } => {
                write!(f, "no color in 1..={k} left for vertex {vertex}")
            }
            ColoringError::EmptyColorSet => write!(f, "color set must be nonempty"),
        }
    }
}

impl core::error::Error for ColoringError {}

/// Color assignment for vertices `1..=n`, stored in vertex order.
///
/// Orders lexicographically, which fixes state-space indices across runs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coloring {
    colors: Vec<Color>,
}

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Self {
        Coloring { colors }
    }

    /// All vertices get color `c`.
    pub fn constant(n: usize, c: Color) -> Self {
        Coloring {
            colors: vec![c; n],
        }
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn color(&self, v: Vertex) -> Color {
        self.colors[v - 1]
    }

    pub fn set_color(&mut self, v: Vertex, c: Color) {
        self.colors[v - 1] = c;
    }

    /// Copy with vertex `v` recolored to `c`.
    pub fn recolored(&self, v: Vertex, c: Color) -> Self {
        let mut out = self.clone();
        out.set_color(v, c);
        out
    }

    /// Colors in vertex order.
    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    /// Checks length against the graph and colors against `1..=k`.
    pub fn validate(&self, g: &Graph, k: usize) -> Result<(), ColoringError> {
        if self.n() != g.n() {
            return Err(ColoringError::LengthMismatch {
                coloring_n: self.n(),
                graph_n: g.n(),
            });
        }
        for v in g.vertices() {
            let c = self.color(v);
            if c < 1 || c > k {
                return Err(ColoringError::ColorOutOfRange {
                    vertex: v,
                    color: c,
                    k,
                });
            }
        }
        Ok(())
    }
}

/// Classification of a coloring relative to a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringClass {
    Proper,
    /// Some vertex lies on every monochromatic edge; `flawed` collects all
    /// such vertices (both endpoints when exactly one edge is monochromatic).
    SinglyFlawed { flawed: BTreeSet<Vertex> },
    Invalid,
}

impl ColoringClass {
    pub fn is_proper(&self) -> bool {
        matches!(self, ColoringClass::Proper)
    }

    /// Proper or singly-flawed: a member of the chain's state space.
    pub fn in_state_space(&self) -> bool {
        !matches!(self, ColoringClass::Invalid)
    }
}

/// Edges whose endpoints share a color, as normalized sorted pairs.
pub fn monochromatic_edges(g: &Graph, sigma: &Coloring) -> Vec<(Vertex, Vertex)> {
    g.edges()
        .filter(|&(u, v)| sigma.color(u) == sigma.color(v))
        .collect()
}

/// Classifies `sigma` as proper, singly-flawed, or invalid.
pub fn classify(g: &Graph, sigma: &Coloring) -> ColoringClass {
    let mono = monochromatic_edges(g, sigma);
    let Some(&(a, b)) = mono.first() else {
        return ColoringClass::Proper;
    };
    let mut flawed: BTreeSet<Vertex> = [a, b].into_iter().collect();
    for &(u, v) in &mono[1..] {
        flawed.retain(|&w| w == u || w == v);
        if flawed.is_empty() {
            return ColoringClass::Invalid;
        }
    }
    ColoringClass::SinglyFlawed { flawed }
}

/// Colors in `1..=k` used by no neighbor of `v`, ascending.
///
/// Availability ignores whether `sigma` itself is proper, and the current
/// color of `v` may be available. Always at least `k - degree(v)` colors.
pub fn available_colors(g: &Graph, sigma: &Coloring, v: Vertex, k: usize) -> Vec<Color> {
    let used: BTreeSet<Color> = g.neighbors(v).iter().map(|&u| sigma.color(u)).collect();
    (1..=k).filter(|c| !used.contains(c)).collect()
}

/// Colors vertices in label order with the smallest available color.
///
/// Succeeds whenever `k >= max degree + 1`.
pub fn greedy_proper_coloring(g: &Graph, k: usize) -> Result<Coloring, ColoringError> {
    let mut sigma = Coloring::constant(g.n(), 0);
    for v in g.vertices() {
        let used: BTreeSet<Color> = g
            .neighbors(v)
            .iter()
            .filter(|&&u| u < v)
            .map(|&u| sigma.color(u))
            .collect();
        let c = (1..=k)
            .find(|c| !used.contains(c))
            .ok_or(ColoringError::NoColorLeft { vertex: v, k })?;
        sigma.set_color(v, c);
    }
    Ok(sigma)
}

/// Deterministic balanced map from all of `1..=k` onto the set `c_set`.
///
/// With `m = |c_set|` sorted ascending, color `c` maps to entry
/// `(c - 1) mod m`, so each target color receives `floor(k/m)` or
/// `ceil(k/m)` pre-images.
pub fn chi_recolor(c_set: &[Color], k: usize, c: Color) -> Result<Color, ColoringError> {
    if c_set.is_empty() {
        return Err(ColoringError::EmptyColorSet);
    }
    debug_assert!(c_set.windows(2).all(|w| w[0] < w[1]), "color set must be sorted");
    if c < 1 || c > k {
        return Err(ColoringError::ColorOutOfRange {
            vertex: 0,
            color: c,
            k,
        });
    }
    Ok(c_set[(c - 1) % c_set.len()])
}
