//! Small graph families used throughout the tests and the CLI.

use std::collections::BTreeSet;

use crate::median::Graph;
use crate::Vertex;

pub fn single_vertex() -> Graph {
    Graph::new(1, [])
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i)))
}

/// Cycle `0 - 1 - ... - (n-1) - 0`.
pub fn cycle(n: usize) -> Graph {
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
}

/// Star with `leaves` leaves around centre 0.
pub fn star(leaves: usize) -> Graph {
    Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i)))
}

/// Vertex id of grid point `(i, j)` in a grid of the given width.
pub fn grid_vertex(width: usize, i: usize, j: usize) -> Vertex {
    j * width + i
}

/// `width × height` grid graph with vertices `(i, j)`, `i < width`, `j < height`.
pub fn grid(width: usize, height: usize) -> Graph {
    let mut edges = Vec::new();
    for j in 0..height {
        for i in 0..width {
            if i + 1 < width {
                edges.push((grid_vertex(width, i, j), grid_vertex(width, i + 1, j)));
            }
            if j + 1 < height {
                edges.push((grid_vertex(width, i, j), grid_vertex(width, i, j + 1)));
            }
        }
    }
    Graph::new(width * height, edges)
}

pub fn hypercube(dim: u32) -> Graph {
    let n = 1usize << dim;
    Graph::new(
        n,
        (0..n).flat_map(|v| {
            (0..dim)
                .map(move |b| (v, v ^ (1 << b)))
                .filter(|(u, w)| u < w)
        }),
    )
}

/// Tree in which vertex `i + 1` hangs off `parents[i]`.
pub fn tree_from_parents(parents: &[Vertex]) -> Graph {
    Graph::new(
        parents.len() + 1,
        parents.iter().enumerate().map(|(i, &p)| (p, i + 1)),
    )
}

/// One representative of every isomorphism class of trees on `n` vertices.
pub fn nonisomorphic_trees(n: usize) -> Vec<Graph> {
    if n == 0 {
        return Vec::new();
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut parents = vec![0; n - 1];
    loop {
        let g = tree_from_parents(&parents);
        if seen.insert(tree_canonical_form(&g)) {
            out.push(g);
        }
        // Odometer over parent arrays with parents[i] <= i.
        let mut k = n - 1;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if parents[k] < k {
                parents[k] += 1;
                for p in &mut parents[k + 1..] {
                    *p = 0;
                }
                break;
            }
        }
    }
}

/// Canonical string of a tree: the minimum AHU encoding over all roots.
fn tree_canonical_form(g: &Graph) -> String {
    let mut adj = vec![Vec::new(); g.vertices];
    for &[u, v] in &g.edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    fn encode(adj: &[Vec<Vertex>], v: Vertex, parent: Option<Vertex>) -> String {
        let mut children: Vec<String> = adj[v]
            .iter()
            .filter(|&&c| Some(c) != parent)
            .map(|&c| encode(adj, c, Some(v)))
            .collect();
        children.sort();
        format!("({})", children.concat())
    }
    (0..g.vertices)
        .map(|r| encode(&adj, r, None))
        .min()
        .unwrap_or_default()
}
