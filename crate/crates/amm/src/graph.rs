//! Simple undirected graphs, the graph6 wire format, classification and
//! an isomorph-free enumerator for small orders.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::matrix::Matrix;
use crate::rational::{rat, RationalMatrix};

/// Largest order representable with the long-form graph6 size prefix we
/// support (126 followed by three data bytes).
pub const MAX_GRAPH6_ORDER: usize = 258;

/// Largest order for the built-in isomorph-free enumerator.
pub const MAX_ENUM_ORDER: usize = 6;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph6 parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("graph order {n} out of supported range 1..={MAX_GRAPH6_ORDER}")]
    UnsupportedOrder { n: usize },
    #[error("built-in enumeration supports 1..={MAX_ENUM_ORDER} vertices, got {n}")]
    EnumOrder { n: usize },
    #[error("vertex {v} out of range for graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
}

/// Undirected simple graph on `0..n`, upper triangle stored as a bit set
/// in graph6 column order: pair `(i, j)` with `i < j` lives at bit
/// `j(j-1)/2 + i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Graph {
    n: usize,
    bits: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_GRAPH6_ORDER);
        let nbits = n * (n - 1) / 2;
        Graph {
            n,
            bits: vec![0; nbits.div_ceil(64)],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn pair_index(u: usize, v: usize) -> usize {
        let (i, j) = if u < v { (u, v) } else { (v, u) };
        j * (j - 1) / 2 + i
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n, "invalid edge");
        let idx = Self::pair_index(u, v);
        self.bits[idx / 64] |= 1 << (idx % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        let idx = Self::pair_index(u, v);
        self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 1..self.n {
            for i in 0..j {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.has_edge(u, v)).count()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.has_edge(u, v)).collect()
    }

    // Named families used throughout the tests and the CLI.

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for j in 1..n {
            for i in 0..j {
                g.add_edge(i, j);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let mut g = Graph::path(n);
        g.add_edge(0, n - 1);
        g
    }

    pub fn petersen() -> Self {
        let mut g = Graph::empty(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5); // outer cycle
            g.add_edge(5 + i, 5 + (i + 2) % 5); // inner pentagram
            g.add_edge(i, 5 + i); // spokes
        }
        g
    }
}

/// Symmetric 0/1 adjacency matrix over the rationals.
pub fn adjacency_matrix(g: &Graph) -> RationalMatrix {
    Matrix::from_fn(g.n(), g.n(), |i, j| {
        if g.has_edge(i, j) {
            rat(1, 1)
        } else {
            rat(0, 1)
        }
    })
}

pub fn adjacency_matrix_f64(g: &Graph) -> Matrix<f64> {
    Matrix::from_fn(g.n(), g.n(), |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphClass {
    pub connected: bool,
    pub bipartite: bool,
    /// Common valency when the graph is regular.
    pub regular: Option<usize>,
}

pub fn classify(g: &Graph) -> GraphClass {
    let n = g.n();
    // BFS for connectivity and 2-coloring in one sweep over components.
    let mut color = vec![None::<bool>; n];
    let mut bipartite = true;
    let mut components = 0;
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        components += 1;
        color[start] = Some(false);
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            let cv = color[v].unwrap();
            for u in g.neighbors(v) {
                match color[u] {
                    None => {
                        color[u] = Some(!cv);
                        queue.push(u);
                    }
                    Some(cu) => {
                        if cu == cv {
                            bipartite = false;
                        }
                    }
                }
            }
        }
    }
    let degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let regular = if degrees.iter().all(|&d| d == degrees[0]) {
        Some(degrees[0])
    } else {
        None
    };
    GraphClass {
        connected: components == 1,
        bipartite,
        regular,
    }
}

// graph6 encoding: printable bytes 63..=126, six data bits per byte,
// most significant bit first; upper triangle in column order.

pub fn parse_graph6(line: &[u8]) -> Result<Graph, GraphError> {
    let err = |offset, msg: &str| GraphError::Parse {
        offset,
        msg: msg.to_string(),
    };
    if line.is_empty() {
        return Err(err(0, "empty record"));
    }
    let (n, body_start) = if line[0] == 126 {
        if line.len() < 4 {
            return Err(err(0, "truncated long-form size prefix"));
        }
        if line[1] == 126 {
            return Err(err(1, "8-byte size prefix (n > 258047) not supported"));
        }
        let mut n = 0usize;
        for (k, &b) in line[1..4].iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(err(1 + k, "size byte out of range 63..=126"));
            }
            n = (n << 6) | (b - 63) as usize;
        }
        (n, 4)
    } else {
        let b = line[0];
        if !(63..=126).contains(&b) {
            return Err(err(0, "size byte out of range 63..=126"));
        }
        ((b - 63) as usize, 1)
    };
    if n == 0 || n > MAX_GRAPH6_ORDER {
        return Err(err(0, "graph order out of supported range"));
    }
    let nbits = n * (n - 1) / 2;
    let nbytes = nbits.div_ceil(6);
    if line.len() < body_start + nbytes {
        return Err(err(line.len(), "record shorter than declared order requires"));
    }
    if line.len() > body_start + nbytes {
        return Err(err(body_start + nbytes, "trailing bytes after graph body"));
    }
    let mut g = Graph::empty(n);
    let mut bit = 0usize;
    for (k, &b) in line[body_start..].iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(body_start + k, "body byte out of range 63..=126"));
        }
        let chunk = b - 63;
        for s in (0..6).rev() {
            let set = chunk >> s & 1 == 1;
            if bit >= nbits {
                if set {
                    return Err(err(body_start + k, "nonzero padding bits"));
                }
            } else if set {
                g.bits[bit / 64] |= 1 << (bit % 64);
            }
            bit += 1;
        }
    }
    Ok(g)
}

pub fn write_graph6(g: &Graph) -> Result<Vec<u8>, GraphError> {
    let n = g.n();
    if n > MAX_GRAPH6_ORDER {
        return Err(GraphError::UnsupportedOrder { n });
    }
    let mut out = Vec::new();
    if n <= 62 {
        out.push(63 + n as u8);
    } else {
        out.push(126);
        out.push(63 + ((n >> 12) & 63) as u8);
        out.push(63 + ((n >> 6) & 63) as u8);
        out.push(63 + (n & 63) as u8);
    }
    let nbits = n * (n - 1) / 2;
    let mut chunk = 0u8;
    for bit in 0..nbits {
        let set = g.bits[bit / 64] >> (bit % 64) & 1;
        chunk = chunk << 1 | set as u8;
        if bit % 6 == 5 {
            out.push(63 + chunk);
            chunk = 0;
        }
    }
    if nbits % 6 != 0 {
        chunk <<= 6 - nbits % 6;
        out.push(63 + chunk);
    }
    Ok(out)
}

/// Exactly one representative per isomorphism class of connected graphs
/// on `n` vertices, by brute-force canonical form: the lexicographic
/// minimum of the adjacency bit string over all `n!` relabelings.
pub fn enumerate_connected(n: usize) -> Result<Vec<Graph>, GraphError> {
    if n == 0 || n > MAX_ENUM_ORDER {
        return Err(GraphError::EnumOrder { n });
    }
    let nbits = n * (n - 1) / 2;
    let perms = permutations(n);
    // For each permutation, where each pair bit lands after relabeling.
    let tables: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            let mut t = vec![0; nbits];
            for j in 1..n {
                for i in 0..j {
                    t[Graph::pair_index(i, j)] = Graph::pair_index(p[i], p[j]);
                }
            }
            t
        })
        .collect();
    let mut canon = BTreeSet::new();
    for mask in 0u64..1 << nbits {
        if !mask_connected(n, mask) {
            continue;
        }
        let mut best = u64::MAX;
        for t in &tables {
            let mut m = 0u64;
            let mut rest = mask;
            while rest != 0 {
                let b = rest.trailing_zeros() as usize;
                m |= 1 << t[b];
                rest &= rest - 1;
            }
            best = best.min(m);
        }
        canon.insert(best);
    }
    Ok(canon
        .into_iter()
        .map(|mask| Graph {
            n,
            bits: vec![mask],
        })
        .collect())
}

fn mask_connected(n: usize, mask: u64) -> bool {
    let has = |i: usize, j: usize| mask >> Graph::pair_index(i, j) & 1 == 1;
    let mut seen = 1u64;
    let mut frontier = vec![0usize];
    while let Some(v) = frontier.pop() {
        for u in 0..n {
            if u != v && has(u.min(v), u.max(v)) && seen >> u & 1 == 0 {
                seen |= 1 << u;
                frontier.push(u);
            }
        }
    }
    seen.count_ones() as usize == n
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}
