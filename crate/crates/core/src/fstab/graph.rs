use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected graph on nodes `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Graph {
    /// Builds a graph; duplicate edges are merged, loops and out-of-range
    /// endpoints rejected.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "bad edge ({u}, {v}) for {n} nodes"
                )));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<(usize, usize)> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn complete(n: usize) -> Self {
        let e: Vec<_> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        Graph::new(n, &e).expect("valid")
    }

    pub fn path(n: usize) -> Self {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &e).expect("valid")
    }

    pub fn cycle(n: usize) -> Self {
        let mut e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        e.push((n - 1, 0));
        Graph::new(n, &e).expect("valid")
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// BFS distances from `s`; `usize::MAX` for unreachable nodes.
    pub fn distances(&self, s: usize) -> Vec<usize> {
        let mut d = vec![usize::MAX; self.n];
        d[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &w in &self.adj[u] {
                if d[w] == usize::MAX {
                    d[w] = d[u] + 1;
                    q.push_back(w);
                }
            }
        }
        d
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.distances(0).iter().all(|&d| d != usize::MAX)
    }

    /// Whether the subgraph induced by `nodes` admits a proper 2-colouring.
    pub fn induced_is_bipartite(&self, nodes: &[usize]) -> bool {
        let inside: HashSet<usize> = nodes.iter().copied().collect();
        let mut color = vec![u8::MAX; self.n];
        for &s in nodes {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &w in self.adj[u].iter().filter(|w| inside.contains(w)) {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[u];
                        q.push_back(w);
                    } else if color[w] == color[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: GraphFile = serde_json::from_str(s)?;
        let e: Vec<(usize, usize)> = f.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::new(f.n, &e)
    }

    pub fn to_json(&self) -> String {
        let f = GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        };
        serde_json::to_string(&f).expect("serializable")
    }

    /// One `i j` pair per line; blank lines and `#` comments are skipped.
    /// The node count is one more than the largest index.
    pub fn from_edge_list(s: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for line in s.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [a, b] = parts.as_slice() else {
                return Err(Error::Parse(format!(
                    "expected two node indices, got {line:?}"
                )));
            };
            let a: usize = a
                .parse()
                .map_err(|_| Error::Parse(format!("bad node index {a:?}")))?;
            let b: usize = b
                .parse()
                .map_err(|_| Error::Parse(format!("bad node index {b:?}")))?;
            edges.push((a, b));
        }
        let n = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        Graph::new(n, &edges)
    }

    /// Parses JSON when the text starts with `{`, an edge list otherwise.
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('{') {
            Graph::from_json(s)
        } else {
            Graph::from_edge_list(s)
        }
    }

    fn relabeled_mask(&self, perm: &[usize], index: &[Vec<usize>]) -> u64 {
        self.edges
            .iter()
            .fold(0u64, |m, &(u, v)| m | 1 << index[perm[u]][perm[v]])
    }
}

/// BFS layers around a root together with eccentricity and odd-ball radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallDecomposition {
    pub root: usize,
    /// `layers[k]` is `N(root, k)`.
    pub layers: Vec<Vec<usize>>,
    pub layer_of: Vec<usize>,
    pub eccentricity: usize,
    /// Smallest `k` with `B(root, k)` inducing a non-bipartite subgraph;
    /// `None` when the graph is bipartite.
    pub odd_ball_radius: Option<usize>,
}

impl BallDecomposition {
    pub fn ball(&self, k: usize) -> Vec<usize> {
        self.layers.iter().take(k + 1).flatten().copied().collect()
    }
}

pub fn ball_decomposition(g: &Graph, v: usize) -> Result<BallDecomposition> {
    if v >= g.node_count() {
        return Err(Error::InvalidArgument(format!("root {v} out of range")));
    }
    if !g.is_connected() {
        return Err(Error::BadGraph);
    }
    let layer_of = g.distances(v);
    let eccentricity = *layer_of.iter().max().unwrap_or(&0);
    let mut layers = vec![Vec::new(); eccentricity + 1];
    for (u, &k) in layer_of.iter().enumerate() {
        layers[k].push(u);
    }
    let mut odd_ball_radius = None;
    let mut ball = Vec::new();
    for (k, layer) in layers.iter().enumerate() {
        ball.extend_from_slice(layer);
        if !g.induced_is_bipartite(&ball) {
            odd_ball_radius = Some(k);
            break;
        }
    }
    Ok(BallDecomposition {
        root: v,
        layers,
        layer_of,
        eccentricity,
        odd_ball_radius,
    })
}

/// Maximum eccentricity.
pub fn graph_diameter(g: &Graph) -> Result<usize> {
    if !g.is_connected() {
        return Err(Error::BadGraph);
    }
    Ok((0..g.node_count())
        .map(|v| *g.distances(v).iter().max().unwrap_or(&0))
        .max()
        .unwrap_or(0))
}

/// A node of minimum eccentricity (the smallest index among ties).
pub fn graph_center(g: &Graph) -> Result<usize> {
    if !g.is_connected() {
        return Err(Error::BadGraph);
    }
    Ok((0..g.node_count())
        .min_by_key(|&v| *g.distances(v).iter().max().unwrap_or(&0))
        .unwrap_or(0))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// One representative of every isomorphism class of connected graphs on
/// exactly `n` nodes (`n <= 7`).
pub fn connected_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    assert!(
        n <= 7,
        "isomorphism enumeration is exhaustive and limited to n <= 7"
    );
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let mut index = vec![vec![0usize; n]; n];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        index[i][j] = k;
        index[j][i] = k;
    }
    let perms = permutations(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        if (mask.count_ones() as usize) + 1 < n {
            continue;
        }
        let e: Vec<(usize, usize)> = (0..pairs.len())
            .filter(|&k| mask >> k & 1 == 1)
            .map(|k| pairs[k])
            .collect();
        let g = Graph::new(n, &e).expect("valid");
        if !g.is_connected() || seen.contains(&mask) {
            continue;
        }
        for p in &perms {
            seen.insert(g.relabeled_mask(p, &index));
        }
        out.push(g);
    }
    out
}

/// A random connected graph: a random spanning tree plus each remaining
/// pair with probability `p`.
pub fn random_connected_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut e = Vec::new();
    for i in 1..n {
        e.push((rng.gen_range(0..i), i));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(p) {
                e.push((i, j));
            }
        }
    }
    Graph::new(n, &e).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balls() {
        let k3 = Graph::complete(3);
        let b = ball_decomposition(&k3, 0).unwrap();
        assert_eq!((b.eccentricity, b.odd_ball_radius), (1, Some(1)));
        let p5 = Graph::path(5);
        let b = ball_decomposition(&p5, 2).unwrap();
        assert_eq!((b.eccentricity, b.odd_ball_radius), (2, None));
        assert_eq!(b.layers, vec![vec![2], vec![1, 3], vec![0, 4]]);
        let c5 = Graph::cycle(5);
        for v in 0..5 {
            let b = ball_decomposition(&c5, v).unwrap();
            assert_eq!((b.eccentricity, b.odd_ball_radius), (2, Some(2)));
        }
    }

    #[test]
    fn diameters() {
        assert_eq!(graph_diameter(&Graph::complete(3)).unwrap(), 1);
        assert_eq!(graph_diameter(&Graph::path(5)).unwrap(), 4);
        assert_eq!(graph_diameter(&Graph::cycle(5)).unwrap(), 2);
        assert_eq!(graph_center(&Graph::path(5)).unwrap(), 2);
        let disconnected = Graph::new(3, &[(0, 1)]).unwrap();
        assert_eq!(graph_diameter(&disconnected), Err(Error::BadGraph));
    }

    #[test]
    fn parsing() {
        let g = Graph::parse("{\"n\": 3, \"edges\": [[0,1],[1,2]]}").unwrap();
        assert_eq!(g, Graph::path(3));
        let h = Graph::parse("# path\n0 1\n1 2\n").unwrap();
        assert_eq!(h, g);
        assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
        assert!(Graph::parse("0 0\n").is_err());
        assert!(Graph::parse("0 1 2\n").is_err());
    }

    #[test]
    fn isomorphism_class_counts() {
        let counts: Vec<usize> = (2..=6)
            .map(|n| connected_graphs_up_to_iso(n).len())
            .collect();
        assert_eq!(counts, vec![1, 2, 6, 21, 112]);
    }
}
