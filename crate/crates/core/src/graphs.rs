//! Concrete graphs: constructions, brute-force distance-regularity,
//! claw search, Delsarte clique covers and the line structure of
//! claw-free graphs.
//!
//! Graphs are small (a few hundred vertices), simple, undirected and
//! connected. Adjacency is kept both as sorted neighbour lists and as
//! bitset rows.

use std::fmt;
use std::path::Path;

use fixedbitset::FixedBitSet;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::arrays::{ArrayError, IntersectionArray};
use crate::claws::above_lower_bound;
use crate::exec::Execution;
use crate::spectrum::{delsarte_bound, eigenvalues};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DrgWitness {
    pub x: usize,
    pub y: usize,
    pub distance: usize,
    /// `(c, a, b)` seen at this distance from the reference vertex, if any.
    pub expected: Option<(u64, u64, u64)>,
    pub found: (u64, u64, u64),
}

impl fmt::Display for DrgWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "x={}, y={} at distance {}: (c,a,b) = {:?}",
            self.x, self.y, self.distance, self.found
        )?;
        match self.expected {
            Some(e) => write!(f, ", expected {e:?}"),
            None => write!(f, ", distance not seen from vertex 0"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
    #[error("input graph is disconnected")]
    DisconnectedInput,
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("resulting graph is disconnected")]
    DisconnectedResult,
    #[error("not distance-regular: {0}")]
    NotDistanceRegular(DrgWitness),
    #[error(transparent)]
    Array(#[from] ArrayError),
    #[error("graph valency {found} does not match array valency {expected}")]
    ValencyMismatch { expected: u64, found: usize },
    #[error("Delsarte clique size is not an integer ({0})")]
    NonIntegralCliqueSize(String),
    #[error("no Delsarte clique cover: edge {u}-{v} lies in {count} cliques of size {size}")]
    NoCover {
        u: usize,
        v: usize,
        count: usize,
        size: usize,
    },
    #[error("vertex {vertex} lies in {count} cover cliques, expected {expected}")]
    CoverCountMismatch {
        vertex: usize,
        count: usize,
        expected: usize,
    },
    #[error("edge {u}-{v} lies in {count} lines")]
    LineNotUnique { u: usize, v: usize, count: usize },
    #[error("vertex {vertex} lies in {count} lines, expected 3")]
    LineCountNotThree { vertex: usize, count: usize },
    #[error("line {clique:?} has size {}, expected {expected}", clique.len())]
    LineSizeWrong { clique: Vec<usize>, expected: u64 },
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
}

/// A simple undirected connected graph on `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    rows: Vec<FixedBitSet>,
    edges: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n(), self.edges)
    }
}

impl Graph {
    /// Builds from an edge list, rejecting loops, repeated edges and
    /// disconnected inputs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let g = Graph::unchecked(n, edges)?;
        if !g.is_connected() {
            return Err(GraphError::DisconnectedInput);
        }
        Ok(g)
    }

    fn unchecked(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::BadParams("empty graph".into()));
        }
        let mut rows = vec![FixedBitSet::with_capacity(n); n];
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::BadParams(format!(
                    "edge {u}-{v} out of range 0..{n}"
                )));
            }
            if u == v {
                return Err(GraphError::BadParams(format!("self-loop at {u}")));
            }
            if rows[u].contains(v) {
                return Err(GraphError::BadParams(format!("duplicate edge {u}-{v}")));
            }
            rows[u].insert(v);
            rows[v].insert(u);
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            adj,
            rows,
            edges: edges.len(),
        })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// The common valency, if the graph is regular.
    pub fn valency(&self) -> Option<usize> {
        let k = self.degree(0);
        self.adj.iter().all(|l| l.len() == k).then_some(k)
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edges);
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    fn is_connected(&self) -> bool {
        self.bfs(0).iter().all(|&d| d != UNREACHED)
    }

    /// Distances from `src`; `u32::MAX` marks unreachable vertices.
    pub fn bfs(&self, src: usize) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.n()];
        let mut queue = std::collections::VecDeque::with_capacity(self.n());
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == UNREACHED {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn distances(&self, exec: Execution) -> Vec<Vec<u32>> {
        exec.map_range(self.n(), |v| self.bfs(v))
    }

    pub fn to_edgelist(&self) -> String {
        let mut out = format!("p graph {} {}\n", self.n(), self.edges);
        for (u, v) in self.edges() {
            out.push_str(&format!("e {u} {v}\n"));
        }
        out
    }
}

const UNREACHED: u32 = u32::MAX;

/// Parses the `p graph <n> <m>` / `e <u> <v>` format (0-indexed). Lines
/// starting with `c` and blank lines are ignored.
pub fn parse_edgelist(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| GraphError::Parse { line, msg };
        let fields: Vec<&str> = raw.split_whitespace().collect();
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(format!("bad number {s:?}")))
        };
        match fields.as_slice() {
            [] => continue,
            [c, ..] if c.starts_with('c') => continue,
            ["p", "graph", n, m] => {
                if header.is_some() {
                    return Err(err("second header".into()));
                }
                header = Some((num(n)?, num(m)?));
            }
            ["e", u, v] => {
                let Some((n, _)) = header else {
                    return Err(err("edge before header".into()));
                };
                let (u, v) = (num(u)?, num(v)?);
                if u >= n || v >= n {
                    return Err(err(format!("vertex out of range 0..{n}")));
                }
                if u == v {
                    return Err(err(format!("self-loop at {u}")));
                }
                edges.push((u.min(v), u.max(v), line));
            }
            _ => return Err(err(format!("unrecognised line {raw:?}"))),
        }
    }
    let Some((n, m)) = header else {
        return Err(GraphError::Parse {
            line: 0,
            msg: "missing header".into(),
        });
    };
    if edges.len() != m {
        return Err(GraphError::Parse {
            line: 0,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    let mut sorted = edges.clone();
    sorted.sort_unstable();
    if let Some(w) = sorted
        .windows(2)
        .find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1))
    {
        return Err(GraphError::Parse {
            line: w[0].2.max(w[1].2),
            msg: format!("duplicate edge {}-{}", w[1].0, w[1].1),
        });
    }
    let pairs: Vec<(usize, usize)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
    Graph::from_edges(n, &pairs)
}

pub fn from_edgelist(path: &Path) -> Result<Graph, GraphError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| GraphError::Io(format!("{}: {e}", path.display())))?;
    parse_edgelist(&text)
}

/// Named cubic graphs given by LCF notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedLcf {
    Heawood,
    Pappus,
    Desargues,
    Tutte8Cage,
    Tutte12Cage,
    Foster,
}

impl NamedLcf {
    pub const ALL: [NamedLcf; 6] = [
        NamedLcf::Heawood,
        NamedLcf::Pappus,
        NamedLcf::Desargues,
        NamedLcf::Tutte8Cage,
        NamedLcf::Tutte12Cage,
        NamedLcf::Foster,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedLcf::Heawood => "heawood",
            NamedLcf::Pappus => "pappus",
            NamedLcf::Desargues => "desargues",
            NamedLcf::Tutte8Cage => "tutte8",
            NamedLcf::Tutte12Cage => "tutte12",
            NamedLcf::Foster => "foster",
        }
    }

    pub fn from_name(s: &str) -> Option<NamedLcf> {
        NamedLcf::ALL.into_iter().find(|g| g.name() == s)
    }

    pub fn shifts(self) -> (&'static [i64], usize) {
        match self {
            NamedLcf::Heawood => (&[5, -5], 7),
            NamedLcf::Pappus => (&[5, 7, -7, 7, -7, -5], 3),
            NamedLcf::Desargues => (&[5, -5, 9, -9], 5),
            NamedLcf::Tutte8Cage => (&[-13, -9, 7, -7, 9, 13], 5),
            NamedLcf::Tutte12Cage => (
                &[
                    17, 27, -13, -59, -35, 35, -11, 13, -53, 53, -27, 21, 57, 11, -21, -57, 59, -17,
                ],
                7,
            ),
            NamedLcf::Foster => (&[17, -9, 37, -37, 9, -17], 15),
        }
    }

    /// The array the construction should verify to.
    pub fn expected_array(self) -> &'static str {
        match self {
            NamedLcf::Heawood => "{3,2,2;1,1,3}",
            NamedLcf::Pappus => "{3,2,2,1;1,1,2,3}",
            NamedLcf::Desargues => "{3,2,2,1,1;1,1,2,2,3}",
            NamedLcf::Tutte8Cage => "{3,2,2,2;1,1,1,3}",
            NamedLcf::Tutte12Cage => "{3,2,2,2,2,2;1,1,1,1,1,3}",
            NamedLcf::Foster => "{3,2,2,2,2,1,1,1;1,1,1,1,2,2,2,3}",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphKind {
    Hamming { d: usize, q: usize },
    Johnson { n: usize, e: usize },
    CompleteBipartite { a: usize, b: usize },
    Kneser62,
    Lcf { shifts: Vec<i64>, repeats: usize },
    Named(NamedLcf),
}

pub fn build(kind: &GraphKind) -> Result<Graph, GraphError> {
    match kind {
        GraphKind::Hamming { d, q } => hamming(*d, *q),
        GraphKind::Johnson { n, e } => johnson(*n, *e),
        GraphKind::CompleteBipartite { a, b } => complete_bipartite(*a, *b),
        GraphKind::Kneser62 => kneser_6_2(),
        GraphKind::Lcf { shifts, repeats } => lcf(shifts, *repeats),
        GraphKind::Named(g) => {
            let (shifts, repeats) = g.shifts();
            lcf(shifts, repeats)
        }
    }
}

/// Words of length `d` over `q` symbols, adjacent at Hamming distance 1.
pub fn hamming(d: usize, q: usize) -> Result<Graph, GraphError> {
    if d == 0 || q < 2 {
        return Err(GraphError::BadParams(format!(
            "hamming needs d >= 1, q >= 2 (got {d}, {q})"
        )));
    }
    let n = q
        .checked_pow(d as u32)
        .filter(|&n| n <= 1 << 20)
        .ok_or_else(|| GraphError::BadParams(format!("q^d too large ({q}^{d})")))?;
    let mut edges = Vec::new();
    for u in 0..n {
        let mut place = 1;
        for _ in 0..d {
            let digit = (u / place) % q;
            for other in digit + 1..q {
                edges.push((u, u + (other - digit) * place));
            }
            place *= q;
        }
    }
    Graph::from_edges(n, &edges)
}

/// `e`-subsets of `{0..n}` in lexicographic order.
fn subsets(n: usize, e: usize) -> Vec<u64> {
    fn rec(start: usize, n: usize, left: usize, cur: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for x in start..=n - left {
            rec(x + 1, n, left - 1, cur | 1 << x, out);
        }
    }
    let mut out = Vec::new();
    rec(0, n, e, 0, &mut out);
    out
}

/// `e`-subsets of an `n`-set, adjacent when they share `e - 1` points.
pub fn johnson(n: usize, e: usize) -> Result<Graph, GraphError> {
    if e == 0 || n < 2 * e || n > 63 {
        return Err(GraphError::BadParams(format!(
            "johnson needs 1 <= e, 2e <= n <= 63 (got n={n}, e={e})"
        )));
    }
    set_graph(&subsets(n, e), |x, y| {
        (x & y).count_ones() as usize == e - 1
    })
}

/// 2-subsets of a 6-set, adjacent when disjoint.
pub fn kneser_6_2() -> Result<Graph, GraphError> {
    set_graph(&subsets(6, 2), |x, y| x & y == 0)
}

fn set_graph(sets: &[u64], adjacent: impl Fn(u64, u64) -> bool) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    for (i, &x) in sets.iter().enumerate() {
        for (j, &y) in sets.iter().enumerate().skip(i + 1) {
            if adjacent(x, y) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(sets.len(), &edges)
}

pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph, GraphError> {
    if a == 0 || b == 0 {
        return Err(GraphError::BadParams(
            "complete_bipartite needs a, b >= 1".into(),
        ));
    }
    let edges: Vec<_> = (0..a)
        .flat_map(|u| (a..a + b).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(a + b, &edges)
}

/// Cubic Hamiltonian graph `[shifts]^repeats`: the cycle `0..n` plus a
/// chord from `i` to `i + shifts[i mod len]`.
pub fn lcf(shifts: &[i64], repeats: usize) -> Result<Graph, GraphError> {
    let n = shifts.len() * repeats;
    if shifts.is_empty() || repeats == 0 || n < 4 {
        return Err(GraphError::BadParams(
            "LCF needs a nonempty shift list and n >= 4".into(),
        ));
    }
    let ni = n as i64;
    let mut edges: Vec<(usize, usize)> = (0..n)
        .map(|i| (i.min((i + 1) % n), i.max((i + 1) % n)))
        .collect();
    for i in 0..n {
        let s = shifts[i % shifts.len()];
        let j = (i as i64 + s).rem_euclid(ni) as usize;
        let back = shifts[j % shifts.len()];
        if (j as i64 + back).rem_euclid(ni) as usize != i {
            return Err(GraphError::BadParams(format!(
                "LCF chord {i}->{j} is not matched by shift {back} at {j}"
            )));
        }
        if j == i || (j + 1) % n == i || (i + 1) % n == j {
            return Err(GraphError::BadParams(format!(
                "LCF shift {s} at {i} hits the cycle"
            )));
        }
        if i < j {
            edges.push((i, j));
        }
    }
    Graph::from_edges(n, &edges)
}

/// Vertices of `g`, adjacent when at distance exactly `i`.
pub fn distance_graph(g: &Graph, i: u32, exec: Execution) -> Result<Graph, GraphError> {
    if i == 0 {
        return Err(GraphError::BadParams("distance must be positive".into()));
    }
    let dist = g.distances(exec);
    let mut edges = Vec::new();
    for (u, row) in dist.iter().enumerate() {
        edges.extend((u + 1..g.n()).filter(|&v| row[v] == i).map(|v| (u, v)));
    }
    let h = Graph::unchecked(g.n(), &edges)?;
    if !h.is_connected() {
        return Err(GraphError::DisconnectedResult);
    }
    Ok(h)
}

/// Proper 2-colouring with vertex 0 on side 0.
pub fn bipartition(g: &Graph) -> Result<Vec<u8>, GraphError> {
    let dist = g.bfs(0);
    for (u, list) in g.adj.iter().enumerate() {
        if list.iter().any(|&v| dist[u] % 2 == dist[v] % 2) {
            return Err(GraphError::NotBipartite);
        }
    }
    Ok(dist.iter().map(|d| (d % 2) as u8).collect())
}

/// One colour class of a bipartite graph, adjacent at distance 2. The
/// result keeps the original vertex order.
pub fn halved_graph(g: &Graph, side: u8, exec: Execution) -> Result<Graph, GraphError> {
    if side > 1 {
        return Err(GraphError::BadParams(format!(
            "side must be 0 or 1, got {side}"
        )));
    }
    let colour = bipartition(g)?;
    let keep: Vec<usize> = (0..g.n()).filter(|&v| colour[v] == side).collect();
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in keep.iter().enumerate() {
        index[v] = i;
    }
    let rows = exec.map_slice(&keep, |&u| {
        let mut two = FixedBitSet::with_capacity(g.n());
        for &w in g.neighbors(u) {
            for &v in g.neighbors(w) {
                if v > u {
                    two.insert(v);
                }
            }
        }
        two.ones().map(|v| (index[u], index[v])).collect::<Vec<_>>()
    });
    let edges: Vec<_> = rows.into_iter().flatten().collect();
    let h = Graph::unchecked(keep.len(), &edges)?;
    if !h.is_connected() {
        return Err(GraphError::DisconnectedResult);
    }
    Ok(h)
}

type Row = (u64, u64, u64);

/// `(c, a, b)` of `y` relative to `x`, given distances from `x`.
fn row_at(g: &Graph, dist: &[u32], y: usize) -> Row {
    let i = dist[y];
    let (mut c, mut a, mut b) = (0, 0, 0);
    for &z in g.neighbors(y) {
        match dist[z] {
            d if d + 1 == i => c += 1,
            d if d == i => a += 1,
            _ => b += 1,
        }
    }
    (c, a, b)
}

/// The rows seen from `x`, or the first vertex breaking them.
fn rows_from(g: &Graph, x: usize) -> Result<Vec<Row>, DrgWitness> {
    let dist = g.bfs(x);
    let mut rows: Vec<Option<Row>> = Vec::new();
    for y in 0..g.n() {
        let i = dist[y] as usize;
        if rows.len() <= i {
            rows.resize(i + 1, None);
        }
        let found = row_at(g, &dist, y);
        match rows[i] {
            None => rows[i] = Some(found),
            Some(expected) if expected != found => {
                return Err(DrgWitness {
                    x,
                    y,
                    distance: i,
                    expected: Some(expected),
                    found,
                });
            }
            _ => {}
        }
    }
    Ok(rows
        .into_iter()
        .map(|r| r.expect("BFS layers are contiguous"))
        .collect())
}

/// Runs BFS from every vertex and checks that `c_i`, `a_i`, `b_i` depend
/// only on the distance. The witness is the first failure in vertex order.
pub fn check_drg(g: &Graph, exec: Execution) -> Result<IntersectionArray, GraphError> {
    let reference = rows_from(g, 0).map_err(GraphError::NotDistanceRegular)?;
    let failure = exec.find_map_first(g.n(), |x| {
        if x == 0 {
            return None;
        }
        let dist = g.bfs(x);
        (0..g.n()).find_map(|y| {
            let i = dist[y] as usize;
            let found = row_at(g, &dist, y);
            let expected = reference.get(i).copied();
            (expected != Some(found)).then_some(DrgWitness {
                x,
                y,
                distance: i,
                expected,
                found,
            })
        })
    });
    if let Some(w) = failure {
        return Err(GraphError::NotDistanceRegular(w));
    }
    let d = reference.len() - 1;
    let b = (0..d).map(|i| reference[i].2).collect();
    let c = (1..=d).map(|i| reference[i].0).collect();
    Ok(IntersectionArray::new(b, c)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClawWitness {
    pub center: usize,
    pub leaves: Vec<usize>,
}

/// Lexicographically least independent `n`-subset of `cands`.
fn independent_subset(g: &Graph, cands: &[usize], n: usize) -> Option<Vec<usize>> {
    fn rec(g: &Graph, cands: &[usize], n: usize, from: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == n {
            return true;
        }
        for idx in from..cands.len() {
            if cands.len() - idx < n - chosen.len() {
                return false;
            }
            let v = cands[idx];
            if chosen.iter().all(|&u| !g.adjacent(u, v)) {
                chosen.push(v);
                if rec(g, cands, n, idx + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::with_capacity(n);
    rec(g, cands, n, 0, &mut chosen).then_some(chosen)
}

/// An induced `K_{1,n}`: smallest centre, then lexicographically least
/// leaves.
pub fn find_claw(g: &Graph, n: usize, exec: Execution) -> Option<ClawWitness> {
    if n == 0 {
        return Some(ClawWitness {
            center: 0,
            leaves: Vec::new(),
        });
    }
    exec.find_map_first(g.n(), |center| {
        independent_subset(g, g.neighbors(center), n).map(|leaves| ClawWitness { center, leaves })
    })
}

fn bron_kerbosch(
    g: &Graph,
    r: &mut Vec<usize>,
    mut p: FixedBitSet,
    mut x: FixedBitSet,
    min: usize,
    max: usize,
    out: &mut Vec<Vec<usize>>,
) {
    let open = p.count_ones(..);
    if open == 0 && x.is_clear() {
        if r.len() >= min {
            let mut c = r.clone();
            c.sort_unstable();
            out.push(c);
        }
        return;
    }
    // R extends, so it is not maximal; anything larger is out of range
    if r.len() >= max || r.len() + open < min {
        return;
    }
    let pivot = p
        .ones()
        .chain(x.ones())
        .max_by_key(|&u| p.intersection(&g.rows[u]).count())
        .expect("p or x is nonempty");
    let mut branch = p.clone();
    branch.difference_with(&g.rows[pivot]);
    for v in branch.ones() {
        r.push(v);
        let mut np = p.clone();
        np.intersect_with(&g.rows[v]);
        let mut nx = x.clone();
        nx.intersect_with(&g.rows[v]);
        bron_kerbosch(g, r, np, nx, min, max, out);
        r.pop();
        p.set(v, false);
        x.insert(v);
    }
}

/// Maximal cliques with `min <= size <= max`, as sorted vertex lists in
/// lexicographic order.
pub fn maximal_cliques(g: &Graph, min: usize, max: usize, exec: Execution) -> Vec<Vec<usize>> {
    let per_vertex = exec.map_range(g.n(), |v| {
        let mut p = FixedBitSet::with_capacity(g.n());
        let mut x = FixedBitSet::with_capacity(g.n());
        for &u in g.neighbors(v) {
            if u > v {
                p.insert(u);
            } else {
                x.insert(u);
            }
        }
        let mut out = Vec::new();
        bron_kerbosch(g, &mut vec![v], p, x, min, max, &mut out);
        out
    });
    let mut all: Vec<Vec<usize>> = per_vertex.into_iter().flatten().collect();
    all.sort();
    all
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueCover {
    pub clique_size: usize,
    pub cliques: Vec<Vec<usize>>,
    pub per_vertex_count: Vec<usize>,
}

impl CliqueCover {
    /// The common number of cliques per vertex, if uniform.
    pub fn uniform_count(&self) -> Option<usize> {
        let first = *self.per_vertex_count.first()?;
        self.per_vertex_count
            .iter()
            .all(|&c| c == first)
            .then_some(first)
    }
}

struct EdgeIndex {
    offsets: Vec<usize>,
}

impl EdgeIndex {
    fn new(g: &Graph) -> EdgeIndex {
        let mut offsets = Vec::with_capacity(g.n() + 1);
        let mut total = 0;
        for u in 0..g.n() {
            offsets.push(total);
            total += g.neighbors(u).iter().filter(|&&v| v > u).count();
        }
        offsets.push(total);
        EdgeIndex { offsets }
    }

    fn id(&self, g: &Graph, u: usize, v: usize) -> usize {
        let (u, v) = (u.min(v), u.max(v));
        let higher = &g.neighbors(u)[g.neighbors(u).partition_point(|&w| w <= u)..];
        self.offsets[u] + higher.binary_search(&v).expect("edge exists")
    }

    fn len(&self) -> usize {
        *self.offsets.last().unwrap()
    }
}

fn clique_edges(g: &Graph, idx: &EdgeIndex, c: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, &u) in c.iter().enumerate() {
        out.extend(c[i + 1..].iter().map(|&v| idx.id(g, u, v)));
    }
    out
}

/// Picks edge-disjoint cliques covering every edge once. Tries cliques in
/// lexicographic order for the first uncovered edge, backtracking.
fn exact_cover(edge_cliques: &[Vec<usize>], clique_edges: &[Vec<usize>]) -> Option<Vec<usize>> {
    fn rec(
        next: usize,
        covered: &mut [bool],
        edge_cliques: &[Vec<usize>],
        clique_edges: &[Vec<usize>],
        chosen: &mut Vec<usize>,
    ) -> bool {
        let Some(e) = (next..covered.len()).find(|&e| !covered[e]) else {
            return true;
        };
        for &c in &edge_cliques[e] {
            if clique_edges[c].iter().any(|&f| covered[f]) {
                continue;
            }
            for &f in &clique_edges[c] {
                covered[f] = true;
            }
            chosen.push(c);
            if rec(e + 1, covered, edge_cliques, clique_edges, chosen) {
                return true;
            }
            chosen.pop();
            for &f in &clique_edges[c] {
                covered[f] = false;
            }
        }
        false
    }
    let mut covered = vec![false; edge_cliques.len()];
    let mut chosen = Vec::new();
    if rec(0, &mut covered, edge_cliques, clique_edges, &mut chosen) {
        chosen.sort_unstable();
        Some(chosen)
    } else {
        None
    }
}

fn cover_from(g: &Graph, size: usize, cliques: Vec<Vec<usize>>) -> CliqueCover {
    let mut per_vertex_count = vec![0; g.n()];
    for c in &cliques {
        for &v in c {
            per_vertex_count[v] += 1;
        }
    }
    CliqueCover {
        clique_size: size,
        cliques,
        per_vertex_count,
    }
}

/// Finds a set of Delsarte cliques (size `1 - k/theta_min`) covering every
/// edge exactly once, with `-theta_min` cliques through each vertex.
///
/// Expects `check_drg(g) == arr`; only the valency is rechecked here.
pub fn delsarte_cover(
    g: &Graph,
    arr: &IntersectionArray,
    exec: Execution,
) -> Result<CliqueCover, GraphError> {
    let k = arr.k();
    if g.valency() != Some(k as usize) {
        return Err(GraphError::ValencyMismatch {
            expected: k,
            found: g.degree(0),
        });
    }
    let report = eigenvalues(arr).map_err(|e| GraphError::NonIntegralCliqueSize(e.to_string()))?;
    let bound = delsarte_bound(&report, k);
    let size = bound
        .integral_size()
        .ok_or_else(|| GraphError::NonIntegralCliqueSize(format!("{bound:?}")))?
        as usize;
    let theta = report
        .theta_min
        .as_rational()
        .and_then(|t| t.to_integer().to_i64())
        .expect("integral clique size implies rational theta_min");
    let per_vertex = (-theta) as usize;

    let cliques = maximal_cliques(g, size, size, exec);
    let idx = EdgeIndex::new(g);
    let edge_sets: Vec<Vec<usize>> = cliques.iter().map(|c| clique_edges(g, &idx, c)).collect();
    let mut edge_cliques = vec![Vec::new(); idx.len()];
    for (ci, es) in edge_sets.iter().enumerate() {
        for &e in es {
            edge_cliques[e].push(ci);
        }
    }
    let edges = g.edges();
    if let Some(e) = edge_cliques.iter().position(|c| c.is_empty()) {
        let (u, v) = edges[e];
        return Err(GraphError::NoCover {
            u,
            v,
            count: 0,
            size,
        });
    }
    let chosen = if edge_cliques.iter().all(|c| c.len() == 1) {
        (0..cliques.len()).collect()
    } else {
        exact_cover(&edge_cliques, &edge_sets).ok_or_else(|| {
            let e = edge_cliques.iter().position(|c| c.len() > 1).unwrap();
            let (u, v) = edges[e];
            GraphError::NoCover {
                u,
                v,
                count: edge_cliques[e].len(),
                size,
            }
        })?
    };
    let kept: Vec<Vec<usize>> = chosen.into_iter().map(|c| cliques[c].clone()).collect();
    let cover = cover_from(g, size, kept);
    if let Some(vertex) = cover.per_vertex_count.iter().position(|&c| c != per_vertex) {
        return Err(GraphError::CoverCountMismatch {
            vertex,
            count: cover.per_vertex_count[vertex],
            expected: per_vertex,
        });
    }
    Ok(cover)
}

/// Smallest size of a line: `k - 2(a1 + 1) + 1`, at least 1.
pub fn line_threshold(arr: &IntersectionArray) -> usize {
    let k = arr.k() as i64;
    let a1 = arr.a(1) as i64;
    (k - 2 * (a1 + 1) + 1).max(1) as usize
}

/// Lines (maximal cliques of at least [`line_threshold`] vertices) and the
/// checks made on them: one line per edge, three lines per vertex, every
/// line of size `1 + k/3`. No hypothesis is checked.
pub fn line_structure(
    g: &Graph,
    arr: &IntersectionArray,
    exec: Execution,
) -> Result<CliqueCover, GraphError> {
    let k = arr.k();
    let lines = maximal_cliques(g, line_threshold(arr), usize::MAX, exec);
    let idx = EdgeIndex::new(g);
    let mut per_edge = vec![0usize; idx.len()];
    for l in &lines {
        for e in clique_edges(g, &idx, l) {
            per_edge[e] += 1;
        }
    }
    if let Some(e) = per_edge.iter().position(|&c| c != 1) {
        let (u, v) = g.edges()[e];
        return Err(GraphError::LineNotUnique {
            u,
            v,
            count: per_edge[e],
        });
    }
    let expected = 1 + k / 3;
    let cover = cover_from(g, expected as usize, lines);
    if let Some(vertex) = cover.per_vertex_count.iter().position(|&c| c != 3) {
        return Err(GraphError::LineCountNotThree {
            vertex,
            count: cover.per_vertex_count[vertex],
        });
    }
    if !k.is_multiple_of(3) {
        return Err(GraphError::LineSizeWrong {
            clique: cover.cliques[0].clone(),
            expected,
        });
    }
    if let Some(bad) = cover.cliques.iter().find(|c| c.len() as u64 != expected) {
        return Err(GraphError::LineSizeWrong {
            clique: bad.clone(),
            expected,
        });
    }
    Ok(cover)
}

/// Checks `k > max{3, 8(a1+1)/3}` and the absence of 4-claws, then runs
/// [`line_structure`].
pub fn verify_lines(
    g: &Graph,
    arr: &IntersectionArray,
    exec: Execution,
) -> Result<CliqueCover, GraphError> {
    if g.valency() != Some(arr.k() as usize) {
        return Err(GraphError::ValencyMismatch {
            expected: arr.k(),
            found: g.degree(0),
        });
    }
    if !above_lower_bound(arr) {
        return Err(GraphError::HypothesisNotMet(format!(
            "k = {} is not above max{{3, 8(a1+1)/3}} with a1 = {}",
            arr.k(),
            arr.a(1)
        )));
    }
    if let Some(w) = find_claw(g, 4, exec) {
        return Err(GraphError::HypothesisNotMet(format!(
            "4-claw at {} with leaves {:?}",
            w.center, w.leaves
        )));
    }
    line_structure(g, arr, exec)
}

/// Shape of one local graph: sorted component sizes, and whether every
/// component is a clique.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalShape {
    pub components: Vec<usize>,
    pub disjoint_cliques: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalReport {
    pub uniform: bool,
    /// Shape at vertex 0 (the shape everywhere when uniform).
    pub shape: LocalShape,
    /// First vertex whose shape differs from vertex 0.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_deviation: Option<usize>,
}

fn local_shape(g: &Graph, v: usize) -> LocalShape {
    let nbrs = g.neighbors(v);
    let mut seen = vec![false; nbrs.len()];
    let mut components = Vec::new();
    let mut disjoint_cliques = true;
    for start in 0..nbrs.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut members = Vec::new();
        while let Some(i) = stack.pop() {
            members.push(nbrs[i]);
            for j in 0..nbrs.len() {
                if !seen[j] && g.adjacent(nbrs[i], nbrs[j]) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        let size = members.len();
        let inner = members
            .iter()
            .map(|&u| members.iter().filter(|&&w| g.adjacent(u, w)).count())
            .sum::<usize>();
        if inner != size * (size - 1) {
            disjoint_cliques = false;
        }
        components.push(size);
    }
    components.sort_unstable_by(|a, b| b.cmp(a));
    LocalShape {
        components,
        disjoint_cliques,
    }
}

/// Decomposes every local graph into connected components.
pub fn local_check(g: &Graph, exec: Execution) -> LocalReport {
    let shapes = exec.map_range(g.n(), |v| local_shape(g, v));
    let first_deviation = shapes.iter().position(|s| *s != shapes[0]);
    LocalReport {
        uniform: first_deviation.is_none(),
        shape: shapes[0].clone(),
        first_deviation,
    }
}
