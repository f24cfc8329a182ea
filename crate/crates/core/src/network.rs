//! Coupled-oscillator networks and the exact graph machinery derived from
//! them: incidence matrices, fundamental cycles, bridges, and maximal
//! bipartite subgraphs.
//!
//! Nodes are labeled `0..=n`; node 0 is the reference with phase fixed to 1.
//! All combinatorial computations here are exact (integer arithmetic).

use crate::error::{Error, Result};
use crate::numeric::{int_rank, unimodular_int_solve, C64};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::fmt;

pub const MAX_BIPARTITE_EDGES: usize = 16;

/// Undirected edge, stored with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        if a < b {
            Edge { i: a, j: b }
        } else {
            Edge { i: b, j: a }
        }
    }

    pub fn touches(&self, v: usize) -> bool {
        self.i == v || self.j == v
    }

    pub fn other(&self, v: usize) -> usize {
        if self.i == v {
            self.j
        } else {
            self.i
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.i, self.j)
    }
}

/// A coupling value: exact rational, complex double, or a marker to be
/// resolved by seeded sampling.
#[derive(Debug, Clone, PartialEq)]
pub enum Coupling {
    Rational(Ratio<i64>),
    Complex(C64),
    Generic,
}

impl Coupling {
    pub fn as_c64(&self) -> Option<C64> {
        match self {
            Coupling::Rational(r) => Some(C64::new(
                *r.numer() as f64 / *r.denom() as f64,
                0.0,
            )),
            Coupling::Complex(c) => Some(*c),
            Coupling::Generic => None,
        }
    }

    pub fn as_big_rational(&self) -> Option<BigRational> {
        match self {
            Coupling::Rational(r) => Some(BigRational::new(
                BigInt::from(*r.numer()),
                BigInt::from(*r.denom()),
            )),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coupling::Rational(r) => *r.numer() == 0,
            Coupling::Complex(c) => c.norm_sqr() == 0.0,
            Coupling::Generic => false,
        }
    }
}

/// Natural frequencies: explicit per-node values, identical everywhere, or a
/// marker for seeded sampling of the deviations.
#[derive(Debug, Clone, PartialEq)]
pub enum Frequencies {
    Given(Vec<f64>),
    Homogeneous,
    Generic,
}

/// Per-edge conductance/susceptance parameters and per-node active power for
/// the power-flow variant.
#[derive(Debug, Clone, PartialEq)]
pub struct PfData {
    /// (g, b) per edge, in edge order.
    pub admittances: Vec<(f64, f64)>,
    /// Active power per node, indexed 0..=n (entry 0 unused).
    pub power: Vec<f64>,
}

/// A network: connected simple graph plus couplings, frequencies, and
/// optional delay / power-flow data. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    num_nodes: usize,
    edges: Vec<Edge>,
    couplings: Vec<Coupling>,
    frequencies: Frequencies,
    delays: Option<Vec<f64>>,
    pf: Option<PfData>,
}

impl Network {
    pub fn new(
        num_nodes: usize,
        edges: Vec<Edge>,
        couplings: Vec<Coupling>,
        frequencies: Frequencies,
        delays: Option<Vec<f64>>,
        pf: Option<PfData>,
    ) -> Result<Self> {
        if num_nodes < 2 {
            return Err(Error::MalformedInput(
                "a network needs at least two nodes".into(),
            ));
        }
        if edges.len() != couplings.len() {
            return Err(Error::MalformedInput(
                "couplings must match edges one-to-one".into(),
            ));
        }
        let mut sorted = edges.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != edges.len() {
            return Err(Error::MalformedInput("parallel edges are not allowed".into()));
        }
        for e in &edges {
            if e.i == e.j {
                return Err(Error::MalformedInput(format!("self-loop at node {}", e.i)));
            }
            if e.j >= num_nodes {
                return Err(Error::MalformedInput(format!(
                    "edge {} references a node outside 0..{}",
                    e,
                    num_nodes - 1
                )));
            }
        }
        for (e, k) in edges.iter().zip(&couplings) {
            if k.is_zero() {
                return Err(Error::ZeroCoupling { i: e.i, j: e.j });
            }
        }
        if let Frequencies::Given(w) = &frequencies {
            if w.len() != num_nodes {
                return Err(Error::MalformedInput(format!(
                    "frequencies must list {} values",
                    num_nodes
                )));
            }
        }
        if let Some(d) = &delays {
            if d.len() != edges.len() {
                return Err(Error::MalformedInput(
                    "delays must cover every edge".into(),
                ));
            }
        }
        if let Some(pf) = &pf {
            if pf.admittances.len() != edges.len() || pf.power.len() != num_nodes {
                return Err(Error::MalformedInput(
                    "power-flow data must cover every edge and node".into(),
                ));
            }
        }
        let net = Network {
            num_nodes,
            edges,
            couplings,
            frequencies,
            delays,
            pf,
        };
        if !net.is_connected() {
            return Err(Error::DisconnectedGraph);
        }
        Ok(net)
    }

    /// Number of non-reference nodes (the ambient dimension `n`).
    pub fn n(&self) -> usize {
        self.num_nodes - 1
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn frequencies(&self) -> &Frequencies {
        &self.frequencies
    }

    pub fn delays(&self) -> Option<&[f64]> {
        self.delays.as_deref()
    }

    pub fn pf(&self) -> Option<&PfData> {
        self.pf.as_ref()
    }

    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.iter().position(|&x| x == e)
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter(|e| e.touches(v))
            .map(|e| e.other(v))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    fn is_connected(&self) -> bool {
        connected_on(self.num_nodes, &self.edges)
    }

    pub fn has_generic_markers(&self) -> bool {
        self.couplings.iter().any(|k| matches!(k, Coupling::Generic))
            || matches!(self.frequencies, Frequencies::Generic)
    }

    /// Resolve GENERIC markers by seeded sampling and return the concrete
    /// network together with a record of what was drawn.
    ///
    /// Coupling magnitudes are uniform in [1/2, 2] with phase uniform in
    /// [0, 2π); frequency deviations are drawn by the same law and stored as
    /// `w = (-Σ s_i, s_1, …, s_n)` so the deviations equal the sample.
    pub fn sample_generic(&self, rng: &mut ChaCha8Rng) -> (Network, SampledParams) {
        let mut sampled = SampledParams::default();
        let couplings: Vec<Coupling> = self
            .couplings
            .iter()
            .enumerate()
            .map(|(idx, k)| match k {
                Coupling::Generic => {
                    let mag = rng.gen_range(0.5..2.0);
                    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
                    let v = C64::from_polar(mag, phase);
                    sampled.couplings.push((self.edges[idx], v));
                    Coupling::Complex(v)
                }
                other => other.clone(),
            })
            .collect();
        let frequencies = match &self.frequencies {
            Frequencies::Generic => {
                let n = self.n();
                let mut devs = Vec::with_capacity(n);
                for _ in 0..n {
                    let mag = rng.gen_range(0.5..2.0);
                    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    devs.push(mag * sign);
                }
                let mut w = vec![-devs.iter().sum::<f64>()];
                w.extend(devs.iter().copied());
                sampled.frequencies = Some(w.clone());
                Frequencies::Given(w)
            }
            other => other.clone(),
        };
        let net = Network {
            num_nodes: self.num_nodes,
            edges: self.edges.clone(),
            couplings,
            frequencies,
            delays: self.delays.clone(),
            pf: self.pf.clone(),
        };
        (net, sampled)
    }

    /// Remove one node (not the reference), compacting labels above it.
    /// The caller is responsible for keeping the result connected.
    pub fn without_node(&self, v: usize) -> Result<Network> {
        assert!(v != 0, "the reference node cannot be removed");
        let relabel = |u: usize| if u > v { u - 1 } else { u };
        let mut edges = Vec::new();
        let mut couplings = Vec::new();
        let mut delays = self.delays.as_ref().map(|_| Vec::new());
        let mut adm = self.pf.as_ref().map(|_| Vec::new());
        for (idx, e) in self.edges.iter().enumerate() {
            if e.touches(v) {
                continue;
            }
            edges.push(Edge::new(relabel(e.i), relabel(e.j)));
            couplings.push(self.couplings[idx].clone());
            if let (Some(d), Some(src)) = (delays.as_mut(), self.delays.as_ref()) {
                d.push(src[idx]);
            }
            if let (Some(a), Some(src)) = (adm.as_mut(), self.pf.as_ref()) {
                a.push(src.admittances[idx]);
            }
        }
        let frequencies = match &self.frequencies {
            Frequencies::Given(w) => {
                let mut w2 = w.clone();
                w2.remove(v);
                Frequencies::Given(w2)
            }
            other => other.clone(),
        };
        let pf = match (&self.pf, adm) {
            (Some(src), Some(admittances)) => {
                let mut power = src.power.clone();
                power.remove(v);
                Some(PfData { admittances, power })
            }
            _ => None,
        };
        Network::new(self.num_nodes - 1, edges, couplings, frequencies, delays, pf)
    }
}

/// Record of the parameters drawn while resolving GENERIC markers.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SampledParams {
    pub couplings: Vec<(Edge, C64)>,
    pub frequencies: Option<Vec<f64>>,
}

fn connected_on(num_nodes: usize, edges: &[Edge]) -> bool {
    if num_nodes == 0 {
        return false;
    }
    let mut seen = vec![false; num_nodes];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for e in edges {
            if e.touches(v) {
                let u = e.other(v);
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
    }
    count == num_nodes
}

// ---------------------------------------------------------------------------
// Digraphs and incidence matrices
// ---------------------------------------------------------------------------

/// Directed graph on nodes `0..num_nodes`. At most one of (i,j), (j,i) may be
/// present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    pub num_nodes: usize,
    pub arcs: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(num_nodes: usize, arcs: Vec<(usize, usize)>) -> Self {
        let mut undirected: Vec<Edge> = arcs.iter().map(|&(a, b)| Edge::new(a, b)).collect();
        undirected.sort();
        let before = undirected.len();
        undirected.dedup();
        assert_eq!(
            before,
            undirected.len(),
            "digraph carries both orientations of an edge"
        );
        Digraph { num_nodes, arcs }
    }

    pub fn underlying_edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self.arcs.iter().map(|&(a, b)| Edge::new(a, b)).collect();
        out.sort();
        out
    }

    pub fn transpose(&self) -> Digraph {
        Digraph {
            num_nodes: self.num_nodes,
            arcs: self.arcs.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }

    pub fn is_acyclic(&self) -> bool {
        // Kahn's algorithm on the arc list.
        let mut indeg = vec![0usize; self.num_nodes];
        for &(_, b) in &self.arcs {
            indeg[b] += 1;
        }
        let mut queue: VecDeque<usize> =
            (0..self.num_nodes).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = queue.pop_front() {
            removed += 1;
            for &(a, b) in &self.arcs {
                if a == v {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        queue.push_back(b);
                    }
                }
            }
        }
        removed == self.num_nodes
    }

    /// True when the underlying undirected graph touches every node and is
    /// connected.
    pub fn spans(&self) -> bool {
        connected_on(self.num_nodes, &self.underlying_edges())
    }
}

/// Reduced incidence matrix: one column `e_i - e_j` per arc `(i, j)`, with the
/// row of node 0 deleted (`e_0 = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    /// rows = num_nodes - 1
    pub rows: usize,
    /// entries[r][c], row-major
    pub entries: Vec<Vec<i64>>,
}

impl IncidenceMatrix {
    pub fn cols(&self) -> usize {
        if self.rows == 0 {
            0
        } else {
            self.entries[0].len()
        }
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.entries[r][c]).collect()
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        (0..self.rows)
            .map(|r| {
                self.entries[r]
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a * b)
                    .sum::<i64>()
            })
            .collect()
    }

    pub fn kernel_dimension(&self) -> usize {
        self.cols() - int_rank(&self.entries)
    }
}

/// `reduced_incidence`: the matrix with column `e_i - e_j` per arc `(i, j)`.
pub fn reduced_incidence(d: &Digraph) -> IncidenceMatrix {
    let rows = d.num_nodes - 1;
    let mut entries = vec![vec![0i64; d.arcs.len()]; rows];
    for (c, &(a, b)) in d.arcs.iter().enumerate() {
        if a != 0 {
            entries[a - 1][c] = 1;
        }
        if b != 0 {
            entries[b - 1][c] = -1;
        }
    }
    IncidenceMatrix { rows, entries }
}

/// Deterministic BFS spanning tree from `root`, visiting lowest-index
/// neighbors first. Arcs are oriented child → parent.
pub fn spanning_tree(net: &Network, root: usize) -> Digraph {
    let mut seen = vec![false; net.num_nodes()];
    let mut arcs = Vec::with_capacity(net.n());
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(v) = queue.pop_front() {
        for u in net.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                arcs.push((u, v));
                queue.push_back(u);
            }
        }
    }
    Digraph::new(net.num_nodes(), arcs)
}

/// Oriented cycle indicator: a {−1, 0, +1} kernel vector of a reduced
/// incidence matrix, together with the undirected cycle it traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleVector {
    /// One entry per arc of the digraph the vector was built against.
    pub entries: Vec<i64>,
    /// The undirected edges in the cycle's support.
    pub cycle: Vec<Edge>,
}

/// One cycle vector per non-tree edge. The digraph is `tree arcs + (i, j)`
/// for the extra edge `{i, j}` (i < j), and the sign convention puts −1 on
/// the non-tree arc coordinate.
pub fn fundamental_cycles(net: &Network, tree: &Digraph) -> Vec<CycleVector> {
    let tree_edges = tree.underlying_edges();
    let q_tree = reduced_incidence(tree);
    let mut out = Vec::new();
    let mut extra: Vec<Edge> = net
        .edges()
        .iter()
        .copied()
        .filter(|e| !tree_edges.contains(e))
        .collect();
    extra.sort();
    for e in extra {
        // column of the extra arc (i, j)
        let mut v = vec![0i128; tree.num_nodes - 1];
        if e.i != 0 {
            v[e.i - 1] += 1;
        }
        if e.j != 0 {
            v[e.j - 1] -= 1;
        }
        // Solve Q_tree * tau = v; the tree matrix is square and unimodular.
        let tau = unimodular_int_solve(&q_tree.entries, &v)
            .expect("spanning tree incidence matrix is invertible");
        let mut entries: Vec<i64> = tau.iter().map(|&x| x as i64).collect();
        entries.push(-1);
        let mut cycle: Vec<Edge> = Vec::new();
        for (idx, &t) in tau.iter().enumerate() {
            if t != 0 {
                let (a, b) = tree.arcs[idx];
                cycle.push(Edge::new(a, b));
            }
        }
        cycle.push(e);
        cycle.sort();
        out.push(CycleVector { entries, cycle });
    }
    out
}

/// The digraph whose kernel a set of fundamental cycle vectors lives in:
/// tree arcs followed by the non-tree arcs (i, j) in lex order.
pub fn cycle_space_digraph(net: &Network, tree: &Digraph) -> Digraph {
    let tree_edges = tree.underlying_edges();
    let mut arcs = tree.arcs.clone();
    let mut extra: Vec<Edge> = net
        .edges()
        .iter()
        .copied()
        .filter(|e| !tree_edges.contains(e))
        .collect();
    extra.sort();
    arcs.extend(extra.iter().map(|e| (e.i, e.j)));
    Digraph::new(net.num_nodes(), arcs)
}

/// All bridges (edges whose removal disconnects the graph), by DFS low-link.
pub fn bridges(net: &Network) -> Vec<Edge> {
    let n = net.num_nodes();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![usize::MAX; n];
    let mut timer = 0usize;
    let mut out = Vec::new();

    // Iterative DFS carrying the parent edge.
    fn dfs(
        v: usize,
        parent_edge: Option<Edge>,
        net: &Network,
        disc: &mut [usize],
        low: &mut [usize],
        timer: &mut usize,
        out: &mut Vec<Edge>,
    ) {
        disc[v] = *timer;
        low[v] = *timer;
        *timer += 1;
        for u in net.neighbors(v) {
            let e = Edge::new(v, u);
            if Some(e) == parent_edge {
                continue;
            }
            if disc[u] == usize::MAX {
                dfs(u, Some(e), net, disc, low, timer, out);
                low[v] = low[v].min(low[u]);
                if low[u] > disc[v] {
                    out.push(e);
                }
            } else {
                low[v] = low[v].min(disc[u]);
            }
        }
    }

    dfs(0, None, net, &mut disc, &mut low, &mut timer, &mut out);
    out.sort();
    out
}

pub fn is_bridgeless(net: &Network) -> bool {
    bridges(net).is_empty()
}

/// Two-color a set of edges over `num_nodes` labels; `None` when an odd cycle
/// exists.
pub fn bipartition(num_nodes: usize, edges: &[Edge]) -> Option<Vec<i8>> {
    let mut color = vec![0i8; num_nodes];
    for start in 0..num_nodes {
        if color[start] != 0 {
            continue;
        }
        if !edges.iter().any(|e| e.touches(start)) {
            continue;
        }
        color[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for e in edges.iter().filter(|e| e.touches(v)) {
                let u = e.other(v);
                if color[u] == 0 {
                    color[u] = -color[v];
                    queue.push_back(u);
                } else if color[u] == color[v] {
                    return None;
                }
            }
        }
    }
    Some(color)
}

pub fn is_bipartite(num_nodes: usize, edges: &[Edge]) -> bool {
    bipartition(num_nodes, edges).is_some()
}

/// All edge-maximal bipartite subgraphs, each returned as a sorted edge set.
///
/// Exhaustive subset search; errors with `ScaleLimit` beyond desk scale.
pub fn maximal_bipartite_subgraphs(net: &Network) -> Result<Vec<Vec<Edge>>> {
    let m = net.edges().len();
    if m > MAX_BIPARTITE_EDGES {
        return Err(Error::ScaleLimit(format!(
            "maximal-bipartite enumeration capped at {} edges, got {}",
            MAX_BIPARTITE_EDGES, m
        )));
    }
    let edges = net.edges();
    let num_nodes = net.num_nodes();
    let subset_edges = |mask: usize| -> Vec<Edge> {
        let mut v: Vec<Edge> = (0..m).filter(|b| mask >> b & 1 == 1).map(|b| edges[b]).collect();
        v.sort();
        v
    };
    let mut bipartite_masks: Vec<usize> = Vec::new();
    for mask in 1..(1usize << m) {
        if is_bipartite(num_nodes, &subset_edges(mask)) {
            bipartite_masks.push(mask);
        }
    }
    let mut out = Vec::new();
    'outer: for &mask in &bipartite_masks {
        for b in 0..m {
            if mask >> b & 1 == 0 {
                let bigger = mask | (1 << b);
                if is_bipartite(num_nodes, &subset_edges(bigger)) {
                    continue 'outer;
                }
            }
        }
        out.push(subset_edges(mask));
    }
    out.sort();
    Ok(out)
}

/// Strip pendant nodes other than the reference, repeatedly. Returns the
/// reduced network and the multiplier `2^stripped`.
pub fn leaf_reduce(net: &Network) -> (Network, u64) {
    let mut current = net.clone();
    let mut stripped = 0u32;
    while current.num_nodes() > 2 {
        let leaf = (1..current.num_nodes()).find(|&v| current.degree(v) == 1);
        match leaf {
            Some(v) => {
                current = current
                    .without_node(v)
                    .expect("removing a pendant node keeps the network valid");
                stripped += 1;
            }
            None => break,
        }
    }
    (current, 1u64 << stripped)
}

/// The node set of the unique cycle of a unicycle network, in traversal
/// order, plus the cycle's edges. Errors when the graph has no or several
/// cycles.
pub fn unique_cycle(net: &Network) -> Result<(Vec<usize>, Vec<Edge>)> {
    let cycle_rank = net.edges().len() + 1 - net.num_nodes();
    if cycle_rank != 1 {
        return Err(Error::NotUnicycle);
    }
    let bridge_set = bridges(net);
    let mut cycle_edges: Vec<Edge> = net
        .edges()
        .iter()
        .copied()
        .filter(|e| !bridge_set.contains(e))
        .collect();
    cycle_edges.sort();
    // Walk the cycle starting from its smallest node.
    let start = cycle_edges.iter().map(|e| e.i).min().ok_or(Error::NotUnicycle)?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut at = start;
    loop {
        let next = cycle_edges
            .iter()
            .filter(|e| e.touches(at))
            .map(|e| e.other(at))
            .filter(|&u| u != prev)
            .min()
            .ok_or(Error::NotUnicycle)?;
        if next == start {
            break;
        }
        order.push(next);
        prev = at;
        at = next;
    }
    Ok((order, cycle_edges))
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct FileEdge {
    i: usize,
    j: usize,
    k: serde_json::Value,
    #[serde(default)]
    delta: Option<f64>,
    #[serde(default)]
    g: Option<f64>,
    #[serde(default)]
    b: Option<f64>,
}

#[derive(Deserialize)]
struct FileNetwork {
    nodes: usize,
    edges: Vec<FileEdge>,
    frequencies: serde_json::Value,
    #[serde(default)]
    pf_power: Option<Vec<f64>>,
}

fn parse_coupling(v: &serde_json::Value, e: Edge) -> Result<Coupling> {
    match v {
        serde_json::Value::String(s) if s == "generic" => Ok(Coupling::Generic),
        serde_json::Value::String(s) => {
            let r: Ratio<i64> = s.parse().map_err(|_| {
                Error::MalformedInput(format!("edge {}: cannot parse rational coupling '{}'", e, s))
            })?;
            Ok(Coupling::Rational(r))
        }
        serde_json::Value::Number(x) => {
            let f = x.as_f64().unwrap_or(f64::NAN);
            if !f.is_finite() {
                return Err(Error::MalformedInput(format!(
                    "edge {}: coupling is not finite",
                    e
                )));
            }
            if f.fract() == 0.0 && f.abs() < 1e15 {
                Ok(Coupling::Rational(Ratio::from_integer(f as i64)))
            } else {
                Ok(Coupling::Complex(C64::new(f, 0.0)))
            }
        }
        serde_json::Value::Object(map) => {
            let re = map.get("re").and_then(|x| x.as_f64()).ok_or_else(|| {
                Error::MalformedInput(format!("edge {}: complex coupling needs 're'", e))
            })?;
            let im = map.get("im").and_then(|x| x.as_f64()).unwrap_or(0.0);
            Ok(Coupling::Complex(C64::new(re, im)))
        }
        other => Err(Error::MalformedInput(format!(
            "edge {}: unsupported coupling value {}",
            e, other
        ))),
    }
}

/// Parse the documented JSON network format.
pub fn parse_network(text: &str) -> Result<Network> {
    let file: FileNetwork = serde_json::from_str(text)
        .map_err(|e| Error::MalformedInput(format!("json: {}", e)))?;
    let mut edges = Vec::with_capacity(file.edges.len());
    let mut couplings = Vec::with_capacity(file.edges.len());
    let mut delays: Vec<Option<f64>> = Vec::with_capacity(file.edges.len());
    let mut adm: Vec<Option<(f64, f64)>> = Vec::with_capacity(file.edges.len());
    for fe in &file.edges {
        if fe.i == fe.j {
            return Err(Error::MalformedInput(format!("self-loop at node {}", fe.i)));
        }
        let e = Edge::new(fe.i, fe.j);
        couplings.push(parse_coupling(&fe.k, e)?);
        edges.push(e);
        delays.push(fe.delta);
        adm.push(match (fe.g, fe.b) {
            (Some(g), Some(b)) => Some((g, b)),
            (None, None) => None,
            _ => {
                return Err(Error::MalformedInput(format!(
                    "edge {}: power-flow data needs both 'g' and 'b'",
                    e
                )))
            }
        });
    }
    let frequencies = match &file.frequencies {
        serde_json::Value::String(s) if s == "generic" => Frequencies::Generic,
        serde_json::Value::String(s) if s == "homogeneous" => Frequencies::Homogeneous,
        serde_json::Value::Array(arr) => {
            let mut w = Vec::with_capacity(arr.len());
            for v in arr {
                w.push(v.as_f64().ok_or_else(|| {
                    Error::MalformedInput("frequencies must be numbers".into())
                })?);
            }
            Frequencies::Given(w)
        }
        other => {
            return Err(Error::MalformedInput(format!(
                "unsupported frequencies value {}",
                other
            )))
        }
    };
    let delays = if delays.iter().all(|d| d.is_none()) {
        None
    } else if delays.iter().all(|d| d.is_some()) {
        Some(delays.into_iter().map(|d| d.unwrap()).collect())
    } else {
        return Err(Error::MalformedInput(
            "delays must cover every edge or none".into(),
        ));
    };
    let pf = if adm.iter().all(|a| a.is_none()) && file.pf_power.is_none() {
        None
    } else if adm.iter().all(|a| a.is_some()) {
        let power = file.pf_power.ok_or_else(|| {
            Error::MalformedInput("power-flow mode needs 'pf_power' per node".into())
        })?;
        Some(PfData {
            admittances: adm.into_iter().map(|a| a.unwrap()).collect(),
            power,
        })
    } else {
        return Err(Error::MalformedInput(
            "power-flow data must cover every edge or none".into(),
        ));
    };
    Network::new(file.nodes, edges, couplings, frequencies, delays, pf)
}

// ---------------------------------------------------------------------------
// Construction helpers used across tests and the bundled network corpus
// ---------------------------------------------------------------------------

/// Cycle graph C_m on nodes 0..m with unit couplings and generic frequencies.
pub fn cycle_network(m: usize) -> Network {
    let edges: Vec<Edge> = (0..m).map(|i| Edge::new(i, (i + 1) % m)).collect();
    let couplings = vec![Coupling::Rational(Ratio::from_integer(1)); m];
    Network::new(m, edges, couplings, Frequencies::Generic, None, None).unwrap()
}

/// Path graph on `m` nodes (0–1–…–m−1) with unit couplings.
pub fn path_network(m: usize) -> Network {
    let edges: Vec<Edge> = (0..m - 1).map(|i| Edge::new(i, i + 1)).collect();
    let couplings = vec![Coupling::Rational(Ratio::from_integer(1)); m - 1];
    Network::new(m, edges, couplings, Frequencies::Generic, None, None).unwrap()
}

/// Complete graph on `m` nodes with unit couplings.
pub fn complete_network(m: usize) -> Network {
    let mut edges = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            edges.push(Edge::new(i, j));
        }
    }
    let couplings = vec![Coupling::Rational(Ratio::from_integer(1)); edges.len()];
    Network::new(m, edges, couplings, Frequencies::Generic, None, None).unwrap()
}

/// Replace all couplings, keeping everything else.
pub fn with_couplings(net: &Network, couplings: Vec<Coupling>) -> Result<Network> {
    Network::new(
        net.num_nodes(),
        net.edges().to_vec(),
        couplings,
        net.frequencies().clone(),
        net.delays().map(|d| d.to_vec()),
        net.pf().cloned(),
    )
}

/// Replace the frequencies, keeping everything else.
pub fn with_frequencies(net: &Network, frequencies: Frequencies) -> Result<Network> {
    Network::new(
        net.num_nodes(),
        net.edges().to_vec(),
        net.couplings().to_vec(),
        frequencies,
        net.delays().map(|d| d.to_vec()),
        net.pf().cloned(),
    )
}
