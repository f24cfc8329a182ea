//! Exact root-count logic: generic counts, exceptional-coupling detection
//! with certificates, balanced subnetworks, and refined counts for unicycle
//! and shared-edge families.
//!
//! Conditions on couplings are decided exactly whenever all couplings are
//! rational; otherwise complex arithmetic with a 1e-10 relative tolerance is
//! used and the report flags it.

use crate::error::{Error, Result};
use crate::network::{
    bridges as graph_bridges, is_bipartite, leaf_reduce as nw_leaf_reduce, unique_cycle, Coupling,
    Digraph, Edge, Network,
};
use crate::numeric::C64;
use crate::polytope::{
    adjacency_polytope, all_proper_faces, face_subdigraph, normalized_volume, Face,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Relative tolerance for coupling conditions when exact arithmetic is not
/// available (non-rational couplings).
pub const FLOAT_CONDITION_TOL: f64 = 1e-10;

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

// ---------------------------------------------------------------------------
// Coupling products, exact when possible
// ---------------------------------------------------------------------------

/// A coupling monomial value k^η, kept exact for rational inputs.
#[derive(Debug, Clone)]
pub enum KValue {
    Exact(BigRational),
    Float(C64),
}

impl KValue {
    fn as_c64(&self) -> C64 {
        match self {
            KValue::Exact(r) => {
                let num = big_to_f64(r.numer());
                let den = big_to_f64(r.denom());
                C64::new(num / den, 0.0)
            }
            KValue::Float(c) => *c,
        }
    }

    fn is_exact(&self) -> bool {
        matches!(self, KValue::Exact(_))
    }
}

fn big_to_f64(b: &BigInt) -> f64 {
    b.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

/// k^η over edge-indexed exponents (η_e ∈ {−1, 0, +1}).
pub fn coupling_power(net: &Network, eta_edges: &BTreeMap<usize, i64>) -> KValue {
    let all_rational = eta_edges
        .keys()
        .all(|&e| matches!(net.couplings()[e], Coupling::Rational(_)));
    if all_rational {
        let mut acc = BigRational::one();
        for (&e, &exp) in eta_edges {
            let k = net.couplings()[e].as_big_rational().unwrap();
            let mut p = BigRational::one();
            for _ in 0..exp.abs() {
                p *= k.clone();
            }
            if exp > 0 {
                acc *= p;
            } else if exp < 0 {
                acc /= p;
            }
        }
        KValue::Exact(acc)
    } else {
        let mut acc = C64::new(1.0, 0.0);
        for (&e, &exp) in eta_edges {
            let k = net.couplings()[e].as_c64().expect("concrete couplings");
            acc *= crate::numeric::powi(k, exp);
        }
        KValue::Float(acc)
    }
}

fn kvalue_equals_int(v: &KValue, target: i64) -> bool {
    match v {
        KValue::Exact(r) => *r == BigRational::from(BigInt::from(target)),
        KValue::Float(c) => {
            let t = C64::new(target as f64, 0.0);
            (c - t).norm() < FLOAT_CONDITION_TOL * c.norm().max(1.0)
        }
    }
}

/// Decide Σ sign_i · v_i = 1; returns (satisfied, used exact arithmetic).
fn kvalue_sum_equals_one(vals: &[(i64, KValue)]) -> (bool, bool) {
    if vals.iter().all(|(_, v)| v.is_exact()) {
        let mut acc = BigRational::from(BigInt::from(0));
        for (sign, v) in vals {
            let KValue::Exact(r) = v else { unreachable!() };
            acc += BigRational::from(BigInt::from(*sign)) * r.clone();
        }
        (acc == BigRational::one(), true)
    } else {
        let mut acc = C64::new(0.0, 0.0);
        let mut scale: f64 = 1.0;
        for (sign, v) in vals {
            let c = v.as_c64();
            scale = scale.max(c.norm());
            acc += C64::new(*sign as f64, 0.0) * c;
        }
        (
            (acc - C64::new(1.0, 0.0)).norm() < FLOAT_CONDITION_TOL * scale,
            false,
        )
    }
}

// ---------------------------------------------------------------------------
// Balanced subnetworks
// ---------------------------------------------------------------------------

/// A maximal balanced acyclic orientation of a unicycle network: the cycle
/// split evenly between the two traversal directions with coupling products
/// in ratio (−1)^{m/2}, extended over all off-cycle edges.
#[derive(Debug, Clone)]
pub struct BalancedSubnetwork {
    pub orientation: Digraph,
    pub kappa_plus: C64,
    pub kappa_minus: C64,
    pub is_maximal: bool,
    /// Edge-indexed orientation signs on the cycle: +1 for the traversal
    /// direction, −1 against it.
    pub cycle_signs: BTreeMap<usize, i64>,
}

/// Enumerate the maximal balanced subnetworks of a unicycle network.
/// Odd cycles admit none; the list is empty then.
pub fn balanced_subnetworks(net: &Network) -> Result<Vec<BalancedSubnetwork>> {
    let (order, cycle_edges) = unique_cycle(net)?;
    let m = order.len();
    if m % 2 != 0 {
        return Ok(Vec::new());
    }
    // traversal arcs: order[t] -> order[t+1]
    let arcs_fwd: Vec<(usize, usize)> = (0..m).map(|t| (order[t], order[(t + 1) % m])).collect();
    let edge_idx: Vec<usize> = arcs_fwd
        .iter()
        .map(|&(a, b)| net.edge_index(Edge::new(a, b)).expect("cycle edge"))
        .collect();
    // orient every off-cycle edge toward the cycle (child -> parent in a BFS
    // rooted at the cycle); always acyclic, always maximal
    let mut off_arcs = Vec::new();
    {
        let mut seen = vec![false; net.num_nodes()];
        let mut queue: VecDeque<usize> = order.iter().copied().collect();
        for &v in &order {
            seen[v] = true;
        }
        while let Some(v) = queue.pop_front() {
            for u in net.neighbors(v) {
                if !seen[u] && !cycle_edges.contains(&Edge::new(u, v)) {
                    seen[u] = true;
                    off_arcs.push((u, v));
                    queue.push_back(u);
                }
            }
        }
    }
    let mut out = Vec::new();
    for mask in 0..(1u32 << m) {
        let plus_count = mask.count_ones() as usize;
        if plus_count != m / 2 {
            continue;
        }
        let mut signs = BTreeMap::new();
        let mut plus_edges = Vec::new();
        let mut minus_edges = Vec::new();
        for t in 0..m {
            let s = if mask >> t & 1 == 1 { 1i64 } else { -1 };
            signs.insert(edge_idx[t], s);
            if s == 1 {
                plus_edges.push(edge_idx[t]);
            } else {
                minus_edges.push(edge_idx[t]);
            }
        }
        // κ⁺/κ⁻ = (−1)^{m/2} ⟺ k^η = (−1)^{m/2} with η the ± pattern
        let ratio = coupling_power(net, &signs);
        let target = if (m / 2) % 2 == 0 { 1 } else { -1 };
        if !kvalue_equals_int(&ratio, target) {
            continue;
        }
        let mut arcs: Vec<(usize, usize)> = (0..m)
            .map(|t| {
                if mask >> t & 1 == 1 {
                    arcs_fwd[t]
                } else {
                    (arcs_fwd[t].1, arcs_fwd[t].0)
                }
            })
            .collect();
        arcs.extend(off_arcs.iter().copied());
        let orientation = Digraph::new(net.num_nodes(), arcs);
        debug_assert!(orientation.is_acyclic());
        let kappa = |edges: &[usize]| -> C64 {
            edges
                .iter()
                .map(|&e| net.couplings()[e].as_c64().expect("concrete couplings"))
                .product()
        };
        out.push(BalancedSubnetwork {
            orientation,
            kappa_plus: kappa(&plus_edges),
            kappa_minus: kappa(&minus_edges),
            is_maximal: true,
            cycle_signs: signs,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Exceptional faces
// ---------------------------------------------------------------------------

/// Closed-form (or numeric) description of why a facial system admits a
/// torus zero.
#[derive(Debug, Clone)]
pub enum Condition {
    /// The face subgraph has a bridge; no coupling choice is exceptional.
    BridgeImpossible,
    /// Single-cycle face: k^η = (−1)^{m/2}, edge-indexed η.
    Binomial {
        eta_edges: BTreeMap<usize, i64>,
        target: i64,
    },
    /// d cycles sharing one edge: Σ_i sign_i · k^{η_i} = 1.
    SharedEdgeSum {
        etas: Vec<BTreeMap<usize, i64>>,
        signs: Vec<i64>,
    },
    /// Outside the closed-form families: a numerically found kernel witness.
    Numeric { witness: Vec<C64>, residual: f64 },
}

#[derive(Debug, Clone)]
pub struct ExceptionalCertificate {
    /// The face whose facial system the condition describes. Conditions
    /// enumerated from sign tuples carry a face only when one realizes the
    /// tuple: cycle-vector balance is necessary, not sufficient, for a
    /// tuple to be facial.
    pub face: Option<Face>,
    pub condition: Condition,
    pub satisfied: bool,
    /// Whether the decision used exact rational arithmetic.
    pub exact: bool,
}

/// Canonical key for deduplicating equivalent conditions coming from
/// antipodal faces. A binomial condition is invariant under η ↦ −η; a
/// shared-edge sum is not, so the two orientations stay separate.
fn condition_key(c: &Condition) -> Option<String> {
    match c {
        Condition::Binomial { eta_edges, target } => {
            let mut eta: Vec<(usize, i64)> = eta_edges.iter().map(|(&e, &s)| (e, s)).collect();
            if let Some(&(_, first)) = eta.first() {
                if first < 0 {
                    for t in &mut eta {
                        t.1 = -t.1;
                    }
                }
            }
            Some(format!("B{:?}{}", eta, target))
        }
        Condition::SharedEdgeSum { etas, signs } => {
            let mut parts: Vec<String> = etas
                .iter()
                .zip(signs)
                .map(|(m, s)| format!("{:?}*{}", m.iter().collect::<Vec<_>>(), s))
                .collect();
            parts.sort();
            Some(format!("S{}", parts.join("|")))
        }
        _ => None,
    }
}

struct ComponentAnalysis {
    condition: Condition,
    satisfied: bool,
    exact: bool,
}

/// Weakly connected components of a face subdigraph, as arc index lists.
fn components_of(d: &Digraph) -> Vec<Vec<usize>> {
    let mut comp_of_node: Vec<Option<usize>> = vec![None; d.num_nodes];
    let mut comp_count = 0;
    for start in 0..d.num_nodes {
        if comp_of_node[start].is_some() || !d.arcs.iter().any(|&(a, b)| a == start || b == start)
        {
            continue;
        }
        let id = comp_count;
        comp_count += 1;
        let mut queue = VecDeque::from([start]);
        comp_of_node[start] = Some(id);
        while let Some(v) = queue.pop_front() {
            for &(a, b) in &d.arcs {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && comp_of_node[y].is_none() {
                        comp_of_node[y] = Some(id);
                        queue.push_back(y);
                    }
                }
            }
        }
    }
    let mut out = vec![Vec::new(); comp_count];
    for (idx, &(a, _)) in d.arcs.iter().enumerate() {
        out[comp_of_node[a].expect("arc endpoint is in a component")].push(idx);
    }
    out
}

fn component_edges(d: &Digraph, arc_indices: &[usize]) -> Vec<Edge> {
    let mut v: Vec<Edge> = arc_indices
        .iter()
        .map(|&c| {
            let (a, b) = d.arcs[c];
            Edge::new(a, b)
        })
        .collect();
    v.sort();
    v
}

fn has_bridge(num_nodes: usize, edges: &[Edge]) -> bool {
    // an edge lies on no cycle iff its removal disconnects its endpoints
    for (idx, e) in edges.iter().enumerate() {
        let rest: Vec<Edge> = edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, &x)| x)
            .collect();
        if !connected_between(num_nodes, &rest, e.i, e.j) {
            return true;
        }
    }
    false
}

fn connected_between(num_nodes: usize, edges: &[Edge], from: usize, to: usize) -> bool {
    let mut seen = vec![false; num_nodes];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            return true;
        }
        for e in edges.iter().filter(|e| e.touches(v)) {
            let u = e.other(v);
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    false
}

/// Walk a single cycle (every covered node has degree 2) and return the node
/// order, or None when the edge set is not one cycle.
fn walk_cycle(edges: &[Edge]) -> Option<Vec<usize>> {
    let mut deg: BTreeMap<usize, usize> = BTreeMap::new();
    for e in edges {
        *deg.entry(e.i).or_insert(0) += 1;
        *deg.entry(e.j).or_insert(0) += 1;
    }
    if deg.values().any(|&d| d != 2) || deg.len() != edges.len() {
        return None;
    }
    let start = *deg.keys().min()?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut at = start;
    loop {
        let next = edges
            .iter()
            .filter(|e| e.touches(at))
            .map(|e| e.other(at))
            .find(|&u| u != prev)?;
        if next == start {
            break;
        }
        order.push(next);
        prev = at;
        at = next;
    }
    if order.len() == edges.len() {
        Some(order)
    } else {
        None
    }
}

/// Edge-indexed ±1 orientation signs of a cycle walk relative to a face's
/// arc set: +1 when the walk direction (u → v) appears as the arc (u, v).
fn walk_signs(
    net: &Network,
    face_arcs: &BTreeSet<(usize, usize)>,
    order: &[usize],
) -> BTreeMap<usize, i64> {
    let m = order.len();
    let mut signs = BTreeMap::new();
    for t in 0..m {
        let (u, v) = (order[t], order[(t + 1) % m]);
        let e = net.edge_index(Edge::new(u, v)).expect("cycle edge");
        let s = if face_arcs.contains(&(u, v)) {
            1
        } else {
            debug_assert!(face_arcs.contains(&(v, u)));
            -1
        };
        signs.insert(e, s);
    }
    signs
}

/// Decompose a bridgeless edge set into d ≥ 2 cycles sharing exactly one
/// edge, if it has that shape. Returns the shared edge and the node order of
/// each cycle, every order starting with the shared edge traversed u → v.
fn shared_edge_decomposition(edges: &[Edge]) -> Option<(Edge, Vec<Vec<usize>>)> {
    let nodes: BTreeSet<usize> = edges.iter().flat_map(|e| [e.i, e.j]).collect();
    let cycle_rank = (edges.len() + 1).checked_sub(nodes.len())?;
    if cycle_rank < 2 {
        return None;
    }
    'candidates: for &shared in edges {
        let (u, v) = (shared.i, shared.j);
        let rest: Vec<Edge> = edges.iter().copied().filter(|&e| e != shared).collect();
        let deg = |x: usize| rest.iter().filter(|e| e.touches(x)).count();
        for &w in &nodes {
            let expected = if w == u || w == v { cycle_rank } else { 2 };
            if deg(w) != expected {
                continue 'candidates;
            }
        }
        // trace the internally disjoint u–v paths
        let mut used: BTreeSet<Edge> = BTreeSet::new();
        let mut orders = Vec::new();
        let mut ok = true;
        for e in rest.iter().filter(|e| e.touches(u)) {
            if used.contains(e) {
                continue;
            }
            let mut path = vec![u];
            let mut prev = u;
            let mut at = e.other(u);
            used.insert(*e);
            while at != v {
                path.push(at);
                let next = rest
                    .iter()
                    .filter(|x| x.touches(at) && !used.contains(*x))
                    .map(|x| x.other(at))
                    .find(|&y| y != prev);
                let Some(next) = next else {
                    ok = false;
                    break;
                };
                used.insert(Edge::new(at, next));
                prev = at;
                at = next;
            }
            if !ok {
                break;
            }
            path.push(v);
            // cycle node order starting with the shared edge u → v, then the
            // path walked backwards from v to u's neighbor
            let mut order = vec![u, v];
            order.extend(path[1..path.len() - 1].iter().rev().copied());
            orders.push(order);
        }
        if ok && used.len() == rest.len() && orders.len() == cycle_rank {
            return Some((shared, orders));
        }
    }
    None
}

fn analyze_component(
    net: &Network,
    face_arcs: &BTreeSet<(usize, usize)>,
    edges: &[Edge],
) -> Result<ComponentAnalysis> {
    if has_bridge(net.num_nodes(), edges) {
        return Ok(ComponentAnalysis {
            condition: Condition::BridgeImpossible,
            satisfied: false,
            exact: true,
        });
    }
    if let Some(order) = walk_cycle(edges) {
        let m = order.len();
        debug_assert!(m % 2 == 0, "face subgraphs are bipartite");
        let eta_edges = walk_signs(net, face_arcs, &order);
        let target = if (m / 2) % 2 == 0 { 1 } else { -1 };
        let value = coupling_power(net, &eta_edges);
        let exact = value.is_exact();
        let satisfied = kvalue_equals_int(&value, target);
        return Ok(ComponentAnalysis {
            condition: Condition::Binomial { eta_edges, target },
            satisfied,
            exact,
        });
    }
    if let Some((shared, cycle_orders)) = shared_edge_decomposition(edges) {
        // The sum condition is stated in the normalization where the shared
        // edge carries exponent −1 in every cycle vector (the kernel variety
        // k^{η_i} = v^{η_i} is sign-invariant, the sum form is not, and
        // antipodal faces cut out the same exceptional set).
        let shared_idx = net.edge_index(shared).expect("shared edge");
        let mut etas = Vec::new();
        let mut signs = Vec::new();
        let mut vals = Vec::new();
        for order in &cycle_orders {
            let m = order.len();
            debug_assert!(m % 2 == 0);
            let mut eta = walk_signs(net, face_arcs, order);
            if eta[&shared_idx] > 0 {
                for v in eta.values_mut() {
                    *v = -*v;
                }
            }
            let sign = if (m / 2) % 2 == 0 { 1i64 } else { -1 };
            vals.push((sign, coupling_power(net, &eta)));
            etas.push(eta);
            signs.push(sign);
        }
        let (satisfied, exact) = kvalue_sum_equals_one(&vals);
        return Ok(ComponentAnalysis {
            condition: Condition::SharedEdgeSum { etas, signs },
            satisfied,
            exact,
        });
    }
    numeric_fallback(net, face_arcs, edges)
}

/// Multistart Newton on the kernel coordinates: solve k^{η_i} = v(λ)^{η_i}
/// with v(λ) = Σ λ_j η_j ranging over the kernel of the component's
/// incidence matrix. A solution with all v-entries away from zero certifies
/// a torus zero of the facial system; the witness point is rebuilt through a
/// spanning tree and checked against the cycle form.
fn numeric_fallback(
    net: &Network,
    face_arcs: &BTreeSet<(usize, usize)>,
    edges: &[Edge],
) -> Result<ComponentAnalysis> {
    let arcs: Vec<(usize, usize)> = edges
        .iter()
        .map(|e| {
            if face_arcs.contains(&(e.i, e.j)) {
                (e.i, e.j)
            } else {
                (e.j, e.i)
            }
        })
        .collect();
    let nodes: Vec<usize> = {
        let s: BTreeSet<usize> = edges.iter().flat_map(|e| [e.i, e.j]).collect();
        s.into_iter().collect()
    };
    // BFS spanning tree of the component
    let mut parent: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut tree_arcs: BTreeSet<usize> = BTreeSet::new();
    let mut seen = BTreeSet::from([nodes[0]]);
    let mut queue = VecDeque::from([nodes[0]]);
    while let Some(v) = queue.pop_front() {
        for (ai, &(a, b)) in arcs.iter().enumerate() {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen.contains(&y) {
                    seen.insert(y);
                    parent.insert(y, (v, ai));
                    tree_arcs.insert(ai);
                    queue.push_back(y);
                }
            }
        }
    }
    let d = arcs.len() - tree_arcs.len();
    let path_to_root = |mut x: usize| -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        while let Some(&(p, arc)) = parent.get(&x) {
            let (from, _) = arcs[arc];
            out.push((arc, if from == x { 1 } else { -1 }));
            x = p;
        }
        out
    };
    let mut etas: Vec<Vec<i64>> = Vec::new();
    for (ai, &(a, b)) in arcs.iter().enumerate() {
        if tree_arcs.contains(&ai) {
            continue;
        }
        let mut eta = vec![0i64; arcs.len()];
        eta[ai] = 1;
        for (arc, s) in path_to_root(b) {
            eta[arc] += s;
        }
        for (arc, s) in path_to_root(a) {
            eta[arc] -= s;
        }
        etas.push(eta);
    }
    debug_assert_eq!(etas.len(), d);
    let eta_as_edge_map = |eta: &[i64]| -> BTreeMap<usize, i64> {
        let mut m = BTreeMap::new();
        for (ai, &s) in eta.iter().enumerate() {
            if s != 0 {
                let (a, b) = arcs[ai];
                m.insert(net.edge_index(Edge::new(a, b)).unwrap(), s);
            }
        }
        m
    };
    let targets: Vec<C64> = etas
        .iter()
        .map(|eta| coupling_power(net, &eta_as_edge_map(eta)).as_c64())
        .collect();
    let v_of = |lambda: &[C64]| -> Vec<C64> {
        (0..arcs.len())
            .map(|ai| {
                (0..d)
                    .map(|j| C64::new(etas[j][ai] as f64, 0.0) * lambda[j])
                    .sum()
            })
            .collect()
    };
    // The kernel monomials v ↦ v^{η_i} are invariant under global scaling
    // (every η_i is balanced), so gauge λ_1 = 1, run Newton on the first
    // d − 1 equations, and let the last equation decide satisfiability.
    let eval_g = |lambda: &[C64], v: &[C64], i: usize| -> C64 {
        let mut acc = C64::new(1.0, 0.0);
        for (ai, &s) in etas[i].iter().enumerate() {
            if s != 0 {
                acc *= crate::numeric::powi(v[ai], s);
            }
        }
        let _ = lambda;
        acc - targets[i]
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0xFACE);
    for _ in 0..48 {
        let mut lambda: Vec<C64> = vec![C64::new(1.0, 0.0)];
        lambda.extend(
            (1..d).map(|_| C64::from_polar(rng.gen_range(0.3..2.0), rng.gen_range(0.0..6.28))),
        );
        let unknowns = d - 1;
        let mut solved = unknowns == 0;
        for _ in 0..60 {
            if unknowns == 0 {
                break;
            }
            let v = v_of(&lambda);
            if v.iter().any(|c| c.norm() < 1e-9) {
                break;
            }
            let g: Vec<C64> = (0..unknowns).map(|i| eval_g(&lambda, &v, i)).collect();
            if crate::numeric::inf_norm(&g) < 1e-11 {
                solved = true;
                break;
            }
            let jac: Vec<Vec<C64>> = (0..unknowns)
                .map(|i| {
                    let gi = g[i] + targets[i];
                    (1..d)
                        .map(|l| {
                            let mut acc = C64::new(0.0, 0.0);
                            for (ai, &s) in etas[i].iter().enumerate() {
                                if s != 0 && etas[l][ai] != 0 {
                                    acc += C64::new((s * etas[l][ai]) as f64, 0.0) / v[ai];
                                }
                            }
                            gi * acc
                        })
                        .collect()
                })
                .collect();
            match crate::numeric::ComplexLu::new(&jac).solve(&g) {
                Some(step) => {
                    for (li, si) in lambda[1..].iter_mut().zip(&step) {
                        *li -= si;
                    }
                }
                None => break,
            }
        }
        if !solved {
            continue;
        }
        let v = v_of(&lambda);
        if v.iter().any(|c| c.norm() <= 1e-8) {
            continue;
        }
        // all d equations must hold at the gauge-fixed solution
        let full_res = (0..d)
            .map(|i| eval_g(&lambda, &v, i).norm())
            .fold(0.0, f64::max);
        if full_res > 1e-9 {
            continue;
        }
        // rebuild a witness x through the spanning tree: along a tree arc,
        // x_from / x_to = v_arc / a_arc
        let two_i = C64::new(0.0, 2.0);
        let mut val: BTreeMap<usize, C64> = BTreeMap::new();
        val.insert(nodes[0], C64::new(1.0, 0.0));
        let mut frontier: Vec<usize> = vec![nodes[0]];
        while let Some(p) = frontier.pop() {
            for (&child, &(par, arc)) in &parent {
                if par == p && !val.contains_key(&child) {
                    let (from, _) = arcs[arc];
                    let e = net.edge_index(Edge::new(arcs[arc].0, arcs[arc].1)).unwrap();
                    let a = net.couplings()[e].as_c64().unwrap() / two_i;
                    let ratio = v[arc] / a;
                    let xv = if from == child {
                        val[&p] * ratio
                    } else {
                        val[&p] / ratio
                    };
                    val.insert(child, xv);
                    frontier.push(child);
                }
            }
        }
        let mut x = vec![C64::new(1.0, 0.0); net.n()];
        for (&node, &xv) in &val {
            if node != 0 {
                x[node - 1] = xv;
            }
        }
        if x.iter().any(|c| c.norm() < 1e-10 || c.norm() > 1e10) {
            continue;
        }
        let cf = crate::algsys::CycleForm {
            q: crate::network::reduced_incidence(&Digraph::new(net.num_nodes(), arcs.clone())),
            a: arcs
                .iter()
                .map(|&(i, j)| {
                    net.couplings()[net.edge_index(Edge::new(i, j)).unwrap()]
                        .as_c64()
                        .unwrap()
                        / two_i
                })
                .collect(),
            arcs: arcs.clone(),
        };
        let residual = crate::numeric::inf_norm(&cf.eval(&x)?);
        if residual < 1e-8 {
            return Ok(ComponentAnalysis {
                condition: Condition::Numeric {
                    witness: x,
                    residual,
                },
                satisfied: true,
                exact: false,
            });
        }
    }
    Ok(ComponentAnalysis {
        condition: Condition::Numeric {
            witness: Vec::new(),
            residual: f64::INFINITY,
        },
        satisfied: false,
        exact: false,
    })
}

/// Analyze every proper face and emit one certificate per satisfied coupling
/// condition (equivalent conditions from antipodal faces deduplicated).
pub fn exceptional_faces(net: &Network) -> Result<Vec<ExceptionalCertificate>> {
    let cfg = adjacency_polytope(net);
    let faces = all_proper_faces(&cfg)?;
    let mut seen_conditions: BTreeSet<String> = BTreeSet::new();
    let mut out = Vec::new();
    for face in faces {
        let d = face_subdigraph(&cfg, &face);
        let face_arcs: BTreeSet<(usize, usize)> = d.arcs.iter().copied().collect();
        let comps = components_of(&d);
        let mut all_satisfied = true;
        let mut analyses = Vec::new();
        for comp in &comps {
            let edges = component_edges(&d, comp);
            let analysis = analyze_component(net, &face_arcs, &edges)?;
            if matches!(analysis.condition, Condition::BridgeImpossible) || !analysis.satisfied {
                all_satisfied = false;
                break;
            }
            analyses.push(analysis);
        }
        if !all_satisfied {
            continue;
        }
        for analysis in analyses {
            if let Some(key) = condition_key(&analysis.condition) {
                if !seen_conditions.insert(key) {
                    continue;
                }
            }
            out.push(ExceptionalCertificate {
                face: Some(face.clone()),
                condition: analysis.condition,
                satisfied: true,
                exact: analysis.exact,
            });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Counts
// ---------------------------------------------------------------------------

/// The generic torus root count: the normalized volume of the adjacency
/// polytope.
pub fn generic_root_count(net: &Network) -> Result<u64> {
    normalized_volume(net)
}

#[derive(Debug, Clone)]
pub struct CountReport {
    pub generic_bound: u64,
    pub refined_count: Option<u64>,
    pub beta: Option<u64>,
    pub strata: Vec<ExceptionalCertificate>,
    pub solver_count: Option<u64>,
    pub exact_arithmetic: bool,
}

/// Refined count for unicycle networks: 2^ℓ (m·C(m−1, m/2−1) − β) for even
/// cycles, 2^ℓ · m·C(m−1, (m−1)/2) for odd ones, ℓ the off-cycle node count.
pub fn unicycle_root_count(net: &Network) -> Result<CountReport> {
    let (order, _) = unique_cycle(net)?;
    let m = order.len() as u64;
    let ell = (net.num_nodes() - order.len()) as u64;
    let generic_bound = generic_root_count(net)?;
    let (refined, beta) = if m % 2 == 0 {
        let subs = balanced_subnetworks(net)?;
        let beta = subs.len() as u64;
        let count = (1u64 << ell) * (m * binomial(m - 1, m / 2 - 1) - beta);
        (count, Some(beta))
    } else {
        let count = (1u64 << ell) * m * binomial(m - 1, (m - 1) / 2);
        (count, None)
    };
    let strata = exceptional_faces(net)?;
    let exact_arithmetic = strata.iter().all(|c| c.exact)
        && net
            .couplings()
            .iter()
            .all(|k| matches!(k, Coupling::Rational(_)));
    Ok(CountReport {
        generic_bound,
        refined_count: Some(refined),
        beta,
        strata,
        solver_count: None,
        exact_arithmetic,
    })
}

/// All shared-edge coupling conditions of a book-of-even-cycles network,
/// each with its satisfaction status.
pub fn shared_edge_strata(net: &Network) -> Result<Vec<ExceptionalCertificate>> {
    let edges: Vec<Edge> = net.edges().to_vec();
    if !is_bipartite(net.num_nodes(), &edges) {
        return Err(Error::WrongTopology("graph must be bipartite".into()));
    }
    if !graph_bridges(net).is_empty() {
        return Err(Error::WrongTopology("graph must be bridgeless".into()));
    }
    let cycle_rank = edges.len() + 1 - net.num_nodes();
    if cycle_rank == 1 {
        // a single cycle degenerates to the plain binomial analysis
        return exceptional_faces(net);
    }
    let (shared, cycle_orders) = shared_edge_decomposition(&edges)
        .ok_or_else(|| Error::WrongTopology("cycles do not share exactly one edge".into()))?;
    let shared_idx = net.edge_index(shared).unwrap();
    let d = cycle_orders.len();
    // balanced ±1 vectors per cycle, edge-indexed
    // per cycle: every balanced ±1 vector, plus the oriented arcs the walk
    // convention assigns to it (+1 = walk direction order[t] -> order[t+1])
    let mut per_cycle: Vec<Vec<(BTreeMap<usize, i64>, Vec<(usize, usize)>)>> = Vec::new();
    for order in &cycle_orders {
        let m = order.len();
        if m % 2 != 0 {
            return Err(Error::WrongTopology("cycles must be even".into()));
        }
        let idxs: Vec<usize> = (0..m)
            .map(|t| net.edge_index(Edge::new(order[t], order[(t + 1) % m])).unwrap())
            .collect();
        let mut vecs = Vec::new();
        for mask in 0..(1u32 << m) {
            if mask.count_ones() as usize != m / 2 {
                continue;
            }
            // shared-minus normalization: the walk starts with the shared
            // edge, so bit 0 must be clear
            if mask & 1 == 1 {
                continue;
            }
            let mut eta = BTreeMap::new();
            let mut arcs = Vec::new();
            for t in 0..m {
                let (u, v) = (order[t], order[(t + 1) % m]);
                if mask >> t & 1 == 1 {
                    eta.insert(idxs[t], 1i64);
                    arcs.push((u, v));
                } else {
                    eta.insert(idxs[t], -1i64);
                    arcs.push((v, u));
                }
            }
            vecs.push((eta, arcs));
        }
        per_cycle.push(vecs);
    }
    let cfg = adjacency_polytope(net);
    let faces = all_proper_faces(&cfg)?;
    let mut out = Vec::new();
    for subset_mask in 1u32..(1 << d) {
        let members: Vec<usize> = (0..d).filter(|&i| subset_mask >> i & 1 == 1).collect();
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in &members {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..per_cycle[0].len()).map(move |vi| {
                        let mut next = t.clone();
                        next.push(vi);
                        next
                    })
                })
                .collect();
        }
        for chosen in tuples {
            let etas: Vec<BTreeMap<usize, i64>> = members
                .iter()
                .zip(&chosen)
                .map(|(&ci, &vi)| per_cycle[ci][vi].0.clone())
                .collect();
            let arc_lists: Vec<&Vec<(usize, usize)>> = members
                .iter()
                .zip(&chosen)
                .map(|(&ci, &vi)| &per_cycle[ci][vi].1)
                .collect();
            debug_assert!(etas.iter().all(|e| e[&shared_idx] == -1));
            let signs: Vec<i64> = members
                .iter()
                .map(|&ci| {
                    let m = cycle_orders[ci].len();
                    if (m / 2) % 2 == 0 {
                        1
                    } else {
                        -1
                    }
                })
                .collect();
            let vals: Vec<(i64, KValue)> = etas
                .iter()
                .zip(&signs)
                .map(|(eta, &s)| (s, coupling_power(net, eta)))
                .collect();
            let (satisfied, exact) = kvalue_sum_equals_one(&vals);
            // locate the face carrying exactly these oriented cycles
            let mut want_arcs: BTreeSet<(usize, usize)> = BTreeSet::new();
            for arcs in &arc_lists {
                want_arcs.extend(arcs.iter().copied());
            }
            let face = faces.iter().find(|f| {
                let got: BTreeSet<(usize, usize)> = f.points.iter().map(|p| p.arc).collect();
                got == want_arcs
            });
            let condition = if etas.len() == 1 {
                Condition::Binomial {
                    eta_edges: etas[0].clone(),
                    target: signs[0],
                }
            } else {
                Condition::SharedEdgeSum {
                    etas: etas.clone(),
                    signs: signs.clone(),
                }
            };
            out.push(ExceptionalCertificate {
                face: face.cloned(),
                condition,
                satisfied,
                exact,
            });
        }
    }
    Ok(out)
}

/// Strip pendant nodes (≠ reference) and report the count multiplier 2^#strips.
pub fn leaf_reduce(net: &Network) -> (Network, u64) {
    nw_leaf_reduce(net)
}
