//! The adjacency polytope of a network, its regular unimodular
//! triangulations, normalized volume, and facet/face machinery.
//!
//! Everything here is exact. Lifting values are rationals with denominator
//! 10^6, carried as scaled integers, so hull predicates reduce to integer
//! sign tests.

use crate::error::{Error, Result};
use crate::network::{
    maximal_bipartite_subgraphs, reduced_incidence, Digraph, Edge, Network,
};
use crate::numeric::{int_det, int_rank, unimodular_int_solve};
use itertools::Itertools;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use std::collections::{BTreeMap, BTreeSet};

/// Denominator of all lifting perturbations.
pub const LIFT_DENOM: i64 = 1_000_000;
/// Perturbations are nonzero integers in [-MAX_DELTA, MAX_DELTA] over
/// LIFT_DENOM, so |delta| <= 1e-3.
pub const MAX_DELTA: i64 = 1000;
/// Retry budget when a sampled lifting turns out degenerate.
pub const LIFT_RETRIES: u32 = 16;
/// Exact hull computations are capped at this ambient dimension.
pub const MAX_HULL_DIM: usize = 8;

/// Tag tying a configuration point back to the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointTag {
    Zero,
    /// The point `e_i - e_j` for the arc `(i, j)`.
    Arc(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigPoint {
    pub coords: Vec<i64>,
    pub tag: PointTag,
}

/// The point configuration `{0} ∪ {±(e_i - e_j)}` over the edges of a
/// network. Point 0 is always index 0; each edge contributes its two
/// antipodal points in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfiguration {
    pub dim: usize,
    pub points: Vec<ConfigPoint>,
    /// Edge list of the originating network, in network order.
    pub edges: Vec<Edge>,
}

impl PointConfiguration {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the point `e_i - e_j`, if the arc exists.
    pub fn arc_index(&self, i: usize, j: usize) -> Option<usize> {
        self.points
            .iter()
            .position(|p| p.tag == PointTag::Arc(i, j))
    }

    /// Edge index carrying a given point.
    pub fn edge_of_point(&self, idx: usize) -> Option<usize> {
        match self.points[idx].tag {
            PointTag::Zero => None,
            PointTag::Arc(i, j) => self.edges.iter().position(|e| *e == Edge::new(i, j)),
        }
    }

    /// The antipode of a nonzero point.
    pub fn antipode(&self, idx: usize) -> Option<usize> {
        match self.points[idx].tag {
            PointTag::Zero => None,
            PointTag::Arc(i, j) => self.arc_index(j, i),
        }
    }
}

/// `adjacency_polytope`: the configuration {±(e_i−e_j)} ∪ {0} with arc tags.
pub fn adjacency_polytope(net: &Network) -> PointConfiguration {
    let n = net.n();
    let coords_of = |i: usize, j: usize| -> Vec<i64> {
        let mut v = vec![0i64; n];
        if i != 0 {
            v[i - 1] += 1;
        }
        if j != 0 {
            v[j - 1] -= 1;
        }
        v
    };
    let mut points = vec![ConfigPoint {
        coords: vec![0; n],
        tag: PointTag::Zero,
    }];
    for e in net.edges() {
        points.push(ConfigPoint {
            coords: coords_of(e.i, e.j),
            tag: PointTag::Arc(e.i, e.j),
        });
        points.push(ConfigPoint {
            coords: coords_of(e.j, e.i),
            tag: PointTag::Arc(e.j, e.i),
        });
    }
    PointConfiguration {
        dim: n,
        points,
        edges: net.edges().to_vec(),
    }
}

/// Symmetric lifting: ω(0) = 0 and ω(±(e_i−e_j)) = 1 + δ_e with distinct
/// nonzero δ_e of denominator 10^6, |δ_e| ≤ 10^-3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftingFunction {
    /// Scaled numerators: δ_e = delta_scaled[e] / 10^6, one per edge.
    pub delta_scaled: Vec<i64>,
    /// Seed the perturbations were drawn from.
    pub seed: u64,
    /// Which resampling attempt produced this lifting.
    pub attempt: u32,
}

impl LiftingFunction {
    /// ω(p) scaled by 10^6.
    pub fn omega_scaled(&self, cfg: &PointConfiguration, point_idx: usize) -> i64 {
        match cfg.points[point_idx].tag {
            PointTag::Zero => 0,
            PointTag::Arc(..) => {
                let e = cfg.edge_of_point(point_idx).expect("tagged point has an edge");
                LIFT_DENOM + self.delta_scaled[e]
            }
        }
    }
}

pub fn symmetric_lifting(cfg: &PointConfiguration, seed: u64) -> LiftingFunction {
    sample_lifting(cfg, seed, 0)
}

fn sample_lifting(cfg: &PointConfiguration, seed: u64, attempt: u32) -> LiftingFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e3779b97f4a7c15u64.wrapping_mul(attempt as u64 + 1)));
    let mut taken = BTreeSet::new();
    let mut delta_scaled = Vec::with_capacity(cfg.edges.len());
    for _ in 0..cfg.edges.len() {
        loop {
            let d = rng.gen_range(-MAX_DELTA..=MAX_DELTA);
            if d != 0 && taken.insert(d) {
                delta_scaled.push(d);
                break;
            }
        }
    }
    LiftingFunction {
        delta_scaled,
        seed,
        attempt,
    }
}

/// One cell of a triangulation: its point indices (point 0 first) and the
/// exact inner normal of the lifted lower facet, scaled by 10^6 (the lifted
/// normal is `(v, 1)` after unscaling).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub point_indices: Vec<usize>,
    pub normal_scaled: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    pub cells: Vec<Cell>,
    pub lifting: LiftingFunction,
}

impl Triangulation {
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }
}

/// Compute the regular subdivision induced by a lifting, as a triangulation.
///
/// Cells are found by exact enumeration: every independent n-subset of the
/// nonzero points whose lifted hyperplane has all other lifted points
/// strictly above is a lower facet (it automatically contains the origin,
/// whose lifted height is zero). Ties signal a non-simplicial subdivision and
/// surface as `DegenerateLifting`.
pub fn regular_subdivision(
    cfg: &PointConfiguration,
    omega: &LiftingFunction,
) -> Result<Triangulation> {
    let n = cfg.dim;
    if n > MAX_HULL_DIM {
        return Err(Error::ScaleLimit(format!(
            "hull computations capped at dimension {}, got {}",
            MAX_HULL_DIM, n
        )));
    }
    let nonzero: Vec<usize> = (1..cfg.len()).collect();
    let mut cells = Vec::new();
    for subset in nonzero.iter().copied().combinations(n) {
        let rows: Vec<Vec<i64>> = subset
            .iter()
            .map(|&p| cfg.points[p].coords.clone())
            .collect();
        let det = int_det(&rows);
        if det == 0 {
            continue;
        }
        debug_assert!(det.abs() == 1, "incidence point sets are unimodular");
        let rhs: Vec<i128> = subset
            .iter()
            .map(|&p| -(omega.omega_scaled(cfg, p) as i128))
            .collect();
        let v = unimodular_int_solve(&rows, &rhs)
            .expect("unimodular systems solve exactly");
        // Lower-facet test: every other lifted point strictly above the
        // hyperplane through this subset and the lifted origin.
        let mut is_cell = true;
        for &q in &nonzero {
            if subset.contains(&q) {
                continue;
            }
            let g: i128 = cfg.points[q]
                .coords
                .iter()
                .zip(&v)
                .map(|(&c, &vi)| c as i128 * vi)
                .sum::<i128>()
                + omega.omega_scaled(cfg, q) as i128;
            if g == 0 {
                return Err(Error::DegenerateLifting {
                    attempts: omega.attempt + 1,
                });
            }
            if g < 0 {
                is_cell = false;
                break;
            }
        }
        if is_cell {
            let mut point_indices = vec![0usize];
            point_indices.extend(subset.iter().copied());
            cells.push(Cell {
                point_indices,
                normal_scaled: v.iter().map(|&x| x as i64).collect(),
            });
        }
    }
    let tri = Triangulation {
        cells,
        lifting: omega.clone(),
    };
    verify_triangulation(cfg, &tri)?;
    Ok(tri)
}

/// Exact structural verification: unimodular cells without antipodal pairs,
/// interior ridges shared by exactly two cells, and every cell's outer
/// simplex supported by a hyperplane of the unlifted hull.
fn verify_triangulation(cfg: &PointConfiguration, tri: &Triangulation) -> Result<()> {
    let n = cfg.dim;
    if tri.cells.is_empty() {
        return Err(Error::DegenerateLifting {
            attempts: tri.lifting.attempt + 1,
        });
    }
    let mut ridge_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for cell in &tri.cells {
        if cell.point_indices.len() != n + 1 || cell.point_indices[0] != 0 {
            return Err(Error::NotATreeCell(format!(
                "cell {:?} is not 0 plus {} points",
                cell.point_indices, n
            )));
        }
        let outer = &cell.point_indices[1..];
        for &p in outer {
            if let Some(anti) = cfg.antipode(p) {
                if outer.contains(&anti) {
                    return Err(Error::DegenerateLifting {
                        attempts: tri.lifting.attempt + 1,
                    });
                }
            }
        }
        let rows: Vec<Vec<i64>> = outer.iter().map(|&p| cfg.points[p].coords.clone()).collect();
        if int_det(&rows).abs() != 1 {
            return Err(Error::NotATreeCell("cell is not unimodular".into()));
        }
        // ridges through the origin
        for skip in 0..outer.len() {
            let mut key: Vec<usize> = outer
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &p)| p)
                .collect();
            key.sort_unstable();
            *ridge_count.entry(key).or_insert(0) += 1;
        }
        // The outer simplex must lie on the boundary of the unlifted hull.
        facet_normal_through(cfg, outer).ok_or_else(|| {
            Error::NotATreeCell("cell simplex is not on the hull boundary".into())
        })?;
    }
    for (key, count) in ridge_count {
        if count != 2 {
            return Err(Error::DegenerateLifting {
                attempts: tri.lifting.attempt + 1,
            });
        }
        let _ = key;
    }
    Ok(())
}

/// Supporting functional through a boundary simplex: the integer vector `u`
/// with ⟨u, p⟩ = 1 on the simplex and ⟨u, q⟩ ≤ 1 on the whole configuration,
/// if one exists.
fn facet_normal_through(cfg: &PointConfiguration, simplex: &[usize]) -> Option<Vec<i64>> {
    let rows: Vec<Vec<i64>> = simplex
        .iter()
        .map(|&p| cfg.points[p].coords.clone())
        .collect();
    let rhs = vec![1i128; rows.len()];
    let u = unimodular_int_solve(&rows, &rhs)?;
    for q in 1..cfg.len() {
        let val: i128 = cfg.points[q]
            .coords
            .iter()
            .zip(&u)
            .map(|(&c, &ui)| c as i128 * ui)
            .sum();
        if val > 1 {
            return None;
        }
    }
    Some(u.iter().map(|&x| x as i64).collect())
}

/// Sample liftings until the induced subdivision is simplicial; the returned
/// lifting records the attempt that succeeded.
pub fn triangulate(cfg: &PointConfiguration, seed: u64) -> Result<Triangulation> {
    let mut last = Error::DegenerateLifting { attempts: 0 };
    for attempt in 0..LIFT_RETRIES {
        let omega = sample_lifting(cfg, seed, attempt);
        match regular_subdivision(cfg, &omega) {
            Ok(tri) => return Ok(tri),
            Err(e @ Error::DegenerateLifting { .. }) => last = e,
            Err(other) => return Err(other),
        }
    }
    Err(last)
}

/// Normalized volume of the adjacency polytope: the cell count of a regular
/// unimodular triangulation (each cell contributes |det| = 1).
pub fn normalized_volume(net: &Network) -> Result<u64> {
    let cfg = adjacency_polytope(net);
    let tri = triangulate(&cfg, 0)?;
    // Cross-check: summing |det| over cells must equal the cell count.
    let det_sum: i128 = tri
        .cells
        .iter()
        .map(|c| {
            let rows: Vec<Vec<i64>> = c.point_indices[1..]
                .iter()
                .map(|&p| cfg.points[p].coords.clone())
                .collect();
            int_det(&rows).abs()
        })
        .sum();
    assert_eq!(det_sum as usize, tri.cell_count());
    Ok(tri.cell_count() as u64)
}

// ---------------------------------------------------------------------------
// Faces
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacePoint {
    pub index: usize,
    pub coords: Vec<i64>,
    /// The arc (i, j) whose point e_i − e_j this is.
    pub arc: (usize, usize),
}

/// A proper nonempty face of the adjacency polytope with an exact inner
/// normal: ⟨v, p⟩ = support on the face and > support off it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub points: Vec<FacePoint>,
    pub normal: Vec<i64>,
    pub support: i64,
    pub dim: usize,
}

impl Face {
    pub fn corank(&self) -> usize {
        self.points.len() - self.dim - 1
    }

    pub fn point_index_set(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.points.iter().map(|p| p.index).collect();
        v.sort_unstable();
        v
    }

    pub fn contains_coords(&self, coords: &[i64]) -> bool {
        self.points.iter().any(|p| p.coords == coords)
    }
}

fn face_from_indices(cfg: &PointConfiguration, indices: &[usize], normal: Vec<i64>, support: i64) -> Face {
    let points: Vec<FacePoint> = indices
        .iter()
        .map(|&idx| {
            let PointTag::Arc(i, j) = cfg.points[idx].tag else {
                panic!("proper faces contain no origin");
            };
            FacePoint {
                index: idx,
                coords: cfg.points[idx].coords.clone(),
                arc: (i, j),
            }
        })
        .collect();
    let dim = affine_dim(&points);
    Face {
        points,
        normal,
        support,
        dim,
    }
}

fn affine_dim(points: &[FacePoint]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0].coords;
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| {
            p.coords
                .iter()
                .zip(base)
                .map(|(&a, &b)| a - b)
                .collect()
        })
        .collect();
    int_rank(&diffs)
}

/// All facets of the adjacency polytope, with exact inner normals, derived
/// from the boundary simplices of a reference triangulation.
pub fn facets(cfg: &PointConfiguration) -> Result<Vec<Face>> {
    let tri = triangulate(cfg, 0)?;
    facets_from(cfg, &tri)
}

pub fn facets_from(cfg: &PointConfiguration, tri: &Triangulation) -> Result<Vec<Face>> {
    let mut seen: BTreeMap<Vec<i64>, Face> = BTreeMap::new();
    for cell in &tri.cells {
        let outer = &cell.point_indices[1..];
        let u = facet_normal_through(cfg, outer).ok_or_else(|| {
            Error::NotATreeCell("triangulation cell not on hull boundary".into())
        })?;
        if seen.contains_key(&u) {
            continue;
        }
        let members: Vec<usize> = (1..cfg.len())
            .filter(|&q| {
                cfg.points[q]
                    .coords
                    .iter()
                    .zip(&u)
                    .map(|(&c, &ui)| c as i128 * ui as i128)
                    .sum::<i128>()
                    == 1
            })
            .collect();
        // store with the inner-normal convention: ⟨-u, p⟩ = -1 on the facet
        let inner: Vec<i64> = u.iter().map(|&x| -x).collect();
        let face = face_from_indices(cfg, &members, inner, -1);
        seen.insert(u, face);
    }
    let mut out: Vec<Face> = seen.into_values().collect();
    out.sort_by(|a, b| a.point_index_set().cmp(&b.point_index_set()));
    Ok(out)
}

/// All proper nonempty faces: the closure of the facet set under
/// intersection. Normals are sums of the normals of all facets containing
/// each face.
pub fn all_proper_faces(cfg: &PointConfiguration) -> Result<Vec<Face>> {
    let facet_list = facets(cfg)?;
    let facet_sets: Vec<BTreeSet<usize>> = facet_list
        .iter()
        .map(|f| f.point_index_set().into_iter().collect())
        .collect();
    let mut sets: BTreeSet<Vec<usize>> = facet_sets
        .iter()
        .map(|s| s.iter().copied().collect())
        .collect();
    let mut frontier: Vec<BTreeSet<usize>> = facet_sets.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for g in &facet_sets {
                let inter: BTreeSet<usize> = f.intersection(g).copied().collect();
                if inter.is_empty() {
                    continue;
                }
                let key: Vec<usize> = inter.iter().copied().collect();
                if sets.insert(key) {
                    next.push(inter);
                }
            }
        }
        frontier = next;
    }
    let mut out = Vec::new();
    for set in sets {
        let mut normal = vec![0i64; cfg.dim];
        let mut count = 0i64;
        for (fi, fset) in facet_sets.iter().enumerate() {
            if set.iter().all(|p| fset.contains(p)) {
                for (a, b) in normal.iter_mut().zip(&facet_list[fi].normal) {
                    *a += *b;
                }
                count += 1;
            }
        }
        out.push(face_from_indices(cfg, &set, normal, -count));
    }
    out.sort_by(|a, b| a.point_index_set().cmp(&b.point_index_set()));
    Ok(out)
}

/// The facial subdigraph: arcs (i, j) for each point e_i − e_j in the face.
pub fn face_subdigraph(cfg: &PointConfiguration, f: &Face) -> Digraph {
    let num_nodes = cfg.dim + 1;
    let arcs: Vec<(usize, usize)> = f.points.iter().map(|p| p.arc).collect();
    Digraph::new(num_nodes, arcs)
}

/// The directed spanning tree a triangulation cell encodes.
pub fn cell_to_tree(cfg: &PointConfiguration, cell: &Cell) -> Result<Digraph> {
    let num_nodes = cfg.dim + 1;
    let mut arcs = Vec::new();
    for &p in &cell.point_indices {
        match cfg.points[p].tag {
            PointTag::Zero => {}
            PointTag::Arc(i, j) => arcs.push((i, j)),
        }
    }
    if arcs.len() != cfg.dim {
        return Err(Error::NotATreeCell(format!(
            "cell has {} arcs, expected {}",
            arcs.len(),
            cfg.dim
        )));
    }
    let d = Digraph::new(num_nodes, arcs);
    if !d.is_acyclic() {
        return Err(Error::NotATreeCell("cell digraph has a directed cycle".into()));
    }
    if !d.spans() {
        return Err(Error::NotATreeCell("cell digraph does not span".into()));
    }
    Ok(d)
}

/// Consistency oracle: the undirected facet subgraphs must coincide with the
/// edge-maximal bipartite subgraphs of the network.
pub fn face_classification_check(net: &Network) -> Result<bool> {
    let cfg = adjacency_polytope(net);
    let facet_list = facets(&cfg)?;
    let mut facet_subgraphs: BTreeSet<Vec<Edge>> = BTreeSet::new();
    for f in &facet_list {
        let d = face_subdigraph(&cfg, f);
        facet_subgraphs.insert(d.underlying_edges());
    }
    let bipartite: BTreeSet<Vec<Edge>> = maximal_bipartite_subgraphs(net)?
        .into_iter()
        .collect();
    Ok(facet_subgraphs == bipartite)
}

/// A face's incidence data: the reduced incidence matrix of its subdigraph.
pub fn face_incidence(cfg: &PointConfiguration, f: &Face) -> crate::network::IncidenceMatrix {
    reduced_incidence(&face_subdigraph(cfg, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{
        complete_network, cycle_network, path_network, with_couplings, Coupling, Frequencies,
        Network,
    };
    use num_rational::Ratio;

    fn tree_with_shape(edges: &[(usize, usize)]) -> Network {
        let n = edges.len() + 1;
        let es: Vec<Edge> = edges.iter().map(|&(a, b)| Edge::new(a, b)).collect();
        Network::new(
            n,
            es.clone(),
            vec![Coupling::Rational(Ratio::from_integer(1)); es.len()],
            Frequencies::Generic,
            None,
            None,
        )
        .unwrap()
    }

    fn c4_pendant() -> Network {
        let mut edges: Vec<Edge> = cycle_network(4).edges().to_vec();
        edges.push(Edge::new(1, 4));
        Network::new(
            5,
            edges,
            vec![Coupling::Rational(Ratio::from_integer(1)); 5],
            Frequencies::Generic,
            None,
            None,
        )
        .unwrap()
    }

    #[test]
    fn adjacency_polytope_point_counts() {
        let k2 = path_network(2);
        let cfg = adjacency_polytope(&k2);
        assert_eq!(cfg.dim, 1);
        assert_eq!(cfg.len(), 3);
        assert_eq!(adjacency_polytope(&cycle_network(4)).len(), 9);
        assert_eq!(adjacency_polytope(&cycle_network(6)).len(), 13);
    }

    #[test]
    fn lifting_is_symmetric_and_distinct() {
        let cfg = adjacency_polytope(&cycle_network(4));
        let omega = symmetric_lifting(&cfg, 42);
        for e in 0..4 {
            let plus = 1 + 2 * e;
            let minus = 2 + 2 * e;
            assert_eq!(
                omega.omega_scaled(&cfg, plus),
                omega.omega_scaled(&cfg, minus)
            );
        }
        assert_eq!(omega.omega_scaled(&cfg, 0), 0);
        let mut seen = std::collections::BTreeSet::new();
        for &d in &omega.delta_scaled {
            assert!(d != 0 && d.abs() <= MAX_DELTA);
            assert!(seen.insert(d));
        }
    }

    #[test]
    fn k2_triangulation() {
        let cfg = adjacency_polytope(&path_network(2));
        let tri = triangulate(&cfg, 0).unwrap();
        assert_eq!(tri.cell_count(), 2);
    }

    #[test]
    fn cycle_volumes_match_closed_form() {
        // N * binom(N-1, floor((N-1)/2))
        for (m, expected) in [(3usize, 6u64), (4, 12), (5, 30), (6, 60)] {
            assert_eq!(normalized_volume(&cycle_network(m)).unwrap(), expected, "C{}", m);
        }
    }

    #[test]
    fn tree_volumes_are_powers_of_two() {
        let shapes: Vec<Vec<(usize, usize)>> = vec![
            vec![(0, 1)],
            vec![(0, 1), (1, 2)],
            vec![(0, 1), (0, 2), (0, 3)],
            vec![(0, 1), (1, 2), (1, 3), (3, 4)],
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)],
            vec![(0, 1), (0, 2), (2, 3), (2, 4), (4, 5), (1, 6)],
        ];
        for shape in shapes {
            let net = tree_with_shape(&shape);
            assert_eq!(
                normalized_volume(&net).unwrap(),
                1u64 << net.n(),
                "tree {:?}",
                shape
            );
        }
    }

    #[test]
    fn volume_is_seed_independent() {
        let cfg = adjacency_polytope(&cycle_network(4));
        let counts: Vec<usize> = (0..3u64)
            .map(|s| triangulate(&cfg, s).unwrap().cell_count())
            .collect();
        assert_eq!(counts, vec![12, 12, 12]);
    }

    #[test]
    fn cells_are_tree_cells() {
        for net in [cycle_network(4), cycle_network(5), c4_pendant(), complete_network(4)] {
            let cfg = adjacency_polytope(&net);
            let tri = triangulate(&cfg, 1).unwrap();
            for cell in &tri.cells {
                let d = cell_to_tree(&cfg, cell).unwrap();
                assert!(d.is_acyclic());
                assert!(d.spans());
            }
        }
    }

    #[test]
    fn facet_counts_for_cycles() {
        let c4 = adjacency_polytope(&cycle_network(4));
        assert_eq!(facets(&c4).unwrap().len(), 6);
        let c6 = adjacency_polytope(&cycle_network(6));
        assert_eq!(facets(&c6).unwrap().len(), 20);
    }

    #[test]
    fn k2_facets_are_endpoints() {
        let cfg = adjacency_polytope(&path_network(2));
        let fs = facets(&cfg).unwrap();
        assert_eq!(fs.len(), 2);
        for f in &fs {
            assert_eq!(f.points.len(), 1);
            assert_eq!(f.corank(), 0);
        }
    }

    #[test]
    fn facets_come_in_antipodal_pairs() {
        let cfg = adjacency_polytope(&cycle_network(4));
        let fs = facets(&cfg).unwrap();
        for f in &fs {
            let anti: Vec<usize> = f
                .points
                .iter()
                .map(|p| cfg.antipode(p.index).unwrap())
                .collect();
            let mut anti_sorted = anti.clone();
            anti_sorted.sort_unstable();
            assert!(
                fs.iter().any(|g| g.point_index_set() == anti_sorted),
                "missing antipodal facet"
            );
            // transpose relation on subdigraphs
            let d = face_subdigraph(&cfg, f);
            let anti_face = fs
                .iter()
                .find(|g| g.point_index_set() == anti_sorted)
                .unwrap();
            let dt = face_subdigraph(&cfg, anti_face);
            let mut a = d.transpose().arcs;
            let mut b = dt.arcs.clone();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn facet_subgraph_of_c4_is_whole_cycle() {
        let net = cycle_network(4);
        let cfg = adjacency_polytope(&net);
        let mut expected = net.edges().to_vec();
        expected.sort();
        for f in facets(&cfg).unwrap() {
            let d = face_subdigraph(&cfg, &f);
            assert_eq!(d.underlying_edges(), expected);
        }
    }

    #[test]
    fn classification_oracle() {
        for net in [cycle_network(3), cycle_network(4), complete_network(4)] {
            assert!(face_classification_check(&net).unwrap());
        }
    }

    #[test]
    fn classification_c3_facet_structure() {
        let cfg = adjacency_polytope(&cycle_network(3));
        let fs = facets(&cfg).unwrap();
        assert_eq!(fs.len(), 6);
        let mut subgraphs = BTreeSet::new();
        for f in &fs {
            subgraphs.insert(face_subdigraph(&cfg, f).underlying_edges());
        }
        assert_eq!(subgraphs.len(), 3);
    }

    #[test]
    fn monotonicity_under_edge_addition() {
        // nested chain: path < unicycle < with chord < complete
        let p4 = path_network(4);
        let c4 = cycle_network(4);
        let mut chord_edges: Vec<Edge> = c4.edges().to_vec();
        chord_edges.push(Edge::new(0, 2));
        let chord = Network::new(
            4,
            chord_edges,
            vec![Coupling::Rational(Ratio::from_integer(1)); 5],
            Frequencies::Generic,
            None,
            None,
        )
        .unwrap();
        let k4 = complete_network(4);
        let vols: Vec<u64> = [&p4, &c4, &chord, &k4]
            .iter()
            .map(|n| normalized_volume(n).unwrap())
            .collect();
        assert!(vols[0] < vols[1] && vols[1] < vols[2] && vols[2] < vols[3], "{:?}", vols);
    }

    #[test]
    fn leaf_law_for_volume() {
        let c4 = cycle_network(4);
        let with_leaf = c4_pendant();
        assert_eq!(
            normalized_volume(&with_leaf).unwrap(),
            2 * normalized_volume(&c4).unwrap()
        );
    }

    #[test]
    fn face_lattice_contains_facets_and_vertices() {
        let cfg = adjacency_polytope(&cycle_network(4));
        let faces = all_proper_faces(&cfg).unwrap();
        let facet_count = faces.iter().filter(|f| f.dim == cfg.dim - 1).count();
        assert_eq!(facet_count, 6);
        let vertex_count = faces.iter().filter(|f| f.dim == 0).count();
        assert_eq!(vertex_count, 8);
        // supporting inequality holds exactly for every face
        for f in &faces {
            for q in 1..cfg.len() {
                let val: i128 = cfg.points[q]
                    .coords
                    .iter()
                    .zip(&f.normal)
                    .map(|(&c, &v)| c as i128 * v as i128)
                    .sum();
                let on_face = f.points.iter().any(|p| p.index == q);
                if on_face {
                    assert_eq!(val, f.support as i128);
                } else {
                    assert!(val > f.support as i128);
                }
            }
        }
    }

    #[test]
    fn generic_couplings_do_not_change_volume() {
        let net = cycle_network(5);
        let other = with_couplings(&net, vec![Coupling::Generic; 5]).unwrap();
        assert_eq!(
            normalized_volume(&net).unwrap(),
            normalized_volume(&other).unwrap()
        );
    }
}
