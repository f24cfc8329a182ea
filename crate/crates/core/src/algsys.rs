//! Laurent polynomial systems attached to a network: the algebraic
//! equilibrium system, its randomization, facial and pyramid systems, the
//! cycle form, and the power-flow / phase-delay variants.
//!
//! Coefficients live in complex double precision; the exact layer never
//! consumes them.

use crate::error::{Error, Result};
use crate::network::{Frequencies, IncidenceMatrix, Network};
use crate::numeric::{condition_inf, monomial, C64};
use crate::polytope::Face;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub const RANDOMIZER_COND_LIMIT: f64 = 1e8;
pub const TORUS_MIN_COORD: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub expo: Vec<i64>,
    pub coeff: C64,
}

/// A Laurent polynomial in `n` variables; exponents pairwise distinct, zero
/// coefficients never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    pub n: usize,
    pub terms: Vec<Term>,
}

impl LaurentPoly {
    pub fn from_terms(n: usize, raw: Vec<(Vec<i64>, C64)>) -> Self {
        let mut map: BTreeMap<Vec<i64>, C64> = BTreeMap::new();
        for (expo, c) in raw {
            *map.entry(expo).or_insert(C64::new(0.0, 0.0)) += c;
        }
        let terms = map
            .into_iter()
            .filter(|(_, c)| c.norm_sqr() != 0.0)
            .map(|(expo, coeff)| Term { expo, coeff })
            .collect();
        LaurentPoly { n, terms }
    }

    pub fn eval(&self, x: &[C64]) -> C64 {
        self.terms
            .iter()
            .map(|t| t.coeff * monomial(x, &t.expo))
            .sum()
    }

    /// Gradient row: d/dx_l of Σ c x^a is Σ c a_l x^a / x_l.
    pub fn gradient(&self, x: &[C64]) -> Vec<C64> {
        let mut row = vec![C64::new(0.0, 0.0); self.n];
        for t in &self.terms {
            let v = t.coeff * monomial(x, &t.expo);
            for l in 0..self.n {
                if t.expo[l] != 0 {
                    row[l] += v * C64::new(t.expo[l] as f64, 0.0) / x[l];
                }
            }
        }
        row
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Kuramoto,
    Randomized,
    Facial(Vec<usize>),
    Pyramid(Vec<usize>),
    PowerFlow,
    Delayed,
    Homotopy(C64),
}

/// A square system of `n` Laurent polynomials in `n` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSystem {
    pub n: usize,
    pub polys: Vec<LaurentPoly>,
    pub provenance: Provenance,
}

impl LaurentSystem {
    pub fn eval(&self, x: &[C64]) -> Result<Vec<C64>> {
        check_torus(x)?;
        Ok(self.polys.iter().map(|p| p.eval(x)).collect())
    }

    pub fn jacobian(&self, x: &[C64]) -> Result<Vec<Vec<C64>>> {
        check_torus(x)?;
        Ok(self.polys.iter().map(|p| p.gradient(x)).collect())
    }

    pub fn residual(&self, x: &[C64]) -> Result<f64> {
        Ok(crate::numeric::inf_norm(&self.eval(x)?))
    }
}

fn check_torus(x: &[C64]) -> Result<()> {
    for (index, xi) in x.iter().enumerate() {
        if xi.norm() < TORUS_MIN_COORD {
            return Err(Error::NearZeroCoordinate { index });
        }
    }
    Ok(())
}

/// Concrete per-edge couplings and per-node frequency deviations, after all
/// GENERIC markers have been resolved.
#[derive(Debug, Clone)]
pub struct ConcreteParams {
    /// k_e per edge, in network edge order.
    pub k: Vec<C64>,
    /// Deviations from the mean frequency, for nodes 1..=n.
    pub wbar: Vec<C64>,
}

pub fn concrete_params(net: &Network) -> Result<ConcreteParams> {
    let mut k = Vec::with_capacity(net.edges().len());
    for c in net.couplings() {
        match c.as_c64() {
            Some(v) => k.push(v),
            None => return Err(Error::UnresolvedGeneric),
        }
    }
    let wbar = match net.frequencies() {
        Frequencies::Given(w) => {
            let mean = w.iter().sum::<f64>() / w.len() as f64;
            w[1..].iter().map(|&wi| C64::new(wi - mean, 0.0)).collect()
        }
        Frequencies::Homogeneous => vec![C64::new(0.0, 0.0); net.n()],
        Frequencies::Generic => return Err(Error::UnresolvedGeneric),
    };
    Ok(ConcreteParams { k, wbar })
}

pub(crate) fn expo_of_arc(n: usize, i: usize, j: usize) -> Vec<i64> {
    let mut e = vec![0i64; n];
    if i != 0 {
        e[i - 1] += 1;
    }
    if j != 0 {
        e[j - 1] -= 1;
    }
    e
}

/// Shared builder: equation i gets the constant plus per-incident-edge terms
/// with caller-chosen coefficients for x_i/x_j and x_j/x_i.
fn build_system(
    net: &Network,
    constants: &[C64],
    coeff_out: impl Fn(usize) -> C64,
    coeff_in: impl Fn(usize) -> C64,
    provenance: Provenance,
) -> LaurentSystem {
    let n = net.n();
    let mut polys = Vec::with_capacity(n);
    for i in 1..=n {
        let mut raw = vec![(vec![0i64; n], constants[i - 1])];
        for (eidx, e) in net.edges().iter().enumerate() {
            if !e.touches(i) {
                continue;
            }
            let j = e.other(i);
            raw.push((expo_of_arc(n, i, j), coeff_out(eidx)));
            raw.push((expo_of_arc(n, j, i), coeff_in(eidx)));
        }
        polys.push(LaurentPoly::from_terms(n, raw));
    }
    LaurentSystem {
        n,
        polys,
        provenance,
    }
}

/// The algebraic equilibrium system: f_i = w̄_i − Σ a_ij (x_i/x_j − x_j/x_i)
/// with a_ij = k_ij / (2i) and x_0 ≡ 1.
pub fn kuramoto_system(net: &Network) -> Result<LaurentSystem> {
    let p = concrete_params(net)?;
    let two_i = C64::new(0.0, 2.0);
    let a: Vec<C64> = p.k.iter().map(|&k| k / two_i).collect();
    Ok(build_system(
        net,
        &p.wbar,
        |e| -a[e],
        |e| a[e],
        Provenance::Kuramoto,
    ))
}

/// Phase-delay variant: the x_i/x_j coefficient picks up e^{iδ}, the mirror
/// term its inverse. δ ≡ 0 reduces to the plain system coefficientwise.
pub fn delayed_system(net: &Network) -> Result<LaurentSystem> {
    let delays = net.delays().ok_or(Error::MissingDelays)?;
    let p = concrete_params(net)?;
    let two_i = C64::new(0.0, 2.0);
    let a: Vec<C64> = p.k.iter().map(|&k| k / two_i).collect();
    let c: Vec<C64> = delays.iter().map(|&d| C64::from_polar(1.0, d)).collect();
    Ok(build_system(
        net,
        &p.wbar,
        |e| -a[e] * c[e],
        |e| a[e] / c[e],
        Provenance::Delayed,
    ))
}

/// PV-type power-flow variant. With g ≡ 0 this reduces termwise to the plain
/// system with k_ij = b_ij and w̄_i = P_i.
pub fn power_flow_system(net: &Network) -> Result<LaurentSystem> {
    let pf = net.pf().ok_or(Error::MissingPFData)?;
    let n = net.n();
    let constants: Vec<C64> = (1..=n).map(|i| C64::new(pf.power[i], 0.0)).collect();
    let two_i = C64::new(0.0, 2.0);
    let g: Vec<C64> = pf
        .admittances
        .iter()
        .map(|&(gv, _)| C64::new(gv / 2.0, 0.0))
        .collect();
    let b: Vec<C64> = pf
        .admittances
        .iter()
        .map(|&(_, bv)| C64::new(bv, 0.0) / two_i)
        .collect();
    Ok(build_system(
        net,
        &constants,
        |e| -(g[e] + b[e]),
        |e| -(g[e] - b[e]),
        Provenance::PowerFlow,
    ))
}

/// Draw a randomizer with unit-modulus entries; rejected (error) when the
/// condition estimate exceeds the limit.
pub fn sample_randomizer(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<C64>>> {
    let r: Vec<Vec<C64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
                .collect()
        })
        .collect();
    let cond = condition_inf(&r);
    if cond > RANDOMIZER_COND_LIMIT {
        return Err(Error::SingularRandomizer { cond });
    }
    Ok(r)
}

/// f* = R · f with terms merged; every equation of the result carries the
/// full support (unmixed) for generic R.
pub fn randomized_system(sys: &LaurentSystem, r: &[Vec<C64>]) -> Result<LaurentSystem> {
    let cond = condition_inf(r);
    if !cond.is_finite() || cond > RANDOMIZER_COND_LIMIT {
        return Err(Error::SingularRandomizer { cond });
    }
    let n = sys.n;
    let mut polys = Vec::with_capacity(n);
    for row in r.iter().take(n) {
        let mut raw = Vec::new();
        for (k, poly) in sys.polys.iter().enumerate() {
            for t in &poly.terms {
                raw.push((t.expo.clone(), row[k] * t.coeff));
            }
        }
        polys.push(LaurentPoly::from_terms(n, raw));
    }
    Ok(LaurentSystem {
        n,
        polys,
        provenance: Provenance::Randomized,
    })
}

/// Facial system: the terms of a randomized system whose exponents lie in a
/// proper face.
pub fn facial_system(sys: &LaurentSystem, face: &Face) -> Result<LaurentSystem> {
    if sys.provenance != Provenance::Randomized {
        return Err(Error::MalformedInput(
            "facial systems are cut from the randomized system".into(),
        ));
    }
    let polys = sys
        .polys
        .iter()
        .map(|p| LaurentPoly {
            n: p.n,
            terms: p
                .terms
                .iter()
                .filter(|t| face.contains_coords(&t.expo))
                .cloned()
                .collect(),
        })
        .collect();
    Ok(LaurentSystem {
        n: sys.n,
        polys,
        provenance: Provenance::Facial(face.point_index_set()),
    })
}

/// Cycle form of a facial system: the pair (Q̌(G⃗_F), a(G⃗_F)) with columns
/// and entries in face point order.
#[derive(Debug, Clone)]
pub struct CycleForm {
    pub q: IncidenceMatrix,
    pub a: Vec<C64>,
    /// Arcs in the same order as the columns of `q`.
    pub arcs: Vec<(usize, usize)>,
}

impl CycleForm {
    /// Evaluate Q (x^Q ∘ a)^T at a torus point.
    pub fn eval(&self, x: &[C64]) -> Result<Vec<C64>> {
        check_torus(x)?;
        let m = self.eval_monomials(x);
        let rows = self.q.rows;
        let mut out = vec![C64::new(0.0, 0.0); rows];
        for (r, row_out) in out.iter_mut().enumerate() {
            for (c, &mc) in m.iter().enumerate() {
                let q = self.q.entries[r][c];
                if q != 0 {
                    *row_out += C64::new(q as f64, 0.0) * mc;
                }
            }
        }
        Ok(out)
    }

    /// The vector x^Q ∘ a.
    pub fn eval_monomials(&self, x: &[C64]) -> Vec<C64> {
        (0..self.q.cols())
            .map(|c| {
                let col = self.q.column(c);
                monomial(x, &col) * self.a[c]
            })
            .collect()
    }
}

pub fn cycle_form(net: &Network, face: &Face) -> Result<CycleForm> {
    let p = concrete_params(net)?;
    let two_i = C64::new(0.0, 2.0);
    let arcs: Vec<(usize, usize)> = face.points.iter().map(|fp| fp.arc).collect();
    let mut a = Vec::with_capacity(arcs.len());
    for &(i, j) in &arcs {
        let eidx = net
            .edge_index(crate::network::Edge::new(i, j))
            .ok_or_else(|| Error::MalformedInput(format!("face arc ({},{}) not an edge", i, j)))?;
        a.push(p.k[eidx] / two_i);
    }
    let d = crate::network::Digraph::new(net.num_nodes(), arcs.clone());
    Ok(CycleForm {
        q: crate::network::reduced_incidence(&d),
        a,
        arcs,
    })
}

/// Pyramid system of a facet: Q̌(G⃗_F)(x^Q̌ ∘ a)^T = w̄, written as the
/// Laurent system w̄_i − Σ_out a x_i/x_j + Σ_in a x_j/x_i over facet arcs.
pub fn pyramid_system(net: &Network, facet: &Face) -> Result<LaurentSystem> {
    let p = concrete_params(net)?;
    let n = net.n();
    let two_i = C64::new(0.0, 2.0);
    let mut polys = Vec::with_capacity(n);
    for i in 1..=n {
        let mut raw = vec![(vec![0i64; n], p.wbar[i - 1])];
        for fp in &facet.points {
            let (a_node, b_node) = fp.arc;
            let eidx = net
                .edge_index(crate::network::Edge::new(a_node, b_node))
                .expect("facet arcs are network edges");
            let a = p.k[eidx] / two_i;
            if a_node == i {
                raw.push((expo_of_arc(n, a_node, b_node), -a));
            } else if b_node == i {
                raw.push((expo_of_arc(n, a_node, b_node), a));
            }
        }
        polys.push(LaurentPoly::from_terms(n, raw));
    }
    Ok(LaurentSystem {
        n,
        polys,
        provenance: Provenance::Pyramid(facet.point_index_set()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{cycle_network, path_network, with_frequencies, Frequencies, Network};
    use crate::polytope::{adjacency_polytope, all_proper_faces, facets};
    use rand::SeedableRng;

    fn rand_torus_point(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
        (0..n)
            .map(|_| {
                C64::from_polar(
                    rng.gen_range(0.5..2.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect()
    }

    fn c4_generic_w() -> Network {
        let net = cycle_network(4);
        with_frequencies(&net, Frequencies::Given(vec![0.3, 1.1, -2.1, 1.0])).unwrap()
    }

    #[test]
    fn k2_system_by_hand() {
        let net = with_frequencies(&path_network(2), Frequencies::Given(vec![0.0, 1.0])).unwrap();
        let sys = kuramoto_system(&net).unwrap();
        assert_eq!(sys.polys.len(), 1);
        let poly = &sys.polys[0];
        assert_eq!(poly.terms.len(), 3);
        // w̄_1 = 1 − 1/2 = 1/2; a = 1/(2i) = −i/2
        let by_expo = |e: i64| {
            poly.terms
                .iter()
                .find(|t| t.expo == vec![e])
                .map(|t| t.coeff)
                .unwrap()
        };
        assert!((by_expo(0) - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((by_expo(1) - C64::new(0.0, 0.5)).norm() < 1e-15);
        assert!((by_expo(-1) - C64::new(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn homogeneous_frequencies_drop_constants() {
        let net = with_frequencies(&cycle_network(4), Frequencies::Homogeneous).unwrap();
        let sys = kuramoto_system(&net).unwrap();
        for p in &sys.polys {
            assert_eq!(p.terms.len(), 4);
            assert!(p.terms.iter().all(|t| t.expo.iter().any(|&e| e != 0)));
        }
    }

    #[test]
    fn c4_equations_have_five_terms() {
        let sys = kuramoto_system(&c4_generic_w()).unwrap();
        for p in &sys.polys {
            assert_eq!(p.terms.len(), 5);
        }
    }

    #[test]
    fn generic_markers_are_rejected() {
        let net = cycle_network(4); // generic frequencies
        assert!(matches!(
            kuramoto_system(&net),
            Err(Error::UnresolvedGeneric)
        ));
    }

    #[test]
    fn randomization_identity_and_linearity() {
        let sys = kuramoto_system(&c4_generic_w()).unwrap();
        let n = sys.n;
        let mut eye = vec![vec![C64::new(0.0, 0.0); n]; n];
        for (i, row) in eye.iter_mut().enumerate() {
            row[i] = C64::new(1.0, 0.0);
        }
        let same = randomized_system(&sys, &eye).unwrap();
        for (p, q) in sys.polys.iter().zip(&same.polys) {
            assert_eq!(p.terms.len(), q.terms.len());
        }

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = sample_randomizer(n, &mut rng).unwrap();
        let rand_sys = randomized_system(&sys, &r).unwrap();
        // support is the whole configuration: 2|E| + 1 = 9 terms
        for p in &rand_sys.polys {
            assert_eq!(p.terms.len(), 9);
        }
        // (R·f)(x) = R·(f(x))
        let x = rand_torus_point(n, &mut rng);
        let fx = sys.eval(&x).unwrap();
        let rfx: Vec<C64> = (0..n)
            .map(|i| (0..n).map(|k| r[i][k] * fx[k]).sum())
            .collect();
        let direct = rand_sys.eval(&x).unwrap();
        for (a, b) in rfx.iter().zip(&direct) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn facial_system_central_symmetry() {
        let net = c4_generic_w();
        let cfg = adjacency_polytope(&net);
        let sys = kuramoto_system(&net).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = sample_randomizer(net.n(), &mut rng).unwrap();
        let rsys = randomized_system(&sys, &r).unwrap();
        let fs = facets(&cfg).unwrap();
        for f in &fs {
            let anti_set: Vec<usize> = {
                let mut v: Vec<usize> = f
                    .points
                    .iter()
                    .map(|p| cfg.antipode(p.index).unwrap())
                    .collect();
                v.sort_unstable();
                v
            };
            let anti = fs.iter().find(|g| g.point_index_set() == anti_set).unwrap();
            let init_f = facial_system(&rsys, f).unwrap();
            let init_anti = facial_system(&rsys, anti).unwrap();
            for (p, q) in init_f.polys.iter().zip(&init_anti.polys) {
                let mut negated: Vec<Vec<i64>> = p
                    .terms
                    .iter()
                    .map(|t| t.expo.iter().map(|&e| -e).collect())
                    .collect();
                negated.sort();
                let mut other: Vec<Vec<i64>> = q.terms.iter().map(|t| t.expo.clone()).collect();
                other.sort();
                assert_eq!(negated, other);
            }
        }
    }

    #[test]
    fn corank0_faces_have_full_column_rank() {
        let net = c4_generic_w();
        let cfg = adjacency_polytope(&net);
        for f in all_proper_faces(&cfg).unwrap() {
            if f.corank() == 0 {
                let form = cycle_form(&net, &f).unwrap();
                assert_eq!(form.q.kernel_dimension(), 0);
            }
        }
    }

    #[test]
    fn cycle_form_matches_facial_system() {
        // ‖init_F(f*)(x) − R·Q(x^Q∘a)^T‖ small at random torus points,
        // all proper faces of C3..C5.
        for m in 3..=5usize {
            let net = with_frequencies(
                &cycle_network(m),
                Frequencies::Given((0..m).map(|i| i as f64 * 0.7 - 1.0).collect()),
            )
            .unwrap();
            let cfg = adjacency_polytope(&net);
            let sys = kuramoto_system(&net).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(11 + m as u64);
            let r = sample_randomizer(net.n(), &mut rng).unwrap();
            let rsys = randomized_system(&sys, &r).unwrap();
            for f in all_proper_faces(&cfg).unwrap() {
                let init = facial_system(&rsys, &f).unwrap();
                let form = cycle_form(&net, &f).unwrap();
                for _ in 0..20 {
                    let x = rand_torus_point(net.n(), &mut rng);
                    let lhs = init.eval(&x).unwrap();
                    let qv = form.eval(&x).unwrap();
                    let rhs: Vec<C64> = (0..net.n())
                        .map(|i| (0..net.n()).map(|k| r[i][k] * qv[k]).sum())
                        .collect();
                    // the equilibrium system stores w̄ − Σ a(x_i/x_j − x_j/x_i),
                    // so the identity init_F(f*) = R·Q(x^Q∘a)ᵀ carries a global −1
                    for (a, b) in lhs.iter().zip(&rhs) {
                        assert!((a + b).norm() < 1e-10, "|{} + {}|", a, b);
                    }
                }
            }
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let sys = kuramoto_system(&c4_generic_w()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let x = rand_torus_point(sys.n, &mut rng);
        let jac = sys.jacobian(&x).unwrap();
        let h = 1e-6;
        for l in 0..sys.n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[l] += C64::new(h, 0.0);
            xm[l] -= C64::new(h, 0.0);
            let fp = sys.eval(&xp).unwrap();
            let fm = sys.eval(&xm).unwrap();
            for i in 0..sys.n {
                let fd = (fp[i] - fm[i]) / C64::new(2.0 * h, 0.0);
                let rel = (jac[i][l] - fd).norm() / (1.0 + jac[i][l].norm());
                assert!(rel < 1e-6, "d f_{}/d x_{}: {} vs {}", i, l, jac[i][l], fd);
            }
        }
    }

    #[test]
    fn near_zero_coordinates_rejected() {
        let sys = kuramoto_system(&c4_generic_w()).unwrap();
        let x = vec![C64::new(1e-16, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
        assert!(matches!(
            sys.eval(&x),
            Err(Error::NearZeroCoordinate { index: 0 })
        ));
    }

    #[test]
    fn variant_reduction_chain() {
        // delayed(δ=0) = kuramoto and power_flow(g=0, b=k) = kuramoto,
        // coefficient by coefficient.
        let base = c4_generic_w();
        let delayed_net = Network::new(
            base.num_nodes(),
            base.edges().to_vec(),
            base.couplings().to_vec(),
            base.frequencies().clone(),
            Some(vec![0.0; base.edges().len()]),
            None,
        )
        .unwrap();
        let plain = kuramoto_system(&base).unwrap();
        let delayed = delayed_system(&delayed_net).unwrap();
        for (p, q) in plain.polys.iter().zip(&delayed.polys) {
            assert_eq!(p.terms.len(), q.terms.len());
            for (a, b) in p.terms.iter().zip(&q.terms) {
                assert_eq!(a.expo, b.expo);
                assert!((a.coeff - b.coeff).norm() < 1e-15);
            }
        }

        let p = concrete_params(&base).unwrap();
        let pf_net = Network::new(
            base.num_nodes(),
            base.edges().to_vec(),
            base.couplings().to_vec(),
            base.frequencies().clone(),
            None,
            Some(crate::network::PfData {
                admittances: base
                    .edges()
                    .iter()
                    .enumerate()
                    .map(|(e, _)| (0.0, p.k[e].re))
                    .collect(),
                power: {
                    let Frequencies::Given(w) = base.frequencies() else {
                        unreachable!()
                    };
                    let mean = w.iter().sum::<f64>() / w.len() as f64;
                    w.iter().map(|&wi| wi - mean).collect()
                },
            }),
        )
        .unwrap();
        let pf = power_flow_system(&pf_net).unwrap();
        for (pp, q) in plain.polys.iter().zip(&pf.polys) {
            assert_eq!(pp.terms.len(), q.terms.len());
            for (a, b) in pp.terms.iter().zip(&q.terms) {
                assert_eq!(a.expo, b.expo);
                assert!((a.coeff - b.coeff).norm() < 1e-12, "{:?} vs {:?}", a, b);
            }
        }
    }

    #[test]
    fn delay_of_pi_negates_edge_terms() {
        let base = c4_generic_w();
        let mut deltas = vec![0.0; 4];
        deltas[2] = std::f64::consts::PI;
        let delayed_net = Network::new(
            base.num_nodes(),
            base.edges().to_vec(),
            base.couplings().to_vec(),
            base.frequencies().clone(),
            Some(deltas),
            None,
        )
        .unwrap();
        let plain = kuramoto_system(&base).unwrap();
        let delayed = delayed_system(&delayed_net).unwrap();
        let e = base.edges()[2];
        let flip_a = expo_of_arc(base.n(), e.i, e.j);
        let flip_b = expo_of_arc(base.n(), e.j, e.i);
        for (p, q) in plain.polys.iter().zip(&delayed.polys) {
            for (a, b) in p.terms.iter().zip(&q.terms) {
                assert_eq!(a.expo, b.expo);
                if a.expo == flip_a || a.expo == flip_b {
                    assert!((a.coeff + b.coeff).norm() < 1e-12);
                } else {
                    assert!((a.coeff - b.coeff).norm() < 1e-12);
                }
            }
        }
    }
}
