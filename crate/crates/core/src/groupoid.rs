//! Generalized Cartan matrices, matrix reflections, the Weyl-equivalence
//! class of a braiding matrix and the reflection-fixpoint enumeration of
//! positive roots.

use crate::braiding::BraidingMatrix;
use crate::cyclotomic::q_number_is_zero;
use crate::error::{EngineError, Result};
use serde::Serialize;
use std::collections::{HashMap, VecDeque};

/// Enumeration caps; a safety net for matrices outside the classification.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub max_objects: usize,
    pub max_roots_per_object: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_objects: 4096,
            max_roots_per_object: 16384,
        }
    }
}

impl Caps {
    /// Parse the `NP_CAPS=objects,roots` override.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Ok(v) = std::env::var("NP_CAPS") {
            let parts: Vec<&str> = v.split(',').collect();
            if parts.len() == 2 {
                if let (Ok(o), Ok(r)) = (parts[0].trim().parse(), parts[1].trim().parse()) {
                    caps.max_objects = o;
                    caps.max_roots_per_object = r;
                }
            }
        }
        caps
    }
}

/// c_ij of the evaluated matrix: -min{ n ≥ 0 : (n+1)_{q_ii} = 0 or
/// q_ii^n q_ij q_ji = 1 }, scanned up to the order-based bound.
pub fn cartan_entry(q: &BraidingMatrix, i: usize, j: usize) -> Result<i64> {
    if i == j {
        return Ok(2);
    }
    let qii = q.diag(i);
    let qt = q.q_tilde(i, j);
    let bound = qii.order().max(qt.order()).saturating_mul(8).saturating_add(8);
    for n in 0..=bound {
        if q_number_is_zero(n + 1, qii) || qii.pow(n as i128).mul(&qt).is_one() {
            return Ok(-(n as i64));
        }
    }
    Err(EngineError::NotArithmetic { i, j, bound })
}

/// Full generalized Cartan matrix of an evaluated braiding matrix.
pub fn cartan_matrix(q: &BraidingMatrix) -> Result<Vec<Vec<i64>>> {
    let theta = q.theta();
    let mut c = vec![vec![0i64; theta]; theta];
    for i in 0..theta {
        for j in 0..theta {
            c[i][j] = cartan_entry(q, i, j)?;
        }
    }
    Ok(c)
}

/// s_i(v) = v - (Σ_j c_ij v_j) α_i, using the Cartan row of the given object.
pub fn reflect_vector(c_row: &[i64], i: usize, v: &[i64]) -> Vec<i64> {
    let s: i128 = c_row.iter().zip(v).map(|(&c, &x)| c as i128 * x as i128).sum();
    let mut w = v.to_vec();
    w[i] = i64::try_from(w[i] as i128 - s).expect("root coordinate overflow");
    w
}

/// Coordinates of roots of finite systems are tiny; anything beyond this
/// bound signals an infinite system long before the count caps fire.
const COORD_CAP: i64 = 1 << 32;

/// ρ_i(q): (ρ_i q)_{jk} = q_jk q_ik^{-c_ij} q_ji^{-c_ik} q_ii^{c_ij c_ik}.
pub fn reflect_matrix(q: &BraidingMatrix, i: usize) -> Result<BraidingMatrix> {
    let theta = q.theta();
    let mut c = vec![0i64; theta];
    for j in 0..theta {
        c[j] = cartan_entry(q, i, j)?;
    }
    let mut rows = Vec::with_capacity(theta);
    for j in 0..theta {
        let mut row = Vec::with_capacity(theta);
        for k in 0..theta {
            let e = q
                .get(j, k)
                .mul(&q.get(i, k).pow(-c[j] as i128))
                .mul(&q.get(j, i).pow(-c[k] as i128))
                .mul(&q.diag(i).pow(c[j] as i128 * c[k] as i128));
            row.push(e);
        }
        rows.push(row);
    }
    BraidingMatrix::new(rows)
}

/// Is vertex i a Cartan vertex of q: q_ij q_ji = q_ii^{c_ij} for all j ≠ i.
pub fn is_cartan_vertex(q: &BraidingMatrix, c: &[Vec<i64>], i: usize) -> bool {
    (0..q.theta()).all(|j| j == i || q.q_tilde(i, j) == q.diag(i).pow(c[i][j] as i128))
}

/// The Weyl-equivalence class of a matrix: objects, ρ_i edges and the
/// per-object Cartan matrices. Object 0 is the input matrix.
#[derive(Clone, Debug)]
pub struct Groupoid {
    pub objects: Vec<BraidingMatrix>,
    /// edges[o][i] = index of ρ_i(objects[o])
    pub edges: Vec<Vec<usize>>,
    pub cartan: Vec<Vec<Vec<i64>>>,
    /// BFS parent: (object, reflection index) or None for the base object.
    pub parent: Vec<Option<(usize, usize)>>,
}

impl Groupoid {
    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    /// Reflection word from object `o` back to object 0, as a list of
    /// (object-at-which-to-reflect, vertex) pairs read left to right.
    pub fn path_to_base(&self, mut o: usize) -> Vec<(usize, usize)> {
        let mut w = Vec::new();
        while let Some((p, i)) = self.parent[o] {
            w.push((p, i));
            o = p;
        }
        w
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph weyl_groupoid {\n");
        for (o, _) in self.objects.iter().enumerate() {
            s.push_str(&format!("  n{o} [label=\"{o}\"];\n"));
        }
        for (o, es) in self.edges.iter().enumerate() {
            for (i, &t) in es.iter().enumerate() {
                if o <= t {
                    s.push_str(&format!("  n{o} -- n{t} [label=\"{}\"];\n", i + 1));
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// BFS closure of {q} under all ρ_i, deduplicated by exact matrix equality.
pub fn enumerate_groupoid(q: &BraidingMatrix, caps: &Caps) -> Result<Groupoid> {
    let theta = q.theta();
    let mut objects = vec![q.clone()];
    let mut index: HashMap<BraidingMatrix, usize> = HashMap::new();
    index.insert(q.clone(), 0);
    let mut cartan = vec![cartan_matrix(q)?];
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut parent = vec![None];
    let mut queue = VecDeque::from([0usize]);
    while let Some(o) = queue.pop_front() {
        let mut es = Vec::with_capacity(theta);
        for i in 0..theta {
            let r = reflect_matrix(&objects[o].clone(), i)?;
            let idx = match index.get(&r) {
                Some(&t) => t,
                None => {
                    let t = objects.len();
                    if t >= caps.max_objects {
                        return Err(EngineError::LikelyInfinite {
                            what: "groupoid objects".into(),
                            cap: caps.max_objects,
                        });
                    }
                    cartan.push(cartan_matrix(&r)?);
                    index.insert(r.clone(), t);
                    objects.push(r);
                    parent.push(Some((o, i)));
                    queue.push_back(t);
                    t
                }
            };
            es.push(idx);
        }
        edges.push(es);
    }
    Ok(Groupoid {
        objects,
        edges,
        cartan,
        parent,
    })
}

/// One positive root with its order, Cartan flag and a witness reflection
/// word (source object and vertex it was propagated from).
#[derive(Clone, Debug, Serialize)]
pub struct RootEntry {
    pub coords: Vec<i64>,
    pub order: u64,
    pub cartan: bool,
}

/// Positive roots of every object in the groupoid, from the reflection
/// fixpoint, with per-root orders and Cartan flags.
#[derive(Clone, Debug)]
pub struct RootSystem {
    /// roots[o] sorted lexicographically; object 0 is the analysis matrix.
    pub roots: Vec<Vec<RootEntry>>,
}

impl RootSystem {
    pub fn base(&self) -> &[RootEntry] {
        &self.roots[0]
    }
}

struct RootInfo {
    order: u64,
    cartan: bool,
}

/// Fixpoint closure: per object p keep S(p) ⊇ {α_i}; repeatedly add
/// s_i^p(β) for β ∈ S(ρ_i p), β ≠ α_i, whenever the image stays in ℕ_0^θ.
/// Cartan flags propagate along the derivations and every derivation is
/// checked consistent; orders are recomputed at each object and must agree.
pub fn positive_roots(g: &Groupoid, caps: &Caps) -> Result<RootSystem> {
    let theta = g.objects[0].theta();
    let nobj = g.object_count();
    let mut sets: Vec<HashMap<Vec<i64>, RootInfo>> = (0..nobj).map(|_| HashMap::new()).collect();
    let mut work: VecDeque<(usize, Vec<i64>)> = VecDeque::new();

    for o in 0..nobj {
        for i in 0..theta {
            let mut v = vec![0i64; theta];
            v[i] = 1;
            let order = g.objects[o].root_order(&v)?;
            let cartan = is_cartan_vertex(&g.objects[o], &g.cartan[o], i);
            sets[o].insert(v.clone(), RootInfo { order, cartan });
            work.push_back((o, v));
        }
    }

    while let Some((o, beta)) = work.pop_front() {
        let info_order;
        let info_cartan;
        {
            let info = &sets[o][&beta];
            info_order = info.order;
            info_cartan = info.cartan;
        }
        for i in 0..theta {
            // β at object o propagates to p with ρ_i(p) = o; edges are
            // involutive so p = edges[o][i].
            let p = g.edges[o][i];
            debug_assert_eq!(g.edges[p][i], o, "reflections must be involutive");
            let mut is_alpha_i = beta[i] == 1;
            for (j, &x) in beta.iter().enumerate() {
                if j != i && x != 0 {
                    is_alpha_i = false;
                }
            }
            if is_alpha_i {
                continue;
            }
            let v = reflect_vector(&g.cartan[p][i], i, &beta);
            if v.iter().any(|&x| x < 0) {
                continue;
            }
            if v.iter().any(|&x| x > COORD_CAP) {
                return Err(EngineError::LikelyInfinite {
                    what: "root coordinate magnitude".into(),
                    cap: COORD_CAP as usize,
                });
            }
            let order = g.objects[p].root_order(&v)?;
            if order != info_order {
                return Err(EngineError::InternalInvariantViolation(format!(
                    "root order not reflection-invariant: {beta:?}@{o} has order {info_order}, image {v:?}@{p} has order {order}"
                )));
            }
            match sets[p].get(&v) {
                Some(existing) => {
                    if existing.cartan != info_cartan {
                        return Err(EngineError::InternalInvariantViolation(format!(
                            "conflicting Cartan flags for root {v:?} at object {p}"
                        )));
                    }
                }
                None => {
                    if sets[p].len() >= caps.max_roots_per_object {
                        return Err(EngineError::LikelyInfinite {
                            what: format!("roots at object {p}"),
                            cap: caps.max_roots_per_object,
                        });
                    }
                    sets[p].insert(
                        v.clone(),
                        RootInfo {
                            order,
                            cartan: info_cartan,
                        },
                    );
                    work.push_back((p, v));
                }
            }
        }
    }

    // revalidate: where a root is simple, the transported flag must equal
    // the direct Cartan-vertex test at that object
    for o in 0..nobj {
        for i in 0..theta {
            let mut v = vec![0i64; theta];
            v[i] = 1;
            let direct = is_cartan_vertex(&g.objects[o], &g.cartan[o], i);
            if sets[o][&v].cartan != direct {
                return Err(EngineError::InternalInvariantViolation(format!(
                    "transported Cartan flag for α_{} at object {o} disagrees with direct test",
                    i + 1
                )));
            }
        }
    }

    let mut roots = Vec::with_capacity(nobj);
    for set in sets {
        let mut v: Vec<RootEntry> = set
            .into_iter()
            .map(|(coords, info)| RootEntry {
                coords,
                order: info.order,
                cartan: info.cartan,
            })
            .collect();
        v.sort_by(|a, b| a.coords.cmp(&b.coords));
        roots.push(v);
    }
    Ok(RootSystem { roots })
}

/// Positive-root count of a parametric matrix, by the same reflection
/// fixpoint run over monomial entries. Used to decide whether a
/// specialization point preserves the generic root system (Property C).
pub fn param_positive_root_count(
    q: &crate::braiding::ParamBraidingMatrix,
    caps: &Caps,
) -> Result<usize> {
    let theta = q.theta();
    let mut objects = vec![q.clone()];
    let mut index: HashMap<crate::braiding::ParamBraidingMatrix, usize> = HashMap::new();
    index.insert(q.clone(), 0);
    let mut cartan: Vec<Vec<Vec<i64>>> = vec![param_cartan_matrix(q)?];
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(o) = queue.pop_front() {
        let mut es = Vec::with_capacity(theta);
        for i in 0..theta {
            let r = objects[o].reflect(i)?;
            let idx = match index.get(&r) {
                Some(&t) => t,
                None => {
                    let t = objects.len();
                    if t >= caps.max_objects {
                        return Err(EngineError::LikelyInfinite {
                            what: "parametric groupoid objects".into(),
                            cap: caps.max_objects,
                        });
                    }
                    cartan.push(param_cartan_matrix(&r)?);
                    index.insert(r.clone(), t);
                    objects.push(r);
                    queue.push_back(t);
                    t
                }
            };
            es.push(idx);
        }
        edges.push(es);
    }
    // root fixpoint on coordinates only
    let nobj = objects.len();
    let mut sets: Vec<std::collections::HashSet<Vec<i64>>> =
        (0..nobj).map(|_| std::collections::HashSet::new()).collect();
    let mut work: VecDeque<(usize, Vec<i64>)> = VecDeque::new();
    for o in 0..nobj {
        for i in 0..theta {
            let mut v = vec![0i64; theta];
            v[i] = 1;
            sets[o].insert(v.clone());
            work.push_back((o, v));
        }
    }
    while let Some((o, beta)) = work.pop_front() {
        for i in 0..theta {
            let p = edges[o][i];
            let mut is_alpha_i = beta[i] == 1;
            for (j, &x) in beta.iter().enumerate() {
                if j != i && x != 0 {
                    is_alpha_i = false;
                }
            }
            if is_alpha_i {
                continue;
            }
            let v = reflect_vector(&cartan[p][i], i, &beta);
            if v.iter().any(|&x| x < 0) {
                continue;
            }
            if v.iter().any(|&x| x > COORD_CAP) {
                return Err(EngineError::LikelyInfinite {
                    what: "parametric root coordinate magnitude".into(),
                    cap: COORD_CAP as usize,
                });
            }
            if !sets[p].contains(&v) {
                if sets[p].len() >= caps.max_roots_per_object {
                    return Err(EngineError::LikelyInfinite {
                        what: format!("parametric roots at object {p}"),
                        cap: caps.max_roots_per_object,
                    });
                }
                sets[p].insert(v.clone());
                work.push_back((p, v));
            }
        }
    }
    Ok(sets[0].len())
}

fn param_cartan_matrix(q: &crate::braiding::ParamBraidingMatrix) -> Result<Vec<Vec<i64>>> {
    let theta = q.theta();
    let mut c = vec![vec![0i64; theta]; theta];
    for i in 0..theta {
        for j in 0..theta {
            c[i][j] = q.cartan_entry(i, j)?;
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::RootOfUnity;

    fn r(a: i64, m: u64) -> RootOfUnity {
        RootOfUnity::new(a, m).unwrap()
    }

    fn super_a10(n: u64) -> BraidingMatrix {
        BraidingMatrix::new(vec![
            vec![RootOfUnity::minus_one(), r(1, n)],
            vec![RootOfUnity::one(), RootOfUnity::minus_one()],
        ])
        .unwrap()
    }

    /// Symmetric Cartan A2 matrix at odd N: q_ii = ξ, q_12 = q_21 = ξ^{(N-1)/2}.
    fn cartan_a2_symmetric(n: u64) -> BraidingMatrix {
        assert!(n % 2 == 1);
        let s = r(((n - 1) / 2) as i64, n);
        BraidingMatrix::new(vec![vec![r(1, n), s], vec![s, r(1, n)]]).unwrap()
    }

    #[test]
    fn cartan_entries_super_a10() {
        let q = super_a10(5);
        assert_eq!(cartan_entry(&q, 0, 1).unwrap(), -1);
        assert_eq!(cartan_entry(&q, 1, 0).unwrap(), -1);
    }

    #[test]
    fn cartan_entry_disconnected_is_zero() {
        let q = BraidingMatrix::new(vec![
            vec![r(1, 3), r(1, 5)],
            vec![r(4, 5), r(1, 3)],
        ])
        .unwrap();
        assert_eq!(cartan_entry(&q, 0, 1).unwrap(), 0);
    }

    #[test]
    fn not_arithmetic_when_diag_one() {
        let q = BraidingMatrix::new(vec![
            vec![RootOfUnity::one(), r(1, 3)],
            vec![RootOfUnity::one(), RootOfUnity::minus_one()],
        ])
        .unwrap();
        assert!(matches!(
            cartan_entry(&q, 0, 1),
            Err(EngineError::NotArithmetic { .. })
        ));
    }

    #[test]
    fn reflect_simple_root_negates() {
        let q = super_a10(5);
        let c = cartan_matrix(&q).unwrap();
        assert_eq!(reflect_vector(&c[0], 0, &[1, 0]), vec![-1, 0]);
        assert_eq!(reflect_vector(&c[0], 0, &[0, 1]), vec![1, 1]);
    }

    #[test]
    fn reflection_involutive_on_samples() {
        for q in [super_a10(5), super_a10(8), cartan_a2_symmetric(5)] {
            for i in 0..q.theta() {
                let rr = reflect_matrix(&reflect_matrix(&q, i).unwrap(), i).unwrap();
                assert_eq!(rr, q);
            }
        }
    }

    #[test]
    fn groupoid_sizes() {
        let caps = Caps::default();
        // symmetric Cartan type: every reflection fixes the matrix
        let g = enumerate_groupoid(&cartan_a2_symmetric(5), &caps).unwrap();
        assert_eq!(g.object_count(), 1);
        // super A(1|0): reflection at a -1 vertex changes the diagram
        let g = enumerate_groupoid(&super_a10(5), &caps).unwrap();
        assert!(g.object_count() >= 2);
        // rank 1
        let q1 = BraidingMatrix::new(vec![vec![r(1, 4)]]).unwrap();
        assert_eq!(enumerate_groupoid(&q1, &caps).unwrap().object_count(), 1);
    }

    #[test]
    fn roots_super_a10() {
        let caps = Caps::default();
        let g = enumerate_groupoid(&super_a10(5), &caps).unwrap();
        let rs = positive_roots(&g, &caps).unwrap();
        let coords: Vec<&[i64]> = rs.base().iter().map(|e| e.coords.as_slice()).collect();
        assert_eq!(coords, vec![&[0, 1][..], &[1, 0], &[1, 1]]);
        // 𝔒_+ = {α1+α2} with N_β = 5
        let cart: Vec<&RootEntry> = rs.base().iter().filter(|e| e.cartan).collect();
        assert_eq!(cart.len(), 1);
        assert_eq!(cart[0].coords, vec![1, 1]);
        assert_eq!(cart[0].order, 5);
    }

    #[test]
    fn roots_cartan_a2_count() {
        let caps = Caps::default();
        let g = enumerate_groupoid(&cartan_a2_symmetric(5), &caps).unwrap();
        let rs = positive_roots(&g, &caps).unwrap();
        assert_eq!(rs.base().len(), 3);
        assert!(rs.base().iter().all(|e| e.cartan));
    }

    #[test]
    fn reflection_bijectivity_invariant() {
        let caps = Caps::default();
        let g = enumerate_groupoid(&super_a10(7), &caps).unwrap();
        let rs = positive_roots(&g, &caps).unwrap();
        for o in 0..g.object_count() {
            for i in 0..2 {
                let p = g.edges[o][i];
                assert_eq!(rs.roots[o].len(), rs.roots[p].len());
            }
        }
    }

    #[test]
    fn likely_infinite_out_of_classification() {
        // q_ii of order 5, q̃ of order 7: no finite root system
        let q = BraidingMatrix::new(vec![
            vec![r(1, 5), r(1, 7)],
            vec![RootOfUnity::one(), r(1, 5)],
        ])
        .unwrap();
        let caps = Caps::default();
        let res = enumerate_groupoid(&q, &caps).and_then(|g| positive_roots(&g, &caps));
        assert!(matches!(res, Err(EngineError::LikelyInfinite { .. })));
    }
}
