//! Catalog of the one-parameter families (Cartan, super and modular type):
//! construction of parametric braiding matrices with admissible default
//! exponents, evaluation data, and diagram matching used to lift a plain
//! braiding matrix back to a parametric one.

use crate::braiding::{
    BraidingMatrix, DynkinDiagram, ParamBraidingMatrix, ParamEntry, SpecializationPoint,
};
use crate::cyclotomic::RootOfUnity;
use crate::error::{EngineError, Result};
use crate::lattice::{integer_kernel, IntMatrix};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    CartanA,
    CartanB,
    CartanC,
    CartanD,
    CartanE,
    CartanF4,
    CartanG2,
    SuperA,
    SuperB,
    SuperD,
    SuperD21,
    SuperF4,
    SuperG3,
    Wk4,
    Br2,
}

impl FamilyId {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyId::CartanA => "cartan-a",
            FamilyId::CartanB => "cartan-b",
            FamilyId::CartanC => "cartan-c",
            FamilyId::CartanD => "cartan-d",
            FamilyId::CartanE => "cartan-e",
            FamilyId::CartanF4 => "cartan-f4",
            FamilyId::CartanG2 => "cartan-g2",
            FamilyId::SuperA => "super-a",
            FamilyId::SuperB => "super-b",
            FamilyId::SuperD => "super-d",
            FamilyId::SuperD21 => "super-d21",
            FamilyId::SuperF4 => "super-f4",
            FamilyId::SuperG3 => "super-g3",
            FamilyId::Wk4 => "wk4",
            FamilyId::Br2 => "br2",
        }
    }

    pub fn from_name(s: &str) -> Option<FamilyId> {
        let all = [
            FamilyId::CartanA,
            FamilyId::CartanB,
            FamilyId::CartanC,
            FamilyId::CartanD,
            FamilyId::CartanE,
            FamilyId::CartanF4,
            FamilyId::CartanG2,
            FamilyId::SuperA,
            FamilyId::SuperB,
            FamilyId::SuperD,
            FamilyId::SuperD21,
            FamilyId::SuperF4,
            FamilyId::SuperG3,
            FamilyId::Wk4,
            FamilyId::Br2,
        ];
        all.into_iter().find(|f| f.name() == s)
    }

    pub fn all() -> Vec<FamilyId> {
        vec![
            FamilyId::CartanA,
            FamilyId::CartanB,
            FamilyId::CartanC,
            FamilyId::CartanD,
            FamilyId::CartanE,
            FamilyId::CartanF4,
            FamilyId::CartanG2,
            FamilyId::SuperA,
            FamilyId::SuperB,
            FamilyId::SuperD,
            FamilyId::SuperD21,
            FamilyId::SuperF4,
            FamilyId::SuperG3,
            FamilyId::Wk4,
            FamilyId::Br2,
        ]
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub theta: usize,
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d1: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d3: Option<u64>,
}

/// Structural data of one table row before exponents are chosen.
#[derive(Clone, Debug)]
pub struct Template {
    pub id: FamilyId,
    pub params: FamilyParams,
    pub theta: usize,
    /// symmetric ν-exponent matrix: b_ii on the diagonal, b_ij on edges
    pub b: Vec<Vec<i64>>,
    /// constant coefficient of the diagonal entries
    pub diag_coeff: Vec<RootOfUnity>,
    /// constant coefficient of an edge, placed on the lower (j,i) entry
    pub edge_coeff: BTreeMap<(usize, usize), RootOfUnity>,
    /// vertices j whose rescaled simple root N_j α_j belongs to Π
    pub s_pi: Vec<bool>,
    /// non-simple underlying roots of Π, from the table formulas
    pub nonsimple_pi: Vec<Vec<i64>>,
    /// position of the odd vertex for the super rows
    pub odd_vertex: Option<usize>,
}

fn chain_edges(theta: usize) -> Vec<(usize, usize)> {
    (0..theta.saturating_sub(1)).map(|i| (i, i + 1)).collect()
}

/// Build the structural template of a family row, validating parameters
/// against the table's admissible ranges.
pub fn template(id: FamilyId, params: &FamilyParams) -> Result<Template> {
    let theta = params.theta;
    let n = params.n;
    let bad = |msg: &str| Err(EngineError::UnsupportedParameters(msg.to_string()));
    if n < 2 {
        return bad("N must be at least 2");
    }
    let mut b = vec![vec![0i64; theta]; theta];
    let mut diag_coeff = vec![RootOfUnity::one(); theta];
    let mut edge_coeff = BTreeMap::new();
    let mut s_pi = vec![true; theta];
    let mut nonsimple = Vec::new();
    let mut odd_vertex = None;
    let mut edges: Vec<(usize, usize)> = chain_edges(theta);

    match id {
        FamilyId::CartanA => {
            if theta < 1 {
                return bad("A requires theta >= 1");
            }
            for i in 0..theta {
                b[i][i] = 1;
            }
            for &(i, j) in &edges {
                b[i][j] = -1;
                b[j][i] = -1;
            }
        }
        FamilyId::CartanB => {
            if theta < 2 {
                return bad("B requires theta >= 2");
            }
            if n <= 2 {
                return bad("B requires N > 2");
            }
            for i in 0..theta {
                b[i][i] = if i + 1 == theta { 1 } else { 2 };
            }
            for &(i, j) in &edges {
                b[i][j] = -2;
                b[j][i] = -2;
            }
        }
        FamilyId::CartanC => {
            if theta < 3 {
                return bad("C requires theta >= 3");
            }
            if n <= 2 {
                return bad("C requires N > 2");
            }
            for i in 0..theta {
                b[i][i] = if i + 1 == theta { 2 } else { 1 };
            }
            for &(i, j) in &edges {
                let e = if j + 1 == theta { -2 } else { -1 };
                b[i][j] = e;
                b[j][i] = e;
            }
        }
        FamilyId::CartanD => {
            if theta < 4 {
                return bad("D requires theta >= 4");
            }
            edges = chain_edges(theta - 1);
            edges.push((theta - 3, theta - 1));
            for i in 0..theta {
                b[i][i] = 1;
            }
            for &(i, j) in &edges {
                b[i][j] = -1;
                b[j][i] = -1;
            }
        }
        FamilyId::CartanE => {
            if !(6..=8).contains(&theta) {
                return bad("E requires theta in {6,7,8}");
            }
            edges = chain_edges(theta - 1);
            edges.push((theta - 4, theta - 1));
            for i in 0..theta {
                b[i][i] = 1;
            }
            for &(i, j) in &edges {
                b[i][j] = -1;
                b[j][i] = -1;
            }
        }
        FamilyId::CartanF4 => {
            if theta != 4 {
                return bad("F4 requires theta = 4");
            }
            if n <= 2 {
                return bad("F4 requires N > 2");
            }
            b[0][0] = 1;
            b[1][1] = 1;
            b[2][2] = 2;
            b[3][3] = 2;
            let es = [(-1i64, 0usize, 1usize), (-2, 1, 2), (-2, 2, 3)];
            for &(e, i, j) in &es {
                b[i][j] = e;
                b[j][i] = e;
            }
        }
        FamilyId::CartanG2 => {
            if theta != 2 {
                return bad("G2 requires theta = 2");
            }
            if n <= 3 {
                return bad("G2 requires N > 3");
            }
            b[0][0] = 1;
            b[1][1] = 3;
            b[0][1] = -3;
            b[1][0] = -3;
        }
        FamilyId::SuperA => {
            let k = params.k.unwrap_or(1);
            if theta < 2 || k < 1 || k > (theta + 1) / 2 {
                return bad("super A requires theta >= 2 and 1 <= k <= floor((theta+1)/2)");
            }
            if n <= 2 {
                return bad("super A requires N > 2");
            }
            odd_vertex = Some(k - 1);
            for i in 0..theta {
                b[i][i] = if i + 1 < k {
                    -1
                } else if i + 1 == k {
                    0
                } else {
                    1
                };
            }
            diag_coeff[k - 1] = RootOfUnity::minus_one();
            for &(i, j) in &edges {
                let e = if j + 1 <= k { 1 } else { -1 };
                b[i][j] = e;
                b[j][i] = e;
            }
            s_pi[k - 1] = false;
        }
        FamilyId::SuperB => {
            let k = params.k.unwrap_or(1);
            if theta < 2 || k < 1 || k > theta - 1 {
                return bad("super B requires theta >= 2 and 1 <= k <= theta-1");
            }
            if n == 2 || n == 4 {
                return bad("super B requires N != 2, 4");
            }
            odd_vertex = Some(k - 1);
            for i in 0..theta {
                b[i][i] = if i + 1 < k {
                    -2
                } else if i + 1 == k {
                    0
                } else if i + 1 < theta {
                    2
                } else {
                    1
                };
            }
            diag_coeff[k - 1] = RootOfUnity::minus_one();
            for &(i, j) in &edges {
                let e = if j + 1 <= k { 2 } else { -2 };
                b[i][j] = e;
                b[j][i] = e;
            }
            s_pi[k - 1] = false;
            // β = α_k + … + α_θ
            let mut beta = vec![0i64; theta];
            for x in beta.iter_mut().skip(k - 1) {
                *x = 1;
            }
            nonsimple.push(beta);
        }
        FamilyId::SuperD => {
            let k = params.k.unwrap_or(2);
            if theta < 5 || k < 2 || 2 * k >= theta {
                return bad("super D requires theta >= 5 and 2 <= k < theta/2");
            }
            if n <= 2 {
                return bad("super D requires N > 2");
            }
            odd_vertex = Some(k - 1);
            for i in 0..theta {
                b[i][i] = if i + 1 < k {
                    -1
                } else if i + 1 == k {
                    0
                } else if i + 1 < theta {
                    1
                } else {
                    2
                };
            }
            diag_coeff[k - 1] = RootOfUnity::minus_one();
            for &(i, j) in &edges {
                let e = if j + 1 <= k {
                    1
                } else if j + 1 == theta {
                    -2
                } else {
                    -1
                };
                b[i][j] = e;
                b[j][i] = e;
            }
            s_pi[k - 1] = false;
            // β = α_{(k-1,θ)} + α_{(k,θ-1)}
            let mut beta = vec![0i64; theta];
            beta[k - 2] = 1;
            for x in beta.iter_mut().take(theta - 1).skip(k - 1) {
                *x = 2;
            }
            beta[theta - 1] = 1;
            nonsimple.push(beta);
        }
        FamilyId::SuperD21 => {
            if theta != 3 {
                return bad("D(2,1;a) requires theta = 3");
            }
            let d1 = params.d1.unwrap_or(1);
            let d3 = params.d3.unwrap_or(1);
            if d1 == 0 || d3 == 0 {
                return bad("D(2,1;a) requires d1, d3 >= 1");
            }
            if d1 % n == 0 || d3 % n == 0 || (d1 + d3) % n == 0 {
                return bad("D(2,1;a) requires xi^{d1}, xi^{d3}, xi^{d1+d3} != 1");
            }
            let g = num::integer::gcd(num::integer::gcd(d1, d3), n);
            if g != 1 {
                return bad("D(2,1;a) requires gcd(d1, d3, N) = 1");
            }
            odd_vertex = Some(1);
            b[0][0] = d1 as i64;
            b[1][1] = 0;
            b[2][2] = d3 as i64;
            diag_coeff[1] = RootOfUnity::minus_one();
            b[0][1] = -(d1 as i64);
            b[1][0] = -(d1 as i64);
            b[1][2] = -(d3 as i64);
            b[2][1] = -(d3 as i64);
            s_pi[1] = false;
            nonsimple.push(vec![1, 2, 1]);
        }
        FamilyId::SuperF4 => {
            if theta != 4 {
                return bad("F(4) requires theta = 4");
            }
            if n <= 2 {
                return bad("F(4) requires N > 2");
            }
            odd_vertex = Some(3);
            b[0][0] = 2;
            b[1][1] = 2;
            b[2][2] = 1;
            b[3][3] = 0;
            diag_coeff[3] = RootOfUnity::minus_one();
            let es = [(-2i64, 0usize, 1usize), (-2, 1, 2), (-1, 2, 3)];
            for &(e, i, j) in &es {
                b[i][j] = e;
                b[j][i] = e;
            }
            s_pi[3] = false;
            nonsimple.push(vec![1, 2, 3, 2]);
        }
        FamilyId::SuperG3 => {
            if theta != 3 {
                return bad("G(3) requires theta = 3");
            }
            if n <= 3 {
                return bad("G(3) requires N > 3");
            }
            odd_vertex = Some(0);
            b[0][0] = 0;
            b[1][1] = 1;
            b[2][2] = 3;
            diag_coeff[0] = RootOfUnity::minus_one();
            let es = [(-1i64, 0usize, 1usize), (-3, 1, 2)];
            for &(e, i, j) in &es {
                b[i][j] = e;
                b[j][i] = e;
            }
            s_pi[0] = false;
            nonsimple.push(vec![1, 2, 1]);
        }
        FamilyId::Wk4 => {
            if theta != 4 {
                return bad("wk(4) requires theta = 4");
            }
            if n <= 2 {
                return bad("wk(4) requires N > 2");
            }
            b[0][0] = 1;
            b[1][1] = 1;
            b[2][2] = 0;
            b[3][3] = -1;
            diag_coeff[2] = RootOfUnity::minus_one();
            diag_coeff[3] = RootOfUnity::minus_one();
            let es = [(-1i64, 0usize, 1usize), (-1, 1, 2), (1, 2, 3)];
            for &(e, i, j) in &es {
                b[i][j] = e;
                b[j][i] = e;
            }
            edge_coeff.insert((2, 3), RootOfUnity::minus_one());
            s_pi[2] = false;
            nonsimple.push(vec![1, 2, 3, 1]);
        }
        FamilyId::Br2 => {
            if theta != 2 {
                return bad("br(2) requires theta = 2");
            }
            if n == 3 {
                return bad("br(2) requires N != 3");
            }
            b[0][0] = 0;
            b[1][1] = 1;
            diag_coeff[0] = RootOfUnity::new(1, 3).unwrap();
            b[0][1] = -1;
            b[1][0] = -1;
            s_pi[0] = false;
            nonsimple.push(vec![2, 1]);
        }
    }
    Ok(Template {
        id,
        params: *params,
        theta,
        b,
        diag_coeff,
        edge_coeff,
        s_pi,
        nonsimple_pi: nonsimple,
        odd_vertex,
    })
}

/// A parametric lift together with the data needed by the Poisson stage.
#[derive(Clone, Debug)]
pub struct FamilyLift {
    pub id: FamilyId,
    pub params: FamilyParams,
    pub param: ParamBraidingMatrix,
    pub xi: SpecializationPoint,
    /// divisibility class of the free exponent t_ij for each ordered pair
    pub divisibility: BTreeMap<(usize, usize), i64>,
    /// the η-vector (kernel of the restricted symmetric exponent form) for
    /// super type A, in the matched object's coordinates
    pub eta: Option<Vec<i64>>,
}

impl FamilyLift {
    pub fn evaluate(&self) -> BraidingMatrix {
        self.param.evaluate(&self.xi)
    }
}

fn expected_entry_order(t: &Template, i: usize) -> u64 {
    // ord(p_i ξ^{b_ii}) at ξ primitive N-th
    let xi = RootOfUnity::primitive(t.params.n).unwrap();
    t.diag_coeff[i].mul(&xi.pow(t.b[i][i] as i128)).order()
}

fn pair_class(t: &Template, i: usize, j: usize) -> i64 {
    // t_ij must keep q_ij^{N_j} = 1 when column j is a Π-column, and
    // t_ji = b_ij - t_ij must keep q_ji^{N_i} = 1 when column i is one.
    let a = if t.s_pi[j] {
        t.params.n as i64 / num::integer::gcd(t.params.n as i64, expected_entry_order(t, j) as i64)
    } else {
        1
    };
    let bb = if t.s_pi[i] {
        t.params.n as i64 / num::integer::gcd(t.params.n as i64, expected_entry_order(t, i) as i64)
    } else {
        1
    };
    num::integer::lcm(a.max(1), bb.max(1))
}

/// Assemble the parametric matrix for a given assignment of upper-triangular
/// free exponents.
fn assemble(t: &Template, upper: &BTreeMap<(usize, usize), i64>) -> ParamBraidingMatrix {
    let theta = t.theta;
    let mut rows = vec![vec![ParamEntry::one(); theta]; theta];
    for i in 0..theta {
        rows[i][i] = ParamEntry::new(t.diag_coeff[i], t.b[i][i]);
    }
    for i in 0..theta {
        for j in (i + 1)..theta {
            let tij = *upper.get(&(i, j)).unwrap_or(&0);
            rows[i][j] = ParamEntry::nu(tij);
            let coeff = t
                .edge_coeff
                .get(&(i, j))
                .copied()
                .unwrap_or_else(RootOfUnity::one);
            rows[j][i] = ParamEntry::new(coeff, t.b[i][j] - tij);
        }
    }
    ParamBraidingMatrix::new(rows).expect("square by construction")
}

/// Centrality conditions that constrain the twist: for every vertex i and
/// every non-simple β̲ ∈ Π, q(α_i, β)^{N_β} = 1 at the evaluated matrix.
fn centrality_ok(t: &Template, q: &BraidingMatrix) -> bool {
    for beta in &t.nonsimple_pi {
        let n_beta = q.bilinear(beta, beta).map(|v| v.order()).unwrap_or(0);
        if n_beta == 0 {
            return false;
        }
        for i in 0..t.theta {
            let mut alpha = vec![0i64; t.theta];
            alpha[i] = 1;
            let v = match q.bilinear(&alpha, beta) {
                Ok(v) => v,
                Err(_) => return false,
            };
            if !v.pow(n_beta as i128).is_one() {
                return false;
            }
        }
    }
    true
}

/// Deterministic search for default exponents: smallest |t_ij| in each
/// divisibility class, in lexicographic pair order, such that the evaluated
/// matrix passes the twist-sensitive centrality conditions. User-supplied
/// exponents are fixed and only validated.
fn choose_exponents(
    t: &Template,
    user: &BTreeMap<(usize, usize), i64>,
) -> Result<BTreeMap<(usize, usize), i64>> {
    let theta = t.theta;
    let n = t.params.n as i64;
    let mut pairs = Vec::new();
    for i in 0..theta {
        for j in (i + 1)..theta {
            pairs.push((i, j));
        }
    }
    // candidate values per pair
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    for &(i, j) in &pairs {
        let class = pair_class(t, i, j);
        if let Some(&u) = user.get(&(i, j)) {
            if u.rem_euclid(class) != 0 {
                return Err(EngineError::UnsupportedParameters(format!(
                    "exponent t[{},{}] = {u} violates the divisibility class {class}Z",
                    i + 1,
                    j + 1
                )));
            }
            candidates.push(vec![u]);
        } else {
            let mut cs = vec![0i64];
            let mut v = class;
            while v < n.max(class + 1) {
                cs.push(v);
                cs.push(-v);
                v += class;
            }
            candidates.push(cs);
        }
    }
    // depth-first with early centrality pruning after each row completes
    fn dfs(
        t: &Template,
        pairs: &[(usize, usize)],
        candidates: &[Vec<i64>],
        idx: usize,
        chosen: &mut BTreeMap<(usize, usize), i64>,
        xi: &SpecializationPoint,
    ) -> bool {
        if idx == pairs.len() {
            let q = assemble(t, chosen).evaluate(xi);
            return centrality_ok(t, &q);
        }
        for &c in &candidates[idx] {
            chosen.insert(pairs[idx], c);
            // prune: if a whole prefix row is fixed, the single-row
            // conditions could be tested, but full evaluation at the leaf is
            // cheap at these sizes
            if dfs(t, pairs, candidates, idx + 1, chosen, xi) {
                return true;
            }
            chosen.remove(&pairs[idx]);
        }
        false
    }
    let xi = SpecializationPoint::new(RootOfUnity::primitive(t.params.n)?)?;
    let mut chosen = BTreeMap::new();
    if dfs(t, &pairs, &candidates, 0, &mut chosen, &xi) {
        Ok(chosen)
    } else {
        Err(EngineError::UnsupportedParameters(
            "no admissible exponent assignment satisfies the centrality conditions".into(),
        ))
    }
}

/// The η-vector of a super type A template: primitive integer kernel vector
/// of the rows i ≠ k of the symmetrized exponent form S (S_ii = 2 b_ii,
/// S_ij = b_ij). It satisfies ℘_{μη} + ℘_{ημ} = 0 for all μ̲ ∈ Π exactly.
fn super_a_eta(t: &Template) -> Result<Vec<i64>> {
    let theta = t.theta;
    let k = t.odd_vertex.expect("super A has an odd vertex");
    let mut rows = Vec::new();
    for i in 0..theta {
        if i == k {
            continue;
        }
        let mut row = vec![0i64; theta];
        for j in 0..theta {
            row[j] = if i == j { 2 * t.b[i][i] } else { t.b[i][j] };
        }
        rows.push(row);
    }
    let kernel = integer_kernel(&IntMatrix::from_rows(rows));
    if kernel.len() != 1 {
        return Err(EngineError::InternalInvariantViolation(format!(
            "super A eta kernel has dimension {}, expected 1",
            kernel.len()
        )));
    }
    let mut v: Vec<i64> = kernel[0]
        .iter()
        .map(|x| i64::try_from(x.clone()).expect("eta overflow"))
        .collect();
    if v[k] < 0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
    if v.iter().any(|&x| x <= 0) {
        return Err(EngineError::InternalInvariantViolation(
            "super A eta vector is not positive".into(),
        ));
    }
    Ok(v)
}

/// Build a family instance: parametric matrix with validated/defaulted
/// exponents, the specialization point of order N, and divisibility hints.
pub fn family(
    id: FamilyId,
    params: &FamilyParams,
    user_exps: &[(usize, usize, i64)],
) -> Result<FamilyLift> {
    let t = template(id, params)?;
    let mut user = BTreeMap::new();
    for &(i, j, v) in user_exps {
        if i >= t.theta || j >= t.theta || i >= j {
            return Err(EngineError::UnsupportedParameters(format!(
                "exponent index ({},{}) out of range; use 1 <= i < j <= theta",
                i + 1,
                j + 1
            )));
        }
        user.insert((i, j), v);
    }
    let chosen = choose_exponents(&t, &user)?;
    let param = assemble(&t, &chosen);
    let xi = SpecializationPoint::new(RootOfUnity::primitive(params.n)?)?;
    let mut divisibility = BTreeMap::new();
    for i in 0..t.theta {
        for j in (i + 1)..t.theta {
            divisibility.insert((i, j), pair_class(&t, i, j));
        }
    }
    let eta = if id == FamilyId::SuperA {
        Some(super_a_eta(&t)?)
    } else {
        None
    };
    Ok(FamilyLift {
        id,
        params: *params,
        param,
        xi,
        divisibility,
        eta,
    })
}

/// Try to lift a plain braiding matrix to a parametric one by matching its
/// Dynkin diagram against the catalog. Matching is attempted in the given
/// vertex order and, for chain-shaped rows, in the mirrored order.
pub fn lift_matrix(q: &BraidingMatrix) -> Result<Option<FamilyLift>> {
    let d = q.dynkin_diagram();
    for id in FamilyId::all() {
        for (params, perm) in candidate_params(id, &d) {
            if let Some(lift) = try_lift(id, &params, &perm, q)? {
                return Ok(Some(lift));
            }
        }
    }
    Ok(None)
}

/// Candidate parameter tuples and vertex permutations (template index →
/// input index) for a diagram.
fn candidate_params(id: FamilyId, d: &DynkinDiagram) -> Vec<(FamilyParams, Vec<usize>)> {
    let theta = d.vertices.len();
    let mut out = Vec::new();
    let idperm: Vec<usize> = (0..theta).collect();
    let revperm: Vec<usize> = (0..theta).rev().collect();
    let orders: Vec<Vec<usize>> = if theta > 1 {
        vec![idperm.clone(), revperm]
    } else {
        vec![idperm.clone()]
    };
    // candidate N values: orders of products of vertex labels with ±1; keep
    // it simple and try the orders of all labels and their doubles
    let mut ns: Vec<u64> = Vec::new();
    for v in &d.vertices {
        for cand in [v.order(), v.mul(&RootOfUnity::minus_one()).order()] {
            if cand >= 2 && !ns.contains(&cand) {
                ns.push(cand);
            }
        }
    }
    for e in &d.edges {
        for cand in [e.2.order(), e.2.mul(&RootOfUnity::minus_one()).order()] {
            if cand >= 2 && !ns.contains(&cand) {
                ns.push(cand);
            }
        }
    }
    ns.sort();
    let base = FamilyParams {
        theta,
        n: 0,
        k: None,
        d1: None,
        d3: None,
    };
    for &n in &ns {
        for perm in &orders {
            match id {
                FamilyId::SuperA | FamilyId::SuperB => {
                    for k in 1..=theta.saturating_sub(if id == FamilyId::SuperB { 1 } else { 0 }) {
                        out.push((
                            FamilyParams {
                                n,
                                k: Some(k),
                                ..base
                            },
                            perm.clone(),
                        ));
                    }
                }
                FamilyId::SuperD => {
                    for k in 2..theta.div_euclid(2) + 1 {
                        out.push((
                            FamilyParams {
                                n,
                                k: Some(k),
                                ..base
                            },
                            perm.clone(),
                        ));
                    }
                }
                FamilyId::SuperD21 => {
                    for d1 in 1..n {
                        for d3 in 1..n {
                            out.push((
                                FamilyParams {
                                    n,
                                    d1: Some(d1),
                                    d3: Some(d3),
                                    ..base
                                },
                                perm.clone(),
                            ));
                        }
                    }
                }
                _ => out.push((FamilyParams { n, ..base }, perm.clone())),
            }
        }
    }
    out
}

fn try_lift(
    id: FamilyId,
    params: &FamilyParams,
    perm: &[usize],
    q: &BraidingMatrix,
) -> Result<Option<FamilyLift>> {
    let Ok(t) = template(id, params) else {
        return Ok(None);
    };
    let n = params.n;
    let xi = RootOfUnity::primitive(n)?;
    // check the diagram against the template through the permutation
    for i in 0..t.theta {
        let expect = t.diag_coeff[i].mul(&xi.pow(t.b[i][i] as i128));
        if *q.diag(perm[i]) != expect {
            return Ok(None);
        }
    }
    for i in 0..t.theta {
        for j in (i + 1)..t.theta {
            let coeff = t
                .edge_coeff
                .get(&(i, j))
                .copied()
                .unwrap_or_else(RootOfUnity::one);
            let expect = coeff.mul(&xi.pow(t.b[i][j] as i128));
            if q.q_tilde(perm[i], perm[j]) != expect {
                return Ok(None);
            }
        }
    }
    // diagram matches; recover exponents by discrete log in <ξ>
    let mut upper = BTreeMap::new();
    for i in 0..t.theta {
        for j in (i + 1)..t.theta {
            let entry = *q.get(perm[i], perm[j]);
            let Some(mut e) = entry.dlog(n) else {
                return Ok(None);
            };
            // center the representative and respect the divisibility class
            let class = pair_class(&t, i, j);
            if e.rem_euclid(class) != 0 {
                // the matrix violates simple-root centrality; it is still a
                // diagram match but not an admissible lift
                return Ok(None);
            }
            if e > n as i64 / 2 {
                e -= n as i64;
                if e.rem_euclid(class) != 0 {
                    e += n as i64;
                }
            }
            upper.insert((i, j), e);
        }
    }
    // permute the template data into input coordinates
    let inv: Vec<usize> = {
        let mut v = vec![0usize; perm.len()];
        for (ti, &qi) in perm.iter().enumerate() {
            v[qi] = ti;
        }
        v
    };
    let mut tp = t.clone();
    for a in 0..t.theta {
        for b in 0..t.theta {
            tp.b[a][b] = t.b[inv[a]][inv[b]];
        }
        tp.diag_coeff[a] = t.diag_coeff[inv[a]];
        tp.s_pi[a] = t.s_pi[inv[a]];
    }
    tp.edge_coeff = t
        .edge_coeff
        .iter()
        .map(|(&(i, j), &c)| {
            let (a, b) = (perm[i], perm[j]);
            ((a.min(b), a.max(b)), c)
        })
        .collect();
    tp.nonsimple_pi = t
        .nonsimple_pi
        .iter()
        .map(|v| {
            let mut w = vec![0i64; t.theta];
            for (ti, &x) in v.iter().enumerate() {
                w[perm[ti]] = x;
            }
            w
        })
        .collect();
    tp.odd_vertex = t.odd_vertex.map(|k| perm[k]);
    let mut upper_p = BTreeMap::new();
    for (&(i, j), &v) in &upper {
        let (a, b) = (perm[i], perm[j]);
        if a < b {
            upper_p.insert((a, b), v);
        } else {
            // swapping sides: t_ba = v means the upper entry is b_ij - v and
            // the edge coefficient moves with it; rebuild from scratch below
            upper_p.insert((b, a), tp.b[b][a] - v);
        }
    }
    // when the permutation swapped a pair whose lower entry carried a
    // coefficient, the assembled upper entry must also carry it; assemble
    // manually in that case
    let param = assemble_permuted(&tp, &upper_p, q, n)?;
    let Some(param) = param else {
        return Ok(None);
    };
    let sp = SpecializationPoint::new(xi)?;
    debug_assert_eq!(param.evaluate(&sp), *q);
    let mut divisibility = BTreeMap::new();
    for i in 0..tp.theta {
        for j in (i + 1)..tp.theta {
            divisibility.insert((i, j), pair_class(&tp, i, j));
        }
    }
    let eta = if id == FamilyId::SuperA {
        Some(super_a_eta(&tp)?)
    } else {
        None
    };
    Ok(Some(FamilyLift {
        id,
        params: *params,
        param,
        xi: sp,
        divisibility,
        eta,
    }))
}

/// Assemble a lift in input coordinates, distributing each edge coefficient
/// so that the evaluation reproduces `q` exactly.
fn assemble_permuted(
    t: &Template,
    upper: &BTreeMap<(usize, usize), i64>,
    q: &BraidingMatrix,
    n: u64,
) -> Result<Option<ParamBraidingMatrix>> {
    let theta = t.theta;
    let xi = RootOfUnity::primitive(n)?;
    let mut rows = vec![vec![ParamEntry::one(); theta]; theta];
    for i in 0..theta {
        rows[i][i] = ParamEntry::new(t.diag_coeff[i], t.b[i][i]);
    }
    for i in 0..theta {
        for j in (i + 1)..theta {
            // choose the upper coefficient so that coeff·ξ^{t_ij} = q_ij
            let tij = *upper.get(&(i, j)).unwrap_or(&0);
            let up_coeff = q.get(i, j).mul(&xi.pow(tij as i128).inv());
            let edge = t
                .edge_coeff
                .get(&(i, j))
                .copied()
                .unwrap_or_else(RootOfUnity::one);
            let low_coeff = edge.mul(&up_coeff.inv());
            rows[i][j] = ParamEntry::new(up_coeff, tij);
            rows[j][i] = ParamEntry::new(low_coeff, t.b[i][j] - tij);
            // lifts only make sense when both coefficients stay in the
            // finite coefficient group; they always do (roots of unity)
            let lo = low_coeff.mul(&xi.pow((t.b[i][j] - tij) as i128));
            if lo != *q.get(j, i) {
                return Ok(None);
            }
        }
    }
    Ok(Some(ParamBraidingMatrix::new(rows)?))
}

/// Canonical component list with the small-rank coincidences collapsed the
/// same way `recognize_type` reports them.
pub fn canonical_components(letter: char, rank: usize) -> Vec<(char, usize)> {
    match (letter, rank) {
        (_, 0) => vec![],
        ('B' | 'C', 1) => vec![('A', 1)],
        ('C', 2) => vec![('B', 2)],
        ('D', 1) => vec![('A', 1)],
        ('D', 2) => vec![('A', 1), ('A', 1)],
        ('D', 3) => vec![('A', 3)],
        _ => vec![(letter, rank)],
    }
}

/// Expected g_q from the table's last column, where the table pins it; the
/// parity-dependent rows (super B and super D second factor) return None and
/// are resolved computationally.
pub fn expected_type(id: FamilyId, params: &FamilyParams) -> Option<String> {
    let theta = params.theta;
    let n = params.n;
    let comps: Vec<(char, usize)> = match id {
        FamilyId::CartanA => canonical_components('A', theta),
        FamilyId::CartanB => {
            // interchanged with C when N is even
            if n % 2 == 0 {
                canonical_components('C', theta)
            } else {
                canonical_components('B', theta)
            }
        }
        FamilyId::CartanC => {
            if n % 2 == 0 {
                canonical_components('B', theta)
            } else {
                canonical_components('C', theta)
            }
        }
        FamilyId::CartanD => canonical_components('D', theta),
        FamilyId::CartanE => canonical_components('E', theta),
        FamilyId::CartanF4 => canonical_components('F', 4),
        FamilyId::CartanG2 => canonical_components('G', 2),
        FamilyId::SuperA => {
            let k = params.k.unwrap_or(1);
            let mut v = canonical_components('A', k - 1);
            v.extend(canonical_components('A', theta - k));
            v
        }
        // the table's g column pins the odd-N value; at even N the long and
        // short roots interchange (B ↔ C in the second factor), which the
        // engine resolves computationally
        FamilyId::SuperB => {
            if n % 2 == 0 {
                return None;
            }
            let k = params.k.unwrap_or(1);
            let mut v = canonical_components('C', k);
            v.extend(canonical_components('B', theta - k));
            v
        }
        FamilyId::SuperD => {
            if n % 2 == 0 {
                return None;
            }
            let k = params.k.unwrap_or(2);
            let mut v = canonical_components('D', k);
            v.extend(canonical_components('C', theta - k));
            v
        }
        FamilyId::SuperD21 => vec![('A', 1), ('A', 1), ('A', 1)],
        FamilyId::SuperF4 => {
            if n % 2 == 0 {
                return None;
            }
            vec![('A', 1), ('B', 3)]
        }
        FamilyId::SuperG3 => vec![('A', 1), ('G', 2)],
        FamilyId::Wk4 => vec![('A', 2), ('A', 2)],
        FamilyId::Br2 => vec![('A', 1), ('A', 1)],
    };
    let mut comps = comps;
    comps.sort();
    if comps.is_empty() {
        return Some("0".into());
    }
    Some(
        comps
            .iter()
            .map(|(l, r)| format!("{l}{r}"))
            .collect::<Vec<_>>()
            .join("x"),
    )
}
