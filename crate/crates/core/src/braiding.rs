//! Braiding matrices, the bilinear form q(α,β), Dynkin diagrams and the
//! one-parameter (ν-dependent) matrices together with their evaluation.

use crate::cyclotomic::RootOfUnity;
use crate::error::{EngineError, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// θ×θ matrix of roots of unity, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidingMatrix {
    theta: usize,
    entries: Vec<RootOfUnity>,
}

impl BraidingMatrix {
    pub fn new(rows: Vec<Vec<RootOfUnity>>) -> Result<Self> {
        let theta = rows.len();
        if theta == 0 {
            return Err(EngineError::UnsupportedParameters("rank must be >= 1".into()));
        }
        let mut entries = Vec::with_capacity(theta * theta);
        for row in &rows {
            if row.len() != theta {
                return Err(EngineError::DimensionError {
                    expected: theta,
                    got: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Ok(BraidingMatrix { theta, entries })
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn get(&self, i: usize, j: usize) -> &RootOfUnity {
        &self.entries[i * self.theta + j]
    }

    pub fn entries(&self) -> &[RootOfUnity] {
        &self.entries
    }

    /// q_ii
    pub fn diag(&self, i: usize) -> &RootOfUnity {
        self.get(i, i)
    }

    /// q̃_ij = q_ij q_ji
    pub fn q_tilde(&self, i: usize, j: usize) -> RootOfUnity {
        self.get(i, j).mul(self.get(j, i))
    }

    /// The ℤ-bilinear form q(α,β) = ∏ q_ij^{α_i β_j}.
    pub fn bilinear(&self, alpha: &[i64], beta: &[i64]) -> Result<RootOfUnity> {
        if alpha.len() != self.theta {
            return Err(EngineError::DimensionError {
                expected: self.theta,
                got: alpha.len(),
            });
        }
        if beta.len() != self.theta {
            return Err(EngineError::DimensionError {
                expected: self.theta,
                got: beta.len(),
            });
        }
        let mut acc = RootOfUnity::one();
        for i in 0..self.theta {
            if alpha[i] == 0 {
                continue;
            }
            for j in 0..self.theta {
                if beta[j] == 0 {
                    continue;
                }
                let e = alpha[i] as i128 * beta[j] as i128;
                acc = acc.mul(&self.get(i, j).pow(e));
            }
        }
        Ok(acc)
    }

    /// Order of q(β,β); the per-root order N_β.
    pub fn root_order(&self, beta: &[i64]) -> Result<u64> {
        Ok(self.bilinear(beta, beta)?.order())
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.theta {
            for j in (i + 1)..self.theta {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn dynkin_diagram(&self) -> DynkinDiagram {
        let theta = self.theta;
        let vertices: Vec<RootOfUnity> = (0..theta).map(|i| *self.diag(i)).collect();
        let mut edges = Vec::new();
        for i in 0..theta {
            for j in (i + 1)..theta {
                let t = self.q_tilde(i, j);
                if !t.is_one() {
                    edges.push((i, j, t));
                }
            }
        }
        // connectivity by union-find over the labelled edges
        let mut parent: Vec<usize> = (0..theta).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(i, j, _) in &edges {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        let connected = (0..theta).all(|i| find(&mut parent, i) == root);
        DynkinDiagram {
            vertices,
            edges,
            symmetric: self.is_symmetric(),
            connected,
        }
    }

    /// All roots generated from the entries lie in the cyclic group of order
    /// lcm of the entry orders; keeping that lcm modest guarantees exactness
    /// of every downstream u64 computation.
    pub fn validate_orders(&self) -> Result<()> {
        let mut l: u128 = 1;
        for e in &self.entries {
            let o = e.order() as u128;
            l = l / num::integer::gcd(l, o) * o;
            if l > (1u128 << 40) {
                return Err(EngineError::UnsupportedParameters(
                    "lcm of entry orders exceeds 2^40; exact arithmetic not supported".into(),
                ));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BraidingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BraidingMatrix θ={}", self.theta)?;
        for i in 0..self.theta {
            let row: Vec<String> = (0..self.theta).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Dynkin diagram of a braiding matrix: vertex labels q_ii and edge labels
/// q̃_ij ≠ 1. Determines the matrix only up to twist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DynkinDiagram {
    pub vertices: Vec<RootOfUnity>,
    pub edges: Vec<(usize, usize, RootOfUnity)>,
    pub symmetric: bool,
    pub connected: bool,
}

impl DynkinDiagram {
    pub fn edge(&self, i: usize, j: usize) -> RootOfUnity {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.edges
            .iter()
            .find(|&&(x, y, _)| x == a && y == b)
            .map(|&(_, _, t)| t)
            .unwrap_or_else(RootOfUnity::one)
    }
}

/// Unit Laurent monomial `coeff · ν^exp`; an entry of a parametric matrix.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamEntry {
    pub coeff: RootOfUnity,
    pub exp: i64,
}

impl ParamEntry {
    pub fn new(coeff: RootOfUnity, exp: i64) -> Self {
        ParamEntry { coeff, exp }
    }

    pub fn one() -> Self {
        ParamEntry {
            coeff: RootOfUnity::one(),
            exp: 0,
        }
    }

    pub fn nu(exp: i64) -> Self {
        ParamEntry {
            coeff: RootOfUnity::one(),
            exp,
        }
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.exp == 0
    }

    pub fn mul(&self, other: &ParamEntry) -> ParamEntry {
        ParamEntry {
            coeff: self.coeff.mul(&other.coeff),
            exp: self
                .exp
                .checked_add(other.exp)
                .expect("parametric exponent overflow"),
        }
    }

    pub fn pow(&self, k: i64) -> ParamEntry {
        ParamEntry {
            coeff: self.coeff.pow(k as i128),
            exp: self.exp.checked_mul(k).expect("parametric exponent overflow"),
        }
    }

    pub fn inv(&self) -> ParamEntry {
        ParamEntry {
            coeff: self.coeff.inv(),
            exp: -self.exp,
        }
    }

    pub fn eval(&self, xi: &RootOfUnity) -> RootOfUnity {
        self.coeff.mul(&xi.pow(self.exp as i128))
    }
}

impl fmt::Display for ParamEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_one() {
            write!(f, "v^{}", self.exp)
        } else {
            write!(f, "{}*v^{}", self.coeff, self.exp)
        }
    }
}

impl fmt::Debug for ParamEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Specialization point ξ with 2 ≤ ord ξ < ∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecializationPoint {
    pub xi: RootOfUnity,
}

impl SpecializationPoint {
    pub fn new(xi: RootOfUnity) -> Result<Self> {
        if xi.order() < 2 {
            return Err(EngineError::UnsupportedParameters(
                "specialization point must have order >= 2".into(),
            ));
        }
        Ok(SpecializationPoint { xi })
    }

    pub fn order(&self) -> u64 {
        self.xi.order()
    }
}

/// θ×θ matrix of unit Laurent monomials q_ij = p_ij ν^{t_ij}.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamBraidingMatrix {
    theta: usize,
    entries: Vec<ParamEntry>,
}

impl ParamBraidingMatrix {
    pub fn new(rows: Vec<Vec<ParamEntry>>) -> Result<Self> {
        let theta = rows.len();
        if theta == 0 {
            return Err(EngineError::UnsupportedParameters("rank must be >= 1".into()));
        }
        let mut entries = Vec::with_capacity(theta * theta);
        for row in &rows {
            if row.len() != theta {
                return Err(EngineError::DimensionError {
                    expected: theta,
                    got: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Ok(ParamBraidingMatrix { theta, entries })
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn get(&self, i: usize, j: usize) -> &ParamEntry {
        &self.entries[i * self.theta + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: ParamEntry) {
        self.entries[i * self.theta + j] = e;
    }

    /// Integer exponent matrix T = (t_ij).
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        (0..self.theta)
            .map(|i| (0..self.theta).map(|j| self.get(i, j).exp).collect())
            .collect()
    }

    pub fn evaluate(&self, xi: &SpecializationPoint) -> BraidingMatrix {
        BraidingMatrix {
            theta: self.theta,
            entries: self.entries.iter().map(|e| e.eval(&xi.xi)).collect(),
        }
    }

    /// Parametric bilinear form: q(α,β) as a unit monomial.
    pub fn bilinear(&self, alpha: &[i64], beta: &[i64]) -> Result<ParamEntry> {
        if alpha.len() != self.theta || beta.len() != self.theta {
            return Err(EngineError::DimensionError {
                expected: self.theta,
                got: alpha.len().max(beta.len()),
            });
        }
        let mut coeff = RootOfUnity::one();
        let mut exp: i128 = 0;
        for i in 0..self.theta {
            if alpha[i] == 0 {
                continue;
            }
            for j in 0..self.theta {
                if beta[j] == 0 {
                    continue;
                }
                let e = alpha[i] as i128 * beta[j] as i128;
                let entry = self.get(i, j);
                coeff = coeff.mul(&entry.coeff.pow(e));
                exp += entry.exp as i128 * e;
            }
        }
        let exp = i64::try_from(exp).map_err(|_| {
            EngineError::InternalInvariantViolation("parametric exponent overflow".into())
        })?;
        Ok(ParamEntry { coeff, exp })
    }

    /// The integer bilinear form t(α,β) = Σ t_ij α_i β_j of the exponents.
    pub fn t_form(&self, alpha: &[i64], beta: &[i64]) -> i64 {
        let mut acc: i128 = 0;
        for i in 0..self.theta {
            for j in 0..self.theta {
                acc += self.get(i, j).exp as i128 * alpha[i] as i128 * beta[j] as i128;
            }
        }
        i64::try_from(acc).expect("t-form overflow")
    }

    pub fn q_tilde(&self, i: usize, j: usize) -> ParamEntry {
        self.get(i, j).mul(self.get(j, i))
    }

    /// Generalized Cartan entry of the parametric matrix, solved exactly on
    /// monomials (no scan bound needed).
    pub fn cartan_entry(&self, i: usize, j: usize) -> Result<i64> {
        if i == j {
            return Ok(2);
        }
        let qii = self.get(i, i);
        let qt = self.q_tilde(i, j);
        let mut best: Option<u64> = None;
        // clause 1: (n+1)_{q_ii} = 0 needs q_ii constant of finite order > 1
        if qii.exp == 0 && !qii.coeff.is_one() {
            best = Some(qii.coeff.order() - 1);
        }
        // clause 2: q_ii^n q_ij q_ji = 1 as a monomial
        if qii.exp != 0 {
            if qt.exp % qii.exp == 0 {
                let n = -(qt.exp / qii.exp);
                if n >= 0 && qii.coeff.pow(n as i128).mul(&qt.coeff).is_one() {
                    let n = n as u64;
                    best = Some(best.map_or(n, |b| b.min(n)));
                }
            }
        } else if qt.exp == 0 {
            let period = qii.coeff.order();
            for n in 0..period {
                if qii.coeff.pow(n as i128).mul(&qt.coeff).is_one() {
                    best = Some(best.map_or(n, |b| b.min(n)));
                    break;
                }
            }
        }
        match best {
            Some(n) => Ok(-(n as i64)),
            None => Err(EngineError::NotArithmetic { i, j, bound: 0 }),
        }
    }

    /// Matrix reflection ρ_i for the parametric matrix:
    /// (ρ_i q)_{jk} = q_jk q_ik^{-c_ij} q_ji^{-c_ik} q_ii^{c_ij c_ik}.
    pub fn reflect(&self, i: usize) -> Result<ParamBraidingMatrix> {
        let theta = self.theta;
        let mut c = vec![0i64; theta];
        for j in 0..theta {
            c[j] = self.cartan_entry(i, j)?;
        }
        let mut entries = Vec::with_capacity(theta * theta);
        for j in 0..theta {
            for k in 0..theta {
                let e = self
                    .get(j, k)
                    .mul(&self.get(i, k).pow(-c[j]))
                    .mul(&self.get(j, i).pow(-c[k]))
                    .mul(&self.get(i, i).pow(c[j].checked_mul(c[k]).expect("c overflow")));
                entries.push(e);
            }
        }
        Ok(ParamBraidingMatrix { theta, entries })
    }
}

impl fmt::Debug for ParamBraidingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ParamBraidingMatrix θ={}", self.theta)?;
        for i in 0..self.theta {
            let row: Vec<String> = (0..self.theta).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, m: u64) -> RootOfUnity {
        RootOfUnity::new(a, m).unwrap()
    }

    /// Rank-2 matrix of super type A(1|0): both vertices -1,
    /// q_12 q_21 = ξ with ord ξ = n.
    pub fn super_a10(n: u64) -> BraidingMatrix {
        let xi = r(1, n);
        BraidingMatrix::new(vec![
            vec![RootOfUnity::minus_one(), xi],
            vec![RootOfUnity::one(), RootOfUnity::minus_one()],
        ])
        .unwrap()
    }

    #[test]
    fn bilinear_basis_and_zero() {
        let q = super_a10(5);
        assert_eq!(q.bilinear(&[1, 0], &[0, 1]).unwrap(), r(1, 5));
        assert!(q.bilinear(&[0, 0], &[3, -2]).unwrap().is_one());
        assert!(q.bilinear(&[1], &[0, 1]).is_err());
    }

    #[test]
    fn bilinear_super_a10_full_root() {
        // q(α1+α2, α1+α2) = q11 q12 q21 q22 = ξ for the super A(1|0) matrix
        let q = super_a10(5);
        let v = [1i64, 1];
        assert_eq!(q.bilinear(&v, &v).unwrap(), r(1, 5));
        assert_eq!(q.root_order(&v).unwrap(), 5);
    }

    #[test]
    fn diagram_super_a10() {
        let d = super_a10(7).dynkin_diagram();
        assert_eq!(d.vertices, vec![RootOfUnity::minus_one(), RootOfUnity::minus_one()]);
        assert_eq!(d.edges, vec![(0, 1, r(1, 7))]);
        assert!(d.connected);
    }

    #[test]
    fn diagram_edgeless() {
        let q = BraidingMatrix::new(vec![
            vec![r(1, 3), r(1, 4)],
            vec![r(3, 4), r(1, 3)],
        ])
        .unwrap();
        let d = q.dynkin_diagram();
        assert!(d.edges.is_empty());
        assert!(!d.connected);
    }

    #[test]
    fn evaluate_param() {
        // all exponents zero → coefficient matrix unchanged
        let p = ParamBraidingMatrix::new(vec![
            vec![ParamEntry::new(r(1, 3), 0), ParamEntry::one()],
            vec![ParamEntry::one(), ParamEntry::new(r(1, 2), 0)],
        ])
        .unwrap();
        let xi = SpecializationPoint::new(r(1, 5)).unwrap();
        let q = p.evaluate(&xi);
        assert_eq!(*q.get(0, 0), r(1, 3));
        assert_eq!(*q.get(1, 1), r(1, 2));
        // ν^k evaluates to ξ^k
        let p2 = ParamBraidingMatrix::new(vec![vec![ParamEntry::nu(3)]]).unwrap();
        assert_eq!(*p2.evaluate(&xi).get(0, 0), r(3, 5));
    }

    #[test]
    fn param_cartan_entry_cartan_a2() {
        // A2: q_ii = ν, q̃ = ν^{-1} → c_12 = -1
        let p = ParamBraidingMatrix::new(vec![
            vec![ParamEntry::nu(1), ParamEntry::nu(0)],
            vec![ParamEntry::nu(-1), ParamEntry::nu(1)],
        ])
        .unwrap();
        assert_eq!(p.cartan_entry(0, 1).unwrap(), -1);
        assert_eq!(p.cartan_entry(1, 0).unwrap(), -1);
    }

    #[test]
    fn param_reflect_involution() {
        let p = ParamBraidingMatrix::new(vec![
            vec![ParamEntry::nu(1), ParamEntry::nu(0)],
            vec![ParamEntry::nu(-1), ParamEntry::nu(1)],
        ])
        .unwrap();
        let rr = p.reflect(0).unwrap().reflect(0).unwrap();
        assert_eq!(rr, p);
    }
}
