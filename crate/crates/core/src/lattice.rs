//! Exact integer and rational linear algebra: Smith and Hermite normal
//! forms, lattice membership and equality, finite quotient invariants.
//! All arithmetic is arbitrary precision.

use crate::error::{EngineError, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::Serialize;

pub type Int = BigInt;
pub type Rat = BigRational;

/// Dense integer matrix, rows × cols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = Int::from(x);
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut m = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self[(i, k)] * &other[(k, j)];
                    m[(i, j)] += t;
                }
            }
        }
        m
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += k * row[b]
    pub fn add_row(&mut self, a: usize, b: usize, k: &Int) {
        for j in 0..self.cols {
            let t = &self[(b, j)] * k;
            self[(a, j)] += t;
        }
    }

    pub fn add_col(&mut self, a: usize, b: usize, k: &Int) {
        for i in 0..self.rows {
            let t = &self[(i, b)] * k;
            self[(i, a)] += t;
        }
    }

    pub fn neg_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let t = -self[(a, j)].clone();
            self[(a, j)] = t;
        }
    }

    pub fn neg_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let t = -self[(i, a)].clone();
            self[(i, a)] = t;
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Determinant by fraction-free Gaussian elimination (Bareiss).
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = t;
                }
                a[(i, k)] = Int::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form: D = U·M·V with U, V unimodular and D diagonal with
/// a divisibility chain d_1 | d_2 | …
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);
    let mut t = 0;
    while t < n {
        // find a pivot with minimal absolute value in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m.rows {
            for j in t..m.cols {
                if !d[(i, j)].is_zero()
                    && pivot.map_or(true, |(pi, pj)| d[(i, j)].abs() < d[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        // clear row and column t
        let mut again = true;
        while again {
            again = false;
            for i in t + 1..m.rows {
                if !d[(i, t)].is_zero() {
                    let q = floor_div(&d[(i, t)], &d[(t, t)]);
                    d.add_row(i, t, &-&q);
                    u.add_row(i, t, &-&q);
                    if !d[(i, t)].is_zero() {
                        d.swap_rows(i, t);
                        u.swap_rows(i, t);
                        again = true;
                    }
                }
            }
            for j in t + 1..m.cols {
                if !d[(t, j)].is_zero() {
                    let q = floor_div(&d[(t, j)], &d[(t, t)]);
                    d.add_col(j, t, &-&q);
                    v.add_col(j, t, &-&q);
                    if !d[(t, j)].is_zero() {
                        d.swap_cols(j, t);
                        v.swap_cols(j, t);
                        again = true;
                    }
                }
            }
        }
        // enforce divisibility: d_t must divide every later entry
        let mut redo = false;
        'outer: for i in t + 1..m.rows {
            for j in t + 1..m.cols {
                if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                    d.add_row(t, i, &Int::one());
                    u.add_row(t, i, &Int::one());
                    redo = true;
                    break 'outer;
                }
            }
        }
        if redo {
            continue;
        }
        if d[(t, t)].is_negative() {
            d.neg_row(t);
            u.neg_row(t);
        }
        t += 1;
    }
    Snf { u, d, v }
}

fn floor_div(a: &Int, b: &Int) -> Int {
    let (q, r) = num::Integer::div_rem(a, b);
    if r.is_zero() || (r.is_negative() == b.is_negative()) {
        q
    } else {
        q - Int::one()
    }
}

/// Invariant factors d_1 | d_2 | … of a finite abelian group presentation;
/// 1-entries omitted, 0-entries (free ranks) kept as 0.
pub fn invariant_factors(snf: &Snf) -> Vec<Int> {
    let n = snf.d.rows.min(snf.d.cols);
    (0..n)
        .map(|i| snf.d[(i, i)].clone())
        .filter(|d| !d.is_one())
        .collect()
}

/// Row Hermite normal form (row span canonical form). Returns the matrix of
/// nonzero rows, pivots positive, entries above a pivot reduced.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let rows = a.rows;
    let cols = a.cols;
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        // euclidean elimination in column c below row r
        loop {
            let mut piv: Option<usize> = None;
            for i in r..rows {
                if !a[(i, c)].is_zero()
                    && piv.map_or(true, |p| a[(i, c)].abs() < a[(p, c)].abs())
                {
                    piv = Some(i);
                }
            }
            let Some(p) = piv else { break };
            a.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if !a[(i, c)].is_zero() {
                    let q = floor_div(&a[(i, c)], &a[(r, c)]);
                    a.add_row(i, r, &-&q);
                    if !a[(i, c)].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[(r, c)].is_zero() {
            continue;
        }
        if a[(r, c)].is_negative() {
            a.neg_row(r);
        }
        for i in 0..r {
            let q = floor_div(&a[(i, c)], &a[(r, c)]);
            if !q.is_zero() {
                a.add_row(i, r, &-&q);
            }
        }
        r += 1;
    }
    // keep the nonzero rows only
    let mut rows_out = Vec::new();
    for i in 0..r {
        rows_out.extend_from_slice(a.row(i));
    }
    IntMatrix {
        rows: r,
        cols,
        data: rows_out,
    }
}

/// Lattice spanned by integer row vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub hnf: IntMatrix,
}

impl Lattice {
    pub fn from_generators(gens: &[Vec<i64>], dim: usize) -> Lattice {
        let mut m = IntMatrix::zero(gens.len().max(1), dim);
        for (i, g) in gens.iter().enumerate() {
            assert_eq!(g.len(), dim);
            for (j, &x) in g.iter().enumerate() {
                m[(i, j)] = Int::from(x);
            }
        }
        Lattice {
            hnf: hermite_normal_form(&m),
        }
    }

    pub fn from_int_rows(m: &IntMatrix) -> Lattice {
        Lattice {
            hnf: hermite_normal_form(m),
        }
    }

    pub fn rank(&self) -> usize {
        self.hnf.rows
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        let mut v: Vec<Int> = v.to_vec();
        let cols = self.hnf.cols;
        assert_eq!(v.len(), cols);
        let mut row = 0;
        for c in 0..cols {
            if row < self.hnf.rows && !self.hnf[(row, c)].is_zero() {
                let q = floor_div(&v[c], &self.hnf[(row, c)]);
                if !(&v[c] % &self.hnf[(row, c)]).is_zero() {
                    return false;
                }
                for j in 0..cols {
                    let t = &self.hnf[(row, j)] * &q;
                    v[j] -= t;
                }
                row += 1;
            } else if !v[c].is_zero() {
                return false;
            }
        }
        true
    }

    pub fn contains_i64(&self, v: &[i64]) -> bool {
        let vi: Vec<Int> = v.iter().map(|&x| Int::from(x)).collect();
        self.contains(&vi)
    }

    pub fn eq_lattice(&self, other: &Lattice) -> bool {
        self.hnf == other.hnf
    }

    /// Join (sum) of two lattices.
    pub fn join(&self, other: &Lattice) -> Lattice {
        let mut m = IntMatrix::zero(self.hnf.rows + other.hnf.rows, self.hnf.cols);
        for i in 0..self.hnf.rows {
            for j in 0..self.hnf.cols {
                m[(i, j)] = self.hnf[(i, j)].clone();
            }
        }
        for i in 0..other.hnf.rows {
            for j in 0..other.hnf.cols {
                m[(self.hnf.rows + i, j)] = other.hnf[(i, j)].clone();
            }
        }
        Lattice::from_int_rows(&m)
    }
}

/// Invariant factors of a finite abelian quotient, 1-entries omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LatticeQuotient {
    pub invariant_factors: Vec<String>,
    pub free_rank: usize,
}

impl LatticeQuotient {
    pub fn trivial() -> Self {
        LatticeQuotient::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    pub fn order(&self) -> Option<Int> {
        if self.free_rank > 0 {
            return None;
        }
        let mut o = Int::one();
        for f in &self.invariant_factors {
            o *= f.parse::<Int>().ok()?;
        }
        Some(o)
    }
}

/// Structure of (A + B)/B where A is spanned by `gens` (rational rows) and B
/// is the lattice spanned by the rational rows `basis` (full rank assumed in
/// its span). Computed by clearing denominators and Smith normal form.
pub fn quotient_mod_lattice(gens: &[Vec<Rat>], basis: &[Vec<Rat>]) -> Result<LatticeQuotient> {
    let dim = basis.first().map(|r| r.len()).unwrap_or(0);
    let rank = basis.len();
    // express each generator in coordinates with respect to `basis`
    let mut bmat = QMatrix::from_rows(basis.to_vec());
    let coords: Vec<Vec<Rat>> = gens
        .iter()
        .map(|g| {
            bmat.solve_row(g)
                .ok_or_else(|| EngineError::InternalInvariantViolation(
                    "quotient generator outside the rational span of the lattice".into(),
                ))
        })
        .collect::<Result<_>>()?;
    let _ = dim;
    // common denominator D: quotient of (coords + Z^rank)/Z^rank is computed
    // as SNF of [D*coords ; D*I] over Z/D
    let mut den = Int::one();
    for row in &coords {
        for x in row {
            den = num::Integer::lcm(&den, x.denom());
        }
    }
    let mut m = IntMatrix::zero(coords.len() + rank, rank);
    for (i, row) in coords.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            m[(i, j)] = (x * Rat::from(den.clone())).to_integer();
        }
    }
    for j in 0..rank {
        m[(coords.len() + j, j)] = den.clone();
    }
    let snf = smith_normal_form(&m);
    let mut factors = Vec::new();
    for i in 0..rank {
        let d = &snf.d[(i, i)];
        if d.is_zero() {
            return Err(EngineError::InternalInvariantViolation(
                "quotient by full-rank lattice cannot have free part".into(),
            ));
        }
        let f = &den / d;
        if !f.is_one() {
            factors.push(f.to_string());
        }
    }
    factors.reverse(); // SNF gives d_1 | d_2 | …, so den/d_i divides backwards
    Ok(LatticeQuotient {
        invariant_factors: factors,
        free_rank: 0,
    })
}

/// Dense rational matrix with row-reduction based solving.
#[derive(Clone, Debug)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rat>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, x) in row.into_iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut m = QMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self[(i, k)] * &other[(k, j)];
                    m[(i, j)] += t;
                }
            }
        }
        m
    }

    pub fn transpose(&self) -> QMatrix {
        let mut m = QMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for k in 0..n {
            let piv = (k..n).find(|&i| !a[(i, k)].is_zero());
            let Some(p) = piv else { return Rat::zero() };
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            det *= a[(k, k)].clone();
            let inv = a[(k, k)].recip();
            for j in k..n {
                let t = &a[(k, j)] * &inv;
                a[(k, j)] = t;
            }
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in k..n {
                    let t = &a[(k, j)] * &f;
                    a[(i, j)] -= t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMatrix::identity(n);
        for k in 0..n {
            let p = (k..n).find(|&i| !a[(i, k)].is_zero())?;
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                    inv.data.swap(k * n + j, p * n + j);
                }
            }
            let f = a[(k, k)].recip();
            for j in 0..n {
                let t = &a[(k, j)] * &f;
                a[(k, j)] = t;
                let t = &inv[(k, j)] * &f;
                inv[(k, j)] = t;
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in 0..n {
                    let t = &a[(k, j)] * &f;
                    a[(i, j)] -= t;
                    let t = &inv[(k, j)] * &f;
                    inv[(i, j)] -= t;
                }
            }
        }
        Some(inv)
    }

    /// Solve x·self = target for a row vector x, if target is in the row span.
    pub fn solve_row(&mut self, target: &[Rat]) -> Option<Vec<Rat>> {
        // solve via transpose: self^T x^T = target^T
        let at = self.transpose();
        solve_linear(&at, target)
    }

    /// Kernel basis (column vectors x with self·x = 0).
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let mut a = self.clone();
        let n = self.cols;
        let mut pivots: Vec<Option<usize>> = vec![None; n];
        let mut r = 0;
        for c in 0..n {
            let p = (r..a.rows).find(|&i| !a[(i, c)].is_zero());
            let Some(p) = p else { continue };
            for j in 0..n {
                a.data.swap(r * n + j, p * n + j);
            }
            let f = a[(r, c)].recip();
            for j in 0..n {
                let t = &a[(r, j)] * &f;
                a[(r, j)] = t;
            }
            for i in 0..a.rows {
                if i != r && !a[(i, c)].is_zero() {
                    let f = a[(i, c)].clone();
                    for j in 0..n {
                        let t = &a[(r, j)] * &f;
                        a[(i, j)] -= t;
                    }
                }
            }
            pivots[c] = Some(r);
            r += 1;
        }
        let mut basis = Vec::new();
        for c in 0..n {
            if pivots[c].is_some() {
                continue;
            }
            let mut v = vec![Rat::zero(); n];
            v[c] = Rat::one();
            for (cc, piv) in pivots.iter().enumerate() {
                if let Some(rr) = piv {
                    v[cc] = -a[(*rr, c)].clone();
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.cols - self.kernel().len()
    }
}

/// Solve A·x = b for a column vector x, if consistent.
fn solve_linear(a: &QMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.rows, b.len());
    let n = a.cols;
    let mut aug = QMatrix::zero(a.rows, n + 1);
    for i in 0..a.rows {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let p = (r..aug.rows).find(|&i| !aug[(i, c)].is_zero());
        let Some(p) = p else { continue };
        for j in 0..=n {
            aug.data.swap(r * (n + 1) + j, p * (n + 1) + j);
        }
        let f = aug[(r, c)].recip();
        for j in 0..=n {
            let t = &aug[(r, j)] * &f;
            aug[(r, j)] = t;
        }
        for i in 0..aug.rows {
            if i != r && !aug[(i, c)].is_zero() {
                let f = aug[(i, c)].clone();
                for j in 0..=n {
                    let t = &aug[(r, j)] * &f;
                    aug[(i, j)] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    for i in r..aug.rows {
        if !aug[(i, n)].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = aug[(row, n)].clone();
    }
    Some(x)
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Integer kernel of an integer matrix (rows are relations); returns a basis
/// of primitive integer vectors.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<Int>> {
    let q = QMatrix::from_rows(
        (0..m.rows)
            .map(|i| (0..m.cols).map(|j| Rat::from(m[(i, j)].clone())).collect())
            .collect(),
    );
    q.kernel()
        .into_iter()
        .map(|v| {
            let mut den = Int::one();
            for x in &v {
                den = num::Integer::lcm(&den, x.denom());
            }
            let ints: Vec<Int> = v.iter().map(|x| (x * Rat::from(den.clone())).to_integer()).collect();
            let mut g = Int::zero();
            for x in &ints {
                g = num::Integer::gcd(&g, x);
            }
            if g.is_zero() || g.is_one() {
                ints
            } else {
                ints.into_iter().map(|x| x / &g).collect()
            }
        })
        .collect()
}

/// Result of comparing Λ'_q (Cartan-root lattice pairs) against Λ_q
/// (with the 𝙽-rescaled generators over all of Δ_+).
#[derive(Clone, Debug, Serialize)]
pub struct ZqLatticeComparison {
    pub equal: bool,
    /// minimal extra generators of Λ over Λ' (per K/L copy, in ℤ^θ)
    pub extra_generators: Vec<Vec<i64>>,
    /// a root η ∈ Δ_+ ∖ 𝔒_+ with Λ = Λ' + ℤ·𝙽η, when one exists
    pub eta_witness: Option<Vec<i64>>,
}

/// Models Λ' as the span of N_β·β over β ∈ 𝔒_+ and Λ as Λ' plus 𝙽·β over
/// β ∈ Δ_+ (one copy; the K and L copies are identical), and decides
/// equality via Hermite normal forms.
pub fn zq_lattice_comparison(
    cartan_scaled: &[Vec<i64>],
    all_roots: &[Vec<i64>],
    non_cartan_roots: &[Vec<i64>],
    big_n: u64,
    theta: usize,
) -> Result<ZqLatticeComparison> {
    let l_prime = Lattice::from_generators(cartan_scaled, theta);
    let scaled: Vec<Vec<i64>> = all_roots
        .iter()
        .map(|b| b.iter().map(|&x| x * big_n as i64).collect())
        .collect();
    let l_full = l_prime.join(&Lattice::from_generators(&scaled, theta));
    let equal = l_prime.eq_lattice(&l_full);
    let mut extra = Vec::new();
    let mut eta_witness = None;
    if !equal {
        // adapted basis: SNF of the coordinates of Λ' generators in a basis
        // of Λ exposes the quotient generators
        let bl = &l_full.hnf;
        let mut blq = QMatrix::from_rows(
            (0..bl.rows)
                .map(|i| (0..bl.cols).map(|j| Rat::from(bl[(i, j)].clone())).collect())
                .collect(),
        );
        let mut coord_rows = Vec::new();
        for g in cartan_scaled {
            let grat: Vec<Rat> = g.iter().map(|&x| Rat::from(Int::from(x))).collect();
            let coords = blq.solve_row(&grat).ok_or_else(|| {
                EngineError::InternalInvariantViolation("Λ' not inside Λ".into())
            })?;
            coord_rows.push(
                coords
                    .iter()
                    .map(|x| {
                        debug_assert!(x.is_integer());
                        x.to_integer()
                    })
                    .collect::<Vec<Int>>(),
            );
        }
        let mut c = IntMatrix::zero(coord_rows.len(), bl.rows);
        for (i, row) in coord_rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                c[(i, j)] = x.clone();
            }
        }
        let snf = smith_normal_form(&c);
        // new basis of Λ: rows of V^{-1}·B_L ~ columns of V index the adapted
        // basis; V is unimodular so invert over the rationals exactly
        let vq = QMatrix::from_rows(
            (0..snf.v.rows)
                .map(|i| {
                    (0..snf.v.cols)
                        .map(|j| Rat::from(snf.v[(i, j)].clone()))
                        .collect()
                })
                .collect(),
        );
        let vinv = vq.inverse().ok_or(EngineError::NonDegeneracyViolated)?;
        let blq2 = QMatrix::from_rows(
            (0..bl.rows)
                .map(|i| (0..bl.cols).map(|j| Rat::from(bl[(i, j)].clone())).collect())
                .collect(),
        );
        // L' gens = C·B_L = U^{-1}·D·(V^{-1}·B_L), so V^{-1}·B_L is a basis
        // of L adapted to L': L' = ⟨d_i · b̂_i⟩
        let adapted = vinv.mul(&blq2);
        let n = snf.d.rows.min(snf.d.cols);
        for t in 0..bl.rows {
            let dt = if t < n { snf.d[(t, t)].clone() } else { Int::zero() };
            if !dt.is_one() {
                let row: Vec<i64> = (0..bl.cols)
                    .map(|j| {
                        let x = &adapted[(t, j)];
                        debug_assert!(x.is_integer());
                        i64::try_from(x.to_integer()).expect("adapted basis overflow")
                    })
                    .collect();
                extra.push(row);
            }
        }
        // witness: some η ∈ Δ_+ ∖ 𝔒_+ with Λ = Λ' + ℤ·𝙽η
        for v in non_cartan_roots {
            let g: Vec<i64> = v.iter().map(|&x| x * big_n as i64).collect();
            let candidate = l_prime.join(&Lattice::from_generators(&[g], theta));
            if candidate.eq_lattice(&l_full) {
                eta_witness = Some(v.clone());
                break;
            }
        }
    }
    Ok(ZqLatticeComparison {
        equal,
        extra_generators: extra,
        eta_witness,
    })
}

/// C̃ invariants: the finite group (M·P∨ + P∨)/P∨ for the rational operator
/// M and coweight lattice basis P∨ (rows). `source` selects which basis
/// vectors of P∨ are pushed through M (all, unless a super-A central
/// direction is excluded).
pub fn ctilde_invariants(m: &QMatrix, coweights: &[Vec<Rat>], source: &[usize]) -> Result<LatticeQuotient> {
    if m.rank() < m.rows {
        return Err(EngineError::NonDegeneracyViolated);
    }
    let gens: Vec<Vec<Rat>> = source
        .iter()
        .map(|&i| {
            let w = &coweights[i];
            (0..m.cols)
                .map(|j| {
                    (0..m.rows)
                        .map(|k| &m[(j, k)] * &w[k])
                        .fold(Rat::zero(), |a, b| a + b)
                })
                .collect()
        })
        .collect();
    quotient_mod_lattice(&gens, coweights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int_mat(rows: Vec<Vec<i64>>) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn snf_identity_and_zero() {
        let snf = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(snf.d, IntMatrix::identity(3));
        let z = IntMatrix::zero(2, 3);
        let snf = smith_normal_form(&z);
        assert_eq!(snf.d, IntMatrix::zero(2, 3));
    }

    #[test]
    fn snf_diag_2_3() {
        // elementary row/column reduction oracle: diag(2,3) → diag(1,6)
        let snf = smith_normal_form(&int_mat(vec![vec![2, 0], vec![0, 3]]));
        assert_eq!(snf.d[(0, 0)], Int::from(1));
        assert_eq!(snf.d[(1, 1)], Int::from(6));
        let prod = snf.u.mul(&int_mat(vec![vec![2, 0], vec![0, 3]])).mul(&snf.v);
        assert_eq!(prod, snf.d);
    }

    #[test]
    fn hnf_membership() {
        let l = Lattice::from_generators(&[vec![2, 0], vec![0, 3]], 2);
        assert!(l.contains_i64(&[2, 3]));
        assert!(!l.contains_i64(&[1, 0]));
        assert!(l.contains_i64(&[-4, 9]));
    }

    #[test]
    fn quotient_half_integer() {
        // M = (1/2) on rank-1 P∨ = ℤ → invariant factor 2
        let m = QMatrix::from_rows(vec![vec![Rat::new(Int::from(1), Int::from(2))]]);
        let coweights = vec![vec![Rat::one()]];
        let q = ctilde_invariants(&m, &coweights, &[0]).unwrap();
        assert_eq!(q.invariant_factors, vec!["2".to_string()]);
    }

    #[test]
    fn quotient_identity_trivial() {
        let m = QMatrix::identity(2);
        let coweights = vec![
            vec![Rat::one(), Rat::zero()],
            vec![Rat::zero(), Rat::one()],
        ];
        let q = ctilde_invariants(&m, &coweights, &[0, 1]).unwrap();
        assert!(q.is_trivial());
    }

    #[test]
    fn qmatrix_kernel_and_inverse() {
        let m = QMatrix::from_rows(vec![
            vec![Rat::from(Int::from(1)), Rat::from(Int::from(2))],
            vec![Rat::from(Int::from(2)), Rat::from(Int::from(4))],
        ]);
        assert_eq!(m.kernel().len(), 1);
        assert!(m.inverse().is_none());
        let id = QMatrix::identity(3);
        assert_eq!(id.inverse().unwrap().data, id.data);
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-9i64..10, c), r)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn snf_roundtrip(rows in arb_matrix()) {
            let m = int_mat(rows);
            let snf = smith_normal_form(&m);
            // U·M·V = D
            prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d.clone());
            // |det U| = |det V| = 1
            prop_assert_eq!(snf.u.det().abs(), Int::one());
            prop_assert_eq!(snf.v.det().abs(), Int::one());
            // divisibility chain
            let n = snf.d.rows.min(snf.d.cols);
            for i in 0..n.saturating_sub(1) {
                let a = &snf.d[(i, i)];
                let b = &snf.d[(i + 1, i + 1)];
                if !a.is_zero() {
                    prop_assert!((b % a).is_zero());
                } else {
                    prop_assert!(b.is_zero());
                }
            }
            // off-diagonal zero
            for i in 0..snf.d.rows {
                for j in 0..snf.d.cols {
                    if i != j {
                        prop_assert!(snf.d[(i, j)].is_zero());
                    }
                }
            }
        }
    }
}
