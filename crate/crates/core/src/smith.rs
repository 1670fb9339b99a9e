//! Smith normal form over `ℤ` with unimodular witnesses, invariant factors,
//! a fraction-free determinant, and explicit `2×2` diagonalization witnesses.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::matrix::IntMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SmithError {
    #[error("determinant needs a square matrix, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("precondition of variant {variant} failed: {condition}")]
    Precondition { variant: MtVariant, condition: String },
    #[error("unknown variant {0:?}; expected i, ii, iii or iv")]
    UnknownVariant(String),
}

/// `d = p · a · q` with `p`, `q` unimodular and `d` diagonal, its entries
/// nonnegative with `d₁ | d₂ | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub p: IntMatrix,
    pub q: IntMatrix,
}

impl SnfResult {
    /// Re-checks `p·a·q = d`, the diagonal shape, and the divisibility chain.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let Ok(pa) = self.p.checked_mul(a) else {
            return false;
        };
        let Ok(paq) = pa.checked_mul(&self.q) else {
            return false;
        };
        paq == self.d && self.d.is_diagonal() && is_divisor_chain(&self.d.diagonal_entries())
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        self.d.diagonal_entries()
    }
}

fn divides(a: &BigInt, b: &BigInt) -> bool {
    if a.is_zero() {
        b.is_zero()
    } else {
        (b % a).is_zero()
    }
}

fn is_divisor_chain(diag: &[BigInt]) -> bool {
    diag.iter().all(|d| !d.is_negative()) && diag.windows(2).all(|w| divides(&w[0], &w[1]))
}

/// Invariant factors `d₁ | d₂ | …` (all `≥ 2`) and a free rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianInvariants {
    factors: Vec<BigInt>,
    free_rank: usize,
}

impl AbelianInvariants {
    /// Validates the chain; factors must be `≥ 2` and each divide the next.
    pub fn new(factors: Vec<BigInt>, free_rank: usize) -> Option<Self> {
        let two = BigInt::from(2);
        let ok = factors.iter().all(|f| f >= &two) && factors.windows(2).all(|w| divides(&w[0], &w[1]));
        ok.then_some(AbelianInvariants { factors, free_rank })
    }

    pub fn trivial() -> Self {
        AbelianInvariants {
            factors: Vec::new(),
            free_rank: 0,
        }
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// Group order, defined for finite groups only.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.factors.iter().product())
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(", "))?;
        if self.free_rank > 0 {
            write!(f, " + Z^{}", self.free_rank)?;
        }
        Ok(())
    }
}

/// Extended gcd: `(g, s, t)` with `s·a + t·b = g ≥ 0`.
pub fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let quo = old_r.div_floor(&r);
        let next_r = &old_r - &quo * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &quo * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &quo * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Working state of one diagonalization; witnesses are tracked only on request.
struct Reducer {
    d: IntMatrix,
    p: Option<IntMatrix>,
    q: Option<IntMatrix>,
}

impl Reducer {
    fn new(a: &IntMatrix, track: bool) -> Self {
        Reducer {
            d: a.clone(),
            p: track.then(|| IntMatrix::identity(a.rows())),
            q: track.then(|| IntMatrix::identity(a.cols())),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        if let Some(p) = &mut self.p {
            p.swap_rows(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        if let Some(q) = &mut self.q {
            q.swap_cols(a, b);
        }
    }

    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.d.add_row_multiple(dst, src, k);
        if let Some(p) = &mut self.p {
            p.add_row_multiple(dst, src, k);
        }
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.d.add_col_multiple(dst, src, k);
        if let Some(q) = &mut self.q {
            q.add_col_multiple(dst, src, k);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        if let Some(p) = &mut self.p {
            p.negate_row(i);
        }
    }

    fn combine_rows(&mut self, a: usize, b: usize, coeffs: [&BigInt; 4]) {
        self.d.combine_rows(a, b, coeffs);
        if let Some(p) = &mut self.p {
            p.combine_rows(a, b, coeffs);
        }
    }

    /// Entry of least nonzero absolute value in the trailing submatrix
    /// starting at `(k, k)`, first in row-major order on ties.
    fn pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for i in k..self.d.rows() {
            for j in k..self.d.cols() {
                let v = &self.d[(i, j)];
                if v.is_zero() {
                    continue;
                }
                let a = v.abs();
                if best.as_ref().map_or(true, |(_, b)| &a < b) {
                    best = Some(((i, j), a));
                }
            }
        }
        best.map(|(pos, _)| pos)
    }

    fn diagonalize(&mut self) {
        let (m, n) = (self.d.rows(), self.d.cols());
        for k in 0..m.min(n) {
            loop {
                let Some((i, j)) = self.pivot(k) else {
                    return;
                };
                self.swap_rows(k, i);
                self.swap_cols(k, j);
                let pivot = self.d[(k, k)].clone();
                let mut clean = true;
                for i in k + 1..m {
                    if self.d[(i, k)].is_zero() {
                        continue;
                    }
                    let quo = self.d[(i, k)].div_floor(&pivot);
                    self.add_row_multiple(i, k, &-quo);
                    clean &= self.d[(i, k)].is_zero();
                }
                for j in k + 1..n {
                    if self.d[(k, j)].is_zero() {
                        continue;
                    }
                    let quo = self.d[(k, j)].div_floor(&pivot);
                    self.add_col_multiple(j, k, &-quo);
                    clean &= self.d[(k, j)].is_zero();
                }
                if clean {
                    break;
                }
            }
            if self.d[(k, k)].is_negative() {
                self.negate_row(k);
            }
        }
    }

    /// Replaces each non-dividing diagonal pair `(a, b)` by `(gcd, lcm)`.
    fn repair_divisibility(&mut self) {
        let r = self.d.rows().min(self.d.cols());
        for i in 0..r {
            for j in i + 1..r {
                let a = self.d[(i, i)].clone();
                let b = self.d[(j, j)].clone();
                if divides(&a, &b) {
                    continue;
                }
                // [[a,0],[0,b]] -> (col i += col j) -> [[a,0],[b,b]]
                // -> rows by [[s,t],[-b/g,a/g]] -> [[g,tb],[0,ab/g]]
                // -> (col j -= (tb/g) col i) -> [[g,0],[0,ab/g]]
                let (g, s, t) = extended_gcd(&a, &b);
                self.add_col_multiple(i, j, &BigInt::one());
                let lower_left = -(&b / &g);
                let lower_right = &a / &g;
                self.combine_rows(i, j, [&s, &t, &lower_left, &lower_right]);
                let k = -(&t * &b / &g);
                self.add_col_multiple(j, i, &k);
                if self.d[(j, j)].is_negative() {
                    self.negate_row(j);
                }
            }
        }
    }
}

/// Smith normal form with witnesses. Deterministic: pivots are chosen by
/// least absolute value, row-major on ties, then a gcd/lcm pass fixes the
/// divisibility chain.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let mut red = Reducer::new(a, true);
    red.diagonalize();
    red.repair_divisibility();
    SnfResult {
        d: red.d,
        p: red.p.expect("tracked"),
        q: red.q.expect("tracked"),
    }
}

/// Diagonal of the Smith normal form, without witnesses.
pub fn smith_diagonal(a: &IntMatrix) -> Vec<BigInt> {
    let mut red = Reducer::new(a, false);
    red.diagonalize();
    red.repair_divisibility();
    red.d.diagonal_entries()
}

/// Invariant factors of the cokernel: nonunit SNF diagonal entries; zero
/// entries count towards the free rank.
pub fn invariant_factors(a: &IntMatrix) -> AbelianInvariants {
    from_diagonal(smith_diagonal(a))
}

fn from_diagonal(diag: Vec<BigInt>) -> AbelianInvariants {
    let free_rank = diag.iter().filter(|d| d.is_zero()).count();
    let factors = diag.into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect();
    AbelianInvariants { factors, free_rank }
}

/// Exact determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn determinant(a: &IntMatrix) -> Result<BigInt, SmithError> {
    if !a.is_square() {
        return Err(SmithError::NotSquare(a.rows(), a.cols()));
    }
    let n = a.rows();
    let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut prev = BigInt::one();
    let mut negate = false;
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = if n == 0 { BigInt::one() } else { m[n - 1][n - 1].clone() };
    Ok(if negate { -det } else { det })
}

/// The four explicit `2×2` diagonalizations `P·A·Q = B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MtVariant {
    /// `diag(a, b) → diag(1, ab)` for coprime `a, b`.
    I,
    /// `[[a, 1], [0, b]] → diag(1, ab)`.
    II,
    /// `[[a, c], [0, b]] → diag(a, b)` when `(a, b) | c`.
    III,
    /// `[[2a, c], [0, 2b]] → diag(1, 4ab)` for coprime `a, b` and odd `c`.
    IV,
}

impl fmt::Display for MtVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MtVariant::I => "i",
            MtVariant::II => "ii",
            MtVariant::III => "iii",
            MtVariant::IV => "iv",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for MtVariant {
    type Err = SmithError;

    fn from_str(s: &str) -> Result<Self, SmithError> {
        match s {
            "i" => Ok(MtVariant::I),
            "ii" => Ok(MtVariant::II),
            "iii" => Ok(MtVariant::III),
            "iv" => Ok(MtVariant::IV),
            other => Err(SmithError::UnknownVariant(other.to_string())),
        }
    }
}

fn m2(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> IntMatrix {
    IntMatrix::from_entries(2, 2, vec![a, b, c, d]).expect("2x2")
}

/// The source matrix `A` of a variant.
pub fn lemma_mt_source(variant: MtVariant, a: &BigInt, b: &BigInt, c: &BigInt) -> IntMatrix {
    let z = BigInt::zero;
    match variant {
        MtVariant::I => m2(a.clone(), z(), z(), b.clone()),
        MtVariant::II => m2(a.clone(), BigInt::one(), z(), b.clone()),
        MtVariant::III => m2(a.clone(), c.clone(), z(), b.clone()),
        MtVariant::IV => m2(a * 2u32, c.clone(), z(), b * 2u32),
    }
}

/// The target matrix `B` of a variant.
pub fn lemma_mt_target(variant: MtVariant, a: &BigInt, b: &BigInt, _c: &BigInt) -> IntMatrix {
    let z = BigInt::zero;
    match variant {
        MtVariant::I | MtVariant::II => m2(BigInt::one(), z(), z(), a * b),
        MtVariant::III => m2(a.clone(), z(), z(), b.clone()),
        MtVariant::IV => m2(BigInt::one(), z(), z(), a * b * 4u32),
    }
}

/// Witnesses `(P, Q)` with `P · A · Q = B` for the given variant, with the
/// Bézout coefficients `m, n` taken from [`extended_gcd`].
pub fn lemma_mt_witnesses(
    variant: MtVariant,
    a: &BigInt,
    b: &BigInt,
    c: &BigInt,
) -> Result<(IntMatrix, IntMatrix), SmithError> {
    let fail = |condition: &str| SmithError::Precondition {
        variant,
        condition: condition.to_string(),
    };
    let (g, m, n) = extended_gcd(a, b);
    match variant {
        MtVariant::I => {
            if !g.is_one() {
                return Err(fail("gcd(a, b) = 1"));
            }
            // P = [[1, n], [-b, am]], Q = [[m, -bn], [1, a]]
            Ok((
                m2(BigInt::one(), n.clone(), -b, a * &m),
                m2(m, -(b * &n), BigInt::one(), a.clone()),
            ))
        }
        MtVariant::II => Ok((
            m2(BigInt::one(), BigInt::zero(), -b, BigInt::one()),
            m2(BigInt::zero(), -BigInt::one(), BigInt::one(), a.clone()),
        )),
        MtVariant::III => {
            if g.is_zero() || !(c % &g).is_zero() {
                return Err(fail("gcd(a, b) is nonzero and divides c"));
            }
            // x = a/g, y = b/g, z = c/g with xm + yn = 1 (same m, n as for a, b)
            let z = c / &g;
            Ok((
                m2(BigInt::one(), -(&n * &z), BigInt::zero(), BigInt::one()),
                m2(BigInt::one(), -(&m * &z), BigInt::zero(), BigInt::one()),
            ))
        }
        MtVariant::IV => {
            if !g.is_one() {
                return Err(fail("gcd(a, b) = 1"));
            }
            if c.is_even() {
                return Err(fail("c odd"));
            }
            let c1: BigInt = c - 1u32;
            let half = &c1 / 2u32;
            // P = [[-1, n(c-1)/2], [-2b, 1 + nb(c-1)]]
            // Q = [[m(c-1)/2, -1 - ma(c-1)], [-1, 2a]]
            let nbc: BigInt = &n * b * &c1;
            let mac: BigInt = &m * a * &c1;
            Ok((
                m2(-BigInt::one(), &n * &half, -(b * 2u32), nbc + 1),
                m2(&m * &half, -mac - 1, -BigInt::one(), a * 2u32),
            ))
        }
    }
}
