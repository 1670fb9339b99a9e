//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use spin_tori::lattice::{b_matrix, pipeline_left_multiplier, twist_matrix, weight_basis_matrix};
use spin_tori::matrix::IntMatrix;
use spin_tori::weyl::{block_representative, permutation_matrix, standard_representative, Sign, SignedCycleType, SignedPermutation};

// ---------------------------------------------------------------------------
// Brute-force conjugacy classes

type Elem = [i8; 8];

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn rank_of(w: &Elem, l: usize) -> usize {
    let mut mask = 0usize;
    let mut lehmer = 0usize;
    for i in 0..l {
        if w[i] < 0 {
            mask |= 1 << i;
        }
        let v = w[i].unsigned_abs();
        let smaller = (i + 1..l).filter(|&j| w[j].unsigned_abs() < v).count();
        lehmer = lehmer * (l - i) + smaller;
    }
    (lehmer << l) | mask
}

fn apply(w: &Elem, x: i8) -> i8 {
    let y = w[(x.unsigned_abs() - 1) as usize];
    if x < 0 {
        -y
    } else {
        y
    }
}

fn conjugate(w: &Elem, g: &Elem, l: usize) -> Elem {
    // g is an involution, so g⁻¹ w g = g w g
    let mut out = [0i8; 8];
    for x in 1..=l as i8 {
        out[(x - 1) as usize] = apply(g, apply(w, apply(g, x)));
    }
    out
}

fn generators(l: usize) -> Vec<Elem> {
    let identity = || {
        let mut g = [0i8; 8];
        for (i, v) in g.iter_mut().enumerate().take(l) {
            *v = i as i8 + 1;
        }
        g
    };
    let mut gens = Vec::new();
    for i in 0..l - 1 {
        let mut g = identity();
        g.swap(i, i + 1);
        gens.push(g);
    }
    let mut g = identity();
    g[l - 2] = -(l as i8);
    g[l - 1] = -(l as i8 - 1);
    gens.push(g);
    gens
}

fn next_permutation(p: &mut [i8]) -> bool {
    let Some(i) = (0..p.len().saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).expect("successor");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

fn to_permutation(w: &Elem, l: usize) -> SignedPermutation {
    let images = (0..l)
        .map(|i| {
            let v = w[i];
            let sign = if v < 0 { Sign::Minus } else { Sign::Plus };
            (v.unsigned_abs() as usize, sign)
        })
        .collect();
    SignedPermutation::new(images).expect("bijective")
}

/// Orbits of `W(D_l)` acting by conjugation on the signed permutations with
/// an even (`odd = false`) or odd number of sign changes. Each orbit is
/// reported as its size and the set of cycle types found on it.
pub fn brute_force_orbits(l: usize, odd: bool) -> Vec<(usize, BTreeSet<SignedCycleType>)> {
    assert!((2..=8).contains(&l));
    let total = factorial(l) << l;
    let mut parent: Vec<u32> = (0..total as u32).collect();
    let gens = generators(l);
    let mut elements = Vec::new();
    let mut perm: Vec<i8> = (1..=l as i8).collect();
    loop {
        for mask in 0u32..(1 << l) {
            if (mask.count_ones() % 2 == 1) != odd {
                continue;
            }
            let mut w = [0i8; 8];
            for i in 0..l {
                w[i] = if mask >> i & 1 == 1 { -perm[i] } else { perm[i] };
            }
            let r = rank_of(&w, l) as u32;
            for g in &gens {
                let c = rank_of(&conjugate(&w, g, l), l) as u32;
                let (a, b) = (find(&mut parent, r), find(&mut parent, c));
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
            elements.push(w);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let mut orbits: BTreeMap<u32, (usize, BTreeSet<SignedCycleType>)> = BTreeMap::new();
    for w in &elements {
        let root = find(&mut parent, rank_of(w, l) as u32);
        let entry = orbits.entry(root).or_default();
        entry.0 += 1;
        entry.1.insert(to_permutation(w, l).cycle_type());
    }
    orbits.into_values().collect()
}

// ---------------------------------------------------------------------------
// Determinantal divisors by cofactor expansion

fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = BigInt::zero();
    for (j, pivot) in m[0].iter().enumerate() {
        if pivot.is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = pivot * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `g_k = gcd` of all `k×k` minors for `k = 1..min(rows, cols)`.
pub fn determinantal_divisors(a: &IntMatrix) -> Vec<BigInt> {
    let r = a.rows().min(a.cols());
    (1..=r)
        .map(|k| {
            let mut g = BigInt::zero();
            for rows in subsets(a.rows(), k) {
                for cols in subsets(a.cols(), k) {
                    let m: Vec<Vec<BigInt>> = rows
                        .iter()
                        .map(|&i| cols.iter().map(|&j| a[(i, j)].clone()).collect())
                        .collect();
                    g = g.gcd(&cofactor_det(&m));
                }
            }
            g
        })
        .collect()
}

/// SNF diagonal predicted by the determinantal divisors.
pub fn diagonal_from_minors(a: &IntMatrix) -> Vec<BigInt> {
    let g = determinantal_divisors(a);
    let mut prev = BigInt::one();
    g.into_iter()
        .map(|gk| {
            if prev.is_zero() {
                return BigInt::zero();
            }
            let d = if gk.is_zero() { BigInt::zero() } else { &gk / &prev };
            prev = gk;
            d
        })
        .collect()
}

/// A random unimodular matrix built from elementary operations.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n < 2 {
        if rng.gen_bool(0.5) {
            m = m.scale(&BigInt::from(-1));
        }
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k = BigInt::from(rng.gen_range(-3i64..=3));
        let mut e = IntMatrix::identity(n);
        match rng.gen_range(0..3) {
            0 => e[(i, j)] = k,
            1 => {
                e[(i, i)] = BigInt::zero();
                e[(j, j)] = BigInt::zero();
                e[(i, j)] = BigInt::one();
                e[(j, i)] = BigInt::one();
            }
            _ => e[(i, i)] = BigInt::from(-1),
        }
        m = &m * &e;
    }
    m
}

// ---------------------------------------------------------------------------
// Published reference table for l = 4

#[derive(Debug, Clone)]
pub struct ReferenceRow {
    pub form: Sign,
    pub label: String,
    pub types: Vec<SignedCycleType>,
    pub printed: String,
    pub verdict: Option<String>,
}

pub const REFERENCE_TABLE: &str = include_str!("../golden/table1_reference.txt");

pub fn reference_rows() -> Vec<ReferenceRow> {
    REFERENCE_TABLE
        .lines()
        .filter(|line| !line.trim().is_empty() && !line.starts_with('#'))
        .map(|line| {
            let fields: Vec<&str> = line.split('|').map(str::trim).collect();
            let (form, label) = fields[0].split_once(' ').expect("form and label");
            let form = if form == "+" { Sign::Plus } else { Sign::Minus };
            let types = match label.strip_suffix(":±") {
                Some(body) => vec![
                    format!("{body}:+").parse().expect("type"),
                    format!("{body}:-").parse().expect("type"),
                ],
                None => vec![label.parse().expect("type")],
            };
            let verdict = fields.get(2).map(|v| v.strip_prefix("verdict ").expect("verdict field").to_string());
            ReferenceRow {
                form,
                label: label.to_string(),
                types,
                printed: fields[1].to_string(),
                verdict,
            }
        })
        .collect()
}

fn poly_mul(x: &[i64], y: &[i64]) -> Vec<i64> {
    let mut out = vec![0; x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// `q^a-1`, `q+1`, ... as coefficient vectors.
fn parse_term(s: &str) -> Vec<i64> {
    let (power, constant) = match (s.rfind('-'), s.rfind('+')) {
        (Some(i), _) => (&s[..i], -s[i + 1..].parse::<i64>().expect("constant")),
        (None, Some(i)) => (&s[..i], s[i + 1..].parse::<i64>().expect("constant")),
        _ => panic!("bad term {s}"),
    };
    let a: usize = match power.strip_prefix("q^") {
        Some(e) => e.parse().expect("exponent"),
        None if power == "q" => 1,
        None => panic!("bad power {power}"),
    };
    let mut p = vec![0; a + 1];
    p[0] = constant;
    p[a] = 1;
    p
}

fn parse_factor(s: &str) -> Vec<i64> {
    if !s.starts_with('(') {
        return parse_term(s);
    }
    s.trim_start_matches('(')
        .trim_end_matches(')')
        .split(")(")
        .map(parse_term)
        .fold(vec![1], |acc, t| poly_mul(&acc, &t))
}

/// Multiset of expanded cyclic-factor orders in a rendering like
/// `Z_{(q^2+1)(q-1)} x Z_{q-1}`.
pub fn structure_polynomials(s: &str) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = s
        .split(" x ")
        .map(|z| {
            let inner = z.trim().strip_prefix("Z_{").and_then(|r| r.strip_suffix('}')).expect("Z_{...}");
            parse_factor(inner)
        })
        .collect();
    out.sort();
    out
}

pub fn eval_poly(p: &[i64], q: u64) -> BigInt {
    let q = BigInt::from(q);
    p.iter().rev().fold(BigInt::zero(), |acc, &c| acc * &q + c)
}

// ---------------------------------------------------------------------------
// Pipeline and twisted-form oracles

/// Left-multiply `qR − E + qB` by the block multiplier, then drop every
/// column that is `−1` on the diagonal and zero elsewhere, with its row.
pub fn derived_bordered_matrix(t: &SignedCycleType, q: u64) -> IntMatrix {
    let l = t.rank();
    let qb = BigInt::from(q);
    let r = permutation_matrix(&block_representative(t));
    let m = r
        .scale(&qb)
        .checked_sub(&IntMatrix::identity(l))
        .and_then(|m| m.checked_add(&b_matrix(t).scale(&qb)))
        .expect("square");
    let n = &pipeline_left_multiplier(t, q) * &m;
    let keep: Vec<usize> = (0..l)
        .filter(|&j| {
            let unit = n[(j, j)] == BigInt::from(-1) && (0..l).all(|i| i == j || n[(i, j)].is_zero());
            !unit
        })
        .collect();
    n.select(&keep, &keep)
}

/// Random element of `W(D_l)` as a product of generator matrices.
pub fn random_even_element(rng: &mut impl Rng, l: usize, steps: usize) -> IntMatrix {
    let gens: Vec<IntMatrix> = generators(l)
        .iter()
        .map(|g| permutation_matrix(&to_permutation(g, l)))
        .collect();
    let mut x = IntMatrix::identity(l);
    for _ in 0..steps {
        x = &x * &gens[rng.gen_range(0..gens.len())];
    }
    x
}

/// `M · S W' S⁻¹ − E` for the twisted Frobenius `M`, where
/// `W' = X⁻¹ (R₀ R) (R₀ X R₀)` is a σ-conjugate of the `W(D_l)`-part `R₀ R`
/// of the standard representative `R`, for a given `X ∈ W(D_l)`.
pub fn twisted_torus_matrix(t: &SignedCycleType, q: u64, x: &IntMatrix) -> IntMatrix {
    let l = t.rank();
    let r0 = permutation_matrix(&SignedPermutation::last_reflection(l));
    let r = permutation_matrix(&standard_representative(t));
    let w = &(&(&x.transpose() * &(&r0 * &r)) * &r0) * &(x * &r0);
    assert!(w.is_signed_monomial());
    let ws = weight_basis_matrix(&w).expect("integral");
    (&twist_matrix(l, q).expect("l >= 2") * &ws)
        .checked_sub(&IntMatrix::identity(l))
        .expect("square")
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    spin_tori::smith::determinant(m).map(|d| d.abs().is_one()).unwrap_or(false)
}

pub fn ty(s: &str) -> SignedCycleType {
    s.parse().expect("type literal")
}
