//! Closed-form torus decompositions, their canonical invariants, the center
//! of `Spin±2l(q)`, and the number-theoretic facts used along the way.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

use crate::matrix::IntMatrix;
use crate::smith::{invariant_factors, AbelianInvariants};
use crate::weyl::{Sign, SignedCycleType};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TheoryError {
    #[error("q must be at least 2, got {0}")]
    QTooSmall(u64),
    #[error("a must be odd, got {0}")]
    EvenBase(u64),
    #[error("a must be at least 3, got {0}")]
    BaseTooSmall(u64),
    #[error("exponents must be positive")]
    ZeroExponent,
    #[error("parity condition failed: {0}")]
    Parity(&'static str),
    #[error("precondition failed: {0}")]
    Precondition(&'static str),
}

/// A cyclic factor of order `∏ (q^a − ε)` over its terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicFactor {
    terms: Vec<(u32, Sign)>,
}

impl CyclicFactor {
    /// Sorts into canonical order: decreasing exponent, `ε = +1` first.
    pub fn new(mut terms: Vec<(u32, Sign)>) -> Self {
        assert!(!terms.is_empty(), "cyclic factor needs a term");
        assert!(terms.iter().all(|&(a, _)| a > 0), "exponents are positive");
        terms.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        CyclicFactor { terms }
    }

    pub fn single(exponent: u32, eps: Sign) -> Self {
        CyclicFactor::new(vec![(exponent, eps)])
    }

    pub fn terms(&self) -> &[(u32, Sign)] {
        &self.terms
    }

    /// Total degree in `q`.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0).sum()
    }

    pub fn evaluate(&self, q: &BigInt) -> BigInt {
        self.terms.iter().map(|&(a, eps)| term_value(q, a, eps)).product()
    }

    /// Coefficients of the expanded product, lowest degree first.
    pub fn polynomial(&self) -> Vec<i64> {
        self.terms.iter().fold(vec![1], |acc, &(a, eps)| {
            let mut term = vec![0; a as usize + 1];
            term[0] = -eps.value();
            term[a as usize] = 1;
            poly_mul(&acc, &term)
        })
    }

    /// Display terms with each pair `(q^a − 1)(q^a + 1)` shown as `q^{2a} − 1`.
    fn display_terms(&self) -> Vec<(u32, Sign)> {
        let mut rest = self.terms.clone();
        let mut out = Vec::new();
        while let Some((a, eps)) = rest.first().copied() {
            rest.remove(0);
            match rest.iter().position(|&(b, e)| b == a && e == eps.flip()) {
                Some(k) => {
                    rest.remove(k);
                    out.push((2 * a, Sign::Plus));
                }
                None => out.push((a, eps)),
            }
        }
        out.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        out
    }
}

fn term_value(q: &BigInt, a: u32, eps: Sign) -> BigInt {
    Pow::pow(q, a) - eps.value()
}

fn render_term(a: u32, eps: Sign) -> String {
    let power = if a == 1 { "q".to_string() } else { format!("q^{a}") };
    match eps {
        Sign::Plus => format!("{power}-1"),
        Sign::Minus => format!("{power}+1"),
    }
}

impl fmt::Display for CyclicFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.display_terms();
        if let [(a, eps)] = terms[..] {
            return f.write_str(&render_term(a, eps));
        }
        for (a, eps) in terms {
            write!(f, "({})", render_term(a, eps))?;
        }
        Ok(())
    }
}

/// Multiplies coefficient vectors (lowest degree first).
pub fn poly_mul(x: &[i64], y: &[i64]) -> Vec<i64> {
    let mut out = vec![0; x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Renders factors as `Z_{q^3-1} x Z_{q-1}`.
pub fn render_structure(factors: &[CyclicFactor]) -> String {
    let parts: Vec<String> = factors.iter().map(|f| format!("Z_{{{f}}}")).collect();
    parts.join(" x ")
}

/// Which of the four closed forms applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    I,
    II,
    III,
    IV,
}

impl Case {
    pub fn label(self) -> &'static str {
        match self {
            Case::I => "i",
            Case::II => "ii",
            Case::III => "iii",
            Case::IV => "iv",
        }
    }

    pub fn from_label(s: &str) -> Option<Case> {
        match s {
            "i" => Some(Case::I),
            "ii" => Some(Case::II),
            "iii" => Some(Case::III),
            "iv" => Some(Case::IV),
            _ => None,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusDecomposition {
    pub class_type: SignedCycleType,
    pub case: Case,
    pub factors: Vec<CyclicFactor>,
    /// Indices into `class_type.parts()` picked by the case rule.
    pub chosen_indices: Vec<usize>,
}

impl TorusDecomposition {
    pub fn degree(&self) -> u32 {
        self.factors.iter().map(CyclicFactor::degree).sum()
    }

    pub fn structure(&self) -> String {
        render_structure(&self.factors)
    }
}

/// `Spin±2l(q)`; `prime_power` is advisory since all formulas are polynomial in `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupForm {
    pub l: usize,
    pub form: Sign,
    pub q: u64,
    pub prime_power: bool,
}

impl GroupForm {
    pub fn new(l: usize, form: Sign, q: u64) -> Self {
        GroupForm {
            l,
            form,
            q,
            prime_power: is_prime_power(q),
        }
    }
}

pub fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut r = q;
            while r % p == 0 {
                r /= p;
            }
            return r == 1;
        }
        p += 1;
    }
    true
}

fn exponent(t: &SignedCycleType, k: usize) -> u32 {
    t.parts()[k].length as u32
}

/// Smallest length, then earliest canonical position.
fn pick(t: &SignedCycleType, candidates: &[usize]) -> Option<usize> {
    candidates.iter().copied().min_by_key(|&k| (t.parts()[k].length, k))
}

fn indices(t: &SignedCycleType, pred: impl Fn(usize, Sign) -> bool) -> Vec<usize> {
    (0..t.parts().len())
        .filter(|&k| pred(t.parts()[k].length, t.parts()[k].sign))
        .collect()
}

fn remaining(t: &SignedCycleType, skip: &[usize]) -> Vec<CyclicFactor> {
    (0..t.parts().len())
        .filter(|k| !skip.contains(k))
        .map(|k| CyclicFactor::single(exponent(t, k), t.parts()[k].sign))
        .collect()
}

fn composite(t: &SignedCycleType, i: usize, eps_i: Sign, j: usize) -> CyclicFactor {
    CyclicFactor::new(vec![(exponent(t, i), eps_i), (exponent(t, j), Sign::Minus)])
}

fn split_half(t: &SignedCycleType, i: usize) -> TorusDecomposition {
    let half = exponent(t, i) / 2;
    let mut factors = vec![CyclicFactor::single(half, Sign::Plus), CyclicFactor::single(half, Sign::Minus)];
    factors.extend(remaining(t, &[i]));
    TorusDecomposition {
        class_type: t.clone(),
        case: Case::III,
        factors,
        chosen_indices: vec![i],
    }
}

/// The closed-form decomposition of the torus labelled by `t`. Split labels
/// are ignored since both classes give isomorphic tori.
pub fn theorem_decomposition(t: &SignedCycleType) -> TorusDecomposition {
    let odd_pos = indices(t, |len, s| len % 2 == 1 && s == Sign::Plus);
    let odd_neg = indices(t, |len, s| len % 2 == 1 && s == Sign::Minus);
    let even_neg = indices(t, |len, s| len % 2 == 0 && s == Sign::Minus);

    if let (Some(i), Some(j)) = (pick(t, &odd_pos), pick(t, &odd_neg)) {
        let mut factors = vec![composite(t, i, Sign::Plus, j)];
        factors.extend(remaining(t, &[i, j]));
        return TorusDecomposition {
            class_type: t.clone(),
            case: Case::I,
            factors,
            chosen_indices: vec![i, j],
        };
    }
    let odd = if odd_pos.is_empty() { &odd_neg } else { &odd_pos };
    if let (Some(i), Some(j)) = (pick(t, odd), pick(t, &even_neg)) {
        let mut factors = vec![composite(t, i, t.parts()[i].sign, j)];
        factors.extend(remaining(t, &[i, j]));
        return TorusDecomposition {
            class_type: t.clone(),
            case: Case::II,
            factors,
            chosen_indices: vec![i, j],
        };
    }
    if t.is_splittable() {
        let candidates = case_three_candidates(t);
        let i = pick(t, &candidates).expect("a splittable type has parts");
        return split_half(t, i);
    }
    TorusDecomposition {
        class_type: t.clone(),
        case: Case::IV,
        factors: remaining(t, &[]),
        chosen_indices: Vec::new(),
    }
}

/// Indices of the parts with minimal 2-part when all parts are positive and even.
pub fn case_three_candidates(t: &SignedCycleType) -> Vec<usize> {
    if !t.is_splittable() {
        return Vec::new();
    }
    let two = |k: usize| t.parts()[k].length.trailing_zeros();
    let min = (0..t.parts().len()).map(two).min().unwrap_or(0);
    (0..t.parts().len()).filter(|&k| two(k) == min).collect()
}

/// Case (iii) with an explicit choice of part; `None` if `i` is not admissible.
pub fn theorem_decomposition_with_choice(t: &SignedCycleType, i: usize) -> Option<TorusDecomposition> {
    case_three_candidates(t).contains(&i).then(|| split_half(t, i))
}

/// For odd `q` in case (i) with an even negative part, the torus also
/// decomposes as in case (ii), with `t ∈ {i, j}` chosen by `q ≡ ε_t (mod 4)`.
pub fn alternative_decomposition(t: &SignedCycleType, q: u64) -> Option<TorusDecomposition> {
    if q % 2 == 0 {
        return None;
    }
    let main = theorem_decomposition(t);
    if main.case != Case::I {
        return None;
    }
    let even_neg = indices(t, |len, s| len % 2 == 0 && s == Sign::Minus);
    let k = pick(t, &even_neg)?;
    let (i, j) = (main.chosen_indices[0], main.chosen_indices[1]);
    let chosen = if q % 4 == 1 { i } else { j };
    let mut factors = vec![composite(t, chosen, t.parts()[chosen].sign, k)];
    factors.extend(remaining(t, &[chosen, k]));
    Some(TorusDecomposition {
        class_type: t.clone(),
        case: Case::II,
        factors,
        chosen_indices: vec![chosen, k],
    })
}

/// Orders of the cyclic factors at `q`.
pub fn evaluate(d: &TorusDecomposition, q: u64) -> Vec<BigInt> {
    let q = BigInt::from(q);
    d.factors.iter().map(|f| f.evaluate(&q)).collect()
}

/// Invariant factors of `∏ Z_{n_i}`.
pub fn canonical_invariants(orders: &[BigInt]) -> AbelianInvariants {
    if orders.is_empty() {
        return AbelianInvariants::trivial();
    }
    invariant_factors(&IntMatrix::diagonal(orders))
}

/// `∏ (q^{l_k} − ε_k)`.
pub fn torus_order(t: &SignedCycleType, q: u64) -> BigInt {
    let q = BigInt::from(q);
    t.parts()
        .iter()
        .map(|p| term_value(&q, p.length as u32, p.sign))
        .product()
}

/// `Z_{(2,q−1)}²` for form `+` with `l` even, otherwise `Z_{(4, q^l − ε)}`.
pub fn center_invariants(g: &GroupForm) -> AbelianInvariants {
    let q = BigInt::from(g.q);
    let orders = if g.form == Sign::Plus && g.l % 2 == 0 {
        let d = BigInt::from(2).gcd(&(&q - 1));
        vec![d.clone(), d]
    } else {
        vec![BigInt::from(4).gcd(&term_value(&q, g.l as u32, g.form))]
    };
    canonical_invariants(&orders)
}

fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            while (&n % &p).is_zero() {
                n /= &p;
            }
            out.push(p.clone());
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// Whether the finite group `h` embeds in the finite group `g`: for each
/// prime dividing `|h|`, the sorted exponents of `h` are dominated by those of `g`.
pub fn embeds(h: &AbelianInvariants, g: &AbelianInvariants) -> bool {
    assert!(h.free_rank() == 0 && g.free_rank() == 0, "finite groups only");
    let Some(order) = h.order() else {
        return false;
    };
    prime_divisors(&order).iter().all(|p| {
        let exps = |a: &AbelianInvariants| {
            let mut e: Vec<u32> = a.factors().iter().map(|d| valuation(d, p)).filter(|&v| v > 0).collect();
            e.sort_unstable_by(|x, y| y.cmp(x));
            e
        };
        let (eh, eg) = (exps(h), exps(g));
        eh.len() <= eg.len() && eh.iter().zip(&eg).all(|(a, b)| a <= b)
    })
}

/// Largest power of 2 dividing `n` (`n ≥ 1`).
pub fn two_part(n: &BigInt) -> BigInt {
    assert!(n.is_positive(), "two_part needs n >= 1");
    BigInt::one() << n.trailing_zeros().unwrap_or(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NtPart {
    /// `(aⁿ − 1)₂`
    IMinus,
    /// `(aⁿ + 1)₂`
    IPlus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NtGcdPart {
    II,
    III,
    IV,
    V,
}

fn check_base(a: u64) -> Result<(), TheoryError> {
    if a % 2 == 0 {
        return Err(TheoryError::EvenBase(a));
    }
    if a < 3 {
        return Err(TheoryError::BaseTooSmall(a));
    }
    Ok(())
}

fn two_part_u(n: u64) -> BigInt {
    two_part(&BigInt::from(n))
}

/// Closed form of the 2-part of `aⁿ ∓ 1` for odd `a`.
pub fn lemma_nt_value(part: NtPart, a: u64, n: u32) -> Result<BigInt, TheoryError> {
    check_base(a)?;
    if n == 0 {
        return Err(TheoryError::ZeroExponent);
    }
    let even = n % 2 == 0;
    Ok(match part {
        NtPart::IMinus if even && a % 4 == 3 => two_part_u(n as u64) * two_part_u(a + 1),
        NtPart::IMinus => two_part_u(n as u64) * two_part_u(a - 1),
        NtPart::IPlus if even => BigInt::from(2),
        NtPart::IPlus => two_part_u(a + 1),
    })
}

/// Closed form of the gcd in parts (ii)–(v); `eps` is the `ε = ±1` of each part.
pub fn lemma_nt_gcd(part: NtGcdPart, a: u64, n1: u32, n2: u32, eps: Sign) -> Result<BigInt, TheoryError> {
    check_base(a)?;
    if n1 == 0 || n2 == 0 {
        return Err(TheoryError::ZeroExponent);
    }
    let (odd1, odd2) = (n1 % 2 == 1, n2 % 2 == 1);
    match part {
        NtGcdPart::II | NtGcdPart::IV if !(odd1 && odd2) => Err(TheoryError::Parity("n1 and n2 odd")),
        NtGcdPart::III | NtGcdPart::V if !(!odd1 && odd2) => Err(TheoryError::Parity("n1 even and n2 odd")),
        NtGcdPart::II | NtGcdPart::III => Ok(BigInt::from(2)),
        NtGcdPart::IV | NtGcdPart::V => Ok(Pow::pow(&BigInt::from(a), n1.gcd(&n2)) + eps.value()),
    }
}

/// `Z_{(aⁿ¹+ε)(aⁿ²−ε)} × Z_{aⁿ³+1} ≅ Z_{aⁿ¹+ε} × Z_{(aⁿ²−ε)(aⁿ³+1)}` with `a ≡ ε (mod 4)`.
pub fn lemma_nt_vi_check(a: u64, n1: u32, n2: u32, n3: u32) -> Result<bool, TheoryError> {
    check_base(a)?;
    if n1 == 0 || n2 == 0 || n3 == 0 {
        return Err(TheoryError::ZeroExponent);
    }
    if n1 % 2 == 0 || n2 % 2 == 0 || n3 % 2 == 1 {
        return Err(TheoryError::Parity("n1, n2 odd and n3 even"));
    }
    let eps: i64 = if a % 4 == 1 { 1 } else { -1 };
    let a = BigInt::from(a);
    let x: BigInt = Pow::pow(&a, n1) + eps;
    let y: BigInt = Pow::pow(&a, n2) - eps;
    let z: BigInt = Pow::pow(&a, n3) + 1u32;
    let lhs = canonical_invariants(&[&x * &y, z.clone()]);
    let rhs = canonical_invariants(&[x, y * z]);
    Ok(lhs == rhs)
}

/// `(2a, b) = (a, b)` whenever `a₂ ≥ b₂`.
pub fn lemma_a2_check(a: u64, b: u64) -> Result<bool, TheoryError> {
    if a == 0 || b == 0 {
        return Err(TheoryError::Precondition("a and b positive"));
    }
    if a.trailing_zeros() < b.trailing_zeros() {
        return Err(TheoryError::Precondition("two_part(a) >= two_part(b)"));
    }
    Ok((2 * a).gcd(&b) == a.gcd(&b))
}
