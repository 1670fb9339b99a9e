//! Signed permutations, signed-cycle types, and the classes of maximal tori.
//!
//! A signed permutation of degree `l` is a permutation `θ` of `{±1, …, ±l}`
//! with `θ(-i) = -θ(i)`. These form the hyperoctahedral group `W(C_l)`; the
//! Weyl group `W(D_l)` is the index-two subgroup of elements with an even
//! number of negative cycles.
//!
//! Classes of maximal tori of `Spin±(2l, q)` are labelled by
//! [`SignedCycleType`]: a signed partition of `l`, plus a split label for the
//! all-positive, all-even partitions whose `W(C_l)`-class breaks in two.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::matrix::IntMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeylError {
    #[error("rank l = {0} is too small, need l >= 2")]
    RankTooSmall(usize),
    #[error("cycle lengths must be positive")]
    ZeroLength,
    #[error("signed-cycle type has no parts")]
    NoParts,
    #[error("split label {0} given for a type that does not split")]
    UnexpectedSplit(Sign),
    #[error("type {0} splits into two classes and needs a split label (:+ or :-)")]
    MissingSplit(String),
    #[error("invalid type literal {0:?}")]
    BadLiteral(String),
    #[error("image of point {0} is out of range")]
    OutOfRange(usize),
    #[error("point {0} is hit twice; not a bijection")]
    NotBijective(usize),
}

/// A sign `±1`. Used for cycle signs, group forms, and split labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// The group form whose tori are labelled by elements of this parity.
    pub fn form(self) -> Sign {
        match self {
            Parity::Even => Sign::Plus,
            Parity::Odd => Sign::Minus,
        }
    }
}

/// One cycle of a signed-cycle type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Part {
    pub length: usize,
    pub sign: Sign,
}

impl Part {
    pub fn new(length: usize, sign: Sign) -> Part {
        Part { length, sign }
    }

    pub fn positive(length: usize) -> Part {
        Part::new(length, Sign::Plus)
    }

    pub fn negative(length: usize) -> Part {
        Part::new(length, Sign::Minus)
    }
}

/// A signed partition of `l`, stored in canonical order: positive parts
/// first, then negative parts, lengths non-increasing within each block.
///
/// The split label is present exactly when every part is positive and even.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedCycleType {
    parts: Vec<Part>,
    split: Option<Sign>,
}

impl SignedCycleType {
    pub fn new(mut parts: Vec<Part>, split: Option<Sign>) -> Result<Self, WeylError> {
        if parts.is_empty() {
            return Err(WeylError::NoParts);
        }
        if parts.iter().any(|p| p.length == 0) {
            return Err(WeylError::ZeroLength);
        }
        parts.sort_by(|a, b| a.sign.cmp(&b.sign).then(b.length.cmp(&a.length)));
        let t = SignedCycleType { parts, split: None };
        match (t.is_splittable(), split) {
            (true, None) => Err(WeylError::MissingSplit(t.to_string())),
            (false, Some(s)) => Err(WeylError::UnexpectedSplit(s)),
            (_, split) => Ok(SignedCycleType { split, ..t }),
        }
    }

    /// Builds a type from signed lengths, e.g. `[2, 1, -3]` for `[2, 1, 3̄]`.
    pub fn from_signed_lengths(lengths: &[i64], split: Option<Sign>) -> Result<Self, WeylError> {
        let parts = lengths
            .iter()
            .map(|&v| {
                if v == 0 {
                    Err(WeylError::ZeroLength)
                } else if v > 0 {
                    Ok(Part::positive(v as usize))
                } else {
                    Ok(Part::negative(v.unsigned_abs() as usize))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        SignedCycleType::new(parts, split)
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn split(&self) -> Option<Sign> {
        self.split
    }

    /// The rank `l`, i.e. the sum of all lengths.
    pub fn rank(&self) -> usize {
        self.parts.iter().map(|p| p.length).sum()
    }

    pub fn negative_count(&self) -> usize {
        self.parts.iter().filter(|p| p.sign == Sign::Minus).count()
    }

    pub fn positive_lengths(&self) -> Vec<usize> {
        self.lengths_with(Sign::Plus)
    }

    pub fn negative_lengths(&self) -> Vec<usize> {
        self.lengths_with(Sign::Minus)
    }

    fn lengths_with(&self, sign: Sign) -> Vec<usize> {
        self.parts.iter().filter(|p| p.sign == sign).map(|p| p.length).collect()
    }

    /// `+` for an even number of negative parts, `-` otherwise.
    pub fn form(&self) -> Sign {
        Parity::of(self.negative_count()).form()
    }

    /// All parts positive with even length: the `W(C_l)`-class splits in `W(D_l)`.
    pub fn is_splittable(&self) -> bool {
        self.parts.iter().all(|p| p.sign == Sign::Plus && p.length % 2 == 0)
    }

    /// The same partition with the other split label, if it has one.
    pub fn split_partner(&self) -> Option<SignedCycleType> {
        self.split.map(|s| SignedCycleType {
            parts: self.parts.clone(),
            split: Some(s.flip()),
        })
    }

    /// Type literal without the split suffix.
    pub fn partition_literal(&self) -> String {
        let lens: Vec<String> = self
            .parts
            .iter()
            .map(|p| match p.sign {
                Sign::Plus => p.length.to_string(),
                Sign::Minus => format!("-{}", p.length),
            })
            .collect();
        lens.join(",")
    }

    fn order_key(&self) -> (usize, usize, Vec<usize>, Vec<usize>, Option<Sign>) {
        let neg = self.negative_lengths();
        (self.rank(), neg.iter().sum(), self.positive_lengths(), neg, self.split)
    }
}

/// Canonical type order: by rank, then by total negative length, then the
/// positive and negative partitions lexicographically, then `+` before `-`.
impl Ord for SignedCycleType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for SignedCycleType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SignedCycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.partition_literal())?;
        if let Some(s) = self.split {
            write!(f, ":{s}")?;
        }
        Ok(())
    }
}

impl FromStr for SignedCycleType {
    type Err = WeylError;

    /// Parses `"2,1,-3"` or `"2,2:+"`. Parts may be listed in any order.
    fn from_str(s: &str) -> Result<Self, WeylError> {
        let bad = || WeylError::BadLiteral(s.to_string());
        let (body, split) = match s.split_once(':') {
            Some((body, "+")) => (body, Some(Sign::Plus)),
            Some((body, "-")) => (body, Some(Sign::Minus)),
            Some(_) => return Err(bad()),
            None => (s, None),
        };
        let lengths = body
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                if tok.starts_with('+') {
                    return Err(bad());
                }
                tok.parse::<i64>().map_err(|_| bad())
            })
            .collect::<Result<Vec<_>, _>>()?;
        if lengths.contains(&0) {
            return Err(WeylError::ZeroLength);
        }
        SignedCycleType::from_signed_lengths(&lengths, split)
    }
}

/// Partitions of `n` as non-increasing sequences, in lexicographic order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in 1..=n.min(max) {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// One entry per σ-conjugacy class of `W(D_l)` for the given form, in
/// canonical type order.
///
/// Form `+` gets the signed partitions with an even number of negative
/// parts, each all-positive all-even partition twice (`:+` then `:-`); form
/// `-` gets those with an odd number of negative parts.
pub fn enumerate_classes(l: usize, form: Sign) -> Result<Vec<SignedCycleType>, WeylError> {
    if l < 2 {
        return Err(WeylError::RankTooSmall(l));
    }
    let mut out = Vec::new();
    for neg_total in 0..=l {
        for pos in partitions(l - neg_total) {
            for neg in partitions(neg_total) {
                if Parity::of(neg.len()).form() != form {
                    continue;
                }
                let parts: Vec<Part> = pos
                    .iter()
                    .map(|&k| Part::positive(k))
                    .chain(neg.iter().map(|&k| Part::negative(k)))
                    .collect();
                let splits = neg.is_empty() && pos.iter().all(|k| k % 2 == 0);
                if splits {
                    for s in [Sign::Plus, Sign::Minus] {
                        out.push(SignedCycleType::new(parts.clone(), Some(s))?);
                    }
                } else {
                    out.push(SignedCycleType::new(parts, None)?);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// A signed permutation on `{±1, …, ±l}`.
///
/// Points are 1-based in the public API.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    // 0-based target and sign for each 0-based source point
    image: Vec<(usize, Sign)>,
}

impl SignedPermutation {
    /// `images[i - 1] = (θ(i) up to sign, sign)` for `i = 1..=l`.
    pub fn new(images: Vec<(usize, Sign)>) -> Result<Self, WeylError> {
        let l = images.len();
        let mut seen = vec![false; l];
        let mut image = Vec::with_capacity(l);
        for &(t, s) in &images {
            if t == 0 || t > l {
                return Err(WeylError::OutOfRange(t));
            }
            if std::mem::replace(&mut seen[t - 1], true) {
                return Err(WeylError::NotBijective(t));
            }
            image.push((t - 1, s));
        }
        Ok(SignedPermutation { image })
    }

    pub fn identity(l: usize) -> Self {
        SignedPermutation {
            image: (0..l).map(|i| (i, Sign::Plus)).collect(),
        }
    }

    /// The sign change of coordinate `l`, i.e. the negative 1-cycle on `l`.
    pub fn last_reflection(l: usize) -> Self {
        let mut p = Self::identity(l);
        p.image[l - 1].1 = Sign::Minus;
        p
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    /// Image of the positive point `i` (1-based).
    pub fn apply(&self, i: usize) -> (usize, Sign) {
        let (t, s) = self.image[i - 1];
        (t + 1, s)
    }

    /// Image of a signed point `±i`.
    pub fn apply_signed(&self, i: i64) -> i64 {
        let (t, s) = self.image[i.unsigned_abs() as usize - 1];
        let v = (t as i64 + 1) * s.value();
        if i < 0 {
            -v
        } else {
            v
        }
    }

    /// Images as `(target, sign)` pairs, 1-based.
    pub fn images(&self) -> Vec<(usize, Sign)> {
        self.image.iter().map(|&(t, s)| (t + 1, s)).collect()
    }

    /// `self` followed by `other`: `x ↦ other(self(x))`.
    pub fn then(&self, other: &SignedPermutation) -> SignedPermutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        SignedPermutation {
            image: self
                .image
                .iter()
                .map(|&(t, s)| {
                    let (t2, s2) = other.image[t];
                    (t2, s * s2)
                })
                .collect(),
        }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut image = vec![(0, Sign::Plus); self.degree()];
        for (i, &(t, s)) in self.image.iter().enumerate() {
            image[t] = (i, s);
        }
        SignedPermutation { image }
    }

    /// `x⁻¹ · self · x` in the `then` convention, i.e. `x ∘ self ∘ x⁻¹` as maps.
    pub fn conjugate_by(&self, x: &SignedPermutation) -> SignedPermutation {
        x.inverse().then(self).then(x)
    }

    /// Number of points sent to a negative point; its parity equals the
    /// parity of the number of negative cycles.
    pub fn sign_changes(&self) -> usize {
        self.image.iter().filter(|(_, s)| *s == Sign::Minus).count()
    }

    /// Whether the element lies in `W(D_l)`.
    pub fn is_even(&self) -> bool {
        self.sign_changes() % 2 == 0
    }

    /// Cycles of the underlying permutation, each with its sign (product of
    /// the signs along the cycle). Points are 1-based; every cycle starts at
    /// its least point and cycles are listed by that point.
    pub fn signed_cycles(&self) -> Vec<(Vec<usize>, Sign)> {
        let l = self.degree();
        let mut seen = vec![false; l];
        let mut out = Vec::new();
        for start in 0..l {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut sign = Sign::Plus;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                let (t, s) = self.image[i];
                sign = sign * s;
                i = t;
            }
            out.push((cycle, sign));
        }
        out
    }

    /// The signed-cycle type of this element, including the split label when
    /// the type splits in `W(D_l)`.
    pub fn cycle_type(&self) -> SignedCycleType {
        let parts: Vec<Part> = self
            .signed_cycles()
            .iter()
            .map(|(c, s)| Part::new(c.len(), *s))
            .collect();
        let all_pos_even = parts.iter().all(|p| p.sign == Sign::Plus && p.length % 2 == 0);
        let split = all_pos_even.then(|| self.split_label());
        SignedCycleType::new(parts, split).expect("cycle type of a valid permutation")
    }

    /// For an element whose cycles are all positive and even: `+` if it is
    /// `W(D_l)`-conjugate to the `:+` standard representative, `-` otherwise.
    fn split_label(&self) -> Sign {
        // Build x with x ∘ θ⁺ = self ∘ x by matching cycles of equal length;
        // the label is the parity of x's sign changes.
        let mut ours: Vec<Vec<usize>> = self.signed_cycles().into_iter().map(|(c, _)| c).collect();
        ours.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        let mut negatives = 0usize;
        for cycle in &ours {
            let mut point = cycle[0] as i64;
            for _ in 0..cycle.len() {
                if point < 0 {
                    negatives += 1;
                }
                point = self.apply_signed(point);
            }
        }
        if negatives % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// The standard representative of a class: consecutive blocks of cycles
/// `(1, …, l₁)(l₁+1, …)…`, a negative cycle sending its last point to minus
/// its first. For split label `-`, the `:+` representative conjugated by the
/// sign change of coordinate `l`.
pub fn standard_representative(t: &SignedCycleType) -> SignedPermutation {
    let theta = block_representative(t);
    match t.split() {
        Some(Sign::Minus) => theta.conjugate_by(&SignedPermutation::last_reflection(t.rank())),
        _ => theta,
    }
}

/// The block representative `(1, …, l₁)(l₁+1, …)…` of the partition,
/// ignoring any split label. Its matrix is `⊕ R_{ε_i l_i}`.
pub fn block_representative(t: &SignedCycleType) -> SignedPermutation {
    let l = t.rank();
    let mut image = Vec::with_capacity(l);
    let mut offset = 0;
    for p in t.parts() {
        for i in 0..p.length {
            if i + 1 < p.length {
                image.push((offset + i + 1, Sign::Plus));
            } else {
                image.push((offset, p.sign));
            }
        }
        offset += p.length;
    }
    SignedPermutation { image }
}

/// The monomial matrix of `p` acting on row vectors: row `i` has the sign of
/// `p(i)` in column `|p(i)|`. With this convention
/// `matrix(p.then(q)) = matrix(p) · matrix(q)`, and a standard
/// representative maps to the block sum of the cyclic blocks `R_{εk}`.
pub fn permutation_matrix(p: &SignedPermutation) -> IntMatrix {
    let l = p.degree();
    let mut m = IntMatrix::zeros(l, l);
    for (i, &(t, s)) in p.image.iter().enumerate() {
        m[(i, t)] = BigInt::from(s.value());
    }
    m
}

pub fn negative_cycle_parity(p: &SignedPermutation) -> Parity {
    Parity::of(p.signed_cycles().iter().filter(|(_, s)| *s == Sign::Minus).count())
}
