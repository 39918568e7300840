//! Exact Laurent polynomials in one and two variables with integer
//! coefficients, plus a thin quotient layer ([`Rat2`]) for skein
//! coefficients that only become polynomial after assembly.
//!
//! Terms are kept as a vector sorted by exponent with no zero coefficients,
//! so structural equality is polynomial equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("no exact quotient exists")]
    NotDivisible,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Exponent lattice of a Laurent ring.
pub trait Exponent: Copy + Ord + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    /// Componentwise minimum.
    fn meet(self, other: Self) -> Self;
    /// Componentwise maximum.
    fn join(self, other: Self) -> Self;
    /// Componentwise `self <= other`.
    fn le_all(self, other: Self) -> bool;
}

impl Exponent for i32 {
    fn zero() -> Self {
        0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn meet(self, other: Self) -> Self {
        self.min(other)
    }
    fn join(self, other: Self) -> Self {
        self.max(other)
    }
    fn le_all(self, other: Self) -> bool {
        self <= other
    }
}

/// Exponent pair `(i, j)` of the monomial `t0^i t1^j`. Ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exp2 {
    pub i: i32,
    pub j: i32,
}

impl Exp2 {
    pub const fn new(i: i32, j: i32) -> Self {
        Exp2 { i, j }
    }

    /// The grading `deg(t0^i t1^j) = i - j`.
    pub fn deg(self) -> i64 {
        self.i as i64 - self.j as i64
    }
}

impl Exponent for Exp2 {
    fn zero() -> Self {
        Exp2::new(0, 0)
    }
    fn add(self, o: Self) -> Self {
        Exp2::new(self.i + o.i, self.j + o.j)
    }
    fn sub(self, o: Self) -> Self {
        Exp2::new(self.i - o.i, self.j - o.j)
    }
    fn meet(self, o: Self) -> Self {
        Exp2::new(self.i.min(o.i), self.j.min(o.j))
    }
    fn join(self, o: Self) -> Self {
        Exp2::new(self.i.max(o.i), self.j.max(o.j))
    }
    fn le_all(self, o: Self) -> bool {
        self.i <= o.i && self.j <= o.j
    }
}

/// Sparse Laurent polynomial over Z with exponents in `E`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent<E> {
    terms: Vec<(E, BigInt)>,
}

/// Polynomial in `t0^{±1}, t1^{±1}`.
pub type Laurent2 = Laurent<Exp2>;
/// Polynomial in `t^{±1}`.
pub type Laurent1 = Laurent<i32>;

impl<E: Exponent> Laurent<E> {
    pub fn zero() -> Self {
        Laurent { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        Self::monomial(c, E::zero())
    }

    pub fn monomial<C: Into<BigInt>>(c: C, e: E) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            Laurent { terms: vec![(e, c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms, combining repeats and dropping zeros.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (E, C)>,
        C: Into<BigInt>,
    {
        let mut v: Vec<(E, BigInt)> = terms.into_iter().map(|(e, c)| (e, c.into())).collect();
        v.sort_by_key(|a| a.0);
        Laurent { terms: combine_sorted(v) }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == E::zero() && self.terms[0].1.is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (E, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: E) -> BigInt {
        match self.terms.binary_search_by(|(x, _)| x.cmp(&e)) {
            Ok(k) => self.terms[k].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Returns `Some(c)` when the polynomial is the constant `c` (including 0).
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(e, c)] if *e == E::zero() => Some(c.clone()),
            _ => None,
        }
    }

    /// Multiplies by the unit monomial with exponent `e`.
    pub fn shift(&self, e: E) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(x, c)| (x.add(e), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Laurent {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Maps every exponent through `f`; `f` must be injective.
    pub fn map_exponents<F: Fn(E) -> E>(&self, f: F) -> Self {
        let mut v: Vec<(E, BigInt)> = self.terms.iter().map(|(e, c)| (f(*e), c.clone())).collect();
        v.sort_by_key(|a| a.0);
        Laurent { terms: v }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `self += a * b`, the inner step of every sparse contraction.
    pub fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let prod = a * b;
        *self = merge(&self.terms, &prod.terms, false);
    }

    /// Componentwise minimum and maximum exponent, `None` for zero.
    pub fn exponent_box(&self) -> Option<(E, E)> {
        let mut it = self.terms.iter().map(|(e, _)| *e);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.meet(e), hi.join(e))))
    }

    fn leading(&self) -> Option<&(E, BigInt)> {
        self.terms.last()
    }

    /// Exact quotient `q` with `q * den == self`.
    ///
    /// Both sides are shifted into non-negative exponents and divided with
    /// the lexicographic monomial order; the result is verified by
    /// multiplication before it is returned.
    pub fn exact_div(&self, den: &Self) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (num_lo, num_hi) = self.exponent_box().unwrap();
        let (den_lo, den_hi) = den.exponent_box().unwrap();
        let num = self.shift(E::zero().sub(num_lo));
        let d = den.shift(E::zero().sub(den_lo));
        // Newton polytopes add under multiplication, so every quotient
        // exponent lies componentwise below this bound.
        let q_hi = num_hi.sub(num_lo).sub(den_hi.sub(den_lo));
        let (d_lead, d_lc) = d.leading().cloned().unwrap();

        let mut rem = num;
        let mut quotient: Vec<(E, BigInt)> = Vec::new();
        while let Some((r_lead, r_lc)) = rem.leading().cloned() {
            if !d_lead.le_all(r_lead) {
                return Err(PolyError::NotDivisible);
            }
            let qe = r_lead.sub(d_lead);
            if !qe.le_all(q_hi) {
                return Err(PolyError::NotDivisible);
            }
            let (qc, rc) = r_lc.div_rem(&d_lc);
            if !rc.is_zero() {
                return Err(PolyError::NotDivisible);
            }
            let step = d.shift(qe).scale(&qc);
            rem = &rem - &step;
            quotient.push((qe, qc));
        }
        let q = Laurent::from_terms(quotient).shift(num_lo.sub(den_lo));
        if &(&q * den) != self {
            return Err(PolyError::NotDivisible);
        }
        Ok(q)
    }
}

fn combine_sorted<E: Exponent>(v: Vec<(E, BigInt)>) -> Vec<(E, BigInt)> {
    let mut out: Vec<(E, BigInt)> = Vec::with_capacity(v.len());
    for (e, c) in v {
        match out.last_mut() {
            Some((le, lc)) if *le == e => *lc += c,
            _ => out.push((e, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

fn merge<E: Exponent>(a: &[(E, BigInt)], b: &[(E, BigInt)], negate_b: bool) -> Laurent<E> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].0.cmp(&b[y].0) {
            Ordering::Less => {
                out.push(a[x].clone());
                x += 1;
            }
            Ordering::Greater => {
                let c = if negate_b { -&b[y].1 } else { b[y].1.clone() };
                out.push((b[y].0, c));
                y += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[x].1 - &b[y].1 } else { &a[x].1 + &b[y].1 };
                if !c.is_zero() {
                    out.push((a[x].0, c));
                }
                x += 1;
                y += 1;
            }
        }
    }
    out.extend_from_slice(&a[x..]);
    for (e, c) in &b[y..] {
        out.push((*e, if negate_b { -c } else { c.clone() }));
    }
    Laurent { terms: out }
}

impl<'a, E: Exponent> Add<&'a Laurent<E>> for &'a Laurent<E> {
    type Output = Laurent<E>;
    fn add(self, rhs: &'a Laurent<E>) -> Laurent<E> {
        merge(&self.terms, &rhs.terms, false)
    }
}

impl<'a, E: Exponent> Sub<&'a Laurent<E>> for &'a Laurent<E> {
    type Output = Laurent<E>;
    fn sub(self, rhs: &'a Laurent<E>) -> Laurent<E> {
        merge(&self.terms, &rhs.terms, true)
    }
}

impl<'a, E: Exponent> Mul<&'a Laurent<E>> for &'a Laurent<E> {
    type Output = Laurent<E>;
    fn mul(self, rhs: &'a Laurent<E>) -> Laurent<E> {
        if self.is_zero() || rhs.is_zero() {
            return Laurent::zero();
        }
        let (small, large) = if self.len() <= rhs.len() { (self, rhs) } else { (rhs, self) };
        if small.len() == 1 {
            let (e, c) = &small.terms[0];
            return Laurent {
                terms: large.terms.iter().map(|(x, y)| (x.add(*e), y * c)).collect(),
            };
        }
        let mut v = Vec::with_capacity(small.len() * large.len());
        for (e1, c1) in &small.terms {
            for (e2, c2) in &large.terms {
                v.push((e1.add(*e2), c1 * c2));
            }
        }
        v.sort_by_key(|a| a.0);
        Laurent { terms: combine_sorted(v) }
    }
}

impl<E: Exponent> Neg for &Laurent<E> {
    type Output = Laurent<E>;
    fn neg(self) -> Laurent<E> {
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<E: Exponent> $tr<Laurent<E>> for Laurent<E> {
            type Output = Laurent<E>;
            fn $m(self, rhs: Laurent<E>) -> Laurent<E> { (&self).$m(&rhs) }
        }
        impl<'a, E: Exponent> $tr<&'a Laurent<E>> for Laurent<E> {
            type Output = Laurent<E>;
            fn $m(self, rhs: &'a Laurent<E>) -> Laurent<E> { (&self).$m(rhs) }
        }
        impl<'a, E: Exponent> $tr<Laurent<E>> for &'a Laurent<E> {
            type Output = Laurent<E>;
            fn $m(self, rhs: Laurent<E>) -> Laurent<E> { self.$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl<E: Exponent> Neg for Laurent<E> {
    type Output = Laurent<E>;
    fn neg(self) -> Laurent<E> {
        -&self
    }
}

impl<E: Exponent> AddAssign<&Laurent<E>> for Laurent<E> {
    fn add_assign(&mut self, rhs: &Laurent<E>) {
        *self = merge(&self.terms, &rhs.terms, false);
    }
}

impl<E: Exponent> SubAssign<&Laurent<E>> for Laurent<E> {
    fn sub_assign(&mut self, rhs: &Laurent<E>) {
        *self = merge(&self.terms, &rhs.terms, true);
    }
}

impl<E: Exponent> std::iter::Sum for Laurent<E> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Laurent::zero(), |acc, x| acc + x)
    }
}

impl<E: Exponent> From<i64> for Laurent<E> {
    fn from(c: i64) -> Self {
        Laurent::constant(c)
    }
}

// ---------------------------------------------------------------------------
// Two-variable specifics

/// Substitutions supported by [`Laurent2::specialize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Specialization {
    /// `t1 := -t0^{-1}`, yields a polynomial in `t = t0`.
    Antidiag,
    /// `t1 := t0^{-1}`, yields a polynomial in `t = t0`.
    Diag,
    /// `t0 <-> t1`.
    Swap,
    /// `t0 := t0^{-1}, t1 := t1^{-1}`.
    Invert,
}

/// Result of [`Laurent2::monic_extremes`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Monicity {
    pub monic: bool,
    /// `(l, m)` such that the extreme terms are `t0^{l+m} t1^{m-l}` and its swap.
    pub witness: Option<(i64, i64)>,
}

impl Laurent2 {
    pub fn t0() -> Self {
        Laurent::monomial(1, Exp2::new(1, 0))
    }

    pub fn t1() -> Self {
        Laurent::monomial(1, Exp2::new(0, 1))
    }

    /// `c * t0^i * t1^j`.
    pub fn term<C: Into<BigInt>>(c: C, i: i32, j: i32) -> Self {
        Laurent::monomial(c, Exp2::new(i, j))
    }

    /// Minimum and maximum of `i - j` over the terms.
    pub fn deg_range(&self) -> Result<(i64, i64), PolyError> {
        let mut it = self.terms.iter().map(|(e, _)| e.deg());
        let first = it.next().ok_or(PolyError::ZeroPolynomial)?;
        Ok(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
    }

    /// `max deg - min deg` with `deg(t0^i t1^j) = i - j`.
    pub fn span(&self) -> Result<i64, PolyError> {
        let (lo, hi) = self.deg_range()?;
        Ok(hi - lo)
    }

    pub fn swap(&self) -> Self {
        self.map_exponents(|e| Exp2::new(e.j, e.i))
    }

    pub fn invert(&self) -> Self {
        self.map_exponents(|e| Exp2::new(-e.i, -e.j))
    }

    pub fn antidiag(&self) -> Laurent1 {
        Laurent1::from_terms(self.terms.iter().map(|(e, c)| {
            let c = if e.j.rem_euclid(2) == 1 { -c } else { c.clone() };
            (e.i - e.j, c)
        }))
    }

    pub fn diag(&self) -> Laurent1 {
        Laurent1::from_terms(self.terms.iter().map(|(e, c)| (e.i - e.j, c.clone())))
    }

    /// Applies a swap/invert substitution. For the one-variable reductions
    /// use [`Laurent2::antidiag`] and [`Laurent2::diag`].
    pub fn specialize(&self, mode: Specialization) -> Specialized {
        match mode {
            Specialization::Antidiag => Specialized::One(self.antidiag()),
            Specialization::Diag => Specialized::One(self.diag()),
            Specialization::Swap => Specialized::Two(self.swap()),
            Specialization::Invert => Specialized::Two(self.invert()),
        }
    }

    pub fn is_swap_symmetric(&self) -> bool {
        self.swap() == *self
    }

    /// Monicity in the sense used for the fiberedness criterion: the extreme
    /// degree parts are single coefficient-one monomials, swap images of each
    /// other, with even total exponent.
    pub fn monic_extremes(&self) -> Result<Monicity, PolyError> {
        let (lo, hi) = self.deg_range()?;
        let top: Vec<_> = self.terms.iter().filter(|(e, _)| e.deg() == hi).collect();
        let bottom: Vec<_> = self.terms.iter().filter(|(e, _)| e.deg() == lo).collect();
        let not_monic = Monicity { monic: false, witness: None };
        let (&(te, ref tc), &(be, ref bc)) = match (top.as_slice(), bottom.as_slice()) {
            ([t], [b]) => (*t, *b),
            _ => return Ok(not_monic),
        };
        if !tc.is_one() || !bc.is_one() || be != Exp2::new(te.j, te.i) {
            return Ok(not_monic);
        }
        let total = te.i as i64 + te.j as i64;
        if total.rem_euclid(2) != 0 {
            return Ok(not_monic);
        }
        Ok(Monicity {
            monic: true,
            witness: Some(((te.i as i64 - te.j as i64) / 2, total / 2)),
        })
    }

    /// Structured form: `[i, j, c]` triples in canonical order.
    pub fn to_triples(&self) -> Vec<(i32, i32, BigInt)> {
        self.canonical_terms().into_iter().map(|(e, c)| (e.i, e.j, c.clone())).collect()
    }

    /// Terms sorted by `(i - j, i)` ascending, the canonical text order.
    pub fn canonical_terms(&self) -> Vec<(Exp2, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (*e, c)).collect();
        v.sort_by_key(|(e, _)| (e.deg(), e.i));
        v
    }
}

/// Output of [`Laurent2::specialize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Specialized {
    One(Laurent1),
    Two(Laurent2),
}

// ---------------------------------------------------------------------------
// One-variable specifics

impl Laurent1 {
    pub fn t() -> Self {
        Laurent::monomial(1, 1)
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// `max exponent - min exponent`.
    pub fn breadth(&self) -> Result<i64, PolyError> {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => Ok(hi as i64 - lo as i64),
            _ => Err(PolyError::ZeroPolynomial),
        }
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.last().map(|(_, c)| c)
    }

    pub fn trailing_coeff(&self) -> Option<&BigInt> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn eval_one(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c.clone()).sum()
    }

    /// `p(t) -> p(t^k)`.
    pub fn dilate(&self, k: i32) -> Self {
        assert!(k != 0, "dilation by zero is not injective");
        self.map_exponents(|e| e * k)
    }

    /// `p(t) -> p(t^{-1})`.
    pub fn reflect(&self) -> Self {
        self.map_exponents(|e| -e)
    }

    pub fn is_palindromic(&self) -> bool {
        self.reflect() == *self
    }

    /// Leading coefficient is a unit (Conway convention for monic).
    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(|c| c.abs().is_one())
    }

    pub fn to_pairs(&self) -> Vec<(i32, BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c.clone())).collect()
    }
}

// ---------------------------------------------------------------------------
// Text form

fn write_terms<W: fmt::Write>(
    f: &mut W,
    terms: &[(Vec<(&str, i32)>, &BigInt)],
) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (k, (vars, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        let mono: Vec<String> = vars
            .iter()
            .filter(|(_, e)| *e != 0)
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        if mono.is_empty() {
            write!(f, "{a}")?;
        } else if a.is_one() {
            f.write_str(&mono.join("*"))?;
        } else {
            write!(f, "{a}*{}", mono.join("*"))?;
        }
    }
    Ok(())
}

impl fmt::Display for Laurent2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self
            .canonical_terms()
            .into_iter()
            .map(|(e, c)| (vec![("t0", e.i), ("t1", e.j)], c))
            .collect();
        write_terms(f, &terms)
    }
}

impl fmt::Display for Laurent1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self.terms.iter().map(|(e, c)| (vec![("t", *e)], c)).collect();
        write_terms(f, &terms)
    }
}

impl<E: Exponent> fmt::Debug for Laurent<E>
where
    Laurent<E>: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

/// Parses a sum of signed terms such as `3 - 4*t1 + 2*t0^-1*t1^2`.
/// `vars` lists the accepted variable names; factors may repeat and appear
/// in any order, exponents may be written `^-2` or `^(-2)`.
fn parse_terms(input: &str, vars: &[&str]) -> Result<Vec<(Vec<i32>, BigInt)>, PolyError> {
    let err = |reason: &str| PolyError::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err("empty input"));
    }
    // split at top-level + / - that are not exponent signs
    let bytes = s.as_bytes();
    let mut pieces: Vec<(bool, &str)> = Vec::new();
    let mut start = 0;
    let mut neg = false;
    let mut k = 0;
    if bytes[0] == b'+' || bytes[0] == b'-' {
        neg = bytes[0] == b'-';
        start = 1;
        k = 1;
    }
    while k < bytes.len() {
        let ch = bytes[k];
        if (ch == b'+' || ch == b'-') && k > start && bytes[k - 1] != b'^' && bytes[k - 1] != b'(' {
            pieces.push((neg, &s[start..k]));
            neg = ch == b'-';
            start = k + 1;
        }
        k += 1;
    }
    pieces.push((neg, &s[start..]));

    let mut out = Vec::new();
    for (neg, piece) in pieces {
        if piece.is_empty() {
            return Err(err("dangling sign"));
        }
        let mut coeff = BigInt::one();
        let mut exps = vec![0i32; vars.len()];
        for factor in piece.split('*') {
            if factor.is_empty() {
                return Err(err("empty factor"));
            }
            if factor.chars().all(|c| c.is_ascii_digit()) {
                coeff *= BigInt::from_str(factor).map_err(|_| err("bad integer"))?;
                continue;
            }
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e = e.trim_start_matches('(').trim_end_matches(')');
                    (n, e.parse::<i32>().map_err(|_| err("bad exponent"))?)
                }
                None => (factor, 1),
            };
            let slot = vars.iter().position(|v| *v == name).ok_or_else(|| err("unknown variable"))?;
            exps[slot] += exp;
        }
        if neg {
            coeff = -coeff;
        }
        out.push((exps, coeff));
    }
    Ok(out)
}

impl FromStr for Laurent2 {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        let terms = parse_terms(s, &["t0", "t1"])?;
        Ok(Laurent::from_terms(terms.into_iter().map(|(e, c)| (Exp2::new(e[0], e[1]), c))))
    }
}

impl FromStr for Laurent1 {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        let terms = parse_terms(s, &["t"])?;
        Ok(Laurent::from_terms(terms.into_iter().map(|(e, c)| (e[0], c))))
    }
}

fn serialize_coeff<S: SerializeSeq>(seq: &mut S, c: &BigInt) -> Result<(), S::Error> {
    match c.to_i64() {
        Some(x) => seq.serialize_element(&x),
        None => seq.serialize_element(&c.to_string()),
    }
}

struct Triple<'a>(i32, i32, &'a BigInt);

impl Serialize for Triple<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(3))?;
        seq.serialize_element(&self.0)?;
        seq.serialize_element(&self.1)?;
        serialize_coeff(&mut seq, self.2)?;
        seq.end()
    }
}

impl Serialize for Laurent2 {
    /// List of `[i, j, c]` triples in canonical order. Coefficients beyond
    /// `i64` are emitted as decimal strings.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self.canonical_terms();
        let mut seq = s.serialize_seq(Some(terms.len()))?;
        for (e, c) in terms {
            seq.serialize_element(&Triple(e.i, e.j, c))?;
        }
        seq.end()
    }
}

struct Pair<'a>(i32, &'a BigInt);

impl Serialize for Pair<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&self.0)?;
        serialize_coeff(&mut seq, self.1)?;
        seq.end()
    }
}

impl Serialize for Laurent1 {
    /// List of `[k, c]` pairs in ascending exponent order.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            seq.serialize_element(&Pair(*e, c))?;
        }
        seq.end()
    }
}

// ---------------------------------------------------------------------------
// Quotients

/// `num / den` over `Z[t0^{±1}, t1^{±1}]`, compared by cross-multiplication.
#[derive(Clone)]
pub struct Rat2 {
    num: Laurent2,
    den: Laurent2,
}

impl Rat2 {
    pub fn new(num: Laurent2, den: Laurent2) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        Ok(Rat2 { num, den })
    }

    pub fn zero() -> Self {
        Rat2::from(Laurent2::zero())
    }

    pub fn one() -> Self {
        Rat2::from(Laurent2::one())
    }

    pub fn numer(&self) -> &Laurent2 {
        &self.num
    }

    pub fn denom(&self) -> &Laurent2 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn checked_div(&self, rhs: &Rat2) -> Result<Rat2, PolyError> {
        if rhs.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        Ok(Rat2 {
            num: &self.num * &rhs.den,
            den: &self.den * &rhs.num,
        })
    }

    /// Reduces to a Laurent polynomial when the quotient is exact.
    pub fn to_laurent(&self) -> Result<Laurent2, PolyError> {
        self.num.exact_div(&self.den)
    }

    /// `t0 -> t0^{-1}, t1 -> t1^{-1}` on numerator and denominator.
    pub fn invert(&self) -> Rat2 {
        Rat2 { num: self.num.invert(), den: self.den.invert() }
    }

    pub fn swap(&self) -> Rat2 {
        Rat2 { num: self.num.swap(), den: self.den.swap() }
    }

    /// `span(num) - span(den)`; well defined because span is additive.
    pub fn span(&self) -> Result<i64, PolyError> {
        Ok(self.num.span()? - self.den.span()?)
    }

    pub fn scale(&self, p: &Laurent2) -> Rat2 {
        Rat2 { num: &self.num * p, den: self.den.clone() }
    }
}

impl From<Laurent2> for Rat2 {
    fn from(p: Laurent2) -> Self {
        Rat2 { num: p, den: Laurent2::one() }
    }
}

impl PartialEq for Rat2 {
    fn eq(&self, other: &Rat2) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for Rat2 {}

impl fmt::Debug for Rat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl<'a> Add<&'a Rat2> for &'a Rat2 {
    type Output = Rat2;
    fn add(self, rhs: &'a Rat2) -> Rat2 {
        if self.den == rhs.den {
            return Rat2 { num: &self.num + &rhs.num, den: self.den.clone() };
        }
        Rat2 {
            num: &self.num * &rhs.den + &rhs.num * &self.den,
            den: &self.den * &rhs.den,
        }
    }
}

impl<'a> Sub<&'a Rat2> for &'a Rat2 {
    type Output = Rat2;
    fn sub(self, rhs: &'a Rat2) -> Rat2 {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Rat2> for &'a Rat2 {
    type Output = Rat2;
    fn mul(self, rhs: &'a Rat2) -> Rat2 {
        Rat2 { num: &self.num * &rhs.num, den: &self.den * &rhs.den }
    }
}

impl Neg for &Rat2 {
    type Output = Rat2;
    fn neg(self) -> Rat2 {
        Rat2 { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for Rat2 {
    type Output = Rat2;
    fn neg(self) -> Rat2 {
        -&self
    }
}

macro_rules! rat_owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Rat2> for Rat2 {
            type Output = Rat2;
            fn $m(self, rhs: Rat2) -> Rat2 { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Rat2> for Rat2 {
            type Output = Rat2;
            fn $m(self, rhs: &'a Rat2) -> Rat2 { (&self).$m(rhs) }
        }
    )*};
}
rat_owned_ops!(Add add, Sub sub, Mul mul);
