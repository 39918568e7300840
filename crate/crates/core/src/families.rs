//! Closed forms and recursions for twist knots, two-bridge links and the
//! pretzel knots K(2, -1, r), plus the skein coefficients they are built from.
//!
//! Notation: `a_i(n)` are the full-twist coefficients, `ã_i(n)` the same with
//! `t0, t1` inverted. `x(n), y(n), z(n)` are the half-twist coefficients over
//! the common denominator `(t0 + 1)(t1 + 1)(t0 - t1)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::poly2::{Laurent2, PolyError, Rat2};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("pretzel ({0}, {1}, {2}) is not a knot: more than one parameter is even")]
    NotAKnot(i64, i64, i64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("span {found} of {what} differs from the expected {expected}")]
    SpanViolation { what: String, expected: i64, found: i64 },
    #[error("invalid family spec {input:?}: {reason}")]
    Syntax { input: String, reason: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Which Corollary-style full-twist relation to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FullTwistRelation {
    /// Coefficients `(a1, 1 - a1, 2(t0-1)(t1-1)/(t0t1-1) (n - a1))`.
    Rel2,
    /// Coefficients `(a1, a2, a3)`.
    Rel3,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoBridgeCode {
    b: Vec<i64>,
}

impl TwoBridgeCode {
    pub fn new(b: Vec<i64>) -> Result<Self, FamilyError> {
        if b.is_empty() || b.iter().any(|&x| x <= 0) {
            return Err(FamilyError::Syntax {
                input: format!("{b:?}"),
                reason: "two-bridge codes are nonempty sequences of positive integers".into(),
            });
        }
        Ok(TwoBridgeCode { b })
    }

    pub fn entries(&self) -> &[i64] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PretzelCode {
    pub p: i64,
    pub q: i64,
    pub r: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Twist(i64),
    TwoBridge(TwoBridgeCode),
    Pretzel(PretzelCode),
}

fn t0() -> Laurent2 {
    Laurent2::t0()
}

fn t1() -> Laurent2 {
    Laurent2::t1()
}

fn c(k: i64) -> Laurent2 {
    Laurent2::from(k)
}

fn sign_pow(n: i64) -> Laurent2 {
    c(if n.rem_euclid(2) == 0 { 1 } else { -1 })
}

fn half_twist_denominator() -> Laurent2 {
    &(&(&t0() + &c(1)) * &(&t1() + &c(1))) * &(&t0() - &t1())
}

/// `(x(n), y(n), z(n))`: n half twists equal `x·(cup-cap) + ... `; see the module notes.
pub fn half_twist_coeffs(n: i64) -> (Rat2, Rat2, Rat2) {
    let n32 = i32::try_from(n).expect("half-twist count fits in i32");
    let (a, b) = (t0(), t1());
    let (an, bn) = (Laurent2::term(1, n32, 0), Laurent2::term(1, 0, n32));
    let s = sign_pow(n);
    let one = c(1);
    let x = &(&(&s * &(&a - &b)) + &(&an * &(&b + &one))) - &(&bn * &(&a + &one));
    let y = &(&(&(&s * &(&a + &b)) * &(&a - &b)) + &(&(&an * &(&b - &one)) * &(&b + &one)))
        - &(&(&bn * &(&a - &one)) * &(&a + &one));
    let z = &(&(&(&s * &a) * &(&b * &(&a - &b))) - &(&(&an * &b) * &(&b + &one)))
        + &(&(&bn * &a) * &(&a + &one));
    let den = half_twist_denominator();
    let mk = |num: Laurent2| Rat2::new(num, den.clone()).expect("denominator is nonzero");
    (mk(x), mk(y), mk(z))
}

/// Checks `c(n+3) = (t0+t1-1) c(n+2) + (t0+t1-t0t1) c(n+1) - t0t1 c(n)` for
/// each of `x, y, z`, the recurrence forced by the cubic skein relation.
pub fn half_twist_recurrence_holds(n: i64) -> bool {
    let k2 = Rat2::from(&(&t0() + &t1()) - &c(1));
    let k1 = Rat2::from(&(&t0() + &t1()) - &u());
    let k0 = Rat2::from(u());
    let v: Vec<_> = (0..4).map(|k| half_twist_coeffs(n + k)).collect();
    let pick = |i: usize, f: usize| match f {
        0 => v[i].0.clone(),
        1 => v[i].1.clone(),
        _ => v[i].2.clone(),
    };
    (0..3).all(|f| {
        let rhs = &(&(&k2 * &pick(2, f)) + &(&k1 * &pick(1, f))) - &(&k0 * &pick(0, f));
        pick(3, f) == rhs
    })
}

/// `a1(n) = ((t0 t1)^n - 1)/(t0 t1 - 1)` as an exact geometric sum.
pub fn a1(n: i64) -> Laurent2 {
    let n32 = i32::try_from(n).expect("twist count fits in i32");
    if n >= 0 {
        (0..n32).map(|k| Laurent2::term(1, k, k)).sum()
    } else {
        -(n32..0).map(|k| Laurent2::term(1, k, k)).sum::<Laurent2>()
    }
}

fn u() -> Laurent2 {
    Laurent2::term(1, 1, 1)
}

fn pq() -> Laurent2 {
    &(&t0() - &c(1)) * &(&t1() - &c(1))
}

/// `2(t0-1)(t1-1)/(t0t1-1) · (n - a1(n))`, reduced to a polynomial.
fn rel2_third(n: i64) -> Result<Laurent2, PolyError> {
    let num = &(&c(2) * &pq()) * &(&c(n) - &a1(n));
    num.exact_div(&(&u() - &c(1)))
}

fn a2(n: i64) -> Result<Laurent2, PolyError> {
    // (t0-1)(t1-1)(2n - a1(n)(t0t1+1))/(t0t1-1) - a1(n)
    let inner = &c(2 * n) - &(&a1(n) * &(&u() + &c(1)));
    let frac = (&pq() * &inner).exact_div(&(&u() - &c(1)))?;
    Ok(&frac - &a1(n))
}

fn a3(n: i64) -> Laurent2 {
    &(&pq() * &a1(n)) + &c(1)
}

/// Full-twist skein coefficients. All are polynomials for every `n`.
pub fn full_twist_coeffs(n: i64, relation: FullTwistRelation) -> Result<(Rat2, Rat2, Rat2), FamilyError> {
    let first = a1(n);
    let (second, third) = match relation {
        FullTwistRelation::Rel3 => (a2(n)?, a3(n)),
        FullTwistRelation::Rel2 => (&c(1) - &first, rel2_third(n)?),
    };
    Ok((first.into(), second.into(), third.into()))
}

fn tilde(rel: (Laurent2, Laurent2, Laurent2)) -> (Laurent2, Laurent2, Laurent2) {
    (rel.0.invert(), rel.1.invert(), rel.2.invert())
}

fn rel3(n: i64) -> Result<(Laurent2, Laurent2, Laurent2), PolyError> {
    Ok((a1(n), a2(n)?, a3(n)))
}

/// LG of the two-bridge link `D(b1, ..., bm)`.
pub fn lg_two_bridge(code: &TwoBridgeCode) -> Result<Laurent2, FamilyError> {
    let mut memo = HashMap::new();
    let value = two_bridge_rec(code.entries(), &mut memo)?;
    let m = code.len() as i64;
    let span = value.span()?;
    if span != 2 * m {
        return Err(FamilyError::SpanViolation { what: format!("D{:?}", code.entries()), expected: 2 * m, found: span });
    }
    Ok(value)
}

fn two_bridge_rec(b: &[i64], memo: &mut HashMap<Vec<i64>, Laurent2>) -> Result<Laurent2, FamilyError> {
    if let Some(v) = memo.get(b) {
        return Ok(v.clone());
    }
    let m = b.len();
    let value = match b {
        [] => c(1),
        [0] => Laurent2::zero(),
        [.., 0] => two_bridge_rec(&b[..m - 2], memo)?,
        [b1] => {
            let (x1, x2, _) = tilde(rel3(*b1)?);
            &x1 + &x2
        }
        _ => {
            let bm = b[m - 1];
            let (k1, k2, k3) = if m.is_multiple_of(2) { rel3(bm)? } else { tilde(rel3(bm)?) };
            let mut reduced = b[..m - 1].to_vec();
            *reduced.last_mut().unwrap() -= 1;
            let d1 = two_bridge_rec(&reduced, memo)?;
            let d2 = two_bridge_rec(&b[..m - 1], memo)?;
            let d3 = two_bridge_rec(&b[..m - 2], memo)?;
            &(&(&k1 * &d1) + &(&k2 * &d2)) + &(&k3 * &d3)
        }
    };
    memo.insert(b.to_vec(), value.clone());
    Ok(value)
}

/// LG of the twist knot `K_n` (K_1 trefoil, K_2 = 5_2, K_0 unknot).
pub fn lg_twist(n: i64) -> Result<Laurent2, FamilyError> {
    let value = match n {
        0 => c(1),
        n if n >= 1 => {
            let (v0, v1) = (Laurent2::term(1, -1, 0), Laurent2::term(1, 0, -1));
            let w = &v0 * &v1;
            let at = a1(n - 1).invert();
            let one = c(1);
            let p: Laurent2 = "-t0^-2*t1^-1 - t0^-1*t1^-2 + t0^-2 + 2*t0^-1*t1^-1 + t1^-2 - t0^-1 - t1^-1 + 1"
                .parse()
                .expect("valid literal");
            let sq = {
                let f = &(&v0 - &one) * &(&v1 - &one);
                &f * &f
            };
            let first = &p * &(&(&w * &at) + &one);
            let frac = (&(&(&w + &one) * &at) - &c(2 * (n - 1))).exact_div(&(&w - &one))?;
            let second = &sq * &frac;
            let third = &(&at * &sq) - &(&w * &at);
            &(&first + &second) + &third
        }
        n => {
            let k = a1(-n);
            let inv = &(&Laurent2::term(1, -1, 0) - &c(1)) * &(&Laurent2::term(1, 0, -1) - &c(1));
            let frac = (&pq() * &(&c(2 * n) + &(&k * &(&u() + &c(1))))).exact_div(&(&u() - &c(1)))?;
            &(&(&inv * &(&k + &frac)) + &(&pq() * &k)) + &c(1)
        }
    };
    let expected = if n == 0 { 0 } else { 4 };
    let span = value.span()?;
    if span != expected {
        return Err(FamilyError::SpanViolation { what: format!("K_{n}"), expected, found: span });
    }
    Ok(value)
}

/// Closed-form numerator for K(2, -1, r) over `(t0 + 1)(t1 + 1)(t0 - t1)`.
fn pretzel_numerator(r: i64) -> Laurent2 {
    let e = i32::try_from(r - 1).expect("pretzel parameter fits in i32");
    let (a, b, one) = (t0(), t1(), c(1));
    &(&(&(&a - &b) * &(&u() + &one)) - &(&(&Laurent2::term(1, e, 0) * &(&b - &one)) * &(&b + &one)))
        + &(&(&Laurent2::term(1, 0, e) * &(&a - &one)) * &(&a + &one))
}

/// LG of the pretzel knot K(2, -1, r), r odd and positive.
pub fn lg_pretzel_2m1r(r: i64) -> Result<Laurent2, FamilyError> {
    if r % 2 == 0 {
        return Err(FamilyError::Syntax { input: format!("pretzel:2,-1,{r}"), reason: "r must be odd".into() });
    }
    if r <= -1 {
        return Err(FamilyError::Unsupported(format!("no closed form for K(2, -1, {r}) with negative r")));
    }
    if r == 1 || r == 3 {
        return Ok(c(1));
    }
    let value = pretzel_numerator(r).exact_div(&half_twist_denominator())?;
    let span = value.span()?;
    if span != 2 * r - 6 {
        return Err(FamilyError::SpanViolation { what: format!("K(2, -1, {r})"), expected: 2 * r - 6, found: span });
    }
    Ok(value)
}

/// How a pretzel code was moved into the normalized frame (p >= 0 even, q, r odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PretzelNormalization {
    /// Cyclic rotations applied to the input.
    pub rotation: u8,
    pub mirrored: bool,
    /// q and r exchanged (reversal symmetry).
    pub swapped: bool,
    pub normalized: PretzelCode,
    /// Genus case, 1..=5.
    pub case: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilyGenus {
    pub g: i64,
    pub mu: i64,
    pub normalization: Option<PretzelNormalization>,
}

fn normalize_pretzel(code: PretzelCode) -> Result<PretzelNormalization, FamilyError> {
    let PretzelCode { p, q, r } = code;
    if p == 0 || q == 0 || r == 0 {
        return Err(FamilyError::Unsupported("pretzel parameters must be nonzero".into()));
    }
    let params = [p, q, r];
    let evens = params.iter().filter(|x| *x % 2 == 0).count();
    if evens > 1 {
        return Err(FamilyError::NotAKnot(p, q, r));
    }
    if evens == 0 {
        let unknot = params.contains(&1) && params.contains(&-1);
        return Ok(PretzelNormalization {
            rotation: 0,
            mirrored: false,
            swapped: false,
            normalized: code,
            case: if unknot { 1 } else { 2 },
        });
    }
    let rotation = params.iter().position(|x| x % 2 == 0).unwrap();
    let [mut p, mut q, mut r] = [params[rotation], params[(rotation + 1) % 3], params[(rotation + 2) % 3]];
    let mirrored = p < 0;
    if mirrored {
        (p, q, r) = (-p, -q, -r);
    }
    // K(2, q, -1) is K(2, -1, q): read it in the case-3 frame
    let swapped = p == 2 && r == -1 && q != -1;
    if swapped {
        std::mem::swap(&mut q, &mut r);
    }
    let case = if (q, r) == (1, -1) || (q, r) == (-1, 1) || (p, q, r) == (2, -1, 3) {
        1
    } else if p == 2 && q == -1 {
        3
    } else if (q > 0 && r > 0) || (q == -1 && r < 0) || (q <= -3 && r < 0) {
        4
    } else {
        // q = -1, r >= 3 (p != 2); q > 0, r < 0; q <= -3, r > 0
        5
    };
    Ok(PretzelNormalization {
        rotation: rotation as u8,
        mirrored,
        swapped,
        normalized: PretzelCode { p, q, r },
        case,
    })
}

/// Genus and component count of a family member.
pub fn family_genus(spec: &FamilySpec) -> Result<FamilyGenus, FamilyError> {
    Ok(match spec {
        FamilySpec::Twist(n) => FamilyGenus { g: i64::from(*n != 0), mu: 1, normalization: None },
        FamilySpec::TwoBridge(code) => {
            let m = code.len() as i64;
            let mu = if m % 2 == 0 { 1 } else { 2 };
            FamilyGenus { g: (m - mu + 1) / 2, mu, normalization: None }
        }
        FamilySpec::Pretzel(code) => {
            let n = normalize_pretzel(*code)?;
            let PretzelCode { q, r, .. } = n.normalized;
            let g = match n.case {
                1 => 0,
                2 => 1,
                3 => ((r - 2).abs() - 1) / 2,
                4 => (q.abs() + r.abs()) / 2,
                _ => (q.abs() + r.abs() - 2) / 2,
            };
            FamilyGenus { g, mu: 1, normalization: Some(n) }
        }
    })
}

impl FamilySpec {
    /// LG of the family member; pretzels only in the K(2, -1, r) frame and unknot cases.
    pub fn lg(&self) -> Result<Laurent2, FamilyError> {
        match self {
            FamilySpec::Twist(n) => lg_twist(*n),
            FamilySpec::TwoBridge(code) => lg_two_bridge(code),
            FamilySpec::Pretzel(code) => {
                let n = normalize_pretzel(*code)?;
                let PretzelCode { p, q, r } = n.normalized;
                let value = match (n.case, p, q) {
                    (1, ..) => c(1),
                    (3, 2, -1) => lg_pretzel_2m1r(r)?,
                    _ => {
                        return Err(FamilyError::Unsupported(format!(
                            "no closed form for pretzel ({}, {}, {})",
                            code.p, code.q, code.r
                        )))
                    }
                };
                Ok(if n.mirrored { value.invert() } else { value })
            }
        }
    }

    pub fn genus(&self) -> Result<FamilyGenus, FamilyError> {
        family_genus(self)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Twist(n) => write!(f, "twist:{n}"),
            FamilySpec::TwoBridge(code) => {
                let parts: Vec<String> = code.entries().iter().map(|b| b.to_string()).collect();
                write!(f, "2bridge:{}", parts.join(","))
            }
            FamilySpec::Pretzel(PretzelCode { p, q, r }) => write!(f, "pretzel:{p},{q},{r}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, FamilyError> {
        let syntax = |reason: &str| FamilyError::Syntax { input: s.to_string(), reason: reason.to_string() };
        let (kind, args) = s.trim().split_once(':').ok_or_else(|| syntax("expected kind:arguments"))?;
        let nums = args
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| syntax("argument is not an integer")))
            .collect::<Result<Vec<_>, _>>()?;
        match (kind.trim(), nums.as_slice()) {
            ("twist", [n]) => Ok(FamilySpec::Twist(*n)),
            ("twist", _) => Err(syntax("twist takes one integer")),
            ("2bridge", _) => TwoBridgeCode::new(nums)
                .map(FamilySpec::TwoBridge)
                .map_err(|_| syntax("two-bridge entries must be positive")),
            ("pretzel", [p, q, r]) => Ok(FamilySpec::Pretzel(PretzelCode { p: *p, q: *q, r: *r })),
            ("pretzel", _) => Err(syntax("pretzel takes three integers")),
            _ => Err(syntax("unknown family (expected twist, 2bridge or pretzel)")),
        }
    }
}
