//! Alexander polynomial of braid closures via the reduced Burau representation:
//! `Δ(t) ≐ det(I - ρ(b)) / (1 + t + ... + t^{n-1})`, then normalized.
//!
//! Normalization: knots are made symmetric with `Δ(1) = 1`. Links are
//! centered when the breadth is even and given a positive leading
//! coefficient; an odd breadth cannot be centered with integer exponents, so
//! the exponents are placed in `[-(b-1)/2, (b+1)/2]` and the result is flagged.

use serde::Serialize;

use crate::braid::BraidWord;
use crate::poly2::{Laurent1, Laurent2, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Alexander {
    pub poly: Laurent1,
    /// False only for odd breadth (link with an even number of components).
    pub centered: bool,
}

/// Outcome of comparing two one-variable evaluations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnitMatch {
    Exact,
    /// `lhs = sign · t^shift · rhs`
    Unit { sign: i8, shift: i32 },
    Mismatch,
}

impl UnitMatch {
    pub fn is_match(&self) -> bool {
        !matches!(self, UnitMatch::Mismatch)
    }
}

/// `ρ(b)` in the reduced Burau representation, `(n-1) × (n-1)`.
pub fn burau_matrix(b: &BraidWord) -> Vec<Vec<Laurent1>> {
    let d = b.strands() - 1;
    let mut m: Vec<Vec<Laurent1>> = (0..d)
        .map(|r| (0..d).map(|c| if r == c { Laurent1::one() } else { Laurent1::zero() }).collect())
        .collect();
    let t = Laurent1::t();
    let ti = Laurent1::monomial(1, -1);
    // ρ(g1 ... gk) = ρ(g1) ··· ρ(gk): apply generators as row operations from the right end
    for &g in b.letters().iter().rev() {
        let k = g.unsigned_abs() as usize - 1;
        let (prev, own, next) = if g > 0 { (&t, -&t, Laurent1::one()) } else { (&Laurent1::one(), -&ti, ti.clone()) };
        let row: Vec<Laurent1> = (0..d)
            .map(|c| {
                let mut x = &own * &m[k][c];
                if k > 0 {
                    x.add_mul_assign(prev, &m[k - 1][c]);
                }
                if k + 1 < d {
                    x.add_mul_assign(&next, &m[k + 1][c]);
                }
                x
            })
            .collect();
        m[k] = row;
    }
    m
}

/// Fraction-free (Bareiss) determinant with exact division.
pub fn determinant(mut m: Vec<Vec<Laurent1>>) -> Result<Laurent1, PolyError> {
    let n = m.len();
    if n == 0 {
        return Ok(Laurent1::one());
    }
    let mut sign = 1i64;
    let mut prev = Laurent1::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(Laurent1::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    Ok(&Laurent1::from(sign) * &m[n - 1][n - 1])
}

/// Raw `det(I - ρ(b)) / (1 + ... + t^{n-1})`, defined up to units.
pub fn alexander_raw(b: &BraidWord) -> Result<Laurent1, PolyError> {
    let n = b.strands();
    if n == 1 {
        return Ok(Laurent1::one());
    }
    let rho = burau_matrix(b);
    let m: Vec<Vec<Laurent1>> = rho
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, x)| if r == c { &Laurent1::one() - x } else { -x })
                .collect()
        })
        .collect();
    let det = determinant(m)?;
    let cyclotomic: Laurent1 = (0..n as i32).map(|k| Laurent1::monomial(1, k)).sum();
    det.exact_div(&cyclotomic)
}

/// Normalizes a polynomial defined up to `±t^k`.
pub fn normalize(p: &Laurent1, components: usize) -> Alexander {
    let (Some(lo), Some(hi)) = (p.min_exp(), p.max_exp()) else {
        return Alexander { poly: Laurent1::zero(), centered: true };
    };
    let breadth = hi - lo;
    let centered = breadth % 2 == 0;
    let target_lo = if centered { -breadth / 2 } else { -(breadth - 1) / 2 };
    let mut q = p.shift(target_lo - lo);
    let negate = if components == 1 {
        q.eval_one() < 0.into()
    } else {
        q.leading_coeff().is_some_and(|c| *c < 0.into())
    };
    if negate {
        q = -q;
    }
    Alexander { poly: q, centered }
}

pub fn alexander_closure(b: &BraidWord) -> Result<Alexander, PolyError> {
    Ok(normalize(&alexander_raw(b)?, b.components()))
}

/// Degree (breadth) of a normalized Alexander polynomial; `None` for zero.
pub fn breadth(a: &Alexander) -> Option<i64> {
    a.poly.breadth().ok()
}

/// Alexander polynomial read off the antidiagonal evaluation
/// `LG(t0, -t0^-1) = Δ(t0^2)`; `None` when an odd exponent shows up.
pub fn alexander_from_lg(lg: &Laurent2, components: usize) -> Option<Alexander> {
    let anti = lg.antidiag();
    if anti.terms().any(|(e, _)| e % 2 != 0) {
        return None;
    }
    Some(normalize(&anti.map_exponents(|e| e / 2), components))
}

/// Compares `lhs` with `rhs` up to a unit `±t^k`.
pub fn match_up_to_unit(lhs: &Laurent1, rhs: &Laurent1) -> UnitMatch {
    if lhs == rhs {
        return UnitMatch::Exact;
    }
    let (Some(a), Some(b)) = (lhs.min_exp(), rhs.min_exp()) else {
        return UnitMatch::Mismatch;
    };
    let shifted = rhs.shift(a - b);
    if *lhs == shifted {
        UnitMatch::Unit { sign: 1, shift: a - b }
    } else if *lhs == -&shifted {
        UnitMatch::Unit { sign: -1, shift: a - b }
    } else {
        UnitMatch::Mismatch
    }
}

/// The two evaluation identities, `LG(t0, -t0^-1) = Δ(t0^2)` and `LG(t0, t0^-1) = Δ(t0)^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvaluationCheck {
    pub antidiag: UnitMatch,
    pub diag: UnitMatch,
}

impl EvaluationCheck {
    /// Exact for knots, up to a unit for links.
    pub fn holds(&self, components: usize) -> bool {
        if components == 1 {
            self.antidiag == UnitMatch::Exact && self.diag == UnitMatch::Exact
        } else {
            self.antidiag.is_match() && self.diag.is_match()
        }
    }
}

pub fn evaluation_check(lg: &Laurent2, delta: &Alexander) -> EvaluationCheck {
    EvaluationCheck {
        antidiag: match_up_to_unit(&lg.antidiag(), &delta.poly.dilate(2)),
        diag: match_up_to_unit(&lg.diag(), &(&delta.poly * &delta.poly)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(s: &str) -> BraidWord {
        s.parse().unwrap()
    }

    fn l(s: &str) -> Laurent1 {
        s.parse().unwrap()
    }

    #[test]
    fn known_knots() {
        assert_eq!(alexander_closure(&b("1:")).unwrap().poly, Laurent1::one());
        assert_eq!(alexander_closure(&b("2: 1")).unwrap().poly, Laurent1::one());
        assert_eq!(alexander_closure(&b("2: 1 1 1")).unwrap().poly, l("t - 1 + t^-1"));
        assert_eq!(alexander_closure(&b("2: -1 -1 -1")).unwrap().poly, l("t - 1 + t^-1"));
        assert_eq!(alexander_closure(&b("3: 1 -2 1 -2")).unwrap().poly, l("-t + 3 - t^-1"));
        assert_eq!(alexander_closure(&b("2: 1 1 1 1 1")).unwrap().poly, l("t^2 - t + 1 - t^-1 + t^-2"));
    }

    #[test]
    fn links() {
        // split: zero
        assert!(alexander_closure(&b("2:")).unwrap().poly.is_zero());
        assert!(alexander_closure(&b("3: 1")).unwrap().poly.is_zero());
        // Hopf link: odd breadth, uncentered
        let hopf = alexander_closure(&b("2: 1 1")).unwrap();
        assert!(!hopf.centered);
        assert_eq!(hopf.poly, l("t - 1"));
        assert_eq!(breadth(&hopf), Some(1));
    }

    #[test]
    fn burau_inverse_pairs() {
        let m = burau_matrix(&b("4: 1 -1 2 3 -3 -2"));
        for (r, row) in m.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                assert_eq!(x.is_one(), r == c);
                assert!(r == c || x.is_zero());
            }
        }
    }

    #[test]
    fn determinant_examples() {
        let m = vec![vec![l("t"), l("1")], vec![l("1"), l("t^-1")]];
        assert!(determinant(m).unwrap().is_zero());
        let m = vec![vec![l("0"), l("2")], vec![l("3"), l("t")]];
        assert_eq!(determinant(m).unwrap(), l("-6"));
    }

    #[test]
    fn unit_matching() {
        assert_eq!(match_up_to_unit(&l("t - 1"), &l("t - 1")), UnitMatch::Exact);
        assert_eq!(match_up_to_unit(&l("t^2 - t"), &l("t - 1")), UnitMatch::Unit { sign: 1, shift: 1 });
        assert_eq!(match_up_to_unit(&l("1 - t"), &l("t - 1")), UnitMatch::Unit { sign: -1, shift: 0 });
        assert_eq!(match_up_to_unit(&l("t + 1"), &l("t - 1")), UnitMatch::Mismatch);
    }

    fn arb_word() -> impl Strategy<Value = BraidWord> {
        (2usize..=4).prop_flat_map(|n| {
            let g = (1..n as i32, any::<bool>()).prop_map(|(g, s)| if s { g } else { -g });
            prop::collection::vec(g, 0..10).prop_map(move |l| BraidWord::new(n, l).unwrap())
        })
    }

    proptest! {
        #[test]
        fn markov_invariance(w in arb_word(), k in 1i32..=3, pos in any::<bool>()) {
            use crate::braid::{MarkovMove, Sign};
            let base = alexander_closure(&w).unwrap();
            let k = 1 + (k - 1) % (w.strands() as i32 - 1);
            let conj = alexander_closure(&w.apply(MarkovMove::Conjugate(if pos { k } else { -k })).unwrap()).unwrap();
            let sign = if pos { Sign::Positive } else { Sign::Negative };
            let stab = alexander_closure(&w.apply(MarkovMove::Stabilize(sign)).unwrap()).unwrap();
            prop_assert!(match_up_to_unit(&conj.poly, &base.poly).is_match());
            prop_assert!(match_up_to_unit(&stab.poly, &base.poly).is_match());
            if w.components() == 1 {
                prop_assert_eq!(&conj, &base);
                prop_assert_eq!(&stab, &base);
                prop_assert!(base.poly.is_palindromic());
                prop_assert_eq!(base.poly.eval_one(), 1.into());
            }
        }
    }
}
