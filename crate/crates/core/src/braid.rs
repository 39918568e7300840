//! Braid words as link presentations.
//!
//! A word is a strand count plus a sequence of signed Artin generators:
//! `+i` is `σ_i`, `-i` is `σ_i^{-1}`, with `1 <= |i| <= strands - 1`.
//! The text form is `"n: g1 g2 ... gk"`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("braid syntax error in {input:?}: {reason}")]
    Syntax { input: String, reason: String },
    #[error("generator {letter} out of range for {strands} strands")]
    IndexOutOfRange { letter: i32, strands: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    fn apply(self, g: i32) -> i32 {
        match self {
            Sign::Positive => g,
            Sign::Negative => -g,
        }
    }
}

/// Moves relating presentations of the same link (conjugate, stabilize)
/// or of its mirror image / reverse (mirror, inverse).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkovMove {
    Conjugate(i32),
    Stabilize(Sign),
    Mirror,
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComposeMode {
    ConnectedSum,
    SplitUnion,
}

/// Permutation of `1..=n`, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of the 1-based point `k`.
    pub fn image(&self, k: usize) -> usize {
        self.images[k - 1] + 1
    }

    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.images.len()];
        let mut cycles = 0;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.images[k];
            }
        }
        cycles
    }
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::Syntax {
                input: format!("{strands}:"),
                reason: "strand count must be at least 1".into(),
            });
        }
        for &g in &letters {
            if g == 0 || g.unsigned_abs() as usize >= strands {
                return Err(BraidError::IndexOutOfRange { letter: g, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// The trivial braid on `strands` strands.
    pub fn identity(strands: usize) -> Self {
        BraidWord::new(strands, Vec::new()).expect("identity braid needs at least one strand")
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|g| g.signum() as i64).sum()
    }

    /// Strand permutation of the braid (ignores crossing signs).
    pub fn permutation(&self) -> Permutation {
        // pos[s] = where the strand starting at s currently is
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &g in &self.letters {
            let i = g.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        // at[p] = strand occupying position p at the bottom
        let mut images = vec![0; self.strands];
        for (p, &s) in at.iter().enumerate() {
            images[s] = p;
        }
        Permutation { images }
    }

    /// Number of components of the closure.
    pub fn components(&self) -> usize {
        self.permutation().cycle_count()
    }

    pub fn apply(&self, mv: MarkovMove) -> Result<BraidWord, BraidError> {
        match mv {
            MarkovMove::Conjugate(g) => {
                let mut letters = Vec::with_capacity(self.letters.len() + 2);
                letters.push(g);
                letters.extend_from_slice(&self.letters);
                letters.push(-g);
                BraidWord::new(self.strands, letters)
            }
            MarkovMove::Stabilize(sign) => {
                let mut letters = self.letters.clone();
                letters.push(sign.apply(self.strands as i32));
                BraidWord::new(self.strands + 1, letters)
            }
            MarkovMove::Mirror => Ok(self.mirror()),
            MarkovMove::Inverse => Ok(self.inverse()),
        }
    }

    pub fn mirror(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().map(|g| -g).collect(),
        }
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|g| -g).collect(),
        }
    }

    /// Word concatenation in the same braid group.
    pub fn then(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord::new(self.strands.max(other.strands), letters)
    }

    fn shifted(&self, by: usize) -> impl Iterator<Item = i32> + '_ {
        self.letters.iter().map(move |&g| g.signum() * (g.abs() + by as i32))
    }

    pub fn compose(&self, other: &BraidWord, mode: ComposeMode) -> BraidWord {
        let (strands, shift) = match mode {
            ComposeMode::ConnectedSum => (self.strands + other.strands - 1, self.strands - 1),
            ComposeMode::SplitUnion => (self.strands + other.strands, self.strands),
        };
        let letters = self.letters.iter().copied().chain(other.shifted(shift)).collect();
        BraidWord { strands, letters }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.strands)?;
        for g in &self.letters {
            write!(f, " {g}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = BraidError;

    fn from_str(s: &str) -> Result<Self, BraidError> {
        let syntax = |reason: &str| BraidError::Syntax {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let (head, body) = s.split_once(':').ok_or_else(|| syntax("missing ':' after strand count"))?;
        let strands: usize = head.trim().parse().map_err(|_| syntax("strand count is not a positive integer"))?;
        if strands == 0 {
            return Err(syntax("strand count must be at least 1"));
        }
        let letters = body
            .split_whitespace()
            .map(|tok| tok.parse::<i32>().map_err(|_| syntax("generator is not an integer")))
            .collect::<Result<Vec<_>, _>>()?;
        if letters.contains(&0) {
            return Err(syntax("generator 0 does not exist"));
        }
        BraidWord::new(strands, letters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // as printed; one letter short of a knot diagram
    const WHITEHEAD_PRINTED: &str = "6: 4 3 2 -3 -4 5 3 2 1 -2 -3 5 4 3 -4 -5 3 2 -3 2 1 -2";
    const WHITEHEAD: &str = "6: 4 3 2 -3 -4 5 3 2 1 -2 -3 5 4 3 -4 -5 3 2 2 -3 2 1 -2";

    fn b(s: &str) -> BraidWord {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        let t = b("2: 1 1 1");
        assert_eq!(t.strands(), 2);
        assert_eq!(t.letters(), &[1, 1, 1]);
        let w = b(WHITEHEAD_PRINTED);
        assert_eq!(w.len(), 22);
        assert_eq!(w.strands(), 6);
        assert_eq!(
            "2: 3".parse::<BraidWord>(),
            Err(BraidError::IndexOutOfRange { letter: 3, strands: 2 })
        );
        assert!(matches!("2 1 1".parse::<BraidWord>(), Err(BraidError::Syntax { .. })));
        assert!(matches!("x: 1".parse::<BraidWord>(), Err(BraidError::Syntax { .. })));
        assert!(matches!("3: 1 a".parse::<BraidWord>(), Err(BraidError::Syntax { .. })));
        assert!(matches!("3: 0".parse::<BraidWord>(), Err(BraidError::Syntax { .. })));
        assert!(matches!("0:".parse::<BraidWord>(), Err(BraidError::Syntax { .. })));
        assert_eq!(b("1:").to_string(), "1:");
        assert_eq!(b("  3 :  1   -2 ").to_string(), "3: 1 -2");
    }

    #[test]
    fn components_and_writhe() {
        assert_eq!(BraidWord::identity(3).components(), 3);
        assert_eq!(b("2: 1").components(), 1);
        assert_eq!(b(WHITEHEAD_PRINTED).components(), 2);
        assert_eq!(b(WHITEHEAD).components(), 1);
        assert_eq!(b("2: 1 1").components(), 2);
        assert_eq!(BraidWord::identity(3).writhe(), 0);
        assert_eq!(b("2: 1 1 1").writhe(), 3);
        assert_eq!(b(WHITEHEAD_PRINTED).writhe(), 6);
        assert_eq!(b(WHITEHEAD).writhe(), 7);
    }

    #[test]
    fn moves() {
        let s = b("2: 1").apply(MarkovMove::Stabilize(Sign::Positive)).unwrap();
        assert_eq!(s.to_string(), "3: 1 2");
        let c = b("2: 1 1 1").apply(MarkovMove::Conjugate(1)).unwrap();
        assert_eq!(c.to_string(), "2: 1 1 1 1 -1");
        assert_eq!(b("2: 1 1 1").mirror().to_string(), "2: -1 -1 -1");
        assert_eq!(b("3: 1 -2 2").inverse().to_string(), "3: -2 2 -1");
        assert!(b("2: 1").apply(MarkovMove::Conjugate(2)).is_err());
    }

    #[test]
    fn composition() {
        let t = b("2: 1 1 1");
        assert_eq!(t.compose(&t, ComposeMode::ConnectedSum).to_string(), "3: 1 1 1 2 2 2");
        let u = b("2: 1");
        assert_eq!(u.compose(&u, ComposeMode::SplitUnion).to_string(), "4: 1 3");
    }

    fn arb_word() -> impl Strategy<Value = BraidWord> {
        (2usize..=5).prop_flat_map(|n| {
            let gen = (1..n as i32, any::<bool>()).prop_map(|(g, s)| if s { g } else { -g });
            prop::collection::vec(gen, 0..10).prop_map(move |l| BraidWord::new(n, l).unwrap())
        })
    }

    proptest! {
        #[test]
        fn component_count_invariants(w in arb_word(), g in 1i32..=4, other in arb_word()) {
            let g = 1 + (g - 1) % (w.strands() as i32 - 1);
            prop_assert_eq!(w.apply(MarkovMove::Conjugate(g)).unwrap().components(), w.components());
            prop_assert_eq!(w.apply(MarkovMove::Conjugate(-g)).unwrap().components(), w.components());
            for s in [Sign::Positive, Sign::Negative] {
                prop_assert_eq!(w.apply(MarkovMove::Stabilize(s)).unwrap().components(), w.components());
            }
            prop_assert_eq!(w.mirror().writhe(), -w.writhe());
            prop_assert_eq!(w.mirror().components(), w.components());
            let split = w.compose(&other, ComposeMode::SplitUnion);
            prop_assert_eq!(split.components(), w.components() + other.components());
            let perm = split.permutation();
            let (pa, pb) = (w.permutation(), other.permutation());
            for k in 1..=w.strands() {
                prop_assert_eq!(perm.image(k), pa.image(k));
            }
            for k in 1..=other.strands() {
                prop_assert_eq!(perm.image(k + w.strands()), pb.image(k) + w.strands());
            }
            prop_assert_eq!(w.to_string().parse::<BraidWord>().unwrap(), w);
        }
    }
}
