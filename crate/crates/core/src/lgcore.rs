//! The Links-Gould engine.
//!
//! The braiding `R` on `W ⊗ W` (`W` four-dimensional, basis `e1..e4`) is
//! read from a data table, checked against its defining identities, and
//! used to build the braid-group representation on `W^{⊗n}`. The invariant
//! is the scalar `c` with
//!
//! ```text
//! trace_{2..n}((id ⊗ μ^{⊗ n-1}) · ρ(b)) = c · id_W,   μ = diag(t0^-1, -t1, -t0^-1, t1)
//! ```
//!
//! evaluated as a sparse state sum over the `4^{n-1}` trailing basis words.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::braid::BraidWord;
use crate::families;
use crate::poly2::{Laurent2, PolyError};

/// Bundled braiding table and its SHA-256.
pub const RMATRIX_TABLE: &str = include_str!("../data/rmatrix.txt");
pub const RMATRIX_SHA256: &str = "70086dfbe8ca34a87b7a29ec7b395dcf9d2f3590a9ef700997fe2161a8e2477a";

/// Largest strand count the state sum accepts (its sector index is `4^n` words).
pub const MAX_STRANDS: usize = 11;

const DIM: usize = 4;
const PAIRS: usize = DIM * DIM;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    Inverse,
    YangBaxter,
    CubicSkein,
    Markov,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Identity::Inverse => "inverse pair (r_pos * r_neg = id)",
            Identity::YangBaxter => "Yang-Baxter",
            Identity::CubicSkein => "cubic skein relation",
            Identity::Markov => "Markov trace condition",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LgError {
    #[error("R-matrix convention error: {identity} fails ({detail})")]
    Convention { identity: Identity, detail: String },
    #[error("R-matrix table checksum mismatch: expected {expected}, found {found}")]
    Checksum { expected: String, found: String },
    #[error("R-matrix table line {line}: {reason}")]
    Table { line: usize, reason: String },
    #[error("state has {found} strands, braid has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("partial trace is not scalar: {detail}")]
    ScalarViolation { detail: String },
    #[error("braid has {0} strands, the state sum supports at most {MAX_STRANDS}")]
    TooManyStrands(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Sign/flip correction applied to the table so that the cubic skein
/// relation holds for the positive crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Correction {
    AsIs,
    Negated,
    Flipped,
    NegatedFlipped,
}

/// Linear operator on `W ⊗ W`. Pair index `4*x + y` stands for `e_{x+1} ⊗ e_{y+1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct PairOperator {
    dense: Vec<Laurent2>,
    columns: Vec<Vec<(usize, Laurent2)>>,
}

impl PairOperator {
    fn from_dense(dense: Vec<Laurent2>) -> Self {
        assert_eq!(dense.len(), PAIRS * PAIRS);
        let columns = (0..PAIRS)
            .map(|input| {
                (0..PAIRS)
                    .filter(|&out| !dense[out * PAIRS + input].is_zero())
                    .map(|out| (out, dense[out * PAIRS + input].clone()))
                    .collect()
            })
            .collect();
        PairOperator { dense, columns }
    }

    pub fn identity() -> Self {
        let mut d = vec![Laurent2::zero(); PAIRS * PAIRS];
        for k in 0..PAIRS {
            d[k * PAIRS + k] = Laurent2::one();
        }
        Self::from_dense(d)
    }

    /// Coefficient of `e_out` in the image of `e_input` (pair indices).
    pub fn entry(&self, out: usize, input: usize) -> &Laurent2 {
        &self.dense[out * PAIRS + input]
    }

    /// Nonzero `(output pair, coefficient)` entries of the image of `e_input`.
    pub fn column(&self, input: usize) -> &[(usize, Laurent2)] {
        &self.columns[input]
    }

    pub fn compose(&self, rhs: &PairOperator) -> PairOperator {
        let mut d = vec![Laurent2::zero(); PAIRS * PAIRS];
        for input in 0..PAIRS {
            for (mid, c1) in rhs.column(input) {
                for (out, c2) in self.column(*mid) {
                    d[out * PAIRS + input].add_mul_assign(c2, c1);
                }
            }
        }
        Self::from_dense(d)
    }

    pub fn scale(&self, c: &Laurent2) -> PairOperator {
        Self::from_dense(self.dense.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, rhs: &PairOperator) -> PairOperator {
        Self::from_dense(self.dense.iter().zip(&rhs.dense).map(|(a, b)| a + b).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.dense.iter().all(Laurent2::is_zero)
    }

    fn negated(&self) -> PairOperator {
        Self::from_dense(self.dense.iter().map(|x| -x).collect())
    }

    /// `P R P` with `P` the tensor flip.
    fn flipped(&self) -> PairOperator {
        let flip = |p: usize| (p % DIM) * DIM + p / DIM;
        let mut d = vec![Laurent2::zero(); PAIRS * PAIRS];
        for out in 0..PAIRS {
            for input in 0..PAIRS {
                d[flip(out) * PAIRS + flip(input)] = self.entry(out, input).clone();
            }
        }
        Self::from_dense(d)
    }

    /// `(Σ_j μ_j ⟨i j| R |k j⟩)_{i,k}`: partial trace of `(id ⊗ μ) R` over the second factor.
    pub fn partial_trace(&self) -> [[Laurent2; DIM]; DIM] {
        let mu = mu_diagonal();
        std::array::from_fn(|i| {
            std::array::from_fn(|k| {
                let mut acc = Laurent2::zero();
                for (j, m) in mu.iter().enumerate() {
                    acc.add_mul_assign(m, self.entry(i * DIM + j, k * DIM + j));
                }
                acc
            })
        })
    }
}

impl fmt::Debug for PairOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for input in 0..PAIRS {
            for (out, c) in self.column(input) {
                m.entry(&(pair_label(input), pair_label(*out)), &c.to_string());
            }
        }
        m.finish()
    }
}

fn pair_label(p: usize) -> String {
    format!("e{}e{}", p / DIM + 1, p % DIM + 1)
}

/// Diagonal of μ.
pub fn mu_diagonal() -> [Laurent2; DIM] {
    [
        Laurent2::term(1, -1, 0),
        Laurent2::term(-1, 0, 1),
        Laurent2::term(-1, -1, 0),
        Laurent2::term(1, 0, 1),
    ]
}

/// Additive gradings `w: {e1..e4} -> Z` with `w(k) + w(l) = w(x) + w(y)`
/// whenever `e_x ⊗ e_y -> e_k ⊗ e_l` has a nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Grading {
    pub charges: Vec<[i64; DIM]>,
}

impl Grading {
    pub fn discover(ops: &[&PairOperator]) -> Grading {
        let mut rows: Vec<[i64; DIM]> = Vec::new();
        for op in ops {
            for input in 0..PAIRS {
                for (out, _) in op.column(input) {
                    let mut row = [0i64; DIM];
                    row[out / DIM] += 1;
                    row[out % DIM] += 1;
                    row[input / DIM] -= 1;
                    row[input % DIM] -= 1;
                    if row.iter().any(|&x| x != 0) && !rows.contains(&row) {
                        rows.push(row);
                    }
                }
            }
        }
        Grading { charges: integer_nullspace(rows) }
    }

    fn key(&self, digits: impl Iterator<Item = usize> + Clone) -> Vec<i64> {
        self.charges
            .iter()
            .map(|w| digits.clone().map(|d| w[d]).sum())
            .collect()
    }
}

/// Integer basis of the rational nullspace of `rows` (4 columns).
fn integer_nullspace(mut rows: Vec<[i64; DIM]>) -> Vec<[i64; DIM]> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..DIM {
        let Some(p) = (r..rows.len()).find(|&k| rows[k][col] != 0) else {
            continue;
        };
        rows.swap(r, p);
        for k in 0..rows.len() {
            if k != r && rows[k][col] != 0 {
                let (a, b) = (rows[r][col], rows[k][col]);
                for c in 0..DIM {
                    rows[k][c] = rows[k][c] * a - rows[r][c] * b;
                }
                let g = rows[k].iter().fold(0i64, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    rows[k].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..DIM).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            // x_f = L, x_pivot = -row[f] * L / row[pivot]
            let l = pivots.iter().enumerate().fold(1i64, |l, (k, &pc)| lcm(l, rows[k][pc].abs()));
            let mut v = [0i64; DIM];
            v[f] = l;
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[k][f] * l / rows[k][pc];
            }
            let g = v.iter().fold(0i64, |g, &x| gcd(g, x.abs()));
            v.map(|x| x / g.max(1))
        })
        .collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        a.max(b)
    } else {
        a / gcd(a, b) * b
    }
}

/// Shape of a 4×4 partial trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", content = "scalar", rename_all = "snake_case")]
pub enum TraceShape {
    Identity,
    Scalar(String),
    NotScalar,
}

impl TraceShape {
    fn of(m: &[[Laurent2; DIM]; DIM]) -> TraceShape {
        let off_zero = (0..DIM).all(|i| (0..DIM).all(|k| i == k || m[i][k].is_zero()));
        let diag_equal = (1..DIM).all(|i| m[i][i] == m[0][0]);
        match (off_zero && diag_equal, m[0][0].is_one()) {
            (true, true) => TraceShape::Identity,
            (true, false) => TraceShape::Scalar(m[0][0].to_string()),
            _ => TraceShape::NotScalar,
        }
    }
}

/// Result of the algebraic Markov check on the positive and negative crossing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkovCheck {
    pub positive: TraceShape,
    pub negative: TraceShape,
}

impl MarkovCheck {
    pub fn holds(&self) -> bool {
        self.positive == TraceShape::Identity && self.negative == TraceShape::Identity
    }
}

/// One identity of the load-time suite with its outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityResult {
    pub identity: Identity,
    pub holds: bool,
    pub detail: String,
}

/// Verified braiding data with its discovered grading.
#[derive(Debug, Clone)]
pub struct RMatrixData {
    r_pos: PairOperator,
    r_neg: PairOperator,
    correction: Correction,
    grading: Grading,
}

/// Parses the `[r_pos]` / `[r_neg]` sections of a braiding table.
pub fn parse_table(text: &str) -> Result<(PairOperator, PairOperator), LgError> {
    let mut dense: [Vec<Laurent2>; 2] = [
        vec![Laurent2::zero(); PAIRS * PAIRS],
        vec![Laurent2::zero(); PAIRS * PAIRS],
    ];
    let mut section: Option<usize> = None;
    let mut seen = [false; 2];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        let err = |reason: &str| LgError::Table { line: lineno + 1, reason: reason.to_string() };
        if line.is_empty() {
            continue;
        }
        match line {
            "[r_pos]" => {
                section = Some(0);
                seen[0] = true;
                continue;
            }
            "[r_neg]" => {
                section = Some(1);
                seen[1] = true;
                continue;
            }
            _ => {}
        }
        let s = section.ok_or_else(|| err("entry outside a section"))?;
        let (lhs, coeff) = line.split_once(':').ok_or_else(|| err("missing ':'"))?;
        let (input, output) = lhs.split_once("->").ok_or_else(|| err("missing '->'"))?;
        let pair = |t: &str| -> Result<usize, LgError> {
            let v: Vec<usize> = t
                .split_whitespace()
                .map(|x| x.parse::<usize>().map_err(|_| err("basis index is not an integer")))
                .collect::<Result<_, _>>()?;
            match v.as_slice() {
                [a, b] if (1..=DIM).contains(a) && (1..=DIM).contains(b) => Ok((a - 1) * DIM + (b - 1)),
                _ => Err(err("expected two basis indices in 1..4")),
            }
        };
        let (i, o) = (pair(input)?, pair(output)?);
        let c: Laurent2 = coeff.trim().parse().map_err(|e: PolyError| err(&e.to_string()))?;
        let slot = &mut dense[s][o * PAIRS + i];
        *slot = &*slot + &c;
    }
    if !seen[0] || !seen[1] {
        return Err(LgError::Table { line: 0, reason: "both [r_pos] and [r_neg] sections are required".into() });
    }
    let [pos, neg] = dense;
    Ok((PairOperator::from_dense(pos), PairOperator::from_dense(neg)))
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs the inverse, Yang-Baxter and cubic identities on a candidate pair.
pub fn identity_suite(pos: &PairOperator, neg: &PairOperator) -> Vec<IdentityResult> {
    let id = PairOperator::identity();
    let inverse = pos.compose(neg) == id && neg.compose(pos) == id;

    let grading = Grading::discover(&[pos, neg]);
    let ybe_bad = (0..(DIM * DIM * DIM) as u64)
        .filter(|&w| {
            let v = StateVector::basis(3, w);
            let lhs = sparse_apply(pos, neg, &grading, &[1, 2, 1], &v);
            let rhs = sparse_apply(pos, neg, &grading, &[2, 1, 2], &v);
            lhs != rhs
        })
        .count();

    let t0 = Laurent2::t0();
    let t1 = Laurent2::t1();
    let one = Laurent2::one();
    let r2 = pos.compose(pos);
    let r3 = r2.compose(pos);
    let c2 = &(&one - &t0) - &t1;
    let c1 = &(&(&t0 * &t1) - &t0) - &t1;
    let c0 = &t0 * &t1;
    let cubic = r3.add(&r2.scale(&c2)).add(&pos.scale(&c1)).add(&id.scale(&c0));

    vec![
        IdentityResult {
            identity: Identity::Inverse,
            holds: inverse,
            detail: if inverse { "r_pos r_neg = r_neg r_pos = id".into() } else { "product differs from id".into() },
        },
        IdentityResult {
            identity: Identity::YangBaxter,
            holds: ybe_bad == 0,
            detail: format!("{ybe_bad} of 64 basis vectors violate R1 R2 R1 = R2 R1 R2"),
        },
        IdentityResult {
            identity: Identity::CubicSkein,
            holds: cubic.is_zero(),
            detail: "R^3 + (1-t0-t1) R^2 + (t0 t1 - t0 - t1) R + t0 t1 = 0".into(),
        },
    ]
}

impl RMatrixData {
    /// Builds verified data from table text. The first of the corrections
    /// (as-is, negated, flipped, negated+flipped) for which every identity
    /// holds is applied.
    pub fn from_table(text: &str) -> Result<RMatrixData, LgError> {
        let (pos, neg) = parse_table(text)?;
        let candidates = [
            (Correction::AsIs, pos.clone(), neg.clone()),
            (Correction::Negated, pos.negated(), neg.negated()),
            (Correction::Flipped, pos.flipped(), neg.flipped()),
            (Correction::NegatedFlipped, pos.negated().flipped(), neg.negated().flipped()),
        ];
        let mut first_failure = None;
        for (correction, p, n) in candidates {
            let results = identity_suite(&p, &n);
            match results.into_iter().find(|r| !r.holds) {
                None => {
                    let grading = Grading::discover(&[&p, &n]);
                    return Ok(RMatrixData { r_pos: p, r_neg: n, correction, grading });
                }
                Some(bad) if first_failure.is_none() => first_failure = Some(bad),
                Some(_) => {}
            }
        }
        let bad = first_failure.expect("at least one candidate was tried");
        Err(LgError::Convention { identity: bad.identity, detail: bad.detail })
    }

    pub fn r_pos(&self) -> &PairOperator {
        &self.r_pos
    }

    pub fn r_neg(&self) -> &PairOperator {
        &self.r_neg
    }

    pub fn correction(&self) -> Correction {
        self.correction
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn markov_property_check(&self) -> MarkovCheck {
        MarkovCheck {
            positive: TraceShape::of(&self.r_pos.partial_trace()),
            negative: TraceShape::of(&self.r_neg.partial_trace()),
        }
    }
}

/// Bundled, checksum-verified braiding data (loaded once per process).
pub fn load_rmatrix() -> Result<&'static RMatrixData, LgError> {
    static DATA: OnceLock<Result<RMatrixData, LgError>> = OnceLock::new();
    DATA.get_or_init(|| {
        let found = sha256_hex(RMATRIX_TABLE);
        if found != RMATRIX_SHA256 {
            return Err(LgError::Checksum { expected: RMATRIX_SHA256.to_string(), found });
        }
        RMatrixData::from_table(RMATRIX_TABLE)
    })
    .as_ref()
    .map_err(Clone::clone)
}

/// Sparse vector in `W^{⊗n}`. Basis words pack digit `p` (strand `p+1`) in bits `2p..2p+2`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StateVector {
    strands: usize,
    entries: BTreeMap<u64, Laurent2>,
}

impl StateVector {
    pub fn zero(strands: usize) -> Self {
        StateVector { strands, entries: BTreeMap::new() }
    }

    pub fn basis(strands: usize, word: u64) -> Self {
        let mut v = Self::zero(strands);
        v.add_term(word, &Laurent2::one());
        v
    }

    /// Basis word from 0-based digits, strand 1 first.
    pub fn word(digits: &[usize]) -> u64 {
        digits.iter().enumerate().fold(0u64, |w, (p, &d)| w | ((d as u64) << (2 * p)))
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn add_term(&mut self, word: u64, c: &Laurent2) {
        let slot = self.entries.entry(word).or_default();
        *slot += c;
        if slot.is_zero() {
            self.entries.remove(&word);
        }
    }

    pub fn get(&self, word: u64) -> Laurent2 {
        self.entries.get(&word).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, &Laurent2)> {
        self.entries.iter().map(|(w, c)| (*w, c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[inline]
fn digit(word: u64, p: usize) -> usize {
    ((word >> (2 * p)) & 3) as usize
}

#[inline]
fn with_pair(word: u64, p: usize, pair: usize) -> u64 {
    let mask = !(0xFu64 << (2 * p));
    let packed = ((pair / DIM) as u64) | (((pair % DIM) as u64) << 2);
    (word & mask) | (packed << (2 * p))
}

fn sparse_apply(pos: &PairOperator, neg: &PairOperator, _grading: &Grading, letters: &[i32], v: &StateVector) -> StateVector {
    let mut cur = v.clone();
    for &g in letters {
        let op = if g > 0 { pos } else { neg };
        let p = g.unsigned_abs() as usize - 1;
        let mut next = StateVector::zero(cur.strands);
        for (w, amp) in cur.entries() {
            let input = digit(w, p) * DIM + digit(w, p + 1);
            for (out, c) in op.column(input) {
                let nw = with_pair(w, p, *out);
                let slot = next.entries.entry(nw).or_default();
                slot.add_mul_assign(c, amp);
            }
        }
        next.entries.retain(|_, c| !c.is_zero());
        cur = next;
    }
    cur
}

/// Weight-sector layout of `W^{⊗n}` under a grading.
struct SectorLayout {
    strands: usize,
    sector_of: Vec<u32>,
    local: Vec<u32>,
    sectors: Vec<Vec<u64>>,
}

impl SectorLayout {
    fn new(grading: &Grading, strands: usize) -> SectorLayout {
        let total = 1usize << (2 * strands);
        let mut keys: BTreeMap<Vec<i64>, u32> = BTreeMap::new();
        let mut sector_of = vec![0u32; total];
        let mut local = vec![0u32; total];
        let mut sectors: Vec<Vec<u64>> = Vec::new();
        for w in 0..total as u64 {
            let key = grading.key((0..strands).map(|p| digit(w, p)));
            let next = keys.len() as u32;
            let s = *keys.entry(key).or_insert(next);
            if s as usize == sectors.len() {
                sectors.push(Vec::new());
            }
            local[w as usize] = sectors[s as usize].len() as u32;
            sectors[s as usize].push(w);
            sector_of[w as usize] = s;
        }
        SectorLayout { strands, sector_of, local, sectors }
    }

    /// `ρ(b) e_start` as a dense vector over the sector of `start`.
    fn propagate(&self, data: &RMatrixData, letters: &[i32], start: u64) -> Vec<Laurent2> {
        let sector = &self.sectors[self.sector_of[start as usize] as usize];
        let mut cur = vec![Laurent2::zero(); sector.len()];
        cur[self.local[start as usize] as usize] = Laurent2::one();
        let mut next = vec![Laurent2::zero(); sector.len()];
        for &g in letters {
            let op = if g > 0 { &data.r_pos } else { &data.r_neg };
            let p = g.unsigned_abs() as usize - 1;
            for (k, amp) in cur.iter().enumerate() {
                if amp.is_zero() {
                    continue;
                }
                let w = sector[k];
                let input = digit(w, p) * DIM + digit(w, p + 1);
                for (out, c) in op.column(input) {
                    let nw = with_pair(w, p, *out);
                    debug_assert_eq!(self.sector_of[nw as usize], self.sector_of[start as usize]);
                    next[self.local[nw as usize] as usize].add_mul_assign(c, amp);
                }
            }
            std::mem::swap(&mut cur, &mut next);
            next.iter_mut().for_each(|x| *x = Laurent2::zero());
        }
        cur
    }

    fn amplitude(&self, v: &[Laurent2], start: u64, word: u64) -> Laurent2 {
        if self.sector_of[word as usize] != self.sector_of[start as usize] {
            return Laurent2::zero();
        }
        v[self.local[word as usize] as usize].clone()
    }
}

/// Engine options.
#[derive(Debug, Clone, Copy, Default)]
pub struct EvalOptions {
    /// Compute the full 4×4 partial trace and require it to be scalar.
    pub verify_scalar: bool,
}

/// Applies `ρ(b)` to `v`, letter by letter in word order.
pub fn apply_braid(b: &BraidWord, v: &StateVector) -> Result<StateVector, LgError> {
    if v.strands() != b.strands() {
        return Err(LgError::DimensionMismatch { expected: b.strands(), found: v.strands() });
    }
    let data = load_rmatrix()?;
    Ok(sparse_apply(&data.r_pos, &data.r_neg, &data.grading, b.letters(), v))
}

/// The Links-Gould invariant of the closure of `b`.
pub fn lg_invariant(b: &BraidWord, verify_scalar: bool) -> Result<Laurent2, LgError> {
    lg_invariant_with(load_rmatrix()?, b, EvalOptions { verify_scalar })
}

/// Same as [`lg_invariant`] with explicit braiding data.
pub fn lg_invariant_with(data: &RMatrixData, b: &BraidWord, opts: EvalOptions) -> Result<Laurent2, LgError> {
    let n = b.strands();
    if n == 1 {
        return Ok(Laurent2::one());
    }
    if n > MAX_STRANDS {
        return Err(LgError::TooManyStrands(n));
    }
    let layout = SectorLayout::new(&data.grading, n);
    let mu = mu_diagonal();
    let trailing = 1u64 << (2 * (n - 1));
    let leads: Vec<usize> = if opts.verify_scalar { (0..DIM).collect() } else { vec![0] };

    // trace[b][a] = Σ_v μ(v) ⟨b v| ρ |a v⟩
    let rows: Vec<[[Laurent2; DIM]; DIM]> = (0..trailing)
        .into_par_iter()
        .map(|tail| {
            let weight = (0..n - 1).fold(Laurent2::one(), |acc, p| &acc * &mu[digit(tail, p)]);
            let mut out: [[Laurent2; DIM]; DIM] = Default::default();
            for &a in &leads {
                let start = (tail << 2) | a as u64;
                let v = layout.propagate(data, b.letters(), start);
                let targets: Vec<usize> = if opts.verify_scalar { (0..DIM).collect() } else { vec![a] };
                for t in targets {
                    let amp = layout.amplitude(&v, start, (tail << 2) | t as u64);
                    out[t][a] = &amp * &weight;
                }
            }
            out
        })
        .collect();

    let mut trace: [[Laurent2; DIM]; DIM] = Default::default();
    for r in &rows {
        for t in 0..DIM {
            for a in 0..DIM {
                trace[t][a] += &r[t][a];
            }
        }
    }
    let c = trace[0][0].clone();
    if opts.verify_scalar {
        for t in 0..DIM {
            for a in 0..DIM {
                let expected = if t == a { &c } else { &Laurent2::zero() };
                if &trace[t][a] != expected {
                    return Err(LgError::ScalarViolation {
                        detail: format!("entry ({}, {}) is {} but ({}, {}) is {}", t + 1, a + 1, trace[t][a], 1, 1, c),
                    });
                }
            }
        }
    }
    debug_assert_eq!(layout.strands, n);
    Ok(c)
}

/// Markov condition on the bundled data.
pub fn markov_property_check() -> Result<MarkovCheck, LgError> {
    Ok(load_rmatrix()?.markov_property_check())
}

/// Which closed-form twist-knot value the braid `σ1^3` reproduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Chirality {
    /// `LG(closure σ1^3) = lg_twist(1)`.
    Direct,
    /// `LG(closure σ1^3) = lg_twist(1)` with `t0, t1` inverted.
    Mirrored,
}

/// Empirically fixed chirality convention between the engine and the
/// closed-form family evaluators.
pub fn chirality() -> Result<Chirality, LgError> {
    static CHIRALITY: OnceLock<Result<Chirality, LgError>> = OnceLock::new();
    CHIRALITY
        .get_or_init(|| {
            let trefoil = BraidWord::new(2, vec![1, 1, 1]).expect("valid word");
            let engine = lg_invariant(&trefoil, false)?;
            let closed = families::lg_twist(1).map_err(|e| LgError::Convention {
                identity: Identity::Markov,
                detail: format!("twist formula failed: {e}"),
            })?;
            if engine == closed {
                Ok(Chirality::Direct)
            } else if engine == closed.invert() {
                Ok(Chirality::Mirrored)
            } else {
                Err(LgError::Convention {
                    identity: Identity::CubicSkein,
                    detail: format!("trefoil value {engine} matches neither chirality of {closed}"),
                })
            }
        })
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> BraidWord {
        s.parse().unwrap()
    }

    #[test]
    fn bundled_table_loads_as_is() {
        let data = load_rmatrix().unwrap();
        assert_eq!(data.correction(), Correction::AsIs);
        assert_eq!(sha256_hex(RMATRIX_TABLE), RMATRIX_SHA256);
    }

    #[test]
    fn inverse_pair_and_cubic() {
        let data = load_rmatrix().unwrap();
        assert_eq!(data.r_pos().compose(data.r_neg()), PairOperator::identity());
        for r in identity_suite(data.r_pos(), data.r_neg()) {
            assert!(r.holds, "{:?}", r);
        }
    }

    #[test]
    fn cubic_factorisation() {
        // (R + 1)(R - t0)(R - t1) = 0
        let data = load_rmatrix().unwrap();
        let id = PairOperator::identity();
        let r = data.r_pos();
        let a = r.add(&id);
        let b0 = r.add(&id.scale(&-Laurent2::t0()));
        let b1 = r.add(&id.scale(&-Laurent2::t1()));
        assert!(a.compose(&b0).compose(&b1).is_zero());
        assert!(!a.compose(&b0).is_zero());
    }

    #[test]
    fn mu_trace_is_zero() {
        let s: Laurent2 = mu_diagonal().into_iter().sum();
        assert!(s.is_zero());
    }

    #[test]
    fn markov_condition() {
        let data = load_rmatrix().unwrap();
        let m = data.markov_property_check();
        assert!(m.holds(), "{m:?}");
        let sq = data.r_pos().compose(data.r_pos());
        assert_ne!(TraceShape::of(&sq.partial_trace()), TraceShape::Identity);
    }

    #[test]
    fn grading_is_nontrivial() {
        let data = load_rmatrix().unwrap();
        // constant charge plus two independent weights
        assert_eq!(data.grading().charges.len(), 3);
        for w in &data.grading().charges {
            assert_eq!(w[0] + w[3], w[1] + w[2]);
        }
    }

    #[test]
    fn apply_braid_examples() {
        let v = {
            let mut v = StateVector::zero(2);
            v.add_term(StateVector::word(&[0, 3]), &"t0 - 2".parse().unwrap());
            v.add_term(StateVector::word(&[1, 2]), &"t1^-1".parse().unwrap());
            v
        };
        assert_eq!(apply_braid(&b("2:"), &v).unwrap(), v);
        assert_eq!(apply_braid(&b("2: 1 -1"), &v).unwrap(), v);
        assert_eq!(
            apply_braid(&b("3: 1"), &v),
            Err(LgError::DimensionMismatch { expected: 3, found: 2 })
        );
    }

    #[test]
    fn small_values() {
        assert_eq!(lg_invariant(&b("1:"), true).unwrap(), Laurent2::one());
        assert_eq!(lg_invariant(&b("2: 1"), true).unwrap(), Laurent2::one());
        assert_eq!(lg_invariant(&b("2: -1"), true).unwrap(), Laurent2::one());
        assert_eq!(lg_invariant(&b("2:"), true).unwrap(), Laurent2::zero());
    }

    #[test]
    fn corrupted_table_is_rejected() {
        let bad = RMATRIX_TABLE.replacen("2 2 -> 2 2 : -1", "2 2 -> 2 2 : -2", 1);
        assert_ne!(bad, RMATRIX_TABLE);
        let err = RMatrixData::from_table(&bad).unwrap_err();
        assert!(matches!(err, LgError::Convention { identity: Identity::Inverse, .. }), "{err}");
    }

    #[test]
    fn negated_table_is_corrected() {
        // negate every r_pos and r_neg coefficient
        let negated: String = RMATRIX_TABLE
            .lines()
            .map(|l| match l.split_once(" : ").filter(|_| !l.starts_with('#')) {
                Some((lhs, c)) => {
                    let p: Laurent2 = c.parse().unwrap();
                    format!("{lhs} : {}\n", -p)
                }
                None => format!("{l}\n"),
            })
            .collect();
        let data = RMatrixData::from_table(&negated).unwrap();
        assert_eq!(data.correction(), Correction::Negated);
        assert_eq!(data.r_pos(), load_rmatrix().unwrap().r_pos());
    }

    #[test]
    fn table_syntax_errors() {
        assert!(matches!(parse_table("1 1 -> 1 1 : t0"), Err(LgError::Table { .. })));
        assert!(matches!(parse_table("[r_pos]\n1 5 -> 1 1 : t0\n[r_neg]"), Err(LgError::Table { line: 2, .. })));
        assert!(matches!(parse_table("[r_pos]\n1 1 -> 1 1 : t9\n[r_neg]"), Err(LgError::Table { .. })));
        assert!(matches!(parse_table("[r_pos]\n"), Err(LgError::Table { .. })));
    }

    #[test]
    fn nullspace_of_known_system() {
        let basis = integer_nullspace(vec![[1, -1, -1, 1]]);
        assert_eq!(basis.len(), 3);
        for v in basis {
            assert_eq!(v[0] - v[1] - v[2] + v[3], 0);
        }
    }
}
