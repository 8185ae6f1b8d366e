//! Fusion rings of affine sl2: the generic-level ring on symbols
//! `(V_r^e, V_s)`, the rational-level ring on admissible equivalence classes,
//! structure-constant tables, genus-g dimension counting by pinching, and the
//! factorization / quotient verifications.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num::{Integer, One, Zero};
use thiserror::Error;

use crate::exec;
use crate::ring::{FormalSum, Int};
use crate::tensor::{
    osp_tensor, osp_truncated_tensor, sl2_tensor, sl2_truncated_tensor, OspIrrep, Parity,
    Sl2Irrep,
};

/// The symbol `(V_r^parity, V_s)` labelling a generalized Weyl module at
/// generic level. Ordering is lexicographic on `(r, parity, s)`, which fixes
/// the serialization order everywhere.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AffineSymbol {
    pub r: u32,
    pub parity: Parity,
    pub s: u32,
}

impl AffineSymbol {
    pub fn new(r: u32, parity: Parity, s: u32) -> Self {
        AffineSymbol { r, parity, s }
    }

    /// The equivalence partner at level `(p, q)`; defined for in-range
    /// symbols only.
    fn partner(self, level: RationalLevel) -> AffineSymbol {
        AffineSymbol::new(
            level.q - 1 - self.r,
            self.parity.flip(),
            level.p - 2 - self.s,
        )
    }
}

/// The vacuum symbol `(V_0^0, V_0)`, the unit of both fusion rings.
pub fn unit_symbol() -> AffineSymbol {
    AffineSymbol::new(0, Parity::Even, 0)
}

impl fmt::Display for AffineSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{})", self.r, self.parity, self.s)
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("cannot parse {input:?} as a symbol: {reason}")]
pub struct SymbolParseError {
    pub input: String,
    pub reason: &'static str,
}

fn scan_u32(chars: &mut std::iter::Peekable<std::str::Chars>) -> Option<u32> {
    let mut got = None::<u32>;
    while let Some(c) = chars.peek() {
        if let Some(d) = c.to_digit(10) {
            got = Some(got.unwrap_or(0).checked_mul(10)?.checked_add(d)?);
            chars.next();
        } else {
            break;
        }
    }
    got
}

fn skip_ws(chars: &mut std::iter::Peekable<std::str::Chars>) {
    while chars.peek().is_some_and(|c| c.is_whitespace()) {
        chars.next();
    }
}

fn expect(chars: &mut std::iter::Peekable<std::str::Chars>, c: char) -> bool {
    skip_ws(chars);
    if chars.peek() == Some(&c) {
        chars.next();
        true
    } else {
        false
    }
}

impl FromStr for AffineSymbol {
    type Err = SymbolParseError;

    /// Grammar: `'(' integer ',' parity-bit ';' integer ')'` with optional
    /// whitespace; `parse . print` is the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| SymbolParseError { input: s.to_string(), reason };
        let mut it = s.chars().peekable();
        if !expect(&mut it, '(') {
            return Err(err("expected '('"));
        }
        skip_ws(&mut it);
        let r = scan_u32(&mut it).ok_or_else(|| err("expected integer r"))?;
        if !expect(&mut it, ',') {
            return Err(err("expected ','"));
        }
        skip_ws(&mut it);
        let e = scan_u32(&mut it).ok_or_else(|| err("expected parity bit"))?;
        if e > 1 {
            return Err(err("parity bit must be 0 or 1"));
        }
        if !expect(&mut it, ';') {
            return Err(err("expected ';'"));
        }
        skip_ws(&mut it);
        let sv = scan_u32(&mut it).ok_or_else(|| err("expected integer s"))?;
        if !expect(&mut it, ')') {
            return Err(err("expected ')'"));
        }
        skip_ws(&mut it);
        if it.next().is_some() {
            return Err(err("trailing input"));
        }
        Ok(AffineSymbol::new(r, Parity::from_u32(e), sv))
    }
}

/// Quantum dimension `(2r+1)(s+1)`; extends to a ring homomorphism of the
/// generic fusion ring onto Z.
pub fn qdim(x: AffineSymbol) -> u64 {
    (2 * u64::from(x.r) + 1) * (u64::from(x.s) + 1)
}

/// Generic-level fusion: the osp(1|2) decomposition on the `(r, parity)`
/// part times Clebsch-Gordan on the `s` part, all cross terms with
/// coefficient 1.
pub fn fuse_generic(a: AffineSymbol, b: AffineSymbol) -> FormalSum<AffineSymbol> {
    let osp = osp_tensor(
        OspIrrep::new(a.r, a.parity),
        OspIrrep::new(b.r, b.parity),
    );
    let sl2 = sl2_tensor(Sl2Irrep(a.s), Sl2Irrep(b.s));
    FormalSum::normalize(osp.iter().flat_map(|o| {
        sl2.iter()
            .map(move |s| (AffineSymbol::new(o.n, o.parity, s.0), Int::one()))
    }))
}

/// Bilinear extension of [`fuse_generic`] to formal sums.
pub fn fuse_generic_sums(
    x: &FormalSum<AffineSymbol>,
    y: &FormalSum<AffineSymbol>,
) -> FormalSum<AffineSymbol> {
    FormalSum::bilinear_product(x, y, |a, b| fuse_generic(*a, *b))
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LevelError {
    #[error("p must be at least 2, got {0}")]
    PTooSmall(u32),
    #[error("q must be at least 1, got {0}")]
    QTooSmall(u32),
    #[error("p and q must be coprime, got {0}/{1}")]
    NotCoprime(u32, u32),
}

/// A rational level `k + 2 = p/q` with `p >= 2`, `q >= 1`, `gcd(p, q) = 1`.
/// Admissible symbols range over `0 <= r <= q-1`, `0 <= s <= p-2`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RationalLevel {
    p: u32,
    q: u32,
}

impl RationalLevel {
    pub fn new(p: u32, q: u32) -> Result<Self, LevelError> {
        if p < 2 {
            return Err(LevelError::PTooSmall(p));
        }
        if q < 1 {
            return Err(LevelError::QTooSmall(q));
        }
        if p.gcd(&q) != 1 {
            return Err(LevelError::NotCoprime(p, q));
        }
        Ok(RationalLevel { p, q })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    pub fn q(self) -> u32 {
        self.q
    }

    pub fn r_max(self) -> u32 {
        self.q - 1
    }

    pub fn s_max(self) -> u32 {
        self.p - 2
    }

    /// Number of admissible classes, `q * (p - 1)`.
    pub fn class_count(self) -> usize {
        self.q as usize * (self.p as usize - 1)
    }
}

impl fmt::Display for RationalLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for RationalLevel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, q) = s
            .split_once('/')
            .ok_or_else(|| format!("level {s:?} is not of the form p/q"))?;
        let p: u32 = p.trim().parse().map_err(|_| format!("bad p in level {s:?}"))?;
        let q: u32 = q.trim().parse().map_err(|_| format!("bad q in level {s:?}"))?;
        RationalLevel::new(p, q).map_err(|e| e.to_string())
    }
}

/// Out-of-range admissible index, naming the offending field.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("{field} out of range 0..{max}")]
pub struct RangeError {
    pub field: &'static str,
    pub max: u32,
    pub value: u32,
}

/// An admissible equivalence class, represented by its unique parity-0
/// member. Ordering is lexicographic on `(r, s)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct AdmissibleClass {
    level: RationalLevel,
    rep: AffineSymbol,
}

impl AdmissibleClass {
    pub fn level(&self) -> RationalLevel {
        self.level
    }

    /// The canonical (parity-0, in-range) representative.
    pub fn rep(&self) -> AffineSymbol {
        self.rep
    }
}

impl PartialOrd for AdmissibleClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AdmissibleClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.rep.r, self.rep.s, self.level)
            .cmp(&(other.rep.r, other.rep.s, other.level))
    }
}

impl fmt::Display for AdmissibleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

/// Map an in-range symbol to its admissible class: parity-0 symbols are
/// canonical as they stand, parity-1 symbols map to the partner
/// `(q-1-r, 0, p-2-s)`. Out-of-range indices are rejected.
pub fn canonicalize(
    level: RationalLevel,
    x: AffineSymbol,
) -> Result<AdmissibleClass, RangeError> {
    if x.r > level.r_max() {
        return Err(RangeError { field: "r", max: level.r_max(), value: x.r });
    }
    if x.s > level.s_max() {
        return Err(RangeError { field: "s", max: level.s_max(), value: x.s });
    }
    let rep = match x.parity {
        Parity::Even => x,
        Parity::Odd => x.partner(level),
    };
    Ok(AdmissibleClass { level, rep })
}

/// All classes of a level in table order (lexicographic on `(r, s)`).
pub fn classes(level: RationalLevel) -> Vec<AdmissibleClass> {
    let mut out = Vec::with_capacity(level.class_count());
    for r in 0..=level.r_max() {
        for s in 0..=level.s_max() {
            out.push(AdmissibleClass {
                level,
                rep: AffineSymbol::new(r, Parity::Even, s),
            });
        }
    }
    out
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FusionError {
    #[error("classes belong to different levels: {0} vs {1}")]
    LevelMismatch(RationalLevel, RationalLevel),
}

/// Rational-level fusion on admissible classes: the osp part is truncated at
/// `N = min(2q-2-r1-r2, r1+r2)` with parity alternating from even at
/// `|r1-r2|`, the sl2 part at `p-2`; every output symbol is canonicalized
/// and coefficients accumulate afterwards.
pub fn fuse_rational(
    a: &AdmissibleClass,
    b: &AdmissibleClass,
) -> Result<FormalSum<AdmissibleClass>, FusionError> {
    if a.level != b.level {
        return Err(FusionError::LevelMismatch(a.level, b.level));
    }
    let level = a.level;
    let osp = osp_truncated_tensor(
        OspIrrep::new(a.rep.r, Parity::Even),
        OspIrrep::new(b.rep.r, Parity::Even),
        level.q,
    )
    .expect("class representative within osp truncation order");
    let sl2 = sl2_truncated_tensor(Sl2Irrep(a.rep.s), Sl2Irrep(b.rep.s), level.s_max())
        .expect("class representative within sl2 truncation bound");
    Ok(FormalSum::normalize(osp.iter().flat_map(|o| {
        sl2.iter().map(move |s| {
            let sym = AffineSymbol::new(o.n, o.parity, s.0);
            let class = canonicalize(level, sym)
                .expect("truncated product stays in admissible range");
            (class, Int::one())
        })
    })))
}

fn fuse_rational_sums(
    x: &FormalSum<AdmissibleClass>,
    y: &FormalSum<AdmissibleClass>,
) -> Result<FormalSum<AdmissibleClass>, FusionError> {
    FormalSum::try_bilinear_product(x, y, fuse_rational)
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("class {0} has no conjugate with unit coefficient 1; table is broken")]
    NoConjugate(AffineSymbol),
    #[error("class {0} has several conjugate candidates; table is broken")]
    AmbiguousConjugate(AffineSymbol),
}

/// Structure constants `N[i][j][k]` of a rational level over the canonical
/// class list. Cells are computed on first use, memoized for the lifetime of
/// the table, and filled in parallel across `(i, j)` pairs when the
/// `parallel` feature is enabled.
pub struct FusionTable {
    level: RationalLevel,
    classes: Vec<AdmissibleClass>,
    cells: OnceLock<Vec<u64>>,
}

impl FusionTable {
    pub fn new(level: RationalLevel) -> Self {
        FusionTable { level, classes: classes(level), cells: OnceLock::new() }
    }

    /// Rebuild a table from previously serialized cells. Validates the
    /// payload shape and the fully determined unit row before accepting it.
    pub fn from_cells(level: RationalLevel, cells: Vec<u64>) -> Result<Self, String> {
        let table = FusionTable::new(level);
        let n = table.len();
        if cells.len() != n * n * n {
            return Err(format!(
                "cell payload has length {}, expected {}",
                cells.len(),
                n * n * n
            ));
        }
        for j in 0..n {
            for k in 0..n {
                if cells[j * n + k] != u64::from(j == k) {
                    return Err("unit row of cached table is corrupt".to_string());
                }
            }
        }
        table.cells.set(cells).expect("fresh table");
        Ok(table)
    }

    pub fn level(&self) -> RationalLevel {
        self.level
    }

    pub fn classes(&self) -> &[AdmissibleClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of the vacuum class.
    pub fn unit_index(&self) -> usize {
        0
    }

    pub fn class_index(&self, rep: AffineSymbol) -> Option<usize> {
        self.classes.binary_search_by_key(&(rep.r, rep.s), |c| (c.rep.r, c.rep.s)).ok()
    }

    fn force(&self) -> &[u64] {
        self.cells.get_or_init(|| {
            let n = self.len();
            let rows = exec::map_indices(n * n, |ij| {
                let (i, j) = (ij / n, ij % n);
                self.compute_row(i, j)
            });
            rows.concat()
        })
    }

    pub(crate) fn compute_row(&self, i: usize, j: usize) -> Vec<u64> {
        let mut row = vec![0u64; self.len()];
        let product = fuse_rational(&self.classes[i], &self.classes[j])
            .expect("classes share the table level");
        for (class, coeff) in product.iter() {
            let k = self
                .class_index(class.rep)
                .expect("canonical class is listed");
            row[k] = u64::try_from(coeff.clone()).expect("nonnegative structure constant");
        }
        row
    }

    /// Structure constant `N[i][j][k]`.
    pub fn n(&self, i: usize, j: usize, k: usize) -> u64 {
        let n = self.len();
        self.force()[(i * n + j) * n + k]
    }

    /// Raw cells in row-major `(i, j, k)` order.
    pub fn cells(&self) -> &[u64] {
        self.force()
    }

    /// The unique class `j` with `N[i][j][unit] = 1`; the conjugation map is
    /// an involutive permutation on any sound table.
    pub fn conjugate(&self, i: usize) -> Result<usize, TableError> {
        let unit = self.unit_index();
        let mut found = None;
        for j in 0..self.len() {
            match self.n(i, j, unit) {
                0 => {}
                1 => {
                    if found.replace(j).is_some() {
                        return Err(TableError::AmbiguousConjugate(self.classes[i].rep));
                    }
                }
                _ => return Err(TableError::AmbiguousConjugate(self.classes[i].rep)),
            }
        }
        found.ok_or(TableError::NoConjugate(self.classes[i].rep))
    }
}

/// Build (and force) the full structure-constant table of a level.
pub fn structure_table(level: RationalLevel) -> FusionTable {
    let table = FusionTable::new(level);
    table.force();
    table
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GenusError {
    #[error("surface datum is degenerate: genus 0 with no insertions")]
    EmptyDatum,
    #[error("insertion index {0} is out of range for a table with {1} classes")]
    BadInsertion(usize, usize),
    #[error(transparent)]
    Table(#[from] TableError),
}

/// Dimension attached to a genus-`g` surface with the given insertions:
/// the coefficient of the unit class in `(i1 o ... o in) o h^g` where
/// `h = sum_a a o a*`. Independent of insertion order and parenthesization.
pub fn genus_dimension(
    table: &FusionTable,
    genus: u32,
    insertions: &[usize],
) -> Result<Int, GenusError> {
    if genus == 0 && insertions.is_empty() {
        return Err(GenusError::EmptyDatum);
    }
    let n = table.len();
    for &i in insertions {
        if i >= n {
            return Err(GenusError::BadInsertion(i, n));
        }
    }

    let mul = |x: &[Int], y: &[Int]| -> Vec<Int> {
        let mut out = vec![Int::zero(); n];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let c = xi * yj;
                for (k, acc) in out.iter_mut().enumerate() {
                    let m = table.n(i, j, k);
                    if m != 0 {
                        *acc += &c * Int::from(m);
                    }
                }
            }
        }
        out
    };

    // handle element: h = sum over classes of a o a*
    let handle = if genus > 0 {
        let mut h = vec![Int::zero(); n];
        for a in 0..n {
            let astar = table.conjugate(a)?;
            for (k, acc) in h.iter_mut().enumerate() {
                let m = table.n(a, astar, k);
                if m != 0 {
                    *acc += Int::from(m);
                }
            }
        }
        Some(h)
    } else {
        None
    };

    let mut acc = vec![Int::zero(); n];
    acc[table.unit_index()] = Int::one();
    for &i in insertions {
        let mut basis = vec![Int::zero(); n];
        basis[i] = Int::one();
        acc = mul(&acc, &basis);
    }
    if let Some(h) = handle {
        for _ in 0..genus {
            acc = mul(&acc, &h);
        }
    }
    Ok(acc[table.unit_index()].clone())
}

/// Progress summary of a verification sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub checked: u64,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("commutativity fails at {a} o {b}")]
    Commutativity { a: AffineSymbol, b: AffineSymbol },
    #[error("associativity fails at ({a} o {b}) o {c}")]
    Associativity { a: AffineSymbol, b: AffineSymbol, c: AffineSymbol },
    #[error("rational commutativity fails at {a} o {b} (level {level})")]
    RationalCommutativity { level: RationalLevel, a: AffineSymbol, b: AffineSymbol },
    #[error("rational associativity fails at ({a} o {b}) o {c} (level {level})")]
    RationalAssociativity {
        level: RationalLevel,
        a: AffineSymbol,
        b: AffineSymbol,
        c: AffineSymbol,
    },
    #[error("factorization fails at {a} o {b}: coefficient of {output} is {got}, osp x sl2 gives {expected}")]
    Factorization {
        a: AffineSymbol,
        b: AffineSymbol,
        output: AffineSymbol,
        expected: u64,
        got: u64,
    },
    #[error("quantum dimension is not multiplicative at {a} o {b}")]
    QdimHom { a: AffineSymbol, b: AffineSymbol },
    #[error("quotient map fails at {x} o {y} (level {level})")]
    Quotient { level: RationalLevel, x: AffineSymbol, y: AffineSymbol },
    #[error("equivalence partners of {x} canonicalize differently (level {level})")]
    RepresentativeDependence { level: RationalLevel, x: AffineSymbol },
}

/// All symbols with `r <= bound`, `s <= bound`, both parities, in order.
pub fn symbols_up_to(bound: u32) -> Vec<AffineSymbol> {
    let mut out = Vec::new();
    for r in 0..=bound {
        for parity in [Parity::Even, Parity::Odd] {
            for s in 0..=bound {
                out.push(AffineSymbol::new(r, parity, s));
            }
        }
    }
    out.sort();
    out
}

type PairMemo = HashMap<(AffineSymbol, AffineSymbol), FormalSum<AffineSymbol>>;

/// Memoize products `left o right`; `fuse_generic` is symmetric by
/// construction, so keys are stored with the smaller symbol first.
fn memo_products(lefts: &[AffineSymbol], rights: &[AffineSymbol]) -> PairMemo {
    let mut memo = PairMemo::new();
    for &a in lefts {
        for &b in rights {
            let key = if a <= b { (a, b) } else { (b, a) };
            memo.entry(key).or_insert_with(|| fuse_generic(a, b));
        }
    }
    memo
}

fn memo_get(memo: &PairMemo, a: AffineSymbol, b: AffineSymbol) -> &FormalSum<AffineSymbol> {
    let key = if a <= b { (a, b) } else { (b, a) };
    &memo[&key]
}

/// Commutativity of the generic ring over all symbol pairs up to `bound`.
pub fn verify_comm_generic(bound: u32) -> Result<SweepReport, VerifyError> {
    let syms = symbols_up_to(bound);
    let n = syms.len();
    let failure = exec::find_failure(n * n, |ij| {
        let (a, b) = (syms[ij / n], syms[ij % n]);
        if fuse_generic(a, b) != fuse_generic(b, a) {
            Some(VerifyError::Commutativity { a, b })
        } else {
            None
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(SweepReport { checked: (n * n) as u64 }),
    }
}

/// Precomputed state for the generic associativity sweep: the symbol window
/// plus a memo of all pairwise products the triple check can touch.
pub(crate) struct AssocSweep {
    syms: Vec<AffineSymbol>,
    memo: PairMemo,
}

impl AssocSweep {
    pub(crate) fn new(bound: u32) -> Self {
        let syms = symbols_up_to(bound);
        // products of two sweep symbols live in r, s <= 2*bound
        let outputs = symbols_up_to(2 * bound);
        let memo = memo_products(&outputs, &syms);
        AssocSweep { syms, memo }
    }

    pub(crate) fn len(&self) -> usize {
        self.syms.len().pow(3)
    }

    pub(crate) fn check(&self, idx: usize) -> Option<VerifyError> {
        let n = self.syms.len();
        let (a, b, c) = (
            self.syms[idx / (n * n)],
            self.syms[(idx / n) % n],
            self.syms[idx % n],
        );
        let ab = memo_get(&self.memo, a, b);
        let bc = memo_get(&self.memo, b, c);
        let left = ab.linear_map(|z| memo_get(&self.memo, *z, c).clone());
        let right = bc.linear_map(|z| memo_get(&self.memo, a, *z).clone());
        if left != right {
            Some(VerifyError::Associativity { a, b, c })
        } else {
            None
        }
    }
}

/// Associativity of the generic ring over all symbol triples up to `bound`.
pub fn verify_assoc_generic(bound: u32) -> Result<SweepReport, VerifyError> {
    let sweep = AssocSweep::new(bound);
    match exec::find_failure(sweep.len(), |idx| sweep.check(idx)) {
        Some(e) => Err(e),
        None => Ok(SweepReport { checked: sweep.len() as u64 }),
    }
}

/// Commutativity of the rational ring over all class pairs of a level.
pub fn verify_comm_rational(level: RationalLevel) -> Result<SweepReport, VerifyError> {
    let cls = classes(level);
    let n = cls.len();
    for i in 0..n {
        for j in 0..n {
            if fuse_rational(&cls[i], &cls[j]) != fuse_rational(&cls[j], &cls[i]) {
                return Err(VerifyError::RationalCommutativity {
                    level,
                    a: cls[i].rep(),
                    b: cls[j].rep(),
                });
            }
        }
    }
    Ok(SweepReport { checked: (n * n) as u64 })
}

/// Commutativity and associativity of the rational ring over all class
/// pairs/triples of a level.
pub fn verify_assoc_rational(level: RationalLevel) -> Result<SweepReport, VerifyError> {
    verify_comm_rational(level)?;
    let cls = classes(level);
    let n = cls.len();
    let rep = |c: &AdmissibleClass| c.rep();
    let pair: Vec<FormalSum<AdmissibleClass>> = (0..n * n)
        .map(|ij| fuse_rational(&cls[ij / n], &cls[ij % n]).expect("same level"))
        .collect();
    let failure = exec::find_failure(n * n * n, |idx| {
        let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
        let left = fuse_rational_sums(&pair[i * n + j], &FormalSum::singleton(cls[k]))
            .expect("same level");
        let right = fuse_rational_sums(&FormalSum::singleton(cls[i]), &pair[j * n + k])
            .expect("same level");
        if left != right {
            Some(VerifyError::RationalAssociativity {
                level,
                a: rep(&cls[i]),
                b: rep(&cls[j]),
                c: rep(&cls[k]),
            })
        } else {
            None
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(SweepReport { checked: (n * n * n) as u64 }),
    }
}

/// The generic ring factorizes as (osp(1|2) Grothendieck ring) x (sl2
/// Grothendieck ring): every structure constant equals the product of the
/// corresponding multiplicities.
pub fn verify_factorization(bound: u32) -> Result<SweepReport, VerifyError> {
    let syms = symbols_up_to(bound);
    let n = syms.len();
    let failure = exec::find_failure(n * n, |ij| {
        let (a, b) = (syms[ij / n], syms[ij % n]);
        let product = fuse_generic(a, b);
        let osp = osp_tensor(OspIrrep::new(a.r, a.parity), OspIrrep::new(b.r, b.parity));
        let sl2 = sl2_tensor(Sl2Irrep(a.s), Sl2Irrep(b.s));
        // expected coefficient of each output = multiplicity product
        let mut expected: HashMap<AffineSymbol, u64> = HashMap::new();
        for o in &osp {
            for s in &sl2 {
                *expected.entry(AffineSymbol::new(o.n, o.parity, s.0)).or_default() += 1;
            }
        }
        if product.iter().count() != expected.len() {
            let (sym, _) = product
                .iter()
                .find(|(sym, _)| !expected.contains_key(sym))
                .map(|(s, c)| (*s, c.clone()))
                .unwrap_or((unit_symbol(), Int::zero()));
            return Some(VerifyError::Factorization {
                a,
                b,
                output: sym,
                expected: 0,
                got: 1,
            });
        }
        for (sym, want) in &expected {
            let got = product.coeff(sym);
            if got != Int::from(*want) {
                return Some(VerifyError::Factorization {
                    a,
                    b,
                    output: *sym,
                    expected: *want,
                    got: u64::try_from(got).unwrap_or(u64::MAX),
                });
            }
        }
        None
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(SweepReport { checked: (n * n) as u64 }),
    }
}

/// Multiplicativity of the quantum dimension on the generic ring.
pub fn verify_qdim_hom(bound: u32) -> Result<SweepReport, VerifyError> {
    let syms = symbols_up_to(bound);
    let n = syms.len();
    let failure = exec::find_failure(n * n, |ij| {
        let (a, b) = (syms[ij / n], syms[ij % n]);
        let total: Int = fuse_generic(a, b)
            .iter()
            .map(|(sym, c)| c * Int::from(qdim(*sym)))
            .sum();
        if total != Int::from(qdim(a)) * Int::from(qdim(b)) {
            Some(VerifyError::QdimHom { a, b })
        } else {
            None
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(SweepReport { checked: (n * n) as u64 }),
    }
}

/// In-range symbols of both parities at a level.
pub fn admissible_symbols(level: RationalLevel) -> Vec<AffineSymbol> {
    let mut out = Vec::new();
    for r in 0..=level.r_max() {
        for parity in [Parity::Even, Parity::Odd] {
            for s in 0..=level.s_max() {
                out.push(AffineSymbol::new(r, parity, s));
            }
        }
    }
    out.sort();
    out
}

/// The surjection symbol -> class intertwines the doubly-truncated product
/// on symbols (osp at order q, sl2 at p-2) with the rational fusion of the
/// canonicalized classes; checked over all unordered in-range pairs.
pub fn verify_quotient(level: RationalLevel) -> Result<SweepReport, VerifyError> {
    let syms = admissible_symbols(level);
    let mut checked = 0;
    for (i, &x) in syms.iter().enumerate() {
        for &y in &syms[i..] {
            let osp = osp_truncated_tensor(
                OspIrrep::new(x.r, x.parity),
                OspIrrep::new(y.r, y.parity),
                level.q,
            )
            .expect("in-range symbol");
            let sl2 = sl2_truncated_tensor(Sl2Irrep(x.s), Sl2Irrep(y.s), level.s_max())
                .expect("in-range symbol");
            let pushed = FormalSum::normalize(osp.iter().flat_map(|o| {
                sl2.iter().map(move |s| {
                    let class = canonicalize(level, AffineSymbol::new(o.n, o.parity, s.0))
                        .expect("truncated product stays in range");
                    (class, Int::one())
                })
            }));
            let rational = fuse_rational(
                &canonicalize(level, x).expect("in-range symbol"),
                &canonicalize(level, y).expect("in-range symbol"),
            )
            .expect("same level");
            if pushed != rational {
                return Err(VerifyError::Quotient { level, x, y });
            }
            checked += 1;
        }
    }
    Ok(SweepReport { checked })
}

/// Both members of every admissible equivalence class canonicalize to the
/// same class.
pub fn verify_representative_independence(
    level: RationalLevel,
) -> Result<SweepReport, VerifyError> {
    let syms = admissible_symbols(level);
    let mut checked = 0;
    for &x in &syms {
        let via_x = canonicalize(level, x).expect("in-range symbol");
        let via_partner =
            canonicalize(level, x.partner(level)).expect("partner stays in range");
        if via_x != via_partner {
            return Err(VerifyError::RepresentativeDependence { level, x });
        }
        checked += 1;
    }
    Ok(SweepReport { checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym(r: u32, e: u32, s: u32) -> AffineSymbol {
        AffineSymbol::new(r, Parity::from_u32(e), s)
    }

    fn level(p: u32, q: u32) -> RationalLevel {
        RationalLevel::new(p, q).unwrap()
    }

    #[test]
    fn generic_fusion_examples() {
        // Weyl modules reduce to Clebsch-Gordan
        let got = fuse_generic(sym(0, 0, 1), sym(0, 0, 2));
        let want = FormalSum::normalize([
            (sym(0, 0, 1), Int::one()),
            (sym(0, 0, 3), Int::one()),
        ]);
        assert_eq!(got, want);

        let got = fuse_generic(sym(1, 0, 0), sym(1, 0, 0));
        let want = FormalSum::normalize([
            (sym(0, 0, 0), Int::one()),
            (sym(1, 1, 0), Int::one()),
            (sym(2, 0, 0), Int::one()),
        ]);
        assert_eq!(got, want);
        assert_eq!(got.coeff(&unit_symbol()), Int::one());

        // six cross terms
        let got = fuse_generic(sym(1, 0, 1), sym(1, 1, 1));
        assert_eq!(got.num_terms(), 6);
        for (rr, ee) in [(2, 1), (1, 0), (0, 1)] {
            for ss in [0, 2] {
                assert_eq!(got.coeff(&sym(rr, ee, ss)), Int::one());
            }
        }
    }

    #[test]
    fn unit_is_neutral() {
        for x in symbols_up_to(3) {
            assert_eq!(fuse_generic(unit_symbol(), x), FormalSum::singleton(x));
        }
    }

    #[test]
    fn symbol_text_round_trip() {
        for text in ["(0,0;0)", "(3,1;2)", "(12,0;34)"] {
            let sym: AffineSymbol = text.parse().unwrap();
            assert_eq!(sym.to_string(), text);
        }
        let sym: AffineSymbol = " ( 1 , 1 ; 4 ) ".parse().unwrap();
        assert_eq!(sym, AffineSymbol::new(1, Parity::Odd, 4));
        assert!("(1,2;0)".parse::<AffineSymbol>().is_err());
        assert!("(1,0,0)".parse::<AffineSymbol>().is_err());
        assert!("1,0;0".parse::<AffineSymbol>().is_err());
    }

    #[test]
    fn levels_validate() {
        assert!(RationalLevel::new(3, 2).is_ok());
        assert!(RationalLevel::new(5, 1).is_ok());
        assert_eq!(RationalLevel::new(1, 2), Err(LevelError::PTooSmall(1)));
        assert_eq!(RationalLevel::new(4, 2), Err(LevelError::NotCoprime(4, 2)));
        assert_eq!(RationalLevel::new(2, 0), Err(LevelError::QTooSmall(0)));
        assert_eq!("5/3".parse::<RationalLevel>().unwrap(), level(5, 3));
    }

    #[test]
    fn canonicalize_examples() {
        let l32 = level(3, 2);
        assert_eq!(canonicalize(l32, sym(1, 1, 0)).unwrap().rep(), sym(0, 0, 1));
        assert_eq!(canonicalize(l32, sym(0, 0, 0)).unwrap().rep(), sym(0, 0, 0));
        let l53 = level(5, 3);
        assert_eq!(canonicalize(l53, sym(1, 1, 0)).unwrap().rep(), sym(1, 0, 3));

        let err = canonicalize(l32, sym(5, 0, 0)).unwrap_err();
        assert_eq!(err.to_string(), "r out of range 0..1");
        let err = canonicalize(l32, sym(0, 0, 9)).unwrap_err();
        assert_eq!(err.to_string(), "s out of range 0..1");
    }

    #[test]
    fn rational_fusion_examples() {
        let l32 = level(3, 2);
        let a = canonicalize(l32, sym(1, 0, 0)).unwrap();
        let got = fuse_rational(&a, &a).unwrap();
        assert_eq!(got.num_terms(), 1);
        assert_eq!(got.coeff(&canonicalize(l32, sym(0, 0, 0)).unwrap()), Int::one());

        let l53 = level(5, 3);
        let a = canonicalize(l53, sym(1, 0, 0)).unwrap();
        let got = fuse_rational(&a, &a).unwrap();
        let want = FormalSum::normalize([
            (canonicalize(l53, sym(0, 0, 0)).unwrap(), Int::one()),
            (canonicalize(l53, sym(1, 0, 3)).unwrap(), Int::one()),
            (canonicalize(l53, sym(2, 0, 0)).unwrap(), Int::one()),
        ]);
        assert_eq!(got, want);

        // unit class is neutral
        let unit = canonicalize(l53, unit_symbol()).unwrap();
        for c in classes(l53) {
            assert_eq!(
                fuse_rational(&unit, &c).unwrap(),
                FormalSum::singleton(c)
            );
        }
    }

    #[test]
    fn level_mismatch_is_rejected() {
        let a = canonicalize(level(3, 2), sym(0, 0, 0)).unwrap();
        let b = canonicalize(level(5, 2), sym(0, 0, 0)).unwrap();
        assert!(matches!(
            fuse_rational(&a, &b),
            Err(FusionError::LevelMismatch(_, _))
        ));
    }

    #[test]
    fn table_3_2_is_klein_like() {
        let table = structure_table(level(3, 2));
        assert_eq!(table.len(), 4);
        let unit = table.unit_index();
        for i in 0..4 {
            for k in 0..4 {
                assert_eq!(table.n(unit, i, k), u64::from(i == k));
            }
            // every diagonal product is the unit
            for k in 0..4 {
                assert_eq!(table.n(i, i, k), u64::from(k == unit));
            }
            assert_eq!(table.conjugate(i).unwrap(), i);
        }
    }

    #[test]
    fn table_4_3_entries() {
        let table = structure_table(level(4, 3));
        assert_eq!(table.len(), 9);
        for i in 0..table.len() {
            for j in 0..table.len() {
                for k in 0..table.len() {
                    assert_eq!(table.n(i, j, k), table.n(j, i, k));
                    assert!(table.n(i, j, k) <= 1);
                }
            }
        }
    }

    #[test]
    fn conjugation_is_involutive() {
        for (p, q) in [(3, 2), (5, 2), (4, 3), (5, 3), (7, 2)] {
            let table = structure_table(level(p, q));
            for i in 0..table.len() {
                let j = table.conjugate(i).unwrap();
                assert_eq!(table.conjugate(j).unwrap(), i);
            }
        }
    }

    #[test]
    fn three_point_function_is_permutation_invariant() {
        // dim(i,j,k) = N[i][j][k*] is symmetric under all six permutations
        for (p, q) in [(5, 2), (4, 3), (5, 3)] {
            let table = structure_table(level(p, q));
            let n = table.len();
            let dim = |i: usize, j: usize, k: usize| {
                table.n(i, j, table.conjugate(k).unwrap())
            };
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let d = dim(i, j, k);
                        for (a, b, c) in
                            [(i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)]
                        {
                            assert_eq!(d, dim(a, b, c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn genus_examples() {
        let table = structure_table(level(3, 2));
        assert_eq!(genus_dimension(&table, 1, &[]).unwrap(), Int::from(4));
        // pairing normalization
        for a in 0..table.len() {
            let astar = table.conjugate(a).unwrap();
            assert_eq!(genus_dimension(&table, 0, &[a, astar]).unwrap(), Int::one());
        }
        // defining three-point case
        for i in 0..table.len() {
            for j in 0..table.len() {
                for k in 0..table.len() {
                    let kstar = table.conjugate(k).unwrap();
                    assert_eq!(
                        genus_dimension(&table, 0, &[i, j, k]).unwrap(),
                        Int::from(table.n(i, j, kstar))
                    );
                }
            }
        }
        assert!(matches!(
            genus_dimension(&table, 0, &[]),
            Err(GenusError::EmptyDatum)
        ));
    }

    #[test]
    fn verifications_pass_small() {
        assert!(verify_comm_generic(2).is_ok());
        assert!(verify_assoc_generic(2).is_ok());
        assert!(verify_factorization(3).is_ok());
        assert!(verify_qdim_hom(3).is_ok());
        let report = verify_quotient(level(3, 2)).unwrap();
        assert_eq!(report.checked, 36);
        assert!(verify_quotient(level(5, 3)).is_ok());
        assert!(verify_representative_independence(level(5, 3)).is_ok());
        assert!(verify_assoc_rational(level(4, 3)).is_ok());
    }

    proptest! {
        #[test]
        fn generic_fusion_commutes(
            r1 in 0u32..5, e1 in 0u32..2, s1 in 0u32..5,
            r2 in 0u32..5, e2 in 0u32..2, s2 in 0u32..5,
        ) {
            let a = sym(r1, e1, s1);
            let b = sym(r2, e2, s2);
            prop_assert_eq!(fuse_generic(a, b), fuse_generic(b, a));
        }

        #[test]
        fn qdim_is_multiplicative(
            r1 in 0u32..6, e1 in 0u32..2, s1 in 0u32..6,
            r2 in 0u32..6, e2 in 0u32..2, s2 in 0u32..6,
        ) {
            let a = sym(r1, e1, s1);
            let b = sym(r2, e2, s2);
            let total: Int = fuse_generic(a, b)
                .iter()
                .map(|(z, c)| c * Int::from(qdim(*z)))
                .sum();
            prop_assert_eq!(total, Int::from(qdim(a)) * Int::from(qdim(b)));
        }
    }
}
