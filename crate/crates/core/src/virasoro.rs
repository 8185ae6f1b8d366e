//! Virasoro fusion at generic and minimal levels, the central-charge
//! formula, and the Drinfeld-Sokolov index maps `phi_e`, `phi_f` whose sum
//! is an epimorphism of the affine fusion ring onto the Virasoro one.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num::{Integer, One};
use thiserror::Error;

use crate::affine::{
    admissible_symbols, canonicalize, classes, fuse_generic, fuse_rational,
    symbols_up_to, AffineSymbol, RationalLevel, SweepReport,
};
use crate::ring::{rat_int, FormalSum, Int, Rat};
use crate::tensor::{sl2_tensor, sl2_truncated_tensor, Parity, Sl2Irrep};

/// The symbol `(V_a, V_b)` of a Virasoro generalized Weyl module.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VirSymbol {
    pub a: u32,
    pub b: u32,
}

impl VirSymbol {
    pub fn new(a: u32, b: u32) -> Self {
        VirSymbol { a, b }
    }
}

impl fmt::Display for VirSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl FromStr for VirSymbol {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| format!("cannot parse {s:?} as (a,b)"))?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| format!("cannot parse {s:?} as (a,b)"))?;
        let a = a.trim().parse().map_err(|_| format!("bad a in {s:?}"))?;
        let b = b.trim().parse().map_err(|_| format!("bad b in {s:?}"))?;
        Ok(VirSymbol::new(a, b))
    }
}

/// Generic-level Virasoro fusion: Clebsch-Gordan on both slots.
pub fn vir_fuse_generic(x: VirSymbol, y: VirSymbol) -> FormalSum<VirSymbol> {
    let first = sl2_tensor(Sl2Irrep(x.a), Sl2Irrep(y.a));
    let second = sl2_tensor(Sl2Irrep(x.b), Sl2Irrep(y.b));
    FormalSum::normalize(first.iter().flat_map(|aa| {
        second.iter().map(move |bb| (VirSymbol::new(aa.0, bb.0), Int::one()))
    }))
}

pub fn vir_fuse_generic_sums(
    x: &FormalSum<VirSymbol>,
    y: &FormalSum<VirSymbol>,
) -> FormalSum<VirSymbol> {
    FormalSum::bilinear_product(x, y, |a, b| vir_fuse_generic(*a, *b))
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MinimalLevelError {
    #[error("minimal levels need p >= 2 and q >= 2, got {0}/{1}")]
    Degenerate(u32, u32),
    #[error("p and q must be coprime, got {0}/{1}")]
    NotCoprime(u32, u32),
}

/// A minimal-model level `(p, q)`: coprime integers, both at least 2.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MinimalLevel {
    p: u32,
    q: u32,
}

impl MinimalLevel {
    pub fn new(p: u32, q: u32) -> Result<Self, MinimalLevelError> {
        if p < 2 || q < 2 {
            return Err(MinimalLevelError::Degenerate(p, q));
        }
        if p.gcd(&q) != 1 {
            return Err(MinimalLevelError::NotCoprime(p, q));
        }
        Ok(MinimalLevel { p, q })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    pub fn q(self) -> u32 {
        self.q
    }
}

impl fmt::Display for MinimalLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Central charge of the minimal level: `1 - 6(p-q)^2 / (pq)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CentralCharge {
    pub value: Rat,
}

impl fmt::Display for CentralCharge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

pub fn central_charge(p: u32, q: u32) -> Result<CentralCharge, MinimalLevelError> {
    let level = MinimalLevel::new(p, q)?;
    let p = rat_int(i64::from(level.p));
    let q = rat_int(i64::from(level.q));
    let diff = &p - &q;
    let value = rat_int(1) - rat_int(6) * (&diff * &diff) / (&p * &q);
    Ok(CentralCharge { value })
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("{field} out of range 0..{max}")]
pub struct VirRangeError {
    pub field: &'static str,
    pub max: u32,
    pub value: u32,
}

/// A minimal-representation class: the lexicographically smaller member of
/// the equivalence pair `(a,b) ~ (q-2-a, p-2-b)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct MinimalClass {
    level: MinimalLevel,
    rep: VirSymbol,
}

impl MinimalClass {
    pub fn level(&self) -> MinimalLevel {
        self.level
    }

    pub fn rep(&self) -> VirSymbol {
        self.rep
    }
}

impl PartialOrd for MinimalClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MinimalClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.rep, self.level).cmp(&(other.rep, other.level))
    }
}

impl fmt::Display for MinimalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

/// Map a symbol to its minimal class, or to `None` (zero) when it sits on
/// the Drinfeld-Sokolov edge `a = q-1` / `b = p-1` whose partner would carry
/// the index -1. Indices beyond `q-1` / `p-1` are rejected.
pub fn vir_canonicalize(
    level: MinimalLevel,
    x: VirSymbol,
) -> Result<Option<MinimalClass>, VirRangeError> {
    if x.a > level.q - 1 {
        return Err(VirRangeError { field: "a", max: level.q - 1, value: x.a });
    }
    if x.b > level.p - 1 {
        return Err(VirRangeError { field: "b", max: level.p - 1, value: x.b });
    }
    if x.a == level.q - 1 || x.b == level.p - 1 {
        return Ok(None);
    }
    let partner = VirSymbol::new(level.q - 2 - x.a, level.p - 2 - x.b);
    Ok(Some(MinimalClass { level, rep: x.min(partner) }))
}

/// The `(p-1)(q-1)/2` classes of a minimal level, in lexicographic order of
/// canonical representatives.
pub fn minimal_classes(level: MinimalLevel) -> Vec<MinimalClass> {
    let mut out = BTreeSet::new();
    for a in 0..=level.q - 2 {
        for b in 0..=level.p - 2 {
            let class = vir_canonicalize(level, VirSymbol::new(a, b))
                .expect("in range")
                .expect("interior symbols never map to zero");
            out.insert(class);
        }
    }
    out.into_iter().collect()
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum VirFusionError {
    #[error("classes belong to different levels: {0} vs {1}")]
    LevelMismatch(MinimalLevel, MinimalLevel),
}

/// Minimal-model fusion by double truncation: first slots fuse at bound
/// `q-2`, second slots at `p-2`, then every output is canonicalized.
pub fn vir_fuse_minimal(
    x: &MinimalClass,
    y: &MinimalClass,
) -> Result<FormalSum<MinimalClass>, VirFusionError> {
    if x.level != y.level {
        return Err(VirFusionError::LevelMismatch(x.level, y.level));
    }
    let level = x.level;
    let first = sl2_truncated_tensor(Sl2Irrep(x.rep.a), Sl2Irrep(y.rep.a), level.q - 2)
        .expect("class representative within bound");
    let second = sl2_truncated_tensor(Sl2Irrep(x.rep.b), Sl2Irrep(y.rep.b), level.p - 2)
        .expect("class representative within bound");
    Ok(FormalSum::normalize(first.iter().flat_map(|aa| {
        second.iter().map(move |bb| {
            let class = vir_canonicalize(level, VirSymbol::new(aa.0, bb.0))
                .expect("in range")
                .expect("truncated product stays interior");
            (class, Int::one())
        })
    })))
}

pub fn vir_fuse_minimal_sums(
    x: &FormalSum<MinimalClass>,
    y: &FormalSum<MinimalClass>,
) -> Result<FormalSum<MinimalClass>, VirFusionError> {
    FormalSum::try_bilinear_product(x, y, vir_fuse_minimal)
}

/// Drinfeld-Sokolov functor for the nilpotent `e`:
/// `(V_r^0, V_s) -> (V_r, V_s)`, `(V_r^1, V_s) -> (V_{r-1}, V_s)`;
/// a would-be `V_{-1}` is zero.
pub fn ds_phi_e(x: AffineSymbol) -> FormalSum<VirSymbol> {
    let image_a = match x.parity {
        Parity::Even => Some(x.r),
        Parity::Odd => x.r.checked_sub(1),
    };
    match image_a {
        Some(a) => FormalSum::singleton(VirSymbol::new(a, x.s)),
        None => FormalSum::zero(),
    }
}

/// Drinfeld-Sokolov functor for the nilpotent `f`: the parity-flipped
/// companion of [`ds_phi_e`].
pub fn ds_phi_f(x: AffineSymbol) -> FormalSum<VirSymbol> {
    ds_phi_e(AffineSymbol::new(x.r, x.parity.flip(), x.s))
}

/// The fusion-ring epimorphism `phi_e + phi_f`, extended linearly.
pub fn ds_map(x: &FormalSum<AffineSymbol>) -> FormalSum<VirSymbol> {
    x.linear_map(|sym| ds_phi_e(*sym).add(&ds_phi_f(*sym)))
}

/// Scope of a Drinfeld-Sokolov homomorphism check.
#[derive(Clone, Copy, Debug)]
pub enum DsMode {
    /// All symbol pairs with `r, s <= bound` against generic Virasoro fusion.
    Generic { bound: u32 },
    /// All class pairs of the affine level against minimal fusion at the
    /// matching central charge `c_{p,q}`.
    Rational(RationalLevel),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DsError {
    #[error("level {0} has no Virasoro counterpart: {1}")]
    BadLevel(RationalLevel, MinimalLevelError),
    #[error("ds map is not multiplicative at {x} o {y}")]
    NotMultiplicative { x: AffineSymbol, y: AffineSymbol },
    #[error("ds images of the equivalence partners of {x} disagree")]
    IllDefined { x: AffineSymbol },
    #[error("ds image misses the Virasoro basis class {missing}")]
    NotSurjective { missing: VirSymbol },
}

/// Push an affine symbol through `phi_e + phi_f` and canonicalize the image
/// at the minimal level, dropping zero terms.
fn ds_rational(level: MinimalLevel, x: AffineSymbol) -> FormalSum<MinimalClass> {
    ds_map(&FormalSum::singleton(x)).linear_map(|v| {
        match vir_canonicalize(level, *v).expect("ds image stays within the edge range") {
            Some(class) => FormalSum::singleton(class),
            None => FormalSum::zero(),
        }
    })
}

/// Check that `ds_map` is a ring homomorphism onto the Virasoro fusion
/// algebra, and in rational mode that it is well-defined on equivalence
/// classes and surjective onto the minimal basis.
pub fn verify_ds_epimorphism(mode: DsMode) -> Result<SweepReport, DsError> {
    match mode {
        DsMode::Generic { bound } => {
            let syms = symbols_up_to(bound);
            let mut checked = 0;
            let mut image: BTreeSet<VirSymbol> = BTreeSet::new();
            for &x in &syms {
                for &y in &syms {
                    let lhs = ds_map(&fuse_generic(x, y));
                    let rhs =
                        vir_fuse_generic_sums(&ds_map(&FormalSum::singleton(x)), &ds_map(&FormalSum::singleton(y)));
                    if lhs != rhs {
                        return Err(DsError::NotMultiplicative { x, y });
                    }
                    checked += 1;
                }
                image.extend(ds_map(&FormalSum::singleton(x)).support().copied());
            }
            for a in 0..=bound {
                for b in 0..=bound {
                    let target = VirSymbol::new(a, b);
                    if !image.contains(&target) {
                        return Err(DsError::NotSurjective { missing: target });
                    }
                }
            }
            Ok(SweepReport { checked })
        }
        DsMode::Rational(level) => {
            let vir_level = MinimalLevel::new(level.p(), level.q())
                .map_err(|e| DsError::BadLevel(level, e))?;
            let mut checked = 0;

            // well-definedness on the two members of each equivalence class
            for x in admissible_symbols(level) {
                let class = canonicalize(level, x).expect("in range");
                if ds_rational(vir_level, x) != ds_rational(vir_level, class.rep()) {
                    return Err(DsError::IllDefined { x });
                }
                checked += 1;
            }

            let cls = classes(level);
            let mut image: BTreeSet<MinimalClass> = BTreeSet::new();
            for a in &cls {
                image.extend(ds_rational(vir_level, a.rep()).support().copied());
                for b in &cls {
                    let lhs = fuse_rational(a, b)
                        .expect("same level")
                        .linear_map(|c| ds_rational(vir_level, c.rep()));
                    let rhs = vir_fuse_minimal_sums(
                        &ds_rational(vir_level, a.rep()),
                        &ds_rational(vir_level, b.rep()),
                    )
                    .expect("same level");
                    if lhs != rhs {
                        return Err(DsError::NotMultiplicative { x: a.rep(), y: b.rep() });
                    }
                    checked += 1;
                }
            }
            for target in minimal_classes(vir_level) {
                if !image.contains(&target) {
                    return Err(DsError::NotSurjective { missing: target.rep() });
                }
            }
            Ok(SweepReport { checked })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn sym(r: u32, e: u32, s: u32) -> AffineSymbol {
        AffineSymbol::new(r, Parity::from_u32(e), s)
    }

    fn v(a: u32, b: u32) -> VirSymbol {
        VirSymbol::new(a, b)
    }

    fn ml(p: u32, q: u32) -> MinimalLevel {
        MinimalLevel::new(p, q).unwrap()
    }

    #[test]
    fn vir_generic_examples() {
        assert_eq!(vir_fuse_generic(v(0, 0), v(3, 4)), FormalSum::singleton(v(3, 4)));
        let got = vir_fuse_generic(v(1, 0), v(1, 0));
        assert_eq!(
            got,
            FormalSum::normalize([(v(0, 0), Int::one()), (v(2, 0), Int::one())])
        );
        let got = vir_fuse_generic(v(1, 1), v(1, 1));
        assert_eq!(got.num_terms(), 4);
        for target in [v(0, 0), v(0, 2), v(2, 0), v(2, 2)] {
            assert_eq!(got.coeff(&target), Int::one());
        }
    }

    #[test]
    fn central_charge_values() {
        assert_eq!(central_charge(4, 3).unwrap().value, rat(1, 2));
        assert_eq!(central_charge(3, 2).unwrap().value, rat(0, 1));
        assert_eq!(central_charge(5, 2).unwrap().value, rat(-22, 5));
        assert_eq!(
            central_charge(7, 3).unwrap().value,
            central_charge(3, 7).unwrap().value
        );
        assert!(central_charge(4, 2).is_err());
        assert!(central_charge(3, 1).is_err());
    }

    #[test]
    fn vir_canonicalize_cases() {
        let l = ml(4, 3);
        // partner of (1,2) is (0,0)
        let c = vir_canonicalize(l, v(1, 2)).unwrap().unwrap();
        assert_eq!(c.rep(), v(0, 0));
        let c = vir_canonicalize(l, v(0, 0)).unwrap().unwrap();
        assert_eq!(c.rep(), v(0, 0));
        // the DS edge maps to zero
        assert_eq!(vir_canonicalize(l, v(2, 0)).unwrap(), None);
        assert_eq!(vir_canonicalize(l, v(0, 3)).unwrap(), None);
        assert!(vir_canonicalize(l, v(3, 0)).is_err());
        // idempotence on representatives
        for class in minimal_classes(l) {
            let again = vir_canonicalize(l, class.rep()).unwrap().unwrap();
            assert_eq!(again, class);
        }
    }

    #[test]
    fn ising_fusion_table() {
        let l = ml(4, 3);
        let cls = minimal_classes(l);
        assert_eq!(cls.len(), 3);
        let one = cls[0];
        let sigma = cls[1];
        let eps = cls[2];
        assert_eq!(one.rep(), v(0, 0));
        assert_eq!(sigma.rep(), v(0, 1));
        assert_eq!(eps.rep(), v(0, 2));

        // sigma o sigma = 1 + eps
        assert_eq!(
            vir_fuse_minimal(&sigma, &sigma).unwrap(),
            FormalSum::normalize([(one, Int::one()), (eps, Int::one())])
        );
        // eps o eps = 1
        assert_eq!(vir_fuse_minimal(&eps, &eps).unwrap(), FormalSum::singleton(one));
        // sigma o eps = sigma
        assert_eq!(vir_fuse_minimal(&sigma, &eps).unwrap(), FormalSum::singleton(sigma));
        // unit
        for c in &cls {
            assert_eq!(vir_fuse_minimal(&one, c).unwrap(), FormalSum::singleton(*c));
        }
    }

    #[test]
    fn minimal_class_counts() {
        for (p, q) in [(4u32, 3u32), (5, 2), (5, 3), (7, 2), (5, 4)] {
            let count = minimal_classes(ml(p, q)).len();
            assert_eq!(count, ((p - 1) * (q - 1) / 2) as usize);
        }
    }

    #[test]
    fn ds_index_maps() {
        assert_eq!(ds_phi_e(sym(2, 1, 3)), FormalSum::singleton(v(1, 3)));
        assert_eq!(ds_phi_e(sym(0, 0, 5)), FormalSum::singleton(v(0, 5)));
        assert_eq!(ds_phi_f(sym(0, 0, 5)), FormalSum::zero());
        // phi_e is phi_f after a parity flip
        for x in symbols_up_to(3) {
            let flipped = AffineSymbol::new(x.r, x.parity.flip(), x.s);
            assert_eq!(ds_phi_e(x), ds_phi_f(flipped));
        }
    }

    #[test]
    fn ds_map_examples() {
        let got = ds_map(&FormalSum::singleton(sym(3, 0, 1)));
        assert_eq!(
            got,
            FormalSum::normalize([(v(3, 1), Int::one()), (v(2, 1), Int::one())])
        );
        assert_eq!(
            ds_map(&FormalSum::singleton(sym(0, 0, 4))),
            FormalSum::singleton(v(0, 4))
        );

        // ds of (1,0;0)^2 equals the square of ds(1,0;0)
        let x = sym(1, 0, 0);
        let lhs = ds_map(&fuse_generic(x, x));
        let image = ds_map(&FormalSum::singleton(x));
        let rhs = vir_fuse_generic_sums(&image, &image);
        let want = FormalSum::normalize([
            (v(2, 0), Int::one()),
            (v(1, 0), Int::from(2)),
            (v(0, 0), Int::from(2)),
        ]);
        assert_eq!(lhs, want);
        assert_eq!(rhs, want);
    }

    #[test]
    fn vir_generic_ring_laws() {
        let mut window = Vec::new();
        for a in 0..=4u32 {
            for b in 0..=4u32 {
                window.push(v(a, b));
            }
        }
        for &x in &window {
            assert_eq!(vir_fuse_generic(v(0, 0), x), FormalSum::singleton(x));
            for &y in &window {
                assert_eq!(vir_fuse_generic(x, y), vir_fuse_generic(y, x));
            }
        }
        // associativity on a smaller window (the products grow fast)
        let small: Vec<VirSymbol> =
            window.iter().copied().filter(|s| s.a <= 2 && s.b <= 2).collect();
        for &x in &small {
            for &y in &small {
                let xy = vir_fuse_generic(x, y);
                for &z in &small {
                    let lhs = vir_fuse_generic_sums(&xy, &FormalSum::singleton(z));
                    let rhs = vir_fuse_generic_sums(
                        &FormalSum::singleton(x),
                        &vir_fuse_generic(y, z),
                    );
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn ds_epimorphism_small() {
        assert!(verify_ds_epimorphism(DsMode::Generic { bound: 2 }).is_ok());
        for (p, q) in [(3, 2), (4, 3)] {
            let level = RationalLevel::new(p, q).unwrap();
            assert!(verify_ds_epimorphism(DsMode::Rational(level)).is_ok());
        }
        let q1 = RationalLevel::new(5, 1).unwrap();
        assert!(matches!(
            verify_ds_epimorphism(DsMode::Rational(q1)),
            Err(DsError::BadLevel(_, _))
        ));
    }
}
