//! Exact-arithmetic foundations: formal integer-linear combinations over an
//! ordered basis-symbol type, and affine linear forms in the level parameter
//! `t`.
//!
//! Everything here is immutable and exact. Coefficients are arbitrary
//! precision integers; weights are exact rationals. The empty [`FormalSum`]
//! is the unique representation of zero, so structural equality coincides
//! with semantic equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

/// Arbitrary-precision integer coefficient.
pub type Int = BigInt;
/// Exact rational, always in lowest terms with positive denominator.
pub type Rat = BigRational;

/// Shorthand rational constructor, mostly for tests and small constants.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Integer-valued rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// An affine form `constant + t_coeff * t` in the generic-level parameter
/// `t = k + 2`. Equality is componentwise; the form is zero iff both fields
/// are zero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct LinearForm {
    pub constant: Rat,
    pub t_coeff: Rat,
}

impl LinearForm {
    pub fn new(constant: Rat, t_coeff: Rat) -> Self {
        LinearForm { constant, t_coeff }
    }

    /// The constant form `c`.
    pub fn from_const(c: Rat) -> Self {
        LinearForm { constant: c, t_coeff: Rat::zero() }
    }

    /// Integer-coefficient form `c + m*t`.
    pub fn from_ints(c: i64, m: i64) -> Self {
        LinearForm { constant: rat_int(c), t_coeff: rat_int(m) }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.t_coeff.is_zero()
    }

    /// Evaluate at a numeric value of `t`.
    pub fn eval(&self, t: &Rat) -> Rat {
        &self.constant + &self.t_coeff * t
    }

    pub fn scale(&self, k: &Rat) -> Self {
        LinearForm { constant: &self.constant * k, t_coeff: &self.t_coeff * k }
    }
}

impl Add for &LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &LinearForm) -> LinearForm {
        LinearForm {
            constant: &self.constant + &rhs.constant,
            t_coeff: &self.t_coeff + &rhs.t_coeff,
        }
    }
}

impl Sub for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        LinearForm {
            constant: &self.constant - &rhs.constant,
            t_coeff: &self.t_coeff - &rhs.t_coeff,
        }
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        LinearForm { constant: -&self.constant, t_coeff: -&self.t_coeff }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.t_coeff.is_zero() {
            return write!(f, "{}", self.constant);
        }
        if self.t_coeff.is_one() {
            write!(f, "t")?;
        } else if (-&self.t_coeff).is_one() {
            write!(f, "-t")?;
        } else {
            write!(f, "{}t", self.t_coeff)?;
        }
        if self.constant.is_positive() {
            write!(f, "+{}", self.constant)?;
        } else if self.constant.is_negative() {
            write!(f, "{}", self.constant)?;
        }
        Ok(())
    }
}

/// Solve the factor `c0 + ct*t + cl*lambda = 0` for `lambda` as a function of
/// `t`. Returns `None` when `cl = 0`, i.e. the factor constrains `t` alone.
pub fn lf_solve(c0: &Rat, ct: &Rat, cl: &Rat) -> Option<LinearForm> {
    if cl.is_zero() {
        return None;
    }
    Some(LinearForm { constant: -(c0 / cl), t_coeff: -(ct / cl) })
}

/// A finite Z-linear combination of basis symbols, the universal carrier for
/// ring elements. Invariants: no zero coefficients are stored and keys are
/// kept in ascending basis order; the empty sum is zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalSum<B: Ord> {
    terms: BTreeMap<B, Int>,
}

impl<B: Ord> Default for FormalSum<B> {
    fn default() -> Self {
        FormalSum { terms: BTreeMap::new() }
    }
}

impl<B: Ord> FormalSum<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single basis element with coefficient 1.
    pub fn singleton(b: B) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(b, Int::one());
        FormalSum { terms }
    }

    pub fn with_coeff(b: B, c: Int) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(b, c);
        }
        FormalSum { terms }
    }

    /// Collect a raw list of `(symbol, coefficient)` pairs: coefficients of
    /// equal symbols are summed, zero coefficients dropped, keys sorted.
    pub fn normalize(raw: impl IntoIterator<Item = (B, Int)>) -> Self {
        let mut terms: BTreeMap<B, Int> = BTreeMap::new();
        for (b, c) in raw {
            if c.is_zero() {
                continue;
            }
            match terms.entry(b) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        FormalSum { terms }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `b`, zero when absent.
    pub fn coeff(&self, b: &B) -> Int {
        self.terms.get(b).cloned().unwrap_or_else(Int::zero)
    }

    pub fn contains(&self, b: &B) -> bool {
        self.terms.contains_key(b)
    }

    /// Terms in ascending basis order.
    pub fn iter(&self) -> impl Iterator<Item = (&B, &Int)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &B> {
        self.terms.keys()
    }

    pub fn into_terms(self) -> BTreeMap<B, Int> {
        self.terms
    }

    pub fn add(&self, other: &Self) -> Self
    where
        B: Clone,
    {
        let mut terms = self.terms.clone();
        for (b, c) in &other.terms {
            match terms.entry(b.clone()) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        FormalSum { terms }
    }

    pub fn scaled(&self, k: &Int) -> Self
    where
        B: Clone,
    {
        if k.is_zero() {
            return Self::zero();
        }
        FormalSum {
            terms: self.terms.iter().map(|(b, c)| (b.clone(), c * k)).collect(),
        }
    }

    /// Linear extension of a basis map `B -> FormalSum<C>`.
    pub fn linear_map<C: Ord + Clone>(
        &self,
        mut f: impl FnMut(&B) -> FormalSum<C>,
    ) -> FormalSum<C> {
        let mut acc = FormalSum::zero();
        for (b, c) in &self.terms {
            acc = acc.add(&f(b).scaled(c));
        }
        acc
    }

    /// Bilinear extension of a basis product rule, propagating rule errors.
    pub fn try_bilinear_product<E>(
        x: &Self,
        y: &Self,
        mut rule: impl FnMut(&B, &B) -> Result<FormalSum<B>, E>,
    ) -> Result<Self, E>
    where
        B: Clone,
    {
        let mut acc = FormalSum::zero();
        for (bx, cx) in &x.terms {
            for (by, cy) in &y.terms {
                acc = acc.add(&rule(bx, by)?.scaled(&(cx * cy)));
            }
        }
        Ok(acc)
    }

    /// Bilinear extension of an infallible basis product rule.
    pub fn bilinear_product(
        x: &Self,
        y: &Self,
        mut rule: impl FnMut(&B, &B) -> FormalSum<B>,
    ) -> Self
    where
        B: Clone,
    {
        match Self::try_bilinear_product(x, y, |a, b| {
            Ok::<_, std::convert::Infallible>(rule(a, b))
        }) {
            Ok(sum) => sum,
            Err(e) => match e {},
        }
    }
}

impl<B: Ord + Clone> Add for &FormalSum<B> {
    type Output = FormalSum<B>;
    fn add(self, rhs: &FormalSum<B>) -> FormalSum<B> {
        FormalSum::add(self, rhs)
    }
}

impl<B: Ord> FromIterator<(B, Int)> for FormalSum<B> {
    fn from_iter<T: IntoIterator<Item = (B, Int)>>(iter: T) -> Self {
        Self::normalize(iter)
    }
}

impl<B: Ord + fmt::Display> fmt::Display for FormalSum<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (b, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{b}")?;
            } else {
                write!(f, "{c}*{b}")?;
            }
        }
        Ok(())
    }
}
