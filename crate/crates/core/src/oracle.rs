//! Independent derivation of generic fusion products from first principles:
//! highest-weight lines, singular-vector degree data, the linear vanishing
//! factors of singular vectors acting on loop modules, and exact
//! intersection of the two resulting families of lines in the
//! `(t, lambda)`-plane. Also the projected singular-vector evaluator, the
//! monodromy coefficients and the generic bundle-splitting rule.
//!
//! The published factor formulas carry inconsistent labels and sign
//! conventions between their two sources, so the concrete families used here
//! are pinned by a one-time calibration against two seed products (see
//! [`calibrate_convention`]); after calibration the oracle must agree with
//! [`fuse_generic`] everywhere, which the verification sweep checks
//! exhaustively.

use std::collections::BTreeSet;
use std::fmt;

use num::One;
use thiserror::Error;

use crate::affine::{fuse_generic, symbols_up_to, AffineSymbol, SweepReport};
use crate::matrix::ExactMatrix;
use crate::ring::{lf_solve, rat, rat_int, LinearForm, Rat};
use crate::tensor::Parity;

/// Degree data of the singular vector killed in a generalized Weyl module:
/// which of the two families it belongs to and its two indices.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SingularData {
    pub branch: Parity,
    pub n_sv: u32,
    pub m_sv: u32,
}

/// A linear vanishing factor `c0 + ct*t + c_lambda*lambda` in the weight
/// `lambda` attached to the third puncture.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VanishingFactor {
    pub c0: Rat,
    pub ct: Rat,
    pub c_lambda: Rat,
}

impl VanishingFactor {
    /// Solve for `lambda` as a line over `t`; `None` when the factor does
    /// not involve `lambda`.
    pub fn solve(&self) -> Option<LinearForm> {
        lf_solve(&self.c0, &self.ct, &self.c_lambda)
    }
}

/// A highest weight as a line over the parameter `t`, tagged with the
/// parametrization branch it lies on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightLine {
    pub form: LinearForm,
    pub branch: Parity,
}

/// Highest weight of the generalized Weyl module with the given symbol:
/// `(r,0;s) -> -r*t + s` on branch 0, `(r,1;s) -> (r+1)*t - s - 2` on
/// branch 1.
pub fn weight_of_symbol(x: AffineSymbol) -> WeightLine {
    match x.parity {
        Parity::Even => WeightLine {
            form: LinearForm::from_ints(i64::from(x.s), -i64::from(x.r)),
            branch: Parity::Even,
        },
        Parity::Odd => WeightLine {
            form: LinearForm::from_ints(-(i64::from(x.s)) - 2, i64::from(x.r) + 1),
            branch: Parity::Odd,
        },
    }
}

/// All lattice solutions of the inverse weight lookup. A line has at most
/// one solution: non-positive integer slope with integer constant >= 0 lies
/// on branch 0, positive integer slope with integer constant <= -2 on
/// branch 1; everything else is off-lattice.
pub fn symbol_of_weight(w: &LinearForm) -> Vec<(AffineSymbol, Parity)> {
    let mut out = Vec::new();
    let (Some(slope), Some(constant)) = (as_integer(&w.t_coeff), as_integer(&w.constant))
    else {
        return out;
    };
    if slope <= 0 && constant >= 0 {
        out.push((
            AffineSymbol::new((-slope) as u32, Parity::Even, constant as u32),
            Parity::Even,
        ));
    }
    if slope >= 1 && constant <= -2 {
        out.push((
            AffineSymbol::new((slope - 1) as u32, Parity::Odd, (-constant - 2) as u32),
            Parity::Odd,
        ));
    }
    out
}

fn as_integer(x: &Rat) -> Option<i64> {
    if x.is_integer() {
        i64::try_from(x.to_integer()).ok()
    } else {
        None
    }
}

/// Singular-vector degree data of a symbol. Both branches carry
/// `(n, m) = (s + 1, r)`; the branch-0 case is anchored by the Weyl module
/// `(0,0;n)` whose singular vector is `f^{n+1}`, and the branch-1 indices
/// are fixed by the same calibration that pins the factor families.
pub fn singular_data(x: AffineSymbol) -> SingularData {
    SingularData { branch: x.parity, n_sv: x.s + 1, m_sv: x.r }
}

/// The weight parameter `alpha` of the loop-module identification, as an
/// affine function `lambda_coeff * lambda + base(t)` of the weight at the
/// third puncture.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlphaForm {
    pub base: LinearForm,
    pub lambda_coeff: Rat,
}

impl AlphaForm {
    /// `alpha = (lambda - l0 - l1 - 2) / 2` for the modules of weights `l0`,
    /// `l1` at the finite punctures.
    pub fn for_weights(l0: &LinearForm, l1: &LinearForm) -> AlphaForm {
        let sum = l0 + l1;
        let base = LinearForm {
            constant: (-&sum.constant - rat_int(2)) / rat_int(2),
            t_coeff: -&sum.t_coeff / rat_int(2),
        };
        AlphaForm { base, lambda_coeff: rat(1, 2) }
    }

    /// The factor `alpha + shift(t)` as a vanishing factor in `lambda`.
    fn plus(&self, shift: &LinearForm) -> VanishingFactor {
        VanishingFactor {
            c0: &self.base.constant + &shift.constant,
            ct: &self.base.t_coeff + &shift.t_coeff,
            c_lambda: self.lambda_coeff.clone(),
        }
    }
}

/// The linear factors through which the singular vector annihilates the
/// loop-module functional. `beta` is the weight of the companion module at
/// the other finite puncture.
///
/// Branch 1 (singular data `(n, m)`):
///   `(alpha + s)` for `s = 1..n`, and for `i = 1..m`, `j = 1..n` the pair
///   `(alpha - i*t + j)`, `(alpha - i*t + beta + j + 1)`.
/// Branch 0 (the beta-dependent family):
///   `(alpha + beta + 2 - s)` for `s = 1..n`, and the pair
///   `(alpha + i*t - j + 1)`, `(alpha + i*t + beta + 2 - j)`.
///
/// Which parity of symbol feeds which family is part of the calibrated
/// convention (the published labels are inconsistent); the seed calibration
/// selects the branch swap, i.e. parity-0 modules use the branch-1 family.
pub fn loop_factors(
    sd: &SingularData,
    alpha: &AlphaForm,
    beta: &LinearForm,
) -> Vec<VanishingFactor> {
    let mut out = Vec::new();
    let n = i64::from(sd.n_sv);
    let m = i64::from(sd.m_sv);
    match sd.branch {
        Parity::Odd => {
            for s in 1..=n {
                out.push(alpha.plus(&LinearForm::from_ints(s, 0)));
            }
            for i in 1..=m {
                for j in 1..=n {
                    out.push(alpha.plus(&LinearForm::from_ints(j, -i)));
                    let mut shift = LinearForm::from_ints(j + 1, -i);
                    shift = &shift + beta;
                    out.push(alpha.plus(&shift));
                }
            }
        }
        Parity::Even => {
            for s in 1..=n {
                let mut shift = LinearForm::from_ints(2 - s, 0);
                shift = &shift + beta;
                out.push(alpha.plus(&shift));
            }
            for i in 1..=m {
                for j in 1..=n {
                    out.push(alpha.plus(&LinearForm::from_ints(1 - j, i)));
                    let mut shift = LinearForm::from_ints(2 - j, i);
                    shift = &shift + beta;
                    out.push(alpha.plus(&shift));
                }
            }
        }
    }
    out
}

/// The duality normalization left implicit by the construction: an optional
/// reflection `lambda -> -lambda - 2` of the intersection lines and an
/// optional swap of the two factor families. Fixed once by two seed products
/// and then frozen.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Convention {
    pub reflect: bool,
    pub swap_branches: bool,
}

impl Convention {
    fn sigma(&self, line: &LinearForm) -> LinearForm {
        if self.reflect {
            LinearForm {
                constant: -&line.constant - rat_int(2),
                t_coeff: -&line.t_coeff,
            }
        } else {
            line.clone()
        }
    }
}

fn fmt_lines(lines: &[LinearForm]) -> String {
    let parts: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Diagnostic payload for an intersection line with no symbol on either
/// parametrization lattice; carries the uncollapsed root sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffLatticeDetail {
    pub line: LinearForm,
    pub family_a: Vec<LinearForm>,
    pub family_b: Vec<LinearForm>,
}

impl fmt::Display for OffLatticeDetail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "intersection line {} is off-lattice; root set A = {}, root set B = {}",
            self.line,
            fmt_lines(&self.family_a),
            fmt_lines(&self.family_b)
        )
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0}")]
    OffLattice(Box<OffLatticeDetail>),
    #[error("no convention candidate reproduces the seed products")]
    CalibrationFailed,
    #[error("{0} convention candidates reproduce the seed products; seeds do not pin the convention")]
    CalibrationAmbiguous(usize),
}

/// Root lines of one module's vanishing equation, one entry per factor
/// (uncollapsed).
fn factor_lines(
    conv: &Convention,
    x: AffineSymbol,
    alpha: &AlphaForm,
    beta: &LinearForm,
) -> Vec<LinearForm> {
    let mut sd = singular_data(x);
    if conv.swap_branches {
        sd.branch = sd.branch.flip();
    }
    loop_factors(&sd, alpha, beta)
        .iter()
        .filter_map(VanishingFactor::solve)
        .collect()
}

/// Fusion support from line intersection under an explicit convention:
/// returns the sorted multiset of output symbols.
pub fn fusion_oracle_with(
    conv: &Convention,
    a: AffineSymbol,
    b: AffineSymbol,
) -> Result<Vec<AffineSymbol>, OracleError> {
    let l0 = weight_of_symbol(a).form;
    let l1 = weight_of_symbol(b).form;
    let alpha = AlphaForm::for_weights(&l0, &l1);
    let fam_a = factor_lines(conv, a, &alpha, &l1);
    let fam_b = factor_lines(conv, b, &alpha, &l0);
    let set_a: BTreeSet<&LinearForm> = fam_a.iter().collect();
    let set_b: BTreeSet<&LinearForm> = fam_b.iter().collect();
    let mut out = Vec::new();
    for line in set_a.intersection(&set_b) {
        let mapped = conv.sigma(line);
        let hits = symbol_of_weight(&mapped);
        match hits.as_slice() {
            [(sym, _)] => out.push(*sym),
            _ => {
                return Err(OracleError::OffLattice(Box::new(OffLatticeDetail {
                    line: mapped,
                    family_a: fam_a.clone(),
                    family_b: fam_b.clone(),
                })))
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Sorted support of the closed-form fusion product.
pub fn fusion_support(a: AffineSymbol, b: AffineSymbol) -> Vec<AffineSymbol> {
    fuse_generic(a, b).support().copied().collect()
}

const SEEDS: [(AffineSymbol, AffineSymbol); 2] = [
    (
        AffineSymbol { r: 0, parity: Parity::Even, s: 1 },
        AffineSymbol { r: 0, parity: Parity::Even, s: 2 },
    ),
    (
        AffineSymbol { r: 1, parity: Parity::Even, s: 0 },
        AffineSymbol { r: 1, parity: Parity::Even, s: 0 },
    ),
];

/// Fix the convention on exactly the two seed products (a Weyl pair and the
/// first non-Weyl square); exactly one candidate must survive.
pub fn calibrate_convention() -> Result<Convention, OracleError> {
    let mut passing = Vec::new();
    for reflect in [false, true] {
        for swap_branches in [false, true] {
            let conv = Convention { reflect, swap_branches };
            let ok = SEEDS.iter().all(|&(a, b)| {
                fusion_oracle_with(&conv, a, b)
                    .map(|got| got == fusion_support(a, b))
                    .unwrap_or(false)
            });
            if ok {
                passing.push(conv);
            }
        }
    }
    match passing.len() {
        0 => Err(OracleError::CalibrationFailed),
        1 => Ok(passing[0]),
        n => Err(OracleError::CalibrationAmbiguous(n)),
    }
}

/// Calibrate on the seed products, then run the intersection oracle.
pub fn fusion_oracle(
    a: AffineSymbol,
    b: AffineSymbol,
) -> Result<Vec<AffineSymbol>, OracleError> {
    let conv = calibrate_convention()?;
    fusion_oracle_with(&conv, a, b)
}

/// Disagreement between the intersection oracle and the closed formula,
/// including the uncollapsed root sets of both vanishing equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleMismatch {
    pub a: AffineSymbol,
    pub b: AffineSymbol,
    pub got: Vec<AffineSymbol>,
    pub want: Vec<AffineSymbol>,
    pub family_a: Vec<LinearForm>,
    pub family_b: Vec<LinearForm>,
}

impl fmt::Display for OracleMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "oracle disagrees with the closed form at {} o {}: oracle {}, closed form {}; root set A = {}, root set B = {}",
            self.a,
            self.b,
            fmt_symbols(&self.got),
            fmt_symbols(&self.want),
            fmt_lines(&self.family_a),
            fmt_lines(&self.family_b)
        )
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleVerifyError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Mismatch(Box<OracleMismatch>),
}

fn fmt_symbols(symbols: &[AffineSymbol]) -> String {
    let parts: Vec<String> = symbols.iter().map(|s| s.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Calibrate once, then compare the oracle with the closed-form support on
/// every symbol pair up to `bound`.
pub fn verify_oracle(bound: u32) -> Result<SweepReport, OracleVerifyError> {
    let conv = calibrate_convention()?;
    let syms = symbols_up_to(bound);
    let n = syms.len();
    let failure = crate::exec::find_failure(n * n, |ij| {
        let (a, b) = (syms[ij / n], syms[ij % n]);
        let want = fusion_support(a, b);
        match fusion_oracle_with(&conv, a, b) {
            Ok(got) if got == want => None,
            Ok(got) => {
                let l0 = weight_of_symbol(a).form;
                let l1 = weight_of_symbol(b).form;
                let alpha = AlphaForm::for_weights(&l0, &l1);
                Some(OracleVerifyError::Mismatch(Box::new(OracleMismatch {
                    a,
                    b,
                    got,
                    want,
                    family_a: factor_lines(&conv, a, &alpha, &l1),
                    family_b: factor_lines(&conv, b, &alpha, &l0),
                })))
            }
            Err(e) => Some(e.into()),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(SweepReport { checked: (n * n) as u64 }),
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ProjectionError {
    #[error("the projected singular vector is undefined at the critical value t = -2")]
    CriticalLevel,
}

fn sl2_e(d: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(d + 1, d + 1);
    for i in 1..=d {
        m[(i - 1, i)] = rat_int((i as i64) * (d as i64 - i as i64 + 1));
    }
    m
}

fn sl2_f(d: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(d + 1, d + 1);
    for i in 0..d {
        m[(i + 1, i)] = Rat::one();
    }
    m
}

fn sl2_h(d: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(d + 1, d + 1);
    for i in 0..=d {
        m[(i, i)] = rat_int(d as i64 - 2 * i as i64);
    }
    m
}

/// `P(u) = e f - (u+1) h - u(u+1)` on the (d+1)-dimensional sl2-module.
fn p_of(u: &Rat, d: usize) -> ExactMatrix {
    let ef = sl2_e(d).mul(&sl2_f(d));
    let u1 = u + Rat::one();
    ef.sub(&sl2_h(d).scale(&u1))
        .sub(&ExactMatrix::identity(d + 1).scale(&(u * &u1)))
}

/// Evaluation of the projected singular vector on the (d+1)-dimensional
/// sl2-module at a numeric `t0`:
/// branch 0 gives `(prod_{i=1..m} prod_{j=0..N-1} P(i*t0+j)) f^N`, branch 1
/// gives `(prod_{i=1..m} prod_{j=1..N} P(-i*t0-j)) e^N`, with `N = n_sv`.
pub fn pi_projection(
    sd: &SingularData,
    t0: &Rat,
    d: u32,
) -> Result<ExactMatrix, ProjectionError> {
    if *t0 == rat_int(-2) {
        return Err(ProjectionError::CriticalLevel);
    }
    let d = d as usize;
    let n = sd.n_sv as i64;
    let m = sd.m_sv as i64;
    let mut acc = match sd.branch {
        Parity::Even => {
            let f = sl2_f(d);
            let mut power = ExactMatrix::identity(d + 1);
            for _ in 0..n {
                power = f.mul(&power);
            }
            power
        }
        Parity::Odd => {
            let e = sl2_e(d);
            let mut power = ExactMatrix::identity(d + 1);
            for _ in 0..n {
                power = e.mul(&power);
            }
            power
        }
    };
    for i in 1..=m {
        match sd.branch {
            Parity::Even => {
                for j in 0..n {
                    let u = t0 * rat_int(i) + rat_int(j);
                    acc = p_of(&u, d).mul(&acc);
                }
            }
            Parity::Odd => {
                for j in 1..=n {
                    let u = -(t0 * rat_int(i)) - rat_int(j);
                    acc = p_of(&u, d).mul(&acc);
                }
            }
        }
    }
    Ok(acc)
}

/// Monodromy coefficients of a vertex operator between modules of weights
/// `l1`, `l2` with loop parameter `beta`: `D1 = (-l2 + l1 + beta)/2` and
/// `D2 = (-C(l2) + C(l1) + C(beta))/2` where `C(x) = x(x+2)/2`.
pub fn monodromy_coeffs(l1: &Rat, l2: &Rat, beta: &Rat) -> (Rat, Rat) {
    let casimir = |x: &Rat| -> Rat { x * (x + rat_int(2)) / rat_int(2) };
    let d1 = (-l2 + l1 + beta) / rat_int(2);
    let d2 = (-casimir(l2) + casimir(l1) + casimir(beta)) / rat_int(2);
    (d1, d2)
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SplittingError {
    #[error("need m >= |r - s|, got m = {m} with |r - s| = {gap}")]
    TooFewLines { m: u32, gap: u64 },
}

/// Generic splitting type of the rank-2 bundle `O(r) + O(s)` after
/// subtracting `m` lines: `(p+1, p)` when `r + s - m = 2p + 1`, `(p, p)`
/// when `r + s - m = 2p`.
pub fn generic_splitting(r: i64, s: i64, m: u32) -> Result<(i64, i64), SplittingError> {
    let gap = r.abs_diff(s);
    if u64::from(m) < gap {
        return Err(SplittingError::TooFewLines { m, gap });
    }
    let x = r + s - i64::from(m);
    if x.rem_euclid(2) == 0 {
        Ok((x / 2, x / 2))
    } else {
        let p = x.div_euclid(2);
        Ok((p + 1, p))
    }
}
