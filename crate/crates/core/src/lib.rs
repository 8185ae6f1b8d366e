//! Exact-arithmetic fusion rings of affine sl2 and friends.
//!
//! The crate computes, over arbitrary-precision integers and rationals:
//!
//! * the generic-level fusion ring on symbols `(V_r^e, V_s)` labelling
//!   generalized Weyl modules, which factorizes as the product of the
//!   osp(1|2) and sl2 Grothendieck rings ([`affine`], [`tensor`]);
//! * the rational-level fusion ring on admissible equivalence classes, its
//!   structure-constant tables and genus-g conformal-block dimensions by the
//!   pinching algorithm ([`affine`]);
//! * Virasoro fusion at generic and minimal levels together with the
//!   Drinfeld-Sokolov epimorphism from the affine ring ([`virasoro`]);
//! * two independent oracles cross-validating the closed formulas: explicit
//!   osp(1|2) matrices ([`tensor::osp_tensor_oracle`]) and the
//!   coinvariant line-intersection derivation ([`oracle::fusion_oracle`]).
//!
//! The verification sweeps and table builds are data-parallel; the
//! `parallel` feature (on by default) runs them on rayon, without it they
//! fall back to sequential loops.

pub mod affine;
mod exec;
pub mod matrix;
pub mod oracle;
#[doc(hidden)]
pub mod perf;
pub mod ring;
pub mod tensor;
pub mod virasoro;

pub use affine::{
    canonicalize, classes, fuse_generic, fuse_rational, genus_dimension, qdim,
    structure_table, unit_symbol, AdmissibleClass, AffineSymbol, FusionTable,
    RationalLevel, SweepReport,
};
pub use matrix::ExactMatrix;
pub use oracle::{
    calibrate_convention, fusion_oracle, generic_splitting, monodromy_coeffs,
    pi_projection, Convention, SingularData, VanishingFactor, WeightLine,
};
pub use ring::{lf_solve, FormalSum, Int, LinearForm, Rat};
pub use tensor::{
    osp_forget_to_sl2, osp_matrix_rep, osp_tensor, osp_tensor_oracle,
    osp_truncated_tensor, sl2_tensor, sl2_truncated_tensor, OspIrrep, OspMatrixRep,
    Parity, Sl2Irrep,
};
pub use virasoro::{
    central_charge, ds_map, ds_phi_e, ds_phi_f, minimal_classes, vir_canonicalize,
    vir_fuse_generic, vir_fuse_minimal, CentralCharge, MinimalClass, MinimalLevel,
    VirSymbol,
};
