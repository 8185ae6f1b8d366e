//! Benchmark entry points pairing the sequential drivers with their rayon
//! counterparts. Not part of the public API.

use crate::affine::{AssocSweep, FusionTable, RationalLevel};
use crate::exec;
use crate::tensor::{osp_tensor, osp_tensor_oracle, OspIrrep, Parity};

pub fn table_cells_seq(level: RationalLevel) -> Vec<u64> {
    let table = FusionTable::new(level);
    let n = table.len();
    exec::map_indices_seq(n * n, |ij| table.compute_row(ij / n, ij % n)).concat()
}

#[cfg(feature = "parallel")]
pub fn table_cells_par(level: RationalLevel) -> Vec<u64> {
    let table = FusionTable::new(level);
    let n = table.len();
    exec::map_indices(n * n, |ij| table.compute_row(ij / n, ij % n)).concat()
}

pub fn assoc_sweep_seq(bound: u32) -> u64 {
    let sweep = AssocSweep::new(bound);
    assert!(exec::find_failure_seq(sweep.len(), |idx| sweep.check(idx)).is_none());
    sweep.len() as u64
}

#[cfg(feature = "parallel")]
pub fn assoc_sweep_par(bound: u32) -> u64 {
    let sweep = AssocSweep::new(bound);
    assert!(exec::find_failure(sweep.len(), |idx| sweep.check(idx)).is_none());
    sweep.len() as u64
}

fn osp_pairs(rmax: u32) -> Vec<(OspIrrep, OspIrrep)> {
    let mut reps = Vec::new();
    for n in 0..=rmax {
        for parity in [Parity::Even, Parity::Odd] {
            reps.push(OspIrrep::new(n, parity));
        }
    }
    let mut pairs = Vec::new();
    for &a in &reps {
        for &b in &reps {
            pairs.push((a, b));
        }
    }
    pairs
}

pub fn osp_oracle_sweep_seq(rmax: u32) -> u64 {
    let pairs = osp_pairs(rmax);
    let bad = exec::find_failure_seq(pairs.len(), |i| {
        let (a, b) = pairs[i];
        (osp_tensor_oracle(a, b) != osp_tensor(a, b)).then_some(())
    });
    assert!(bad.is_none());
    pairs.len() as u64
}

#[cfg(feature = "parallel")]
pub fn osp_oracle_sweep_par(rmax: u32) -> u64 {
    let pairs = osp_pairs(rmax);
    let bad = exec::find_failure(pairs.len(), |i| {
        let (a, b) = pairs[i];
        (osp_tensor_oracle(a, b) != osp_tensor(a, b)).then_some(())
    });
    assert!(bad.is_none());
    pairs.len() as u64
}
