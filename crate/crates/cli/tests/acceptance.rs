//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fusion_rings::affine::{
    classes, fuse_rational, genus_dimension, structure_table, verify_assoc_generic,
    verify_assoc_rational, verify_comm_generic, verify_factorization, verify_qdim_hom,
    verify_quotient, verify_representative_independence, AdmissibleClass, RationalLevel,
};
use fusion_rings::oracle::verify_oracle;
use fusion_rings::ring::{FormalSum, Int};
use fusion_rings::tensor::{osp_tensor, osp_tensor_oracle, OspIrrep, Parity};
use fusion_rings::virasoro::{
    ds_map, minimal_classes, vir_canonicalize, vir_fuse_minimal, vir_fuse_minimal_sums,
    verify_ds_epimorphism, DsMode, MinimalClass, MinimalLevel, VirSymbol,
};

const LEVELS: [(u32, u32); 5] = [(3, 2), (5, 2), (4, 3), (5, 3), (7, 2)];

fn level(p: u32, q: u32) -> RationalLevel {
    RationalLevel::new(p, q).unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fusion-rings"))
}

#[test]
fn acceptance_01_generic_ring_laws() {
    let start = Instant::now();
    let comm = verify_comm_generic(4).expect("commutativity at bound 4");
    let assoc = verify_assoc_generic(4).expect("associativity at bound 4");
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(10),
        "generic ring laws took {elapsed:?}, budget is 10s"
    );
    println!(
        "ACCEPTANCE 1 PASS: generic fusion commutative ({} pairs) and associative ({} triples, r,s <= 4) in {elapsed:?}",
        comm.checked, assoc.checked
    );
}

#[test]
fn acceptance_02_factorization() {
    let report = verify_factorization(5).expect("factorization at bound 5");
    println!(
        "ACCEPTANCE 2 PASS: generic constants factor as osp(1|2) x sl2 multiplicities ({} pairs, indices <= 5)",
        report.checked
    );
}

#[test]
fn acceptance_03_dimension_homomorphism() {
    let report = verify_qdim_hom(5).expect("quantum dimension at bound 5");
    println!(
        "ACCEPTANCE 3 PASS: qdim(r,e;s) = (2r+1)(s+1) multiplicative on fuse_generic ({} pairs, indices <= 5)",
        report.checked
    );
}

#[test]
fn acceptance_04_osp_matrix_oracle() {
    let start = Instant::now();
    let mut checked = 0;
    for n1 in 0..=4 {
        for n2 in 0..=4 {
            for p1 in [Parity::Even, Parity::Odd] {
                for p2 in [Parity::Even, Parity::Odd] {
                    let a = OspIrrep::new(n1, p1);
                    let b = OspIrrep::new(n2, p2);
                    assert_eq!(
                        osp_tensor_oracle(a, b),
                        osp_tensor(a, b),
                        "matrix oracle disagrees at {a:?} (x) {b:?}"
                    );
                    checked += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(30),
        "osp oracle sweep took {elapsed:?}, budget is 30s"
    );
    println!(
        "ACCEPTANCE 4 PASS: exact-kernel osp(1|2) oracle matches the closed decomposition ({checked} pairs, r1,r2 <= 4) in {elapsed:?}"
    );
}

#[test]
fn acceptance_05_rational_fusion() {
    let mut triples = 0;
    for (p, q) in LEVELS {
        let l = level(p, q);
        let assoc = verify_assoc_rational(l)
            .unwrap_or_else(|e| panic!("associativity at level {l}: {e}"));
        verify_representative_independence(l)
            .unwrap_or_else(|e| panic!("representative independence at level {l}: {e}"));
        verify_quotient(l).unwrap_or_else(|e| panic!("quotient property at level {l}: {e}"));
        triples += assoc.checked;
    }
    println!(
        "ACCEPTANCE 5 PASS: rational fusion associative ({triples} class triples), canonicalization representative-independent and quotient property verified at levels (3,2),(5,2),(4,3),(5,3),(7,2)"
    );
}

#[test]
fn acceptance_06_ds_epimorphism() {
    let generic = verify_ds_epimorphism(DsMode::Generic { bound: 3 })
        .expect("generic ds homomorphism at bound 3");
    let mut rational = 0;
    for (p, q) in LEVELS {
        let report = verify_ds_epimorphism(DsMode::Rational(level(p, q)))
            .unwrap_or_else(|e| panic!("rational ds at {p}/{q}: {e}"));
        rational += report.checked;
    }
    println!(
        "ACCEPTANCE 6 PASS: phi_e + phi_f is a ring epimorphism (generic bound 3: {} checks; five rational levels incl. well-definedness: {} checks)",
        generic.checked, rational
    );
}

#[test]
fn acceptance_07_minimal_model_cross_check() {
    let vl = MinimalLevel::new(4, 3).unwrap();
    let cls = minimal_classes(vl);
    assert_eq!(cls.len(), 3, "Ising must have exactly 3 classes");
    let (one, sigma, eps) = (cls[0], cls[1], cls[2]);
    assert_eq!(one.rep(), VirSymbol::new(0, 0));
    assert_eq!(sigma.rep(), VirSymbol::new(0, 1));
    assert_eq!(eps.rep(), VirSymbol::new(0, 2));

    let expect = |x: &MinimalClass, y: &MinimalClass, want: Vec<MinimalClass>| {
        let got = vir_fuse_minimal(x, y).unwrap();
        let want = FormalSum::normalize(want.into_iter().map(|c| (c, Int::from(1))));
        assert_eq!(got, want, "minimal fusion table broken at {x} o {y}");
    };
    expect(&sigma, &sigma, vec![one, eps]);
    expect(&eps, &eps, vec![one]);
    expect(&sigma, &eps, vec![sigma]);

    // independent confirmation: the whole (4,3) minimal table is the DS
    // image of the affine (4,3) fusion
    let al = level(4, 3);
    let ds = |c: &AdmissibleClass| -> FormalSum<MinimalClass> {
        ds_map(&FormalSum::singleton(c.rep())).linear_map(|v| {
            match vir_canonicalize(vl, *v).expect("in range") {
                Some(class) => FormalSum::singleton(class),
                None => FormalSum::zero(),
            }
        })
    };
    for a in classes(al) {
        for b in classes(al) {
            let lhs = fuse_rational(&a, &b).unwrap().linear_map(&ds);
            let rhs = vir_fuse_minimal_sums(&ds(&a), &ds(&b)).unwrap();
            assert_eq!(lhs, rhs, "DS image disagrees at {} o {}", a.rep(), b.rep());
        }
    }
    println!(
        "ACCEPTANCE 7 PASS: (4,3) minimal model has 3 classes with sigma*sigma = 1 + eps, eps*eps = 1, sigma*eps = sigma, confirmed against the DS image of the affine (4,3) table"
    );
}

#[test]
fn acceptance_08_coinvariant_oracle() {
    let report = verify_oracle(3).expect("coinvariant oracle at bound 3");
    println!(
        "ACCEPTANCE 8 PASS: line-intersection oracle reproduces fuse_generic on {} pairs (indices <= 3) after two-seed calibration",
        report.checked
    );
}

/// Multiply ring elements in a random parenthesization order.
fn random_tree_product(
    rng: &mut ChaCha8Rng,
    elements: &[FormalSum<AdmissibleClass>],
) -> FormalSum<AdmissibleClass> {
    match elements.len() {
        0 => unreachable!("caller guarantees a nonempty list"),
        1 => elements[0].clone(),
        n => {
            let split = rng.random_range(1..n);
            let left = random_tree_product(rng, &elements[..split]);
            let right = random_tree_product(rng, &elements[split..]);
            FormalSum::try_bilinear_product(&left, &right, fuse_rational)
                .expect("same level")
        }
    }
}

#[test]
fn acceptance_09_genus_algorithm() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let l = level(5, 2);
    let table = structure_table(l);
    let cls = table.classes().to_vec();
    let n = table.len();

    // handle element as a ring element
    let mut handle = FormalSum::zero();
    for a in 0..n {
        let astar = table.conjugate(a).unwrap();
        handle = handle.add(&fuse_rational(&cls[a], &cls[astar]).unwrap());
    }
    let unit = cls[table.unit_index()];

    for _ in 0..100 {
        let genus = rng.random_range(0..=2u32);
        let min_insertions = u32::from(genus == 0) as usize;
        let count = rng.random_range(min_insertions..=4);
        let insertions: Vec<usize> =
            (0..count).map(|_| rng.random_range(0..n)).collect();
        let reference = genus_dimension(&table, genus, &insertions).unwrap();

        let mut elements: Vec<FormalSum<AdmissibleClass>> = insertions
            .iter()
            .map(|&i| FormalSum::singleton(cls[i]))
            .collect();
        for _ in 0..genus {
            elements.push(handle.clone());
        }
        elements.shuffle(&mut rng);
        let product = random_tree_product(&mut rng, &elements);
        assert_eq!(
            product.coeff(&unit),
            reference,
            "genus dimension depends on order/parenthesization: g={genus}, insertions={insertions:?}"
        );
    }

    // genus-1 dimension with no insertions counts the classes at every
    // tested level (all of which have only self-conjugate classes)
    for (p, q) in LEVELS {
        let table = structure_table(level(p, q));
        for i in 0..table.len() {
            assert_eq!(table.conjugate(i).unwrap(), i, "unexpected non-self-conjugate class");
        }
        let dim = genus_dimension(&table, 1, &[]).unwrap();
        assert_eq!(dim, Int::from(table.len() as u64));
    }
    println!(
        "ACCEPTANCE 9 PASS: genus dimension invariant under 100 random orders/parenthesizations at (5,2) (g <= 2, n <= 4); genus-1 dimension = class count at all five levels"
    );
}

#[test]
fn acceptance_10_table_determinism() {
    let run = |args: &[&str]| -> Vec<u8> {
        let out = bin().args(args).output().expect("binary runs");
        assert!(out.status.success(), "table command failed: {out:?}");
        out.stdout
    };
    let first = run(&["table", "--level", "5/3", "--format", "json"]);
    let second = run(&["table", "--level", "5/3", "--format", "json"]);
    assert_eq!(first, second, "table output is not byte-identical across runs");

    for (name, p, q) in [("table_3_2.json", "3", "2"), ("table_4_3.json", "4", "3")] {
        let golden_path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
        let golden = std::fs::read(&golden_path).expect("golden file committed");
        let got = run(&["table", "--level", &format!("{p}/{q}"), "--format", "json"]);
        assert_eq!(got, golden, "table {p}/{q} deviates from the golden file");
    }
    println!(
        "ACCEPTANCE 10 PASS: table 5/3 byte-identical across runs; 3/2 and 4/3 match the committed golden files"
    );
}
