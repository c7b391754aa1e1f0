//! Fixed inputs shared by the criterion benchmarks.

use kron_core::{make_example, CharacterSet, ExampleSpec, GroupSpec};

pub fn integers(ks: &[i64]) -> CharacterSet {
    CharacterSet::integers(ks).expect("distinct integers")
}

pub fn coset(n: u64, k: u64) -> CharacterSet {
    make_example(&ExampleSpec::CosetTruncation { n, k }).expect("valid coset")
}

pub fn z2cube() -> CharacterSet {
    make_example(&ExampleSpec::Z2Cube).expect("fixed example")
}

/// Standard basis of `Z_2^d`.
pub fn z2_basis(d: usize) -> CharacterSet {
    let g = GroupSpec::torsion(2, d).expect("d >= 1");
    let basis = (0..d)
        .map(|i| g.character(vec![], (0..d).map(|j| (i == j) as i64).collect()).expect("in range"))
        .collect();
    CharacterSet::new(g, basis).expect("distinct")
}

pub fn hadamard(q: f64, length: usize) -> CharacterSet {
    make_example(&ExampleSpec::Hadamard { q, length, start: 1 }).expect("valid ratio")
}
