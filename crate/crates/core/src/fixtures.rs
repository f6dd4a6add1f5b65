//! The small named lattices used throughout tests, docs and the CLI.

use crate::lattice::Lattice;

/// The one-element lattice.
pub fn chain1() -> Lattice {
    Lattice::new::<_, &str>(&["0"], &[]).expect("chain1")
}

pub fn chain2() -> Lattice {
    Lattice::new(&["0", "1"], &[("0", "1")]).expect("chain2")
}

pub fn chain3() -> Lattice {
    Lattice::new(&["0", "m", "1"], &[("0", "m"), ("m", "1")]).expect("chain3")
}

/// The four-element Boolean lattice (the square).
pub fn b2() -> Lattice {
    Lattice::new(
        &["0", "a", "b", "1"],
        &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
    )
    .expect("b2")
}

/// The diamond: three pairwise incomparable atoms.
pub fn m3() -> Lattice {
    Lattice::new(
        &["0", "a", "b", "c", "1"],
        &[
            ("0", "a"),
            ("0", "b"),
            ("0", "c"),
            ("a", "1"),
            ("b", "1"),
            ("c", "1"),
        ],
    )
    .expect("m3")
}

/// The pentagon: `0 < c < a < 1` and `0 < b < 1`.
pub fn n5() -> Lattice {
    Lattice::new(
        &["0", "a", "b", "c", "1"],
        &[("0", "c"), ("c", "a"), ("a", "1"), ("0", "b"), ("b", "1")],
    )
    .expect("n5")
}

/// Every named fixture with its display label.
pub fn all() -> Vec<(&'static str, Lattice)> {
    vec![
        ("CHAIN1", chain1()),
        ("CHAIN2", chain2()),
        ("CHAIN3", chain3()),
        ("B2", b2()),
        ("M3", m3()),
        ("N5", n5()),
    ]
}
