//! Independent oracles shared by the integration tests. Nothing here calls
//! the optimized code paths it is used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use latrep::gen::are_isomorphic;
use latrep::Lattice;

pub type Set = BTreeSet<usize>;

/// Filters of a family as plain sets, family index order preserved.
pub fn family_sets(family: &latrep::FilterFamily) -> Vec<Set> {
    family
        .filters()
        .iter()
        .map(|f| f.members().iter().collect())
        .collect()
}

/// Every filter of `l`, by testing all `2^n` subsets against the definition
/// using only `leq` (meets found by scanning lower bounds). Sorted by
/// cardinality, then members.
pub fn subset_filters(l: &Lattice) -> Vec<Set> {
    let n = l.size();
    assert!(n <= 20);
    let glb = |x: usize, y: usize| -> usize {
        let lower: Vec<usize> = (0..n).filter(|&z| l.leq(z, x) && l.leq(z, y)).collect();
        *lower
            .iter()
            .find(|&&g| lower.iter().all(|&z| l.leq(z, g)))
            .unwrap()
    };
    let mut out = Vec::new();
    for mask in 1u32..1 << n {
        let s: Set = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let up_closed = s.iter().all(|&x| (0..n).all(|y| !l.leq(x, y) || s.contains(&y)));
        let meet_closed = s.iter().all(|&x| s.iter().all(|&y| s.contains(&glb(x, y))));
        if up_closed && meet_closed {
            out.push(s);
        }
    }
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.iter().cmp(y.iter())));
    out
}

/// `{ Z : ∃X ∈ A, ∃Y ∈ B, combine(X, Y) ⊆ Z }` by a plain triple loop.
fn naive_clause(fam: &[Set], a: &Set, b: &Set, combine: fn(&Set, &Set) -> Set) -> Set {
    let mut out = Set::new();
    for (z, zs) in fam.iter().enumerate() {
        'search: for &x in a {
            for &y in b {
                if combine(&fam[x], &fam[y]).is_subset(zs) {
                    out.insert(z);
                    break 'search;
                }
            }
        }
    }
    out
}

fn inter(x: &Set, y: &Set) -> Set {
    x.intersection(y).copied().collect()
}

fn uni(x: &Set, y: &Set) -> Set {
    x.union(y).copied().collect()
}

pub fn naive_join_star(fam: &[Set], a: &Set, b: &Set) -> Set {
    let mut out = naive_clause(fam, a, b, inter);
    out.extend(a);
    out.extend(b);
    out
}

pub fn naive_join_star_bare(fam: &[Set], a: &Set, b: &Set) -> Set {
    naive_clause(fam, a, b, inter)
}

pub fn naive_meet_full(fam: &[Set], a: &Set, b: &Set) -> Set {
    naive_clause(fam, a, b, uni)
        .into_iter()
        .filter(|z| a.contains(z) && b.contains(z))
        .collect()
}

pub fn naive_meet_bare(fam: &[Set], a: &Set, b: &Set) -> Set {
    naive_clause(fam, a, b, uni)
}

/// `f(a)` recomputed from the plain family.
pub fn naive_image(fam: &[Set], a: usize) -> Set {
    (0..fam.len()).filter(|&i| fam[i].contains(&a)).collect()
}

/// Lattices with `n` elements up to isomorphism, by brute force over labeled
/// orders.
///
/// Any lattice has a bottom and a top, so those two points are fixed as
/// labels `0` and `n-1`; every relation on the remaining `n-2` labeled
/// points is tried, partial orders are kept, glb/lub existence is checked
/// directly, and survivors are deduplicated with the backtracking
/// isomorphism test. Returns `(classes, distributive classes)`.
pub fn labeled_order_census(n: usize) -> (usize, usize) {
    assert!((1..=7).contains(&n));
    if n <= 2 {
        return (1, 1);
    }
    let m = n - 2;
    let off: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut reps: Vec<Lattice> = Vec::new();
    for mask in 0u64..1 << off.len() {
        let mut rel = vec![vec![false; m]; m];
        for (bit, &(i, j)) in off.iter().enumerate() {
            rel[i][j] = mask >> bit & 1 == 1;
        }
        let antisymmetric = (0..m).all(|i| (0..m).all(|j| i == j || !(rel[i][j] && rel[j][i])));
        if !antisymmetric {
            continue;
        }
        let transitive = (0..m).all(|i| {
            (0..m).all(|j| !rel[i][j] || (0..m).all(|k| !rel[j][k] || i == k || rel[i][k]))
        });
        if !transitive {
            continue;
        }
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            leq[0][i] = true;
            leq[i][n - 1] = true;
            leq[i][i] = true;
        }
        for i in 0..m {
            for j in 0..m {
                if rel[i][j] {
                    leq[i + 1][j + 1] = true;
                }
            }
        }
        if !has_all_bounds(&leq) {
            continue;
        }
        let l = Lattice::from_order(&names, &leq).expect("checked lattice");
        if !reps.iter().any(|r| are_isomorphic(r, &l).unwrap()) {
            reps.push(l);
        }
    }
    let distributive = reps.iter().filter(|l| naive_is_distributive(l)).count();
    (reps.len(), distributive)
}

fn has_all_bounds(leq: &[Vec<bool>]) -> bool {
    let n = leq.len();
    for x in 0..n {
        for y in 0..n {
            let lower: Vec<usize> = (0..n).filter(|&z| leq[z][x] && leq[z][y]).collect();
            let upper: Vec<usize> = (0..n).filter(|&z| leq[x][z] && leq[y][z]).collect();
            let glb = lower.iter().any(|&g| lower.iter().all(|&z| leq[z][g]));
            let lub = upper.iter().any(|&u| upper.iter().all(|&z| leq[u][z]));
            if !glb || !lub {
                return false;
            }
        }
    }
    true
}

/// Distributivity from the order relation only: `x ∧ (y ∨ z) = (x∧y) ∨ (x∧z)`.
pub fn naive_is_distributive(l: &Lattice) -> bool {
    let n = l.size();
    let glb = |x: usize, y: usize| {
        (0..n)
            .filter(|&z| l.leq(z, x) && l.leq(z, y))
            .max_by_key(|&z| (0..n).filter(|&w| l.leq(w, z)).count())
            .unwrap()
    };
    let lub = |x: usize, y: usize| {
        (0..n)
            .filter(|&z| l.leq(x, z) && l.leq(y, z))
            .min_by_key(|&z| (0..n).filter(|&w| l.leq(w, z)).count())
            .unwrap()
    };
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| glb(x, lub(y, z)) == lub(glb(x, y), glb(x, z)))))
}

/// Distributivity by the forbidden-sublattice criterion: no five elements
/// form a sublattice isomorphic to M3 or N5.
pub fn has_no_m3_or_n5(l: &Lattice) -> bool {
    let n = l.size();
    if n < 5 {
        return true;
    }
    let meet = |x, y| l.meet(x, y).unwrap();
    let join = |x, y| l.join(x, y).unwrap();
    let elems: Vec<usize> = l.elements().collect();
    for lo in elems.iter().copied() {
        for hi in elems.iter().copied() {
            if lo == hi || !l.leq(lo, hi) {
                continue;
            }
            // Three middle elements x, y, z strictly between lo and hi.
            let mid: Vec<usize> = elems
                .iter()
                .copied()
                .filter(|&x| x != lo && x != hi && l.leq(lo, x) && l.leq(x, hi))
                .collect();
            for &x in &mid {
                for &y in &mid {
                    for &z in &mid {
                        if x == y || y == z || x == z {
                            continue;
                        }
                        // M3: pairwise meets lo, pairwise joins hi.
                        let m3 = x < y
                            && y < z
                            && [(x, y), (x, z), (y, z)]
                                .iter()
                                .all(|&(p, q)| meet(p, q) == lo && join(p, q) == hi);
                        // N5: x < y with z ∧ y = lo and z ∨ x = hi.
                        let n5 = l.leq(x, y) && meet(z, y) == lo && join(z, x) == hi;
                        if m3 || n5 {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// The seeded random-lattice parameters used by the soak runs: ground sets
/// of 1..=8 points and five densities, cycled by seed.
pub fn soak_params(seed: u64) -> (usize, f64) {
    const DENSITIES: [f64; 5] = [0.2, 0.35, 0.5, 0.65, 0.8];
    let points = 1 + (seed % 8) as usize;
    let density = DENSITIES[(seed / 8 % 5) as usize];
    (points, density)
}

/// Lattice axioms and table consistency, checked from `leq` and the public
/// meet/join accessors.
pub fn check_lattice_invariants(l: &Lattice) -> Result<(), String> {
    let n = l.size();
    let fail = |what: &str, detail: String| Err(format!("{what}: {detail}"));
    for a in 0..n {
        if !l.leq(a, a) {
            return fail("reflexive", format!("{a}"));
        }
        if !l.leq(l.bottom(), a) || !l.leq(a, l.top()) {
            return fail("bounds", format!("{a}"));
        }
        for b in 0..n {
            if a != b && l.leq(a, b) && l.leq(b, a) {
                return fail("antisymmetric", format!("{a} {b}"));
            }
            let m = l.meet(a, b).unwrap();
            let j = l.join(a, b).unwrap();
            let is_glb = l.leq(m, a)
                && l.leq(m, b)
                && (0..n).all(|z| !(l.leq(z, a) && l.leq(z, b)) || l.leq(z, m));
            let is_lub = l.leq(a, j)
                && l.leq(b, j)
                && (0..n).all(|z| !(l.leq(a, z) && l.leq(b, z)) || l.leq(j, z));
            if !is_glb || !is_lub {
                return fail("glb/lub tables", format!("{a} {b}"));
            }
            if m != l.meet(b, a).unwrap() || j != l.join(b, a).unwrap() {
                return fail("commutative", format!("{a} {b}"));
            }
            if l.meet(a, j).unwrap() != a || l.join(a, m).unwrap() != a {
                return fail("absorption", format!("{a} {b}"));
            }
            let consistent = l.leq(a, b) == (m == a) && l.leq(a, b) == (j == b);
            if !consistent {
                return fail("order/algebra consistency", format!("{a} {b}"));
            }
            let pa = l.principal_filter(a).unwrap();
            let pb = l.principal_filter(b).unwrap();
            let pj = l.principal_filter(j).unwrap();
            if &pa.members().intersection(pb.members()) != pj.members() {
                return fail("[a)∩[b) = [a∨b)", format!("{a} {b}"));
            }
            for c in 0..n {
                if a == b && a == c {
                    continue;
                }
                if l.leq(a, b) && l.leq(b, c) && !l.leq(a, c) {
                    return fail("transitive", format!("{a} {b} {c}"));
                }
                let m1 = l.meet(l.meet(a, b).unwrap(), c).unwrap();
                let m2 = l.meet(a, l.meet(b, c).unwrap()).unwrap();
                let j1 = l.join(l.join(a, b).unwrap(), c).unwrap();
                let j2 = l.join(a, l.join(b, c).unwrap()).unwrap();
                if m1 != m2 || j1 != j2 {
                    return fail("associative", format!("{a} {b} {c}"));
                }
            }
        }
        if l.meet(a, a).unwrap() != a || l.join(a, a).unwrap() != a {
            return fail("idempotent", format!("{a}"));
        }
    }
    Ok(())
}
