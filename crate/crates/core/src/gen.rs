//! Supplies of test lattices: every lattice of a given size up to
//! isomorphism, and seeded random lattices from closure systems.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Element, Lattice};

/// Largest size [`enumerate_lattices`] accepts.
pub const MAX_ENUMERATION_SIZE: usize = 8;
/// Largest size for which [`are_isomorphic`] and [`certificate`] are exact.
pub const MAX_ISOMORPHISM_SIZE: usize = 10;
/// Largest ground set for [`random_lattice`].
pub const MAX_RANDOM_POINTS: usize = 16;

/// Per-element isomorphism invariant: (height, depth below top, down-set
/// size, up-set size).
type Invariant = (usize, usize, usize, usize);

fn invariants(l: &Lattice) -> Vec<Invariant> {
    let height = l.heights();
    let n = l.size();
    // Depth: longest chain up to the top, processed from the top down.
    let mut order: Vec<Element> = l.elements().collect();
    order.sort_by_key(|&a| l.up_set(a).len());
    let mut depth = vec![0; n];
    for &a in &order {
        depth[a] = l
            .up_set(a)
            .iter()
            .filter(|&b| b != a)
            .map(|b| depth[b] + 1)
            .max()
            .unwrap_or(0);
    }
    (0..n)
        .map(|a| (height[a], depth[a], l.down_set(a).len(), l.up_set(a).len()))
        .collect()
}

/// Canonical form of a lattice up to isomorphism: two lattices of size at
/// most [`MAX_ISOMORPHISM_SIZE`] are isomorphic iff their certificates are
/// equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Certificate {
    invariants: Vec<Invariant>,
    code: u128,
}

/// Computes the certificate together with the element order achieving it.
fn canonical_order(l: &Lattice) -> Result<(Certificate, Vec<Element>)> {
    let n = l.size();
    if n > MAX_ISOMORPHISM_SIZE {
        return Err(Error::SizeTooLarge {
            size: n,
            max: MAX_ISOMORPHISM_SIZE,
        });
    }
    let inv = invariants(l);
    let mut order: Vec<Element> = l.elements().collect();
    order.sort_by_key(|&a| (inv[a], a));
    // Cells of equal invariant; only permutations inside a cell are tried.
    let mut cells: Vec<std::ops::Range<usize>> = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || inv[order[i]] != inv[order[start]] {
            cells.push(start..i);
            start = i;
        }
    }

    let code_of = |perm: &[Element]| -> u128 {
        let mut code = 0u128;
        for &x in perm {
            for &y in perm {
                code = code << 1 | u128::from(l.leq(x, y));
            }
        }
        code
    };

    let mut best: Option<(u128, Vec<Element>)> = None;
    let mut current = order.clone();
    permute_cells(&cells, 0, &mut current, &mut |perm| {
        let code = code_of(perm);
        if best.as_ref().is_none_or(|(c, _)| code < *c) {
            best = Some((code, perm.to_vec()));
        }
    });
    let (code, perm) = best.expect("at least one ordering");
    let mut sorted_inv = inv;
    sorted_inv.sort();
    Ok((
        Certificate {
            invariants: sorted_inv,
            code,
        },
        perm,
    ))
}

/// Visits every arrangement obtained by permuting each cell independently.
fn permute_cells(
    cells: &[std::ops::Range<usize>],
    cell: usize,
    current: &mut Vec<Element>,
    visit: &mut impl FnMut(&[Element]),
) {
    let Some(range) = cells.get(cell) else {
        visit(current);
        return;
    };
    heap_permute(range.start, range.end, range.end - range.start, cells, cell, current, visit);
}

#[allow(clippy::too_many_arguments)]
fn heap_permute(
    start: usize,
    end: usize,
    k: usize,
    cells: &[std::ops::Range<usize>],
    cell: usize,
    current: &mut Vec<Element>,
    visit: &mut impl FnMut(&[Element]),
) {
    if k <= 1 {
        permute_cells(cells, cell + 1, current, visit);
        return;
    }
    for i in 0..k {
        heap_permute(start, end, k - 1, cells, cell, current, visit);
        let swap_with = if k % 2 == 0 { start + i } else { start };
        if i + 1 < k {
            current.swap(swap_with, start + k - 1);
        }
    }
}

pub fn certificate(l: &Lattice) -> Result<Certificate> {
    canonical_order(l).map(|(c, _)| c)
}

/// Whether an order-preserving and order-reflecting bijection exists.
/// Backtracking over elements with matching invariants.
pub fn are_isomorphic(l1: &Lattice, l2: &Lattice) -> Result<bool> {
    if l1.size() != l2.size() {
        return Ok(false);
    }
    let n = l1.size();
    if n > MAX_ISOMORPHISM_SIZE {
        return Err(Error::SizeTooLarge {
            size: n,
            max: MAX_ISOMORPHISM_SIZE,
        });
    }
    let (inv1, inv2) = (invariants(l1), invariants(l2));
    let (mut s1, mut s2) = (inv1.clone(), inv2.clone());
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return Ok(false);
    }
    let order = l1.linear_extension();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(extend_map(l1, l2, &inv1, &inv2, &order, 0, &mut image, &mut used))
}

#[allow(clippy::too_many_arguments)]
fn extend_map(
    l1: &Lattice,
    l2: &Lattice,
    inv1: &[Invariant],
    inv2: &[Invariant],
    order: &[Element],
    depth: usize,
    image: &mut [Element],
    used: &mut [bool],
) -> bool {
    let Some(&x) = order.get(depth) else {
        return true;
    };
    for y in l2.elements() {
        if used[y] || inv1[x] != inv2[y] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&u| {
            let v = image[u];
            l1.leq(u, x) == l2.leq(v, y) && l1.leq(x, u) == l2.leq(y, v)
        });
        if !consistent {
            continue;
        }
        image[x] = y;
        used[y] = true;
        if extend_map(l1, l2, inv1, inv2, order, depth + 1, image, used) {
            return true;
        }
        used[y] = false;
        image[x] = usize::MAX;
    }
    false
}

/// Display names for an enumerated lattice: `0` at the bottom, `1` at the
/// top, letters in between.
fn standard_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| match i {
            0 => "0".to_owned(),
            _ if i == n - 1 => "1".to_owned(),
            _ => char::from(b'a' + (i - 1) as u8).to_string(),
        })
        .collect()
}

/// Relabels `l` into its canonical element order with standard names.
pub fn canonical_form(l: &Lattice) -> Result<Lattice> {
    let (_, perm) = canonical_order(l)?;
    let n = l.size();
    let leq: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| l.leq(perm[i], perm[j])).collect())
        .collect();
    Lattice::from_order(&standard_names(n), &leq)
}

/// One representative per isomorphism class of `n`-element lattices, sorted
/// by [`Certificate`].
///
/// Candidates are bounded posets whose middle elements are added one at a
/// time above a down-closed set of earlier ones. A pair whose meet cannot
/// exist is pruned as soon as both elements are present; every survivor is a
/// lattice because a finite bounded poset with all meets has all joins.
pub fn enumerate_lattices(n: usize) -> Result<Vec<Lattice>> {
    if n == 0 {
        return Err(Error::EmptyLattice);
    }
    if n > MAX_ENUMERATION_SIZE {
        return Err(Error::SizeTooLarge {
            size: n,
            max: MAX_ENUMERATION_SIZE,
        });
    }
    if n <= 2 {
        let leq: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        return Ok(vec![Lattice::from_order(&standard_names(n), &leq)?]);
    }
    let middle = n - 2;
    let mut classes: BTreeMap<Certificate, Lattice> = BTreeMap::new();
    let mut downs: Vec<u32> = Vec::with_capacity(middle);
    grow_posets(middle, &mut downs, &mut |downs| {
        let l = bounded_lattice(downs);
        let (cert, _) = canonical_order(&l).expect("within isomorphism bound");
        if !classes.contains_key(&cert) {
            let canon = canonical_form(&l).expect("canonical relabel");
            classes.insert(cert, canon);
        }
    });
    Ok(classes.into_values().collect())
}

/// `downs[i]` is the strict down-set of middle element `i`, as a bitmask
/// over earlier middle elements.
fn grow_posets(middle: usize, downs: &mut Vec<u32>, emit: &mut impl FnMut(&[u32])) {
    let i = downs.len();
    if i == middle {
        emit(downs);
        return;
    }
    for mask in 0u32..1 << i {
        let down_closed = (0..i).all(|j| mask >> j & 1 == 0 || downs[j] & !mask == 0);
        if !down_closed {
            continue;
        }
        let closed_i = mask | 1 << i;
        let meets_exist = (0..i).all(|j| {
            let closed_j = downs[j] | 1 << j;
            let common = closed_i & closed_j;
            common == 0 || (0..=i).any(|g| common >> g & 1 == 1 && common & !closed(downs, mask, i, g) == 0)
        });
        if meets_exist {
            downs.push(mask);
            grow_posets(middle, downs, emit);
            downs.pop();
        }
    }
}

fn closed(downs: &[u32], new_mask: u32, new: usize, g: usize) -> u32 {
    if g == new {
        new_mask | 1 << new
    } else {
        downs[g] | 1 << g
    }
}

/// Adds a bottom (index 0) and top (index n-1) around the middle poset.
fn bounded_lattice(downs: &[u32]) -> Lattice {
    let m = downs.len();
    let n = m + 2;
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        leq[0][i] = true;
        leq[i][n - 1] = true;
        leq[i][i] = true;
    }
    for (i, &d) in downs.iter().enumerate() {
        for j in 0..m {
            if d >> j & 1 == 1 {
                leq[j + 1][i + 1] = true;
            }
        }
    }
    Lattice::from_order(&standard_names(n), &leq).expect("bounded meet-closed poset is a lattice")
}

/// Counts of lattices up to isomorphism per size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationCensus {
    pub sizes: Vec<SizeCount>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeCount {
    pub size: usize,
    pub lattices: usize,
    pub distributive: usize,
}

impl EnumerationCensus {
    pub fn collect(max_size: usize) -> Result<Self> {
        let sizes = (1..=max_size)
            .map(|n| {
                let ls = enumerate_lattices(n)?;
                Ok(SizeCount {
                    size: n,
                    lattices: ls.len(),
                    distributive: ls.iter().filter(|l| l.is_distributive()).count(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(EnumerationCensus { sizes })
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().map(|s| s.lattices).sum()
    }
}

/// A random lattice from a closure system on `points` points.
///
/// `points` random subsets are drawn (each point kept with probability
/// `density`), closed under pairwise intersection, and the full set is
/// added. Ordered by inclusion this is a lattice. Elements are named by
/// their point sets, e.g. `{0,2}`. Deterministic in `seed`.
pub fn random_lattice(points: usize, density: f64, seed: u64) -> Lattice {
    assert!(
        (1..=MAX_RANDOM_POINTS).contains(&points),
        "points must be in 1..={MAX_RANDOM_POINTS}"
    );
    assert!(density > 0.0 && density < 1.0, "density must be in (0, 1)");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full: u32 = (1 << points) - 1;
    let mut family: Vec<u32> = vec![full];
    for _ in 0..points {
        let mut s = 0u32;
        for p in 0..points {
            if rng.random_bool(density) {
                s |= 1 << p;
            }
        }
        family.push(s);
    }
    close_under_intersection(&mut family);
    family.sort_by_key(|&s| (s.count_ones(), s));

    let names: Vec<String> = family.iter().map(|&s| point_set_name(s, points)).collect();
    let mut covers = Vec::new();
    for (i, &x) in family.iter().enumerate() {
        for (j, &y) in family.iter().enumerate() {
            if i == j || x & !y != 0 {
                continue;
            }
            let between = family
                .iter()
                .any(|&z| z != x && z != y && x & !z == 0 && z & !y == 0);
            if !between {
                covers.push((names[i].as_str(), names[j].as_str()));
            }
        }
    }
    Lattice::new(&names, &covers).expect("closure systems are lattices")
}

fn close_under_intersection(family: &mut Vec<u32>) {
    family.sort_unstable();
    family.dedup();
    loop {
        let mut fresh = Vec::new();
        for (i, &x) in family.iter().enumerate() {
            for &y in &family[i + 1..] {
                let z = x & y;
                if family.binary_search(&z).is_err() {
                    fresh.push(z);
                }
            }
        }
        if fresh.is_empty() {
            return;
        }
        family.extend(fresh);
        family.sort_unstable();
        family.dedup();
    }
}

fn point_set_name(s: u32, points: usize) -> String {
    let parts: Vec<String> = (0..points).filter(|p| s >> p & 1 == 1).map(|p| p.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}
