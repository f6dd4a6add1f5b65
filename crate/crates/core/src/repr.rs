//! The set-of-sets representation of a lattice over a filter family.
//!
//! Each element `a` is sent to `f(a)`, the set of family members containing
//! it. Meets become intersections. Joins become `∨*`:
//!
//! ```text
//! A ∨* B = A ∪ B ∪ { Z ∈ F : ∃X ∈ A, ∃Y ∈ B, X ∩ Y ⊆ Z }
//! ```
//!
//! and `∨**` ([`join_star_bare`]) is the same set without the `A ∪ B` term.
//! In every formula `Z` ranges over the whole family.
//!
//! The verifiers check the identities over all ordered element pairs and
//! return a [`VerificationReport`] whose counterexample, if any, can be
//! replayed from the lattice and family alone.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::bitset::{ElementSet, IndexSet};
use crate::error::{Error, Result};
use crate::filter::{is_separating, prime_filters, FamilyId, FamilyKind, FilterFamily, Separation};
use crate::lattice::{Element, Lattice};

/// A set of members of one filter family, e.g. `f(a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetLatticeElement {
    family: FamilyId,
    members: IndexSet,
}

impl SetLatticeElement {
    /// Builds an element from family indices.
    pub fn new<I: IntoIterator<Item = usize>>(family: &FilterFamily, indices: I) -> Result<Self> {
        let mut members = IndexSet::empty(family.len());
        for i in indices {
            if i >= family.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    size: family.len(),
                });
            }
            members.insert(i);
        }
        Ok(SetLatticeElement {
            family: family.id(),
            members,
        })
    }

    pub fn members(&self) -> &IndexSet {
        &self.members
    }

    pub fn family(&self) -> FamilyId {
        self.family
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.members.to_vec()
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        same_family(self, other)?;
        Ok(self.with(self.members.union(&other.members)))
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        same_family(self, other)?;
        Ok(self.members.is_subset(&other.members))
    }

    fn with(&self, members: IndexSet) -> Self {
        SetLatticeElement {
            family: self.family,
            members,
        }
    }
}

fn same_family(a: &SetLatticeElement, b: &SetLatticeElement) -> Result<()> {
    if a.family == b.family {
        Ok(())
    } else {
        Err(Error::FamilyMismatch)
    }
}

fn in_family(family: &FilterFamily, a: &SetLatticeElement, b: &SetLatticeElement) -> Result<()> {
    if a.family == family.id() && b.family == family.id() {
        Ok(())
    } else {
        Err(Error::FamilyMismatch)
    }
}

/// `f(a) = { X ∈ F : a ∈ X }`.
pub fn point_map(lattice: &Lattice, family: &FilterFamily, a: Element) -> Result<SetLatticeElement> {
    family.ensure_over(lattice)?;
    lattice.check(a)?;
    Ok(image_of(family, a))
}

fn image_of(family: &FilterFamily, a: Element) -> SetLatticeElement {
    let members = IndexSet::from_indices(
        family.len(),
        family
            .filters()
            .iter()
            .enumerate()
            .filter(|(_, x)| x.contains(a))
            .map(|(i, _)| i),
    );
    SetLatticeElement {
        family: family.id(),
        members,
    }
}

/// `A ∧* B = A ∩ B`.
pub fn meet_star(a: &SetLatticeElement, b: &SetLatticeElement) -> Result<SetLatticeElement> {
    same_family(a, b)?;
    Ok(a.with(a.members.intersection(&b.members)))
}

/// `A ∨* B`.
pub fn join_star(family: &FilterFamily, a: &SetLatticeElement, b: &SetLatticeElement) -> Result<SetLatticeElement> {
    in_family(family, a, b)?;
    let mut out = intersection_clause(family, a, b);
    out.union_with(&a.members);
    out.union_with(&b.members);
    Ok(a.with(out))
}

/// `A ∨** B = { Z ∈ F : ∃X ∈ A, ∃Y ∈ B, X ∩ Y ⊆ Z }`.
pub fn join_star_bare(family: &FilterFamily, a: &SetLatticeElement, b: &SetLatticeElement) -> Result<SetLatticeElement> {
    in_family(family, a, b)?;
    Ok(a.with(intersection_clause(family, a, b)))
}

/// Which of the two union-based meet formulas to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetricMeet {
    /// `A ∩ B ∩ { Z : ∃X ∈ A, ∃Y ∈ B, X ∪ Y ⊆ Z }`
    Full,
    /// `{ Z : ∃X ∈ A, ∃Y ∈ B, X ∪ Y ⊆ Z }`
    Bare,
}

pub fn meet_star_symmetric(
    family: &FilterFamily,
    a: &SetLatticeElement,
    b: &SetLatticeElement,
    variant: SymmetricMeet,
) -> Result<SetLatticeElement> {
    in_family(family, a, b)?;
    let mut out = covering_members(family, a, b, |x, y| x.union(y));
    if variant == SymmetricMeet::Full {
        out.intersect_with(&a.members);
        out.intersect_with(&b.members);
    }
    Ok(a.with(out))
}

/// `{ Z : ∃X ∈ A, ∃Y ∈ B, X ∩ Y ⊆ Z }`.
///
/// When `X ∩ Y` is itself a member (always the case for all/principal
/// families, which are closed under intersection) the qualifying `Z` are
/// read off the precomputed inclusion table; otherwise the family is scanned.
fn intersection_clause(family: &FilterFamily, a: &SetLatticeElement, b: &SetLatticeElement) -> IndexSet {
    covering_members(family, a, b, |x, y| x.intersection(y))
}

fn covering_members(
    family: &FilterFamily,
    a: &SetLatticeElement,
    b: &SetLatticeElement,
    combine: impl Fn(&ElementSet, &ElementSet) -> ElementSet,
) -> IndexSet {
    let filters = family.filters();
    let mut out = IndexSet::empty(family.len());
    let mut seen = HashSet::new();
    for x in a.members.iter() {
        for y in b.members.iter() {
            let s = combine(filters[x].members(), filters[y].members());
            if !seen.insert(s.clone()) {
                continue;
            }
            match family.position(&s) {
                Some(p) => out.union_with(family.above(p)),
                None => {
                    for (z, fz) in filters.iter().enumerate() {
                        if s.is_subset(fz.members()) {
                            out.insert(z);
                        }
                    }
                }
            }
            if out.is_full() {
                return out;
            }
        }
    }
    out
}

/// `L*`: the image of the point map over one family.
#[derive(Debug, Clone)]
pub struct Representation<'a> {
    lattice: &'a Lattice,
    family: &'a FilterFamily,
    image: Vec<SetLatticeElement>,
}

pub fn build_representation<'a>(lattice: &'a Lattice, family: &'a FilterFamily) -> Result<Representation<'a>> {
    family.ensure_over(lattice)?;
    let image = lattice.elements().map(|a| image_of(family, a)).collect();
    Ok(Representation { lattice, family, image })
}

impl<'a> Representation<'a> {
    pub fn lattice(&self) -> &'a Lattice {
        self.lattice
    }

    pub fn family(&self) -> &'a FilterFamily {
        self.family
    }

    /// `f(a)`. Panics on an out-of-range element.
    pub fn image(&self, a: Element) -> &SetLatticeElement {
        &self.image[a]
    }

    pub fn images(&self) -> &[SetLatticeElement] {
        &self.image
    }

    /// `D*`, deduplicated, in element order of first occurrence.
    pub fn carrier(&self) -> Vec<&SetLatticeElement> {
        let mut seen = HashSet::new();
        self.image.iter().filter(|s| seen.insert(*s)).collect()
    }

    /// First pair `a < b` (by index) with `f(a) = f(b)`.
    pub fn collision(&self) -> Option<(Element, Element)> {
        for a in self.lattice.elements() {
            for b in self.lattice.elements().filter(|&b| b > a) {
                if self.image[a] == self.image[b] {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_injective(&self) -> bool {
        self.collision().is_none()
    }

    /// Checks `left(a, b) == right(a, b)` over all ordered pairs in index
    /// order; the first failing pair becomes the counterexample.
    fn check_pairs(
        &self,
        claim: Claim,
        mut sides: impl FnMut(Element, Element) -> Result<(SetLatticeElement, SetLatticeElement)>,
    ) -> Result<VerificationReport> {
        let mut pairs = 0;
        for a in self.lattice.elements() {
            for b in self.lattice.elements() {
                pairs += 1;
                let (left, right) = sides(a, b)?;
                if left != right {
                    return Ok(VerificationReport::failed(
                        claim,
                        self.family.kind(),
                        pairs,
                        self.counterexample(claim, a, b, &left, &right),
                    ));
                }
            }
        }
        Ok(VerificationReport::passed(claim, self.family.kind(), pairs))
    }

    fn counterexample(
        &self,
        claim: Claim,
        a: Element,
        b: Element,
        left: &SetLatticeElement,
        right: &SetLatticeElement,
    ) -> Counterexample {
        Counterexample {
            claim,
            a,
            b,
            a_name: self.lattice.name(a).to_owned(),
            b_name: self.lattice.name(b).to_owned(),
            left: left.to_vec(),
            right: right.to_vec(),
        }
    }

    fn meet_sides(&self, a: Element, b: Element) -> Result<(SetLatticeElement, SetLatticeElement)> {
        Ok((
            meet_star(&self.image[a], &self.image[b])?,
            self.image[self.lattice.meet_of(a, b)].clone(),
        ))
    }

    fn join_sides(&self, a: Element, b: Element) -> Result<(SetLatticeElement, SetLatticeElement)> {
        Ok((
            join_star(self.family, &self.image[a], &self.image[b])?,
            self.image[self.lattice.join_of(a, b)].clone(),
        ))
    }
}

/// The identity a report is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    /// `f(a) ∧* f(b) = f(a ∧ b)`
    MeetPreserved,
    /// `f(a) ∨* f(b) = f(a ∨ b)`
    JoinPreserved,
    /// `a ≠ b ⇒ f(a) ≠ f(b)`
    Injective,
    /// Injective and both preservation identities.
    Isomorphism,
    /// Over prime filters of a distributive lattice, `f(a) ∨* f(b) = f(a) ∪ f(b)`.
    PrimeUnion,
    /// `f(a) ∨* f(b) = f(a) ∨** f(b)`
    Coincidence,
    /// Full union-based meet equals `f(a) ∩ f(b)`.
    SymmetricMeetFull,
    /// Bare union-based meet equals `f(a) ∩ f(b)`.
    SymmetricMeetBare,
}

impl Claim {
    pub fn label(&self) -> &'static str {
        match self {
            Claim::MeetPreserved => "meet_preserved",
            Claim::JoinPreserved => "join_preserved",
            Claim::Injective => "injective",
            Claim::Isomorphism => "isomorphism",
            Claim::PrimeUnion => "prime_union",
            Claim::Coincidence => "coincidence",
            Claim::SymmetricMeetFull => "symmetric_meet_full",
            Claim::SymmetricMeetBare => "symmetric_meet_bare",
        }
    }
}

/// A pair at which a claim fails, with both sides as family indices.
///
/// For [`Claim::Injective`] the sides are `f(a)` and `f(b)` for distinct
/// `a`, `b`, and the failure is that they are equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub claim: Claim,
    pub a: Element,
    pub b: Element,
    pub a_name: String,
    pub b_name: String,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Counterexample {
    /// Recomputes both sides from scratch and reports whether they still
    /// match the recorded sets and still violate the claim.
    pub fn replay(&self, lattice: &Lattice, family: &FilterFamily) -> Result<bool> {
        let rep = build_representation(lattice, family)?;
        lattice.check(self.a)?;
        lattice.check(self.b)?;
        let (fa, fb) = (rep.image(self.a), rep.image(self.b));
        let (left, right) = match self.claim {
            Claim::MeetPreserved => rep.meet_sides(self.a, self.b)?,
            Claim::JoinPreserved => rep.join_sides(self.a, self.b)?,
            Claim::Injective => {
                return Ok(self.a != self.b && fa == fb && fa.to_vec() == self.left && fb.to_vec() == self.right)
            }
            Claim::PrimeUnion => (join_star(family, fa, fb)?, fa.union(fb)?),
            Claim::Coincidence => (join_star(family, fa, fb)?, join_star_bare(family, fa, fb)?),
            Claim::SymmetricMeetFull => (
                meet_star_symmetric(family, fa, fb, SymmetricMeet::Full)?,
                meet_star(fa, fb)?,
            ),
            Claim::SymmetricMeetBare => (
                meet_star_symmetric(family, fa, fb, SymmetricMeet::Bare)?,
                meet_star(fa, fb)?,
            ),
            Claim::Isomorphism => return Ok(false),
        };
        Ok(left != right && left.to_vec() == self.left && right.to_vec() == self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub claim: Claim,
    pub family: FamilyKind,
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
    pub pairs_checked: usize,
}

impl VerificationReport {
    fn passed(claim: Claim, family: FamilyKind, pairs_checked: usize) -> Self {
        VerificationReport {
            claim,
            family,
            holds: true,
            counterexample: None,
            pairs_checked,
        }
    }

    fn failed(claim: Claim, family: FamilyKind, pairs_checked: usize, cx: Counterexample) -> Self {
        VerificationReport {
            claim,
            family,
            holds: false,
            counterexample: Some(cx),
            pairs_checked,
        }
    }
}

/// Checks `f(a) ∧* f(b) = f(a ∧ b)` and `f(a) ∨* f(b) = f(a ∨ b)` over all
/// ordered pairs.
///
/// For all/principal families both must hold. For custom and prime families
/// the outcome is measured, not assumed.
pub fn verify_preservation(
    lattice: &Lattice,
    family: &FilterFamily,
) -> Result<(VerificationReport, VerificationReport)> {
    let rep = build_representation(lattice, family)?;
    let meet = rep.check_pairs(Claim::MeetPreserved, |a, b| rep.meet_sides(a, b))?;
    let join = rep.check_pairs(Claim::JoinPreserved, |a, b| rep.join_sides(a, b))?;
    Ok((meet, join))
}

/// Checks that `f` is a lattice isomorphism onto its image: injective, and
/// both preservation identities hold.
///
/// Injectivity is cross-checked against [`is_separating`]; disagreement
/// panics.
pub fn verify_isomorphism(lattice: &Lattice, family: &FilterFamily) -> Result<VerificationReport> {
    let rep = build_representation(lattice, family)?;
    let collision = rep.collision();
    let separation = is_separating(lattice, family)?;
    assert_eq!(
        collision.is_none(),
        separation.holds(),
        "point map injectivity disagrees with family separation"
    );
    if let Some((a, b)) = collision {
        debug_assert_eq!(separation, Separation::Unseparated { a, b });
        let cx = rep.counterexample(Claim::Injective, a, b, rep.image(a), rep.image(b));
        return Ok(VerificationReport::failed(Claim::Isomorphism, family.kind(), 0, cx));
    }
    let (meet, join) = verify_preservation(lattice, family)?;
    let pairs = meet.pairs_checked + join.pairs_checked;
    for r in [meet, join] {
        if let Some(cx) = r.counterexample {
            return Ok(VerificationReport::failed(Claim::Isomorphism, family.kind(), pairs, cx));
        }
    }
    Ok(VerificationReport::passed(Claim::Isomorphism, family.kind(), lattice.size().pow(2)))
}

/// Over the prime filters of a distributive lattice, checks
/// `f(a) ∨* f(b) = f(a) ∪ f(b)` for all pairs. Counterexample indices refer
/// to `prime_filters(lattice)`.
pub fn verify_prime_union(lattice: &Lattice) -> Result<VerificationReport> {
    if !lattice.is_distributive() {
        return Err(Error::NotDistributive);
    }
    let primes = prime_filters(lattice);
    let rep = build_representation(lattice, &primes)?;
    rep.check_pairs(Claim::PrimeUnion, |a, b| {
        let (fa, fb) = (rep.image(a), rep.image(b));
        Ok((join_star(&primes, fa, fb)?, fa.union(fb)?))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoincidenceMode {
    /// Only all/principal families are accepted.
    Strict,
    /// Any family; the report is informative.
    Forced,
}

/// Checks `f(a) ∨* f(b) = f(a) ∨** f(b)` for all pairs.
pub fn check_coincidence(
    lattice: &Lattice,
    family: &FilterFamily,
    mode: CoincidenceMode,
) -> Result<VerificationReport> {
    if mode == CoincidenceMode::Strict && !matches!(family.kind(), FamilyKind::All | FamilyKind::Principal) {
        return Err(Error::KindUnsupported(family.kind()));
    }
    let rep = build_representation(lattice, family)?;
    rep.check_pairs(Claim::Coincidence, |a, b| {
        let (fa, fb) = (rep.image(a), rep.image(b));
        Ok((join_star(family, fa, fb)?, join_star_bare(family, fa, fb)?))
    })
}

/// Checks both union-based meet formulas against `f(a) ∩ f(b)`.
pub fn verify_symmetric_meets(
    lattice: &Lattice,
    family: &FilterFamily,
) -> Result<(VerificationReport, VerificationReport)> {
    let rep = build_representation(lattice, family)?;
    let check = |claim, variant| {
        rep.check_pairs(claim, |a, b| {
            let (fa, fb) = (rep.image(a), rep.image(b));
            Ok((meet_star_symmetric(family, fa, fb, variant)?, meet_star(fa, fb)?))
        })
    };
    Ok((
        check(Claim::SymmetricMeetFull, SymmetricMeet::Full)?,
        check(Claim::SymmetricMeetBare, SymmetricMeet::Bare)?,
    ))
}

/// A prime filter `Z` containing `a ∨ b` that `f(a) ∨** f(b)` misses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapWitness {
    pub a: Element,
    pub b: Element,
    /// Index of `Z` in `prime_filters(lattice)`.
    pub z: usize,
    pub z_members: Vec<Element>,
}

impl GapWitness {
    pub fn replay(&self, lattice: &Lattice) -> Result<bool> {
        let primes = prime_filters(lattice);
        let rep = build_representation(lattice, &primes)?;
        lattice.check(self.a)?;
        lattice.check(self.b)?;
        let Some(z) = primes.get(self.z) else {
            return Ok(false);
        };
        let bare = join_star_bare(&primes, rep.image(self.a), rep.image(self.b))?;
        let target = rep.image(lattice.join_of(self.a, self.b));
        Ok(z.members().to_vec() == self.z_members && target.members().contains(self.z) && !bare.members().contains(self.z))
    }
}

/// Looks for `Z ∈ f(a ∨ b)` with `Z ∉ f(a) ∨** f(b)` over the prime filters
/// of a distributive lattice.
///
/// `a` is scanned from the top of the lattice down and `b` from the bottom
/// up (both along [`Lattice::linear_extension`]), so the first witness found
/// pairs a high `a` with a low `b`; `Z` is scanned in family order.
pub fn prime_bare_join_gap(lattice: &Lattice) -> Result<Option<GapWitness>> {
    if !lattice.is_distributive() {
        return Err(Error::NotDistributive);
    }
    let primes = prime_filters(lattice);
    let rep = build_representation(lattice, &primes)?;
    let upward = lattice.linear_extension();
    for &a in upward.iter().rev() {
        for &b in &upward {
            let bare = join_star_bare(&primes, rep.image(a), rep.image(b))?;
            let target = rep.image(lattice.join_of(a, b));
            if let Some(z) = target.members().difference(bare.members()).first() {
                return Ok(Some(GapWitness {
                    a,
                    b,
                    z,
                    z_members: primes.filters()[z].members().to_vec(),
                }));
            }
        }
    }
    Ok(None)
}
