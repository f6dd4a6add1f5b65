//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use common::Set;
use latrep::filter::{
    all_filters, is_filter, is_separating, prime_filters, principal_filters, union_closure_witness,
};
use latrep::gen::{enumerate_lattices, random_lattice};
use latrep::repr::{
    build_representation, check_coincidence, join_star, join_star_bare, meet_star, meet_star_symmetric,
    prime_bare_join_gap, verify_isomorphism, verify_preservation, verify_prime_union, verify_symmetric_meets,
    CoincidenceMode, SetLatticeElement, SymmetricMeet,
};
use latrep::{fixtures, FilterFamily, Lattice};

type Outcome = Result<String, String>;

/// Sizes 1..=7 in enumeration order.
const MAX_SIZE: usize = 7;
const EXPECTED_COUNTS: [usize; MAX_SIZE] = [1, 1, 1, 2, 5, 15, 53];
const EXHAUSTIVE_BUDGET: Duration = Duration::from_secs(120);
const SOAK_SEEDS: u64 = 1000;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn describe(l: &Lattice) -> String {
    let covers: Vec<String> = l
        .covers()
        .iter()
        .map(|&(a, b)| format!("{}<{}", l.name(a), l.name(b)))
        .collect();
    format!("n={} [{}]", l.size(), covers.join(" "))
}

/// Enumerates sizes 1..=7 after checking each count against the labeled-order
/// oracle and the expected totals.
fn census_lattices() -> Result<Vec<Lattice>, String> {
    let mut out = Vec::new();
    for n in 1..=MAX_SIZE {
        let ls = enumerate_lattices(n).map_err(|e| e.to_string())?;
        let (oracle, _) = common::labeled_order_census(n);
        ensure(ls.len() == oracle && oracle == EXPECTED_COUNTS[n - 1], || {
            format!(
                "size {n}: enumerator {} oracle {oracle} expected {}",
                ls.len(),
                EXPECTED_COUNTS[n - 1]
            )
        })?;
        out.extend(ls);
    }
    Ok(out)
}

fn ac1_preservation(lattices: &[Lattice], started: Instant) -> Outcome {
    let mut pairs = 0;
    for l in lattices {
        for fam in [all_filters(l), principal_filters(l)] {
            let (meet, join) = verify_preservation(l, &fam).map_err(|e| e.to_string())?;
            for r in [&meet, &join] {
                ensure(r.holds, || format!("{:?} fails on {} with {}: {:?}", r.claim, describe(l), fam.kind(), r.counterexample))?;
                ensure(r.pairs_checked == l.size().pow(2), || "pair count".into())?;
                pairs += r.pairs_checked;
            }
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < EXHAUSTIVE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} classes (1,1,1,2,5,15,53 confirmed by oracle), {pairs} pair checks, {:.2?}",
        lattices.len(),
        elapsed
    ))
}

fn ac2_isomorphism(lattices: &[Lattice]) -> Outcome {
    for l in lattices {
        let fam = all_filters(l);
        let r = verify_isomorphism(l, &fam).map_err(|e| e.to_string())?;
        ensure(r.holds, || format!("{}: {:?}", describe(l), r.counterexample))?;
        ensure(build_representation(l, &fam).unwrap().carrier().len() == l.size(), || {
            "image size".into()
        })?;
    }
    Ok(format!("{} classes, zero failures", lattices.len()))
}

fn ac3_prime_union(lattices: &[Lattice]) -> Outcome {
    let mut checked = 0;
    for l in lattices.iter().filter(|l| l.is_distributive()) {
        let r = verify_prime_union(l).map_err(|e| e.to_string())?;
        ensure(r.holds, || format!("{}: {:?}", describe(l), r.counterexample))?;
        let primes = prime_filters(l);
        let rep = build_representation(l, &primes).unwrap();
        for a in l.elements() {
            for b in l.elements() {
                let (fa, fb) = (rep.image(a), rep.image(b));
                let union = fa.union(fb).unwrap();
                let clause = join_star_bare(&primes, fa, fb).unwrap();
                ensure(clause.is_subset(&union).unwrap(), || {
                    format!("Z-clause adds members at ({a},{b}) on {}", describe(l))
                })?;
                ensure(join_star(&primes, fa, fb).unwrap() == union, || "join_star != union".into())?;
            }
        }
        checked += 1;
    }
    Ok(format!("{checked} distributive classes, zero failures"))
}

fn ac4_stone_boundary(lattices: &[Lattice]) -> Outcome {
    let (mut nondistributive, mut separated) = (0, 0);
    let mut distributive_separated = 0;
    for l in lattices {
        let primes = prime_filters(l);
        let sep = is_separating(l, &primes).unwrap().holds();
        let injective = build_representation(l, &primes).unwrap().is_injective();
        ensure(sep == injective, || format!("separation/injectivity disagree on {}", describe(l)))?;
        if l.is_distributive() {
            distributive_separated += usize::from(sep);
        } else {
            nondistributive += 1;
            separated += usize::from(sep);
        }
    }
    ensure(separated == 0, || format!("{separated} nondistributive classes separated by primes"))?;
    ensure(prime_filters(&fixtures::m3()).is_empty(), || "M3 has prime filters".into())?;
    Ok(format!(
        "census: {nondistributive} nondistributive, {separated} separated by primes; M3 prime family empty; \
         {distributive_separated}/{} distributive separated",
        lattices.len() - nondistributive
    ))
}

fn ac5_gap() -> Outcome {
    let c2 = fixtures::chain2();
    let w = prime_bare_join_gap(&c2)
        .map_err(|e| e.to_string())?
        .ok_or("no witness on CHAIN2")?;
    ensure((w.a, w.b) == (c2.top(), c2.bottom()), || format!("witness pair {:?}", (w.a, w.b)))?;
    ensure(w.replay(&c2).unwrap(), || "witness does not replay".into())?;
    let primes = prime_filters(&c2);
    let rep = build_representation(&c2, &primes).unwrap();
    let target = rep.image(c2.join(w.a, w.b).unwrap());
    let bare = join_star_bare(&primes, rep.image(w.a), rep.image(w.b)).unwrap();
    ensure(target.members().contains(w.z) && !bare.members().contains(w.z), || "direct recheck".into())?;
    let z = c2.render_set(primes.filters()[w.z].members());
    Ok(format!("CHAIN2 witness a={} b={} Z={z}", c2.name(w.a), c2.name(w.b)))
}

fn ac6_coincidence_symmetry(lattices: &[Lattice]) -> Outcome {
    let mut reports = 0;
    for l in lattices {
        for fam in [all_filters(l), principal_filters(l)] {
            let c = check_coincidence(l, &fam, CoincidenceMode::Strict).map_err(|e| e.to_string())?;
            let (full, bare) = verify_symmetric_meets(l, &fam).map_err(|e| e.to_string())?;
            for r in [c, full, bare] {
                ensure(r.holds, || format!("{:?} on {} ({}): {:?}", r.claim, describe(l), fam.kind(), r.counterexample))?;
                reports += 1;
            }
        }
    }
    Ok(format!("{reports} reports over {} classes, all hold", lattices.len()))
}

fn ac7_union_closure(lattices: &[Lattice]) -> Outcome {
    let b2 = fixtures::b2();
    let all = all_filters(&b2);
    let w = union_closure_witness(&b2, &all).unwrap().ok_or("no witness on B2")?;
    ensure(!is_filter(&b2, &w.union), || "B2 union is a filter".into())?;
    let c3 = fixtures::chain3();
    ensure(union_closure_witness(&c3, &all_filters(&c3)).unwrap().is_none(), || "CHAIN3 witness".into())?;

    let mut witnesses = 0;
    for l in lattices {
        let fam = all_filters(l);
        if let Some(w) = union_closure_witness(l, &fam).unwrap() {
            let recomputed = fam.filters()[w.x].members().union(fam.filters()[w.y].members());
            ensure(recomputed == w.union && !is_filter(l, &recomputed), || {
                format!("witness does not replay on {}", describe(l))
            })?;
            witnesses += 1;
        }
    }
    Ok(format!(
        "B2 witness {} ∪ {}; CHAIN3 none; {witnesses} witnesses over {} classes all replay",
        b2.render_set(all.filters()[w.x].members()),
        b2.render_set(all.filters()[w.y].members()),
        lattices.len()
    ))
}

fn soak_fingerprint(l: &Lattice) -> (Vec<String>, Vec<(usize, usize)>) {
    (l.names().to_vec(), l.covers())
}

fn ac8_soak() -> Outcome {
    let mut fingerprints = Vec::new();
    let mut nondistributive = 0;
    let mut largest = 0;
    for seed in 0..SOAK_SEEDS {
        let (points, density) = common::soak_params(seed);
        let l = random_lattice(points, density, seed);
        let ctx = |what: &str| format!("seed {seed}: {what}");
        common::check_lattice_invariants(&l).map_err(|e| ctx(&e))?;
        let all = all_filters(&l);
        let principal = principal_filters(&l);
        ensure(all.member_sets() == principal.member_sets(), || ctx("all != principal"))?;
        if l.size() <= 16 {
            ensure(common::family_sets(&all) == common::subset_filters(&l), || ctx("all != subset oracle"))?;
        }
        for fam in [&all, &principal] {
            let (meet, join) = verify_preservation(&l, fam).map_err(|e| ctx(&e.to_string()))?;
            ensure(meet.holds && join.holds, || ctx("preservation"))?;
            let c = check_coincidence(&l, fam, CoincidenceMode::Strict).map_err(|e| ctx(&e.to_string()))?;
            ensure(c.holds, || ctx("coincidence"))?;
        }
        nondistributive += usize::from(!l.is_distributive());
        largest = largest.max(l.size());
        fingerprints.push(soak_fingerprint(&l));
    }
    let replay: Vec<_> = (0..SOAK_SEEDS)
        .map(|seed| {
            let (points, density) = common::soak_params(seed);
            soak_fingerprint(&random_lattice(points, density, seed))
        })
        .collect();
    ensure(replay == fingerprints, || "seed list does not reproduce".into())?;
    Ok(format!(
        "{SOAK_SEEDS} seeds, k<=8, {nondistributive} nondistributive, largest {largest} elements, deterministic"
    ))
}

fn as_set(s: &SetLatticeElement) -> Set {
    s.members().iter().collect()
}

fn ac9_oracle() -> Outcome {
    let mut pairs = 0;
    for (name, l) in fixtures::all().into_iter().filter(|(n, _)| *n != "CHAIN1") {
        let fams: Vec<FilterFamily> = vec![all_filters(&l), principal_filters(&l), prime_filters(&l)];
        for fam in &fams {
            let sets = common::family_sets(fam);
            let rep = build_representation(&l, fam).unwrap();
            for a in l.elements() {
                for b in l.elements() {
                    let (fa, fb) = (rep.image(a), rep.image(b));
                    let (sa, sb) = (as_set(fa), as_set(fb));
                    ensure(sa == common::naive_image(&sets, a), || format!("{name} f({a})"))?;
                    let checks = [
                        (as_set(&join_star(fam, fa, fb).unwrap()), common::naive_join_star(&sets, &sa, &sb), "∨*"),
                        (as_set(&join_star_bare(fam, fa, fb).unwrap()), common::naive_join_star_bare(&sets, &sa, &sb), "∨**"),
                        (
                            as_set(&meet_star_symmetric(fam, fa, fb, SymmetricMeet::Full).unwrap()),
                            common::naive_meet_full(&sets, &sa, &sb),
                            "∧* full",
                        ),
                        (
                            as_set(&meet_star_symmetric(fam, fa, fb, SymmetricMeet::Bare).unwrap()),
                            common::naive_meet_bare(&sets, &sa, &sb),
                            "∧* bare",
                        ),
                        (
                            as_set(&meet_star(fa, fb).unwrap()),
                            sa.intersection(&sb).copied().collect(),
                            "∧*",
                        ),
                    ];
                    for (fast, naive, op) in checks {
                        ensure(fast == naive, || format!("{name} {} {op} at ({a},{b})", fam.kind()))?;
                    }
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("CHAIN2, CHAIN3, B2, M3, N5 x all/principal/prime: {pairs} pairs, exact"))
}

fn main() {
    let started = Instant::now();
    let mut results: Vec<(&str, &str, Outcome)> = Vec::new();
    match census_lattices() {
        Ok(lattices) => {
            results.push(("AC1", "preservation identities, all 78 classes", ac1_preservation(&lattices, started)));
            results.push(("AC2", "isomorphism with the all family", ac2_isomorphism(&lattices)));
            results.push(("AC3", "prime-filter join is union", ac3_prime_union(&lattices)));
            results.push(("AC4", "primes fail to separate nondistributive", ac4_stone_boundary(&lattices)));
            results.push(("AC6", "coincidence and symmetric meets", ac6_coincidence_symmetry(&lattices)));
            results.push(("AC7", "union non-closure witnesses", ac7_union_closure(&lattices)));
        }
        Err(e) => {
            for (id, title) in [
                ("AC1", "preservation identities, all 78 classes"),
                ("AC2", "isomorphism with the all family"),
                ("AC3", "prime-filter join is union"),
                ("AC4", "primes fail to separate nondistributive"),
                ("AC6", "coincidence and symmetric meets"),
                ("AC7", "union non-closure witnesses"),
            ] {
                results.push((id, title, Err(format!("census: {e}"))));
            }
        }
    }
    results.push(("AC5", "∨** gap on CHAIN2", ac5_gap()));
    results.push(("AC8", "randomized soak", ac8_soak()));
    results.push(("AC9", "naive oracle equivalence", ac9_oracle()));
    results.sort_by_key(|(id, _, _)| *id);

    let mut failed = 0;
    for (id, title, outcome) in &results {
        match outcome {
            Ok(detail) => println!("[PASS] {id} {title}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id} {title}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.2?}",
        results.len() - failed,
        started.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
