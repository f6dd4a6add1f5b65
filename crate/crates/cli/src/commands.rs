use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::Path;

use latrep::filter::{
    all_filters, is_separating, prime_filters, principal_filters, union_closure_witness,
};
use latrep::gen::{enumerate_lattices, MAX_ENUMERATION_SIZE};
use latrep::repr::{
    build_representation, check_coincidence, prime_bare_join_gap, verify_isomorphism, verify_preservation,
    verify_prime_union, verify_symmetric_meets, CoincidenceMode, Counterexample,
};
use latrep::{Claim, Error, FilterFamily, Lattice, VerificationReport};
use serde::Serialize;
use serde_json::json;

use crate::document::{parse_family_sets, read_text, LatticeDocument};
use crate::{ClaimArg, Cli, CliError, Command, CounterexampleKind, FamilySpec, EXIT_CLAIM_FAILED, EXIT_INPUT, EXIT_OK};

/// Runs one command, writing the report to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = match cli.command {
        Command::Validate { path, json } => validate(&path, json, out),
        Command::Represent { path, family, json } => represent(&path, &family, json, out),
        Command::Verify {
            path,
            family,
            claims,
            force,
            json,
        } => verify(&path, &family, &claims, force, json, out),
        Command::Counterexample {
            path,
            kind,
            family,
            json,
        } => counterexample(&path, kind, &family, json, out),
        Command::Census { max_size, out: dest } => census(max_size, dest.as_deref(), out),
        Command::ExportDot { path, out: dest } => export_dot(&path, dest.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Input(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

enum Failure {
    Input(CliError),
    Io(io::Error),
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        Failure::Input(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(CliError::Lattice(e))
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<u8, Failure>;

fn load_lattice(path: &Path) -> Result<Lattice, Failure> {
    Ok(LatticeDocument::read(path)?.to_lattice()?)
}

enum Loaded {
    Family(FilterFamily),
    /// A custom family entry that is not a filter.
    Rejected(String),
}

fn load_family(lattice: &Lattice, spec: &FamilySpec) -> Result<Loaded, Failure> {
    Ok(Loaded::Family(match spec {
        FamilySpec::All => all_filters(lattice),
        FamilySpec::Principal => principal_filters(lattice),
        FamilySpec::Prime => prime_filters(lattice),
        FamilySpec::Custom(path) => {
            let lists = parse_family_sets(&read_text(path)?)?;
            let sets = lists
                .iter()
                .map(|names| lattice.element_set_by_name(names))
                .collect::<Result<Vec<_>, _>>()?;
            match FilterFamily::custom(lattice, sets) {
                Ok(f) => f,
                Err(Error::NotAFilter(why)) => return Ok(Loaded::Rejected(format!("not a filter: {why}"))),
                Err(e) => return Err(e.into()),
            }
        }
    }))
}

fn filter_names(lattice: &Lattice, family: &FilterFamily, i: usize) -> Vec<String> {
    family.filters()[i]
        .members()
        .iter()
        .map(|e| lattice.name(e).to_owned())
        .collect()
}

fn render_filter(lattice: &Lattice, family: &FilterFamily, i: usize) -> String {
    lattice.render_set(family.filters()[i].members())
}

/// A set of family members, e.g. `[1: {a, 1}, 4: {0, a, b, c, 1}]`, or `∅`.
fn render_members(lattice: &Lattice, family: &FilterFamily, indices: &[usize]) -> String {
    if indices.is_empty() {
        return "∅".to_owned();
    }
    let parts: Vec<String> = indices
        .iter()
        .map(|&i| format!("{i}: {}", render_filter(lattice, family, i)))
        .collect();
    format!("[{}]", parts.join(", "))
}

fn count_filters(n: usize) -> String {
    if n == 1 {
        "1 filter".to_owned()
    } else {
        format!("{n} filters")
    }
}

fn render_indices(indices: &[usize]) -> String {
    if indices.is_empty() {
        return "∅".to_owned();
    }
    let parts: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn validate(path: &Path, json: bool, out: &mut dyn Write) -> Outcome {
    let l = load_lattice(path)?;
    let (bottom, top, distributive) = (l.name(l.bottom()), l.name(l.top()), l.is_distributive());
    if json {
        let v = json!({
            "size": l.size(),
            "bottom": bottom,
            "top": top,
            "distributive": distributive,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap())?;
    } else {
        writeln!(out, "lattice: {} elements", l.size())?;
        writeln!(out, "bottom: {bottom}")?;
        writeln!(out, "top: {top}")?;
        writeln!(out, "distributive: {distributive}")?;
    }
    Ok(EXIT_OK)
}

fn represent(path: &Path, spec: &FamilySpec, json: bool, out: &mut dyn Write) -> Outcome {
    let l = load_lattice(path)?;
    let family = match load_family(&l, spec)? {
        Loaded::Family(f) => f,
        Loaded::Rejected(why) => {
            writeln!(out, "{why}")?;
            return Ok(EXIT_CLAIM_FAILED);
        }
    };
    let rep = build_representation(&l, &family)?;
    if json {
        let filters: Vec<Vec<String>> = (0..family.len()).map(|i| filter_names(&l, &family, i)).collect();
        let point_map: Vec<_> = l
            .elements()
            .map(|a| json!({ "element": l.name(a), "filters": rep.image(a).to_vec() }))
            .collect();
        let v = json!({
            "family": { "kind": family.kind(), "filters": filters },
            "point_map": point_map,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap())?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "family: {}, {}", family.kind(), count_filters(family.len()))?;
    for i in 0..family.len() {
        writeln!(out, "  {i}: {}", render_filter(&l, &family, i))?;
    }
    writeln!(out, "point map:")?;
    for a in l.elements() {
        writeln!(out, "  f({}) = {}", l.name(a), render_indices(&rep.image(a).to_vec()))?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ClaimResult {
    claim: &'static str,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    reports: Vec<VerificationReport>,
}

impl ClaimArg {
    fn label(self) -> &'static str {
        match self {
            ClaimArg::Prop1 => "prop1",
            ClaimArg::Prop2 => "prop2",
            ClaimArg::Iso => "iso",
            ClaimArg::Coincidence => "coincidence",
            ClaimArg::Symmetry => "symmetry",
        }
    }
}

fn evaluate(label: &'static str, reports: Vec<VerificationReport>) -> ClaimResult {
    let holds = reports.iter().all(|r| r.holds);
    ClaimResult {
        claim: label,
        status: if holds { "holds" } else { "fails" },
        reason: None,
        reports,
    }
}

fn skipped(label: &'static str, reason: String) -> ClaimResult {
    ClaimResult {
        claim: label,
        status: "skipped",
        reason: Some(reason),
        reports: Vec::new(),
    }
}

fn verify(
    path: &Path,
    spec: &FamilySpec,
    claims: &[ClaimArg],
    force: bool,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let l = load_lattice(path)?;
    let family = match load_family(&l, spec)? {
        Loaded::Family(f) => f,
        Loaded::Rejected(why) => {
            writeln!(out, "{why}")?;
            return Ok(EXIT_CLAIM_FAILED);
        }
    };
    let primes = prime_filters(&l);
    let mut results = Vec::new();
    let mut seen = Vec::new();
    for &claim in claims {
        if seen.contains(&claim) {
            continue;
        }
        seen.push(claim);
        let label = claim.label();
        let result = match claim {
            ClaimArg::Prop1 => {
                let (meet, join) = verify_preservation(&l, &family)?;
                evaluate(label, vec![meet, join])
            }
            ClaimArg::Iso => evaluate(label, vec![verify_isomorphism(&l, &family)?]),
            ClaimArg::Prop2 => match verify_prime_union(&l) {
                Ok(r) => evaluate(label, vec![r]),
                Err(Error::NotDistributive) => skipped(label, "lattice is not distributive".into()),
                Err(e) => return Err(e.into()),
            },
            ClaimArg::Coincidence => {
                let mode = if force { CoincidenceMode::Forced } else { CoincidenceMode::Strict };
                match check_coincidence(&l, &family, mode) {
                    Ok(r) => evaluate(label, vec![r]),
                    Err(Error::KindUnsupported(kind)) => skipped(
                        label,
                        format!("only claimed for all/principal families, got {kind}; pass --force to run it"),
                    ),
                    Err(e) => return Err(e.into()),
                }
            }
            ClaimArg::Symmetry => {
                let (full, bare) = verify_symmetric_meets(&l, &family)?;
                evaluate(label, vec![full, bare])
            }
        };
        results.push(result);
    }

    let failed = results.iter().any(|r| r.status == "fails");
    if json {
        let v = json!({
            "family": family.kind(),
            "family_size": family.len(),
            "claims": results,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap())?;
    } else {
        writeln!(out, "family: {}, {}", family.kind(), count_filters(family.len()))?;
        for r in &results {
            match r.status {
                "skipped" => writeln!(out, "{}: skipped ({})", r.claim, r.reason.as_deref().unwrap_or(""))?,
                "holds" => {
                    let pairs: usize = r.reports.iter().map(|x| x.pairs_checked).sum();
                    writeln!(out, "{}: holds ({pairs} pair checks)", r.claim)?
                }
                _ => {
                    for report in r.reports.iter().filter(|x| !x.holds) {
                        let cx = report.counterexample.as_ref().expect("failed report has a counterexample");
                        let fam = if report.claim == Claim::PrimeUnion { &primes } else { &family };
                        write_failure(out, r.claim, report, cx, &l, fam)?;
                    }
                }
            }
        }
    }
    Ok(if failed { EXIT_CLAIM_FAILED } else { EXIT_OK })
}

fn write_failure(
    out: &mut dyn Write,
    label: &str,
    report: &VerificationReport,
    cx: &Counterexample,
    l: &Lattice,
    family: &FilterFamily,
) -> io::Result<()> {
    let (a, b) = (&cx.a_name, &cx.b_name);
    if cx.claim == Claim::Injective {
        let mut line = format!("{label}: FAILS: f not injective");
        if family.is_empty() {
            line.push_str(&format!("; {} family empty", family.kind()));
        }
        writeln!(out, "{line}")?;
        return writeln!(
            out,
            "  f({a}) = f({b}) = {}",
            render_members(l, family, &cx.left)
        );
    }
    let (lhs, rhs) = match cx.claim {
        Claim::MeetPreserved => (format!("f({a}) ∧* f({b})"), format!("f({a} ∧ {b})")),
        Claim::JoinPreserved => (format!("f({a}) ∨* f({b})"), format!("f({a} ∨ {b})")),
        Claim::PrimeUnion => (format!("f({a}) ∨* f({b})"), format!("f({a}) ∪ f({b})")),
        Claim::Coincidence => (format!("f({a}) ∨* f({b})"), format!("f({a}) ∨** f({b})")),
        Claim::SymmetricMeetFull => (format!("full ∧*(f({a}), f({b}))"), format!("f({a}) ∩ f({b})")),
        Claim::SymmetricMeetBare => (format!("bare ∧*(f({a}), f({b}))"), format!("f({a}) ∩ f({b})")),
        Claim::Injective | Claim::Isomorphism => unreachable!("handled above or never nested"),
    };
    writeln!(out, "{label}: FAILS ({}) at ({a}, {b})", report.claim.label())?;
    writeln!(out, "  {lhs} = {}", render_members(l, family, &cx.left))?;
    writeln!(out, "  {rhs} = {}", render_members(l, family, &cx.right))
}

fn counterexample(
    path: &Path,
    kind: CounterexampleKind,
    spec: &FamilySpec,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let l = load_lattice(path)?;
    match kind {
        CounterexampleKind::Veestar2Gap => {
            let Some(w) = prime_bare_join_gap(&l)? else {
                if json {
                    writeln!(out, "{}", json!({ "kind": "veestar2-gap", "witness": null }))?;
                } else {
                    writeln!(out, "no ∨** gap: f(a) ∨** f(b) reaches every prime filter containing a ∨ b")?;
                }
                return Ok(EXIT_CLAIM_FAILED);
            };
            let z: Vec<&str> = w.z_members.iter().map(|&e| l.name(e)).collect();
            if json {
                let v = json!({
                    "kind": "veestar2-gap",
                    "witness": { "a": l.name(w.a), "b": l.name(w.b), "z_index": w.z, "z": z },
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap())?;
            } else {
                writeln!(
                    out,
                    "witness: a = {}, b = {}, Z = {{{}}}",
                    l.name(w.a),
                    l.name(w.b),
                    z.join(", ")
                )?;
                writeln!(
                    out,
                    "  Z ∈ f(a ∨ b) with a ∨ b = {}, but Z ∉ f(a) ∨** f(b) over the prime filters",
                    l.name(l.join(w.a, w.b)?)
                )?;
            }
            Ok(EXIT_OK)
        }
        CounterexampleKind::UnionClosure => {
            let family = match load_family(&l, spec)? {
                Loaded::Family(f) => f,
                Loaded::Rejected(why) => {
                    writeln!(out, "{why}")?;
                    return Ok(EXIT_CLAIM_FAILED);
                }
            };
            let Some(w) = union_closure_witness(&l, &family)? else {
                if json {
                    writeln!(out, "{}", json!({ "kind": "union-closure", "witness": null }))?;
                } else {
                    writeln!(out, "family is union-closed")?;
                }
                return Ok(EXIT_CLAIM_FAILED);
            };
            let defect = w.defect.describe(&l);
            if json {
                let union: Vec<&str> = w.union.iter().map(|e| l.name(e)).collect();
                let v = json!({
                    "kind": "union-closure",
                    "witness": {
                        "x_index": w.x,
                        "y_index": w.y,
                        "x": filter_names(&l, &family, w.x),
                        "y": filter_names(&l, &family, w.y),
                        "union": union,
                        "defect": defect,
                    },
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap())?;
            } else {
                writeln!(
                    out,
                    "witness: X = {}, Y = {}, X ∪ Y = {} is not a filter ({defect})",
                    render_filter(&l, &family, w.x),
                    render_filter(&l, &family, w.y),
                    l.render_set(&w.union)
                )?;
            }
            Ok(EXIT_OK)
        }
    }
}

#[derive(Debug, Default, Clone, Copy, Serialize)]
struct Tally {
    pass: usize,
    fail: usize,
}

impl Tally {
    fn record(&mut self, ok: bool) {
        if ok {
            self.pass += 1;
        } else {
            self.fail += 1;
        }
    }
}

#[derive(Serialize)]
struct CensusRow {
    size: usize,
    lattices: usize,
    distributive: usize,
    claims: BTreeMap<&'static str, Tally>,
}

fn census(max_size: usize, dest: Option<&Path>, out: &mut dyn Write) -> Outcome {
    if max_size == 0 || max_size > MAX_ENUMERATION_SIZE {
        return Err(Error::SizeTooLarge {
            size: max_size,
            max: MAX_ENUMERATION_SIZE,
        }
        .into());
    }
    let mut rows = Vec::new();
    for n in 1..=max_size {
        let lattices = enumerate_lattices(n)?;
        let mut claims: BTreeMap<&'static str, Tally> = BTreeMap::new();
        let mut distributive = 0;
        for l in &lattices {
            let all = all_filters(l);
            let principal = principal_filters(l);
            let primes = prime_filters(l);
            claims
                .entry("filter_collapse")
                .or_default()
                .record(all.member_sets() == principal.member_sets());
            for (suffix, fam) in [("all", &all), ("principal", &principal)] {
                let (meet, join) = verify_preservation(l, fam)?;
                claims.entry(key("prop1", suffix)).or_default().record(meet.holds && join.holds);
                let iso = verify_isomorphism(l, fam)?;
                claims.entry(key("iso", suffix)).or_default().record(iso.holds);
                let c = check_coincidence(l, fam, CoincidenceMode::Strict)?;
                claims.entry(key("coincidence", suffix)).or_default().record(c.holds);
                let (full, bare) = verify_symmetric_meets(l, fam)?;
                claims.entry(key("symmetry", suffix)).or_default().record(full.holds && bare.holds);
            }
            let separated = is_separating(l, &primes)?.holds();
            claims
                .entry("stone_boundary")
                .or_default()
                .record(separated == l.is_distributive());
            if l.is_distributive() {
                distributive += 1;
                claims.entry("prop2_prime").or_default().record(verify_prime_union(l)?.holds);
            }
        }
        rows.push(CensusRow {
            size: n,
            lattices: lattices.len(),
            distributive,
            claims,
        });
    }
    let failed = rows.iter().any(|r| r.claims.values().any(|t| t.fail > 0));
    let doc = json!({ "max_size": max_size, "sizes": rows });
    let text = serde_json::to_string_pretty(&doc).unwrap() + "\n";
    match dest {
        Some(p) => {
            std::fs::write(p, &text).map_err(|e| CliError::Io {
                path: p.display().to_string(),
                message: e.to_string(),
            })?;
            for r in &rows {
                let fails: usize = r.claims.values().map(|t| t.fail).sum();
                writeln!(
                    out,
                    "size {}: {} lattices, {} distributive, {} claim failures",
                    r.size, r.lattices, r.distributive, fails
                )?;
            }
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(if failed { EXIT_CLAIM_FAILED } else { EXIT_OK })
}

fn key(claim: &str, family: &str) -> &'static str {
    match (claim, family) {
        ("prop1", "all") => "prop1_all",
        ("prop1", _) => "prop1_principal",
        ("iso", "all") => "iso_all",
        ("iso", _) => "iso_principal",
        ("coincidence", "all") => "coincidence_all",
        ("coincidence", _) => "coincidence_principal",
        ("symmetry", "all") => "symmetry_all",
        _ => "symmetry_principal",
    }
}

fn export_dot(path: &Path, dest: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let l = load_lattice(path)?;
    let text = to_dot(&l);
    match dest {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        })?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

/// Hasse diagram with edges from each element to its upper covers.
pub fn to_dot(l: &Lattice) -> String {
    let quote = |s: &str| format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
    let mut s = String::from("digraph lattice {\n  rankdir=BT;\n");
    for a in l.elements() {
        s.push_str(&format!("  {};\n", quote(l.name(a))));
    }
    for (a, b) in l.covers() {
        s.push_str(&format!("  {} -> {};\n", quote(l.name(a)), quote(l.name(b))));
    }
    s.push_str("}\n");
    s
}
