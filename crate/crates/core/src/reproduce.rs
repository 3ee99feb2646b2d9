//! The claim catalog and the harness that re-derives each claim.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::cohomology::{classify_pointed, h3_orbit_count, h3_orbit_count_pair, inflate, kappa, product_cocycle};
use crate::cyclo::{is_prime, Cyclotomic};
use crate::equiv::{cocycle_galois_orbits, equivalence_classes, find_equivalence, galois_permutation, relabel_between};
use crate::groups::Group;
use crate::modular::{
    compute_modular_data, kronecker, kronecker_index_map, verify_modular, ModularData, ModularError, VerlindePolicy,
};
use crate::simples::{metacyclic_rank, SimpleLabel};

#[derive(Debug, Error)]
pub enum ReproduceError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Modular(#[from] ModularError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimStatus {
    Pass,
    Fail,
    DocumentedDiscrepancy,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimResult {
    pub id: String,
    pub locus: String,
    pub expected: String,
    pub computed: String,
    pub status: ClaimStatus,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepTiming {
    pub step: String,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReproductionReport {
    pub p: u64,
    pub q: u64,
    pub r: Option<u64>,
    pub steps: Vec<StepTiming>,
    pub claims: Vec<ClaimResult>,
}

/// `(id, locus)` for every claim; the product claims apply only when a
/// third prime is given, `INEQ3Q` only when `p = 3`.
pub const CATALOG: &[(&str, &str)] = &[
    ("CLASSES", "conjugacy class count (q-1)/p + p of the metacyclic group"),
    ("RANK", "rank of the twisted double (49 for p=5, q=11)"),
    ("AXIOMS", "every computed (S,T) satisfies the modular axioms"),
    ("T3", "exactly three different T-matrices across the twists u"),
    ("TFORM", "T entry (mp + k^2 u) for (b^k, m) simples, u-independent elsewhere"),
    ("MD3", "at most three different modular data across the twists u"),
    ("SHARE", "(p-1)/2 twisted doubles with the same modular data"),
    ("INEQ3Q", "groups of order 3q are classified by their modular data"),
    ("GALOIS", "unique Galois permutation of simples with the sigma^2 T identity"),
    ("RELABEL", "Galois relabeling of simples between Galois-conjugate twists"),
    ("PARITY", "Galois orbits of single twists: zero and nonzero"),
    ("H3ORB", "orbit counts on H^3 per prime factor and combined"),
    ("CLASSIFY", "number of pointed category classes (p+9, nine, or 12)"),
    ("KRON", "product data is the Kronecker product of the factor data"),
    ("PROD9", "at most 3*3=9 different modular data for the product twists"),
    ("PAIRORB", "number of Galois orbits of cocycle pairs (u,v)"),
];

pub fn catalog(p: u64, with_product: bool) -> Vec<&'static str> {
    CATALOG
        .iter()
        .map(|(id, _)| *id)
        .filter(|id| *id != "INEQ3Q" || p == 3)
        .filter(|id| with_product || !matches!(*id, "KRON" | "PROD9" | "PAIRORB"))
        .collect()
}

fn locus(id: &str) -> &'static str {
    CATALOG.iter().find(|(c, _)| *c == id).map(|(_, l)| *l).expect("claim in catalog")
}

impl ReproductionReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.status != ClaimStatus::Fail)
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.id == id)
    }

    /// Whether every applicable catalog id occurs exactly once.
    pub fn is_complete(&self) -> bool {
        let ids = catalog(self.p, self.r.is_some());
        ids.len() == self.claims.len() && ids.iter().all(|id| self.claims.iter().filter(|c| c.id == *id).count() == 1)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let r = self.r.map(|r| format!(", r={r}")).unwrap_or_default();
        let _ = writeln!(out, "reproduction report for p={}, q={}{}", self.p, self.q, r);
        let _ = writeln!(out, "{:<9} {:<24} {:>9}  expected | computed", "claim", "status", "ms");
        for c in &self.claims {
            let status = match c.status {
                ClaimStatus::Pass => "pass",
                ClaimStatus::Fail => "FAIL",
                ClaimStatus::DocumentedDiscrepancy => "documented-discrepancy",
            };
            let _ = writeln!(out, "{:<9} {:<24} {:>9}  {} | {}", c.id, status, c.elapsed_ms, c.expected, c.computed);
        }
        for s in &self.steps {
            let _ = writeln!(out, "step {:<30} {:>9} ms", s.step, s.elapsed_ms);
        }
        out
    }
}

pub fn validate(p: u64, q: u64, r: Option<u64>) -> Result<(), ReproduceError> {
    let bad = |m: String| Err(ReproduceError::InvalidParameters(m));
    if p < 3 || !is_prime(p) {
        return bad(format!("p = {p} must be an odd prime"));
    }
    if !is_prime(q) || (q - 1) % p != 0 {
        return bad(format!("q = {q} must be a prime with p | q-1"));
    }
    if let Some(r) = r {
        if !is_prime(r) || (r - 1) % p != 0 || r == q {
            return bad(format!("r = {r} must be a prime other than q with p | r-1"));
        }
    }
    Ok(())
}

fn quadratic_residues(p: u64) -> BTreeSet<u64> {
    (1..p).map(|x| x * x % p).collect()
}

fn policy_for(rank: usize) -> VerlindePolicy {
    if rank <= 25 {
        VerlindePolicy::Full
    } else {
        VerlindePolicy::Sampled { count: 200, seed: 0x5eed }
    }
}

type Data = (ModularData, Vec<SimpleLabel>);

struct Harness {
    claims: Vec<ClaimResult>,
    steps: Vec<StepTiming>,
}

impl Harness {
    fn claim(&mut self, id: &str, f: impl FnOnce() -> (String, String, ClaimStatus)) {
        let start = Instant::now();
        let (expected, computed, status) = f();
        self.claims.push(ClaimResult {
            id: id.into(),
            locus: locus(id).into(),
            expected,
            computed,
            status,
            elapsed_ms: start.elapsed().as_millis(),
        });
    }

    fn step<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.steps.push(StepTiming { step: name.into(), elapsed_ms: start.elapsed().as_millis() });
        out
    }
}

fn pass_if(ok: bool) -> ClaimStatus {
    if ok {
        ClaimStatus::Pass
    } else {
        ClaimStatus::Fail
    }
}

fn fmt_classes(classes: &[Vec<usize>], labels: &[u64]) -> String {
    classes
        .iter()
        .map(|c| format!("{{{}}}", c.iter().map(|&i| labels[i].to_string()).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}

/// The expected partition of twists `0..p` into zero, residues, non-residues.
fn residue_partition(p: u64) -> Vec<Vec<usize>> {
    let qr = quadratic_residues(p);
    let mut parts = vec![vec![0usize]];
    parts.push((1..p).filter(|u| qr.contains(u)).map(|u| u as usize).collect());
    let nqr: Vec<usize> = (1..p).filter(|u| !qr.contains(u)).map(|u| u as usize).collect();
    if !nqr.is_empty() {
        parts.push(nqr);
    }
    parts
}

fn t_classes(data: &[Data]) -> Vec<Vec<usize>> {
    let multisets: Vec<Vec<&Cyclotomic>> = data
        .iter()
        .map(|(md, _)| {
            let mut t: Vec<&Cyclotomic> = (0..md.rank()).map(|i| md.t(i)).collect();
            t.sort();
            t
        })
        .collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, m) in multisets.iter().enumerate() {
        match classes.iter_mut().find(|c| &multisets[c[0]] == m) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

/// Checks the T closed form on one data set. Returns a failure description.
pub fn check_t_closed_form(group: &Group, p: u64, u: u64, data: &Data, untwisted: &Data) -> Result<(), String> {
    let (md, simples) = data;
    let mut block: Vec<&Cyclotomic> = Vec::new();
    for (i, s) in simples.iter().enumerate() {
        let (_, k) = group.meta_coords(s.class_rep);
        if k != 0 {
            let m = s.char_index as u64;
            let expected = Cyclotomic::root_of_unity(p * p, (m * p + k * k * u) as i64);
            if md.t(i) != &expected {
                return Err(format!("u={u}: T at ({}, m={m}) is {}", group.format_element(s.class_rep), md.t(i)));
            }
            block.push(md.t(i));
        } else if md.t(i) != untwisted.0.t(i) || untwisted.1[i].class_rep != s.class_rep {
            return Err(format!("u={u}: T at simple {i} depends on u"));
        }
    }
    if u != 0 {
        block.sort();
        let mut runs = block.chunk_by(|a, b| a == b);
        if let Some(bad) = runs.find(|r| r.len() != 2) {
            return Err(format!("u={u}: value {} occurs {} times in the k != 0 block", bad[0], bad.len()));
        }
    }
    Ok(())
}

fn galois_exponents(n: u64) -> Vec<i64> {
    let two = (2..n.max(3)).find(|t| num_integer::gcd(*t, n) == 1).unwrap_or(1);
    vec![two as i64, n as i64 - 1]
}

/// Runs every applicable claim for `(p, q)` and, when given, the product
/// with the third prime `r`.
pub fn reproduce(p: u64, q: u64, r: Option<u64>) -> Result<ReproductionReport, ReproduceError> {
    validate(p, q, r)?;
    let mut h = Harness { claims: Vec::new(), steps: Vec::new() };
    let group = Group::metacyclic(p, q, None).map_err(|e| ReproduceError::InvalidParameters(e.to_string()))?;
    let data: Vec<Data> = h.step("compute data for all u", || {
        (0..p)
            .map(|u| compute_modular_data(&inflate(&kappa(p, u).expect("odd prime"), &group).expect("p | q-1")))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let twists: Vec<u64> = (0..p).collect();

    h.claim("CLASSES", || {
        let expected = (q - 1) / p + p;
        let computed = group.conjugacy_classes().len() as u64;
        (expected.to_string(), computed.to_string(), pass_if(expected == computed))
    });

    h.claim("RANK", || {
        let expected = metacyclic_rank(p, q);
        let ranks: BTreeSet<usize> = data.iter().map(|(md, _)| md.rank()).collect();
        let ok = ranks.len() == 1 && ranks.contains(&(expected as usize));
        (expected.to_string(), format!("{ranks:?}"), pass_if(ok))
    });

    h.claim("AXIOMS", || {
        let reports: Vec<String> = data
            .iter()
            .enumerate()
            .filter_map(|(u, (md, _))| {
                let rep = verify_modular(md, policy_for(md.rank()));
                rep.first_failure().map(|f| format!("u={u}: {} ({})", f.name, f.detail))
            })
            .collect();
        let computed = if reports.is_empty() { "all seven checks pass for every u".to_string() } else { reports.join("; ") };
        ("all seven checks pass for every u".into(), computed, pass_if(reports.is_empty()))
    });

    h.claim("T3", || {
        let expected = residue_partition(p);
        let computed = t_classes(&data);
        let ok = computed == expected && computed.len() == 3;
        (
            format!("3 classes {}", fmt_classes(&expected, &twists)),
            format!("{} classes {}", computed.len(), fmt_classes(&computed, &twists)),
            pass_if(ok),
        )
    });

    h.claim("TFORM", || {
        let failures: Vec<String> = (0..p)
            .filter_map(|u| check_t_closed_form(&group, p, u, &data[u as usize], &data[0]).err())
            .collect();
        let computed = if failures.is_empty() { "holds for every u".to_string() } else { failures.join("; ") };
        ("holds for every u".into(), computed, pass_if(failures.is_empty()))
    });

    let md_refs: Vec<&ModularData> = data.iter().map(|(md, _)| md).collect();
    let classes = h.step("modular data classes", || equivalence_classes(&md_refs));

    h.claim("MD3", || {
        let expected = residue_partition(p);
        let ok = classes == expected && classes.len() <= 3;
        (
            format!("3 classes {}", fmt_classes(&expected, &twists)),
            format!("{} classes {}", classes.len(), fmt_classes(&classes, &twists)),
            pass_if(ok),
        )
    });

    h.claim("SHARE", || {
        let qr = quadratic_residues(p);
        let nonresidue = (1..p).find(|u| !qr.contains(u));
        let mut ok = true;
        let mut witnessed = Vec::new();
        for &u in &qr {
            let found = find_equivalence(&data[1].0, &data[u as usize].0).is_some();
            ok &= found;
            witnessed.push(format!("1~{u}:{}", if found { "yes" } else { "no" }));
        }
        if let Some(n) = nonresidue {
            let found = find_equivalence(&data[1].0, &data[n as usize].0).is_some();
            ok &= !found;
            witnessed.push(format!("1~{n}:{}", if found { "yes" } else { "no" }));
        }
        ok &= qr.len() as u64 >= (p - 1) / 2;
        (
            format!("u=1 shares data with every residue (class size >= {}), not with a non-residue", (p - 1) / 2),
            witnessed.join(" "),
            pass_if(ok),
        )
    });

    if p == 3 {
        h.claim("INEQ3Q", || {
            let ok = classes.len() == 3;
            ("3 pairwise inequivalent data".into(), format!("{} classes {}", classes.len(), fmt_classes(&classes, &twists)), pass_if(ok))
        });
    }

    h.claim("GALOIS", || {
        let mut failures = Vec::new();
        let mut checked = 0;
        for (u, (md, _)) in data.iter().enumerate() {
            for t in galois_exponents(md.conductor()) {
                checked += 1;
                if let Err(e) = galois_permutation(md, t) {
                    failures.push(format!("u={u}, t={t}: {e}"));
                }
            }
        }
        let computed =
            if failures.is_empty() { format!("{checked} permutations found, all identities hold") } else { failures.join("; ") };
        ("sigma_hat exists and is unique for t in {2, N-1}, every u".into(), computed, pass_if(failures.is_empty()))
    });

    h.claim("RELABEL", || {
        let t = 2i64;
        let v = (2 % p) as usize;
        match relabel_between(&data[1], &data[v], t, p, 1, v as u64) {
            Ok((_, rep)) => (
                "both identities hold for u=1, t=2".into(),
                format!(
                    "S identity {} on {} entries, T identity {} on {} entries",
                    rep.s_identity, rep.s_entries_checked, rep.t_identity, rep.t_entries_checked
                ),
                pass_if(rep.passed()),
            ),
            Err(e) => ("both identities hold for u=1, t=2".into(), e.to_string(), ClaimStatus::Fail),
        }
    });

    h.claim("PARITY", || {
        let orbits = cocycle_galois_orbits(p, false);
        ("2 orbits".to_string(), format!("{} orbits {:?}", orbits.count, orbits.orbits), pass_if(orbits.count == 2))
    });

    h.claim("H3ORB", || {
        let single = h3_orbit_count(p);
        let pair = h3_orbit_count_pair(p, q);
        ("3 per prime, 9 combined".into(), format!("{single} per prime, {pair} combined"), pass_if(single == 3 && pair == 9))
    });

    h.claim("CLASSIFY", || match classify_pointed(p, q) {
        Ok(c) => (format!("{}", p + 9), format!("{} ({:?})", c.total, c.branch), pass_if(c.total as u64 == p + 9)),
        Err(e) => (format!("{}", p + 9), e.to_string(), ClaimStatus::Fail),
    });

    if let Some(r) = r {
        product_claims(&mut h, p, r, &group)?;
    }

    Ok(ReproductionReport { p, q, r, steps: h.steps, claims: h.claims })
}

fn product_claims(h: &mut Harness, p: u64, r: u64, gq: &Group) -> Result<(), ReproduceError> {
    let gr = Group::metacyclic(p, r, None).map_err(|e| ReproduceError::InvalidParameters(e.to_string()))?;
    let factor = |g: &Group, u: u64| compute_modular_data(&inflate(&kappa(p, u).expect("odd prime"), g).expect("p | r-1"));
    let left: Vec<Data> = h.step("factor data (q)", || (0..p).map(|u| factor(gq, u)).collect::<Result<_, _>>())?;
    let right: Vec<Data> = h.step("factor data (r)", || (0..p).map(|u| factor(&gr, u)).collect::<Result<_, _>>())?;

    // direct computation on the product for every (u, v), each compared
    // with the Kronecker product of the factors
    let mut direct: Vec<ModularData> = Vec::new();
    let mut mismatches: Vec<String> = Vec::new();
    let start = Instant::now();
    for u in 0..p {
        for v in 0..p {
            let omega = product_cocycle(gq, &gr, u, v).expect("valid factors");
            let (md, simples) = compute_modular_data(&omega)?;
            let kron = kronecker(&left[u as usize].0, &right[v as usize].0);
            if !matches_kronecker(&md, &simples, &kron) {
                mismatches.push(format!("({u},{v})"));
            }
            direct.push(md);
        }
    }
    h.steps.push(StepTiming { step: "direct product data for all (u,v)".into(), elapsed_ms: start.elapsed().as_millis() });

    h.claim("KRON", || {
        let factors_ok = left.iter().chain(&right).all(|(md, _)| verify_modular(md, policy_for(md.rank())).all_passed());
        let ok = mismatches.is_empty() && factors_ok;
        let computed = format!(
            "rank {}; direct = kronecker for {} of {} pairs; factor axioms {}",
            direct[0].rank(),
            direct.len() - mismatches.len(),
            direct.len(),
            if factors_ok { "pass" } else { "FAIL" }
        );
        ("direct data equals kronecker of factors under the lexicographic label map".into(), computed, pass_if(ok))
    });

    h.claim("PROD9", || {
        let refs: Vec<&ModularData> = direct.iter().collect();
        let classes = equivalence_classes(&refs);
        let pairs: Vec<String> = (0..p).flat_map(|u| (0..p).map(move |v| format!("({u},{v})"))).collect();
        let shown = classes
            .iter()
            .map(|c| format!("{{{}}}", c.iter().map(|&i| pairs[i].clone()).collect::<Vec<_>>().join(",")))
            .collect::<Vec<_>>()
            .join(" ");
        let bound = 9;
        (format!("at most {bound} classes"), format!("{} classes {shown}", classes.len()), pass_if(classes.len() <= bound))
    });

    h.claim("PAIRORB", || {
        let orbits = cocycle_galois_orbits(p, true);
        let status = if orbits.count as u64 == p + 1 {
            ClaimStatus::Pass
        } else if orbits.count as u64 == p + 2 {
            ClaimStatus::DocumentedDiscrepancy
        } else {
            ClaimStatus::Fail
        };
        (
            format!("p+1 = {}", p + 1),
            format!(
                "{} by exhaustive enumeration: (0,0), two one-sided-zero orbits, {} orbits with both entries nonzero",
                orbits.count,
                orbits.count.saturating_sub(3)
            ),
            status,
        )
    });
    Ok(())
}

/// Whether data computed on a product group equals the Kronecker product of
/// the factor data, matching simples through their factor indices.
pub fn matches_kronecker(md: &ModularData, simples: &[SimpleLabel], kron: &ModularData) -> bool {
    if md.rank() != kron.rank() {
        return false;
    }
    let right_rank = match simples.iter().filter_map(|s| s.factors).map(|(_, b)| b).max() {
        Some(b) => b + 1,
        None => return false,
    };
    let Some(map) = kronecker_index_map(simples, right_rank) else {
        return false;
    };
    let r = md.rank();
    (0..r).all(|i| md.t(i) == kron.t(map[i]))
        && (0..r).all(|i| (0..r).all(|j| md.s(i, j) == kron.s(map[i], map[j])))
}
