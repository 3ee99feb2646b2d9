//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use moddata::cli::cocycle_for;
use moddata::cohomology::{classify_pointed, h3_orbit_count, inflate, kappa, Cocycle3};
use moddata::cyclo::Cyclotomic;
use moddata::equiv::{find_equivalence, galois_permutation, galois_twist_relabel};
use moddata::groups::{Element, Group, GroupKind};
use moddata::modular::{compute_modular_data, verify_modular, ModularData, VerlindePolicy};
use moddata::reproduce::{check_t_closed_form, reproduce, ClaimStatus};
use moddata::simples::SimpleLabel;

type Data = (ModularData, Vec<SimpleLabel>);

fn twisted(p: u64, q: u64) -> (Group, Vec<Data>) {
    let g = Group::metacyclic(p, q, None).unwrap();
    let data = (0..p).map(|u| compute_modular_data(&inflate(&kappa(p, u).unwrap(), &g).unwrap()).unwrap()).collect();
    (g, data)
}

fn within(elapsed: Duration, limit_s: u64, what: &str) {
    assert!(elapsed < Duration::from_secs(limit_s), "{what} took {elapsed:?}, limit {limit_s} s");
}

fn t_partition(data: &[Data]) -> Vec<Vec<u64>> {
    let keys: Vec<Vec<Cyclotomic>> = data
        .iter()
        .map(|(md, _)| {
            let mut t = md.t_vec();
            t.sort();
            t
        })
        .collect();
    let mut classes: Vec<Vec<u64>> = Vec::new();
    for (u, k) in keys.iter().enumerate() {
        match classes.iter_mut().find(|c| &keys[c[0] as usize] == k) {
            Some(c) => c.push(u as u64),
            None => classes.push(vec![u as u64]),
        }
    }
    classes
}

fn md_partition(data: &[Data]) -> Vec<Vec<u64>> {
    let mut classes: Vec<Vec<u64>> = Vec::new();
    for (u, (md, _)) in data.iter().enumerate() {
        match classes.iter_mut().find(|c| find_equivalence(&data[c[0] as usize].0, md).is_some()) {
            Some(c) => c.push(u as u64),
            None => classes.push(vec![u as u64]),
        }
    }
    classes
}

fn criterion_1() -> String {
    let start = Instant::now();
    let (_, d5) = twisted(5, 11);
    let (_, d3) = twisted(3, 7);
    let c5 = t_partition(&d5);
    let c3 = t_partition(&d3);
    assert_eq!(c5, vec![vec![0], vec![1, 4], vec![2, 3]]);
    assert_eq!(c3, vec![vec![0], vec![1], vec![2]]);
    within(start.elapsed(), 10, "T classification");
    format!("(5,11) {c5:?}, (3,7) {c3:?}")
}

fn criterion_2() -> String {
    let mut checked = 0;
    for (p, q) in [(3, 7), (5, 11)] {
        let (g, data) = twisted(p, q);
        for u in 0..p {
            check_t_closed_form(&g, p, u, &data[u as usize], &data[0]).unwrap();
            checked += 1;
        }
    }
    // an independent spot check of one entry: T at (b, m=1) for (5,11), u=3
    let (g, data) = twisted(5, 11);
    let (md, simples) = &data[3];
    let b = g.meta(0, 1);
    let i = simples.iter().position(|s| s.class_rep == b && s.char_index == 1).unwrap();
    assert_eq!(md.t(i), &Cyclotomic::root_of_unity(25, 5 + 3));
    format!("closed form, u-independence and multiplicity two hold for {checked} data sets")
}

fn criterion_3() -> String {
    let start = Instant::now();
    let (_, data) = twisted(5, 11);
    assert!(data.iter().all(|(md, _)| md.rank() == 49));
    let e14 = find_equivalence(&data[1].0, &data[4].0).expect("u=1 and u=4 share modular data");
    let e23 = find_equivalence(&data[2].0, &data[3].0).expect("u=2 and u=3 share modular data");
    assert!(find_equivalence(&data[1].0, &data[2].0).is_none());
    // the witnesses satisfy the defining equations on every entry
    for (a, b, pi) in [(1, 4, &e14), (2, 3, &e23)] {
        for i in 0..49 {
            assert_eq!(data[a].0.t(i), data[b].0.t(pi.apply(i)));
            for j in 0..49 {
                assert_eq!(data[a].0.s(i, j), data[b].0.s(pi.apply(i), pi.apply(j)));
            }
        }
    }
    let classes = md_partition(&data);
    assert_eq!(classes.len(), 3, "{classes:?}");
    within(start.elapsed(), 60, "counterexample run");
    format!("rank 49, classes {classes:?}, 1~4 and 2~3 witnessed, 1 !~ 2")
}

fn criterion_4() -> String {
    let start = Instant::now();
    let (_, data) = twisted(3, 7);
    for a in 0..3 {
        for b in (a + 1)..3 {
            assert!(find_equivalence(&data[a].0, &data[b].0).is_none(), "u={a} and u={b} equivalent");
        }
    }
    within(start.elapsed(), 10, "3q classification");
    "u = 0, 1, 2 pairwise inequivalent".into()
}

fn criterion_5() -> String {
    let mut runs = 0;
    for (p, q, policy) in [(3, 7, VerlindePolicy::Full), (5, 11, VerlindePolicy::Sampled { count: 200, seed: 5 })] {
        let (_, data) = twisted(p, q);
        for (u, (md, _)) in data.iter().enumerate() {
            let report = verify_modular(md, policy);
            assert!(report.all_passed(), "({p},{q}) u={u}: {:?}", report.first_failure());
            assert_eq!(report.checks.len(), 7);
            runs += 1;
        }
    }
    format!("all seven checks pass on {runs} data sets (full Verlinde at rank 25, 200 triples at rank 49)")
}

fn criterion_6() -> String {
    let mut count = 0;
    for (p, q) in [(3, 7), (5, 11)] {
        let (_, data) = twisted(p, q);
        for (md, _) in &data {
            let n = md.conductor() as i64;
            for t in [2, n - 1] {
                let sigma = galois_permutation(md, t).unwrap();
                let r = md.rank();
                for i in 0..r {
                    for j in 0..r {
                        assert_eq!(&md.s(i, j).galois_apply(t).unwrap(), md.s(i, sigma.apply(j)));
                    }
                    let twice = md.t(i).galois_apply(t).unwrap().galois_apply(t).unwrap();
                    assert_eq!(&twice, md.t(sigma.apply(i)));
                }
                count += 1;
            }
        }
    }
    format!("{count} Galois permutations, column and sigma^2 T identities exact")
}

fn criterion_7() -> String {
    let g = Group::metacyclic(5, 11, None).unwrap();
    let (_, report) = galois_twist_relabel(&g, 1, 2).unwrap();
    assert!(report.passed(), "{report:?}");
    assert_eq!((report.s_entries_checked, report.t_entries_checked), (49 * 49, 49));
    assert_eq!(report.target_twist, 2);
    format!("S identity on {} entries, T identity on {} entries", report.s_entries_checked, report.t_entries_checked)
}

fn peak_rss_mb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse::<u64>().ok().map(|kb| kb / 1024)
}

fn criterion_8() -> String {
    let start = Instant::now();
    let report = reproduce(3, 7, Some(13)).unwrap();
    let status = |id: &str| report.claim(id).unwrap().status;
    assert_eq!(status("KRON"), ClaimStatus::Pass, "{:?}", report.claim("KRON"));
    assert_eq!(status("PROD9"), ClaimStatus::Pass, "{:?}", report.claim("PROD9"));
    assert_eq!(status("PAIRORB"), ClaimStatus::DocumentedDiscrepancy, "{:?}", report.claim("PAIRORB"));
    within(start.elapsed(), 15 * 60, "product run");
    let rss = peak_rss_mb();
    if let Some(mb) = rss {
        assert!(mb < 4096, "peak resident memory {mb} MB");
    }
    format!(
        "{}; {}; pair orbits {} (documented-discrepancy); {:.0?}, peak RSS {} MB",
        report.claim("KRON").unwrap().computed,
        report.claim("PROD9").unwrap().computed,
        report.claim("PAIRORB").unwrap().computed.split(' ').next().unwrap(),
        start.elapsed(),
        rss.map_or("?".into(), |m| m.to_string())
    )
}

fn criterion_9() -> String {
    let totals: Vec<usize> = [(5, 11), (3, 5), (2, 7)].iter().map(|&(p, q)| classify_pointed(p, q).unwrap().total).collect();
    assert_eq!(totals, vec![14, 9, 12]);
    for p in [3, 5, 7, 11, 13] {
        assert_eq!(h3_orbit_count(p), 3);
    }
    assert_eq!(h3_orbit_count(2), 2);
    format!("totals {totals:?}; orbits 3 for odd p, 2 for p = 2")
}

// ---- criterion 10 oracles ----

/// `D(Z_2)` from the definition: simples `(a, χ_s)`, `S = conj(χ_s(b) χ_t(a)) / 2`.
fn d_z2_oracle() -> usize {
    let g = Group::cyclic(2).unwrap();
    let (md, _) = compute_modular_data(&Cocycle3::trivial(&g)).unwrap();
    let labels: Vec<(i64, i64)> = vec![(0, 0), (0, 1), (1, 0), (1, 1)];
    let sign = |s: i64, x: i64| if s * x % 2 == 0 { 1 } else { -1 };
    for (i, &(a, s)) in labels.iter().enumerate() {
        assert_eq!(md.t(i), &Cyclotomic::from_integer(sign(s, a)));
        for (j, &(b, t)) in labels.iter().enumerate() {
            let expected = Cyclotomic::from_fraction(sign(s, b) * sign(t, a), 2);
            assert_eq!(md.s(i, j), &expected, "S[{i}][{j}]");
        }
    }
    16
}

/// Dense integer polynomial helpers for the Φ_N oracle.
fn poly_divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd] / den[dd];
        quot[k] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    assert!(rem.iter().all(|&x| x == 0));
    quot
}

fn phi(n: usize, memo: &mut Vec<Option<Vec<i64>>>) -> Vec<i64> {
    if let Some(p) = &memo[n] {
        return p.clone();
    }
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            let pd = phi(d, memo);
            num = poly_divide_exact(&num, &pd);
        }
    }
    memo[n] = Some(num.clone());
    num
}

/// Remainder of a rational-coefficient polynomial modulo monic `m`.
fn reduce_mod(mut f: Vec<BigRational>, m: &[i64]) -> Vec<BigRational> {
    let d = m.len() - 1;
    while f.len() > d {
        let c = f.pop().unwrap();
        let k = f.len() - d;
        for i in 0..d {
            f[k + i] -= &c * BigRational::from_integer(BigInt::from(m[i]));
        }
    }
    f
}

fn zero_test_oracle() -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut memo = vec![None; 101];
    let mut checked = 0;
    let mut zeros = 0;
    for n in 1..=100usize {
        let phi_n = phi(n, &mut memo);
        for trial in 0..10 {
            // half the samples are multiples of Φ_N, hence zero in ℚ(ζ_N)
            let mut dense = vec![BigRational::from_integer(BigInt::from(0)); n];
            if trial % 2 == 0 {
                let shift = rng.gen_range(0..n);
                let c = rng.gen_range(-3i64..=3);
                for (i, &a) in phi_n.iter().enumerate() {
                    dense[(i + shift) % n] += BigRational::from_integer(BigInt::from(a * c));
                }
            }
            if trial % 4 != 0 {
                let k = rng.gen_range(0..n);
                let num = rng.gen_range(-5i64..=5);
                let den = rng.gen_range(1i64..=4);
                dense[k] += BigRational::new(BigInt::from(num), BigInt::from(den));
            }
            let terms: Vec<(u64, BigRational)> =
                dense.iter().enumerate().filter(|(_, c)| c != &&BigRational::from_integer(BigInt::from(0))).map(|(e, c)| (e as u64, c.clone())).collect();
            let x = Cyclotomic::from_terms(n as u64, terms).unwrap();
            let oracle_zero = reduce_mod(dense, &phi_n).iter().all(|c| *c == BigRational::from_integer(BigInt::from(0)));
            assert_eq!(x.is_zero(), oracle_zero, "N={n}, trial {trial}: {x}");
            zeros += usize::from(oracle_zero);
            checked += 1;
        }
    }
    assert!(zeros > 300 && zeros < checked);
    checked
}

/// Independent model of the in-scope groups: metacyclic elements as affine
/// maps `x ↦ n^j x + i` on `Z_q`, cyclic elements as residues.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
enum Model {
    Affine { q: u64, mult: u64, add: u64 },
    Residue { n: u64, k: u64 },
}

fn model_of(g: &Group, e: Element) -> Vec<Model> {
    match g.kind() {
        GroupKind::Metacyclic { q, n, .. } => {
            let (i, j) = g.meta_coords(e);
            vec![Model::Affine { q: *q, mult: moddata::groups::mod_pow(*n, j, *q), add: i }]
        }
        GroupKind::Cyclic { n } => vec![Model::Residue { n: *n, k: e.0 as u64 }],
        GroupKind::Product(l, r) => {
            let (a, b) = g.split(e);
            let mut m = model_of(l, a);
            m.extend(model_of(r, b));
            m
        }
    }
}

fn model_mul(x: &[Model], y: &[Model]) -> Vec<Model> {
    x.iter()
        .zip(y)
        .map(|(a, b)| match (*a, *b) {
            (Model::Affine { q, mult: m1, add: a1 }, Model::Affine { mult: m2, add: a2, .. }) => {
                // (x ↦ m1 x + a1) ∘ (x ↦ m2 x + a2)
                Model::Affine { q, mult: m1 * m2 % q, add: (m1 * a2 + a1) % q }
            }
            (Model::Residue { n, k: k1 }, Model::Residue { k: k2, .. }) => Model::Residue { n, k: (k1 + k2) % n },
            _ => unreachable!(),
        })
        .collect()
}

fn group_oracle(g: &Group) {
    let elements: Vec<Element> = g.elements().collect();
    let models: Vec<Vec<Model>> = elements.iter().map(|&e| model_of(g, e)).collect();
    let index: std::collections::HashMap<&Vec<Model>, usize> = models.iter().enumerate().map(|(i, m)| (m, i)).collect();
    assert_eq!(index.len(), g.order(), "{}: model is not faithful", g.spec());
    let mul = |a: usize, b: usize| index[&model_mul(&models[a], &models[b])];
    let inv: Vec<usize> = (0..g.order()).map(|a| (0..g.order()).find(|&b| mul(a, b) == 0).unwrap()).collect();
    assert_eq!(models[0], model_of(g, g.identity()));
    for a in 0..g.order() {
        for b in 0..g.order() {
            assert_eq!(g.compose(Element(a), Element(b)).0, mul(a, b), "{}", g.spec());
        }
    }
    let mut seen = vec![false; g.order()];
    let mut classes: Vec<BTreeSet<usize>> = Vec::new();
    for a in 0..g.order() {
        if seen[a] {
            continue;
        }
        let class: BTreeSet<usize> = (0..g.order()).map(|h| mul(mul(h, a), inv[h])).collect();
        for &c in &class {
            seen[c] = true;
        }
        classes.push(class);
    }
    let computed = g.conjugacy_classes();
    assert_eq!(computed.len(), classes.len(), "{}", g.spec());
    for cc in &computed {
        let members: BTreeSet<usize> = cc.members.iter().map(|e| e.0).collect();
        assert!(classes.contains(&members), "{}: class of {}", g.spec(), g.format_element(cc.representative));
        let rep = cc.representative.0;
        let cent: BTreeSet<usize> = (0..g.order()).filter(|&h| mul(h, rep) == mul(rep, h)).collect();
        let got: BTreeSet<usize> = g.centralizer(cc.representative).elements.iter().map(|e| e.0).collect();
        assert_eq!(got, cent, "{}: centralizer of {}", g.spec(), g.format_element(cc.representative));
    }
}

fn in_scope_groups() -> Vec<Group> {
    let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
    let mut out = Vec::new();
    for &p in &primes {
        for &q in &primes {
            if p * q <= 100 && (q - 1) % p == 0 {
                // every admissible n of order p
                for n in 2..q {
                    if moddata::groups::multiplicative_order(n, q) == Some(p) {
                        out.push(Group::metacyclic(p, q, Some(n)).unwrap());
                    }
                }
            }
        }
    }
    for n in 1..=100 {
        out.push(Group::cyclic(n).unwrap());
    }
    let small: Vec<Group> = ["pq:2,3", "pq:2,5", "pq:3,7", "cyclic:2", "cyclic:3", "cyclic:4", "cyclic:5"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    for a in &small {
        for b in &small {
            if a.order() * b.order() <= 100 {
                out.push(Group::direct_product(a, b));
            }
        }
    }
    out
}

fn criterion_10() -> String {
    let s_entries = d_z2_oracle();
    let zero_tests = zero_test_oracle();
    let groups = in_scope_groups();
    for g in &groups {
        group_oracle(g);
    }
    // the twisted cyclic case goes through the generic μ solver
    let c9 = Group::cyclic(9).unwrap();
    let (md, _) = compute_modular_data(&cocycle_for(&c9, 1, 0, Some(3)).unwrap()).unwrap();
    assert!(verify_modular(&md, VerlindePolicy::Full).all_passed());
    format!("D(Z_2) {s_entries} S entries; {zero_tests} zero tests vs Phi_N reduction; {} groups vs exhaustive conjugation", groups.len())
}

type Criterion = (&'static str, fn() -> String);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("T-classification", criterion_1),
        ("T closed form", criterion_2),
        ("headline counterexample", criterion_3),
        ("3q classification", criterion_4),
        ("modular axioms", criterion_5),
        ("Galois machinery", criterion_6),
        ("Galois relabeling", criterion_7),
        ("products", criterion_8),
        ("classification counts", criterion_9),
        ("oracle suites", criterion_10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let id = format!("criterion {}", k + 1);
        if !filter.is_empty() && !filter.iter().any(|f| id.ends_with(&format!(" {f}")) || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("[PASS] {id:<12} {name:<24} {elapsed:>10.2?}  {detail}"),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("[FAIL] {id:<12} {name:<24} {elapsed:>10.2?}  {msg}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
