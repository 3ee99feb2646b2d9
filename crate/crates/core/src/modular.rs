//! Modular data `(S, T)` of `D_ω(G)`-Mod, exact verification of the modular
//! axioms, Verlinde coefficients and Kronecker products.
//!
//! Conventions: `T[i] = χ_i(g_i)/χ_i(1)` with no central-charge phase, and
//! the unitary normalization
//!
//! ```text
//! S[(a,χ)][(b,η)] = 1/(|C(a)||C(b)|) · Σ_{g ∈ G, [a, g b g⁻¹] = 1} conj χ(g b g⁻¹) · conj η(g⁻¹ a g)
//! ```
//!
//! Matrix entries are interned: a [`ModularData`] holds each distinct value
//! once and the matrices as index arrays.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::Cocycle3;
use crate::cyclo::{lcm, Cyclotomic, IntCyclotomic, RootSum};
use crate::groups::{Element, GroupKind};
use crate::simples::{enumerate_simples, SimpleLabel, SimplesError};

#[derive(Debug, Error)]
pub enum ModularError {
    #[error(transparent)]
    Simples(#[from] SimplesError),
    #[error("modular axiom check failed: {check}: {detail}")]
    Verification { check: String, detail: String },
    #[error("Verlinde coefficient N_{{{i},{j}}}^{k} = {value} is not a nonnegative integer")]
    Verlinde { i: usize, j: usize, k: usize, value: String },
    #[error("malformed modular data: {0}")]
    Malformed(String),
}

/// Serialized form of a simple: `{"class": ..., "char": ..., "dim": ...}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabelInfo {
    pub class: String,
    pub char: usize,
    pub dim: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub group: String,
    pub order: u64,
    /// `[u]` for a single group, `[u, v]` for a product.
    pub twist: Vec<u64>,
    pub conductor: u64,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularData {
    meta: Meta,
    labels: Vec<LabelInfo>,
    values: Vec<Cyclotomic>,
    s: Vec<u32>,
    t: Vec<u32>,
}

/// Interns values, handing out dense ids in first-seen order.
#[derive(Default)]
pub struct Interner {
    ids: HashMap<Cyclotomic, u32>,
    values: Vec<Cyclotomic>,
}

impl Interner {
    pub fn intern(&mut self, v: Cyclotomic) -> u32 {
        if let Some(&id) = self.ids.get(&v) {
            return id;
        }
        let id = self.values.len() as u32;
        self.ids.insert(v.clone(), id);
        self.values.push(v);
        id
    }

    pub fn get(&self, v: &Cyclotomic) -> Option<u32> {
        self.ids.get(v).copied()
    }

    pub fn into_values(self) -> Vec<Cyclotomic> {
        self.values
    }
}

impl ModularData {
    pub fn from_matrices(
        mut meta: Meta,
        labels: Vec<LabelInfo>,
        s: Vec<Vec<Cyclotomic>>,
        t: Vec<Cyclotomic>,
    ) -> Result<Self, ModularError> {
        let rank = t.len();
        if s.len() != rank || s.iter().any(|row| row.len() != rank) || labels.len() != rank {
            return Err(ModularError::Malformed(format!("inconsistent rank {rank}")));
        }
        let mut interner = Interner::default();
        let t: Vec<u32> = t.into_iter().map(|v| interner.intern(v)).collect();
        let s: Vec<u32> = s.into_iter().flatten().map(|v| interner.intern(v)).collect();
        let values = interner.into_values();
        meta.rank = rank;
        meta.conductor = values.iter().fold(1, |acc, v| lcm(acc, v.conductor()));
        Ok(ModularData { meta, labels, values, s, t })
    }

    fn from_parts(mut meta: Meta, labels: Vec<LabelInfo>, values: Vec<Cyclotomic>, s: Vec<u32>, t: Vec<u32>) -> Self {
        meta.rank = t.len();
        meta.conductor = values.iter().fold(1, |acc, v| lcm(acc, v.conductor()));
        ModularData { meta, labels, values, s, t }
    }

    pub fn rank(&self) -> usize {
        self.t.len()
    }

    pub fn meta(&self) -> &Meta {
        &self.meta
    }

    pub fn labels(&self) -> &[LabelInfo] {
        &self.labels
    }

    pub fn conductor(&self) -> u64 {
        self.meta.conductor
    }

    /// Distinct entry values; ids index into this table.
    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn s(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.values[self.s[i * self.rank() + j] as usize]
    }

    pub fn t(&self, i: usize) -> &Cyclotomic {
        &self.values[self.t[i] as usize]
    }

    pub fn s_id(&self, i: usize, j: usize) -> u32 {
        self.s[i * self.rank() + j]
    }

    pub fn t_id(&self, i: usize) -> u32 {
        self.t[i]
    }

    pub fn s_row(&self, i: usize) -> &[u32] {
        let r = self.rank();
        &self.s[i * r..(i + 1) * r]
    }

    pub fn s_dense(&self) -> Vec<Vec<Cyclotomic>> {
        (0..self.rank()).map(|i| (0..self.rank()).map(|j| self.s(i, j).clone()).collect()).collect()
    }

    pub fn t_vec(&self) -> Vec<Cyclotomic> {
        (0..self.rank()).map(|i| self.t(i).clone()).collect()
    }

    /// Same data with simple `i` renamed `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> ModularData {
        let r = self.rank();
        let mut s = vec![0; r * r];
        let mut t = vec![0; r];
        let mut labels = self.labels.clone();
        for i in 0..r {
            t[perm[i]] = self.t[i];
            labels[perm[i]] = self.labels[i].clone();
            for j in 0..r {
                s[perm[i] * r + perm[j]] = self.s[i * r + j];
            }
        }
        ModularData { meta: self.meta.clone(), labels, values: self.values.clone(), s, t }
    }

    /// Overwrites one S entry (used to build negative controls).
    pub fn with_s_entry(&self, i: usize, j: usize, v: Cyclotomic) -> ModularData {
        let mut s = self.s_dense();
        s[i][j] = v;
        ModularData::from_matrices(self.meta.clone(), self.labels.clone(), s, self.t_vec()).expect("same shape")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_repr()).expect("serializable")
    }

    fn to_json_repr(&self) -> ModularDataJson<'_> {
        let r = self.rank();
        ModularDataJson {
            meta: self.meta.clone(),
            labels: self.labels.clone(),
            t: (0..r).map(|i| self.t(i)).collect(),
            s: (0..r).map(|i| (0..r).map(|j| self.s(i, j)).collect()).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<ModularData, ModularError> {
        let raw: ModularDataOwned = serde_json::from_str(text).map_err(|e| ModularError::Malformed(e.to_string()))?;
        ModularData::from_matrices(raw.meta, raw.labels, raw.s, raw.t)
    }
}

#[derive(Serialize)]
struct ModularDataJson<'a> {
    meta: Meta,
    labels: Vec<LabelInfo>,
    #[serde(rename = "T")]
    t: Vec<&'a Cyclotomic>,
    #[serde(rename = "S")]
    s: Vec<Vec<&'a Cyclotomic>>,
}

#[derive(Deserialize)]
struct ModularDataOwned {
    meta: Meta,
    labels: Vec<LabelInfo>,
    #[serde(rename = "T")]
    t: Vec<Cyclotomic>,
    #[serde(rename = "S")]
    s: Vec<Vec<Cyclotomic>>,
}

/// `T[i] = χ_i(g_i) / χ_i(1)`.
pub fn t_matrix(simples: &[SimpleLabel]) -> Vec<Cyclotomic> {
    simples
        .iter()
        .map(|s| {
            let ch = &s.character;
            ch.eval(s.class_rep).scale(&BigRational::new(BigInt::one(), BigInt::from(ch.degree())))
        })
        .collect()
}

struct ClassBlock {
    rep: Element,
    simples: Vec<usize>,
    centralizer_order: usize,
}

fn class_blocks(simples: &[SimpleLabel]) -> Vec<ClassBlock> {
    let mut blocks: Vec<ClassBlock> = Vec::new();
    for s in simples {
        if blocks.len() <= s.class_index {
            blocks.push(ClassBlock { rep: s.class_rep, simples: Vec::new(), centralizer_order: s.character.domain().order() });
        }
        blocks[s.class_index].simples.push(s.index);
    }
    blocks
}

fn char_conductor(simples: &[SimpleLabel]) -> u64 {
    simples
        .iter()
        .flat_map(|s| s.character.values().iter().map(|v| v.conductor()))
        .fold(1, lcm)
}

/// The S-matrix by the closed formula, as `(values, row-major ids)`.
/// Rows are computed in parallel per class block; the output does not
/// depend on the partition.
pub fn s_matrix(omega: &Cocycle3, simples: &[SimpleLabel]) -> (Vec<Cyclotomic>, Vec<u32>) {
    let group = omega.group();
    let rank = simples.len();
    let n = char_conductor(simples);
    let one = BigInt::one();
    // conj χ(x) as root sums, aligned with each character's domain
    let conj_values: Vec<Vec<RootSum>> = simples
        .iter()
        .map(|s| {
            s.character
                .values()
                .iter()
                .map(|v| v.to_root_sum(n, &one).expect("character values are algebraic integers").conjugate())
                .collect()
        })
        .collect();
    let blocks = class_blocks(simples);
    let inverses: Vec<Element> = group.elements().map(|g| group.inverse(g)).collect();

    let rows: Vec<Vec<(usize, usize, IntCyclotomic, i128)>> = blocks
        .par_iter()
        .map(|ba| {
            let a = ba.rep;
            let dom_a = simples[ba.simples[0]].character.domain();
            let mut out = Vec::with_capacity(ba.simples.len() * rank);
            let mut acc = Vec::new();
            for bb in &blocks {
                let b = bb.rep;
                let dom_b = simples[bb.simples[0]].character.domain();
                let mut pairs: HashMap<(usize, usize), i128> = HashMap::new();
                for g in group.elements() {
                    let ginv = inverses[g.0];
                    let h = group.compose(group.compose(g, b), ginv);
                    if !group.commute(a, h) {
                        continue;
                    }
                    let y = group.compose(group.compose(ginv, a), g);
                    let ph = dom_a.position(h).expect("g b g⁻¹ lies in C(a)");
                    let py = dom_b.position(y).expect("g⁻¹ a g lies in C(b)");
                    *pairs.entry((ph, py)).or_insert(0) += 1;
                }
                let mut pairs: Vec<((usize, usize), i128)> = pairs.into_iter().collect();
                pairs.sort_unstable();
                let den = (ba.centralizer_order * bb.centralizer_order) as i128;
                for &i in &ba.simples {
                    for &j in &bb.simples {
                        acc.clear();
                        for &((ph, py), m) in &pairs {
                            conj_values[i][ph].mul_into(&conj_values[j][py], m, &mut acc);
                        }
                        let (num, den) = IntCyclotomic::canonical(n, std::mem::take(&mut acc)).over(den);
                        out.push((i, j, num, den));
                    }
                }
            }
            out
        })
        .collect();

    let mut keys: HashMap<(IntCyclotomic, i128), u32> = HashMap::new();
    let mut values = Vec::new();
    let mut ids = vec![0u32; rank * rank];
    for row in rows {
        for (i, j, num, den) in row {
            let next = values.len() as u32;
            let id = *keys.entry((num, den)).or_insert_with_key(|(num, den)| {
                values.push(num.to_cyclotomic(*den));
                next
            });
            ids[i * rank + j] = id;
        }
    }
    (values, ids)
}

fn twist_of(omega: &Cocycle3) -> Vec<u64> {
    match omega.group().kind() {
        GroupKind::Product(..) => match omega.split_product() {
            Some((l, r)) => twist_of(&l).into_iter().chain(twist_of(&r)).collect(),
            None => Vec::new(),
        },
        _ => vec![omega.factors().iter().map(|f| f.u).sum()],
    }
}

pub fn label_info(omega: &Cocycle3, simples: &[SimpleLabel]) -> Vec<LabelInfo> {
    simples
        .iter()
        .map(|s| LabelInfo { class: omega.group().format_element(s.class_rep), char: s.char_index, dim: s.dimension() })
        .collect()
}

/// Enumerates simples and computes `(S, T)` without verification.
pub fn compute_modular_data(omega: &Cocycle3) -> Result<(ModularData, Vec<SimpleLabel>), ModularError> {
    let simples = enumerate_simples(omega)?;
    let t = t_matrix(&simples);
    let (mut values, s) = s_matrix(omega, &simples);
    let mut interner = Interner::default();
    for v in values.drain(..) {
        interner.intern(v);
    }
    let t: Vec<u32> = t.into_iter().map(|v| interner.intern(v)).collect();
    let meta = Meta {
        group: omega.group().spec(),
        order: omega.group().order() as u64,
        twist: twist_of(omega),
        conductor: 0,
        rank: 0,
    };
    let md = ModularData::from_parts(meta, label_info(omega, &simples), interner.into_values(), s, t);
    Ok((md, simples))
}

/// Computes the data and fails with the first violated axiom.
pub fn compute_verified(
    omega: &Cocycle3,
    policy: VerlindePolicy,
) -> Result<(ModularData, Vec<SimpleLabel>, VerificationReport), ModularError> {
    let (md, simples) = compute_modular_data(omega)?;
    let report = verify_modular(&md, policy);
    if let Some(f) = report.first_failure() {
        return Err(ModularError::Verification { check: f.name.clone(), detail: f.detail.clone() });
    }
    Ok((md, simples, report))
}

/// Dense exact matrix used by the verification routines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rank: usize,
    entries: Vec<Cyclotomic>,
}

impl ExactMatrix {
    pub fn new(rank: usize, entries: Vec<Cyclotomic>) -> Self {
        assert_eq!(entries.len(), rank * rank);
        ExactMatrix { rank, entries }
    }

    pub fn identity(rank: usize) -> Self {
        let mut entries = vec![Cyclotomic::zero(); rank * rank];
        for i in 0..rank {
            entries[i * rank + i] = Cyclotomic::one();
        }
        ExactMatrix { rank, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.entries[i * self.rank + j]
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn conjugate_transpose(&self) -> Self {
        let r = self.rank;
        let entries = (0..r * r).map(|idx| self.get(idx % r, idx / r).conjugate()).collect();
        ExactMatrix { rank: r, entries }
    }

    pub fn scale_columns(&self, d: &[Cyclotomic]) -> Self {
        let r = self.rank;
        let entries = (0..r * r).map(|idx| self.get(idx / r, idx % r) * &d[idx % r]).collect();
        ExactMatrix { rank: r, entries }
    }

    pub fn scale(&self, x: &Cyclotomic) -> Self {
        ExactMatrix { rank: self.rank, entries: self.entries.iter().map(|e| e * x).collect() }
    }

    fn as_root_sums(&self, n: u64, den: &BigInt) -> Vec<RootSum> {
        let mut cache: HashMap<&Cyclotomic, RootSum> = HashMap::new();
        self.entries
            .iter()
            .map(|e| {
                cache
                    .entry(e)
                    .or_insert_with(|| e.to_root_sum(n, den).expect("coefficients fit after scaling"))
                    .clone()
            })
            .collect()
    }

    fn conductor(&self) -> u64 {
        self.entries.iter().fold(1, |acc, e| lcm(acc, e.conductor()))
    }

    fn denominator(&self) -> BigInt {
        self.entries.iter().fold(BigInt::one(), |acc, e| acc.lcm(&e.denominator_lcm()))
    }

    /// Exact product, accumulated over integer root sums.
    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        let r = self.rank;
        assert_eq!(r, other.rank);
        let n = lcm(self.conductor(), other.conductor());
        let (da, db) = (self.denominator(), other.denominator());
        let ra = self.as_root_sums(n, &da);
        let rb = other.as_root_sums(n, &db);
        let den = (&da * &db).to_i128().expect("denominator fits i128");
        let entries = (0..r * r)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / r, idx % r);
                let mut acc = Vec::new();
                for k in 0..r {
                    ra[i * r + k].mul_into(&rb[k * r + j], 1, &mut acc);
                }
                let (num, d) = IntCyclotomic::canonical(n, acc).over(den);
                num.to_cyclotomic(d)
            })
            .collect();
        ExactMatrix { rank: r, entries }
    }
}

impl From<&ModularData> for ExactMatrix {
    fn from(md: &ModularData) -> Self {
        let r = md.rank();
        ExactMatrix { rank: r, entries: (0..r * r).map(|idx| md.s(idx / r, idx % r).clone()).collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerlindePolicy {
    Full,
    Sampled { count: usize, seed: u64 },
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult { name: name.into(), passed, detail: detail.into() });
    }

    pub fn summary(&self) -> String {
        self.checks
            .iter()
            .map(|c| format!("{}={}", c.name, if c.passed { "ok" } else { "FAIL" }))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub const CHECK_SYMMETRIC: &str = "symmetric";
pub const CHECK_UNITARY: &str = "unitary";
pub const CHECK_CHARGE_CONJUGATION: &str = "charge_conjugation";
pub const CHECK_MODULAR_RELATION: &str = "modular_relation";
pub const CHECK_T_NORMALIZED: &str = "t_normalized";
pub const CHECK_VERLINDE: &str = "verlinde";
pub const CHECK_DIMENSIONS: &str = "dimensions";

fn is_root_of_unity(x: &Cyclotomic) -> bool {
    let m = lcm(2, x.conductor());
    let mut acc = Cyclotomic::one();
    let mut base = x.clone();
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc.is_one()
}

/// The permutation encoded by a 0/1 matrix with one 1 per row and column.
fn as_permutation(c: &ExactMatrix) -> Option<Vec<usize>> {
    let r = c.rank();
    let mut perm = vec![usize::MAX; r];
    let mut hit = vec![false; r];
    for (i, slot) in perm.iter_mut().enumerate() {
        for j in 0..r {
            let v = c.get(i, j);
            if v.is_zero() {
                continue;
            }
            if !v.is_one() || *slot != usize::MAX || hit[j] {
                return None;
            }
            *slot = j;
            hit[j] = true;
        }
        if *slot == usize::MAX {
            return None;
        }
    }
    Some(perm)
}

/// Runs the seven exact checks on `(S, T)`.
pub fn verify_modular(md: &ModularData, policy: VerlindePolicy) -> VerificationReport {
    let r = md.rank();
    let mut report = VerificationReport::default();

    let asym = (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).find(|&(i, j)| md.s_id(i, j) != md.s_id(j, i));
    report.push(CHECK_SYMMETRIC, asym.is_none(), asym.map(|(i, j)| format!("S[{i}][{j}] != S[{j}][{i}]")).unwrap_or_default());

    let s = ExactMatrix::from(md);
    let ssh = s.mul(&s.conjugate_transpose());
    let bad = (0..r * r).find(|&idx| {
        let (i, j) = (idx / r, idx % r);
        let v = ssh.get(i, j);
        if i == j {
            !v.is_one()
        } else {
            !v.is_zero()
        }
    });
    report.push(CHECK_UNITARY, bad.is_none(), bad.map(|idx| format!("(S S^H)[{}][{}] = {}", idx / r, idx % r, ssh.get(idx / r, idx % r))).unwrap_or_default());

    let c = s.mul(&s);
    let perm = as_permutation(&c);
    let charge_ok = match &perm {
        Some(p) => p[0] == 0 && (0..r).all(|i| p[p[i]] == i),
        None => false,
    };
    report.push(
        CHECK_CHARGE_CONJUGATION,
        charge_ok,
        if charge_ok { String::new() } else { "S^2 is not an involutive permutation fixing the unit".into() },
    );

    let modular = match &perm {
        Some(p) => {
            let st = s.scale_columns(&md.t_vec());
            let st3 = st.mul(&st).mul(&st);
            let lambda = st3.get(0, p[0]).clone();
            let unit = (&lambda * &lambda.conjugate()).is_one();
            let lc = c.scale(&lambda);
            let eq = st3 == lc;
            if unit && eq {
                Ok(format!("lambda = {lambda}"))
            } else {
                Err(format!("(ST)^3 != lambda S^2 (lambda = {lambda}, |lambda|=1: {unit})"))
            }
        }
        None => Err("S^2 is not a permutation".into()),
    };
    report.push(CHECK_MODULAR_RELATION, modular.is_ok(), modular.unwrap_or_else(|e| e));

    let t0 = md.t(0).is_one();
    let bad_t = (0..md.values().len())
        .filter(|&id| md.t.contains(&(id as u32)))
        .find(|&id| !is_root_of_unity(&md.values()[id]));
    report.push(
        CHECK_T_NORMALIZED,
        t0 && bad_t.is_none(),
        match (t0, bad_t) {
            (false, _) => format!("T[0] = {}", md.t(0)),
            (_, Some(id)) => format!("{} is not a root of unity", md.values()[id]),
            _ => String::new(),
        },
    );

    let verlinde = match policy {
        VerlindePolicy::Skip => Ok("skipped".to_string()),
        _ => verlinde_check(md, policy),
    };
    report.push(CHECK_VERLINDE, verlinde.is_ok(), verlinde.unwrap_or_else(|e| e));

    let order = BigRational::from_integer(BigInt::from(md.meta.order));
    let bad_dim = (0..r).find(|&i| {
        let v = md.s(0, i).as_rational().map(|x| x * &order);
        match v {
            Some(x) => !(x.is_integer() && x.is_positive() && x.to_integer() == BigInt::from(md.labels[i].dim)),
            None => true,
        }
    });
    report.push(CHECK_DIMENSIONS, bad_dim.is_none(), bad_dim.map(|i| format!("S[0][{i}]·|G| = {} vs dim {}", md.s(0, i), md.labels[i].dim)).unwrap_or_default());
    report
}

/// Precomputed integer data for Verlinde sums.
pub struct VerlindeTable {
    n: u64,
    rank: usize,
    s: Vec<RootSum>,
    s_conj: Vec<RootSum>,
    weights: Vec<i128>,
    den: i128,
}

impl VerlindeTable {
    pub fn new(md: &ModularData) -> Result<Self, ModularError> {
        let r = md.rank();
        let n = md.values().iter().fold(1, |acc, v| lcm(acc, v.conductor()));
        let d = (0..r * r).fold(BigInt::one(), |acc, idx| acc.lcm(&md.s(idx / r, idx % r).denominator_lcm()));
        let mut inv_unit = Vec::with_capacity(r);
        for x in 0..r {
            let v = md
                .s(0, x)
                .as_rational()
                .filter(|v| !v.is_zero())
                .ok_or_else(|| ModularError::Malformed(format!("S[0][{x}] is not a nonzero rational")))?;
            inv_unit.push(v.recip());
        }
        let l = inv_unit.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let weights = inv_unit
            .iter()
            .map(|w| (w * BigRational::from_integer(l.clone())).to_integer().to_i128().expect("weight fits"))
            .collect();
        let mut cache: HashMap<u32, (RootSum, RootSum)> = HashMap::new();
        let mut s = Vec::with_capacity(r * r);
        let mut s_conj = Vec::with_capacity(r * r);
        for idx in 0..r * r {
            let id = md.s[idx];
            let (a, b) = cache
                .entry(id)
                .or_insert_with(|| {
                    let rs = md.values()[id as usize].to_root_sum(n, &d).expect("scaled entries are integral");
                    let c = rs.conjugate();
                    (rs, c)
                })
                .clone();
            s.push(a);
            s_conj.push(b);
        }
        let den = (d.pow(3) * l).to_i128().ok_or_else(|| ModularError::Malformed("denominator overflow".into()))?;
        Ok(VerlindeTable { n, rank: r, s, s_conj, weights, den })
    }

    /// `N_{ij}^k = Σ_x S_ix S_jx conj(S_kx) / S_0x`.
    pub fn coefficient(&self, i: usize, j: usize, k: usize) -> Result<u64, ModularError> {
        let r = self.rank;
        let mut acc = Vec::new();
        let mut pair = Vec::new();
        for x in 0..r {
            pair.clear();
            self.s[i * r + x].mul_into(&self.s[j * r + x], self.weights[x], &mut pair);
            let prod = RootSum { n: self.n, terms: std::mem::take(&mut pair) };
            prod.mul_into(&self.s_conj[k * r + x], 1, &mut acc);
            pair = prod.terms;
        }
        let (num, den) = IntCyclotomic::canonical(self.n, acc).over(self.den);
        let v = num.to_cyclotomic(den);
        match v.as_integer() {
            Some(z) if !z.is_negative() => Ok(z.to_u64().expect("small")),
            _ => Err(ModularError::Verlinde { i, j, k, value: v.to_string() }),
        }
    }
}

pub fn verlinde(md: &ModularData, i: usize, j: usize, k: usize) -> Result<u64, ModularError> {
    VerlindeTable::new(md)?.coefficient(i, j, k)
}

fn verlinde_check(md: &ModularData, policy: VerlindePolicy) -> Result<String, String> {
    let table = VerlindeTable::new(md).map_err(|e| e.to_string())?;
    let r = md.rank();
    let triples: Vec<(usize, usize, usize)> = match policy {
        VerlindePolicy::Full => (0..r * r * r).map(|x| (x / (r * r), (x / r) % r, x % r)).collect(),
        VerlindePolicy::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| (rng.gen_range(0..r), rng.gen_range(0..r), rng.gen_range(0..r))).collect()
        }
        VerlindePolicy::Skip => Vec::new(),
    };
    let failures: Vec<String> = triples
        .par_iter()
        .filter_map(|&(i, j, k)| table.coefficient(i, j, k).err().map(|e| e.to_string()))
        .collect();
    match failures.first() {
        None => Ok(format!("{} coefficients checked", triples.len())),
        Some(e) => Err(e.clone()),
    }
}

/// The full fusion tensor `N[i][j][k]`.
pub fn fusion_tensor(md: &ModularData) -> Result<Vec<Vec<Vec<u64>>>, ModularError> {
    let table = VerlindeTable::new(md)?;
    let r = md.rank();
    (0..r)
        .map(|i| (0..r).map(|j| (0..r).map(|k| table.coefficient(i, j, k)).collect()).collect())
        .collect()
}

/// `S = S1 ⊗ S2`, `T = T1 ⊗ T2`, labels `(i1, i2)` in lexicographic order.
pub fn kronecker(md1: &ModularData, md2: &ModularData) -> ModularData {
    let (r1, r2) = (md1.rank(), md2.rank());
    let r = r1 * r2;
    let mut interner = Interner::default();
    let mut memo: HashMap<(u32, u32), u32> = HashMap::new();
    let mut product = |a: u32, b: u32, interner: &mut Interner| -> u32 {
        *memo.entry((a, b)).or_insert_with(|| interner.intern(&md1.values[a as usize] * &md2.values[b as usize]))
    };
    let mut t = Vec::with_capacity(r);
    for i1 in 0..r1 {
        for i2 in 0..r2 {
            t.push(product(md1.t[i1], md2.t[i2], &mut interner));
        }
    }
    let mut s = vec![0u32; r * r];
    for i1 in 0..r1 {
        for j1 in 0..r1 {
            let a = md1.s_id(i1, j1);
            for i2 in 0..r2 {
                let row = (i1 * r2 + i2) * r;
                for j2 in 0..r2 {
                    s[row + j1 * r2 + j2] = product(a, md2.s_id(i2, j2), &mut interner);
                }
            }
        }
    }
    let block_len = |md: &ModularData, i: usize| md.labels.iter().filter(|l| l.class == md.labels[i].class).count();
    let mut labels = Vec::with_capacity(r);
    for i1 in 0..r1 {
        for i2 in 0..r2 {
            let (l1, l2) = (&md1.labels[i1], &md2.labels[i2]);
            labels.push(LabelInfo {
                class: format!("({},{})", l1.class, l2.class),
                char: l1.char * block_len(md2, i2) + l2.char,
                dim: l1.dim * l2.dim,
            });
        }
    }
    let meta = Meta {
        group: format!("prod:({})x({})", md1.meta.group, md2.meta.group),
        order: md1.meta.order * md2.meta.order,
        twist: md1.meta.twist.iter().chain(&md2.meta.twist).copied().collect(),
        conductor: 0,
        rank: 0,
    };
    ModularData::from_parts(meta, labels, interner.into_values(), s, t)
}

/// The rank-one data of the trivial group.
pub fn trivial_modular_data() -> ModularData {
    let meta = Meta { group: "cyclic:1".into(), order: 1, twist: vec![0], conductor: 1, rank: 1 };
    let labels = vec![LabelInfo { class: "1".into(), char: 0, dim: 1 }];
    ModularData::from_matrices(meta, labels, vec![vec![Cyclotomic::one()]], vec![Cyclotomic::one()]).expect("rank one")
}

/// For data computed on a product group: the index in `kronecker(md1, md2)`
/// of each simple, from the factor indices recorded at enumeration time.
pub fn kronecker_index_map(simples: &[SimpleLabel], right_rank: usize) -> Option<Vec<usize>> {
    simples.iter().map(|s| s.factors.map(|(a, b)| a * right_rank + b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{inflate, kappa};
    use crate::groups::Group;

    fn md_for(p: u64, q: u64, u: u64) -> (ModularData, Vec<SimpleLabel>) {
        let g = Group::metacyclic(p, q, None).unwrap();
        compute_modular_data(&inflate(&kappa(p, u).unwrap(), &g).unwrap()).unwrap()
    }

    /// Brute-force oracle for untwisted D(G) on a tiny abelian group: the
    /// S-sum evaluated straight from the definition with float arithmetic.
    #[test]
    fn untwisted_z2_matches_hand_computation() {
        let g = Group::cyclic(2).unwrap();
        let (md, _) = compute_modular_data(&Cocycle3::trivial(&g)).unwrap();
        let half = Cyclotomic::from_fraction(1, 2);
        let mh = Cyclotomic::from_fraction(-1, 2);
        let expected = [
            [&half, &half, &half, &half],
            [&half, &half, &mh, &mh],
            [&half, &mh, &half, &mh],
            [&half, &mh, &mh, &half],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(md.s(i, j), expected[i][j], "S[{i}][{j}]");
            }
        }
        let t: Vec<Cyclotomic> = md.t_vec();
        assert_eq!(t, vec![Cyclotomic::one(), Cyclotomic::one(), Cyclotomic::one(), Cyclotomic::from_integer(-1)]);
        let report = verify_modular(&md, VerlindePolicy::Full);
        assert!(report.all_passed(), "{report:?}");
        // fusion rules of Z_2 × Z_2: labels (0,triv)=e, (0,sgn)=x, (1,triv)=y, (1,sgn)=xy
        let fusion = fusion_tensor(&md).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    assert_eq!(fusion[i][j][k], u64::from(i ^ j == k));
                }
            }
        }
    }

    #[test]
    fn unit_row_and_t_entries() {
        let (md, simples) = md_for(3, 7, 1);
        assert_eq!(md.rank(), 25);
        for (i, s) in simples.iter().enumerate() {
            assert_eq!(md.s(0, i), &Cyclotomic::from_fraction(s.dimension() as i64, 21));
        }
        assert!(md.t(0).is_one());
        let (md5, _) = md_for(5, 11, 3);
        assert_eq!(md5.s(0, 0), &Cyclotomic::from_fraction(1, 55));
    }

    #[test]
    fn axioms_hold_for_small_twisted_doubles() {
        for u in 0..3 {
            let (md, _) = md_for(3, 7, u);
            let report = verify_modular(&md, VerlindePolicy::Full);
            assert!(report.all_passed(), "u={u}: {report:?}");
        }
    }

    #[test]
    fn negative_control() {
        let (md, _) = md_for(3, 7, 1);
        let bad = md.with_s_entry(1, 2, Cyclotomic::from_fraction(1, 3));
        let report = verify_modular(&bad, VerlindePolicy::Skip);
        assert!(!report.get(CHECK_SYMMETRIC).unwrap().passed || !report.get(CHECK_UNITARY).unwrap().passed);
        assert!(!report.all_passed());
    }

    #[test]
    fn verlinde_properties() {
        let (md, _) = md_for(3, 7, 1);
        let table = VerlindeTable::new(&md).unwrap();
        for j in 0..25 {
            for k in 0..25 {
                assert_eq!(table.coefficient(0, j, k).unwrap(), u64::from(j == k));
            }
        }
        let dims: Vec<u64> = md.labels().iter().map(|l| l.dim).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let (i, j) = (rng.gen_range(0..25), rng.gen_range(0..25));
            let total: u64 = (0..25).map(|k| table.coefficient(i, j, k).unwrap() * dims[k]).sum();
            assert_eq!(total, dims[i] * dims[j]);
        }
    }

    #[test]
    fn kronecker_with_trivial_and_ranks() {
        let (md, _) = md_for(3, 7, 2);
        let k = kronecker(&md, &trivial_modular_data());
        assert_eq!(k.s_dense(), md.s_dense());
        assert_eq!(k.t_vec(), md.t_vec());
        let z2 = compute_modular_data(&Cocycle3::trivial(&Group::cyclic(2).unwrap())).unwrap().0;
        let k2 = kronecker(&md, &z2);
        assert_eq!(k2.rank(), 100);
        assert!(verify_modular(&k2, VerlindePolicy::Sampled { count: 50, seed: 1 }).all_passed());
    }

    #[test]
    fn json_round_trip() {
        let (md, _) = md_for(3, 7, 1);
        let text = md.to_json();
        let back = ModularData::from_json(&text).unwrap();
        assert_eq!(back.s_dense(), md.s_dense());
        assert_eq!(back.t_vec(), md.t_vec());
        assert_eq!(back.to_json(), text);
        assert!(text.starts_with("{\"meta\":{\"group\":\"pq:3,7,n=2\""));
    }
}
