//! Permutation-equivalence of modular data, Galois permutations of simples,
//! Galois relabelings between twisted doubles, and Galois orbits of cocycle
//! parameters.

use std::collections::{BTreeSet, HashMap};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::{inflate, kappa, CohomologyError};
use crate::cyclo::{factorize, mod_inverse, CycloError, Cyclotomic};
use crate::groups::{Group, GroupKind};
use crate::modular::{compute_modular_data, ModularData, ModularError};
use crate::simples::SimpleLabel;

#[derive(Debug, Error)]
pub enum EquivError {
    #[error("not a permutation: {0:?}")]
    NotBijective(Vec<usize>),
    #[error("{t} is not a unit modulo {n}")]
    NotUnit { t: i64, n: u64 },
    #[error("no column matches the Galois image of column {0}")]
    NoMatchingColumn(usize),
    #[error("columns {0} and {1} of S coincide; the Galois permutation is not unique")]
    DuplicateColumns(usize, usize),
    #[error("sigma^2(T[{0}]) != T[sigma_hat({0})]")]
    TIdentity(usize),
    #[error("Galois image of the character of simple {0} is not a simple of the target")]
    MissingCharacter(usize),
    #[error("Galois relabeling needs a metacyclic group")]
    NotMetacyclic,
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Modular(#[from] ModularError),
}

/// A bijection of `{0, …, n−1}`, stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, EquivError> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(EquivError::NotBijective(images));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = EquivError;
    fn try_from(v: Vec<usize>) -> Result<Self, EquivError> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.0
    }
}

/// Whether `S2[π(i)][π(j)] = S1[i][j]` and `T2[π(i)] = T1[i]` for all `i, j`.
pub fn is_equivalence(md1: &ModularData, md2: &ModularData, pi: &Permutation) -> bool {
    let r = md1.rank();
    if md2.rank() != r || pi.len() != r {
        return false;
    }
    (0..r).all(|i| md1.t(i) == md2.t(pi.apply(i)))
        && (0..r).into_par_iter().all(|i| {
            let pi_i = pi.apply(i);
            (0..r).all(|j| md1.s(i, j) == md2.s(pi_i, pi.apply(j)))
        })
}

/// Both data sets' matrices rewritten over one shared id space.
struct Shared {
    rank: usize,
    s: [Vec<u32>; 2],
    t: [Vec<u32>; 2],
}

impl Shared {
    fn new(md1: &ModularData, md2: &ModularData) -> Self {
        let r = md1.rank();
        let lookup: HashMap<&Cyclotomic, u32> = md1.values().iter().enumerate().map(|(i, v)| (v, i as u32)).collect();
        let mut next = md1.values().len() as u32;
        let remap: Vec<u32> = md2
            .values()
            .iter()
            .map(|v| {
                lookup.get(v).copied().unwrap_or_else(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect();
        let s1 = (0..r * r).map(|x| md1.s_id(x / r, x % r)).collect();
        let t1 = (0..r).map(|i| md1.t_id(i)).collect();
        let s2 = (0..r * r).map(|x| remap[md2.s_id(x / r, x % r) as usize]).collect();
        let t2 = (0..r).map(|i| remap[md2.t_id(i) as usize]).collect();
        Shared { rank: r, s: [s1, s2], t: [t1, t2] }
    }

    fn s(&self, side: usize, i: usize, j: usize) -> u32 {
        self.s[side][i * self.rank + j]
    }
}

/// Colour refinement on both sides with a shared palette. Returns `None` as
/// soon as the colour histograms differ.
fn refine(shared: &Shared) -> Option<[Vec<u32>; 2]> {
    let r = shared.rank;
    let mut palette: HashMap<(u32, Vec<(u32, u32)>), u32> = HashMap::new();
    let mut colours: [Vec<u32>; 2] = [Vec::new(), Vec::new()];
    // initial colour: unit flag, T[i], S[0][i], multiset of (S[i][j], T[j])
    for side in 0..2 {
        colours[side] = (0..r)
            .map(|i| {
                let mut sig: Vec<(u32, u32)> = (0..r).map(|j| (shared.s(side, i, j), shared.t[side][j])).collect();
                sig.sort_unstable();
                sig.push((u32::from(i == 0), shared.s(side, 0, i)));
                let key = (shared.t[side][i], sig);
                let next = palette.len() as u32;
                *palette.entry(key).or_insert(next)
            })
            .collect();
    }
    let mut classes = count_classes(&colours[0]);
    loop {
        if histogram(&colours[0]) != histogram(&colours[1]) {
            return None;
        }
        let mut palette: HashMap<(u32, Vec<(u32, u32)>), u32> = HashMap::new();
        let mut next_colours: [Vec<u32>; 2] = [Vec::new(), Vec::new()];
        for side in 0..2 {
            next_colours[side] = (0..r)
                .map(|i| {
                    let mut sig: Vec<(u32, u32)> = (0..r).map(|j| (shared.s(side, i, j), colours[side][j])).collect();
                    sig.sort_unstable();
                    let key = (colours[side][i], sig);
                    let next = palette.len() as u32;
                    *palette.entry(key).or_insert(next)
                })
                .collect();
        }
        let next_classes = count_classes(&next_colours[0]);
        colours = next_colours;
        if next_classes == classes {
            if histogram(&colours[0]) != histogram(&colours[1]) {
                return None;
            }
            return Some(colours);
        }
        classes = next_classes;
    }
}

fn count_classes(c: &[u32]) -> usize {
    c.iter().collect::<BTreeSet<_>>().len()
}

fn histogram(c: &[u32]) -> Vec<(u32, usize)> {
    let mut h: HashMap<u32, usize> = HashMap::new();
    for &x in c {
        *h.entry(x).or_insert(0) += 1;
    }
    let mut h: Vec<_> = h.into_iter().collect();
    h.sort_unstable();
    h
}

/// Finds `π` with `π(0) = 0`, `S2[π(i)][π(j)] = S1[i][j]`, `T2[π(i)] = T1[i]`.
/// Returns `None` when no such relabeling exists or the ranks differ.
pub fn find_equivalence(md1: &ModularData, md2: &ModularData) -> Option<Permutation> {
    if md1.rank() != md2.rank() {
        return None;
    }
    let r = md1.rank();
    if r == 0 {
        return Some(Permutation::identity(0));
    }
    let shared = Shared::new(md1, md2);
    let colours = refine(&shared)?;

    let mut cells: HashMap<u32, (Vec<usize>, Vec<usize>)> = HashMap::new();
    for i in 0..r {
        cells.entry(colours[0][i]).or_default().0.push(i);
        cells.entry(colours[1][i]).or_default().1.push(i);
    }
    let mut cell_list: Vec<(Vec<usize>, Vec<usize>)> = cells.into_values().collect();
    cell_list.sort_by_key(|(a, _)| (a.len(), a[0]));
    let order: Vec<usize> = cell_list.iter().flat_map(|(a, _)| a.iter().copied()).collect();
    let mut candidates = vec![Vec::new(); r];
    for (a, b) in &cell_list {
        for &i in a {
            candidates[i] = b.clone();
        }
    }

    let mut pi = vec![usize::MAX; r];
    let mut used = vec![false; r];
    if backtrack(&shared, &order, &candidates, 0, &mut pi, &mut used) {
        let perm = Permutation::new(pi).expect("backtracking builds a bijection");
        // soundness is checked against the original data, not the search state
        assert!(is_equivalence(md1, md2, &perm), "search returned an invalid witness");
        Some(perm)
    } else {
        None
    }
}

fn backtrack(
    shared: &Shared,
    order: &[usize],
    candidates: &[Vec<usize>],
    depth: usize,
    pi: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let i = order[depth];
    for &j in &candidates[i] {
        if used[j] || shared.s(0, i, i) != shared.s(1, j, j) {
            continue;
        }
        let consistent = order[..depth].iter().all(|&k| shared.s(0, i, k) == shared.s(1, j, pi[k]));
        if !consistent {
            continue;
        }
        pi[i] = j;
        used[j] = true;
        if backtrack(shared, order, candidates, depth + 1, pi, used) {
            return true;
        }
        used[j] = false;
        pi[i] = usize::MAX;
    }
    false
}

/// Number of classes under permutation-equivalence, with class members.
pub fn equivalence_classes(data: &[&ModularData]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, md) in data.iter().enumerate() {
        match classes.iter_mut().find(|c| find_equivalence(data[c[0]], md).is_some()) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

fn reduce_exponent(t: i64, n: u64) -> Result<i64, EquivError> {
    let tm = t.rem_euclid(n as i64);
    if (tm as u64).gcd(&n) != 1 {
        return Err(EquivError::NotUnit { t, n });
    }
    Ok(tm)
}

/// The unique `σ̂` with `σ_t(S[i][j]) = S[i][σ̂(j)]`; also checks
/// `σ_t²(T[i]) = T[σ̂(i)]`.
pub fn galois_permutation(md: &ModularData, t: i64) -> Result<Permutation, EquivError> {
    let r = md.rank();
    let n = md.conductor();
    let t = reduce_exponent(t, n)?;
    let lookup: HashMap<&Cyclotomic, u32> = md.values().iter().enumerate().map(|(i, v)| (v, i as u32)).collect();
    // image of each value id under σ_t, or u32::MAX when it leaves the table
    let images: Vec<u32> = md
        .values()
        .iter()
        .map(|v| v.galois_apply(t).map(|w| lookup.get(&w).copied().unwrap_or(u32::MAX)))
        .collect::<Result<_, _>>()?;
    let column = |j: usize| -> Vec<u32> { (0..r).map(|i| md.s_id(i, j)).collect() };
    let mut by_column: HashMap<Vec<u32>, usize> = HashMap::new();
    for j in 0..r {
        if let Some(prev) = by_column.insert(column(j), j) {
            return Err(EquivError::DuplicateColumns(prev, j));
        }
    }
    let mut sigma = Vec::with_capacity(r);
    for j in 0..r {
        let image: Vec<u32> = column(j).into_iter().map(|id| images[id as usize]).collect();
        match by_column.get(&image) {
            Some(&k) => sigma.push(k),
            None => return Err(EquivError::NoMatchingColumn(j)),
        }
    }
    let perm = Permutation::new(sigma)?;
    for i in 0..r {
        let twice = md.t(i).galois_apply(t)?.galois_apply(t)?;
        if &twice != md.t(perm.apply(i)) {
            return Err(EquivError::TIdentity(i));
        }
    }
    Ok(perm)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelabelReport {
    pub source_twist: u64,
    pub target_twist: u64,
    pub exponent: i64,
    pub s_entries_checked: usize,
    pub t_entries_checked: usize,
    pub s_identity: bool,
    pub t_identity: bool,
}

impl RelabelReport {
    pub fn passed(&self) -> bool {
        self.s_identity && self.t_identity
    }
}

/// A representative of `t mod p^a` that is `1` modulo the prime-to-`p` part
/// of `n`, so that `σ` moves only the `p`-power roots of unity.
pub fn p_local_exponent(t: i64, p: u64, n: u64) -> i64 {
    let pa: u64 = factorize(n).into_iter().filter(|&(q, _)| q == p).map(|(q, a)| q.pow(a)).product();
    let m = n / pa;
    if pa == 1 {
        return 1;
    }
    // x ≡ t mod pa, x ≡ 1 mod m
    let t_mod = t.rem_euclid(pa as i64) as u64;
    let inv = mod_inverse(m % pa, pa).expect("coprime parts");
    let k = (t_mod + pa - 1) % pa * inv % pa;
    (1 + m * k) as i64
}

/// The bijection `(g, χ) ↦ (g, σ_t χ)` from the simples of the `u`-twisted
/// double to those of the `u·t`-twisted double, with both identities
/// `S^(v)[p(i)][p(j)] = σ(S^(u)[i][j])`, `T^(v)[p(i)] = σ(T^(u)[i])` checked.
pub fn galois_twist_relabel(group: &Group, u: u64, t: i64) -> Result<(Permutation, RelabelReport), EquivError> {
    let p = match group.kind() {
        GroupKind::Metacyclic { p, .. } => *p,
        _ => return Err(EquivError::NotMetacyclic),
    };
    let tp = reduce_exponent(t, p)?;
    let v = (u * tp as u64) % p;
    let build = |w: u64| -> Result<(ModularData, Vec<SimpleLabel>), EquivError> {
        let omega = inflate(&kappa(p, w)?, group)?;
        Ok(compute_modular_data(&omega)?)
    };
    let src = build(u)?;
    let dst = build(v)?;
    relabel_between(&src, &dst, t, p, u, v)
}

/// Core of [`galois_twist_relabel`] on precomputed data.
pub fn relabel_between(
    src: &(ModularData, Vec<SimpleLabel>),
    dst: &(ModularData, Vec<SimpleLabel>),
    t: i64,
    p: u64,
    u: u64,
    v: u64,
) -> Result<(Permutation, RelabelReport), EquivError> {
    let (md_u, simples_u) = src;
    let (md_v, simples_v) = dst;
    let n = md_u.conductor().lcm(&md_v.conductor()).lcm(&(p * p));
    let exponent = if (t.rem_euclid(n as i64) as u64).gcd(&n) == 1 { t.rem_euclid(n as i64) } else { p_local_exponent(t, p, n) };
    let mut target: HashMap<(usize, Vec<Cyclotomic>), usize> = HashMap::new();
    for s in simples_v {
        target.insert((s.class_index, s.character.values().to_vec()), s.index);
    }
    let mut images = Vec::with_capacity(simples_u.len());
    for s in simples_u {
        let moved: Vec<Cyclotomic> =
            s.character.values().iter().map(|x| x.galois_apply(exponent)).collect::<Result<_, _>>()?;
        match target.get(&(s.class_index, moved)) {
            Some(&k) => images.push(k),
            None => return Err(EquivError::MissingCharacter(s.index)),
        }
    }
    let perm = Permutation::new(images)?;
    let r = md_u.rank();
    let sigma: Vec<Cyclotomic> =
        md_u.values().iter().map(|x| x.galois_apply(exponent)).collect::<Result<_, _>>()?;
    let s_identity = (0..r)
        .into_par_iter()
        .all(|i| (0..r).all(|j| md_v.s(perm.apply(i), perm.apply(j)) == &sigma[md_u.s_id(i, j) as usize]));
    let t_identity = (0..r).all(|i| md_v.t(perm.apply(i)) == &sigma[md_u.t_id(i) as usize]);
    let report = RelabelReport {
        source_twist: u,
        target_twist: v,
        exponent,
        s_entries_checked: r * r,
        t_entries_checked: r,
        s_identity,
        t_identity,
    };
    Ok((perm, report))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleOrbits {
    pub count: usize,
    /// Each parameter is `[u]` or `[u, v]`; orbits sorted by least member.
    pub orbits: Vec<Vec<Vec<u64>>>,
}

/// Orbits of `Z_p` (or `Z_p²` when `pairs`) under multiplication by units.
pub fn cocycle_galois_orbits(p: u64, pairs: bool) -> CocycleOrbits {
    let points: Vec<Vec<u64>> = if pairs {
        (0..p).flat_map(|u| (0..p).map(move |v| vec![u, v])).collect()
    } else {
        (0..p).map(|u| vec![u]).collect()
    };
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut orbits = Vec::new();
    for x in points {
        if seen.contains(&x) {
            continue;
        }
        let orbit: BTreeSet<Vec<u64>> = (1..p).map(|t| x.iter().map(|c| c * t % p).collect()).collect();
        seen.extend(orbit.iter().cloned());
        orbits.push(orbit.into_iter().collect::<Vec<_>>());
    }
    CocycleOrbits { count: orbits.len(), orbits }
}
