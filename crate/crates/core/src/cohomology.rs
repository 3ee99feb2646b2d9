//! Cochains with root-of-unity values on the groups in scope.
//!
//! Every 3-cocycle here is a product of pullbacks of the standard generator
//! `κ^u(j,k,l) = exp(2πi·u·[l]([j]+[k]-[j+k])/p²)` of `H³(Z_p, ℂ^×)` along a
//! quotient map `G → Z_p`. Cocycles are evaluated on demand rather than
//! tabulated, since `|G|³` is large for the product groups.

use rand::Rng;
use thiserror::Error;

use crate::cyclo::{is_prime, RootOfUnity};
use crate::groups::{Element, Group, GroupKind, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("p = {0} must be an odd prime")]
    NotOddPrime(u64),
    #[error("group {group} has no canonical quotient onto Z_{p}")]
    NoQuotient { group: String, p: u64 },
    #[error("cocycle lives on {found}, expected {expected}")]
    WrongGroup { expected: String, found: String },
    #[error("mismatched primes {0} and {1}")]
    MismatchedPrimes(u64, u64),
    #[error("domain of the 2-cochain is not cyclic")]
    NotCyclic,
    #[error("2-cochain is not a coboundary (fails at {0:?}, {1:?})")]
    NotCoboundary(Element, Element),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// `κ^u` pulled back along the projection reached by descending `path`
/// into the product structure and then taking the leaf's `Z_p` quotient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KappaFactor {
    pub p: u64,
    pub u: u64,
    pub path: Vec<Side>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle3 {
    group: Group,
    factors: Vec<KappaFactor>,
}

/// `[l]([j]+[k]-[j+k])`, which is `0` or `p`.
fn carry(p: u64, j: u64, k: u64, l: u64) -> u64 {
    let (j, k, l) = (j % p, k % p, l % p);
    l * (j + k - (j + k) % p)
}

/// Image of `g` in `Z_p` along `path`, if the leaf has such a quotient.
fn project(group: &Group, path: &[Side], p: u64, g: Element) -> Option<u64> {
    match (group.kind(), path.split_first()) {
        (GroupKind::Product(l, r), Some((side, rest))) => {
            let (gl, gr) = group.split(g);
            match side {
                Side::Left => project(l, rest, p, gl),
                Side::Right => project(r, rest, p, gr),
            }
        }
        (GroupKind::Metacyclic { p: gp, .. }, None) if *gp == p => Some(group.meta_coords(g).1),
        (GroupKind::Cyclic { n }, None) if n % p == 0 => Some(g.0 as u64 % p),
        _ => None,
    }
}

fn has_quotient(group: &Group, path: &[Side], p: u64) -> bool {
    project(group, path, p, group.identity()).is_some()
}

impl Cocycle3 {
    pub fn trivial(group: &Group) -> Self {
        Cocycle3 { group: group.clone(), factors: Vec::new() }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn factors(&self) -> &[KappaFactor] {
        &self.factors
    }

    fn normalized(group: Group, factors: Vec<KappaFactor>) -> Self {
        let mut merged: Vec<KappaFactor> = Vec::new();
        for f in factors {
            match merged.iter_mut().find(|m| m.p == f.p && m.path == f.path) {
                Some(m) => m.u = (m.u + f.u) % m.p,
                None => merged.push(KappaFactor { u: f.u % f.p, ..f }),
            }
        }
        merged.retain(|f| f.u != 0);
        merged.sort_by(|a, b| a.path.cmp_key().cmp(&b.path.cmp_key()).then(a.p.cmp(&b.p)));
        Cocycle3 { group, factors: merged }
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// `ω(x, y, z)`.
    pub fn eval(&self, x: Element, y: Element, z: Element) -> RootOfUnity {
        let mut acc = RootOfUnity::ONE;
        for f in &self.factors {
            let px = project(&self.group, &f.path, f.p, x).expect("validated quotient");
            let py = project(&self.group, &f.path, f.p, y).expect("validated quotient");
            let pz = project(&self.group, &f.path, f.p, z).expect("validated quotient");
            let c = carry(f.p, px, py, pz);
            acc = acc.mul(RootOfUnity::new(f.p * f.p, (f.u * c) as i64));
        }
        acc
    }

    /// Pointwise product; both cocycles must live on the same group.
    pub fn mul(&self, other: &Cocycle3) -> Result<Cocycle3, CohomologyError> {
        if self.group != other.group {
            return Err(CohomologyError::WrongGroup { expected: self.group.spec(), found: other.group.spec() });
        }
        let factors = self.factors.iter().chain(&other.factors).cloned().collect();
        Ok(Self::normalized(self.group.clone(), factors))
    }

    pub fn pow(&self, k: u64) -> Cocycle3 {
        let factors = self.factors.iter().map(|f| KappaFactor { u: f.u * k % f.p, ..f.clone() }).collect();
        Self::normalized(self.group.clone(), factors)
    }

    /// Pullback along `self.group × right → self.group`.
    pub fn inflate_left(&self, right: &Group) -> Cocycle3 {
        let group = Group::direct_product(&self.group, right);
        let factors = self
            .factors
            .iter()
            .map(|f| {
                let mut path = vec![Side::Left];
                path.extend(&f.path);
                KappaFactor { path, ..f.clone() }
            })
            .collect();
        Self::normalized(group, factors)
    }

    /// Pullback along `left × self.group → self.group`.
    pub fn inflate_right(&self, left: &Group) -> Cocycle3 {
        let group = Group::direct_product(left, &self.group);
        let factors = self
            .factors
            .iter()
            .map(|f| {
                let mut path = vec![Side::Right];
                path.extend(&f.path);
                KappaFactor { path, ..f.clone() }
            })
            .collect();
        Self::normalized(group, factors)
    }

    /// Restriction to one factor of a product group, when every factor of
    /// the cocycle is pulled back from that side.
    pub fn split_product(&self) -> Option<(Cocycle3, Cocycle3)> {
        let (l, r) = match self.group.kind() {
            GroupKind::Product(l, r) => (l.as_ref().clone(), r.as_ref().clone()),
            _ => return None,
        };
        let mut lf = Vec::new();
        let mut rf = Vec::new();
        for f in &self.factors {
            let (side, rest) = f.path.split_first()?;
            let g = KappaFactor { path: rest.to_vec(), ..f.clone() };
            match side {
                Side::Left => lf.push(g),
                Side::Right => rf.push(g),
            }
        }
        Some((Self::normalized(l, lf), Self::normalized(r, rf)))
    }

    /// Twist exponent `u` for a leaf group (metacyclic or cyclic) whose
    /// cocycle is an inflation of `κ^u` along its own quotient.
    pub fn leaf_twist(&self) -> Option<(u64, u64)> {
        match self.factors.as_slice() {
            [] => Some((0, 0)),
            [f] if f.path.is_empty() => Some((f.p, f.u)),
            _ => None,
        }
    }

    /// Entrywise Galois action `ζ ↦ ζ^t`; since the values are `p`-th roots
    /// of unity this is `κ^u ↦ κ^{tu}`.
    pub fn galois_apply(&self, t: i64) -> Cocycle3 {
        let factors = self
            .factors
            .iter()
            .map(|f| KappaFactor { u: ((f.u as i64 * t).rem_euclid(f.p as i64)) as u64, ..f.clone() })
            .collect();
        Self::normalized(self.group.clone(), factors)
    }

    /// `dω(g,h,k,l) = 1`.
    pub fn satisfies_cocycle_at(&self, g: Element, h: Element, k: Element, l: Element) -> bool {
        let gr = &self.group;
        let gh = gr.compose(g, h);
        let hk = gr.compose(h, k);
        let kl = gr.compose(k, l);
        let v = self
            .eval(h, k, l)
            .mul(self.eval(gh, k, l).inv())
            .mul(self.eval(g, hk, l))
            .mul(self.eval(g, h, kl).inv())
            .mul(self.eval(g, h, k));
        v.is_one()
    }

    pub fn is_normalized_at(&self, x: Element, y: Element) -> bool {
        let e = self.group.identity();
        self.eval(e, x, y).is_one() && self.eval(x, e, y).is_one() && self.eval(x, y, e).is_one()
    }

    /// Exhaustive cocycle check over `G⁴`; returns the first failing quadruple.
    pub fn verify_exhaustive(&self) -> Result<(), [Element; 4]> {
        let els: Vec<Element> = self.group.elements().collect();
        for &g in &els {
            for &h in &els {
                if !self.is_normalized_at(g, h) {
                    return Err([g, h, self.group.identity(), self.group.identity()]);
                }
                for &k in &els {
                    for &l in &els {
                        if !self.satisfies_cocycle_at(g, h, k, l) {
                            return Err([g, h, k, l]);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn verify_random<R: Rng>(&self, samples: usize, rng: &mut R) -> Result<(), [Element; 4]> {
        let n = self.group.order();
        for _ in 0..samples {
            let q = [(); 4].map(|_| Element(rng.gen_range(0..n)));
            if !self.satisfies_cocycle_at(q[0], q[1], q[2], q[3]) || !self.is_normalized_at(q[0], q[1]) {
                return Err(q);
            }
        }
        Ok(())
    }
}

trait PathKey {
    fn cmp_key(&self) -> Vec<u8>;
}

impl PathKey for Vec<Side> {
    fn cmp_key(&self) -> Vec<u8> {
        self.iter().map(|s| matches!(s, Side::Right) as u8).collect()
    }
}

/// `κ^u` on `Z_p`.
pub fn kappa(p: u64, u: u64) -> Result<Cocycle3, CohomologyError> {
    if p == 2 || !is_prime(p) {
        return Err(CohomologyError::NotOddPrime(p));
    }
    let group = Group::cyclic(p).expect("p > 0");
    Ok(Cocycle3::normalized(group, vec![KappaFactor { p, u, path: Vec::new() }]))
}

/// Pullback of a cocycle on `Z_p` along the canonical quotient `G → Z_p`
/// (`a^i b^j ↦ j` for the metacyclic group, reduction mod `p` for cyclic).
pub fn inflate(c: &Cocycle3, target: &Group) -> Result<Cocycle3, CohomologyError> {
    let p = match c.group.kind() {
        GroupKind::Cyclic { n } => *n,
        _ => return Err(CohomologyError::WrongGroup { expected: "cyclic:p".into(), found: c.group.spec() }),
    };
    if !has_quotient(target, &[], p) {
        return Err(CohomologyError::NoQuotient { group: target.spec(), p });
    }
    let factors = c.factors.iter().map(|f| KappaFactor { path: Vec::new(), ..f.clone() }).collect();
    Ok(Cocycle3::normalized(target.clone(), factors))
}

/// `ω_{uv}` on `G_q × G_r`: the product of the inflations of `κ^u` through
/// the left factor and `κ^v` through the right factor.
pub fn product_cocycle(gq: &Group, gr: &Group, u: u64, v: u64) -> Result<Cocycle3, CohomologyError> {
    let p_of = |g: &Group| match g.kind() {
        GroupKind::Metacyclic { p, .. } => Ok(*p),
        _ => Err(CohomologyError::NoQuotient { group: g.spec(), p: 0 }),
    };
    let (pq, pr) = (p_of(gq)?, p_of(gr)?);
    if pq != pr {
        return Err(CohomologyError::MismatchedPrimes(pq, pr));
    }
    let left = inflate(&kappa(pq, u)?, gq)?.inflate_left(gr);
    let right = inflate(&kappa(pr, v)?, gr)?.inflate_right(gq);
    left.mul(&right)
}

/// The transgressed 2-cochain `α_g(x,y) = ω(g,x,y) ω(x,g,y)⁻¹ ω(x,y,g)` on
/// the centralizer of `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain2 {
    omega: Cocycle3,
    g: Element,
    domain: Subgroup,
}

pub fn transgress_alpha(omega: &Cocycle3, g: Element) -> Cochain2 {
    Cochain2 { omega: omega.clone(), g, domain: omega.group.centralizer(g) }
}

impl Cochain2 {
    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn base_element(&self) -> Element {
        self.g
    }

    pub fn cocycle(&self) -> &Cocycle3 {
        &self.omega
    }

    pub fn eval(&self, x: Element, y: Element) -> RootOfUnity {
        let w = &self.omega;
        let g = self.g;
        w.eval(g, x, y).mul(w.eval(x, g, y).inv()).mul(w.eval(x, y, g))
    }

    /// Whether the cochain is identically one on its domain.
    pub fn is_trivial(&self) -> bool {
        if self.omega.is_trivial() {
            return true;
        }
        let els = &self.domain.elements;
        els.iter().all(|&x| els.iter().all(|&y| self.eval(x, y).is_one()))
    }

    /// `α(x,y) α(xy,z) = α(x,yz) α(y,z)` for all `x,y,z` in the domain.
    pub fn verify_cocycle(&self) -> Result<(), [Element; 3]> {
        let grp = self.omega.group();
        let els = &self.domain.elements;
        for &x in els {
            for &y in els {
                let xy = grp.compose(x, y);
                for &z in els {
                    let lhs = self.eval(x, y).mul(self.eval(xy, z));
                    let rhs = self.eval(x, grp.compose(y, z)).mul(self.eval(y, z));
                    if lhs != rhs {
                        return Err([x, y, z]);
                    }
                }
            }
        }
        Ok(())
    }
}

/// A 1-cochain on a subgroup, tabulated in the subgroup's element order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain1 {
    domain: Subgroup,
    values: Vec<RootOfUnity>,
}

impl Cochain1 {
    pub fn trivial(domain: &Subgroup) -> Self {
        Cochain1 { domain: domain.clone(), values: vec![RootOfUnity::ONE; domain.order()] }
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn eval(&self, x: Element) -> RootOfUnity {
        self.values[self.domain.position(x).expect("element outside the cochain domain")]
    }

    /// Checks `μ(x) μ(y) μ(xy)⁻¹ = α(x,y)` on the whole domain.
    pub fn check_coboundary(&self, alpha: &Cochain2) -> Result<(), CohomologyError> {
        let grp = alpha.omega.group();
        for &x in &self.domain.elements {
            for &y in &self.domain.elements {
                let d = self.eval(x).mul(self.eval(y)).mul(self.eval(grp.compose(x, y)).inv());
                if d != alpha.eval(x, y) {
                    return Err(CohomologyError::NotCoboundary(x, y));
                }
            }
        }
        Ok(())
    }
}

/// Parameters of the closed-form trivialization `μ(b^x) = ζ_{p²}^{k·u·[x]}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MuContext {
    pub u: u64,
    pub k: u64,
    pub p: u64,
}

/// Finds `μ` with `∂μ = α` on a cyclic domain. With a context the closed
/// form is used (the domain generator must be the `b` it refers to);
/// otherwise `μ(c)` is the principal `|C|`-th root of `Π_s α(c, c^s)` and
/// `μ(c^{x+1}) = μ(c) μ(c^x) α(c, c^x)⁻¹`. The result is always checked.
pub fn solve_mu(alpha: &Cochain2, context: Option<MuContext>) -> Result<Cochain1, CohomologyError> {
    let domain = alpha.domain().clone();
    let grp = alpha.omega.group();
    let order = domain.order();
    if alpha.omega.is_trivial() {
        return Ok(Cochain1::trivial(&domain));
    }
    let gen = domain
        .generators
        .iter()
        .copied()
        .find(|&c| grp.element_order(c) as usize == order)
        .or_else(|| domain.elements.iter().copied().find(|&c| grp.element_order(c) as usize == order))
        .ok_or(CohomologyError::NotCyclic)?;
    let mut values = vec![RootOfUnity::ONE; order];
    match context {
        Some(MuContext { u, k, p }) => {
            let mut x = grp.identity();
            for step in 0..order as u64 {
                let pos = domain.position(x).expect("closed under generator");
                values[pos] = RootOfUnity::new(p * p, (k * u * (step % p)) as i64);
                x = grp.compose(x, gen);
            }
        }
        None => {
            let mut total = RootOfUnity::ONE;
            let mut x = grp.identity();
            for _ in 0..order {
                total = total.mul(alpha.eval(gen, x));
                x = grp.compose(x, gen);
            }
            let mu_gen = total.principal_root(order as u64);
            let mut cur = RootOfUnity::ONE;
            let mut x = grp.identity();
            for _ in 0..order {
                values[domain.position(x).expect("closed under generator")] = cur;
                cur = mu_gen.mul(cur).mul(alpha.eval(gen, x).inv());
                x = grp.compose(x, gen);
            }
        }
    }
    let mu = Cochain1 { domain, values };
    mu.check_coboundary(alpha)?;
    Ok(mu)
}

/// Orbits of `x ↦ t²x` (`t` a unit) on `Z_m`.
pub fn square_orbits(m: u64) -> Vec<Vec<u64>> {
    let units: Vec<u64> = (1..m.max(2)).filter(|t| num_integer::gcd(*t, m) == 1).collect();
    let mut seen = vec![false; m as usize];
    let mut out = Vec::new();
    for x in 0..m {
        if seen[x as usize] {
            continue;
        }
        let mut orbit: Vec<u64> = units.iter().map(|t| t * t % m * x % m).collect();
        orbit.push(x);
        orbit.sort_unstable();
        orbit.dedup();
        for &y in &orbit {
            seen[y as usize] = true;
        }
        out.push(orbit);
    }
    out
}

/// Number of orbits of the automorphism action on `H³(Z_p, ℂ^×) ≅ Z_p`.
pub fn h3_orbit_count(p: u64) -> usize {
    square_orbits(p).len()
}

/// Same for `Z_p × Z_q` (`p ≠ q`), where automorphisms act factorwise.
pub fn h3_orbit_count_pair(p: u64, q: u64) -> usize {
    h3_orbit_count(p) * h3_orbit_count(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassificationBranch {
    /// `p` odd, `p | q-1`: the abelian classes plus `p` metacyclic ones.
    OddDividing,
    /// `p` odd, `p ∤ q-1`: only the cyclic group.
    OddNotDividing,
    /// `p = 2`: the cyclic group and the dihedral group.
    Dihedral,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub p: u64,
    pub q: u64,
    pub orbits_p: usize,
    pub orbits_q: usize,
    pub abelian: usize,
    pub nonabelian: usize,
    pub total: usize,
    pub branch: ClassificationBranch,
}

/// Counts pointed fusion categories of dimension `pq` up to equivalence.
pub fn classify_pointed(p: u64, q: u64) -> Result<Classification, CohomologyError> {
    for x in [p, q] {
        if !is_prime(x) {
            return Err(CohomologyError::NotOddPrime(x));
        }
    }
    let (p, q) = (p.min(q), p.max(q));
    let orbits_p = h3_orbit_count(p);
    let orbits_q = h3_orbit_count(q);
    let abelian = h3_orbit_count_pair(p, q);
    let (branch, nonabelian) = if p == 2 {
        // H³ of the dihedral group is Z_2 × Z_q with automorphisms acting
        // on the Z_q part by squares.
        (ClassificationBranch::Dihedral, h3_orbit_count(2) * orbits_q)
    } else if (q - 1) % p == 0 {
        // all classes are inflated from Z_p and automorphisms fix the quotient
        (ClassificationBranch::OddDividing, p as usize)
    } else {
        (ClassificationBranch::OddNotDividing, 0)
    };
    Ok(Classification { p, q, orbits_p, orbits_q, abelian, nonabelian, total: abelian + nonabelian, branch })
}
