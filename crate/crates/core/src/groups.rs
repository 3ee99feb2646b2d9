//! The finite groups in scope: `Z_q ⋊_n Z_p`, cyclic groups and direct
//! products, with conjugacy classes and centralizers in a fixed order.
//!
//! Elements are dense indices. For the metacyclic group `a^i b^j` is stored
//! as `i + q·j`; for a product `(l, r)` is stored as `l·|R| + r`, so element
//! order is lexicographic on pairs.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cyclo::{factorize, is_prime};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("{p} does not divide {q} - 1")]
    NotDividing { p: u64, q: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("n = {n} does not have multiplicative order {p} modulo {q}")]
    WrongOrder { n: u64, p: u64, q: u64 },
    #[error("invalid group spec {0:?}")]
    Parse(String),
    #[error("cyclic group order must be positive")]
    EmptyCyclic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Metacyclic { p: u64, q: u64, n: u64 },
    Cyclic { n: u64 },
    Product(Box<Group>, Box<Group>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    kind: GroupKind,
    order: usize,
    /// `n^j mod q` for the metacyclic family.
    npow: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: Element,
    /// Sorted ascending.
    pub members: Vec<Element>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// A subgroup given by generators and its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub generators: Vec<Element>,
    pub elements: Vec<Element>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn position(&self, g: Element) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }

    pub fn contains(&self, g: Element) -> bool {
        self.position(g).is_some()
    }
}

/// Multiplicative order of `n` modulo `q`, if `gcd(n, q) = 1`.
pub fn multiplicative_order(n: u64, q: u64) -> Option<u64> {
    if q == 1 {
        return Some(1);
    }
    let n = n % q;
    let mut x = n;
    for k in 1..=q {
        if x == 1 {
            return Some(k);
        }
        x = x * n % q;
        if x == 0 {
            return None;
        }
    }
    None
}

impl Group {
    /// `Z_q ⋊_n Z_p`; `n` defaults to the smallest integer `> 1` of
    /// multiplicative order `p` modulo `q`.
    pub fn metacyclic(p: u64, q: u64, n: Option<u64>) -> Result<Group, GroupError> {
        for x in [p, q] {
            if !is_prime(x) {
                return Err(GroupError::NotPrime(x));
            }
        }
        if (q - 1) % p != 0 {
            return Err(GroupError::NotDividing { p, q });
        }
        let n = match n {
            Some(n) => {
                if multiplicative_order(n, q) != Some(p) {
                    return Err(GroupError::WrongOrder { n, p, q });
                }
                n % q
            }
            None => (2..q)
                .find(|&n| multiplicative_order(n, q) == Some(p))
                .ok_or(GroupError::NotDividing { p, q })?,
        };
        let mut npow = Vec::with_capacity(p as usize);
        let mut x = 1;
        for _ in 0..p {
            npow.push(x);
            x = x * n % q;
        }
        Ok(Group { kind: GroupKind::Metacyclic { p, q, n }, order: (p * q) as usize, npow })
    }

    pub fn cyclic(n: u64) -> Result<Group, GroupError> {
        if n == 0 {
            return Err(GroupError::EmptyCyclic);
        }
        Ok(Group { kind: GroupKind::Cyclic { n }, order: n as usize, npow: Vec::new() })
    }

    pub fn direct_product(left: &Group, right: &Group) -> Group {
        Group {
            order: left.order * right.order,
            kind: GroupKind::Product(Box::new(left.clone()), Box::new(right.clone())),
            npow: Vec::new(),
        }
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Element {
        Element(0)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.order).map(Element)
    }

    /// `a^i b^j` in the metacyclic family.
    pub fn meta(&self, i: u64, j: u64) -> Element {
        match self.kind {
            GroupKind::Metacyclic { p, q, .. } => Element(((i % q) + q * (j % p)) as usize),
            _ => panic!("meta() on a non-metacyclic group"),
        }
    }

    /// `(i, j)` with `g = a^i b^j`.
    pub fn meta_coords(&self, g: Element) -> (u64, u64) {
        match self.kind {
            GroupKind::Metacyclic { q, .. } => (g.0 as u64 % q, g.0 as u64 / q),
            _ => panic!("meta_coords() on a non-metacyclic group"),
        }
    }

    pub fn pair(&self, l: Element, r: Element) -> Element {
        match &self.kind {
            GroupKind::Product(_, right) => Element(l.0 * right.order + r.0),
            _ => panic!("pair() on a non-product group"),
        }
    }

    pub fn split(&self, g: Element) -> (Element, Element) {
        match &self.kind {
            GroupKind::Product(_, right) => (Element(g.0 / right.order), Element(g.0 % right.order)),
            _ => panic!("split() on a non-product group"),
        }
    }

    pub fn compose(&self, g: Element, h: Element) -> Element {
        match &self.kind {
            GroupKind::Metacyclic { q, p, .. } => {
                let (i, j) = (g.0 as u64 % q, g.0 as u64 / q);
                let (k, l) = (h.0 as u64 % q, h.0 as u64 / q);
                let x = (i + k * self.npow[j as usize]) % q;
                Element((x + q * ((j + l) % p)) as usize)
            }
            GroupKind::Cyclic { n } => Element((g.0 + h.0) % *n as usize),
            GroupKind::Product(left, right) => {
                let (g1, g2) = self.split(g);
                let (h1, h2) = self.split(h);
                self.pair(left.compose(g1, h1), right.compose(g2, h2))
            }
        }
    }

    pub fn inverse(&self, g: Element) -> Element {
        match &self.kind {
            GroupKind::Metacyclic { q, p, .. } => {
                let (i, j) = (g.0 as u64 % q, g.0 as u64 / q);
                let jinv = (p - j) % p;
                let x = (q - i * self.npow[jinv as usize] % q) % q;
                Element((x + q * jinv) as usize)
            }
            GroupKind::Cyclic { n } => Element((*n as usize - g.0) % *n as usize),
            GroupKind::Product(left, right) => {
                let (g1, g2) = self.split(g);
                self.pair(left.inverse(g1), right.inverse(g2))
            }
        }
    }

    pub fn pow(&self, g: Element, k: u64) -> Element {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.compose(acc, g);
        }
        acc
    }

    /// `g h g⁻¹`.
    pub fn conjugate(&self, g: Element, h: Element) -> Element {
        self.compose(self.compose(g, h), self.inverse(g))
    }

    pub fn commute(&self, g: Element, h: Element) -> bool {
        self.compose(g, h) == self.compose(h, g)
    }

    pub fn element_order(&self, g: Element) -> u64 {
        let mut x = g;
        let mut k = 1;
        while x != self.identity() {
            x = self.compose(x, g);
            k += 1;
        }
        k
    }

    /// Conjugacy classes in the fixed order: identity first; for the
    /// metacyclic group then `a^l` for the minimal member `l` of each
    /// `⟨n⟩`-orbit on `Z_q \ {0}` (ascending), then `b^k`, `k = 1..p-1`;
    /// for products, lexicographic pairs of factor classes.
    pub fn conjugacy_classes(&self) -> Vec<ConjugacyClass> {
        match &self.kind {
            GroupKind::Metacyclic { p, q, .. } => {
                let mut out = vec![ConjugacyClass { representative: self.identity(), members: vec![self.identity()] }];
                for l in 1..*q {
                    let orbit: Vec<u64> = self.npow.iter().map(|np| l * np % q).collect();
                    if orbit.iter().min() == Some(&l) {
                        let mut members: Vec<Element> = orbit.iter().map(|&x| self.meta(x, 0)).collect();
                        members.sort();
                        members.dedup();
                        out.push(ConjugacyClass { representative: self.meta(l, 0), members });
                    }
                }
                for k in 1..*p {
                    let members = (0..*q).map(|j| self.meta(j, k)).collect();
                    out.push(ConjugacyClass { representative: self.meta(0, k), members });
                }
                out
            }
            GroupKind::Cyclic { n } => {
                (0..*n as usize).map(|r| ConjugacyClass { representative: Element(r), members: vec![Element(r)] }).collect()
            }
            GroupKind::Product(left, right) => {
                let lc = left.conjugacy_classes();
                let rc = right.conjugacy_classes();
                let mut out = Vec::with_capacity(lc.len() * rc.len());
                for a in &lc {
                    for b in &rc {
                        let mut members = Vec::with_capacity(a.size() * b.size());
                        for x in &a.members {
                            for y in &b.members {
                                members.push(self.pair(*x, *y));
                            }
                        }
                        out.push(ConjugacyClass { representative: self.pair(a.representative, b.representative), members });
                    }
                }
                out
            }
        }
    }

    /// The exact centralizer `C_G(g)`.
    pub fn centralizer(&self, g: Element) -> Subgroup {
        match &self.kind {
            GroupKind::Metacyclic { p, q, .. } => {
                let (_, j) = self.meta_coords(g);
                if g == self.identity() {
                    Subgroup { generators: vec![self.meta(1, 0), self.meta(0, 1)], elements: self.elements().collect() }
                } else if j == 0 {
                    Subgroup { generators: vec![self.meta(1, 0)], elements: (0..*q).map(|x| self.meta(x, 0)).collect() }
                } else {
                    // generate by the member whose b-exponent is 1
                    let jinv = crate::cyclo::mod_inverse(j, *p).expect("p prime");
                    self.cyclic_subgroup(self.pow(g, jinv))
                }
            }
            GroupKind::Cyclic { .. } => {
                Subgroup { generators: vec![Element(if self.order > 1 { 1 } else { 0 })], elements: self.elements().collect() }
            }
            GroupKind::Product(left, right) => {
                let (g1, g2) = self.split(g);
                let c1 = left.centralizer(g1);
                let c2 = right.centralizer(g2);
                let mut generators: Vec<Element> =
                    c1.generators.iter().map(|&x| self.pair(x, right.identity())).collect();
                generators.extend(c2.generators.iter().map(|&y| self.pair(left.identity(), y)));
                let mut elements = Vec::with_capacity(c1.order() * c2.order());
                for x in &c1.elements {
                    for y in &c2.elements {
                        elements.push(self.pair(*x, *y));
                    }
                }
                Subgroup { generators, elements }
            }
        }
    }

    pub fn cyclic_subgroup(&self, g: Element) -> Subgroup {
        let mut elements = vec![self.identity()];
        let mut x = g;
        while x != self.identity() {
            elements.push(x);
            x = self.compose(x, g);
        }
        elements.sort();
        Subgroup { generators: vec![g], elements }
    }

    /// Human-readable element, e.g. `a^2b`, `(a,b^2)`, `g^3`.
    pub fn format_element(&self, g: Element) -> String {
        match &self.kind {
            GroupKind::Metacyclic { .. } => {
                let (i, j) = self.meta_coords(g);
                let part = |sym: &str, k: u64| match k {
                    0 => String::new(),
                    1 => sym.to_string(),
                    k => format!("{sym}^{k}"),
                };
                let s = format!("{}{}", part("a", i), part("b", j));
                if s.is_empty() {
                    "1".into()
                } else {
                    s
                }
            }
            GroupKind::Cyclic { .. } => match g.0 {
                0 => "1".into(),
                1 => "g".into(),
                k => format!("g^{k}"),
            },
            GroupKind::Product(left, right) => {
                let (l, r) = self.split(g);
                format!("({},{})", left.format_element(l), right.format_element(r))
            }
        }
    }

    /// Canonical spec string, the inverse of [`Group::from_str`].
    pub fn spec(&self) -> String {
        match &self.kind {
            GroupKind::Metacyclic { p, q, n } => format!("pq:{p},{q},n={n}"),
            GroupKind::Cyclic { n } => format!("cyclic:{n}"),
            GroupKind::Product(l, r) => format!("prod:({})x({})", l.spec(), r.spec()),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec())
    }
}

impl FromStr for Group {
    type Err = GroupError;

    /// Parses `pq:5,11`, `pq:5,11,n=3`, `cyclic:35`, `prod:(pq:3,7)x(pq:3,13)`.
    fn from_str(s: &str) -> Result<Group, GroupError> {
        let bad = || GroupError::Parse(s.to_string());
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("pq:") {
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            if parts.len() < 2 || parts.len() > 3 {
                return Err(bad());
            }
            let p: u64 = parts[0].parse().map_err(|_| bad())?;
            let q: u64 = parts[1].parse().map_err(|_| bad())?;
            let n = match parts.get(2) {
                Some(x) => Some(x.strip_prefix("n=").ok_or_else(bad)?.parse().map_err(|_| bad())?),
                None => None,
            };
            return Group::metacyclic(p, q, n);
        }
        if let Some(rest) = s.strip_prefix("cyclic:") {
            return Group::cyclic(rest.trim().parse().map_err(|_| bad())?);
        }
        if let Some(rest) = s.strip_prefix("prod:") {
            let (l, r) = split_product(rest).ok_or_else(bad)?;
            return Ok(Group::direct_product(&l.parse()?, &r.parse()?));
        }
        Err(bad())
    }
}

/// Splits `(X)x(Y)` at the top-level `x`.
fn split_product(s: &str) -> Option<(&str, &str)> {
    let s = s.trim();
    if !s.starts_with('(') {
        return None;
    }
    let mut depth = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    let left = &s[1..i];
                    let rest = s[i + 1..].trim_start().strip_prefix('x')?.trim();
                    let right = rest.strip_prefix('(')?.strip_suffix(')')?;
                    return Some((left, right));
                }
            }
            _ => {}
        }
    }
    None
}

/// Smallest primitive root modulo a prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let phi = p - 1;
    let fs = factorize(phi);
    (2..p).find(|&g| fs.iter().all(|(f, _)| mod_pow(g, phi / f, p) != 1)).expect("prime modulus")
}

pub fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Classes by exhaustive conjugation, sorted for comparison.
    fn brute_classes(g: &Group) -> Vec<Vec<Element>> {
        let mut seen = vec![false; g.order()];
        let mut out = Vec::new();
        for x in g.elements() {
            if seen[x.0] {
                continue;
            }
            let mut cls: Vec<Element> = g.elements().map(|y| g.conjugate(y, x)).collect();
            cls.sort();
            cls.dedup();
            for c in &cls {
                seen[c.0] = true;
            }
            out.push(cls);
        }
        out.sort();
        out
    }

    #[test]
    fn default_n() {
        let g = Group::metacyclic(3, 7, None).unwrap();
        assert_eq!(g.kind(), &GroupKind::Metacyclic { p: 3, q: 7, n: 2 });
        let g = Group::metacyclic(5, 11, None).unwrap();
        assert_eq!(g.kind(), &GroupKind::Metacyclic { p: 5, q: 11, n: 3 });
        assert_eq!(g.order(), 55);
        // enumeration cross-check: 3 is the smallest of order 5 mod 11
        assert!((2..3).all(|n| multiplicative_order(n, 11) != Some(5)));
        assert_eq!(Group::metacyclic(3, 5, None), Err(GroupError::NotDividing { p: 3, q: 5 }));
        assert!(matches!(Group::metacyclic(5, 11, Some(2)), Err(GroupError::WrongOrder { .. })));
    }

    #[test]
    fn relation_and_inverse() {
        let g = Group::metacyclic(3, 7, None).unwrap();
        let (a, b) = (g.meta(1, 0), g.meta(0, 1));
        assert_eq!(g.compose(b, a), g.compose(g.meta(2, 0), b));
        assert_eq!(g.conjugate(b, a), g.meta(2, 0));
        assert_eq!(g.element_order(b), 3);
        for x in g.elements() {
            assert_eq!(g.compose(x, g.inverse(x)), g.identity());
            assert_eq!(g.compose(g.inverse(x), x), g.identity());
        }
    }

    #[test]
    fn classes_metacyclic() {
        let g = Group::metacyclic(3, 7, None).unwrap();
        let cls = g.conjugacy_classes();
        assert_eq!(cls.iter().map(|c| c.size()).collect::<Vec<_>>(), vec![1, 3, 3, 7, 7]);
        let reps: Vec<String> = cls.iter().map(|c| g.format_element(c.representative)).collect();
        assert_eq!(reps, vec!["1", "a", "a^3", "b", "b^2"]);
        let mut ours: Vec<Vec<Element>> = cls.into_iter().map(|c| c.members).collect();
        ours.sort();
        assert_eq!(ours, brute_classes(&g));
        assert_eq!(Group::metacyclic(5, 11, None).unwrap().conjugacy_classes().len(), 7);
        assert_eq!(Group::cyclic(6).unwrap().conjugacy_classes().len(), 6);
    }

    #[test]
    fn centralizers() {
        let g = Group::metacyclic(3, 7, None).unwrap();
        assert_eq!(g.centralizer(g.meta(1, 0)).order(), 7);
        assert_eq!(g.centralizer(g.identity()).order(), 21);
        let c = g.centralizer(g.meta(0, 2));
        assert_eq!(c.order(), 3);
        let brute: Vec<Element> = g.elements().filter(|&x| g.commute(x, g.meta(0, 2))).collect();
        assert_eq!(c.elements, brute);
    }

    #[test]
    fn products() {
        let g1 = Group::metacyclic(3, 7, None).unwrap();
        let g2 = Group::metacyclic(3, 13, None).unwrap();
        let g = Group::direct_product(&g1, &g2);
        assert_eq!(g.order(), 819);
        assert_eq!(g.conjugacy_classes().len(), 35);
        assert_eq!(g.centralizer(g.identity()).order(), 819);
    }

    #[test]
    fn parse_specs() {
        let g: Group = "pq:5,11".parse().unwrap();
        assert_eq!(g.spec(), "pq:5,11,n=3");
        assert_eq!("pq:5,11,n=3".parse::<Group>().unwrap(), g);
        assert_eq!("cyclic:35".parse::<Group>().unwrap().order(), 35);
        let p: Group = "prod:(pq:3,7)x(pq:3,13)".parse().unwrap();
        assert_eq!(p.order(), 819);
        assert_eq!(p.spec().parse::<Group>().unwrap(), p);
        let nested: Group = "prod:(prod:(cyclic:2)x(cyclic:3))x(pq:3,7)".parse().unwrap();
        assert_eq!(nested.order(), 126);
        assert!("pq:3,5".parse::<Group>().is_err());
        assert!("foo".parse::<Group>().is_err());
        assert!("prod:(pq:3,7)(pq:3,13)".parse::<Group>().is_err());
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(3), 2);
    }
}
