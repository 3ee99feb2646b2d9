//! Exact arithmetic in cyclotomic fields.
//!
//! A [`Cyclotomic`] is stored as a sparse sum `Σ c_e ζ_n^e` with rational
//! coefficients, kept in canonical form: the conductor `n` is minimal and the
//! exponents belong to the Zumbroich basis of `ℚ(ζ_n)`. Two values are equal
//! exactly when their canonical term lists coincide, so `Eq` and `Hash` are
//! structural.
//!
//! The Zumbroich basis of `ℚ(ζ_n)` is the tensor product of the bases of the
//! prime-power parts. Writing the exponent `e` through its CRT components
//! `i_p = e · (n/p^a)^{-1} mod p^a`, a root `ζ_n^e` is a basis element iff for
//! every odd `p` the leading base-`p` digit of `i_p` is nonzero, and for
//! `p = 2` the leading binary digit of `i_2` is zero.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("Galois exponent {t} is not a unit modulo the conductor {n}")]
    NotCoprime { t: i64, n: u64 },
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("invalid cyclotomic encoding: {0}")]
    Encoding(String),
}

/// Coefficient types the canonicalizer can work over.
pub(crate) trait Coefficient: Clone + Zero + PartialEq + Neg<Output = Self> {
    fn add_to(&mut self, other: &Self);
}

impl Coefficient for i128 {
    fn add_to(&mut self, other: &Self) {
        *self += *other;
    }
}

impl Coefficient for BigRational {
    fn add_to(&mut self, other: &Self) {
        *self += other;
    }
}

/// Trial-division factorization, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut a = 0;
            while n % d == 0 {
                n /= d;
                a += 1;
            }
            out.push((d, a));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).len() == 1 && factorize(n)[0].1 == 1
}

/// Modular inverse of `a` modulo `m` (`m ≥ 1`), if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a as i128 % m as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

fn merge_terms<C: Coefficient>(mut terms: Vec<(u64, C)>) -> Vec<(u64, C)> {
    terms.sort_unstable_by_key(|t| t.0);
    let mut out: Vec<(u64, C)> = Vec::with_capacity(terms.len());
    for (e, c) in terms {
        match out.last_mut() {
            Some(last) if last.0 == e => last.1.add_to(&c),
            _ => {
                if let Some(last) = out.last() {
                    if last.1.is_zero() {
                        out.pop();
                    }
                }
                out.push((e, c));
            }
        }
    }
    if out.last().is_some_and(|l| l.1.is_zero()) {
        out.pop();
    }
    out
}

struct PrimePart {
    p: u64,
    pa: u64,
    high: u64,
    inv: u64,
}

impl PrimePart {
    fn new(n: u64, p: u64, a: u32) -> Self {
        let pa = p.pow(a);
        let inv = mod_inverse((n / pa) % pa, pa).expect("coprime cofactor");
        PrimePart { p, pa, high: pa / p, inv }
    }

    fn component(&self, e: u64) -> u64 {
        ((e % self.pa) as u128 * self.inv as u128 % self.pa as u128) as u64
    }

    fn is_basis(&self, e: u64) -> bool {
        let i = self.component(e);
        if self.p == 2 {
            i < self.high
        } else {
            i >= self.high
        }
    }
}

/// Rewrites `Σ c_e ζ_n^e` into canonical form (minimal conductor, Zumbroich
/// basis). Exponents need not be reduced modulo `n` on input.
pub(crate) fn canonicalize<C: Coefficient>(mut n: u64, terms: Vec<(u64, C)>) -> (u64, Vec<(u64, C)>) {
    assert!(n > 0, "conductor must be positive");
    let mut terms: Vec<(u64, C)> = terms.into_iter().map(|(e, c)| (e % n, c)).collect();
    if n % 4 == 2 {
        let m = n / 2;
        terms = terms
            .into_iter()
            .map(|(e, c)| if e % 2 == 0 { (e / 2, c) } else { (((e + m) / 2) % m, -c) })
            .collect();
        n = m;
    }
    let mut terms = merge_terms(terms);
    for (p, a) in factorize(n) {
        let part = PrimePart::new(n, p, a);
        if terms.iter().all(|(e, _)| part.is_basis(*e)) {
            continue;
        }
        let step = n / p;
        let mut next = Vec::with_capacity(terms.len() * p as usize);
        for (e, c) in terms {
            if part.is_basis(e) {
                next.push((e, c));
            } else if p == 2 {
                next.push(((e + step) % n, -c));
            } else {
                let neg = -c;
                for k in 1..p {
                    next.push(((e + k * step) % n, neg.clone()));
                }
            }
        }
        terms = merge_terms(next);
    }
    reduce_conductor(n, terms)
}

fn reduce_conductor<C: Coefficient>(mut n: u64, mut terms: Vec<(u64, C)>) -> (u64, Vec<(u64, C)>) {
    if terms.is_empty() {
        return (1, terms);
    }
    'outer: loop {
        for (p, a) in factorize(n) {
            let part = PrimePart::new(n, p, a);
            if p == 2 || a >= 2 {
                let divisor = if p == 2 && a == 2 { 4 } else { p };
                let ok = terms.iter().all(|(e, _)| {
                    let i = part.component(*e);
                    if p == 2 && a == 2 {
                        i == 0
                    } else {
                        i % p == 0
                    }
                });
                if ok {
                    n /= divisor;
                    terms = terms.into_iter().map(|(e, c)| (e / divisor, c)).collect();
                    terms.sort_unstable_by_key(|t| t.0);
                    continue 'outer;
                }
            } else if let Some(reduced) = reduce_squarefree_prime(n, p, &terms) {
                n /= p;
                terms = reduced;
                continue 'outer;
            }
        }
        break;
    }
    debug_assert!(n != 1 || terms.iter().all(|t| t.0 == 0));
    (n, terms)
}

/// For `p ∥ n`, an element lies in `ℚ(ζ_{n/p})` iff its coefficients are
/// constant along every fibre of `e ↦ e mod n/p` (all `p-1` members present).
fn reduce_squarefree_prime<C: Coefficient>(n: u64, p: u64, terms: &[(u64, C)]) -> Option<Vec<(u64, C)>> {
    let m = n / p;
    let mut fibres: HashMap<u64, Vec<&C>> = HashMap::new();
    for (e, c) in terms {
        fibres.entry(e % m).or_default().push(c);
    }
    let inv_p = mod_inverse(p % m.max(1), m.max(1)).unwrap_or(0);
    let mut out = Vec::with_capacity(fibres.len());
    for (r, cs) in fibres {
        if cs.len() as u64 != p - 1 || cs.iter().any(|c| *c != cs[0]) {
            return None;
        }
        let e = if m == 1 { 0 } else { (r as u128 * inv_p as u128 % m as u128) as u64 };
        out.push((e, -cs[0].clone()));
    }
    out.sort_unstable_by_key(|t| t.0);
    Some(out)
}

/// An exact element of `ℚ(ζ_n)` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cyclotomic {
    n: u64,
    terms: Vec<(u64, BigRational)>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { n: 1, terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_integer(k: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(k)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        if r.is_zero() {
            Self::zero()
        } else {
            Cyclotomic { n: 1, terms: vec![(0, r)] }
        }
    }

    pub fn from_fraction(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// Canonical form of `Σ c_e ζ_n^e`.
    pub fn from_terms(n: u64, terms: Vec<(u64, BigRational)>) -> Result<Self, CycloError> {
        if n == 0 {
            return Err(CycloError::ZeroConductor);
        }
        let (n, terms) = canonicalize(n, terms);
        Ok(Cyclotomic { n, terms })
    }

    /// `exp(2πi·k/n)`.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        assert!(n > 0, "conductor must be positive");
        let e = k.rem_euclid(n as i64) as u64;
        let (n, terms) = canonicalize(n, vec![(e, BigRational::one())]);
        Cyclotomic { n, terms }
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    /// Canonical `(exponent, coefficient)` pairs, exponents ascending.
    pub fn terms(&self) -> &[(u64, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.n == 1 && self.terms.len() == 1 && self.terms[0].1.is_one()
    }

    /// The rational value, if this element lies in `ℚ`.
    pub fn as_rational(&self) -> Option<BigRational> {
        match (self.n, self.terms.len()) {
            (_, 0) => Some(BigRational::zero()),
            (1, 1) => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    /// The integer value, if this element lies in `ℤ`.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    fn lifted(&self, n: u64) -> impl Iterator<Item = (u64, BigRational)> + '_ {
        let f = n / self.n;
        self.terms.iter().map(move |(e, c)| (e * f, c.clone()))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Cyclotomic { n: self.n, terms: self.terms.iter().map(|(e, c)| (*e, c * r)).collect() }
    }

    /// Applies the automorphism `ζ_n ↦ ζ_n^t`.
    pub fn galois_apply(&self, t: i64) -> Result<Self, CycloError> {
        let n = self.n;
        let tr = t.rem_euclid(n as i64) as u64;
        if n > 1 && tr.gcd(&n) != 1 {
            return Err(CycloError::NotCoprime { t, n });
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| ((*e as u128 * tr as u128 % n as u128) as u64, c.clone()))
            .collect();
        let (n, terms) = canonicalize(n, terms);
        Ok(Cyclotomic { n, terms })
    }

    pub fn conjugate(&self) -> Self {
        if self.n == 1 {
            return self.clone();
        }
        self.galois_apply(self.n as i64 - 1).expect("n-1 is a unit")
    }

    /// Numerical value as `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (e, c) in &self.terms {
            let x = c.to_f64().unwrap_or(f64::NAN);
            let ang = 2.0 * std::f64::consts::PI * (*e as f64) / (self.n as f64);
            re += x * ang.cos();
            im += x * ang.sin();
        }
        (re, im)
    }

    /// Exact integer combination of `ζ_n^e` at conductor `n` (a multiple of
    /// this element's conductor), after multiplying by `scale`. `None` if the
    /// scaled coefficients are not integers fitting in `i128`.
    pub fn to_root_sum(&self, n: u64, scale: &BigInt) -> Option<RootSum> {
        if n % self.n != 0 {
            return None;
        }
        let f = n / self.n;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let v = c * BigRational::from_integer(scale.clone());
            if !v.is_integer() {
                return None;
            }
            terms.push((e * f, v.to_integer().to_i128()?));
        }
        Some(RootSum { n, terms })
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()))
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let n = lcm(self.n, rhs.n);
        let terms: Vec<_> = self.lifted(n).chain(rhs.lifted(n)).collect();
        let (n, terms) = canonicalize(n, terms);
        Cyclotomic { n, terms }
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        *self = &*self + rhs;
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { n: self.n, terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() || rhs.is_zero() {
            return Cyclotomic::zero();
        }
        let n = lcm(self.n, rhs.n);
        let (fa, fb) = (n / self.n, n / rhs.n);
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                terms.push(((ea * fa + eb * fb) % n, ca * cb));
            }
        }
        let (n, terms) = canonicalize(n, terms);
        Cyclotomic { n, terms }
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl fmt::Display for Cyclotomic {
    /// GAP-style rendering, e.g. `2+E(8)+E(8)^7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx > 0 {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            } else if neg {
                write!(f, "-")?;
            }
            let root = match (self.n, e) {
                (1, _) => None,
                (_, 0) => None,
                (n, 1) => Some(format!("E({n})")),
                (n, e) => Some(format!("E({n})^{e}")),
            };
            match root {
                None => write!(f, "{abs}")?,
                Some(r) if abs.is_one() => write!(f, "{r}")?,
                Some(r) => write!(f, "{abs}*{r}")?,
            }
        }
        Ok(())
    }
}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but total order on canonical forms (conductor, then terms).
impl Ord for Cyclotomic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for (a, b) in self.terms.iter().zip(&other.terms) {
                let o = a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1));
                if o != Ordering::Equal {
                    return o;
                }
            }
            self.terms.len().cmp(&other.terms.len())
        })
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    e: u64,
    num: serde_json::Value,
    den: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct CycloJson {
    n: u64,
    terms: Vec<TermJson>,
}

fn bigint_to_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

fn bigint_from_json(v: &serde_json::Value) -> Result<BigInt, CycloError> {
    match v {
        serde_json::Value::Number(num) => num
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| CycloError::Encoding(format!("non-integer coefficient {num}"))),
        serde_json::Value::String(s) => {
            s.parse().map_err(|_| CycloError::Encoding(format!("bad integer {s:?}")))
        }
        other => Err(CycloError::Encoding(format!("bad integer {other}"))),
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let json = CycloJson {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson { e: *e, num: bigint_to_json(c.numer()), den: bigint_to_json(c.denom()) })
                .collect(),
        };
        json.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let json = CycloJson::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(json.terms.len());
        for t in json.terms {
            let num = bigint_from_json(&t.num).map_err(de::Error::custom)?;
            let den = bigint_from_json(&t.den).map_err(de::Error::custom)?;
            if !den.is_positive() {
                return Err(de::Error::custom("denominator must be positive"));
            }
            terms.push((t.e, BigRational::new(num, den)));
        }
        Cyclotomic::from_terms(json.n, terms).map_err(de::Error::custom)
    }
}

/// Integer combination of `n`-th roots of unity, not necessarily canonical.
/// Used for bulk accumulation where intermediate canonicalization would
/// dominate the cost.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootSum {
    pub n: u64,
    pub terms: Vec<(u64, i128)>,
}

impl RootSum {
    pub fn conjugate(&self) -> RootSum {
        let n = self.n;
        RootSum { n, terms: self.terms.iter().map(|(e, c)| ((n - e % n) % n, *c)).collect() }
    }

    /// Appends `factor · self · other` to `acc` (all at conductor `self.n`).
    pub fn mul_into(&self, other: &RootSum, factor: i128, acc: &mut Vec<(u64, i128)>) {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                acc.push(((ea + eb) % n, factor * ca * cb));
            }
        }
    }
}

/// Canonical form with integer coefficients; exact hashable key for
/// interning values computed through [`RootSum`] accumulation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntCyclotomic {
    n: u64,
    terms: Vec<(u64, i128)>,
}

impl IntCyclotomic {
    pub fn canonical(n: u64, terms: Vec<(u64, i128)>) -> Self {
        let (n, terms) = canonicalize(n, terms);
        IntCyclotomic { n, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Divides by a positive integer, returning the reduced
    /// `(numerator, denominator)` so that equal quotients give equal keys.
    pub fn over(mut self, den: i128) -> (IntCyclotomic, i128) {
        assert!(den > 0);
        let g = self.terms.iter().fold(den, |g, (_, c)| g.gcd(c));
        if g > 1 {
            for t in &mut self.terms {
                t.1 /= g;
            }
        }
        (self, den / g)
    }

    pub fn to_cyclotomic(&self, den: i128) -> Cyclotomic {
        let d = BigInt::from(den);
        Cyclotomic {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, BigRational::new(BigInt::from(*c), d.clone())))
                .collect(),
        }
    }
}

/// `Φ_n` as integer coefficients (constant term first), computed as
/// `(x^n - 1) / Π_{d | n, d < n} Φ_d`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    let mut cache: HashMap<u64, Vec<BigInt>> = HashMap::new();
    cyclotomic_polynomial_cached(n, &mut cache)
}

fn cyclotomic_polynomial_cached(n: u64, cache: &mut HashMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial_cached(d, cache);
            num = div_monic(&num, &phi_d);
        }
    }
    cache.insert(n, num.clone());
    num
}

/// Exact quotient of `a` by the monic polynomial `b`.
fn div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|r| r.is_zero()), "inexact cyclotomic division");
    q
}

/// Root of unity `exp(2πi·exp/order)`, kept reduced (`gcd(exp, order) = 1`,
/// or `exp = 0, order = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    order: u64,
    exp: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { order: 1, exp: 0 };

    pub fn new(order: u64, exp: i64) -> Self {
        assert!(order > 0);
        let e = exp.rem_euclid(order as i64) as u64;
        let g = e.gcd(&order);
        if e == 0 {
            Self::ONE
        } else {
            RootOfUnity { order: order / g, exp: e / g }
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0
    }

    pub fn mul(self, other: RootOfUnity) -> RootOfUnity {
        let n = lcm(self.order, other.order);
        let e = self.exp * (n / self.order) + other.exp * (n / other.order);
        RootOfUnity::new(n, (e % n) as i64)
    }

    pub fn inv(self) -> RootOfUnity {
        RootOfUnity::new(self.order, -(self.exp as i64))
    }

    pub fn pow(self, k: i64) -> RootOfUnity {
        let e = (self.exp as i128 * k as i128).rem_euclid(self.order as i128);
        RootOfUnity::new(self.order, e as i64)
    }

    /// The principal `k`-th root: `exp(2πi·exp/(order·k))`.
    pub fn principal_root(self, k: u64) -> RootOfUnity {
        RootOfUnity::new(self.order * k, self.exp as i64)
    }

    pub fn galois(self, t: i64) -> RootOfUnity {
        self.pow(t)
    }

    pub fn to_cyclotomic(self) -> Cyclotomic {
        Cyclotomic::root_of_unity(self.order, self.exp as i64)
    }

    /// Exponent of this root at conductor `n` (a multiple of its order).
    pub fn exponent_at(self, n: u64) -> Option<u64> {
        (n % self.order == 0).then(|| self.exp * (n / self.order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn float_close(a: (f64, f64), b: (f64, f64)) -> bool {
        (a.0 - b.0).abs() < 1e-10 && (a.1 - b.1).abs() < 1e-10
    }

    #[test]
    fn root_of_unity_identities() {
        assert!(Cyclotomic::root_of_unity(1, 0).is_one());
        assert_eq!(Cyclotomic::root_of_unity(4, 2), Cyclotomic::from_integer(-1));
        assert_eq!(Cyclotomic::root_of_unity(2, 1), Cyclotomic::from_integer(-1));
        assert_eq!(Cyclotomic::root_of_unity(6, 2), Cyclotomic::root_of_unity(3, 1));
        let s = &Cyclotomic::root_of_unity(3, 1) + &Cyclotomic::root_of_unity(3, 2);
        assert_eq!(s, Cyclotomic::from_integer(-1));
        assert!(float_close(s.to_complex(), (-1.0, 0.0)));
    }

    #[test]
    fn ring_examples() {
        let z5 = Cyclotomic::root_of_unity(5, 1);
        assert!((&z5 * &Cyclotomic::root_of_unity(5, 4)).is_one());
        assert!(Cyclotomic::root_of_unity(3, 1).scale(&BigRational::zero()).is_zero());
        let one = Cyclotomic::one();
        let a = &one + &Cyclotomic::root_of_unity(8, 1);
        let b = &one + &Cyclotomic::root_of_unity(8, 7);
        let prod = &a * &b;
        let expected = &(&Cyclotomic::from_integer(2) + &Cyclotomic::root_of_unity(8, 1))
            + &Cyclotomic::root_of_unity(8, 7);
        assert_eq!(prod, expected);
        // float oracle: |1+ζ8|² = 2 + √2
        let v = prod.to_complex();
        assert!((v.0 - (2.0 + 2f64.sqrt())).abs() < 1e-10 && v.1.abs() < 1e-10);
    }

    #[test]
    fn galois_and_conjugate() {
        let z5 = Cyclotomic::root_of_unity(5, 1);
        assert_eq!(z5.galois_apply(2).unwrap(), Cyclotomic::root_of_unity(5, 2));
        assert_eq!(z5.galois_apply(1).unwrap(), z5);
        assert_eq!(Cyclotomic::root_of_unity(7, 1).conjugate(), Cyclotomic::root_of_unity(7, 6));
        assert!(matches!(z5.galois_apply(5), Err(CycloError::NotCoprime { .. })));
        assert!(Cyclotomic::from_integer(3).galois_apply(4).is_ok());
    }

    #[test]
    fn zero_test_minimal_relation() {
        let mut s = Cyclotomic::zero();
        for k in 0..3 {
            s += &Cyclotomic::root_of_unity(3, k);
        }
        assert!(s.is_zero());
        let x = &Cyclotomic::root_of_unity(12, 5) + &Cyclotomic::from_fraction(3, 7);
        assert!((&x + &(-&x)).is_zero());
    }

    #[test]
    fn minimal_conductor() {
        // ζ_9^3 = ζ_3, √-3 = ζ_3 - ζ_3² has conductor 3, i = ζ_4
        assert_eq!(Cyclotomic::root_of_unity(9, 3).conductor(), 3);
        assert_eq!(Cyclotomic::root_of_unity(8, 2).conductor(), 4);
        let gauss = &Cyclotomic::root_of_unity(3, 1) - &Cyclotomic::root_of_unity(3, 2);
        assert_eq!(gauss.conductor(), 3);
        // ζ_5 + ζ_5^4 is real but still needs conductor 5
        let r = &Cyclotomic::root_of_unity(5, 1) + &Cyclotomic::root_of_unity(5, 4);
        assert_eq!(r.conductor(), 5);
        assert_eq!(r, r.conjugate());
        // ζ_15 * ζ_15^-... collapse to rationals
        let p = &Cyclotomic::root_of_unity(15, 4) * &Cyclotomic::root_of_unity(15, 11);
        assert!(p.is_one());
    }

    #[test]
    fn cyclotomic_polynomials() {
        let to_i = |v: Vec<BigInt>| v.into_iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(to_i(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(to_i(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(to_i(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(105).len() - 1, 48);
        assert_eq!(to_i(cyclotomic_polynomial(105))[7], -2);
    }

    #[test]
    fn json_round_trip() {
        let x = &Cyclotomic::root_of_unity(25, 3) + &Cyclotomic::from_fraction(-5, 11);
        let s = serde_json::to_string(&x).unwrap();
        let y: Cyclotomic = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert!(s.starts_with("{\"n\":25,\"terms\":[{\"e\":"));
    }

    #[test]
    fn root_sum_path_agrees() {
        let x = &Cyclotomic::root_of_unity(9, 1) + &Cyclotomic::root_of_unity(7, 3);
        let y = Cyclotomic::root_of_unity(63, 5);
        let rx = x.to_root_sum(63, &BigInt::one()).unwrap();
        let ry = y.to_root_sum(63, &BigInt::one()).unwrap();
        let mut acc = Vec::new();
        rx.mul_into(&ry, 3, &mut acc);
        let (num, den) = IntCyclotomic::canonical(63, acc).over(6);
        assert_eq!(num.to_cyclotomic(den), (&x * &y).scale(&BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn root_of_unity_type() {
        let a = RootOfUnity::new(25, 5);
        assert_eq!(a, RootOfUnity::new(5, 1));
        assert_eq!(a.mul(a.inv()), RootOfUnity::ONE);
        assert_eq!(RootOfUnity::new(5, 2).principal_root(5), RootOfUnity::new(25, 2));
        assert_eq!(a.to_cyclotomic(), Cyclotomic::root_of_unity(5, 1));
    }
}
