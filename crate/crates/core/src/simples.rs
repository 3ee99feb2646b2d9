//! Simple objects of `D_ω(G)`-Mod as pairs (class representative,
//! irreducible `α_g`-projective character of the centralizer).
//!
//! Character tables come from closed forms: linear characters of cyclic
//! centralizers twisted by the trivialization `μ` of `α_g`, characters of
//! the metacyclic group inflated from `Z_p` or induced from `⟨a⟩`, and
//! tensor products for direct products.

use std::sync::Arc;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::cohomology::{solve_mu, transgress_alpha, Cochain2, Cocycle3, CohomologyError, MuContext};
use crate::cyclo::{mod_inverse, Cyclotomic, RootOfUnity};
use crate::groups::{Element, Group, GroupKind, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplesError {
    #[error("the 2-cochain does not match the transgression of ω at {0}")]
    AlphaMismatch(String),
    #[error("{0} is not a conjugacy class representative")]
    NotRepresentative(String),
    #[error("cocycle is not of the supported inflated form on {0}")]
    UnsupportedCocycle(String),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveCharacter {
    domain: Subgroup,
    alpha: Cochain2,
    values: Vec<Cyclotomic>,
    degree: u64,
}

impl ProjectiveCharacter {
    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn alpha(&self) -> &Cochain2 {
        &self.alpha
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Values aligned with `domain().elements`.
    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn eval(&self, x: Element) -> &Cyclotomic {
        &self.values[self.domain.position(x).expect("element outside the character domain")]
    }

    /// `Σ_x χ(x) conj(ψ(x))` over the common domain.
    pub fn inner_product(&self, other: &ProjectiveCharacter) -> Cyclotomic {
        assert_eq!(self.domain, other.domain);
        let mut acc = Cyclotomic::zero();
        for (a, b) in self.values.iter().zip(&other.values) {
            acc += &(a * &b.conjugate());
        }
        acc
    }

    /// For degree-one characters: `χ(x) χ(y) = α(x,y) χ(xy)` on the domain.
    pub fn verify_projective(&self, group: &Group) -> bool {
        if self.degree != 1 {
            return true;
        }
        let els = &self.domain.elements;
        els.iter().all(|&x| {
            els.iter().all(|&y| {
                let lhs = self.eval(x) * self.eval(y);
                let rhs = &self.alpha.eval(x, y).to_cyclotomic() * self.eval(group.compose(x, y));
                lhs == rhs
            })
        })
    }
}

#[derive(Clone, Debug)]
pub struct SimpleLabel {
    pub index: usize,
    pub class_index: usize,
    pub class_rep: Element,
    pub class_size: usize,
    /// Position of the character within its class block.
    pub char_index: usize,
    pub character: Arc<ProjectiveCharacter>,
    /// For simples of a direct product: the indices of the factor simples.
    pub factors: Option<(usize, usize)>,
}

impl SimpleLabel {
    pub fn dimension(&self) -> u64 {
        self.class_size as u64 * self.character.degree
    }
}

pub fn dimension(s: &SimpleLabel) -> u64 {
    s.dimension()
}

fn root(n: u64, e: u64) -> Cyclotomic {
    Cyclotomic::root_of_unity(n, e as i64)
}

/// The ordered `α`-projective characters of `C_G(g)` for a class
/// representative `g`.
pub fn centralizer_characters(
    omega: &Cocycle3,
    g: Element,
    alpha: &Cochain2,
) -> Result<Vec<ProjectiveCharacter>, SimplesError> {
    let group = omega.group();
    let expected = transgress_alpha(omega, g);
    if &expected != alpha {
        return Err(SimplesError::AlphaMismatch(group.format_element(g)));
    }
    match group.kind() {
        GroupKind::Metacyclic { p, q, n } => metacyclic_characters(omega, g, alpha, *p, *q, *n),
        GroupKind::Cyclic { n } => cyclic_characters(alpha, *n),
        GroupKind::Product(..) => {
            let (wl, wr) = omega
                .split_product()
                .ok_or_else(|| SimplesError::UnsupportedCocycle(group.spec()))?;
            let (gl, gr) = group.split(g);
            let cl = centralizer_characters(&wl, gl, &transgress_alpha(&wl, gl))?;
            let cr = centralizer_characters(&wr, gr, &transgress_alpha(&wr, gr))?;
            Ok(tensor_characters(group, alpha, &cl, &cr))
        }
    }
}

fn metacyclic_characters(
    omega: &Cocycle3,
    g: Element,
    alpha: &Cochain2,
    p: u64,
    q: u64,
    n: u64,
) -> Result<Vec<ProjectiveCharacter>, SimplesError> {
    let group = omega.group();
    let domain = alpha.domain().clone();
    let (_, u) = omega.leaf_twist().ok_or_else(|| SimplesError::UnsupportedCocycle(group.spec()))?;
    let (i, j) = group.meta_coords(g);
    let make = |values: Vec<Cyclotomic>, degree| ProjectiveCharacter {
        domain: domain.clone(),
        alpha: alpha.clone(),
        values,
        degree,
    };
    if g == group.identity() {
        let mut out = Vec::new();
        for s in 0..p {
            let values = domain.elements.iter().map(|&x| root(p, s * group.meta_coords(x).1)).collect();
            out.push(make(values, 1));
        }
        let npow: Vec<u64> = (0..p).map(|s| crate::groups::mod_pow(n, s, q)).collect();
        for t in 1..q {
            if npow.iter().map(|np| t * np % q).min() != Some(t) {
                continue;
            }
            let values = domain
                .elements
                .iter()
                .map(|&x| {
                    let (l, jj) = group.meta_coords(x);
                    if jj != 0 {
                        return Cyclotomic::zero();
                    }
                    let mut acc = Cyclotomic::zero();
                    for np in &npow {
                        acc += &root(q, t * np % q * l % q);
                    }
                    acc
                })
                .collect();
            out.push(make(values, p));
        }
        Ok(out)
    } else if j == 0 {
        Ok((0..q)
            .map(|t| make(domain.elements.iter().map(|&x| root(q, t * group.meta_coords(x).0)).collect(), 1))
            .collect())
    } else if i == 0 {
        let k = j;
        let mu = solve_mu(alpha, Some(MuContext { u, k, p }))?;
        let kinv = mod_inverse(k, p).expect("p prime");
        Ok((0..p)
            .map(|m| {
                let m_prime = m * kinv % p;
                let values = domain
                    .elements
                    .iter()
                    .map(|&x| {
                        let xb = group.meta_coords(x).1;
                        mu.eval(x).mul(RootOfUnity::new(p, (m_prime * xb) as i64)).to_cyclotomic()
                    })
                    .collect();
                make(values, 1)
            })
            .collect())
    } else {
        Err(SimplesError::NotRepresentative(group.format_element(g)))
    }
}

fn cyclic_characters(alpha: &Cochain2, n: u64) -> Result<Vec<ProjectiveCharacter>, SimplesError> {
    let domain = alpha.domain().clone();
    let mu = solve_mu(alpha, None)?;
    Ok((0..n)
        .map(|m| {
            let values = domain
                .elements
                .iter()
                .map(|&x| mu.eval(x).mul(RootOfUnity::new(n, (m * x.0 as u64) as i64)).to_cyclotomic())
                .collect();
            ProjectiveCharacter { domain: domain.clone(), alpha: alpha.clone(), values, degree: 1 }
        })
        .collect())
}

fn tensor_characters(
    group: &Group,
    alpha: &Cochain2,
    cl: &[ProjectiveCharacter],
    cr: &[ProjectiveCharacter],
) -> Vec<ProjectiveCharacter> {
    let domain = alpha.domain().clone();
    debug_assert_eq!(domain.order(), cl[0].domain.order() * cr[0].domain.order());
    let mut out = Vec::with_capacity(cl.len() * cr.len());
    for a in cl {
        for b in cr {
            let values = domain
                .elements
                .iter()
                .map(|&x| {
                    let (xl, xr) = group.split(x);
                    a.eval(xl) * b.eval(xr)
                })
                .collect();
            out.push(ProjectiveCharacter { domain: domain.clone(), alpha: alpha.clone(), values, degree: a.degree * b.degree });
        }
    }
    out
}

/// All simples in the deterministic order: classes in
/// [`Group::conjugacy_classes`] order, characters in
/// [`centralizer_characters`] order within each class.
pub fn enumerate_simples(omega: &Cocycle3) -> Result<Vec<SimpleLabel>, SimplesError> {
    let group = omega.group();
    if let GroupKind::Product(..) = group.kind() {
        let (wl, wr) = omega.split_product().ok_or_else(|| SimplesError::UnsupportedCocycle(group.spec()))?;
        let sl = enumerate_simples(&wl)?;
        let sr = enumerate_simples(&wr)?;
        return Ok(product_simples(omega, &sl, &sr));
    }
    let mut out = Vec::new();
    for (ci, class) in group.conjugacy_classes().into_iter().enumerate() {
        let g = class.representative;
        let alpha = transgress_alpha(omega, g);
        for (xi, ch) in centralizer_characters(omega, g, &alpha)?.into_iter().enumerate() {
            out.push(SimpleLabel {
                index: out.len(),
                class_index: ci,
                class_rep: g,
                class_size: class.size(),
                char_index: xi,
                character: Arc::new(ch),
                factors: None,
            });
        }
    }
    Ok(out)
}

fn product_simples(omega: &Cocycle3, sl: &[SimpleLabel], sr: &[SimpleLabel]) -> Vec<SimpleLabel> {
    let group = omega.group();
    let blocks = |s: &[SimpleLabel]| {
        let mut b: Vec<Vec<usize>> = Vec::new();
        for x in s {
            if b.len() <= x.class_index {
                b.resize(x.class_index + 1, Vec::new());
            }
            b[x.class_index].push(x.index);
        }
        b
    };
    let (bl, br) = (blocks(sl), blocks(sr));
    let mut out = Vec::new();
    for (ci, li) in bl.iter().enumerate() {
        for (cj, ri) in br.iter().enumerate() {
            let g = group.pair(sl[li[0]].class_rep, sr[ri[0]].class_rep);
            let alpha = transgress_alpha(omega, g);
            let cl: Vec<ProjectiveCharacter> = li.iter().map(|&i| sl[i].character.as_ref().clone()).collect();
            let cr: Vec<ProjectiveCharacter> = ri.iter().map(|&i| sr[i].character.as_ref().clone()).collect();
            let chars = tensor_characters(group, &alpha, &cl, &cr);
            let class_size = sl[li[0]].class_size * sr[ri[0]].class_size;
            for (xi, ch) in chars.into_iter().enumerate() {
                let (a, b) = (li[xi / ri.len()], ri[xi % ri.len()]);
                out.push(SimpleLabel {
                    index: out.len(),
                    class_index: ci * br.len() + cj,
                    class_rep: g,
                    class_size,
                    char_index: xi,
                    character: Arc::new(ch),
                    factors: Some((a, b)),
                });
            }
        }
    }
    out
}

/// `p + (q-1)/p + q(q-1)/p + p(p-1)`.
pub fn metacyclic_rank(p: u64, q: u64) -> u64 {
    p + (q - 1) / p + q * (q - 1) / p + p * (p - 1)
}

/// `Σ d²` over the simples; equals `|G|²`.
pub fn global_dimension(simples: &[SimpleLabel]) -> u64 {
    simples.iter().map(|s| s.dimension().pow(2)).sum()
}

/// Orthogonality of the characters of one class block: the Gram matrix is
/// `|C|·I`.
pub fn block_is_orthonormal(chars: &[&ProjectiveCharacter]) -> bool {
    let order = chars[0].domain.order() as i64;
    chars.iter().enumerate().all(|(i, a)| {
        chars.iter().enumerate().all(|(j, b)| {
            let ip = a.inner_product(b);
            let want = if i == j { order } else { 0 };
            ip.as_integer().and_then(|v| v.to_i64()) == Some(want)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{inflate, kappa, product_cocycle};

    fn metacyclic_omega(p: u64, q: u64, u: u64) -> Cocycle3 {
        let g = Group::metacyclic(p, q, None).unwrap();
        inflate(&kappa(p, u).unwrap(), &g).unwrap()
    }

    fn blocks(simples: &[SimpleLabel]) -> Vec<Vec<&ProjectiveCharacter>> {
        let mut out: Vec<Vec<&ProjectiveCharacter>> = Vec::new();
        for s in simples {
            if out.len() <= s.class_index {
                out.push(Vec::new());
            }
            out[s.class_index].push(&s.character);
        }
        out
    }

    #[test]
    fn identity_degrees_and_orthogonality() {
        let w = metacyclic_omega(3, 7, 1);
        let g = w.group().clone();
        let chars = centralizer_characters(&w, g.identity(), &transgress_alpha(&w, g.identity())).unwrap();
        assert_eq!(chars.iter().map(|c| c.degree()).collect::<Vec<_>>(), vec![1, 1, 1, 3, 3]);
        let refs: Vec<&ProjectiveCharacter> = chars.iter().collect();
        assert!(block_is_orthonormal(&refs));
        // column orthogonality: Σ_χ |χ(g)|² = |C_G(g)|
        for cls in g.conjugacy_classes() {
            let mut acc = Cyclotomic::zero();
            for c in &chars {
                let v = c.eval(cls.representative);
                acc += &(v * &v.conjugate());
            }
            assert_eq!(acc, Cyclotomic::from_integer((21 / cls.size()) as i64));
        }
    }

    #[test]
    fn twisted_b_characters() {
        let w = metacyclic_omega(5, 11, 1);
        let g = w.group().clone();
        let b = g.meta(0, 1);
        let chars = centralizer_characters(&w, b, &transgress_alpha(&w, b)).unwrap();
        assert_eq!(chars[0].eval(b), &Cyclotomic::root_of_unity(25, 1));
        for c in &chars {
            assert!(c.verify_projective(&g));
        }
        // renumbering for k = 2: m = 1 uses χ_0^{3}
        let b2 = g.meta(0, 2);
        let chars2 = centralizer_characters(&w, b2, &transgress_alpha(&w, b2)).unwrap();
        let mu_b2 = Cyclotomic::root_of_unity(25, 2 * 2);
        let expected = &mu_b2 * &Cyclotomic::root_of_unity(5, 3 * 2);
        assert_eq!(chars2[1].eval(b2), &expected);
    }

    #[test]
    fn alpha_guard() {
        let w = metacyclic_omega(5, 11, 1);
        let g = w.group().clone();
        let wrong = transgress_alpha(&w, g.meta(0, 2));
        assert!(matches!(centralizer_characters(&w, g.meta(0, 1), &wrong), Err(SimplesError::AlphaMismatch(_))));
    }

    #[test]
    fn ranks_and_dimensions() {
        for (p, q) in [(3, 7), (5, 11), (3, 13)] {
            for u in 0..p {
                let s = enumerate_simples(&metacyclic_omega(p, q, u)).unwrap();
                assert_eq!(s.len() as u64, metacyclic_rank(p, q));
                assert_eq!(global_dimension(&s), (p * q).pow(2));
                for block in blocks(&s) {
                    let sum_sq: u64 = block.iter().map(|c| c.degree().pow(2)).sum();
                    assert_eq!(sum_sq as usize, block[0].domain().order());
                    assert!(block_is_orthonormal(&block));
                }
            }
        }
        assert_eq!(metacyclic_rank(5, 11), 49);
        let s = enumerate_simples(&metacyclic_omega(3, 7, 1)).unwrap();
        assert_eq!(s.len(), 25);
        assert_eq!(s[0].dimension(), 1);
        assert_eq!(s[5].dimension(), 3);
        assert_eq!(global_dimension(&enumerate_simples(&metacyclic_omega(5, 11, 2)).unwrap()), 3025);
    }

    #[test]
    fn product_enumeration() {
        let gq = Group::metacyclic(3, 7, None).unwrap();
        let gr = Group::metacyclic(3, 13, None).unwrap();
        let w = product_cocycle(&gq, &gr, 1, 1).unwrap();
        let s = enumerate_simples(&w).unwrap();
        assert_eq!(s.len(), 25 * 65);
        assert_eq!(global_dimension(&s), 819 * 819);
        assert_eq!(s[0].factors, Some((0, 0)));
        // class block of (b, b): 3·3 characters, projective for the product α
        let g = w.group().clone();
        let bb = g.pair(gq.meta(0, 1), gr.meta(0, 1));
        let block: Vec<&SimpleLabel> = s.iter().filter(|x| x.class_rep == bb).collect();
        assert_eq!(block.len(), 9);
        assert!(block.iter().all(|x| x.character.verify_projective(&g)));
    }

    #[test]
    fn cyclic_twisted() {
        let w = kappa(5, 2).unwrap();
        let s = enumerate_simples(&w).unwrap();
        assert_eq!(s.len(), 25);
        let g = w.group().clone();
        assert!(s.iter().all(|x| x.character.verify_projective(&g)));
    }
}
