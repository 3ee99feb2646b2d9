//! Exact modular data `(S, T)` of twisted Drinfeld doubles `D_ω(G)` for
//! metacyclic groups `Z_q ⋊ Z_p`, cyclic groups and their direct products.
//!
//! All arithmetic is exact in cyclotomic fields ([`cyclo`]). The pipeline is
//! [`groups`] → [`cohomology`] (3-cocycles, transgression, `μ`) →
//! [`simples`] (projective centralizer characters) → [`modular`] (S, T and
//! the modular axioms) → [`equiv`] (relabeling equivalence and Galois
//! actions). [`reproduce`] bundles the claim catalog; [`cli`] is the
//! command-line front end.

pub mod cli;
pub mod cohomology;
pub mod cyclo;
pub mod equiv;
pub mod groups;
pub mod modular;
pub mod reproduce;
pub mod simples;
