//! Exact arithmetic in the unrestricted virtual braid group `UVB_n`, its pure
//! subgroup `UVP_n`, and the machinery built on top of them: normal forms and
//! a solved word problem, the `Aut(UVP_n)` generator engine, outer-automorphism
//! witnesses, totally-symmetric-set analysis, and enumeration of homomorphisms
//! into finite groups.
//!
//! The crate is organized around the splitting `UVB_n ≅ UVP_n ⋊ S_n`:
//!
//! - [`words`] — freely reduced words, the text grammar for generator words,
//!   and Stallings-folding subgroup membership in free groups.
//! - [`perms`] — exact arithmetic in symmetric groups, centralizers, and the
//!   exceptional outer automorphism of `S_6`.
//! - [`uvp`] — canonical forms in `UVP_n` as a direct product of rank-2 free
//!   groups, abelianization, and endomorphism certificates.
//! - [`uvb`] — semidirect-product arithmetic, the rewriter from σ/ρ words to
//!   normal form, and relator verification for presentations.
//! - [`autos`] — endomorphism and automorphism specifications: transvections,
//!   inversions, factor swaps, β/γ, and non-innerness witnesses.
//! - [`census`] — exhaustive and staged enumeration of homomorphisms into
//!   finite groups, conjugation dedup, and totally-symmetric-set reports.
//!
//! A narrative guide with runnable examples lives in `book/`; its chapters are
//! compiled as doctests through the [`book`] module, so the guide can never
//! drift from the API.

pub mod autos;
pub mod book;
pub mod census;
pub mod perms;
pub mod rng;
pub mod uvb;
pub mod uvp;
pub mod words;
