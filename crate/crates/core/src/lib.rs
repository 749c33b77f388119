//! Forge automorphism-free totally real number fields, attach local data of
//! arithmetic groups to them, and certify that Galois-conjugate data give
//! non-isomorphic lattices.
//!
//! ```
//! use conjforge::field::forge_field;
//!
//! let (field, _certificate) = forge_field(3, 0).unwrap();
//! assert_eq!(field.embeddings().len(), 3);
//! assert!(field.has_trivial_automorphisms());
//! ```
//!
//! The guide in `book/` walks through each layer.

pub mod cli;
pub mod conjugator;
pub mod document;
pub mod field;
pub mod forms;
pub mod perm;
pub mod places;
pub mod poly;

#[cfg(test)]
mod testutil;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/places.md")]
    mod places {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/documents.md")]
    mod documents {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
