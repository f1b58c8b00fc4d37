//! Weighted poset metrics on products of finite-field vector spaces.
//!
//! The crate models the block space `H = F_q^{k_1} × … × F_q^{k_n}` whose
//! coordinates are the elements of a finite poset `P`, equipped with a
//! positive rational weight `ω` per coordinate. A vector is weighed by
//! summing `ω` over the order ideal generated by its support.
//!
//! On top of that model it provides exhaustive (desk-scale) decision
//! procedures together with the closed-form characterizations they are
//! checked against:
//!
//! * [`poset`]: ideals, levels, hierarchy, automorphisms and the unique
//!   decomposition property;
//! * [`field`] and [`space`]: prime-field linear algebra, codes, duals and
//!   enumeration of subspaces and linear maps;
//! * [`isometry`]: the structured isometry group and its homomorphism onto
//!   admissible poset automorphisms;
//! * [`mep`]: the extension property, by brute force and by predicate, and
//!   the level-wise canonical form of codes over hierarchical posets;
//! * [`lattice`]: intersection-closed set families, Möbius functions and
//!   minimal non-trivial solutions of the isometry equation;
//! * [`fourier`]: exact character sums, dual partitions, reflexivity and
//!   MacWilliams identities;
//! * [`instance`], [`report`] and [`acceptance`]: the JSON instance format,
//!   report records and the criteria grid used by the CLI.
//!
//! ```
//! use posetmep::poset::{Poset, WeightFunction};
//! use posetmep::space::AmbientSpace;
//!
//! // 1 < 2 < 3 over F_2, one bit per coordinate.
//! let chain = Poset::chain(3);
//! let omega = WeightFunction::ones(3);
//! let space = AmbientSpace::new(2, vec![1, 1, 1]).unwrap();
//! let v = space.vector_from_flat(vec![0, 0, 1]).unwrap();
//! assert_eq!(space.weight(&v, &chain, &omega), 3.into());
//! ```

pub mod acceptance;
pub mod error;
pub mod field;
pub mod fourier;
pub mod instance;
pub mod isometry;
pub mod lattice;
pub mod mep;
pub mod poset;
pub mod report;
pub mod space;

pub use error::{Error, Result};

use serde::Serialize;

/// Exact positive weights.
pub type Rational = num_rational::Ratio<i64>;

/// A yes/no answer with an optional counterexample attached to "no".
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witnessed<W> {
    pub holds: bool,
    pub witness: Option<W>,
}

impl<W> Witnessed<W> {
    pub fn yes() -> Self {
        Witnessed {
            holds: true,
            witness: None,
        }
    }

    pub fn no(witness: W) -> Self {
        Witnessed {
            holds: false,
            witness: Some(witness),
        }
    }
}

/// Enumeration limits. Every exhaustive routine checks the relevant bound up
/// front and fails with [`Error::BoundExceeded`] rather than truncating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest poset whose automorphisms are found by permutation search.
    pub max_aut_elements: usize,
    /// Largest ground set on which a support functional is tabulated.
    pub max_functional_elements: usize,
    /// Largest number of vectors `|H|` that may be listed.
    pub max_vectors: u128,
    /// Largest number of subspaces that may be listed.
    pub max_codes: u128,
    /// Largest number of linear maps `C → H` that may be listed.
    pub max_maps: u128,
    /// Largest isometry group that may be listed.
    pub max_group: u128,
    /// Largest number of `N×N` matrices scanned by the brute-force oracle.
    pub max_matrices: u128,
    /// Largest ground set for a generated subspace lattice.
    pub max_lattice_points: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_aut_elements: 8,
            max_functional_elements: 12,
            max_vectors: 1 << 16,
            max_codes: 1 << 20,
            max_maps: 1 << 20,
            max_group: 1 << 20,
            max_matrices: 1 << 20,
            max_lattice_points: 4096,
        }
    }
}
