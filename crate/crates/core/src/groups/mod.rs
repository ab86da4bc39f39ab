//! Finite groups given by Cayley tables and finite word-length balls of
//! finitely generated infinite groups.
//!
//! Both are exposed through the [`Domain`] trait: elements are dense indices,
//! index 0 is always the identity, and multiplication is partial on balls
//! (a product may leave the window).

mod ball;
mod finite;

pub use ball::{BallDomain, GroupKind, DEFAULT_ELEMENT_CAP};
pub use finite::{FiniteGroup, CATALOG};

use thiserror::Error;

/// Index of a group element inside its domain.
pub type GroupElement = usize;

/// Index of the identity in every domain.
pub const IDENTITY: GroupElement = 0;

/// Read-only view of a group (or a finite window of one).
pub trait Domain: Sync {
    /// Number of elements in the domain.
    fn size(&self) -> usize;

    /// Product `a·b`, or `None` when it falls outside the domain.
    fn mul(&self, a: GroupElement, b: GroupElement) -> Option<GroupElement>;

    /// Inverse of `a`. Domains are always closed under inversion.
    fn inv(&self, a: GroupElement) -> GroupElement;

    /// Short label for reports.
    fn name(&self) -> String;

    /// `true` when every product stays inside the domain.
    fn is_closed(&self) -> bool;

    /// Rank of the free abelian part used by additive maps and lattice
    /// characters. Zero for finite groups.
    fn abelian_rank(&self) -> usize {
        0
    }

    /// Image of `a` in `Z^abelian_rank`.
    fn abelian_coords(&self, _a: GroupElement) -> Vec<i64> {
        Vec::new()
    }

    /// Word length with respect to the domain's generating set, if it has one.
    fn word_length(&self, _a: GroupElement) -> Option<usize> {
        None
    }

    /// Product of several elements, left to right.
    fn mul_all(&self, elems: &[GroupElement]) -> Option<GroupElement> {
        elems
            .iter()
            .try_fold(IDENTITY, |acc, &e| self.mul(acc, e))
    }

    /// `a·a`.
    fn square(&self, a: GroupElement) -> Option<GroupElement> {
        self.mul(a, a)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("unknown group spec `{0}`")]
    UnknownSpec(String),
    #[error("parameter out of supported range in `{spec}`: {reason}")]
    OutOfRange { spec: String, reason: String },
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("ball of radius {radius} exceeds the element cap of {cap}")]
    BallTooLarge { radius: usize, cap: usize },
    #[error("invalid ball file: {0}")]
    InvalidBall(String),
}
