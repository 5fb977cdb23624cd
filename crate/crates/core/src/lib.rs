//! Exact intersection rings of blowup towers over `P3`, `P2xP1` and
//! `P1xP1xP1`, with the per-step checks that rule out automorphisms of
//! positive entropy.

pub mod cli;
pub mod conditions;
pub mod error;
pub mod eta;
pub mod ring;
pub mod spectral;
pub mod tower;

pub use error::{Error, Result};
pub use ring::{int, lincomb, rat, CurveClass, DivisorClass, GradedClass, IntersectionRing, Rational, VarietyId};
pub use tower::{BaseKind, BlowupStep, Tower, Variety};
