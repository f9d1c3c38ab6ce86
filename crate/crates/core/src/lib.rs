//! Finite semihypergroups over exact rational arithmetic.
//!
//! A semihypergroup is a set `K` with a bilinear, associative convolution on
//! finitely supported measures such that the product of two point masses is a
//! probability measure. This crate stores such structures as tables of
//! measures, checks the axioms exhaustively, builds the standard examples
//! (semigroups, coset and double coset spaces, orbit spaces, a three-element
//! family) and works with free products of them.

pub mod constructions;
pub mod freeprod;
pub mod group;
pub mod measure;
pub mod rational;
pub mod shg;

pub use constructions::{ConstructionError, ThreeElementParams};
pub use freeprod::{FreeProduct, FreeProductError, IdentityMode, Letter, UniversalLift, Word};
pub use group::{FiniteGroup, GroupAction, GroupError};
pub use measure::{convolve_extend, subset_convolution, Measure, MeasureError, PointConvolution};
pub use rational::{ParseRationalError, Rational};
pub use shg::{
    AxiomReport, Elem, FiniteSemihypergroup, GammaLift, HomError, Homomorphism, StructureError,
    Violation,
};
