//! Discrete flow categories of discrete Morse functions on finite regular CW
//! complexes: Hom posets, the double-nerve spectral sequence and structural checks.

pub mod complex;
pub mod fixtures;
pub mod flowcat;
pub mod homalg;
pub mod io;
pub mod morse;
pub mod random;
pub mod spectral;
pub mod verify;

pub use complex::{Cell, ComplexError, Poset, RegularCwComplex, SimplicialComplex};
pub use flowcat::{FiniteCategory, FlowCategory, FlowError, HomPoset, MorsePath};
pub use homalg::{AbelianGroup, ChainComplex, Coefficients};
pub use morse::{GradientVectorField, MorseError, MorseFunction};
