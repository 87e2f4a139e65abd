//! Discrete information theory over exact-rational joint distributions:
//! Shannon and generalized entropies, I-diagram atoms, common
//! informations, secrecy measures, partial information decomposition,
//! dependence profiles, and camouflage/diffusion constructions.

pub mod builtins;
pub mod camouflage;
pub mod common;
pub mod dist;
pub mod error;
pub mod io;
pub mod pid;
pub mod profiles;
pub mod scalar;
pub mod secrecy;
pub mod shannon;
pub mod symbol;
pub mod util;

pub use builtins::{builtin, Builtin};
pub use common::BoundedValue;
pub use dist::{rat, rat_from_str, JointDistribution, Rat, VariablePartition, VariableSet};
pub use error::{Error, Result};
pub use profiles::{MaxEntResult, Profile};
pub use shannon::InfoDiagram;
pub use symbol::Symbol;
