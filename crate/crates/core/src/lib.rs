//! Spin characters of the double covers of wreath products `(Γ×ℤ₂)ⁿ⋊Sₙ`.
//!
//! Everything is exact: rationals and cyclotomic numbers from [`scalars`],
//! finite groups at character-table level from [`gamma`], and the Fock space
//! and twisted vertex operator machinery that produces the spin super
//! character tables in [`chartable`].

pub mod chartable;
pub mod checks;
pub mod classfun;
pub mod error;
pub mod fock;
pub mod gamma;
pub mod lattice;
pub mod oracle;
pub mod partitions;
pub mod report;
pub mod scalars;
pub mod vertex;

pub use chartable::{build_table, CharRow, CharTable, ModuleType};
pub use classfun::{SpinAlgebra, SpinClassFun};
pub use error::{ChartableError, FockError, GammaError, OracleError, ScalarError};
pub use fock::{FockMonomial, FockSpace, FockVector};
pub use gamma::{builtin, load_gamma, AffineType, Builtin, ConcreteGroup, GammaData, VirtualChar};
pub use lattice::{F2Data, LatticeVec, Phase};
pub use oracle::{ClassEnumeration, OracleClass, PinWord, SignedType, SpinElement};
pub use partitions::{MultiPartition, Partition, PartitionKind};
pub use report::{CheckReport, Status};
pub use scalars::{CycScalar, Rational};
pub use vertex::{Op, OpSum, TwistedSpace, TwistedVector};
