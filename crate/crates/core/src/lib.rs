//! Shifted Popov minimal interpolation bases over prime fields.
//!
//! Given a module matrix `E`, a Jordan matrix `J` and a shift `s`, the
//! interpolants are the polynomial rows `p` with `p * E = 0` under the action
//! `p . e = e * p(J)`. They form a free module of rank `m`, and
//! [`popov_mib`] returns its unique basis in s-Popov form together with the
//! s-minimal degree. Order bases and multivariate (list-decoding)
//! interpolation are special cases, see [`apps`].

pub mod apps;
pub mod error;
pub mod field;
pub mod jordan;
pub mod linalg;
pub mod mib;
pub mod poly;
pub mod polymat;
pub mod popov;
pub mod random;
pub mod wire;

pub use error::{Error, Result};
pub use field::{FieldElement, Modulus, NTT_PRIME};
pub use jordan::{EigenGroup, JordanBlock, JordanSpec};
pub use linalg::Matrix;
pub use mib::{iterative_mib, InterpInstance, MinimalDegree};
pub use poly::Poly;
pub use polymat::{PivotProfile, PolyMat, Shift};
pub use popov::{known_mindeg_mib, popov_mib};
