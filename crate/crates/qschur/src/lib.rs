//! Exact computations in the type B/C q-Schur algebras, their stabilized
//! coideal limits, canonical bases, and a finite-field orbit oracle.
//!
//! ```
//! use qschur::{Algebra, AlgebraContext, ThetaMatrix};
//!
//! let alg = Algebra::new(AlgebraContext::schur_j(1, 2));
//! let a = ThetaMatrix::from_rows(1, &[vec![0, 1, 1], vec![0, 1, 0], vec![1, 1, 0]]).unwrap();
//! let cb = alg.canonical(&a).unwrap();
//! assert_eq!(alg.bar(&cb).unwrap(), cb);
//! ```

pub mod indexsets;
pub mod laurent;
pub mod linalg;
pub mod oracle;
pub mod par;
pub mod relations;
pub mod schur;
pub mod stable;
pub mod suites;
pub mod tensor;

pub use indexsets::{SetTag, ThetaMatrix, Word};
pub use laurent::LaurentPoly;

pub use schur::{Algebra, AlgebraContext, AlgebraElement, Family};
