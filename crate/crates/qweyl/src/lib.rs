//! Exact symbolic machinery for quantized coordinate algebras at generic q:
//! rational functions in q, sparse tensor-leg matrices, R-matrices for
//! gl(n) and its symmetric-pair variants, noncommutative polynomial
//! rewriting, twisted tensor products, and quantum Weyl algebras obtained as
//! PBW deformations.
//!
//! Everything is computed over Q(q) with no floating point and no modular
//! shortcuts; all checks are exact identities.

pub mod deform;
pub mod opmat;
pub mod oq;
pub mod poly;
pub mod qsp;
pub mod rewrite;
pub mod rmatrix;
pub mod scalar;
pub mod tensor;
pub mod twist;

pub use opmat::OpMat;
pub use oq::{act_left, act_right, LetterAction, StandardTable, UElt, ULetter};
pub use poly::{gen, GenId, GenKind, NCPoly, OrderSpec, Word};
pub use qsp::{build_theta, CoidealOp, ThetaAlgebra};
pub use rewrite::{span_equal, Presentation, Span};
pub use rmatrix::{build_r, build_r21, build_r21_inv, Family, FamilyConfig};
pub use scalar::{PoleError, Scalar};
pub use tensor::{SingularError, SparseMat};
