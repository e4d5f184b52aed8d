//! Exact computations with preregular multilinear forms and the finitely
//! presented Hopf algebras attached to them.
//!
//! The crate is layered bottom-up:
//!
//! - [`exactnum`]: rational scalars and dense linear algebra over ℚ;
//! - [`forms`]: multilinear forms, twisting elements and polar spaces;
//! - [`ncalg`]: noncommutative polynomials over matric generators;
//! - [`rewrite`]: degree-truncated Gröbner completion and normal forms;
//! - [`hopf`]: presentations B(w), H(b), H(w), H(w,w̃), A_h^m(n) and the
//!   checks that run against them;
//! - [`io`]: the text formats for forms, presentations and rewrite systems.

pub mod error;
pub mod exactnum;
pub mod forms;
pub mod hopf;
pub mod io;
pub mod ncalg;
pub mod rewrite;

pub use error::{Error, Result};
pub use exactnum::{Matrix, Scalar};
pub use forms::{MultilinearForm, PolarSolution, TwistReport, TwistSolution};
pub use hopf::{Presentation, Strategy, Verdict, Verifier};
pub use ncalg::{Family, Generator, NcPoly, TensorSquareElement, Word};
pub use rewrite::{RewriteSystem, Truncation};
