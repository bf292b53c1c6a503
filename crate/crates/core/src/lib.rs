//! Generalized Baumslag–Solitar tree groups: centers, generating sets for the
//! residual intersections `γ_ω` and `(N_p)_ω`, abelianizations and a finite
//! quotient oracle.

pub mod abelian;
pub mod arith;
pub mod center;
pub mod error;
pub mod gamma_omega;
pub mod np_omega;
pub mod oracle;
pub mod reference;
pub mod tree_model;
pub mod words;

pub use error::GroupError;
pub use tree_model::{parse_tree, LabeledTree, VertexId};
pub use words::{Commutator, GroupWord};
