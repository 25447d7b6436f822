//! Exact computations in the cluster category of an acyclic quiver over ℤ.
//!
//! Layers, bottom up:
//!
//! - [`zlinalg`]: integer matrices, Smith normal form, kernels, solving,
//!   finitely generated abelian groups, elimination over 𝔽_p and ℚ.
//! - [`quiver`]: acyclic quivers, Euler form, Coxeter transformation,
//!   Dynkin classification.
//! - [`rep`]: finitely presented ℤQ-modules, `Hom`, `Ext¹`, projective
//!   resolutions, base change to fields.
//! - [`serre`]: Nakayama functor, AR translation, `F = τΣ⁻¹`, reflections.
//! - [`cluster`]: the cluster category, rigid pools, mutation, exchange
//!   triangles and graphs, invariant checks.
//!
//! ```
//! use std::sync::Arc;
//! use clusterforge::{ext1_group, Quiver, ZRep};
//!
//! let q = Arc::new(Quiver::linear_a(2));
//! let s1 = ZRep::simple(q.clone(), 0);
//! let p2 = ZRep::projective(q, 1);
//! assert_eq!(ext1_group(&s1, &p2).unwrap().to_string(), "Z^1");
//! ```

pub mod cluster;
pub mod quiver;
pub mod rep;
pub mod serre;
pub mod zlinalg;

use thiserror::Error;

pub use cluster::{
    build_pool, exchange_graph, exchange_triangles, g_functor, is_cluster_tilting, mutate, mutate_construct,
    run_invariant_suite, verify_bijection_mod_p, ClusterCategory, ClusterError, ClusterObject, ExchangeGraph,
    ExchangeTriangleData, RigidPool,
};
pub use quiver::{DynkinType, Quiver, QuiverError};
pub use rep::{
    are_isomorphic_exceptional, base_change, ext1_group, field_hom_ext_dims, hom_group, is_exceptional, is_rigid,
    projective_resolution, strip_summand, FieldRep, RepError, ZRep,
};
pub use serre::{f_apply, reflect, tau, tau_inv, SerreError, ShiftedModule};
pub use zlinalg::{FinAbGroup, LinalgError, PrimeField, Rationals};

/// Integer matrices with arbitrary-precision entries.
pub type IntMatrix = zlinalg::IntMatrix;
/// Representations over a prime field.
pub type FpRep = FieldRep<PrimeField>;
/// Representations over the rationals.
pub type QRep = FieldRep<Rationals>;

/// Any error raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Serre(#[from] SerreError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
}
