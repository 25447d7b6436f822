//! Nakayama functor, AR translation and reflection functors on lattices.

use std::fmt;
use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::quiver::Quiver;
use crate::rep::{projective_resolution, strip_summand, PathMatrix, RepError, RepMap, ZRep};
use crate::zlinalg::{kernel_basis, snf, IntMatrix, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SerreError {
    #[error("module has a projective summand P{}", .0 + 1)]
    IsProjective(usize),
    #[error("module has an injective summand I{}", .0 + 1)]
    IsInjective(usize),
    #[error("not exceptional: {0}")]
    NotExceptional(String),
    #[error("vertex {} is neither a sink nor a source", .0 + 1)]
    VertexNotSinkOrSource(usize),
    #[error("module has the simple S{} as a summand", .0 + 1)]
    SimpleAtVertex(usize),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// `⊕ I_v` over the given vertices.
pub fn injective_sum(quiver: &Arc<Quiver>, summands: &[usize]) -> ZRep {
    let parts: Vec<ZRep> = summands.iter().map(|&v| ZRep::injective_lattice(quiver.clone(), v)).collect();
    ZRep::direct_sum_all(quiver.clone(), &parts).expect("same quiver")
}

/// `ν` on a map between sums of projectives, as a map between the
/// corresponding sums of injective lattices.
pub fn nakayama(quiver: &Quiver, d: &PathMatrix) -> RepMap {
    d.nakayama(quiver)
}

fn is_surjective(m: &IntMatrix) -> bool {
    let d = snf(m);
    d.rank == m.rows() && d.invariant_factors().iter().all(One::is_one)
}

/// Index `i` with `M ≅ P_i`, if any.
pub fn projective_index(m: &ZRep) -> Option<usize> {
    if !m.is_lattice() || m.is_zero() {
        return None;
    }
    let res = projective_resolution(m).ok()?;
    (res.terms.len() == 1 && res.terms[0].len() == 1).then(|| res.terms[0][0])
}

/// Index `i` with `M ≅ I_i`, if any.
pub fn injective_index(m: &ZRep) -> Option<usize> {
    projective_index(&m.dual().ok()?)
}

fn projective_summand(m: &ZRep) -> Option<usize> {
    (0..m.quiver().vertex_count()).find(|&v| strip_summand(m, &ZRep::projective(m.quiver_arc().clone(), v)).is_ok())
}

/// `τM = ker(ν f)` for the minimal resolution `0 → P₁ →f P₀ → M → 0`.
pub fn tau(m: &ZRep) -> Result<ZRep, SerreError> {
    if !m.is_lattice() {
        return Err(RepError::NotALattice.into());
    }
    if m.is_zero() {
        return Err(SerreError::NotExceptional("zero module".into()));
    }
    let res = projective_resolution(m)?;
    if res.terms.len() == 1 {
        return Err(SerreError::IsProjective(res.terms[0][0]));
    }
    let q = m.quiver_arc();
    let nu = nakayama(q, &res.differentials[0]);
    if !nu.iter().all(is_surjective) {
        if let Some(v) = projective_summand(m) {
            return Err(SerreError::IsProjective(v));
        }
        return Err(SerreError::NotExceptional("ν(f) is not surjective".into()));
    }
    let source = injective_sum(q, &res.terms[1]);
    let (k, _) = source.kernel_of(&nu)?;
    Ok(k)
}

/// Moves a lattice over `Q^op` back to `Q` through duality.
fn undual(m: &ZRep, quiver: &Arc<Quiver>) -> Result<ZRep, RepError> {
    let actions = m.actions().iter().map(Matrix::transpose).collect();
    ZRep::lattice(quiver.clone(), &m.generator_counts(), actions)
}

/// `τ⁻¹M = D τ_{Q^op} D M`.
pub fn tau_inv(m: &ZRep) -> Result<ZRep, SerreError> {
    let t = tau(&m.dual()?).map_err(|e| match e {
        SerreError::IsProjective(v) => SerreError::IsInjective(v),
        other => other,
    })?;
    Ok(undual(&t, m.quiver_arc())?)
}

/// An object `Σ^shift M` of the bounded derived category.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ShiftedModule {
    pub module: ZRep,
    pub shift: i64,
}

impl ShiftedModule {
    pub fn new(module: ZRep, shift: i64) -> Self {
        ShiftedModule { module, shift }
    }
}

impl fmt::Debug for ShiftedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {})", self.module, self.shift)
    }
}

/// One step of `F = τ Σ⁻¹` (`power = 1`) or its inverse (`power = -1`)
/// on an indecomposable shifted module.
pub fn f_apply(x: &ShiftedModule, power: i64) -> Result<ShiftedModule, SerreError> {
    let q = x.module.quiver_arc().clone();
    match power {
        1 => match projective_index(&x.module) {
            Some(i) => Ok(ShiftedModule::new(ZRep::injective_lattice(q, i), x.shift - 2)),
            None => Ok(ShiftedModule::new(tau(&x.module)?, x.shift - 1)),
        },
        -1 => match injective_index(&x.module) {
            Some(i) => Ok(ShiftedModule::new(ZRep::projective(q, i), x.shift + 2)),
            None => Ok(ShiftedModule::new(tau_inv(&x.module)?, x.shift + 1)),
        },
        _ => panic!("f_apply takes power 1 or -1"),
    }
}

/// BGP reflection at a sink (`C⁺`) or source (`C⁻`). Returns the lattice
/// over the reflected quiver; arrow indices are kept.
pub fn reflect(m: &ZRep, v: usize) -> Result<ZRep, SerreError> {
    if !m.is_lattice() {
        return Err(RepError::NotALattice.into());
    }
    let q = m.quiver();
    let reflected = Arc::new(q.reflect_at(v));
    let dims = m.generator_counts();
    let incident: Vec<usize> = if q.is_sink(v) {
        q.arrows_into(v).collect()
    } else if q.is_source(v) {
        q.arrows_out_of(v).collect()
    } else {
        return Err(SerreError::VertexNotSinkOrSource(v));
    };
    let others: Vec<usize> = incident
        .iter()
        .map(|&a| {
            let arr = q.arrow(a);
            if arr.source == v {
                arr.target
            } else {
                arr.source
            }
        })
        .collect();
    let mut block_off = Vec::new();
    let mut total = 0;
    for &w in &others {
        block_off.push(total);
        total += dims[w];
    }
    let mut new_dims = dims.clone();
    let mut actions: Vec<IntMatrix> = m.actions().to_vec();
    if q.is_sink(v) && !incident.is_empty() {
        // ⊕ M_w → M_v, keep the kernel
        let h = incident.iter().fold(Matrix::zeros(dims[v], 0), |acc: IntMatrix, &a| acc.hstack(m.action(a)));
        if snf(&h).rank < dims[v] {
            return Err(SerreError::SimpleAtVertex(v));
        }
        let k = kernel_basis(&h);
        new_dims[v] = k.cols();
        for (l, &a) in incident.iter().enumerate() {
            actions[a] = k.row_range(block_off[l], block_off[l] + dims[others[l]]);
        }
    } else if !incident.is_empty() {
        // M_v → ⊕ M_w, keep the saturated cokernel
        let h = incident.iter().fold(Matrix::zeros(0, dims[v]), |acc: IntMatrix, &a| acc.vstack(m.action(a)));
        let d = snf(&h);
        if d.rank < dims[v] {
            return Err(SerreError::SimpleAtVertex(v));
        }
        let proj = d.u_inv.row_range(d.rank, total);
        new_dims[v] = proj.rows();
        for (l, &a) in incident.iter().enumerate() {
            actions[a] = proj.column_range(block_off[l], block_off[l] + dims[others[l]]);
        }
    } else if dims[v] > 0 {
        return Err(SerreError::SimpleAtVertex(v));
    }
    Ok(ZRep::lattice(reflected, &new_dims, actions)?)
}
