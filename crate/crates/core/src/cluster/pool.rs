use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::{ClusterCategory, ClusterError, ClusterObject, ObjectKey};
use crate::rep::{is_exceptional, ZRep};
use crate::serre::{injective_index, projective_index, reflect};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Projective,
    ShiftedProjective,
    TauOrbit,
    Reflection,
    MutationCone,
}

#[derive(Clone, Debug)]
pub struct PoolEntry {
    pub object: ClusterObject,
    pub key: ObjectKey,
    pub provenance: Provenance,
}

/// Rigid indecomposables known so far, keyed by [`ObjectKey`].
#[derive(Clone, Debug)]
pub struct RigidPool {
    entries: Vec<PoolEntry>,
    index: HashMap<ObjectKey, usize>,
    complete: bool,
    dim_bound: usize,
}

impl RigidPool {
    pub fn entries(&self) -> &[PoolEntry] {
        &self.entries
    }

    pub fn objects(&self) -> impl Iterator<Item = &ClusterObject> {
        self.entries.iter().map(|e| &e.object)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn module_count(&self) -> usize {
        self.entries.iter().filter(|e| e.object.is_module()).count()
    }

    /// Whether the pool provably contains every rigid indecomposable.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn dim_bound(&self) -> usize {
        self.dim_bound
    }

    pub fn get(&self, key: &ObjectKey) -> Option<&PoolEntry> {
        self.index.get(key).map(|&i| &self.entries[i])
    }

    /// Adds an object unless one with the same key is present.
    pub fn insert(&mut self, object: ClusterObject, provenance: Provenance) -> bool {
        let key = object.key();
        if self.index.contains_key(&key) {
            return false;
        }
        self.index.insert(key.clone(), self.entries.len());
        self.entries.push(PoolEntry { object, key, provenance });
        true
    }

    /// Entries sorted by key.
    pub fn sorted(&self) -> Vec<&PoolEntry> {
        let mut v: Vec<&PoolEntry> = self.entries.iter().collect();
        v.sort_by(|a, b| a.key.cmp(&b.key));
        v
    }
}

fn within(m: &ZRep, bound: usize) -> bool {
    m.rank_vector().iter().all(|&d| d <= bound)
}

/// Preprojective and preinjective lattices reachable from `P_i` and `I_i`
/// with all ranks at most `bound` (no bound when `bound` is `None`).
fn orbit_modules(ctx: &ClusterCategory, bound: Option<usize>) -> Result<Vec<(ZRep, Provenance)>, ClusterError> {
    let n = ctx.quiver().vertex_count();
    let ok = |m: &ZRep| bound.is_none_or(|b| within(m, b));
    let mut out = Vec::new();
    for i in 0..n {
        let mut m = ctx.projective(i);
        let mut prov = Provenance::Projective;
        while ok(&m) {
            out.push((m.clone(), prov));
            if injective_index(&m).is_some() {
                break;
            }
            m = ctx.tau_inv(&m)?;
            prov = Provenance::TauOrbit;
        }
    }
    if bound.is_some() {
        for i in 0..n {
            let mut m = ctx.injective(i);
            while ok(&m) {
                out.push((m.clone(), Provenance::TauOrbit));
                if projective_index(&m).is_some() {
                    break;
                }
                m = ctx.tau(&m)?;
            }
        }
    }
    Ok(out)
}

/// Rigid indecomposables: every `ΣP_i`, the τ-orbits of projectives and
/// injective lattices, and (for non-Dynkin quivers) lattices transported
/// back from reflected quivers.
///
/// For Dynkin quivers every indecomposable is some `τ⁻ᵏP_i`, so the orbits
/// are walked to the end regardless of `dim_bound` and the pool is complete.
pub fn build_pool(ctx: &ClusterCategory, dim_bound: usize) -> Result<RigidPool, ClusterError> {
    let q = ctx.quiver().clone();
    let n = q.vertex_count();
    let complete = q.is_representation_finite();
    let mut pool = RigidPool { entries: Vec::new(), index: HashMap::new(), complete, dim_bound };
    for (m, prov) in orbit_modules(ctx, (!complete).then_some(dim_bound))? {
        pool.insert(ClusterObject::Module(m), prov);
    }
    if !complete {
        for v in 0..n {
            if !(q.is_sink(v) || q.is_source(v)) || q.arrows().iter().all(|a| a.source != v && a.target != v) {
                continue;
            }
            let reflected = ClusterCategory::new(Arc::new(q.reflect_at(v)));
            for (m, _) in orbit_modules(&reflected, Some(dim_bound))? {
                let Ok(back) = reflect(&m, v) else { continue };
                let Ok(back) = ZRep::lattice(q.clone(), &back.generator_counts(), back.actions().to_vec()) else {
                    continue;
                };
                if within(&back, dim_bound)
                    && !back.is_zero()
                    && pool.get(&ClusterObject::Module(back.clone()).key()).is_none()
                    && is_exceptional(&back)
                {
                    pool.insert(ClusterObject::Module(back), Provenance::Reflection);
                }
            }
        }
    }
    for i in 0..n {
        pool.insert(ClusterObject::ShiftedProjective(i), Provenance::ShiftedProjective);
    }
    Ok(pool)
}
