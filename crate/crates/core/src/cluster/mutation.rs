use std::fmt;

use num_traits::One;

use super::{ClusterCategory, ClusterError, ClusterObject, Provenance, RigidPool};
use crate::rep::{ext1_with_generators, hom_group, is_exceptional, strip_summand, RepMap, VertexGroup, ZRep};
use crate::serre::ShiftedModule;
use crate::zlinalg::{has_saturated_image, snf, FinAbGroup, IntMatrix, Matrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TiltingFailure {
    WrongCount { found: usize, expected: usize },
    /// Summands at these positions are isomorphic.
    Duplicate(usize, usize),
    /// `Ext¹_𝒞(T_from, T_to)` is nonzero.
    Extension { from: usize, to: usize, group: FinAbGroup },
}

impl fmt::Display for TiltingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TiltingFailure::WrongCount { found, expected } => write!(f, "{found} summands, expected {expected}"),
            TiltingFailure::Duplicate(i, j) => write!(f, "summands {} and {} are isomorphic", i + 1, j + 1),
            TiltingFailure::Extension { from, to, group } => {
                write!(f, "Ext1_C(T{}, T{}) = {group}", from + 1, to + 1)
            }
        }
    }
}

/// Outcome of [`is_cluster_tilting`]; lists every failing condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TiltingCertificate {
    pub failures: Vec<TiltingFailure>,
}

impl TiltingCertificate {
    pub fn is_tilting(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn is_cluster_tilting(ctx: &ClusterCategory, t: &[ClusterObject]) -> Result<TiltingCertificate, ClusterError> {
    let n = ctx.quiver().vertex_count();
    let mut failures = Vec::new();
    if t.len() != n {
        failures.push(TiltingFailure::WrongCount { found: t.len(), expected: n });
    }
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if ctx.same_object(&t[i], &t[j])? {
                failures.push(TiltingFailure::Duplicate(i, j));
            }
        }
    }
    for i in 0..t.len() {
        for j in 0..t.len() {
            let g = ctx.ext1_c(&t[i], &t[j])?;
            if !g.is_trivial() {
                failures.push(TiltingFailure::Extension { from: i, to: j, group: g });
            }
        }
    }
    Ok(TiltingCertificate { failures })
}

/// How the middle term of one exchange triangle was obtained.
#[derive(Clone, Debug)]
pub enum TriangleWitness {
    /// `Σ^shift E` for the extension `0 → N → E → M → 0` given by `cocycle`.
    Extension { shift: i64, middle: ZRep, cocycle: Vec<IntMatrix> },
    /// `Σ^shift ker φ ⊕ Σ^(shift−1) coker φ` for a morphism `φ: M → N`.
    Morphism { shift: i64, map: RepMap, kernel: ZRep, cokernel: ZRep },
}

/// The middle term of a triangle as a multiset of complement summands.
#[derive(Clone, Debug)]
pub struct TriangleSide {
    pub middle: Vec<(ClusterObject, usize)>,
    pub witness: TriangleWitness,
}

impl TriangleSide {
    pub fn is_empty(&self) -> bool {
        self.middle.is_empty()
    }

    pub fn multiplicity(&self, x: &ClusterObject) -> usize {
        self.middle.iter().filter(|(o, _)| o == x).map(|(_, m)| m).sum()
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .middle
            .iter()
            .map(|(o, m)| if *m == 1 { o.label() } else { format!("{}^{}", o.label(), m) })
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// The two exchange triangles `y → e → x → Σy` and `x → e' → y → Σx`.
#[derive(Clone, Debug)]
pub struct ExchangeTriangleData {
    pub x: ClusterObject,
    pub y: ClusterObject,
    pub e: TriangleSide,
    pub e_prime: TriangleSide,
}

fn add_vec(a: &mut [i64], b: &[i64], sign: i64) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += sign * y;
    }
}

fn sign(shift: i64) -> i64 {
    if shift.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Representative of `c` in the derived category at the given shift, if
/// its `F`-orbit meets that shift.
fn representative_at(ctx: &ClusterCategory, c: &ClusterObject, shift: i64) -> Result<Option<ShiftedModule>, ClusterError> {
    let mut cur = c.representative(ctx.quiver());
    while cur.shift > shift {
        cur = ctx.f_apply(&cur, 1)?;
    }
    while cur.shift < shift {
        cur = ctx.f_apply(&cur, -1)?;
    }
    Ok((cur.shift == shift).then_some(cur))
}

fn fits(small: &ZRep, big: &ZRep) -> bool {
    small.rank_vector().iter().zip(big.rank_vector()).all(|(a, b)| *a <= b)
}

/// Splits the lattice `z`, placed at `shift`, into complement summands.
fn decompose(
    ctx: &ClusterCategory,
    z: &ZRep,
    shift: i64,
    complement: &[ClusterObject],
    counts: &mut [usize],
) -> Result<(), ClusterError> {
    let mut rest = z.clone();
    for (j, c) in complement.iter().enumerate() {
        if rest.is_zero() {
            break;
        }
        let Some(rep) = representative_at(ctx, c, shift)? else { continue };
        while !rest.is_zero() && fits(&rep.module, &rest) {
            match strip_summand(&rest, &rep.module) {
                Ok(r) => {
                    rest = r;
                    counts[j] += 1;
                }
                Err(_) => break,
            }
        }
    }
    if rest.is_zero() {
        Ok(())
    } else {
        Err(ClusterError::BalanceUnsolvable(format!(
            "a piece of rank {:?} at shift {shift} is not a sum of complement summands",
            rest.rank_vector()
        )))
    }
}

/// The extension lattice with action `[[N_a, c_a], [0, M_a]]`.
fn extension_module(m: &ZRep, n: &ZRep, cocycle: &[IntMatrix]) -> Result<ZRep, ClusterError> {
    let q = m.quiver();
    let dims: Vec<usize> = n.generator_counts().iter().zip(m.generator_counts()).map(|(a, b)| a + b).collect();
    let actions = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, _)| {
            let top = n.action(k).hstack(&cocycle[k]);
            let bottom = Matrix::zeros(m.action(k).rows(), n.action(k).cols()).hstack(m.action(k));
            top.vstack(&bottom)
        })
        .collect();
    let vertices = dims.iter().map(|&d| VertexGroup::free(d)).collect();
    Ok(ZRep::new(m.quiver_arc().clone(), vertices, actions)?)
}

/// Middle term of the triangle `to → E → from → Σto` given by a generator
/// of `Hom_𝒞(from, Σto) ≅ ℤ`.
fn triangle_side(
    ctx: &ClusterCategory,
    from: &ClusterObject,
    to: &ClusterObject,
    complement: &[ClusterObject],
) -> Result<TriangleSide, ClusterError> {
    let terms: Vec<_> = ctx.ext1_terms(from, to)?.into_iter().filter(|t| !t.group.is_trivial()).collect();
    if terms.len() != 1 || terms[0].group != FinAbGroup::free(1) {
        return Err(ClusterError::InvalidCluster(format!(
            "Ext1_C({from}, {to}) is not free of rank one"
        )));
    }
    let term = &terms[0];
    let x = from.representative(ctx.quiver());
    let s = x.shift;
    let mut counts = vec![0; complement.len()];
    let mut pieces_class = vec![0i64; ctx.quiver().vertex_count()];
    let witness = if term.offset == 1 {
        let (_, cocycles) = ext1_with_generators(&x.module, &term.module)?;
        let e = extension_module(&x.module, &term.module, &cocycles[0])?;
        decompose(ctx, &e, s, complement, &mut counts)?;
        add_vec(&mut pieces_class, &e.dim_vector(), sign(s));
        TriangleWitness::Extension { shift: s, middle: e, cocycle: cocycles[0].clone() }
    } else {
        let phi = hom_group(&x.module, &term.module)?.basis.remove(0);
        let (kernel, _) = x.module.kernel_of(&phi)?;
        let (cokernel, _) = term.module.cokernel_of(&phi).map_err(|e| ClusterError::BalanceUnsolvable(e.to_string()))?;
        decompose(ctx, &kernel, s, complement, &mut counts)?;
        decompose(ctx, &cokernel, s - 1, complement, &mut counts)?;
        add_vec(&mut pieces_class, &kernel.dim_vector(), sign(s));
        add_vec(&mut pieces_class, &cokernel.dim_vector(), sign(s - 1));
        TriangleWitness::Morphism { shift: s, map: phi, kernel, cokernel }
    };
    // K₀ balance of the triangle in the derived category.
    let mut expected = vec![0i64; pieces_class.len()];
    add_vec(&mut expected, &x.module.dim_vector(), sign(s));
    add_vec(&mut expected, &term.module.dim_vector(), sign(term.shift - 1));
    if expected != pieces_class {
        return Err(ClusterError::BalanceUnsolvable(format!("class {pieces_class:?} differs from {expected:?}")));
    }
    let middle = complement
        .iter()
        .zip(&counts)
        .filter(|(_, &c)| c > 0)
        .map(|(o, &c)| (o.clone(), c))
        .collect();
    Ok(TriangleSide { middle, witness })
}

/// Both exchange triangles for an exchange pair `x`, `y` with complement.
pub fn exchange_triangles(
    ctx: &ClusterCategory,
    x: &ClusterObject,
    y: &ClusterObject,
    complement: &[ClusterObject],
) -> Result<ExchangeTriangleData, ClusterError> {
    let e = triangle_side(ctx, x, y, complement)?;
    let e_prime = triangle_side(ctx, y, x, complement)?;
    Ok(ExchangeTriangleData { x: x.clone(), y: y.clone(), e, e_prime })
}

#[derive(Clone, Debug)]
pub struct Mutation {
    /// `T` with the summand at `position` replaced.
    pub cluster: Vec<ClusterObject>,
    pub position: usize,
    pub removed: ClusterObject,
    pub added: ClusterObject,
    /// False when the new summand had to be constructed.
    pub from_pool: bool,
    pub triangles: ExchangeTriangleData,
}

fn compatible(ctx: &ClusterCategory, y: &ClusterObject, others: &[ClusterObject]) -> Result<bool, ClusterError> {
    for o in others {
        if !ctx.ext1_c(y, o)?.is_trivial() || !ctx.ext1_c(o, y)?.is_trivial() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn is_exchange_partner(
    ctx: &ClusterCategory,
    x: &ClusterObject,
    y: &ClusterObject,
    others: &[ClusterObject],
) -> Result<bool, ClusterError> {
    Ok(ctx.ext1_c(x, y)? == FinAbGroup::free(1) && compatible(ctx, y, others)?)
}

/// Replaces the summand at position `k` by the unique other completion of
/// the complement. Searches the pool first; for clusters of modules it
/// falls back to [`mutate_construct`] and records the result in the pool.
pub fn mutate(
    ctx: &ClusterCategory,
    pool: &mut RigidPool,
    t: &[ClusterObject],
    k: usize,
) -> Result<Mutation, ClusterError> {
    if k >= t.len() {
        return Err(ClusterError::PositionOutOfRange { position: k, size: t.len() });
    }
    let cert = is_cluster_tilting(ctx, t)?;
    if let Some(f) = cert.failures.first() {
        return Err(ClusterError::InvalidCluster(f.to_string()));
    }
    let x = &t[k];
    let others: Vec<ClusterObject> = t.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, o)| o.clone()).collect();
    let mut found = Vec::new();
    for entry in pool.entries() {
        if entry.key == x.key() {
            continue;
        }
        if is_exchange_partner(ctx, x, &entry.object, &others)? {
            found.push(entry.object.clone());
        }
    }
    if found.len() > 1 {
        return Err(ClusterError::ConstructionFailed(format!(
            "{} pool objects complete the complement: {:?}",
            found.len(),
            found
        )));
    }
    let (y, from_pool) = match found.pop() {
        Some(y) => (y, true),
        None if t.iter().all(ClusterObject::is_module) => {
            let y = mutate_construct(ctx, t, k).map_err(|e| {
                ClusterError::NotFoundWithinBound(format!(
                    "no pool object of rank at most {} completes the complement, and {e}",
                    pool.dim_bound()
                ))
            })?;
            pool.insert(y.clone(), Provenance::MutationCone);
            (y, false)
        }
        None => {
            return Err(ClusterError::NotFoundWithinBound(format!(
                "no pool object of rank at most {} completes the complement at position {}",
                pool.dim_bound(),
                k + 1
            )))
        }
    };
    let triangles = exchange_triangles(ctx, x, &y, &others)?;
    let mut cluster = t.to_vec();
    cluster[k] = y.clone();
    Ok(Mutation { cluster, position: k, removed: x.clone(), added: y, from_pool, triangles })
}

fn strip_all(z: ZRep, complement: &[ZRep]) -> ZRep {
    let mut rest = z;
    for c in complement {
        while !rest.is_zero() && fits(c, &rest) {
            match strip_summand(&rest, c) {
                Ok(r) => rest = r,
                Err(_) => break,
            }
        }
    }
    rest
}

fn stack_rows(blocks: &[IntMatrix], cols: usize) -> IntMatrix {
    blocks.iter().fold(Matrix::zeros(0, cols), |acc, b| acc.vstack(b))
}

fn stack_cols(blocks: &[IntMatrix], rows: usize) -> IntMatrix {
    blocks.iter().fold(Matrix::zeros(rows, 0), |acc, b| acc.hstack(b))
}

/// Builds the new summand for a cluster of modules from approximations.
///
/// The left approximation `u: T_k → ⊕_j T_j^{h_j}` uses a basis of each
/// `Hom_{ℤQ}(T_k, T_j)`. If `u` is a split-free embedding its cokernel is
/// used, otherwise the kernel of the right approximation
/// `⊕_j T_j^{h'_j} → T_k`. Complement summands are split off and the
/// remainder must pass the rank-one test.
pub fn mutate_construct(ctx: &ClusterCategory, t: &[ClusterObject], k: usize) -> Result<ClusterObject, ClusterError> {
    let modules: Vec<ZRep> = t
        .iter()
        .map(|o| match o {
            ClusterObject::Module(m) => Ok(m.clone()),
            ClusterObject::ShiftedProjective(_) => {
                Err(ClusterError::ConstructionFailed("construction needs a cluster of modules".into()))
            }
        })
        .collect::<Result<_, _>>()?;
    if k >= t.len() {
        return Err(ClusterError::PositionOutOfRange { position: k, size: t.len() });
    }
    let m = &modules[k];
    let complement: Vec<ZRep> = modules.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, c)| c.clone()).collect();
    let others: Vec<ClusterObject> = t.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, o)| o.clone()).collect();
    let nverts = ctx.quiver().vertex_count();
    let x = &t[k];

    let mut candidates = Vec::new();
    // left approximation
    let mut targets = Vec::new();
    let mut maps: Vec<RepMap> = Vec::new();
    for c in &complement {
        for f in hom_group(m, c)?.basis {
            targets.push(c.clone());
            maps.push(f);
        }
    }
    if !maps.is_empty() {
        let u: RepMap = (0..nverts)
            .map(|v| stack_rows(&maps.iter().map(|f| f[v].clone()).collect::<Vec<_>>(), m.vertex(v).generators))
            .collect();
        let injective = u.iter().all(|uv| snf(uv).rank == uv.cols() && has_saturated_image(uv));
        if injective {
            let target = ZRep::direct_sum_all(ctx.quiver().clone(), &targets)?;
            let (q, _) = target.cokernel_of(&u)?;
            candidates.push(strip_all(q, &complement));
        }
    }
    // right approximation
    let mut sources = Vec::new();
    let mut maps: Vec<RepMap> = Vec::new();
    for c in &complement {
        for f in hom_group(c, m)?.basis {
            sources.push(c.clone());
            maps.push(f);
        }
    }
    if !maps.is_empty() {
        let w: RepMap = (0..nverts)
            .map(|v| stack_cols(&maps.iter().map(|f| f[v].clone()).collect::<Vec<_>>(), m.vertex(v).generators))
            .collect();
        let surjective = w.iter().all(|wv| {
            let d = snf(wv);
            d.rank == wv.rows() && d.invariant_factors().iter().all(One::is_one)
        });
        if surjective {
            let source = ZRep::direct_sum_all(ctx.quiver().clone(), &sources)?;
            let (kernel, _) = source.kernel_of(&w)?;
            candidates.push(strip_all(kernel, &complement));
        }
    }
    for z in candidates {
        if z.is_zero() || !is_exceptional(&z) {
            continue;
        }
        let y = ClusterObject::Module(z);
        if is_exchange_partner(ctx, x, &y, &others)? {
            return Ok(y);
        }
    }
    Err(ClusterError::ConstructionFailed(format!(
        "approximations of {} by the complement give no exchange partner",
        x.label()
    )))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::cluster::build_pool;
    use crate::quiver::Quiver;

    fn a(n: usize) -> ClusterCategory {
        ClusterCategory::new(Arc::new(Quiver::linear_a(n)))
    }

    fn labels(t: &[ClusterObject]) -> Vec<String> {
        t.iter().map(ClusterObject::label).collect()
    }

    #[test]
    fn tilting_examples() {
        let c = a(2);
        let q = c.quiver().clone();
        let p1 = ClusterObject::Module(c.projective(0));
        let p2 = ClusterObject::Module(c.projective(1));
        let s1 = ClusterObject::Module(ZRep::simple(q, 0));
        let sp2 = ClusterObject::ShiftedProjective(1);
        assert!(is_cluster_tilting(&c, &[p1.clone(), p2.clone()]).unwrap().is_tilting());
        let cert = is_cluster_tilting(&c, &[p1.clone(), sp2.clone()]).unwrap();
        assert!(cert.failures.contains(&TiltingFailure::Extension { from: 0, to: 1, group: FinAbGroup::free(1) }));
        assert!(is_cluster_tilting(&c, &[s1, sp2]).unwrap().is_tilting());
        let dup = is_cluster_tilting(&c, &[p1.clone(), p1]).unwrap();
        assert!(dup.failures.contains(&TiltingFailure::Duplicate(0, 1)));
    }

    #[test]
    fn a2_mutations() {
        let c = a(2);
        let mut pool = build_pool(&c, 5).unwrap();
        let t = c.initial_cluster();
        let m = mutate(&c, &mut pool, &t, 1).unwrap();
        assert_eq!(labels(&m.cluster), vec!["[1,1]", "[1,0]"]);
        let back = mutate(&c, &mut pool, &m.cluster, 1).unwrap();
        assert_eq!(back.cluster, t);
        let s1 = ClusterObject::Module(ZRep::simple(c.quiver().clone(), 0));
        let m = mutate(&c, &mut pool, &[s1, ClusterObject::ShiftedProjective(1)], 1).unwrap();
        assert_eq!(labels(&m.cluster), vec!["[1,0]", "[1,1]"]);
        assert!(matches!(mutate(&c, &mut pool, &t, 2), Err(ClusterError::PositionOutOfRange { .. })));
    }

    #[test]
    fn a2_exchange_triangles() {
        // x = P2, y = S1, complement P1: e = {} and e' = {P1}
        let c = a(2);
        let q = c.quiver().clone();
        let p1 = ClusterObject::Module(c.projective(0));
        let p2 = ClusterObject::Module(c.projective(1));
        let s1 = ClusterObject::Module(ZRep::simple(q, 0));
        let tri = exchange_triangles(&c, &p2, &s1, std::slice::from_ref(&p1)).unwrap();
        assert!(tri.e.is_empty());
        assert_eq!(tri.e_prime.middle, vec![(p1, 1)]);
        assert!(matches!(tri.e_prime.witness, TriangleWitness::Extension { .. }));
    }

    #[test]
    fn construction_matches_pool() {
        let c = a(2);
        let t = c.initial_cluster();
        let y = mutate_construct(&c, &t, 1).unwrap();
        assert_eq!(y.label(), "[1,0]");
        let c3 = a(3);
        let t = c3.initial_cluster();
        let mut pool = build_pool(&c3, 5).unwrap();
        for k in 0..3 {
            let by_pool = mutate(&c3, &mut pool, &t, k).unwrap().added;
            if let Ok(built) = mutate_construct(&c3, &t, k) {
                assert!(c3.same_object(&built, &by_pool).unwrap());
            }
        }
    }

    #[test]
    fn a3_end_vertex_triangle() {
        // Mutating the projective cluster of 1 → 2 → 3 at P3 = S3 gives
        // 0 → P3 → P2 → S2 → 0, so e' = {P2}.
        let c = a(3);
        let mut pool = build_pool(&c, 5).unwrap();
        let t = c.initial_cluster();
        let m = mutate(&c, &mut pool, &t, 2).unwrap();
        assert_eq!(m.added.label(), "[0,1,0]");
        assert_eq!(m.triangles.e_prime.middle, vec![(t[1].clone(), 1)]);
    }
}
