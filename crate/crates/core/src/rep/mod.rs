//! Finitely presented representations of a quiver over ℤ.
//!
//! A [`ZRep`] stores, per vertex, a presentation `ℤ^g / im R` of the vertex
//! group and, per arrow `a: i → j`, an integer matrix acting on generators.
//! Arrows act along their direction. Lattices are the representations whose
//! relation matrices are all empty.
//!
//! The torsion module used as a test vector (`ℤ/2` at vertex 1 of `1 → 2`,
//! see [`ZRep::torsion_example`]) sits at the source. With this convention its
//! minimal resolution is `0 → P₂ → P₁ ⊕ P₂ → P₁ → M → 0`, which is the
//! three-term shape with a `±2` entry and an arrow entry. Writers that use
//! right modules draw the same module with the projective labels swapped.

mod base_change;
mod hom;
mod resolution;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::quiver::Quiver;
use crate::zlinalg::{
    kernel_basis, snf, solve_matrix, IntMatrix, LinalgError, Matrix,
};

pub use base_change::{base_change, field_hom_ext_dims, FieldRep};
pub use hom::{ext1_group, ext1_with_generators, hom_group, HomGroup};
pub use resolution::{projective_resolution, PathCombo, PathMatrix, ProjResolution};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("representations live over different quivers")]
    QuiverMismatch,
    #[error("malformed representation: {0}")]
    Shape(String),
    #[error("action of arrow {arrow} does not descend to the presented vertex groups")]
    DoesNotDescend { arrow: usize },
    #[error("not a direct summand: {0}")]
    NotASummand(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("operation needs a lattice (all vertex groups free)")]
    NotALattice,
    #[error("cokernel has torsion; image is not saturated at vertex {vertex}")]
    TorsionCokernel { vertex: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Presented abelian group `ℤ^generators / im relations`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexGroup {
    pub generators: usize,
    /// `generators × r`; no columns for a free group.
    pub relations: IntMatrix,
}

impl VertexGroup {
    pub fn free(rank: usize) -> Self {
        VertexGroup { generators: rank, relations: Matrix::zeros(rank, 0) }
    }

    pub fn is_free(&self) -> bool {
        self.relations.cols() == 0
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZRep {
    quiver: Arc<Quiver>,
    vertices: Vec<VertexGroup>,
    /// For `a: i → j`, a `g_j × g_i` matrix.
    actions: Vec<IntMatrix>,
}

/// A morphism of lattices, one matrix per vertex.
pub type RepMap = Vec<IntMatrix>;

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

impl ZRep {
    /// Checks shapes and that each action descends to the presented quotients.
    pub fn new(quiver: Arc<Quiver>, vertices: Vec<VertexGroup>, actions: Vec<IntMatrix>) -> Result<Self, RepError> {
        let n = quiver.vertex_count();
        if vertices.len() != n {
            return Err(RepError::Shape(format!("{} vertex groups for {n} vertices", vertices.len())));
        }
        if actions.len() != quiver.arrows().len() {
            return Err(RepError::Shape(format!(
                "{} action matrices for {} arrows",
                actions.len(),
                quiver.arrows().len()
            )));
        }
        for (v, g) in vertices.iter().enumerate() {
            if g.relations.rows() != g.generators {
                return Err(RepError::Shape(format!(
                    "relations at vertex {} have {} rows, expected {}",
                    v + 1,
                    g.relations.rows(),
                    g.generators
                )));
            }
        }
        for (k, arrow) in quiver.arrows().iter().enumerate() {
            let (gs, gt) = (vertices[arrow.source].generators, vertices[arrow.target].generators);
            if actions[k].shape() != (gt, gs) {
                return Err(RepError::Shape(format!(
                    "action of arrow {} is {}x{}, expected {gt}x{gs}",
                    k + 1,
                    actions[k].rows(),
                    actions[k].cols()
                )));
            }
            let pushed = actions[k].mul(&vertices[arrow.source].relations);
            if pushed.cols() > 0 {
                let target_rel = &vertices[arrow.target].relations;
                if solve_matrix(target_rel, &pushed).is_err() {
                    return Err(RepError::DoesNotDescend { arrow: k + 1 });
                }
            }
        }
        Ok(ZRep { quiver, vertices, actions })
    }

    /// A lattice with ranks `dims` and the given arrow matrices.
    pub fn lattice(quiver: Arc<Quiver>, dims: &[usize], actions: Vec<IntMatrix>) -> Result<Self, RepError> {
        let vertices = dims.iter().map(|&d| VertexGroup::free(d)).collect();
        ZRep::new(quiver, vertices, actions)
    }

    pub fn zero(quiver: Arc<Quiver>) -> Self {
        let dims = vec![0; quiver.vertex_count()];
        let actions = vec![Matrix::zeros(0, 0); quiver.arrows().len()];
        ZRep::lattice(quiver, &dims, actions).expect("zero representation")
    }

    /// The simple lattice `S_i`: ℤ at `i`, zero elsewhere.
    pub fn simple(quiver: Arc<Quiver>, i: usize) -> Self {
        let dims: Vec<usize> = (0..quiver.vertex_count()).map(|v| usize::from(v == i)).collect();
        let actions = quiver
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(dims[a.target], dims[a.source]))
            .collect();
        ZRep::lattice(quiver, &dims, actions).expect("simple lattice")
    }

    /// `P_i`: at vertex `j`, free on the paths `i ⇝ j` in lexicographic
    /// order; arrows extend paths at the end.
    pub fn projective(quiver: Arc<Quiver>, i: usize) -> Self {
        let n = quiver.vertex_count();
        let bases: Vec<Vec<Vec<usize>>> = (0..n).map(|j| quiver.paths(i, j)).collect();
        let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
        let actions = quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let mut m = Matrix::zeros(dims[a.target], dims[a.source]);
                for (col, p) in bases[a.source].iter().enumerate() {
                    let mut ext = p.clone();
                    ext.push(k);
                    let row = bases[a.target].iter().position(|q| *q == ext).expect("extended path exists");
                    m[(row, col)] = BigInt::one();
                }
                m
            })
            .collect();
        ZRep::lattice(quiver, &dims, actions).expect("projective lattice")
    }

    /// `I_i = ν(P_i)`: at vertex `j`, the dual basis of the paths `j ⇝ i`;
    /// an arrow `a` sends `p*` to `q*` when `p = a·q`, and kills it otherwise.
    pub fn injective_lattice(quiver: Arc<Quiver>, i: usize) -> Self {
        let n = quiver.vertex_count();
        let bases: Vec<Vec<Vec<usize>>> = (0..n).map(|j| quiver.paths(j, i)).collect();
        let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
        let actions = quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let mut m = Matrix::zeros(dims[a.target], dims[a.source]);
                for (col, p) in bases[a.source].iter().enumerate() {
                    if p.first() == Some(&k) {
                        let rest = &p[1..];
                        let row = bases[a.target].iter().position(|q| q == rest).expect("suffix path exists");
                        m[(row, col)] = BigInt::one();
                    }
                }
                m
            })
            .collect();
        ZRep::lattice(quiver, &dims, actions).expect("injective lattice")
    }

    /// `ℤ/2` at vertex 1 of `1 → 2`: the non-rigid torsion test module.
    pub fn torsion_example() -> Self {
        let q = Arc::new(Quiver::linear_a(2));
        let vertices = vec![
            VertexGroup { generators: 1, relations: Matrix::from_vec(1, 1, vec![big(2)]) },
            VertexGroup::free(0),
        ];
        ZRep::new(q, vertices, vec![Matrix::zeros(0, 1)]).expect("torsion example")
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn quiver_arc(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn vertex(&self, v: usize) -> &VertexGroup {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[VertexGroup] {
        &self.vertices
    }

    pub fn action(&self, a: usize) -> &IntMatrix {
        &self.actions[a]
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.actions
    }

    pub fn generator_counts(&self) -> Vec<usize> {
        self.vertices.iter().map(|g| g.generators).collect()
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices.iter().all(VertexGroup::is_free)
    }

    /// Free rank of each vertex group. For lattices this is the dimension vector.
    pub fn rank_vector(&self) -> Vec<usize> {
        self.vertices.iter().map(|g| g.generators - crate::zlinalg::matrix_rank(&g.relations)).collect()
    }

    pub fn dim_vector(&self) -> Vec<i64> {
        self.rank_vector().into_iter().map(|d| d as i64).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.vertices.iter().all(|g| {
            g.generators == 0 || crate::zlinalg::cokernel_structure(&g.relations).is_trivial()
        })
    }

    pub(crate) fn same_quiver(&self, other: &ZRep) -> Result<(), RepError> {
        if Arc::ptr_eq(&self.quiver, &other.quiver) || *self.quiver == *other.quiver {
            Ok(())
        } else {
            Err(RepError::QuiverMismatch)
        }
    }

    fn require_lattice(&self) -> Result<(), RepError> {
        if self.is_lattice() {
            Ok(())
        } else {
            Err(RepError::NotALattice)
        }
    }

    /// Composite action along a path (arrow indices, first arrow first).
    pub fn path_action(&self, from: usize, path: &[usize]) -> IntMatrix {
        let mut m = Matrix::identity(self.vertices[from].generators);
        for &a in path {
            m = self.actions[a].mul(&m);
        }
        m
    }

    pub fn direct_sum(&self, other: &ZRep) -> Result<ZRep, RepError> {
        self.same_quiver(other)?;
        let vertices = self
            .vertices
            .iter()
            .zip(&other.vertices)
            .map(|(a, b)| VertexGroup {
                generators: a.generators + b.generators,
                relations: a.relations.block_diag(&b.relations),
            })
            .collect();
        let actions = self.actions.iter().zip(&other.actions).map(|(a, b)| a.block_diag(b)).collect();
        ZRep::new(self.quiver.clone(), vertices, actions)
    }

    pub fn direct_sum_all<'a>(quiver: Arc<Quiver>, parts: impl IntoIterator<Item = &'a ZRep>) -> Result<ZRep, RepError> {
        parts.into_iter().try_fold(ZRep::zero(quiver), |acc, p| acc.direct_sum(p))
    }

    /// `D M = Hom_ℤ(M, ℤ)` as a lattice over the opposite quiver.
    pub fn dual(&self) -> Result<ZRep, RepError> {
        self.require_lattice()?;
        let op = Arc::new(self.quiver.opposite());
        let actions = self.actions.iter().map(Matrix::transpose).collect();
        ZRep::lattice(op, &self.generator_counts(), actions)
    }

    /// Checks that `f` is a morphism of lattices `self → target`.
    pub fn is_morphism_to(&self, target: &ZRep, f: &[IntMatrix]) -> bool {
        if f.len() != self.vertices.len() {
            return false;
        }
        for (v, m) in f.iter().enumerate() {
            if m.shape() != (target.vertices[v].generators, self.vertices[v].generators) {
                return false;
            }
        }
        self.quiver.arrows().iter().enumerate().all(|(k, a)| {
            f[a.target].mul(&self.actions[k]) == target.actions[k].mul(&f[a.source])
        })
    }

    /// Kernel of a lattice morphism `self → (anything)`, with its inclusion.
    pub fn kernel_of(&self, f: &[IntMatrix]) -> Result<(ZRep, RepMap), RepError> {
        self.require_lattice()?;
        let bases: Vec<IntMatrix> = f.iter().map(kernel_basis).collect();
        let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
        let mut actions = Vec::with_capacity(self.actions.len());
        for (k, a) in self.quiver.arrows().iter().enumerate() {
            let pushed = self.actions[k].mul(&bases[a.source]);
            actions.push(solve_matrix(&bases[a.target], &pushed)?);
        }
        let k = ZRep::lattice(self.quiver.clone(), &dims, actions)?;
        Ok((k, bases))
    }

    /// Cokernel of a lattice morphism `source → self`. The image must be
    /// saturated at every vertex so that the quotient is again a lattice.
    /// Returns the quotient and its projection.
    pub fn cokernel_of(&self, f: &[IntMatrix]) -> Result<(ZRep, RepMap), RepError> {
        self.require_lattice()?;
        let mut projections = Vec::new();
        let mut sections = Vec::new();
        for (v, m) in f.iter().enumerate() {
            let d = snf(m);
            if d.invariant_factors().iter().any(|x| !x.is_one()) {
                return Err(RepError::TorsionCokernel { vertex: v + 1 });
            }
            let g = self.vertices[v].generators;
            projections.push(d.u_inv.row_range(d.rank, g));
            sections.push(d.u.column_range(d.rank, g));
        }
        let dims: Vec<usize> = projections.iter().map(Matrix::rows).collect();
        let actions = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, a)| projections[a.target].mul(&self.actions[k]).mul(&sections[a.source]))
            .collect();
        let q = ZRep::lattice(self.quiver.clone(), &dims, actions)?;
        Ok((q, projections))
    }
}

/// `Hom(M, N)` basis element count helper: sum of a family of morphisms.
pub(crate) fn combine(maps: &[RepMap], coeffs: &[BigInt]) -> RepMap {
    let mut out: RepMap = maps[0].iter().map(|m| Matrix::zeros(m.rows(), m.cols())).collect();
    for (f, c) in maps.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, m) in out.iter_mut().zip(f) {
            *o = o.add(&m.scale(c));
        }
    }
    out
}

pub fn compose(g: &[IntMatrix], f: &[IntMatrix]) -> RepMap {
    g.iter().zip(f).map(|(a, b)| a.mul(b)).collect()
}

/// Whether `Ext¹(M, M)` vanishes.
pub fn is_rigid(m: &ZRep) -> bool {
    ext1_group(m, m).map(|g| g.is_trivial()).unwrap_or(false)
}

/// Rigid with endomorphism ring ℤ.
pub fn is_exceptional(m: &ZRep) -> bool {
    is_rigid(m) && hom_group(m, m).map(|h| h.group == crate::zlinalg::FinAbGroup::free(1)).unwrap_or(false)
}

/// Exceptional lattices are determined up to isomorphism by an invertible
/// homomorphism; with `End ≅ ℤ` a Hom basis element that is unimodular at
/// every vertex is such a witness.
pub fn are_isomorphic_exceptional(m: &ZRep, n: &ZRep) -> Result<bool, RepError> {
    m.same_quiver(n)?;
    for (name, x) in [("first", m), ("second", n)] {
        if !x.is_lattice() || !is_exceptional(x) {
            return Err(RepError::PreconditionViolated(format!("{name} argument is not exceptional")));
        }
    }
    if m.rank_vector() != n.rank_vector() {
        return Ok(false);
    }
    let hom = hom_group(m, n)?;
    Ok(hom.basis.iter().any(|f| f.iter().all(|fv| fv.rows() == 0 || crate::zlinalg::is_unimodular(fv))))
}

/// Splits off a copy of the exceptional lattice `s` from the lattice `m`.
///
/// Looks for `ι: S → M`, `ρ: M → S` with `ρ∘ι = id` by solving the
/// bilinear composition pairing over ℤ, and returns `ker ρ` as the
/// complement.
pub fn strip_summand(m: &ZRep, s: &ZRep) -> Result<ZRep, RepError> {
    m.same_quiver(s)?;
    m.require_lattice()?;
    if !is_exceptional(s) {
        return Err(RepError::PreconditionViolated("summand to strip is not exceptional".into()));
    }
    let ins = hom_group(s, m)?.basis;
    let outs = hom_group(m, s)?.basis;
    if ins.is_empty() || outs.is_empty() {
        return Err(RepError::NotASummand("no nonzero maps in both directions".into()));
    }
    let probe = s
        .vertices
        .iter()
        .position(|g| g.generators > 0)
        .ok_or_else(|| RepError::PreconditionViolated("summand is zero".into()))?;
    // ρ_b ∘ ι_a = c_ab · id_S
    let pairing = Matrix::from_fn(ins.len(), outs.len(), |a, b| {
        outs[b][probe].mul(&ins[a][probe])[(0, 0)].clone()
    });
    let d = snf(&pairing);
    if d.rank == 0 || !d.diagonal(0).is_one() {
        return Err(RepError::NotASummand("composition pairing does not reach the identity".into()));
    }
    let x: Vec<BigInt> = d.u_inv.row(0).to_vec();
    let y: Vec<BigInt> = d.v_inv.column(0);
    let iota = combine(&ins, &x);
    let rho = combine(&outs, &y);
    let id = compose(&rho, &iota);
    debug_assert!(id.iter().enumerate().all(|(v, f)| *f == Matrix::identity(s.vertices[v].generators)));
    let (complement, _) = m.kernel_of(&rho)?;
    Ok(complement)
}

impl fmt::Debug for ZRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZRep(dim {:?}", self.generator_counts())?;
        for (v, g) in self.vertices.iter().enumerate() {
            if !g.is_free() {
                write!(f, ", rel{} {}", v + 1, g.relations)?;
            }
        }
        for (k, a) in self.actions.iter().enumerate() {
            write!(f, ", a{} {}", k + 1, a)?;
        }
        write!(f, ")")
    }
}
