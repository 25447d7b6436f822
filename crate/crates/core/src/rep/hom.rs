//! `Hom` and `Ext¹` between finitely presented representations.
//!
//! Matrices are vectorised row-major, so `vec(A·X·B) = (A ⊗ Bᵀ)·vec(X)`.

use num_bigint::BigInt;

use super::{projective_resolution, RepError, RepMap, ZRep};
use crate::zlinalg::{kernel_basis, subquotient, FinAbGroup, IntMatrix, Matrix};

#[derive(Clone, Debug)]
pub struct HomGroup {
    pub group: FinAbGroup,
    /// One morphism per cyclic factor, torsion factors first. Each morphism
    /// is given on generators, one matrix per vertex.
    pub basis: Vec<RepMap>,
}

/// Block offsets of concatenated variable blocks.
struct Layout {
    offsets: Vec<usize>,
    total: usize,
}

impl Layout {
    fn new(sizes: impl IntoIterator<Item = usize>) -> Self {
        let mut offsets = Vec::new();
        let mut total = 0;
        for s in sizes {
            offsets.push(total);
            total += s;
        }
        Layout { offsets, total }
    }
}

fn place(target: &mut IntMatrix, row: usize, col: usize, block: &IntMatrix) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            let x = &block[(i, j)];
            if !num_traits::Zero::is_zero(x) {
                target[(row + i, col + j)] = target[(row + i, col + j)].clone() + x.clone();
            }
        }
    }
}

fn id(n: usize) -> IntMatrix {
    Matrix::identity(n)
}

/// `δ: ⊕_v Hom(M_v, N_v) → ⊕_a Hom(M_s, N_t)`, `f ↦ f_t M_a − N_a f_s`,
/// on generator matrices.
fn intertwining(m: &ZRep, n: &ZRep) -> (IntMatrix, Layout, Layout) {
    let gm = m.generator_counts();
    let gn = n.generator_counts();
    let arrows = m.quiver().arrows();
    let vars = Layout::new((0..gm.len()).map(|v| gn[v] * gm[v]));
    let eqs = Layout::new(arrows.iter().map(|a| gn[a.target] * gm[a.source]));
    let mut delta = Matrix::zeros(eqs.total, vars.total);
    for (k, a) in arrows.iter().enumerate() {
        let (s, t) = (a.source, a.target);
        place(&mut delta, eqs.offsets[k], vars.offsets[t], &id(gn[t]).kron(&m.action(k).transpose()));
        place(&mut delta, eqs.offsets[k], vars.offsets[s], &n.action(k).kron(&id(gm[s])).neg());
    }
    (delta, vars, eqs)
}

fn unvec(v: &[BigInt], layout: &Layout, shapes: &[(usize, usize)]) -> Vec<IntMatrix> {
    shapes
        .iter()
        .enumerate()
        .map(|(i, &(r, c))| Matrix::from_vec(r, c, v[layout.offsets[i]..layout.offsets[i] + r * c].to_vec()))
        .collect()
}

/// `Hom(M, N)` with an explicit generating family.
pub fn hom_group(m: &ZRep, n: &ZRep) -> Result<HomGroup, RepError> {
    m.same_quiver(n)?;
    let gm = m.generator_counts();
    let gn = n.generator_counts();
    let shapes: Vec<(usize, usize)> = (0..gm.len()).map(|v| (gn[v], gm[v])).collect();
    let (delta, vars, eqs) = intertwining(m, n);

    if m.is_lattice() && n.is_lattice() {
        let k = kernel_basis(&delta);
        let basis = (0..k.cols()).map(|j| unvec(&k.column(j), &vars, &shapes)).collect();
        return Ok(HomGroup { group: FinAbGroup::free(k.cols()), basis });
    }

    // Unknowns: f_v, then X_v with f_v R^M_v = R^N_v X_v, then Y_a with
    // f_t M_a − N_a f_s = R^N_t Y_a.
    let rm: Vec<usize> = m.vertices().iter().map(|g| g.relations.cols()).collect();
    let rn: Vec<usize> = n.vertices().iter().map(|g| g.relations.cols()).collect();
    let arrows = m.quiver().arrows();
    let xs = Layout::new((0..gm.len()).map(|v| rn[v] * rm[v]));
    let ys = Layout::new(arrows.iter().map(|a| rn[a.target] * gm[a.source]));
    let rel_rows = Layout::new((0..gm.len()).map(|v| gn[v] * rm[v]));
    let cols = vars.total + xs.total + ys.total;
    let mut constraints = Matrix::zeros(rel_rows.total + eqs.total, cols);
    for v in 0..gm.len() {
        let r0 = rel_rows.offsets[v];
        place(&mut constraints, r0, vars.offsets[v], &id(gn[v]).kron(&m.vertex(v).relations.transpose()));
        place(&mut constraints, r0, vars.total + xs.offsets[v], &n.vertex(v).relations.kron(&id(rm[v])).neg());
    }
    place(&mut constraints, rel_rows.total, 0, &delta);
    for (k, a) in arrows.iter().enumerate() {
        let block = n.vertex(a.target).relations.kron(&id(gm[a.source])).neg();
        place(&mut constraints, rel_rows.total + eqs.offsets[k], vars.total + xs.total + ys.offsets[k], &block);
    }
    // Maps factoring through the relations of N are zero.
    let zs = Layout::new((0..gm.len()).map(|v| rn[v] * gm[v]));
    let mut denominators = Matrix::zeros(vars.total, zs.total);
    for v in 0..gm.len() {
        place(&mut denominators, vars.offsets[v], zs.offsets[v], &n.vertex(v).relations.kron(&id(gm[v])));
    }
    let sq = subquotient(&constraints, vars.total, &denominators);
    let basis = sq.generators.iter().map(|g| unvec(g, &vars, &shapes)).collect();
    Ok(HomGroup { group: sq.group, basis })
}

/// `Ext¹(M, N)` together with representing cocycles when `M` is a lattice.
///
/// A cocycle assigns to each arrow `a: s → t` a matrix `c_a: M_s → N_t` on
/// generators; the corresponding extension has action `[[N_a, c_a], [0, M_a]]`.
pub fn ext1_with_generators(m: &ZRep, n: &ZRep) -> Result<(FinAbGroup, Vec<Vec<IntMatrix>>), RepError> {
    m.same_quiver(n)?;
    if !m.is_lattice() {
        return Err(RepError::NotALattice);
    }
    let gm = m.generator_counts();
    let gn = n.generator_counts();
    let arrows = m.quiver().arrows();
    let (delta, _, eqs) = intertwining(m, n);
    let rn: Vec<usize> = n.vertices().iter().map(|g| g.relations.cols()).collect();
    // Cochains are taken modulo the relations of N at the arrow's target.
    let rels = Layout::new(arrows.iter().map(|a| rn[a.target] * gm[a.source]));
    let mut rel = Matrix::zeros(eqs.total, rels.total);
    for (k, a) in arrows.iter().enumerate() {
        place(&mut rel, eqs.offsets[k], rels.offsets[k], &n.vertex(a.target).relations.kron(&id(gm[a.source])));
    }
    let denominators = delta.hstack(&rel);
    let sq = subquotient(&Matrix::zeros(0, eqs.total), eqs.total, &denominators);
    let shapes: Vec<(usize, usize)> = arrows.iter().map(|a| (gn[a.target], gm[a.source])).collect();
    let cocycles = sq.generators.iter().map(|g| unvec(g, &eqs, &shapes)).collect();
    Ok((sq.group, cocycles))
}

/// `Ext¹(M, N)`. Lattices use the two-term standard complex; modules with
/// torsion go through a projective resolution of `M`.
pub fn ext1_group(m: &ZRep, n: &ZRep) -> Result<FinAbGroup, RepError> {
    m.same_quiver(n)?;
    if m.is_lattice() {
        return Ok(ext1_with_generators(m, n)?.0);
    }
    ext1_via_resolution(m, n)
}

/// `H¹` of `Hom(P_•, N)`, using `Hom(P_v, N) = N_v`.
pub(crate) fn ext1_via_resolution(m: &ZRep, n: &ZRep) -> Result<FinAbGroup, RepError> {
    let res = projective_resolution(m)?;
    let gn = n.generator_counts();
    let term_layout = |k: usize| Layout::new(res.terms.get(k).map_or(vec![], |t| t.iter().map(|&v| gn[v]).collect()));
    let rel_block = |k: usize| -> IntMatrix {
        let terms = res.terms.get(k).cloned().unwrap_or_default();
        terms
            .iter()
            .fold(Matrix::zeros(0, 0), |acc: IntMatrix, &v| acc.block_diag(&n.vertex(v).relations))
    };
    // d*_k: Hom(P_{k-1}, N) → Hom(P_k, N)
    let pullback = |k: usize| -> IntMatrix {
        let src = term_layout(k - 1);
        let dst = term_layout(k);
        let mut out = Matrix::zeros(dst.total, src.total);
        if let Some(d) = res.differentials.get(k - 1) {
            for (i, &vi) in d.target_vertices.iter().enumerate() {
                for (j, &vj) in d.source_vertices.iter().enumerate() {
                    let combo = &d.entries[i][j];
                    let paths = m.quiver().paths(vi, vj);
                    let mut block: IntMatrix = Matrix::zeros(gn[vj], gn[vi]);
                    for (p, c) in paths.iter().zip(&combo.coeffs) {
                        if !num_traits::Zero::is_zero(c) {
                            block = block.add(&n.path_action(vi, p).scale(c));
                        }
                    }
                    place(&mut out, dst.offsets[j], src.offsets[i], &block);
                }
            }
        }
        out
    };
    let c1 = term_layout(1);
    if c1.total == 0 {
        return Ok(FinAbGroup::zero());
    }
    let d1 = pullback(1);
    let r1 = rel_block(1);
    let constraints = if res.terms.len() > 2 {
        let d2 = pullback(2);
        d2.hstack(&rel_block(2).neg())
    } else {
        Matrix::zeros(0, c1.total)
    };
    let sq = subquotient(&constraints, c1.total, &d1.hstack(&r1));
    Ok(sq.group)
}
