//! Minimal projective resolutions over `ℤQ`.
//!
//! A map `P_j → P_i` between indecomposable projectives is right
//! multiplication by a ℤ-combination of paths `i ⇝ j`; [`PathMatrix`]
//! records a map between direct sums of projectives in that form.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{RepError, RepMap, ZRep};
use crate::quiver::Quiver;
use crate::zlinalg::{column_span_basis, kernel_basis, snf, solve_matrix, IntMatrix, Matrix};

/// A ℤ-combination of the paths `from ⇝ to`, indexed like [`Quiver::paths`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCombo {
    pub from: usize,
    pub to: usize,
    pub coeffs: Vec<BigInt>,
}

impl PathCombo {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Renders with 1-based arrow names, e.g. `2`, `a1`, `a1*a2 - 3`.
    pub fn display(&self, quiver: &Quiver) -> String {
        let paths = quiver.paths(self.from, self.to);
        let mut out = String::new();
        for (p, c) in paths.iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let word = p.iter().map(|a| format!("a{}", a + 1)).collect::<Vec<_>>().join("*");
            let mag = c.abs();
            let body = if word.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                word
            } else {
                format!("{mag}*{word}")
            };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

/// A map `⊕_j P_{source_j} → ⊕_i P_{target_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathMatrix {
    pub target_vertices: Vec<usize>,
    pub source_vertices: Vec<usize>,
    /// `entries[i][j]` combines paths `target_i ⇝ source_j`.
    pub entries: Vec<Vec<PathCombo>>,
}

fn offsets(quiver: &Quiver, summands: &[usize], w: usize) -> (Vec<usize>, usize) {
    let mut offs = Vec::with_capacity(summands.len());
    let mut total = 0;
    for &v in summands {
        offs.push(total);
        total += quiver.path_count(v, w);
    }
    (offs, total)
}

fn concat(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().chain(b).copied().collect()
}

impl PathMatrix {
    /// The map of lattices between the projective sums, vertex by vertex.
    pub fn realize(&self, quiver: &Quiver) -> RepMap {
        (0..quiver.vertex_count())
            .map(|w| {
                let (row_off, rows) = offsets(quiver, &self.target_vertices, w);
                let (col_off, cols) = offsets(quiver, &self.source_vertices, w);
                let mut m = Matrix::zeros(rows, cols);
                for (j, &vj) in self.source_vertices.iter().enumerate() {
                    for (qi, q) in quiver.paths(vj, w).iter().enumerate() {
                        for (i, &vi) in self.target_vertices.iter().enumerate() {
                            let targets = quiver.paths(vi, w);
                            let combo = &self.entries[i][j];
                            for (p, c) in quiver.paths(vi, vj).iter().zip(&combo.coeffs) {
                                if c.is_zero() {
                                    continue;
                                }
                                let pq = concat(p, q);
                                let r = targets.iter().position(|t| *t == pq).expect("composite path");
                                m[(row_off[i] + r, col_off[j] + qi)] += c;
                            }
                        }
                    }
                }
                m
            })
            .collect()
    }

    /// The induced map `⊕_j I_{source_j} → ⊕_i I_{target_i}` on injective
    /// lattices. At vertex `w` it sends `p*` (for `p: w ⇝ source_j`) to the
    /// sum of `c_q · r*` over factorisations `p = r·q` with `r: w ⇝ target_i`.
    pub fn nakayama(&self, quiver: &Quiver) -> RepMap {
        (0..quiver.vertex_count())
            .map(|w| {
                let (row_off, rows) = co_offsets(quiver, &self.target_vertices, w);
                let (col_off, cols) = co_offsets(quiver, &self.source_vertices, w);
                let mut m = Matrix::zeros(rows, cols);
                for (j, &vj) in self.source_vertices.iter().enumerate() {
                    let ps = quiver.paths(w, vj);
                    for (i, &vi) in self.target_vertices.iter().enumerate() {
                        let combo = &self.entries[i][j];
                        let qs = quiver.paths(vi, vj);
                        for (ri, r) in quiver.paths(w, vi).iter().enumerate() {
                            for (q, c) in qs.iter().zip(&combo.coeffs) {
                                if c.is_zero() {
                                    continue;
                                }
                                let rq = concat(r, q);
                                if let Some(pi) = ps.iter().position(|p| *p == rq) {
                                    m[(row_off[i] + ri, col_off[j] + pi)] += c;
                                }
                            }
                        }
                    }
                }
                m
            })
            .collect()
    }

    pub fn display(&self, quiver: &Quiver) -> String {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|row| format!("[{}]", row.iter().map(|c| c.display(quiver)).collect::<Vec<_>>().join(", ")))
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

fn co_offsets(quiver: &Quiver, summands: &[usize], w: usize) -> (Vec<usize>, usize) {
    let mut offs = Vec::with_capacity(summands.len());
    let mut total = 0;
    for &v in summands {
        offs.push(total);
        total += quiver.path_count(w, v);
    }
    (offs, total)
}

/// `0 → P_m → … → P_1 → P_0 → M → 0`.
#[derive(Clone, Debug)]
pub struct ProjResolution {
    quiver: Arc<Quiver>,
    /// Vertices of the indecomposable summands of each `P_k`.
    pub terms: Vec<Vec<usize>>,
    /// `differentials[k]` is the map `P_{k+1} → P_k`.
    pub differentials: Vec<PathMatrix>,
    /// Images in `M` (on generators) of the top elements of `P_0`.
    pub augmentation: Vec<Vec<BigInt>>,
}

impl ProjResolution {
    pub fn projective_sum(&self, k: usize) -> ZRep {
        projective_sum(&self.quiver, &self.terms[k])
    }

    pub fn length(&self) -> usize {
        self.terms.len().saturating_sub(1)
    }
}

pub(crate) fn projective_sum(quiver: &Arc<Quiver>, summands: &[usize]) -> ZRep {
    let parts: Vec<ZRep> = summands.iter().map(|&v| ZRep::projective(quiver.clone(), v)).collect();
    ZRep::direct_sum_all(quiver.clone(), &parts).expect("same quiver")
}

impl fmt::Display for ProjResolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |t: &Vec<usize>| {
            if t.is_empty() {
                "0".to_string()
            } else {
                t.iter().map(|v| format!("P{}", v + 1)).collect::<Vec<_>>().join(" + ")
            }
        };
        write!(f, "0")?;
        for t in self.terms.iter().rev() {
            write!(f, " -> {}", term(t))?;
        }
        writeln!(f, " -> M -> 0")?;
        for (k, d) in self.differentials.iter().enumerate() {
            writeln!(f, "d{}: {}", k + 1, d.display(&self.quiver))?;
        }
        Ok(())
    }
}

/// Generators of the top of `x`: at each vertex, elements of the vertex
/// group spanning it modulo relations and incoming arrows, as few as possible.
fn top_generators(x: &ZRep) -> Vec<(usize, Vec<BigInt>)> {
    let q = x.quiver();
    let mut out = Vec::new();
    for v in 0..q.vertex_count() {
        let g = x.vertex(v).generators;
        if g == 0 {
            continue;
        }
        let mut d = x.vertex(v).relations.clone();
        for a in q.arrows_into(v) {
            d = d.hstack(x.action(a));
        }
        let s = snf(&d);
        for i in 0..g {
            if i >= s.rank || !s.diagonal(i).is_one() {
                out.push((v, s.u.column(i)));
            }
        }
    }
    out
}

/// Kernel of the cover `⊕ P_{v_s} → X` sending the top of the `s`-th
/// summand to `x_s`, as a sublattice of the projective sum.
fn cover_kernel(x: &ZRep, p: &ZRep, tops: &[(usize, Vec<BigInt>)]) -> Result<(ZRep, Vec<IntMatrix>), RepError> {
    let q = x.quiver();
    let mut bases = Vec::with_capacity(q.vertex_count());
    for w in 0..q.vertex_count() {
        let cols: Vec<Vec<BigInt>> = tops
            .iter()
            .flat_map(|(v, e)| q.paths(*v, w).into_iter().map(move |path| (v, e, path)))
            .map(|(v, e, path)| x.path_action(*v, &path).mul_vec(e))
            .collect();
        let phi = Matrix::from_columns(x.vertex(w).generators, &cols);
        let rel = &x.vertex(w).relations;
        let basis = if rel.cols() == 0 {
            kernel_basis(&phi)
        } else {
            let k = kernel_basis(&phi.hstack(&rel.neg()));
            column_span_basis(&k.row_range(0, phi.cols()))
        };
        bases.push(basis);
    }
    let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
    let mut actions = Vec::new();
    for (k, a) in q.arrows().iter().enumerate() {
        let pushed = p.action(k).mul(&bases[a.source]);
        actions.push(solve_matrix(&bases[a.target], &pushed)?);
    }
    Ok((ZRep::lattice(x.quiver_arc().clone(), &dims, actions)?, bases))
}

/// Minimal projective resolution. Over a path ring of ℤ it has length at most 2.
pub fn projective_resolution(m: &ZRep) -> Result<ProjResolution, RepError> {
    let quiver = m.quiver_arc().clone();
    let tops = top_generators(m);
    let mut terms = vec![tops.iter().map(|(v, _)| *v).collect::<Vec<_>>()];
    let augmentation = tops.iter().map(|(_, e)| e.clone()).collect();
    let p0 = projective_sum(&quiver, &terms[0]);
    let (mut kernel, mut bases) = cover_kernel(m, &p0, &tops)?;
    let mut differentials = Vec::new();
    while !kernel.is_zero() {
        if terms.len() > 2 {
            return Err(RepError::PreconditionViolated("resolution longer than expected".into()));
        }
        let prev = terms.last().expect("nonempty").clone();
        let ktops = top_generators(&kernel);
        let sources: Vec<usize> = ktops.iter().map(|(v, _)| *v).collect();
        let mut entries: Vec<Vec<PathCombo>> = prev.iter().map(|_| Vec::with_capacity(sources.len())).collect();
        for (vj, e) in &ktops {
            let y = bases[*vj].mul_vec(e);
            let (offs, _) = offsets(&quiver, &prev, *vj);
            for (i, &vi) in prev.iter().enumerate() {
                let len = quiver.path_count(vi, *vj);
                entries[i].push(PathCombo { from: vi, to: *vj, coeffs: y[offs[i]..offs[i] + len].to_vec() });
            }
        }
        let d = PathMatrix { target_vertices: prev, source_vertices: sources.clone(), entries };
        let pk = projective_sum(&quiver, &sources);
        let realized = d.realize(&quiver);
        let (next, next_bases) = pk.kernel_of(&realized)?;
        differentials.push(d);
        terms.push(sources);
        kernel = next;
        bases = next_bases;
    }
    Ok(ProjResolution { quiver, terms, differentials, augmentation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::compose;

    #[test]
    fn torsion_example_resolution() {
        let m = ZRep::torsion_example();
        let res = projective_resolution(&m).unwrap();
        assert_eq!(res.terms, vec![vec![0], vec![0, 1], vec![1]]);
        let q = m.quiver();
        assert_eq!(res.differentials[0].display(q), "[[2, a1]]");
        assert_eq!(res.differentials[1].display(q), "[[a1], [-2]]");
        let d1 = res.differentials[0].realize(q);
        let d2 = res.differentials[1].realize(q);
        assert!(compose(&d1, &d2).iter().all(|m| m.is_zero()));
        assert_eq!(res.to_string().lines().next().unwrap(), "0 -> P2 -> P1 + P2 -> P1 -> M -> 0");
    }

    #[test]
    fn projective_resolves_itself() {
        let q = Arc::new(Quiver::kronecker());
        let res = projective_resolution(&ZRep::projective(q, 0)).unwrap();
        assert_eq!(res.terms, vec![vec![0]]);
        assert!(res.differentials.is_empty());
    }

    #[test]
    fn simple_at_source() {
        // 0 → P2 ⊕ P2 → P1 → S1 → 0 on the Kronecker quiver
        let q = Arc::new(Quiver::kronecker());
        let res = projective_resolution(&ZRep::simple(q.clone(), 0)).unwrap();
        assert_eq!(res.terms, vec![vec![0], vec![1, 1]]);
        let p1 = res.projective_sum(1);
        let p0 = res.projective_sum(0);
        assert!(p1.is_morphism_to(&p0, &res.differentials[0].realize(&q)));
    }
}
