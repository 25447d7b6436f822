//! Acyclic quivers, their Euler form, Coxeter transformation and Dynkin type.
//!
//! Vertices are numbered `0..n` in the library API. File formats and printed
//! output use the 1-based numbering `1..=n`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::zlinalg::{solve_matrix, IntMatrix, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("quiver has no vertices")]
    Empty,
    #[error("arrow {arrow} refers to vertex {vertex}, outside 1..={n}")]
    VertexOutOfRange { arrow: usize, vertex: usize, n: usize },
    #[error("oriented cycle through vertices {}", display_cycle(.0))]
    CyclicQuiver(Vec<usize>),
    #[error("dimension vector has length {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
}

fn display_cycle(c: &[usize]) -> String {
    c.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" -> ")
}

/// Source and target of an arrow, 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
}

/// A finite acyclic quiver. The position of an arrow in `arrows` is its
/// index everywhere else in the crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quiver {
    n: usize,
    arrows: Vec<Arrow>,
    topo: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
    NotDynkin,
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A_{n}"),
            DynkinType::D(n) => write!(f, "D_{n}"),
            DynkinType::E6 => write!(f, "E6"),
            DynkinType::E7 => write!(f, "E7"),
            DynkinType::E8 => write!(f, "E8"),
            DynkinType::NotDynkin => write!(f, "not Dynkin"),
        }
    }
}

/// A path as the sequence of arrow indices it traverses, first arrow first.
pub type Path = Vec<usize>;

/// Topological order with smallest-index-first tie-breaking.
pub fn validate(n: usize, arrows: &[Arrow]) -> Result<Vec<usize>, QuiverError> {
    if n == 0 {
        return Err(QuiverError::Empty);
    }
    for (k, a) in arrows.iter().enumerate() {
        for v in [a.source, a.target] {
            if v >= n {
                return Err(QuiverError::VertexOutOfRange { arrow: k + 1, vertex: v + 1, n });
            }
        }
    }
    let mut indeg = vec![0usize; n];
    for a in arrows {
        indeg[a.target] += 1;
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for a in arrows.iter().filter(|a| a.source == v) {
            indeg[a.target] -= 1;
            if indeg[a.target] == 0 {
                ready.insert(a.target);
            }
        }
    }
    if order.len() < n {
        return Err(QuiverError::CyclicQuiver(find_cycle(n, arrows, &indeg)));
    }
    Ok(order)
}

/// A witness cycle among vertices left with positive in-degree.
fn find_cycle(n: usize, arrows: &[Arrow], indeg: &[usize]) -> Vec<usize> {
    let start = (0..n).find(|&v| indeg[v] > 0).expect("a vertex on a cycle");
    // Walk backwards along arrows between leftover vertices until a repeat.
    let mut seen = BTreeMap::new();
    let mut walk = vec![start];
    let mut v = start;
    loop {
        seen.insert(v, walk.len() - 1);
        let pred = arrows
            .iter()
            .find(|a| a.target == v && indeg[a.source] > 0)
            .map(|a| a.source)
            .expect("leftover vertices have leftover predecessors");
        if let Some(&pos) = seen.get(&pred) {
            let mut cycle: Vec<usize> = walk[pos..].to_vec();
            cycle.reverse();
            cycle.push(cycle[0]);
            return cycle;
        }
        walk.push(pred);
        v = pred;
    }
}

impl Quiver {
    /// `arrows` as 0-based `(source, target)` pairs.
    pub fn new(n: usize, arrows: &[(usize, usize)]) -> Result<Self, QuiverError> {
        let arrows: Vec<Arrow> = arrows.iter().map(|&(s, t)| Arrow { source: s, target: t }).collect();
        let topo = validate(n, &arrows)?;
        Ok(Quiver { n, arrows, topo })
    }

    /// Linear orientation `1 → 2 → … → n`.
    pub fn linear_a(n: usize) -> Self {
        let arrows: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Quiver::new(n, &arrows).expect("linear quiver is acyclic")
    }

    /// Two parallel arrows `1 ⇉ 2`.
    pub fn kronecker() -> Self {
        Quiver::new(2, &[(0, 1), (0, 1)]).expect("acyclic")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: usize) -> Arrow {
        self.arrows[a]
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Same vertices, every arrow reversed, arrow indices preserved.
    pub fn opposite(&self) -> Quiver {
        let arrows: Vec<(usize, usize)> = self.arrows.iter().map(|a| (a.target, a.source)).collect();
        Quiver::new(self.n, &arrows).expect("opposite of an acyclic quiver is acyclic")
    }

    /// Reverses every arrow incident to `v`.
    pub fn reflect_at(&self, v: usize) -> Quiver {
        let arrows: Vec<(usize, usize)> = self
            .arrows
            .iter()
            .map(|a| if a.source == v || a.target == v { (a.target, a.source) } else { (a.source, a.target) })
            .collect();
        Quiver::new(self.n, &arrows).expect("reflection at a sink or source keeps the quiver acyclic")
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.arrows.iter().all(|a| a.source != v)
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.arrows.iter().all(|a| a.target != v)
    }

    pub fn arrows_into(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].target == v)
    }

    pub fn arrows_out_of(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].source == v)
    }

    /// All paths from `from` to `to` (the trivial path when equal), in
    /// lexicographic order of their arrow-index sequences.
    pub fn paths(&self, from: usize, to: usize) -> Vec<Path> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.collect_paths(from, to, &mut stack, &mut out);
        out
    }

    fn collect_paths(&self, at: usize, to: usize, prefix: &mut Path, out: &mut Vec<Path>) {
        if at == to {
            out.push(prefix.clone());
        }
        for a in self.arrows_out_of(at) {
            prefix.push(a);
            self.collect_paths(self.arrows[a].target, to, prefix, out);
            prefix.pop();
        }
    }

    pub fn path_count(&self, from: usize, to: usize) -> usize {
        self.paths(from, to).len()
    }

    /// The Euler form matrix `B = I − A` with `A_{ij} = #{arrows i → j}`.
    pub fn euler_matrix(&self) -> Matrix<i64> {
        let mut b = Matrix::identity(self.n);
        for a in &self.arrows {
            b[(a.source, a.target)] -= 1;
        }
        b
    }

    /// `⟨d, e⟩ = Σ dᵢeᵢ − Σ_{a:i→j} dᵢeⱼ`.
    pub fn euler_form(&self, d: &[i64], e: &[i64]) -> Result<i64, QuiverError> {
        for v in [d, e] {
            if v.len() != self.n {
                return Err(QuiverError::DimensionMismatch { got: v.len(), expected: self.n });
            }
        }
        let diag: i64 = d.iter().zip(e).map(|(x, y)| x * y).sum();
        let arrows: i64 = self.arrows.iter().map(|a| d[a.source] * e[a.target]).sum();
        Ok(diag - arrows)
    }

    /// The Coxeter matrix `Φ = −B⁻¹Bᵀ`, normalized so that `Φ·dim M = dim τM`.
    pub fn coxeter_matrix(&self) -> Matrix<i64> {
        let (b_inv, bt) = self.euler_inverse_and_transpose();
        b_inv.mul(&bt).neg()
    }

    /// `Φ⁻¹ = −B⁻ᵀB`.
    pub fn inverse_coxeter_matrix(&self) -> Matrix<i64> {
        let (b_inv, _) = self.euler_inverse_and_transpose();
        b_inv.transpose().mul(&self.euler_matrix()).neg()
    }

    fn euler_inverse_and_transpose(&self) -> (Matrix<i64>, Matrix<i64>) {
        let b = self.euler_matrix();
        let big: IntMatrix = b.map(|&x| BigInt::from(x));
        // B is unitriangular in topological order, so its inverse is integral.
        let inv = solve_matrix(&big, &Matrix::identity(self.n)).expect("Euler matrix is unimodular");
        (inv.map(|x| x.to_i64().expect("Coxeter entries fit in i64")), b.transpose())
    }

    /// `Φ^power · d`.
    pub fn coxeter_apply(&self, d: &[i64], power: i64) -> Vec<i64> {
        assert_eq!(d.len(), self.n, "dimension vector length");
        let phi = if power >= 0 { self.coxeter_matrix() } else { self.inverse_coxeter_matrix() };
        let mut v = d.to_vec();
        for _ in 0..power.unsigned_abs() {
            v = phi.mul_vec(&v);
        }
        v
    }

    /// Reflection `sᵢ` on dimension vectors: `d_v ↦ Σ_{neighbours} d − d_v`.
    pub fn simple_reflection(&self, d: &[i64], v: usize) -> Vec<i64> {
        let mut out = d.to_vec();
        let nb: i64 = self
            .arrows
            .iter()
            .map(|a| {
                if a.source == v && a.target != v {
                    d[a.target]
                } else if a.target == v && a.source != v {
                    d[a.source]
                } else {
                    0
                }
            })
            .sum();
        out[v] = nb - d[v];
        out
    }

    /// Connected components of the underlying graph, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut members = Vec::new();
            comp[s] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for a in &self.arrows {
                    for (x, y) in [(a.source, a.target), (a.target, a.source)] {
                        if x == v && comp[y] == usize::MAX {
                            comp[y] = id;
                            stack.push(y);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Classifies the underlying graph. Disconnected quivers, multiple
    /// edges and cycles are `NotDynkin`.
    pub fn dynkin_type(&self) -> DynkinType {
        if self.components().len() != 1 {
            return DynkinType::NotDynkin;
        }
        classify_tree(self.n, &self.arrows)
    }

    /// Every connected component is of Dynkin type.
    pub fn is_representation_finite(&self) -> bool {
        self.components().iter().all(|comp| {
            let idx: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let arrows: Vec<Arrow> = self
                .arrows
                .iter()
                .filter(|a| idx.contains_key(&a.source))
                .map(|a| Arrow { source: idx[&a.source], target: idx[&a.target] })
                .collect();
            classify_tree(comp.len(), &arrows) != DynkinType::NotDynkin
        })
    }
}

fn classify_tree(n: usize, arrows: &[Arrow]) -> DynkinType {
    // A connected simple graph is a tree iff it has n − 1 edges.
    if arrows.len() != n - 1 {
        return DynkinType::NotDynkin;
    }
    let mut edges: Vec<(usize, usize)> =
        arrows.iter().map(|a| (a.source.min(a.target), a.source.max(a.target))).collect();
    edges.sort_unstable();
    edges.dedup();
    if edges.len() != arrows.len() {
        return DynkinType::NotDynkin;
    }
    let mut adj = vec![Vec::new(); n];
    for &(x, y) in &edges {
        adj[x].push(y);
        adj[y].push(x);
    }
    let branch: Vec<usize> = (0..n).filter(|&v| adj[v].len() >= 3).collect();
    match branch.as_slice() {
        [] => DynkinType::A(n),
        [c] if adj[*c].len() == 3 => {
            // leg lengths from the branch point
            let mut legs: Vec<usize> = adj[*c]
                .iter()
                .map(|&start| {
                    let (mut prev, mut cur, mut len) = (*c, start, 1);
                    while let Some(&next) = adj[cur].iter().find(|&&x| x != prev) {
                        prev = cur;
                        cur = next;
                        len += 1;
                    }
                    len
                })
                .collect();
            legs.sort_unstable();
            match legs.as_slice() {
                [1, 1, _] => DynkinType::D(n),
                [1, 2, 2] => DynkinType::E6,
                [1, 2, 3] => DynkinType::E7,
                [1, 2, 4] => DynkinType::E8,
                _ => DynkinType::NotDynkin,
            }
        }
        _ => DynkinType::NotDynkin,
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({} vertices; ", self.n)?;
        let arrows: Vec<String> =
            self.arrows.iter().map(|a| format!("{}->{}", a.source + 1, a.target + 1)).collect();
        write!(f, "{})", arrows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Quiver {
        Quiver::linear_a(2)
    }

    #[test]
    fn validate_orders() {
        assert_eq!(a2().topological_order(), &[0, 1]);
        assert_eq!(Quiver::kronecker().topological_order(), &[0, 1]);
        let q = Quiver::new(3, &[(2, 0), (1, 0)]).unwrap();
        assert_eq!(q.topological_order(), &[1, 2, 0]);
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err = Quiver::new(2, &[(0, 1), (1, 0)]).unwrap_err();
        match err {
            QuiverError::CyclicQuiver(c) => {
                assert_eq!(c.first(), c.last());
                assert_eq!(c.len(), 3);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(Quiver::new(1, &[(0, 0)]), Err(QuiverError::CyclicQuiver(_))));
    }

    #[test]
    fn euler_form_examples() {
        let q = a2();
        assert_eq!(q.euler_form(&[1, 0], &[0, 1]).unwrap(), -1);
        assert_eq!(q.euler_form(&[1, 1], &[1, 1]).unwrap(), 1);
        assert_eq!(q.euler_form(&[0, 0], &[3, 7]).unwrap(), 0);
        assert!(q.euler_form(&[1], &[1, 1]).is_err());
    }

    #[test]
    fn coxeter_examples() {
        assert_eq!(a2().coxeter_apply(&[1, 0], 1), vec![0, 1]);
        let point = Quiver::new(1, &[]).unwrap();
        assert_eq!(point.coxeter_apply(&[1], 1), vec![-1]);
        assert_eq!(Quiver::kronecker().coxeter_apply(&[0, 1], -1), vec![2, 3]);
    }

    #[test]
    fn coxeter_inverse_is_inverse() {
        let q = Quiver::new(4, &[(0, 1), (2, 1), (1, 3), (0, 3)]).unwrap();
        let prod = q.coxeter_matrix().mul(&q.inverse_coxeter_matrix());
        assert_eq!(prod, Matrix::identity(4));
    }

    #[test]
    fn dynkin_examples() {
        assert_eq!(a2().dynkin_type(), DynkinType::A(2));
        assert_eq!(Quiver::kronecker().dynkin_type(), DynkinType::NotDynkin);
        let d4 = Quiver::new(4, &[(1, 0), (2, 0), (3, 0)]).unwrap();
        assert_eq!(d4.dynkin_type(), DynkinType::D(4));
        let e6 = Quiver::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)]).unwrap();
        assert_eq!(e6.dynkin_type(), DynkinType::E6);
        let affine_d4 = Quiver::new(5, &[(1, 0), (2, 0), (3, 0), (4, 0)]).unwrap();
        assert_eq!(affine_d4.dynkin_type(), DynkinType::NotDynkin);
        let two_points = Quiver::new(2, &[]).unwrap();
        assert_eq!(two_points.dynkin_type(), DynkinType::NotDynkin);
        assert!(two_points.is_representation_finite());
    }

    #[test]
    fn paths_are_lexicographic() {
        let q = Quiver::kronecker();
        assert_eq!(q.paths(0, 1), vec![vec![0], vec![1]]);
        assert_eq!(q.paths(0, 0), vec![Vec::<usize>::new()]);
        assert!(q.paths(1, 0).is_empty());
    }
}
