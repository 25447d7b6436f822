//! Test support: sample quivers and a combinatorial cluster oracle.
//!
//! The oracle never touches representations. For a Dynkin quiver the
//! indecomposables are the positive roots (Tits form 1), and between two
//! indecomposables at most one of `Hom` and `Ext¹` is nonzero, so
//! `rank Ext¹(X, Y) = max(0, −⟨x, y⟩)`. Compatibility with `ΣP_j` means the
//! root has no support at `j`.

#![allow(dead_code)]

use std::sync::Arc;

use clusterforge::cluster::ObjectKey;
use clusterforge::Quiver;

pub fn a(n: usize) -> Arc<Quiver> {
    Arc::new(Quiver::linear_a(n))
}

/// D4 with the branch vertex 2 as a sink.
pub fn d4() -> Arc<Quiver> {
    Arc::new(Quiver::new(4, &[(0, 1), (2, 1), (3, 1)]).unwrap())
}

pub fn kronecker() -> Arc<Quiver> {
    Arc::new(Quiver::kronecker())
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OracleObject {
    Root(Vec<i64>),
    Shifted(usize),
}

impl OracleObject {
    pub fn key(&self) -> ObjectKey {
        match self {
            OracleObject::Root(d) => ObjectKey { tag: 0, dims: d.clone() },
            OracleObject::Shifted(i) => ObjectKey { tag: 1, dims: vec![*i as i64] },
        }
    }
}

fn euler(q: &Quiver, d: &[i64], e: &[i64]) -> i64 {
    let n = q.vertex_count();
    let mut s: i64 = (0..n).map(|i| d[i] * e[i]).sum();
    for arr in q.arrows() {
        s -= d[arr.source] * e[arr.target];
    }
    s
}

/// Positive vectors with entries at most `max_entry` and Tits form 1.
pub fn positive_roots(q: &Quiver, max_entry: i64) -> Vec<Vec<i64>> {
    let n = q.vertex_count();
    let mut out = Vec::new();
    let mut d = vec![0i64; n];
    loop {
        let mut i = 0;
        while i < n {
            d[i] += 1;
            if d[i] <= max_entry {
                break;
            }
            d[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        if euler(q, &d, &d) == 1 {
            out.push(d.clone());
        }
    }
    out.sort();
    out
}

pub fn objects(q: &Quiver) -> Vec<OracleObject> {
    let mut v: Vec<OracleObject> = positive_roots(q, 6).into_iter().map(OracleObject::Root).collect();
    v.extend((0..q.vertex_count()).map(OracleObject::Shifted));
    v
}

pub fn compatible(q: &Quiver, x: &OracleObject, y: &OracleObject) -> bool {
    match (x, y) {
        (OracleObject::Root(d), OracleObject::Root(e)) => euler(q, d, e) >= 0 && euler(q, e, d) >= 0,
        (OracleObject::Root(d), OracleObject::Shifted(j)) | (OracleObject::Shifted(j), OracleObject::Root(d)) => d[*j] == 0,
        (OracleObject::Shifted(_), OracleObject::Shifted(_)) => true,
    }
}

/// All pairwise compatible sets of `n` distinct objects, as sorted key lists.
pub fn clusters(q: &Quiver) -> Vec<Vec<ObjectKey>> {
    let objs = objects(q);
    let n = q.vertex_count();
    let m = objs.len();
    let compat: Vec<Vec<bool>> = (0..m).map(|i| (0..m).map(|j| compatible(q, &objs[i], &objs[j])).collect()).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn extend(
        start: usize,
        n: usize,
        compat: &[Vec<bool>],
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if chosen.len() == n {
            out.push(chosen.clone());
            return;
        }
        for i in start..compat.len() {
            if chosen.iter().all(|&c| compat[c][i]) {
                chosen.push(i);
                extend(i + 1, n, compat, chosen, out);
                chosen.pop();
            }
        }
    }
    let mut idx = Vec::new();
    extend(0, n, &compat, &mut chosen, &mut idx);
    for set in idx {
        let mut keys: Vec<ObjectKey> = set.iter().map(|&i| objs[i].key()).collect();
        keys.sort();
        out.push(keys);
    }
    out.sort();
    out
}
