use std::collections::HashSet;

use serde::Serialize;

use super::{ClusterCategory, ClusterError, ClusterObject, RigidPool};
use crate::rep::{are_isomorphic_exceptional, base_change, is_exceptional, ZRep};
use crate::serre::projective_index;
use crate::zlinalg::{FinAbGroup, PrimeField};

const MAX_DETAILS: usize = 10;

/// One named invariant check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    /// The first few violations.
    pub failures: Vec<String>,
}

impl CheckResult {
    fn new(name: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed: true, checked: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.passed = false;
            if self.failures.len() < MAX_DETAILS {
                self.failures.push(what());
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BijectionReport {
    pub prime: u64,
    pub objects: usize,
    /// Objects whose reduction has `End = 𝔽_p` and no self-extensions.
    pub rigid_reductions: usize,
    pub distinct_reductions: usize,
    pub violations: Vec<String>,
}

impl BijectionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn underlying(ctx: &ClusterCategory, x: &ClusterObject) -> (u8, ZRep) {
    match x {
        ClusterObject::Module(m) => (0, m.clone()),
        ClusterObject::ShiftedProjective(i) => (1, ctx.projective(*i)),
    }
}

/// Reduction mod `p` of every pool object: the reduced representation must
/// be rigid with one-dimensional endomorphisms, matching the integral
/// ranks, and distinct objects must reduce to distinct objects.
pub fn verify_bijection_mod_p(ctx: &ClusterCategory, pool: &RigidPool, p: u64) -> Result<BijectionReport, ClusterError> {
    let field = PrimeField::new(p)
        .ok_or_else(|| ClusterError::InvalidCluster(format!("{p} is not a prime below 2^32")))?;
    let mut report =
        BijectionReport { prime: p, objects: pool.len(), rigid_reductions: 0, distinct_reductions: 0, violations: Vec::new() };
    let mut seen = HashSet::new();
    for entry in pool.entries() {
        let (tag, m) = underlying(ctx, &entry.object);
        let reduced = base_change(&m, &field);
        let dims = reduced.hom_ext_dims(&reduced)?;
        let integral = (ctx.hom(&m, &m)?.free_rank, ctx.ext1(&m, &m)?.free_rank);
        if dims == (1, 0) && integral == (1, 0) {
            report.rigid_reductions += 1;
        } else {
            report.violations.push(format!(
                "{}: End/Ext1 dimensions {:?} over F_{p}, ranks {:?} over Z",
                entry.object, dims, integral
            ));
        }
        if !seen.insert((tag, reduced.dims.clone())) {
            report.violations.push(format!("{}: reduction coincides with another pool object", entry.object));
        }
    }
    report.distinct_reductions = seen.len();
    Ok(report)
}

fn module_pairs(mods: &[ZRep]) -> impl Iterator<Item = (&ZRep, &ZRep)> {
    mods.iter().flat_map(move |a| mods.iter().map(move |b| (a, b)))
}

/// Runs the invariant checks over all pool objects (plus `extra` lattices,
/// which must be exceptional) and reports each check separately.
pub fn run_invariant_suite(
    ctx: &ClusterCategory,
    pool: &RigidPool,
    primes: &[u64],
    extra: &[ZRep],
) -> Result<Vec<CheckResult>, ClusterError> {
    let q = ctx.quiver().clone();
    let mut results = Vec::new();

    let mut exc = CheckResult::new("extra representations are exceptional");
    let mut objects: Vec<ClusterObject> = pool.objects().cloned().collect();
    for (i, m) in extra.iter().enumerate() {
        let ok = m.is_lattice() && is_exceptional(m);
        exc.record(ok, || format!("representation {} is not an exceptional lattice", i + 1));
        if ok {
            objects.push(ClusterObject::Module(m.clone()));
        }
    }
    if !extra.is_empty() {
        results.push(exc);
    }
    let modules: Vec<ZRep> = objects
        .iter()
        .filter_map(|o| match o {
            ClusterObject::Module(m) => Some(m.clone()),
            ClusterObject::ShiftedProjective(_) => None,
        })
        .collect();

    let mut rigid = CheckResult::new("rigidity in the cluster category");
    for x in &objects {
        let g = ctx.ext1_c(x, x)?;
        rigid.record(g.is_trivial(), || format!("Ext1_C({x}, {x}) = {g}"));
    }
    results.push(rigid);

    let mut sym = CheckResult::new("2-CY symmetry");
    for x in &objects {
        for y in &objects {
            let a = ctx.ext1_c(x, y)?;
            let b = ctx.ext1_c(y, x)?;
            sym.record(a.is_free() && b.is_free() && a.free_rank == b.free_rank, || {
                format!("Ext1_C({x}, {y}) = {a} but Ext1_C({y}, {x}) = {b}")
            });
        }
    }
    results.push(sym);

    let mut dec = CheckResult::new("Ext decomposition for module pairs");
    for (m, n) in module_pairs(&modules) {
        let (x, y) = (ClusterObject::Module(m.clone()), ClusterObject::Module(n.clone()));
        let c = ctx.ext1_c(&x, &y)?;
        let (a, b) = (ctx.ext1(m, n)?, ctx.ext1(n, m)?);
        dec.record(c.free_rank == a.free_rank + b.free_rank, || {
            format!("Ext1_C({x}, {y}) = {c}, Ext1 = {a} and {b}")
        });
    }
    results.push(dec);

    let mut euler = CheckResult::new("Euler pairing");
    for (m, n) in module_pairs(&modules) {
        let h = ctx.hom(m, n)?.free_rank as i64;
        let e = ctx.ext1(m, n)?.free_rank as i64;
        let form = q.euler_form(&m.dim_vector(), &n.dim_vector()).expect("dimension vectors match");
        euler.record(h - e == form, || {
            format!("{:?}, {:?}: rank Hom - rank Ext1 = {} but <d, e> = {form}", m.dim_vector(), n.dim_vector(), h - e)
        });
    }
    results.push(euler);

    let mut cox = CheckResult::new("tau and Coxeter transformation");
    for m in &modules {
        if projective_index(m).is_some() {
            continue;
        }
        let t = ctx.tau(m)?;
        let expected = q.coxeter_apply(&m.dim_vector(), 1);
        cox.record(t.dim_vector() == expected, || {
            format!("dim tau {:?} = {:?}, Coxeter gives {expected:?}", m.dim_vector(), t.dim_vector())
        });
        let back = ctx.tau_inv(&t)?;
        let iso = are_isomorphic_exceptional(&back, m).unwrap_or(false);
        cox.record(iso, || format!("tau^-1 tau {:?} is not isomorphic to the original", m.dim_vector()));
    }
    results.push(cox);

    let mut ar = CheckResult::new("AR duality ranks");
    for (m, n) in module_pairs(&modules) {
        if projective_index(n).is_some() {
            continue;
        }
        let t = ctx.tau(n)?;
        let lhs = ctx.hom(m, &t)?.free_rank;
        let rhs = ctx.ext1(n, m)?.free_rank;
        ar.record(lhs == rhs, || {
            format!("rank Hom({:?}, tau {:?}) = {lhs}, rank Ext1 = {rhs}", m.dim_vector(), n.dim_vector())
        });
    }
    results.push(ar);

    for &p in primes {
        let mut red = CheckResult::new(format!("reduction mod {p}"));
        let report = verify_bijection_mod_p(ctx, pool, p)?;
        red.checked = report.objects;
        red.passed = report.passed();
        red.failures = report.violations.into_iter().take(MAX_DETAILS).collect();
        // Universal coefficients: reducing the Hom/Ext complex mod p adds
        // one dimension to both ends for each p-divisible invariant factor.
        let field = PrimeField::new(p).expect("checked above");
        for (m, n) in module_pairs(&modules) {
            let dims = base_change(m, &field).hom_ext_dims(&base_change(n, &field))?;
            let h: FinAbGroup = ctx.hom(m, n)?;
            let e = ctx.ext1(m, n)?;
            let extra_dims = e.dim_mod_p(p) - e.free_rank;
            let expected = (h.free_rank + extra_dims, e.dim_mod_p(p));
            red.record(dims == expected, || {
                format!("{:?}, {:?}: dims {dims:?} over F_{p}, expected {expected:?}", m.dim_vector(), n.dim_vector())
            });
        }
        results.push(red);
    }
    Ok(results)
}
