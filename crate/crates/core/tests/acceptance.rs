//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any
//! failure. Values are compared exactly; counts come from the combinatorial
//! oracle in `common`, never from the mutation engine.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use clusterforge::cluster::ObjectKey;
use clusterforge::rep::ext1_group;
use clusterforge::serre::projective_index;
use clusterforge::{
    are_isomorphic_exceptional, build_pool, exchange_graph, field_hom_ext_dims, is_cluster_tilting,
    projective_resolution, verify_bijection_mod_p, ClusterCategory, ClusterObject, ExchangeGraph, FinAbGroup,
    PrimeField, Quiver, RigidPool, ZRep,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{OracleObject, OracleObject::Root};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

struct Case {
    ctx: ClusterCategory,
    pool: RigidPool,
}

fn case(q: Arc<Quiver>, bound: usize) -> Result<Case, String> {
    let ctx = ClusterCategory::new(q);
    let pool = build_pool(&ctx, bound).map_err(err)?;
    Ok(Case { ctx, pool })
}

fn modules(pool: &RigidPool) -> Vec<ZRep> {
    pool.objects()
        .filter_map(|o| match o {
            ClusterObject::Module(m) => Some(m.clone()),
            ClusterObject::ShiftedProjective(_) => None,
        })
        .collect()
}

fn node_keys(g: &ExchangeGraph) -> BTreeSet<Vec<ObjectKey>> {
    g.nodes.iter().map(|t| t.iter().map(ClusterObject::key).collect()).collect()
}

/// Checks the graph against the oracle: same node set, degree `n`,
/// involutive mutations.
fn check_graph(name: &str, q: &Quiver, g: &ExchangeGraph) -> Result<usize, String> {
    let n = q.vertex_count();
    ensure(!g.truncated, || format!("{name}: graph truncated ({:?})", g.reason))?;
    let expected: BTreeSet<Vec<ObjectKey>> = common::clusters(q).into_iter().collect();
    let got = node_keys(g);
    ensure(got.len() == g.node_count(), || format!("{name}: duplicate nodes"))?;
    ensure(got == expected, || format!("{name}: {} nodes, oracle has {} clusters", got.len(), expected.len()))?;
    for i in 0..g.node_count() {
        let nbrs: BTreeSet<usize> = g.adjacency[i].iter().flatten().map(|(j, _)| *j).collect();
        ensure(g.adjacency[i].iter().all(Option::is_some) && nbrs.len() == n && !nbrs.contains(&i), || {
            format!("{name}: node {i} has degree {} (expected {n})", nbrs.len())
        })?;
    }
    ensure(g.mutations_are_involutive(), || format!("{name}: some mu_k mu_k is not the identity"))?;
    ensure(g.is_connected(), || format!("{name}: graph is disconnected"))?;
    Ok(got.len())
}

fn criterion_1() -> Outcome {
    let m = ZRep::torsion_example();
    let ext = ext1_group(&m, &m).map_err(err)?;
    ensure(ext == FinAbGroup::from_cyclic(0, [2u32.into()]), || format!("Ext1(M, M) = {ext}, expected Z/2"))?;
    let res = projective_resolution(&m).map_err(err)?;
    let q = m.quiver();
    ensure(res.terms == vec![vec![0], vec![0, 1], vec![1]], || format!("resolution terms {:?}", res.terms))?;
    let d1 = res.differentials[0].display(q);
    let d2 = res.differentials[1].display(q);
    ensure(d1 == "[[2, a1]]" && d2 == "[[a1], [-2]]", || format!("differentials d1 = {d1}, d2 = {d2}"))?;
    Ok(format!("Ext1(M, M) = {ext}; {}", res.to_string().lines().next().unwrap_or_default()))
}

fn criterion_2() -> Outcome {
    let q = common::a(2);
    let mut c = case(q.clone(), 6)?;
    ensure(c.pool.len() == 5 && c.pool.module_count() == 3, || {
        format!("pool has {} objects, {} modules", c.pool.len(), c.pool.module_count())
    })?;
    let g = exchange_graph(&c.ctx, &mut c.pool, 100).map_err(err)?;
    let nodes = check_graph("A2", &q, &g)?;
    ensure(nodes == 5 && g.undirected_edges().len() == 5, || "not a 5-cycle".into())?;
    Ok("5 rigid indecomposables, exchange graph is a 5-cycle matching the oracle".into())
}

fn dynkin_cases() -> Vec<(&'static str, Arc<Quiver>, usize, usize)> {
    vec![("A3", common::a(3), 9, 14), ("A4", common::a(4), 14, 42), ("D4", common::d4(), 16, 50)]
}

fn criteria_3_and_4() -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut counts = Vec::new();
    let mut transitivity = Vec::new();
    let mut run = || -> Result<(), (u8, String)> {
        for (name, q, objects, clusters) in dynkin_cases() {
            let mut c = case(q.clone(), 6).map_err(|e| (3, e))?;
            let roots = common::positive_roots(&q, 6);
            let mut dims: Vec<Vec<i64>> = modules(&c.pool).iter().map(ZRep::dim_vector).collect();
            dims.sort();
            if dims != roots {
                return Err((3, format!("{name}: pool dimension vectors differ from the positive roots")));
            }
            if c.pool.len() != roots.len() + q.vertex_count() || c.pool.len() != objects {
                return Err((3, format!("{name}: {} objects, expected {objects}", c.pool.len())));
            }
            let oracle = common::clusters(&q).len();
            if oracle != clusters {
                return Err((3, format!("{name}: oracle finds {oracle} clusters, expected {clusters}")));
            }
            let g = exchange_graph(&c.ctx, &mut c.pool, 10_000).map_err(|e| (4, e.to_string()))?;
            let nodes = check_graph(name, &q, &g).map_err(|e| (4, e))?;
            counts.push(format!("{name} {}/{}", c.pool.len(), oracle));
            transitivity.push(format!("{name} {nodes} nodes"));
        }
        Ok(())
    };
    let outcome = run();
    let elapsed = start.elapsed();
    let slow = |r: Outcome| match r {
        Ok(s) if elapsed > Duration::from_secs(30) => Err(format!("{s}, but took {elapsed:?} (limit 30 s)")),
        r => r,
    };
    match outcome {
        Ok(()) => (
            slow(Ok(format!("objects/clusters: {}", counts.join(", ")))),
            slow(Ok(format!("BFS reaches every cluster with degree n: {}", transitivity.join(", ")))),
        ),
        Err((3, e)) => (Err(e.clone()), Err(format!("not run: {e}"))),
        Err((_, e)) => (slow(Ok(format!("objects/clusters: {}", counts.join(", ")))), Err(e)),
    }
}

fn oracle_object(x: &ClusterObject) -> OracleObject {
    match x {
        ClusterObject::Module(m) => Root(m.dim_vector()),
        ClusterObject::ShiftedProjective(i) => OracleObject::Shifted(*i),
    }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut edges = 0;
    let mut cases = Vec::new();
    for (name, q, _, _) in dynkin_cases() {
        let mut c = case(q.clone(), 6)?;
        let g = exchange_graph(&c.ctx, &mut c.pool, 10_000).map_err(err)?;
        for e in &g.edges {
            let ext = c.ctx.ext1_c(&e.triangles.x, &e.triangles.y).map_err(err)?;
            ensure(ext == FinAbGroup::free(1), || {
                format!("{name}: Ext1_C({}, {}) = {ext}", e.triangles.x, e.triangles.y)
            })?;
            edges += 1;
        }
        cases.push((c, g, q));
    }
    let mut rank_one_incompatible = 0;
    for sample in 0..200 {
        let (c, g, q) = cases.choose(&mut rng).expect("cases");
        let i = rng.gen_range(0..g.node_count());
        let k = rng.gen_range(0..q.vertex_count());
        let t = &g.nodes[i];
        let (j, kk) = g.adjacency[i][k].expect("full degree");
        let partner = &g.nodes[j][kk];
        let candidates: Vec<&ClusterObject> = c.pool.objects().filter(|y| *y != &t[k] && *y != partner).collect();
        let y = (*candidates.choose(&mut rng).expect("pool has more objects")).clone();
        let mut t2 = t.clone();
        t2[k] = y.clone();
        let rank_one = c.ctx.ext1_c(&t[k], &y).map_err(err)? == FinAbGroup::free(1);
        let oy = oracle_object(&y);
        let completes = t.iter().enumerate().all(|(p, o)| p == k || (*o != y && common::compatible(q, &oracle_object(o), &oy)));
        let predicted = rank_one && completes;
        if rank_one && !completes {
            rank_one_incompatible += 1;
        }
        let actual = is_cluster_tilting(&c.ctx, &t2).map_err(err)?.is_tilting();
        ensure(!predicted && !actual, || {
            format!("sample {sample}: replacing {} by {y} predicted {predicted}, cluster-tilting {actual}", t[k])
        })?;
    }
    Ok(format!(
        "{edges} exchange edges have Ext1_C = Z^1; 200 non-exchange replacements rejected \
         ({rank_one_incompatible} had rank one but an incompatible complement)"
    ))
}

fn criterion_6() -> Outcome {
    let mut summary = Vec::new();
    for (name, q, bound) in
        [("A2", common::a(2), 6), ("A3", common::a(3), 6), ("D4", common::d4(), 6), ("Kronecker", common::kronecker(), 6)]
    {
        let c = case(q, bound)?;
        let objs: Vec<ClusterObject> = c.pool.objects().cloned().collect();
        let mut pairs = 0;
        for x in &objs {
            for y in &objs {
                let a = c.ctx.ext1_c(x, y).map_err(err)?;
                let b = c.ctx.ext1_c(y, x).map_err(err)?;
                ensure(a.is_free() && a.free_rank == b.free_rank, || {
                    format!("{name}: Ext1_C({x}, {y}) = {a}, Ext1_C({y}, {x}) = {b}")
                })?;
                if let (ClusterObject::Module(m), ClusterObject::Module(n)) = (x, y) {
                    let sum = ext1_group(m, n).map_err(err)?.free_rank + ext1_group(n, m).map_err(err)?.free_rank;
                    ensure(a.free_rank == sum, || {
                        format!("{name}: rank Ext1_C({x}, {y}) = {} but module ranks sum to {sum}", a.free_rank)
                    })?;
                }
                pairs += 1;
            }
        }
        summary.push(format!("{name} {pairs} pairs"));
    }
    Ok(summary.join(", "))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for (name, q) in [("A3", common::a(3)), ("A4", common::a(4)), ("D4", common::d4()), ("Kronecker", common::kronecker())] {
        let c = case(q, 6)?;
        let mods = modules(&c.pool);
        for p in [2u64, 3, 5, 7] {
            let report = verify_bijection_mod_p(&c.ctx, &c.pool, p).map_err(err)?;
            ensure(report.passed() && report.distinct_reductions == c.pool.len(), || {
                format!("{name} mod {p}: {:?}", report.violations)
            })?;
            let field = PrimeField::new(p).expect("prime");
            for m in &mods {
                for n in &mods {
                    let dims = field_hom_ext_dims(m, n, &field).map_err(err)?;
                    let hom = c.ctx.hom(m, n).map_err(err)?;
                    let ext = c.ctx.ext1(m, n).map_err(err)?;
                    let t = ext.dim_mod_p(p) - ext.free_rank;
                    let expected = (hom.free_rank + t, ext.dim_mod_p(p));
                    ensure(hom.is_free() && dims == expected, || {
                        format!("{name} mod {p}: dims {dims:?} over F_p, expected {expected:?}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?} (limit 10 s)"))?;
    Ok(format!("p in {{2, 3, 5, 7}}: reductions rigid and injective, {checked} module pairs match"))
}

fn criterion_8() -> Outcome {
    let mut nonproj = 0;
    let mut pairs = 0;
    for (name, q) in [
        ("A2", common::a(2)),
        ("A3", common::a(3)),
        ("A4", common::a(4)),
        ("D4", common::d4()),
        ("Kronecker", common::kronecker()),
    ] {
        let c = case(q.clone(), 6)?;
        let mods = modules(&c.pool);
        let mut taus = Vec::new();
        for m in &mods {
            if projective_index(m).is_some() {
                taus.push(None);
                continue;
            }
            let t = c.ctx.tau(m).map_err(err)?;
            let phi = q.coxeter_apply(&m.dim_vector(), 1);
            ensure(t.dim_vector() == phi, || format!("{name}: dim tau{m:?} = {:?}, Coxeter gives {phi:?}", t.dim_vector()))?;
            let back = c.ctx.tau_inv(&t).map_err(err)?;
            ensure(are_isomorphic_exceptional(&back, m).map_err(err)?, || format!("{name}: tau^-1 tau M differs from M"))?;
            taus.push(Some(t));
            nonproj += 1;
        }
        for m in &mods {
            for (n, tn) in mods.iter().zip(&taus) {
                let Some(tn) = tn else { continue };
                let h = c.ctx.hom(m, tn).map_err(err)?;
                let e = c.ctx.ext1(n, m).map_err(err)?;
                ensure(h.free_rank == e.free_rank, || {
                    format!("{name}: rank Hom(M, tau N) = {} but rank Ext1(N, M) = {}", h.free_rank, e.free_rank)
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{nonproj} non-projective modules, {pairs} AR-duality pairs"))
}

fn euler(q: &Quiver, d: &[i64], e: &[i64]) -> i64 {
    let mut s: i64 = d.iter().zip(e).map(|(a, b)| a * b).sum();
    for arr in q.arrows() {
        s -= d[arr.source] * e[arr.target];
    }
    s
}

fn criterion_9() -> Outcome {
    let mut pairs = 0;
    for (name, q) in [("A2", common::a(2)), ("A3", common::a(3)), ("A4", common::a(4)), ("D4", common::d4())] {
        let c = case(q.clone(), 6)?;
        let mods = modules(&c.pool);
        for m in &mods {
            for n in &mods {
                let h = c.ctx.hom(m, n).map_err(err)?;
                let e = c.ctx.ext1(m, n).map_err(err)?;
                let chi = euler(&q, &m.dim_vector(), &n.dim_vector());
                ensure(h.free_rank as i64 - e.free_rank as i64 == chi, || {
                    format!("{name}: {} - {} != <{:?}, {:?}> = {chi}", h, e, m.dim_vector(), n.dim_vector())
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} module pairs"))
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    })
}

fn report(n: u8, title: &str, outcome: &Outcome, elapsed: Duration) -> bool {
    let (tag, detail, ok) = match outcome {
        Ok(s) => ("PASS", s.as_str(), true),
        Err(s) => ("FAIL", s.as_str(), false),
    };
    println!("criterion {n} {tag} [{:.2} s] {title}: {detail}", elapsed.as_secs_f64());
    ok
}

fn main() {
    let mut ok = true;
    let timed = |f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let r = guarded(f);
        (r, start.elapsed())
    };

    let (r, t) = timed(&criterion_1);
    let r = match r {
        Ok(s) if t >= Duration::from_secs(1) => Err(format!("{s}, but took {t:?} (limit 1 s)")),
        r => r,
    };
    ok &= report(1, "torsion example", &r, t);

    let (r, t) = timed(&criterion_2);
    let r = match r {
        Ok(s) if t >= Duration::from_secs(1) => Err(format!("{s}, but took {t:?} (limit 1 s)")),
        r => r,
    };
    ok &= report(2, "A2 pentagon", &r, t);

    let start = Instant::now();
    let (r3, r4) = catch_unwind(criteria_3_and_4).unwrap_or_else(|_| (Err("panicked".into()), Err("panicked".into())));
    let t = start.elapsed();
    ok &= report(3, "Dynkin counts", &r3, t);
    ok &= report(4, "mutation transitivity", &r4, t);

    let rest: [(u8, &str, &dyn Fn() -> Outcome); 5] = [
        (5, "rank-one criterion", &criterion_5),
        (6, "Ext and 2-CY suite", &criterion_6),
        (7, "bijection mod p", &criterion_7),
        (8, "Serre and tau consistency", &criterion_8),
        (9, "Euler-form oracle", &criterion_9),
    ];
    for (n, title, f) in rest {
        let (r, t) = timed(f);
        ok &= report(n, title, &r, t);
    }
    if !ok {
        std::process::exit(1);
    }
}
