mod format;

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use clusterforge::cluster::{ObjectKey, TriangleSide};
use clusterforge::zlinalg::is_prime;
use clusterforge::{
    build_pool, exchange_graph, ext1_group, field_hom_ext_dims, hom_group, mutate, run_invariant_suite, tau, tau_inv,
    verify_bijection_mod_p, ClusterCategory, ClusterError, ClusterObject, FinAbGroup, PrimeField, Quiver,
    RigidPool, ZRep,
};
use serde_json::json;

use format::ParseError;

#[derive(Parser)]
#[command(name = "clusterforge", version, about = "Exact computations in the cluster category of an acyclic quiver")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a quiver file.
    Check { quiver: PathBuf },
    /// Ext¹ between two representations (over ℤ, or dimensions over 𝔽_p).
    Ext {
        quiver: PathBuf,
        m: PathBuf,
        n: PathBuf,
        #[arg(long = "prime")]
        primes: Vec<u64>,
    },
    /// Hom between two representations (over ℤ, or dimensions over 𝔽_p).
    Hom {
        quiver: PathBuf,
        m: PathBuf,
        n: PathBuf,
        #[arg(long = "prime")]
        primes: Vec<u64>,
    },
    /// Apply the AR translation `power` times (negative for τ⁻¹).
    Tau {
        quiver: PathBuf,
        m: PathBuf,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        power: i64,
    },
    /// Mutate a cluster-tilting object, e.g. `"P1;P2"` at position 2.
    Mutate {
        quiver: PathBuf,
        /// Summands separated by `;`: P<i>, I<i>, S<i>, sP<i>, [d1,..,dn], or `initial`.
        cluster: String,
        /// 1-based position to mutate at.
        position: Option<usize>,
        /// Read positions from standard input, one per line.
        #[arg(long)]
        interactive: bool,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
        dim_bound: u64,
    },
    /// Explore the exchange graph from the projective cluster.
    Graph {
        quiver: PathBuf,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
        dim_bound: u64,
        #[arg(long, default_value_t = 10_000)]
        max_nodes: usize,
    },
    /// Run the invariant suite on the rigid pool and any extra representations.
    Verify {
        quiver: PathBuf,
        reps: Vec<PathBuf>,
        #[arg(long = "prime")]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
        dim_bound: u64,
    },
    /// List the rigid indecomposables found up to the dimension bound.
    Pool {
        quiver: PathBuf,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
        dim_bound: u64,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Parse(ParseError),
    Domain(String),
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

type Res<T> = Result<T, CliError>;

fn load_quiver(path: &Path) -> Res<Arc<Quiver>> {
    let (n, arrows) = format::read_quiver_spec(path)?;
    Quiver::new(n, &arrows).map(Arc::new).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

fn check_primes(primes: &[u64]) -> Res<()> {
    match primes.iter().find(|&&p| !is_prime(p) || PrimeField::new(p).is_none()) {
        Some(p) => Err(CliError::Usage(format!("--prime {p} is not a prime below 2^32"))),
        None => Ok(()),
    }
}

fn no_dot(fmt: OutputFormat, command: &str) -> Res<()> {
    if fmt == OutputFormat::Dot {
        return Err(CliError::Usage(format!("--format dot is only available for graph, not {command}")));
    }
    Ok(())
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn group_json(g: &FinAbGroup) -> serde_json::Value {
    json!({
        "group": g.to_string(),
        "free_rank": g.free_rank,
        "torsion": g.torsion.iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

fn cmd_check(path: &Path, fmt: OutputFormat) -> Res<String> {
    no_dot(fmt, "check")?;
    let q = load_quiver(path)?;
    let ty = q.dynkin_type();
    let finite = q.is_representation_finite();
    Ok(match fmt {
        OutputFormat::Structured => pretty(&json!({
            "valid": true,
            "vertices": q.vertex_count(),
            "arrows": q.arrows().len(),
            "type": ty.to_string(),
            "representation_finite": finite,
        })),
        _ => format!(
            "valid: yes\nvertices: {}\narrows: {}\ntype: {}\nrepresentation-finite: {}\n",
            q.vertex_count(),
            q.arrows().len(),
            ty,
            if finite { "yes" } else { "no" }
        ),
    })
}

fn cmd_hom_ext(quiver: &Path, m: &Path, n: &Path, primes: &[u64], ext: bool, fmt: OutputFormat) -> Res<String> {
    no_dot(fmt, if ext { "ext" } else { "hom" })?;
    check_primes(primes)?;
    let q = load_quiver(quiver)?;
    let (m, n) = (format::read_rep(m, &q)?, format::read_rep(n, &q)?);
    if primes.is_empty() {
        let g = if ext { ext1_group(&m, &n).map_err(domain)? } else { hom_group(&m, &n).map_err(domain)?.group };
        return Ok(match fmt {
            OutputFormat::Structured => pretty(&group_json(&g)),
            _ => format!("{g}\n"),
        });
    }
    let mut dims = Vec::new();
    for &p in primes {
        let field = PrimeField::new(p).expect("checked");
        let (h, e) = field_hom_ext_dims(&m, &n, &field).map_err(domain)?;
        dims.push((p, if ext { e } else { h }));
    }
    Ok(match fmt {
        OutputFormat::Structured => {
            pretty(&json!(dims.iter().map(|(p, d)| json!({"prime": p, "dimension": d})).collect::<Vec<_>>()))
        }
        _ => dims.iter().map(|(p, d)| format!("F_{p}: {d}\n")).collect(),
    })
}

fn cmd_tau(quiver: &Path, m: &Path, power: i64, fmt: OutputFormat) -> Res<String> {
    no_dot(fmt, "tau")?;
    let q = load_quiver(quiver)?;
    let mut cur = format::read_rep(m, &q)?;
    for _ in 0..power.unsigned_abs() {
        cur = if power > 0 { tau(&cur) } else { tau_inv(&cur) }.map_err(domain)?;
    }
    Ok(match fmt {
        OutputFormat::Structured => pretty(&json!({
            "generators": cur.generator_counts(),
            "rank_vector": cur.rank_vector(),
            "file": format::write_rep(&cur),
        })),
        _ => format::write_rep(&cur),
    })
}

fn parse_index(s: &str, n: usize, token: &str) -> Res<usize> {
    match s.parse::<usize>() {
        Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
        _ => Err(CliError::Usage(format!("bad summand '{token}': vertex must be in 1..={n}"))),
    }
}

fn parse_cluster(text: &str, ctx: &ClusterCategory, pool: &RigidPool) -> Res<Vec<ClusterObject>> {
    let q = ctx.quiver();
    let n = q.vertex_count();
    if matches!(text.trim(), "initial" | "projectives") {
        return Ok(ctx.initial_cluster());
    }
    let mut out = Vec::new();
    for token in text.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let obj = if let Some(i) = token.strip_prefix("sP") {
            ClusterObject::ShiftedProjective(parse_index(i, n, token)?)
        } else if let Some(i) = token.strip_prefix('P') {
            ClusterObject::Module(ZRep::projective(q.clone(), parse_index(i, n, token)?))
        } else if let Some(i) = token.strip_prefix('I') {
            ClusterObject::Module(ZRep::injective_lattice(q.clone(), parse_index(i, n, token)?))
        } else if let Some(i) = token.strip_prefix('S') {
            ClusterObject::Module(ZRep::simple(q.clone(), parse_index(i, n, token)?))
        } else if token.starts_with('[') && token.ends_with(']') {
            let dims: Vec<i64> = token[1..token.len() - 1]
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::Usage(format!("bad dimension vector '{token}'")))?;
            if dims.len() != n {
                return Err(CliError::Usage(format!("dimension vector '{token}' needs {n} entries")));
            }
            match pool.get(&ObjectKey { tag: 0, dims }) {
                Some(e) => e.object.clone(),
                None => return Err(CliError::Domain(format!("no rigid indecomposable {token} in the pool"))),
            }
        } else {
            return Err(CliError::Usage(format!("bad summand '{token}' (use P<i>, I<i>, S<i>, sP<i> or [d1,..])")));
        };
        out.push(obj);
    }
    if out.is_empty() {
        return Err(CliError::Usage("empty cluster".into()));
    }
    Ok(out)
}

fn cluster_spec(t: &[ClusterObject]) -> String {
    t.iter().map(ClusterObject::label).collect::<Vec<_>>().join(";")
}

fn side_label(s: &TriangleSide) -> String {
    s.label()
}

fn context(quiver: &Path, dim_bound: u64) -> Res<(ClusterCategory, RigidPool)> {
    let q = load_quiver(quiver)?;
    let ctx = ClusterCategory::new(q);
    let pool = build_pool(&ctx, dim_bound as usize).map_err(domain)?;
    Ok((ctx, pool))
}

fn mutation_report(
    ctx: &ClusterCategory,
    pool: &mut RigidPool,
    t: &[ClusterObject],
    k: usize,
    fmt: OutputFormat,
) -> Res<(String, Vec<ClusterObject>)> {
    if k >= t.len() {
        return Err(CliError::Usage(format!("position {} out of range 1..={}", k + 1, t.len())));
    }
    let m = mutate(ctx, pool, t, k).map_err(domain)?;
    let ext = ctx.ext1_c(&m.removed, &m.added).map_err(domain)?;
    let tri = &m.triangles;
    let text = match fmt {
        OutputFormat::Structured => pretty(&json!({
            "position": k + 1,
            "removed": m.removed.label(),
            "added": m.added.label(),
            "from_pool": m.from_pool,
            "certificate": ext.to_string(),
            "e": side_label(&tri.e),
            "e_prime": side_label(&tri.e_prime),
            "cluster": m.cluster.iter().map(ClusterObject::label).collect::<Vec<_>>(),
        })),
        _ => {
            let mut s = String::new();
            let _ = writeln!(s, "position: {}", k + 1);
            let _ = writeln!(s, "removed: {}", m.removed);
            let _ = writeln!(s, "added: {} ({})", m.added, if m.from_pool { "pool" } else { "constructed" });
            let _ = writeln!(s, "certificate: Ext1_C({}, {}) = {ext}", m.removed, m.added);
            let _ = writeln!(s, "triangle: {} -> {} -> {} -> S{}", tri.y, side_label(&tri.e), tri.x, tri.y);
            let _ = writeln!(s, "triangle: {} -> {} -> {} -> S{}", tri.x, side_label(&tri.e_prime), tri.y, tri.x);
            let _ = writeln!(s, "cluster: {}", cluster_spec(&m.cluster));
            s
        }
    };
    Ok((text, m.cluster))
}

/// Current cluster, exchange matrix and Ext-rank certificates at every
/// position. `B[j][k]` counts `T_j` in `e'` minus `T_j` in `e` when
/// mutating at `k`.
fn session_state(ctx: &ClusterCategory, pool: &mut RigidPool, t: &[ClusterObject]) -> String {
    let n = t.len();
    let mut s = String::new();
    let _ = writeln!(s, "cluster: {}", cluster_spec(t));
    let mut b = vec![vec![0i64; n]; n];
    let mut certs = Vec::new();
    for k in 0..n {
        match mutate(ctx, pool, t, k) {
            Ok(m) => {
                for (j, tj) in t.iter().enumerate() {
                    if j != k {
                        b[j][k] = m.triangles.e_prime.multiplicity(tj) as i64 - m.triangles.e.multiplicity(tj) as i64;
                    }
                }
                let ext = ctx.ext1_c(&m.removed, &m.added).map(|g| g.to_string()).unwrap_or_else(|e| e.to_string());
                certs.push(format!("  {}: {} <-> {}, Ext1_C = {ext}", k + 1, m.removed, m.added));
            }
            Err(ClusterError::NotFoundWithinBound(_)) => {
                certs.push(format!("  {}: {} has no partner within the bound", k + 1, t[k]));
            }
            Err(e) => certs.push(format!("  {}: {e}", k + 1)),
        }
    }
    let _ = writeln!(s, "exchange matrix:");
    for row in &b {
        let _ = writeln!(s, "  [{}]", row.iter().map(|x| format!("{x:>2}")).collect::<Vec<_>>().join(" "));
    }
    let _ = writeln!(s, "mutations:");
    for c in certs {
        let _ = writeln!(s, "{c}");
    }
    s
}

fn interactive(
    ctx: &ClusterCategory,
    pool: &mut RigidPool,
    mut t: Vec<ClusterObject>,
    input: impl BufRead,
    out: &mut impl Write,
) -> io::Result<()> {
    write!(out, "{}", session_state(ctx, pool, &t))?;
    write!(out, "> ")?;
    out.flush()?;
    for line in input.lines() {
        let line = line?;
        let cmd = line.trim();
        if matches!(cmd, "q" | "quit" | "exit") {
            break;
        }
        if !cmd.is_empty() {
            match cmd.parse::<usize>() {
                Ok(k) if (1..=t.len()).contains(&k) => match mutation_report(ctx, pool, &t, k - 1, OutputFormat::Text) {
                    Ok((report, next)) => {
                        write!(out, "{report}")?;
                        t = next;
                        write!(out, "{}", session_state(ctx, pool, &t))?;
                    }
                    Err(CliError::Domain(e) | CliError::Usage(e)) => writeln!(out, "error: {e}")?,
                    Err(CliError::Parse(e)) => writeln!(out, "error: {e}")?,
                },
                _ => writeln!(out, "error: enter a position in 1..={} or 'quit'", t.len())?,
            }
        }
        write!(out, "> ")?;
        out.flush()?;
    }
    writeln!(out)?;
    Ok(())
}

fn cmd_graph(quiver: &Path, dim_bound: u64, max_nodes: usize, fmt: OutputFormat) -> Res<String> {
    let (ctx, mut pool) = context(quiver, dim_bound)?;
    let g = exchange_graph(&ctx, &mut pool, max_nodes).map_err(domain)?;
    if !g.mutations_are_involutive() {
        return Err(CliError::Domain("mutation is not involutive on some edge".into()));
    }
    Ok(match fmt {
        OutputFormat::Text => g.to_text(),
        OutputFormat::Structured => pretty(&serde_json::to_value(g.summary()).expect("serializable")),
        OutputFormat::Dot => g.to_dot(),
    })
}

fn cmd_verify(quiver: &Path, reps: &[PathBuf], primes: &[u64], dim_bound: u64, fmt: OutputFormat) -> Res<(String, bool)> {
    no_dot(fmt, "verify")?;
    check_primes(primes)?;
    let primes: Vec<u64> = if primes.is_empty() { vec![2, 3, 5, 7] } else { primes.to_vec() };
    let (ctx, pool) = context(quiver, dim_bound)?;
    let extra: Vec<ZRep> = reps.iter().map(|p| format::read_rep(p, ctx.quiver())).collect::<Result<_, _>>()?;
    let results = run_invariant_suite(&ctx, &pool, &primes, &extra).map_err(domain)?;
    let mut bijections = Vec::new();
    for &p in &primes {
        bijections.push(verify_bijection_mod_p(&ctx, &pool, p).map_err(domain)?);
    }
    let ok = results.iter().all(|r| r.passed) && bijections.iter().all(|b| b.passed());
    let text = match fmt {
        OutputFormat::Structured => pretty(&json!({
            "passed": ok,
            "pool": { "objects": pool.len(), "complete": pool.is_complete() },
            "checks": results,
            "bijections": bijections,
        })),
        _ => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "pool: {} objects ({})",
                pool.len(),
                if pool.is_complete() { "complete" } else { "truncated at the dimension bound" }
            );
            for r in &results {
                let _ = writeln!(s, "{} {} ({} checked)", if r.passed { "PASS" } else { "FAIL" }, r.name, r.checked);
                for f in &r.failures {
                    let _ = writeln!(s, "  {f}");
                }
            }
            for b in &bijections {
                let _ = writeln!(
                    s,
                    "{} bijection mod {} ({} of {} objects reduce to distinct rigid objects)",
                    if b.passed() { "PASS" } else { "FAIL" },
                    b.prime,
                    b.distinct_reductions.min(b.rigid_reductions),
                    b.objects
                );
                for v in &b.violations {
                    let _ = writeln!(s, "  {v}");
                }
            }
            let _ = writeln!(s, "{}", if ok { "all checks passed" } else { "some checks failed" });
            s
        }
    };
    Ok((text, ok))
}

fn cmd_pool(quiver: &Path, dim_bound: u64, fmt: OutputFormat) -> Res<String> {
    no_dot(fmt, "pool")?;
    let (ctx, pool) = context(quiver, dim_bound)?;
    let q = ctx.quiver();
    let entries = pool.sorted();
    Ok(match fmt {
        OutputFormat::Structured => pretty(&json!({
            "objects": pool.len(),
            "modules": pool.module_count(),
            "complete": pool.is_complete(),
            "entries": entries.iter().map(|e| json!({
                "label": e.object.label(),
                "class": e.object.class(q),
                "provenance": e.provenance,
            })).collect::<Vec<_>>(),
        })),
        _ => {
            let mut s = format!(
                "objects: {} ({} modules, {} shifted projectives)\ncomplete: {}\n",
                pool.len(),
                pool.module_count(),
                pool.len() - pool.module_count(),
                if pool.is_complete() { "yes" } else { "no" }
            );
            for e in entries {
                let _ = writeln!(s, "{} {:?}", e.object.label(), e.provenance);
            }
            s
        }
    })
}

fn run(cli: Cli) -> Res<(String, bool)> {
    let fmt = cli.format;
    let ok = |s: String| Ok((s, true));
    match cli.command {
        Command::Check { quiver } => ok(cmd_check(&quiver, fmt)?),
        Command::Ext { quiver, m, n, primes } => ok(cmd_hom_ext(&quiver, &m, &n, &primes, true, fmt)?),
        Command::Hom { quiver, m, n, primes } => ok(cmd_hom_ext(&quiver, &m, &n, &primes, false, fmt)?),
        Command::Tau { quiver, m, power } => ok(cmd_tau(&quiver, &m, power, fmt)?),
        Command::Mutate { quiver, cluster, position, interactive: live, dim_bound } => {
            no_dot(fmt, "mutate")?;
            let (ctx, mut pool) = context(&quiver, dim_bound)?;
            let t = parse_cluster(&cluster, &ctx, &pool)?;
            if live {
                let stdin = io::stdin();
                let mut stdout = io::stdout();
                interactive(&ctx, &mut pool, t, stdin.lock(), &mut stdout).map_err(domain)?;
                return ok(String::new());
            }
            let Some(k) = position else {
                return Err(CliError::Usage("mutate needs a position (or --interactive)".into()));
            };
            if k == 0 || k > t.len() {
                return Err(CliError::Usage(format!("position {k} out of range 1..={}", t.len())));
            }
            ok(mutation_report(&ctx, &mut pool, &t, k - 1, fmt)?.0)
        }
        Command::Graph { quiver, dim_bound, max_nodes } => ok(cmd_graph(&quiver, dim_bound, max_nodes, fmt)?),
        Command::Verify { quiver, reps, primes, dim_bound } => cmd_verify(&quiver, &reps, &primes, dim_bound, fmt),
        Command::Pool { quiver, dim_bound } => ok(cmd_pool(&quiver, dim_bound, fmt)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, passed)) => {
            print!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Parse(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(CliError::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
