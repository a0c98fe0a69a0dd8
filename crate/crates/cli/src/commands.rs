use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use edp_core::certificates::{
    load_certificate, minimize_vector_discrepancy, save_certificate, search_diagonal_representation,
    search_quadratic_certificate, verify_diagonal_representation, verify_quadratic_certificate, Certificate,
    HapFamily, LpConfig, SdpConfig, VectorOptConfig,
};
use edp_core::constructions::{
    bcc_sequence, character_mod3, expand_multiplicative, expand_multiplicative_complex, parse_multiplicative_spec,
    partial_sum_energy, random_pm1, ComplexSequence, SpecFile,
};
use edp_core::roth::{
    behrend_optimize, capset_power, count_k_aps, density_report, find_5term_solution,
    has_affine_line, is_ap3_free, random_deletion_ap3_free, read_integer_set, write_integer_set, CapSet,
};
use edp_core::search::{
    longest_with_discrepancy, modular_avoiding_length, modular_min_horizon, Checkpoint, SearchConfig, StopReason,
    ValueOrder, DEFAULT_NODE_CAP,
};
use edp_core::seq::{read_sequence, write_sequence};
use edp_core::{discrepancy, Error, SignSequence};
use serde_json::{json, Map, Value};

use crate::artifact::{series, write_file, Status};
use crate::config::ExperimentConfig;
use crate::error::CliError;

/// Appends timestamped lines to `run.log`; silent in validate-only mode.
pub(crate) struct RunLog {
    file: Option<File>,
    start: Instant,
}

impl RunLog {
    pub(crate) fn open(path: Option<&Path>) -> Result<Self, CliError> {
        let file = match path {
            Some(p) => Some(OpenOptions::new().create(true).append(true).open(p).map_err(|e| CliError::io(p, e))?),
            None => None,
        };
        Ok(RunLog { file, start: Instant::now() })
    }

    pub(crate) fn line(&mut self, msg: impl AsRef<str>) {
        if let Some(f) = &mut self.file {
            let _ = writeln!(f, "[{:>10.3}s] {}", self.start.elapsed().as_secs_f64(), msg.as_ref());
        }
    }
}

pub(crate) struct Ctx<'a> {
    pub cfg: &'a ExperimentConfig,
    pub log: RunLog,
    /// Wall-clock data for the envelope.
    pub timing: Map<String, Value>,
    pub time_series: Map<String, Value>,
}

pub(crate) type Outcome = (Status, Value);

impl Ctx<'_> {
    fn dry(&self) -> bool {
        self.cfg.validate_only
    }

    fn budget(&self) -> Duration {
        Duration::from_secs_f64(self.cfg.time_budget)
    }

    fn output(&self, default_name: &str) -> PathBuf {
        self.cfg.path("output").map(Path::to_path_buf).unwrap_or_else(|| self.cfg.output_dir.join(default_name))
    }
}

fn validated() -> Result<Outcome, CliError> {
    Ok((Status::Success, json!({ "validated": true })))
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn positive(cfg: &ExperimentConfig, key: &str) -> Result<usize, CliError> {
    match cfg.require_count(key)? {
        0 => Err(usage(format!("`{key}` must be positive"))),
        v => Ok(v),
    }
}

fn sign_string(seq: &SignSequence) -> String {
    seq.as_slice().iter().map(|&x| if x > 0 { '+' } else if x < 0 { '-' } else { '0' }).collect()
}

fn partial_sum_series(seq: &SignSequence) -> Value {
    series("n", "S_n", seq.partial_sums().iter().enumerate().map(|(i, &s)| ((i + 1) as f64, s as f64)))
}

pub(crate) fn dispatch(ctx: &mut Ctx) -> Result<Outcome, CliError> {
    match ctx.cfg.subcommand.as_str() {
        "discrepancy" => run_discrepancy(ctx),
        "construct" => run_construct(ctx),
        "search" => run_search(ctx),
        "certify" => run_certify(ctx),
        "behrend" => run_behrend(ctx),
        "capset" => run_capset(ctx),
        "count-aps" => run_count_aps(ctx),
        "modular" => run_modular(ctx),
        other => Err(usage(format!("subcommand `{other}` is not dispatched here"))),
    }
}

fn run_discrepancy(ctx: &mut Ctx) -> Result<Outcome, CliError> {
    let input = ctx.cfg.path("input").ok_or_else(|| usage("`input` is required"))?;
    let seq = read_sequence(input)?;
    if ctx.dry() {
        return validated();
    }
    let report = discrepancy(&seq)?;
    ctx.log.line(format!("N = {}, discrepancy {}", seq.len(), report.max_abs_sum));
    let per_d = report.per_d_max.iter().enumerate().map(|(i, &v)| ((i + 1) as f64, v as f64));
    Ok((
        Status::Success,
        json!({
            "length": seq.len(),
            "report": report,
            "series": {
                "partial_sums": partial_sum_series(&seq),
                "per_d_max": series("d", "max |HAP sum|", per_d),
            },
        }),
    ))
}

fn run_construct(ctx: &mut Ctx) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg;
    let kind = cfg.text("kind").unwrap_or_default();
    let n = cfg.count("n")?;
    if n == Some(0) {
        return Err(usage("`n` must be positive"));
    }
    let need_n = || n.ok_or_else(|| usage(format!("construction `{kind}` needs `n`")));
    let seq = match kind {
        "bcc" => bcc_sequence(need_n()?)?,
        "character" => character_mod3(need_n()?)?,
        "random" => {
            need_n()?;
            if ctx.dry() {
                return validated();
            }
            random_pm1(need_n()?, cfg.seed)
        }
        "multiplicative" => {
            let path = cfg.path("spec").ok_or_else(|| usage("construction `multiplicative` needs `spec`"))?;
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            match parse_multiplicative_spec(&text)? {
                SpecFile::Real(spec) => {
                    let full = expand_multiplicative(&spec)?;
                    match n {
                        Some(n) if n > full.len() => {
                            return Err(usage(format!("`n` = {n} exceeds the spec horizon {}", full.len())))
                        }
                        Some(n) => full.prefix(n),
                        None => full,
                    }
                }
                SpecFile::Complex(spec) => {
                    let z = expand_multiplicative_complex(&spec)?;
                    if ctx.dry() {
                        return validated();
                    }
                    return Ok(complex_payload(&z));
                }
            }
        }
        other => return Err(usage(format!("unknown construction `{other}`"))),
    };
    if ctx.dry() {
        return validated();
    }
    let report = discrepancy(&seq)?;
    let energy = partial_sum_energy(&ComplexSequence::<f64>::from_signs(&seq))?;
    let out = ctx.output("sequence.seq");
    write_sequence(&out, &seq, &[&format!("{kind} sequence, N = {}", seq.len())])?;
    ctx.log.line(format!("wrote {} entries to {}", seq.len(), out.display()));
    let sums = seq.partial_sums();
    Ok((
        Status::Success,
        json!({
            "kind": kind,
            "length": seq.len(),
            "discrepancy": report.max_abs_sum,
            "witness": { "d": report.witness.d, "m": report.witness.m },
            "max_partial_sum": sums.iter().copied().max().unwrap_or(0),
            "min_partial_sum": sums.iter().copied().min().unwrap_or(0),
            "partial_sum_energy": energy,
            "sequence_file": out,
            "series": { "partial_sums": partial_sum_series(&seq) },
        }),
    ))
}

fn complex_payload(z: &ComplexSequence<f64>) -> Outcome {
    let mut acc = num_complex::Complex::new(0.0, 0.0);
    let norms: Vec<(f64, f64)> = z
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            acc += v;
            ((i + 1) as f64, acc.norm())
        })
        .collect();
    let energy = partial_sum_energy(z).unwrap_or(f64::NAN);
    let max = norms.iter().map(|p| p.1).fold(0.0, f64::max);
    (
        Status::Success,
        json!({
            "kind": "multiplicative",
            "complex": true,
            "length": z.len(),
            "partial_sum_energy": energy,
            "max_partial_sum_norm": max,
            "series": { "partial_sum_norms": series("n", "|S_n|", norms) },
        }),
    )
}

fn stop_name(s: StopReason) -> Value {
    serde_json::to_value(s).unwrap_or(Value::Null)
}

fn run_search(ctx: &mut Ctx) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg;
    let bound = u32::try_from(positive(cfg, "C")?).map_err(|_| usage("`C` is too large"))?;
    let prove = cfg.flag("prove");
    let max_length = cfg.count("max_length")?;
    if prove && max_length.is_some() {
        return Err(usage("`prove` and `max_length` cannot be combined: a length cap never exhausts the tree"));
    }
    let order: ValueOrder = cfg.text("order").unwrap_or("balanced").parse()?;
    let node_cap = cfg.count("node_budget")?.map(|v| v as u64);
    let chunk = cfg.count("chunk_nodes")?.unwrap_or(1 << 20).max(1) as u64;
    let base = SearchConfig {
        target_discrepancy: bound,
        max_length,
        time_budget: ctx.budget(),
        node_budget: None,
        value_order: order,
        multiplicative_only: cfg.flag("multiplicative"),
        seed: cfg.seed,
        resume: None,
    };
    base.validate()?;
    let mut current = cfg.path("resume").map(Checkpoint::load).transpose()?;
    if ctx.dry() {
        return validated();
    }

    let start = Instant::now();
    let deadline = start + ctx.budget();
    let mut by_nodes = Vec::new();
    let mut by_time = Vec::new();
    let result = loop {
        let done = current.as_ref().map_or(0, |c| c.nodes_visited);
        let target = node_cap.map_or(done + chunk, |cap| cap.min(done + chunk));
        let remaining = deadline.saturating_duration_since(Instant::now()).max(Duration::from_millis(1));
        let step = SearchConfig { node_budget: Some(target), time_budget: remaining, resume: current.take(), ..base.clone() };
        let res = longest_with_discrepancy(&step)?;
        by_nodes.push((res.nodes_visited as f64, res.best_length as f64));
        by_time.push((start.elapsed().as_secs_f64(), res.best_length as f64));
        let chunk_boundary =
            res.stop_reason == StopReason::NodeBudget && node_cap.is_none_or(|cap| res.nodes_visited < cap);
        if chunk_boundary && Instant::now() < deadline {
            current = res.checkpoint.clone();
            continue;
        }
        break res;
    };
    ctx.log.line(format!(
        "C = {bound}: best length {} after {} nodes ({:?})",
        result.best_length,
        result.nodes_visited,
        result.stop_reason
    ));
    let witness_file = ctx.output("witness.seq");
    write_sequence(&witness_file, &result.best_sequence, &[&format!("discrepancy <= {bound}, length {}", result.best_length)])?;
    let checkpoint_file = match &result.checkpoint {
        Some(cp) => {
            let path = cfg.output_dir.join("checkpoint.json");
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            }
            cp.save(&path)?;
            Value::from(path.to_string_lossy().into_owned())
        }
        None => Value::Null,
    };
    ctx.timing.insert("search_seconds".into(), json!(start.elapsed().as_secs_f64()));
    ctx.time_series.insert("length_vs_time".into(), series("seconds", "best length", by_time));
    let status = if prove && !result.exhausted { Status::Inconclusive } else { Status::Success };
    Ok((
        status,
        json!({
            "C": bound,
            "multiplicative": base.multiplicative_only,
            "best_length": result.best_length,
            "exhausted": result.exhausted,
            "stop_reason": stop_name(result.stop_reason),
            "nodes_visited": result.nodes_visited,
            "witness": sign_string(&result.best_sequence),
            "witness_file": witness_file,
            "checkpoint_file": checkpoint_file,
            "series": { "length_vs_nodes": series("nodes", "best length", by_nodes) },
        }),
    ))
}

fn certificate_kind(c: &Certificate) -> &'static str {
    match c {
        Certificate::Quadratic(_) => "quadratic",
        Certificate::Diagonal(_) => "diagonal",
    }
}

fn run_certify(ctx: &mut Ctx) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg;
    let action = cfg.text("action").unwrap_or_default();
    if action == "verify" {
        let input = cfg.path("input").ok_or_else(|| usage("`certify verify` needs a certificate file"))?;
        let cert = load_certificate(input)?;
        if ctx.dry() {
            return validated();
        }
        let kind = certificate_kind(&cert);
        return match cert.verify() {
            Ok(b) => {
                ctx.log.line(format!("accepted {kind} certificate, bound {}", b.bound));
                Ok((Status::Success, json!({ "kind": kind, "n": cert.n(), "accepted": true, "bound": b.bound, "certified_c": b.certified_c })))
            }
            Err(Error::Rejected(r)) => {
                ctx.log.line(format!("rejected: {r}"));
                Ok((Status::Rejected, json!({ "kind": kind, "n": cert.n(), "accepted": false, "rejection": r })))
            }
            Err(e) => Err(e.into()),
        };
    }
    let n = positive(cfg, "n")?;
    let iterations = cfg.count("iterations")?;
    match action {
        "sdp" => {
            let mut sdp = SdpConfig { time_budget: Some(ctx.budget()), taper: cfg.count("taper")?.unwrap_or(0), ..SdpConfig::default() };
            if let Some(rho) = cfg.real("rho") {
                sdp.rho = rho;
            }
            if let Some(it) = iterations {
                sdp.max_iterations = it;
            }
            if ctx.dry() {
                return validated();
            }
            let mut sweep = Vec::new();
            if cfg.flag("sweep") {
                for k in 1..n {
                    sweep.push((k as f64, search_quadratic_certificate::<f64>(k, &sdp)?.objective));
                }
            }
            let out = search_quadratic_certificate::<f64>(n, &sdp)?;
            sweep.push((n as f64, out.objective));
            let bound = verify_quadratic_certificate(&out.certificate)?;
            let file = ctx.output("certificate.json");
            save_certificate(&file, &Certificate::Quadratic(out.certificate.clone()))?;
            ctx.log.line(format!("sdp N = {n}: objective {}, verified bound {}", out.objective, bound.bound));
            let weights = out.certificate.weights.iter().enumerate().map(|(i, &b)| ((i + 1) as f64, b));
            let trace = out.trace.iter().map(|&(i, v)| (i as f64, v));
            let mut series_map = json!({
                "trace": series("iteration", "objective", trace),
                "weights": series("n", "b_n", weights),
            });
            if cfg.flag("sweep") {
                series_map["sdp_objective"] = series("N", "objective", sweep);
            }
            Ok((
                Status::Success,
                json!({
                    "n": n,
                    "objective": out.objective,
                    "bound": bound.bound,
                    "certified_c": bound.certified_c,
                    "iterations": out.iterations,
                    "converged": out.converged,
                    "primal_residual": out.primal_residual,
                    "dual_residual": out.dual_residual,
                    "certificate_file": file,
                    "series": series_map,
                }),
            ))
        }
        "lp" => {
            let family = match cfg.text("family").unwrap_or("all-pairs") {
                "diagonal" => HapFamily::Diagonal,
                _ => HapFamily::AllPairs,
            };
            if ctx.dry() {
                return validated();
            }
            let sol = search_diagonal_representation::<f64>(n, &family, &LpConfig::default())?;
            let bound = verify_diagonal_representation(&sol.certificate)?;
            let file = ctx.output("certificate.json");
            save_certificate(&file, &Certificate::Diagonal(sol.certificate.clone()))?;
            ctx.log.line(format!("lp N = {n}: trace {}, {} pivots", sol.trace, sol.pivots));
            Ok((
                Status::Success,
                json!({
                    "n": n,
                    "family": cfg.text("family"),
                    "trace": sol.trace,
                    "bound": bound.bound,
                    "certified_c": bound.certified_c,
                    "pivots": sol.pivots,
                    "variables": sol.variables,
                    "constraints": sol.constraints,
                    "terms": sol.certificate.terms.len(),
                    "certificate_file": file,
                }),
            ))
        }
        "vector" => {
            let dim = match cfg.count("dim")? {
                Some(0) => return Err(usage("`dim` must be positive")),
                Some(d) => d,
                None => n,
            };
            let mut vc = VectorOptConfig::<f64> { seed: cfg.seed, ..VectorOptConfig::default() };
            if let Some(it) = iterations {
                vc.iterations = it;
            }
            if ctx.dry() {
                return validated();
            }
            let (_, value) = minimize_vector_discrepancy::<f64>(n, dim, &vc)?;
            ctx.log.line(format!("vector N = {n}, dim {dim}: {value}"));
            Ok((Status::Success, json!({ "n": n, "dim": dim, "vector_discrepancy": value })))
        }
        other => Err(usage(format!("unknown certify action `{other}`"))),
    }
}

/// Grid for the optimised-density curve: one point per decade, then `n`.
fn decade_grid(n: u64) -> Vec<u64> {
    let mut grid: Vec<u64> = std::iter::successors(Some(100u64), |&g| g.checked_mul(10)).take_while(|&g| g < n).collect();
    grid.push(n);
    grid
}

fn run_behrend(ctx: &mut Ctx) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg;
    let n = cfg.require_count("n")? as u64;
    let seeds = cfg.count("compare_seeds")?.unwrap_or(0) as u64;
    if n < 16 {
        return Err(usage("`n` must be at least 16"));
    }
    if ctx.dry() {
        return validated();
    }
    let (set, params) = behrend_optimize(n)?;
    let out = ctx.output("set.txt");
    write_integer_set(&out, &set)?;
    let report = density_report(&set);
    let mut optimized = Vec::new();
    for g in decade_grid(n) {
        optimized.push((g as f64, behrend_optimize(g)?.0.density()));
    }
    let comparison = if seeds > 0 {
        let mut total = 0.0;
        for s in cfg.seed..cfg.seed + seeds {
            total += random_deletion_ap3_free(n, s)?.density();
        }
        json!({ "seeds": seeds, "mean_density": total / seeds as f64 })
    } else {
        Value::Null
    };
    ctx.log.line(format!("behrend n = {n}: {} elements (m = {}, d = {})", set.len(), params.m, params.d));
    Ok((
        Status::Success,
        json!({
            "n": n,
            "params": params,
            "size": set.len(),
            "density": set.density(),
            "ap3_free": is_ap3_free(&set),
            "reciprocal_sum": report.reciprocal_sum,
            "identity_holds": report.identity_holds,
            "random_deletion": comparison,
            "set_file": out,
            "series": {
                "density": series("n", "density", report.densities.iter().map(|&(k, d)| (k as f64, d))),
                "optimized_density": series("n", "best Behrend density", optimized),
            },
        }),
    ))
}

fn parse_base(text: &str) -> Result<CapSet, CliError> {
    let points: Vec<Vec<u8>> = text
        .split(',')
        .map(|tok| {
            tok.trim()
                .chars()
                .map(|c| c.to_digit(3).map(|d| d as u8).ok_or_else(|| usage(format!("base digit `{c}` is not in 0..3"))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let dim = points.first().map_or(0, Vec::len);
    if dim == 0 || points.iter().any(|p| p.len() != dim) {
        return Err(usage("base points must be non-empty digit strings of equal length"));
    }
    Ok(CapSet::new(dim, &points)?)
}

fn run_capset(ctx: &mut Ctx) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg;
    let copies = positive(cfg, "copies")?;
    let base = parse_base(cfg.text("base").unwrap_or("0,1"))?;
    if ctx.dry() {
        return validated();
    }
    let mut curve = Vec::with_capacity(copies);
    for k in 1..=copies {
        curve.push((k as f64, capset_power(&base, k)?.density()));
    }
    let set = capset_power(&base, copies)?;
    let line = has_affine_line(&set)?;
    let out = ctx.output("capset.json");
    write_file(&out, &(serde_json::to_string(&set)? + "\n"))?;
    ctx.log.line(format!("capset: {} points in dimension {}", set.len(), set.dim()));
    Ok((
        Status::Success,
        json!({
            "base_size": base.len(),
            "base_dim": base.dim(),
            "copies": copies,
            "dim": set.dim(),
            "size": set.len(),
            "density": set.density(),
            "line_free": line.is_none(),
            "line": line,
            "capset_file": out,
            "series": { "density": series("copies", "density", curve) },
        }),
    ))
}

fn run_count_aps(ctx: &mut Ctx) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg;
    let input = cfg.path("input").ok_or_else(|| usage("`input` is required"))?;
    let set = read_integer_set(input)?;
    let k = cfg.count("k")?.unwrap_or(3);
    if k < 3 {
        return Err(usage("`k` must be at least 3"));
    }
    if ctx.dry() {
        return validated();
    }
    let count = count_k_aps(&set, k)?;
    let five = if cfg.flag("five_term") {
        match find_5term_solution(&set)? {
            Some((xs, y)) => json!({ "x": xs, "y": y }),
            None => json!("none"),
        }
    } else {
        Value::Null
    };
    ctx.log.line(format!("{count} {k}-term progressions in {} elements", set.len()));
    Ok((
        Status::Success,
        json!({
            "size": set.len(),
            "ambient_n": set.ambient_n(),
            "k": k,
            "count": count,
            "ap3_free": if k == 3 { Value::from(count == 0) } else { Value::from(is_ap3_free(&set)) },
            "five_term_solution": five,
        }),
    ))
}

fn run_modular(ctx: &mut Ctx) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg;
    let p = u32::try_from(positive(cfg, "p")?).map_err(|_| usage("`p` is too large"))?;
    let n_max = positive(cfg, "n_max")?;
    let cap = cfg.count("node_cap")?.map_or(DEFAULT_NODE_CAP, |c| c as u64);
    let residue = cfg.count("residue")?.map(|r| r as u32);
    if ctx.dry() {
        return validated();
    }
    let payload = match residue {
        Some(r) => {
            let len = modular_avoiding_length(p, r, n_max, cap)?;
            json!({ "p": p, "n_max": n_max, "residue": r, "avoiding_length": len, "reached_n_max": len == n_max })
        }
        None => {
            let h = modular_min_horizon(p, n_max, cap)?;
            json!({ "p": p, "n_max": n_max, "min_horizon": h })
        }
    };
    ctx.log.line(format!("modular p = {p}: {payload}"));
    Ok((Status::Success, payload))
}
