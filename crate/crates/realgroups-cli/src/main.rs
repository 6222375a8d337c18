//! Command-line front end for the exact real-group library: KGB
//! enumeration, Langlands-parameter validation, tempiric packets, the
//! lowest-K-type computation, and the invariant self-test suites.
//!
//! All output is deterministic JSON lines with fixed field order, rendered
//! by hand so identical inputs produce identical bytes. Exit codes: 0 for
//! success, 1 for an invariant failure detected at run time, 2 for an
//! input error (unparseable flags or files, invalid parameters).

use std::collections::BTreeMap;
use std::io::Read as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num::{BigInt, BigRational, One, Zero};

use realgroups::kgb::{KgbContext, KgbElt};
use realgroups::lattice::{IntMatrix, Q, Z};
use realgroups::lkt;
use realgroups::lparams::{LCtx, LParameter, TrailStep};
use realgroups::rootdata::{build_datum, InnerClass, InnerClassSpec, Isogeny, RootType};
use realgroups::tits::{weyl_from_word, TitsElement};
use realgroups::{checks, oracle, sampling};

#[derive(Parser)]
#[command(name = "realgroups", version, about = "exact computations with strong involutions, KGB spaces, and Langlands parameters")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate the KGB space of an inner class as JSON lines
    Kgb(KgbArgs),
    /// Validate a Langlands parameter file and report its properties
    Param(FileArgs),
    /// Print the tempiric packet of a tempiric parameter
    Packet(FileArgs),
    /// Compute lowest K-types of a complete parameter by both routes
    Lkt(LktArgs),
    /// Run the invariant suites over the built-in corpus
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct GroupFlags {
    /// group type, e.g. "A1", "B2", "A1.A1", "A1.T1", "T1"
    #[arg(long)]
    group: String,
    /// isogeny: "sc" (simply connected) or "ad" (adjoint)
    #[arg(long, default_value = "sc")]
    isogeny: String,
    /// inner class: "c" (identity twist), "s" (split twist), or an explicit
    /// integer matrix as JSON rows, e.g. "[[0,1],[1,0]]"
    #[arg(long, default_value = "c")]
    inner: String,
}

#[derive(Args)]
struct KgbArgs {
    #[command(flatten)]
    group: GroupFlags,
    /// keep only elements whose central square has these exponents
    /// (comma-separated rationals; a single value is broadcast)
    #[arg(long)]
    z: Option<String>,
    /// render a fixed-width column table instead of JSON lines
    #[arg(long)]
    atlas_compat: bool,
}

#[derive(Args)]
struct FileArgs {
    /// parameter file (JSON), or "-" for stdin
    #[arg(long)]
    file: String,
}

#[derive(Args)]
struct LktArgs {
    #[command(flatten)]
    file: FileArgs,
    /// also emit the reduction trail
    #[arg(long)]
    trace: bool,
    /// worker threads for batches over several final characters
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct SelftestArgs {
    /// "quick" (rank-one corpus), "full" (whole corpus), or "oracle"
    /// (full corpus plus the independent matrix-model diffs)
    #[arg(long, default_value = "quick")]
    level: String,
    /// worker threads across corpus entries
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

/// A recoverable input error: printed to stderr, exit code 2.
struct InputError(String);

impl<T: std::fmt::Display> From<T> for InputError {
    fn from(e: T) -> Self {
        InputError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Kgb(a) => cmd_kgb(&a),
        Cmd::Param(a) => cmd_param(&a),
        Cmd::Packet(a) => cmd_packet(&a),
        Cmd::Lkt(a) => cmd_lkt(&a),
        Cmd::Selftest(a) => return cmd_selftest(&a),
    };
    match r {
        Ok(code) => code,
        Err(InputError(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}

// ---------------------------------------------------------------- rendering

fn fmt_q(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn fmt_q_list(v: &[Q]) -> String {
    let items: Vec<String> = v.iter().map(|q| format!("\"{}\"", fmt_q(q))).collect();
    format!("[{}]", items.join(","))
}

fn fmt_usize_list(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(","))
}

fn fmt_z_list(v: &[Z]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(","))
}

fn fmt_x(kgb: &KgbContext, x: &KgbElt) -> String {
    format!(
        "{{\"twisted_involution_word\":{},\"torus_part\":{}}}",
        fmt_usize_list(&kgb.tw_invs[x.ti].w.word),
        fmt_q_list(&x.t)
    )
}

fn fmt_phi(p: &LParameter) -> String {
    format!(
        "{{\"lambda\":{},\"y\":{{\"t\":{},\"word\":{}}}}}",
        fmt_q_list(&p.lambda),
        fmt_q_list(p.y.t.entries()),
        fmt_usize_list(&p.y.w.word)
    )
}

fn fmt_trail(trail: &[TrailStep]) -> String {
    let items: Vec<String> = trail
        .iter()
        .map(|s| match s {
            TrailStep::Cross { group_root } => {
                format!("{{\"step\":\"cross\",\"root\":{}}}", group_root)
            }
            TrailStep::Cayley { group_root } => {
                format!("{{\"step\":\"cayley\",\"root\":{}}}", group_root)
            }
        })
        .collect();
    format!("[{}]", items.join(","))
}

// ------------------------------------------------------------------ parsing

fn parse_q(s: &str) -> Result<Q, InputError> {
    let s = s.trim();
    let q = match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| InputError(format!("bad rational {:?}", s)))?;
            let d: BigInt = d.trim().parse().map_err(|_| InputError(format!("bad rational {:?}", s)))?;
            if d.is_zero() {
                return Err(InputError(format!("zero denominator in {:?}", s)));
            }
            BigRational::new(n, d)
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| InputError(format!("bad rational {:?}", s)))?;
            BigRational::from_integer(n)
        }
    };
    Ok(q)
}

fn parse_isogeny(s: &str) -> Result<Isogeny, InputError> {
    match s {
        "sc" => Ok(Isogeny::SimplyConnected),
        "ad" => Ok(Isogeny::Adjoint),
        other => Err(InputError(format!("isogeny must be \"sc\" or \"ad\", got {:?}", other))),
    }
}

fn parse_inner(s: &str) -> Result<InnerClassSpec, InputError> {
    match s {
        "c" => Ok(InnerClassSpec::Compact),
        "s" => Ok(InnerClassSpec::Split),
        other => {
            let rows: Vec<Vec<i64>> = serde_json::from_str(other)
                .map_err(|_| InputError(format!("inner class must be \"c\", \"s\", or a JSON integer matrix, got {:?}", other)))?;
            Ok(InnerClassSpec::Matrix(IntMatrix::from_rows(&rows)))
        }
    }
}

fn build_inner_class(group: &str, isogeny: &str, inner: &str) -> Result<InnerClass, InputError> {
    let datum = build_datum(group, parse_isogeny(isogeny)?).map_err(|e| InputError(e.to_string()))?;
    InnerClass::from_spec(datum, &parse_inner(inner)?).map_err(|e| InputError(e.to_string()))
}

/// The on-disk parameter format, shared by `param`, `packet`, and `lkt`.
#[derive(serde::Deserialize)]
struct ParamFile {
    group: String,
    #[serde(default = "default_sc")]
    isogeny: String,
    #[serde(default = "default_c")]
    inner: String,
    /// infinitesimal-character datum, ambient coordinates, rationals as strings
    lambda: Vec<String>,
    y: ParamY,
    /// optional final character (exponent vector); when absent, `lkt` runs
    /// over every final character of the standardized parameter
    #[serde(default)]
    chi: Option<Vec<i64>>,
}

fn default_sc() -> String {
    "sc".into()
}
fn default_c() -> String {
    "c".into()
}

#[derive(serde::Deserialize)]
struct ParamY {
    t: Vec<String>,
    #[serde(default)]
    word: Vec<usize>,
}

fn read_param_file(path: &str) -> Result<ParamFile, InputError> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| InputError(e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {}", path, e)))?
    };
    serde_json::from_str(&text).map_err(|e| InputError(format!("parameter file: {}", e)))
}

/// Everything the parameter subcommands need, with ownership arranged so
/// the borrowed contexts stay alive together.
struct Session {
    ic: InnerClass,
    dual_ic: InnerClass,
}

impl Session {
    fn new(pf: &ParamFile) -> Result<Self, InputError> {
        let ic = build_inner_class(&pf.group, &pf.isogeny, &pf.inner)?;
        let dual_ic = ic.dual();
        Ok(Session { ic, dual_ic })
    }

    fn parameter(&self, kgb: &KgbContext, pf: &ParamFile) -> Result<LParameter, InputError> {
        let dual_rank = self.dual_ic.datum.rank;
        if pf.lambda.len() != dual_rank {
            return Err(InputError(format!(
                "lambda has {} coordinates, expected {}",
                pf.lambda.len(),
                dual_rank
            )));
        }
        if pf.y.t.len() != dual_rank {
            return Err(InputError(format!(
                "y.t has {} coordinates, expected {}",
                pf.y.t.len(),
                dual_rank
            )));
        }
        let _ = kgb; // the group-side context is built by the caller
        let lambda: Vec<Q> = pf.lambda.iter().map(|s| parse_q(s)).collect::<Result<_, _>>()?;
        let t: Vec<Q> = pf.y.t.iter().map(|s| parse_q(s)).collect::<Result<_, _>>()?;
        let nsimple = self.dual_ic.datum.ss_rank;
        if pf.y.word.iter().any(|&i| i >= nsimple) {
            return Err(InputError("y.word contains an out-of-range simple index".into()));
        }
        let w = weyl_from_word(&self.dual_ic.datum, &pf.y.word);
        let y = TitsElement {
            t: realgroups::lattice::CochVec::new(t).mod1(),
            w,
            flag: true,
        };
        Ok(LParameter { lambda, y })
    }
}

// -------------------------------------------------------------------- kgb

fn cmd_kgb(a: &KgbArgs) -> Result<ExitCode, InputError> {
    let ic = build_inner_class(&a.group.group, &a.group.isogeny, &a.group.inner)?;
    let kgb = KgbContext::new(&ic).map_err(|e| InputError(e.to_string()))?;
    let all = kgb.enumerate();
    let ids: BTreeMap<KgbElt, usize> = all.iter().cloned().zip(0..).collect();
    let gd = kgb.datum();
    let nsimple = gd.ss_rank;

    let z_filter: Option<Vec<Q>> = match &a.z {
        None => None,
        Some(s) => {
            let parts: Vec<Q> = s.split(',').map(parse_q).collect::<Result<_, _>>()?;
            let rank = gd.rank;
            if parts.len() == rank {
                Some(parts)
            } else if parts.len() == 1 {
                Some(vec![parts[0].clone(); rank])
            } else {
                return Err(InputError(format!("--z wants 1 or {} coordinates", rank)));
            }
        }
    };

    let mut lines = Vec::new();
    let mut compat = Vec::new();
    for x in &all {
        let z = kgb.square(x);
        if let Some(zf) = &z_filter {
            let ok = z.entries().iter().zip(zf).all(|(a, b)| realgroups::lattice::qfrac(&(a - b)).is_zero());
            if !ok {
                continue;
            }
        }
        let id = ids[x];
        let mut grades = Vec::new();
        let mut crosses = Vec::new();
        let mut cayleys = Vec::new();
        for k in 0..nsimple {
            let alpha = gd.simple_index(k);
            let g = match kgb.root_type(x, alpha) {
                RootType::Complex => "C".to_string(),
                RootType::Real => "r".to_string(),
                RootType::Imaginary => {
                    if kgb.is_compact(x, alpha).map_err(|e| InputError(e.to_string()))? {
                        "c".to_string()
                    } else {
                        "n".to_string()
                    }
                }
            };
            grades.push(format!("\"{}\"", g));
            crosses.push(ids[&kgb.cross(k, x)].to_string());
            cayleys.push(match kgb.cayley_up_simple(k, x) {
                Ok(up) => ids[&up].to_string(),
                Err(_) => "null".to_string(),
            });
        }
        if a.atlas_compat {
            compat.push((
                id,
                kgb.tw_invs[x.ti].w.word.len(),
                grades.iter().map(|g| g.trim_matches('"').to_string()).collect::<Vec<_>>().join(""),
                crosses.join(","),
                cayleys.join(","),
                kgb.tw_invs[x.ti]
                    .w
                    .word
                    .iter()
                    .map(|i| (i + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(""),
            ));
        } else {
            lines.push(format!(
                "{{\"id\":{},\"twisted_involution_word\":{},\"torus_part\":{},\"z\":{},\"fiber_index\":{},\"gradings_of_simples\":[{}],\"cross_table\":[{}],\"cayley_table\":[{}]}}",
                id,
                fmt_usize_list(&kgb.tw_invs[x.ti].w.word),
                fmt_q_list(&x.t),
                fmt_q_list(z.entries()),
                x.ti,
                grades.join(","),
                crosses.join(","),
                cayleys.join(",")
            ));
        }
    }
    if a.atlas_compat {
        println!("{:>4} {:>3}  {:<8} {:<16} {:<16} {}", "id", "l", "status", "cross", "Cayley", "tw-inv");
        for (id, l, st, cr, cy, tw) in compat {
            println!("{:>4} {:>3}  {:<8} {:<16} {:<16} {}", id, l, st, cr, cy, tw);
        }
    } else {
        for l in lines {
            println!("{}", l);
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ------------------------------------------------------------------- param

fn cmd_param(a: &FileArgs) -> Result<ExitCode, InputError> {
    let pf = read_param_file(&a.file)?;
    let sess = Session::new(&pf)?;
    let kgb = KgbContext::new(&sess.ic).map_err(|e| InputError(e.to_string()))?;
    let lctx = LCtx::new(&kgb, &sess.dual_ic);
    let phi = sess.parameter(&kgb, &pf)?;
    lctx.validate(&phi).map_err(|e| InputError(e.to_string()))?;
    let standard = lctx.is_standard(&phi).map_err(|e| InputError(e.to_string()))?;
    let (std_phi, pre) = lctx.standard_form(&phi).map_err(|e| InputError(e.to_string()))?;
    let finals = lctx.final_subgroup(&std_phi).map_err(|e| InputError(e.to_string()))?;
    let finals_s: Vec<String> = finals.iter().map(|u| fmt_z_list(u)).collect();
    println!(
        "{{\"valid\":true,\"standard\":{},\"tempiric\":{},\"infinitesimal_character\":{},\"integral_simples\":{},\"standard_form\":{},\"standardization_steps\":{},\"final_characters\":[{}]}}",
        standard,
        lctx.is_tempiric(&std_phi),
        fmt_q_list(&lctx.infinitesimal_character(&phi)),
        fmt_usize_list(&lctx.integral_simples(&phi)),
        fmt_phi(&std_phi),
        pre.len(),
        finals_s.join(",")
    );
    Ok(ExitCode::SUCCESS)
}

// ------------------------------------------------------------------ packet

fn cmd_packet(a: &FileArgs) -> Result<ExitCode, InputError> {
    let pf = read_param_file(&a.file)?;
    let sess = Session::new(&pf)?;
    let kgb = KgbContext::new(&sess.ic).map_err(|e| InputError(e.to_string()))?;
    let lctx = LCtx::new(&kgb, &sess.dual_ic);
    let phi = sess.parameter(&kgb, &pf)?;
    lctx.validate(&phi).map_err(|e| InputError(e.to_string()))?;
    let packet = lkt::tempiric_packet(&lctx, &phi).map_err(|e| InputError(e.to_string()))?;
    for p in &packet {
        println!(
            "{{\"x\":{},\"d_lambda\":{},\"kappa\":{}}}",
            fmt_x(&kgb, &p.x),
            fmt_q_list(&p.d_lambda),
            fmt_q_list(&p.kappa)
        );
    }
    Ok(ExitCode::SUCCESS)
}

// --------------------------------------------------------------------- lkt

fn cmd_lkt(a: &LktArgs) -> Result<ExitCode, InputError> {
    let pf = read_param_file(&a.file.file)?;
    let sess = Session::new(&pf)?;
    let kgb = KgbContext::new(&sess.ic).map_err(|e| InputError(e.to_string()))?;
    let lctx = LCtx::new(&kgb, &sess.dual_ic);
    let phi = sess.parameter(&kgb, &pf)?;
    lctx.validate(&phi).map_err(|e| InputError(e.to_string()))?;
    let (std_phi, _) = lctx.standard_form(&phi).map_err(|e| InputError(e.to_string()))?;
    let finals = lctx.final_subgroup(&std_phi).map_err(|e| InputError(e.to_string()))?;
    let chis: Vec<Vec<Z>> = match &pf.chi {
        Some(c) => {
            let u: Vec<Z> = c.iter().map(|&x| Z::from(x)).collect();
            if !finals.contains(&u) {
                return Err(InputError(format!(
                    "chi {} is not a final character of the standardized parameter",
                    fmt_z_list(&u)
                )));
            }
            vec![u]
        }
        None => finals,
    };

    let jobs = a.jobs.max(1);
    let mut results: Vec<Option<Result<lkt::LktResult, String>>> = vec![None; chis.len()];
    std::thread::scope(|scope| {
        let mut slots: Vec<&mut Option<Result<lkt::LktResult, String>>> =
            results.iter_mut().collect();
        let mut worker_slices: Vec<Vec<(usize, &mut Option<Result<lkt::LktResult, String>>)>> =
            (0..jobs).map(|_| Vec::new()).collect();
        for (i, slot) in slots.drain(..).enumerate() {
            worker_slices[i % jobs].push((i, slot));
        }
        for chunk in worker_slices {
            let lctx = &lctx;
            let std_phi = &std_phi;
            let chis = &chis;
            scope.spawn(move || {
                for (i, slot) in chunk {
                    *slot = Some(lkt::lkt(lctx, std_phi, &chis[i]).map_err(|e| e.to_string()));
                }
            });
        }
    });

    let mut all_agree = true;
    for (u, r) in chis.iter().zip(results) {
        let r = r.expect("worker filled every slot");
        let res = r.map_err(InputError)?;
        let agree = res.paths_agree();
        all_agree &= agree;
        let entries: Vec<String> = res
            .entries
            .iter()
            .map(|p| {
                format!(
                    "{{\"x\":{},\"d_lambda\":{},\"kappa\":{}}}",
                    fmt_x(&kgb, &p.x),
                    fmt_q_list(&p.d_lambda),
                    fmt_q_list(&p.kappa)
                )
            })
            .collect();
        let wall: Vec<String> = res.wall_xs.iter().map(|x| fmt_x(&kgb, x)).collect();
        let resx: Vec<String> = res.res_xs.iter().map(|x| fmt_x(&kgb, x)).collect();
        let trace = if a.trace {
            format!(",\"trail\":{}", fmt_trail(&res.trail))
        } else {
            String::new()
        };
        println!(
            "{{\"chi\":{},\"phi_final\":{},\"entries\":[{}],\"wall_xs\":[{}],\"res_xs\":[{}],\"paths_agree\":{}{}}}",
            fmt_z_list(u),
            fmt_phi(&res.phi_final),
            entries.join(","),
            wall.join(","),
            resx.join(","),
            agree,
            trace
        );
    }
    Ok(if all_agree { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

// ---------------------------------------------------------------- selftest

fn cmd_selftest(a: &SelftestArgs) -> ExitCode {
    let (entries, with_oracle) = match a.level.as_str() {
        "quick" => (sampling::quick_corpus(), false),
        "full" => (sampling::corpus(), false),
        "oracle" => (sampling::corpus(), true),
        other => {
            eprintln!("error: level must be quick, full, or oracle, got {:?}", other);
            return ExitCode::from(2);
        }
    };
    let coeffs = sampling::default_lambda_coeffs();
    let t_denom = 4;

    let jobs = a.jobs.max(1);
    let mut per_entry: Vec<Option<Vec<(String, Result<(), String>)>>> = vec![None; entries.len()];
    std::thread::scope(|scope| {
        let mut slots: Vec<&mut Option<Vec<(String, Result<(), String>)>>> =
            per_entry.iter_mut().collect();
        let mut worker_slices: Vec<Vec<(usize, &mut Option<Vec<(String, Result<(), String>)>>)>> =
            (0..jobs).map(|_| Vec::new()).collect();
        for (i, slot) in slots.drain(..).enumerate() {
            worker_slices[i % jobs].push((i, slot));
        }
        for chunk in worker_slices {
            let entries = &entries;
            let coeffs = &coeffs;
            scope.spawn(move || {
                for (i, slot) in chunk {
                    let e = &entries[i];
                    let mut out: Vec<(String, Result<(), String>)> = checks::run_all(e, coeffs, t_denom)
                        .into_iter()
                        .map(|(n, r)| (n.to_string(), r))
                        .collect();
                    if with_oracle {
                        let r = match e.label.as_str() {
                            "A1-sc-c" => Some(
                                sampling::contexts(e)
                                    .map_err(|x| x.to_string())
                                    .and_then(|kgb| oracle::compare_sl(&kgb, 2)),
                            ),
                            "A2-sc-c" => Some(
                                sampling::contexts(e)
                                    .map_err(|x| x.to_string())
                                    .and_then(|kgb| oracle::compare_sl(&kgb, 3)),
                            ),
                            "A1-ad-c" => Some(
                                sampling::contexts(e)
                                    .map_err(|x| x.to_string())
                                    .and_then(|kgb| oracle::compare_pgl2(&kgb)),
                            ),
                            _ => None,
                        };
                        if let Some(r) = r {
                            out.push(("matrix-oracle".to_string(), r));
                        }
                    }
                    *slot = Some(out);
                }
            });
        }
    });

    let mut all_ok = true;
    for (e, rs) in entries.iter().zip(per_entry) {
        for (name, r) in rs.expect("worker filled every slot") {
            match r {
                Ok(()) => println!("{{\"group\":\"{}\",\"check\":\"{}\",\"ok\":true}}", e.label, name),
                Err(m) => {
                    all_ok = false;
                    println!(
                        "{{\"group\":\"{}\",\"check\":\"{}\",\"ok\":false,\"detail\":{}}}",
                        e.label,
                        name,
                        serde_json::to_string(&m).unwrap_or_else(|_| "\"?\"".into())
                    );
                }
            }
        }
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
