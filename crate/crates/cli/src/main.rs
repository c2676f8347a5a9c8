//! `fh`: command-line access to predimension, closures, amalgams,
//! transfers, generic approximants, exquisite types and reducts.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fh_core::amalgam::{simple_amalgam, verify_simple_amalgam};
use fh_core::exquisite::{
    base_exquisite_3, collisions, decollide, decollide_step, exquisite_for_arity, lift_exquisite,
    realizations,
};
use fh_core::format::{parse_structure, parse_type, serialize_structure, serialize_type};
use fh_core::generic::{audit_structure, build_generic, catalog};
use fh_core::matroid::{pregeometry_isomorphic, Matroid};
use fh_core::predim::{self, HARD_BOUND};
use fh_core::reducts::{
    benign_pair_exquisite, benign_pair_subgroup, exquisite_reduct, mixed_amalgam_exquisite,
    mixed_amalgam_subgroup, phi_reduct,
};
use fh_core::suites::{run_suite, SuiteConfig, SUITES};
use fh_core::transfer::{
    desymmetrize, desymmetrize_checked, isoext_step_g_to_ns, isoext_step_ns_to_g, ns_partner,
    relax, relax_checked, relaxed_symmetrize, relaxed_symmetrize_checked,
};
use fh_core::{AtomicType, Error, FiniteStructure, Permutation, Search, SymmetryGroup};

#[derive(Parser)]
#[command(
    name = "fh",
    version,
    about = "Finite Hrushovski constructions with group symmetry"
)]
struct Cli {
    /// Structured output instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel searches; output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Largest set for exhaustive searches.
    #[arg(long, global = true, env = "FH_BOUND")]
    bound: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct SetArgs {
    file: PathBuf,
    /// Comma-separated element names; defaults depend on the command.
    #[arg(long)]
    set: Option<String>,
    /// Print the closure certificate.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct OutArg {
    /// Write the resulting structure here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OverArgs {
    /// Base as comma-separated element names.
    #[arg(long, conflicts_with = "over_file")]
    over: Option<String>,
    /// Base as a structure file.
    #[arg(long)]
    over_file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatroidOp {
    Rank,
    Closure,
    Geometry,
    Iso,
}

#[derive(Clone, Copy, ValueEnum)]
enum IsoDir {
    G2ns,
    Ns2g,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Sub,
    Exq,
}

#[derive(Subcommand)]
enum Cmd {
    /// Predimension of a set (default the universe).
    Delta(SetArgs),
    /// Dimension of a set (default the universe).
    Dim(SetArgs),
    /// Self-sufficient closure of a set (default empty).
    Sscl(SetArgs),
    /// d-closure of a set (default empty).
    Dclosure(SetArgs),
    /// Whether the structure lies in the class.
    Inclass(SetArgs),
    Matroid {
        op: MatroidOp,
        file: PathBuf,
        second: Option<PathBuf>,
        #[arg(long)]
        set: Option<String>,
    },
    /// Free join of two structures over shared elements.
    Amalgam {
        b1: PathBuf,
        b2: PathBuf,
        #[arg(long, default_value = "")]
        over: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Desymmetrize a G-structure over a trivial-group base.
    Desym {
        file: PathBuf,
        #[command(flatten)]
        over: OverArgs,
        /// Also verify the relative-predimension equality.
        #[arg(long)]
        checked: bool,
        #[command(flatten)]
        out: OutArg,
    },
    Relax {
        file: PathBuf,
        #[command(flatten)]
        over: OverArgs,
        #[arg(long)]
        checked: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Relaxed symmetrization over a G-structure base given by file.
    Symrelax {
        file: PathBuf,
        #[arg(long)]
        over_file: PathBuf,
        #[arg(long)]
        checked: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// One isomorphism-extension step.
    Isoext {
        dir: IsoDir,
        a1: PathBuf,
        a2: PathBuf,
        c: PathBuf,
    },
    #[command(subcommand)]
    Generic(GenericCmd),
    #[command(subcommand)]
    Exquisite(ExqCmd),
    Collisions {
        file: PathBuf,
        #[arg(long = "type")]
        ty: PathBuf,
    },
    Decollide {
        file: PathBuf,
        #[arg(long = "type")]
        ty: PathBuf,
        /// A single elimination step instead of the full iteration.
        #[arg(long)]
        step: bool,
        #[command(flatten)]
        out: OutArg,
    },
    #[command(subcommand)]
    Reduct(ReductCmd),
    /// Mixed amalgam of A (source side) with B (target side).
    Mixed {
        side: Side,
        a: PathBuf,
        b: PathBuf,
        #[arg(long = "type")]
        ty: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Benign pair over F.
    Benign {
        side: Side,
        f: PathBuf,
        /// Target group for the subgroup side: sym, id or a structure file.
        #[arg(long, default_value = "sym")]
        to: String,
        #[arg(long = "type")]
        ty: Option<PathBuf>,
    },
    /// Run a verification suite, or `all`.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        count: Option<usize>,
    },
}

#[derive(Subcommand)]
enum GenericCmd {
    Build {
        #[arg(long, default_value_t = 3)]
        arity: usize,
        /// sym, id, or generators as `2,1,3` separated by `;`.
        #[arg(long, default_value = "sym")]
        group: String,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[arg(long, default_value_t = 4)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Print the step log.
        #[arg(long)]
        log: bool,
        #[command(flatten)]
        out: OutArg,
    },
    Audit {
        file: PathBuf,
        #[arg(long = "maxA", default_value_t = 2)]
        max_a: usize,
        #[arg(long = "maxC", default_value_t = 3)]
        max_c: usize,
    },
}

#[derive(Subcommand)]
enum ExqCmd {
    Base {
        #[command(flatten)]
        out: OutArg,
    },
    Lift {
        file: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    Check {
        file: PathBuf,
    },
    ForArity {
        n: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// The realizations of a type in a structure.
    Realize {
        file: PathBuf,
        #[arg(long = "type")]
        ty: PathBuf,
    },
}

#[derive(Subcommand)]
enum ReductCmd {
    Group {
        file: PathBuf,
        #[arg(long, default_value = "sym")]
        to: String,
        #[command(flatten)]
        out: OutArg,
    },
    Exquisite {
        file: PathBuf,
        #[arg(long = "type")]
        ty: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
}

/// A non-error outcome that still signals failure of a checked property.
struct PropertyFailure(String);

enum Failure {
    Usage(String),
    Lib(Error),
    Property(PropertyFailure),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

struct Ctx {
    json: bool,
    search: Search,
}

impl Ctx {
    /// Prints `human` or `structured` depending on `--json`.
    fn emit(&self, human: impl AsRef<str>, structured: Value) {
        if self.json {
            println!(
                "{}",
                serde_json::to_string_pretty(&structured).expect("serializable")
            );
        } else {
            let h = human.as_ref();
            print!("{h}");
            if !h.ends_with('\n') {
                println!();
            }
        }
    }

    fn emit_structure(&self, m: &FiniteStructure, out: &OutArg) -> Res<()> {
        match &out.output {
            Some(p) => fs::write(p, serialize_structure(m))
                .map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
            None => {
                self.emit(serialize_structure(m), structure_json(m));
                Ok(())
            }
        }
    }

    fn emit_type(&self, q: &AtomicType, out: &OutArg) -> Res<()> {
        match &out.output {
            Some(p) => fs::write(p, serialize_type(q))
                .map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
            None => {
                let v = json!({"name": q.name(), "arity": q.arity(), "tail": q.tail_len(), "relations": q.relations()});
                self.emit(serialize_type(q), v);
                Ok(())
            }
        }
    }
}

fn structure_json(m: &FiniteStructure) -> Value {
    let gens: Vec<Vec<usize>> = m
        .group()
        .generators()
        .iter()
        .map(Permutation::one_based)
        .collect();
    json!({
        "name": m.name(),
        "arity": m.arity(),
        "generators": gens,
        "elements": m.names(),
        "relations": m.named_relations(),
    })
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Res<FiniteStructure> {
    Ok(parse_structure(&read(path)?)?)
}

fn load_type(path: &Path) -> Res<AtomicType> {
    Ok(parse_type(&read(path)?)?)
}

fn names(list: &str) -> Vec<String> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn set_or(m: &FiniteStructure, set: &Option<String>, universe: bool) -> Res<fh_core::ElementSet> {
    match set {
        Some(s) => Ok(m.set_of(&names(s))?),
        None if universe => Ok(m.universe()),
        None => Ok(fh_core::ElementSet::new()),
    }
}

fn parse_group(spec: &str, arity: usize) -> Res<Arc<SymmetryGroup>> {
    let g = match spec {
        "sym" => SymmetryGroup::full(arity)?,
        "id" => SymmetryGroup::trivial(arity)?,
        gens => {
            let perms = gens
                .split(';')
                .map(|p| {
                    let imgs = p
                        .split(',')
                        .map(|x| {
                            x.trim()
                                .parse::<usize>()
                                .map_err(|_| Failure::Usage(format!("bad generator {p:?}")))
                        })
                        .collect::<Res<Vec<_>>>()?;
                    Ok(Permutation::from_one_based(&imgs)?)
                })
                .collect::<Res<Vec<_>>>()?;
            SymmetryGroup::from_generators(arity, &perms)?
        }
    };
    Ok(Arc::new(g))
}

/// `sym`, `id`, or the group of a structure file.
fn target_group(spec: &str, arity: usize) -> Res<Arc<SymmetryGroup>> {
    match spec {
        "sym" | "id" => parse_group(spec, arity),
        path => Ok(load(Path::new(path))?.group_arc().clone()),
    }
}

/// Base names for the transfer commands.
fn base_names(over: &OverArgs) -> Res<Vec<String>> {
    match (&over.over, &over.over_file) {
        (Some(s), None) => Ok(names(s)),
        (None, Some(p)) => Ok(load(p)?.names().to_vec()),
        (None, None) => Ok(Vec::new()),
        (Some(_), Some(_)) => Err(Failure::Usage("--over and --over-file conflict".into())),
    }
}

fn list(xs: &[String]) -> String {
    format!("{{{}}}", xs.join(","))
}

fn run(cli: Cli) -> Res<()> {
    let bound = cli.bound.unwrap_or(predim::DEFAULT_BOUND);
    if bound > HARD_BOUND {
        return Err(Failure::Usage(format!(
            "--bound {bound} exceeds the hard limit {HARD_BOUND}"
        )));
    }
    let ctx = Ctx {
        json: cli.json,
        search: Search::new(bound)?,
    };
    let s = ctx.search;
    match cli.cmd {
        Cmd::Delta(a) => {
            let m = load(&a.file)?;
            let x = set_or(&m, &a.set, true)?;
            let d = predim::delta(&m, &x);
            ctx.emit(d.to_string(), json!({"delta": d}));
        }
        Cmd::Dim(a) => {
            let m = load(&a.file)?;
            let x = set_or(&m, &a.set, true)?;
            let d = s.dim(&m, &x)?;
            ctx.emit(d.to_string(), json!({"dim": d}));
        }
        Cmd::Sscl(a) => {
            let m = load(&a.file)?;
            let x = set_or(&m, &a.set, false)?;
            let cert = s.self_sufficient_closure(&m, &x)?;
            let cl = m.names_of(&cert.closure);
            let v = json!({
                "closure": cl,
                "dimension": cert.dimension,
                "minimizers_examined": cert.minimizers_examined,
            });
            let mut h = list(&cl);
            if a.trace {
                h.push_str(&format!("\n{v}"));
            }
            ctx.emit(h, v);
        }
        Cmd::Dclosure(a) => {
            let m = load(&a.file)?;
            let x = set_or(&m, &a.set, false)?;
            let cl = m.names_of(&s.d_closure(&m, &x)?);
            ctx.emit(list(&cl), json!({"dclosure": cl}));
        }
        Cmd::Inclass(a) => {
            let m = load(&a.file)?;
            let b = s.in_class(&m)?;
            ctx.emit(b.to_string(), json!({"in_class": b}));
        }
        Cmd::Matroid {
            op,
            file,
            second,
            set,
        } => {
            let m = load(&file)?;
            let mat = Matroid::new(&m, s);
            match op {
                MatroidOp::Rank => {
                    let x = set_or(&m, &set, true)?;
                    let r = mat.rank(&x)?;
                    ctx.emit(r.to_string(), json!({"rank": r}));
                }
                MatroidOp::Closure => {
                    let x = set_or(&m, &set, false)?;
                    let cl = m.names_of(&mat.closure(&x)?);
                    ctx.emit(list(&cl), json!({"closure": cl}));
                }
                MatroidOp::Geometry => {
                    let g = mat.associated_geometry()?;
                    let loops = m.names_of(&g.loops);
                    let classes: Vec<Vec<String>> =
                        g.classes.iter().map(|c| m.names_of(c)).collect();
                    let mut h = format!("loops {}\n", list(&loops));
                    for c in &classes {
                        h.push_str(&format!("point {}\n", list(c)));
                    }
                    ctx.emit(h, json!({"loops": loops, "points": classes}));
                }
                MatroidOp::Iso => {
                    let other =
                        load(&second.ok_or_else(|| {
                            Failure::Usage("iso needs a second structure".into())
                        })?)?;
                    let mat2 = Matroid::new(&other, s);
                    match pregeometry_isomorphic(&mat, &mat2)? {
                        Some(f) => {
                            let pairs: Vec<[String; 2]> = f
                                .iter()
                                .enumerate()
                                .map(|(i, &j)| [m.names()[i].clone(), other.name_of(j).to_string()])
                                .collect();
                            let h: Vec<String> =
                                pairs.iter().map(|[a, b]| format!("{a}->{b}")).collect();
                            ctx.emit(
                                format!("isomorphic {}", h.join(" ")),
                                json!({"isomorphic": true, "map": pairs}),
                            );
                        }
                        None => ctx.emit("not isomorphic", json!({"isomorphic": false})),
                    }
                }
            }
        }
        Cmd::Amalgam { b1, b2, over, out } => {
            let (b1, b2) = (load(&b1)?, load(&b2)?);
            let over = names(&over);
            let d = simple_amalgam(&b1, &b2, &over)?;
            let check = verify_simple_amalgam(&d, &b1, &b2, &over)?;
            if !check.holds {
                return Err(Failure::Property(PropertyFailure(format!(
                    "additivity fails on {}",
                    list(&check.witness.unwrap_or_default())
                ))));
            }
            ctx.emit_structure(&d, &out)?;
        }
        Cmd::Desym {
            file,
            over,
            checked,
            out,
        } => {
            let b = load(&file)?;
            let a_ns = match &over.over_file {
                Some(p) => load(p)?,
                None => ns_partner(&b.induced_substructure(&b.set_of(&base_names(&over)?)?)?)?,
            };
            let t = if checked {
                desymmetrize_checked(&s, &b, &a_ns)?
            } else {
                desymmetrize(&b, &a_ns)?
            };
            ctx.emit_structure(&t.output, &out)?;
        }
        Cmd::Relax {
            file,
            over,
            checked,
            out,
        } => {
            let c = load(&file)?;
            let a = base_names(&over)?;
            let t = if checked {
                relax_checked(&s, &c, &a)?
            } else {
                relax(&c, &a)?
            };
            ctx.emit_structure(&t.output, &out)?;
        }
        Cmd::Symrelax {
            file,
            over_file,
            checked,
            out,
        } => {
            let c = load(&file)?;
            let a_g = load(&over_file)?;
            let t = if checked {
                relaxed_symmetrize_checked(&s, &c, &a_g)?
            } else {
                relaxed_symmetrize(&c, &a_g)?
            };
            ctx.emit_structure(&t.output, &out)?;
        }
        Cmd::Isoext { dir, a1, a2, c } => {
            let (a1, a2, c) = (load(&a1)?, load(&a2)?, load(&c)?);
            let step = match dir {
                IsoDir::G2ns => isoext_step_g_to_ns(&s, &a1, &a2, &c)?,
                IsoDir::Ns2g => isoext_step_ns_to_g(&s, &a1, &a2, &c)?,
            };
            let h = format!(
                "{}{}",
                serialize_structure(&step.b1),
                serialize_structure(&step.b2)
            );
            let v = json!({"b1": structure_json(&step.b1), "b2": structure_json(&step.b2), "checked_subsets": step.checked_subsets});
            ctx.emit(h, v);
        }
        Cmd::Generic(GenericCmd::Build {
            arity,
            group,
            steps,
            size,
            seed,
            log,
            out,
        }) => {
            let g = parse_group(&group, arity)?;
            let st = build_generic(&s, g, size, steps, seed)?;
            if log {
                for l in &st.log {
                    match &l.site {
                        Some(site) => eprintln!(
                            "step {} t{} over {} adds {}",
                            l.step,
                            l.template,
                            list(site),
                            list(&l.added)
                        ),
                        None => eprintln!("step {} t{} skipped", l.step, l.template),
                    }
                }
            }
            ctx.emit_structure(st.current(), &out)?;
        }
        Cmd::Generic(GenericCmd::Audit { file, max_a, max_c }) => {
            let m = load(&file)?;
            let cat = catalog(m.group_arc(), max_c)?;
            let entries = audit_structure(&s, &m, &cat, max_a, max_c)?;
            let mut h = String::new();
            let mut rows = Vec::new();
            for e in &entries {
                let w = e.witness.as_ref().map(|w| list(w));
                h.push_str(&format!(
                    "{} t{} {}\n",
                    list(&e.site),
                    e.template,
                    w.as_deref().unwrap_or("unrealized")
                ));
                rows.push(json!({"site": e.site, "template": e.template, "witness": e.witness}));
            }
            let realized = entries.iter().filter(|e| e.witness.is_some()).count();
            h.push_str(&format!("pairs {} realized {}\n", entries.len(), realized));
            ctx.emit(
                h,
                json!({"entries": rows, "pairs": entries.len(), "realized": realized}),
            );
        }
        Cmd::Exquisite(ExqCmd::Base { out }) => ctx.emit_type(&base_exquisite_3(), &out)?,
        Cmd::Exquisite(ExqCmd::Lift { file, out }) => {
            ctx.emit_type(&lift_exquisite(&load_type(&file)?)?, &out)?
        }
        Cmd::Exquisite(ExqCmd::Check { file }) => {
            let q = load_type(&file)?;
            let nice = q.check_nice();
            let tw = q.check_intertwined(&s)?;
            let rigid = q.check_without_symmetry(&s)?;
            let v = json!({"nice": nice, "intertwined": tw.holds, "witness": tw.witness, "without_symmetry": rigid});
            ctx.emit(
                format!(
                    "nice {nice}\nintertwined {}\nwithout-symmetry {rigid}",
                    tw.holds
                ),
                v,
            );
            if !(nice && tw.holds && rigid) {
                return Err(Failure::Property(PropertyFailure(format!(
                    "{} is not exquisite",
                    q.name()
                ))));
            }
        }
        Cmd::Exquisite(ExqCmd::ForArity { n, out }) => {
            ctx.emit_type(&exquisite_for_arity(n)?, &out)?
        }
        Cmd::Exquisite(ExqCmd::Realize { file, ty }) => {
            let (m, q) = (load(&file)?, load_type(&ty)?);
            let rs = realizations(&m, &q)?;
            let rows: Vec<Vec<String>> = rs
                .iter()
                .map(|t| t.points.iter().map(|&e| m.name_of(e).to_string()).collect())
                .collect();
            let h: String = rows.iter().map(|r| format!("{}\n", r.join(" "))).collect();
            ctx.emit(h, json!({"realizations": rows}));
        }
        Cmd::Collisions { file, ty } => {
            let (m, q) = (load(&file)?, load_type(&ty)?);
            let rep = collisions(&m, &q)?;
            let pairs: Vec<[Vec<String>; 2]> = rep
                .witnesses
                .iter()
                .map(|(x, y)| {
                    let f = |t: &fh_core::exquisite::TypedTuple| {
                        t.points.iter().map(|&e| m.name_of(e).to_string()).collect()
                    };
                    [f(x), f(y)]
                })
                .collect();
            let mut h = format!("c {}\nw {}\n", rep.c, rep.w);
            for [x, y] in &pairs {
                h.push_str(&format!("{} ~ {}\n", x.join(" "), y.join(" ")));
            }
            ctx.emit(h, json!({"c": rep.c, "w": rep.w, "collisions": pairs}));
        }
        Cmd::Decollide {
            file,
            ty,
            step,
            out,
        } => {
            let (m, q) = (load(&file)?, load_type(&ty)?);
            let result = if step {
                decollide_step(&m, &q)?.structure
            } else {
                decollide(&m, &q)?
            };
            ctx.emit_structure(&result, &out)?;
        }
        Cmd::Reduct(ReductCmd::Group { file, to, out }) => {
            let m = load(&file)?;
            let g = target_group(&to, m.arity())?;
            ctx.emit_structure(&phi_reduct(&m, &g)?, &out)?;
        }
        Cmd::Reduct(ReductCmd::Exquisite { file, ty, out }) => {
            let (m, q) = (load(&file)?, load_type(&ty)?);
            ctx.emit_structure(&exquisite_reduct(&m, &q)?, &out)?;
        }
        Cmd::Mixed {
            side,
            a,
            b,
            ty,
            out,
        } => {
            let (a, b) = (load(&a)?, load(&b)?);
            let c = match side {
                Side::Sub => mixed_amalgam_subgroup(&s, &a, &b)?,
                Side::Exq => {
                    let q = load_type(
                        &ty.ok_or_else(|| Failure::Usage("mixed exq needs --type".into()))?,
                    )?;
                    mixed_amalgam_exquisite(&s, &a, &b, &q)?
                }
            };
            ctx.emit_structure(&c, &out)?;
        }
        Cmd::Benign { side, f, to, ty } => {
            let f = load(&f)?;
            let p = match side {
                Side::Sub => benign_pair_subgroup(&s, &f, &target_group(&to, f.arity())?)?,
                Side::Exq => {
                    let q = load_type(
                        &ty.ok_or_else(|| Failure::Usage("benign exq needs --type".into()))?,
                    )?;
                    benign_pair_exquisite(&s, &f, &q)?
                }
            };
            let v = json!({
                "a": structure_json(&p.a),
                "b": structure_json(&p.b),
                "f_strong_in_a": p.f_strong_in_a,
                "f_strong_in_b": p.f_strong_in_b,
                "non_isomorphic": p.non_isomorphic,
                "reducts_equal": p.reducts_equal,
            });
            let h = format!(
                "{}{}certified {}\n",
                serialize_structure(&p.a),
                serialize_structure(&p.b),
                p.certified()
            );
            ctx.emit(h, v);
            if !p.certified() {
                return Err(Failure::Property(PropertyFailure(
                    "benign pair not certified".into(),
                )));
            }
        }
        Cmd::Verify { suite, seed, count } => {
            let cfg = SuiteConfig {
                seed,
                count,
                search: s,
            };
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut first_failure = None;
            let mut rows = Vec::new();
            let mut h = String::new();
            for name in names {
                let rep = run_suite(name, &cfg)?;
                h.push_str(&rep.line());
                h.push('\n');
                if let Some(c) = &rep.counterexample {
                    h.push_str(c);
                    if !c.ends_with('\n') {
                        h.push('\n');
                    }
                    first_failure.get_or_insert_with(|| format!("suite {name} failed"));
                }
                rows.push(json!({"suite": rep.name, "passed": rep.passed(), "checked": rep.checked, "counterexample": rep.counterexample}));
            }
            ctx.emit(h, json!({"suites": rows}));
            if let Some(f) = first_failure {
                return Err(Failure::Property(PropertyFailure(f)));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let msg = e.to_string();
            eprintln!(
                "ERROR usage: {}",
                msg.lines()
                    .next()
                    .unwrap_or("")
                    .trim_start_matches("error: ")
            );
            eprint!("{msg}");
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    if let Some(j) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("ERROR usage: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Property(PropertyFailure(m))) => {
            eprintln!("ERROR property: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("ERROR {}: {e}", e.code());
            let property = matches!(
                e,
                Error::PostconditionFailed(_)
                    | Error::LiftVerificationFailed(_)
                    | Error::DimMismatch { .. }
            );
            ExitCode::from(if property { 1 } else { 2 })
        }
    }
}
