use std::error::Error as StdError;
use std::io::{self, Read, Write};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use commsol::acceptance;
use commsol::commensurations::Commensuration;
use commsol::freewords::Alphabet;
use commsol::geometry::{
    bounded_distance, boundary_action, factorization_check, fixed_point, qi_estimate, BaseleafMap, Sign,
};
use commsol::group::{GroupTag, Subgroup};
use commsol::matrix::parse_rational;
use commsol::prosystems::{
    cofinal_restrict, format_morphism, format_system, parse_morphism, parse_system, reconstruct, zeta,
    TruncatedSystem,
};
use commsol::solenoid::{ball_structure, cover_of, lift_through_covers, DepthModel, SolenoidPoint};
use commsol::text::{content_lines, format_commensuration, format_subgroup, parse_commensuration, parse_subgroup, parse_subgroup_inline};

type Res<T> = std::result::Result<T, Box<dyn StdError>>;

/// Exact computations in abstract commensurators of Z^n and F_k, and in
/// truncated models of their solenoids.
///
/// File arguments accept `-` for standard input.
#[derive(Parser)]
#[command(name = "commsol", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Truncation depth N.
    #[arg(long, global = true, default_value_t = 2)]
    depth: usize,

    /// Ball radius R.
    #[arg(long, global = true, default_value_t = 5)]
    radius: usize,

    /// Largest subgroup index to enumerate.
    #[arg(long, global = true, default_value_t = 3)]
    max_index: usize,

    /// `text` for reading, `lines` for canonical forms that re-parse.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Lines,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a subgroup, commensuration, system or morphism and print its canonical form.
    Parse { file: String },
    /// Index of a subgroup.
    Index { file: String },
    /// Intersection of two subgroups.
    Intersect { a: String, b: String },
    /// Free basis of a subgroup.
    Basis { file: String },
    /// Count (or list) subgroups of index at most --max-index.
    Enumerate { letter: String, n: String },
    /// Intersection of all subgroups of index at most --max-index.
    Kernel { letter: String, n: String },
    /// The composite a ∘ b of two commensurations.
    Compose { a: String, b: String },
    /// Inverse of a commensuration.
    Invert { file: String },
    /// Whether two commensurations agree on a finite-index subgroup.
    Equiv { a: String, b: String },
    /// Rational matrix of a commensuration of Z^n.
    Tomatrix { file: String },
    /// The morphism of depth --depth systems induced by a commensuration.
    Zeta { file: String },
    /// The commensuration recovered from a morphism dump.
    Reconstruct { file: String },
    /// Restrict a system dump to the objects whose index is a multiple of M.
    Cofinal {
        file: String,
        #[arg(long, default_value_t = 1)]
        multiple_of: u64,
    },
    /// The finite cover of the base space attached to a subgroup.
    Cover { file: String },
    /// Lift a commensuration through the covers of H and K.
    Lift { phi: String, h: String, k: String },
    /// The baseleaf point of an element at depth --depth.
    Baseleaf {
        letter: String,
        n: String,
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
    /// Profinite distance between two elements at depth --depth.
    Dpro {
        letter: String,
        n: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(allow_hyphen_values = true)]
        h: String,
    },
    /// Solenoid distance between two points (solpoint lines or elements).
    Sigma {
        letter: String,
        n: String,
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// Path components of a small σ-ball.
    Ball {
        letter: String,
        n: String,
        /// Radius ε as a rational, e.g. 1/20.
        epsilon: String,
        /// Center (solpoint line or element); defaults to the identity.
        #[arg(long)]
        center: Option<String>,
    },
    /// Quasi-isometry constants of the baseleaf map on the --radius ball.
    Qi { file: String },
    /// Distance profile between the baseleaf maps of two commensurations.
    Bounded { a: String, b: String },
    /// Check that the depth --depth lift agrees with the baseleaf map.
    Factor { file: String },
    /// Attracting (or repelling) fixed point of a word of F_k.
    Fixpoint {
        k: usize,
        word: String,
        #[arg(long)]
        repelling: bool,
    },
    /// Image of the fixed point g⁺ (or g⁻) under a commensuration of F_k.
    Baction {
        file: String,
        word: String,
        #[arg(long)]
        repelling: bool,
    },
    /// Run the acceptance suite.
    Selftest,
}

fn read_input(path: &str) -> Res<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}").into())
    }
}

/// Block form, or the one-line form printed by `--format lines`.
fn subgroup_from(text: &str) -> Res<Subgroup> {
    let lines = content_lines(text);
    if lines.len() == 1 {
        if let Ok(s) = parse_subgroup_inline(lines[0].1) {
            return Ok(s);
        }
    }
    Ok(parse_subgroup(text)?)
}

fn load_subgroup(path: &str) -> Res<Subgroup> {
    subgroup_from(&read_input(path)?)
}

fn load_comm(path: &str) -> Res<Commensuration> {
    Ok(parse_commensuration(&read_input(path)?)?)
}

fn tag(letter: &str, n: &str) -> Res<GroupTag> {
    Ok(GroupTag::parse(letter, n)?)
}

fn model(tag: GroupTag, depth: usize) -> Res<DepthModel> {
    Ok(DepthModel::build(tag, depth)?)
}

/// A solpoint line, or an element standing for its baseleaf point.
fn point(m: &DepthModel, text: &str) -> Res<SolenoidPoint> {
    if text.trim_start().starts_with("solpoint") {
        Ok(m.parse_point(text)?)
    } else {
        Ok(m.baseleaf(&m.tag().parse_element(text)?))
    }
}

fn word_of(k: usize, text: &str) -> Res<commsol::freewords::Word> {
    Ok(Alphabet::new(k)?.parse_word(text)?)
}

fn sign(repelling: bool) -> Sign {
    if repelling {
        Sign::Repelling
    } else {
        Sign::Attracting
    }
}

fn show_subgroup(s: &Subgroup, format: Format) -> String {
    match format {
        Format::Text => format_subgroup(s),
        Format::Lines => s.to_string(),
    }
}

fn show_system(s: &TruncatedSystem, format: Format) -> String {
    match format {
        Format::Text => format!(
            "{} objects, {} proper bonds\n{}",
            s.objects().len(),
            s.proper_bonds().len(),
            format_system(s)
        ),
        Format::Lines => format_system(s),
    }
}

fn execute(cli: &Cli, out: &mut impl Write) -> Res<bool> {
    let f = cli.format;
    match &cli.command {
        Command::Parse { file } => {
            let text = read_input(file)?;
            let first = content_lines(&text).first().map(|l| l.1.to_string()).unwrap_or_default();
            if first.starts_with("comm ") {
                writeln!(out, "{}", format_commensuration(&parse_commensuration(&text)?))?;
            } else if first.starts_with("system ") {
                if content_lines(&text).iter().any(|l| l.1.starts_with("source ")) {
                    writeln!(out, "{}", format_morphism(&parse_morphism(&text)?))?;
                } else {
                    writeln!(out, "{}", show_system(&parse_system(&text)?, f))?;
                }
            } else {
                writeln!(out, "{}", show_subgroup(&subgroup_from(&text)?, f))?;
            }
        }
        Command::Index { file } => writeln!(out, "{}", load_subgroup(file)?.index_big()?)?,
        Command::Intersect { a, b } => {
            let s = load_subgroup(a)?.intersect(&load_subgroup(b)?)?;
            writeln!(out, "{}", show_subgroup(&s, f))?;
        }
        Command::Basis { file } => {
            for b in load_subgroup(file)?.basis() {
                writeln!(out, "{b}")?;
            }
        }
        Command::Enumerate { letter, n } => {
            let subs = tag(letter, n)?.enumerate(cli.max_index)?;
            match f {
                Format::Text => {
                    let counts: Vec<String> = (1..=cli.max_index as u64)
                        .map(|m| {
                            let c = subs.iter().filter(|s| s.index().ok() == Some(m)).count();
                            format!("{m}:{c}")
                        })
                        .collect();
                    writeln!(out, "{}", counts.join(" "))?;
                }
                Format::Lines => {
                    for s in &subs {
                        writeln!(out, "{s}")?;
                    }
                }
            }
        }
        Command::Kernel { letter, n } => {
            let k = tag(letter, n)?.profinite_kernel(cli.max_index)?;
            if f == Format::Text {
                writeln!(out, "index {}", k.index_big()?)?;
            }
            writeln!(out, "{}", show_subgroup(&k, f))?;
        }
        Command::Compose { a, b } => {
            let c = load_comm(a)?.compose(&load_comm(b)?)?;
            writeln!(out, "{}", format_commensuration(&c))?;
        }
        Command::Invert { file } => writeln!(out, "{}", format_commensuration(&load_comm(file)?.invert()?))?,
        Command::Equiv { a, b } => {
            let same = load_comm(a)?.equivalent(&load_comm(b)?)?;
            match f {
                Format::Text => writeln!(out, "{}", if same { "equivalent" } else { "not equivalent" })?,
                Format::Lines => writeln!(out, "{same}")?,
            }
        }
        Command::Tomatrix { file } => writeln!(out, "{}", load_comm(file)?.to_matrix()?)?,
        Command::Zeta { file } => {
            let phi = load_comm(file)?;
            let system = Arc::new(TruncatedSystem::build(phi.tag(), cli.depth)?);
            writeln!(out, "{}", format_morphism(&zeta(&phi, system)?))?;
        }
        Command::Reconstruct { file } => {
            let m = parse_morphism(&read_input(file)?)?;
            writeln!(out, "{}", format_commensuration(&reconstruct(&m)?))?;
        }
        Command::Cofinal { file, multiple_of } => {
            if *multiple_of == 0 {
                return Err("--multiple-of must be positive".into());
            }
            let system = Arc::new(parse_system(&read_input(file)?)?);
            let r = cofinal_restrict(system.clone(), |s| s.index().map_or(false, |m| m % multiple_of == 0))?;
            if f == Format::Text {
                write!(out, "kept {} of {} objects; ", r.subsystem.objects().len(), system.objects().len())?;
            }
            writeln!(out, "{}", show_system(&r.subsystem, f))?;
        }
        Command::Cover { file } => {
            let c = cover_of(&load_subgroup(file)?)?;
            match f {
                Format::Text => {
                    writeln!(out, "{} sheets", c.sheets())?;
                    let gens = c.tag().generators();
                    for (v, row) in c.edge_table().iter().enumerate() {
                        let cells: Vec<String> = gens.iter().zip(row).map(|(x, w)| format!("{x}->{w}")).collect();
                        writeln!(out, "{v} [{}]: {}", c.rep(v), cells.join(" "))?;
                    }
                }
                Format::Lines => writeln!(out, "{}", c.subgroup())?,
            }
        }
        Command::Lift { phi, h, k } => {
            let lift = lift_through_covers(&load_comm(phi)?, &load_subgroup(h)?, &load_subgroup(k)?)?;
            lift.verify_unique()?;
            if f == Format::Text {
                writeln!(out, "{} sheets -> {} sheets", lift.source().sheets(), lift.target().sheets())?;
            }
            for (u, v) in lift.vertex_map().iter().enumerate() {
                writeln!(out, "vertex {u} -> {v}")?;
            }
        }
        Command::Baseleaf { letter, n, element } => {
            let m = model(tag(letter, n)?, cli.depth)?;
            let g = m.tag().parse_element(element)?;
            writeln!(out, "{}", m.format_point(&m.baseleaf(&g)))?;
        }
        Command::Dpro { letter, n, g, h } => {
            let m = model(tag(letter, n)?, cli.depth)?;
            let (g, h) = (m.tag().parse_element(g)?, m.tag().parse_element(h)?);
            let d = m.d_pro(&g, &h);
            match f {
                Format::Text => writeln!(out, "{d}")?,
                Format::Lines => writeln!(out, "{}", d.symbolic())?,
            }
        }
        Command::Sigma { letter, n, p, q } => {
            let m = model(tag(letter, n)?, cli.depth)?;
            let (d, g) = m.sigma(&point(&m, p)?, &point(&m, q)?);
            match f {
                Format::Text => writeln!(out, "{d} attained at g={g}")?,
                Format::Lines => writeln!(out, "{} g={g}", d.symbolic())?,
            }
        }
        Command::Ball { letter, n, epsilon, center } => {
            let m = model(tag(letter, n)?, cli.depth)?;
            let eps: BigRational =
                parse_rational(epsilon).ok_or_else(|| format!("bad rational {epsilon:?}"))?;
            let p = match center {
                Some(c) => point(&m, c)?,
                None => m.baseleaf(&m.tag().identity()),
            };
            let r = ball_structure(&m, &p, &eps)?;
            writeln!(
                out,
                "ball N={} eps={} components={} expected={} leaf_ball={} isometric={}{}",
                r.depth,
                r.epsilon,
                r.components.len(),
                r.expected_components,
                r.leaf_ball_size,
                r.isometric,
                if r.degenerate { " degenerate" } else { "" }
            )?;
            for c in &r.components {
                writeln!(out, "component coordinate={} d_pro={} points={}", c.coordinate, c.d_pro.symbolic(), c.points.len())?;
            }
        }
        Command::Qi { file } => {
            writeln!(out, "{}", qi_estimate(&BaseleafMap::new(load_comm(file)?), cli.radius)?)?;
        }
        Command::Bounded { a, b } => {
            let (a, b) = (BaseleafMap::new(load_comm(a)?), BaseleafMap::new(load_comm(b)?));
            writeln!(out, "{}", bounded_distance(&a, &b, cli.radius)?)?;
        }
        Command::Factor { file } => {
            let r = factorization_check(&load_comm(file)?, cli.depth, cli.radius)?;
            writeln!(out, "{r}")?;
            return Ok(r.passed());
        }
        Command::Fixpoint { k, word, repelling } => {
            writeln!(out, "{}", fixed_point(&word_of(*k, word)?, sign(*repelling))?)?;
        }
        Command::Baction { file, word, repelling } => {
            let phi = load_comm(file)?;
            let p = fixed_point(&word_of(phi.tag().rank(), word)?, sign(*repelling))?;
            writeln!(out, "{}", boundary_action(&phi, &p)?)?;
        }
        Command::Selftest => {
            let mut all = true;
            for id in 1..=acceptance::count() {
                let o = acceptance::run(id);
                all &= o.passed;
                writeln!(out, "{o}")?;
                out.flush()?;
            }
            writeln!(out, "{}", if all { "selftest passed" } else { "selftest FAILED" })?;
            return Ok(all);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match execute(&cli, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let _ = out.flush();
            let msg = e.to_string().replace('\n', " ");
            eprintln!("commsol: {msg}");
            ExitCode::from(1)
        }
    }
}
