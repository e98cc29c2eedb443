use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::builder::FalseyValueParser;
use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hatgame::adequacy::{self, SearchLimits};
use hatgame::dmg::{self, StarStyle};
use hatgame::dominance::{self, Interval};
use hatgame::isomorphism;
use hatgame::probability;
use hatgame::verifier;
use hatgame::{AdequateSet, ColorDistribution, Error, Exec, QSqrt2, Signature};

#[derive(Parser)]
#[command(name = "hatgame", version, about = "Solver for the two-color hat game with unequal color probabilities")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Worker threads for long searches (0 = one per core).
    #[arg(long, default_value_t = 1, global = true)]
    jobs: usize,

    /// Lift the resource guard on large searches.
    #[arg(
        long,
        env = "HATGAME_ALLOW_LARGE",
        global = true,
        action = ArgAction::SetTrue,
        value_parser = FalseyValueParser::new()
    )]
    allow_large: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// List every adequate set of a given size.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        das: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Maximal five-player winning probability at p.
    Psi {
        /// Exact probability of color 0, e.g. 11/20 or 2-sqrt2.
        #[arg(long, required_unless_present = "curve")]
        p: Option<String>,
        /// Export the curve at STEPS + 1 evenly spaced points instead.
        #[arg(long, value_name = "STEPS")]
        curve: Option<u32>,
    },
    /// Optimal five-player adequate sets at p.
    Optimal {
        #[arg(long)]
        p: String,
        #[arg(long)]
        count_only: bool,
    },
    /// Decision matrix generated from an adequate set.
    Matrix {
        /// Comma-separated configurations, e.g. 0,7,11,19,28,29,30.
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Use the ⋆ symbol for Star cells.
        #[arg(long)]
        unicode: bool,
        /// Build even if the set is not adequate.
        #[arg(long)]
        allow_inadequate: bool,
    },
    /// Evaluate a decision matrix over all configurations.
    Verify {
        /// Build the matrix from this set.
        #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
        set: Option<String>,
        /// Read the matrix from a JSON file.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long)]
        p: String,
        /// Also evaluate every completion of the Star cells.
        #[arg(long)]
        strict: bool,
    },
    /// Signature classes of the minimum-size five-player adequate sets.
    Classes {
        /// Add winning probabilities at p and sort by them.
        #[arg(long)]
        p: Option<String>,
    },
    /// Dominance relation between the classes on (1/2, 1).
    Dominance {
        /// Graphviz output.
        #[arg(long)]
        dot: bool,
        /// Only the transitive reduction of the global edges.
        #[arg(long)]
        reduced: bool,
    },
    /// Partition minimum-size five-player sets up to player renumbering.
    Orbits {
        /// Restrict to the optimal sets at p.
        #[arg(long)]
        p: Option<String>,
    },
    /// Covering number K(N,1).
    Covering {
        #[arg(long)]
        n: usize,
    },
    /// Check that no larger adequate set beats the frontier classes.
    Certify {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 32)]
        das_max: usize,
        #[arg(long, default_value = "024001,022210", value_delimiter = ',')]
        frontier: Vec<String>,
    },
}

enum Failure {
    Hat(Error),
    Io(io::Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Hat(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Out<'a> = BufWriter<io::StdoutLock<'a>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out).and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Hat(e)) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            match e {
                Error::ResourceGuard { .. } | Error::PlayerGuard { .. } | Error::ResultGuard { .. } => {
                    ExitCode::from(3)
                }
                _ => ExitCode::from(2),
            }
        }
        Err(Failure::Mismatch(msg)) => {
            let _ = out.flush();
            eprintln!("verification failed: {msg}");
            ExitCode::from(4)
        }
    }
}

fn run(cli: &Cli, out: &mut Out) -> Result<(), Failure> {
    let exec = Exec::with_jobs(cli.jobs);
    let limits = SearchLimits {
        allow_large: cli.allow_large,
        ..SearchLimits::default()
    };
    let ctx = Ctx {
        format: cli.format,
        exec,
        limits,
    };
    match &cli.command {
        Command::Enumerate { n, das, count_only } => ctx.enumerate(out, *n, *das, *count_only),
        Command::Psi { p, curve } => match curve {
            Some(steps) => ctx.psi_curve(out, *steps),
            None => ctx.psi(out, p.as_deref().unwrap_or_default()),
        },
        Command::Optimal { p, count_only } => ctx.optimal(out, p, *count_only),
        Command::Matrix {
            set,
            n,
            unicode,
            allow_inadequate,
        } => ctx.matrix(out, set, *n, *unicode, *allow_inadequate),
        Command::Verify {
            set,
            matrix,
            n,
            p,
            strict,
        } => ctx.verify(out, set.as_deref(), matrix.as_ref(), *n, p, *strict),
        Command::Classes { p } => ctx.classes(out, p.as_deref()),
        Command::Dominance { dot, reduced } => ctx.dominance(out, *dot, *reduced),
        Command::Orbits { p } => ctx.orbits(out, p.as_deref()),
        Command::Covering { n } => ctx.covering(out, *n),
        Command::Certify {
            n,
            das_max,
            frontier,
        } => ctx.certify(out, *n, *das_max, frontier),
    }
}

struct Ctx {
    format: Format,
    exec: Exec,
    limits: SearchLimits,
}

fn parse_p(text: &str) -> Result<ColorDistribution, Error> {
    let p: QSqrt2 = text.parse()?;
    ColorDistribution::new(p)
}

fn exact_and_decimal(x: &QSqrt2) -> String {
    format!("{x} = {}", x.to_decimal(10))
}

fn csv_line(fields: &[String]) -> Result<String, Failure> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(fields).map_err(|e| Failure::Io(e.into()))?;
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

impl Ctx {
    fn minimal_sets(&self) -> Result<Vec<AdequateSet>, Error> {
        let das = adequacy::covering_number(5, &self.limits)?.value;
        adequacy::enumerate_adequate_sets(5, das, &self.limits, &self.exec)
    }

    fn write_set(&self, out: &mut Out, set: &AdequateSet, extra: Option<&QSqrt2>) -> Result<(), Failure> {
        let sig = set.signature().to_string();
        match self.format {
            Format::Text => {
                write!(out, "{} {}", set.to_csv_string(), sig)?;
                if let Some(p) = extra {
                    write!(out, " {}", exact_and_decimal(p))?;
                }
                writeln!(out)?;
            }
            Format::Json => {
                let mut v = json!({"members": set.members(), "signature": sig, "das": set.das()});
                if let Some(p) = extra {
                    v["probability"] = json!(p.to_string());
                    v["decimal"] = json!(p.to_decimal(10));
                }
                writeln!(out, "{v}")?;
            }
            Format::Csv => {
                let mut fields = vec![set.to_csv_string(), sig, set.das().to_string()];
                if let Some(p) = extra {
                    fields.push(p.to_string());
                    fields.push(p.to_decimal(10));
                }
                out.write_all(csv_line(&fields)?.as_bytes())?;
            }
        }
        Ok(())
    }

    fn write_count(&self, out: &mut Out, count: usize) -> Result<(), Failure> {
        match self.format {
            Format::Json => writeln!(out, "{}", json!({ "count": count }))?,
            _ => writeln!(out, "{count}")?,
        }
        Ok(())
    }

    fn set_header(&self, out: &mut Out, with_probability: bool) -> Result<(), Failure> {
        if self.format == Format::Csv {
            let mut h = "members,signature,das".to_string();
            if with_probability {
                h.push_str(",probability,decimal");
            }
            writeln!(out, "{h}")?;
        }
        Ok(())
    }

    fn enumerate(&self, out: &mut Out, n: usize, das: usize, count_only: bool) -> Result<(), Failure> {
        if count_only {
            let count = adequacy::count_adequate_sets(n, das, &self.limits, &self.exec)?;
            return self.write_count(out, count);
        }
        self.set_header(out, false)?;
        if self.exec.is_parallel() {
            for s in adequacy::enumerate_adequate_sets(n, das, &self.limits, &self.exec)? {
                self.write_set(out, &s, None)?;
            }
            return Ok(());
        }
        let mut failure = None;
        adequacy::for_each_adequate_set(n, das, &self.limits, |s| match self.write_set(out, &s, None) {
            Ok(()) => false,
            Err(e) => {
                failure = Some(e);
                true
            }
        })?;
        failure.map_or(Ok(()), Err)
    }

    fn psi(&self, out: &mut Out, p: &str) -> Result<(), Failure> {
        let dist = parse_p(p)?;
        let value = probability::psi_closed_form(dist.p())?;
        match self.format {
            Format::Text => writeln!(out, "{}", exact_and_decimal(&value))?,
            Format::Json => writeln!(
                out,
                "{}",
                json!({"p": dist.p().to_string(), "psi": value.to_string(), "decimal": value.to_decimal(10)})
            )?,
            Format::Csv => {
                writeln!(out, "p,psi,decimal")?;
                out.write_all(
                    csv_line(&[dist.p().to_string(), value.to_string(), value.to_decimal(10)])?
                        .as_bytes(),
                )?;
            }
        }
        Ok(())
    }

    fn psi_curve(&self, out: &mut Out, steps: u32) -> Result<(), Failure> {
        let curve = probability::psi_curve(steps)?;
        if self.format == Format::Json {
            for (p, v) in curve {
                writeln!(
                    out,
                    "{}",
                    json!({"p": p.to_string(), "psi": v.to_string(), "decimal": v.to_decimal(10)})
                )?;
            }
            return Ok(());
        }
        writeln!(out, "p,p_decimal,psi,psi_decimal")?;
        for (p, v) in curve {
            let fields = [p.to_string(), p.to_decimal(10), v.to_string(), v.to_decimal(10)];
            out.write_all(csv_line(&fields)?.as_bytes())?;
        }
        Ok(())
    }

    fn optimal(&self, out: &mut Out, p: &str, count_only: bool) -> Result<(), Failure> {
        let dist = parse_p(p)?;
        let sets = probability::optimal_sets(5, &dist, &self.limits, &self.exec)?;
        if count_only {
            return self.write_count(out, sets.len());
        }
        if self.format == Format::Text {
            if let Some(first) = sets.first() {
                writeln!(
                    out,
                    "{} optimal sets at p = {}, win probability {}",
                    sets.len(),
                    dist.p(),
                    exact_and_decimal(&probability::win_probability(first, &dist))
                )?;
            }
            for s in &sets {
                self.write_set(out, s, None)?;
            }
            return Ok(());
        }
        self.set_header(out, true)?;
        for s in &sets {
            self.write_set(out, s, Some(&probability::win_probability(s, &dist)))?;
        }
        Ok(())
    }

    fn matrix(
        &self,
        out: &mut Out,
        set: &str,
        n: usize,
        unicode: bool,
        allow_inadequate: bool,
    ) -> Result<(), Failure> {
        let set = AdequateSet::parse(n, set)?;
        let m = if allow_inadequate {
            let g = dmg::build_decision_matrix_unchecked(&set)?;
            if !g.adequate {
                eprintln!("warning: {{{}}} is not adequate; the matrix guesses wrong on some configuration", set.to_csv_string());
            }
            g.matrix
        } else {
            dmg::build_decision_matrix(&set)?
        };
        let style = if unicode { StarStyle::Unicode } else { StarStyle::Ascii };
        match self.format {
            Format::Json => writeln!(out, "{}", dmg::matrix_to_json(&m))?,
            Format::Text => write!(out, "{}", dmg::render_matrix_labeled(&m, style))?,
            Format::Csv => {
                let header: Vec<String> = std::iter::once("player".to_string())
                    .chain((0..m.width()).map(|s| s.to_string()))
                    .collect();
                out.write_all(csv_line(&header)?.as_bytes())?;
                for (i, row) in m.rows().iter().enumerate() {
                    let fields: Vec<String> = std::iter::once((i + 1).to_string())
                        .chain(row.iter().map(|a| a.symbol().to_string()))
                        .collect();
                    out.write_all(csv_line(&fields)?.as_bytes())?;
                }
            }
        }
        Ok(())
    }

    fn verify(
        &self,
        out: &mut Out,
        set: Option<&str>,
        matrix: Option<&PathBuf>,
        n: usize,
        p: &str,
        strict: bool,
    ) -> Result<(), Failure> {
        let dist = parse_p(p)?;
        let (m, source) = match (set, matrix) {
            (Some(text), _) => {
                let s = AdequateSet::parse(n, text)?;
                (dmg::build_decision_matrix_unchecked(&s)?.matrix, Some(s))
            }
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)?;
                (dmg::matrix_from_json(&text)?, None)
            }
            (None, None) => unreachable!("clap requires --set or --matrix"),
        };
        let value = verifier::exact_win_probability(&m, &dist);
        let losing = verifier::losing_set(&m);
        let mut problems = Vec::new();
        let round_trip = source.as_ref().map(|s| {
            let ok = losing == s.members() && value == probability::win_probability(s, &dist);
            if !ok {
                problems.push("matrix does not lose exactly the generating set".to_string());
            }
            ok
        });
        let matches_psi = if m.n_players() == 5 {
            Some(probability::psi_closed_form(dist.p())? == value)
        } else {
            None
        };
        let report = if strict {
            let r = verifier::strict_win_probability(&m, &dist, &self.exec)?;
            if !r.star_safe() {
                problems.push(format!("{} of {} star completions change the probability", r.deviating.len(), r.completions));
            }
            Some(r)
        } else {
            None
        };
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        let losing_text = losing.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        match self.format {
            Format::Json => {
                let v = json!({
                    "probability": value.to_string(),
                    "decimal": value.to_decimal(10),
                    "losing_set": losing,
                    "round_trip": round_trip,
                    "matches_psi": matches_psi,
                    "strict": report.as_ref().map(|r| json!({
                        "stars": r.stars,
                        "completions": r.completions,
                        "star_safe": r.star_safe(),
                    })),
                });
                writeln!(out, "{v}")?;
            }
            Format::Csv => {
                writeln!(out, "probability,decimal,losing_set,round_trip,matches_psi,star_safe")?;
                let opt = |b: Option<bool>| b.map(|b| b.to_string()).unwrap_or_default();
                out.write_all(
                    csv_line(&[
                        value.to_string(),
                        value.to_decimal(10),
                        losing_text,
                        opt(round_trip),
                        opt(matches_psi),
                        opt(report.as_ref().map(|r| r.star_safe())),
                    ])?
                    .as_bytes(),
                )?;
            }
            Format::Text => {
                writeln!(out, "win probability: {}", exact_and_decimal(&value))?;
                writeln!(out, "losing set: {losing_text}")?;
                if let Some(ok) = round_trip {
                    writeln!(out, "losing set equals the generating set: {}", yes_no(ok))?;
                }
                if let Some(ok) = matches_psi {
                    writeln!(out, "matches Ψ(5,p): {}", yes_no(ok))?;
                }
                if let Some(r) = &report {
                    writeln!(
                        out,
                        "star completions: {} over {} stars, all equal: {}",
                        r.completions,
                        r.stars,
                        yes_no(r.star_safe())
                    )?;
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Failure::Mismatch(problems.join("; ")))
        }
    }

    fn classes(&self, out: &mut Out, p: Option<&str>) -> Result<(), Failure> {
        let dist = p.map(parse_p).transpose()?;
        let sets = self.minimal_sets()?;
        let rows = probability::class_table(&sets, dist.as_ref());
        match self.format {
            Format::Csv => out.write_all(probability::class_table_csv(&rows)?.as_bytes())?,
            Format::Json => {
                for r in &rows {
                    let mut v = json!({
                        "signature": r.signature.to_string(),
                        "polynomial": r.polynomial.to_string(),
                        "size": r.size,
                    });
                    if let Some(w) = &r.win_probability {
                        v["probability"] = json!(w.to_string());
                        v["decimal"] = json!(w.to_decimal(10));
                    }
                    writeln!(out, "{v}")?;
                }
            }
            Format::Text => {
                let width = rows.iter().map(|r| r.polynomial.to_string().len()).max().unwrap_or(0);
                for r in &rows {
                    write!(out, "{}  {:>3}  {:<width$}", r.signature, r.size, r.polynomial.to_string())?;
                    if let Some(w) = &r.win_probability {
                        write!(out, "  {}", exact_and_decimal(w))?;
                    }
                    writeln!(out)?;
                }
                writeln!(out, "{} classes, {} sets", rows.len(), sets.len())?;
            }
        }
        Ok(())
    }

    fn dominance(&self, out: &mut Out, dot: bool, reduced: bool) -> Result<(), Failure> {
        let sets = self.minimal_sets()?;
        let signatures: Vec<Signature> = probability::classify_by_signature(&sets).into_keys().collect();
        let interval = Interval::upper_half();
        let mut edges = dominance::dominance_graph(&signatures, &interval, &self.exec)?;
        if reduced {
            edges = dominance::transitive_reduction(&edges, &interval);
        }
        if dot {
            write!(out, "{}", dominance::to_dot(&signatures, &edges, &interval))?;
            return Ok(());
        }
        match self.format {
            Format::Json => {
                for e in &edges {
                    writeln!(
                        out,
                        "{}",
                        json!({
                            "winner": e.winner.to_string(),
                            "loser": e.loser.to_string(),
                            "kind": e.kind.label(),
                            "global": e.is_global(&interval),
                            "validity": e.validity_text(),
                        })
                    )?;
                }
            }
            Format::Csv => {
                writeln!(out, "winner,loser,kind,global,validity")?;
                for e in &edges {
                    let fields = [
                        e.winner.to_string(),
                        e.loser.to_string(),
                        e.kind.label().to_string(),
                        e.is_global(&interval).to_string(),
                        e.validity_text(),
                    ];
                    out.write_all(csv_line(&fields)?.as_bytes())?;
                }
            }
            Format::Text => {
                for e in &edges {
                    if e.is_global(&interval) {
                        writeln!(out, "{} -> {} [{}]", e.winner, e.loser, e.kind.label())?;
                    } else {
                        writeln!(out, "{} -> {} [{}] on {}", e.winner, e.loser, e.kind.label(), e.validity_text())?;
                    }
                }
                let maximal = dominance::maximal_classes(&signatures, &edges, &interval);
                let names: Vec<String> = maximal.iter().map(Signature::to_string).collect();
                writeln!(out, "undominated on {interval}: {}", names.join(", "))?;
            }
        }
        Ok(())
    }

    fn orbits(&self, out: &mut Out, p: Option<&str>) -> Result<(), Failure> {
        let sets = match p {
            Some(p) => probability::optimal_sets(5, &parse_p(p)?, &self.limits, &self.exec)?,
            None => self.minimal_sets()?,
        };
        let orbits = isomorphism::orbit_partition(&sets, &self.exec)?;
        match self.format {
            Format::Json => {
                for o in &orbits {
                    writeln!(out, "{}", isomorphism::orbit_to_json(o))?;
                }
            }
            Format::Csv => {
                writeln!(out, "canonical,signature,size,stabilizer")?;
                for o in &orbits {
                    let stab = isomorphism::stabilizer(&o.canonical)?.len();
                    let fields = [
                        o.canonical.to_csv_string(),
                        o.signature.to_string(),
                        o.size().to_string(),
                        stab.to_string(),
                    ];
                    out.write_all(csv_line(&fields)?.as_bytes())?;
                }
            }
            Format::Text => {
                for o in &orbits {
                    let stab = isomorphism::stabilizer(&o.canonical)?.len();
                    writeln!(
                        out,
                        "{}  size {:>2}  stabilizer {:>2}  canonical {}",
                        o.signature,
                        o.size(),
                        stab,
                        o.canonical.to_csv_string()
                    )?;
                }
                writeln!(out, "{} orbits, {} sets", orbits.len(), sets.len())?;
            }
        }
        Ok(())
    }

    fn covering(&self, out: &mut Out, n: usize) -> Result<(), Failure> {
        let k = adequacy::covering_number(n, &self.limits)?;
        match self.format {
            Format::Json => writeln!(out, "{}", json!({"n": n, "k": k.value, "verified": k.verified}))?,
            Format::Csv => {
                writeln!(out, "n,k,verified")?;
                writeln!(out, "{n},{},{}", k.value, k.verified)?;
            }
            Format::Text => {
                if k.verified {
                    writeln!(out, "K({n},1) = {}", k.value)?;
                } else {
                    writeln!(out, "K({n},1) = {} (reference value, not searched)", k.value)?;
                }
            }
        }
        Ok(())
    }

    fn certify(&self, out: &mut Out, n: usize, das_max: usize, frontier: &[String]) -> Result<(), Failure> {
        let frontier: Vec<Signature> = frontier
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_, _>>()?;
        let cert = adequacy::certify(n, &frontier, das_max, &self.limits, &self.exec)?;
        let names = |v: &[Signature]| v.iter().map(Signature::to_string).collect::<Vec<_>>().join(",");
        match self.format {
            Format::Json => {
                let v = json!({
                    "n": cert.n_players,
                    "frontier": names(&cert.frontier),
                    "minimal_das": cert.minimal_das,
                    "minimal_classes": cert.minimal_classes.len(),
                    "witnesses": cert.witnesses.iter().map(|w| json!({
                        "signature": w.signature.to_string(),
                        "via": w.via.as_ref().map(|(s, k)| format!("{s} {}", k.label())),
                    })).collect::<Vec<_>>(),
                    "undominated_classes": names(&cert.undominated_classes),
                    "das_max": cert.das_max,
                    "escapes": cert.escapes.iter().map(|s| s.members()).collect::<Vec<_>>(),
                    "nodes_visited": cert.nodes_visited,
                    "holds": cert.holds(),
                });
                writeln!(out, "{v}")?;
            }
            Format::Csv => {
                writeln!(out, "das,escaping_sets")?;
                for (d, c) in cert.escapes_by_das() {
                    writeln!(out, "{d},{c}")?;
                }
            }
            Format::Text => {
                writeln!(
                    out,
                    "minimum size {} with {} classes; frontier {}",
                    cert.minimal_das,
                    cert.minimal_classes.len(),
                    names(&cert.frontier)
                )?;
                for w in &cert.witnesses {
                    match &w.via {
                        None => writeln!(out, "  witness {} (frontier)", w.signature)?,
                        Some((s, k)) => writeln!(out, "  witness {} (beaten by {s} [{}])", w.signature, k.label())?,
                    }
                }
                if !cert.undominated_classes.is_empty() {
                    writeln!(out, "  not dominated: {}", names(&cert.undominated_classes))?;
                }
                for (d, c) in cert.escapes_by_das() {
                    writeln!(out, "das {d}: {c} escaping sets")?;
                }
                writeln!(out, "search nodes: {}", cert.nodes_visited)?;
                writeln!(
                    out,
                    "das={} is optimal: {}",
                    cert.minimal_das,
                    if cert.holds() { "yes" } else { "no" }
                )?;
            }
        }
        if cert.holds() {
            Ok(())
        } else {
            Err(Failure::Mismatch("some adequate sets escape the frontier".into()))
        }
    }
}
