use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;

use coxmod::building::{check_building_set, enumerate_building_set, CheckStatus};
use coxmod::euler::{euler_report, verify_closed_forms, EulerReport};
use coxmod::fvector::{fvector_exhaustive, fvector_formula, Polytope};
use coxmod::graph::build_coxeter_graph;
use coxmod::group::{find_bracket, gluing_walk, Chamber, ChamberSpace, FacetSpec};
use coxmod::operad::{
    all_cells, check_line_associativity, compose_all, decompose, operad_arity_check,
    random_instance,
};
use coxmod::report::{to_json, Format, Table};
use coxmod::tiling::{classify_face_factors, special_graph_catalog, tile_graph};
use coxmod::tubing::{enumerate_tubings, Tubing};
use coxmod::{Family, FamilyTag};

#[derive(Parser)]
#[command(
    name = "coxmod",
    version,
    about = "Tubings, particle diagrams and Euler characteristics of blown-up Coxeter complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, default_value = "text", value_parser = parse_format)]
    format: Format,
    /// Worker threads; 0 lets the pool decide.
    #[arg(long, global = true, env = "COXMOD_JOBS", default_value_t = 0)]
    jobs: usize,
    /// Upper bound on listed items.
    #[arg(long, global = true, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
}

#[derive(Args, Clone, Copy)]
struct Target {
    #[arg(long, value_parser = parse_tag)]
    family: FamilyTag,
    #[arg(long)]
    rank: usize,
}

impl Target {
    fn family(self) -> Result<Family, Failure> {
        Family::new(self.family, self.rank).map_err(|e| Failure::Usage(e.to_string()))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Sum,
    Closed,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolytopeKind {
    Assoc,
    Cyclo,
    D,
    Dtilde,
}

#[derive(Subcommand)]
enum Command {
    /// Coxeter graph of a family.
    Graph(Target),
    /// Tubings of the tile graph, counted by size.
    Tubings {
        #[command(flatten)]
        target: Target,
        /// List the tubings (up to --cap).
        #[arg(long)]
        list: bool,
    },
    /// f-vector of a graph-associahedron, by enumeration and by formula.
    Fvector {
        #[arg(long, value_enum, ignore_case = true)]
        polytope: PolytopeKind,
        #[arg(long)]
        n: usize,
    },
    /// Irreducible flats by dimension and stabilizer.
    Buildingset {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 0)]
        thick: usize,
        /// Compare against the closed-form table values.
        #[arg(long)]
        check: bool,
    },
    /// Euler characteristic of the blown-up complex.
    Euler {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
    /// Sum against closed form for every family up to a rank.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_rank: usize,
    },
    /// Chamber adjacent across a facet, and the orbit of that facet.
    Glue {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 0)]
        thick: usize,
        /// Positions of the thick particles, comma-separated; overrides
        /// --thick, which fills the innermost positions.
        #[arg(long, conflicts_with = "thick")]
        thick_at: Option<String>,
        /// Signed labels by position, e.g. "2,-1,3"; defaults to the identity.
        #[arg(long, allow_hyphen_values = true)]
        chamber: Option<String>,
        /// Positions covered by the facet's bracket, comma-separated. Repeat
        /// to walk across several facets.
        #[arg(long, required = true)]
        facet: Vec<String>,
        /// The bracket contains a fixed mark.
        #[arg(long)]
        mark: bool,
    },
    /// Product decomposition of every facet of the tile.
    Faces(Target),
    /// Catalog of factor graphs met in the D and D̃ tiles.
    Atlas {
        #[arg(long, default_value_t = 6)]
        max_rank: usize,
    },
    /// Composition laws on bracketed diagrams.
    OperadCheck {
        /// Exhaustive round trip up to this rank.
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
        #[arg(long, default_value_t = 1000)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_tag(s: &str) -> Result<FamilyTag, String> {
    s.parse().map_err(|e: coxmod::GraphError| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
        .map_err(|e: coxmod::report::ReportError| e.to_string())
}

enum Failure {
    Usage(String),
    Anomaly { output: String, detail: String },
    Internal(String),
}

fn internal<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Internal(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        // Only fails if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Anomaly { output, detail }) => {
            print!("{output}");
            eprintln!("anomaly: {detail}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn thick_spec(thick: usize, family: Family) -> Result<Vec<(usize, u32)>, Failure> {
    if thick > 0 && !family.tag.hosts_thick() {
        return Err(Failure::Usage(format!(
            "{} hosts no thick particles",
            family.tag
        )));
    }
    Ok((0..thick).map(|p| (p, 2)).collect())
}

fn parse_list(s: &str, what: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Usage(format!("bad {what} list `{s}`: {e}")))
}

fn list(v: &[usize]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let fmt = cli.format;
    let cap = cli.cap as usize;
    let render = |t: &Table| t.render(fmt).map_err(internal);
    match &cli.command {
        Command::Graph(target) => {
            let g = build_coxeter_graph(target.family()?).map_err(internal)?;
            let json = g.to_json();
            if fmt == Format::Json {
                return to_json(&json).map_err(internal);
            }
            let mut t = Table::new(["a", "b", "label"]);
            for (a, b) in g.edges() {
                t.push([
                    a.to_string(),
                    b.to_string(),
                    g.label(a, b).unwrap_or(3).to_string(),
                ]);
            }
            render(&t)
        }
        Command::Tubings { target, list: show } => {
            let tile = tile_graph(target.family()?).map_err(internal)?;
            let g = &tile.tile_graph;
            let all = enumerate_tubings(g, None).map_err(internal)?;
            if *show {
                let lists: Vec<Vec<Vec<usize>>> =
                    all.iter().take(cap).map(Tubing::to_lists).collect();
                if fmt == Format::Json {
                    return to_json(&lists).map_err(internal);
                }
                let mut t = Table::new(["size", "tubing"]);
                for l in &lists {
                    let s: Vec<String> =
                        l.iter().map(|tube| format!("{{{}}}", list(tube))).collect();
                    t.push([l.len().to_string(), s.join(" ")]);
                }
                return render(&t);
            }
            let mut counts = vec![0usize; g.node_count() + 1];
            for tb in &all {
                counts[tb.len()] += 1;
            }
            let mut t = Table::new(["tubes", "count"]);
            for (k, c) in counts.iter().enumerate().filter(|(_, c)| **c > 0) {
                t.push([k, *c]);
            }
            render(&t)
        }
        Command::Fvector { polytope, n } => {
            let p = match polytope {
                PolytopeKind::Assoc => Polytope::Assoc(*n),
                PolytopeKind::Cyclo => Polytope::Cyclo(*n),
                PolytopeKind::D => Polytope::D(*n),
                PolytopeKind::Dtilde => Polytope::DTilde(*n),
            };
            let formula = fvector_formula(p).map_err(|e| Failure::Usage(e.to_string()))?;
            let graph = p.graph().map_err(internal)?;
            let exhaustive = fvector_exhaustive(&graph).map_err(internal)?;
            let agree = formula == exhaustive;
            let mut headers = vec!["polytope".to_string(), "n".into()];
            headers.extend((0..=p.dim()).map(|k| format!("f{k}")));
            headers.extend(["method".into(), "agree".into()]);
            let mut t = Table::new(headers);
            for (method, fv) in [("exhaustive", &exhaustive), ("formula", &formula)] {
                let mut row = vec![p.kind().to_string(), n.to_string()];
                row.extend(fv.counts.iter().map(ToString::to_string));
                row.extend([method.to_string(), agree.to_string()]);
                t.push(row);
            }
            let out = render(&t)?;
            if agree {
                Ok(out)
            } else {
                Err(Failure::Anomaly {
                    output: out,
                    detail: format!(
                        "{} {n}: exhaustive {exhaustive} != formula {formula}",
                        p.kind()
                    ),
                })
            }
        }
        Command::Buildingset {
            target,
            thick,
            check,
        } => {
            let family = target.family()?;
            thick_spec(*thick, family)?;
            if !check {
                let rows = enumerate_building_set(family, *thick).map_err(internal)?;
                if fmt == Format::Json {
                    return to_json(&rows).map_err(internal);
                }
                let mut t = Table::new(["family", "n", "m", "k", "stabilizer", "r", "count"]);
                for r in &rows {
                    t.push([
                        r.family.clone(),
                        r.n.to_string(),
                        r.m.to_string(),
                        r.k.to_string(),
                        r.stabilizer.clone(),
                        r.r.to_string(),
                        r.count.to_string(),
                    ]);
                }
                return render(&t);
            }
            let rows = check_building_set(family, *thick).map_err(internal)?;
            let out = if fmt == Format::Json {
                to_json(&rows).map_err(internal)?
            } else {
                let mut t = Table::new([
                    "family",
                    "n",
                    "m",
                    "row",
                    "subspace",
                    "stabilizer",
                    "k",
                    "r",
                    "census",
                    "formula",
                    "status",
                ]);
                for c in &rows {
                    t.push([
                        c.family.clone(),
                        c.n.to_string(),
                        c.m.to_string(),
                        format!("{:?}", c.row),
                        c.subspace.clone(),
                        c.stabilizer.clone(),
                        c.k.to_string(),
                        c.r.map_or("all".into(), |r| r.to_string()),
                        c.census.to_string(),
                        c.formula.to_string(),
                        format!("{:?}", c.status),
                    ]);
                }
                render(&t)?
            };
            let bad: Vec<String> = rows
                .iter()
                .filter(|c| c.status == CheckStatus::Mismatch)
                .map(|c| {
                    format!(
                        "{} k={} r={:?}: {} != {}",
                        c.stabilizer, c.k, c.r, c.census, c.formula
                    )
                })
                .collect();
            if bad.is_empty() {
                Ok(out)
            } else {
                Err(Failure::Anomaly {
                    output: out,
                    detail: bad.join("; "),
                })
            }
        }
        Command::Euler { target, method } => {
            let r = euler_report(target.family()?).map_err(internal)?;
            euler_table(&[r], *method, fmt)
        }
        Command::Verify { max_rank } => {
            let reports = verify_closed_forms(*max_rank).map_err(internal)?;
            euler_table(&reports, Method::Both, fmt)
        }
        Command::Glue {
            target,
            thick,
            thick_at,
            chamber,
            facet,
            mark,
        } => {
            let family = target.family()?;
            let spec = match thick_at {
                None => thick_spec(*thick, family)?,
                Some(s) => {
                    let pos = parse_list(s, "thick position")?;
                    thick_spec(pos.len(), family)?;
                    pos.into_iter().map(|p| (p, 2)).collect()
                }
            };
            let space =
                ChamberSpace::new(family, &spec).map_err(|e| Failure::Usage(e.to_string()))?;
            let start = match chamber {
                None => space.identity(),
                Some(s) => {
                    let labels = s
                        .split(',')
                        .map(|x| x.trim().parse::<i32>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| Failure::Usage(format!("bad chamber: {e}")))?;
                    let mut sorted: Vec<u32> = labels.iter().map(|l| l.unsigned_abs()).collect();
                    sorted.sort_unstable();
                    if sorted != (1..=space.dim() as u32).collect::<Vec<_>>() {
                        return Err(Failure::Usage(format!(
                            "chamber needs labels ±1..±{}",
                            space.dim()
                        )));
                    }
                    space.normalize(Chamber { labels })
                }
            };
            let facets = facet
                .iter()
                .map(|f| {
                    Ok(FacetSpec {
                        positions: parse_list(f, "facet")?,
                        mark: *mark,
                    })
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            let walk =
                gluing_walk(&space, &start, &facets).map_err(|e| Failure::Usage(e.to_string()))?;
            let mut t = Table::new(["step", "chamber", "type", "facet", "orbit"]);
            for (i, c) in walk.iter().enumerate() {
                let ty = coxmod::group::chamber_type(&space, c).map_err(internal)?;
                let (fac, orbit) = match facets.get(i) {
                    Some(f) => {
                        let shape = space.shape(c);
                        let b = find_bracket(&shape, &f.positions, f.mark).expect("walk succeeded");
                        let o = space.face_orbit(c, &[b]).map_err(internal)?;
                        (list(&f.positions), o.len().to_string())
                    }
                    None => (String::new(), String::new()),
                };
                t.push([i.to_string(), space.render(c), ty, fac, orbit]);
            }
            render(&t)
        }
        Command::Faces(target) => {
            let tile = tile_graph(target.family()?).map_err(internal)?;
            let g = &tile.tile_graph;
            let facets = enumerate_tubings(g, Some(1)).map_err(internal)?;
            let mut t = Table::new(["tube", "factors"]);
            for f in facets.iter().take(cap) {
                let labels = classify_face_factors(g, f).map_err(internal)?;
                t.push([
                    format!("{{{}}}", list(&f.to_lists()[0])),
                    labels.join(" x "),
                ]);
            }
            render(&t)
        }
        Command::Atlas { max_rank } => to_json(&special_graph_catalog(*max_rank)).map_err(internal),
        Command::OperadCheck {
            max_rank,
            instances,
            seed,
        } => operad_check(*max_rank, *instances, *seed, fmt),
    }
}

fn euler_table(reports: &[EulerReport], method: Method, fmt: Format) -> Result<String, Failure> {
    let headers: Vec<&str> = match method {
        Method::Sum => vec!["family", "rank", "chambers", "tile_fvector", "chi_sum"],
        Method::Closed => vec!["family", "rank", "chi_closed"],
        Method::Both => vec![
            "family",
            "rank",
            "chambers",
            "tile_fvector",
            "chi_sum",
            "chi_closed",
            "agree",
        ],
    };
    let mut t = Table::new(headers);
    for r in reports {
        let rec = r.record();
        let rank = rec.rank.to_string();
        t.push(match method {
            Method::Sum => vec![
                rec.family,
                rank,
                rec.chambers,
                rec.tile_fvector,
                rec.chi_sum,
            ],
            Method::Closed => vec![rec.family, rank, rec.chi_closed],
            Method::Both => vec![
                rec.family,
                rank,
                rec.chambers,
                rec.tile_fvector,
                rec.chi_sum,
                rec.chi_closed,
                rec.agree.to_string(),
            ],
        });
    }
    let out = t.render(fmt).map_err(internal)?;
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| !r.agree && !matches!(method, Method::Sum | Method::Closed))
        .map(|r| {
            format!(
                "{}: sum {} != closed form {}",
                r.family, r.chi_sum, r.chi_closed
            )
        })
        .collect();
    if bad.is_empty() {
        Ok(out)
    } else {
        Err(Failure::Anomaly {
            output: out,
            detail: bad.join("; "),
        })
    }
}

fn operad_check(
    max_rank: usize,
    instances: usize,
    seed: u64,
    fmt: Format,
) -> Result<String, Failure> {
    let mut t = Table::new(["law", "instances", "violations"]);
    let mut bad = Vec::new();

    let mut cells = 0;
    let mut trip = 0;
    for tag in FamilyTag::ALL {
        for n in tag.min_rank()..=max_rank {
            for c in all_cells(tag, n) {
                cells += 1;
                let (h, parts) = decompose(&c);
                let ok = compose_all(&h, &parts).is_ok_and(|r| r == c)
                    && operad_arity_check(&h, &parts).is_ok_and(|r| r.ok());
                if !ok {
                    trip += 1;
                    bad.push(format!("round trip fails on {c}"));
                }
            }
        }
    }
    t.push([
        "round_trip".to_string(),
        cells.to_string(),
        trip.to_string(),
    ]);

    let mut rng = StdRng::seed_from_u64(seed);
    let mut arity = 0;
    for _ in 0..instances {
        let (h, parts) = random_instance(&mut rng, max_rank.max(4));
        match operad_arity_check(&h, &parts) {
            Ok(r) if r.ok() => {}
            Ok(r) => {
                arity += 1;
                bad.push(format!("{}: {}", r.composite, r.violations.join(", ")));
            }
            Err(e) => {
                arity += 1;
                bad.push(e.to_string());
            }
        }
    }
    t.push([
        "arity".to_string(),
        instances.to_string(),
        arity.to_string(),
    ]);

    match check_line_associativity(3) {
        Ok(n) => t.push(["associativity".to_string(), n.to_string(), "0".into()]),
        Err(e) => {
            t.push(["associativity".to_string(), "-".into(), "1".into()]);
            bad.push(e);
        }
    }
    let out = t.render(fmt).map_err(internal)?;
    if bad.is_empty() {
        Ok(out)
    } else {
        Err(Failure::Anomaly {
            output: out,
            detail: bad.join("; "),
        })
    }
}
