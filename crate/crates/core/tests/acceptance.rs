//! End-to-end acceptance checks. Each test prints one PASS/FAIL line with
//! its elapsed time against a pinned limit.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::SeedableRng;

use coxmod::building::{check_building_set, CheckStatus};
use coxmod::diagram::{brackets_to_tubing, count_bracketings, enumerate_bracketings, make_diagram};
use coxmod::euler::{chamber_count, euler_report, euler_sum, verify_closed_forms};
use coxmod::fvector::{fvector_exhaustive, fvector_formula, FVector, Polytope};
use coxmod::group::{
    chamber_type, check_simple_transitivity, gluing_census, gluing_walk, group_elements,
    ChamberSpace, FacetSpec,
};
use coxmod::operad::{
    all_cells, check_line_associativity, compose_all, decompose, operad_arity_check,
    random_instance,
};
use coxmod::tiling::{atypical_chamber_poset, classify_face_factors, d_graph, tile_graph};
use coxmod::tubing::{count_tubings, enumerate_tubings};
use coxmod::{Family, FamilyTag, Graph};

type Outcome = Result<String, String>;

fn criterion(id: u32, name: &str, limit: Duration, body: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let (pass, detail) = match &outcome {
        Ok(d) if elapsed <= limit => (true, d.clone()),
        Ok(d) => (false, format!("{d}; over time")),
        Err(e) => (false, e.clone()),
    };
    let line = format!(
        "{} [{id:>2}] {name} ({:.2}s, limit {}s): {detail}\n",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    // Written straight to the stream so it shows without --nocapture.
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(pass, "{line}");
}

fn fam(tag: FamilyTag, n: usize) -> Family {
    Family::new(tag, n).unwrap()
}

fn fv(v: &[u64]) -> FVector {
    FVector::from_u64s(v)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

#[test]
fn c01_pentagon_and_hexagon() {
    criterion(1, "pentagon and hexagon tiles", secs(1), || {
        let p = fvector_exhaustive(&Graph::path(3)).map_err(|e| e.to_string())?;
        let c = fvector_exhaustive(&Graph::cycle(3)).map_err(|e| e.to_string())?;
        ensure(p == fv(&[5, 5, 1]), || format!("path: {p}"))?;
        ensure(c == fv(&[6, 6, 1]), || format!("cycle: {c}"))?;
        Ok(format!("path 3 -> {p}, cycle 3 -> {c}"))
    });
}

fn formula_vs_exhaustive(
    polys: impl IntoIterator<Item = Polytope>,
) -> Result<Vec<FVector>, String> {
    let mut out = Vec::new();
    for p in polys {
        let f = fvector_formula(p).map_err(|e| e.to_string())?;
        let e = fvector_exhaustive(&p.graph().map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(f == e, || {
            format!("{} {}: formula {f} != exhaustive {e}", p.kind(), p.n())
        })?;
        out.push(e);
    }
    Ok(out)
}

#[test]
fn c02_associahedra() {
    criterion(
        2,
        "associahedron formula vs tubings, n=2..9",
        secs(60),
        || {
            let fs = formula_vs_exhaustive((2..=9).map(Polytope::Assoc))?;
            let f0 = &fs.last().unwrap().counts[0];
            ensure(*f0 == BigInt::from(4862), || format!("f0(PA9) = {f0}"))?;
            Ok("8 sizes agree; f0(PA9) = 4862".into())
        },
    );
}

#[test]
fn c03_cyclohedra() {
    criterion(
        3,
        "cyclohedron formula vs tubings, 3..9 nodes",
        secs(60),
        || {
            formula_vs_exhaustive((2..=8).map(Polytope::Cyclo))?;
            Ok("7 sizes agree".into())
        },
    );
}

#[test]
fn c04_d_polytopes() {
    criterion(
        4,
        "D recursion vs tubings, n=3..8, PD4 facets",
        secs(120),
        || {
            let fs = formula_vs_exhaustive((3..=8).map(Polytope::D))?;
            ensure(fs[1] == fv(&[16, 24, 10, 1]), || format!("PD4 = {}", fs[1]))?;
            let g = d_graph(4);
            let mut kinds = std::collections::BTreeMap::new();
            for f in enumerate_tubings(&g, Some(1)).map_err(|e| e.to_string())? {
                let mut l = classify_face_factors(&g, &f).map_err(|e| e.to_string())?;
                l.retain(|x| x != "point");
                l.sort();
                *kinds.entry(l.join("x")).or_insert(0) += 1;
            }
            let want: std::collections::BTreeMap<String, i32> = [
                ("A3".to_string(), 6),
                ("A2xA2".into(), 3),
                ("Atilde2".into(), 1),
            ]
            .into();
            ensure(kinds == want, || format!("PD4 facets {kinds:?}"))?;
            Ok("6 sizes agree; PD4 facets: 6 pentagons, 3 squares, 1 hexagon".into())
        },
    );
}

#[test]
fn c05_dtilde_polytopes() {
    criterion(5, "D-tilde recursion vs tubings, n=4..7", secs(120), || {
        let fs = formula_vs_exhaustive((4..=7).map(Polytope::DTilde))?;
        let f0 = &fs[0].counts[0];
        ensure(*f0 == BigInt::from(65), || format!("f0(PDtilde4) = {f0}"))?;
        Ok("4 sizes agree; f0(PDtilde4) = 65".into())
    });
}

#[test]
fn c06_euler_characteristics() {
    criterion(6, "Euler sums, closed forms and parity", secs(120), || {
        let e = |t, n| euler_sum(fam(t, n)).map_err(|e| e.to_string());
        ensure(e(FamilyTag::A, 3)? == BigInt::from(-6), || "A3".into())?;
        ensure(e(FamilyTag::ATilde, 3)?.is_zero(), || "Atilde3".into())?;
        let mut checked = 0;
        for tag in FamilyTag::ALL
            .into_iter()
            .filter(|&t| t != FamilyTag::DTilde)
        {
            for n in tag.min_rank()..=8 {
                let r = euler_report(fam(tag, n)).map_err(|e| e.to_string())?;
                ensure(r.chi_sum.is_integer(), || {
                    format!("{tag}{n}: non-integer {}", r.chi_sum)
                })?;
                ensure(r.agree, || {
                    format!("{tag}{n}: sum {} != closed {}", r.chi_sum, r.chi_closed)
                })?;
                let odd_dim = tile_graph(fam(tag, n)).unwrap().tile_dimension % 2 == 1;
                ensure(!odd_dim || r.chi_sum.is_zero(), || {
                    format!("{tag}{n}: parity")
                })?;
                checked += 1;
            }
        }
        for n in 4..=8 {
            let r = euler_report(fam(FamilyTag::DTilde, n)).map_err(|e| e.to_string())?;
            ensure(r.chi_sum.is_integer(), || {
                format!("Dtilde{n}: non-integer sum")
            })?;
            ensure(n % 2 == 0 || r.chi_sum.is_zero(), || {
                format!("Dtilde{n}: parity")
            })?;
        }
        Ok(format!(
            "chi(A3) = -6, chi(Atilde3) = 0, {checked} closed forms agree"
        ))
    });
}

#[test]
fn c07_dtilde_anomaly() {
    criterion(
        7,
        "D-tilde closed form anomaly is reported",
        secs(60),
        || {
            let reports = verify_closed_forms(6).map_err(|e| e.to_string())?;
            let find = |n| {
                reports
                    .iter()
                    .find(|r| r.family == fam(FamilyTag::DTilde, n))
                    .unwrap()
            };
            let r4 = find(4);
            ensure(!r4.agree && r4.chi_sum == BigInt::from(30).into(), || {
                "n=4 sum".into()
            })?;
            ensure(r4.chi_closed.to_string() == "51/2", || {
                format!("n=4 closed {}", r4.chi_closed)
            })?;
            ensure(!find(6).agree, || "n=6 agrees".into())?;
            let out = Command::new(env!("CARGO_BIN_EXE_coxmod"))
                .args(["verify", "--max-rank", "6", "--format", "csv"])
                .output()
                .map_err(|e| e.to_string())?;
            ensure(out.status.code() == Some(1), || {
                format!("verify exit {:?}", out.status.code())
            })?;
            let err = String::from_utf8_lossy(&out.stderr);
            ensure(err.contains("Dtilde4") && err.contains("Dtilde6"), || {
                err.to_string()
            })?;
            Ok("n=4: 30 vs 51/2, n=6 disagrees; verify exits 1".into())
        },
    );
}

#[test]
fn c08_bracketing_tubing_bijection() {
    criterion(
        8,
        "k-bracketings = k-tubings, n<=5, m<=2",
        secs(120),
        || {
            let mut cases = 0;
            for tag in FamilyTag::ALL {
                for n in tag.min_rank()..=5 {
                    let f = fam(tag, n);
                    let slots = coxmod::arrangement::coordinate_count(f);
                    let mut thick: Vec<Vec<(usize, u32)>> = vec![vec![]];
                    if tag.hosts_thick() {
                        for a in 0..slots {
                            thick.push(vec![(a, 2)]);
                            for b in a + 1..slots {
                                thick.push(vec![(a, 2), (b, 2)]);
                            }
                        }
                    }
                    for t in thick.into_iter().filter(|t| t.len() < slots) {
                        let d = make_diagram(f, &t).map_err(|e| e.to_string())?;
                        // A thick chamber is an interval of the ambient tile.
                        let tub: Vec<usize> = if t.is_empty() {
                            count_tubings(&d.wall_graph())
                                .map_err(|e| e.to_string())?
                                .into_iter()
                                .map(|c| c as usize)
                                .collect()
                        } else {
                            atypical_chamber_poset(&d)
                                .map_err(|e| e.to_string())?
                                .levels
                        };
                        let br = count_bracketings(&d);
                        ensure(tub == br, || {
                            format!("{f} thick {t:?}: tubings {tub:?} bracketings {br:?}")
                        })?;
                        if n <= 4 && t.is_empty() {
                            let brackets = d.enumerate_brackets();
                            let mut images = BTreeSet::new();
                            for set in enumerate_bracketings(&d, &brackets, None) {
                                let bs: Vec<_> = set.iter().map(|&i| brackets[i].clone()).collect();
                                let tb =
                                    brackets_to_tubing(&d, &bs).map_err(|e| format!("{f}: {e}"))?;
                                images.insert(tb.to_lists());
                            }
                            ensure(images.len() == br.iter().sum::<usize>(), || {
                                format!("{f}: not injective")
                            })?;
                        }
                        cases += 1;
                    }
                }
            }
            Ok(format!("{cases} diagrams"))
        },
    );
}

#[test]
fn c09_building_census() {
    criterion(
        9,
        "building-set census vs table formulas, n<=6, m<=2",
        secs(180),
        || {
            let (mut cells, mut thresholds) = (0, Vec::new());
            for tag in FamilyTag::ALL {
                for n in tag.min_rank()..=6 {
                    let ms = if tag.hosts_thick() { 0..=2 } else { 0..=0 };
                    for m in ms {
                        let Ok(rows) = check_building_set(fam(tag, n), m) else {
                            continue;
                        };
                        for c in rows {
                            cells += 1;
                            match c.status {
                                CheckStatus::Match => {}
                                CheckStatus::RankThreshold => thresholds.push(format!(
                                    "{}{} m={} {} k={}",
                                    c.family, c.n, c.m, c.stabilizer, c.k
                                )),
                                CheckStatus::Mismatch => {
                                    return Err(format!(
                                        "{}{} m={} {} k={} r={:?}: census {} formula {}",
                                        c.family,
                                        c.n,
                                        c.m,
                                        c.stabilizer,
                                        c.k,
                                        c.r,
                                        c.census,
                                        c.formula
                                    ))
                                }
                            }
                        }
                    }
                }
            }
            Ok(format!(
                "{cells} cells, {} D-rank threshold cells",
                thresholds.len()
            ))
        },
    );
}

#[test]
fn c10_group_orders() {
    criterion(
        10,
        "group orders n<=6, simple transitivity n<=4",
        secs(120),
        || {
            for tag in FamilyTag::ALL {
                for n in tag.min_rank().max(2)..=6 {
                    let f = fam(tag, n);
                    let g = group_elements(f).map_err(|e| e.to_string())?.len();
                    let want = chamber_count(f).map_err(|e| e.to_string())?;
                    ensure(BigInt::from(g) == want, || format!("{f}: {g} != {want}"))?;
                }
                for n in tag.min_rank().max(2)..=4 {
                    let r = check_simple_transitivity(fam(tag, n)).map_err(|e| e.to_string())?;
                    ensure(
                        r.transitive && r.free && r.chambers == r.group_order,
                        || format!("{r:?}"),
                    )?;
                }
            }
            Ok("orders match chamber counts; action simply transitive".into())
        },
    );
}

#[test]
fn c11_gluing_laws() {
    criterion(
        11,
        "gluing: involutions, 2^c orbits, face counts, walk",
        secs(180),
        || {
            let mut families = 0;
            for tag in FamilyTag::ALL {
                for n in tag.min_rank().max(2)..=4 {
                    let f = fam(tag, n);
                    let space = ChamberSpace::new(f, &[]).map_err(|e| e.to_string())?;
                    for c in space.all_chambers() {
                        for b in 0..space.shape(&c).brackets.len() {
                            let (next, back) =
                                space.adjacent_chamber(&c, b).map_err(|e| e.to_string())?;
                            let (again, _) = space
                                .adjacent_chamber(&next, back)
                                .map_err(|e| e.to_string())?;
                            ensure(again == c, || format!("{f}: flip is not an involution"))?;
                        }
                    }
                    let census = gluing_census(&space).map_err(|e| e.to_string())?;
                    let tile = tile_graph(f)
                        .map_err(|e| e.to_string())?
                        .fvector()
                        .map_err(|e| e.to_string())?;
                    let g = chamber_count(f).map_err(|e| e.to_string())?;
                    let d = tile.dim();
                    for (c, &orbits) in census.orbits.iter().enumerate() {
                        let one = 1usize << c;
                        ensure(
                            census.min_orbit[c] == one && census.max_orbit[c] == one,
                            || {
                                format!(
                                    "{f}: codim {c} orbit sizes {}..{}",
                                    census.min_orbit[c], census.max_orbit[c]
                                )
                            },
                        )?;
                        let total = &g * tile.get(d - c);
                        let (q, r) = (&total / BigInt::from(one), &total % BigInt::from(one));
                        ensure(r.is_zero() && q == BigInt::from(orbits), || {
                            format!("{f}: codim {c} {total}/{one} vs {orbits}")
                        })?;
                    }
                    families += 1;
                }
            }
            let space =
                ChamberSpace::new(fam(FamilyTag::D, 4), &[(3, 2)]).map_err(|e| e.to_string())?;
            let facet = |p: &[usize]| FacetSpec {
                positions: p.to_vec(),
                mark: false,
            };
            let steps = [
                facet(&[1, 2, 3]),
                facet(&[0, 1]),
                facet(&[0]),
                facet(&[0, 1, 2, 3]),
            ];
            let walk = gluing_walk(&space, &space.identity(), &steps).map_err(|e| e.to_string())?;
            let types = walk
                .iter()
                .map(|c| chamber_type(&space, c))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            ensure(types == ["D4", "Xa4", "A4", "A4", "D4"], || {
                format!("walk types {types:?}")
            })?;
            Ok(format!("{families} complexes; walk {}", types.join(" -> ")))
        },
    );
}

#[test]
fn c12_operad_laws() {
    criterion(
        12,
        "operad round trip, arity identities, associativity",
        secs(60),
        || {
            let mut cells = 0;
            for tag in FamilyTag::ALL {
                for n in tag.min_rank()..=4 {
                    for c in all_cells(tag, n) {
                        let (h, parts) = decompose(&c);
                        let back = compose_all(&h, &parts).map_err(|e| e.to_string())?;
                        ensure(back == c && h.is_bracket_free(), || {
                            format!("round trip on {c}")
                        })?;
                        cells += 1;
                    }
                }
            }
            let mut rng = StdRng::seed_from_u64(2024);
            for _ in 0..1000 {
                let (h, parts) = random_instance(&mut rng, 5);
                let r = operad_arity_check(&h, &parts).map_err(|e| e.to_string())?;
                ensure(r.ok(), || format!("{r:?}"))?;
            }
            let assoc = check_line_associativity(4)?;
            Ok(format!(
                "{cells} cells, 1000 random trees, {assoc} associativity cases"
            ))
        },
    );
}
