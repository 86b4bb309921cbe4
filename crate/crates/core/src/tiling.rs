//! Tiles of the blown-up complexes and the product structure of their faces.

use serde::Serialize;

use crate::arrangement::{Equation, Flat};
use crate::diagram::{make_diagram, Diagram, DiagramError};
use crate::fvector::{fvector_exhaustive, fvector_formula, FVector, Polytope};
use crate::graph::{
    build_coxeter_graph, complement_ids, induced_subgraph, mask_nodes, reconnected_complement,
    Family, FamilyTag, Graph, GraphError, GraphJson,
};
use crate::tubing::{face_interval, Tube, Tubing};

/// Tiles with more nodes than this use the closed formulas instead of
/// exhaustive tubing counts.
pub const EXHAUSTIVE_NODE_LIMIT: usize = 11;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileAssignment {
    pub family: Family,
    pub tile_graph: Graph,
    pub tile_dimension: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TileJson {
    pub family: String,
    pub rank: usize,
    pub tile_dimension: usize,
    pub graph: GraphJson,
}

impl TileAssignment {
    pub fn to_json(&self) -> TileJson {
        TileJson {
            family: self.family.tag.to_string(),
            rank: self.family.rank,
            tile_dimension: self.tile_dimension,
            graph: self.tile_graph.to_json(),
        }
    }

    /// The polytope with a closed f-vector formula that this tile is.
    pub fn polytope(&self) -> Polytope {
        let n = self.family.rank;
        match self.family.tag {
            FamilyTag::A | FamilyTag::B => Polytope::Assoc(n),
            FamilyTag::CTilde => Polytope::Assoc(n + 1),
            FamilyTag::ATilde => Polytope::Cyclo(n),
            FamilyTag::D => Polytope::D(n),
            FamilyTag::BTilde => Polytope::D(n + 1),
            FamilyTag::DTilde => Polytope::DTilde(n),
        }
    }

    pub fn fvector(&self) -> Result<FVector, GraphError> {
        if self.tile_graph.node_count() <= EXHAUSTIVE_NODE_LIMIT {
            fvector_exhaustive(&self.tile_graph)
        } else {
            Ok(fvector_formula(self.polytope()).expect("tile ranks are in range"))
        }
    }
}

/// The graph whose graph-associahedron tiles the complex.
pub fn tile_graph(family: Family) -> Result<TileAssignment, GraphError> {
    let family = Family::new(family.tag, family.rank)?;
    let n = family.rank;
    let tile_graph = match family.tag {
        FamilyTag::A | FamilyTag::B => Graph::path(n),
        FamilyTag::CTilde => Graph::path(n + 1),
        FamilyTag::ATilde => {
            if n == 1 {
                Graph::path(2)
            } else {
                Graph::cycle(n + 1)
            }
        }
        FamilyTag::D => build_coxeter_graph(family)?,
        FamilyTag::BTilde => build_coxeter_graph(Family::new(FamilyTag::D, n + 1)?)?,
        FamilyTag::DTilde => build_coxeter_graph(family)?,
    };
    Ok(TileAssignment {
        family,
        tile_dimension: family.complex_dim(),
        tile_graph,
    })
}

/// Name of a factor graph by isomorphism type.
///
/// * `point`: one node (dimension 0).
/// * `A{k}`: path on `k` nodes (associahedron).
/// * `Atilde{k}`: cycle on `k + 1 >= 3` nodes (cyclohedron); the triangle
///   is also the first triangle-with-tail graph `Xa3`.
/// * `D{k}`: the `D_k` graph, `k >= 4`.
/// * `Dtilde{k}`: the `D̃_k` graph on `k + 1` nodes, `k >= 4`.
/// * `K{k}`: complete graph, `k >= 4` (`K4` is `X4`, the permutohedron).
/// * `Xa{k}`: a triangle with a path tail, `k >= 4` nodes.
/// * `Xb{k}`, `Xc{k}`: see [`recognize_xb`] and [`recognize_xc`].
/// * `other{k}`: anything else.
pub fn factor_label(g: &Graph) -> String {
    let k = g.node_count();
    if k == 1 {
        return "point".into();
    }
    if is_path(g) {
        return format!("A{k}");
    }
    if is_cycle(g) {
        return format!("Atilde{}", k - 1);
    }
    if k >= 4 && g.is_isomorphic(&d_graph(k)) {
        return format!("D{k}");
    }
    if k >= 5 && g.is_isomorphic(&dtilde_graph(k - 1)) {
        return format!("Dtilde{}", k - 1);
    }
    if k >= 4 && g.edge_count() == k * (k - 1) / 2 {
        return format!("K{k}");
    }
    if k >= 4 && g.is_isomorphic(&xa_graph(k)) {
        return format!("Xa{k}");
    }
    if let Some(name) = recognize_xb(g) {
        return name;
    }
    if let Some(name) = recognize_xc(g) {
        return name;
    }
    format!("other{k}")
}

fn is_path(g: &Graph) -> bool {
    let k = g.node_count();
    g.is_connected() && g.edge_count() == k - 1 && (0..k).all(|v| g.degree(v) <= 2)
}

fn is_cycle(g: &Graph) -> bool {
    let k = g.node_count();
    k >= 3 && g.is_connected() && g.edge_count() == k && (0..k).all(|v| g.degree(v) == 2)
}

pub fn d_graph(k: usize) -> Graph {
    build_coxeter_graph(Family {
        tag: FamilyTag::D,
        rank: k,
    })
    .expect("k >= 3")
}

pub fn dtilde_graph(k: usize) -> Graph {
    build_coxeter_graph(Family {
        tag: FamilyTag::DTilde,
        rank: k,
    })
    .expect("k >= 4")
}

/// Triangle `{0, 1, 2}` with the path `2 - 3 - ... - (k-1)` attached.
pub fn xa_graph(k: usize) -> Graph {
    let mut g = Graph::path(k);
    g.add_edge(0, 2).expect("k >= 3");
    g
}

/// Triangle at one end of a path, a two-leaf fork at the other, `k >= 5`
/// nodes. At `k = 5` the triangle and the fork share their hub.
pub fn xb_graph(k: usize) -> Graph {
    let spine = k - 4;
    let mut g = Graph::path(spine);
    let mut g2 = Graph::empty(k).expect("small");
    for (a, b) in g.edges() {
        g2.add_edge(a, b).expect("in range");
    }
    g = g2;
    let (first, last) = (0, spine - 1);
    g.add_edge(first, spine).expect("in range");
    g.add_edge(first, spine + 1).expect("in range");
    g.add_edge(spine, spine + 1).expect("in range");
    g.add_edge(last, spine + 2).expect("in range");
    g.add_edge(last, spine + 3).expect("in range");
    g
}

/// Triangles at both ends of a path, `k >= 5` nodes (a bowtie at 5).
pub fn xc_graph(k: usize) -> Graph {
    let mut g = xb_graph(k);
    g.add_edge(k - 2, k - 1).expect("in range");
    g
}

pub fn recognize_xb(g: &Graph) -> Option<String> {
    let k = g.node_count();
    (k >= 5 && g.is_isomorphic(&xb_graph(k))).then(|| format!("Xb{k}"))
}

pub fn recognize_xc(g: &Graph) -> Option<String> {
    let k = g.node_count();
    (k >= 5 && g.is_isomorphic(&xc_graph(k))).then(|| format!("Xc{k}"))
}

/// Reconnected complement of several pairwise compatible, mutually
/// non-nested tubes, applied one tube at a time.
pub fn reconnected_complement_all(g: &Graph, tubes: &[Tube]) -> Result<Graph, GraphError> {
    let mut current = g.clone();
    let mut ids: Vec<usize> = (0..g.node_count()).collect();
    for &t in tubes {
        let local = ids
            .iter()
            .enumerate()
            .filter(|(_, &orig)| t >> orig & 1 == 1)
            .fold(0u64, |acc, (i, _)| acc | 1 << i);
        current = reconnected_complement(&current, local)?;
        ids = complement_ids(&ids_graph_len(ids.len()), local)
            .into_iter()
            .map(|i| ids[i])
            .collect();
    }
    Ok(current)
}

fn ids_graph_len(n: usize) -> Graph {
    Graph::empty(n).expect("small")
}

/// A face's product decomposition: the factor graphs of the face indexed by
/// `t`, found by splitting at an outermost tube and recursing into both the
/// induced subgraph and the reconnected complement.
pub fn face_factors(g: &Graph, t: &Tubing) -> Result<Vec<Graph>, GraphError> {
    let tubes = t.tubes();
    let Some(&outer) = tubes
        .iter()
        .find(|&&a| !tubes.iter().any(|&b| b != a && b & a == a))
    else {
        return Ok(vec![g.clone()]);
    };
    let inside: Vec<Tube> = tubes
        .iter()
        .copied()
        .filter(|&b| b != outer && b & outer == b)
        .collect();
    let outside: Vec<Tube> = tubes.iter().copied().filter(|&b| b & outer == 0).collect();
    let sub = induced_subgraph(g, outer)?;
    let sub_ids = mask_nodes(outer);
    let remap = |ids: &[usize], b: Tube| {
        ids.iter()
            .enumerate()
            .filter(|(_, &o)| b >> o & 1 == 1)
            .fold(0u64, |acc, (i, _)| acc | 1 << i)
    };
    let sub_t = Tubing::new(&sub, inside.iter().map(|&b| remap(&sub_ids, b)))?;
    let comp = reconnected_complement(g, outer)?;
    let comp_ids = complement_ids(g, outer);
    let comp_t = Tubing::new(&comp, outside.iter().map(|&b| remap(&comp_ids, b)))?;
    let mut out = face_factors(&sub, &sub_t)?;
    out.extend(face_factors(&comp, &comp_t)?);
    Ok(out)
}

/// Factor labels of a face, sorted.
pub fn classify_face_factors(g: &Graph, t: &Tubing) -> Result<Vec<String>, GraphError> {
    let mut labels: Vec<String> = face_factors(g, t)?.iter().map(factor_label).collect();
    labels.sort();
    Ok(labels)
}

/// One entry of the derived catalog of factor graphs.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub aliases: Vec<String>,
    pub graph: GraphJson,
    /// Where the class first appeared: source polytope and tube.
    pub source: String,
    pub tube: Vec<usize>,
}

fn aliases_of(name: &str) -> Vec<String> {
    match name {
        "Atilde2" => vec!["Xa3".into(), "K3".into()],
        "K4" => vec!["X4".into()],
        "A2" => vec!["D2".into()],
        "A3" => vec!["D3".into()],
        "Dtilde4" => vec!["K1,4".into()],
        _ => Vec::new(),
    }
}

/// Factor classes met in the facet decompositions of `PD_n` and `PD̃_n`,
/// with every factor of every face up to `max_n`. Sorted by name.
pub fn special_graph_catalog(max_n: usize) -> Vec<CatalogEntry> {
    let mut seen: std::collections::BTreeMap<String, CatalogEntry> = Default::default();
    let mut sources = Vec::new();
    for n in 4..=max_n {
        sources.push((format!("D{n}"), d_graph(n)));
    }
    for n in 4..=max_n {
        sources.push((format!("Dtilde{n}"), dtilde_graph(n)));
    }
    for (name, g) in sources {
        for t in crate::tubing::all_tubes(&g) {
            let tubing = Tubing::new(&g, [t]).expect("single tube");
            let Ok(factors) = face_factors(&g, &tubing) else {
                continue;
            };
            for f in factors {
                let label = factor_label(&f);
                seen.entry(label.clone()).or_insert_with(|| CatalogEntry {
                    aliases: aliases_of(&label),
                    name: label,
                    graph: f.to_json(),
                    source: name.clone(),
                    tube: mask_nodes(t),
                });
            }
        }
    }
    seen.into_values().collect()
}

/// A chamber of an atypical complex, computed inside the ambient tile.
#[derive(Debug, Clone)]
pub struct AtypicalChamber {
    pub ambient: Family,
    pub ambient_graph: Graph,
    /// Cluster tubes of the thick particles plus a maximal tubing inside
    /// each, so that the inner factors are points.
    pub base: Tubing,
    /// Number of faces by codimension inside the chamber.
    pub levels: Vec<usize>,
    /// Graph whose graph-associahedron is the chamber.
    pub chamber_graph: Graph,
    pub label: String,
    /// Factor labels of each facet, sorted.
    pub facets: Vec<Vec<String>>,
}

/// Ambient family and coordinate ranges obtained by expanding each thick
/// particle of multiplicity `μ` into `μ` ordinary particles.
pub fn ambient_expansion(d: &Diagram) -> (Family, Vec<std::ops::Range<usize>>) {
    let mut ranges = Vec::new();
    let mut start = 0;
    for &m in &d.thick {
        ranges.push(start..start + m as usize);
        start += m as usize;
    }
    let extra = start - d.thick.len();
    let ambient = Family {
        tag: d.family.tag,
        rank: d.family.rank + extra,
    };
    (ambient, ranges)
}

/// The cluster tubes of the thick particles in the ambient tile graph.
pub fn thick_cluster_tubes(d: &Diagram) -> Result<(Diagram, Vec<Tube>), DiagramError> {
    let (ambient, ranges) = ambient_expansion(d);
    let ad = make_diagram(ambient, &[])?;
    let brackets = ad.enumerate_brackets();
    let n = ad.particle_count();
    let mut tubes = Vec::new();
    for p in d.thick_positions() {
        let r = ranges[p].clone();
        let eqs: Vec<Equation> = (r.start..r.end - 1)
            .map(|i| {
                let mut normal = vec![0; n];
                normal[i] = 1;
                normal[i + 1] = -1;
                Equation { normal, rhs: 0 }
            })
            .collect();
        let flat = Flat::whole(n).meet_equations(&eqs).expect("consistent");
        let b = brackets
            .iter()
            .find(|b| b.flat == flat)
            .ok_or(DiagramError::InvalidBracket)?;
        tubes.push(b.walls);
    }
    Ok((ad, tubes))
}

pub fn atypical_chamber_poset(d: &Diagram) -> Result<AtypicalChamber, DiagramError> {
    let (ad, clusters) = thick_cluster_tubes(d)?;
    let g = ad.wall_graph();
    let mut base_tubes = clusters.clone();
    for &c in &clusters {
        let sub = induced_subgraph(&g, c)?;
        let ids = mask_nodes(c);
        if sub.node_count() > 1 {
            let inner = crate::tubing::enumerate_tubings(&sub, Some(sub.node_count() - 1))?;
            for &t in inner[0].tubes() {
                base_tubes.push(mask_nodes(t).iter().fold(0u64, |acc, &i| acc | 1 << ids[i]));
            }
        }
    }
    let base = Tubing::new(&g, base_tubes)?;
    let levels: Vec<usize> = face_interval(&g, &base)?.iter().map(Vec::len).collect();
    let chamber_graph = reconnected_complement_all(&g, &clusters)?;
    let label = factor_label(&chamber_graph);
    let mut facets = Vec::new();
    for t in crate::tubing::all_tubes(&chamber_graph) {
        facets.push(classify_face_factors(
            &chamber_graph,
            &Tubing::new(&chamber_graph, [t])?,
        )?);
    }
    facets.sort();
    Ok(AtypicalChamber {
        ambient: ad.family,
        ambient_graph: g,
        base,
        levels,
        chamber_graph,
        label,
        facets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::make_diagram;
    use crate::tubing::{enumerate_tubings, face_interval_size};
    use std::collections::BTreeSet;

    fn fam(tag: FamilyTag, n: usize) -> Family {
        Family::new(tag, n).unwrap()
    }

    #[test]
    fn tiles() {
        assert!(tile_graph(fam(FamilyTag::B, 4))
            .unwrap()
            .tile_graph
            .is_isomorphic(&Graph::path(4)));
        assert!(tile_graph(fam(FamilyTag::BTilde, 3))
            .unwrap()
            .tile_graph
            .is_isomorphic(&Graph::star(3)));
        assert!(tile_graph(fam(FamilyTag::ATilde, 2))
            .unwrap()
            .tile_graph
            .is_isomorphic(&Graph::cycle(3)));
        let t = tile_graph(fam(FamilyTag::CTilde, 3)).unwrap();
        assert_eq!(t.tile_dimension, 3);
        assert_eq!(t.tile_graph.node_count(), 4);
    }

    #[test]
    fn path_and_cycle_faces() {
        let p = Graph::path(5);
        for t in enumerate_tubings(&p, None).unwrap() {
            for l in classify_face_factors(&p, &t).unwrap() {
                assert!(
                    l == "point" || l.starts_with('A') && !l.starts_with("Atilde"),
                    "{l}"
                );
            }
        }
        let c = Graph::cycle(5);
        for t in enumerate_tubings(&c, None)
            .unwrap()
            .iter()
            .filter(|t| !t.is_empty())
        {
            let labels = classify_face_factors(&c, t).unwrap();
            let cycles = labels.iter().filter(|l| l.starts_with("Atilde")).count();
            let rest_paths = labels.iter().all(|l| l == "point" || l.starts_with('A'));
            assert!(cycles <= 1 && rest_paths, "{labels:?}");
        }
    }

    #[test]
    fn d4_facets() {
        let g = d_graph(4);
        let mut pent = 0;
        let mut square = 0;
        let mut hex = 0;
        for f in enumerate_tubings(&g, Some(1)).unwrap() {
            let mut l = classify_face_factors(&g, &f).unwrap();
            l.sort();
            match l.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
                ["A3", "point"] => pent += 1,
                ["A2", "A2"] => square += 1,
                ["Atilde2", "point"] => hex += 1,
                other => panic!("unexpected facet {other:?}"),
            }
        }
        assert_eq!((pent, square, hex), (6, 3, 1));
        let center = Tubing::new(&g, [1u64 << 1]).unwrap();
        assert!(classify_face_factors(&g, &center)
            .unwrap()
            .contains(&"Atilde2".to_string()));
    }

    #[test]
    fn factor_dimensions_add_up() {
        for g in [d_graph(5), dtilde_graph(5), Graph::cycle(5)] {
            let n = g.node_count();
            for t in enumerate_tubings(&g, None).unwrap() {
                let dim: usize = face_factors(&g, &t)
                    .unwrap()
                    .iter()
                    .map(|f| f.node_count() - 1)
                    .sum();
                assert_eq!(dim, n - 1 - t.len());
            }
        }
    }

    #[test]
    fn thick_d4_chamber_types() {
        let mut labels = BTreeSet::new();
        for pos in 0..4 {
            let d = make_diagram(fam(FamilyTag::D, 4), &[(pos, 2)]).unwrap();
            let c = atypical_chamber_poset(&d).unwrap();
            // The chamber is an interval of the ambient tile.
            assert_eq!(
                c.levels.iter().sum::<usize>(),
                face_interval_size(&c.ambient_graph, &c.base).unwrap()
            );
            assert_eq!(c.levels[0], 1);
            labels.insert(c.label);
        }
        assert!(
            labels.contains("A4") && labels.contains("D4") && labels.contains("Xa4"),
            "{labels:?}"
        );
        let plain =
            atypical_chamber_poset(&make_diagram(fam(FamilyTag::D, 4), &[]).unwrap()).unwrap();
        assert_eq!(plain.label, "D4");
    }
}
