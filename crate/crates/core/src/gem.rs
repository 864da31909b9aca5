//! Dual edge-colored graphs of pure simplicial posets, crystallization checks,
//! a closed-form generator for the lens gems, and colored-graph isomorphism.
//!
//! The dual graph of a pure complex has one node per facet and one edge per
//! ridge. When the two facets through a ridge omit the same vertex, that vertex
//! colors the edge; a complex with exactly `d+1` vertices gets a proper edge
//! coloring with `d+1` colors this way. Such a `(d+1)`-regular properly colored
//! graph is a gem (graph-encoded manifold).

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use crate::builders::LensParams;
use crate::error::{Error, Result};
use crate::poset::{CellId, SimplicialPoset};

/// An edge-colored multigraph without loops.
#[derive(Clone, Debug)]
pub struct ColoredGraph {
    node_names: Vec<String>,
    color_names: Vec<String>,
    /// Edges as (node, node, color) index triples.
    edges: Vec<(usize, usize, usize)>,
}

impl ColoredGraph {
    pub fn new(
        node_names: Vec<String>,
        color_names: Vec<String>,
        edges: Vec<(usize, usize, usize)>,
    ) -> Self {
        let n = node_names.len();
        let k = color_names.len();
        for &(a, b, c) in &edges {
            assert!(a < n && b < n && c < k, "edge indices out of range");
            assert_ne!(a, b, "gems have no loops");
        }
        ColoredGraph { node_names, color_names, edges }
    }

    pub fn node_count(&self) -> usize {
        self.node_names.len()
    }

    pub fn color_count(&self) -> usize {
        self.color_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_name(&self, i: usize) -> &str {
        &self.node_names[i]
    }

    pub fn color_name(&self, c: usize) -> &str {
        &self.color_names[c]
    }

    pub fn color_index(&self, name: &str) -> Option<usize> {
        self.color_names.iter().position(|c| c == name)
    }

    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|&&(a, b, _)| a == node || b == node).count()
    }

    /// Per (node, color): the unique neighbor across that color, if the
    /// coloring is proper. Errors on a repeated color at a node.
    pub fn incidence(&self) -> Result<Vec<Vec<Option<usize>>>> {
        let mut table = vec![vec![None; self.color_count()]; self.node_count()];
        for &(a, b, c) in &self.edges {
            for (from, to) in [(a, b), (b, a)] {
                if table[from][c].is_some() {
                    return Err(Error::NotProperlyColored {
                        node: from,
                        color: self.color_names[c].clone(),
                    });
                }
                table[from][c] = Some(to);
            }
        }
        Ok(table)
    }

    pub fn is_properly_colored(&self) -> bool {
        self.incidence().is_ok()
    }

    /// Every node meets every color exactly once (so the graph is
    /// `color_count`-regular).
    pub fn is_regular_gem(&self) -> bool {
        match self.incidence() {
            Ok(table) => table.iter().all(|row| row.iter().all(Option::is_some)),
            Err(_) => false,
        }
    }

    /// Connectivity of the whole node set, optionally ignoring one color.
    pub fn is_connected_without(&self, skip_color: Option<usize>) -> bool {
        let n = self.node_count();
        if n == 0 {
            return true;
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b, c) in &self.edges {
            if Some(c) == skip_color {
                continue;
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_without(None)
    }

    /// Two-colorability of the underlying graph.
    pub fn is_bipartite(&self) -> bool {
        let n = self.node_count();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b, _) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut side: Vec<Option<bool>> = vec![None; n];
        for start in 0..n {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let sv = side[v].unwrap();
                for &w in &adj[v] {
                    match side[w] {
                        None => {
                            side[w] = Some(!sv);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == sv => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }
}

/// Dual graph of a pure simplicial poset, edges colored by omitted vertices.
///
/// Requires the pseudomanifold condition (every ridge in exactly two facets)
/// and, per ridge, that both incident facets omit the same vertex — which is
/// what having exactly `d+1` vertices guarantees for the quotient complexes.
pub fn dual_graph(k: &SimplicialPoset) -> Result<ColoredGraph> {
    let d = k.dim();
    for c in k.maximal_cells() {
        if k.dim_of(c) != d {
            return Err(Error::NotPure { cell: c, dim: k.dim_of(c), top: d });
        }
    }

    let facets = k.top_cells();
    let node_of: HashMap<CellId, usize> =
        facets.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut cofacets: HashMap<CellId, Vec<CellId>> = HashMap::new();
    for &f in facets {
        for &r in k.facets_of(f) {
            cofacets.entry(r).or_default().push(f);
        }
    }

    // One edge per ridge; the color is the vertex both facets omit.
    let mut colored: Vec<(usize, usize, CellId)> = Vec::new();
    let mut color_set: HashSet<CellId> = HashSet::new();
    for &r in k.cells_of_dim(d.saturating_sub(1)) {
        let incident = cofacets.get(&r).map(Vec::as_slice).unwrap_or(&[]);
        if incident.len() != 2 {
            return Err(Error::RidgeFacetCount { ridge: r, count: incident.len() });
        }
        let omitted: Vec<CellId> = incident
            .iter()
            .map(|&f| {
                let rv: HashSet<CellId> = k.vertices_of(r).iter().copied().collect();
                let mut extra =
                    k.vertices_of(f).iter().copied().filter(|v| !rv.contains(v));
                (extra.next(), extra.next())
            })
            .map(|(first, second)| match (first, second) {
                (Some(v), None) => Ok(v),
                _ => Err(Error::AmbiguousRidgeColor { ridge: r, a: incident[0], b: incident[1] }),
            })
            .collect::<Result<_>>()?;
        if omitted[0] != omitted[1] {
            return Err(Error::AmbiguousRidgeColor { ridge: r, a: incident[0], b: incident[1] });
        }
        colored.push((node_of[&incident[0]], node_of[&incident[1]], omitted[0]));
        color_set.insert(omitted[0]);
    }

    let mut color_cells: Vec<CellId> = color_set.into_iter().collect();
    color_cells.sort();
    let color_of: HashMap<CellId, usize> =
        color_cells.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    let all_keyed = facets.iter().all(|&f| k.key_of(f).is_some());
    let node_names: Vec<String> = facets
        .iter()
        .map(|&f| {
            if all_keyed {
                tuple_name(k.key_of(f).unwrap())
            } else if let Some(l) = k.label_of(f) {
                l.to_string()
            } else {
                format!("f{}", f.index())
            }
        })
        .collect();
    let color_names: Vec<String> = color_cells
        .iter()
        .map(|&v| k.label_of(v).map(str::to_string).unwrap_or_else(|| format!("v{}", v.index())))
        .collect();
    let edges: Vec<(usize, usize, usize)> =
        colored.into_iter().map(|(a, b, v)| (a, b, color_of[&v])).collect();
    Ok(ColoredGraph::new(node_names, color_names, edges))
}

/// Results of the crystallization conditions on a colored graph.
#[derive(Clone, Debug)]
pub struct CrystallizationReport {
    /// (a) every node meets every color exactly once (hence (d+1)-regular).
    pub regular: bool,
    /// (b) incident edge colors are pairwise distinct at every node.
    pub properly_colored: bool,
    /// (c) the graph is connected.
    pub connected: bool,
    /// (d) per color, connectivity of the subgraph on the remaining colors.
    pub residues_connected: Vec<(String, bool)>,
    /// (e) reported, not required: bipartite iff the manifold is orientable.
    pub bipartite: bool,
}

impl CrystallizationReport {
    /// Conditions (a)-(d) all hold.
    pub fn passes(&self) -> bool {
        self.regular
            && self.properly_colored
            && self.connected
            && self.residues_connected.iter().all(|(_, ok)| *ok)
    }
}

pub fn check_crystallization(g: &ColoredGraph) -> CrystallizationReport {
    let properly_colored = g.is_properly_colored();
    let regular = g.is_regular_gem();
    let connected = g.is_connected();
    let residues_connected = (0..g.color_count())
        .map(|c| (g.color_name(c).to_string(), g.is_connected_without(Some(c))))
        .collect();
    let bipartite = g.is_bipartite();
    CrystallizationReport { regular, properly_colored, connected, residues_connected, bipartite }
}

fn tuple_name(t: &[u32]) -> String {
    let inner: Vec<String> = t.iter().map(u32::to_string).collect();
    format!("({})", inner.join(","))
}

/// Closed-form gem of `L(p, q_1, ..., q_n)`, read off from the facet tuples of
/// `Σ` and the rotation shift, without building any complex.
///
/// Nodes are orbits of tuples `(l_0, ..., l_n)` in `Z_{2p}^{n+1}` under adding
/// `(2, 2q_1, ..., 2q_n)`; each orbit is named by its lexicographically
/// smallest member. Colors are `U_j` (even class) and `V_j` (odd class) per
/// coordinate. Crossing the color that matches the parity of `l_j` replaces
/// `l_j` by `l_j + 1`; crossing the other color of coordinate `j` replaces it
/// by `l_j - 1` (mod `2p`).
pub fn lens_gem_direct(params: &LensParams) -> ColoredGraph {
    let n = params.n();
    let two_p = params.two_p();
    let p = params.p();
    let shift: Vec<u32> = (0..=n).map(|j| 2 * params.q_ext(j) % two_p).collect();

    let canon = |t: &[u32]| -> Vec<u32> {
        let mut best = t.to_vec();
        let mut cur = t.to_vec();
        for _ in 1..p {
            for (x, s) in cur.iter_mut().zip(&shift) {
                *x = (*x + s) % two_p;
            }
            if cur < best {
                best.clone_from(&cur);
            }
        }
        best
    };

    // Enumerate orbit representatives in lexicographic order.
    let mut reps: Vec<Vec<u32>> = Vec::new();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut tuple = vec![0u32; n + 1];
    loop {
        let rep = canon(&tuple);
        if seen.insert(rep.clone()) {
            reps.push(rep);
        }
        // advance the odometer
        let mut i = 0;
        loop {
            if i > n {
                break;
            }
            tuple[i] += 1;
            if tuple[i] < two_p {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        if i > n {
            break;
        }
    }
    reps.sort();
    debug_assert_eq!(reps.len(), 2usize.pow((n + 1) as u32) * (p as usize).pow(n as u32));
    let index_of: HashMap<Vec<u32>, usize> =
        reps.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();

    let color_names: Vec<String> =
        (0..=n).flat_map(|j| [format!("U{j}"), format!("V{j}")]).collect();

    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    for (a, rep) in reps.iter().enumerate() {
        for j in 0..=n {
            for class in 0..2u32 {
                // color U_j for class 0 (even), V_j for class 1 (odd)
                let mut t = rep.clone();
                t[j] = if t[j] % 2 == class {
                    (t[j] + 1) % two_p
                } else {
                    (t[j] + two_p - 1) % two_p
                };
                let b = index_of[&canon(&t)];
                debug_assert_ne!(a, b, "flips never fix a node");
                if a < b {
                    edges.push((a, b, 2 * j + class as usize));
                }
            }
        }
    }
    debug_assert_eq!(edges.len(), reps.len() * (n + 1));

    ColoredGraph::new(reps.iter().map(|r| tuple_name(r)).collect(), color_names, edges)
}

/// Decide colored isomorphism under a given color bijection by seeding one
/// node mapping and propagating along color flips. Connected properly colored
/// graphs admit at most one extension per seed.
pub fn colored_isomorphic(
    g: &ColoredGraph,
    h: &ColoredGraph,
    color_map: &BTreeMap<String, String>,
) -> Result<bool> {
    if g.node_count() != h.node_count()
        || g.color_count() != h.color_count()
        || g.edge_count() != h.edge_count()
    {
        return Ok(false);
    }
    if g.node_count() == 0 {
        return Ok(true);
    }

    let mut color_to_h: Vec<usize> = Vec::with_capacity(g.color_count());
    let mut used: HashSet<usize> = HashSet::new();
    for c in 0..g.color_count() {
        let target = color_map
            .get(g.color_name(c))
            .ok_or_else(|| Error::BadColorMap(format!("color {:?} unmapped", g.color_name(c))))?;
        let hc = h
            .color_index(target)
            .ok_or_else(|| Error::BadColorMap(format!("unknown target color {target:?}")))?;
        if !used.insert(hc) {
            return Err(Error::BadColorMap(format!("two colors map to {target:?}")));
        }
        color_to_h.push(hc);
    }

    let inc_g = g.incidence()?;
    let inc_h = h.incidence()?;
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }

    'seed: for h0 in 0..h.node_count() {
        let mut g2h: Vec<Option<usize>> = vec![None; g.node_count()];
        let mut h2g: Vec<Option<usize>> = vec![None; h.node_count()];
        g2h[0] = Some(h0);
        h2g[h0] = Some(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            let b = g2h[a].unwrap();
            for c in 0..g.color_count() {
                match (inc_g[a][c], inc_h[b][color_to_h[c]]) {
                    (None, None) => {}
                    (Some(a2), Some(b2)) => match (g2h[a2], h2g[b2]) {
                        (None, None) => {
                            g2h[a2] = Some(b2);
                            h2g[b2] = Some(a2);
                            queue.push_back(a2);
                        }
                        (Some(bb), Some(aa)) if bb == b2 && aa == a2 => {}
                        _ => continue 'seed,
                    },
                    _ => continue 'seed,
                }
            }
        }
        if g2h.iter().all(Option::is_some) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Identity color map `U0 -> U0, V0 -> V0, ...` for comparing two lens gems.
pub fn identity_color_map(g: &ColoredGraph) -> BTreeMap<String, String> {
    (0..g.color_count())
        .map(|c| (g.color_name(c).to_string(), g.color_name(c).to_string()))
        .collect()
}

/// Render a gem in the text exchange format: a header `p n q_1 ... q_n`, then
/// one line `<node_a> <node_b> <color>` per edge with the smaller node name
/// first, all edge lines sorted lexicographically, LF line endings.
pub fn write_gem_text(params: &LensParams, g: &ColoredGraph) -> String {
    let mut out = format!("{} {}", params.p(), params.n());
    for qj in params.q() {
        out.push_str(&format!(" {qj}"));
    }
    out.push('\n');
    let mut lines: Vec<String> = g
        .edges()
        .iter()
        .map(|&(a, b, c)| {
            let (x, y) = if g.node_name(a) <= g.node_name(b) { (a, b) } else { (b, a) };
            format!("{} {} {}", g.node_name(x), g.node_name(y), g.color_name(c))
        })
        .collect();
    lines.sort();
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}
