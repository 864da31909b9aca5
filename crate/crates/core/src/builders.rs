//! Constructions: the 2p-cycle complexes, joins, and the sphere triangulation
//! `Σ = Σ_0 ∗ Σ_1 ∗ ... ∗ Σ_n`.
//!
//! Vertices of the `j`-th cycle are labeled `w_{j,l}` for `l = 0..2p-1`; the
//! vertex `w_{j,l}` stands for the point on the `j`-th coordinate circle at
//! angle `l·π/p`. Consecutive vertices are joined by the edges `L_{j,l}`, and
//! the facets of `Σ` are the joins `L_{0,l_0} ∗ ... ∗ L_{n,l_n}`, one for each
//! tuple `(l_0, ..., l_n)` in `Z_{2p}^{n+1}`. That tuple is attached to each
//! facet as its key.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::poset::{CellId, PosetBuilder, SimplicialPoset};

/// Parameters `(p, q_1, ..., q_n)` of a generalized lens space.
///
/// `p >= 2`, `n >= 1`, and every `q_j` is coprime to `p`. The `q_j` are reduced
/// into `1..p` at construction; any integer representatives are accepted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LensParams {
    p: u32,
    q: Vec<u32>,
}

impl LensParams {
    pub fn new(p: u32, q: &[i64]) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidParams(format!("p must be at least 2, got {p}")));
        }
        if q.is_empty() {
            return Err(Error::InvalidParams("need at least one q (n >= 1)".to_string()));
        }
        let reduced: Vec<u32> = q
            .iter()
            .map(|&qj| {
                let r = qj.rem_euclid(p as i64) as u32;
                if r.gcd(&p) != 1 {
                    return Err(Error::InvalidParams(format!(
                        "q = {qj} is not relatively prime to p = {p}"
                    )));
                }
                Ok(r)
            })
            .collect::<Result<_>>()?;
        Ok(LensParams { p, q: reduced })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Number of `q` parameters; the quotient manifold has dimension `2n+1`.
    pub fn n(&self) -> usize {
        self.q.len()
    }

    /// The reduced `(q_1, ..., q_n)`, each in `1..p`.
    pub fn q(&self) -> &[u32] {
        &self.q
    }

    /// Rotation multiplier for coordinate `j`: `1` for `j = 0`, else `q_j`.
    pub fn q_ext(&self, j: usize) -> u32 {
        if j == 0 {
            1
        } else {
            self.q[j - 1]
        }
    }

    /// Dimension `2n+1` of the sphere and of the quotient.
    pub fn dim(&self) -> usize {
        2 * self.n() + 1
    }

    pub fn two_p(&self) -> u32 {
        2 * self.p
    }
}

impl fmt::Display for LensParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({}", self.p)?;
        for qj in &self.q {
            write!(f, ",{qj}")?;
        }
        write!(f, ")")
    }
}

/// Position `w_{j,l}` of a vertex of `Σ`: coordinate index `j` in `0..=n`,
/// angular index `l` in `0..2p`. Even `l` is class `U_j`, odd `l` is `V_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VertexLabel {
    pub j: usize,
    pub ell: u32,
}

impl VertexLabel {
    pub fn display_name(&self) -> String {
        format!("w_{{{},{}}}", self.j, self.ell)
    }
}

/// The cycle complex `Σ_j`: a `2p`-gon with vertices `w_{j,0}, ..., w_{j,2p-1}`
/// in cyclic order.
pub fn cycle_complex(p: u32, j: usize) -> Result<SimplicialPoset> {
    if p < 2 {
        return Err(Error::InvalidParams(format!("p must be at least 2, got {p}")));
    }
    let two_p = 2 * p;
    let mut b = PosetBuilder::new();
    let vs: Vec<CellId> =
        (0..two_p).map(|ell| b.add_labeled_vertex(VertexLabel { j, ell }.display_name())).collect();
    for ell in 0..two_p {
        let e = b.add_cell(&[vs[ell as usize], vs[((ell + 1) % two_p) as usize]]);
        b.set_label(e, format!("L_{{{j},{ell}}}"));
    }
    Ok(b.build())
}

/// The join `A ∗ B`: cells are pairs `(α, β)` with `α ∈ A ∪ {∅}`,
/// `β ∈ B ∪ {∅}`, not both empty, ordered componentwise.
///
/// Inputs must be simplicial complexes with disjoint vertex label sets; the
/// output is again a simplicial complex of dimension `dim A + dim B + 1`.
pub fn join(a: &SimplicialPoset, b: &SimplicialPoset) -> Result<SimplicialPoset> {
    check_simplicial(a)?;
    check_simplicial(b)?;
    for va in a.cells_of_dim(0) {
        if let Some(label) = a.label_of(*va) {
            if b.cells_of_dim(0).iter().any(|vb| b.label_of(*vb) == Some(label)) {
                return Err(Error::OverlappingVertexLabels { label: label.to_string() });
            }
        }
    }

    // Enumerate pairs in (dim, a-part, b-part) order so ids are deterministic
    // and all vertices of A precede all vertices of B.
    let pair_dim = |ai: Option<CellId>, bi: Option<CellId>| -> usize {
        let da = ai.map_or(-1i64, |c| a.dim_of(c) as i64);
        let db = bi.map_or(-1i64, |c| b.dim_of(c) as i64);
        (da + db + 1) as usize
    };
    let sort_key = |c: Option<CellId>| c.map_or(-1i64, |c| c.index() as i64);
    let mut pairs: Vec<(Option<CellId>, Option<CellId>)> = Vec::new();
    for ai in std::iter::once(None).chain(a.cell_ids().map(Some)) {
        for bi in std::iter::once(None).chain(b.cell_ids().map(Some)) {
            if ai.is_none() && bi.is_none() {
                continue;
            }
            pairs.push((ai, bi));
        }
    }
    pairs.sort_by_key(|&(ai, bi)| (pair_dim(ai, bi), sort_key(ai), sort_key(bi)));

    let mut builder = PosetBuilder::new();
    let mut id_of: HashMap<(Option<CellId>, Option<CellId>), CellId> = HashMap::new();
    for &(ai, bi) in &pairs {
        let dim = pair_dim(ai, bi);
        let id = if dim == 0 {
            builder.add_vertex()
        } else {
            let mut facets: Vec<CellId> = Vec::with_capacity(dim + 1);
            if let Some(ac) = ai {
                if a.dim_of(ac) == 0 {
                    facets.push(id_of[&(None, bi)]);
                } else {
                    facets.extend(a.facets_of(ac).iter().map(|&f| id_of[&(Some(f), bi)]));
                }
            }
            if let Some(bc) = bi {
                if b.dim_of(bc) == 0 {
                    facets.push(id_of[&(ai, None)]);
                } else {
                    facets.extend(b.facets_of(bc).iter().map(|&f| id_of[&(ai, Some(f))]));
                }
            }
            builder.add_cell(&facets)
        };
        // Cells living in a single factor keep that factor's label.
        match (ai, bi) {
            (Some(ac), None) => {
                if let Some(l) = a.label_of(ac) {
                    builder.set_label(id, l);
                }
            }
            (None, Some(bc)) => {
                if let Some(l) = b.label_of(bc) {
                    builder.set_label(id, l);
                }
            }
            _ => {}
        }
        id_of.insert((ai, bi), id);
    }
    Ok(builder.build())
}

fn check_simplicial(p: &SimplicialPoset) -> Result<()> {
    let mut seen: HashMap<&[CellId], CellId> = HashMap::with_capacity(p.cell_count());
    for id in p.cell_ids() {
        if let Some(&other) = seen.get(p.vertices_of(id)) {
            return Err(Error::JoinInputNotSimplicial { a: other, b: id });
        }
        seen.insert(p.vertices_of(id), id);
    }
    Ok(())
}

/// The triangulation `Σ = Σ_0 ∗ ... ∗ Σ_n` of the sphere `S^{2n+1}`, with its
/// vertex table and facet keys.
pub struct Sigma {
    params: LensParams,
    poset: SimplicialPoset,
    /// `vertex_ids[j][l]` is the cell id of `w_{j,l}`.
    vertex_ids: Vec<Vec<CellId>>,
    vertex_labels: HashMap<CellId, VertexLabel>,
}

impl Sigma {
    pub fn params(&self) -> &LensParams {
        &self.params
    }

    pub fn poset(&self) -> &SimplicialPoset {
        &self.poset
    }

    pub fn vertex_id(&self, label: VertexLabel) -> CellId {
        self.vertex_ids[label.j][label.ell as usize]
    }

    pub fn vertex_label(&self, id: CellId) -> Option<VertexLabel> {
        self.vertex_labels.get(&id).copied()
    }

    /// The tuple `(l_0, ..., l_n)` recording which edge each coordinate
    /// contributes to the facet.
    pub fn facet_key(&self, facet: CellId) -> Option<&[u32]> {
        self.poset.key_of(facet)
    }
}

/// Build `Σ` for the given parameters: a `2p(n+1)`-vertex triangulation with
/// `(2p)^{n+1}` facets, each facet keyed by its edge tuple.
pub fn build_sigma(params: &LensParams) -> Sigma {
    let n = params.n();
    let mut poset = cycle_complex(params.p(), 0).expect("params are validated");
    for j in 1..=n {
        let factor = cycle_complex(params.p(), j).expect("params are validated");
        poset = join(&poset, &factor).expect("cycle factors have disjoint labels");
    }

    // Recover the vertex table from labels (joins preserve factor labels).
    let mut by_label: HashMap<String, CellId> = HashMap::new();
    for &v in poset.cells_of_dim(0) {
        if let Some(l) = poset.label_of(v) {
            by_label.insert(l.to_string(), v);
        }
    }
    let two_p = params.two_p();
    let mut vertex_ids = Vec::with_capacity(n + 1);
    let mut vertex_labels = HashMap::new();
    for j in 0..=n {
        let mut row = Vec::with_capacity(two_p as usize);
        for ell in 0..two_p {
            let label = VertexLabel { j, ell };
            let id = by_label[&label.display_name()];
            vertex_labels.insert(id, label);
            row.push(id);
        }
        vertex_ids.push(row);
    }

    // Attach the edge-tuple key to every facet.
    let mut keys: BTreeMap<CellId, Vec<u32>> = BTreeMap::new();
    for &facet in poset.top_cells() {
        let mut ells: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
        for &v in poset.vertices_of(facet) {
            let label = vertex_labels[&v];
            ells[label.j].push(label.ell);
        }
        let key: Vec<u32> = ells
            .into_iter()
            .map(|mut pair| {
                pair.sort_unstable();
                debug_assert_eq!(pair.len(), 2);
                if pair[0] + 1 == pair[1] {
                    pair[0]
                } else {
                    debug_assert_eq!((pair[0], pair[1]), (0, two_p - 1));
                    two_p - 1
                }
            })
            .collect();
        keys.insert(facet, key);
    }
    let poset = poset.attach_keys(keys);

    Sigma { params: params.clone(), poset, vertex_ids, vertex_labels }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::FVector;

    /// Convolution oracle for join face vectors, with f_{-1} = 1.
    fn convolve(fa: &[usize], fb: &[usize]) -> Vec<usize> {
        let ga: Vec<usize> = std::iter::once(1).chain(fa.iter().copied()).collect();
        let gb: Vec<usize> = std::iter::once(1).chain(fb.iter().copied()).collect();
        let mut g = vec![0usize; ga.len() + gb.len() - 1];
        for (i, &x) in ga.iter().enumerate() {
            for (j, &y) in gb.iter().enumerate() {
                g[i + j] += x * y;
            }
        }
        g.remove(0); // drop the empty-cell coefficient
        g
    }

    fn point(label: &str) -> SimplicialPoset {
        let mut b = PosetBuilder::new();
        b.add_labeled_vertex(label);
        b.build()
    }

    #[test]
    fn params_reduce_and_reject() {
        let p = LensParams::new(5, &[7, -1]).unwrap();
        assert_eq!(p.q(), &[2, 4]);
        assert_eq!(p.n(), 2);
        assert_eq!(p.dim(), 5);
        assert!(LensParams::new(1, &[1]).is_err());
        assert!(LensParams::new(4, &[2]).is_err());
        assert!(LensParams::new(4, &[0]).is_err());
        assert!(LensParams::new(2, &[]).is_err());
    }

    #[test]
    fn cycle_complex_shape() {
        let c = cycle_complex(2, 0).unwrap();
        assert!(c.validate().is_empty());
        assert_eq!(c.f_vector(), FVector(vec![4, 4]));
        let c = cycle_complex(3, 1).unwrap();
        assert_eq!(c.f_vector(), FVector(vec![6, 6]));
        assert!(cycle_complex(1, 0).is_err());
    }

    #[test]
    fn cycle_wraps_around() {
        // p = 2: w_{j,3} is adjacent to w_{j,2} and w_{j,0}.
        let c = cycle_complex(2, 0).unwrap();
        let find = |name: &str| {
            c.cells_of_dim(0).iter().copied().find(|&v| c.label_of(v) == Some(name)).unwrap()
        };
        let w3 = find("w_{0,3}");
        let neighbors: Vec<CellId> = c
            .cells_of_dim(1)
            .iter()
            .filter(|&&e| c.vertices_of(e).contains(&w3))
            .flat_map(|&e| c.vertices_of(e).iter().copied().filter(|&v| v != w3))
            .collect();
        assert_eq!(neighbors.len(), 2);
        assert!(neighbors.contains(&find("w_{0,2}")));
        assert!(neighbors.contains(&find("w_{0,0}")));
    }

    #[test]
    fn join_of_points_is_an_edge() {
        let j = join(&point("a"), &point("b")).unwrap();
        assert!(j.validate().is_empty());
        assert_eq!(j.f_vector(), FVector(vec![2, 1]));
        assert_eq!(j.dim(), 1);
    }

    #[test]
    fn join_dimension_and_convolution() {
        let a = cycle_complex(2, 0).unwrap();
        let b = cycle_complex(2, 1).unwrap();
        let j = join(&a, &b).unwrap();
        assert_eq!(j.dim(), a.dim() + b.dim() + 1);
        assert_eq!(j.f_vector().0, convolve(&a.f_vector().0, &b.f_vector().0));
        assert_eq!(j.f_vector(), FVector(vec![8, 24, 32, 16]));
        assert!(j.validate().is_empty());
        assert!(j.is_simplicial_complex());
    }

    #[test]
    fn join_rejects_overlapping_labels() {
        let a = cycle_complex(2, 0).unwrap();
        let b = cycle_complex(2, 0).unwrap();
        assert!(matches!(join(&a, &b), Err(Error::OverlappingVertexLabels { .. })));
    }

    #[test]
    fn join_rejects_non_complexes() {
        let mut b = PosetBuilder::new();
        let u = b.add_vertex();
        let v = b.add_vertex();
        b.add_cell(&[u, v]);
        b.add_cell(&[u, v]);
        let bigon = b.build();
        assert!(matches!(
            join(&bigon, &point("x")),
            Err(Error::JoinInputNotSimplicial { .. })
        ));
    }

    #[test]
    fn join_is_associative_up_to_isomorphism() {
        let a = cycle_complex(2, 0).unwrap();
        let b = cycle_complex(2, 1).unwrap();
        let c = cycle_complex(2, 2).unwrap();
        let left = join(&join(&a, &b).unwrap(), &c).unwrap();
        let right = join(&a, &join(&b, &c).unwrap()).unwrap();
        // Simplicial complexes with labeled vertices are isomorphic iff their
        // families of vertex-label sets coincide.
        let family = |p: &SimplicialPoset| {
            let mut cells: Vec<Vec<String>> = p
                .cell_ids()
                .map(|c| {
                    let mut names: Vec<String> = p
                        .vertices_of(c)
                        .iter()
                        .map(|&v| p.label_of(v).unwrap().to_string())
                        .collect();
                    names.sort();
                    names
                })
                .collect();
            cells.sort();
            cells
        };
        assert_eq!(family(&left), family(&right));
    }

    #[test]
    fn sigma_counts() {
        for (p, n) in [(2u32, 1usize), (3, 1), (2, 2), (5, 1)] {
            let params = LensParams::new(p, &vec![1i64; n]).unwrap();
            let sigma = build_sigma(&params);
            let f = sigma.poset().f_vector();
            assert_eq!(f.0[0], (2 * p as usize) * (n + 1), "f_0 for p={p} n={n}");
            assert_eq!(
                f.0[2 * n + 1],
                (2 * p as usize).pow((n + 1) as u32),
                "facets for p={p} n={n}"
            );
            assert_eq!(
                sigma.poset().cell_count(),
                (4 * p as usize + 1).pow((n + 1) as u32) - 1
            );
            assert_eq!(sigma.poset().euler_characteristic(), 0);
        }
    }

    #[test]
    fn sigma_small_is_valid_pure_pseudomanifold() {
        let params = LensParams::new(2, &[1]).unwrap();
        let sigma = build_sigma(&params);
        let poset = sigma.poset();
        assert!(poset.validate().is_empty());
        assert!(poset.is_pure());
        assert!(poset.ridges_in_two_facets());
        assert!(poset.is_simplicial_complex());
        assert_eq!(poset.f_vector(), FVector(vec![8, 24, 32, 16]));
    }

    #[test]
    fn sigma_facet_keys_match_vertex_labels() {
        let params = LensParams::new(2, &[1]).unwrap();
        let sigma = build_sigma(&params);
        let poset = sigma.poset();
        let two_p = params.two_p();
        let mut seen = std::collections::HashSet::new();
        for &facet in poset.top_cells() {
            let key = sigma.facet_key(facet).unwrap().to_vec();
            assert!(seen.insert(key.clone()), "facet keys must be distinct");
            for (j, &ell) in key.iter().enumerate() {
                let a = sigma.vertex_id(VertexLabel { j, ell });
                let b = sigma.vertex_id(VertexLabel { j, ell: (ell + 1) % two_p });
                assert!(poset.vertices_of(facet).contains(&a));
                assert!(poset.vertices_of(facet).contains(&b));
            }
        }
        assert_eq!(seen.len(), 16);
    }
}
