//! Automorphisms of simplicial posets, orbit partitions, the good-action test,
//! and quotient complexes.
//!
//! The rotation `ρ` sends `w_{0,l}` to `w_{0,l+2}` and `w_{j,l}` to
//! `w_{j,l+2q_j}` (indices mod `2p`), extended to every cell through vertex
//! images. It generates a free `Z_p` action on `Σ`. An action is *good* when no
//! two vertices of one orbit are adjacent; quotients are constructed only for
//! good actions, because exactly then the quotient poset is again a simplicial
//! cell complex.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;

use crate::builders::{Sigma, VertexLabel};
use crate::error::{Error, Result};
use crate::poset::{CellId, SimplicialPoset};

/// A dimension- and order-preserving bijection of the cells of one poset.
pub struct PosetAutomorphism<'p> {
    poset: &'p SimplicialPoset,
    /// Image of each cell, indexed by cell id.
    perm: Vec<CellId>,
    order: usize,
}

impl<'p> PosetAutomorphism<'p> {
    /// Validate that `perm` is an automorphism: a bijection preserving
    /// dimensions and the face relation in both directions.
    pub fn new(poset: &'p SimplicialPoset, perm: Vec<CellId>) -> Result<Self> {
        if perm.len() != poset.cell_count() {
            return Err(Error::NotAnAutomorphism(format!(
                "permutation covers {} cells, poset has {}",
                perm.len(),
                poset.cell_count()
            )));
        }
        let mut seen = vec![false; perm.len()];
        for &img in &perm {
            if img.index() >= perm.len() || seen[img.index()] {
                return Err(Error::NotAnAutomorphism("image is not a bijection".to_string()));
            }
            seen[img.index()] = true;
        }
        for c in poset.cell_ids() {
            let img = perm[c.index()];
            if poset.dim_of(c) != poset.dim_of(img) {
                return Err(Error::NotAnAutomorphism(format!(
                    "{c:?} and its image {img:?} differ in dimension"
                )));
            }
            // A bijection preserving the cover relation (facet lists) in the
            // forward direction preserves the full order both ways.
            let mut mapped: Vec<CellId> =
                poset.facets_of(c).iter().map(|f| perm[f.index()]).collect();
            mapped.sort();
            let mut actual: Vec<CellId> = poset.facets_of(img).to_vec();
            actual.sort();
            if mapped != actual {
                return Err(Error::NotAnAutomorphism(format!(
                    "facets of {c:?} do not map onto facets of {img:?}"
                )));
            }
        }
        let order = permutation_order(&perm);
        Ok(PosetAutomorphism { poset, perm, order })
    }

    /// The identity automorphism.
    pub fn identity(poset: &'p SimplicialPoset) -> Self {
        let perm: Vec<CellId> = poset.cell_ids().collect();
        PosetAutomorphism { poset, perm, order: 1 }
    }

    pub fn poset(&self) -> &'p SimplicialPoset {
        self.poset
    }

    pub fn image(&self, c: CellId) -> CellId {
        self.perm[c.index()]
    }

    /// Order of the generated cyclic group.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The k-th power; automorphisms are closed under composition, so no
    /// revalidation is needed.
    pub fn pow(&self, k: usize) -> PosetAutomorphism<'p> {
        let mut perm: Vec<CellId> = self.poset.cell_ids().collect();
        for entry in perm.iter_mut() {
            let mut c = *entry;
            for _ in 0..k {
                c = self.perm[c.index()];
            }
            *entry = c;
        }
        let order = permutation_order(&perm);
        PosetAutomorphism { poset: self.poset, perm, order }
    }

    /// Cells fixed by this automorphism.
    pub fn fixed_cells(&self) -> Vec<CellId> {
        self.poset.cell_ids().filter(|&c| self.image(c) == c).collect()
    }
}

fn permutation_order(perm: &[CellId]) -> usize {
    let mut visited = vec![false; perm.len()];
    let mut order: usize = 1;
    for start in 0..perm.len() {
        if visited[start] {
            continue;
        }
        let mut len = 0usize;
        let mut c = start;
        while !visited[c] {
            visited[c] = true;
            c = perm[c].index();
            len += 1;
        }
        order = order.lcm(&len);
    }
    order
}

/// Partition of the cells of a poset into orbits of a cyclic group.
pub struct OrbitPartition {
    /// Orbit representative (smallest cell id in the orbit) per cell.
    rep_of: Vec<CellId>,
    /// Members per representative, sorted.
    members: BTreeMap<CellId, Vec<CellId>>,
}

impl OrbitPartition {
    pub fn rep(&self, c: CellId) -> CellId {
        self.rep_of[c.index()]
    }

    pub fn orbit_count(&self) -> usize {
        self.members.len()
    }

    /// Orbits as (representative, members), ascending by representative.
    pub fn orbits(&self) -> impl Iterator<Item = (CellId, &[CellId])> {
        self.members.iter().map(|(&rep, m)| (rep, m.as_slice()))
    }

    pub fn orbit_of(&self, rep: CellId) -> &[CellId] {
        &self.members[&rep]
    }
}

/// Orbits of the cyclic group generated by `g` on all nonempty cells.
pub fn orbits(g: &PosetAutomorphism) -> OrbitPartition {
    let n = g.poset().cell_count();
    let mut rep_of: Vec<Option<CellId>> = vec![None; n];
    let mut members: BTreeMap<CellId, Vec<CellId>> = BTreeMap::new();
    for start in g.poset().cell_ids() {
        if rep_of[start.index()].is_some() {
            continue;
        }
        let mut orbit = vec![start];
        let mut c = g.image(start);
        while c != start {
            orbit.push(c);
            c = g.image(c);
        }
        let rep = *orbit.iter().min().unwrap();
        for &m in &orbit {
            rep_of[m.index()] = Some(rep);
        }
        orbit.sort();
        members.insert(rep, orbit);
    }
    let rep_of = rep_of.into_iter().map(|r| r.expect("every cell visited")).collect();
    OrbitPartition { rep_of, members }
}

/// Witness that an action fails to be good: an edge whose endpoints share an
/// orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GoodActionWitness {
    pub edge: CellId,
    pub endpoints: (CellId, CellId),
}

/// Outcome of the good-action test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoodActionCheck {
    Good,
    NotGood(GoodActionWitness),
}

impl GoodActionCheck {
    pub fn is_good(&self) -> bool {
        matches!(self, GoodActionCheck::Good)
    }
}

/// An action is good when no edge joins two vertices of one orbit.
pub fn is_good_action(g: &PosetAutomorphism) -> GoodActionCheck {
    let poset = g.poset();
    let orb = orbits(g);
    for &e in poset.cells_of_dim(1) {
        let vs = poset.vertices_of(e);
        debug_assert_eq!(vs.len(), 2);
        if orb.rep(vs[0]) == orb.rep(vs[1]) {
            return GoodActionCheck::NotGood(GoodActionWitness {
                edge: e,
                endpoints: (vs[0], vs[1]),
            });
        }
    }
    GoodActionCheck::Good
}

/// The quotient poset together with the projection onto it.
pub struct QuotientMap {
    pub poset: SimplicialPoset,
    /// Image of each cell of the original poset in the quotient.
    pub projection: Vec<CellId>,
}

/// Quotient of a poset by the cyclic group generated by `g`.
///
/// Cells of the quotient are orbits; the face relation is induced from any
/// representative. Rejects non-good actions: their quotient posets are not
/// simplicial cell complexes.
pub fn quotient_with_projection(g: &PosetAutomorphism) -> Result<QuotientMap> {
    if let GoodActionCheck::NotGood(w) = is_good_action(g) {
        return Err(Error::NotGoodAction { edge: w.edge, u: w.endpoints.0, v: w.endpoints.1 });
    }
    let poset = g.poset();
    let orb = orbits(g);

    let mut reps: Vec<CellId> = orb.orbits().map(|(rep, _)| rep).collect();
    reps.sort_by_key(|&r| (poset.dim_of(r), r));
    let new_id_of_rep: HashMap<CellId, usize> =
        reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let project =
        |c: CellId| -> usize { new_id_of_rep[&orb.rep(c)] };

    let mut builder = crate::poset::PosetBuilder::new();
    let mut new_ids: Vec<CellId> = Vec::with_capacity(reps.len());
    for &rep in &reps {
        if poset.dim_of(rep) == 0 {
            new_ids.push(builder.add_vertex());
        } else {
            let facets: Vec<CellId> =
                poset.facets_of(rep).iter().map(|&f| new_ids[project(f)]).collect();
            new_ids.push(builder.add_cell(&facets));
        }
        if let Some(key) = poset.key_of(rep) {
            let id = *new_ids.last().unwrap();
            builder.set_key(id, key.to_vec());
        }
    }
    let projection: Vec<CellId> = poset.cell_ids().map(|c| new_ids[project(c)]).collect();
    Ok(QuotientMap { poset: builder.build(), projection })
}

/// Quotient poset only; see [`quotient_with_projection`].
pub fn quotient(g: &PosetAutomorphism) -> Result<SimplicialPoset> {
    quotient_with_projection(g).map(|q| q.poset)
}

/// The rotation `ρ` of `Σ`, verified to be an automorphism of order exactly `p`.
pub fn build_rho<'p>(sigma: &'p Sigma) -> Result<PosetAutomorphism<'p>> {
    let params = sigma.params();
    let poset = sigma.poset();
    let two_p = params.two_p();

    // Cells of a simplicial complex are determined by their vertex sets.
    let mut cell_of_vertices: HashMap<&[CellId], CellId> =
        HashMap::with_capacity(poset.cell_count());
    for c in poset.cell_ids() {
        if cell_of_vertices.insert(poset.vertices_of(c), c).is_some() {
            return Err(Error::NotAnAutomorphism(
                "two cells share a vertex set; the vertex rule cannot extend".to_string(),
            ));
        }
    }

    let vertex_image = |v: CellId| -> CellId {
        let label = sigma.vertex_label(v).expect("every vertex of Σ is labeled");
        let shift = 2 * params.q_ext(label.j) % two_p;
        sigma.vertex_id(VertexLabel { j: label.j, ell: (label.ell + shift) % two_p })
    };

    let mut perm: Vec<CellId> = Vec::with_capacity(poset.cell_count());
    for c in poset.cell_ids() {
        let mut image_vertices: Vec<CellId> =
            poset.vertices_of(c).iter().map(|&v| vertex_image(v)).collect();
        image_vertices.sort();
        let img = cell_of_vertices.get(image_vertices.as_slice()).copied().ok_or_else(|| {
            Error::NotAnAutomorphism(format!(
                "image vertex set of {c:?} is not the vertex set of any cell"
            ))
        })?;
        perm.push(img);
    }

    let rho = PosetAutomorphism::new(poset, perm)?;
    if rho.order() != params.p() as usize {
        return Err(Error::NotAnAutomorphism(format!(
            "rotation has order {}, expected p = {}",
            rho.order(),
            params.p()
        )));
    }
    Ok(rho)
}

/// Quotient `Σ/⟨ρ⟩` with its vertex orbits labeled `U0, V0, ..., Un, Vn`
/// (`Uj` collects the even positions of coordinate `j`, `Vj` the odd ones).
pub fn lens_quotient(sigma: &Sigma, rho: &PosetAutomorphism) -> Result<QuotientMap> {
    let q = quotient_with_projection(rho)?;
    let mut labels = BTreeMap::new();
    for j in 0..=sigma.params().n() {
        let u = sigma.vertex_id(VertexLabel { j, ell: 0 });
        let v = sigma.vertex_id(VertexLabel { j, ell: 1 });
        labels.insert(q.projection[u.index()], format!("U{j}"));
        labels.insert(q.projection[v.index()], format!("V{j}"));
    }
    Ok(QuotientMap { poset: q.poset.attach_labels(labels), projection: q.projection })
}
