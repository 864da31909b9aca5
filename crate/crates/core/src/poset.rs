//! Finite simplicial posets (simplicial cell complexes).
//!
//! A simplicial poset is the face poset of a simplicial CW-complex: every cell's
//! lower set is isomorphic to the face poset of a simplex, but distinct cells may
//! share a vertex set (two edges between the same pair of vertices form a valid
//! "bigon", unlike in a simplicial complex).
//!
//! Cells store both their codimension-1 face list and their vertex tuple. The
//! redundancy is deliberate: vertex tuples make boundary signs and orbit checks
//! cheap, and [`SimplicialPoset::validate`] enforces consistency between the two.
//! Vertex tuples are kept sorted by [`CellId`], which fixes a canonical vertex
//! order for every cell.
//!
//! Posets are immutable after construction; use [`PosetBuilder`] to create them.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque dense handle for a cell, unique within one poset.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId(u32);

impl CellId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

#[derive(Clone, Debug)]
struct Cell {
    dim: usize,
    /// Codimension-1 faces; empty for vertices (the empty cell is implicit).
    facets: Vec<CellId>,
    /// The 0-cells below this cell, sorted ascending by id.
    vertices: Vec<CellId>,
}

/// Face poset of a finite simplicial CW-complex.
#[derive(Clone, Debug)]
pub struct SimplicialPoset {
    cells: Vec<Cell>,
    dim: usize,
    by_dim: Vec<Vec<CellId>>,
    labels: BTreeMap<CellId, String>,
    /// Optional per-cell metadata: coordinate tuples attached by builders.
    keys: BTreeMap<CellId, Vec<u32>>,
}

/// Face vector: `f[j]` is the number of `j`-cells.
#[derive(Clone, PartialEq, Eq)]
pub struct FVector(pub Vec<usize>);

impl FVector {
    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(j, &f)| if j % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }
}

impl fmt::Debug for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{:?}", self.0)
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A defect found by [`SimplicialPoset::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A `j`-cell must have exactly `j+1` distinct codimension-1 faces.
    FacetCount { cell: CellId, expected: usize, found: usize },
    /// A `j`-cell must have exactly `j+1` distinct vertices.
    VertexCount { cell: CellId, expected: usize, found: usize },
    /// A listed facet does not have dimension one less than the cell.
    FacetDim { cell: CellId, facet: CellId },
    /// Vertex tuple is unsorted, contains non-vertices, or is not the union of
    /// the facets' vertex tuples.
    VertexTuple { cell: CellId },
    /// The facets of a cell cannot be matched bijectively to omitted vertices.
    OmittedVertex { cell: CellId },
    /// The lower set of a cell is not isomorphic to the face poset of a simplex.
    LowerSet { cell: CellId, detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FacetCount { cell, expected, found } => {
                write!(f, "{cell:?}: expected {expected} distinct facets, found {found}")
            }
            Violation::VertexCount { cell, expected, found } => {
                write!(f, "{cell:?}: expected {expected} distinct vertices, found {found}")
            }
            Violation::FacetDim { cell, facet } => {
                write!(f, "{cell:?}: facet {facet:?} is not of codimension 1")
            }
            Violation::VertexTuple { cell } => {
                write!(f, "{cell:?}: vertex tuple inconsistent with facets")
            }
            Violation::OmittedVertex { cell } => {
                write!(f, "{cell:?}: facets do not omit pairwise distinct vertices")
            }
            Violation::LowerSet { cell, detail } => {
                write!(f, "{cell:?}: lower set is not a simplex poset ({detail})")
            }
        }
    }
}

impl SimplicialPoset {
    /// Maximum cell dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Total number of (nonempty) cells.
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_ids(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.cells.len() as u32).map(CellId)
    }

    pub fn dim_of(&self, id: CellId) -> usize {
        self.cells[id.index()].dim
    }

    /// Codimension-1 faces of a cell; empty for vertices.
    pub fn facets_of(&self, id: CellId) -> &[CellId] {
        &self.cells[id.index()].facets
    }

    /// Vertices of a cell, sorted ascending by id.
    pub fn vertices_of(&self, id: CellId) -> &[CellId] {
        &self.cells[id.index()].vertices
    }

    /// Ids of all `j`-cells, ascending.
    pub fn cells_of_dim(&self, j: usize) -> &[CellId] {
        self.by_dim.get(j).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Top-dimensional cells.
    pub fn top_cells(&self) -> &[CellId] {
        self.cells_of_dim(self.dim)
    }

    pub fn label_of(&self, id: CellId) -> Option<&str> {
        self.labels.get(&id).map(String::as_str)
    }

    pub fn key_of(&self, id: CellId) -> Option<&[u32]> {
        self.keys.get(&id).map(Vec::as_slice)
    }

    /// Number of `j`-cells for each `j`.
    pub fn f_vector(&self) -> FVector {
        let mut f = vec![0usize; self.dim + 1];
        for c in &self.cells {
            f[c.dim] += 1;
        }
        FVector(f)
    }

    /// Alternating sum of the face vector.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().euler_characteristic()
    }

    /// True iff all maximal cells are top-dimensional.
    pub fn is_pure(&self) -> bool {
        self.maximal_cells().iter().all(|&c| self.dim_of(c) == self.dim)
    }

    /// Cells that are not a face of any other cell.
    pub fn maximal_cells(&self) -> Vec<CellId> {
        let mut has_coface = vec![false; self.cells.len()];
        for c in &self.cells {
            for &f in &c.facets {
                has_coface[f.index()] = true;
            }
        }
        self.cell_ids().filter(|id| !has_coface[id.index()]).collect()
    }

    /// Pseudomanifold condition: every (d-1)-cell is a facet of exactly two d-cells.
    pub fn ridges_in_two_facets(&self) -> bool {
        if self.dim == 0 {
            return false;
        }
        let mut count: HashMap<CellId, usize> = HashMap::new();
        for &t in self.top_cells() {
            for &r in self.facets_of(t) {
                *count.entry(r).or_insert(0) += 1;
            }
        }
        self.cells_of_dim(self.dim - 1)
            .iter()
            .all(|r| count.get(r).copied().unwrap_or(0) == 2)
    }

    /// All cells `<=` the given cell, including the cell itself.
    pub fn lower_set(&self, id: CellId) -> Vec<CellId> {
        let mut seen: HashSet<CellId> = HashSet::new();
        let mut stack = vec![id];
        while let Some(c) = stack.pop() {
            if seen.insert(c) {
                stack.extend(self.facets_of(c).iter().copied());
            }
        }
        let mut out: Vec<CellId> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// True iff distinct cells have distinct vertex sets (the complex condition).
    pub fn is_simplicial_complex(&self) -> bool {
        let mut seen: HashSet<&[CellId]> = HashSet::with_capacity(self.cells.len());
        self.cells.iter().all(|c| seen.insert(&c.vertices))
    }

    /// Check every axiom of a simplicial poset; an empty list means the poset
    /// is a valid simplicial cell complex.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for id in self.cell_ids() {
            self.validate_cell(id, &mut out);
        }
        out
    }

    fn validate_cell(&self, id: CellId, out: &mut Vec<Violation>) {
        let cell = &self.cells[id.index()];
        let j = cell.dim;

        let expected_facets = if j == 0 { 0 } else { j + 1 };
        let distinct_facets: HashSet<CellId> = cell.facets.iter().copied().collect();
        if cell.facets.len() != expected_facets || distinct_facets.len() != cell.facets.len() {
            out.push(Violation::FacetCount {
                cell: id,
                expected: expected_facets,
                found: cell.facets.len(),
            });
            return;
        }
        for &f in &cell.facets {
            if j == 0 || self.cells[f.index()].dim + 1 != j {
                out.push(Violation::FacetDim { cell: id, facet: f });
                return;
            }
        }

        let verts = &cell.vertices;
        let sorted_distinct = verts.windows(2).all(|w| w[0] < w[1]);
        if verts.len() != j + 1 || !sorted_distinct {
            out.push(Violation::VertexCount { cell: id, expected: j + 1, found: verts.len() });
            return;
        }
        if verts.iter().any(|&v| self.cells[v.index()].dim != 0) {
            out.push(Violation::VertexTuple { cell: id });
            return;
        }
        if j == 0 {
            if verts[0] != id {
                out.push(Violation::VertexTuple { cell: id });
            }
            return;
        }

        // Vertex tuple must be the union of the facets' vertex tuples, and each
        // facet must omit exactly one vertex, all omitted vertices distinct.
        let mut union: HashSet<CellId> = HashSet::new();
        for &f in &cell.facets {
            union.extend(self.cells[f.index()].vertices.iter().copied());
        }
        let own: HashSet<CellId> = verts.iter().copied().collect();
        if union != own {
            out.push(Violation::VertexTuple { cell: id });
            return;
        }
        let mut omitted: HashSet<CellId> = HashSet::new();
        for &f in &cell.facets {
            let fv: HashSet<CellId> = self.cells[f.index()].vertices.iter().copied().collect();
            let diff: Vec<CellId> = verts.iter().copied().filter(|v| !fv.contains(v)).collect();
            if diff.len() != 1 || !fv.is_subset(&own) || !omitted.insert(diff[0]) {
                out.push(Violation::OmittedVertex { cell: id });
                return;
            }
        }

        // Lower set isomorphic to the face poset of a j-simplex: the map
        // cell -> vertex subset must be a bijection onto the nonempty subsets
        // of this cell's vertex tuple.
        if j + 1 > 30 {
            return; // subset bitmasks would overflow; no such cells arise here
        }
        let lower = self.lower_set(id);
        let expected = (1usize << (j + 1)) - 1;
        if lower.len() != expected {
            out.push(Violation::LowerSet {
                cell: id,
                detail: format!("{} cells, expected {}", lower.len(), expected),
            });
            return;
        }
        let vertex_pos: HashMap<CellId, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut masks: HashSet<u32> = HashSet::with_capacity(lower.len());
        for &b in &lower {
            let mut mask = 0u32;
            for v in &self.cells[b.index()].vertices {
                match vertex_pos.get(v) {
                    Some(&i) => mask |= 1 << i,
                    None => {
                        out.push(Violation::LowerSet {
                            cell: id,
                            detail: format!("face {b:?} has a vertex outside the cell"),
                        });
                        return;
                    }
                }
            }
            if !masks.insert(mask) {
                out.push(Violation::LowerSet {
                    cell: id,
                    detail: "two faces share a vertex subset".to_string(),
                });
                return;
            }
        }
        // |masks| == expected == number of nonempty subsets, so the map is onto.
    }

    /// The order complex of the nonempty cells: vertices are cells of `self`,
    /// k-simplices are chains `a_0 < ... < a_k`. Always a genuine simplicial
    /// complex, with the same geometric carrier.
    pub fn derived_subdivision(&self) -> SimplicialPoset {
        // Subdivision vertex per cell, in (dim, id) order.
        let mut base: Vec<CellId> = self.cell_ids().collect();
        base.sort_by_key(|&c| (self.dim_of(c), c));
        let vert_of: HashMap<CellId, u32> =
            base.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();

        // above[x] = all cells strictly greater than x, via lower sets.
        let mut above: Vec<Vec<CellId>> = vec![Vec::new(); self.cells.len()];
        for y in self.cell_ids() {
            for x in self.lower_set(y) {
                if x != y {
                    above[x.index()].push(y);
                }
            }
        }
        for v in &mut above {
            v.sort();
        }

        let mut builder = PosetBuilder::new();
        let mut id_of_chain: HashMap<Vec<CellId>, CellId> = HashMap::new();

        // Level 0: one vertex per cell.
        for &c in &base {
            let v = builder.add_vertex();
            id_of_chain.insert(vec![c], v);
        }

        let mut level: Vec<Vec<CellId>> = base.iter().map(|&c| vec![c]).collect();
        while !level.is_empty() {
            let mut next: Vec<Vec<CellId>> = Vec::new();
            for chain in &level {
                let top = *chain.last().unwrap();
                for &y in &above[top.index()] {
                    let mut extended = chain.clone();
                    extended.push(y);
                    next.push(extended);
                }
            }
            next.sort_by_key(|chain| chain.iter().map(|&c| vert_of[&c]).collect::<Vec<_>>());
            for chain in &next {
                let facets: Vec<CellId> = (0..chain.len())
                    .map(|skip| {
                        let sub: Vec<CellId> = chain
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != skip)
                            .map(|(_, &c)| c)
                            .collect();
                        id_of_chain[&sub]
                    })
                    .collect();
                let id = builder.add_cell(&facets);
                id_of_chain.insert(chain.clone(), id);
            }
            level = next;
        }
        builder.build()
    }

    /// Relabel every cell id through the permutation `perm` (old index ->
    /// new id). The result is the same abstract poset with a different
    /// canonical vertex order; homology must not depend on the choice.
    pub fn permuted(&self, perm: &[CellId]) -> SimplicialPoset {
        assert_eq!(perm.len(), self.cells.len(), "permutation length mismatch");
        let mut cells: Vec<Option<Cell>> = vec![None; self.cells.len()];
        for (old, cell) in self.cells.iter().enumerate() {
            let mut c = Cell {
                dim: cell.dim,
                facets: cell.facets.iter().map(|f| perm[f.index()]).collect(),
                vertices: cell.vertices.iter().map(|v| perm[v.index()]).collect(),
            };
            c.vertices.sort();
            cells[perm[old].index()] = Some(c);
        }
        let cells: Vec<Cell> = cells.into_iter().map(|c| c.expect("perm not bijective")).collect();
        let labels = self.labels.iter().map(|(id, l)| (perm[id.index()], l.clone())).collect();
        let keys = self.keys.iter().map(|(id, k)| (perm[id.index()], k.clone())).collect();
        Self::assemble(cells, labels, keys)
    }

    pub(crate) fn attach_labels(mut self, labels: BTreeMap<CellId, String>) -> Self {
        self.labels = labels;
        self
    }

    pub(crate) fn attach_keys(mut self, keys: BTreeMap<CellId, Vec<u32>>) -> Self {
        self.keys = keys;
        self
    }

    fn assemble(
        cells: Vec<Cell>,
        labels: BTreeMap<CellId, String>,
        keys: BTreeMap<CellId, Vec<u32>>,
    ) -> Self {
        let dim = cells.iter().map(|c| c.dim).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); dim + 1];
        for (i, c) in cells.iter().enumerate() {
            by_dim[c.dim].push(CellId(i as u32));
        }
        SimplicialPoset { cells, dim, by_dim, labels, keys }
    }

    /// Serialize to the canonical JSON form: cells sorted by `(dim, id)`.
    pub fn to_json_string(&self) -> String {
        let mut records: Vec<CellRecord> = self
            .cell_ids()
            .map(|id| CellRecord {
                id: id.0,
                dim: self.dim_of(id),
                facets: self.facets_of(id).iter().map(|c| c.0).collect(),
                vertices: self.vertices_of(id).iter().map(|c| c.0).collect(),
                label: self.label_of(id).map(str::to_owned),
                key: self.key_of(id).map(<[u32]>::to_vec),
            })
            .collect();
        records.sort_by_key(|r| (r.dim, r.id));
        let file = PosetFile { dim: self.dim, cells: records };
        serde_json::to_string_pretty(&file).expect("poset serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<SimplicialPoset> {
        let file: PosetFile =
            serde_json::from_str(s).map_err(|e| Error::MalformedJson(e.to_string()))?;
        let count = file.cells.len() as u32;
        let mut slots: Vec<Option<Cell>> = vec![None; file.cells.len()];
        let mut labels = BTreeMap::new();
        let mut keys = BTreeMap::new();
        for rec in file.cells {
            if rec.id >= count {
                return Err(Error::MalformedJson(format!("cell id {} out of range", rec.id)));
            }
            for &r in rec.facets.iter().chain(rec.vertices.iter()) {
                if r >= count {
                    return Err(Error::MalformedJson(format!(
                        "cell {} references unknown id {r}",
                        rec.id
                    )));
                }
            }
            let slot = &mut slots[rec.id as usize];
            if slot.is_some() {
                return Err(Error::MalformedJson(format!("duplicate cell id {}", rec.id)));
            }
            *slot = Some(Cell {
                dim: rec.dim,
                facets: rec.facets.into_iter().map(CellId).collect(),
                vertices: rec.vertices.into_iter().map(CellId).collect(),
            });
            if let Some(l) = rec.label {
                labels.insert(CellId(rec.id), l);
            }
            if let Some(k) = rec.key {
                keys.insert(CellId(rec.id), k);
            }
        }
        let cells: Vec<Cell> = slots
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::MalformedJson("cell ids are not dense".to_string()))?;
        let poset = Self::assemble(cells, labels, keys);
        if poset.dim != file.dim {
            return Err(Error::MalformedJson(format!(
                "declared dim {} but maximum cell dim is {}",
                file.dim, poset.dim
            )));
        }
        Ok(poset)
    }
}

#[derive(Serialize, Deserialize)]
struct PosetFile {
    dim: usize,
    cells: Vec<CellRecord>,
}

#[derive(Serialize, Deserialize)]
struct CellRecord {
    id: u32,
    dim: usize,
    facets: Vec<u32>,
    vertices: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    key: Option<Vec<u32>>,
}

/// Incremental constructor for [`SimplicialPoset`].
///
/// `add_cell` derives dimension and vertex tuple from the facet list, so cells
/// must be added bottom-up. `add_cell_raw` skips all derivation and lets tests
/// build deliberately broken posets for `validate` to find.
#[derive(Default)]
pub struct PosetBuilder {
    cells: Vec<Cell>,
    labels: BTreeMap<CellId, String>,
    keys: BTreeMap<CellId, Vec<u32>>,
}

impl PosetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self) -> CellId {
        let id = CellId(self.cells.len() as u32);
        self.cells.push(Cell { dim: 0, facets: Vec::new(), vertices: vec![id] });
        id
    }

    pub fn add_labeled_vertex(&mut self, label: impl Into<String>) -> CellId {
        let id = self.add_vertex();
        self.labels.insert(id, label.into());
        id
    }

    /// Add a cell covering the given codimension-1 faces. All facets must
    /// already exist and share one dimension.
    pub fn add_cell(&mut self, facets: &[CellId]) -> CellId {
        assert!(!facets.is_empty(), "a positive-dimensional cell needs facets");
        let fdim = self.cells[facets[0].index()].dim;
        assert!(
            facets.iter().all(|f| self.cells[f.index()].dim == fdim),
            "facets of one cell must share a dimension"
        );
        let mut vertices: Vec<CellId> = facets
            .iter()
            .flat_map(|f| self.cells[f.index()].vertices.iter().copied())
            .collect();
        vertices.sort();
        vertices.dedup();
        let id = CellId(self.cells.len() as u32);
        self.cells.push(Cell { dim: fdim + 1, facets: facets.to_vec(), vertices });
        id
    }

    /// Escape hatch: add a cell exactly as given, without any consistency
    /// derivation. Intended for tests of `validate`.
    pub fn add_cell_raw(&mut self, dim: usize, facets: Vec<CellId>, vertices: Vec<CellId>) -> CellId {
        let id = CellId(self.cells.len() as u32);
        self.cells.push(Cell { dim, facets, vertices });
        id
    }

    pub fn set_label(&mut self, id: CellId, label: impl Into<String>) {
        self.labels.insert(id, label.into());
    }

    pub fn set_key(&mut self, id: CellId, key: Vec<u32>) {
        self.keys.insert(id, key);
    }

    pub fn build(self) -> SimplicialPoset {
        SimplicialPoset::assemble(self.cells, self.labels, self.keys)
    }
}
