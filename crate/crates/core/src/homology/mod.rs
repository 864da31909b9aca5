//! Integer simplicial homology of simplicial posets.
//!
//! Boundary matrices come straight from the poset: each cell's vertices are
//! canonically ordered by cell id, its facets are matched to omitted vertices,
//! and the facet omitting the i-th vertex receives sign `(-1)^i`. Ranks and
//! torsion coefficients of the boundary maps are read off Smith normal forms
//! computed in exact arbitrary-precision arithmetic.

mod snf;

pub use snf::{smith_normal_form, SmithNormalForm};

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poset::SimplicialPoset;

/// Sparse integer matrix in triplet form.
#[derive(Clone, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(u32, u32, i64)>,
}

impl IntMatrix {
    pub fn from_triplets(rows: usize, cols: usize, entries: Vec<(u32, u32, i64)>) -> Self {
        for &(r, c, _) in &entries {
            assert!((r as usize) < rows && (c as usize) < cols, "entry out of bounds");
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: Vec::new() }
    }

    pub fn from_dense(data: &[&[i64]]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let mut entries = Vec::new();
        for (r, row) in data.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    entries.push((r as u32, c as u32, v));
                }
            }
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(u32, u32, i64)] {
        &self.entries
    }

    fn columns(&self) -> Vec<Vec<(u32, i64)>> {
        let mut cols: Vec<Vec<(u32, i64)>> = vec![Vec::new(); self.cols];
        for &(r, c, v) in &self.entries {
            cols[c as usize].push((r, v));
        }
        cols
    }
}

/// Boundary matrices `∂_1, ..., ∂_d` of a simplicial poset.
pub struct ChainComplex {
    f: Vec<usize>,
    /// `boundaries[j-1]` is `∂_j`, with `f_{j-1}` rows and `f_j` columns.
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    pub fn dim(&self) -> usize {
        self.f.len() - 1
    }

    pub fn rank_of_chain_group(&self, j: usize) -> usize {
        self.f[j]
    }

    /// The boundary map `∂_j: C_j -> C_{j-1}`, for `1 <= j <= dim`.
    pub fn boundary(&self, j: usize) -> &IntMatrix {
        &self.boundaries[j - 1]
    }

    /// Exact check that `∂_{j-1} ∘ ∂_j = 0` for all `j`.
    pub fn verify_dd_zero(&self) -> bool {
        for j in 2..=self.dim() {
            let lower = self.boundary(j - 1).columns();
            let upper = self.boundary(j).columns();
            for col in &upper {
                let mut acc: std::collections::HashMap<u32, i64> = std::collections::HashMap::new();
                for &(mid, v) in col {
                    for &(row, w) in &lower[mid as usize] {
                        *acc.entry(row).or_insert(0) += v * w;
                    }
                }
                if acc.values().any(|&v| v != 0) {
                    return false;
                }
            }
        }
        true
    }
}

/// Boundary matrices of a validated simplicial poset, with signs from the
/// canonical (id-sorted) vertex order.
pub fn chain_complex(k: &SimplicialPoset) -> Result<ChainComplex> {
    let d = k.dim();
    let f: Vec<usize> = (0..=d).map(|j| k.cells_of_dim(j).len()).collect();
    let mut index = vec![std::collections::HashMap::new(); d + 1];
    for j in 0..=d {
        for (i, &c) in k.cells_of_dim(j).iter().enumerate() {
            index[j].insert(c, i as u32);
        }
    }

    let mut boundaries = Vec::with_capacity(d);
    for j in 1..=d {
        let mut entries = Vec::new();
        for (col, &cell) in k.cells_of_dim(j).iter().enumerate() {
            let verts = k.vertices_of(cell);
            let mut omitted_seen = 0u64;
            for &facet in k.facets_of(cell) {
                let fv = k.vertices_of(facet);
                let position = omitted_position(verts, fv)
                    .ok_or(Error::FacetVertexMismatch { cell })?;
                if omitted_seen & (1 << position) != 0 {
                    return Err(Error::FacetVertexMismatch { cell });
                }
                omitted_seen |= 1 << position;
                let sign = if position % 2 == 0 { 1 } else { -1 };
                entries.push((index[j - 1][&facet], col as u32, sign));
            }
        }
        boundaries.push(IntMatrix::from_triplets(f[j - 1], f[j], entries));
    }
    Ok(ChainComplex { f, boundaries })
}

/// Position of the unique vertex of `cell_verts` missing from `facet_verts`,
/// or `None` if the difference is not exactly one vertex. Both inputs sorted.
fn omitted_position(cell_verts: &[crate::poset::CellId], facet_verts: &[crate::poset::CellId]) -> Option<usize> {
    if cell_verts.len() != facet_verts.len() + 1 {
        return None;
    }
    let mut omitted = None;
    let mut fi = 0;
    for (ci, &v) in cell_verts.iter().enumerate() {
        if fi < facet_verts.len() && facet_verts[fi] == v {
            fi += 1;
        } else if omitted.is_none() {
            omitted = Some(ci);
        } else {
            return None;
        }
    }
    if fi == facet_verts.len() {
        omitted
    } else {
        None
    }
}

/// One homology group: free rank plus torsion coefficients in divisibility
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn new(betti: usize, torsion: &[u64]) -> Self {
        HomologyGroup { betti, torsion: torsion.iter().map(|&t| BigInt::from(t)).collect() }
    }

    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut terms: Vec<String> = Vec::new();
        match self.betti {
            0 => {}
            1 => terms.push("Z".to_string()),
            b => terms.push(format!("Z^{b}")),
        }
        for t in &self.torsion {
            terms.push(format!("Z/{t}"));
        }
        write!(f, "{}", terms.join(" + "))
    }
}

/// Homology groups `H_0, ..., H_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroups(pub Vec<HomologyGroup>);

impl HomologyGroups {
    pub fn group(&self, j: usize) -> &HomologyGroup {
        &self.0[j]
    }

    /// Alternating sum of betti numbers.
    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(j, g)| if j % 2 == 0 { g.betti as i64 } else { -(g.betti as i64) })
            .sum()
    }

    /// Integral homology of the (2n+1)-sphere.
    pub fn sphere(dim: usize) -> Self {
        let mut groups = vec![HomologyGroup::new(0, &[]); dim + 1];
        groups[0] = HomologyGroup::new(1, &[]);
        groups[dim] = HomologyGroup::new(1, &[]);
        HomologyGroups(groups)
    }

    /// Integral homology of `L(p, q_1, ..., q_n)`: `Z` in degrees 0 and 2n+1,
    /// `Z/p` in odd degrees below the top, `0` in positive even degrees.
    pub fn generalized_lens(p: u32, n: usize) -> Self {
        let dim = 2 * n + 1;
        let mut groups = vec![HomologyGroup::new(0, &[]); dim + 1];
        groups[0] = HomologyGroup::new(1, &[]);
        groups[dim] = HomologyGroup::new(1, &[]);
        for i in 1..=n {
            groups[2 * i - 1] = HomologyGroup::new(0, &[p as u64]);
        }
        HomologyGroups(groups)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.0
                .iter()
                .map(|g| {
                    serde_json::json!({
                        "betti": g.betti,
                        "torsion": g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for HomologyGroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, g) in self.0.iter().enumerate() {
            writeln!(f, "H_{j} = {g}")?;
        }
        Ok(())
    }
}

/// Integer homology of a validated simplicial poset.
pub fn homology(k: &SimplicialPoset) -> Result<HomologyGroups> {
    let cc = chain_complex(k)?;
    let d = cc.dim();
    let snfs: Vec<SmithNormalForm> = (1..=d).map(|j| smith_normal_form(cc.boundary(j))).collect();
    let rank = |j: usize| -> usize {
        if j == 0 || j > d {
            0
        } else {
            snfs[j - 1].rank
        }
    };
    let groups = (0..=d)
        .map(|j| {
            let betti = cc.rank_of_chain_group(j) - rank(j) - rank(j + 1);
            let torsion = if j < d { snfs[j].torsion.clone() } else { Vec::new() };
            HomologyGroup { betti, torsion }
        })
        .collect();
    Ok(HomologyGroups(groups))
}

/// Number of top simplices the derived subdivision would have; the cost driver
/// for [`homology_via_derived`].
pub fn derived_top_simplex_count(k: &SimplicialPoset) -> usize {
    k.maximal_cells()
        .iter()
        .map(|&c| (1..=k.dim_of(c) + 1).product::<usize>())
        .sum()
}

/// Default refusal threshold for derived-subdivision homology.
pub const DEFAULT_DERIVED_BUDGET: usize = 1_000_000;

/// Homology computed on the derived subdivision — an honest simplicial complex
/// with the same carrier — as an independent cross-check of [`homology`].
pub fn homology_via_derived(k: &SimplicialPoset, budget: usize) -> Result<HomologyGroups> {
    let needed = derived_top_simplex_count(k);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    homology(&k.derived_subdivision())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{build_rho, lens_quotient};
    use crate::builders::{build_sigma, LensParams};
    use crate::poset::PosetBuilder;

    fn single_edge() -> SimplicialPoset {
        let mut b = PosetBuilder::new();
        let u = b.add_vertex();
        let v = b.add_vertex();
        b.add_cell(&[u, v]);
        b.build()
    }

    fn bigon() -> SimplicialPoset {
        let mut b = PosetBuilder::new();
        let u = b.add_vertex();
        let v = b.add_vertex();
        b.add_cell(&[u, v]);
        b.add_cell(&[u, v]);
        b.build()
    }

    fn dense(m: &IntMatrix) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0i64; m.cols()]; m.rows()];
        for &(r, c, v) in m.entries() {
            out[r as usize][c as usize] += v;
        }
        out
    }

    #[test]
    fn edge_boundary_column() {
        let cc = chain_complex(&single_edge()).unwrap();
        assert_eq!(dense(cc.boundary(1)), vec![vec![-1], vec![1]]);
    }

    #[test]
    fn bigon_boundary_and_homology() {
        let k = bigon();
        let cc = chain_complex(&k).unwrap();
        assert_eq!(dense(cc.boundary(1)), vec![vec![-1, -1], vec![1, 1]]);
        let h = homology(&k).unwrap();
        assert_eq!(h.0, vec![HomologyGroup::new(1, &[]), HomologyGroup::new(1, &[])]);
    }

    #[test]
    fn bigon_homology_matches_derived() {
        let k = bigon();
        assert_eq!(homology(&k).unwrap(), homology_via_derived(&k, 1000).unwrap());
    }

    #[test]
    fn sphere_homology_of_sigma() {
        let params = LensParams::new(3, &[1]).unwrap();
        let sigma = build_sigma(&params);
        let h = homology(sigma.poset()).unwrap();
        assert_eq!(h, HomologyGroups::sphere(3));
    }

    #[test]
    fn rp3_homology_direct_and_derived() {
        let params = LensParams::new(2, &[1]).unwrap();
        let sigma = build_sigma(&params);
        let rho = build_rho(&sigma).unwrap();
        let q = lens_quotient(&sigma, &rho).unwrap();
        let h = homology(&q.poset).unwrap();
        assert_eq!(h, HomologyGroups::generalized_lens(2, 1));
        let via = homology_via_derived(&q.poset, DEFAULT_DERIVED_BUDGET).unwrap();
        assert_eq!(via, h);
    }

    #[test]
    fn five_dimensional_lens_homology() {
        let params = LensParams::new(3, &[1, 2]).unwrap();
        let sigma = build_sigma(&params);
        let rho = build_rho(&sigma).unwrap();
        let q = lens_quotient(&sigma, &rho).unwrap();
        let h = homology(&q.poset).unwrap();
        assert_eq!(h, HomologyGroups::generalized_lens(3, 2));
    }

    #[test]
    fn dd_zero_for_sigma_and_quotient() {
        let params = LensParams::new(3, &[2]).unwrap();
        let sigma = build_sigma(&params);
        assert!(chain_complex(sigma.poset()).unwrap().verify_dd_zero());
        let rho = build_rho(&sigma).unwrap();
        let q = lens_quotient(&sigma, &rho).unwrap();
        assert!(chain_complex(&q.poset).unwrap().verify_dd_zero());
    }

    #[test]
    fn torsion_p4_appears_in_exactly_one_boundary_map() {
        let params = LensParams::new(4, &[1]).unwrap();
        let sigma = build_sigma(&params);
        let rho = build_rho(&sigma).unwrap();
        let q = lens_quotient(&sigma, &rho).unwrap();
        let cc = chain_complex(&q.poset).unwrap();
        let with_torsion: Vec<usize> = (1..=cc.dim())
            .filter(|&j| !smith_normal_form(cc.boundary(j)).torsion.is_empty())
            .collect();
        assert_eq!(with_torsion.len(), 1);
        let snf = smith_normal_form(cc.boundary(with_torsion[0]));
        assert_eq!(snf.torsion, vec![BigInt::from(4)]);
    }

    #[test]
    fn euler_poincare_for_quotient() {
        let params = LensParams::new(5, &[3]).unwrap();
        let sigma = build_sigma(&params);
        let rho = build_rho(&sigma).unwrap();
        let q = lens_quotient(&sigma, &rho).unwrap();
        let h = homology(&q.poset).unwrap();
        assert_eq!(h.euler_characteristic(), q.poset.euler_characteristic());
    }

    #[test]
    fn derived_budget_is_enforced() {
        let params = LensParams::new(2, &[1]).unwrap();
        let sigma = build_sigma(&params);
        // Σ has 16 facets of dimension 3, so the subdivision has 16·24 = 384
        // top simplices.
        assert_eq!(derived_top_simplex_count(sigma.poset()), 384);
        assert!(matches!(
            homology_via_derived(sigma.poset(), 100),
            Err(Error::BudgetExceeded { needed: 384, budget: 100 })
        ));
    }

    #[test]
    fn display_formats() {
        assert_eq!(HomologyGroup::new(1, &[]).to_string(), "Z");
        assert_eq!(HomologyGroup::new(0, &[2]).to_string(), "Z/2");
        assert_eq!(HomologyGroup::new(2, &[3, 9]).to_string(), "Z^2 + Z/3 + Z/9");
        assert_eq!(HomologyGroup::new(0, &[]).to_string(), "0");
        let rendered = HomologyGroups::generalized_lens(2, 1).to_string();
        assert!(rendered.contains("H_1 = Z/2"));
    }
}
