//! Numeric realization of `Σ` in `C^{n+1}` and floating-point verification
//! that the piecewise-linear rotation of `|Σ|` agrees with the ambient sphere
//! rotation under radial projection.
//!
//! The vertex `w_{j,l}` sits at `z_j = e^{lπi/p}` with all other coordinates
//! zero. Points of `|Σ|` are convex combinations of facet vertices; the
//! piecewise-linear map applies the vertex rotation to each vertex and keeps
//! the coefficients. Radial projection onto the sphere then intertwines it
//! with the coordinatewise rotation `h`. The check is sampled: random facets,
//! random convex coefficients, fixed seed, so runs are reproducible.

use num_complex::Complex64;
use rand::distributions::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::PosetAutomorphism;
use crate::builders::{LensParams, Sigma, VertexLabel};
use crate::error::{Error, Result};
use crate::poset::CellId;

/// Seed used by the sampling verifiers unless the caller picks another.
pub const DEFAULT_GEOMETRY_SEED: u64 = 0x6c656e7367656d;

/// Tolerance of the commuting-square check: roughly 1e3 ulps of headroom over
/// composed double-precision rotations.
pub const COMMUTING_SQUARE_TOLERANCE: f64 = 1e-9;

/// A point of `C^{n+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbientPoint(pub Vec<Complex64>);

impl AmbientPoint {
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &AmbientPoint) -> f64 {
        assert_eq!(self.0.len(), other.0.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Coordinates of the vertex `w_{j,l}`: `z_j = e^{lπi/p}`, other coordinates 0.
pub fn vertex_coords(label: VertexLabel, params: &LensParams) -> AmbientPoint {
    let mut coords = vec![Complex64::new(0.0, 0.0); params.n() + 1];
    let angle = label.ell as f64 * std::f64::consts::PI / params.p() as f64;
    coords[label.j] = Complex64::from_polar(1.0, angle);
    AmbientPoint(coords)
}

/// The sphere rotation: coordinate `j` turns by `2π q_j / p` (with `q_0 = 1`).
/// Input must lie on the unit sphere.
pub fn h_map(z: &AmbientPoint, params: &LensParams) -> Result<AmbientPoint> {
    let norm = z.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitNorm(norm));
    }
    Ok(rotate(z, params))
}

fn rotate(z: &AmbientPoint, params: &LensParams) -> AmbientPoint {
    let p = params.p() as f64;
    AmbientPoint(
        z.0.iter()
            .enumerate()
            .map(|(j, zj)| {
                let angle = 2.0 * std::f64::consts::PI * params.q_ext(j) as f64 / p;
                zj * Complex64::from_polar(1.0, angle)
            })
            .collect(),
    )
}

/// Radial projection `w -> w / ‖w‖`.
pub fn phi(w: &AmbientPoint) -> Result<AmbientPoint> {
    let norm = w.norm();
    if norm <= 1e-9 {
        return Err(Error::NearZeroNorm(norm));
    }
    Ok(AmbientPoint(w.0.iter().map(|z| z / norm).collect()))
}

fn convex_checked(coeffs: &[f64], expected_len: usize) -> Result<()> {
    if coeffs.len() != expected_len {
        return Err(Error::BadCoefficients(format!(
            "got {} coefficients for a cell with {expected_len} vertices",
            coeffs.len()
        )));
    }
    if coeffs.iter().any(|&t| !(0.0..=1.0).contains(&t)) {
        return Err(Error::BadCoefficients("coefficients must lie in [0, 1]".to_string()));
    }
    let sum: f64 = coeffs.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::BadCoefficients(format!("coefficients sum to {sum}")));
    }
    Ok(())
}

/// The point `Σ t_i v_i` of a cell of `Σ`, coefficients in the canonical
/// (id-sorted) vertex order of the cell.
pub fn barycentric_point(sigma: &Sigma, cell: CellId, coeffs: &[f64]) -> Result<AmbientPoint> {
    let verts = sigma.poset().vertices_of(cell);
    convex_checked(coeffs, verts.len())?;
    let mut acc = vec![Complex64::new(0.0, 0.0); sigma.params().n() + 1];
    for (&v, &t) in verts.iter().zip(coeffs) {
        let label = sigma.vertex_label(v).expect("vertices of Σ carry labels");
        let coords = vertex_coords(label, sigma.params());
        for (a, z) in acc.iter_mut().zip(&coords.0) {
            *a += t * z;
        }
    }
    Ok(AmbientPoint(acc))
}

/// Image of a barycentric point under the piecewise-linear extension of the
/// rotation: the same coefficients on the rotated vertices.
pub fn pl_rho(
    sigma: &Sigma,
    rho: &PosetAutomorphism,
    cell: CellId,
    coeffs: &[f64],
) -> Result<AmbientPoint> {
    let verts = sigma.poset().vertices_of(cell);
    convex_checked(coeffs, verts.len())?;
    let mut acc = vec![Complex64::new(0.0, 0.0); sigma.params().n() + 1];
    for (&v, &t) in verts.iter().zip(coeffs) {
        let image = rho.image(v);
        let label = sigma.vertex_label(image).expect("vertices of Σ carry labels");
        let coords = vertex_coords(label, sigma.params());
        for (a, z) in acc.iter_mut().zip(&coords.0) {
            *a += t * z;
        }
    }
    Ok(AmbientPoint(acc))
}

/// Result of sampling the square `phi ∘ pl_rho = h ∘ phi` over random facet
/// points.
#[derive(Clone, Copy, Debug)]
pub struct CommutingSquareReport {
    pub samples: usize,
    pub max_deviation: f64,
}

impl CommutingSquareReport {
    pub fn passes(&self) -> bool {
        self.max_deviation <= COMMUTING_SQUARE_TOLERANCE
    }
}

/// Sample random points in random facets of `Σ` and measure the worst
/// disagreement between projecting-then-rotating and rotating-then-projecting.
pub fn verify_commuting_square(
    sigma: &Sigma,
    rho: &PosetAutomorphism,
    samples: usize,
    seed: u64,
) -> Result<CommutingSquareReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let facets = sigma.poset().top_cells();
    let facet_picker = Uniform::from(0..facets.len());
    let mut max_deviation = 0.0f64;
    for _ in 0..samples {
        let facet = facets[facet_picker.sample(&mut rng)];
        let coeffs = random_convex(&mut rng, sigma.poset().vertices_of(facet).len());
        let w = barycentric_point(sigma, facet, &coeffs)?;
        let lhs = phi(&pl_rho(sigma, rho, facet, &coeffs)?)?;
        let rhs = rotate(&phi(&w)?, sigma.params());
        max_deviation = max_deviation.max(lhs.distance(&rhs));
    }
    Ok(CommutingSquareReport { samples, max_deviation })
}

/// Uniform point of the standard (m-1)-simplex.
fn random_convex(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    let mut coeffs: Vec<f64> = (0..m).map(|_| -rng.gen_range(1e-12..1.0f64).ln()).collect();
    let total: f64 = coeffs.iter().sum();
    for c in &mut coeffs {
        *c /= total;
    }
    coeffs
}

/// Random point of the unit sphere in `C^{n+1}`.
pub fn random_unit_point(n: usize, rng: &mut impl Rng) -> AmbientPoint {
    loop {
        let coords: Vec<Complex64> = (0..=n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let point = AmbientPoint(coords);
        let norm = point.norm();
        if norm > 1e-3 {
            return AmbientPoint(point.0.iter().map(|z| z / norm).collect());
        }
    }
}
