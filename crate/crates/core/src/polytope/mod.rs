//! Dual-description polytopes: vertices, irredundant facets, affine hull
//! equations and vertex–facet incidence, all exact.
//!
//! Both constructors funnel into [`hull_from_vertices`], so the stored form is
//! canonical: vertices sorted lexicographically, facets sorted by
//! `(normal, offset)` with primitive integer normals. Two polytopes are equal
//! as values iff they are the same point set.

mod cone;
mod dd;
mod ops;

pub use cone::{
    cone_contains, cone_interior_point, fan_refines, fans_equal, normal_cone, normal_fan, Cone,
    NormalFan,
};
pub use ops::{edges, hyperplane_section, intersect_halfspace, minimizers};

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactlinalg::{
    int_rank, lp_solve, normalize_primitive, nullspace, rref, LpProblem, QMatrix,
    QVector, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("polytope is empty")]
    EmptyPolytope,
    #[error("polyhedron is unbounded")]
    UnboundedPolyhedron,
    #[error("hyperplane does not meet the polytope")]
    EmptySection,
    #[error("cone is not full-dimensional")]
    NotFullDimensional,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("halfspace normal must be nonzero")]
    ZeroNormal,
}

/// `normal·x ≥ offset`, with a primitive integer normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub normal: QVector,
    pub offset: Rational,
}

impl Halfspace {
    /// Rescales `normal·x ≥ offset` so that the normal is primitive.
    pub fn new(normal: QVector, offset: Rational) -> Result<Self, PolytopeError> {
        let prim = normalize_primitive(&normal).map_err(|_| PolytopeError::ZeroNormal)?;
        let i = normal.leading_index().expect("nonzero");
        let factor = &prim[i] / &normal[i];
        Ok(Halfspace {
            normal: prim,
            offset: offset * factor,
        })
    }

    pub fn slack(&self, x: &QVector) -> Rational {
        self.normal.dot(x) - &self.offset
    }

    pub fn contains(&self, x: &QVector) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn is_tight(&self, x: &QVector) -> bool {
        self.slack(x).is_zero()
    }

    /// The opposite closed halfspace `normal·x ≤ offset`.
    pub fn flipped(&self) -> Halfspace {
        Halfspace {
            normal: -&self.normal,
            offset: -self.offset.clone(),
        }
    }
}

/// Affine equation `normal·x = offset`; primitive normal, leading entry positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    pub normal: QVector,
    pub offset: Rational,
}

impl Hyperplane {
    pub fn new(normal: QVector, offset: Rational) -> Result<Self, PolytopeError> {
        let h = Halfspace::new(normal, offset)?;
        let lead = h.normal.leading_index().expect("nonzero");
        Ok(if h.normal[lead].is_negative() {
            let f = h.flipped();
            Hyperplane {
                normal: f.normal,
                offset: f.offset,
            }
        } else {
            Hyperplane {
                normal: h.normal,
                offset: h.offset,
            }
        })
    }

    pub fn contains(&self, x: &QVector) -> bool {
        self.normal.dot(x) == self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPolytope {
    ambient_dim: usize,
    vertices: Vec<QVector>,
    facets: Vec<Halfspace>,
    equations: Vec<Hyperplane>,
    vertex_facets: Vec<Vec<usize>>,
    facet_vertices: Vec<Vec<usize>>,
}

impl ExactPolytope {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.ambient_dim - self.equations.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &QVector {
        &self.vertices[i]
    }

    /// Number of vertices, `f0`.
    pub fn f0(&self) -> usize {
        self.vertices.len()
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    /// Affine hull equations; empty for full-dimensional polytopes.
    pub fn equations(&self) -> &[Hyperplane] {
        &self.equations
    }

    pub fn incident(&self, vertex: usize, facet: usize) -> bool {
        self.vertex_facets[vertex].binary_search(&facet).is_ok()
    }

    /// Facets containing a vertex, sorted.
    pub fn vertex_facets(&self, vertex: usize) -> &[usize] {
        &self.vertex_facets[vertex]
    }

    /// Vertices on a facet, sorted.
    pub fn facet_vertices(&self, facet: usize) -> &[usize] {
        &self.facet_vertices[facet]
    }

    pub fn vertex_index(&self, x: &QVector) -> Option<usize> {
        self.vertices.binary_search(x).ok()
    }

    pub fn contains(&self, x: &QVector) -> bool {
        self.equations.iter().all(|e| e.contains(x)) && self.facets.iter().all(|h| h.contains(x))
    }

    /// All constraints as halfspaces, equations split into opposite pairs.
    pub fn halfspaces_with_equations(&self) -> Vec<Halfspace> {
        let mut hs = self.facets.clone();
        for e in &self.equations {
            let h = Halfspace {
                normal: e.normal.clone(),
                offset: e.offset.clone(),
            };
            hs.push(h.flipped());
            hs.push(h);
        }
        hs
    }

    pub fn translate(&self, t: &QVector) -> ExactPolytope {
        let pts: Vec<QVector> = self.vertices.iter().map(|v| v + t).collect();
        hull_from_vertices(&pts).expect("translate of a polytope")
    }

    /// `α·P` for `α ≥ 0`.
    pub fn scale(&self, alpha: &Rational) -> ExactPolytope {
        assert!(!alpha.is_negative(), "scale factor must be nonnegative");
        let pts: Vec<QVector> = self.vertices.iter().map(|v| v.scale(alpha)).collect();
        hull_from_vertices(&pts).expect("scaling of a polytope")
    }

    pub fn centroid(&self) -> QVector {
        let n = Rational::from_integer(BigInt::from(self.vertices.len()));
        let mut acc = QVector::zeros(self.ambient_dim);
        for v in &self.vertices {
            acc = &acc + v;
        }
        acc.scale(&n.recip())
    }
}

impl fmt::Display for ExactPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "polytope(dim {}/{}, {} vertices, {} facets)",
            self.intrinsic_dim(),
            self.ambient_dim,
            self.vertices.len(),
            self.facets.len()
        )
    }
}

fn check_dims(points: &[QVector], dim: usize) -> Result<(), PolytopeError> {
    match points.iter().find(|p| p.dim() != dim) {
        Some(p) => Err(PolytopeError::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        }),
        None => Ok(()),
    }
}

fn homogenize(p: &QVector) -> QVector {
    let mut coords = vec![Rational::one()];
    coords.extend(p.iter().cloned());
    QVector::new(coords)
}

/// Convex hull of a finite point set. Duplicates and non-extreme points are
/// dropped; lower-dimensional sets get facets within their affine hull plus
/// the hull equations.
pub fn hull_from_vertices(points: &[QVector]) -> Result<ExactPolytope, PolytopeError> {
    let Some(first) = points.first() else {
        return Err(PolytopeError::EmptyPolytope);
    };
    let d = first.dim();
    check_dims(points, d)?;
    let pts: Vec<QVector> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();

    let hom = QMatrix::new(pts.iter().map(homogenize).collect()).expect("rectangular");
    let (_, pivots) = rref(&hom);
    let k = pivots.len() - 1;

    let equations: Vec<Hyperplane> = nullspace(&hom)
        .into_iter()
        .map(|n| {
            let normal = QVector::new(n.as_slice()[1..].to_vec());
            Hyperplane::new(normal, -n[0].clone()).expect("affine equation has nonzero normal")
        })
        .collect();

    if k == 0 {
        return Ok(ExactPolytope {
            ambient_dim: d,
            vertices: pts,
            facets: Vec::new(),
            equations,
            vertex_facets: vec![Vec::new()],
            facet_vertices: Vec::new(),
        });
    }

    // Coordinates kept after projecting onto the affine hull.
    let coords: Vec<usize> = pivots[1..].iter().map(|&c| c - 1).collect();
    let rows: Vec<Vec<BigInt>> = pts
        .iter()
        .map(|p| {
            QVector::new(coords.iter().map(|&c| p[c].clone()).collect()).homogeneous_integers()
        })
        .collect();
    let dd = dd::extreme_rays(&rows, k + 1).expect("projected point set spans its space");

    let mut point_facets: Vec<Vec<usize>> = vec![Vec::new(); pts.len()];
    for (f, z) in dd.zeros.iter().enumerate() {
        for &i in z {
            point_facets[i as usize].push(f);
        }
    }
    let is_vertex: Vec<bool> = point_facets
        .iter()
        .map(|fs| {
            if fs.len() < k {
                return false;
            }
            let normals: Vec<Vec<BigInt>> = fs.iter().map(|&f| dd.rays[f].clone()).collect();
            int_rank(normals, k + 1) == k
        })
        .collect();

    let mut facets: Vec<(Halfspace, Vec<usize>)> = dd
        .rays
        .iter()
        .zip(&dd.zeros)
        .map(|(ray, z)| {
            let g = ray[1..].iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            let a: Vec<BigInt> = ray[1..].iter().map(|x| x / &g).collect();
            let mut normal = vec![Rational::zero(); d];
            for (&c, x) in coords.iter().zip(&a) {
                normal[c] = Rational::from_integer(x.clone());
            }
            let offset = Rational::new(-ray[0].clone(), g);
            let on: Vec<usize> = z.iter().map(|&i| i as usize).collect();
            (
                Halfspace {
                    normal: QVector::new(normal),
                    offset,
                },
                on,
            )
        })
        .collect();
    facets.sort_by(|a, b| a.0.cmp(&b.0));

    // Points are already sorted, so vertices keep lexicographic order.
    let mut new_index = vec![usize::MAX; pts.len()];
    let mut vertices = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        if is_vertex[i] {
            new_index[i] = vertices.len();
            vertices.push(p.clone());
        }
    }
    let mut vertex_facets = vec![Vec::new(); vertices.len()];
    let mut facet_vertices = Vec::with_capacity(facets.len());
    let mut halfspaces = Vec::with_capacity(facets.len());
    for (f, (h, on)) in facets.into_iter().enumerate() {
        let vs: Vec<usize> = on
            .iter()
            .filter(|&&i| is_vertex[i])
            .map(|&i| new_index[i])
            .collect();
        for &v in &vs {
            vertex_facets[v].push(f);
        }
        facet_vertices.push(vs);
        halfspaces.push(h);
    }

    Ok(ExactPolytope {
        ambient_dim: d,
        vertices,
        facets: halfspaces,
        equations,
        vertex_facets,
        facet_vertices,
    })
}

/// Vertex enumeration of `{x : h.normal·x ≥ h.offset for all h}`.
pub fn vertices_from_halfspaces(hs: &[Halfspace]) -> Result<ExactPolytope, PolytopeError> {
    let Some(first) = hs.first() else {
        return Err(PolytopeError::UnboundedPolyhedron);
    };
    let d = first.normal.dim();
    vertices_from_constraints(d, hs)
}

pub(crate) fn vertices_from_constraints(
    d: usize,
    hs: &[Halfspace],
) -> Result<ExactPolytope, PolytopeError> {
    if let Some(h) = hs.iter().find(|h| h.normal.dim() != d) {
        return Err(PolytopeError::DimensionMismatch {
            expected: d,
            found: h.normal.dim(),
        });
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(hs.len() + 1);
    let mut x0 = vec![BigInt::zero(); d + 1];
    x0[0] = BigInt::one();
    rows.push(x0);
    // Deduplicate after normalization; order follows the canonical halfspace order.
    let unique: BTreeSet<&Halfspace> = hs.iter().collect();
    for h in &unique {
        let mut coords = vec![-h.offset.clone()];
        coords.extend(h.normal.iter().cloned());
        let (_, ints) = QVector::new(coords).scaled_to_integers();
        rows.push(ints);
    }

    let dd = match dd::extreme_rays(&rows, d + 1) {
        Ok(dd) => dd,
        Err(_) => {
            // A lineality direction: either empty or unbounded.
            let mut lp = LpProblem::new(d);
            for h in &unique {
                lp = lp.ge(h.normal.clone(), h.offset.clone());
            }
            return Err(if lp_solve(&lp).is_feasible() {
                PolytopeError::UnboundedPolyhedron
            } else {
                PolytopeError::EmptyPolytope
            });
        }
    };
    let mut points = Vec::new();
    let mut recession = false;
    for ray in &dd.rays {
        if ray[0].is_positive() {
            let den = &ray[0];
            points.push(QVector::new(
                ray[1..]
                    .iter()
                    .map(|x| Rational::new(x.clone(), den.clone()))
                    .collect(),
            ));
        } else {
            recession = true;
        }
    }
    if points.is_empty() {
        return Err(PolytopeError::EmptyPolytope);
    }
    if recession {
        return Err(PolytopeError::UnboundedPolyhedron);
    }
    hull_from_vertices(&points)
}

/// Convex hull of the vertices of several polytopes.
pub fn hull_of_union(parts: &[&ExactPolytope]) -> Result<ExactPolytope, PolytopeError> {
    let pts: Vec<QVector> = parts.iter().flat_map(|p| p.vertices().iter().cloned()).collect();
    hull_from_vertices(&pts)
}
