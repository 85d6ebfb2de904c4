//! Minkowski sums with exact vertex decompositions, erosion, summand tests
//! and zonotope detection.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exactlinalg::{normalize_primitive, QVector, Rational};
use crate::graph::{build_graph, PolytopeGraph};
use crate::polytope::{
    cone_interior_point, edges, hull_from_vertices, minimizers, normal_cone,
    vertices_from_constraints, ExactPolytope, Halfspace, PolytopeError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinkowskiError {
    #[error("sum vertex {0} has no unique decomposition")]
    DecompositionFailure(usize),
    #[error("erosion is empty")]
    EmptyErosion,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// `P + Q` with, for every vertex `w` of the sum, the unique pair of vertex
/// indices `(u, v)` with `w = u + v`.
#[derive(Debug)]
pub struct SumResult {
    pub sum: ExactPolytope,
    pub decomposition: Vec<(usize, usize)>,
    graph: OnceLock<PolytopeGraph>,
}

impl SumResult {
    /// Graph of the sum, built on first use.
    pub fn graph(&self) -> &PolytopeGraph {
        self.graph.get_or_init(|| build_graph(&self.sum))
    }

    /// Sum vertices with first part `u`.
    pub fn members_over(&self, u: usize) -> Vec<usize> {
        (0..self.decomposition.len())
            .filter(|&w| self.decomposition[w].0 == u)
            .collect()
    }
}

fn check_dims(p: &ExactPolytope, q: &ExactPolytope) -> Result<(), MinkowskiError> {
    if p.ambient_dim() != q.ambient_dim() {
        return Err(MinkowskiError::DimensionMismatch {
            expected: p.ambient_dim(),
            found: q.ambient_dim(),
        });
    }
    Ok(())
}

/// Pairwise vertex sums, each point tagged with the first pair producing it.
fn candidates(p: &ExactPolytope, q: &ExactPolytope) -> BTreeMap<QVector, (usize, usize)> {
    let mut out = BTreeMap::new();
    for (i, a) in p.vertices().iter().enumerate() {
        for (j, b) in q.vertices().iter().enumerate() {
            out.entry(a + b).or_insert((i, j));
        }
    }
    out
}

/// Hull of `P + Q` without the decomposition map.
pub fn minkowski_hull(p: &ExactPolytope, q: &ExactPolytope) -> Result<ExactPolytope, MinkowskiError> {
    check_dims(p, q)?;
    let pts: Vec<QVector> = candidates(p, q).into_keys().collect();
    Ok(hull_from_vertices(&pts)?)
}

/// `u` is the unique minimizer of `c` iff every neighbor is strictly worse.
fn locally_unique(p: &ExactPolytope, g: &PolytopeGraph, u: usize, c: &QVector) -> bool {
    let base = c.dot(p.vertex(u));
    g.neighbors(u).iter().all(|&w| c.dot(p.vertex(w)) > base)
}

fn unique_minimizer(p: &ExactPolytope, g: &PolytopeGraph, hint: usize, c: &QVector) -> Option<usize> {
    if locally_unique(p, g, hint, c) {
        return Some(hint);
    }
    match minimizers(p, c).as_slice() {
        [u] => Some(*u),
        _ => None,
    }
}

/// Minkowski sum with decomposition: for each sum vertex `w`, an interior
/// normal `c` of its cone is minimized uniquely at some `u` in `P` and `v`
/// in `Q`, and `u + v = w` is asserted exactly.
pub fn minkowski_sum(p: &ExactPolytope, q: &ExactPolytope) -> Result<SumResult, MinkowskiError> {
    check_dims(p, q)?;
    let cand = candidates(p, q);
    let pts: Vec<QVector> = cand.keys().cloned().collect();
    let sum = hull_from_vertices(&pts)?;
    let gp = build_graph(p);
    let gq = build_graph(q);

    let decomposition = (0..sum.f0())
        .into_par_iter()
        .map(|w| {
            let (hu, hv) = cand[sum.vertex(w)];
            let c = cone_interior_point(&normal_cone(&sum, w))?;
            let u = unique_minimizer(p, &gp, hu, &c).ok_or(MinkowskiError::DecompositionFailure(w))?;
            let v = unique_minimizer(q, &gq, hv, &c).ok_or(MinkowskiError::DecompositionFailure(w))?;
            if &(p.vertex(u) + q.vertex(v)) != sum.vertex(w) {
                return Err(MinkowskiError::DecompositionFailure(w));
            }
            Ok((u, v))
        })
        .collect::<Result<Vec<_>, MinkowskiError>>()?;

    Ok(SumResult {
        sum,
        decomposition,
        graph: OnceLock::new(),
    })
}

/// Injection from the vertices of `P` into the vertices of `P + Q`, with
/// `phi[u]` decomposing as `(u, v)` for some `v`. Indices refer to the
/// canonical sum, i.e. `minkowski_sum(p, q).sum`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiMap {
    pub images: Vec<usize>,
}

/// For each `u`, take an interior normal `c` of `N_P(u)` and minimize it over
/// `Q`. Ties on a face of `Q` are broken by the symbolic perturbation
/// `c + ε e_1 + ε² e_2 + …`, which for small `ε > 0` stays inside `N_P(u)` and
/// selects the lexicographically least vertex of the tied face.
pub fn phi_injection(p: &ExactPolytope, q: &ExactPolytope) -> Result<PhiMap, MinkowskiError> {
    let sum = minkowski_hull(p, q)?;
    let mut images = Vec::with_capacity(p.f0());
    for u in 0..p.f0() {
        let c = cone_interior_point(&normal_cone(p, u))?;
        // vertices are sorted, so the first tied index is the lexicographic minimum
        let v = minimizers(q, &c)[0];
        let w = sum
            .vertex_index(&(p.vertex(u) + q.vertex(v)))
            .ok_or(MinkowskiError::DecompositionFailure(u))?;
        images.push(w);
    }
    let mut seen = images.clone();
    seen.sort_unstable();
    seen.dedup();
    assert_eq!(seen.len(), images.len(), "phi must be injective");
    Ok(PhiMap { images })
}

/// `{x : x + Q ⊆ P}`.
pub fn erosion(p: &ExactPolytope, q: &ExactPolytope) -> Result<ExactPolytope, MinkowskiError> {
    check_dims(p, q)?;
    let support_min = |a: &QVector| {
        q.vertices()
            .iter()
            .map(|s| a.dot(s))
            .min()
            .expect("nonempty polytope")
    };
    let mut hs: Vec<Halfspace> = p
        .facets()
        .iter()
        .map(|f| Halfspace {
            normal: f.normal.clone(),
            offset: &f.offset - support_min(&f.normal),
        })
        .collect();
    for e in p.equations() {
        let lo = support_min(&e.normal);
        if q.vertices().iter().any(|s| e.normal.dot(s) != lo) {
            return Err(MinkowskiError::EmptyErosion);
        }
        let h = Halfspace {
            normal: e.normal.clone(),
            offset: &e.offset - lo,
        };
        hs.push(h.flipped());
        hs.push(h);
    }
    vertices_from_constraints(p.ambient_dim(), &hs).map_err(|e| match e {
        PolytopeError::EmptyPolytope => MinkowskiError::EmptyErosion,
        other => other.into(),
    })
}

/// Whether `P = R + Q` for some polytope `R`.
pub fn is_summand(p: &ExactPolytope, q: &ExactPolytope) -> bool {
    match erosion(p, q) {
        Ok(r) => minkowski_hull(&r, q).is_ok_and(|s| s.vertices() == p.vertices()),
        Err(_) => false,
    }
}

/// Whether `P` has a summand homothetic to `Q`, decided by comparing vertex
/// counts of `P` and `P + Q`.
pub fn has_homothetic_summand(p: &ExactPolytope, q: &ExactPolytope) -> bool {
    minkowski_hull(p, q).is_ok_and(|s| s.f0() == p.f0())
}

/// Bracket on the largest `α` with `αQ` a summand of `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaleResult {
    pub alpha_lo: Rational,
    pub alpha_hi: Rational,
    pub certified: bool,
}

/// Doubling then dyadic bisection on `α ↦ is_summand(P, αQ)`.
pub fn max_summand_scale(p: &ExactPolytope, q: &ExactPolytope, tolerance: &Rational) -> ScaleResult {
    assert!(tolerance.is_positive(), "tolerance must be positive");
    let mut lo = Rational::zero();
    let mut hi = Rational::one();
    if q.f0() == 1 {
        // every multiple of a point is a summand
        return ScaleResult {
            alpha_lo: lo,
            alpha_hi: hi,
            certified: false,
        };
    }
    let two = Rational::from_integer(2.into());
    while is_summand(p, &q.scale(&hi)) {
        lo = hi.clone();
        hi = &hi * &two;
    }
    while &hi - &lo > *tolerance {
        let mid = (&lo + &hi) / &two;
        if is_summand(p, &q.scale(&mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ScaleResult {
        alpha_lo: lo,
        alpha_hi: hi,
        certified: true,
    }
}

/// Edges sharing a primitive direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClass {
    /// Primitive, first nonzero entry positive.
    pub direction: QVector,
    pub edges: Vec<(usize, usize)>,
    pub min_length_sq: Rational,
    /// Shortest edge vector, a positive multiple of `direction`.
    pub shortest: QVector,
}

pub fn edge_direction_classes(p: &ExactPolytope) -> Vec<EdgeClass> {
    let mut classes: BTreeMap<QVector, EdgeClass> = BTreeMap::new();
    for (u, v) in edges(p) {
        let mut e = p.vertex(v) - p.vertex(u);
        let dir = normalize_primitive(&e).expect("distinct vertices").canonical_sign();
        if e.dot(&dir).is_negative() {
            e = -&e;
        }
        let len = e.norm_sq();
        let class = classes.entry(dir.clone()).or_insert_with(|| EdgeClass {
            direction: dir,
            edges: Vec::new(),
            min_length_sq: len.clone(),
            shortest: e.clone(),
        });
        class.edges.push((u, v));
        if len < class.min_length_sq {
            class.min_length_sq = len;
            class.shortest = e;
        }
    }
    classes.into_values().collect()
}

fn segment(e: &QVector) -> ExactPolytope {
    hull_from_vertices(&[QVector::zeros(e.dim()), e.clone()]).expect("segment")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZonotopeResult {
    pub is_zonotope: bool,
    /// `(direction, scale)` pairs peeled so far; the segments
    /// `[0, scale·direction]` sum to a translate of `P` when `is_zonotope`.
    pub generators: Vec<(QVector, Rational)>,
}

/// Peels segments off `P`, lexicographically smallest edge direction first,
/// using the shortest edge of that direction, until a point remains.
pub fn is_zonotope(p: &ExactPolytope) -> ZonotopeResult {
    let mut cur = p.clone();
    let mut generators = Vec::new();
    let cap = edges(p).len() + 1;
    for _ in 0..cap {
        if cur.f0() == 1 {
            return ZonotopeResult {
                is_zonotope: true,
                generators,
            };
        }
        let class = edge_direction_classes(&cur).into_iter().next().expect("an edge");
        let s = segment(&class.shortest);
        if !is_summand(&cur, &s) {
            break;
        }
        let lead = class.direction.leading_index().unwrap();
        generators.push((class.direction.clone(), &class.shortest[lead] / &class.direction[lead]));
        cur = erosion(&cur, &s).expect("summand erosion is nonempty");
    }
    ZonotopeResult {
        is_zonotope: false,
        generators,
    }
}

/// For each edge direction class, whether `P` and `P + e` have the same
/// number of vertices for the class's shortest edge `e`.
pub fn edge_summand_diagnostic(p: &ExactPolytope) -> Vec<(QVector, bool)> {
    edge_direction_classes(p)
        .into_iter()
        .map(|c| {
            let ok = has_homothetic_summand(p, &segment(&c.shortest));
            (c.direction, ok)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::{frac, rat};
    use crate::polytope::{fan_refines, fans_equal};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn q(xs: &[i64]) -> QVector {
        QVector::from_ints(xs)
    }

    fn hull(pts: &[&[i64]]) -> ExactPolytope {
        hull_from_vertices(&pts.iter().map(|c| q(c)).collect::<Vec<_>>()).unwrap()
    }

    fn triangle() -> ExactPolytope {
        hull(&[&[0, 0], &[2, 0], &[1, 2]])
    }

    fn cube(d: usize) -> ExactPolytope {
        let pts: Vec<QVector> = (0..1u32 << d)
            .map(|m| q(&(0..d).map(|i| ((m >> i) & 1) as i64).collect::<Vec<_>>()))
            .collect();
        hull_from_vertices(&pts).unwrap()
    }

    #[test]
    fn sum_examples() {
        let seg = hull(&[&[0, 0], &[1, 0]]);
        let s = minkowski_sum(&triangle(), &seg).unwrap();
        assert_eq!(s.sum.f0(), 4);

        let t = triangle();
        let s = minkowski_sum(&t, &t).unwrap();
        assert_eq!(s.sum.f0(), 3);
        for (w, &(u, v)) in s.decomposition.iter().enumerate() {
            assert_eq!(u, v);
            assert_eq!(s.sum.vertex(w), &t.vertex(u).scale(&rat(2)));
        }

        let sq = hull(&[&[-1, -1], &[1, -1], &[-1, 1], &[1, 1]]);
        let diamond = hull(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]);
        let s = minkowski_sum(&sq, &diamond).unwrap();
        assert_eq!(s.sum.f0(), 8);
    }

    #[test]
    fn phi_examples() {
        let t = triangle();
        let seg = hull(&[&[0, 0], &[1, 0]]);
        let phi = phi_injection(&t, &seg).unwrap();
        assert_eq!(phi.images.len(), 3);
        let s = minkowski_sum(&t, &seg).unwrap();
        for (u, &w) in phi.images.iter().enumerate() {
            assert_eq!(s.decomposition[w].0, u);
        }

        let pt = hull(&[&[3, -1]]);
        let s = minkowski_hull(&t, &pt).unwrap();
        let phi = phi_injection(&t, &pt).unwrap();
        for (u, &w) in phi.images.iter().enumerate() {
            assert_eq!(s.vertex(w), &(t.vertex(u) + &q(&[3, -1])));
        }

        let phi = phi_injection(&t, &t).unwrap();
        assert_eq!(phi.images, vec![0, 1, 2]);
    }

    #[test]
    fn erosion_examples() {
        let sq2 = hull(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]);
        let seg = hull(&[&[0, 0], &[1, 0]]);
        assert_eq!(erosion(&sq2, &seg).unwrap(), hull(&[&[0, 0], &[1, 0], &[0, 2], &[1, 2]]));
        assert_eq!(erosion(&sq2, &sq2).unwrap(), hull(&[&[0, 0]]));
        let t = triangle();
        assert_eq!(erosion(&t, &t).unwrap(), hull(&[&[0, 0]]));
        let wide = hull(&[&[0, 0], &[2, 0]]);
        assert_eq!(erosion(&cube(2), &wide), Err(MinkowskiError::EmptyErosion));
        // segment inside a plane minus a transverse segment
        let flat = hull(&[&[0, 0, 0], &[1, 0, 0]]);
        assert_eq!(erosion(&flat, &hull(&[&[0, 0, 0], &[0, 1, 0]])), Err(MinkowskiError::EmptyErosion));
    }

    #[test]
    fn summand_examples() {
        let seg_x = hull(&[&[0, 0], &[1, 0]]);
        assert!(is_summand(&cube(2), &seg_x));
        let generic = hull(&[&[0, 0], &[1, 3]]);
        assert!(!is_summand(&triangle(), &generic));
        assert_eq!(minkowski_hull(&triangle(), &generic).unwrap().f0(), 5);
        let t = triangle();
        assert!(is_summand(&t.scale(&rat(2)), &t));
        assert!(has_homothetic_summand(&cube(2), &seg_x));
        assert!(!has_homothetic_summand(&triangle(), &generic));
        assert!(has_homothetic_summand(&t, &t));
        assert!(is_summand(&t, &hull(&[&[5, 5]])));
    }

    #[test]
    fn scale_examples() {
        let sq2 = hull(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]);
        let seg_x = hull(&[&[0, 0], &[1, 0]]);
        let tol = frac(1, 8);
        let r = max_summand_scale(&sq2, &seg_x, &tol);
        assert!(r.certified);
        assert_eq!(r.alpha_lo, rat(2));
        assert!(&r.alpha_hi - &r.alpha_lo <= tol);

        let generic = hull(&[&[0, 0], &[1, 3]]);
        let r = max_summand_scale(&triangle(), &generic, &tol);
        assert_eq!(r.alpha_lo, rat(0));
        assert!(r.alpha_hi <= tol);

        let t = triangle();
        let r = max_summand_scale(&t.scale(&rat(3)), &t, &tol);
        assert!(r.alpha_lo <= rat(3) && rat(3) <= r.alpha_hi);
        assert_eq!(r.alpha_lo, rat(3));
    }

    #[test]
    fn edge_classes() {
        let c = edge_direction_classes(&cube(3));
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|k| k.edges.len() == 4));
        let hex = hull(&[&[2, 0], &[1, 2], &[-1, 2], &[-2, 0], &[-1, -2], &[1, -2]]);
        let c = edge_direction_classes(&hex);
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|k| k.edges.len() == 2));
        let pyr = hull(&[&[0, 0, 0], &[2, 0, 0], &[0, 2, 0], &[2, 2, 0], &[1, 1, 2]]);
        let c = edge_direction_classes(&pyr);
        assert_eq!(c.len(), 6);
        assert_eq!(c.iter().map(|k| k.edges.len()).sum::<usize>(), 8);
    }

    #[test]
    fn zonotope_examples() {
        for d in 1..=3 {
            let z = is_zonotope(&cube(d));
            assert!(z.is_zonotope);
            assert_eq!(z.generators.len(), d);
        }
        let segs = [q(&[1, 0, 2]), q(&[0, 3, 1]), q(&[2, -1, 1])];
        let mut z = hull(&[&[0, 0, 0]]);
        for s in &segs {
            z = minkowski_hull(&z, &segment(s)).unwrap();
        }
        let r = is_zonotope(&z);
        assert!(r.is_zonotope);
        assert_eq!(r.generators.len(), 3);
        let simplex = hull(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(!is_zonotope(&simplex).is_zonotope);
        assert!(edge_summand_diagnostic(&cube(3)).iter().all(|(_, ok)| *ok));
        assert!(edge_summand_diagnostic(&simplex).iter().all(|(_, ok)| !*ok));
    }

    fn random_polytope(rng: &mut rand_chacha::ChaCha8Rng, d: usize, n: usize) -> ExactPolytope {
        loop {
            let pts: Vec<QVector> = (0..n)
                .map(|_| q(&(0..d).map(|_| rng.gen_range(-4..=4)).collect::<Vec<_>>()))
                .collect();
            let p = hull_from_vertices(&pts).unwrap();
            if p.is_full_dimensional() {
                return p;
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn sum_properties(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let d = rng.gen_range(2..=3);
            let (np, nq) = (rng.gen_range(d + 1..=7), rng.gen_range(d + 1..=6));
            let p = random_polytope(&mut rng, d, np);
            let qq = random_polytope(&mut rng, d, nq);
            let s = minkowski_sum(&p, &qq).unwrap();
            prop_assert!(s.sum.f0() <= p.f0() * qq.f0());
            for _ in 0..20 {
                let c = q(&(0..d).map(|_| rng.gen_range(-9..=9)).collect::<Vec<_>>());
                let m = |x: &ExactPolytope| x.vertices().iter().map(|v| c.dot(v)).min().unwrap();
                prop_assert_eq!(m(&s.sum), m(&p) + m(&qq));
            }
            let gp = build_graph(&p);
            let gq = build_graph(&qq);
            for (a, b) in s.graph().edges() {
                let (u1, v1) = s.decomposition[a];
                let (u2, v2) = s.decomposition[b];
                prop_assert!(u1 == u2 || gp.has_edge(u1, u2));
                prop_assert!(v1 == v2 || gq.has_edge(v1, v2));
            }
            prop_assert!(fan_refines(&s.sum, &p));
            prop_assert!(fan_refines(&s.sum, &qq));
            if s.sum.f0() == p.f0() {
                prop_assert!(fans_equal(&p, &s.sum));
            }
            if is_summand(&p, &qq) {
                prop_assert!(has_homothetic_summand(&p, &qq));
            }
        }

        #[test]
        fn constructed_summands_are_detected(seed in any::<u64>(), a in 1i64..4, b in 1i64..3) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let r = random_polytope(&mut rng, 3, 6);
            let qq = random_polytope(&mut rng, 3, 5);
            let alpha = frac(a, b);
            let p = minkowski_hull(&r, &qq.scale(&alpha)).unwrap();
            prop_assert!(is_summand(&p, &qq.scale(&alpha)));
            prop_assert!(has_homothetic_summand(&p, &qq));
        }

        #[test]
        fn zonotope_test_is_affine_invariant(seed in any::<u64>(), a in 1i64..4) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = if seed % 2 == 0 {
                random_polytope(&mut rng, 3, 6)
            } else {
                let mut z = hull(&[&[0, 0, 0]]);
                for _ in 0..rng.gen_range(1..=4) {
                    let s = q(&[rng.gen_range(-3..=3), rng.gen_range(-3..=3), rng.gen_range(1..=3)]);
                    z = minkowski_hull(&z, &segment(&s)).unwrap();
                }
                z
            };
            let base = is_zonotope(&p);
            let moved = is_zonotope(&p.translate(&q(&[1, -2, 5])).scale(&rat(a)));
            prop_assert_eq!(base.is_zonotope, moved.is_zonotope);
            if base.is_zonotope {
                let scaled: Vec<(QVector, Rational)> = base
                    .generators
                    .iter()
                    .map(|(d, s)| (d.clone(), s * rat(a)))
                    .collect();
                prop_assert_eq!(scaled, moved.generators);
            }
        }
    }
}
