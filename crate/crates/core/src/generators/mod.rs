//! Polytope families: cubes, simplices, rational polygons, products and
//! pyramids, the fixed-diameter constructions, the three-dimensional
//! families `Ξ(k,l)`, `Θ(k,l)`, `Ξ̃(k,l,m)` with the polygon `Π`, and seeded
//! random polytopes. Constructions with nontrivial combinatorics are gated
//! by a [`Census`] of expected face counts.

mod xi;

pub use xi::{pi_polygon, theta, xi, xi_tilde, PiParams, XiParams};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactlinalg::{QVector, Rational};
use crate::polytope::{hull_from_vertices, ExactPolytope};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("census mismatch: {0}")]
    CensusMismatch(Census),
    #[error("apex lies in the affine hull of the base")]
    ApexInAffineHull,
    #[error("bulge vertices are not in strictly convex position")]
    NonConvexBulge,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Expected and observed combinatorial counts for a construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Census {
    pub expected: BTreeMap<String, usize>,
    pub observed: BTreeMap<String, usize>,
}

impl Census {
    pub fn record(&mut self, key: &str, expected: usize, observed: usize) {
        self.expected.insert(key.to_string(), expected);
        self.observed.insert(key.to_string(), observed);
    }

    pub fn passes(&self) -> bool {
        self.expected == self.observed
    }

    /// `(key, expected, observed)` for every mismatching entry.
    pub fn diff(&self) -> Vec<(String, usize, usize)> {
        self.expected
            .iter()
            .filter_map(|(k, &e)| {
                let o = self.observed.get(k).copied().unwrap_or(0);
                (e != o).then(|| (k.clone(), e, o))
            })
            .collect()
    }

    pub(crate) fn into_result(self) -> Result<Census, GeneratorError> {
        if self.passes() {
            Ok(self)
        } else {
            Err(GeneratorError::CensusMismatch(self))
        }
    }
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let diff = self.diff();
        if diff.is_empty() {
            return write!(f, "all {} counts match", self.expected.len());
        }
        let parts: Vec<String> = diff
            .iter()
            .map(|(k, e, o)| format!("{k}: expected {e}, observed {o}"))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Unit cube `[0,1]^d`.
pub fn cube(d: usize) -> ExactPolytope {
    let pts: Vec<QVector> = (0..1u64 << d)
        .map(|m| QVector::from_ints(&(0..d).map(|i| ((m >> i) & 1) as i64).collect::<Vec<_>>()))
        .collect();
    hull_from_vertices(&pts).expect("cube")
}

/// Standard simplex `conv{0, e_1, …, e_d}`.
pub fn simplex(d: usize) -> ExactPolytope {
    let mut pts = vec![QVector::zeros(d)];
    pts.extend((0..d).map(|i| QVector::unit(d, i)));
    hull_from_vertices(&pts).expect("simplex")
}

/// `conv{0, v}`.
pub fn segment(v: &QVector) -> ExactPolytope {
    hull_from_vertices(&[QVector::zeros(v.dim()), v.clone()]).expect("segment")
}

pub fn point(x: &QVector) -> ExactPolytope {
    hull_from_vertices(std::slice::from_ref(x)).expect("point")
}

/// Best rational approximation of `x ≥ 0` with denominator at most `max_den`.
fn approximate(x: f64, max_den: i64) -> (i64, i64) {
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    loop {
        let a = r.floor();
        let ai = a as i64;
        let (p2, q2) = (ai * p1 + p0, ai * q1 + q0);
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a;
        if frac < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    (p1, q1)
}

fn circle_point(t: &Rational) -> QVector {
    let one = Rational::one();
    let t2 = t * t;
    let den = &one + &t2;
    QVector::new(vec![(&one - &t2) / &den, (t + t) / &den])
}

/// `n` rational points on the unit circle near the angles `π(2i+1)/n`,
/// counterclockwise, via `t ↦ ((1−t²)/(1+t²), 2t/(1+t²))` with `t` a
/// bounded-denominator approximation of `tan(θ/2)`.
///
/// The vertex set is mirror-symmetric in the x-axis: `t` and `−t` are used
/// in pairs, and the angle `π` (odd `n`) maps to `(−1, 0)` exactly.
pub fn rational_polygon(n: usize) -> ExactPolytope {
    assert!(n >= 3, "a polygon needs at least 3 vertices");
    let mut pts = Vec::with_capacity(n);
    for i in 0..n {
        let num = 2 * i as i64 + 1;
        let den = n as i64;
        // angle π·num/den reduced to (−π, π]
        let (num, sign) = if num > den { (2 * den - num, -1) } else { (num, 1) };
        if num == den {
            pts.push(QVector::from_ints(&[-1, 0]));
            continue;
        }
        let half = std::f64::consts::PI * num as f64 / (2.0 * den as f64);
        let (p, q) = approximate(half.tan(), 256);
        pts.push(circle_point(&Rational::new(BigInt::from(sign * p), BigInt::from(q))));
    }
    let poly = hull_from_vertices(&pts).expect("polygon");
    assert_eq!(poly.f0(), n, "circle points are in convex position");
    poly
}

/// Cartesian product.
pub fn product(p: &ExactPolytope, q: &ExactPolytope) -> ExactPolytope {
    let pts: Vec<QVector> = p
        .vertices()
        .iter()
        .flat_map(|a| q.vertices().iter().map(move |b| a.concat(b)))
        .collect();
    hull_from_vertices(&pts).expect("product")
}

/// `P × [0,1]`.
pub fn prism(p: &ExactPolytope) -> ExactPolytope {
    product(p, &cube(1))
}

/// Appends `extra` zero coordinates to every vertex.
pub fn embed(p: &ExactPolytope, extra: usize) -> ExactPolytope {
    let pad = QVector::zeros(extra);
    let pts: Vec<QVector> = p.vertices().iter().map(|v| v.concat(&pad)).collect();
    hull_from_vertices(&pts).expect("embedding")
}

/// `conv(P ∪ {apex})`, with the apex outside the affine hull of `P`.
pub fn pyramid(p: &ExactPolytope, apex: &QVector) -> Result<ExactPolytope, GeneratorError> {
    if apex.dim() != p.ambient_dim() {
        return Err(GeneratorError::InvalidParams("apex dimension".into()));
    }
    if p.equations().iter().all(|e| e.contains(apex)) {
        return Err(GeneratorError::ApexInAffineHull);
    }
    let mut pts = p.vertices().to_vec();
    pts.push(apex.clone());
    Ok(hull_from_vertices(&pts).expect("pyramid"))
}

/// A `d`-polytope of diameter `k`: a polygon times a cube when `k ≥ d−1`,
/// otherwise a simplex times a cube.
pub fn prop21(d: usize, k: usize) -> Result<ExactPolytope, GeneratorError> {
    if d == 0 || k == 0 {
        return Err(GeneratorError::InvalidParams("need d ≥ 1 and k ≥ 1".into()));
    }
    if d == 1 {
        return if k == 1 {
            Ok(cube(1))
        } else {
            Err(GeneratorError::InvalidParams(
                "a segment has diameter 1; d = 1 admits only k = 1".into(),
            ))
        };
    }
    let (base, cube_dim) = if k + 1 >= d {
        (rational_polygon(2 * (k + 2) + 1 - 2 * d), d - 2)
    } else {
        (simplex(d - k + 1), k - 1)
    };
    Ok(if cube_dim == 0 {
        base
    } else {
        product(&base, &cube(cube_dim))
    })
}

/// Two `d`-dimensional pyramids of diameter 2 over `B = prop21(d−1, k−2)`,
/// with apices on opposite sides of `B` above its centroid; their sum has
/// diameter `k`.
pub fn prop22(d: usize, k: usize) -> Result<(ExactPolytope, ExactPolytope), GeneratorError> {
    if d < 3 || k < 4 {
        return Err(GeneratorError::InvalidParams("need d ≥ 3 and k ≥ 4".into()));
    }
    let b = embed(&prop21(d - 1, k - 2)?, 1);
    let c = b.centroid();
    let lift = |h: i64| {
        let mut a = c.clone();
        let mut coords = a.clone().into_inner();
        coords[d - 1] = Rational::from_integer(BigInt::from(h));
        a = QVector::new(coords);
        a
    };
    Ok((pyramid(&b, &lift(1))?, pyramid(&b, &lift(-1))?))
}

/// Hull of `n` integer points uniform in `[−bound, bound]^d`, reseeding with
/// `seed + 1, seed + 2, …` until the hull is full-dimensional.
pub fn random_polytope(d: usize, n: usize, bound: i64, seed: u64) -> ExactPolytope {
    assert!(n > d, "need at least d+1 points");
    assert!(bound >= 1, "coordinate bound must be positive");
    let mut s = seed;
    loop {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let pts: Vec<QVector> = (0..n)
            .map(|_| QVector::from_ints(&(0..d).map(|_| rng.gen_range(-bound..=bound)).collect::<Vec<_>>()))
            .collect();
        let p = hull_from_vertices(&pts).expect("nonempty");
        if p.is_full_dimensional() {
            return p;
        }
        s = s.wrapping_add(1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::rat;
    use crate::graph::{build_graph, diameter};
    use crate::minkowski::minkowski_hull;

    fn diam(p: &ExactPolytope) -> usize {
        diameter(&build_graph(p)).value
    }

    #[test]
    fn standard_shapes() {
        let c = cube(3);
        assert_eq!((c.f0(), c.facets().len()), (8, 6));
        let s = simplex(4);
        assert_eq!(s.f0(), 5);
        assert_eq!(diam(&s), 1);
        let sigma = segment(&QVector::from_ints(&[0, 0, 1]));
        assert_eq!(sigma.vertices(), &[QVector::from_ints(&[0, 0, 0]), QVector::from_ints(&[0, 0, 1])]);
    }

    #[test]
    fn polygons() {
        assert_eq!(diam(&rational_polygon(4)), 2);
        assert_eq!(diam(&rational_polygon(9)), 4);
        for n in 3..=40 {
            let p = rational_polygon(n);
            assert_eq!(p.f0(), n);
            for v in p.vertices() {
                assert_eq!(v.norm_sq(), rat(1));
                let mirror = QVector::new(vec![v[0].clone(), -v[1].clone()]);
                assert!(p.vertex_index(&mirror).is_some());
            }
        }
    }

    #[test]
    fn products_and_pyramids() {
        let p = product(&rational_polygon(9), &cube(1));
        assert_eq!((p.f0(), diam(&p)), (18, 5));
        let sq = embed(&cube(2), 1);
        let pyr = pyramid(&sq, &QVector::from_fracs(&[(1, 2), (1, 2), (1, 1)])).unwrap();
        assert_eq!((pyr.f0(), diam(&pyr)), (5, 2));
        assert_eq!(
            pyramid(&sq, &QVector::from_fracs(&[(1, 2), (1, 2), (0, 1)])),
            Err(GeneratorError::ApexInAffineHull)
        );
        assert_eq!(prism(&cube(1)), cube(2));
    }

    #[test]
    fn prop21_examples() {
        let p = prop21(3, 5).unwrap();
        assert_eq!((p.f0(), diam(&p)), (18, 5));
        let p = prop21(4, 2).unwrap();
        assert_eq!((p.f0(), diam(&p)), (8, 2));
        let p = prop21(2, 3).unwrap();
        assert_eq!((p.f0(), diam(&p)), (7, 3));
        assert!(prop21(1, 2).is_err());
    }

    #[test]
    fn prop21_grid() {
        for d in 1..=5 {
            for k in 1..=6 {
                if d == 1 && k > 1 {
                    continue;
                }
                let p = prop21(d, k).unwrap();
                assert_eq!(p.intrinsic_dim(), d, "d={d} k={k}");
                assert_eq!(diam(&p), k, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn prop22_examples() {
        for (d, k) in [(3, 4), (3, 6), (4, 5)] {
            let (p, q) = prop22(d, k).unwrap();
            assert_eq!(diam(&p), 2);
            assert_eq!(diam(&q), 2);
            let s = minkowski_hull(&p, &q).unwrap();
            assert_eq!(diam(&s), k, "d={d} k={k}");
        }
        let (p, _) = prop22(3, 4).unwrap();
        assert_eq!(p.f0(), 6);
    }

    #[test]
    fn random_is_deterministic() {
        let a = random_polytope(3, 8, 10, 1);
        let b = random_polytope(3, 8, 10, 1);
        assert_eq!(a, b);
        assert!(a.f0() <= 8);
        let s = random_polytope(3, 4, 10, 5);
        assert_eq!(s.f0(), 4);
    }

    #[test]
    fn census_reports_diff() {
        let mut c = Census::default();
        c.record("vertices", 80, 80);
        assert!(c.passes());
        c.record("facets", 62, 60);
        assert!(!c.passes());
        assert_eq!(c.diff(), vec![("facets".to_string(), 62, 60)]);
        assert!(c.to_string().contains("expected 62"));
    }
}
