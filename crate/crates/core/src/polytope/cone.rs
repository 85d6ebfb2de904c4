use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{dd, minimizers, ExactPolytope, PolytopeError};
use crate::exactlinalg::{int_dot, lp_solve, normalize_primitive, rank, LpProblem, QMatrix, QVector, Rational};

/// Nonnegative hull of a finite set of primitive generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub generators: Vec<QVector>,
    pub ambient_dim: usize,
}

impl Cone {
    /// Generators are made primitive; zero vectors are dropped, duplicates merged.
    pub fn new(ambient_dim: usize, generators: impl IntoIterator<Item = QVector>) -> Cone {
        let mut gens: Vec<QVector> = generators
            .into_iter()
            .filter_map(|g| normalize_primitive(&g).ok())
            .collect();
        gens.sort();
        gens.dedup();
        Cone {
            generators: gens,
            ambient_dim,
        }
    }

    pub fn contains(&self, v: &QVector) -> bool {
        cone_contains(self, v)
    }

    pub fn rank(&self) -> usize {
        if self.generators.is_empty() {
            return 0;
        }
        rank(&QMatrix::new(self.generators.clone()).expect("equal dimensions"))
    }
}

/// Maximal normal cones of a polytope, indexed by vertex.
#[derive(Clone, Debug)]
pub struct NormalFan {
    pub cones: Vec<Cone>,
}

impl NormalFan {
    /// Vertex indices whose cone contains `c`.
    pub fn cones_containing(&self, c: &QVector) -> Vec<usize> {
        (0..self.cones.len())
            .filter(|&i| self.cones[i].contains(c))
            .collect()
    }
}

/// Normal cone at vertex `v` under the minimization convention: `c` lies in
/// it iff `x ↦ c·x` is minimized over `p` at a face containing `v`.
///
/// For lower-dimensional `p` both signs of each affine-hull normal are added,
/// so the cone contains the orthogonal complement of the hull.
pub fn normal_cone(p: &ExactPolytope, v: usize) -> Cone {
    let mut gens: Vec<QVector> = p
        .vertex_facets(v)
        .iter()
        .map(|&f| p.facets()[f].normal.clone())
        .collect();
    for e in p.equations() {
        gens.push(e.normal.clone());
        gens.push(-&e.normal);
    }
    Cone::new(p.ambient_dim(), gens)
}

pub fn normal_fan(p: &ExactPolytope) -> NormalFan {
    NormalFan {
        cones: (0..p.f0()).map(|v| normal_cone(p, v)).collect(),
    }
}

/// Exact LP feasibility of `λ ≥ 0, Σ λ_i g_i = v`.
pub fn cone_contains(c: &Cone, v: &QVector) -> bool {
    if v.is_zero() {
        return true;
    }
    if c.generators.is_empty() {
        return false;
    }
    let n = c.generators.len();
    let mut lp = LpProblem::new(n);
    for i in 0..n {
        lp = lp.ge(QVector::unit(n, i), Rational::zero());
    }
    for j in 0..c.ambient_dim {
        let row = QVector::new(c.generators.iter().map(|g| g[j].clone()).collect());
        lp = lp.eq(row, v[j].clone());
    }
    lp_solve(&lp).is_feasible()
}

/// Sum of the generators, certified to lie strictly inside the cone.
///
/// The cone may contain a linear subspace (normal cones of lower-dimensional
/// polytopes do); only full dimension is required.
pub fn cone_interior_point(c: &Cone) -> Result<QVector, PolytopeError> {
    if c.rank() < c.ambient_dim {
        return Err(PolytopeError::NotFullDimensional);
    }
    let mut x = QVector::zeros(c.ambient_dim);
    for g in &c.generators {
        x = &x + g;
    }
    // Facet normals of the cone are the extreme rays of its dual.
    let rows: Vec<Vec<BigInt>> = c.generators.iter().map(|g| g.scaled_to_integers().1).collect();
    let dual = dd::extreme_rays(&rows, c.ambient_dim).expect("generators span the space");
    let (_, xi) = x.scaled_to_integers();
    let strict = dual
        .rays
        .iter()
        .all(|y| y.iter().all(Zero::is_zero) || int_dot(y, &xi).is_positive());
    assert!(strict, "generator sum must be interior");
    Ok(x)
}

/// Whether `c` lies in the normal cone of `q` at `v`, i.e. `v` minimizes `c`.
fn in_normal_cone(q: &ExactPolytope, v: usize, c: &QVector) -> bool {
    let base = c.dot(q.vertex(v));
    q.vertices().iter().all(|w| c.dot(w) >= base)
}

fn cone_inside(p: &ExactPolytope, u: usize, q: &ExactPolytope, v: usize) -> bool {
    normal_cone(p, u)
        .generators
        .iter()
        .all(|g| in_normal_cone(q, v, g))
}

fn fan_maps_into(p: &ExactPolytope, q: &ExactPolytope) -> bool {
    (0..p.f0()).all(|u| {
        let Ok(c) = cone_interior_point(&normal_cone(p, u)) else {
            return false;
        };
        match minimizers(q, &c).as_slice() {
            [v] => cone_inside(p, u, q, *v) && cone_inside(q, *v, p, u),
            _ => false,
        }
    })
}

/// Whether `p` and `q` have the same normal fan: every maximal cone of one
/// equals a maximal cone of the other.
pub fn fans_equal(p: &ExactPolytope, q: &ExactPolytope) -> bool {
    p.ambient_dim() == q.ambient_dim()
        && p.f0() == q.f0()
        && fan_maps_into(p, q)
        && fan_maps_into(q, p)
}

/// Whether every maximal cone of `p`'s fan lies inside a maximal cone of `q`'s.
pub fn fan_refines(p: &ExactPolytope, q: &ExactPolytope) -> bool {
    if p.ambient_dim() != q.ambient_dim() {
        return false;
    }
    (0..p.f0()).all(|u| {
        let Ok(c) = cone_interior_point(&normal_cone(p, u)) else {
            return false;
        };
        // A cone containing N_p(u) contains c, so its vertex minimizes c.
        minimizers(q, &c)
            .into_iter()
            .any(|v| cone_inside(p, u, q, v))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::rat;
    use crate::polytope::hull_from_vertices;
    use crate::polytope::tests::cube;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn q(xs: &[i64]) -> QVector {
        QVector::from_ints(xs)
    }

    fn triangle() -> ExactPolytope {
        hull_from_vertices(&[q(&[0, 0]), q(&[1, 0]), q(&[0, 1])]).unwrap()
    }

    #[test]
    fn normal_cone_examples() {
        let sq = cube(2);
        let v = sq.vertex_index(&q(&[0, 0])).unwrap();
        assert_eq!(normal_cone(&sq, v).generators, vec![q(&[0, 1]), q(&[1, 0])]);

        let seg = hull_from_vertices(&[q(&[0]), q(&[1])]).unwrap();
        let v = seg.vertex_index(&q(&[1])).unwrap();
        assert_eq!(normal_cone(&seg, v).generators, vec![q(&[-1])]);

        let t = triangle();
        let v = t.vertex_index(&q(&[1, 0])).unwrap();
        let c = normal_cone(&t, v);
        assert_eq!(c.generators, vec![q(&[-1, -1]), q(&[0, 1])]);
        // random positive combinations are minimized only at (1, 0)
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = rng.gen_range(1..20);
            let b = rng.gen_range(1..20);
            let dir = &c.generators[0].scale(&rat(a)) + &c.generators[1].scale(&rat(b));
            assert_eq!(minimizers(&t, &dir), vec![v]);
        }
    }

    #[test]
    fn cone_membership() {
        let c = Cone::new(2, [q(&[1, 0]), q(&[0, 1])]);
        assert!(cone_contains(&c, &q(&[1, 1])));
        assert!(!cone_contains(&c, &q(&[-1, 0])));
        assert!(cone_contains(&c, &q(&[1, 0])));
    }

    #[test]
    fn interior_points() {
        let c = Cone::new(2, [q(&[1, 0]), q(&[0, 1])]);
        assert_eq!(cone_interior_point(&c).unwrap(), q(&[1, 1]));
        let ray = Cone::new(2, [q(&[1, 0])]);
        assert_eq!(cone_interior_point(&ray), Err(PolytopeError::NotFullDimensional));
        let cb = cube(3);
        let v = cb.vertex_index(&q(&[0, 0, 0])).unwrap();
        assert_eq!(cone_interior_point(&normal_cone(&cb, v)).unwrap(), q(&[1, 1, 1]));
    }

    #[test]
    fn fan_comparisons() {
        let sq = cube(2);
        let rect = hull_from_vertices(&[q(&[0, 0]), q(&[2, 0]), q(&[0, 1]), q(&[2, 1])]).unwrap();
        assert!(fans_equal(&sq, &sq.scale(&rat(2))));
        assert!(fans_equal(&sq, &rect));
        assert!(!fans_equal(&sq, &triangle()));
        assert!(fan_refines(&sq, &sq));
        assert!(!fan_refines(&sq, &triangle()));
        let sum_pts: Vec<QVector> = sq
            .vertices()
            .iter()
            .flat_map(|a| triangle().vertices().iter().map(move |b| a + b).collect::<Vec<_>>())
            .collect();
        let sum = hull_from_vertices(&sum_pts).unwrap();
        assert!(fan_refines(&sum, &sq));
        assert!(fan_refines(&sum, &triangle()));
    }

    #[test]
    fn fan_covers_random_directions() {
        let cb = cube(3);
        let fan = normal_fan(&cb);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let c = q(&[rng.gen_range(-9..=9), rng.gen_range(-9..=9), rng.gen_range(-9..=9)]);
            assert!(!fan.cones_containing(&c).is_empty());
        }
    }

    fn random_polytope(seed: u64) -> ExactPolytope {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        loop {
            let n = rng.gen_range(4..=9);
            let pts: Vec<QVector> = (0..n)
                .map(|_| q(&[rng.gen_range(-5..=5), rng.gen_range(-5..=5), rng.gen_range(-5..=5)]))
                .collect();
            let p = hull_from_vertices(&pts).unwrap();
            if p.is_full_dimensional() {
                return p;
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn interior_point_has_unique_minimizer(seed in any::<u64>()) {
            let p = random_polytope(seed);
            for v in 0..p.f0() {
                let c = cone_interior_point(&normal_cone(&p, v)).unwrap();
                prop_assert_eq!(minimizers(&p, &c), vec![v]);
            }
        }

        #[test]
        fn fans_invariant_under_translation_and_scaling(seed in any::<u64>(), a in 1i64..5, b in 1i64..4) {
            let p = random_polytope(seed);
            let t = q(&[a, -b, 3]);
            prop_assert!(fans_equal(&p, &p.translate(&t)));
            prop_assert!(fans_equal(&p, &p.scale(&crate::exactlinalg::frac(a, b))));
        }

        #[test]
        fn cone_membership_matches_argmin(seed in any::<u64>(), c in proptest::collection::vec(-4i64..=4, 3)) {
            let p = random_polytope(seed);
            let c = q(&c);
            for v in 0..p.f0() {
                prop_assert_eq!(cone_contains(&normal_cone(&p, v), &c), in_normal_cone(&p, v, &c));
            }
        }
    }
}
