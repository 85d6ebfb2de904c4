use fixedbitset::FixedBitSet;

use super::{vertices_from_constraints, ExactPolytope, Halfspace, PolytopeError};
use crate::exactlinalg::{QVector, Rational};

/// Vertex pairs `(u, v)` with `u < v` spanning an edge, sorted.
///
/// `{u, v}` is an edge iff the vertices lying on every facet common to both
/// are exactly `u` and `v`. This needs no genericity and works for the
/// non-simple polytopes built by the generators.
pub fn edges(p: &ExactPolytope) -> Vec<(usize, usize)> {
    let n = p.f0();
    match p.intrinsic_dim() {
        0 => return Vec::new(),
        1 => return vec![(0, 1)],
        _ => {}
    }
    let need = p.intrinsic_dim() - 1;
    let facet_sets: Vec<FixedBitSet> = (0..p.facets().len())
        .map(|f| {
            let mut b = FixedBitSet::with_capacity(n);
            for &v in p.facet_vertices(f) {
                b.insert(v);
            }
            b
        })
        .collect();

    let mut out = Vec::new();
    let mut counts = vec![0usize; n];
    let mut touched = Vec::new();
    for u in 0..n {
        for &f in p.vertex_facets(u) {
            for &v in p.facet_vertices(f) {
                if v > u {
                    if counts[v] == 0 {
                        touched.push(v);
                    }
                    counts[v] += 1;
                }
            }
        }
        touched.sort_unstable();
        for &v in &touched {
            if counts[v] < need {
                continue;
            }
            let mut common = p
                .vertex_facets(u)
                .iter()
                .filter(|f| p.vertex_facets(v).binary_search(f).is_ok());
            let first = *common.next().expect("shared facets");
            let mut acc = facet_sets[first].clone();
            for &f in common {
                acc.intersect_with(&facet_sets[f]);
                if acc.count_ones(..) == 2 {
                    break;
                }
            }
            if acc.count_ones(..) == 2 {
                out.push((u, v));
            }
        }
        for &v in &touched {
            counts[v] = 0;
        }
        touched.clear();
    }
    out
}

/// Indices of the vertices minimizing `x ↦ c·x`.
pub fn minimizers(p: &ExactPolytope, c: &QVector) -> Vec<usize> {
    let mut best: Option<Rational> = None;
    let mut out = Vec::new();
    for (i, v) in p.vertices().iter().enumerate() {
        let val = c.dot(v);
        match &best {
            Some(b) if val > *b => {}
            Some(b) if val == *b => out.push(i),
            _ => {
                best = Some(val);
                out.clear();
                out.push(i);
            }
        }
    }
    out
}

/// `p ∩ h`.
pub fn intersect_halfspace(p: &ExactPolytope, h: &Halfspace) -> Result<ExactPolytope, PolytopeError> {
    if h.normal.dim() != p.ambient_dim() {
        return Err(PolytopeError::DimensionMismatch {
            expected: p.ambient_dim(),
            found: h.normal.dim(),
        });
    }
    let mut hs = p.halfspaces_with_equations();
    hs.push(h.clone());
    vertices_from_constraints(p.ambient_dim(), &hs)
}

/// `p ∩ {x : normal·x = offset}`, as a polytope inside that hyperplane.
pub fn hyperplane_section(
    p: &ExactPolytope,
    normal: &QVector,
    offset: &Rational,
) -> Result<ExactPolytope, PolytopeError> {
    if normal.dim() != p.ambient_dim() {
        return Err(PolytopeError::DimensionMismatch {
            expected: p.ambient_dim(),
            found: normal.dim(),
        });
    }
    let h = Halfspace::new(normal.clone(), offset.clone())?;
    let mut hs = p.halfspaces_with_equations();
    hs.push(h.flipped());
    hs.push(h);
    vertices_from_constraints(p.ambient_dim(), &hs).map_err(|e| match e {
        PolytopeError::EmptyPolytope => PolytopeError::EmptySection,
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::{frac, lp_solve, rat, LpOutcome, LpProblem};
    use crate::polytope::hull_from_vertices;
    use crate::polytope::tests::cube;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn square_pyramid() -> ExactPolytope {
        hull_from_vertices(&[
            QVector::from_ints(&[0, 0, 0]),
            QVector::from_ints(&[2, 0, 0]),
            QVector::from_ints(&[0, 2, 0]),
            QVector::from_ints(&[2, 2, 0]),
            QVector::from_ints(&[1, 1, 2]),
        ])
        .unwrap()
    }

    /// LP definition of an edge: some c is minimized over the vertex set
    /// exactly on {u, v}. Variables (c, t): c·u = c·v, c·w ≥ c·u + t, t ≤ 1, max t.
    fn is_edge_by_lp(p: &ExactPolytope, u: usize, v: usize) -> bool {
        let d = p.ambient_dim();
        let lift = |x: &QVector, tcoef: i64| {
            let mut c = x.clone();
            c.push(rat(tcoef));
            c
        };
        let mut lp = LpProblem::new(d + 1)
            .eq(lift(&(p.vertex(u) - p.vertex(v)), 0), rat(0))
            .ge(lift(&QVector::zeros(d), -1), rat(-1));
        for w in 0..p.f0() {
            if w != u && w != v {
                lp = lp.ge(lift(&(p.vertex(w) - p.vertex(u)), -1), rat(0));
            }
        }
        let lp = lp.maximize(lift(&QVector::zeros(d), 1));
        match lp_solve(&lp) {
            LpOutcome::Optimal { value, .. } => value > rat(0),
            other => panic!("bounded LP expected, got {other:?}"),
        }
    }

    #[test]
    fn edge_counts() {
        assert_eq!(edges(&cube(3)).len(), 12);
        assert_eq!(edges(&square_pyramid()).len(), 8);
        // Fig. 1 style quadrilateral: triangle plus a segment parallel to its base
        let quad = hull_from_vertices(&[
            QVector::from_ints(&[0, 0]),
            QVector::from_ints(&[2, 0]),
            QVector::from_ints(&[1, 2]),
            QVector::from_ints(&[1, 0]),
            QVector::from_ints(&[3, 0]),
            QVector::from_ints(&[2, 2]),
        ])
        .unwrap();
        assert_eq!(quad.f0(), 4);
        assert_eq!(edges(&quad).len(), 4);
    }

    #[test]
    fn cut_and_section() {
        let sq = cube(2);
        let cut = Halfspace::new(QVector::from_ints(&[-1, 0]), frac(-1, 2)).unwrap();
        let r = intersect_halfspace(&sq, &cut).unwrap();
        assert_eq!(r.f0(), 4);

        let c = cube(3);
        let r = intersect_halfspace(&c, &cut_3d()).unwrap();
        assert_eq!(r.f0(), 8);
        let mut hs = c.facets().to_vec();
        hs.push(cut_3d());
        assert_eq!(crate::polytope::vertices_from_halfspaces(&hs).unwrap(), r);

        let simplex = hull_from_vertices(&[
            QVector::from_ints(&[0, 0]),
            QVector::from_ints(&[1, 0]),
            QVector::from_ints(&[0, 1]),
        ])
        .unwrap();
        let touch = Halfspace::new(QVector::from_ints(&[-1, -1]), rat(0)).unwrap();
        let r = intersect_halfspace(&simplex, &touch).unwrap();
        assert_eq!(r.vertices(), &[QVector::from_ints(&[0, 0])]);
        let miss = Halfspace::new(QVector::from_ints(&[-1, -1]), rat(1)).unwrap();
        assert_eq!(
            intersect_halfspace(&simplex, &miss),
            Err(PolytopeError::EmptyPolytope)
        );

        let mid = hyperplane_section(&c, &QVector::from_ints(&[0, 0, 1]), &frac(1, 2)).unwrap();
        assert_eq!((mid.f0(), mid.intrinsic_dim()), (4, 2));
        let seg = hull_from_vertices(&[QVector::from_ints(&[0, 0]), QVector::from_ints(&[2, 2])])
            .unwrap();
        let pt = hyperplane_section(&seg, &QVector::from_ints(&[1, 0]), &rat(1)).unwrap();
        assert_eq!(pt.vertices(), &[QVector::from_ints(&[1, 1])]);
        assert_eq!(
            hyperplane_section(&seg, &QVector::from_ints(&[1, 0]), &rat(5)),
            Err(PolytopeError::EmptySection)
        );
    }

    fn cut_3d() -> Halfspace {
        Halfspace::new(QVector::from_ints(&[-1, 0, 0]), frac(-1, 2)).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn incidence_edges_match_lp_edges(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(4..=10);
            let pts: Vec<QVector> = (0..n)
                .map(|_| QVector::from_ints(&[rng.gen_range(-5..=5), rng.gen_range(-5..=5), rng.gen_range(-5..=5)]))
                .collect();
            let p = hull_from_vertices(&pts).unwrap();
            prop_assume!(p.is_full_dimensional());
            let es = edges(&p);
            for u in 0..p.f0() {
                for v in u + 1..p.f0() {
                    prop_assert_eq!(es.contains(&(u, v)), is_edge_by_lp(&p, u, v));
                }
            }
        }
    }
}
