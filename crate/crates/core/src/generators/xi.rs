//! The families `Ξ(k,l)`, `Θ(k,l)` and `Ξ̃(k,l,m)` and the polygon `Π`.
//!
//! Coordinates: the base polygon `A` has `2k` blue vertices `b_0..b_{2k−1}`
//! on the unit circle at height 0, with edge `i` from `b_i` to `b_{i+1}`.
//! Edge 0 crosses the positive x-axis and edge `k` the negative x-axis, so
//! the cutting plane `M` is `y = 0` and `Ξ` is mirror-symmetric in it. Even
//! edges carry red chains above the base plane, odd edges green chains below.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{rational_polygon, Census, GeneratorError};
use crate::exactlinalg::{frac, rat, QVector, Rational};
use crate::polytope::{
    hull_from_vertices, hyperplane_section, vertices_from_halfspaces, ExactPolytope, Halfspace,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiParams {
    pub k: usize,
    pub l: usize,
    /// Chain lift: the `j`-th chain point sits at height `±eps·j(l−j)`.
    pub eps: Rational,
    /// Height of the two horizontal facets.
    pub h: Rational,
    /// Inward reach of the quadrilateral planes at height `±h`, as a
    /// fraction of the apothem of `A`.
    pub s: Rational,
}

fn ceil_recip(x: f64) -> Rational {
    frac(1, (1.0 / x).ceil() as i64)
}

impl XiParams {
    /// Defaults with `h = 1`. With `φ = π/k`, `s` is a simple rational near
    /// the middle of `(1 − cos φ, 1/(1 + cos φ))`: below that range the
    /// transition vertices fall outside `A`, above it the top edges of the
    /// outermost quadrilaterals vanish. `eps` is the reciprocal of an integer,
    /// at most `2/l²` and small enough that the end quadrilaterals of a chain
    /// do not cut off the neighbouring blue vertex.
    pub fn new(k: usize, l: usize) -> XiParams {
        let phi = std::f64::consts::PI / k.max(3) as f64;
        let cos = phi.cos();
        let s_mid = ((1.0 - cos) + 1.0 / (1.0 + cos)) / 2.0;
        let (sn, sd) = super::approximate(s_mid, 100);
        let side = 2.0 * (phi / 2.0).sin();
        let apothem = (phi / 2.0).cos();
        let lf = l.max(2) as f64;
        let eps = 0.5 * side * phi.sin() / (s_mid * apothem * lf * (lf - 1.0) * cos);
        XiParams {
            k,
            l,
            eps: ceil_recip(eps.min(2.0 / (lf * lf))),
            h: rat(1),
            s: frac(sn, sd),
        }
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        let bad = |m: &str| Err(GeneratorError::InvalidParams(m.to_string()));
        if self.k < 3 {
            return bad("k must be at least 3");
        }
        if self.l < 4 || self.l % 2 == 1 {
            return bad("l must be even and at least 4");
        }
        if !self.eps.is_positive() || !self.h.is_positive() {
            return bad("eps and h must be positive");
        }
        let l2 = Rational::from_integer(BigInt::from(self.l * self.l));
        if &self.eps * l2 / rat(4) >= self.h {
            return bad("chains must stay below the horizontal facets (eps·l²/4 < h)");
        }
        if !self.s.is_positive() || self.s >= rat(1) {
            return bad("s must lie strictly between 0 and 1");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiParams {
    pub m: usize,
    pub eps_bulge: Rational,
    /// Direction the bulge vertices are pushed in, orthogonal to the
    /// vertical axis.
    pub direction: QVector,
}

impl PiParams {
    /// `eps_bulge = 1/100`, bulging towards `+y`, away from the apex of `Θ`.
    pub fn new(m: usize) -> PiParams {
        PiParams {
            m,
            eps_bulge: frac(1, 100),
            direction: QVector::from_ints(&[0, 1, 0]),
        }
    }

    /// Offset of the `j`-th vertex of `Π` from the segment `e`.
    fn bulge(&self, j: usize) -> QVector {
        let m = self.m as i64;
        let j = j as i64;
        let mut v = self.direction.scale(&(&self.eps_bulge * rat(j * (m - j))));
        v = &v + &QVector::new(vec![Rational::zero(), Rational::zero(), frac(j, m)]);
        v
    }
}

/// The polygon `Π`: the vertical unit edge `e` from the origin to `(0,0,1)`
/// plus `m−1` bulge vertices at heights `j/m`, pushed off `e` by
/// `eps_bulge·j(m−j)` along the direction.
pub fn pi_polygon(params: &PiParams) -> Result<ExactPolytope, GeneratorError> {
    if params.m < 2 {
        return Err(GeneratorError::InvalidParams("m must be at least 2".into()));
    }
    if params.direction.dim() != 3 || !params.direction[2].is_zero() || params.direction.is_zero() {
        return Err(GeneratorError::InvalidParams("direction must be horizontal and nonzero".into()));
    }
    if !params.eps_bulge.is_positive() {
        return Err(GeneratorError::NonConvexBulge);
    }
    let mut pts = vec![QVector::zeros(3), QVector::from_ints(&[0, 0, 1])];
    pts.extend((1..params.m).map(|j| params.bulge(j)));
    let pi = hull_from_vertices(&pts).expect("points");
    if pi.f0() != params.m + 1 {
        return Err(GeneratorError::NonConvexBulge);
    }
    Ok(pi)
}

fn cross(a: &QVector, b: &QVector) -> QVector {
    QVector::new(vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ])
}

/// Halfspace bounded by the plane through `a, b, c` containing the origin.
fn plane_through(a: &QVector, b: &QVector, c: &QVector) -> Halfspace {
    let mut n = cross(&(b - a), &(c - a));
    let mut off = n.dot(a);
    assert!(!off.is_zero(), "facet plane must avoid the origin");
    if off.is_positive() {
        n = -&n;
        off = -off;
    }
    Halfspace::new(n, off).expect("nondegenerate plane")
}

fn xyz(x: &Rational, y: &Rational, z: Rational) -> QVector {
    QVector::new(vec![x.clone(), y.clone(), z])
}

/// Explicit geometry shared by the three families.
struct Frame<'a> {
    p: &'a XiParams,
    base: Vec<QVector>,
}

impl<'a> Frame<'a> {
    fn new(p: &'a XiParams) -> Frame<'a> {
        let poly = rational_polygon(2 * p.k);
        // Polygon vertices are sorted lexicographically; recover angular order.
        let mut pts = poly.vertices().to_vec();
        pts.sort_by(angle_cmp);
        // pts[0] is the first vertex above the positive x-axis; b_0 is its mirror.
        let n = pts.len();
        let base = (0..n).map(|i| pts[(i + n - 1) % n].clone()).collect();
        Frame { p, base }
    }

    fn k2(&self) -> usize {
        2 * self.p.k
    }

    fn b(&self, i: usize) -> &QVector {
        &self.base[i % self.k2()]
    }

    fn sign(i: usize) -> Rational {
        if i.is_multiple_of(2) {
            rat(1)
        } else {
            rat(-1)
        }
    }

    /// Point `j` (0..=l) of the chain over edge `i`; the ends are blue.
    fn chain(&self, i: usize, j: usize) -> QVector {
        let l = self.p.l as i64;
        let t = frac(j as i64, l);
        let a = self.b(i);
        let b = self.b(i + 1);
        let h = &a.scale(&(rat(1) - &t)) + &b.scale(&t);
        let z = Frame::sign(i) * &self.p.eps * rat(j as i64 * (l - j as i64));
        xyz(&h[0], &h[1], z)
    }

    /// Plane of the quadrilateral over chain edge `(j, j+1)` of edge `i`.
    ///
    /// All quadrilaterals over one edge contain the direction
    /// `(−s·m, ±h)`, `m` the edge midpoint, so consecutive ones meet along a
    /// line through the shared chain vertex and their top vertices sit in
    /// order above the chain.
    fn quad_plane(&self, i: usize, j: usize) -> Halfspace {
        let emid = (self.b(i) + self.b(i + 1)).scale(&-(&self.p.s / rat(2)));
        let dir = xyz(&emid[0], &emid[1], Frame::sign(i) * &self.p.h);
        let a = self.chain(i, j);
        plane_through(&a, &self.chain(i, j + 1), &(&a + &dir))
    }

    /// Vertex at height `±h` shared by the last quadrilateral over edge `i`
    /// and the first over edge `i+2`; apex of the triangle over edge `i+1`.
    fn transition(&self, i: usize) -> QVector {
        let z = Frame::sign(i) * &self.p.h;
        let f = self.quad_plane(i, self.p.l - 1);
        let g = self.quad_plane(i + 2, 0);
        // a1 x + b1 y = c1 - d1 z, same for g
        let r1 = &f.offset - &f.normal[2] * &z;
        let r2 = &g.offset - &g.normal[2] * &z;
        let det = &f.normal[0] * &g.normal[1] - &f.normal[1] * &g.normal[0];
        assert!(!det.is_zero(), "quadrilateral planes must not be parallel");
        let x = (&r1 * &g.normal[1] - &r2 * &f.normal[1]) / &det;
        let y = (&f.normal[0] * &r2 - &g.normal[0] * &r1) / &det;
        QVector::new(vec![x, y, z])
    }

    fn halfspaces(&self) -> Vec<Halfspace> {
        let (k2, l) = (self.k2(), self.p.l);
        let mut hs = vec![
            Halfspace::new(QVector::from_ints(&[0, 0, -1]), -self.p.h.clone()).unwrap(),
            Halfspace::new(QVector::from_ints(&[0, 0, 1]), -self.p.h.clone()).unwrap(),
        ];
        for i in 0..k2 {
            let a = self.chain(i, 0);
            let up = &a + &QVector::from_ints(&[0, 0, 1]);
            hs.push(plane_through(&a, &self.chain(i, l), &up));
            for j in 0..l {
                hs.push(self.quad_plane(i, j));
            }
            // triangle over edge i+1, whose chain lies on the other side
            hs.push(plane_through(
                &self.chain(i + 1, 0),
                &self.chain(i + 1, l),
                &self.transition(i),
            ));
        }
        hs
    }
}

fn angle_cmp(a: &QVector, b: &QVector) -> std::cmp::Ordering {
    // half-plane index then cross product; angles measured in [0, 2π)
    let half = |v: &QVector| {
        if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let c = &a[0] * &b[1] - &a[1] * &b[0];
        Rational::zero().cmp(&c)
    })
}

/// `Ξ(k,l)`, built from its facet planes and checked against the expected
/// face counts.
pub fn xi(params: &XiParams) -> Result<(ExactPolytope, Census), GeneratorError> {
    params.validate()?;
    let frame = Frame::new(params);
    let poly = vertices_from_halfspaces(&frame.halfspaces())
        .map_err(|e| GeneratorError::InvalidParams(e.to_string()))?;
    let census = xi_census(params, &poly);
    Ok((poly, census.into_result()?))
}

fn xi_census(p: &XiParams, poly: &ExactPolytope) -> Census {
    let (k, l) = (p.k, p.l);
    let mut c = Census::default();
    let z = |v: &QVector| v[2].clone();
    let count = |f: &dyn Fn(&QVector) -> bool| poly.vertices().iter().filter(|v| f(v)).count();
    c.record("vertices", 4 * k * l, poly.f0());
    c.record("blue vertices", 2 * k, count(&|v| z(v).is_zero()));
    c.record("red vertices", k * (l - 1), count(&|v| z(v).is_positive() && z(v) < p.h));
    c.record("green vertices", k * (l - 1), count(&|v| z(v).is_negative() && z(v) > -p.h.clone()));
    c.record("grey vertices", 2 * k * l, count(&|v| z(v).abs() == p.h));
    let mut horizontal = 0;
    let mut vertical = 0;
    let mut quads = 0;
    let mut triangles = 0;
    let mut other = 0;
    for (f, h) in poly.facets().iter().enumerate() {
        let nv = poly.facet_vertices(f).len();
        let n = &h.normal;
        if n[0].is_zero() && n[1].is_zero() {
            if nv == k * l {
                horizontal += 1;
            } else {
                other += 1;
            }
        } else if n[2].is_zero() {
            if nv == l + 1 {
                vertical += 1;
            } else {
                other += 1;
            }
        } else if nv == 4 {
            quads += 1;
        } else if nv == 3 {
            triangles += 1;
        } else {
            other += 1;
        }
    }
    c.record("horizontal facets with kl vertices", 2, horizontal);
    c.record("vertical facets with l+1 vertices", 2 * k, vertical);
    c.record("quadrilaterals", 2 * k * l, quads);
    c.record("triangles", 2 * k, triangles);
    c.record("other facets", 0, other);
    c
}

fn m_normal() -> QVector {
    QVector::from_ints(&[0, 1, 0])
}

/// Apex of the pyramid replacing the half `y < 0`: in the base plane, on the
/// normal line of `M` through the center of `A`, at twice the circumradius.
fn apex() -> QVector {
    QVector::from_ints(&[0, -2, 0])
}

/// `Θ(k,l)`: the half `y ≥ 0` of `Ξ(k,l)` with the other half replaced by a
/// pyramid over the octagon `M ∩ Ξ(k,l)`.
pub fn theta(params: &XiParams) -> Result<(ExactPolytope, Census), GeneratorError> {
    let (xi_poly, _) = xi(params)?;
    let (k, l) = (params.k, params.l);
    let section = hyperplane_section(&xi_poly, &m_normal(), &Rational::zero())
        .map_err(|e| GeneratorError::InvalidParams(e.to_string()))?;
    let mut pts: Vec<QVector> = xi_poly
        .vertices()
        .iter()
        .filter(|v| v[1].is_positive())
        .cloned()
        .collect();
    pts.extend(section.vertices().iter().cloned());
    pts.push(apex());
    let th = hull_from_vertices(&pts).expect("points");

    let mut c = Census::default();
    c.record("octagon vertices", 8, section.f0());
    let chain = |sign: i32| {
        section
            .vertices()
            .iter()
            .filter(|v| {
                let z = &v[2];
                z.abs() < params.h && if sign > 0 { z.is_positive() } else { z.is_negative() }
            })
            .count()
    };
    let (red, green) = if k % 2 == 1 { (1, 1) } else { (2, 0) };
    c.record("octagon red vertices", red, chain(1));
    c.record("octagon green vertices", green, chain(-1));
    let shadow: Vec<QVector> = th
        .vertices()
        .iter()
        .map(|v| QVector::new(vec![v[0].clone(), v[1].clone()]))
        .collect();
    c.record("projection vertices", k + 3, hull_from_vertices(&shadow).unwrap().f0());
    c.record("vertices", 2 * k * l + 6, th.f0());
    c.record("vertical facets off M", k - 1, kept_vertical_facets(&th).len());
    Ok((th, c.into_result()?))
}

/// Vertical facets of `Θ` with every vertex strictly on the side `y > 0`.
fn kept_vertical_facets(th: &ExactPolytope) -> Vec<usize> {
    (0..th.facets().len())
        .filter(|&f| {
            th.facets()[f].normal[2].is_zero()
                && th.facet_vertices(f).iter().all(|&v| th.vertex(v)[1].is_positive())
        })
        .collect()
}

/// `Ξ̃(k,l,m)`: `Θ(k,l)` with a homothetic copy of `Π` glued along each
/// vertical segment joining a chain vertex of a kept vertical facet to the
/// base edge of that facet.
pub fn xi_tilde(params: &XiParams, pi: &PiParams) -> Result<(ExactPolytope, Census), GeneratorError> {
    pi_polygon(pi)?;
    let (th, _) = theta(params)?;
    let frame = Frame::new(params);
    let (k, l, m) = (params.k, params.l, pi.m);
    let mut pts = th.vertices().to_vec();
    for i in 1..k {
        for j in 1..l {
            let v = frame.chain(i, j);
            let alpha = v[2].abs();
            // lower end of the vertical segment e'
            let low = if v[2].is_positive() {
                xyz(&v[0], &v[1], Rational::zero())
            } else {
                v.clone()
            };
            for jj in 1..m {
                pts.push(&low + &pi.bulge(jj).scale(&alpha));
            }
        }
    }
    let xt = hull_from_vertices(&pts).expect("points");
    let mut c = Census::default();
    c.record("vertices", th.f0() + (k - 1) * (l - 1) * (m - 1), xt.f0());
    c.record(
        "vertices of theta kept",
        th.f0(),
        th.vertices().iter().filter(|v| xt.vertex_index(v).is_some()).count(),
    );
    Ok((xt, c.into_result()?))
}
