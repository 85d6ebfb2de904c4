//! Instance-level verification of the diameter bounds and structural lemmas
//! for Minkowski sums, the decomposability tests, zonotope detection and the
//! diameter ratio tables of the extremal families.
//!
//! Every check is an exact integer or rational comparison. Failures are
//! recorded in the report together with a witness rather than raised.

use std::collections::BTreeSet;

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::exactlinalg::{frac, rat, QVector, Rational};
use crate::generators::{
    cube, prop21, prop22, random_polytope, segment, simplex, xi, xi_tilde, GeneratorError, PiParams,
    XiParams,
};
use crate::graph::{build_graph, diameter, gamma_from_parts, geodesic, PolytopeGraph};
use crate::minkowski::{
    has_homothetic_summand, is_summand, is_zonotope, max_summand_scale, minkowski_hull, minkowski_sum,
    phi_injection, SumResult,
};
use crate::polytope::{fan_refines, fans_equal, hull_from_vertices, ExactPolytope};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub instance: String,
    pub check: String,
    pub passed: bool,
    /// Values behind the verdict: diameters, vertex pairs, paths or counts.
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: Option<u64>,
    pub instances: Vec<String>,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    suite: &'a str,
    seed: Option<u64>,
    instance: &'a str,
    check: &'a str,
    passed: bool,
    witness: &'a str,
}

impl VerificationReport {
    pub fn new(suite: &str, seed: Option<u64>) -> VerificationReport {
        VerificationReport {
            suite: suite.to_string(),
            seed,
            instances: Vec::new(),
            checks: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn instance(&mut self, name: &str) {
        self.instances.push(name.to_string());
    }

    pub fn check(&mut self, instance: &str, check: &str, passed: bool, witness: impl Into<String>) {
        self.checks.push(CheckResult {
            instance: instance.to_string(),
            check: check.to_string(),
            passed,
            witness: witness.into(),
        });
        self.summary.total += 1;
        if passed {
            self.summary.passed += 1;
        } else {
            self.summary.failed += 1;
        }
    }

    /// Appends the instances and checks of `other`.
    pub fn merge(&mut self, other: VerificationReport) {
        self.instances.extend(other.instances);
        for c in other.checks {
            self.check(&c.instance, &c.check, c.passed, c.witness);
        }
    }

    pub fn passes(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// One row per check.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for c in &self.checks {
            w.serialize(CsvRow {
                suite: &self.suite,
                seed: self.seed,
                instance: &c.instance,
                check: &c.check,
                passed: c.passed,
                witness: &c.witness,
            })
            .expect("csv row");
        }
        if self.checks.is_empty() {
            w.write_record(["suite", "seed", "instance", "check", "passed", "witness"])
                .expect("csv header");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

fn merge_all(suite: &str, seed: Option<u64>, parts: Vec<VerificationReport>) -> VerificationReport {
    let mut rep = VerificationReport::new(suite, seed);
    for p in parts {
        rep.merge(p);
    }
    rep
}

/// The graphs and decomposition that the pair checks read. Kept separate
/// from [`SumResult`] so that a deliberately broken sum graph can be fed in.
struct PairView<'a> {
    p: &'a ExactPolytope,
    q: &'a ExactPolytope,
    pg: &'a PolytopeGraph,
    qg: &'a PolytopeGraph,
    sg: &'a PolytopeGraph,
    decomposition: &'a [(usize, usize)],
}

impl<'a> PairView<'a> {
    fn new(p: &'a ExactPolytope, q: &'a ExactPolytope, pg: &'a PolytopeGraph, qg: &'a PolytopeGraph, s: &'a SumResult) -> Self {
        PairView {
            p,
            q,
            pg,
            qg,
            sg: s.graph(),
            decomposition: &s.decomposition,
        }
    }
}

fn bounds_checks(rep: &mut VerificationReport, inst: &str, v: &PairView) {
    let (fp, fq) = (v.p.f0(), v.q.f0());
    let dp = diameter(v.pg).value;
    let dq = diameter(v.qg).value;
    let ds = diameter(v.sg);
    let vals = format!("diam(P)={dp} diam(Q)={dq} diam(P+Q)={} f0(P)={fp} f0(Q)={fq}", ds.value);
    rep.check(inst, "sum diameter at least summand diameters", ds.value >= dp.max(dq), vals.clone());
    let upper = ((dp + 1) * fq).min(fp * (dq + 1));
    rep.check(
        inst,
        "sum diameter below min((diam(P)+1)f0(Q), f0(P)(diam(Q)+1))",
        ds.value < upper,
        format!("{vals} bound={upper}"),
    );
    rep.check(inst, "sum diameter below f0(P)f0(Q)", ds.value < fp * fq, format!("{vals} bound={}", fp * fq));

    // A geodesic in P between the P-parts of a diametral pair, plus the
    // diameters of the subgraphs over its vertices, bounds the diameter.
    let (a, b) = ds.witness;
    let (u, w) = (v.decomposition[a].0, v.decomposition[b].0);
    let Some(path) = geodesic(v.pg, u, w) else {
        rep.check(inst, "geodesic witness bound", false, format!("no path from {u} to {w} in P"));
        return;
    };
    let mut total = path.len() - 1;
    let mut parts = Vec::new();
    for &x in &path {
        match gamma_from_parts(v.decomposition, v.sg, x).diameter() {
            Some(d) => {
                total += d;
                parts.push(d);
            }
            None => {
                rep.check(inst, "geodesic witness bound", false, format!("subgraph over {x} is disconnected"));
                return;
            }
        }
    }
    rep.check(
        inst,
        "geodesic witness bound",
        ds.value <= total,
        format!(
            "pair=({a},{b}) geodesic={path:?} subgraph diameters={parts:?} bound={total} diam(P+Q)={}",
            ds.value
        ),
    );
}

fn lemma_checks(rep: &mut VerificationReport, inst: &str, v: &PairView) {
    let dec = v.decomposition;
    let sum_edges = v.sg.edges();

    let bad_edge = sum_edges.iter().find(|&&(a, b)| {
        let ((u1, w1), (u2, w2)) = (dec[a], dec[b]);
        !((u1 == u2 || v.pg.has_edge(u1, u2)) && (w1 == w2 || v.qg.has_edge(w1, w2)))
    });
    rep.check(
        inst,
        "sum edges project to edges or vertices",
        bad_edge.is_none(),
        match bad_edge {
            Some(&(a, b)) => format!("sum edge ({a},{b}) with parts {:?} and {:?}", dec[a], dec[b]),
            None => format!("{} sum edges", sum_edges.len()),
        },
    );

    let disconnected =
        (0..v.p.f0()).find(|&u| !gamma_from_parts(dec, v.sg, u).is_connected());
    rep.check(
        inst,
        "subgraphs over vertices of P are connected",
        disconnected.is_none(),
        match disconnected {
            Some(u) => format!(
                "subgraph over {u} with members {:?} is disconnected",
                gamma_from_parts(dec, v.sg, u).members
            ),
            None => format!("{} subgraphs", v.p.f0()),
        },
    );

    let p_edges: BTreeSet<(usize, usize)> = v.pg.edges().into_iter().collect();
    let lifted: BTreeSet<(usize, usize)> = sum_edges
        .iter()
        .map(|&(a, b)| (dec[a].0, dec[b].0))
        .filter(|(x, y)| x != y)
        .map(|(x, y)| (x.min(y), x.max(y)))
        .collect();
    let missing = p_edges.difference(&lifted).next();
    let extra = lifted.difference(&p_edges).next();
    rep.check(
        inst,
        "edges of P are joined subgraph pairs",
        missing.is_none(),
        match missing {
            Some(e) => format!("edge {e:?} of P has no sum edge between its subgraphs"),
            None => format!("{} edges", p_edges.len()),
        },
    );
    rep.check(
        inst,
        "joined subgraph pairs are edges of P",
        extra.is_none(),
        match extra {
            Some(e) => format!("subgraphs over {e:?} are joined but {e:?} is not an edge of P"),
            None => format!("{} joined pairs", lifted.len()),
        },
    );
}

fn polytope_lemma_checks(rep: &mut VerificationReport, inst: &str, p: &ExactPolytope, q: &ExactPolytope, s: &SumResult) {
    let phi = phi_injection(p, q);
    let (ok, witness) = match &phi {
        Ok(m) => {
            let distinct: BTreeSet<usize> = m.images.iter().copied().collect();
            let wrong = (0..p.f0()).find(|&u| s.decomposition[m.images[u]].0 != u);
            match (distinct.len() == m.images.len(), wrong) {
                (true, None) => (true, format!("images={:?}", m.images)),
                (false, _) => (false, format!("images={:?} repeat", m.images)),
                (_, Some(u)) => (false, format!("image of {u} decomposes as {:?}", s.decomposition[m.images[u]])),
            }
        }
        Err(e) => (false, e.to_string()),
    };
    rep.check(inst, "vertex injection into the sum", ok, witness);
    let rp = fan_refines(&s.sum, p);
    let rq = fan_refines(&s.sum, q);
    rep.check(
        inst,
        "sum fan refines both summand fans",
        rp && rq,
        format!("refines P: {rp}, refines Q: {rq}"),
    );
}

fn pair_report(
    suite: &str,
    inst: &str,
    p: &ExactPolytope,
    q: &ExactPolytope,
    bounds: bool,
    lemmas: bool,
) -> VerificationReport {
    let mut rep = VerificationReport::new(suite, None);
    rep.instance(inst);
    if p.ambient_dim() != q.ambient_dim() {
        rep.check(
            inst,
            "same ambient dimension",
            false,
            format!("{} vs {}", p.ambient_dim(), q.ambient_dim()),
        );
        return rep;
    }
    let s = match minkowski_sum(p, q) {
        Ok(s) => s,
        Err(e) => {
            rep.check(inst, "sum decomposition", false, e.to_string());
            return rep;
        }
    };
    let (pg, qg) = (build_graph(p), build_graph(q));
    let view = PairView::new(p, q, &pg, &qg, &s);
    if bounds {
        bounds_checks(&mut rep, inst, &view);
    }
    if lemmas {
        lemma_checks(&mut rep, inst, &view);
        polytope_lemma_checks(&mut rep, inst, p, q, &s);
    }
    rep
}

/// Lower bound, strict upper bounds and the geodesic witness bound for the
/// diameter of `p + q`.
pub fn check_diameter_bounds(p: &ExactPolytope, q: &ExactPolytope) -> VerificationReport {
    pair_report("bounds", "pair", p, q, true, false)
}

/// Edge projection, vertex injection, subgraph connectivity, adjacency
/// transfer in both directions, and fan refinement for `p + q`.
pub fn check_structure_lemmas(p: &ExactPolytope, q: &ExactPolytope) -> VerificationReport {
    pair_report("lemmas", "pair", p, q, false, true)
}

/// Triangle with a horizontal base and a horizontal segment: the sum is a
/// quadrilateral.
pub fn triangle_segment_pair() -> (ExactPolytope, ExactPolytope) {
    let tri = hull_from_vertices(&[
        QVector::from_ints(&[0, 0]),
        QVector::from_ints(&[2, 0]),
        QVector::from_ints(&[1, 1]),
    ])
    .expect("triangle");
    (tri, segment(&QVector::from_ints(&[1, 0])))
}

/// The triangle/segment example: sum size and the subgraph over each
/// triangle vertex.
pub fn check_triangle_segment() -> VerificationReport {
    let (p, q) = triangle_segment_pair();
    let inst = "triangle+segment";
    let mut rep = pair_report("triangle-segment", inst, &p, &q, true, true);
    let s = minkowski_sum(&p, &q).expect("sum");
    rep.check(inst, "sum has 4 vertices", s.sum.f0() == 4, format!("f0={}", s.sum.f0()));
    let apex = p.vertex_index(&QVector::from_ints(&[1, 1])).expect("apex");
    for u in 0..p.f0() {
        let g = gamma_from_parts(&s.decomposition, s.graph(), u);
        let expected = if u == apex { (2, 1) } else { (1, 0) };
        let got = (g.members.len(), g.edge_count());
        rep.check(
            inst,
            &format!("subgraph over vertex {u} has {} vertices and {} edges", expected.0, expected.1),
            got == expected,
            format!("members={:?} edges={}", g.members, got.1),
        );
    }
    rep
}

/// The triangle/segment pair with the edge inside the apex subgraph removed
/// from the sum graph. Its report must contain a failure.
pub fn injected_fault_report() -> VerificationReport {
    let (p, q) = triangle_segment_pair();
    let s = minkowski_sum(&p, &q).expect("sum");
    let apex = p.vertex_index(&QVector::from_ints(&[1, 1])).expect("apex");
    let broken: Vec<(usize, usize)> = s
        .graph()
        .edges()
        .into_iter()
        .filter(|&(a, b)| !(s.decomposition[a].0 == apex && s.decomposition[b].0 == apex))
        .collect();
    let sg = PolytopeGraph::from_edges(s.sum.f0(), &broken);
    let (pg, qg) = (build_graph(&p), build_graph(&q));
    let view = PairView {
        p: &p,
        q: &q,
        pg: &pg,
        qg: &qg,
        sg: &sg,
        decomposition: &s.decomposition,
    };
    let mut rep = VerificationReport::new("injected-fault", None);
    rep.instance("triangle+segment, apex subgraph edge removed");
    lemma_checks(&mut rep, "broken", &view);
    rep
}

fn negative_control() -> VerificationReport {
    let broken = injected_fault_report();
    let mut rep = VerificationReport::new("negative-control", None);
    rep.instance("injected fault");
    let found = broken.failures().into_iter().next();
    rep.check(
        "injected fault",
        "broken adjacency is reported",
        found.is_some(),
        found.map_or("no failure reported".to_string(), |c| format!("{}: {}", c.check, c.witness)),
    );
    rep
}

fn derived_seeds(seed: u64, n: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen()).collect()
}

/// A random pair in dimension 2 to 4 with at most 10 vertices each and
/// coordinates bounded by 10.
pub fn random_pair(seed: u64) -> (ExactPolytope, ExactPolytope) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = rng.gen_range(2..=4);
    let np = rng.gen_range(d + 1..=10);
    let nq = rng.gen_range(d + 1..=10);
    let (sp, sq) = (rng.gen(), rng.gen());
    (random_polytope(d, np, 10, sp), random_polytope(d, nq, 10, sq))
}

/// Bounds and lemmas on `trials` seeded random pairs.
pub fn check_random_pairs(seed: u64, trials: usize) -> VerificationReport {
    let parts: Vec<VerificationReport> = derived_seeds(seed, trials)
        .into_par_iter()
        .enumerate()
        .map(|(t, s)| {
            let (p, q) = random_pair(s);
            pair_report("random-pairs", &format!("random pair {t} (seed {s})"), &p, &q, true, true)
        })
        .collect();
    merge_all("random-pairs", Some(seed), parts)
}

fn diam(p: &ExactPolytope) -> usize {
    diameter(&build_graph(p)).value
}

/// Dimension and diameter of the fixed-diameter polytopes for
/// `1 ≤ d ≤ dmax`, `1 ≤ k ≤ kmax`; `d = 1` only admits `k = 1`.
pub fn check_fixed_diameter_grid(dmax: usize, kmax: usize) -> VerificationReport {
    let cases: Vec<(usize, usize)> = (1..=dmax)
        .flat_map(|d| (1..=kmax).map(move |k| (d, k)))
        .filter(|&(d, k)| d > 1 || k == 1)
        .collect();
    let parts = cases
        .into_par_iter()
        .map(|(d, k)| {
            let inst = format!("fixed diameter d={d} k={k}");
            let mut rep = VerificationReport::new("fixed-diameter", None);
            rep.instance(&inst);
            match prop21(d, k) {
                Ok(p) => {
                    let (dim, dk) = (p.intrinsic_dim(), diam(&p));
                    rep.check(&inst, "dimension", dim == d, format!("dim={dim}"));
                    rep.check(&inst, "diameter", dk == k, format!("diam={dk} f0={}", p.f0()));
                }
                Err(e) => rep.check(&inst, "construction", false, e.to_string()),
            }
            rep
        })
        .collect();
    merge_all("fixed-diameter", None, parts)
}

/// Pairs of diameter-2 pyramids whose sum has diameter exactly `k`.
pub fn check_pyramid_pairs(ds: &[usize], ks: &[usize]) -> VerificationReport {
    let cases: Vec<(usize, usize)> = ds.iter().flat_map(|&d| ks.iter().map(move |&k| (d, k))).collect();
    let parts = cases
        .into_par_iter()
        .map(|(d, k)| {
            let inst = format!("pyramid pair d={d} k={k}");
            let mut rep = VerificationReport::new("pyramid-pairs", None);
            rep.instance(&inst);
            match prop22(d, k) {
                Ok((p, q)) => {
                    let (dp, dq) = (diam(&p), diam(&q));
                    rep.check(&inst, "summand diameters are 2", dp == 2 && dq == 2, format!("{dp}, {dq}"));
                    match minkowski_hull(&p, &q) {
                        Ok(s) => {
                            let dsum = diam(&s);
                            rep.check(&inst, "sum diameter is k", dsum == k, format!("diam={dsum} f0={}", s.f0()));
                        }
                        Err(e) => rep.check(&inst, "sum", false, e.to_string()),
                    }
                }
                Err(e) => rep.check(&inst, "construction", false, e.to_string()),
            }
            rep
        })
        .collect();
    merge_all("pyramid-pairs", None, parts)
}

fn scale_tolerance() -> Rational {
    frac(1, 1024)
}

fn decomposability_fixtures() -> VerificationReport {
    let mut rep = VerificationReport::new("decomposability", None);
    let square = cube(2);
    let tri = hull_from_vertices(&[
        QVector::from_ints(&[0, 0]),
        QVector::from_ints(&[1, 0]),
        QVector::from_ints(&[0, 1]),
    ])
    .expect("triangle");
    let sq_tri = minkowski_hull(&square, &tri).expect("sum");
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let dir = loop {
        let v = QVector::from_ints(&[rng.gen_range(-5..=5), rng.gen_range(-5..=5), rng.gen_range(-5..=5)]);
        if !v.is_zero() {
            break v;
        }
    };
    let cases = [
        ("square+triangle vs triangle", sq_tri, tri, true),
        ("simplex vs segment", simplex(3), segment(&dir), false),
        ("cube vs cube", cube(3), cube(3), true),
    ];
    for (inst, p, q, expected) in cases {
        rep.instance(inst);
        let h = has_homothetic_summand(&p, &q);
        let b = max_summand_scale(&p, &q, &scale_tolerance());
        rep.check(inst, "homothetic summand test", h == expected, format!("result={h}"));
        rep.check(
            inst,
            "scale bracket agrees",
            b.alpha_lo.is_zero() != expected,
            format!("bracket=[{}, {}]", b.alpha_lo, b.alpha_hi),
        );
    }
    rep
}

fn positive_instance(seed: u64) -> (ExactPolytope, ExactPolytope, Rational) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nr = rng.gen_range(4..=7);
    let nq = rng.gen_range(4..=6);
    let r = random_polytope(3, nr, 5, rng.gen());
    let q = random_polytope(3, nq, 5, rng.gen());
    let alpha = [frac(1, 2), rat(1), rat(2)][rng.gen_range(0..3)].clone();
    let p = minkowski_hull(&r, &q.scale(&alpha)).expect("sum");
    (p, q, alpha)
}

fn generic_instance(seed: u64) -> (ExactPolytope, ExactPolytope) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let np = rng.gen_range(4..=8);
    let nq = rng.gen_range(2..=6);
    let p = random_polytope(3, np, 6, rng.gen());
    // q may be lower-dimensional; a few points in general position
    let pts: Vec<QVector> = (0..nq)
        .map(|_| QVector::from_ints(&[rng.gen_range(-6..=6), rng.gen_range(-6..=6), rng.gen_range(-6..=6)]))
        .collect();
    let q = hull_from_vertices(&pts).expect("points");
    (p, q)
}

/// The vertex-count summand test against the erosion bracket, on
/// constructed positives `r + αq` and on generic pairs.
pub fn check_decomposability(trials: usize, seed: u64) -> VerificationReport {
    let seeds = derived_seeds(seed, 2 * trials);
    let tol = scale_tolerance();
    let positives = seeds[..trials].par_iter().enumerate().map(|(t, &s)| {
        let (p, q, alpha) = positive_instance(s);
        let inst = format!("positive {t} (seed {s}, alpha {alpha})");
        let mut rep = VerificationReport::new("decomposability", None);
        rep.instance(&inst);
        let h = has_homothetic_summand(&p, &q);
        rep.check(&inst, "homothetic summand detected", h, format!("f0(P)={}", p.f0()));
        let pq = minkowski_hull(&p, &q).expect("sum");
        rep.check(&inst, "fan of P equals fan of P+Q", fans_equal(&p, &pq), format!("f0(P+Q)={}", pq.f0()));
        rep.check(&inst, "alpha*Q is a summand", is_summand(&p, &q.scale(&alpha)), "");
        let b = max_summand_scale(&p, &q, &tol);
        rep.check(
            &inst,
            "scale bracket reaches alpha",
            b.alpha_lo >= alpha,
            format!("bracket=[{}, {}]", b.alpha_lo, b.alpha_hi),
        );
        rep
    });
    let generics = seeds[trials..].par_iter().enumerate().map(|(t, &s)| {
        let (p, q) = generic_instance(s);
        let inst = format!("generic {t} (seed {s})");
        let mut rep = VerificationReport::new("decomposability", None);
        rep.instance(&inst);
        let h = has_homothetic_summand(&p, &q);
        let b = max_summand_scale(&p, &q, &tol);
        let eroded = !b.alpha_lo.is_zero() || q.f0() == 1;
        rep.check(
            &inst,
            "vertex-count test agrees with erosion bracket",
            h == eroded,
            format!("vertex test={h} bracket=[{}, {}]", b.alpha_lo, b.alpha_hi),
        );
        rep
    });
    let mut parts = vec![decomposability_fixtures()];
    parts.extend(positives.collect::<Vec<_>>());
    parts.extend(generics.collect::<Vec<_>>());
    merge_all("decomposability", Some(seed), parts)
}

/// `n` segments with pairwise non-parallel integer directions in 3-space.
pub fn random_segment_sum(n: usize, seed: u64) -> ExactPolytope {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dirs: Vec<QVector> = Vec::new();
    let mut seen = BTreeSet::new();
    while dirs.len() < n {
        let v = QVector::from_ints(&[rng.gen_range(-4..=4), rng.gen_range(-4..=4), rng.gen_range(-4..=4)]);
        let Ok(key) = crate::exactlinalg::normalize_primitive(&v) else {
            continue;
        };
        if seen.insert(key.canonical_sign()) {
            dirs.push(v);
        }
    }
    dirs.iter()
        .fold(hull_from_vertices(&[QVector::zeros(3)]).expect("point"), |acc, d| {
            minkowski_hull(&acc, &segment(d)).expect("sum")
        })
}

/// Cubes and random segment sums are zonotopes with the right number of
/// generators; simplices and `Ξ(5,4)` are not.
pub fn check_zonotopes(seed: u64, samples: usize) -> VerificationReport {
    let mut cases: Vec<(String, ExactPolytope, Option<usize>)> =
        (1..=4).map(|d| (format!("cube {d}"), cube(d), Some(d))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..samples {
        let n = rng.gen_range(3..=5);
        let s = rng.gen();
        cases.push((format!("segment sum {t} (n={n}, seed {s})"), random_segment_sum(n, s), Some(n)));
    }
    for d in 2..=4 {
        cases.push((format!("simplex {d}"), simplex(d), None));
    }
    if let Ok((x, _)) = xi(&XiParams::new(5, 4)) {
        cases.push(("xi(5,4)".to_string(), x, None));
    }
    let parts = cases
        .into_par_iter()
        .map(|(inst, p, expected)| {
            let mut rep = VerificationReport::new("zonotopes", None);
            rep.instance(&inst);
            let z = is_zonotope(&p);
            let got = z.is_zonotope.then_some(z.generators.len());
            rep.check(&inst, "zonotope detection", got == expected, format!("expected {expected:?}, got {got:?}"));
            rep
        })
        .collect();
    merge_all("zonotopes", Some(seed), parts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatioKind {
    /// `Ξ(k,4)` and the vertical unit segment.
    XiSegment,
    /// `Ξ̃(k, 2m+4, m)` and the polygon `Π` with `m+1` vertices.
    XiTildePi,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub k: usize,
    pub l: usize,
    pub m: usize,
    pub f0: usize,
    pub sum_f0: usize,
    pub diameter: usize,
    pub sum_diameter: usize,
    /// Upper bound on `diameter`, exact.
    pub upper_bound: String,
    /// Lower bound on `sum_diameter`, exact.
    pub lower_bound: String,
    pub ratio: f64,
    /// `lower_bound / upper_bound`.
    pub floor: f64,
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Diameters of a family member and its sum with the matching small
/// polytope, checked against the upper bound on the first and the lower
/// bound on the second; the ratio must clear the floor they imply.
pub fn ratio_tables(
    kind: RatioKind,
    k_values: &[usize],
    m: usize,
) -> Result<(VerificationReport, Vec<RatioRow>), GeneratorError> {
    let suite = match kind {
        RatioKind::XiSegment => "xi-segment",
        RatioKind::XiTildePi => "xi-tilde-pi",
    };
    let rows: Vec<Result<(VerificationReport, RatioRow), GeneratorError>> = k_values
        .par_iter()
        .map(|&k| {
            let (l, base, small, ub, lb) = match kind {
                RatioKind::XiSegment => {
                    let l = 4;
                    let (x, _) = xi(&XiParams::new(k, l))?;
                    let sigma = segment(&QVector::from_ints(&[0, 0, 1]));
                    let ub = rat((k + l + 2) as i64);
                    (l, x, sigma, ub, rat(2 * k as i64))
                }
                RatioKind::XiTildePi => {
                    let l = 2 * m + 4;
                    let pi = PiParams::new(m);
                    let (x, _) = xi_tilde(&XiParams::new(k, l), &pi)?;
                    let small = crate::generators::pi_polygon(&pi)?;
                    let ub = frac(k as i64 + 3, 2) + rat((l + 2) as i64);
                    let lb = frac((k * (m + 1)) as i64, 2) + rat(1);
                    (l, x, small, ub, lb)
                }
            };
            let inst = format!("{suite} k={k} l={l} m={m}");
            let mut rep = VerificationReport::new(suite, None);
            rep.instance(&inst);
            let d = diam(&base);
            let s = minkowski_sum(&base, &small).map_err(|e| GeneratorError::InvalidParams(e.to_string()))?;
            let ds = diameter(s.graph()).value;
            let dr = rat(d as i64);
            let dsr = rat(ds as i64);
            rep.check(&inst, "family diameter upper bound", dr <= ub, format!("diam={d} bound={ub}"));
            rep.check(&inst, "sum diameter lower bound", dsr >= lb, format!("diam={ds} bound={lb}"));
            let floor = &lb / &ub;
            let ratio = &dsr / &dr;
            rep.check(&inst, "ratio floor", ratio >= floor, format!("ratio={ratio} floor={floor}"));
            let row = RatioRow {
                k,
                l,
                m: if kind == RatioKind::XiSegment { 0 } else { m },
                f0: base.f0(),
                sum_f0: s.sum.f0(),
                diameter: d,
                sum_diameter: ds,
                upper_bound: ub.to_string(),
                lower_bound: lb.to_string(),
                ratio: to_f64(&ratio),
                floor: to_f64(&floor),
            };
            Ok((rep, row))
        })
        .collect();
    let mut rep = VerificationReport::new(suite, None);
    let mut table = Vec::new();
    for r in rows {
        let (part, row) = r?;
        rep.merge(part);
        table.push(row);
    }
    Ok((rep, table))
}

/// The table as CSV with a header row.
pub fn ratio_csv(rows: &[RatioRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("csv row");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn ratio_report(kind: RatioKind, ks: &[usize], m: usize) -> VerificationReport {
    match ratio_tables(kind, ks, m) {
        Ok((rep, _)) => rep,
        Err(e) => {
            let mut rep = VerificationReport::new("ratios", None);
            rep.check("ratio table", "construction", false, e.to_string());
            rep
        }
    }
}

/// All deterministic fixtures plus `trials` random pairs, decomposability
/// instances and segment sums derived from `seed`.
pub fn run_suite(seed: u64, trials: usize) -> VerificationReport {
    let mut rep = VerificationReport::new("all", Some(seed));
    rep.merge(check_triangle_segment());
    rep.merge(negative_control());
    rep.merge(check_fixed_diameter_grid(5, 6));
    rep.merge(check_pyramid_pairs(&[3, 4], &[4, 5, 6]));
    rep.merge(check_diameter_bounds(&cube(3), &cube(3)));
    rep.merge(check_structure_lemmas(&cube(3), &hull_from_vertices(&[QVector::from_ints(&[1, 2, 3])]).expect("point")));
    rep.merge(check_zonotopes(seed, trials.min(10)));
    rep.merge(ratio_report(RatioKind::XiSegment, &[3, 4, 5], 0));
    rep.merge(ratio_report(RatioKind::XiTildePi, &[5], 2));
    if trials > 0 {
        rep.merge(check_random_pairs(seed, trials));
        rep.merge(check_decomposability(trials, seed));
    }
    rep
}
