//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line with its
//! elapsed time, written straight to stdout so it shows without
//! `--nocapture`.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use minkdiam::exactlinalg::{frac, rat, Rational};
use minkdiam::generators::{random_polytope, theta, xi, xi_tilde, PiParams, XiParams};
use minkdiam::graph::gamma_subgraph;
use minkdiam::io::{emit_polytope_file, parse_polytope_file, Format};
use minkdiam::minkowski::minkowski_sum;
use minkdiam::verify::{
    check_decomposability, check_fixed_diameter_grid, check_pyramid_pairs, check_random_pairs,
    check_triangle_segment, check_zonotopes, ratio_tables, triangle_segment_pair, RatioKind,
    VerificationReport,
};
use rand::{Rng, SeedableRng};

const SEED: u64 = 20240611;

fn criterion(n: u32, name: &str, limit: Duration, f: impl FnOnce() -> Result<String, String>) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let elapsed = start.elapsed();
    let outcome = outcome.and_then(|detail| {
        if elapsed <= limit {
            Ok(detail)
        } else {
            Err(format!("{detail}; took {elapsed:.1?}, limit {limit:?}"))
        }
    });
    let line = match &outcome {
        Ok(detail) => format!("criterion {n:>2} PASS  {name} [{elapsed:.2?}] {detail}\n"),
        Err(why) => format!("criterion {n:>2} FAIL  {name} [{elapsed:.2?}] {why}\n"),
    };
    std::io::stdout().lock().write_all(line.as_bytes()).unwrap();
    if let Err(why) = outcome {
        panic!("criterion {n} ({name}) failed: {why}");
    }
}

fn report_result(rep: &VerificationReport) -> Result<String, String> {
    if rep.passes() {
        Ok(format!("{} checks on {} instances", rep.summary.total, rep.instances.len()))
    } else {
        let f = &rep.failures()[0];
        Err(format!("{} failures, first: {} / {}: {}", rep.summary.failed, f.instance, f.check, f.witness))
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

#[test]
fn c01_triangle_segment_sum() {
    criterion(1, "triangle plus parallel segment", Duration::from_secs(1), || {
        let (p, q) = triangle_segment_pair();
        let s = minkowski_sum(&p, &q).map_err(|e| e.to_string())?;
        ensure(s.sum.f0() == 4, format!("sum has {} vertices", s.sum.f0()))?;
        let mut shapes: Vec<(usize, usize)> = (0..p.f0())
            .map(|u| {
                let g = gamma_subgraph(&s, u);
                (g.members.len(), g.edge_count())
            })
            .collect();
        shapes.sort_unstable();
        ensure(shapes == vec![(1, 0), (1, 0), (2, 1)], format!("subgraph shapes {shapes:?}"))?;
        report_result(&check_triangle_segment())
    });
}

#[test]
fn c02_xi_5_4_census() {
    criterion(2, "census of xi(5,4)", Duration::from_secs(30), || {
        let (p, _) = xi(&XiParams::new(5, 4)).map_err(|e| e.to_string())?;
        let mut horizontal = Vec::new();
        let (mut vertical, mut tri, mut quad) = (Vec::new(), 0, 0);
        for (f, h) in p.facets().iter().enumerate() {
            let nv = p.facet_vertices(f).len();
            if h.normal[0] == rat(0) && h.normal[1] == rat(0) {
                horizontal.push(nv);
            } else if h.normal[2] == rat(0) {
                vertical.push(nv);
            } else if nv == 3 {
                tri += 1;
            } else if nv == 4 {
                quad += 1;
            }
        }
        ensure(p.f0() == 80, format!("f0 = {}", p.f0()))?;
        ensure(horizontal == vec![20, 20], format!("horizontal facets {horizontal:?}"))?;
        ensure(vertical == vec![5; 10], format!("vertical facets {vertical:?}"))?;
        ensure(tri == 10 && quad == 40, format!("{tri} triangles, {quad} quadrilaterals"))?;
        ensure(p.facets().len() == 62, format!("{} facets", p.facets().len()))?;
        Ok("80 vertices, 2x20 horizontal, 10x5 vertical, 10 triangles, 40 quadrilaterals".into())
    });
}

#[test]
fn c03_xi_segment_diameters() {
    criterion(3, "xi(k,4) and xi(k,4)+segment diameters", Duration::from_secs(300), || {
        let ks: Vec<usize> = (3..=10).collect();
        let (rep, rows) = ratio_tables(RatioKind::XiSegment, &ks, 0).map_err(|e| e.to_string())?;
        report_result(&rep)?;
        for r in &rows {
            ensure(r.diameter <= r.k + 6, format!("k={} diameter {}", r.k, r.diameter))?;
            ensure(r.sum_diameter >= 2 * r.k, format!("k={} sum diameter {}", r.k, r.sum_diameter))?;
        }
        let (rep, big) = ratio_tables(RatioKind::XiSegment, &[40], 0).map_err(|e| e.to_string())?;
        report_result(&rep)?;
        let r = &big[0];
        let ratio = Rational::new(r.sum_diameter.into(), r.diameter.into());
        ensure(ratio >= frac(17, 10), format!("k=40 ratio {ratio}"))?;
        let summary: Vec<String> = rows.iter().map(|r| format!("{}:{}/{}", r.k, r.sum_diameter, r.diameter)).collect();
        Ok(format!("k:sum/base {} ; k=40 ratio {}/{} = {:.3}", summary.join(" "), r.sum_diameter, r.diameter, r.ratio))
    });
}

#[test]
fn c04_xi_tilde_diameters() {
    criterion(4, "glued polytopes and their sums with the bulge polygon", Duration::from_secs(600), || {
        let mut out = Vec::new();
        for m in [2usize, 3] {
            let l = 2 * m + 4;
            let ks = [5usize, 9, 13, 17];
            for &k in &ks {
                let params = XiParams::new(k, l);
                let (th, _) = theta(&params).map_err(|e| e.to_string())?;
                let (xt, _) = xi_tilde(&params, &PiParams::new(m)).map_err(|e| e.to_string())?;
                let inc = xt.f0() - th.f0();
                ensure(inc == (k - 1) * (l - 1) * (m - 1), format!("k={k} m={m}: increment {inc}"))?;
            }
            let (rep, rows) = ratio_tables(RatioKind::XiTildePi, &ks, m).map_err(|e| e.to_string())?;
            report_result(&rep)?;
            for r in rows {
                let ub = frac(r.k as i64 + 3, 2) + rat((l + 2) as i64);
                let lb = frac((r.k * (m + 1)) as i64, 2) + rat(1);
                ensure(rat(r.diameter as i64) <= ub, format!("k={} m={m}: diameter {} > {ub}", r.k, r.diameter))?;
                ensure(rat(r.sum_diameter as i64) >= lb, format!("k={} m={m}: sum diameter {} < {lb}", r.k, r.sum_diameter))?;
                out.push(format!("m{m}k{}:{}/{}", r.k, r.sum_diameter, r.diameter));
            }
        }
        Ok(out.join(" "))
    });
}

#[test]
fn c05_fixed_diameter_grid() {
    criterion(5, "fixed-diameter grid d<=5, k<=6", Duration::from_secs(60), || {
        report_result(&check_fixed_diameter_grid(5, 6))
    });
}

#[test]
fn c06_pyramid_pairs() {
    criterion(6, "diameter-2 pyramid pairs with sum diameter k", Duration::from_secs(120), || {
        report_result(&check_pyramid_pairs(&[3, 4], &[4, 5, 6, 7, 8]))
    });
}

#[test]
fn c07_random_pair_suite() {
    criterion(7, "bounds and lemmas on 200 random pairs", Duration::from_secs(600), || {
        let rep = check_random_pairs(SEED, 200);
        ensure(rep.instances.len() == 200, "200 instances")?;
        report_result(&rep)
    });
}

#[test]
fn c08_decomposability() {
    criterion(8, "summand test against erosion bracket", Duration::from_secs(600), || {
        let rep = check_decomposability(100, SEED);
        ensure(rep.instances.len() == 203, format!("{} instances", rep.instances.len()))?;
        report_result(&rep)
    });
}

#[test]
fn c09_zonotopes() {
    criterion(9, "zonotope detection", Duration::from_secs(120), || {
        report_result(&check_zonotopes(SEED, 10))
    });
}

#[test]
fn c10_io_round_trip() {
    criterion(10, "file round trip on 50 polytopes", Duration::from_secs(30), || {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(SEED);
        for i in 0..50 {
            let d = rng.gen_range(2..=4);
            let n = rng.gen_range(d + 1..=12);
            let p = random_polytope(d, n, 10, rng.gen());
            for f in [Format::CddExt, Format::CddIne, Format::Json] {
                let text = emit_polytope_file(&p, f);
                let q = parse_polytope_file(&text).map_err(|e| format!("polytope {i} {f:?}: {e}"))?;
                ensure(q == p, format!("polytope {i} {f:?}: parse changed the polytope"))?;
                ensure(emit_polytope_file(&q, f) == text, format!("polytope {i} {f:?}: re-emission differs"))?;
            }
        }
        Ok("50 polytopes x 3 formats".into())
    });
}
