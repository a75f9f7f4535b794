//! Acceptance criteria. Run with `cargo test -p s3dirac --test acceptance`;
//! prints one PASS/FAIL line per criterion and exits nonzero on any failure.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::{metric_with_sign, random_metric, rel, rng, zero_scal_metric};
use nalgebra::DMatrix;
use rayon::prelude::*;
use s3dirac::blocks::{
    build_block, build_from_representation, build_level, build_primed_block, char_poly_small_n,
    closed_form_eigs, BlockTag,
};
use s3dirac::eigen::{block_eigenvalues, block_eigenvalues_default, default_tol};
use s3dirac::gershgorin::{
    closed_form_g, g, min_row_bound, squared_row_entries, triangle_increment,
    triangle_increment_closed_form, GVariant, SortedMetric,
};
use s3dirac::inverse::{reconstruct, Branch, Discriminator, ReconstructionInput};
use s3dirac::metric::{Manifold, Metric, ScalSign};
use s3dirac::spectrum::{
    assemble, counting_function, heat_trace, heat_trace_asymptotic, smallest, SmallestOptions,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close_rel(got: f64, want: f64, tol: f64, what: &str) -> Result<(), String> {
    let err = if want == 0.0 {
        got.abs()
    } else {
        rel(got, want)
    };
    ensure(err <= tol, || {
        format!("{what}: got {got:.17e}, want {want:.17e}")
    })
}

fn within_budget(elapsed: Duration, budget: Option<Duration>) -> Result<(), String> {
    match budget {
        Some(b) if elapsed > b => Err(format!("runtime {:.2?} exceeds budget {:.0?}", elapsed, b)),
        _ => Ok(()),
    }
}

fn ac1_round_metric() -> Outcome {
    let m = Metric::round();
    let inv = m.invariants();
    close_rel(inv.c_shift, 1.5, 1e-12, "C")?;
    close_rel(inv.mu, 1.5, 1e-12, "mu")?;
    close_rel(inv.scal, 6.0, 1e-12, "scal")?;
    close_rel(m.volume(Manifold::S3), 2.0 * PI * PI, 1e-12, "vol(S3)")?;
    let rep = smallest(&m, Manifold::S3, &SmallestOptions::default()).map_err(|e| e.to_string())?;
    close_rel(rep.value, 1.5, 1e-12, "smallest |lambda|")?;
    ensure(rep.multiplicity_of_d_squared == 4, || {
        format!("multiplicity {}", rep.multiplicity_of_d_squared)
    })?;
    ensure(rep.certified, || "not certified".into())?;
    close_rel(rep.enumerated.value, 1.5, 1e-12, "enumerated minimum")?;
    ensure(
        rep.enumerated.multiplicity == 4 && rep.enumerated.max_level == 25,
        || format!("enumerated multiplicity {}", rep.enumerated.multiplicity),
    )?;
    Ok("C = mu = 1.5, scal = 6, vol = 2pi^2, min |lambda| = 1.5 (mult 4, certified, enumerated to 25)".into())
}

fn ac2_boundary_table() -> Outcome {
    let m = Metric::new(1.0, 1.0, 0.5).map_err(|e| e.to_string())?;
    let sm = SortedMetric::new(&m);
    let cs = m.c_shift();
    let abs = |got: f64, want: f64, what: &str| {
        ensure((got - want).abs() <= 1e-12, || {
            format!("{what}: {got:.17e} vs {want}")
        })
    };
    abs(cs * cs, 2.25, "C^2")?;
    abs(m.mu() * m.mu(), 1.0, "mu^2")?;
    abs(g(&sm, 2, 0), 0.25, "G(2,0)")?;
    abs(g(&sm, 3, 0), 0.0, "G(3,0)")?;
    abs(g(&sm, 4, 0), 0.25, "G(4,0)")?;
    abs(g(&sm, 5, 0), 1.0, "G(5,0)")?;
    abs(m.scal(), 0.0, "scal")?;
    ensure(m.scal_sign() == ScalSign::Zero, || "scal sign".into())?;
    Ok("C^2 = 9/4, mu^2 = 1, G(2..5,0) = 1/4, 0, 1/4, 1, scal = 0".into())
}

fn ac3_smallest_property() -> Outcome {
    let mut r = rng(0xac3);
    let metrics: Vec<Metric> = (0..1000)
        .map(|_| metric_with_sign(&mut r, ScalSign::Positive))
        .collect();
    let failures: Vec<String> = metrics
        .par_iter()
        .flat_map_iter(|m| {
            Manifold::ALL.into_iter().filter_map(move |manifold| {
                let want = if manifold == Manifold::So3Trivial {
                    m.c_shift()
                } else {
                    m.mu()
                };
                let expected_mult = if manifold == Manifold::S3 && m.is_round() {
                    4
                } else {
                    2
                };
                // The report carries both the enumerated minimum over levels
                // 0..=25 and the certified closed-form value.
                let rep = match smallest(m, manifold, &SmallestOptions::default()) {
                    Ok(rep) => rep,
                    Err(e) => return Some(format!("{m}: {e}")),
                };
                let (value, mult) = (rep.enumerated.value, rep.enumerated.multiplicity);
                let ok = rep.enumerated.max_level == 25
                    && rel(value, want) <= 1e-9
                    && mult == expected_mult
                    && rep.certified
                    && rep.value == want
                    && rep.multiplicity_of_d_squared == expected_mult;
                (!ok).then(|| {
                    format!(
                        "{m} on {}: enumerated {value} (want {want}), mult {mult}, certified {}",
                        manifold.as_str(),
                        rep.certified
                    )
                })
            })
        })
        .collect();
    ensure(failures.is_empty(), || {
        format!("{} failures, first: {}", failures.len(), failures[0])
    })?;
    Ok("1000 metrics x 3 manifolds: enumerated minimum = mu / C to 1e-9, multiplicity 2, certified to horizon 200".into())
}

fn ac4_oracle_equivalence() -> Outcome {
    let mut r = rng(0xac4);
    let metrics: Vec<Metric> = (0..100).map(|_| random_metric(&mut r)).collect();
    let worst = metrics
        .par_iter()
        .map(|m| -> Result<f64, String> {
            let mut worst = 0.0_f64;
            for n in 0..=12 {
                let split = build_from_representation(m, n)
                    .split()
                    .map_err(|e| e.to_string())?;
                for (rep, rec) in split.iter().zip(build_level(m, n)) {
                    let a = rep.diag.iter().chain(&rep.sub).chain(&rep.sup);
                    let b = rec.diag.iter().chain(&rec.sub).chain(&rec.sup);
                    for (x, y) in a.zip(b) {
                        worst = worst.max((x - y).abs() / (1.0 + rec.max_abs()));
                    }
                }
            }
            Ok(worst)
        })
        .try_reduce(|| 0.0, |x, y| Ok(x.max(y)))?;
    ensure(worst <= 1e-12, || {
        format!("largest entry deviation {worst:e}")
    })?;
    Ok(format!(
        "n <= 12, 100 metrics, largest scaled entry deviation {worst:.1e}"
    ))
}

fn companion_roots(coeffs: &[f64]) -> Vec<f64> {
    let deg = coeffs.len() - 1;
    let c = DMatrix::from_fn(deg, deg, |i, j| {
        if i == 0 {
            -coeffs[j + 1]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut roots: Vec<f64> = c.complex_eigenvalues().iter().map(|z| z.re).collect();
    roots.sort_by(f64::total_cmp);
    roots
}

fn ac5_closed_forms() -> Outcome {
    let mut r = rng(0xac5);
    let mut worst = 0.0_f64;
    let mut worst_gap = 0.0_f64;
    let sorted = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v
    };
    for _ in 0..100 {
        let m = random_metric(&mut r);
        let mut compare = |got: &[f64], want: &[f64]| {
            for (x, y) in got.iter().zip(want) {
                worst = worst.max((x - y).abs() / (1.0 + y.abs()));
            }
        };
        for n in [2, 4] {
            let roots = companion_roots(&char_poly_small_n(&m, n).map_err(|e| e.to_string())?);
            let mut coeffs = Vec::new();
            for tag in BlockTag::BOTH {
                let blk = build_primed_block(&m, n, tag);
                let eig = block_eigenvalues(&blk, default_tol(blk.max_abs()))
                    .map_err(|e| e.to_string())?;
                compare(&eig, &roots);
                coeffs.push(blk.char_poly());
            }
            let scale = coeffs[0].iter().fold(1.0_f64, |s, x| s.max(x.abs()));
            for (x, y) in coeffs[0].iter().zip(&coeffs[1]) {
                worst_gap = worst_gap.max((x - y).abs() / scale);
            }
        }
        let d1 = sorted(closed_form_eigs(&m, 1).map_err(|e| e.to_string())?);
        let got = sorted(
            build_level(&m, 1)
                .iter()
                .flat_map(|b| block_eigenvalues_default(b).unwrap())
                .collect(),
        );
        compare(&got, &d1);
        let d3 = closed_form_eigs(&m, 3).map_err(|e| e.to_string())?;
        for (tag, range) in [(BlockTag::A, 0..4), (BlockTag::B, 4..8)] {
            let got =
                block_eigenvalues_default(&build_block(&m, 3, tag)).map_err(|e| e.to_string())?;
            compare(&got, &sorted(d3[range].to_vec()));
        }
    }
    ensure(worst <= 1e-10, || format!("largest deviation {worst:e}"))?;
    ensure(worst_gap <= 1e-12, || {
        format!("A'/B' characteristic polynomials differ by {worst_gap:e}")
    })?;
    Ok(format!(
        "100 metrics: chi_2/chi_4 roots and D_1/D_3 radicals within {worst:.1e}; A'/B' coefficient gap {worst_gap:.1e}"
    ))
}

fn ac6_gershgorin() -> Outcome {
    let mut r = rng(0xac6);
    let mut metrics: Vec<Metric> = (0..20).map(|_| random_metric(&mut r)).collect();
    metrics.push(Metric::round());
    metrics.push(Metric::new(1.0, 1.0, 0.5).unwrap());
    for m in &metrics {
        let sm = SortedMetric::new(m);
        for n in 0..=30 {
            for tag in BlockTag::BOTH {
                let d = build_block(m, n, tag).dense();
                let scale = 1.0
                    + d.iter()
                        .flatten()
                        .fold(0.0_f64, |s, x| s.max(x.abs()))
                        .powi(2);
                for k in 0..=n {
                    for (off, e) in squared_row_entries(m, n, tag, k).into_iter().enumerate() {
                        let col = k as isize + off as isize - 2;
                        let lit: f64 = if col < 0 || col > n as isize {
                            0.0
                        } else {
                            (0..=n).map(|j| d[k][j] * d[j][col as usize]).sum()
                        };
                        ensure((e - lit).abs() <= 1e-12 * scale, || {
                            format!("squared entry ({n},{k},{off}) at {m}: {e} vs {lit}")
                        })?;
                    }
                }
            }
        }
        for n in 0..=50 {
            let min_abs = build_level(m, n)
                .iter()
                .flat_map(|b| block_eigenvalues_default(b).unwrap())
                .map(f64::abs)
                .fold(f64::INFINITY, f64::min);
            let bound = min_row_bound(m, n);
            ensure(
                min_abs * min_abs >= bound - 1e-9 * (1.0 + bound.abs()),
                || format!("min eigenvalue of D_{n}^2 below row bound at {m}"),
            )?;
            for k in 0..=n {
                let x = closed_form_g(&sm, n, k, GVariant::G);
                let y = closed_form_g(&sm, n, n - k, GVariant::GTilde);
                ensure((x - y).abs() <= 1e-12 * (1.0 + x.abs()), || {
                    format!("reflection ({n},{k}) at {m}")
                })?;
            }
        }
    }
    let mut positives = 0;
    for _ in 0..200 {
        let m = metric_with_sign(&mut r, ScalSign::Positive);
        let sm = SortedMetric::new(&m);
        for n in 0..=50 {
            let closed = triangle_increment_closed_form(&sm, n);
            for k in 0..=n {
                let inc = triangle_increment(&sm, n, k).map_err(|e| e.to_string())?;
                ensure(inc > 0.0 && closed > 0.0, || {
                    format!("increment ({n},{k}) = {inc} at {m}")
                })?;
            }
        }
        positives += 1;
    }
    Ok(format!(
        "squares literal (n <= 30), row bounds, reflection on {} metrics; increments positive on {positives} scal > 0 metrics (n <= 50)",
        metrics.len()
    ))
}

fn ac7_inverse() -> Outcome {
    let forward = |m: &Metric, manifold: Manifold| {
        let discriminator = match (m.scal_sign(), manifold) {
            (ScalSign::Positive, Manifold::So3Trivial) => Discriminator::C(m.c_shift()),
            (ScalSign::Positive, _) => Discriminator::Mu(m.mu()),
            _ => Discriminator::A2Tilde(m.invariants().a2_tilde),
        };
        ReconstructionInput {
            manifold,
            volume: m.volume(manifold),
            scal: m.scal(),
            discriminator,
        }
    };
    let mut r = rng(0xac7);
    let mut cases: Vec<(Metric, Manifold, Branch)> = Vec::new();
    for i in 0..1000 {
        let pos = metric_with_sign(&mut r, ScalSign::Positive);
        let mu_manifold = if i % 2 == 0 {
            Manifold::S3
        } else {
            Manifold::So3Nontrivial
        };
        cases.push((pos, mu_manifold, Branch::PositiveMu));
        cases.push((
            metric_with_sign(&mut r, ScalSign::Positive),
            Manifold::So3Trivial,
            Branch::PositiveC,
        ));
        cases.push((
            metric_with_sign(&mut r, ScalSign::Negative),
            Manifold::ALL[i % 3],
            Branch::NegativeScal,
        ));
        cases.push((
            zero_scal_metric(&mut r),
            Manifold::ALL[i % 3],
            Branch::ZeroScal,
        ));
    }
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|(m, manifold, branch)| {
            let res = match reconstruct(&forward(m, *manifold)) {
                Ok(res) => res,
                Err(e) => return Some(format!("{m}: {e}")),
            };
            let want = m.sorted_desc().0.as_array();
            let ok = res.branch == *branch
                && res
                    .triple
                    .iter()
                    .zip(want)
                    .all(|(x, y)| (x - y).abs() <= 1e-8 * y);
            (!ok).then(|| {
                format!(
                    "{m} via {branch:?}: got {:?} via {:?}",
                    res.triple, res.branch
                )
            })
        })
        .collect();
    ensure(failures.is_empty(), || {
        format!("{} failures, first: {}", failures.len(), failures[0])
    })?;
    Ok("1000 metrics per regime (mu, C, a2tilde with scal < 0, a2tilde with scal = 0) recovered to 1e-8".into())
}

fn ac8_berger() -> Outcome {
    for t in [1.2, 1.5, 1.8] {
        let m = Metric::new(1.0 / t, 1.0, 1.0).map_err(|e| e.to_string())?;
        let s = assemble(&m, Manifold::S3, 3).map_err(|e| e.to_string())?;
        let want = 2.0 - t / 2.0;
        let hit = s
            .lines
            .iter()
            .any(|l| l.level == 1 && (l.eigenvalue - want).abs() <= 1e-10);
        ensure(hit, || format!("T = {t}: {want} missing at level 1"))?;
    }
    Ok("2 - T/2 present at level 1 for T = 1.2, 1.5, 1.8".into())
}

fn ac9_heat_trace() -> Outcome {
    let m = Metric::round();
    let mut details = Vec::new();
    for t in [0.02, 0.05, 0.1] {
        let h = heat_trace(&m, Manifold::S3, t, 60).map_err(|e| e.to_string())?;
        let asym = heat_trace_asymptotic(&m, Manifold::S3, t);
        let err = rel(h.value, asym);
        ensure(err < 0.01, || {
            format!("t = {t}: trace {} vs expansion {asym}", h.value)
        })?;
        ensure(h.tail_estimate < 1e-10 * h.value, || {
            format!(
                "t = {t}: tail estimate {:e} vs total {}",
                h.tail_estimate, h.value
            )
        })?;
        details.push(format!("t={t}: {err:.1e}"));
    }
    Ok(format!("relative deviation {}", details.join(", ")))
}

fn ac10_weyl() -> Outcome {
    let lambda = 40.0;
    let c =
        counting_function(&Metric::round(), Manifold::S3, lambda, 45).map_err(|e| e.to_string())?;
    ensure(!c.truncated, || {
        "max level 45 does not cover |lambda| <= 40".into()
    })?;
    let weyl = 2.0 / 3.0 * lambda * lambda * lambda;
    let err = rel(c.count as f64, weyl);
    ensure(err < 0.1, || format!("count {} vs {weyl}", c.count))?;
    Ok(format!(
        "N(40) = {} vs (2/3)*40^3 = {weyl:.0} ({:.2}%)",
        c.count,
        100.0 * err
    ))
}

/// Name, check, and runtime budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

fn main() {
    let criteria: [Criterion; 10] = [
        ("round-metric exactness", ac1_round_metric, Some(1)),
        ("boundary-point table", ac2_boundary_table, None),
        (
            "smallest-eigenvalue property suite",
            ac3_smallest_property,
            Some(120),
        ),
        (
            "representation oracle equivalence",
            ac4_oracle_equivalence,
            Some(30),
        ),
        ("closed-form cross-checks", ac5_closed_forms, None),
        ("Gershgorin suite", ac6_gershgorin, None),
        ("inverse round-trips", ac7_inverse, Some(30)),
        ("Berger consistency", ac8_berger, None),
        ("heat-trace asymptotics", ac9_heat_trace, Some(10)),
        ("Weyl sanity", ac10_weyl, None),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome
            .and_then(|d| within_budget(elapsed, budget.map(Duration::from_secs)).map(|_| d));
        match outcome {
            Ok(detail) => println!("AC{:<2} PASS  {name} [{elapsed:.2?}]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("AC{:<2} FAIL  {name} [{elapsed:.2?}]: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", 10 - failed, 10);
    if failed > 0 {
        std::process::exit(1);
    }
}
