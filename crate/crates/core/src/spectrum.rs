//! Global Dirac spectra of `(S³, g_abc)` and of `(SO(3), g_abc)` with either
//! spin structure, assembled level by level from the blocks of `D_n`.
//!
//! An eigenvalue of `D_n` with multiplicity `m` contributes `m·(n+1)` to the
//! multiplicity in the full spectrum. SO(3) with the trivial spin structure
//! sees only even levels, the nontrivial one only odd levels.
//!
//! The Dirac operator of the opposite orientation is the negative of the one
//! computed here; nothing below depends on the sign except the sign of the
//! reported eigenvalues.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::{build_level, char_poly_small_n, closed_form_eigs, BlockTag};
use crate::eigen::{block_eigenvalues, default_tol};
use crate::error::{Error, Result};
use crate::gershgorin::{
    base_cases, g, triangle_increment, InequalityRecord, Relation, SortedMetric,
};
use crate::metric::{Manifold, Metric, ScalSign};

/// Eigenvalues closer than this (relative) are treated as one value when
/// counting multiplicities.
pub const COINCIDENCE_REL_TOL: f64 = 1e-9;

/// Default relative tolerance of [`Spectrum::merged`].
pub const DEFAULT_MERGE_TOL: f64 = 1e-9;

pub const DEFAULT_MAX_LEVEL: usize = 25;

pub const DEFAULT_HORIZON: usize = 200;

/// Which blocks of `D_n` carry an eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BlockSet {
    A,
    B,
    AB,
}

impl BlockSet {
    fn with(self, tag: BlockTag) -> BlockSet {
        match (self, tag) {
            (BlockSet::A, BlockTag::A) => BlockSet::A,
            (BlockSet::B, BlockTag::B) => BlockSet::B,
            _ => BlockSet::AB,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BlockSet::A => "A",
            BlockSet::B => "B",
            BlockSet::AB => "AB",
        }
    }
}

impl From<BlockTag> for BlockSet {
    fn from(tag: BlockTag) -> Self {
        match tag {
            BlockTag::A => BlockSet::A,
            BlockTag::B => BlockSet::B,
        }
    }
}

/// One eigenvalue of `D_n`. `block_multiplicity` is its multiplicity as an
/// eigenvalue of `D_n` (summed over the blocks listed in `blocks`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine {
    pub eigenvalue: f64,
    pub level: usize,
    pub blocks: BlockSet,
    pub block_multiplicity: usize,
    pub total_multiplicity: usize,
}

/// Eigenvalues coinciding across levels, combined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergedLine {
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub levels: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub manifold: Manifold,
    pub metric: Metric,
    pub max_level: usize,
    pub lines: Vec<SpectralLine>,
    pub merge_tolerance: f64,
}

fn coincide(x: f64, y: f64, rel: f64, abs: f64) -> bool {
    (x - y).abs() <= rel * x.abs().max(y.abs()) + abs
}

/// Groups a sorted list of `(value, weight, tag)` into clusters whose members
/// lie within tolerance of the cluster's first member.
fn cluster<T: Copy>(sorted: &[(f64, T)], rel: f64, abs: f64) -> Vec<Vec<(f64, T)>> {
    let mut out: Vec<Vec<(f64, T)>> = Vec::new();
    for &item in sorted {
        match out.last_mut() {
            Some(group) if coincide(group[0].0, item.0, rel, abs) => group.push(item),
            _ => out.push(vec![item]),
        }
    }
    out
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    s / n as f64
}

/// The spectral lines of `D_n`, sorted by eigenvalue.
pub fn level_lines(m: &Metric, n: usize) -> Result<Vec<SpectralLine>> {
    let mut values: Vec<(f64, BlockTag)> = Vec::with_capacity(2 * (n + 1));
    let mut abs_tol: f64 = 0.0;
    for block in build_level(m, n) {
        let tol = default_tol(block.max_abs());
        abs_tol = abs_tol.max(tol);
        values.extend(
            block_eigenvalues(&block, tol)?
                .into_iter()
                .map(|x| (x, block.tag)),
        );
    }
    values.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    Ok(cluster(&values, COINCIDENCE_REL_TOL, 4.0 * abs_tol)
        .into_iter()
        .map(|group| {
            let blocks = group[1..]
                .iter()
                .fold(BlockSet::from(group[0].1), |set, &(_, tag)| set.with(tag));
            SpectralLine {
                eigenvalue: mean(group.iter().map(|x| x.0)),
                level: n,
                blocks,
                block_multiplicity: group.len(),
                total_multiplicity: group.len() * (n + 1),
            }
        })
        .collect())
}

/// Smallest `|λ|` over `D_n`.
pub fn level_min_abs(m: &Metric, n: usize) -> Result<f64> {
    let mut best = f64::INFINITY;
    for block in build_level(m, n) {
        let tol = default_tol(block.max_abs());
        for x in block_eigenvalues(&block, tol)? {
            best = best.min(x.abs());
        }
    }
    Ok(best)
}

pub fn assemble(m: &Metric, manifold: Manifold, max_level: usize) -> Result<Spectrum> {
    let per_level: Vec<Vec<SpectralLine>> = (0..=max_level)
        .into_par_iter()
        .filter(|&n| manifold.admits_level(n))
        .map(|n| level_lines(m, n))
        .collect::<Result<_>>()?;
    let mut lines: Vec<SpectralLine> = per_level.into_iter().flatten().collect();
    lines.sort_by(|x, y| {
        x.eigenvalue
            .total_cmp(&y.eigenvalue)
            .then(x.level.cmp(&y.level))
            .then(x.blocks.cmp(&y.blocks))
    });
    Ok(Spectrum {
        manifold,
        metric: *m,
        max_level,
        lines,
        merge_tolerance: DEFAULT_MERGE_TOL,
    })
}

impl Spectrum {
    pub fn with_merge_tolerance(mut self, tol: f64) -> Self {
        self.merge_tolerance = tol;
        self
    }

    /// Number of eigenvalues counted with multiplicity.
    pub fn total_count(&self) -> usize {
        self.lines.iter().map(|l| l.total_multiplicity).sum()
    }

    /// Lines whose eigenvalues agree within `merge_tolerance` (relative)
    /// combined into one entry each. Raw lines are left untouched.
    pub fn merged(&self) -> Vec<MergedLine> {
        let items: Vec<(f64, usize)> = self
            .lines
            .iter()
            .enumerate()
            .map(|(i, l)| (l.eigenvalue, i))
            .collect();
        let abs = 1e-12
            * (1.0
                + self
                    .lines
                    .iter()
                    .fold(0.0_f64, |s, l| s.max(l.eigenvalue.abs())));
        cluster(&items, self.merge_tolerance, abs)
            .into_iter()
            .map(|group| {
                let mut levels: Vec<usize> =
                    group.iter().map(|&(_, i)| self.lines[i].level).collect();
                levels.sort_unstable();
                levels.dedup();
                MergedLine {
                    eigenvalue: mean(group.iter().map(|x| x.0)),
                    multiplicity: group
                        .iter()
                        .map(|&(_, i)| self.lines[i].total_multiplicity)
                        .sum(),
                    levels,
                }
            })
            .collect()
    }

    /// Smallest `|λ|` and the multiplicity of `λ²` as an eigenvalue of `D²`.
    pub fn min_abs(&self) -> Option<(f64, usize)> {
        let best = self
            .lines
            .iter()
            .map(|l| l.eigenvalue.abs())
            .fold(f64::INFINITY, f64::min);
        if !best.is_finite() {
            return None;
        }
        let abs = 1e-12 * (1.0 + best);
        let mult = self
            .lines
            .iter()
            .filter(|l| coincide(l.eigenvalue.abs(), best, COINCIDENCE_REL_TOL, abs))
            .map(|l| l.total_multiplicity)
            .sum();
        Some((best, mult))
    }

    /// Count of eigenvalues with `|λ| ≤ lambda`, with multiplicity.
    pub fn count_abs_le(&self, lambda: f64) -> usize {
        self.lines
            .iter()
            .filter(|l| l.eigenvalue.abs() <= lambda)
            .map(|l| l.total_multiplicity)
            .sum()
    }

    /// `Σ mult·exp(−t·λ²)` over the lines.
    pub fn heat_sum(&self, t: f64) -> f64 {
        self.lines
            .iter()
            .map(|l| l.total_multiplicity as f64 * (-t * l.eigenvalue * l.eigenvalue).exp())
            .sum()
    }
}

/// The first two levels beyond `max_level` that contribute on `manifold`.
fn next_levels(manifold: Manifold, max_level: usize) -> Vec<usize> {
    (max_level + 1..)
        .filter(|&n| manifold.admits_level(n))
        .take(2)
        .collect()
}

/// Smallest `|λ|` over the two levels following `max_level`. Used as the
/// cutoff below which the truncated spectrum is (empirically) complete.
fn beyond_cutoff(m: &Metric, manifold: Manifold, max_level: usize) -> Result<f64> {
    next_levels(manifold, max_level)
        .into_iter()
        .map(|n| level_min_abs(m, n))
        .try_fold(f64::INFINITY, |acc, x| Ok(acc.min(x?)))
}

// ---------------------------------------------------------------------------
// Heat trace and counting function

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatTrace {
    pub t: f64,
    pub max_level: usize,
    pub value: f64,
    /// Smallest `|λ|` among the first omitted levels.
    pub cutoff: f64,
    /// Weyl-law estimate of the omitted part of the trace.
    pub tail_estimate: f64,
}

/// Weyl estimate of `Σ_{|λ| > cutoff} exp(−tλ²)`: the eigenvalue density of a
/// rank-2 Dirac operator in dimension three is `vol·λ²/π² dλ`, and
/// `∫_L^∞ λ² e^{−tλ²} dλ ≤ e^{−tL²}(L/(2t) + 1/(4t²L))`.
pub fn weyl_tail(volume: f64, t: f64, cutoff: f64) -> f64 {
    let l = cutoff.max(f64::MIN_POSITIVE);
    volume / (PI * PI) * (-t * l * l).exp() * (l / (2.0 * t) + 1.0 / (4.0 * t * t * l))
}

/// Weyl-law count `vol·Λ³/(3π²)` of eigenvalues with `|λ| ≤ Λ`.
pub fn weyl_count(volume: f64, lambda: f64) -> f64 {
    volume * lambda.powi(3) / (3.0 * PI * PI)
}

pub fn heat_trace(m: &Metric, manifold: Manifold, t: f64, max_level: usize) -> Result<HeatTrace> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Precondition(format!(
            "heat-trace time must be positive, got {t}"
        )));
    }
    let spectrum = assemble(m, manifold, max_level)?;
    let cutoff = beyond_cutoff(m, manifold, max_level)?;
    Ok(HeatTrace {
        t,
        max_level,
        value: spectrum.heat_sum(t),
        cutoff,
        tail_estimate: weyl_tail(m.volume(manifold), t, cutoff),
    })
}

/// `(4πt)^{−3/2}(a0 + a1·t + a2·t²)`.
pub fn heat_trace_asymptotic(m: &Metric, manifold: Manifold, t: f64) -> f64 {
    let h = m.heat_invariants(manifold);
    (4.0 * PI * t).powf(-1.5) * (h.a0 + h.a1 * t + h.a2 * t * t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub lambda: f64,
    pub max_level: usize,
    pub count: usize,
    /// Set when an omitted level is known to hold an eigenvalue with `|λ| ≤ Λ`.
    pub truncated: bool,
}

pub fn counting_function(
    m: &Metric,
    manifold: Manifold,
    lambda: f64,
    max_level: usize,
) -> Result<CountReport> {
    if !(lambda > 0.0) {
        return Err(Error::Precondition(format!(
            "counting threshold must be positive, got {lambda}"
        )));
    }
    let spectrum = assemble(m, manifold, max_level)?;
    Ok(CountReport {
        lambda,
        max_level,
        count: spectrum.count_abs_le(lambda),
        truncated: beyond_cutoff(m, manifold, max_level)? <= lambda,
    })
}

// ---------------------------------------------------------------------------
// Smallest eigenvalue and its certification

/// Summary of one family of checks in a certification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepSummary {
    pub step: String,
    pub checks: usize,
    /// Smallest margin over the strict inequalities of the step.
    pub min_margin: f64,
    pub worst_at: Option<(Option<usize>, Option<usize>)>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationTrace {
    pub metric: SortedMetric,
    pub horizon: usize,
    pub steps: Vec<StepSummary>,
    /// Every evaluated (in)equality, tagged with its step. Omitted from
    /// serialized output when cleared.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<(String, InequalityRecord)>,
}

impl CertificationTrace {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.passed)
    }

    pub fn step(&self, name: &str) -> Option<&StepSummary> {
        self.steps.iter().find(|s| s.step == name)
    }

    pub fn find(&self, check: &str) -> Option<&InequalityRecord> {
        self.records
            .iter()
            .map(|(_, r)| r)
            .find(|r| r.check == check)
    }
}

struct TraceBuilder {
    steps: Vec<StepSummary>,
    records: Vec<(String, InequalityRecord)>,
}

impl TraceBuilder {
    fn push_step(&mut self, step: &str, records: Vec<InequalityRecord>) -> Result<()> {
        let mut summary = StepSummary {
            step: step.to_string(),
            checks: records.len(),
            min_margin: f64::INFINITY,
            worst_at: None,
            passed: true,
        };
        for r in &records {
            if r.relation == Relation::Greater && r.margin < summary.min_margin {
                summary.min_margin = r.margin;
                summary.worst_at = Some((r.n, r.k));
            }
        }
        let failure = records.iter().find(|r| !r.passed).cloned();
        summary.passed = failure.is_none();
        self.steps.push(summary);
        self.records
            .extend(records.into_iter().map(|r| (step.to_string(), r)));
        match failure {
            Some(r) => Err(Error::CertificationFailure {
                step: format!("{step}: {}", r.check),
                n: r.n,
                k: r.k,
                margin: r.margin,
            }),
            None => Ok(()),
        }
    }
}

fn poly_eval(coeffs_desc: &[f64], x: f64) -> f64 {
    coeffs_desc.iter().fold(0.0, |acc, c| acc * x + c)
}

fn poly_second_derivative(coeffs_desc: &[f64]) -> Vec<f64> {
    let deg = coeffs_desc.len() - 1;
    coeffs_desc[..deg.saturating_sub(1)]
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let p = (deg - i) as f64;
            c * p * (p - 1.0)
        })
        .collect()
}

/// Replays the argument that the smallest `|λ|` is `μ` on odd levels and `C`
/// on even levels for a metric with `scal > 0`, evaluating every inequality
/// numerically: explicit treatment of levels 0–4, the Gershgorin base cases up
/// to `horizon`, and the triangle increments over the same range.
///
/// The metric is permuted to `a ≥ b ≥ c` first; the permutation is recorded.
pub fn certify_smallest(m: &Metric, horizon: usize) -> Result<CertificationTrace> {
    if m.scal_sign() != ScalSign::Positive {
        return Err(Error::Uncertifiable { scal: m.scal() });
    }
    if horizon < 6 {
        return Err(Error::Precondition(format!(
            "certification horizon must be at least 6, got {horizon}"
        )));
    }
    let sm = SortedMetric::new(m);
    let s = &sm.metric;
    let (a, b, c) = (s.a(), s.b(), s.c());
    let cs = s.c_shift();
    let mu = s.mu();
    let sum_sq = a * a + b * b + c * c;
    let mut tb = TraceBuilder {
        steps: Vec::new(),
        records: Vec::new(),
    };
    fn gt(check: &str, n: Option<usize>, k: Option<usize>, lhs: f64, rhs: f64) -> InequalityRecord {
        InequalityRecord::greater(check, n, k, lhs, rhs)
    }

    // Elementary bounds on C.
    let pair_max = (a * a + b * b).max(b * b + c * c).max(c * c + a * a);
    let [f1, f2, f3] = s.scal_factors();
    tb.push_step(
        "elementary bounds",
        vec![
            gt("C > max(a, b, c)", None, None, cs, a),
            InequalityRecord {
                passed: cs * cs >= pair_max * (1.0 - 1e-12),
                ..gt(
                    "C^2 >= max pairwise sum of squares",
                    None,
                    None,
                    cs * cs,
                    pair_max,
                )
            },
            InequalityRecord {
                passed: 2.0 * cs >= (a + b + c) * (1.0 - 1e-12),
                ..gt("2C >= a + b + c", None, None, 2.0 * cs, a + b + c)
            },
            gt("a^2 + b^2 + c^2 > C^2", None, None, sum_sq, cs * cs),
            gt("mu > 0", None, None, mu, 0.0),
            gt("ab + bc - ca > 0", None, None, f1, 0.0),
            gt("ab - bc + ca > 0", None, None, f2, 0.0),
            gt("-ab + bc + ca > 0", None, None, f3, 0.0),
            gt("a + bc/a > C", None, None, a + b * c / a, cs),
            gt("b + ca/b > C", None, None, b + c * a / b, cs),
            gt("c + ab/c > C", None, None, c + a * b / c, cs),
        ],
    )?;

    // n = 0: D_0 = −C·I on a two-dimensional space.
    let d0: Vec<f64> = build_level(s, 0)
        .iter()
        .flat_map(|blk| blk.diag.clone())
        .collect();
    tb.push_step(
        "level 0",
        d0.iter()
            .map(|&x| InequalityRecord::equal("D_0 eigenvalue = -C", Some(0), None, x, -cs, cs))
            .collect(),
    )?;

    // n = 1: μ is a simple eigenvalue and the other three exceed it in modulus.
    let d1 = closed_form_eigs(s, 1)?;
    let mut level1 = vec![InequalityRecord::equal(
        "first D_1 eigenvalue = mu",
        Some(1),
        None,
        d1[0],
        mu,
        cs,
    )];
    level1.extend(
        d1[1..]
            .iter()
            .map(|x| gt("|D_1 eigenvalue| > mu", Some(1), None, x.abs(), mu)),
    );
    let mut numeric: Vec<f64> = build_level(s, 1)
        .iter()
        .map(|blk| block_eigenvalues(blk, default_tol(blk.max_abs())))
        .collect::<Result<Vec<_>>>()?
        .concat();
    numeric.sort_by(f64::total_cmp);
    let mut closed = d1.clone();
    closed.sort_by(f64::total_cmp);
    let scale1 = 1.0 + closed.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    level1.extend(closed.iter().zip(&numeric).map(|(x, y)| InequalityRecord {
        passed: (x - y).abs() <= 1e-10 * scale1,
        ..InequalityRecord::equal(
            "D_1 closed form = eigensolver",
            Some(1),
            None,
            *y,
            *x,
            scale1,
        )
    }));
    tb.push_step("level 1", level1)?;

    // n = 2: χ₂ is convex on [0, ∞) and negative at 0 and 2C.
    let chi2 = char_poly_small_n(s, 2)?;
    tb.push_step(
        "level 2",
        vec![
            gt("chi_2(0) < 0", Some(2), None, 0.0, poly_eval(&chi2, 0.0)),
            gt(
                "chi_2(2C) < 0",
                Some(2),
                None,
                0.0,
                poly_eval(&chi2, 2.0 * cs),
            ),
        ],
    )?;

    // n = 3: none of the eight explicit eigenvalues lies in [−μ, μ].
    let d3 = closed_form_eigs(s, 3)?;
    tb.push_step(
        "level 3",
        d3.iter()
            .enumerate()
            .map(|(i, x)| {
                gt(
                    &format!("|D_3 eigenvalue {}| > mu", i + 1),
                    Some(3),
                    None,
                    x.abs(),
                    mu,
                )
            })
            .collect(),
    )?;

    // n = 4: χ₄'' is convex and negative on [0, 2C], so χ₄ is concave there,
    // and positive at both ends.
    let chi4 = char_poly_small_n(s, 4)?;
    let chi4_dd = poly_second_derivative(&chi4);
    tb.push_step(
        "level 4",
        vec![
            gt(
                "chi_4''(0) < 0",
                Some(4),
                None,
                0.0,
                poly_eval(&chi4_dd, 0.0),
            ),
            gt(
                "chi_4''(2C) < 0",
                Some(4),
                None,
                0.0,
                poly_eval(&chi4_dd, 2.0 * cs),
            ),
            gt("chi_4(0) > 0", Some(4), None, poly_eval(&chi4, 0.0), 0.0),
            gt(
                "chi_4(2C) > 0",
                Some(4),
                None,
                poly_eval(&chi4, 2.0 * cs),
                0.0,
            ),
        ],
    )?;

    // Base cases of the triangle induction.
    let base = base_cases(s, horizon).map_err(|e| match e {
        Error::BaseCaseFailure { case, n, margin } => Error::CertificationFailure {
            step: format!("base cases: {case}"),
            n: Some(n),
            k: None,
            margin,
        },
        other => other,
    })?;
    tb.push_step("base cases", base.records)?;

    // Triangle induction: G(n+2, k+1) > G(n, k).
    let mut tri = Vec::new();
    for n in 0..=horizon.saturating_sub(2) {
        for k in 0..=n {
            let inc = triangle_increment(&sm, n, k)?;
            let lower = g(&sm, n, k);
            tri.push(InequalityRecord {
                margin: inc,
                ..gt("G(n+2,k+1) > G(n,k)", Some(n), Some(k), lower + inc, lower)
            });
        }
    }
    tb.push_step("triangle induction", tri)?;

    // The resulting bounds: G(n,k) > C² for even n ≥ 6 and > μ² for odd n ≥ 5.
    let mut suff = Vec::new();
    for n in 5..=horizon {
        let (target, name) = if n % 2 == 0 {
            (cs * cs, "G(n,k) > C^2")
        } else {
            (mu * mu, "G(n,k) > mu^2")
        };
        if n % 2 == 0 && n < 6 {
            continue;
        }
        suff.extend((0..=n).map(|k| gt(name, Some(n), Some(k), g(&sm, n, k), target)));
    }
    tb.push_step("gershgorin bounds", suff)?;

    Ok(CertificationTrace {
        metric: sm,
        horizon,
        steps: tb.steps,
        records: tb.records,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallestOptions {
    pub max_level: usize,
    /// Fail with [`Error::Uncertifiable`] instead of returning an uncertified
    /// numerical minimum when `scal ≤ 0`.
    pub require_certificate: bool,
    pub horizon: usize,
}

impl Default for SmallestOptions {
    fn default() -> Self {
        SmallestOptions {
            max_level: DEFAULT_MAX_LEVEL,
            require_certificate: false,
            horizon: DEFAULT_HORIZON,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumeratedMinimum {
    pub value: f64,
    pub multiplicity: usize,
    pub max_level: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallestEigenvalueReport {
    pub manifold: Manifold,
    pub scal: f64,
    pub scal_sign: ScalSign,
    /// Smallest `|λ|`.
    pub value: f64,
    /// Multiplicity of `value²` as an eigenvalue of `D²`.
    pub multiplicity_of_d_squared: usize,
    pub certified: bool,
    /// Minimum found by enumerating levels `0..=max_level`.
    pub enumerated: EnumeratedMinimum,
    pub certification: Option<CertificationTrace>,
}

pub fn smallest(
    m: &Metric,
    manifold: Manifold,
    options: &SmallestOptions,
) -> Result<SmallestEigenvalueReport> {
    let scal = m.scal();
    let sign = m.scal_sign();
    if sign != ScalSign::Positive && options.require_certificate {
        return Err(Error::Uncertifiable { scal });
    }
    let spectrum = assemble(m, manifold, options.max_level)?;
    let (enum_value, enum_mult) = spectrum.min_abs().ok_or_else(|| {
        Error::Precondition(format!(
            "no levels of {} up to {}",
            manifold.as_str(),
            options.max_level
        ))
    })?;
    let enumerated = EnumeratedMinimum {
        value: enum_value,
        multiplicity: enum_mult,
        max_level: options.max_level,
    };

    if sign == ScalSign::Positive {
        let trace = certify_smallest(m, options.horizon)?;
        let (value, multiplicity) = match manifold {
            Manifold::S3 if m.is_round() => (m.mu(), 4),
            Manifold::S3 | Manifold::So3Nontrivial => (m.mu(), 2),
            Manifold::So3Trivial => (m.c_shift(), 2),
        };
        Ok(SmallestEigenvalueReport {
            manifold,
            scal,
            scal_sign: sign,
            value,
            multiplicity_of_d_squared: multiplicity,
            certified: trace.passed(),
            enumerated,
            certification: Some(trace),
        })
    } else {
        Ok(SmallestEigenvalueReport {
            manifold,
            scal,
            scal_sign: sign,
            value: enum_value,
            multiplicity_of_d_squared: enum_mult,
            certified: false,
            enumerated,
            certification: None,
        })
    }
}

/// The smallest eigenvalue of `D_n²` (from the eigensolver) and the smallest
/// Gershgorin row bound. The bound depends on the ordering of `(a, b, c)`
/// while the spectrum does not; it is taken for `a ≥ b ≥ c`.
pub fn level_square_bounds(m: &Metric, n: usize) -> Result<(f64, f64)> {
    let min_abs = level_min_abs(m, n)?;
    let sorted = SortedMetric::new(m).metric;
    Ok((
        min_abs * min_abs,
        crate::gershgorin::min_row_bound(&sorted, n),
    ))
}

/// Exploratory comparison of the characteristic polynomials of the two
/// unshifted blocks for even levels up to `max_level`. Not asserted.
pub fn char_poly_coincidence_log(m: &Metric, max_level: usize) -> Vec<(usize, f64)> {
    (2..=max_level)
        .step_by(2)
        .map(|n| (n, crate::blocks::char_poly_gap(m, n)))
        .collect()
}
