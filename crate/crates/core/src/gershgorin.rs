//! Gershgorin lower bounds for the eigenvalues of `D_n²`.
//!
//! The squares of the tridiagonal blocks are pentadiagonal with explicit
//! entries; the left endpoint of each row's Gershgorin interval is a lower
//! bound for the spectrum. With `b ≥ c` the absolute values resolve into two
//! polynomial families `G(n,k)` and `G̃(n,k) = G(n, n−k)`, which grow by a
//! `k`-independent increment along the diagonals `(n,k) → (n+2,k+1)`. The
//! base-case inequalities, together with positivity of that increment, bound
//! every level `n ≥ 5` away from the smallest eigenvalue when `scal > 0`.

use serde::{Deserialize, Serialize};

use crate::blocks::BlockTag;
use crate::error::{Error, Result};
use crate::metric::{Metric, ScalSign};

/// Relative tolerance for the equality checks `G(0,0) = C²`, `G(1,0) = μ²`
/// and for the required margin of strict inequalities.
pub const CHECK_REL_TOL: f64 = 1e-12;

/// Relative tolerance when comparing the triangle increment with its closed form.
pub const INCREMENT_REL_TOL: f64 = 1e-10;

/// A metric permuted so that `a ≥ b ≥ c`. Closed forms below assume this order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SortedMetric {
    pub metric: Metric,
    /// `metric = original.permuted(permutation)`
    pub permutation: [usize; 3],
}

impl SortedMetric {
    pub fn new(m: &Metric) -> Self {
        let (metric, permutation) = m.sorted_desc();
        SortedMetric {
            metric,
            permutation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GVariant {
    G,
    GTilde,
}

/// The five entries of row `k` of `𝒜_n²` or `ℬ_n²`, at columns `k−2..=k+2`.
/// Entries outside `0..=n` come out as zero from the formulas themselves.
pub fn squared_row_entries(m: &Metric, n: usize, tag: BlockTag, k: usize) -> [f64; 5] {
    assert!(k <= n, "row {k} out of range for level {n}");
    let plain = match tag {
        BlockTag::A => k.is_multiple_of(2),
        BlockTag::B => k % 2 == 1,
    };
    // Odd rows of 𝒜 (and even rows of ℬ) use the same formulas with a, b negated.
    let (a, b) = if plain {
        (m.a(), m.b())
    } else {
        (-m.a(), -m.b())
    };
    let c = m.c();
    let cs = m.c_shift();
    let (nf, kf) = (n as f64, k as f64);
    [
        (c - b) * (c + b) * kf * (kf - 1.0),
        -2.0 * (c - b) * (cs + a) * kf,
        (c - b).powi(2) * kf * (nf - kf + 1.0)
            + (a * (nf - 2.0 * kf) - cs).powi(2)
            + (c + b).powi(2) * (nf - kf) * (kf + 1.0),
        -2.0 * (c + b) * (cs - a) * (nf - kf),
        (c + b) * (c - b) * (nf - kf) * (nf - kf - 1.0),
    ]
}

/// Left endpoint of the `k`-th Gershgorin interval of the squared block.
pub fn row_bound(m: &Metric, n: usize, tag: BlockTag, k: usize) -> f64 {
    let e = squared_row_entries(m, n, tag, k);
    e[2] - (e[0].abs() + e[1].abs() + e[3].abs() + e[4].abs())
}

/// Smallest row bound over both blocks of level `n`; every eigenvalue of
/// `D_n²` is at least this.
pub fn min_row_bound(m: &Metric, n: usize) -> f64 {
    BlockTag::BOTH
        .iter()
        .flat_map(|&tag| (0..=n).map(move |k| row_bound(m, n, tag, k)))
        .fold(f64::INFINITY, f64::min)
}

/// `G(n,k)` or `G̃(n,k)` for a metric with `b ≥ c`.
pub fn closed_form_g(sm: &SortedMetric, n: usize, k: usize, variant: GVariant) -> f64 {
    let m = &sm.metric;
    let (a, b, c, cs) = (m.a(), m.b(), m.c(), m.c_shift());
    let (nf, kf) = (n as f64, k as f64);
    let tail = (b * b - c * c) * (kf * (kf - 1.0) + (nf - kf) * (nf - kf - 1.0));
    match variant {
        GVariant::G => {
            (a * (nf - 2.0 * kf) - cs).powi(2)
                + (b - c).powi(2) * kf * (nf - kf + 1.0)
                + (b + c).powi(2) * (nf - kf) * (kf + 1.0)
                - 2.0 * (b - c) * (cs + a) * kf
                - 2.0 * (b + c) * (cs - a) * (nf - kf)
                - tail
        }
        GVariant::GTilde => {
            (a * (nf - 2.0 * kf) + cs).powi(2)
                + (b + c).powi(2) * kf * (nf - kf + 1.0)
                + (b - c).powi(2) * (nf - kf) * (kf + 1.0)
                - 2.0 * (b + c) * (cs - a) * kf
                - 2.0 * (b - c) * (cs + a) * (nf - kf)
                - tail
        }
    }
}

pub fn g(sm: &SortedMetric, n: usize, k: usize) -> f64 {
    closed_form_g(sm, n, k, GVariant::G)
}

/// Which closed form describes row `k` of the given block when `b ≥ c`.
pub fn variant_for_row(tag: BlockTag, k: usize) -> GVariant {
    match (tag, k % 2) {
        (BlockTag::A, 0) | (BlockTag::B, 1) => GVariant::G,
        _ => GVariant::GTilde,
    }
}

/// `4(c²n − bC + ac + b² + c²)`.
pub fn triangle_increment_closed_form(sm: &SortedMetric, n: usize) -> f64 {
    let m = &sm.metric;
    let (a, b, c, cs) = (m.a(), m.b(), m.c(), m.c_shift());
    4.0 * (c * c * n as f64 - b * cs + a * c + b * b + c * c)
}

/// `G(n+2, k+1) − G(n, k)`, checked against its closed form.
pub fn triangle_increment(sm: &SortedMetric, n: usize, k: usize) -> Result<f64> {
    assert!(k <= n, "k = {k} out of range for level {n}");
    let upper = g(sm, n + 2, k + 1);
    let lower = g(sm, n, k);
    let diff = upper - lower;
    let closed = triangle_increment_closed_form(sm, n);
    let scale = upper.abs().max(lower.abs()).max(closed.abs());
    if (diff - closed).abs() > INCREMENT_REL_TOL * scale {
        return Err(Error::Consistency(format!(
            "triangle increment at (n, k) = ({n}, {k}) is {diff}, closed form gives {closed}"
        )));
    }
    Ok(diff)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Equal,
    Greater,
}

/// One numerically evaluated (in)equality `lhs (=|>) rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityRecord {
    pub check: String,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`
    pub margin: f64,
    pub passed: bool,
}

impl InequalityRecord {
    /// `lhs > rhs` with margin above `CHECK_REL_TOL·max(|lhs|, |rhs|)`.
    pub fn greater(
        check: impl Into<String>,
        n: Option<usize>,
        k: Option<usize>,
        lhs: f64,
        rhs: f64,
    ) -> Self {
        let margin = lhs - rhs;
        let scale = lhs.abs().max(rhs.abs());
        InequalityRecord {
            check: check.into(),
            n,
            k,
            relation: Relation::Greater,
            lhs,
            rhs,
            margin,
            passed: margin > CHECK_REL_TOL * scale,
        }
    }

    /// `lhs = rhs` to `CHECK_REL_TOL` relative to `scale`.
    pub fn equal(
        check: impl Into<String>,
        n: Option<usize>,
        k: Option<usize>,
        lhs: f64,
        rhs: f64,
        scale: f64,
    ) -> Self {
        let margin = lhs - rhs;
        InequalityRecord {
            check: check.into(),
            n,
            k,
            relation: Relation::Equal,
            lhs,
            rhs,
            margin,
            passed: margin.abs() <= CHECK_REL_TOL * scale.max(lhs.abs()).max(rhs.abs()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GershgorinTable {
    pub metric: SortedMetric,
    pub level: usize,
    pub g: Vec<f64>,
    pub g_tilde: Vec<f64>,
    /// Direct left endpoints of the rows of `𝒜_n²` and `ℬ_n²`.
    pub row_bounds_a: Vec<f64>,
    pub row_bounds_b: Vec<f64>,
}

impl GershgorinTable {
    pub fn new(m: &Metric, n: usize) -> Self {
        let sm = SortedMetric::new(m);
        let ks = 0..=n;
        GershgorinTable {
            metric: sm,
            level: n,
            g: ks
                .clone()
                .map(|k| closed_form_g(&sm, n, k, GVariant::G))
                .collect(),
            g_tilde: ks
                .clone()
                .map(|k| closed_form_g(&sm, n, k, GVariant::GTilde))
                .collect(),
            row_bounds_a: ks
                .clone()
                .map(|k| row_bound(&sm.metric, n, BlockTag::A, k))
                .collect(),
            row_bounds_b: ks
                .map(|k| row_bound(&sm.metric, n, BlockTag::B, k))
                .collect(),
        }
    }

    pub fn min_bound(&self) -> f64 {
        self.row_bounds_a
            .iter()
            .chain(&self.row_bounds_b)
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseCaseReport {
    pub metric: SortedMetric,
    pub horizon: usize,
    pub records: Vec<InequalityRecord>,
}

impl BaseCaseReport {
    pub fn min_margin(&self) -> f64 {
        self.records
            .iter()
            .filter(|r| r.relation == Relation::Greater)
            .map(|r| r.margin)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates the base cases of the triangle induction up to level `horizon`:
/// `G(0,0) = C²`; `G(n,n) > C²` for `1 ≤ n`; `G(n,0) > C²` for `n ≥ 6`;
/// `G(n,1) > C²` for `n ≥ 4`; `G(1,0) = μ²`; `G(5,0) > μ²`.
pub fn base_cases(m: &Metric, horizon: usize) -> Result<BaseCaseReport> {
    if horizon < 6 {
        return Err(Error::Precondition(format!(
            "base-case horizon must be at least 6, got {horizon}"
        )));
    }
    if m.scal_sign() != ScalSign::Positive {
        return Err(Error::Precondition(format!(
            "base cases require scal > 0, got scal = {:e}",
            m.scal()
        )));
    }
    let sm = SortedMetric::new(m);
    let cs = sm.metric.c_shift();
    let mu = sm.metric.mu();
    let c2 = cs * cs;
    let mu2 = mu * mu;

    let mut records = vec![InequalityRecord::equal(
        "G(0,0) = C^2",
        Some(0),
        Some(0),
        g(&sm, 0, 0),
        c2,
        c2,
    )];
    records
        .extend((1..=horizon).map(|n| {
            InequalityRecord::greater("G(n,n) > C^2", Some(n), Some(n), g(&sm, n, n), c2)
        }));
    records
        .extend((6..=horizon).map(|n| {
            InequalityRecord::greater("G(n,0) > C^2", Some(n), Some(0), g(&sm, n, 0), c2)
        }));
    records
        .extend((4..=horizon).map(|n| {
            InequalityRecord::greater("G(n,1) > C^2", Some(n), Some(1), g(&sm, n, 1), c2)
        }));
    records.push(InequalityRecord::equal(
        "G(1,0) = mu^2",
        Some(1),
        Some(0),
        g(&sm, 1, 0),
        mu2,
        c2,
    ));
    records.push(InequalityRecord::greater(
        "G(5,0) > mu^2",
        Some(5),
        Some(0),
        g(&sm, 5, 0),
        mu2,
    ));

    if let Some(bad) = records.iter().find(|r| !r.passed) {
        return Err(Error::BaseCaseFailure {
            case: bad.check.clone(),
            n: bad.n.unwrap_or(0),
            margin: bad.margin,
        });
    }
    Ok(BaseCaseReport {
        metric: sm,
        horizon,
        records,
    })
}
