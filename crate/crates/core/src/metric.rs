//! Left-invariant metrics `g_abc` on S³ = SU(2) and the closed-form scalar
//! invariants derived from them.
//!
//! A metric is the triple `(a, b, c)` of positive reals such that
//! `{a·i, b·j, c·k}` is orthonormal at the identity. Permuting the triple gives
//! an isometric metric (by an orientation-preserving isometry that descends to
//! SO(3)), so every invariant here is symmetric in `(a, b, c)`. Triples are
//! never silently reordered; [`Metric::sorted_desc`] does it explicitly and
//! reports the permutation.

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used when deciding whether `a = b = c`.
pub const ROUND_REL_TOL: f64 = 1e-12;

/// Complex dimension of the spinor module in dimension three.
pub const SPINOR_DIM: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    a: f64,
    b: f64,
    c: f64,
}

/// The three spin manifolds covered by the crate. SO(3) carries the same
/// metric data for both spin structures; they differ only in which levels
/// contribute to the Dirac spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Manifold {
    #[serde(rename = "s3")]
    S3,
    #[serde(rename = "so3-trivial")]
    So3Trivial,
    #[serde(rename = "so3-nontrivial")]
    So3Nontrivial,
}

impl Manifold {
    pub const ALL: [Manifold; 3] = [Manifold::S3, Manifold::So3Trivial, Manifold::So3Nontrivial];

    pub fn is_quotient(self) -> bool {
        !matches!(self, Manifold::S3)
    }

    /// Whether level `n` contributes to the spectrum: all levels on S³, even
    /// levels for the trivial spin structure on SO(3), odd ones for the other.
    pub fn admits_level(self, n: usize) -> bool {
        match self {
            Manifold::S3 => true,
            Manifold::So3Trivial => n.is_multiple_of(2),
            Manifold::So3Nontrivial => n % 2 == 1,
        }
    }

    /// Volume of the manifold for the metric with `a = b = c = 1`.
    pub fn unit_volume(self) -> f64 {
        if self.is_quotient() {
            PI * PI
        } else {
            2.0 * PI * PI
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Manifold::S3 => "s3",
            Manifold::So3Trivial => "so3-trivial",
            Manifold::So3Nontrivial => "so3-nontrivial",
        }
    }
}

impl std::str::FromStr for Manifold {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "s3" => Ok(Manifold::S3),
            "so3-trivial" => Ok(Manifold::So3Trivial),
            "so3-nontrivial" => Ok(Manifold::So3Nontrivial),
            other => Err(format!(
                "unknown manifold '{other}' (expected s3, so3-trivial or so3-nontrivial)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScalSign {
    Positive,
    Zero,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricInvariants {
    #[serde(rename = "C")]
    pub c_shift: f64,
    pub mu: f64,
    pub scal: f64,
    pub vol_s3: f64,
    pub vol_so3: f64,
    /// Elementary symmetric polynomials in `a, b, c`.
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    /// Elementary symmetric polynomials in `a², b², c²`.
    pub sigma1: f64,
    pub sigma2: f64,
    pub sigma3: f64,
    /// Sectional curvatures of the coordinate planes of the Milnor frame.
    pub k12: f64,
    pub k23: f64,
    pub k31: f64,
    pub ric_norm_sq: f64,
    pub riem_norm_sq: f64,
    /// `‖Ric‖²` and `‖Riem‖²` evaluated a second time from the σ-polynomials.
    pub ric_norm_sq_sigma: f64,
    pub riem_norm_sq_sigma: f64,
    /// `8‖Ric‖² + 7‖Riem‖²`.
    pub a2_tilde: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatInvariants {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub dim_sigma: f64,
}

impl Metric {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(a) && ok(b) && ok(c) {
            Ok(Metric { a, b, c })
        } else {
            Err(Error::Domain { a, b, c })
        }
    }

    pub fn round() -> Self {
        Metric {
            a: 1.0,
            b: 1.0,
            c: 1.0,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// Applies a permutation: entry `i` of the result is entry `perm[i]` of `self`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        let v = self.as_array();
        Metric {
            a: v[perm[0]],
            b: v[perm[1]],
            c: v[perm[2]],
        }
    }

    /// The isometric metric with `a ≥ b ≥ c`, together with the permutation
    /// used (`sorted = self.permuted(perm)`).
    pub fn sorted_desc(&self) -> (Self, [usize; 3]) {
        let v = self.as_array();
        let mut perm = [0, 1, 2];
        perm.sort_by(|&i, &j| v[j].total_cmp(&v[i]).then(i.cmp(&j)));
        (self.permuted(perm), perm)
    }

    pub fn is_round(&self) -> bool {
        self.is_round_within(ROUND_REL_TOL)
    }

    pub fn is_round_within(&self, rel_tol: f64) -> bool {
        let hi = self.a.max(self.b).max(self.c);
        let lo = self.a.min(self.b).min(self.c);
        hi - lo <= rel_tol * hi
    }

    /// `C = (ab/c + bc/a + ca/b) / 2`, the diagonal shift of every block.
    pub fn c_shift(&self) -> f64 {
        let (a, b, c) = (self.a, self.b, self.c);
        0.5 * (a * b / c + b * c / a + c * a / b)
    }

    /// `μ = a + b + c − C`.
    pub fn mu(&self) -> f64 {
        self.a + self.b + self.c - self.c_shift()
    }

    /// The three factors `ab+bc−ca`, `ab−bc+ca`, `−ab+bc+ca` whose product,
    /// times `2(ab+bc+ca)/(abc)²`, is the scalar curvature.
    pub fn scal_factors(&self) -> [f64; 3] {
        let (ab, bc, ca) = (self.a * self.b, self.b * self.c, self.c * self.a);
        [ab + bc - ca, ab - bc + ca, -ab + bc + ca]
    }

    /// Scalar curvature from the factored form (no cancellation near zero).
    pub fn scal(&self) -> f64 {
        let (ab, bc, ca) = (self.a * self.b, self.b * self.c, self.c * self.a);
        let [f1, f2, f3] = self.scal_factors();
        let abc = self.a * self.b * self.c;
        2.0 * (ab + bc + ca) * f1 * f2 * f3 / (abc * abc)
    }

    /// Scalar curvature as `8(a² + b² + c² − C²)`.
    pub fn scal_difference_form(&self) -> f64 {
        let c = self.c_shift();
        8.0 * (self.a * self.a + self.b * self.b + self.c * self.c - c * c)
    }

    /// Sign of the scalar curvature, read off the factored form. `Zero` when the
    /// smallest factor is below `1e-12·(ab + bc + ca)` in absolute value.
    pub fn scal_sign(&self) -> ScalSign {
        let s2 = self.a * self.b + self.b * self.c + self.c * self.a;
        let factors = self.scal_factors();
        let smallest = factors.iter().copied().fold(f64::INFINITY, f64::min);
        // At most one factor can be non-positive: any two of them sum to a
        // positive number.
        if smallest.abs() < 1e-12 * s2 {
            ScalSign::Zero
        } else if smallest > 0.0 {
            ScalSign::Positive
        } else {
            ScalSign::Negative
        }
    }

    pub fn volume(&self, manifold: Manifold) -> f64 {
        manifold.unit_volume() / (self.a * self.b * self.c)
    }

    pub fn sectional_curvatures(&self) -> [f64; 3] {
        let (a2, b2, c2) = (self.a * self.a, self.b * self.b, self.c * self.c);
        let k = |x2: f64, y2: f64, z2: f64| {
            // plane spanned by the x and y directions, z orthogonal
            2.0 * (x2 + y2 - z2) + y2 * z2 / x2 + z2 * x2 / y2 - 3.0 * x2 * y2 / z2
        };
        [k(a2, b2, c2), k(b2, c2, a2), k(c2, a2, b2)]
    }

    pub fn invariants(&self) -> MetricInvariants {
        let (a, b, c) = (self.a, self.b, self.c);
        let c_shift = self.c_shift();
        let [k12, k23, k31] = self.sectional_curvatures();
        let riem_norm_sq = 4.0 * (k12 * k12 + k23 * k23 + k31 * k31);
        let ric_norm_sq = (k12 + k23).powi(2) + (k23 + k31).powi(2) + (k31 + k12).powi(2);

        let (a2, b2, c2) = (a * a, b * b, c * c);
        let sigma1 = a2 + b2 + c2;
        let sigma2 = a2 * b2 + b2 * c2 + c2 * a2;
        let sigma3 = a2 * b2 * c2;
        let [ric_norm_sq_sigma, riem_norm_sq_sigma] = curvature_norms_symmetric(a, b, c);

        MetricInvariants {
            c_shift,
            mu: a + b + c - c_shift,
            scal: self.scal(),
            vol_s3: self.volume(Manifold::S3),
            vol_so3: self.volume(Manifold::So3Trivial),
            s1: a + b + c,
            s2: a * b + b * c + c * a,
            s3: a * b * c,
            sigma1,
            sigma2,
            sigma3,
            k12,
            k23,
            k31,
            ric_norm_sq,
            riem_norm_sq,
            ric_norm_sq_sigma,
            riem_norm_sq_sigma,
            a2_tilde: 8.0 * ric_norm_sq + 7.0 * riem_norm_sq,
        }
    }

    /// Heat invariants `a0, a1, a2` of `D²`; every integrand is constant.
    pub fn heat_invariants(&self, manifold: Manifold) -> HeatInvariants {
        let inv = self.invariants();
        let vol = self.volume(manifold);
        let scal = inv.scal;
        HeatInvariants {
            a0: SPINOR_DIM * vol,
            a1: -(SPINOR_DIM / 12.0) * scal * vol,
            a2: (SPINOR_DIM / 1440.0) * (5.0 * scal * scal - inv.a2_tilde) * vol,
            dim_sigma: SPINOR_DIM,
        }
    }
}

/// `‖Ric‖²` and `‖Riem‖²` as polynomials in `σ1, σ2, σ2²/σ3`. The terms
/// cancel heavily for elongated metrics, so the polynomials are evaluated in
/// exact rational arithmetic on the (exactly representable) inputs and
/// rounded once.
fn curvature_norms_symmetric(a: f64, b: f64, c: f64) -> [f64; 2] {
    let exact = |x: f64| BigRational::from_float(x).expect("finite metric entry");
    let int = |k: i64| BigRational::from_integer(k.into());
    let (a2, b2, c2) = (exact(a).pow(2), exact(b).pow(2), exact(c).pow(2));
    let sigma1 = &a2 + &b2 + &c2;
    let sigma2 = &a2 * &b2 + &b2 * &c2 + &c2 * &a2;
    let sigma3 = &a2 * &b2 * &c2;
    let q = &sigma2 * &sigma2 / &sigma3;
    let s11 = &sigma1 * &sigma1;
    let s1q = &sigma1 * &q;
    let qq = &q * &q;
    let ric = int(64) * &s11 - int(64) * &s1q + int(12) * &qq + int(64) * &sigma2;
    let riem = int(192) * &s11 - int(224) * &s1q + int(44) * &qq + int(256) * &sigma2;
    [ric, riem].map(|x| x.to_f64().expect("finite curvature norm"))
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}
