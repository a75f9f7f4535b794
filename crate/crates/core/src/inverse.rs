//! Recovery of `(a, b, c)` up to permutation from spectral data.
//!
//! Volume fixes `abc`. With `scal > 0` the smallest `|λ|` (μ on S³ and on
//! SO(3) with the nontrivial spin structure, C with the trivial one) adds
//! enough to pin the elementary symmetric polynomials. With `scal ≤ 0` the
//! curvature combination `ã₂ = 8‖Ric‖² + 7‖Riem‖²` from the second heat
//! invariant is used instead.
//!
//! Notation: `s1, s2, s3` are the elementary symmetric polynomials of
//! `(a, b, c)`, `σ1, σ2, σ3` those of `(a², b², c²)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{Manifold, Metric};

/// Relative slack allowed on the acos argument of the trigonometric cubic
/// solution before the roots are declared complex.
pub const CUBIC_REL_TOL: f64 = 1e-9;

/// `scal` counts as zero below this multiple of `s3^{2/3}`.
pub const SCAL_ZERO_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Discriminator {
    Mu(f64),
    #[serde(rename = "C")]
    C(f64),
    A2Tilde(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionInput {
    pub manifold: Manifold,
    pub volume: f64,
    pub scal: f64,
    pub discriminator: Discriminator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetricBasis {
    /// Elementary symmetric polynomials of `(a, b, c)`.
    Linear,
    /// Elementary symmetric polynomials of `(a², b², c²)`.
    Squared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    PositiveMu,
    PositiveC,
    ZeroScal,
    NegativeScal,
}

/// Relative deviations of the forward-evaluated invariants of the recovered
/// metric from the inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub volume: f64,
    pub scal: f64,
    pub discriminator: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.volume.max(self.scal).max(self.discriminator)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionResult {
    /// `a ≥ b ≥ c`.
    pub triple: [f64; 3],
    pub branch: Branch,
    pub basis: SymmetricBasis,
    pub symmetric: [f64; 3],
    pub residuals: Residuals,
}

impl ReconstructionResult {
    pub fn metric(&self) -> Metric {
        let [a, b, c] = self.triple;
        Metric::new(a, b, c).expect("reconstructed triple is positive")
    }
}

/// Dispatches on the discriminator.
pub fn reconstruct(input: &ReconstructionInput) -> Result<ReconstructionResult> {
    match input.discriminator {
        Discriminator::Mu(_) => reconstruct_positive_mu(input),
        Discriminator::C(_) => reconstruct_positive_c(input),
        Discriminator::A2Tilde(_) => reconstruct_nonpositive(input),
    }
}

fn check_volume(input: &ReconstructionInput) -> Result<()> {
    if input.volume > 0.0 && input.volume.is_finite() && input.scal.is_finite() {
        Ok(())
    } else {
        Err(Error::InconsistentInput(format!(
            "volume must be positive and finite and scal finite, got volume = {}, scal = {}",
            input.volume, input.scal
        )))
    }
}

fn relative(got: f64, want: f64, scale: f64) -> f64 {
    (got - want).abs() / scale
}

fn finish(
    input: &ReconstructionInput,
    triple: [f64; 3],
    branch: Branch,
    basis: SymmetricBasis,
    symmetric: [f64; 3],
) -> Result<ReconstructionResult> {
    let [a, b, c] = triple;
    let m = Metric::new(a, b, c)?;
    let scale = m.as_array().iter().map(|x| x * x).sum::<f64>();
    let discriminator = match input.discriminator {
        Discriminator::Mu(mu) => relative(m.mu(), mu, mu.abs().max(scale.sqrt())),
        Discriminator::C(cs) => relative(m.c_shift(), cs, cs.abs()),
        Discriminator::A2Tilde(t) => {
            relative(m.invariants().a2_tilde, t, t.abs().max(scale * scale))
        }
    };
    Ok(ReconstructionResult {
        triple,
        branch,
        basis,
        symmetric,
        residuals: Residuals {
            volume: relative(m.volume(input.manifold), input.volume, input.volume),
            scal: relative(m.scal(), input.scal, input.scal.abs().max(scale)),
            discriminator,
        },
    })
}

fn sqrt_triple(squares: [f64; 3]) -> [f64; 3] {
    squares.map(f64::sqrt)
}

/// From `(volume, scal, μ)` on S³ or SO(3) with the nontrivial spin structure.
///
/// With `C = s2²/(2 s3) − s1` one has `μ = 2 s1 − s2²/(2 s3)` and
/// `scal = 8(s1² − 2 s2 − C²)`, which combine to `4μ s2²/s3 − 16 s2 − scal = 0`.
pub fn reconstruct_positive_mu(input: &ReconstructionInput) -> Result<ReconstructionResult> {
    let Discriminator::Mu(mu) = input.discriminator else {
        return Err(Error::WrongRegime("expected the mu discriminator".into()));
    };
    if input.manifold == Manifold::So3Trivial {
        return Err(Error::WrongRegime(
            "mu determines the metric only on s3 and so3-nontrivial; use C on so3-trivial".into(),
        ));
    }
    if !(input.scal > 0.0) {
        return Err(Error::WrongRegime(format!(
            "mu reconstruction requires scal > 0, got {}",
            input.scal
        )));
    }
    check_volume(input)?;
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InconsistentInput(format!(
            "mu must be positive, got {mu}"
        )));
    }
    let s3 = input.manifold.unit_volume() / input.volume;
    let alpha = 4.0 * mu / s3;
    // α s2² − 16 s2 − scal = 0; the roots have product −scal/α < 0, so
    // exactly one is positive.
    let disc = 256.0 + 4.0 * alpha * input.scal;
    let s2 = (16.0 + disc.sqrt()) / (2.0 * alpha);
    if !(s2 > 0.0 && s2.is_finite()) {
        return Err(Error::InconsistentInput(
            "no positive solution for s2".into(),
        ));
    }
    let s1 = 0.5 * (mu + s2 * s2 / (2.0 * s3));
    let triple = cubic_positive_roots(s1, s2, s3)?;
    finish(
        input,
        triple,
        Branch::PositiveMu,
        SymmetricBasis::Linear,
        [s1, s2, s3],
    )
}

/// From `(volume, scal, C)` on SO(3) with the trivial spin structure, using
/// `C = σ2/(2√σ3)` and `scal = 8(σ1 − C²)`.
pub fn reconstruct_positive_c(input: &ReconstructionInput) -> Result<ReconstructionResult> {
    let Discriminator::C(cs) = input.discriminator else {
        return Err(Error::WrongRegime("expected the C discriminator".into()));
    };
    if input.manifold != Manifold::So3Trivial {
        return Err(Error::WrongRegime(
            "C is the smallest |eigenvalue| only on so3-trivial; use mu on s3 and so3-nontrivial"
                .into(),
        ));
    }
    if !(input.scal > 0.0) {
        return Err(Error::WrongRegime(format!(
            "C reconstruction requires scal > 0, got {}",
            input.scal
        )));
    }
    check_volume(input)?;
    if !(cs > 0.0 && cs.is_finite()) {
        return Err(Error::InconsistentInput(format!(
            "C must be positive, got {cs}"
        )));
    }
    let root_sigma3 = input.manifold.unit_volume() / input.volume;
    let sigma3 = root_sigma3 * root_sigma3;
    let sigma2 = 2.0 * cs * root_sigma3;
    let sigma1 = input.scal / 8.0 + cs * cs;
    let squares = cubic_positive_roots(sigma1, sigma2, sigma3)?;
    finish(
        input,
        sqrt_triple(squares),
        Branch::PositiveC,
        SymmetricBasis::Squared,
        [sigma1, sigma2, sigma3],
    )
}

/// From `(volume, scal, ã₂)` with `scal ≤ 0`, on any of the three manifolds.
///
/// `Y = (ã₂ − 101 scal²)/576 = 4σ2 − scal·σ1` together with
/// `scal = 8σ1 − 2σ2²/σ3` gives σ2 directly when `scal = 0` and otherwise as
/// the positive root of `(2/σ3)σ2² − (32/scal)σ2 + scal + 8Y/scal = 0`.
pub fn reconstruct_nonpositive(input: &ReconstructionInput) -> Result<ReconstructionResult> {
    let Discriminator::A2Tilde(a2_tilde) = input.discriminator else {
        return Err(Error::WrongRegime(
            "expected the a2tilde discriminator".into(),
        ));
    };
    check_volume(input)?;
    let root_sigma3 = input.manifold.unit_volume() / input.volume;
    let sigma3 = root_sigma3 * root_sigma3;
    let zero_tol = SCAL_ZERO_REL_TOL * root_sigma3.powf(2.0 / 3.0);
    let scal = input.scal;
    if scal > zero_tol {
        return Err(Error::WrongRegime(format!(
            "a2tilde reconstruction requires scal <= 0, got {scal}"
        )));
    }
    let y = (a2_tilde - 101.0 * scal * scal) / 576.0;
    let (branch, sigma1, sigma2) = if scal >= -zero_tol {
        let sigma2 = y / 4.0;
        (Branch::ZeroScal, sigma2 * sigma2 / (4.0 * sigma3), sigma2)
    } else {
        let alpha = 2.0 / sigma3;
        let beta = -32.0 / scal;
        let gamma = scal + 8.0 * y / scal;
        // β > 0, so a positive root exists iff γ < 0; the stable form of
        // (−β + √(β² − 4αγ))/(2α) avoids cancellation.
        if !(gamma < 0.0) {
            return Err(Error::InconsistentInput(
                "no positive solution for sigma2".into(),
            ));
        }
        let sigma2 = -2.0 * gamma / (beta + (beta * beta - 4.0 * alpha * gamma).sqrt());
        (Branch::NegativeScal, (4.0 * sigma2 - y) / scal, sigma2)
    };
    if !(sigma2 > 0.0 && sigma1 > 0.0) {
        return Err(Error::InconsistentInput(format!(
            "symmetric polynomials not positive: sigma1 = {sigma1}, sigma2 = {sigma2}"
        )));
    }
    let squares = cubic_positive_roots(sigma1, sigma2, sigma3)?;
    finish(
        input,
        sqrt_triple(squares),
        branch,
        SymmetricBasis::Squared,
        [sigma1, sigma2, sigma3],
    )
}

fn cubic(s1: f64, s2: f64, s3: f64, t: f64) -> (f64, f64) {
    let value = ((t - s1) * t + s2) * t - s3;
    let slope = (3.0 * t - 2.0 * s1) * t + s2;
    (value, slope)
}

fn polish(s1: f64, s2: f64, s3: f64, mut t: f64) -> f64 {
    let (mut value, _) = cubic(s1, s2, s3, t);
    for _ in 0..8 {
        let (_, slope) = cubic(s1, s2, s3, t);
        if slope == 0.0 || value == 0.0 {
            break;
        }
        let next = t - value / slope;
        let (next_value, _) = cubic(s1, s2, s3, next);
        if !(next_value.abs() < value.abs()) {
            break;
        }
        t = next;
        value = next_value;
    }
    t
}

/// Roots of `t³ − s1·t² + s2·t − s3`, required real and positive, sorted
/// descending.
pub fn cubic_positive_roots(s1: f64, s2: f64, s3: f64) -> Result<[f64; 3]> {
    if !(s1 > 0.0 && s2 > 0.0 && s3 > 0.0) || !(s1.is_finite() && s2.is_finite() && s3.is_finite())
    {
        return Err(Error::InconsistentInput(format!(
            "symmetric polynomials must be positive, got ({s1}, {s2}, {s3})"
        )));
    }
    // t = x + s1/3 gives x³ + p·x + q.
    let shift = s1 / 3.0;
    let p = s2 - s1 * s1 / 3.0;
    let q = -2.0 * s1.powi(3) / 27.0 + s1 * s2 / 3.0 - s3;
    let scale = shift.abs();
    let triple_root = p.abs() <= 1e-12 * scale * scale && q.abs() <= 1e-12 * scale.powi(3);
    // Rounded data near a repeated root can leave the discriminant slightly
    // negative; that is accepted and projected onto the nearest repeated root.
    let disc = -4.0 * p.powi(3) - 27.0 * q * q;
    if !triple_root && disc < -CUBIC_REL_TOL * scale.powi(6) {
        return Err(Error::InconsistentInput(format!(
            "cubic has complex roots (discriminant {disc:e})"
        )));
    }
    let roots = if triple_root || p >= 0.0 {
        [shift; 3]
    } else {
        let r = (-p / 3.0).sqrt();
        let theta = (-q / (2.0 * r * r * r)).clamp(-1.0, 1.0).acos() / 3.0;
        [0, 1, 2].map(|k| {
            polish(
                s1,
                s2,
                s3,
                shift + 2.0 * r * (theta - 2.0 * PI * k as f64 / 3.0).cos(),
            )
        })
    };
    let mut roots = roots;
    roots.sort_by(|x, y| y.total_cmp(x));
    if roots[2] <= 0.0 {
        return Err(Error::InconsistentInput(format!(
            "cubic has a non-positive root {}",
            roots[2]
        )));
    }
    Ok(roots)
}
