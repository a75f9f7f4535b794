mod common;

use common::{metric_with_sign, rng, zero_scal_metric};
use proptest::prelude::*;
use s3dirac::error::Error;
use s3dirac::inverse::{
    cubic_positive_roots, reconstruct, Branch, Discriminator, ReconstructionInput,
};
use s3dirac::metric::{Manifold, Metric, ScalSign};

/// Spectral data of `m` as the reconstruction expects it for `manifold`.
fn forward(m: &Metric, manifold: Manifold) -> ReconstructionInput {
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
}

fn assert_recovers(m: &Metric, manifold: Manifold, branch: Branch) {
    let r = reconstruct(&forward(m, manifold)).unwrap();
    assert_eq!(r.branch, branch, "{m}");
    let want = m.sorted_desc().0.as_array();
    for (x, y) in r.triple.iter().zip(want) {
        assert!((x - y).abs() <= 1e-8 * y, "{m}: {:?}", r.triple);
    }
    assert!(r.residuals.max() < 1e-8, "{m}: {:?}", r.residuals);
}

fn triple() -> impl Strategy<Value = [f64; 3]> {
    [-1.5f64..1.5, -1.5f64..1.5, -1.5f64..1.5].prop_map(|v| v.map(f64::exp))
}

proptest! {
    #[test]
    fn cubic_recovers_its_roots(t in triple()) {
        let [x, y, z] = t;
        let mut want = t;
        want.sort_by(|p, q| q.total_cmp(p));
        let roots = cubic_positive_roots(x + y + z, x * y + y * z + z * x, x * y * z).unwrap();
        let gap = (want[0] - want[1]).min(want[1] - want[2]) / want[0];
        prop_assume!(gap > 1e-3);
        for (r, w) in roots.iter().zip(want) {
            prop_assert!((r - w).abs() <= 1e-10 * w, "{roots:?} vs {want:?}");
        }
    }
}

#[test]
fn round_trips_in_each_regime() {
    let mut r = rng(41);
    for i in 0..300 {
        let m = metric_with_sign(&mut r, ScalSign::Positive);
        let manifold = if i % 2 == 0 {
            Manifold::S3
        } else {
            Manifold::So3Nontrivial
        };
        assert_recovers(&m, manifold, Branch::PositiveMu);
        assert_recovers(&m, Manifold::So3Trivial, Branch::PositiveC);
        let m = metric_with_sign(&mut r, ScalSign::Negative);
        assert_recovers(&m, Manifold::ALL[i % 3], Branch::NegativeScal);
        let m = zero_scal_metric(&mut r);
        assert_recovers(&m, Manifold::ALL[i % 3], Branch::ZeroScal);
    }
}

/// The quadratic for `s2` has exactly one positive root: the product of its
/// roots is `−scal·s3/(4μ) < 0`.
#[test]
fn mu_quadratic_has_one_positive_root() {
    let mut r = rng(42);
    for _ in 0..200 {
        let m = metric_with_sign(&mut r, ScalSign::Positive);
        let inv = m.invariants();
        let (alpha, beta, gamma) = (4.0 * inv.mu / inv.s3, -16.0, -inv.scal);
        let disc = (beta * beta - 4.0 * alpha * gamma).sqrt();
        let roots = [
            (-beta + disc) / (2.0 * alpha),
            (-beta - disc) / (2.0 * alpha),
        ];
        assert_eq!(roots.iter().filter(|&&x| x > 0.0).count(), 1);
        assert!((roots[0] - inv.s2).abs() <= 1e-10 * inv.s2);
    }
}

#[test]
fn regimes_are_gated() {
    let pos = Metric::new(2.0, 1.0, 1.0).unwrap();
    let neg = Metric::new(1.0, 1.0, 0.4).unwrap();
    let mut input = forward(&neg, Manifold::S3);
    input.discriminator = Discriminator::Mu(1.0);
    assert!(matches!(reconstruct(&input), Err(Error::WrongRegime(_))));
    input.discriminator = Discriminator::C(1.0);
    input.manifold = Manifold::So3Trivial;
    assert!(matches!(reconstruct(&input), Err(Error::WrongRegime(_))));
    let mut input = forward(&pos, Manifold::S3);
    input.discriminator = Discriminator::A2Tilde(pos.invariants().a2_tilde);
    assert!(matches!(reconstruct(&input), Err(Error::WrongRegime(_))));
}

#[test]
fn inconsistent_data_is_rejected() {
    let vol = 2.0 * std::f64::consts::PI.powi(2);
    let bad = |scal: f64, d: Discriminator, manifold: Manifold| {
        reconstruct(&ReconstructionInput {
            manifold,
            volume: vol,
            scal,
            discriminator: d,
        })
    };
    assert!(matches!(
        bad(6.0, Discriminator::Mu(100.0), Manifold::S3),
        Err(Error::InconsistentInput(_))
    ));
    // σ1 = scal/8 + C² would need to dominate σ2, σ3; a tiny C cannot.
    assert!(matches!(
        bad(0.1, Discriminator::C(0.01), Manifold::So3Trivial),
        Err(Error::InconsistentInput(_))
    ));
    assert!(matches!(
        bad(-1.0, Discriminator::A2Tilde(0.0), Manifold::S3),
        Err(Error::InconsistentInput(_))
    ));
    assert!(matches!(
        bad(6.0, Discriminator::Mu(1.5), Manifold::S3).map(|r| r.branch),
        Ok(Branch::PositiveMu)
    ));
    assert!(reconstruct(&ReconstructionInput {
        manifold: Manifold::S3,
        volume: -1.0,
        scal: 6.0,
        discriminator: Discriminator::Mu(1.5),
    })
    .is_err());
}
