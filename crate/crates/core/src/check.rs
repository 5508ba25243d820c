//! Rigid-convexity decision: Hermite matrix plus circle PSD test, with a
//! translated base point when the origin lies on the curve.

use serde::Serialize;

use crate::circlepsd::{psd_on_circle, CircleOptions, CircleStatus, CircleVerdict};
use crate::error::{Error, Result};
use crate::hermite::hermite_matrix;
use crate::locate::critical_points;
use crate::polycore::{BivarPoly, TrigMatrix};
use crate::scalar::{rational_approx, rational_to_string, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RigidVerdict {
    RigidlyConvex,
    NotRigidlyConvex,
    Marginal,
    Inconclusive,
}

impl RigidVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            RigidVerdict::RigidlyConvex => "rigidly-convex",
            RigidVerdict::NotRigidlyConvex => "not-rigidly-convex",
            RigidVerdict::Marginal => "marginal",
            RigidVerdict::Inconclusive => "inconclusive",
        }
    }

    fn rank(self) -> u8 {
        match self {
            RigidVerdict::RigidlyConvex => 3,
            RigidVerdict::Marginal => 2,
            RigidVerdict::Inconclusive => 1,
            RigidVerdict::NotRigidlyConvex => 0,
        }
    }
}

impl From<CircleStatus> for RigidVerdict {
    fn from(s: CircleStatus) -> Self {
        match s {
            CircleStatus::PositiveDefinite => RigidVerdict::RigidlyConvex,
            CircleStatus::PositiveSemidefiniteMarginal => RigidVerdict::Marginal,
            CircleStatus::NotPsd => RigidVerdict::NotRigidlyConvex,
            CircleStatus::Inconclusive => RigidVerdict::Inconclusive,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RigidReport {
    pub verdict: RigidVerdict,
    /// Point the lines pass through; the origin unless `p(0) = 0`.
    pub base_point: [f64; 2],
    pub base_point_exact: [String; 2],
    pub circle: CircleVerdict,
    #[serde(skip)]
    pub hermite: TrigMatrix<Rational>,
}

fn check_at(p: &BivarPoly, base: [Rational; 2], opts: &CircleOptions) -> Result<RigidReport> {
    let shifted = p.translate(&base);
    let hermite = hermite_matrix(&shifted)?;
    let circle = psd_on_circle(&hermite, opts);
    Ok(RigidReport {
        verdict: circle.status.into(),
        base_point: [crate::scalar::rational_to_f64(&base[0]), crate::scalar::rational_to_f64(&base[1])],
        base_point_exact: [rational_to_string(&base[0]), rational_to_string(&base[1])],
        circle,
        hermite,
    })
}

/// Decides rigid convexity of the component of `{p > 0}` (or `{p < 0}`)
/// containing the origin. When `p(0) = 0` the lines are taken through the
/// critical points of `p` off the curve, and the most favourable verdict is
/// reported.
pub fn check_rigid(p: &BivarPoly, opts: &CircleOptions) -> Result<RigidReport> {
    let zero = Rational::from_integer(0.into());
    if !p.constant_term().eq(&zero) {
        return check_at(p, [zero.clone(), zero], opts);
    }
    let mut best: Option<RigidReport> = None;
    for c in critical_points(p)? {
        let base = [rational_approx(c.x[0], 1e-10, 1 << 20), rational_approx(c.x[1], 1e-10, 1 << 20)];
        if p.eval(&base) == zero {
            continue;
        }
        let report = check_at(p, base, opts)?;
        if best.as_ref().is_none_or(|b| report.verdict.rank() > b.verdict.rank()) {
            best = Some(report);
        }
    }
    best.ok_or(Error::OriginOnCurve)
}
