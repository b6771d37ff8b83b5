//! Viability zones and homeostatic indicators.
//!
//! A factor is viable between `x_min` and `x_max`; its values cluster around
//! `μ` with spread `σ`, and `[μ - σ, μ + σ]` is the optimal sub-zone.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::Ratio;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViabilityProfile {
    pub mu: f64,
    pub sigma: f64,
    pub x_min: f64,
    pub x_max: f64,
}

impl ViabilityProfile {
    pub fn new(mu: f64, sigma: f64, x_min: f64, x_max: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::param(format!("σ = {sigma} must be positive")));
        }
        if !(x_max >= x_min) {
            return Err(Error::param(format!(
                "x_max = {x_max} is below x_min = {x_min}"
            )));
        }
        Ok(Self {
            mu,
            sigma,
            x_min,
            x_max,
        })
    }

    /// Width of the viability zone.
    pub fn rx(&self) -> f64 {
        self.x_max - self.x_min
    }

    /// The optimal sub-zone `[μ - σ, μ + σ]`.
    pub fn optimal_zone(&self) -> (f64, f64) {
        (self.mu - self.sigma, self.mu + self.sigma)
    }

    /// Whether the optimal sub-zone lies inside the viability zone.
    pub fn optimal_zone_is_viable(&self) -> bool {
        let (lo, hi) = self.optimal_zone();
        lo >= self.x_min && hi <= self.x_max
    }

    pub fn is_viable(&self, x: f64) -> bool {
        (self.x_min..=self.x_max).contains(&x)
    }
}

/// Gaussian probability density with mean `μ` and deviation `σ`.
pub fn gaussian_tolerance(x: f64, mu: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::param(format!("σ = {sigma} must be positive")));
    }
    let z = (x - mu) / sigma;
    Ok((-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt()))
}

pub fn tolerance(x: f64, profile: &ViabilityProfile) -> Result<f64> {
    gaussian_tolerance(x, profile.mu, profile.sigma)
}

/// Tolerance scaled so that `T(μ) = 1`.
pub fn tolerance_normalized(x: f64, profile: &ViabilityProfile) -> Result<f64> {
    let z = (x - profile.mu) / profile.sigma;
    Ok((-0.5 * z * z).exp())
}

/// Rate of return to `μ` from displacement `x`, taking time `t`.
pub fn resilience(x: f64, mu: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::param(format!("return time {t} must be positive")));
    }
    Ok((x - mu).abs() / t)
}

/// Region inside which a trajectory counts as persisting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Zone {
    Point { at: f64 },
    Interval { lo: f64, hi: f64 },
}

impl Zone {
    pub fn contains(&self, x: f64) -> bool {
        match *self {
            Zone::Point { at } => x == at,
            Zone::Interval { lo, hi } => (lo..=hi).contains(&x),
        }
    }

    pub fn optimal(profile: &ViabilityProfile) -> Self {
        let (lo, hi) = profile.optimal_zone();
        Zone::Interval { lo, hi }
    }
}

/// Longest run of consecutive steps inside the zone.
pub fn persistence(trajectory: &[f64], zone: Zone) -> Result<usize> {
    if trajectory.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut best = 0;
    let mut run = 0;
    for &x in trajectory {
        if zone.contains(x) {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    Ok(best)
}

/// Total number of steps inside the zone.
pub fn persistence_total(trajectory: &[f64], zone: Zone) -> Result<usize> {
    if trajectory.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(trajectory.iter().filter(|&&x| zone.contains(x)).count())
}

/// `|RX| / |μ|`; undefined when `μ = 0`.
pub fn max_resistance(profile: &ViabilityProfile) -> Ratio {
    if profile.mu == 0.0 {
        Ratio::Undefined
    } else {
        Ratio::Finite(profile.rx().abs() / profile.mu.abs())
    }
}

/// `1 / (1 + RX)`.
pub fn vulnerability(rx: f64) -> Result<f64> {
    if !(rx >= 0.0) {
        return Err(Error::param(format!("RX = {rx} must be non-negative")));
    }
    Ok(1.0 / (1.0 + rx))
}

/// Raw indicators of one factor, as fed to [`aggregate_capacity`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Indicators {
    /// Normalized tolerance, already in `[0, 1]`.
    pub tolerance: f64,
    pub resilience: f64,
    pub persistence: f64,
    pub resistance: f64,
    pub vulnerability: f64,
}

/// Weights for tolerance, resilience, persistence, resistance and
/// (inverted) vulnerability, in that order.
pub const EQUAL_WEIGHTS: [f64; 5] = [1.0; 5];

fn min_max(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    values
        .clone()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

/// Batch min-max scaling; a dimension with no spread maps to 0.5.
fn scale(v: f64, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        (v - lo) / (hi - lo)
    } else {
        0.5
    }
}

/// Weighted mean of already normalized indicators, each in `[0, 1]` with
/// larger meaning more capacity.
pub fn capacity_from_normalized(normalized: [f64; 5], weights: [f64; 5]) -> Result<f64> {
    if weights.iter().any(|&w| !(w >= 0.0)) || weights.iter().sum::<f64>() <= 0.0 {
        return Err(Error::param(
            "weights must be non-negative and not all zero",
        ));
    }
    if let Some(&bad) = normalized.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::OutOfRange {
            value: bad,
            range: "[0, 1]",
        });
    }
    let total: f64 = weights.iter().sum();
    Ok(normalized
        .iter()
        .zip(weights)
        .map(|(v, w)| v * w)
        .sum::<f64>()
        / total)
}

/// Homeostatic capacity of every member of a batch. Resilience, persistence,
/// resistance and vulnerability are min-max scaled over the batch and
/// vulnerability is inverted.
pub fn aggregate_capacity(batch: &[Indicators], weights: [f64; 5]) -> Result<Vec<f64>> {
    if batch.is_empty() {
        return Err(Error::InsufficientData("empty indicator batch".into()));
    }
    let rs = min_max(batch.iter().map(|b| b.resilience));
    let pe = min_max(batch.iter().map(|b| b.persistence));
    let re = min_max(batch.iter().map(|b| b.resistance));
    let vu = min_max(batch.iter().map(|b| b.vulnerability));
    batch
        .iter()
        .map(|b| {
            capacity_from_normalized(
                [
                    b.tolerance,
                    scale(b.resilience, rs),
                    scale(b.persistence, pe),
                    scale(b.resistance, re),
                    1.0 - scale(b.vulnerability, vu),
                ],
                weights,
            )
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Growth,
    Stable,
    Degradation,
}

impl Trend {
    pub fn of(rate: f64) -> Self {
        if rate > 0.0 {
            Trend::Growth
        } else if rate < 0.0 {
            Trend::Degradation
        } else {
            Trend::Stable
        }
    }
}

/// Synthesis and degradation rates of nodes (`γ`, `λ`) and edges (`γ'`, `λ'`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepairRates {
    pub gamma: f64,
    pub lambda: f64,
    pub gamma_edge: f64,
    pub lambda_edge: f64,
    /// Degradation order.
    pub order: f64,
}

impl RepairRates {
    pub fn first_order(gamma: f64, lambda: f64, gamma_edge: f64, lambda_edge: f64) -> Self {
        Self {
            gamma,
            lambda,
            gamma_edge,
            lambda_edge,
            order: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("γ", self.gamma),
            ("λ", self.lambda),
            ("γ'", self.gamma_edge),
            ("λ'", self.lambda_edge),
        ] {
            if !(v >= 0.0) {
                return Err(Error::param(format!("{name} = {v} must be non-negative")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Repairability {
    /// Node repair rate `γ - λ`.
    pub rp: f64,
    /// Edge repair rate `γ' - λ'`.
    pub rp_edge: f64,
    /// Mean of the two.
    pub r: f64,
    pub nodes: Trend,
    pub edges: Trend,
    pub network: Trend,
}

/// Closed-form repair rates for first-order degradation.
pub fn repairability(rates: &RepairRates) -> Result<Repairability> {
    rates.validate()?;
    if rates.order != 1.0 {
        return Err(Error::param(format!(
            "closed form needs degradation order 1, got {}; use `euler_step`",
            rates.order
        )));
    }
    let rp = rates.gamma - rates.lambda;
    let rp_edge = rates.gamma_edge - rates.lambda_edge;
    let r = (rp + rp_edge) / 2.0;
    Ok(Repairability {
        rp,
        rp_edge,
        r,
        nodes: Trend::of(rp),
        edges: Trend::of(rp_edge),
        network: Trend::of(r),
    })
}

/// One explicit Euler step of `dN/dt = γN - λN^d`.
pub fn euler_step(n: f64, gamma: f64, lambda: f64, order: f64, dt: f64) -> Result<f64> {
    if !(gamma >= 0.0 && lambda >= 0.0) {
        return Err(Error::param("rates must be non-negative"));
    }
    if !(dt > 0.0) {
        return Err(Error::param(format!("dt = {dt} must be positive")));
    }
    Ok(n + dt * (gamma * n - lambda * n.powf(order)))
}

/// How well a candidate action compensates a violated profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionScore {
    /// Brings the factor back into its viability zone.
    pub restores: bool,
    /// Disturbance caused to other profiles; smaller is better.
    pub side_effect: f64,
}

/// Picks the action that restores viability with the least side effect,
/// falling back to the least disruptive one when none restores. Ties keep
/// the earliest candidate.
pub fn choose_action<A>(actions: &[A], mut evaluate: impl FnMut(&A) -> ActionScore) -> Option<&A> {
    let mut best: Option<(&A, ActionScore)> = None;
    for a in actions {
        let s = evaluate(a);
        let better = match &best {
            None => true,
            Some((_, b)) => {
                (s.restores && !b.restores)
                    || (s.restores == b.restores && s.side_effect < b.side_effect)
            }
        };
        if better {
            best = Some((a, s));
        }
    }
    best.map(|(a, _)| a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(mu: f64, sigma: f64, lo: f64, hi: f64) -> ViabilityProfile {
        ViabilityProfile::new(mu, sigma, lo, hi).unwrap()
    }

    #[test]
    fn tolerance_values() {
        let p = profile(10.0, 2.0, 4.0, 16.0);
        let peak = 1.0 / (2.0 * (2.0 * PI).sqrt());
        assert!((tolerance(10.0, &p).unwrap() - peak).abs() < 1e-15);
        assert!((tolerance(12.0, &p).unwrap() - peak * (-0.5f64).exp()).abs() < 1e-15);
        assert!(tolerance(100.0, &p).unwrap() < 1e-100);
        assert_eq!(tolerance_normalized(10.0, &p).unwrap(), 1.0);
        assert!(gaussian_tolerance(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn profile_validation() {
        assert!(ViabilityProfile::new(0.0, -1.0, 0.0, 1.0).is_err());
        assert!(ViabilityProfile::new(0.0, 1.0, 2.0, 1.0).is_err());
        assert!(profile(5.0, 1.0, 0.0, 10.0).optimal_zone_is_viable());
        assert!(!profile(5.0, 6.0, 0.0, 10.0).optimal_zone_is_viable());
    }

    #[test]
    fn resilience_values() {
        assert_eq!(resilience(3.0, 3.0, 1.0).unwrap(), 0.0);
        assert_eq!(resilience(5.0, 3.0, 4.0).unwrap(), 0.5);
        assert!(resilience(5.0, 3.0, 2.0).unwrap() > resilience(5.0, 3.0, 3.0).unwrap());
        assert!(resilience(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn persistence_values() {
        let zone = Zone::Interval { lo: 0.0, hi: 1.0 };
        assert_eq!(persistence(&[5.0, 6.0], zone).unwrap(), 0);
        assert_eq!(persistence(&[2.0; 7], Zone::Point { at: 2.0 }).unwrap(), 7);
        let mut t = vec![9.0; 10];
        t[3..=7].fill(0.5);
        assert_eq!(persistence(&t, zone).unwrap(), 5);
        t[0] = 0.5;
        assert_eq!(persistence(&t, zone).unwrap(), 5);
        assert_eq!(persistence_total(&t, zone).unwrap(), 6);
        assert!(persistence(&[], zone).is_err());
    }

    #[test]
    fn resistance_and_vulnerability() {
        assert_eq!(
            max_resistance(&profile(2.0, 1.0, 0.0, 2.0)),
            Ratio::Finite(1.0)
        );
        assert_eq!(
            max_resistance(&profile(2.0, 1.0, 1.0, 1.0)),
            Ratio::Finite(0.0)
        );
        assert_eq!(
            max_resistance(&profile(2.0, 1.0, 0.0, 3.0)),
            Ratio::Finite(1.5)
        );
        assert_eq!(
            max_resistance(&profile(-2.0, 1.0, -4.0, -1.0)),
            Ratio::Finite(1.5)
        );
        assert_eq!(
            max_resistance(&profile(0.0, 1.0, -1.0, 1.0)),
            Ratio::Undefined
        );
        assert_eq!(vulnerability(0.0).unwrap(), 1.0);
        assert_eq!(vulnerability(1.0).unwrap(), 0.5);
        assert_eq!(vulnerability(9.0).unwrap(), 0.1);
        assert!(vulnerability(-0.1).is_err());
    }

    fn ind(t: f64, rs: f64, pe: f64, re: f64, vu: f64) -> Indicators {
        Indicators {
            tolerance: t,
            resilience: rs,
            persistence: pe,
            resistance: re,
            vulnerability: vu,
        }
    }

    #[test]
    fn aggregate_extremes_and_mean() {
        let best = ind(1.0, 4.0, 30.0, 2.0, 0.1);
        let worst = ind(0.0, 0.0, 0.0, 0.0, 1.0);
        let mid = ind(0.5, 2.0, 15.0, 1.0, 0.55);
        let caps = aggregate_capacity(&[best, worst, mid], EQUAL_WEIGHTS).unwrap();
        assert_eq!(caps[0], 1.0);
        assert_eq!(caps[1], 0.0);
        assert!((caps[2] - 0.5).abs() < 1e-12);
        assert!(matches!(
            aggregate_capacity(&[], EQUAL_WEIGHTS),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn weighted_capacity() {
        let c =
            capacity_from_normalized([1.0, 0.0, 0.0, 0.0, 0.0], [3.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(c, 0.75);
        assert!(capacity_from_normalized([0.5; 5], [0.0; 5]).is_err());
    }

    #[test]
    fn repairability_classification() {
        let r = repairability(&RepairRates::first_order(0.3, 0.3, 0.1, 0.1)).unwrap();
        assert_eq!((r.rp, r.nodes), (0.0, Trend::Stable));
        let r = repairability(&RepairRates::first_order(0.5, 0.2, 0.0, 0.0)).unwrap();
        assert!(r.rp > 0.0);
        assert_eq!(r.nodes, Trend::Growth);
        let r = repairability(&RepairRates::first_order(0.2, 0.0, 0.0, 0.0)).unwrap();
        assert!((r.r - 0.1).abs() < 1e-15);
        let r = repairability(&RepairRates::first_order(0.0, 0.2, 0.0, 0.0)).unwrap();
        assert_eq!(r.network, Trend::Degradation);
        assert!(repairability(&RepairRates::first_order(-0.1, 0.0, 0.0, 0.0)).is_err());
        let second = RepairRates {
            order: 2.0,
            ..RepairRates::first_order(0.1, 0.1, 0.1, 0.1)
        };
        assert!(repairability(&second).is_err());
    }

    #[test]
    fn euler_matches_first_order_closed_form() {
        let n = euler_step(100.0, 0.3, 0.1, 1.0, 0.5).unwrap();
        assert!((n - (100.0 + 0.5 * 100.0 * 0.2)).abs() < 1e-12);
        // second order: γN - λN² at N = 2
        let n = euler_step(2.0, 1.0, 1.0, 2.0, 1.0).unwrap();
        assert_eq!(n, 0.0);
    }

    #[test]
    fn action_choice_is_lexicographic() {
        let actions = [
            ("cool", false, 0.0),
            ("heat", true, 0.4),
            ("vent", true, 0.1),
        ];
        let pick = choose_action(&actions, |a| ActionScore {
            restores: a.1,
            side_effect: a.2,
        });
        assert_eq!(pick.unwrap().0, "vent");
        let none: [u8; 0] = [];
        assert!(choose_action(&none, |_| ActionScore {
            restores: true,
            side_effect: 0.0
        })
        .is_none());
    }
}
