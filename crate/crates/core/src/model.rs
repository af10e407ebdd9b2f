//! System parameters, regime classification and the time maps linking TO, TM and TQ.

use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Relative tolerance on |Υ² − 4ω²| used to detect the critical regime.
pub const CRITICAL_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Regime {
    Over,
    Critical,
    Under,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SystemKind {
    TO,
    TM,
    TQ,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::Over, Regime::Critical, Regime::Under];
}

impl Sign {
    pub const ALL: [Sign; 2] = [Sign::Pos, Sign::Neg];

    pub fn of(upsilon: f64) -> Sign {
        if upsilon > 0.0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn factor(self) -> f64 {
        match self {
            Sign::Pos => 1.0,
            Sign::Neg => -1.0,
        }
    }
}

impl SystemKind {
    pub const ALL: [SystemKind; 3] = [SystemKind::TO, SystemKind::TM, SystemKind::TQ];
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Over => "over",
            Regime::Critical => "critical",
            Regime::Under => "under",
        })
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Pos => "pos",
            Sign::Neg => "neg",
        })
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemKind::TO => "to",
            SystemKind::TM => "tm",
            SystemKind::TQ => "tq",
        })
    }
}

impl FromStr for Regime {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "over" => Ok(Regime::Over),
            "critical" | "crit" => Ok(Regime::Critical),
            "under" => Ok(Regime::Under),
            _ => Err(format!("unknown regime '{s}'")),
        }
    }
}

impl FromStr for Sign {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "pos" | "+" => Ok(Sign::Pos),
            "neg" | "-" => Ok(Sign::Neg),
            _ => Err(format!("unknown sign '{s}'")),
        }
    }
}

impl FromStr for SystemKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "to" => Ok(SystemKind::TO),
            "tm" => Ok(SystemKind::TM),
            "tq" => Ok(SystemKind::TQ),
            _ => Err(format!("unknown system '{s}'")),
        }
    }
}

/// How a printed closed form is transcribed: exactly as printed, or with its
/// known misprints repaired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Transcription {
    Verbatim,
    Corrected,
}

/// Physical parameters shared by the three equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub upsilon: f64,
    pub omega: f64,
    pub t0: f64,
    pub regime: Regime,
    pub sign: Sign,
    /// Δ = √|1 − 4ω²/Υ²|, exactly zero in the critical regime.
    pub delta: f64,
}

fn check_params(upsilon: f64, omega: f64) -> Result<()> {
    if !upsilon.is_finite() || upsilon == 0.0 {
        return Err(domain(format!("upsilon must be finite and nonzero, got {upsilon}")));
    }
    if !omega.is_finite() || omega <= 0.0 {
        return Err(domain(format!("omega must be finite and > 0, got {omega}")));
    }
    Ok(())
}

/// Regime and Δ for the pair (Υ, ω).
pub fn classify_regime(upsilon: f64, omega: f64) -> Result<(Regime, f64)> {
    check_params(upsilon, omega)?;
    let u2 = upsilon * upsilon;
    let w4 = 4.0 * omega * omega;
    if (u2 - w4).abs() <= CRITICAL_REL_TOL * u2 {
        return Ok((Regime::Critical, 0.0));
    }
    let delta = (1.0 - w4 / u2).abs().sqrt();
    let regime = if u2 > w4 { Regime::Over } else { Regime::Under };
    Ok((regime, delta))
}

impl SystemSpec {
    pub fn new(upsilon: f64, omega: f64, t0: f64) -> Result<Self> {
        let (regime, delta) = classify_regime(upsilon, omega)?;
        Self::build(upsilon, omega, t0, regime, delta)
    }

    /// Forces the regime. Δ is recomputed, and set to zero when the regime is critical.
    pub fn with_regime(upsilon: f64, omega: f64, t0: f64, regime: Regime) -> Result<Self> {
        check_params(upsilon, omega)?;
        let delta = match regime {
            Regime::Critical => 0.0,
            _ => (1.0 - 4.0 * omega * omega / (upsilon * upsilon)).abs().sqrt(),
        };
        if regime != Regime::Critical && delta == 0.0 {
            return Err(domain("non-critical regime forced with Δ = 0"));
        }
        Self::build(upsilon, omega, t0, regime, delta)
    }

    fn build(upsilon: f64, omega: f64, t0: f64, regime: Regime, delta: f64) -> Result<Self> {
        if !t0.is_finite() {
            return Err(domain("t0 must be finite"));
        }
        Ok(SystemSpec { upsilon, omega, t0, regime, sign: Sign::of(upsilon), delta })
    }

    pub fn abs_upsilon(&self) -> f64 {
        self.upsilon.abs()
    }

    /// Short case label such as `over,pos`.
    pub fn label(&self) -> String {
        format!("{},{}", self.regime, self.sign)
    }
}

/// A time in the native variable of a system, stored as the offset from the
/// reference time: t′ − t₀′ for TO and t − t₀ for TM and TQ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeCoord {
    pub kind: SystemKind,
    pub offset: f64,
}

impl TimeCoord {
    pub fn new(kind: SystemKind, offset: f64) -> Self {
        TimeCoord { kind, offset }
    }

    /// From an absolute native time; the reference time is the spec's `t0`.
    pub fn absolute(spec: &SystemSpec, kind: SystemKind, t: f64) -> Self {
        TimeCoord { kind, offset: t - spec.t0 }
    }

    pub fn shifted(self, dt: f64) -> Self {
        TimeCoord { kind: self.kind, offset: self.offset + dt }
    }

    /// The stricter interval of the physical problem: for TO, t′ − t₀′ ∈ [0, ∞)
    /// when Υ > 0 and [0, 1/|Υ|) when Υ < 0.
    pub fn check_physical(&self, spec: &SystemSpec) -> Result<()> {
        if !self.offset.is_finite() {
            return Err(domain("time must be finite"));
        }
        if self.kind == SystemKind::TO {
            if self.offset < 0.0 {
                return Err(domain(format!(
                    "TO time offset t'-t0' = {} is below the lower bound 0",
                    self.offset
                )));
            }
            if spec.sign == Sign::Neg && self.offset >= 1.0 / spec.abs_upsilon() {
                return Err(domain(format!(
                    "TO time offset t'-t0' = {} must be < 1/|upsilon| = {}",
                    self.offset,
                    1.0 / spec.abs_upsilon()
                )));
            }
        }
        Ok(())
    }
}

/// t′ − t₀′ = (e^{Υ(t−t₀)} − 1)/Υ for the TM/TQ offset `dt`.
pub fn tm_to_to_time(spec: &SystemSpec, dt: f64) -> f64 {
    (spec.upsilon * dt).exp_m1() / spec.upsilon
}

/// Inverse of [`tm_to_to_time`]; requires τ > 0.
pub fn to_to_tm_time(spec: &SystemSpec, dtp: f64) -> Result<f64> {
    let tau = tau_of(spec, dtp)?;
    Ok(tau.ln() / spec.upsilon)
}

/// τ = 1 + Υ(t′ − t₀′).
pub fn tau_of(spec: &SystemSpec, dtp: f64) -> Result<f64> {
    let tau = 1.0 + spec.upsilon * dtp;
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(domain(format!("tau = 1 + upsilon*(t'-t0') = {tau} must be > 0")));
    }
    Ok(tau)
}

/// χ = Υ(t − t₀).
pub fn chi_of(spec: &SystemSpec, dt: f64) -> f64 {
    spec.upsilon * dt
}

/// The natural log-time of a coordinate: ln τ for TO, χ for TM and TQ.
pub fn log_time(spec: &SystemSpec, t: TimeCoord) -> Result<f64> {
    match t.kind {
        SystemKind::TO => Ok(tau_of(spec, t.offset)?.ln()),
        _ => Ok(chi_of(spec, t.offset)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn classify_examples() {
        let (r, d) = classify_regime(5.0, 2.0).unwrap();
        assert_eq!(r, Regime::Over);
        assert!((d - 0.6).abs() < 1e-15);
        assert_eq!(classify_regime(4.0, 2.0).unwrap(), (Regime::Critical, 0.0));
        let (r, d) = classify_regime(3.0, 2.0).unwrap();
        assert_eq!(r, Regime::Under);
        assert!((d - 7f64.sqrt() / 3.0).abs() < 1e-15);
        assert_eq!(classify_regime(-4.0, 2.0).unwrap().0, Regime::Critical);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(classify_regime(0.0, 2.0).is_err());
        assert!(classify_regime(1.0, 0.0).is_err());
        assert!(classify_regime(1.0, -1.0).is_err());
        assert!(SystemSpec::new(f64::NAN, 1.0, 0.0).is_err());
    }

    #[test]
    fn critical_tolerance_is_relative() {
        let w = 2.0 * (1.0 + 1e-14);
        assert_eq!(classify_regime(4.0, w).unwrap().0, Regime::Critical);
        assert_eq!(classify_regime(4.0, 2.0 * (1.0 + 1e-9)).unwrap().0, Regime::Under);
        let s = SystemSpec::with_regime(4.0, 2.0 * (1.0 + 1e-9), 0.0, Regime::Critical).unwrap();
        assert_eq!(s.delta, 0.0);
    }

    #[test]
    fn time_map_examples() {
        let s = SystemSpec::new(5.0, 2.0, 0.0).unwrap();
        assert_eq!(tm_to_to_time(&s, 0.0), 0.0);
        assert!((tm_to_to_time(&s, 2f64.ln() / 5.0) - 0.2).abs() < 1e-15);
        let n = SystemSpec::new(-2.0, 2.0, 0.0).unwrap();
        assert!((tm_to_to_time(&n, 50.0) - 0.5).abs() < 1e-15);
        assert!(tm_to_to_time(&n, 5.0) < 0.5);
        assert!((tau_of(&n, 0.4).unwrap() - 0.2).abs() < 1e-15);
        assert!(tau_of(&n, 0.5).is_err());
        assert_eq!(tau_of(&s, 0.0).unwrap(), 1.0);
        assert_eq!(chi_of(&s, 0.0), 0.0);
    }

    #[test]
    fn physical_interval() {
        let n = SystemSpec::new(-2.0, 2.0, 0.0).unwrap();
        assert!(TimeCoord::new(SystemKind::TO, 0.3).check_physical(&n).is_ok());
        assert!(TimeCoord::new(SystemKind::TO, 0.5).check_physical(&n).is_err());
        assert!(TimeCoord::new(SystemKind::TO, -0.1).check_physical(&n).is_err());
        assert!(TimeCoord::new(SystemKind::TM, -3.0).check_physical(&n).is_ok());
    }

    proptest! {
        #[test]
        fn tau_of_map_is_exp_chi(u in prop_oneof![-6.0f64..-0.1, 0.1f64..6.0], dt in -3.0f64..3.0) {
            let s = SystemSpec::new(u, 1.3, 0.0).unwrap();
            let tau = tau_of(&s, tm_to_to_time(&s, dt)).unwrap();
            let e = chi_of(&s, dt).exp();
            prop_assert!((tau - e).abs() <= 4.0 * f64::EPSILON * e.max(1.0));
        }

        #[test]
        fn time_map_increasing(u in prop_oneof![-6.0f64..-0.1, 0.1f64..6.0], a in -3.0f64..3.0, d in 1e-6f64..1.0) {
            let s = SystemSpec::new(u, 0.7, 0.0).unwrap();
            prop_assert!(tm_to_to_time(&s, a + d) > tm_to_to_time(&s, a));
        }

        #[test]
        fn exactly_one_regime(u in prop_oneof![-20.0f64..-0.01, 0.01f64..20.0], w in 0.01f64..10.0) {
            let (r, d) = classify_regime(u, w).unwrap();
            match r {
                Regime::Over => prop_assert!(d > 0.0 && d < 1.0 && u * u > 4.0 * w * w),
                Regime::Under => prop_assert!(d > 0.0 && u * u < 4.0 * w * w),
                Regime::Critical => prop_assert!(d == 0.0),
            }
        }
    }
}
