//! The time-dependent function bundles for TO (functions of τ), TM (functions of χ)
//! and TQ (the TM bundle plus Ξ_P, Ξ_X and the C₃ coefficients).
//!
//! Every one of the 18 (system, regime, sign) cases has its own evaluator in a
//! static registry. Dotted quantities are derivatives with respect to t′, also in
//! the TM bundle; for TM, d/dt = e^χ d/dt′.

use crate::error::{Error, Result};
use crate::model::{chi_of, tau_of, Regime, Sign, SystemKind, SystemSpec, TimeCoord};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Case {
    pub kind: SystemKind,
    pub regime: Regime,
    pub sign: Sign,
}

impl Case {
    pub fn of(spec: &SystemSpec, kind: SystemKind) -> Case {
        Case { kind, regime: spec.regime, sign: spec.sign }
    }

    pub fn all() -> Vec<Case> {
        let mut v = Vec::with_capacity(18);
        for kind in SystemKind::ALL {
            for regime in Regime::ALL {
                for sign in Sign::ALL {
                    v.push(Case { kind, regime, sign });
                }
            }
        }
        v
    }

    pub fn label(&self) -> String {
        format!("{},{},{}", self.kind, self.regime, self.sign)
    }
}

impl std::str::FromStr for Case {
    type Err = String;
    /// Parses labels such as `tm,under,pos`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        match parts.as_slice() {
            [k, r, g] => Ok(Case { kind: k.parse()?, regime: r.parse()?, sign: g.parse()? }),
            _ => Err(format!("case '{s}' is not of the form system,regime,sign")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TqFunctions {
    pub xi_p: C64,
    pub xi_x: C64,
    pub xi_p_bar: C64,
    pub xi_x_bar: C64,
    pub c3_t: f64,
    pub c3_d: f64,
    pub c3_x2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeFunctions {
    pub case: Case,
    pub t: TimeCoord,
    /// ln τ for TO, χ for TM and TQ.
    pub log_time: f64,
    pub xi: C64,
    pub xi_bar: C64,
    pub xi_dot: C64,
    pub xi_bar_dot: C64,
    pub phi1: C64,
    pub phi1_dot: C64,
    pub phi2: C64,
    pub phi2_dot: C64,
    pub phi3: f64,
    pub phi3_dot: f64,
    pub phi3_ddot: f64,
    /// Continuous argument of ξ (unwrapped along time).
    pub xi_arg: f64,
    pub tq: Option<TqFunctions>,
}

/// (u, v, arg u) used to build generators and states: (ξ, ξ̇) for TO and TM,
/// (Ξ_P, Ξ_X) for TQ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatePair {
    pub u: C64,
    pub v: C64,
    pub arg: f64,
}

impl TimeFunctions {
    pub fn state_pair(&self) -> StatePair {
        match &self.tq {
            Some(q) => StatePair { u: q.xi_p, v: q.xi_x, arg: self.xi_arg },
            None => StatePair { u: self.xi, v: self.xi_dot, arg: self.xi_arg },
        }
    }
}

struct Params {
    u: f64,
    a: f64,
    d: f64,
}

struct Row {
    xi: C64,
    xi_dot: C64,
    phi1: C64,
    phi1_dot: C64,
    phi3: f64,
    phi3_dot: f64,
    phi3_ddot: f64,
    arg: f64,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn cis(x: f64) -> C64 {
    C64::from_polar(1.0, x)
}

// TO bundle: functions of τ, ℓ = ln τ.

fn b1_over_pos(p: &Params, tau: f64) -> Row {
    let (u, d) = (p.u, p.d);
    let l = tau.ln();
    let (em, ep) = ((-d / 2.0 * l).exp(), (d / 2.0 * l).exp());
    let (e_m, e_p) = ((-d * l).exp(), (d * l).exp());
    let st = tau.sqrt();
    Row {
        xi: (1.0 / (2.0 * u * d)).sqrt() * st * c(em, ep),
        xi_dot: (u / (8.0 * d)).sqrt() / st * c((1.0 - d) * em, (1.0 + d) * ep),
        phi3: tau / (u * d) * (e_m + e_p),
        phi3_dot: ((1.0 - d) * e_m + (1.0 + d) * e_p) / d,
        phi3_ddot: u / tau * (-(1.0 - d) * e_m + (1.0 + d) * e_p),
        phi1: tau / (2.0 * u * d) * c(e_m - e_p, 2.0),
        phi1_dot: c((1.0 - d) * e_m - (1.0 + d) * e_p, 2.0) / (2.0 * d),
        arg: ep.atan2(em),
    }
}

fn b1_over_neg(p: &Params, tau: f64) -> Row {
    let (a, d) = (p.a, p.d);
    let l = tau.ln();
    let (em, ep) = ((-d / 2.0 * l).exp(), (d / 2.0 * l).exp());
    let (e_m, e_p) = ((-d * l).exp(), (d * l).exp());
    let st = tau.sqrt();
    Row {
        xi: (1.0 / (2.0 * a * d)).sqrt() * st * c(em, -ep),
        xi_dot: -(a / (8.0 * d)).sqrt() / st * c((1.0 - d) * em, -(1.0 + d) * ep),
        phi3: tau / (a * d) * (e_m + e_p),
        phi3_dot: -((1.0 - d) * e_m + (1.0 + d) * e_p) / d,
        phi3_ddot: a / tau * (-(1.0 - d) * e_m + (1.0 + d) * e_p),
        phi1: tau / (2.0 * a * d) * c(e_m - e_p, -2.0),
        phi1_dot: -c((1.0 - d) * e_m - (1.0 + d) * e_p, -2.0) / (2.0 * d),
        arg: -ep.atan2(em),
    }
}

fn b1_critical_pos(p: &Params, tau: f64) -> Row {
    let u = p.u;
    let l = tau.ln();
    let st = tau.sqrt();
    Row {
        xi: (1.0 / (2.0 * u)).sqrt() * st * c(1.0, l),
        xi_dot: (u / 2.0).sqrt() / st * c(0.5, 1.0 + 0.5 * l),
        phi3: tau / u * (1.0 + l * l),
        phi3_dot: (1.0 + l) * (1.0 + l),
        phi3_ddot: 2.0 * u / tau * (1.0 + l),
        phi1: tau / (2.0 * u) * c(1.0 - l * l, 2.0 * l),
        phi1_dot: 0.5 * c(1.0 - l * l - 2.0 * l, 2.0 * (1.0 + l)),
        arg: l.atan(),
    }
}

fn b1_critical_neg(p: &Params, tau: f64) -> Row {
    let a = p.a;
    let l = tau.ln();
    let st = tau.sqrt();
    Row {
        xi: (1.0 / (2.0 * a)).sqrt() * st * c(1.0, -l),
        xi_dot: -(a / 2.0).sqrt() / st * c(0.5, -(1.0 + 0.5 * l)),
        phi3: tau / a * (1.0 + l * l),
        phi3_dot: -(1.0 + l) * (1.0 + l),
        phi3_ddot: 2.0 * a / tau * (1.0 + l),
        phi1: tau / (2.0 * a) * c(1.0 - l * l, -2.0 * l),
        phi1_dot: -0.5 * c(1.0 - l * l - 2.0 * l, -2.0 * (1.0 + l)),
        arg: -l.atan(),
    }
}

fn b1_under_pos(p: &Params, tau: f64) -> Row {
    let (u, d) = (p.u, p.d);
    let l = tau.ln();
    let st = tau.sqrt();
    Row {
        xi: (1.0 / (u * d)).sqrt() * st * cis(d / 2.0 * l),
        xi_dot: (u / (4.0 * d)).sqrt() * c(1.0, d) / st * cis(d / 2.0 * l),
        phi3: 2.0 / (u * d) * tau,
        phi3_dot: 2.0 / d,
        phi3_ddot: 0.0,
        phi1: tau / (u * d) * cis(d * l),
        phi1_dot: c(1.0, d) / d * cis(d * l),
        arg: d / 2.0 * l,
    }
}

fn b1_under_neg(p: &Params, tau: f64) -> Row {
    let (a, d) = (p.a, p.d);
    let l = tau.ln();
    let st = tau.sqrt();
    Row {
        xi: (1.0 / (a * d)).sqrt() * st * cis(-d / 2.0 * l),
        xi_dot: -(a / (4.0 * d)).sqrt() * c(1.0, -d) / st * cis(-d / 2.0 * l),
        phi3: 2.0 / (a * d) * tau,
        phi3_dot: -2.0 / d,
        phi3_ddot: 0.0,
        phi1: tau / (a * d) * cis(-d * l),
        phi1_dot: -c(1.0, -d) / d * cis(-d * l),
        arg: -d / 2.0 * l,
    }
}

// TM bundle: functions of χ.

fn b2_over_pos(p: &Params, x: f64) -> Row {
    let (u, d) = (p.u, p.d);
    let (em, ep) = ((-d / 2.0 * x).exp(), (d / 2.0 * x).exp());
    let (e_m, e_p) = ((-d * x).exp(), (d * x).exp());
    Row {
        xi: (1.0 / (2.0 * u * d)).sqrt() * (x / 2.0).exp() * c(em, ep),
        xi_dot: (u / (8.0 * d)).sqrt() * (-x / 2.0).exp() * c((1.0 - d) * em, (1.0 + d) * ep),
        phi3: x.exp() / (u * d) * (e_m + e_p),
        phi3_dot: ((1.0 - d) * e_m + (1.0 + d) * e_p) / d,
        phi3_ddot: u * (-x).exp() * (-(1.0 - d) * e_m + (1.0 + d) * e_p),
        phi1: x.exp() / (2.0 * u * d) * c(e_m - e_p, 2.0),
        phi1_dot: c((1.0 - d) * e_m - (1.0 + d) * e_p, 2.0) / (2.0 * d),
        arg: ep.atan2(em),
    }
}

fn b2_over_neg(p: &Params, x: f64) -> Row {
    let (a, d) = (p.a, p.d);
    let (em, ep) = ((-d / 2.0 * x).exp(), (d / 2.0 * x).exp());
    let (e_m, e_p) = ((-d * x).exp(), (d * x).exp());
    Row {
        xi: (1.0 / (2.0 * a * d)).sqrt() * (x / 2.0).exp() * c(em, -ep),
        xi_dot: -(a / (8.0 * d)).sqrt() * (-x / 2.0).exp() * c((1.0 - d) * em, -(1.0 + d) * ep),
        phi3: x.exp() / (a * d) * (e_m + e_p),
        phi3_dot: -((1.0 - d) * e_m + (1.0 + d) * e_p) / d,
        phi3_ddot: a * (-x).exp() * (-(1.0 - d) * e_m + (1.0 + d) * e_p),
        phi1: x.exp() / (2.0 * a * d) * c(e_m - e_p, -2.0),
        phi1_dot: -c((1.0 - d) * e_m - (1.0 + d) * e_p, -2.0) / (2.0 * d),
        arg: -ep.atan2(em),
    }
}

fn b2_critical_pos(p: &Params, x: f64) -> Row {
    let u = p.u;
    Row {
        xi: (1.0 / (2.0 * u)).sqrt() * (x / 2.0).exp() * c(1.0, x),
        xi_dot: (u / 2.0).sqrt() * (-x / 2.0).exp() * c(0.5, 1.0 + 0.5 * x),
        phi3: x.exp() / u * (1.0 + x * x),
        phi3_dot: (1.0 + x) * (1.0 + x),
        phi3_ddot: 2.0 * u * (-x).exp() * (1.0 + x),
        phi1: x.exp() / (2.0 * u) * c(1.0 - x * x, 2.0 * x),
        phi1_dot: 0.5 * c(1.0 - x * x - 2.0 * x, 2.0 * (1.0 + x)),
        arg: x.atan(),
    }
}

fn b2_critical_neg(p: &Params, x: f64) -> Row {
    let a = p.a;
    Row {
        xi: (1.0 / (2.0 * a)).sqrt() * (x / 2.0).exp() * c(1.0, -x),
        xi_dot: -(a / 2.0).sqrt() * (-x / 2.0).exp() * c(0.5, -(1.0 + 0.5 * x)),
        phi3: x.exp() / a * (1.0 + x * x),
        phi3_dot: -(1.0 + x) * (1.0 + x),
        phi3_ddot: 2.0 * a * (-x).exp() * (1.0 + x),
        phi1: x.exp() / (2.0 * a) * c(1.0 - x * x, -2.0 * x),
        phi1_dot: -0.5 * c(1.0 - x * x - 2.0 * x, -2.0 * (1.0 + x)),
        arg: -x.atan(),
    }
}

fn b2_under_pos(p: &Params, x: f64) -> Row {
    let (u, d) = (p.u, p.d);
    Row {
        xi: (1.0 / (u * d)).sqrt() * (x / 2.0).exp() * cis(d / 2.0 * x),
        xi_dot: (u / (4.0 * d)).sqrt() * c(1.0, d) * (-x / 2.0).exp() * cis(d / 2.0 * x),
        phi3: 2.0 / (u * d) * x.exp(),
        phi3_dot: 2.0 / d,
        phi3_ddot: 0.0,
        phi1: x.exp() / (u * d) * cis(d * x),
        phi1_dot: c(1.0, d) / d * cis(d * x),
        arg: d / 2.0 * x,
    }
}

fn b2_under_neg(p: &Params, x: f64) -> Row {
    let (a, d) = (p.a, p.d);
    Row {
        xi: (1.0 / (a * d)).sqrt() * (x / 2.0).exp() * cis(-d / 2.0 * x),
        xi_dot: -(a / (4.0 * d)).sqrt() * c(1.0, -d) * (-x / 2.0).exp() * cis(-d / 2.0 * x),
        phi3: 2.0 / (a * d) * x.exp(),
        phi3_dot: -2.0 / d,
        phi3_ddot: 0.0,
        phi1: x.exp() / (a * d) * cis(-d * x),
        phi1_dot: -c(1.0, -d) / d * cis(-d * x),
        arg: -d / 2.0 * x,
    }
}

// TQ-specific functions of χ.

fn tq(xi_p: C64, xi_x: C64, c3_t: f64, c3_d: f64, c3_x2: f64) -> TqFunctions {
    TqFunctions { xi_p, xi_x, xi_p_bar: xi_p.conj(), xi_x_bar: xi_x.conj(), c3_t, c3_d, c3_x2 }
}

fn b3_over_pos(p: &Params, x: f64) -> TqFunctions {
    let (u, d) = (p.u, p.d);
    let (em, ep) = ((-d / 2.0 * x).exp(), (d / 2.0 * x).exp());
    let (e_m, e_p) = ((-d * x).exp(), (d * x).exp());
    tq(
        (1.0 / (2.0 * u * d)).sqrt() * c(em, ep),
        (u / (8.0 * d)).sqrt() * c((1.0 - d) * em, (1.0 + d) * ep),
        (e_m + e_p) / (u * d),
        0.5 * (-e_m + e_p),
        -u / 4.0 * (-(1.0 - d) * e_m + (1.0 + d) * e_p),
    )
}

fn b3_over_neg(p: &Params, x: f64) -> TqFunctions {
    let (a, d) = (p.a, p.d);
    let (em, ep) = ((-d / 2.0 * x).exp(), (d / 2.0 * x).exp());
    let (e_m, e_p) = ((-d * x).exp(), (d * x).exp());
    tq(
        (1.0 / (2.0 * a * d)).sqrt() * c(em, -ep),
        -(a / (8.0 * d)).sqrt() * c((1.0 - d) * em, -(1.0 + d) * ep),
        (e_m + e_p) / (a * d),
        0.5 * (e_m - e_p),
        -a / 4.0 * (-(1.0 - d) * e_m + (1.0 + d) * e_p),
    )
}

fn b3_critical_pos(p: &Params, x: f64) -> TqFunctions {
    let u = p.u;
    tq(
        (1.0 / (2.0 * u)).sqrt() * c(1.0, x),
        (u / 2.0).sqrt() * c(0.5, 1.0 + 0.5 * x),
        (1.0 + x * x) / u,
        x,
        -u / 2.0 * (1.0 + x),
    )
}

fn b3_critical_neg(p: &Params, x: f64) -> TqFunctions {
    let a = p.a;
    tq(
        (1.0 / (2.0 * a)).sqrt() * c(1.0, -x),
        -(a / 2.0).sqrt() * c(0.5, -(1.0 + 0.5 * x)),
        (1.0 + x * x) / a,
        -x,
        -a / 2.0 * (1.0 + x),
    )
}

fn b3_under_pos(p: &Params, x: f64) -> TqFunctions {
    let (u, d) = (p.u, p.d);
    tq(
        (1.0 / (u * d)).sqrt() * cis(d / 2.0 * x),
        (u / (4.0 * d)).sqrt() * c(1.0, d) * cis(d / 2.0 * x),
        2.0 / (u * d),
        0.0,
        0.0,
    )
}

fn b3_under_neg(p: &Params, x: f64) -> TqFunctions {
    let (a, d) = (p.a, p.d);
    tq(
        (1.0 / (a * d)).sqrt() * cis(-d / 2.0 * x),
        -(a / (4.0 * d)).sqrt() * c(1.0, -d) * cis(-d / 2.0 * x),
        2.0 / (a * d),
        0.0,
        0.0,
    )
}

type RowFn = fn(&Params, f64) -> Row;
type TqFn = fn(&Params, f64) -> TqFunctions;

/// One registry entry: the table row for the shared functions and, for TQ,
/// the TQ row.
pub struct Entry {
    pub case: Case,
    row: RowFn,
    tq: Option<TqFn>,
}

macro_rules! entry {
    ($k:ident, $r:ident, $s:ident, $row:expr, $tq:expr) => {
        Entry {
            case: Case { kind: SystemKind::$k, regime: Regime::$r, sign: Sign::$s },
            row: $row,
            tq: $tq,
        }
    };
}

static REGISTRY: [Entry; 18] = [
    entry!(TO, Over, Pos, b1_over_pos, None),
    entry!(TO, Over, Neg, b1_over_neg, None),
    entry!(TO, Critical, Pos, b1_critical_pos, None),
    entry!(TO, Critical, Neg, b1_critical_neg, None),
    entry!(TO, Under, Pos, b1_under_pos, None),
    entry!(TO, Under, Neg, b1_under_neg, None),
    entry!(TM, Over, Pos, b2_over_pos, None),
    entry!(TM, Over, Neg, b2_over_neg, None),
    entry!(TM, Critical, Pos, b2_critical_pos, None),
    entry!(TM, Critical, Neg, b2_critical_neg, None),
    entry!(TM, Under, Pos, b2_under_pos, None),
    entry!(TM, Under, Neg, b2_under_neg, None),
    entry!(TQ, Over, Pos, b2_over_pos, Some(b3_over_pos)),
    entry!(TQ, Over, Neg, b2_over_neg, Some(b3_over_neg)),
    entry!(TQ, Critical, Pos, b2_critical_pos, Some(b3_critical_pos)),
    entry!(TQ, Critical, Neg, b2_critical_neg, Some(b3_critical_neg)),
    entry!(TQ, Under, Pos, b2_under_pos, Some(b3_under_pos)),
    entry!(TQ, Under, Neg, b2_under_neg, Some(b3_under_neg)),
];

pub fn registry() -> &'static [Entry; 18] {
    &REGISTRY
}

fn lookup(case: Case) -> Result<&'static Entry> {
    REGISTRY
        .iter()
        .find(|e| e.case == case)
        .ok_or_else(|| Error::UnsupportedCase(case.label()))
}

/// Evaluates the full bundle for `spec` on system `kind` at time `t`.
pub fn eval_timefuncs(spec: &SystemSpec, kind: SystemKind, t: TimeCoord) -> Result<TimeFunctions> {
    if t.kind != kind {
        return Err(Error::Domain(format!("time coordinate is for {} not {}", t.kind, kind)));
    }
    if !t.offset.is_finite() {
        return Err(Error::Domain("time must be finite".into()));
    }
    let case = Case::of(spec, kind);
    let entry = lookup(case)?;
    let p = Params { u: spec.upsilon, a: spec.abs_upsilon(), d: spec.delta };
    let (var, log_time) = match kind {
        SystemKind::TO => {
            let tau = tau_of(spec, t.offset)?;
            (tau, tau.ln())
        }
        _ => {
            let x = chi_of(spec, t.offset);
            (x, x)
        }
    };
    let r = (entry.row)(&p, var);
    Ok(TimeFunctions {
        case,
        t,
        log_time,
        xi: r.xi,
        xi_bar: r.xi.conj(),
        xi_dot: r.xi_dot,
        xi_bar_dot: r.xi_dot.conj(),
        phi1: r.phi1,
        phi1_dot: r.phi1_dot,
        phi2: r.phi1.conj(),
        phi2_dot: r.phi1_dot.conj(),
        phi3: r.phi3,
        phi3_dot: r.phi3_dot,
        phi3_ddot: r.phi3_ddot,
        xi_arg: r.arg,
        tq: entry.tq.map(|f| f(&p, var)),
    })
}

/// Factor converting a tabulated d/dt′ derivative to the native time derivative.
pub fn native_rate(spec: &SystemSpec, kind: SystemKind, offset: f64) -> f64 {
    match kind {
        SystemKind::TM => chi_of(spec, offset).exp(),
        _ => 1.0,
    }
}
