//! Closed-form expectation values and uncertainties, the classical equations
//! of motion, and feature finding on ⟨x⟩ curves.

use crate::error::{Error, Result};
use crate::model::{chi_of, tau_of, Regime, Sign, SystemKind, SystemSpec, TimeCoord, Transcription};
use crate::numerics::{bisect, rk4_integrate, Vec4};
use crate::states::StateFamily;
use crate::timefuncs::eval_timefuncs;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservablePoint {
    pub t: TimeCoord,
    pub x_mean: f64,
    pub p_mean: f64,
    pub x_var: f64,
    pub p_var: f64,
    pub product: f64,
}

impl ObservablePoint {
    pub fn x2_mean(&self) -> f64 {
        self.x_var + self.x_mean * self.x_mean
    }

    pub fn p2_mean(&self) -> f64 {
        self.p_var + self.p_mean * self.p_mean
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesSource {
    ClosedForm,
    Quadrature,
}

impl fmt::Display for SeriesSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesSource::ClosedForm => "closed_form",
            SeriesSource::Quadrature => "quadrature",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableSeries {
    pub spec: SystemSpec,
    pub kind: SystemKind,
    pub family: StateFamily,
    pub source: SeriesSource,
    pub derived_case: bool,
    pub points: Vec<ObservablePoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalState {
    pub x: f64,
    pub p: f64,
    pub t: TimeCoord,
}

/// (√τ, ln τ) for TO, (e^{χ/2}, χ) for TM, (1, χ) for TQ.
fn growth_and_log(spec: &SystemSpec, kind: SystemKind, t: TimeCoord) -> Result<(f64, f64)> {
    if t.kind != kind {
        return Err(Error::Domain(format!("time coordinate is for {} not {}", t.kind, kind)));
    }
    match kind {
        SystemKind::TO => {
            let tau = tau_of(spec, t.offset)?;
            Ok((tau.sqrt(), tau.ln()))
        }
        SystemKind::TM => {
            let c = chi_of(spec, t.offset);
            Ok(((0.5 * c).exp(), c))
        }
        SystemKind::TQ => Ok((1.0, chi_of(spec, t.offset))),
    }
}

/// ⟨x⟩ of a coherent or squeezed state launched from (x₀, p₀).
pub fn mean_x(spec: &SystemSpec, kind: SystemKind, x0: f64, p0: f64, t: TimeCoord) -> Result<f64> {
    let (g, l) = growth_and_log(spec, kind, t)?;
    let (u, d) = (spec.upsilon, spec.delta);
    Ok(match spec.regime {
        Regime::Over => {
            let (sh, ch) = ((0.5 * d * l).sinh(), (0.5 * d * l).cosh());
            x0 / d * g * (d * ch - sh) + 2.0 * p0 / (u * d) * g * sh
        }
        Regime::Critical => x0 * g * (1.0 - 0.5 * l) + p0 / u * g * l,
        Regime::Under => {
            let (s, c) = (0.5 * d * l).sin_cos();
            x0 / d * g * (d * c - s) + 2.0 * p0 / (u * d) * g * s
        }
    })
}

/// ⟨p⟩ of a coherent or squeezed state launched from (x₀, p₀).
pub fn mean_p(spec: &SystemSpec, kind: SystemKind, x0: f64, p0: f64, t: TimeCoord) -> Result<f64> {
    let (g, l) = growth_and_log(spec, kind, t)?;
    let (u, d, w2) = (spec.upsilon, spec.delta, spec.omega * spec.omega);
    Ok(match spec.regime {
        Regime::Over => {
            let (sh, ch) = ((0.5 * d * l).sinh(), (0.5 * d * l).cosh());
            -2.0 * x0 * w2 / (u * d) / g * sh + p0 / d / g * (d * ch + sh)
        }
        Regime::Critical => -x0 * u / 4.0 / g * l + p0 / g * (1.0 + 0.5 * l),
        Regime::Under => {
            let (s, c) = (0.5 * d * l).sin_cos();
            -2.0 * x0 * w2 / (u * d) / g * s + p0 / d / g * (d * c + s)
        }
    })
}

/// |Υ| and the sign-adjusted θ of the Υ < 0 substitution rule.
fn negative_upsilon_rule(spec: &SystemSpec, theta: f64) -> (f64, f64) {
    match spec.sign {
        Sign::Pos => (spec.upsilon, theta),
        Sign::Neg => (spec.abs_upsilon(), -theta),
    }
}

fn check_squeeze(r: f64, theta: f64) -> Result<()> {
    if !r.is_finite() || !theta.is_finite() || r < 0.0 {
        return Err(Error::Domain(format!("need finite r >= 0 and finite theta, got r={r}, theta={theta}")));
    }
    Ok(())
}

/// (Δx)².
pub fn var_x(spec: &SystemSpec, kind: SystemKind, r: f64, theta: f64, t: TimeCoord) -> Result<f64> {
    check_squeeze(r, theta)?;
    let (g, l) = growth_and_log(spec, kind, t)?;
    let g = g * g;
    let (u, th) = negative_upsilon_rule(spec, theta);
    let d = spec.delta;
    let (s2, si2) = ((2.0 * r).exp(), (-2.0 * r).exp());
    let (sn, cs) = th.sin_cos();
    Ok(match spec.regime {
        Regime::Over => {
            let (ch, sh) = ((d * l).cosh(), (d * l).sinh());
            g / (2.0 * u * d) * (s2 * (ch - sh * cs + sn) + si2 * (ch + sh * cs - sn))
        }
        Regime::Critical => {
            let a = 1.0 + l * l;
            let b = 1.0 - l * l;
            g / (4.0 * u) * (s2 * (a + b * cs + 2.0 * l * sn) + si2 * (a - b * cs - 2.0 * l * sn))
        }
        Regime::Under => {
            let c = (d * l - th).cos();
            g / (2.0 * u * d) * (s2 * (1.0 + c) + si2 * (1.0 - c))
        }
    })
}

/// (Δp)² with the TM critical misprint repaired.
pub fn var_p(spec: &SystemSpec, kind: SystemKind, r: f64, theta: f64, t: TimeCoord) -> Result<f64> {
    var_p_transcribed(spec, kind, r, theta, t, Transcription::Corrected)
}

/// (Δp)² as printed or corrected. The printed TM critical row has (1 − ½χ)² in
/// its first cos θ bracket.
pub fn var_p_transcribed(
    spec: &SystemSpec,
    kind: SystemKind,
    r: f64,
    theta: f64,
    t: TimeCoord,
    mode: Transcription,
) -> Result<f64> {
    check_squeeze(r, theta)?;
    let (g, l) = growth_and_log(spec, kind, t)?;
    let gi = 1.0 / (g * g);
    let (u, th) = negative_upsilon_rule(spec, theta);
    let d = spec.delta;
    let (s2, si2) = ((2.0 * r).exp(), (-2.0 * r).exp());
    let (sn, cs) = th.sin_cos();
    let d2 = d * d;
    Ok(match spec.regime {
        Regime::Over => {
            let (ch, sh) = ((d * l).cosh(), (d * l).sinh());
            let a = (1.0 + d2) * (ch - sh * cs) + (1.0 - d2) * sn + 2.0 * d * (sh - ch * cs);
            let b = (1.0 + d2) * (ch + sh * cs) - (1.0 - d2) * sn + 2.0 * d * (sh + ch * cs);
            u * gi / (8.0 * d) * (s2 * a + si2 * b)
        }
        Regime::Critical => {
            let b = 1.0 + 0.5 * l;
            let b_first = if kind == SystemKind::TM && mode == Transcription::Verbatim { 1.0 - 0.5 * l } else { b };
            let first = (0.25 + b * b) + (0.25 - b_first * b_first) * cs + b * sn;
            let second = (0.25 + b * b) - (0.25 - b * b) * cs - b * sn;
            u * gi / 4.0 * (s2 * first + si2 * second)
        }
        Regime::Under => {
            let (s, c) = (d * l - th).sin_cos();
            let a = (1.0 + d2) + (1.0 - d2) * c - 2.0 * d * s;
            let b = (1.0 + d2) - (1.0 - d2) * c + 2.0 * d * s;
            u * gi / (8.0 * d) * (s2 * a + si2 * b)
        }
    })
}

/// (Δx)²(Δp)² from the closed-form product expression. Corrected mode fixes
/// the sign of cos θ in the over-damped s⁻² sinh term.
pub fn product_closed_form(
    spec: &SystemSpec,
    kind: SystemKind,
    r: f64,
    theta: f64,
    t: TimeCoord,
    mode: Transcription,
) -> Result<f64> {
    check_squeeze(r, theta)?;
    let (_, l) = growth_and_log(spec, kind, t)?;
    let (_, th) = negative_upsilon_rule(spec, theta);
    let d = spec.delta;
    let (s2, si2) = ((2.0 * r).exp(), (-2.0 * r).exp());
    let (sn, cs) = th.sin_cos();
    let inner = match spec.regime {
        Regime::Over => {
            let (ch, sh) = ((d * l).cosh(), (d * l).sinh());
            let tail = if mode == Transcription::Corrected { d + cs } else { d - cs };
            let a = sn + (1.0 - d * cs) * ch + (d - cs) * sh;
            let b = -sn + (1.0 + d * cs) * ch + tail * sh;
            (s2 * a + si2 * b) / (2.0 * d)
        }
        Regime::Critical => {
            let m = 1.0 + l;
            let k = 0.5 * (1.0 - 2.0 * l - l * l);
            let a = 0.5 * m * m + m * sn + k * cs;
            let b = 0.5 * m * m - m * sn - k * cs;
            (s2 * a + si2 * b) / 2.0
        }
        Regime::Under => {
            let (s, c) = (d * l - th).sin_cos();
            let a = 1.0 + c - d * s;
            let b = 1.0 - c + d * s;
            (s2 * a + si2 * b) / (2.0 * d)
        }
    };
    Ok(0.25 * (1.0 + inner * inner))
}

/// The authoritative product (Δx)²·(Δp)².
pub fn uncertainty_product(spec: &SystemSpec, kind: SystemKind, r: f64, theta: f64, t: TimeCoord) -> Result<f64> {
    Ok(var_x(spec, kind, r, theta, t)? * var_p(spec, kind, r, theta, t)?)
}

/// All closed-form observables of a state at `t`. Number states are centered
/// with variances (2n+1)|u|², (2n+1)|v|² from the time-function bundle.
pub fn observe(spec: &SystemSpec, kind: SystemKind, family: &StateFamily, t: TimeCoord) -> Result<ObservablePoint> {
    family.validate()?;
    let (x_mean, p_mean, x_var, p_var) = match *family {
        StateFamily::Number { n } => {
            let s = eval_timefuncs(spec, kind, t)?.state_pair();
            let k = 2.0 * n as f64 + 1.0;
            (0.0, 0.0, k * s.u.norm_sqr(), k * s.v.norm_sqr())
        }
        _ => {
            let (x0, p0) = family.center0();
            let (r, th) = family.squeeze();
            (
                mean_x(spec, kind, x0, p0, t)?,
                mean_p(spec, kind, x0, p0, t)?,
                var_x(spec, kind, r, th, t)?,
                var_p(spec, kind, r, th, t)?,
            )
        }
    };
    Ok(ObservablePoint { t, x_mean, p_mean, x_var, p_var, product: x_var * p_var })
}

pub fn series(spec: &SystemSpec, kind: SystemKind, family: &StateFamily, offsets: &[f64]) -> Result<ObservableSeries> {
    let points = offsets
        .iter()
        .map(|&o| observe(spec, kind, family, TimeCoord::new(kind, o)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ObservableSeries {
        spec: *spec,
        kind,
        family: *family,
        source: SeriesSource::ClosedForm,
        derived_case: !crate::states::is_printed_case(crate::timefuncs::Case::of(spec, kind)),
        points,
    })
}

/// Right-hand side (ẋ, ṗ) of the classical equations of motion in the native time.
pub fn classical_rhs(spec: &SystemSpec, kind: SystemKind, s: &ClassicalState) -> Result<(f64, f64)> {
    let w2 = spec.omega * spec.omega;
    match kind {
        SystemKind::TO => {
            let tau = tau_of(spec, s.t.offset)?;
            Ok((s.p, -w2 / (tau * tau) * s.x))
        }
        SystemKind::TM => {
            let e = chi_of(spec, s.t.offset).exp();
            Ok((e * s.p, -w2 / e * s.x))
        }
        SystemKind::TQ => {
            let h = 0.5 * spec.upsilon;
            Ok((s.p - h * s.x, -w2 * s.x + h * s.p))
        }
    }
}

/// RK4 trajectory from (x₀, p₀) at the reference time to `t_end`, returning every step.
pub fn integrate_classical(
    spec: &SystemSpec,
    kind: SystemKind,
    x0: f64,
    p0: f64,
    t_end: f64,
    steps: usize,
) -> Result<Vec<ClassicalState>> {
    if steps == 0 {
        return Err(Error::Domain("steps must be >= 1".into()));
    }
    if kind == SystemKind::TO {
        tau_of(spec, t_end)?;
    }
    let spec = *spec;
    let rhs = move |t: f64, y: Vec4| {
        let s = ClassicalState { x: y.0[0], p: y.0[1], t: TimeCoord::new(kind, t) };
        let (dx, dp) = classical_rhs(&spec, kind, &s).unwrap_or((f64::NAN, f64::NAN));
        Vec4([dx, dp, 0.0, 0.0])
    };
    let mut out = vec![ClassicalState { x: x0, p: p0, t: TimeCoord::new(kind, 0.0) }];
    rk4_integrate(rhs, 0.0, Vec4([x0, p0, 0.0, 0.0]), t_end, steps, |t, y| {
        out.push(ClassicalState { x: y.0[0], p: y.0[1], t: TimeCoord::new(kind, t) });
    });
    if out.iter().any(|s| !s.x.is_finite() || !s.p.is_finite()) {
        return Err(Error::Domain("classical trajectory left the domain".into()));
    }
    Ok(out)
}

/// Sign changes of `f` on `[a, b]` located by scanning `samples` intervals and
/// bisecting each bracket to width 1e-10.
pub fn zero_crossings<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, samples: usize) -> Vec<f64> {
    let n = samples.max(1);
    let h = (b - a) / n as f64;
    let mut out = Vec::new();
    let mut prev = f(a);
    for i in 1..=n {
        let t = a + h * i as f64;
        let cur = f(t);
        if prev != 0.0 && cur != 0.0 && prev.signum() != cur.signum() {
            if let Some(z) = bisect(&f, t - h, t, 1e-10) {
                out.push(z);
            }
        } else if cur == 0.0 {
            out.push(t);
        }
        prev = cur;
    }
    out
}

/// Interior local minima (t, f(t)) of `f` on `[a, b]`, refined by golden-section search.
pub fn local_minima<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, samples: usize) -> Vec<(f64, f64)> {
    let n = samples.max(2);
    let h = (b - a) / n as f64;
    let v: Vec<f64> = (0..=n).map(|i| f(a + h * i as f64)).collect();
    let mut out = Vec::new();
    for i in 1..n {
        if v[i] < v[i - 1] && v[i] <= v[i + 1] {
            let t = golden_min(&f, a + h * (i - 1) as f64, a + h * (i + 1) as f64, 1e-10);
            out.push((t, f(t)));
        }
    }
    out
}

fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::squeeze_geometry;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn specs() -> Vec<SystemSpec> {
        [5.0, -5.0, 4.0, -4.0, 3.0, -3.0]
            .iter()
            .map(|&u| SystemSpec::new(u, 2.0, 0.0).unwrap())
            .collect()
    }

    fn window(spec: &SystemSpec, kind: SystemKind) -> (f64, f64) {
        match (kind, spec.sign) {
            (SystemKind::TO, Sign::Pos) => (0.0, 2.0),
            (SystemKind::TO, Sign::Neg) => (0.0, 0.8 / spec.abs_upsilon()),
            _ => (-1.0, 1.0),
        }
    }

    #[test]
    fn initial_conditions() {
        for spec in specs() {
            for kind in SystemKind::ALL {
                let t = TimeCoord::new(kind, 0.0);
                assert!((mean_x(&spec, kind, 1.3, -0.4, t).unwrap() - 1.3).abs() < 1e-14);
                assert!((mean_p(&spec, kind, 1.3, -0.4, t).unwrap() + 0.4).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn table_examples() {
        let crit = SystemSpec::new(4.0, 2.0, 0.0).unwrap();
        let x = mean_x(&crit, SystemKind::TQ, 1.0, 1.0, TimeCoord::new(SystemKind::TQ, 0.5)).unwrap();
        assert!((x - 0.5).abs() < 1e-14);
        let under = SystemSpec::new(3.0, 2.0, 0.0).unwrap();
        let t = TimeCoord::new(SystemKind::TO, 0.0);
        assert!((var_x(&under, SystemKind::TO, 0.0, 0.4, t).unwrap() - 1.0 / 7f64.sqrt()).abs() < 1e-14);
        for kind in SystemKind::ALL {
            let p = uncertainty_product(&under, kind, 0.0, 0.0, TimeCoord::new(kind, 0.3)).unwrap();
            assert!((p - 4.0 / 7.0).abs() < 1e-12);
        }
        let s = ClassicalState { x: 1.0, p: 1.0, t: TimeCoord::new(SystemKind::TQ, 0.0) };
        assert_eq!(classical_rhs(&crit, SystemKind::TQ, &s).unwrap(), (-1.0, -2.0));
        let s = ClassicalState { x: 1.0, p: 0.0, t: TimeCoord::new(SystemKind::TO, 0.0) };
        assert_eq!(classical_rhs(&crit, SystemKind::TO, &s).unwrap(), (0.0, -4.0));
    }

    #[test]
    fn tables_match_generic_construction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for spec in specs() {
            for kind in SystemKind::ALL {
                let (a, b) = window(&spec, kind);
                for _ in 0..20 {
                    let t = TimeCoord::new(kind, rng.random_range(a..b));
                    let (x0, p0) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                    let r = rng.random_range(0.0..1.5);
                    let th = rng.random_range(-3.0..3.0);
                    let fam = StateFamily::Squeezed { x0, p0, r, theta: th };
                    let g = squeeze_geometry(&spec, kind, &fam, t).unwrap();
                    let p = observe(&spec, kind, &fam, t).unwrap();
                    let s = eval_timefuncs(&spec, kind, t).unwrap().state_pair();
                    let k0 = eval_timefuncs(&spec, kind, TimeCoord::new(kind, 0.0)).unwrap().state_pair();
                    let k = k0.v.conj() * x0 - k0.u.conj() * p0;
                    let pc = -2.0 * (s.v * k).im;
                    let vz = s.v * r.cosh() + num_complex::Complex64::from_polar(r.sinh(), th) * s.v.conj();
                    let tag = format!("{} {kind} {t:?}", spec.label());
                    let close = |a: f64, b: f64| (a - b).abs() <= 1e-10 * a.abs().max(1.0);
                    assert!(close(p.x_mean, g.x_plus), "x {tag}");
                    assert!(close(p.p_mean, pc), "p {tag}");
                    assert!(close(p.x_var, g.q), "xvar {tag} {} {}", p.x_var, g.q);
                    assert!(close(p.p_var, vz.norm_sqr()), "pvar {tag} {} {}", p.p_var, vz.norm_sqr());
                    let c = product_closed_form(&spec, kind, r, th, t, Transcription::Corrected).unwrap();
                    assert!((c - p.product).abs() <= 1e-9 * p.product, "prod {tag} {c} {}", p.product);
                }
            }
        }
    }

    #[test]
    fn printed_misprints_are_detectable() {
        let crit = SystemSpec::new(4.0, 2.0, 0.0).unwrap();
        let t = TimeCoord::new(SystemKind::TM, 0.5);
        let a = var_p(&crit, SystemKind::TM, 0.5, 0.7, t).unwrap();
        let b = var_p_transcribed(&crit, SystemKind::TM, 0.5, 0.7, t, Transcription::Verbatim).unwrap();
        assert!((a - b).abs() > 1e-2);
        let tq = TimeCoord::new(SystemKind::TQ, 0.5);
        let a = var_p(&crit, SystemKind::TQ, 0.5, 0.7, tq).unwrap();
        let b = var_p_transcribed(&crit, SystemKind::TQ, 0.5, 0.7, tq, Transcription::Verbatim).unwrap();
        assert_eq!(a, b);
        let over = SystemSpec::new(5.0, 2.0, 0.0).unwrap();
        let t = TimeCoord::new(SystemKind::TO, 0.5);
        let a = product_closed_form(&over, SystemKind::TO, 0.5, 0.7, t, Transcription::Corrected).unwrap();
        let b = product_closed_form(&over, SystemKind::TO, 0.5, 0.7, t, Transcription::Verbatim).unwrap();
        assert!((a - b).abs() > 1e-3);
    }

    #[test]
    fn tables_satisfy_equations_of_motion() {
        for spec in specs() {
            for kind in SystemKind::ALL {
                let (a, b) = window(&spec, kind);
                for i in 0..10 {
                    let off = a + (b - a) * (i as f64 + 0.5) / 10.0;
                    let h = 1e-5;
                    let t = TimeCoord::new(kind, off);
                    let x = |o: f64| mean_x(&spec, kind, 1.0, 1.0, TimeCoord::new(kind, o)).unwrap();
                    let p = |o: f64| mean_p(&spec, kind, 1.0, 1.0, TimeCoord::new(kind, o)).unwrap();
                    let dx = (x(off + h) - x(off - h)) / (2.0 * h);
                    let dp = (p(off + h) - p(off - h)) / (2.0 * h);
                    let s = ClassicalState { x: x(off), p: p(off), t };
                    let (fx, fp) = classical_rhs(&spec, kind, &s).unwrap();
                    assert!((dx - fx).abs() <= 1e-5 * fx.abs().max(1.0));
                    assert!((dp - fp).abs() <= 1e-5 * fp.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn rk4_reproduces_tables() {
        for spec in specs() {
            for kind in SystemKind::ALL {
                let (_, b) = window(&spec, kind);
                let traj = integrate_classical(&spec, kind, 1.0, 1.0, b, 4000).unwrap();
                for s in traj.iter().step_by(200) {
                    let x = mean_x(&spec, kind, 1.0, 1.0, s.t).unwrap();
                    let p = mean_p(&spec, kind, 1.0, 1.0, s.t).unwrap();
                    assert!((s.x - x).abs() <= 1e-6 * x.abs().max(1.0), "{} {kind}", spec.label());
                    assert!((s.p - p).abs() <= 1e-6 * p.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn fig3_tm_minimum_and_crossings() {
        let s = SystemSpec::new(3.0, 2.0, 0.0).unwrap();
        let f = |o: f64| mean_x(&s, SystemKind::TM, 1.0, 1.0, TimeCoord::new(SystemKind::TM, o)).unwrap();
        let z = zero_crossings(f, 0.0, 3.0, 300);
        assert!(!z.is_empty());
        assert!(f(z[0]).abs() < 1e-8);
        let m = local_minima(f, 0.0, 3.0, 300);
        assert_eq!(m.len(), 1);
        assert!((m[0].1 + 43.27).abs() < 0.01, "{m:?}");
    }

    #[test]
    fn rejects_out_of_domain() {
        let s = SystemSpec::new(-3.0, 2.0, 0.0).unwrap();
        let t = TimeCoord::new(SystemKind::TO, 0.5);
        assert!(matches!(mean_x(&s, SystemKind::TO, 1.0, 1.0, t), Err(Error::Domain(_))));
        assert!(matches!(var_x(&s, SystemKind::TQ, -1.0, 0.0, TimeCoord::new(SystemKind::TQ, 0.0)), Err(Error::Domain(_))));
    }

    proptest! {
        #[test]
        fn heisenberg_bound(us in 0usize..6, ks in 0usize..3, r in 0.0..2.0f64, th in -3.0..3.0f64, frac in 0.0..1.0f64) {
            let spec = specs()[us];
            let kind = SystemKind::ALL[ks];
            let (a, b) = window(&spec, kind);
            let t = TimeCoord::new(kind, a + (b - a) * frac);
            let p = uncertainty_product(&spec, kind, r, th, t).unwrap();
            prop_assert!(p >= 0.25 - 1e-12);
        }
    }
}
