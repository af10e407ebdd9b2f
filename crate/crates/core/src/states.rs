//! Closed-form number, coherent and squeezed states for all 18 cases, built
//! from the (u, v) pair of the time-function bundle, plus the printed
//! (under-damped, Υ > 0) forms used as cross-check anchors.

use crate::error::{Error, Result};
use crate::model::{Regime, Sign, SystemKind, SystemSpec, TimeCoord};
use crate::numerics::{linspace, simpson};
use crate::timefuncs::{eval_timefuncs, Case, StatePair};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Largest number-state index accepted.
pub const MAX_N: usize = 60;

/// Default number of grid points.
pub const DEFAULT_POINTS: usize = 2001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum StateFamily {
    Number { n: usize },
    Coherent { x0: f64, p0: f64 },
    Squeezed { x0: f64, p0: f64, r: f64, theta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    pub kind: SystemKind,
    pub family: StateFamily,
}

impl StateFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            StateFamily::Number { n } if n > MAX_N => {
                Err(Error::Overflow(format!("n = {n} exceeds the supported maximum {MAX_N}")))
            }
            StateFamily::Number { .. } => Ok(()),
            StateFamily::Coherent { x0, p0 } => finite(&[x0, p0]),
            StateFamily::Squeezed { x0, p0, r, theta } => {
                finite(&[x0, p0, r, theta])?;
                if r < 0.0 {
                    return Err(Error::Domain(format!("squeeze r must be >= 0, got {r}")));
                }
                if !(theta > -PI && theta <= PI) {
                    return Err(Error::Domain(format!("theta must lie in (-pi, pi], got {theta}")));
                }
                Ok(())
            }
        }
    }

    /// (x₀, p₀) of the displaced families, zero for number states.
    pub fn center0(&self) -> (f64, f64) {
        match *self {
            StateFamily::Number { .. } => (0.0, 0.0),
            StateFamily::Coherent { x0, p0 } | StateFamily::Squeezed { x0, p0, .. } => (x0, p0),
        }
    }

    /// (r, θ), zero for number and coherent states.
    pub fn squeeze(&self) -> (f64, f64) {
        match *self {
            StateFamily::Squeezed { r, theta, .. } => (r, theta),
            _ => (0.0, 0.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            StateFamily::Number { .. } => "number",
            StateFamily::Coherent { .. } => "coherent",
            StateFamily::Squeezed { .. } => "squeezed",
        }
    }
}

fn finite(v: &[f64]) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Domain("state parameters must be finite".into()))
    }
}

/// A wavefunction sampled on a uniform ascending grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionSample {
    pub x: Vec<f64>,
    pub psi: Vec<C64>,
    pub t: TimeCoord,
    /// True unless the case has a printed closed form (under-damped, Υ > 0).
    pub derived_case: bool,
}

/// Checks that `x` is uniform and ascending with at least five points; returns the spacing.
pub fn check_grid(x: &[f64]) -> Result<f64> {
    if x.len() < 5 {
        return Err(Error::Grid(format!("need at least 5 grid points, got {}", x.len())));
    }
    let h = (x[x.len() - 1] - x[0]) / (x.len() - 1) as f64;
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Grid("grid must be ascending and finite".into()));
    }
    let scale = x[0].abs().max(x[x.len() - 1].abs()).max(h);
    for (i, w) in x.windows(2).enumerate() {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * scale {
            return Err(Error::Grid(format!("grid is not uniform at index {i}")));
        }
    }
    Ok(h)
}

impl WavefunctionSample {
    pub fn spacing(&self) -> Result<f64> {
        check_grid(&self.x)
    }

    pub fn density(&self) -> Vec<f64> {
        self.psi.iter().map(|p| p.norm_sqr()).collect()
    }

    pub fn norm_sq(&self) -> Result<f64> {
        Ok(simpson(&self.density(), self.spacing()?))
    }

    /// ⟨self|other⟩ on the shared grid.
    pub fn inner(&self, other: &WavefunctionSample) -> Result<C64> {
        let h = self.spacing()?;
        same_grid(self, other)?;
        let re: Vec<f64> = self.psi.iter().zip(&other.psi).map(|(a, b)| (a.conj() * b).re).collect();
        let im: Vec<f64> = self.psi.iter().zip(&other.psi).map(|(a, b)| (a.conj() * b).im).collect();
        Ok(C64::new(simpson(&re, h), simpson(&im, h)))
    }

    /// L² norm of `self − scale·other`.
    pub fn l2_distance(&self, other: &WavefunctionSample, scale: C64) -> Result<f64> {
        let h = self.spacing()?;
        same_grid(self, other)?;
        let d: Vec<f64> =
            self.psi.iter().zip(&other.psi).map(|(a, b)| (a - scale * b).norm_sqr()).collect();
        Ok(simpson(&d, h).max(0.0).sqrt())
    }

    pub fn l2_norm(&self) -> Result<f64> {
        Ok(self.norm_sq()?.max(0.0).sqrt())
    }
}

fn same_grid(a: &WavefunctionSample, b: &WavefunctionSample) -> Result<()> {
    if a.x.len() != b.x.len() || a.x.first() != b.x.first() || a.x.last() != b.x.last() {
        return Err(Error::Grid("samples are on different grids".into()));
    }
    Ok(())
}

/// Physicists' Hermite polynomial Hₙ(u) by the three-term recurrence.
pub fn hermite_poly(n: usize, u: f64) -> f64 {
    let (mut a, mut b) = (1.0, 2.0 * u);
    if n == 0 {
        return a;
    }
    for k in 1..n {
        let c = 2.0 * u * b - 2.0 * k as f64 * a;
        a = b;
        b = c;
    }
    b
}

/// Normalized Hermite functions h̃ₖ(s) = Hₖ(s)e^{−s²/2}/√(2ᵏk!√π), k = 0..=n.
pub fn hermite_functions(n: usize, s: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(n + 1);
    h.push(PI.powf(-0.25) * (-0.5 * s * s).exp());
    if n >= 1 {
        h.push(2f64.sqrt() * s * h[0]);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * s * h[k] - (kf / (kf + 1.0)).sqrt() * h[k - 1];
        h.push(next);
    }
    h
}

/// True for the cases whose states have printed closed forms.
pub fn is_printed_case(case: Case) -> bool {
    case.regime == Regime::Under && case.sign == Sign::Pos
}

fn pair_at(spec: &SystemSpec, kind: SystemKind, t: TimeCoord) -> Result<StatePair> {
    Ok(eval_timefuncs(spec, kind, t)?.state_pair())
}

/// Classical phase-space center (X, P) at `t` of a state launched from (x₀, p₀)
/// at the reference time.
pub fn phase_center(
    spec: &SystemSpec,
    kind: SystemKind,
    x0: f64,
    p0: f64,
    t: TimeCoord,
) -> Result<(f64, f64)> {
    let k = launch_constant(spec, kind, x0, p0)?;
    let s = pair_at(spec, kind, t)?;
    Ok((-2.0 * (s.u * k).im, -2.0 * (s.v * k).im))
}

fn launch_constant(spec: &SystemSpec, kind: SystemKind, x0: f64, p0: f64) -> Result<C64> {
    let s0 = pair_at(spec, kind, TimeCoord::new(kind, 0.0))?;
    Ok(s0.v.conj() * x0 - s0.u.conj() * p0)
}

fn squeeze_pair(s: StatePair, r: f64, theta: f64) -> StatePair {
    if r == 0.0 {
        return s;
    }
    let (ch, sh) = (r.cosh(), r.sinh());
    let e = C64::from_polar(sh, theta);
    let u = s.u * ch + e * s.u.conj();
    let v = s.v * ch + e * s.v.conj();
    let w = C64::new(ch, 0.0) + e * C64::from_polar(1.0, -2.0 * s.arg);
    StatePair { u, v, arg: s.arg + w.arg() }
}

fn gaussian_state(
    s: StatePair,
    center: (f64, f64),
    x: &[f64],
) -> Vec<C64> {
    let (xc, pc) = center;
    let amp = (2.0 * PI * s.u.norm_sqr()).powf(-0.25);
    let front = C64::from_polar(amp, -0.5 * s.arg);
    let chirp = s.v / (s.u * 2.0);
    x.iter()
        .map(|&xi| {
            let d = xi - xc;
            front * (C64::i() * chirp * d * d).exp() * C64::from_polar(1.0, pc * (xi - 0.5 * xc))
        })
        .collect()
}

fn sample(spec: &SystemSpec, kind: SystemKind, t: TimeCoord, x: &[f64], psi: Vec<C64>) -> WavefunctionSample {
    WavefunctionSample {
        x: x.to_vec(),
        psi,
        t,
        derived_case: !is_printed_case(Case::of(spec, kind)),
    }
}

pub fn number_state(
    spec: &SystemSpec,
    kind: SystemKind,
    n: usize,
    t: TimeCoord,
    x: &[f64],
) -> Result<WavefunctionSample> {
    StateFamily::Number { n }.validate()?;
    check_grid(x)?;
    let s = pair_at(spec, kind, t)?;
    let a = s.u.norm();
    let amp = (2.0 * a * a).powf(-0.25);
    let front = C64::from_polar(amp, -(n as f64 + 0.5) * s.arg);
    let chirp = (s.v * s.u.conj()).re / (2.0 * a * a);
    let scale = 1.0 / (2f64.sqrt() * a);
    let mut psi = Vec::with_capacity(x.len());
    for &xi in x {
        let arg = xi * scale;
        if arg.abs() > 37.0 + (2.0 * n as f64 + 1.0).sqrt() {
            psi.push(C64::new(0.0, 0.0));
            continue;
        }
        let h = hermite_functions(n, arg)[n];
        if !h.is_finite() {
            return Err(Error::Overflow(format!("Hermite function overflow at x = {xi}")));
        }
        psi.push(front * h * C64::from_polar(1.0, chirp * xi * xi));
    }
    Ok(sample(spec, kind, t, x, psi))
}

pub fn coherent_state(
    spec: &SystemSpec,
    kind: SystemKind,
    x0: f64,
    p0: f64,
    t: TimeCoord,
    x: &[f64],
) -> Result<WavefunctionSample> {
    squeezed_state(spec, kind, x0, p0, 0.0, 0.0, t, x)
}

#[allow(clippy::too_many_arguments)]
pub fn squeezed_state(
    spec: &SystemSpec,
    kind: SystemKind,
    x0: f64,
    p0: f64,
    r: f64,
    theta: f64,
    t: TimeCoord,
    x: &[f64],
) -> Result<WavefunctionSample> {
    StateFamily::Squeezed { x0, p0, r, theta }.validate()?;
    check_grid(x)?;
    let s = squeeze_pair(pair_at(spec, kind, t)?, r, theta);
    let center = phase_center(spec, kind, x0, p0, t)?;
    Ok(sample(spec, kind, t, x, gaussian_state(s, center, x)))
}

/// Any family on a given grid.
pub fn state(spec: &SystemSpec, st: &StateSpec, t: TimeCoord, x: &[f64]) -> Result<WavefunctionSample> {
    match st.family {
        StateFamily::Number { n } => number_state(spec, st.kind, n, t, x),
        StateFamily::Coherent { x0, p0 } => coherent_state(spec, st.kind, x0, p0, t, x),
        StateFamily::Squeezed { x0, p0, r, theta } => {
            squeezed_state(spec, st.kind, x0, p0, r, theta, t, x)
        }
    }
}

/// ∂ψ/∂t in the native time of the system, by a central difference of the
/// closed form with step 1e-6·max(1, |t − t₀|).
pub fn time_derivative(
    spec: &SystemSpec,
    st: &StateSpec,
    t: TimeCoord,
    x: &[f64],
) -> Result<WavefunctionSample> {
    let h = 1e-6 * t.offset.abs().max(1.0);
    let a = state(spec, st, t.shifted(h), x)?;
    let b = state(spec, st, t.shifted(-h), x)?;
    let psi = a.psi.iter().zip(&b.psi).map(|(p, q)| (p - q) / (2.0 * h)).collect();
    Ok(WavefunctionSample { x: x.to_vec(), psi, t, derived_case: a.derived_case })
}

/// Width and center functions of a (possibly squeezed) Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeGeometry {
    /// Position variance Q = (Δx)².
    pub q: f64,
    pub r_over_q: f64,
    pub x_plus: f64,
    /// X⁻(α, z); equals X⁻(α) at r = 0.
    pub x_minus: f64,
    pub y_minus: f64,
}

pub fn squeeze_geometry(
    spec: &SystemSpec,
    kind: SystemKind,
    family: &StateFamily,
    t: TimeCoord,
) -> Result<SqueezeGeometry> {
    family.validate()?;
    let (x0, p0) = family.center0();
    let (r, theta) = family.squeeze();
    let base = pair_at(spec, kind, t)?;
    let s = squeeze_pair(base, r, theta);
    let k = launch_constant(spec, kind, x0, p0)?;
    let (xc, pc) = (-2.0 * (base.u * k).im, -2.0 * (base.v * k).im);
    let q = s.u.norm_sqr();
    let rr = 2.0 * (s.v * s.u.conj()).re;
    Ok(SqueezeGeometry {
        q,
        r_over_q: rr / q,
        x_plus: xc,
        x_minus: 2.0 * q * pc - rr * xc,
        y_minus: -2.0 * (C64::from_polar(1.0, -theta) * base.u * k.conj()).re,
    })
}

/// Momentum variance (Δp)² = |v_z|² of the family at `t`.
pub fn momentum_variance(spec: &SystemSpec, kind: SystemKind, family: &StateFamily, t: TimeCoord) -> Result<f64> {
    family.validate()?;
    let (r, theta) = family.squeeze();
    let s = squeeze_pair(pair_at(spec, kind, t)?, r, theta);
    Ok(s.v.norm_sqr())
}

/// Default grid: 2001 points spanning ±10σ around the center (wider for
/// number states to hold the oscillatory region).
pub fn default_grid(spec: &SystemSpec, st: &StateSpec, t: TimeCoord, points: usize) -> Result<Vec<f64>> {
    let (center, half) = grid_extent(spec, st, t)?;
    Ok(linspace(center - half, center + half, points))
}

/// Largest number of points [`resolved_grid`] will produce.
pub const MAX_RESOLVED_POINTS: usize = 400_001;

/// Grid over the default extent with the spacing chosen so that the largest
/// local wavenumber k of ψ satisfies k·h ≤ `kh`; never fewer than `min_points`.
pub fn resolved_grid(spec: &SystemSpec, st: &StateSpec, t: TimeCoord, kh: f64, min_points: usize) -> Result<Vec<f64>> {
    let g = squeeze_geometry(spec, st.kind, &st.family, t)?;
    let (center, half) = grid_extent(spec, st, t)?;
    let pc = (g.x_minus + g.r_over_q * g.q * g.x_plus) / (2.0 * g.q);
    let osc = match st.family {
        StateFamily::Number { n } => (2.0 * n as f64 + 1.0).sqrt() / (2.0 * g.q).sqrt(),
        _ => 0.0,
    };
    let k = pc.abs() + (0.5 * g.r_over_q.abs() + 0.5 / g.q) * half + osc;
    let want = (2.0 * half * k / kh).ceil() as usize + 1;
    let n = want.max(min_points).min(MAX_RESOLVED_POINTS) | 1;
    Ok(linspace(center - half, center + half, n))
}

/// (center, half-width) of the default grid.
pub fn grid_extent(spec: &SystemSpec, st: &StateSpec, t: TimeCoord) -> Result<(f64, f64)> {
    let g = squeeze_geometry(spec, st.kind, &st.family, t)?;
    let sigma = g.q.sqrt();
    let half = match st.family {
        StateFamily::Number { n } => (10.0 + 2.0 * (n as f64).sqrt()) * sigma,
        _ => 10.0 * sigma,
    };
    Ok((g.x_plus, half))
}

/// The closed forms printed for the under-damped Υ > 0 systems.
pub mod printed {
    use super::*;
    use crate::model::{chi_of, tau_of, Transcription};

    struct Frame {
        /// Υ, Δ.
        u: f64,
        d: f64,
        /// Width factor τ, e^χ or 1.
        g: f64,
        /// ln τ or χ.
        l: f64,
    }

    fn frame(spec: &SystemSpec, kind: SystemKind, t: TimeCoord) -> Result<Frame> {
        let case = Case::of(spec, kind);
        if !is_printed_case(case) {
            return Err(Error::UnsupportedCase(format!("no printed state for {}", case.label())));
        }
        if t.kind != kind {
            return Err(Error::Domain(format!("time coordinate is for {} not {}", t.kind, kind)));
        }
        let (g, l) = match kind {
            SystemKind::TO => {
                let tau = tau_of(spec, t.offset)?;
                (tau, tau.ln())
            }
            SystemKind::TM => {
                let c = chi_of(spec, t.offset);
                (c.exp(), c)
            }
            SystemKind::TQ => (1.0, chi_of(spec, t.offset)),
        };
        Ok(Frame { u: spec.upsilon, d: spec.delta, g, l })
    }

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    pub fn number_state(
        spec: &SystemSpec,
        kind: SystemKind,
        n: usize,
        t: TimeCoord,
        x: &[f64],
        mode: Transcription,
    ) -> Result<WavefunctionSample> {
        StateFamily::Number { n }.validate()?;
        check_grid(x)?;
        let f = frame(spec, kind, t)?;
        let norm = (1.0 / (2f64.powi(n as i32) * factorial(n))).sqrt()
            * (f.u * f.d / (2.0 * PI * f.g)).powf(0.25);
        let phase = C64::from_polar(1.0, -0.5 * (n as f64 + 0.5) * f.d * f.l);
        let gaussian = kind == SystemKind::TQ || mode == Transcription::Corrected;
        let psi = x
            .iter()
            .map(|&xi| {
                let mut v = phase
                    * norm
                    * hermite_poly(n, (f.u * f.d / 2.0).sqrt() * xi / f.g.sqrt())
                    * C64::from_polar(1.0, f.u * xi * xi / (4.0 * f.g));
                if gaussian {
                    v *= (-f.u * f.d * xi * xi / (4.0 * f.g)).exp();
                }
                v
            })
            .collect();
        Ok(sample(spec, kind, t, x, psi))
    }

    /// (X⁺(α), X⁻(α)).
    pub fn x_pm(spec: &SystemSpec, kind: SystemKind, x0: f64, p0: f64, t: TimeCoord) -> Result<(f64, f64)> {
        let f = frame(spec, kind, t)?;
        let (s, c) = (0.5 * f.d * f.l).sin_cos();
        let rg = f.g.sqrt();
        let a = 2.0 * rg / (f.u * f.d);
        let b = rg / f.d;
        Ok((p0 * a * s + x0 * b * (f.d * c - s), p0 * a * c - x0 * b * (c + f.d * s)))
    }

    /// Y⁻(α, θ).
    pub fn y_minus(spec: &SystemSpec, kind: SystemKind, x0: f64, p0: f64, theta: f64, t: TimeCoord) -> Result<f64> {
        let f = frame(spec, kind, t)?;
        let (s, c) = (0.5 * f.d * f.l - theta).sin_cos();
        let rg = f.g.sqrt();
        Ok(p0 * 2.0 * rg / (f.u * f.d) * c - x0 * rg / f.d * (c - f.d * s))
    }

    pub fn coherent_state(
        spec: &SystemSpec,
        kind: SystemKind,
        x0: f64,
        p0: f64,
        t: TimeCoord,
        x: &[f64],
        mode: Transcription,
    ) -> Result<WavefunctionSample> {
        check_grid(x)?;
        let f = frame(spec, kind, t)?;
        let (xp, xm) = x_pm(spec, kind, x0, p0, t)?;
        let front = C64::from_polar((f.u * f.d / (2.0 * PI)).powf(0.25) * (-0.25 * f.l).exp(), -0.25 * f.d * f.l);
        let front = if kind == SystemKind::TQ {
            C64::from_polar((f.u * f.d / (2.0 * PI)).powf(0.25), -0.25 * f.d * f.l)
        } else {
            front
        };
        let width = f.u * f.d / (2.0 * f.g);
        let shift = if kind == SystemKind::TQ && mode == Transcription::Verbatim {
            f.u * f.d / (2.0 * f.l.exp())
        } else {
            width
        };
        let psi = x
            .iter()
            .map(|&xi| {
                let d = xi - xp;
                let ph = f.u / (4.0 * f.g) * xi * xi + shift * (xi - 0.5 * xp) * xm;
                front * (-0.5 * width * d * d).exp() * C64::from_polar(1.0, ph)
            })
            .collect();
        Ok(sample(spec, kind, t, x, psi))
    }

    /// Q, R/Q, X⁺(α,z), X⁻(α,z), Y⁻ as printed.
    pub fn squeeze_geometry(
        spec: &SystemSpec,
        kind: SystemKind,
        x0: f64,
        p0: f64,
        r: f64,
        theta: f64,
        t: TimeCoord,
    ) -> Result<SqueezeGeometry> {
        let f = frame(spec, kind, t)?;
        let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
        let (s, c) = (f.d * f.l - theta).sin_cos();
        let bracket = ch + c * sh;
        let q = f.g / (f.u * f.d) * bracket;
        let r_over_q = f.u / f.g * (ch + (c - f.d * s) * sh) / bracket;
        let (xp, xm) = x_pm(spec, kind, x0, p0, t)?;
        let y = y_minus(spec, kind, x0, p0, theta, t)?;
        Ok(SqueezeGeometry { q, r_over_q, x_plus: xp, x_minus: xm * ch + y * sh, y_minus: y })
    }

    #[allow(clippy::too_many_arguments)]
    pub fn squeezed_state(
        spec: &SystemSpec,
        kind: SystemKind,
        x0: f64,
        p0: f64,
        r: f64,
        theta: f64,
        t: TimeCoord,
        x: &[f64],
        mode: Transcription,
    ) -> Result<WavefunctionSample> {
        StateFamily::Squeezed { x0, p0, r, theta }.validate()?;
        check_grid(x)?;
        let f = frame(spec, kind, t)?;
        let g = squeeze_geometry(spec, kind, x0, p0, r, theta, t)?;
        let a = 0.5 * f.d * f.l;
        let th = r.tanh();
        let num = C64::from_polar(1.0, -a) + C64::from_polar(th, a - theta);
        let root = match mode {
            Transcription::Corrected => {
                let inner = C64::new(1.0, 0.0) + C64::from_polar(th, 2.0 * a - theta);
                C64::from_polar(1.0, 0.5 * (-a + inner.arg()))
            }
            Transcription::Verbatim => {
                let den = C64::from_polar(1.0, a) + C64::from_polar(th, -(a + theta));
                (num / den).powf(0.25)
            }
        };
        let front = root * (1.0 / (2.0 * PI * g.q)).powf(0.25);
        let psi = x
            .iter()
            .map(|&xi| {
                let d = xi - g.x_plus;
                let ph = 0.25 * g.r_over_q * xi * xi + (xi - 0.5 * g.x_plus) * g.x_minus / (2.0 * g.q);
                front * (-0.25 * d * d / g.q).exp() * C64::from_polar(1.0, ph)
            })
            .collect();
        Ok(sample(spec, kind, t, x, psi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Transcription;
    use proptest::prelude::*;

    fn under() -> SystemSpec {
        SystemSpec::new(3.0, 2.0, 0.0).unwrap()
    }

    fn specs() -> Vec<SystemSpec> {
        [5.0, -5.0, 4.0, -4.0, 3.0, -3.0]
            .iter()
            .map(|&u| SystemSpec::new(u, 2.0, 0.0).unwrap())
            .collect()
    }

    fn times(spec: &SystemSpec, kind: SystemKind) -> Vec<TimeCoord> {
        let offs: Vec<f64> = match (kind, spec.sign) {
            (SystemKind::TO, Sign::Neg) => vec![0.0, 0.3 / spec.abs_upsilon(), 0.7 / spec.abs_upsilon()],
            (SystemKind::TO, Sign::Pos) => vec![0.0, 0.4, 1.5],
            _ => vec![-0.6, 0.0, 0.5],
        };
        offs.into_iter().map(|o| TimeCoord::new(kind, o)).collect()
    }

    #[test]
    fn hermite_explicit() {
        for u in [-1.3f64, 0.0, 0.4, 2.2] {
            let want = [
                1.0,
                2.0 * u,
                4.0 * u * u - 2.0,
                8.0 * u * u * u - 12.0 * u,
                16.0 * u.powi(4) - 48.0 * u * u + 12.0,
            ];
            for (n, w) in want.iter().enumerate() {
                assert!((hermite_poly(n, u) - w).abs() < 1e-12 * w.abs().max(1.0));
            }
            let f = hermite_functions(4, u);
            for (n, w) in want.iter().enumerate() {
                let expect = w * (-0.5 * u * u).exp()
                    / (2f64.powi(n as i32) * (1..=n).product::<usize>() as f64 * PI.sqrt()).sqrt();
                assert!((f[n] - expect).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn tq_ground_state_example() {
        let s = under();
        let x = linspace(-4.0, 4.0, 41);
        let psi = number_state(&s, SystemKind::TQ, 0, TimeCoord::new(SystemKind::TQ, 0.0), &x).unwrap();
        let ud = s.upsilon * s.delta;
        for (xi, p) in x.iter().zip(&psi.psi) {
            let want = (ud / (2.0 * PI)).powf(0.25)
                * C64::from_polar(1.0, s.upsilon * xi * xi / 4.0)
                * (-ud * xi * xi / 4.0).exp();
            assert!((p - want).norm() < 1e-13);
        }
        assert!(!psi.derived_case);
    }

    #[test]
    fn normalization_and_orthogonality_all_cases() {
        for spec in specs() {
            for kind in SystemKind::ALL {
                for t in times(&spec, kind) {
                    let fams = [
                        StateFamily::Number { n: 0 },
                        StateFamily::Number { n: 3 },
                        StateFamily::Coherent { x0: 1.0, p0: -0.5 },
                        StateFamily::Squeezed { x0: 0.5, p0: 1.0, r: 0.6, theta: 0.9 },
                    ];
                    for fam in fams {
                        let st = StateSpec { kind, family: fam };
                        let x = default_grid(&spec, &st, t, DEFAULT_POINTS).unwrap();
                        let w = state(&spec, &st, t, &x).unwrap();
                        let nrm = w.norm_sq().unwrap();
                        assert!((nrm - 1.0).abs() < 1e-8, "{:?} {kind} {fam:?} {t:?}: {nrm}", spec.label());
                    }
                    let st = StateSpec { kind, family: StateFamily::Number { n: 1 } };
                    let x = default_grid(&spec, &st, t, DEFAULT_POINTS).unwrap();
                    let a = number_state(&spec, kind, 0, t, &x).unwrap();
                    let b = number_state(&spec, kind, 1, t, &x).unwrap();
                    let c = number_state(&spec, kind, 2, t, &x).unwrap();
                    assert!(a.inner(&b).unwrap().norm() < 1e-8);
                    assert!(a.inner(&c).unwrap().norm() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn printed_forms_match_generic() {
        let s = under();
        for kind in SystemKind::ALL {
            for t in times(&s, kind) {
                let x = linspace(-8.0, 8.0, 401);
                for n in 0..4 {
                    let a = number_state(&s, kind, n, t, &x).unwrap();
                    let b = printed::number_state(&s, kind, n, t, &x, Transcription::Corrected).unwrap();
                    for (p, q) in a.psi.iter().zip(&b.psi) {
                        assert!((p - q).norm() < 1e-12, "{kind} n={n}");
                    }
                }
                let a = coherent_state(&s, kind, 1.0, 0.7, t, &x).unwrap();
                let b = printed::coherent_state(&s, kind, 1.0, 0.7, t, &x, Transcription::Corrected).unwrap();
                for (p, q) in a.psi.iter().zip(&b.psi) {
                    assert!((p - q).norm() < 1e-12, "{kind} coherent");
                }
                let a = squeezed_state(&s, kind, 1.0, 0.7, 0.5, 0.8, t, &x).unwrap();
                let b = printed::squeezed_state(&s, kind, 1.0, 0.7, 0.5, 0.8, t, &x, Transcription::Corrected)
                    .unwrap();
                for (p, q) in a.psi.iter().zip(&b.psi) {
                    assert!((p - q).norm() < 1e-12, "{kind} squeezed");
                }
                let fam = StateFamily::Squeezed { x0: 1.0, p0: 0.7, r: 0.5, theta: 0.8 };
                let g = squeeze_geometry(&s, kind, &fam, t).unwrap();
                let h = printed::squeeze_geometry(&s, kind, 1.0, 0.7, 0.5, 0.8, t).unwrap();
                for (a, b) in [
                    (g.q, h.q),
                    (g.r_over_q, h.r_over_q),
                    (g.x_plus, h.x_plus),
                    (g.x_minus, h.x_minus),
                    (g.y_minus, h.y_minus),
                ] {
                    assert!((a - b).abs() < 1e-12 * a.abs().max(1.0), "{kind} {g:?} {h:?}");
                }
            }
        }
    }

    #[test]
    fn verbatim_forms_fail_where_misprinted() {
        let s = under();
        let x = linspace(-8.0, 8.0, 401);
        let t = TimeCoord::new(SystemKind::TO, 0.4);
        let a = number_state(&s, SystemKind::TO, 1, t, &x).unwrap();
        let b = printed::number_state(&s, SystemKind::TO, 1, t, &x, Transcription::Verbatim).unwrap();
        assert!(a.l2_distance(&b, C64::new(1.0, 0.0)).unwrap() > 0.1);
        let t = TimeCoord::new(SystemKind::TQ, 0.4);
        let a = coherent_state(&s, SystemKind::TQ, 1.0, 0.7, t, &x).unwrap();
        let b = printed::coherent_state(&s, SystemKind::TQ, 1.0, 0.7, t, &x, Transcription::Verbatim).unwrap();
        assert!(a.l2_distance(&b, C64::new(1.0, 0.0)).unwrap() > 0.1);
        let a = squeezed_state(&s, SystemKind::TQ, 1.0, 0.7, 0.5, 0.8, t, &x).unwrap();
        let b = printed::squeezed_state(&s, SystemKind::TQ, 1.0, 0.7, 0.5, 0.8, t, &x, Transcription::Verbatim)
            .unwrap();
        assert!((b.norm_sq().unwrap() - 1.0).abs() > 1e-3);
        assert!(a.l2_distance(&b, C64::new(1.0, 0.0)).unwrap() > 1e-3);
    }

    #[test]
    fn geometry_examples() {
        let s = under();
        let ud = s.upsilon * s.delta;
        let sq = StateFamily::Squeezed { x0: 0.0, p0: 0.0, r: 0.5, theta: 0.0 };
        let g = squeeze_geometry(&s, SystemKind::TQ, &sq, TimeCoord::new(SystemKind::TQ, 0.0)).unwrap();
        assert!((g.q - 1f64.exp() / 7f64.sqrt()).abs() < 1e-12);
        assert!((g.q - 1.027_414).abs() < 1e-6);
        let t = TimeCoord::new(SystemKind::TO, 0.8);
        let tau = 1.0 + 3.0 * 0.8;
        let c = squeeze_geometry(&s, SystemKind::TO, &StateFamily::Coherent { x0: 1.0, p0: 1.0 }, t).unwrap();
        assert!((c.q - tau / ud).abs() < 1e-12);
        assert!((c.r_over_q - 3.0 / tau).abs() < 1e-12);
        let t0 = TimeCoord::new(SystemKind::TO, 0.0);
        let c = squeeze_geometry(&s, SystemKind::TO, &StateFamily::Coherent { x0: 1.0, p0: 1.0 }, t0).unwrap();
        assert!((c.x_minus - (2.0 / ud - 1.0 / s.delta)).abs() < 1e-12);
        assert!((c.x_plus - 1.0).abs() < 1e-12);
        let sq = StateFamily::Squeezed { x0: 0.0, p0: 0.0, r: 0.3, theta: 0.0 };
        let g = squeeze_geometry(&s, SystemKind::TO, &sq, t0).unwrap();
        assert!((g.q - 0.6f64.exp() / ud).abs() < 1e-12);
        let tm0 = TimeCoord::new(SystemKind::TM, 0.0);
        let (xc, _) = phase_center(&s, SystemKind::TM, 1.0, 1.0, tm0).unwrap();
        assert!((xc - 1.0).abs() < 1e-12);
    }

    #[test]
    fn squeezed_minus_identity_all_cases() {
        for spec in specs() {
            for kind in SystemKind::ALL {
                for t in times(&spec, kind) {
                    let c = squeeze_geometry(&spec, kind, &StateFamily::Coherent { x0: 0.8, p0: -0.3 }, t).unwrap();
                    let fam = StateFamily::Squeezed { x0: 0.8, p0: -0.3, r: 0.4, theta: -1.1 };
                    let g = squeeze_geometry(&spec, kind, &fam, t).unwrap();
                    let want = c.x_minus * 0.8f64.cosh() + g.y_minus * 0.8f64.sinh();
                    assert!((g.x_minus - want).abs() < 1e-10 * want.abs().max(1.0));
                    assert!((g.x_plus - c.x_plus).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let s = under();
        let t = TimeCoord::new(SystemKind::TQ, 0.0);
        let x = linspace(-1.0, 1.0, 11);
        assert!(matches!(squeezed_state(&s, SystemKind::TQ, 0.0, 0.0, -0.1, 0.0, t, &x), Err(Error::Domain(_))));
        assert!(matches!(squeezed_state(&s, SystemKind::TQ, 0.0, 0.0, 0.1, -PI, t, &x), Err(Error::Domain(_))));
        assert!(matches!(number_state(&s, SystemKind::TQ, 61, t, &x), Err(Error::Overflow(_))));
        assert!(matches!(number_state(&s, SystemKind::TQ, 0, t, &x[..4]), Err(Error::Grid(_))));
        let over = SystemSpec::new(5.0, 2.0, 0.0).unwrap();
        assert!(matches!(
            printed::number_state(&over, SystemKind::TQ, 0, t, &x, Transcription::Corrected),
            Err(Error::UnsupportedCase(_))
        ));
    }

    proptest! {
        #[test]
        fn squeezed_at_zero_r_is_coherent(x0 in -2.0..2.0f64, p0 in -2.0..2.0f64, off in -0.5..0.5f64, ks in 0usize..3, us in 0usize..6) {
            let spec = specs()[us];
            let kind = SystemKind::ALL[ks];
            let off = if kind == SystemKind::TO { off.abs() * 0.5 / spec.abs_upsilon() } else { off };
            let t = TimeCoord::new(kind, off);
            let x = linspace(-6.0, 6.0, 121);
            let a = coherent_state(&spec, kind, x0, p0, t, &x).unwrap();
            let b = squeezed_state(&spec, kind, x0, p0, 0.0, 0.3, t, &x).unwrap();
            for (p, q) in a.psi.iter().zip(&b.psi) {
                prop_assert!((p - q).norm() < 1e-10);
            }
        }

        #[test]
        fn width_is_positive(r in 0.0..2.0f64, th in -3.1..3.1f64, off in -1.0..1.0f64) {
            let spec = under();
            let fam = StateFamily::Squeezed { x0: 0.0, p0: 0.0, r, theta: th };
            let g = squeeze_geometry(&spec, SystemKind::TQ, &fam, TimeCoord::new(SystemKind::TQ, off)).unwrap();
            prop_assert!(g.q > 0.0);
        }
    }
}
