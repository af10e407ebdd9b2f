//! Real solutions of the Euler equation w'' + A s⁻² w = 0, their normalization
//! to unit Wronskian in t′, and the complex solution ξ with W(ξ, ξ̄) = −i.

use crate::error::{domain, Error, Result};
use crate::model::{tau_of, Regime, SystemKind, SystemSpec, TimeCoord, CRITICAL_REL_TOL};
use crate::timefuncs::eval_timefuncs;
use num_complex::Complex64 as C64;

/// The regime-appropriate real basis {w₁, w₂} of the Euler equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealBasis {
    pub regime: Regime,
    pub delta: f64,
    /// W_s(w₁, w₂): Δ, 1 or Δ/2.
    pub wronskian_const: f64,
}

/// Values and s-derivatives (w₁, w₁′, w₂, w₂′).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisValues {
    pub w1: f64,
    pub w1_prime: f64,
    pub w2: f64,
    pub w2_prime: f64,
}

/// Basis for w'' + A s⁻² w = 0, classified by the sign of 1 − 4A.
pub fn euler_basis(a: f64) -> RealBasis {
    let disc = 1.0 - 4.0 * a;
    if disc.abs() <= CRITICAL_REL_TOL * (4.0 * a.abs()).max(1.0) {
        return basis_for(Regime::Critical, 0.0);
    }
    let delta = disc.abs().sqrt();
    basis_for(if disc > 0.0 { Regime::Over } else { Regime::Under }, delta)
}

fn basis_for(regime: Regime, delta: f64) -> RealBasis {
    let wronskian_const = match regime {
        Regime::Over => delta,
        Regime::Critical => 1.0,
        Regime::Under => delta / 2.0,
    };
    RealBasis { regime, delta, wronskian_const }
}

impl RealBasis {
    /// The basis with A = ω²/Υ², following the spec's (possibly forced) regime.
    pub fn for_spec(spec: &SystemSpec) -> RealBasis {
        basis_for(spec.regime, spec.delta)
    }

    pub fn eval(&self, s: f64) -> Result<BasisValues> {
        if !(s > 0.0) {
            return Err(domain(format!("Euler basis needs s > 0, got {s}")));
        }
        let d = self.delta;
        let l = s.ln();
        let rs = s.sqrt();
        Ok(match self.regime {
            Regime::Over => {
                let k1 = 0.5 * (1.0 - d);
                let k2 = 0.5 * (1.0 + d);
                let w1 = rs * (-d / 2.0 * l).exp();
                let w2 = rs * (d / 2.0 * l).exp();
                BasisValues { w1, w1_prime: k1 * w1 / s, w2, w2_prime: k2 * w2 / s }
            }
            Regime::Critical => BasisValues {
                w1: rs,
                w1_prime: 0.5 / rs,
                w2: rs * l,
                w2_prime: (1.0 + 0.5 * l) / rs,
            },
            Regime::Under => {
                let (sn, cs) = (d / 2.0 * l).sin_cos();
                BasisValues {
                    w1: rs * cs,
                    w1_prime: (0.5 * cs - d / 2.0 * sn) / rs,
                    w2: rs * sn,
                    w2_prime: (0.5 * sn + d / 2.0 * cs) / rs,
                }
            }
        })
    }

    /// W_s(w₁, w₂) evaluated from the basis values.
    pub fn wronskian_at(&self, s: f64) -> Result<f64> {
        let b = self.eval(s)?;
        Ok(b.w1 * b.w2_prime - b.w1_prime * b.w2)
    }
}

/// γᵢ(t′) = Cᵢ wᵢ(τ) with W_{t′}(γ₁, γ₂) = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedPair {
    pub basis: RealBasis,
    pub upsilon: f64,
    pub c1: f64,
    pub c2: f64,
    spec: SystemSpec,
}

/// (γ₁, γ̇₁, γ₂, γ̇₂) at one t′; dots are d/dt′.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaValues {
    pub g1: f64,
    pub g1_dot: f64,
    pub g2: f64,
    pub g2_dot: f64,
}

/// Fixes C₁ = √(1/(|Υ|W)) and C₂ = sign(Υ)·C₁, so that C₁C₂·W·Υ = 1.
pub fn normalize_pair(spec: &SystemSpec, basis: RealBasis) -> Result<NormalizedPair> {
    let w = basis.wronskian_const;
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::Degenerate(format!("basis Wronskian {w} is not positive")));
    }
    let c1 = (1.0 / (spec.abs_upsilon() * w)).sqrt();
    let c2 = spec.sign.factor() * c1;
    Ok(NormalizedPair { basis, upsilon: spec.upsilon, c1, c2, spec: *spec })
}

impl NormalizedPair {
    pub fn eval(&self, dtp: f64) -> Result<GammaValues> {
        let tau = tau_of(&self.spec, dtp)?;
        let b = self.basis.eval(tau)?;
        let u = self.upsilon;
        Ok(GammaValues {
            g1: self.c1 * b.w1,
            g1_dot: self.c1 * u * b.w1_prime,
            g2: self.c2 * b.w2,
            g2_dot: self.c2 * u * b.w2_prime,
        })
    }

    pub fn wronskian(&self, dtp: f64) -> Result<f64> {
        let g = self.eval(dtp)?;
        Ok(g.g1 * g.g2_dot - g.g1_dot * g.g2)
    }

    /// √½(γ₁ + iγ₂) and its t′-derivative.
    pub fn xi(&self, dtp: f64) -> Result<(C64, C64)> {
        let g = self.eval(dtp)?;
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Ok((C64::new(g.g1, g.g2) * r, C64::new(g.g1_dot, g.g2_dot) * r))
    }
}

/// Step for central second differences in t′: 1e−3·τ/|Υ|, small against the
/// local time scale of the τ-power solutions while keeping roundoff near 1e−10.
pub fn second_difference_step(spec: &SystemSpec, dtp: f64) -> Result<f64> {
    Ok(1e-3 * tau_of(spec, dtp)? / spec.abs_upsilon())
}

/// Closed-form ξ(t′) and ξ̇(t′) taken from the TO time functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiSolution {
    spec: SystemSpec,
}

pub fn xi_closed_form(spec: &SystemSpec) -> XiSolution {
    XiSolution { spec: *spec }
}

impl XiSolution {
    pub fn eval(&self, dtp: f64) -> Result<(C64, C64)> {
        let f = eval_timefuncs(&self.spec, SystemKind::TO, TimeCoord::new(SystemKind::TO, dtp))?;
        Ok((f.xi, f.xi_dot))
    }

    /// W_{t′}(ξ, ξ̄) = ξ ξ̄̇ − ξ̇ ξ̄.
    pub fn wronskian(&self, dtp: f64) -> Result<C64> {
        let (x, xd) = self.eval(dtp)?;
        Ok(x * xd.conj() - xd * x.conj())
    }

    /// Residual ξ̈ + ω²/τ² ξ with a central second difference of step `h`.
    pub fn ode_residual(&self, dtp: f64, h: f64) -> Result<(C64, C64)> {
        let (xm, _) = self.eval(dtp - h)?;
        let (x0, _) = self.eval(dtp)?;
        let (xp, _) = self.eval(dtp + h)?;
        let tau = tau_of(&self.spec, dtp)?;
        let xdd = (xp - x0 * 2.0 + xm) / (h * h);
        let w2 = self.spec.omega * self.spec.omega / (tau * tau);
        Ok((xdd + x0 * w2, xdd))
    }
}
