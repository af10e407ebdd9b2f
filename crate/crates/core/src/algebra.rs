//! The os(1) generators J₋, J₊, M as coefficient vectors over {P, X, T, D, X², I},
//! and their action on sampled wavefunctions.
//!
//! Operators: P = −i∂ₓ, X = x·, T = i∂ₜ in the native time, D = ½(XP + PX).

use crate::error::{Error, Result};
use crate::model::{SystemKind, SystemSpec, TimeCoord, Transcription};
use crate::numerics::d1_5pt;
use crate::states::{check_grid, WavefunctionSample};
use crate::timefuncs::{eval_timefuncs, Case};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorName {
    Jminus,
    Jplus,
    M,
}

impl GeneratorName {
    pub const ALL: [GeneratorName; 3] = [GeneratorName::Jminus, GeneratorName::Jplus, GeneratorName::M];
}

impl fmt::Display for GeneratorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorName::Jminus => "jminus",
            GeneratorName::Jplus => "jplus",
            GeneratorName::M => "m",
        })
    }
}

impl FromStr for GeneratorName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jminus" | "j-" => Ok(GeneratorName::Jminus),
            "jplus" | "j+" => Ok(GeneratorName::Jplus),
            "m" => Ok(GeneratorName::M),
            _ => Err(Error::Domain(format!("unknown generator '{s}'"))),
        }
    }
}

/// Where a coefficient vector came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoeffSource {
    Derived,
    Printed(Transcription),
}

/// Σ cᵢOᵢ over the basis {P, X, T, D, X², I}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorCoeffs {
    pub name: GeneratorName,
    pub case: Case,
    pub t: TimeCoord,
    pub source: CoeffSource,
    pub p: C64,
    pub x: C64,
    pub t_coeff: C64,
    pub d: C64,
    pub x2: C64,
    pub i: C64,
}

impl GeneratorCoeffs {
    fn zero(name: GeneratorName, case: Case, t: TimeCoord, source: CoeffSource) -> Self {
        let z = C64::new(0.0, 0.0);
        GeneratorCoeffs { name, case, t, source, p: z, x: z, t_coeff: z, d: z, x2: z, i: z }
    }

    pub fn as_array(&self) -> [C64; 6] {
        [self.p, self.x, self.t_coeff, self.d, self.x2, self.i]
    }

    /// Largest absolute coefficient difference.
    pub fn max_diff(&self, other: &GeneratorCoeffs) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// The D operator realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DConvention {
    /// D = ½(XP + PX) = −i(x∂ₓ + ½).
    Symmetric,
    /// D = XP = −i x∂ₓ.
    Plain,
}

/// Generator built from the time-function bundle; valid for all 18 cases.
pub fn generator(spec: &SystemSpec, kind: SystemKind, name: GeneratorName, t: TimeCoord) -> Result<GeneratorCoeffs> {
    let f = eval_timefuncs(spec, kind, t)?;
    let mut g = GeneratorCoeffs::zero(name, f.case, t, CoeffSource::Derived);
    let s = f.state_pair();
    let i = C64::i();
    match name {
        GeneratorName::Jminus => {
            g.p = i * s.u;
            g.x = -i * s.v;
        }
        GeneratorName::Jplus => {
            g.p = -i * s.u.conj();
            g.x = i * s.v.conj();
        }
        GeneratorName::M => {
            let (ct, cd, cx2) = match (kind, f.tq) {
                (SystemKind::TQ, Some(q)) => {
                    let pp = q.xi_p.norm_sqr();
                    let px = (q.xi_p.conj() * q.xi_x).re;
                    (
                        2.0 * pp,
                        spec.upsilon * pp - 2.0 * px,
                        q.xi_x.norm_sqr() - spec.omega * spec.omega * pp,
                    )
                }
                (SystemKind::TM, _) => {
                    (f.phi3 * (-f.log_time).exp(), -0.5 * f.phi3_dot, 0.25 * f.phi3_ddot)
                }
                _ => (f.phi3, -0.5 * f.phi3_dot, 0.25 * f.phi3_ddot),
            };
            g.t_coeff = ct.into();
            g.d = cd.into();
            g.x2 = cx2.into();
        }
    }
    Ok(g)
}

/// Applies Σ cᵢOᵢ to ψ, given ∂ψ/∂t in the native time on the same grid.
pub fn apply_generator(
    coeffs: &GeneratorCoeffs,
    psi: &WavefunctionSample,
    dpsi_dt: &WavefunctionSample,
    conv: DConvention,
) -> Result<WavefunctionSample> {
    let h = check_grid(&psi.x)?;
    if dpsi_dt.psi.len() != psi.psi.len() || psi.psi.len() != psi.x.len() {
        return Err(Error::Grid("wavefunction and time derivative lengths differ".into()));
    }
    let dx = d1_5pt(&psi.psi, h)?;
    let i = C64::i();
    let half = match conv {
        DConvention::Symmetric => 0.5,
        DConvention::Plain => 0.0,
    };
    let out = psi
        .x
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let p = psi.psi[k];
            let d = dx[k];
            coeffs.p * (-i * d)
                + coeffs.x * x * p
                + coeffs.t_coeff * (i * dpsi_dt.psi[k])
                + coeffs.d * (-i * (x * d + half * p))
                + coeffs.x2 * (x * x) * p
                + coeffs.i * p
        })
        .collect();
    Ok(WavefunctionSample { x: psi.x.clone(), psi: out, t: psi.t, derived_case: psi.derived_case })
}

/// The generators printed for six cases, transcribed verbatim or with the
/// misprints repaired.
pub mod printed {
    use super::*;
    use crate::model::{chi_of, tau_of, Regime, Sign};

    pub fn printed_cases() -> Vec<Case> {
        use Regime::*;
        use Sign::*;
        use SystemKind::*;
        [
            (TO, Under, Pos),
            (TM, Under, Pos),
            (TM, Under, Neg),
            (TM, Critical, Pos),
            (TM, Over, Pos),
            (TQ, Under, Pos),
        ]
        .into_iter()
        .map(|(kind, regime, sign)| Case { kind, regime, sign })
        .collect()
    }

    pub fn generator(
        spec: &SystemSpec,
        kind: SystemKind,
        name: GeneratorName,
        t: TimeCoord,
        mode: Transcription,
    ) -> Result<GeneratorCoeffs> {
        let case = Case::of(spec, kind);
        if !printed_cases().contains(&case) {
            return Err(Error::UnsupportedCase(format!("no printed generators for {}", case.label())));
        }
        if t.kind != kind {
            return Err(Error::Domain(format!("time coordinate is for {} not {}", t.kind, kind)));
        }
        let mut g = GeneratorCoeffs::zero(name, case, t, CoeffSource::Printed(mode));
        let i = C64::i();
        let one = C64::new(1.0, 0.0);
        let u = spec.upsilon;
        let a = spec.abs_upsilon();
        let d = spec.delta;
        let fixed = mode == Transcription::Corrected;
        match (case.kind, case.regime, case.sign) {
            (SystemKind::TO, _, _) => {
                let tau = tau_of(spec, t.offset)?;
                let l = tau.ln();
                let c = (1.0 / (u * d)).sqrt();
                let rt = tau.sqrt();
                match name {
                    GeneratorName::Jminus => {
                        let e = C64::from_polar(c, 0.5 * d * l);
                        g.p = i * e * rt;
                        g.x = -i * e * (u / 2.0) * C64::new(1.0, d) / rt;
                    }
                    GeneratorName::Jplus => {
                        let e = C64::from_polar(c, -0.5 * d * l);
                        g.p = -i * e * rt;
                        g.x = i * e * (u / 2.0) * C64::new(1.0, -d) / rt;
                    }
                    GeneratorName::M => {
                        g.t_coeff = (2.0 * tau / (u * d)).into();
                        g.d = (-1.0 / d).into();
                    }
                }
            }
            (SystemKind::TM, Regime::Under, Sign::Pos) => {
                let chi = chi_of(spec, t.offset);
                let c = (1.0 / (u * d)).sqrt() * (0.5 * chi).exp();
                match name {
                    GeneratorName::Jminus => {
                        let e = C64::from_polar(c, 0.5 * d * chi);
                        g.p = i * e;
                        g.x = -i * e * (u / 2.0) * C64::new(1.0, d) * (-chi).exp();
                    }
                    GeneratorName::Jplus => {
                        let e = C64::from_polar(c, -0.5 * d * chi);
                        g.p = -i * e;
                        g.x = i * e * (u / 2.0) * C64::new(1.0, -d) * (-chi).exp();
                    }
                    GeneratorName::M => {
                        g.t_coeff = (2.0 / (u * d)).into();
                        g.d = (-1.0 / d).into();
                    }
                }
            }
            (SystemKind::TM, Regime::Under, Sign::Neg) => {
                let chi = chi_of(spec, t.offset);
                let c = (1.0 / (a * d)).sqrt() * (0.5 * chi).exp();
                match name {
                    GeneratorName::Jminus => {
                        let e = C64::from_polar(c, -0.5 * d * chi);
                        g.p = i * e;
                        g.x = i * e * (a / 2.0) * C64::new(1.0, -d) * (-chi).exp();
                    }
                    GeneratorName::Jplus => {
                        let e = C64::from_polar(c, 0.5 * d * chi);
                        g.p = -i * e;
                        g.x = -i * e * (a / 2.0) * C64::new(1.0, d) * (-chi).exp();
                    }
                    GeneratorName::M => {
                        g.t_coeff = (2.0 / (a * d)).into();
                        g.d = (1.0 / d).into();
                    }
                }
            }
            (SystemKind::TM, Regime::Critical, _) => {
                let chi = chi_of(spec, t.offset);
                let c = (1.0 / (2.0 * u)).sqrt() * (0.5 * chi).exp();
                let em = (-chi).exp();
                match name {
                    GeneratorName::Jminus => {
                        g.p = i * c * C64::new(1.0, chi);
                        let term = -i * c * u * em * C64::new(0.5, 1.0 + 0.5 * chi);
                        if fixed {
                            g.x = term;
                        } else {
                            g.i = term;
                        }
                    }
                    GeneratorName::Jplus => {
                        g.p = -i * c * C64::new(1.0, -chi);
                        let term = i * c * u * em * C64::new(0.5, -(1.0 + 0.5 * chi));
                        if fixed {
                            g.x = term;
                        } else {
                            g.i = term;
                        }
                    }
                    GeneratorName::M => {
                        g.t_coeff = ((1.0 + chi * chi) / u).into();
                        g.d = (-0.5 * (1.0 + chi).powi(2)).into();
                        let x2 = 0.5 * em * (1.0 + chi);
                        g.x2 = (if fixed { u * x2 } else { x2 }).into();
                    }
                }
            }
            (SystemKind::TM, Regime::Over, _) => {
                let chi = chi_of(spec, t.offset);
                let c = (1.0 / (2.0 * u * d)).sqrt() * (0.5 * chi).exp();
                let (em, ep) = ((-0.5 * d * chi).exp(), (0.5 * d * chi).exp());
                let ex = (-chi).exp();
                match name {
                    GeneratorName::Jminus => {
                        g.p = i * c * C64::new(em, ep);
                        g.x = -i * c * (u / 2.0) * ex * C64::new((1.0 - d) * em, (1.0 + d) * ep);
                    }
                    GeneratorName::Jplus => {
                        g.p = -i * c * C64::new(em, -ep);
                        g.x = i * c * (u / 2.0) * ex * C64::new((1.0 - d) * em, -(1.0 + d) * ep);
                    }
                    GeneratorName::M => {
                        let (e2m, e2p) = (em * em, ep * ep);
                        let ct = (e2m + e2p) / (2.0 * u * d);
                        g.t_coeff = (if fixed { 2.0 * ct } else { ct }).into();
                        g.d = (-((1.0 - d) * e2m + (1.0 + d) * e2p) / (2.0 * d)).into();
                        let x2 = -(u / 4.0) * ex * (-(1.0 - d) * e2m + (1.0 + d) * e2p);
                        g.x2 = (if fixed { -x2 } else { x2 }).into();
                    }
                }
            }
            (SystemKind::TQ, _, _) => {
                let chi = chi_of(spec, t.offset);
                let c = (1.0 / (u * d)).sqrt();
                match name {
                    GeneratorName::Jminus => {
                        let e = C64::from_polar(c, 0.5 * d * chi);
                        g.p = i * e;
                        g.x = -i * e * (u / 2.0) * C64::new(1.0, d);
                    }
                    GeneratorName::Jplus => {
                        let e = C64::from_polar(c, -0.5 * d * chi);
                        g.p = -i * e;
                        g.x = i * e * (u / 2.0) * C64::new(1.0, -d);
                    }
                    GeneratorName::M => {
                        g.t_coeff = (2.0 / (u * d)) * one;
                    }
                }
            }
        }
        Ok(g)
    }
}
