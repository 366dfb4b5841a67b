use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::{GaussianTemporalMode, InternalState, PolarizationState, TemporalMode};
use crate::C64;

/// Polarisation recipe for the three photons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Recipe {
    /// All photons `|H>`; triad phase 0.
    AllH,
    /// `|H>`, `(|H> + sqrt3 |V>)/2`, `(|H> - sqrt3 |V>)/2`; triad phase pi.
    StaticPi,
    /// `cos 2theta |H> + i sin 2theta |V>`, `(sqrt3 |H> + |V>)/2`, `(sqrt3 |H> - |V>)/2`.
    Dynamic { theta: f64 },
    Custom { polarizations: [PolarizationState; 3] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecipeKind {
    AllH,
    StaticPi,
    Dynamic,
    Custom,
}

impl Recipe {
    pub fn name(&self) -> &'static str {
        match self {
            Recipe::AllH => "all_h",
            Recipe::StaticPi => "static_pi",
            Recipe::Dynamic { .. } => "dynamic",
            Recipe::Custom { .. } => "custom",
        }
    }

    pub fn polarizations(&self) -> [PolarizationState; 3] {
        let re = |x: f64| C64::new(x, 0.0);
        let pol = |h: C64, v: C64| PolarizationState::new(h, v).expect("unit polarisation");
        let s3 = 3f64.sqrt() / 2.0;
        let h = PolarizationState::horizontal();
        match *self {
            Recipe::AllH => [h; 3],
            Recipe::StaticPi => [h, pol(re(0.5), re(s3)), pol(re(0.5), re(-s3))],
            Recipe::Dynamic { theta } => [
                pol(re((2.0 * theta).cos()), C64::new(0.0, (2.0 * theta).sin())),
                pol(re(s3), re(0.5)),
                pol(re(s3), re(-0.5)),
            ],
            Recipe::Custom { polarizations } => polarizations,
        }
    }
}

fn default_sigma() -> f64 {
    1.0
}

/// Polarisations plus Gaussian temporal modes `(t1, t2, t3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPreparation", into = "RawPreparation")]
pub struct Preparation {
    pub recipe: Recipe,
    pub delays: [f64; 3],
    pub sigma: f64,
    pub omega: f64,
}

/// Flat on-disk form. A dynamic recipe without explicit delays gets the
/// delays from [`delay_condition`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPreparation {
    recipe: RecipeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    polarizations: Option<[PolarizationState; 3]>,
    #[serde(default)]
    delays: Option<[f64; 3]>,
    #[serde(default = "default_sigma")]
    sigma: f64,
    #[serde(default)]
    omega: f64,
}

impl TryFrom<RawPreparation> for Preparation {
    type Error = Error;

    fn try_from(raw: RawPreparation) -> Result<Self> {
        let extra = |what: &str| Error::domain(format!("{what} is not used by recipe {:?}", raw.recipe));
        let recipe = match raw.recipe {
            RecipeKind::Dynamic => Recipe::Dynamic {
                theta: raw.theta.ok_or_else(|| Error::domain("dynamic recipe needs theta"))?,
            },
            RecipeKind::Custom => Recipe::Custom {
                polarizations: raw
                    .polarizations
                    .ok_or_else(|| Error::domain("custom recipe needs polarizations"))?,
            },
            RecipeKind::AllH => Recipe::AllH,
            RecipeKind::StaticPi => Recipe::StaticPi,
        };
        if raw.theta.is_some() && raw.recipe != RecipeKind::Dynamic {
            return Err(extra("theta"));
        }
        if raw.polarizations.is_some() && raw.recipe != RecipeKind::Custom {
            return Err(extra("polarizations"));
        }
        if !(raw.sigma > 0.0 && raw.sigma.is_finite()) {
            return Err(Error::domain(format!("sigma {} must be positive", raw.sigma)));
        }
        let delays = match (raw.delays, recipe) {
            (Some(d), _) => d,
            (None, Recipe::Dynamic { theta }) => Preparation::dynamic(theta, raw.sigma).delays,
            (None, _) => [0.0; 3],
        };
        Ok(Preparation { recipe, delays, sigma: raw.sigma, omega: raw.omega })
    }
}

impl From<Preparation> for RawPreparation {
    fn from(p: Preparation) -> Self {
        let (recipe, theta, polarizations) = match p.recipe {
            Recipe::AllH => (RecipeKind::AllH, None, None),
            Recipe::StaticPi => (RecipeKind::StaticPi, None, None),
            Recipe::Dynamic { theta } => (RecipeKind::Dynamic, Some(theta), None),
            Recipe::Custom { polarizations } => (RecipeKind::Custom, None, Some(polarizations)),
        };
        RawPreparation { recipe, theta, polarizations, delays: Some(p.delays), sigma: p.sigma, omega: p.omega }
    }
}

impl Preparation {
    pub fn new(recipe: Recipe, delays: [f64; 3], sigma: f64) -> Self {
        Preparation { recipe, delays, sigma, omega: 0.0 }
    }

    /// Dynamic recipe with `t2 = t3 = 0` and `t1` set by [`delay_condition`],
    /// so that all three overlap moduli equal 1/2.
    pub fn dynamic(theta: f64, sigma: f64) -> Self {
        let d = delay_condition(theta, sigma);
        Preparation::new(Recipe::Dynamic { theta }, [-d, 0.0, 0.0], sigma)
    }

    /// `t1 = -tau/2`, `t2 = 0`, `t3 = tau/2`.
    pub fn symmetric_scan(recipe: Recipe, tau: f64, sigma: f64) -> Self {
        Preparation::new(recipe, [-tau / 2.0, 0.0, tau / 2.0], sigma)
    }
}

/// The three internal states of `prep`.
pub fn prepare(prep: &Preparation) -> Result<[InternalState; 3]> {
    if !prep.delays.iter().all(|t| t.is_finite()) {
        return Err(Error::domain("delays must be finite"));
    }
    let pols = prep.recipe.polarizations();
    let mut out = Vec::with_capacity(3);
    for (i, pol) in pols.into_iter().enumerate() {
        let t = GaussianTemporalMode::new(prep.delays[i], prep.sigma, prep.omega)?;
        out.push(InternalState::new(TemporalMode::Gaussian(t), pol)?);
    }
    Ok(out.try_into().expect("three states"))
}

/// `|t1 - t2| = |t1 - t3| = sigma sqrt(2 ln(2 + cos 4theta))` with `t2 = t3`.
pub fn delay_condition(theta: f64, sigma: f64) -> f64 {
    sigma * (2.0 * (2.0 + (4.0 * theta).cos()).ln()).max(0.0).sqrt()
}

/// Triad phase produced by the dynamic recipe, continuous on `theta` in
/// `[0, pi/2]` where it runs from 0 to `2 pi`.
pub fn dynamic_phase(theta: f64) -> f64 {
    let p = 2.0 * (2.0 * theta).sin().atan2(3f64.sqrt() * (2.0 * theta).cos());
    if p < 0.0 {
        p + 2.0 * PI
    } else {
        p
    }
}

/// Inverse of [`dynamic_phase`] on `[0, 2 pi]`.
pub fn theta_for_phase(phi: f64) -> f64 {
    let half = phi / 2.0;
    0.5 * (3f64.sqrt() * half.sin()).atan2(half.cos())
}
