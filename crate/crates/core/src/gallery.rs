//! Symbol families, `S¹` sweeps over a scale grid, and growth fits.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hankel::{build_hankel, schatten1};
use crate::seqsym::{DiscreteSymbol, Step, TailModel};
use crate::smoothbound::{ab_quantities, BoundReport, SmoothSymbol};

/// Complex numbers as `[re, im]` or a bare real.
mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Real(f64),
        Pair([f64; 2]),
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        Ok(match Repr::deserialize(d)? {
            Repr::Real(re) => Complex64::new(re, 0.0),
            Repr::Pair([re, im]) => Complex64::new(re, im),
        })
    }
}

/// Which power-law sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PowerVariant {
    /// `(1+n)^{−z}`
    #[default]
    OnePlus,
    /// `max(1,n)^{−z}`
    Max,
}

/// A symbol family with its parameters, as read from JSON
/// `{"family": "...", "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum FamilySpec {
    /// `e^{−z n^r}`
    Heat {
        r: f64,
        #[serde(with = "complex_pair", default = "one")]
        z: Complex64,
    },
    /// `(1 − n/N)₊`
    Fejer {
        #[serde(rename = "N")]
        n: u64,
    },
    /// `(1 − n²/N²)^δ` on `n ≤ N`
    BochnerRiesz {
        #[serde(rename = "N")]
        n: u64,
        #[serde(with = "complex_pair")]
        delta: Complex64,
    },
    Powerlaw {
        #[serde(with = "complex_pair")]
        z: Complex64,
        #[serde(default)]
        variant: PowerVariant,
    },
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl FamilySpec {
    /// Heat symbol with `z = e^{iω}`.
    pub fn heat_angle(r: f64, omega: f64) -> Self {
        FamilySpec::Heat {
            r,
            z: Complex64::from_polar(1.0, omega),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |z: Complex64| z.re.is_finite() && z.im.is_finite();
        match *self {
            FamilySpec::Heat { r, z } => {
                if !(r > 0.0 && r.is_finite()) {
                    return Err(Error::invalid(format!("heat exponent r must be positive, got {r}")));
                }
                if !(finite(z) && z.re > 0.0) {
                    return Err(Error::invalid(format!("heat needs Re z > 0, got {z}")));
                }
            }
            FamilySpec::Fejer { n } => {
                if n == 0 {
                    return Err(Error::invalid("Fejer needs N >= 1"));
                }
            }
            FamilySpec::BochnerRiesz { n, delta } => {
                if n == 0 {
                    return Err(Error::invalid("Bochner-Riesz needs N >= 1"));
                }
                if !(finite(delta) && delta.re > 0.0) {
                    return Err(Error::invalid(format!("Bochner-Riesz needs Re delta > 0, got {delta}")));
                }
            }
            FamilySpec::Powerlaw { z, .. } => {
                if !(finite(z) && z.re > 0.0) {
                    return Err(Error::invalid(format!("power law needs Re z > 0, got {z}")));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Heat { .. } => "heat",
            FamilySpec::Fejer { .. } => "fejer",
            FamilySpec::BochnerRiesz { .. } => "bochner_riesz",
            FamilySpec::Powerlaw { .. } => "powerlaw",
        }
    }

    /// `ω = |arg z|` for the families with a complex parameter.
    pub fn omega(&self) -> Option<f64> {
        match *self {
            FamilySpec::Heat { z, .. } | FamilySpec::Powerlaw { z, .. } => Some(z.arg().abs()),
            _ => None,
        }
    }

    /// `K = 1 + tan²ω`.
    pub fn k_constant(&self) -> Option<f64> {
        self.omega().map(|w| 1.0 + w.tan().powi(2))
    }

    /// `α` used for the bound functionals; `None` when no admissible value exists.
    pub fn default_alpha(&self) -> Option<f64> {
        match *self {
            FamilySpec::Heat { r, .. } => Some(r.min(1.0) / 2.0),
            // Half of min(a, 1)/2: ℓ² tails then decay like K^{−3a/2}.
            FamilySpec::Powerlaw { z, variant: PowerVariant::OnePlus } => Some(z.re.min(1.0) / 4.0),
            _ => None,
        }
    }

    /// Dilation `s` with `φ_t(n) = f(s·n)`: heat rows are indexed by the
    /// semigroup time `t`, so `s = t^{1/r}`; power laws by `s = t`.
    pub fn dilation(&self, t: f64) -> f64 {
        match *self {
            FamilySpec::Heat { r, .. } => t.powf(1.0 / r),
            _ => t,
        }
    }

    /// Whether the family carries a scale parameter `t`.
    pub fn is_scaled(&self) -> bool {
        matches!(
            self,
            FamilySpec::Heat { .. }
                | FamilySpec::Powerlaw {
                    variant: PowerVariant::OnePlus,
                    ..
                }
        )
    }
}

/// Discrete symbol of the family and, where one exists, the smooth symbol it samples.
pub fn family_symbol(spec: &FamilySpec) -> Result<(DiscreteSymbol, Option<SmoothSymbol>)> {
    spec.validate()?;
    Ok(match *spec {
        FamilySpec::Heat { r, z } => {
            let disc = DiscreteSymbol::new(format!("heat(r={r}, z={z})"), move |n| {
                (-z * (n as f64).powf(r)).exp()
            })
            .with_tail(TailModel::StretchedExp {
                rate: z.re,
                exponent: r,
                coeff: 1.0,
            });
            (disc, Some(heat_smooth(r, z)))
        }
        FamilySpec::Fejer { n } => {
            let nf = n as f64;
            let disc = DiscreteSymbol::real(format!("fejer(N={n})"), move |k| {
                (1.0 - k as f64 / nf).max(0.0)
            })
            .with_tail(TailModel::Finite { last: n });
            (disc, None)
        }
        FamilySpec::BochnerRiesz { n, delta } => {
            let nf = n as f64;
            let disc = DiscreteSymbol::new(format!("bochner_riesz(N={n}, delta={delta})"), move |k| {
                let base = 1.0 - (k as f64 / nf).powi(2);
                if base <= 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    (delta * base.ln()).exp()
                }
            })
            .with_tail(TailModel::Finite { last: n });
            (disc, None)
        }
        FamilySpec::Powerlaw { z, variant } => {
            let a = z.re;
            let disc = match variant {
                PowerVariant::OnePlus => {
                    DiscreteSymbol::new(format!("powerlaw(1+n, z={z})"), move |n| {
                        (-z * (1.0 + n as f64).ln()).exp()
                    })
                }
                PowerVariant::Max => DiscreteSymbol::new(format!("powerlaw(max(1,n), z={z})"), move |n| {
                    (-z * (n.max(1) as f64).ln()).exp()
                }),
            }
            .with_tail(TailModel::PowerLaw {
                exponent: a,
                coeff: if variant == PowerVariant::Max { 2f64.powf(a) } else { 1.0 },
            });
            let smooth = (variant == PowerVariant::OnePlus).then(|| powerlaw_smooth(z));
            (disc, smooth)
        }
    })
}

/// `φ_t`: the family's symbol at scale `t`; families without a scale ignore `t`.
pub fn scaled_symbol(spec: &FamilySpec, t: f64) -> Result<DiscreteSymbol> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("scale must be positive, got {t}")));
    }
    let (disc, smooth) = family_symbol(spec)?;
    Ok(match smooth {
        Some(s) if spec.is_scaled() => s.sample(spec.dilation(t)),
        _ => disc,
    })
}

/// Step difference of `φ_t`, with the sharper difference tail where the family has one.
pub fn scaled_difference(spec: &FamilySpec, t: f64, step: Step) -> Result<DiscreteSymbol> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("scale must be positive, got {t}")));
    }
    let (disc, smooth) = family_symbol(spec)?;
    Ok(row_symbol(&disc, smooth.as_ref(), spec.dilation(t), step))
}

fn heat_smooth(r: f64, z: Complex64) -> SmoothSymbol {
    let f = move |x: f64| (-z * x.powf(r)).exp();
    SmoothSymbol::new(format!("exp(-z x^{r}), z={z}"), f)
        .with_derivatives(
            move |x: f64| -z * r * x.powf(r - 1.0) * f(x),
            move |x: f64| {
                (z * z * r * r * x.powf(2.0 * r - 2.0) - z * r * (r - 1.0) * x.powf(r - 2.0)) * f(x)
            },
        )
        .with_sample_tail(move |t| TailModel::StretchedExp {
            rate: z.re * t.powf(r),
            exponent: r,
            coeff: 1.0,
        })
        .with_center(z.norm().powf(-1.0 / r))
        .with_sup(1.0)
}

fn powerlaw_smooth(z: Complex64) -> SmoothSymbol {
    let a = z.re;
    let pow = move |x: f64, s: Complex64| (-s * (1.0 + x).ln()).exp();
    SmoothSymbol::new(format!("(1+x)^(-z), z={z}"), move |x| pow(x, z))
        .with_derivatives(
            move |x| -z * pow(x, z + 1.0),
            move |x| z * (z + 1.0) * pow(x, z + 2.0),
        )
        // 1 + tn ≥ min(1,t)(1+n)
        .with_sample_tail(move |t| TailModel::PowerLaw {
            exponent: a,
            coeff: t.min(1.0).powf(-a),
        })
        // |f(tn) − f(t(n+1))| ≤ t|z|(1+tn)^{−a−1}
        .with_difference_tail(move |t| TailModel::PowerLaw {
            exponent: a + 1.0,
            coeff: t * z.norm() * t.min(1.0).powf(-a - 1.0),
        })
        .with_sup(1.0)
}

/// Sweep settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    /// Largest corner size.
    pub size: usize,
    /// Double the corner from `MIN_ADAPTIVE_SIZE` until the tail is negligible.
    pub adaptive: bool,
    /// Extend the grid once past an endpoint maximum.
    pub extend_grid: bool,
    /// Bound functionals at this `α`; `None` skips them.
    pub alpha: Option<f64>,
}

impl SweepConfig {
    pub fn fixed(size: usize) -> Self {
        Self {
            size,
            adaptive: false,
            extend_grid: false,
            alpha: None,
        }
    }

    pub fn adaptive(size: usize) -> Self {
        Self {
            size,
            adaptive: true,
            extend_grid: true,
            alpha: None,
        }
    }

    pub fn with_alpha(mut self, alpha: Option<f64>) -> Self {
        self.alpha = alpha;
        self
    }
}

/// Smallest corner tried by adaptive truncation.
pub const MIN_ADAPTIVE_SIZE: usize = 32;
/// Truncation is adequate once the tail bound is below this fraction of `s1`.
pub const TAIL_FRACTION: f64 = 1e-6;
/// Points in a default scale grid.
pub const DEFAULT_GRID_POINTS: usize = 32;
const EXTENSION_POINTS: usize = 8;

/// One scale of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Scale parameter; see `FamilySpec::dilation`.
    pub t: f64,
    pub size: usize,
    /// `S¹` norm of the corner.
    pub s1_lower: f64,
    /// Corner plus tail bound; `∞` when the tail is not summable.
    pub s1_upper: f64,
    /// The tail bound exceeds `TAIL_FRACTION · s1_lower`.
    pub bracketing_only: bool,
    /// Added when the grid was extended past an endpoint maximum.
    pub extended: bool,
    pub bounds: Option<BoundReport>,
}

/// All rows of one family at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub spec: FamilySpec,
    pub step: Step,
    pub rows: Vec<SweepRow>,
    /// The maximum still sits at a grid endpoint after extension.
    pub endpoint_sup: bool,
}

impl SweepTable {
    /// Row with the largest lower bracket.
    pub fn sup_row(&self) -> &SweepRow {
        self.rows
            .iter()
            .max_by(|a, b| a.s1_lower.total_cmp(&b.s1_lower))
            .expect("sweep tables are never empty")
    }

    pub fn sup_lower(&self) -> f64 {
        self.sup_row().s1_lower
    }

    /// `sup_t s1_upper`, an upper bracket for the supremum over the grid.
    pub fn sup_upper(&self) -> f64 {
        self.rows.iter().map(|r| r.s1_upper).fold(0.0, f64::max)
    }
}

/// Geometric scale grid placing the family's transition index between
/// `size/8` and `1/4`.
pub fn default_grid(spec: &FamilySpec, size: usize) -> Vec<f64> {
    let hi = (size as f64 / 8.0).max(1.0);
    let lo = 0.25;
    let to_t = |k: f64| match *spec {
        FamilySpec::Heat { r, z } => k.powf(-r) / z.norm(),
        FamilySpec::Powerlaw { .. } => 1.0 / k,
        _ => 1.0,
    };
    if !spec.is_scaled() {
        return vec![1.0];
    }
    geometric(hi, lo, DEFAULT_GRID_POINTS).into_iter().map(to_t).collect()
}

fn geometric(from: f64, to: f64, points: usize) -> Vec<f64> {
    let ratio = (to / from).ln() / (points - 1) as f64;
    (0..points).map(|i| from * (ratio * i as f64).exp()).collect()
}

fn row_symbol(disc: &DiscreteSymbol, smooth: Option<&SmoothSymbol>, t: f64, step: Step) -> DiscreteSymbol {
    match smooth {
        Some(s) => s.sample_difference(t, step),
        None => disc.difference(step),
    }
}

fn bracket(b: &DiscreteSymbol, size: usize) -> Result<(f64, f64)> {
    let lower = schatten1(&build_hankel(b, size)?)?;
    Ok((lower, lower + b.tail_s1_bound(size)))
}

fn sweep_row(
    spec: &FamilySpec,
    disc: &DiscreteSymbol,
    smooth: Option<&SmoothSymbol>,
    t: f64,
    step: Step,
    cfg: &SweepConfig,
) -> Result<SweepRow> {
    let s = spec.dilation(t);
    let b = row_symbol(disc, smooth, s, step);
    let mut size = if cfg.adaptive {
        MIN_ADAPTIVE_SIZE.min(cfg.size)
    } else {
        cfg.size
    };
    let (lower, upper) = loop {
        let (lower, upper) = bracket(&b, size)?;
        if !cfg.adaptive || size >= cfg.size || upper - lower < TAIL_FRACTION * lower {
            break (lower, upper);
        }
        size = (2 * size).min(cfg.size);
    };
    let bounds = match (cfg.alpha, smooth) {
        (Some(alpha), Some(f)) => Some(ab_quantities(f, alpha, s)?),
        _ => None,
    };
    Ok(SweepRow {
        t,
        size,
        s1_lower: lower,
        s1_upper: upper,
        bracketing_only: !(upper - lower < TAIL_FRACTION * lower),
        extended: false,
        bounds,
    })
}

/// `S¹` brackets of the step-difference Hankel of `φ_t` for each `t`
/// in the grid, with a fixed corner of size `n`.
pub fn sweep_s1(spec: &FamilySpec, t_grid: &[f64], n: usize, step: Step) -> Result<SweepTable> {
    sweep_with(spec, t_grid, step, &SweepConfig::fixed(n))
}

/// `sweep_s1` with explicit truncation, grid-extension and bound settings.
/// Families without a scale produce a single row at `t = 1`.
pub fn sweep_with(
    spec: &FamilySpec,
    t_grid: &[f64],
    step: Step,
    cfg: &SweepConfig,
) -> Result<SweepTable> {
    if t_grid.is_empty() {
        return Err(Error::invalid("scale grid is empty"));
    }
    if let Some(t) = t_grid.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(Error::invalid(format!("scales must be positive, got {t}")));
    }
    if cfg.size == 0 {
        return Err(Error::invalid("corner size must be positive"));
    }
    let (disc, smooth) = family_symbol(spec)?;
    let grid: Vec<f64> = if spec.is_scaled() { t_grid.to_vec() } else { vec![1.0] };
    let run = |ts: &[f64]| -> Result<Vec<SweepRow>> {
        ts.par_iter()
            .map(|&t| sweep_row(spec, &disc, smooth.as_ref(), t, step, cfg))
            .collect()
    };
    let mut rows = run(&grid)?;
    let mut endpoint_sup = false;
    if spec.is_scaled() && grid.len() >= 2 {
        let argmax = argmax_of(&rows);
        let at_end = argmax == 0 || argmax == rows.len() - 1;
        if at_end && cfg.extend_grid {
            let (edge, inner) = if argmax == 0 {
                (grid[0], grid[1])
            } else {
                (grid[grid.len() - 1], grid[grid.len() - 2])
            };
            let ratio = edge / inner;
            let extra: Vec<f64> = (1..=EXTENSION_POINTS)
                .map(|i| edge * ratio.powi(i as i32))
                .collect();
            let mut new_rows = run(&extra)?;
            for r in &mut new_rows {
                r.extended = true;
            }
            if argmax == 0 {
                new_rows.reverse();
                new_rows.append(&mut rows);
                rows = new_rows;
            } else {
                rows.append(&mut new_rows);
            }
            let m = argmax_of(&rows);
            endpoint_sup = m == 0 || m == rows.len() - 1;
        } else {
            endpoint_sup = at_end;
        }
    }
    Ok(SweepTable {
        spec: spec.clone(),
        step,
        rows,
        endpoint_sup,
    })
}

fn argmax_of(rows: &[SweepRow]) -> usize {
    rows.iter()
        .enumerate()
        .max_by(|a, b| a.1.s1_lower.total_cmp(&b.1.s1_lower))
        .map_or(0, |(i, _)| i)
}

/// Shape fitted to sup-over-scale values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthModel {
    /// `c(1+r)`
    LinearInR,
    /// `c·ln N`
    LogInN,
    /// `c`
    Constant,
    /// `c(1+tan ω)^{3/2}(1+r)`
    AngleLinearInR,
}

impl GrowthModel {
    /// Model shape at a parameter point.
    pub fn shape(self, spec: &FamilySpec) -> Result<f64> {
        let r_of = || match *spec {
            FamilySpec::Heat { r, .. } => Ok(r),
            _ => Err(Error::invalid(format!("model needs an exponent r, got {}", spec.name()))),
        };
        match self {
            GrowthModel::Constant => Ok(1.0),
            GrowthModel::LinearInR => Ok(1.0 + r_of()?),
            GrowthModel::AngleLinearInR => {
                let w = spec.omega().unwrap_or(0.0);
                if w >= PI / 2.0 {
                    return Err(Error::invalid("angle must stay below pi/2"));
                }
                Ok((1.0 + w.tan()).powf(1.5) * (1.0 + r_of()?))
            }
            GrowthModel::LogInN => match *spec {
                FamilySpec::Fejer { n } | FamilySpec::BochnerRiesz { n, .. } if n >= 2 => {
                    Ok((n as f64).ln())
                }
                _ => Err(Error::invalid(format!(
                    "log-in-N model needs N >= 2, got {}",
                    spec.name()
                ))),
            },
        }
    }
}

/// Fitted coefficient with its largest relative deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub coefficient: f64,
    pub residual: f64,
}

/// Least squares for `y ≈ c·x` in log space; the residual is `max |y − c·x| / y`.
pub fn fit_scale(xs: &[f64], ys: &[f64]) -> Result<Fit> {
    if xs.len() != ys.len() {
        return Err(Error::invalid("fit needs equally many shapes and values"));
    }
    if xs.len() < 3 {
        return Err(Error::invalid(format!("fit needs at least 3 points, got {}", xs.len())));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::invalid("fit needs positive finite data"));
    }
    let mean_log = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y / x).ln())
        .sum::<f64>()
        / xs.len() as f64;
    let c = mean_log.exp();
    let residual = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - c * x).abs() / y)
        .fold(0.0, f64::max);
    Ok(Fit {
        coefficient: c,
        residual,
    })
}

/// Fit of the tables' sup-over-scale lower brackets against `model`.
pub fn growth_fit(tables: &[SweepTable], model: GrowthModel) -> Result<Fit> {
    let xs = tables
        .iter()
        .map(|t| model.shape(&t.spec))
        .collect::<Result<Vec<_>>>()?;
    let ys: Vec<f64> = tables.iter().map(SweepTable::sup_lower).collect();
    fit_scale(&xs, &ys)
}

/// Smallest constant `C` with `values ≤ C · references`, and the largest
/// relative change of `C` when one point is left out.
pub fn bounding_constant(values: &[f64], references: &[f64]) -> Result<(f64, f64)> {
    if values.len() != references.len() || values.len() < 2 {
        return Err(Error::invalid("need at least two paired values"));
    }
    let ratios: Vec<f64> = values.iter().zip(references).map(|(v, r)| v / r).collect();
    if ratios.iter().any(|r| !r.is_finite()) {
        return Err(Error::invalid("non-finite ratio"));
    }
    let full = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let worst = (0..ratios.len())
        .map(|skip| {
            let c = ratios
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, r)| *r)
                .fold(f64::NEG_INFINITY, f64::max);
            (full - c).abs() / full
        })
        .fold(0.0, f64::max);
    Ok((full, worst))
}
