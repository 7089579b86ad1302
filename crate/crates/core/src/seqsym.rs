//! Discrete symbols `n ↦ φ(n)` on ℕ with caller-declared tail models, their
//! difference operators, and the truncation bound for Hankel matrices.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use statrs::function::gamma::{gamma_ur, ln_gamma};

use crate::error::{Error, Result};

type Evaluator = Arc<dyn Fn(u64) -> Complex64 + Send + Sync>;

/// Declared bound on `|φ(n) − ℓ(n)|`, where `ℓ(n)` is the parity limit of `n`.
///
/// Tail models are never inferred: the caller states them and the library
/// only uses them to bound what it cannot compute exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailModel {
    /// `φ(n) = ℓ(n)` for every `n > last`.
    Finite { last: u64 },
    /// `|φ(n) − ℓ(n)| ≤ coeff · rateⁿ`, `0 < rate < 1`.
    Exponential { rate: f64, coeff: f64 },
    /// `|φ(n) − ℓ(n)| ≤ coeff · (n+1)^(−exponent)`.
    PowerLaw { exponent: f64, coeff: f64 },
    /// `|φ(n) − ℓ(n)| ≤ coeff · exp(−rate · n^exponent)`.
    StretchedExp { rate: f64, exponent: f64, coeff: f64 },
    Unknown,
}

impl TailModel {
    /// Pointwise bound for `n`, when the model gives one without the symbol's values.
    pub fn bound(&self, n: u64) -> Option<f64> {
        let nf = n as f64;
        match *self {
            TailModel::Finite { last } => (n > last).then_some(0.0),
            TailModel::Exponential { rate, coeff } => Some(coeff * rate.powf(nf)),
            TailModel::PowerLaw { exponent, coeff } => Some(coeff * (nf + 1.0).powf(-exponent)),
            TailModel::StretchedExp {
                rate,
                exponent,
                coeff,
            } => Some(coeff * (-rate * nf.powf(exponent)).exp()),
            TailModel::Unknown => None,
        }
    }

    /// Model for `n ↦ φ(n) − φ(n+step)`.
    pub fn difference(&self, step: Step) -> TailModel {
        let s = step.get() as f64;
        match *self {
            TailModel::Finite { last } => TailModel::Finite { last },
            TailModel::Exponential { rate, coeff } => TailModel::Exponential {
                rate,
                coeff: coeff * (1.0 + rate.powf(s)),
            },
            TailModel::PowerLaw { exponent, coeff } => TailModel::PowerLaw {
                exponent,
                coeff: 2.0 * coeff,
            },
            TailModel::StretchedExp {
                rate,
                exponent,
                coeff,
            } => TailModel::StretchedExp {
                rate,
                exponent,
                coeff: 2.0 * coeff,
            },
            TailModel::Unknown => TailModel::Unknown,
        }
    }

    /// Model for `|φ − ℓ|^power`.
    fn powered(&self, power: f64) -> TailModel {
        match *self {
            TailModel::Exponential { rate, coeff } => TailModel::Exponential {
                rate: rate.powf(power),
                coeff: coeff.powf(power),
            },
            TailModel::PowerLaw { exponent, coeff } => TailModel::PowerLaw {
                exponent: exponent * power,
                coeff: coeff.powf(power),
            },
            TailModel::StretchedExp {
                rate,
                exponent,
                coeff,
            } => TailModel::StretchedExp {
                rate: rate * power,
                exponent,
                coeff: coeff.powf(power),
            },
            other => other,
        }
    }

    /// Upper bound on `Σ_{n ≥ start} (n+1)^moment · bound(n)` for the analytic
    /// models (`Finite` and `Unknown` are handled by the symbol).
    fn moment_tail(&self, moment: f64, start: u64) -> f64 {
        match *self {
            TailModel::Exponential { rate, coeff } => {
                coeff * exponential_moment_tail(rate, moment, start)
            }
            TailModel::PowerLaw { exponent, coeff } => {
                let s = exponent - moment;
                if s <= 1.0 {
                    return f64::INFINITY;
                }
                let m1 = start as f64 + 1.0;
                coeff * (m1.powf(-s) + m1.powf(1.0 - s) / (s - 1.0))
            }
            TailModel::StretchedExp {
                rate,
                exponent,
                coeff,
            } => {
                if rate <= 0.0 || exponent <= 0.0 {
                    return f64::INFINITY;
                }
                if exponent >= 1.0 {
                    // n^exponent ≥ n · start^(exponent−1) for n ≥ start
                    let slope = rate * (start.max(1) as f64).powf(exponent - 1.0);
                    return coeff * exponential_moment_tail((-slope).exp(), moment, start);
                }
                coeff * stretched_moment_tail(rate, exponent, moment, start)
            }
            TailModel::Finite { .. } | TailModel::Unknown => f64::INFINITY,
        }
    }
}

/// `Σ_{n ≥ m} (n+1)^κ qⁿ`; closed form for κ = 1, ratio bound otherwise.
fn exponential_moment_tail(q: f64, moment: f64, m: u64) -> f64 {
    if !(0.0..1.0).contains(&q) {
        return f64::INFINITY;
    }
    if q == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    let mf = m as f64;
    if moment == 1.0 {
        return q.powf(mf) * ((mf + 1.0) - mf * q) / ((1.0 - q) * (1.0 - q));
    }
    if moment == 0.0 {
        return q.powf(mf) / (1.0 - q);
    }
    // Term ratio ((n+2)/(n+1))^κ q decreases in n once κ ≥ 0.
    let moment = moment.max(0.0);
    let mut n = m;
    let mut sum = 0.0;
    loop {
        let nf = n as f64;
        let term = (nf + 1.0).powf(moment) * q.powf(nf);
        let ratio = ((nf + 2.0) / (nf + 1.0)).powf(moment) * q;
        if ratio < 1.0 {
            let rest = term / (1.0 - ratio);
            if rest <= 1e-9 * (sum + term) || n - m > 10_000_000 {
                return sum + rest;
            }
        } else if n - m > 50_000_000 {
            return f64::INFINITY;
        }
        sum += term;
        n += 1;
    }
}

/// `Σ_{n ≥ m} (n+1)^κ exp(−τ n^r)` for `0 < r < 1`, via `(n+1)^κ ≤ 2^κ n^κ`
/// on `n ≥ 1`, the unimodal sum–integral comparison, and the upper
/// incomplete gamma function.
fn stretched_moment_tail(tau: f64, r: f64, moment: f64, m: u64) -> f64 {
    let moment = moment.max(0.0);
    let mut total = 0.0;
    let mut start = m;
    if m == 0 {
        total += 1.0;
        start = 1;
    }
    let a = start as f64;
    let h = |x: f64| x.powf(moment) * (-tau * x.powf(r)).exp();
    let peak = (moment / (tau * r)).powf(1.0 / r);
    let max_h = h(a.max(peak));
    let s = (moment + 1.0) / r;
    let x = tau * a.powf(r);
    let q = gamma_ur(s, x);
    let integral = if q <= 0.0 {
        0.0
    } else {
        (ln_gamma(s) + q.ln() - s * tau.ln() - r.ln()).exp()
    };
    total + 2f64.powf(moment) * (integral + max_h) * (1.0 + 1e-10)
}

/// Difference step of the Hankel constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    One,
    Two,
}

impl Step {
    pub fn get(self) -> u64 {
        match self {
            Step::One => 1,
            Step::Two => 2,
        }
    }
}

impl TryFrom<u64> for Step {
    type Error = Error;
    fn try_from(v: u64) -> Result<Self> {
        match v {
            1 => Ok(Step::One),
            2 => Ok(Step::Two),
            _ => Err(Error::invalid(format!("difference step must be 1 or 2, got {v}"))),
        }
    }
}

/// Limits of `φ(2n)` and `φ(2n+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ParityLimits {
    pub even: Complex64,
    pub odd: Complex64,
}

impl ParityLimits {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn of(&self, n: u64) -> Complex64 {
        if n % 2 == 0 {
            self.even
        } else {
            self.odd
        }
    }

    pub fn is_zero(&self) -> bool {
        self.even == Complex64::new(0.0, 0.0) && self.odd == Complex64::new(0.0, 0.0)
    }
}

/// A deterministic evaluator `ℕ → ℂ` together with its declared tail.
#[derive(Clone)]
pub struct DiscreteSymbol {
    eval: Evaluator,
    tail: TailModel,
    limits: ParityLimits,
    description: String,
}

impl fmt::Debug for DiscreteSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiscreteSymbol")
            .field("description", &self.description)
            .field("tail", &self.tail)
            .field("limits", &self.limits)
            .finish()
    }
}

impl DiscreteSymbol {
    /// Symbol with an unknown tail and zero parity limits.
    pub fn new<F>(description: impl Into<String>, eval: F) -> Self
    where
        F: Fn(u64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(eval),
            tail: TailModel::Unknown,
            limits: ParityLimits::zero(),
            description: description.into(),
        }
    }

    /// Real-valued convenience constructor.
    pub fn real<F>(description: impl Into<String>, eval: F) -> Self
    where
        F: Fn(u64) -> f64 + Send + Sync + 'static,
    {
        Self::new(description, move |n| Complex64::new(eval(n), 0.0))
    }

    pub fn with_tail(mut self, tail: TailModel) -> Self {
        self.tail = tail;
        self
    }

    pub fn with_limits(mut self, limits: ParityLimits) -> Self {
        self.limits = limits;
        self
    }

    pub fn zero() -> Self {
        Self::real("0", |_| 0.0).with_tail(TailModel::Finite { last: 0 })
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(format!("const({c})"), move |_| c)
            .with_tail(TailModel::Finite { last: 0 })
            .with_limits(ParityLimits { even: c, odd: c })
    }

    /// `δ_k`.
    pub fn delta(k: u64) -> Self {
        Self::real(format!("delta({k})"), move |n| if n == k { 1.0 } else { 0.0 })
            .with_tail(TailModel::Finite { last: k })
    }

    /// Finitely supported symbol with the given leading values.
    pub fn finite(values: Vec<Complex64>) -> Self {
        let last = values.len().saturating_sub(1) as u64;
        let values = Arc::new(values);
        Self::new(format!("finite(len {})", values.len()), move |n| {
            values.get(n as usize).copied().unwrap_or_default()
        })
        .with_tail(TailModel::Finite { last })
    }

    /// `qⁿ` for `0 ≤ q < 1`.
    pub fn geometric(q: f64) -> Self {
        Self::real(format!("geometric({q})"), move |n| q.powf(n as f64))
            .with_tail(TailModel::Exponential { rate: q, coeff: 1.0 })
    }

    #[inline]
    pub fn eval(&self, n: u64) -> Complex64 {
        (self.eval)(n)
    }

    pub fn tail(&self) -> TailModel {
        self.tail
    }

    pub fn limits(&self) -> ParityLimits {
        self.limits
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// Values at `n0..=n1`.
    pub fn eval_range(&self, n0: u64, n1: u64) -> Vec<Complex64> {
        if n1 < n0 {
            return vec![];
        }
        (n0..=n1).map(|n| self.eval(n)).collect()
    }

    /// `n ↦ φ(n) − φ(n+step)`, with tail model and limits propagated.
    pub fn difference(&self, step: Step) -> DiscreteSymbol {
        let base = Arc::clone(&self.eval);
        let s = step.get();
        let limits = match step {
            Step::Two => ParityLimits::zero(),
            Step::One => ParityLimits {
                even: self.limits.even - self.limits.odd,
                odd: self.limits.odd - self.limits.even,
            },
        };
        DiscreteSymbol {
            eval: Arc::new(move |n| base(n) - base(n + s)),
            tail: self.tail.difference(step),
            limits,
            description: format!("diff{s}[{}]", self.description),
        }
    }

    /// `n ↦ φ(n + shift)`; tail and limits follow the shift.
    pub fn shifted(&self, shift: u64) -> DiscreteSymbol {
        let base = Arc::clone(&self.eval);
        let tail = match self.tail {
            TailModel::Finite { last } => TailModel::Finite {
                last: last.saturating_sub(shift),
            },
            TailModel::Exponential { rate, coeff } => TailModel::Exponential {
                rate,
                coeff: coeff * rate.powf(shift as f64),
            },
            other => other,
        };
        let limits = if shift % 2 == 0 {
            self.limits
        } else {
            ParityLimits {
                even: self.limits.odd,
                odd: self.limits.even,
            }
        };
        DiscreteSymbol {
            eval: Arc::new(move |n| base(n + shift)),
            tail,
            limits,
            description: format!("shift{shift}[{}]", self.description),
        }
    }

    /// Bound on `Σ_{n ≥ start} (n+1)^moment · |φ(n) − ℓ(n)|^power`, or `∞`.
    pub fn tail_moment(&self, moment: f64, power: f64, start: u64) -> f64 {
        match self.tail {
            TailModel::Unknown => f64::INFINITY,
            TailModel::Finite { last } => (start..=last)
                .map(|n| {
                    let v = (self.eval(n) - self.limits.of(n)).norm();
                    (n as f64 + 1.0).powf(moment) * v.powf(power)
                })
                .sum(),
            model => model.powered(power).moment_tail(moment, start),
        }
    }

    /// Bound on the trace-class distance between the infinite Hankel matrix
    /// `(φ(j+k))` and its `size × size` corner: each anti-diagonal `n` is a
    /// scaled partial permutation of norm `(n+1)|φ(n)|`, summed over `n ≥ 2·size−1`.
    pub fn tail_s1_bound(&self, size: usize) -> f64 {
        if !self.limits.is_zero() {
            return f64::INFINITY;
        }
        let start = (2 * size as u64).saturating_sub(1);
        self.tail_moment(1.0, 1.0, start)
    }

    /// Spot-check the declared tail on the given sample points; returns the
    /// first violation `(n, |φ(n) − ℓ(n)|, bound)`.
    pub fn check_tail<I: IntoIterator<Item = u64>>(&self, samples: I) -> Option<(u64, f64, f64)> {
        for n in samples {
            let v = (self.eval(n) - self.limits.of(n)).norm();
            if let Some(b) = self.tail.bound(n) {
                if v > b * (1.0 + 1e-12) + 1e-300 {
                    return Some((n, v, b));
                }
            }
        }
        None
    }
}
