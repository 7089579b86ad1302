//! Smooth symbols on `[0, ∞)`, weighted `L²`/`ℓ²` functionals, and the bound
//! quantities controlling trace norms of Hankel matrices `(f(t(j+k)) − f(t(j+k+1)))`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{self, Estimate};
use crate::seqsym::{DiscreteSymbol, Step, TailModel};

type RealLine = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;
type TailForScale = Arc<dyn Fn(f64) -> TailModel + Send + Sync>;

/// Absolute tolerance of the weighted integrals (on the squared norm).
pub const WEIGHTED_TOL: f64 = 1e-8;
/// Tail allowance of the weighted sums (on the squared norm).
pub const DISCRETE_TAIL_TOL: f64 = 1e-12;
/// Largest tail accepted once the term budget is spent; it is carried in the error.
pub const DISCRETE_TAIL_CEILING: f64 = 1e-9;
const MAX_DISCRETE_TERMS: u64 = 1 << 24;

/// A function on `[0, ∞)` with its first two derivatives.
#[derive(Clone)]
pub struct SmoothSymbol {
    f: RealLine,
    df: Option<RealLine>,
    d2f: Option<RealLine>,
    /// Tail model of `n ↦ f(t·n)` as a function of `t`.
    sample_tail: Option<TailForScale>,
    /// Sharper tail model of `n ↦ f(tn) − f(t(n+1))`, when known.
    difference_tail: Option<TailForScale>,
    /// Abscissa where `|f′|` carries its mass; guides the half-line quadrature.
    center: f64,
    sup_abs: Option<f64>,
    description: String,
}

impl fmt::Debug for SmoothSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothSymbol")
            .field("description", &self.description)
            .field("analytic_derivatives", &self.has_analytic_derivatives())
            .field("center", &self.center)
            .finish()
    }
}

impl SmoothSymbol {
    /// Symbol without derivatives; finite differences are used until supplied.
    pub fn new<F>(description: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            f: Arc::new(f),
            df: None,
            d2f: None,
            sample_tail: None,
            difference_tail: None,
            center: 1.0,
            sup_abs: None,
            description: description.into(),
        }
    }

    pub fn with_derivatives<D1, D2>(mut self, df: D1, d2f: D2) -> Self
    where
        D1: Fn(f64) -> Complex64 + Send + Sync + 'static,
        D2: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        self.df = Some(Arc::new(df));
        self.d2f = Some(Arc::new(d2f));
        self
    }

    /// Tail model of `n ↦ f(t·n)` for each scale `t`.
    pub fn with_sample_tail<T>(mut self, tail: T) -> Self
    where
        T: Fn(f64) -> TailModel + Send + Sync + 'static,
    {
        self.sample_tail = Some(Arc::new(tail));
        self
    }

    /// Tail model of `n ↦ f(tn) − f(t(n+1))` for each scale `t`, overriding
    /// the one propagated from the sample tail.
    pub fn with_difference_tail<T>(mut self, tail: T) -> Self
    where
        T: Fn(f64) -> TailModel + Send + Sync + 'static,
    {
        self.difference_tail = Some(Arc::new(tail));
        self
    }

    pub fn with_center(mut self, center: f64) -> Self {
        self.center = center;
        self
    }

    pub fn with_sup(mut self, sup_abs: f64) -> Self {
        self.sup_abs = Some(sup_abs);
        self
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn sup_abs(&self) -> Option<f64> {
        self.sup_abs
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.df.is_some() && self.d2f.is_some()
    }

    pub fn value(&self, x: f64) -> Complex64 {
        (self.f)(x)
    }

    pub fn derivative(&self, x: f64) -> Complex64 {
        match &self.df {
            Some(df) => df(x),
            None => finite_difference(&*self.f, x),
        }
    }

    pub fn second_derivative(&self, x: f64) -> Complex64 {
        match &self.d2f {
            Some(d2f) => d2f(x),
            None => match &self.df {
                Some(df) => finite_difference(&**df, x),
                None => {
                    let h = 1e-4 * (1.0 + x);
                    let x = x.max(h);
                    ((self.f)(x + h) - 2.0 * (self.f)(x) + (self.f)(x - h)) / (h * h)
                }
            },
        }
    }

    /// `x ↦ f(t·x)` with derivatives and tail model carried along.
    pub fn scaled(&self, t: f64) -> SmoothSymbol {
        let f = Arc::clone(&self.f);
        let mut out = SmoothSymbol::new(format!("{}(t={t})", self.description), move |x| f(t * x));
        if let (Some(df), Some(d2f)) = (self.df.clone(), self.d2f.clone()) {
            out = out.with_derivatives(move |x| t * df(t * x), move |x| t * t * d2f(t * x));
        }
        if let Some(tail) = self.sample_tail.clone() {
            out.sample_tail = Some(Arc::new(move |s| tail(s * t)));
        }
        if let Some(tail) = self.difference_tail.clone() {
            out.difference_tail = Some(Arc::new(move |s| tail(s * t)));
        }
        out.center = self.center / t;
        out.sup_abs = self.sup_abs;
        out
    }

    /// `n ↦ f(t·n)`, with the declared tail for that scale (unknown otherwise).
    pub fn sample(&self, t: f64) -> DiscreteSymbol {
        let f = Arc::clone(&self.f);
        let tail = self
            .sample_tail
            .as_ref()
            .map_or(TailModel::Unknown, |m| m(t));
        DiscreteSymbol::new(format!("{}[t={t}]", self.description), move |n| f(t * n as f64))
            .with_tail(tail)
    }

    /// `n ↦ f(tn) − f(t(n+step))`, using the sharper difference tail for step 1.
    pub fn sample_difference(&self, t: f64, step: Step) -> DiscreteSymbol {
        let d = self.sample(t).difference(step);
        match (&self.difference_tail, step) {
            (Some(tail), Step::One) => d.with_tail(tail(t)),
            _ => d,
        }
    }

    /// `|f(x) − f(0)|` at `x = 10⁻⁴, …, 10⁻¹²`; continuity at 0 makes the
    /// last entry small.
    pub fn continuity_probe(&self) -> Vec<f64> {
        let f0 = self.value(0.0);
        (4..=12)
            .map(|k| (self.value(10f64.powi(-k)) - f0).norm())
            .collect()
    }

    /// Largest relative mismatch between supplied derivatives and central
    /// differences over the sample points.
    pub fn derivative_mismatch(&self, points: &[f64]) -> Option<f64> {
        let (df, d2f) = (self.df.as_ref()?, self.d2f.as_ref()?);
        let mut worst: f64 = 0.0;
        for &x in points {
            let pairs = [
                (df(x), finite_difference(&*self.f, x)),
                (d2f(x), finite_difference(&**df, x)),
            ];
            for (exact, approx) in pairs {
                let scale = exact.norm().max(1e-6);
                worst = worst.max((exact - approx).norm() / scale);
            }
        }
        Some(worst)
    }
}

fn finite_difference(f: &(dyn Fn(f64) -> Complex64 + Send + Sync), x: f64) -> Complex64 {
    let h = 1e-5 * (1.0 + x);
    if x > h {
        (f(x + h) - f(x - h)) / (2.0 * h)
    } else {
        (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h)
    }
}

fn norm_from_square(sq: Estimate) -> Estimate {
    let value = sq.value.max(0.0).sqrt();
    let error = if value > 0.0 {
        sq.error / (2.0 * value)
    } else {
        sq.error.sqrt()
    };
    Estimate { value, error }
}

/// `(∫_lo^∞ x^{2β}|g(x)|² dx)^{1/2}` through `x = e^u`; `center` marks where
/// the integrand lives.
pub fn weighted_l2_cont<G>(g: G, beta: f64, lo: f64, center: f64) -> Result<Estimate>
where
    G: Fn(f64) -> Complex64,
{
    // Logarithmic form keeps x^{2β}|g|² representable far out on the line.
    let h = |x: f64| {
        let v = g(x).norm();
        if v == 0.0 {
            0.0
        } else {
            (2.0 * beta * x.ln() + 2.0 * v.ln()).exp()
        }
    };
    let sq = quad::half_line_centered(&h, lo, center, WEIGHTED_TOL).map_err(|e| match e {
        Error::Divergence(msg) => Error::Divergence(format!("weight x^(2*{beta}): {msg}")),
        other => other,
    })?;
    Ok(norm_from_square(sq))
}

/// `(Σ_{k≥1} k^{2β}|s(k)|²)^{1/2}`, summed until the declared tail is below
/// the discrete tolerance (or the ceiling, after `2²⁴` terms); half the tail
/// bound is added to the value and half reported as error.
pub fn weighted_l2_disc(s: &DiscreteSymbol, beta: f64) -> Result<Estimate> {
    if !s.limits().is_zero() {
        return Err(Error::Refused {
            reason: format!("{} does not tend to zero", s.description()),
            required: None,
        });
    }
    if s.tail() == TailModel::Unknown {
        return Err(Error::Refused {
            reason: format!("{} has no tail model", s.description()),
            required: None,
        });
    }
    let kappa = 2.0 * beta;
    // k^{2β} ≤ 2^{−2β}(k+1)^{2β} for k ≥ 1 when β < 0.
    let factor = if beta < 0.0 { 2f64.powf(-kappa) } else { 1.0 };
    let mut k_max = 64u64;
    let tail = loop {
        let bound = factor * s.tail_moment(kappa, 2.0, k_max + 1);
        if bound < DISCRETE_TAIL_TOL {
            break bound;
        }
        if let TailModel::Finite { last } = s.tail() {
            if k_max >= last {
                break 0.0;
            }
        }
        if k_max >= MAX_DISCRETE_TERMS {
            if bound <= DISCRETE_TAIL_CEILING {
                break bound;
            }
            return Err(Error::Refused {
                reason: format!(
                    "tail of {} too heavy: bound {bound:e} after {k_max} terms",
                    s.description()
                ),
                required: None,
            });
        }
        k_max *= 2;
    };
    let sum: f64 = (1..=k_max)
        .map(|k| (k as f64).powf(kappa) * s.eval(k).norm_sqr())
        .sum();
    Ok(norm_from_square(Estimate {
        value: sum + 0.5 * tail,
        error: 0.5 * tail + sum * 1e-15 * k_max as f64,
    }))
}

/// Bound functionals of one symbol at one scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub alpha: f64,
    pub t: f64,
    pub a: f64,
    pub b: f64,
    /// `None` when the sampled symbol's tail is too heavy to sum.
    pub a_disc: Option<f64>,
    /// `None` when `‖x^{3/2+α}f′‖_{L²(1,∞)}` diverges.
    pub b_disc: Option<f64>,
    pub raw34: f64,
    pub raw36: Option<f64>,
    pub quadrature_error: f64,
    pub approximate_derivatives: bool,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1/2], got {alpha}")));
    }
    Ok(())
}

fn geometric_mean(x: Estimate, y: Estimate) -> Estimate {
    let value = (x.value * y.value).sqrt();
    let error = if value > 0.0 {
        0.5 * value * (x.error / x.value.max(1e-300) + y.error / y.value.max(1e-300))
    } else {
        (x.error * y.error).sqrt()
    };
    Estimate { value, error }
}

/// `A = √(‖x^{1/2−α}f′‖‖x^{1/2+α}f′‖)` on `(0, ∞)`.
pub fn a_functional(f: &SmoothSymbol, alpha: f64) -> Result<Estimate> {
    let lo = weighted_l2_cont(|x| f.derivative(x), 0.5 - alpha, 0.0, f.center)?;
    let hi = weighted_l2_cont(|x| f.derivative(x), 0.5 + alpha, 0.0, f.center)?;
    Ok(geometric_mean(lo, hi))
}

/// `B = √(‖x^{3/2−α}f″‖‖x^{3/2+α}f″‖)` on `(0, ∞)`.
pub fn b_functional(f: &SmoothSymbol, alpha: f64) -> Result<Estimate> {
    let lo = weighted_l2_cont(|x| f.second_derivative(x), 1.5 - alpha, 0.0, f.center)?;
    let hi = weighted_l2_cont(|x| f.second_derivative(x), 1.5 + alpha, 0.0, f.center)?;
    Ok(geometric_mean(lo, hi))
}

/// All bound functionals of `x ↦ f(t·x)`.
pub fn ab_quantities(f: &SmoothSymbol, alpha: f64, t: f64) -> Result<BoundReport> {
    check_alpha(alpha)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("scale t must be positive, got {t}")));
    }
    let ft = f.scaled(t);
    let a = a_functional(&ft, alpha)?;
    let b = b_functional(&ft, alpha)?;

    let sampled = f.sample(t);
    let a_disc = match (
        weighted_l2_disc(&sampled, 0.5 - alpha),
        weighted_l2_disc(&sampled, 0.5 + alpha),
    ) {
        (Ok(lo), Ok(hi)) => Some(geometric_mean(lo, hi)),
        (Err(Error::Refused { .. }), _) | (_, Err(Error::Refused { .. })) => None,
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let b_disc = match (
        weighted_l2_cont(|x| ft.derivative(x), 1.5 - alpha, 1.0, ft.center),
        weighted_l2_cont(|x| ft.derivative(x), 1.5 + alpha, 1.0, ft.center),
    ) {
        (Ok(lo), Ok(hi)) => Some(geometric_mean(lo, hi)),
        (Err(Error::Divergence(_)), _) | (_, Err(Error::Divergence(_))) => None,
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };

    let sa = alpha.sqrt();
    let raw34 = (a.value * b.value).sqrt() / sa;
    let raw36 = match (a_disc, b_disc) {
        (Some(ad), Some(bd)) => {
            Some(f.value(0.0).norm() + (ad.value + (ad.value * bd.value).sqrt()) / sa)
        }
        _ => None,
    };
    let quadrature_error = a.error
        + b.error
        + b_disc.map_or(0.0, |e| e.error)
        + a_disc.map_or(0.0, |e| e.error);
    Ok(BoundReport {
        alpha,
        t,
        a: a.value,
        b: b.value,
        a_disc: a_disc.map(|e| e.value),
        b_disc: b_disc.map(|e| e.value),
        raw34,
        raw36,
        quadrature_error,
        approximate_derivatives: !f.has_analytic_derivatives(),
    })
}

/// One side-by-side comparison `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityCheck {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Combined numerical error of both sides.
    pub error: f64,
}

impl InequalityCheck {
    /// `rhs − lhs`; nonnegative when the inequality holds.
    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// Discrete-to-continuous and difference-to-derivative comparisons at `t = 1`:
/// squared `ℓ²` of first differences against squared `L²(1,∞)` of `f′` for
/// `β = 1/2 ± α`, and `L²(1,∞)` of `f′(x+1) − f′(x)` against that of `f″` for `β = 3/2 ± α`.
pub fn transfer_checks(f: &SmoothSymbol, alpha: f64) -> Result<Vec<InequalityCheck>> {
    check_alpha(alpha)?;
    let diffs = f.sample_difference(1.0, Step::One);
    let mut out = Vec::with_capacity(4);
    for beta in [0.5 - alpha, 0.5 + alpha] {
        let disc = weighted_l2_disc(&diffs, beta)?;
        let cont = weighted_l2_cont(|x| f.derivative(x), beta, 1.0, f.center)?;
        out.push(InequalityCheck {
            label: format!("differences vs f' at beta={beta}"),
            lhs: disc.value * disc.value,
            rhs: cont.value * cont.value,
            error: 2.0 * (disc.value * disc.error + cont.value * cont.error),
        });
    }
    for beta in [1.5 - alpha, 1.5 + alpha] {
        let lhs = weighted_l2_cont(
            |x| f.derivative(x + 1.0) - f.derivative(x),
            beta,
            1.0,
            f.center,
        )?;
        let rhs = weighted_l2_cont(|x| f.second_derivative(x), beta, 1.0, f.center)?;
        out.push(InequalityCheck {
            label: format!("f' increments vs f'' at beta={beta}"),
            lhs: lhs.value,
            rhs: rhs.value,
            error: lhs.error + rhs.error,
        });
    }
    Ok(out)
}

/// Subordination of the first-derivative functionals to the second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Subordination {
    /// `‖x^{1/2+α}f′‖`.
    pub plus_lhs: f64,
    /// `‖x^{3/2+α}f″‖/(1+α)`.
    pub plus_rhs: f64,
    /// `‖x^{1/2−α}f′‖`.
    pub minus_lhs: f64,
    /// `‖x^{3/2−α}f″‖/(1−α)`.
    pub minus_rhs: f64,
    /// `‖f′‖_{L¹(ℝ₊)}`.
    pub l1: f64,
    /// `√2·A/√α`.
    pub l1_bound: f64,
    pub error: f64,
}

impl Subordination {
    pub fn checks(&self) -> [InequalityCheck; 3] {
        [
            InequalityCheck {
                label: "x^(1/2+a) f' vs x^(3/2+a) f''".into(),
                lhs: self.plus_lhs,
                rhs: self.plus_rhs,
                error: self.error,
            },
            InequalityCheck {
                label: "x^(1/2-a) f' vs x^(3/2-a) f''".into(),
                lhs: self.minus_lhs,
                rhs: self.minus_rhs,
                error: self.error,
            },
            InequalityCheck {
                label: "L1 of f' vs A".into(),
                lhs: self.l1,
                rhs: self.l1_bound,
                error: self.error,
            },
        ]
    }
}

pub fn subordination_check(f: &SmoothSymbol, alpha: f64) -> Result<Subordination> {
    check_alpha(alpha)?;
    let c = f.center;
    let p1 = weighted_l2_cont(|x| f.derivative(x), 0.5 + alpha, 0.0, c)?;
    let p2 = weighted_l2_cont(|x| f.second_derivative(x), 1.5 + alpha, 0.0, c)?;
    let m1 = weighted_l2_cont(|x| f.derivative(x), 0.5 - alpha, 0.0, c)?;
    let m2 = weighted_l2_cont(|x| f.second_derivative(x), 1.5 - alpha, 0.0, c)?;
    let l1 = quad::half_line_centered(&|x: f64| f.derivative(x).norm(), 0.0, c, WEIGHTED_TOL)?;
    let a = geometric_mean(m1, p1);
    let error = p1.error + p2.error + m1.error + m2.error + l1.error + a.error;
    Ok(Subordination {
        plus_lhs: p1.value,
        plus_rhs: p2.value / (1.0 + alpha),
        minus_lhs: m1.value,
        minus_rhs: m2.value / (1.0 - alpha),
        l1: l1.value,
        l1_bound: 2f64.sqrt() * a.value / alpha.sqrt(),
        error,
    })
}
