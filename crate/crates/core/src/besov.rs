//! `L¹` norms on the circle and the disk, de la Vallée Poussin blocks, and the
//! two trace-class descriptions of Hankel symbols (dyadic `B¹₁` sum and the
//! disk integral of the second derivative).

use std::cell::{Cell, RefCell};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::quad::{self, Estimate};

/// Trigonometric polynomial `Σ aₙ e^{2iπnθ}` with finite support in ℤ.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPolynomial {
    coeffs: BTreeMap<i64, Complex64>,
}

impl TrigPolynomial {
    /// Zero coefficients are dropped.
    pub fn new(coeffs: BTreeMap<i64, Complex64>) -> Self {
        let coeffs = coeffs
            .into_iter()
            .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
            .collect();
        Self { coeffs }
    }

    /// Coefficients `a₀, a₁, …` of an analytic polynomial.
    pub fn analytic(coeffs: &[Complex64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &v)| (k as i64, v))
                .collect(),
        )
    }

    pub fn monomial(k: i64) -> Self {
        Self::new([(k, Complex64::new(1.0, 0.0))].into())
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Complex64> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `max index − min index`, 0 for the zero polynomial.
    pub fn span(&self) -> u64 {
        match (self.coeffs.keys().next(), self.coeffs.keys().next_back()) {
            (Some(lo), Some(hi)) => (hi - lo) as u64,
            _ => 0,
        }
    }

    /// Value at `θ ∈ [0, 1)`, summed directly.
    pub fn eval(&self, theta: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&k, &a)| a * Complex64::from_polar(1.0, 2.0 * PI * (k as f64) * theta))
            .sum()
    }

    /// `‖p‖_{L²}` by Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `Σ|aₙ|`.
    pub fn coeff_l1(&self) -> f64 {
        self.coeffs.values().map(|a| a.norm()).sum()
    }

    /// `(1 − z)·p`.
    pub fn times_one_minus_z(&self) -> TrigPolynomial {
        let mut out: BTreeMap<i64, Complex64> = self.coeffs.clone();
        for (&k, &a) in &self.coeffs {
            *out.entry(k + 1).or_default() -= a;
        }
        TrigPolynomial::new(out)
    }
}

/// Refinement controls for the circle and disk quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub target_abs_tol: f64,
    pub max_refinement_levels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            target_abs_tol: 1e-8,
            max_refinement_levels: 20,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tol(target_abs_tol: f64) -> Self {
        Self {
            target_abs_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_tol > 0.0) {
            return Err(Error::invalid(format!(
                "quadrature tolerance must be positive, got {}",
                self.target_abs_tol
            )));
        }
        Ok(())
    }
}

/// Nonzero Fourier coefficients of the de la Vallée Poussin kernel `W_n`:
/// `W₀ = 1 + z`; for `n ≥ 1` a tent rising on `[2^{n−1}, 2ⁿ]` and falling on `[2ⁿ, 2^{n+1}]`.
pub fn vdp_coeffs(n: u32) -> BTreeMap<u64, f64> {
    if n == 0 {
        return [(0, 1.0), (1, 1.0)].into();
    }
    let lo = 1u64 << (n - 1);
    let hi = 1u64 << (n + 1);
    let mut out = BTreeMap::new();
    for k in lo + 1..hi {
        out.insert(k, vdp_coeff(n, k));
    }
    out
}

/// `Ŵ_n(k)`; exact in binary floating point.
pub fn vdp_coeff(n: u32, k: u64) -> f64 {
    if n == 0 {
        return if k <= 1 { 1.0 } else { 0.0 };
    }
    let lo = 1u64 << (n - 1);
    let mid = 1u64 << n;
    let hi = 1u64 << (n + 1);
    if k <= lo || k >= hi {
        0.0
    } else if k <= mid {
        (k - lo) as f64 * 2f64.powi(1 - n as i32)
    } else {
        (hi - k) as f64 * 2f64.powi(-(n as i32))
    }
}

/// Dyadic levels `n` whose kernel meets `k`.
fn vdp_levels(k: u64) -> impl Iterator<Item = u32> {
    let top = if k <= 1 { 1 } else { 64 - (k - 1).leading_zeros() + 1 };
    (0..=top).filter(move |&n| vdp_coeff(n, k) != 0.0)
}

struct CircleSampler {
    size: usize,
    fft: Arc<dyn Fft<f64>>,
    /// `(k − min index, k, a_k)`.
    coeffs: Vec<(usize, i64, Complex64)>,
}

impl CircleSampler {
    fn new(planner: &mut FftPlanner<f64>, p: &TrigPolynomial, size: usize) -> Self {
        let lo = p.coeffs.keys().next().copied().unwrap_or(0);
        let coeffs = p
            .coeffs
            .iter()
            .map(|(&k, &a)| ((k - lo) as usize, k, a))
            .collect();
        Self {
            size,
            fft: planner.plan_fft_inverse(size),
            coeffs,
        }
    }

    /// `Σ_j |p((j + offset)/size)|` for `j = 0..size`, where `radius` scales coefficient k by `radius^k`.
    fn abs_sum(&self, offset: f64, radius: f64, buf: &mut Vec<Complex64>) -> f64 {
        buf.clear();
        buf.resize(self.size, Complex64::new(0.0, 0.0));
        for &(slot, k, a) in &self.coeffs {
            let phase = 2.0 * PI * (slot as f64) * offset / self.size as f64;
            buf[slot] += a * radius.powi(k as i32) * Complex64::from_polar(1.0, phase);
        }
        self.fft.process(buf);
        buf.iter().map(|z| z.norm()).sum()
    }
}

fn initial_grid(span: u64) -> usize {
    (8 * span.max(1)).next_power_of_two() as usize
}

/// `∫₀¹ |p(e^{2iπθ})| dθ` by trapezoid sums on uniform grids, doubled until
/// successive estimates differ by less than half the tolerance.
pub fn l1_torus(p: &TrigPolynomial, q: &QuadratureSpec) -> Result<Estimate> {
    q.validate()?;
    circle_mean(p, 1.0, q.target_abs_tol, q.max_refinement_levels)
}

/// `∫₀¹ |p(r e^{2iπθ})| dθ` to absolute tolerance `tol`.
fn circle_mean(p: &TrigPolynomial, radius: f64, tol: f64, levels: usize) -> Result<Estimate> {
    if p.is_zero() {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    if p.coeffs.len() == 1 {
        let (&k, a) = p.coeffs.iter().next().unwrap();
        return Ok(Estimate {
            value: a.norm() * radius.powi(k as i32),
            error: 0.0,
        });
    }
    let mut planner = FftPlanner::new();
    let mut m = initial_grid(p.span());
    let mut buf = Vec::new();
    let mut sum = CircleSampler::new(&mut planner, p, m).abs_sum(0.0, radius, &mut buf);
    let mut estimate = sum / m as f64;
    let mut diff = f64::INFINITY;
    for _ in 0..levels {
        // New nodes are the midpoints of the current grid.
        let sampler = CircleSampler::new(&mut planner, p, m);
        sum += sampler.abs_sum(0.5, radius, &mut buf);
        m *= 2;
        let next = sum / m as f64;
        diff = (next - estimate).abs();
        estimate = next;
        if diff < tol / 2.0 {
            return Ok(Estimate {
                value: estimate,
                error: diff,
            });
        }
    }
    Err(Error::Accuracy {
        context: format!("circle L1 norm at radius {radius}, final grid {m}"),
        estimate,
        achieved: diff,
        target: tol,
    })
}

/// `Σ_n 2ⁿ ‖W_n ∗ φ‖_{L¹}` for `φ = Σ aₖ zᵏ`; each block is integrated to
/// `tol·2⁻ⁿ`, so the reported error is the sum of block errors.
pub fn besov_b11(a: &[Complex64], q: &QuadratureSpec) -> Result<Estimate> {
    q.validate()?;
    let mut blocks: BTreeMap<u32, BTreeMap<i64, Complex64>> = BTreeMap::new();
    for (k, &ak) in a.iter().enumerate() {
        if ak == Complex64::new(0.0, 0.0) {
            continue;
        }
        for n in vdp_levels(k as u64) {
            blocks
                .entry(n)
                .or_default()
                .insert(k as i64, ak * vdp_coeff(n, k as u64));
        }
    }
    let mut total = Estimate {
        value: 0.0,
        error: 0.0,
    };
    for (n, coeffs) in blocks {
        let scale = 2f64.powi(n as i32);
        let block_q = QuadratureSpec {
            target_abs_tol: q.target_abs_tol / scale,
            ..*q
        };
        let e = l1_torus(&TrigPolynomial::new(coeffs), &block_q)?;
        total.value += scale * e.value;
        total.error += scale * e.error;
    }
    Ok(total)
}

/// `‖g‖_{L¹(𝔻, dA/π)}` for `g = Σ (n+1)(n+2) aₙ zⁿ`, as `2∫₀¹ r M₁(g, r) dr`:
/// adaptive Gauss–Kronrod in `r` over circle means computed to a quarter of
/// the tolerance.
pub fn peller_disk_l1(a: &[Complex64], q: &QuadratureSpec) -> Result<Estimate> {
    q.validate()?;
    let g: Vec<Complex64> = a
        .iter()
        .enumerate()
        .map(|(n, &v)| v * ((n + 1) * (n + 2)) as f64)
        .collect();
    let poly = TrigPolynomial::analytic(&g);
    if poly.is_zero() {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    let inner_tol = q.target_abs_tol / 4.0;
    let failure = RefCell::new(None);
    let inner_error = Cell::new(0.0f64);
    let integrand = |r: f64| match circle_mean(&poly, r, inner_tol, q.max_refinement_levels) {
        Ok(e) => {
            inner_error.set(inner_error.get().max(e.error));
            2.0 * r * e.value
        }
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let outer = quad::adaptive(&integrand, 0.0, 1.0, q.target_abs_tol / 2.0, 0.0, 1 << 14);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let outer = outer?;
    // ∫ 2r dr = 1 carries the circle-mean error through unchanged.
    Ok(Estimate {
        value: outer.value,
        error: outer.error + inner_error.get(),
    })
}

/// `(‖p‖_{L¹}, (2/√π)·√(‖p‖_{L²}‖(1−z)p‖_{L²}))`.
pub fn elementary_bound_check(p: &TrigPolynomial, q: &QuadratureSpec) -> Result<(Estimate, f64)> {
    let l1 = l1_torus(p, q)?;
    let rhs = 2.0 / PI.sqrt() * (p.l2_norm() * p.times_one_minus_z().l2_norm()).sqrt();
    Ok((l1, rhs))
}

/// Both sides of the single dyadic block bound for `φ(k) = f(k)`:
/// `2ⁿ‖W_n∗φ‖_{L¹}` and
/// `(4/√π)(‖x^{1/2}f‖_{ℓ²(I_n)} + √(‖x^{3/2}f′‖_{L²(I_n)}‖x^{1/2}f‖_{ℓ²(I_n)}))`,
/// with `I_n = (2^{n−1}, 2^{n+1}]`.
pub fn dyadic_block_bound_check<F, D>(
    f: F,
    fprime: D,
    n: u32,
    q: &QuadratureSpec,
) -> Result<(Estimate, f64)>
where
    F: Fn(f64) -> Complex64,
    D: Fn(f64) -> Complex64,
{
    if n == 0 {
        return Err(Error::invalid("dyadic block index must be at least 1"));
    }
    let lo = 1u64 << (n - 1);
    let hi = 1u64 << (n + 1);
    let coeffs: BTreeMap<i64, Complex64> = (lo + 1..hi)
        .map(|k| (k as i64, f(k as f64) * vdp_coeff(n, k)))
        .collect();
    let scale = 2f64.powi(n as i32);
    let block_q = QuadratureSpec {
        target_abs_tol: q.target_abs_tol / scale,
        ..*q
    };
    let l1 = l1_torus(&TrigPolynomial::new(coeffs), &block_q)?;
    let lhs = Estimate {
        value: scale * l1.value,
        error: scale * l1.error,
    };
    let disc: f64 = (lo + 1..=hi)
        .map(|k| k as f64 * f(k as f64).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let g = |x: f64| x.powi(3) * fprime(x).norm_sqr();
    let cont = quad::adaptive(&g, lo as f64, hi as f64, 1e-14, 1e-12, 20_000)?
        .value
        .max(0.0)
        .sqrt();
    let rhs = 4.0 / PI.sqrt() * (disc + (cont * disc).sqrt());
    Ok((lhs, rhs))
}
