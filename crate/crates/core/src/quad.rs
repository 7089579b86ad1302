//! One-dimensional quadrature: Gauss–Legendre rules, adaptive Gauss–Kronrod
//! on finite intervals, and half-line integrals through `x = e^u`.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// An integral estimate with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending nodes.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Single 15-point Kronrod panel with the embedded 7-point Gauss error estimate.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Estimate {
        value: kron * h,
        error: ((kron - gauss) * h).abs(),
    }
}

struct Panel {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Globally adaptive Gauss–Kronrod on `[a, b]`: the panel with the largest
/// error is bisected until the total error drops below
/// `max(abs_tol, rel_tol·|I|)` or `max_panels` is reached.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    let first = gk15(f, a, b);
    let mut total = first;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, est: first });
    let mut panels = 1;
    loop {
        if !total.value.is_finite() || !total.error.is_finite() {
            return Err(Error::Divergence(format!(
                "non-finite integrand on [{a}, {b}]"
            )));
        }
        if total.error <= abs_tol.max(rel_tol * total.value.abs()) {
            return Ok(total);
        }
        if panels >= max_panels {
            return Err(Error::Accuracy {
                context: format!("adaptive Gauss-Kronrod on [{a}, {b}]"),
                estimate: total.value,
                achieved: total.error,
                target: abs_tol.max(rel_tol * total.value.abs()),
            });
        }
        let worst = heap.pop().expect("heap holds every live panel");
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk15(f, worst.a, mid);
        let right = gk15(f, mid, worst.b);
        total.value += left.value + right.value - worst.est.value;
        total.error += left.error + right.error - worst.est.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            est: left,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            est: right,
        });
        panels += 1;
        // Re-sum occasionally to stop drift in the running totals.
        if panels % 64 == 0 {
            total = heap.iter().fold(
                Estimate {
                    value: 0.0,
                    error: 0.0,
                },
                |acc, p| Estimate {
                    value: acc.value + p.est.value,
                    error: acc.error + p.est.error,
                },
            );
        }
    }
}

/// Number of dyadic blocks each tail may use before declaring divergence.
pub const MAX_TAIL_LEVELS: usize = 20;
const MAX_LOG_ARG: f64 = 700.0;

/// `∫_lo^∞ g(x) dx` for a nonnegative integrand, evaluated as
/// `∫ e^u g(e^u) du`. Each tail is covered by blocks of doubling length;
/// a tail stops once a block contributes less than `abs_tol / 8`.
pub fn half_line<F: Fn(f64) -> f64>(g: &F, lo: f64, abs_tol: f64) -> Result<Estimate> {
    half_line_centered(g, lo, 1.0, abs_tol)
}

/// As [`half_line`], with the doubling blocks anchored at `center` (clamped
/// to `lo`), where the integrand is expected to carry its mass.
pub fn half_line_centered<F: Fn(f64) -> f64>(
    g: &F,
    lo: f64,
    center: f64,
    abs_tol: f64,
) -> Result<Estimate> {
    if lo < 0.0 || !lo.is_finite() {
        return Err(Error::invalid(format!("half-line integral needs finite lo >= 0, got {lo}")));
    }
    if !(center > 0.0 && center.is_finite()) {
        return Err(Error::invalid(format!("half-line centre must be positive, got {center}")));
    }
    let h = |u: f64| {
        let x = u.exp();
        if x == 0.0 {
            return 0.0;
        }
        x * g(x)
    };
    let block_tol = abs_tol / 8.0;
    let panel_tol = abs_tol / (8.0 * MAX_TAIL_LEVELS as f64);
    let mut total = Estimate {
        value: 0.0,
        error: 0.0,
    };
    let add = |total: &mut Estimate, e: Estimate| {
        total.value += e.value;
        total.error += e.error;
    };
    // A tail block that dwarfs everything before it is growth, not roundoff.
    let tail_block = |a: f64, b: f64, total: &Estimate| match adaptive(&h, a, b, panel_tol, 1e-12, 4000) {
        Err(Error::Accuracy { estimate, .. }) if estimate.abs() > 1e3 * total.value.abs().max(1.0) => {
            Err(Error::Divergence(format!(
                "half-line integral from {lo} grows on [e^{a}, e^{b}]"
            )))
        }
        other => other,
    };

    let pivot = center.ln().clamp(-MAX_LOG_ARG / 2.0, MAX_LOG_ARG / 2.0);
    let pivot = if lo > 0.0 { pivot.max(lo.ln()) } else { pivot };
    if lo > 0.0 && pivot > lo.ln() {
        add(&mut total, adaptive(&h, lo.ln(), pivot, panel_tol, 1e-12, 4000)?);
    }

    // Upper tail: [pivot, pivot+1], [pivot+1, pivot+3], ...
    let mut a = pivot;
    let mut len = 1.0;
    let mut settled = false;
    for _ in 0..MAX_TAIL_LEVELS {
        let b = (a + len).min(MAX_LOG_ARG);
        let e = tail_block(a, b, &total)?;
        add(&mut total, e);
        if e.value.abs() < block_tol && a > pivot {
            settled = true;
            break;
        }
        if b >= MAX_LOG_ARG {
            break;
        }
        a = b;
        len *= 2.0;
    }
    if !settled {
        return Err(Error::Divergence(format!(
            "upper tail of half-line integral from {lo} did not settle"
        )));
    }

    if lo == 0.0 {
        let mut b = pivot;
        let mut len = 1.0;
        settled = false;
        for _ in 0..MAX_TAIL_LEVELS {
            let a = (b - len).max(-MAX_LOG_ARG);
            let e = tail_block(a, b, &total)?;
            add(&mut total, e);
            if e.value.abs() < block_tol && b < pivot {
                settled = true;
                break;
            }
            if a <= -MAX_LOG_ARG {
                break;
            }
            b = a;
            len *= 2.0;
        }
        if !settled {
            return Err(Error::Divergence(
                "lower tail of half-line integral near 0 did not settle".into(),
            ));
        }
    }
    Ok(total)
}
