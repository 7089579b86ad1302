//! Radial multipliers on `ℤ^d`: divided differences, the kernels `G_m`, the
//! divided-difference form of the `ℓ¹`-ball Dirichlet kernel, the functions
//! `A^d_{s,t}`, and Monte Carlo `L¹` norms on cubes.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::besov::{l1_torus, QuadratureSpec, TrigPolynomial};
use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, Estimate};

/// Default minimal separation of divided-difference nodes.
pub const DEFAULT_SEP_MIN: f64 = 1e-3;

/// Pairwise separated nodes in `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    nodes: Vec<f64>,
    sep_min: f64,
}

impl NodeSet {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        Self::with_separation(nodes, DEFAULT_SEP_MIN)
    }

    pub fn with_separation(nodes: Vec<f64>, sep_min: f64) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::invalid("divided difference needs at least one node"));
        }
        if let Some(t) = nodes.iter().find(|t| !(t.abs() <= 1.0)) {
            return Err(Error::invalid(format!("node {t} outside [-1, 1]")));
        }
        let mut sorted = nodes.clone();
        sorted.sort_by(f64::total_cmp);
        if let Some(w) = sorted.windows(2).find(|w| w[1] - w[0] < sep_min) {
            return Err(Error::invalid(format!(
                "nodes {} and {} closer than {sep_min}",
                w[0], w[1]
            )));
        }
        Ok(Self { nodes, sep_min })
    }

    /// Nodes `cos x_i`.
    pub fn from_angles(x: &[f64], sep_min: f64) -> Result<Self> {
        Self::with_separation(x.iter().map(|v| v.cos()).collect(), sep_min)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn sep_min(&self) -> f64 {
        self.sep_min
    }
}

/// `[t₁, …, t_d]f` by the Newton table on sorted nodes.
pub fn divided_difference<F: Fn(f64) -> Complex64>(nodes: &NodeSet, f: F) -> Complex64 {
    let mut t = nodes.nodes.clone();
    t.sort_by(f64::total_cmp);
    let mut table: Vec<Complex64> = t.iter().map(|&x| f(x)).collect();
    let d = t.len();
    for level in 1..d {
        for i in 0..d - level {
            table[i] = (table[i + 1] - table[i]) / (t[i + level] - t[i]);
        }
    }
    table[0]
}

/// `Σ_j f(t_j) / Π_{k≠j}(t_j − t_k)`.
pub fn divided_difference_partial_fractions<F: Fn(f64) -> Complex64>(
    nodes: &NodeSet,
    f: F,
) -> Complex64 {
    let t = &nodes.nodes;
    (0..t.len())
        .map(|j| {
            let denom: f64 = (0..t.len())
                .filter(|&k| k != j)
                .map(|k| t[j] - t[k])
                .product();
            f(t[j]) / denom
        })
        .sum()
}

fn check_even(d: usize) -> Result<()> {
    if d < 2 || d % 2 != 0 {
        return Err(Error::Unsupported(format!(
            "kernel G_m is defined for even d >= 2, got d = {d}"
        )));
    }
    Ok(())
}

/// `G_m(cos θ) = (−1)^{d/2−1}(sin θ)^{d−2}(cos mθ + cos (m+1)θ)`.
pub fn g_kernel(m: u32, d: usize, theta: f64) -> Result<f64> {
    check_even(d)?;
    Ok(g_kernel_unchecked(m, d, theta))
}

fn g_kernel_unchecked(m: u32, d: usize, theta: f64) -> f64 {
    let sign = if (d / 2 - 1) % 2 == 0 { 1.0 } else { -1.0 };
    let mf = m as f64;
    sign * theta.sin().powi(d as i32 - 2) * ((mf * theta).cos() + ((mf + 1.0) * theta).cos())
}

/// `G_m` as a function of `t ∈ [−1, 1]`: `(1 − t²)^{d/2−1}` times Chebyshev values.
fn g_kernel_poly(m: u32, d: usize, t: f64) -> f64 {
    let sign = if (d / 2 - 1) % 2 == 0 { 1.0 } else { -1.0 };
    let (tm, tm1) = chebyshev_pair(m, t);
    sign * (1.0 - t * t).powi(d as i32 / 2 - 1) * (tm + tm1)
}

/// `(T_m(t), T_{m+1}(t))` by the three-term recurrence.
fn chebyshev_pair(m: u32, t: f64) -> (f64, f64) {
    let (mut a, mut b) = (1.0, t);
    for _ in 0..m {
        let c = 2.0 * t * b - a;
        a = b;
        b = c;
    }
    (a, b)
}

/// `D_m(x) = [cos x₁, …, cos x_d]G_m` for even `d`.
pub fn dirichlet_divdiff(m: u32, x: &[f64], sep_min: f64) -> Result<f64> {
    check_even(x.len())?;
    let nodes = NodeSet::from_angles(x, sep_min)?;
    let d = x.len();
    Ok(divided_difference(&nodes, |t| Complex64::new(g_kernel_poly(m, d, t), 0.0)).re)
}

/// `D_m` for odd `d`: the `(d+1)`-dimensional kernel averaged over an extra
/// coordinate on an equispaced grid, exact once the grid has more than `2m+1` points.
pub fn dirichlet_divdiff_odd(m: u32, x: &[f64], sep_min: f64) -> Result<f64> {
    if x.len() % 2 == 0 {
        return Err(Error::invalid("odd-dimensional wrapper needs odd d"));
    }
    let points = 4 * (m as usize + 1);
    let cosines: Vec<f64> = x.iter().map(|v| v.cos()).collect();
    // Shift the grid until every extra node clears the given ones.
    for attempt in 0..64 {
        let offset = (attempt as f64 + 0.5) / 64.0;
        let grid: Vec<f64> = (0..points)
            .map(|k| -PI + 2.0 * PI * (k as f64 + offset) / points as f64)
            .collect();
        let clear = grid
            .iter()
            .all(|g| cosines.iter().all(|c| (g.cos() - c).abs() >= sep_min));
        if !clear {
            continue;
        }
        let mut y = x.to_vec();
        y.push(0.0);
        let mut sum = 0.0;
        for g in grid {
            *y.last_mut().unwrap() = g;
            sum += dirichlet_divdiff(m, &y, sep_min)?;
        }
        return Ok(sum / points as f64);
    }
    Err(Error::invalid("no admissible averaging grid for these nodes"))
}

/// `Σ_{|n|₁ ≤ m} e^{i n·x}` summed directly.
pub fn lattice_sum(m: u32, x: &[f64]) -> f64 {
    let shells = lattice_shells(m as usize, x);
    shells.iter().sum()
}

/// `S_k(x) = Σ_{|n|₁ = k} e^{i n·x}` for `k = 0..=m`, by convolving the
/// per-coordinate weights `1, 2cos(x), 2cos(2x), …`.
pub fn lattice_shells(m: usize, x: &[f64]) -> Vec<f64> {
    let mut acc = vec![0.0; m + 1];
    acc[0] = 1.0;
    let mut weights = vec![0.0; m + 1];
    for &xi in x {
        weights[0] = 1.0;
        for (k, w) in weights.iter_mut().enumerate().skip(1) {
            *w = 2.0 * (k as f64 * xi).cos();
        }
        let mut next = vec![0.0; m + 1];
        for (i, &a) in acc.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &w) in weights.iter().enumerate().take(m + 1 - i) {
                next[i + j] += a * w;
            }
        }
        acc = next;
    }
    acc
}

/// `Σ_{n ∈ ℤ^d} a_{|n|₁} e^{i n·x}`.
pub fn radial_lattice_sum(a: &[Complex64], x: &[f64]) -> Complex64 {
    if a.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    lattice_shells(a.len() - 1, x)
        .iter()
        .zip(a)
        .map(|(s, &ak)| ak * *s)
        .sum()
}

/// `A^d_{s,t}(x) = Σ_i χ_{[s,t]}(x_i) / Π_{j≠i}(cos x_i − cos x_j)`.
pub fn a_dst(s: f64, t: f64, x: &[f64], sep_min: f64) -> Result<f64> {
    if !(0.0 <= s && s < t && t <= PI) {
        return Err(Error::invalid(format!("need 0 <= s < t <= pi, got s={s}, t={t}")));
    }
    let nodes = NodeSet::from_angles(x, sep_min)?;
    Ok(divided_difference_partial_fractions(&nodes, |c| {
        let theta = c.clamp(-1.0, 1.0).acos();
        Complex64::new(if s <= theta && theta <= t { 1.0 } else { 0.0 }, 0.0)
    })
    .re)
}

/// Integration cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cube {
    /// `[0, π]^d`, Lebesgue measure.
    ZeroPi,
    /// `[−π, π]^d`, normalized to total mass 1.
    Torus,
}

impl Cube {
    fn range(self) -> (f64, f64) {
        match self {
            Cube::ZeroPi => (0.0, PI),
            Cube::Torus => (-PI, PI),
        }
    }

    fn volume(self, d: usize) -> f64 {
        match self {
            Cube::ZeroPi => PI.powi(d as i32),
            Cube::Torus => 1.0,
        }
    }
}

/// Monte Carlo sampling budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    /// Points whose nodes collide closer than this are rejected and redrawn.
    pub sep_min: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            samples: 100_000,
            seed: 0,
            sep_min: 1e-6,
        }
    }
}

/// Number of independent substreams; fixed so results do not depend on the worker count.
pub const MC_CHUNKS: usize = 64;
const MAX_REJECTIONS_PER_POINT: usize = 1000;

/// Monte Carlo `L¹` estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    /// Sample standard deviation over `√samples`, in the same units as `value`.
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
    pub rejected: usize,
    /// Rejected fraction × volume × largest sampled `|f|`.
    pub bias_bound: f64,
}

struct ChunkStats {
    n: usize,
    mean: f64,
    m2: f64,
    max: f64,
    rejected: usize,
}

/// `∫ |f|` over the cube with `samples` uniform points. Chunk `c` draws from
/// ChaCha8 stream `c` of `seed`, so doubling `samples` extends every chunk's sequence.
pub fn l1_torus_mc<F>(f: F, d: usize, cube: Cube, cfg: &McConfig) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    if cfg.samples < 1000 {
        return Err(Error::invalid(format!(
            "Monte Carlo needs at least 1000 samples, got {}",
            cfg.samples
        )));
    }
    if d == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    let (lo, hi) = cube.range();
    let per_chunk = cfg.samples / MC_CHUNKS;
    let extra = cfg.samples % MC_CHUNKS;
    let stats: Result<Vec<ChunkStats>> = (0..MC_CHUNKS)
        .into_par_iter()
        .map(|c| {
            let n = per_chunk + usize::from(c < extra);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c as u64);
            let mut x = vec![0.0; d];
            let mut st = ChunkStats {
                n: 0,
                mean: 0.0,
                m2: 0.0,
                max: 0.0,
                rejected: 0,
            };
            for _ in 0..n {
                let mut tries = 0;
                let v = loop {
                    for xi in x.iter_mut() {
                        *xi = rng.random_range(lo..hi);
                    }
                    match f(&x) {
                        Ok(v) => break v.abs(),
                        Err(Error::InvalidInput(_)) if tries < MAX_REJECTIONS_PER_POINT => {
                            tries += 1;
                            st.rejected += 1;
                        }
                        Err(e) => return Err(e),
                    }
                };
                // Welford update
                st.n += 1;
                let delta = v - st.mean;
                st.mean += delta / st.n as f64;
                st.m2 += delta * (v - st.mean);
                st.max = st.max.max(v);
            }
            Ok(st)
        })
        .collect();
    let stats = stats?;
    // Merge in chunk order.
    let (mut n, mut mean, mut m2, mut max, mut rejected) = (0usize, 0.0, 0.0, 0.0f64, 0usize);
    for s in &stats {
        if s.n == 0 {
            continue;
        }
        let total = n + s.n;
        let delta = s.mean - mean;
        mean += delta * s.n as f64 / total as f64;
        m2 += s.m2 + delta * delta * (n as f64) * (s.n as f64) / total as f64;
        n = total;
        max = max.max(s.max);
        rejected += s.rejected;
    }
    let vol = cube.volume(d);
    let var = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
    let drawn = (n + rejected) as f64;
    Ok(McEstimate {
        value: vol * mean,
        std_error: vol * (var / n as f64).sqrt(),
        samples: n,
        seed: cfg.seed,
        rejected,
        bias_bound: rejected as f64 / drawn * vol * max,
    })
}

/// `‖A^d_{s,t}‖_{L¹([0,π]^d)}` by Monte Carlo.
pub fn a_dst_l1_mc(s: f64, t: f64, d: usize, cfg: &McConfig) -> Result<McEstimate> {
    let sep = cfg.sep_min;
    l1_torus_mc(|x| a_dst(s, t, x, sep), d, Cube::ZeroPi, cfg)
}

/// `∫_{[0,π]²} |f|` by composite Gauss–Legendre, a cross-check for the `d = 2` estimates.
pub fn l1_square_tensor<F: Fn(f64, f64) -> f64>(f: F, panels: usize, nodes: usize) -> f64 {
    let (gx, gw) = gauss_legendre(nodes);
    let h = PI / panels as f64;
    let pts: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| {
            let a = p as f64 * h;
            gx.iter()
                .zip(&gw)
                .map(move |(x, w)| (a + 0.5 * h * (x + 1.0), 0.5 * h * w))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut total = 0.0;
    for &(x, wx) in &pts {
        for &(y, wy) in &pts {
            total += wx * wy * f(x, y).abs();
        }
    }
    total
}

/// Both sides of the radial `L¹` comparison on `𝕋^d` (normalized measures).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusComparison {
    /// `‖Σ_n a_{|n|} e^{in·x}‖_{L¹(𝕋^d)}` by Monte Carlo.
    pub lhs: McEstimate,
    /// `L¹(𝕋)` norm of the one-dimensional comparison symbol.
    pub rhs: Estimate,
}

impl TorusComparison {
    pub fn ratio(&self) -> f64 {
        self.lhs.value / self.rhs.value
    }
}

fn coeff(a: &[Complex64], k: i64) -> Complex64 {
    if k < 0 {
        return Complex64::new(0.0, 0.0);
    }
    a.get(k as usize).copied().unwrap_or_default()
}

/// Radial symbol on `ℤ^d` against `Σ_{m≥0} (m+1)(a_m − a_{m+2}) e^{imθ}`.
pub fn check_prop44(
    a: &[Complex64],
    d: usize,
    q: &QuadratureSpec,
    mc: &McConfig,
) -> Result<TorusComparison> {
    let rhs_coeffs: Vec<Complex64> = (0..a.len() as i64)
        .map(|m| (m + 1) as f64 * (coeff(a, m) - coeff(a, m + 2)))
        .collect();
    let rhs = l1_torus(&TrigPolynomial::analytic(&rhs_coeffs), q)?;
    let lhs = l1_torus_mc(|x| Ok(radial_lattice_sum(a, x).norm()), d, Cube::Torus, mc)?;
    Ok(TorusComparison { lhs, rhs })
}

/// Radial symbol on `ℤ^d` against `Σ_{m∈ℤ} |m|(a_{|m|−1} − a_{|m|+1}) e^{imθ}`.
pub fn check_remark_fm1(
    a: &[Complex64],
    d: usize,
    q: &QuadratureSpec,
    mc: &McConfig,
) -> Result<TorusComparison> {
    let rhs = l1_torus(&remark_symbol(a), q)?;
    let lhs = l1_torus_mc(|x| Ok(radial_lattice_sum(a, x).norm()), d, Cube::Torus, mc)?;
    Ok(TorusComparison { lhs, rhs })
}

/// `b_m = |m|(a_{|m|−1} − a_{|m|+1})`, `m ∈ ℤ`.
pub fn remark_symbol(a: &[Complex64]) -> TrigPolynomial {
    let top = a.len() as i64 + 1;
    let coeffs = (-top..=top)
        .filter(|&m| m != 0)
        .map(|m| {
            let k = m.abs();
            (m, k as f64 * (coeff(a, k - 1) - coeff(a, k + 1)))
        })
        .collect();
    TrigPolynomial::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn admissible(rng: &mut ChaCha8Rng, d: usize, sep: f64) -> Vec<f64> {
        loop {
            let x: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..PI)).collect();
            if NodeSet::from_angles(&x, sep).is_ok() {
                return x;
            }
        }
    }

    #[test]
    fn divided_difference_examples() {
        let one = NodeSet::new(vec![0.3]).unwrap();
        assert_eq!(divided_difference(&one, |t| c(t * t)), c(0.09));
        let two = NodeSet::new(vec![0.3, -0.5]).unwrap();
        let v = divided_difference(&two, |t| c(t.exp()));
        assert!((v.re - (0.3f64.exp() - (-0.5f64).exp()) / 0.8).abs() < 1e-14);
        let four = NodeSet::new(vec![-0.9, -0.1, 0.4, 0.8]).unwrap();
        assert!(divided_difference(&four, |t| c(3.0 * t * t - t + 2.0)).norm() < 1e-13);
        assert!(NodeSet::new(vec![0.1, 0.1005]).is_err());
        assert!(NodeSet::new(vec![1.5]).is_err());
    }

    #[test]
    fn newton_matches_partial_fractions() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in 1..=6 {
            for _ in 0..50 {
                let t: Vec<f64> = loop {
                    let t: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
                    if NodeSet::with_separation(t.clone(), 0.1).is_ok() {
                        break t;
                    }
                };
                let nodes = NodeSet::new(t).unwrap();
                let f = |x: f64| Complex64::new((3.0 * x).sin(), x.exp());
                let a = divided_difference(&nodes, f);
                let b = divided_difference_partial_fractions(&nodes, f);
                assert!((a - b).norm() <= 1e-8 * (1.0 + b.norm()));
            }
        }
    }

    #[test]
    fn polynomial_exactness() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for trial in 0..100 {
            let d = 2 + trial % 5;
            let coeffs: Vec<f64> = (0..d - 1).map(|_| rng.random_range(-1.0..1.0)).collect();
            let scale = coeffs.iter().map(|v: &f64| v.abs()).fold(0.0, f64::max);
            let x = admissible(&mut rng, d, 0.05);
            let nodes = NodeSet::from_angles(&x, 0.05).unwrap();
            let p = |t: f64| c(coeffs.iter().rev().fold(0.0, |acc, &a| acc * t + a));
            assert!(divided_difference(&nodes, p).norm() <= 1e-9 * scale.max(1.0));
        }
    }

    #[test]
    fn g_kernel_examples() {
        let th = 0.7f64;
        assert!((g_kernel(0, 2, th).unwrap() - (1.0 + th.cos())).abs() < 1e-15);
        assert_eq!(g_kernel(1, 2, 0.0).unwrap(), 2.0);
        assert!((g_kernel(0, 4, PI / 2.0).unwrap() + 1.0).abs() < 1e-15);
        assert!(matches!(g_kernel(0, 3, 0.1), Err(Error::Unsupported(_))));
        for m in 0..6 {
            for d in [2, 4, 6] {
                let v = g_kernel(m, d, th).unwrap();
                assert!((v - g_kernel_poly(m, d, th.cos())).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dirichlet_examples() {
        let x = [0.4, 2.1];
        assert!((dirichlet_divdiff(0, &x, 1e-3).unwrap() - 1.0).abs() < 1e-13);
        let expect = 1.0 + 2.0 * x[0].cos() + 2.0 * x[1].cos();
        assert!((dirichlet_divdiff(1, &x, 1e-3).unwrap() - expect).abs() < 1e-12);
        assert!((lattice_sum(1, &x) - expect).abs() < 1e-14);
        assert!(dirichlet_divdiff(1, &[0.4, 0.4], 1e-3).is_err());
    }

    #[test]
    fn dirichlet_identity_in_four_and_three_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let x = admissible(&mut rng, 4, 0.05);
            for m in 0..6 {
                let v = dirichlet_divdiff(m, &x, 0.05).unwrap();
                assert!((v - lattice_sum(m, &x)).abs() < 1e-8, "m={m}");
            }
            let y = &x[..3];
            for m in 0..5 {
                let v = dirichlet_divdiff_odd(m, y, 1e-4).unwrap();
                assert!((v - lattice_sum(m, y)).abs() < 1e-7, "odd m={m}: {v}");
            }
        }
    }

    #[test]
    fn dirichlet_symmetric_under_permutation() {
        let x = [0.3, 1.9, 2.5, 1.1];
        let y = [2.5, 0.3, 1.1, 1.9];
        for m in 0..8 {
            let a = dirichlet_divdiff(m, &x, 1e-3).unwrap();
            let b = dirichlet_divdiff(m, &y, 1e-3).unwrap();
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
            let a = a_dst(0.2, 1.5, &x, 1e-3).unwrap();
            let b = a_dst(0.2, 1.5, &y, 1e-3).unwrap();
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn a_dst_examples() {
        assert_eq!(a_dst(0.2, 1.0, &[0.5], 1e-3).unwrap(), 1.0);
        assert_eq!(a_dst(0.2, 1.0, &[1.5], 1e-3).unwrap(), 0.0);
        assert!(a_dst(0.2, 1.0, &[0.3, 0.6, 0.9], 1e-3).unwrap().abs() < 1e-12);
        let v = a_dst(0.2, 1.0, &[0.5, 2.0], 1e-3).unwrap();
        assert!((v - 1.0 / (0.5f64.cos() - 2f64.cos())).abs() < 1e-14);
        assert!(a_dst(1.0, 0.5, &[0.5], 1e-3).is_err());
    }

    #[test]
    fn radial_sum_and_remark_symbol() {
        let x = [0.3, -1.2];
        let a = vec![c(2.0), c(0.5)];
        let v = radial_lattice_sum(&a, &x);
        let expect = 2.0 + 0.5 * (2.0 * 0.3f64.cos() + 2.0 * 1.2f64.cos());
        assert!((v.re - expect).abs() < 1e-14);
        let b = remark_symbol(&[c(1.0)]);
        assert_eq!(b.coeffs().len(), 2);
        assert_eq!(b.coeffs()[&1], c(1.0));
        assert_eq!(b.coeffs()[&-1], c(1.0));
        // a constant on 0..=4: only |m| = 4, 5 survive
        let flat = vec![c(1.0); 5];
        let b = remark_symbol(&flat);
        let keys: Vec<i64> = b.coeffs().keys().copied().collect();
        assert_eq!(keys, vec![-5, -4, 4, 5]);
    }

    #[test]
    fn mc_basics() {
        let cfg = McConfig {
            samples: 20_000,
            seed: 5,
            ..McConfig::default()
        };
        let z = l1_torus_mc(|_| Ok(0.0), 3, Cube::ZeroPi, &cfg).unwrap();
        assert_eq!((z.value, z.std_error), (0.0, 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let t = rng.random_range(0.1..PI);
            let s = rng.random_range(0.0..t);
            let e = a_dst_l1_mc(s, t, 1, &cfg).unwrap();
            assert!((e.value - (t - s)).abs() <= 3.0 * e.std_error, "{e:?} vs {}", t - s);
        }
        let a = l1_torus_mc(|x| Ok(x[0].cos()), 2, Cube::Torus, &cfg).unwrap();
        let b = l1_torus_mc(|x| Ok(x[0].cos()), 2, Cube::Torus, &cfg).unwrap();
        assert_eq!(a, b);
        assert!((a.value - 2.0 / PI).abs() < 4.0 * a.std_error);
        assert!(l1_torus_mc(|_| Ok(1.0), 1, Cube::ZeroPi, &McConfig { samples: 10, ..cfg }).is_err());
    }

    #[test]
    fn mc_independent_of_thread_count() {
        let cfg = McConfig {
            samples: 5_000,
            seed: 77,
            ..McConfig::default()
        };
        let f = |x: &[f64]| a_dst(0.1, 0.9, x, 1e-6);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let one = pool.install(|| l1_torus_mc(f, 2, Cube::ZeroPi, &cfg).unwrap());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let three = pool.install(|| l1_torus_mc(f, 2, Cube::ZeroPi, &cfg).unwrap());
        assert_eq!(one, three);
    }

    #[test]
    fn prop44_delta() {
        let q = QuadratureSpec::default();
        let mc = McConfig {
            samples: 2000,
            ..McConfig::default()
        };
        let r = check_prop44(&[c(1.0)], 2, &q, &mc).unwrap();
        assert!((r.lhs.value - 1.0).abs() < 1e-14 && r.lhs.std_error < 1e-14);
        assert_eq!(r.rhs.value, 1.0);
        let r = check_remark_fm1(&[c(1.0)], 2, &q, &mc).unwrap();
        assert!((r.rhs.value - 4.0 / PI).abs() < 1e-8);
    }

    #[test]
    fn tensor_cross_check_of_a1_square() {
        // ∫∫ |χ(x)−χ(y)|/|cos x − cos y| has an integrable log singularity;
        // a smooth integrand checks the rule itself.
        let v = l1_square_tensor(|x, y| x.sin() * y.sin(), 4, 16);
        assert!((v - 4.0).abs() < 1e-12);
    }
}
