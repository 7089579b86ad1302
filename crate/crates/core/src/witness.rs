//! Radial Schur multipliers on the free group: geodesic rays, witness vector
//! families built from a Hankel square-root factorization, and certificate numbers.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hankel::{build_hankel, schatten1, sqrt_factor};
use crate::linalg::{operator_norm_real, singular_values};
use crate::seqsym::{DiscreteSymbol, ParityLimits, Step};

/// Tail allowance on the step-2 difference Hankel used by the witness construction.
pub const WITNESS_TAIL_TOL: f64 = 1e-10;
const MAX_RANK: usize = 1 << 14;

/// Freely reduced word; letter `k > 0` is the generator `g_k`, `−k` its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FreeWord {
    letters: Vec<i32>,
}

impl FreeWord {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Reduced word from letters; rejects zero letters and unreduced input.
    pub fn new(letters: Vec<i32>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(Error::invalid("letter 0 is not a generator"));
        }
        if letters.windows(2).any(|w| w[0] == -w[1]) {
            return Err(Error::invalid(format!("word {letters:?} is not freely reduced")));
        }
        Ok(Self { letters })
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce(letters: &[i32]) -> Result<Self> {
        let mut out: Vec<i32> = Vec::with_capacity(letters.len());
        for &l in letters {
            if l == 0 {
                return Err(Error::invalid("letter 0 is not a generator"));
            }
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Ok(Self { letters: out })
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    pub fn mul(&self, other: &FreeWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self::reduce(&letters).expect("reduced inputs have nonzero letters")
    }

    /// Prefix of the given length.
    pub fn prefix(&self, len: usize) -> Self {
        Self {
            letters: self.letters[..len].to_vec(),
        }
    }

    /// `g₁ᵏ`.
    pub fn axis(k: usize) -> Self {
        Self {
            letters: vec![1; k],
        }
    }

    fn common_prefix(&self, other: &FreeWord) -> usize {
        self.letters
            .iter()
            .zip(&other.letters)
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Length of the leading `g₁`-block.
    fn axis_prefix(&self) -> usize {
        self.letters.iter().take_while(|&&l| l == 1).count()
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if *l > 0 {
                write!(f, "g{l}")?;
            } else {
                write!(f, "g{}^-1", -l)?;
            }
        }
        Ok(())
    }
}

/// Word metric `d(x, y) = |x⁻¹y|`.
pub fn distance(x: &FreeWord, y: &FreeWord) -> usize {
    x.len() + y.len() - 2 * x.common_prefix(y)
}

/// Geodesic ray from `x` merging into the base ray `(e, g₁, g₁², …)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicRay {
    origin: FreeWord,
    axis_entry: usize,
}

impl GeodesicRay {
    pub fn origin(&self) -> &FreeWord {
        &self.origin
    }

    /// Steps until the ray reaches the base axis.
    pub fn steps_to_axis(&self) -> usize {
        self.origin.len() - self.axis_entry
    }

    /// `p_x(i)`.
    pub fn step(&self, i: usize) -> FreeWord {
        let off = self.steps_to_axis();
        if i <= off {
            self.origin.prefix(self.origin.len() - i)
        } else {
            FreeWord::axis(self.axis_entry + i - off)
        }
    }
}

/// The ray strips trailing letters of `x = g₁ʲw` down to `g₁ʲ`, then advances along `g₁`.
pub fn geodesic_ray(x: &FreeWord) -> GeodesicRay {
    GeodesicRay {
        origin: x.clone(),
        axis_entry: x.axis_prefix(),
    }
}

/// First meeting indices `(i₀, j₀)` of the rays from `x` and `y`; the rays
/// coincide from there on, and `i₀ + j₀ = d(x, y)`.
pub fn first_meet(x: &FreeWord, y: &FreeWord) -> (usize, usize) {
    let l = x.common_prefix(y);
    let jx = x.axis_prefix();
    let jy = y.axis_prefix();
    if l > jx {
        // Both leave the axis at the same point and share the prefix of length l.
        (x.len() - l, y.len() - l)
    } else {
        let m = jx.max(jy);
        (x.len() - jx + m - jx, y.len() - jy + m - jy)
    }
}

/// Meet set `{(i, j) : p_x(i) = p_y(j)}` with `i, j ≤ bound`, by comparing ray vertices.
pub fn meet_set(x: &FreeWord, y: &FreeWord, bound: usize) -> Vec<(usize, usize)> {
    let rx = geodesic_ray(x);
    let ry = geodesic_ray(y);
    let ys: HashMap<FreeWord, usize> = (0..=bound).map(|j| (ry.step(j), j)).collect();
    (0..=bound)
        .filter_map(|i| ys.get(&rx.step(i)).map(|&j| (i, j)))
        .collect()
}

fn letter_rank(l: i32) -> (i32, bool) {
    (l.abs(), l < 0)
}

fn shortlex(a: &FreeWord, b: &FreeWord) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        a.letters
            .iter()
            .map(|&l| letter_rank(l))
            .cmp(b.letters.iter().map(|&l| letter_rank(l)))
    })
}

/// Ball of the given radius in the free group on `generators` letters,
/// ordered by length then lexicographically with `g₁ < g₁⁻¹ < g₂ < …`.
pub fn ball(generators: u32, radius: usize) -> Result<Vec<FreeWord>> {
    if generators == 0 {
        return Err(Error::invalid("free group needs at least one generator"));
    }
    let alphabet: Vec<i32> = (1..=generators as i32).flat_map(|g| [g, -g]).collect();
    let mut out = vec![FreeWord::identity()];
    let mut frontier = vec![FreeWord::identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &alphabet {
                if w.letters.last() == Some(&-l) {
                    continue;
                }
                let mut letters = w.letters.clone();
                letters.push(l);
                next.push(FreeWord { letters });
            }
        }
        next.sort_by(shortlex);
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}

/// Witness vectors `P(x) = Σ B(e_i) ⊗ δ_{p_x(i)}`, `Q(y) = Σ A(e_j) ⊗ δ_{p_y(j)}`
/// on a ball of the free group, from `H = A*B` for the step-2 difference Hankel.
#[derive(Debug, Clone)]
pub struct WitnessPair {
    /// Requested truncation; the factorization is built at `rank ≥ k`.
    pub k: usize,
    pub rank: usize,
    pub generators: u32,
    pub radius: usize,
    pub limits: ParityLimits,
    /// `‖H‖_{S¹}` of the rank-`rank` corner.
    pub s1: f64,
    /// Tail bound beyond the corner.
    pub tail: f64,
    /// `|ℓ_even| + |ℓ_odd| + ‖H‖_{S¹} + tail`.
    pub cert: f64,
    a: DMatrix<Complex64>,
    b: DMatrix<Complex64>,
    ball: Vec<FreeWord>,
    index: HashMap<FreeWord, usize>,
}

/// Smallest `K` (searched by doubling then bisection) with `tail_s1_bound(K) < tol`.
pub fn required_rank(b: &DiscreteSymbol, tol: f64) -> Option<usize> {
    let mut hi = 1usize;
    while b.tail_s1_bound(hi) >= tol {
        hi *= 2;
        if hi > MAX_RANK {
            return None;
        }
    }
    // hi/2 fails by construction (or is 0)
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if b.tail_s1_bound(mid) < tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

pub fn witness_from_symbol(phi: &DiscreteSymbol, k: usize, ball_radius: usize) -> Result<WitnessPair> {
    witness_on_free_group(phi, k, 2, ball_radius)
}

/// Witness construction on the free group with `generators` letters. The
/// factorization rank is `k + 2·radius`, so every meet-set sum inside the
/// ball telescopes to an index at least `2k`.
pub fn witness_on_free_group(
    phi: &DiscreteSymbol,
    k: usize,
    generators: u32,
    ball_radius: usize,
) -> Result<WitnessPair> {
    if k == 0 {
        return Err(Error::invalid("truncation K must be at least 1"));
    }
    let diff = phi.difference(Step::Two);
    let tail_k = diff.tail_s1_bound(k);
    if !(tail_k < WITNESS_TAIL_TOL) {
        return Err(Error::Refused {
            reason: format!(
                "tail bound {tail_k:e} at K={k} exceeds {WITNESS_TAIL_TOL:e} for {}",
                phi.description()
            ),
            required: required_rank(&diff, WITNESS_TAIL_TOL),
        });
    }
    let rank = k + 2 * ball_radius;
    let h = build_hankel(&diff, rank)?;
    let f = sqrt_factor(&h)?;
    let tail = diff.tail_s1_bound(rank);
    let limits = phi.limits();
    let cert = limits.even.norm() + limits.odd.norm() + f.s1 + tail;
    let ball = ball(generators, ball_radius)?;
    let index = ball.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    Ok(WitnessPair {
        k,
        rank,
        generators,
        radius: ball_radius,
        limits,
        s1: f.s1,
        tail,
        cert,
        a: f.a,
        b: f.b,
        ball,
        index,
    })
}

impl WitnessPair {
    pub fn ball(&self) -> &[FreeWord] {
        &self.ball
    }

    fn check_member(&self, x: &FreeWord) -> Result<()> {
        if !self.index.contains_key(x) {
            return Err(Error::invalid(format!(
                "{x} lies outside the radius-{} ball",
                self.radius
            )));
        }
        Ok(())
    }

    /// `‖P(x)‖`, summed over the (distinct) ray vertices.
    pub fn p_norm(&self, x: &FreeWord) -> Result<f64> {
        self.check_member(x)?;
        Ok(self.column_norms(&self.b).sqrt())
    }

    /// `‖Q(y)‖`.
    pub fn q_norm(&self, y: &FreeWord) -> Result<f64> {
        self.check_member(y)?;
        Ok(self.column_norms(&self.a).sqrt())
    }

    fn column_norms(&self, m: &DMatrix<Complex64>) -> f64 {
        (0..self.rank).map(|i| m.column(i).norm_squared()).sum()
    }

    /// `‖A‖_{S²}` and `‖B‖_{S²}`.
    pub fn hs_norms(&self) -> (f64, f64) {
        (self.a.norm(), self.b.norm())
    }

    /// `⟨P(x), Q(y)⟩ = Σ_{p_x(i) = p_y(j)} ⟨B e_i, A e_j⟩`.
    pub fn inner(&self, x: &FreeWord, y: &FreeWord) -> Result<Complex64> {
        self.check_member(x)?;
        self.check_member(y)?;
        let (i0, j0) = first_meet(x, y);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut s = 0;
        while i0 + s < self.rank && j0 + s < self.rank {
            let bi = self.b.column(i0 + s);
            let aj = self.a.column(j0 + s);
            acc += bi.iter().zip(aj.iter()).map(|(u, v)| u * v.conj()).sum::<Complex64>();
            s += 1;
        }
        Ok(acc)
    }

    /// `max |⟨P(x),Q(y)⟩ + ℓ(d(x,y)) − φ(d(x,y))|` over all pairs of the ball.
    pub fn identity_residual(&self, phi: &DiscreteSymbol) -> Result<f64> {
        let n = self.ball.len();
        let rows: Result<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let x = &self.ball[i];
                let mut worst: f64 = 0.0;
                for y in &self.ball {
                    let d = distance(x, y) as u64;
                    let v = self.inner(x, y)? + self.limits.of(d) - phi.eval(d);
                    worst = worst.max(v.norm());
                }
                Ok(worst)
            })
            .collect();
        Ok(rows?.into_iter().fold(0.0, f64::max))
    }
}

/// `⟨P(x), Q(y)⟩`; both words must lie in the ball the pair was built on.
pub fn witness_inner(w: &WitnessPair, x: &FreeWord, y: &FreeWord) -> Result<Complex64> {
    w.inner(x, y)
}

/// `|ℓ_even| + |ℓ_odd| + ‖H_K‖_{S¹} + tail_s1_bound(K)` for the step-2 difference Hankel.
pub fn schur_certificate(phi: &DiscreteSymbol, k: usize) -> Result<f64> {
    let diff = phi.difference(Step::Two);
    let tail = diff.tail_s1_bound(k);
    if !tail.is_finite() {
        return Err(Error::Refused {
            reason: format!("no tail bound for the differences of {}", phi.description()),
            required: None,
        });
    }
    let s1 = schatten1(&build_hankel(&diff, k)?)?;
    let l = phi.limits();
    Ok(l.even.norm() + l.odd.norm() + s1 + tail)
}

/// Step-1 analogue `lim|φ| + ‖(φ(j+k) − φ(j+k+1))‖_{S¹}`; its constant is only
/// known on trees, so this number is reported, never used as a certificate.
pub fn step1_certificate_number(phi: &DiscreteSymbol, k: usize) -> Result<f64> {
    let diff = phi.difference(Step::One);
    let s1 = schatten1(&build_hankel(&diff, k)?)?;
    let l = phi.limits();
    Ok(l.even.norm().max(l.odd.norm()) + s1 + diff.tail_s1_bound(k))
}

/// Largest radius accepted by the sampled lower bound.
pub const MAX_EMPIRICAL_RADIUS: usize = 6;

/// `max_M ‖(φ(d(x,y)) M_{x,y})‖ / ‖M‖` over seeded Gaussian matrices indexed
/// by the ball of the 2-generator free group; both norms come from dense
/// eigensolves, so the value is a lower bound for the Schur multiplier norm.
pub fn empirical_multiplier_lower(
    phi: &DiscreteSymbol,
    ball_radius: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if ball_radius > MAX_EMPIRICAL_RADIUS {
        return Err(Error::invalid(format!(
            "radius {ball_radius} exceeds {MAX_EMPIRICAL_RADIUS}"
        )));
    }
    let words = ball(2, ball_radius)?;
    let n = words.len();
    let symbol: Vec<Complex64> = phi.eval_range(0, 2 * ball_radius as u64);
    let dist = DMatrix::from_fn(n, n, |i, j| distance(&words[i], &words[j]));
    let real = symbol.iter().all(|z| z.im == 0.0);
    let ratios: Result<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let m = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(&mut rng));
            let denom = operator_norm_real(&m)?;
            let num = if real {
                let s = DMatrix::from_fn(n, n, |i, j| symbol[dist[(i, j)]].re * m[(i, j)]);
                operator_norm_real(&s)?
            } else {
                let s = DMatrix::from_fn(n, n, |i, j| symbol[dist[(i, j)]] * m[(i, j)]);
                singular_values(&s)?.first().copied().unwrap_or(0.0)
            };
            Ok(if denom > 0.0 { num / denom } else { 0.0 })
        })
        .collect();
    Ok(ratios?.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqsym::TailModel;

    fn w(letters: &[i32]) -> FreeWord {
        FreeWord::new(letters.to_vec()).unwrap()
    }

    fn halving() -> DiscreteSymbol {
        DiscreteSymbol::geometric(0.5)
    }

    #[test]
    fn inner_telescopes_to_symbol() {
        let pair = witness_from_symbol(&halving(), 40, 2).unwrap();
        let e = FreeWord::identity();
        let one = witness_inner(&pair, &e, &e).unwrap();
        let half = witness_inner(&pair, &FreeWord::axis(1), &e).unwrap();
        assert!((one - 1.0).norm() < 1e-12);
        assert!((half - 0.5).norm() < 1e-12);
        assert!(witness_inner(&pair, &w(&[1, 1, 1]), &e).is_err());
    }

    #[test]
    fn words_and_distance() {
        assert!(FreeWord::new(vec![1, -1]).is_err());
        assert!(FreeWord::new(vec![0]).is_err());
        assert_eq!(FreeWord::reduce(&[1, 2, -2, -1, 2]).unwrap(), w(&[2]));
        let x = w(&[1, 2]);
        assert_eq!(x.mul(&x.inverse()), FreeWord::identity());
        assert_eq!(distance(&w(&[1, 2]), &w(&[1])), 1);
        assert_eq!(distance(&w(&[2]), &w(&[-2])), 2);
        // oracle: |x⁻¹y| by explicit reduction
        let words = ball(2, 3).unwrap();
        for x in &words {
            for y in &words {
                assert_eq!(distance(x, y), x.inverse().mul(y).len());
            }
        }
    }

    #[test]
    fn ball_sizes_and_order() {
        assert_eq!(ball(2, 5).unwrap().len(), 485);
        assert_eq!(ball(2, 0).unwrap(), vec![FreeWord::identity()]);
        assert_eq!(ball(3, 2).unwrap().len(), 1 + 6 + 30);
        let b = ball(2, 1).unwrap();
        assert_eq!(b, vec![w(&[]), w(&[1]), w(&[-1]), w(&[2]), w(&[-2])]);
    }

    #[test]
    fn ray_examples() {
        let r = geodesic_ray(&FreeWord::identity());
        assert_eq!(r.step(3), FreeWord::axis(3));
        let r = geodesic_ray(&w(&[1, 2]));
        assert_eq!(r.step(0), w(&[1, 2]));
        assert_eq!(r.step(1), w(&[1]));
        assert_eq!(r.step(2), w(&[1, 1]));
        let r = geodesic_ray(&w(&[2]));
        assert_eq!((r.step(0), r.step(1), r.step(2)), (w(&[2]), w(&[]), w(&[1])));
        assert_eq!(distance(&r.step(0), &r.step(2)), 2);
        let ms = meet_set(&w(&[1, 2]), &w(&[1]), 12);
        assert_eq!(ms[0], (1, 0));
    }

    #[test]
    fn rays_are_geodesic_and_meet_sets_are_diagonal() {
        let words = ball(2, 3).unwrap();
        for x in &words {
            let r = geodesic_ray(x);
            let bound = 2 * x.len() + 8;
            for m in 0..=bound {
                for n in 0..=bound {
                    assert_eq!(distance(&r.step(m), &r.step(n)), m.abs_diff(n));
                }
            }
        }
        for x in &words {
            for y in &words {
                let bound = 2 * (x.len() + y.len()) + 8;
                let ms = meet_set(x, y, bound);
                let (i0, j0) = first_meet(x, y);
                assert_eq!(i0 + j0, distance(x, y));
                let expect: Vec<_> = (0..)
                    .map(|k| (i0 + k, j0 + k))
                    .take_while(|&(i, j)| i <= bound && j <= bound)
                    .collect();
                assert_eq!(ms, expect, "x={x} y={y}");
            }
        }
    }

    #[test]
    fn parity_coherence() {
        let words = ball(2, 4).unwrap();
        for x in &words {
            for y in &words {
                assert_eq!(distance(x, y) % 2, (x.len() + y.len()) % 2);
            }
        }
    }

    #[test]
    fn witness_constant_symbol() {
        let one = DiscreteSymbol::constant(Complex64::new(1.0, 0.0));
        let wp = witness_from_symbol(&one, 4, 2).unwrap();
        assert_eq!(wp.s1, 0.0);
        assert_eq!(wp.cert, 2.0);
        for x in wp.ball() {
            assert_eq!(wp.p_norm(x).unwrap(), 0.0);
            for y in wp.ball() {
                assert_eq!(wp.inner(x, y).unwrap().norm(), 0.0);
            }
        }
        assert!(wp.identity_residual(&one).unwrap() <= 1e-15);
    }

    #[test]
    fn witness_halving_symbol() {
        let phi = halving();
        let k = required_rank(&phi.difference(Step::Two), WITNESS_TAIL_TOL).unwrap();
        let wp = witness_from_symbol(&phi, k, 3).unwrap();
        assert!(wp.limits.is_zero());
        assert!((wp.cert - 1.0).abs() < 1e-10, "{}", wp.cert);
        let e = FreeWord::identity();
        assert!((wp.inner(&e, &e).unwrap().re - 1.0).abs() < 1e-10);
        assert!((wp.inner(&w(&[1]), &e).unwrap().re - 0.5).abs() < 1e-10);
        assert!(wp.identity_residual(&phi).unwrap() <= 1e-8);
        let (ha, hb) = wp.hs_norms();
        for x in wp.ball() {
            assert!(wp.p_norm(x).unwrap() <= hb + 1e-9);
            assert!(wp.q_norm(x).unwrap() <= ha + 1e-9);
        }
        assert!(ha * hb <= wp.s1 + 1e-8);
        assert!(wp.inner(&w(&[1, 1, 1, 1]), &e).is_err());
    }

    #[test]
    fn witness_fejer_and_refusal() {
        let fejer8 = DiscreteSymbol::real("F8", |n| (1.0 - n as f64 / 8.0).max(0.0))
            .with_tail(TailModel::Finite { last: 8 });
        let wp = witness_from_symbol(&fejer8, 8, 2).unwrap();
        assert!(wp.limits.is_zero() && wp.cert.is_finite());
        assert!(wp.identity_residual(&fejer8).unwrap() <= 1e-10);
        let slow = DiscreteSymbol::geometric(0.99);
        match witness_from_symbol(&slow, 8, 2) {
            Err(Error::Refused { required: Some(k), .. }) => {
                assert!(slow.difference(Step::Two).tail_s1_bound(k) < WITNESS_TAIL_TOL);
                assert!(slow.difference(Step::Two).tail_s1_bound(k - 1) >= WITNESS_TAIL_TOL);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn certificate_examples() {
        let one = DiscreteSymbol::constant(Complex64::new(1.0, 0.0));
        assert_eq!(schur_certificate(&one, 8).unwrap(), 2.0);
        assert!((schur_certificate(&halving(), 64).unwrap() - 1.0).abs() < 1e-12);
        let heat = DiscreteSymbol::real("heat", |n| (-0.25 * (n * n) as f64).exp()).with_tail(
            TailModel::Exponential {
                rate: (-0.25f64).exp(),
                coeff: 1.0,
            },
        );
        let c = schur_certificate(&heat, 64).unwrap();
        assert!(c.is_finite() && c > 0.0);
    }

    #[test]
    fn empirical_lower_bounds() {
        let one = DiscreteSymbol::constant(Complex64::new(1.0, 0.0));
        assert_eq!(empirical_multiplier_lower(&one, 3, 3, 1).unwrap(), 1.0);
        let v = empirical_multiplier_lower(&halving(), 4, 5, 7).unwrap();
        assert!(v > 0.0 && v <= 1.0 + 1e-6);
        assert_eq!(v, empirical_multiplier_lower(&halving(), 4, 5, 7).unwrap());
        assert!(empirical_multiplier_lower(&halving(), 7, 1, 0).is_err());
    }
}
