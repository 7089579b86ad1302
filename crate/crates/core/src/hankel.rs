//! Finite Hankel matrices `(b(j+k))`, their trace norms, square-root
//! factorizations `H = A*B`, and elementary trace-norm inequalities.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::besov::{l1_torus, QuadratureSpec, TrigPolynomial};
use crate::error::{Error, Result};
use crate::linalg::{
    complex_symmetric_embedding, schatten1_general, symmetric_eigen, symmetric_eigenvalues,
};
use crate::seqsym::DiscreteSymbol;

/// Matrix entries; real symbols give real symmetric storage.
#[derive(Debug, Clone, PartialEq)]
pub enum Entries {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

/// `N × N` corner of the Hankel matrix of a symbol.
#[derive(Debug, Clone)]
pub struct HankelMatrix {
    /// `b(0), …, b(2N−2)`.
    diagonals: Vec<Complex64>,
    entries: Entries,
    symbol: Option<DiscreteSymbol>,
}

impl HankelMatrix {
    /// Hankel matrix with anti-diagonal values `b(0..=2N−2)`.
    pub fn from_diagonals(diagonals: Vec<Complex64>) -> Result<Self> {
        if diagonals.is_empty() || diagonals.len() % 2 == 0 {
            return Err(Error::invalid(format!(
                "Hankel matrix needs 2N-1 anti-diagonal values, got {}",
                diagonals.len()
            )));
        }
        let n = diagonals.len().div_ceil(2);
        let entries = if diagonals.iter().all(|z| z.im == 0.0) {
            Entries::Real(DMatrix::from_fn(n, n, |j, k| diagonals[j + k].re))
        } else {
            Entries::Complex(DMatrix::from_fn(n, n, |j, k| diagonals[j + k]))
        };
        Ok(Self {
            diagonals,
            entries,
            symbol: None,
        })
    }

    pub fn size(&self) -> usize {
        self.diagonals.len().div_ceil(2)
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn symbol(&self) -> Option<&DiscreteSymbol> {
        self.symbol.as_ref()
    }

    pub fn is_real(&self) -> bool {
        matches!(self.entries, Entries::Real(_))
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.diagonals[j + k]
    }

    /// `b(n)` for `n ≤ 2N−2`.
    pub fn diagonal(&self, n: usize) -> Complex64 {
        self.diagonals[n]
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        let n = self.size();
        DMatrix::from_fn(n, n, |j, k| self.diagonals[j + k])
    }

    pub fn max_abs(&self) -> f64 {
        self.diagonals.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn check_finite(&self) -> Result<()> {
        if self
            .diagonals
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::invalid("Hankel matrix has non-finite entries"));
        }
        Ok(())
    }
}

/// `N × N` corner `(b(j+k))_{0 ≤ j,k < N}`.
pub fn build_hankel(b: &DiscreteSymbol, n: usize) -> Result<HankelMatrix> {
    if n == 0 {
        return Err(Error::invalid("Hankel size must be at least 1"));
    }
    let mut h = HankelMatrix::from_diagonals(b.eval_range(0, 2 * n as u64 - 2))?;
    h.symbol = Some(b.clone());
    Ok(h)
}

/// Trace norm: `Σ|λ|` for real symmetric storage, otherwise the sum of the
/// positive eigenvalues of the real embedding of the complex symmetric matrix.
pub fn schatten1(h: &HankelMatrix) -> Result<f64> {
    h.check_finite()?;
    match &h.entries {
        Entries::Real(m) => Ok(symmetric_eigenvalues(m)?.iter().map(|x| x.abs()).sum()),
        Entries::Complex(m) => {
            let vals = symmetric_eigenvalues(&complex_symmetric_embedding(m))?;
            // Spectrum is {±σ}; half the absolute sum avoids splitting zeros.
            Ok(0.5 * vals.iter().map(|x| x.abs()).sum::<f64>())
        }
    }
}

/// `H = A*B` with `‖A‖_{S²}² = ‖B‖_{S²}² = ‖H‖_{S¹}`.
#[derive(Debug, Clone)]
pub struct SqrtFactorization {
    pub a: DMatrix<Complex64>,
    pub b: DMatrix<Complex64>,
    pub s1: f64,
}

impl SqrtFactorization {
    /// `A*B`.
    pub fn product(&self) -> DMatrix<Complex64> {
        self.a.adjoint() * &self.b
    }

    /// `‖A‖_{S²} · ‖B‖_{S²}`.
    pub fn hs_product(&self) -> f64 {
        self.a.norm() * self.b.norm()
    }
}

/// Square-root factorization from the symmetric spectral data: for real `H`,
/// `H = WΛWᵀ` gives `A = |Λ|^{1/2}Wᵀ`, `B = sgn(Λ)|Λ|^{1/2}Wᵀ`; for complex
/// symmetric `H`, the Takagi form `H = UΣUᵀ` gives `A = Σ^{1/2}U*`, `B = Σ^{1/2}Uᵀ`.
pub fn sqrt_factor(h: &HankelMatrix) -> Result<SqrtFactorization> {
    h.check_finite()?;
    let n = h.size();
    match &h.entries {
        Entries::Real(m) => {
            let eig = symmetric_eigen(m)?;
            let w = eig.vectors.expect("full decomposition requested");
            let mut a = DMatrix::<Complex64>::zeros(n, n);
            let mut b = DMatrix::<Complex64>::zeros(n, n);
            let mut s1 = 0.0;
            for (i, &lam) in eig.values.iter().enumerate() {
                let r = lam.abs().sqrt();
                s1 += lam.abs();
                let sign = if lam < 0.0 { -1.0 } else { 1.0 };
                for k in 0..n {
                    a[(i, k)] = Complex64::new(r * w[(k, i)], 0.0);
                    b[(i, k)] = Complex64::new(sign * r * w[(k, i)], 0.0);
                }
            }
            Ok(SqrtFactorization { a, b, s1 })
        }
        Entries::Complex(m) => {
            let eig = symmetric_eigen(&complex_symmetric_embedding(m))?;
            let v = eig.vectors.expect("full decomposition requested");
            let mut a = DMatrix::<Complex64>::zeros(n, n);
            let mut b = DMatrix::<Complex64>::zeros(n, n);
            let mut s1 = 0.0;
            // Eigenvector [x; y] of σ > 0 gives the Takagi vector u = x + iy.
            for (row, col) in (n..2 * n).enumerate() {
                let sigma = eig.values[col].max(0.0);
                s1 += sigma;
                let r = sigma.sqrt();
                for k in 0..n {
                    let u = Complex64::new(v[(k, col)], v[(k + n, col)]);
                    a[(row, k)] = r * u.conj();
                    b[(row, k)] = r * u;
                }
            }
            Ok(SqrtFactorization { a, b, s1 })
        }
    }
}

/// `Σ_j |H(j, n−j)|` over valid indices, a lower bound for the trace norm.
pub fn antidiag_lower_bound(h: &HankelMatrix, n: usize) -> Result<f64> {
    let size = h.size();
    if n > 2 * (size - 1) {
        return Err(Error::invalid(format!(
            "anti-diagonal {n} outside a {size}x{size} matrix"
        )));
    }
    let lo = n.saturating_sub(size - 1);
    let hi = n.min(size - 1);
    Ok((hi - lo + 1) as f64 * h.diagonal(n).norm())
}

/// `Σ_n (n+1)|b_n|` over anti-diagonals of the corner, an upper bound for the trace norm.
pub fn antidiag_upper_bound(h: &HankelMatrix) -> f64 {
    let size = h.size();
    (0..h.diagonals.len())
        .map(|n| {
            let len = n.min(size - 1) - n.saturating_sub(size - 1) + 1;
            len as f64 * h.diagonal(n).norm()
        })
        .sum()
}

/// `(‖(a_{j+k+1})‖_{S¹}, ‖(a_{j+k})‖_{S¹}, |a₀| + 2‖(a_{j+k+1})‖_{S¹})` on `N × N` corners.
pub fn shift_sandwich_check(a: &DiscreteSymbol, n: usize) -> Result<(f64, f64, f64)> {
    let shifted = schatten1(&build_hankel(&a.shifted(1), n)?)?;
    let plain = schatten1(&build_hankel(a, n)?)?;
    Ok((shifted, plain, a.eval(0).norm() + 2.0 * shifted))
}

/// Both sides of the Hadamard–Hankel inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HadamardCheck {
    /// `‖(a_{j+k} b_{j,k})‖_{S¹}`.
    pub lhs: f64,
    /// `‖Σ a_n e^{2iπnθ}‖_{L¹} · ‖B‖_{S¹}`.
    pub rhs: f64,
    /// Quadrature error of the `L¹` factor, scaled by `‖B‖_{S¹}`.
    pub rhs_error: f64,
}

/// Compare the trace norm of the Schur product `(a_{j+k} b_{j,k})` with
/// `‖Σ aₙzⁿ‖_{L¹(𝕋)}·‖B‖_{S¹}`; coefficients at negative indices only enter the `L¹` factor.
pub fn hadamard_hankel_bound_check(
    a: &BTreeMap<i64, Complex64>,
    b: &DMatrix<Complex64>,
    quad: &QuadratureSpec,
) -> Result<HadamardCheck> {
    let (r, c) = b.shape();
    let prod = DMatrix::from_fn(r, c, |j, k| {
        a.get(&((j + k) as i64)).copied().unwrap_or_default() * b[(j, k)]
    });
    let lhs = schatten1_general(&prod)?;
    let b_norm = schatten1_general(b)?;
    let poly = TrigPolynomial::new(a.clone());
    let l1 = l1_torus(&poly, quad)?;
    Ok(HadamardCheck {
        lhs,
        rhs: l1.value * b_norm,
        rhs_error: l1.error * b_norm,
    })
}
