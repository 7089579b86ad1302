//! Dense symmetric eigensolver (Householder tridiagonalization followed by
//! implicit QL) and the singular-value routines built on top of it.
//!
//! Storage inside the solver is column-major so that the inner loops of both
//! phases walk contiguous memory.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues and (optionally) orthonormal eigenvectors of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector of `values[i]`.
    pub vectors: Option<DMatrix<f64>>,
}

struct ColMajor {
    n: usize,
    data: Vec<f64>,
}

impl ColMajor {
    #[inline(always)]
    fn at(&self, row: usize, col: usize) -> f64 {
        self.data[col * self.n + row]
    }
    #[inline(always)]
    fn set(&mut self, row: usize, col: usize, v: f64) {
        self.data[col * self.n + row] = v;
    }
}

/// Eigenvalues of a real symmetric matrix, ascending.
///
/// Only the lower triangle is read.
pub fn symmetric_eigenvalues(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    Ok(decompose(a, false)?.values)
}

/// Full eigendecomposition of a real symmetric matrix.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> Result<SymmetricEigen> {
    decompose(a, true)
}

fn decompose(a: &DMatrix<f64>, want_vectors: bool) -> Result<SymmetricEigen> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::invalid(format!(
            "symmetric eigensolver needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    if n == 0 {
        return Ok(SymmetricEigen {
            values: vec![],
            vectors: want_vectors.then(|| DMatrix::zeros(0, 0)),
        });
    }
    let mut v = ColMajor {
        n,
        data: vec![0.0; n * n],
    };
    for j in 0..n {
        for i in j..n {
            let x = a[(i, j)];
            v.set(i, j, x);
            v.set(j, i, x);
        }
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e, want_vectors);
    ql_implicit(&mut v, &mut d, &mut e, want_vectors)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[x].total_cmp(&d[y]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = want_vectors.then(|| {
        let mut out = DMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            for k in 0..n {
                out[(k, dst)] = v.at(k, src);
            }
        }
        out
    });
    Ok(SymmetricEigen { values, vectors })
}

fn tridiagonalize(v: &mut ColMajor, d: &mut [f64], e: &mut [f64], accumulate: bool) {
    let n = v.n;
    for j in 0..n {
        d[j] = v.at(n - 1, j);
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for &dk in &d[..i] {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v.at(i - 1, j);
                v.set(i, j, 0.0);
                v.set(j, i, 0.0);
            }
        } else {
            for dk in &mut d[..i] {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in &mut e[..i] {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v.set(j, i, f);
                g = e[j] + v.at(j, j) * f;
                let col = &v.data[j * n..j * n + n];
                for k in (j + 1)..i {
                    g += col[k] * d[k];
                    e[k] += col[k] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                let col = &mut v.data[j * n..j * n + n];
                for k in j..i {
                    col[k] -= f * e[k] + g * d[k];
                }
                d[j] = col[i - 1];
                col[i] = 0.0;
            }
        }
        d[i] = h;
    }

    if !accumulate {
        for (i, di) in d.iter_mut().enumerate() {
            *di = v.at(i, i);
        }
        e[0] = 0.0;
        return;
    }

    for i in 0..n - 1 {
        let diag = v.at(i, i);
        v.set(n - 1, i, diag);
        v.set(i, i, 1.0);
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v.at(k, i + 1) / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v.at(k, i + 1) * v.at(k, j);
                }
                let col = &mut v.data[j * n..j * n + n];
                for k in 0..=i {
                    col[k] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v.set(k, i + 1, 0.0);
        }
    }
    for j in 0..n {
        d[j] = v.at(n - 1, j);
        v.set(n - 1, j, 0.0);
    }
    v.set(n - 1, n - 1, 1.0);
    e[0] = 0.0;
}

fn ql_implicit(v: &mut ColMajor, d: &mut [f64], e: &mut [f64], rotate: bool) -> Result<()> {
    let n = v.n;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let max_iter = 50 * n.max(1);
    let mut iterations = 0usize;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            loop {
                iterations += 1;
                if iterations > max_iter {
                    return Err(Error::NoConvergence(iterations));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in &mut d[l + 2..n] {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if rotate {
                        let (left, right) = v.data.split_at_mut((i + 1) * n);
                        let col_i = &mut left[i * n..];
                        let col_i1 = &mut right[..n];
                        for k in 0..n {
                            let hk = col_i1[k];
                            col_i1[k] = s * col_i[k] + c * hk;
                            col_i[k] = c * col_i[k] - s * hk;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
                if !e[l].is_finite() {
                    return Err(Error::NoConvergence(iterations));
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Real symmetric embedding `[[X, Y], [Y, -X]]` of a complex symmetric matrix
/// `X + iY`. Its spectrum is `{±σ_i}` where `σ_i` are the singular values.
pub fn complex_symmetric_embedding(h: &DMatrix<Complex64>) -> DMatrix<f64> {
    let n = h.nrows();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for i in 0..n {
            let z = h[(i, j)];
            out[(i, j)] = z.re;
            out[(i, j + n)] = z.im;
            out[(i + n, j)] = z.im;
            out[(i + n, j + n)] = -z.re;
        }
    }
    out
}

/// Real symmetric dilation whose nonzero eigenvalues are `±σ_i(M)`, each repeated
/// `multiplicity` times. Real input gives `[[0, M], [Mᵀ, 0]]` (multiplicity 1);
/// complex input gives the real form of the Hermitian dilation (multiplicity 2).
fn dilation(m: &DMatrix<Complex64>) -> (DMatrix<f64>, usize) {
    let (r, c) = m.shape();
    let real = m.iter().all(|z| z.im == 0.0);
    if real {
        let s = r + c;
        let mut out = DMatrix::zeros(s, s);
        for j in 0..c {
            for i in 0..r {
                let x = m[(i, j)].re;
                out[(i, r + j)] = x;
                out[(r + j, i)] = x;
            }
        }
        (out, 1)
    } else {
        // Hermitian K = [[0, M], [M*, 0]] embedded as [[Re K, -Im K], [Im K, Re K]].
        let s = r + c;
        let mut k = DMatrix::<Complex64>::zeros(s, s);
        for j in 0..c {
            for i in 0..r {
                let z = m[(i, j)];
                k[(i, r + j)] = z;
                k[(r + j, i)] = z.conj();
            }
        }
        let mut out = DMatrix::zeros(2 * s, 2 * s);
        for j in 0..s {
            for i in 0..s {
                let z = k[(i, j)];
                out[(i, j)] = z.re;
                out[(i, j + s)] = -z.im;
                out[(i + s, j)] = z.im;
                out[(i + s, j + s)] = z.re;
            }
        }
        (out, 2)
    }
}

/// Singular values of an arbitrary complex matrix, descending.
pub fn singular_values(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    let (r, c) = m.shape();
    let k = r.min(c);
    if k == 0 {
        return Ok(vec![]);
    }
    let (dil, mult) = dilation(m);
    let vals = symmetric_eigenvalues(&dil)?;
    // Largest positive eigenvalues come in groups of `mult`.
    let mut out: Vec<f64> = vals
        .iter()
        .rev()
        .take(k * mult)
        .step_by(mult)
        .map(|x| x.max(0.0))
        .collect();
    out.truncate(k);
    Ok(out)
}

/// Trace-class norm of an arbitrary complex matrix.
pub fn schatten1_general(m: &DMatrix<Complex64>) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

/// Operator (spectral) norm of a real matrix.
pub fn operator_norm_real(m: &DMatrix<f64>) -> Result<f64> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    if m.is_empty() {
        return Ok(0.0);
    }
    // Largest eigenvalue of the Gram matrix on the smaller side.
    let g = if m.nrows() <= m.ncols() {
        m * m.transpose()
    } else {
        m.transpose() * m
    };
    let vals = symmetric_eigenvalues(&g)?;
    Ok(vals.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}
