//! Dense kernels for the factorization code: modified Gram-Schmidt QR,
//! a symmetric Jacobi eigensolver (used by the sparse subspace iteration's
//! Rayleigh-Ritz step) and a one-sided Jacobi SVD (the independent dense
//! oracle). The two SVD routes deliberately share no factorization code.

use ndarray::{Array1, Array2};

/// Orthonormalizes the columns of `a` in place with two-pass modified
/// Gram-Schmidt. A column that becomes numerically zero is replaced by the
/// first canonical basis vector with a non-degenerate residual, so the
/// output always has a full set of orthonormal columns.
pub fn orthonormalize_columns(a: &mut Array2<f64>) {
    let (n, r) = a.dim();
    assert!(r <= n, "cannot orthonormalize {r} columns in dimension {n}");
    let scale = a
        .iter()
        .map(|v| v.abs())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    for i in 0..r {
        for _pass in 0..2 {
            for j in 0..i {
                let dot = column_dot(a, j, i);
                subtract_scaled_column(a, i, j, dot);
            }
        }
        let norm = column_norm(a, i);
        if norm > 1e-13 * scale {
            scale_column(a, i, 1.0 / norm);
        } else {
            fill_canonical(a, i);
        }
    }
}

fn fill_canonical(a: &mut Array2<f64>, i: usize) {
    let n = a.nrows();
    for c in 0..n {
        for row in 0..n {
            a[(row, i)] = if row == c { 1.0 } else { 0.0 };
        }
        for _pass in 0..2 {
            for j in 0..i {
                let dot = column_dot(a, j, i);
                subtract_scaled_column(a, i, j, dot);
            }
        }
        let norm = column_norm(a, i);
        if norm > 0.5 {
            scale_column(a, i, 1.0 / norm);
            return;
        }
    }
    unreachable!("some canonical vector is independent of < n orthonormal columns");
}

fn column_dot(a: &Array2<f64>, i: usize, j: usize) -> f64 {
    let mut acc = 0.0;
    for row in 0..a.nrows() {
        acc += a[(row, i)] * a[(row, j)];
    }
    acc
}

fn column_norm(a: &Array2<f64>, i: usize) -> f64 {
    column_dot(a, i, i).sqrt()
}

fn subtract_scaled_column(a: &mut Array2<f64>, target: usize, source: usize, factor: f64) {
    for row in 0..a.nrows() {
        let v = a[(row, source)];
        a[(row, target)] -= factor * v;
    }
}

fn scale_column(a: &mut Array2<f64>, i: usize, factor: f64) {
    for row in 0..a.nrows() {
        a[(row, i)] *= factor;
    }
}

/// Eigendecomposition of a symmetric matrix by the cyclic Jacobi rotation
/// method. Returns eigenvalues in non-increasing order and the matching
/// eigenvectors as columns.
pub fn jacobi_eigh(s: &Array2<f64>) -> (Array1<f64>, Array2<f64>) {
    let n = s.nrows();
    assert_eq!(n, s.ncols(), "matrix must be square");
    let mut a = s.clone();
    let mut v = Array2::eye(n);
    let scale = a
        .iter()
        .map(|x| x.abs())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].abs());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = c * aip - sn * aiq;
                    a[(i, q)] = sn * aip + c * aiq;
                }
                for i in 0..n {
                    let api = a[(p, i)];
                    let aqi = a[(q, i)];
                    a[(p, i)] = c * api - sn * aqi;
                    a[(q, i)] = sn * api + c * aqi;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = c * vip - sn * viq;
                    v[(i, q)] = sn * vip + c * viq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap());
    let mut eigvals = Array1::zeros(n);
    let mut eigvecs = Array2::zeros((n, n));
    for (slot, &i) in order.iter().enumerate() {
        eigvals[slot] = a[(i, i)];
        for row in 0..n {
            eigvecs[(row, slot)] = v[(row, i)];
        }
    }
    (eigvals, eigvecs)
}

/// Full SVD of a small dense matrix by one-sided Jacobi: columns of the
/// (tall-oriented) matrix are rotated pairwise until mutually orthogonal,
/// their norms become the singular values and the accumulated rotations give
/// the right singular vectors. Singular values are accurate to around
/// machine precision even when small.
///
/// Returns `(u, s, vt)` with `u: n x r`, `s: r`, `vt: r x m`, where
/// `r = min(n, m)`, singular values non-increasing.
pub fn one_sided_jacobi_svd(input: &Array2<f64>) -> (Array2<f64>, Array1<f64>, Array2<f64>) {
    let (n, m) = input.dim();
    if n < m {
        // Decompose the transpose and swap factors.
        let t = input.t().to_owned();
        let (u, s, vt) = one_sided_jacobi_svd(&t);
        return (vt.t().to_owned(), s, u.t().to_owned());
    }
    let r = m;
    let mut a = input.clone();
    let mut v = Array2::eye(m);
    let scale = a
        .iter()
        .map(|x| x.abs())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);

    for _sweep in 0..60 {
        let mut rotated = false;
        for i in 0..m {
            for j in (i + 1)..m {
                let alpha = column_dot(&a, i, i);
                let beta = column_dot(&a, j, j);
                let gamma = column_dot(&a, i, j);
                if gamma.abs() <= 1e-15 * (alpha.sqrt() * beta.sqrt()).max(1e-30 * scale * scale)
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for row in 0..n {
                    let ai = a[(row, i)];
                    let aj = a[(row, j)];
                    a[(row, i)] = c * ai - s * aj;
                    a[(row, j)] = s * ai + c * aj;
                }
                for row in 0..m {
                    let vi = v[(row, i)];
                    let vj = v[(row, j)];
                    v[(row, i)] = c * vi - s * vj;
                    v[(row, j)] = s * vi + c * vj;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut norms: Vec<(f64, usize)> = (0..m).map(|i| (column_norm(&a, i), i)).collect();
    norms.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap().then(x.1.cmp(&y.1)));

    let mut u = Array2::zeros((n, r));
    let mut s = Array1::zeros(r);
    let mut vt = Array2::zeros((r, m));
    let sigma_max = norms.first().map(|x| x.0).unwrap_or(0.0);
    for (slot, &(norm, col)) in norms.iter().enumerate() {
        s[slot] = norm;
        for row in 0..m {
            vt[(slot, row)] = v[(row, col)];
        }
        if norm > 1e-300 && norm > 1e-15 * sigma_max {
            for row in 0..n {
                u[(row, slot)] = a[(row, col)] / norm;
            }
        }
    }
    // Zero singular values leave zero U columns; complete them to an
    // orthonormal set from the canonical basis.
    for slot in 0..r {
        if s[slot] <= 1e-15 * sigma_max.max(f64::MIN_POSITIVE) {
            complete_column(&mut u, slot);
        }
    }
    (u, s, vt)
}

fn complete_column(u: &mut Array2<f64>, slot: usize) {
    let (n, r) = u.dim();
    for c in 0..n {
        for row in 0..n {
            u[(row, slot)] = if row == c { 1.0 } else { 0.0 };
        }
        for _pass in 0..2 {
            for j in 0..r {
                if j == slot {
                    continue;
                }
                let dot = column_dot(u, j, slot);
                subtract_scaled_column(u, slot, j, dot);
            }
        }
        let norm = column_norm(u, slot);
        if norm > 0.5 {
            scale_column(u, slot, 1.0 / norm);
            return;
        }
    }
}
