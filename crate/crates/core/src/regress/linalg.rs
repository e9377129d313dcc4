//! Least squares by Householder QR with column pivoting. Rank-deficient
//! systems get the minimum-norm solution through a second QR of the leading
//! rows of R (a complete orthogonal decomposition).

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct Lstsq {
    pub x: DVector<f64>,
    pub rank: usize,
}

/// Minimizes `||a x - b||` and, among minimizers, `||x||`.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> Lstsq {
    let (m, n) = a.shape();
    assert_eq!(b.len(), m, "rhs length must match row count");
    let mut r = a.clone();
    let mut qtb = b.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let steps = m.min(n);

    for k in 0..steps {
        // pivot: remaining column with the largest trailing norm
        let (pivot, _) = (k..n)
            .map(|j| (j, r.view((k, j), (m - k, 1)).norm_squared()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot != k {
            r.swap_columns(k, pivot);
            perm.swap(k, pivot);
        }

        let norm = r.view((k, k), (m - k, 1)).norm();
        if norm == 0.0 {
            continue;
        }
        let alpha = if r[(k, k)] > 0.0 { -norm } else { norm };
        let mut v = r.view((k, k), (m - k, 1)).clone_owned();
        v[0] -= alpha;
        let vnorm2 = v.norm_squared();
        if vnorm2 == 0.0 {
            continue;
        }
        // apply H = I - 2 v v^T / (v^T v) to the trailing block and the rhs
        for j in k..n {
            let dot: f64 = (0..m - k).map(|i| v[i] * r[(k + i, j)]).sum();
            let s = 2.0 * dot / vnorm2;
            for i in 0..m - k {
                r[(k + i, j)] -= s * v[i];
            }
        }
        let dot: f64 = (0..m - k).map(|i| v[i] * qtb[k + i]).sum();
        let s = 2.0 * dot / vnorm2;
        for i in 0..m - k {
            qtb[k + i] -= s * v[i];
        }
        for i in k + 1..m {
            r[(i, k)] = 0.0;
        }
    }

    let r00 = if steps > 0 { r[(0, 0)].abs() } else { 0.0 };
    let tol = r00 * m.max(n) as f64 * f64::EPSILON;
    let rank = (0..steps).take_while(|&k| r[(k, k)].abs() > tol).count();

    let mut z = DVector::zeros(n);
    if rank == n {
        for i in (0..n).rev() {
            let tail: f64 = (i + 1..n).map(|j| r[(i, j)] * z[j]).sum();
            z[i] = (qtb[i] - tail) / r[(i, i)];
        }
    } else if rank > 0 {
        // T z = c with T = R[..rank, ..] (rank x n). T^T = Q2 R2, so the
        // minimum-norm solution is z = Q2 R2^{-T} c.
        let t_transpose = r.view((0, 0), (rank, n)).transpose();
        let qr = t_transpose.qr();
        let (q2, r2) = (qr.q(), qr.r());
        let mut w = DVector::zeros(rank);
        for i in 0..rank {
            let head: f64 = (0..i).map(|j| r2[(j, i)] * w[j]).sum();
            w[i] = (qtb[i] - head) / r2[(i, i)];
        }
        z = q2 * w;
    }

    let mut x = DVector::zeros(n);
    for (j, &p) in perm.iter().enumerate() {
        x[p] = z[j];
    }
    Lstsq { x, rank }
}
