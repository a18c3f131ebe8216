//! Dense linear-algebra helpers shared by the structure and solver layers.
//!
//! Everything here works on `nalgebra` dynamic matrices. Subspaces are
//! represented as matrices with orthonormal columns ("frames"). The SVDs and
//! symmetric eigendecompositions go through `faer`; nalgebra's own SVD
//! returns wrong factors for some nearly rank-deficient inputs.

use nalgebra::{DMatrix, DVector};

/// Relative singular-value cutoff used for every rank decision.
pub const RANK_TOL: f64 = 1e-8;

fn to_faer(a: &DMatrix<f64>) -> faer::Mat<f64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Full SVD with an explicit recursion threshold. `usize::MAX` forces the
/// plain QR iteration; a small value forces divide and conquer.
fn svd_forced(
    fm: &faer::Mat<f64>,
    threshold: usize,
) -> Option<(faer::Mat<f64>, Vec<f64>, faer::Mat<f64>)> {
    use dyn_stack::{MemBuffer, MemStack};
    use faer::linalg::svd::{self, ComputeSvdVectors};
    let (m, n) = (fm.nrows(), fm.ncols());
    let size = m.min(n);
    let mut params: svd::SvdParams = faer::Auto::<f64>::auto();
    params.recursion_threshold = threshold;
    let par = faer::get_global_parallelism();
    let mut u = faer::Mat::<f64>::zeros(m, m);
    let mut v = faer::Mat::<f64>::zeros(n, n);
    let mut s = faer::diag::Diag::<f64>::zeros(size);
    let mut buf = MemBuffer::new(svd::svd_scratch::<f64>(
        m,
        n,
        ComputeSvdVectors::Full,
        ComputeSvdVectors::Full,
        par,
        faer::Spec::new(params),
    ));
    svd::svd(
        fm.as_ref(),
        s.as_mut(),
        Some(u.as_mut()),
        Some(v.as_mut()),
        par,
        MemStack::new(&mut buf),
        faer::Spec::new(params),
    )
    .ok()?;
    Some((u, (0..size).map(|i| s[i]).collect(), v))
}

/// Every singular triple must satisfy A v_i = s_i u_i to near machine
/// accuracy, otherwise rank decisions downstream are garbage. faer's
/// divide-and-conquer kernel has been observed returning 2.4e-4 for an
/// exactly zero singular value on a 144-column matrix with 78 repeated
/// nonzero values, and its QR kernel occasionally fails to converge
/// outright; both get caught here.
fn svd_triples_ok(fm: &faer::Mat<f64>, u: &faer::Mat<f64>, s: &[f64], v: &faer::Mat<f64>) -> bool {
    let av = fm * v;
    let smax = s.first().copied().unwrap_or(0.0).max(1.0);
    let m = fm.nrows();
    for (i, si) in s.iter().enumerate() {
        let mut err = 0.0;
        for r in 0..m {
            let d = av[(r, i)] - si * u[(r, i)];
            err += d * d;
        }
        if err.sqrt() > 1e-10 * smax {
            return false;
        }
    }
    true
}

fn svd_full_faer(fm: faer::Mat<f64>) -> (faer::Mat<f64>, Vec<f64>, faer::Mat<f64>) {
    let k = fm.nrows().min(fm.ncols());
    let direct = |m: &faer::Mat<f64>| {
        m.svd().ok().map(|svd| {
            let s = svd.S();
            (svd.U().to_owned(), (0..k).map(|i| s[i]).collect::<Vec<f64>>(), svd.V().to_owned())
        })
    };
    let ft = fm.transpose().to_owned();
    let attempts = [0usize, 1, 2, 3, 4, 5];
    for attempt in attempts {
        let transposed = attempt >= 3;
        let input = if transposed { &ft } else { &fm };
        let result = match attempt % 3 {
            0 => direct(input),
            1 => svd_forced(input, usize::MAX),
            _ => svd_forced(input, 8),
        };
        if let Some((u, s, v)) = result {
            let (u, v) = if transposed { (v, u) } else { (u, v) };
            if svd_triples_ok(&fm, &u, &s, &v) {
                return (u, s, v);
            }
        }
    }
    panic!("svd failed the A v = s u check on every reduction path");
}

/// Full SVD, `(u, s, v)` with `u` m-by-m, `v` n-by-n and `s` sorted
/// nonincreasing of length min(m, n).
pub fn svd_full(a: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let (u, s, v) = svd_full_faer(to_faer(a));
    (from_faer(u.as_ref()), s, from_faer(v.as_ref()))
}

/// Singular values only, sorted nonincreasing.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let fm = to_faer(a);
    let k = a.nrows().min(a.ncols());
    if let Ok(svd) = fm.thin_svd() {
        let s: Vec<f64> = (0..k).map(|i| svd.S()[i]).collect();
        if svd_triples_ok(&fm, &svd.U().to_owned(), &s, &svd.V().to_owned()) {
            return s;
        }
    }
    svd_full_faer(fm).1
}

/// Eigendecomposition of a symmetric matrix: `(eigenvalues, eigenvectors)`
/// with orthonormal eigenvector columns matching the value order.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = to_faer(a)
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("eigendecomposition convergence");
    let s = eig.S();
    let vals = (0..a.nrows()).map(|i| s[i]).collect();
    (vals, from_faer(eig.U()))
}

/// Orthonormal basis of the kernel of `a`.
///
/// The matrix is padded to square first so the SVD exposes the full
/// right-singular space even when `a` is wide.
pub fn nullspace(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    nullspace_scaled(a, tol, 0.0)
}

/// Like `nullspace`, but the rank cutoff is relative to
/// `max(largest singular value, reference_scale)`. Needed whenever the input
/// may consist of nothing but roundoff, where a cutoff relative to the
/// matrix's own largest singular value keeps the noise as rank.
pub fn nullspace_scaled(a: &DMatrix<f64>, tol: f64, reference_scale: f64) -> DMatrix<f64> {
    let n = a.ncols();
    let m = a.nrows();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    if m == 0 {
        return DMatrix::identity(n, n);
    }
    let (_, s, v) = svd_full(a);
    let smax = s.first().copied().unwrap_or(0.0);
    let cut = tol * smax.max(reference_scale).max(1e-300);
    // Columns of v past the singular-value count are kernel by shape.
    let cols: Vec<usize> = (0..n).filter(|&i| i >= s.len() || s[i] <= cut).collect();
    let mut basis = DMatrix::zeros(n, cols.len());
    for (k, &i) in cols.iter().enumerate() {
        basis.column_mut(k).copy_from(&v.column(i));
    }
    basis
}

/// Orthonormal basis of the column space of `a`.
pub fn column_space(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    column_space_scaled(a, tol, 0.0)
}

/// Like `column_space`, but the cutoff is relative to
/// `max(largest singular value, reference_scale)`. With a positive reference
/// this drops directions that only survive as roundoff noise of data at the
/// reference magnitude, e.g. the symmetric parts of skew matrices.
pub fn column_space_scaled(a: &DMatrix<f64>, tol: f64, reference_scale: f64) -> DMatrix<f64> {
    if a.ncols() == 0 || a.nrows() == 0 {
        return DMatrix::zeros(a.nrows(), 0);
    }
    let svd = to_faer(a).thin_svd().expect("svd convergence");
    let u = from_faer(svd.U());
    let s = svd.S();
    let k = a.nrows().min(a.ncols());
    let smax = if k > 0 { s[0] } else { 0.0 };
    let cut = tol * smax.max(reference_scale).max(1e-300);
    let cols: Vec<usize> = (0..k).filter(|&i| s[i] > cut).collect();
    let mut basis = DMatrix::zeros(a.nrows(), cols.len());
    for (j, &i) in cols.iter().enumerate() {
        basis.column_mut(j).copy_from(&u.column(i));
    }
    basis
}

/// Numerical rank with the shared relative cutoff.
pub fn rank(a: &DMatrix<f64>, tol: f64) -> usize {
    let sv = singular_values(a);
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > tol * smax).count()
}

/// Orthonormalizes the columns of `a`, dropping directions below the rank
/// cutoff. The result spans the same space.
pub fn orthonormal_frame(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    column_space(a, tol)
}

/// Frame of the subspace spanned by `vectors` (given as columns already) that
/// is orthogonal to the frame `against` (assumed orthonormal). Directions
/// whose residual is at roundoff level relative to the inputs are dropped, so
/// subtracting a span that covers `vectors` yields an empty frame.
pub fn frame_minus(vectors: &DMatrix<f64>, against: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let mut res = vectors.clone();
    if against.ncols() > 0 {
        res -= against * (against.transpose() * vectors);
    }
    let scale = vectors.norm().max(1.0);
    column_space_scaled(&res, tol, scale)
}

/// Largest principal angle (radians) between the column spaces of two
/// orthonormal frames. Frames of unequal dimension return `None`.
pub fn max_principal_angle(q1: &DMatrix<f64>, q2: &DMatrix<f64>) -> Option<f64> {
    if q1.ncols() != q2.ncols() {
        return None;
    }
    if q1.ncols() == 0 {
        return Some(0.0);
    }
    // Sine-based: the cosine formula acos(sigma_min(q1^T q2)) cannot resolve
    // angles below sqrt(eps). The residual (I - q1 q1^T) q2 has spectral norm
    // sin(theta_max), accurate down to eps, and saturates at 1 for compound
    // angles past pi/2 which this use never distinguishes anyway.
    let res = q2 - q1 * (q1.transpose() * q2);
    let s = singular_values(&res).first().copied().unwrap_or(0.0);
    Some(s.clamp(-1.0, 1.0).asin())
}

/// Minimum-norm least-squares solution of `a x = b`.
pub fn min_norm_solve(a: &DMatrix<f64>, b: &DVector<f64>, tol: f64) -> DVector<f64> {
    if a.ncols() == 0 {
        return DVector::zeros(0);
    }
    if a.nrows() == 0 {
        return DVector::zeros(a.ncols());
    }
    let (u, s, v) = svd_full(a);
    let smax = s.first().copied().unwrap_or(0.0);
    let eps = tol * smax.max(1e-300);
    let mut x = DVector::zeros(a.ncols());
    for (i, &si) in s.iter().enumerate() {
        if si > eps {
            let coeff = u.column(i).dot(b) / si;
            x += v.column(i) * coeff;
        }
    }
    x
}

/// Euclidean distance from `y` to the convex hull of the columns of `points`,
/// computed by nonnegative least squares on the homogenized system.
///
/// Returns `(distance, weights)`; the weights are the best hull coefficients
/// found (nonnegative, summing to ~1 when the distance is small).
pub fn convex_hull_distance(points: &DMatrix<f64>, y: &DVector<f64>) -> (f64, DVector<f64>) {
    let dim = points.nrows();
    let n = points.ncols();
    assert_eq!(dim, y.len());
    if n == 0 {
        return (y.norm(), DVector::zeros(0));
    }
    // Homogenize so the weights are forced toward an affine combination; the
    // scale keeps the sum constraint comparable to the geometry.
    let scale = points.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let mut a = DMatrix::zeros(dim + 1, n);
    a.view_mut((0, 0), (dim, n)).copy_from(points);
    for j in 0..n {
        a[(dim, j)] = scale;
    }
    let mut b = DVector::zeros(dim + 1);
    b.rows_mut(0, dim).copy_from(y);
    b[dim] = scale;
    let w = nnls(&a, &b);
    let resid = (&a * &w - &b).norm();
    (resid, w)
}

/// Lawson-Hanson nonnegative least squares: minimizes `|a x - b|` over
/// `x >= 0`.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let atb_scale = a.transpose().abs().max();
    let tol = 1e-12 * atb_scale.max(1.0) * b.norm().max(1.0);
    let max_outer = 3 * n + 16;

    for _ in 0..max_outer {
        let w = a.transpose() * (b - a * &x);
        let mut best: Option<(usize, f64)> = None;
        for i in 0..n {
            if !passive[i] && w[i] > tol {
                if best.map_or(true, |(_, bw)| w[i] > bw) {
                    best = Some((i, w[i]));
                }
            }
        }
        let Some((j, _)) = best else { break };
        passive[j] = true;

        loop {
            let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let sub = a.select_columns(idx.iter());
            let z_sub = min_norm_solve(&sub, b, RANK_TOL);
            if z_sub.iter().all(|&v| v > 0.0) {
                x.fill(0.0);
                for (k, &i) in idx.iter().enumerate() {
                    x[i] = z_sub[k];
                }
                break;
            }
            // Step back along the segment from x to z until a coordinate hits
            // zero, then drop it from the passive set.
            let mut alpha = 1.0_f64;
            for (k, &i) in idx.iter().enumerate() {
                if z_sub[k] <= 0.0 {
                    let denom = x[i] - z_sub[k];
                    if denom > 0.0 {
                        alpha = alpha.min(x[i] / denom);
                    }
                }
            }
            for (k, &i) in idx.iter().enumerate() {
                x[i] += alpha * (z_sub[k] - x[i]);
                if z_sub[k] <= 0.0 && x[i] <= 1e-14 {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
            if idx.iter().all(|&i| !passive[i]) {
                break;
            }
        }
    }
    x
}

/// Applies `exp(t * op)` to `v` by a scaled power series. `op` is any square
/// matrix; the step is split so each partial exponent has small norm.
pub fn exp_action(op: &DMatrix<f64>, t: f64, v: &DVector<f64>) -> DVector<f64> {
    let norm = op.norm();
    let total = (t.abs() * norm).max(1e-16);
    let steps = total.ceil() as usize;
    let steps = steps.clamp(1, 4096);
    let dt = t / steps as f64;
    let mut y = v.clone();
    for _ in 0..steps {
        let mut term = y.clone();
        let mut acc = y.clone();
        for k in 1..=30 {
            term = op * &term * (dt / k as f64);
            acc += &term;
            if term.norm() <= 1e-18 * acc.norm().max(1e-300) {
                break;
            }
        }
        y = acc;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, data: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(rows, cols, data)
    }

    #[test]
    fn nullspace_of_wide_matrix_is_complete() {
        // rank-1 map from R^3, kernel has dim 2
        let a = mat(1, 3, &[1.0, 1.0, 1.0]);
        let ns = nullspace(&a, RANK_TOL);
        assert_eq!(ns.ncols(), 2);
        let residual = (&a * &ns).norm();
        assert!(residual < 1e-12, "residual {residual}");
    }

    #[test]
    fn nullspace_of_full_rank_is_empty() {
        let a = mat(2, 2, &[2.0, 0.0, 0.0, 3.0]);
        assert_eq!(nullspace(&a, RANK_TOL).ncols(), 0);
    }

    #[test]
    fn column_space_matches_rank() {
        let a = mat(3, 2, &[1.0, 2.0, 2.0, 4.0, 0.0, 0.0]);
        let cs = column_space(&a, RANK_TOL);
        assert_eq!(cs.ncols(), 1);
        assert_eq!(rank(&a, RANK_TOL), 1);
    }

    #[test]
    fn principal_angle_detects_equal_spans() {
        let q1 = mat(3, 1, &[1.0, 0.0, 0.0]);
        let q2 = mat(3, 1, &[-1.0, 0.0, 0.0]);
        let angle = max_principal_angle(&q1, &q2).unwrap();
        assert!(angle < 1e-12);
    }

    #[test]
    fn principal_angle_orthogonal() {
        let q1 = mat(2, 1, &[1.0, 0.0]);
        let q2 = mat(2, 1, &[0.0, 1.0]);
        let angle = max_principal_angle(&q1, &q2).unwrap();
        assert!((angle - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn scaled_column_space_discards_roundoff() {
        // Noise at 1e-16 against reference scale 1 must vanish entirely.
        let noise = mat(3, 2, &[1e-16, 2e-17, -3e-16, 1e-16, 5e-17, -1e-17]);
        assert_eq!(column_space_scaled(&noise, RANK_TOL, 1.0).ncols(), 0);
        // Without a reference scale the same data has full rank.
        assert_eq!(column_space(&noise, RANK_TOL).ncols(), 2);
    }

    #[test]
    fn frame_minus_of_covered_span_is_empty() {
        let all = mat(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let inside = mat(3, 1, &[0.6, 0.8, 0.0]);
        assert_eq!(frame_minus(&inside, &all, RANK_TOL).ncols(), 0);
        let outside = mat(3, 1, &[0.0, 0.0, 1.0]);
        let left = frame_minus(&outside, &all, RANK_TOL);
        assert_eq!(left.ncols(), 1);
        assert!((left[(2, 0)].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn min_norm_solve_picks_least_norm() {
        // x + y = 2 has min-norm solution (1, 1)
        let a = mat(1, 2, &[1.0, 1.0]);
        let b = DVector::from_vec(vec![2.0]);
        let x = min_norm_solve(&a, &b, RANK_TOL);
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hull_membership_square() {
        // unit square corners; center is inside, (2,0) is not
        let pts = mat(
            2,
            4,
            &[0.0, 1.0, 0.0, 1.0, //
              0.0, 0.0, 1.0, 1.0],
        );
        let inside = DVector::from_vec(vec![0.5, 0.5]);
        let (d, w) = convex_hull_distance(&pts, &inside);
        assert!(d < 1e-10, "distance {d}");
        assert!((w.sum() - 1.0).abs() < 1e-8);
        let outside = DVector::from_vec(vec![2.0, 0.0]);
        let (d, _) = convex_hull_distance(&pts, &outside);
        assert!(d > 0.5);
    }

    #[test]
    fn exp_action_rotation() {
        // exp of a 90-degree rotation generator
        let op = mat(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let v = DVector::from_vec(vec![1.0, 0.0]);
        let y = exp_action(&op, std::f64::consts::FRAC_PI_2, &v);
        assert!((y[0]).abs() < 1e-12 && (y[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exp_action_large_generator_stays_accurate() {
        let op = mat(2, 2, &[0.0, -10.0, 10.0, 0.0]);
        let v = DVector::from_vec(vec![1.0, 0.0]);
        let y = exp_action(&op, 1.0, &v);
        assert!((y[0] - (10.0_f64).cos()).abs() < 1e-10);
        assert!((y[1] - (10.0_f64).sin()).abs() < 1e-10);
    }
}
