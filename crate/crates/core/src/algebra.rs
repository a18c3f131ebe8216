//! Matrix realizations of the classical real simple Lie algebras.
//!
//! Complex and quaternionic entries are realified into 2x2 and 4x4 blocks, so
//! every algebra lives inside real N x N matrices and the Cartan involution is
//! uniformly theta(M) = -M^T: k is the skew-symmetric part, p the symmetric
//! part. Elements are coordinate vectors over an internal basis that is
//! orthonormal for the Frobenius inner product, ordered k first, then p; the
//! Killing form in these coordinates is an exact multiple of diag(-1,..,+1,..),
//! which the constructor verifies against the honest trace-of-ad-products form.

use crate::diagram::{FormId, RealFormRecord};
use crate::linalg::{self, RANK_TOL};
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("no matrix realization for {0}")]
    Unrealizable(String),
    #[error("{name}: basis has dimension {found}, catalog says {expected}")]
    DimensionMismatch { name: String, expected: usize, found: usize },
    #[error("{name}: bracket leaves the computed basis (residual {residual:.3e})")]
    NotClosed { name: String, residual: f64 },
    #[error("{name}: Killing form is not a positive multiple of the reference metric (deviation {deviation:.3e})")]
    KillingMismatch { name: String, deviation: f64 },
    #[error("{0}")]
    BadElement(String),
    #[error("complexification of a complex-type algebra is not simple")]
    AlreadyComplex,
}

/// Real form realized as matrices, with everything the structure and solver
/// layers need precomputed: orthonormal basis, ad matrices, the k/p split and
/// the Killing proportionality constant.
pub struct MatrixLieAlgebra {
    pub record: RealFormRecord,
    /// Ambient real matrix size N.
    pub ambient: usize,
    basis: Vec<DMatrix<f64>>,
    ad: Vec<DMatrix<f64>>,
    /// Killing form = killing_scale * (Frobenius form twisted by theta signs).
    pub killing_scale: f64,
    /// Basis vectors 0..k_dim span k, the rest span p.
    pub k_dim: usize,
}

/// Orthonormal frame (columns) in algebra coordinates.
#[derive(Debug, Clone)]
pub struct Subspace {
    pub frame: DMatrix<f64>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn project(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.frame * (self.frame.transpose() * x)
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        (x - self.project(x)).norm() <= tol * x.norm().max(1.0)
    }

    pub fn from_columns(vectors: &DMatrix<f64>) -> Self {
        Subspace { frame: linalg::orthonormal_frame(vectors, RANK_TOL) }
    }

    /// Orthogonal complement within `self` of the span of `inner`.
    pub fn minus(&self, inner: &Subspace) -> Subspace {
        Subspace { frame: linalg::frame_minus(&self.frame, &inner.frame, RANK_TOL) }
    }
}

// ---------------------------------------------------------------------------
// Field blocks
// ---------------------------------------------------------------------------

fn mat2(rows: [[f64; 2]; 2]) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[rows[0][0], rows[0][1], rows[1][0], rows[1][1]])
}

/// Realified complex units (1, i) acting by left multiplication.
pub fn complex_units() -> Vec<DMatrix<f64>> {
    vec![DMatrix::identity(2, 2), mat2([[0.0, -1.0], [1.0, 0.0]])]
}

/// Realified quaternion units (1, i, j, k) acting by left multiplication on
/// coordinates (a, b, c, d) of a + bi + cj + dk.
pub fn quaternion_units() -> Vec<DMatrix<f64>> {
    let e = DMatrix::identity(4, 4);
    let i = DMatrix::from_row_slice(4, 4, &[
        0.0, -1.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, -1.0,
        0.0, 0.0, 1.0, 0.0,
    ]);
    let j = DMatrix::from_row_slice(4, 4, &[
        0.0, 0.0, -1.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, -1.0, 0.0, 0.0,
    ]);
    let k = DMatrix::from_row_slice(4, 4, &[
        0.0, 0.0, 0.0, -1.0,
        0.0, 0.0, -1.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 0.0,
    ]);
    vec![e, i, j, k]
}

fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.kronecker(b)
}

/// Signature matrix diag(+1 x p, -1 x q) blown up by the field block size.
fn signature(p: usize, q: usize, block: usize) -> DMatrix<f64> {
    let mut g = DMatrix::identity((p + q) * block, (p + q) * block);
    for i in p * block..(p + q) * block {
        g[(i, i)] = -1.0;
    }
    g
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

/// How the defining equations of a family look after realification.
struct FamilySpec {
    /// Ambient size N.
    ambient: usize,
    /// Real span to carve the algebra out of: E_ij tensor (field units).
    params: Vec<DMatrix<f64>>,
    /// G with M^T G + G M = 0, if the form is sesquilinear over R, C or H.
    form: Option<DMatrix<f64>>,
    /// G with K M^T K G + G M = 0 for C-bilinear forms, where K realifies
    /// entrywise conjugation.
    bilinear_form: Option<DMatrix<f64>>,
    /// Require tr(M) = 0.
    trace_zero: bool,
    /// Require tr(M (I tensor J)) = 0, the imaginary part of a complex trace.
    trace_i_zero: bool,
}

fn param_matrices(n: usize, units: &[DMatrix<f64>]) -> Vec<DMatrix<f64>> {
    let k = units[0].nrows();
    let mut out = Vec::with_capacity(n * n * units.len());
    for i in 0..n {
        for j in 0..n {
            for u in units {
                let mut m = DMatrix::zeros(n * k, n * k);
                m.view_mut((i * k, j * k), (k, k)).copy_from(u);
                out.push(m);
            }
        }
    }
    out
}

fn family_spec(id: &FormId) -> Result<FamilySpec, AlgebraError> {
    let real = vec![DMatrix::identity(1, 1)];
    let c = complex_units();
    let h = quaternion_units();
    Ok(match *id {
        FormId::SlR { n } => {
            let n = n as usize;
            FamilySpec {
                ambient: n,
                params: param_matrices(n, &real),
                form: None,
                bilinear_form: None,
                trace_zero: true,
                trace_i_zero: false,
            }
        }
        FormId::SlC { n } => {
            let n = n as usize;
            FamilySpec {
                ambient: 2 * n,
                params: param_matrices(n, &c),
                form: None,
                bilinear_form: None,
                trace_zero: true,
                trace_i_zero: true,
            }
        }
        FormId::SlH { m } => {
            let m = m as usize;
            FamilySpec {
                ambient: 4 * m,
                params: param_matrices(m, &h),
                form: None,
                bilinear_form: None,
                trace_zero: true,
                trace_i_zero: false,
            }
        }
        FormId::Su { p, q } => {
            let (p, q) = (p as usize, q as usize);
            FamilySpec {
                ambient: 2 * (p + q),
                params: param_matrices(p + q, &c),
                form: Some(signature(p, q, 2)),
                bilinear_form: None,
                trace_zero: false,
                trace_i_zero: true,
            }
        }
        FormId::So { p, q } => {
            let (p, q) = (p as usize, q as usize);
            FamilySpec {
                ambient: p + q,
                params: param_matrices(p + q, &real),
                form: Some(signature(p, q, 1)),
                bilinear_form: None,
                trace_zero: false,
                trace_i_zero: false,
            }
        }
        FormId::SoC { n } => {
            let n = n as usize;
            FamilySpec {
                ambient: 2 * n,
                params: param_matrices(n, &c),
                form: None,
                bilinear_form: Some(DMatrix::identity(2 * n, 2 * n)),
                trace_zero: false,
                trace_i_zero: false,
            }
        }
        FormId::SpQ { p, q } => {
            let (p, q) = (p as usize, q as usize);
            FamilySpec {
                ambient: 4 * (p + q),
                params: param_matrices(p + q, &h),
                form: Some(signature(p, q, 4)),
                bilinear_form: None,
                trace_zero: false,
                trace_i_zero: false,
            }
        }
        FormId::SpR { n } => {
            let n = n as usize;
            let r = n / 2;
            let mut j = DMatrix::zeros(n, n);
            for i in 0..r {
                j[(i, r + i)] = 1.0;
                j[(r + i, i)] = -1.0;
            }
            FamilySpec {
                ambient: n,
                params: param_matrices(n, &real),
                form: Some(j),
                bilinear_form: None,
                trace_zero: false,
                trace_i_zero: false,
            }
        }
        FormId::SpC { n } => {
            let n = n as usize;
            let r = n / 2;
            let mut j = DMatrix::zeros(n, n);
            for i in 0..r {
                j[(i, r + i)] = 1.0;
                j[(r + i, i)] = -1.0;
            }
            FamilySpec {
                ambient: 2 * n,
                params: param_matrices(n, &c),
                form: None,
                bilinear_form: Some(kron(&j, &DMatrix::identity(2, 2))),
                trace_zero: false,
                trace_i_zero: false,
            }
        }
        FormId::UStarH { n } => {
            let n = n as usize;
            let lj = quaternion_units()[2].clone();
            FamilySpec {
                ambient: 4 * n,
                params: param_matrices(n, &h),
                form: Some(kron(&DMatrix::identity(n, n), &lj)),
                bilinear_form: None,
                trace_zero: false,
                trace_i_zero: false,
            }
        }
        FormId::Exceptional { ref name } => {
            return Err(AlgebraError::Unrealizable(name.clone()));
        }
    })
}

fn vec_of(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

/// Real matrix size a catalog id is realized in, if it has a realization.
pub fn ambient_size(id: &FormId) -> Option<usize> {
    family_spec(id).ok().map(|s| s.ambient)
}

/// Builds the matrix realization for a catalog record.
pub fn build_algebra(record: &RealFormRecord) -> Result<MatrixLieAlgebra, AlgebraError> {
    let spec = family_spec(&record.id)?;
    let n = spec.ambient;
    let d0 = spec.params.len();

    // Stack one constraint column per parameter direction.
    let mut rows = n * n * (spec.form.is_some() as usize + spec.bilinear_form.is_some() as usize);
    rows += spec.trace_zero as usize + spec.trace_i_zero as usize;
    let mut cons = DMatrix::zeros(rows.max(1), d0);
    let conj = {
        // Entrywise complex conjugation: realified as (I tensor diag(1,-1))
        // sandwiching.
        let mut k = DMatrix::identity(n, n);
        if spec.bilinear_form.is_some() {
            for i in (1..n).step_by(2) {
                k[(i, i)] = -1.0;
            }
        }
        k
    };
    let trace_i = kron(
        &DMatrix::identity(n / 2, n / 2),
        &complex_units()[1],
    );
    for (c, pm) in spec.params.iter().enumerate() {
        let mut row = 0;
        if let Some(g) = &spec.form {
            let expr = pm.transpose() * g + g * pm;
            cons.view_mut((row, c), (n * n, 1)).copy_from(&vec_of(&expr));
            row += n * n;
        }
        if let Some(g) = &spec.bilinear_form {
            let expr = &conj * pm.transpose() * &conj * g + g * pm;
            cons.view_mut((row, c), (n * n, 1)).copy_from(&vec_of(&expr));
            row += n * n;
        }
        if spec.trace_zero {
            cons[(row, c)] = pm.trace();
            row += 1;
        }
        if spec.trace_i_zero {
            cons[(row, c)] = (pm * &trace_i).trace();
        }
    }

    let coeffs = linalg::nullspace(&cons, RANK_TOL);
    let dim = coeffs.ncols();
    if dim != record.dim {
        return Err(AlgebraError::DimensionMismatch {
            name: record.name.clone(),
            expected: record.dim,
            found: dim,
        });
    }

    // Materialize, split by theta(M) = -M^T, and orthonormalize each part.
    let mut skew_parts = DMatrix::zeros(n * n, dim);
    let mut sym_parts = DMatrix::zeros(n * n, dim);
    for c in 0..dim {
        let mut m = DMatrix::zeros(n, n);
        for (pi, pm) in spec.params.iter().enumerate() {
            if coeffs[(pi, c)] != 0.0 {
                m += pm * coeffs[(pi, c)];
            }
        }
        let sym = (&m + m.transpose()) * 0.5;
        let skew = &m - &sym;
        skew_parts.set_column(c, &vec_of(&skew));
        sym_parts.set_column(c, &vec_of(&sym));
    }
    // Reference scale 1: the coefficient columns are orthonormal, so a part
    // that is pure roundoff must not survive as a basis direction.
    let k_frame = linalg::column_space_scaled(&skew_parts, RANK_TOL, 1.0);
    let p_frame = linalg::column_space_scaled(&sym_parts, RANK_TOL, 1.0);
    let k_dim = k_frame.ncols();
    if k_dim + p_frame.ncols() != dim {
        return Err(AlgebraError::DimensionMismatch {
            name: record.name.clone(),
            expected: dim,
            found: k_dim + p_frame.ncols(),
        });
    }
    let mut basis = Vec::with_capacity(dim);
    for c in 0..k_dim {
        basis.push(DMatrix::from_column_slice(n, n, k_frame.column(c).as_slice()));
    }
    for c in 0..p_frame.ncols() {
        basis.push(DMatrix::from_column_slice(n, n, p_frame.column(c).as_slice()));
    }

    let ad = structure_constants(&record.name, &basis)?;
    let killing_scale = verify_killing(&record.name, &ad, k_dim)?;

    Ok(MatrixLieAlgebra {
        record: record.clone(),
        ambient: n,
        basis,
        ad,
        killing_scale,
        k_dim,
    })
}

/// ad matrices over an orthonormal matrix basis; errors if the bracket of two
/// basis elements leaves the span.
fn structure_constants(name: &str, basis: &[DMatrix<f64>]) -> Result<Vec<DMatrix<f64>>, AlgebraError> {
    let d = basis.len();
    let mut ad = vec![DMatrix::zeros(d, d); d];
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            let m = &basis[i] * &basis[j] - &basis[j] * &basis[i];
            let total = m.norm_squared();
            let mut expanded = 0.0;
            for k in 0..d {
                let c = m.dot(&basis[k]);
                expanded += c * c;
                ad[i][(k, j)] = c;
                ad[j][(k, i)] = -c;
            }
            worst = worst.max((total - expanded).abs() / total.max(1.0));
        }
    }
    if worst > 1e-10 {
        return Err(AlgebraError::NotClosed { name: name.to_string(), residual: worst });
    }
    Ok(ad)
}

/// Checks K_ij = tr(ad_i ad_j) against scale * diag(-1 x k_dim, +1 x p_dim)
/// and returns the scale.
fn verify_killing(name: &str, ad: &[DMatrix<f64>], k_dim: usize) -> Result<f64, AlgebraError> {
    let d = ad.len();
    let mut v = DMatrix::zeros(d * d, d);
    let mut w = DMatrix::zeros(d * d, d);
    for (c, a) in ad.iter().enumerate() {
        v.set_column(c, &vec_of(a));
        w.set_column(c, &vec_of(&a.transpose()));
    }
    let gram = v.transpose() * w;
    let scale = if k_dim > 0 { -gram[(0, 0)] } else { gram[(d - 1, d - 1)] };
    let mut deviation: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let want = if i != j {
                0.0
            } else if i < k_dim {
                -scale
            } else {
                scale
            };
            deviation = deviation.max((gram[(i, j)] - want).abs());
        }
    }
    if !(scale > 0.0) || deviation > 1e-7 * scale.max(1.0) {
        return Err(AlgebraError::KillingMismatch { name: name.to_string(), deviation });
    }
    Ok(scale)
}

impl MatrixLieAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn p_dim(&self) -> usize {
        self.dim() - self.k_dim
    }

    pub fn basis_matrix(&self, i: usize) -> &DMatrix<f64> {
        &self.basis[i]
    }

    pub fn ad_basis(&self, i: usize) -> &DMatrix<f64> {
        &self.ad[i]
    }

    /// ad(x) in coordinates.
    pub fn ad(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for i in 0..d {
            if x[i] != 0.0 {
                m += &self.ad[i] * x[i];
            }
        }
        m
    }

    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        self.ad(x) * y
    }

    /// Ambient matrix of an element.
    pub fn mat(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.ambient, self.ambient);
        for (i, b) in self.basis.iter().enumerate() {
            if x[i] != 0.0 {
                m += b * x[i];
            }
        }
        m
    }

    /// Coordinates of an ambient matrix, if it lies in the algebra.
    pub fn coords(&self, m: &DMatrix<f64>) -> Result<DVector<f64>, AlgebraError> {
        if m.nrows() != self.ambient || m.ncols() != self.ambient {
            return Err(AlgebraError::BadElement(format!(
                "expected a {0} x {0} matrix for {1}, got {2} x {3}",
                self.ambient,
                self.record.name,
                m.nrows(),
                m.ncols()
            )));
        }
        let mut x = DVector::zeros(self.dim());
        for (i, b) in self.basis.iter().enumerate() {
            x[i] = m.dot(b);
        }
        let residual = (m - self.mat(&x)).norm();
        if residual > 1e-8 * m.norm().max(1.0) {
            return Err(AlgebraError::BadElement(format!(
                "matrix is not in {} (projection residual {residual:.3e})",
                self.record.name
            )));
        }
        Ok(x)
    }

    /// Cartan involution in coordinates: +1 on k, -1 on p.
    pub fn theta(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut y = x.clone();
        for i in self.k_dim..self.dim() {
            y[i] = -y[i];
        }
        y
    }

    /// Killing form, exact in coordinates thanks to the verified
    /// proportionality; `killing_via_ad` is the independent slow route.
    pub fn killing(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim() {
            let w = if i < self.k_dim { -1.0 } else { 1.0 };
            s += w * x[i] * y[i];
        }
        self.killing_scale * s
    }

    /// tr(ad x ad y), computed from the ad matrices with no shortcuts.
    pub fn killing_via_ad(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (self.ad(x) * self.ad(y)).trace()
    }

    /// Gram matrix of the Killing form over the basis, entry by entry from
    /// ad-matrix traces.
    pub fn killing_gram(&self) -> DMatrix<f64> {
        let d = self.dim();
        let mut g = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let mut t = 0.0;
                for r in 0..d {
                    for c in 0..d {
                        t += self.ad[i][(r, c)] * self.ad[j][(c, r)];
                    }
                }
                g[(i, j)] = t;
                g[(j, i)] = t;
            }
        }
        g
    }

    /// Orthogonal complement of `v` inside `within`, with respect to the
    /// Killing form or the reference (Frobenius) inner product. Errors when
    /// `v` sticks out of `within` or the form is degenerate on `within`.
    pub fn ortho_complement(
        &self,
        v: &Subspace,
        within: &Subspace,
        killing: bool,
    ) -> Result<Subspace, AlgebraError> {
        for j in 0..v.dim() {
            let col = v.frame.column(j).into_owned();
            if !within.contains(&col, 1e-8) {
                return Err(AlgebraError::BadElement(
                    "subspace is not inside the carrier of the complement".to_string(),
                ));
            }
        }
        // Killing orthogonality to w is reference orthogonality to theta(w).
        let twisted = |m: &DMatrix<f64>| -> DMatrix<f64> {
            let mut t = m.clone();
            if killing {
                for j in 0..t.ncols() {
                    let col = self.theta(&t.column(j).into_owned());
                    t.set_column(j, &col);
                }
            }
            t
        };
        if killing {
            let gram = twisted(&within.frame).transpose() * &within.frame;
            let sv = linalg::singular_values(&gram);
            let (max, min) = (
                sv.first().copied().unwrap_or(0.0),
                sv.last().copied().unwrap_or(0.0),
            );
            if within.dim() > 0 && min <= 1e-10 * max.max(1.0) {
                return Err(AlgebraError::BadElement(
                    "form is degenerate on the carrier subspace".to_string(),
                ));
            }
        }
        let rows = twisted(&v.frame).transpose() * &within.frame;
        let kernel = linalg::nullspace_scaled(&rows, RANK_TOL, 1.0);
        Ok(Subspace { frame: &within.frame * kernel })
    }

    /// Cartan's criterion on a subalgebra: nondegenerate own Killing form.
    /// The zero subalgebra counts as semisimple. Errors if `s` is not closed
    /// under the bracket.
    pub fn is_semisimple_subalgebra(&self, s: &Subspace) -> Result<bool, AlgebraError> {
        let m = s.dim();
        if m == 0 {
            return Ok(true);
        }
        let mut ads = Vec::with_capacity(m);
        let mut bracket_scale = 0.0f64;
        for i in 0..m {
            let bi = s.frame.column(i).into_owned();
            let mut ad_i = DMatrix::zeros(m, m);
            for j in 0..m {
                let bj = s.frame.column(j).into_owned();
                let br = self.bracket(&bi, &bj);
                bracket_scale = bracket_scale.max(br.norm());
                let inside = s.frame.transpose() * &br;
                let residual = (&br - &s.frame * &inside).norm();
                if residual > 1e-8 * br.norm().max(1.0) {
                    return Err(AlgebraError::NotClosed {
                        name: self.record.name.clone(),
                        residual,
                    });
                }
                ad_i.set_column(j, &inside);
            }
            ads.push(ad_i);
        }
        // Unit basis vectors: brackets this small mean abelian, and the gram
        // of rounding noise would otherwise look nondegenerate to itself.
        if bracket_scale < 1e-10 {
            return Ok(false);
        }
        let mut gram = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let t = (&ads[i] * &ads[j]).trace();
                gram[(i, j)] = t;
                gram[(j, i)] = t;
            }
        }
        let sv = linalg::singular_values(&gram);
        let max = sv.first().copied().unwrap_or(0.0);
        let min = sv.last().copied().unwrap_or(0.0);
        Ok(min > 1e-10 * max.max(1e-300))
    }

    pub fn k_subspace(&self) -> Subspace {
        let mut frame = DMatrix::zeros(self.dim(), self.k_dim);
        for i in 0..self.k_dim {
            frame[(i, i)] = 1.0;
        }
        Subspace { frame }
    }

    pub fn p_subspace(&self) -> Subspace {
        let mut frame = DMatrix::zeros(self.dim(), self.p_dim());
        for i in 0..self.p_dim() {
            frame[(self.k_dim + i, i)] = 1.0;
        }
        Subspace { frame }
    }

    pub fn full_subspace(&self) -> Subspace {
        Subspace { frame: DMatrix::identity(self.dim(), self.dim()) }
    }

    /// Elements of `within` commuting with every generator in `xs`.
    pub fn centralizer_in(&self, xs: &[DVector<f64>], within: &Subspace) -> Subspace {
        if xs.is_empty() {
            return within.clone();
        }
        let d = self.dim();
        let m = within.dim();
        let mut stacked = DMatrix::zeros(d * xs.len(), m);
        // The cutoff must see the magnitude of the operators that produced
        // the stack: an abelian input makes every column pure roundoff.
        let mut scale = 0.0f64;
        for (r, x) in xs.iter().enumerate() {
            let ad_x = self.ad(x);
            scale = scale.max(ad_x.norm());
            let block = ad_x * &within.frame;
            stacked.view_mut((r * d, 0), (d, m)).copy_from(&block);
        }
        let kernel = linalg::nullspace_scaled(&stacked, RANK_TOL, scale);
        Subspace { frame: &within.frame * kernel }
    }

    pub fn centralizer(&self, xs: &[DVector<f64>]) -> Subspace {
        self.centralizer_in(xs, &self.full_subspace())
    }

    /// Complexification g tensor C with the complex-structure map J.
    pub fn complexify(&self) -> Result<ComplexifiedAlgebra, AlgebraError> {
        if self.record.flags.complex {
            return Err(AlgebraError::AlreadyComplex);
        }
        let d = self.dim();
        let (kd, pd) = (self.k_dim, self.p_dim());
        let n = self.ambient;
        let inv_s2 = 1.0 / 2.0_f64.sqrt();

        // New ordering: k' = [k x 1, p x i], p' = [p x 1, k x i].
        // slot(orig index i, unit u in {0,1}).
        let slot = |i: usize, u: usize| -> usize {
            match (i < kd, u) {
                (true, 0) => i,
                (false, 1) => kd + (i - kd),
                (false, _) => d + (i - kd),
                (true, _) => d + pd + i,
            }
        };
        let mut basis = vec![DMatrix::zeros(2 * n, 2 * n); 2 * d];
        for (i, b) in self.basis.iter().enumerate() {
            let scaled = b * inv_s2;
            let mut re = DMatrix::zeros(2 * n, 2 * n);
            re.view_mut((0, 0), (n, n)).copy_from(&scaled);
            re.view_mut((n, n), (n, n)).copy_from(&scaled);
            basis[slot(i, 0)] = re;
            let mut im = DMatrix::zeros(2 * n, 2 * n);
            im.view_mut((0, n), (n, n)).copy_from(&(-&scaled));
            im.view_mut((n, 0), (n, n)).copy_from(&scaled);
            basis[slot(i, 1)] = im;
        }

        // [b_i x u, b_j x v] = ([b_i, b_j]) x uv; with the 1/sqrt(2)
        // normalization the structure constants pick up one such factor.
        let mut ad = vec![DMatrix::zeros(2 * d, 2 * d); 2 * d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let c = self.ad[i][(k, j)];
                    if c == 0.0 {
                        continue;
                    }
                    let c = c * inv_s2;
                    // (u, v) -> (unit of result, sign)
                    for (u, v, w, s) in
                        [(0, 0, 0, 1.0), (0, 1, 1, 1.0), (1, 0, 1, 1.0), (1, 1, 0, -1.0)]
                    {
                        ad[slot(i, u)][(slot(k, w), slot(j, v))] = s * c;
                    }
                }
            }
        }

        let mut j_map = DMatrix::zeros(2 * d, 2 * d);
        for i in 0..d {
            j_map[(slot(i, 1), slot(i, 0))] = 1.0;
            j_map[(slot(i, 0), slot(i, 1))] = -1.0;
        }

        let id = complexification_id(&self.record.id)
            .ok_or(AlgebraError::AlreadyComplex)?;
        let record = crate::diagram::load_catalog()
            .record(id)
            .map_err(|e| AlgebraError::BadElement(e.to_string()))?;
        if record.dim != 2 * d {
            return Err(AlgebraError::DimensionMismatch {
                name: record.name.clone(),
                expected: record.dim,
                found: 2 * d,
            });
        }
        let killing_scale = verify_killing(&record.name, &ad, d)?;
        let alg = MatrixLieAlgebra {
            record,
            ambient: 2 * n,
            basis,
            ad,
            killing_scale,
            k_dim: d,
        };
        Ok(ComplexifiedAlgebra { alg, j: j_map, base_k_dim: kd, base_dim: d })
    }
}

/// Catalog id of g tensor C viewed as a real algebra.
fn complexification_id(id: &FormId) -> Option<FormId> {
    Some(match *id {
        FormId::SlR { n } => FormId::SlC { n },
        FormId::SlH { m } => FormId::SlC { n: 2 * m },
        FormId::Su { p, q } => FormId::SlC { n: p + q },
        FormId::So { p, q } => FormId::SoC { n: p + q },
        FormId::UStarH { n } => FormId::SoC { n: 2 * n },
        FormId::SpQ { p, q } => FormId::SpC { n: 2 * (p + q) },
        FormId::SpR { n } => FormId::SpC { n },
        FormId::SlC { .. } | FormId::SoC { .. } | FormId::SpC { .. } => return None,
        FormId::Exceptional { .. } => return None,
    })
}

/// g tensor C together with multiplication by i and the embedding of g.
pub struct ComplexifiedAlgebra {
    pub alg: MatrixLieAlgebra,
    j: DMatrix<f64>,
    base_k_dim: usize,
    base_dim: usize,
}

impl ComplexifiedAlgebra {
    /// Multiplication by i in coordinates.
    pub fn mul_i(&self, z: &DVector<f64>) -> DVector<f64> {
        &self.j * z
    }

    /// Coordinates of x tensor 1 for x in the base algebra.
    pub fn embed(&self, x: &DVector<f64>) -> DVector<f64> {
        let s2 = 2.0_f64.sqrt();
        let (kd, d) = (self.base_k_dim, self.base_dim);
        let pd = d - kd;
        let mut z = DVector::zeros(2 * d);
        for i in 0..kd {
            z[i] = s2 * x[i];
        }
        for t in 0..pd {
            z[d + t] = s2 * x[kd + t];
        }
        z
    }

    /// Real and imaginary parts of z as base-algebra coordinates.
    pub fn split(&self, z: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
        let inv_s2 = 1.0 / 2.0_f64.sqrt();
        let (kd, d) = (self.base_k_dim, self.base_dim);
        let pd = d - kd;
        let mut re = DVector::zeros(d);
        let mut im = DVector::zeros(d);
        for i in 0..kd {
            re[i] = inv_s2 * z[i];
            im[i] = inv_s2 * z[d + pd + i];
        }
        for t in 0..pd {
            re[kd + t] = inv_s2 * z[d + t];
            im[kd + t] = inv_s2 * z[kd + t];
        }
        (re, im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::resolve;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn build(name: &str) -> MatrixLieAlgebra {
        let record = resolve(name, &[]).unwrap();
        build_algebra(&record).unwrap_or_else(|e| panic!("{name}: {e}"))
    }

    fn random_element(alg: &MatrixLieAlgebra, rng: &mut StdRng) -> DVector<f64> {
        DVector::from_fn(alg.dim(), |_, _| rng.gen_range(-1.0..1.0))
    }

    #[test]
    fn quaternion_multiplication_table() {
        let u = quaternion_units();
        // i*j = k, j*k = i, k*i = j, i*i = -1
        assert_eq!(&u[1] * &u[2], u[3]);
        assert_eq!(&u[2] * &u[3], u[1]);
        assert_eq!(&u[3] * &u[1], u[2]);
        assert_eq!(&u[1] * &u[1], -&u[0]);
        // conjugation is transposition
        for q in &u[1..] {
            assert_eq!(q.transpose(), -q);
        }
    }

    #[test]
    fn dimensions_match_catalog() {
        for name in [
            "sl(2,R)", "sl(3,R)", "su(2)", "su(1,1)", "su(1,2)", "su(2,2)", "so(3)",
            "so(1,2)", "so(2,3)", "so(3,3)", "sp(1)", "sp(1,1)", "sp(4,R)", "sl(2,H)",
            "u*(3,H)", "sl(2,C)", "sl(3,C)", "so(5,C)", "sp(4,C)",
        ] {
            let record = resolve(name, &[]).unwrap();
            let alg = build_algebra(&record).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(alg.dim(), record.dim, "{name}");
        }
    }

    #[test]
    fn known_compact_dimensions() {
        assert_eq!(build("sl(2,R)").k_dim, 1);
        assert_eq!(build("su(1,2)").k_dim, 4);
        assert_eq!(build("so(2,3)").k_dim, 4);
        assert_eq!(build("so(2,3)").p_dim(), 6);
        assert_eq!(build("sp(1,1)").k_dim, 6);
        assert_eq!(build("sl(2,H)").k_dim, 10);
        assert_eq!(build("u*(3,H)").k_dim, 9);
        assert_eq!(build("sl(2,C)").k_dim, 3);
        assert_eq!(build("su(2)").k_dim, 3);
        assert_eq!(build("su(2)").p_dim(), 0);
    }

    #[test]
    fn bracket_matches_ambient_multiplication() {
        let mut rng = StdRng::seed_from_u64(7);
        for name in ["su(1,2)", "sp(1,1)", "sl(2,H)", "so(2,3)", "sl(2,C)"] {
            let alg = build(name);
            for _ in 0..5 {
                let x = random_element(&alg, &mut rng);
                let y = random_element(&alg, &mut rng);
                let via_ad = alg.mat(&alg.bracket(&x, &y));
                let xm = alg.mat(&x);
                let ym = alg.mat(&y);
                let ambient = &xm * &ym - &ym * &xm;
                assert!((via_ad - ambient).norm() < 1e-9, "{name}");
            }
        }
    }

    #[test]
    fn jacobi_identity_sampled() {
        let mut rng = StdRng::seed_from_u64(11);
        for name in ["su(1,2)", "so(2,3)", "u*(3,H)"] {
            let alg = build(name);
            for _ in 0..5 {
                let x = random_element(&alg, &mut rng);
                let y = random_element(&alg, &mut rng);
                let z = random_element(&alg, &mut rng);
                let s = alg.bracket(&x, &alg.bracket(&y, &z))
                    + alg.bracket(&y, &alg.bracket(&z, &x))
                    + alg.bracket(&z, &alg.bracket(&x, &y));
                assert!(s.norm() < 1e-9, "{name}");
            }
        }
    }

    #[test]
    fn cartan_decomposition_brackets() {
        // [k,k] in k, [k,p] in p, [p,p] in k.
        for name in ["su(1,2)", "so(2,3)", "sp(1,1)"] {
            let alg = build(name);
            let k = alg.k_subspace();
            let p = alg.p_subspace();
            let kd = alg.k_dim;
            let d = alg.dim();
            for i in 0..d {
                for j in 0..d {
                    let b = alg.ad[i].column(j).into_owned();
                    let target = if (i < kd) == (j < kd) { &k } else { &p };
                    assert!(target.contains(&b, 1e-9) || b.norm() < 1e-12, "{name} {i} {j}");
                }
            }
        }
    }

    #[test]
    fn killing_form_agrees_with_ad_trace() {
        let mut rng = StdRng::seed_from_u64(3);
        for name in ["sl(2,R)", "su(1,2)", "so(2,3)", "sl(2,C)"] {
            let alg = build(name);
            for _ in 0..4 {
                let x = random_element(&alg, &mut rng);
                let y = random_element(&alg, &mut rng);
                let fast = alg.killing(&x, &y);
                let slow = alg.killing_via_ad(&x, &y);
                assert!(
                    (fast - slow).abs() <= 1e-8 * slow.abs().max(1.0),
                    "{name}: {fast} vs {slow}"
                );
            }
        }
    }

    #[test]
    fn killing_of_sl2_coroot_is_eight() {
        let alg = build("sl(2,R)");
        let h = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let x = alg.coords(&h).unwrap();
        assert!((alg.killing_via_ad(&x, &x) - 8.0).abs() < 1e-9);
    }

    #[test]
    fn theta_fixes_k_and_negates_p() {
        // theta(M) = -M^T: the k basis must be skew, the p basis symmetric.
        let alg = build("su(1,2)");
        for i in 0..alg.dim() {
            let b = alg.basis_matrix(i);
            if i < alg.k_dim {
                assert!((b + b.transpose()).norm() < 1e-10, "basis {i} not skew");
            } else {
                assert!((b - b.transpose()).norm() < 1e-10, "basis {i} not symmetric");
            }
        }
    }

    #[test]
    fn coords_roundtrip_and_rejects_outsiders() {
        let alg = build("so(2,3)");
        let mut rng = StdRng::seed_from_u64(5);
        let x = random_element(&alg, &mut rng);
        let back = alg.coords(&alg.mat(&x)).unwrap();
        assert!((&back - &x).norm() < 1e-10);
        let outside = DMatrix::identity(alg.ambient, alg.ambient);
        assert!(alg.coords(&outside).is_err());
    }

    #[test]
    fn exceptional_forms_are_unrealizable() {
        let record = resolve("EIII", &[]).unwrap();
        assert!(matches!(
            build_algebra(&record),
            Err(AlgebraError::Unrealizable(_))
        ));
    }

    #[test]
    fn centralizer_of_zero_is_everything() {
        let alg = build("sl(2,R)");
        assert_eq!(alg.centralizer(&[]).dim(), 3);
        let h = alg.coords(&DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])).unwrap();
        let z = alg.centralizer(&[h.clone()]);
        assert_eq!(z.dim(), 1);
        assert!(z.contains(&h, 1e-9));
    }

    #[test]
    fn complexification_is_consistent() {
        let mut rng = StdRng::seed_from_u64(13);
        for name in ["su(2)", "sl(2,R)", "su(1,2)"] {
            let alg = build(name);
            let cx = alg.complexify().unwrap();
            assert_eq!(cx.alg.dim(), 2 * alg.dim(), "{name}");
            assert_eq!(cx.alg.k_dim, alg.dim(), "{name}");

            // J^2 = -1 and J is an isometry.
            let z = random_element(&cx.alg, &mut rng);
            assert!((cx.mul_i(&cx.mul_i(&z)) + &z).norm() < 1e-10);
            assert!((cx.mul_i(&z).norm() - z.norm()).abs() < 1e-10);

            // embed is a bracket homomorphism onto real points.
            let x = random_element(&alg, &mut rng);
            let y = random_element(&alg, &mut rng);
            let lhs = cx.alg.bracket(&cx.embed(&x), &cx.embed(&y));
            let rhs = cx.embed(&alg.bracket(&x, &y));
            assert!((lhs - rhs).norm() < 1e-9, "{name}");

            // split inverts embed; i * embed(x) has real part zero.
            let (re, im) = cx.split(&cx.embed(&x));
            assert!((re - &x).norm() < 1e-10);
            assert!(im.norm() < 1e-12);
            let (re2, im2) = cx.split(&cx.mul_i(&cx.embed(&x)));
            assert!(re2.norm() < 1e-12);
            assert!((im2 - &x).norm() < 1e-10);

            // ad matches ambient multiplication in the doubled realization.
            let z2 = random_element(&cx.alg, &mut rng);
            let via_ad = cx.alg.mat(&cx.alg.bracket(&z, &z2));
            let zm = cx.alg.mat(&z);
            let z2m = cx.alg.mat(&z2);
            assert!((via_ad - (&zm * &z2m - &z2m * &zm)).norm() < 1e-9, "{name}");
        }
    }

    #[test]
    fn complexification_of_complex_form_is_refused() {
        let alg = build("sl(2,C)");
        assert!(matches!(alg.complexify(), Err(AlgebraError::AlreadyComplex)));
    }

    #[test]
    fn killing_gram_is_diagonal_with_signature() {
        for name in ["sl(2,R)", "su(2)", "su(1,2)"] {
            let alg = build(name);
            let g = alg.killing_gram();
            let d = alg.dim();
            for i in 0..d {
                for j in 0..d {
                    let want = if i != j {
                        0.0
                    } else if i < alg.k_dim {
                        -alg.killing_scale
                    } else {
                        alg.killing_scale
                    };
                    assert!(
                        (g[(i, j)] - want).abs() <= 1e-8 * alg.killing_scale,
                        "{name} entry ({i},{j})"
                    );
                }
            }
        }
        // Compact form: negative definite.
        let su2 = build("su(2)");
        let g = su2.killing_gram();
        for i in 0..3 {
            assert!(g[(i, i)] < 0.0);
        }
    }

    #[test]
    fn ortho_complement_in_both_forms() {
        let alg = build("sl(2,R)");
        // a = span{h} inside p; its complement in p is span{e+f}.
        let h = alg.coords(&DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])).unwrap();
        let ef = alg
            .coords(&DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]))
            .unwrap();
        let a = Subspace::from_columns(&DMatrix::from_columns(&[h.clone()]));
        let p = alg.p_subspace();
        for killing in [false, true] {
            let comp = alg.ortho_complement(&a, &p, killing).unwrap();
            assert_eq!(comp.dim(), 1);
            assert!(comp.contains(&ef, 1e-9), "killing={killing}");
        }
        // Complement of the full space is zero.
        let full = alg.full_subspace();
        assert_eq!(alg.ortho_complement(&full, &full, true).unwrap().dim(), 0);
        // A subspace outside the carrier is rejected.
        assert!(alg.ortho_complement(&alg.k_subspace(), &p, false).is_err());
    }

    #[test]
    fn semisimplicity_by_cartan_criterion() {
        let alg = build("su(1,2)");
        // The zero subalgebra counts as semisimple.
        let zero = Subspace { frame: DMatrix::zeros(alg.dim(), 0) };
        assert!(alg.is_semisimple_subalgebra(&zero).unwrap());
        // k = u(2) has a center: not semisimple. The whole algebra is.
        assert!(!alg.is_semisimple_subalgebra(&alg.k_subspace()).unwrap());
        assert!(alg.is_semisimple_subalgebra(&alg.full_subspace()).unwrap());
        // p is not closed under the bracket.
        assert!(alg.is_semisimple_subalgebra(&alg.p_subspace()).is_err());
    }
}

