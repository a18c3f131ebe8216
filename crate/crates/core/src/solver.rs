//! Commutator decompositions: given X in a real semisimple matrix algebra,
//! produce Y and A with [Y, A] = X, plus a regularity certificate and an
//! ambient-arithmetic residual. Each route follows the same pattern: conjugate
//! X into the orthogonal complement of a suitable Cartan-type subspace z(A)
//! using compact-group flattening moves, then solve the linear system
//! ad(A) Y = X' and undo the conjugation.

use crate::algebra::{AlgebraError, MatrixLieAlgebra, Subspace};
use crate::linalg::{self, RANK_TOL};
use crate::structure::{self, CartanStructure, RegularCertificate, StructureError};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative residual bound every witness must satisfy.
pub const WITNESS_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("input is outside this method's domain: {reason} has norm {norm:.3e}")]
    NotInDomain { reason: &'static str, norm: f64 },
    #[error("{name} admits no general single-commutator method here ({why}); try the two-commutator decomposition")]
    OpenCase { name: String, why: &'static str },
    #[error("flattening stalled at objective {objective:.3e} (gradient {gradient:.3e}) after {kicks} restarts")]
    FlattenStalled { objective: f64, gradient: f64, kicks: usize },
    #[error("linear solve residual {residual:.3e} exceeds {tol:.3e}")]
    ResidualTooLarge { residual: f64, tol: f64 },
    #[error("element is not regular semisimple: centralizer dimension {found}, expected {expected}")]
    NotRegularSemisimple { found: usize, expected: usize },
    #[error("witness rejected: {0}")]
    BadWitness(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Knobs for the flattening descent.
#[derive(Debug, Clone)]
pub struct DescentConfig {
    pub grad_tol: f64,
    pub max_iters: usize,
    pub restarts: usize,
    pub step_shrink: f64,
}

impl Default for DescentConfig {
    fn default() -> Self {
        DescentConfig { grad_tol: 1e-12, max_iters: 5000, restarts: 8, step_shrink: 0.5 }
    }
}

/// A product of exp(ad(u_i)) factors, recorded so the final witness can be
/// pulled back through the exact inverse isometries.
#[derive(Default, Clone)]
pub struct Conjugator {
    steps: Vec<DVector<f64>>,
}

impl Conjugator {
    pub fn apply(&self, alg: &MatrixLieAlgebra, v: &DVector<f64>) -> DVector<f64> {
        let mut out = v.clone();
        for s in &self.steps {
            out = linalg::exp_action(&alg.ad(s), 1.0, &out);
        }
        out
    }

    pub fn apply_inv(&self, alg: &MatrixLieAlgebra, v: &DVector<f64>) -> DVector<f64> {
        let mut out = v.clone();
        for s in self.steps.iter().rev() {
            out = linalg::exp_action(&alg.ad(s), -1.0, &out);
        }
        out
    }

    /// Composition: first `self`, then `other`.
    pub fn then(mut self, other: Conjugator) -> Conjugator {
        self.steps.extend(other.steps);
        self
    }
}

fn random_unit(space: &Subspace, rng: &mut ChaCha8Rng) -> DVector<f64> {
    let coeffs = DVector::from_fn(space.dim(), |_, _| rng.gen_range(-1.0..1.0));
    let v = &space.frame * coeffs;
    let n = v.norm();
    if n > 0.0 { v / n } else { v }
}

/// Conjugates `x0` by exp(ad(u)) moves with u in `acting` (a subalgebra of k,
/// so every move is an isometry) until the component of x along `kill`
/// vanishes. Gauss-Newton steps do the endgame, plain gradient ascent the
/// rest; random kicks escape the measure-zero saddle set.
fn flatten_component(
    alg: &MatrixLieAlgebra,
    x0: &DVector<f64>,
    kill: &Subspace,
    acting: &Subspace,
    cfg: &DescentConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(Conjugator, DVector<f64>), SolverError> {
    let scale = x0.norm().max(1.0);
    let tol = 1e-10 * scale;
    let mut conj = Conjugator::default();
    let mut x = x0.clone();
    if kill.dim() == 0 || acting.dim() == 0 {
        return Ok((conj, x));
    }
    let mut eta = 0.1;
    let mut kicks = 0usize;

    let component = |x: &DVector<f64>| -> DVector<f64> { kill.frame.transpose() * x };

    let mut last_grad = f64::INFINITY;
    for _ in 0..cfg.max_iters {
        let comp = component(&x);
        let obj = comp.norm();
        if obj <= tol {
            return Ok((conj, x));
        }
        let ad_x = alg.ad(&x);
        // Entry (t, i) is the kill-component of [b_i, x] for the acting
        // basis; contracting with the thin kill frame first keeps the cost
        // linear in dim(kill) rather than quadratic in dim(g).
        let kt_ad = kill.frame.transpose() * &ad_x;
        let jac = -(&kt_ad * &acting.frame);
        let grad = jac.transpose() * &comp;
        last_grad = grad.norm();

        // Gauss-Newton probe with halvings.
        let mut moved = false;
        let gn = linalg::min_norm_solve(&jac, &(-&comp), RANK_TOL);
        if gn.norm() > 0.0 {
            let mut step = 1.0;
            for _ in 0..6 {
                let u = &acting.frame * (&gn * step);
                let cand = linalg::exp_action(&alg.ad(&u), 1.0, &x);
                if component(&cand).norm() < obj {
                    conj.steps.push(u);
                    x = cand;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
        }
        if moved {
            continue;
        }

        // Gradient step with backtracking.
        if last_grad > cfg.grad_tol * scale * scale {
            let dir = -&grad;
            let mut stepped = false;
            while eta > 1e-14 {
                let u = &acting.frame * (&dir * eta);
                let cand = linalg::exp_action(&alg.ad(&u), 1.0, &x);
                let new_obj = component(&cand).norm();
                if new_obj * new_obj <= obj * obj - 1e-4 * eta * last_grad * last_grad {
                    conj.steps.push(u);
                    x = cand;
                    eta = (eta * 1.8).min(1.0);
                    stepped = true;
                    break;
                }
                eta *= cfg.step_shrink;
            }
            if stepped {
                continue;
            }
        }

        // Stalled at a critical point that is not the minimum: kick.
        if kicks >= cfg.restarts {
            return Err(SolverError::FlattenStalled { objective: obj, gradient: last_grad, kicks });
        }
        kicks += 1;
        eta = 0.1;
        let u = random_unit(acting, rng) * (0.4 / kicks as f64);
        conj.steps.push(u.clone());
        x = linalg::exp_action(&alg.ad(&u), 1.0, &x);
    }
    Err(SolverError::FlattenStalled {
        objective: component(&x).norm(),
        gradient: last_grad,
        kicks,
    })
}

/// Public entry to the flattening move: returns the conjugating product and
/// the conjugated element, whose `kill`-component is below 1e-10 relative.
pub fn kostant_flatten(
    alg: &MatrixLieAlgebra,
    x: &DVector<f64>,
    kill: &Subspace,
    acting: &Subspace,
    cfg: &DescentConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(Conjugator, DVector<f64>), SolverError> {
    flatten_component(alg, x, kill, acting, cfg, rng)
}

/// Result of a single-commutator solve, in coordinates of the algebra it was
/// solved in.
pub struct Decomposition {
    pub y: DVector<f64>,
    pub a: DVector<f64>,
    pub method: &'static str,
    pub certificate: RegularityCert,
}

/// What makes the produced A usable: the dimension of its centralizer inside
/// the named space, recomputable by anyone from A alone.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegularityCert {
    /// "g" for the full algebra, "p" for the symmetric part.
    pub space: String,
    pub centralizer_dim: usize,
    pub expected_dim: usize,
}

const SOLVE_TOL: f64 = 1e-8;

/// Finds y with [y, a] = target, which is ad(a) y = -target.
fn solve_against(
    alg: &MatrixLieAlgebra,
    a: &DVector<f64>,
    target: &DVector<f64>,
) -> Result<DVector<f64>, SolverError> {
    let op = alg.ad(a);
    let y = linalg::min_norm_solve(&op, &(-target), RANK_TOL);
    let residual = (&op * &y + target).norm();
    let tol = SOLVE_TOL * target.norm().max(1.0);
    if residual > tol {
        return Err(SolverError::ResidualTooLarge { residual, tol });
    }
    Ok(y)
}

fn cert_from(space: &str, found: &RegularCertificate) -> RegularityCert {
    RegularityCert {
        space: space.to_string(),
        centralizer_dim: found.centralizer_dim,
        expected_dim: found.expected_dim,
    }
}

fn split_coords(alg: &MatrixLieAlgebra, x: &DVector<f64>) -> (f64, f64) {
    let kd = alg.k_dim;
    let k_norm = x.rows(0, kd).norm();
    let p_norm = x.rows(kd, alg.dim() - kd).norm();
    (k_norm, p_norm)
}

/// Solves [Y, A] = X for X in p, with Y in k and A regular in p.
/// X is conjugated into the orthocomplement of the maximal flat, where it
/// lies in the image of any p-regular element of the flat.
pub fn solve_in_p(
    alg: &MatrixLieAlgebra,
    st: &CartanStructure,
    x: &DVector<f64>,
    cfg: &DescentConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Decomposition, SolverError> {
    let (k_norm, _) = split_coords(alg, x);
    if k_norm > 1e-10 * x.norm().max(1.0) {
        return Err(SolverError::NotInDomain { reason: "component in k", norm: k_norm });
    }
    if st.a.dim() == 0 {
        return Err(SolverError::OpenCase {
            name: alg.record.name.clone(),
            why: "the symmetric part is trivial",
        });
    }
    let (conj, xf) = flatten_component(alg, x, &st.a, &alg.k_subspace(), cfg, rng)?;
    let reg = structure::regular_element(alg, &st.a, &alg.p_subspace(), st.a.dim(), rng)?;
    let w = solve_against(alg, &reg.element, &xf)?;
    // The p-part of w commutes with A (its bracket with A would land in k,
    // but the target is in p), so the k-part alone solves the system.
    let mut y = w.clone();
    y.rows_mut(alg.k_dim, alg.dim() - alg.k_dim).fill(0.0);
    let residual = (alg.ad(&reg.element) * &y + &xf).norm();
    let tol = SOLVE_TOL * xf.norm().max(1.0);
    if residual > tol {
        return Err(SolverError::ResidualTooLarge { residual, tol });
    }
    Ok(Decomposition {
        y: conj.apply_inv(alg, &y),
        a: conj.apply_inv(alg, &reg.element),
        method: "p_restricted",
        certificate: cert_from("p", &reg),
    })
}

/// Split algebras: the flat is a full Cartan subalgebra, so one flatten of
/// the p-component suffices for arbitrary X, and A is regular in p.
pub fn solve_split(
    alg: &MatrixLieAlgebra,
    st: &CartanStructure,
    x: &DVector<f64>,
    cfg: &DescentConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Decomposition, SolverError> {
    if !alg.record.flags.split {
        return Err(SolverError::OpenCase {
            name: alg.record.name.clone(),
            why: "this route needs a split form",
        });
    }
    let (conj, xf) = flatten_component(alg, x, &st.a, &alg.k_subspace(), cfg, rng)?;
    let reg = structure::regular_element(alg, &st.a, &alg.full_subspace(), alg.record.rank, rng)?;
    let y = solve_against(alg, &reg.element, &xf)?;
    Ok(Decomposition {
        y: conj.apply_inv(alg, &y),
        a: conj.apply_inv(alg, &reg.element),
        method: "split",
        certificate: cert_from("g", &reg),
    })
}

/// Arrow-free forms (z(m) = 0): flatten the p-component off the flat with K,
/// then the m-component off t with M; the result is orthogonal to the Cartan
/// subalgebra t + a and lies in the image of any of its regular elements.
pub fn solve_general(
    alg: &MatrixLieAlgebra,
    st: &CartanStructure,
    x: &DVector<f64>,
    cfg: &DescentConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Decomposition, SolverError> {
    if !alg.record.diagram.arrows.is_empty() {
        return Err(SolverError::OpenCase {
            name: alg.record.name.clone(),
            why: "the centralizer of the flat has a center",
        });
    }
    let (c1, x1) = flatten_component(alg, x, &st.a, &alg.k_subspace(), cfg, rng)?;
    // Moves from m fix a pointwise, so the flat component stays flattened.
    let (c2, x2) = flatten_component(alg, &x1, &st.t, &st.m, cfg, rng)?;
    let reg = structure::regular_element(alg, &st.h, &alg.full_subspace(), alg.record.rank, rng)?;
    let y = solve_against(alg, &reg.element, &x2)?;
    let conj = c1.then(c2);
    Ok(Decomposition {
        y: conj.apply_inv(alg, &y),
        a: conj.apply_inv(alg, &reg.element),
        method: "general",
        certificate: cert_from("g", &reg),
    })
}

/// Inner-type forms, for inputs with no component along the center of k:
/// flatten the k-component off a Cartan subalgebra t_i of [k, k]; then
/// z(k) + t_i is a Cartan subalgebra of g orthogonal to the result.
pub fn solve_inner(
    alg: &MatrixLieAlgebra,
    x: &DVector<f64>,
    cfg: &DescentConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Decomposition, SolverError> {
    if !alg.record.flags.inner_type {
        return Err(SolverError::OpenCase {
            name: alg.record.name.clone(),
            why: "this route needs an inner-type form",
        });
    }
    let k = alg.k_subspace();
    let c = structure::center_of(alg, &k);
    let c_norm = (c.frame.transpose() * x).norm();
    if c_norm > 1e-10 * x.norm().max(1.0) {
        return Err(SolverError::NotInDomain { reason: "component along the center of k", norm: c_norm });
    }
    let kk = structure::derived_of(alg, &k);
    let t_i = structure::maximal_abelian_in(alg, &kk, rng);
    let mut h_cols = DMatrix::zeros(alg.dim(), c.dim() + t_i.dim());
    h_cols.view_mut((0, 0), (alg.dim(), c.dim())).copy_from(&c.frame);
    h_cols.view_mut((0, c.dim()), (alg.dim(), t_i.dim())).copy_from(&t_i.frame);
    let h_i = Subspace { frame: h_cols };

    let (conj, xf) = flatten_component(alg, x, &t_i, &k, cfg, rng)?;
    let reg = structure::regular_element(alg, &h_i, &alg.full_subspace(), alg.record.rank, rng)?;
    let y = solve_against(alg, &reg.element, &xf)?;
    Ok(Decomposition {
        y: conj.apply_inv(alg, &y),
        a: conj.apply_inv(alg, &reg.element),
        method: "inner",
        certificate: cert_from("g", &reg),
    })
}

/// Compact forms, through the complexification: iX lies in the symmetric
/// part there, and [Y, iA] = iX pulls back to [Y, A] = X with everything in
/// the compact algebra.
pub fn solve_compact(
    alg: &MatrixLieAlgebra,
    x: &DVector<f64>,
    cfg: &DescentConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Decomposition, SolverError> {
    if !alg.record.flags.compact {
        return Err(SolverError::OpenCase {
            name: alg.record.name.clone(),
            why: "this route needs a compact form",
        });
    }
    let cx = alg.complexify()?;
    let st = structure::cartan_structure(&cx.alg, rng)?;
    let xi = cx.mul_i(&cx.embed(x));
    let dec = solve_in_p(&cx.alg, &st, &xi, cfg, rng)?;
    // [Y', A'] = iX with A' in p'. Then A = -i A' lies in k' and
    // [Y', A] = -i [Y', A'] = X under the embedding.
    let a_k = -cx.mul_i(&dec.a);
    let (y1, y2) = cx.split(&dec.y);
    let (a1, a2) = cx.split(&a_k);
    let imag = y2.norm().max(a2.norm());
    if imag > 1e-7 * (y1.norm() + a1.norm()).max(1.0) {
        return Err(SolverError::BadWitness(format!(
            "pullback left an imaginary component of norm {imag:.3e}"
        )));
    }
    // Independent regularity certificate in the compact algebra itself.
    let z_dim = linalg::nullspace_scaled(&alg.ad(&a1), RANK_TOL, a1.norm().max(1.0)).ncols();
    if z_dim != alg.record.rank {
        return Err(SolverError::NotRegularSemisimple { found: z_dim, expected: alg.record.rank });
    }
    Ok(Decomposition {
        y: y1,
        a: a1,
        method: "compact",
        certificate: RegularityCert {
            space: "g".to_string(),
            centralizer_dim: z_dim,
            expected_dim: alg.record.rank,
        },
    })
}

/// Complex forms, for regular semisimple X: z(X) is a Cartan subalgebra, X is
/// orthogonal to all its root spaces, and the sum of the positive root spaces
/// contains a regular nilpotent e whose centralizer consists of positive root
/// vectors. Then X is in the image of ad(e) and no conjugation is needed.
pub fn solve_complex(
    alg: &MatrixLieAlgebra,
    x: &DVector<f64>,
    rng: &mut ChaCha8Rng,
) -> Result<Decomposition, SolverError> {
    if !alg.record.flags.complex {
        return Err(SolverError::OpenCase {
            name: alg.record.name.clone(),
            why: "this route needs a complex form",
        });
    }
    let d = alg.dim();
    let l2 = alg.record.rank; // real dimension of a complex Cartan subalgebra
    let scale = x.norm().max(1.0);

    if x.norm() <= 1e-13 {
        // Trivial input: [0, A] = 0 for any certified regular A.
        let full = alg.full_subspace();
        for _ in 0..8 {
            let a0 = random_unit(&full, rng);
            let c = linalg::nullspace_scaled(&alg.ad(&a0), RANK_TOL, 1.0).ncols();
            if c == l2 {
                return Ok(Decomposition {
                    y: DVector::zeros(d),
                    a: a0,
                    method: "complex",
                    certificate: RegularityCert {
                        space: "g".to_string(),
                        centralizer_dim: c,
                        expected_dim: l2,
                    },
                });
            }
        }
        return Err(SolverError::NotRegularSemisimple { found: 0, expected: l2 });
    }

    let h_x = linalg::nullspace_scaled(&alg.ad(x), RANK_TOL, scale);
    if h_x.ncols() != l2 {
        return Err(SolverError::NotRegularSemisimple { found: h_x.ncols(), expected: l2 });
    }
    let h_sub = Subspace { frame: h_x };

    let mut last_err = SolverError::NotRegularSemisimple { found: 0, expected: l2 };
    for _ in 0..8 {
        let a0 = random_unit(&h_sub, rng);
        let (vals, vecs) = match complex_eigen(&alg.ad(&a0)) {
            Some(e) => e,
            None => continue,
        };
        let vmax = vals.iter().map(|(re, im)| re.hypot(*im)).fold(0.0f64, f64::max);
        let cut = 1e-8 * vmax.max(1.0);
        // Positive root planes: real/imaginary parts of eigenvectors whose
        // eigenvalue has positive real part. Conjugate eigenvalues share a
        // plane; opposite roots have the opposite sign of the real part.
        let mut pos_cols: Vec<DVector<f64>> = Vec::new();
        let mut zero_count = 0usize;
        let mut ambiguous = false;
        for (i, (re, im)) in vals.iter().enumerate() {
            let mag = re.hypot(*im);
            if mag <= cut {
                zero_count += 1;
                continue;
            }
            if re.abs() <= 1e-6 * mag {
                ambiguous = true;
                break;
            }
            if *re > 0.0 {
                pos_cols.push(vecs[i].0.clone());
                pos_cols.push(vecs[i].1.clone());
            }
        }
        if ambiguous || zero_count != l2 {
            last_err = SolverError::NotRegularSemisimple { found: zero_count, expected: l2 };
            continue;
        }
        let pos_mat = DMatrix::from_columns(&pos_cols);
        let n_plus = linalg::column_space_scaled(&pos_mat, RANK_TOL, 1.0);
        if n_plus.ncols() != (d - l2) / 2 {
            continue;
        }
        let n_sub = Subspace { frame: n_plus };
        let e = random_unit(&n_sub, rng);
        let z_e = linalg::nullspace_scaled(&alg.ad(&e), RANK_TOL, 1.0);
        if z_e.ncols() != l2 {
            last_err = SolverError::NotRegularSemisimple { found: z_e.ncols(), expected: l2 };
            continue;
        }
        // Decisive consistency check: X must be Killing-orthogonal to z(e).
        let mut ortho = 0.0f64;
        for j in 0..z_e.ncols() {
            ortho = ortho.max(alg.killing(x, &z_e.column(j).into_owned()).abs());
        }
        if ortho > 1e-6 * scale * alg.killing_scale {
            last_err = SolverError::BadWitness(format!(
                "candidate centralizer not orthogonal to input ({ortho:.3e})"
            ));
            continue;
        }
        match solve_against(alg, &e, x) {
            Ok(y) => {
                return Ok(Decomposition {
                    y,
                    a: e,
                    method: "complex",
                    certificate: RegularityCert {
                        space: "g".to_string(),
                        centralizer_dim: z_e.ncols(),
                        expected_dim: l2,
                    },
                });
            }
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

/// Complex eigendecomposition of a real matrix: values (re, im) and for each
/// a pair (Re v, Im v) of real vectors spanning its invariant plane.
#[allow(clippy::type_complexity)]
fn complex_eigen(
    m: &DMatrix<f64>,
) -> Option<(Vec<(f64, f64)>, Vec<(DVector<f64>, DVector<f64>)>)> {
    let n = m.nrows();
    let fm = faer::Mat::from_fn(n, n, |i, j| m[(i, j)]);
    let eig = fm.eigen().ok()?;
    let s = eig.S();
    let u = eig.U();
    let mut vals = Vec::with_capacity(n);
    let mut vecs = Vec::with_capacity(n);
    for j in 0..n {
        vals.push((s[j].re, s[j].im));
        let re = DVector::from_fn(n, |i, _| u[(i, j)].re);
        let im = DVector::from_fn(n, |i, _| u[(i, j)].im);
        vecs.push((re, im));
    }
    Some((vals, vecs))
}

/// Every element of a real form is a difference of two commutators: solve in
/// the complexification and take real parts.
pub struct TwoCommutators {
    pub y1: DVector<f64>,
    pub a1: DVector<f64>,
    pub y2: DVector<f64>,
    pub a2: DVector<f64>,
}

pub fn solve_two_commutators(
    alg: &MatrixLieAlgebra,
    z: &DVector<f64>,
    rng: &mut ChaCha8Rng,
) -> Result<TwoCommutators, SolverError> {
    let cx = alg.complexify()?;
    let dec = solve_complex(&cx.alg, &cx.embed(z), rng)?;
    let (y1, y2) = cx.split(&dec.y);
    let (a1, a2) = cx.split(&dec.a);
    // [y1 + i y2, a1 + i a2] = z + 0 i, so z = [y1, a1] - [y2, a2].
    Ok(TwoCommutators { y1, a1, y2, a2 })
}

/// Route an input to the matching method. Open cases still succeed when the
/// input avoids the obstruction: zero component along z(k) for inner forms,
/// or lying in p.
pub fn solve_auto(
    alg: &MatrixLieAlgebra,
    st: &CartanStructure,
    x: &DVector<f64>,
    cfg: &DescentConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Decomposition, SolverError> {
    let flags = &alg.record.flags;
    if flags.complex {
        return solve_complex(alg, x, rng);
    }
    if flags.compact {
        return solve_compact(alg, x, cfg, rng);
    }
    if flags.split {
        return solve_split(alg, st, x, cfg, rng);
    }
    if alg.record.diagram.arrows.is_empty() {
        return solve_general(alg, st, x, cfg, rng);
    }
    if flags.inner_type {
        let k = alg.k_subspace();
        let c = structure::center_of(alg, &k);
        if (c.frame.transpose() * x).norm() <= 1e-10 * x.norm().max(1.0) {
            return solve_inner(alg, x, cfg, rng);
        }
    }
    let (k_norm, _) = split_coords(alg, x);
    if k_norm <= 1e-10 * x.norm().max(1.0) {
        return solve_in_p(alg, st, x, cfg, rng);
    }
    Err(SolverError::OpenCase {
        name: alg.record.name.clone(),
        why: "the input has a component along the obstruction",
    })
}

/// Outcome of comparing Im ad(x) against the Killing-orthocomplement of the
/// centralizer z(x): the two agree for any x, and the principal angle
/// measures how far the numerics are from that identity.
#[derive(Debug, Clone, Serialize)]
pub struct ImAdReport {
    pub image_dim: usize,
    pub centralizer_dim: usize,
    pub max_angle: f64,
    pub pass: bool,
}

pub const IM_AD_ANGLE_TOL: f64 = 1e-8;

pub fn check_im_ad(alg: &MatrixLieAlgebra, x: &DVector<f64>) -> ImAdReport {
    let ad_x = alg.ad(x);
    let scale = ad_x.norm().max(1.0);
    let image_dim = linalg::column_space_scaled(&ad_x, RANK_TOL, scale).ncols();
    let centralizer_dim = alg.dim() - image_dim;
    let max_angle = image_centralizer_angle(alg, x).unwrap_or(std::f64::consts::FRAC_PI_2);
    ImAdReport { image_dim, centralizer_dim, max_angle, pass: max_angle <= IM_AD_ANGLE_TOL }
}

/// Principal angle between Im ad(x) and the Killing-orthocomplement of z(x);
/// zero whenever ad(x) is semisimple enough, which random draws are.
pub fn image_centralizer_angle(alg: &MatrixLieAlgebra, x: &DVector<f64>) -> Option<f64> {
    let ad_x = alg.ad(x);
    let scale = ad_x.norm().max(1.0);
    let image = linalg::column_space_scaled(&ad_x, RANK_TOL, scale);
    let z = linalg::nullspace_scaled(&ad_x, RANK_TOL, scale);
    // Killing-orthogonality to z is Euclidean orthogonality to theta(z).
    let mut theta_z = DMatrix::zeros(alg.dim(), z.ncols());
    for j in 0..z.ncols() {
        theta_z.set_column(j, &alg.theta(&z.column(j).into_owned()));
    }
    let perp = linalg::nullspace_scaled(&theta_z.transpose(), RANK_TOL, 1.0);
    linalg::max_principal_angle(&image, &perp)
}

/// Row-major dense matrix for serialized witnesses.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmbientMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl AmbientMatrix {
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        let mut data = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                data.push(m[(i, j)]);
            }
        }
        AmbientMatrix { rows: m.nrows(), cols: m.ncols(), data }
    }

    pub fn to_matrix(&self) -> Result<DMatrix<f64>, SolverError> {
        if self.data.len() != self.rows * self.cols {
            return Err(SolverError::BadWitness(format!(
                "matrix data length {} does not match {}x{}",
                self.data.len(),
                self.rows,
                self.cols
            )));
        }
        Ok(DMatrix::from_row_slice(self.rows, self.cols, &self.data))
    }
}

/// A self-contained, independently checkable record of [Y, A] = X.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub schema_version: u32,
    pub algebra: String,
    pub method: String,
    pub x: AmbientMatrix,
    pub y: AmbientMatrix,
    pub a: AmbientMatrix,
    pub residual: f64,
    pub certificate: RegularityCert,
}

/// Record of Z = [Y1, A1] - [Y2, A2].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwoCommutatorWitness {
    pub schema_version: u32,
    pub algebra: String,
    pub method: String,
    pub z: AmbientMatrix,
    pub y1: AmbientMatrix,
    pub a1: AmbientMatrix,
    pub y2: AmbientMatrix,
    pub a2: AmbientMatrix,
    pub residual: f64,
}

fn commutator_residual(x: &DMatrix<f64>, y: &DMatrix<f64>, a: &DMatrix<f64>) -> f64 {
    let c = y * a - a * y;
    (x - c).norm() / x.norm().max(1.0)
}

/// Packages a decomposition as a witness after an ambient-arithmetic check.
pub fn make_witness(
    alg: &MatrixLieAlgebra,
    x: &DVector<f64>,
    dec: &Decomposition,
) -> Result<Witness, SolverError> {
    let xm = alg.mat(x);
    let ym = alg.mat(&dec.y);
    let am = alg.mat(&dec.a);
    let residual = commutator_residual(&xm, &ym, &am);
    if residual > WITNESS_TOL {
        return Err(SolverError::ResidualTooLarge { residual, tol: WITNESS_TOL });
    }
    Ok(Witness {
        schema_version: 1,
        algebra: alg.record.name.clone(),
        method: dec.method.to_string(),
        x: AmbientMatrix::from_matrix(&xm),
        y: AmbientMatrix::from_matrix(&ym),
        a: AmbientMatrix::from_matrix(&am),
        residual,
        certificate: dec.certificate.clone(),
    })
}

pub fn make_two_commutator_witness(
    alg: &MatrixLieAlgebra,
    z: &DVector<f64>,
    tc: &TwoCommutators,
) -> Result<TwoCommutatorWitness, SolverError> {
    let zm = alg.mat(z);
    let y1 = alg.mat(&tc.y1);
    let a1 = alg.mat(&tc.a1);
    let y2 = alg.mat(&tc.y2);
    let a2 = alg.mat(&tc.a2);
    let c = (&y1 * &a1 - &a1 * &y1) - (&y2 * &a2 - &a2 * &y2);
    let residual = (&zm - &c).norm() / zm.norm().max(1.0);
    if residual > WITNESS_TOL {
        return Err(SolverError::ResidualTooLarge { residual, tol: WITNESS_TOL });
    }
    Ok(TwoCommutatorWitness {
        schema_version: 1,
        algebra: alg.record.name.clone(),
        method: "two_commutators".to_string(),
        z: AmbientMatrix::from_matrix(&zm),
        y1: AmbientMatrix::from_matrix(&y1),
        a1: AmbientMatrix::from_matrix(&a1),
        y2: AmbientMatrix::from_matrix(&y2),
        a2: AmbientMatrix::from_matrix(&a2),
        residual,
    })
}

/// Re-checks a witness from scratch: rebuilds the algebra, recomputes the
/// commutator in ambient arithmetic, and re-derives the certificate.
pub fn verify_witness(w: &Witness) -> Result<f64, SolverError> {
    let record = crate::diagram::resolve(&w.algebra, &[])
        .map_err(|e| SolverError::BadWitness(e.to_string()))?;
    let alg = crate::algebra::build_algebra(&record)?;
    let xm = w.x.to_matrix()?;
    let ym = w.y.to_matrix()?;
    let am = w.a.to_matrix()?;
    let n = alg.ambient;
    for (tag, m) in [("x", &xm), ("y", &ym), ("a", &am)] {
        if m.nrows() != n || m.ncols() != n {
            return Err(SolverError::BadWitness(format!(
                "{tag} is {}x{}, algebra is realized in {n}x{n}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    let residual = commutator_residual(&xm, &ym, &am);
    if residual > WITNESS_TOL {
        return Err(SolverError::ResidualTooLarge { residual, tol: WITNESS_TOL });
    }
    // Certificate recheck: centralizer dimension of A in the claimed space.
    let a_coords = alg.coords(&am)?;
    let within = match w.certificate.space.as_str() {
        "p" => alg.p_subspace(),
        _ => alg.full_subspace(),
    };
    let z = alg.centralizer_in(&[a_coords], &within);
    if z.dim() != w.certificate.expected_dim {
        return Err(SolverError::BadWitness(format!(
            "certificate expects centralizer dimension {}, recomputed {}",
            w.certificate.expected_dim,
            z.dim()
        )));
    }
    Ok(residual)
}

pub fn verify_two_commutator_witness(w: &TwoCommutatorWitness) -> Result<f64, SolverError> {
    let record = crate::diagram::resolve(&w.algebra, &[])
        .map_err(|e| SolverError::BadWitness(e.to_string()))?;
    let alg = crate::algebra::build_algebra(&record)?;
    let zm = w.z.to_matrix()?;
    let mats: Vec<DMatrix<f64>> = [&w.y1, &w.a1, &w.y2, &w.a2]
        .iter()
        .map(|m| m.to_matrix())
        .collect::<Result<_, _>>()?;
    let n = alg.ambient;
    for m in std::iter::once(&zm).chain(mats.iter()) {
        if m.nrows() != n || m.ncols() != n {
            return Err(SolverError::BadWitness(format!(
                "matrix is {}x{}, algebra is realized in {n}x{n}",
                m.nrows(),
                m.ncols()
            )));
        }
        // Membership check: every factor must be in the algebra.
        alg.coords(m)?;
    }
    let c = (&mats[0] * &mats[1] - &mats[1] * &mats[0])
        - (&mats[2] * &mats[3] - &mats[3] * &mats[2]);
    let residual = (&zm - &c).norm() / zm.norm().max(1.0);
    if residual > WITNESS_TOL {
        return Err(SolverError::ResidualTooLarge { residual, tol: WITNESS_TOL });
    }
    Ok(residual)
}
