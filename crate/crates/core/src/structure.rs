//! Cartan structure extracted numerically from a matrix realization: maximal
//! flats, centralizers, Cartan subalgebras, regular elements with
//! certificates, restricted roots and Weyl orbits.

use crate::algebra::{AlgebraError, MatrixLieAlgebra, Subspace};
use crate::diagram;
use crate::linalg::{self, RANK_TOL};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StructureError {
    #[error("maximal flat has dimension {found}, catalog says {expected}")]
    FlatDimension { expected: usize, found: usize },
    #[error("Cartan subalgebra has dimension {found}, catalog says {expected}")]
    CartanDimension { expected: usize, found: usize },
    #[error("Cartan subalgebra is not self-centralizing (z has dimension {z_dim}, h has {h_dim})")]
    NotSelfCentralizing { z_dim: usize, h_dim: usize },
    #[error("no regular element after {retries} draws (expected centralizer {expected}, best seen {best})")]
    NoRegularElement { retries: usize, expected: usize, best: usize },
    #[error("restricted-root eigenvectors do not split jointly (residual {0:.3e})")]
    RootsNotJoint(f64),
    #[error("restricted roots leave {zero_dim} commuting directions, structure predicts {expected}")]
    RootZeroSpace { zero_dim: usize, expected: usize },
    #[error("Weyl orbit exceeded the size cap {0}")]
    OrbitTooLarge(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// theta-adapted Cartan data: a maximal flat a in p, m = z_k(a), a Cartan
/// subalgebra t of m, and the maximally split Cartan h = t + a.
pub struct CartanStructure {
    pub a: Subspace,
    pub m: Subspace,
    pub t: Subspace,
    pub h: Subspace,
}

fn random_in(space: &Subspace, rng: &mut ChaCha8Rng) -> DVector<f64> {
    let c = space.dim();
    let coeffs = DVector::from_fn(c, |_, _| rng.gen_range(-1.0..1.0));
    let v = &space.frame * coeffs;
    let n = v.norm();
    if n > 0.0 { v / n } else { v }
}

/// Greedy maximal abelian subspace of `within`: extend by generic commuting
/// directions until the centralizer inside `within` is the subspace itself.
/// For `within` = p this is a maximal flat; for a compact subalgebra it is a
/// Cartan subalgebra.
pub fn maximal_abelian_in(
    alg: &MatrixLieAlgebra,
    within: &Subspace,
    rng: &mut ChaCha8Rng,
) -> Subspace {
    let mut generators: Vec<DVector<f64>> = Vec::new();
    loop {
        let commuting = alg.centralizer_in(&generators, within);
        let fresh = if generators.is_empty() {
            commuting
        } else {
            let current = DMatrix::from_columns(
                &generators.iter().map(|g| g.clone()).collect::<Vec<_>>(),
            );
            Subspace {
                frame: linalg::frame_minus(&commuting.frame, &Subspace::from_columns(&current).frame, RANK_TOL),
            }
        };
        if fresh.dim() == 0 {
            break;
        }
        generators.push(random_in(&fresh, rng));
    }
    if generators.is_empty() {
        return Subspace { frame: DMatrix::zeros(alg.dim(), 0) };
    }
    let cols = DMatrix::from_columns(&generators);
    Subspace::from_columns(&cols)
}

/// Center of a subalgebra given by an orthonormal frame.
pub fn center_of(alg: &MatrixLieAlgebra, sub: &Subspace) -> Subspace {
    let gens: Vec<DVector<f64>> = (0..sub.dim()).map(|i| sub.frame.column(i).into_owned()).collect();
    alg.centralizer_in(&gens, sub)
}

/// Derived subalgebra: the span of pairwise brackets of `sub`'s basis.
pub fn derived_of(alg: &MatrixLieAlgebra, sub: &Subspace) -> Subspace {
    let m = sub.dim();
    if m == 0 {
        return Subspace { frame: DMatrix::zeros(alg.dim(), 0) };
    }
    let mut brackets = DMatrix::zeros(alg.dim(), m * (m - 1) / 2);
    let mut c = 0;
    for i in 0..m {
        let ad_i = alg.ad(&sub.frame.column(i).into_owned());
        for j in (i + 1)..m {
            brackets.set_column(c, &(&ad_i * sub.frame.column(j)));
            c += 1;
        }
    }
    Subspace { frame: linalg::column_space_scaled(&brackets, RANK_TOL, 1.0) }
}

/// Builds the full theta-adapted Cartan data and cross-checks every dimension
/// against the catalog record.
pub fn cartan_structure(
    alg: &MatrixLieAlgebra,
    rng: &mut ChaCha8Rng,
) -> Result<CartanStructure, StructureError> {
    let a = maximal_abelian_in(alg, &alg.p_subspace(), rng);
    let expected_flat = alg.record.restricted_rank;
    if a.dim() != expected_flat {
        return Err(StructureError::FlatDimension { expected: expected_flat, found: a.dim() });
    }

    let a_gens: Vec<DVector<f64>> = (0..a.dim()).map(|i| a.frame.column(i).into_owned()).collect();
    let m = alg.centralizer_in(&a_gens, &alg.k_subspace());
    let t = maximal_abelian_in(alg, &m, rng);

    let mut h_cols = DMatrix::zeros(alg.dim(), t.dim() + a.dim());
    h_cols.view_mut((0, 0), (alg.dim(), t.dim())).copy_from(&t.frame);
    h_cols.view_mut((0, t.dim()), (alg.dim(), a.dim())).copy_from(&a.frame);
    let h = Subspace { frame: h_cols };

    if h.dim() != alg.record.rank {
        return Err(StructureError::CartanDimension {
            expected: alg.record.rank,
            found: h.dim(),
        });
    }
    let h_gens: Vec<DVector<f64>> = (0..h.dim()).map(|i| h.frame.column(i).into_owned()).collect();
    let z_h = alg.centralizer(&h_gens);
    if z_h.dim() != h.dim() {
        return Err(StructureError::NotSelfCentralizing { z_dim: z_h.dim(), h_dim: h.dim() });
    }

    Ok(CartanStructure { a, m, t, h })
}

/// A claimed-regular element together with the data that certifies it: the
/// dimension of its centralizer intersected with the measuring subspace.
#[derive(Debug, Clone)]
pub struct RegularCertificate {
    pub element: DVector<f64>,
    pub centralizer_dim: usize,
    pub expected_dim: usize,
}

const REGULAR_RETRIES: usize = 16;

/// Draws random elements of `sample` until z(x) within `measure` has the
/// expected dimension. The expected value is the caller's regularity notion:
/// dim a for p-regularity measured in p, the rank for h-regularity in g.
pub fn regular_element(
    alg: &MatrixLieAlgebra,
    sample: &Subspace,
    measure: &Subspace,
    expected_dim: usize,
    rng: &mut ChaCha8Rng,
) -> Result<RegularCertificate, StructureError> {
    let mut best = usize::MAX;
    for _ in 0..REGULAR_RETRIES {
        let x = random_in(sample, rng);
        let z = alg.centralizer_in(&[x.clone()], measure);
        if z.dim() == expected_dim {
            return Ok(RegularCertificate {
                element: x,
                centralizer_dim: z.dim(),
                expected_dim,
            });
        }
        if z.dim().abs_diff(expected_dim) < best.abs_diff(expected_dim) {
            best = z.dim();
        }
    }
    Err(StructureError::NoRegularElement {
        retries: REGULAR_RETRIES,
        expected: expected_dim,
        best,
    })
}

/// Distinct nonzero restricted roots as vectors over the frame basis of a,
/// with the dimension of each root space.
pub struct RestrictedRoots {
    pub roots: Vec<DVector<f64>>,
    pub multiplicities: Vec<usize>,
    /// Dimension of the zero eigenspace, which must be dim m + dim a.
    pub zero_dim: usize,
}

const ROOT_CLUSTER_TOL: f64 = 1e-7;

/// Joint eigenvalues of ad over the flat `a`. ad(A) is symmetric for A in p,
/// so a generic combination splits g; non-generic draws are detected by the
/// residual and redrawn.
pub fn restricted_roots(
    alg: &MatrixLieAlgebra,
    structure: &CartanStructure,
    rng: &mut ChaCha8Rng,
) -> Result<RestrictedRoots, StructureError> {
    let r = structure.a.dim();
    let d = alg.dim();
    if r == 0 {
        return Ok(RestrictedRoots { roots: vec![], multiplicities: vec![], zero_dim: d });
    }
    let ads: Vec<DMatrix<f64>> = (0..r)
        .map(|i| alg.ad(&structure.a.frame.column(i).into_owned()))
        .collect();

    let mut last_residual = f64::INFINITY;
    'draws: for _ in 0..8 {
        let mut generic = DMatrix::zeros(d, d);
        for ad_i in &ads {
            generic += ad_i * rng.gen_range(0.5..1.5);
        }
        let (_, eigenvectors) = linalg::symmetric_eigen(&generic);
        let mut values: Vec<DVector<f64>> = Vec::with_capacity(d);
        let mut worst: f64 = 0.0;
        for col in 0..d {
            let v = eigenvectors.column(col).into_owned();
            let mut lambda = DVector::zeros(r);
            for (i, ad_i) in ads.iter().enumerate() {
                let image = ad_i * &v;
                lambda[i] = v.dot(&image);
                worst = worst.max((image - &v * lambda[i]).norm());
            }
            values.push(lambda);
        }
        if worst > 1e-6 {
            last_residual = worst;
            continue 'draws;
        }

        // Cluster the eigenvalue vectors.
        let mut reps: Vec<DVector<f64>> = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        for lambda in &values {
            match reps.iter().position(|r| (r - lambda).norm() < ROOT_CLUSTER_TOL) {
                Some(k) => counts[k] += 1,
                None => {
                    reps.push(lambda.clone());
                    counts.push(1);
                }
            }
        }
        let mut roots = Vec::new();
        let mut multiplicities = Vec::new();
        let mut zero_dim = 0;
        for (rep, count) in reps.into_iter().zip(counts) {
            if rep.norm() < ROOT_CLUSTER_TOL {
                zero_dim += count;
            } else {
                roots.push(rep);
                multiplicities.push(count);
            }
        }
        let expected_zero = structure.m.dim() + structure.a.dim();
        if zero_dim != expected_zero {
            return Err(StructureError::RootZeroSpace { zero_dim, expected: expected_zero });
        }
        return Ok(RestrictedRoots { roots, multiplicities, zero_dim });
    }
    Err(StructureError::RootsNotJoint(last_residual))
}

/// Orbit of a point under the group generated by the root reflections,
/// by breadth-first closure. Errors out past `cap` points.
pub fn weyl_orbit(
    roots: &[DVector<f64>],
    start: &DVector<f64>,
    cap: usize,
) -> Result<Vec<DVector<f64>>, StructureError> {
    let tol = 1e-8 * start.norm().max(1.0);
    let mut points: Vec<DVector<f64>> = vec![start.clone()];
    let mut frontier = vec![start.clone()];
    while let Some(x) = frontier.pop() {
        for root in roots {
            let denom = root.norm_squared();
            let reflected = &x - root * (2.0 * root.dot(&x) / denom);
            if !points.iter().any(|p| (p - &reflected).norm() < tol) {
                if points.len() >= cap {
                    return Err(StructureError::OrbitTooLarge(cap));
                }
                points.push(reflected.clone());
                frontier.push(reflected);
            }
        }
    }
    Ok(points)
}

/// Mean of the orbit points; zero for every full reflection-group orbit.
pub fn orbit_mass_center(points: &[DVector<f64>]) -> DVector<f64> {
    let mut sum = DVector::zeros(points[0].len());
    for p in points {
        sum += p;
    }
    sum / points.len() as f64
}

/// Numerical dimension of the center of m, the quantity the Satake arrow
/// count predicts.
pub fn center_dim_of_m_numerical(
    alg: &MatrixLieAlgebra,
    structure: &CartanStructure,
) -> usize {
    center_of(alg, &structure.m).dim()
}

/// Builds algebra and structure together, the common setup path.
pub fn build_with_structure(
    name: &str,
    rng: &mut ChaCha8Rng,
) -> Result<(MatrixLieAlgebra, CartanStructure), StructureError> {
    let record = diagram::resolve(name, &[])
        .map_err(|e| StructureError::Algebra(AlgebraError::BadElement(e.to_string())))?;
    let alg = crate::algebra::build_algebra(&record)?;
    let structure = cartan_structure(&alg, rng)?;
    Ok((alg, structure))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn setup(name: &str) -> (MatrixLieAlgebra, CartanStructure, ChaCha8Rng) {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let (alg, st) = build_with_structure(name, &mut rng).unwrap_or_else(|e| panic!("{name}: {e}"));
        (alg, st, rng)
    }

    #[test]
    fn flats_match_catalog_ranks() {
        for name in [
            "sl(2,R)", "sl(3,R)", "su(1,1)", "su(1,2)", "su(2,2)", "so(2,3)", "so(1,4)",
            "sp(1,1)", "sl(2,H)", "u*(3,H)", "sp(4,R)", "su(3)", "sl(2,C)",
        ] {
            let (alg, st, _) = setup(name);
            assert_eq!(st.a.dim(), alg.record.restricted_rank, "{name}");
            assert_eq!(st.h.dim(), alg.record.rank, "{name}");
        }
    }

    #[test]
    fn centralizer_dimensions_for_known_cases() {
        // m = z_k(a): u(1) for su(1,2); sp(1)+sp(1) for sl(2,H); 0 for split.
        let (_, st, _) = setup("su(1,2)");
        assert_eq!(st.m.dim(), 1);
        let (_, st, _) = setup("sl(2,H)");
        assert_eq!(st.m.dim(), 6);
        let (_, st, _) = setup("so(2,3)");
        assert_eq!(st.m.dim(), 0);
        let (_, st, _) = setup("u*(3,H)");
        assert_eq!(st.m.dim(), 4);
        let (_, st, _) = setup("sl(2,C)");
        assert_eq!(st.m.dim(), 1);
    }

    #[test]
    fn arrow_count_predicts_center_of_m() {
        for name in ["su(1,2)", "su(2,2)", "sl(2,H)", "u*(3,H)", "u*(4,H)", "so(2,3)", "so(2,4)", "sl(2,C)"] {
            let (alg, st, _) = setup(name);
            assert_eq!(
                center_dim_of_m_numerical(&alg, &st),
                alg.record.diagram.arrows.len(),
                "{name}"
            );
        }
    }

    #[test]
    fn compact_form_structure() {
        let (alg, st, _) = setup("su(3)");
        assert_eq!(st.a.dim(), 0);
        assert_eq!(st.m.dim(), alg.dim());
        assert_eq!(st.t.dim(), 2);
        assert_eq!(st.h.dim(), 2);
    }

    #[test]
    fn regular_element_certificates() {
        let (alg, st, mut rng) = setup("so(2,3)");
        // p-regular in a: centralizer inside p is exactly a.
        let cert = regular_element(&alg, &st.a, &alg.p_subspace(), st.a.dim(), &mut rng).unwrap();
        assert_eq!(cert.centralizer_dim, st.a.dim());
        // h-regular: full centralizer is h.
        let cert = regular_element(&alg, &st.h, &alg.full_subspace(), st.h.dim(), &mut rng).unwrap();
        assert_eq!(cert.centralizer_dim, alg.record.rank);
        // Requesting an impossible certificate fails with the best dimension.
        let err = regular_element(&alg, &st.a, &alg.full_subspace(), 0, &mut rng);
        assert!(matches!(err, Err(StructureError::NoRegularElement { .. })));
    }

    #[test]
    fn restricted_root_counts() {
        // Split so(2,3) carries a B2 system: 8 roots, all multiplicity 1.
        let (alg, st, mut rng) = setup("so(2,3)");
        let roots = restricted_roots(&alg, &st, &mut rng).unwrap();
        assert_eq!(roots.roots.len(), 8);
        assert!(roots.multiplicities.iter().all(|m| *m == 1));
        let total: usize = roots.multiplicities.iter().sum();
        assert_eq!(total + roots.zero_dim, alg.dim());

        // su(1,2) is BC1: two root lengths, four roots in all.
        let (alg, st, mut rng) = setup("su(1,2)");
        let roots = restricted_roots(&alg, &st, &mut rng).unwrap();
        assert_eq!(roots.roots.len(), 4);
        let total: usize = roots.multiplicities.iter().sum();
        assert_eq!(total + roots.zero_dim, alg.dim());
    }

    #[test]
    fn root_pairs_come_in_opposites() {
        let (alg, st, mut rng) = setup("su(2,2)");
        let roots = restricted_roots(&alg, &st, &mut rng).unwrap();
        for (i, lambda) in roots.roots.iter().enumerate() {
            let j = roots
                .roots
                .iter()
                .position(|mu| (mu + lambda).norm() < 1e-6)
                .unwrap_or_else(|| panic!("no opposite for root {i}"));
            assert_eq!(roots.multiplicities[i], roots.multiplicities[j]);
        }
    }

    #[test]
    fn b2_weyl_orbit_is_dihedral() {
        // Frozen oracle: the B2 orbit of a generic point is the 8 points
        // (+-x, +-y), (+-y, +-x).
        let roots = vec![
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0]),
            DVector::from_vec(vec![1.0, 1.0]),
            DVector::from_vec(vec![1.0, -1.0]),
        ];
        let start = DVector::from_vec(vec![0.3, 1.1]);
        let orbit = weyl_orbit(&roots, &start, 16).unwrap();
        assert_eq!(orbit.len(), 8);
        for (sx, sy) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            for swapped in [false, true] {
                let p = if swapped {
                    DVector::from_vec(vec![sy * 1.1, sx * 0.3])
                } else {
                    DVector::from_vec(vec![sx * 0.3, sy * 1.1])
                };
                assert!(orbit.iter().any(|q| (q - &p).norm() < 1e-9));
            }
        }
        assert!(orbit_mass_center(&orbit).norm() < 1e-10);
    }

    #[test]
    fn weyl_orbit_cap_triggers() {
        let roots = vec![DVector::from_vec(vec![1.0, 0.0]), DVector::from_vec(vec![0.0, 1.0])];
        let start = DVector::from_vec(vec![0.5, 0.7]);
        assert!(matches!(
            weyl_orbit(&roots, &start, 3),
            Err(StructureError::OrbitTooLarge(3))
        ));
    }

    #[test]
    fn orbit_mass_centers_vanish_for_real_systems() {
        for name in ["so(2,3)", "su(1,2)", "sl(3,R)"] {
            let (alg, st, mut rng) = setup(name);
            let roots = restricted_roots(&alg, &st, &mut rng).unwrap();
            let r = st.a.dim();
            let cap = (1usize << r) * (1..=r).product::<usize>().max(1) * 2;
            let start = DVector::from_fn(r, |i, _| 0.4 + 0.3 * i as f64);
            let orbit = weyl_orbit(&roots.roots, &start, cap).unwrap();
            assert!(
                orbit_mass_center(&orbit).norm() < 1e-10,
                "{name}: mass center {:.3e}",
                orbit_mass_center(&orbit).norm()
            );
        }
    }

    #[test]
    fn derived_subalgebra_of_k() {
        // k = u(2) for su(1,2): derived part su(2) has dimension 3 and the
        // center is one-dimensional.
        let (alg, _, _) = setup("su(1,2)");
        let k = alg.k_subspace();
        assert_eq!(derived_of(&alg, &k).dim(), 3);
        assert_eq!(center_of(&alg, &k).dim(), 1);
    }
}
