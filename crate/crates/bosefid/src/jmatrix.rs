//! The partial-indistinguishability matrix and its normalized form.
//!
//! For identical detectors the `N! x N!` matrix indexed by permutation pairs
//! has only up to `N!` distinct elements, one per relative permutation, so a
//! `JMatrix` stores the map `tau -> J(tau) = Tr(Gamma^(x)N rho P_tau)`
//! indexed by the lexicographic rank of `tau`. The full matrix
//! `J_{s1,s2} = J(s1 s2^{-1})` is materialized only for eigenvalue checks.
//!
//! Trace-normalizing by `N! p_d` yields a density matrix on the auxiliary
//! `N!`-dimensional space. Its expectation in the uniform vector is the
//! symmetric-subspace probability `p_s`, and splitting off that component
//! gives the convex decomposition used by the distance bounds.

use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    enumerate_permutations, factorial, relative_rank_table, young_subgroup, Configuration,
};
use crate::internal_state::{
    permuted_tensor_index, DetectorModel, MixedInternalState, PureProductState,
};
use crate::{C64, CMatrix, Error, Result};

/// Largest particle number for which the full `N! x N!` matrix may be
/// materialized.
pub const MAX_FULL_MATRIX_PARTICLES: usize = 6;

const HERMITICITY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const PS_TOL: f64 = 1e-10;

/// Raw (unnormalized) partial-indistinguishability matrix in relative form.
#[derive(Debug, Clone)]
pub struct JMatrix {
    values: Vec<C64>,
    particle_count: usize,
    input_config: Configuration,
}

impl JMatrix {
    /// J-matrix of a pure product state: `J(tau) = prod_a <phi_{tau(a)}|
    /// Gamma |phi_a>`.
    ///
    /// A plain product state is declared with one particle per input mode;
    /// use [`MixedInternalState::young_projected_product`] and
    /// [`JMatrix::from_mixed`] when input modes are repeated.
    pub fn from_pure(states: &PureProductState, det: &DetectorModel) -> Result<Self> {
        if det.internal_dim() != states.internal_dim() {
            return Err(Error::Dimension(format!(
                "detector dimension {} does not match internal dimension {}",
                det.internal_dim(),
                states.internal_dim()
            )));
        }
        let n = states.particle_count();
        let perms = enumerate_permutations(n)?;
        let overlaps = CMatrix::from_fn(n, n, |a, b| {
            det.weighted_overlap(&states.vectors()[a], &states.vectors()[b])
        });
        let values = perms
            .iter()
            .map(|tau| (0..n).map(|a| overlaps[(tau.apply(a), a)]).product())
            .collect();
        Ok(JMatrix {
            values,
            particle_count: n,
            input_config: Configuration::new(vec![1; n]),
        })
    }

    /// J-matrix of a mixed internal state via the trace formula
    /// `J(tau) = Tr(Gamma^(x)N rho P_tau)`.
    pub fn from_mixed(rho: &MixedInternalState, det: &DetectorModel) -> Result<Self> {
        if det.internal_dim() != rho.internal_dim() {
            return Err(Error::Dimension(format!(
                "detector dimension {} does not match internal dimension {}",
                det.internal_dim(),
                rho.internal_dim()
            )));
        }
        let n = rho.particle_count();
        let d = rho.internal_dim();
        let dim = rho.density().nrows();
        let perms = enumerate_permutations(n)?;
        let weights: Vec<f64> = (0..dim).map(|a| det.tensor_weight(a, n)).collect();
        let density = rho.density();
        let values = perms
            .iter()
            .map(|tau| {
                (0..dim)
                    .map(|a| weights[a] * density[(a, permuted_tensor_index(tau, a, d, n))])
                    .sum()
            })
            .collect();
        Ok(JMatrix {
            values,
            particle_count: n,
            input_config: rho.input_config().clone(),
        })
    }

    pub fn particle_count(&self) -> usize {
        self.particle_count
    }

    pub fn input_config(&self) -> &Configuration {
        &self.input_config
    }

    /// Value at the permutation of the given lexicographic rank.
    pub fn value(&self, rank: usize) -> C64 {
        self.values[rank]
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Detection probability `p_d = tr J / N! = J(identity)`.
    ///
    /// Errors if the state cannot be detected at all.
    pub fn detection_probability(&self) -> Result<f64> {
        let id = self.values[0];
        if id.im.abs() > TRACE_TOL {
            return Err(Error::Consistency(format!(
                "J(identity) has imaginary part {:.3e}",
                id.im
            )));
        }
        if id.re <= 0.0 {
            return Err(Error::DegenerateDetection(format!(
                "detection probability {} is not positive",
                id.re
            )));
        }
        Ok(id.re)
    }

    /// Trace-normalize into a density matrix on the auxiliary space.
    pub fn normalize(&self) -> Result<NormalizedJMatrix> {
        let p_d = self.detection_probability()?;
        let scale = C64::new(1.0 / (factorial(self.particle_count) as f64 * p_d), 0.0);
        let values: Vec<C64> = self.values.iter().map(|v| v * scale).collect();
        NormalizedJMatrix::from_values(values, self.input_config.clone(), p_d)
    }

    /// The full `N! x N!` matrix `J_{s1,s2} = J(s1 s2^{-1})`.
    pub fn full_matrix(&self) -> Result<CMatrix> {
        full_matrix_from_values(&self.values, self.particle_count)
    }

    /// Largest deviation from the two-sided Young invariance
    /// `J(pi tau pi') = J(tau)` over the subgroup of `config`.
    pub fn young_invariance_defect(&self, config: &Configuration) -> Result<f64> {
        young_invariance_defect(&self.values, self.particle_count, config)
    }
}

fn full_matrix_from_values(values: &[C64], particles: usize) -> Result<CMatrix> {
    if particles > MAX_FULL_MATRIX_PARTICLES {
        return Err(Error::SizeLimit(format!(
            "full matrix limited to N <= {MAX_FULL_MATRIX_PARTICLES}, got {particles}"
        )));
    }
    let total = factorial(particles) as usize;
    let table = relative_rank_table(particles)?;
    Ok(CMatrix::from_fn(total, total, |r1, r2| {
        values[table[r1 * total + r2] as usize]
    }))
}

fn young_invariance_defect(
    values: &[C64],
    particles: usize,
    config: &Configuration,
) -> Result<f64> {
    if config.total() != particles {
        return Err(Error::Dimension(format!(
            "configuration holds {} particles, J-matrix has {particles}",
            config.total()
        )));
    }
    let group = young_subgroup(config)?;
    if group.len() == 1 {
        return Ok(0.0);
    }
    let perms = enumerate_permutations(particles)?;
    let mut defect: f64 = 0.0;
    for (rank, tau) in perms.iter().enumerate() {
        for pi in &group {
            let left = values[pi.compose(tau).rank()];
            let right = values[tau.compose(pi).rank()];
            defect = defect.max((left - values[rank]).norm());
            defect = defect.max((right - values[rank]).norm());
        }
    }
    Ok(defect)
}

/// Trace-normalized J-matrix: a density matrix on the `N!`-dimensional
/// auxiliary space, together with the detection probability that normalized
/// it and the symmetric-subspace probability it carries.
#[derive(Debug, Clone)]
pub struct NormalizedJMatrix {
    values: Vec<C64>,
    particle_count: usize,
    input_config: Configuration,
    p_d: f64,
    p_s: f64,
}

impl NormalizedJMatrix {
    /// Wrap relative-form values, validating trace normalization and
    /// Hermiticity, and computing `p_s = sum_tau J(tau)`.
    pub fn from_values(values: Vec<C64>, input_config: Configuration, p_d: f64) -> Result<Self> {
        let particles = input_config.total();
        let total = factorial(particles) as usize;
        if values.len() != total {
            return Err(Error::Dimension(format!(
                "expected {total} values for N = {particles}, got {}",
                values.len()
            )));
        }
        if !(p_d > 0.0 && p_d <= 1.0 + TRACE_TOL) {
            return Err(Error::Validation(format!(
                "detection probability {p_d} outside (0, 1]"
            )));
        }
        let diag = values[0] * C64::new(total as f64, 0.0);
        if (diag - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::Validation(format!(
                "values are not trace-normalized: N! J(identity) = {diag}"
            )));
        }
        // Hermiticity in relative form: J(tau^{-1}) = conj(J(tau))
        let perms = enumerate_permutations(particles)?;
        for (rank, tau) in perms.iter().enumerate() {
            let mirrored = values[tau.inverse().rank()];
            if (mirrored - values[rank].conj()).norm() > HERMITICITY_TOL {
                return Err(Error::Validation(format!(
                    "values violate Hermiticity at permutation rank {rank}"
                )));
            }
        }
        let sum: C64 = values.iter().sum();
        if sum.im.abs() > PS_TOL {
            return Err(Error::Consistency(format!(
                "p_s has imaginary part {:.3e}",
                sum.im
            )));
        }
        if sum.re < -PS_TOL || sum.re > 1.0 + PS_TOL {
            return Err(Error::Consistency(format!(
                "p_s = {} outside [0, 1]",
                sum.re
            )));
        }
        let p_s = sum.re.clamp(0.0, 1.0);
        Ok(NormalizedJMatrix {
            values,
            particle_count: particles,
            input_config,
            p_d,
            p_s,
        })
    }

    pub fn particle_count(&self) -> usize {
        self.particle_count
    }

    pub fn input_config(&self) -> &Configuration {
        &self.input_config
    }

    pub fn value(&self, rank: usize) -> C64 {
        self.values[rank]
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Postselection normalizer: probability that all `N` bosons are
    /// detected.
    pub fn detection_probability(&self) -> f64 {
        self.p_d
    }

    /// Postselected probability of a symmetric internal state. `1 - p_s`
    /// bounds the trace distance to the ideal bosonic network.
    pub fn symmetric_probability(&self) -> f64 {
        self.p_s
    }

    /// Split into the ideal component and the orthogonal remainder:
    /// `J = p_s |s><s| + (1 - p_s) J_perp` with `J_perp |s> = 0`.
    ///
    /// A fully symmetric input (`p_s` numerically 1) has no orthogonal part.
    pub fn decompose(&self) -> Result<Decomposition> {
        if self.p_s >= 1.0 - 1e-14 {
            return Ok(Decomposition { p_s: self.p_s, orthogonal: None });
        }
        let total = factorial(self.particle_count) as f64;
        let uniform = C64::new(self.p_s / total, 0.0);
        let rescale = C64::new(1.0 / (1.0 - self.p_s), 0.0);
        let values: Vec<C64> = self.values.iter().map(|v| (v - uniform) * rescale).collect();
        let orthogonal = NormalizedJMatrix::from_values(values, self.input_config.clone(), 1.0)?;
        Ok(Decomposition { p_s: self.p_s, orthogonal: Some(orthogonal) })
    }

    /// The full `N! x N!` density matrix.
    pub fn full_matrix(&self) -> Result<CMatrix> {
        full_matrix_from_values(&self.values, self.particle_count)
    }

    /// See [`JMatrix::young_invariance_defect`].
    pub fn young_invariance_defect(&self, config: &Configuration) -> Result<f64> {
        young_invariance_defect(&self.values, self.particle_count, config)
    }

    /// Young-invariance defect of raw relative-form values.
    pub(crate) fn young_defect_of_values(
        values: &[C64],
        particles: usize,
        config: &Configuration,
    ) -> Result<f64> {
        young_invariance_defect(values, particles, config)
    }

    /// Serializable dump keyed by permutation rank.
    pub fn dump(&self) -> JMatrixDump {
        JMatrixDump {
            schema_version: 1,
            particle_count: self.particle_count,
            input_config: self.input_config.occupations().to_vec(),
            p_d: self.p_d,
            p_s: self.p_s,
            values: self.values.iter().map(|v| [v.re, v.im]).collect(),
        }
    }
}

/// Convex split of a normalized J-matrix.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub p_s: f64,
    /// `None` when the input is fully symmetric.
    pub orthogonal: Option<NormalizedJMatrix>,
}

/// JSON-facing form of a normalized J-matrix; `values[rank]` is
/// `[re, im]` of the entry at that permutation rank.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JMatrixDump {
    pub schema_version: u32,
    pub particle_count: usize,
    pub input_config: Vec<usize>,
    pub p_d: f64,
    pub p_s: f64,
    pub values: Vec<[f64; 2]>,
}

/// The maximally mixed J-matrix allowed by the Young symmetry of `config`:
/// `J(tau) = 1/N!` exactly on the subgroup, zero elsewhere. Feeding it to
/// the measurement form reproduces the classical (fully distinguishable)
/// distribution.
pub fn classical_jmatrix(config: &Configuration) -> Result<NormalizedJMatrix> {
    let n = config.total();
    let total = factorial(n) as f64;
    let slots = config.slot_modes();
    let values = enumerate_permutations(n)?
        .iter()
        .map(|tau| {
            let in_subgroup = (0..n).all(|a| slots[tau.apply(a)] == slots[a]);
            if in_subgroup {
                C64::new(1.0 / total, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    NormalizedJMatrix::from_values(values, config.clone(), 1.0)
}

/// The projector onto the span of the measurement vectors: the `N! x N!`
/// matrix with `P_{s1,s2} = 1/mu(n)` when `s2 s1^{-1}` lies in the Young
/// subgroup of `config` and zero otherwise. Idempotent with trace
/// `N!/mu(n)`; acts as the identity on every J-matrix of that symmetry.
pub fn projector_matrix(config: &Configuration) -> Result<nalgebra::DMatrix<f64>> {
    let n = config.total();
    if n > MAX_FULL_MATRIX_PARTICLES {
        return Err(Error::SizeLimit(format!(
            "projector limited to N <= {MAX_FULL_MATRIX_PARTICLES}, got {n}"
        )));
    }
    let total = factorial(n) as usize;
    let slots = config.slot_modes();
    let perms = enumerate_permutations(n)?;
    let weight = 1.0 / config.multiplicity() as f64;
    Ok(nalgebra::DMatrix::from_fn(total, total, |r1, r2| {
        let rel = perms[r2].compose(&perms[r1].inverse());
        let in_subgroup = (0..n).all(|a| slots[rel.apply(a)] == slots[a]);
        if in_subgroup {
            weight
        } else {
            0.0
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::internal_state::symmetrize_young;
    use crate::linalg::{hermitian_trace_norm, min_hermitian_eigenvalue};
    use crate::permanent::permanent_ryser;
    use crate::CVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn basis(d: usize, j: usize) -> CVector {
        let mut v = CVector::zeros(d);
        v[j] = c(1.0, 0.0);
        v
    }

    fn random_unit(d: usize, rng: &mut ChaCha12Rng) -> CVector {
        let v = CVector::from_fn(d, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let norm = v.norm();
        v / c(norm, 0.0)
    }

    fn random_pure(n: usize, d: usize, rng: &mut ChaCha12Rng) -> PureProductState {
        PureProductState::new((0..n).map(|_| random_unit(d, rng)).collect()).unwrap()
    }

    #[test]
    fn identical_states_have_unit_jmatrix() {
        let states = PureProductState::identical_basis(3, 2, 0).unwrap();
        let j = JMatrix::from_pure(&states, &DetectorModel::ideal(2)).unwrap();
        for v in j.values() {
            assert!((v - c(1.0, 0.0)).norm() < 1e-14);
        }
        let jn = j.normalize().unwrap();
        assert!((jn.detection_probability() - 1.0).abs() < 1e-14);
        assert!((jn.symmetric_probability() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn orthogonal_states_have_delta_jmatrix() {
        let states = PureProductState::new(vec![basis(3, 0), basis(3, 1), basis(3, 2)]).unwrap();
        let j = JMatrix::from_pure(&states, &DetectorModel::ideal(3)).unwrap();
        assert!((j.value(0) - c(1.0, 0.0)).norm() < 1e-14);
        for rank in 1..6 {
            assert!(j.value(rank).norm() < 1e-14);
        }
        let jn = j.normalize().unwrap();
        assert!((jn.symmetric_probability() - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn two_particle_overlap() {
        let theta = 0.4f64;
        let states = PureProductState::new(vec![
            basis(2, 0),
            CVector::from_vec(vec![c(theta.cos(), 0.0), c(theta.sin(), 0.0)]),
        ])
        .unwrap();
        let j = JMatrix::from_pure(&states, &DetectorModel::ideal(2)).unwrap();
        assert!((j.value(0) - c(1.0, 0.0)).norm() < 1e-14);
        let c2 = theta.cos() * theta.cos();
        assert!((j.value(1) - c(c2, 0.0)).norm() < 1e-14);
        // p_s = per(G)/2! = (1 + |c|^2)/2
        let jn = j.normalize().unwrap();
        assert!((jn.symmetric_probability() - (1.0 + c2) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn mixed_path_reproduces_pure_path() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for _ in 0..5 {
            let states = random_pure(3, 2, &mut rng);
            let det = DetectorModel::new(vec![0.9, 0.7]).unwrap();
            let j_pure = JMatrix::from_pure(&states, &det).unwrap();
            let rho = MixedInternalState::product_density(&states).unwrap();
            let j_mixed = JMatrix::from_mixed(&rho, &det).unwrap();
            for rank in 0..6 {
                assert!(
                    (j_pure.value(rank) - j_mixed.value(rank)).norm() < 1e-12,
                    "rank {rank}: {} vs {}",
                    j_pure.value(rank),
                    j_mixed.value(rank)
                );
            }
        }
    }

    #[test]
    fn maximally_mixed_two_qubits() {
        let rho = MixedInternalState::new(
            CMatrix::identity(4, 4) * c(0.25, 0.0),
            2,
            Configuration::new(vec![1, 1]),
        )
        .unwrap();
        let j = JMatrix::from_mixed(&rho, &DetectorModel::ideal(2)).unwrap();
        assert!((j.value(0) - c(1.0, 0.0)).norm() < 1e-14);
        // Tr(P_swap) = d = 2 on the d^2-dimensional space
        assert!((j.value(1) - c(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn fully_symmetric_mixed_state_has_constant_jmatrix() {
        // (|01> + |10>)/sqrt(2) is invariant under the particle swap
        let mut v = CVector::zeros(4);
        v[1] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        v[2] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let rho = MixedInternalState::new(
            &v * v.adjoint(),
            2,
            Configuration::new(vec![1, 1]),
        )
        .unwrap();
        let j = JMatrix::from_mixed(&rho, &DetectorModel::ideal(2)).unwrap();
        assert!((j.value(0) - j.value(1)).norm() < 1e-14);
    }

    #[test]
    fn detection_probability_examples() {
        let mut rng = ChaCha12Rng::seed_from_u64(29);
        let states = random_pure(2, 2, &mut rng);
        let gamma = 0.8;
        let det = DetectorModel::uniform(2, gamma).unwrap();
        let j = JMatrix::from_pure(&states, &det).unwrap();
        assert!((j.detection_probability().unwrap() - gamma * gamma).abs() < 1e-13);

        // cross-check against an independently assembled Gamma^(x)N trace
        let rho = MixedInternalState::product_density(&states).unwrap();
        let j_mixed = JMatrix::from_mixed(&rho, &det).unwrap();
        let gamma_matrix = CMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                c(det.sensitivities()[i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let big_gamma = gamma_matrix.kronecker(&gamma_matrix);
        let direct = (big_gamma * rho.density()).trace();
        assert!((j_mixed.detection_probability().unwrap() - direct.re).abs() < 1e-13);
    }

    #[test]
    fn degenerate_detection_is_an_error() {
        let det = DetectorModel::new(vec![0.0, 1.0]).unwrap();
        let states = PureProductState::new(vec![basis(2, 0), basis(2, 1)]).unwrap();
        let j = JMatrix::from_pure(&states, &det).unwrap();
        assert!(matches!(
            j.detection_probability(),
            Err(Error::DegenerateDetection(_))
        ));
        assert!(j.normalize().is_err());
    }

    #[test]
    fn pure_ps_equals_gram_permanent() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        for _ in 0..20 {
            let states = random_pure(4, 3, &mut rng);
            let det = DetectorModel::new(vec![1.0, 0.85, 0.6]).unwrap();
            let jn = JMatrix::from_pure(&states, &det).unwrap().normalize().unwrap();
            let g = crate::internal_state::gram_matrix(&states, &det).unwrap();
            let per = permanent_ryser(g.entries()).unwrap();
            let expected = per.re / factorial(4) as f64;
            assert!(per.im.abs() < 1e-12);
            assert!(
                (jn.symmetric_probability() - expected).abs() < 1e-12,
                "p_s {} vs per(G)/N! {}",
                jn.symmetric_probability(),
                expected
            );
        }
    }

    #[test]
    fn hermiticity_and_psd_of_random_instances() {
        let mut rng = ChaCha12Rng::seed_from_u64(37);
        let perms = enumerate_permutations(4).unwrap();
        for _ in 0..10 {
            let states = random_pure(4, 2, &mut rng);
            let det = DetectorModel::new(vec![0.95, 0.8]).unwrap();
            let j = JMatrix::from_pure(&states, &det).unwrap();
            for (rank, tau) in perms.iter().enumerate() {
                let mirrored = j.value(tau.inverse().rank());
                assert!((mirrored - j.value(rank).conj()).norm() < 1e-13);
                assert!(j.value(rank).norm() <= j.value(0).norm() + 1e-12);
            }
            let full = j.full_matrix().unwrap();
            assert!(min_hermitian_eigenvalue(&full) > -1e-10);
        }
    }

    #[test]
    fn decompose_reconstructs_and_annihilates_uniform_vector() {
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        let states = random_pure(3, 2, &mut rng);
        let jn = JMatrix::from_pure(&states, &DetectorModel::ideal(2))
            .unwrap()
            .normalize()
            .unwrap();
        let split = jn.decompose().unwrap();
        let perp = split.orthogonal.expect("partially distinguishable input");
        let total = factorial(3) as f64;
        // row sums vanish: sum_tau J_perp(tau) = 0
        let row_sum: C64 = perp.values().iter().sum();
        assert!(row_sum.norm() < 1e-12);
        // reconstruction
        for rank in 0..6 {
            let rebuilt = c(split.p_s / total, 0.0)
                + c(1.0 - split.p_s, 0.0) * perp.value(rank);
            assert!((rebuilt - jn.value(rank)).norm() < 1e-14);
        }
    }

    #[test]
    fn decompose_orthogonal_two_particle_case() {
        let states = PureProductState::new(vec![basis(2, 0), basis(2, 1)]).unwrap();
        let jn = JMatrix::from_pure(&states, &DetectorModel::ideal(2))
            .unwrap()
            .normalize()
            .unwrap();
        assert!((jn.symmetric_probability() - 0.5).abs() < 1e-14);
        let perp = jn.decompose().unwrap().orthogonal.unwrap();
        // (J - (1/2)(1/2) ones) / (1/2): identity -> 1/2, swap -> -1/2
        assert!((perp.value(0) - c(0.5, 0.0)).norm() < 1e-14);
        assert!((perp.value(1) - c(-0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn decompose_of_symmetric_input_has_no_orthogonal_part() {
        let states = PureProductState::identical_basis(2, 2, 0).unwrap();
        let jn = JMatrix::from_pure(&states, &DetectorModel::ideal(2))
            .unwrap()
            .normalize()
            .unwrap();
        let split = jn.decompose().unwrap();
        assert!(split.orthogonal.is_none());
        assert!((split.p_s - 1.0).abs() < 1e-14);
    }

    #[test]
    fn projector_examples() {
        // trivial Young subgroup -> identity
        let p = projector_matrix(&Configuration::new(vec![1, 1, 1])).unwrap();
        assert!((p.clone() - nalgebra::DMatrix::<f64>::identity(6, 6)).amax() < 1e-15);
        assert!((p.trace() - 6.0).abs() < 1e-12);

        // two particles in one mode -> (1/2) ones, trace 1
        let p2 = projector_matrix(&Configuration::new(vec![2])).unwrap();
        assert!((p2.clone() - nalgebra::DMatrix::from_element(2, 2, 0.5)).amax() < 1e-15);
        assert!((p2.trace() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn projector_is_idempotent_with_expected_trace() {
        for occ in [vec![2, 1], vec![2, 2], vec![3, 1], vec![1, 1, 2]] {
            let config = Configuration::new(occ);
            let p = projector_matrix(&config).unwrap();
            assert!(((&p * &p) - &p).amax() < 1e-14);
            let expected_trace =
                factorial(config.total()) as f64 / config.multiplicity() as f64;
            assert!((p.trace() - expected_trace).abs() < 1e-10);
        }
    }

    #[test]
    fn projector_acts_as_identity_on_symmetrized_jmatrices() {
        let mut rng = ChaCha12Rng::seed_from_u64(43);
        let config = Configuration::new(vec![2, 1]);
        let v = random_unit(8, &mut rng);
        let rho_raw = symmetrize_young(&(&v * v.adjoint()), 2, &config).unwrap();
        let rho = MixedInternalState::new(rho_raw, 2, config.clone()).unwrap();
        let jn = JMatrix::from_mixed(&rho, &DetectorModel::ideal(2))
            .unwrap()
            .normalize()
            .unwrap();
        assert!(jn.young_invariance_defect(&config).unwrap() < 1e-12);

        let p = projector_matrix(&config).unwrap().map(|x| c(x, 0.0));
        let full = jn.full_matrix().unwrap();
        assert!((&p * &full - &full).amax() < 1e-12);
        assert!((&full * &p - &full).amax() < 1e-12);
    }

    #[test]
    fn trace_distance_identity_in_auxiliary_space() {
        let mut rng = ChaCha12Rng::seed_from_u64(47);
        for n in 2..=4 {
            let states = random_pure(n, 2, &mut rng);
            let jn = JMatrix::from_pure(&states, &DetectorModel::ideal(2))
                .unwrap()
                .normalize()
                .unwrap();
            let total = factorial(n) as usize;
            let ideal = CMatrix::from_element(total, total, c(1.0 / total as f64, 0.0));
            let diff = ideal - jn.full_matrix().unwrap();
            let distance = 0.5 * hermitian_trace_norm(&diff);
            assert!(
                (distance - (1.0 - jn.symmetric_probability())).abs() < 1e-10,
                "N={n}: {} vs {}",
                distance,
                1.0 - jn.symmetric_probability()
            );
        }
    }

    #[test]
    fn classical_jmatrix_matches_orthogonal_states() {
        let config = Configuration::new(vec![1, 1, 1]);
        let cl = classical_jmatrix(&config).unwrap();
        let states = PureProductState::new(vec![basis(3, 0), basis(3, 1), basis(3, 2)]).unwrap();
        let jn = JMatrix::from_pure(&states, &DetectorModel::ideal(3))
            .unwrap()
            .normalize()
            .unwrap();
        for rank in 0..6 {
            assert!((cl.value(rank) - jn.value(rank)).norm() < 1e-14);
        }
    }

    #[test]
    fn dump_roundtrips_through_json() {
        let states = PureProductState::identical_basis(2, 2, 0).unwrap();
        let jn = JMatrix::from_pure(&states, &DetectorModel::ideal(2))
            .unwrap()
            .normalize()
            .unwrap();
        let dump = jn.dump();
        let text = serde_json::to_string(&dump).unwrap();
        let back: JMatrixDump = serde_json::from_str(&text).unwrap();
        assert_eq!(back.particle_count, 2);
        assert_eq!(back.values, dump.values);
        assert_eq!(back.p_s, dump.p_s);
    }
}
