//! Exact output probability distributions and the trace distance between
//! them.
//!
//! Two independent routes to the general (partially indistinguishable)
//! probability are shipped on purpose:
//!
//! - [`prob_measurement_form`]: the default path. The J-matrix acts as a
//!   density matrix on the auxiliary `N!`-dimensional space and each output
//!   configuration corresponds to `N!/mu(m)` measurement vectors built from
//!   products of network amplitudes.
//! - [`prob_double_sum`]: the raw double sum over permutation pairs, used as
//!   the cross-validating oracle.
//!
//! The ideal bosonic and classical (fully distinguishable) distributions
//! come directly from permanents of the expanded network submatrix.

use rayon::prelude::*;

use crate::combinatorics::{
    enumerate_output_configurations, factorial, relative_rank_table, Configuration, Permutation,
};
use crate::jmatrix::{JMatrix, NormalizedJMatrix};
use crate::linalg::require_unitary;
use crate::permanent::{expanded_submatrix, permanent_ryser};
use crate::{C64, CMatrix, Error, Result};

/// Particle cap for full-distribution computations.
pub const MAX_DISTRIBUTION_PARTICLES: usize = 6;

/// Particle cap for the double-sum oracle (`(N!)^2` terms per output).
pub const MAX_DOUBLE_SUM_PARTICLES: usize = 5;

const UNITARITY_TOL: f64 = 1e-10;
const YOUNG_TOL: f64 = 1e-10;
const NEGATIVITY_TOL: f64 = 1e-12;
const NORMALIZATION_TOL: f64 = 1e-10;

/// A probability distribution over output configurations of fixed mode and
/// particle count, in the deterministic enumeration order of
/// [`enumerate_output_configurations`].
#[derive(Debug, Clone)]
pub struct Distribution {
    configs: Vec<Configuration>,
    probs: Vec<f64>,
    mode_count: usize,
    particle_count: usize,
}

impl Distribution {
    fn from_parts(
        configs: Vec<Configuration>,
        probs: Vec<f64>,
        mode_count: usize,
        particle_count: usize,
    ) -> Self {
        debug_assert_eq!(configs.len(), probs.len());
        Distribution { configs, probs, mode_count, particle_count }
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn particle_count(&self) -> usize {
        self.particle_count
    }

    pub fn configurations(&self) -> &[Configuration] {
        &self.configs
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of one configuration, `None` if it is not in the support
    /// shape (wrong mode or particle count).
    pub fn probability(&self, config: &Configuration) -> Option<f64> {
        self.configs
            .iter()
            .position(|c| c == config)
            .map(|i| self.probs[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Configuration, f64)> {
        self.configs.iter().zip(self.probs.iter().copied())
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// `D(p, q) = (1/2) sum_m |p(m) - q(m)|`, in `[0, 1]` for normalized inputs.
pub fn trace_distance(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.mode_count != q.mode_count || p.particle_count != q.particle_count {
        return Err(Error::Dimension(format!(
            "distributions over different supports: ({}, {}) vs ({}, {})",
            p.mode_count, p.particle_count, q.mode_count, q.particle_count
        )));
    }
    debug_assert_eq!(p.configs, q.configs);
    Ok(0.5
        * p.probs
            .iter()
            .zip(&q.probs)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}

fn validate_network(u: &CMatrix, input: &Configuration, cap: usize) -> Result<usize> {
    require_unitary(u, UNITARITY_TOL)?;
    let modes = u.nrows();
    if input.mode_count() != modes {
        return Err(Error::Dimension(format!(
            "input configuration has {} modes, network has {modes}",
            input.mode_count()
        )));
    }
    let n = input.total();
    if n == 0 || n > cap {
        return Err(Error::SizeLimit(format!(
            "particle number {n} outside 1..={cap}"
        )));
    }
    Ok(n)
}

fn clamp_probability(p: f64, context: &str) -> Result<f64> {
    if p < -NEGATIVITY_TOL {
        return Err(Error::Consistency(format!(
            "{context} produced probability {p:.3e} below -{NEGATIVITY_TOL:.0e}"
        )));
    }
    Ok(p.max(0.0))
}

/// All distinct output-index tuples realizing the occupation `m`, i.e. the
/// `N!/mu(m)` distinct permutations of its nondecreasing slot-mode multiset,
/// in lexicographic order.
fn output_tuples(m: &Configuration) -> Vec<Vec<usize>> {
    let mut tuple = m.slot_modes();
    let n = tuple.len();
    let mut out = Vec::new();
    loop {
        out.push(tuple.clone());
        // next multiset permutation
        let Some(pivot) = (0..n.saturating_sub(1)).rev().find(|&i| tuple[i] < tuple[i + 1]) else {
            break;
        };
        let swap_with = (pivot + 1..n).rev().find(|&j| tuple[j] > tuple[pivot]).unwrap();
        tuple.swap(pivot, swap_with);
        tuple[pivot + 1..].reverse();
    }
    out
}

/// The measurement vector of output tuple `l`: entries
/// `<sigma|Z_l> = mu(n)^{-1/2} prod_a U[k_{sigma(a)}, l_a]` indexed by
/// permutation rank.
pub struct AmplitudeVector {
    pub entries: Vec<C64>,
    pub output_modes: Vec<usize>,
}

/// Build the measurement vector for an explicit output-mode tuple.
pub fn amplitude_vector(
    u: &CMatrix,
    input: &Configuration,
    output_modes: &[usize],
) -> Result<AmplitudeVector> {
    let n = validate_network(u, input, MAX_DISTRIBUTION_PARTICLES)?;
    if output_modes.len() != n {
        return Err(Error::Dimension(format!(
            "output tuple holds {} modes for {n} particles",
            output_modes.len()
        )));
    }
    if output_modes.iter().any(|&l| l >= u.nrows()) {
        return Err(Error::Dimension("output mode index out of range".into()));
    }
    let perms = crate::combinatorics::enumerate_permutations(n)?;
    let slots = input.slot_modes();
    let entries = z_entries(u, &slots, output_modes, &perms, input.multiplicity());
    Ok(AmplitudeVector { entries, output_modes: output_modes.to_vec() })
}

fn z_entries(
    u: &CMatrix,
    slots: &[usize],
    l: &[usize],
    perms: &[Permutation],
    multiplicity: u64,
) -> Vec<C64> {
    let scale = C64::new(1.0 / (multiplicity as f64).sqrt(), 0.0);
    perms
        .iter()
        .map(|sigma| {
            let mut product = scale;
            for (alpha, &mode) in l.iter().enumerate() {
                product *= u[(slots[sigma.apply(alpha)], mode)];
            }
            product
        })
        .collect()
}

fn require_young_compatible(values: &[C64], input: &Configuration) -> Result<()> {
    if input.multiplicity() == 1 {
        return Ok(());
    }
    let n = input.total();
    let defect = crate::jmatrix::NormalizedJMatrix::young_defect_of_values(values, n, input)?;
    if defect > YOUNG_TOL {
        return Err(Error::Validation(format!(
            "J-matrix violates the Young symmetry of the input configuration (defect {defect:.3e})"
        )));
    }
    Ok(())
}

/// Postselected probability of output configuration `m` in measurement form:
/// the quadratic form of the normalized J-matrix summed over the
/// `N!/mu(m)` output tuples of `m`.
pub fn prob_measurement_form(
    u: &CMatrix,
    jn: &NormalizedJMatrix,
    input: &Configuration,
    output: &Configuration,
) -> Result<f64> {
    let n = validate_network(u, input, MAX_DISTRIBUTION_PARTICLES)?;
    check_shapes(jn.particle_count(), n, input, output, u.nrows())?;
    require_young_compatible(jn.values(), input)?;
    let perms = crate::combinatorics::enumerate_permutations(n)?;
    let table = relative_rank_table(n)?;
    Ok(measurement_prob_inner(u, jn.values(), input, output, &perms, &table)?)
}

fn check_shapes(
    j_particles: usize,
    n: usize,
    input: &Configuration,
    output: &Configuration,
    modes: usize,
) -> Result<()> {
    if j_particles != n {
        return Err(Error::Dimension(format!(
            "J-matrix describes {j_particles} particles, input configuration {n}"
        )));
    }
    if output.mode_count() != modes {
        return Err(Error::Dimension(format!(
            "output configuration has {} modes, network has {modes}",
            output.mode_count()
        )));
    }
    if output.total() != n {
        return Err(Error::Dimension(format!(
            "output configuration holds {} particles, input {n}",
            output.total()
        )));
    }
    Ok(())
}

fn measurement_prob_inner(
    u: &CMatrix,
    jvalues: &[C64],
    input: &Configuration,
    output: &Configuration,
    perms: &[Permutation],
    table: &[u32],
) -> Result<f64> {
    let total = perms.len();
    let slots = input.slot_modes();
    let mu = input.multiplicity();
    let mut acc = C64::new(0.0, 0.0);
    for tuple in output_tuples(output) {
        let z = z_entries(u, &slots, &tuple, perms, mu);
        let mut quad = C64::new(0.0, 0.0);
        for r1 in 0..total {
            let z1 = z[r1].conj();
            let row = &table[r1 * total..(r1 + 1) * total];
            for r2 in 0..total {
                quad += z1 * jvalues[row[r2] as usize] * z[r2];
            }
        }
        acc += quad;
    }
    if acc.im.abs() > 1e-10 {
        return Err(Error::Consistency(format!(
            "probability of {output} has imaginary part {:.3e}",
            acc.im
        )));
    }
    clamp_probability(acc.re, "measurement form")
}

/// Raw (non-postselected) probability of `m` by the double sum over
/// permutation pairs, evaluated on one representative output tuple.
/// Dividing by `p_d` reproduces [`prob_measurement_form`].
pub fn prob_double_sum(
    u: &CMatrix,
    j: &JMatrix,
    input: &Configuration,
    output: &Configuration,
) -> Result<f64> {
    let n = validate_network(u, input, MAX_DOUBLE_SUM_PARTICLES)?;
    check_shapes(j.particle_count(), n, input, output, u.nrows())?;
    require_young_compatible(j.values(), input)?;
    let perms = crate::combinatorics::enumerate_permutations(n)?;
    let table = relative_rank_table(n)?;
    let slots = input.slot_modes();
    let l = output.slot_modes();
    let total = perms.len();
    // representative tuple without the mu(n)^{-1/2} scale of the Z vectors
    let products: Vec<C64> = perms
        .iter()
        .map(|sigma| {
            let mut product = C64::new(1.0, 0.0);
            for (alpha, &mode) in l.iter().enumerate() {
                product *= u[(slots[sigma.apply(alpha)], mode)];
            }
            product
        })
        .collect();
    let mut acc = C64::new(0.0, 0.0);
    for r1 in 0..total {
        let left = products[r1].conj();
        let row = &table[r1 * total..(r1 + 1) * total];
        for r2 in 0..total {
            acc += j.values()[row[r2] as usize] * left * products[r2];
        }
    }
    let scale = 1.0 / (output.multiplicity() as f64 * input.multiplicity() as f64);
    let raw = acc * C64::new(scale, 0.0);
    if raw.im.abs() > 1e-10 {
        return Err(Error::Consistency(format!(
            "raw probability of {output} has imaginary part {:.3e}",
            raw.im
        )));
    }
    clamp_probability(raw.re, "double sum")
}

/// Ideal bosonic distribution `|per(U[n|m])|^2 / (mu(m) mu(n))`.
pub fn ideal_distribution(u: &CMatrix, input: &Configuration) -> Result<Distribution> {
    let n = validate_network(u, input, MAX_DISTRIBUTION_PARTICLES)?;
    let configs = enumerate_output_configurations(u.nrows(), n)?;
    let mu_in = input.multiplicity() as f64;
    let probs = configs
        .par_iter()
        .map(|m| {
            let sub = expanded_submatrix(u, input, m)?;
            let per = permanent_ryser(&sub)?;
            Ok(per.norm_sqr() / (m.multiplicity() as f64 * mu_in))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(Distribution::from_parts(configs, probs, u.nrows(), n))
}

/// Classical distribution of fully distinguishable particles:
/// `per(|U|^2[n|m]) / mu(m)`.
pub fn classical_distribution(u: &CMatrix, input: &Configuration) -> Result<Distribution> {
    let n = validate_network(u, input, MAX_DISTRIBUTION_PARTICLES)?;
    let abs2 = u.map(|v| C64::new(v.norm_sqr(), 0.0));
    let configs = enumerate_output_configurations(u.nrows(), n)?;
    let probs = configs
        .par_iter()
        .map(|m| {
            let sub = expanded_submatrix(&abs2, input, m)?;
            let per = permanent_ryser(&sub)?;
            Ok(per.re / m.multiplicity() as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(Distribution::from_parts(configs, probs, u.nrows(), n))
}

/// Classical probability of a single output configuration.
pub fn classical_probability(
    u: &CMatrix,
    input: &Configuration,
    output: &Configuration,
) -> Result<f64> {
    let n = validate_network(u, input, MAX_DISTRIBUTION_PARTICLES)?;
    check_shapes(n, n, input, output, u.nrows())?;
    let abs2 = u.map(|v| C64::new(v.norm_sqr(), 0.0));
    let sub = expanded_submatrix(&abs2, input, output)?;
    Ok(permanent_ryser(&sub)?.re / output.multiplicity() as f64)
}

/// Ideal bosonic probability of a single output configuration.
pub fn ideal_probability(
    u: &CMatrix,
    input: &Configuration,
    output: &Configuration,
) -> Result<f64> {
    let n = validate_network(u, input, MAX_DISTRIBUTION_PARTICLES)?;
    check_shapes(n, n, input, output, u.nrows())?;
    let sub = expanded_submatrix(u, input, output)?;
    let per = permanent_ryser(&sub)?;
    Ok(per.norm_sqr() / (output.multiplicity() as f64 * input.multiplicity() as f64))
}

/// Full postselected distribution of a normalized J-matrix in measurement
/// form. The result sums to 1 within numerical tolerance; a larger defect
/// is reported as a consistency violation.
pub fn general_distribution(
    u: &CMatrix,
    jn: &NormalizedJMatrix,
    input: &Configuration,
) -> Result<Distribution> {
    let n = validate_network(u, input, MAX_DISTRIBUTION_PARTICLES)?;
    if jn.particle_count() != n {
        return Err(Error::Dimension(format!(
            "J-matrix describes {} particles, input configuration {n}",
            jn.particle_count()
        )));
    }
    require_young_compatible(jn.values(), input)?;
    let perms = crate::combinatorics::enumerate_permutations(n)?;
    let table = relative_rank_table(n)?;
    let configs = enumerate_output_configurations(u.nrows(), n)?;
    let probs = configs
        .par_iter()
        .map(|m| measurement_prob_inner(u, jn.values(), input, m, &perms, &table))
        .collect::<Result<Vec<f64>>>()?;
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Consistency(format!(
            "postselected distribution sums to {total}, expected 1"
        )));
    }
    Ok(Distribution::from_parts(configs, probs, u.nrows(), n))
}

/// `sum_l |Z_l><Z_l|` over all `M^N` output tuples. Equals the Young
/// projector of the input configuration when `u` is unitary.
pub fn povm_completeness_sum(u: &CMatrix, input: &Configuration) -> Result<CMatrix> {
    let n = validate_network(u, input, MAX_DISTRIBUTION_PARTICLES)?;
    let modes = u.nrows();
    let perms = crate::combinatorics::enumerate_permutations(n)?;
    let total = factorial(n) as usize;
    let slots = input.slot_modes();
    let mu = input.multiplicity();
    let mut sum = CMatrix::zeros(total, total);
    let mut tuple = vec![0usize; n];
    loop {
        let z = z_entries(u, &slots, &tuple, &perms, mu);
        for r1 in 0..total {
            for r2 in 0..total {
                sum[(r1, r2)] += z[r1] * z[r2].conj();
            }
        }
        // next tuple in the M-ary counter
        let mut slot = n;
        loop {
            if slot == 0 {
                return Ok(sum);
            }
            slot -= 1;
            tuple[slot] += 1;
            if tuple[slot] < modes {
                break;
            }
            tuple[slot] = 0;
        }
    }
}
