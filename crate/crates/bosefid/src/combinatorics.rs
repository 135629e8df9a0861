//! Permutations of particle slots and mode-occupation configurations.
//!
//! Every quantity in this crate is ultimately a sum over the symmetric group
//! `S_N` (or one of its Young subgroups) and over mode occupations; this
//! module owns those enumerations. Enumeration order is part of the
//! contract: permutations are produced in lexicographic order and ranked by
//! Lehmer code, so vectors indexed by permutation rank are stable across
//! runs.

use crate::{Error, Result};

/// Hard guard on the particle number for factorial-sized enumerations.
pub const MAX_PERMUTATION_DEGREE: usize = 8;

/// Default cap on the number of output configurations produced at once.
pub const DEFAULT_CONFIGURATION_CAP: usize = 1_000_000;

/// `n!` as `u64`. Callers stay well below the `u64` overflow at `n = 21`.
pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// A bijection on the particle slots `{0, .., n-1}`.
///
/// `map[i]` is the image of slot `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    /// Identity permutation on `n` slots.
    pub fn identity(n: usize) -> Self {
        Permutation { map: (0..n).collect() }
    }

    /// Build from an explicit mapping, validating that it is a bijection.
    pub fn from_mapping(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &image in &map {
            if image >= n || seen[image] {
                return Err(Error::Validation(format!(
                    "not a permutation of 0..{n}: {map:?}"
                )));
            }
            seen[image] = true;
        }
        Ok(Permutation { map })
    }

    /// Number of slots.
    pub fn degree(&self) -> usize {
        self.map.len()
    }

    /// Image of slot `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// The underlying mapping.
    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// Composition `self . other`, i.e. `other` acts first.
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            map: other.map.iter().map(|&i| self.map[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &image) in self.map.iter().enumerate() {
            inv[image] = i;
        }
        Permutation { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &image)| i == image)
    }

    /// Number of fixed points (1-cycles).
    pub fn fixed_point_count(&self) -> usize {
        self.map
            .iter()
            .enumerate()
            .filter(|&(i, &image)| i == image)
            .count()
    }

    /// Parity: `+1` for even permutations, `-1` for odd.
    pub fn sign(&self) -> i32 {
        let n = self.map.len();
        let mut visited = vec![false; n];
        let mut transpositions = 0;
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut cycle_len = 0;
            let mut i = start;
            while !visited[i] {
                visited[i] = true;
                i = self.map[i];
                cycle_len += 1;
            }
            transpositions += cycle_len - 1;
        }
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Lexicographic rank via the Lehmer code: `0 <= rank < n!`.
    pub fn rank(&self) -> usize {
        let n = self.map.len();
        let mut rank = 0usize;
        for i in 0..n {
            let smaller_after = self.map[i + 1..]
                .iter()
                .filter(|&&x| x < self.map[i])
                .count();
            rank += smaller_after * factorial(n - 1 - i) as usize;
        }
        rank
    }

    /// Inverse of [`Permutation::rank`]: the permutation of `n` slots with
    /// the given lexicographic rank.
    pub fn from_rank(n: usize, mut rank: usize) -> Self {
        let mut available: Vec<usize> = (0..n).collect();
        let mut map = Vec::with_capacity(n);
        for i in 0..n {
            let f = factorial(n - 1 - i) as usize;
            let idx = rank / f;
            rank %= f;
            map.push(available.remove(idx));
        }
        Permutation { map }
    }
}

/// Fixed-point count and parity in one pass: `(|C_1(s)|, sgn(s))`.
pub fn cycle_stats(sigma: &Permutation) -> (usize, i32) {
    (sigma.fixed_point_count(), sigma.sign())
}

/// All `n!` permutations of `n` slots in lexicographic order.
///
/// The position of each permutation in the result equals its
/// [`Permutation::rank`].
pub fn enumerate_permutations(n: usize) -> Result<Vec<Permutation>> {
    if n == 0 || n > MAX_PERMUTATION_DEGREE {
        return Err(Error::SizeLimit(format!(
            "permutation degree {n} outside 1..={MAX_PERMUTATION_DEGREE}"
        )));
    }
    let total = factorial(n) as usize;
    let mut out = Vec::with_capacity(total);
    let mut current = Permutation::identity(n);
    loop {
        out.push(current.clone());
        // next_permutation in lexicographic order
        let map = &mut current.map;
        let Some(pivot) = (0..n.saturating_sub(1)).rev().find(|&i| map[i] < map[i + 1]) else {
            break;
        };
        let swap_with = (pivot + 1..n).rev().find(|&j| map[j] > map[pivot]).unwrap();
        map.swap(pivot, swap_with);
        map[pivot + 1..].reverse();
    }
    debug_assert_eq!(out.len(), total);
    Ok(out)
}

/// Flat row-major table of relative ranks over `S_n`:
/// entry `r1 * n! + r2` is the rank of `sigma_{r1} . sigma_{r2}^{-1}`.
///
/// Precomputing this turns every double sum over permutation pairs into
/// plain table lookups.
pub fn relative_rank_table(n: usize) -> Result<Vec<u32>> {
    let perms = enumerate_permutations(n)?;
    let total = perms.len();
    let inverses: Vec<Permutation> = perms.iter().map(|p| p.inverse()).collect();
    let mut table = vec![0u32; total * total];
    for (r1, p1) in perms.iter().enumerate() {
        for (r2, inv2) in inverses.iter().enumerate() {
            table[r1 * total + r2] = p1.compose(inv2).rank() as u32;
        }
    }
    Ok(table)
}

/// Occupation numbers of `M` modes holding `N = sum` particles in total.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    occupations: Vec<usize>,
}

impl Configuration {
    pub fn new(occupations: Vec<usize>) -> Self {
        Configuration { occupations }
    }

    /// `N` bosons in the first `n` of `modes` modes, one per mode.
    pub fn single_occupancy(particles: usize, modes: usize) -> Result<Self> {
        if particles > modes {
            return Err(Error::Dimension(format!(
                "cannot place {particles} single-occupied particles in {modes} modes"
            )));
        }
        let mut occ = vec![0; modes];
        occ[..particles].iter_mut().for_each(|o| *o = 1);
        Ok(Configuration { occupations: occ })
    }

    pub fn occupations(&self) -> &[usize] {
        &self.occupations
    }

    pub fn mode_count(&self) -> usize {
        self.occupations.len()
    }

    /// Total particle number `N`.
    pub fn total(&self) -> usize {
        self.occupations.iter().sum()
    }

    /// `mu(n) = prod_k n_k!`, the input-mode multiplicity factor.
    pub fn multiplicity(&self) -> u64 {
        self.occupations.iter().map(|&n| factorial(n)).product()
    }

    /// Slot-to-mode map `k_alpha` in nondecreasing mode order.
    ///
    /// Example: occupations `(2, 1)` give slots `[0, 0, 1]`.
    pub fn slot_modes(&self) -> Vec<usize> {
        let mut slots = Vec::with_capacity(self.total());
        for (mode, &n) in self.occupations.iter().enumerate() {
            slots.extend(std::iter::repeat(mode).take(n));
        }
        slots
    }

    /// Pad with empty modes up to `modes` total, e.g. to match a larger
    /// network. Errors if the configuration already has more modes.
    pub fn padded(&self, modes: usize) -> Result<Self> {
        if self.mode_count() > modes {
            return Err(Error::Dimension(format!(
                "configuration has {} modes, cannot pad to {modes}",
                self.mode_count()
            )));
        }
        let mut occ = self.occupations.clone();
        occ.resize(modes, 0);
        Ok(Configuration { occupations: occ })
    }
}

impl std::fmt::Display for Configuration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.occupations.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

/// The Young subgroup `S_{n_1} x ... x S_{n_M}` of an input configuration,
/// as permutations of the `N` particle slots grouped by input mode.
///
/// The result has `mu(n)` elements and is closed under composition and
/// inverse.
pub fn young_subgroup(config: &Configuration) -> Result<Vec<Permutation>> {
    let n = config.total();
    if n > MAX_PERMUTATION_DEGREE {
        return Err(Error::SizeLimit(format!(
            "Young subgroup of {n} slots exceeds the degree guard"
        )));
    }
    // Slot ranges occupied by each mode, in nondecreasing mode order.
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for &occ in config.occupations() {
        blocks.push((start, occ));
        start += occ;
    }
    let mut group = vec![Permutation::identity(n)];
    for &(offset, size) in blocks.iter().filter(|&&(_, size)| size > 1) {
        let block_perms = enumerate_permutations(size)?;
        let mut extended = Vec::with_capacity(group.len() * block_perms.len());
        for base in &group {
            for block in &block_perms {
                let mut map = base.map.clone();
                for i in 0..size {
                    map[offset + i] = base.map[offset + block.apply(i)];
                }
                extended.push(Permutation { map });
            }
        }
        group = extended;
    }
    debug_assert_eq!(group.len() as u64, config.multiplicity());
    Ok(group)
}

/// Binomial coefficient as u128 to keep the cap check overflow-free.
fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result * (n - i) as u128 / (i + 1) as u128;
    }
    result
}

/// All weak compositions of `total` particles into `modes` modes, i.e. every
/// output configuration with `|m| = total`.
///
/// The order is deterministic: the first mode's occupation decreases from
/// `total` to 0, recursively. Count is `C(modes + total - 1, total)`.
pub fn enumerate_output_configurations(modes: usize, total: usize) -> Result<Vec<Configuration>> {
    enumerate_output_configurations_capped(modes, total, DEFAULT_CONFIGURATION_CAP)
}

/// As [`enumerate_output_configurations`] with an explicit cap on the count.
pub fn enumerate_output_configurations_capped(
    modes: usize,
    total: usize,
    cap: usize,
) -> Result<Vec<Configuration>> {
    if modes == 0 {
        return Err(Error::Dimension("need at least one mode".into()));
    }
    let count = binomial(modes + total - 1, total);
    if count > cap as u128 {
        return Err(Error::SizeLimit(format!(
            "{count} output configurations exceed the cap of {cap}"
        )));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut current = vec![0usize; modes];
    fill_configurations(&mut current, 0, total, &mut out);
    Ok(out)
}

fn fill_configurations(
    current: &mut Vec<usize>,
    mode: usize,
    remaining: usize,
    out: &mut Vec<Configuration>,
) {
    if mode == current.len() - 1 {
        current[mode] = remaining;
        out.push(Configuration::new(current.clone()));
        return;
    }
    for occ in (0..=remaining).rev() {
        current[mode] = occ;
        fill_configurations(current, mode + 1, remaining - occ, out);
    }
}
