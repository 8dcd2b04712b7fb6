use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use polygas_core::{Error, ModelParams, Result, SpinFlipConfig};

use crate::collection::{CollectionKind, ContourCollection};
use crate::contour::Contour;

/// Largest flip count accepted by the exhaustive [`is_irreducible`].
pub const MAX_EXHAUSTIVE_FLIPS: usize = 12;

/// Which admissible split is taken first when several exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitOrder {
    /// Leftmost, then shortest run.
    Canonical,
    /// Uniformly random admissible run at every step.
    Shuffled(u64),
}

/// Compatibility of the run `b[i..j]` with the remaining bonds, all in
/// doubled coordinates.
fn run_separates(b: &[i64], i: usize, j: usize, p: &ModelParams) -> bool {
    let n = b.len();
    let left = if i > 0 { b[i] - b[i - 1] } else { i64::MAX };
    let right = if j < n { b[j] - b[j - 1] } else { i64::MAX };
    let dist = left.min(right) / 2;
    let run_diam = (b[j - 1] - b[i]) / 2;
    let first = if i > 0 { b[0] } else { b[j] };
    let last = if j < n { b[n - 1] } else { b[i - 1] };
    let rest_diam = (last - first) / 2;
    dist as f64 > p.separation(run_diam.min(rest_diam))
}

/// Every proper even-length run that is compatible with its complement.
///
/// A flip set is reducible exactly when such a run exists: in any
/// compatible split the part of least diameter cannot enclose a foreign
/// bond (that bond would be within half its diameter), so it is a run of
/// consecutive bonds, and it is compatible with the union of the others.
fn admissible_runs(b: &[i64], p: &ModelParams) -> Vec<(usize, usize)> {
    let n = b.len();
    let mut out = Vec::new();
    for i in 0..n {
        let mut j = i + 2;
        while j <= n {
            if j - i < n && run_separates(b, i, j, p) {
                out.push((i, j));
            }
            j += 2;
        }
    }
    out
}

fn first_admissible_run(b: &[i64], p: &ModelParams) -> Option<(usize, usize)> {
    let n = b.len();
    for i in 0..n {
        let mut j = i + 2;
        while j <= n {
            if j - i < n && run_separates(b, i, j, p) {
                return Some((i, j));
            }
            j += 2;
        }
    }
    None
}

/// Fast irreducibility test on sorted doubled bonds.
pub fn is_irreducible_bonds(b: &[i64], p: &ModelParams) -> bool {
    !b.is_empty() && first_admissible_run(b, p).is_none()
}

/// Splits sorted doubled bonds into the bond lists of the M-partition.
///
/// Works top down: an admissible run and its complement are split apart
/// and each side is split again. Pieces of two compatible sets stay
/// compatible (distance can only grow, diameters only shrink), so the
/// leaves are pairwise compatible and irreducible.
pub fn split_bonds(b: &[i64], p: &ModelParams, order: SplitOrder) -> Vec<Vec<i64>> {
    let mut rng = match order {
        SplitOrder::Canonical => None,
        SplitOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut done = Vec::new();
    let mut stack = vec![b.to_vec()];
    while let Some(cur) = stack.pop() {
        let pick = match rng.as_mut() {
            None => first_admissible_run(&cur, p),
            Some(r) => admissible_runs(&cur, p).choose(r).copied(),
        };
        match pick {
            None => done.push(cur),
            Some((i, j)) => {
                let run = cur[i..j].to_vec();
                let mut rest = cur[..i].to_vec();
                rest.extend_from_slice(&cur[j..]);
                stack.push(run);
                stack.push(rest);
            }
        }
    }
    done.sort();
    done
}

/// The M-partition of a nonempty flip set.
pub fn m_partition(cfg: &SpinFlipConfig, p: &ModelParams) -> Result<ContourCollection> {
    m_partition_with(cfg, p, SplitOrder::Canonical)
}

pub fn m_partition_with(
    cfg: &SpinFlipConfig,
    p: &ModelParams,
    order: SplitOrder,
) -> Result<ContourCollection> {
    if cfg.is_empty() {
        return Err(Error::Empty("M-partition of the empty configuration".into()));
    }
    let parts = split_bonds(cfg.doubled(), p, order)
        .into_iter()
        .map(|b| {
            let body = SpinFlipConfig::from_doubled(b).expect("runs of a valid config");
            Contour::from_parts(body, p)
        })
        .collect();
    Ok(ContourCollection::new_unchecked(parts, CollectionKind::MPartition))
}

fn blocks_compatible(a: &[i64], b: &[i64], p: &ModelParams) -> bool {
    let mut best = i64::MAX;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        best = best.min((a[i] - b[j]).abs());
        if a[i] < b[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    let da = (a[a.len() - 1] - a[0]) / 2;
    let db = (b[b.len() - 1] - b[0]) / 2;
    (best / 2) as f64 > p.separation(da.min(db))
}

/// Exhaustive test: no partition of the flips into two or more even parts
/// is pairwise compatible. Independent of the run characterization used by
/// [`m_partition`].
pub fn is_irreducible(cfg: &SpinFlipConfig, p: &ModelParams) -> Result<bool> {
    let n = cfg.len();
    if n == 0 {
        return Err(Error::Empty("irreducibility of the empty configuration".into()));
    }
    if n > MAX_EXHAUSTIVE_FLIPS {
        return Err(Error::infeasible("flips for exhaustive search", n, MAX_EXHAUSTIVE_FLIPS));
    }
    let b = cfg.doubled();
    let mut used = vec![false; n];
    let mut blocks: Vec<Vec<i64>> = Vec::new();
    Ok(!compatible_split_exists(b, &mut used, &mut blocks, p))
}

fn compatible_split_exists(
    b: &[i64],
    used: &mut [bool],
    blocks: &mut Vec<Vec<i64>>,
    p: &ModelParams,
) -> bool {
    let Some(first) = used.iter().position(|u| !u) else {
        return blocks.len() >= 2;
    };
    let free: Vec<usize> = (first + 1..b.len()).filter(|&i| !used[i]).collect();
    used[first] = true;
    // choose an odd number of companions for the least free bond
    for mask in 1u32..(1 << free.len()) {
        if mask.count_ones() % 2 == 0 {
            continue;
        }
        let mut block = vec![b[first]];
        for (k, &i) in free.iter().enumerate() {
            if mask >> k & 1 == 1 {
                block.push(b[i]);
            }
        }
        if blocks.is_empty() && block.len() == b.len() {
            continue;
        }
        if !blocks.iter().all(|q| blocks_compatible(q, &block, p)) {
            continue;
        }
        for (k, &i) in free.iter().enumerate() {
            if mask >> k & 1 == 1 {
                used[i] = true;
            }
        }
        blocks.push(block);
        let found = compatible_split_exists(b, used, blocks, p);
        blocks.pop();
        for (k, &i) in free.iter().enumerate() {
            if mask >> k & 1 == 1 {
                used[i] = false;
            }
        }
        if found {
            used[first] = false;
            return true;
        }
    }
    used[first] = false;
    false
}
