use polygas_core::{pairwise_sum, Error, Real, Result};

/// Bitmask over the pairs of `0..n`, bit [`pair_index`]`(n, a, b)`.
pub type EdgeMask = u64;

/// Largest edge count for which [`connected_subgraphs`] lists subsets.
pub const MAX_CONNECTED_EDGES: usize = 24;

/// Position of the pair `{a, b}` in the lexicographic list of pairs of `0..n`.
pub fn pair_index(n: usize, a: usize, b: usize) -> usize {
    let (a, b) = (a.min(b), a.max(b));
    debug_assert!(a < b && b < n);
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

/// Pairs `(a, b)`, `a < b`, in [`pair_index`] order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            v.push((a, b));
        }
    }
    v
}

/// Whether the edges in `mask` connect all of `0..n`.
pub fn is_connected(n: usize, mask: EdgeMask) -> bool {
    if n <= 1 {
        return true;
    }
    let p = pairs(n);
    let mut seen = 1u32;
    loop {
        let before = seen;
        for (i, &(a, b)) in p.iter().enumerate() {
            if mask >> i & 1 == 1 && ((seen >> a) & 1) != ((seen >> b) & 1) {
                seen |= 1 << a | 1 << b;
            }
        }
        if seen == before {
            break;
        }
    }
    seen == (1u32 << n) - 1
}

/// Every edge subset of `graph` that connects `0..n`, as edge masks in
/// increasing numeric order.
pub fn connected_subgraphs(n: usize, graph: EdgeMask) -> Result<Vec<EdgeMask>> {
    let bits: Vec<usize> = (0..64).filter(|i| graph >> i & 1 == 1).collect();
    if bits.len() > MAX_CONNECTED_EDGES {
        return Err(Error::infeasible(
            "edges for subgraph enumeration",
            bits.len(),
            MAX_CONNECTED_EDGES,
        ));
    }
    let mut out = Vec::new();
    for sub in 0u64..(1 << bits.len()) {
        let mask = bits
            .iter()
            .enumerate()
            .filter(|(j, _)| sub >> j & 1 == 1)
            .fold(0, |m, (_, &i)| m | 1 << i);
        if is_connected(n, mask) {
            out.push(mask);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// `sum over connected spanning graphs G on 0..n of prod_{e in G} x_e`,
/// where `x[pair_index(n, a, b)]` is the edge weight (zero for absent edges).
///
/// Computed by the subset recursion
/// `C(S) = F(S) - sum_{T < S, min S in T} C(T) F(S \ T)` with
/// `F(S) = prod_{e in S} (1 + x_e)`, in `O(3^n)` steps.
pub fn connected_sum<R: Real>(n: usize, x: &[R]) -> R {
    if n == 0 {
        return R::zero();
    }
    if n == 1 {
        return R::one();
    }
    assert!(n <= 16, "connected_sum on {n} vertices");
    let full = (1usize << n) - 1;
    let mut f = vec![R::one(); full + 1];
    for s in 1..=full {
        // add the edges from the top vertex of s to the rest of s
        let top = usize::BITS as usize - 1 - s.leading_zeros() as usize;
        let rest = s & !(1 << top);
        let mut v = f[rest].clone();
        for a in 0..top {
            if rest >> a & 1 == 1 {
                let w = &x[pair_index(n, a, top)];
                if !w.is_zero() {
                    v = v * (R::one() + w.clone());
                }
            }
        }
        f[s] = v;
    }
    let mut c = vec![R::zero(); full + 1];
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        let others = s & !low;
        let mut terms = vec![f[s].clone()];
        // proper subsets t of s containing low
        let mut sub = (others.wrapping_sub(1)) & others;
        loop {
            let t = sub | low;
            if t != s {
                terms.push(-(c[t].clone() * f[s & !t].clone()));
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & others;
        }
        c[s] = pairwise_sum(&terms);
    }
    c[full].clone()
}
