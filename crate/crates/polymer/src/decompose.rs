use polygas_contour::{enumerate_contours, is_inside, m_partition, Contour, ContourCollection};
use polygas_core::{Error, ModelParams, Result, SpinFlipConfig};
use polygas_graphs::set_partitions;

use crate::polymer::{contours_compatible, Polymer, PolymerSet};

/// Largest volume for exhaustive polymer-family enumeration.
pub const MAX_GAS_SITES: usize = 12;

/// Maximal members of `g` strictly inside `gamma`.
pub fn children(gamma: &Contour, g: &ContourCollection) -> Vec<Contour> {
    let inside: Vec<&Contour> = g.iter().filter(|c| is_inside(c, gamma)).collect();
    inside
        .iter()
        .filter(|c| !inside.iter().any(|o| is_inside(c, o)))
        .map(|c| (*c).clone())
        .collect()
}

/// The coarsest compatible polymer family representing an M-partition:
/// the external contours form one polymer and, for every contour, its
/// maximal inner contours form another.
pub fn coarsest_decomposition(g: &ContourCollection, p: &ModelParams) -> Result<PolymerSet> {
    if g.is_empty() {
        return Ok(PolymerSet::empty());
    }
    let mut polymers = vec![Polymer::new(
        polygas_contour::external_contours(g).contours().to_vec(),
        p,
    )?];
    for gamma in g {
        let ch = children(gamma, g);
        if !ch.is_empty() {
            polymers.push(Polymer::new(ch, p)?);
        }
    }
    let set = PolymerSet::new(polymers, p);
    if !set.compatible {
        return Err(Error::InvalidConfig(
            "coarsest decomposition is not a compatible family".into(),
        ));
    }
    Ok(set)
}

/// Every family obtained by splitting each polymer of `x` further.
pub fn refinements(x: &PolymerSet, p: &ModelParams) -> Vec<PolymerSet> {
    let per_polymer: Vec<Vec<Vec<Polymer>>> = x
        .polymers
        .iter()
        .map(|q| {
            set_partitions(q.len())
                .map(|blocks| blocks.iter().map(|b| q.select(b)).collect())
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; per_polymer.len()];
    loop {
        let polymers: Vec<Polymer> = idx
            .iter()
            .enumerate()
            .flat_map(|(i, &k)| per_polymer[i][k].iter().cloned())
            .collect();
        out.push(PolymerSet::new(polymers, p));
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < per_polymer[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn check_volume(p: &ModelParams) -> Result<()> {
    if p.lambda.len() > MAX_GAS_SITES {
        return Err(Error::infeasible("volume sites", p.lambda.len(), MAX_GAS_SITES));
    }
    Ok(())
}

/// All compatible polymer families in the volume: the empty family and,
/// for every M-partition with minus-interior inside the volume, all
/// refinements of its coarsest decomposition.
pub fn enumerate_compatible_polymer_sets(p: &ModelParams) -> Result<Vec<PolymerSet>> {
    check_volume(p)?;
    let sites = p.lambda.as_slice();
    let mut out = vec![PolymerSet::empty()];
    for mask in 1u64..(1 << sites.len()) {
        let minus = sites
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &x)| x)
            .collect();
        let g = m_partition(&SpinFlipConfig::from_interior(&minus), p)?;
        out.extend(refinements(&coarsest_decomposition(&g, p)?, p));
    }
    Ok(out)
}

/// Every polymer whose contours lie in the volume with diameter at most
/// `max_diam`, canonically sorted.
pub fn polymer_universe(p: &ModelParams, max_diam: i64) -> Result<Vec<Polymer>> {
    check_volume(p)?;
    let contours = enumerate_contours(p, max_diam)?;
    let n = contours.len();
    // positive compatibility graph
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    i != j
                        && contours_compatible(&contours[i], &contours[j], p)
                        && !contours[i].interior().intersects(contours[j].interior())
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn grow(
        start: usize,
        stack: &mut Vec<usize>,
        adj: &[Vec<bool>],
        contours: &[Contour],
        out: &mut Vec<Polymer>,
    ) {
        for k in start..contours.len() {
            if stack.iter().all(|&s| adj[s][k]) {
                stack.push(k);
                out.push(Polymer::single_unchecked(
                    stack.iter().map(|&i| contours[i].clone()).collect(),
                ));
                grow(k + 1, stack, adj, contours, out);
                stack.pop();
            }
        }
    }
    grow(0, &mut stack, &adj, &contours, &mut out);
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use polygas_core::SiteSet;

    fn params() -> ModelParams {
        ModelParams::on_interval(2.0, 1.0, -200, 200).unwrap()
    }

    fn halves(q: &Polymer) -> Vec<Vec<f64>> {
        q.contours().iter().map(|c| c.body().halves()).collect()
    }

    /// b1..b18 laid out so that γ1 = {b1,b8,b11,b16}, γ2 = {b2,b5,b6,b7},
    /// γ3 = {b3,b4}, γ4 = {b9,b10}, γ5 = {b12,b13}, γ6 = {b14,b15},
    /// γ7 = {b17,b18}.
    fn seven_contours() -> Vec<f64> {
        let b2 = 55.5;
        let b5 = b2 + 7.0;
        let b7 = b5 + 2.0;
        let b8 = b7 + 55.0;
        let b11 = b8 + 7.0;
        let b16 = b11 + 11.0;
        vec![
            0.5,
            b2,
            b2 + 3.0,
            b2 + 4.0,
            b5,
            b5 + 1.0,
            b7,
            b8,
            b8 + 3.0,
            b8 + 4.0,
            b11,
            b11 + 3.0,
            b11 + 4.0,
            b11 + 7.0,
            b11 + 8.0,
            b16,
            b16 + 3.0,
            b16 + 4.0,
        ]
    }

    #[test]
    fn seven_contour_example() {
        let p = params().with_lambda(SiteSet::interval(-10, 200)).unwrap();
        let b = seven_contours();
        let g = m_partition(&SpinFlipConfig::from_halves(&b).unwrap(), &p).unwrap();
        assert_eq!(g.len(), 7);
        let pick = |ix: &[usize]| -> Vec<f64> { ix.iter().map(|&i| b[i - 1]).collect() };
        let (g1, g2, g3) = (pick(&[1, 8, 11, 16]), pick(&[2, 5, 6, 7]), pick(&[3, 4]));
        let (g4, g5, g6, g7) = (pick(&[9, 10]), pick(&[12, 13]), pick(&[14, 15]), pick(&[17, 18]));
        let x = coarsest_decomposition(&g, &p).unwrap();
        let mut got: Vec<Vec<Vec<f64>>> = x.polymers.iter().map(halves).collect();
        got.sort_by(|a, b| a[0][0].total_cmp(&b[0][0]));
        assert_eq!(got, vec![vec![g1, g4, g7], vec![g2, g5, g6], vec![g3]]);
    }

    /// γ1 = {b1,b12}, γ2 = {b2,b7}, γ3 = {b3,b4}, γ4 = {b5,b6},
    /// γ5 = {b8,b11}, γ6 = {b9,b10}.
    fn six_contours() -> Vec<f64> {
        vec![-73.5, 0.5, 3.5, 4.5, 7.5, 8.5, 11.5, 49.5, 52.5, 53.5, 56.5, 94.5]
    }

    #[test]
    fn six_contour_example() {
        let p = params();
        let b = six_contours();
        let g = m_partition(&SpinFlipConfig::from_halves(&b).unwrap(), &p).unwrap();
        assert_eq!(g.len(), 6);
        let x = coarsest_decomposition(&g, &p).unwrap();
        let mut got: Vec<Vec<Vec<f64>>> = x.polymers.iter().map(halves).collect();
        got.sort_by(|a, b| a[0][0].total_cmp(&b[0][0]));
        assert_eq!(
            got,
            vec![
                vec![vec![-73.5, 94.5]],
                vec![vec![0.5, 11.5], vec![49.5, 56.5]],
                vec![vec![3.5, 4.5], vec![7.5, 8.5]],
                vec![vec![52.5, 53.5]],
            ]
        );
        // γ6 cannot join {γ3, γ4}
        let g34 = x.polymers.iter().find(|q| q.len() == 2 && q.contours()[0].diam() == 1).unwrap();
        let g6 = x.polymers.iter().find(|q| halves(q) == vec![vec![52.5, 53.5]]).unwrap();
        let mut fused = g34.contours().to_vec();
        fused.extend(g6.contours().iter().cloned());
        let fused = Polymer::new(fused, &p).unwrap();
        let mut others: Vec<Polymer> = x
            .polymers
            .iter()
            .filter(|q| *q != g34 && *q != g6)
            .cloned()
            .collect();
        others.push(fused);
        assert!(!PolymerSet::new(others, &p).compatible);
    }

    #[test]
    fn positive_partition_is_one_polymer() {
        let p = params();
        let cfg = SpinFlipConfig::from_halves(&[-0.5, 0.5, 9.5, 10.5]).unwrap();
        let g = m_partition(&cfg, &p).unwrap();
        let x = coarsest_decomposition(&g, &p).unwrap();
        assert_eq!(x.len(), 1);
        assert_eq!(x.polymers[0].len(), 2);
        assert_eq!(refinements(&x, &p).len(), 2);
    }

    #[test]
    fn single_site_volume() {
        let p = ModelParams::on_interval(2.0, 1.0, 0, 0).unwrap();
        let all = enumerate_compatible_polymer_sets(&p).unwrap();
        assert_eq!(all.len(), 2);
        assert!(all[0].is_empty());
        assert_eq!(polymer_universe(&p, 1).unwrap().len(), 1);
    }
}
