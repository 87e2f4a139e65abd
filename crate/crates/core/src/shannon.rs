//! Shannon entropy machinery: joint and conditional entropies, multivariate
//! mutual informations, I-diagram atoms, and atom-derived composites.
//!
//! Marginal probabilities are accumulated exactly in rationals; logarithms
//! are taken in double precision at the boundary. All values are in bits.

use std::collections::BTreeMap;

use num::ToPrimitive;

use crate::dist::{JointDistribution, Rat, VariablePartition, VariableSet};
use crate::error::{Error, Result};
use crate::util::{set_partitions, submasks};

const MAX_VARIABLES: usize = 20;
const MAX_CAEKL_UNIVERSE: usize = 10;

fn h_of_probs<'a>(probs: impl Iterator<Item = &'a Rat>) -> f64 {
    let mut h = 0.0;
    for p in probs {
        let p = p.to_f64().expect("probability representable as f64");
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h
}

/// Entropies of every sub-collection of the distribution's variables,
/// indexed by bitmask over variable positions. `H(∅) = 0`.
pub struct SubsetEntropies {
    n: usize,
    h: Vec<f64>,
}

impl SubsetEntropies {
    pub fn new(d: &JointDistribution) -> Result<SubsetEntropies> {
        let n = d.variables().len();
        if n > MAX_VARIABLES {
            return Err(Error::SupportTooLarge {
                got: n,
                limit: MAX_VARIABLES,
            });
        }
        let mut h = vec![0.0; 1 << n];
        for mask in 1u32..(1 << n) {
            let mut merged: BTreeMap<Vec<&crate::symbol::Symbol>, Rat> = BTreeMap::new();
            for (tuple, p) in d.outcomes() {
                let key: Vec<_> = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| &tuple[i])
                    .collect();
                *merged.entry(key).or_insert_with(num::Zero::zero) += p;
            }
            h[mask as usize] = h_of_probs(merged.values());
        }
        Ok(SubsetEntropies { n, h })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    pub fn entropy(&self, mask: u32) -> f64 {
        self.h[mask as usize]
    }

    pub fn mask_of(&self, d: &JointDistribution, set: &VariableSet) -> Result<u32> {
        let mut mask = 0u32;
        for name in set.iter() {
            mask |= 1 << d.index_of(name)?;
        }
        Ok(mask)
    }

    /// Conditional co-information of the groups (as masks) given `given`:
    /// the alternating inclusion–exclusion sum of subset entropies. For two
    /// groups this is the conditional mutual information.
    pub fn comutual(&self, groups: &[u32], given: u32) -> f64 {
        let k = groups.len();
        let mut total = 0.0;
        for pick in 0u32..(1 << k) {
            let mut mask = given;
            for (i, g) in groups.iter().enumerate() {
                if pick >> i & 1 == 1 {
                    mask |= g;
                }
            }
            let sign = if pick.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            total -= sign * self.entropy(mask);
        }
        total
    }
}

fn group_masks(d: &JointDistribution, groups: &[VariableSet], given: &VariableSet) -> Result<(SubsetEntropies, Vec<u32>, u32)> {
    let table = SubsetEntropies::new(d)?;
    let mut masks = Vec::with_capacity(groups.len());
    let mut seen = 0u32;
    for g in groups {
        if g.is_empty() {
            return Err(Error::EmptySet);
        }
        let m = table.mask_of(d, g)?;
        if m & seen != 0 {
            return Err(Error::OverlappingSets);
        }
        seen |= m;
        masks.push(m);
    }
    let given_mask = table.mask_of(d, given)?;
    if given_mask & seen != 0 {
        return Err(Error::OverlappingSets);
    }
    Ok((table, masks, given_mask))
}

/// Joint entropy of the marginal on `subset`, in bits.
pub fn entropy(d: &JointDistribution, subset: &VariableSet) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptySet);
    }
    let m = d.marginal(subset)?;
    Ok(h_of_probs(m.outcomes().map(|(_, p)| p)))
}

/// H(target | given) = H(target, given) − H(given). `given` may be empty.
pub fn conditional_entropy(
    d: &JointDistribution,
    target: &VariableSet,
    given: &VariableSet,
) -> Result<f64> {
    if target.is_empty() {
        return Err(Error::EmptySet);
    }
    if !target.is_disjoint(given) {
        return Err(Error::OverlappingSets);
    }
    if given.is_empty() {
        return entropy(d, target);
    }
    Ok(entropy(d, &target.union(given))? - entropy(d, given)?)
}

/// Co-information convention multivariate mutual information among the
/// groups, conditioned on `given`. Two groups give (conditional) MI.
pub fn comutual_information(
    d: &JointDistribution,
    groups: &[VariableSet],
    given: &VariableSet,
) -> Result<f64> {
    if groups.len() < 2 {
        return Err(Error::PartitionInvalid("need at least 2 groups".into()));
    }
    let (table, masks, given_mask) = group_masks(d, groups, given)?;
    Ok(table.comutual(&masks, given_mask))
}

/// Signed measure over the 2^n − 1 atoms of the variable lattice.
#[derive(Clone, Debug)]
pub struct InfoDiagram {
    variables: Vec<String>,
    /// atom value for each nonempty subset mask, index = mask
    atoms: Vec<f64>,
}

impl InfoDiagram {
    pub fn n(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn atom(&self, mask: u32) -> f64 {
        self.atoms[mask as usize]
    }

    /// Atoms in deterministic (ascending mask) order.
    pub fn atoms(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        (1..self.atoms.len() as u32).map(|m| (m, self.atoms[m as usize]))
    }

    /// Σ of atoms whose subset has at least `k` variables.
    pub fn sum_of_order_at_least(&self, k: usize) -> f64 {
        self.atoms()
            .filter(|(m, _)| m.count_ones() as usize >= k)
            .map(|(_, v)| v)
            .sum()
    }

    /// Human-readable label for an atom mask, e.g. `X:Y|Z`.
    pub fn label(&self, mask: u32) -> String {
        let inside: Vec<&str> = (0..self.n())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.variables[i].as_str())
            .collect();
        let outside: Vec<&str> = (0..self.n())
            .filter(|i| mask >> i & 1 == 0)
            .map(|i| self.variables[i].as_str())
            .collect();
        if outside.is_empty() {
            inside.join(":")
        } else {
            format!("{}|{}", inside.join(":"), outside.join(":"))
        }
    }
}

/// Compute every I-diagram atom: atom(S) is the co-information of the
/// variables in S conditioned on the complement of S.
pub fn idiagram(d: &JointDistribution) -> Result<InfoDiagram> {
    let table = SubsetEntropies::new(d)?;
    let full = table.full_mask();
    let mut atoms = vec![0.0; (full as usize) + 1];
    for mask in submasks(full) {
        let groups: Vec<u32> = (0..table.n())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| 1u32 << i)
            .collect();
        atoms[mask as usize] = table.comutual(&groups, full & !mask);
    }
    Ok(InfoDiagram {
        variables: d.variables().to_vec(),
        atoms,
    })
}

fn partition_masks(
    d: &JointDistribution,
    table: &SubsetEntropies,
    groups: Option<&VariablePartition>,
) -> Result<Vec<u32>> {
    match groups {
        None => Ok((0..table.n()).map(|i| 1u32 << i).collect()),
        Some(p) => {
            p.validate(&d.variable_set())?;
            p.blocks().iter().map(|b| table.mask_of(d, b)).collect()
        }
    }
}

/// Total correlation T = Σ H(group) − H(joint). Defaults to singleton
/// groups when `groups` is None.
pub fn total_correlation(
    d: &JointDistribution,
    groups: Option<&VariablePartition>,
) -> Result<f64> {
    let table = SubsetEntropies::new(d)?;
    let masks = partition_masks(d, &table, groups)?;
    let sum: f64 = masks.iter().map(|&m| table.entropy(m)).sum();
    Ok(sum - table.entropy(table.full_mask()))
}

/// Dual total correlation B = H(joint) − Σ H(group | rest).
pub fn dual_total_correlation(
    d: &JointDistribution,
    groups: Option<&VariablePartition>,
) -> Result<f64> {
    let table = SubsetEntropies::new(d)?;
    let masks = partition_masks(d, &table, groups)?;
    let full = table.full_mask();
    let joint = table.entropy(full);
    let locals: f64 = masks
        .iter()
        .map(|&m| joint - table.entropy(full & !m))
        .sum();
    Ok(joint - locals)
}

/// CAEKL mutual information: minimum over partitions π with ≥ 2 blocks of
/// [Σ_C H(C) − H(joint)] / (|π| − 1), blocks taken over the given groups as
/// atomic units. Exhaustive over set partitions.
pub fn caekl(d: &JointDistribution, groups: Option<&VariablePartition>) -> Result<f64> {
    let table = SubsetEntropies::new(d)?;
    let masks = partition_masks(d, &table, groups)?;
    if masks.len() < 2 {
        return Err(Error::PartitionInvalid("need at least 2 groups".into()));
    }
    if masks.len() > MAX_CAEKL_UNIVERSE {
        return Err(Error::SupportTooLarge {
            got: masks.len(),
            limit: MAX_CAEKL_UNIVERSE,
        });
    }
    let joint = table.entropy(table.full_mask());
    let mut best = f64::INFINITY;
    for partition in set_partitions(masks.len()) {
        if partition.len() < 2 {
            continue;
        }
        let sum: f64 = partition
            .iter()
            .map(|block| {
                let m = block.iter().fold(0u32, |acc, &i| acc | masks[i]);
                table.entropy(m)
            })
            .sum();
        let value = (sum - joint) / (partition.len() as f64 - 1.0);
        best = best.min(value);
    }
    Ok(best)
}

/// Interaction information: (−1)^{|groups|} times the co-information
/// (McGill's sign convention).
pub fn interaction_information(
    d: &JointDistribution,
    groups: Option<&VariablePartition>,
) -> Result<f64> {
    let table = SubsetEntropies::new(d)?;
    let masks = partition_masks(d, &table, groups)?;
    if masks.len() < 2 {
        return Err(Error::PartitionInvalid("need at least 2 groups".into()));
    }
    let sign = if masks.len() % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * table.comutual(&masks, 0))
}

/// Residual (erasure) entropy: Σ_i H(X_i | rest).
pub fn residual_entropy(d: &JointDistribution) -> Result<f64> {
    let table = SubsetEntropies::new(d)?;
    let full = table.full_mask();
    let joint = table.entropy(full);
    Ok((0..table.n())
        .map(|i| joint - table.entropy(full & !(1 << i)))
        .sum())
}

/// TSE complexity: Σ_{k=1}^{n−1} [ avg over size-k subsets of H(subset) −
/// (k/n)·H(joint) ].
pub fn tse_complexity(d: &JointDistribution) -> Result<f64> {
    let table = SubsetEntropies::new(d)?;
    let n = table.n();
    if n < 2 {
        return Err(Error::EmptySet);
    }
    let full = table.full_mask();
    let joint = table.entropy(full);
    let mut total = 0.0;
    for k in 1..n {
        let mut sum = 0.0;
        let mut count = 0usize;
        for mask in submasks(full) {
            if mask.count_ones() as usize == k {
                sum += table.entropy(mask);
                count += 1;
            }
        }
        total += sum / count as f64 - (k as f64 / n as f64) * joint;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::{builtin, Builtin};
    use crate::dist::{rat, JointDistribution};
    use crate::symbol::Symbol;

    const TOL: f64 = 1e-9;

    fn dyadic() -> JointDistribution {
        builtin(Builtin::Dyadic).unwrap()
    }

    fn triadic() -> JointDistribution {
        builtin(Builtin::Triadic).unwrap()
    }

    fn fair_bits(n: usize) -> JointDistribution {
        let names: Vec<String> = (0..n).map(|i| format!("B{i}")).collect();
        let rows = (0..1u64 << n)
            .map(|w| {
                let t = (0..n).map(|i| Symbol::int(w >> i & 1)).collect();
                (t, rat(1, 1 << n))
            })
            .collect();
        JointDistribution::from_outcomes(names, rows).unwrap()
    }

    #[test]
    fn joint_entropy_is_three_bits() {
        for d in [dyadic(), triadic()] {
            let h = entropy(&d, &d.variable_set()).unwrap();
            assert!((h - 3.0).abs() < TOL);
        }
    }

    #[test]
    fn single_variable_entropy_is_two_bits() {
        let h = entropy(&dyadic(), &VariableSet::of(["X"])).unwrap();
        assert!((h - 2.0).abs() < TOL);
    }

    #[test]
    fn point_mass_entropy_is_zero() {
        let d = JointDistribution::from_outcomes(
            ["X"],
            vec![(vec![Symbol::int(0)], rat(1, 1))],
        )
        .unwrap();
        assert!(entropy(&d, &d.variable_set()).unwrap().abs() < TOL);
    }

    #[test]
    fn conditional_entropies_vanish() {
        let d = dyadic();
        let h = conditional_entropy(&d, &VariableSet::of(["X"]), &VariableSet::of(["Y", "Z"]))
            .unwrap();
        assert!(h.abs() < TOL);
    }

    #[test]
    fn empty_conditioning_reduces_to_entropy() {
        let d = dyadic();
        let h = conditional_entropy(&d, &VariableSet::of(["X"]), &VariableSet::empty()).unwrap();
        assert!((h - 2.0).abs() < TOL);
    }

    #[test]
    fn triadic_h_x_given_y_is_one() {
        let h = conditional_entropy(
            &triadic(),
            &VariableSet::of(["X"]),
            &VariableSet::of(["Y"]),
        )
        .unwrap();
        assert!((h - 1.0).abs() < TOL);
    }

    #[test]
    fn overlapping_sets_rejected() {
        let err = conditional_entropy(
            &dyadic(),
            &VariableSet::of(["X"]),
            &VariableSet::of(["X", "Y"]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::OverlappingSets));
    }

    #[test]
    fn conditional_mi_is_unity() {
        let d = dyadic();
        let i = comutual_information(
            &d,
            &[VariableSet::of(["X"]), VariableSet::of(["Y"])],
            &VariableSet::of(["Z"]),
        )
        .unwrap();
        assert!((i - 1.0).abs() < TOL);
    }

    #[test]
    fn co_information_vanishes() {
        for d in [dyadic(), triadic()] {
            let i = comutual_information(
                &d,
                &[
                    VariableSet::of(["X"]),
                    VariableSet::of(["Y"]),
                    VariableSet::of(["Z"]),
                ],
                &VariableSet::empty(),
            )
            .unwrap();
            assert!(i.abs() < TOL);
        }
    }

    #[test]
    fn pairwise_mi_is_one_bit() {
        let i = comutual_information(
            &dyadic(),
            &[VariableSet::of(["X"]), VariableSet::of(["Y"])],
            &VariableSet::empty(),
        )
        .unwrap();
        assert!((i - 1.0).abs() < TOL);
    }

    #[test]
    fn idiagram_matches_published_atoms() {
        for d in [dyadic(), triadic()] {
            let diagram = idiagram(&d).unwrap();
            // singles conditioned on the rest: 0; pairs: 1; triple: 0
            for (mask, value) in diagram.atoms() {
                let expected = if mask.count_ones() == 2 { 1.0 } else { 0.0 };
                assert!(
                    (value - expected).abs() < TOL,
                    "atom {mask:b} = {value}, expected {expected}"
                );
            }
        }
    }

    #[test]
    fn idiagram_of_independent_bits() {
        let diagram = idiagram(&fair_bits(2)).unwrap();
        assert!((diagram.atom(0b01) - 1.0).abs() < TOL);
        assert!((diagram.atom(0b10) - 1.0).abs() < TOL);
        assert!(diagram.atom(0b11).abs() < TOL);
    }

    #[test]
    fn total_correlation_values() {
        assert!((total_correlation(&dyadic(), None).unwrap() - 3.0).abs() < TOL);
        assert!((total_correlation(&triadic(), None).unwrap() - 3.0).abs() < TOL);
        assert!(total_correlation(&fair_bits(3), None).unwrap().abs() < TOL);
        let g = builtin(Builtin::GiantBit { n: 3, k: 2 }).unwrap();
        assert!((total_correlation(&g, None).unwrap() - 2.0).abs() < TOL);
    }

    #[test]
    fn dual_total_correlation_values() {
        assert!((dual_total_correlation(&dyadic(), None).unwrap() - 3.0).abs() < TOL);
        assert!((dual_total_correlation(&triadic(), None).unwrap() - 3.0).abs() < TOL);
        assert!(dual_total_correlation(&fair_bits(3), None).unwrap().abs() < TOL);
        let x = builtin(Builtin::Xor3).unwrap();
        assert!((dual_total_correlation(&x, None).unwrap() - 2.0).abs() < TOL);
    }

    #[test]
    fn caekl_values() {
        assert!((caekl(&dyadic(), None).unwrap() - 1.5).abs() < TOL);
        assert!(caekl(&fair_bits(2), None).unwrap().abs() < TOL);
        let g = builtin(Builtin::GiantBit { n: 3, k: 2 }).unwrap();
        assert!((caekl(&g, None).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn interaction_information_values() {
        assert!(interaction_information(&dyadic(), None).unwrap().abs() < TOL);
        assert!(interaction_information(&triadic(), None).unwrap().abs() < TOL);
        let x = builtin(Builtin::Xor3).unwrap();
        assert!((interaction_information(&x, None).unwrap() - 1.0).abs() < TOL);
        // two groups: plain mutual information
        let d = dyadic();
        let p = VariablePartition(vec![
            VariableSet::of(["X"]),
            VariableSet::of(["Y", "Z"]),
        ]);
        let ii = interaction_information(&d, Some(&p)).unwrap();
        let mi = comutual_information(
            &d,
            &[VariableSet::of(["X"]), VariableSet::of(["Y", "Z"])],
            &VariableSet::empty(),
        )
        .unwrap();
        assert!((ii - mi).abs() < TOL);
    }

    #[test]
    fn residual_entropy_values() {
        assert!(residual_entropy(&dyadic()).unwrap().abs() < TOL);
        assert!(residual_entropy(&triadic()).unwrap().abs() < TOL);
        assert!((residual_entropy(&fair_bits(3)).unwrap() - 3.0).abs() < TOL);
        let g = builtin(Builtin::GiantBit { n: 3, k: 2 }).unwrap();
        assert!(residual_entropy(&g).unwrap().abs() < TOL);
    }

    #[test]
    fn tse_complexity_values() {
        assert!((tse_complexity(&dyadic()).unwrap() - 2.0).abs() < TOL);
        assert!((tse_complexity(&triadic()).unwrap() - 2.0).abs() < TOL);
        assert!(tse_complexity(&fair_bits(3)).unwrap().abs() < TOL);
        // giant bit: every size-k average is 1, so Σ (1 − k/3) = 1
        let g = builtin(Builtin::GiantBit { n: 3, k: 2 }).unwrap();
        assert!((tse_complexity(&g).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn chain_rule_exact() {
        let d = triadic();
        let a = VariableSet::of(["X"]);
        let b = VariableSet::of(["Y", "Z"]);
        let lhs = entropy(&d, &a.union(&b)).unwrap();
        let rhs = entropy(&d, &a).unwrap() + conditional_entropy(&d, &b, &a).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
