//! Dependency camouflage and diffusion: distributions whose Shannon
//! structure hides higher-order relations.
//!
//! A dyadic camouflage distribution on n variables is uniform over
//! 2^(m) outcomes, m = (n−2)(n−1)/2, with alphabet size 2^(n−2) per
//! variable, such that any two variables are determined by the remaining
//! n−2 and every size-k marginal has the maximal entropy compatible with
//! that, namely min(k(n−2), m) bits. The generator realizes these
//! constraints with random F₂-linear maps: a hidden uniform word w of m
//! bits and per-variable matrices L_k with rank(stack of L_k over any
//! subset S) = min(|S|(n−2), m). Each stated property follows from the
//! rank conditions, and the verifier is still run as the ground truth.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::builtins::{builtin, Builtin};
use crate::dist::{rat, JointDistribution, Rat, VariablePartition, VariableSet};
use crate::error::{Error, Result};
use crate::shannon::entropy;
use crate::symbol::Symbol;

const ENTROPY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CamouflageSpec {
    pub n: usize,
    /// per-variable alphabet size, 2^(n−2)
    pub alphabet_size: usize,
    /// hidden word length in bits, (n−2)(n−1)/2
    pub word_bits: usize,
    /// support size, 2^word_bits
    pub outcome_count: usize,
}

impl CamouflageSpec {
    pub fn new(n: usize) -> Result<CamouflageSpec> {
        if n < 3 {
            return Err(Error::ArityMismatch { expected: 3, got: n });
        }
        let word_bits = (n - 2) * (n - 1) / 2;
        Ok(CamouflageSpec {
            n,
            alphabet_size: 1 << (n - 2),
            word_bits,
            outcome_count: 1 << word_bits,
        })
    }

    /// Maximal entropy of a size-k marginal: min(k(n−2), word_bits) bits.
    pub fn target_entropy(&self, k: usize) -> f64 {
        (k * (self.n - 2)).min(self.word_bits) as f64
    }
}

#[derive(Clone, Debug)]
pub struct CamouflageReport {
    pub pass: bool,
    pub violations: Vec<String>,
}

pub fn camouflage_verify(d: &JointDistribution) -> CamouflageReport {
    let mut violations = Vec::new();
    let n = d.variables().len();
    let spec = match CamouflageSpec::new(n) {
        Ok(s) => s,
        Err(_) => {
            return CamouflageReport {
                pass: false,
                violations: vec![format!("needs at least 3 variables, got {n}")],
            }
        }
    };
    if d.support_size() != spec.outcome_count {
        violations.push(format!(
            "support size {} differs from {}",
            d.support_size(),
            spec.outcome_count
        ));
    }
    let uniform: Rat = rat(1, spec.outcome_count as i64);
    if d.outcomes().any(|(_, p)| *p != uniform) {
        violations.push("not uniform over its support".to_string());
    }
    for (i, alphabet) in d.alphabets().iter().enumerate() {
        if alphabet.len() != spec.alphabet_size {
            violations.push(format!(
                "variable {} has alphabet size {}, expected {}",
                d.variables()[i],
                alphabet.len(),
                spec.alphabet_size
            ));
        }
    }
    // every pair determined by the complementary n−2 variables
    for i in 0..n {
        for j in (i + 1)..n {
            let mut seen: BTreeMap<Vec<Symbol>, (Symbol, Symbol)> = BTreeMap::new();
            for (t, _) in d.outcomes() {
                let rest: Vec<Symbol> = (0..n)
                    .filter(|&k| k != i && k != j)
                    .map(|k| t[k].clone())
                    .collect();
                let pair = (t[i].clone(), t[j].clone());
                if let Some(prev) = seen.insert(rest, pair.clone()) {
                    if prev != pair {
                        violations.push(format!(
                            "pair ({}, {}) not determined by the other {} variables",
                            d.variables()[i],
                            d.variables()[j],
                            n - 2
                        ));
                        break;
                    }
                }
            }
        }
    }
    // every size-k marginal sits at the maximal entropy target
    'sizes: for k in 1..=n {
        for subset in itertools::Itertools::combinations(0..n, k) {
            let vars: VariableSet = subset
                .iter()
                .map(|&i| d.variables()[i].clone())
                .collect();
            match entropy(d, &vars) {
                Ok(h) => {
                    let target = spec.target_entropy(k);
                    if (h - target).abs() > ENTROPY_TOL {
                        violations.push(format!(
                            "size-{k} marginal entropy {h:.6} differs from target {target:.6}"
                        ));
                        continue 'sizes;
                    }
                }
                Err(e) => {
                    violations.push(format!("entropy of size-{k} subset failed: {e}"));
                    continue 'sizes;
                }
            }
        }
    }
    CamouflageReport {
        pass: violations.is_empty(),
        violations,
    }
}

/// Rank of a set of F₂ row vectors held as bitmasks.
fn f2_rank(rows: &[u32]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for &row in rows {
        let mut r = row;
        for &b in &basis {
            let high = 31 - b.leading_zeros();
            if r >> high & 1 == 1 {
                r ^= b;
            }
        }
        if r != 0 {
            basis.push(r);
        }
    }
    basis.len()
}

pub fn camouflage_generate(n: usize, seed: u64) -> Result<JointDistribution> {
    if !(3..=6).contains(&n) {
        return Err(Error::SupportTooLarge { got: n, limit: 6 });
    }
    let spec = CamouflageSpec::new(n)?;
    let (rows_per, m) = (n - 2, spec.word_bits);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    // the first variable reads the top word bits, so its column is in
    // increasing lexicographic order as the word counts up
    let first: Vec<u32> = (0..rows_per)
        .map(|r| 1u32 << (m - 1 - r))
        .collect();
    for _attempt in 0..200_000u64 {
        let mut maps: Vec<Vec<u32>> = vec![first.clone()];
        for _ in 1..n {
            maps.push(
                (0..rows_per)
                    .map(|_| rng.gen_range(1..(1u32 << m)))
                    .collect(),
            );
        }
        let ok = (1u32..1 << n).all(|subset| {
            let stacked: Vec<u32> = (0..n)
                .filter(|&k| subset >> k & 1 == 1)
                .flat_map(|k| maps[k].iter().copied())
                .collect();
            f2_rank(&stacked) == (stacked.len()).min(m)
        });
        if !ok {
            continue;
        }
        let names: Vec<String> = (0..n).map(|i| format!("V{i}")).collect();
        let rows: Vec<(Vec<Symbol>, Rat)> = (0..spec.outcome_count as u32)
            .map(|w| {
                let tuple = maps
                    .iter()
                    .map(|l| {
                        let mut v = 0u64;
                        for &row in l {
                            v = v << 1 | ((row & w).count_ones() & 1) as u64;
                        }
                        Symbol::int(v)
                    })
                    .collect();
                (tuple, rat(1, spec.outcome_count as i64))
            })
            .collect();
        let d = JointDistribution::from_outcomes(names, rows)?;
        if camouflage_verify(&d).pass {
            return Ok(d);
        }
    }
    Err(Error::SearchExhausted)
}

/// overlay(parity(n), camouflage(n)): a parity relation hidden under
/// camouflage. For n = 4 the published table is used.
pub fn masked_parity(n: usize) -> Result<JointDistribution> {
    let mask = if n == 4 {
        builtin(Builtin::Camouflage4)?
    } else {
        camouflage_generate(n, 0)?
    };
    builtin(Builtin::Parity { n })?.overlay(&mask)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// single target variable copied through
    Identity,
    /// xor of binary target variables
    Parity,
}

#[derive(Clone, Debug)]
pub struct DiffusionEntry {
    pub source: String,
    pub targets: Vec<String>,
    pub reduction: Reduction,
}

#[derive(Clone, Debug)]
pub struct DiffusionMap {
    pub entries: Vec<DiffusionEntry>,
}

impl DiffusionMap {
    /// Each binary source variable spread over a fresh pair of bits whose
    /// xor reproduces it.
    pub fn parity_pairs(d: &JointDistribution) -> DiffusionMap {
        let entries = d
            .variables()
            .iter()
            .map(|v| DiffusionEntry {
                source: v.clone(),
                targets: vec![format!("{v}0"), format!("{v}1")],
                reduction: Reduction::Parity,
            })
            .collect();
        DiffusionMap { entries }
    }

    pub fn identity(d: &JointDistribution) -> DiffusionMap {
        let entries = d
            .variables()
            .iter()
            .map(|v| DiffusionEntry {
                source: v.clone(),
                targets: vec![v.clone()],
                reduction: Reduction::Identity,
            })
            .collect();
        DiffusionMap { entries }
    }

    fn validate(&self, d: &JointDistribution) -> Result<()> {
        let sources: BTreeSet<&String> = self.entries.iter().map(|e| &e.source).collect();
        let vars: BTreeSet<&String> = d.variables().iter().collect();
        if sources != vars || self.entries.len() != d.variables().len() {
            return Err(Error::MapInvalid(
                "sources must cover the distribution's variables exactly".into(),
            ));
        }
        let mut seen: BTreeSet<&String> = BTreeSet::new();
        for e in &self.entries {
            for t in &e.targets {
                if !seen.insert(t) {
                    return Err(Error::MapInvalid(format!(
                        "target {t} appears more than once"
                    )));
                }
            }
            match e.reduction {
                Reduction::Identity => {
                    if e.targets.len() != 1 {
                        return Err(Error::MapInvalid(format!(
                            "identity reduction of {} needs exactly one target",
                            e.source
                        )));
                    }
                }
                Reduction::Parity => {
                    if e.targets.is_empty() {
                        return Err(Error::MapInvalid(format!(
                            "parity reduction of {} needs targets",
                            e.source
                        )));
                    }
                    let binary = d
                        .alphabet(&e.source)?
                        .iter()
                        .all(|s| matches!(s.as_int(), Some(0) | Some(1)));
                    if !binary {
                        return Err(Error::MapInvalid(format!(
                            "parity reduction of {} needs a binary source",
                            e.source
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Preimages of a source symbol under an entry's reduction.
fn preimages(entry: &DiffusionEntry, s: &Symbol) -> Result<Vec<Vec<Symbol>>> {
    match entry.reduction {
        Reduction::Identity => Ok(vec![vec![s.clone()]]),
        Reduction::Parity => {
            let want = s
                .as_int()
                .filter(|&v| v <= 1)
                .ok_or_else(|| Error::MapInvalid(format!("non-binary symbol {s}")))?;
            let k = entry.targets.len();
            Ok((0..1u64 << k)
                .filter(|bits| (bits.count_ones() as u64 & 1) == want)
                .map(|bits| {
                    (0..k)
                        .map(|i| Symbol::int(bits >> (k - 1 - i) & 1))
                        .collect()
                })
                .collect())
        }
    }
}

/// Spread `d` over the map's target variables: reductions recover each
/// source symbol and the free degrees are filled uniformly.
pub fn diffuse(d: &JointDistribution, map: &DiffusionMap) -> Result<JointDistribution> {
    map.validate(d)?;
    let names: Vec<String> = map
        .entries
        .iter()
        .flat_map(|e| e.targets.iter().cloned())
        .collect();
    let source_idx: Vec<usize> = map
        .entries
        .iter()
        .map(|e| d.index_of(&e.source))
        .collect::<Result<_>>()?;
    let mut rows: Vec<(Vec<Symbol>, Rat)> = Vec::new();
    for (t, p) in d.outcomes() {
        let pres: Vec<Vec<Vec<Symbol>>> = map
            .entries
            .iter()
            .zip(&source_idx)
            .map(|(e, &i)| preimages(e, &t[i]))
            .collect::<Result<_>>()?;
        let count: usize = pres.iter().map(|v| v.len()).product();
        let share = p / Rat::from_integer((count as i64).into());
        let mut stack = vec![0usize; pres.len()];
        loop {
            let tuple: Vec<Symbol> = pres
                .iter()
                .zip(&stack)
                .flat_map(|(options, &i)| options[i].iter().cloned())
                .collect();
            rows.push((tuple, share.clone()));
            let mut at = pres.len();
            loop {
                if at == 0 {
                    break;
                }
                at -= 1;
                stack[at] += 1;
                if stack[at] < pres[at].len() {
                    break;
                }
                stack[at] = 0;
                if at == 0 {
                    at = usize::MAX;
                    break;
                }
            }
            if at == usize::MAX {
                break;
            }
        }
    }
    JointDistribution::from_outcomes(names, rows)
}

/// Apply the map's reductions to a diffused distribution, recovering a
/// distribution over the source variables.
pub fn reduce(d: &JointDistribution, map: &DiffusionMap) -> Result<JointDistribution> {
    let names: Vec<String> = map.entries.iter().map(|e| e.source.clone()).collect();
    let target_idx: Vec<Vec<usize>> = map
        .entries
        .iter()
        .map(|e| e.targets.iter().map(|t| d.index_of(t)).collect())
        .collect::<Result<_>>()?;
    let mut merged: BTreeMap<Vec<Symbol>, Rat> = BTreeMap::new();
    for (t, p) in d.outcomes() {
        let tuple: Vec<Symbol> = map
            .entries
            .iter()
            .zip(&target_idx)
            .map(|(e, idx)| match e.reduction {
                Reduction::Identity => Ok(t[idx[0]].clone()),
                Reduction::Parity => {
                    let mut acc = 0u64;
                    for &i in idx {
                        acc ^= t[i].as_int().filter(|&v| v <= 1).ok_or_else(|| {
                            Error::MapInvalid(format!("non-binary symbol {}", t[i]))
                        })?;
                    }
                    Ok(Symbol::int(acc))
                }
            })
            .collect::<Result<_>>()?;
        *merged.entry(tuple).or_insert_with(|| Rat::from_integer(0.into())) += p.clone();
    }
    JointDistribution::from_outcomes(names, merged.into_iter().collect::<Vec<_>>())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationTest {
    /// xor of the reduced symbols is constant on the support
    Xor,
    /// all reduced symbols agree on every support outcome
    Equality,
}

/// Exhaustive search for hidden relations: partitions of variable subsets
/// into `source_arity` cells, each cell reduced by parity, kept when the
/// reduced symbols satisfy the relation exactly and no reduced symbol is
/// constant. Returns (partition, reduction family) pairs.
pub fn recover_search(
    d: &JointDistribution,
    source_arity: usize,
    test: RelationTest,
) -> Result<Vec<(VariablePartition, String)>> {
    let n = d.variables().len();
    if n > 8 {
        return Err(Error::SearchBudgetExceeded(n as u64));
    }
    if source_arity < 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: source_arity,
        });
    }
    let binary: Vec<bool> = d
        .alphabets()
        .iter()
        .map(|a| a.iter().all(|s| matches!(s.as_int(), Some(0) | Some(1))))
        .collect();
    let mut found = Vec::new();
    for subset in 1u32..1 << n {
        let members: Vec<usize> = (0..n).filter(|&i| subset >> i & 1 == 1).collect();
        if members.len() < source_arity || members.iter().any(|&i| !binary[i]) {
            continue;
        }
        let m = d.marginal_by_indices(&members)?;
        let support: Vec<Vec<u64>> = m
            .outcomes()
            .map(|(t, _)| t.iter().map(|s| s.as_int().unwrap()).collect())
            .collect();
        for partition in crate::util::set_partitions_bounded(members.len(), source_arity) {
            if partition.len() != source_arity {
                continue;
            }
            let reduced: Vec<Vec<u64>> = support
                .iter()
                .map(|row| {
                    partition
                        .iter()
                        .map(|cell| cell.iter().fold(0u64, |acc, &i| acc ^ row[i]))
                        .collect()
                })
                .collect();
            let nondegenerate = (0..source_arity).all(|c| {
                reduced.iter().any(|r| r[c] != reduced[0][c])
            });
            if !nondegenerate {
                continue;
            }
            let holds = match test {
                RelationTest::Xor => {
                    let first: u64 = reduced[0].iter().fold(0, |a, &v| a ^ v);
                    reduced
                        .iter()
                        .all(|r| r.iter().fold(0u64, |a, &v| a ^ v) == first)
                }
                RelationTest::Equality => reduced
                    .iter()
                    .all(|r| r.iter().all(|&v| v == r[0])),
            };
            if holds {
                let cells: Vec<VariableSet> = partition
                    .iter()
                    .map(|cell| {
                        cell.iter()
                            .map(|&i| d.variables()[members[i]].clone())
                            .collect()
                    })
                    .collect();
                found.push((VariablePartition(cells), "parity".to_string()));
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shannon::{idiagram, residual_entropy};

    #[test]
    fn published_table_verifies() {
        let d = builtin(Builtin::Camouflage4).unwrap();
        let report = camouflage_verify(&d);
        assert!(report.pass, "{:?}", report.violations);
    }

    #[test]
    fn mutations_and_impostors_fail() {
        let d = builtin(Builtin::Camouflage4).unwrap();
        let mut rows: Vec<(Vec<Symbol>, Rat)> =
            d.outcomes().map(|(t, p)| (t.clone(), p.clone())).collect();
        rows[0].0[0] = Symbol::int(1);
        let mutated =
            JointDistribution::from_outcomes(d.variables().to_vec(), rows).unwrap();
        assert!(!camouflage_verify(&mutated).pass);

        let g = builtin(Builtin::GiantBit { n: 4, k: 2 }).unwrap();
        assert!(!camouflage_verify(&g).pass);
    }

    #[test]
    fn generation_passes_the_verifier() {
        for n in 3..=5 {
            for seed in 0..3 {
                let d = camouflage_generate(n, seed).unwrap();
                let report = camouflage_verify(&d);
                assert!(report.pass, "n={n} seed={seed}: {:?}", report.violations);
            }
        }
        assert!(camouflage_generate(7, 0).is_err());
    }

    #[test]
    fn masked_parity_hides_the_relation() {
        let d = masked_parity(4).unwrap();
        assert_eq!(d.support_size(), 64);
        let diagram = idiagram(&d).unwrap();
        assert!(diagram.sum_of_order_at_least(3).abs() < 1e-9);
        assert!(residual_entropy(&d).unwrap().abs() < 1e-9);
    }

    #[test]
    fn diffuse_plants_a_spread_parity() {
        let xor = builtin(Builtin::Xor3).unwrap();
        let map = DiffusionMap::parity_pairs(&xor);
        let spread = diffuse(&xor, &map).unwrap();
        assert_eq!(spread.variables().len(), 6);
        for (t, _) in spread.outcomes() {
            let total: u64 = t.iter().map(|s| s.as_int().unwrap()).fold(0, |a, v| a ^ v);
            assert_eq!(total, 0);
        }
        let back = reduce(&spread, &map).unwrap();
        assert_eq!(back.variables(), xor.variables());
        let a: Vec<_> = back.outcomes().collect();
        let b: Vec<_> = xor.outcomes().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn identity_map_round_trips() {
        let d = builtin(Builtin::Dyadic).unwrap();
        let map = DiffusionMap::identity(&d);
        let same = diffuse(&d, &map).unwrap();
        let a: Vec<_> = same.outcomes().collect();
        let b: Vec<_> = d.outcomes().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn recovery_finds_planted_relations() {
        let xor = builtin(Builtin::Xor3).unwrap();
        let spread = diffuse(&xor, &DiffusionMap::parity_pairs(&xor)).unwrap();
        let hits = recover_search(&spread, 3, RelationTest::Xor).unwrap();
        let planted = VariablePartition(vec![
            VariableSet::of(["V00", "V01"]),
            VariableSet::of(["V10", "V11"]),
            VariableSet::of(["V20", "V21"]),
        ]);
        assert!(hits.iter().any(|(p, _)| *p == planted), "{hits:?}");

        let rows: Vec<(Vec<Symbol>, Rat)> = (0..64u64)
            .map(|w| {
                (
                    (0..6).map(|i| Symbol::int(w >> (5 - i) & 1)).collect(),
                    rat(1, 64),
                )
            })
            .collect();
        let names: Vec<String> = (0..6).map(|i| format!("B{i}")).collect();
        let indep = JointDistribution::from_outcomes(names, rows).unwrap();
        assert!(recover_search(&indep, 3, RelationTest::Xor)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn recovery_finds_the_shared_subvariable() {
        let tr = builtin(Builtin::Triadic).unwrap();
        let expanded = tr.expand_binary(&[2, 2, 2]).unwrap();
        let hits = recover_search(&expanded, 3, RelationTest::Equality).unwrap();
        let planted = VariablePartition(vec![
            VariableSet::of(["X1"]),
            VariableSet::of(["Y1"]),
            VariableSet::of(["Z1"]),
        ]);
        assert!(hits.iter().any(|(p, _)| *p == planted), "{hits:?}");
    }
}
