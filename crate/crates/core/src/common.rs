//! Common-information measures defined through auxiliary variables:
//! Gács–Körner, minimal-sufficient-statistic, functional, Wyner, and exact
//! common information.
//!
//! The Wyner and exact quantities are nonconvex optimizations; they are
//! reported as [`BoundedValue`] brackets rather than point estimates. The
//! dual total correlation supplies the lower bound, a deterministic
//! auxiliary-variable pass plus multi-start kernel optimization supplies the
//! upper bound.

use std::collections::BTreeMap;

use num::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::dist::{JointDistribution, Rat, VariableSet};
use crate::error::{Error, Result};
use crate::shannon::dual_total_correlation;
use crate::symbol::Symbol;
use crate::util::for_each_set_partition;

const FUNCTIONAL_SUPPORT_LIMIT: usize = 12;
const CI_RESIDUAL_TOL: f64 = 1e-9;

/// A value pinned between certified lower and upper bounds.
#[derive(Clone, Debug)]
pub struct BoundedValue {
    pub lower: f64,
    pub upper: f64,
    pub certificate: String,
}

impl BoundedValue {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Midpoint, for display when the bracket is tight.
    pub fn value(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// A labeled partition of a finite outcome domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomePartition {
    /// The partitioned domain, in sorted order.
    pub domain: Vec<Vec<Symbol>>,
    /// Disjoint covering cells, as indices into `domain`.
    pub cells: Vec<Vec<usize>>,
}

impl OutcomePartition {
    pub fn cell_of(&self, index: usize) -> usize {
        self.cells
            .iter()
            .position(|c| c.contains(&index))
            .expect("index covered by some cell")
    }
}

/// Support of a distribution restricted to disjoint variable groups, with
/// each outcome tagged by its per-group projection id. Shared scaffolding
/// for the auxiliary-variable searches.
struct Grouped {
    /// probability of each support outcome
    probs: Vec<f64>,
    /// per group: outcome index -> group-outcome id
    ids: Vec<Vec<usize>>,
    /// per group: number of distinct group outcomes
    sizes: Vec<usize>,
    joint_entropy: f64,
}

impl Grouped {
    fn new(d: &JointDistribution, groups: &[VariableSet]) -> Result<Grouped> {
        if groups.len() < 2 {
            return Err(Error::PartitionInvalid("need at least 2 groups".into()));
        }
        for (i, a) in groups.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::EmptySet);
            }
            for b in &groups[i + 1..] {
                if !a.is_disjoint(b) {
                    return Err(Error::OverlappingSets);
                }
            }
        }
        let union = groups
            .iter()
            .fold(VariableSet::empty(), |acc, g| acc.union(g));
        let m = d.marginal(&union)?;
        let group_indices: Vec<Vec<usize>> = groups
            .iter()
            .map(|g| m.indices(g))
            .collect::<Result<_>>()?;
        let outcomes: Vec<(Vec<Symbol>, f64)> = m
            .outcomes()
            .map(|(t, p)| (t.clone(), p.to_f64().unwrap()))
            .collect();
        let mut ids = Vec::new();
        let mut sizes = Vec::new();
        for idx in &group_indices {
            let mut seen: BTreeMap<Vec<&Symbol>, usize> = BTreeMap::new();
            let mut col = Vec::with_capacity(outcomes.len());
            for (t, _) in &outcomes {
                let key: Vec<&Symbol> = idx.iter().map(|&i| &t[i]).collect();
                let next = seen.len();
                col.push(*seen.entry(key).or_insert(next));
            }
            sizes.push(seen.len());
            ids.push(col);
        }
        let joint_entropy = outcomes.iter().map(|(_, p)| -p * p.log2()).sum();
        Ok(Grouped {
            probs: outcomes.into_iter().map(|(_, p)| p).collect(),
            ids,
            sizes,
            joint_entropy,
        })
    }

    fn len(&self) -> usize {
        self.probs.len()
    }

    /// Total correlation of the conditional distribution with (unnormalized)
    /// outcome weights `w`. Zero iff the groups are conditionally
    /// independent under those weights.
    fn conditional_tc(&self, w: &[f64]) -> f64 {
        let mass: f64 = w.iter().sum();
        if mass <= 0.0 {
            return 0.0;
        }
        let mut h_joint = 0.0;
        for &wj in w {
            if wj > 0.0 {
                let p = wj / mass;
                h_joint -= p * p.log2();
            }
        }
        let mut sum_marginals = 0.0;
        for (g, col) in self.ids.iter().enumerate() {
            let mut marg = vec![0.0; self.sizes[g]];
            for (j, &wj) in w.iter().enumerate() {
                marg[col[j]] += wj;
            }
            for m in marg {
                if m > 0.0 {
                    let p = m / mass;
                    sum_marginals -= p * p.log2();
                }
            }
        }
        sum_marginals - h_joint
    }

    /// For a deterministic auxiliary variable given as support cells,
    /// return (feasible, H(V), I(joint : V), max conditional TC).
    fn assess_partition(&self, cells: &[Vec<usize>]) -> (bool, f64, f64, f64) {
        let mut h_v = 0.0;
        let mut h_joint_given_v = 0.0;
        let mut worst = 0.0f64;
        for cell in cells {
            let w: Vec<f64> = cell.iter().map(|&j| self.probs[j]).collect();
            let mass: f64 = w.iter().sum();
            if mass <= 0.0 {
                continue;
            }
            h_v -= mass * mass.log2();
            for &wj in &w {
                if wj > 0.0 {
                    let p = wj / mass;
                    h_joint_given_v -= mass * p * p.log2();
                }
            }
            worst = worst.max(self.conditional_tc(&w));
        }
        let feasible = worst <= CI_RESIDUAL_TOL;
        let mi = self.joint_entropy - h_joint_given_v;
        (feasible, h_v, mi, worst)
    }
}

/// Gács–Körner common information: entropy of the finest common coarsening
/// of the groups, obtained from connected components of the co-occurrence
/// graph.
pub fn gacs_korner(d: &JointDistribution, groups: &[VariableSet]) -> Result<f64> {
    let g = Grouped::new(d, groups)?;
    // union-find over (group, group-outcome id) nodes
    let offsets: Vec<usize> = g
        .sizes
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let total: usize = g.sizes.iter().sum();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for j in 0..g.len() {
        let first = offsets[0] + g.ids[0][j];
        for k in 1..g.ids.len() {
            let node = offsets[k] + g.ids[k][j];
            let (a, b) = (find(&mut parent, first), find(&mut parent, node));
            parent[a] = b;
        }
    }
    // entropy of the component label as a random variable on the support
    let mut mass: BTreeMap<usize, f64> = BTreeMap::new();
    for j in 0..g.len() {
        let c = find(&mut parent, offsets[0] + g.ids[0][j]);
        *mass.entry(c).or_insert(0.0) += g.probs[j];
    }
    Ok(mass.values().map(|&p| if p > 0.0 { -p * p.log2() } else { 0.0 }).sum())
}

/// Minimal sufficient statistic of `of` about `about`: the partition of
/// `of`-outcomes grouping symbols with identical conditional distributions
/// over `about`. Exact rational comparison.
pub fn mss(
    d: &JointDistribution,
    of: &VariableSet,
    about: &VariableSet,
) -> Result<OutcomePartition> {
    if of.is_empty() || about.is_empty() {
        return Err(Error::EmptySet);
    }
    if !of.is_disjoint(about) {
        return Err(Error::OverlappingSets);
    }
    let m = d.marginal(&of.union(about))?;
    let of_idx = m.indices(of)?;
    let about_idx = m.indices(about)?;
    // conditional rows p(about | of outcome), exactly
    let mut rows: BTreeMap<Vec<Symbol>, BTreeMap<Vec<Symbol>, Rat>> = BTreeMap::new();
    for (t, p) in m.outcomes() {
        let of_key: Vec<Symbol> = of_idx.iter().map(|&i| t[i].clone()).collect();
        let about_key: Vec<Symbol> = about_idx.iter().map(|&i| t[i].clone()).collect();
        *rows
            .entry(of_key)
            .or_default()
            .entry(about_key)
            .or_insert_with(Rat::zero) += p;
    }
    let domain: Vec<Vec<Symbol>> = rows.keys().cloned().collect();
    let mut cells: Vec<(BTreeMap<Vec<Symbol>, Rat>, Vec<usize>)> = Vec::new();
    for (i, row) in rows.values().enumerate() {
        let mass: Rat = row.values().sum();
        let normalized: BTreeMap<Vec<Symbol>, Rat> = row
            .iter()
            .map(|(k, v)| (k.clone(), v / &mass))
            .collect();
        match cells.iter_mut().find(|(r, _)| *r == normalized) {
            Some((_, members)) => members.push(i),
            None => cells.push((normalized, vec![i])),
        }
    }
    Ok(OutcomePartition {
        domain,
        cells: cells.into_iter().map(|(_, m)| m).collect(),
    })
}

/// MSS common information: entropy of the join of MSS(group_i about the
/// rest) over all groups, as a random variable on the support.
pub fn mss_common_information(d: &JointDistribution, groups: &[VariableSet]) -> Result<f64> {
    if groups.len() < 2 {
        return Err(Error::PartitionInvalid("need at least 2 groups".into()));
    }
    let union = groups
        .iter()
        .fold(VariableSet::empty(), |acc, g| acc.union(g));
    let m = d.marginal(&union)?;
    let mut statistics: Vec<(Vec<usize>, OutcomePartition)> = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        let rest = groups
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(VariableSet::empty(), |acc, (_, h)| acc.union(h));
        let partition = mss(&m, g, &rest)?;
        statistics.push((m.indices(g)?, partition));
    }
    // join: label each support outcome with the tuple of MSS cell indices
    let mut mass: BTreeMap<Vec<usize>, Rat> = BTreeMap::new();
    for (t, p) in m.outcomes() {
        let label: Vec<usize> = statistics
            .iter()
            .map(|(idx, partition)| {
                let key: Vec<Symbol> = idx.iter().map(|&i| t[i].clone()).collect();
                let pos = partition
                    .domain
                    .iter()
                    .position(|k| *k == key)
                    .expect("support outcome in MSS domain");
                partition.cell_of(pos)
            })
            .collect();
        *mass.entry(label).or_insert_with(Rat::zero) += p;
    }
    Ok(mass
        .values()
        .map(|p| {
            let p = p.to_f64().unwrap();
            -p * p.log2()
        })
        .sum())
}

/// Functional common information: minimum H(V) over deterministic
/// V = f(joint outcome) rendering the groups conditionally independent.
/// Exhaustive over support partitions.
pub fn functional_common_information(
    d: &JointDistribution,
    groups: &[VariableSet],
) -> Result<f64> {
    let g = Grouped::new(d, groups)?;
    if g.len() > FUNCTIONAL_SUPPORT_LIMIT {
        return Err(Error::SupportTooLarge {
            got: g.len(),
            limit: FUNCTIONAL_SUPPORT_LIMIT,
        });
    }
    let mut best = f64::INFINITY;
    for_each_set_partition(g.len(), |cells| {
        let (feasible, h_v, _, _) = g.assess_partition(cells);
        if feasible {
            best = best.min(h_v);
        }
        true
    });
    Ok(best)
}

#[derive(Clone, Copy)]
enum Objective {
    /// minimize I(joint : V)
    Wyner,
    /// minimize H(V)
    Exact,
}

/// Stochastic-kernel search over q(v | outcome): penalized multi-start
/// gradient descent on row logits. Returns the best feasible objective, if
/// any restart lands inside the residual tolerance.
fn kernel_search(
    g: &Grouped,
    objective: Objective,
    v_cardinality: usize,
    restarts: usize,
    seed: u64,
) -> Result<Option<f64>> {
    let s = g.len();
    let k = v_cardinality.max(1);
    let evaluate = |theta: &[f64], lambda: f64| -> (f64, f64, f64) {
        // rows of q via softmax
        let mut q = vec![0.0; s * k];
        for j in 0..s {
            let row = &theta[j * k..(j + 1) * k];
            let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut z = 0.0;
            for v in 0..k {
                let e = (row[v] - max).exp();
                q[j * k + v] = e;
                z += e;
            }
            for v in 0..k {
                q[j * k + v] /= z;
            }
        }
        let mut h_v = 0.0;
        let mut mi = 0.0;
        let mut residual = 0.0f64;
        let mut w = vec![0.0; s];
        for v in 0..k {
            let mut pv = 0.0;
            for j in 0..s {
                w[j] = g.probs[j] * q[j * k + v];
                pv += w[j];
            }
            if pv <= 1e-300 {
                continue;
            }
            h_v -= pv * pv.log2();
            for j in 0..s {
                if w[j] > 0.0 {
                    mi += w[j] * (q[j * k + v] / pv).log2();
                }
            }
            residual = residual.max(g.conditional_tc(&w));
        }
        let base = match objective {
            Objective::Wyner => mi,
            Objective::Exact => h_v,
        };
        (base + lambda * residual, base, residual)
    };

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut best: Option<f64> = None;
    for _ in 0..restarts {
        let mut theta: Vec<f64> = (0..s * k).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut lambda = 10.0;
        let mut feasible_value = None;
        while lambda < 1e12 {
            // plain gradient descent with numeric gradient and backtracking
            let mut step = 0.5;
            let (mut f0, _, _) = evaluate(&theta, lambda);
            for _ in 0..200 {
                if !f0.is_finite() {
                    return Err(Error::OptimizationDiverged(
                        "non-finite objective".into(),
                    ));
                }
                let eps = 1e-5;
                let mut grad = vec![0.0; theta.len()];
                for i in 0..theta.len() {
                    let orig = theta[i];
                    theta[i] = orig + eps;
                    let (fp, _, _) = evaluate(&theta, lambda);
                    theta[i] = orig - eps;
                    let (fm, _, _) = evaluate(&theta, lambda);
                    theta[i] = orig;
                    grad[i] = (fp - fm) / (2.0 * eps);
                }
                let norm: f64 = grad.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm < 1e-10 {
                    break;
                }
                let mut improved = false;
                while step > 1e-9 {
                    let trial: Vec<f64> = theta
                        .iter()
                        .zip(&grad)
                        .map(|(t, g)| t - step * g / norm)
                        .collect();
                    let (f1, _, _) = evaluate(&trial, lambda);
                    if f1 < f0 - 1e-14 {
                        theta = trial;
                        f0 = f1;
                        improved = true;
                        step *= 1.2;
                        break;
                    }
                    step *= 0.5;
                }
                if !improved {
                    break;
                }
            }
            let (_, base, residual) = evaluate(&theta, lambda);
            if residual < 1e-8 {
                feasible_value = Some(base);
                break;
            }
            lambda *= 10.0;
        }
        if let Some(v) = feasible_value {
            best = Some(best.map_or(v, |b: f64| b.min(v)));
        }
    }
    Ok(best)
}

fn common_information_bounds(
    d: &JointDistribution,
    groups: &[VariableSet],
    objective: Objective,
    v_cardinality: Option<usize>,
    restarts: usize,
    seed: u64,
) -> Result<BoundedValue> {
    let g = Grouped::new(d, groups)?;
    let partition = crate::dist::VariablePartition(groups.to_vec());
    let union = groups
        .iter()
        .fold(VariableSet::empty(), |acc, s| acc.union(s));
    let m = d.marginal(&union)?;
    let lower = dual_total_correlation(&m, Some(&partition))?.max(0.0);

    let mut upper = f64::INFINITY;
    let mut how = Vec::new();
    // deterministic pass: feasible support partitions
    if g.len() <= FUNCTIONAL_SUPPORT_LIMIT {
        let mut det_best = f64::INFINITY;
        for_each_set_partition(g.len(), |cells| {
            let (feasible, h_v, mi, _) = g.assess_partition(cells);
            if feasible {
                det_best = det_best.min(match objective {
                    Objective::Wyner => mi,
                    Objective::Exact => h_v,
                });
            }
            true
        });
        if det_best < upper {
            upper = det_best;
            how.push("deterministic auxiliary search".to_string());
        }
    } else {
        // identity auxiliary is always feasible
        let cells: Vec<Vec<usize>> = (0..g.len()).map(|j| vec![j]).collect();
        let (_, h_v, mi, _) = g.assess_partition(&cells);
        upper = match objective {
            Objective::Wyner => mi,
            Objective::Exact => h_v,
        };
        how.push("identity auxiliary".to_string());
    }
    let cardinality = v_cardinality.unwrap_or_else(|| g.len());
    if restarts > 0 {
        if let Some(found) = kernel_search(&g, objective, cardinality, restarts, seed)? {
            if found < upper - 1e-12 {
                upper = found;
                how.push(format!(
                    "stochastic kernel search (|V|={cardinality}, {restarts} restarts)"
                ));
            }
        }
    }
    let certificate = format!(
        "lower: dual total correlation; upper: {}",
        how.join(" refined by ")
    );
    Ok(BoundedValue {
        lower: lower.min(upper),
        upper,
        certificate,
    })
}

/// Wyner common information bracket: min I(joint : V) over auxiliaries
/// making the groups conditionally independent.
pub fn wyner_common_information(
    d: &JointDistribution,
    groups: &[VariableSet],
    v_cardinality: Option<usize>,
    restarts: usize,
    seed: u64,
) -> Result<BoundedValue> {
    common_information_bounds(d, groups, Objective::Wyner, v_cardinality, restarts, seed)
}

/// Exact common information bracket: min H(V) over the same feasible set.
pub fn exact_common_information(
    d: &JointDistribution,
    groups: &[VariableSet],
    v_cardinality: Option<usize>,
    restarts: usize,
    seed: u64,
) -> Result<BoundedValue> {
    common_information_bounds(d, groups, Objective::Exact, v_cardinality, restarts, seed)
}

/// Singleton groups over all of `d`'s variables, the default for the
/// published table.
pub fn singleton_groups(d: &JointDistribution) -> Vec<VariableSet> {
    d.variables()
        .iter()
        .map(|v| VariableSet::of([v.clone()]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::{builtin, Builtin};
    use crate::dist::rat;

    const TOL: f64 = 1e-9;

    fn dyadic() -> JointDistribution {
        builtin(Builtin::Dyadic).unwrap()
    }

    fn triadic() -> JointDistribution {
        builtin(Builtin::Triadic).unwrap()
    }

    fn independent_pair() -> JointDistribution {
        JointDistribution::from_outcomes(
            ["A", "B"],
            (0..4)
                .map(|w| {
                    (
                        vec![Symbol::int(w >> 1), Symbol::int(w & 1)],
                        rat(1, 4),
                    )
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn gacs_korner_distinguishes_the_pair() {
        assert!(gacs_korner(&dyadic(), &singleton_groups(&dyadic())).unwrap().abs() < TOL);
        let k = gacs_korner(&triadic(), &singleton_groups(&triadic())).unwrap();
        assert!((k - 1.0).abs() < TOL);
    }

    #[test]
    fn gacs_korner_of_giant_bit_is_the_shared_bit() {
        let g = builtin(Builtin::GiantBit { n: 3, k: 2 }).unwrap();
        assert!((gacs_korner(&g, &singleton_groups(&g)).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn gacs_korner_of_independent_pair_is_zero() {
        let d = independent_pair();
        assert!(gacs_korner(&d, &singleton_groups(&d)).unwrap().abs() < TOL);
    }

    #[test]
    fn mss_of_independent_variables_is_trivial() {
        let d = independent_pair();
        let p = mss(&d, &VariableSet::of(["A"]), &VariableSet::of(["B"])).unwrap();
        assert_eq!(p.cells.len(), 1);
    }

    #[test]
    fn mss_about_itself_needs_full_resolution() {
        // MSS of X about (Y,Z) on the dyadic table: every conditional row
        // differs, so cells are singletons.
        let d = dyadic();
        let p = mss(&d, &VariableSet::of(["X"]), &VariableSet::of(["Y", "Z"])).unwrap();
        assert_eq!(p.cells.len(), 4);
    }

    #[test]
    fn mss_on_expanded_dyadic_groups_by_low_bit() {
        // p(Y0,Y1 | X0,X1) depends only on X0 (through Y1 = X0), so the MSS
        // of (X0,X1) about (Y0,Y1) has two cells.
        let e = dyadic().expand_binary(&[2, 2, 2]).unwrap();
        let p = mss(
            &e,
            &VariableSet::of(["X0", "X1"]),
            &VariableSet::of(["Y0", "Y1"]),
        )
        .unwrap();
        assert_eq!(p.cells.len(), 2);
        assert_eq!(p.domain.len(), 4);
    }

    #[test]
    fn mss_common_information_values() {
        for d in [dyadic(), triadic()] {
            let m = mss_common_information(&d, &singleton_groups(&d)).unwrap();
            assert!((m - 3.0).abs() < TOL);
        }
        let pair = independent_pair();
        assert!(mss_common_information(&pair, &singleton_groups(&pair))
            .unwrap()
            .abs()
            < TOL);
        let g = builtin(Builtin::GiantBit { n: 3, k: 2 }).unwrap();
        assert!(
            (mss_common_information(&g, &singleton_groups(&g)).unwrap() - 1.0).abs() < TOL
        );
    }

    #[test]
    fn functional_common_information_values() {
        for d in [dyadic(), triadic()] {
            let f = functional_common_information(&d, &singleton_groups(&d)).unwrap();
            assert!((f - 3.0).abs() < TOL);
        }
        let pair = independent_pair();
        assert!(functional_common_information(&pair, &singleton_groups(&pair))
            .unwrap()
            .abs()
            < TOL);
        let g = builtin(Builtin::GiantBit { n: 3, k: 2 }).unwrap();
        assert!(
            (functional_common_information(&g, &singleton_groups(&g)).unwrap() - 1.0).abs()
                < TOL
        );
    }

    #[test]
    fn wyner_brackets_close_on_the_published_values() {
        for d in [dyadic(), triadic()] {
            let c = wyner_common_information(&d, &singleton_groups(&d), None, 0, 0).unwrap();
            assert!(c.width() < 1e-6, "bracket {:?}", c);
            assert!((c.value() - 3.0).abs() < 1e-6);
        }
    }

    #[test]
    fn exact_common_information_brackets() {
        let g = builtin(Builtin::GiantBit { n: 3, k: 2 }).unwrap();
        let e = exact_common_information(&g, &singleton_groups(&g), None, 0, 0).unwrap();
        assert!(e.width() < 1e-6);
        assert!((e.value() - 1.0).abs() < 1e-6);
        let pair = independent_pair();
        let e = exact_common_information(&pair, &singleton_groups(&pair), None, 0, 0).unwrap();
        assert!(e.upper.abs() < 1e-6);
    }

    #[test]
    fn wyner_of_independent_pair_is_zero() {
        let pair = independent_pair();
        let c =
            wyner_common_information(&pair, &singleton_groups(&pair), None, 0, 0).unwrap();
        assert!(c.upper.abs() < 1e-6 && c.lower.abs() < 1e-6);
    }
}
