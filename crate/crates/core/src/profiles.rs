//! Multivariate dependence profiles: the complexity profile, connected
//! informations via maximum-entropy projections, and the marginal utility
//! of information.

use itertools::Itertools;
use num::ToPrimitive;

use crate::dist::JointDistribution;
use crate::error::{Error, Result};
use crate::shannon::{entropy, idiagram};
use crate::symbol::Symbol;

const IPF_TOL: f64 = 1e-10;
const IPF_MAX_SWEEPS: usize = 20_000;

/// Right-continuous decreasing step function: `value` holds on the
/// half-open interval `(previous x, x]`, points sorted by descending value.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub label: String,
    /// (x, value) pairs
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug)]
pub struct MaxEntResult {
    /// matched marginal order
    pub order: usize,
    pub entropy: f64,
    pub iterations: usize,
    pub residual: f64,
    /// projection over the full product alphabet, zero cells omitted
    pub support: Vec<(Vec<Symbol>, f64)>,
}

/// C(k) = total i-diagram atom content of interaction order at least k,
/// for k = 1..n.
pub fn complexity_profile(d: &JointDistribution) -> Result<Profile> {
    let diagram = idiagram(d)?;
    let n = d.variables().len();
    let points = (1..=n)
        .map(|k| (k as f64, diagram.sum_of_order_at_least(k)))
        .collect();
    Ok(Profile {
        label: "complexity".to_string(),
        points,
    })
}

/// Iterative proportional fitting onto the set of distributions matching
/// every order-`k` marginal of `d`, starting from the uniform distribution
/// over the full product alphabet. `k = 0` returns that uniform.
pub fn maxent_projection(d: &JointDistribution, k: usize) -> Result<MaxEntResult> {
    let n = d.variables().len();
    if k > n {
        return Err(Error::ArityMismatch { expected: n, got: k });
    }
    let alphabets: Vec<Vec<Symbol>> = d.alphabets().to_vec();
    let sizes: Vec<usize> = alphabets.iter().map(|a| a.len()).collect();
    let cells: usize = sizes.iter().product();
    if cells > 1 << 22 {
        return Err(Error::SupportTooLarge {
            got: cells,
            limit: 1 << 22,
        });
    }
    let strides: Vec<usize> = (0..n)
        .map(|i| sizes[i + 1..].iter().product())
        .collect();
    let cell_symbols = |cell: usize| -> Vec<Symbol> {
        (0..n)
            .map(|i| alphabets[i][(cell / strides[i]) % sizes[i]].clone())
            .collect()
    };
    let mut q = vec![1.0 / cells as f64; cells];

    // target marginals of d, keyed by sub-cell index within each subset
    let mut constraints: Vec<(Vec<usize>, Vec<f64>)> = Vec::new();
    for subset in (0..n).combinations(k.max(0)) {
        if subset.is_empty() {
            continue;
        }
        let m: usize = subset.iter().map(|&i| sizes[i]).product();
        let mut target = vec![0.0; m];
        'outer: for (t, p) in d.outcomes() {
            let mut idx = 0;
            for &i in &subset {
                let pos = match alphabets[i].iter().position(|s| *s == t[i]) {
                    Some(pos) => pos,
                    None => continue 'outer,
                };
                idx = idx * sizes[i] + pos;
            }
            target[idx] += p.to_f64().unwrap();
        }
        constraints.push((subset, target));
    }

    let project_index = |cell: usize, subset: &[usize], sizes: &[usize]| -> usize {
        let mut idx = 0;
        for &i in subset {
            idx = idx * sizes[i] + (cell / strides[i]) % sizes[i];
        }
        idx
    };

    let mut iterations = 0;
    let mut residual: f64 = 0.0;
    if k > 0 {
        loop {
            iterations += 1;
            for (subset, target) in &constraints {
                let m = target.len();
                let mut current = vec![0.0; m];
                for cell in 0..cells {
                    current[project_index(cell, subset, &sizes)] += q[cell];
                }
                for cell in 0..cells {
                    let idx = project_index(cell, subset, &sizes);
                    if current[idx] > 0.0 {
                        q[cell] *= target[idx] / current[idx];
                    } else {
                        q[cell] = 0.0;
                    }
                }
            }
            residual = 0.0;
            for (subset, target) in &constraints {
                let m = target.len();
                let mut current = vec![0.0; m];
                for cell in 0..cells {
                    current[project_index(cell, subset, &sizes)] += q[cell];
                }
                for i in 0..m {
                    residual = residual.max((current[i] - target[i]).abs());
                }
            }
            if residual < IPF_TOL {
                break;
            }
            if iterations >= IPF_MAX_SWEEPS {
                return Err(Error::NotConverged(format!(
                    "marginal fitting at order {k}: residual {residual:e}"
                )));
            }
        }
    }

    let h: f64 = q
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    let support = q
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 1e-14)
        .map(|(cell, &p)| (cell_symbols(cell), p))
        .collect();
    Ok(MaxEntResult {
        order: k,
        entropy: h,
        iterations,
        residual,
        support,
    })
}

/// Connected informations: C_k = H(projection at k−1) − H(projection at k),
/// the dependence newly explained by order-k marginal constraints, k = 2..n.
pub fn connected_informations(d: &JointDistribution) -> Result<Profile> {
    let n = d.variables().len();
    if n < 2 {
        return Err(Error::EmptySet);
    }
    let mut entropies = Vec::with_capacity(n);
    for k in 1..n {
        entropies.push(maxent_projection(d, k)?.entropy);
    }
    entropies.push(entropy(d, &d.variable_set())?);
    let points = (2..=n)
        .map(|k| (k as f64, (entropies[k - 2] - entropies[k - 1]).max(0.0)))
        .collect();
    Ok(Profile {
        label: "connected".to_string(),
        points,
    })
}

/// Dense primal simplex with Bland's rule: maximize c·x subject to
/// A x ≤ b, x ≥ 0 with b ≥ 0. Returns the optimal value.
fn simplex_max(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<f64> {
    let (nc, nv) = (a.len(), c.len());
    let width = nv + nc + 1;
    // rows 0..nc: constraints with slack identity; last row: −c (objective)
    let mut t = vec![vec![0.0; width]; nc + 1];
    for i in 0..nc {
        t[i][..nv].copy_from_slice(&a[i]);
        t[i][nv + i] = 1.0;
        t[i][width - 1] = b[i];
    }
    for j in 0..nv {
        t[nc][j] = -c[j];
    }
    let mut basis: Vec<usize> = (nv..nv + nc).collect();
    for _ in 0..100_000 {
        let Some(pivot_col) = (0..width - 1).find(|&j| t[nc][j] < -1e-11) else {
            return Ok(t[nc][width - 1]);
        };
        let mut pivot_row = None;
        let mut best = f64::INFINITY;
        for i in 0..nc {
            if t[i][pivot_col] > 1e-11 {
                let ratio = t[i][width - 1] / t[i][pivot_col];
                if ratio < best - 1e-12
                    || (ratio < best + 1e-12
                        && pivot_row.map_or(true, |r: usize| basis[i] < basis[r]))
                {
                    best = ratio;
                    pivot_row = Some(i);
                }
            }
        }
        let Some(r) = pivot_row else {
            return Err(Error::LpInfeasible);
        };
        let pv = t[r][pivot_col];
        for v in &mut t[r] {
            *v /= pv;
        }
        for i in 0..=nc {
            if i != r && t[i][pivot_col].abs() > 1e-14 {
                let f = t[i][pivot_col];
                for j in 0..width {
                    t[i][j] -= f * t[r][j];
                }
            }
        }
        basis[r] = pivot_col;
    }
    Err(Error::NotConverged("simplex pivot limit reached".into()))
}

/// Optimal descriptive value D(y): maximize Σ_A |A| x_A over weights x on
/// nonempty variable subsets, subject to Σ_A x_A ≤ y and, for every
/// nonempty V, Σ_{A ⊇ V} x_A ≤ max(0, Σ_{S ⊇ V} atom(S)). The right-hand
/// side is the I-diagram content shared by all of V (its joint entropy for
/// singletons, the mutual information for pairs, and so on), clamped at
/// zero so negative overlap atoms cannot make the program infeasible.
struct UtilityLp {
    c: Vec<f64>,
    a: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    /// total single-variable entropy, where D(y) saturates
    y_cap: f64,
}

impl UtilityLp {
    fn new(d: &JointDistribution) -> Result<UtilityLp> {
        let n = d.variables().len();
        let diagram = idiagram(d)?;
        let nv = (1usize << n) - 1;
        let c: Vec<f64> = (1..=nv).map(|mask: usize| mask.count_ones() as f64).collect();
        let mut rhs = Vec::with_capacity(nv);
        let mut a = Vec::with_capacity(nv + 1);
        let mut y_cap = 0.0;
        for v in 1..=nv as u32 {
            let shared: f64 = (1..=nv as u32)
                .filter(|s| s & v == v)
                .map(|s| diagram.atom(s))
                .sum();
            rhs.push(shared.max(0.0));
            if v.count_ones() == 1 {
                y_cap += shared.max(0.0);
            }
            a.push(
                (1..=nv as u32)
                    .map(|m| (m & v == v) as u64 as f64)
                    .collect(),
            );
        }
        Ok(UtilityLp { c, a, rhs, y_cap })
    }

    fn d_of(&self, y: f64) -> Result<f64> {
        let mut a = self.a.clone();
        let mut b = self.rhs.clone();
        a.push(vec![1.0; self.c.len()]);
        b.push(y);
        simplex_max(&self.c, &a, &b)
    }

    /// right slope of D at y
    fn slope_at(&self, y: f64, span: f64) -> Result<f64> {
        let h = (span * 1e-7).max(1e-9);
        Ok((self.d_of(y + h)? - self.d_of(y)?) / h)
    }
}

/// Marginal utility of information, presented as its conjugate step
/// function: each point (s, m) states that descriptions with utility
/// threshold in the interval down to the next point support `m` bits of
/// description, i.e. m = measure{ y : dD/dy ≥ s }.
pub fn marginal_utility(d: &JointDistribution, grid_resolution: usize) -> Result<Profile> {
    let lp = UtilityLp::new(d)?;
    let y_max = lp.y_cap;
    if y_max <= 0.0 {
        return Ok(Profile {
            label: "utility".to_string(),
            points: Vec::new(),
        });
    }
    let res = grid_resolution.max(8);
    // scan for slope changes, then bisect each to locate the breakpoint
    let mut breakpoints = vec![0.0];
    let mut slopes = Vec::new();
    let mut prev_slope = lp.slope_at(0.0, y_max)?;
    let mut prev_y = 0.0;
    for i in 1..=res {
        let y = y_max * i as f64 / res as f64;
        let probe = if i == res { y - y_max * 1e-6 } else { y };
        let s = lp.slope_at(probe, y_max)?;
        if (s - prev_slope).abs() > 1e-6 {
            let (mut lo, mut hi) = (prev_y, probe);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if (lp.slope_at(mid, y_max)? - prev_slope).abs() < 1e-6 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            slopes.push((prev_slope, 0.5 * (lo + hi)));
            breakpoints.push(0.5 * (lo + hi));
            prev_slope = s;
        }
        prev_y = probe;
    }
    slopes.push((prev_slope, y_max));
    // segments (slope, width), spurious slope-0 tails dropped
    let mut segments: Vec<(f64, f64)> = Vec::new();
    for (i, &(s, end)) in slopes.iter().enumerate() {
        let start = breakpoints[i];
        if s > 1e-6 && end - start > 1e-9 {
            segments.push((s, end - start));
        }
    }
    // conjugate: measure of y with slope at least s, per distinct slope
    let mut points: Vec<(f64, f64)> = Vec::new();
    let mut cumulative = 0.0;
    for &(s, w) in &segments {
        cumulative += w;
        match points.last_mut() {
            Some((ps, pm)) if (*ps - s).abs() < 1e-6 => *pm = cumulative,
            _ => points.push((s, cumulative)),
        }
    }
    Ok(Profile {
        label: "utility".to_string(),
        points,
    })
}
