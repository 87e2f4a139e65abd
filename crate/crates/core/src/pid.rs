//! Partial information decomposition for two input groups and one output
//! group: redundant, unique, and synergistic shares of I(inputs : output).
//!
//! Two decompositions are provided. `pid_imin` uses the minimum specific
//! information as the redundancy. `pid_broja` takes the unique informations
//! from the convex program that minimizes I_q(A0:O|A1) over distributions q
//! matching both input-output pairwise marginals of p.

use std::collections::BTreeMap;

use num::ToPrimitive;

use crate::dist::{JointDistribution, VariableSet};
use crate::error::{Error, Result};
use crate::symbol::Symbol;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PidResult {
    pub redundancy: f64,
    pub unique: [f64; 2],
    pub synergy: f64,
    /// I(A0, A1 : O), the decomposed total.
    pub total: f64,
}

impl PidResult {
    pub fn parts(&self) -> [f64; 4] {
        [self.redundancy, self.unique[0], self.unique[1], self.synergy]
    }
}

/// Dense table p(a0, a1, o) over observed composite outcomes.
struct PidTable {
    n0: usize,
    n1: usize,
    no: usize,
    p: Vec<f64>,
}

impl PidTable {
    fn new(
        d: &JointDistribution,
        inputs: &[VariableSet; 2],
        output: &VariableSet,
    ) -> Result<PidTable> {
        if !inputs[0].is_disjoint(&inputs[1])
            || !inputs[0].is_disjoint(output)
            || !inputs[1].is_disjoint(output)
        {
            return Err(Error::OverlappingSets);
        }
        if inputs[0].is_empty() || inputs[1].is_empty() || output.is_empty() {
            return Err(Error::EmptySet);
        }
        let union = inputs[0].union(&inputs[1]).union(output);
        let m = d.marginal(&union)?;
        let idx = [
            m.indices(&inputs[0])?,
            m.indices(&inputs[1])?,
            m.indices(output)?,
        ];
        let mut dicts: [BTreeMap<Vec<Symbol>, usize>; 3] = Default::default();
        let mut rows: Vec<([usize; 3], f64)> = Vec::new();
        for (t, prob) in m.outcomes() {
            let mut ids = [0usize; 3];
            for (which, indices) in idx.iter().enumerate() {
                let key: Vec<Symbol> = indices.iter().map(|&i| t[i].clone()).collect();
                let next = dicts[which].len();
                ids[which] = *dicts[which].entry(key).or_insert(next);
            }
            rows.push((ids, prob.to_f64().unwrap()));
        }
        let (n0, n1, no) = (dicts[0].len(), dicts[1].len(), dicts[2].len());
        let mut p = vec![0.0; n0 * n1 * no];
        for ([i0, i1, io], prob) in rows {
            p[(i0 * n1 + i1) * no + io] += prob;
        }
        Ok(PidTable { n0, n1, no, p })
    }

    fn at(&self, i0: usize, i1: usize, io: usize) -> f64 {
        self.p[(i0 * self.n1 + i1) * self.no + io]
    }

    fn marginal_o(&self) -> Vec<f64> {
        let mut po = vec![0.0; self.no];
        for i0 in 0..self.n0 {
            for i1 in 0..self.n1 {
                for io in 0..self.no {
                    po[io] += self.at(i0, i1, io);
                }
            }
        }
        po
    }

    /// p(a_i, o) for input group `which`.
    fn pairwise(&self, which: usize) -> Vec<f64> {
        let n = if which == 0 { self.n0 } else { self.n1 };
        let mut m = vec![0.0; n * self.no];
        for i0 in 0..self.n0 {
            for i1 in 0..self.n1 {
                let a = if which == 0 { i0 } else { i1 };
                for io in 0..self.no {
                    m[a * self.no + io] += self.at(i0, i1, io);
                }
            }
        }
        m
    }

    fn mi_input_output(&self, which: usize) -> f64 {
        let pair = self.pairwise(which);
        let po = self.marginal_o();
        let n = if which == 0 { self.n0 } else { self.n1 };
        let mut pa = vec![0.0; n];
        for a in 0..n {
            for io in 0..self.no {
                pa[a] += pair[a * self.no + io];
            }
        }
        let mut mi = 0.0;
        for a in 0..n {
            for io in 0..self.no {
                let w = pair[a * self.no + io];
                if w > 0.0 {
                    mi += w * (w / (pa[a] * po[io])).log2();
                }
            }
        }
        mi
    }

    fn mi_joint_output(&self) -> f64 {
        let po = self.marginal_o();
        let mut pj = vec![0.0; self.n0 * self.n1];
        for i0 in 0..self.n0 {
            for i1 in 0..self.n1 {
                for io in 0..self.no {
                    pj[i0 * self.n1 + i1] += self.at(i0, i1, io);
                }
            }
        }
        let mut mi = 0.0;
        for i0 in 0..self.n0 {
            for i1 in 0..self.n1 {
                for io in 0..self.no {
                    let w = self.at(i0, i1, io);
                    if w > 0.0 {
                        mi += w * (w / (pj[i0 * self.n1 + i1] * po[io])).log2();
                    }
                }
            }
        }
        mi
    }
}

fn clamp_small(v: f64) -> f64 {
    if v.abs() < 1e-10 {
        0.0
    } else {
        v
    }
}

/// Minimum-specific-information decomposition. The redundancy is
/// Σ_o p(o) min_i D(p(a_i|o) ‖ p(a_i)); unique and synergistic parts follow
/// by Möbius inversion on the two-source lattice.
pub fn pid_imin(
    d: &JointDistribution,
    inputs: &[VariableSet; 2],
    output: &VariableSet,
) -> Result<PidResult> {
    let t = PidTable::new(d, inputs, output)?;
    let po = t.marginal_o();
    let mut redundancy = 0.0;
    for io in 0..t.no {
        if po[io] <= 0.0 {
            continue;
        }
        let mut spec = [0.0f64; 2];
        for which in 0..2 {
            let pair = t.pairwise(which);
            let n = if which == 0 { t.n0 } else { t.n1 };
            let mut pa = vec![0.0; n];
            for a in 0..n {
                for o in 0..t.no {
                    pa[a] += pair[a * t.no + o];
                }
            }
            let mut s = 0.0;
            for a in 0..n {
                let cond = pair[a * t.no + io] / po[io];
                if cond > 0.0 {
                    s += cond * (cond / pa[a]).log2();
                }
            }
            spec[which] = s;
        }
        redundancy += po[io] * spec[0].min(spec[1]);
    }
    let mi = [t.mi_input_output(0), t.mi_input_output(1)];
    let total = t.mi_joint_output();
    let unique = [mi[0] - redundancy, mi[1] - redundancy];
    let synergy = total - redundancy - unique[0] - unique[1];
    Ok(PidResult {
        redundancy: clamp_small(redundancy),
        unique: [clamp_small(unique[0]), clamp_small(unique[1])],
        synergy: clamp_small(synergy),
        total,
    })
}

/// State of the convex program: q over the polytope matching both (a_i, o)
/// marginals of p, minimizing I_q(A0, A1 : O).
struct Polytope {
    n0: usize,
    n1: usize,
    no: usize,
    q: Vec<f64>,
    po: Vec<f64>,
}

impl Polytope {
    fn start(t: &PidTable) -> Polytope {
        let po = t.marginal_o();
        let (pair0, pair1) = (t.pairwise(0), t.pairwise(1));
        // q = p(a0,o) p(a1,o) / p(o): conditionally independent given O,
        // feasible for the pairwise-marginal constraints
        let mut q = vec![0.0; t.n0 * t.n1 * t.no];
        for i0 in 0..t.n0 {
            for i1 in 0..t.n1 {
                for io in 0..t.no {
                    if po[io] > 0.0 {
                        q[(i0 * t.n1 + i1) * t.no + io] =
                            pair0[i0 * t.no + io] * pair1[i1 * t.no + io] / po[io];
                    }
                }
            }
        }
        Polytope {
            n0: t.n0,
            n1: t.n1,
            no: t.no,
            q,
            po,
        }
    }

    fn idx(&self, i0: usize, i1: usize, io: usize) -> usize {
        (i0 * self.n1 + i1) * self.no + io
    }

    fn objective(&self) -> f64 {
        let mut pj = vec![0.0; self.n0 * self.n1];
        for i0 in 0..self.n0 {
            for i1 in 0..self.n1 {
                for io in 0..self.no {
                    pj[i0 * self.n1 + i1] += self.q[self.idx(i0, i1, io)];
                }
            }
        }
        let mut mi = 0.0;
        for i0 in 0..self.n0 {
            for i1 in 0..self.n1 {
                for io in 0..self.no {
                    let w = self.q[self.idx(i0, i1, io)];
                    if w > 0.0 {
                        mi += w * (w / (pj[i0 * self.n1 + i1] * self.po[io])).log2();
                    }
                }
            }
        }
        mi
    }

    /// Move mass γ along the null-space direction for fixed o:
    /// +(a0,a1) +(a0',a1') −(a0,a1') −(a0',a1). Both pairwise marginals
    /// are invariant. Returns the objective change; convex in γ.
    fn shift(&mut self, io: usize, a0: usize, b0: usize, a1: usize, b1: usize, gamma: f64) {
        let (i, j, k, l) = (
            self.idx(a0, a1, io),
            self.idx(b0, b1, io),
            self.idx(a0, b1, io),
            self.idx(b0, a1, io),
        );
        self.q[i] += gamma;
        self.q[j] += gamma;
        self.q[k] -= gamma;
        self.q[l] -= gamma;
    }

    /// Golden-section line search over the feasible interval of γ.
    fn line_search(&mut self, io: usize, a0: usize, b0: usize, a1: usize, b1: usize) -> f64 {
        let hi = self.q[self.idx(a0, b1, io)].min(self.q[self.idx(b0, a1, io)]);
        let lo = -self.q[self.idx(a0, a1, io)].min(self.q[self.idx(b0, b1, io)]);
        if hi - lo < 1e-15 {
            return 0.0;
        }
        let f = |this: &mut Polytope, g: f64| {
            this.shift(io, a0, b0, a1, b1, g);
            let v = this.objective();
            this.shift(io, a0, b0, a1, b1, -g);
            v
        };
        let base = self.objective();
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut l, mut h) = (lo, hi);
        let (mut x1, mut x2) = (h - phi * (h - l), l + phi * (h - l));
        let (mut f1, mut f2) = (f(self, x1), f(self, x2));
        for _ in 0..80 {
            if f1 < f2 {
                h = x2;
                x2 = x1;
                f2 = f1;
                x1 = h - phi * (h - l);
                f1 = f(self, x1);
            } else {
                l = x1;
                x1 = x2;
                f1 = f2;
                x2 = l + phi * (h - l);
                f2 = f(self, x2);
            }
        }
        let best = 0.5 * (l + h);
        if f(self, best) < base - 1e-15 {
            self.shift(io, a0, b0, a1, b1, best);
            best
        } else {
            0.0
        }
    }

    fn cmi(&self, which: usize) -> f64 {
        // I_q(A_which : O | A_other)
        let (n_w, n_o) = if which == 0 {
            (self.n0, self.n1)
        } else {
            (self.n1, self.n0)
        };
        let mut total = 0.0;
        for other in 0..n_o {
            let mut block = vec![0.0; n_w * self.no];
            for w in 0..n_w {
                for io in 0..self.no {
                    let (i0, i1) = if which == 0 { (w, other) } else { (other, w) };
                    block[w * self.no + io] = self.q[self.idx(i0, i1, io)];
                }
            }
            let mass: f64 = block.iter().sum();
            if mass <= 0.0 {
                continue;
            }
            let mut pw = vec![0.0; n_w];
            let mut po = vec![0.0; self.no];
            for w in 0..n_w {
                for io in 0..self.no {
                    pw[w] += block[w * self.no + io];
                    po[io] += block[w * self.no + io];
                }
            }
            for w in 0..n_w {
                for io in 0..self.no {
                    let v = block[w * self.no + io];
                    if v > 0.0 {
                        total += v * (v * mass / (pw[w] * po[io])).log2();
                    }
                }
            }
        }
        total
    }
}

/// Bertschinger–Rauh–Olbrich–Jost–Ay decomposition. The common minimizer q*
/// of I_q(A0, A1 : O) over the pairwise-marginal polytope yields both unique
/// informations as conditional mutual informations under q*.
pub fn pid_broja(
    d: &JointDistribution,
    inputs: &[VariableSet; 2],
    output: &VariableSet,
) -> Result<PidResult> {
    let t = PidTable::new(d, inputs, output)?;
    let mut poly = Polytope::start(&t);
    let mut prev = poly.objective();
    for _sweep in 0..5000 {
        let mut moved = 0.0f64;
        for io in 0..poly.no {
            for a0 in 0..poly.n0 {
                for b0 in (a0 + 1)..poly.n0 {
                    for a1 in 0..poly.n1 {
                        for b1 in (a1 + 1)..poly.n1 {
                            moved += poly.line_search(io, a0, b0, a1, b1).abs();
                        }
                    }
                }
            }
        }
        let cur = poly.objective();
        if moved < 1e-13 || prev - cur < 1e-13 {
            break;
        }
        prev = cur;
    }
    let unique = [poly.cmi(0), poly.cmi(1)];
    let mi = [t.mi_input_output(0), t.mi_input_output(1)];
    let total = t.mi_joint_output();
    let redundancy = mi[0] - unique[0];
    let synergy = total - redundancy - unique[0] - unique[1];
    Ok(PidResult {
        redundancy: clamp_small(redundancy),
        unique: [clamp_small(unique[0]), clamp_small(unique[1])],
        synergy: clamp_small(synergy),
        total,
    })
}
