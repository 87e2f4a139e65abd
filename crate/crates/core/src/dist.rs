//! Exact joint probability distributions over named discrete variables.
//!
//! Probabilities are stored as arbitrary-precision rationals and only the
//! support is stored; every operation here preserves exact arithmetic.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::symbol::Symbol;

/// Exact probability type used throughout.
pub type Rat = BigRational;

/// Parse a rational from a `"p/q"` (or plain integer) string.
pub fn rat_from_str(s: &str) -> Result<Rat> {
    s.trim()
        .parse::<Rat>()
        .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// An unordered subset of a distribution's variable names.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct VariableSet(BTreeSet<String>);

impl VariableSet {
    pub fn empty() -> Self {
        VariableSet(BTreeSet::new())
    }

    pub fn of<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        VariableSet(names.into_iter().map(Into::into).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn insert(&mut self, name: impl Into<String>) {
        self.0.insert(name.into());
    }

    pub fn union(&self, other: &VariableSet) -> VariableSet {
        VariableSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn is_disjoint(&self, other: &VariableSet) -> bool {
        self.0.is_disjoint(&other.0)
    }
}

impl<S: Into<String>> FromIterator<S> for VariableSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        VariableSet::of(iter)
    }
}

/// Disjoint variable sets covering a stated universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariablePartition(pub Vec<VariableSet>);

impl VariablePartition {
    pub fn blocks(&self) -> &[VariableSet] {
        &self.0
    }

    /// Singleton blocks over all of `d`'s variables.
    pub fn singletons(d: &JointDistribution) -> Self {
        VariablePartition(
            d.variables()
                .iter()
                .map(|v| VariableSet::of([v.clone()]))
                .collect(),
        )
    }

    /// Check blocks are nonempty, disjoint, and cover exactly `universe`.
    pub fn validate(&self, universe: &VariableSet) -> Result<()> {
        let mut seen = BTreeSet::new();
        for block in &self.0 {
            if block.is_empty() {
                return Err(Error::PartitionInvalid("empty block".into()));
            }
            for name in block.iter() {
                if !seen.insert(name.to_string()) {
                    return Err(Error::PartitionInvalid(format!(
                        "variable {name} appears in two blocks"
                    )));
                }
            }
        }
        let universe: BTreeSet<_> = universe.iter().map(str::to_string).collect();
        if seen != universe {
            return Err(Error::PartitionInvalid(
                "blocks do not cover the universe".into(),
            ));
        }
        Ok(())
    }
}

/// What to do with zero-probability rows handed to `from_outcomes`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ZeroPolicy {
    /// Reject the input.
    #[default]
    Reject,
    /// Silently drop zero rows.
    Drop,
}

/// A finite joint PMF over named discrete variables with exact rational
/// probabilities. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointDistribution {
    variables: Vec<String>,
    alphabets: Vec<Vec<Symbol>>,
    outcomes: BTreeMap<Vec<Symbol>, Rat>,
}

impl JointDistribution {
    /// Build a distribution from explicit rows. Alphabets are inferred from
    /// the support.
    pub fn from_outcomes<I, S>(variables: I, rows: Vec<(Vec<Symbol>, Rat)>) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::from_outcomes_with_policy(variables, rows, ZeroPolicy::Reject)
    }

    pub fn from_outcomes_with_policy<I, S>(
        variables: I,
        rows: Vec<(Vec<Symbol>, Rat)>,
        zeros: ZeroPolicy,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        let unique: BTreeSet<_> = variables.iter().collect();
        if unique.len() != variables.len() {
            return Err(Error::DuplicateOutcome("repeated variable name".into()));
        }
        let mut outcomes = BTreeMap::new();
        let mut total = Rat::zero();
        for (tuple, p) in rows {
            if tuple.len() != variables.len() {
                return Err(Error::ArityMismatch {
                    expected: variables.len(),
                    got: tuple.len(),
                });
            }
            if p.is_zero() {
                match zeros {
                    ZeroPolicy::Reject => {
                        return Err(Error::NonPositiveProbability(p.to_string()))
                    }
                    ZeroPolicy::Drop => continue,
                }
            }
            if p < Rat::zero() {
                return Err(Error::NonPositiveProbability(p.to_string()));
            }
            total += &p;
            let key_str = tuple
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(",");
            if outcomes.insert(tuple, p).is_some() {
                return Err(Error::DuplicateOutcome(key_str));
            }
        }
        if !total.is_one() {
            return Err(Error::SumNotOne {
                got: total.to_string(),
            });
        }
        let mut alphabets = vec![BTreeSet::new(); variables.len()];
        for tuple in outcomes.keys() {
            for (i, s) in tuple.iter().enumerate() {
                alphabets[i].insert(s.clone());
            }
        }
        Ok(JointDistribution {
            variables,
            alphabets: alphabets
                .into_iter()
                .map(|a| a.into_iter().collect())
                .collect(),
            outcomes,
        })
    }

    /// Same as [`from_outcomes`](Self::from_outcomes), but with explicitly
    /// stated alphabets (which must contain the support).
    pub fn with_alphabets(mut self, alphabets: Vec<Vec<Symbol>>) -> Result<Self> {
        if alphabets.len() != self.variables.len() {
            return Err(Error::ArityMismatch {
                expected: self.variables.len(),
                got: alphabets.len(),
            });
        }
        for (i, alpha) in alphabets.iter().enumerate() {
            let set: BTreeSet<_> = alpha.iter().collect();
            for sym in &self.alphabets[i] {
                if !set.contains(sym) {
                    return Err(Error::Parse(format!(
                        "alphabet for {} is missing support symbol {sym}",
                        self.variables[i]
                    )));
                }
            }
        }
        self.alphabets = alphabets
            .into_iter()
            .map(|a| {
                let set: BTreeSet<_> = a.into_iter().collect();
                set.into_iter().collect()
            })
            .collect();
        Ok(self)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn variable_set(&self) -> VariableSet {
        VariableSet::of(self.variables.iter().cloned())
    }

    pub fn alphabet(&self, var: &str) -> Result<&[Symbol]> {
        let i = self.index_of(var)?;
        Ok(&self.alphabets[i])
    }

    pub fn alphabets(&self) -> &[Vec<Symbol>] {
        &self.alphabets
    }

    /// Total number of cells in the full product alphabet.
    pub fn product_alphabet_size(&self) -> usize {
        self.alphabets.iter().map(|a| a.len()).product()
    }

    pub fn support_size(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcomes(&self) -> impl Iterator<Item = (&Vec<Symbol>, &Rat)> {
        self.outcomes.iter()
    }

    pub fn probability(&self, tuple: &[Symbol]) -> Rat {
        self.outcomes.get(tuple).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn index_of(&self, var: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))
    }

    /// Indices of `set`'s variables in this distribution's order.
    pub fn indices(&self, set: &VariableSet) -> Result<Vec<usize>> {
        let mut idx = Vec::with_capacity(set.len());
        for name in set.iter() {
            idx.push(self.index_of(name)?);
        }
        idx.sort_unstable();
        Ok(idx)
    }

    /// Exact marginal over `keep`.
    pub fn marginal(&self, keep: &VariableSet) -> Result<JointDistribution> {
        if keep.is_empty() {
            return Err(Error::EmptySet);
        }
        let idx = self.indices(keep)?;
        self.marginal_by_indices(&idx)
    }

    pub fn marginal_by_indices(&self, idx: &[usize]) -> Result<JointDistribution> {
        if idx.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut merged: BTreeMap<Vec<Symbol>, Rat> = BTreeMap::new();
        for (tuple, p) in &self.outcomes {
            let key: Vec<Symbol> = idx.iter().map(|&i| tuple[i].clone()).collect();
            *merged.entry(key).or_insert_with(Rat::zero) += p;
        }
        JointDistribution::from_outcomes(
            idx.iter().map(|&i| self.variables[i].clone()),
            merged.into_iter().collect(),
        )?
        .with_alphabets(idx.iter().map(|&i| self.alphabets[i].clone()).collect())
    }

    /// Condition on `on = values` and renormalize over the remaining
    /// variables.
    pub fn condition(&self, on: &VariableSet, values: &[Symbol]) -> Result<JointDistribution> {
        let on_idx = self.indices(on)?;
        if on_idx.len() != values.len() {
            return Err(Error::ArityMismatch {
                expected: on_idx.len(),
                got: values.len(),
            });
        }
        // `indices` sorts, so pair values with names in sorted order.
        let mut sorted_names: Vec<&str> = on.iter().collect();
        sorted_names.sort_unstable();
        for (name, value) in sorted_names.iter().zip(values) {
            let i = self.index_of(name)?;
            if !self.alphabets[i].contains(value) {
                return Err(Error::UnknownVariable(format!(
                    "symbol {value} not in alphabet of {name}"
                )));
            }
        }
        let keep_idx: Vec<usize> = (0..self.variables.len())
            .filter(|i| !on_idx.contains(i))
            .collect();
        if keep_idx.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut mass = Rat::zero();
        let mut rows: BTreeMap<Vec<Symbol>, Rat> = BTreeMap::new();
        for (tuple, p) in &self.outcomes {
            if on_idx.iter().zip(values).all(|(&i, v)| &tuple[i] == v) {
                mass += p;
                let key: Vec<Symbol> = keep_idx.iter().map(|&i| tuple[i].clone()).collect();
                *rows.entry(key).or_insert_with(Rat::zero) += p;
            }
        }
        if mass.is_zero() {
            return Err(Error::ZeroProbabilityEvent);
        }
        JointDistribution::from_outcomes(
            keep_idx.iter().map(|&i| self.variables[i].clone()),
            rows.into_iter().map(|(k, p)| (k, p / &mass)).collect(),
        )?
        .with_alphabets(
            keep_idx
                .iter()
                .map(|&i| self.alphabets[i].clone())
                .collect(),
        )
    }

    /// Replace each variable by its binary digits, most significant first,
    /// so symbol 3 at width 2 becomes the bit pair (1, 1).
    pub fn expand_binary(&self, widths: &[u32]) -> Result<JointDistribution> {
        if widths.len() != self.variables.len() {
            return Err(Error::ArityMismatch {
                expected: self.variables.len(),
                got: widths.len(),
            });
        }
        for (i, alpha) in self.alphabets.iter().enumerate() {
            for sym in alpha {
                let v = sym.as_int().ok_or_else(|| Error::SymbolOutOfRange {
                    symbol: sym.to_string(),
                    width: widths[i],
                })?;
                if v >= 1u64 << widths[i] {
                    return Err(Error::SymbolOutOfRange {
                        symbol: sym.to_string(),
                        width: widths[i],
                    });
                }
            }
        }
        let mut names = Vec::new();
        for (name, &w) in self.variables.iter().zip(widths) {
            for bit in 0..w {
                names.push(format!("{name}{bit}"));
            }
        }
        let rows = self
            .outcomes
            .iter()
            .map(|(tuple, p)| {
                let mut out = Vec::new();
                for (i, sym) in tuple.iter().enumerate() {
                    let v = sym.as_int().unwrap();
                    for bit in (0..widths[i]).rev() {
                        out.push(Symbol::int((v >> bit) & 1));
                    }
                }
                (out, p.clone())
            })
            .collect();
        JointDistribution::from_outcomes(names, rows)
    }

    /// Merge each block of `grouping` into one composite variable whose
    /// symbols are tuples of the block's symbols (in this distribution's
    /// variable order).
    pub fn coalesce(&self, grouping: &VariablePartition) -> Result<JointDistribution> {
        grouping.validate(&self.variable_set())?;
        let mut blocks: Vec<(String, Vec<usize>)> = Vec::new();
        for block in grouping.blocks() {
            let idx = self.indices(block)?;
            let name = idx
                .iter()
                .map(|&i| self.variables[i].clone())
                .collect::<Vec<_>>()
                .join("");
            blocks.push((name, idx));
        }
        // order composite variables by their first original index
        blocks.sort_by_key(|(_, idx)| idx[0]);
        let rows = self
            .outcomes
            .iter()
            .map(|(tuple, p)| {
                let out: Vec<Symbol> = blocks
                    .iter()
                    .map(|(_, idx)| {
                        if idx.len() == 1 {
                            tuple[idx[0]].clone()
                        } else {
                            Symbol::Tuple(idx.iter().map(|&i| tuple[i].clone()).collect())
                        }
                    })
                    .collect();
                (out, p.clone())
            })
            .collect();
        JointDistribution::from_outcomes(blocks.iter().map(|(n, _)| n.clone()), rows)
    }

    /// Independent variable-wise pairing: result variable `i` takes the pair
    /// (a_i, b_i). Entropies add exactly.
    pub fn overlay(&self, other: &JointDistribution) -> Result<JointDistribution> {
        if self.variables.len() != other.variables.len() {
            return Err(Error::ArityMismatch {
                expected: self.variables.len(),
                got: other.variables.len(),
            });
        }
        let names: Vec<String> = self
            .variables
            .iter()
            .zip(&other.variables)
            .map(|(a, b)| format!("({a},{b})"))
            .collect();
        let mut rows = Vec::with_capacity(self.outcomes.len() * other.outcomes.len());
        for (ta, pa) in &self.outcomes {
            for (tb, pb) in &other.outcomes {
                let tuple: Vec<Symbol> = ta
                    .iter()
                    .zip(tb)
                    .map(|(a, b)| Symbol::pair(a.clone(), b.clone()))
                    .collect();
                rows.push((tuple, pa * pb));
            }
        }
        JointDistribution::from_outcomes(names, rows)
    }

    /// True iff the two distributions are equal after some variable
    /// reordering and per-variable symbol bijection. Exact backtracking
    /// search; intended for desk-scale tables.
    pub fn isomorphic(&self, other: &JointDistribution) -> bool {
        if self.variables.len() != other.variables.len()
            || self.outcomes.len() != other.outcomes.len()
        {
            return false;
        }
        // probability multisets must agree
        let mut pa: Vec<&Rat> = self.outcomes.values().collect();
        let mut pb: Vec<&Rat> = other.outcomes.values().collect();
        pa.sort();
        pb.sort();
        if pa != pb {
            return false;
        }
        let n = self.variables.len();
        let mut perm: Vec<usize> = Vec::new();
        let mut used = vec![false; n];
        self.isomorphic_perm(other, &mut perm, &mut used)
    }

    fn isomorphic_perm(
        &self,
        other: &JointDistribution,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = self.variables.len();
        if perm.len() == n {
            return self.isomorphic_with_perm(other, perm);
        }
        let pos = perm.len();
        for j in 0..n {
            if !used[j] && self.alphabets[pos].len() == other.alphabets[j].len() {
                perm.push(j);
                used[j] = true;
                if self.isomorphic_perm(other, perm, used) {
                    return true;
                }
                perm.pop();
                used[j] = false;
            }
        }
        false
    }

    /// With variable i of self matched to variable perm[i] of other, search
    /// for per-variable symbol bijections by matching outcomes.
    fn isomorphic_with_perm(&self, other: &JointDistribution, perm: &[usize]) -> bool {
        let rows_a: Vec<(&Vec<Symbol>, &Rat)> = self.outcomes.iter().collect();
        let mut maps: Vec<BTreeMap<Symbol, Symbol>> = vec![BTreeMap::new(); perm.len()];
        let mut images: Vec<BTreeSet<Symbol>> = vec![BTreeSet::new(); perm.len()];
        let mut used_b: BTreeSet<&Vec<Symbol>> = BTreeSet::new();
        self.match_rows(other, perm, &rows_a, 0, &mut maps, &mut images, &mut used_b)
    }

    #[allow(clippy::too_many_arguments)]
    fn match_rows<'b>(
        &self,
        other: &'b JointDistribution,
        perm: &[usize],
        rows_a: &[(&Vec<Symbol>, &Rat)],
        at: usize,
        maps: &mut Vec<BTreeMap<Symbol, Symbol>>,
        images: &mut Vec<BTreeSet<Symbol>>,
        used_b: &mut BTreeSet<&'b Vec<Symbol>>,
    ) -> bool {
        if at == rows_a.len() {
            return true;
        }
        let (tuple_a, p_a) = rows_a[at];
        'candidates: for (tuple_b, p_b) in other.outcomes.iter() {
            if p_b != p_a || used_b.contains(tuple_b) {
                continue;
            }
            // check consistency with the partial bijections
            let mut added: Vec<usize> = Vec::new();
            for (i, sym_a) in tuple_a.iter().enumerate() {
                let sym_b = &tuple_b[perm[i]];
                match maps[i].get(sym_a) {
                    Some(mapped) if mapped == sym_b => {}
                    Some(_) => {
                        for &j in &added {
                            let s = maps[j].remove(&tuple_a[j]).unwrap();
                            images[j].remove(&s);
                        }
                        continue 'candidates;
                    }
                    None => {
                        if images[i].contains(sym_b) {
                            for &j in &added {
                                let s = maps[j].remove(&tuple_a[j]).unwrap();
                                images[j].remove(&s);
                            }
                            continue 'candidates;
                        }
                        maps[i].insert(sym_a.clone(), sym_b.clone());
                        images[i].insert(sym_b.clone());
                        added.push(i);
                    }
                }
            }
            used_b.insert(tuple_b);
            if self.match_rows(other, perm, rows_a, at + 1, maps, images, used_b) {
                return true;
            }
            used_b.remove(tuple_b);
            for &j in &added {
                let s = maps[j].remove(&tuple_a[j]).unwrap();
                images[j].remove(&s);
            }
        }
        false
    }
}
