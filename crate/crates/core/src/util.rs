//! Small combinatorial helpers shared by the measure modules.

/// All set partitions of `{0, .., n-1}` as restricted growth strings,
/// rendered as block lists. Bell-number growth; callers guard `n`.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut assignment = vec![0usize; n];
    fn recurse(
        assignment: &mut Vec<usize>,
        at: usize,
        max_used: usize,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        let n = assignment.len();
        if at == n {
            let blocks = max_used + 1;
            let mut partition = vec![Vec::new(); blocks];
            for (i, &b) in assignment.iter().enumerate() {
                partition[b].push(i);
            }
            out.push(partition);
            return;
        }
        for b in 0..=max_used + 1 {
            assignment[at] = b;
            recurse(assignment, at + 1, max_used.max(b), out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    assignment[0] = 0;
    recurse(&mut assignment, 1, 0, &mut out);
    out
}

/// Visit every set partition of `{0, .., n-1}` without materializing the
/// whole Bell-number family. Returning `false` from the visitor stops the
/// enumeration early.
pub fn for_each_set_partition(n: usize, mut visit: impl FnMut(&[Vec<usize>]) -> bool) {
    fn recurse(
        n: usize,
        at: usize,
        blocks: &mut Vec<Vec<usize>>,
        visit: &mut impl FnMut(&[Vec<usize>]) -> bool,
    ) -> bool {
        if at == n {
            return visit(blocks);
        }
        for b in 0..blocks.len() {
            blocks[b].push(at);
            if !recurse(n, at + 1, blocks, visit) {
                blocks[b].pop();
                return false;
            }
            blocks[b].pop();
        }
        blocks.push(vec![at]);
        let keep_going = recurse(n, at + 1, blocks, visit);
        blocks.pop();
        keep_going
    }
    if n == 0 {
        visit(&[]);
        return;
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    recurse(n, 0, &mut blocks, &mut visit);
}

/// Set partitions of `{0, .., n-1}` with at most `max_blocks` blocks.
pub fn set_partitions_bounded(n: usize, max_blocks: usize) -> Vec<Vec<Vec<usize>>> {
    set_partitions(n)
        .into_iter()
        .filter(|p| p.len() <= max_blocks)
        .collect()
}

/// Iterate over nonempty submasks of `mask` (including `mask` itself).
pub fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut sub = mask;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = sub;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & mask;
        }
        if cur == 0 {
            None
        } else {
            Some(cur)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        assert_eq!(set_partitions(1).len(), 1);
        assert_eq!(set_partitions(3).len(), 5);
        assert_eq!(set_partitions(5).len(), 52);
        assert_eq!(set_partitions(8).len(), 4140);
    }

    #[test]
    fn submask_count() {
        assert_eq!(submasks(0b1011).count(), 7);
        assert_eq!(submasks(0b1).count(), 1);
    }
}
