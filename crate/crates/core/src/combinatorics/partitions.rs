//! Set partitions as restricted-growth strings.
//!
//! A partition of `{0, …, len−1}` is encoded by `labels[i]` = index of the
//! block of `i`, blocks numbered by first appearance (so `labels[0] = 0` and
//! `labels[i] ≤ 1 + max(labels[..i])`).

/// Calls `visit(labels, block_count)` for every partition of `len` elements,
/// restricted to exactly `blocks` blocks when given. Memory is `O(len)`.
pub fn for_each_partition(len: usize, blocks: Option<usize>, mut visit: impl FnMut(&[u8], usize)) {
    if len == 0 {
        if blocks.unwrap_or(0) == 0 {
            visit(&[], 0);
        }
        return;
    }
    if let Some(k) = blocks {
        if k == 0 || k > len {
            return;
        }
    }
    let mut labels = vec![0u8; len];
    descend(&mut labels, 1, 1, blocks, &mut visit);
}

fn descend(labels: &mut [u8], pos: usize, used: usize, blocks: Option<usize>, visit: &mut impl FnMut(&[u8], usize)) {
    let len = labels.len();
    if pos == len {
        if blocks.is_none_or(|k| k == used) {
            visit(labels, used);
        }
        return;
    }
    let remaining = len - pos;
    let max_new = blocks.unwrap_or(len);
    for label in 0..=used {
        let next_used = if label == used { used + 1 } else { used };
        if next_used > max_new {
            continue;
        }
        if let Some(k) = blocks {
            // the remaining positions must still be able to open the missing blocks
            if next_used + remaining - 1 < k {
                continue;
            }
        }
        labels[pos] = label as u8;
        descend(labels, pos + 1, next_used, blocks, visit);
    }
}

/// Canonical (first-appearance) relabelling of an arbitrary label sequence.
pub fn canonical_labels<T: PartialEq + Copy>(values: &[T]) -> (Vec<u8>, usize) {
    let mut seen: Vec<T> = Vec::new();
    let labels = values
        .iter()
        .map(|v| match seen.iter().position(|s| s == v) {
            Some(p) => p as u8,
            None => {
                seen.push(*v);
                (seen.len() - 1) as u8
            }
        })
        .collect();
    (labels, seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Stirling numbers of the second kind by the triangle recurrence.
    fn stirling2(n: usize, k: usize) -> u64 {
        let mut table = vec![vec![0u64; n + 1]; n + 1];
        table[0][0] = 1;
        for i in 1..=n {
            for j in 1..=i {
                table[i][j] = j as u64 * table[i - 1][j] + table[i - 1][j - 1];
            }
        }
        table[n][k]
    }

    #[test]
    fn counts_match_stirling_numbers() {
        for len in 0..=9 {
            let mut total = 0u64;
            for k in 0..=len {
                let mut count = 0u64;
                for_each_partition(len, Some(k), |labels, used| {
                    assert_eq!(used, k);
                    assert_eq!(labels.len(), len);
                    count += 1;
                });
                assert_eq!(count, stirling2(len, k), "S({len},{k})");
                total += count;
            }
            let mut all = 0u64;
            for_each_partition(len, None, |_, _| all += 1);
            assert_eq!(all, total, "Bell({len})");
        }
    }

    #[test]
    fn labels_are_restricted_growth() {
        for_each_partition(6, None, |labels, used| {
            let mut max = 0;
            for (i, &l) in labels.iter().enumerate() {
                if i == 0 {
                    assert_eq!(l, 0);
                }
                assert!(l as usize <= max + 1);
                max = max.max(l as usize);
            }
            assert_eq!(max + 1, used);
        });
    }

    #[test]
    fn canonical_relabel() {
        assert_eq!(canonical_labels(&[5, 3, 5, 9]), (vec![0, 1, 0, 2], 3));
    }
}
