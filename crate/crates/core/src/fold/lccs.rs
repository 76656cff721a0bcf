/// Aligned ranges of a common contiguous run: `s1[start1..start1 + len]`
/// equals `s2[start2..start2 + len]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LccsMatch {
    pub start1: usize,
    pub start2: usize,
    pub len: usize,
}

impl LccsMatch {
    pub fn range1(&self) -> std::ops::Range<usize> {
        self.start1..self.start1 + self.len
    }

    pub fn range2(&self) -> std::ops::Range<usize> {
        self.start2..self.start2 + self.len
    }
}

/// Longest consecutive common subsequence of `s1` and `s2`.
///
/// Computes the full DP table and returns the globally longest run if it has
/// at least `min_len` elements. Ties go to the smallest end index in `s1`,
/// then in `s2`.
pub fn lccs<T: PartialEq>(s1: &[T], s2: &[T], min_len: usize) -> Option<LccsMatch> {
    let m = s2.len();
    let mut prev = vec![0u32; m + 1];
    let mut cur = vec![0u32; m + 1];
    let mut best = (0u32, 0usize, 0usize);
    for (i, a) in s1.iter().enumerate() {
        for (j, b) in s2.iter().enumerate() {
            cur[j + 1] = if a == b { prev[j] + 1 } else { 0 };
            if cur[j + 1] > best.0 {
                best = (cur[j + 1], i, j);
            }
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let (len, i, j) = best;
    let len = len as usize;
    (len > 0 && len >= min_len.max(1)).then(|| LccsMatch {
        start1: i + 1 - len,
        start2: j + 1 - len,
        len,
    })
}

/// Longest run that occurs twice in `s` without overlapping. Returns
/// `(earlier, later)` as an [`LccsMatch`] with `start1 < start2`. Ties go to
/// the smallest end of the later copy, then of the earlier one.
pub fn longest_repeat<T: PartialEq>(s: &[T], min_len: usize) -> Option<LccsMatch> {
    let n = s.len();
    // (len, later end, earlier end)
    let mut best: Option<(usize, usize, usize)> = None;
    for d in 1..n {
        let mut run = 0usize;
        for i in 0..n - d {
            let j = i + d;
            run = if s[i] == s[j] && run < d { run + 1 } else { 0 };
            let better = match best {
                None => run > 0,
                Some((l, bj, bi)) => run > l || (run == l && run > 0 && (j, i) < (bj, bi)),
            };
            if better {
                best = Some((run, j, i));
            }
        }
    }
    let (len, j, i) = best?;
    (len >= min_len.max(1)).then(|| LccsMatch {
        start1: i + 1 - len,
        start2: j + 1 - len,
        len,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity() {
        let s = [1, 2, 3, 2];
        assert_eq!(
            lccs(&s, &s, 1),
            Some(LccsMatch {
                start1: 0,
                start2: 0,
                len: 4
            })
        );
    }

    #[test]
    fn middle_run() {
        let m = lccs(&['a', 'b', 'c', 'd', 'e'], &['x', 'b', 'c', 'd', 'y'], 3).unwrap();
        assert_eq!((m.range1(), m.range2()), (1..4, 1..4));
    }

    #[test]
    fn below_threshold() {
        assert_eq!(lccs(&['a', 'b'], &['a', 'b'], 3), None);
        assert_eq!(lccs::<u8>(&[], &[1], 1), None);
    }

    #[test]
    fn tie_prefers_earliest_end() {
        // "ab" occurs twice in s1 and s2
        let m = lccs(&[1, 2, 9, 1, 2], &[1, 2, 1, 2], 2).unwrap();
        assert_eq!((m.start1, m.start2, m.len), (0, 0, 2));
        let m = lccs(&[7, 1, 2], &[1, 2, 5, 1, 2], 2).unwrap();
        assert_eq!((m.start1, m.start2), (1, 0));
    }

    #[test]
    fn repeat_does_not_overlap() {
        let s = [1; 7];
        let m = longest_repeat(&s, 1).unwrap();
        assert_eq!(m.len, 3);
        assert!(m.start1 + m.len <= m.start2);
        let m = longest_repeat(&[1, 2, 3, 9, 1, 2, 3], 3).unwrap();
        assert_eq!((m.start1, m.start2, m.len), (0, 4, 3));
        assert_eq!(longest_repeat(&[1, 2, 3, 4], 1), None);
    }
}
