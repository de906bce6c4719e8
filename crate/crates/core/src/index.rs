//! Lexicographic tuple indexing shared by every dense table in the crate.
//!
//! Tables over `D^n` are stored with the first coordinate most significant,
//! so `(a_1, ..., a_n)` lives at `a_1 d^{n-1} + ... + a_n`.

pub type Label = usize;

/// `base^exp` as `u128`, or `None` on overflow.
pub fn checked_pow(base: usize, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u128)?;
    }
    Some(acc)
}

pub fn saturating_pow(base: usize, exp: usize) -> u128 {
    checked_pow(base, exp).unwrap_or(u128::MAX)
}

/// Number of entries of a table over `D^len`; panics if it does not fit in memory anyway.
pub fn table_len(d: usize, len: usize) -> usize {
    d.checked_pow(len as u32).expect("table size overflows usize")
}

pub fn lex_index(d: usize, labels: &[Label]) -> usize {
    labels.iter().fold(0, |acc, &a| acc * d + a)
}

pub fn lex_decode(d: usize, len: usize, mut index: usize) -> Vec<Label> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

/// Advances `tuple` to its lexicographic successor in `D^len`.
/// Returns `false` (leaving the tuple all zeros) after the last one.
pub fn advance(d: usize, tuple: &mut [Label]) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < d {
            return true;
        }
        *slot = 0;
    }
    false
}

/// All tuples of `D^len` in lexicographic order.
pub fn tuples(d: usize, len: usize) -> LexTuples {
    LexTuples {
        d,
        next: if d == 0 && len > 0 {
            None
        } else {
            Some(vec![0; len])
        },
    }
}

#[derive(Debug, Clone)]
pub struct LexTuples {
    d: usize,
    next: Option<Vec<Label>>,
}

impl Iterator for LexTuples {
    type Item = Vec<Label>;

    fn next(&mut self) -> Option<Vec<Label>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if advance(self.d, &mut succ) {
            self.next = Some(succ);
        }
        Some(current)
    }
}

/// Non-decreasing sequences of length `m` over `0..n`, in lexicographic order.
/// These index multisets of size `m`.
pub fn multisets(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(n: usize, m: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(n, m, v, cur, out);
            cur.pop();
        }
    }
    rec(n, m, 0, &mut cur, &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// All permutations of `0..m` in lexicographic order.
pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..m).collect();
    loop {
        out.push(perm.clone());
        // next lexicographic permutation
        let Some(i) = (1..m).rev().find(|&i| perm[i - 1] < perm[i]) else {
            break;
        };
        let j = (i..m).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    out
}
